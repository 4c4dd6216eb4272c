from typing import List

from core.errors import DescriptorError
from core.utility import UtilitySpec, affine, isoelastic, logarithmic, rescale, transform

__all__ = ["parse_utility", "parse_utilities"]


def _number(token: str, descriptor: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise DescriptorError(f"bad number {token!r} in utility descriptor {descriptor!r}") from None


def _parse(parts: List[str], descriptor: str) -> UtilitySpec:
    if not parts or not parts[0]:
        raise DescriptorError(f"empty utility descriptor {descriptor!r}")
    head = parts[0].lower()
    if head == 'log':
        if len(parts) != 1:
            raise DescriptorError(f"'log' takes no arguments: {descriptor!r}")
        return logarithmic()
    if head == 'iso':
        if len(parts) != 2:
            raise DescriptorError(f"expected iso:<gamma>, got {descriptor!r}")
        return isoelastic(_number(parts[1], descriptor))
    if head == 'affine':
        if len(parts) < 4:
            raise DescriptorError(f"expected affine:<a>:<b>:<inner>, got {descriptor!r}")
        a, b = _number(parts[1], descriptor), _number(parts[2], descriptor)
        return transform(_parse(parts[3:], descriptor), affine(a, b))
    if head == 'rescale':
        if len(parts) < 3:
            raise DescriptorError(f"expected rescale:<k>:<inner>, got {descriptor!r}")
        return transform(_parse(parts[2:], descriptor), rescale(_number(parts[1], descriptor)))
    raise DescriptorError(f"unknown utility {head!r} in {descriptor!r}")


def parse_utility(descriptor: str) -> UtilitySpec:
    """`log`, `iso:<gamma>`, `affine:<a>:<b>:<inner>`, `rescale:<k>:<inner>`."""
    return _parse(descriptor.strip().split(':'), descriptor)


def parse_utilities(descriptors: List[str]) -> List[UtilitySpec]:
    return [parse_utility(d) for d in descriptors]
