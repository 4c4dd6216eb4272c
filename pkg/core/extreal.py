import math
from enum import Enum
from functools import total_ordering
from typing import Union

from core.errors import UndefinedArithmetic

__all__ = ["ExtReal", "Kind", "POS_INF", "NEG_INF", "ZERO"]


class Kind(Enum):
    FINITE = "finite"
    POS_INF = "+inf"
    NEG_INF = "-inf"


@total_ordering
class ExtReal:
    """
    Value in [-inf, +inf] with its own infinity states.

    Products follow the measure-theory convention inf * 0 = -inf * 0 = 0,
    which IEEE floats do not (they give nan).
    """

    __slots__ = ("kind", "value")

    def __init__(self, kind: Kind, value: float = 0.0):
        if kind is Kind.FINITE:
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"finite ExtReal needs a finite float, got {value}")
        else:
            value = math.inf if kind is Kind.POS_INF else -math.inf
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("ExtReal is immutable")

    # --- constructors ---
    @classmethod
    def finite(cls, x: float) -> "ExtReal":
        return cls(Kind.FINITE, x)

    @classmethod
    def of(cls, x: "Number") -> "ExtReal":
        if isinstance(x, ExtReal):
            return x
        x = float(x)
        if math.isnan(x):
            raise UndefinedArithmetic("nan has no extended-real value")
        if x == math.inf:
            return POS_INF
        if x == -math.inf:
            return NEG_INF
        return cls(Kind.FINITE, x)

    # --- state ---
    @property
    def is_finite(self) -> bool:
        return self.kind is Kind.FINITE

    @property
    def is_pos_inf(self) -> bool:
        return self.kind is Kind.POS_INF

    @property
    def is_neg_inf(self) -> bool:
        return self.kind is Kind.NEG_INF

    # --- arithmetic ---
    def __neg__(self) -> "ExtReal":
        if self.kind is Kind.POS_INF:
            return NEG_INF
        if self.kind is Kind.NEG_INF:
            return POS_INF
        return ExtReal.finite(-self.value)

    def __add__(self, other: "Number") -> "ExtReal":
        other = ExtReal.of(other)
        if self.is_finite and other.is_finite:
            return ExtReal.finite(self.value + other.value)
        if self.is_finite:
            return other
        if other.is_finite or other.kind is self.kind:
            return self
        raise UndefinedArithmetic("inf - inf is undefined")

    __radd__ = __add__

    def __sub__(self, other: "Number") -> "ExtReal":
        return self + (-ExtReal.of(other))

    def __rsub__(self, other: "Number") -> "ExtReal":
        return ExtReal.of(other) + (-self)

    def __mul__(self, other: "Number") -> "ExtReal":
        other = ExtReal.of(other)
        if self.is_finite and other.is_finite:
            return ExtReal.finite(self.value * other.value)
        # inf * 0 = 0
        if (self.is_finite and self.value == 0.0) or (other.is_finite and other.value == 0.0):
            return ZERO
        positive = (self.value > 0) == (other.value > 0)
        return POS_INF if positive else NEG_INF

    __rmul__ = __mul__

    # --- comparison ---
    def __eq__(self, other) -> bool:
        try:
            other = ExtReal.of(other)
        except (TypeError, ValueError, UndefinedArithmetic):
            return NotImplemented
        return self.kind is other.kind and self.value == other.value

    def __lt__(self, other) -> bool:
        other = ExtReal.of(other)
        return self.value < other.value

    def __hash__(self) -> int:
        return hash((self.kind, self.value))

    # --- conversion ---
    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        if self.is_finite:
            return f"ExtReal({self.value!r})"
        return f"ExtReal({self.kind.value})"

    def __str__(self) -> str:
        if self.is_pos_inf:
            return "inf"
        if self.is_neg_inf:
            return "-inf"
        return repr(self.value)


Number = Union[ExtReal, float, int]

POS_INF = ExtReal(Kind.POS_INF)
NEG_INF = ExtReal(Kind.NEG_INF)
ZERO = ExtReal(Kind.FINITE, 0.0)
