from typing import Optional

from core.entropy import ProbVector, n_u
from core.errors import NotNormalized
from core.extreal import ExtReal
from core.solver import SolveConfig
from core.utility import UtilitySpec, affine, transform

__all__ = ["arimoto", "NORMALIZATION_SLACK"]

NORMALIZATION_SLACK = 1e-12


def arimoto(u: UtilitySpec, p: ProbVector, cfg: Optional[SolveConfig] = None,
            auto_normalize: bool = False) -> ExtReal:
    """Arimoto entropy with uncertainty function -u, i.e. -n_u(p). Needs u(1) = 0."""
    u_one = float(u.eval(1.0))
    if abs(u_one) > NORMALIZATION_SLACK:
        if not auto_normalize:
            raise NotNormalized(f"{u.label} has u(1) = {u_one!r}; apply affine(1, {-u_one!r}) first")
        u = transform(u, affine(1.0, -u_one))
    value, _, _ = n_u(u, p, cfg)
    return -value
