from .errors import UEntropyError
from .extreal import ExtReal, POS_INF, NEG_INF
from .utility import (
    UtilitySpec, IsoelasticParams, TransformParams, make_builtin, logarithmic, isoelastic,
    custom_utility, affine, rescale, transform, convex_dual, asymptotic_elasticity, check_inada,
)
from .solver import SolveConfig, LambdaSolution, solve_lambda, maximize_concave_1d
from .entropy import (
    ProbVector, Decomposition, EntropyReport, n_u, h_u, lebesgue_decompose,
    relative_N, relative_H, brute_force_n_u, density_entropy,
)

__all__ = [
    'UEntropyError', 'ExtReal', 'POS_INF', 'NEG_INF',
    'UtilitySpec', 'IsoelasticParams', 'TransformParams', 'make_builtin', 'logarithmic',
    'isoelastic', 'custom_utility', 'affine', 'rescale', 'transform', 'convex_dual',
    'asymptotic_elasticity', 'check_inada',
    'SolveConfig', 'LambdaSolution', 'solve_lambda', 'maximize_concave_1d',
    'ProbVector', 'Decomposition', 'EntropyReport', 'n_u', 'h_u', 'lebesgue_decompose',
    'relative_N', 'relative_H', 'brute_force_n_u', 'density_entropy',
]
