from .classical import OrderAlpha, shannon, renyi, sharma_mittal
from .fhs import fhs_relative, fhs_relative_by_definition, fhs_entropy
from .arimoto import arimoto
from .frittelli import FrittelliResult, frittelli

__all__ = [
    'OrderAlpha',
    'shannon',
    'renyi',
    'sharma_mittal',
    'fhs_relative',
    'fhs_relative_by_definition',
    'fhs_entropy',
    'arimoto',
    'FrittelliResult',
    'frittelli'
]
