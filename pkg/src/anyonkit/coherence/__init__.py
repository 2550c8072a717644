"""F/R symbol tables, coherence residuals and the numerical solvers."""

from .residuals import hexagon_residual, pentagon_residual, r_modulus_deviation, unitarity_deviation
from .solver import (SolveReport, SolverConfig, canonical_gauge, solve_hexagon, solve_pentagon,
                     vacuum_reduced_blocks)
from .symbols import (FSymbols, RSymbols, export_symbols, f_blocks, f_keys, gauge_transform, import_symbols,
                      r_keys, random_gauge)

__all__ = [
    'FSymbols', 'RSymbols', 'SolveReport', 'SolverConfig', 'canonical_gauge', 'export_symbols', 'f_blocks',
    'f_keys', 'gauge_transform', 'hexagon_residual', 'import_symbols', 'pentagon_residual', 'r_keys',
    'r_modulus_deviation', 'random_gauge', 'solve_hexagon', 'solve_pentagon', 'unitarity_deviation',
    'vacuum_reduced_blocks',
]
