"""Anyon models as data: fusion rings, fusion-tree bases, F/R coherence data and braiding."""

from .braid import (BraidWord, CompileResult, GroupClosureReport, Unitary, braid_generator, compile_gate,
                    evaluate_word, generators, group_closure, measure_pair, phase_distance)
from .coherence import (FSymbols, RSymbols, SolverConfig, export_symbols, hexagon_residual, import_symbols,
                        pentagon_residual, solve_hexagon, solve_pentagon)
from .errors import (AnyonError, DomainError, IncompleteTableError, LeafMismatchError, SolverFailure,
                     SuperselectionError, SymbolFormatError, UnsupportedFeatureError)
from .fusion_ring import FusionRing, Violation, fuse, fuse_word, quantum_dimensions, verify_ring
from .fusion_space import (ChargedState, FusionBasis, FusionTree, HomCategoryIndex, decompose, dim,
                           enumerate_basis, homcat, superpose)
from .model_io import bundled_models, bundled_ring, load_model, parse_model, serialize_model

__version__ = '0.1.0'

__all__ = [
    'AnyonError', 'BraidWord', 'ChargedState', 'CompileResult', 'DomainError', 'FSymbols', 'FusionBasis',
    'FusionRing', 'FusionTree', 'GroupClosureReport', 'HomCategoryIndex', 'IncompleteTableError',
    'LeafMismatchError', 'RSymbols', 'SolverConfig', 'SolverFailure', 'SuperselectionError',
    'SymbolFormatError', 'Unitary', 'UnsupportedFeatureError', 'Violation', 'braid_generator',
    'bundled_models', 'bundled_ring', 'compile_gate', 'decompose', 'dim', 'enumerate_basis',
    'evaluate_word', 'export_symbols', 'fuse', 'fuse_word', 'generators', 'group_closure', 'hexagon_residual',
    'homcat', 'import_symbols', 'load_model', 'measure_pair', 'parse_model', 'pentagon_residual',
    'phase_distance', 'quantum_dimensions', 'serialize_model', 'solve_hexagon', 'solve_pentagon', 'superpose',
    'verify_ring',
]
