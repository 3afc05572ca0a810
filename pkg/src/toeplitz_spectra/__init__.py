"""Análise espectral de matrizes de Toeplitz bidiagonais e de suas perturbações gaussianas."""

__version__ = "0.1.0"

from .config import RunConfig, build_run_config, format_complex, load_config, parse_complex
from .counting import ArcRegion, CountReport, MembershipMode, eigenvalue_count_mc, weyl_count
from .errors import ConfigError, GateViolation, NumericalError, RegimeError, ToeplitzSpectraError
from .grushin import GrushinInverse, build_calP, grushin_inverse_closed_form
from .numerics import RngStream, eig
from .perturbation import PerturbationConfig, TrialResult, run_trials
from .symbol import Case, CharRoots, SymbolParams, char_roots_I, char_roots_II
from .toeplitz import OperatorSpec, build_P

__all__ = [
    "ArcRegion",
    "Case",
    "CharRoots",
    "ConfigError",
    "CountReport",
    "GateViolation",
    "GrushinInverse",
    "MembershipMode",
    "NumericalError",
    "OperatorSpec",
    "PerturbationConfig",
    "RegimeError",
    "RngStream",
    "RunConfig",
    "SymbolParams",
    "ToeplitzSpectraError",
    "TrialResult",
    "build_P",
    "build_calP",
    "build_run_config",
    "char_roots_I",
    "char_roots_II",
    "eig",
    "format_complex",
    "grushin_inverse_closed_form",
    "load_config",
    "parse_complex",
    "run_trials",
    "eigenvalue_count_mc",
    "weyl_count",
]
