"""Critical values and survivor sets of beta-transformations with a hole at 0."""
from .errors import (BoundaryFlag, BsurvError, DomainError, ParseError, PrecisionError,
                     ResourceError, Undecided)
from .sequences import PeriodicSeq, format_word, parse_word
from .expansions import BetaEnclosure, ValueEnclosure, alpha_inverse, eval_pi, parse_beta
from .intervals import classify, endpoints
from .critical import komornik_loreti, staircase, tau
from .survivor import bifurcation_member, dim_survivor, isolated_construction
from .holes import HoleSystem, bridge

__version__ = "0.1.0"

__all__ = [
    "BoundaryFlag", "BsurvError", "DomainError", "ParseError", "PrecisionError",
    "ResourceError", "Undecided",
    "PeriodicSeq", "format_word", "parse_word",
    "BetaEnclosure", "ValueEnclosure", "alpha_inverse", "eval_pi", "parse_beta",
    "classify", "endpoints",
    "komornik_loreti", "staircase", "tau",
    "bifurcation_member", "dim_survivor", "isolated_construction",
    "HoleSystem", "bridge",
]
