"""IC3 model checking for AIGER circuits, with CTP-based lemma prediction."""

from .aiger import AigerModel, AigerParseError, load, parse_aag, parse_aig, write_aag, write_aig
from .certification import Reach, Trace, check_invariant, explicit_reach, replay
from .engine import IC3, Options, Safe, Unknown, Unsafe, check
from .logic import Clause, Cube, diff, negate, subsumes
from .report import RunReport, run_corpus, run_file, success_rates
from .transition_system import TransitionSystem, encode

__all__ = [
    "AigerModel", "AigerParseError", "load", "parse_aag", "parse_aig", "write_aag", "write_aig",
    "Reach", "Trace", "check_invariant", "explicit_reach", "replay",
    "IC3", "Options", "Safe", "Unknown", "Unsafe", "check",
    "Clause", "Cube", "diff", "negate", "subsumes",
    "RunReport", "run_corpus", "run_file", "success_rates",
    "TransitionSystem", "encode",
]
__version__ = "0.1.0"
