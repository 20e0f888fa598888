"""Parallel-style context-free recognition engines with a serial CYK oracle."""

from .bfvp import (PostfixFormula, build_tree, compute_facts, infix_to_postfix, recognize_bfvp,
                   well_formed)
from .errors import *  # noqa: F401,F403
from .estimators import CFGRecognizer
from .general import recognize as recognize_general
from .grammar import (Cfg, Production, Symbol, check_linear, load_grammar, parse_grammar,
                      remove_useless, to_cnf)
from .items import Item, SlashedItem, Truth3, and3, not3, or3
from .oracle import count_parses, cyk_recognize, extract_parse, jordan_separator
from .path_system import recognize_linear, recognize_unambiguous
from .report import ResourceReport
from .sampler import get_spec, make_dataset, sample_negative, sample_positive

__version__ = "0.1.0"
