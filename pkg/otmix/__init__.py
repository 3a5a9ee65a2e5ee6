"""
Cross-modal sequence alignment with relaxed optimal transport.

otmix aligns a speech embedding sequence to a text embedding sequence by
sending each speech token's mass to its closest text token inside a diagonal
window, mixes both sequences at the token level along that alignment, and
ships the reference OT solvers, metrics and losses used to evaluate it.
"""
__author__ = "Fábio Mendes"
__version__ = "0.1.0"

from . import pandas as _pandas_mod
from .types import *
from .errors import *
from .sequences import masses_from_norms, read_sequence, write_sequence
from .cost import cost_matrix
from .relaxed import solve_relaxed, extract_alignment, window_bounds, relaxed_grad
from .relaxed import relaxed_align
from .exact import solve_exact, exact_align
from .mixup import mixup, mixup_batch
from .metrics import a_score, modality_gap, GapReport
from .losses import cross_entropy, symmetric_kl, symmetric_kl_grad, total_objective
from .losses import TokenDistributionSequence
from .constants import *
