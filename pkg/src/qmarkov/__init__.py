"""Exact computation with quasi Markov interval functions and their inverse limits."""

from __future__ import annotations

from .conjugacy import Conjugacy, conj_build, conj_eval, conj_eval_inverse, conj_verify, verification_grid
from .errors import QMarkovError
from .inverse_limit import (
    EmptinessVerdict,
    Thread,
    il_detect_empty,
    il_fixed_thread,
    il_image_chain,
    il_map_thread,
    il_sample_threads,
    verify_certificate,
)
from .markov_set import GeometricTail, MarkovSet, OrderIso, ms_component, ms_contains, ms_enumerate, ms_order_iso, ms_validate
from .numerics import AffineMap, FlaggedInterval, IntervalUnion, affine_apply, affine_invert, rat, union_intersect, union_normalize
from .pattern import InverseSequenceSpec, Level, PatternWitness, pattern_tau, pattern_verify, pattern_witness_constant
from .qm_function import Piece, QuasiMarkovFunction, piecewise_linear, qmf_eval, qmf_generate_pair, qmf_limit, qmf_verify_pair

__version__ = "0.1.0"
