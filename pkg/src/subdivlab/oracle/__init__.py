"""Brute-force ground truth: containment, extremal numbers, lemma checkers."""

from .containment import Containment, PatternMatcher, Verdict, contains_subdivision, contains_subgraph
from .extremal import ExtremalRecord, extremal_number
from .lemmas import (
    LemmaReport,
    check_lightcorollary,
    check_locallydense,
    check_manylight,
    check_turan_step,
    count_light_pairs,
)

__all__ = [
    "Containment",
    "PatternMatcher",
    "Verdict",
    "contains_subdivision",
    "contains_subgraph",
    "ExtremalRecord",
    "extremal_number",
    "LemmaReport",
    "check_lightcorollary",
    "check_locallydense",
    "check_manylight",
    "check_turan_step",
    "count_light_pairs",
]
