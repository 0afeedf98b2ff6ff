"""Exact classification of normed spaces of dimension at most 4 over a field with holes."""

from .classify import ALL_LABELS, TypeLabel, classify, dual_type, isometric, parse_label, se
from .kvmodel import Catalog, KvElement, dist_to_K, kv_norm, parse_element
from .spaces import SpacePresentation, decompose, distance, dual, make_space, quotient
from .valgroup import NormValue, parse_exponent
from .witness import build_witness, witness_space

__version__ = "0.1.0"

__all__ = [
    "ALL_LABELS",
    "TypeLabel",
    "classify",
    "dual_type",
    "isometric",
    "parse_label",
    "se",
    "Catalog",
    "KvElement",
    "dist_to_K",
    "kv_norm",
    "parse_element",
    "SpacePresentation",
    "decompose",
    "distance",
    "dual",
    "make_space",
    "quotient",
    "NormValue",
    "parse_exponent",
    "build_witness",
    "witness_space",
]
