"""Certified computations for rigidity sequences, IP sets and singular measures."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import ConfigError, RiglabError
from .exact import CertifiedReal, ComplexBall, dist_to_int, format_rational, nearest_int, parse_rational, signed_frac
from .seq import IndexRule, SequencePrefix, SequenceSpec, classify, generate, prefix_of

__all__ = [
    "__version__",
    "CertifiedReal",
    "ComplexBall",
    "ConfigError",
    "IndexRule",
    "RiglabError",
    "SequencePrefix",
    "SequenceSpec",
    "classify",
    "dist_to_int",
    "format_rational",
    "generate",
    "nearest_int",
    "parse_rational",
    "prefix_of",
    "signed_frac",
]
