"""Exact tools for codegree Turan problems on 3-graphs, centred on F32."""

from .errors import CapabilityError, CertificateError, PreconditionError, ValidationError
from .graphs import (
    F32,
    RootedGraph,
    ThreeGraph,
    blow_up,
    canonical_form,
    codegree,
    contains,
    encode,
    is_f32_free,
    joint_neighbourhood,
    min_codegree,
    named_graph,
    parse_flag,
    parse_graph,
    rooted_canonical_form,
)

__all__ = [
    "CapabilityError", "CertificateError", "PreconditionError", "ValidationError",
    "F32", "RootedGraph", "ThreeGraph", "blow_up", "canonical_form", "codegree", "contains",
    "encode", "is_f32_free", "joint_neighbourhood", "min_codegree", "named_graph",
    "parse_flag", "parse_graph", "rooted_canonical_form",
]
