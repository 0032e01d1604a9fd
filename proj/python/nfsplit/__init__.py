"""Python front end for the nfsplit library."""

import json

from ._nfsplit import (
    Error,
    NoDecomposition,
    NonFinite,
    NotInNormalForm,
    NotInvariant,
    ParseError,
    RewriteFailure,
    StructuralError,
    decompose,
    invariance_relations,
    is_resonant,
    normalize_spec,
    run,
    sporadic_resonances,
)


def report(spec_text, stage="verify", degree_bound=None):
    """Pipeline report as a dict."""
    return json.loads(run(spec_text, stage=stage, format="machine", degree_bound=degree_bound))


__all__ = [
    "Error",
    "NoDecomposition",
    "NonFinite",
    "NotInNormalForm",
    "NotInvariant",
    "ParseError",
    "RewriteFailure",
    "StructuralError",
    "decompose",
    "invariance_relations",
    "is_resonant",
    "normalize_spec",
    "report",
    "run",
    "sporadic_resonances",
]
