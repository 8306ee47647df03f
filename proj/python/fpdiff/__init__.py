"""Differential floating-point testing toolkit.

The compiled core lives in ``fpdiff._fpdiff``. Programs, configs, metadata
and comparison files cross the boundary as JSON; the helpers here accept
and return plain dicts.
"""

import json as _json

from . import _fpdiff
from ._fpdiff import (
    FpdiffError,
    Outcome,
    compare_outcomes,
    format_percentage,
    hexfloat,
    hipify_lite,
    parse_outcome,
    smallest_normal,
)

__all__ = [
    "FpdiffError",
    "Outcome",
    "ast_signature",
    "build_command",
    "compare_outcomes",
    "default_config",
    "default_registry",
    "emit_source",
    "format_percentage",
    "generate_inputs",
    "generate_program",
    "hexfloat",
    "hipify_lite",
    "interpret",
    "merge",
    "parse_outcome",
    "report",
    "smallest_normal",
]


def _text(doc):
    return doc if isinstance(doc, str) else _json.dumps(doc)


def default_config(precision="fp64", seed=0):
    return _json.loads(_fpdiff.default_config(precision, seed))


def generate_program(config=None, *, precision="fp64", seed=0, **overrides):
    """AST dict of a generated program. ``overrides`` patch config fields."""
    cfg = dict(config) if config is not None else default_config(precision, seed)
    cfg.update(overrides)
    return _json.loads(_fpdiff.generate_program(_json.dumps(cfg)))


def ast_signature(ast):
    return _fpdiff.ast_signature(_text(ast))


def emit_source(ast, dialect="c"):
    return _fpdiff.emit_source(_text(ast), dialect)


def generate_inputs(ast, count, seed=0):
    return _fpdiff.generate_inputs(_text(ast), count, seed)


def interpret(ast, args, wide_fp32_intermediates=False):
    """(hexfloat, Outcome) of the strict IEEE evaluation on one input."""
    return _fpdiff.interpret(_text(ast), list(args), wide_fp32_intermediates)


def default_registry():
    return _json.loads(_fpdiff.default_registry())


def build_command(compiler, level, src, out, registry=None):
    reg = None if registry is None else _text(registry)
    return _fpdiff.build_command(compiler, level, src, out, reg)


def merge(a, b, cross_level=None, compiler_a=None, compiler_b=None, tolerance=0.0):
    """Comparison dict from two campaign metadata documents (dicts or JSON text)."""
    return _json.loads(_fpdiff.merge(_text(a), _text(b), cross_level, compiler_a, compiler_b, tolerance))


def report(comparisons, format="json"):
    out = _fpdiff.report(_text(comparisons), format)
    return _json.loads(out) if format == "json" else out
