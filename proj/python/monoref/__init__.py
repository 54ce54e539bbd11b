"""Monotonic and guarded references for a gradually typed language."""

from ._monoref import DEFAULT_FUEL, ParseError, TypeCheckError, check, compile, diff, run

__all__ = ["DEFAULT_FUEL", "ParseError", "TypeCheckError", "check", "compile", "diff", "run"]
