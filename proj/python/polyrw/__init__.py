"""Rewriting on string diagrams of 3-polygraphs."""
import json

from ._polyrw import (
    Diagram,
    Error,
    ParseError,
    Polygraph,
    TypeError,
    equal_up_to_exchange,
    is_normal,
    load,
    normalize,
    parse,
    run,
)
from . import _polyrw


def certificate(polygraph, cert):
    return json.loads(_polyrw.certificate_json(polygraph, cert))


def fdt_report(polygraph, cert="", size_bound=4, width_bound=4):
    return json.loads(_polyrw.fdt_json(polygraph, cert, size_bound, width_bound))


def word_report(polygraph, cert=""):
    return json.loads(_polyrw.word_report_json(polygraph, cert))


__all__ = [
    "Diagram", "Error", "ParseError", "Polygraph", "TypeError", "certificate", "equal_up_to_exchange",
    "fdt_report", "is_normal", "load", "normalize", "parse", "run", "word_report",
]
