"""Parsers for the flat key=value input files used by the CLI.

Two dialects share one syntax: surface configuration files (sections define
catalog entries or parameter overrides) and symbol specification files
(sections define homogeneous components of a matrix-valued symbol).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import catalog
from .psdo import ClassicalSymbol, HomogeneousComponent

__all__ = ["ParseError", "parse_sections", "load_symbol", "load_surfaces"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class Section:
    header: str
    line: int
    entries: dict = field(default_factory=dict)


def parse_sections(text: str) -> tuple[dict, list[Section]]:
    """Parse `key = value` lines grouped under `[header ...]` sections.

    Returns (top-level entries, sections).  Comments start with '#'.
    """
    top: dict = {}
    sections: list[Section] = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError("unterminated section header", lineno, len(raw))
            current = Section(header=line[1:-1].strip(), line=lineno)
            sections.append(current)
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ParseError("empty key", lineno)
        target = top if current is None else current.entries
        target[key] = (value, lineno)
    return top, sections


def _parse_matrix(text: str, line: int) -> np.ndarray:
    rows = [r for r in text.split(";") if r.strip()]
    try:
        mat = np.array([[complex(v) for v in row.split()] for row in rows])
    except ValueError as exc:
        raise ParseError(f"bad matrix entry ({exc})", line) from None
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ParseError("matrix must be square", line)
    return mat


def _component_values(entries: dict, prefix: str, dim: int, grid: int, line: int) -> np.ndarray:
    """Constant matrix plus optional cos/sin Fourier terms, sampled on the
    periodic grid."""
    x = 2.0 * np.pi * np.arange(grid) / grid
    values = np.zeros((grid, dim, dim), dtype=complex)
    seen = False
    for key, (text, lineno) in entries.items():
        if key == prefix:
            values += _parse_matrix(text, lineno)[None, :, :]
            seen = True
        elif key.startswith(prefix + "_cos"):
            n = int(key[len(prefix) + 4:])
            values += np.cos(n * x)[:, None, None] * _parse_matrix(text, lineno)
            seen = True
        elif key.startswith(prefix + "_sin"):
            n = int(key[len(prefix) + 4:])
            values += np.sin(n * x)[:, None, None] * _parse_matrix(text, lineno)
            seen = True
    if not seen:
        raise ParseError(f"component is missing a {prefix!r} matrix", line)
    return values


def load_symbol(text: str, grid: int = 64) -> ClassicalSymbol:
    """Build a ClassicalSymbol from a symbol specification file.

    Top level: order, dim, optional grid.  Each `[component degree=D]`
    section gives plus/minus matrices with optional `_cos<n>` / `_sin<n>`
    Fourier terms.
    """
    top, sections = parse_sections(text)
    try:
        order = Fraction((top["order"][0]))
        dim = int(top["dim"][0])
    except KeyError as exc:
        raise ParseError(f"missing top-level key {exc.args[0]!r}", 1) from None
    if "grid" in top:
        grid = int(top["grid"][0])

    by_degree: dict[Fraction, Section] = {}
    for sec in sections:
        parts = sec.header.split()
        if parts[0] != "component":
            raise ParseError(f"unknown section {parts[0]!r}", sec.line)
        kv = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
        if "degree" not in kv:
            raise ParseError("component section needs degree=", sec.line)
        by_degree[Fraction(kv["degree"])] = sec

    if not by_degree:
        raise ParseError("no components defined", 1)
    depth = int(order - min(by_degree)) + 1
    zero = np.zeros((grid, dim, dim), dtype=complex)
    comps = []
    for j in range(depth):
        degree = order - j
        sec = by_degree.get(degree)
        if sec is None:
            comps.append(HomogeneousComponent(degree, zero, zero))
        else:
            comps.append(
                HomogeneousComponent(
                    degree,
                    _component_values(sec.entries, "plus", dim, grid, sec.line),
                    _component_values(sec.entries, "minus", dim, grid, sec.line),
                )
            )
    return ClassicalSymbol(order, tuple(comps))


def load_surfaces(text: str) -> dict[str, catalog.KahlerSurface]:
    """Surface entries from a configuration file.

    Each `[surface NAME]` section has a `type` in {t4, cp2, cp1xcp1,
    generic} plus the parameters that type requires.
    """
    _, sections = parse_sections(text)
    out: dict[str, catalog.KahlerSurface] = {}
    for sec in sections:
        parts = sec.header.split()
        if parts[0] != "surface" or len(parts) != 2:
            raise ParseError("expected '[surface NAME]'", sec.line)
        name = parts[1]
        entries = {k: v for k, (v, _) in sec.entries.items()}
        stype = entries.get("type")
        try:
            if stype == "t4":
                surf = catalog.flat_torus()
            elif stype == "cp2":
                surf = catalog.cp2_fubini_study()
            elif stype == "cp1xcp1":
                surf = catalog.product_cp1(int(entries["a"]), int(entries["b"]))
            elif stype == "generic":
                surf = catalog.generic_bounds(
                    int(entries["sigma"]),
                    float(entries["vol"]),
                    float(entries["r_inf"]),
                    name=name,
                )
            else:
                raise ParseError(f"unknown surface type {stype!r}", sec.line)
        except KeyError as exc:
            raise ParseError(
                f"surface type {stype!r} needs key {exc.args[0]!r}", sec.line
            ) from None
        out[name] = surf
    return out
