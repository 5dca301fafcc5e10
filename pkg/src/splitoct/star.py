"""David's Star incidence structure of the split-octonion units.

The seven hypercomplex units and their seven "lines" (associative triples)
form a Fano plane.  The three ``I`` corners of the star drawing are one node
here.  Edge orientation is read off the structure table: an edge ``a -> b``
labelled ``c`` means ``a * b = +c``; walking it backwards gives ``-c``.
"""

from __future__ import annotations

import csv
import functools
import io
import itertools
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .algebra import STRUCTURE_TABLE, UNIT_NAMES, Octonion, associator

IMAGINARY = tuple(range(1, 8))


@dataclass(frozen=True)
class TripleClassification:
    triple: tuple[int, int, int]
    kind: Literal["associative", "anti-associative"]
    associator_witness: Octonion

    @property
    def names(self) -> tuple[str, str, str]:
        return tuple(UNIT_NAMES[i] for i in self.triple)  # type: ignore[return-value]


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    product: int  # a * b = +product

    def as_names(self) -> tuple[str, str, str]:
        return UNIT_NAMES[self.tail], UNIT_NAMES[self.head], UNIT_NAMES[self.product]


@dataclass(frozen=True)
class StarGraph:
    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]
    lines: tuple[tuple[int, int, int], ...]


def _classify(triple: tuple[int, int, int]) -> TripleClassification:
    units = [Octonion.unit(i) for i in triple]
    witness = associator(*units)
    vanishes = all(
        not np.any(associator(*(units[k] for k in order)).coeff)
        for order in itertools.permutations(range(3))
    )
    kind = "associative" if vanishes else "anti-associative"
    return TripleClassification(triple, kind, witness)


def classify_triples() -> list[TripleClassification]:
    """All 35 unordered triples of distinct hypercomplex units, lexicographic."""
    return [_classify(t) for t in itertools.combinations(IMAGINARY, 3)]


def is_anti_associative(triple) -> bool:
    """True when ``(ab)c = -a(bc)`` for every ordering of the three units."""
    units = [Octonion.unit(i) for i in triple]
    for a, b, c in itertools.permutations(units):
        if not np.array_equal(((a * b) * c).coeff, -(a * (b * c)).coeff):
            return False
    return True


@functools.lru_cache(maxsize=None)
def _lines() -> tuple[tuple[int, int, int], ...]:
    return tuple(c.triple for c in classify_triples() if c.kind == "associative")


def lines() -> list[tuple[int, int, int]]:
    """The seven associative triples, lexicographic by index."""
    return list(_lines())


def lines_through(unit: int) -> list[tuple[int, int, int]]:
    return [line for line in lines() if unit in line]


def third_on_line(a: int, b: int) -> int:
    """The unit completing the line through ``a`` and ``b``."""
    for line in lines():
        if a in line and b in line and a != b:
            return next(u for u in line if u not in (a, b))
    raise ValueError(f"no line through units {a} and {b}")


def star_graph() -> StarGraph:
    edges = []
    ls = lines()
    for line in ls:
        for a, b in itertools.combinations(line, 2):
            sign, k = STRUCTURE_TABLE[a][b]
            edges.append(Edge(a, b, k) if sign > 0 else Edge(b, a, k))
    return StarGraph(IMAGINARY, tuple(edges), tuple(ls))


def export_dot() -> str:
    """Graphviz description of the star; identical bytes on every call."""
    g = star_graph()
    out = ["digraph split_octonion_star {", '  graph [label="split octonion products"];',
           "  node [shape=circle];"]
    for n in g.nodes:
        out.append(f'  "{UNIT_NAMES[n]}";')
    for line in g.lines:
        names = " ".join(UNIT_NAMES[u] for u in line)
        out.append(f"  // line {names}")
        for e in g.edges:
            if e.tail in line and e.head in line:
                tail, head, prod = e.as_names()
                out.append(f'  "{tail}" -> "{head}" [label="{prod}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def parse_dot_edges(text: str) -> list[tuple[str, str, str]]:
    """Read back ``(tail, head, label)`` triples from :func:`export_dot` output."""
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if "->" not in line:
            continue
        left, right = line.split("->", 1)
        head, attrs = right.split("[", 1)
        label = attrs.split('label="', 1)[1].split('"', 1)[0]
        edges.append((left.strip().strip('"'), head.strip().strip('"'), label))
    return edges


def _cell(a: int, b: int) -> str:
    sign, k = STRUCTURE_TABLE[a][b]
    return ("+" if sign > 0 else "-") + UNIT_NAMES[k]


def render_table(format: str = "text") -> str:
    """The 8x8 product table; row unit times column unit."""
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(["*", *UNIT_NAMES])
        for a in range(8):
            writer.writerow([UNIT_NAMES[a], *(_cell(a, b) for b in range(8))])
        return buf.getvalue()
    if format == "text":
        width = 4
        rows = ["*".rjust(width) + " |" + "".join(n.rjust(width) for n in UNIT_NAMES)]
        rows.append("-" * (width + 2 + width * 8))
        for a in range(8):
            rows.append(UNIT_NAMES[a].rjust(width) + " |"
                        + "".join(_cell(a, b).rjust(width) for b in range(8)))
        return "\n".join(rows) + "\n"
    raise ValueError(f"unknown table format {format!r}; use 'text' or 'csv'")
