"""Line-oriented text documents for skeletons, level data and family descriptors.

Grammar (``#`` starts a comment; blank lines are ignored)::

    [levels]
    <level>: <cycle length> <cycle length> ...
    [edges]
    <id> <level>.<cycle>.<position> <- <level>.<cycle>.<position>
    [squares]
    <id> -> <id>
    [data]
    T <level>: <t_1> ... <t_c>
    A <level>: <row> ; <row> ; ...
    B <level>: <row> ; <row> ; ...
    [family]
    <key> = <value>

An edge line gives the range vertex first and the source vertex after
``<-``; cycles are 1-based, positions 0-based.  A square line ``e -> f``
means ``F(e) = f``.  ``[levels]``, ``[edges]`` and ``[squares]`` describe a
skeleton and must appear together; ``[data]`` and ``[family]`` are
independent.  Parsing checks syntax and references only; the gbd axioms
are left to :func:`gbd.skeleton.validate_gbd`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .leveldata import LevelData
from .skeleton import BlueEdge, GbdSkeleton, StructuralError, Vertex

SECTIONS = ("levels", "edges", "squares", "data", "family")

_VERTEX = r"(\d+)\.(\d+)\.(\d+)"
_EDGE = re.compile(rf"^(\S+)\s+{_VERTEX}\s*<-\s*{_VERTEX}\s*$")
_SQUARE = re.compile(r"^(\S+)\s*->\s*(\S+)\s*$")
_LEVEL = re.compile(r"^(\d+)\s*:\s*(.*)$")
_DATA = re.compile(r"^([TAB])\s*(\d+)\s*:\s*(.*)$")
_FAMILY = re.compile(r"^([A-Za-z_][\w-]*)\s*=\s*(.*)$")


class DocumentError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line, self.column = line, column


@dataclass(frozen=True)
class Document:
    skeleton: GbdSkeleton | None = None
    data: LevelData | None = None
    family: dict | None = None


def _ints(text: str, line: int, column: int) -> list[int]:
    out = []
    for m in re.finditer(r"\S+", text):
        if not re.fullmatch(r"-?\d+", m.group()):
            raise DocumentError(f"expected an integer, found {m.group()!r}", line, column + m.start())
        out.append(int(m.group()))
    return out


def parse_document(text: str) -> Document:
    section = None
    seen: set[str] = set()
    levels: dict[int, list[int]] = {}
    edges: list[tuple[BlueEdge, int]] = []
    squares: dict[str, str] = {}
    square_line: dict[str, int] = {}
    T: dict[int, list[int]] = {}
    maps: dict[str, dict[int, list[list[int]]]] = {"A": {}, "B": {}}
    family: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col = body.index(stripped[0]) + 1
        if stripped.startswith("["):
            m = re.fullmatch(r"\[(\w+)\]", stripped)
            if not m or m.group(1) not in SECTIONS:
                raise DocumentError(f"unknown section header {stripped!r}", lineno, col)
            section = m.group(1)
            if section in seen:
                raise DocumentError(f"section [{section}] appears twice", lineno, col)
            seen.add(section)
            continue
        if section is None:
            raise DocumentError("content before the first section header", lineno, col)
        if section == "levels":
            m = _LEVEL.match(stripped)
            if not m:
                raise DocumentError("expected '<level>: <cycle lengths>'", lineno, col)
            n = int(m.group(1))
            if n in levels:
                raise DocumentError(f"level {n} listed twice", lineno, col)
            levels[n] = _ints(m.group(2), lineno, col + m.start(2))
        elif section == "edges":
            m = _EDGE.match(stripped)
            if not m:
                raise DocumentError("expected '<id> <level>.<cycle>.<pos> <- <level>.<cycle>.<pos>'", lineno, col)
            g = [int(x) for x in m.groups()[1:]]
            edges.append((BlueEdge(m.group(1), Vertex(*g[:3]), Vertex(*g[3:])), lineno))
        elif section == "squares":
            m = _SQUARE.match(stripped)
            if not m:
                raise DocumentError("expected '<id> -> <id>'", lineno, col)
            if m.group(1) in squares:
                raise DocumentError(f"edge {m.group(1)!r} has two squares", lineno, col)
            squares[m.group(1)] = m.group(2)
            square_line[m.group(1)] = lineno
        elif section == "data":
            m = _DATA.match(stripped)
            if not m:
                raise DocumentError("expected 'T|A|B <level>: ...'", lineno, col)
            kind, n, rest = m.group(1), int(m.group(2)), m.group(3)
            if kind == "T":
                T[n] = _ints(rest, lineno, col + m.start(3))
            else:
                rows, offset = [], col + m.start(3)
                for part in rest.split(";"):
                    rows.append(_ints(part, lineno, offset))
                    offset += len(part) + 1
                maps[kind][n] = rows
        else:
            m = _FAMILY.match(stripped)
            if not m:
                raise DocumentError("expected '<key> = <value>'", lineno, col)
            family[m.group(1)] = m.group(2).strip()

    skeleton = None
    skel_parts = {"levels", "edges", "squares"} & seen
    if skel_parts:
        if skel_parts != {"levels", "edges", "squares"}:
            missing = sorted({"levels", "edges", "squares"} - seen)
            raise DocumentError(f"skeleton sections missing: {', '.join(missing)}")
        if sorted(levels) != list(range(len(levels))):
            raise DocumentError("levels must be numbered 0, 1, 2, ... without gaps")
        ids = [e.id for e, _ in edges]
        if len(set(ids)) != len(ids):
            dup = next(x for x in ids if ids.count(x) > 1)
            raise DocumentError(f"edge id {dup!r} defined twice", next(l for e, l in edges if e.id == dup))
        for e, line in edges:
            for v in (e.range, e.source):
                if v.level not in levels or not 1 <= v.cycle <= len(levels[v.level]) \
                        or not 0 <= v.position < levels[v.level][v.cycle - 1]:
                    raise DocumentError(f"edge {e.id!r} refers to missing vertex {_vertex(v)}", line)
            if e.id not in squares:
                raise DocumentError(f"edge {e.id!r} has no square entry", line)
        for e_id, f_id in squares.items():
            if e_id not in ids or f_id not in ids:
                raise DocumentError(f"square {e_id} -> {f_id} names an unknown edge", square_line[e_id])
        try:
            skeleton = GbdSkeleton([levels[n] for n in range(len(levels))], [e for e, _ in edges], squares)
        except StructuralError as exc:
            raise DocumentError(str(exc)) from exc
    data = None
    if "data" in seen:
        if sorted(T) != list(range(len(T))) or not T:
            raise DocumentError("data needs T for levels 0, 1, 2, ... without gaps")
        depth = len(T) - 1
        for kind in ("A", "B"):
            if sorted(maps[kind]) != list(range(depth)):
                raise DocumentError(f"data needs {kind} for levels 0..{depth - 1}")
        try:
            data = LevelData([len(T[n]) for n in range(depth + 1)], [maps["A"][n] for n in range(depth)],
                             [maps["B"][n] for n in range(depth)], [T[n] for n in range(depth + 1)])
        except ValueError as exc:
            raise DocumentError(f"inconsistent data: {exc}") from exc
    return Document(skeleton, data, family or None)


def _vertex(v: Vertex) -> str:
    return f"{v.level}.{v.cycle}.{v.position}"


def emit_skeleton(skel: GbdSkeleton) -> str:
    lines = ["[levels]"]
    lines += [f"{n}: {' '.join(map(str, lv))}" for n, lv in enumerate(skel.levels)]
    lines.append("[edges]")
    lines += [f"{e.id} {_vertex(e.range)} <- {_vertex(e.source)}" for e in skel.edges]
    lines.append("[squares]")
    lines += [f"{e.id} -> {skel.successor[e.id]}" for e in skel.edges]
    return "\n".join(lines) + "\n"


def emit_data(data: LevelData) -> str:
    lines = ["[data]"]
    lines += [f"T {n}: {' '.join(map(str, t))}" for n, t in enumerate(data.T)]
    for kind, maps in (("A", data.A), ("B", data.B)):
        lines += [f"{kind} {n}: " + " ; ".join(" ".join(map(str, row)) for row in m) for n, m in enumerate(maps)]
    return "\n".join(lines) + "\n"


def emit_family(desc: dict) -> str:
    return "[family]\n" + "".join(f"{k} = {v}\n" for k, v in desc.items())


def emit_document(doc: Document) -> str:
    parts = []
    if doc.skeleton is not None:
        parts.append(emit_skeleton(doc.skeleton))
    if doc.data is not None:
        parts.append(emit_data(doc.data))
    if doc.family:
        parts.append(emit_family(doc.family))
    return "".join(parts)
