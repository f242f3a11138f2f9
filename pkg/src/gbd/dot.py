"""Graphviz DOT export: one rank per level, blue edges solid, red cycles dashed."""
from __future__ import annotations

from collections import Counter

from .skeleton import GbdSkeleton, Vertex


def _name(v: Vertex) -> str:
    return f'"{v.level}.{v.cycle}.{v.position}"'


def to_dot(skel: GbdSkeleton, name: str = "gbd") -> str:
    """Parallel blue edges between the same two vertices are merged into one labelled edge."""
    lines = [f"digraph {name} {{", "  rankdir=TB;", "  node [shape=circle, fontsize=10];"]
    for n in range(skel.depth + 1):
        verts = " ".join(_name(v) for v in skel.vertices(n))
        lines.append(f"  {{ rank=same; {verts} }}")
    for n in range(skel.depth + 1):
        for j in range(1, skel.cycle_count(n) + 1):
            lines.append(f"  subgraph cycle_{n}_{j} {{")
            lines.append("    edge [style=dashed, color=red];")
            for v in skel.cycle_vertices(n, j):
                lines.append(f"    {_name(v)} -> {_name(skel.red_step(v))};")
            lines.append("  }")
    counts = Counter((e.source, e.range) for e in skel.edges)
    for (src, rng), k in sorted(counts.items()):
        label = f' [color=blue, label="{k}"]' if k > 1 else " [color=blue]"
        lines.append(f"  {_name(src)} -> {_name(rng)}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"
