"""JSON/text formats shared by the CLI and tests.

Group spec: {"kind": "cyclic"|"dihedral"|"direct"|"semidirect"|"field_affine"|
"inversion"|"table", plus kind-specific fields}. Gain graph: {"group": spec or
{"file": path}, "vertices": n, "edges": [[tail, head, gain], ...]} with the
edge id equal to the array position, or {"complete": {"group": spec, "n": k}}.
Circuit lists are one comma-separated line per circuit, lines sorted.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Optional

from . import groups as _groups
from .gaingraph import GainGraph, complete_gain_graph
from .groups import FiniteGroup, FrobeniusPartition


def group_from_spec(spec: Any) -> FiniteGroup:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("group spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "cyclic":
        return _groups.make_cyclic(int(spec["n"]))
    if kind == "dihedral":
        return _groups.make_dihedral(int(spec["order"]))
    if kind == "direct":
        factors = [group_from_spec(s) for s in spec["factors"]]
        if len(factors) < 2:
            raise ValueError("direct product needs at least two factors")
        out = factors[0]
        for f in factors[1:]:
            out = _groups.make_direct_product(out, f)
        return out
    if kind == "semidirect":
        return _groups.make_semidirect(
            group_from_spec(spec["g1"]),
            group_from_spec(spec["g2"]),
            spec["action"],
        )
    if kind == "field_affine":
        return _groups.make_field_affine(int(spec["q"]))
    if kind == "inversion":
        return _groups.make_inversion_extension(group_from_spec(spec["base"]))
    if kind == "table":
        return _groups.from_table(spec["table"], labels=spec.get("labels"))
    raise ValueError(f"unknown group kind {kind!r}")


def load_group(path: str | Path) -> FiniteGroup:
    return group_from_spec(json.loads(Path(path).read_text()))


def _resolve_group(spec: Any, base_dir: Path) -> FiniteGroup:
    if isinstance(spec, dict) and "file" in spec:
        return load_group(base_dir / spec["file"])
    return group_from_spec(spec)


def graph_from_spec(spec: Any, base_dir: Optional[Path] = None) -> GainGraph:
    base_dir = base_dir or Path(".")
    if "complete" in spec:
        inner = spec["complete"]
        group = _resolve_group(inner["group"], base_dir)
        return complete_gain_graph(group, int(inner["n"]))
    group = _resolve_group(spec["group"], base_dir)
    triples = [tuple(int(x) for x in e) for e in spec["edges"]]
    return GainGraph.from_triples(group, int(spec["vertices"]), triples)


def load_graph(path: str | Path) -> GainGraph:
    p = Path(path)
    return graph_from_spec(json.loads(p.read_text()), base_dir=p.parent)


def graph_to_spec(g: GainGraph, group_spec: Any) -> dict:
    return {
        "group": group_spec,
        "vertices": g.vertex_count,
        "edges": [[e.tail, e.head, e.gain] for e in sorted(g.edges, key=lambda e: e.id)],
    }


def format_circuits(circuits: Iterable[Iterable[int]]) -> str:
    lines = sorted(",".join(str(i) for i in sorted(c)) for c in circuits)
    return "\n".join(lines) + ("\n" if lines else "")


def parse_circuits(text: str) -> list[tuple[int, ...]]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        out.append(tuple(sorted(int(x) for x in line.split(","))))
    return sorted(out)


def format_partition(group: FiniteGroup, part: FrobeniusPartition, index: int) -> str:
    lines = [f"partition {index}: {part.describe(group)}"]
    lines.append("  kernel: " + ",".join(str(x) for x in part.kernel.elements))
    for comp in part.complements:
        lines.append("  complement: " + ",".join(str(x) for x in comp.elements))
    return "\n".join(lines)


def parse_id_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(x) for x in text.split(",")]
