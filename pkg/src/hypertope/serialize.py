"""JSON documents for C-groups and halving results, and diagram rendering."""
from __future__ import annotations

import json
from pathlib import Path

from .cgroup import CGroup, OrderFormula
from .coxeter import INF, CoxeterDiagram
from .halving import HalvingResult
from .permcore import Permutation

CGROUP_KIND = "cgroup"
HALVING_KIND = "halving"


def cgroup_to_json(C: CGroup) -> dict:
    doc = {
        "kind": CGROUP_KIND,
        "rank": C.rank,
        "degree": C.degree,
        "generators": [g.cycle_string() for g in C.generators],
        "label": C.label,
    }
    if C.toroid is not None:
        doc["toroid"] = list(C.toroid)
    if C.formula is not None:
        doc["formula"] = {"power": C.formula.power, "cofactor": C.formula.cofactor}
    return doc


def cgroup_from_json(doc: dict) -> CGroup:
    try:
        degree = int(doc["degree"])
        gens = [Permutation.parse(g, degree) if isinstance(g, str) else Permutation(g) for g in doc["generators"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"not a C-group document: {exc}") from None
    if "rank" in doc and doc["rank"] != len(gens):
        raise ValueError(f"rank {doc['rank']} disagrees with {len(gens)} generators")
    formula = doc.get("formula")
    if formula is not None:
        formula = OrderFormula(int(formula["power"]), int(formula["cofactor"]))
    return CGroup(gens, degree, label=doc.get("label"), toroid=doc.get("toroid"), formula=formula)


def format_order(n: int, formula: OrderFormula | None = None) -> str:
    """Decimal order, prefixed by the closed form when one is known."""
    if formula is not None and formula.value == n:
        return f"{formula} = {n}"
    return str(n)


def halving_to_json(R: HalvingResult) -> dict:
    return {
        "kind": HALVING_KIND,
        "sourceOrder": str(R.source_order),
        "halvedOrder": str(R.halved_order),
        "halvedOrderFormula": None if R.formula is None else str(R.formula),
        "index": R.index,
        "s": R.s,
        "diagram": R.diagram.to_json(),
        "extendedSymbol": R.extended_symbol,
        "formulaLevel": R.formula_level,
        "source": cgroup_to_json(R.source),
        "halved": cgroup_to_json(R.halved),
    }


def halving_from_json(doc: dict) -> HalvingResult:
    try:
        return HalvingResult(
            source=cgroup_from_json(doc["source"]),
            halved=cgroup_from_json(doc["halved"]),
            index=int(doc["index"]),
            s=int(doc["s"]),
            diagram=CoxeterDiagram.from_json(doc["diagram"]),
            extended_symbol=doc["extendedSymbol"],
            formula_level=bool(doc.get("formulaLevel", False)),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"not a halving document: {exc}") from None


def load(path) -> CGroup | HalvingResult:
    """Read either document kind; the kind is inferred when not tagged."""
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a JSON object")
    kind = doc.get("kind") or (HALVING_KIND if "halved" in doc else CGROUP_KIND)
    return halving_from_json(doc) if kind == HALVING_KIND else cgroup_from_json(doc)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def diagram_to_json(D: CoxeterDiagram) -> dict:
    return {
        "rank": D.rank,
        "orders": D.to_json(),
        "edges": [{"i": i, "j": j, "label": None if p == INF else p} for (i, j), p in sorted(D.edges().items())],
    }


def diagram_to_dot(D: CoxeterDiagram, tail: tuple[int, int] | None = None, name: str = "coxeter") -> str:
    """Nodes are generators; edges carry their label unless it is 3.  ``tail`` pins the two
    tail nodes of a halving diagram to one rank so the triangle is drawn upright."""
    lines = [f"graph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for i in range(D.rank):
        lines.append(f'  n{i} [label="rho{i}"];')
    if tail is not None:
        lines.append(f"  {{ rank=same; n{tail[0]}; n{tail[1]}; }}")
    for (i, j), p in sorted(D.edges().items()):
        if p == 3:
            lines.append(f"  n{i} -- n{j};")
        else:
            label = "inf" if p == INF else str(p)
            lines.append(f'  n{i} -- n{j} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
