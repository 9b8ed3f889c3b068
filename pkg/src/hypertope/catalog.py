"""Reproducible table of halved 2^K groups, ranks 3 to 6.

Rows are ``delta2^{K}`` halved, for ``K = {p}`` (rank 3), ``{p,3}`` (rank 4),
``{p,3,3}`` (rank 5) and the simplex and cube families at rank 6.  The
golden values shipped in ``data/catalog_golden.json`` were produced once by
:func:`generate_rows` and are only compared against, never rewritten.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from importlib import resources

from .caps import DEFAULT_CAPS, Caps
from .constructions import build_from_symbol
from .geometry import locally_spherical_report, verify_regular_hypertope
from .halving import halve

# fields compared against the golden table
COMPARED = ("rank", "K", "construction", "halvedOrder", "formula", "extendedSymbol", "classification",
            "diagram", "locallySpherical", "index", "s", "verification")


@dataclass
class CatalogEntry:
    rank: int
    p: int
    K: str
    construction: str
    halvedOrder: str
    formula: str | None
    extendedSymbol: str
    classification: str
    diagram: str | None
    locallySpherical: bool | None
    index: int
    s: int
    verification: str
    level: str

    def to_json(self) -> dict:
        return asdict(self)


def catalog_inputs(max_rank: int) -> list[tuple[int, int, str]]:
    """(rank, p, K) in output order."""
    rows = []
    if max_rank >= 3:
        rows += [(3, p, f"{{{p}}}") for p in range(3, 9)]
    if max_rank >= 4:
        rows += [(4, p, f"{{{p},3}}") for p in (3, 4, 5)]
    if max_rank >= 5:
        rows += [(5, p, f"{{{p},3,3}}") for p in (3, 4, 5)]
    if max_rank >= 6:
        rows += [(6, p, f"{{{p},3,3,3}}") for p in (3, 4)]
    return rows


def build_entry(rank: int, p: int, K: str, caps: Caps = DEFAULT_CAPS) -> CatalogEntry:
    construction = f"delta2^{{{K}}}"
    R = halve(build_from_symbol(construction, caps), caps)
    H = R.halved
    local = locally_spherical_report(H, caps)
    # full clique search only where the chamber count fits the budget
    level = "full" if R.halved_order <= caps.chambers else "cgroup"
    report = verify_regular_hypertope(H, caps, level=level)
    return CatalogEntry(
        rank=rank, p=p, K=K, construction=construction,
        halvedOrder=str(R.halved_order),
        formula=None if R.formula is None else str(R.formula),
        extendedSymbol=R.extended_symbol,
        classification=local.type_label,
        diagram=local.name,
        locallySpherical=local.locally_spherical,
        index=R.index, s=R.s,
        verification=report.overall,
        level=level,
    )


def _build_row(args):
    return build_entry(*args)


def generate_rows(max_rank: int = 5, caps: Caps = DEFAULT_CAPS, jobs: int = 1) -> list[CatalogEntry]:
    inputs = [(r, p, K, caps) for r, p, K in catalog_inputs(max_rank)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_build_row, inputs))
    return [_build_row(a) for a in inputs]


def load_golden() -> list[dict]:
    text = resources.files("hypertope").joinpath("data/catalog_golden.json").read_text()
    return json.loads(text)["rows"]


def compare(rows: list[CatalogEntry], golden: list[dict] | None = None) -> list[str]:
    """Differences between computed rows and the golden table, as messages."""
    golden = load_golden() if golden is None else golden
    index = {(g["rank"], g["p"]): g for g in golden}
    drift = []
    for row in rows:
        g = index.get((row.rank, row.p))
        if g is None:
            drift.append(f"rank {row.rank} p={row.p}: no golden row")
            continue
        doc = row.to_json()
        for key in COMPARED:
            if doc[key] != g.get(key):
                drift.append(f"rank {row.rank} p={row.p}: {key} is {doc[key]!r}, golden {g.get(key)!r}")
    return drift


def format_table(rows: list[CatalogEntry]) -> str:
    head = ("rank", "K", "halved order", "symbol", "type", "diagram", "verify")
    body = [(str(r.rank), r.K, f"{r.formula} = {r.halvedOrder}" if r.formula and len(r.halvedOrder) > 12
             else r.halvedOrder, r.extendedSymbol, r.classification, r.diagram or "-",
             r.verification + (" (c-group)" if r.level == "cgroup" else ""))
            for r in rows]
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    lines = ["  ".join(x.ljust(w) for x, w in zip(line, widths)).rstrip() for line in [head, *body]]
    return "\n".join(lines) + "\n"
