"""C-groups: ordered sequences of involutions and the checks that make them C-groups."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .coxeter import CoxeterClass, CoxeterDiagram, classify_diagram, coxeter_order
from .errors import CapExceeded
from .permcore import DEFAULT_ELEMENT_CAP, PermGroup, Permutation
from .verdict import Verdict

__all__ = [
    "CGroup", "OrderFormula", "CoxeterClass", "CoxeterDiagram", "check_intersection_condition",
    "classify_diagram", "coxeter_order", "diagram_of", "direct_product", "dual", "face_vector",
    "intersection_witness", "parabolic",
]


@dataclass(frozen=True)
class OrderFormula:
    """An order written as ``2^power * cofactor``."""

    power: int
    cofactor: int

    @property
    def value(self) -> int:
        return 2**self.power * self.cofactor

    def halved(self) -> "OrderFormula":
        return OrderFormula(self.power - 1, self.cofactor)

    def __str__(self) -> str:
        return f"2^{self.power} * {self.cofactor}"


class CGroup:
    """Group generated by an ordered sequence of involutions ``rho_0..rho_{n-1}``.

    Only the generator conditions are enforced here; whether the intersection
    condition holds is decided by :func:`check_intersection_condition`.
    ``toroid`` and ``formula`` are optional bookkeeping carried by the
    constructions (a toroid vector and a closed-form order).
    """

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None, label: str | None = None,
                 *, toroid: tuple | None = None, formula: OrderFormula | None = None):
        gens = tuple(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree is required for rank 0")
            degree = gens[0].degree
        for k, g in enumerate(gens):
            if g.degree != degree:
                raise ValueError(f"generator {k} has degree {g.degree}, expected {degree}")
            if g.is_identity():
                raise ValueError(f"generator {k} is the identity")
            if not (g * g).is_identity():
                raise ValueError(f"generator {k} is not an involution")
        if len(set(gens)) != len(gens):
            raise ValueError("generators must be pairwise distinct")
        self.generators = gens
        self.degree = degree
        self.label = label
        self.toroid = tuple(toroid) if toroid is not None else None
        self.formula = formula
        self._parabolics: dict[frozenset, PermGroup] = {}
        self._diagram: CoxeterDiagram | None = None

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def group(self) -> PermGroup:
        return self.parabolic(range(self.rank))

    def order(self) -> int:
        return self.group.order()

    def parabolic(self, J: Iterable[int]) -> PermGroup:
        key = frozenset(J)
        if key not in self._parabolics:
            for j in key:
                if not 0 <= j < self.rank:
                    raise IndexError(f"generator index {j} out of range")
            self._parabolics[key] = PermGroup([self.generators[j] for j in sorted(key)], self.degree)
        return self._parabolics[key]

    def diagram(self) -> CoxeterDiagram:
        if self._diagram is None:
            n = self.rank
            m = [[1] * n for _ in range(n)]
            for i, j in combinations(range(n), 2):
                m[i][j] = m[j][i] = (self.generators[i] * self.generators[j]).order()
            self._diagram = CoxeterDiagram(m)
        return self._diagram

    def schlafli(self) -> tuple | None:
        D = self.diagram()
        return D.string_symbol() if D.is_string() else None

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"<CGroup{name} rank={self.rank} degree={self.degree}>"

    def same_generators(self, other: "CGroup") -> bool:
        return self.generators == other.generators


def diagram_of(C: CGroup) -> CoxeterDiagram:
    return C.diagram()


def parabolic(C: CGroup, J: Iterable[int]) -> PermGroup:
    return C.parabolic(J)


def dual(C: CGroup) -> CGroup:
    """Same group with the generator sequence reversed."""
    return CGroup(C.generators[::-1], C.degree, label=_dual_label(C.label), toroid=C.toroid, formula=C.formula)


def _dual_label(label):
    if label is None:
        return None
    if label.startswith("dual:"):
        return label[5:]
    return "dual:" + label


def direct_product(C1: CGroup, C2: CGroup) -> CGroup:
    """Act on the disjoint union of both point sets; ``C1``'s generators come first."""
    d = C1.degree + C2.degree
    gens = [g.extend(d, 0) for g in C1.generators] + [g.extend(d, C1.degree) for g in C2.generators]
    label = None
    if C1.label and C2.label:
        label = f"{C1.label} x {C2.label}"
    return CGroup(gens, d, label=label)


def face_vector(C: CGroup, cap: int = DEFAULT_ELEMENT_CAP) -> tuple[int, ...]:
    """Entry ``i`` is the index of ``<rho_j : j != i>``: the number of ``i``-faces."""
    order = C.order()
    out = []
    for i in range(C.rank):
        idx = order // C.parabolic(j for j in range(C.rank) if j != i).order()
        if idx > cap:
            raise CapExceeded(f"face count of type {i}", cap, idx)
        out.append(idx)
    return tuple(out)


def _minus(J: Sequence[int], *drop: int) -> tuple[int, ...]:
    return tuple(j for j in J if j not in drop)


def intersection_witness(C: CGroup, J: Iterable[int], K: Iterable[int], cap: int = DEFAULT_ELEMENT_CAP):
    """An element of ``<rho_J> & <rho_K>`` outside ``<rho_{J&K}>``, or None.

    The smaller parabolic is enumerated and sifted through the larger one.
    """
    J, K = frozenset(J), frozenset(K)
    A, B = C.parabolic(J), C.parabolic(K)
    target = C.parabolic(J & K)
    small, big = (A, B) if A.order() <= B.order() else (B, A)
    if small.order() > cap:
        raise CapExceeded("parabolic enumeration", cap, small.order())
    elems = small.chain.element_array()
    common = elems[big.contains_many(elems)]
    if common.shape[0] == target.order():
        return None
    outside = common[~target.contains_many(common)]
    return Permutation._wrap(outside[0])


def check_intersection_condition(C: CGroup, cap: int = DEFAULT_ELEMENT_CAP) -> Verdict:
    """Decide the intersection condition by the standard reduction.

    Each maximal parabolic ``G_i`` is checked recursively; then
    ``G_i & G_j == G_{i,j}`` is tested for every pair.  Rank two and below
    holds automatically for distinct involutions.  Pairs that would need an
    enumeration above ``cap`` are reported as skipped.
    """
    memo: dict[tuple, Verdict] = {}

    def check(J: tuple[int, ...]) -> Verdict:
        if J in memo:
            return memo[J]
        if len(J) <= 2:
            memo[J] = Verdict.ok()
            return memo[J]
        skipped = []
        for i in J:
            sub = check(_minus(J, i))
            if sub.failed:
                memo[J] = sub
                return sub
            skipped.extend(sub.details)
        for i, j in combinations(J, 2):
            try:
                w = intersection_witness(C, _minus(J, i), _minus(J, j), cap)
            except CapExceeded as exc:
                skipped.append({"parabolics": [list(_minus(J, i)), list(_minus(J, j))], "note": str(exc)})
                continue
            if w is not None:
                memo[J] = Verdict.fail(
                    {"J": list(_minus(J, i)), "K": list(_minus(J, j)), "element": w.cycle_string()},
                    note=f"<rho_J> & <rho_K> contains {w.cycle_string()} outside <rho_(J&K)>")
                return memo[J]
        v = Verdict.ok() if not skipped else Verdict.skip(f"{len(skipped)} intersection(s) over cap")
        v.details = _dedupe(skipped)
        memo[J] = v
        return v

    return check(tuple(range(C.rank)))


def _dedupe(items):
    seen = set()
    out = []
    for it in items:
        key = repr(it)
        if key not in seen:
            seen.add(key)
            out.append(it)
    return out
