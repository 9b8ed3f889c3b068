"""Coxeter diagrams: Schläfli-matrix classification and finite Coxeter group orders."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import UnrecognizedSphericalType

INF = math.inf
EIGEN_TOL = 1e-9

SPHERICAL = "spherical"
EUCLIDEAN = "euclidean"
HYPERBOLIC = "compact-hyperbolic"
OTHER = "other"


class CoxeterDiagram:
    """Symmetric matrix of branch orders ``p_ij`` with ``p_ii = 1``.

    ``math.inf`` marks an infinite branch.
    """

    __slots__ = ("orders",)

    def __init__(self, orders: Sequence[Sequence[float]]):
        m = tuple(tuple(int(x) if x != INF else INF for x in row) for row in orders)
        n = len(m)
        for i in range(n):
            if len(m[i]) != n:
                raise ValueError("diagram matrix must be square")
            if m[i][i] != 1:
                raise ValueError("diagonal entries must be 1")
            for j in range(i + 1, n):
                if m[i][j] != m[j][i]:
                    raise ValueError(f"asymmetric entry ({i},{j})")
                if m[i][j] < 2:
                    raise ValueError(f"off-diagonal entry ({i},{j}) must be at least 2")
        self.orders = m

    @classmethod
    def from_edges(cls, rank: int, edges: dict) -> "CoxeterDiagram":
        """``edges`` maps index pairs to labels; unlisted pairs commute."""
        m = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
        for (i, j), p in edges.items():
            m[i][j] = m[j][i] = p
        return cls(m)

    @classmethod
    def string(cls, symbol: Sequence[int]) -> "CoxeterDiagram":
        return cls.from_edges(len(symbol) + 1, {(i, i + 1): p for i, p in enumerate(symbol)})

    @classmethod
    def tail_triangle(cls, symbol: Sequence[int], s: int) -> "CoxeterDiagram":
        """Diagram of the halving group of a polytope of type ``symbol``."""
        n = len(symbol) + 1
        edges = {(i, i + 1): p for i, p in enumerate(symbol[:-1])}
        edges[(n - 3, n - 1)] = symbol[-2]
        edges[(n - 2, n - 1)] = s
        return cls.from_edges(n, edges)

    @property
    def rank(self) -> int:
        return len(self.orders)

    def __getitem__(self, ij) -> float:
        i, j = ij
        return self.orders[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, CoxeterDiagram) and self.orders == other.orders

    def __hash__(self) -> int:
        return hash(self.orders)

    def __repr__(self) -> str:
        return f"CoxeterDiagram({self.edges()!r}, rank={self.rank})"

    def edges(self) -> dict:
        """Pairs ``(i, j)``, ``i < j``, with label greater than 2."""
        return {(i, j): self.orders[i][j] for i, j in combinations(range(self.rank), 2)
                if self.orders[i][j] != 2}

    def is_string(self) -> bool:
        return all(self.orders[i][j] == 2 for i, j in combinations(range(self.rank), 2) if j > i + 1)

    def string_symbol(self) -> tuple:
        """Schläfli symbol of a string diagram."""
        return tuple(self.orders[i][i + 1] for i in range(self.rank - 1))

    def subdiagram(self, J: Iterable[int]) -> "CoxeterDiagram":
        J = sorted(J)
        return CoxeterDiagram([[self.orders[i][j] for j in J] for i in J])

    def reindexed(self, perm: Sequence[int]) -> "CoxeterDiagram":
        """Node ``k`` of the result is node ``perm[k]`` of this diagram."""
        return CoxeterDiagram([[self.orders[a][b] for b in perm] for a in perm])

    def reversed(self) -> "CoxeterDiagram":
        return self.reindexed(list(range(self.rank - 1, -1, -1)))

    def components(self) -> list[list[int]]:
        seen = set()
        out = []
        for start in range(self.rank):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            k = 0
            while k < len(comp):
                i = comp[k]
                k += 1
                for j in range(self.rank):
                    if j not in seen and self.orders[i][j] != 2:
                        seen.add(j)
                        comp.append(j)
            out.append(sorted(comp))
        return out

    def schlafli_matrix(self) -> np.ndarray:
        n = self.rank
        M = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                p = self.orders[i][j]
                M[i, j] = -1.0 if p == INF else -math.cos(math.pi / p)
        return M

    def to_json(self) -> list:
        return [[None if p == INF else p for p in row] for row in self.orders]

    @classmethod
    def from_json(cls, doc) -> "CoxeterDiagram":
        return cls([[INF if p is None else p for p in row] for row in doc])


@dataclass
class CoxeterClass:
    kind: str
    components: list = field(default_factory=list)  # (indices, kind, name)

    @property
    def name(self) -> str:
        """Product of component names, e.g. ``'B~3'`` or ``'A1 x A1'``."""
        names = [c[2] or "?" for c in self.components]
        return " x ".join(names) if names else "empty"


def _eig(M: np.ndarray) -> np.ndarray:
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(M)


def _is_positive_definite(M: np.ndarray) -> bool:
    return bool((_eig(M) > EIGEN_TOL).all())


def _component_kind(D: CoxeterDiagram) -> str:
    if any(p == INF for row in D.orders for p in row):
        return OTHER
    ev = _eig(D.schlafli_matrix())
    if (ev > EIGEN_TOL).all():
        return SPHERICAL
    if (ev > -EIGEN_TOL).all() and int((np.abs(ev) <= EIGEN_TOL).sum()) == 1:
        return EUCLIDEAN
    return OTHER


def classify_diagram(D: CoxeterDiagram) -> CoxeterClass:
    comps = []
    for idx in D.components():
        sub = D.subdiagram(idx)
        kind = _component_kind(sub)
        comps.append((idx, kind, diagram_name(sub, kind)))
    if any(p == INF for row in D.orders for p in row):
        return CoxeterClass(OTHER, comps)
    kinds = {c[1] for c in comps}
    if kinds == {SPHERICAL} or D.rank == 0:
        return CoxeterClass(SPHERICAL, comps)
    if kinds == {EUCLIDEAN}:
        return CoxeterClass(EUCLIDEAN, comps)
    n = D.rank
    ev = _eig(D.schlafli_matrix())
    if (int((ev > EIGEN_TOL).sum()) == n - 1 and int((ev < -EIGEN_TOL).sum()) == 1
            and all(_is_positive_definite(D.subdiagram([j for j in range(n) if j != i]).schlafli_matrix())
                    for i in range(n))):
        return CoxeterClass(HYPERBOLIC, comps)
    return CoxeterClass(OTHER, comps)


# ---------------------------------------------------------------------------
# recognising irreducible types
# ---------------------------------------------------------------------------

def _shape(D: CoxeterDiagram):
    """Adjacency lists of a connected diagram."""
    n = D.rank
    return {i: [j for j in range(n) if j != i and D.orders[i][j] != 2] for i in range(n)}


def _path_labels(D: CoxeterDiagram, adj) -> list | None:
    """Edge labels along the diagram if it is a path, else None."""
    n = D.rank
    if n == 1:
        return []
    ends = [i for i in range(n) if len(adj[i]) == 1]
    if len(ends) != 2 or any(len(a) > 2 for a in adj.values()) or sum(map(len, adj.values())) != 2 * (n - 1):
        return None
    labels = []
    prev, cur = None, ends[0]
    while True:
        nxt = [j for j in adj[cur] if j != prev]
        if not nxt:
            break
        labels.append(D.orders[cur][nxt[0]])
        prev, cur = cur, nxt[0]
    return labels


def _arms(D: CoxeterDiagram, adj, centre: int):
    """Labels along each arm leaving ``centre`` in a tree with one branch node."""
    arms = []
    for start in adj[centre]:
        labels = [D.orders[centre][start]]
        prev, cur = centre, start
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if len(nxt) != 1:
                if nxt:
                    return None
                break
            labels.append(D.orders[cur][nxt[0]])
            prev, cur = cur, nxt[0]
        arms.append(labels)
    return arms


def _symmetric_path(labels, pattern) -> bool:
    return list(labels) == pattern or list(labels)[::-1] == pattern


def diagram_name(D: CoxeterDiagram, kind: str | None = None) -> str | None:
    """Name of a connected spherical or affine diagram, e.g. ``'H4'``, ``'B~3'``."""
    n = D.rank
    if n == 0:
        return None
    if kind is None:
        kind = _component_kind(D)
    adj = _shape(D)
    edges = sum(map(len, adj.values())) // 2
    labels = _path_labels(D, adj)
    if kind == SPHERICAL:
        if labels is not None:
            if n == 1:
                return "A1"
            if n == 2:
                return f"I2({labels[0]})"
            if all(p == 3 for p in labels):
                return f"A{n}"
            rest = [3] * (n - 2)
            if _symmetric_path(labels, [4] + rest):
                return f"B{n}"
            if n == 4 and labels == [3, 4, 3]:
                return "F4"
            if n in (3, 4) and _symmetric_path(labels, [5] + rest):
                return f"H{n}"
            return None
        branch = [i for i in range(n) if len(adj[i]) == 3]
        if edges == n - 1 and len(branch) == 1:
            arms = _arms(D, adj, branch[0])
            if arms is None or any(p != 3 for a in arms for p in a):
                return None
            lengths = sorted(len(a) for a in arms)
            if lengths[:2] == [1, 1]:
                return f"D{n}"
            return {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}.get(tuple(lengths))
        return None
    if kind == EUCLIDEAN:
        tilde = f"~{n - 1}"
        if labels is not None:
            if n == 3 and _symmetric_path(labels, [3, 6]):
                return "G~2"
            if n == 5 and _symmetric_path(labels, [3, 3, 4, 3]):
                return "F~4"
            if labels and labels[0] == 4 and labels[-1] == 4:
                return "C" + tilde
            return None
        if edges == n and all(len(a) == 2 for a in adj.values()):
            return "A" + tilde
        branch = [i for i in range(n) if len(adj[i]) >= 3]
        if edges == n - 1 and len(branch) == 1:
            arms = _arms(D, adj, branch[0])
            if arms is None:
                return None
            if len(arms) == 4:
                return "D~4"
            plain = sorted(len(a) for a in arms if all(p == 3 for p in a))
            if len(plain) == 3:
                return {(1, 1, 1): None, (2, 2, 2): "E~6", (1, 3, 3): "E~7",
                        (1, 2, 5): "E~8"}.get(tuple(plain))
            if plain == [1, 1]:
                return "B" + tilde
        if edges == n - 1 and len(branch) == 2:
            return "D" + tilde
        return None
    return None


_EXCEPTIONAL = {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "H3": 120, "H4": 14400}


def _irreducible_order(name: str) -> int:
    if name in _EXCEPTIONAL:
        return _EXCEPTIONAL[name]
    if name.startswith("I2("):
        return 2 * int(name[3:-1])
    family, n = name[0], int(name[1:])
    if family == "A":
        return math.factorial(n + 1)
    if family == "B":
        return 2**n * math.factorial(n)
    if family == "D":
        return 2**(n - 1) * math.factorial(n)
    raise UnrecognizedSphericalType(name)


def coxeter_order(D: CoxeterDiagram) -> float:
    """Order of the Coxeter group of ``D``: an int, or ``math.inf``."""
    order = 1
    for idx in D.components():
        sub = D.subdiagram(idx)
        kind = _component_kind(sub)
        if kind != SPHERICAL:
            return INF
        name = diagram_name(sub, kind)
        if name is None:
            raise UnrecognizedSphericalType(f"positive definite diagram {sub!r} matches no finite type")
        order *= _irreducible_order(name)
    return order
