"""The halving operation on string C-groups.

Keeps ``rho_0..rho_{n-2}`` and replaces the last generator by its
conjugate ``rho_{n-1} rho_{n-2} rho_{n-1}``.  The result has a tail-triangle
diagram and index one or two in the source group.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .caps import DEFAULT_CAPS, Caps
from .cgroup import CGroup, CoxeterDiagram, OrderFormula, face_vector
from .errors import DiagramMismatch, NotString
from .permcore import coset_action


@dataclass
class HalvingResult:
    source: CGroup
    halved: CGroup
    index: int
    s: int
    diagram: CoxeterDiagram
    extended_symbol: str
    formula_level: bool = False

    @property
    def source_order(self) -> int:
        return self.source.order()

    @property
    def halved_order(self) -> int:
        return self.halved.order()

    @property
    def formula(self) -> OrderFormula | None:
        return self.halved.formula

    @property
    def rank(self) -> int:
        return self.halved.rank


def tail_parameter(p_last: int) -> int:
    """Label between the two tail nodes: ``p`` when odd, ``p/2`` when even."""
    return p_last if p_last % 2 else p_last // 2


def halve(P: CGroup, caps: Caps = DEFAULT_CAPS) -> HalvingResult:
    n = P.rank
    if n < 3:
        raise NotString(f"halving needs rank at least 3, got {n}")
    D = P.diagram()
    if not D.is_string():
        raise NotString(f"diagram of {P.label or 'input'} is not a string: {D.edges()}")
    symbol = D.string_symbol()
    r = P.generators
    last = r[n - 1] * r[n - 2] * r[n - 1]
    s = tail_parameter(symbol[-1])

    source_order = P.order()
    probe = CGroup(r[:n - 1] + (last,), P.degree)
    order = probe.order()
    index, rem = divmod(source_order, order)
    if rem or index not in (1, 2):
        raise DiagramMismatch(f"halving group has index {source_order}/{order}")

    formula = None
    if P.formula is not None:
        formula = P.formula.halved() if index == 2 else P.formula
    toroid = _halved_toroid(P.toroid, n)
    label = f"halve({P.label})" if P.label else None
    H = CGroup(probe.generators, P.degree, label=label, toroid=toroid, formula=formula)
    H._parabolics = probe._parabolics

    predicted = CoxeterDiagram.tail_triangle(symbol, s)
    computed = H.diagram()
    if computed != predicted:
        raise DiagramMismatch(f"computed diagram {computed.edges()} differs from predicted {predicted.edges()}")
    R = HalvingResult(P, H, index, s, computed, "", formula_level=order > caps.elements)
    R.extended_symbol = extended_schlafli(R)
    return R


def _halved_toroid(vector, rank):
    if vector is None:
        return None
    if rank == 3:
        # {4,4}_(s,0) halves to the map {4,4}_(s/2,s/2)
        s = vector[0]
        if s % 2 or any(vector[1:]):
            return None
        return (s // 2, s // 2)
    return tuple(vector)


def extended_schlafli(R: HalvingResult) -> str:
    """``{p_1, ..., p_{n-3}, q^q}`` with ``q = p_{n-2}``; rank three gives ``{q, q}``."""
    symbol = R.source.diagram().string_symbol()
    q = symbol[-2]
    if R.rank == 3:
        text = f"{{{q}, {q}}}"
    else:
        text = "{" + ", ".join(str(p) for p in symbol[:-2]) + f", {q}^{q}}}"
    if R.halved.toroid is not None:
        text += " : (" + ",".join(map(str, R.halved.toroid)) + ")"
    return text


def conjugation_symmetry(R: HalvingResult) -> bool:
    """Conjugating by the source's last generator fixes ``rho_0..rho_{n-3}``
    and swaps the two tail generators."""
    t = R.source.generators[-1]
    h = R.halved.generators
    n = len(h)
    conj = [g.conjugate(t) for g in h]
    return (all(conj[i] == h[i] for i in range(n - 2))
            and conj[n - 2] == h[n - 1] and conj[n - 1] == h[n - 2])


def facet_bipartiteness(P: CGroup, cap: int = DEFAULT_CAPS.elements) -> bool:
    """Whether the facets of ``P`` two-colour under ridge adjacency.

    Facets are cosets of ``<rho_0..rho_{n-2}>``.  The base facet meets its
    neighbour across the base ridge at the image under ``rho_{n-1}``; all
    adjacencies are translates of that one pair.
    """
    n = P.rank
    ca = coset_action(P.group, P.parabolic(range(n - 1)), cap)
    acts = [g.images for g in ca.action]
    other = int(acts[n - 1][0])
    if other == 0:
        return False
    adj = [set() for _ in range(ca.degree)]
    seen = {(0, other)}
    queue = deque([(0, other)])
    while queue:
        a, b = queue.popleft()
        adj[a].add(b)
        adj[b].add(a)
        for g in acts:
            e = (int(g[a]), int(g[b]))
            e = e if e[0] <= e[1] else (e[1], e[0])
            if e not in seen:
                seen.add(e)
                queue.append(e)
    colour = [-1] * ca.degree
    for start in range(ca.degree):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if colour[b] < 0:
                    colour[b] = 1 - colour[a]
                    queue.append(b)
                elif colour[b] == colour[a]:
                    return False
    return True


def map_face_vector(R: HalvingResult, cap: int = DEFAULT_CAPS.elements) -> tuple[int, int, int]:
    """(vertices, edges, faces) of a halved rank-3 group read as the map with
    string generators ``(rho_1, rho_0, rho_2)``."""
    if R.rank != 3:
        raise ValueError("map counts need rank 3")
    e, v, f = face_vector(R.halved, cap)
    return v, e, f


def rank3_genus(face_vector) -> int:
    """Genus of an orientable rank-3 map from its Euler characteristic."""
    v, e, f = face_vector
    chi = v - e + f
    g, rem = divmod(2 - chi, 2)
    if rem:
        raise ValueError(f"odd Euler characteristic {chi}: not an orientable surface")
    return g
