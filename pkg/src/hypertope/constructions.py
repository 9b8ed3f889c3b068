"""Builders for regular polytopes given as string C-groups.

``two_k`` realises Danzer's generalised cube on signed vertices of ``K``:
point ``v`` is vertex ``v`` with sign +, point ``v + m`` the same vertex with
sign -.  The first generator swaps the two signs of the base vertex; the
others apply ``K``'s generators to both layers.  ``danzer_poset`` builds
the face poset itself and serves as an independent check on that choice.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .caps import DEFAULT_CAPS, Caps
from .cgroup import CGroup, OrderFormula, dual
from .errors import (CapExceeded, FaithfulnessFallbackExceeded, OrderMismatch, RelatorValidationFailed,
                     SymbolError)
from .permcore import PermGroup, Permutation, Presentation, coset_action, todd_coxeter


def _fmt_symbol(symbol: Sequence[int]) -> str:
    return "{" + ",".join(str(p) for p in symbol) + "}"


def coxeter_presentation(symbol: Sequence[int], extra_relators: Sequence[Sequence[int]] = ()) -> Presentation:
    n = len(symbol) + 1
    rel = []
    for i in range(n):
        for j in range(i + 1, n):
            p = symbol[i] if j == i + 1 else 2
            rel.append((i, j) * p)
    rel.extend(tuple(w) for w in extra_relators)
    return Presentation(n, rel)


def coxeter_polytope(symbol: Sequence[int], extra_relators: Sequence[Sequence[int]] = (),
                     caps: Caps = DEFAULT_CAPS, label: str | None = None) -> CGroup:
    """String C-group of type ``symbol`` (optionally a quotient by extra relators).

    The permutation action is on vertices (cosets of ``<rho_1..>``).  If that
    action has a kernel (a reducible string), the group acts on the disjoint
    union of the vertex cosets of each irreducible component, and only if that
    also fails on flags (the regular representation).
    """
    symbol = tuple(int(p) for p in symbol)
    if any(p < 2 for p in symbol):
        raise ValueError(f"Schläfli entries must be at least 2: {symbol}")
    pres = coxeter_presentation(symbol, extra_relators)
    n = pres.generators
    _, vertex_action = todd_coxeter(pres.with_subgroup([(i,) for i in range(1, n)]), caps.cosets)
    full, regular = todd_coxeter(pres, caps.cosets)
    if vertex_action.order() == full.index:
        action = vertex_action
    elif (split := _component_action(pres, symbol, caps)).order() == full.index:
        action = split
    else:
        if full.index > caps.elements:
            raise FaithfulnessFallbackExceeded("flag action", caps.elements, full.index)
        action = regular
    return CGroup(action.generators, action.degree, label=label or _fmt_symbol(symbol))


def _component_action(pres: Presentation, symbol: tuple, caps: Caps) -> PermGroup:
    """Disjoint union of the actions on cosets of ``<rho_j : j != a>``, one per component start ``a``."""
    n = len(symbol) + 1
    starts = [0] + [i + 1 for i, p in enumerate(symbol) if p == 2]
    tables = [todd_coxeter(pres.with_subgroup([(j,) for j in range(n) if j != a]), caps.cosets)[0].table
              for a in starts]
    offsets = np.cumsum([0] + [t.shape[0] for t in tables])
    gens = [Permutation(np.concatenate([t[:, x] + off for t, off in zip(tables, offsets)])) for x in range(n)]
    return PermGroup(gens, int(offsets[-1]))


def _translation_word(symbol: tuple, vector: tuple) -> tuple[list[int], int]:
    """Relator and expected flag count for the supported toroid families."""
    n = len(symbol) + 1
    s = vector[0]
    if s < 1:
        raise ValueError("toroid parameter must be positive")
    cube_like = symbol[0] == 4 and symbol[-1] == 4 and all(p == 3 for p in symbol[1:-1])
    if not cube_like or len(vector) != n - 1:
        raise ValueError(f"unsupported toroid {_fmt_symbol(symbol)}:{vector}")
    d = n - 1
    hyperoctahedral = 2**d * math.factorial(d)
    if all(v == 0 for v in vector[1:]):
        word = list(range(n)) + list(range(n - 2, 0, -1))
        return word * s, hyperoctahedral * s**d
    if d == 2 and vector[1] == s:
        return [0, 1, 2] * (2 * s), 16 * s * s
    raise ValueError(f"unsupported toroid vector {vector} for {_fmt_symbol(symbol)}")


def toroid(symbol: Sequence[int], vector: Sequence[int], caps: Caps = DEFAULT_CAPS) -> CGroup:
    """Toroids ``{4,4}_(s,0)``, ``{4,4}_(s,s)`` and ``{4,3^k,4}_(s,0,...,0)``.

    The translation relator is validated against the flag count
    ``|B_d| s^d`` (``16 s^2`` for ``{4,4}_(s,s)``).
    """
    symbol = tuple(int(p) for p in symbol)
    vector = tuple(int(v) for v in vector)
    word, flags = _translation_word(symbol, vector)
    label = _fmt_symbol(symbol) + ":(" + ",".join(map(str, vector)) + ")"
    C = coxeter_polytope(symbol, [word], caps, label=label)
    if C.order() != flags:
        raise RelatorValidationFailed(f"{label}: order {C.order()} but {flags} flags expected")
    C.toroid = vector
    return C


def _vertex_action(K: CGroup, caps: Caps):
    """Action of ``K`` on its vertices; vertex 0 is fixed by ``<rho_1..>``."""
    ca = coset_action(K.group, K.parabolic(range(1, K.rank)), caps.elements)
    return [g.images for g in ca.action], ca.degree


def two_k(K: CGroup, caps: Caps = DEFAULT_CAPS) -> CGroup:
    """Danzer's generalised cube over ``K``, of type ``{4, p_1, ...}``."""
    action, m = _vertex_action(K, caps)
    d = 2 * m
    swap = np.arange(d, dtype=np.int32)
    swap[0], swap[m] = m, 0
    gens = [Permutation(swap)]
    for a in action:
        gens.append(Permutation(np.concatenate([a, a + m]).astype(np.int32)))
    formula = OrderFormula(m, K.order())
    C = CGroup(gens, d, label=f"2^{{{K.label}}}" if K.label else None, formula=formula)
    if C.order() != formula.value:
        raise OrderMismatch(f"2^K has order {C.order()}, expected {formula}")
    return C


def _is_cube(symbol) -> bool:
    return symbol is not None and len(symbol) >= 1 and symbol[0] == 4 and all(p == 3 for p in symbol[1:])


def delta_two_k(K: CGroup, caps: Caps = DEFAULT_CAPS) -> CGroup:
    """The dual of ``2^(K*)``: type ``{p_1, ..., 4}`` with facets isomorphic to ``K``."""
    C = dual(two_k(dual(K), caps))
    C.label = f"delta2^{{{K.label}}}" if K.label else None
    if _is_cube(K.schlafli()):
        C.toroid = (4,) + (0,) * (C.rank - 2)
    return C


# ---------------------------------------------------------------------------
# the explicit face poset of 2^K
# ---------------------------------------------------------------------------

def polytope_faces(K: CGroup, caps: Caps = DEFAULT_CAPS) -> list[list[int]]:
    """Faces of ``K`` by rank ``-1..rank``, each as a bitmask of its vertices.

    The base ``j``-face is the orbit of the base vertex under
    ``<rho_0..rho_{j-1}>``; the other ``j``-faces are its images.
    """
    action, m = _vertex_action(K, caps)
    out = [[0]]
    for j in range(K.rank + 1):
        base = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for v in frontier:
                for a in action[:j]:
                    w = int(a[v])
                    if w not in base:
                        base.add(w)
                        nxt.append(w)
            frontier = nxt
        mask = sum(1 << v for v in base)
        seen = {mask}
        order = [mask]
        k = 0
        while k < len(order):
            cur = order[k]
            k += 1
            verts = [v for v in range(m) if cur >> v & 1]
            for a in action:
                img = sum(1 << int(a[v]) for v in verts)
                if img not in seen:
                    seen.add(img)
                    order.append(img)
        out.append(sorted(order))
    return out


@dataclass
class DanzerPoset:
    """Faces ``F(x)`` of ``2^K`` as (rank, K-face id, fixed-coordinate mask).

    The ``i``-faces of ``2^K`` come from the ``(i-1)``-faces of ``K``:
    ``faces[i + 1]`` holds pairs ``(face id, x)`` with ``x`` keeping only the
    coordinates outside the face, and the face id indexes the vertex masks in
    ``kfaces[i + 1]``.  ``kfaces[0]`` is an empty placeholder for the empty face.
    """

    m: int
    kfaces: list
    faces: list = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.faces) - 2

    def face_counts(self) -> list[int]:
        """Counts for ranks ``-1 .. rank``."""
        return [len(f) for f in self.faces]

    def contains(self, lower: tuple, upper: tuple) -> bool:
        """Inclusion ``F(x) <= G(y)`` between faces given as (rank, id, x)."""
        (ri, fi, x), (rj, gj, y) = lower, upper
        if ri == -1:
            return True
        if rj == -1:
            return False
        F = self.kfaces[ri + 1][fi]
        G = self.kfaces[rj + 1][gj]
        return F & ~G == 0 and (x & ~G) == (y & ~G)

    def to_json(self) -> dict:
        return {"m": self.m, "faces": [
            {"rank": r - 1, "kernelFace": fid, "fixedMask": x}
            for r, level in enumerate(self.faces) for fid, x in level]}


def danzer_poset(K: CGroup, cap: int = 10**6, caps: Caps = DEFAULT_CAPS) -> DanzerPoset:
    kf = polytope_faces(K, caps)
    m = bin(kf[-1][0]).count("1")
    total = 1 + sum(len(level) * 2**(m - bin(level[0]).count("1")) for level in kf)
    if total > cap:
        raise CapExceeded("Danzer poset faces", cap, total)
    full = (1 << m) - 1
    faces = [[(0, 0)]]  # the empty face
    for fid_level in kf:
        level = []
        for fid, F in enumerate(fid_level):
            free = full & ~F
            for x in _submasks(free):
                level.append((fid, x))
        faces.append(level)
    return DanzerPoset(m, [[]] + kf, faces)


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def poset_flag_count(P: DanzerPoset) -> int:
    """Number of maximal chains, by dynamic programming up the ranks."""
    # rank-0 faces each sit over the single empty face
    prev = {key: 1 for key in P.faces[1]}
    for r in range(2, len(P.faces)):
        lower_faces = P.kfaces[r - 1]
        cur = {}
        for gid, y in P.faces[r]:
            G = P.kfaces[r][gid]
            total = 0
            for fid, F in enumerate(lower_faces):
                if F & ~G:
                    continue
                for b in _submasks(G & ~F):
                    total += prev.get((fid, (y & ~G) | b), 0)
            cur[(gid, y)] = total
        prev = cur
    return sum(prev.values())


def danzer_face_formula(K: CGroup, caps: Caps = DEFAULT_CAPS) -> list[int]:
    """Closed form ``f_{i-1}(K) * 2^(m - v_i)`` for ranks ``0..rank(K)+1``."""
    kf = polytope_faces(K, caps)
    m = bin(kf[-1][0]).count("1")
    return [len(level) * 2**(m - bin(level[0]).count("1")) for level in kf]


# ---------------------------------------------------------------------------
# symbol grammar used by the CLI
# ---------------------------------------------------------------------------

_INT_LIST = re.compile(r"^\s*(\d+(\s*,\s*\d+)*)?\s*$")


def _matching(text: str, start: int) -> int:
    depth = 0
    for k in range(start, len(text)):
        if text[k] == "{":
            depth += 1
        elif text[k] == "}":
            depth -= 1
            if depth == 0:
                return k
    raise SymbolError(f"unbalanced braces in {text!r}")


def _ints(body: str, text: str) -> tuple[int, ...]:
    if not _INT_LIST.match(body):
        raise SymbolError(f"expected a list of integers in {text!r}")
    return tuple(int(t) for t in body.split(",") if t.strip())


def build_from_symbol(text: str, caps: Caps = DEFAULT_CAPS) -> CGroup:
    """Build a C-group from a construction symbol.

    Grammar: ``{p,q,...}`` with an optional toroid vector ``:(a,b,...)`` or
    extra relators ``/[i j k ...]^e`` (repeatable); ``2^{X}``; ``delta2^{X}``;
    ``dual:X``.
    """
    s = text.strip()
    if s.startswith("dual:"):
        return dual(build_from_symbol(s[5:], caps))
    for prefix, fn in (("delta2^", delta_two_k), ("2^", two_k)):
        if s.startswith(prefix):
            rest = s[len(prefix):]
            if not rest.startswith("{") or _matching(rest, 0) != len(rest) - 1:
                raise SymbolError(f"expected {prefix}{{...}} in {text!r}")
            inner = build_from_symbol(rest[1:-1], caps)
            return fn(inner, caps)
    if not s.startswith("{"):
        raise SymbolError(f"unrecognised symbol {text!r}")
    end = _matching(s, 0)
    symbol = _ints(s[1:end], text)
    tail = s[end + 1:].strip()
    if tail.startswith(":"):
        m = re.fullmatch(r":\s*\(([^)]*)\)\s*", tail)
        if not m:
            raise SymbolError(f"bad toroid vector in {text!r}")
        return toroid(symbol, _ints(m.group(1), text), caps)
    relators = []
    while tail:
        m = re.match(r"/\s*\[([\d\s]+)\]\s*\^\s*(\d+)\s*", tail)
        if not m:
            raise SymbolError(f"cannot parse {tail!r} in {text!r}")
        word = [int(t) for t in m.group(1).split()]
        if any(x > len(symbol) for x in word):
            raise SymbolError(f"relator uses a generator beyond rank {len(symbol) + 1}")
        relators.append(word * int(m.group(2)))
        tail = tail[m.end():]
    label = s if relators else _fmt_symbol(symbol)
    return coxeter_polytope(symbol, relators, caps, label=label)
