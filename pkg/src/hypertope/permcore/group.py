"""Permutation groups indexed by a stabilizer chain (base and strong generating set)."""
from __future__ import annotations

from collections import deque
from typing import Sequence

import numpy as np

from .. import _kernels
from ..errors import CapExceeded, DegreeMismatch, NotSubgroup
from .perm import Permutation, as_array

DEFAULT_ELEMENT_CAP = 10**6
_SCHREIER_BATCH = 4096


class _Level:
    """One level of the chain: orbit of a base point and its transversal."""

    __slots__ = ("point", "orbit", "index", "u", "uinv", "gens")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.orbit = [point]
        self.index = {point: 0}
        ident = np.arange(degree, dtype=np.int32)
        self.u = [ident]
        self.uinv = [ident]
        self.gens: list[int] = []

    def extend(self, strong: list[np.ndarray], new_gens: Sequence[int]) -> None:
        """Grow the orbit to close under ``self.gens``; existing reps never change."""
        old = set(self.gens)
        self.gens.extend(g for g in new_gens if g not in old)
        queue = deque()
        # new generators act on every known point, old ones only on new points
        for k in range(len(self.orbit)):
            for g in new_gens:
                self._visit(k, strong[g], queue)
        while queue:
            k = queue.popleft()
            for g in self.gens:
                self._visit(k, strong[g], queue)

    def _visit(self, k: int, s: np.ndarray, queue: deque) -> None:
        c = int(s[self.orbit[k]])
        if c in self.index:
            return
        u = s[self.u[k]]
        inv = np.empty_like(u)
        inv[u] = np.arange(u.size, dtype=np.int32)
        self.index[c] = len(self.orbit)
        self.orbit.append(c)
        self.u.append(u)
        self.uinv.append(inv)
        queue.append(len(self.orbit) - 1)


class StabChain:
    """Base, strong generators and transversals of a permutation group.

    Built by the deterministic incremental Schreier-Sims algorithm; every
    Schreier generator of every level is sifted, so the chain is exact.  New
    base points are the first point moved by the offending strong generator.
    """

    def __init__(self, degree: int, generators: np.ndarray):
        self.degree = degree
        self.strong: list[np.ndarray] = []
        self.levels: list[_Level] = []
        self._packed = None
        ident = np.arange(degree, dtype=np.int32)
        for g in generators:
            if not np.array_equal(g, ident):
                self._add_strong(np.ascontiguousarray(g, dtype=np.int32), len(self.levels))
        self._complete()

    # -- construction ---------------------------------------------------
    def _add_strong(self, h: np.ndarray, depth: int) -> None:
        """Add ``h`` (which fixes the first ``depth`` base points) to the chain."""
        idx = len(self.strong)
        self.strong.append(h)
        if depth == len(self.levels) or all(h[lv.point] == lv.point for lv in self.levels[depth:]):
            moved = np.flatnonzero(h != np.arange(self.degree))
            self.levels.append(_Level(int(moved[0]), self.degree))
        for lv in self.levels:
            lv.extend(self.strong, [idx])
            if h[lv.point] != lv.point:
                break
        self._packed = None

    def _complete(self) -> None:
        checked = [set() for _ in self.levels]
        i = len(self.levels) - 1
        while i >= 0:
            while len(checked) < len(self.levels):
                checked.append(set())
            found = self._check_level(i, checked[i])
            if found is None:
                i -= 1
                continue
            h, depth = found
            self._add_strong(h, i + 1)
            i = min(depth, len(self.levels) - 1)

    def _check_level(self, i: int, checked: set):
        """Sift unchecked Schreier generators of level ``i``; return the first
        non-trivial residue with the level it dropped out at, or None."""
        lv = self.levels[i]
        pairs = [(k, g) for k in range(len(lv.orbit)) for g in lv.gens if (k, g) not in checked]
        if not pairs:
            return None
        base, pos, tinv = self.packed(i + 1)
        ident = np.arange(self.degree, dtype=np.int32)
        for start in range(0, len(pairs), _SCHREIER_BATCH):
            block = pairs[start:start + _SCHREIER_BATCH]
            ks = np.fromiter((k for k, _ in block), dtype=np.int64, count=len(block))
            gs = np.fromiter((g for _, g in block), dtype=np.int64, count=len(block))
            U = np.stack([lv.u[k] for k in ks])
            S = np.stack([self.strong[g] for g in gs])
            us = np.take_along_axis(S, U, axis=1)
            tgt = us[:, lv.point]
            Vinv = np.stack([lv.uinv[lv.index[int(c)]] for c in tgt])
            sch = np.take_along_axis(Vinv, us, axis=1)
            nontrivial = np.flatnonzero((sch != ident).any(axis=1))
            if nontrivial.size:
                j, level, residue = _kernels.sift_first_failure(
                    np.ascontiguousarray(sch[nontrivial]), base, pos, tinv)
            else:
                j = -1
            if j < 0:
                checked.update(block)
                continue
            stop = int(nontrivial[j])
            checked.update(block[:stop + 1])
            return np.asarray(residue, dtype=np.int32), i + 1 + int(level)
        return None

    def packed(self, start: int = 0):
        """Arrays consumed by the sifting kernels, for levels ``start`` onwards."""
        if self._packed is None:
            nlev = len(self.levels)
            base = np.array([lv.point for lv in self.levels], dtype=np.int32)
            pos = np.full((nlev, self.degree), -1, dtype=np.int32)
            rows = []
            for l, lv in enumerate(self.levels):
                off = len(rows)
                pos[l, lv.orbit] = np.arange(off, off + len(lv.orbit), dtype=np.int32)
                rows.extend(lv.uinv)
            tinv = np.stack(rows) if rows else np.empty((0, self.degree), dtype=np.int32)
            self._packed = (base, pos, np.ascontiguousarray(tinv, dtype=np.int32))
        base, pos, tinv = self._packed
        return base[start:], pos[start:], tinv

    # -- queries --------------------------------------------------------
    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(lv.orbit) for lv in self.levels]

    def order(self) -> int:
        o = 1
        for lv in self.levels:
            o *= len(lv.orbit)
        return o

    def sift_mask(self, elems: np.ndarray) -> np.ndarray:
        if elems.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        base, pos, tinv = self.packed()
        if base.size == 0:
            return (elems == np.arange(self.degree)).all(axis=1)
        return _kernels.sift_mask(np.ascontiguousarray(elems, dtype=np.int32), base, pos, tinv)

    def element_array(self) -> np.ndarray:
        """Every element once, as rows; the identity comes first."""
        E = np.arange(self.degree, dtype=np.int32)[None, :]
        for lv in reversed(self.levels):
            U = np.stack(lv.u)
            E = U[:, E].reshape(-1, self.degree)
        return E


class PermGroup:
    """A permutation group given by generators; the chain is built on demand."""

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree is required for a group without generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in a degree-{degree} group")
        self.degree = degree
        self.generators = tuple(gens)
        self._chain: StabChain | None = None

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls([], degree)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain(self.degree, as_array(self.generators, self.degree))
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatch(f"degree {p.degree} vs group degree {self.degree}")
        return bool(self.chain.sift_mask(p.images[None, :])[0])

    __contains__ = contains

    def contains_many(self, elems: np.ndarray) -> np.ndarray:
        """Vectorised membership for an ``(n, degree)`` array of images."""
        return self.chain.sift_mask(elems)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def element_array(self, cap: int = DEFAULT_ELEMENT_CAP) -> np.ndarray:
        order = self.order()
        if order > cap:
            raise CapExceeded("group enumeration", cap, order)
        return self.chain.element_array()

    def elements(self, cap: int = DEFAULT_ELEMENT_CAP) -> list[Permutation]:
        return [Permutation._wrap(row) for row in self.element_array(cap)]

    def orbits(self) -> list[list[int]]:
        """Point orbits, each sorted, ordered by least point."""
        label = np.full(self.degree, -1, dtype=np.int64)
        out = []
        gens = [g.images for g in self.generators]
        for x in range(self.degree):
            if label[x] >= 0:
                continue
            label[x] = len(out)
            orb = [x]
            k = 0
            while k < len(orb):
                y = orb[k]
                k += 1
                for g in gens:
                    z = int(g[y])
                    if label[z] < 0:
                        label[z] = len(out)
                        orb.append(z)
            out.append(sorted(orb))
        return out


def group_order(G: PermGroup) -> int:
    return G.order()


def contains(G: PermGroup, p: Permutation) -> bool:
    return G.contains(p)


def elements(G: PermGroup, cap: int = DEFAULT_ELEMENT_CAP) -> list[Permutation]:
    return G.elements(cap)


def subgroup_intersection(A: PermGroup, B: PermGroup, cap: int = DEFAULT_ELEMENT_CAP) -> PermGroup:
    """Enumerate the smaller group and keep the elements that sift through the other."""
    if A.degree != B.degree:
        raise DegreeMismatch(f"degrees differ: {A.degree} vs {B.degree}")
    small, big = (A, B) if A.order() <= B.order() else (B, A)
    if small.order() > cap:
        raise CapExceeded("subgroup intersection", cap, small.order())
    elems = small.chain.element_array()
    common = elems[big.contains_many(elems)]
    return group_from_elements(common, A.degree)


def group_from_elements(elems: np.ndarray, degree: int) -> PermGroup:
    """Smallest-effort generating set for a subgroup given by its element list."""
    G = PermGroup.trivial(degree)
    target = elems.shape[0]
    while G.order() < target:
        missing = elems[~G.contains_many(elems)]
        G = PermGroup(G.generators + (Permutation._wrap(missing[0]),), degree)
    return G


class CosetAction:
    """Right-coset action of a group on the cosets of a subgroup."""

    def __init__(self, group: PermGroup, subgroup: PermGroup,
                 action: list[Permutation], representatives: list[Permutation]):
        self.group = group
        self.subgroup = subgroup
        self.action = action
        self.representatives = representatives

    @property
    def degree(self) -> int:
        return len(self.representatives)

    def image(self) -> PermGroup:
        return PermGroup(self.action, self.degree)

    def __iter__(self):
        yield self.image()
        yield self.representatives


def coset_action(G: PermGroup, H: PermGroup, cap: int = DEFAULT_ELEMENT_CAP) -> CosetAction:
    """Action of ``G``'s generators on the right cosets ``H g``.

    Cosets ``Ha`` and ``Hb`` coincide iff ``a b^-1`` sifts through ``H``.
    Representatives are discovered breadth first from the identity.  To
    avoid comparing against every representative, cosets are bucketed by an
    invariant (which H-orbit lands on each point) and only compared within
    a bucket.
    """
    if H.degree != G.degree:
        raise DegreeMismatch(f"degrees differ: {H.degree} vs {G.degree}")
    if not H.is_subgroup_of(G):
        raise NotSubgroup("subgroup generators are not all in the group")
    d = G.degree
    orbit_of = np.empty(d, dtype=np.int32)
    for k, orb in enumerate(H.orbits()):
        orbit_of[orb] = k
    gens = [g.images for g in G.generators]

    reps: list[np.ndarray] = [np.arange(d, dtype=np.int32)]
    rep_inv: list[np.ndarray] = [reps[0]]
    buckets: dict[bytes, list[int]] = {}

    def key(inv: np.ndarray) -> bytes:
        return orbit_of[inv].tobytes()

    buckets[key(rep_inv[0])] = [0]
    table = [[-1] * len(gens)]
    k = 0
    while k < len(reps):
        r = reps[k]
        for gi, g in enumerate(gens):
            x = g[r]
            xinv = np.empty_like(x)
            xinv[x] = np.arange(d, dtype=np.int32)
            bucket = buckets.setdefault(key(xinv), [])
            hit = -1
            if bucket:
                cands = np.stack([rep_inv[j] for j in bucket])
                # x * rep^-1 in H
                test = cands[:, x]
                mask = H.contains_many(test)
                if mask.any():
                    hit = bucket[int(np.argmax(mask))]
            if hit < 0:
                if len(reps) >= cap:
                    raise CapExceeded("coset action", cap)
                hit = len(reps)
                reps.append(x)
                rep_inv.append(xinv)
                bucket.append(hit)
                table.append([-1] * len(gens))
            table[k][gi] = hit
        k += 1
    n = len(reps)
    action = [Permutation(np.array([table[c][gi] for c in range(n)], dtype=np.int32))
              for gi in range(len(gens))]
    return CosetAction(G, H, action, [Permutation._wrap(r) for r in reps])
