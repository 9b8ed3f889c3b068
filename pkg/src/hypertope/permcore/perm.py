"""Finite permutations on ``{0, ..., degree-1}``.

Composition is left to right everywhere in the package: ``p * q`` first
applies ``p``, then ``q``, so ``(p * q)(x) == q(p(x))``.  Cycle strings are
1-based, e.g. ``"(1 2)(3 4)"``, with ``"()"`` for the identity.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

import numpy as np

from ..errors import DegreeMismatch

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """An immutable permutation stored as an int32 array of images."""

    __slots__ = ("_a", "_hash")

    def __init__(self, images: Sequence[int] | np.ndarray, *, check: bool = True):
        a = np.array(images, dtype=np.int32)
        if a.ndim != 1:
            raise ValueError("images must be one-dimensional")
        if check:
            if a.size and (a.min() < 0 or a.max() >= a.size
                           or np.bincount(a, minlength=a.size).max() != 1):
                raise ValueError("images do not form a bijection")
        a.setflags(write=False)
        self._a = a
        self._hash = None

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "Permutation":
        p = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int32)
        a.setflags(write=False)
        p._a = a
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._wrap(np.arange(degree, dtype=np.int32))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from 0-based cycles."""
        a = np.arange(degree, dtype=np.int32)
        for cyc in cycles:
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc}")
            for k, x in enumerate(cyc):
                a[x] = cyc[(k + 1) % len(cyc)]
        return cls(a)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "Permutation":
        """Parse 1-based disjoint-cycle notation such as ``"(1 2)(3 4)"``."""
        stripped = text.strip()
        if _CYCLE_RE.sub("", stripped).strip():
            raise ValueError(f"cannot parse permutation {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(stripped):
            pts = [int(t) - 1 for t in re.split(r"[\s,]+", body.strip()) if t]
            if any(x < 0 for x in pts):
                raise ValueError(f"points are 1-based: {text!r}")
            if pts:
                cycles.append(pts)
        need = max((max(c) + 1 for c in cycles), default=0)
        if degree is None:
            degree = need
        elif need > degree:
            raise ValueError(f"point {need} exceeds degree {degree}")
        return cls.from_cycles(cycles, degree)

    # -- basic protocol -------------------------------------------------
    @property
    def images(self) -> np.ndarray:
        return self._a

    @property
    def degree(self) -> int:
        return int(self._a.size)

    def __call__(self, x: int) -> int:
        return int(self._a[x])

    def __len__(self) -> int:
        return self.degree

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._a.size == other._a.size and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._a.tobytes())
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"

    def __str__(self) -> str:
        return self.cycle_string()

    # -- arithmetic -----------------------------------------------------
    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self._a)
        inv[self._a] = np.arange(self._a.size, dtype=np.int32)
        return Permutation._wrap(inv)

    def conjugate(self, by: "Permutation") -> "Permutation":
        """``by^-1 * self * by``."""
        return by.inverse() * self * by

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._a, np.arange(self._a.size)))

    def cycles(self) -> list[list[int]]:
        """Non-trivial cycles, 0-based, each starting at its least point."""
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        a = self._a
        for start in range(self.degree):
            if seen[start] or a[start] == start:
                continue
            cyc = [start]
            seen[start] = True
            x = int(a[start])
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = int(a[x])
            out.append(cyc)
        return out

    def order(self) -> int:
        """Order as the lcm of cycle lengths."""
        o = 1
        for cyc in self.cycles():
            o = np.lcm(o, len(cyc)).item()
        return int(o)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self._a != np.arange(self.degree))

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)

    def extend(self, degree: int, offset: int = 0) -> "Permutation":
        """Embed into a larger degree, shifting points by ``offset``."""
        if offset + self.degree > degree:
            raise ValueError("embedding does not fit")
        a = np.arange(degree, dtype=np.int32)
        a[offset:offset + self.degree] = self._a + offset
        return Permutation._wrap(a)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Left-to-right product: the result maps ``x`` to ``q(p(x))``."""
    if p.degree != q.degree:
        raise DegreeMismatch(f"degrees differ: {p.degree} vs {q.degree}")
    return Permutation._wrap(q.images[p.images])


def as_array(perms: Sequence[Permutation], degree: int) -> np.ndarray:
    """Stack permutations into an ``(n, degree)`` int32 array."""
    if not perms:
        return np.empty((0, degree), dtype=np.int32)
    for p in perms:
        if p.degree != degree:
            raise DegreeMismatch(f"expected degree {degree}, got {p.degree}")
    return np.stack([p.images for p in perms]).astype(np.int32, copy=False)
