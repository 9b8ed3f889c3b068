"""Coset enumeration for presentations whose generators are all involutions."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .. import _kernels
from ..errors import CapExceeded
from .group import PermGroup
from .perm import Permutation

DEFAULT_COSET_CAP = 10**6


@dataclass(frozen=True)
class Presentation:
    """Generators ``0..generators-1``, each implicitly of order dividing two."""

    generators: int
    relators: tuple[tuple[int, ...], ...] = ()
    subgroup: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(tuple(int(x) for x in w) for w in self.relators))
        object.__setattr__(self, "subgroup", tuple(tuple(int(x) for x in w) for w in self.subgroup))
        for w in self.relators:
            if not w:
                raise ValueError("relators must be nonempty")
        for w in self.relators + self.subgroup:
            if any(x < 0 or x >= self.generators for x in w):
                raise ValueError(f"generator index out of range in {w}")

    def with_subgroup(self, subgroup: Sequence[Sequence[int]]) -> "Presentation":
        return Presentation(self.generators, self.relators, tuple(tuple(w) for w in subgroup))

    @classmethod
    def from_json(cls, text: str) -> "Presentation":
        doc = json.loads(text)
        return cls(doc["generators"], doc.get("relators", ()), doc.get("subgroup", ()))

    def to_json(self) -> str:
        return json.dumps({"generators": self.generators,
                           "relators": [list(w) for w in self.relators],
                           "subgroup": [list(w) for w in self.subgroup]})


@dataclass
class CosetTable:
    """Complete coset table; row 0 is the subgroup itself."""

    table: np.ndarray
    defined: int = field(default=0)

    @property
    def index(self) -> int:
        return int(self.table.shape[0])

    def action(self) -> PermGroup:
        n = self.index
        gens = [Permutation(self.table[:, x]) for x in range(self.table.shape[1])]
        return PermGroup(gens, n)


def _flatten(words) -> tuple[np.ndarray, np.ndarray]:
    off = np.zeros(len(words) + 1, dtype=np.int64)
    for k, w in enumerate(words):
        off[k + 1] = off[k] + len(w)
    flat = np.fromiter((x for w in words for x in w), dtype=np.int32, count=int(off[-1]))
    return flat, off


def todd_coxeter(pres: Presentation, max_cosets: int = DEFAULT_COSET_CAP) -> tuple[CosetTable, PermGroup]:
    """Enumerate the cosets of ``<pres.subgroup>``.

    Cosets are scanned lowest number first and relators in input order; the
    involution relators ``x^2`` are built into the table.  Raises
    ``CapExceeded`` when more than ``max_cosets`` cosets would be alive at
    once, which is what happens for infinite-index subgroups.
    """
    if max_cosets <= 0:
        raise ValueError("max_cosets must be positive")
    rel, rel_off = _flatten(pres.relators)
    sub, sub_off = _flatten(pres.subgroup)
    out, status, defined = _kernels.todd_coxeter_kernel(
        pres.generators, rel, rel_off, sub, sub_off, max_cosets)
    if status != _kernels.TC_OK:
        raise CapExceeded("coset enumeration", max_cosets)
    ct = CosetTable(np.asarray(out), int(defined))
    return ct, ct.action()
