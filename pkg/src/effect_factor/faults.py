"""Deliberately broken structures used to exercise the negative paths of
the checkers."""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import ClassVar, Optional

from .monad import MonadSpec, Powerset
from .signature import FactoredMonad, Obj, _size


@dataclass(frozen=True)
class CorruptedBind(MonadSpec):
    """``base`` with one entry of its extension table overwritten."""

    base: MonadSpec
    nx: int
    ny: int
    t: int
    k: tuple[int, ...]
    replacement: int
    kind: ClassVar[str] = "corrupted"

    def describe(self):
        return f"corrupted({self.base.describe()})"

    def carrier_size(self, n):
        return self.base.carrier_size(n)

    def element_width(self, n):
        return self.base.element_width(n)

    def unit_elem(self, n, x):
        return self.base.unit_elem(n, x)

    def bind_elem(self, nx, ny, t, k):
        if (nx, ny, t) == (self.nx, self.ny, self.t) and tuple(k) == self.k:
            return self.replacement
        return self.base.bind_elem(nx, ny, t, k)

    def decode(self, n, t):
        return self.base.decode(n, t)

    def encode(self, n, value):
        return self.base.encode(n, value)


def corrupted_powerset() -> CorruptedBind:
    """Powerset whose extension of the swap ``{0} <-> {1}`` sends ``{0, 1}``
    to ``{0}`` instead of ``{0, 1}``. Both unit laws survive."""
    return CorruptedBind(Powerset(), 2, 2, 0b11, (0b10, 0b01), 0b01)


def _copy(F: FactoredMonad) -> FactoredMonad:
    G = FactoredMonad(F.interp, F.work_cap)
    G.objects = copy.deepcopy(F.objects)
    return G


def merge_pair(F: FactoredMonad, X: Obj, r1: int = 0, r2: int = 1) -> FactoredMonad:
    """A copy of ``F`` whose ``n_X`` sends ``r2`` to the image of ``r1``."""
    G = _copy(F)
    entry = G.saturate(_size(X))
    entry.elements[r2] = entry.elements[r1]
    return G


def remove_element(F: FactoredMonad, X: Obj, r: Optional[int] = None) -> FactoredMonad:
    """A copy of ``F`` with one element (by default the last reached) dropped from ``R X``."""
    G = _copy(F)
    entry = G.saturate(_size(X))
    r = len(entry.elements) - 1 if r is None else r
    del entry.elements[r]
    del entry.witnesses[r]
    entry.index = {v: i for i, v in enumerate(entry.elements)}
    return G
