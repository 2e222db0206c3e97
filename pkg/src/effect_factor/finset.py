"""Finite sets, total functions as tables, and the image factorization.

Elements of a :class:`FinSet` are the dense indices ``0 .. size-1``.
Structured carriers (pairs, tagged sums, functions) are encoded onto those
indices with fixed schemes so that element equality is index equality:

* product ``X x Y``: ``(x, y) -> x * |Y| + y``
* coproduct ``X + Y``: left ``x -> x``, right ``y -> |X| + y``
* exponential ``C^B``: ``g -> sum(g(b) * |C|**b)`` (digit ``g(b)`` at position ``b``)
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

DEFAULT_MAX_CARRIER = 10**6
# digits in one encoded element; bounds per-element work for exponential carriers
MAX_ELEMENT_WIDTH = 2**12

_max_carrier = DEFAULT_MAX_CARRIER


class InstanceTooLarge(Exception):
    """A constructed carrier, table or enumeration exceeds the configured cap."""


class FinSetError(ValueError):
    pass


class FactorizationError(ValueError):
    """Raised for ill-formed diagonal fill-in problems."""


def max_carrier() -> int:
    return _max_carrier


@contextlib.contextmanager
def carrier_cap(limit: int) -> Iterator[int]:
    """Temporarily change the size cap used by every constructor."""
    global _max_carrier
    previous = _max_carrier
    _max_carrier = int(limit)
    try:
        yield _max_carrier
    finally:
        _max_carrier = previous


def guard(size: int, what: str = "carrier") -> int:
    if size > _max_carrier:
        raise InstanceTooLarge(f"{what} of size {size} exceeds cap {_max_carrier}")
    return size


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 0:
            raise FinSetError(f"negative size {self.size}")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.size:
                raise FinSetError(f"{len(labels)} labels for a set of size {self.size}")
            if len(set(labels)) != len(labels):
                raise FinSetError("labels must be pairwise distinct")

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.size))

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return str(i)


@dataclass(frozen=True)
class FinFun:
    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.dom.size:
            raise FinSetError(f"table has length {len(table)}, domain has size {self.dom.size}")
        for v in table:
            if not 0 <= v < self.cod.size:
                raise FinSetError(f"table entry {v} outside codomain of size {self.cod.size}")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def image(self) -> set[int]:
        return set(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_bijective(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()


def identity_fun(X: FinSet) -> FinFun:
    return FinFun(X, X, tuple(range(X.size)))


def compose(g: FinFun, f: FinFun) -> FinFun:
    """``g . f``; requires ``f.cod == g.dom`` up to size."""
    if f.cod.size != g.dom.size:
        raise FinSetError(f"cannot compose: codomain size {f.cod.size} != domain size {g.dom.size}")
    gt = g.table
    return FinFun(f.dom, g.cod, tuple(gt[i] for i in f.table))


# -- digit encodings --------------------------------------------------------


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
_POW2_BITS = {2: 1, 4: 2, 8: 3, 16: 4, 32: 5}


@lru_cache(maxsize=1 << 16)
def decode_digits(enc: int, base: int, length: int) -> tuple[int, ...]:
    """Little-endian base-``base`` digits of ``enc``, padded to ``length``."""
    bits = _POW2_BITS.get(base)
    if bits is not None and length > 8:
        mask = base - 1
        return tuple((enc >> (bits * i)) & mask for i in range(length))
    digits = []
    for _ in range(length):
        enc, d = divmod(enc, base)
        digits.append(d)
    return tuple(digits)


def encode_digits(digits: Sequence[int], base: int) -> int:
    if 2 <= base <= 36 and len(digits) > 8:
        return int("".join(_DIGITS[d] for d in reversed(digits)), base)
    enc = 0
    for d in reversed(digits):
        enc = enc * base + d
    return enc


# -- universal constructions ------------------------------------------------


@dataclass(frozen=True)
class Product:
    left: FinSet
    right: FinSet

    @property
    def obj(self) -> FinSet:
        return FinSet(guard(self.left.size * self.right.size, "product"))

    def pair(self, x: int, y: int) -> int:
        return x * self.right.size + y

    def unpair(self, p: int) -> tuple[int, int]:
        return divmod(p, self.right.size)

    @property
    def fst(self) -> FinFun:
        return FinFun(self.obj, self.left, tuple(p // self.right.size for p in range(self.obj.size)))

    @property
    def snd(self) -> FinFun:
        return FinFun(self.obj, self.right, tuple(p % self.right.size for p in range(self.obj.size)))

    def mediate(self, f: FinFun, g: FinFun) -> FinFun:
        """The unique ``<f, g> : Z -> X x Y``."""
        if f.dom.size != g.dom.size:
            raise FinSetError("pairing needs a common domain")
        return FinFun(f.dom, self.obj, tuple(self.pair(a, b) for a, b in zip(f.table, g.table)))


def product(X: FinSet, Y: FinSet) -> Product:
    return Product(X, Y)


@dataclass(frozen=True)
class Coproduct:
    left: FinSet
    right: FinSet

    @property
    def obj(self) -> FinSet:
        return FinSet(guard(self.left.size + self.right.size, "coproduct"))

    @property
    def inl(self) -> FinFun:
        return FinFun(self.left, self.obj, tuple(range(self.left.size)))

    @property
    def inr(self) -> FinFun:
        offset = self.left.size
        return FinFun(self.right, self.obj, tuple(offset + y for y in range(self.right.size)))

    def untag(self, i: int) -> tuple[int, int]:
        """``(0, x)`` for a left element, ``(1, y)`` for a right one."""
        if i < self.left.size:
            return 0, i
        return 1, i - self.left.size

    def copair(self, f: FinFun, g: FinFun) -> FinFun:
        """The unique ``[f, g] : X + Y -> Z``."""
        if f.cod.size != g.cod.size:
            raise FinSetError("copairing needs a common codomain")
        return FinFun(self.obj, f.cod, f.table + g.table)


def coproduct(X: FinSet, Y: FinSet) -> Coproduct:
    return Coproduct(X, Y)


@dataclass(frozen=True)
class Exponential:
    """All functions ``base -> target``, i.e. ``target ** base``."""

    base: FinSet
    target: FinSet

    @property
    def size(self) -> int:
        return self.target.size ** self.base.size

    @property
    def obj(self) -> FinSet:
        return FinSet(guard(self.size, "exponential"))

    def apply(self, enc: int, b: int) -> int:
        return (enc // self.target.size**b) % self.target.size

    def tabulate(self, g: Sequence[int]) -> int:
        if len(g) != self.base.size:
            raise FinSetError(f"function table of length {len(g)} for exponent {self.base.size}")
        return encode_digits(g, self.target.size)

    def untabulate(self, enc: int) -> tuple[int, ...]:
        return decode_digits(enc, self.target.size, self.base.size)

    def evaluation(self) -> FinFun:
        """``ev : C^B x B -> C``."""
        prod = Product(self.obj, self.base)
        table = tuple(self.apply(g, b) for g in range(self.size) for b in range(self.base.size))
        return FinFun(prod.obj, self.target, table)

    def curry(self, f: FinFun, Z: FinSet) -> FinFun:
        """The transpose ``Z -> C^B`` of ``f : Z x B -> C``."""
        nb = self.base.size
        return FinFun(Z, self.obj, tuple(self.tabulate(f.table[z * nb:(z + 1) * nb]) for z in range(Z.size)))


def exponential(B: FinSet, C: FinSet) -> Exponential:
    return Exponential(B, C)


# -- the (surjection, injection) factorization system -----------------------


@dataclass(frozen=True)
class Factorization:
    e: FinFun
    mid: FinSet
    n: FinFun


def factorize(f: FinFun) -> Factorization:
    """Image factorization ``f = n . e``; the image is ordered by first occurrence."""
    position: dict[int, int] = {}
    e_table = []
    for v in f.table:
        if v not in position:
            position[v] = len(position)
        e_table.append(position[v])
    mid = FinSet(len(position))
    n_table = tuple(sorted(position, key=position.__getitem__))
    return Factorization(FinFun(f.dom, mid, tuple(e_table)), mid, FinFun(mid, f.cod, n_table))


def check_diagonal_fill(e: FinFun, m: FinFun, top: FinFun, bottom: FinFun) -> FinFun:
    """Solve the lifting problem for the commuting square ``m . top = bottom . e``.

    ``e : A ->> B`` must be surjective and ``m : C >-> D`` injective. Returns the
    unique ``d : B -> C`` with ``d . e = top`` and ``m . d = bottom``.
    """
    if not e.is_surjective():
        raise FactorizationError("left map is not surjective")
    if not m.is_injective():
        raise FactorizationError("right map is not injective")
    if top.dom.size != e.dom.size or bottom.dom.size != e.cod.size:
        raise FactorizationError("square is ill-typed")
    if top.cod.size != m.dom.size or bottom.cod.size != m.cod.size:
        raise FactorizationError("square is ill-typed")
    mt, bt = m.table, bottom.table
    if any(mt[c] != bt[b] for c, b in zip(top.table, e.table)):
        raise FactorizationError("square does not commute")

    # d is forced on the image of e, and e is surjective
    d: list[Optional[int]] = [None] * e.cod.size
    for a, b in enumerate(e.table):
        c = top.table[a]
        if d[b] is not None and d[b] != c:
            raise FactorizationError(f"no well-defined diagonal at {b}")
        d[b] = c
    if any(mt[c] != bt[b] for b, c in enumerate(d)):
        raise FactorizationError("diagonal does not factor the bottom edge")
    return FinFun(e.cod, top.cod, tuple(d))  # type: ignore[arg-type]
