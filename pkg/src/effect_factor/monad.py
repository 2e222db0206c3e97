"""A closed catalog of strong monads on finite sets.

Every monad works on encoded carrier elements (plain ints). The element-level
primitives are ``unit_elem`` and ``bind_elem``; table-level maps (``unit``,
``kleisli_extend``, ``fmap``, ``strength``) are built from them and are
subject to the carrier cap. Objects only matter through their size, so the
element-level API takes sizes rather than :class:`FinSet` values.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools
from functools import lru_cache
from typing import Any, ClassVar, Iterator, Sequence

import numpy as np

from . import finset
from .finset import (
    FinFun,
    FinSet,
    InstanceTooLarge,
    decode_digits,
    encode_digits,
    guard,
)
from .checks import CheckResult, Dim, LawInstance, LawReport, run_cases

KINDS = ("identity", "exception", "reader", "state", "powerset", "continuation", "state_exc")


class MonadTypeError(TypeError):
    pass


@dataclass(frozen=True)
class MonadSpec:
    kind: ClassVar[str] = ""

    # -- to be provided per kind ---------------------------------------

    def carrier_size(self, n: int) -> int:
        raise NotImplementedError

    def element_width(self, n: int) -> int:
        """Number of digits in the representation of one element of ``T n``."""
        return 1

    def unit_elem(self, n: int, x: int) -> int:
        raise NotImplementedError

    def bind_elem(self, nx: int, ny: int, t: int, k: Sequence[int]) -> int:
        """Kleisli extension of ``k : nx -> T ny`` applied to ``t`` in ``T nx``."""
        raise NotImplementedError

    def decode(self, n: int, t: int) -> Any:
        raise NotImplementedError

    def encode(self, n: int, value: Any) -> int:
        raise NotImplementedError

    @property
    def params(self) -> dict[str, int]:
        return {}

    # -- shared ----------------------------------------------------------

    def describe(self) -> str:
        if not self.params:
            return self.kind
        inner = ", ".join(f"|{k}|={v}" for k, v in self.params.items())
        return f"{self.kind}({inner})"

    def check_width(self, n: int) -> None:
        width = self.element_width(n)
        if width > finset.MAX_ELEMENT_WIDTH:
            raise InstanceTooLarge(f"{self.kind} elements at |X|={n} have {width} digits (limit {finset.MAX_ELEMENT_WIDTH})")

    def carrier(self, X: FinSet) -> FinSet:
        return FinSet(guard(self.carrier_size(X.size), f"{self.kind} carrier"))

    def map_elem(self, nx: int, ny: int, t: int, f: Sequence[int]) -> int:
        return self.bind_elem(nx, ny, t, [self.unit_elem(ny, y) for y in f])

    def strength_elem(self, nx: int, ny: int, x: int, t: int) -> int:
        return self.map_elem(ny, nx * ny, t, [x * ny + y for y in range(ny)])


# -- catalog -------------------------------------------------------------------


@dataclass(frozen=True)
class Identity(MonadSpec):
    kind: ClassVar[str] = "identity"

    def carrier_size(self, n):
        return n

    def unit_elem(self, n, x):
        return x

    def bind_elem(self, nx, ny, t, k):
        return k[t]

    def decode(self, n, t):
        return t

    def encode(self, n, value):
        return value


@dataclass(frozen=True)
class ExceptionMonad(MonadSpec):
    """``X + E``; errors occupy the right summand."""

    E: int = 1
    kind: ClassVar[str] = "exception"

    @property
    def params(self):
        return {"E": self.E}

    def carrier_size(self, n):
        return n + self.E

    def unit_elem(self, n, x):
        return x

    def bind_elem(self, nx, ny, t, k):
        if t < nx:
            return k[t]
        return ny + (t - nx)

    def decode(self, n, t):
        return ("ok", t) if t < n else ("err", t - n)

    def encode(self, n, value):
        tag, v = value
        return v if tag == "ok" else n + v


@dataclass(frozen=True)
class Reader(MonadSpec):
    """``X^S``."""

    S: int = 2
    kind: ClassVar[str] = "reader"

    @property
    def params(self):
        return {"S": self.S}

    def carrier_size(self, n):
        return n ** self.S

    def element_width(self, n):
        return self.S

    def unit_elem(self, n, x):
        return encode_digits([x] * self.S, n)

    def bind_elem(self, nx, ny, t, k):
        S = self.S
        xs = decode_digits(t, nx, S)
        return encode_digits([decode_digits(k[xs[s]], ny, S)[s] for s in range(S)], ny)

    def decode(self, n, t):
        return decode_digits(t, n, self.S)

    def encode(self, n, value):
        return encode_digits(value, n)


@dataclass(frozen=True)
class State(MonadSpec):
    """``(X x S)^S``: digit ``s`` holds the pair ``(x, s')`` as ``x*|S| + s'``."""

    S: int = 2
    kind: ClassVar[str] = "state"

    @property
    def params(self):
        return {"S": self.S}

    def carrier_size(self, n):
        return (n * self.S) ** self.S

    def element_width(self, n):
        return self.S

    def unit_elem(self, n, x):
        S = self.S
        return encode_digits([x * S + s for s in range(S)], n * S)

    def bind_elem(self, nx, ny, t, k):
        S = self.S
        out = []
        for p in decode_digits(t, nx * S, S):
            x, s1 = divmod(p, S)
            out.append(decode_digits(k[x], ny * S, S)[s1])
        return encode_digits(out, ny * S)

    def decode(self, n, t):
        return tuple(divmod(p, self.S) for p in decode_digits(t, n * self.S, self.S))

    def encode(self, n, value):
        return encode_digits([x * self.S + s for x, s in value], n * self.S)


@dataclass(frozen=True)
class Powerset(MonadSpec):
    """Full finite powerset; a subset is the bitmask of its members."""

    kind: ClassVar[str] = "powerset"

    def carrier_size(self, n):
        return 2**n

    def element_width(self, n):
        return n

    def unit_elem(self, n, x):
        return 1 << x

    def bind_elem(self, nx, ny, t, k):
        out = 0
        x = 0
        while t:
            if t & 1:
                out |= k[x]
            t >>= 1
            x += 1
        return out

    def decode(self, n, t):
        return frozenset(x for x in range(n) if t >> x & 1)

    def encode(self, n, value):
        return sum(1 << x for x in value)


@dataclass(frozen=True)
class Continuation(MonadSpec):
    """``A^(A^X)``: digit ``c`` is the answer given the continuation encoded as ``c``."""

    A: int = 2
    kind: ClassVar[str] = "continuation"

    @property
    def params(self):
        return {"A": self.A}

    def carrier_size(self, n):
        return self.A ** (self.A**n)

    def element_width(self, n):
        return self.A**n

    def unit_elem(self, n, x):
        return _cont_unit(self.A, n, x)

    def bind_elem(self, nx, ny, t, k):
        A = self.A
        width_y = A**ny
        if width_y <= _SMALL_WIDTH:
            answers = decode_digits(t, A, A**nx)
            ks = [decode_digits(kx, A, width_y) for kx in k]
            # continuation x |-> k(x)(c), encoded in A^X
            return encode_digits([answers[encode_digits([kx[c] for kx in ks], A)] for c in range(width_y)], A)
        answers = _digit_array(t, A, A**nx)
        if nx == 0:
            return _from_digit_array(np.full(width_y, answers[0]), A)
        ks = np.stack([_digit_array(kx, A, width_y) for kx in k])
        # row x of ks is k(x); column c read as a numeral is the continuation x |-> k(x)(c)
        j = (A ** np.arange(nx, dtype=np.int64)) @ ks
        return _from_digit_array(answers[j], A)

    def decode(self, n, t):
        return decode_digits(t, self.A, self.A**n)

    def encode(self, n, value):
        return encode_digits(value, self.A)


@dataclass(frozen=True)
class StateExc(MonadSpec):
    """``((X x S) + 1)^S``: state is discarded on the error summand."""

    S: int = 2
    kind: ClassVar[str] = "state_exc"

    @property
    def params(self):
        return {"S": self.S}

    def carrier_size(self, n):
        return (n * self.S + 1) ** self.S

    def element_width(self, n):
        return self.S

    def unit_elem(self, n, x):
        S = self.S
        return encode_digits([x * S + s for s in range(S)], n * S + 1)

    def bind_elem(self, nx, ny, t, k):
        S = self.S
        err_x, err_y = nx * S, ny * S
        out = []
        for p in decode_digits(t, err_x + 1, S):
            if p == err_x:
                out.append(err_y)
                continue
            x, s1 = divmod(p, S)
            out.append(decode_digits(k[x], err_y + 1, S)[s1])
        return encode_digits(out, err_y + 1)

    def decode(self, n, t):
        err = n * self.S
        return tuple(None if p == err else divmod(p, self.S) for p in decode_digits(t, err + 1, self.S))

    def encode(self, n, value):
        err = n * self.S
        return encode_digits([err if v is None else v[0] * self.S + v[1] for v in value], err + 1)


_SMALL_WIDTH = 16


@lru_cache(maxsize=1 << 14)
def _digit_array(enc: int, base: int, length: int) -> np.ndarray:
    if base == 2:
        raw = np.frombuffer(enc.to_bytes(length // 8 + 1, "little"), dtype=np.uint8)
        arr = np.unpackbits(raw, bitorder="little")[:length].astype(np.int64)
    else:
        arr = np.array(decode_digits(enc, base, length), dtype=np.int64)
    arr.setflags(write=False)
    return arr


def _from_digit_array(digits: np.ndarray, base: int) -> int:
    if base == 2:
        return int.from_bytes(np.packbits(digits.astype(np.uint8), bitorder="little").tobytes(), "little")
    return encode_digits([int(d) for d in digits], base)


@lru_cache(maxsize=None)
def _cont_unit(A: int, n: int, x: int) -> int:
    # (lambda k. k x) answers digit x of each continuation
    return _from_digit_array((np.arange(A**n, dtype=np.int64) // A**x) % A, A)


_CATALOG = {
    "identity": (Identity, ()),
    "exception": (ExceptionMonad, ("E",)),
    "reader": (Reader, ("S",)),
    "state": (State, ("S",)),
    "powerset": (Powerset, ()),
    "continuation": (Continuation, ("A",)),
    "state_exc": (StateExc, ("S",)),
}


def monad_spec(kind: str, **params: int) -> MonadSpec:
    """Build a catalog monad from its kind and parameter sizes."""
    try:
        cls, names = _CATALOG[kind]
    except KeyError:
        raise ValueError(f"unknown monad kind {kind!r}; expected one of {', '.join(KINDS)}") from None
    unknown = set(params) - set(names)
    if unknown:
        raise ValueError(f"monad {kind!r} takes no parameter(s) {sorted(unknown)}")
    for name, value in params.items():
        if not isinstance(value, int) or value < 0:
            raise ValueError(f"parameter {name} must be a non-negative integer")
    return cls(**params)


def catalog(size: int = 2) -> list[MonadSpec]:
    """One instance of every kind, parameters set to ``size`` (errors: 1)."""
    return [
        Identity(),
        ExceptionMonad(1),
        Reader(size),
        State(size),
        Powerset(),
        Continuation(size),
        StateExc(size),
    ]


# -- table-level operations ------------------------------------------------------


def carrier(M: MonadSpec, X: FinSet) -> FinSet:
    return M.carrier(X)


def unit(M: MonadSpec, X: FinSet) -> FinFun:
    return FinFun(X, M.carrier(X), tuple(M.unit_elem(X.size, x) for x in range(X.size)))


def kleisli_extend(M: MonadSpec, k: FinFun, Y: FinSet) -> FinFun:
    """Extend ``k : X -> T Y`` to the full table ``T X -> T Y``."""
    X = k.dom
    TY = M.carrier(Y)
    if k.cod.size != TY.size:
        raise MonadTypeError(f"Kleisli map lands in a set of size {k.cod.size}, expected |T Y| = {TY.size}")
    TX = M.carrier(X)
    table = tuple(M.bind_elem(X.size, Y.size, t, k.table) for t in range(TX.size))
    return FinFun(TX, TY, table)


def fmap(M: MonadSpec, f: FinFun) -> FinFun:
    return kleisli_extend(M, finset.compose(unit(M, f.cod), f), f.cod)


def strength(M: MonadSpec, X: FinSet, Y: FinSet) -> FinFun:
    """Canonical strength ``X x T Y -> T (X x Y)``."""
    TY = M.carrier(Y)
    XY = finset.product(X, Y).obj
    dom = finset.product(X, TY).obj
    table = tuple(M.strength_elem(X.size, Y.size, x, t) for x in range(X.size) for t in range(TY.size))
    return FinFun(dom, M.carrier(XY), table)


def check_preserves_surjections(M: MonadSpec, e: FinFun, others: Sequence[FinSet] = (FinSet(1), FinSet(2))) -> CheckResult:
    """Check that ``fmap(M, e)`` and ``e x id`` are surjective for a surjection ``e``."""
    if not e.is_surjective():
        raise ValueError("e is not surjective")
    Te = fmap(M, e)
    if not Te.is_surjective():
        missing = sorted(set(range(Te.cod.size)) - Te.image())[0]
        return CheckResult(
            "preserves_surjections", False, Te.dom.size, "exhaustive",
            {"monad": M.describe(), "missed": missing, "decoded": repr(M.decode(e.cod.size, missing))},
        )
    cases = Te.dom.size
    for Z in others:
        prod_dom = finset.product(e.dom, Z)
        prod_cod = finset.product(e.cod, Z)
        table = tuple(prod_cod.pair(e.table[a], z) for a in range(e.dom.size) for z in range(Z.size))
        ez = FinFun(prod_dom.obj, prod_cod.obj, table)
        cases += len(table)
        if not ez.is_surjective():
            return CheckResult("preserves_surjections", False, cases, "exhaustive", {"product_with": Z.size})
    return CheckResult("preserves_surjections", True, cases, "exhaustive")


# -- law checking ----------------------------------------------------------------


def monad_law_cases(M: MonadSpec, objects: Sequence[int]) -> Iterator[LawInstance]:
    """Every law instance of ``M`` over the given object sizes.

    A predicate returns ``None`` when its case passes and a counterexample
    dict otherwise.
    """
    unit_e, bind_e, st, map_e = M.unit_elem, M.bind_elem, M.strength_elem, M.map_elem

    def elements(n):
        return Dim(M.carrier_size(n))

    def kleisli(nx, ny):
        return Dim(M.carrier_size(ny), nx)

    def needs(*ns):
        for n in ns:
            M.check_width(n)

    for nx in objects:
        def right_unit(case, nx=nx):
            (t,) = case
            got = bind_e(nx, nx, t, [unit_e(nx, x) for x in range(nx)])
            if got != t:
                return {"t": t, "bind(t, unit)": got}

        def functor_identity(case, nx=nx):
            (t,) = case
            got = map_e(nx, nx, t, range(nx))
            if got != t:
                return {"t": t, "fmap(id)(t)": got}

        def strength_left_unitor(case, nx=nx):
            (t,) = case
            # 1 x X coincides with X on indices, so the projection is the identity table
            got = map_e(nx, nx, st(1, nx, 0, t), range(nx))
            if got != t:
                return {"t": t, "T(snd)(st(*, t))": got}

        dims = lambda nx=nx: (needs(nx), [elements(nx)])[1]
        yield LawInstance("right_unit", (nx,), dims, right_unit)
        yield LawInstance("functor_identity", (nx,), dims, functor_identity)
        yield LawInstance("strength_left_unitor", (nx,), dims, strength_left_unitor)

    for nx, ny in itertools.product(objects, repeat=2):
        def left_unit(case, nx=nx, ny=ny):
            x, k = case
            got = bind_e(nx, ny, unit_e(nx, x), k)
            if got != k[x]:
                return {"x": x, "k": list(k), "bind(unit x, k)": got, "k(x)": k[x]}

        def strength_unit(case, nx=nx, ny=ny):
            x, y = case
            got = st(nx, ny, x, unit_e(ny, y))
            want = unit_e(nx * ny, x * ny + y)
            if got != want:
                return {"x": x, "y": y, "st(x, unit y)": got, "unit(x, y)": want}

        yield LawInstance("left_unit", (nx, ny), lambda nx=nx, ny=ny: (needs(nx, ny), [Dim(nx), kleisli(nx, ny)])[1], left_unit)
        yield LawInstance("strength_unit", (nx, ny), lambda nx=nx, ny=ny: (needs(ny, nx * ny), [Dim(nx), Dim(ny)])[1], strength_unit)

    for nx, ny, nz in itertools.product(objects, repeat=3):
        def associativity(case, nx=nx, ny=ny, nz=nz):
            t, k, h = case
            lhs = bind_e(ny, nz, bind_e(nx, ny, t, k), h)
            rhs = bind_e(nx, nz, t, [bind_e(ny, nz, kx, h) for kx in k])
            if lhs != rhs:
                return {"t": t, "k": list(k), "h": list(h), "lhs": lhs, "rhs": rhs}

        def functor_composition(case, nx=nx, ny=ny, nz=nz):
            t, f, g = case
            lhs = map_e(nx, nz, t, [g[y] for y in f])
            rhs = map_e(ny, nz, map_e(nx, ny, t, f), g)
            if lhs != rhs:
                return {"t": t, "f": list(f), "g": list(g), "lhs": lhs, "rhs": rhs}

        def strength_assoc(case, nx=nx, ny=ny, nz=nz):
            x, y, t = case
            # ((x, y), z) and (x, (y, z)) share an index under lexicographic pairing
            lhs = st(nx * ny, nz, x * ny + y, t)
            rhs = st(nx, ny * nz, x, st(ny, nz, y, t))
            if lhs != rhs:
                return {"x": x, "y": y, "t": t, "lhs": lhs, "rhs": rhs}

        def strength_bind(case, nx=nx, ny=ny, nz=nz):
            x, t, k = case
            lhs = st(nx, nz, x, bind_e(ny, nz, t, k))
            lifted = [st(nx, nz, p // ny, k[p % ny]) for p in range(nx * ny)]
            rhs = bind_e(nx * ny, nx * nz, st(nx, ny, x, t), lifted)
            if lhs != rhs:
                return {"x": x, "t": t, "k": list(k), "lhs": lhs, "rhs": rhs}

        yield LawInstance("associativity", (nx, ny, nz), lambda nx=nx, ny=ny, nz=nz: (
            needs(nx, ny, nz), [elements(nx), kleisli(nx, ny), kleisli(ny, nz)])[1], associativity)
        yield LawInstance("functor_composition", (nx, ny, nz), lambda nx=nx, ny=ny, nz=nz: (
            needs(nx, ny, nz), [elements(nx), Dim(ny, nx), Dim(nz, ny)])[1], functor_composition)
        yield LawInstance("strength_assoc", (nx, ny, nz), lambda nx=nx, ny=ny, nz=nz: (
            needs(nz, ny * nz, nx * ny * nz), [Dim(nx), Dim(ny), elements(nz)])[1], strength_assoc)
        yield LawInstance("strength_bind", (nx, ny, nz), lambda nx=nx, ny=ny, nz=nz: (
            needs(ny, nz, nx * ny, nx * nz), [Dim(nx), elements(ny), kleisli(ny, nz)])[1], strength_bind)


def check_monad_laws(M: MonadSpec, objects: Sequence[FinSet], budget: int = 10**5, seed: int = 0) -> LawReport:
    """Check unit, associativity, functor and strength laws of ``M``.

    A law is enumerated exhaustively when its total case count fits in
    ``budget``; otherwise each instance gets an equal share and is sampled
    uniformly from a generator seeded by ``seed``. Instances whose elements
    exceed the size cap are reported as skipped.
    """
    return run_cases(M.describe(), monad_law_cases(M, [X.size for X in objects]), budget, seed)
