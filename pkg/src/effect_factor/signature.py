"""Signatures, free-monad terms, and the factored monad ``R``.

The free monad on a signature is never built. The image of the canonical
morphism ``m_X : S X -> T X`` is computed instead by saturation: start from the
unit values and close under applying every generic effect to families of
already reached values. Each reached value keeps a term of minimal depth that
evaluates to it, which is how the surjective half ``e`` of the factorization
is represented; the injective half ``n`` is the inclusion table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence, Union

from . import finset
from .checks import Dim, LawInstance, LawReport, run_cases
from .finset import FinFun, FinSet, InstanceTooLarge
from .monad import MonadSpec

DEFAULT_ROUND_WORK = 2 * 10**6

Obj = Union[FinSet, int]


def _size(X: Obj) -> int:
    return X if isinstance(X, int) else X.size


class SignatureError(ValueError):
    pass


class TheoremViolation(AssertionError):
    """A value computed through ``T`` fell outside ``R``: the factorization
    theorem fails at this instance."""

    def __init__(self, message: str, detail: dict):
        super().__init__(message)
        self.detail = detail


@dataclass(frozen=True)
class Operation:
    name: str
    A: FinSet
    B: FinSet

    def __post_init__(self):
        if not self.name:
            raise SignatureError("operation names must be nonempty")


@dataclass(frozen=True)
class Signature:
    ops: tuple[Operation, ...] = ()

    def __post_init__(self):
        ops = tuple(self.ops)
        object.__setattr__(self, "ops", ops)
        names = [op.name for op in ops]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate operation names in {names}")

    def __iter__(self) -> Iterator[Operation]:
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __getitem__(self, name: str) -> Operation:
        for op in self.ops:
            if op.name == name:
                return op
        raise KeyError(name)

    def names(self) -> list[str]:
        return [op.name for op in self.ops]


@dataclass(frozen=True, eq=False)
class Interpretation:
    """Generic effects ``A -> T B`` for every operation of a signature."""

    monad: MonadSpec
    signature: Signature
    effects: Mapping[str, FinFun]

    def __post_init__(self):
        effects = dict(self.effects)
        object.__setattr__(self, "effects", effects)
        missing = set(self.signature.names()) - set(effects)
        extra = set(effects) - set(self.signature.names())
        if missing or extra:
            raise SignatureError(f"effects do not match the signature (missing {sorted(missing)}, extra {sorted(extra)})")
        for op in self.signature:
            gen = effects[op.name]
            want = self.monad.carrier_size(op.B.size)
            if gen.dom.size != op.A.size or gen.cod.size != want:
                raise SignatureError(
                    f"effect for {op.name!r} must map {op.A.size} parameters into |T B| = {want}, "
                    f"got {gen.dom.size} -> {gen.cod.size}"
                )

    def gen(self, name: str) -> FinFun:
        return self.effects[name]

    def restrict(self, signature: Signature) -> "Interpretation":
        return Interpretation(self.monad, signature, {op.name: self.effects[op.name] for op in signature})


def interpretation(monad: MonadSpec, ops: Sequence[Operation], tables: Mapping[str, Sequence[int]]) -> Interpretation:
    """Build an interpretation from raw generic-effect tables."""
    effects = {}
    for op in ops:
        if op.name not in tables:
            raise SignatureError(f"no generic effect for {op.name!r}")
        cod = FinSet(monad.carrier_size(op.B.size))
        try:
            effects[op.name] = FinFun(op.A, cod, tuple(tables[op.name]))
        except finset.FinSetError as exc:
            raise SignatureError(f"effect table for {op.name!r}: {exc}") from None
    return Interpretation(monad, Signature(tuple(ops)), effects)


# -- terms ----------------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    x: int

    @property
    def depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Node:
    op: str
    a: int
    children: tuple["Term", ...] = ()
    depth: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "depth", 1 + max((c.depth for c in self.children), default=0))


Term = Union[Leaf, Node]


def render(t: Term, sig: Optional[Signature] = None, X: Optional[FinSet] = None) -> str:
    if isinstance(t, Leaf):
        return f"x{t.x}" if X is None or X.labels is None else X.label(t.x)
    param = ""
    if sig is not None:
        A = sig[t.op].A
        if A.size != 1 or A.labels is not None:
            param = f"[{A.label(t.a)}]"
    else:
        param = f"[{t.a}]"
    inner = ", ".join(render(c, sig, X) for c in t.children)
    return f"{t.op}{param}({inner})"


def substitute(t: Term, us: Sequence[Term]) -> Term:
    """Replace every leaf ``x`` of ``t`` by ``us[x]`` (the free monad's bind)."""
    if isinstance(t, Leaf):
        return us[t.x]
    return Node(t.op, t.a, tuple(substitute(c, us) for c in t.children))


def count_terms(sig: Signature, X: Obj, depth: int) -> int:
    """Number of terms of depth at most ``depth``."""
    n = _size(X)
    count = n
    for _ in range(depth):
        count = n + sum(op.A.size * count**op.B.size for op in sig)
    return count


def enumerate_terms(sig: Signature, X: Obj, depth: int, cap: Optional[int] = None) -> list[Term]:
    """All terms of depth at most ``depth``: leaves first, then nodes by
    operation, parameter and children (lexicographic in the previous layer)."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    cap = finset.max_carrier() if cap is None else cap
    total = count_terms(sig, X, depth)
    if total > cap:
        raise InstanceTooLarge(f"{total} terms of depth <= {depth} exceed cap {cap}")
    leaves: list[Term] = [Leaf(x) for x in range(_size(X))]
    terms = leaves
    for _ in range(depth):
        nxt = list(leaves)
        for op in sig:
            for a in range(op.A.size):
                for children in itertools.product(terms, repeat=op.B.size):
                    nxt.append(Node(op.name, a, children))
        terms = nxt
    return terms


def eval_term(t: Term, interp: Interpretation, X: Obj, memo: Optional[dict] = None) -> int:
    """The canonical monad morphism ``S X -> T X`` at one term."""
    n = _size(X)
    M = interp.monad
    if memo is None:
        memo = {}

    def go(u: Term) -> int:
        if isinstance(u, Leaf):
            if not 0 <= u.x < n:
                raise SignatureError(f"leaf {u.x} outside X of size {n}")
            return M.unit_elem(n, u.x)
        hit = memo.get(u)
        if hit is not None:
            return hit
        try:
            op = interp.signature[u.op]
        except KeyError:
            raise SignatureError(f"unknown operation {u.op!r}") from None
        if len(u.children) != op.B.size or not 0 <= u.a < op.A.size:
            raise SignatureError(f"ill-typed node {render(u)}")
        v = M.bind_elem(op.B.size, n, interp.gen(op.name).table[u.a], [go(c) for c in u.children])
        memo[u] = v
        return v

    return go(t)


# -- saturation -------------------------------------------------------------------


@dataclass
class ObjectEntry:
    """``R X`` as a subset of ``T X``: ``elements`` is the table of ``n_X``."""

    size: int
    carrier_size: int
    elements: list[int]
    index: dict[int, int]
    witnesses: list[Term]
    layer_trace: list[int]

    @property
    def R(self) -> FinSet:
        return FinSet(len(self.elements))

    @property
    def n(self) -> FinFun:
        return FinFun(self.R, FinSet(self.carrier_size), tuple(self.elements))

    @property
    def rounds_to_fixpoint(self) -> int:
        return len(self.layer_trace) - 1

    def add(self, value: int, witness: Term) -> bool:
        if value in self.index:
            return False
        self.index[value] = len(self.elements)
        self.elements.append(value)
        self.witnesses.append(witness)
        return True


def _round_families(interp: Interpretation, size: int, work_cap: int) -> None:
    for op in interp.signature:
        work = op.A.size * size**op.B.size
        if work > work_cap:
            raise InstanceTooLarge(f"saturation round for {op.name!r} needs {work} applications (cap {work_cap})")


def saturation_round(interp: Interpretation, entry: ObjectEntry, since: int = 0,
                     work_cap: int = DEFAULT_ROUND_WORK) -> list[tuple[int, Term]]:
    """One round: every operation applied to every family of reached values.

    With ``since > 0``, families drawn only from the first ``since`` elements
    are skipped (they were tried in an earlier round), nullary ones included. Returns the new values with witnesses,
    without adding them.
    """
    M = interp.monad
    n = entry.size
    snapshot = len(entry.elements)
    _round_families(interp, snapshot, work_cap)
    found: list[tuple[int, Term]] = []
    seen = set(entry.index)
    for op in interp.signature:
        nb = op.B.size
        gen = interp.gen(op.name).table
        for a in range(op.A.size):
            for fam in itertools.product(range(snapshot), repeat=nb):
                if since and not any(i >= since for i in fam):
                    continue
                v = M.bind_elem(nb, n, gen[a], [entry.elements[i] for i in fam])
                if v not in seen:
                    seen.add(v)
                    found.append((v, Node(op.name, a, tuple(entry.witnesses[i] for i in fam))))
    return found


def saturate(interp: Interpretation, X: Obj, work_cap: int = DEFAULT_ROUND_WORK) -> ObjectEntry:
    """Least subset of ``T X`` holding the unit values and closed under the
    generic effects; ``layer_trace[d]`` is its size after round ``d``."""
    M = interp.monad
    n = _size(X)
    entry = ObjectEntry(n, M.carrier_size(n), [], {}, [], [])
    if n:
        M.check_width(n)
    for x in range(n):
        entry.add(M.unit_elem(n, x), Leaf(x))
    entry.layer_trace.append(len(entry.elements))
    since = 0
    while interp.signature.ops:
        before = len(entry.elements)
        new = saturation_round(interp, entry, since, work_cap)
        if not new:
            break
        for v, w in new:
            entry.add(v, w)
        finset.guard(len(entry.elements), "saturated R X")
        entry.layer_trace.append(len(entry.elements))
        since = before
    return entry


def closure_defect(interp: Interpretation, entry: ObjectEntry, work_cap: int = DEFAULT_ROUND_WORK) -> Optional[tuple[int, Term]]:
    """First value a complete extra round would add, or ``None`` if closed."""
    M = interp.monad
    for x in range(entry.size):
        u = M.unit_elem(entry.size, x)
        if u not in entry.index:
            return u, Leaf(x)
    new = saturation_round(interp, entry, 0, work_cap)
    return new[0] if new else None


# -- the factored monad -----------------------------------------------------------


class FactoredMonad:
    """``T_eps``: the middle object of the pointwise factorization of the
    canonical morphism from the free monad on ``interp.signature`` into
    ``interp.monad``.

    Objects are saturated on demand and cached by size. Unit and bind are
    those of ``T`` corestricted along ``n``; a result outside ``R`` raises
    :class:`TheoremViolation`.
    """

    def __init__(self, interp: Interpretation, work_cap: int = DEFAULT_ROUND_WORK):
        self.interp = interp
        self.monad = interp.monad
        self.signature = interp.signature
        self.work_cap = work_cap
        self.objects: dict[int, ObjectEntry] = {}
        self._bind_tables: dict[tuple, tuple[int, ...]] = {}

    def saturate(self, X: Obj) -> ObjectEntry:
        n = _size(X)
        entry = self.objects.get(n)
        if entry is None:
            entry = saturate(self.interp, n, self.work_cap)
            self.objects[n] = entry
        return entry

    __getitem__ = saturate

    def R(self, X: Obj) -> FinSet:
        return self.saturate(X).R

    def n(self, X: Obj) -> FinFun:
        return self.saturate(X).n

    def sizes(self) -> dict[int, int]:
        return {n: len(e.elements) for n, e in sorted(self.objects.items())}

    # element level

    def member(self, nx: int, value: int, context: dict) -> int:
        entry = self.saturate(nx)
        r = entry.index.get(value)
        if r is None:
            raise TheoremViolation(f"value {value} of T {nx} is not in R {nx}", {"object": nx, "value": value, **context})
        return r

    def unit_r(self, nx: int, x: int) -> int:
        return self.member(nx, self.monad.unit_elem(nx, x), {"unit": x})

    def bind_table(self, nx: int, ny: int, k: Sequence[int]) -> tuple[int, ...]:
        """``r_bind(k)`` as a table over ``R nx`` for ``k : nx -> R ny``."""
        key = (nx, ny, tuple(k))
        table = self._bind_tables.get(key)
        if table is None:
            ex, ey = self.saturate(nx), self.saturate(ny)
            nk = [ey.elements[r] for r in k]
            out = []
            for r, t in enumerate(ex.elements):
                v = self.monad.bind_elem(nx, ny, t, nk)
                s = ey.index.get(v)
                if s is None:
                    raise TheoremViolation(
                        f"bind leaves R {ny}",
                        {"object": ny, "value": v, "element": r, "witness": render(ex.witnesses[r], self.signature),
                         "k": [render(ey.witnesses[j], self.signature) for j in k]},
                    )
                out.append(s)
            table = tuple(out)
            self._bind_tables[key] = table
        return table

    def bind_r(self, nx: int, ny: int, r: int, k: Sequence[int]) -> int:
        return self.bind_table(nx, ny, k)[r]

    def map_r(self, nx: int, ny: int, r: int, f: Sequence[int]) -> int:
        return self.bind_r(nx, ny, r, [self.unit_r(ny, y) for y in f])

    def strength_r(self, nx: int, ny: int, x: int, r: int) -> int:
        t = self.saturate(ny).elements[r]
        return self.member(nx * ny, self.monad.strength_elem(nx, ny, x, t), {"strength": [x, r]})

    # table level

    def r_unit(self, X: Obj) -> FinFun:
        n = _size(X)
        return FinFun(FinSet(n), self.R(n), tuple(self.unit_r(n, x) for x in range(n)))

    def r_bind(self, k: FinFun, Y: Obj) -> FinFun:
        nx, ny = k.dom.size, _size(Y)
        if k.cod.size != len(self.saturate(ny).elements):
            raise SignatureError(f"Kleisli map must land in R {ny}")
        return FinFun(self.R(nx), self.R(ny), self.bind_table(nx, ny, k.table))

    def r_map(self, f: FinFun) -> FinFun:
        nx, ny = f.dom.size, f.cod.size
        return self.r_bind(FinFun(FinSet(nx), self.R(ny), tuple(self.unit_r(ny, y) for y in f.table)), ny)

    def r_strength(self, X: Obj, Y: Obj) -> FinFun:
        nx, ny = _size(X), _size(Y)
        ry = len(self.saturate(ny).elements)
        table = tuple(self.strength_r(nx, ny, x, r) for x in range(nx) for r in range(ry))
        return FinFun(FinSet(nx * ry), self.R(nx * ny), table)

    # the surjection e and the interpretation of operations in R

    def e(self, t: Term, X: Obj, memo: Optional[dict] = None) -> int:
        """``e_X``: the element of ``R X`` a term denotes."""
        n = _size(X)
        v = eval_term(t, self.interp, n, memo)
        return self.member(n, v, {"term": render(t, self.signature)})

    def op_r(self, name: str) -> FinFun:
        """The Kleisli arrow ``A -> R B`` interpreting an operation in ``R``."""
        op = self.signature[name]
        nb = op.B.size
        gen = self.interp.gen(name).table
        table = tuple(self.member(nb, gen[a], {"operation": name, "a": a}) for a in range(op.A.size))
        return FinFun(op.A, self.R(nb), table)

    def eval_r(self, t: Term, X: Obj, memo: Optional[dict] = None) -> int:
        """Evaluate a term using only the structure of ``R``: ``r_unit``,
        the operations' arrows into ``R`` and ``r_bind``."""
        n = _size(X)
        memo = {} if memo is None else memo
        ops = {op.name: self.op_r(op.name).table for op in self.signature}

        def go(u: Term) -> int:
            if isinstance(u, Leaf):
                return self.unit_r(n, u.x)
            hit = memo.get(u)
            if hit is None:
                op = self.signature[u.op]
                hit = self.bind_r(op.B.size, n, ops[u.op][u.a], [go(c) for c in u.children])
                memo[u] = hit
            return hit

        return go(t)


def factor(interp: Interpretation, objects: Sequence[Obj] = (), work_cap: int = DEFAULT_ROUND_WORK) -> FactoredMonad:
    F = FactoredMonad(interp, work_cap)
    for X in objects:
        F.saturate(X)
    return F


# -- verification -------------------------------------------------------------------


def _violation(exc: TheoremViolation) -> dict:
    return {"theorem_violation": str(exc), **exc.detail}


def theorem1_cases(F: FactoredMonad, objects: Sequence[int], term_depth: int) -> Iterator[LawInstance]:
    M = F.monad

    def R(n):
        return len(F.saturate(n).elements)

    def guarded(check):
        def run(case):
            try:
                return check(case)
            except TheoremViolation as exc:
                return _violation(exc)
        return run

    term_cache: dict[int, list[Term]] = {}
    eval_memo: dict[int, dict] = {}

    def terms(n):
        if n not in term_cache:
            term_cache[n] = enumerate_terms(F.signature, n, term_depth)
            eval_memo[n] = {}
        return term_cache[n]

    structure: dict[int, list] = {}
    verdicts: dict[tuple, Optional[tuple[int, dict]]] = {}

    def shape(n):
        """Per term over n: its value in T, its element of R, and (op, a, child positions)."""
        if n not in structure:
            ts = terms(n)
            where = {t: i for i, t in enumerate(ts)}
            rows = []
            for t in ts:
                v = eval_term(t, F.interp, n, eval_memo[n])
                kids = None if isinstance(t, Leaf) else tuple(where[c] for c in t.children)
                rows.append((v, F.e(t, n, eval_memo[n]), kids))
            structure[n] = rows
        return structure[n]

    def substitution_verdict(nx, ny, vals):
        """First term ``t`` over ``nx`` whose substitution instance breaks an
        ``e``/``m`` bind equation, given the values of the substituted terms.

        ``t[u]`` is evaluated as a fold over ``t`` whose leaves are the values
        of ``u``; the fold sees ``u`` only through those values, so the result
        is shared between substitutions with equal values.
        """
        key = (nx, ny, vals)
        if key in verdicts:
            return verdicts[key]
        ts, rows = terms(nx), shape(nx)
        ey = F.saturate(ny)
        ks = [F.member(ny, v, {"substituted": v}) for v in vals]
        folded: list[Optional[int]] = [None] * len(ts)

        def fold(i):
            if folded[i] is None:
                t = ts[i]
                if isinstance(t, Leaf):
                    folded[i] = vals[t.x]
                else:
                    gen = F.interp.gen(t.op).table[t.a]
                    nb = F.signature[t.op].B.size
                    folded[i] = M.bind_elem(nb, ny, gen, [fold(c) for c in rows[i][2]])
            return folded[i]

        verdict = None
        for i, (v, r, _) in enumerate(rows):
            lhs_t = fold(i)
            rhs_t = M.bind_elem(nx, ny, v, vals)
            if lhs_t != rhs_t:
                verdict = (i, {"m(t[u])": lhs_t, "bind_T(m t, m.u)": rhs_t})
                break
            lhs_r = ey.index.get(lhs_t)
            rhs_r = F.bind_r(nx, ny, r, ks)
            if lhs_r != rhs_r:
                verdict = (i, {"e(t[u])": lhs_r, "r_bind(e.u)(e t)": rhs_r})
                break
        verdicts[key] = verdict
        return verdict

    for nx in objects:
        def closure(case, nx=nx):
            defect = closure_defect(F.interp, F.saturate(nx), F.work_cap)
            if defect is not None:
                v, w = defect
                return {"object": nx, "missing": v, "witness": render(w, F.signature)}

        def r_right_unit(case, nx=nx):
            (r,) = case
            got = F.bind_r(nx, nx, r, [F.unit_r(nx, x) for x in range(nx)])
            if got != r:
                return {"r": r, "r_bind(r_unit)(r)": got}

        def n_unit(case, nx=nx):
            (x,) = case
            got = F.saturate(nx).elements[F.unit_r(nx, x)]
            if got != M.unit_elem(nx, x):
                return {"x": x, "n(r_unit x)": got, "unit_T x": M.unit_elem(nx, x)}

        def e_unit(case, nx=nx):
            (x,) = case
            if F.e(Leaf(x), nx) != F.unit_r(nx, x):
                return {"x": x}

        def strength_left_unitor(case, nx=nx):
            (r,) = case
            got = F.map_r(nx, nx, F.strength_r(1, nx, 0, r), range(nx))
            if got != r:
                return {"r": r, "R(snd)(st(*, r))": got}

        yield LawInstance("R_closure", (nx,), lambda: [Dim(1)], guarded(closure))
        yield LawInstance("r_right_unit", (nx,), lambda nx=nx: [Dim(R(nx))], guarded(r_right_unit))
        yield LawInstance("n_unit", (nx,), lambda nx=nx: [Dim(nx)], guarded(n_unit))
        yield LawInstance("e_unit", (nx,), lambda nx=nx: [Dim(nx)], guarded(e_unit))
        yield LawInstance("r_strength_left_unitor", (nx,), lambda nx=nx: [Dim(R(nx))], guarded(strength_left_unitor))

    for nx, ny in itertools.product(objects, repeat=2):
        def r_left_unit(case, nx=nx, ny=ny):
            x, k = case
            got = F.bind_r(nx, ny, F.unit_r(nx, x), k)
            if got != k[x]:
                return {"x": x, "k": list(k), "r_bind(k)(r_unit x)": got}

        def n_bind(case, nx=nx, ny=ny):
            r, k = case
            ex, ey = F.saturate(nx), F.saturate(ny)
            lhs = ey.elements[F.bind_r(nx, ny, r, k)]
            rhs = M.bind_elem(nx, ny, ex.elements[r], [ey.elements[j] for j in k])
            if lhs != rhs:
                return {"r": r, "k": list(k), "n(r_bind(k)(r))": lhs, "bind_T(n r, n.k)": rhs}

        def strength_closure(case, nx=nx, ny=ny):
            x, r = case
            v = M.strength_elem(nx, ny, x, F.saturate(ny).elements[r])
            if v not in F.saturate(nx * ny).index:
                return {"x": x, "r": r, "witness": render(F.saturate(ny).witnesses[r], F.signature), "st_T": v}

        def r_strength_unit(case, nx=nx, ny=ny):
            x, y = case
            got = F.strength_r(nx, ny, x, F.unit_r(ny, y))
            want = F.unit_r(nx * ny, x * ny + y)
            if got != want:
                return {"x": x, "y": y, "st(x, r_unit y)": got, "r_unit(x, y)": want}

        yield LawInstance("r_left_unit", (nx, ny), lambda nx=nx, ny=ny: [Dim(nx), Dim(R(ny), nx)], guarded(r_left_unit))
        yield LawInstance("n_bind", (nx, ny), lambda nx=nx, ny=ny: [Dim(R(nx)), Dim(R(ny), nx)], guarded(n_bind))
        yield LawInstance("strength_closure", (nx, ny), lambda nx=nx, ny=ny: (R(nx * ny), [Dim(nx), Dim(R(ny))])[1],
                          guarded(strength_closure))
        yield LawInstance("r_strength_unit", (nx, ny), lambda nx=nx, ny=ny: (R(nx * ny), [Dim(nx), Dim(ny)])[1],
                          guarded(r_strength_unit))

        def e_bind(case, nx=nx, ny=ny):
            # one case is a substitution u : X -> S Y, checked against every term t over X
            (ui,) = case
            us = [term_cache[ny][j] for j in ui]
            memo_y = eval_memo[ny]
            vals = tuple(eval_term(u, F.interp, ny, memo_y) for u in us)
            verdict = substitution_verdict(nx, ny, vals)
            if verdict is None:
                return None
            ti, failure = verdict
            t = term_cache[nx][ti]
            return {"t": render(t, F.signature), "u": [render(u, F.signature) for u in us],
                    "t[u]": render(substitute(t, us), F.signature), **failure}

        def e_dims(nx=nx, ny=ny):
            terms(nx)
            return [Dim(len(terms(ny)), nx)]

        yield LawInstance("e_bind", (nx, ny), e_dims, guarded(e_bind))

    for nx, ny, nz in itertools.product(objects, repeat=3):
        def r_associativity(case, nx=nx, ny=ny, nz=nz):
            # one case is a pair of Kleisli maps; both sides are compared as tables over R X
            k, h = case
            bind_h = F.bind_table(ny, nz, h)
            lhs = [bind_h[s] for s in F.bind_table(nx, ny, k)]
            rhs = F.bind_table(nx, nz, [bind_h[kx] for kx in k])
            for r, (a, b) in enumerate(zip(lhs, rhs)):
                if a != b:
                    return {"r": r, "k": list(k), "h": list(h), "lhs": a, "rhs": b}

        def r_strength_assoc(case, nx=nx, ny=ny, nz=nz):
            x, y, r = case
            lhs = F.strength_r(nx * ny, nz, x * ny + y, r)
            rhs = F.strength_r(nx, ny * nz, x, F.strength_r(ny, nz, y, r))
            if lhs != rhs:
                return {"x": x, "y": y, "r": r, "lhs": lhs, "rhs": rhs}

        def r_strength_bind(case, nx=nx, ny=ny, nz=nz):
            x, r, k = case
            lhs = F.strength_r(nx, nz, x, F.bind_r(ny, nz, r, k))
            lifted = [F.strength_r(nx, nz, p // ny, k[p % ny]) for p in range(nx * ny)]
            rhs = F.bind_r(nx * ny, nx * nz, F.strength_r(nx, ny, x, r), lifted)
            if lhs != rhs:
                return {"x": x, "r": r, "k": list(k), "lhs": lhs, "rhs": rhs}

        yield LawInstance("r_associativity", (nx, ny, nz),
                          lambda nx=nx, ny=ny, nz=nz: (R(nx), [Dim(R(ny), nx), Dim(R(nz), ny)])[1], guarded(r_associativity))
        yield LawInstance("r_strength_assoc", (nx, ny, nz),
                          lambda nx=nx, ny=ny, nz=nz: (R(ny * nz), R(nx * ny * nz), [Dim(nx), Dim(ny), Dim(R(nz))])[-1],
                          guarded(r_strength_assoc))
        yield LawInstance("r_strength_bind", (nx, ny, nz),
                          lambda nx=nx, ny=ny, nz=nz: (R(nx * ny), R(nx * nz), [Dim(nx), Dim(R(ny)), Dim(R(nz), ny)])[-1],
                          guarded(r_strength_bind))


def verify_theorem1(F: FactoredMonad, objects: Sequence[Obj], budget: int = 10**5, seed: int = 0,
                    term_depth: int = 2) -> LawReport:
    """Check that ``R`` is a strong monad and ``e``, ``n`` are strong monad
    morphisms, quantifying over every tuple drawn from ``objects``.

    The morphism equations for ``e`` are checked on terms of depth at most
    ``term_depth``.
    """
    sizes = [_size(X) for X in objects]
    for n in sizes:
        F.saturate(n)
    subject = f"theorem1:{F.monad.describe()}:{','.join(F.signature.names()) or 'empty'}"
    return run_cases(subject, theorem1_cases(F, sizes, term_depth), budget, seed)


@dataclass
class StabilizationReport:
    object: int
    layer_trace: list[int]
    rounds_to_fixpoint: int
    carrier_size: int
    monotone: bool
    final_matches: bool
    within_bound: bool
    closed: bool
    defect: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.monotone and self.final_matches and self.within_bound and self.closed

    def to_dict(self) -> dict:
        out = {
            "object": self.object,
            "layer_trace": list(self.layer_trace),
            "rounds_to_fixpoint": self.rounds_to_fixpoint,
            "carrier_size": self.carrier_size,
            "monotone": self.monotone,
            "final_matches": self.final_matches,
            "within_bound": self.within_bound,
            "closed": self.closed,
            "passed": self.passed,
        }
        if self.defect is not None:
            out["defect"] = self.defect
        return out


def check_lemma2_stabilization(F: FactoredMonad, X: Obj) -> StabilizationReport:
    """The chain of term layers stabilizes: the trace is monotone, ends at
    ``|R X|`` within ``|T X|`` rounds, and one more round adds nothing."""
    entry = F.saturate(X)
    trace = entry.layer_trace
    defect = closure_defect(F.interp, entry, F.work_cap)
    return StabilizationReport(
        object=entry.size,
        layer_trace=list(trace),
        rounds_to_fixpoint=entry.rounds_to_fixpoint,
        carrier_size=entry.carrier_size,
        monotone=all(a <= b for a, b in zip(trace, trace[1:])),
        final_matches=trace[-1] == len(entry.elements),
        within_bound=entry.rounds_to_fixpoint <= max(entry.carrier_size, 1),
        closed=defect is None,
        defect=None if defect is None else {"missing": defect[0], "witness": render(defect[1], F.signature)},
    )
