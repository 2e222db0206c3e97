"""Exhaustive and seeded sweeps over the (surjection, injection) system."""

from __future__ import annotations

import itertools
import random

from effect_factor.finset import FactorizationError, FinFun, FinSet, check_diagonal_fill, compose, factorize


def _maps(dom: int, cod: int):
    for table in itertools.product(range(cod), repeat=dom):
        yield FinFun(FinSet(dom), FinSet(cod), table)


def diagonal_fill_sweep(max_size: int) -> dict:
    """Every commuting square ``m . top = bottom . e`` with all four sets of
    size at most ``max_size``: the fill-in exists, is unique, and a perturbed
    (non-commuting) bottom edge is rejected.

    Uniqueness is counted pointwise: the constraints on ``d(b)`` involve no
    other point, so the number of diagonals is the product of per-point counts.
    """
    sizes = range(max_size + 1)
    surj = {(a, b): [f for f in _maps(a, b) if f.is_surjective()] for a in sizes for b in sizes}
    inj = {(c, d): [f for f in _maps(c, d) if f.is_injective()] for c in sizes for d in sizes}
    maps = {(a, c): list(_maps(a, c)) for a in sizes for c in sizes}
    squares = rejected = 0
    failures = []
    for A, B, C, D in itertools.product(sizes, repeat=4):
        for e in surj[A, B]:
            fibres = [[a for a in range(A) if e.table[a] == b] for b in range(B)]
            for m in inj[C, D]:
                for top in maps[A, C]:
                    # bottom is forced by commutativity wherever e hits, i.e. everywhere
                    bottom_table = [m.table[top.table[f[0]]] for f in fibres]
                    if any(m.table[top.table[a]] != bottom_table[b] for b, f in enumerate(fibres) for a in f):
                        continue  # no commuting square with this top edge
                    bottom = FinFun(FinSet(B), FinSet(D), bottom_table)
                    squares += 1
                    count = 1
                    for b, f in enumerate(fibres):
                        count *= sum(1 for c in range(C) if m.table[c] == bottom_table[b] and all(top.table[a] == c for a in f))
                    try:
                        d = check_diagonal_fill(e, m, top, bottom)
                    except FactorizationError as exc:
                        failures.append(("raised", e.table, m.table, top.table, str(exc)))
                        continue
                    d_after_e = tuple(d.table[b] for b in e.table)
                    m_after_d = [m.table[c] for c in d.table]
                    if count != 1 or d_after_e != top.table or m_after_d != bottom_table:
                        failures.append(("wrong", e.table, m.table, top.table, d.table, count))
                    if B and D > 1:
                        bad = list(bottom_table)
                        bad[0] = (bad[0] + 1) % D
                        try:
                            check_diagonal_fill(e, m, top, FinFun(FinSet(B), FinSet(D), bad))
                            failures.append(("accepted", e.table, m.table, top.table, tuple(bad)))
                        except FactorizationError:
                            rejected += 1
    return {"squares": squares, "rejected": rejected, "failures": failures}


def random_factorization_sweep(count: int, seed: int = 0, max_size: int = 6) -> dict:
    """``n . e = f`` with ``e`` onto and ``n`` one-to-one, for seeded random ``f``."""
    rng = random.Random(seed)
    failures = []
    for _ in range(count):
        cod = rng.randint(1, max_size)
        dom = rng.randint(0, max_size)
        f = FinFun(FinSet(dom), FinSet(cod), [rng.randrange(cod) for _ in range(dom)])
        F = factorize(f)
        ok = (compose(F.n, F.e) == f and F.e.is_surjective() and F.n.is_injective()
              and F.mid.size == len(set(f.table)))
        if not ok:
            failures.append(f.table)
    return {"count": count, "failures": failures}
