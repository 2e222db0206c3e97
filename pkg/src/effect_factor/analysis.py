"""Executable forms of the correctness, modularity and stability criteria.

Programs are the terms of bounded depth over a signature; a model's theory
at that depth is the kernel partition of its evaluation map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .presets import formula_param
from .signature import (
    FactoredMonad,
    Interpretation,
    Obj,
    Signature,
    SignatureError,
    Term,
    TheoremViolation,
    _size,
    enumerate_terms,
    eval_term,
    render,
    saturate,
)


@dataclass
class KernelPartition:
    signature: Signature
    X: int
    depth: int
    terms: list[Term]
    blocks: list[list[int]]
    denotations: list[int]

    def block_of(self) -> list[int]:
        """Block number of every term."""
        out = [0] * len(self.terms)
        for b, members in enumerate(self.blocks):
            for i in members:
                out[i] = b
        return out

    def representatives(self) -> list[int]:
        """Index of the first term in each term's block."""
        return _reps(self.blocks, len(self.terms))

    def to_dict(self, show_terms: bool = True) -> dict:
        out = {
            "object": self.X,
            "depth": self.depth,
            "terms": len(self.terms),
            "blocks": len(self.blocks),
            "denotations": list(self.denotations),
        }
        if show_terms:
            out["partition"] = [[render(self.terms[i], self.signature) for i in members] for members in self.blocks]
        return out


def partition_by(terms: Sequence[Term], key: Callable[[Term], int]) -> tuple[list[list[int]], list[int]]:
    """Group term indices by key, blocks ordered by first member."""
    block_index: dict[int, int] = {}
    blocks: list[list[int]] = []
    values: list[int] = []
    for i, t in enumerate(terms):
        v = key(t)
        b = block_index.get(v)
        if b is None:
            block_index[v] = len(blocks)
            blocks.append([i])
            values.append(v)
        else:
            blocks[b].append(i)
    return blocks, values


def kernel_partition(sig: Signature, interp: Interpretation, X: Obj, depth: int) -> KernelPartition:
    """Partition the terms of depth at most ``depth`` by their value in ``T X``."""
    _covers(interp, sig)
    n = _size(X)
    terms = enumerate_terms(sig, n, depth)
    memo: dict = {}
    blocks, values = partition_by(terms, lambda t: eval_term(t, interp, n, memo))
    return KernelPartition(sig, n, depth, terms, blocks, values)


def _covers(interp: Interpretation, sig: Signature) -> None:
    for op in sig:
        try:
            have = interp.signature[op.name]
        except KeyError:
            raise SignatureError(f"interpretation does not cover operation {op.name!r}") from None
        if have.A.size != op.A.size or have.B.size != op.B.size:
            raise SignatureError(f"interpretation types {op.name!r} differently")


def first_disagreement(left: Sequence[int], right: Sequence[int]) -> Optional[tuple[int, int, str]]:
    """Compare two partitions given as per-term representatives.

    Returns ``(i, j, side)`` where terms ``i < j`` are merged on ``side``
    (``"left"`` or ``"right"``) and separated on the other, or ``None``.
    """
    for j, (a, b) in enumerate(zip(left, right)):
        if a != b:
            # reps agree below j, so a < j is a rep on both sides but only left joins it to j
            if a < j:
                return a, j, "left"
            return b, j, "right"
    return None


@dataclass
class CorrectnessReport:
    X: int
    depth: int
    terms: int
    blocks_R: int
    blocks_T: int
    passed: bool
    mismatch: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {"object": self.X, "depth": self.depth, "terms": self.terms,
               "blocks_R": self.blocks_R, "blocks_T": self.blocks_T, "passed": self.passed}
        if self.mismatch is not None:
            out["mismatch"] = self.mismatch
        return out


def correctness_check(F: FactoredMonad, sig: Signature, X: Obj, depth: int) -> CorrectnessReport:
    """Terms identified by ``R`` are exactly those identified by ``T``.

    The ``R`` side evaluates with ``R``'s own unit, bind and operation arrows;
    the ``T`` side evaluates directly in ``T``. Neither reuses the other.
    """
    n = _size(X)
    F.saturate(n)
    terms = enumerate_terms(sig, n, depth)
    memo_t: dict = {}
    memo_r: dict = {}
    blocks_t, _ = partition_by(terms, lambda t: eval_term(t, F.interp, n, memo_t))
    try:
        blocks_r, _ = partition_by(terms, lambda t: F.eval_r(t, n, memo_r))
    except TheoremViolation as exc:
        return CorrectnessReport(n, depth, len(terms), 0, len(blocks_t), False, {"theorem_violation": str(exc), **exc.detail})
    reps_r = _reps(blocks_r, len(terms))
    reps_t = _reps(blocks_t, len(terms))
    diff = first_disagreement(reps_r, reps_t)
    mismatch = None
    if diff is not None:
        i, j, side = diff
        mismatch = {
            "terms": [render(terms[i], sig), render(terms[j], sig)],
            "merged_in": "R" if side == "left" else "T",
            "separated_in": "T" if side == "left" else "R",
        }
    return CorrectnessReport(n, depth, len(terms), len(blocks_r), len(blocks_t), diff is None, mismatch)


def _reps(blocks: list[list[int]], count: int) -> list[int]:
    out = [0] * count
    for members in blocks:
        for i in members:
            out[i] = members[0]
    return out


# -- modularity -------------------------------------------------------------------------

FORMULAS: dict[str, tuple[str, Callable[[int, int], int]]] = {
    "writer": ("|X|(1+|S|)", lambda x, p: x * (1 + p)),
    "reader": ("|X|^|S|", lambda x, p: x**p),
    "state": ("(|X||S|)^|S|", lambda x, p: (x * p) ** p),
    "identity": ("|X|", lambda x, p: x),
    "nonempty-powerset": ("2^|X|-1", lambda x, p: 2**x - 1),
    "powerset": ("2^|X|", lambda x, p: 2**x),
    "exception": ("|X|+|A|", lambda x, p: x + p),
}


@dataclass
class ModularityProfile:
    formula: str
    expression: str
    param: int
    rows: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["verdict"] == "match" for r in self.rows)

    def sizes(self) -> tuple[int, ...]:
        return tuple(r["R"] for r in self.rows)

    def to_dict(self) -> dict:
        return {"formula": self.formula, "expression": self.expression, "param": self.param,
                "rows": [dict(r) for r in self.rows], "passed": self.passed}


def modularity_profile(interp: Interpretation, sig: Signature, sizes: Sequence[int], expected: str) -> ModularityProfile:
    """``|R X|`` against a closed form for each requested ``|X|``."""
    try:
        expression, fn = FORMULAS[expected]
    except KeyError:
        raise KeyError(f"unknown formula {expected!r}; known formulas: {', '.join(FORMULAS)}") from None
    _covers(interp, sig)
    restricted = interp.restrict(sig)
    p = formula_param(interp)
    profile = ModularityProfile(expected, expression, p)
    for x in sizes:
        got = len(saturate(restricted, x).elements)
        want = fn(x, p)
        profile.rows.append({"X": x, "R": got, "expected": want, "verdict": "match" if got == want else "mismatch"})
    return profile


# -- stability ---------------------------------------------------------------------------


@dataclass
class StabilityReport:
    depth: int
    rows: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["equal"] for r in self.rows)

    def to_dict(self) -> dict:
        return {"depth": self.depth, "rows": [dict(r) for r in self.rows], "passed": self.passed}


def stability_check(sig: Signature, interpA: Interpretation, interpB: Interpretation,
                    objects: Sequence[Obj], depth: int) -> StabilityReport:
    """Do two ambient models induce the same theory on ``sig`` up to ``depth``?"""
    _covers(interpA, sig)
    _covers(interpB, sig)
    report = StabilityReport(depth)
    for X in objects:
        pa = kernel_partition(sig, interpA, X, depth)
        pb = kernel_partition(sig, interpB, X, depth)
        diff = first_disagreement(pa.representatives(), pb.representatives())
        row = {"object": _size(X), "terms": len(pa.terms), "blocks_A": len(pa.blocks),
               "blocks_B": len(pb.blocks), "equal": diff is None}
        if diff is not None:
            i, j, side = diff
            row["distinguishing"] = {
                "terms": [render(pa.terms[i], sig), render(pa.terms[j], sig)],
                "merged_in": "A" if side == "left" else "B",
                "separated_in": "B" if side == "left" else "A",
            }
        report.rows.append(row)
    return report
