"""Budgeted exhaustive-or-sampled checking of universally quantified laws."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Optional, Sequence

from .finset import InstanceTooLarge


HUGE = 2**63


def _prod(counts) -> int:
    out = 1
    for n in counts:
        out = min(out * n, HUGE)
    return out


@dataclass(frozen=True)
class Dim:
    """One quantified variable: an element of ``range(size)``, or a tuple of
    ``arity`` such elements when ``arity`` is given (a function table)."""

    size: int
    arity: Optional[int] = None

    @property
    def count(self) -> int:
        """Number of values, saturating at :data:`HUGE`."""
        if self.arity is None:
            return min(self.size, HUGE)
        if self.size <= 1 or self.arity == 0:
            return 1 if self.arity == 0 else self.size
        if (self.size.bit_length() - 1) * self.arity > 62:
            return HUGE
        return min(self.size**self.arity, HUGE)

    def values(self) -> Iterable:
        if self.arity is None:
            return range(self.size)
        return itertools.product(range(self.size), repeat=self.arity)

    def sample(self, rng: random.Random):
        if self.arity is None:
            return rng.randrange(self.size)
        return tuple(rng.randrange(self.size) for _ in range(self.arity))


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int = 0
    mode: str = "exhaustive"
    counterexample: Optional[dict[str, Any]] = None
    skipped: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "passed": self.passed, "cases": self.cases, "mode": self.mode}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.skipped:
            out["skipped"] = list(self.skipped)
        return out


@dataclass
class LawReport:
    subject: str
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> dict[str, Any]:
        return {"subject": self.subject, "passed": self.passed, "results": [r.to_dict() for r in self.results]}


Predicate = Callable[[tuple], Optional[dict]]


@dataclass
class LawInstance:
    """A law at fixed objects: ``dims()`` builds the case space lazily (it may
    raise :class:`InstanceTooLarge`) and ``check`` judges one case."""

    law: str
    objects: tuple
    dims: Callable[[], Sequence[Dim]]
    check: Predicate


def _cases(dims: Sequence[Dim], share: int, rng: random.Random) -> tuple[Iterator[tuple], int, bool]:
    total = _prod(d.count for d in dims)
    if total <= share:
        return itertools.product(*(d.values() for d in dims)), total, True
    return (tuple(d.sample(rng) for d in dims) for _ in range(share)), share, False


def run_cases(subject: str, instances: Iterable[LawInstance], budget: int, seed: int) -> LawReport:
    """Run every instance, grouped by law name in first-seen order.

    A law whose instances together have at most ``budget`` cases is checked
    exhaustively. Otherwise every instance gets ``budget // instances`` cases
    and is sampled when larger than that. Each law stops at its first
    counterexample.
    """
    grouped: dict[str, list[tuple[LawInstance, Optional[Sequence[Dim]]]]] = {}
    for inst in instances:
        try:
            dims = inst.dims()
        except InstanceTooLarge:
            dims = None
        grouped.setdefault(inst.law, []).append((inst, dims))

    results = []
    for law, insts in grouped.items():
        runnable = [(i, d) for i, d in insts if d is not None]
        skipped = [_objects_label(i.objects) for i, d in insts if d is None]
        total = sum(_prod(x.count for x in d) for _, d in runnable)
        share = total if total <= budget else max(1, budget // max(1, len(runnable)))
        result = CheckResult(law, True, 0, "exhaustive", skipped=skipped)
        for inst, dims in runnable:
            rng = random.Random(f"{seed}:{subject}:{law}:{inst.objects}")
            cases, count, exhaustive = _cases(dims, share, rng)
            if not exhaustive:
                result.mode = "sampled"
            failure = None
            seen = 0
            for case in cases:
                seen += 1
                failure = inst.check(case)
                if failure is not None:
                    break
            result.cases += seen
            if failure is not None:
                result.passed = False
                result.counterexample = {"objects": list(inst.objects), **failure}
                break
        results.append(result)
    return LawReport(subject, results)


def _objects_label(objects: tuple) -> str:
    return "x".join(str(o) for o in objects)
