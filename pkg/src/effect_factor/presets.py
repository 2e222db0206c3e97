"""Built-in interpretations: a catalog monad with generic effects for a
small signature, plus the closed-form size expected of ``R X``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .finset import FinSet
from .monad import Continuation, Identity, MonadSpec, Powerset, State, StateExc
from .signature import Interpretation, Operation, interpretation

UNIT = FinSet(1)


def _states(S: int) -> FinSet:
    return FinSet(S, tuple(f"s{i}" for i in range(S)))


def read_op(S: int) -> Operation:
    return Operation("read", UNIT, _states(S))


def write_op(S: int) -> Operation:
    return Operation("write", _states(S), UNIT)


def gen_read(M: MonadSpec, S: int) -> list[int]:
    # s |-> (s, s) in T S
    return [M.encode(S, tuple((s, s) for s in range(S)))]


def gen_write(M: MonadSpec, S: int) -> list[int]:
    # s' |-> (lambda s. (*, s')) in T 1
    return [M.encode(1, tuple((0, s1) for _ in range(S))) for s1 in range(S)]


def state_read_write(size: int = 2) -> Interpretation:
    M = State(size)
    return interpretation(M, [read_op(size), write_op(size)], {"read": gen_read(M, size), "write": gen_write(M, size)})


def state_write(size: int = 2) -> Interpretation:
    M = State(size)
    return interpretation(M, [write_op(size)], {"write": gen_write(M, size)})


def state_read(size: int = 2) -> Interpretation:
    M = State(size)
    return interpretation(M, [read_op(size)], {"read": gen_read(M, size)})


def or_op() -> Operation:
    return Operation("or", UNIT, FinSet(2, ("left", "right")))


def fail_op() -> Operation:
    return Operation("fail", UNIT, FinSet(0))


def powerset_or(size: int = 2) -> Interpretation:
    M = Powerset()
    return interpretation(M, [or_op()], {"or": [M.encode(2, {0, 1})]})


def powerset_or_fail(size: int = 2) -> Interpretation:
    M = Powerset()
    return interpretation(M, [or_op(), fail_op()], {"or": [M.encode(2, {0, 1})], "fail": [M.encode(0, set())]})


def cont_abort(size: int = 2) -> Interpretation:
    M = Continuation(size)
    abort = Operation("abort", FinSet(size, tuple(f"a{i}" for i in range(size))), FinSet(0))
    # T 0 = A^(A^0) = A^1: the constant continuation-ignoring answers
    return interpretation(M, [abort], {"abort": [M.encode(0, (a,)) for a in range(size)]})


def stateexc_write(size: int = 2) -> Interpretation:
    M = StateExc(size)
    return interpretation(M, [write_op(size)], {"write": gen_write(M, size)})


def empty_signature(size: int = 2) -> Interpretation:
    return interpretation(State(size), [], {})


def identity_left_or() -> Interpretation:
    """``or`` as left-biased choice in the identity monad. Shares the
    signature of ``powerset-or`` but identifies ``or(x, y)`` with ``x``."""
    return interpretation(Identity(), [or_op()], {"or": [0]})


@dataclass(frozen=True)
class Preset:
    name: str
    build: Callable[[int], Interpretation]
    formula: str
    description: str

    def __call__(self, size: int = 2) -> Interpretation:
        return self.build(size)


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        Preset("state-read-write", state_read_write, "state", "state(S) with read and write: recovers all of T"),
        Preset("state-write", state_write, "writer", "state(S) with write only: the writer-like monad (1+S) x -"),
        Preset("state-read", state_read, "reader", "state(S) with read only: the reader monad S -> -"),
        Preset("powerset-or", powerset_or, "nonempty-powerset", "powerset with binary choice: nonempty subsets"),
        Preset("powerset-or-fail", powerset_or_fail, "powerset", "powerset with choice and failure: all subsets"),
        Preset("cont-abort", cont_abort, "exception", "continuations over A with abort: the exception monad - + A"),
        Preset("stateexc-write", stateexc_write, "writer", "state with exceptions, write only: still writer-like"),
        Preset("empty-signature", empty_signature, "identity", "state(S) with no operations: the identity monad"),
    ]
}


def preset(name: str, size: int = 2) -> Interpretation:
    try:
        return PRESETS[name](size)
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known presets: {', '.join(PRESETS)}") from None


def formula_param(interp: Interpretation) -> int:
    """The parameter size a closed-form formula is stated in (``|S|`` or ``|A|``)."""
    params = interp.monad.params
    return next(iter(params.values()), 0)
