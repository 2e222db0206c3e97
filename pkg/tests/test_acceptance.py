"""The ten acceptance criteria, each timed against its limit.

Every test records one PASS/FAIL line (shown in the terminal summary) and
then asserts both the result and the time limit. Expected values are either
closed forms or recomputed by the brute-force oracles in ``oracles.py``.
"""

import time

import pytest

import oracles
from effect_factor.analysis import correctness_check, kernel_partition, modularity_profile, stability_check
from effect_factor.faults import corrupted_powerset, merge_pair, remove_element
from effect_factor.finset import FinSet
from effect_factor.monad import catalog, check_monad_laws
from effect_factor.presets import PRESETS, preset
from effect_factor.signature import Signature, check_lemma2_stabilization, factor, interpretation, verify_theorem1
from sweeps import diagonal_fill_sweep, random_factorization_sweep

S = 2


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def conclude(criterion, number, title, limit, timer, failures):
    passed = not failures and timer.seconds < limit
    detail = "; ".join(map(str, failures[:3]))
    criterion(number, title, passed, timer.seconds, limit, detail)
    assert not failures, failures
    assert timer.seconds < limit, f"took {timer.seconds:.2f} s, limit {limit} s"


def test_criterion_01_writer(criterion):
    interp = preset("state-write", S)
    failures = []
    with Timer() as t:
        F = factor(interp)
        sizes = [len(F[X].elements) for X in range(4)]
        blocks = [len(kernel_partition(interp.signature, interp, X, 2).blocks) for X in range(4)]
    want = [X * (1 + S) for X in range(4)]
    oracle = [len(oracles.closure([oracles.state_unit(S, x) for x in range(X)], [oracles.state_write(S)])) for X in range(4)]
    if sizes != want or oracle != want:
        failures.append({"R": sizes, "expected": want, "oracle": oracle})
    if blocks != want:
        failures.append({"blocks": blocks, "expected": want})
    conclude(criterion, 1, "writer: |R X| = |X|(1+|S|) = 0,3,6,9 and depth-2 kernel blocks", 1, t, failures)


def test_criterion_02_reader(criterion):
    interp = preset("state-read", S)
    with Timer() as t:
        sizes = [len(factor(interp)[X].elements) for X in (1, 2, 3)]
    oracle = [len(oracles.closure([oracles.state_unit(S, x) for x in range(X)], [oracles.state_read(S)])) for X in (1, 2, 3)]
    failures = [] if sizes == oracle == [1, 4, 9] else [{"R": sizes, "oracle": oracle}]
    conclude(criterion, 2, "reader: |R X| = |X|^|S| = 1,4,9", 1, t, failures)


def test_criterion_03_full_recovery(criterion):
    interp = preset("state-read-write", S)
    failures = []
    with Timer() as t:
        F = factor(interp)
        for X in range(3):
            entry = F[X]
            want = (X * S) ** S
            if not (len(entry.elements) == entry.carrier_size == want and entry.n.is_bijective()):
                failures.append({"X": X, "R": len(entry.elements), "T": entry.carrier_size, "expected": want})
    conclude(criterion, 3, "read+write: |R X| = |T X| = (|X||S|)^|S|, n bijective", 5, t, failures)


def test_criterion_04_empty_signature(criterion):
    failures = []
    checked = []
    with Timer() as t:
        for M in catalog(S):
            units = {X: [M.unit_elem(X, x) for x in range(X)] for X in range(4)}
            if any(len(set(u)) != len(u) for u in units.values()):
                continue
            checked.append(M.kind)
            interp = interpretation(M, [], {})
            F = factor(interp)
            for X in range(4):
                part = kernel_partition(Signature(), interp, X, 3)
                if len(F[X].elements) != X or part.blocks != [[x] for x in range(X)]:
                    failures.append({"monad": M.kind, "X": X, "R": len(F[X].elements), "blocks": len(part.blocks)})
    if len(checked) != len(catalog(S)):
        failures.append({"unit not injective": sorted({M.kind for M in catalog(S)} - set(checked))})
    conclude(criterion, 4, f"empty signature: R = identity for {len(checked)} catalog monads", 1, t, failures)


def test_criterion_05_theorem1(criterion):
    failures = []
    with Timer() as t:
        for name in PRESETS:
            report = verify_theorem1(factor(preset(name)), [0, 1, 2], budget=10**5, seed=0)
            for r in report.results:
                if not r.passed or r.mode != "exhaustive" or r.skipped:
                    failures.append({"preset": name, "law": r.name, "mode": r.mode, "counterexample": r.counterexample})
    conclude(criterion, 5, "factorization theorem: all presets, sizes <= 2, exhaustive", 60, t, failures)


def test_criterion_06_stabilization(criterion):
    failures = []
    with Timer() as t:
        for name in PRESETS:
            F = factor(preset(name))
            for X in range(4):
                rep = check_lemma2_stabilization(F, X)
                if not rep.passed:
                    failures.append({"preset": name, **rep.to_dict()})
    conclude(criterion, 6, "stabilization: monotone traces, bounded rounds, closed fixpoints", 10, t, failures)


def test_criterion_07_modularity(criterion):
    failures = []
    with Timer() as t:
        cases = [
            ("powerset-or", (1, 2, 3), [2**X - 1 for X in (1, 2, 3)]),
            ("powerset-or-fail", (1, 2, 3), [2**X for X in (1, 2, 3)]),
            ("cont-abort", (0, 1, 2, 3), [X + 2 for X in range(4)]),
        ]
        for name, sizes, want in cases:
            interp = preset(name)
            profile = modularity_profile(interp, interp.signature, sizes, PRESETS[name].formula)
            if list(profile.sizes()) != want or not profile.passed:
                failures.append({"preset": name, "R": profile.sizes(), "expected": want})
    conclude(criterion, 7, "modularity: 2^|X|-1, 2^|X|, |X|+|A|", 5, t, failures)


def test_criterion_08_stability(criterion):
    A, B = preset("state-write", S), preset("stateexc-write", S)
    with Timer() as t:
        report = stability_check(A.signature, A, B, [0, 1, 2], 3)
    failures = [r for r in report.rows if not r["equal"]]
    # independent recomputation of the shared partition
    for X in range(3):
        ref = oracles.kernel_blocks([oracles.state_write(S)], lambda x: oracles.state_unit(S, x), X, 3)
        if len(ref) != report.rows[X]["blocks_A"]:
            failures.append({"X": X, "oracle_blocks": len(ref), "blocks": report.rows[X]["blocks_A"]})
    conclude(criterion, 8, "stability: state vs state-with-exceptions, depth <= 3, |X| <= 2", 30, t, failures)


def test_criterion_09_factorization_system(criterion):
    with Timer() as t:
        random_part = random_factorization_sweep(1000, seed=0, max_size=6)
        fill = diagonal_fill_sweep(4)
    failures = random_part["failures"] + fill["failures"]
    if fill["squares"] == 0:
        failures.append("no squares enumerated")
    conclude(criterion, 9, f"factorization system: 1000 random maps, {fill['squares']} squares", 30, t, failures)


def test_criterion_10_fault_injection(criterion):
    failures = []
    with Timer() as t:
        laws = check_monad_laws(corrupted_powerset(), [FinSet(n) for n in range(3)])
        assoc = laws["associativity"]
        if assoc.passed or not assoc.counterexample:
            failures.append("corrupted bind passed associativity")

        interp = preset("state-write", S)
        F = factor(interp, [2])
        merged = correctness_check(merge_pair(F, 2), interp.signature, 2, 2)
        if merged.passed or not merged.mismatch or len(merged.mismatch.get("terms", [])) != 2:
            failures.append("merged n passed correctness")

        removed = verify_theorem1(remove_element(F, 2), [0, 1, 2])["R_closure"]
        if removed.passed or "witness" not in (removed.counterexample or {}):
            failures.append("removed element passed closure")
    detail = "" if failures else (
        f"assoc {assoc.counterexample['lhs']}!={assoc.counterexample['rhs']}; "
        f"merged {merged.mismatch['terms']}; missing via {removed.counterexample['witness']}"
    )
    conclude(criterion, 10, "fault injection: three fixtures fail with counterexamples", 5, t, failures)
    print(detail)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
