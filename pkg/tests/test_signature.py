import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from effect_factor.faults import merge_pair, remove_element
from effect_factor.finset import FinFun, FinSet, InstanceTooLarge, carrier_cap
from effect_factor.monad import Continuation, ExceptionMonad, Identity, Powerset, Reader, State, StateExc, catalog
from effect_factor.presets import PRESETS, identity_left_or, preset, read_op, write_op
from effect_factor.signature import (
    FactoredMonad,
    Leaf,
    Node,
    Operation,
    Signature,
    SignatureError,
    TheoremViolation,
    check_lemma2_stabilization,
    count_terms,
    enumerate_terms,
    eval_term,
    factor,
    interpretation,
    render,
    saturate,
    substitute,
    verify_theorem1,
)


# -- signatures and interpretations -------------------------------------------


def test_signature_rejects_duplicates():
    with pytest.raises(SignatureError):
        Signature((write_op(2), write_op(2)))


def test_interpretation_validates_tables():
    M = State(2)
    with pytest.raises(SignatureError):
        interpretation(M, [write_op(2)], {"write": [0]})  # one entry per parameter
    with pytest.raises(SignatureError):
        interpretation(M, [write_op(2)], {"write": [0, 4]})  # |T 1| = 4
    with pytest.raises(SignatureError):
        interpretation(M, [write_op(2)], {})


def test_restrict_keeps_tables():
    full = preset("state-read-write")
    sub = full.restrict(Signature((write_op(2),)))
    assert sub.signature.names() == ["write"]
    assert sub.gen("write") == full.gen("write")


# -- terms --------------------------------------------------------------------


def test_term_counts():
    assert count_terms(Signature(), 4, 5) == 4
    assert len(enumerate_terms(Signature(), 4, 5)) == 4
    write = Signature((write_op(2),))
    assert count_terms(write, 1, 1) == 3
    read = Signature((read_op(2),))
    assert count_terms(read, 2, 1) == 6
    assert len(enumerate_terms(read, 2, 1)) == 6


@pytest.mark.parametrize("name", list(PRESETS))
def test_enumeration_matches_oracle_count(name):
    interp = preset(name)
    ops = [(op.name, op.A.size, op.B.size, None) for op in interp.signature]
    for X, depth in [(1, 2), (2, 2)]:
        got = enumerate_terms(interp.signature, X, depth)
        assert len(got) == len(set(got)) == count_terms(interp.signature, X, depth)
        assert len(got) == len(oracles.terms(ops, X, depth))
        assert all(t.depth <= depth for t in got)


def test_enumeration_cap():
    with pytest.raises(InstanceTooLarge):
        enumerate_terms(Signature((read_op(2),)), 3, 3, cap=1000)


def test_render():
    sig = preset("powerset-or").signature
    assert render(Node("or", 0, (Leaf(0), Leaf(1))), sig) == "or(x0, x1)"
    sig = preset("state-write").signature
    assert render(Node("write", 1, (Leaf(0),)), sig) == "write[s1](x0)"


def test_substitute_replaces_leaves():
    t = Node("or", 0, (Leaf(0), Leaf(1)))
    assert substitute(t, [Leaf(1), Node("or", 0, (Leaf(0), Leaf(0)))]) == Node(
        "or", 0, (Leaf(1), Node("or", 0, (Leaf(0), Leaf(0)))))


# -- evaluation ----------------------------------------------------------------


@pytest.mark.parametrize("M", catalog(), ids=lambda M: M.kind)
def test_leaf_evaluates_to_unit(M):
    interp = interpretation(M, [], {})
    for x in range(3):
        assert eval_term(Leaf(x), interp, 3) == M.unit_elem(3, x)


def test_write_and_read_decoded():
    interp = preset("state-read-write")
    M = interp.monad
    for s1, x in itertools.product(range(2), range(2)):
        v = eval_term(Node("write", s1, (Leaf(x),)), interp, 2)
        assert M.decode(2, v) == ((x, s1), (x, s1))
    for xs in itertools.product(range(2), repeat=2):
        v = eval_term(Node("read", 0, tuple(Leaf(x) for x in xs)), interp, 2)
        assert M.decode(2, v) == tuple((xs[s], s) for s in range(2))


def test_eval_rejects_ill_typed_terms():
    interp = preset("state-write")
    with pytest.raises(SignatureError):
        eval_term(Node("write", 0, (Leaf(0), Leaf(0))), interp, 2)
    with pytest.raises(SignatureError):
        eval_term(Node("read", 0, (Leaf(0),)), interp, 2)
    with pytest.raises(SignatureError):
        eval_term(Leaf(3), interp, 2)


def _oracle_state(S, names):
    ops = []
    if "read" in names:
        ops.append(oracles.state_read(S))
    if "write" in names:
        ops.append(oracles.state_write(S))
    return ops


@pytest.mark.parametrize("name, ops_names", [
    ("state-read-write", {"read", "write"}), ("state-write", {"write"}), ("state-read", {"read"}),
])
def test_eval_matches_oracle_semantics(name, ops_names):
    interp = preset(name)
    M = interp.monad
    ops = _oracle_state(2, ops_names)
    for t, ref in zip(enumerate_terms(interp.signature, 2, 2), oracles.terms(ops, 2, 2)):
        got = M.decode(2, eval_term(t, interp, 2))
        assert got == oracles.evaluate(ref, lambda x: oracles.state_unit(2, x), ops), render(t)


# -- saturation -----------------------------------------------------------------


def test_saturate_examples():
    assert len(saturate(preset("state-write"), 2).elements) == 6
    assert len(saturate(preset("state-read"), 2).elements) == 4
    full = saturate(preset("state-read-write"), 2)
    assert len(full.elements) == 16 == full.carrier_size
    assert full.n.is_bijective()
    assert len(saturate(preset("powerset-or"), 3).elements) == 7
    assert len(saturate(preset("cont-abort"), 2).elements) == 4


@pytest.mark.parametrize("M", [Identity(), ExceptionMonad(1), Reader(2), State(2), Powerset(), StateExc(2), Continuation(2)],
                         ids=lambda M: M.kind)
def test_empty_signature_gives_units(M):
    for n in range(4):
        entry = saturate(interpretation(M, [], {}), n)
        assert entry.elements == [M.unit_elem(n, x) for x in range(n)]
        assert entry.layer_trace == [n]


def _oracle_closure(name, S, X):
    if name.startswith("state") or name == "stateexc-write":
        names = {"state-read-write": {"read", "write"}, "state-write": {"write"}, "state-read": {"read"},
                 "stateexc-write": {"write"}}[name]
        return oracles.closure([oracles.state_unit(S, x) for x in range(X)], _oracle_state(S, names))
    if name == "powerset-or":
        return oracles.closure([oracles.powerset_unit(x) for x in range(X)], [oracles.POWERSET_OR])
    if name == "powerset-or-fail":
        return oracles.closure([oracles.powerset_unit(x) for x in range(X)], [oracles.POWERSET_OR, oracles.POWERSET_FAIL])
    if name == "cont-abort":
        return oracles.closure([oracles.cont_unit(S, X, x) for x in range(X)], [oracles.cont_abort(S, X)])
    if name == "empty-signature":
        return oracles.closure([oracles.state_unit(S, x) for x in range(X)], [])
    raise KeyError(name)


@pytest.mark.parametrize("name", list(PRESETS))
def test_saturation_matches_oracle(name):
    interp = preset(name)
    M = interp.monad
    for X in range(4):
        entry = saturate(interp, X)
        ref = _oracle_closure(name, 2, X)
        assert {M.decode(X, v) for v in entry.elements} == ref
        assert len(entry.elements) == len(set(entry.elements))


@pytest.mark.parametrize("name", list(PRESETS))
def test_witnesses_denote_their_elements(name):
    interp = preset(name)
    for X in range(3):
        entry = saturate(interp, X)
        memo = {}
        for v, w in zip(entry.elements, entry.witnesses):
            assert eval_term(w, interp, X, memo) == v


def test_witnesses_have_minimal_depth():
    interp = preset("state-read-write")
    entry = saturate(interp, 2)
    terms = enumerate_terms(interp.signature, 2, 3)
    first = {}
    for t in terms:
        v = eval_term(t, interp, 2)
        first[v] = min(first.get(v, t.depth), t.depth)
    for v, w in zip(entry.elements, entry.witnesses):
        assert w.depth == first[v]


def test_round_work_cap():
    with pytest.raises(InstanceTooLarge):
        saturate(preset("powerset-or"), 25, work_cap=10**6)


def test_element_cap():
    with carrier_cap(10):
        with pytest.raises(InstanceTooLarge):
            saturate(preset("state-read-write"), 2)


# -- the factored monad -----------------------------------------------------------


@pytest.mark.parametrize("name", list(PRESETS))
def test_r_bind_of_unit_is_identity(name):
    F = factor(preset(name))
    for X in range(3):
        k = F.r_unit(X)
        assert F.r_bind(k, X).table == tuple(range(len(F[X].elements)))


def test_state_write_bind_closure():
    F = factor(preset("state-write"))
    R2 = F[2].elements
    assert len(R2) == 6
    # every Kleisli map into R 2 keeps binding inside R 2
    for k in itertools.product(range(6), repeat=2):
        table = F.r_bind(FinFun(FinSet(2), F.R(2), k), 2).table
        assert all(0 <= r < 6 for r in table)


def test_empty_signature_r_is_identity():
    F = factor(preset("empty-signature"))
    for X in range(4):
        assert F.r_unit(X).table == tuple(range(X))
        for k in itertools.product(range(X), repeat=X):
            assert F.r_bind(FinFun(FinSet(X), FinSet(X), k), X).table == k


def test_r_map_and_strength_types():
    F = factor(preset("powerset-or"))
    swap = FinFun(FinSet(2), FinSet(2), (1, 0))
    m = F.r_map(swap)
    assert m.dom.size == m.cod.size == 3 and m.is_bijective()
    st = F.r_strength(2, 2)
    assert st.dom.size == 2 * 3 and st.cod.size == len(F[4].elements) == 15


def test_e_lands_in_r_and_is_surjective():
    interp = preset("state-write")
    F = factor(interp)
    hit = {F.e(t, 2) for t in enumerate_terms(interp.signature, 2, 2)}
    assert hit == set(range(6))


@pytest.mark.parametrize("name", list(PRESETS))
def test_eval_r_agrees_with_n_after_e(name):
    interp = preset(name)
    F = factor(interp)
    for X in range(3):
        for t in enumerate_terms(interp.signature, X, 2):
            assert F.eval_r(t, X) == F.e(t, X)


def test_merged_pair_is_not_injective():
    F = factor(preset("state-write"), [2])
    G = merge_pair(F, 2)
    assert not G.n(2).is_injective()
    assert F.n(2).is_injective()


# -- the factorization theorem --------------------------------------------------


@pytest.mark.parametrize("name", list(PRESETS))
def test_theorem1_holds_for_presets(name):
    F = factor(preset(name))
    report = verify_theorem1(F, [0, 1, 2], budget=10**5, seed=0)
    assert report.passed, [r.to_dict() for r in report.failures()]
    assert all(r.mode == "exhaustive" for r in report.results)


def test_theorem1_catches_corrupted_base_monad():
    from effect_factor.faults import corrupted_powerset
    from effect_factor.presets import or_op

    M = corrupted_powerset()
    interp = interpretation(M, [or_op()], {"or": [M.encode(2, {0, 1})]})
    report = verify_theorem1(factor(interp), [0, 1, 2])
    assert not report.passed
    assert not report["e_bind"].passed
    assert "t[u]" in report["e_bind"].counterexample


def test_theorem1_catches_removed_element():
    F = factor(preset("state-write"), [2])
    G = remove_element(F, 2)
    report = verify_theorem1(G, [0, 1, 2])
    closure = report["R_closure"]
    assert not closure.passed
    assert closure.counterexample["witness"] == "write[s1](x1)"


def test_member_raises_theorem_violation():
    F = factor(preset("state-write"))
    M = F.monad
    swap = M.encode(2, ((0, 1), (0, 0)))  # flips the state: not writer-like
    with pytest.raises(TheoremViolation) as info:
        F.member(2, swap, {"probe": True})
    assert info.value.detail["value"] == swap


# -- stabilization ---------------------------------------------------------------


def test_layer_trace_examples():
    F = factor(preset("state-read-write"))
    rep = check_lemma2_stabilization(F, 2)
    assert rep.layer_trace[0] == 2 and rep.layer_trace[-1] == 16
    assert rep.passed and rep.rounds_to_fixpoint <= 16
    assert check_lemma2_stabilization(factor(preset("empty-signature")), 3).layer_trace == [3]
    assert check_lemma2_stabilization(factor(preset("powerset-or")), 3).layer_trace[-1] == 7


@pytest.mark.parametrize("name", list(PRESETS))
def test_layer_trace_counts_terms_by_depth(name):
    # layer i of the trace is the number of values denoted by terms of depth <= i
    interp = preset(name)
    trace = saturate(interp, 2).layer_trace
    for depth in range(min(len(trace), 3)):
        values = {eval_term(t, interp, 2) for t in enumerate_terms(interp.signature, 2, depth)}
        assert len(values) == trace[depth]


def test_removed_element_breaks_stabilization():
    F = factor(preset("state-write"), [2])
    rep = check_lemma2_stabilization(remove_element(F, 2), 2)
    assert not rep.closed and not rep.passed
    assert rep.defect["witness"] == "write[s1](x1)"


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.data())
def test_random_state_effects_saturate_to_closure(S, data):
    # arbitrary (not necessarily generic) effect tables for a unary operation A -> 1
    M = State(S)
    A = data.draw(st.integers(1, 3))
    table = data.draw(st.lists(st.integers(0, M.carrier_size(1) - 1), min_size=A, max_size=A))
    op = Operation("op", FinSet(A), FinSet(1))
    interp = interpretation(M, [op], {"op": table})
    decoded = [M.decode(1, t) for t in table]
    # oracle semantics of op a on a continuation value: run a, then the continuation from the resulting state
    sem = ("op", A, 1, lambda a, ch: tuple(ch[0][decoded[a][s][1]] for s in range(S)))
    for X in range(3):
        entry = saturate(interp, X)
        ref = oracles.closure([oracles.state_unit(S, x) for x in range(X)], [sem])
        assert {M.decode(X, v) for v in entry.elements} == ref
        F = FactoredMonad(interp)
        assert check_lemma2_stabilization(F, X).passed


def test_identity_left_or_collapses_to_units():
    F = factor(identity_left_or())
    assert len(F[3].elements) == 3 and F.sizes() == {3: 3}
