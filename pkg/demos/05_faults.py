"""The checkers on deliberately broken inputs: each names a counterexample."""

from effect_factor.analysis import correctness_check
from effect_factor.faults import corrupted_powerset, merge_pair, remove_element
from effect_factor.finset import FinSet
from effect_factor.monad import check_monad_laws
from effect_factor.presets import preset
from effect_factor.signature import check_lemma2_stabilization, factor, verify_theorem1

# one wrong entry in the powerset extension table
laws = check_monad_laws(corrupted_powerset(), [FinSet(n) for n in range(3)])
print("corrupted bind:", [r.name for r in laws.failures()])
print("  ", laws["associativity"].counterexample)

interp = preset("state-write")
F = factor(interp, [2])

# n no longer injective: two different programs collapse in R
rep = correctness_check(merge_pair(F, 2), interp.signature, 2, 2)
print("merged pair:", rep.mismatch)

# R 2 missing a reachable value: closure fails and names the program reaching it
G = remove_element(F, 2)
print("removed element:", verify_theorem1(G, [0, 1, 2])["R_closure"].counterexample)
print("  stabilization closed?", check_lemma2_stabilization(G, 2).closed)
