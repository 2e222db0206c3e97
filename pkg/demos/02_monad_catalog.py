"""The catalog monads on small sets: carriers, decoded elements and law checks."""

from effect_factor.finset import FinSet
from effect_factor.monad import State, catalog, check_monad_laws

for M in catalog(2):
    sizes = [M.carrier_size(n) for n in range(4)]
    print(f"{M.describe():22s} |T X| for |X| = 0..3: {sizes}")

# elements are integers; decode shows what they mean
M = State(2)
t = M.unit_elem(2, 1)
print("\nstate unit at x1 is element", t, "=", M.decode(2, t), "(one (x, s') pair per start state)")

# the laws hold on every object up to size 3 (continuations take a few seconds)
for M in catalog(2):
    report = check_monad_laws(M, [FinSet(n) for n in range(3)])
    modes = {r.mode for r in report.results}
    print(f"{M.describe():22s} laws {'pass' if report.passed else 'FAIL'}  ({', '.join(sorted(modes))})")
