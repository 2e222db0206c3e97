"""Write-only programs over the state monad live in a writer-shaped submonad.

Saturating the unit values under the ``write`` effect finds exactly the
values a write-only program can denote: "return x" or "return x having
last written s'". That is |X| * (1 + |S|) of the (|X| |S|)^|S| state values.
"""

from effect_factor.presets import preset
from effect_factor.signature import factor, render

interp = preset("state-write")
F = factor(interp)
M = interp.monad

entry = F[2]
print(f"|T 2| = {entry.carrier_size}, |R 2| = {len(entry.elements)}, layer trace {entry.layer_trace}")
for value, witness in zip(entry.elements, entry.witnesses):
    print(f"  {render(witness, interp.signature):16s} -> {M.decode(2, value)}")

# binding in R never leaves R: every Kleisli map into R 2 extends to a table over R 2
k = F.r_unit(2)
print("\nr_bind(r_unit) on R 2:", F.r_bind(k, 2).table)

# with read added the whole state monad comes back
full = factor(preset("state-read-write"))
print("read+write at |X| = 2:", len(full[2].elements), "of", full[2].carrier_size, "values reached")
