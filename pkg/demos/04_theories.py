"""What the factored monad identifies: kernel partitions, modularity and stability."""

from effect_factor.analysis import kernel_partition, modularity_profile, stability_check
from effect_factor.presets import PRESETS, identity_left_or, preset

# terms of depth <= 2 over two variables, grouped by denotation
interp = preset("powerset-or")
part = kernel_partition(interp.signature, interp, 2, 2)
print(f"or over powerset: {len(part.terms)} terms, {len(part.blocks)} blocks")
for block in part.to_dict()["partition"]:
    print("  ", block[:4], "..." if len(block) > 4 else "")

# the size of R X follows a closed form for each preset
print()
for name in ("state-write", "state-read", "powerset-or", "powerset-or-fail", "cont-abort"):
    interp = preset(name)
    profile = modularity_profile(interp, interp.signature, [0, 1, 2, 3], PRESETS[name].formula)
    print(f"{name:18s} |R X| = {profile.expression:14s} sizes {profile.sizes()}  {'match' if profile.passed else 'MISMATCH'}")

# write means the same thing in state and in state-with-exceptions
A, B = preset("state-write"), preset("stateexc-write")
print("\nstate vs state+exceptions, write only:", "stable" if stability_check(A.signature, A, B, [0, 1, 2], 3).passed else "unstable")

# but left-biased choice is a different theory of or
rep = stability_check(preset("powerset-or").signature, preset("powerset-or"), identity_left_or(), [2], 2)
print("powerset vs left-biased or:", rep.rows[0]["distinguishing"])
