"""
Matrix-free sampling
====================

Seeded single steps, hook walks, and an empirical check that sampled card
shuffles project onto the tableau chain.
"""

# %%
# One trajectory of each shuffle
# ------------------------------
from hopflift import combinat as cb
from hopflift.chains import named_chain
from hopflift.lumping import rsk_p_map
from hopflift.sample import (empirical_lumping_test, hook_walk_law, hook_walk_remove,
                             rng_stream, step)

rng = rng_stream(seed=2024)
for name in ("b2r-std", "twisted-t2r-std", "t2r-std", "b2r-shuffle"):
    x, path = (5, 2, 4, 3, 1), []
    for _ in range(3):
        x = step(name, x, rng)
        path.append(cb.format_perm(x))
    print(f"{name:>16}: 5 2 4 3 1 -> " + " -> ".join(path))

# %%
# Hook walk against its exact law
# -------------------------------
from collections import Counter

lam = (4, 2, 1)
draws = Counter(hook_walk_remove(lam, rng, trials=50_000))
for box, p in sorted(hook_walk_law(lam).items()):
    print(box, f"exact {float(p):.4f}  sampled {draws[box] / 50_000:.4f}")

# %%
# Sampled weak lumping
# --------------------
rep = empirical_lumping_test("b2r-std", rsk_p_map(4), named_chain("tableau-downup", 4),
                             (1, 2, 3, 4), t=6, trials=40_000, seed=3)
print(rep["verdict"], "max deviation", round(rep["max_deviation"], 4))
