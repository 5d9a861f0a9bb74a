"""
The down-up chain on partitions
===============================

Build the box-removal-then-addition chain on partitions of n, check its
stationary law and spectrum exactly, then watch a simulation approach the
Plancherel measure.
"""

# %%
# Exact matrices at n = 3
# -----------------------
# ``doob=False`` gives the raw operator matrix; the default rescales it by
# ``dim`` so every row sums to one.
from fractions import Fraction

from hopflift import combinat as cb
from hopflift.chains import (named_chain, spectrum_certificate, stationary_distribution,
                             verify_stationary)

raw = named_chain("partition-downup", 3, doob=False)
print("raw operator rows:", [[str(v) for v in row] for row in raw.to_dense()])
k = named_chain("partition-downup", 3)
for lam, row in zip(k.basis, k.to_dense()):
    print(f"{cb.format_partition(lam):>6}", [str(v) for v in row])

# %%
# Stationary law and eigenvalues
# ------------------------------
pi = stationary_distribution("lambda", 6)
print("Plancherel at n=6 is stationary:", verify_stationary(pi, named_chain("partition-downup", 6)))

rep = spectrum_certificate(named_chain("partition-downup", 6), "lambda", 6)
print("eigenvalues:", rep["observed"], "->", rep["verdict"])

# %%
# Monte Carlo from the one-row partition
# --------------------------------------
# The sampler never builds a matrix: each step is a hook walk followed by a
# complementary hook walk.
from hopflift.sample import simulate, tv_distance

for t in (0, 5, 20, 60):
    emp = simulate("partition-downup", (6,), t, 20_000, seed=1)
    tv = tv_distance(emp.freq(), {x: float(p) for x, p in pi.items()})
    print(f"t={t:>3}  TV to Plancherel {tv:.3f}")

print("exact mass of (3,2,1):", pi[(3, 2, 1)], "=", float(pi[(3, 2, 1)]))
assert pi[(3, 2, 1)] == Fraction(16 ** 2, 720)
