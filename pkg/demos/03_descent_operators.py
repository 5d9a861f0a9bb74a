"""
Descent operators beyond down-up
================================

Any probability on (weak composition, block order) pairs defines a descent
operator.  Its spectrum is predicted from the graded dimensions alone, and
it lumps to compositions by descents.
"""

# %%
# A custom operator
# -----------------
import random
from fractions import Fraction

from hopflift import DescentOpSpec
from hopflift.chains import ChainSpec, random_spec, spectrum_certificate
from hopflift.hopf import schur_to_fundamental
from hopflift.lumping import des_map, dynkin_strong_check

spec = DescentOpSpec.build(4, [((2, 2), None, Fraction(1, 3)), ((1, 3), (2, 1), Fraction(2, 3))])
print(spec.to_json())

for alg in ("fqsym", "fsym", "lambda"):
    k = ChainSpec(alg, spec).matrix()
    rep = spectrum_certificate(k, alg, 4, spec=spec)
    print(f"{alg:>6}: {rep['verdict']}  {rep['observed']}  diagonalisable={rep['diagonalisable']}")

# %%
# Descent classes
# ---------------
rng = random.Random(0)
for _ in range(3):
    s = random_spec(5, rng)
    print(bool(dynkin_strong_check(ChainSpec("fqsym", s).matrix(), des_map(5))), s.to_json()["terms"])

# %%
# Why Schur functions are not a state space basis here
# -----------------------------------------------------
# Both expansions share a fundamental term, so the images overlap.
print("s(3,1) ->", schur_to_fundamental((3, 1)))
print("s(2,2) ->", schur_to_fundamental((2, 2)))
