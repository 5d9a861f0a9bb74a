"""Frozen reference values used across the test suite.

Fractions are written out literally; nothing here is computed by the
package under test.
"""
from fractions import Fraction as F

# combinatorics -----------------------------------------------------------

STANDARDISE = ((6, 1, 4, 8, 2, 11, 10, 13, 5), (5, 1, 3, 6, 2, 8, 7, 9, 4))
SHIFT_BY_3 = ((6, 1, 4, 8, 2, 11, 10, 13, 5), (9, 4, 7, 11, 5, 14, 13, 16, 8))

TABLEAU_T = ((1, 2, 5, 10, 13), (4, 8), (6, 11))
TABLEAU_T_SHIFT_3 = ((4, 5, 8, 13, 16), (7, 11), (9, 14))
TABLEAU_T_STD = ((1, 2, 4, 7, 9), (3, 6), (5, 8))
TABLEAU_T_REMOVABLE_FILLINGS = {11, 13}

UNBUMP_SOURCE = ((1, 2, 5), (3,), (4,))
# removable box -> tableau left behind (before standardising), its standardisation
UNBUMP_RESULTS = {
    (3, 1): (((1, 3, 5), (4,)), ((1, 2, 4), (3,))),
    (1, 3): (((1, 2), (3,), (4,)), ((1, 2), (3,), (4,))),
}

FSYM_ADD_BOX = (((1, 2), (3,), (4,)),
                [((1, 2, 5), (3,), (4,)), ((1, 2), (3, 5), (4,)), ((1, 2), (3,), (4,), (5,))])

# FQSym -------------------------------------------------------------------

SHUFFLE_312_21 = [
    (3, 1, 2, 5, 4), (3, 1, 5, 2, 4), (3, 1, 5, 4, 2), (3, 5, 1, 2, 4), (3, 5, 1, 4, 2),
    (3, 5, 4, 1, 2), (5, 3, 1, 2, 4), (5, 3, 1, 4, 2), (5, 3, 4, 1, 2), (5, 4, 3, 1, 2),
]
COPRODUCT_4132 = [
    ((), (4, 1, 3, 2)),
    ((1,), (1, 3, 2)),
    ((2, 1), (2, 1)),
    ((3, 1, 2), (1,)),
    ((4, 1, 3, 2), ()),
]

# Lambda Pieri pieces
PIERI_PRODUCT_211 = ((2, 1, 1), {(3, 1, 1), (2, 2, 1), (2, 1, 1, 1)})
PIERI_COPRODUCT_311 = ((3, 1, 1), {(2, 1, 1), (3, 1)})

# degree-3 matrices ---------------------------------------------------------

PARTS3 = [(3,), (2, 1), (1, 1, 1)]
LAMBDA3_PRE_DOOB = [
    [F(1, 3), F(1, 3), F(0)],
    [F(1, 3), F(2, 3), F(1, 3)],
    [F(0), F(1, 3), F(1, 3)],
]
LAMBDA3_DOOB = [
    [F(1, 3), F(2, 3), F(0)],
    [F(1, 6), F(2, 3), F(1, 6)],
    [F(0), F(2, 3), F(1, 3)],
]

SYT3 = [((1, 2, 3),), ((1, 2), (3,)), ((1, 3), (2,)), ((1,), (2,), (3,))]
FSYM3_DOOB = [
    [F(1, 3), F(2, 3), F(0), F(0)],
    [F(1, 6), F(1, 3), F(1, 3), F(1, 6)],
    [F(1, 6), F(1, 3), F(1, 3), F(1, 6)],
    [F(0), F(0), F(2, 3), F(1, 3)],
]

# permutation order of the reference display (not lexicographic)
PERMS3_DISPLAY = [(1, 2, 3), (1, 3, 2), (3, 1, 2), (2, 3, 1), (2, 1, 3), (3, 2, 1)]
_a = [F(1, 3)] * 3 + [F(0)] * 3
_b = [F(0)] * 3 + [F(1, 3)] * 3
FQSYM3_DOOB = [_a, _a, _b, _a, _b, _b]

# degree-5 trajectories: every displayed step has probability exactly 1/5
TRAJECTORIES = {
    "b2r-std": [(5, 2, 4, 3, 1), (4, 1, 3, 5, 2), (3, 1, 5, 2, 4), (5, 3, 1, 4, 2)],
    "twisted-t2r-std": [(5, 2, 4, 3, 1), (2, 4, 3, 5, 1), (3, 2, 5, 4, 1), (5, 2, 4, 3, 1)],
    "t2r-std": [(5, 2, 4, 3, 1), (3, 5, 4, 1, 2), (5, 4, 1, 2, 3), (1, 5, 2, 3, 4)],
    "b2r-shuffle": [(5, 2, 4, 3, 1), (5, 2, 4, 1, 3), (5, 2, 3, 4, 1), (1, 5, 2, 3, 4)],
}
TABLEAU_TRAJECTORY = [
    ((1, 3), (2,), (4,), (5,)),
    ((1, 2, 5), (3,), (4,)),
    ((1, 2, 4), (3, 5)),
    ((1, 2), (3, 4), (5,)),
]

# multistep comparison at n=4, t=2
MULTISTEP_TARGET = (3, 1, 4, 2)
MULTISTEP_PROB = F(1, 16)
MULTISTEP_VIA_SHUFFLE = [(1, 4, 2, 3)]
MULTISTEP_VIA_STD = [(4, 1, 2, 3)]

# Schur to fundamental expansions
SCHUR_31 = sorted([(1, 3), (2, 2), (3, 1)])
SCHUR_22 = sorted([(1, 2, 1), (2, 2)])

# small dimensions of irreducibles, hand-counted
DIMS = {(1,): 1, (2,): 1, (1, 1): 1, (2, 1): 2, (3, 1): 3, (2, 2): 2, (2, 1, 1): 3,
        (3, 2): 5, (3, 1, 1): 6, (4, 2): 9, (3, 2, 1): 16, (5, 2, 2): 120}
