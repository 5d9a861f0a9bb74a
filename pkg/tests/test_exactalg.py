from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, strategies as st

from hopflift.exactalg import (FreeVec, Matrix, Poly, ShapeError, char_poly, frac_str,
                               geometric_multiplicity, mat_pow, matrix_from_json,
                               matrix_to_json, min_poly, rank, verify_row_stochastic)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def square(draw, max_k=6):
    k = draw(st.integers(min_value=1, max_value=max_k))
    return [[draw(fractions) for _ in range(k)] for _ in range(k)]


def _sympy_charpoly(grid):
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in grid])
    coeffs = m.charpoly(sympy.Symbol("x")).all_coeffs()[::-1]
    return [F(int(c.p), int(c.q)) for c in coeffs]


@given(square())
def test_char_poly_matches_sympy(grid):
    assert char_poly(grid).c == _sympy_charpoly(grid)


@given(square())
def test_rank_matches_sympy(grid):
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in grid])
    assert rank(grid) == m.rank()


def test_char_poly_large_integers():
    # companion matrix with big coefficients exercises the CRT bound
    coeffs = [F(10 ** 12 + 7), F(-3, 11), F(5 ** 20), F(1, 3)]
    k = len(coeffs)
    grid = [[F(0)] * k for _ in range(k)]
    for i in range(1, k):
        grid[i][i - 1] = F(1)
    for i in range(k):
        grid[i][k - 1] = -coeffs[i]
    assert char_poly(grid).c == coeffs + [F(1)]


def test_min_poly_jordan_block():
    basis = ["a", "b", "c"]
    j = Matrix.from_dense(basis, [[2, 1, 0], [0, 2, 0], [0, 0, 3]])
    mp = min_poly(j)
    assert mp == Poly.from_roots({F(2): 2, F(3): 1})
    assert not mp.is_squarefree()
    assert geometric_multiplicity(j, 2) == 1


def test_min_poly_diagonal():
    d = Matrix.from_dense([0, 1, 2], [[1, 0, 0], [0, 1, 0], [0, 0, F(1, 2)]])
    assert min_poly(d) == Poly.from_roots({F(1): 1, F(1, 2): 1})


def test_poly_factor_and_roots():
    p = Poly.from_roots({F(1, 3): 2, F(-2): 1}) * Poly([1, 0, 1])
    assert p.rational_roots() == {F(1, 3): 2, F(-2): 1}
    degrees = sorted((f.degree, m) for f, m in p.factor())
    assert degrees == [(1, 1), (1, 2), (2, 1)]


def test_matrix_arithmetic_and_power():
    k = Matrix.from_dense(["x", "y"], [[F(1, 2), F(1, 2)], [F(1, 4), F(3, 4)]])
    assert verify_row_stochastic(k) == (True, None)
    k3 = mat_pow(k, 3)
    assert k3 == k @ k @ k
    assert mat_pow(k, 0) == Matrix.identity(k.basis)
    assert k.vecmul({"x": F(1, 3), "y": F(2, 3)}) == FreeVec({"x": F(1, 3), "y": F(2, 3)})
    with pytest.raises(ShapeError):
        k @ Matrix.identity(["x", "z"])


def test_not_stochastic_detected():
    k = Matrix.from_dense(["x", "y"], [[F(1, 2), F(1, 3)], [0, 1]])
    assert verify_row_stochastic(k) == (False, "x")


def test_json_roundtrip_perm_labels():
    basis = [(1, 2), (2, 1)]
    k = Matrix.from_dense(basis, [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]], kind="perm")
    data = matrix_to_json(k)
    assert data["basis"] == ["1 2", "2 1"] and data["stochastic"] is True
    assert data["rows"][0] == ["1/2", "1/2"]
    assert matrix_from_json(data) == k


def test_frac_str_always_has_denominator():
    assert frac_str(1) == "1/1"
    assert frac_str(F(-2, 4)) == "-1/2"
