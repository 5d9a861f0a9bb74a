"""Exact rational linear algebra over combinatorial bases.

Every entry is a :class:`fractions.Fraction`; nothing here touches floating
point.  Matrices keep one ``{column index: value}`` dict per row, which suits
the very sparse operator matrices of card-shuffling chains.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, isqrt
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import combinat

__all__ = [
    "FreeVec",
    "Matrix",
    "Poly",
    "ShapeError",
    "char_poly",
    "min_poly",
    "rank",
    "mat_mul",
    "mat_pow",
    "row",
    "verify_row_stochastic",
    "frac_str",
    "parse_frac",
    "matrix_to_json",
    "matrix_from_json",
]


class ShapeError(ValueError):
    """Raised when matrices over different bases are combined."""


def frac_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: str | int | Fraction) -> Fraction:
    return Fraction(text)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# free vectors


class FreeVec(dict):
    """Linear combination ``{label: coefficient}`` with no stored zeros."""

    def add(self, label: Hashable, coeff) -> None:
        value = self.get(label, 0) + coeff
        if value:
            self[label] = value
        else:
            self.pop(label, None)

    def __add__(self, other: Mapping) -> "FreeVec":
        out = FreeVec(self)
        for k, v in other.items():
            out.add(k, v)
        return out

    def __mul__(self, scalar) -> "FreeVec":
        if not scalar:
            return FreeVec()
        return FreeVec({k: v * scalar for k, v in self.items()})

    __rmul__ = __mul__

    def total(self) -> Fraction:
        return sum(self.values(), Fraction(0))


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Square matrix with exact entries, indexed by an ordered basis.

    Parameters
    ----------
    basis : sequence of hashable labels
        Row/column labels, in the order used for dense export.
    rows : list of dict, optional
        ``rows[i][j]`` is the entry in row ``i``, column ``j`` (positions,
        not labels).  Zeros must not be stored.
    kind : str, optional
        Label kind for text encoding: ``"perm"``, ``"tableau"``,
        ``"partition"`` or ``"composition"``.
    """

    def __init__(self, basis: Sequence, rows: list[dict[int, Fraction]] | None = None,
                 kind: str | None = None, stochastic: bool | None = None):
        self.basis = list(basis)
        self.index = {x: i for i, x in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise ShapeError("basis labels must be distinct")
        self.rows = rows if rows is not None else [{} for _ in self.basis]
        if len(self.rows) != len(self.basis):
            raise ShapeError("row count does not match basis size")
        self.kind = kind
        self.stochastic = stochastic

    # -- construction -----------------------------------------------------

    @classmethod
    def from_entries(cls, basis: Sequence, entries: Mapping[Hashable, Mapping[Hashable, Any]],
                     kind: str | None = None) -> "Matrix":
        m = cls(basis, kind=kind)
        for x, rowmap in entries.items():
            r = m.rows[m.index[x]]
            for y, v in rowmap.items():
                v = Fraction(v)
                if v:
                    r[m.index[y]] = v
        return m

    @classmethod
    def from_dense(cls, basis: Sequence, grid: Sequence[Sequence[Any]],
                   kind: str | None = None) -> "Matrix":
        if len(grid) != len(basis) or any(len(r) != len(basis) for r in grid):
            raise ShapeError("dense grid does not match basis size")
        rows = [{j: Fraction(v) for j, v in enumerate(r) if Fraction(v)} for r in grid]
        return cls(basis, rows, kind=kind)

    @classmethod
    def identity(cls, basis: Sequence, kind: str | None = None) -> "Matrix":
        return cls(basis, [{i: Fraction(1)} for i in range(len(basis))], kind=kind)

    def copy(self) -> "Matrix":
        return Matrix(self.basis, [dict(r) for r in self.rows], self.kind, self.stochastic)

    # -- access -----------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __getitem__(self, key: tuple[Hashable, Hashable]) -> Fraction:
        x, y = key
        return self.rows[self.index[x]].get(self.index[y], Fraction(0))

    def row(self, x: Hashable) -> FreeVec:
        return FreeVec({self.basis[j]: v for j, v in self.rows[self.index[x]].items()})

    def to_dense(self) -> list[list[Fraction]]:
        k = self.size
        out = [[Fraction(0)] * k for _ in range(k)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def row_sums(self) -> list[Fraction]:
        return [sum(r.values(), Fraction(0)) for r in self.rows]

    def trace(self) -> Fraction:
        return sum((r.get(i, Fraction(0)) for i, r in enumerate(self.rows)), Fraction(0))

    def relabel(self, fn: Callable[[Hashable], Hashable], kind: str | None = None) -> "Matrix":
        return Matrix([fn(x) for x in self.basis], [dict(r) for r in self.rows],
                      kind if kind is not None else self.kind, self.stochastic)

    def reorder(self, basis: Sequence) -> "Matrix":
        """Same operator, rows and columns listed in a new basis order."""
        if set(basis) != set(self.basis) or len(basis) != len(self.basis):
            raise ShapeError("reorder needs a permutation of the basis")
        pos = [self.index[x] for x in basis]
        inv = {old: new for new, old in enumerate(pos)}
        rows = [{inv[j]: v for j, v in self.rows[old].items()} for old in pos]
        return Matrix(basis, rows, self.kind, self.stochastic)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Matrix") -> None:
        if self.basis != other.basis:
            raise ShapeError("matrices are indexed by different bases")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.basis == other.basis and self.rows == other.rows

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        rows = []
        for a, b in zip(self.rows, other.rows):
            r = dict(a)
            for j, v in b.items():
                s = r.get(j, 0) + v
                if s:
                    r[j] = s
                else:
                    r.pop(j, None)
            rows.append(r)
        return Matrix(self.basis, rows, self.kind)

    def __neg__(self) -> "Matrix":
        return Matrix(self.basis, [{j: -v for j, v in r.items()} for r in self.rows], self.kind)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        if not c:
            return Matrix(self.basis, None, self.kind)
        return Matrix(self.basis, [{j: v * c for j, v in r.items()} for r in self.rows], self.kind)

    def __rmul__(self, c) -> "Matrix":
        return self.scale(c)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def vecmul(self, vec: Mapping[Hashable, Any]) -> FreeVec:
        """Row vector times matrix, ``vec`` given as ``{label: mass}``."""
        acc: dict[int, Fraction] = {}
        for x, a in vec.items():
            if not a:
                continue
            for j, v in self.rows[self.index[x]].items():
                acc[j] = acc.get(j, 0) + a * v
        return FreeVec({self.basis[j]: v for j, v in acc.items() if v})

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __repr__(self) -> str:
        return f"Matrix(size={self.size}, nnz={self.nnz()}, kind={self.kind!r})"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    rows = []
    brows = b.rows
    for r in a.rows:
        acc: dict[int, Fraction] = {}
        for k, x in r.items():
            for j, y in brows[k].items():
                acc[j] = acc.get(j, 0) + x * y
        rows.append({j: v for j, v in acc.items() if v})
    return Matrix(a.basis, rows, a.kind)


def mat_pow(a: Matrix, t: int) -> Matrix:
    if t < 0:
        raise ValueError("matrix power must be non-negative")
    result = Matrix.identity(a.basis, a.kind)
    base = a
    while t:
        if t & 1:
            result = mat_mul(result, base)
        t >>= 1
        if t:
            base = mat_mul(base, base)
    return result


def row(a: Matrix, x: Hashable) -> FreeVec:
    return a.row(x)


def verify_row_stochastic(a: Matrix) -> tuple[bool, Hashable | None]:
    """Exact check that entries are non-negative and rows sum to one.

    Sets ``a.stochastic`` and returns ``(ok, first offending row label)``.
    """
    for i, r in enumerate(a.rows):
        if any(v < 0 for v in r.values()) or sum(r.values(), Fraction(0)) != 1:
            a.stochastic = False
            return False, a.basis[i]
    a.stochastic = True
    return True, None


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = c

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, a) -> "Poly":
        return cls([a])

    @classmethod
    def from_roots(cls, roots: Mapping[Fraction, int] | Iterable[tuple[Fraction, int]]) -> "Poly":
        items = roots.items() if isinstance(roots, Mapping) else roots
        p = cls([1])
        for r, m in items:
            for _ in range(m):
                p = p * cls([-Fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def monic(self) -> "Poly":
        return self * (1 / self.lead()) if self.c else Poly()

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.c == other.c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.c))

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.c), len(other.c))
        a = self.c + [Fraction(0)] * (n - len(self.c))
        b = other.c + [Fraction(0)] * (n - len(other.c))
        return Poly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "Poly":
        return Poly(-x for x in self.c)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(x * other for x in self.c)
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        out = Poly([1])
        for _ in range(e):
            out = out * self
        return out

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [Fraction(0)] * max(len(r) - len(other.c) + 1, 0)
        lead = other.c[-1]
        for i in range(len(q) - 1, -1, -1):
            coef = r[i + len(other.c) - 1] / lead
            q[i] = coef
            if coef:
                for j, b in enumerate(other.c):
                    r[i + j] -= coef * b
        return Poly(q), Poly(r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def derivative(self) -> "Poly":
        return Poly(i * a for i, a in enumerate(self.c) if i)

    def __call__(self, x):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def divides(self, other: "Poly") -> bool:
        return not (other % self)

    def is_squarefree(self) -> bool:
        return poly_gcd(self, self.derivative()).degree == 0

    def factor(self) -> list[tuple["Poly", int]]:
        """Irreducible monic factors over Q with multiplicities."""
        import sympy

        x = sympy.Symbol("x")
        expr = sympy.Poly([sympy.Rational(a.numerator, a.denominator) for a in reversed(self.c)],
                          x, domain="QQ")
        _, facs = expr.factor_list()
        out = []
        for f, m in facs:
            coeffs = [Fraction(int(a.p), int(a.q)) for a in reversed(f.all_coeffs())]
            out.append((Poly(coeffs).monic(), int(m)))
        return sorted(out, key=lambda fm: (fm[0].degree, fm[0].c))

    def rational_roots(self) -> dict[Fraction, int]:
        return {-f.c[0]: m for f, m in self.factor() if f.degree == 1}

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and a == 1:
                terms.append(mono)
            elif mono and a == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{a}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic()


def eval_poly_matrix(p: Poly, a: Matrix) -> Matrix:
    """Horner evaluation of ``p(a)`` with exact matrix arithmetic."""
    result = Matrix(a.basis, None, a.kind)
    ident = Matrix.identity(a.basis, a.kind)
    for coef in reversed(p.c):
        result = mat_mul(result, a) + ident.scale(coef)
    return result


# ---------------------------------------------------------------------------
# characteristic polynomial: Hessenberg reduction modulo primes + CRT


_PRIME_CEIL = 1 << 26  # products of two residues stay well inside int64


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    return all(m % f for f in range(3, isqrt(m) + 1, 2))


def _primes_below(ceil: int):
    m = ceil - 1
    while m > 2:
        if _is_prime(m):
            yield m
        m -= 1


def _integer_dense(a: Matrix | Sequence[Sequence[Any]]) -> tuple[list[list[int]], int]:
    """Scale a rational matrix by the lcm ``d`` of its denominators."""
    grid = a.to_dense() if isinstance(a, Matrix) else [[Fraction(v) for v in r] for r in a]
    d = 1
    for r in grid:
        for v in r:
            if v.denominator != 1:
                d = _lcm(d, v.denominator)
    return [[int(v * d) for v in r] for r in grid], d


def _charpoly_mod(m: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial mod ``p`` of an integer matrix (low degree first)."""
    h = m % p
    k = h.shape[0]
    for c in range(k - 2):
        nz = np.nonzero(h[c + 1:, c])[0]
        if nz.size == 0:
            continue
        r = c + 1 + int(nz[0])
        if r != c + 1:
            h[[r, c + 1], :] = h[[c + 1, r], :]
            h[:, [r, c + 1]] = h[:, [c + 1, r]]
        inv = pow(int(h[c + 1, c]), p - 2, p)
        f = (h[c + 2:, c] * inv) % p
        if not f.any():
            continue
        h[c + 2:, :] = (h[c + 2:, :] - np.outer(f, h[c + 1, :]) % p) % p
        h[:, c + 1] = (h[:, c + 1] + (h[:, c + 2:] @ f) % p) % p
    hl = h.tolist()
    polys = np.zeros((k + 1, k + 1), dtype=np.int64)
    polys[0, 0] = 1
    for mm in range(1, k + 1):
        new = np.zeros(k + 1, dtype=np.int64)
        new[1:] = polys[mm - 1, :-1]
        new = (new - hl[mm - 1][mm - 1] * polys[mm - 1]) % p
        w = np.zeros(mm - 1, dtype=np.int64)
        t = 1
        for i in range(mm - 1, 0, -1):
            t = t * hl[i][i - 1] % p
            if not t:
                break
            w[i - 1] = hl[i - 1][mm - 1] * t % p
        if w.any():
            new = (new - (w @ polys[: mm - 1]) % p) % p
        polys[mm] = new
    return [int(v) for v in polys[k]]


def char_poly(a: Matrix | Sequence[Sequence[Any]]) -> Poly:
    """Exact monic characteristic polynomial ``det(xI - a)``.

    The matrix is scaled to an integer matrix ``M = d a``; ``det(xI - M)`` is
    computed modulo enough primes to exceed the Gershgorin bound
    ``2 (1 + rho)^k`` on its coefficients, then lifted by CRT.
    """
    ints, d = _integer_dense(a)
    k = len(ints)
    if k == 0:
        return Poly([1])
    rho = max(sum(abs(v) for v in r) for r in ints)
    bound = 2 * (1 + rho) ** k + 1
    arr = np.array(ints, dtype=object)
    modulus = 1
    coeffs = [0] * (k + 1)
    for p in _primes_below(_PRIME_CEIL):
        residues = _charpoly_mod(np.array(arr % p, dtype=np.int64), p)
        if modulus == 1:
            coeffs = residues
        else:
            inv = pow(modulus, -1, p)
            coeffs = [x + modulus * (((r - x) * inv) % p) for x, r in zip(coeffs, residues)]
        modulus *= p
        if modulus > bound:
            break
    half = modulus // 2
    lifted = [c - modulus if c > half else c for c in coeffs]
    # det(xI - a) = d^-k det(dxI - M)
    return Poly(Fraction(c) * Fraction(d) ** (i - k) for i, c in enumerate(lifted))


# ---------------------------------------------------------------------------
# rank and minimal polynomial


def rank(a: Matrix | Sequence[Sequence[Any]]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    m, _ = _integer_dense(a)
    m = [r for r in m if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        pc = pr[c]
        for i in range(r + 1, len(m)):
            mi = m[i]
            f = mi[c]
            if f:
                m[i] = [(pc * mi[j] - f * pr[j]) // prev if j > c else 0 for j in range(ncols)]
            elif pc != prev:
                m[i] = [(pc * mi[j]) // prev if j > c else 0 for j in range(ncols)]
        prev = pc
        r += 1
        if r == len(m):
            break
    return r


def min_poly(a: Matrix, cp: Poly | None = None) -> Poly:
    """Minimal polynomial from the factored characteristic polynomial.

    For each irreducible factor ``f`` of multiplicity ``m`` the exponent is
    the least ``e`` with ``rank(f(a)^e) = k - m deg f`` (exact ranks).
    """
    cp = cp if cp is not None else char_poly(a)
    k = a.size
    result = Poly([1])
    for f, m in cp.factor():
        fa = eval_poly_matrix(f, a)
        power = fa
        target = k - m * f.degree
        e = 1
        while rank(power) != target:
            power = mat_mul(power, fa)
            e += 1
            if e > m:
                raise ArithmeticError("kernel ranks inconsistent with characteristic polynomial")
        result = result * f ** e
    return result


def geometric_multiplicity(a: Matrix, eigenvalue) -> int:
    shifted = a - Matrix.identity(a.basis).scale(eigenvalue)
    return a.size - rank(shifted)


# ---------------------------------------------------------------------------
# JSON


def matrix_to_json(a: Matrix) -> dict:
    """``{"basis": [...], "kind": ..., "rows": [["p/q", ...], ...], "stochastic": bool}``."""
    if a.stochastic is None:
        verify_row_stochastic(a)
    if a.kind is not None:
        labels = combinat.format_labels(a.kind, a.basis)
    else:
        labels = [str(x) for x in a.basis]
    return {
        "basis": labels,
        "kind": a.kind,
        "rows": [[frac_str(v) for v in r] for r in a.to_dense()],
        "stochastic": bool(a.stochastic),
    }


def matrix_from_json(data: Mapping | str) -> Matrix:
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("kind")
    if kind is not None:
        basis = [combinat.parse_label(kind, s) for s in data["basis"]]
    else:
        basis = list(data["basis"])
    m = Matrix.from_dense(basis, [[parse_frac(v) for v in r] for r in data["rows"]], kind=kind)
    m.stochastic = data.get("stochastic")
    return m
