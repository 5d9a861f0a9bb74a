"""Degree-n operators on the Hopf algebras FQSym, FSym and Lambda.

FQSym (permutations, fundamental basis) carries the real computation: the
product shuffles the first word with the shifted second word, the coproduct
deconcatenates and standardises.  FSym (standard tableaux) sits inside FQSym
through RSK insertion-tableau fibres, and Lambda (partitions, Schur basis) is
its quotient by the shape map, so operator matrices for both are transported
from FQSym with an invariance / lumping certificate at every step.  Only the
Pieri pieces (multiplying or comultiplying by a single box) are also built
directly, as an independent cross-check.

Operator matrices follow the Markov convention ``K = [T]^T``: row = source.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, prod
from typing import Iterable, Iterator, Mapping, Sequence

from . import combinat as cb
from .combinat import InvalidInputError, Perm, Tableau
from .exactalg import FreeVec, Matrix, parse_frac, frac_str

__all__ = [
    "Algebra",
    "DescentOpSpec",
    "InvarianceError",
    "Term",
    "basis",
    "descent_operator_matrix",
    "eta",
    "eta_vector",
    "fqsym_coproduct",
    "fqsym_coproduct_D",
    "fqsym_product",
    "fsym_matrix_via_embedding",
    "fsym_pieri_direct",
    "lambda_matrix_via_quotient",
    "lambda_pieri_direct",
    "multinomial",
    "operator_matrix",
    "rsk_fibers",
    "schur_to_fundamental",
    "state_space_basis_check",
]


class Algebra(str, Enum):
    FQSYM = "fqsym"
    FSYM = "fsym"
    LAMBDA = "lambda"

    @property
    def label_kind(self) -> str:
        return {"fqsym": "perm", "fsym": "tableau", "lambda": "partition"}[self.value]


class InvarianceError(ArithmeticError):
    """The image of a fibre sum left the span of fibre sums."""


def basis(alg: Algebra | str, n: int) -> list:
    alg = Algebra(alg)
    if alg is Algebra.FQSYM:
        return cb.permutations(n)
    if alg is Algebra.FSYM:
        return cb.syt(n)
    return cb.partitions(n)


@lru_cache(maxsize=None)
def hilbert_dim(alg: Algebra | str, k: int) -> int:
    """``dim H_k``: k!, the number of SYT of size k, or p(k)."""
    if k < 0:
        return 0
    alg = Algebra(alg)
    if alg is Algebra.FQSYM:
        return factorial(k)
    if alg is Algebra.FSYM:
        return len(cb.syt(k))
    return len(cb.partitions(k))


def multinomial(parts: Sequence[int]) -> int:
    return factorial(sum(parts)) // prod(factorial(d) for d in parts)


# ---------------------------------------------------------------------------
# descent operator specifications


@dataclass(frozen=True)
class Term:
    D: tuple[int, ...]
    sigma: tuple[int, ...]
    prob: Fraction


@dataclass(frozen=True)
class DescentOpSpec:
    """Probability distribution on pairs (weak composition D, tensorand permutation sigma).

    The operator is ``T_P = sum P(D, sigma) / binom(n; D) * m . sigma . Delta_D``
    where ``sigma`` places block ``sigma[i]`` of the deconcatenation in
    tensor slot ``i`` before multiplying.
    """

    n: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("degree must be at least 1")
        if not self.terms:
            raise InvalidInputError("a descent operator needs at least one term")
        total = Fraction(0)
        for t in self.terms:
            cb.as_weak_composition(t.D, self.n)
            if not t.D:
                raise InvalidInputError("weak composition must have at least one part")
            if sorted(t.sigma) != list(range(1, len(t.D) + 1)):
                raise InvalidInputError(f"sigma {t.sigma} is not a permutation of the {len(t.D)} tensorands")
            if t.prob < 0:
                raise InvalidInputError("probabilities must be non-negative")
            total += t.prob
        if total != 1:
            raise InvalidInputError(f"probabilities sum to {total}, not 1")

    @classmethod
    def build(cls, n: int, terms: Iterable) -> "DescentOpSpec":
        out = []
        for item in terms:
            if isinstance(item, Term):
                out.append(item)
                continue
            D, sigma, prob = item
            D = tuple(int(x) for x in D)
            sigma = tuple(range(1, len(D) + 1)) if sigma is None else tuple(int(x) for x in sigma)
            out.append(Term(D, sigma, parse_frac(prob)))
        return cls(n, tuple(out))

    @classmethod
    def from_json(cls, data: Mapping | str) -> "DescentOpSpec":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.build(int(data["n"]), [(t["D"], t.get("sigma"), t["prob"]) for t in data["terms"]])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"D": list(t.D), "sigma": list(t.sigma), "prob": frac_str(t.prob)} for t in self.terms],
        }

    @classmethod
    def preset(cls, name: str, n: int) -> "DescentOpSpec":
        """Resolve ``down-up``, ``twisted-top``, ``top-std``, ``bottom-r:<r>`` or ``q-mix:<p/q>``."""
        key, _, arg = name.partition(":")
        if key == "down-up":
            return cls.build(n, [((n - 1, 1), (1, 2), 1)])
        if key == "twisted-top":
            return cls.build(n, [((1, n - 1), (2, 1), 1)])
        if key == "top-std":
            return cls.build(n, [((1, n - 1), (1, 2), 1)])
        if key == "bottom-r":
            r = int(arg)
            if not 1 <= r <= n:
                raise InvalidInputError(f"bottom-r needs 1 <= r <= n, got r={r}")
            return cls.build(n, [((n - r,) + (1,) * r, None, 1)])
        if key == "q-mix":
            q = parse_frac(arg)
            if not 0 <= q <= 1:
                raise InvalidInputError(f"q must lie in [0, 1], got {q}")
            terms = [((1, n - 1), (2, 1), q), ((n - 1, 1), (1, 2), 1 - q)]
            return cls.build(n, [t for t in terms if t[2]])
        raise InvalidInputError(f"unknown descent operator preset {name!r}")


# ---------------------------------------------------------------------------
# FQSym


def _interleavings(words: Sequence[Sequence[int]]) -> Iterator[tuple[int, ...]]:
    words = [tuple(w) for w in words if w]
    total = sum(len(w) for w in words)
    pos = [0] * len(words)
    out = [0] * total

    def rec(k: int) -> Iterator[tuple[int, ...]]:
        if k == total:
            yield tuple(out)
            return
        for i, w in enumerate(words):
            if pos[i] < len(w):
                out[k] = w[pos[i]]
                pos[i] += 1
                yield from rec(k + 1)
                pos[i] -= 1

    return rec(0)


@lru_cache(maxsize=200_000)
def _product_terms(blocks: tuple[Perm, ...]) -> tuple[Perm, ...]:
    shifted = []
    offset = 0
    for b in blocks:
        shifted.append(cb.shift(b, offset))
        offset += len(b)
    return tuple(_interleavings(shifted))


def fqsym_product(*factors: Sequence[int]) -> FreeVec:
    """Product of fundamental basis elements: shuffle with successive shifts."""
    out = FreeVec()
    for w in _product_terms(tuple(cb.standardise(f) for f in factors)):
        out.add(w, 1)
    return out


def fqsym_coproduct_D(p: Sequence[int], D: Sequence[int]) -> tuple[Perm, ...]:
    """The single tensor term of ``Delta_D(p)``: standardised consecutive slices."""
    if sum(D) != len(p):
        raise InvalidInputError(f"weak composition {tuple(D)} does not sum to {len(p)}")
    out = []
    start = 0
    for d in D:
        out.append(cb.standardise(p[start:start + d]))
        start += d
    return tuple(out)


def fqsym_coproduct(p: Sequence[int]) -> list[tuple[Perm, Perm]]:
    """Full coproduct as the list of its ``len(p) + 1`` tensor terms."""
    return [fqsym_coproduct_D(p, (i, len(p) - i)) for i in range(len(p) + 1)]


def operator_matrix(n: int, D: Sequence[int], sigma: Sequence[int] | None = None,
                    weight=1) -> Matrix:
    """``weight * [m . sigma . Delta_D]^T`` on FQSym_n (no normalisation)."""
    D = cb.as_weak_composition(D, n)
    sigma = tuple(range(1, len(D) + 1)) if sigma is None else tuple(sigma)
    perms = cb.permutations(n)
    m = Matrix(perms, kind="perm")
    idx = m.index
    weight = Fraction(weight)
    for i, x in enumerate(perms):
        blocks = fqsym_coproduct_D(x, D)
        row = m.rows[i]
        for y in _product_terms(tuple(blocks[s - 1] for s in sigma)):
            j = idx[y]
            row[j] = row.get(j, 0) + weight
    return m


def _fqsym_descent_matrix(spec: DescentOpSpec) -> Matrix:
    perms = cb.permutations(spec.n)
    m = Matrix(perms, kind="perm")
    idx = m.index
    for t in spec.terms:
        if not t.prob:
            continue
        w = t.prob / multinomial(t.D)
        for i, x in enumerate(perms):
            blocks = fqsym_coproduct_D(x, t.D)
            row = m.rows[i]
            for y in _product_terms(tuple(blocks[s - 1] for s in t.sigma)):
                j = idx[y]
                row[j] = row.get(j, 0) + w
    return m


# ---------------------------------------------------------------------------
# rescaling function


@lru_cache(maxsize=None)
def _eta_tableau(t: Tableau) -> int:
    if not t:
        return 1
    # Delta_{1,...,1} = iterated Delta_{k-1,1}: sum over successive unbumpings
    return sum(_eta_tableau(cb.standardise_tableau(cb.unbump(t, b)[0]))
               for b in cb.removable_boxes(cb.shape(t)))


@lru_cache(maxsize=None)
def _eta_partition(lam: tuple[int, ...]) -> int:
    if not lam:
        return 1
    return sum(_eta_partition(cb.remove_box(lam, b)) for b in cb.removable_boxes(lam))


def eta(alg: Algebra | str, x) -> Fraction:
    """Sum of the coefficients of ``Delta_{1,...,1}(x)``."""
    alg = Algebra(alg)
    if alg is Algebra.FQSYM:
        # Delta_{1,...,1} of a permutation is the single term (1) (x) ... (x) (1)
        blocks = fqsym_coproduct_D(x, (1,) * len(x))
        value = int(all(b == (1,) for b in blocks))
    elif alg is Algebra.FSYM:
        value = _eta_tableau(tuple(tuple(r) for r in x))
    else:
        value = _eta_partition(tuple(x))
    return Fraction(value)


def eta_vector(alg: Algebra | str, n: int) -> dict:
    return {x: eta(alg, x) for x in basis(alg, n)}


# ---------------------------------------------------------------------------
# FSym through the RSK embedding


@lru_cache(maxsize=None)
def _rsk_fibers(n: int) -> dict[Tableau, tuple[Perm, ...]]:
    fibers: dict[Tableau, list[Perm]] = {t: [] for t in cb.syt(n)}
    for p in cb.permutations(n):
        fibers[cb.rsk_insertion_tableau(p)].append(p)
    return {t: tuple(ps) for t, ps in fibers.items()}


def rsk_fibers(n: int) -> dict[Tableau, tuple[Perm, ...]]:
    """``{T: permutations with insertion tableau T}`` in SYT order."""
    return dict(_rsk_fibers(n))


def fiber_sum_image(k: Matrix, fibers: Mapping, targets: Sequence) -> Matrix:
    """Matrix of ``T`` on the span of fibre sums, or :class:`InvarianceError`.

    ``k`` is ``[T]^T`` on the big basis; ``fibers`` maps each target label to
    the big-basis states it sums.
    """
    fiber_of = {x: t for t, xs in fibers.items() for x in xs}
    out = Matrix(targets)
    tindex = out.index
    for i, t in enumerate(targets):
        image: dict = {}
        for x in fibers[t]:
            for j, v in k.rows[k.index[x]].items():
                y = k.basis[j]
                image[y] = image.get(y, 0) + v
        row = {}
        for s in {fiber_of[y] for y in image}:
            coeffs = {image.get(y, 0) for y in fibers[s]}
            if len(coeffs) != 1:
                raise InvarianceError(
                    f"image of fibre sum {t!r} is not constant on fibre {s!r}: {sorted(coeffs)}")
            c = coeffs.pop()
            if c:
                row[tindex[s]] = Fraction(c)
        out.rows[i] = row
    return out


def fsym_matrix_via_embedding(spec: DescentOpSpec, fqsym: Matrix | None = None) -> Matrix:
    """``[T_P]^T`` on SYT_n computed inside FQSym on RSK fibre sums."""
    k = fqsym if fqsym is not None else _fqsym_descent_matrix(spec)
    out = fiber_sum_image(k, _rsk_fibers(spec.n), cb.syt(spec.n))
    out.kind = "tableau"
    return out


def fsym_add_box_product(t: Tableau) -> list[Tableau]:
    """``m(T (x) .)``: add a box holding ``n + 1`` in every possible place."""
    n = sum(cb.shape(t))
    return [cb.tableau_add_box(t, b, n + 1) for b in cb.addable_boxes(cb.shape(t))]


def fsym_coproduct_n1(t: Tableau) -> list[Tableau]:
    """Left factors of ``Delta_{n-1,1}(T)``, one per removable box."""
    return [cb.standardise_tableau(cb.unbump(t, b)[0]) for b in cb.removable_boxes(cb.shape(t))]


def fsym_pieri_direct(n: int) -> Matrix:
    """``[(1/n) m Delta_{n-1,1}]^T`` on SYT_n from unbumping and box addition."""
    tabs = cb.syt(n)
    m = Matrix(tabs, kind="tableau")
    w = Fraction(1, n)
    for i, t in enumerate(tabs):
        row = m.rows[i]
        for t1 in fsym_coproduct_n1(t):
            for t2 in fsym_add_box_product(t1):
                j = m.index[t2]
                row[j] = row.get(j, 0) + w
    return m


# ---------------------------------------------------------------------------
# Lambda


def pieri_product(nu: Sequence[int]) -> list[tuple[int, ...]]:
    """``m(nu (x) (1))``: every partition one box larger."""
    nu = tuple(nu)
    return [cb.add_box(nu, b) for b in cb.addable_boxes(nu)]


def pieri_coproduct(lam: Sequence[int]) -> list[tuple[int, ...]]:
    """Left factors of ``Delta_{n-1,1}(lam)``: every partition one box smaller."""
    lam = tuple(lam)
    return [cb.remove_box(lam, b) for b in cb.removable_boxes(lam)]


def lambda_pieri_direct(n: int) -> Matrix:
    parts = cb.partitions(n)
    m = Matrix(parts, kind="partition")
    w = Fraction(1, n)
    for i, lam in enumerate(parts):
        row = m.rows[i]
        for nu in pieri_coproduct(lam):
            for mu in pieri_product(nu):
                j = m.index[mu]
                row[j] = row.get(j, 0) + w
    return m


def lambda_matrix_via_quotient(fsym: Matrix) -> Matrix:
    """Lump an FSym operator matrix by shape (raises ``LumpingError`` on failure)."""
    from .lumping import LumpingError, dynkin_strong_check, sh_map

    n = sum(cb.shape(fsym.basis[0]))
    cert = dynkin_strong_check(fsym, sh_map(n))
    if not cert.verdict:
        raise LumpingError(f"shape map does not lump this FSym matrix: {cert.witness}")
    lumped = cert.lumped
    lumped.kind = "partition"
    return lumped


def descent_operator_matrix(alg: Algebra | str, spec: DescentOpSpec) -> Matrix:
    """``K = [T_P]^T`` on the chosen algebra's degree-n basis (before Doob)."""
    alg = Algebra(alg)
    k = _fqsym_descent_matrix(spec)
    if alg is Algebra.FQSYM:
        return k
    k = fsym_matrix_via_embedding(spec, k)
    if alg is Algebra.FSYM:
        return k
    return lambda_matrix_via_quotient(k)


def schur_to_fundamental(lam: Sequence[int]) -> list[tuple[int, ...]]:
    """Compositions ``I`` (with multiplicity) in ``s_lam = sum F_I``."""
    return sorted((cb.tableau_descent_composition(t) for t in cb.syt_enumerate(tuple(lam))),
                  reverse=True)


# ---------------------------------------------------------------------------
# state space basis


def _compositions(n: int) -> Iterator[tuple[int, ...]]:
    for k in range(n):
        for cuts in combinations(range(1, n), k):
            pts = (0, *cuts, n)
            yield tuple(pts[i + 1] - pts[i] for i in range(len(pts) - 1))


def state_space_basis_check(n: int) -> dict:
    """Non-negativity of structure constants and absence of primitives, degrees <= n."""
    report = {"n": n, "products": 0, "coproducts": 0, "verdict": True, "witness": None}
    for m in range(1, n + 1):
        for i in range(m + 1):
            for w in cb.permutations(i):
                for z in cb.permutations(m - i):
                    counts = Counter(_product_terms((w, z)))
                    report["products"] += 1
                    if any(c <= 0 or int(c) != c for c in counts.values()):
                        report.update(verdict=False, witness={"product": [w, z]})
                        return report
        for x in cb.permutations(m):
            for D in _compositions(m):
                fqsym_coproduct_D(x, D)
                report["coproducts"] += 1
            if m > 1:
                middle = [t for t in fqsym_coproduct(x) if t[0] and t[1]]
                if not middle:
                    report.update(verdict=False, witness={"primitive": x})
                    return report
    return report
