"""Markov chains from descent operators: Doob transform, named chains, certificates.

Every chain is an exact :class:`~hopflift.exactalg.Matrix` with rows indexed
by the current state.  The checks in this module return plain report dicts

    {"check": ..., "n": ..., "params": {...}, "verdict": "pass" | "fail", "witness": ...}

with any extra fields appended, so they serialise straight to JSON.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations as _iperms
from math import factorial, perm as falling
from typing import Any, Hashable, Mapping

from . import combinat as cb
from . import hopf
from .combinat import InvalidInputError
from .exactalg import (Matrix, Poly, char_poly, frac_str, geometric_multiplicity, mat_mul,
                       min_poly, verify_row_stochastic)
from .hopf import Algebra, DescentOpSpec

__all__ = [
    "CHAIN_NAMES",
    "ChainSpec",
    "DoobError",
    "HarmonicityError",
    "NegativeEntryError",
    "NonPositiveEtaError",
    "bottom_r_shuffle_matrix",
    "chain_algebra",
    "diagonalisability_probe",
    "doob_transform",
    "lemma53_identity_check",
    "multistep_identity_compare",
    "named_chain",
    "predicted_spectrum",
    "random_spec",
    "spectrum_certificate",
    "stationary_distribution",
    "verify_stationary",
]


class DoobError(ValueError):
    """The Doob transform's hypotheses fail."""


class NegativeEntryError(DoobError):
    pass


class NonPositiveEtaError(DoobError):
    pass


class HarmonicityError(DoobError):
    pass


def report(check: str, n: int, params: Mapping, ok: bool, witness: Any = None, **extra) -> dict:
    out = {"check": check, "n": n, "params": dict(params),
           "verdict": "pass" if ok else "fail", "witness": witness}
    out.update(extra)
    return out


def passed(rep: Mapping) -> bool:
    return rep.get("verdict") == "pass"


def _lab(kind: str | None, x) -> str:
    return cb.format_labels(kind, [x])[0] if kind else str(x)


# ---------------------------------------------------------------------------
# Doob transform


def doob_transform(k: Matrix, eta: Mapping[Hashable, Any]) -> Matrix:
    """``K_hat(x, y) = K(x, y) eta(y) / eta(x)``.

    Raises
    ------
    NegativeEntryError, NonPositiveEtaError, HarmonicityError
        One for each failed hypothesis, checked in that order.
    """
    eta = {x: Fraction(eta[x]) for x in k.basis}
    for i, r in enumerate(k.rows):
        for j, v in r.items():
            if v < 0:
                raise NegativeEntryError(f"K({k.basis[i]!r}, {k.basis[j]!r}) = {v} < 0")
    for x, e in eta.items():
        if e <= 0:
            raise NonPositiveEtaError(f"eta({x!r}) = {e} is not positive")
    ev = [eta[x] for x in k.basis]
    rows = []
    for i, r in enumerate(k.rows):
        if sum((v * ev[j] for j, v in r.items()), Fraction(0)) != ev[i]:
            raise HarmonicityError(f"eta is not harmonic at {k.basis[i]!r}")
        rows.append({j: v * ev[j] / ev[i] for j, v in r.items()})
    out = Matrix(k.basis, rows, k.kind)
    verify_row_stochastic(out)
    return out


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class ChainSpec:
    """A descent operator on one algebra, optionally Doob-transformed."""

    algebra: Algebra
    operator: DescentOpSpec
    doob: bool = True

    def __post_init__(self):
        object.__setattr__(self, "algebra", Algebra(self.algebra))

    @property
    def n(self) -> int:
        return self.operator.n

    def matrix(self) -> Matrix:
        k = hopf.descent_operator_matrix(self.algebra, self.operator)
        return doob_transform(k, hopf.eta_vector(self.algebra, self.n)) if self.doob else k


# name -> (algebra, preset); the two shuffles without standardisation have no preset
_CHAINS: dict[str, tuple[Algebra, str | None]] = {
    "partition-downup": (Algebra.LAMBDA, "down-up"),
    "tableau-downup": (Algebra.FSYM, "down-up"),
    "b2r-std": (Algebra.FQSYM, "down-up"),
    "twisted-t2r-std": (Algebra.FQSYM, "twisted-top"),
    "t2r-std": (Algebra.FQSYM, "top-std"),
    "bottom-r-std": (Algebra.FQSYM, "bottom-r"),
    "q-mix": (Algebra.FQSYM, "q-mix"),
    "b2r-shuffle": (Algebra.FQSYM, None),
    "bottom-r-shuffle": (Algebra.FQSYM, None),
}
CHAIN_NAMES = tuple(_CHAINS)


def chain_algebra(name: str) -> Algebra:
    if name not in _CHAINS:
        raise InvalidInputError(f"unknown chain {name!r}; expected one of {', '.join(CHAIN_NAMES)}")
    return _CHAINS[name][0]


def chain_spec(name: str, n: int, r: int = 1, q: Fraction | str = Fraction(1, 2)) -> ChainSpec:
    """The :class:`ChainSpec` behind a named standardising chain."""
    alg, preset = _CHAINS.get(name, (None, None))
    if preset is None:
        raise InvalidInputError(f"{name!r} is not a descent-operator chain")
    if preset == "bottom-r":
        preset = f"bottom-r:{r}"
    elif preset == "q-mix":
        preset = f"q-mix:{q}"
    return ChainSpec(alg, DescentOpSpec.preset(preset, n))


def named_chain(name: str, n: int, r: int = 1, q: Fraction | str = Fraction(1, 2),
                doob: bool = True) -> Matrix:
    """Exact transition matrix of a named chain (``doob=False`` gives ``[T]^T``)."""
    chain_algebra(name)
    if name in ("b2r-shuffle", "bottom-r-shuffle"):
        return bottom_r_shuffle_matrix(n, 1 if name == "b2r-shuffle" else r)
    if name == "partition-downup":
        k = hopf.lambda_pieri_direct(n)
    elif name == "tableau-downup":
        k = hopf.fsym_pieri_direct(n)
    else:
        spec = chain_spec(name, n, r, q)
        return spec.matrix() if doob else hopf.descent_operator_matrix(spec.algebra, spec.operator)
    if not doob:
        return k
    return doob_transform(k, hopf.eta_vector(chain_algebra(name), n))


def bottom_r_shuffle_matrix(n: int, r: int) -> Matrix:
    """Remove the bottom ``r`` cards and reinsert them in uniformly random order and positions.

    Each of the ``n! / (n-r)!`` arrangements of the removed cards among the
    remaining ``n - r`` is equally likely.
    """
    if not 1 <= r <= n:
        raise InvalidInputError(f"need 1 <= r <= n, got r={r}, n={n}")
    perms = cb.permutations(n)
    m = Matrix(perms, kind="perm")
    w = Fraction(1, falling(n, r))
    for i, x in enumerate(perms):
        top, bottom = x[: n - r], x[n - r:]
        row = m.rows[i]
        for pos in combinations(range(n), r):
            for order in _iperms(bottom):
                y = list(top)
                for p, c in zip(pos, order):
                    y.insert(p, c)
                row[m.index[tuple(y)]] = w
    m.stochastic = True
    return m


# ---------------------------------------------------------------------------
# stationary distributions


def stationary_distribution(alg: Algebra | str, n: int) -> dict:
    """Stationary law of the down-up chain: ``eta(x) * (coefficient of x in .^n) / n!``."""
    alg = Algebra(alg)
    nf = factorial(n)
    if alg is Algebra.FQSYM:
        return {p: Fraction(1, nf) for p in cb.permutations(n)}
    if alg is Algebra.FSYM:
        return {t: Fraction(cb.dim(cb.shape(t)), nf) for t in cb.syt(n)}
    return {lam: Fraction(cb.dim(lam) ** 2, nf) for lam in cb.partitions(n)}


def verify_stationary(pi: Mapping, k: Matrix) -> bool:
    """Exact ``pi K = pi`` and ``sum pi = 1``."""
    if sum(pi.values(), Fraction(0)) != 1:
        return False
    image = k.vecmul(pi)
    return all(image.get(x, 0) == pi.get(x, 0) for x in k.basis)


# ---------------------------------------------------------------------------
# spectrum


def down_up_multiplicities(alg: Algebra | str, n: int) -> dict[Fraction, int]:
    """``{j/n: dim H_{n-j} - dim H_{n-j-1}}`` with zero multiplicities dropped."""
    out = {}
    for j in range(n + 1):
        m = hopf.hilbert_dim(alg, n - j) - hopf.hilbert_dim(alg, n - j - 1)
        if m:
            out[Fraction(j, n)] = m
    return out


def generator_counts(alg: Algebra | str, n: int) -> list[int]:
    """``b_1..b_n`` with ``prod_i (1 - x^i)^(-b_i) = sum_k dim H_k x^k`` up to degree n."""
    b = [0] * (n + 1)
    for k in range(1, n + 1):
        # coefficients of prod_{i<k} (1 - x^i)^(-b_i) up to x^k
        series = [1] + [0] * k
        for i in range(1, k):
            for _ in range(b[i]):
                for d in range(i, k + 1):
                    series[d] += series[d - i]
        b[k] = hopf.hilbert_dim(alg, k) - series[k]
    return b


def _assignments(parts: tuple[int, ...], blocks: tuple[int, ...]) -> int:
    """Number of maps from the parts to the blocks with block sums equal to ``blocks``."""
    counts: Counter = Counter({tuple(blocks): 1})
    for p in parts:
        nxt: Counter = Counter()
        for rem, c in counts.items():
            for i, cap in enumerate(rem):
                if cap >= p:
                    nxt[rem[:i] + (cap - p,) + rem[i + 1:]] += c
        counts = nxt
    return counts.get((0,) * len(blocks), 0)


def predicted_spectrum(alg: Algebra | str, spec: DescentOpSpec) -> dict[Fraction, int]:
    """Eigenvalues of ``T_P`` with algebraic multiplicities, from Hilbert series data alone.

    Eigenvectors are indexed by multisets of primitive generators; one with
    degrees ``lam`` has eigenvalue ``sum P / binom(n; D) * #{part-to-block maps with sums D}``.
    """
    n = spec.n
    b = generator_counts(alg, n)
    out: Counter = Counter()
    for lam in cb.partitions(n):
        beta = sum((t.prob / hopf.multinomial(t.D) * _assignments(lam, t.D) for t in spec.terms),
                   Fraction(0))
        mult = 1
        for i, m in Counter(lam).items():
            # multisets of size m drawn from b_i generators
            mult *= _binom(b[i] + m - 1, m)
        if mult:
            out[beta] += mult
    return dict(out)


def _binom(a: int, k: int) -> int:
    from math import comb
    return comb(a, k) if a >= 0 else 0


def _enc_spectrum(spec: Mapping[Fraction, int]) -> dict[str, int]:
    return {frac_str(v): m for v, m in sorted(spec.items(), reverse=True)}


def spectrum_certificate(k: Matrix, alg: Algebra | str, n: int,
                         spec: DescentOpSpec | None = None, with_min_poly: bool = True) -> dict:
    """Certify the characteristic polynomial of ``k`` against the predicted spectrum.

    With ``spec=None`` the down-up prediction ``{j/n: dim H_{n-j} - dim H_{n-j-1}}``
    is used; otherwise the general descent-operator prediction.
    """
    predicted = down_up_multiplicities(alg, n) if spec is None else predicted_spectrum(alg, spec)
    cp = char_poly(k)
    ok = cp == Poly.from_roots(predicted)
    observed = cp.rational_roots()
    extra: dict = {"predicted": _enc_spectrum(predicted), "observed": _enc_spectrum(observed),
                   "trace": frac_str(k.trace())}
    if with_min_poly:
        mp = min_poly(k, cp)
        extra["diagonalisable"] = mp.is_squarefree()
        extra["min_poly_degree"] = mp.degree
        if not extra["diagonalisable"]:
            extra["geometric"] = {frac_str(v): geometric_multiplicity(k, v) for v in observed}
    witness = None
    if not ok:
        witness = {"char_poly": str(cp), "expected": str(Poly.from_roots(predicted))}
    params = {"algebra": Algebra(alg).value}
    if spec is not None:
        params["spec"] = spec.to_json()
    return report("spectrum", n, params, ok, witness, **extra)


def fixed_point_comparison(n: int) -> dict:
    """Informational: bottom-to-random multiplicities with and without standardisation.

    Without standardisation the multiplicity of ``j/n`` is compared with the number of
    permutations having ``j`` fixed points; with standardisation, with the number fixing
    ``1..j`` but not ``j+1``.  Nothing here is certified.
    """
    fixed = Counter(sum(1 for i, v in enumerate(p, 1) if i == v) for p in cb.permutations(n))
    prefix = Counter(next((j for j in range(n) if p[j] != j + 1), n) for p in cb.permutations(n))
    shuffle = char_poly(bottom_r_shuffle_matrix(n, 1)).rational_roots()
    std = char_poly(named_chain("b2r-std", n)).rational_roots()
    return {
        "check": "fixed-points", "n": n, "params": {}, "verdict": "info", "witness": None,
        "shuffle_multiplicities": _enc_spectrum(shuffle),
        "fixed_point_counts": {frac_str(Fraction(j, n)): c for j, c in sorted(fixed.items(), reverse=True)},
        "std_multiplicities": _enc_spectrum(std),
        "prefix_fixed_counts": {frac_str(Fraction(j, n)): c for j, c in sorted(prefix.items(), reverse=True)},
    }


def random_spec(n: int, rng: random.Random, max_terms: int = 3, twist: bool = True) -> DescentOpSpec:
    """Random descent operator spec: weak compositions, tensorand orders and rational weights."""
    k = rng.randint(1, max_terms)
    terms = []
    weights = [rng.randint(1, 6) for _ in range(k)]
    total = sum(weights)
    for w in weights:
        a = rng.randint(1, min(n, 4) + 1)
        cuts = sorted(rng.randint(0, n) for _ in range(a - 1))
        pts = [0, *cuts, n]
        D = tuple(pts[i + 1] - pts[i] for i in range(a))
        sigma = list(range(1, a + 1))
        if twist:
            rng.shuffle(sigma)
        terms.append((D, sigma, Fraction(w, total)))
    return DescentOpSpec.build(n, terms)


def diagonalisability_probe(n: int, trials: int = 20, seed: int = 0,
                            alg: Algebra | str = Algebra.FQSYM) -> dict:
    """Search seeded random specs for a non-diagonalisable Doob chain; asserts nothing."""
    rng = random.Random(seed)
    found = []
    for _ in range(trials):
        spec = random_spec(n, rng)
        k = ChainSpec(alg, spec).matrix()
        if not min_poly(k).is_squarefree():
            found.append(spec.to_json())
    return {"check": "diagonalisability-probe", "n": n,
            "params": {"trials": trials, "seed": seed, "algebra": Algebra(alg).value},
            "verdict": "info", "witness": found or None, "non_diagonalisable": len(found)}


# ---------------------------------------------------------------------------
# operator identities and multistep comparison


def lemma53_identity_check(n: int, r: int) -> dict:
    """``[(m D_{n-1,1})(m D_{n-r,1^r})]^T = r [m D_{n-r,1^r}]^T + [m D_{n-r-1,1^{r+1}}]^T`` exactly.

    Un-normalised operators on FQSym_n; a zero first part contributes the unit.
    """
    if not 1 <= r <= n - 1:
        raise InvalidInputError(f"need 1 <= r <= n-1, got r={r}, n={n}")
    a = hopf.operator_matrix(n, (n - 1, 1))
    b_r = hopf.operator_matrix(n, (n - r,) + (1,) * r)
    b_next = hopf.operator_matrix(n, (n - r - 1,) + (1,) * (r + 1))
    lhs = mat_mul(b_r, a)
    rhs = b_r.scale(r) + b_next
    ok = lhs == rhs
    witness = None
    if not ok:
        diff = lhs - rhs
        i = next(i for i, rw in enumerate(diff.rows) if rw)
        witness = {"row": cb.format_perm(lhs.basis[i])}
    return report("insertion-identity", n, {"r": r}, ok, witness)


# descriptive alias
insertion_identity_check = lemma53_identity_check


def _distribution_rows(k: Matrix, start: Hashable, t: int) -> list[dict]:
    rows = [{start: Fraction(1)}]
    for _ in range(t):
        rows.append(dict(k.vecmul(rows[-1])))
    return rows


def _via(k: Matrix, before: Mapping, y: Hashable) -> list:
    j = k.index[y]
    return [z for z in k.basis if before.get(z) and k.rows[k.index[z]].get(j)]


def multistep_identity_compare(n: int, t: int, r: int = 1, target: tuple | None = None) -> dict:
    """Compare ``t``-step laws from the identity of bottom-r with and without standardisation.

    The witness names a state ``y`` reached with equal probability by both chains
    whose possible predecessors at time ``t - 1`` differ.
    """
    start = tuple(range(1, n + 1))
    std = named_chain("bottom-r-std", n, r=r)
    shuf = bottom_r_shuffle_matrix(n, r)
    rs = _distribution_rows(std, start, t)
    ru = _distribution_rows(shuf, start, t)
    a, b = rs[-1], ru[-1]
    ok = all(a.get(x, 0) == b.get(x, 0) for x in std.basis)
    witness = None
    if t >= 1:
        candidates = [target] if target is not None else std.basis
        for y in candidates:
            vs, vu = _via(std, rs[-2], y), _via(shuf, ru[-2], y)
            if (vs != vu and a.get(y) and b.get(y)) or target is not None:
                witness = {"target": cb.format_perm(y),
                           "std_prob": frac_str(a.get(y, 0)), "shuffle_prob": frac_str(b.get(y, 0)),
                           "std_via": [cb.format_perm(z) for z in vs],
                           "shuffle_via": [cb.format_perm(z) for z in vu]}
                break
    if not ok:
        y = next(x for x in std.basis if a.get(x, 0) != b.get(x, 0))
        witness = {"mismatch": cb.format_perm(y), "std_prob": frac_str(a.get(y, 0)),
                   "shuffle_prob": frac_str(b.get(y, 0))}
    return report("multistep", n, {"t": t, "r": r}, ok, witness,
                  support=len([x for x in a if a[x]]))
