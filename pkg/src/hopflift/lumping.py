"""Fibre maps and exact lumping certificates.

Two checks are provided:

* :func:`dynkin_strong_check` -- Dynkin's criterion: fibre-sum rows agree
  for all states in a fibre.  Necessary and sufficient for strong lumping.
* :func:`weak_lumping_check` -- the sufficient condition for weak lumping
  with fibre distributions proportional to the rescaling function ``eta``.

Both return a :class:`LumpingCertificate` carrying either the lumped matrix
or a concrete witness of failure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Mapping, Sequence

from . import combinat as cb
from .exactalg import Matrix, ShapeError, frac_str


class LumpingError(ValueError):
    """A lumping that was required to hold does not."""


@dataclass
class FiberMap:
    """Surjection ``theta`` from a source basis onto ordered target labels."""

    name: str
    source: list
    targets: list
    assign: dict
    source_kind: str | None = None
    target_kind: str | None = None

    def __post_init__(self):
        missing = [x for x in self.source if x not in self.assign]
        if missing:
            raise ValueError(f"fibre map {self.name!r} is not total: {missing[:3]}")
        image = set(self.assign[x] for x in self.source)
        if image != set(self.targets):
            raise ValueError(f"fibre map {self.name!r} is not onto its target labels")

    def __call__(self, x: Hashable) -> Hashable:
        return self.assign[x]

    def fibers(self) -> dict:
        out: dict = {t: [] for t in self.targets}
        for x in self.source:
            out[self.assign[x]].append(x)
        return out


def fiber_map(name: str, source: Sequence, fn: Callable[[Any], Hashable],
              targets: Sequence | None = None, source_kind: str | None = None,
              target_kind: str | None = None) -> FiberMap:
    assign = {x: fn(x) for x in source}
    if targets is None:
        targets = list(dict.fromkeys(assign[x] for x in source))
    return FiberMap(name, list(source), list(targets), assign, source_kind, target_kind)


def identity_map(basis: Sequence, kind: str | None = None) -> FiberMap:
    return fiber_map("identity", basis, lambda x: x, basis, kind, kind)


def sh_map(n: int) -> FiberMap:
    return fiber_map("sh", cb.syt(n), cb.shape, cb.partitions(n), "tableau", "partition")


def rsk_p_map(n: int) -> FiberMap:
    return fiber_map("rsk-p", cb.permutations(n), cb.rsk_insertion_tableau, cb.syt(n),
                     "perm", "tableau")


def sh_rsk_map(n: int) -> FiberMap:
    return fiber_map("sh∘rsk", cb.permutations(n),
                     lambda p: cb.shape(cb.rsk_insertion_tableau(p)), cb.partitions(n),
                     "perm", "partition")


def des_map(n: int) -> FiberMap:
    perms = cb.permutations(n)
    comps = sorted({cb.descent_composition(p) for p in perms}, reverse=True)
    return fiber_map("des", perms, cb.descent_composition, comps, "perm", "composition")


def named_fiber_map(name: str, n: int) -> FiberMap:
    table = {"sh": sh_map, "rsk-p": rsk_p_map, "sh∘rsk": sh_rsk_map, "sh-rsk": sh_rsk_map,
             "des": des_map}
    if name not in table:
        raise ValueError(f"unknown fibre map {name!r}")
    return table[name](n)


@dataclass
class LumpingCertificate:
    kind: str
    verdict: bool
    lumped: Matrix | None = None
    witness: dict | None = None
    fiber_sizes: dict = field(default_factory=dict)
    initial_distributions: str | None = None

    def __post_init__(self):
        if (self.lumped is None) == (self.witness is None):
            raise ValueError("a certificate holds exactly one of lumped matrix / witness")

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self, theta: FiberMap | None = None) -> dict:
        """JSON-ready dict; labels are text-encoded when ``theta`` supplies their kinds."""
        from .exactalg import matrix_to_json

        src = theta.source_kind if theta is not None else None
        tgt = theta.target_kind if theta is not None else None

        def lab(x, kind):
            return cb.format_labels(kind, [x])[0] if kind else str(x)

        w = None
        if self.witness is not None:
            if self.kind == "strong":
                w = {"x1": lab(self.witness["x1"], src), "x2": lab(self.witness["x2"], src),
                     "target": lab(self.witness["target"], tgt),
                     "x1_sum": frac_str(self.witness["x1_sum"]),
                     "x2_sum": frac_str(self.witness["x2_sum"])}
            else:
                w = {"fiber": lab(self.witness["fiber"], tgt),
                     "residual": {lab(y, src): frac_str(v)
                                  for y, v in self.witness["residual"].items()}}
        return {
            "kind": self.kind,
            "verdict": "pass" if self.verdict else "fail",
            "fiber_sizes": {lab(k, tgt): v for k, v in self.fiber_sizes.items()},
            "lumped": matrix_to_json(self.lumped) if self.lumped is not None else None,
            "witness": w,
            "initial_distributions": self.initial_distributions,
        }


def _check_basis(k: Matrix, theta: FiberMap) -> None:
    if set(k.basis) != set(theta.source) or len(k.basis) != len(theta.source):
        raise ShapeError(f"fibre map {theta.name!r} is not defined on the matrix basis")


def _fiber_row_sums(k: Matrix, x: Hashable, theta: FiberMap) -> dict:
    sums: dict = {}
    for j, v in k.rows[k.index[x]].items():
        t = theta.assign[k.basis[j]]
        sums[t] = sums.get(t, 0) + v
    return {t: v for t, v in sums.items() if v}


def dynkin_strong_check(k: Matrix, theta: FiberMap) -> LumpingCertificate:
    """Dynkin's criterion for strong lumping of ``k`` via ``theta``."""
    _check_basis(k, theta)
    fibers = theta.fibers()
    lumped = Matrix(theta.targets, kind=theta.target_kind)
    for i, t in enumerate(theta.targets):
        members = fibers[t]
        ref = _fiber_row_sums(k, members[0], theta)
        for x in members[1:]:
            sums = _fiber_row_sums(k, x, theta)
            if sums != ref:
                ybar = next(y for y in theta.targets if sums.get(y, 0) != ref.get(y, 0))
                return LumpingCertificate(
                    "strong", False,
                    witness={"x1": members[0], "x2": x, "target": ybar,
                             "x1_sum": ref.get(ybar, Fraction(0)), "x2_sum": sums.get(ybar, Fraction(0))},
                    fiber_sizes={t: len(v) for t, v in fibers.items()})
        lumped.rows[i] = {lumped.index[y]: Fraction(v) for y, v in ref.items()}
    return LumpingCertificate("strong", True, lumped=lumped,
                              fiber_sizes={t: len(v) for t, v in fibers.items()},
                              initial_distributions="any")


def weak_lumping_check(k_big: Matrix, k_small: Matrix, theta: FiberMap,
                       eta_big: Mapping[Hashable, Any] | None = None) -> LumpingCertificate:
    """Check ``pi^i K_big = sum_j K_small(i, j) pi^j`` for every fibre ``i``.

    ``pi^i`` is ``eta`` restricted to fibre ``i`` and normalised; ``eta``
    defaults to the constant function 1.
    """
    _check_basis(k_big, theta)
    if set(k_small.basis) != set(theta.targets):
        raise ShapeError("small matrix is not indexed by the fibre map targets")
    fibers = theta.fibers()
    eta = {x: Fraction(eta_big[x]) if eta_big is not None else Fraction(1) for x in theta.source}
    fiber_eta = {t: sum((eta[x] for x in xs), Fraction(0)) for t, xs in fibers.items()}
    sizes = {t: len(v) for t, v in fibers.items()}
    for t in theta.targets:
        lhs: dict = {}
        for x in fibers[t]:
            w = eta[x] / fiber_eta[t]
            for j, v in k_big.rows[k_big.index[x]].items():
                y = k_big.basis[j]
                lhs[y] = lhs.get(y, 0) + w * v
        small_row = k_small.rows[k_small.index[t]]
        rhs: dict = {}
        for j, v in small_row.items():
            s = k_small.basis[j]
            for y in fibers[s]:
                rhs[y] = v * eta[y] / fiber_eta[s]
        residual = {y: lhs.get(y, 0) - rhs.get(y, 0) for y in set(lhs) | set(rhs)}
        residual = {y: Fraction(v) for y, v in residual.items() if v}
        if residual:
            ordered = {y: residual[y] for y in theta.source if y in residual}
            return LumpingCertificate("weak", False, witness={"fiber": t, "residual": ordered},
                                      fiber_sizes=sizes)
    return LumpingCertificate(
        "weak", True, lumped=k_small, fiber_sizes=sizes,
        initial_distributions="P{X0=x} = alpha_theta(x) * eta(x) / eta(fibre of x), any alpha")


def lift_initial_distribution(xbar0: Mapping, n: int) -> dict:
    """Spread mass on partitions uniformly over RSK fibres: ``X0(s) = Xbar0(lam) / dim(lam)^2``."""
    out = {}
    for p in cb.permutations(n):
        lam = cb.shape(cb.rsk_insertion_tableau(p))
        mass = Fraction(xbar0.get(lam, 0))
        if mass:
            out[p] = mass / cb.dim(lam) ** 2
    return out


def valid_initial_check(x0: Mapping, theta: FiberMap, eta: Mapping | None = None) -> bool:
    """True when ``X0(x) / eta(x)`` is constant on every fibre of ``theta``."""
    for xs in theta.fibers().values():
        ratios = {Fraction(x0.get(x, 0)) / (Fraction(eta[x]) if eta is not None else 1) for x in xs}
        if len(ratios) > 1:
            return False
    return True
