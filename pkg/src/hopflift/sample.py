"""Seedable Monte Carlo samplers for the chains, plus empirical comparisons.

Samplers work on batches held in numpy arrays:

* permutations as ``(N, n)`` integer arrays (one-line notation, top card first);
* partitions as ``(N, n)`` arrays of row lengths padded with zeros;
* tableaux as ``(N, n, n)`` arrays padded with zeros.

A single step of a single chain is a batch of one.  Random streams are
numpy ``Philox`` generators keyed by ``SeedSequence(seed, spawn_key=(stream,))``,
so trials split into fixed chunks reproduce exactly regardless of how many
worker threads run them.
"""
from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Hashable, Iterable, Mapping, Sequence, TextIO

import numpy as np

from . import combinat as cb
from .chains import CHAIN_NAMES, chain_algebra, chain_spec
from .exactalg import Matrix
from .hopf import Algebra, DescentOpSpec
from .lumping import FiberMap, valid_initial_check

__all__ = [
    "EmpiricalDistribution",
    "complementary_hook_walk_add",
    "complementary_hook_walk_law",
    "empirical_lumping_test",
    "hook_walk_law",
    "hook_walk_remove",
    "one_step_counts",
    "rng_stream",
    "simulate",
    "step",
    "step_batch",
    "tv_distance",
]

DEFAULT_CHUNK = 200_000


def rng_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for ``(seed, stream)``; integer draws are unbiased."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


# ---------------------------------------------------------------------------
# hook walks on padded row-length arrays


def _column_lengths(rows: np.ndarray, width: int) -> np.ndarray:
    return (rows[:, :, None] > np.arange(width)[None, None, :]).sum(axis=1)


def _hook_walk_batch(rows: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """0-based (row, col) of a removable box, chosen with probability ``dim(lam - box) / dim(lam)``."""
    n_batch, height = rows.shape
    width = int(rows[:, 0].max())
    cols = _column_lengths(rows, width)
    size = rows.sum(axis=1)
    cum = np.cumsum(rows, axis=1)
    k = rng.integers(0, size)
    r = (k[:, None] >= cum).sum(axis=1)
    prev = np.where(r > 0, np.take_along_axis(cum, np.maximum(r - 1, 0)[:, None], 1)[:, 0], 0)
    c = k - prev
    idx = np.arange(n_batch)
    while True:
        arm = rows[idx, r] - c - 1
        leg = cols[idx, c] - r - 1
        hook = arm + leg
        active = hook > 0
        if not active.any():
            return r, c
        u = np.zeros(n_batch, dtype=np.int64)
        u[active] = rng.integers(0, hook[active])
        right = active & (u < arm)
        down = active & ~right
        c = np.where(right, c + 1 + u, c)
        r = np.where(down, r + 1 + (u - arm), r)


def _cohook_walk_batch(rows: np.ndarray, grid: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """0-based addable box via the complementary hook walk from cell (grid, grid)."""
    n_batch, height = rows.shape
    if height < grid:
        rows = np.concatenate([rows, np.zeros((n_batch, grid - height), dtype=rows.dtype)], axis=1)
    cols = _column_lengths(rows, grid)
    r = np.full(n_batch, grid - 1)
    c = np.full(n_batch, grid - 1)
    idx = np.arange(n_batch)
    while True:
        arm = c - rows[idx, r]
        leg = r - cols[idx, c]
        hook = arm + leg
        active = hook > 0
        if not active.any():
            return r, c
        u = np.zeros(n_batch, dtype=np.int64)
        u[active] = rng.integers(0, hook[active])
        left = active & (u < arm)
        up = active & ~left
        c = np.where(left, rows[idx, r] + u, c)
        r = np.where(up, cols[idx, c] + (u - arm), r)


def _rows_array(lams: Sequence[Sequence[int]], height: int) -> np.ndarray:
    out = np.zeros((len(lams), max(height, 1)), dtype=np.int64)
    for i, lam in enumerate(lams):
        out[i, : len(lam)] = lam
    return out


def hook_walk_remove(lam: Sequence[int], rng: np.random.Generator, trials: int | None = None):
    """Removable box of ``lam`` (1-based ``(row, col)``) by the hook walk.

    With ``trials`` set, returns a list of that many independent boxes.
    """
    lam = cb.as_partition(lam)
    if not lam:
        raise cb.InvalidInputError("cannot remove a box from the empty partition")
    rows = _rows_array([lam] * (trials or 1), len(lam))
    r, c = _hook_walk_batch(rows, rng)
    boxes = [(int(a) + 1, int(b) + 1) for a, b in zip(r, c)]
    return boxes if trials is not None else boxes[0]


def complementary_hook_walk_add(lam: Sequence[int], n: int, rng: np.random.Generator,
                                trials: int | None = None):
    """Addable box of ``lam`` (1-based) by the complementary hook walk from cell ``(n, n)``."""
    lam = cb.as_partition(lam)
    if sum(lam) >= n:
        raise cb.InvalidInputError(f"partition of {sum(lam)} does not fit below cell ({n}, {n})")
    rows = _rows_array([lam] * (trials or 1), n)
    r, c = _cohook_walk_batch(rows, n, rng)
    boxes = [(int(a) + 1, int(b) + 1) for a, b in zip(r, c)]
    return boxes if trials is not None else boxes[0]


def hook_walk_law(lam: Sequence[int]) -> dict:
    """Exact law of the hook walk's final box, by recursion over the walk."""
    lam = cb.as_partition(lam)
    cols = cb.conjugate(lam)

    @lru_cache(maxsize=None)
    def law(r: int, c: int) -> tuple:
        arm, leg = lam[r] - c - 1, cols[c] - r - 1
        if arm + leg == 0:
            return (((r + 1, c + 1), Fraction(1)),)
        acc: Counter = Counter()
        nxt = [(r, c2) for c2 in range(c + 1, lam[r])] + [(r2, c) for r2 in range(r + 1, cols[c])]
        for cell in nxt:
            for box, p in law(*cell):
                acc[box] += p / len(nxt)
        return tuple(acc.items())

    total: Counter = Counter()
    size = sum(lam)
    for r, length in enumerate(lam):
        for c in range(length):
            for box, p in law(r, c):
                total[box] += p / size
    return dict(total)


def complementary_hook_walk_law(lam: Sequence[int], n: int) -> dict:
    """Exact law of the complementary hook walk's final box from cell ``(n, n)``."""
    lam = cb.as_partition(lam)
    rows = list(lam) + [0] * n
    cols = [sum(1 for x in lam if x > c) for c in range(n)]

    @lru_cache(maxsize=None)
    def law(r: int, c: int) -> tuple:
        nxt = [(r, c2) for c2 in range(rows[r], c)] + [(r2, c) for r2 in range(cols[c], r)]
        if not nxt:
            return (((r + 1, c + 1), Fraction(1)),)
        acc: Counter = Counter()
        for cell in nxt:
            for box, p in law(*cell):
                acc[box] += p / len(nxt)
        return tuple(acc.items())

    return dict(law(n - 1, n - 1))


# ---------------------------------------------------------------------------
# one step on batches


def _interleave(words: list[np.ndarray], rng: np.random.Generator) -> np.ndarray:
    """Uniform interleaving, row by row, of the given ``(N, d_i)`` words."""
    sizes = [w.shape[1] for w in words]
    n_batch = words[0].shape[0]
    labels = np.repeat(np.arange(len(words)), sizes)
    labels = rng.permuted(np.broadcast_to(labels, (n_batch, len(labels))), axis=1)
    order = np.argsort(labels, axis=1, kind="stable")
    out = np.empty((n_batch, sum(sizes)), dtype=words[0].dtype)
    np.put_along_axis(out, order, np.concatenate(words, axis=1), axis=1)
    return out


def _standardised(block: np.ndarray) -> np.ndarray:
    return np.argsort(np.argsort(block, axis=1, kind="stable"), axis=1, kind="stable")


def _p_shuffle_std(states: np.ndarray, spec: DescentOpSpec, rng: np.random.Generator) -> np.ndarray:
    """P-shuffle with standardisation: split by D, standardise blocks, interleave uniformly."""
    n_batch, n = states.shape
    out = np.empty_like(states)
    probs = np.array([float(t.prob) for t in spec.terms])
    choice = rng.choice(len(spec.terms), size=n_batch, p=probs / probs.sum()) if len(probs) > 1 \
        else np.zeros(n_batch, dtype=np.int64)
    for ti, term in enumerate(spec.terms):
        sel = np.nonzero(choice == ti)[0]
        if not len(sel):
            continue
        sub = states[sel]
        cuts = np.cumsum((0,) + term.D)
        blocks = [sub[:, cuts[i]:cuts[i + 1]] for i in range(len(term.D))]
        words, offset = [], 0
        for s in term.sigma:
            b = blocks[s - 1]
            if b.shape[1]:
                words.append(_standardised(b).astype(states.dtype) + offset + 1)
                offset += b.shape[1]
        out[sel] = _interleave(words, rng)
    return out


def _bottom_r_shuffle(states: np.ndarray, r: int, rng: np.random.Generator) -> np.ndarray:
    """Remove the bottom r cards, shuffle them, insert each at a uniform position."""
    n_batch, n = states.shape
    deck = states[:, : n - r]
    cards = rng.permuted(states[:, n - r:], axis=1)
    idx = np.arange(n_batch)
    for k in range(r):
        length = deck.shape[1]
        pos = rng.integers(0, length + 1, size=n_batch)
        slots = np.arange(length + 1)[None, :]
        src = np.clip(slots - (slots > pos[:, None]), 0, max(length - 1, 0))
        new = np.take_along_axis(deck, src, axis=1) if length else np.zeros((n_batch, 1), deck.dtype)
        new[idx, pos] = cards[:, k]
        deck = new
    return deck


def _partition_step(rows: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = int(rows[0].sum())
    idx = np.arange(len(rows))
    r, c = _hook_walk_batch(rows, rng)
    rows = rows.copy()
    rows[idx, r] -= 1
    r, c = _cohook_walk_batch(rows, n, rng)
    rows[idx, r] += 1
    return rows


def _tableau_step(tabs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Hook-walk box, unbump it, standardise, add a box holding n by the complementary walk."""
    n_batch, n, _ = tabs.shape
    tabs = tabs.copy()
    rows = (tabs > 0).sum(axis=2)
    idx = np.arange(n_batch)
    r, c = _hook_walk_batch(rows, rng)
    b = tabs[idx, r, c].copy()
    tabs[idx, r, c] = 0
    for i in range(n - 2, -1, -1):
        act = r > i
        if not act.any():
            continue
        row = tabs[act, i, :]
        bb = b[act]
        j = ((row > 0) & (row < bb[:, None])).sum(axis=1) - 1
        sub = np.nonzero(act)[0]
        ejected = row[np.arange(len(sub)), j]
        tabs[sub, i, j] = bb
        b[sub] = ejected
    tabs = np.where(tabs > b[:, None, None], tabs - 1, tabs)
    rows = (tabs > 0).sum(axis=2)
    r, c = _cohook_walk_batch(rows, n, rng)
    tabs[idx, r, c] = n
    return tabs


def step_batch(chain: str, states: np.ndarray, rng: np.random.Generator, r: int = 1,
               q: Fraction | str = Fraction(1, 2), spec: DescentOpSpec | None = None) -> np.ndarray:
    """One step of ``chain`` applied independently to every state in the batch.

    ``chain="p-shuffle-std"`` runs the P-shuffle-with-standardisation for ``spec``.
    """
    if chain == "p-shuffle-std":
        if spec is None:
            raise cb.InvalidInputError("p-shuffle-std needs a DescentOpSpec")
        return _p_shuffle_std(states, spec, rng)
    chain_algebra(chain)
    if chain == "partition-downup":
        return _partition_step(states, rng)
    if chain == "tableau-downup":
        return _tableau_step(states, rng)
    n = states.shape[1]
    if chain in ("b2r-shuffle", "bottom-r-shuffle"):
        return _bottom_r_shuffle(states, 1 if chain == "b2r-shuffle" else r, rng)
    return _p_shuffle_std(states, chain_spec(chain, n, r, q).operator, rng)


# ---------------------------------------------------------------------------
# conversion between labels and arrays


def state_kind(chain: str) -> str:
    if chain == "p-shuffle-std":
        return "perm"
    return chain_algebra(chain).label_kind


def to_array(kind: str, states: Sequence, n: int) -> np.ndarray:
    if kind == "perm":
        arr = np.array([list(s) for s in states], dtype=np.int64).reshape(len(states), n)
        return arr
    if kind == "partition":
        return _rows_array(states, n)
    out = np.zeros((len(states), n, n), dtype=np.int64)
    for i, t in enumerate(states):
        for a, row in enumerate(t):
            out[i, a, : len(row)] = row
    return out


def from_array(kind: str, arr: np.ndarray) -> list:
    if kind == "perm":
        return [tuple(int(x) for x in row) for row in arr]
    if kind == "partition":
        return [tuple(int(x) for x in row if x) for row in arr]
    return [tuple(tuple(int(x) for x in row if x) for row in t if row[0]) for t in arr]


def _check_state(kind: str, x, n: int):
    if kind == "perm":
        x = cb.as_perm(x)
        size = len(x)
    elif kind == "partition":
        x = cb.as_partition(x)
        size = sum(x)
    else:
        x = cb.as_tableau(x)
        size = sum(cb.shape(x))
    if size != n:
        raise cb.InvalidInputError(f"state {x!r} has degree {size}, expected {n}")
    return x


def _degree(kind: str, x) -> int:
    if kind == "perm":
        return len(x)
    if kind == "partition":
        return sum(x)
    return sum(len(r) for r in x)


def step(chain: str, state, rng: np.random.Generator, **kwargs):
    """One step from a single state (a batch of one)."""
    kind = state_kind(chain)
    n = _degree(kind, state)
    state = _check_state(kind, state, n)
    return from_array(kind, step_batch(chain, to_array(kind, [state], n), rng, **kwargs))[0]


# ---------------------------------------------------------------------------
# empirical distributions


@dataclass
class EmpiricalDistribution:
    counts: Counter
    total: int
    kind: str | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if sum(self.counts.values()) != self.total:
            raise ValueError("counts do not sum to the number of trials")

    def freq(self) -> dict:
        return {x: c / self.total for x, c in self.counts.items()}

    def merge(self, other: "EmpiricalDistribution") -> "EmpiricalDistribution":
        return EmpiricalDistribution(self.counts + other.counts, self.total + other.total,
                                     self.kind, dict(self.meta))

    def to_json(self) -> dict:
        fmt = (lambda x: cb.format_labels(self.kind, [x])[0]) if self.kind else str
        ordered = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return {"total": self.total, "counts": {fmt(x): c for x, c in ordered}, **self.meta}


def tv_distance(p: Mapping, q: Mapping):
    """Total variation distance; exact when both inputs hold Fractions."""
    keys = set(p) | set(q)
    return sum((abs(p.get(k, 0) - q.get(k, 0)) for k in keys), 0) / 2


def _initial_states(kind: str, start, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(start, Mapping):
        labels = list(start)
        w = np.array([float(start[x]) for x in labels])
        pick = rng.choice(len(labels), size=size, p=w / w.sum())
        base = to_array(kind, [_check_state(kind, x, n) for x in labels], n)
        return base[pick]
    arr = to_array(kind, [_check_state(kind, start, n)], n)
    return np.repeat(arr, size, axis=0)


def _run_chunk(chain: str, start, n: int, t: int, size: int, seed: int, stream: int,
               kwargs: dict, keep_path: bool):
    rng = rng_stream(seed, stream)
    kind = state_kind(chain)
    states = _initial_states(kind, start, n, size, rng)
    path = [from_array(kind, states[:1])[0]] if keep_path else None
    for _ in range(t):
        states = step_batch(chain, states, rng, **kwargs)
        if keep_path:
            path.append(from_array(kind, states[:1])[0])
    return _count_rows(kind, states), path


def _count_rows(kind: str, states: np.ndarray) -> Counter:
    flat = states.reshape(len(states), -1)
    uniq, counts = np.unique(flat, axis=0, return_counts=True)
    if kind == "tableau":
        uniq = uniq.reshape((-1,) + states.shape[1:])
    return Counter(dict(zip(from_array(kind, uniq), (int(c) for c in counts))))


def simulate(chain: str, start, t: int, trials: int, seed: int, n: int | None = None,
             threads: int = 1, chunk: int = DEFAULT_CHUNK, log: TextIO | None = None,
             **kwargs) -> EmpiricalDistribution:
    """Empirical law of ``X_t`` over ``trials`` independent runs.

    ``start`` is a state or a ``{state: mass}`` distribution.  Trials are cut
    into fixed chunks; chunk ``i`` uses stream ``i``, so the result depends
    only on ``(seed, chunk)``, never on ``threads``.  With ``log`` given, the
    first trial's trajectory is written one state per line.
    """
    if t < 0 or trials < 1:
        raise cb.InvalidInputError("need t >= 0 and trials >= 1")
    kind = state_kind(chain)
    if n is None:
        first = next(iter(start)) if isinstance(start, Mapping) else start
        n = _degree(kind, first)
    sizes = [min(chunk, trials - i) for i in range(0, trials, chunk)]
    jobs = [(chain, start, n, t, s, seed, i, kwargs, log is not None and i == 0)
            for i, s in enumerate(sizes)]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda a: _run_chunk(*a), jobs))
    else:
        results = [_run_chunk(*a) for a in jobs]
    counts: Counter = Counter()
    for c, _ in results:
        counts.update(c)
    if log is not None:
        for x in results[0][1]:
            log.write(cb.format_labels(kind, [x])[0] + "\n")
    return EmpiricalDistribution(counts, trials, kind,
                                 {"chain": chain, "n": n, "t": t, "seed": seed, "chunks": len(sizes)})


def _encode(states: np.ndarray, n: int) -> np.ndarray:
    flat = states.reshape(len(states), -1).astype(np.int64)
    weights = (n + 1) ** np.arange(flat.shape[1] - 1, -1, -1, dtype=np.int64)
    return flat @ weights


def one_step_counts(chain: str, n: int, trials_per_state: int, seed: int,
                    chunk: int = DEFAULT_CHUNK, **kwargs) -> dict:
    """``{start: Counter(next state)}`` from ``trials_per_state`` one-step draws per state.

    All start states advance together; chunk ``i`` uses stream ``i``.
    """
    from .hopf import basis
    kind = state_kind(chain)
    alg = Algebra.FQSYM if chain == "p-shuffle-std" else chain_algebra(chain)
    starts = basis(alg, n)
    base = to_array(kind, starts, n)
    targets = to_array(kind, starts, n)
    lookup = {int(c): x for c, x in zip(_encode(targets, n), starts)}
    span = int((n + 1) ** targets.reshape(len(starts), -1).shape[1])
    per_chunk = max(1, chunk // len(starts))
    done, stream = 0, 0
    totals: Counter = Counter()
    while done < trials_per_state:
        size = min(per_chunk, trials_per_state - done)
        rng = rng_stream(seed, stream)
        nxt = step_batch(chain, np.repeat(base, size, axis=0), rng, **kwargs)
        codes = np.repeat(np.arange(len(starts), dtype=np.int64), size) * span + _encode(nxt, n)
        uniq, cnt = np.unique(codes, return_counts=True)
        totals.update(dict(zip(uniq.tolist(), cnt.tolist())))
        done += size
        stream += 1
    out: dict = {x: Counter() for x in starts}
    for code, c in totals.items():
        out[starts[code // span]][lookup[code % span]] += c
    return out


def empirical_lumping_test(chain: str, theta: FiberMap, small: Matrix, start, t: int,
                           trials: int, seed: int, tol: float = 0.02, min_visits: int = 2000,
                           eta: Mapping | None = None, **kwargs) -> dict:
    """Push sampled trajectories through ``theta`` and compare lumped one-step frequencies.

    Transitions are pooled over times ``0..t-1``; source states visited fewer
    than ``min_visits`` times are reported but not judged.
    """
    kind = state_kind(chain)
    x0 = dict(start) if isinstance(start, Mapping) else {_check_state(kind, start, _degree(kind, start)): 1}
    n = _degree(kind, next(iter(x0)))
    valid = valid_initial_check({k: Fraction(v) for k, v in x0.items()}, theta, eta)
    rng = rng_stream(seed, 0)
    states = _initial_states(kind, x0, n, trials, rng)
    code = {x: i for i, x in enumerate(theta.targets)}
    m = len(code)
    transitions = np.zeros((m, m), dtype=np.int64)

    def lump(arr):
        return np.array([code[theta(x)] for x in from_array(kind, arr)])

    before = lump(states)
    for _ in range(t):
        states = step_batch(chain, states, rng, **kwargs)
        after = lump(states)
        np.add.at(transitions, (before, after), 1)
        before = after
    worst, judged = 0.0, 0
    rows = {}
    for i, x in enumerate(theta.targets):
        visits = int(transitions[i].sum())
        if not visits:
            continue
        exact = small.row(x)
        dev = max(abs(transitions[i, j] / visits - float(exact.get(y, 0)))
                  for j, y in enumerate(theta.targets))
        rows[cb.format_labels(theta.target_kind, [x])[0] if theta.target_kind else str(x)] = \
            {"visits": visits, "max_deviation": dev}
        if visits >= min_visits:
            judged += 1
            worst = max(worst, dev)
    ok = worst <= tol and judged > 0
    return {"check": "empirical-lumping", "n": n,
            "params": {"chain": chain, "theta": theta.name, "t": t, "trials": trials,
                       "seed": seed, "tol": tol},
            "verdict": "pass" if ok else "fail", "witness": None if ok else {"max_deviation": worst},
            "valid_initial": valid, "warning": None if valid else "initial distribution not valid for weak lumping",
            "max_deviation": worst, "rows": rows}
