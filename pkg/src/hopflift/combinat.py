"""Partitions, permutations, standard Young tableaux and the maps between them.

All objects are plain tuples so they hash cheaply and can index matrices:

* a partition is a weakly decreasing tuple of positive ints, ``(5, 2, 2)``;
* a permutation (standard word) is a tuple holding each of ``1..n`` once;
* a tableau is a tuple of rows, ``((1, 2, 5), (3,), (4,))``;
* a box is a ``(row, column)`` pair, 1-based, English convention.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations as _itertools_permutations
from math import factorial, prod
from typing import Iterable, Sequence

Partition = tuple[int, ...]
Perm = tuple[int, ...]
Word = tuple[int, ...]
Tableau = tuple[tuple[int, ...], ...]
Box = tuple[int, int]
Composition = tuple[int, ...]


class InvalidInputError(ValueError):
    """Raised when a combinatorial object violates its defining invariants."""


# ---------------------------------------------------------------------------
# validation


def as_partition(parts: Iterable[int]) -> Partition:
    lam = tuple(int(p) for p in parts)
    if any(p <= 0 for p in lam):
        raise InvalidInputError(f"partition parts must be positive: {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise InvalidInputError(f"partition must be weakly decreasing: {lam}")
    return lam


def as_perm(word: Iterable[int]) -> Perm:
    p = tuple(int(x) for x in word)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise InvalidInputError(f"not a permutation of 1..{len(p)}: {p}")
    return p


def as_tableau(rows: Iterable[Iterable[int]], standard: bool = True) -> Tableau:
    """Validate a tableau with strictly increasing rows and columns.

    With ``standard=True`` the fillings must be exactly ``1..n``; otherwise
    they only need to be distinct positive integers.
    """
    t = tuple(tuple(int(x) for x in row) for row in rows)
    if any(len(row) == 0 for row in t):
        raise InvalidInputError("tableau rows must be non-empty")
    as_partition(len(row) for row in t)
    for row in t:
        if any(row[j] >= row[j + 1] for j in range(len(row) - 1)):
            raise InvalidInputError(f"rows must strictly increase: {t}")
    for i in range(len(t) - 1):
        for j in range(len(t[i + 1])):
            if t[i][j] >= t[i + 1][j]:
                raise InvalidInputError(f"columns must strictly increase: {t}")
    entries = [x for row in t for x in row]
    if len(set(entries)) != len(entries):
        raise InvalidInputError(f"duplicate fillings: {t}")
    if standard and sorted(entries) != list(range(1, len(entries) + 1)):
        raise InvalidInputError(f"tableau is not standard: {t}")
    if not standard and any(x <= 0 for x in entries):
        raise InvalidInputError(f"fillings must be positive: {t}")
    return t


def as_weak_composition(parts: Iterable[int], n: int | None = None) -> Composition:
    d = tuple(int(x) for x in parts)
    if any(x < 0 for x in d):
        raise InvalidInputError(f"weak composition parts must be >= 0: {d}")
    if n is not None and sum(d) != n:
        raise InvalidInputError(f"weak composition {d} does not sum to {n}")
    return d


# ---------------------------------------------------------------------------
# words


def standardise(word: Sequence[int]) -> Perm:
    """Replace the smallest letter by 1, the next smallest by 2, and so on."""
    if len(set(word)) != len(word):
        raise InvalidInputError(f"cannot standardise a word with repeated letters: {tuple(word)}")
    rank = {x: i + 1 for i, x in enumerate(sorted(word))}
    return tuple(rank[x] for x in word)


def shift(word: Sequence[int], k: int) -> Word:
    return tuple(x + k for x in word)


def descent_set(p: Sequence[int]) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(len(p) - 1) if p[i] > p[i + 1])


def composition_from_descents(descents: Iterable[int], n: int) -> Composition:
    cuts = [0, *sorted(descents), n]
    return tuple(cuts[i + 1] - cuts[i] for i in range(len(cuts) - 1)) if n else ()


def descent_composition(p: Sequence[int]) -> Composition:
    """Lengths of the maximal ascending runs of ``p``."""
    return composition_from_descents(descent_set(p), len(p))


def permutations(n: int) -> list[Perm]:
    """All permutations of ``1..n`` in lexicographic order."""
    return list(_itertools_permutations(range(1, n + 1)))


# ---------------------------------------------------------------------------
# partitions


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[Partition, ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        out.extend((first, *rest) for rest in _partitions(n - first, first))
    return tuple(out)


def partitions(n: int) -> list[Partition]:
    """Partitions of ``n`` in reverse-lexicographic order, ``(n)`` first."""
    return list(_partitions(n, n))


def conjugate(lam: Partition) -> Partition:
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0])) if lam else ()


def removable_boxes(lam: Partition) -> list[Box]:
    return [(i + 1, p) for i, p in enumerate(lam) if i + 1 == len(lam) or lam[i + 1] < p]


def addable_boxes(lam: Partition) -> list[Box]:
    boxes = [(i + 1, p + 1) for i, p in enumerate(lam) if i == 0 or lam[i - 1] > p]
    boxes.append((len(lam) + 1, 1))
    return boxes


def remove_box(lam: Partition, box: Box) -> Partition:
    if box not in removable_boxes(lam):
        raise InvalidInputError(f"box {box} is not removable from {lam}")
    out = list(lam)
    out[box[0] - 1] -= 1
    return tuple(p for p in out if p)


def add_box(lam: Partition, box: Box) -> Partition:
    if box not in addable_boxes(lam):
        raise InvalidInputError(f"box {box} is not addable to {lam}")
    out = list(lam)
    if box[0] > len(out):
        out.append(1)
    else:
        out[box[0] - 1] += 1
    return tuple(out)


def hook_length_dim(lam: Partition) -> int:
    """Number of SYT of shape ``lam`` by the hook length formula."""
    conj = conjugate(lam)
    hooks = prod(
        (lam[i] - j - 1) + (conj[j] - i - 1) + 1
        for i in range(len(lam))
        for j in range(lam[i])
    )
    return factorial(sum(lam)) // hooks


# ---------------------------------------------------------------------------
# tableaux


def shape(t: Tableau) -> Partition:
    return tuple(len(row) for row in t)


def reading_word(t: Tableau) -> Word:
    """Row-by-row concatenation, top row first (used as the sort key)."""
    return tuple(x for row in t for x in row)


@lru_cache(maxsize=None)
def _syt(lam: Partition) -> tuple[Tableau, ...]:
    n = sum(lam)
    if n == 0:
        return ((),)
    out = []
    # the largest entry n always sits in a removable box
    for box in removable_boxes(lam):
        for t in _syt(remove_box(lam, box)):
            rows = [list(row) for row in t]
            if box[0] > len(rows):
                rows.append([n])
            else:
                rows[box[0] - 1].append(n)
            out.append(tuple(tuple(row) for row in rows))
    return tuple(sorted(out, key=reading_word))


def syt_enumerate(lam: Partition) -> list[Tableau]:
    """All standard Young tableaux of shape ``lam``, sorted by reading word."""
    return list(_syt(as_partition(lam)))


def dim(lam: Partition) -> int:
    """Number of standard tableaux of shape ``lam``."""
    return len(_syt(tuple(lam)))


def syt(n: int) -> list[Tableau]:
    """All SYT with ``n`` boxes, ordered by (shape, reading word)."""
    return [t for lam in partitions(n) for t in _syt(lam)]


def standardise_tableau(t: Tableau) -> Tableau:
    rank = {x: i + 1 for i, x in enumerate(sorted(reading_word(t)))}
    return tuple(tuple(rank[x] for x in row) for row in t)


def shift_tableau(t: Tableau, k: int) -> Tableau:
    return tuple(tuple(x + k for x in row) for row in t)


def tableau_add_box(t: Tableau, box: Box, value: int) -> Tableau:
    """Place ``value`` in an addable box of ``shape(t)``."""
    if box not in addable_boxes(shape(t)):
        raise InvalidInputError(f"box {box} is not addable to shape {shape(t)}")
    rows = [list(row) for row in t]
    if box[0] > len(rows):
        rows.append([value])
    else:
        rows[box[0] - 1].append(value)
    return tuple(tuple(row) for row in rows)


def tableau_descent_set(t: Tableau) -> tuple[int, ...]:
    """Entries ``i`` whose successor ``i+1`` lies in a strictly lower row."""
    row_of = {x: r for r, row in enumerate(t) for x in row}
    n = len(row_of)
    return tuple(i for i in range(1, n) if row_of[i + 1] > row_of[i])


def tableau_descent_composition(t: Tableau) -> Composition:
    return composition_from_descents(tableau_descent_set(t), sum(shape(t)))


# ---------------------------------------------------------------------------
# row insertion and unbumping


def row_insert(t: Tableau, x: int) -> tuple[Tableau, Box]:
    """Schensted row insertion of ``x``; returns the new tableau and the new box."""
    rows = [list(row) for row in t]
    for i, row in enumerate(rows):
        # first entry larger than x gets bumped
        j = next((j for j, y in enumerate(row) if y > x), None)
        if j is None:
            row.append(x)
            return tuple(tuple(r) for r in rows), (i + 1, len(row))
        row[j], x = x, row[j]
    rows.append([x])
    return tuple(tuple(r) for r in rows), (len(rows), 1)


def rsk_insertion_tableau(p: Sequence[int]) -> Tableau:
    """Insertion tableau P of the Robinson-Schensted correspondence."""
    t: Tableau = ()
    for x in p:
        t, _ = row_insert(t, x)
    return t


def unbump(t: Tableau, box: Box) -> tuple[Tableau, int]:
    """Reverse row insertion starting from the removable ``box``.

    Returns the tableau left behind (distinct but not necessarily standard
    fillings) and the letter ejected from the first row.
    """
    if box not in removable_boxes(shape(t)):
        raise InvalidInputError(f"box {box} is not removable from shape {shape(t)}")
    rows = [list(row) for row in t]
    r = box[0] - 1
    b = rows[r].pop()
    for i in range(r - 1, -1, -1):
        row = rows[i]
        # largest entry smaller than b
        j = max(j for j, y in enumerate(row) if y < b)
        row[j], b = b, row[j]
    return tuple(tuple(row) for row in rows if row), b


# ---------------------------------------------------------------------------
# text encodings


def format_partition(lam: Sequence[int]) -> str:
    return ",".join(str(p) for p in lam)


def parse_partition(text: str) -> Partition:
    text = text.strip().strip("()")
    if not text:
        return ()
    try:
        return as_partition(int(x) for x in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse partition {text!r}") from exc


def format_perm(p: Sequence[int]) -> str:
    return " ".join(str(x) for x in p)


def parse_perm(text: str) -> Perm:
    text = text.strip().strip("()")
    try:
        return as_perm(int(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse permutation {text!r}") from exc


def format_tableau(t: Tableau) -> str:
    return " / ".join(" ".join(str(x) for x in row) for row in t)


def parse_tableau(text: str, standard: bool = True) -> Tableau:
    try:
        rows = [[int(x) for x in row.split()] for row in text.split("/")]
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse tableau {text!r}") from exc
    if rows == [[]]:
        return ()
    return as_tableau(rows, standard=standard)


def format_labels(kind: str, labels: Iterable) -> list[str]:
    fmt = {
        "perm": format_perm,
        "tableau": format_tableau,
        "partition": format_partition,
        "composition": format_partition,
    }[kind]
    return [fmt(x) for x in labels]


def parse_label(kind: str, text: str):
    if kind == "perm":
        return parse_perm(text)
    if kind == "tableau":
        return parse_tableau(text)
    if kind == "partition":
        return parse_partition(text)
    if kind == "composition":
        return tuple(int(x) for x in text.split(",") if x.strip())
    raise InvalidInputError(f"unknown label kind {kind!r}")

