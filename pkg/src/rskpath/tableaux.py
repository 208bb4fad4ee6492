"""Semistandard tableaux and Robinson-Schensted insertion.

A tableau is a tuple of rows, each row a tuple of positive ints, with
rows weakly increasing, columns strictly increasing, and row lengths
nonincreasing.  Partitions are nonincreasing tuples of nonnegative
ints; trailing zeros are allowed on input and stripped on output.

Column insertion is the primary mode: the new letter enters the first
column, bumping the topmost entry that is >= it (ties bump), and the
bumped entry enters the next column; a letter finding no such entry
lands at the bottom of the column.  Row insertion is the familiar
bump-the-leftmost-strictly-larger variant.  The two are related by
word reversal, which the tests pin down.
"""

from __future__ import annotations

import json
import math
from functools import cache
from typing import Iterator, NamedTuple, Sequence

Tableau = tuple[tuple[int, ...], ...]


def validate_tableau(rows: Sequence[Sequence[int]]) -> Tableau:
    t = tuple(tuple(int(v) for v in row) for row in rows)
    for row in t:
        if not row:
            raise ValueError("empty row")
        if any(v < 1 for v in row):
            raise ValueError("entries must be positive")
        if any(a > b for a, b in zip(row, row[1:])):
            raise ValueError("rows must increase weakly")
    for above, below in zip(t, t[1:]):
        if len(below) > len(above):
            raise ValueError("row lengths must not grow downward")
        if any(a >= b for a, b in zip(above, below)):
            raise ValueError("columns must increase strictly")
    return t


def shape(t: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return tuple(len(row) for row in t)


def weight(t: Sequence[Sequence[int]], k: int | None = None) -> tuple[int, ...]:
    """Letter counts (number of 1s, 2s, ...), padded to k if given."""
    top = k or max((v for row in t for v in row), default=0)
    counts = [0] * top
    for row in t:
        for v in row:
            if v > top:
                raise ValueError(f"entry {v} exceeds k={k}")
            counts[v - 1] += 1
    return tuple(counts)


def is_partition(seq: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(seq, seq[1:])) and all(
        v >= 0 for v in seq
    )


def strip_zeros(shape_: Sequence[int]) -> tuple[int, ...]:
    out = tuple(shape_)
    while out and out[-1] == 0:
        out = out[:-1]
    return out


def column_insert(t: Sequence[Sequence[int]], a: int) -> Tableau:
    """Insert a letter by column bumping; returns a new tableau."""
    rows = [list(row) for row in t]
    col = 0
    while True:
        r = 0
        bumped = None
        while r < len(rows) and len(rows[r]) > col:
            if rows[r][col] >= a:
                bumped = rows[r][col]
                rows[r][col] = a
                break
            r += 1
        if bumped is None:
            if r == len(rows):
                rows.append([a])
            else:
                if len(rows[r]) != col:
                    raise ValueError("input was not a tableau")
                rows[r].append(a)
            return tuple(tuple(row) for row in rows)
        a = bumped
        col += 1


def row_insert(t: Sequence[Sequence[int]], a: int) -> Tableau:
    """Insert a letter by row bumping; returns a new tableau."""
    rows = [list(row) for row in t]
    r = 0
    while True:
        if r == len(rows):
            rows.append([a])
            break
        row = rows[r]
        idx = _first_greater(row, a)
        if idx == len(row):
            row.append(a)
            break
        a, row[idx] = row[idx], a
        r += 1
    return tuple(tuple(row) for row in rows)


def _first_greater(row: list[int], a: int) -> int:
    lo, hi = 0, len(row)
    while lo < hi:
        mid = (lo + hi) // 2
        if row[mid] <= a:
            lo = mid + 1
        else:
            hi = mid
    return lo


class InsertionPair(NamedTuple):
    p: Tableau
    q: Tableau


def rs(word: Sequence[int], mode: str = "column") -> InsertionPair:
    """Insert a word letter by letter; also build the recording tableau.

    The recording tableau is standard: entry n sits in the cell created
    by the n-th insertion.
    """
    insert = _pick_mode(mode)
    p: Tableau = ()
    qrows: list[list[int]] = []
    for n, a in enumerate(word, start=1):
        before = shape(p)
        p = insert(p, a)
        r, rows_after = _new_cell_row(before, shape(p))
        if r == len(qrows):
            qrows.append([n])
        else:
            qrows[r].append(n)
    return InsertionPair(p, tuple(tuple(row) for row in qrows))


def _pick_mode(mode: str):
    if mode == "column":
        return column_insert
    if mode == "row":
        return row_insert
    raise ValueError(f"unknown insertion mode {mode!r}")


def _new_cell_row(before: tuple[int, ...], after: tuple[int, ...]):
    for r in range(len(after)):
        if r >= len(before) or after[r] != before[r]:
            return r, after
    raise ValueError("no cell was added")


def recording_shapes(
    word: Sequence[int], mode: str = "column"
) -> tuple[tuple[int, ...], ...]:
    """Shapes after each insertion: the growth chain of the word."""
    insert = _pick_mode(mode)
    p: Tableau = ()
    out = []
    for a in word:
        p = insert(p, a)
        out.append(shape(p))
    return tuple(out)


def standard_to_chain(q: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Growth chain of a standard tableau (shape after entries <= n)."""
    n = sum(len(row) for row in q)
    entries = sorted(
        (v, r) for r, row in enumerate(q) for v in row
    )
    if [v for v, _ in entries] != list(range(1, n + 1)):
        raise ValueError("not a standard tableau")
    lengths = [0] * len(q)
    chain = []
    for _, r in entries:
        lengths[r] += 1
        chain.append(strip_zeros(tuple(lengths)))
    return tuple(chain)


def chain_to_standard(chain: Sequence[Sequence[int]]) -> Tableau:
    rows: list[list[int]] = []
    prev: tuple[int, ...] = ()
    for n, sh in enumerate(chain, start=1):
        sh = tuple(sh)
        r, _ = _new_cell_row(prev, sh)
        if r == len(rows):
            rows.append([n])
        else:
            rows[r].append(n)
        prev = sh
    return validate_tableau(rows) if rows else ()


def rs_inverse(p: Tableau, q: Tableau, mode: str = "column") -> list[int]:
    """Recover the word from an insertion pair; inverse of rs()."""
    if shape(p) != shape(q):
        raise ValueError("tableaux must share a shape")
    chain = standard_to_chain(q) if q else ()
    rows = [list(row) for row in p]
    word: list[int] = []
    prev = list(shape(p))
    for n in range(len(chain), 0, -1):
        smaller = chain[n - 2] if n >= 2 else ()
        r = _shrunk_row(prev, smaller)
        c = prev[r] - 1
        v = rows[r].pop()
        if not rows[r]:
            rows.pop(r)
        if mode == "column":
            for col in range(c - 1, -1, -1):
                rr = _bottom_at_most(rows, col, v)
                v, rows[rr][col] = rows[rr][col], v
        elif mode == "row":
            for rr in range(r - 1, -1, -1):
                idx = _last_smaller(rows[rr], v)
                v, rows[rr][idx] = rows[rr][idx], v
        else:
            raise ValueError(f"unknown insertion mode {mode!r}")
        word.append(v)
        prev = [len(row) for row in rows]
    return word[::-1]


def _shrunk_row(larger: Sequence[int], smaller: Sequence[int]) -> int:
    for r in range(len(larger)):
        if r >= len(smaller) or larger[r] != smaller[r]:
            return r
    raise ValueError("chain does not shrink")


def _bottom_at_most(rows: list[list[int]], col: int, v: int) -> int:
    best = None
    for r in range(len(rows)):
        if len(rows[r]) > col and rows[r][col] <= v:
            best = r
    if best is None:
        raise ValueError("tableau pair is not an insertion pair")
    return best


def _last_smaller(row: list[int], v: int) -> int:
    lo, hi = 0, len(row)
    while lo < hi:
        mid = (lo + hi) // 2
        if row[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    if lo == 0:
        raise ValueError("tableau pair is not an insertion pair")
    return lo - 1


def tableau_from_array(dmat: Sequence[Sequence[int]]) -> Tableau:
    """Tableau encoded by a departure triangle at a fixed time.

    Row r holds dmat[0][r-1] copies of r, then dmat[j][r-1] -
    dmat[j-1][r-1] copies of r + j for each later stage j; stage
    differences must be nonnegative for the triangle to encode one.
    """
    k = len(dmat)
    rows = []
    for r in range(k):
        row = [r + 1] * dmat[0][r]
        for j in range(1, k - r):
            gap = dmat[j][r] - dmat[j - 1][r]
            if gap < 0:
                raise ValueError("stage counts must be nondecreasing")
            row.extend([r + 1 + j] * gap)
        if row:
            rows.append(row)
    return validate_tableau(rows) if rows else ()


# ---------------------------------------------------------------------------
# Counting: hooks, Kostka numbers, horizontal strips.


def num_standard(shape_: Sequence[int]) -> int:
    """Number of standard tableaux of a shape, by the hook length formula."""
    lam = strip_zeros(shape_)
    if not is_partition(lam):
        raise ValueError("not a partition")
    n = sum(lam)
    if n == 0:
        return 1
    cols = _conjugate(lam)
    hooks = 1
    for r, length in enumerate(lam):
        for c in range(length):
            hooks *= (length - c) + (cols[c] - r) - 1
    return math.factorial(n) // hooks


def _conjugate(lam: tuple[int, ...]) -> tuple[int, ...]:
    if not lam:
        return ()
    return tuple(
        sum(1 for part in lam if part > c) for c in range(lam[0])
    )


def horizontal_strips(
    inner: tuple[int, ...], size: int
) -> Iterator[tuple[int, ...]]:
    """Partitions obtained from inner by adding `size` cells, no two in
    a column."""
    inner = strip_zeros(inner)
    rows = len(inner) + 1

    def rec(r: int, remaining: int, prev_inner: int, acc: list[int]):
        if r == rows:
            if remaining == 0:
                yield tuple(acc)
            return
        low = inner[r] if r < len(inner) else 0
        high = prev_inner if r > 0 else low + remaining
        high = min(high, low + remaining)
        for part in range(high, low - 1, -1):
            acc.append(part)
            yield from rec(r + 1, remaining - (part - low), low, acc)
            acc.pop()

    for outer in rec(0, size, 0, []):
        yield strip_zeros(outer)


@cache
def kostka(shape_: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """Number of semistandard tableaux of a shape with letter counts mu."""
    lam = strip_zeros(shape_)
    if not is_partition(lam):
        raise ValueError("not a partition")
    if sum(lam) != sum(mu):
        return 0
    if any(m < 0 for m in mu):
        raise ValueError("mu must be nonnegative")

    @cache
    def count(done: tuple[int, ...], level: int) -> int:
        if level == len(mu):
            return 1 if done == lam else 0
        total = 0
        for nxt in horizontal_strips(done, mu[level]):
            if all(a <= b for a, b in zip(nxt, lam)) and len(nxt) <= len(lam):
                total += count(nxt, level + 1)
        return total

    return count((), 0)


def semistandard_tableaux(
    shape_: Sequence[int], max_entry: int
) -> Iterator[Tableau]:
    """All semistandard tableaux of a shape with entries <= max_entry."""
    lam = strip_zeros(shape_)
    if not is_partition(lam):
        raise ValueError("not a partition")

    def rec(done: tuple[int, ...], level: int, rows: list[list[int]]):
        if level == max_entry:
            if done == lam:
                yield tuple(tuple(r) for r in rows if r)
            return
        budget = sum(lam) - sum(done)
        for size in range(budget + 1):
            for nxt in horizontal_strips(done, size):
                if len(nxt) > len(lam) or any(
                    a > b for a, b in zip(nxt, lam)
                ):
                    continue
                grown = [list(r) for r in rows]
                for r in range(len(nxt)):
                    have = done[r] if r < len(done) else 0
                    if r == len(grown):
                        grown.append([])
                    grown[r].extend([level + 1] * (nxt[r] - have))
                yield from rec(nxt, level + 1, grown)

    yield from rec((), 0, [])


# ---------------------------------------------------------------------------
# Greene invariants.


def greene(word: Sequence[int], i: int) -> int:
    """Largest total size of i disjoint weakly increasing subsequences.

    Exact dynamic program over the sorted tuple of subsequence tails;
    independent of any insertion algorithm on purpose, so the two can
    be compared.
    """
    if i < 0:
        raise ValueError("need i >= 0")
    if i == 0 or not word:
        return 0
    states = {(0,) * i: 0}
    for a in word:
        nxt = dict(states)
        for tails, picked in states.items():
            seen = set()
            for slot, tail in enumerate(tails):
                if tail > a or tail in seen:
                    continue  # can't extend, or same tail tried already
                seen.add(tail)
                new = tuple(sorted(tails[:slot] + (a,) + tails[slot + 1 :]))
                if nxt.get(new, -1) < picked + 1:
                    nxt[new] = picked + 1
        states = nxt
    return max(states.values())


# ---------------------------------------------------------------------------
# JSON interchange: {"rows": [[...], ...]}.


def tableau_to_json(t: Tableau) -> str:
    return json.dumps({"rows": [list(row) for row in t]})


def tableau_from_json(text: str) -> Tableau:
    obj = json.loads(text)
    rows = obj["rows"]
    return validate_tableau(rows) if rows else ()
