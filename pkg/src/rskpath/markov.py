"""Markov structure behind random words: walk, conditioned walk, shape chain.

A word with letter probabilities p drives three processes at once: the
letter-counting walk on the lattice, the ordered output of the path
transform inside the chamber x_1 <= ... <= x_k, and the insertion shape,
a partition growing one box per letter.  Each is Markov.  The matrices
here produce transition rows exactly, as Fractions, computed on demand
because the state spaces are infinite.

kernel_K(p) sends a shape to the conditional law of the walk given that
shape; its rows are Kostka counts weighted by p.  The identities
QK = KP and (conditioned)J = J(walk), checked by verify_intertwining,
are what make the shape process Markov in the first place.

Monte Carlo samplers draw letters through a numpy PCG64 generator via
inverse-CDF lookup on uniforms, so runs are reproducible for a fixed
seed across platforms.
"""

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Sequence

import numpy as np

from rskpath.paths import MultiPath, word_to_walk
from rskpath.symfunc import power_product, schur
from rskpath.tableaux import kostka, num_standard, shape, strip_zeros
from rskpath.transform import triangular

State = tuple[int, ...]


class TransitionMatrix:
    """Lazy row map of an infinite matrix; rows memoized once computed."""

    def __init__(self, row_fn, space: str):
        self.space = space
        self._row_fn = row_fn
        self._rows: dict[State, tuple] = {}
        self._lock = threading.Lock()

    def row(self, x) -> tuple[tuple[State, Fraction], ...]:
        x = tuple(x)
        with self._lock:
            hit = self._rows.get(x)
        if hit is not None:
            return hit
        fresh = tuple(self._row_fn(x))
        with self._lock:
            return self._rows.setdefault(x, fresh)

    def prob(self, x, y) -> Fraction:
        y = tuple(y)
        for state, mass in self.row(x):
            if state == y:
                return mass
        return Fraction(0)


class Kernel(TransitionMatrix):
    """Rows map a shape or chamber state to a law over lattice weights."""


def _as_probs(p) -> tuple[Fraction, ...]:
    probs = tuple(Fraction(v) for v in p)
    if not probs or any(v <= 0 for v in probs) or sum(probs) != 1:
        raise ValueError("p must be strictly positive and sum to 1")
    return probs


def _bump(x: State, i: int) -> State:
    return x[:i] + (x[i] + 1,) + x[i + 1 :]


def _in_chamber(x) -> bool:
    return all(v >= 0 for v in x) and all(a <= b for a, b in zip(x, x[1:]))


def _is_padded_partition(x) -> bool:
    return all(v >= 0 for v in x) and all(a >= b for a, b in zip(x, x[1:]))


def partitions_padded(n: int, k: int) -> list[State]:
    """All partitions of n with at most k parts, zero-padded to length k."""

    def rec(remaining, cap, acc):
        if remaining == 0:
            yield tuple(acc) + (0,) * (k - len(acc))
            return
        if len(acc) == k:
            return
        for part in range(min(cap, remaining), 0, -1):
            acc.append(part)
            yield from rec(remaining - part, part, acc)
            acc.pop()

    return list(rec(n, n, []))


def compositions(n: int, k: int):
    for cuts in itertools.combinations(range(n + k - 1), k - 1):
        prev, parts = -1, []
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(n + k - 2 - prev)
        yield tuple(parts)


def walk_matrix(p) -> TransitionMatrix:
    """Letter-counting walk: from x, step to x + e_i with probability p_i."""
    probs = _as_probs(p)
    k = len(probs)

    def row(x):
        if len(x) != k or any(v < 0 for v in x):
            raise ValueError(f"not a lattice state for k={k}: {x}")
        return [(_bump(x, i), probs[i]) for i in range(k)]

    return TransitionMatrix(row, "lattice")


def conditioned_matrix(p) -> TransitionMatrix:
    """The walk conditioned to stay ordered.

    States are nondecreasing tuples.  A step to x + e_i is allowed when
    the order survives, with probability given by the ratio of Schur
    values at the reversed states; rows sum to 1 by the one-box Pieri
    rule.
    """
    probs = _as_probs(p)
    k = len(probs)

    def row(x):
        if len(x) != k or not _in_chamber(x):
            raise ValueError(f"state off the chamber: {x}")
        base = schur(x[::-1], probs)
        out = []
        for i in range(k):
            y = _bump(x, i)
            if _in_chamber(y):
                out.append((y, schur(y[::-1], probs) / base))
        return out

    return TransitionMatrix(row, "chamber")


def shape_matrix(p) -> TransitionMatrix:
    """Growth of the insertion shape: add one box, Schur-ratio weights."""
    probs = _as_probs(p)
    k = len(probs)

    def row(x):
        if len(x) != k or not _is_padded_partition(x):
            raise ValueError(f"not a partition state for k={k}: {x}")
        base = schur(x, probs)
        out = []
        for i in range(k):
            y = _bump(x, i)
            if _is_padded_partition(y):
                out.append((y, schur(y, probs) / base))
        return out

    return TransitionMatrix(row, "partitions")


def kernel_K(p, max_size: int | None = None) -> Kernel:
    """Conditional law of the walk position given the current shape.

    K(shape, y) = p^y * (number of semistandard tableaux of that shape
    with letter counts y) / s_shape(p), supported on the weights where
    the count is positive.  max_size, when given, bounds |shape| as a
    resource guard.
    """
    probs = _as_probs(p)
    k = len(probs)

    def row(x):
        if len(x) != k or not _is_padded_partition(x):
            raise ValueError(f"not a partition state for k={k}: {x}")
        if max_size is not None and sum(x) > max_size:
            raise ValueError(f"shape larger than the size bound {max_size}: {x}")
        base = schur(x, probs)
        out = []
        for y in compositions(sum(x), k):
            count = kostka(x, y)
            if count:
                out.append((y, power_product(probs, y) * count / base))
        return out

    return Kernel(row, "partitions")


def kernel_J(p, max_size: int | None = None) -> Kernel:
    """kernel_K read from chamber states: J(x, y) = K(reversed x, y)."""
    inner = kernel_K(p, max_size)
    probs = _as_probs(p)
    k = len(probs)

    def row(x):
        if len(x) != k or not _in_chamber(x):
            raise ValueError(f"state off the chamber: {x}")
        return inner.row(x[::-1])

    return Kernel(row, "chamber")


@dataclass
class IntertwiningReport:
    ok: bool
    checked: int
    failures: list

    def __bool__(self):
        return self.ok


def _compose(first: TransitionMatrix, second: TransitionMatrix, x) -> dict:
    out: dict[State, Fraction] = {}
    for y, a in first.row(x):
        for z, b in second.row(y):
            out[z] = out.get(z, Fraction(0)) + a * b
    return {z: m for z, m in out.items() if m}


def _first_diff(lhs: dict, rhs: dict):
    for z in sorted(set(lhs) | set(rhs)):
        a, b = lhs.get(z, Fraction(0)), rhs.get(z, Fraction(0))
        if a != b:
            return z, a, b
    return None


def verify_intertwining(p, max_size: int, kernel: Kernel | None = None) -> IntertwiningReport:
    """Check QK = KP on shapes and (conditioned)J = J(walk) on the chamber.

    Exact rational comparison for every state of mass <= max_size; any
    discrepancy is reported with the witnessing state and entry.  An
    explicit kernel can be substituted for K, e.g. as a negative control.
    """
    probs = _as_probs(p)
    k = len(probs)
    walk = walk_matrix(probs)
    cond = conditioned_matrix(probs)
    shapes = shape_matrix(probs)
    kern = kernel if kernel is not None else kernel_K(probs)

    def jrow(x):
        return kern.row(x[::-1])

    j = Kernel(jrow, "chamber")

    failures = []
    checked = 0
    for n in range(max_size + 1):
        for lam in partitions_padded(n, k):
            lhs, rhs = _compose(shapes, kern, lam), _compose(kern, walk, lam)
            checked += 1
            if lhs != rhs:
                failures.append(("QK=KP", lam, _first_diff(lhs, rhs)))
            x = lam[::-1]
            lhs, rhs = _compose(cond, j, x), _compose(j, walk, x)
            checked += 1
            if lhs != rhs:
                failures.append(("PJ=JP", x, _first_diff(lhs, rhs)))
    return IntertwiningReport(not failures, checked, failures)


def exact_shape_dist(p, n: int, method: str = "formula") -> dict[State, Fraction]:
    """Law of the insertion shape after n letters, keys padded to length k.

    method picks the route: "formula" multiplies the Schur value by the
    number of standard tableaux, "chain" pushes a point mass through the
    shape matrix n times, and "enumeration" groups all k^n words by the
    shape they insert to.  The three agree; keeping them separate is the
    point of the cross-checks.
    """
    probs = _as_probs(p)
    k = len(probs)
    if method == "formula":
        return {
            lam: schur(lam, probs) * num_standard(strip_zeros(lam))
            for lam in partitions_padded(n, k)
        }
    if method == "chain":
        q = shape_matrix(probs)
        dist = {(0,) * k: Fraction(1)}
        for _ in range(n):
            nxt: dict[State, Fraction] = {}
            for state, mass in dist.items():
                for y, step in q.row(state):
                    nxt[y] = nxt.get(y, Fraction(0)) + mass * step
            dist = nxt
        return dist
    if method == "enumeration":
        from rskpath.tableaux import rs

        out: dict[State, Fraction] = {}
        for word in itertools.product(range(1, k + 1), repeat=n):
            mass = math.prod((probs[a - 1] for a in word), start=Fraction(1))
            lam = shape(rs(word).p)
            key = lam + (0,) * (k - len(lam))
            out[key] = out.get(key, Fraction(0)) + mass
        return out
    raise ValueError(f"unknown method: {method}")


def _pad_partition(entry, k: int) -> State:
    lam = tuple(int(v) for v in entry)
    if len(strip_zeros(lam)) > k:
        raise ValueError(f"more than {k} parts: {lam}")
    lam = strip_zeros(lam) + (0,) * (k - len(strip_zeros(lam)))
    if not _is_padded_partition(lam):
        raise ValueError(f"not a partition: {entry}")
    return lam


def exact_joint_shape_path(p, chain: Sequence[Sequence[int]]) -> Fraction:
    """Probability that the shape chain follows the given growth path.

    Multiplies shape-matrix entries step by step; the product telescopes
    to the Schur value of the final shape, which is the content of the
    joint law statement.  A step that is not one-box growth is a domain
    error.
    """
    probs = _as_probs(p)
    k = len(probs)
    q = shape_matrix(probs)
    state = (0,) * k
    total = Fraction(1)
    for entry in chain:
        nxt = _pad_partition(entry, k)
        step = q.prob(state, nxt)
        if step == 0:
            raise ValueError(f"not a one-box growth step: {state} -> {nxt}")
        total *= step
        state = nxt
    return total


def conditional_given_shapes(p, chain: Sequence[Sequence[int]], y) -> Fraction:
    """P(walk position = y | the whole observed shape chain).

    Depends on the chain only through its last shape: the answer is the
    kernel_K row there, evaluated at y.
    """
    probs = _as_probs(p)
    exact_joint_shape_path(probs, chain)  # validates positive probability
    last = _pad_partition(chain[-1], len(probs))
    return kernel_K(probs).prob(last, tuple(int(v) for v in y))


@cache
def _kostka_inverse(n: int, k: int) -> dict[State, dict[State, Fraction]]:
    # Gauss-Jordan over the partitions of n with at most k parts; the
    # matrix is unitriangular in dominance order so always invertible.
    parts = partitions_padded(n, k)
    size = len(parts)
    aug = [
        [Fraction(kostka(parts[i], parts[j])) for j in range(size)]
        + [Fraction(int(i == j)) for j in range(size)]
        for i in range(size)
    ]
    for col in range(size):
        pivot = next(r for r in range(col, size) if aug[r][col])
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return {
        parts[i]: {parts[j]: aug[i][size + j] for j in range(size)}
        for i in range(size)
    }


def phi_q(p, q, y) -> Fraction:
    """Test function whose kernel_K image is the monomial q^shape.

    phi_q(y) = p^(-y) * sum over partitions z of |y| of the inverse
    Kostka entry at (y, z) times q^z s_z(p); zero off the partition
    cone.  Applying kernel_K(p) to it returns q^x exactly, which is how
    the shape chain's law is pinned down.
    """
    probs = tuple(Fraction(v) for v in p)
    point = tuple(Fraction(v) for v in q)
    wt = tuple(int(v) for v in y)
    k = len(probs)
    if len(point) != k or len(wt) != k:
        raise ValueError("p, q, y must share a length")
    if any(v <= 0 for v in probs):
        raise ValueError("p must be strictly positive")
    if not _is_padded_partition(wt):
        return Fraction(0)
    inverse_row = _kostka_inverse(sum(wt), k)[wt]
    total = sum(
        (
            entry * power_product(point, z) * schur(z, probs)
            for z, entry in inverse_row.items()
        ),
        Fraction(0),
    )
    return power_product(probs, tuple(-v for v in wt)) * total


def sample_word(p, n: int, seed) -> list[int]:
    """n iid letters under p: PCG64 uniforms cut at the CDF of p."""
    probs = _as_probs(p)
    rng = np.random.Generator(np.random.PCG64(seed))
    cuts = np.cumsum(np.asarray([float(v) for v in probs]))[:-1]
    draws = np.searchsorted(cuts, rng.random(n), side="right")
    return [int(a) + 1 for a in draws]


def sample_walk(p, n: int, seed) -> MultiPath:
    return word_to_walk(sample_word(p, n, seed), len(tuple(p)))


def sample_g(p, n: int, seed) -> MultiPath:
    """Ordered output of the transform along a sampled walk."""
    return triangular(sample_walk(p, n, seed)).g_path()


def g_trajectory_dist(p, n: int) -> dict[tuple[State, ...], Fraction]:
    """Exact law of the ordered output at times 1..n, word by word."""
    probs = _as_probs(p)
    k = len(probs)
    out: dict[tuple[State, ...], Fraction] = {}
    for word in itertools.product(range(1, k + 1), repeat=n):
        mass = math.prod((probs[a - 1] for a in word), start=Fraction(1))
        g = triangular(word_to_walk(word, k)).g_path()
        key = tuple(g.value(m) for m in range(1, n + 1))
        out[key] = out.get(key, Fraction(0)) + mass
    return out


def conditioned_trajectory_dist(p, n: int) -> dict[tuple[State, ...], Fraction]:
    """Law of n steps of the conditioned walk started at the origin."""
    probs = _as_probs(p)
    k = len(probs)
    cond = conditioned_matrix(probs)
    trajs: dict[tuple[State, ...], Fraction] = {((0,) * k,): Fraction(1)}
    for _ in range(n):
        nxt: dict[tuple[State, ...], Fraction] = {}
        for traj, mass in trajs.items():
            for y, step in cond.row(traj[-1]):
                nxt[traj + (y,)] = mass * step
        trajs = nxt
    return {traj[1:]: mass for traj, mass in trajs.items()}


@dataclass
class SurvivalReport:
    estimate: float
    target: Fraction
    stderr: float
    interval: tuple[float, float]
    ok: bool
    survived: tuple[int, int]
    paths: int
    horizon: int


def survival_ratio_check(
    p, x, x_other, horizon: int, paths: int = 10**6, seed=0, chunk: int = 5000
) -> SurvivalReport:
    """Monte Carlo check that chamber-survival odds follow Schur values.

    Simulates `paths` walks from each start and compares the ratio of
    the frequencies of staying ordered up to `horizon` against the exact
    ratio p^(-x) s_(reversed x)(p) between the two starts.  Requires
    p_1 < ... < p_k, without which survival has probability zero and no
    ratio exists.  The two starts use independent seeded streams; the
    interval is three delta-method standard errors wide.
    """
    probs = _as_probs(p)
    k = len(probs)
    if any(a >= b for a, b in zip(probs, probs[1:])):
        raise ValueError("needs strictly increasing probabilities")
    starts = tuple(tuple(int(v) for v in s) for s in (x, x_other))
    for s in starts:
        if len(s) != k or not _in_chamber(s):
            raise ValueError(f"start off the chamber: {s}")

    def weight(s):
        return power_product(probs, tuple(-v for v in s)) * schur(s[::-1], probs)

    target = weight(starts[0]) / weight(starts[1])
    if starts[0] == starts[1]:
        return SurvivalReport(1.0, target, 0.0, (1.0, 1.0), target == 1, (paths, paths), paths, horizon)

    # float32 uniforms are twice as cheap and their grid bias (~1e-7)
    # is far below the Monte Carlo standard error here
    cuts = np.cumsum(np.asarray([float(v) for v in probs], dtype=np.float32))[:-1]
    streams = np.random.SeedSequence(seed).spawn(2)
    survived = []
    for start, stream in zip(starts, streams):
        rng = np.random.Generator(np.random.PCG64(stream))
        offsets = [start[i + 1] - start[i] for i in range(k - 1)]
        count = 0
        done = 0
        while done < paths:
            m = min(chunk, paths - done)
            draws = rng.random((m, horizon), dtype=np.float32)
            letters = np.searchsorted(cuts, draws, side="right")
            alive = np.ones(m, dtype=bool)
            for i in range(k - 1):
                # gap between coordinates i+1 and i must stay nonnegative
                steps = (letters == i + 1).astype(np.int16)
                steps -= letters == i
                gaps = np.cumsum(steps, axis=1, dtype=np.int16)
                alive &= gaps.min(axis=1) >= -offsets[i]
            count += int(alive.sum())
            done += m
        survived.append(count)

    f1, f2 = survived[0] / paths, survived[1] / paths
    if f2 == 0 or f1 == 0:
        raise ValueError("no surviving paths; horizon or paths too small")
    estimate = f1 / f2
    stderr = estimate * math.sqrt(
        (1 - f1) / (f1 * paths) + (1 - f2) / (f2 * paths)
    )
    interval = (estimate - 3 * stderr, estimate + 3 * stderr)
    ok = interval[0] <= target <= interval[1]
    return SurvivalReport(
        estimate, target, stderr, interval, ok, tuple(survived), paths, horizon
    )
