"""Series of tandem queueing networks driven by letters or Poisson clocks.

The discrete model: k - j + 1 queues in series at stage j, for j = 1..k.
A letter i gives one unit of service at queue i of stage 1.  Queue 1 of
every stage holds an infinite reservoir, so service there always makes a
departure.  Service at a later queue makes a departure when the queue is
busy and is wasted otherwise.  Departures from interior queues, and
wasted services, are passed down as service events for the next stage;
d^(j)_i counts the departures queue (j, i) has made.

Driving this machine with the letter-count walk of a word reproduces,
step for step, the triangular array built in rskpath.transform from
min/max-plus convolutions, which is what the tests check.  The second
half of the module has exact transient distributions for the stage-1
departure vector under Poisson service clocks, plus Monte Carlo drivers
for checking them.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from rskpath.symfunc import power_product
from rskpath.tableaux import num_standard, semistandard_tableaux, strip_zeros, weight


def empty_departures(k: int) -> list[list[int]]:
    """Zero departure matrix: row j (0-based) covers stage j+1, width k - j."""
    return [[0] * (k - j) for j in range(k)]


def cascade_step(dmat: list[list[int]], letter: int) -> None:
    """Feed one letter into the network, updating dmat in place.

    letter 0 is a pause.  The service event travels down the stages:
    a first-queue service always departs and re-fires at the next
    stage's queue 1; an interior departure re-fires at the same queue
    index; a wasted service re-fires one queue earlier.  Events stop at
    a last-queue departure or at the final stage.
    """
    if letter == 0:
        return
    k = len(dmat)
    if not 1 <= letter <= k:
        raise ValueError(f"letter {letter} outside 1..{k}")
    j, i = 0, letter
    while True:
        row = dmat[j]
        width = k - j
        if i == 1:
            row[0] += 1
            if width == 1:
                return
            j, i = j + 1, 1
        elif row[i - 1] < row[i - 2]:
            row[i - 1] += 1
            if i == width:
                return
            j, i = j + 1, i
        else:
            j, i = j + 1, i - 1


def queue_matrix(dmat: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Backlogs q^(j)_i = d^(j)_i - d^(j)_i+1; the last stage has none."""
    return tuple(
        tuple(row[i] - row[i + 1] for i in range(len(row) - 1))
        for row in dmat[:-1]
    )


def freeze(dmat: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in dmat)


class TandemState:
    """Mutable network state: departure counts plus an event clock."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("need k >= 1")
        self.k = k
        self.departures = empty_departures(k)
        self.clock = 0.0
        self.events = 0

    def feed(self, letter: int, at: float | None = None) -> None:
        cascade_step(self.departures, letter)
        if letter:
            self.events += 1
        if at is not None:
            if at < self.clock:
                raise ValueError("event times must be nondecreasing")
            self.clock = at

    @property
    def queues(self) -> tuple[tuple[int, ...], ...]:
        return queue_matrix(self.departures)

    def snapshot(self) -> tuple[tuple[int, ...], ...]:
        return freeze(self.departures)


def simulate_word(word: Sequence[int], k: int):
    """Run the network over a word; return per-time (departures, queues).

    Entry n of the result is the pair after the first n letters, so the
    list starts with the empty state and has len(word) + 1 entries.
    """
    state = TandemState(k)
    out = [(state.snapshot(), state.queues)]
    for a in word:
        state.feed(a)
        out.append((state.snapshot(), state.queues))
    return out

class PoissonDrive:
    """Service intensities, one Poisson clock per queue of stage 1."""

    def __init__(self, mu: Sequence):
        self.mu = tuple(Fraction(v) for v in mu)
        if not self.mu or any(v <= 0 for v in self.mu):
            raise ValueError("intensities must be positive")
        self.total = sum(self.mu)
        self.p = tuple(v / self.total for v in self.mu)
        self.k = len(self.mu)

    @classmethod
    def of(cls, mu) -> "PoissonDrive":
        return mu if isinstance(mu, cls) else cls(mu)


def simulate_poisson(mu, t: float, seed=None) -> TandemState:
    """Drive the network with superposed Poisson clocks up to time t.

    Exponential gaps at the total rate, letter types drawn iid with the
    normalized intensities; conditioned on the number of events this is
    exactly the word-driven model.  seed feeds numpy's default PCG64
    generator (an existing Generator is used as-is, so batches can share
    one stream).
    """
    drive = PoissonDrive.of(mu)
    rng = np.random.default_rng(seed)
    state = TandemState(drive.k)
    rate = float(drive.total)
    cuts = np.cumsum([float(v) for v in drive.p])[:-1]
    clock = 0.0
    while True:
        clock += rng.exponential(1.0 / rate)
        if clock > t:
            break
        letter = int(np.searchsorted(cuts, rng.random(), side="right")) + 1
        state.feed(letter, at=clock)
    return state


def beta_statistic(rows: Sequence[Sequence[int]], k: int) -> tuple[int, ...]:
    """Count of r's in row r, for r = 1..k; zero for missing rows."""
    return tuple(
        sum(1 for v in rows[r - 1] if v == r) if r <= len(rows) else 0
        for r in range(1, k + 1)
    )


def depoissonized_dist(p, n: int) -> dict[tuple[int, ...], Fraction]:
    """Exact law of the stage-1 departure vector after n letters.

    Sums f_shape * p^tableau over all semistandard tableaux of size n
    with entries up to k, grouped by the row-count statistic above.
    Suited to small n; the transient mixture uses a thriftier route.
    """
    probs = tuple(Fraction(v) for v in p)
    k = len(probs)
    if any(v <= 0 for v in probs) or sum(probs) != 1:
        raise ValueError("p must be strictly positive and sum to 1")
    out: dict[tuple[int, ...], Fraction] = {}
    for lam in _partitions_atmost(n, k):
        count = num_standard(lam)
        for tab in semistandard_tableaux(lam, k):
            key = beta_statistic(tab, k)
            mass = count * power_product(probs, weight(tab, k))
            out[key] = out.get(key, Fraction(0)) + mass
    return out


def _partitions_atmost(n: int, parts: int):
    def rec(remaining, cap, acc):
        if remaining == 0:
            yield tuple(acc)
            return
        if len(acc) == parts:
            return
        for part in range(min(cap, remaining), 0, -1):
            acc.append(part)
            yield from rec(remaining - part, part, acc)
            acc.pop()

    yield from rec(n, n, [])


def _constrained_strips(sigma, row, need, ceiling):
    """Strips over sigma growing exactly `need` cells in the given row.

    Yields partitions tau with at most `row` rows such that tau/sigma is
    a horizontal strip, tau_row - sigma_row = need, and |tau| <= ceiling.
    Rows above `row` may grow freely within the strip rule.
    """
    padded = tuple(sigma) + (0,) * (row - len(sigma))
    start = padded[row - 1] + need
    if row > 1 and start > padded[row - 2]:
        return
    budget = ceiling - sum(padded) - need
    if budget < 0:
        return

    def rec(r, left, acc):
        # acc holds rows row..r+1 bottom-up; acc[-1] is row r+1
        if r == 0:
            yield tuple(reversed(acc))
            return
        low = padded[r - 1]
        if acc[-1] > low:
            return  # row below would stick out past this row's old cells
        high = low + left if r == 1 else min(padded[r - 2], low + left)
        for val in range(low, high + 1):
            acc.append(val)
            yield from rec(r - 1, left - (val - low), acc)
            acc.pop()

    yield from rec(row - 1, budget, [start])


def _shape_coeffs(probs, d, ceiling) -> dict[tuple[int, ...], Fraction]:
    # coefficient of shape l: sum of p^tableau over semistandard
    # tableaux of shape l, entries <= k, whose count of i's in row i is
    # exactly d_i -- built letter by letter as constrained strips
    k = len(probs)
    states: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
    for i in range(1, k + 1):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for sigma, coef in states.items():
            for tau in _constrained_strips(sigma, i, d[i - 1], ceiling):
                clean = strip_zeros(tau)
                gain = coef * probs[i - 1] ** (sum(clean) - sum(sigma))
                nxt[clean] = nxt.get(clean, Fraction(0)) + gain
        states = nxt
    return states


def _delta_series(probs, d, ceiling) -> list[Fraction]:
    """P(delta(n) = d) for n = 0..ceiling, exact."""
    out = [Fraction(0)] * (ceiling + 1)
    for lam, coef in _shape_coeffs(probs, d, ceiling).items():
        out[sum(lam)] += coef * num_standard(lam)
    return out


def _poisson_tail(s: float, n: int) -> float:
    # e^{-s} sum_{m>n} s^m/m! <= e^{-s} s^{n+1}/(n+1)! / (1 - s/(n+2))
    if s == 0:
        return 0.0
    if n + 2 <= s:
        return 1.0
    log_head = -s + (n + 1) * math.log(s) - math.lgamma(n + 2)
    return math.exp(log_head) / (1 - s / (n + 2))


class TransientValue(NamedTuple):
    value: float
    tail_bound: float
    truncation: int


def transient_dist(mu, t, d, truncation: int | None = None, tolerance: float = 1e-9) -> TransientValue:
    """P(D(t) = d) for the stage-1 departure vector, generic route.

    Mixes the exact word laws with Poisson weights: e^{-s} times
    sum over n of s^n/n! P(delta(n) = d), s being total intensity times
    t.  The rational partial sum is exact; the returned tail bound
    dominates the rest of the series.  An explicit truncation that
    cannot meet the tolerance is an error, never a silent bad value.
    """
    drive = PoissonDrive.of(mu)
    d = tuple(int(v) for v in d)
    if len(d) != drive.k or any(v < 0 for v in d):
        raise ValueError(f"need {drive.k} nonnegative counts: {d}")
    s = Fraction(t) * drive.total
    if s < 0:
        raise ValueError("time must be nonnegative")
    if truncation is None:
        n_cut = sum(d)
        while _poisson_tail(float(s), n_cut) > tolerance:
            n_cut += 1
            if n_cut > 800:
                raise ValueError("tolerance out of reach; raise it or shrink t")
    else:
        n_cut = truncation
    bound = _poisson_tail(float(s), n_cut)
    if bound > tolerance:
        raise ValueError(
            f"truncation {n_cut} leaves tail bound {bound:.3g} above {tolerance:.3g}"
        )
    series = _delta_series(drive.p, d, n_cut)
    partial = sum(
        (s**n / math.factorial(n) * series[n] for n in range(sum(d), n_cut + 1)),
        Fraction(0),
    )
    return TransientValue(float(partial) * math.exp(-float(s)), bound, n_cut)


def transient_k2(mu, t, d) -> float:
    """Closed-form P(D(t) = (d1, d2)) for a pair of queues.

    The generic mixture collapses by the hook-length formula to a
    single series in the event count.  Vectors with d2 > d1 are
    unreachable (the second queue cannot overtake its feed) and give 0.
    """
    drive = PoissonDrive.of(mu)
    if drive.k != 2:
        raise ValueError("two intensities required")
    d1, d2 = (int(v) for v in d)
    if d1 < 0 or d2 < 0:
        raise ValueError("counts must be nonnegative")
    if d2 > d1:
        return 0.0
    s = Fraction(t) * drive.total
    p1, p2 = drive.p
    total = Fraction(0)
    tiny = Fraction(1, 10**18)
    n = d1 + d2
    while True:
        total += (
            s**n
            * p1**d1
            * p2 ** (n - d1)
            * Fraction(n - 2 * d2 + 1)
            / (math.factorial(n - d2 + 1) * math.factorial(d2))
        )
        n += 1
        term = (
            s**n
            * p1**d1
            * p2 ** (n - d1)
            * Fraction(n - 2 * d2 + 1)
            / (math.factorial(n - d2 + 1) * math.factorial(d2))
        )
        if n > 2 * float(s) + d1 + d2 + 10 and term <= tiny * (total + term):
            total += term
            break
    return float(total) * math.exp(-float(s))


def _bessel_ratio(nu: int, z: float) -> float:
    # sum_j (z^2/4)^j / (j! (j+nu)!), the ascending Bessel-I series with
    # its leading power stripped; well behaved at z = 0
    w = z * z / 4.0
    term = math.exp(-math.lgamma(nu + 1))
    total = term
    j = 1
    while term >= 1e-16 * total:
        term *= w / (j * (j + nu))
        total += term
        j += 1
    return total


def bessel_i(order: int, z: float) -> float:
    """Modified Bessel function of the first kind, ascending series.

    Terms are added until one falls below 1e-16 of the running sum;
    intended for nonnegative integer order and z >= 0.
    """
    if order < 0 or z < 0:
        raise ValueError("nonnegative order and argument only")
    return (z / 2.0) ** order * _bessel_ratio(order, z)


def queuelen_k2(mu, t, q) -> float:
    """P(Q(t) = q): the backlog between the two queues, by Bessel series.

    Same thing as summing transient_k2 over all departure pairs with
    gap q.  Each summand carries the regularized Bessel value
    I_{m+1}(2 sqrt(mu1 mu2) t) / (sqrt(mu1 mu2) t)^{m+1}; with a plain
    Bessel factor in its place the series would not even have total
    mass one, so the regularized form is what is implemented.
    """
    drive = PoissonDrive.of(mu)
    if drive.k != 2:
        raise ValueError("two intensities required")
    q = int(q)
    if q < 0:
        raise ValueError("queue length is nonnegative")
    s = float(Fraction(t) * drive.total)
    p1, p2 = (float(v) for v in drive.p)
    z = 2.0 * math.sqrt(p1 * p2) * s
    total = 0.0
    m = q
    while True:
        term = (m + 1) * (p2 * s) ** m * _bessel_ratio(m + 1, z)
        total += term
        if m > q + 10 + 2 * s and term <= 1e-16 * total:
            break
        m += 1
    return (p1 / p2) ** q * math.exp(-s) * total


def transient_k3_special(mu, t, d) -> float:
    """Closed form exp(-p1 t) p^d t^|d| f_d / |d|! for three equal-tailed rates.

    The classical reduction targets the mixed event {D1 = d1, D2 >= d2,
    D3 = d3}: equalities at queues 1 and 3, a one-sided bound at queue 2.
    This function evaluates that closed form exactly as it reads above.

    Caveat, stated bluntly: the closed form does NOT equal the law of
    that event (nor of any nearby event).  Its derivation rewrites the
    tableau sum for each shape l as p^d s_{l/d}(p2, p3), but the skew
    Schur polynomial also counts fillings that break column strictness
    against the frozen cells of d (already at l = (1,1,1), d = (1,1,0)
    the true sum is 1/8 and the skew value gives 3/16 at p =
    (1/2, 1/4, 1/4), n = 3).  Every phantom term is positive, so this
    value strictly exceeds the true probability once d1 >= 1; the gap is
    a few percent of the mass at moderate t.  For exact values of any
    departure event, sum transient_dist over the event instead.
    """
    drive = PoissonDrive.of(mu)
    if drive.k != 3:
        raise ValueError("three intensities required")
    if drive.p[1] != drive.p[2]:
        raise ValueError("needs equal second and third intensities")
    dd = tuple(int(v) for v in d)
    if len(dd) != 3 or any(a < b for a, b in zip(dd, dd[1:])) or dd[-1] < 0:
        raise ValueError(f"need a nonincreasing nonnegative triple: {d}")
    s = Fraction(t) * drive.total
    size = sum(dd)
    exact = (
        power_product(drive.p, dd)
        * s**size
        * Fraction(num_standard(strip_zeros(dd)), math.factorial(size))
    )
    return float(exact) * math.exp(-float(drive.p[0] * s))


def barnes_g(n: int) -> int:
    """Product of the first n gamma values: 1! 2! ... (n-1)!."""
    if n < 1:
        raise ValueError("defined for n >= 1")
    out = 1
    for i in range(1, n):
        out *= math.factorial(i)
    return out


def constant_departure_factor(k: int, m: int) -> Fraction:
    """f_d / |d|! for the constant vector d = (m,...,m), via Barnes products.

    Equals G(k) G(m) / G(k+m) in the factorial-product G; the tests pin
    this against the hook-length route, guarding the easy-to-flip ratio.
    """
    if k < 1 or m < 0:
        raise ValueError("need k >= 1 and m >= 0")
    if m == 0:
        return Fraction(1)
    return Fraction(barnes_g(k) * barnes_g(m), barnes_g(k + m))


def transient_constant(mu, t, m: int) -> float:
    """Closed form exp(-p1 t) (prod p_i^m) t^{mk} f_{(m^k)} / (mk)! for constant d.

    Same caveat as transient_k3_special: the skew-Schur rewrite behind
    this form admits fillings below row k that no k-letter word can
    produce, so for m >= 1 the value strictly exceeds the true
    P(D(t) = (m,...,m)) at every k >= 2 (k = 2, t = 3/2, m = 2: 0.01245
    vs the true 0.00868).  Only the m = 0 case and the combinatorial
    factor f_{(m^k)}/(mk)! = G(k)G(m)/G(k+m) are exact; use
    transient_dist for true probabilities.
    """
    drive = PoissonDrive.of(mu)
    if drive.k < 2:
        raise ValueError("need at least two queues")
    if int(m) != m or m < 0:
        raise ValueError("m must be a nonnegative integer")
    s = Fraction(t) * drive.total
    exact = (
        power_product(drive.p, (m,) * drive.k)
        * s ** (m * drive.k)
        * constant_departure_factor(drive.k, m)
    )
    return float(exact) * math.exp(-float(drive.p[0] * s))
