"""The min/max-plus path transform, its triangular array, and inversion.

For a k-component walk x, write D_j = x_1 <| x_2 <| ... <| x_j (folds
associate left-to-right; the operations are not associative) and
T_j = x_(j+1) |> D_j.  The transform keeps D_k and recurses on
(T_1, ..., T_(k-1)):

    g(x) = (D_k, g(T(x)))        g(x) = x when k = 1

Stacking the D rows of each recursion level gives a triangular array
d^(1), ..., d^(k) whose anti-diagonal (d^(1)_k, d^(2)_(k-1), ..., d^(k)_1)
is g(x).  The array coincides with the departure matrix of the tandem
network in rskpath.queueing driven by the same word, and its row
differences are the network backlogs; tests compare the two routes.

Inversion: x_i = D_i - D_(i-1) + T_(i-1), where the backlog
D_(i-1) - D_i is read off future increments of (D_i, T_(i-1)) through
q(n) = max_(l >= n) [D_i(n, l) - T_(i-1)(n, l)].  On a finite window the
running maxima may not have settled, so recover() returns, next to the
reconstructed values, one certificate bit per coordinate.  The bit is
set only when every driving word consistent with the observed window
agrees on that coordinate, which is decided by filtering the tandem
network's backlog states against the observed increments of g forward
and backward in time.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from rskpath.paths import MultiPath, Path, inf_conv, sup_conv

# give up on certification when the consistent-state filter gets this big
_CERTIFY_CAP = 200_000


def inf_fold(paths: Sequence[Path]) -> Path:
    """x_1 <| x_2 <| ... <| x_k, evaluated left-to-right."""
    acc = paths[0]
    for p in paths[1:]:
        acc = inf_conv(acc, p)
    return acc


def sup_fold(x: MultiPath) -> Path:
    """x_k |> x_(k-1) |> ... |> x_1, evaluated left-to-right."""
    comps = x.components
    acc = comps[-1]
    for p in comps[-2::-1]:
        acc = sup_conv(acc, p)
    return acc


def dmap(x: MultiPath) -> MultiPath:
    """Prefix folds (x_1, x_1 <| x_2, ..., x_1 <| ... <| x_k)."""
    return MultiPath(_prefix_folds(x.components))


def tmap(x: MultiPath) -> MultiPath:
    """(x_2 |> D_1, x_3 |> D_2, ..., x_k |> D_(k-1)); needs k >= 2."""
    if x.k < 2:
        raise ValueError("tmap needs at least two components")
    folds = _prefix_folds(x.components)
    return MultiPath(
        [sup_conv(x[j + 1], folds[j]) for j in range(x.k - 1)]
    )


def gmap(x: MultiPath) -> MultiPath:
    """The full transform g(x) = (D_k, g(T(x)))."""
    if x.k == 1:
        return MultiPath([x[0]])
    rest = gmap(tmap(x))
    return MultiPath([inf_fold(x.components), *rest.components])


def _prefix_folds(comps: Sequence[Path]) -> list[Path]:
    folds = [comps[0]]
    for p in comps[1:]:
        folds.append(inf_conv(folds[-1], p))
    return folds


class TriangularArray:
    """All recursion levels of the transform of one walk.

    d_levels[i] is the D row of level i + 1 (k - i components) and
    t_levels[i] the auxiliary walk handed to the next level.
    """

    def __init__(self, d_levels: list[MultiPath], t_levels: list[MultiPath]):
        self.d_levels = d_levels
        self.t_levels = t_levels
        self.k = d_levels[0].k
        self.horizon = d_levels[0].horizon

    def d_path(self, level: int, i: int) -> Path:
        """d^(level)_i as a path; both indices 1-based."""
        return self.d_levels[level - 1][i - 1]

    def t_path(self, level: int, i: int) -> Path:
        return self.t_levels[level - 1][i - 1]

    def d_matrix(self, n: int) -> tuple[tuple[int, ...], ...]:
        """The departure triangle at time n, widest row first."""
        return tuple(level.value(n) for level in self.d_levels)

    def q_matrix(self, n: int) -> tuple[tuple[int, ...], ...]:
        """Backlogs q^(j)_i(n) = d^(j)_i(n) - d^(j)_(i+1)(n)."""
        out = []
        for level in self.d_levels[:-1]:
            v = level.value(n)
            out.append(tuple(v[i] - v[i + 1] for i in range(len(v) - 1)))
        return tuple(out)

    def g_path(self) -> MultiPath:
        """Anti-diagonal (d^(1)_k, d^(2)_(k-1), ..., d^(k)_1)."""
        return MultiPath(
            [self.d_levels[i][self.k - 1 - i] for i in range(self.k)]
        )

    def rows_nonincreasing(self) -> bool:
        """Within each level, d^(j)_1 >= d^(j)_2 >= ... at every time."""
        for level in self.d_levels:
            for n in range(self.horizon + 1):
                v = level.value(n)
                if any(a < b for a, b in zip(v, v[1:])):
                    return False
        return True


def triangular(x: MultiPath) -> TriangularArray:
    """Build the full array by iterating the level recursion."""
    current = list(x.components)
    d_levels, t_levels = [], []
    while True:
        folds = _prefix_folds(current)
        d_levels.append(MultiPath(folds))
        if len(current) == 1:
            return TriangularArray(d_levels, t_levels)
        current = [
            sup_conv(current[j + 1], folds[j]) for j in range(len(current) - 1)
        ]
        t_levels.append(MultiPath(current))


# ---------------------------------------------------------------------------
# Inversion.


class Recovered(NamedTuple):
    values: tuple[int, ...]
    certified: tuple[bool, ...]


def recover(g: MultiPath, n: int) -> Recovered:
    """Reconstruct x(n) from g = gmap(x), with per-coordinate certificates."""
    if not 0 <= n <= g.horizon:
        raise ValueError("n outside the window of g")
    return recover_all(g)[n]


def recover_all(g: MultiPath) -> list[Recovered]:
    """recover() at every time in the window, sharing one state filter."""
    g_vals = [list(c.values) for c in g.components]
    xs = _recover_values(g_vals)
    flags = _certify(g_vals)
    N = g.horizon
    if flags is None:
        flags = [(False,) * g.k] * (N + 1)
    return [
        Recovered(tuple(x[n] for x in xs), flags[n]) for n in range(N + 1)
    ]


def _recover_values(g_vals: list[list[int]]) -> list[list[int]]:
    """The inversion recursion, reading backlogs off window maxima.

    Exact whenever the window is long enough for every maximum to have
    settled; certification is handled separately.
    """
    k = len(g_vals)
    if k == 1:
        return [list(g_vals[0])]
    ts = _recover_values(g_vals[1:])  # T_1 ... T_(k-1)
    length = len(g_vals[0])
    xs_rev = []
    depart = list(g_vals[0])  # D_k
    for i in range(k, 1, -1):
        t = ts[i - 2]
        c = [depart[m] - t[m] for m in range(length)]
        suff = _suffix_max(c)
        q = [suff[m] - c[m] for m in range(length)]
        xs_rev.append([t[m] - q[m] for m in range(length)])
        depart = [depart[m] + q[m] for m in range(length)]  # D_(i-1)
    xs_rev.append(depart)  # x_1 = D_1
    return xs_rev[::-1]


def _suffix_max(vals: list[int]) -> list[int]:
    out = list(vals)
    for m in range(len(vals) - 2, -1, -1):
        if out[m + 1] > out[m]:
            out[m] = out[m + 1]
    return out


def _backlog_step(qmat, a, k):
    """Tandem-network step in backlog coordinates.

    Returns (new backlog matrix, which g components stepped).  Mirrors
    rskpath.queueing.cascade_step: a departure at queue i needs i == 1
    or a positive backlog q_(i-1); the event leaves the system exactly
    when a stage's last queue departs, which is when that stage's g
    component steps.
    """
    emitted = [0] * k
    if a == 0:
        return qmat, tuple(emitted)
    rows = [list(r) for r in qmat]
    j, i = 0, a
    while True:
        width = k - j
        if i == 1 or rows[j][i - 2] > 0:
            if i >= 2:
                rows[j][i - 2] -= 1
            if i == width:
                emitted[j] = 1
                break
            rows[j][i - 1] += 1
            j, i = j + 1, i
        else:
            j, i = j + 1, i - 1
    return tuple(tuple(r) for r in rows), tuple(emitted)


def _certify(g_vals: list[list[int]]):
    """Per-time, per-coordinate determinacy of x given the window of g.

    Runs the driving-word filter: forward, the set of (backlog matrix,
    letter counts) pairs reachable under words whose network output
    matches the observed increments of g; backward, the backlog states
    from which the remaining increments stay feasible.  A coordinate is
    certified at time n when all surviving pairs agree on it.  Returns
    None when the filter exceeds the size cap.
    """
    k = len(g_vals)
    N = len(g_vals[0]) - 1
    deltas = [
        tuple(g[m + 1] - g[m] for g in g_vals) for m in range(N)
    ]
    masses = {sum(d) for d in deltas}
    if not masses <= {0, 1}:
        raise ValueError("increments do not come from a transform output")
    letters = list(range(1, k + 1))
    if 0 in masses:
        letters = [0] + letters  # the driving word had pauses
    zero_q = tuple(tuple([0] * (k - 1 - j)) for j in range(k - 1))
    zero_x = (0,) * k

    forward: list[dict] = [{zero_q: {zero_x}}]
    size = 1
    for obs in deltas:
        nxt: dict = {}
        for q, xset in forward[-1].items():
            for a in letters:
                q2, emitted = _backlog_step(q, a, k)
                if emitted != obs:
                    continue
                bucket = nxt.setdefault(q2, set())
                for xv in xset:
                    if a:
                        xv = xv[: a - 1] + (xv[a - 1] + 1,) + xv[a:]
                    bucket.add(xv)
        if not nxt:
            raise ValueError("window is not the transform of any walk")
        size += sum(len(s) for s in nxt.values())
        if size > _CERTIFY_CAP:
            return None
        forward.append(nxt)

    feasible = [set() for _ in range(N + 1)]
    feasible[N] = set(forward[N])
    for m in range(N - 1, -1, -1):
        obs = deltas[m]
        for q in forward[m]:
            for a in letters:
                q2, emitted = _backlog_step(q, a, k)
                if emitted == obs and q2 in feasible[m + 1]:
                    feasible[m].add(q)
                    break

    flags = []
    for n in range(N + 1):
        seen: list[set] = [set() for _ in range(k)]
        for q, xset in forward[n].items():
            if q not in feasible[n]:
                continue
            for xv in xset:
                for i in range(k):
                    seen[i].add(xv[i])
        flags.append(tuple(len(s) == 1 for s in seen))
    return flags


def weight_from_shape_chain(
    chain: Sequence[Sequence[int]], k: int, n: int
) -> Recovered:
    """Reconstruct x(n) from the nonincreasing row-length vectors of g.

    chain[m] is the sorted (largest part first) value of g at time
    m + 1; reversing each entry recovers g itself, after which this is
    recover().  Entries shorter than k are padded with zeros.
    """
    rows = [[0] * (len(chain) + 1) for _ in range(k)]
    for m, shape in enumerate(chain, start=1):
        shape = tuple(shape)
        if len(shape) > k:
            raise ValueError("chain entry longer than k")
        padded = shape + (0,) * (k - len(shape))
        for i in range(k):
            rows[i][m] = padded[k - 1 - i]
    g = MultiPath([Path(r) for r in rows])
    return recover(g, n)
