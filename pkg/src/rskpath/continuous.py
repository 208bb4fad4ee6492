"""Piecewise-linear paths and the continuous min/max-plus machinery.

Everything here works on exact breakpoint arithmetic: paths carry
Fraction breakpoints and values, the running extrema insert crossing
points as exact rationals, and the inf/sup convolutions

    (f <| g)(t) = inf over 0 <= s <= t of  f(s) + g(t) - g(s)
    (f |> g)(t) = sup over 0 <= s <= t of  f(s) + g(t) - g(s)

come out piecewise linear again, with no floating point anywhere.  The
ordered transform gamma mirrors the discrete level recursion from
rskpath.transform, and linear interpolation of a letter-count walk
commutes with it at integer times, which the tests check exhaustively.

Only the piecewise-linear subclass of paths is covered.  That is a
deliberate narrowing: every inf or sup then reduces to a finite scan,
and the discrete-embedding checks need nothing more general.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Sequence

from rskpath.paths import MultiPath, word_to_walk


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


class PiecewiseLinearPath:
    """A path [0, horizon] -> R^k, linear between breakpoints, f(0) = o.

    Stored in canonical form: interior breakpoints where no coordinate
    changes slope are dropped, so two objects are equal as functions
    exactly when they compare equal.
    """

    __slots__ = ("breakpoints", "values", "k")

    def __init__(self, breakpoints: Sequence, values: Sequence):
        bps = tuple(_frac(b) for b in breakpoints)
        vals = tuple(tuple(_frac(x) for x in v) for v in values)
        if not bps or bps[0] != 0:
            raise ValueError("breakpoints must start at 0")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(vals) != len(bps):
            raise ValueError("one value tuple per breakpoint")
        k = len(vals[0])
        if k == 0 or any(len(v) != k for v in vals):
            raise ValueError("inconsistent dimension")
        if any(x != 0 for x in vals[0]):
            raise ValueError("path must start at the origin")
        keep = [0]
        for j in range(1, len(bps) - 1):
            i = keep[-1]
            left = [(vals[j][c] - vals[i][c]) / (bps[j] - bps[i]) for c in range(k)]
            right = [(vals[j + 1][c] - vals[j][c]) / (bps[j + 1] - bps[j]) for c in range(k)]
            if left != right:
                keep.append(j)
        if len(bps) > 1:
            keep.append(len(bps) - 1)
        self.breakpoints = tuple(bps[j] for j in keep)
        self.values = tuple(vals[j] for j in keep)
        self.k = k

    @property
    def horizon(self) -> Fraction:
        return self.breakpoints[-1]

    def value(self, t) -> tuple[Fraction, ...]:
        t = _frac(t)
        if not 0 <= t <= self.horizon:
            raise ValueError(f"{t} outside [0, {self.horizon}]")
        j = bisect_right(self.breakpoints, t) - 1
        if j == len(self.breakpoints) - 1:
            return self.values[j]
        a, b = self.breakpoints[j], self.breakpoints[j + 1]
        w = (t - a) / (b - a)
        return tuple(
            va + (vb - va) * w for va, vb in zip(self.values[j], self.values[j + 1])
        )

    def component(self, i: int) -> "PiecewiseLinearPath":
        """Coordinate i as a one-dimensional path, 0-based."""
        return PiecewiseLinearPath(
            self.breakpoints, tuple((v[i],) for v in self.values)
        )

    def rescale(self, new_horizon) -> "PiecewiseLinearPath":
        """Reparametrize time onto [0, new_horizon]; values unchanged."""
        new_horizon = _frac(new_horizon)
        if self.horizon == 0 or new_horizon <= 0:
            raise ValueError("need positive horizons to rescale")
        factor = new_horizon / self.horizon
        return PiecewiseLinearPath(
            tuple(b * factor for b in self.breakpoints), self.values
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PiecewiseLinearPath)
            and self.breakpoints == other.breakpoints
            and self.values == other.values
        )

    def __hash__(self) -> int:
        return hash((self.breakpoints, self.values))

    def __repr__(self) -> str:
        pts = ", ".join(
            f"{b}:{tuple(map(str, v))}" for b, v in zip(self.breakpoints, self.values)
        )
        return f"PiecewiseLinearPath({pts})"


def embed_walk(walk: MultiPath) -> PiecewiseLinearPath:
    """Linear interpolation of a discrete walk at integer breakpoints."""
    n = walk.horizon
    return PiecewiseLinearPath(range(n + 1), [walk.value(m) for m in range(n + 1)])


def embed_word(word: Sequence[int], k: int) -> PiecewiseLinearPath:
    return embed_walk(word_to_walk(word, k))


def _grid(f: PiecewiseLinearPath, g: PiecewiseLinearPath) -> tuple[Fraction, ...]:
    if f.horizon != g.horizon:
        raise ValueError("paths must share a horizon")
    return tuple(sorted(set(f.breakpoints) | set(g.breakpoints)))


def _scalar(f: PiecewiseLinearPath) -> None:
    if f.k != 1:
        raise ValueError("one-dimensional paths only")


def _add(f, g, sign=1) -> PiecewiseLinearPath:
    grid = _grid(f, g)
    return PiecewiseLinearPath(
        grid,
        [(f.value(t)[0] + sign * g.value(t)[0],) for t in grid],
    )


def running_max(f: PiecewiseLinearPath) -> PiecewiseLinearPath:
    """t -> sup of f over [0, t], with exact crossing breakpoints."""
    _scalar(f)
    best = Fraction(0)
    bps = [f.breakpoints[0]]
    out = [best]
    for j in range(len(f.breakpoints) - 1):
        a, b = f.breakpoints[j], f.breakpoints[j + 1]
        fa, fb = f.values[j][0], f.values[j + 1][0]
        if fb > best:
            if fa < best:
                # f climbs back through the old maximum inside (a, b)
                cross = a + (best - fa) * (b - a) / (fb - fa)
                bps.append(cross)
                out.append(best)
            best = fb
        bps.append(b)
        out.append(best)
    return PiecewiseLinearPath(bps, [(v,) for v in out])


def running_min(f: PiecewiseLinearPath) -> PiecewiseLinearPath:
    _scalar(f)
    best = Fraction(0)
    bps = [f.breakpoints[0]]
    out = [best]
    for j in range(len(f.breakpoints) - 1):
        a, b = f.breakpoints[j], f.breakpoints[j + 1]
        fa, fb = f.values[j][0], f.values[j + 1][0]
        if fb < best:
            if fa > best:
                cross = a + (best - fa) * (b - a) / (fb - fa)
                bps.append(cross)
                out.append(best)
            best = fb
        bps.append(b)
        out.append(best)
    return PiecewiseLinearPath(bps, [(v,) for v in out])


def cinf(f: PiecewiseLinearPath, g: PiecewiseLinearPath) -> PiecewiseLinearPath:
    """(f <| g)(t) = inf over s <= t of f(s) + g(t) - g(s).

    Rewritten as g(t) plus the running minimum of f - g, so the result
    is piecewise linear on the refined grid.
    """
    _scalar(f), _scalar(g)
    return _add(g, running_min(_add(f, g, -1)))


def csup(f: PiecewiseLinearPath, g: PiecewiseLinearPath) -> PiecewiseLinearPath:
    """(f |> g)(t) = sup over s <= t of f(s) + g(t) - g(s)."""
    _scalar(f), _scalar(g)
    return _add(g, running_max(_add(f, g, -1)))


def cinf_fold(comps: Sequence[PiecewiseLinearPath]) -> PiecewiseLinearPath:
    """Left-to-right fold f1 <| f2 <| ... <| fj (the ops do not associate)."""
    out = comps[0]
    for nxt in comps[1:]:
        out = cinf(out, nxt)
    return out


def csup_fold(comps: Sequence[PiecewiseLinearPath]) -> PiecewiseLinearPath:
    out = comps[0]
    for nxt in comps[1:]:
        out = csup(out, nxt)
    return out


def _bundle(comps: Sequence[PiecewiseLinearPath]) -> PiecewiseLinearPath:
    grid = set()
    for c in comps:
        if c.horizon != comps[0].horizon:
            raise ValueError("components must share a horizon")
        grid.update(c.breakpoints)
    grid = tuple(sorted(grid))
    return PiecewiseLinearPath(
        grid, [tuple(c.value(t)[0] for c in comps) for t in grid]
    )


def _gamma_comps(comps: list[PiecewiseLinearPath]) -> list[PiecewiseLinearPath]:
    if len(comps) == 1:
        return comps
    folds = [comps[0]]
    for nxt in comps[1:]:
        folds.append(cinf(folds[-1], nxt))
    rest = [csup(comps[j + 1], folds[j]) for j in range(len(comps) - 1)]
    return [folds[-1]] + _gamma_comps(rest)


def gamma(f: PiecewiseLinearPath) -> PiecewiseLinearPath:
    """The ordered transform: smallest component first, k >= 2.

    Component 1 is the full inf fold, and the remaining components are
    the transform of the max-plus residuals, exactly as in the discrete
    level recursion.  For walks embedded from words the output at
    integer times is the reversed shape of the inserted prefix.
    """
    if f.k < 2:
        raise ValueError("needs at least two components")
    return _bundle(_gamma_comps([f.component(i) for i in range(f.k)]))


class GelfandCetlinPoint:
    """Triangular array x^(i)_j, 1 <= j <= i <= k, rows largest-first.

    The constructor enforces the cone inequalities
    x^(i)_j >= x^(i-1)_j >= x^(i)_{j+1}; a violation coming out of
    gc_phi would mean a bug in the transform, not bad input, hence the
    RuntimeError.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(_frac(x) for x in row) for row in rows)
        for i, row in enumerate(self.rows):
            if len(row) != i + 1:
                raise ValueError("row i must have i entries")
        for i in range(1, len(self.rows)):
            upper, lower = self.rows[i], self.rows[i - 1]
            for j in range(len(lower)):
                if not upper[j] >= lower[j] >= upper[j + 1]:
                    raise RuntimeError(
                        f"interlacing violated between rows {i} and {i + 1}"
                    )

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def bottom(self) -> tuple[Fraction, ...]:
        return self.rows[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, GelfandCetlinPoint) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"GelfandCetlinPoint{self.rows}"


def gc_phi(f: PiecewiseLinearPath) -> GelfandCetlinPoint:
    """Triangular array of the nested transforms at time 1.

    Row i reads the transform of the first i coordinates at the final
    time, largest entry first; paths on other horizons should be passed
    through rescale(1) first.
    """
    if f.horizon != 1:
        raise ValueError("defined on horizon 1; use rescale")
    rows = []
    for i in range(1, f.k + 1):
        comps = _gamma_comps([f.component(c) for c in range(i)])
        rows.append(tuple(reversed([c.value(1)[0] for c in comps])))
    return GelfandCetlinPoint(rows)


def gc_rho(f: PiecewiseLinearPath) -> PiecewiseLinearPath:
    """The recording path: the full transform, run over all of [0, 1]."""
    if f.horizon != 1:
        raise ValueError("defined on horizon 1; use rescale")
    if f.k == 1:
        return f
    return gamma(f)


def path_sup(f: PiecewiseLinearPath) -> Fraction:
    _scalar(f)
    return max(v[0] for v in f.values)


def sup_integration_parts(u: PiecewiseLinearPath, v: PiecewiseLinearPath):
    """Both sides of the max-plus integration-by-parts identity.

    Returns (lhs, rhs) with
    lhs = max(sup_t [runmax(u) + v](t), sup_t [u + runmax(v)](t)) and
    rhs = sup u + sup v; the two agree for any pair starting at 0.
    """
    _scalar(u), _scalar(v)
    lhs = max(
        path_sup(_add(running_max(u), v)),
        path_sup(_add(u, running_max(v))),
    )
    return lhs, path_sup(u) + path_sup(v)
