"""Counting paths with unit steps and their min/max-plus convolutions.

A counting path is a map x: {0, 1, ..., N} -> Z with x(0) = 0 and
x(n) - x(n-1) in {0, 1}.  A k-component walk bundles k counting paths;
when it is built from a word over {1, ..., k}, exactly one component
steps at each time and the walk records letter counts.

The two binary operations implemented here are

    (x <| y)(n) = min over 0 <= m <= n of  x(m) + y(n) - y(m)
    (x |> y)(n) = max over 0 <= m <= n of  x(m) + y(n) - y(m)

called inf_conv and sup_conv below.  Both preserve the unit-step
property, and inf_conv(x, y) is the departure process of a single-server
queue with arrivals x and services y; queue_length gives its backlog.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence


class Path:
    """An integer path with x(0) = 0 and steps in {0, 1}."""

    __slots__ = ("values",)

    def __init__(self, values: Iterable[int]):
        vals = tuple(int(v) for v in values)
        if not vals:
            raise ValueError("path needs at least the time-0 value")
        if vals[0] != 0:
            raise ValueError("path must start at 0")
        for a, b in zip(vals, vals[1:]):
            if b - a not in (0, 1):
                raise ValueError("path steps must be 0 or 1")
        self.values = vals

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def __call__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, Path) and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"Path({list(self.values)})"

    def increment(self, n: int, l: int) -> int:
        """x(n, l) = x(l) - x(n), the mass picked up on (n, l]."""
        return self.values[l] - self.values[n]

    def prefix(self, n: int) -> "Path":
        return Path(self.values[: n + 1])


class MultiPath:
    """A tuple of k counting paths over a common horizon."""

    __slots__ = ("components", "k")

    def __init__(self, components: Sequence[Path]):
        comps = tuple(components)
        if not comps:
            raise ValueError("need at least one component")
        horizon = comps[0].horizon
        if any(c.horizon != horizon for c in comps):
            raise ValueError("components must share a horizon")
        self.components = comps
        self.k = len(comps)

    @property
    def horizon(self) -> int:
        return self.components[0].horizon

    def __getitem__(self, i: int) -> Path:
        return self.components[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPath) and self.components == other.components

    def __repr__(self) -> str:
        return f"MultiPath({[list(c.values) for c in self.components]})"

    def value(self, n: int) -> tuple[int, ...]:
        return tuple(c(n) for c in self.components)

    def mass(self, n: int) -> int:
        """Total of all components at time n."""
        return sum(c(n) for c in self.components)

    def single_stepping(self) -> bool:
        """True if at most one component steps at each time."""
        for n in range(1, self.horizon + 1):
            if sum(c(n) - c(n - 1) for c in self.components) > 1:
                return False
        return True

    def in_weyl(self, n: int | None = None) -> bool:
        """Component ordering x_1 <= x_2 <= ... <= x_k, at time n or all times."""
        times = range(self.horizon + 1) if n is None else (n,)
        for t in times:
            v = self.value(t)
            if any(a > b for a, b in zip(v, v[1:])):
                return False
        return True


def word_to_walk(word: Sequence[int], k: int) -> MultiPath:
    """Letter-count walk of a word over the alphabet {1, ..., k}.

    Component i at time n is the number of occurrences of letter i + 1
    among the first n letters, so exactly one component steps per time.
    """
    return walk_with_pauses(word, k, allow_pause=False)


def walk_with_pauses(letters: Sequence[int], k: int, allow_pause: bool = True) -> MultiPath:
    """Like word_to_walk but a letter 0 means no component steps."""
    low = 0 if allow_pause else 1
    counts = [0] * k
    rows = [[0] for _ in range(k)]
    for a in letters:
        if not low <= a <= k:
            raise ValueError(f"letter {a} outside {{{low}, ..., {k}}}")
        if a:
            counts[a - 1] += 1
        for i in range(k):
            rows[i].append(counts[i])
    return MultiPath([Path(r) for r in rows])


def walk_to_word(walk: MultiPath) -> list[int]:
    """Inverse of word_to_walk; pauses come back as 0."""
    out = []
    for n in range(1, walk.horizon + 1):
        step = [c(n) - c(n - 1) for c in walk.components]
        total = sum(step)
        if total > 1:
            raise ValueError("walk has simultaneous steps; no word produced it")
        out.append(step.index(1) + 1 if total else 0)
    return out


def inf_conv(x: Path, y: Path) -> Path:
    """(x <| y)(n) = min over m <= n of x(m) + y(n) - y(m).

    Computed in one sweep: the minimum equals y(n) plus the running
    minimum of x - y.
    """
    _check_pair(x, y)
    best = 0
    out = [0]
    for n in range(1, len(x.values)):
        d = x.values[n] - y.values[n]
        if d < best:
            best = d
        out.append(y.values[n] + best)
    return Path(out)


def sup_conv(x: Path, y: Path) -> Path:
    """(x |> y)(n) = max over m <= n of x(m) + y(n) - y(m)."""
    _check_pair(x, y)
    best = 0
    out = [0]
    for n in range(1, len(x.values)):
        d = x.values[n] - y.values[n]
        if d > best:
            best = d
        out.append(y.values[n] + best)
    return Path(out)


def queue_length(x: Path, y: Path) -> tuple[int, ...]:
    """Backlog of the queue with arrivals x and services y: x - (x <| y).

    Satisfies the Lindley recursion
    q(n) = max(q(n-1) + dx(n) - dy(n), 0).
    """
    d = inf_conv(x, y)
    return tuple(a - b for a, b in zip(x.values, d.values))


def unused_services(x: Path, y: Path) -> tuple[int, ...]:
    """Services wasted on an empty queue: y - (x <| y)."""
    d = inf_conv(x, y)
    return tuple(a - b for a, b in zip(y.values, d.values))


def increments(x: Path, n: int, l: int) -> int:
    """x(n, l) = x(l) - x(n) for 0 <= n <= l <= horizon."""
    if not 0 <= n <= l <= x.horizon:
        raise ValueError("need 0 <= n <= l <= horizon")
    return x.values[l] - x.values[n]


def _check_pair(x: Path, y: Path) -> None:
    if x.horizon != y.horizon:
        raise ValueError("paths must share a horizon")


# ---------------------------------------------------------------------------
# JSON interchange.  Words/walks travel as {"k": int, "steps": [letters]},
# single paths as {"values": [ints]}.


def walk_to_json(walk: MultiPath) -> str:
    return json.dumps({"k": walk.k, "steps": walk_to_word(walk)})

def walk_from_json(text: str) -> MultiPath:
    obj = json.loads(text)
    return walk_with_pauses(obj["steps"], int(obj["k"]))

def path_to_json(path: Path) -> str:
    return json.dumps({"values": list(path.values)})

def path_from_json(text: str) -> Path:
    return Path(json.loads(text)["values"])
