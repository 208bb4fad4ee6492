"""Command-line front end.

Subcommands: rsk, transform, shape-dist, tandem, continuous, verify.
Exact rationals travel as "num/den" strings; floats appear only in
Monte Carlo and transcendental outputs, and always next to an error
field.  Exit codes: 0 on success, 1 when a verification suite finds a
discrepancy, 2 for bad input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from fractions import Fraction

import numpy as np

from rskpath import markov, queueing, tableaux
from rskpath.continuous import PiecewiseLinearPath, gamma, gc_phi, gc_rho
from rskpath.paths import word_to_walk
from rskpath.transform import triangular

PASS, FAIL, USAGE = 0, 1, 2


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise ValueError(f"not a rational: {text!r}") from err


def _fraction_vector(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(part) for part in text.split(","))


def _word(text: str, k: int) -> tuple[int, ...]:
    if not text.isdigit() and text != "":
        raise ValueError(f"word must be a digit string, got {text!r}")
    letters = tuple(int(c) for c in text)
    for a in letters:
        if not 1 <= a <= k:
            raise ValueError(f"letter {a} outside the alphabet 1..{k}")
    return letters


def _state_key(state) -> str:
    return ",".join(str(v) for v in state)


def _print_tableau(rows, label):
    print(f"{label}:")
    if not rows:
        print("[]")
    for row in rows:
        if all(v <= 9 for v in row):
            print("[" + "".join(str(v) for v in row) + "]")
        else:
            print("[" + " ".join(str(v) for v in row) + "]")


# ---------------------------------------------------------------------------
# Subcommands.


def _cmd_rsk(args) -> int:
    word = _word(args.word, args.k)
    pair = tableaux.rs(word, mode=args.mode)
    if args.emit == "shapes":
        shapes = tableaux.recording_shapes(word, mode=args.mode)
        if args.json:
            print(json.dumps({"shapes": [list(s) for s in shapes]}))
        else:
            for s in shapes:
                print(_state_key(s) if s else "-")
        return PASS
    if args.json or args.emit == "json":
        out = {
            "p": {"rows": [list(r) for r in pair.p]},
            "q": {"rows": [list(r) for r in pair.q]},
        }
        print(json.dumps(out))
    else:
        _print_tableau(pair.p, "P")
        _print_tableau(pair.q, "Q")
    return PASS


def _cmd_transform(args) -> int:
    word = _word(args.word, args.k)
    if not word:
        raise ValueError("transform needs a nonempty word")
    arr = triangular(word_to_walk(word, args.k))
    n = arr.horizon
    g = arr.g_path()
    out = {}
    if args.emit in ("g", "all"):
        out["g"] = [list(g.value(m)) for m in range(n + 1)]
    if args.emit in ("array", "all"):
        out["departures"] = [list(r) for r in arr.d_matrix(n)]
        out["queues"] = [list(r) for r in arr.q_matrix(n)]
    if args.json:
        print(json.dumps(out))
        return PASS
    if "g" in out:
        print("g:")
        for m, v in enumerate(out["g"]):
            print(f"  {m}: {_state_key(v)}")
    if "departures" in out:
        print(f"departures at n={n}:")
        for row in out["departures"]:
            print(f"  {_state_key(row)}")
        print("queues:")
        for row in out["queues"]:
            print(f"  {_state_key(row)}")
    return PASS


def _cmd_shape_dist(args) -> int:
    p = _fraction_vector(args.p)
    if len(p) != args.k:
        raise ValueError(f"--p has {len(p)} entries, --k is {args.k}")
    dist = markov.exact_shape_dist(p, args.n)
    items = sorted(dist.items(), reverse=True)
    if args.json:
        print(json.dumps({_state_key(s): str(m) for s, m in items}))
        return PASS
    for state, mass in items:
        shown = str(mass) if args.exact else f"{float(mass):.10g}"
        print(f"{_state_key(state)}  {shown}")
    return PASS


def _cmd_tandem(args) -> int:
    mu = _fraction_vector(args.mu)
    t = _fraction(args.t)
    k = len(mu)
    d = tuple(int(v) for v in args.d.split(",")) if args.d else (0,) * k
    if len(d) != k:
        raise ValueError(f"--d has {len(d)} entries, --mu has {k}")
    out: dict = {"d": _state_key(d)}
    if args.emit in ("empirical", "both"):
        rng = np.random.default_rng(args.seed)
        hits = 0
        for _ in range(args.runs):
            state = queueing.simulate_poisson(mu, float(t), seed=rng)
            hits += tuple(state.departures[0]) == d
        est = hits / args.runs
        stderr = math.sqrt(est * (1 - est) / args.runs)
        out["empirical"] = {"value": est, "stderr": stderr}
    if args.emit in ("formula", "both"):
        val = queueing.transient_dist(mu, t, d, tolerance=args.tolerance)
        out["formula"] = {"value": val.value, "tail_bound": val.tail_bound}
    if args.json:
        payload = out if args.emit == "both" else out.get(args.emit, out)
        print(json.dumps(payload))
        return PASS
    print(f"P(D({args.t}) = {out['d']}) with mu = {args.mu}")
    if "empirical" in out:
        e = out["empirical"]
        print(f"  empirical: {e['value']:.6f}  stderr {e['stderr']:.2g}  ({args.runs} runs, seed {args.seed})")
    if "formula" in out:
        f = out["formula"]
        print(f"  formula:   {f['value']:.10g}  tail bound {f['tail_bound']:.2g}")
    return PASS


def _load_path(blob: dict) -> PiecewiseLinearPath:
    try:
        k = int(blob["k"])
        bps = [_fraction(str(b)) for b in blob["breakpoints"]]
        vals = [tuple(_fraction(str(x)) for x in row) for row in blob["values"]]
    except (KeyError, TypeError) as err:
        raise ValueError(f"input must have k, breakpoints, values: {err}") from err
    path = PiecewiseLinearPath(bps, vals)
    if path.k != k:
        raise ValueError(f"declared k={k} but values have width {path.k}")
    return path


def _dump_path(path: PiecewiseLinearPath) -> dict:
    return {
        "k": path.k,
        "breakpoints": [str(b) for b in path.breakpoints],
        "values": [[str(x) for x in v] for v in path.values],
    }


def _cmd_continuous(args) -> int:
    with open(args.input) as fh:
        path = _load_path(json.load(fh))
    if args.op in ("phi", "rho") and path.horizon != 1:
        path = path.rescale(1)  # the maps live on [0, 1]
    if args.op == "gamma":
        result = _dump_path(gamma(path))
    elif args.op == "rho":
        result = _dump_path(gc_rho(path))
    else:
        point = gc_phi(path)
        result = {"rows": [[str(x) for x in row] for row in point.rows]}
    print(json.dumps(result, indent=None if args.json else 2))
    return PASS


# ---------------------------------------------------------------------------
# Verification suites.  Each returns (ok, summary line).


def _suite_theorem31(k: int, max_n: int, p) -> tuple[bool, str]:
    checked = 0
    for n in range(max_n + 1):
        for word in itertools.product(range(1, k + 1), repeat=n):
            arr = triangular(word_to_walk(word, k)) if n else None
            rows: list[list[int]] = []
            for m, a in enumerate(word, start=1):
                rows = tableaux.column_insert(rows, a)
                if tableaux.tableau_from_array(arr.d_matrix(m)) != rows:
                    return False, f"word {word} prefix {m}: array tableau != insertion"
                checked += 1
    return True, f"{checked} prefix comparisons, k={k}, words up to length {max_n}"


def _suite_intertwining(k: int, max_size: int, p) -> tuple[bool, str]:
    report = markov.verify_intertwining(p, max_size)
    if not report.ok:
        return False, f"first failure: {report.failures[0]}"
    return True, f"{report.checked} kernel identities at sizes <= {max_size}, p={_state_key(p)}"


def _suite_shapechain(k: int, max_size: int, p) -> tuple[bool, str]:
    for n in range(max_size + 1):
        formula = markov.exact_shape_dist(p, n, method="formula")
        chain = markov.exact_shape_dist(p, n, method="chain")
        enum = markov.exact_shape_dist(p, n, method="enumeration")
        if formula != chain or formula != enum:
            return False, f"three-way shape law split at n={n}"
    return True, f"three routes agree exactly for n <= {max_size}, p={_state_key(p)}"


def _suite_theorem11(k: int, max_size: int, p) -> tuple[bool, str]:
    for n in range(1, max_size + 1):
        if markov.g_trajectory_dist(p, n) != markov.conditioned_trajectory_dist(p, n):
            return False, f"transform law != conditioned law at n={n}"
    return True, f"trajectory laws identical for n <= {max_size}, p={_state_key(p)}"


_SUITES = {
    "theorem31": (_suite_theorem31, 6),
    "intertwining": (_suite_intertwining, 5),
    "shapechain": (_suite_shapechain, 5),
    "theorem11": (_suite_theorem11, 5),
}


def _cmd_verify(args) -> int:
    runner, default_bound = _SUITES[args.suite]
    bound = args.max_n if args.max_n is not None else args.max_size
    if bound is None:
        bound = default_bound
    p = _fraction_vector(args.p) if args.p else (Fraction(1, args.k),) * args.k
    if len(p) != args.k:
        raise ValueError(f"--p has {len(p)} entries, --k is {args.k}")
    ok, detail = runner(args.k, bound, p)
    if args.json:
        print(json.dumps({"suite": args.suite, "ok": ok, "detail": detail}))
    else:
        print(f"suite {args.suite}: {'pass' if ok else 'FAIL'} - {detail}")
    return PASS if ok else FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rskpath",
        description="Path transforms, insertion tableaux, chamber walks, tandem queues.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine output")

    sp = sub.add_parser("rsk", help="insert a word, print the tableau pair")
    sp.add_argument("--word", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mode", choices=("column", "row"), default="column")
    sp.add_argument("--emit", choices=("tableaux", "shapes", "json"), default="tableaux")
    common(sp)
    sp.set_defaults(run=_cmd_rsk)

    sp = sub.add_parser("transform", help="triangular array and g path of a word")
    sp.add_argument("--word", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--emit", choices=("g", "array", "all"), default="all")
    common(sp)
    sp.set_defaults(run=_cmd_transform)

    sp = sub.add_parser("shape-dist", help="exact law of the shape at time n")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--p", required=True, help="rationals like 1/2,1/2")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--exact", action="store_true", help="print rationals, not floats")
    common(sp)
    sp.set_defaults(run=_cmd_shape_dist)

    sp = sub.add_parser("tandem", help="P(D(t) = d): simulation vs exact mixture")
    sp.add_argument("--mu", required=True, help="intensities like 1,1,2")
    sp.add_argument("--t", required=True)
    sp.add_argument("--d", default=None, help="departure vector, default all zeros")
    sp.add_argument("--runs", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--emit", choices=("empirical", "formula", "both"), default="both")
    sp.add_argument("--tolerance", type=float, default=1e-9)
    common(sp)
    sp.set_defaults(run=_cmd_tandem)

    sp = sub.add_parser("continuous", help="gamma / phi / rho of a piecewise-linear path")
    sp.add_argument("--input", required=True, help="JSON with k, breakpoints, values")
    sp.add_argument("--op", choices=("gamma", "phi", "rho"), required=True)
    common(sp)
    sp.set_defaults(run=_cmd_continuous)

    sp = sub.add_parser("verify", help="run an exact verification suite")
    sp.add_argument("--suite", choices=sorted(_SUITES), required=True)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--max-n", type=int, default=None)
    sp.add_argument("--max-size", type=int, default=None)
    sp.add_argument("--p", default=None, help="walk law, default uniform")
    common(sp)
    sp.set_defaults(run=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
