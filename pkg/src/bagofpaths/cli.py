"""Command-line front end.

Exit status: 0 on success, 1 on invalid input, 2 on numerical failure (or a
failed ``check``).
"""

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import oracle
from .distance import (
    distances_from_potentials,
    potential_distance,
    potentials_by_recurrence,
    potential_matrix,
    prefers_recurrence,
    surprisal_distance,
)
from .engine import (
    UnderflowWarning,
    build_model,
    hitting_column_direct,
    hitting_probabilities,
    regular_probabilities,
)
from .errors import NumericalError, ValidationError
from .graph import load_edge_list
from .kernel import distance_to_kernel, top_eigenvectors
from .tsv import read_matrix


def _parser():
    p = argparse.ArgumentParser(prog="bagofpaths", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(name, help, theta=True):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("input", type=Path, help="edge-list file: 'i j affinity [cost]' per line")
        if theta:
            sp.add_argument("--theta", type=float, required=True)
        sp.add_argument("--output", type=Path, help="output file (default: stdout)")
        return sp

    sp = common("probs", "bag-of-paths probability matrix")
    sp.add_argument("--paths", choices=["hitting", "regular"], default="hitting")
    sp.add_argument("--zero-paths", choices=["include", "exclude"], default="include")
    sp.add_argument("--self-test", action="store_true", help="verify the written matrix sums to 1")

    sp = common("dist", "surprisal or potential distance matrix")
    sp.add_argument("--measure", choices=["potential", "surprisal"], default="potential")

    for name, help in (("kernel", "centered kernel of a distance"), ("embed", "top kernel eigenvectors")):
        sp = common(name, help)
        sp.add_argument("--measure", choices=["potential", "surprisal"], default="potential")
        sp.add_argument("--clip-negative", action="store_true")
        if name == "embed":
            sp.add_argument("--dims", type=int, default=5)

    common("check", "compare the engine against the oracles")

    sp = common("ssl", "semi-supervised classification evaluation", theta=False)
    sp.add_argument("--labels", type=Path, required=True, help="'node_id class_id' per line")
    sp.add_argument("--measure", choices=["potential", "surprisal"], default="potential")
    sp.add_argument("--dims", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--labeling-rate", type=float, default=0.1)
    return p


def _write(args, writer):
    if args.output is None:
        writer(sys.stdout)
    else:
        with open(args.output, "w") as fh:
            writer(fh)


def _distance(g, theta, measure):
    m = build_model(g, theta)
    if prefers_recurrence(g, theta):
        return distances_from_potentials(potentials_by_recurrence(m), theta, measure)
    return potential_distance(m) if measure == "potential" else surprisal_distance(m)


def cmd_probs(g, args):
    m = build_model(g, args.theta)
    fn = hitting_probabilities if args.paths == "hitting" else regular_probabilities
    pm = fn(m, include_zero_length=args.zero_paths == "include")
    _write(args, pm.write)
    if args.self_test:
        if args.output is None:
            total = pm.p.sum()
        else:
            with open(args.output) as fh:
                total = read_matrix(fh)[0].sum()
        if abs(total - 1.0) > 1e-10:
            print(f"self-test FAILED: entries sum to {total!r}", file=sys.stderr)
            return 2
        print(f"self-test passed: entries sum to {total!r}", file=sys.stderr)
    return 0


def cmd_dist(g, args):
    d = _distance(g, args.theta, args.measure)
    _write(args, d.write)
    return 0


def cmd_kernel(g, args):
    k = distance_to_kernel(_distance(g, args.theta, args.measure), args.clip_negative)
    _write(args, lambda fh: k.write(fh, theta=args.theta))
    return 0


def cmd_embed(g, args):
    k = distance_to_kernel(_distance(g, args.theta, args.measure), args.clip_negative)
    emb = top_eigenvectors(k, args.dims)
    _write(args, emb.write)
    return 0


def run_checks(g, theta):
    """Oracle comparisons on one graph; returns a list of (name, passed, detail)."""
    m = build_model(g, theta)
    n = g.n
    results = []

    sigma = m.w.sum(axis=1).max()
    if n <= 8 and sigma < 1:
        bound = n * sigma**16 / (1 - sigma)
        worst = worst_h = 0.0
        for i in range(n):
            for j in range(n):
                e = oracle.enumerate_path_mass(g, theta, i, j, 15)
                worst = max(worst, abs(m.z[i, j] - e.mass))
                e = oracle.enumerate_path_mass(g, theta, i, j, 15, hitting=True)
                worst_h = max(worst_h, abs(m.z_h[i, j] - e.mass))
        results.append(("Z vs path enumeration", worst <= bound, f"max err {worst:.3g}, bound {bound:.3g}"))
        results.append(("Z_h vs hitting enumeration", worst_h <= bound, f"max err {worst_h:.3g}, bound {bound:.3g}"))

    worst = max(np.max(np.abs(hitting_column_direct(m, j) - m.z_h[:, j])) for j in range(n))
    results.append(("hitting column vs Z_h", worst <= 1e-9, f"max err {worst:.3g}"))

    sums = []
    for fn in (regular_probabilities, hitting_probabilities):
        for inc in (True, False):
            sums.append(abs(fn(m, inc).p.sum() - 1.0))
    results.append(("probabilities sum to 1", max(sums) <= 1e-10, f"max dev {max(sums):.3g}"))

    phi = potential_matrix(m)
    rec = potentials_by_recurrence(m)
    fin = np.isfinite(phi)
    worst = float(np.max(np.abs(phi[fin] - rec[fin]))) if fin.any() else 0.0
    results.append(("recurrence vs dense potentials", worst <= 1e-8, f"max err {worst:.3g}"))

    for d in (surprisal_distance(m), potential_distance(m)):
        a = d.d
        with np.errstate(invalid="ignore"):
            via = np.min(a[:, :, None] + a[None, :, :], axis=1)
        ok = bool(
            np.all(a >= 0)
            and np.all(np.diag(a) == 0)
            and np.array_equal(a, a.T)
            and np.all(a[~np.eye(n, dtype=bool)] > 0)
            and np.all(a <= via + 1e-9)
        )
        results.append((f"{d.measure} distance is a metric", ok, ""))
    return results


def cmd_check(g, args):
    results = run_checks(g, args.theta)

    def writer(fh):
        for name, ok, detail in results:
            fh.write(f"{'PASS' if ok else 'FAIL'}\t{name}\t{detail}\n")

    _write(args, writer)
    return 0 if all(ok for _, ok, _ in results) else 2


def cmd_ssl(g, args):
    from .semisupervised import evaluate, load_labels

    with open(args.labels) as fh:
        ds = load_labels(fh, g)
    report = evaluate(ds, args.measure, args.labeling_rate, dims=args.dims, seed=args.seed)
    if args.output is None:
        report.write(sys.stdout, sys.stdout)
    else:
        folds = args.output.with_name(args.output.name + ".folds.tsv")
        with open(args.output, "w") as rec, open(folds, "w") as det:
            report.write(rec, det)
    return 0


COMMANDS = {
    "probs": cmd_probs,
    "dist": cmd_dist,
    "kernel": cmd_kernel,
    "embed": cmd_embed,
    "check": cmd_check,
    "ssl": cmd_ssl,
}


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        with open(args.input) as fh:
            g = load_edge_list(fh)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 1
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", UnderflowWarning)
            warnings.showwarning = lambda msg, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            return COMMANDS[args.command](g, args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
