"""Command-line interface: ``hardedge {density,simulate,kernel,verify}``.

Exit codes: 0 success, 2 usage error, 3 numerical failure.  Every command
that writes files also writes ``<out>.manifest.json`` last, listing them.
"""
import argparse
import csv
from datetime import datetime, timezone
import json
import math
import os
from pathlib import Path
import sys

import numpy as np

from . import __version__
from . import acceptance, experiments, kernels, polya
from .complexmath import NumericalError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


def fmt(value):
    """Fixed 17-significant-digit rendering (round-trips doubles exactly)."""
    return f"{float(value):.17g}"


def parse_grid(text):
    """``lo:hi:count`` with inclusive endpoints."""
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise UsageError(f"grid must look like lo:hi:count, got {text!r}") from None
    if count < 1 or (count == 1 and lo != hi) or (count > 1 and not lo < hi):
        raise UsageError(f"grid needs lo < hi and count >= 2 (or lo == hi with count 1), got {text!r}")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError("grid bounds must be finite")
    return np.linspace(lo, hi, count)


def parse_window(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"window must look like lo:hi, got {text!r}") from None
    if not lo < hi:
        raise UsageError(f"window needs lo < hi, got {text!r}")
    return lo, hi


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get("HARDEDGE_THREADS")
    if env is None:
        return 1
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"HARDEDGE_THREADS must be an integer, got {env!r}") from None


def manifest_path(out):
    out = Path(out)
    return out.with_name(out.stem + ".manifest.json")


def _write_manifest(out, command, config, started, outputs, results=None):
    path = manifest_path(out)
    doc = {
        "command": command,
        "config": config,
        "tool_version": __version__,
        "started": started,
        "finished": _now(),
        "output_paths": [str(p) for p in outputs] + [str(path)],
    }
    if results is not None:
        doc["results"] = results
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _write_csv(path, header, rows):
    path = Path(path)
    if path.parent and not path.parent.exists():
        raise UsageError(f"output directory {path.parent} does not exist")
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


# -- commands --------------------------------------------------------------------------

def cmd_density(args):
    started = _now()
    grid = parse_grid(args.grid)
    if args.family != "ginibre":
        raise UsageError("only the ginibre family has an analytic density")
    if args.nu < 0:
        raise UsageError("--nu must be >= 0")
    spec = polya.ginibre(nu=args.nu)
    rows = []
    for a in grid:
        if a == 0:
            rho = math.inf  # logarithmic peak
        elif args.nu == 0:
            rho = kernels.ginibre_product_density(args.x, a)
        else:
            rho = kernels.product_kernel_limit(spec, args.x, a, a)
        rows.append((fmt(a), fmt(rho)))
    csv_path = _write_csv(args.out, ("a", "rho_analytic"), rows)
    config = {"x": args.x, "family": args.family, "nu": args.nu, "grid": args.grid}
    _write_manifest(args.out, "density", config, started, [csv_path])
    return EXIT_OK


def cmd_simulate(args):
    started = _now()
    lo, hi = parse_window(args.window)
    try:
        cfg = experiments.ExperimentConfig(args.ensemble, args.n, args.samples, args.x, (lo, hi), args.bins,
                                           args.seed, _threads(args.threads), args.nu, args.reference)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.reference == "finite" and cfg.n > kernels.PRODUCT_N_MAX:
        raise UsageError(f"--reference finite supports n <= {kernels.PRODUCT_N_MAX}")
    res = experiments.run_experiment(cfg)
    edges = res.bin_edges
    rows = [(fmt(edges[i]), fmt(edges[i + 1]), fmt(res.density[i]), fmt(res.analytic[i]))
            for i in range(len(res.density))]
    csv_path = _write_csv(args.out, ("bin_lo", "bin_hi", "density_mc", "density_analytic"), rows)
    results = {"l1_distance": res.l1_distance, "sup_distance": res.sup_distance, "mass": res.mass,
               "counts_total": int(res.counts.sum())}
    _write_manifest(args.out, "simulate", cfg.to_dict(), started, [csv_path], results)
    print(f"l1={fmt(res.l1_distance)} sup={fmt(res.sup_distance)}")
    return EXIT_OK


def _kernel_evaluator(args):
    mode = args.mode
    if mode in ("polya-finite", "product-finite", "gue-finite") and args.n is None:
        raise UsageError(f"--mode {mode} needs --n")
    if mode == "polya-finite":
        spec = polya.ginibre(nu=args.nu, n=args.n)
        return lambda p, q: float(kernels.polya_kernel_finite(spec, p, q))
    if mode == "polya-limit":
        spec = polya.ginibre(nu=args.nu)
        return lambda p, q: float(kernels.polya_kernel_hard_edge(spec, p, q))
    if mode == "product-finite":
        if args.n > kernels.PRODUCT_N_MAX:
            raise UsageError(f"product-finite supports n <= {kernels.PRODUCT_N_MAX}, got {args.n}")
        spec = polya.ginibre(nu=args.nu, n=args.n)
        return lambda p, q: kernels.product_kernel_finite(spec, args.x, p, q)
    if mode == "product-limit":
        spec = polya.ginibre(nu=args.nu)
        return lambda p, q: kernels.product_kernel_limit(spec, args.x, p, q)
    return lambda p, q: kernels.gue_kernel_finite(args.n, p, q, x=args.x)


def cmd_kernel(args):
    started = _now()
    a1 = parse_grid(args.a1_grid)
    a2 = parse_grid(args.a2_grid)
    if args.mode.startswith("polya") and (np.any(a1 <= 0) or np.any(a2 <= 0)):
        raise UsageError("Polya kernels need positive grid points")
    if args.mode.startswith("product") and (np.any(a1 == 0) or np.any(a2 == 0)):
        raise UsageError("product kernels are not defined at a = 0")
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be >= 1")
    fn = _kernel_evaluator(args)
    rows = []
    for p in a1:
        row = [fmt(p)]
        for q in a2:
            try:
                row.append(fmt(fn(p, q)))
            except NumericalError as exc:
                raise NumericalError(f"at a1={fmt(p)}, a2={fmt(q)}: {exc}") from exc
        rows.append(row)
    header = ["a1\\a2"] + [fmt(q) for q in a2]
    csv_path = _write_csv(args.out, header, rows)
    config = {"mode": args.mode, "n": args.n, "x": args.x, "nu": args.nu,
              "a1_grid": args.a1_grid, "a2_grid": args.a2_grid}
    _write_manifest(args.out, "kernel", config, started, [csv_path])
    return EXIT_OK


def cmd_verify(args):
    results = acceptance.run_suite(args.suite, echo=print)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failed: {', '.join(f'#{n}' for n in failed)}" if failed else ""))
    return EXIT_OK if not failed else 1


# -- parser ----------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="hardedge", description="Hard-edge kernels of products with shifted GUE.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="limiting hard-edge density on a grid")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--family", default="ginibre", choices=["ginibre"])
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--grid", required=True, help="lo:hi:count (inclusive)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("simulate", help="Monte Carlo histogram against the analytic curve")
    p.add_argument("--ensemble", default="product", choices=list(experiments.ENSEMBLES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", default="-12:12", help="lo:hi")
    p.add_argument("--bins", type=int, default=24)
    p.add_argument("--reference", default="limit", choices=["limit", "finite"])
    p.add_argument("--threads", type=int, default=None, help="defaults to $HARDEDGE_THREADS or 1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("kernel", help="kernel values on a grid")
    p.add_argument("--mode", required=True,
                   choices=["polya-finite", "polya-limit", "product-finite", "product-limit", "gue-finite"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--a1-grid", required=True)
    p.add_argument("--a2-grid", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--suite", default="fast", choices=sorted(acceptance.SUITES))
    p.set_defaults(func=cmd_verify)
    return parser


_RANGE_OPTIONS = ("--grid", "--window", "--a1-grid", "--a2-grid")


def _attach_ranges(argv):
    """Turn ``--grid -5:5:11`` into ``--grid=-5:5:11`` so argparse does not read a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _RANGE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_ranges(argv))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hardedge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"hardedge: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
