"""Command-line interface.

Subcommands: exact, rankdist, asympt, saddle, sample, verify. CSV output
starts with ``#`` metadata lines (version, command line, seed, timestamp)
followed by a header row; JSON documents carry a ``meta`` object; JSON-lines
dumps put it on the first line. Set SOURCE_DATE_EPOCH to pin the timestamp
and make reruns byte-identical.

Exit codes: 0 success, 1 a mandatory check failed, 2 usage error,
3 resource error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import gzip
import io
import json
import math
import os
import secrets
import shlex
import sys

from . import __version__
from .errors import BoundaryError, DomainError, ResourceError, UsageError

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _seed(text):
    if text == "auto":
        return "auto"
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("seed must be a non-negative integer or 'auto'")
    if v < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return v


def _timestamp():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = dt.datetime.fromtimestamp(int(epoch), dt.timezone.utc) if epoch else dt.datetime.now(dt.timezone.utc)
    return t.isoformat(timespec="seconds")


class _Run:
    """Metadata shared by every output of one invocation."""

    def __init__(self, argv, args):
        self.argv = argv
        self.args = args
        self.started = _timestamp()
        self.seed = None
        if getattr(args, "seed", None) == "auto":
            self.seed = secrets.randbits(63)
            print(f"seed: {self.seed}", file=sys.stderr)
        elif getattr(args, "seed", None) is not None:
            self.seed = args.seed

    def meta(self, **extra):
        d = {"version": __version__, "command": "oddunimodal " + shlex.join(self.argv),
             "seed": self.seed, "started": self.started, "finished": _timestamp()}
        d.update(extra)
        return d


def _open_out(path, gz=False):
    if path in (None, "-"):
        return _Stdout()
    if gz or str(path).endswith(".gz"):
        return io.TextIOWrapper(gzip.GzipFile(path, "wb", mtime=0), encoding="utf-8", newline="")
    return open(path, "w", encoding="utf-8", newline="")


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()
        return False


def _write_csv(path, meta, header, rows):
    with _open_out(path) as fh:
        for k in sorted(meta):
            fh.write(f"# {k}: {json.dumps(meta[k], sort_keys=True)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_json(path, meta, body):
    doc = {"meta": meta}
    doc.update(body)
    with _open_out(path) as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(x):
    if hasattr(x, "item"):
        return x.item()
    if hasattr(x, "tolist"):
        return x.tolist()
    raise TypeError(f"cannot serialize {type(x).__name__}")


# ---------------------------------------------------------------------------
# commands

def cmd_exact(args, run):
    from .exact import ou_counts, rank_moments

    if args.n_max < 0:
        raise UsageError("--n-max must be >= 0")
    moms = args.moments or [0]
    if any(j < 0 for j in moms):
        raise UsageError("moments must be non-negative")
    header = ["n"] + ["ou" if j == 0 else f"ou_{j}" for j in moms]
    even_top = max([j for j in moms if j % 2 == 0], default=0)
    table = rank_moments(max(args.n_max, 1), even_top) if even_top else None
    counts = ou_counts(max(args.n_max, 1))
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        row = [n]
        for j in moms:
            if j == 0:
                row.append(int(counts[n]))
            elif j % 2:
                row.append(0)  # rank symmetry
            else:
                row.append(int(table[j][n]))
        rows.append(row)
    if args.format == "json":
        _write_json(args.output, run.meta(), {"columns": header, "rows": rows})
    else:
        _write_csv(args.output, run.meta(), header, rows)
    return EXIT_OK


def cmd_rankdist(args, run):
    from .exact import rank_distribution

    dist = rank_distribution(args.n)
    rows = [[r, dist.counts[r]] for r in dist.support()]
    meta = run.meta(n=args.n, total=dist.total)
    if args.format == "json":
        _write_json(args.output, meta, {"n": args.n, "counts": {str(r): c for r, c in rows}})
    else:
        _write_csv(args.output, meta, ["rank", "count"], rows)
    return EXIT_OK


def cmd_asympt(args, run):
    from .asympt import QuadratureSpec, moment_asymptotic
    from .exact import rank_moments

    ells = args.ell or [0]
    bad = [e for e in ells if e % 2 or e < 0]
    if bad:
        raise UsageError(f"ell={bad[0]}: odd rank moments vanish by the rank symmetry "
                         "m -> -m; only even ell are evaluated")
    ns = args.n
    if not ns or min(ns) < 1:
        raise UsageError("--n needs positive integers")
    quad = QuadratureSpec(nodes=args.nodes)
    mom = rank_moments(max(ns), max(ells))
    rows = []
    for n in ns:
        for ell in ells:
            exact = int(mom[ell][n])
            k_max = args.k_max
            if k_max is not None:
                k_max = min(k_max, max(1, math.isqrt(n)))
            res = moment_asymptotic(n, ell, k_max=k_max, quad=quad, variant=args.variant)
            ratio = math.exp(res.log_value - _log_int(exact)) if exact > 0 else float("nan")
            rows.append([n, ell, exact, repr(res.value), repr(ratio)])
    meta = run.meta(quadrature={"rule": quad.rule, "nodes": quad.nodes,
                                "endpoint_mode": quad.endpoint_mode},
                    k_max=args.k_max, variant=args.variant)
    header = ["n", "ell", "exact", "asymptotic", "ratio"]
    if args.format == "json":
        _write_json(args.output, meta, {"columns": header, "rows": rows})
    else:
        _write_csv(args.output, meta, header, rows)
    return EXIT_OK


def _log_int(x):
    b = x.bit_length()
    return math.log(x) if b < 1000 else math.log(x >> (b - 60)) + (b - 60) * math.log(2)


def cmd_saddle(args, run):
    from .asympt import log_saddle_ou_m, peak_density, peak_lattice_r, saddle_function

    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    ms = args.m if args.m else range(0, (n - 1) // 2 + 1)
    exact = None
    if n <= args.exact_limit:
        from .exact import peak_counts

        exact = peak_counts(n)
    rows = []
    for m in ms:
        if not 0 <= 2 * m + 1 <= n:
            raise UsageError(f"peak 2m+1 = {2 * m + 1} exceeds n")
        f = saddle_function(n, m)
        ls = log_saddle_ou_m(n, m)
        row = [n, m, repr(float(peak_lattice_r(n, m))), repr(f.f0), repr(f.f1), repr(f.f2),
               repr(ls), repr(peak_density(n, m))]
        if exact is not None:
            e = int(exact[m])
            row += [e, repr(math.exp(ls - _log_int(e))) if e else "nan"]
        rows.append(row)
    header = ["n", "m", "r", "f0", "f1", "f2", "log_saddle", "peak_density"]
    if exact is not None:
        header += ["exact", "ratio"]
    _write_csv(args.output, run.meta(), header, rows)
    return EXIT_OK


def cmd_sample(args, run):
    from . import boltzmann as bz

    if args.n < 1 or args.count < 1:
        raise UsageError("--n and --count must be positive")
    params = bz.BoltzmannParams.for_size(args.n)
    extra = {"mode": args.mode, "n": args.n, "count": args.count, "q": params.q,
             "threads": args.threads}
    if args.mode == "free":
        batch = bz.sample_free_batch(params, bz.make_rng(run.seed), args.count)
    elif args.mode == "fast":
        batch = bz.sample_fast_parallel(params, run.seed, args.count, threads=args.threads,
                                        k_small=args.k_small)
    else:
        res = bz.sample_exact_batch(params, bz.make_rng(run.seed), args.count, args.max_attempts)
        batch = res.batch
        extra.update(attempts=res.attempts, acceptance_rate=res.acceptance_rate)
    out = args.output
    if args.gzip and out not in (None, "-") and not out.endswith(".gz"):
        out = out + ".gz"
    with _open_out(out, gz=args.gzip) as fh:
        bz.dump_jsonl(batch, fh, k_small=args.k_small, header=run.meta(**extra))
    return EXIT_OK


def cmd_verify(args, run):
    if args.suite == "modular":
        from .modular import jacobi_grid_report

        entries = jacobi_grid_report(k_max=args.k_max, tol=args.tol)
        ok = all(e["pass"] for e in entries if e.get("mandatory", True))
        worst = {}
        for e in entries:
            key = e["identity"]
            worst[key] = max(worst.get(key, 0.0), e["residual"])
        body = {"suite": "modular", "pass": ok, "max_residual_by_identity": worst,
                "entries": entries}
        _write_json(args.output, run.meta(tolerance=args.tol, k_max=args.k_max), body)
    else:
        if run.seed is None:
            raise UsageError("verify --suite limits needs --seed (an integer or 'auto')")
        from .stats import SuiteConfig, limit_suite

        cfg = SuiteConfig(threads=args.threads)
        report = limit_suite(args.n_list or [10**6], args.draws, run.seed, cfg)
        ok = report["pass"]
        _write_json(args.output, run.meta(), report)
    print(f"suite {args.suite}: {'pass' if ok else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="oddunimodal",
                description="Exact counts, asymptotics and random generation of odd unimodal sequences.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("csv", "json")):
        sp.add_argument("--output", "-o", default="-", help="output file (default: stdout)")
        if formats:
            sp.add_argument("--format", choices=formats, default=formats[0])

    sp = sub.add_parser("exact", help="table n, ou(n), ou_2(n), ...")
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--n-min", type=int, default=0)
    sp.add_argument("--moments", type=_int_list, default=[0], help="comma list, e.g. 0,2,4")
    common(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("rankdist", help="exact rank distribution for one n")
    sp.add_argument("--n", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_rankdist)

    sp = sub.add_parser("asympt", help="rank moments against their asymptotic series")
    sp.add_argument("--n", type=_int_list, required=True, help="comma list of sizes")
    sp.add_argument("--ell", type=_int_list, default=[0], help="comma list of even moments")
    sp.add_argument("--k-max", type=int, default=None,
                    help="largest odd k in the series (default: largest odd k <= sqrt n)")
    sp.add_argument("--nodes", type=int, default=64, help="Gauss-Legendre nodes")
    sp.add_argument("--variant", choices=("printed", "corrected"), default="printed")
    common(sp)
    sp.set_defaults(func=cmd_asympt)

    sp = sub.add_parser("saddle", help="saddle-point estimate of sequences with a given peak")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=_int_list, default=None, help="peak indices (default: all)")
    sp.add_argument("--exact-limit", type=int, default=5000,
                    help="include exact counts when n is at most this")
    common(sp, formats=None)
    sp.set_defaults(func=cmd_saddle)

    sp = sub.add_parser("sample", help="Boltzmann samples as JSON lines")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--mode", choices=("free", "fast", "exact"), default="free")
    sp.add_argument("--seed", type=_seed, required=True, help="integer, or 'auto' (logged)")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--k-small", type=int, default=10, help="small parts kept in x_small")
    sp.add_argument("--max-attempts", type=int, default=None)
    sp.add_argument("--gzip", action="store_true")
    common(sp, formats=None)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("verify", help="run a verification suite; exit 1 on failure")
    sp.add_argument("--suite", choices=("modular", "limits"), required=True)
    sp.add_argument("--seed", type=_seed, default=None, help="required for the limits suite")
    sp.add_argument("--draws", type=int, default=100_000)
    sp.add_argument("--n-list", type=_int_list, default=None)
    sp.add_argument("--k-max", type=int, default=6, help="largest k on the modular grid")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--threads", type=int, default=1)
    common(sp, formats=None)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        run = _Run(argv, args)
        return args.func(args, run)
    except (UsageError, DomainError, BoundaryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
