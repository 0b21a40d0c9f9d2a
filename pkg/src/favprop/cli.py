"""
Command-line front end: ``favprop <command> [options]``.

Commands write figure-ready tables (see :mod:`favprop.tables`) plus a
``<stem>.manifest.json`` sidecar recording the resolved parameters.  Exit
status is 0 on success, 1 when a report finds a failed check, and 2 on
usage errors.

Options may also come from ``--config FILE`` with one ``key=value`` per line
(keys are option names without the leading dashes); command-line flags win.
The default output directory is taken from ``$FAVPROP_OUTPUT_DIR``.
"""

import argparse
import json
import os
import sys
import time
from decimal import Decimal, localcontext
from pathlib import Path

import numpy as np

from . import __version__, thresholds as th
from .channels import ChannelModelSpec
from .montecarlo import QUANTILES, EnsembleConfig, run_ensemble, variance_study
from .occupancy import drop_pmf, simulate_drop, total_variation
from .tables import read_table, sidecar, write_table

OUTPUT_DIR_ENV = "FAVPROP_OUTPUT_DIR"
PRESETS = {"100/10": (100, 10), "200/20": (200, 20)}
EXACT_DIGITS = 12


class UsageError(Exception):
    pass


def _decimal(frac, digits=EXACT_DIGITS):
    with localcontext() as ctx:
        ctx.prec = digits
        return Decimal(frac.numerator) / Decimal(frac.denominator)


def _quantile_row(x):
    x = np.asarray(x, dtype=float)
    row = [int(x.size), float(np.mean(x)), float(np.var(x, ddof=1)) if x.size > 1 else 0.0]
    return row + [float(np.quantile(x, q)) for q in QUANTILES.values()]


QUANTILE_COLUMNS = ["count", "mean", "variance", *QUANTILES]


# -- commands ---------------------------------------------------------------

def _ensemble(args, collect):
    spec = ChannelModelSpec(args.model, spacing=args.spacing)
    cfg = EnsembleConfig(spec, args.M, args.K, rho=args.rho, trials=args.trials,
                         seed=args.seed, collect=collect)
    return run_ensemble(cfg, workers=args.workers)


def cmd_singular_cdf(args, out):
    res = _ensemble(args, {"spectrum"})
    lam = res.samples["spectrum"]
    rows = [(t, r + 1, float(lam[t, r])) for t in range(lam.shape[0]) for r in range(lam.shape[1])]
    write_table(out, ["trial", "rank", "value"], rows, args.format)
    qrows = [(r + 1, *_quantile_row(lam[:, r])) for r in range(lam.shape[1])]
    qpath = write_table(sidecar(out, "quantiles"), ["rank", *QUANTILE_COLUMNS], qrows, args.format)
    return [out, qpath]


def cmd_capacity_cdf(args, out):
    res = _ensemble(args, {"capacity", "delta_c"})
    s = res.samples
    K = args.K
    cols = {
        "capacity_per_terminal": s["capacity"] / K,
        "hadamard_per_terminal": s["hadamard"] / K,
        "jensen_per_terminal": s["jensen"] / K,
        "delta_c": s["delta_c"],
    }
    rows = [(t, *(float(v[t]) for v in cols.values())) for t in range(args.trials)]
    write_table(out, ["trial", *cols], rows, args.format)
    qrows = [(name, *_quantile_row(v[~np.isnan(v)])) for name, v in cols.items()]
    qpath = write_table(sidecar(out, "quantiles"), ["metric", *QUANTILE_COLUMNS], qrows, args.format)
    return [out, qpath]


def cmd_drop_prob(args, out):
    dist = drop_pmf(args.M, args.K)
    mc = None
    if args.mc_trials:
        mc = simulate_drop(args.M, args.K, args.mc_trials, seed=args.seed, workers=args.workers)
    rows = [(n, _decimal(p), None if mc is None else float(mc[n])) for n, p in enumerate(dist.pmf)]
    write_table(out, ["n", "p_exact", "p_mc"], rows, args.format)
    tv = None if mc is None else total_variation(dist.pmf_float, mc)
    summary = [(args.M, args.K, _decimal(dist.mean), _decimal(dist.expected_mean()),
                args.mc_trials or None, tv)]
    spath = write_table(sidecar(out, "summary"),
                        ["M", "K", "mean_exact", "mean_closed_form", "mc_trials", "tv_distance"],
                        summary, args.format)
    return [out, spath]


def cmd_variance_check(args, out):
    rows = variance_study(args.model, args.M_list, args.trials, args.seed,
                          spacing=args.spacing, workers=args.workers)
    cols = ["M", "var_ip_sample", "var_ip_predicted", "var_ipsq_sample", "var_ipsq_predicted",
            "ratio_ip", "ratio_ipsq"]
    table = [(r.M, r.var_ip_sample, r.var_ip_predicted, r.var_ipsq_sample,
              r.var_ipsq_predicted, r.ratio_ip, r.ratio_ipsq) for r in rows]
    write_table(out, cols, table, args.format)
    return [out]


# -- report -----------------------------------------------------------------

def _check(results, name, ok, detail, path):
    status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
    results.append({"criterion": name, "status": status, "file": str(path), "detail": detail})


def _report_singular(params, path, out):
    cols, rows = read_table(path)
    K = params["K"]
    values = np.array([r[2] for r in rows], dtype=float)
    if values.size % K:
        raise ValueError("row count is not a multiple of K")
    lam = np.sort(values.reshape(-1, K), axis=1)
    _check(out, "spectrum-nonnegative", bool(np.all(lam >= 0)), f"min {lam.min():.6g}", path)
    model = params["model"]
    frac = float(np.mean(lam[:, 0] < th.SMALL_EIG_RATIO * np.median(lam, axis=1)))
    preset = (params["M"], K) == th.SHAPE_PRESET
    if model in th.SMALL_EIG_FRACTION_MIN:
        bound = th.SMALL_EIG_FRACTION_MIN[model]
        _check(out, "small-eigenvalue-fraction", frac > bound if preset else None,
               f"fraction {frac:.4f} (need > {bound})", path)
    if model in th.SMALL_EIG_FRACTION_MAX:
        bound = th.SMALL_EIG_FRACTION_MAX[model]
        _check(out, "small-eigenvalue-fraction", frac < bound if preset else None,
               f"fraction {frac:.4f} (need < {bound})", path)


def _report_capacity(params, path, out):
    cols, rows = read_table(path)
    bad = []
    for r in rows:
        t, cap, had, jen = r[0], r[1], r[2], r[3]
        if cap > had + th.CHAIN_SLACK or had > jen + th.CHAIN_SLACK:
            bad.append(t)
    detail = "all rows" if not bad else f"violated at trial {bad[0]} ({len(bad)} rows)"
    _check(out, "bound-chain", not bad, detail, path)
    dc = np.array([r[4] for r in rows if r[4] is not None], dtype=float)
    dc = dc[~np.isnan(dc)]
    model = params["model"]
    preset = (params["M"], params["K"]) == th.SHAPE_PRESET
    if model in th.DELTA_C_MEDIAN_MAX and dc.size:
        med, bound = float(np.median(dc)), th.DELTA_C_MEDIAN_MAX[model]
        _check(out, "delta-c-median", med < bound if preset else None,
               f"median {med:.6g} (need < {bound})", path)
    if model in th.DELTA_C_Q90_MAX and dc.size:
        q90, bound = float(np.quantile(dc, 0.9)), th.DELTA_C_Q90_MAX[model]
        _check(out, "delta-c-q90", q90 < bound if preset else None,
               f"q90 {q90:.6g} (need < {bound})", path)


def _report_drop(params, path, out):
    cols, rows = read_table(path)
    M, K = params["M"], params["K"]
    pmf = [float(r[1]) for r in rows]
    total = sum(pmf)
    _check(out, "pmf-normalized", abs(total - 1) <= K * 10.0 ** (1 - EXACT_DIGITS),
           f"sum {total:.15g}", path)
    claim = th.DROP_CLAIMS.get((M, K))
    if claim:
        n, bound, strict = claim
        ok = pmf[n] < bound if strict else pmf[n] <= bound
        _check(out, "drop-claim", ok, f"P(N_drop={n}) = {pmf[n]:.6g} (need {'<' if strict else '<='} {bound})", path)
    mc_trials = params.get("mc_trials") or 0
    if mc_trials:
        tv = total_variation(pmf, [r[2] for r in rows])
        enough = mc_trials >= th.DROP_TV_MIN_TRIALS
        _check(out, "drop-oracle", tv < th.DROP_TV_MAX if enough else None,
               f"total variation {tv:.6g} over {mc_trials} trials", path)


def _report_variance(params, path, out):
    cols, rows = read_table(path)
    model = params["model"]
    enough = params["trials"] >= th.VARIANCE_MIN_TRIALS
    sq_band = th.VAR_IPSQ_BAND[model]
    for r in rows:
        M, ratio_ip, ratio_sq = r[0], r[5], r[6]
        _check(out, f"variance-ip[M={M}]", abs(ratio_ip - 1) <= th.VAR_IP_BAND if enough else None,
               f"ratio {ratio_ip:.4f} (band +-{th.VAR_IP_BAND})", path)
        if ratio_sq == ratio_sq:  # undefined when the prediction is 0
            _check(out, f"variance-ipsq[M={M}]", abs(ratio_sq - 1) <= sq_band if enough else None,
                   f"ratio {ratio_sq:.4f} (band +-{sq_band})", path)


REPORTERS = {
    "singular-cdf": _report_singular,
    "capacity-cdf": _report_capacity,
    "drop-prob": _report_drop,
    "variance-check": _report_variance,
}


def manifest_path(path):
    path = Path(path)
    return path.with_name(f"{path.stem}.manifest.json")


def cmd_report(args):
    if not args.inputs:
        raise UsageError("report needs at least one input file")
    loaded, broken = [], []
    for path in args.inputs:
        try:
            manifest = json.loads(manifest_path(path).read_text(encoding="utf-8"))
            if manifest["command"] not in REPORTERS:
                raise ValueError(f"unknown command {manifest['command']!r}")
            read_table(path)
            loaded.append((path, manifest))
        except (OSError, ValueError, KeyError, IndexError) as exc:
            broken.append(f"{path}: {exc}")
    if broken:
        raise UsageError("unreadable inputs:\n  " + "\n  ".join(broken))
    results = []
    for path, manifest in loaded:
        try:
            REPORTERS[manifest["command"]](manifest["parameters"], path, results)
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise UsageError(f"corrupt input {path}: {exc}")
    if args.format == "json":
        text = json.dumps(results, indent=1) + "\n"
    else:
        text = "".join(f"{r['status']} {r['criterion']} {r['file']}: {r['detail']}\n" for r in results)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 1 if any(r["status"] == "FAIL" for r in results) else 0


# -- argument handling ------------------------------------------------------

def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {s}")
    return v


def _seed(s):
    v = int(s)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive_float(s):
    v = float(s)
    if not (np.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive, got {s}")
    return v


def _m_list(s):
    try:
        values = [int(x) for x in str(s).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad M list {s!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("M list needs positive integers")
    return values


def _add_output(p, default_format="csv"):
    p.add_argument("--format", choices=["csv", "json"], default=default_format)
    p.add_argument("--out", help="output file (default: $%s/<command>.<format>)" % OUTPUT_DIR_ENV)
    p.add_argument("--config", help="key=value file with default options")


def _add_ensemble(p):
    p.add_argument("--model", choices=["rayleigh", "urlos"], default="rayleigh")
    p.add_argument("--M", type=_positive_int)
    p.add_argument("--K", type=_positive_int)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--rho", type=_positive_float, default=1.0)
    p.add_argument("--trials", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--spacing", type=_positive_float, default=0.5)
    p.add_argument("--workers", type=_positive_int, default=1)
    _add_output(p)


def build_parser():
    parser = argparse.ArgumentParser(prog="favprop", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("singular-cdf", help="Gramian eigenvalues per trial and rank")
    _add_ensemble(p)
    p = sub.add_parser("capacity-cdf", help="per-terminal capacity, bounds and delta_C per trial")
    _add_ensemble(p)

    p = sub.add_parser("drop-prob", help="exact distribution of dropped terminals")
    p.add_argument("--M", type=_positive_int)
    p.add_argument("--K", type=_positive_int)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--mc-trials", type=int, default=0)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    _add_output(p)

    p = sub.add_parser("variance-check", help="sample vs predicted inner-product variances")
    p.add_argument("--model", choices=["rayleigh", "urlos"], default="rayleigh")
    p.add_argument("--M-list", type=_m_list, default="50,100,200")
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--spacing", type=_positive_float, default=0.5)
    p.add_argument("--workers", type=_positive_int, default=1)
    _add_output(p)

    p = sub.add_parser("report", help="check prior outputs against the bundled thresholds")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.add_argument("--config", help=argparse.SUPPRESS)

    p = sub.add_parser("rerun", help="repeat a run from its manifest")
    p.add_argument("manifest")
    p.add_argument("--out", help="write to this path instead of the recorded one")
    return parser


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def load_config(path):
    """Parse a ``key=value`` file; blank lines and ``#`` comments are ignored."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _apply_config(parser, argv):
    ns, _ = parser.parse_known_args(argv)
    path = getattr(ns, "config", None)
    if not path:
        return
    sub = _subparser(parser, ns.command)
    dests = {a.dest for a in sub._actions} - {"help", "config", "out", "inputs"}
    try:
        values = load_config(path)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}")
    unknown = set(values) - dests
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    sub.set_defaults(**values)


def _resolve(args):
    if getattr(args, "preset", None):
        M, K = PRESETS[args.preset]
        args.M = args.M or M
        args.K = args.K or K
    if hasattr(args, "M") and args.M is None:
        args.M = 100
    if hasattr(args, "K") and args.K is None:
        args.K = 10
    if args.command == "drop-prob":
        if args.K > args.M:
            raise UsageError(f"--K ({args.K}) must not exceed --M ({args.M})")
        if args.mc_trials < 0:
            raise UsageError("--mc-trials must be >= 0")
    if args.command == "variance-check":
        seen = []
        for M in args.M_list:
            if M not in seen:
                seen.append(M)
        if len(seen) != len(args.M_list):
            print(f"warning: duplicate entries removed from --M-list: {args.M_list} -> {seen}",
                  file=sys.stderr)
        args.M_list = seen
        if args.model == "urlos" and args.spacing != 0.5:
            raise UsageError("the UR-LoS variance laws hold only for --spacing 0.5")
    if args.command in ("singular-cdf", "capacity-cdf") and args.K < 1:
        raise UsageError("--K must be positive")
    if args.out is None:
        base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
        args.out = str(base / f"{args.command}.{args.format}")


RUNNERS = {
    "singular-cdf": cmd_singular_cdf,
    "capacity-cdf": cmd_capacity_cdf,
    "drop-prob": cmd_drop_prob,
    "variance-check": cmd_variance_check,
}

_SKIP = {"command", "config", "preset", "workers", "out"}


def _canonical_argv(args):
    argv = [args.command]
    for key, value in sorted(vars(args).items()):
        if key in _SKIP:
            continue
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        argv += ["--" + key.replace("_", "-"), str(value)]
    return argv + ["--out", str(Path(args.out).resolve())]


def _run(args):
    start = time.perf_counter()
    outputs = RUNNERS[args.command](args, Path(args.out))
    params = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    manifest = {
        "command": args.command,
        "parameters": params,
        "seed": args.seed,
        "version": __version__,
        "duration_s": time.perf_counter() - start,
        "outputs": [str(Path(p).resolve()) for p in outputs],
        "argv": _canonical_argv(args),
    }
    manifest_path(args.out).write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    return 0


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if args.command == "rerun":
            manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
            new_argv = list(manifest["argv"])
            if args.out:
                new_argv[new_argv.index("--out") + 1] = args.out
            return main(new_argv)
        if args.command == "report":
            return cmd_report(args)
        _resolve(args)
        return _run(args)
    except UsageError as exc:
        print(f"favprop: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"favprop: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
