"""Command-line front end.

Five subcommands: ``simulate`` writes a synthetic epoch dataset
(manifest + one CSV per epoch), ``fsratio`` computes per-epoch band
ratios with optional bootstrap intervals, ``eqtest`` runs pairwise
spectra-equality tests, ``coherence`` reports band-averaged squared
coherence, and ``report`` condenses a ratio table into pre/post summary
tables.

Conventions shared by all commands: outputs are staged in a temporary
directory and moved into place only on success, so a failing run leaves
no partial files; every run writes ``run_record.json`` capturing the
configuration and library versions; analysis numbers are printed with 6
significant digits; errors exit with status 1 and a single
machine-parsable line ``specband-error code=... message="..."`` on
stderr.  The seed falls back to the SPECBAND_SEED environment variable
when a command needs one and no --seed is given.
"""

import argparse
import csv
import json
import os
import shutil
import sys
import tempfile

import numpy as np
import scipy

from . import __version__
from .bootstrap import BootstrapConfig
from .core import Band, Kernel, band_to_radians, load_epoch_dataset
from .errors import SpecbandError
from .fsratio import summarize_values
from .pipeline import (analyze_dataset, coherence_dataset, default_workers,
                       pairwise_tests)
from .simulate import SCHEME_NAMES, SchemeConfig, generate_scheme

#: The six cycles-scale bands used by the simulation tables.
DEFAULT6_BANDS = tuple(
    Band(lo / 100.0, (lo + 8) / 100.0, "cycles")
    for lo in range(0, 48, 8)
)

#: Named electrophysiology bands in hertz.
NEURO_BANDS = (
    Band(4.0, 8.0, "hertz"),
    Band(8.0, 12.0, "hertz"),
    Band(12.0, 30.0, "hertz"),
    Band(30.0, 50.0, "hertz"),
)

_UNIT_ALIASES = {"radians": "radians", "rad": "radians",
                 "cycles": "cycles", "cyc": "cycles",
                 "hertz": "hertz", "hz": "hertz"}


def _fmt(x):
    """6-significant-digit rendering used for every analysis number."""
    return f"{float(x):.6g}"


def parse_band(text):
    """Parse one ``lo:hi[:unit]`` band (unit defaults to radians)."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"band {text!r} is not of the form lo:hi[:unit]")
    lo, hi = float(parts[0]), float(parts[1])
    unit = "radians" if len(parts) == 2 else parts[2].strip().lower()
    if unit not in _UNIT_ALIASES:
        raise ValueError(f"unknown band unit {parts[2]!r}")
    return Band(lo, hi, _UNIT_ALIASES[unit])


def parse_band_set(text):
    """Parse ``default6``, ``neuro``, or comma-separated custom bands."""
    name = text.strip().lower()
    if name == "default6":
        return list(DEFAULT6_BANDS)
    if name == "neuro":
        return list(NEURO_BANDS)
    bands = [parse_band(item) for item in text.split(",") if item.strip()]
    if not bands:
        raise ValueError("no bands given")
    return bands


def parse_pairs(text):
    """Parse ``i:j[,k:l...]`` into a list of integer id pairs."""
    pairs = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        if len(parts) != 2:
            raise ValueError(f"pair {item!r} is not of the form i:j")
        pairs.append((int(parts[0]), int(parts[1])))
    if not pairs:
        raise ValueError("no epoch pairs given")
    return pairs


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("SPECBAND_SEED")
    if env is not None:
        return int(env)
    return 0


def _resolve_kernel(args):
    """Kernel from --kernel/--span-m/--bandwidth-h; None means per-epoch
    default (flat kernel, m = ceil(sqrt(T)))."""
    variant = getattr(args, "kernel", None)
    span_m = getattr(args, "span_m", None)
    bandwidth_h = getattr(args, "bandwidth_h", None)
    if span_m is not None and bandwidth_h is not None:
        raise ValueError("give only one of --span-m and --bandwidth-h")
    if variant is None:
        if bandwidth_h is not None:
            variant = "bartlett_priestley"
        elif span_m is not None:
            variant = "daniell"
        else:
            return None
    if variant == "daniell":
        if bandwidth_h is not None:
            raise ValueError("--bandwidth-h applies to bartlett_priestley only")
        return Kernel.daniell(span_m) if span_m is not None else None
    if span_m is not None:
        raise ValueError("--span-m applies to the daniell kernel only")
    if bandwidth_h is None:
        return "bp-default"
    return Kernel.bartlett_priestley(bandwidth_h)


def _concrete_kernel(kernel, epochs):
    """Resolve the parsed kernel spec against the dataset.

    None stays None (the pipeline applies the per-epoch flat default);
    "bp-default" becomes the quadratic kernel with h = T**-0.4 for the
    dataset's epoch length.
    """
    if kernel == "bp-default":
        return Kernel.default_bartlett_priestley(epochs[0].n_samples)
    return kernel


def _kernel_record(kernel):
    if kernel is None:
        return {"variant": "daniell", "span_m": "auto",
                "bandwidth": "auto(ceil(sqrt(T)))"}
    if kernel == "bp-default":
        return {"variant": "bartlett_priestley", "bandwidth_h": "auto",
                "bandwidth": "auto(T**-0.4)"}
    record = kernel.describe()
    record["bandwidth"] = (record.get("bandwidth_h")
                           or f"{2 * kernel.span_m + 1}/T")
    return record


def _check_partition(bands, rad_bands):
    """Fail if any two converted bands overlap in their interiors."""
    order = sorted(range(len(rad_bands)), key=lambda k: rad_bands[k].lo)
    for prev, cur in zip(order, order[1:]):
        if rad_bands[cur].lo < rad_bands[prev].hi - 1e-12:
            raise ValueError(
                f"bands {bands[prev].label()} and {bands[cur].label()} overlap"
            )


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_run_record(directory, command, payload):
    record = {
        "command": command,
        "versions": {
            "specband": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }
    record.update(payload)
    path = os.path.join(directory, "run_record.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _staged_outputs(out_dir, build):
    """Run ``build(tmpdir)``, then move the produced files into out_dir.

    Nothing lands in out_dir unless ``build`` succeeds, so failed runs
    leave no partial outputs.
    """
    out_dir = os.path.abspath(out_dir)
    parent = os.path.dirname(out_dir) or "."
    os.makedirs(parent, exist_ok=True)
    tmp = tempfile.mkdtemp(prefix=".specband-stage-", dir=parent)
    try:
        build(tmp)
        os.makedirs(out_dir, exist_ok=True)
        for name in sorted(os.listdir(tmp)):
            os.replace(os.path.join(tmp, name), os.path.join(out_dir, name))
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def _load_dataset(args):
    epochs = load_epoch_dataset(args.manifest, header=args.header)
    if not epochs:
        raise ValueError(f"{args.manifest}: dataset has no epochs")
    return epochs


def _cmd_simulate(args):
    seed = _resolve_seed(args)
    overrides = {}
    if args.epochs is not None:
        overrides["N"] = args.epochs
    if args.length is not None:
        overrides["T"] = args.length
    if args.changepoint is not None:
        overrides["changepoint"] = args.changepoint
    if args.theta_pre is not None:
        overrides["theta_pre"] = args.theta_pre
    if args.theta_post is not None:
        overrides["theta_post"] = args.theta_post
    if args.rho is not None:
        overrides["rho"] = args.rho
    if args.fixed_p is not None:
        overrides["fixed_p"] = args.fixed_p
    if args.dim_min is not None or args.dim_max is not None:
        lo = 2 if args.dim_min is None else args.dim_min
        hi = 30 if args.dim_max is None else args.dim_max
        overrides["dim_range"] = (lo, hi)
    if args.sampling_rate is not None:
        overrides["sampling_rate_hz"] = args.sampling_rate
    cfg = SchemeConfig.for_scheme(args.scheme, seed, **overrides)
    epochs = generate_scheme(cfg)

    def build(tmp):
        entries = []
        for series in epochs:
            name = f"epoch_{series.epoch_id:04d}.csv"
            np.savetxt(os.path.join(tmp, name), series.data,
                       delimiter=",", fmt="%.17g")
            entries.append({"id": series.epoch_id, "path": name})
        manifest = {
            "scheme": cfg.scheme,
            "seed": cfg.seed,
            "N": cfg.N,
            "T": cfg.T,
            "changepoint": cfg.changepoint,
            "sampling_rate_hz": cfg.sampling_rate_hz,
            "epochs": entries,
        }
        with open(os.path.join(tmp, "manifest.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
        _write_run_record(tmp, "simulate", {
            "seed": seed,
            "kernel": None,
            "scheme_config": {
                "scheme": cfg.scheme, "N": cfg.N, "T": cfg.T,
                "dim_range": list(cfg.dim_range),
                "xi_range": list(cfg.xi_range),
                "theta_pre": cfg.theta_pre, "theta_post": cfg.theta_post,
                "changepoint": cfg.changepoint, "rho": cfg.rho,
                "fixed_p": cfg.fixed_p,
                "sampling_rate_hz": cfg.sampling_rate_hz,
            },
        })

    _staged_outputs(args.out, build)
    print(f"wrote {len(epochs)} epochs (T={cfg.T}) to {args.out}")
    return 0


def _cmd_fsratio(args):
    bands = parse_band_set(args.bands)
    kernel = _resolve_kernel(args)
    epochs = _load_dataset(args)
    rate = epochs[0].sampling_rate_hz
    rad_bands = [band_to_radians(b, rate) for b in bands]
    if args.partition_check:
        _check_partition(bands, rad_bands)

    bootstrap = None
    seed = _resolve_seed(args)
    if args.bootstrap is not None:
        bootstrap = BootstrapConfig(
            replications_B=args.bootstrap,
            block_length=args.block,
            confidence_level=args.level,
            seed=seed,
            method=args.block_method,
        )
    per_epoch = analyze_dataset(epochs, bands,
                                kernel=_concrete_kernel(kernel, epochs),
                                bootstrap=bootstrap, workers=args.threads)

    rows = []
    for series, results in zip(epochs, per_epoch):
        for band, res in zip(bands, results):
            ci_lo = "" if res.ci is None else _fmt(res.ci[0])
            ci_hi = "" if res.ci is None else _fmt(res.ci[1])
            rows.append([series.epoch_id, _fmt(band.lo), _fmt(band.hi),
                         band.unit, _fmt(res.ratio), ci_lo, ci_hi])

    def build(tmp):
        _write_csv(os.path.join(tmp, "ratios.csv"),
                   ["epoch_id", "band_lo", "band_hi", "unit", "ratio",
                    "ci_lower", "ci_upper"], rows)
        _write_run_record(tmp, "fsratio", {
            "input": args.manifest,
            "bands": [b.label() for b in bands],
            "kernel": _kernel_record(kernel),
            "bootstrap": None if bootstrap is None else bootstrap.describe(),
            "seed": seed,
            "partition_check": bool(args.partition_check),
        })

    _staged_outputs(args.out, build)
    print(f"wrote {len(rows)} ratio rows "
          f"({len(epochs)} epochs x {len(bands)} bands) to "
          f"{os.path.join(args.out, 'ratios.csv')}")
    return 0


def _cmd_eqtest(args):
    pairs = parse_pairs(args.pairs)
    band = parse_band(args.band)
    kernel = _resolve_kernel(args)
    epochs = _load_dataset(args)
    by_id = {series.epoch_id: series for series in epochs}
    # None means the test's own default (quadratic kernel, h = T**-0.4)
    kernel_obj = None if kernel in (None, "bp-default") \
        else _concrete_kernel(kernel, epochs)
    results = pairwise_tests(by_id, pairs, band, kernel=kernel_obj,
                             workers=args.threads)
    rows = [[res.epoch_ids[0], res.epoch_ids[1], band.label(),
             _fmt(res.d_hat), _fmt(res.z), _fmt(res.p_value)]
            for res in results]

    def build(tmp):
        _write_csv(os.path.join(tmp, "eqtest.csv"),
                   ["epoch_i", "epoch_j", "band", "d_hat", "z", "p_value"],
                   rows)
        _write_run_record(tmp, "eqtest", {
            "input": args.manifest,
            "band": band.label(),
            "pairs": [f"{i}:{j}" for i, j in pairs],
            "kernel": _kernel_record("bp-default" if kernel is None
                                     else kernel),
            "seed": None,
        })

    _staged_outputs(args.out, build)
    print(f"wrote {len(rows)} test rows to "
          f"{os.path.join(args.out, 'eqtest.csv')}")
    return 0


def _cmd_coherence(args):
    bands = parse_band_set(args.bands)
    kernel = _resolve_kernel(args)
    epochs = _load_dataset(args)
    per_epoch = coherence_dataset(epochs, bands,
                                  kernel=_concrete_kernel(kernel, epochs),
                                  prewhitened=args.prewhiten,
                                  workers=args.threads)
    rows = []
    for series, results in zip(epochs, per_epoch):
        for band, res in zip(bands, results):
            rows.append([series.epoch_id, band.label(),
                         _fmt(res.mean_offdiag_coherence)])

    def build(tmp):
        _write_csv(os.path.join(tmp, "coherence.csv"),
                   ["epoch_id", "band", "mean_offdiag_coherence"], rows)
        _write_run_record(tmp, "coherence", {
            "input": args.manifest,
            "bands": [b.label() for b in bands],
            "kernel": _kernel_record(kernel),
            "prewhiten": bool(args.prewhiten),
            "seed": None,
        })

    _staged_outputs(args.out, build)
    print(f"wrote {len(rows)} coherence rows to "
          f"{os.path.join(args.out, 'coherence.csv')}")
    return 0


def _read_ratio_table(path):
    if os.path.isdir(path):
        path = os.path.join(path, "ratios.csv")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no ratio rows")
    return rows


def _cmd_report(args):
    rows = _read_ratio_table(args.input)
    bands = []
    grouped = {}
    for row in rows:
        key = (row["band_lo"], row["band_hi"], row["unit"])
        if key not in grouped:
            grouped[key] = []
            bands.append(key)
        ci = None
        if row.get("ci_lower") and row.get("ci_upper"):
            ci = (float(row["ci_lower"]), float(row["ci_upper"]))
        grouped[key].append((int(row["epoch_id"]), float(row["ratio"]), ci))

    def table(selector):
        out = []
        for key in bands:
            sel = [(r, ci) for eid, r, ci in grouped[key] if selector(eid)]
            if not sel:
                raise ValueError(
                    f"split {args.split} leaves no epochs on one side")
            values = [r for r, _ in sel]
            cis = [ci for _, ci in sel]
            summary = summarize_values(values,
                                       cis if all(c is not None for c in cis)
                                       else None)
            out.append([key[0], key[1], key[2], len(values),
                        _fmt(summary.mean), _fmt(summary.median),
                        _fmt(summary.sd), _fmt(summary.ci_lower),
                        _fmt(summary.ci_upper)])
        return out

    header = ["band_lo", "band_hi", "unit", "n_epochs", "mean", "median",
              "sd", "ci_lower", "ci_upper"]
    pre = table(lambda eid: eid <= args.split)
    post = table(lambda eid: eid > args.split)

    def build(tmp):
        _write_csv(os.path.join(tmp, "summary_pre.csv"), header, pre)
        _write_csv(os.path.join(tmp, "summary_post.csv"), header, post)
        _write_run_record(tmp, "report", {
            "input": args.input,
            "split": args.split,
            "seed": None,
            "kernel": None,
        })

    _staged_outputs(args.out, build)
    print(f"wrote summary_pre.csv and summary_post.csv "
          f"(split at epoch {args.split}) to {args.out}")
    return 0


class _Parser(argparse.ArgumentParser):
    """Parser that reports bad usage on one machine-parsable line."""

    def error(self, message):
        _print_error("ArgumentError", message)
        raise SystemExit(1)


def _print_error(code, message):
    text = " ".join(str(message).split()).replace('"', "'")
    print(f'specband-error code={code} message="{text}"', file=sys.stderr)


def _add_common_io(sub, bands_default="default6"):
    sub.add_argument("--in", dest="manifest", required=True,
                     help="epoch dataset manifest (JSON)")
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--header", action="store_true",
                     help="epoch CSVs carry one header line")
    sub.add_argument("--threads", type=int, default=None,
                     help=f"worker processes "
                          f"(default: all {default_workers()} cores)")
    if bands_default is not None:
        sub.add_argument("--bands", default=bands_default,
                         help="default6, neuro, or lo:hi[:unit],...")


def _add_kernel_flags(sub):
    sub.add_argument("--kernel", choices=["daniell", "bartlett_priestley"],
                     default=None,
                     help="smoothing kernel (default daniell)")
    sub.add_argument("--span-m", type=int, default=None,
                     help="daniell half-span m (default ceil(sqrt(T)))")
    sub.add_argument("--bandwidth-h", type=float, default=None,
                     help="bartlett_priestley bandwidth h (default T**-0.4)")


def build_parser():
    parser = _Parser(prog="specband",
                     description="Frequency-band analysis of multivariate "
                                 "epoch time series.")
    parser.add_argument("--version", action="version",
                        version=f"specband {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sim = commands.add_parser("simulate", help="generate a synthetic dataset")
    sim.add_argument("--scheme", required=True, choices=list(SCHEME_NAMES))
    sim.add_argument("--out", required=True)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--epochs", type=int, default=None,
                     help="epoch count N (default 500; 600 for ex21*)")
    sim.add_argument("--length", type=int, default=None,
                     help="epoch length T (default 1000)")
    sim.add_argument("--changepoint", type=int, default=None)
    sim.add_argument("--theta-pre", type=float, default=None)
    sim.add_argument("--theta-post", type=float, default=None)
    sim.add_argument("--rho", type=float, default=None)
    sim.add_argument("--fixed-p", type=int, default=None)
    sim.add_argument("--dim-min", type=int, default=None)
    sim.add_argument("--dim-max", type=int, default=None)
    sim.add_argument("--sampling-rate", type=float, default=None)
    sim.set_defaults(func=_cmd_simulate)

    fsr = commands.add_parser("fsratio", help="per-epoch band ratios")
    _add_common_io(fsr)
    _add_kernel_flags(fsr)
    fsr.add_argument("--bootstrap", type=int, default=None, metavar="B",
                     help="attach percentile intervals from B replicates")
    fsr.add_argument("--level", type=float, default=0.95)
    fsr.add_argument("--block", default="auto",
                     help="expected block length, or 'auto'")
    fsr.add_argument("--block-method", choices=["stationary", "fixed"],
                     default="stationary")
    fsr.add_argument("--seed", type=int, default=None)
    fsr.add_argument("--partition-check", action="store_true",
                     help="fail if bands overlap")
    fsr.set_defaults(func=_cmd_fsratio)

    eqt = commands.add_parser("eqtest", help="pairwise spectra-equality tests")
    _add_common_io(eqt, bands_default=None)
    _add_kernel_flags(eqt)
    eqt.add_argument("--pairs", required=True,
                     help="epoch id pairs, e.g. 1:2,5:300")
    eqt.add_argument("--band", required=True,
                     help="test band lo:hi[:unit]")
    eqt.set_defaults(func=_cmd_eqtest)

    coh = commands.add_parser("coherence",
                              help="band-averaged squared coherence")
    _add_common_io(coh)
    _add_kernel_flags(coh)
    coh.add_argument("--prewhiten", action="store_true",
                     help="remove lag-0 correlation first")
    coh.set_defaults(func=_cmd_coherence)

    rep = commands.add_parser("report", help="pre/post summary tables")
    rep.add_argument("--in", dest="input", required=True,
                     help="ratios.csv or its directory")
    rep.add_argument("--out", required=True)
    rep.add_argument("--split", type=int, default=249,
                     help="last epoch id of the pre range (default 249)")
    rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecbandError as exc:
        _print_error(exc.code(), exc)
        return 1
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        _print_error(type(exc).__name__, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
