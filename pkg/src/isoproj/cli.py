"""``isoproj <command> --config <path>``: certificates and experiments to CSV.

Exit codes: 0 success, 1 certificate violation, 2 configuration error,
3 budget error.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np
from scipy import stats

from . import grassmannian as gr
from . import heisenberg as hz
from . import transversality as tv
from .config import COMMANDS, ConfigError, ExperimentConfig, load_config, parse_config
from .lab import (
    BudgetError,
    energy_estimate,
    heisenberg_projection_experiment,
    ifs_cover,
    preset,
    projection_dimension_experiment,
)
from .lab.experiments import MAX_PLANES
from .svgplot import loglog_svg

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3
MAX_SAMPLES = 10_000_000


def fmt(value) -> str:
    """CSV cell text; floats keep 17 significant digits so they round-trip."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path: str, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _summary(cfg: ExperimentConfig, **stats_) -> str:
    head = f"{cfg.command} n={cfg.n} m={cfg.m} seed={cfg.seed}"
    return " ".join([head] + [f"{k}={fmt(v)}" for k, v in stats_.items()])


def _check_samples(cfg: ExperimentConfig) -> None:
    if cfg.samples > MAX_SAMPLES:
        raise BudgetError(f"{cfg.samples} samples exceeds the budget of {MAX_SAMPLES}")


def cmd_certify(cfg: ExperimentConfig):
    _check_samples(cfg)
    rep = tv.transversality_certificate(cfg.n, cfg.m, cfg.C_T, grid=cfg.grid, samples=cfg.samples, seed=cfg.seed)
    t = rep.table
    rows = zip(range(rep.samples), t["free_norm"], t["proj_norm"], t["det"], t["margin"], t["tested"])
    header = ("sample", "free_norm", "proj_norm", "det", "margin", "tested")
    summary = _summary(cfg, C_T=rep.C_T, epsilon=rep.epsilon, L1=rep.L1, L2=rep.L2, tested=rep.tested,
                       min_margin=rep.min_margin, violations=rep.violations)
    return header, rows, summary, (EXIT_OK if rep.passed else EXIT_VIOLATION), None


def cmd_det_check(cfg: ExperimentConfig):
    _check_samples(cfg)
    n, m = cfg.n, cfg.m
    rng = np.random.default_rng([cfg.seed, n, m])
    x = rng.standard_normal((cfg.samples, 2 * n))
    closed = tv.det_closed_form(x, n, m)
    numeric = np.linalg.det(tv.gram_matrix(np.zeros((2 * n - m, m)), x))
    rel = np.abs(closed - numeric) / np.maximum(np.abs(numeric), np.finfo(float).tiny)
    rows = zip(range(cfg.samples), closed, numeric, rel)
    summary = _summary(cfg, samples=cfg.samples, max_rel_err=float(np.max(rel)))
    return ("sample", "det_closed", "det_numeric", "rel_err"), rows, summary, EXIT_OK, None


def cmd_haar_audit(cfg: ExperimentConfig):
    _check_samples(cfg)
    n, m = cfg.n, cfg.m
    rows = []
    angles = []
    for k in range(cfg.samples):
        g = gr.haar_symplectic_orthogonal(n, cfg.seed, k)
        orth, symp = gr.symplectic_defect(g)
        frame = g[:, :m]
        iso = float(np.max(np.abs(gr.pairing_matrix(frame))))
        row = [k, orth, symp, iso]
        if n == 1:
            angles.append(float(gr.line_angle(frame)))
            row.append(angles[-1])
        rows.append(row)
    header = ["sample", "orth_err", "symp_err", "iso_err"] + (["angle"] if n == 1 else [])
    worst = np.max(np.array([r[1:4] for r in rows]), axis=0)
    extra = {}
    if n == 1:
        ks = stats.kstest(np.array(angles) / np.pi, "uniform")
        extra = {"ks_stat": ks.statistic, "ks_crit_1pct": float(stats.kstwo.ppf(0.99, cfg.samples))}
    summary = _summary(cfg, samples=cfg.samples, max_orth_err=worst[0], max_symp_err=worst[1],
                       max_iso_err=worst[2], **extra)
    return header, rows, summary, EXIT_OK, None


def heisenberg_checks(n: int, m: int, seed: int, k: int) -> tuple[float, float, float, float]:
    """Decomposition, associativity, dilation and left-invariance errors for instance k."""
    V = gr.haar_sample(n, m, seed, k)
    rng = np.random.default_rng([seed, 7, k])
    p, q, r = (hz.HeisenbergPoint(rng.standard_normal(2 * n), rng.standard_normal()) for _ in range(3))
    s = float(rng.choice([0.1, 1.0, 7.0]))
    vert, hor = hz.decompose(V, p)
    back = hz.group_op(vert, hor)
    decomp = max(float(np.max(np.abs(back.z - p.z))), abs(back.t - p.t))
    lhs = hz.group_op(hz.group_op(p, q), r)
    rhs = hz.group_op(p, hz.group_op(q, r))
    assoc = max(float(np.max(np.abs(lhs.z - rhs.z))), abs(lhs.t - rhs.t))
    dil = abs(hz.heis_norm(hz.dilation(s, p)) - s * hz.heis_norm(p))
    inv = abs(hz.heis_dist(hz.group_op(r, p), hz.group_op(r, q)) - hz.heis_dist(p, q))
    return decomp, assoc, dil, inv


def cmd_heis_check(cfg: ExperimentConfig):
    _check_samples(cfg)
    rows = [(k, *heisenberg_checks(cfg.n, cfg.m, cfg.seed, k)) for k in range(cfg.samples)]
    worst = np.max(np.array([r[1:] for r in rows]), axis=0)
    summary = _summary(cfg, samples=cfg.samples, max_decomp_err=worst[0], max_assoc_err=worst[1],
                       max_dilation_err=worst[2], max_left_inv_err=worst[3])
    return ("sample", "decomp_err", "assoc_err", "dilation_err", "left_inv_err"), rows, summary, EXIT_OK, None


def _t_rule(name: str):
    if name == "graph":
        return lambda z: np.sum(np.sin(3.0 * z), axis=1)
    return None


def _experiment(cfg: ExperimentConfig, heis: bool):
    if cfg.planes > MAX_PLANES:
        raise BudgetError(f"{cfg.planes} planes exceeds the budget of {MAX_PLANES}")
    spec = preset(cfg.set_name, cfg.dimension)
    if heis:
        rep = heisenberg_projection_experiment(spec, cfg.n, cfg.m, cfg.planes, cfg.level, cfg.seed,
                                               t_rule=_t_rule(cfg.t_rule), eps=cfg.eps)
    else:
        rep = projection_dimension_experiment(spec, cfg.n, cfg.m, cfg.planes, cfg.level, cfg.seed, eps=cfg.eps)
    rows = ((r["plane"], r["slope"], r["r2"], r["measure"]) for r in rep.rows())
    summary = _summary(cfg, set=spec.name, level=cfg.level, planes=cfg.planes, target=rep.target_dimension,
                       case=rep.case, median_slope=rep.quantiles["slope"][0.5],
                       median_measure=rep.quantiles["measure"][0.5],
                       within_fraction=rep.within_fraction, exceptional_fraction=rep.exceptional_fraction)

    def plot(path):
        series = [(np.divide(1.0, rep.scales), rep.counts[k], f"plane {k}") for k in range(min(4, cfg.planes))]
        loglog_svg(series, path, title=f"{spec.name}: projected box counts")

    return ("plane", "slope", "r2", "measure"), rows, summary, EXIT_OK, plot


def cmd_energy(cfg: ExperimentConfig):
    spec = preset(cfg.set_name, cfg.dimension)
    rows = []
    for level in range(1, cfg.level + 1):
        centers = ifs_cover(spec, level).centers
        value = energy_estimate(centers, cfg.alpha, pairs=cfg.pairs or cfg.samples, seed=cfg.seed)
        rows.append((level, centers.shape[0], value))
    summary = _summary(cfg, set=spec.name, alpha=cfg.alpha, target=spec.target_dimension,
                       energy=rows[-1][2])

    def plot(path):
        loglog_svg([([r[1] for r in rows], [r[2] for r in rows], f"alpha={cfg.alpha:g}")], path,
                   title=f"{spec.name}: energy vs points", xlabel="log(points)", ylabel="log(energy)")

    return ("level", "points", "energy"), rows, summary, EXIT_OK, plot


HANDLERS = {
    "certify": cmd_certify,
    "det-check": cmd_det_check,
    "haar-audit": cmd_haar_audit,
    "heis-check": cmd_heis_check,
    "dim-experiment": lambda cfg: _experiment(cfg, heis=False),
    "heis-experiment": lambda cfg: _experiment(cfg, heis=True),
    "energy": cmd_energy,
}


def run(cfg: ExperimentConfig, plot_path: str | None = None, stdout=None) -> int:
    """Dispatch a validated config, write its CSV and print the summary line."""
    stdout = stdout or sys.stdout
    try:
        header, rows, summary, status, plot = HANDLERS[cfg.command](cfg)
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        write_csv(cfg.csv_path, header, rows)
        if plot_path and plot is not None:
            plot(plot_path)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(summary, file=stdout)
    return status


FLAG_KEYS = ("n", "m", "seed", "samples", "planes", "level", "grid", "ct", "alpha", "eps", "out", "set")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isoproj", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat YAML key-value file")
    ap.add_argument("--n", type=int)
    ap.add_argument("--m", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--samples", type=int)
    ap.add_argument("--planes", type=int)
    ap.add_argument("--level", type=int)
    ap.add_argument("--grid", type=int)
    ap.add_argument("--ct", type=float, help="transversality threshold C_T")
    ap.add_argument("--alpha", type=float)
    ap.add_argument("--eps", type=float)
    ap.add_argument("--out", help="CSV output path")
    ap.add_argument("--set", help="test set preset: four-corner, cantor-dust, square, middle-thirds")
    ap.add_argument("--plot", help="optional SVG log-log plot path")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = load_config(args.config) if args.config else {}
        if raw.get("command") not in (None, args.command):
            raise ConfigError("command", f"config file says {raw['command']!r} but {args.command!r} was requested")
        raw = dict(raw, command=args.command)
        for key in FLAG_KEYS:
            value = getattr(args, key)
            if value is not None:
                raw.pop({"ct": "C_T", "out": "output_path", "set": "set_name"}.get(key, key), None)
                raw[key] = value
        cfg = parse_config(raw)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg, plot_path=args.plot)


if __name__ == "__main__":
    sys.exit(main())
