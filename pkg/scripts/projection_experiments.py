"""Box-counting and projected-content sweeps over Haar-random isotropic planes.

Writes CSV tables and SVG plots into --outdir.

    python scripts/projection_experiments.py --planes 200 --outdir results
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from isoproj.lab import (
    cantor_dust,
    energy_estimate,
    four_corner_cantor,
    heisenberg_projection_experiment,
    ifs_cover,
    projected_measure_decay,
    projection_dimension_experiment,
    unit_square,
)
from isoproj.svgplot import loglog_svg


def write(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--planes", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    # slopes for dust below the plane dimension, in R^2 and R^4
    for dim, n, m, level in [(0.75, 1, 1, 9), (0.75, 2, 1, 8), (1.5, 2, 2, 7)]:
        rep = projection_dimension_experiment(cantor_dust(dim), n, m, args.planes, level, args.seed)
        tag = f"dust{dim:g}_n{n}_m{m}"
        write(out / f"{tag}.csv", ["plane", "slope", "r2", "measure"],
              [(r["plane"], r["slope"], r["r2"], r["measure"]) for r in rep.rows()])
        q = rep.quantiles["slope"]
        print(f"{tag}: target {rep.target_dimension:g} median slope {q[0.5]:.3f} "
              f"[{q[0.05]:.3f}, {q[0.95]:.3f}] within 0.1: {rep.within_fraction:.1%}")

    # the four-corner set: projected content shrinks with level
    decay = projected_measure_decay(four_corner_cantor(), 1, 1, args.planes, range(2, 11), args.seed)
    write(out / "four_corner_decay.csv", ["level", "median_content"], zip(decay["levels"], decay["medians"]))
    loglog_svg([(np.exp2(decay["levels"]), decay["medians"], "median")], out / "four_corner_decay.svg",
               title="four-corner set: projected content", xlabel="log(2^level)", ylabel="log(content)")
    print("four-corner medians:", " ".join(f"{v:.4f}" for v in decay["medians"]))

    square = projection_dimension_experiment(unit_square(), 1, 1, args.planes, 7, args.seed)
    print(f"square: min content {square.measures.min():.3f}, exceptional {square.exceptional_fraction:.1%}")

    lifted = heisenberg_projection_experiment(cantor_dust(0.75), 1, 1, args.planes, 8, args.seed,
                                              t_rule=lambda z: z[:, 0] * z[:, 1])
    print(f"lifted dust in H^1: median slope {lifted.quantiles['slope'][0.5]:.3f}")

    rows = []
    for alpha in (0.5, 0.9, 1.1, 1.5):
        for level in range(3, 8):
            centers = ifs_cover(four_corner_cantor(), level).centers
            rows.append((alpha, level, len(centers), energy_estimate(centers, alpha, pairs=200_000, seed=args.seed)))
    write(out / "energy.csv", ["alpha", "level", "points", "energy"], rows)
    series = [([r[2] for r in rows if r[0] == a], [r[3] for r in rows if r[0] == a], f"alpha={a}")
              for a in (0.5, 0.9, 1.1, 1.5)]
    loglog_svg(series, out / "energy.svg", title="four-corner energies", xlabel="log(points)", ylabel="log(energy)")
    print(f"wrote tables and plots to {out}/")


if __name__ == "__main__":
    main()
