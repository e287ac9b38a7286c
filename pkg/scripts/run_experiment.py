"""Run one experiment preset and print a compact table of the means.

    python3 scripts/run_experiment.py --id 2 --trials 100 --jobs 4
"""
import argparse
import json
import time
from pathlib import Path

from topoctrl.experiments import get_experiment, run_trials, write_results


def table(rows, metric="avg_power_ratio"):
    values = sorted({r["sweep_value"] for r in rows})
    # khop-<k> rows share one line, their k is the sweep value
    label = lambda r: "khop" if r["algorithm"].startswith("khop-") else r["algorithm"]  # noqa: E731
    algos = list(dict.fromkeys(label(r) for r in rows))
    by = {(label(r), r["sweep_value"]): r for r in rows}
    head = f"{'algorithm':<10}" + "".join(f"{v:>10}" for v in values)
    lines = [head]
    for a in algos:
        cells = [by.get((a, v), {}).get(metric, float("nan")) for v in values]
        lines.append(f"{a:<10}" + "".join(f"{c:>10.4f}" for c in cells))
    return "\n".join(lines)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--id", type=int, required=True)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    spec = get_experiment(args.id, trials=args.trials, seed=args.seed)
    t0 = time.time()
    rows = run_trials(spec, jobs=args.jobs)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"exp{args.id}.csv"
    write_results(rows, path)
    path.with_suffix(".json").write_text(json.dumps(
        {"experiment": args.id, "trials": args.trials, "master_seed": args.seed,
         "base_config": spec.base.to_dict(), **spec.notes}, indent=1, sort_keys=True) + "\n")
    print(f"exp{args.id}: {len(rows)} rows in {time.time() - t0:.1f}s -> {path}")
    for metric in ("avg_power_ratio", "avg_energy_ratio_energy", "avg_node_degree"):
        print(f"\n{metric}")
        print(table(rows, metric))


if __name__ == "__main__":
    main()
