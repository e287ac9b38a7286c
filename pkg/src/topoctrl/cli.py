"""Command-line front end: gen, run, eval, exp, verify.

Exit codes: 0 success, 1 property failure, 2 config error, 3 I/O error,
4 model assumption violated.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .algorithms import ALGORITHMS, DEFAULT_ALPHA, load_topology, run_algorithm, save_topology
from .analysis import cover_graph, initial_cover
from .errors import AssumptionViolation, ConfigError, NetworkFormatError, TopoCtrlError
from .experiments import get_experiment, run_trials, write_results
from .metrics import network_metrics
from .netmodel import build_initial_graph, is_connected, load_network, save_network
from .pathloss import build_network, load_gen_config
from .verify import MUTATIONS, run_verify

EXIT_OK, EXIT_PROPERTY, EXIT_CONFIG, EXIT_IO, EXIT_ASSUMPTION = 0, 1, 2, 3, 4


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def cmd_gen(args) -> int:
    cfg = load_gen_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    net = build_network(cfg)
    save_network(net, args.out)
    print(f"wrote {net.n} nodes, P_H={net.meta['p_h']:.6g}, |E_max|={len(net.gmax.edges)} to {args.out}")
    return EXIT_OK


def cmd_run(args) -> int:
    net = load_network(args.network)
    topo = run_algorithm(args.algo, net, k=args.k, alpha=args.alpha)
    if args.out:
        save_topology(topo, args.out, seed=net.meta.get("seed"))
    kept = len(topo.edges)
    removed = len(net.gmax.edges) - kept
    cover = cover_graph(topo, net.gmax, net.links)
    print(f"algorithm={topo.algorithm} params={json.dumps(topo.params, sort_keys=True)}")
    print(f"edges kept={kept} removed={removed} gmax={len(net.gmax.edges)}")
    print(f"connected={is_connected(topo.graph)} cover_connected={is_connected(cover.graph)}")
    return EXIT_OK


def cmd_eval(args) -> int:
    net = load_network(args.network)
    if args.topology:
        topo = load_topology(args.topology, net.ids)
    else:
        topo = run_algorithm(args.algo, net, k=args.k, alpha=args.alpha)
    p_h = net.meta.get("p_h") or max(nd.max_power for nd in net.nodes)
    H = initial_cover(build_initial_graph(net.links, p_h), p_h)
    report = network_metrics(cover_graph(topo, net.gmax, net.links), H)
    text = json.dumps({"algorithm": topo.algorithm, **report.as_dict()}, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


def cmd_exp(args) -> int:
    spec = get_experiment(args.id, trials=args.trials, seed=args.seed)
    if args.config:
        base = load_gen_config(args.config)
        spec = replace(spec, base=replace(base, seed=args.seed))
    if args.power_only:
        spec = replace(spec, path_metrics=False)
    rows = run_trials(spec, jobs=args.jobs)
    write_results(rows, args.out)
    meta = {
        "experiment": spec.experiment_id,
        "sweep_param": spec.sweep_param,
        "sweep_values": list(spec.sweep_values),
        "trials": spec.trials,
        "master_seed": args.seed,
        "base_config": spec.base.to_dict(),
        "algorithms": list(spec.algorithms),
        "path_metrics": spec.path_metrics,
        **spec.notes,
    }
    Path(args.out).with_suffix(".json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(trials=args.trials, seed=args.seed, mutation=args.mutation)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_PROPERTY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="topoctrl", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random network")
    p.add_argument("--config", required=True, help="generation config JSON")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    def algo_flags(p, required=True):
        p.add_argument("--algo", choices=ALGORITHMS, required=required)
        p.add_argument("--k", type=int, default=3, help="hop bound for khop")
        p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="cone angle in radians")

    p = sub.add_parser("run", help="run one algorithm on a network file")
    p.add_argument("network")
    algo_flags(p)
    p.add_argument("--out", help="kept-edge CSV (a JSON sidecar is written next to it)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="metrics of a topology against the initial graph")
    p.add_argument("network")
    algo_flags(p, required=False)
    p.add_argument("--topology", help="kept-edge CSV produced by 'run'")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("exp", help="reproduce one of the four experiments")
    p.add_argument("--id", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config", help="replace the preset base generation config")
    p.add_argument("--power-only", action="store_true", help="skip path metrics")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mutation", choices=MUTATIONS, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "eval" and not (args.algo or args.topology):
        _err("eval needs --algo or --topology")
        return EXIT_CONFIG
    try:
        return args.func(args)
    except AssumptionViolation as exc:
        _err(str(exc))
        return EXIT_ASSUMPTION
    except (ConfigError, NetworkFormatError) as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    except TopoCtrlError as exc:
        _err(str(exc))
        return EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())
