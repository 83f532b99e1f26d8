"""Command-line entry point: generate, oracle, solve, suite, round."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .encoding import assign_qubits, build_relaxed_hamiltonian
from .experiment import RunConfig, derive_seed, emit_outputs, run_suite, solve_instance
from .graph import assign_random_signs, brute_force_max_cut, generate_regular, greedy_color, read_graph, write_graph
from .rounding import DEFAULT_SHOTS, magic_round, pauli_round
from .sim import StateVector, expectation
from .vqe import EntanglementPattern


def _cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = derive_seed(args.seed, args.n, i)
        g = generate_regular(args.n, args.degree, seed)
        if args.weighted:
            g = assign_random_signs(g, derive_seed(seed, 1))
        path = out / f"graph_n{args.n}_{i:03d}.txt"
        write_graph(path, g)
        print(path)
    return 0


def _cmd_oracle(args) -> int:
    g = read_graph(args.graph)
    sol = brute_force_max_cut(g)
    print(json.dumps({"value": sol.value, "bits": "".join(map(str, sol.bits))}))
    return 0


def _cmd_solve(args) -> int:
    g = read_graph(args.graph)
    if args.weighted:
        g = assign_random_signs(g, derive_seed(args.seed, 1))
    a, state, energy = solve_instance(
        g, args.layers, args.pattern, args.sweeps, args.restarts, args.seed, derive_seed(args.seed, 2)
    )
    pr = pauli_round(state, a, g, "exact", derive_seed(args.seed, 3))
    mr = magic_round(state, a, g, args.shots, derive_seed(args.seed, 4))
    result = {
        "num_qubits": a.num_qubits,
        "relaxed_energy": energy,
        "pauli": {"value": pr.best_value, "bits": "".join(map(str, pr.best_bits))},
        "magic": {"value": mr.best_value, "bits": "".join(map(str, mr.best_bits))},
    }
    if g.n <= args.oracle_limit:
        opt = brute_force_max_cut(g).value
        result.update(opt=opt, normalized_energy=energy / opt if opt > 0 else None)
    if args.save_state:
        np.save(args.save_state, state.amps)
    print(json.dumps(result, indent=2))
    return 0


def _cmd_suite(args) -> int:
    cfg = RunConfig.from_json(args.config)
    if args.output_dir:
        cfg.output_dir = args.output_dir
    records, summary = run_suite(cfg, workers=args.workers)
    paths = emit_outputs(records, summary, cfg.output_dir)
    for p in paths.values():
        print(p)
    return 0


def _cmd_round(args) -> int:
    g = read_graph(args.graph)
    a = assign_qubits(g, greedy_color(g))
    amps = np.load(args.state).astype(complex)
    if amps.size != 1 << a.num_qubits:
        raise ValueError(f"state has {amps.size} amplitudes, graph encoding needs {1 << a.num_qubits}")
    state = StateVector(a.num_qubits, amps)
    if args.method == "pauli":
        mode = "exact" if args.shots is None else args.shots
        rep = pauli_round(state, a, g, mode, args.seed)
    else:
        rep = magic_round(state, a, g, args.shots or DEFAULT_SHOTS, args.seed)
    print(json.dumps({
        "method": rep.mode,
        "relaxed_energy": expectation(state, build_relaxed_hamiltonian(g, a)),
        "value": rep.best_value,
        "bits": "".join(map(str, rep.best_bits)),
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qrelax", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write random regular graphs to files")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--degree", type=int, default=3)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--weighted", action="store_true")
    gen.add_argument("--out", default="graphs")
    gen.set_defaults(func=_cmd_generate)

    orc = sub.add_parser("oracle", help="exact MaxCut of a graph file")
    orc.add_argument("graph")
    orc.set_defaults(func=_cmd_oracle)

    sol = sub.add_parser("solve", help="relax, optimize and round a single instance")
    sol.add_argument("--graph", required=True)
    sol.add_argument("--pattern", choices=[p.value for p in EntanglementPattern], default="linear")
    sol.add_argument("--layers", type=int, default=1)
    sol.add_argument("--sweeps", type=int, default=15)
    sol.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    sol.add_argument("--restarts", type=int, default=1)
    sol.add_argument("--seed", type=int, default=0)
    sol.add_argument("--weighted", action="store_true", help="replace weights by random ±1")
    sol.add_argument("--oracle-limit", type=int, default=24, help="compute OPT when n is at most this")
    sol.add_argument("--save-state", help="write the relaxed state amplitudes to this .npy file")
    sol.set_defaults(func=_cmd_solve)

    st = sub.add_parser("suite", help="run a configured experiment suite")
    st.add_argument("--config", required=True)
    st.add_argument("--workers", type=int, default=1)
    st.add_argument("--output-dir")
    st.set_defaults(func=_cmd_suite)

    rnd = sub.add_parser("round", help="re-round a saved relaxed state")
    rnd.add_argument("--graph", required=True)
    rnd.add_argument("--state", required=True)
    rnd.add_argument("--method", choices=["pauli", "magic"], default="magic")
    rnd.add_argument("--shots", type=int)
    rnd.add_argument("--seed", type=int, default=0)
    rnd.set_defaults(func=_cmd_round)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
