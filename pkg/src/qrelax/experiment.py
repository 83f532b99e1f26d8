"""Suite runner: instances x entanglement patterns x depths, with CSV/JSON output."""
from __future__ import annotations

import csv
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .encoding import assign_qubits, build_relaxed_hamiltonian
from .graph import (
    MAX_ORACLE_VERTICES,
    Graph,
    assign_random_signs,
    brute_force_max_cut,
    generate_regular,
    greedy_color,
)
from .rounding import magic_round, pauli_round
from .vqe import EntanglementPattern, build_ansatz, nft_optimize, prepare_state, random_init_params

log = logging.getLogger(__name__)

OPTIMAL_TOL = 1e-9
PATTERN_ORDER = [p.value for p in EntanglementPattern]

# seed-derivation roles
_GRAPH, _SIGNS, _ANSATZ, _INIT, _ROUND = range(5)


def derive_seed(*keys: int) -> int:
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1, np.uint64)[0])


@dataclass
class RunConfig:
    n_list: list[int] = field(default_factory=lambda: [18, 20, 22, 24])
    instances_per_n: int = 50
    degree: int = 3
    weighted: bool = False
    depths: list[int] = field(default_factory=lambda: [0, 1, 2])
    patterns: list[str] = field(default_factory=lambda: list(PATTERN_ORDER))
    sweeps: int = 15
    shots: int = 1000
    restarts: int = 1
    master_seed: int = 0
    output_dir: str = "runs"
    pauli_mode: str = "exact"
    opt_file: Optional[str] = None
    record_timing: bool = False

    def validate(self) -> None:
        if not self.n_list or any(n < 2 for n in self.n_list):
            raise ValueError("n_list must hold vertex counts >= 2")
        if self.instances_per_n < 1:
            raise ValueError("instances_per_n must be positive")
        for n in self.n_list:
            if (n * self.degree) % 2 or n <= self.degree or self.degree < 1:
                raise ValueError(f"no {self.degree}-regular graph on {n} vertices")
            if n > MAX_ORACLE_VERTICES and self.opt_file is None:
                raise ValueError(f"n={n} exceeds the oracle limit {MAX_ORACLE_VERTICES}; supply opt_file")
        if not self.depths or any(d < 0 for d in self.depths):
            raise ValueError("depths must be a non-empty list of L >= 0")
        if len(set(self.depths)) != len(self.depths):
            raise ValueError("depths must be distinct")
        if not self.patterns:
            raise ValueError("patterns must be non-empty")
        for p in self.patterns:
            EntanglementPattern(p)
        if self.sweeps < 1 or self.shots < 1 or self.restarts < 1:
            raise ValueError("sweeps, shots and restarts must be positive")
        if self.pauli_mode != "exact" and not str(self.pauli_mode).isdigit():
            raise ValueError("pauli_mode must be 'exact' or a shot count")

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**d)
        cfg.patterns = [EntanglementPattern(p).value for p in cfg.patterns]
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path) -> RunConfig:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class RunRecord:
    instance_id: int
    n: int
    pattern: str
    L: int
    seed: int
    relaxed_energy: float
    opt: float
    normalized_energy: float
    pauli_ratio: float
    magic_ratio: float
    pauli_optimal: bool
    magic_optimal: bool
    wall_time_s: float

    def sort_key(self):
        return (self.n, self.instance_id, PATTERN_ORDER.index(self.pattern), self.L)


RECORD_COLUMNS = [f.name for f in fields(RunRecord)]


def _load_opts(path) -> dict[str, float]:
    if path is None:
        return {}
    with open(path) as fh:
        return {str(k): float(v) for k, v in json.load(fh).items()}


def build_instance(cfg: RunConfig, n: int, instance_id: int, opts: Optional[dict] = None):
    """Graph, optimum and seed for one instance; weighted draws with OPT <= 0 are redrawn."""
    seed = derive_seed(cfg.master_seed, n, instance_id)
    opts = opts or {}
    for attempt in range(1000):
        g = generate_regular(n, cfg.degree, derive_seed(seed, _GRAPH, attempt))
        if cfg.weighted:
            g = assign_random_signs(g, derive_seed(seed, _SIGNS, attempt))
        key = f"{n}/{instance_id}"
        opt = opts[key] if key in opts else brute_force_max_cut(g).value
        if opt > 0:
            return g, opt, seed
        log.info("instance n=%d id=%d attempt %d has OPT=%g <= 0; redrawing", n, instance_id, attempt, opt)
    raise RuntimeError(f"could not draw an instance with positive OPT (n={n}, id={instance_id})")


def solve_instance(g: Graph, L: int, pattern: str, sweeps: int, restarts: int, seed: int, pattern_seed: int):
    """Run VQE on one instance; returns (assignment, state, relaxed energy)."""
    a = assign_qubits(g, greedy_color(g))
    h = build_relaxed_hamiltonian(g, a)
    spec = build_ansatz(pattern, L, a, g, seed=pattern_seed)
    best = None
    for r in range(restarts):
        init = random_init_params(spec, np.random.default_rng(derive_seed(seed, _INIT, L, r)))
        res = nft_optimize(spec, -h, init, sweeps)
        if best is None or res.energy > best.energy:
            best = res
    return a, prepare_state(spec, best.params), best.energy


def _run_instance(cfg: RunConfig, n: int, instance_id: int, opts: dict) -> list[RunRecord]:
    g, opt, seed = build_instance(cfg, n, instance_id, opts)
    records = []
    depth0 = None
    for L in sorted(cfg.depths):
        for pattern in cfg.patterns:
            if L == 0 and depth0 is not None:
                # no entangler at depth 0, so every pattern runs the same circuit
                records.append(RunRecord(**{**asdict(depth0), "pattern": pattern}))
                continue
            start = time.perf_counter()
            pidx = PATTERN_ORDER.index(pattern)
            a, state, energy = solve_instance(
                g, L, pattern, cfg.sweeps, cfg.restarts, seed, derive_seed(seed, _ANSATZ, pidx)
            )
            rkey = (L, pidx) if L > 0 else (0, len(PATTERN_ORDER))
            pauli_mode = "exact" if cfg.pauli_mode == "exact" else int(cfg.pauli_mode)
            pr = pauli_round(state, a, g, pauli_mode, derive_seed(seed, _ROUND, *rkey, 0))
            mr = magic_round(state, a, g, cfg.shots, derive_seed(seed, _ROUND, *rkey, 1))
            pauli_ratio = pr.best_value / opt
            magic_ratio = mr.best_value / opt
            rec = RunRecord(
                instance_id=instance_id,
                n=n,
                pattern=pattern,
                L=L,
                seed=seed,
                relaxed_energy=energy,
                opt=opt,
                normalized_energy=energy / opt,
                pauli_ratio=pauli_ratio,
                magic_ratio=magic_ratio,
                pauli_optimal=abs(pauli_ratio - 1) <= OPTIMAL_TOL,
                magic_optimal=abs(magic_ratio - 1) <= OPTIMAL_TOL,
                wall_time_s=time.perf_counter() - start if cfg.record_timing else 0.0,
            )
            records.append(rec)
            if L == 0:
                depth0 = rec
    return records


def _run_instance_star(args):
    return _run_instance(*args)


def run_suite(cfg: RunConfig, workers: int = 1):
    """Run every (n, instance, pattern, L) combination; returns (records, summary)."""
    cfg.validate()
    opts = _load_opts(cfg.opt_file)
    tasks = [(cfg, n, i, opts) for n in cfg.n_list for i in range(cfg.instances_per_n)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_instance_star, tasks))
    else:
        chunks = [_run_instance_star(t) for t in tasks]
    records = sorted((r for chunk in chunks for r in chunk), key=RunRecord.sort_key)
    return records, summarize(records)


def _stats(values) -> dict:
    values = list(values)
    return {"min": min(values), "mean": math.fsum(values) / len(values), "max": max(values)}


def summarize(records: list[RunRecord]) -> dict:
    """Per-(n, pattern, L) aggregates and cumulative optimal-found counts over depth."""
    groups = {}
    for r in records:
        groups.setdefault((r.n, r.pattern, r.L), []).append(r)
    group_rows = []
    for (n, pattern, L), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], PATTERN_ORDER.index(kv[0][1]), kv[0][2])):
        group_rows.append({
            "n": n,
            "pattern": pattern,
            "L": L,
            "instances": len(rs),
            "normalized_energy": _stats(r.normalized_energy for r in rs),
            "pauli_ratio": _stats(r.pauli_ratio for r in rs),
            "magic_ratio": _stats(r.magic_ratio for r in rs),
            "pauli_optimal": sum(r.pauli_optimal for r in rs),
            "magic_optimal": sum(r.magic_optimal for r in rs),
            "premise_satisfied": sum(r.normalized_energy >= 1 for r in rs),
        })

    found = {"pauli": lambda r: r.pauli_optimal, "magic": lambda r: r.magic_optimal,
             "either": lambda r: r.pauli_optimal or r.magic_optimal}
    counts = []
    by_np = {}
    for r in records:
        by_np.setdefault((r.n, r.pattern), []).append(r)
    for (n, pattern), rs in sorted(by_np.items(), key=lambda kv: (kv[0][0], PATTERN_ORDER.index(kv[0][1]))):
        depths = sorted({r.L for r in rs})
        for method, hit in found.items():
            cumulative = {}
            for d in depths:
                ids = {r.instance_id for r in rs if r.L <= d and hit(r)}
                cumulative[f"L<={d}"] = len(ids)
            counts.append({"n": n, "pattern": pattern, "method": method, "cumulative": cumulative})
    return {"groups": group_rows, "optimal_counts": counts}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records(records: list[RunRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow([_fmt(getattr(r, c)) for c in RECORD_COLUMNS])


def read_records(path) -> list[RunRecord]:
    casts = {f.name: f.type for f in fields(RunRecord)}
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            vals = {}
            for k, v in row.items():
                t = casts[k]
                if t == "bool":
                    vals[k] = v == "1"
                elif t == "int":
                    vals[k] = int(v)
                elif t == "float":
                    vals[k] = float(v)
                else:
                    vals[k] = v
            out.append(RunRecord(**vals))
    return out


def emit_outputs(records: list[RunRecord], summary: dict, output_dir) -> dict[str, Path]:
    """Write records.csv, summary.json and the plot-ready per-figure CSVs."""
    if not records:
        raise ValueError("no records to write")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"{out} is not writable")
    paths = {
        "records": out / "records.csv",
        "summary": out / "summary.json",
        "energy": out / "energy_vs_depth.csv",
        "ratio": out / "ratio_vs_depth.csv",
    }
    write_records(records, paths["records"])
    with open(paths["summary"], "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(paths["energy"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "pattern", "L", "min", "mean", "max"])
        for grp in summary["groups"]:
            st = grp["normalized_energy"]
            w.writerow([grp["n"], grp["pattern"], grp["L"], repr(st["min"]), repr(st["mean"]), repr(st["max"])])
    with open(paths["ratio"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "pattern", "L", "method", "min", "mean", "max"])
        for grp in summary["groups"]:
            for method in ("pauli", "magic"):
                st = grp[f"{method}_ratio"]
                w.writerow([grp["n"], grp["pattern"], grp["L"], method, repr(st["min"]), repr(st["mean"]), repr(st["max"])])
    return paths
