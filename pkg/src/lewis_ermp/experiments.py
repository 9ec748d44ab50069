"""Batch runs of the Lewis-weight ratio bounds over graph families and seeds."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import SCHEMA_VERSION, alpha1, alpha2
from .graph import FAMILIES, generate
from .laplacian import LaplacianSystem
from .lewis import lewis_weights

# deterministic families need one run; the rest report the max over seeds
RANDOM_FAMILIES = {"random_regular", "watts_strogatz", "random_tree", "gnp"}


@dataclass
class ExperimentConfig:
    family: str
    params: dict = field(default_factory=dict)
    runs: int = 100
    seed: int = 0
    eps: float = 0.01
    C: float = 4.0
    dense_threshold: int = 4000
    label: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.family not in RANDOM_FAMILIES:
            self.runs = 1
        if not self.label:
            self.label = self.family

    @property
    def seeds(self) -> list[int]:
        return list(range(self.seed, self.seed + self.runs))

    def to_dict(self) -> dict:
        return asdict(self)


def run_once(family: str, params: dict, seed: int, eps: float, C: float = 4.0, dense_threshold: int = 4000) -> dict:
    G = generate(family, params, seed)
    lw = lewis_weights(G, eps=eps, C=C, dense_threshold=dense_threshold)
    S = LaplacianSystem(G, lw.g_lw, dense_threshold=dense_threshold)
    a1, a2 = alpha1(S), alpha2(S)
    return {
        "seed": seed,
        "n": G.n,
        "m": G.m,
        "alpha1": a1,
        "alpha2": a2,
        "alpha_min": min(a1, a2),
        "iterations": lw.iterations,
        "residual": lw.residual,
        "converged": lw.converged,
    }


def _job(args):
    return run_once(*args)


def _map(jobs, workers: int, progress=None):
    if workers <= 1:
        out = []
        for j in jobs:
            out.append(_job(j))
            if progress:
                progress(j, out[-1])
        return out
    from multiprocessing import Pool

    with Pool(workers) as pool:
        out = []
        for j, r in zip(jobs, pool.imap(_job, jobs)):  # imap keeps submission order
            out.append(r)
            if progress:
                progress(j, r)
        return out


def summarize(cfg: ExperimentConfig, runs: list[dict]) -> dict:
    a = np.array([r["alpha_min"] for r in runs])
    return {
        "schema": SCHEMA_VERSION,
        "label": cfg.label,
        "family": cfg.family,
        "params": {k: str(v) for k, v in cfg.params.items()},
        "eps": cfg.eps,
        "runs": len(runs),
        "n": runs[0]["n"],
        "m": max(r["m"] for r in runs),
        "alpha_min": float(a.max()),
        "alpha_min_mean": float(a.mean()),
        "alpha_min_std": float(a.std()),
        "alpha1_max": float(max(r["alpha1"] for r in runs)),
        "alpha2_max": float(max(r["alpha2"] for r in runs)),
        "converged_runs": int(sum(r["converged"] for r in runs)),
        "max_iterations": int(max(r["iterations"] for r in runs)),
    }


def run_experiment(cfg: ExperimentConfig, workers: int = 1, progress=None) -> tuple[dict, list[dict]]:
    jobs = [(cfg.family, cfg.params, s, cfg.eps, cfg.C, cfg.dense_threshold) for s in cfg.seeds]
    runs = _map(jobs, workers, progress)
    return summarize(cfg, runs), runs


# name, family, params, published value, tolerance
TABLE1 = [
    ("3-regular", "random_regular", {"d": 3, "n": 400}, 1.55, 0.15),
    ("4-regular", "random_regular", {"d": 4, "n": 400}, 1.17, 0.10),
    ("5-regular", "random_regular", {"d": 5, "n": 400}, 1.11, 0.08),
    ("6-regular", "random_regular", {"d": 6, "n": 400}, 1.08, 0.08),
    ("watts-strogatz", "watts_strogatz", {"n": 400, "k": 4, "p": "2/3"}, 1.64, 0.20),
    ("grid-20x20", "grid", {"w": 20, "h": 20}, 1.35, 0.05),
    ("grid-10x40", "grid", {"w": 10, "h": 40}, 1.94, 0.15),
    ("margulis-gabber-galil", "margulis_gabber_galil", {"n": 20}, 1.06, 0.05),
    ("chordal-cycle", "chordal_cycle", {"n": 400}, 1.64, 0.15),
    ("lollipop-400-400", "lollipop", {"k": 400, "p": 400}, 3.03, 0.15),
    ("bowtie-1000-999-1000", "bowtie", {"t": 1000, "p": 999, "s": 1000}, 2.5, 0.10),
]


def table1_configs(runs: int = 100, eps: float = 0.01, C: float = 4.0, only=None) -> list[tuple[ExperimentConfig, float, float]]:
    out = []
    for label, fam, params, target, tol in TABLE1:
        if only and label not in only:
            continue
        out.append((ExperimentConfig(fam, dict(params), runs=runs, eps=eps, C=C, label=label), target, tol))
    return out


def table1(runs: int = 100, eps: float = 0.01, C: float = 4.0, workers: int = 1, only=None, progress=None) -> list[dict]:
    rows = []
    for cfg, target, tol in table1_configs(runs, eps, C, only):
        row, _ = run_experiment(cfg, workers, progress)
        row["target"] = target
        row["tolerance"] = tol
        row["within_tolerance"] = abs(row["alpha_min"] - target) <= tol
        rows.append(row)
    return rows


def parse_range(text: str) -> list[int]:
    """``"3..6"`` -> [3, 4, 5, 6]; ``"50..400"`` doubles from 50; ``"1,2,5"`` is a list."""
    text = str(text)
    if ".." in text:
        lo, hi = (int(x) for x in text.split(".."))
        if hi - lo <= 10:
            return list(range(lo, hi + 1))
        vals, v = [], lo
        while v <= hi:
            vals.append(v)
            v *= 2
        if vals[-1] != hi:
            vals.append(hi)
        return vals
    return [int(x) for x in text.split(",") if x]


def sweep(family: str, n_values, d_values=None, runs: int = 10, eps: float = 0.01, C: float = 4.0, workers: int = 1, progress=None) -> list[dict]:
    """Curves of the max ``alpha_min`` over seeds versus graph size.

    ``regular`` sweeps random d-regular graphs over ``d_values``; ``lollipop``
    splits ``n`` vertices evenly between the clique and the path.
    """
    rows = []
    if family in ("regular", "random_regular"):
        for d in d_values or [3, 4, 5, 6]:
            for n in n_values:
                if (n * d) % 2:
                    continue
                cfg = ExperimentConfig("random_regular", {"d": d, "n": n}, runs=runs, eps=eps, C=C, label=f"{d}-regular")
                row, _ = run_experiment(cfg, workers, progress)
                row["d"] = d
                rows.append(row)
    elif family == "lollipop":
        for n in n_values:
            k = n // 2
            cfg = ExperimentConfig("lollipop", {"k": k, "p": n - k}, eps=eps, C=C, label="lollipop")
            row, _ = run_experiment(cfg, workers, progress)
            rows.append(row)
    else:
        raise ValueError(f"sweep supports 'regular' and 'lollipop', got {family!r}")
    return rows


def bowtie_dual_ratio(n: int) -> float:
    """``alpha2`` at Lewis (uniform) weights of the bowtie with ``n`` leaves per end and ``n - 1`` spine edges."""
    from .graph import bowtie_graph

    G = bowtie_graph(n, n - 1, n)
    S = LaplacianSystem(G, np.full(G.m, 1.0 / G.m), dense_threshold=max(4000, G.n + 1))
    return alpha2(S)


BOWTIE_DUAL_LIMIT = (27 / 4) / (13 / 6)
