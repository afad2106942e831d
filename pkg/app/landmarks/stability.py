# app/landmarks/stability.py

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import List, Optional

import numpy as np
from scipy.stats import entropy
from sklearn.metrics import mutual_info_score

from app.errors import LengthMismatch
from app.landmarks.kmeans import REPLICATES, kmeanspp_select
from app.landmarks.models import StabilityReport
from app.rbf.models import NodeSet

logger = logging.getLogger(__name__)

STABILITY_RUNS = 10


def _canonical(labels: np.ndarray) -> np.ndarray:
    """Relabel by order of first appearance, so equal partitions compare equal."""
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first))
    return rank[inverse]


def nmi(assign_a, assign_b) -> float:
    """
    I(a, b) / sqrt(H(a) H(b)) with natural logs. When either side has zero entropy the
    score is 1 for identical partitions and 0 otherwise.
    """
    a = np.asarray(assign_a).reshape(-1)
    b = np.asarray(assign_b).reshape(-1)
    if a.shape[0] != b.shape[0]:
        raise LengthMismatch(f"assignment lengths differ: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] == 0:
        raise LengthMismatch("assignments are empty")

    if np.array_equal(_canonical(a), _canonical(b)):
        return 1.0

    h_a = entropy(np.unique(a, return_counts=True)[1])
    h_b = entropy(np.unique(b, return_counts=True)[1])
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    score = mutual_info_score(a, b) / np.sqrt(h_a * h_b)
    return float(min(1.0, max(0.0, score)))


def run_seeds(base_seed: int, runs: int = STABILITY_RUNS, replicates: int = REPLICATES) -> List[int]:
    """base_seed*1000 + 1, strided by the replicate count so replicate blocks never overlap."""
    return [base_seed * 1000 + replicates * r + 1 for r in range(runs)]


def stability_experiment(
    nodes: NodeSet,
    m: int,
    base_seed: int,
    *,
    runs: int = STABILITY_RUNS,
    workers: Optional[int] = None,
) -> StabilityReport:
    seeds = run_seeds(base_seed, runs)

    def select(s: int) -> np.ndarray:
        return kmeanspp_select(nodes, m, s).assignments

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            labels = list(pool.map(select, seeds))
    else:
        labels = [select(s) for s in seeds]

    pairs = [nmi(labels[i], labels[j]) for i, j in combinations(range(len(labels)), 2)]
    report = StabilityReport(
        n=nodes.n,
        m=m,
        dim=nodes.dim,
        pair_nmis=pairs,
        mean_nmi=float(np.mean(pairs)),
        std_nmi=float(np.std(pairs)),
        seeds=seeds,
    )
    logger.info(f"[stability] dim={nodes.dim} n={nodes.n} m={m} mean={report.mean_nmi:.4f} std={report.std_nmi:.4f}")
    return report
