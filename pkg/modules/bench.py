"""
頂点テンソルによる判定と端点列挙による判定の比較
判定回数 2^{n-1} と 2^k（k は半径が正の要素数）、所要時間、判定の一致
"""

import logging
import time

import pandas as pd

from .certify import Status, check_interval_pd, oracle_extreme_points_pd
from .generator import random_interval

logger = logging.getLogger(__name__)

BENCH_ORACLE_CAP = 64  # 端点がこれを超える例は省略
COLUMNS = [
    "order", "dim", "trial", "vertex_checks", "vertex_ms", "vertex_status",
    "extreme_points", "oracle_ms", "oracle_status", "agree", "note",
]


def _free_entries(order, dim):
    """m = 4, n = 2 は半径の正の要素を 4 個に絞ると端点が 16 個で済む"""
    if order > 2 and dim == 2:
        return 4
    return None


def run_bench(dims, order=4, trials=1, seed=0, mode="psd", options=None):
    """
    Parameters
    ----------
    dims : iterable of int
    order : int
    trials : int
        次元ごとの乱数インスタンス数
    seed : int
    mode : {'pd', 'psd'}
    options : SolverOptions, optional

    Returns
    -------
    table : pd.DataFrame
        1 行 = 1 インスタンス
    """
    rows = []
    for dim in dims:
        for trial in range(trials):
            free = _free_entries(order, dim)
            interval = random_interval(order, dim, seed=seed + 1000 * dim + trial, radius_scale=0.2,
                                       symmetric=free is None, free_entries=free)
            k = interval.free_entries

            start = time.perf_counter()
            verdict = check_interval_pd(interval, mode, options)
            vertex_ms = 1000.0 * (time.perf_counter() - start)
            row = {
                "order": order, "dim": dim, "trial": trial,
                "vertex_checks": 2 ** (dim - 1), "vertex_ms": round(vertex_ms, 3),
                "vertex_status": verdict.status.value, "extreme_points": f"2^{k}",
                "oracle_ms": None, "oracle_status": None, "agree": None, "note": "",
            }

            if 2 ** k > BENCH_ORACLE_CAP:
                row["note"] = f"oracle skipped: 2^{k} extreme points"
            else:
                start = time.perf_counter()
                oracle = oracle_extreme_points_pd(interval, mode, options=options)
                row["oracle_ms"] = round(1000.0 * (time.perf_counter() - start), 3)
                row["oracle_status"] = oracle.status.value
                if Status.UNKNOWN in (verdict.status, oracle.status):
                    row["note"] = "unknown status, agreement not decided"
                else:
                    row["agree"] = verdict.status is oracle.status
            logger.info("bench m=%d n=%d trial=%d: %s", order, dim, trial, row["vertex_status"])
            rows.append(row)
    return pd.DataFrame(rows, columns=COLUMNS)
