"""
データ読み込みモジュール
テンソル・区間テンソルの JSON 文書の読み書きと、定理インスタンス集の読み込み
"""

import json
import logging
from itertools import permutations
from pathlib import Path

import numpy as np
import pandas as pd

from .constants import SCHEMA_VERSION
from .errors import TensorInputError
from .interval import from_bounds, from_center_radius
from .quartic import CLAUSES, representative_entries
from .tensor_core import DenseTensor, Symmetry, new_dense

logger = logging.getLogger(__name__)

DEFAULT_CORPUS_PATH = Path(__file__).resolve().parent.parent / "data" / "theorem_corpus.json"
TENSOR_FORMATS = ("coo", "dense")


# =============================================================================
# テンソル文書
# =============================================================================

def _require_int(doc, key, minimum):
    value = doc.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise TensorInputError(f"'{key}' must be an integer >= {minimum}, got {value!r}")
    return value


def parse_tensor_document(doc):
    """
    テンソル文書 → DenseTensor

    Parameters
    ----------
    doc : dict
        {"order", "dim", "format": "coo" | "dense", "entries", "symmetric_closure"?}
        COO の添字は 1 始まり

    Returns
    -------
    tensor : DenseTensor
        symmetric_closure なら symmetric = Symmetry.TRUE
    """
    if not isinstance(doc, dict):
        raise TensorInputError("a tensor document must be a JSON object")
    order = _require_int(doc, "order", 2)
    dim = _require_int(doc, "dim", 1)
    fmt = doc.get("format", "coo")
    if fmt not in TENSOR_FORMATS:
        raise TensorInputError(f"format must be one of {TENSOR_FORMATS}, got {fmt!r}")
    entries = doc.get("entries", [])

    if fmt == "dense":
        try:
            arr = np.asarray(entries, dtype=float)
        except (TypeError, ValueError) as e:
            raise TensorInputError(f"dense entries are not a numeric array: {e}") from e
        if arr.shape != (dim,) * order:
            raise TensorInputError(f"dense entries have shape {arr.shape}, expected {(dim,) * order}")
        return DenseTensor(arr)

    coo = []
    for item in entries:
        try:
            coo.append((tuple(item["idx"]), float(item["value"])))
        except (KeyError, TypeError, ValueError) as e:
            raise TensorInputError(f"bad COO entry {item!r}: {e}") from e

    if not doc.get("symmetric_closure", False):
        return new_dense(order, dim, coo)

    # 置換で全成分に複製する。異なる値が同じ添字に入れば矛盾
    expanded = {}
    for index, value in coo:
        for perm in set(permutations(index)):
            if perm in expanded and expanded[perm] != value:
                raise TensorInputError(
                    f"symmetric closure conflict at {perm}: {expanded[perm]} vs {value}"
                )
            expanded[perm] = value
    tensor = new_dense(order, dim, sorted(expanded.items()))
    return tensor.with_symmetry(Symmetry.TRUE)


def emit_tensor_document(tensor, fmt="coo"):
    """
    DenseTensor → テンソル文書（COO は非零成分を辞書式順で列挙。-0.0 も残す）
    """
    if fmt not in TENSOR_FORMATS:
        raise TensorInputError(f"format must be one of {TENSOR_FORMATS}, got {fmt!r}")
    doc = {"order": tensor.order, "dim": tensor.dim, "format": fmt}
    if fmt == "dense":
        doc["entries"] = tensor.entries.tolist()
        return doc
    doc["entries"] = [
        {"idx": [int(i) + 1 for i in index], "value": float(tensor.entries[tuple(index)])}
        for index in np.argwhere((tensor.entries != 0) | np.signbit(tensor.entries))
    ]
    return doc


# =============================================================================
# 区間テンソル文書
# =============================================================================

def parse_interval_document(doc):
    """
    区間文書 → IntervalTensor

    {"lower", "upper"} または {"center", "radius"} のどちらか
    """
    if not isinstance(doc, dict):
        raise TensorInputError("an interval document must be a JSON object")
    if "lower" in doc and "upper" in doc:
        return from_bounds(parse_tensor_document(doc["lower"]), parse_tensor_document(doc["upper"]))
    if "center" in doc and "radius" in doc:
        return from_center_radius(
            parse_tensor_document(doc["center"]), parse_tensor_document(doc["radius"])
        )
    raise TensorInputError("an interval document needs either lower/upper or center/radius")


def emit_interval_document(interval, style="center_radius", fmt="coo"):
    if style == "center_radius":
        return {
            "center": emit_tensor_document(interval.center, fmt),
            "radius": emit_tensor_document(interval.radius, fmt),
        }
    if style == "bounds":
        return {
            "lower": emit_tensor_document(interval.lower, fmt),
            "upper": emit_tensor_document(interval.upper, fmt),
        }
    raise TensorInputError(f"style must be 'center_radius' or 'bounds', got {style!r}")


def parse_document(doc):
    """
    テンソル文書か区間文書かを判別して読む

    Returns
    -------
    obj : DenseTensor or IntervalTensor
    """
    if isinstance(doc, dict) and ({"lower", "upper"} <= doc.keys() or {"center", "radius"} <= doc.keys()):
        return parse_interval_document(doc)
    return parse_tensor_document(doc)


def load_document(path):
    """
    JSON ファイルを読み込んで parse_document に渡す

    Raises
    ------
    OSError, json.JSONDecodeError, TensorInputError
    """
    text = Path(path).read_text(encoding="utf-8")
    return parse_document(json.loads(text))


def dumps(doc):
    """決定的な JSON 文字列（キー順固定）"""
    return json.dumps(doc, indent=2, sort_keys=True)


# =============================================================================
# 定理インスタンス集
# =============================================================================

def _instance_name(clause):
    return f"theorem-{clause}"


def _closure_document(values):
    return {
        "order": 4,
        "dim": 3,
        "format": "coo",
        "symmetric_closure": True,
        "entries": [
            {"idx": [int(c) for c in rep], "value": value}
            for rep, value in sorted(values.items())
        ],
    }


def default_corpus():
    """インスタンス集のファイルがないときの組み込みデータ"""
    instances = {}
    for clause in CLAUSES:
        center, radius = representative_entries(clause)
        instances[_instance_name(clause)] = {
            "clause": clause,
            "conclusion": "PD" if clause.startswith("5.4") else "PSD",
            "document": {
                "center": _closure_document(center),
                "radius": _closure_document(radius),
            },
        }
    return instances


class CorpusDatabase:
    """
    4次3次元の境界インスタンス集
    """

    def __init__(self, json_path=DEFAULT_CORPUS_PATH):
        """
        Parameters
        ----------
        json_path : str or Path
            インスタンス集の JSON ファイル
        """
        self.json_path = Path(json_path)
        self.instances = {}
        self.load_data()

    def load_data(self):
        """JSON を読み込む。ファイルがなければ組み込みデータを使う"""
        try:
            data = json.loads(self.json_path.read_text(encoding="utf-8"))
            if data.get("schema") != SCHEMA_VERSION:
                raise TensorInputError(
                    f"corpus schema {data.get('schema')!r} is not supported (expected {SCHEMA_VERSION})"
                )
            self.instances = data["instances"]
        except FileNotFoundError:
            logger.warning("corpus file %s not found, using built-in instances", self.json_path)
            self.instances = default_corpus()
        logger.info("corpus loaded: %d instances", len(self.instances))

    def get_instance_names(self):
        return sorted(self.instances)

    def _entry(self, name):
        if name not in self.instances:
            raise TensorInputError(
                f"unknown corpus instance {name!r}; valid names: {', '.join(self.get_instance_names())}"
            )
        return self.instances[name]

    def get_document(self, name):
        """
        インスタンスの区間文書

        Parameters
        ----------
        name : str
            'theorem-5.1' など

        Returns
        -------
        document : dict
        """
        return self._entry(name)["document"]

    def get_interval(self, name):
        return parse_interval_document(self.get_document(name))

    def get_clause(self, name):
        return self._entry(name)["clause"]

    def summary(self):
        """
        インスタンス一覧

        Returns
        -------
        table : pd.DataFrame
            name, clause, conclusion, free_entries
        """
        rows = []
        for name in self.get_instance_names():
            interval = self.get_interval(name)
            rows.append({
                "name": name,
                "clause": self.get_clause(name),
                "conclusion": self._entry(name).get("conclusion", ""),
                "free_entries": interval.free_entries,
            })
        return pd.DataFrame(rows, columns=["name", "clause", "conclusion", "free_entries"])


# テスト用
if __name__ == "__main__":
    db = CorpusDatabase()

    print("=== Corpus ===")
    print(db.summary().to_string(index=False))

    interval = db.get_interval("theorem-5.1")
    print(f"\ntheorem-5.1 radius at (1,1,2,3): {interval.radius[0, 0, 1, 2]}")
    print(f"theorem-5.1 center at (1,1,2,2): {interval.center[0, 0, 1, 1]}")
