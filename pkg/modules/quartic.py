"""
4次3次元テンソルの十分条件
区間テンソルに対する各定理の仮定、点テンソルに対する系の仮定、
頂点テンソルの斉次式の平方和による閉形式、境界インスタンスの生成
"""

import logging
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .constants import PATTERN_ZERO_TOL
from .errors import UnsupportedOrderError
from .interval import IntervalTensor, SignVector
from .tensor_core import DenseTensor, Symmetry

logger = logging.getLogger(__name__)

CLAUSES = ("5.1", "5.2a", "5.2b", "5.3a", "5.3b", "5.4a", "5.4b")
TWO_THIRDS = 2.0 / 3.0

# 添字の多重集合（代表元、1 始まり）と重複度
MULTIPLICITY = {"iiii": 1, "iiij": 4, "iijj": 6, "iijk": 12}
DIAGONAL = ("1111", "2222", "3333")
IIIJ = ("1112", "1113", "1222", "2223", "1333", "2333")
IIJJ = ("1122", "1133", "2233")
IIJK = ("1123", "1223", "1233")


@dataclass(frozen=True)
class PatternMatch:
    """
    十分条件の一致結果

    Parameters
    ----------
    family : {'theorem', 'corollary'}
    clause : str
        '5.1', '5.2a' など
    definite : bool
        True なら結論は正定値、False なら半正定値（正定値ではない）
    witness_axis : int or None
        半正定値のみの場合、f(e_i) = 0 となる軸 i（0 始まり）
    """
    family: str
    clause: str
    definite: bool
    witness_axis: int = None

    @property
    def tag(self):
        return f"{self.family}_{self.clause.replace('.', '_')}"


def _index(rep):
    return tuple(int(c) - 1 for c in rep)


def _require_43(order, dim):
    if order != 4 or dim != 3:
        raise UnsupportedOrderError(f"pattern checks need m = 4, n = 3, got m = {order}, n = {dim}")


# =============================================================================
# 区間テンソル：各定理の仮定（境界値で判定）
# =============================================================================

class _Bounds:
    """代表添字で上下界を読む（対称な区間テンソル前提）"""

    def __init__(self, interval, tol=PATTERN_ZERO_TOL):
        self.lower = interval.lower.entries
        self.upper = interval.upper.entries
        self.tol = tol

    def lo(self, rep):
        return float(self.lower[_index(rep)])

    def fixed(self, *reps, value=0.0):
        """下界も上界も value"""
        return all(
            abs(self.lo(r) - value) <= self.tol
            and abs(float(self.upper[_index(r)]) - value) <= self.tol
            for r in reps
        )

    def unit_span(self, *reps):
        """下界 -1、上界 1"""
        return all(
            abs(self.lo(r) + 1.0) <= self.tol
            and abs(float(self.upper[_index(r)]) - 1.0) <= self.tol
            for r in reps
        )

    def low_eq(self, value, *reps):
        return all(abs(self.lo(r) - value) <= self.tol for r in reps)

    def low_ge(self, value, *reps):
        return all(self.lo(r) >= value - self.tol for r in reps)


def theorem_matches(interval):
    """
    区間テンソルの境界値が各定理の仮定を満たす節を列挙する

    Parameters
    ----------
    interval : IntervalTensor
        m = 4, n = 3、対称

    Returns
    -------
    matches : list of PatternMatch
    """
    _require_43(interval.order, interval.dim)
    b = _Bounds(interval)
    matches = []

    # 5.1：対角の下界 0、1123 のみ [-1, 1]
    if (
        b.low_eq(0.0, *DIAGONAL)
        and b.fixed(*IIIJ)
        and b.unit_span("1123")
        and b.fixed("1223", "1233")
        and b.low_ge(1.0, "1122", "1133")
        and b.low_ge(0.0, "2233")
    ):
        matches.append(PatternMatch("theorem", "5.1", False, 0))

    # 5.2：2333 が [-1, 1]、a_3333 の下界 1
    base_52 = (
        b.low_eq(0.0, "1111", "2222")
        and b.low_eq(1.0, "3333")
        and b.fixed("1112", "1113", "1222", "2223", "1333")
        and b.unit_span("2333")
    )
    if base_52:
        if b.fixed(*IIJK) and b.low_ge(0.0, "1122", "1133") and b.low_ge(TWO_THIRDS, "2233"):
            matches.append(PatternMatch("theorem", "5.2a", False, 0))
        if (
            b.unit_span("1123")
            and b.fixed("1223", "1233")
            and b.low_ge(1.0, "1122", "1133")
            and b.low_ge(TWO_THIRDS, "2233")
        ):
            matches.append(PatternMatch("theorem", "5.2b", False, 0))

    # 5.3：a_1111 の下界 0、a_2222 = a_3333 の下界 1
    base_53 = b.low_eq(0.0, "1111") and b.low_eq(1.0, "2222", "3333") and b.fixed("1112", "1113")
    if base_53:
        if (
            b.unit_span("2223", "2333", "1123")
            and b.fixed("1222", "1333", "1223", "1233")
            and b.low_ge(1.0, *IIJJ)
        ):
            matches.append(PatternMatch("theorem", "5.3a", False, 0))
        if (
            b.unit_span("2333", "1223")
            and b.fixed("1222", "2223", "1333", "1123", "1233")
            and b.low_ge(1.0, "1133", "2233")
            and b.low_ge(TWO_THIRDS, "1122")
        ):
            matches.append(PatternMatch("theorem", "5.3b", False, 0))

    # 5.4：対角の下界 1、1112 と 2223 が [-1, 1]
    base_54 = (
        b.low_eq(1.0, *DIAGONAL)
        and b.fixed("1222", "2333", "1113")
        and b.unit_span("1112", "2223")
    )
    if base_54:
        if b.low_eq(TWO_THIRDS, *IIJJ) and b.fixed(*IIJK) and b.unit_span("1333"):
            matches.append(PatternMatch("theorem", "5.4a", True))
        if (
            b.low_eq(1.0, *IIJJ)
            and b.fixed("1123", "1223", "1333")
            and b.unit_span("1233")
        ):
            matches.append(PatternMatch("theorem", "5.4b", True))

    logger.debug("theorem patterns matched: %s", [m.clause for m in matches])
    return matches


# =============================================================================
# 点テンソル：各系の仮定（記載どおりの非厳密不等式）
# =============================================================================

def corollary_matches(tensor, tol=PATTERN_ZERO_TOL):
    """
    対称な点テンソルが各系の仮定を満たす節を列挙する

    仮定は記載どおりに判定する。結論が成り立つかどうかは呼び出し側で
    反例探索と照合する。

    Returns
    -------
    matches : list of PatternMatch
    """
    _require_43(tensor.order, tensor.dim)
    arr = tensor.entries

    def a(rep):
        return float(arr[_index(rep)])

    def zero(*reps):
        return all(abs(a(r)) <= tol for r in reps)

    def ge(rep, bound):
        return a(rep) >= bound - tol

    def covers(reps, others, factor=1.0):
        return all(ge(r, factor * abs(a(o))) for r in reps for o in others)

    def psd_or_pd(clause, positive_axes):
        """positive_axes の対角が全て正なら PD、そうでなければ 0 の軸を反例に"""
        for i in positive_axes:
            if a(DIAGONAL[i]) <= tol:
                return PatternMatch("corollary", clause, False, i)
        return PatternMatch("corollary", clause, True)

    matches = []

    # 5.1
    if (
        all(ge(r, 0.0) for r in DIAGONAL)
        and zero(*IIIJ, "1223", "1233")
        and all(ge(r, 0.0) for r in IIJJ)
        and covers(("1122", "1133"), ("1123",))
    ):
        matches.append(psd_or_pd("5.1", (0, 1, 2)))

    # 5.2
    if (
        ge("1111", 0.0) and ge("2222", 0.0) and ge("3333", 1.0)
        and zero("1112", "1222", "2223", "1333", "1113", "1223", "1233")
        and all(ge(r, 0.0) for r in IIJJ)
        and covers(("3333",), ("2333",))
        and covers(("2233",), ("2333",), TWO_THIRDS)
    ):
        if zero("1123"):
            matches.append(psd_or_pd("5.2a", (0, 1)))
        if (
            covers(("1122", "1133"), ("2333", "1123"))
            and covers(("3333",), ("1123",))
            and covers(("2233",), ("1123",), TWO_THIRDS)
        ):
            matches.append(psd_or_pd("5.2b", (0, 1)))

    # 5.3
    if ge("1111", 0.0) and ge("2222", 1.0) and ge("3333", 1.0) and zero("1112", "1222", "1333", "1113"):
        if covers(IIJJ, ("2333", "2223", "1123")) and zero("1223", "1233"):
            matches.append(psd_or_pd("5.3a", (0,)))
        if (
            covers(("1122",), ("2333", "1223"), TWO_THIRDS)
            and covers(("1133", "2233"), ("2333", "1223"))
            and zero("1123", "1233", "2223")
        ):
            matches.append(psd_or_pd("5.3b", (0,)))

    # 5.4（結論は常に正定値）
    if all(ge(r, 1.0) for r in DIAGONAL) and zero("1222", "2333", "1113"):
        if (
            covers(DIAGONAL, ("1112", "2223", "1333"))
            and covers(IIJJ, ("1112", "2223", "1333"), TWO_THIRDS)
            and zero(*IIJK)
        ):
            matches.append(PatternMatch("corollary", "5.4a", True))
        if (
            covers(DIAGONAL, ("1112", "2223", "1123"))
            and covers(IIJJ, ("1112", "2223", "1123"))
            and zero("1113", "1223", "1233")
        ):
            matches.append(PatternMatch("corollary", "5.4b", True))

    logger.debug("corollary patterns matched: %s", [m.clause for m in matches])
    return matches


# =============================================================================
# 平方和の閉形式と境界インスタンス
# =============================================================================

def _sos_z1(clause, x):
    """z = (1, 1, 1) の頂点テンソルが与える斉次式（平方和）"""
    x1, x2, x3 = x
    if clause == "5.1":
        return 6.0 * (x1 * x2 - x1 * x3) ** 2
    if clause == "5.2a":
        return (2.0 * x2 * x3 - x3 ** 2) ** 2
    if clause == "5.2b":
        return (2.0 * x2 * x3 - x3 ** 2) ** 2 + 6.0 * (x1 * x2 - x1 * x3) ** 2
    if clause == "5.3a":
        return (x2 ** 2 - 2.0 * x2 * x3 + x3 ** 2) ** 2 + 6.0 * (x1 * x2 - x1 * x3) ** 2
    if clause == "5.3b":
        return (
            (x2 ** 2 - 2.0 * x1 * x3) ** 2
            + (x3 ** 2 - 2.0 * x2 * x3 + 2.0 * x1 * x2) ** 2
            + 2.0 * (x1 * x3 - x2 * x3) ** 2
        )
    if clause == "5.4a":
        return (
            (x1 ** 2 - 2.0 * x1 * x2) ** 2
            + (x2 ** 2 - 2.0 * x2 * x3) ** 2
            + (x3 ** 2 - 2.0 * x1 * x3) ** 2
        )
    if clause == "5.4b":
        return (
            (x1 ** 2 - 2.0 * x1 * x2 + x3 ** 2) ** 2
            + (x2 ** 2 - 2.0 * x2 * x3 + 2.0 * x1 * x3) ** 2
            + 2.0 * (x2 * x3 - x1 * x2) ** 2
        )
    raise KeyError(f"unknown clause {clause!r}, valid: {', '.join(CLAUSES)}")


def sos_value(clause, x, z=(1, 1, 1)):
    """
    境界インスタンスの頂点テンソル A^z の斉次式を平方和で評価する

    中心が符号反転で不変なので f_{A^z}(x) = f_{A^{(1,1,1)}}(T_z x)

    Parameters
    ----------
    clause : str
        CLAUSES のいずれか
    x : array_like
        長さ 3
    z : sequence of ±1
    """
    signs = np.asarray(SignVector(z), dtype=float)
    return float(_sos_z1(clause, np.asarray(x, dtype=float) * signs))


# 各節の境界値（代表添字 → 値）。対角ブロック以外の中心は 0
_INSTANCES = {
    "5.1": (
        {"1122": 1.0, "1133": 1.0},
        {"1123": 1.0},
    ),
    "5.2a": (
        {"3333": 1.0, "2233": TWO_THIRDS},
        {"2333": 1.0},
    ),
    "5.2b": (
        {"3333": 1.0, "1122": 1.0, "1133": 1.0, "2233": TWO_THIRDS},
        {"1123": 1.0, "2333": 1.0},
    ),
    "5.3a": (
        {"2222": 1.0, "3333": 1.0, "1122": 1.0, "1133": 1.0, "2233": 1.0},
        {"2223": 1.0, "2333": 1.0, "1123": 1.0},
    ),
    "5.3b": (
        {"2222": 1.0, "3333": 1.0, "1133": 1.0, "2233": 1.0, "1122": TWO_THIRDS},
        {"2333": 1.0, "1223": 1.0},
    ),
    "5.4a": (
        {"1111": 1.0, "2222": 1.0, "3333": 1.0,
         "1122": TWO_THIRDS, "1133": TWO_THIRDS, "2233": TWO_THIRDS},
        {"1112": 1.0, "2223": 1.0, "1333": 1.0},
    ),
    "5.4b": (
        {"1111": 1.0, "2222": 1.0, "3333": 1.0, "1122": 1.0, "1133": 1.0, "2233": 1.0},
        {"1112": 1.0, "2223": 1.0, "1233": 1.0},
    ),
}


def representative_entries(clause):
    """(中心, 半径) の代表添字 → 値の辞書"""
    if clause not in _INSTANCES:
        raise KeyError(f"unknown clause {clause!r}, valid: {', '.join(CLAUSES)}")
    center, radius = _INSTANCES[clause]
    return dict(center), dict(radius)


def _closure(values):
    arr = np.zeros((3,) * 4)
    for rep, value in values.items():
        for index in set(permutations(_index(rep))):
            arr[index] = value
    return DenseTensor(arr, Symmetry.TRUE)


def theorem_instance(clause):
    """
    各節の境界インスタンス（仮定を等号で満たす区間）

    Returns
    -------
    interval : IntervalTensor
        m = 4, n = 3、対称
    """
    center, radius = representative_entries(clause)
    return IntervalTensor(_closure(center), _closure(radius))


# テスト用
if __name__ == "__main__":
    from .interval import enumerate_sign_vectors, vertex_tensor
    from .tensor_core import apply_xm

    rng = np.random.default_rng(0)
    for clause in CLAUSES:
        interval = theorem_instance(clause)
        worst = 0.0
        for z in enumerate_sign_vectors(3):
            vertex = vertex_tensor(interval, z, "minus")
            for x in rng.standard_normal((200, 3)):
                worst = max(worst, abs(apply_xm(vertex, x) - sos_value(clause, x, z)))
        print(f"{clause:5s} max |f - sos| = {worst:.2e}  theorems: {[m.tag for m in theorem_matches(interval)]}")
