"""
区間テンソル
中心・半径表現、符号ベクトルの列挙、頂点テンソル A^z / Ã^z、最悪値の評価
"""

import logging
from dataclasses import dataclass
from itertools import product

import numpy as np

from .constants import EXTREME_POINT_CAP
from .errors import EnumerationCapError, TensorInputError, UnsupportedOrderError
from .tensor_core import (
    DenseTensor,
    Symmetry,
    add,
    apply_xm,
    is_symmetric,
    mode_product_signs,
    negate,
    subtract,
    symmetrize,
)

logger = logging.getLogger(__name__)

VERTEX_MODES = ("minus", "plus")


class SignVector(tuple):
    """
    各成分が ±1 のベクトル（補助添字集合 Y の元）

    代表元は第 1 成分が +1 のもの（偶数次では z と -z が同じ頂点を与える）
    """

    def __new__(cls, signs):
        values = tuple(int(s) for s in signs)
        if not values or any(s not in (1, -1) for s in values):
            raise TensorInputError(f"sign vector entries must be +1 or -1, got {tuple(signs)}")
        return super().__new__(cls, values)

    @property
    def is_canonical(self):
        return self[0] == 1

    def canonical(self):
        return self if self.is_canonical else -self

    def __neg__(self):
        return SignVector(-s for s in self)

    @property
    def label(self):
        return ",".join("+1" if s > 0 else "-1" for s in self)

    @classmethod
    def from_label(cls, label):
        return cls(int(token) for token in label.split(","))


@dataclass(frozen=True, eq=False)
class IntervalTensor:
    """
    区間テンソル A^I = [A_c - Δ, A_c + Δ]

    Parameters
    ----------
    center : DenseTensor
        中心 A_c
    radius : DenseTensor
        半径 Δ（全要素 >= 0）
    """
    center: DenseTensor
    radius: DenseTensor

    def __post_init__(self):
        if self.center.shape != self.radius.shape:
            raise TensorInputError(
                f"center shape {self.center.shape} and radius shape {self.radius.shape} differ"
            )
        negative = np.argwhere(self.radius.entries < 0)
        if negative.size:
            index = tuple(int(i) + 1 for i in negative[0])
            raise TensorInputError(f"radius must be nonnegative, entry {index} is negative")

    @property
    def order(self):
        return self.center.order

    @property
    def dim(self):
        return self.center.dim

    @property
    def lower(self):
        return subtract(self.center, self.radius)

    @property
    def upper(self):
        return add(self.center, self.radius)

    @property
    def free_entries(self):
        """半径が正の要素数"""
        return int(np.count_nonzero(self.radius.entries > 0))


def from_bounds(lower, upper):
    """
    上下界 [lower, upper] から中心・半径表現を作る

    Parameters
    ----------
    lower, upper : DenseTensor
        同じ形状、全要素で lower <= upper

    Returns
    -------
    interval : IntervalTensor
        center = (lower + upper) / 2, radius = (upper - lower) / 2
    """
    if lower.shape != upper.shape:
        raise TensorInputError(f"bound shapes differ: {lower.shape} vs {upper.shape}")
    bad = np.argwhere(lower.entries > upper.entries)
    if bad.size:
        index = tuple(int(i) + 1 for i in bad[0])
        raise TensorInputError(
            f"lower bound exceeds upper bound at index {index}: "
            f"{lower.entries[tuple(bad[0])]} > {upper.entries[tuple(bad[0])]}"
        )
    state = (
        Symmetry.TRUE
        if lower.symmetric is Symmetry.TRUE and upper.symmetric is Symmetry.TRUE
        else Symmetry.UNKNOWN
    )
    center = DenseTensor((lower.entries + upper.entries) / 2.0, state)
    radius = DenseTensor((upper.entries - lower.entries) / 2.0, state)
    return IntervalTensor(center, radius)


def from_center_radius(center, radius):
    return IntervalTensor(center, radius)


def point_interval(tensor):
    """半径 0 の区間（点テンソル）"""
    return IntervalTensor(tensor, DenseTensor(np.zeros(tensor.shape), Symmetry.TRUE))


def negate_interval(interval):
    """-A^I = [-upper, -lower]（中心の符号反転、半径はそのまま）"""
    return IntervalTensor(negate(interval.center), interval.radius)


def _flag_or_scan(tensor):
    if tensor.symmetric is Symmetry.TRUE:
        return True
    if tensor.symmetric is Symmetry.FALSE:
        return False
    return is_symmetric(tensor)


def is_symmetric_interval(interval):
    """A_c と Δ の両方が対称なら対称な区間テンソル"""
    return _flag_or_scan(interval.center) and _flag_or_scan(interval.radius)


def contains(interval, tensor):
    """lower <= A <= upper（全要素）"""
    if tensor.shape != interval.center.shape:
        raise TensorInputError(f"shape mismatch: {tensor.shape} vs {interval.center.shape}")
    arr = tensor.entries
    return bool(
        np.all(interval.lower.entries <= arr) and np.all(arr <= interval.upper.entries)
    )


def enumerate_sign_vectors(n, canonical=True):
    """
    符号ベクトルの列挙（+1 が -1 より先の辞書式順）

    Parameters
    ----------
    n : int
        次元
    canonical : bool
        True なら第 1 成分 +1 の代表元 2^{n-1} 個、False なら全 2^n 個

    Returns
    -------
    signs : list of SignVector
    """
    if n < 1:
        raise TensorInputError(f"n must be >= 1, got {n}")
    vectors = [SignVector(p) for p in product((1, -1), repeat=n)]
    if canonical:
        vectors = [z for z in vectors if z.is_canonical]
    return vectors


def sign_vector_of(x):
    """sgn(x)（x_i >= 0 なら +1）"""
    return SignVector(np.where(np.asarray(x, dtype=float) >= 0, 1, -1))


def vertex_tensor(interval, z, mode="minus"):
    """
    頂点テンソル

    minus: A^z = A_c - Δ ×_1 T_z ... ×_m T_z
    plus : Ã^z = A_c + Δ ×_1 T_z ... ×_m T_z

    Parameters
    ----------
    interval : IntervalTensor
    z : SignVector or sequence of ±1
    mode : {'minus', 'plus'}

    Returns
    -------
    tensor : DenseTensor
        各要素は下界か上界のどちらかに一致する
    """
    if mode not in VERTEX_MODES:
        raise TensorInputError(f"mode must be one of {VERTEX_MODES}, got {mode!r}")
    z = SignVector(z)
    if len(z) != interval.dim:
        raise TensorInputError(f"sign vector of length {len(z)} does not match dim {interval.dim}")
    signed = mode_product_signs(interval.radius, z)
    if mode == "minus":
        result = subtract(interval.center, signed)
    else:
        result = add(interval.center, signed)
    if interval.center.symmetric is Symmetry.TRUE and interval.radius.symmetric is Symmetry.TRUE:
        result = result.with_symmetry(Symmetry.TRUE)
    return result


def symmetrized_interval(interval):
    """A_s^I = [A_s^c - Δ_s, A_s^c + Δ_s]"""
    return IntervalTensor(symmetrize(interval.center), symmetrize(interval.radius))


def sample_member(interval, seed):
    """
    区間内の一様乱数テンソル（seed ごとに決定的）
    """
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1.0, 1.0, size=interval.center.shape)
    values = interval.center.entries + interval.radius.entries * u
    values = np.clip(values, interval.lower.entries, interval.upper.entries)
    return DenseTensor(values)


def require_even_order(order):
    if order % 2:
        raise UnsupportedOrderError(f"an even order is required, got m = {order}")


def worst_case_value(interval, x):
    """
    min_{A ∈ A^I} A x^m = A_c x^m - Σ δ_{i1...im} |x_{i1}...x_{im}|

    z = sgn(x) の頂点 A^z で評価する（sgn(0) = +1）
    """
    require_even_order(interval.order)
    x = np.asarray(x, dtype=float)
    if x.shape != (interval.dim,):
        raise TensorInputError(f"vector of shape {x.shape} does not match dim {interval.dim}")
    return apply_xm(vertex_tensor(interval, sign_vector_of(x), "minus"), x)


def enumerate_extreme_points(interval, cap=EXTREME_POINT_CAP):
    """
    端点集合（各要素が下界か上界）の全列挙

    半径が正の要素が k 個なら 2^k 個。テスト用のオラクルとしてのみ使う。

    Raises
    ------
    EnumerationCapError
        2^k > cap のとき
    """
    free = [tuple(i) for i in np.argwhere(interval.radius.entries > 0)]
    k = len(free)
    if 2 ** k > cap:
        raise EnumerationCapError(k, cap)

    lower = interval.lower.entries
    upper = interval.upper.entries
    points = []
    for bits in product((0, 1), repeat=k):
        arr = lower.copy()
        for index, bit in zip(free, bits):
            if bit:
                arr[index] = upper[index]
        points.append(DenseTensor(arr))
    logger.debug("enumerated %d extreme points (%d free entries)", len(points), k)
    return points
