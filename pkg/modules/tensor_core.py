"""
稠密テンソルの基本演算
対称化・縮約・符号ベクトルによるモード積・要素ごとの演算
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from itertools import combinations_with_replacement, permutations

import numpy as np

from .constants import SYMMETRY_ATOL
from .errors import TensorInputError

logger = logging.getLogger(__name__)


class Symmetry(Enum):
    """対称性フラグ（三値）"""
    UNKNOWN = "unknown"
    TRUE = "verified-true"
    FALSE = "verified-false"


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """
    m次 n次元の実テンソル（全要素を辞書式順で保持）

    Parameters
    ----------
    entries : array_like
        形状 (n, n, ..., n) の配列。内部では 0 始まりの添字
    symmetric : Symmetry
        対称性フラグ。TRUE は置換スキャンで確認済みを意味する
    """
    entries: np.ndarray
    symmetric: Symmetry = Symmetry.UNKNOWN

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim < 1 or arr.size == 0:
            raise TensorInputError("a tensor needs order >= 1 and dim >= 1")
        if len(set(arr.shape)) != 1:
            raise TensorInputError(f"all modes must share one dimension, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise TensorInputError("tensor entries must be finite (NaN and Infinity are rejected)")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def order(self):
        return self.entries.ndim

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def shape(self):
        return self.entries.shape

    @property
    def flat(self):
        """辞書式順の要素列（長さ n^m）"""
        return self.entries.ravel()

    def __getitem__(self, index):
        return self.entries[index]

    def with_symmetry(self, state):
        return DenseTensor(self.entries, state)


@dataclass(frozen=True)
class HomogeneousForm:
    """
    係数テンソル A に対応する斉次多項式 f_A(x) = A x^m
    """
    tensor: DenseTensor

    def __call__(self, x):
        return apply_xm(self.tensor, x)

    def evaluate_many(self, points):
        """
        複数点での一括評価

        Parameters
        ----------
        points : array_like
            形状 (k, n) の点の並び

        Returns
        -------
        values : np.ndarray
            形状 (k,) の評価値
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.tensor.dim:
            raise TensorInputError(
                f"points have {pts.shape[1]} coordinates, tensor dim is {self.tensor.dim}"
            )
        # 最後の軸から順に縮約、点の軸は末尾に保つ
        values = self.tensor.entries @ pts.T
        for _ in range(self.tensor.order - 1):
            values = np.einsum("...ik,ki->...k", values, pts)
        return values


def zeros(order, dim):
    return DenseTensor(np.zeros((dim,) * order), Symmetry.TRUE)


def diagonal_tensor(diagonal, order):
    """
    対角テンソル（a_{ii...i} = d_i、その他 0）

    Parameters
    ----------
    diagonal : array_like
        対角成分 d
    order : int
        次数 m
    """
    d = np.asarray(diagonal, dtype=float).ravel()
    arr = np.zeros((d.size,) * order)
    for i, value in enumerate(d):
        arr[(i,) * order] = value
    return DenseTensor(arr, Symmetry.TRUE)


def new_dense(order, dim, coo_entries):
    """
    COO 形式の要素リストからテンソルを作る

    Parameters
    ----------
    order : int
        次数 m (>= 2)
    dim : int
        次元 n (>= 1)
    coo_entries : list of (tuple, float)
        1 始まりの添字と値の組。重複は不可

    Returns
    -------
    tensor : DenseTensor
        指定以外の要素は 0、対称性フラグは UNKNOWN
    """
    if int(order) != order or order < 2:
        raise TensorInputError(f"order must be an integer >= 2, got {order}")
    if int(dim) != dim or dim < 1:
        raise TensorInputError(f"dim must be an integer >= 1, got {dim}")
    order, dim = int(order), int(dim)

    arr = np.zeros((dim,) * order)
    seen = set()
    for index, value in coo_entries:
        index = tuple(index)
        if len(index) != order:
            raise TensorInputError(f"index {index} has {len(index)} positions, order is {order}")
        if any(
            not isinstance(i, (int, float, np.integer, np.floating)) or int(i) != i or not 1 <= i <= dim
            for i in index
        ):
            raise TensorInputError(f"index {index} out of range [1, {dim}]")
        if index in seen:
            raise TensorInputError(f"duplicate index {index}")
        seen.add(index)
        arr[tuple(int(i) - 1 for i in index)] = float(value)

    return DenseTensor(arr)


def is_symmetric(tensor, atol=SYMMETRY_ATOL):
    """全ての軸置換について要素が一致するか（全数スキャン）"""
    arr = tensor.entries
    for perm in permutations(range(tensor.order)):
        if not np.allclose(arr, arr.transpose(perm), rtol=0.0, atol=atol):
            return False
    return True


def verify_symmetry(tensor):
    """対称性フラグを確定させたテンソルを返す"""
    if tensor.symmetric is not Symmetry.UNKNOWN:
        return tensor
    state = Symmetry.TRUE if is_symmetric(tensor) else Symmetry.FALSE
    return tensor.with_symmetry(state)


def symmetrize(tensor):
    """
    対称化 (a_s)_{i1...im} = (1/m!) Σ_σ a_{σ(i1)...σ(im)}

    添字の多重集合ごとに m! 通りの置換を全て数え上げる。
    軌道上の値が全て等しければその値をそのまま使う（不動点を厳密に保つ）。

    Parameters
    ----------
    tensor : DenseTensor

    Returns
    -------
    sym : DenseTensor
        symmetric = Symmetry.TRUE
    """
    arr = tensor.entries
    m, n = tensor.order, tensor.dim
    out = np.empty_like(arr)
    perms = list(permutations(range(m)))

    for rep in combinations_with_replacement(range(n), m):
        values = [arr[tuple(rep[p] for p in perm)] for perm in perms]
        first = values[0]
        if all(v == first for v in values):
            avg = first
        else:
            avg = math.fsum(values) / len(values)
        for index in set(permutations(rep)):
            out[index] = avg

    return DenseTensor(out, Symmetry.TRUE)


def _as_vector(tensor, x):
    vec = np.asarray(x, dtype=float)
    if vec.shape != (tensor.dim,):
        raise TensorInputError(f"vector of shape {vec.shape} does not match dim {tensor.dim}")
    return vec


def contract(tensor, x, times):
    """
    最後の軸から times 回ベクトル x で縮約する

    Returns
    -------
    result : np.ndarray or float
        次数 m - times のテンソル（times = m ならスカラー）
    """
    vec = _as_vector(tensor, x)
    return reduce(np.dot, [tensor.entries] + [vec] * times)


def apply_xm(tensor, x):
    """f_A(x) = Σ a_{i1...im} x_{i1}...x_{im}"""
    return float(contract(tensor, x, tensor.order))


def apply_xm1(tensor, x):
    """(A x^{m-1})_i = Σ a_{i i2...im} x_{i2}...x_{im}"""
    return np.asarray(contract(tensor, x, tensor.order - 1), dtype=float)


def sign_tensor(signs, order):
    """z_{i1} z_{i2} ... z_{im} を並べたテンソル"""
    z = np.asarray(signs, dtype=float)
    return reduce(np.multiply.outer, [z] * order)


def mode_product_signs(tensor, z):
    """
    A ×_1 T_z ×_2 T_z ... ×_m T_z （T_z = diag(z)）

    要素ごとには a_{i1...im} z_{i1}...z_{im}
    """
    signs = np.asarray(z, dtype=float)
    if signs.shape != (tensor.dim,):
        raise TensorInputError(f"sign vector of length {signs.size} does not match dim {tensor.dim}")
    state = Symmetry.TRUE if tensor.symmetric is Symmetry.TRUE else Symmetry.UNKNOWN
    return DenseTensor(tensor.entries * sign_tensor(signs, tensor.order), state)


def _check_shapes(a, b):
    if a.shape != b.shape:
        raise TensorInputError(f"shape mismatch: {a.shape} vs {b.shape}")


def _joint_symmetry(a, b):
    if a.symmetric is Symmetry.TRUE and b.symmetric is Symmetry.TRUE:
        return Symmetry.TRUE
    return Symmetry.UNKNOWN


def add(a, b):
    _check_shapes(a, b)
    return DenseTensor(a.entries + b.entries, _joint_symmetry(a, b))


def subtract(a, b):
    _check_shapes(a, b)
    return DenseTensor(a.entries - b.entries, _joint_symmetry(a, b))


def negate(a):
    return DenseTensor(-a.entries, a.symmetric)


def scale(a, factor):
    state = Symmetry.TRUE if a.symmetric is Symmetry.TRUE else Symmetry.UNKNOWN
    return DenseTensor(float(factor) * a.entries, state)


def abs_tensor(a):
    state = Symmetry.TRUE if a.symmetric is Symmetry.TRUE else Symmetry.UNKNOWN
    return DenseTensor(np.abs(a.entries), state)


def leq(a, b):
    """全要素で a <= b なら True"""
    _check_shapes(a, b)
    return bool(np.all(a.entries <= b.entries))


# テスト用
if __name__ == "__main__":
    # 区間テンソルの例で使う A^{z1}（6(x1x2 - x1x3)^2）
    pairs = [((1, 1, 2, 2), 1.0), ((1, 1, 3, 3), 1.0), ((1, 1, 2, 3), -1.0)]
    coo = []
    for rep, value in pairs:
        for index in sorted(set(permutations(rep))):
            coo.append((index, value))
    A = new_dense(4, 3, coo)

    print("=== square-sum tensor ===")
    print(f"symmetric: {is_symmetric(A)}")
    for x in [(1, 1, 0), (1, 1, 1), (1, 2, -1)]:
        print(f"  f({x}) = {apply_xm(A, x):.6f}")
