"""
乱数によるテンソル・区間テンソルの生成
シードごとに決定的
"""

import numpy as np

from .errors import TensorInputError
from .interval import IntervalTensor
from .tensor_core import DenseTensor, symmetrize


def _validate(order, dim, density, radius_scale):
    if isinstance(order, bool) or int(order) != order or order < 2:
        raise TensorInputError(f"order must be an integer >= 2, got {order}")
    if isinstance(dim, bool) or int(dim) != dim or dim < 1:
        raise TensorInputError(f"dim must be an integer >= 1, got {dim}")
    if not 0.0 < density <= 1.0:
        raise TensorInputError(f"density must lie in (0, 1], got {density}")
    if radius_scale < 0.0:
        raise TensorInputError(f"radius scale must be >= 0, got {radius_scale}")


def random_tensor(order, dim, rng, low=-1.0, high=1.0, symmetric=False):
    """
    一様乱数の稠密テンソル

    Parameters
    ----------
    order, dim : int
    rng : np.random.Generator
    symmetric : bool
        True なら対称化して返す
    """
    tensor = DenseTensor(rng.uniform(low, high, size=(dim,) * order))
    return symmetrize(tensor) if symmetric else tensor


def random_interval(order, dim, seed=0, density=1.0, radius_scale=0.1,
                    symmetric=False, free_entries=None):
    """
    乱数の区間テンソル

    Parameters
    ----------
    order, dim : int
    seed : int
    density : float
        中心の非零要素の割合
    radius_scale : float
        半径は [0, radius_scale) の一様乱数。0 なら点区間
    symmetric : bool
        中心と半径をそれぞれ対称化する
    free_entries : int, optional
        指定すると半径が正の要素をちょうどこの個数（ランダムな位置）に限る。
        symmetric とは併用できない

    Returns
    -------
    interval : IntervalTensor
    """
    _validate(order, dim, density, radius_scale)
    order, dim = int(order), int(dim)
    shape = (dim,) * order
    rng = np.random.default_rng(seed)

    center = rng.uniform(-1.0, 1.0, size=shape)
    center = np.where(rng.random(shape) < density, center, 0.0)
    radius = radius_scale * rng.random(shape)

    if free_entries is not None:
        if symmetric:
            raise TensorInputError("free_entries cannot be combined with symmetric")
        if not 0 <= free_entries <= radius.size:
            raise TensorInputError(f"free_entries must lie in [0, {radius.size}], got {free_entries}")
        mask = np.zeros(radius.size, dtype=bool)
        mask[rng.choice(radius.size, size=free_entries, replace=False)] = True
        radius = np.where(mask.reshape(shape), radius, 0.0)

    center, radius = DenseTensor(center), DenseTensor(radius)
    if symmetric:
        center, radius = symmetrize(center), symmetrize(radius)
    return IntervalTensor(center, radius)
