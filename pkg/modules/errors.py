"""
例外クラス
"""


class TensorError(Exception):
    """テンソル計算に関する例外の基底クラス"""


class TensorInputError(TensorError, ValueError):
    """入力の形状・添字・区間の順序などが不正"""


class UnsupportedOrderError(TensorError, ValueError):
    """偶数次数が必要な場面で奇数次数、または次数・次元が対象外"""


class PreconditionError(TensorError, ValueError):
    """対称性などの前提条件を満たしていない"""


class EnumerationCapError(TensorError, RuntimeError):
    """端点列挙の数が上限を超えた"""

    def __init__(self, free_entries, cap):
        self.free_entries = free_entries
        self.count = 2 ** free_entries
        self.cap = cap
        super().__init__(
            f"extreme-point enumeration needs 2^{free_entries} = {self.count} "
            f"tensors, cap is {cap}"
        )
