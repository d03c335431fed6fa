"""
テンソル固有値の計算
Gershgorin 型の包含円板、H/Z 固有値の最小・最大の推定、g 関数の上下界
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize, root

from .constants import (
    DEFAULT_MARGIN,
    DEFAULT_MAX_ITER,
    DEFAULT_SEED,
    DEFAULT_STARTS,
    DEFAULT_TOL,
    GEAP_TAU,
    TIE_RTOL,
)
from .errors import PreconditionError, TensorInputError
from .tensor_core import (
    Symmetry,
    apply_xm,
    apply_xm1,
    contract,
    negate,
    symmetrize,
    verify_symmetry,
)

logger = logging.getLogger(__name__)

Z_SHIFT_POLICIES = ("adaptive", "fixed")


@dataclass(frozen=True)
class SolverOptions:
    """
    ソルバー設定

    Parameters
    ----------
    starts : int
        ランダム初期点の数（基底ベクトル n 本は別に必ず試す）
    max_iter : int
        1 初期点あたりの最大反復回数
    tol_residual : float
        収束とみなす残差ノルム
    margin : float
        PD 判定のマージン ε
    seed : int
        乱数の親シード。初期点 k のシードは (seed, k)
    jobs : int
        並列数（1 なら逐次）
    z_shift : {'adaptive', 'fixed'}
        Z 固有値反復のシフト方式
    """
    starts: int = DEFAULT_STARTS
    max_iter: int = DEFAULT_MAX_ITER
    tol_residual: float = DEFAULT_TOL
    margin: float = DEFAULT_MARGIN
    seed: int = DEFAULT_SEED
    jobs: int = 1
    z_shift: str = "adaptive"

    def __post_init__(self):
        if self.starts < 0:
            raise TensorInputError(f"starts must be >= 0, got {self.starts}")
        if self.max_iter < 1:
            raise TensorInputError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol_residual <= 0 or self.margin < 0:
            raise TensorInputError("tol_residual must be > 0 and margin >= 0")
        if self.jobs < 1:
            raise TensorInputError(f"jobs must be >= 1, got {self.jobs}")
        if self.z_shift not in Z_SHIFT_POLICIES:
            raise TensorInputError(f"z_shift must be one of {Z_SHIFT_POLICIES}, got {self.z_shift!r}")

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class Disk:
    """包含円板（中心 a_{ii...i}、半径は第 i スライスの非対角要素の絶対値和）"""
    center: float
    radius: float


@dataclass(frozen=True)
class EigenEstimate:
    """
    固有対の推定値

    kind が 'H' なら ||x||_m = 1、'Z' と 'E' なら ||x||_2 = 1
    residual は (A, value, vector) から再計算できる
    """
    kind: str
    value: float
    vector: np.ndarray = field(repr=False)
    residual: float
    converged: bool
    starts_used: int


@dataclass(frozen=True)
class GBracket:
    """g(A) の区間 [lower, upper]。lower は Gershgorin による厳密な下界"""
    lower: float
    upper: float
    minimizer: np.ndarray = field(repr=False)


def require_symmetric(tensor):
    """
    対称性フラグを確定させ、非対称なら PreconditionError

    Returns
    -------
    tensor : DenseTensor
        symmetric = Symmetry.TRUE
    """
    checked = verify_symmetry(tensor)
    if checked.symmetric is not Symmetry.TRUE:
        raise PreconditionError("a symmetric tensor is required (symmetry scan failed)")
    return checked


def _require_even(tensor):
    if tensor.order % 2:
        raise PreconditionError(f"an even order is required, got m = {tensor.order}")


# =============================================================================
# Gershgorin 型円板
# =============================================================================

def gershgorin_disks(tensor):
    """
    各スライスの円板

    Parameters
    ----------
    tensor : DenseTensor
        次数 m >= 2（対称性は不要）

    Returns
    -------
    disks : list of Disk
    """
    if tensor.order < 2:
        raise TensorInputError("disks need an order >= 2 tensor")
    arr = tensor.entries
    m, n = tensor.order, tensor.dim
    disks = []
    for i in range(n):
        row = np.abs(arr[i]).copy()
        center = float(arr[(i,) * m])
        row[(i,) * (m - 1)] = 0.0
        disks.append(Disk(center, float(row.sum())))
    return disks


def h_min_lower_bound(tensor):
    """min_i (center_i - radius_i)。対称テンソルの全 H 固有値はこの値以上"""
    tensor = require_symmetric(tensor)
    return min(d.center - d.radius for d in gershgorin_disks(tensor))


def rho_h_upper_bound(tensor):
    """max_i (|center_i| + radius_i)。H スペクトル半径の上界"""
    tensor = require_symmetric(tensor)
    return max(abs(d.center) + d.radius for d in gershgorin_disks(tensor))


def in_disk_union(tensor, value, atol=1e-9):
    return any(abs(value - d.center) <= d.radius + atol for d in gershgorin_disks(tensor))


# =============================================================================
# 残差
# =============================================================================

def h_residual(tensor, value, x):
    """||A x^{m-1} - λ x^{[m-1]}||"""
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(apply_xm1(tensor, x) - value * x ** (tensor.order - 1)))


def z_residual(tensor, value, x):
    """||A x^{m-1} - λ x||"""
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(apply_xm1(tensor, x) - value * x))


def h_quotient(tensor, x):
    """R(x) = A x^m / Σ x_i^m"""
    x = np.asarray(x, dtype=float)
    return apply_xm(tensor, x) / float(np.sum(x ** tensor.order))


# =============================================================================
# 初期点と多点スタートの集約
# =============================================================================

def _start_vectors(dim, options):
    """基底ベクトル n 本、続いて (seed, k) から引いたランダム方向"""
    starts = [np.eye(dim)[i] for i in range(dim)]
    for k in range(options.starts):
        rng = np.random.default_rng([options.seed, k])
        v = rng.standard_normal(dim)
        while not np.any(v):
            v = rng.standard_normal(dim)
        starts.append(v)
    return starts


def _snap(x, rel=1e-12):
    x = np.array(x, dtype=float)
    x[np.abs(x) < rel * np.max(np.abs(x))] = 0.0
    return x


def _canonical_sign(x):
    """偶数次では x と -x は同じ固有対。最初の非零成分を正にする"""
    nonzero = np.flatnonzero(x)
    if nonzero.size and x[nonzero[0]] < 0:
        return -x
    return x


def _better(candidate, incumbent, sense):
    """
    多点スタートの比較。値が TIE_RTOL 以内なら残差、次に辞書式順で決める

    sense = +1 なら小さい値が良い（最小化）、-1 なら大きい値が良い
    """
    if incumbent is None:
        return True
    a, b = candidate.value, incumbent.value
    scale = max(1.0, abs(a), abs(b))
    if abs(a - b) > TIE_RTOL * scale:
        return sense * a < sense * b
    if candidate.residual != incumbent.residual:
        return candidate.residual < incumbent.residual
    return tuple(candidate.vector) < tuple(incumbent.vector)


def _run_starts(solve, starts, options):
    if options.jobs > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=options.jobs) as pool:
            return list(pool.map(solve, starts))
    return [solve(x0) for x0 in starts]


def _select(results, sense, kind, total, options, label):
    best = None
    for est in results:
        if _better(est, best, sense):
            best = est
    if not any(est.converged for est in results):
        logger.warning(
            "%s: no start converged to residual <= %.1e after %d starts",
            label, options.tol_residual, total,
        )
    return EigenEstimate(kind, best.value, best.vector, best.residual, best.converged, total)


# =============================================================================
# H 固有値（商 R(x) の多点スタート最小化）
# =============================================================================

def _normalize_m(x, m):
    return x / np.sum(x ** m) ** (1.0 / m)


def _h_min_single(tensor, x0, options):
    m = tensor.order

    def objective(x):
        s = float(np.sum(x ** m))
        axm1 = apply_xm1(tensor, x)
        value = float(axm1 @ x) / s
        grad = m * (axm1 - value * x ** (m - 1)) / s
        return value, grad

    res = minimize(
        objective, _normalize_m(x0, m), jac=True, method="BFGS",
        options={"maxiter": options.max_iter, "gtol": options.tol_residual},
    )
    x = _canonical_sign(_snap(_normalize_m(res.x, m)))
    x = _normalize_m(x, m)
    value = h_quotient(tensor, x)
    residual = h_residual(tensor, value, x)

    if residual > options.tol_residual:
        # ニュートン法で固有方程式を直接解き、残差が改善して値がほぼ同じなら採用
        def equations(y):
            v, lam = y[:-1], y[-1]
            return np.append(apply_xm1(tensor, v) - lam * v ** (m - 1), np.sum(v ** m) - 1.0)

        sol = root(equations, np.append(x, value), method="hybr")
        y = _normalize_m(_canonical_sign(_snap(sol.x[:-1])), m) if np.any(sol.x[:-1]) else x
        polished = h_quotient(tensor, y)
        polished_res = h_residual(tensor, polished, y)
        if polished_res < residual and abs(polished - value) <= 1e-6 * max(1.0, abs(value)):
            x, value, residual = y, polished, polished_res

    logger.debug("H start: value=%.12g residual=%.3e nit=%s", value, residual, res.nit)
    return EigenEstimate("H", value, x, residual, residual <= options.tol_residual, 1)


def extreme_h_eigen(tensor, which="min", options=None):
    """
    最小（最大）H 固有値の推定

    単位 m ノルム球面上で R(x) = A x^m / Σ x_i^m を BFGS で多点スタート最小化し、
    必要ならニュートン法で固有方程式を仕上げる。
    min なら返す値は R(x) の実現値なので λ_{H min} の上界（max なら下界）。

    Parameters
    ----------
    tensor : DenseTensor
        対称、偶数次
    which : {'min', 'max'}
    options : SolverOptions, optional

    Returns
    -------
    estimate : EigenEstimate
        kind = 'H'
    """
    options = options or SolverOptions()
    tensor = require_symmetric(tensor)
    _require_even(tensor)
    if which not in ("min", "max"):
        raise TensorInputError(f"which must be 'min' or 'max', got {which!r}")

    work = tensor if which == "min" else negate(tensor)
    starts = _start_vectors(tensor.dim, options)
    results = _run_starts(lambda x0: _h_min_single(work, x0, options), starts, options)
    best = _select(results, +1, "H", len(starts), options, f"extreme_h_eigen({which})")

    value = best.value if which == "min" else -best.value
    # 元のテンソルで残差を取り直す
    residual = h_residual(tensor, value, best.vector)
    return EigenEstimate("H", value, best.vector, residual, best.converged, best.starts_used)


# =============================================================================
# Z 固有値（適応シフト付き冪乗法）
# =============================================================================

def _z_max_single(tensor, x0, shift, options):
    m = tensor.order
    x = x0 / np.linalg.norm(x0)
    residual = np.inf
    for it in range(options.max_iter):
        axmm2 = contract(tensor, x, m - 2)
        axmm1 = axmm2 @ x
        value = float(axmm1 @ x)
        residual = float(np.linalg.norm(axmm1 - value * x))
        if residual < options.tol_residual:
            break
        if shift is None:
            hessian = m * (m - 1) * np.atleast_2d(axmm2)
            alpha = max(0.0, (GEAP_TAU - float(np.linalg.eigvalsh(hessian).min())) / m)
        else:
            alpha = shift
        step = axmm1 + alpha * x
        norm = np.linalg.norm(step)
        if norm == 0.0:
            break
        x = step / norm

    x = _snap(x)
    x = x / np.linalg.norm(x)
    if m % 2 == 0:
        x = _canonical_sign(x)
    value = apply_xm(tensor, x)
    residual = z_residual(tensor, value, x)
    logger.debug("Z start: value=%.12g residual=%.3e iterations=%d", value, residual, it + 1)
    return EigenEstimate("Z", value, x, residual, residual <= options.tol_residual, 1)


def extreme_z_eigen(tensor, which="max", options=None):
    """
    最大（最小）Z 固有値の推定

    シフト付き対称高次冪乗法。min は -A の最大を求めて符号を反転する
    （λ_{Z min}(A) = -λ_{Z max}(-A)）。

    Parameters
    ----------
    tensor : DenseTensor
        対称
    which : {'min', 'max'}
    options : SolverOptions, optional
        z_shift = 'adaptive' なら反復ごとに凸性を保つ最小のシフト、
        'fixed' なら rho_h_upper_bound(A) + 1

    Returns
    -------
    estimate : EigenEstimate
        kind = 'Z'
    """
    options = options or SolverOptions()
    tensor = require_symmetric(tensor)
    if tensor.order < 2:
        raise TensorInputError("Z-eigenvalues need an order >= 2 tensor")
    if which not in ("min", "max"):
        raise TensorInputError(f"which must be 'min' or 'max', got {which!r}")

    work = tensor if which == "max" else negate(tensor)
    shift = None if options.z_shift == "adaptive" else rho_h_upper_bound(work) + 1.0
    starts = _start_vectors(tensor.dim, options)
    results = _run_starts(lambda x0: _z_max_single(work, x0, shift, options), starts, options)
    best = _select(results, -1, "Z", len(starts), options, f"extreme_z_eigen({which})")

    value = best.value if which == "max" else -best.value
    residual = z_residual(tensor, value, best.vector)
    return EigenEstimate("Z", value, best.vector, residual, best.converged, best.starts_used)


# =============================================================================
# g 関数
# =============================================================================

def g_bracket(tensor, options=None):
    """
    g(A) = min_{x≠0} A x^m / Σ x_i^m の上下界

    対称化したテンソル上で計算する（g(A) = g(A_s)）。

    Returns
    -------
    bracket : GBracket
        lower = Gershgorin 下界、upper = extreme_h_eigen(A_s, 'min') の値
    """
    _require_even(tensor)
    sym = tensor if tensor.symmetric is Symmetry.TRUE else symmetrize(tensor)
    estimate = extreme_h_eigen(sym, "min", options)
    lower = h_min_lower_bound(sym)
    return GBracket(lower, estimate.value, estimate.vector)


# =============================================================================
# 実 E 固有対（非対称テンソル向け）
# =============================================================================

def real_e_eigenpairs(tensor, options=None):
    """
    A x^{m-1} = λ x, x^T x = 1 の実解をニュートン法の多点スタートで探す

    対称性は不要。見つかった固有対を重複除去して λ の昇順で返す。

    Returns
    -------
    pairs : list of EigenEstimate
        kind = 'E'、全て残差 <= tol_residual * 100
    """
    options = options or SolverOptions()
    if tensor.order < 2:
        raise TensorInputError("E-eigenpairs need an order >= 2 tensor")
    accept = options.tol_residual * 100.0

    def equations(y):
        x, lam = y[:-1], y[-1]
        return np.append(apply_xm1(tensor, x) - lam * x, 0.5 * (x @ x - 1.0))

    starts = _start_vectors(tensor.dim, options)
    pairs = []
    for x0 in starts:
        x0 = x0 / np.linalg.norm(x0)
        sol = root(equations, np.append(x0, apply_xm(tensor, x0)), method="hybr")
        x = sol.x[:-1]
        norm = np.linalg.norm(x)
        if not sol.success or norm == 0.0:
            continue
        x = x / norm
        value = float(apply_xm1(tensor, x) @ x)
        residual = z_residual(tensor, value, x)
        if residual > accept:
            continue
        duplicate = any(
            abs(p.value - value) <= 1e-8 * max(1.0, abs(value))
            and (np.allclose(p.vector, x, atol=1e-6) or np.allclose(p.vector, -x, atol=1e-6))
            for p in pairs
        )
        if not duplicate:
            pairs.append(EigenEstimate("E", value, x, residual, True, len(starts)))

    logger.debug("real E-eigenpairs: %d found from %d starts", len(pairs), len(starts))
    return sorted(pairs, key=lambda p: p.value)


# テスト用
if __name__ == "__main__":
    from .tensor_core import diagonal_tensor

    A = diagonal_tensor([1.0, 1.0], 4)
    print("=== diag(1, 1), m = 4 ===")
    print(f"  H min : {extreme_h_eigen(A, 'min').value:.10f}")
    print(f"  Z max : {extreme_z_eigen(A, 'max').value:.10f}")
    print(f"  Z min : {extreme_z_eigen(A, 'min').value:.10f}")
    print(f"  disks : {gershgorin_disks(A)}")
