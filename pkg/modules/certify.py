"""
正定値性・Hurwitz 安定性の判定
点テンソルの判定手順、頂点テンソルによる区間テンソルの判定、
-A^I の正定値性による安定性判定、検証用の総当たりオラクル
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm, qmc

from .constants import DEFAULT_RESOLUTION, EXTREME_POINT_CAP, SPHERE_ORACLE_TOL, WITNESS_TOL
from .errors import PreconditionError, TensorError, TensorInputError
from .interval import (
    IntervalTensor,
    enumerate_extreme_points,
    enumerate_sign_vectors,
    is_symmetric_interval,
    negate_interval,
    require_even_order,
    symmetrized_interval,
    vertex_tensor,
    worst_case_value,
)
from .quartic import corollary_matches, theorem_matches
from .spectra import SolverOptions, extreme_h_eigen, h_min_lower_bound, require_symmetric
from .tensor_core import HomogeneousForm, Symmetry, apply_xm, symmetrize

logger = logging.getLogger(__name__)

MODES = ("pd", "psd")


class Status(Enum):
    PD = "PD"
    PSD_NOT_PD = "PSD_NOT_PD"
    NOT_PSD = "NOT_PSD"
    STABLE = "STABLE"
    NOT_STABLE = "NOT_STABLE"
    UNKNOWN = "UNKNOWN"


# mode ごとに「成り立つ」とみなす状態と「否定された」状態
HOLDS = {
    "pd": {Status.PD},
    "psd": {Status.PD, Status.PSD_NOT_PD},
    "hurwitz": {Status.STABLE},
}
REFUTED = {
    "pd": {Status.NOT_PSD, Status.PSD_NOT_PD},
    "psd": {Status.NOT_PSD},
    "hurwitz": {Status.NOT_STABLE},
}


@dataclass
class Verdict:
    """
    判定結果

    Parameters
    ----------
    status : Status
    mode : {'pd', 'psd', 'hurwitz'}
        終了コードの対応を決める
    witness : np.ndarray or None
        NOT_PSD / NOT_STABLE / PSD_NOT_PD の根拠となるベクトル
    witness_value : float or None
        区間（点テンソル）の最悪値 worst_case_value(I, witness)
    certificates : list of str
        根拠のタグ（gershgorin, vertex_reduction, corollary_5_2a, ...）
    per_vertex : dict or None
        正準な符号ベクトルのラベル → 頂点ごとの Verdict
    diagnostics : list of str
    timing_ms : float or None
    """
    status: Status
    mode: str = "pd"
    witness: np.ndarray = None
    witness_value: float = None
    certificates: list = field(default_factory=list)
    per_vertex: dict = None
    diagnostics: list = field(default_factory=list)
    timing_ms: float = None

    @property
    def holds(self):
        return self.status in HOLDS[self.mode]

    @property
    def refuted(self):
        return self.status in REFUTED[self.mode]


def _check_mode(mode):
    if mode not in MODES:
        raise TensorInputError(f"mode must be one of {MODES}, got {mode!r}")


def _merge_tags(*groups):
    tags = []
    for group in groups:
        for tag in group:
            if tag not in tags:
                tags.append(tag)
    return tags


def _basis(dim, axis):
    e = np.zeros(dim)
    e[axis] = 1.0
    return e


# =============================================================================
# 点テンソル
# =============================================================================

def check_point_pd(tensor, mode="pd", options=None):
    """
    点テンソルの正定値性・半正定値性の判定

    手順
    1. 対称化
    2. Gershgorin 下界 > margin なら PD。下界 >= 0 なら半正定値の根拠として保持
    3. m = 2 は行列の固有値で決める
    4. m = 4, n = 3 は系の仮定を照合
    5. 多点スタートで最小 H 固有値を探し、A x^m < -1e-12 の x があれば NOT_PSD
       （系の一致より優先する）
    6. 系の結論
    7. 半正定値の根拠があり反例候補の値が 1e-12 以下（形式の零点）なら PSD_NOT_PD。
       値が (1e-12, margin] に残る場合は決めない
    8. 収束した最小値 > margin なら PD（ヒューリスティック）
    9. それ以外は UNKNOWN

    Parameters
    ----------
    tensor : DenseTensor
        偶数次
    mode : {'pd', 'psd'}
    options : SolverOptions, optional

    Returns
    -------
    verdict : Verdict
    """
    options = options or SolverOptions()
    _check_mode(mode)
    require_even_order(tensor.order)
    sym = tensor if tensor.symmetric is Symmetry.TRUE else symmetrize(tensor)
    m, n = tensor.order, tensor.dim

    lower = h_min_lower_bound(sym)
    if lower > options.margin:
        return Verdict(
            Status.PD, mode, certificates=["gershgorin"],
            diagnostics=[f"gershgorin lower bound {lower:.6g}"],
        )
    psd_certified = lower >= 0.0

    if m == 2:
        eigenvalues, vectors = np.linalg.eigh(sym.entries)
        x = vectors[:, 0]
        value = apply_xm(tensor, x)
        note = [f"smallest matrix eigenvalue {eigenvalues[0]:.6g}"]
        if value < -WITNESS_TOL:
            return Verdict(Status.NOT_PSD, mode, x, value, ["matrix_eigenvalues", "witness_evaluation"],
                           diagnostics=note)
        if eigenvalues[0] > options.margin:
            return Verdict(Status.PD, mode, certificates=["matrix_eigenvalues"], diagnostics=note)
        if value <= WITNESS_TOL:
            return Verdict(Status.PSD_NOT_PD, mode, x, value, ["matrix_eigenvalues"], diagnostics=note)
        return Verdict(Status.UNKNOWN, mode, diagnostics=note)

    matches = corollary_matches(sym) if (m, n) == (4, 3) else []

    estimate = extreme_h_eigen(sym, "min", options)
    x = estimate.vector
    value = apply_xm(tensor, x)
    diagnostics = [
        f"gershgorin lower bound {lower:.6g}",
        f"h-min estimate {estimate.value:.6g} (residual {estimate.residual:.2e}, "
        f"converged={estimate.converged})",
    ]

    if value < -WITNESS_TOL:
        for match in matches:
            logger.warning(
                "%s hypotheses hold but x=%s gives A x^m = %.6g", match.tag, np.round(x, 6), value
            )
            diagnostics.append(f"{match.tag} hypotheses met, refuted by witness")
        return Verdict(Status.NOT_PSD, mode, x, value, ["witness_evaluation"], diagnostics=diagnostics)

    definite = [match for match in matches if match.definite]
    if definite:
        return Verdict(Status.PD, mode, certificates=[definite[0].tag], diagnostics=diagnostics)
    if matches:
        match = matches[0]
        e = _basis(n, match.witness_axis)
        return Verdict(Status.PSD_NOT_PD, mode, e, apply_xm(tensor, e),
                       [match.tag, "witness_evaluation"], diagnostics=diagnostics)

    if psd_certified and value <= WITNESS_TOL:
        return Verdict(Status.PSD_NOT_PD, mode, x, value, ["gershgorin", "witness_evaluation"],
                       diagnostics=diagnostics)
    if estimate.converged and estimate.value > options.margin:
        return Verdict(Status.PD, mode, certificates=["heuristic_h_min"], diagnostics=diagnostics)

    return Verdict(Status.UNKNOWN, mode, diagnostics=diagnostics)


# =============================================================================
# 区間テンソル
# =============================================================================

def _aggregate(verdicts, mode, interval, tags):
    """
    頂点（または端点）ごとの判定の集約

    正準な列挙順で最初の NOT_PSD を反例とする。反例の値は区間の最悪値で取り直す。
    """
    for v in verdicts:
        if v.status is Status.NOT_PSD:
            value = worst_case_value(interval, v.witness)
            return Verdict(Status.NOT_PSD, mode, v.witness, value,
                           _merge_tags(["witness_evaluation"], tags))

    certificates = _merge_tags(tags, *(v.certificates for v in verdicts))
    if any(v.status is Status.UNKNOWN for v in verdicts):
        return Verdict(Status.UNKNOWN, mode, certificates=certificates)
    if all(v.status is Status.PD for v in verdicts):
        return Verdict(Status.PD, mode, certificates=certificates)

    first = next(v for v in verdicts if v.status is Status.PSD_NOT_PD)
    value = worst_case_value(interval, first.witness)
    return Verdict(Status.PSD_NOT_PD, mode, first.witness, value, certificates)


def _vertex_map(interval, signs, mode, options):
    inner = options.replace(jobs=1)

    def run(z):
        verdict = check_point_pd(vertex_tensor(interval, z, "minus"), mode, inner)
        logger.debug("vertex %s: %s %s", z.label, verdict.status.value, verdict.certificates)
        return verdict

    if options.jobs > 1 and len(signs) > 1:
        with ThreadPoolExecutor(max_workers=options.jobs) as pool:
            return list(pool.map(run, signs))
    return [run(z) for z in signs]


def check_interval_pd(interval, mode="pd", options=None):
    """
    区間テンソルの正定値性（半正定値性）

    2^{n-1} 個の正準な z に対する頂点テンソル A^z を全て判定する。
    m = 4, n = 3 の対称な区間では各定理の仮定も照合する。

    Returns
    -------
    verdict : Verdict
        per_vertex に頂点ごとの判定を持つ
    """
    options = options or SolverOptions()
    _check_mode(mode)
    require_even_order(interval.order)
    signs = enumerate_sign_vectors(interval.dim, canonical=True)
    logger.info("vertex map over %d canonical sign vectors", len(signs))

    verdicts = _vertex_map(interval, signs, mode, options)
    verdict = _aggregate(verdicts, mode, interval, ["vertex_reduction"])

    if (interval.order, interval.dim) == (4, 3) and is_symmetric_interval(interval):
        pattern = check_theorem_5x_interval(interval)
        if pattern.status is not Status.UNKNOWN:
            verdict = _apply_theorem(verdict, pattern, interval)

    verdict.per_vertex = {z.label: v for z, v in zip(signs, verdicts)}
    logger.info("interval verdict: %s %s", verdict.status.value, verdict.certificates)
    return verdict


def _apply_theorem(verdict, pattern, interval):
    """定理の仮定が成り立つ場合、頂点判定に根拠を加える（UNKNOWN なら定理の結論を採る）"""
    if verdict.status is Status.NOT_PSD:
        logger.warning("%s hypotheses hold but a vertex witness refutes", pattern.certificates[0])
        verdict.diagnostics.append(f"{pattern.certificates[0]} hypotheses met, refuted by witness")
        return verdict
    if verdict.status is Status.UNKNOWN or (
        verdict.status is Status.PSD_NOT_PD and pattern.status is Status.PSD_NOT_PD
    ):
        merged = Verdict(pattern.status, verdict.mode, pattern.witness, pattern.witness_value,
                         _merge_tags(pattern.certificates, verdict.certificates),
                         diagnostics=verdict.diagnostics)
        if merged.witness is None and verdict.witness is not None:
            merged.witness, merged.witness_value = verdict.witness, verdict.witness_value
        return merged
    verdict.certificates = _merge_tags(verdict.certificates, pattern.certificates)
    return verdict


def check_interval_pd_via_symmetrization(interval, mode="pd", options=None):
    """対称化した区間テンソル A_s^I で判定する"""
    require_even_order(interval.order)
    verdict = check_interval_pd(symmetrized_interval(interval), mode, options)
    verdict.certificates = _merge_tags(verdict.certificates, ["symmetrization"])
    return verdict


# =============================================================================
# Hurwitz 安定性
# =============================================================================

_STABILITY = {
    Status.PD: Status.STABLE,
    Status.NOT_PSD: Status.NOT_STABLE,
    Status.PSD_NOT_PD: Status.UNKNOWN,
    Status.UNKNOWN: Status.UNKNOWN,
}


def _as_stability(verdict):
    witness = verdict.witness if verdict.status is Status.NOT_PSD else None
    value = verdict.witness_value if witness is not None else None
    out = Verdict(_STABILITY[verdict.status], "hurwitz", witness, value,
                  list(verdict.certificates), diagnostics=list(verdict.diagnostics))
    if verdict.status is Status.PSD_NOT_PD:
        out.certificates = []
        out.diagnostics.append("-A^I is positive semi-definite but not positive definite within margin")
    return out


def check_hurwitz_symmetric(interval, options=None):
    """
    対称な区間テンソルの Hurwitz 安定性

    A^I が安定 ⇔ -A^I = [-upper, -lower] が正定値 ⇔ 全ての z で -Ã^z が正定値

    Raises
    ------
    PreconditionError
        区間が対称でない（check_hurwitz_general を使う）
    """
    require_even_order(interval.order)
    if not is_symmetric_interval(interval):
        raise PreconditionError(
            "interval tensor is not symmetric; use check_hurwitz_general for asymmetric input"
        )
    negated = negate_interval(interval)
    for z in enumerate_sign_vectors(interval.dim, canonical=True):
        plus = vertex_tensor(interval, z, "plus").entries
        minus = vertex_tensor(negated, z, "minus").entries
        if not np.array_equal(-plus, minus):
            raise TensorError(f"-Ã^z and the negated vertex differ for z = {z.label}")

    pd = check_interval_pd(negated, "pd", options)
    verdict = _as_stability(pd)
    verdict.per_vertex = {label: _as_stability(v) for label, v in pd.per_vertex.items()}
    if verdict.status is Status.STABLE:
        verdict.certificates = _merge_tags(verdict.certificates, ["negation_pd"])
    logger.info("hurwitz verdict: %s %s", verdict.status.value, verdict.certificates)
    return verdict


def check_hurwitz_general(interval, options=None):
    """
    一般（非対称）の区間テンソル：A_s^I が安定なら A^I も安定

    逆は成り立たないので NOT_STABLE は返さない
    """
    require_even_order(interval.order)
    sym = check_hurwitz_symmetric(symmetrized_interval(interval), options)
    if sym.status is Status.STABLE:
        sym.certificates = _merge_tags(sym.certificates, ["symmetrization"])
        return sym
    return Verdict(
        Status.UNKNOWN, "hurwitz", per_vertex=sym.per_vertex,
        diagnostics=sym.diagnostics + [
            f"symmetrized interval is {sym.status.value}; stability of the symmetrization "
            "is only sufficient for asymmetric intervals"
        ],
    )


# =============================================================================
# 4次3次元の十分条件
# =============================================================================

def check_corollary_43(tensor):
    """
    対称な 4次3次元点テンソルが系の仮定を満たすか（記載どおりに照合）

    Returns
    -------
    verdict : Verdict
        一致すれば結論（PD または PSD_NOT_PD）、なければ UNKNOWN
    """
    tensor = require_symmetric(tensor)
    matches = corollary_matches(tensor)
    definite = [match for match in matches if match.definite]
    if definite:
        return Verdict(Status.PD, certificates=[definite[0].tag])
    if matches:
        e = _basis(tensor.dim, matches[0].witness_axis)
        return Verdict(Status.PSD_NOT_PD, "psd", e, apply_xm(tensor, e), [matches[0].tag])
    return Verdict(Status.UNKNOWN)


def check_theorem_5x_interval(interval):
    """
    対称な 4次3次元区間テンソルの境界値が各定理の仮定を満たすか

    Returns
    -------
    verdict : Verdict
        5.1 - 5.3 は PSD_NOT_PD（反例 e_1）、5.4 は PD、一致しなければ UNKNOWN
    """
    if not is_symmetric_interval(interval):
        raise PreconditionError("theorem patterns need a symmetric interval tensor")
    matches = theorem_matches(interval)
    definite = [match for match in matches if match.definite]
    if definite:
        return Verdict(Status.PD, certificates=[definite[0].tag, "sos_pattern"])
    if matches:
        e = _basis(interval.dim, matches[0].witness_axis)
        return Verdict(Status.PSD_NOT_PD, "psd", e, worst_case_value(interval, e),
                       [matches[0].tag, "sos_pattern"])
    return Verdict(Status.UNKNOWN)


# =============================================================================
# 検証用オラクル
# =============================================================================

def sphere_points(dim, resolution=DEFAULT_RESOLUTION):
    """
    単位球面上の標本点

    n = 2 は半円、n = 3 は半球の角度格子（偶数次では x と -x が同値）。
    n > 3 は Halton 列を正規分布で写して正規化した resolution^2 点と基底ベクトル。
    """
    if dim == 1:
        return np.ones((1, 1))
    if dim == 2:
        theta = np.linspace(0.0, np.pi, resolution, endpoint=False)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if dim == 3:
        theta = np.linspace(0.0, np.pi / 2.0, resolution)
        phi = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
        t, p = np.meshgrid(theta, phi, indexing="ij")
        pts = np.column_stack([
            (np.sin(t) * np.cos(p)).ravel(),
            (np.sin(t) * np.sin(p)).ravel(),
            np.cos(t).ravel(),
        ])
        return pts
    sampler = qmc.Halton(d=dim, scramble=True, seed=0)
    gauss = norm.ppf(sampler.random(resolution ** 2))
    gauss = gauss / np.linalg.norm(gauss, axis=1, keepdims=True)
    return np.vstack([np.eye(dim), gauss])


def _objective(obj, objective):
    """点の並び (k, n) → 値 (k,) の関数"""
    if isinstance(obj, IntervalTensor):
        center = HomogeneousForm(obj.center)
        radius = HomogeneousForm(obj.radius)

        def form(points):
            return center.evaluate_many(points) - radius.evaluate_many(np.abs(points))
    else:
        form = HomogeneousForm(obj).evaluate_many

    if objective == "form":
        return form
    if objective == "quotient":
        m = obj.order
        return lambda points: form(points) / np.sum(np.atleast_2d(points) ** m, axis=1)
    raise TensorInputError(f"objective must be 'form' or 'quotient', got {objective!r}")


def oracle_sphere_min(obj, resolution=DEFAULT_RESOLUTION, refine=False, objective="form"):
    """
    球面標本上の最小値（真の最小値の上界）

    Parameters
    ----------
    obj : DenseTensor or IntervalTensor
        区間なら最悪値 A_c x^m - Δ|x|^m を評価する
    resolution : int
        角度あたりの分割数
    refine : bool
        最良の標本点から Nelder-Mead で局所改善する
    objective : {'form', 'quotient'}
        'form' は単位 2 ノルム球面上の A x^m、'quotient' は A x^m / Σ x_i^m

    Returns
    -------
    value : float
    x : np.ndarray
    """
    require_even_order(obj.order)
    evaluate = _objective(obj, objective)
    points = sphere_points(obj.dim, resolution)
    values = evaluate(points)
    best = int(np.argmin(values))
    value, x = float(values[best]), points[best]

    if refine and obj.dim > 1:
        def on_sphere(y):
            norm_y = np.linalg.norm(y)
            if norm_y == 0.0:
                return np.inf
            return float(evaluate(y / norm_y)[0])

        res = minimize(on_sphere, x, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        y = res.x / np.linalg.norm(res.x)
        refined = float(evaluate(y)[0])
        if refined < value:
            value, x = refined, y
    return value, x


def _sphere_point_verdict(tensor, mode, resolution, tol):
    """球面格子の最小値（Nelder-Mead で改善）の符号で決める。|最小値| <= tol は UNKNOWN"""
    value, x = oracle_sphere_min(tensor, resolution, refine=True)
    if value < -tol:
        return Verdict(Status.NOT_PSD, mode, x, value, ["sphere_grid", "witness_evaluation"])
    if value > tol:
        return Verdict(Status.PD, mode, certificates=["sphere_grid"])
    return Verdict(Status.UNKNOWN, mode, diagnostics=[f"sphere-grid minimum {value:.3g} within {tol:g}"])


def oracle_extreme_points_pd(interval, mode="pd", cap=EXTREME_POINT_CAP, options=None,
                             point_oracle="certify", resolution=DEFAULT_RESOLUTION,
                             tol=SPHERE_ORACLE_TOL):
    """
    端点集合の全列挙による判定（頂点判定の検証用）

    Parameters
    ----------
    interval : IntervalTensor
    mode : {'pd', 'psd'}
    cap : int
    options : SolverOptions, optional
    point_oracle : {'certify', 'sphere'}
        'certify' は各端点を check_point_pd で判定する（m = 2 は行列の固有値で決まる）。
        'sphere' は H 固有値ソルバーを使わず、球面格子の最小値を tol と比べる
    resolution : int
    tol : float

    Raises
    ------
    EnumerationCapError
        端点数が cap を超える
    """
    options = options or SolverOptions()
    _check_mode(mode)
    require_even_order(interval.order)
    if point_oracle not in ("certify", "sphere"):
        raise TensorInputError(f"point_oracle must be 'certify' or 'sphere', got {point_oracle!r}")
    points = enumerate_extreme_points(interval, cap)
    if point_oracle == "sphere":
        verdicts = [_sphere_point_verdict(p, mode, resolution, tol) for p in points]
    else:
        verdicts = [check_point_pd(p, mode, options) for p in points]
    verdict = _aggregate(verdicts, mode, interval, ["extreme_point_enumeration"])
    verdict.diagnostics.append(f"{len(points)} extreme points checked ({point_oracle})")
    return verdict
