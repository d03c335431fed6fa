"""
Test the definiteness and stability verdicts
"""
import numpy as np
import pytest

from modules.certify import (
    Status,
    Verdict,
    check_corollary_43,
    check_hurwitz_general,
    check_hurwitz_symmetric,
    check_interval_pd,
    check_interval_pd_via_symmetrization,
    check_point_pd,
    check_theorem_5x_interval,
    oracle_extreme_points_pd,
    oracle_sphere_min,
    sphere_points,
)
from modules.errors import PreconditionError, TensorInputError, UnsupportedOrderError
from modules.generator import random_interval
from modules.interval import (
    IntervalTensor,
    negate_interval,
    point_interval,
    vertex_tensor,
    worst_case_value,
)
from modules.quartic import CLAUSES, theorem_instance
from modules.tensor_core import DenseTensor, Symmetry, apply_xm, diagonal_tensor, negate

WITNESS_TOL = 1e-12


def assert_sound(verdict, interval):
    """refutations carry a witness, holds carry a certificate"""
    if verdict.status in (Status.NOT_PSD, Status.NOT_STABLE):
        assert verdict.witness is not None
        target = negate_interval(interval) if verdict.status is Status.NOT_STABLE else interval
        assert worst_case_value(target, verdict.witness) < -WITNESS_TOL
    if verdict.status in (Status.PD, Status.PSD_NOT_PD, Status.STABLE):
        assert verdict.certificates


def asymmetric_center(diagonal, skew):
    """order 4, dim 2: diagonal plus +skew/-skew on two orderings of (1,1,1,2)"""
    arr = np.zeros((2,) * 4)
    arr[0, 0, 0, 0], arr[1, 1, 1, 1] = diagonal
    arr[0, 0, 0, 1] = skew
    arr[0, 0, 1, 0] = -skew
    return DenseTensor(arr)


# =============================================================================
# point tensors
# =============================================================================

def test_point_diagonal_is_pd():
    verdict = check_point_pd(diagonal_tensor([1.0, 1.0, 1.0], 4))
    assert verdict.status is Status.PD
    assert verdict.certificates == ["gershgorin"]
    assert verdict.holds


def test_point_negative_diagonal_entry(fast_options):
    arr = np.zeros((3,) * 4)
    arr[0, 0, 0, 0] = -1.0
    verdict = check_point_pd(DenseTensor(arr), "psd", fast_options)
    assert verdict.status is Status.NOT_PSD
    assert np.allclose(verdict.witness, [1.0, 0.0, 0.0], atol=1e-6)
    assert verdict.witness_value == pytest.approx(-1.0, abs=1e-9)
    assert verdict.refuted


def test_point_square_sum_vertex(fast_options):
    vertex = vertex_tensor(theorem_instance("5.1"), (1, 1, 1))
    verdict = check_point_pd(vertex, "psd", fast_options)
    assert verdict.status is Status.PSD_NOT_PD
    assert np.array_equal(verdict.witness, [1.0, 0.0, 0.0])
    assert verdict.witness_value == 0.0
    assert "corollary_5_1" in verdict.certificates
    assert verdict.holds
    assert check_point_pd(vertex, "pd", fast_options).refuted


def test_point_matrix_path():
    verdict = check_point_pd(DenseTensor([[1.0, 0.0], [0.0, -1.0]]), "psd")
    assert verdict.status is Status.NOT_PSD
    assert "matrix_eigenvalues" in verdict.certificates
    assert apply_xm(DenseTensor([[1.0, 0.0], [0.0, -1.0]]), verdict.witness) < 0

    singular = check_point_pd(DenseTensor([[1.0, 1.0], [1.0, 1.0]]), "psd")
    assert singular.status is Status.PSD_NOT_PD
    assert singular.holds


def test_point_zero_of_form_is_psd_not_pd():
    verdict = check_point_pd(diagonal_tensor([1.0, 0.0], 2), "pd")
    assert verdict.status is Status.PSD_NOT_PD
    assert verdict.witness_value == 0.0
    assert verdict.refuted


@pytest.mark.parametrize("order", [2, 4])
def test_point_tiny_positive_minimum_is_unknown(order, fast_options):
    # PD, but the minimum 1e-9 sits inside (1e-12, margin]
    A = diagonal_tensor([1.0, 1e-9], order)
    for mode in ("pd", "psd"):
        verdict = check_point_pd(A, mode, fast_options)
        assert verdict.status is Status.UNKNOWN
        assert verdict.witness is None
        assert not verdict.refuted


def test_point_odd_order_rejected():
    with pytest.raises(UnsupportedOrderError):
        check_point_pd(DenseTensor(np.zeros((2, 2, 2))))


def test_point_bad_mode():
    with pytest.raises(TensorInputError):
        check_point_pd(diagonal_tensor([1.0], 2), "nd")


def test_corollary_refuted_by_witness(closure, fast_options):
    A = closure({"2222": 1.0, "3333": 1.0, "1122": 5.0, "1133": 5.0, "2233": 5.0,
                 "2223": 5.0, "2333": 5.0})
    verdict = check_point_pd(A, "psd", fast_options)
    assert verdict.status is Status.NOT_PSD
    assert apply_xm(A, verdict.witness) < -WITNESS_TOL
    assert any("corollary_5_3a" in d for d in verdict.diagnostics)


def test_heuristic_pd(fast_options, closure):
    # no corollary fires: 1112 and 1223 are both nonzero
    A = closure({"1111": 2.0, "2222": 2.0, "3333": 2.0, "1122": 1.0, "1133": 1.0, "2233": 1.0,
                 "1112": -0.5, "1223": 0.1})
    verdict = check_point_pd(A, "pd", fast_options)
    assert verdict.status is Status.PD
    assert verdict.certificates == ["heuristic_h_min"]


# =============================================================================
# interval tensors
# =============================================================================

def test_interval_theorem_51(fast_options):
    interval = theorem_instance("5.1")
    verdict = check_interval_pd(interval, "psd", fast_options)
    assert verdict.status is Status.PSD_NOT_PD
    assert "theorem_5_1" in verdict.certificates
    assert "vertex_reduction" in verdict.certificates
    assert list(verdict.per_vertex) == ["+1,+1,+1", "+1,+1,-1", "+1,-1,+1", "+1,-1,-1"]
    assert all(v.status is Status.PSD_NOT_PD for v in verdict.per_vertex.values())
    assert verdict.holds
    assert_sound(verdict, interval)


def test_interval_zero_center(delta_1111_interval, fast_options):
    verdict = check_interval_pd(delta_1111_interval, "psd", fast_options)
    assert verdict.status is Status.NOT_PSD
    assert np.allclose(verdict.witness, [1.0, 0.0, 0.0], atol=1e-6)
    assert verdict.witness_value == pytest.approx(-1.0, abs=1e-9)
    assert_sound(verdict, delta_1111_interval)


@pytest.mark.parametrize("clause", ["5.4a", "5.4b"])
def test_interval_theorem_54(clause, fast_options):
    interval = theorem_instance(clause)
    verdict = check_interval_pd(interval, "pd", fast_options)
    assert verdict.status is Status.PD
    assert f"theorem_{clause.replace('.', '_')}" in verdict.certificates
    assert len(verdict.per_vertex) == 4


@pytest.mark.parametrize("clause", CLAUSES)
def test_theorem_patterns(clause):
    verdict = check_theorem_5x_interval(theorem_instance(clause))
    if clause.startswith("5.4"):
        assert verdict.status is Status.PD
    else:
        assert verdict.status is Status.PSD_NOT_PD
        assert np.array_equal(verdict.witness, [1.0, 0.0, 0.0])
        assert verdict.witness_value == 0.0
    assert "sos_pattern" in verdict.certificates


def test_theorem_pattern_no_match():
    assert check_theorem_5x_interval(random_interval(4, 3, seed=2, symmetric=True)).status is Status.UNKNOWN
    with pytest.raises(PreconditionError):
        check_theorem_5x_interval(random_interval(4, 3, seed=2))


def test_via_symmetrization_fixed_point(fast_options):
    interval = theorem_instance("5.2a")
    direct = check_interval_pd(interval, "psd", fast_options)
    via = check_interval_pd_via_symmetrization(interval, "psd", fast_options)
    assert via.status is direct.status
    assert {k: v.status for k, v in via.per_vertex.items()} == {
        k: v.status for k, v in direct.per_vertex.items()
    }
    assert "symmetrization" in via.certificates


def test_via_symmetrization_asymmetric_center(fast_options):
    interval = point_interval(asymmetric_center((1.0, 1.0), 0.5))
    verdict = check_interval_pd_via_symmetrization(interval, "pd", fast_options)
    assert verdict.status is Status.PD
    assert "gershgorin" in verdict.certificates


@pytest.mark.parametrize("seed", range(5))
def test_matrix_interval_matches_extreme_points(seed):
    interval = random_interval(2, 2, seed=seed, radius_scale=0.3)
    vertex = check_interval_pd(interval, "psd")
    oracle = oracle_extreme_points_pd(interval, "psd")
    assert vertex.status is oracle.status
    assert "extreme_point_enumeration" in oracle.certificates


def test_extreme_points_sphere_grid(delta_1111_interval):
    pd = oracle_extreme_points_pd(point_interval(diagonal_tensor([1.0, 2.0], 4)), "pd",
                                  point_oracle="sphere")
    assert pd.status is Status.PD
    assert "sphere_grid" in pd.certificates

    refuted = oracle_extreme_points_pd(delta_1111_interval, "psd", point_oracle="sphere", resolution=40)
    assert refuted.status is Status.NOT_PSD
    assert worst_case_value(delta_1111_interval, refuted.witness) < -WITNESS_TOL

    flat = oracle_extreme_points_pd(point_interval(diagonal_tensor([1.0, 0.0], 4)), "psd",
                                    point_oracle="sphere")
    assert flat.status is Status.UNKNOWN


def test_extreme_points_bad_point_oracle():
    with pytest.raises(TensorInputError):
        oracle_extreme_points_pd(point_interval(diagonal_tensor([1.0], 2)), point_oracle="grid")


def test_extreme_points_point_interval(fast_options):
    A = diagonal_tensor([1.0, 2.0], 4)
    assert oracle_extreme_points_pd(point_interval(A), "pd", options=fast_options).status is (
        check_point_pd(A, "pd", fast_options).status
    )


# =============================================================================
# Hurwitz stability
# =============================================================================

def test_hurwitz_negative_diagonal(fast_options):
    interval = point_interval(diagonal_tensor([-1.0, -1.0, -1.0], 4))
    verdict = check_hurwitz_symmetric(interval, fast_options)
    assert verdict.status is Status.STABLE
    assert verdict.mode == "hurwitz"
    assert "negation_pd" in verdict.certificates
    assert verdict.holds


def test_hurwitz_positive_diagonal(fast_options):
    interval = point_interval(diagonal_tensor([1.0], 4))
    verdict = check_hurwitz_symmetric(interval, fast_options)
    assert verdict.status is Status.NOT_STABLE
    assert np.allclose(verdict.witness, [1.0])
    assert verdict.refuted
    assert_sound(verdict, interval)


def test_hurwitz_negated_theorem_54a(fast_options):
    interval = theorem_instance("5.4a")
    flipped = IntervalTensor(negate(interval.center), interval.radius)
    assert check_hurwitz_symmetric(flipped, fast_options).status is Status.STABLE
    assert check_hurwitz_general(flipped, fast_options).status is Status.STABLE


def test_hurwitz_symmetric_rejects_asymmetric(fast_options):
    with pytest.raises(PreconditionError):
        check_hurwitz_symmetric(point_interval(asymmetric_center((-1.0, -1.0), 0.5)), fast_options)


def test_hurwitz_general_asymmetric(fast_options):
    stable = check_hurwitz_general(point_interval(asymmetric_center((-1.0, -1.0), 0.5)), fast_options)
    assert stable.status is Status.STABLE
    assert "symmetrization" in stable.certificates

    indefinite = check_hurwitz_general(point_interval(asymmetric_center((1.0, -1.0), 3.0)), fast_options)
    assert indefinite.status is Status.UNKNOWN
    assert indefinite.witness is None


def test_hurwitz_semidefinite_negation_is_unknown(fast_options):
    interval = theorem_instance("5.1")
    flipped = IntervalTensor(negate(interval.center), interval.radius)
    verdict = check_hurwitz_symmetric(flipped, fast_options)
    assert verdict.status is Status.UNKNOWN
    assert verdict.witness is None


# =============================================================================
# corollary checker and oracles
# =============================================================================

def test_corollary_43_examples(closure):
    pd = check_corollary_43(closure({"1111": 1.0, "2222": 1.0, "3333": 1.0,
                                     "1122": 0.6, "1133": 0.6, "1123": 0.5}))
    assert pd.status is Status.PD
    assert pd.certificates == ["corollary_5_1"]

    psd = check_corollary_43(closure({"1122": 0.6, "1133": 0.6, "1123": 0.5}))
    assert psd.status is Status.PSD_NOT_PD
    assert np.array_equal(psd.witness, [1.0, 0.0, 0.0])

    unknown = check_corollary_43(closure({"1111": 1.0, "2222": 1.0, "3333": 1.0,
                                          "1122": 0.6, "1133": 0.6, "1123": 0.7}))
    assert unknown.status is Status.UNKNOWN


def test_sphere_points_are_unit():
    for dim in (2, 3, 4):
        pts = sphere_points(dim, 20)
        assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)


def test_sphere_oracle_diagonal():
    value, x = oracle_sphere_min(diagonal_tensor([2.0, 5.0], 4), resolution=360)
    assert value == pytest.approx(2.0, abs=1e-4)
    assert np.allclose(np.abs(x), [1.0, 0.0], atol=1e-6)


def test_sphere_oracle_intervals(delta_1111_interval):
    value, _ = oracle_sphere_min(theorem_instance("5.1"), resolution=200)
    assert -1e-9 <= value <= 1e-6

    value, x = oracle_sphere_min(delta_1111_interval, resolution=200)
    assert value == pytest.approx(-1.0, abs=1e-9)
    assert np.allclose(np.abs(x), [1.0, 0.0, 0.0], atol=1e-6)


def test_sphere_oracle_quotient_and_refine():
    A = diagonal_tensor([2.0, 5.0], 4)
    value, _ = oracle_sphere_min(A, resolution=50, objective="quotient")
    assert value == pytest.approx(2.0, abs=1e-12)
    refined, _ = oracle_sphere_min(A, resolution=7, refine=True)
    coarse, _ = oracle_sphere_min(A, resolution=7)
    assert refined <= coarse
    with pytest.raises(TensorInputError):
        oracle_sphere_min(A, objective="norm")


def test_verdict_mode_mapping():
    assert Verdict(Status.PSD_NOT_PD, "psd").holds
    assert Verdict(Status.PSD_NOT_PD, "pd").refuted
    assert not Verdict(Status.UNKNOWN, "pd").holds
    assert not Verdict(Status.UNKNOWN, "pd").refuted
    assert Verdict(Status.NOT_STABLE, "hurwitz").refuted
