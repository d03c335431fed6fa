"""
Test the 4th-order 3-dimensional sufficient conditions and their square sums
"""
import numpy as np
import pytest

from modules.errors import UnsupportedOrderError
from modules.interval import (
    IntervalTensor,
    enumerate_sign_vectors,
    is_symmetric_interval,
    vertex_tensor,
)
from modules.quartic import (
    CLAUSES,
    TWO_THIRDS,
    corollary_matches,
    representative_entries,
    sos_value,
    theorem_instance,
    theorem_matches,
)
from modules.tensor_core import DenseTensor, Symmetry, apply_xm, diagonal_tensor

SAMPLES = 1000
REL_TOLERANCE = 1e-10


@pytest.mark.parametrize("clause", CLAUSES)
def test_vertex_forms_match_square_sums(clause):
    interval = theorem_instance(clause)
    rng = np.random.default_rng(CLAUSES.index(clause))
    points = rng.standard_normal((SAMPLES, 3))
    for z in enumerate_sign_vectors(3):
        vertex = vertex_tensor(interval, z, "minus")
        for x in points:
            expected = sos_value(clause, x, z)
            assert expected >= 0.0
            assert abs(apply_xm(vertex, x) - expected) <= REL_TOLERANCE * max(1.0, expected)


@pytest.mark.parametrize("clause", CLAUSES)
def test_theorem_instance_matches_own_clause(clause):
    interval = theorem_instance(clause)
    assert is_symmetric_interval(interval)
    assert clause in [m.clause for m in theorem_matches(interval)]


def test_theorem_instance_entries():
    interval = theorem_instance("5.4a")
    assert interval.center.entries[0, 0, 1, 1] == TWO_THIRDS
    assert interval.center.entries[2, 2, 2, 2] == 1.0
    assert interval.radius.entries[0, 2, 2, 2] == 1.0
    assert interval.radius.entries[1, 1, 1, 2] == 1.0
    assert interval.free_entries == 12


def test_theorem_match_needs_exact_span():
    center, radius = representative_entries("5.1")
    assert radius == {"1123": 1.0}
    interval = theorem_instance("5.1")
    wide = IntervalTensor(interval.center, DenseTensor(2.0 * interval.radius.entries, Symmetry.TRUE))
    assert "5.1" not in [m.clause for m in theorem_matches(wide)]


def test_match_tags():
    matches = theorem_matches(theorem_instance("5.2b"))
    assert "theorem_5_2b" in [m.tag for m in matches]
    assert all(not m.definite and m.witness_axis == 0 for m in matches)
    assert all(m.definite for m in theorem_matches(theorem_instance("5.4b")))


def test_corollary_51_definite(closure):
    A = closure({"1111": 1.0, "2222": 1.0, "3333": 1.0, "1122": 0.6, "1133": 0.6, "1123": 0.5})
    matches = corollary_matches(A)
    assert [m.tag for m in matches] == ["corollary_5_1"]
    assert matches[0].definite


def test_corollary_51_semidefinite(closure):
    A = closure({"1122": 0.6, "1133": 0.6, "1123": 0.5})
    matches = corollary_matches(A)
    assert [m.tag for m in matches] == ["corollary_5_1"]
    assert not matches[0].definite
    assert matches[0].witness_axis == 0


def test_corollary_hypothesis_fails(closure):
    A = closure({"1111": 1.0, "2222": 1.0, "3333": 1.0, "1122": 0.6, "1133": 0.6, "1123": 0.7})
    assert corollary_matches(A) == []


def test_corollary_53a_hypotheses_admit_indefinite_tensor(closure):
    A = closure({"2222": 1.0, "3333": 1.0, "1122": 5.0, "1133": 5.0, "2233": 5.0,
                 "2223": 5.0, "2333": 5.0})
    assert "5.3a" in [m.clause for m in corollary_matches(A)]
    assert apply_xm(A, [0.0, 1.0, -1.0]) == pytest.approx(-8.0)


def test_corollary_54b_hypotheses_admit_indefinite_tensor(closure):
    A = closure({"1111": 1.0, "2222": 1.0, "3333": 1.0, "1122": 1.0, "1133": 1.0, "2233": 1.0,
                 "1112": -1.0, "2223": -1.0, "1123": -1.0})
    assert "5.4b" in [m.clause for m in corollary_matches(A)]
    assert apply_xm(A, [1.0, 0.9, 0.5]) == pytest.approx(-1.1644, abs=1e-4)


def test_pattern_checks_need_43():
    with pytest.raises(UnsupportedOrderError):
        corollary_matches(diagonal_tensor([1.0, 1.0], 4))


def test_unknown_clause():
    with pytest.raises(KeyError):
        representative_entries("5.9")
    with pytest.raises(KeyError):
        sos_value("5.9", [1.0, 0.0, 0.0])
