import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from windens import DomainMap, FeasibilityError, WindowBasis, sample_set
from windens.design import DesignMatrix, build_design, build_gram

from .helpers import naive_gram, random_unit_instance


def unit_samples(ts):
    return sample_set(np.asarray(ts, dtype=float), DomainMap(0.0, 1.0))


def test_sample_set_requires_observations():
    with pytest.raises(ValueError):
        sample_set([])


def test_sample_set_infers_padded_interval():
    ss = sample_set([1.0, 2.0, 4.0])
    assert ss.domain.a < 1.0
    assert ss.domain.b > 4.0
    assert np.all((ss.unit_samples > 0.0) & (ss.unit_samples < 1.0))


def test_sample_outside_declared_domain():
    with pytest.raises(ValueError):
        sample_set([0.5, 2.5], DomainMap(0.0, 1.0))


def test_design_column_at_left_endpoint():
    design = build_design(WindowBasis(1), unit_samples([0.0]), [1.0, 1.0])
    np.testing.assert_array_equal(design.entries, [[2.0], [0.0]])


def test_design_zero_weights_infeasible():
    with pytest.raises(FeasibilityError):
        build_design(WindowBasis(1), unit_samples([0.3]), [0.0, 0.0])


def test_design_reports_first_uncovered_sample():
    # Window 1 vanishes at t=0, so zero weight on window 0 starves that sample.
    with pytest.raises(FeasibilityError, match="sample index 0"):
        build_design(WindowBasis(1), unit_samples([0.0, 0.5]), [0.0, 1.0])


def test_design_midpoint_with_uneven_weights():
    design = build_design(WindowBasis(2), unit_samples([0.5]), [1.0, 2.0, 1.0])
    np.testing.assert_allclose(
        design.entries[:, 0], [0.75, 3.0, 0.75], rtol=1e-14
    )


def test_gram_single_sample():
    design = build_design(WindowBasis(1), unit_samples([0.0]), [1.0, 1.0])
    gram = build_gram(design, 1.0)
    np.testing.assert_array_equal(gram.matrix, [[4.0]])
    assert gram.dbar == 4.0
    assert gram.m == 1


def test_gram_orthogonal_columns_identity():
    w = 2**-0.5
    design = build_design(WindowBasis(1), unit_samples([0.0, 1.0]), [w, w])
    gram = build_gram(design, 1.0)
    np.testing.assert_allclose(gram.matrix, np.eye(2), rtol=0, atol=5e-16)


def test_gram_matches_naive_double_loop():
    rng = np.random.default_rng(5)
    basis, samples = random_unit_instance(rng, 3, 2)
    design = build_design(basis, samples, rng.uniform(0.5, 1.5, 3))
    gram = build_gram(design, 1.0)
    np.testing.assert_allclose(
        gram.matrix, naive_gram(design.entries, 1.0), rtol=1e-12
    )


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40)
def test_gram_exact_symmetry(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 12))
    degree = int(rng.integers(0, 8))
    basis, samples = random_unit_instance(rng, m, degree)
    design = build_design(basis, samples, rng.uniform(0.1, 2.0, degree + 1))
    gram = build_gram(design, 1.0)
    assert np.abs(gram.matrix - gram.matrix.T).max() == 0.0


def test_gram_positive_semidefinite():
    rng = np.random.default_rng(17)
    basis, samples = random_unit_instance(rng, 10, 6)
    design = build_design(basis, samples, rng.uniform(0.1, 2.0, 7))
    gram = build_gram(design, 1.0)
    for _ in range(100):
        z = rng.normal(size=10)
        assert z @ gram.matrix @ z >= -1e-12


def test_gram_scaling_in_r_is_exact():
    rng = np.random.default_rng(23)
    basis, samples = random_unit_instance(rng, 7, 4)
    design = build_design(basis, samples, rng.uniform(0.1, 2.0, 5))
    single = build_gram(design, 1.0)
    double = build_gram(design, 2.0)
    np.testing.assert_array_equal(double.matrix, 2.0 * single.matrix)
    assert double.r == 2.0


def test_gram_rejects_dead_diagonal():
    dead = DesignMatrix(entries=np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(FeasibilityError, match="sample index 1"):
        build_gram(dead, 1.0)


def test_gram_rejects_bad_r():
    design = build_design(WindowBasis(1), unit_samples([0.5]), [1.0, 1.0])
    with pytest.raises(ValueError):
        build_gram(design, 0.0)


def test_design_weight_shape_checked():
    with pytest.raises(ValueError, match="shape"):
        build_design(WindowBasis(2), unit_samples([0.5]), [1.0, 1.0])
    with pytest.raises(ValueError):
        build_design(WindowBasis(1), unit_samples([0.5]), [1.0, -1.0])


def test_duplicate_observations_allowed():
    design = build_design(
        WindowBasis(2), unit_samples([0.4, 0.4, 0.9]), [1.0, 1.0, 1.0]
    )
    gram = build_gram(design, 1.0)
    np.testing.assert_array_equal(gram.matrix[0], gram.matrix[1])
