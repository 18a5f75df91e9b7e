import json
import math

import numpy as np
import pytest

from windens import (
    DensityModel,
    DomainMap,
    ModelDocumentError,
    WindowBasis,
    fit,
    sample_set,
)
from windens.model import (
    document_text,
    integrate,
    load,
    log_likelihood,
    pdf,
    save,
)
from windens.windows import window_matrix

from .helpers import random_unit_instance


def uniform_model(a=0.0, b=1.0, r=1.0):
    return DensityModel(
        basis=WindowBasis(0),
        domain=DomainMap(a, b),
        coefficients=np.array([r]),
        raw_inner_product=r,
        r=r,
        m=1,
        epsilon=1e-8,
        delta=1e-10,
    )


def equal_thirds_model():
    return DensityModel(
        basis=WindowBasis(2),
        domain=DomainMap(0.0, 1.0),
        coefficients=np.array([1.0, 1.0, 1.0]) / 3.0,
        raw_inner_product=1.0,
        r=1.0,
        m=1,
        epsilon=1e-8,
        delta=1e-10,
    )


def test_pdf_uniform_unit_interval():
    assert pdf(uniform_model(), 0.3) == 1.0


def test_pdf_uniform_wide_interval():
    assert pdf(uniform_model(0.0, 4.0), 2.0) == 0.25


def test_pdf_equal_weights_partition():
    # Window values at 0.5 are [0.75, 1.5, 0.75]; with all-equal weights
    # the scaled partition of unity collapses the mixture to the constant
    # (n+1)/3 * (1/... ) = 1, as it must for any t.
    model = equal_thirds_model()
    windows = window_matrix(model.basis, [0.5])[:, 0]
    np.testing.assert_allclose(windows, [0.75, 1.5, 0.75], rtol=1e-14)
    assert pdf(model, 0.5) == pytest.approx(1.0, abs=1e-14)
    assert pdf(model, 0.123) == pytest.approx(1.0, abs=1e-12)


def test_pdf_outside_interval_is_zero():
    model = uniform_model(0.0, 4.0)
    assert pdf(model, -0.5) == 0.0
    assert pdf(model, 4.5) == 0.0
    np.testing.assert_array_equal(
        pdf(model, np.array([-1.0, 2.0, 5.0])), [0.0, 0.25, 0.0]
    )


def test_log_likelihood_uniform():
    assert log_likelihood(uniform_model(), np.array([0.1, 0.5, 0.9])) == 0.0
    wide = uniform_model(0.0, 4.0)
    got = log_likelihood(wide, np.array([1.0, 2.0, 3.0]))
    assert got == pytest.approx(3.0 * math.log(0.25), rel=1e-15)


def test_log_likelihood_names_dead_sample():
    model = DensityModel(
        basis=WindowBasis(1),
        domain=DomainMap(0.0, 1.0),
        coefficients=np.array([0.0, 1.0]),
        raw_inner_product=1.0,
        r=1.0,
        m=1,
        epsilon=1e-8,
        delta=1e-10,
    )
    # Window 1 vanishes at x=0, and window 0 has no weight there.
    with pytest.raises(ValueError, match="sample index 1"):
        log_likelihood(model, np.array([0.5, 0.0]))


def test_fitted_model_beats_sphere_perturbations():
    rng = np.random.default_rng(14)
    basis, samples = random_unit_instance(rng, 25, 5)
    model = fit(basis, samples)
    base = log_likelihood(model, samples.observations)
    amplitudes = np.sqrt(model.coefficients)
    phi = window_matrix(basis, samples.unit_samples)
    for _ in range(100):
        jittered = np.abs(amplitudes + rng.normal(0.0, 1e-2, amplitudes.size))
        jittered /= np.linalg.norm(jittered)
        trial = float(np.log((jittered**2) @ phi).sum())
        assert trial <= base + 1e-10


def test_integrate_uniform():
    assert integrate(uniform_model()) == pytest.approx(1.0, abs=1e-10)


def test_integrate_fitted_models():
    rng = np.random.default_rng(21)
    basis, samples = random_unit_instance(rng, 15, 6)
    assert integrate(fit(basis, samples)) == pytest.approx(1.0, abs=1e-8)
    assert integrate(fit(basis, samples, r=2.0)) == pytest.approx(2.0, abs=1e-8)


def test_pdf_nonnegative_on_dense_grid():
    rng = np.random.default_rng(9)
    basis, samples = random_unit_instance(rng, 18, 8)
    model = fit(basis, samples)
    grid = np.linspace(0.0, 1.0, 10_000)
    assert np.all(pdf(model, grid) >= 0.0)


def test_stationarity_survives_the_squared_form():
    """Collapsing the fitted amplitudes into plain coefficients and
    splitting them again as u = v = sqrt(c) must leave the likelihood
    stationary; run the fit tight so the collapse error stays small."""
    rng = np.random.default_rng(3)
    basis, samples = random_unit_instance(rng, 12, 4)
    model = fit(basis, samples, epsilon=1e-13, delta=1e-13)
    c = model.coefficients
    phi = window_matrix(basis, samples.unit_samples)
    lhat = c @ phi
    resid = np.sqrt(c) * ((1.0 / samples.m) * (phi / lhat).sum(axis=1) - 1.0)
    assert np.abs(resid).max() <= 1e-6


def test_save_load_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(33)
    basis, samples = random_unit_instance(rng, 10, 7)
    model = fit(basis, samples)
    path = tmp_path / "model.json"
    save(model, path)
    loaded = load(path)
    grid = np.linspace(0.0, 1.0, 1000)
    np.testing.assert_array_equal(pdf(loaded, grid), pdf(model, grid))
    np.testing.assert_array_equal(loaded.coefficients, model.coefficients)
    assert loaded.raw_inner_product == model.raw_inner_product


def test_document_field_order_is_canonical(tmp_path):
    model = uniform_model()
    doc = json.loads(document_text(model))
    assert list(doc) == [
        "format_version",
        "basis_kind",
        "degree",
        "a",
        "b",
        "r",
        "coefficients",
        "raw_inner_product",
        "m",
        "epsilon",
        "delta",
    ]
    path = tmp_path / "m.json"
    save(model, path)
    first = path.read_bytes()
    save(model, path)
    assert path.read_bytes() == first


def test_load_rejects_negative_coefficient(tmp_path):
    path = tmp_path / "bad.json"
    text = document_text(uniform_model()).replace(
        '"coefficients": [1]', '"coefficients": [-1]'
    )
    path.write_text(text)
    with pytest.raises(ModelDocumentError, match="negative"):
        load(path)


def test_load_rejects_wrong_sum(tmp_path):
    path = tmp_path / "bad.json"
    text = document_text(uniform_model()).replace(
        '"coefficients": [1]', '"coefficients": [0.9]'
    )
    path.write_text(text)
    with pytest.raises(ModelDocumentError, match="sum to"):
        load(path)


def test_load_rejects_structural_problems(tmp_path):
    good = document_text(uniform_model())

    path = tmp_path / "missing.json"
    doc = json.loads(good)
    del doc["delta"]
    path.write_text(json.dumps(doc))
    with pytest.raises(ModelDocumentError, match="missing"):
        load(path)

    path = tmp_path / "notjson.json"
    path.write_text("not a document")
    with pytest.raises(ModelDocumentError, match="JSON"):
        load(path)

    path = tmp_path / "extra.json"
    doc = json.loads(good)
    doc["surprise"] = 1
    path.write_text(json.dumps(doc))
    with pytest.raises(ModelDocumentError, match="unknown"):
        load(path)

    path = tmp_path / "badkind.json"
    doc = json.loads(good)
    doc["basis_kind"] = "fourier"
    path.write_text(json.dumps(doc))
    with pytest.raises(ModelDocumentError, match="basis_kind"):
        load(path)

    path = tmp_path / "badm.json"
    doc = json.loads(good)
    doc["m"] = 0
    path.write_text(json.dumps(doc))
    with pytest.raises(ModelDocumentError, match="positive integer"):
        load(path)


def test_model_constructor_validates():
    with pytest.raises(ValueError, match="negative"):
        DensityModel(
            basis=WindowBasis(1),
            domain=DomainMap(0.0, 1.0),
            coefficients=np.array([-0.5, 1.5]),
            raw_inner_product=1.0,
            r=1.0,
            m=1,
            epsilon=1e-8,
            delta=1e-10,
        )
    with pytest.raises(ValueError, match="sum"):
        DensityModel(
            basis=WindowBasis(1),
            domain=DomainMap(0.0, 1.0),
            coefficients=np.array([0.4, 0.4]),
            raw_inner_product=1.0,
            r=1.0,
            m=1,
            epsilon=1e-8,
            delta=1e-10,
        )
    with pytest.raises(ValueError, match="shape"):
        DensityModel(
            basis=WindowBasis(2),
            domain=DomainMap(0.0, 1.0),
            coefficients=np.array([1.0]),
            raw_inner_product=1.0,
            r=1.0,
            m=1,
            epsilon=1e-8,
            delta=1e-10,
        )
