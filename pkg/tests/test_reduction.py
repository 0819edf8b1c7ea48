import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aqrm_magic.model import TruncatedBasis
from aqrm_magic.reduction import (DensityMatrixError, bloch_vector, density_from_bloch,
                                  mean_boson_number, trace_out_boson, trace_out_qubit,
                                  validate_density)


def random_state(n_levels, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2 * n_levels) + 1j * rng.normal(size=2 * n_levels)
    return v / np.linalg.norm(v)


def test_product_state():
    b = TruncatedBasis(3)
    rho_s = trace_out_boson(b.basis_state(2, False))
    np.testing.assert_allclose(rho_s, [[0, 0], [0, 1]])
    assert bloch_vector(rho_s).s_z == -1
    rho_b = trace_out_qubit(b.basis_state(2, False))
    assert mean_boson_number(rho_b) == 2


def test_bell_like_state():
    b = TruncatedBasis(1)
    v = (b.basis_state(0, True) + b.basis_state(1, False)) / math.sqrt(2)
    np.testing.assert_allclose(trace_out_boson(v), 0.5 * np.eye(2), atol=1e-15)
    np.testing.assert_allclose(trace_out_qubit(v), 0.5 * np.eye(2), atol=1e-15)
    assert bloch_vector(trace_out_boson(v)).norm == pytest.approx(0)


def test_superposition_coherence():
    b = TruncatedBasis(1)
    v = (b.basis_state(0, True) + 1j * b.basis_state(0, False)) / math.sqrt(2)
    bv = bloch_vector(trace_out_boson(v))
    assert (bv.s_x, bv.s_y, bv.s_z) == pytest.approx((0, 1, 0), abs=1e-15)
    assert bv.phi == pytest.approx(math.pi / 2)
    assert bv.theta == pytest.approx(math.pi / 2)


def test_rejects_unnormalised():
    with pytest.raises(DensityMatrixError):
        trace_out_boson(np.ones(4))


def test_rejects_odd_length():
    with pytest.raises(ValueError):
        trace_out_boson(np.ones(3) / math.sqrt(3))


def test_validate_density_raises_rather_than_repairs():
    with pytest.raises(DensityMatrixError):
        validate_density(np.diag([1.1, -0.1]))
    with pytest.raises(DensityMatrixError):
        validate_density(np.diag([0.5, 0.4]))
    with pytest.raises(DensityMatrixError):
        validate_density(np.array([[0.5, 0.1], [0.2, 0.5]]))


def test_bloch_roundtrip():
    rho = density_from_bloch(0.3, -0.2, 0.5)
    assert bloch_vector(rho).as_array() == pytest.approx([0.3, -0.2, 0.5])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_reduced_states_are_valid(n_levels, seed):
    v = random_state(n_levels, seed)
    rho_s = trace_out_boson(v)
    rho_b = trace_out_qubit(v)
    validate_density(rho_s)
    validate_density(rho_b)
    assert np.max(np.abs(rho_s - rho_s.conj().T)) <= 1e-12
    assert bloch_vector(rho_s).norm <= 1 + 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_schmidt_spectra_agree(n_levels, seed):
    # nonzero spectra of the two marginals of a pure state coincide
    v = random_state(n_levels, seed)
    k = min(2, n_levels)
    ev_s = np.sort(np.linalg.eigvalsh(trace_out_boson(v)))[-k:]
    ev_b = np.sort(np.linalg.eigvalsh(trace_out_qubit(v)))[-k:]
    np.testing.assert_allclose(ev_s, ev_b, atol=1e-12)
    purity = np.trace(trace_out_boson(v) @ trace_out_boson(v)).real
    assert purity == pytest.approx(np.trace(trace_out_qubit(v) @ trace_out_qubit(v)).real)
