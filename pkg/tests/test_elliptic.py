from __future__ import annotations

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lindblad_spectra.elliptic import elliptic_e, elliptic_k, elliptic_ke

from oracles import elliptic_e_quadrature, elliptic_k_quadrature


def test_values_at_zero_and_one():
    assert elliptic_k(0.0) == pytest.approx(np.pi / 2, abs=1e-15)
    assert elliptic_e(0.0) == pytest.approx(np.pi / 2, abs=1e-15)
    assert elliptic_e(1.0) == 1.0


def test_k_one_half_uses_parameter_convention():
    assert abs(elliptic_k(0.5) - elliptic_k_quadrature(0.5)) < 1e-12
    assert elliptic_k(0.5) == pytest.approx(1.854074677, abs=1e-9)


@settings(max_examples=60)
@given(m=st.floats(-50, 0.999))
def test_real_parameter_matches_quadrature(m):
    k, e = elliptic_ke(m)
    assert abs(k - elliptic_k_quadrature(m)) <= 1e-10 * abs(k)
    assert abs(e - elliptic_e_quadrature(m)) <= 1e-10 * abs(e)


@settings(max_examples=60)
@given(re=st.floats(-20, 20), im=st.floats(-20, 20).filter(lambda v: abs(v) > 1e-6))
def test_complex_parameter_matches_mpmath(re, im):
    m = complex(re, im)
    k, e = elliptic_ke(m)
    assert abs(k - complex(mp.ellipk(m))) <= 1e-10 * abs(k)
    assert abs(e - complex(mp.ellipe(m))) <= 1e-10 * max(1.0, abs(e))


def test_vectorized():
    m = np.array([0.1, 0.5, -3.0])
    np.testing.assert_allclose(elliptic_k(m), [float(mp.ellipk(v)) for v in m], rtol=1e-13)
    np.testing.assert_allclose(elliptic_e(np.array([1.0, 0.3])), [1.0, float(mp.ellipe(0.3))], rtol=1e-13)


def test_rejections():
    with pytest.raises(ValueError):
        elliptic_k(1.0)
    with pytest.raises(ValueError):
        elliptic_k(2.0)
    with pytest.raises(ValueError):
        elliptic_k(2.0 + 0j)
