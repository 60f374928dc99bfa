import numpy as np
import pytest
from hypothesis import given, strategies as st

from qhankel.carath import (CarathCoeffs, Degenerate, GSSample, gs_extract, gs_reconstruct,
                            sample_carath, schwarz_closed_form, schwarz_from_carath)
from qhankel.errors import InvalidMeasureError, NotCaratheodoryError

disk = st.builds(lambda r, t: np.sqrt(r) * np.exp(1j * t),
                 st.floats(0, 0.98), st.floats(0, 2 * np.pi))
full_disk = st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0, 1), st.floats(0, 2 * np.pi))


def test_herglotz_point_mass_is_extremal():
    p = sample_carath([1.0], [0.0])
    assert p.as_tuple() == (2, 2, 2)
    assert isinstance(gs_extract(p), Degenerate)
    assert gs_extract(p).free == "x"


@given(st.floats(0, 1.95), disk, full_disk)
def test_reconstruct_extract_roundtrip(p1, x, sigma):
    p2, p3 = gs_reconstruct(p1, x, sigma)
    got = gs_extract(CarathCoeffs(p1, p2, p3))
    assert abs(got[0] - x) < 1e-8 and abs(got[1] - sigma) < 1e-8


def test_boundary_x_is_degenerate_in_sigma():
    p2, p3 = gs_reconstruct(1.0, 1j, 0.3)
    got = gs_extract(CarathCoeffs(1.0, p2, p3))
    assert got == Degenerate("sigma", pytest.approx(1j))


@given(st.lists(st.floats(0.01, 1), min_size=1, max_size=5), st.data())
def test_measure_samples_lie_in_the_parameter_box(weights, data):
    w = np.array(weights) / sum(weights)
    t = np.array(data.draw(st.lists(st.floats(0, 2 * np.pi), min_size=len(w), max_size=len(w))))
    p = sample_carath(w, t)
    assert all(abs(c) <= 2 + 1e-12 for c in p.as_tuple())
    u = np.exp(-1j * np.angle(p.p1))  # rotate so that p1 >= 0
    rotated = CarathCoeffs(abs(p.p1), p.p2 * u ** 2, p.p3 * u ** 3)
    got = gs_extract(rotated)
    if not isinstance(got, Degenerate):
        assert abs(got[0]) <= 1 + 1e-6 and abs(got[1]) <= 1 + 1e-6


def test_non_member_rejected():
    with pytest.raises(NotCaratheodoryError):
        gs_extract(CarathCoeffs(0.0, 3.0, 0.0))


@pytest.mark.parametrize("w, t", [([0.5, 0.6], [0, 1]), ([-0.5, 1.5], [0, 1]), ([], []),
                                  ([1.0], [0.0, 1.0])])
def test_invalid_measures(w, t):
    with pytest.raises(InvalidMeasureError):
        sample_carath(w, t)


def test_schwarz_function_oracle():
    p = sample_carath([0.3, 0.7], [0.4, -1.1])
    u = schwarz_from_carath(p)
    assert u.coeffs[0] == 0
    # (1 + u) / (1 - u) must give back h
    h = (1 + u) / (1 - u)
    assert np.allclose(h.coeffs[1:4], p.as_tuple(), atol=1e-12)
    assert np.allclose(u.coeffs[1:4], schwarz_closed_form(p), atol=1e-12)


def test_sample_box_validation_and_sides():
    s = GSSample(1.0, 0.5, -0.5j, 0.2, 0.1)
    assert s.d1 == -1.0
    assert s.c_side().p1 == 1 and s.d_side().p1 == -1
    assert s.to_dict()["y"] == [0.0, -0.5]
    with pytest.raises(ValueError):
        GSSample(2.5)
    with pytest.raises(ValueError):
        GSSample(1.0, x=1.1)


def test_reconstruct_vectorizes():
    p2, p3 = gs_reconstruct(np.array([0.0, 2.0]), np.array([1.0, 0.3]), np.array([0.0, 1.0]))
    assert p2.tolist() == [2.0, 2.0]
    assert p3.tolist() == [0.0, 2.0]
