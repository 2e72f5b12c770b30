import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ironface.errors import SingularSpectralParameter
from ironface.weights import (CLASS_INDEX, Regime, check_initial_condition, check_unitarity,
                              check_yang_baxter, face_weight_table, vertex_weights)

lam_re = st.floats(-0.7, 0.7)
lam_im = st.floats(-0.4, 0.4)
critical_gamma = st.floats(0.1, np.pi - 0.1)
massive_gamma = st.floats(0.1, 2.0)


def _regime(kind, g):
    return Regime.critical(g) if kind == "c" else Regime.massive(g)


def test_weights_at_zero_are_identity_like():
    w = vertex_weights(0.0, Regime.critical(np.pi / 3))
    assert (w.a, w.b, w.c, w.d) == (1, 0, pytest.approx(1.0, abs=1e-15), 0)


def test_free_fermion_point_weights():
    w = vertex_weights(np.pi / 4, Regime.critical(np.pi / 2))
    assert w.a == 1
    assert w.b == pytest.approx(1.0, abs=1e-15)
    assert w.c == pytest.approx(np.sqrt(2), abs=1e-15)


def test_massive_weights_reproduce_delta():
    reg = Regime.massive(np.arccosh(1.5))
    w = vertex_weights(0.3, reg)
    g = reg.gamma
    assert w.b == pytest.approx(np.sinh(0.3) / np.sinh(0.3 + g), rel=1e-15)
    assert w.c == pytest.approx(np.sinh(g) / np.sinh(0.3 + g), rel=1e-15)
    assert w.delta().real == pytest.approx(1.5, abs=1e-12)


def test_pole_raises():
    with pytest.raises(SingularSpectralParameter):
        vertex_weights(-np.pi / 3, Regime.critical(np.pi / 3))


def test_regime_from_delta():
    assert Regime.from_delta(0.0).gamma == pytest.approx(np.pi / 2)
    assert not Regime.from_delta(1.5).is_critical
    with pytest.raises(ValueError):
        Regime.from_delta(1.0)
    with pytest.raises(ValueError):
        Regime.from_delta(-1.5)


def test_face_weight_corner_examples():
    t = face_weight_table(0.37, Regime.critical(np.pi / 3))
    a = vertex_weights(0.37, Regime.critical(np.pi / 3)).a
    assert t.weight(1, 1, 1, 1) == a
    assert t.weight(-1, 1, -1, 1) == a


def test_face_weights_at_zero():
    t = face_weight_table(0.0, Regime.critical(0.9))
    for a, b, c, d in itertools.product((1, -1), repeat=4):
        w = t.weight(a, b, c, d)
        if a != c:
            assert w == 0
        elif b != d:
            assert w == pytest.approx(1.0, abs=1e-15)


def test_rotation_is_a_quarter_turn():
    t = face_weight_table(0.2 + 0.1j, Regime.critical(1.1))
    r = t.rotated()
    for a, b, c, d in itertools.product((1, -1), repeat=4):
        assert r.weight(a, b, c, d) == t.weight(b, c, d, a)


def test_yang_baxter_examples():
    reg = Regime.critical(np.pi / 3)
    assert check_yang_baxter(0.3, 0.1, reg) < 1e-12
    for r in (reg, Regime.massive(0.8)):
        assert check_yang_baxter(0.25, 0.25, r) < 1e-12


def test_unitarity_examples():
    res, rho2 = check_unitarity(0.0, Regime.critical(0.7))
    assert res < 1e-14 and rho2 == pytest.approx(1.0, abs=1e-14)
    assert check_unitarity(0.4, Regime.critical(np.pi / 3))[0] < 1e-12
    assert check_unitarity(0.2, Regime.massive(np.arccosh(2.0)))[0] < 1e-12


@pytest.mark.parametrize("reg", [Regime.critical(np.pi / 2), Regime.critical(np.pi / 5),
                                 Regime.massive(np.arccosh(1.2))])
def test_initial_condition(reg):
    assert check_initial_condition(reg) < 1e-15


@given(kind=st.sampled_from("cm"), g=critical_gamma, x=lam_re, y=lam_im, u=lam_re, v=lam_im)
def test_yang_baxter_property(kind, g, x, y, u, v):
    g = g if kind == "c" else g / 1.5
    reg = _regime(kind, g)
    try:
        res = check_yang_baxter(complex(x, y), complex(u, v), reg)
    except SingularSpectralParameter:
        return
    # weights are O(1) away from poles; scale the residual by the largest entry
    scale = max(np.abs(face_weight_table(l, reg).entries).max()
                for l in (complex(x, y), complex(u, v), complex(x - u, y - v)))
    assert res < 1e-12 * max(1.0, scale**3)


@given(kind=st.sampled_from("cm"), g=critical_gamma, x=lam_re, y=lam_im)
def test_delta_identity_property(kind, g, x, y):
    reg = _regime(kind, g)
    try:
        w = vertex_weights(complex(x, y), reg)
    except SingularSpectralParameter:
        return
    if abs(w.a * w.b) > 1e-8 and abs(w.b) < 1e6:
        assert abs(w.delta() - reg.delta) < 1e-12 * max(1.0, abs(w.c) ** 2 / abs(w.b))


@given(g=critical_gamma, x=lam_re, y=lam_im)
def test_class_counts_property(g, x, y):
    try:
        t = face_weight_table(complex(x, y), Regime.critical(g))
    except SingularSpectralParameter:
        return
    assert t.class_counts() == (4, 4, 4, 4)


@given(kind=st.sampled_from("cm"), g=massive_gamma, x=lam_re, y=lam_im)
def test_unitarity_scalar_consistency(kind, g, x, y):
    g = min(g, np.pi - 0.1)
    reg = _regime(kind, g)
    try:
        res, rho2 = check_unitarity(complex(x, y), reg)
    except SingularSpectralParameter:
        return
    assert res < 1e-12 * max(1.0, abs(rho2))


def test_class_index_matches_rule():
    for a, b, c, d in itertools.product((0, 1), repeat=4):
        k = CLASS_INDEX[a, b, c, d]
        if a == c:
            assert k == (0 if b == d else 2)
        else:
            assert k == (1 if b != d else 3)
