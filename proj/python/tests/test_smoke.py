import cmath
import math

import numpy as np
import pytest

import qlab


def grid(half, n):
    x = np.linspace(-half, half, n)
    return x[None, :] + 1j * x[:, None]


def test_zero_dilatation_gives_identity():
    m = qlab.solve_beltrami(np.zeros((64, 64), complex), (-2.0, 2.0, -2.0, 2.0))
    assert m.residual == 0.0
    assert np.abs(m.displacement).max() == 0.0
    assert abs(m(0.3 + 0.2j) - (0.3 + 0.2j)) < 1e-12


def test_radial_stretch():
    z = grid(4.0, 256)
    K = 1.5
    r = np.abs(z)
    mu = np.where(r < 1.0, (K - 1) / (K + 1) * np.divide(z, z.conj(), out=np.ones_like(z), where=r > 0), 0)
    m = qlab.solve_beltrami(mu, (-4.0, 4.0, -4.0, 4.0))
    exact = np.where(r < 1.0, r ** (K - 1) * z, z) - z
    err = np.linalg.norm(m.displacement - exact) / np.linalg.norm(exact)
    assert err < 2e-2
    assert m.residual <= 1e-8


def test_cauchy_integral_of_one():
    c = qlab.Curve.circle(n=256)
    assert abs(qlab.cauchy_integral(c, "one", 0.2 + 0.1j) - 1) < 1e-10
    assert abs(qlab.cauchy_integral(c, "one", 2.0)) < 1e-10


def test_plemelj_jump_with_samples():
    c = qlab.Curve.circle(n=256)
    g = list(c.points ** 2)
    plus, minus = qlab.plemelj_values(c, g, 10)
    assert abs(plus - minus - g[10]) < 1e-3 * (1 + 1)


def test_profile_classification():
    c = qlab.Curve.circle(n=1024)
    assert qlab.hinf_profile(c, "pole:0,2", "inside")["classification"] == "Bounded"
    line = qlab.Curve.real_line(n=4096)
    assert qlab.hinf_profile(line, "step", "upper")["classification"] == "Unbounded"


def test_regularity_metrics():
    c = qlab.Curve.circle(n=512)
    assert qlab.chord_arc_constant(c) == pytest.approx(math.pi / 2, rel=0.01)
    tau = 2 * np.pi * np.arange(4096) / 4096
    alpha, _ = qlab.holder_exponent(list(np.exp(1j * tau)), True)
    assert alpha > 0.9


def test_extension_modulus_identity():
    f = qlab.BoundaryMap.parse("quad:0.2")
    z = cmath.rect(1.7, 0.4)
    w = 1 / z.conjugate()
    beta = (1 - abs(w)) * abs(f.d2(w) / f.d1(w))
    r = abs(z)
    assert abs(qlab.extension_dilatation(f, z)) * r * r / (r + 1) == pytest.approx(beta, rel=1e-10)
    assert qlab.reflect_extend(qlab.BoundaryMap.parse("identity"), z) == pytest.approx(z)


def test_scenario_and_errors():
    report = qlab.run_scenario("theorem-a", {"direction": "forward"})
    assert set(report) >= {"scenario", "checks", "overall", "runtime_seconds"}
    assert report["overall"] is True
    with pytest.raises(qlab.QlabError) as info:
        qlab.BoundaryMap.parse("quad:0.9")
    assert info.value.kind == "InvalidArgument"
