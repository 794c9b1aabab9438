import numpy as np
import pytest

from p2seq import AiryDomainError, Parameters, airy_eval, airy_quads, scaled_basis
from p2seq.airy import _asym_neg, _asym_pos, _maclaurin

# 40-digit values frozen from an arbitrary-precision evaluation.
AI0 = 0.3550280538878172392600631860041831763980
BI0 = 0.6149266274460007351509223690936135535947
AIP0 = -0.2588194037928067984051835601892039634791
BIP0 = 0.4482883573538263579148237103988283908662
AI1 = 0.1352924163128814155241474235154663061749


def test_values_at_zero():
    q = airy_eval(0.0)
    assert q.ai == pytest.approx(AI0, rel=1e-14)
    assert q.bi == pytest.approx(BI0, rel=1e-14)
    assert q.ai_prime == pytest.approx(AIP0, rel=1e-14)
    assert q.bi_prime == pytest.approx(BIP0, rel=1e-14)


def test_value_at_one():
    assert airy_eval(1.0).ai == pytest.approx(AI1, rel=1e-10)


def test_against_high_precision_oracle():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    rng = np.random.default_rng(42)
    ts = np.concatenate([
        np.linspace(-30.0, 30.0, 241),
        rng.uniform(-30.0, 30.0, 120),
        [-25.01, -25.0, -24.99, -4.51, -4.5, -4.49, 2.99, 3.0, 3.01,
         8.99, 9.0, 9.01, 30.0, -30.0],
    ])
    ai, bi, aip, bip = airy_quads(ts)
    for i, t in enumerate(ts):
        ref = (float(mp.airyai(t)), float(mp.airybi(t)),
               float(mp.airyai(t, derivative=1)),
               float(mp.airybi(t, derivative=1)))
        got = (ai[i], bi[i], aip[i], bip[i])
        for g, r in zip(got, ref):
            assert g == pytest.approx(r, rel=1e-10), f"t={t}"


def test_wronskian_sweep():
    rng = np.random.default_rng(7)
    t = rng.uniform(-25.0, 25.0, 1_000_000)
    ai, bi, aip, bip = airy_quads(t)
    dev = np.abs(ai * bip - aip * bi - 1.0 / np.pi)
    assert np.max(dev) <= 1e-12 / np.pi


def test_positive_for_nonnegative_argument():
    t = np.linspace(0.0, 30.0, 1001)
    ai, bi, _, _ = airy_quads(t)
    assert np.all(ai > 0.0)
    assert np.all(bi > 0.0)


def test_ode_residual_by_local_stencil():
    rng = np.random.default_rng(3)
    ts = rng.uniform(-25.0, 25.0, 200)
    delta = 1e-3
    for t in ts:
        lo = airy_eval(t - delta)
        mid = airy_eval(t)
        hi = airy_eval(t + delta)
        for f_lo, f_mid, f_hi in ((lo.ai, mid.ai, hi.ai),
                                  (lo.bi, mid.bi, hi.bi)):
            second = (f_hi - 2.0 * f_mid + f_lo) / delta ** 2
            target = t * f_mid
            assert abs(second - target) <= 1e-6 * max(1.0, abs(target))


@pytest.mark.parametrize("bad", [31.0, -31.0, float("nan"), float("inf")])
def test_domain_errors(bad):
    with pytest.raises(AiryDomainError, match="30"):
        airy_eval(bad)


def test_branch_overlap_positive_series():
    t = np.linspace(3.0, 3.2, 21)
    ladder = airy_quads(t + 0.0)
    series = _maclaurin(t)
    for jj in range(4):
        # ladder values come from airy_quads for t > 3; compare to series
        assert np.allclose(ladder[jj], series[jj], rtol=1e-11)


def test_branch_overlap_positive_asymptotic():
    t = np.linspace(8.8, 9.0, 11)
    ladder = airy_quads(t - 1e-9)      # just inside the ladder region
    asym = _asym_pos(t - 1e-9)
    for jj in range(4):
        assert np.allclose(ladder[jj], asym[jj], rtol=1e-11)


def test_branch_overlap_negative():
    t = np.linspace(-4.8, -4.6, 11)
    ladder = airy_quads(t)
    series = _maclaurin(t)
    for jj in range(4):
        assert np.allclose(ladder[jj], series[jj], rtol=1e-11)
    t = np.linspace(-24.9, -24.5, 11)
    ladder = airy_quads(t)
    asym = _asym_neg(t)
    for jj in range(4):
        assert np.allclose(ladder[jj], asym[jj], rtol=5e-11)


def test_scaled_basis_wronskian():
    p = Parameters(sigma=1.0 / 3.0, tau=-0.2, nu=3.5, mu=2.0)
    basis = scaled_basis(p)
    closed = (2.0 * p.sigma / (np.pi ** 3 * p.nu)) ** (1.0 / 3.0)
    assert basis.wronskian == pytest.approx(closed, rel=1e-12)
    assert basis.wronskian == pytest.approx(0.18317, abs=5e-6)
    assert basis.scale > 0.0


def test_scaled_basis_argument_anchors():
    p = Parameters(sigma=1.0 / 3.0, tau=-0.2, nu=0.1, mu=-0.5)
    basis = scaled_basis(p)
    assert basis.s_of_x(0.0) == pytest.approx(1.882, abs=5e-4)
    assert basis.s_of_x(1.0) == pytest.approx(3.764, abs=6e-4)
    p = Parameters(sigma=1.0 / 3.0, tau=-0.2, nu=3.5, mu=2.0)
    basis = scaled_basis(p)
    assert basis.s_of_x(0.0) == pytest.approx(0.575, abs=5e-4)
    assert basis.s_of_x(1.0) == pytest.approx(1.150, abs=8e-4)


def test_scaled_basis_wronskian_is_slope_over_pi():
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = Parameters(sigma=rng.uniform(0.05, 0.95), tau=rng.uniform(-0.9, 0.9),
                       nu=rng.uniform(0.05, 8.0), mu=rng.uniform(-2, 2))
        basis = scaled_basis(p)
        assert basis.wronskian == pytest.approx(basis.slope / np.pi, rel=1e-13)
        # sampled Wronskian of A, B in x matches the closed form
        a, b, ap, bp = basis.sample(np.array([0.0, 0.3, 1.0]))
        assert np.allclose(a * bp - ap * b, basis.wronskian, rtol=1e-12)


def test_scaled_basis_rejects_non_parameters():
    from p2seq import ParameterError
    with pytest.raises(ParameterError):
        scaled_basis((0.3, 0.0, 1.0, 0.0))
