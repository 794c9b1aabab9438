"""Double precision Airy functions Ai, Bi and the scaled homogeneous basis.

Evaluation is split into five regimes on the supported interval |t| <= 30:

* -4.5 <= t <= 3        Maclaurin series of the two standard entire branches
                        f and g, combined into Ai, Bi.  On the positive side
                        the combination c1*f - c2*g cancels like exp(2*zeta),
                        so the series region stops at 3 where the loss is
                        still near 1e-13 relative.
* 3 < t < 9             Single Taylor step (radius <= 0.125) off precomputed
                        anchor values on a 0.25-spaced knot ladder.  Anchors
                        for the decaying solution are marched inward from the
                        asymptotic regime (the stable direction); anchors for
                        the growing solution are marched outward from the
                        series regime.  Raw asymptotic expansions bottom out
                        near 3e-7 relative at |t| = 4.5, far short of the
                        1e-10 budget, hence this ladder.
* t >= 9                Exponential asymptotic expansions.
* -25 < t < -4.5        Taylor step off a knot ladder marched down from
                        t = -4.5 (neutrally stable in the oscillatory
                        region).  The modulus/phase asymptotics have the
                        same ~3e-7 floor at |t| = 4.5 and the Maclaurin
                        series loses digits past |t| ~ 8, so the ladder
                        covers the whole span.
* t <= -25              Oscillatory (modulus/phase) asymptotic forms.

All four values carry relative error well below 1e-10 across the interval;
the Wronskian identity Ai*Bi' - Ai'*Bi = 1/pi holds to better than 1e-12
relative everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AiryDomainError, ParameterError
from .params import Parameters

__all__ = ["AiryQuad", "ScaledAiryBasis", "airy_eval", "airy_quads", "scaled_basis"]

T_MAX = 30.0

# Ai(0) = 3^(-2/3)/Gamma(2/3) and -Ai'(0) = 3^(-1/3)/Gamma(1/3),
# hard-coded to 20 significant digits.
_C1 = 0.35502805388781723926
_C2 = 0.25881940379280679841
_SQRT3 = 1.7320508075688772935
_SQRTPI = 1.7724538509055160273

_SERIES_POS = 3.0   # Maclaurin cancellation in Ai stays ~1e-13 relative here
_SERIES_NEG = -4.5
_POS_ASYM = 9.0
_NEG_ASYM = -25.0
_KNOT_STEP = 0.25
_TAYLOR_TERMS = 41  # coefficients per anchor, single step radius <= 0.125


@dataclass(frozen=True)
class AiryQuad:
    """Ai, Bi and their first derivatives at one argument."""

    ai: float
    bi: float
    ai_prime: float
    bi_prime: float


@dataclass(frozen=True)
class ScaledAiryBasis:
    """Affine argument map and Wronskian of the scaled basis A, B.

    A(x) = Ai(s), B(x) = Bi(s) with s = offset + slope*x, where
    scale = (4*nu*sigma^2)^(-1/3), offset = (1-sigma)*scale and
    slope = 2*sigma*scale.  The Wronskian of A and B with respect to x is
    slope/pi = (2*sigma/(pi^3*nu))^(1/3).
    """

    scale: float
    offset: float
    wronskian: float
    slope: float

    def s_of_x(self, x):
        return self.offset + self.slope * np.asarray(x, dtype=float)

    def sample(self, x):
        """Return A, B, A', B' at the given x values (derivatives in x)."""
        ai, bi, aip, bip = airy_quads(self.s_of_x(x))
        return ai, bi, self.slope * aip, self.slope * bip


def _maclaurin(t: np.ndarray):
    """Series evaluation of Ai, Bi, Ai', Bi' for |t| <= 4.5."""
    z3 = t * t * t
    f = np.ones_like(t)
    g = t.copy()
    fp = np.zeros_like(t)
    gp = np.ones_like(t)
    u = np.ones_like(t)        # f terms
    s = t.copy()               # g terms
    d = 0.5 * t * t            # f' terms, first nonzero at k=1
    w = np.ones_like(t)        # g' terms
    fp += d
    k = 1
    while k < 64:
        u = u * z3 / ((3 * k - 1) * (3 * k))
        s = s * z3 / ((3 * k) * (3 * k + 1))
        w = w * z3 / ((3 * k - 2) * (3 * k))
        f += u
        g += s
        gp += w
        if k >= 2:
            d = d * z3 / ((3 * k - 3) * (3 * k - 1))
            fp += d
        tiny = np.max(np.abs(u) + np.abs(s)) if t.size else 0.0
        big = max(1.0, float(np.max(np.abs(f) + np.abs(g))) if t.size else 1.0)
        k += 1
        if tiny <= 1e-22 * big:
            break
    ai = _C1 * f - _C2 * g
    bi = _SQRT3 * (_C1 * f + _C2 * g)
    aip = _C1 * fp - _C2 * gp
    bip = _SQRT3 * (_C1 * fp + _C2 * gp)
    return ai, bi, aip, bip


def _asym_sums(zeta: np.ndarray, nterms: int = 42):
    """Partial sums of the four asymptotic coefficient series in 1/zeta.

    Returns (sum (-1)^k u_k zeta^-k, sum u_k zeta^-k, same pair with v_k).
    Terms are added until they stop decreasing or fall below 1e-18.
    """
    su_alt = np.ones_like(zeta)
    su = np.ones_like(zeta)
    sv_alt = np.ones_like(zeta)
    sv = np.ones_like(zeta)
    uk = 1.0
    term_prev = np.full_like(zeta, np.inf)
    powz = np.ones_like(zeta)
    active = np.ones(zeta.shape, dtype=bool)
    for k in range(1, nterms):
        uk = uk * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        vk = uk * (6 * k + 1) / (1.0 - 6 * k)
        powz = powz / zeta
        term = uk * powz
        grow = np.abs(term) >= term_prev
        active &= ~grow
        if not active.any():
            break
        sgn = -1.0 if k % 2 else 1.0
        su_alt[active] += sgn * term[active]
        su[active] += term[active]
        sv_alt[active] += sgn * vk * powz[active]
        sv[active] += vk * powz[active]
        term_prev = np.abs(term)
        if float(np.max(np.abs(term[active]))) < 1e-18:
            break
    return su_alt, su, sv_alt, sv


def _asym_pos(t: np.ndarray):
    """Exponential asymptotic expansions, t >= 9."""
    zeta = (2.0 / 3.0) * t ** 1.5
    su_alt, su, sv_alt, sv = _asym_sums(zeta)
    root4 = t ** 0.25
    em = np.exp(-zeta)
    ep = np.exp(zeta)
    ai = em * su_alt / (2.0 * _SQRTPI * root4)
    aip = -root4 * em * sv_alt / (2.0 * _SQRTPI)
    bi = ep * su / (_SQRTPI * root4)
    bip = root4 * ep * sv / _SQRTPI
    return ai, bi, aip, bip


def _asym_neg(t: np.ndarray):
    """Oscillatory modulus/phase asymptotic forms, t <= -25."""
    x = -t
    zeta = (2.0 / 3.0) * x ** 1.5
    omega = zeta - 0.25 * math.pi
    # Even/odd splits sum (-1)^k u_{2k} zeta^{-2k} and
    # sum (-1)^k u_{2k+1} zeta^{-2k-1}, likewise for v.
    pu = np.ones_like(zeta)
    qu = np.zeros_like(zeta)
    pv = np.ones_like(zeta)
    qv = np.zeros_like(zeta)
    uk = 1.0
    powz = np.ones_like(zeta)
    for k in range(1, 34):
        uk = uk * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        vk = uk * (6 * k + 1) / (1.0 - 6 * k)
        powz = powz / zeta
        # index k contributes to the odd pile when k is odd, even pile else;
        # the alternating sign is (-1)^(k//2) in both piles.
        sgn = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            qu += sgn * uk * powz
            qv += sgn * vk * powz
        else:
            pu += sgn * uk * powz
            pv += sgn * vk * powz
        if uk * float(np.max(powz)) < 1e-19:
            break
    root4 = x ** 0.25
    c = np.cos(omega)
    s = np.sin(omega)
    ai = (c * pu + s * qu) / (_SQRTPI * root4)
    aip = (s * pv - c * qv) * root4 / _SQRTPI
    bi = (-s * pu + c * qu) / (_SQRTPI * root4)
    bip = (c * pv + s * qv) * root4 / _SQRTPI
    return ai, bi, aip, bip


def _taylor_coeffs(t0: float, value: float, deriv: float, n: int = _TAYLOR_TERMS):
    """Taylor coefficients at t0 of a solution of w'' = t*w from (w, w')."""
    a = np.empty(n)
    a[0] = value
    a[1] = deriv
    a[2] = 0.5 * t0 * value
    for k in range(1, n - 2):
        a[k + 2] = (t0 * a[k] + a[k - 1]) / ((k + 1) * (k + 2))
    return a


def _taylor_eval(coeffs: np.ndarray, h: np.ndarray):
    """Horner evaluation of the polynomial and its derivative at offsets h."""
    top = len(coeffs) - 1
    val = np.full_like(h, coeffs[top])
    der = np.full_like(h, top * coeffs[top])
    for k in range(top - 1, 0, -1):
        val = val * h + coeffs[k]
        der = der * h + k * coeffs[k]
    val = val * h + coeffs[0]
    return val, der


def _march(t_start: float, value: float, deriv: float, knots: np.ndarray):
    """Step a solution of w'' = t*w along successive knots; returns (vals,ders)."""
    vals = np.empty(len(knots))
    ders = np.empty(len(knots))
    t0, v, d = t_start, value, deriv
    for i, t1 in enumerate(knots):
        c = _taylor_coeffs(t0, v, d)
        h = np.array([t1 - t0])
        vv, dd = _taylor_eval(c, h)
        v, d = float(vv[0]), float(dd[0])
        vals[i], ders[i] = v, d
        t0 = t1
    return vals, ders


def _build_tables():
    """Anchor values and Taylor tables for the two knot ladders."""
    pos_knots = _SERIES_POS + _KNOT_STEP * np.arange(26)            # 3.0 .. 9.25
    neg_knots = _SERIES_NEG - _KNOT_STEP * np.arange(84)            # -4.5 .. -25.25

    # Growing solution Bi: series anchor at 3.0, march outward (stable).
    t0 = np.array([_SERIES_POS])
    _, bi0, _, bip0 = _maclaurin(t0)
    bi_vals, bi_ders = _march(_SERIES_POS, float(bi0[0]), float(bip0[0]),
                              pos_knots[1:])
    bi_vals = np.concatenate(([float(bi0[0])], bi_vals))
    bi_ders = np.concatenate(([float(bip0[0])], bi_ders))

    # Decaying solution Ai: asymptotic anchor at 9.5, march inward (stable).
    t95 = np.array([9.5])
    ai95, _, aip95, _ = _asym_pos(t95)
    ai_vals, ai_ders = _march(9.5, float(ai95[0]), float(aip95[0]), pos_knots[::-1])
    ai_vals, ai_ders = ai_vals[::-1].copy(), ai_ders[::-1].copy()

    pos_ai = np.stack([_taylor_coeffs(k, v, d)
                       for k, v, d in zip(pos_knots, ai_vals, ai_ders)])
    pos_bi = np.stack([_taylor_coeffs(k, v, d)
                       for k, v, d in zip(pos_knots, bi_vals, bi_ders)])

    # Oscillatory region: march both from the series anchor at -4.5.
    tm = np.array([_SERIES_NEG])
    aim, bim, aipm, bipm = _maclaurin(tm)
    nai_vals, nai_ders = _march(_SERIES_NEG, float(aim[0]), float(aipm[0]),
                                neg_knots[1:])
    nbi_vals, nbi_ders = _march(_SERIES_NEG, float(bim[0]), float(bipm[0]),
                                neg_knots[1:])
    nai_vals = np.concatenate(([float(aim[0])], nai_vals))
    nai_ders = np.concatenate(([float(aipm[0])], nai_ders))
    nbi_vals = np.concatenate(([float(bim[0])], nbi_vals))
    nbi_ders = np.concatenate(([float(bipm[0])], nbi_ders))

    neg_ai = np.stack([_taylor_coeffs(k, v, d)
                       for k, v, d in zip(neg_knots, nai_vals, nai_ders)])
    neg_bi = np.stack([_taylor_coeffs(k, v, d)
                       for k, v, d in zip(neg_knots, nbi_vals, nbi_ders)])
    return pos_knots, pos_ai, pos_bi, neg_knots, neg_ai, neg_bi


_POS_KNOTS, _POS_AI, _POS_BI, _NEG_KNOTS, _NEG_AI, _NEG_BI = _build_tables()


def _taylor_region(t, knots, ai_table, bi_table, ai, bi, aip, bip, idx):
    j = np.clip(np.rint(np.abs(t - knots[0]) / _KNOT_STEP).astype(int),
                0, len(knots) - 1)
    for jj in np.unique(j):
        m = j == jj
        h = t[m] - knots[jj]
        ai[idx[m]], aip[idx[m]] = _taylor_eval(ai_table[jj], h)
        bi[idx[m]], bip[idx[m]] = _taylor_eval(bi_table[jj], h)


def airy_quads(t):
    """Vectorized Ai, Bi, Ai', Bi' on |t| <= 30.

    Accepts a scalar or array; returns four float64 arrays of the input
    shape.  Raises AiryDomainError for non-finite or out-of-range input.
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    flat = np.atleast_1d(t).ravel()
    if flat.size and (not np.all(np.isfinite(flat)) or np.max(np.abs(flat)) > T_MAX):
        raise AiryDomainError(
            f"Airy argument must be finite with |t| <= {T_MAX:g}")
    ai = np.empty_like(flat)
    bi = np.empty_like(flat)
    aip = np.empty_like(flat)
    bip = np.empty_like(flat)
    idx = np.arange(flat.size)

    m = (flat >= _SERIES_NEG) & (flat <= _SERIES_POS)
    if m.any():
        ai[m], bi[m], aip[m], bip[m] = _maclaurin(flat[m])
    m = flat >= _POS_ASYM
    if m.any():
        ai[m], bi[m], aip[m], bip[m] = _asym_pos(flat[m])
    m = flat <= _NEG_ASYM
    if m.any():
        ai[m], bi[m], aip[m], bip[m] = _asym_neg(flat[m])
    m = (flat > _SERIES_POS) & (flat < _POS_ASYM)
    if m.any():
        _taylor_region(flat[m], _POS_KNOTS, _POS_AI, _POS_BI,
                       ai, bi, aip, bip, idx[m])
    m = (flat < _SERIES_NEG) & (flat > _NEG_ASYM)
    if m.any():
        _taylor_region(flat[m], _NEG_KNOTS, _NEG_AI, _NEG_BI,
                       ai, bi, aip, bip, idx[m])

    shape = t.shape
    out = (ai.reshape(shape), bi.reshape(shape),
           aip.reshape(shape), bip.reshape(shape))
    if scalar:
        return tuple(float(o) for o in out)
    return out


def airy_eval(t: float) -> AiryQuad:
    """Ai, Bi and derivatives at a single argument.

    Relative accuracy is 1e-10 or better on |t| <= 30; arguments outside
    that interval raise AiryDomainError.
    """
    ai, bi, aip, bip = airy_quads(float(t))
    return AiryQuad(ai=ai, bi=bi, ai_prime=aip, bi_prime=bip)


def scaled_basis(params: Parameters) -> ScaledAiryBasis:
    """Argument map and Wronskian for the homogeneous basis of the order
    equations nu*w'' = (1 - sigma + 2*sigma*x)*w.
    """
    if not isinstance(params, Parameters):
        raise ParameterError("scaled_basis expects a Parameters instance")
    scale = (4.0 * params.nu * params.sigma ** 2) ** (-1.0 / 3.0)
    offset = (1.0 - params.sigma) * scale
    slope = 2.0 * params.sigma * scale
    wronskian = slope / math.pi
    return ScaledAiryBasis(scale=scale, offset=offset,
                           wronskian=wronskian, slope=slope)
