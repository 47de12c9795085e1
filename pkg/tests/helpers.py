"""Random parameter generators and independent numerical oracles for the tests."""

import math

import numpy as np
from scipy import integrate

from skewmix.distributions import CfusnParams, MsnParams, SnParams, pdf

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def random_sn(rng, mu=(-2.0, 2.0), omega=(0.5, 2.5), lam=(-4.0, 4.0)):
    return SnParams(rng.uniform(*mu), rng.uniform(*omega), rng.uniform(*lam))


def random_spd(rng, k, lo=0.3):
    a = rng.normal(size=(k, k))
    return a @ a.T / k + lo * np.eye(k)


def random_msn(rng, k=2, lam_scale=2.0):
    return MsnParams(rng.normal(size=k), random_spd(rng, k), lam_scale * rng.normal(size=k))


def random_cfusn(rng, k=2, lam_scale=1.0):
    gamma = random_spd(rng, k)
    lam = lam_scale * rng.normal(size=(k, k))
    return CfusnParams(rng.normal(size=k), gamma + lam @ lam.T, lam)


def fourier_1d(params, t, half_width=14.0):
    """``int exp(itx) f(x) dx`` by adaptive quadrature around the bulk of f."""
    from skewmix.distributions import location_scale_skew, mean

    m = float(np.atleast_1d(mean(params))[0])
    _, om, _ = location_scale_skew(params)
    s = math.sqrt(om[0, 0])
    lo, hi = m - half_width * s, m + half_width * s
    f = lambda x: float(pdf(params, x if params.family == "sn" else np.array([x])))  # noqa: E731
    re = integrate.quad(lambda x: math.cos(t * x) * f(x), lo, hi, limit=400, epsabs=1e-12)[0]
    im = integrate.quad(lambda x: math.sin(t * x) * f(x), lo, hi, limit=400, epsabs=1e-12)[0]
    return complex(re, im)


def box_grid_2d(params, half_width=8.0, h=0.05):
    """Tensor grid and cell area covering +-half_width marginal sd around the mean."""
    from skewmix.distributions import location_scale_skew, mean

    m = np.asarray(mean(params))
    _, om, _ = location_scale_skew(params)
    sd = np.sqrt(np.diag(om))
    axes = [np.arange(m[i] - half_width * sd[i], m[i] + half_width * sd[i] + h, h) for i in range(2)]
    xx, yy = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([xx.ravel(), yy.ravel()]), h * h, xx.shape


def equal_gamma_cfusn_pair(rng, k=2, norm=3.0):
    """Two CFUSN laws sharing ``mu`` and ``Gamma`` with different ``Lambda``."""
    gamma = random_spd(rng, k)
    mu = rng.normal(size=k)
    out = []
    for _ in range(2):
        lam = rng.normal(size=(k, k))
        lam *= norm / np.linalg.norm(lam, axis=0)
        out.append(CfusnParams(mu, gamma + lam @ lam.T, lam))
    return tuple(out)


def well_projected_direction(rng, mats, min_proj=1.5, max_tries=10_000):
    """Random unit ``t`` whose projections on every column of ``mats`` exceed ``min_proj``."""
    k = mats[0].shape[0]
    for _ in range(max_tries):
        t = rng.normal(size=k)
        t /= np.linalg.norm(t)
        if all(np.min(np.abs(m.T @ t)) >= min_proj for m in mats):
            return t
    raise RuntimeError("no well-projected direction found")


def random_witness_pair(rng, k=None):
    """Symmetric ``(A, B)`` meeting the witness hypotheses; about half need the perturbation branch."""
    k = int(rng.integers(2, 6)) if k is None else k
    kind = rng.integers(3)
    g = rng.normal(size=(k, k))
    if kind == 0:
        a = g @ g.T
    elif kind == 1:
        r = int(rng.integers(1, k))
        a = g[:, :r] @ g[:, :r].T
    else:
        a = (g + g.T) / 2
        w, v = np.linalg.eigh(a)
        w[-1] = abs(w[-1]) + 0.5
        a = (v * w) @ v.T
    h = rng.normal(size=(k, k))
    b = (h + h.T) / 2
    if rng.random() < 0.5:
        w, v = np.linalg.eigh(a)
        l = v[:, -1]
        b = b - (l @ b @ l) * np.outer(l, l)
    return a, b
