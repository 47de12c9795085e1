"""Pure numpy/scipy versions of the multivariate normal cdf kernels.

Same formulas as ``_mvn_numba``.  The bivariate kernel is vectorised across
points, K = 3 uses QUADPACK in place of the hand-rolled Gauss-Kronrod
bisection, and the lattice branch is vectorised across points.
"""

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri


def _cond(b, chol, y, k):
    return ndtr((b[k] - chol[k, :k] @ y[:k]) / chol[k, k])


_GL = {
    0: (np.array([0.1713244923791705, 0.3607615730481384, 0.4679139345726904]),
        np.array([0.9324695142031522, 0.6612093864662647, 0.2386191860831970])),
    1: (np.array([0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                  0.2031674267230659, 0.2334925365383547, 0.2491470458134029]),
        np.array([0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                  0.5873179542866171, 0.3678314989981802, 0.1252334085114692])),
    2: (np.array([0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                  0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
                  0.1316886384491766, 0.1420961093183821, 0.1491729864726037, 0.1527533871307259]),
        np.array([0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                  0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                  0.5108670019508271, 0.3737060887154196, 0.2277858511416451, 0.07652652113349733])),
}


def bvn_upper(dh, dk, r):
    """Vectorised ``P(X > dh, Y > dk)`` for a standard pair with scalar correlation ``r``."""
    # +-40 standard deviations is exact in double precision
    h, k = np.broadcast_arrays(np.clip(np.asarray(dh, dtype=float), -40.0, 40.0),
                               np.clip(np.asarray(dk, dtype=float), -40.0, 40.0))
    h = h.reshape(-1)
    k = k.reshape(-1)
    if r == 0.0:
        return ndtr(-h) * ndtr(-k)
    ar = abs(r)
    w, x = _GL[0 if ar < 0.3 else (1 if ar < 0.75 else 2)]
    w = np.concatenate([w, w])
    x = np.concatenate([1.0 - x, 1.0 + x])
    hk = h * k
    if ar < 0.925:
        hs = 0.5 * (h * h + k * k)
        asr = 0.5 * np.arcsin(r)
        sn = np.sin(asr * x)
        terms = np.exp((sn[None, :] * hk[:, None] - hs[:, None]) / (1.0 - sn * sn)[None, :])
        bvn = terms @ w * asr / (2 * np.pi) + ndtr(-h) * ndtr(-k)
    else:
        if r < 0:
            k = -k
            hk = -hk
        bvn = np.zeros_like(h)
        if ar < 1.0:
            as_ = (1.0 - r) * (1.0 + r)
            a = np.sqrt(as_)
            bs = (h - k) ** 2
            c = (4.0 - hk) / 8.0
            d = (12.0 - hk) / 80.0
            asr = -0.5 * (bs / as_ + hk)
            with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                bvn = np.where(asr > -100, a * np.exp(asr) * (1 - c * (bs - as_) * (1 - d * bs) / 3 + c * d * as_ * as_), 0.0)
                b = np.sqrt(bs)
                corr = np.exp(-0.5 * hk) * np.sqrt(2 * np.pi) * ndtr(-b / a) * b * (1 - c * bs * (1 - d * bs) / 3)
                bvn = bvn - np.where(hk > -100, corr, 0.0)
            a *= 0.5
            xs = (a * x) ** 2
            asr = -0.5 * (bs[:, None] / xs[None, :] + hk[:, None])
            sp = 1.0 + c[:, None] * xs[None, :] * (1.0 + 5.0 * d[:, None] * xs[None, :])
            rs = np.sqrt(1.0 - xs)
            with np.errstate(over="ignore", under="ignore"):
                ep = np.exp(-0.5 * hk[:, None] * xs[None, :] / (1.0 + rs[None, :]) ** 2) / rs[None, :]
                terms = np.where(asr > -100, np.exp(asr) * (sp - ep), 0.0)
            bvn = (a * (terms @ w) - bvn) / (2 * np.pi)
        if r > 0:
            bvn = bvn + ndtr(-np.maximum(h, k))
        else:
            span = np.where(h < 0, ndtr(k) - ndtr(h), ndtr(-h) - ndtr(-k))
            bvn = np.where(h >= k, -bvn, span - bvn)
    return np.clip(bvn, 0.0, 1.0)


def bvn_cdf_batch(upper, chol):
    s1 = chol[0, 0]
    s2 = float(np.hypot(chol[1, 0], chol[1, 1]))
    return bvn_upper(-upper[:, 0] / s1, -upper[:, 1] / s2, chol[1, 0] / s2)


def _trivariate_one(b, chol, tol):
    e1 = ndtr(b[0] / chol[0, 0])
    if e1 == 0.0:
        return 0.0
    s_a = chol[1, 1]
    s_b = float(np.hypot(chol[2, 1], chol[2, 2]))
    r = chol[2, 1] / s_b

    def integrand(w):
        y = ndtri(w * e1)
        return float(bvn_upper(-(b[1] - chol[1, 0] * y) / s_a, -(b[2] - chol[2, 0] * y) / s_b, r)[0])

    cuts = [ndtr(b[k] / chol[k, 0]) / e1 for k in (1, 2) if chol[k, 0] != 0.0]
    cuts = sorted(c for c in cuts if 0.0 < c < 1.0) or None
    val, _ = integrate.quad(integrand, 0.0, 1.0, points=cuts, epsabs=tol / e1, epsrel=0.0, limit=200)
    return float(e1 * val)


def mvn_cdf_small_batch(upper, chol, tol):
    if upper.shape[1] == 2:
        return bvn_cdf_batch(upper, chol)
    return np.array([_trivariate_one(row, chol, tol) for row in upper])


def mvn_cdf_lattice(b, chol, generator, shifts, n_points, chunk=65536):
    dim = b.shape[0]
    est = np.zeros(shifts.shape[0])
    for s, shift in enumerate(shifts):
        acc = 0.0
        for start in range(1, n_points + 1, chunk):
            idx = np.arange(start, min(start + chunk, n_points + 1), dtype=float)
            u = np.mod(idx[:, None] * generator[None, :] + shift[None, :], 1.0)
            w = np.abs(2.0 * u - 1.0)
            e = np.full(idx.shape[0], ndtr(b[0] / chol[0, 0]))
            prod = e.copy()
            y = np.zeros((idx.shape[0], dim))
            for k in range(1, dim):
                with np.errstate(divide="ignore", invalid="ignore"):
                    y[:, k - 1] = ndtri(w[:, k - 1] * e)
                    arg = (b[k] - y[:, :k] @ chol[k, :k]) / chol[k, k]
                e = np.where(prod > 0.0, ndtr(np.nan_to_num(arg, nan=0.0)), 0.0)
                prod = prod * e
            acc += prod.sum()
        est[s] = acc / n_points
    return est
