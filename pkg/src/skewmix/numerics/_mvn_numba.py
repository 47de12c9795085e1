"""Loop kernels for the multivariate normal cdf (compiled by numba when present).

All kernels work on Genz's sequentially-conditioned integrand.  With ``L`` the
lower Cholesky factor of the covariance and ``b`` the upper limits::

    e_1   = Phi(b_1 / L_11)
    y_j   = Phi^{-1}(w_j e_j)
    e_k   = Phi((b_k - sum_{j<k} L_kj y_j) / L_kk)
    P     = int_{[0,1]^{K-1}} prod_k e_k  dw

For K >= 4 that integral is estimated on a randomly shifted rank-1 lattice.
K = 2 uses the Drezner-Wesolowsky/Genz Gauss-Legendre formula directly, and
K = 3 integrates the exact bivariate conditional probability over the first
variable by adaptive Gauss-Kronrod (7/15) bisection.
"""

import math

import numpy as np

from .._accel import njit, prange

_SQRT1_2 = 1.0 / math.sqrt(2.0)

# Kronrod 15-point abscissae (positive half, descending) and weights.
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss 7-point weights on XGK[1], XGK[3], XGK[5], XGK[7].
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_MAX_INTERVALS = 4000


@njit
def ndtr(x):
    return 0.5 * math.erfc(-x * _SQRT1_2)


@njit
def ndtri(p):
    # Wichura, AS241 (PPND16); relative accuracy about 1e-16.
    if p <= 0.0:
        return -np.inf
    if p >= 1.0:
        return np.inf
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2509.0809287301226727 * r + 33430.575583588128105) * r
                    + 67265.770927008700853) * r + 45921.953931549871457) * r
                  + 13731.693765509461125) * r + 1971.5909503065514427) * r
                + 133.14166789178437745) * r + 3.387132872796366608)
        den = (((((((5226.495278852545925 * r + 28729.085735721942674) * r
                    + 39307.89580009271061) * r + 21213.794301586595867) * r
                  + 5394.1960214247511077) * r + 687.1870074920579083) * r
                + 42.313330701600911252) * r + 1.0)
        return q * num / den
    r = p if q < 0.0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        num = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r
                    + 0.24178072517745061177) * r + 1.27045825245236838258) * r
                  + 3.64784832476320460504) * r + 5.7694972214606914055) * r
                + 4.6303378461565452959) * r + 1.42343711074968357734)
        den = (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r
                    + 0.0151986665636164571966) * r + 0.14810397642748007459) * r
                  + 0.68976733498510000455) * r + 1.6763848301838038494) * r
                + 2.05319162663775882187) * r + 1.0)
    else:
        r -= 5.0
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r
                    + 0.0012426609473880784386) * r + 0.026532189526576123093) * r
                  + 0.29656057182850489123) * r + 1.7848265399172913358) * r
                + 5.4637849111641143699) * r + 6.6579046435011037772)
        den = (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r
                    + 1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r
                  + 0.0148753612908506148525) * r + 0.13692988092273580531) * r
                + 0.59983220655588793769) * r + 1.0)
    val = num / den
    return -val if q < 0.0 else val


@njit
def _cond_factor(b, chol, y, k):
    # e_k given the already drawn y_0..y_{k-1}
    s = b[k]
    for j in range(k):
        s -= chol[k, j] * y[j]
    return ndtr(s / chol[k, k])


@njit
def _lattice_point_value(b, chol, w, y):
    dim = b.shape[0]
    e = ndtr(b[0] / chol[0, 0])
    prod = e
    for k in range(1, dim):
        if prod == 0.0:
            return 0.0
        y[k - 1] = ndtri(w[k - 1] * e)
        e = _cond_factor(b, chol, y, k)
        prod *= e
    return prod


@njit
def mvn_cdf_lattice(b, chol, generator, shifts, n_points):
    """Shifted-lattice estimates, one per shift, with the baker (tent) transform."""
    dim = b.shape[0]
    n_shift = shifts.shape[0]
    est = np.zeros(n_shift)
    w = np.empty(dim - 1)
    y = np.zeros(dim)
    for s in range(n_shift):
        acc = 0.0
        for i in range(1, n_points + 1):
            for j in range(dim - 1):
                u = (i * generator[j] + shifts[s, j]) % 1.0
                w[j] = abs(2.0 * u - 1.0)
            acc += _lattice_point_value(b, chol, w, y)
        est[s] = acc / n_points
    return est


# Gauss-Legendre half-rules (6, 12, 20 points) for the bivariate kernel.
_GL_W = np.array([
    [0.1713244923791705, 0.3607615730481384, 0.4679139345726904, 0, 0, 0, 0, 0, 0, 0],
    [0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
     0.2031674267230659, 0.2334925365383547, 0.2491470458134029, 0, 0, 0, 0],
    [0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
     0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
     0.1316886384491766, 0.1420961093183821, 0.1491729864726037, 0.1527533871307259],
])
_GL_X = np.array([
    [0.9324695142031522, 0.6612093864662647, 0.2386191860831970, 0, 0, 0, 0, 0, 0, 0],
    [0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
     0.5873179542866171, 0.3678314989981802, 0.1252334085114692, 0, 0, 0, 0],
    [0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
     0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
     0.5108670019508271, 0.3737060887154196, 0.2277858511416451, 0.07652652113349733],
])
_GL_N = np.array([3, 6, 10])
_TWO_PI = 2.0 * math.pi


@njit
def bvn_upper(dh, dk, r):
    """P(X > dh, Y > dk) for standard bivariate normal with correlation r.

    Drezner-Wesolowsky Gauss-Legendre scheme as refined by Genz; about 1e-15
    absolute accuracy.
    """
    if dh == np.inf or dk == np.inf:
        return 0.0
    if dh == -np.inf:
        return 1.0 if dk == -np.inf else ndtr(-dk)
    if dk == -np.inf:
        return ndtr(-dh)
    if r == 0.0:
        return ndtr(-dh) * ndtr(-dk)
    ar = abs(r)
    rule = 0 if ar < 0.3 else (1 if ar < 0.75 else 2)
    n = _GL_N[rule]
    h = dh
    k = dk
    hk = h * k
    bvn = 0.0
    if ar < 0.925:
        hs = 0.5 * (h * h + k * k)
        asr = 0.5 * math.asin(r)
        for i in range(n):
            for sgn in (-1.0, 1.0):
                sn = math.sin(asr * (1.0 + sgn * _GL_X[rule, i]))
                bvn += _GL_W[rule, i] * math.exp((sn * hk - hs) / (1.0 - sn * sn))
        bvn = bvn * asr / _TWO_PI + ndtr(-h) * ndtr(-k)
    else:
        if r < 0.0:
            k = -k
            hk = -hk
        if ar < 1.0:
            as_ = (1.0 - r) * (1.0 + r)
            a = math.sqrt(as_)
            bs = (h - k) ** 2
            asr = -0.5 * (bs / as_ + hk)
            c = (4.0 - hk) / 8.0
            d = (12.0 - hk) / 80.0
            if asr > -100.0:
                bvn = a * math.exp(asr) * (1.0 - c * (bs - as_) * (1.0 - d * bs) / 3.0 + c * d * as_ * as_)
            if hk > -100.0:
                b = math.sqrt(bs)
                sp = math.sqrt(_TWO_PI) * ndtr(-b / a)
                bvn -= math.exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0)
            a *= 0.5
            acc = 0.0
            for i in range(n):
                for sgn in (-1.0, 1.0):
                    xs = (a * (1.0 + sgn * _GL_X[rule, i])) ** 2
                    asr = -0.5 * (bs / xs + hk)
                    if asr > -100.0:
                        sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs)
                        rs = math.sqrt(1.0 - xs)
                        ep = math.exp(-0.5 * hk * xs / (1.0 + rs) ** 2) / rs
                        acc += _GL_W[rule, i] * math.exp(asr) * (sp - ep)
            bvn = (a * acc - bvn) / _TWO_PI
        if r > 0.0:
            bvn += ndtr(-max(h, k))
        elif h >= k:
            bvn = -bvn
        else:
            span = ndtr(k) - ndtr(h) if h < 0.0 else ndtr(-h) - ndtr(-k)
            bvn = span - bvn
    return min(1.0, max(0.0, bvn))


@njit(parallel=True)
def bvn_cdf_batch(upper, chol):
    """P(X <= upper[i]) for the bivariate normal with Cholesky factor ``chol``."""
    s1 = chol[0, 0]
    s2 = math.sqrt(chol[1, 0] ** 2 + chol[1, 1] ** 2)
    r = chol[1, 0] / s2
    n = upper.shape[0]
    out = np.empty(n)
    for i in prange(n):
        out[i] = bvn_upper(-upper[i, 0] / s1, -upper[i, 1] / s2, r)
    return out


@njit
def _tri_integrand(b, chol, e1, w, s_a, s_b, r):
    y = ndtri(w * e1)
    return bvn_upper(-(b[1] - chol[1, 0] * y) / s_a, -(b[2] - chol[2, 0] * y) / s_b, r)


@njit
def _gk_trivariate(b, chol, e1, tol):
    """e1 * int_0^1 P(X2 <= b2, X3 <= b3 | Z1 = Phi^{-1}(w e1)) dw."""
    s_a = chol[1, 1]
    s_b = math.sqrt(chol[2, 1] ** 2 + chol[2, 2] ** 2)
    r = chol[2, 1] / s_b
    # the conditional limits cross zero here; the integrand is steepest there
    cuts = np.empty(4)
    n_cut = 0
    for k in (1, 2):
        if chol[k, 0] != 0.0:
            wk = ndtr(b[k] / chol[k, 0]) / e1
            if 0.0 < wk < 1.0:
                cuts[n_cut] = wk
                n_cut += 1
    cuts[n_cut] = 0.0
    cuts[n_cut + 1] = 1.0
    edges = np.sort(cuts[: n_cut + 2])
    stack_a = np.empty(_MAX_INTERVALS)
    stack_b = np.empty(_MAX_INTERVALS)
    top = 0
    for i in range(edges.shape[0] - 1):
        if edges[i + 1] > edges[i]:
            stack_a[top] = edges[i]
            stack_b[top] = edges[i + 1]
            top += 1
    total = 0.0
    evaluated = 0
    while top > 0:
        top -= 1
        lo = stack_a[top]
        hi = stack_b[top]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        kron = WGK[7] * _tri_integrand(b, chol, e1, mid, s_a, s_b, r)
        gauss = WG[3] * _tri_integrand(b, chol, e1, mid, s_a, s_b, r)
        for i in range(7):
            d = half * XGK[i]
            f = _tri_integrand(b, chol, e1, mid - d, s_a, s_b, r) + _tri_integrand(b, chol, e1, mid + d, s_a, s_b, r)
            kron += WGK[i] * f
            if i % 2 == 1:
                gauss += WG[i // 2] * f
        kron *= half
        gauss *= half
        evaluated += 1
        if (abs(kron - gauss) * e1 <= tol * (hi - lo) or half < 1e-14
                or top + 2 >= _MAX_INTERVALS or evaluated > _MAX_INTERVALS):
            total += kron
        else:
            stack_a[top] = lo
            stack_b[top] = mid
            stack_a[top + 1] = mid
            stack_b[top + 1] = hi
            top += 2
    return e1 * total


@njit(parallel=True)
def mvn_cdf_small_batch(upper, chol, tol):
    """Rows of ``upper`` (n, K) with K in {2, 3}; returns (n,) probabilities."""
    n, dim = upper.shape
    if dim == 2:
        return bvn_cdf_batch(upper, chol)
    out = np.empty(n)
    for i in prange(n):
        e1 = ndtr(upper[i, 0] / chol[0, 0])
        out[i] = 0.0 if e1 == 0.0 else _gk_trivariate(upper[i], chol, e1, tol)
    return out
