"""Row-vectorized statistic kernels.

Every function here operates on a batch ``X`` of shape ``(B, n)`` whose rows
are sorted samples, and returns one value per row.  The public single-sample
operations wrap these kernels with ``X[None, :]``, and the Monte Carlo engine
feeds them thousands of rows at a time, so both paths execute the identical
arithmetic: elementwise operations plus reductions over the last axis of
C-contiguous arrays.  That discipline is what makes study results bit-equal
to a replicate-by-replicate evaluation regardless of batch size or worker
count.

Variance-type statistics are computed in centered form
``mean((t - mean(t))**2)``, which is algebraically ``mean(t^2) - mean(t)^2``
but cannot go negative in floating point.

Large kernel matrices (grid x data) are evaluated in slabs to cap memory;
slabbing never changes per-element reduction order.
"""

from __future__ import annotations

import math

import numpy as np

from .sample import c_weights, default_window

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# cap on elements of a (B, slab, n) kernel tensor: ~64 MB of float64
_SLAB_ELEMENTS = 8_000_000


def _phi(z):
    return np.exp(-0.5 * z * z) / _SQRT_2PI


def _row_sum(a):
    """Reduce the last axis with a per-row sequential sum.

    ``np.sum``'s pairwise blocking is not bitwise row-independent across
    batch shapes; einsum on a C-contiguous operand accumulates each row on
    its own, left to right, so a row's result never depends on how many
    rows share the call.  (Fancy indexing can hand us F-ordered arrays,
    which einsum would traverse in a different order - normalize first.)
    """
    return np.einsum("...i->...", np.ascontiguousarray(a))


def _row_mean(a):
    return _row_sum(a) / a.shape[-1]


def std_rows(X):
    """n-1 standard deviation of each row."""
    d = X - _row_mean(X)[..., None]
    return np.sqrt(_row_sum(d * d) / (X.shape[-1] - 1))


def quarter_var_rows(t):
    """0.25 * variance (divisor n) of each row, nonnegative by construction."""
    d = t - _row_mean(t)[..., None]
    return 0.25 * _row_mean(d * d)


def var_rows(t):
    d = t - _row_mean(t)[..., None]
    return _row_mean(d * d)


# ---------------------------------------------------------------------------
# spacing estimators


def vjv_terms(X, m):
    """One-sided spacing terms (m/(n+1)) / (X_(j+m) - X_(j)), shape (B, n-m)."""
    n = X.shape[-1]
    gaps = X[..., m:] - X[..., :-m]
    return (m / (n + 1)) / gaps


def vjv_rows(X, m):
    return quarter_var_rows(vjv_terms(X, m))


def two_sided_gaps(X, m):
    """Clamped-window gaps X_(i+m) - X_(i-m), shape (B, n)."""
    n = X.shape[-1]
    i = np.arange(n)
    hi = np.minimum(i + m, n - 1)
    lo = np.maximum(i - m, 0)
    return X[..., hi] - X[..., lo]


def vjq_terms(X, m):
    n = X.shape[-1]
    c = c_weights(n, m)
    return c * (m / n) / two_sided_gaps(X, m)


def vjq_rows(X, m):
    return quarter_var_rows(vjq_terms(X, m))


# ---------------------------------------------------------------------------
# kernel density machinery


def kde_rows(points, X, h):
    """KDE of each row of ``X`` (bandwidth ``h`` per row) at ``points``.

    ``points`` has shape (B, G) or (G,); returns (B, G).  Slabs over G.
    """
    n = X.shape[-1]
    if points.ndim == 1:
        points = np.broadcast_to(points, (X.shape[0], points.shape[0]))
    B, G = points.shape
    h = np.asarray(h, dtype=float).reshape(-1)
    out = np.empty((B, G))
    slab = max(1, min(G, _SLAB_ELEMENTS // max(1, B * n)))
    for a in range(0, G, slab):
        b = min(a + slab, G)
        z = (points[:, a:b, None] - X[:, None, :]) / h[:, None, None]
        out[:, a:b] = _row_sum(_phi(z))
    return out / (n * h[:, None])


def grid_kde_rows(X, h, tail=4.0, points=2048):
    """Row-wise KDE on the per-row default grid.

    Returns ``(f, w)``: density values and trapezoid weights, both (B, G).
    """
    h = np.asarray(h, dtype=float).reshape(-1)
    lo = X[:, 0] - tail * h
    hi = X[:, -1] + tail * h
    step = (hi - lo) / (points - 1)
    nodes = lo[:, None] + np.arange(points)[None, :] * step[:, None]
    f = kde_rows(nodes, X, h)
    wpat = np.ones(points)
    wpat[0] = 0.5
    wpat[-1] = 0.5
    w = wpat[None, :] * step[:, None]
    return f, w


def vjd_from_grid(f, w):
    """Quarter-variance of a grid density, after renormalizing to unit mass.

    Returns ``(values, mass)``; mass is the pre-normalization integral, used
    by callers to detect grids that miss KDE mass.
    """
    mass = _row_sum(w * f)
    g = f / mass[:, None]
    wg = w * g
    m1 = _row_sum(wg * g)
    m2 = _row_sum(wg * g * g)
    return 0.25 * (m2 - m1 * m1), mass


def vjd_rows(X, h, tail=4.0, points=2048):
    f, w = grid_kde_rows(X, h, tail=tail, points=points)
    return vjd_from_grid(f, w)


def loo_kde_terms(X, h):
    """Leave-one-out KDE of every point of each row; ``h`` is (B,)."""
    n = X.shape[-1]
    h = np.asarray(h, dtype=float).reshape(-1)
    z = (X[:, :, None] - X[:, None, :]) / h[:, None, None]
    k = _row_sum(_phi(z)) - _phi(0.0)
    return k / ((n - 1) * h[:, None])


def vjb_rows(X, h):
    return quarter_var_rows(loo_kde_terms(X, h))


def plot_positions(n: int) -> np.ndarray:
    """Plot positions i/n of a tie-free sorted sample."""
    return np.arange(1, n + 1) / n


def u_bandwidth(S, n: int) -> float:
    """Probability-space bandwidth from the spread of the plot positions."""
    return 1.06 * float(np.std(S, ddof=1)) * n ** (-0.2)


def vjs_rows(X, h, u_nodes, S=None, hu=None):
    """Quantile-density quarter-variance on a midpoint u-grid.

    ``u_nodes`` are the open grid nodes with implicit equal weights 1/len.
    ``S``/``hu`` default to the tie-free plot positions and their bandwidth.
    """
    n = X.shape[-1]
    if S is None:
        S = plot_positions(n)
    if hu is None:
        hu = u_bandwidth(S, n)
    fn = kde_rows(X, X, h)
    km = _phi((np.atleast_2d(S)[:, None, :] - u_nodes[None, :, None]) / hu)
    inv_q = 1.0 / (_row_sum(km * (1.0 / fn)[:, None, :]) / (n * hu))
    return quarter_var_rows(inv_q)


# ---------------------------------------------------------------------------
# competitor test statistics


def ks_rows(X):
    n = X.shape[-1]
    # max is exact arithmetic, so the reduction order cannot matter
    i = np.arange(1.0, n + 1.0)
    d_plus = (i / n - X).max(axis=-1)
    d_minus = (X - (i - 1.0) / n).max(axis=-1)
    return np.maximum(d_plus, d_minus)


def tv_rows(X, m):
    return var_rows(np.log(two_sided_gaps(X, m)))


def te_rows(X, m):
    return var_rows(np.log(vjq_terms(X, m)))


def td_from_grid(f, w):
    """Varentropy of a grid density: int f log^2 f - (int f log f)^2."""
    lf = np.log(f)
    wf = w * f
    i1 = _row_sum(wf * lf)
    i2 = _row_sum(wf * lf * lf)
    return i2 - i1 * i1


def td_rows(X, h, tail=4.0, points=2048):
    f, w = grid_kde_rows(X, h, tail=tail, points=points)
    return td_from_grid(f, w)


def full_kde_terms(X, h):
    """Plain KDE of every point of each row (self term included)."""
    n = X.shape[-1]
    h = np.asarray(h, dtype=float).reshape(-1)
    z = (X[:, :, None] - X[:, None, :]) / h[:, None, None]
    return _row_sum(_phi(z)) / (n * h[:, None])


def tb_rows(X, h):
    return var_rows(np.log(full_kde_terms(X, h)))


def tc_rows(X, m):
    """Variance of the log local-linear slope statistic over 2m+1 windows."""
    n = X.shape[-1]
    offsets = np.arange(-m, m + 1)
    idx = np.clip(np.arange(n)[:, None] + offsets[None, :], 0, n - 1)
    win = X[:, idx]                       # (B, n, 2m+1)
    centered = win - _row_mean(win)[..., None]
    num = _row_sum(centered * offsets)
    den = _row_sum(centered * centered)
    return var_rows(np.log(num / (n * den)))


def ta_rows(X, m, h):
    n = X.shape[-1]
    f = full_kde_terms(X, h)
    i = np.arange(n)
    hi = np.minimum(i + m, n - 1)
    lo = np.maximum(i - m, 0)
    return var_rows(np.log(f[:, hi] + f[:, lo]))


# ---------------------------------------------------------------------------
# dispatch with the per-kind default tuning

VJD_BANDWIDTH_EXPONENT = 0.25  # see estimators.vjd_default_bandwidth

G_KINDS = ("GV", "GD", "GB", "GS", "GQ")
COMPETITOR_KINDS = ("KS", "TV", "TE", "TD", "TB", "TC", "TA")
ALL_KINDS = G_KINDS + COMPETITOR_KINDS

_U_NODES_DEFAULT = 1024


def default_u_nodes(points=_U_NODES_DEFAULT):
    return (np.arange(points) + 0.5) / points


def statistic_rows(kind: str, X, u_nodes=None):
    """Evaluate one test statistic on every row with its default tuning."""
    n = X.shape[-1]
    if kind == "GV":
        return vjv_rows(X, default_window(n, two_sided=False))
    if kind == "GQ":
        return vjq_rows(X, default_window(n, two_sided=True))
    if kind == "KS":
        return ks_rows(X)
    if kind == "TV":
        return tv_rows(X, default_window(n, two_sided=True))
    if kind == "TE":
        return te_rows(X, default_window(n, two_sided=True))
    if kind == "TC":
        return tc_rows(X, default_window(n, two_sided=True))
    s = std_rows(X)
    if kind == "GD":
        h = 1.06 * s * n ** (-VJD_BANDWIDTH_EXPONENT)
        return vjd_rows(X, h)[0]
    if kind == "GB":
        return vjb_rows(X, 1.06 * s * (n - 1) ** (-0.2))
    if kind == "GS":
        if u_nodes is None:
            u_nodes = default_u_nodes()
        return vjs_rows(X, 1.06 * s * n ** (-0.2), u_nodes)
    if kind == "TD":
        return td_rows(X, 1.06 * s * n ** (-0.2))
    if kind == "TB":
        return tb_rows(X, 1.06 * s * n ** (-0.2))
    if kind == "TA":
        m = default_window(n, two_sided=True)
        return ta_rows(X, m, 1.06 * s * n ** (-0.2))
    raise KeyError(f"unknown statistic kind {kind!r}")


def statistics_rows(kinds, X):
    """Evaluate several statistics on the same batch, sharing the grid KDE.

    GD and TD both need the row KDE on the default grid; when both are
    requested it is computed once.
    """
    kinds = list(kinds)
    out = {}
    shared = [k for k in kinds if k in ("GD", "TD")]
    if len(shared) == 2:
        n = X.shape[-1]
        s = std_rows(X)
        if VJD_BANDWIDTH_EXPONENT == 0.2:
            f, w = grid_kde_rows(X, 1.06 * s * n ** (-0.2))
            out["GD"] = vjd_from_grid(f, w)[0]
            out["TD"] = td_from_grid(f, w)
        else:
            out["GD"] = statistic_rows("GD", X)
            out["TD"] = statistic_rows("TD", X)
    u_nodes = default_u_nodes() if "GS" in kinds else None
    for k in kinds:
        if k not in out:
            out[k] = statistic_rows(k, X, u_nodes=u_nodes)
    return out
