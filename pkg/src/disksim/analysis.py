"""Post-processing: extrema and Rabi-splitting extraction from spectra, and
non-classicality diagnostics (Mandel Q, quadrature squeezing, zero-delay
Cauchy-Schwarz inequality).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import DensityMatrix, Operator, expectation

# Photon-number floor for correlation normalizations.
_MIN_POPULATION = 1e-30

# Slack added to the Cauchy-Schwarz comparison so roundoff cannot flip it.
_CS_MARGIN = 1e-10


class FewerThanTwoDips(RuntimeError):
    """A Rabi splitting needs at least two transmission minima."""


class ZeroPhotonNumber(ArithmeticError):
    """A photon-statistics quantity is normalized by an unpopulated mode."""


@dataclass
class NonclassicalReport:
    """Zero-delay non-classicality diagnostics for a mode pair (a, b).

    q_number maps mode label to Mandel Q; q_quadrature maps mode label to
    (Q_X1, Q_X2).  cs_lhs = (g2_{a,b})^2 and cs_rhs = g2_{a,a} g2_{b,b};
    classical fields satisfy cs_lhs <= cs_rhs.
    """

    q_number: dict[str, float]
    q_quadrature: dict[str, tuple[float, float]]
    cs_lhs: float
    cs_rhs: float
    violated: bool

    def __post_init__(self):
        for label, q in self.q_number.items():
            if q < -1.0 - 1e-9:
                raise ValueError(f"Mandel Q for {label} below -1: {q}")
        if self.violated != (self.cs_lhs > self.cs_rhs + _CS_MARGIN):
            raise ValueError("violated flag inconsistent with lhs/rhs")


def _quad_refine(x0, x1, x2, v0, v1, v2):
    """Vertex of the parabola through three points; falls back to the center
    sample when the points are (numerically) collinear."""
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (v1 - v0) + x1 * (v0 - v2) + x0 * (v2 - v1)) / denom
    b = (x2 ** 2 * (v0 - v1) + x1 ** 2 * (v2 - v0) + x0 ** 2 * (v1 - v2)) / denom
    c = (x1 * x2 * (x1 - x2) * v0 + x2 * x0 * (x2 - x0) * v1 + x0 * x1 * (x0 - x1) * v2) / denom
    scale = max(abs(v0), abs(v1), abs(v2), 1e-300)
    span = max(abs(x2 - x0), 1e-300)
    if abs(a) * span ** 2 < 1e-12 * scale:
        return x1, v1
    xv = -b / (2.0 * a)
    if not (x0 <= xv <= x2):
        return x1, v1
    return xv, a * xv ** 2 + b * xv + c


def find_extrema(grid, values, kind: str = "min") -> list[tuple[float, float]]:
    """Interior local extrema refined by 3-point quadratic interpolation.

    Returns (position, value) pairs ordered by position; monotone data give
    an empty list.  Positions are accurate to O(h^2) for smooth data.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.size < 3:
        raise ValueError("need at least 3 grid points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    v = values if kind == "min" else -values
    if kind not in ("min", "max"):
        raise ValueError("kind must be 'min' or 'max'")
    out = []
    for i in range(1, grid.size - 1):
        if v[i] < v[i - 1] and v[i] < v[i + 1]:
            pos, val = _quad_refine(grid[i - 1], grid[i], grid[i + 1],
                                    v[i - 1], v[i], v[i + 1])
            out.append((float(pos), float(val if kind == "min" else -val)))
    return out


def rabi_splitting(spectrum, window: tuple[float, float] | None = None,
                   exclude: tuple = (), channel: str = "transmission") -> float:
    """Vacuum Rabi splitting Omega_R from a steady-state spectrum.

    The spectrum is a sequence of SpectrumRecord (or any objects with
    delta_lc plus the requested channel attribute).  For
    channel="transmission" the polariton features are local minima of T;
    for channel="reflection" they are local maxima of R (the drop port has
    no carrier background, so features point up there).  The caller
    restricts attention to the QD-coupled resonance with `window`
    (keep only features inside [lo, hi]) and/or `exclude` (drop features
    inside any of the given [lo, hi] bands, for example an uncoupled
    standing-wave mode sitting between the polariton features).  The
    splitting is the distance between the two most prominent remaining
    features.
    """
    if channel not in ("transmission", "reflection"):
        raise ValueError("channel must be 'transmission' or 'reflection'")
    grid = np.array([rec.delta_lc for rec in spectrum])
    vals = np.array([getattr(rec, channel) for rec in spectrum])
    kind = "min" if channel == "transmission" else "max"
    feats = find_extrema(grid, vals, kind=kind)
    if window is not None:
        lo, hi = window
        feats = [fv for fv in feats if lo <= fv[0] <= hi]
    for lo, hi in exclude:
        feats = [fv for fv in feats if not (lo <= fv[0] <= hi)]
    if len(feats) < 2:
        raise FewerThanTwoDips(f"found {len(feats)} {channel} features, need 2")
    sign = 1.0 if kind == "min" else -1.0
    best = sorted(feats, key=lambda fv: sign * fv[1])[:2]
    return float(abs(best[0][0] - best[1][0]))


def _moments(rho: DensityMatrix, a: Operator):
    ad = a.dagger()
    n_op = ad @ a
    n = float(np.real(expectation(rho, n_op)))
    return ad, n_op, n


def mandel_q(rho: DensityMatrix, a: Operator) -> float:
    """Mandel Q = (Var(a^dag a) - <a^dag a>) / <a^dag a>.

    Zero for coherent fields, negative for sub-Poissonian statistics
    (bounded below by -1).
    """
    _, n_op, n = _moments(rho, a)
    if n <= _MIN_POPULATION:
        raise ZeroPhotonNumber(f"<a^dag a> = {n:.3e}")
    n2 = float(np.real(expectation(rho, n_op @ n_op)))
    var = n2 - n * n
    return (var - n) / n


def quadrature_q(rho: DensityMatrix, a: Operator, which: int) -> float:
    """Quadrature noise relative to vacuum, Q = (Var(X) - 1/4) / (1/4),
    for X1 = (a + a^dag)/2 or X2 = -i(a - a^dag)/2.

    Zero for vacuum and coherent states; negative means squeezing below
    the vacuum level.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    ad = a.dagger()
    if which == 1:
        X = 0.5 * (a + ad)
    else:
        X = (-0.5j) * (a - ad)
    mean = float(np.real(expectation(rho, X)))
    second = float(np.real(expectation(rho, X @ X)))
    var = second - mean * mean
    return (var - 0.25) / 0.25


def _g2_zero_delay(rho: DensityMatrix, a: Operator, b: Operator) -> float:
    """<a^dag b^dag b a> / (<a^dag a><b^dag b>) from steady-state moments."""
    ad, _, n_a = _moments(rho, a)
    bd, _, n_b = _moments(rho, b)
    if n_a <= _MIN_POPULATION or n_b <= _MIN_POPULATION:
        raise ZeroPhotonNumber(f"<a^dag a> = {n_a:.3e}, <b^dag b> = {n_b:.3e}")
    num = float(np.real(expectation(rho, ad @ (bd @ b) @ a)))
    return num / (n_a * n_b)


def cauchy_schwarz(rho: DensityMatrix, a: Operator, b: Operator,
                   labels: tuple[str, str] = ("a", "b")) -> NonclassicalReport:
    """Zero-delay Cauchy-Schwarz test (g2_{a,b})^2 <= g2_{a,a} g2_{b,b}.

    All three correlations come from fourth moments of rho (no regression
    run needed at tau = 0).  Violation of the inequality certifies
    non-classical cross-correlations between the two modes.
    """
    g2_ab = _g2_zero_delay(rho, a, b)
    g2_aa = _g2_zero_delay(rho, a, a)
    g2_bb = _g2_zero_delay(rho, b, b)
    lhs = g2_ab ** 2
    rhs = g2_aa * g2_bb
    la, lb = labels
    return NonclassicalReport(
        q_number={la: mandel_q(rho, a), lb: mandel_q(rho, b)},
        q_quadrature={la: (quadrature_q(rho, a, 1), quadrature_q(rho, a, 2)),
                      lb: (quadrature_q(rho, b, 1), quadrature_q(rho, b, 2))},
        cs_lhs=float(lhs),
        cs_rhs=float(rhs),
        violated=bool(lhs > rhs + _CS_MARGIN),
    )
