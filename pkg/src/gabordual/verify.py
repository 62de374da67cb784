"""Numerical certification of dual-window properties.

Each constructed dual window is checked against the properties that make
it a dual window: the modulation-k duality residuals, seam smoothness up
to the requested order, support containment, symmetry, painless-region
frame bounds, the obstruction jump sums that rule out extra smoothness,
and end-to-end Gabor reconstruction of test signals.

Default tolerances are separated by the dominant error source of each
check: 1e-9 for duality residuals (pure double-precision algebra), 1e-6
for finite-difference jump probes (FD truncation floor), 1e-11 for
support leakage and symmetry defects (direct evaluation).

Grids avoid seam points by half-offset sampling x_i = (i + 0.5)/grid so
the almost-everywhere identities are tested where every formula is
classical; the seams get their own one-sided probes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dualwin import DualWindow, build_dual, kmax, support_set
from .errors import (
    DegenerateSignalError,
    PainlessRegionError,
    ParameterError,
)

DUALITY_TOL = 1e-9
JUMP_TOL = 1e-6
SUPPORT_TOL = 1e-11
SYMMETRY_TOL = 1e-11

# One-sided stencil steps and node counts per derivative order, balancing
# the roundoff floor eps * sum|w| ~ eps/step^m against truncation driven by
# high derivatives of the rational pieces (calibrated on the built-ins).
_FD_STEPS = {1: 1e-4, 2: 1e-3, 3: 2e-3, 4: 5e-3, 5: 8e-3, 6: 1e-2}
_FD_NPTS = {1: 7, 2: 10, 3: 11, 4: 12, 5: 13, 6: 14}


def fd_weights(nodes, x0, m):
    """Finite-difference weights for the m-th derivative at x0 (Fornberg)."""
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    if m >= n:
        raise ParameterError("need more nodes than the derivative order")
    w = np.zeros((m + 1, n))
    w[0, 0] = 1.0
    c1 = 1.0
    c4 = nodes[0] - x0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    w[k, i] = c1 * (k * w[k - 1, i - 1] - c5 * w[k, i - 1]) / c2
                w[0, i] = -c1 * c5 * w[0, i - 1] / c2
            for k in range(mn, 0, -1):
                w[k, j] = (c4 * w[k, j] - k * w[k - 1, j]) / c3
            w[0, j] = c4 * w[0, j] / c3
        c1 = c2
    return w[m]


def one_sided_derivative(f, m, x0, side, step=None, npts=None):
    """One-sided m-th derivative estimate from a one-sided stencil.

    Probes the assembled function honestly: no piece formulas are
    differentiated.  When ``f`` exposes ``eval_sided`` the stencil anchors
    at x0 itself with the correct one-sided value; otherwise all nodes lie
    strictly on the requested side.
    """
    if side not in ("left", "right"):
        raise ParameterError("side must be 'left' or 'right'")
    if m == 0:
        if hasattr(f, "eval_sided"):
            return f.eval_sided(x0, side)
        eps = 1e-9
        return float(f(x0 + (eps if side == "right" else -eps)))
    if step is None:
        step = _FD_STEPS.get(min(m, 6), 1e-2)
    if npts is None:
        npts = _FD_NPTS.get(min(m, 6), m + 8)
    sgn = 1.0 if side == "right" else -1.0
    if hasattr(f, "eval_sided"):
        nodes = x0 + sgn * step * np.arange(npts)
        vals = np.asarray(f(nodes), dtype=float)
        vals[0] = f.eval_sided(x0, side)
    else:
        nodes = x0 + sgn * step * np.arange(1, npts + 1)
        vals = np.asarray(f(nodes), dtype=float)
    return float(fd_weights(nodes, x0, m) @ vals)


def central_derivative(f, m, x0, step=None, npts=None):
    """Central finite-difference m-th derivative; the independent oracle
    used to cross-check closed-form derivatives at smooth points.
    """
    if m == 0:
        return float(f(x0))
    if step is None:
        step = {1: 1e-5, 2: 1e-4}.get(m, 8e-3)
    if npts is None:
        npts = 2 * ((m + 7) // 2) + 1
    half = npts // 2
    nodes = x0 + step * np.arange(-half, half + 1)
    vals = np.asarray(f(nodes), dtype=float)
    return float(fd_weights(nodes, x0, m) @ vals)


def seam_jump_probe(h, order, points, steps=None):
    """Jumps of h and its derivatives up to ``order`` at the given points.

    Returns a map (point, m) -> |right limit - left limit| of the m-th
    derivative, both limits estimated one-sidedly.  Where h vanishes on one
    side of a seam this is the magnitude of the surviving one-sided
    derivative.  FD accuracy degrades beyond order 6.
    """
    if order > 6:
        raise ParameterError("jump probe is FD-based and limited to order <= 6")
    steps = steps or {}
    out = {}
    for p in points:
        p = float(p)
        for m in range(order + 1):
            step = steps.get(m)
            right = one_sided_derivative(h, m, p, "right", step=step)
            left = one_sided_derivative(h, m, p, "left", step=step)
            out[(p, m)] = abs(right - left)
    return out


def duality_residual(g, h, b, k, grid=4096):
    """Max residual of the modulation-k duality equation on a unit grid.

    Computes max over half-offset x in [0, 1) of

        | sum_{n=-K..K} g(x + k/b + n) h(x + n) - delta_{0,k} b |

    with K = kmax(b) + 2, enough shifts to cover the admissible support.
    A residual of exactly b for k = 0 means h is not a dual at all; values
    at double-precision roundoff certify duality on the grid.
    """
    if grid < 2:
        raise ParameterError("grid must have at least 2 points")
    K = kmax(b) + 2
    xs = (np.arange(grid) + 0.5) / grid
    acc = np.full(grid, -b if k == 0 else 0.0)
    for n in range(-K, K + 1):
        acc = acc + g.eval_deriv(0, xs + k / b + n) * np.asarray(h(xs + n), dtype=float)
    return float(np.max(np.abs(acc)))


def obstruction_jump_sum(g, h, n, x_r, tol=1e-9):
    """The linear constraint on dual values at derivative-jump knots of g.

    For translation step 1, differentiating the k = 0 duality equation
    n+1 times across a knot x_r gives

        sum over knots x_s with x_s - x_r integer of
            [g^(n+1)(x_s+) - g^(n+1)(x_s-)] h(x_s)  =  0

    for any C^(n+1) dual h.  A nonzero sum for every admissible h is the
    obstruction that makes C^(n+1) duals impossible.  ``x_r`` must be a
    knot of g; knots where g^(n+1) happens to be continuous contribute
    zero weight (and an everywhere-C^(n+1) window yields an empty sum).
    """
    knots = np.asarray(g.knots, dtype=float)
    if np.min(np.abs(knots - x_r)) > 1e-9:
        raise ParameterError(f"x_r = {x_r} is not a knot of the window")
    total = 0.0
    for knot in knots:
        d = knot - x_r
        if abs(d - round(d)) > 1e-9:
            continue
        jump = g.eval_deriv_sided(n + 1, knot, "right") - g.eval_deriv_sided(
            n + 1, knot, "left"
        )
        if abs(jump) <= tol:
            continue
        total += jump * float(h(knot))
    return total


def frame_bounds_painless(g, b, grid=4096):
    """Optimal frame bounds (A, B) in the painless region b <= 1/2.

    There the frame operator multiplies by (1/b) sum_n |g(. + n)|^2, so
    A and B are the min and max of that 1-periodic function; the grid
    includes the endpoints of [0, 1) to hit extrema of the built-ins
    exactly.
    """
    if not 0.0 < b <= 0.5:
        raise PainlessRegionError(f"frame bounds require 0 < b <= 1/2, got b = {b}")
    if grid < 2:
        raise ParameterError("grid must have at least 2 points")
    xs = np.arange(grid) / grid
    s = (
        g.eval_deriv(0, xs) ** 2
        + g.eval_deriv(0, xs - 1.0) ** 2
        + g.eval_deriv(0, xs + 1.0) ** 2
    )
    return float(np.min(s) / b), float(np.max(s) / b)


def support_leak(h, intervals, lo=None, hi=None, grid=20000, margin=1.0):
    """sup |h| over a dense grid of points outside the given intervals."""
    intervals = sorted((float(a), float(c)) for a, c in intervals)
    if lo is None:
        lo = intervals[0][0] - margin
    if hi is None:
        hi = intervals[-1][1] + margin
    xs = lo + (hi - lo) * (np.arange(grid) + 0.5) / grid
    outside = np.ones(xs.shape, dtype=bool)
    for a, c in intervals:
        outside &= ~((xs >= a - 1e-9) & (xs <= c + 1e-9))
    if not outside.any():
        return 0.0
    return float(np.max(np.abs(np.asarray(h(xs[outside]), dtype=float))))


def symmetry_defect(h, hi=None, grid=4096):
    """sup |h(x) - h(-x)| over a half-offset grid of (0, hi]."""
    if hi is None:
        hi = float(h.kmax) + 1.0 if isinstance(h, DualWindow) else 2.0
    xs = hi * (np.arange(grid) + 0.5) / grid
    return float(np.max(np.abs(np.asarray(h(xs)) - np.asarray(h(-xs)))))


@dataclass(frozen=True)
class TestSignal:
    """A compactly supported test signal for reconstruction experiments."""

    name: str
    support: tuple
    fn: object

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))


def builtin_signal(name):
    """Test signals on [-3, 3]: 'gaussian', 'bump' (C-infinity), 'chirp'."""
    if name == "gaussian":
        return TestSignal("gaussian", (-3.0, 3.0), lambda x: np.exp(-(x**2)))
    if name == "bump":
        def fn(x):
            out = np.zeros_like(x)
            inside = np.abs(x) < 3.0
            r = x[inside] / 3.0
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - r**2))
            return out

        return TestSignal("bump", (-3.0, 3.0), fn)
    if name == "chirp":
        return TestSignal(
            "chirp", (-3.0, 3.0), lambda x: np.exp(-(x**2)) * np.cos(2.0 * np.pi * x**2)
        )
    raise ParameterError(f"unknown signal {name!r}; valid: gaussian, bump, chirp")


@dataclass
class GaborGridParams:
    """Truncation and quadrature parameters for reconstruction tests.

    ``quad_nodes`` Gauss-Legendre nodes per panel; panels subdivide each
    unit interval finely enough to resolve the fastest modulation
    (about 8 radians of phase per node).
    """

    b: float
    mod_truncation: int = 64
    shift_truncation: int = 6
    quad_nodes: int = 32
    eval_grid: int = 2048

    def __post_init__(self):
        if self.mod_truncation < 1 or self.shift_truncation < 1:
            raise ParameterError("truncations M and K must be >= 1")
        if self.quad_nodes < 16:
            raise ParameterError("need at least 16 quadrature nodes per panel")


def _composite_gauss_legendre(a, c, panels_per_unit, nodes):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, c],
    split at interior integers and into ``panels_per_unit`` panels per unit.
    """
    base_x, base_w = np.polynomial.legendre.leggauss(nodes)
    edges = [a]
    k = np.floor(a) + 1.0
    while k < c:
        if k > a:
            edges.append(k)
        k += 1.0
    edges.append(c)
    xs, ws = [], []
    for lo, hi in zip(edges, edges[1:]):
        nseg = max(1, int(np.ceil((hi - lo) * panels_per_unit)))
        sub = np.linspace(lo, hi, nseg + 1)
        for s0, s1 in zip(sub, sub[1:]):
            half = 0.5 * (s1 - s0)
            xs.append(0.5 * (s0 + s1) + half * base_x)
            ws.append(half * base_w)
    return np.concatenate(xs), np.concatenate(ws)


def reconstruct(signal, g, h, params):
    """Relative L2 error of the truncated Gabor expansion of the signal.

    Analysis coefficients <f, e^{2 pi i b m .} g(. - k)> are computed by
    composite Gauss-Legendre quadrature over supp g intersect supp f, then
    synthesized with the dual window over |m| <= M, |k| <= K.  The signal
    must be supported in [-K+1, K-1] so the shift truncation is exact; the
    returned error is then pure modulation truncation plus quadrature.
    """
    b = params.b
    M, K = params.mod_truncation, params.shift_truncation
    lo_f, hi_f = signal.support
    if lo_f < -K + 1 or hi_f > K - 1:
        raise ParameterError(
            f"signal support [{lo_f}, {hi_f}] exceeds [-K+1, K-1] for K = {K}; "
            "increase the shift truncation"
        )
    xs = lo_f + (hi_f - lo_f) * (np.arange(params.eval_grid) + 0.5) / params.eval_grid
    fvals = np.asarray(signal(xs), dtype=float)
    dx = (hi_f - lo_f) / params.eval_grid
    norm = np.sqrt(dx * np.sum(fvals**2))
    if norm < 1e-14:
        raise DegenerateSignalError("test signal has numerically zero L2 norm")
    ms = np.arange(-M, M + 1)
    panels_per_unit = max(1, int(np.ceil(b * M / 8.0)))
    synth_phase = np.exp(2j * np.pi * b * np.multiply.outer(xs, ms))
    rec = np.zeros(xs.size, dtype=complex)
    for k in range(-K, K + 1):
        a, c = max(k - 1.0, lo_f), min(k + 1.0, hi_f)
        if c - a <= 0:
            continue
        qx, qw = _composite_gauss_legendre(a, c, panels_per_unit, params.quad_nodes)
        fgw = np.asarray(signal(qx)) * g.eval_deriv(0, qx - k) * qw
        coef = np.exp(-2j * np.pi * b * np.multiply.outer(ms, qx)) @ fgw
        rec += (synth_phase @ coef) * np.asarray(h(xs - k), dtype=float)
    err = np.sqrt(dx * np.sum(np.abs(fvals - rec) ** 2))
    return float(err / norm)


def reconstruct_sweep(signal, g, h, params, m_values=(8, 16, 32, 64)):
    """Reconstruction error for each modulation truncation in m_values."""
    out = []
    for M in m_values:
        p = GaborGridParams(
            b=params.b,
            mod_truncation=M,
            shift_truncation=params.shift_truncation,
            quad_nodes=params.quad_nodes,
            eval_grid=params.eval_grid,
        )
        out.append((M, reconstruct(signal, g, h, p)))
    return out


@dataclass
class VerificationReport:
    """Bundle of all checks for one (window, z, b, n) configuration.

    Pass flags are pure functions of the stored residuals and tolerances.
    """

    b: float
    n: int
    kmax: int
    duality_residuals: dict = field(default_factory=dict)
    seam_jumps: dict = field(default_factory=dict)
    support_leak: float = 0.0
    symmetry_defect: float = float("nan")
    expect_symmetric: bool = False
    tolerances: dict = field(
        default_factory=lambda: {
            "duality": DUALITY_TOL,
            "smoothness": JUMP_TOL,
            "support": SUPPORT_TOL,
            "symmetry": SYMMETRY_TOL,
        }
    )

    @property
    def duality_max(self):
        return max(self.duality_residuals.values()) if self.duality_residuals else 0.0

    @property
    def jump_max(self):
        return max(self.seam_jumps.values()) if self.seam_jumps else 0.0

    def checks(self):
        out = {
            "duality": self.duality_max <= self.tolerances["duality"],
            "smoothness": self.jump_max <= self.tolerances["smoothness"],
            "support": self.support_leak <= self.tolerances["support"],
        }
        if self.expect_symmetric:
            out["symmetry"] = self.symmetry_defect <= self.tolerances["symmetry"]
        return out

    @property
    def passed(self):
        return all(self.checks().values())

    def failing_checks(self):
        return sorted(name for name, ok in self.checks().items() if not ok)

    def to_text(self):
        """Flat ``check.subkey = value`` serialization for diffable artifacts."""
        lines = [
            f"meta.b = {self.b:.17g}",
            f"meta.kmax = {self.kmax}",
            f"meta.n = {self.n}",
        ]
        for k in sorted(self.duality_residuals):
            lines.append(f"duality.k[{k}] = {self.duality_residuals[k]:.17g}")
        lines.append(f"duality.max = {self.duality_max:.17g}")
        for (p, m) in sorted(self.seam_jumps):
            lines.append(f"jump.p[{p:.12g}].m[{m}] = {self.seam_jumps[(p, m)]:.17g}")
        lines.append(f"jump.max = {self.jump_max:.17g}")
        lines.append(f"support.leak = {self.support_leak:.17g}")
        lines.append(f"symmetry.defect = {self.symmetry_defect:.17g}")
        for name in sorted(self.tolerances):
            lines.append(f"tol.{name} = {self.tolerances[name]:.17g}")
        for name, ok in sorted(self.checks().items()):
            lines.append(f"check.{name} = {'pass' if ok else 'fail'}")
        lines.append(f"overall.pass = {'true' if self.passed else 'false'}")
        return "\n".join(lines) + "\n"


def _z_breakpoint_images(z, b):
    """Seam-like interior points where a piecewise z folds into the dual."""
    pts = []
    K = kmax(b)
    step = 1.0 / b - 1.0
    breaks = z.breakpoints() if hasattr(z, "breakpoints") else []
    for bp in breaks:
        pts.append(bp)          # central piece on [0, 1]
        pts.append(bp - 1.0)    # central piece on [-1, 0)
        for k in range(1, K + 1):
            if bp >= k * step - 1e-12:
                pts.append(bp + k)
            if bp <= 1.0 - k * step + 1e-12:
                pts.append(bp - 1.0 - k)
    return pts


def full_report(
    g,
    z,
    b,
    n,
    grid=4096,
    expect_symmetric=False,
    extra_probe_points=(),
    tolerances=None,
):
    """Build the dual window for (g, z, b) and run every check.

    Deterministic: fixed grids, no randomness.  Smoothness is probed at
    all seam points plus the interior images of any junctions of z.
    """
    h = build_dual(g, z, b)
    report = VerificationReport(b=b, n=n, kmax=h.kmax, expect_symmetric=expect_symmetric)
    if tolerances:
        report.tolerances.update(tolerances)
    for k in range(-h.kmax - 2, h.kmax + 3):
        report.duality_residuals[k] = duality_residual(g, h, b, k, grid=grid)
    probe_points = sorted(
        set(np.round(np.asarray(list(h.seam_points) + _z_breakpoint_images(z, b)
                                + list(extra_probe_points)), 13))
    )
    report.seam_jumps = seam_jump_probe(h, n, probe_points)
    report.support_leak = support_leak(h, h.support)
    report.symmetry_defect = symmetry_defect(h)
    return report


__all__ = [
    "fd_weights",
    "one_sided_derivative",
    "central_derivative",
    "seam_jump_probe",
    "duality_residual",
    "obstruction_jump_sum",
    "frame_bounds_painless",
    "support_leak",
    "symmetry_defect",
    "TestSignal",
    "builtin_signal",
    "GaborGridParams",
    "reconstruct",
    "reconstruct_sweep",
    "VerificationReport",
    "full_report",
    "DUALITY_TOL",
    "JUMP_TOL",
    "SUPPORT_TOL",
    "SYMMETRY_TOL",
]
