"""Assembly and evaluation of compactly supported dual windows.

Given a window g supported on [-1, 1], a modulation step b in (0, 1) and a
parametrizing function z on [0, 1], the dual window is the piecewise
function

    h(x) = -g(x+1) z(x+1) + b psi(x+1)   on [-1, 0),
    h(x) =  g(x-1) z(x)   + b psi(x)     on [0, 1],
    h(x) =  eta_k(x)                      on [-k-1, -k/b],  k = 1..kmax,
    h(x) =  gamma_k(x)                    on [k/b, k+1],    k = 1..kmax,
    h(x) =  0                             elsewhere,

with h(0) = b psi(0) and kmax the largest integer strictly below b/(1-b).
The side pieces are telescoping products of window ratios times the
central bracket; together with the central pieces they satisfy the
characterizing duality equations

    sum_n g(x + k/b + n) h(x + n) = delta_{0,k} b    a.e.,

for every measurable z, so h is an exact dual generator whenever it is
bounded.  All smoothness, symmetry and support control happens through z.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import PainlessRegionError, ParameterError
from .periodization import Periodization

_SNAP = 1e-13  # seam membership tolerance; only matters for irrational b


def kmax(b):
    """Largest integer strictly smaller than b/(1-b); number of side pieces.

    Strict: an integer ratio decrements, e.g. kmax(1/2) = 0.
    """
    if not 0.0 < b < 1.0:
        raise ParameterError(f"modulation parameter b must lie in (0, 1), got {b}")
    return max(math.ceil(b / (1.0 - b)) - 1, 0)


def support_set(b):
    """The admissible support of dual windows, as a sorted list of intervals.

    Union of [-k-1, -k/b] and [k/b, k+1] for k = 1..kmax around the core
    [-1, 1]; adjacent or degenerate intervals are merged/retained as is.
    """
    K = kmax(b)
    raw = [(-k - 1.0, -k / b) for k in range(K, 0, -1)]
    raw.append((-1.0, 1.0))
    raw += [(k / b, k + 1.0) for k in range(1, K + 1)]
    merged = [raw[0]]
    for lo, hi in raw[1:]:
        if lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return merged


def _ratio_product(g, u, b, k, sign):
    """Telescoping window-ratio product shared by gamma_k (+1) and eta_k (-1)."""
    step = 1.0 / b - 1.0
    prod = np.ones_like(u)
    for j in range(1, k + 1):
        if sign > 0:
            prod = prod * g.eval_deriv(0, u - 1.0 - j * step) / g.eval_deriv(0, u - j * step)
        else:
            prod = prod * g.eval_deriv(0, u + 1.0 + j * step) / g.eval_deriv(0, u + j * step)
    return prod


def gamma_k(g, z, b, k, x, psi=None):
    """Right-side auxiliary piece on [k/b, k+1], zero elsewhere.

    With u = x - k:

        gamma_k(x) = (-1)^k prod_{j=1..k} g(u-1-j(1/b-1)) / g(u-j(1/b-1))
                     * [ g(u-1) z(u) + b psi(u) ].

    The ratio denominators stay strictly inside (-1, 1), so the product is
    well-defined; the leading numerator factor vanishes at x = k/b and the
    bracket vanishes at x = k+1 once z meets the continuity conditions.
    """
    K = kmax(b)
    if not 1 <= k <= K:
        raise ParameterError(f"gamma_k needs 1 <= k <= kmax = {K}, got k = {k}")
    if psi is None:
        psi = Periodization(g)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = k / b, k + 1.0
    out = np.zeros(xs.shape)
    mask = (xs >= lo - _SNAP) & (xs <= hi + _SNAP)
    if mask.any():
        u = np.clip(xs[mask] - k, lo - k, 1.0)
        bracket = g.eval_deriv(0, u - 1.0) * z.eval_deriv(0, u) + b * psi(u)
        out[mask] = (-1.0) ** k * _ratio_product(g, u, b, k, +1) * bracket
    return out if np.ndim(x) else float(out[0])


def eta_k(g, z, b, k, x, psi=None):
    """Left-side auxiliary piece on [-k-1, -k/b], zero elsewhere.

    Mirror image of :func:`gamma_k`; with u = x + k:

        eta_k(x) = (-1)^k prod_{j=1..k} g(u+1+j(1/b-1)) / g(u+j(1/b-1))
                   * [ -g(u+1) z(u+1) + b psi(u+1) ].
    """
    K = kmax(b)
    if not 1 <= k <= K:
        raise ParameterError(f"eta_k needs 1 <= k <= kmax = {K}, got k = {k}")
    if psi is None:
        psi = Periodization(g)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = -k - 1.0, -k / b
    out = np.zeros(xs.shape)
    mask = (xs >= lo - _SNAP) & (xs <= hi + _SNAP)
    if mask.any():
        u = np.clip(xs[mask] + k, -1.0, hi + k)
        bracket = -g.eval_deriv(0, u + 1.0) * z.eval_deriv(0, u + 1.0) + b * psi(u + 1.0)
        out[mask] = (-1.0) ** k * _ratio_product(g, u, b, k, -1) * bracket
    return out if np.ndim(x) else float(out[0])


class DualWindow:
    """Assembled dual window: ordered pieces, seam points, center value.

    Immutable after construction; evaluation is vectorized and thread-safe.
    Returns exact zero outside the support union.  The only seam where two
    nonzero pieces meet is x = 0, where the value is fixed to b psi(0).
    """

    def __init__(self, b, kmax_, pieces, seam_points, center_value, window=None, z=None):
        self.b = b
        self.kmax = kmax_
        self.pieces = tuple(pieces)
        self.seam_points = np.asarray(sorted(seam_points), dtype=float)
        self.center_value = center_value
        self.window = window
        self.z = z
        self.support = support_set(b)

    def __call__(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(xs.shape)
        for lo, hi, fn in self.pieces:
            if hi <= lo:
                continue
            mask = (xs >= lo - _SNAP) & (xs <= hi + _SNAP)
            if mask.any():
                out[mask] = fn(np.clip(xs[mask], lo, hi))
        center = xs == 0.0
        if center.any():
            out[center] = self.center_value
        return out if np.ndim(x) else float(out[0])

    def eval_sided(self, x, side):
        """One-sided limit at x using only the piece lying on ``side``.

        Returns 0.0 when the requested side is outside the support.
        """
        if side not in ("left", "right"):
            raise ParameterError("side must be 'left' or 'right'")
        x = float(x)
        for lo, hi, fn in self.pieces:
            if hi <= lo or not (lo - _SNAP <= x <= hi + _SNAP):
                continue
            if side == "left" and x > lo + _SNAP:
                return float(fn(np.array([min(x, hi)]))[0])
            if side == "right" and x < hi - _SNAP:
                return float(fn(np.array([max(x, lo)]))[0])
        return 0.0

    def to_tsv(self, xs, header=False):
        """Sampled export: rows ``x<TAB>h(x)``, 17 significant digits, LF."""
        vals = self(np.asarray(xs, dtype=float))
        lines = ["x\th"] if header else []
        lines += [f"{x:.17g}\t{v:.17g}" for x, v in zip(np.asarray(xs), vals)]
        return "\n".join(lines) + "\n"


def build_dual(g, z, b):
    """Assemble the dual window of g determined by z at modulation step b."""
    if not 0.0 < b < 1.0:
        raise ParameterError(f"modulation parameter b must lie in (0, 1), got {b}")
    K = kmax(b)
    psi = Periodization(g)

    def neg_center(x):
        return -g.eval_deriv(0, x + 1.0) * z.eval_deriv(0, x + 1.0) + b * psi(x + 1.0)

    def pos_center(x):
        return g.eval_deriv(0, x - 1.0) * z.eval_deriv(0, x) + b * psi(x)

    pieces = []
    for k in range(K, 0, -1):
        pieces.append((-k - 1.0, -k / b, _piece_fn(eta_k, g, z, b, k, psi)))
    pieces.append((-1.0, 0.0, neg_center))
    pieces.append((0.0, 1.0, pos_center))
    for k in range(1, K + 1):
        pieces.append((k / b, k + 1.0, _piece_fn(gamma_k, g, z, b, k, psi)))
    seams = {0.0}
    for k in range(K + 1):
        seams.update((k / b, -k / b, k + 1.0, -k - 1.0))
    return DualWindow(
        b=b,
        kmax_=K,
        pieces=pieces,
        seam_points=seams,
        center_value=b * psi.psi0,
        window=g,
        z=z,
    )


def _piece_fn(fn, g, z, b, k, psi):
    return lambda x: fn(g, z, b, k, x, psi=psi)


def canonical_painless_dual(g, b):
    """The canonical dual b g / sum_n g(. + n)^2, valid only for b <= 1/2.

    In that region the frame operator acts by multiplication with
    (1/b) sum_n |g(. + n)|^2, so its inverse applied to g keeps the
    support [-1, 1]; three shifts cover every point of the support.
    """
    if not 0.0 < b <= 0.5:
        raise PainlessRegionError(
            f"canonical painless dual needs 0 < b <= 1/2, got b = {b}"
        )
    g0 = float(g.eval_deriv(0, 0.0))

    def fn(x):
        num = b * g.eval_deriv(0, x)
        den = (
            g.eval_deriv(0, x) ** 2
            + g.eval_deriv(0, x - 1.0) ** 2
            + g.eval_deriv(0, x + 1.0) ** 2
        )
        return num / den

    return DualWindow(
        b=b,
        kmax_=kmax(b),
        pieces=[(-1.0, 1.0, fn)],
        seam_points={-1.0, 0.0, 1.0},
        center_value=b / g0,
        window=g,
        z=None,
    )


__all__ = [
    "kmax",
    "support_set",
    "gamma_k",
    "eta_k",
    "DualWindow",
    "build_dual",
    "canonical_painless_dual",
]
