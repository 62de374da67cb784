"""Construction of the parametrizing function z on [0, 1].

Every compactly supported dual window of a window g in ``V^0_+`` arises,
up to null sets, from a measurable function z on [0, 1] through the
assembly in :mod:`gabordual.dualwin`.  Smoothness of the dual window is
controlled entirely by the boundary jets of z: the dual is C^n exactly
when z is C^n and its derivatives at 0 and 1 take the forced values

    z(0) = b / g(0)^2,            z(1) = -b / g(0)^2,
    z^(m)(0) = -sum_{l=1..m} C(m,l) g^(l)(0)/g(0) z^(m-l)(0) + b psi^(m)(0)/g(0),
    z^(m)(1) = -sum_{l=1..m} C(m,l) g^(l)(0)/g(0) z^(m-l)(1) - b psi^(m)(0)/g(0).

This module computes those targets and builds z by several recipes: the
window-shaped standard choice, the minimal boundary-matched polynomial,
and the short-support piecewise form, plus recovery of z from a given
dual window.
"""

from __future__ import annotations

from math import comb

import numpy as np
from numpy.polynomial import polynomial as npol

from .errors import (
    DegenerateWindowError,
    EndpointUndefinedError,
    ParameterError,
    PreconditionError,
    UnsupportedOrderError,
)
from .periodization import Periodization
from .window import (
    CallablePiece,
    PolyPiece,
    TrigPolyPiece,
    _PiecewiseEval,
    dump_pieces,
    parse_pieces,
)


class ZFunction:
    """A function z on [0, 1] with derivative evaluation, immutable.

    Finite everywhere on [0, 1], hence bounded, which is what makes the
    assembled dual window a Bessel generator.  Arguments outside [0, 1]
    (beyond a snap tolerance) are rejected: z has no canonical extension.
    """

    def __init__(self, pieces, meta=None):
        self._ev = _PiecewiseEval(pieces, 0.0, 1.0, outside="clamp")
        self.meta = dict(meta or {})

    @classmethod
    def from_poly(cls, coeffs, meta=None):
        return cls([(0.0, 1.0, PolyPiece(coeffs))], meta=meta)

    @classmethod
    def from_trig(cls, cos_coeffs, sin_coeffs=None, meta=None):
        return cls([(0.0, 1.0, TrigPolyPiece(cos_coeffs, sin_coeffs))], meta=meta)

    @classmethod
    def from_callable(cls, fn, max_order=None, meta=None):
        return cls([(0.0, 1.0, CallablePiece(fn, max_order))], meta=meta)

    @classmethod
    def from_file(cls, source, meta=None):
        if hasattr(source, "read"):
            text = source.read()
        else:
            try:
                with open(source, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ParameterError(f"cannot read z file {source!r}: {exc}") from exc
        return cls(parse_pieces(text), meta=meta)

    @property
    def pieces(self):
        return self._ev.pieces

    @property
    def max_order(self):
        return self._ev.max_order

    def breakpoints(self):
        """Interior junction points of the piecewise representation."""
        return [float(k) for k in self._ev.knots[1:-1]]

    def eval_deriv(self, m, x, side="right"):
        if m < 0:
            raise ParameterError("derivative order must be non-negative")
        if self.max_order is not None and m > self.max_order:
            raise UnsupportedOrderError(
                f"z supplies derivatives up to order {self.max_order}, got {m}"
            )
        return self._ev.eval_deriv(m, x, side=side)

    def __call__(self, x):
        return self.eval_deriv(0, x)

    def piece_lines(self):
        return dump_pieces(self.pieces)

    def dump(self, target=None):
        """Serialize in the same line format as window files, on [0, 1]."""
        text = self.piece_lines()
        if target is None:
            return text
        if hasattr(target, "write"):
            target.write(text)
            return None
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        return None


class BoundaryTargets:
    """Forced boundary jets (z^(m)(0))_m and (z^(m)(1))_m for C^n duals."""

    def __init__(self, n, b, at0, at1):
        self.n = n
        self.b = b
        self.at0 = np.asarray(at0, dtype=float)
        self.at1 = np.asarray(at1, dtype=float)

    def __repr__(self):
        return f"BoundaryTargets(n={self.n}, b={self.b}, at0={self.at0}, at1={self.at1})"


def boundary_targets(g, b, n):
    """Solve the boundary recursion for the jets of z at 0 and 1.

    Requires g in V^n_+ and 0 < b < 1; the recursion consumes psi^(m)(0)
    computed in closed form, so the targets are exact up to roundoff.
    """
    if not 0.0 < b < 1.0:
        raise ParameterError(f"modulation parameter b must lie in (0, 1), got {b}")
    if n < 0:
        raise ParameterError("smoothness order must be non-negative")
    psi = Periodization(g)
    g0 = float(g.eval_deriv(0, 0.0))
    if abs(g0) < 1e-14:
        raise DegenerateWindowError("window vanishes at 0")
    gd = [float(g.eval_deriv(j, 0.0)) for j in range(n + 1)]
    at0 = np.empty(n + 1)
    at1 = np.empty(n + 1)
    at0[0] = b / g0**2
    at1[0] = -b / g0**2
    for m in range(1, n + 1):
        psim = psi.deriv_at_zero(m)
        s0 = sum(comb(m, l) * gd[l] / g0 * at0[m - l] for l in range(1, m + 1))
        s1 = sum(comb(m, l) * gd[l] / g0 * at1[m - l] for l in range(1, m + 1))
        at0[m] = -s0 + b * psim / g0
        at1[m] = -s1 - b * psim / g0
    return BoundaryTargets(n, b, at0, at1)


def hermite_interpolant(nodes, jets, center=0.0):
    """Coefficients (powers of x - center) of the minimal polynomial
    matching the given jets.

    ``jets[i]`` lists the derivative values of orders 0..k_i at ``nodes[i]``;
    the interpolant has degree sum(k_i + 1) - 1.  Uses divided differences
    on the repeated-node set, which stays well-conditioned for the short
    jets (orders up to ~10) used here.  Centering the output basis inside
    the target interval keeps evaluation noise at machine epsilon even when
    the monomial coefficients would be large and cancelling.
    """
    zs = []
    vals = []
    counts = []
    for x, ds in zip(nodes, jets):
        ds = list(ds)
        zs.extend([float(x) - center] * len(ds))
        vals.append(ds)
        counts.append(len(ds))
    m = len(zs)
    table = np.zeros((m, m))
    pos = 0
    for i, ds in enumerate(vals):
        for r in range(counts[i]):
            table[pos + r, 0] = ds[0]
        pos += counts[i]

    def jet_value(i, order):
        # derivative of given order at the node owning flattened index i
        pos2 = 0
        for node_i, cnt in enumerate(counts):
            if i < pos2 + cnt:
                return vals[node_i][order]
            pos2 += cnt
        raise IndexError(i)

    fact = [1.0]
    for j in range(1, m):
        fact.append(fact[-1] * j)
    for j in range(1, m):
        for i in range(m - j):
            if zs[i + j] == zs[i]:
                table[i, j] = jet_value(i, j) / fact[j]
            else:
                table[i, j] = (table[i + 1, j - 1] - table[i, j - 1]) / (zs[i + j] - zs[i])
    coeffs = np.array([table[0, m - 1]])
    for j in range(m - 2, -1, -1):
        coeffs = npol.polymul(coeffs, [-zs[j], 1.0])
        coeffs[0] += table[0, j]
    return coeffs


def z_standard(g, b, n=None, tol=1e-9):
    """The window-shaped choice z(x) = (b/g(0)^3) (2 g(x) - g(0)) on [0, 1].

    Meets every boundary target automatically when g^(m)(0) = 0 for
    m = 1..n (any even window, any partition-of-unity window), so the
    assembled dual window is C^n whenever g is.  Raises when that
    hypothesis fails, naming the first bad order.
    """
    if n is None:
        n = g.smoothness
    if not 0.0 < b < 1.0:
        raise ParameterError(f"modulation parameter b must lie in (0, 1), got {b}")
    g0 = float(g.eval_deriv(0, 0.0))
    if abs(g0) < 1e-14:
        raise DegenerateWindowError("window vanishes at 0")
    xs = (np.arange(512) + 0.5) / 512
    for m in range(1, n + 1):
        scale = max(1.0, float(np.max(np.abs(g.eval_deriv(m, xs)))))
        gm0 = float(g.eval_deriv(m, 0.0))
        if abs(gm0) > tol * scale:
            raise PreconditionError(
                f"z_standard needs g^(m)(0) = 0 for m = 1..{n}; "
                f"fails first at order {m} with g^({m})(0) = {gm0:.6g}"
            )
    scale = 2.0 * b / g0**3
    offset = -b / g0**2
    pieces = []
    for l, r, p in g.pieces:
        lo, hi = max(l, 0.0), min(r, 1.0)
        if hi > lo:
            pieces.append((lo, hi, p.affine(scale, offset)))
    return ZFunction(pieces, meta={"strategy": "standard", "b": b, "n": n})


def z_min_poly(g, b, n=None):
    """The unique polynomial of degree <= 2n + 1 matching all boundary jets.

    Two-point Hermite interpolation of the targets at x = 0 and x = 1;
    2n + 2 conditions, hence degree 2n + 1 suffices (and is minimal).
    """
    if n is None:
        n = g.smoothness
    targets = boundary_targets(g, b, n)
    coeffs = hermite_interpolant([0.0, 1.0], [targets.at0, targets.at1])
    return ZFunction.from_poly(
        coeffs, meta={"strategy": "minpoly", "b": b, "n": n, "targets": targets}
    )


def _quotient_piece(num_fn, den_fn):
    """Piece for q = num/den with derivatives by the Leibniz back-solve

    q^(m) = (num^(m) - sum_{l<m} C(m,l) q^(l) den^(m-l)) / den.
    """

    def fn(m, x):
        nums = [num_fn(j, x) for j in range(m + 1)]
        dens = [den_fn(j, x) for j in range(m + 1)]
        q = []
        for mm in range(m + 1):
            s = nums[mm]
            for l in range(mm):
                s = s - comb(mm, l) * q[l] * dens[mm - l]
            q.append(s / dens[0])
        return q[m]

    return CallablePiece(fn)


def z_small_support(g, b, N, n=None, mid="hermite"):
    """Short-support recipe: z forcing the dual window to vanish off [-N, N].

    Valid for b in [N/(N+1), 2N/(2N+1)).  With t = N (1/b - 1) in (1/2, 1],

        z = b psi / g            on [0, 1 - t],
        z = z_mid                on (1 - t, t),
        z = -b psi / g(. - 1)    on [t, 1].

    The outer pieces already satisfy every boundary target, so the dual is
    C^n as soon as z_mid joins them with matching derivatives 0..n:

    - ``mid="hermite"``: minimal-degree polynomial joiner (degree 2n + 1);
    - ``mid="antisymmetric-trig"``: minimal odd-harmonic cosine joiner
      c_1 cos(pi x) + c_3 cos(3 pi x) + ..., antisymmetric about x = 1/2,
      which for even windows also makes the dual window even.  Falls back
      to the polynomial joiner if the trigonometric system is numerically
      singular (condition number above 1e12).
    - a ZFunction (or piece evaluator) may be passed to supply a custom mid.
    """
    if n is None:
        n = g.smoothness
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        raise ParameterError(f"N must be a positive integer, got {N!r}")
    lo, hi = N / (N + 1), 2 * N / (2 * N + 1)
    if not (lo <= b < hi):
        raise ParameterError(
            f"short-support construction needs b in [N/(N+1), 2N/(2N+1)) "
            f"= [{lo:.12g}, {hi:.12g}) for N = {N}; got b = {b:.12g}"
        )
    psi = Periodization(g)
    t = N * (1.0 / b - 1.0)
    x_l, x_r = max(1.0 - t, 0.0), min(t, 1.0)

    left = _quotient_piece(
        lambda j, x: b * psi.deriv(j, x),
        lambda j, x: g.eval_deriv(j, x),
    )
    right = _quotient_piece(
        lambda j, x: -b * psi.deriv(j, x),
        lambda j, x: g.eval_deriv(j, np.asarray(x, dtype=float) - 1.0),
    )

    jet_l = [float(left.eval_deriv(m, x_l)) for m in range(n + 1)]
    jet_r = [float(right.eval_deriv(m, x_r)) for m in range(n + 1)]

    if mid == "hermite":
        mid_piece = PolyPiece(hermite_interpolant([x_l, x_r], [jet_l, jet_r]))
    elif mid in ("antisymmetric-trig", "antisym"):
        freqs = (2 * np.arange(n + 1) + 1) * np.pi
        rows = []
        for m in range(n + 1):
            rows.append(freqs**m * np.cos(freqs * x_l + m * np.pi / 2.0))
        A = np.array(rows)
        if np.linalg.cond(A) > 1e12:
            mid_piece = PolyPiece(hermite_interpolant([x_l, x_r], [jet_l, jet_r]))
        else:
            c = np.linalg.solve(A, np.asarray(jet_l))
            cos_coeffs = np.zeros(2 * n + 2)
            cos_coeffs[1::2] = c
            mid_piece = TrigPolyPiece(cos_coeffs)
    elif isinstance(mid, ZFunction):
        mid_piece = CallablePiece(lambda m, x: mid.eval_deriv(m, x), mid.max_order)
    elif hasattr(mid, "eval_deriv"):
        mid_piece = mid
    else:
        raise ParameterError(
            f"mid must be 'hermite', 'antisymmetric-trig', or a z function; got {mid!r}"
        )

    pieces = [(0.0, x_l, left), (x_l, x_r, mid_piece), (x_r, 1.0, right)]
    meta = {"strategy": "smallsupport", "b": b, "n": n, "N": N, "junctions": (x_l, x_r)}
    return ZFunction(pieces, meta=meta)


def recover_z(h, g, b):
    """Invert the dual-window assembly: z(x) = (h(x) - b psi(x)) / g(x - 1).

    Well-defined almost everywhere on (0, 1) for any h supported in the
    admissible box.  Endpoint values exist only as limits: for a dual
    window constructed by this library they are the order-0 boundary
    targets; for an externally supplied h the endpoints are undefined
    (they are a null set for the parametrization) and raise.
    """
    if not 0.0 < b < 1.0:
        raise ParameterError(f"modulation parameter b must lie in (0, 1), got {b}")
    psi = Periodization(g)
    g0 = float(g.eval_deriv(0, 0.0))
    from_dual = hasattr(h, "seam_points") and hasattr(h, "center_value")
    z0, z1 = b / g0**2, -b / g0**2

    def fn(m, x):
        if m != 0:
            raise UnsupportedOrderError("recovered z supplies values only (order 0)")
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        at0 = xs <= 0.0
        at1 = xs >= 1.0
        interior = ~(at0 | at1)
        if (at0.any() or at1.any()) and not from_dual:
            raise EndpointUndefinedError(
                "recovered z has no defined value at x = 0 or x = 1 "
                "for an externally supplied dual window"
            )
        out = np.empty(xs.shape)
        if interior.any():
            xi = xs[interior]
            hv = np.asarray(h(xi), dtype=float)
            out[interior] = (hv - b * psi(xi)) / g.eval_deriv(0, xi - 1.0)
        out[at0] = z0
        out[at1] = z1
        return out if np.ndim(x) else float(out[0])

    return ZFunction.from_callable(fn, max_order=0, meta={"strategy": "recovered", "b": b})


__all__ = [
    "ZFunction",
    "BoundaryTargets",
    "boundary_targets",
    "hermite_interpolant",
    "z_standard",
    "z_min_poly",
    "z_small_support",
    "recover_z",
]
