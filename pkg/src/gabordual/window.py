"""Piecewise-analytic windows supported on [-1, 1] with exact derivatives.

A window is an ordered list of pieces, each a closed-form expression on a
closed subinterval, together covering [-1, 1] exactly.  Every piece kind
evaluates its m-th derivative analytically, so knot-matching and boundary
conditions can be certified to machine precision.  Outside [-1, 1] every
derivative is identically zero.

Windows of class ``V^n_+`` are n times continuously differentiable,
supported exactly on [-1, 1] and nonvanishing on (-1, 1).  Such windows
generate Gabor frames with translation step 1 for every modulation step
b in (0, 1); membership is checked numerically by :func:`validate_window`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npol

from .errors import ParameterError, UnsupportedOrderError

_KNOT_TOL = 1e-12


class PolyPiece:
    """Polynomial piece; coefficients in ascending powers of (x - center).

    A nonzero ``center`` selects a Taylor basis anchored inside (or at an
    endpoint of) the piece.  For polynomials that nearly cancel in the
    monomial basis (large alternating coefficients), this keeps absolute
    evaluation error near machine epsilon instead of eps times the largest
    coefficient, which matters because finite-difference probes divide
    that noise by step^m.
    """

    kind = "poly"

    def __init__(self, coeffs, center=0.0):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if c.ndim != 1 or c.size == 0:
            raise ParameterError("polynomial piece needs at least one coefficient")
        self.coeffs = c
        self.center = float(center)
        self.max_order = None

    def eval_deriv(self, m, x):
        c = npol.polyder(self.coeffs, m) if m > 0 else self.coeffs
        return npol.polyval(np.asarray(x, dtype=float) - self.center, c)

    def affine(self, scale, offset=0.0):
        c = self.coeffs * scale
        c[0] += offset
        return PolyPiece(c, self.center)

    def coeff_tokens(self):
        # The file format carries plain ascending powers of x; expand the
        # Taylor basis on export.
        if self.center == 0.0:
            return list(self.coeffs)
        out = np.array([self.coeffs[-1]])
        for j in range(self.coeffs.size - 2, -1, -1):
            out = npol.polymul(out, [-self.center, 1.0])
            out[0] += self.coeffs[j]
        return list(out)


class TrigPolyPiece:
    """Trigonometric polynomial a0 + sum_k a_k cos(k pi x) + b_k sin(k pi x).

    The basis has period 2, matching windows on [-1, 1] (and, restricted to
    [0, 1], parametrizing functions).  Derivatives rotate the coefficient
    pairs: d/dx maps (a_k, b_k) to (k pi b_k, -k pi a_k).
    """

    kind = "trigpoly"

    def __init__(self, cos_coeffs, sin_coeffs=None):
        a = np.atleast_1d(np.asarray(cos_coeffs, dtype=float))
        if sin_coeffs is None:
            b = np.zeros_like(a)
        else:
            b = np.atleast_1d(np.asarray(sin_coeffs, dtype=float))
        if a.size == 0 or a.ndim != 1 or b.ndim != 1:
            raise ParameterError("trigpoly piece needs at least the constant term")
        if b.size < a.size:
            b = np.concatenate([b, np.zeros(a.size - b.size)])
        elif b.size > a.size:
            a = np.concatenate([a, np.zeros(b.size - a.size)])
        b[0] = 0.0
        self.cos_coeffs = a
        self.sin_coeffs = b
        self.max_order = None

    def _deriv_coeffs(self, m):
        a, b = self.cos_coeffs.copy(), self.sin_coeffs.copy()
        w = np.arange(a.size) * np.pi
        for _ in range(m):
            a, b = w * b, -w * a
        return a, b

    def eval_deriv(self, m, x):
        a, b = self._deriv_coeffs(m)
        x = np.asarray(x, dtype=float)
        ks = np.arange(a.size) * np.pi
        arg = np.multiply.outer(x, ks)
        return np.cos(arg) @ a + np.sin(arg) @ b

    def affine(self, scale, offset=0.0):
        a = self.cos_coeffs * scale
        a[0] += offset
        return TrigPolyPiece(a, self.sin_coeffs * scale)

    def coeff_tokens(self):
        toks = [self.cos_coeffs[0]]
        for k in range(1, self.cos_coeffs.size):
            toks += [self.cos_coeffs[k], self.sin_coeffs[k]]
        return toks


class CallablePiece:
    """Piece defined by a closure ``fn(m, x)`` returning the m-th derivative."""

    kind = "callable"

    def __init__(self, fn, max_order=None):
        self._fn = fn
        self.max_order = max_order

    def eval_deriv(self, m, x):
        if self.max_order is not None and m > self.max_order:
            raise UnsupportedOrderError(
                f"piece supplies derivatives up to order {self.max_order}, got {m}"
            )
        return self._fn(m, np.asarray(x, dtype=float))

    def affine(self, scale, offset=0.0):
        inner = self._fn

        def fn(m, x):
            out = scale * inner(m, x)
            return out + offset if m == 0 else out

        return CallablePiece(fn, self.max_order)


class _PiecewiseEval:
    """Dispatch for piecewise functions on a closed interval [lo, hi].

    ``outside="zero"`` returns exact zero beyond the domain (windows);
    ``outside="clamp"`` snaps near-boundary arguments onto the domain and
    rejects anything farther out (parametrizing functions on [0, 1]).
    Two-sided evaluation resolves knots to the right-hand piece.
    """

    _SNAP = 1e-9

    def __init__(self, pieces, lo, hi, outside):
        cleaned = []
        for l, r, p in sorted(pieces, key=lambda t: (t[0], t[1])):
            l, r = float(l), float(r)
            if r < l - _KNOT_TOL:
                raise ParameterError(f"piece interval [{l}, {r}] is reversed")
            cleaned.append([l, max(r, l), p])
        if not cleaned:
            raise ParameterError("at least one piece is required")
        if abs(cleaned[0][0] - lo) > _KNOT_TOL or abs(cleaned[-1][1] - hi) > _KNOT_TOL:
            raise ParameterError(f"pieces must cover [{lo}, {hi}] exactly")
        cleaned[0][0] = lo
        cleaned[-1][1] = hi
        for cur, nxt in zip(cleaned, cleaned[1:]):
            if abs(nxt[0] - cur[1]) > _KNOT_TOL:
                raise ParameterError(
                    f"gap or overlap between pieces at x={cur[1]} vs x={nxt[0]}"
                )
            nxt[0] = cur[1]
        self.lo, self.hi = lo, hi
        self.outside = outside
        self.pieces = tuple((l, r, p) for l, r, p in cleaned)
        self.knots = np.array([l for l, _, _ in cleaned] + [hi])
        orders = [p.max_order for _, _, p in cleaned]
        self.max_order = None if all(o is None for o in orders) else min(
            o for o in orders if o is not None
        )

    def eval_deriv(self, m, x, side="right"):
        if side not in ("left", "right"):
            raise ParameterError("side must be 'left' or 'right'")
        xs = np.asarray(x, dtype=float)
        scalar = xs.ndim == 0
        xs = np.atleast_1d(xs).astype(float, copy=True)
        if self.outside == "clamp":
            if np.any(xs < self.lo - self._SNAP) or np.any(xs > self.hi + self._SNAP):
                raise ParameterError(
                    f"argument outside domain [{self.lo}, {self.hi}]"
                )
            xs = np.clip(xs, self.lo, self.hi)
        idx = np.searchsorted(self.knots, xs, side=side) - 1
        if self.outside == "clamp":
            idx = np.clip(idx, 0, len(self.pieces) - 1)
        out = np.zeros(xs.shape)
        for i, (_, _, piece) in enumerate(self.pieces):
            mask = idx == i
            if mask.any():
                out[mask] = piece.eval_deriv(m, xs[mask])
        return float(out[0]) if scalar else out


class PiecewiseWindow:
    """A window supported on [-1, 1], piecewise analytic with exact derivatives.

    Immutable after construction; concurrent read-only evaluation is safe.

    Parameters
    ----------
    pieces : sequence of (l, r, piece)
        Pieces covering [-1, 1] with shared endpoints (the knots).
    smoothness : int
        Declared class ``V^n_+``; checked by :func:`validate_window`, not here.
    name : str
        Optional label used in messages and CLI output.
    """

    def __init__(self, pieces, smoothness, name=""):
        if smoothness < 0:
            raise ParameterError("smoothness must be a non-negative integer")
        self._ev = _PiecewiseEval(pieces, -1.0, 1.0, outside="zero")
        self.smoothness = int(smoothness)
        self.name = name

    @property
    def pieces(self):
        return self._ev.pieces

    @property
    def knots(self):
        return self._ev.knots

    @property
    def interior_knots(self):
        return self._ev.knots[1:-1]

    @property
    def max_order(self):
        return self._ev.max_order

    def _check_order(self, m):
        if m < 0:
            raise ParameterError("derivative order must be non-negative")
        if self.max_order is not None and m > self.max_order:
            raise UnsupportedOrderError(
                f"window supplies derivatives up to order {self.max_order}, got {m}"
            )

    def eval_deriv(self, m, x):
        """m-th derivative at x; right-hand piece at knots, exact 0 outside."""
        self._check_order(m)
        return self._ev.eval_deriv(m, x, side="right")

    def eval_deriv_sided(self, m, x, side):
        """One-sided m-th derivative limit, using only the piece on ``side``."""
        self._check_order(m)
        return self._ev.eval_deriv(m, x, side=side)

    def __call__(self, x):
        return self.eval_deriv(0, x)

    def piece_lines(self):
        """The window in the line-oriented piece format (see :func:`dump_pieces`)."""
        return dump_pieces(self.pieces)


@dataclass
class ValidationReport:
    """Outcome of a ``V^n_+`` membership check.

    Knot and boundary defects are normalized by max(1, sup |g^(m)|) so that
    pieces with large coefficients are not penalized for float roundoff.
    """

    smoothness: int
    tol: float
    support_ok: bool
    nonvanishing_ok: bool
    min_abs_interior: float
    knot_defects: dict = field(default_factory=dict)
    boundary_defects: dict = field(default_factory=dict)

    @property
    def passed(self):
        if not (self.support_ok and self.nonvanishing_ok):
            return False
        defects = list(self.knot_defects.values()) + list(self.boundary_defects.values())
        return all(d <= self.tol for d in defects)

    def failures(self):
        out = []
        if not self.support_ok:
            out.append("support: nonzero values outside [-1, 1]")
        if not self.nonvanishing_ok:
            out.append(f"nonvanishing: min |g| on interior grid = {self.min_abs_interior:.3e}")
        for (knot, m), d in sorted(self.knot_defects.items()):
            if d > self.tol:
                out.append(f"knot x={knot:g}: order-{m} mismatch, defect {d:.3e}")
        for (x, m), d in sorted(self.boundary_defects.items()):
            if d > self.tol:
                out.append(f"boundary x={x:g}: g^({m}) = {d:.3e} (must vanish)")
        return out


def validate_window(w, n=None, grid_size=4096, tol=1e-9):
    """Check membership of ``w`` in ``V^n_+`` on a dense grid.

    Verifies: exact zero outside [-1, 1]; nonvanishing on an interior grid
    (sign is free); one-sided derivatives of orders 0..n matching at every
    interior knot; derivatives 0..n vanishing at both endpoints.
    """
    if n is None:
        n = w.smoothness
    xs = -1.0 + 2.0 * (np.arange(grid_size) + 0.5) / grid_size
    support_ok = all(
        float(w.eval_deriv(0, x)) == 0.0 for x in (-1.5, 1.5, -1.0 - 1e-9, 1.0 + 1e-9, 3.0)
    )
    # interior knots are the natural places for zeros the grid can miss
    probe = np.concatenate([xs, np.asarray(w.interior_knots, dtype=float)])
    vals = w.eval_deriv(0, probe)
    min_abs = float(np.min(np.abs(vals))) if probe.size else float("inf")
    nonvanishing_ok = min_abs > tol
    report = ValidationReport(
        smoothness=n,
        tol=tol,
        support_ok=support_ok,
        nonvanishing_ok=nonvanishing_ok,
        min_abs_interior=min_abs,
    )
    for m in range(n + 1):
        scale = max(1.0, float(np.max(np.abs(w.eval_deriv(m, xs)))))
        for knot in w.interior_knots:
            left = w.eval_deriv_sided(m, knot, "left")
            right = w.eval_deriv_sided(m, knot, "right")
            report.knot_defects[(float(knot), m)] = abs(left - right) / scale
        report.boundary_defects[(-1.0, m)] = abs(w.eval_deriv_sided(m, -1.0, "right")) / scale
        report.boundary_defects[(1.0, m)] = abs(w.eval_deriv_sided(m, 1.0, "left")) / scale
    return report


def _bump_window():
    # Quadratic amplitude (2 - (x-5)(x+3))/16 = (17 + 2x - x^2)/16 times a C^2
    # plateau spline built from the quintic smooth step q with q(4/5) = 1 and
    # q, q', q'' vanishing at 1 (monomial form 10625 - 60000x + 135000x^2
    # - 151250x^3 + 84375x^4 - 18750x^5, falling edge; rising edge q(-x)).
    # The edge pieces are stored in Taylor bases at +-1, where the monomial
    # coefficients (~1.5e5, alternating) would otherwise cancel to ~5e-12
    # absolute noise; the shifted coefficients below are exact.
    q_taylor_at_1 = np.array([0.0, 0.0, 0.0, -1250.0, -9375.0, -18750.0])
    q_neg_taylor_at_m1 = np.array([0.0, 0.0, 0.0, 1250.0, -9375.0, 18750.0])
    amp = np.array([17.0, 2.0, -1.0]) / 16.0
    amp_at_1 = np.array([18.0, 0.0, -1.0]) / 16.0    # amp(1 + s)
    amp_at_m1 = np.array([14.0, 4.0, -1.0]) / 16.0   # amp(-1 + s)
    return PiecewiseWindow(
        [
            (-1.0, -0.8, PolyPiece(npol.polymul(amp_at_m1, q_neg_taylor_at_m1), center=-1.0)),
            (-0.8, 0.8, PolyPiece(amp)),
            (0.8, 1.0, PolyPiece(npol.polymul(amp_at_1, q_taylor_at_1), center=1.0)),
        ],
        smoothness=2,
        name="bump_example",
    )


_BUILTINS = {
    "hann": (
        "cos^2(pi x / 2) on [-1, 1]; C^1, partition of unity",
        lambda: PiecewiseWindow(
            [(-1.0, 1.0, TrigPolyPiece([0.5, 0.5]))], smoothness=1, name="hann"
        ),
    ),
    "blackman": (
        "0.42 + 0.5 cos(pi x) + 0.08 cos(2 pi x) on [-1, 1]; C^1",
        lambda: PiecewiseWindow(
            [(-1.0, 1.0, TrigPolyPiece([0.42, 0.5, 0.08]))], smoothness=1, name="blackman"
        ),
    ),
    "b2spline": (
        "max(0, 1 - |x|), the second cardinal B-spline; C^0",
        lambda: PiecewiseWindow(
            [(-1.0, 0.0, PolyPiece([1.0, 1.0])), (0.0, 1.0, PolyPiece([1.0, -1.0]))],
            smoothness=0,
            name="b2spline",
        ),
    ),
    "bump_example": (
        "non-symmetric C^2 bump: (2 - (x-5)(x+3))/16 times a quintic plateau spline",
        _bump_window,
    ),
}


def builtin_names():
    return sorted(_BUILTINS)


def builtin(name):
    """Construct a built-in window by name.

    Known names: hann, blackman, b2spline, bump_example.
    """
    try:
        return _BUILTINS[name][1]()
    except KeyError:
        raise ParameterError(
            f"unknown window {name!r}; valid names: {', '.join(builtin_names())}"
        ) from None


def builtin_description(name):
    return _BUILTINS[name][0]


def _format_num(v):
    return f"{float(v):.17g}"


def parse_piece_line(line):
    """Parse one ``l r kind coeffs...`` line into an (l, r, piece) triple.

    ``poly`` coefficients are ascending powers; ``trigpoly`` coefficients are
    ``a0 a1 b1 a2 b2 ...`` for a0 + sum a_k cos(k pi x) + b_k sin(k pi x).
    """
    toks = line.split()
    if len(toks) < 4:
        raise ParameterError(f"piece line needs 'l r kind coeffs...': {line!r}")
    l, r = float(toks[0]), float(toks[1])
    kind = toks[2]
    coeffs = [float(t) for t in toks[3:]]
    if kind == "poly":
        return l, r, PolyPiece(coeffs)
    if kind == "trigpoly":
        if len(coeffs) % 2 == 0:
            raise ParameterError(
                f"trigpoly needs an odd coefficient count (a0 a1 b1 ...): {line!r}"
            )
        a = [coeffs[0]] + coeffs[1::2]
        b = [0.0] + coeffs[2::2]
        return l, r, TrigPolyPiece(a, b)
    raise ParameterError(f"unknown piece kind {kind!r} (use poly or trigpoly)")


def parse_pieces(text):
    """Parse a piece-format document; '#' comments and blank lines are skipped."""
    pieces = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            pieces.append(parse_piece_line(line))
    if not pieces:
        raise ParameterError("no pieces found in definition")
    return pieces


def dump_pieces(pieces):
    """Serialize (l, r, piece) triples back to the line format."""
    lines = []
    for l, r, p in pieces:
        if not hasattr(p, "coeff_tokens"):
            raise ParameterError(f"piece kind {p.kind!r} has no closed-form serialization")
        toks = " ".join(_format_num(c) for c in p.coeff_tokens())
        lines.append(f"{_format_num(l)} {_format_num(r)} {p.kind} {toks}")
    return "\n".join(lines) + "\n"


def load_window(source, smoothness, name=""):
    """Read a window from a piece-format file path, file object, or string."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        try:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParameterError(f"cannot read window file {source!r}: {exc}") from exc
    return PiecewiseWindow(parse_pieces(text), smoothness=smoothness, name=name)


def dump_window(w, target=None):
    """Write a window's pieces in the line format to ``target`` (or return str)."""
    text = w.piece_lines()
    if target is None:
        return text
    if hasattr(target, "write"):
        target.write(text)
        return None
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return None


__all__ = [
    "PolyPiece",
    "TrigPolyPiece",
    "CallablePiece",
    "PiecewiseWindow",
    "ValidationReport",
    "validate_window",
    "builtin",
    "builtin_names",
    "builtin_description",
    "parse_piece_line",
    "parse_pieces",
    "dump_pieces",
    "load_window",
    "dump_window",
]
