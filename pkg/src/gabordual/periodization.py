"""Reciprocal periodization psi = 1 / sum_n g(. + n) and its derivatives.

For a window supported exactly on [-1, 1] only two integer shifts meet
[0, 1), so on that interval psi(x) = 1/(g(x) + g(x - 1)); psi extends
1-periodically and is bounded above and below by positive constants
whenever g is nonvanishing inside its support.

Derivatives of psi are taken in closed form by composing the outer map
t -> 1/t with the two-shift periodization through Faa di Bruno's formula

    D^n (f o h) = sum over multi-indices (m_1, ..., m_n) with sum j m_j = n
        of n!/(m_1! ... m_n!) f^(|m|)(h) prod_j (h^(j)/j!)^{m_j}.

At x = 0 all shifted derivatives g^(j)(-1) vanish for j <= n, so the sum
collapses to an expression in g^(j)(0) alone, which is what the boundary
conditions for smooth dual windows consume.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from .errors import DegenerateWindowError, ParameterError

_MAX_FAA_ORDER = 20  # exact integer factorials; higher orders are not practical
_MIN_DENOM = 1e-14


def partitions(n):
    """All multi-indices (m_1, ..., m_n) of non-negative integers with
    1*m_1 + 2*m_2 + ... + n*m_n = n, in ascending lexicographic order.

    The count equals the number of integer partitions of n.
    """
    if n < 1:
        raise ParameterError("partitions(n) requires n >= 1")
    if n > _MAX_FAA_ORDER:
        raise ParameterError(f"derivative order {n} exceeds the exact-arithmetic cap {_MAX_FAA_ORDER}")
    acc = []

    def fill(j, rem, buf):
        if j > n:
            if rem == 0:
                acc.append(tuple(buf))
            return
        for mj in range(rem // j + 1):
            buf.append(mj)
            fill(j + 1, rem - j * mj, buf)
            buf.pop()

    fill(1, n, [])
    return acc


def faa_di_bruno(n, outer, inner):
    """Evaluate D^n (f o h) from ``outer[q] = f^(q)(h)`` and ``inner[j] = h^(j)``.

    ``outer`` must cover q = 0..n and ``inner`` j = 1..n (index 0 unused).
    Entries may be scalars or broadcastable arrays.
    """
    total = 0.0
    for m in partitions(n):
        mu = sum(m)
        denom = 1
        for j, mj in enumerate(m, start=1):
            denom *= factorial(mj) * factorial(j) ** mj
        coef = factorial(n) // denom
        term = coef * outer[mu]
        for j, mj in enumerate(m, start=1):
            if mj:
                term = term * inner[j] ** mj
        total = total + term
    return total


class Periodization:
    """psi = 1 / (g(.) + g(. - 1)) on [0, 1], extended 1-periodically.

    Immutable; safe for concurrent evaluation.  The value psi(0) = psi(1)
    = 1/g(0) is cached at construction.
    """

    def __init__(self, window):
        self.window = window
        g0 = float(window.eval_deriv(0, 0.0))
        if abs(g0) < _MIN_DENOM:
            raise DegenerateWindowError("window vanishes at 0; periodization undefined")
        self.psi0 = 1.0 / g0

    def _denominator(self, m, x, side="right"):
        xt = np.asarray(x, dtype=float)
        xt = xt - np.floor(xt)
        g = self.window
        if side == "right":
            return xt, g.eval_deriv(m, xt) + g.eval_deriv(m, xt - 1.0)
        return xt, g.eval_deriv_sided(m, xt, side) + g.eval_deriv_sided(m, xt - 1.0, side)

    def __call__(self, x):
        """psi(x) = 1/(g(x~) + g(x~ - 1)) with x~ = x mod 1."""
        _, denom = self._denominator(0, x)
        if np.min(np.abs(denom)) < _MIN_DENOM:
            raise DegenerateWindowError("periodization denominator below 1e-14")
        out = 1.0 / denom
        return float(out) if np.ndim(x) == 0 else out

    def deriv(self, m, x, side="right"):
        """d^m psi / dx^m at x, via Faa di Bruno on the two-shift sum.

        At points where g (or its unit shift) has a derivative jump of order
        <= m, pass ``side`` to select the one-sided limit.
        """
        if m == 0:
            return self(x)
        xt, denom = self._denominator(0, x, side)
        if np.min(np.abs(denom)) < _MIN_DENOM:
            raise DegenerateWindowError("periodization denominator below 1e-14")
        inner = [None] + [self._denominator(j, xt, side)[1] for j in range(1, m + 1)]
        outer = [(-1.0) ** q * factorial(q) / denom ** (q + 1) for q in range(m + 1)]
        out = faa_di_bruno(m, outer, inner)
        return float(out) if np.ndim(x) == 0 else out

    def deriv_at_zero(self, m):
        """psi^(m)(0) in closed form from g^(j)(0), j = 1..m.

        Valid for windows in V^m_+, where g^(j)(-1) = 0 for j <= m makes the
        shifted terms drop out of the two-shift denominator.
        """
        if m == 0:
            return self.psi0
        g = self.window
        g0 = float(g.eval_deriv(0, 0.0))
        if abs(g0) < _MIN_DENOM:
            raise DegenerateWindowError("window vanishes at 0")
        inner = [None] + [float(g.eval_deriv(j, 0.0)) for j in range(1, m + 1)]
        outer = [(-1.0) ** q * factorial(q) / g0 ** (q + 1) for q in range(m + 1)]
        return float(faa_di_bruno(m, outer, inner))


__all__ = ["Periodization", "partitions", "faa_di_bruno"]
