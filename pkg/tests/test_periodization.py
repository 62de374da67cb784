import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gabordual.errors import DegenerateWindowError, ParameterError
from gabordual.periodization import Periodization, partitions
from gabordual.verify import central_derivative, one_sided_derivative
from gabordual.window import PiecewiseWindow, PolyPiece, builtin


def partition_count(n):
    # independent oracle: classic partition-number recurrence
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            table[total] += table[total - part]
    return table[n]


def test_partitions_examples():
    assert partitions(1) == [(1,)]
    assert set(partitions(2)) == {(2, 0), (0, 1)}
    assert set(partitions(3)) == {(3, 0, 0), (1, 1, 0), (0, 0, 1)}


def test_partitions_sorted_and_bounds():
    ps = partitions(6)
    assert ps == sorted(ps)
    with pytest.raises(ParameterError):
        partitions(0)
    with pytest.raises(ParameterError):
        partitions(21)


@settings(max_examples=20)
@given(n=st.integers(1, 12))
def test_partitions_constraint_and_cardinality(n):
    ps = partitions(n)
    assert len(ps) == partition_count(n)
    assert len(set(ps)) == len(ps)
    for m in ps:
        assert len(m) == n
        assert sum((j + 1) * mj for j, mj in enumerate(m)) == n


def test_hann_partition_of_unity():
    psi = Periodization(builtin("hann"))
    xs = np.linspace(-2, 3, 301)
    assert np.allclose(psi(xs), 1.0, atol=1e-15)
    for m in (1, 2, 3):
        assert np.max(np.abs(psi.deriv(m, xs[::10]))) < 1e-10


def test_psi_center_values():
    assert Periodization(builtin("hann"))(0.0) == 1.0
    psi = Periodization(builtin("bump_example"))
    assert psi(0.0) == pytest.approx(16.0 / 17.0, rel=1e-15)
    assert psi.psi0 == pytest.approx(16.0 / 17.0, rel=1e-15)


def test_psi_periodicity_exact_on_dyadic_grid():
    psi = Periodization(builtin("blackman"))
    xs = np.arange(1, 1024) / 1024.0
    assert np.max(np.abs(psi(xs) - psi(xs + 1.0))) == 0.0
    assert np.max(np.abs(psi(xs) - psi(xs - 2.0))) == 0.0


def test_psi_bounded_above_and_below():
    for name in ("hann", "blackman", "bump_example", "b2spline"):
        psi = Periodization(builtin(name))
        xs = np.linspace(0, 1, 2001)
        vals = psi(xs)
        assert np.all(vals > 0.1)
        assert np.all(vals < 10.0)


def test_deriv_at_zero_closed_forms_match_recursion():
    # order 1: -g'(0)/g(0)^2; order 2: 2 g'(0)^2/g(0)^3 - g''(0)/g(0)^2
    for name in ("bump_example", "blackman", "hann"):
        g = builtin(name)
        psi = Periodization(g)
        g0 = g(0.0)
        g1 = g.eval_deriv(1, 0.0)
        g2 = g.eval_deriv(2, 0.0)
        assert psi.deriv_at_zero(1) == pytest.approx(-g1 / g0**2, rel=1e-12, abs=1e-15)
        assert psi.deriv_at_zero(2) == pytest.approx(
            2 * g1**2 / g0**3 - g2 / g0**2, rel=1e-12, abs=1e-15
        )


def test_flat_center_deriv_at_zero_vanishes():
    # whenever g^(j)(0) = 0 for j = 1..m, every partition term carries a
    # vanishing factor, so the closed form is exactly zero
    psi = Periodization(builtin("hann"))
    assert abs(psi.deriv_at_zero(1)) < 1e-14
    flat = PiecewiseWindow(
        [(-1.0, 1.0, PolyPiece([1.0] + [0.0] * 5 + [-3.0] + [0.0] * 5 + [3.0] + [0.0] * 5 + [-1.0]))],
        smoothness=2,
        name="flat18",
    )  # (1 - x^6)^3: flat at 0 through order 5
    psi_f = Periodization(flat)
    for m in (1, 2, 3, 4, 5):
        assert psi_f.deriv_at_zero(m) == 0.0


def test_deriv_at_zero_matches_finite_differences_for_valid_orders():
    # The closed form describes psi^(m)(0) only for windows of class V^m;
    # bump_example is C^2, so orders 1 and 2 are the valid range.  Order 1
    # admits a central stencil (the stencil's odd symmetry cancels the
    # third-derivative kink of psi at the fold); order 2 is probed one-sidedly
    # on each smooth branch, both of which must converge to the same value.
    psi = Periodization(builtin("bump_example"))
    fd1 = central_derivative(psi, 1, 0.0, step=2.5e-4, npts=9)
    assert fd1 == pytest.approx(psi.deriv_at_zero(1), rel=1e-6)
    # order 2 sits at the one-sided FD floor: the branch's 8th derivative is
    # ~1e12 (quintic edge through the reciprocal), so truncation forces small
    # steps while the stencil roundoff grows like eps/step^2; ~2e-6 relative
    # is the honest optimum, and the 1e-12 closed-form identity check below
    # carries the precision burden for this order
    exact2 = psi.deriv_at_zero(2)
    for side in ("left", "right"):
        fd2 = one_sided_derivative(psi, 2, 0.0, side, step=5e-4, npts=8)
        assert fd2 == pytest.approx(exact2, rel=5e-6)


def test_deriv_at_zero_high_orders_on_smooth_periodization():
    # blackman's two-shift sum is itself a smooth 1-periodic trig polynomial
    # (odd harmonics cancel), so psi is analytic and central stencils apply
    # at any order; the closed form is exact here for odd orders, which all
    # vanish by symmetry
    psi = Periodization(builtin("blackman"))
    for m, step in ((1, 1e-3), (3, 8e-3)):
        fd = central_derivative(psi, m, 0.0, step=step, npts=11)
        assert fd == pytest.approx(psi.deriv_at_zero(m), abs=1e-7)
        assert abs(psi.deriv_at_zero(m)) < 1e-12


def test_deriv_consistent_at_zero():
    # psi.deriv at 0 uses the true two-shift sum; it agrees with the
    # g-only closed form exactly up to the window's smoothness class
    for name, orders in (("bump_example", (1, 2)), ("blackman", (1,)), ("hann", (1,))):
        psi = Periodization(builtin(name))
        for m in orders:
            assert psi.deriv(m, 0.0) == pytest.approx(psi.deriv_at_zero(m), rel=1e-9, abs=1e-12)


def test_deriv_at_zero_beyond_class_drops_shift_terms():
    # blackman is only V^1: above that order the closed form differs from
    # the true periodization derivative by the g^(j)(-1) contributions
    psi = Periodization(builtin("blackman"))
    assert abs(psi.deriv(2, 0.0) - psi.deriv_at_zero(2)) > 1.0


def test_deriv_matches_fd_at_generic_point():
    psi = Periodization(builtin("blackman"))
    fd = central_derivative(psi, 1, 0.25, step=1e-5)
    assert psi.deriv(1, 0.25) == pytest.approx(fd, rel=1e-6)
    psi2 = Periodization(builtin("bump_example"))
    fd2 = central_derivative(psi2, 2, 0.37, step=1e-3, npts=11)
    assert psi2.deriv(2, 0.37) == pytest.approx(fd2, rel=1e-6)


def test_degenerate_denominator_raises():
    # g(x) = x + 0.2 is not a window; its two-shift sum vanishes at x = 0.3
    g = PiecewiseWindow([(-1.0, 1.0, PolyPiece([0.2, 1.0]))], smoothness=0)
    psi = Periodization(g)
    with pytest.raises(DegenerateWindowError):
        psi(0.3)


def test_degenerate_center_raises():
    g = PiecewiseWindow(
        [(-1.0, 0.0, PolyPiece([0.0, -1.0])), (0.0, 1.0, PolyPiece([0.0, 1.0]))],
        smoothness=0,
    )
    with pytest.raises(DegenerateWindowError):
        Periodization(g)


def test_tent_periodization_is_constant():
    # the tent window is a partition of unity: psi is identically 1
    psi = Periodization(builtin("b2spline"))
    xs = np.linspace(0.05, 0.95, 19)
    assert np.allclose(psi(xs), 1.0, atol=1e-15)
    assert np.max(np.abs(psi.deriv(1, 0.3))) < 1e-12
