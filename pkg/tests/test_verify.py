import math

import numpy as np
import pytest

from gabordual.dualwin import build_dual, canonical_painless_dual
from gabordual.errors import (
    DegenerateSignalError,
    PainlessRegionError,
    ParameterError,
)
from gabordual.verify import (
    GaborGridParams,
    builtin_signal,
    central_derivative,
    duality_residual,
    fd_weights,
    frame_bounds_painless,
    full_report,
    obstruction_jump_sum,
    one_sided_derivative,
    reconstruct,
    reconstruct_sweep,
    seam_jump_probe,
    support_leak,
)
from gabordual.window import builtin
from gabordual.zgen import ZFunction, z_min_poly, z_standard

B = 3 / 5


def test_fd_weights_reproduce_classic_stencils():
    w = fd_weights(np.array([-1.0, 0.0, 1.0]), 0.0, 2)
    assert np.allclose(w, [1.0, -2.0, 1.0])
    w1 = fd_weights(np.array([-1.0, 0.0, 1.0]), 0.0, 1)
    assert np.allclose(w1, [-0.5, 0.0, 0.5])


def test_one_sided_derivative_on_smooth_function():
    f = lambda x: np.sin(np.asarray(x))
    for m, expect in ((1, math.cos(0.4)), (2, -math.sin(0.4))):
        for side in ("left", "right"):
            got = one_sided_derivative(f, m, 0.4, side)
            assert got == pytest.approx(expect, rel=1e-6)


def test_central_derivative_oracle():
    f = lambda x: np.exp(np.asarray(x))
    for m, step in ((1, 1e-4), (2, 1e-3), (3, 8e-3)):
        assert central_derivative(f, m, 0.2, step=step, npts=11) == pytest.approx(
            math.exp(0.2), rel=1e-8
        )


def test_duality_residual_reference_cases():
    g = builtin("hann")
    h = build_dual(g, z_standard(g, B), B)
    assert duality_residual(g, h, B, 0) < 1e-10
    for k in (1, -1):
        assert duality_residual(g, h, B, k) < 1e-10
    # beyond kmax + 1 the supports are disjoint: exact zero
    for k in (2, -2, 3, -3):
        assert duality_residual(g, h, B, k) == 0.0


def test_duality_residual_detects_non_dual():
    g = builtin("hann")
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    assert duality_residual(g, zero, B, 0) == pytest.approx(B)
    assert duality_residual(g, zero, B, 1) == 0.0


def test_duality_residual_any_measurable_z_is_dual():
    # the construction satisfies the duality equations for arbitrary z
    g = builtin("blackman")
    rng = np.random.default_rng(3)
    coeffs = rng.normal(size=4)
    z = ZFunction.from_poly(coeffs)
    h = build_dual(g, z, B)
    assert max(duality_residual(g, h, B, k) for k in range(-3, 4)) < 1e-12


def test_seam_jumps_smooth_dual():
    g = builtin("hann")
    h = build_dual(g, z_standard(g, B), B)
    jumps = seam_jump_probe(h, 1, h.seam_points)
    assert max(jumps.values()) < 1e-6


def test_duality_sweep_all_strategies_and_steps():
    # the characterizing equations hold for every construction whose
    # preconditions are met, across the sampled modulation steps
    from gabordual.zgen import z_small_support

    b_values = (0.55, 3 / 5, 0.62, 7 / (3 * math.pi))
    for name in ("hann", "blackman", "b2spline", "bump_example"):
        g = builtin(name)
        for b in b_values:
            zs = [z_min_poly(g, b, g.smoothness)]
            if name in ("hann", "blackman", "b2spline"):
                zs.append(z_standard(g, b, n=g.smoothness))
            for N in (1, 2, 3):
                if N / (N + 1) <= b < 2 * N / (2 * N + 1):
                    zs.append(z_small_support(g, b, N, n=g.smoothness))
            for z in zs:
                h = build_dual(g, z, b)
                K = h.kmax
                worst = max(
                    duality_residual(g, h, b, k, grid=1024) for k in range(-K - 2, K + 3)
                )
                assert worst < 1e-9, f"{name} b={b} {z.meta.get('strategy')}: {worst}"


def test_smoothness_equivalence_perturbed_target_breaks_a_seam():
    # perturbing a single boundary jet by 1e-3 must show up as a seam jump
    # of the corresponding order well above 1e-4
    g = builtin("hann")
    z = z_min_poly(g, B, 1)
    base = z.pieces[0][2].coeffs
    # q(x) = x^2 (x - 1) shifts only z'(1), by 1e-3
    bump_coeffs = 1e-3 * np.array([0.0, 0.0, -1.0, 1.0])
    z_pert = ZFunction.from_poly(np.polynomial.polynomial.polyadd(base, bump_coeffs))
    h = build_dual(g, z_pert, B)
    jumps = seam_jump_probe(h, 1, h.seam_points)
    worst_order1 = max(v for (p, m), v in jumps.items() if m == 1)
    assert worst_order1 > 1e-4
    assert max(v for (p, m), v in jumps.items() if m == 0) < 1e-6


def test_seam_jump_b2spline_first_derivative():
    # C^0 duals of the tent window always kink at 0 with |jump| = 2b
    g = builtin("b2spline")
    h = build_dual(g, z_min_poly(g, B, 0), B)
    jumps = seam_jump_probe(h, 1, [0.0])
    assert jumps[(0.0, 0)] < 1e-12
    assert jumps[(0.0, 1)] == pytest.approx(2 * B, abs=1e-5)


def test_seam_jump_hann_second_derivative_at_one():
    # the C^1 dual of hann is not C^2: the second-derivative jump at x = 1
    # equals z''(1) + b pi^2 / 2 = 3 b pi^2 / 2
    g = builtin("hann")
    h = build_dual(g, z_standard(g, B), B)
    jumps = seam_jump_probe(h, 2, [1.0])
    assert jumps[(1.0, 2)] == pytest.approx(3 * B * math.pi**2 / 2, abs=1e-3)


def test_seam_jump_probe_rejects_high_order():
    g = builtin("hann")
    h = build_dual(g, z_standard(g, B), B)
    with pytest.raises(ParameterError):
        seam_jump_probe(h, 7, [0.0])


def test_obstruction_jump_sum_b2spline():
    g = builtin("b2spline")
    h = build_dual(g, z_min_poly(g, B, 0), B)
    # jump weights of g' at (-1, 0, 1) are (1, -2, 1); h(+-1) = 0 by support
    total = obstruction_jump_sum(g, h, 0, 0.0)
    assert total == pytest.approx(-2 * B, rel=1e-10)
    assert obstruction_jump_sum(g, h, 0, 1.0) == pytest.approx(-2 * B, rel=1e-10)


def test_obstruction_empty_jump_set_is_zero():
    # hann is C^1 everywhere, so g' has no jumps: empty congruence sum
    g = builtin("hann")
    h = build_dual(g, z_standard(g, B), B)
    assert obstruction_jump_sum(g, h, 0, 1.0) == 0.0


def test_obstruction_requires_a_knot():
    g = builtin("b2spline")
    h = build_dual(g, z_min_poly(g, B, 0), B)
    with pytest.raises(ParameterError, match="knot"):
        obstruction_jump_sum(g, h, 0, 0.5)


def test_frame_bounds_painless_hann():
    A, Bd = frame_bounds_painless(builtin("hann"), 0.4)
    assert A == pytest.approx(1.25, abs=1e-10)
    assert Bd == pytest.approx(2.5, abs=1e-10)
    assert Bd >= A
    with pytest.raises(PainlessRegionError):
        frame_bounds_painless(builtin("hann"), 0.6)


def test_frame_bound_ratio_at_least_one():
    for name in ("blackman", "bump_example"):
        A, Bd = frame_bounds_painless(builtin(name), 0.5)
        assert Bd / A >= 1.0


def test_support_leak_detects_outside_mass():
    g = builtin("hann")
    h = build_dual(g, z_standard(g, B), B)
    assert support_leak(h, h.support) == 0.0
    # shrinking the claimed support must expose the mass outside it
    assert support_leak(h, [(-0.5, 0.5)], lo=-3, hi=3) > 0.1


def test_reconstruct_gaussian_converges():
    g = builtin("hann")
    h = build_dual(g, z_standard(g, B), B)
    sig = builtin_signal("gaussian")
    params = GaborGridParams(b=B, mod_truncation=64, shift_truncation=6)
    rows = reconstruct_sweep(sig, g, h, params, m_values=(8, 16, 32, 64))
    errs = [e for _, e in rows]
    assert errs[-1] < 1e-3
    for prev, cur in zip(errs, errs[1:]):
        assert cur <= 1.1 * prev


def test_reconstruct_zero_signal_rejected():
    g = builtin("hann")
    h = build_dual(g, z_standard(g, B), B)
    zero = builtin_signal("gaussian")
    dead = type(zero)("dead", (-3.0, 3.0), lambda x: np.zeros_like(x))
    with pytest.raises(DegenerateSignalError):
        reconstruct(dead, g, h, GaborGridParams(b=B, mod_truncation=8, shift_truncation=6))


def test_reconstruct_support_guard():
    g = builtin("hann")
    h = build_dual(g, z_standard(g, B), B)
    sig = builtin_signal("chirp")
    with pytest.raises(ParameterError, match="support"):
        reconstruct(sig, g, h, GaborGridParams(b=B, mod_truncation=8, shift_truncation=2))


def test_signal_names():
    for name in ("gaussian", "bump", "chirp"):
        sig = builtin_signal(name)
        assert sig.support == (-3.0, 3.0)
    with pytest.raises(ParameterError):
        builtin_signal("square")


def test_full_report_passes_for_smooth_case():
    g = builtin("hann")
    rep = full_report(g, z_standard(g, B), B, 1, expect_symmetric=True)
    assert rep.passed
    assert rep.checks() == {"duality": True, "smoothness": True, "support": True, "symmetry": True}


def test_full_report_flags_obstructed_smoothness():
    g = builtin("b2spline")
    rep = full_report(g, z_min_poly(g, B, 1), B, 1)
    assert not rep.passed
    assert rep.failing_checks() == ["smoothness"]
    assert rep.duality_max < 1e-9  # duality holds regardless
    assert rep.seam_jumps[(0.0, 1)] == pytest.approx(2 * B, abs=1e-4)


def test_report_serialization_is_flat_and_deterministic():
    g = builtin("hann")
    rep = full_report(g, z_standard(g, B), B, 1)
    text = rep.to_text()
    assert text == full_report(g, z_standard(g, B), B, 1).to_text()
    for line in text.strip().split("\n"):
        key, _, value = line.partition(" = ")
        assert key and value
    assert "overall.pass = true" in text
    assert "duality.k[0] = " in text
    assert "check.duality = pass" in text


def test_grid_params_validation():
    with pytest.raises(ParameterError):
        GaborGridParams(b=B, mod_truncation=0)
    with pytest.raises(ParameterError):
        GaborGridParams(b=B, quad_nodes=8)
