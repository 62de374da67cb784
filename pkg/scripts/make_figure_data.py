#!/usr/bin/env python3
"""Regenerate the plot-ready sample files for the worked examples.

Emits TSV files (x<TAB>value) for:
  * the Hann and Blackman windows and their C^1 duals at b = 3/5,
  * the short-support (symmetric) duals on [-2/3, 2/3] and their
    Fourier transforms,
  * the non-symmetric C^2 bump window and its dual at b = 7/(3 pi).

Usage: python scripts/make_figure_data.py [outdir]
"""

import math
import sys
from pathlib import Path

import numpy as np

from gabordual.dualwin import build_dual
from gabordual.verify import _composite_gauss_legendre
from gabordual.window import builtin
from gabordual.zgen import z_min_poly, z_small_support, z_standard


def write_tsv(path, xs, ys):
    lines = [f"{x:.17g}\t{y:.17g}" for x, y in zip(xs, ys)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(lines)} rows)")


def fourier_transform(h, support, freqs):
    # FT of a real even function is real: integrate h(x) cos(2 pi f x)
    nodes, weights = _composite_gauss_legendre(support[0], support[1], 8, 32)
    vals = h(nodes) * weights
    return np.array([np.sum(vals * np.cos(2 * np.pi * f * nodes)) for f in freqs])


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("figure_data")
    outdir.mkdir(parents=True, exist_ok=True)
    b = 3 / 5

    xs_win = np.linspace(-1, 1, 501)
    xs_dual = np.linspace(-2, 2, 1001)
    xs_short = np.linspace(-1, 1, 501)
    freqs = np.linspace(0, 5, 501)

    for name in ("hann", "blackman"):
        g = builtin(name)
        write_tsv(outdir / f"{name}_window.tsv", xs_win, g(xs_win))
        write_tsv(
            outdir / f"{name}_window_ft.tsv",
            freqs,
            fourier_transform(g, (-1.0, 1.0), freqs),
        )
        h = build_dual(g, z_standard(g, b), b)
        write_tsv(outdir / f"{name}_dual.tsv", xs_dual, h(xs_dual))
        h_short = build_dual(g, z_small_support(g, b, 1, mid="antisymmetric-trig"), b)
        write_tsv(outdir / f"{name}_dual_short.tsv", xs_short, h_short(xs_short))
        write_tsv(
            outdir / f"{name}_dual_short_ft.tsv",
            freqs,
            fourier_transform(h_short, (-2 / 3, 2 / 3), freqs),
        )

    b2 = 7 / (3 * math.pi)
    bump = builtin("bump_example")
    h2 = build_dual(bump, z_min_poly(bump, b2, 2), b2)
    xs_bump = np.linspace(-3, 3, 1501)
    write_tsv(outdir / "bump_window.tsv", xs_bump, bump(xs_bump))
    write_tsv(outdir / "bump_dual.tsv", xs_bump, h2(xs_bump))


if __name__ == "__main__":
    main()
