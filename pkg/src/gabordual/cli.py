"""Command-line front end: build duals, verify them, run reconstruction demos.

Exit codes: 0 success (all checks pass), 1 verification failure,
2 usage or parameter error.

Output files are plain TSV (x<TAB>value, 17 significant digits, LF line
endings, no header unless --header) so figures regenerate with any
plotting tool, plus flat key = value report/meta text files.  Repeated
runs with identical configuration produce byte-identical output.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import dualwin, verify, window, zgen
from .errors import GaborDualError, ParameterError

_FRACTION_RE = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")
_PI_FRACTION_RE = re.compile(r"^\s*(\d+)\s*/\s*\(\s*(\d+)\s*\*\s*pi\s*\)\s*$", re.IGNORECASE)


def parse_b(text):
    """Parse the modulation parameter: decimal, ``p/q``, or ``p/(q*pi)``.

    The symbolic forms keep irrational choices such as 7/(3*pi) exact up
    to one final binary rounding.
    """
    m_frac = _FRACTION_RE.match(text)
    m_pi = _PI_FRACTION_RE.match(text)
    if m_frac or m_pi:
        m = m_frac or m_pi
        p, q = int(m.group(1)), int(m.group(2))
        if q == 0:
            raise ParameterError(f"zero denominator in b = {text!r}")
        value = p / q if m_frac else p / (q * math.pi)
    else:
        try:
            value = float(text)
        except ValueError:
            raise ParameterError(
                f"cannot parse b = {text!r}; use a decimal, p/q, or p/(q*pi)"
            ) from None
    if not 0.0 < value < 1.0:
        raise ParameterError(f"b must lie in (0, 1), got {text!r} = {value:.12g}")
    return value


@dataclass
class RunConfig:
    """Parsed command configuration shared by build and verify."""

    window_spec: str
    b_text: str
    b: float
    n: int | None
    z_strategy: str
    grid: int
    outdir: str
    header: bool = False

    def resolve_window(self):
        if self.window_spec in window.builtin_names():
            return window.builtin(self.window_spec)
        if os.path.exists(self.window_spec):
            n = self.n if self.n is not None else 0
            return window.load_window(self.window_spec, smoothness=n,
                                      name=os.path.basename(self.window_spec))
        raise ParameterError(
            f"window {self.window_spec!r} is neither a builtin "
            f"({', '.join(window.builtin_names())}) nor a readable file"
        )

    def order(self, g):
        return g.smoothness if self.n is None else self.n

    def resolve_z(self, g):
        strat = self.z_strategy
        n = self.order(g)
        if strat == "standard":
            return zgen.z_standard(g, self.b, n=n)
        if strat == "minpoly":
            return zgen.z_min_poly(g, self.b, n=n)
        if strat.startswith("smallsupport"):
            parts = strat.split(":")
            if len(parts) not in (2, 3):
                raise ParameterError(
                    f"bad z strategy {strat!r}; use smallsupport:N or smallsupport:N:mid"
                )
            try:
                N = int(parts[1])
            except ValueError:
                raise ParameterError(f"bad N in z strategy {strat!r}") from None
            mid = parts[2] if len(parts) == 3 else "hermite"
            if mid == "antisym":
                mid = "antisymmetric-trig"
            return zgen.z_small_support(g, self.b, N, n=n, mid=mid)
        if strat.startswith("file:"):
            return zgen.ZFunction.from_file(strat[5:])
        raise ParameterError(
            f"unknown z strategy {strat!r}; use standard, minpoly, "
            "smallsupport:N[:mid], or file:path"
        )


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _tsv(xs, ys, header):
    lines = ["x\tvalue"] if header else []
    lines += [f"{x:.17g}\t{y:.17g}" for x, y in zip(xs, ys)]
    return "\n".join(lines) + "\n"


def _config_from_args(args):
    if args.grid < 64:
        raise ParameterError(f"grid must be at least 64, got {args.grid}")
    return RunConfig(
        window_spec=args.window,
        b_text=args.b,
        b=parse_b(args.b),
        n=args.n,
        z_strategy=args.z,
        grid=args.grid,
        outdir=args.out,
        header=getattr(args, "header", False),
    )


def cmd_build(args):
    cfg = _config_from_args(args)
    g = cfg.resolve_window()
    z = cfg.resolve_z(g)
    h = dualwin.build_dual(g, z, cfg.b)
    os.makedirs(cfg.outdir, exist_ok=True)

    hi = h.kmax + 1.0
    xs_h = np.linspace(-hi, hi, cfg.grid + 1)
    _write_text(os.path.join(cfg.outdir, "h.tsv"), h.to_tsv(xs_h, header=cfg.header))
    xs_z = np.linspace(0.0, 1.0, cfg.grid + 1)
    _write_text(os.path.join(cfg.outdir, "z.tsv"), _tsv(xs_z, z(xs_z), cfg.header))
    support_lines = [f"{lo:.17g}\t{hi_:.17g}" for lo, hi_ in h.support]
    _write_text(os.path.join(cfg.outdir, "support.txt"), "\n".join(support_lines) + "\n")
    meta = [
        f"window = {cfg.window_spec}",
        f"b = {cfg.b_text}",
        f"b.float = {cfg.b:.17g}",
        f"kmax = {h.kmax}",
        f"n = {cfg.order(g)}",
        f"strategy = {cfg.z_strategy}",
        f"grid = {cfg.grid}",
        f"center = {h.center_value:.17g}",
    ]
    _write_text(os.path.join(cfg.outdir, "meta.txt"), "\n".join(meta) + "\n")
    return 0


def cmd_verify(args):
    cfg = _config_from_args(args)
    g = cfg.resolve_window()
    z = cfg.resolve_z(g)
    n = cfg.order(g)
    report = verify.full_report(
        g, z, cfg.b, n, grid=cfg.grid, expect_symmetric=args.expect_symmetric
    )
    os.makedirs(cfg.outdir, exist_ok=True)
    path = os.path.join(cfg.outdir, "report.txt")
    _write_text(path, report.to_text())
    if report.passed:
        print(f"all checks passed (report: {path})")
        return 0
    print(f"FAILED checks: {', '.join(report.failing_checks())} (report: {path})")
    return 1


def cmd_reconstruct(args):
    cfg = _config_from_args(args)
    g = cfg.resolve_window()
    z = cfg.resolve_z(g)
    h = dualwin.build_dual(g, z, cfg.b)
    signal = verify.builtin_signal(args.signal)
    params = verify.GaborGridParams(
        b=cfg.b, mod_truncation=args.mmax, shift_truncation=args.kshift
    )
    ms = [m for m in (8, 16, 32, 64) if m <= args.mmax] or [args.mmax]
    rows = verify.reconstruct_sweep(signal, g, h, params, m_values=ms)
    print("M\trel_l2_error")
    for M, err in rows:
        print(f"{M}\t{err:.17g}")
    return 0


def cmd_windows(args):
    if args.action != "list":
        raise ParameterError(f"unknown windows action {args.action!r}; try 'list'")
    for name in window.builtin_names():
        g = window.builtin(name)
        print(f"{name}\tn={g.smoothness}\t{window.builtin_description(name)}")
    return 0


def _add_common(p):
    p.add_argument("--window", required=True, help="builtin name or window file path")
    p.add_argument("--b", required=True, help="modulation step: decimal, p/q, or p/(q*pi)")
    p.add_argument("--n", type=int, default=None, help="smoothness order (default: window's)")
    p.add_argument(
        "--z",
        default="standard",
        help="z strategy: standard | minpoly | smallsupport:N[:mid] | file:path",
    )
    p.add_argument("--grid", type=int, default=1024, help="sampling/check grid size")
    p.add_argument("--out", default=".", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gabordual",
        description="Construct and verify compactly supported dual Gabor windows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a dual window and write TSV samples")
    _add_common(p_build)
    p_build.add_argument("--header", action="store_true", help="add a TSV header row")
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="run the full verification report")
    _add_common(p_verify)
    p_verify.add_argument(
        "--expect-symmetric",
        action="store_true",
        help="also gate the symmetry defect (even window, antisymmetric z)",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_rec = sub.add_parser("reconstruct", help="Gabor reconstruction error table")
    _add_common(p_rec)
    p_rec.add_argument("--signal", default="gaussian", help="gaussian | bump | chirp")
    p_rec.add_argument("--mmax", type=int, default=64, help="largest modulation truncation")
    p_rec.add_argument("--kshift", type=int, default=6, help="shift truncation K")
    p_rec.set_defaults(func=cmd_reconstruct)

    p_win = sub.add_parser("windows", help="inspect builtin windows")
    p_win.add_argument("action", nargs="?", default="list")
    p_win.set_defaults(func=cmd_windows)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except GaborDualError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
