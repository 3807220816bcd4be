"""Command line driver.

Exit status: 0 success, 2 usage error, 3 insufficient precision,
4 failed mathematical invariant.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import analysis
from .cache import SCHEMA_VERSION, BasisCache, default_cache_dir
from .formal import (
    GroupElement, default_depth, fricke_involution_residuals, gamma0_symmetry_residuals,
    involution_solution_space, solution_prec,
)
from .jacobi import (
    CUSP, HOLOMORPHIC, InsufficientPrecisionError, SpaceKind, WindowError, default_prec, jacobi_basis,
    minimal_prec,
)
from .operators import PreconditionError, gritsenko_fj, level_raise, theta_compatibility_residuals, v_input_prec

EXIT_OK, EXIT_USAGE, EXIT_PREC, EXIT_INVARIANT = 0, 2, 3, 4


class UsageError(Exception):
    pass


class InvariantFailure(Exception):
    def __init__(self, message: str, report: "Report"):
        super().__init__(message)
        self.report = report


@dataclass
class RunConfig:
    fmt: str = "tsv"
    cache_dir: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.fmt not in ("tsv", "json"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.threads < 1:
            raise UsageError("--threads must be positive")


class Report:
    """Rows for TSV plus a dict for JSON."""

    def __init__(self, command: str, columns: list[str] | None = None):
        self.data: dict = {"schemaVersion": SCHEMA_VERSION, "command": command}
        self.columns = columns
        self.rows: list[list] = []
        self.notes: list[str] = []
        self.scalar = None

    def render(self, fmt: str) -> str:
        if fmt == "json":
            d = dict(self.data)
            if self.columns is not None:
                d["columns"] = self.columns
                d["rows"] = [[_jsonable(v) for v in row] for row in self.rows]
            if self.notes:
                d["notes"] = self.notes
            return json.dumps(d, sort_keys=True, default=_jsonable)
        if self.scalar is not None and self.columns is None:
            return str(self.scalar)
        lines = []
        if self.columns is not None:
            lines.append("\t".join(self.columns))
            lines.extend("\t".join(_cell(v) for v in row) for row in self.rows)
        lines.extend("# " + n for n in self.notes)
        return "\n".join(lines)


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    try:
        return float(v)
    except (TypeError, ValueError):
        return str(v)


# --- argument helpers ---------------------------------------------------------------

def _eps(text: str) -> int:
    t = text.strip()
    if t in ("+1", "1", "+"):
        return 1
    if t in ("-1", "-"):
        return -1
    raise argparse.ArgumentTypeError(f"eps must be +1 or -1, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _kind_arg(text: str) -> SpaceKind:
    try:
        return SpaceKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _sigma(text: str) -> tuple[int, int, int, int]:
    parts = text.replace(";", ",").split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("sigma must be a,b,c,d")
    return tuple(int(p) for p in parts)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="formal-jacobi", description="Jacobi forms, formal Fourier-Jacobi series and paramodular dimensions.")
    p.add_argument("--format", dest="fmt", choices=("tsv", "json"), default="tsv")
    p.add_argument("--cache-dir", default=None, help="basis cache directory (default: $FORMAL_JACOBI_CACHE_DIR)")
    p.add_argument("--threads", type=int, default=1)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("jdim", help="dimension of a Jacobi form space")
    s.add_argument("k", type=int)
    s.add_argument("m", type=int)
    s.add_argument("--kind", type=_kind_arg, default=HOLOMORPHIC)
    s.add_argument("--prec", type=int)

    s = sub.add_parser("mdim", help="dimension of the involution solution space at depth d")
    s.add_argument("k", type=int)
    s.add_argument("N", type=int)
    s.add_argument("eps", type=_eps)
    s.add_argument("--d", type=int)
    s.add_argument("--prec", type=int)

    s = sub.add_parser("table", help="dimensions for d = 0..dmax")
    s.add_argument("k", type=int)
    s.add_argument("N", type=int)
    s.add_argument("eps", type=_eps)
    s.add_argument("--dmax", type=int, required=True)
    s.add_argument("--prec", type=int)

    s = sub.add_parser("grit", help="Gritsenko Fourier-Jacobi series of the cusp basis")
    s.add_argument("k", type=int)
    s.add_argument("N", type=int)
    s.add_argument("--d", type=int, default=4)
    s.add_argument("--prec", type=int, help="output truncation order (default d + 1)")

    s = sub.add_parser("check", help="residual reports")
    csub = s.add_subparsers(dest="check", parser_class=_Parser)
    csub.required = True
    c = csub.add_parser("involution")
    c.add_argument("k", type=int)
    c.add_argument("N", type=int)
    c.add_argument("--eps", type=_eps)
    c.add_argument("--d", type=int, default=4)
    c.add_argument("--prec", type=int)
    c = csub.add_parser("gamma0")
    c.add_argument("k", type=int)
    c.add_argument("N", type=int)
    c.add_argument("--sigma", type=_sigma, action="append")
    c.add_argument("--d", type=int, default=4)
    c.add_argument("--prec", type=int)
    c = csub.add_parser("aoki")
    c.add_argument("k", type=int)
    c.add_argument("m", type=int)
    c.add_argument("--kind", type=_kind_arg, default=HOLOMORPHIC)
    c.add_argument("--tmax", type=int, default=50)
    c = csub.add_parser("heckebound")
    c.add_argument("k", type=int)
    c.add_argument("m", type=int)
    c.add_argument("--slack", type=float, default=1.05)

    s = sub.add_parser("raise", help="level raising of Gritsenko lifts")
    s.add_argument("variant", choices=("eta", "theta", "thetaprime"))
    s.add_argument("k", type=int)
    s.add_argument("N", type=int)
    s.add_argument("ell", type=int)
    s.add_argument("--d", type=int, default=4)
    s.add_argument("--prec", type=int, help="truncation order of the lifted series (default d + 1)")

    s = sub.add_parser("specialize", help="restriction of a Gritsenko lift part to z = x tau + y")
    s.add_argument("k", type=int)
    s.add_argument("N", type=int)
    s.add_argument("--x", type=_fraction, required=True)
    s.add_argument("--y", type=_fraction, default=Fraction(0))
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--vmax", type=_fraction, required=True)
    s.add_argument("--element", type=int, default=0, help="index into the cusp basis")
    return p


# --- commands -------------------------------------------------------------------------

class Context:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        root = cfg.cache_dir or default_cache_dir()
        self.cache = BasisCache(root) if root else None

    def basis(self, k, m, kind=HOLOMORPHIC, prec=None):
        if prec is None:
            prec = default_prec(k, m, kind)
        if self.cache is None:
            return jacobi_basis(k, m, kind, prec)
        return self.cache.basis(k, m, kind, prec)

    def prefetch(self, jobs):
        # bases are computed in worker threads, results consumed in job order
        if self.cfg.threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(self.cfg.threads) as ex:
                list(ex.map(lambda a: self.basis(*a), jobs))


def _need_nonneg(**vals):
    for name, v in vals.items():
        if v is not None and v < 0:
            raise UsageError(f"{name} must be non-negative")


def cmd_jdim(ctx: Context, a) -> Report:
    _need_nonneg(m=a.m)
    B = ctx.basis(a.k, a.m, a.kind, a.prec)
    rep = Report("jdim")
    rep.scalar = len(B)
    rep.data.update(k=a.k, m=a.m, kind=str(a.kind), prec=a.prec or default_prec(a.k, a.m, a.kind), dim=len(B))
    return rep


def _mdim(ctx: Context, k, N, eps, d, prec):
    prec = prec or solution_prec(k, N, d)
    ctx.prefetch([(k, N * m, HOLOMORPHIC, prec) for m in range(d + 1)])
    return involution_solution_space(k, N, eps, d, prec, basis_provider=ctx.basis)


def cmd_mdim(ctx: Context, a) -> Report:
    if a.N < 1:
        raise UsageError("N must be positive")
    d = default_depth(a.k, a.N) if a.d is None else a.d
    _need_nonneg(d=d)
    sp = _mdim(ctx, a.k, a.N, a.eps, d, a.prec)
    rep = Report("mdim")
    rep.scalar = sp.dimension
    rep.data.update(k=a.k, N=a.N, eps=a.eps, d=d, prec=sp.prec, dim=sp.dimension)
    return rep


def cmd_table(ctx: Context, a) -> Report:
    if a.N < 1:
        raise UsageError("N must be positive")
    _need_nonneg(dmax=a.dmax)
    start = (a.N * a.k) // 6
    rep = Report("table", ["d", "dim", "monotone"])
    rep.data.update(k=a.k, N=a.N, eps=a.eps, monotoneFrom=start)
    prev, ok = None, True
    for d in range(a.dmax + 1):
        prec = a.prec or solution_prec(a.k, a.N, a.dmax)
        dim = _mdim(ctx, a.k, a.N, a.eps, d, prec).dimension
        if d < start:
            flag = "na"
        else:
            flag = d == start or dim <= prev
            ok = ok and flag
        rep.rows.append([d, dim, flag])
        prev = dim
    if not ok:
        raise InvariantFailure("dimension increased beyond floor(Nk/6)", rep)
    return rep


def _lifts(ctx: Context, k, N, d, prec=None):
    if N < 1:
        raise UsageError("N must be positive")
    if d < 1:
        raise UsageError("--d must be at least 1")
    out_prec = prec or d + 1
    in_prec = max(v_input_prec(out_prec, d), minimal_prec(k, N, CUSP))
    return [gritsenko_fj(phi, d, out_prec) for phi in ctx.basis(k, N, CUSP, in_prec)]


def _coeff_rows(rep: Report, label, f):
    for m, part in enumerate(f.parts):
        for (n, r), c in sorted(part.items()):
            rep.rows.append([label, m, n, r, c])


def cmd_grit(ctx: Context, a) -> Report:
    lifts = _lifts(ctx, a.k, a.N, a.d, a.prec)
    eps = (-1) ** (a.k % 2)
    rep = Report("grit", ["element", "m", "n", "r", "c"])
    rep.data.update(k=a.k, N=a.N, d=a.d, eps=eps, elements=[])
    bad = False
    for i, f in enumerate(lifts):
        _coeff_rows(rep, i, f)
        inv = fricke_involution_residuals(f, eps)
        sym = [gamma0_symmetry_residuals(f, GroupElement(1, a.N, 0, 1, a.N)),
               gamma0_symmetry_residuals(f, GroupElement(1, 0, 0, -1, a.N))]
        bad = bad or bool(inv) or any(sym)
        rep.data["elements"].append({"prec": f.prec, "involutionResiduals": [[t.n, t.r, t.m, v] for t, v in inv],
                                     "gamma0Residuals": [len(s) for s in sym],
                                     "gamma0Skipped": [s.skipped for s in sym]})
        rep.notes.append(f"element {i}: involution residuals {len(inv)}, gamma0 residuals "
                         f"{[len(s) for s in sym]} (skipped {[s.skipped for s in sym]})")
    if not lifts:
        rep.notes.append(f"J_{{{a.k},{a.N}}} has no cusp forms")
    if bad:
        raise InvariantFailure("Gritsenko lift violates a symmetry", rep)
    return rep


def cmd_check(ctx: Context, a) -> Report:
    return {"involution": _check_involution, "gamma0": _check_gamma0,
            "aoki": _check_order_inequality, "heckebound": _check_hb}[a.check](ctx, a)


def _check_involution(ctx, a) -> Report:
    eps = (-1) ** (a.k % 2) if a.eps is None else a.eps
    rep = Report("check involution", ["element", "n", "r", "m", "residual"])
    rep.data.update(k=a.k, N=a.N, eps=eps, d=a.d)
    for i, f in enumerate(_lifts(ctx, a.k, a.N, a.d, a.prec)):
        for t, v in fricke_involution_residuals(f, eps):
            rep.rows.append([i, t.n, t.r, t.m, v])
    rep.notes.append(f"{len(rep.rows)} residuals")
    if rep.rows:
        raise InvariantFailure("involution residuals present", rep)
    return rep


def _check_gamma0(ctx, a) -> Report:
    sigmas = a.sigma or [(1, a.N, 0, 1), (1, 0, 0, -1)]
    try:
        gs = [GroupElement(*s, a.N) for s in sigmas]
    except ValueError as exc:
        raise UsageError(str(exc))
    rep = Report("check gamma0", ["element", "sigma", "n", "r", "m", "residual"])
    rep.data.update(k=a.k, N=a.N, d=a.d, skipped=[], checked=[])
    for i, f in enumerate(_lifts(ctx, a.k, a.N, a.d, a.prec)):
        for s, g in zip(sigmas, gs):
            res = gamma0_symmetry_residuals(f, g)
            rep.data["skipped"].append(res.skipped)
            rep.data["checked"].append(res.checked)
            for t, v in res:
                rep.rows.append([i, ",".join(map(str, s)), t.n, t.r, t.m, v])
    rep.notes.append(f"{len(rep.rows)} residuals, {sum(rep.data['skipped'])} pairs outside the window")
    if rep.rows:
        raise InvariantFailure("gamma0 residuals present", rep)
    return rep


def _check_order_inequality(ctx, a) -> Report:
    if a.k % 2:
        raise UsageError("the inequality is stated for even weight only")
    rep = Report("check aoki", ["element", "mu", "lhs", "rhs", "t", "pass"])
    rep.data.update(k=a.k, m=a.m, kind=str(a.kind), tmax=a.tmax)
    ok = True
    for i, phi in enumerate(ctx.basis(a.k, a.m, a.kind)):
        r = analysis.aoki_inequality_check(phi, a.tmax)
        ok = ok and r.passed
        rep.rows.append([i, r.mu, r.lhs, r.rhs, ",".join(map(str, r.ts)) or "-", r.passed])
    if not ok:
        raise InvariantFailure("inequality failed", rep)
    return rep


def _check_hb(ctx, a) -> Report:
    rep = Report("check heckebound", ["element", "HB", "violations", "pass"])
    rep.data.update(k=a.k, m=a.m, slack=a.slack)
    ok = True
    for i, phi in enumerate(ctx.basis(a.k, a.m, CUSP)):
        hb = analysis.hecke_bound_estimate(phi)
        v = analysis.coefficient_bound_violations(phi, hb, a.slack)
        ok = ok and not v
        rep.rows.append([i, hb, len(v), not v])
    if not ok:
        raise InvariantFailure("coefficient bound violated", rep)
    return rep


def cmd_raise(ctx: Context, a) -> Report:
    variant = {"thetaprime": "theta_prime"}.get(a.variant, a.variant)
    if a.ell < 1:
        raise UsageError("ell must be positive")
    eps = (-1) ** (a.k % 2)
    rep = Report("raise", ["element", "m", "n", "r", "c"])
    rep.data.update(variant=a.variant, k=a.k, N=a.N, ell=a.ell, d=a.d, compatibility=[])
    ok = True
    for i, f in enumerate(_lifts(ctx, a.k, a.N, a.d, a.prec)):
        g = level_raise(f, a.ell, variant)
        _coeff_rows(rep, i, g)
        if variant == "eta":
            res = fricke_involution_residuals(g, eps) if g.depth < g.prec else []
            label = "involution at level N ell^2"
        else:
            try:
                res = theta_compatibility_residuals(f, a.ell, eps)
            except PreconditionError as exc:
                raise InvariantFailure(f"precondition: {exc}", rep)
            label = "theta compatibility"
        ok = ok and not res
        rep.data["compatibility"].append(len(res))
        rep.notes.append(f"element {i}: output level {g.level}, depth {g.depth}, prec {g.prec}; "
                         f"{label} residuals {len(res)}")
    if not ok:
        raise InvariantFailure("level raising check failed", rep)
    return rep


def cmd_specialize(ctx: Context, a) -> Report:
    if a.m < 1:
        raise UsageError("--m must be positive")
    try:
        s = analysis.SpecializationDatum(a.x, a.y, a.N)
    except ValueError as exc:
        raise UsageError(str(exc))
    # largest n in any Lambda set is below v + N m x^2 + 2|x| sqrt(N m v)
    Nm = a.N * a.m
    need = int(a.vmax + Nm * a.x * a.x + 2 * abs(a.x) * (Nm * a.vmax) ** 0.5) + 2
    lifts = _lifts(ctx, a.k, a.N, a.m, need)
    if not lifts:
        raise UsageError(f"J_{{{a.k},{a.N}}} has no cusp forms")
    if not 0 <= a.element < len(lifts):
        raise UsageError(f"--element must be in 0..{len(lifts) - 1}")
    sp = analysis.specialize(lifts[a.element], s, a.m, a.vmax)
    rep = Report("specialize", ["v", "re", "im", "lambda"])
    rep.data.update(k=a.k, N=a.N, x=a.x, y=a.y, m=a.m, vmax=a.vmax, D=s.D, lambdaBoundOk=sp.lambda_bound_ok())
    for v in sorted(sp.lambda_sizes):
        c = sp.coeffs.get(v, 0j)
        rep.rows.append([v, float(c.real), float(c.imag), sp.lambda_sizes[v]])
    if not sp.lambda_bound_ok():
        raise InvariantFailure("Lambda-set size bound violated", rep)
    return rep


COMMANDS = {"jdim": cmd_jdim, "mdim": cmd_mdim, "table": cmd_table, "grit": cmd_grit,
            "check": cmd_check, "raise": cmd_raise, "specialize": cmd_specialize}


def cmd_dispatch(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        a = build_parser().parse_args(argv)
        cfg = RunConfig(a.fmt, a.cache_dir, a.threads)
        rep = COMMANDS[a.command](Context(cfg), a)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except (InsufficientPrecisionError, WindowError) as exc:
        print(f"insufficient precision: {exc}", file=err)
        return EXIT_PREC
    except InvariantFailure as exc:
        print(exc.report.render(a.fmt), file=out)
        print(f"invariant failed: {exc}", file=err)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    print(rep.render(cfg.fmt), file=out)
    return EXIT_OK


def main() -> None:
    sys.exit(cmd_dispatch())


if __name__ == "__main__":
    main()
