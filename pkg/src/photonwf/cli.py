"""Command-line entry point: ``photonwf <command> [options]``.

All physics lives in the library; this module only parses flags, loads
configs, calls library functions and writes CSV / text reports.

Exit codes: 0 success, 2 usage or config error, 3 tolerance violation.
Errors are reported on stderr as a single ``ERROR kind=... key=value ...`` line.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import algebra, fieldgrid, ladder, modes, polarization, symmetry, zb
from .io import ConfigError, RunConfig, load_config

DEFAULT_SEED = 20240607
DEFAULT_TOLERANCES = {
    "identity": 1e-12,
    "symmetry": 1e-12,
    "j0_drift": 1e-12,
}


class CliError(Exception):
    def __init__(self, kind: str, code: int, **fields):
        super().__init__(kind)
        self.kind = kind
        self.code = code
        self.fields = fields

    def line(self) -> str:
        parts = [f"ERROR kind={self.kind}"]
        for key, val in self.fields.items():
            text = str(val).replace("\n", " ")
            parts.append(f'{key}="{text}"' if " " in text else f"{key}={text}")
        return " ".join(parts)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _tolerances(args, cfg: RunConfig | None = None) -> dict[str, float]:
    tols = dict(DEFAULT_TOLERANCES)
    if cfg is not None:
        tols.update(cfg.tolerances)
    for item in args.tol or []:
        name, sep, value = item.partition("=")
        try:
            val = float(value)
        except ValueError:
            val = -1.0
        if not sep or not name or val < 0:
            raise CliError("usage", 2, message=f"--tol expects name=value with value >= 0, got {item!r}")
        tols[name] = val
    return tols


def _check(name: str, value: float, tols: dict[str, float]) -> None:
    if not value <= tols[name]:
        raise CliError("tolerance", 3, name=name, value=f"{value:.3e}", limit=f"{tols[name]:.3e}")


def _config(args, need_grid: bool = False) -> RunConfig:
    if not args.config:
        raise CliError("usage", 2, message=f"{args.command} needs --config")
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        raise CliError("config", 2, message=str(exc)) from None
    if need_grid and cfg.grid is None:
        raise CliError("config", 2, message="config needs a [grid] section")
    return cfg


def _seed(args, cfg: RunConfig | None = None) -> int:
    if args.seed is not None:
        return args.seed
    if cfg is not None and cfg.seed is not None:
        return cfg.seed
    return DEFAULT_SEED


def _write_csv(path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n")


# -- commands ----------------------------------------------------------------


def cmd_identities(args, out) -> None:
    tols = _tolerances(args)
    rng = np.random.default_rng(_seed(args))
    results: list[tuple[str, float]] = []
    results += [(f"algebra.{k}", v) for k, v in algebra.identity_residuals().items()]
    fac = max(algebra.factorization_residual(w, k) for w, k in zip(rng.normal(size=100), rng.normal(size=(100, 3))))
    results.append(("algebra.factorization", fac))
    ks = rng.normal(size=(1000, 3))
    ks = np.concatenate([ks, [[0, 0, 1.0], [0, 0, -2.0]]])
    results += [(f"polarization.{k}", v) for k, v in polarization.triad_residuals(ks).items()]
    spin = {}
    for k in ks[:200]:
        for name, val in modes.spinor_residuals(k).items():
            spin[name] = max(spin.get(name, 0.0), val)
    results += [(f"modes.{k}", v) for k, v in sorted(spin.items())]
    rt = {}
    for k in ks[:200]:
        for name, val in zb.rt_table_residuals(k).items():
            rt[name] = max(rt.get(name, 0.0), val)
    results.append(("zb.rt_table", max(rt.values())))

    failed = []
    for name, val in results:
        ok = val <= tols["identity"]
        print(f"{'PASS' if ok else 'FAIL'} {name} {val:.3e}", file=out)
        if not ok:
            failed.append(name)
    if failed:
        raise CliError("tolerance", 3, name="identity", failed=",".join(failed), limit=f"{tols['identity']:.3e}")


def cmd_polarization(args, out) -> None:
    try:
        k = np.array([float(v) for v in args.k.split(",")])
        tri = polarization.polarization_triad(k)
    except (ValueError, polarization.DomainError) as exc:
        raise CliError("domain", 2, message=str(exc)) from None
    for lam in polarization.HELICITIES:
        v = tri[lam]
        comps = " ".join(f"{z.real:+.15f}{z.imag:+.15f}i" for z in v)
        print(f"eps({lam:+d}) = {comps}", file=out)


def cmd_synth(args, out) -> None:
    cfg = _config(args, need_grid=True)
    if not args.out:
        raise CliError("usage", 2, message="synth needs --out")
    try:
        field = modes.synthesize_field(cfg.amplitudes, cfg.grid, args.time, variant=args.variant)
    except ValueError as exc:
        raise CliError("config", 2, message=str(exc)) from None
    if args.out.endswith(".csv"):
        fieldgrid.write_csv(field, args.out)
    else:
        fieldgrid.write_binary(field, args.out)
    print(f"wrote {args.out} dims={list(cfg.grid.dims)} t={_fmt(args.time)}", file=out)


def cmd_evolve(args, out) -> None:
    cfg = _config(args, need_grid=True)
    tols = _tolerances(args, cfg)
    times = cfg.times.grid(endpoint=True)
    if args.random_band:
        rng = np.random.default_rng(_seed(args, cfg))
        field = fieldgrid.random_physical_field(cfg.grid, args.random_band, rng)
    else:
        try:
            field = modes.synthesize_field(cfg.amplitudes, cfg.grid, times[0])
        except ValueError as exc:
            raise CliError("config", 2, message=str(exc)) from None
    rows = []
    current = field
    for i, t in enumerate(times):
        if i > 0:
            dt = t - times[i - 1]
            if args.method == "spectral":
                current = fieldgrid.evolve_spectral(field, t - times[0], 1)
            else:
                try:
                    current = fieldgrid.evolve_curl_reference(current, dt / args.substeps, args.substeps)
                except ValueError as exc:
                    raise CliError("domain", 2, message=str(exc)) from None
        obs = fieldgrid.observables(current)
        rows.append([t, obs.J0, *obs.J, obs.scalar_integral])
    if args.out:
        _write_csv(args.out, ["t", "J0", "Jx", "Jy", "Jz", "scalar"], rows)
    j0 = np.array([r[1] for r in rows])
    drift = float(np.max(np.abs(j0 - j0[0])) / max(abs(j0[0]), 1e-300))
    print(f"method={args.method} samples={len(rows)} J0={_fmt(j0[0])} j0_drift={drift:.3e}", file=out)
    _check("j0_drift", drift, tols)


def cmd_symmetry(args, out) -> None:
    cfg = _config(args, need_grid=True)
    tols = _tolerances(args, cfg)
    amps, spec = cfg.amplitudes, cfg.grid
    name = args.transform
    worst = 0.0
    for t in (cfg.times.t0, cfg.times.t1):
        try:
            if name == "parity":
                lhs = modes.synthesize_field(symmetry.parity(amps), spec, t)
                rhs = symmetry.parity(modes.synthesize_field(amps, spec, t))
            elif name == "time_reversal":
                lhs = modes.synthesize_field(symmetry.time_reversal(amps), spec, -t)
                rhs = symmetry.time_reversal(modes.synthesize_field(amps, spec, t))
            elif name == "dual":
                lhs = modes.synthesize_field(symmetry.dual(amps), spec, t)
                rhs = symmetry.dual(modes.synthesize_field(amps, spec, t))
            else:
                lhs = modes.synthesize_field(symmetry.gauge_phase(amps, args.theta), spec, t)
                rhs = symmetry.gauge_phase(modes.synthesize_field(amps, spec, t), args.theta)
        except ValueError as exc:
            raise CliError("config", 2, message=str(exc)) from None
        res = float(np.max(np.abs(lhs.data - rhs.data)))
        worst = max(worst, res)
        print(f"transform={name} t={_fmt(t)} commuting_residual={res:.3e}", file=out)
    _check("symmetry", worst, tols)


def cmd_zb(args, out) -> None:
    cfg = _config(args)
    times = cfg.times.grid(endpoint=False)
    series = zb.momentum_series(cfg.amplitudes, times, formalism=args.formalism, breakdown=args.breakdown)
    if args.out:
        header = ["t", "Jx", "Jy", "Jz"]
        cols = [series.times[:, None], series.J]
        if series.breakdown:
            for name, arr in series.breakdown.items():
                header += [f"{name}_x", f"{name}_y", f"{name}_z"]
                cols.append(arr)
        _write_csv(args.out, header, np.hstack(cols))
    try:
        summary = zb.zb_extract(series)
    except ValueError as exc:
        raise CliError("config", 2, message=str(exc)) from None
    vec = lambda v: "[" + ", ".join(f"{x:.6g}" for x in v) + "]"
    print(f"formalism={args.formalism} samples={len(times)}", file=out)
    print(f"constant = {vec(summary.constant)}", file=out)
    print(f"zb_amplitude = {vec(summary.zb_amplitude)}", file=out)
    print(f"frequency = {summary.frequency:.6g} (bin width {summary.bin_width:.6g})", file=out)


def cmd_ladder(args, out) -> None:
    if args.derive == "commutators":
        n = (1, 0, 0)
        a0 = ladder.LadderPoly.of(ladder.a(n, 0))
        checks = [
            ("[a(k,+1), ad(k,+1)]", ladder.commutator(ladder.a(n, 1), ladder.ad(n, 1))),
            ("[a(k,-1), ad(k,-1)]", ladder.commutator(ladder.a(n, -1), ladder.ad(n, -1))),
            ("[a(k,0), ad(k,0)]", ladder.commutator(ladder.a(n, 0), ladder.ad(n, 0))),
            ("[b(k,+1), bd(k,+1)]", ladder.commutator(ladder.b(n, 1), ladder.bd(n, 1))),
            ("[a(k,+1), bd(k,+1)]", ladder.commutator(ladder.a(n, 1), ladder.bd(n, 1))),
            ("[c(k,0), cd(k,0)]", ladder.commutator(ladder.c(n, 0), ladder.cd(n, 0))),
            ("[c(k,3), cd(k,3)]", ladder.commutator(ladder.c(n, 3), ladder.cd(n, 3))),
        ]
        for lam, txt in ((1, "+1"), (-1, "-1"), (0, "0")):
            x = ladder.substitute_potential_ops(ladder.LadderPoly.of(ladder.a(n, lam)))
            checks.append((f"[a(k,{txt}), ad(k,{txt})] via c", ladder.commutator(x, x.adjoint())))
        checks.append(("a(k,0) via c", ladder.substitute_potential_ops(a0)))
        for label, poly in checks:
            print(f"{label} = {ladder.format_poly(poly, with_modes=True)}", file=out)
        return
    if args.config:
        cfg = _config(args)
        keys = sorted(cfg.amplitudes.entries)
        box = cfg.amplitudes.box
    else:
        keys = [modes.ModeKey.make((1, 0, 0), 1)]
        box = (2 * np.pi,) * 3
    if not keys:
        raise CliError("config", 2, message="no modes to expand")
    poly = ladder.normal_order(ladder.momentum_bilinear(keys, args.component, args.time, box))
    omegas = {round(float(np.linalg.norm(modes.wavevector(k.n, box))), 12) for k in keys}
    factor = omegas.pop() if len(omegas) == 1 and args.component == 0 else None
    print(ladder.format_poly(poly, factor=factor), file=out)


HANDLERS = {
    "identities": cmd_identities,
    "polarization": cmd_polarization,
    "synth": cmd_synth,
    "evolve": cmd_evolve,
    "symmetry": cmd_symmetry,
    "zb": cmd_zb,
    "ladder": cmd_ladder,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--out", help="output path")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a named tolerance")
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default {DEFAULT_SEED})")

    parser = argparse.ArgumentParser(prog="photonwf", description="Photon wave function toolkit")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    sub.add_parser("identities", parents=[common], help="run the algebraic identity suites")
    p = sub.add_parser("polarization", parents=[common], help="print the polarization triad of a wavevector")
    p.add_argument("--k", required=True, help="wavevector as kx,ky,kz")
    p = sub.add_parser("synth", parents=[common], help="write a field snapshot (.csv or binary)")
    p.add_argument("--time", type=float, default=0.0)
    p.add_argument("--variant", choices=modes.VARIANTS, default="dual")
    p = sub.add_parser("evolve", parents=[common], help="write an observable time series")
    p.add_argument("--method", choices=("spectral", "curl"), default="spectral")
    p.add_argument("--substeps", type=int, default=1, help="curl-reference steps per output sample")
    p.add_argument("--random-band", type=int, default=0, help="start from a seeded random physical field with |n_i| < band instead of the config modes")
    p = sub.add_parser("symmetry", parents=[common], help="commuting-diagram residual of a transform")
    p.add_argument("--transform", choices=("parity", "time_reversal", "dual", "gauge"), default="parity")
    p.add_argument("--theta", type=float, default=0.7)
    p = sub.add_parser("zb", parents=[common], help="momentum series and oscillation summary")
    p.add_argument("--formalism", choices=("dual", "traditional"), default="dual")
    p.add_argument("--breakdown", action="store_true", help="add per-term-group columns")
    p = sub.add_parser("ladder", parents=[common], help="symbolic ladder-operator derivations")
    p.add_argument("--derive", choices=("momentum", "commutators"), default="momentum")
    p.add_argument("--component", type=int, choices=(0, 1, 2, 3), default=0)
    p.add_argument("--time", type=float, default=0.0)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code:
            print(CliError("usage", 2, message="invalid command line").line(), file=sys.stderr)
            return 2
        return 0
    try:
        HANDLERS[args.command](args, out)
    except CliError as exc:
        print(exc.line(), file=sys.stderr)
        return exc.code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
