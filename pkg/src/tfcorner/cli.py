"""Command-line driver: configuration parsing, orchestration of solves and
sweeps, and emission of CSV/JSON/SVG artifacts.

Subcommands: painleve | trap | ground | approx | verify | sweep.  A flat
key=value config file can seed any flag (flags override the file; unknown
keys are rejected).  Exit codes: 0 success, 1 solver failure, 2 configuration
error.  Data artifacts (CSV/JSON) are byte-identical across reruns of the
same configuration; figures are rendered with matplotlib next to the
delimited output they came from.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import gpsolve, layers, painleve, verify
from . import trap as trapmod
from .errors import ParameterError, SolverError, StagnationError, TopologyError, TruncationError


class CliConfigError(Exception):
    pass


_TRAP_KINDS = ("harmonic", "gaussian", "table")


def _build_trap(args) -> trapmod.Trap:
    kind = args.trap
    if kind == "harmonic":
        return trapmod.Trap.harmonic(args.aniso)
    if kind == "gaussian":
        return trapmod.Trap.gaussian_bump(args.bump_a, args.bump_b)
    if kind == "table":
        if not args.table_file:
            raise CliConfigError("trap kind 'table' requires --table-file")
        try:
            data = np.loadtxt(args.table_file, delimiter=",", skiprows=1, ndmin=2)
            return trapmod.Trap.radial_table(data[:, 0], data[:, 1])
        except (OSError, IndexError, ValueError) as exc:
            raise CliConfigError(f"cannot build table trap: {exc}") from exc
    raise CliConfigError(f"unknown trap kind: {kind!r} (choose from {_TRAP_KINDS})")


def _parse_eps(text) -> list[float]:
    try:
        eps = [float(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as exc:
        raise CliConfigError(f"cannot parse epsilon list: {text!r}") from exc
    if not eps or any(e <= 0 for e in eps):
        raise CliConfigError("epsilon values must be strictly positive")
    return sorted(set(eps), reverse=True)


def _config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:8]


# -- plotting -------------------------------------------------------------------


def _mpl():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "tf-corner"
    import matplotlib.pyplot as plt

    return plt


def _read_csv_columns(path: Path):
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
        if not header:
            raise CliConfigError(f"empty CSV: {path}")
        names = header.split(",")
        try:
            data = np.loadtxt(f, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise CliConfigError(f"malformed CSV {path}: {exc}") from exc
    if data.size == 0 or data.shape[1] != len(names):
        raise CliConfigError(f"malformed CSV {path}: no data rows or ragged columns")
    return names, data


def _save_svg(fig, out_path: Path, sources: list[Path]) -> None:
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    comment = "".join(
        f"<!-- source: {s.name} sha256: {hashlib.sha256(s.read_bytes()).hexdigest()} -->\n"
        for s in sources
    )
    text = out_path.read_text(encoding="utf-8")
    head, sep, rest = text.partition("\n")
    out_path.write_text(head + sep + comment + rest, encoding="utf-8")


def emit_plots(csv_paths, outdir) -> list[Path]:
    """Render one SVG per CSV: two-column files become log-log rate plots
    with the fitted power law annotated, wider files become line overlays
    against the first column.  Each SVG embeds a provenance comment naming
    its source file and hash."""
    plt = _mpl()
    outdir = Path(outdir)
    written = []
    for path in map(Path, csv_paths):
        names, data = _read_csv_columns(path)
        fig, ax = plt.subplots(figsize=(5.0, 3.4), constrained_layout=True)
        if len(names) == 2:
            x, y = np.abs(data[:, 0]), np.abs(data[:, 1])
            ax.loglog(x, y, "o", ms=4)
            if len(x) >= 2 and np.all(x > 0) and np.all(y > 0):
                q, c = np.polyfit(np.log(x), np.log(y), 1)
                xs = np.array([x.min(), x.max()])
                ax.loglog(xs, np.exp(c) * xs**q, "-", lw=1,
                          label=f"fit: {np.exp(c):.3g} x^{q:.3f}")
                ax.legend(frameon=False, fontsize=8)
        else:
            for j in range(1, len(names)):
                ax.plot(data[:, 0], data[:, j], lw=1, label=names[j])
            ax.legend(frameon=False, fontsize=8)
        ax.set_xlabel(names[0])
        ax.set_title(path.stem)
        out_path = outdir / (path.stem + ".svg")
        _save_svg(fig, out_path, [path])
        plt.close(fig)
        written.append(out_path)
    return written


# -- subcommand bodies -----------------------------------------------------------


def _cmd_painleve(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sol = painleve.solve_full_line(args.p, args.xmin, args.xmax, args.n)
    csv_path = out / "hm.csv"
    painleve.write_profile_csv(sol, csv_path)
    emit_plots([csv_path], out)
    defect = painleve.hm_identity_defect(sol) if args.p == 2.0 else float("nan")
    print(f"painleve: p={args.p:g} [{args.xmin:g},{args.xmax:g}] n={args.n} "
          f"residual={sol.residual_sup:.2e} identity={defect:.2e} -> {csv_path}")
    return 0


def _cmd_trap(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trap = _build_trap(args)
    lam0 = trapmod.compute_lambda0(trap, args.tol)
    td = trapmod.boundary_and_beta(trap, lam0, args.n_theta)
    csv_path = out / "tfdata.csv"
    trapmod.write_tfdata_csv(td, csv_path)
    with open(out / "trap.json", "w", encoding="utf-8") as f:
        json.dump({"kind": trap.kind, "params": trap.params, "lambda0": lam0,
                   "ell0": td.ell0, "R": td.R, "radial": td.radial},
                  f, sort_keys=True, indent=1)
        f.write("\n")
    emit_plots([csv_path], out)
    print(f"trap: kind={trap.kind} lambda0={lam0:.10f} ell0={td.ell0:.8f} -> {csv_path}")
    return 0


def _cmd_ground(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trap = _build_trap(args)
    eps_list = _parse_eps(args.eps)
    csvs = []
    if args.mode == "radial":
        if not trap.is_radial:
            raise CliConfigError("radial mode needs a radial trap; use --mode 2d")
        hm = painleve.solve_full_line(2.0, args.xmin, args.xmax, max(args.n, 2000))
        states = gpsolve.solve_radial_ladder(trap, eps_list, n=args.n,
                                             r_max=args.rmax, profile=hm)
        for s in states:
            csv_path = out / f"ground_eps{s.epsilon:g}.csv"
            gpsolve.write_state(s, csv_path, out / f"ground_eps{s.epsilon:g}.json")
            csvs.append(csv_path)
            print(f"ground: eps={s.epsilon:g} lambda={s.lambda_eps:.10f} "
                  f"residual={s.residual:.2e} -> {csv_path}")
    else:
        for eps in eps_list:
            s = gpsolve.solve_2d(trap, eps, box_half=args.box, n=args.n2d)
            csv_path = out / f"ground2d_eps{eps:g}.csv"
            gpsolve.write_state(s, csv_path, out / f"ground2d_eps{eps:g}.json")
            print(f"ground: 2d eps={eps:g} lambda={s.lambda_eps:.10f} "
                  f"residual={s.residual:.2e} steps={s.iterations} "
                  f"-> {csv_path}")
    if csvs:
        emit_plots(csvs, out)
    return 0


def _cmd_approx(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trap = _build_trap(args)
    eps_list = _parse_eps(args.eps)
    hm = painleve.solve_full_line(args.p, args.xmin, args.xmax, args.n)
    lam0 = trapmod.compute_lambda0(trap, args.tol)
    td = trapmod.boundary_and_beta(trap, lam0, args.n_theta)
    csvs = []
    for eps in eps_list:
        ap = layers.build_u_ap(td, hm, eps)
        bundle = layers.predict(td, hm, eps)
        beta = float(td.beta[0]) if td.radial else float(np.min(td.beta))
        ts = np.linspace(-4.0 * ap.delta / beta, 8.0 * ap.delta / beta, 801)
        path = out / f"section_eps{eps:g}.csv"
        layers.write_section_csv(ap, bundle, 0.0, ts, path)
        csvs.append(path)
        print(f"approx: eps={eps:g} delta={ap.delta:.4f} L={ap.L:.3f} "
              f"c_minus2={bundle.c_minus2:.6f} c_log={bundle.c_log:.6f} -> {path}")
    emit_plots(csvs, out)
    return 0


def _cmd_verify(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trap = _build_trap(args)
    eps_list = _parse_eps(args.eps)
    hm = painleve.solve_full_line(2.0, args.xmin, args.xmax, max(args.n_hm, 2000))
    report, art = verify.build_report(trap, eps_list, n=args.n, n_theta=args.n_theta, hm=hm)
    painleve.write_profile_csv(hm, out / "hm.csv")
    csvs = [out / "hm.csv"]
    for s in art["states"]:
        csv_path = out / f"ground_eps{s.epsilon:g}.csv"
        gpsolve.write_state(s, csv_path, out / f"ground_eps{s.epsilon:g}.json")
        csvs.append(csv_path)
    with open(out / "lambda_rate.csv", "w", encoding="utf-8") as f:
        f.write("eps,lambda_gap\n")
        for e, g in art["rate_samples"]:
            f.write(f"{e:.17g},{g:.17g}\n")
    csvs.append(out / "lambda_rate.csv")
    with open(out / "energy_remainder.csv", "w", encoding="utf-8") as f:
        f.write("abs_ln_eps,remainder\n")
        for L, r in art["energy_remainders"]:
            f.write(f"{L:.17g},{r:.17g}\n")
    csvs.append(out / "energy_remainder.csv")
    report.to_json(out / "report.json")
    report.to_csv(out / "report.csv")
    emit_plots(csvs, out)
    n_pass = sum(c.passed for c in report.checks)
    print(f"verify: {n_pass}/{len(report.checks)} checks passed -> {out / 'report.json'}")
    return 0 if report.all_passed() else 1


def _sweep_job(payload: dict) -> dict:
    args = argparse.Namespace(**payload["args"])
    outdir = Path(payload["outdir"])
    outdir.mkdir(parents=True, exist_ok=True)
    trap = _build_trap(args)
    hm = painleve.solve_full_line(2.0, args.xmin, args.xmax, 2000)
    state = gpsolve.solve_radial(trap, payload["eps"], n=args.n, profile=hm)
    gpsolve.write_state(state, outdir / f"ground_eps{payload['eps']:g}.csv",
                        outdir / f"ground_eps{payload['eps']:g}.json")
    return {
        "eps": payload["eps"],
        "lambda_eps": state.lambda_eps,
        "residual": state.residual,
        "dir": str(outdir),
    }


def _cmd_sweep(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trap_payload = {k: getattr(args, k) for k in
                    ("trap", "aniso", "bump_a", "bump_b", "table_file",
                     "n", "xmin", "xmax")}
    eps_list = _parse_eps(args.eps)
    jobs = []
    for eps in eps_list:
        cfg = dict(trap_payload, eps=eps)
        tag = f"{args.trap}_eps{eps:g}_{_config_hash(cfg)}"
        jobs.append({"args": trap_payload, "eps": eps, "outdir": str(out / tag)})
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(j) for j in jobs]
    results.sort(key=lambda r: -r["eps"])  # single-threaded merge
    with open(out / "summary.json", "w", encoding="utf-8") as f:
        json.dump({"jobs": results}, f, sort_keys=True, indent=1)
        f.write("\n")
    for r in results:
        print(f"sweep: eps={r['eps']:g} lambda={r['lambda_eps']:.10f} -> {r['dir']}")
    return 0


# -- argument plumbing ------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trap", default="harmonic", help="harmonic|gaussian|table")
    p.add_argument("--aniso", type=float, default=1.0)
    p.add_argument("--bump-a", dest="bump_a", type=float, default=1.0)
    p.add_argument("--bump-b", dest="bump_b", type=float, default=1.0)
    p.add_argument("--table-file", dest="table_file", default=None)
    p.add_argument("--out", default="out")
    p.add_argument("--config", default=None, help="flat key=value file; flags override")
    p.add_argument("--tol", type=float, default=1e-10, help="chemical-potential tolerance")
    p.add_argument("--n-theta", dest="n_theta", type=int, default=128)


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tf-corner")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("painleve", help="solve the corner-layer profile")
    _add_common(p)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--xmin", type=float, default=-30.0)
    p.add_argument("--xmax", type=float, default=15.0)
    p.add_argument("--n", type=int, default=4000)
    p.set_defaults(func=_cmd_painleve)

    p = sub.add_parser("trap", help="chemical potential and boundary geometry")
    _add_common(p)
    p.set_defaults(func=_cmd_trap)

    p = sub.add_parser("ground", help="ground states over an epsilon list")
    _add_common(p)
    p.add_argument("--eps", default="0.05")
    p.add_argument("--n", type=int, default=3000)
    p.add_argument("--n2d", type=int, default=256, help="per-axis count for --mode 2d")
    p.add_argument("--rmax", type=float, default=None)
    p.add_argument("--box", type=float, default=None)
    p.add_argument("--mode", choices=("radial", "2d"), default="radial")
    p.add_argument("--xmin", type=float, default=-30.0)
    p.add_argument("--xmax", type=float, default=15.0)
    p.set_defaults(func=_cmd_ground)

    p = sub.add_parser("approx", help="matched approximation along a section")
    _add_common(p)
    p.add_argument("--eps", default="0.05")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--xmin", type=float, default=-30.0)
    p.add_argument("--xmax", type=float, default=15.0)
    p.add_argument("--n", type=int, default=4000)
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("verify", help="full verification report")
    _add_common(p)
    p.add_argument("--eps", default="0.05,0.02,0.01")
    p.add_argument("--n", type=int, default=3000)
    p.add_argument("--n-hm", dest="n_hm", type=int, default=4000)
    p.add_argument("--xmin", type=float, default=-30.0)
    p.add_argument("--xmax", type=float, default=15.0)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", help="fan ground-state jobs over a worker pool")
    _add_common(p)
    p.add_argument("--eps", default="0.05,0.02")
    p.add_argument("--n", type=int, default=3000)
    p.add_argument("--xmin", type=float, default=-30.0)
    p.add_argument("--xmax", type=float, default=15.0)
    p.add_argument("--jobs", type=int,
                   default=int(os.environ.get("TF_CORNER_JOBS", "1")))
    p.set_defaults(func=_cmd_sweep)
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Resolve --config into leading flags so command-line flags override."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise CliConfigError("--config needs a file path")
    path = Path(argv[i + 1])
    if not path.exists():
        raise CliConfigError(f"config file not found: {path}")
    injected = []
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliConfigError(f"{path}:{line_no}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        injected.extend([f"--{key.replace('_', '-')}", value])
    # keep the subcommand first, then config-derived flags, then explicit flags
    return argv[:1] + injected + argv[1:i] + argv[i + 2:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _make_parser()
    try:
        if argv and not argv[0].startswith("-"):
            argv = _apply_config_file(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # argparse reports unknown keys itself
            return 0 if exc.code in (0, None) else 2
        if args.trap not in _TRAP_KINDS:
            raise CliConfigError(
                f"unknown trap kind: {args.trap!r} (choose from {_TRAP_KINDS})")
        return args.func(args)
    except CliConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (TopologyError, ParameterError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, StagnationError, TruncationError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
