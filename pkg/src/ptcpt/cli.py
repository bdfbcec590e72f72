"""Command-line runner for the no-signaling, entanglement, CHSH and C-operator experiments.

Each subcommand builds a report ``{command, config, results, checks}``.
``results`` is a list of flat rows (so the same data can be written as CSV);
every check carries ``{name, value, tolerance, pass}``.

Exit status: 0 success, 2 invalid configuration, 3 a numerical check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .composite import evolution_operator
from .core import (
    Prescription,
    PTHamiltonian,
    build_c_spectral,
    c_operator,
    check_alpha,
    cpt_frame,
    eigensystem,
    hamiltonian_matrix,
    inner,
    phi_of,
)
from .exceptions import BrokenSymmetryError
from .experiments import (
    ChshStrategy,
    chsh_marginal,
    chsh_optimize,
    chsh_win_probability,
    chsh_win_probability_from_marginals,
    entanglement_report,
    hilbert_eigenvalues_closed_form,
    nosignaling_report,
)

OUTPUT_DIR_ENV = "PTCPT_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CHECK = 3


class ConfigError(ValueError):
    pass


def _check(name: str, value: float, tolerance: float) -> dict:
    value = float(value)
    return {"name": name, "value": value, "tolerance": tolerance, "pass": bool(abs(value) <= tolerance)}


def _prescriptions(choice: str) -> list[Prescription]:
    if choice == "both":
        return [Prescription.CPT, Prescription.HILBERT]
    return [Prescription(choice)]


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:steps`` -> ``steps`` evenly spaced points, endpoints included."""
    try:
        start, stop, steps = text.split(":")
        start, stop, steps = float(start), float(stop), int(steps)
    except ValueError as exc:
        raise ConfigError(f"grid must look like start:stop:steps, got {text!r}") from exc
    if steps < 1:
        raise ConfigError("grid steps must be >= 1")
    if steps == 1:
        return np.array([start])
    return np.linspace(start, stop, steps)


def _validate_alpha(alpha: float) -> float:
    try:
        return check_alpha(alpha)
    except BrokenSymmetryError as exc:
        raise ConfigError(f"alpha outside unbroken PT band: {alpha}") from exc


# -- experiments --------------------------------------------------------------

def run_nosignal(alpha, alpha_b=None, prescription="both", initial="entangled"):
    rows, checks = [], []
    for p in _prescriptions(prescription):
        table = nosignaling_report(p, alpha, alpha_b, initial)

        def row(kind, setting="", a="", b="", value=0.0):
            return {"prescription": p.value, "kind": kind, "setting": setting, "a": a, "b": b, "value": float(value)}

        rows.extend(row("joint", r["setting"], r["a"], r["b"], r["probability"]) for r in table.rows())
        for (setting, o), v in table.bob_marginals.items():
            rows.append(row("bob_marginal", "".join(c.value for c in setting), "*", o.value, v))
        for (setting, o), v in table.alice_marginals.items():
            rows.append(row("alice_marginal", "".join(c.value for c in setting), o.value, "*", v))
        rows.append(row("deviation", value=table.deviation))
        rows.append(row("reverse_deviation", value=table.reverse_deviation))

        for setting in dict.fromkeys(key[2] for key in table.entries):
            total = sum(v for (a, b, s), v in table.entries.items() if s == setting)
            checks.append(_check(f"{p.value}_normalization_{''.join(c.value for c in setting)}", total - 1, 1e-10))
        if p is Prescription.CPT or initial == "separable":
            checks.append(_check(f"{p.value}_no_signaling", table.deviation, 1e-10))
            checks.append(_check(f"{p.value}_no_signaling_reverse", table.reverse_deviation, 1e-10))
        elif alpha_b is None:
            sa = math.sin(alpha)
            # closed-form marginals differ by 2 sin a / (1 + sin^2 a); deviation is half that
            checks.append(_check("hilbert_deviation_vs_closed_form", table.deviation - abs(sa) / (1 + sa * sa), 1e-10))
    return rows, checks


def run_entangle(alpha, prescription="both"):
    rows, checks = [], []
    for p in _prescriptions(prescription):
        rep = entanglement_report(alpha, p)
        lam_p, lam_m = (complex(x) for x in rep.eigenvalues)
        r = rep.reduced
        rows.append({
            "prescription": p.value,
            "alpha": alpha,
            "lambda_plus": lam_p.real,
            "lambda_minus": lam_m.real,
            "entropy": rep.entropy if rep.entropy is not None else float("nan"),
            "flag": rep.flag or "",
            "rho_00_re": r[0, 0].real, "rho_00_im": r[0, 0].imag,
            "rho_01_re": r[0, 1].real, "rho_01_im": r[0, 1].imag,
            "rho_10_re": r[1, 0].real, "rho_10_im": r[1, 0].imag,
            "rho_11_re": r[1, 1].real, "rho_11_im": r[1, 1].imag,
        })
        if p is Prescription.CPT:
            checks.append(_check("cpt_entropy_is_one", (rep.entropy or 0.0) - 1, 1e-10))
            checks.append(_check("cpt_eigenvalues_half", max(abs(lam_p - 0.5), abs(lam_m - 0.5)), 1e-10))
        else:
            ep, em = hilbert_eigenvalues_closed_form(alpha)
            checks.append(_check("hilbert_eigenvalues_vs_closed_form", max(abs(lam_p - ep), abs(lam_m - em)), 1e-10))
    return rows, checks


def _chsh_row(zeta, alphas):
    return {
        "zeta": float(zeta),
        "p_win": chsh_win_probability(zeta),
        "p_win_from_marginals": chsh_win_probability_from_marginals(zeta, alphas),
    }


def run_chsh(zeta=None, sweep=None, alphas=(0.0, 0.0)):
    rows, checks = [], []
    if sweep is not None:
        zetas = list(sweep)
    elif zeta is not None:
        zetas = [zeta]
    else:
        zeta_star, p_star = chsh_optimize()
        zetas = [zeta_star]
        checks.append(_check("zeta_star_vs_pi_over_8", zeta_star - math.pi / 8, 1e-6))
        checks.append(_check("p_star_vs_cos2_pi_over_8", p_star - math.cos(math.pi / 8) ** 2, 1e-9))
    for z in zetas:
        rows.append(_chsh_row(z, alphas))
    checks.append(_check("routes_agree", max(abs(r["p_win"] - r["p_win_from_marginals"]) for r in rows), 1e-10))
    strategy = ChshStrategy.from_zeta(zetas[0])
    worst = 0.0
    for inputs in ((0, 0), (0, 1), (1, 0), (1, 1)):
        for b in (0, 1):
            worst = max(worst, abs(sum(chsh_marginal(strategy, inputs, a, b, alphas) for a in (0, 1)) - 0.5))
    checks.append(_check("chsh_no_signaling", worst, 1e-10))
    return rows, checks


def run_coperator(alpha, seed=0):
    h = PTHamiltonian(1.0, alpha)
    spectral = build_c_spectral(eigensystem(h))
    closed = c_operator(alpha)
    frame = cpt_frame(h)
    hm = hamiltonian_matrix(h)
    rows = []
    for i in range(2):
        for j in range(2):
            rows.append({
                "alpha": alpha, "row": i, "col": j,
                "c_re": spectral[i, j].real, "c_im": spectral[i, j].imag,
                "c_dagger_re": frame.c_dagger_op[i, j].real, "c_dagger_im": frame.c_dagger_op[i, j].imag,
            })
    spec = eigensystem(h)
    states = [spec.psi_plus, spec.psi_minus]
    ortho = max(
        abs(np.vdot(phi_of(u, frame), v) - (1.0 if k == m else 0.0))
        for k, u in enumerate(states) for m, v in enumerate(states)
    )
    rng = np.random.default_rng(seed)
    u = evolution_operator(h, 0.37)
    unitarity = 0.0
    for _ in range(20):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        unitarity = max(unitarity, abs(inner(u @ a, u @ b, frame) - inner(a, b, frame)))
    checks = [
        _check("spectral_vs_closed_form", np.abs(spectral - closed).max(), 1e-12),
        _check("c_squared_is_identity", np.abs(spectral @ spectral - np.eye(2)).max(), 1e-12),
        _check("c_commutes_with_h", np.abs(spectral @ hm - hm @ spectral).max(), 1e-12),
        _check("c_dagger_is_conjugate", np.abs(frame.c_dagger_op - np.conj(spectral)).max(), 1e-12),
        _check("cpt_orthonormality", ortho, 1e-12),
        _check("cpt_unitarity_random_pairs", unitarity, 1e-10),
    ]
    return rows, checks


def run_sweep(experiment, grid, prescription="both", seed=0):
    rows, checks = [], []
    for alpha in grid:
        alpha = float(alpha)
        if experiment == "nosignal":
            sub_rows, sub_checks = run_nosignal(alpha, prescription=prescription)
            dev = {r["prescription"]: r["value"] for r in sub_rows if r["kind"] == "deviation"}
            marg = {(r["prescription"], r["setting"]): r["value"] for r in sub_rows
                    if r["kind"] == "bob_marginal" and r["b"] == "+y"}
            row = {"alpha": alpha}
            for p in _prescriptions(prescription):
                row[f"{p.value}_deviation"] = dev[p.value]
                row[f"{p.value}_marginal_plus"] = marg[(p.value, "+")]
                row[f"{p.value}_marginal_minus"] = marg[(p.value, "-")]
        elif experiment == "entangle":
            sub_rows, sub_checks = run_entangle(alpha, prescription)
            row = {"alpha": alpha}
            for r in sub_rows:
                for key in ("lambda_plus", "lambda_minus", "entropy"):
                    row[f"{r['prescription']}_{key}"] = r[key]
        elif experiment == "coperator":
            sub_rows, sub_checks = run_coperator(alpha, seed)
            row = {"alpha": alpha, **{c["name"]: c["value"] for c in sub_checks}}
        elif experiment == "chsh":
            sub_rows, sub_checks = run_chsh(math.pi / 8, alphas=(alpha, alpha))
            row = {"alpha": alpha, "p_win_from_marginals": sub_rows[0]["p_win_from_marginals"]}
            sub_checks.append(_check("p_win_vs_cos2_pi_over_8",
                                     row["p_win_from_marginals"] - math.cos(math.pi / 8) ** 2, 1e-10))
        else:
            raise ConfigError(f"unknown experiment {experiment!r}")
        rows.append(row)
        checks.extend({**c, "name": f"alpha={alpha!r}:{c['name']}"} for c in sub_checks)
    return rows, checks


# -- output -----------------------------------------------------------------

def _plain(value):
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    return value


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, default=_plain) + "\n"


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for r in rows:
        writer.writerow([format(v, ".17g") if isinstance(v, float) else v for v in (_plain(r[k]) for k in header)])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptcpt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json", dest="output_format")
    common.add_argument("--output", type=Path, default=None, dest="output_path",
                        help=f"output file (default: ${OUTPUT_DIR_ENV}/<command>.<format>, else stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nosignal", parents=[common], help="no-signaling marginals")
    p.add_argument("--alpha", type=float, required=True, dest="alpha_a")
    p.add_argument("--alpha-b", type=float, default=None)
    p.add_argument("--prescription", choices=("cpt", "hilbert", "both"), default="both")
    p.add_argument("--initial", choices=("entangled", "separable"), default="entangled")

    p = sub.add_parser("entangle", parents=[common], help="reduced-state entropy")
    p.add_argument("--alpha", type=float, required=True, dest="alpha_a")
    p.add_argument("--prescription", choices=("cpt", "hilbert", "both"), default="both")

    p = sub.add_parser("chsh", parents=[common], help="CHSH win probability")
    p.add_argument("--zeta", type=float, default=None)
    p.add_argument("--sweep-zeta", default=None, metavar="START:STOP:STEPS")
    p.add_argument("--alpha", type=float, default=0.0, dest="alpha_a")
    p.add_argument("--alpha-b", type=float, default=0.0)

    p = sub.add_parser("coperator", parents=[common], help="C operator and its checks")
    p.add_argument("--alpha", type=float, required=True, dest="alpha_a")

    p = sub.add_parser("sweep", parents=[common], help="run an experiment across an alpha grid")
    p.add_argument("--experiment", choices=("nosignal", "entangle", "coperator", "chsh"), required=True)
    p.add_argument("--grid", required=True, metavar="START:STOP:STEPS")
    p.add_argument("--prescription", choices=("cpt", "hilbert", "both"), default="both")
    return parser


def _config(args) -> dict:
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    return dict(sorted(cfg.items()))


def run(args) -> dict:
    cmd = args.command
    if cmd == "sweep":
        grid = parse_grid(args.grid)
        for a in grid:
            _validate_alpha(a)
        rows, checks = run_sweep(args.experiment, grid, args.prescription, args.seed)
    else:
        alpha = _validate_alpha(args.alpha_a)
        if cmd == "nosignal":
            alpha_b = None if args.alpha_b is None else _validate_alpha(args.alpha_b)
            rows, checks = run_nosignal(alpha, alpha_b, args.prescription, args.initial)
        elif cmd == "entangle":
            rows, checks = run_entangle(alpha, args.prescription)
        elif cmd == "chsh":
            sweep = parse_grid(args.sweep_zeta) if args.sweep_zeta else None
            rows, checks = run_chsh(args.zeta, sweep, (alpha, _validate_alpha(args.alpha_b)))
        else:
            rows, checks = run_coperator(alpha, args.seed)
    return {"command": cmd, "config": _config(args), "results": rows, "checks": checks}


def _destination(args) -> Path | None:
    if args.output_path is not None:
        return args.output_path
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        return Path(out_dir) / f"{args.command}.{args.output_format}"
    return None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = run(args)
    except (ConfigError, BrokenSymmetryError) as exc:
        print(f"ptcpt: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = to_json(report) if args.output_format == "json" else to_csv(report["results"])
    dest = _destination(args)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)

    failed = [c["name"] for c in report["checks"] if not c["pass"]]
    if failed:
        print(f"ptcpt: {len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
