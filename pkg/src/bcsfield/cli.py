"""Command-line front end: JSON config in, CSV/JSON artifacts out.

Commands:
  gap            solve the gap equation at one (beta, t) point
  tau-curve      trace the phase boundary, count local minima
  phase-diagram  classify a rectangular (beta, t) grid with Delta and F
  verify         run the self-check suites

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 numerical failure.
All numeric CSV fields are serialized with 17 significant digits so output is
byte-identical across runs with the same config.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import closedform
from .boundary import (
    CurveGrid,
    classify_shape,
    multiorbital_exact_tau_check,
    trace_curve,
    w_tilde,
    a_plus,
    a_minus,
)
from .bzquad import QuadratureConfig, QuadratureError, trace_integral
from .dispersion import (
    ConstantDiagonal,
    Cosine1D,
    MeasureFractions,
    MultiOrbitalDiagonal,
    build_bump_dispersion,
)
from .freeenergy import free_energy
from .gapcore import (
    AdmissibilityError,
    RootConfig,
    SolverConfig,
    beta_c_upper_bound,
    solve_beta_c,
    solve_delta,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.17g}"


def _require(block: dict, key: str, where: str):
    if key not in block:
        raise ConfigError(f"missing '{key}' in {where}")
    return block[key]


def build_model(block: dict):
    if not isinstance(block, dict):
        raise ConfigError("'model' must be an object")
    kind = _require(block, "kind", "model")
    try:
        if kind == "constant_diagonal":
            return ConstantDiagonal(int(_require(block, "b", "model")),
                                    float(_require(block, "e", "model")))
        if kind == "multi_orbital_diagonal":
            return MultiOrbitalDiagonal(int(_require(block, "b", "model")),
                                        int(_require(block, "b_prime", "model")),
                                        float(_require(block, "e_min", "model")),
                                        float(_require(block, "e_max", "model")))
        if kind == "cosine_1d":
            return Cosine1D(float(_require(block, "t_hop", "model")),
                            float(_require(block, "e_min", "model")))
        if kind == "bump":
            fr = MeasureFractions(float(_require(block, "s", "model")),
                                  float(_require(block, "t", "model")))
            return build_bump_dispersion(int(_require(block, "d", "model")),
                                         int(_require(block, "b", "model")), fr,
                                         float(_require(block, "e_min", "model")),
                                         float(_require(block, "e_max", "model")))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad model parameters: {exc}") from exc
    raise ConfigError(f"unknown model kind {kind!r}")


def build_solver_config(cfg: dict) -> SolverConfig:
    try:
        qb = cfg.get("quadrature", {})
        quad = QuadratureConfig(
            base_points_per_dim=int(qb.get("points", 64)),
            abs_tol=float(qb.get("tol", 1e-11)),
            max_doublings=int(qb.get("max_doublings", 18)))
        rb = cfg.get("root", {})
        root = RootConfig(
            abs_tol=float(rb.get("abs_tol", 1e-10)),
            max_iter=int(rb.get("max_iter", 200)),
            classification_tol=float(rb.get("classification_tol", 1e-8)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad solver configuration: {exc}") from exc
    return SolverConfig(quad, root)


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    if "model" not in cfg or "coupling" not in cfg:
        raise ConfigError("config needs 'model' and 'coupling'")
    U = cfg["coupling"]
    if not (isinstance(U, (int, float)) and U < 0):
        raise ConfigError("'coupling' must be a negative number")
    return cfg


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands

def cmd_gap(cfg: dict, out: str | None, threads: int) -> int:
    model = build_model(cfg["model"])
    solver = build_solver_config(cfg)
    block = cfg.get("gap")
    if not isinstance(block, dict):
        raise ConfigError("'gap' block required")
    beta = float(_require(block, "beta", "gap"))
    if beta <= 0:
        raise ConfigError("gap.beta must be positive")
    if "t" in block:
        t = float(block["t"])
    elif "theta" in block:
        t = beta * float(block["theta"])
    else:
        raise ConfigError("gap block needs 't' or 'theta'")
    res = solve_delta(model, cfg["coupling"], beta, t, solver)
    _emit(json.dumps({
        "delta": res.delta, "regime": res.regime.value,
        "residual": res.residual, "iterations": res.iterations,
        "beta": beta, "t": t,
    }, indent=2) + "\n", out)
    return EXIT_OK


def cmd_tau_curve(cfg: dict, out: str | None, threads: int) -> int:
    model = build_model(cfg["model"])
    solver = build_solver_config(cfg)
    block = cfg.get("tau_curve", {})
    grid = CurveGrid(
        core_points=int(block.get("core_points", 512)),
        per_decade=int(block.get("per_decade", 64)),
        decades=int(block.get("decades", 4)))
    if grid.core_points < 2:
        raise ConfigError("tau_curve.core_points must be at least 2 (empty grid)")
    with_second = bool(block.get("tau_second", False))
    curve = trace_curve(model, cfg["coupling"], grid, solver, with_second=with_second)
    lines = ["beta,tau,tau_prime,tau_second,flag"]
    for beta, tau, tp, ts in curve.samples:
        lines.append(f"{_fmt(beta)},{_fmt(tau)},{_fmt(tp)},{_fmt(ts)},ok")
    _emit("\n".join(lines) + "\n", out)
    summary = {
        "beta_c": curve.beta_c,
        "minima_count": sum(1 for m in curve.local_minima if m[2] == "refined"),
        "local_minima": [
            {"beta": m[0], "tau": m[1], "status": m[2]} for m in curve.local_minima
        ],
    }
    summary_text = json.dumps(summary, indent=2) + "\n"
    if out:
        with open(out + ".summary.json", "w") as fh:
            fh.write(summary_text)
    else:
        sys.stdout.write(summary_text)
    return EXIT_OK


def cmd_phase_diagram(cfg: dict, out: str | None, threads: int) -> int:
    model = build_model(cfg["model"])
    solver = build_solver_config(cfg)
    block = cfg.get("phase_diagram")
    if not isinstance(block, dict):
        raise ConfigError("'phase_diagram' block required")
    try:
        betas = np.linspace(float(block["beta_min"]), float(block["beta_max"]),
                            int(block["beta_points"]))
        ts = np.linspace(float(block["t_min"]), float(block["t_max"]),
                         int(block["t_points"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad phase_diagram block: {exc}") from exc
    if betas.size < 1 or ts.size < 1 or betas.min() <= 0:
        raise ConfigError("phase_diagram grid must be non-empty with beta > 0")
    U = cfg["coupling"]
    points = [(beta, t) for beta in betas for t in ts]

    def work(pt):
        beta, t = pt
        res = solve_delta(model, U, beta, t, solver)
        F = free_energy(model, U, beta, t, solver, delta=res.delta)
        return beta, t, res.regime.value, res.delta, F

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, points))
    else:
        rows = [work(pt) for pt in points]
    lines = ["beta,t,regime,delta,F"]
    for beta, t, regime, delta, F in rows:
        lines.append(f"{_fmt(beta)},{_fmt(t)},{regime},{_fmt(delta)},{_fmt(F)}")
    _emit("\n".join(lines) + "\n", out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites

def _suite_constants(report):
    c = closedform.ALGEBRAIC_CONSTANTS
    report("constants.threshold_squared", abs(c.threshold**2 - c.eta0) < 1e-15)
    report("constants.a0_times_threshold", abs(c.a0 * c.threshold - 1.0) < 1e-15)
    report("constants.a0_identity", abs(c.a0 - (1 + c.eta0) / (6 * c.eta0)) < 1e-13)
    report("constants.w_tilde_critical",
           abs(w_tilde(c.a0, -1.0, c.eta0) - c.threshold) < 1e-12)
    report("constants.a_pm_merge",
           abs(a_plus(c.eta0) - c.a0) < 1e-6 and abs(a_minus(c.eta0) - c.a0) < 1e-6)


def _suite_appendix_b(report):
    rng = np.random.default_rng(7)
    solver = SolverConfig()
    worst = 0.0
    for _ in range(10):
        x, th = rng.uniform(0.0, 10.0, size=2)
        model = Cosine1D(th, 1.0)
        val = trace_integral(model, lambda lam: 1.0 / (1.0 + x * lam * lam),
                             solver.quad)
        worst = max(worst, abs(val - closedform.cosine_integral_closed(x, th)))
    report("appendix_b.closed_form_agreement", worst < 1e-10,
           detail={"max_abs_err": worst})


def _suite_constant_model(report):
    b, e, U = 1, 1.0, -0.125
    model = ConstantDiagonal(b, e)
    solver = SolverConfig()
    bc = solve_beta_c(model, U, solver)
    bc_exact = closedform.constant_model_beta_c(b, e, U)
    report("constant_model.beta_c", abs(bc - bc_exact) < 1e-10,
           detail={"numeric": bc, "exact": bc_exact})
    worst = 0.0
    for frac in (0.1, 0.3, 0.5, 0.7, 0.9):
        from .gapcore import solve_tau
        tau = solve_tau(model, U, frac * bc_exact, solver)
        worst = max(worst, abs(tau - closedform.constant_model_tau(
            b, e, U, frac * bc_exact)))
    report("constant_model.tau", worst < 1e-10, detail={"max_abs_err": worst})


def _suite_figure2(report):
    worst = 0.0
    bc = beta_c_upper_bound(MultiOrbitalDiagonal(8, 7, 1.0, 7.0), -0.125)
    solver = SolverConfig()
    from .gapcore import solve_tau
    model = MultiOrbitalDiagonal(8, 7, 1.0, 7.0)
    bc = solve_beta_c(model, -0.125, solver)
    for frac in (0.05, 0.25, 0.5, 0.75, 0.95):
        exact, _ = multiorbital_exact_tau_check(8, 7, 1.0, 7.0, -0.125, frac * bc)
        worst = max(worst, abs(exact - solve_tau(model, -0.125, frac * bc, solver)))
    report("figure2.exact_vs_numeric_tau", worst < 1e-8,
           detail={"max_abs_err": worst})
    verdicts = {emax: classify_shape(8, 7, 1.0, emax).minima_count
                for emax in (6.0, 7.0, 9.0)}
    report("figure2.shape_classification",
           verdicts == {6.0: 1, 7.0: 2, 9.0: 1}, detail={"verdicts": str(verdicts)})


def _suite_admissibility(report):
    model = ConstantDiagonal(1, 1.0)
    try:
        beta_c_upper_bound(model, -3.0)
        ok = False
    except AdmissibilityError:
        ok = True
    report("admissibility.gate_rejects_large_coupling", ok)


SUITES = {
    "constants": _suite_constants,
    "appendix_b": _suite_appendix_b,
    "constant_model": _suite_constant_model,
    "figure2": _suite_figure2,
    "admissibility": _suite_admissibility,
}


def cmd_verify(cfg: dict | None, out: str | None, threads: int,
               name_filter: str | None) -> int:
    results = []

    def report(name, ok, detail=None):
        results.append({"check": name, "ok": bool(ok),
                        **({"detail": detail} if detail else {})})

    extra_fail = False
    if cfg is not None:
        # admissibility gate for the configured model / coupling
        model = build_model(cfg["model"])
        try:
            beta_c_upper_bound(model, cfg["coupling"])
            report("config.admissible_coupling", True)
        except AdmissibilityError as exc:
            report("config.admissible_coupling", False, detail={"error": str(exc)})
            extra_fail = True
    for name, suite in SUITES.items():
        if name_filter and name_filter not in name:
            continue
        suite(report)
    ok = all(r["ok"] for r in results) and not extra_fail
    _emit(json.dumps({"ok": ok, "results": results}, indent=2) + "\n", out)
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bcsfield",
        description="BCS thermodynamics with imaginary magnetic field")
    parser.add_argument("command",
                        choices=["gap", "tau-curve", "phase-diagram", "verify"])
    parser.add_argument("--config", help="path to the JSON run configuration")
    parser.add_argument("--out", help="output path (stdout when omitted)")
    parser.add_argument("--filter", dest="name_filter",
                        help="verify: run only suites whose name contains this")
    parser.add_argument("--threads", type=int, default=1,
                        help="parallel sweep width for grid commands")
    args = parser.parse_args(argv)
    try:
        cfg = None
        if args.config is not None:
            cfg = load_config(args.config)
        if args.command == "verify":
            return cmd_verify(cfg, args.out, args.threads, args.name_filter)
        if cfg is None:
            raise ConfigError("--config is required for this command")
        handler = {"gap": cmd_gap, "tau-curve": cmd_tau_curve,
                   "phase-diagram": cmd_phase_diagram}[args.command]
        return handler(cfg, args.out, args.threads)
    except (ConfigError, AdmissibilityError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
