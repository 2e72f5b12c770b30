"""Command-line entry point.

Subcommands: verify, ed, thermo, corr, scan, fss.  Exit codes are 0 on
success, 1 for invalid configuration, 2 when a solver fails to converge and 3
when a verification check fails.  Output goes to ``--out`` (written through a
temporary file and renamed) or to stdout.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import ConvergenceFailure, FitFailure, IronfaceError, MappingMismatch
from .weights import Regime

THERMO_COLUMNS = ["T", "beta", "delta", "gamma", "J", "f", "e", "s", "c", "iterations", "residual"]
CORR_COLUMNS = ["T", "beta", "delta", "J", "xi_inv", "beta_over_xi", "kappa", "kappa_over_pi",
                "iterations", "xi_inv_pred", "kappa_pred"]
SCAN_COLUMNS = ["delta", "gamma", "T", "J", "xi_inv", "kappa", "kappa_over_pi", "iterations", "status"]
FSS_COLUMNS = ["L", "E0", "gap", "h_estimate", "c_estimate", "e_inf", "velocity", "h_pred"]
VERIFY_COLUMNS = ["check", "value", "threshold", "passed"]
ED_COLUMNS = ["index", "energy"]

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    delta: float | None = None
    gamma: float | None = None
    j_coupling: float = 0.0
    t_min: float | None = None
    t_max: float | None = None
    t_points: int = 1
    spacing: str = "linear"
    solver: dict = field(default_factory=dict)
    out: str | None = None
    fmt: str = "csv"
    workers: int = 1
    meta: bool = True
    extra: dict = field(default_factory=dict)

    def regime(self) -> Regime:
        if self.gamma is not None:
            if self.extra.get("massive"):
                return Regime.massive(self.gamma)
            return Regime.critical(self.gamma)
        return Regime.from_delta(self.delta)

    def temperatures(self) -> np.ndarray:
        if self.t_points == 1 or self.t_max is None or self.t_max == self.t_min:
            return np.array([self.t_min])
        if self.spacing == "log":
            return np.geomspace(self.t_min, self.t_max, self.t_points)
        return np.linspace(self.t_min, self.t_max, self.t_points)


# --- argument parsing ----------------------------------------------------------

def _add_model(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--delta", type=float, help="anisotropy Delta (> -1)")
    g.add_argument("--gamma", type=float, help="crossing parameter gamma (critical if < pi)")
    p.add_argument("--massive", action="store_true",
                   help="read --gamma as the massive parameter, Delta = cosh(gamma)")


def _add_output(p):
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--no-meta", dest="meta", action="store_false",
                   help="omit the header line carrying version and timestamp")
    p.add_argument("--config", help="flat key = value file with flag defaults")


def _add_temps(p):
    p.add_argument("--t", dest="t_single", type=float, help="single temperature")
    p.add_argument("--tmin", dest="t_min", type=float)
    p.add_argument("--tmax", dest="t_max", type=float)
    p.add_argument("--tpoints", dest="t_points", type=int, default=1)
    p.add_argument("--log", dest="log", action="store_true", help="logarithmic temperature spacing")


def _add_solver(p):
    s = p.add_argument_group("solver overrides")
    s.add_argument("--grid-points", type=int, help="line grid points (power of two, default 4096)")
    s.add_argument("--circle-points", type=int, help="circle grid points (default 1024)")
    s.add_argument("--x-max", type=float, help="half-width of the line grid (default 20)")
    s.add_argument("--epsilon", type=float, help="contour offset of shifted kernels (default 0)")
    s.add_argument("--tol", type=float, help="fixed-point tolerance (default 1e-11)")
    s.add_argument("--max-iter", type=int, help="fixed-point iterations before Newton (default 400)")
    s.add_argument("--mixing", type=float, help="under-relaxation factor (default 0.5)")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel worker processes (capped by IRONFACE_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ironface", description="Face six-vertex model toolkit.")
    parser.add_argument("--version", action="version", version=f"ironface {__version__}")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("verify", help="local identities, transfer matrices and the spectral map")
    _add_model(p)
    _add_output(p)
    p.add_argument("-L", dest="L", type=int, default=4, help="chain length (default 4)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bethe-check", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("ed", help="exact spectrum of the three-spin chain or the twisted XXZ chain")
    _add_model(p)
    _add_output(p)
    p.add_argument("-L", dest="L", type=int, default=6)
    p.add_argument("--model", choices=("irf", "xxz", "8v"), default="irf")
    p.add_argument("--phi", type=float, default=0.0, help="twist of the XXZ chain")
    p.add_argument("--gamma8v", type=float, default=0.0, help="eight-vertex coupling")
    p.add_argument("--export", help="also write the operator in matrix-market-style text")

    for name, helptext in (("thermo", "free energy, energy, entropy and specific heat"),
                           ("corr", "correlation length and wave-vector")):
        p = sub.add_parser(name, help=helptext)
        _add_model(p)
        _add_output(p)
        _add_temps(p)
        _add_solver(p)
        p.add_argument("--j", dest="j_coupling", type=float, default=0.0, help="Ising coupling J")

    p = sub.add_parser("scan", help="correlation data across Delta at fixed T and J")
    _add_output(p)
    _add_solver(p)
    p.add_argument("--j", dest="j_coupling", type=float, default=0.0)
    p.add_argument("--t", dest="t_single", type=float, required=False)
    p.add_argument("--delta-min", type=float)
    p.add_argument("--delta-max", type=float)
    p.add_argument("--points", dest="scan_points", type=int, default=20)

    p = sub.add_parser("fss", help="finite-size estimates of c and h")
    _add_model(p)
    _add_output(p)
    p.add_argument("--sizes", default="8,10,12,14", help="comma-separated even chain lengths")
    return parser


def _read_config_file(path: str) -> dict:
    vals = {}
    try:
        with open(path) as fh:
            for n, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{n}: expected key = value")
                k, v = (s.strip() for s in line.split("=", 1))
                vals[k.lstrip("-").replace("-", "_")] = v
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return vals


def _apply_file_defaults(parser, argv):
    """Install config-file values as subparser defaults so flags override them."""
    if "--config" not in argv and not any(a.startswith("--config=") for a in argv):
        return None
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    vals = _read_config_file(known.config)
    subname = next((a for a in argv if not a.startswith("-")), None)
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    if subname not in subs.choices:
        return None
    sp = subs.choices[subname]
    actions = {a.dest: a for a in sp._actions}
    aliases = {"tmin": "t_min", "tmax": "t_max", "tpoints": "t_points", "j": "j_coupling",
               "t": "t_single", "format": "fmt", "no_meta": "meta"}
    defaults = {}
    for k, v in vals.items():
        dest = aliases.get(k, k)
        if dest not in actions:
            raise ConfigError(f"unknown config key {k!r}")
        act = actions[dest]
        if isinstance(act, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            flag = v.lower() in ("1", "true", "yes", "on")
            defaults[dest] = (not flag) if k == "no_meta" else flag
        else:
            try:
                defaults[dest] = act.type(v) if act.type else v
            except ValueError as exc:
                raise ConfigError(f"bad value for {k}: {v}") from exc
    # a model flag on the command line replaces the file's choice of model
    if any(a.startswith("--delta") for a in argv):
        defaults.pop("gamma", None)
    if any(a.startswith("--gamma") for a in argv):
        defaults.pop("delta", None)
    sp.set_defaults(**defaults)
    return vals


def _worker_cap(requested: int) -> int:
    cap = os.environ.get("IRONFACE_THREADS")
    n = max(1, int(requested))
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError as exc:
            raise ConfigError("IRONFACE_THREADS must be an integer") from exc
    return n


def parse_config(argv) -> RunConfig:
    parser = build_parser()
    argv = list(argv)
    _apply_file_defaults(parser, argv)
    ns = parser.parse_args(argv)
    d = vars(ns)
    sc = ns.subcommand
    if d.get("delta") is not None and d.get("gamma") is not None:
        raise ConfigError("--delta and --gamma are mutually exclusive")
    cfg = RunConfig(subcommand=sc, delta=d.get("delta"), gamma=d.get("gamma"),
                    j_coupling=d.get("j_coupling") or 0.0, out=d.get("out"),
                    fmt=d.get("fmt", "csv"), meta=d.get("meta", True))
    cfg.extra["massive"] = bool(d.get("massive"))
    if sc != "scan" and cfg.delta is None and cfg.gamma is None:
        raise ConfigError("one of --delta or --gamma is required")
    if sc in ("thermo", "corr", "scan"):
        cfg.workers = _worker_cap(d.get("workers", 1))
        cfg.solver = {k: d.get(k) for k in ("x_max", "epsilon", "tol", "max_iter", "mixing",
                                            "circle_points")}
        cfg.solver["points"] = d.get("grid_points")
    if sc in ("thermo", "corr"):
        if d.get("t_single") is not None:
            if d.get("t_min") is not None:
                raise ConfigError("--t cannot be combined with --tmin/--tmax")
            cfg.t_min = cfg.t_max = d["t_single"]
            cfg.t_points = 1
        else:
            cfg.t_min, cfg.t_max, cfg.t_points = d.get("t_min"), d.get("t_max"), d.get("t_points")
        if cfg.t_min is None:
            raise ConfigError("a temperature is required (--t or --tmin)")
        if cfg.t_max is None:
            cfg.t_max = cfg.t_min
        if cfg.t_min <= 0 or cfg.t_max <= 0:
            raise ConfigError("temperatures must be positive")
        if cfg.t_points < 1:
            raise ConfigError("--tpoints must be at least 1")
        if cfg.t_max < cfg.t_min:
            raise ConfigError("--tmax must not be below --tmin")
        cfg.spacing = "log" if d.get("log") else "linear"
    if sc == "scan":
        for key in ("t_single", "delta_min", "delta_max"):
            if d.get(key) is None:
                raise ConfigError(f"scan needs --{key.replace('_single', '').replace('_', '-')}")
        if d["t_single"] <= 0:
            raise ConfigError("temperature must be positive")
        if d["scan_points"] < 1:
            raise ConfigError("--points must be at least 1")
        if d["delta_max"] < d["delta_min"]:
            raise ConfigError("--delta-max must not be below --delta-min")
        cfg.t_min = cfg.t_max = d["t_single"]
        cfg.extra.update(delta_min=d["delta_min"], delta_max=d["delta_max"],
                         points=d["scan_points"])
    if sc in ("verify", "ed"):
        if d["L"] < 3:
            raise ConfigError("-L must be at least 3")
        cfg.extra["L"] = d["L"]
    if sc == "verify":
        cfg.extra.update(seed=d["seed"], bethe_check=d["bethe_check"])
    if sc == "ed":
        cfg.extra.update(model=d["model"], phi=d["phi"], gamma8v=d["gamma8v"], export=d["export"])
    if sc == "fss":
        try:
            sizes = [int(s) for s in d["sizes"].split(",") if s.strip()]
        except ValueError as exc:
            raise ConfigError("--sizes must be comma-separated integers") from exc
        if any(L % 2 or L < 4 for L in sizes):
            raise ConfigError("--sizes must be even and at least 4")
        cfg.extra["sizes"] = sizes
    try:
        if sc != "scan":
            cfg.regime()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


# --- output ----------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if np.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def render(rows: list[dict], columns: list[str], fmt: str, meta: dict | None) -> str:
    if fmt == "json":
        doc = {"columns": columns, "rows": [{c: _jsonable(r[c]) for c in columns} for r in rows]}
        if meta is not None:
            doc = {"meta": meta, **doc}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    if meta is not None:
        buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write through a temporary file in the target directory and rename into place."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".ironface-", dir=d)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: RunConfig, rows, columns, extra_meta=None):
    meta = None
    if cfg.meta:
        meta = {"ironface": __version__, "command": cfg.subcommand,
                "generated": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")}
        if extra_meta:
            meta.update(extra_meta)
    text = render(rows, columns, cfg.fmt, meta)
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)


# --- subcommands -------------------------------------------------------------------

def _solver_config(cfg: RunConfig):
    from .nlie import NlieConfig, with_overrides
    return with_overrides(NlieConfig(), **cfg.solver)


def _chunks(items, n):
    """Split into n contiguous chains (warm starts run along each chain)."""
    n = max(1, min(n, len(items)))
    bounds = np.linspace(0, len(items), n + 1).astype(int)
    return [items[bounds[i]:bounds[i + 1]] for i in range(n) if bounds[i] < bounds[i + 1]]


def _thermo_chain(args):
    from .nlie import free_energy
    betas, J, regime, solver = args
    out, sol = [], None
    for b in betas:
        pt, sol = free_energy(b, J, config=solver, regime=regime, init=sol)
        out.append(asdict(pt))
    return out


def _corr_chain(args):
    from .asymptotics import kappa_lowT, xi_inverse_limit
    from .nlie import correlation
    betas, J, regime, solver = args
    out = []
    for b in betas:
        pt = correlation(b, J, config=solver, regime=regime)
        row = asdict(pt)
        row.pop("ln_ratio")
        if regime.is_critical:
            row["xi_inv_pred"] = xi_inverse_limit(regime.gamma) / b if J == 0 else float("nan")
            row["kappa_pred"] = kappa_lowT(regime.gamma, J)
        else:
            row["xi_inv_pred"] = row["kappa_pred"] = float("nan")
        out.append(row)
    return out


def _scan_point(args):
    from .nlie import correlation
    delta, T, J, solver = args
    row = {"delta": delta, "T": T, "J": J}
    try:
        regime = Regime.from_delta(delta)
    except ValueError:
        row.update(gamma=0.0, xi_inv=float("nan"), kappa=float("nan"), kappa_over_pi=float("nan"),
                   iterations=0, status="skipped")
        return row
    pt = correlation(1.0 / T, J, config=solver, regime=regime)
    row.update(gamma=regime.gamma, xi_inv=pt.xi_inv, kappa=pt.kappa,
               kappa_over_pi=pt.kappa_over_pi, iterations=pt.iterations, status="ok")
    return row


def _parallel_map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def run_thermo_like(cfg: RunConfig, chain_fn, columns):
    regime = cfg.regime()
    solver = _solver_config(cfg)
    temps = list(cfg.temperatures())
    # hot to cold along each chain so warm starts move toward low temperature
    order = sorted(range(len(temps)), key=lambda i: -temps[i])
    chains = _chunks(order, cfg.workers)
    jobs = [([1.0 / temps[i] for i in ch], cfg.j_coupling, regime, solver) for ch in chains]
    results = _parallel_map(chain_fn, jobs, cfg.workers)
    by_index = {}
    for ch, rows in zip(chains, results):
        for i, r in zip(ch, rows):
            by_index[i] = r
    rows = [by_index[i] for i in range(len(temps))]
    _emit(cfg, rows, columns, {"delta": regime.delta, "gamma": regime.gamma})
    return EXIT_OK


def run_scan(cfg: RunConfig):
    solver = _solver_config(cfg)
    deltas = np.linspace(cfg.extra["delta_min"], cfg.extra["delta_max"], cfg.extra["points"])
    jobs = [(float(d), cfg.t_min, cfg.j_coupling, solver) for d in deltas]
    rows = _parallel_map(_scan_point, jobs, cfg.workers)
    _emit(cfg, rows, SCAN_COLUMNS, {"T": cfg.t_min, "J": cfg.j_coupling})
    return EXIT_OK


def run_verify(cfg: RunConfig):
    from .operators import hamiltonian_from_transfer, build_t_irf
    from .spectra import verify_vertex_irf_map
    from .weights import check_initial_condition, check_unitarity, check_yang_baxter
    regime = cfg.regime()
    L = cfg.extra["L"]
    rng = np.random.default_rng(cfg.extra["seed"])
    rows = []

    def add(name, value, thr):
        rows.append({"check": name, "value": float(value), "threshold": thr,
                     "passed": bool(value < thr)})

    ybe = max(check_yang_baxter(complex(*rng.uniform(-0.5, 0.5, 2)),
                                complex(*rng.uniform(-0.5, 0.5, 2)), regime) for _ in range(5))
    add("yang_baxter", ybe, 1e-12)
    add("unitarity", max(check_unitarity(complex(*rng.uniform(-0.5, 0.5, 2)), regime)[0]
                         for _ in range(5)), 1e-12)
    add("initial_condition", check_initial_condition(regime), 1e-14)
    lam, mu = rng.uniform(0.05, 0.5, 2)
    A = build_t_irf(lam, L, regime).matrix
    B = build_t_irf(mu, L, regime).matrix
    add("commuting_transfer", np.abs(A @ B - B @ A).max(), 1e-10)
    try:
        fit = hamiltonian_from_transfer(L, regime.delta)
        add("log_derivative_fit", fit.residual, 1e-6)
    except FitFailure:
        add("log_derivative_fit", float("inf"), 1e-6)
    if L % 2 == 0:
        try:
            rep = verify_vertex_irf_map(L, regime.delta, rng=cfg.extra["seed"])
            add("spectral_map", max(rep.max_mismatch, rep.transfer_mismatch), 1e-10)
        except MappingMismatch:
            add("spectral_map", float("inf"), 1e-10)
    if cfg.extra["bethe_check"]:
        add("bethe_n0_and_n2", _bethe_check(regime), 1e-8)
    _emit(cfg, rows, VERIFY_COLUMNS, {"delta": regime.delta, "L": L})
    return EXIT_OK if all(r["passed"] for r in rows) else EXIT_VERIFY


def _bethe_check(regime: Regime, N: int = 2, beta: float = 0.2, J: float = 0.3, x: float = 0.1):
    """Largest distance of two Bethe eigenvalues (n = 0 and n = 2) from the dense six-vertex QTM."""
    from .bethe import (BetheState, continue_in_delta, eigenvalue, free_fermion_seeds,
                        solve_bethe_newton)
    from .operators import six_vertex_qtm
    if not regime.is_critical:
        return float("inf")
    ev = np.linalg.eigvals(six_vertex_qtm(x, N, beta, regime, 0.0, J))
    d0 = np.abs(ev - eigenvalue(x, BetheState((), N, beta, J, 0.0), regime)).min()
    ff = Regime.critical(np.pi / 2)
    st = solve_bethe_newton(2, N, beta, J, 0.0, ff, free_fermion_seeds(N, beta, J, 0.0))
    steps = max(1, int(np.ceil(abs(regime.delta) / 0.05)))
    path = np.linspace(0.0, regime.delta, steps + 1)[1:]
    if path.size:
        st = continue_in_delta(st, path)[-1][1]
    d2 = np.abs(ev - eigenvalue(x, st, regime)).min()
    return float(max(d0, d2))


def run_ed(cfg: RunConfig):
    from .operators import build_h_8v, build_h_irf, build_h_xxz
    regime = cfg.regime()
    L = cfg.extra["L"]
    model = cfg.extra["model"]
    if model == "irf":
        op = build_h_irf(L, regime.delta)
    elif model == "8v":
        op = build_h_8v(L, regime.delta, cfg.extra["gamma8v"])
    else:
        op = build_h_xxz(L, regime.delta, cfg.extra["phi"])
    w = np.linalg.eigvalsh(op.matrix)
    if cfg.extra["export"]:
        op.export_mm(cfg.extra["export"])
    rows = [{"index": i, "energy": float(e)} for i, e in enumerate(w)]
    _emit(cfg, rows, ED_COLUMNS, {"model": model, "L": L, "delta": regime.delta})
    return EXIT_OK


def run_fss(cfg: RunConfig):
    from .asymptotics import conformal_data
    from .spectra import finite_size_scan
    regime = cfg.regime()
    res = finite_size_scan(cfg.extra["sizes"], regime.delta)
    h_pred = conformal_data(regime.gamma).h_plus
    c = float("nan") if res.c_estimate is None else res.c_estimate
    rows = [{"L": L, "E0": e, "gap": g, "h_estimate": h, "c_estimate": c, "e_inf": res.e_inf,
             "velocity": res.velocity, "h_pred": h_pred}
            for L, e, g, h in zip(res.sizes, res.ground_energies, res.gaps, res.h_estimates)]
    _emit(cfg, rows, FSS_COLUMNS, {"delta": regime.delta})
    return EXIT_OK


def run(cfg: RunConfig) -> int:
    if cfg.subcommand == "thermo":
        return run_thermo_like(cfg, _thermo_chain, THERMO_COLUMNS)
    if cfg.subcommand == "corr":
        return run_thermo_like(cfg, _corr_chain, CORR_COLUMNS)
    return {"verify": run_verify, "ed": run_ed, "scan": run_scan, "fss": run_fss}[cfg.subcommand](cfg)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"ironface: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(cfg)
    except (ConvergenceFailure, FitFailure) as exc:
        print(f"ironface: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValueError, IronfaceError) as exc:
        print(f"ironface: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
