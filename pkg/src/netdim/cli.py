"""Command-line front end.

Subcommands: ``ccdf`` (analytic curves), ``simulate`` (Monte Carlo
estimates), ``design`` (inverse problems), ``compare`` (channel cost
comparison), ``figure`` (full data grids behind the numeric-results
figures).  Exit codes: 0 success, 2 invalid input, 3 numerical failure.

Decibel values appear only here; everything below this module works in
linear units (m^-2, meters, watts).  Scenario parameters may come from a
flat JSON config file (keys mirroring the SystemParams field names, with
the channel orders flattened to ``m_s``/``m_i``); explicit flags override
file values, and ``--dump-config`` writes the fully resolved set back out.

The NETPLAN_THREADS environment variable caps simulation parallelism
(0 or unset = automatic); NETPLAN_BACKEND picks the simulation kernel.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, analytic, design, figures, montecarlo
from .errors import DomainError, NetdimError, QuadratureError
from .manifest import RunManifest, render_csv, render_json
from .params import ChannelModel, SystemParams

_DEFAULT_BETA_RANGE = "-10:20:1"


def _dbm_to_watts(dbm: float) -> float:
    return 1e-3 * 10.0 ** (dbm / 10.0)


def _beta_db_grid(spec: str) -> np.ndarray:
    try:
        lo, hi, step = (float(tok) for tok in spec.split(":"))
    except ValueError:
        raise DomainError(f"expected lo:hi:step decibel range, got {spec!r}") from None
    if step <= 0 or hi < lo:
        raise DomainError(f"bad decibel range {spec!r}")
    return np.arange(lo, hi + step / 2.0, step)


def _add_scenario_args(parser: argparse.ArgumentParser):
    g = parser.add_argument_group("scenario")
    g.add_argument("--config", metavar="FILE", help="flat JSON config file")
    g.add_argument("--dump-config", metavar="FILE", help="write the resolved config")
    g.add_argument("--lambda-s-total", type=float, help="deployed sensor intensity per m^2 (default 1e-2)")
    g.add_argument("--rho", type=float, help="sensor activity probability (default 1e-4)")
    g.add_argument("--n-channels", type=int, help="random-access resources (default 1)")
    g.add_argument("--lambda-c", type=float, help="collector intensity per m^2")
    g.add_argument("--lc-over-ls", type=float, help="collector intensity as a multiple of the effective interferer intensity (default 10)")
    g.add_argument("--alpha", type=float, help="path-loss exponent, must exceed 2 (default 4)")
    g.add_argument("--m", type=int, help="fading order for both link kinds (default 1 = Rayleigh)")
    g.add_argument("--ms", type=int, help="fading order of the desired link")
    g.add_argument("--mi", type=int, help="fading order of the interfering links")
    g.add_argument("--noiseless", action="store_true", help="interference-limited: zero noise power")
    g.add_argument("--p-over-sigma2-db", type=float, help="transmit-to-noise power ratio in dB")
    g.add_argument("--tx-power-dbm", type=float, help="transmit power in dBm")
    g.add_argument("--noise-dbm", type=float, help="noise power in dBm")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise NetdimError("config file must contain a flat JSON object")
    return cfg


def _resolve_scenario(args, cfg: dict) -> tuple[SystemParams, dict]:
    def pick(key, flag, default):
        if flag is not None:
            return flag
        return cfg.get(key, default)

    lst = float(pick("lambda_s_total", args.lambda_s_total, 1e-2))
    rho = float(pick("rho", args.rho, 1e-4))
    n = int(pick("n_channels", args.n_channels, 1))
    m_default = args.m if args.m is not None else None
    m_s = int(args.ms if args.ms is not None else pick("m_s", m_default, 1))
    m_i = int(args.mi if args.mi is not None else pick("m_i", m_default, 1))
    alpha = float(pick("alpha", args.alpha, 4.0))

    lambda_s = lst * rho / n
    if args.lambda_c is not None:
        lambda_c = args.lambda_c
    elif args.lc_over_ls is not None:
        lambda_c = args.lc_over_ls * lambda_s
    elif "lambda_c" in cfg:
        lambda_c = float(cfg["lambda_c"])
    else:
        lambda_c = 10.0 * lambda_s

    if args.noiseless:
        tx, noise = 1.0, 0.0
    elif args.p_over_sigma2_db is not None:
        tx, noise = 1.0, 10.0 ** (-args.p_over_sigma2_db / 10.0)
    elif args.tx_power_dbm is not None or args.noise_dbm is not None:
        tx = _dbm_to_watts(args.tx_power_dbm) if args.tx_power_dbm is not None else float(cfg.get("tx_power", 1.0))
        noise = _dbm_to_watts(args.noise_dbm) if args.noise_dbm is not None else float(cfg.get("noise_power", 0.0))
    else:
        tx = float(cfg.get("tx_power", 1.0))
        noise = float(cfg.get("noise_power", 0.0))

    params = SystemParams(
        lambda_s_total=lst,
        rho=rho,
        n_channels=n,
        lambda_c=lambda_c,
        alpha=alpha,
        tx_power=tx,
        noise_power=noise,
        channel=ChannelModel(m_s, m_i),
    )
    echo = {
        "lambda_s_total": lst,
        "rho": rho,
        "n_channels": n,
        "lambda_c": lambda_c,
        "alpha": alpha,
        "tx_power": tx,
        "noise_power": noise,
        "m_s": m_s,
        "m_i": m_i,
    }
    return params, echo


def _maybe_dump_config(args, echo: dict):
    if getattr(args, "dump_config", None):
        with open(args.dump_config, "w", encoding="utf-8") as fh:
            json.dump(echo, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit(args, manifest: RunManifest, columns, rows):
    _write_text(getattr(args, "out", "-"), render_csv(manifest, columns, rows))
    if getattr(args, "json_out", None):
        _write_text(args.json_out, render_json(manifest, columns, rows))


def _cmd_ccdf(args) -> int:
    cfg = _load_config(args.config)
    params, echo = _resolve_scenario(args, cfg)
    method = args.method if args.method is not None else cfg.get("method", "auto")
    range_spec = args.beta_db_range or cfg.get("beta_db_range", _DEFAULT_BETA_RANGE)
    grid_db = _beta_db_grid(range_spec)
    echo.update(method=method, beta_db_range=range_spec)
    _maybe_dump_config(args, echo)
    curve = analytic.ccdf_curve(params, 10.0 ** (grid_db / 10.0), method=method)
    rows = [
        (float(db), float(c), float(1.0 - c), curve.provenance)
        for db, c in zip(grid_db, curve.ccdf)
    ]
    manifest = RunManifest(subcommand="ccdf", config_echo=echo)
    _emit(args, manifest, ["beta_db", "ccdf", "outage", "method"], rows)
    return 0


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    params, echo = _resolve_scenario(args, cfg)
    trials = int(args.trials if args.trials is not None else cfg.get("trials", 100_000))
    seed = int(args.seed if args.seed is not None else cfg.get("seed", 42))
    window = args.window_radius if args.window_radius is not None else cfg.get("window_radius")
    config = montecarlo.SimConfig(
        params=params,
        trials=trials,
        seed=seed,
        window_radius=window,
        antithetic=bool(args.antithetic or cfg.get("antithetic", False)),
        no_fading=bool(args.no_fading or cfg.get("no_fading", False)),
        full_geometry=bool(args.full_geometry or cfg.get("full_geometry", False)),
    )
    range_spec = args.beta_db_range or cfg.get("beta_db_range", _DEFAULT_BETA_RANGE)
    grid_db = _beta_db_grid(range_spec)
    backend = montecarlo.resolve_backend(args.backend)
    echo.update(
        trials=trials,
        seed=seed,
        window_radius=config.resolved_window_radius,
        antithetic=config.antithetic,
        no_fading=config.no_fading,
        full_geometry=config.full_geometry,
        beta_db_range=range_spec,
        backend=backend,
    )
    _maybe_dump_config(args, echo)
    manifest = RunManifest(subcommand="simulate", config_echo=echo, seed=seed)

    sinr = montecarlo.sample_sinr(config, backend=backend)
    rows = []
    for db in grid_db:
        beta = 10.0 ** (db / 10.0)
        est = montecarlo._outage_from_samples(sinr, beta, config)
        rows.append((float(db), 1.0 - est.outage, est.outage, est.ci_halfwidth_95))
    _emit(args, manifest, ["beta_db", "ccdf", "outage", "ci_halfwidth_95"], rows)

    if args.dump_samples:
        with open(args.dump_samples, "w", encoding="utf-8") as fh:
            for line in manifest.comment_lines():
                fh.write(line + "\n")
            fh.write("# sinr_db, one sample per line\n")
            with np.errstate(divide="ignore"):
                for v in 10.0 * np.log10(sinr):
                    fh.write(f"{float(v)!r}\n")
    return 0


def _cmd_design(args) -> int:
    cfg = _load_config(args.config)
    params, echo = _resolve_scenario(args, cfg)
    epsilon = args.epsilon if args.epsilon is not None else cfg.get("epsilon_t")
    if epsilon is None:
        raise NetdimError("design requires --epsilon (target outage probability)")
    beta_db = args.beta_db if args.beta_db is not None else cfg.get("beta_t_db", 0.0)
    target = design.DesignTarget(beta_t=10.0 ** (beta_db / 10.0), epsilon_t=float(epsilon))
    lam_s = params.lambda_s

    merit = None
    if args.with_power:
        if params.noise_power <= 0:
            raise NetdimError("--with-power needs a positive noise power (--noise-dbm)")
        req = design.plan_deployment(
            lam_s, params.noise_power, target, alpha=params.alpha, c=args.c
        )
        merit = design.noise_figure_of_merit(lam_s, params.noise_power, req.tx_power)
    elif params.noiseless:
        req = design.required_lambda_c_sir(lam_s, params.alpha, target)
    else:
        if params.alpha != 4.0:
            raise NetdimError(
                "the noisy density bound requires a path-loss exponent of 4; "
                "use --noiseless or --with-power for other exponents"
            )
        req = design.required_lambda_c_sinr(lam_s, params.sigma_tilde_sq, target)
        merit = design.noise_figure_of_merit(lam_s, params.noise_power, params.tx_power)

    echo.update(epsilon_t=target.epsilon_t, beta_t_db=beta_db)
    if args.with_power:
        echo.update(design_c=args.c)
    _maybe_dump_config(args, echo)
    manifest = RunManifest(subcommand="design", config_echo=echo)
    doc = {
        "manifest": manifest.__dict__,
        "requirement": {
            "lambda_c_min": req.lambda_c_min,
            "lambda_c_min_over_lambda_s": req.lambda_c_min / lam_s,
            "kind": req.kind,
            "tx_power_w": req.tx_power,
            "design_c": req.design_c,
            "noise_figure_of_merit": merit,
        },
    }
    _write_text(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_compare(args) -> int:
    cfg = _load_config(args.config)
    params, echo = _resolve_scenario(args, cfg)
    beta_db = args.beta_db if args.beta_db is not None else cfg.get("beta_t_db", 0.0)
    beta_t = 10.0 ** (beta_db / 10.0)
    if args.outage_rayleigh is not None or args.outage_other is not None:
        if args.outage_rayleigh is None or args.outage_other is None:
            raise NetdimError("--outage-rayleigh and --outage-other go together")
        eps_o, eps_m = args.outage_rayleigh, args.outage_other
        source = "explicit outage values"
    else:
        # Interference-limited comparison: the examined channel against a
        # Rayleigh reference under the same deployment.
        eps_o = 1.0 - analytic.sir_ccdf_rayleigh(params, beta_t)
        eps_m = 1.0 - analytic.sir_ccdf_nakagami(params, beta_t)
        source = "interference-limited closed forms"
    ratio = design.channel_density_ratio(eps_o, eps_m)
    echo.update(beta_t_db=beta_db)
    _maybe_dump_config(args, echo)
    manifest = RunManifest(subcommand="compare", config_echo=echo)
    doc = {
        "manifest": manifest.__dict__,
        "comparison": {
            "outage_rayleigh": eps_o,
            "outage_other": eps_m,
            "density_ratio": ratio,
            "source": source,
        },
    }
    _write_text(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_figure(args) -> int:
    import os

    backend = montecarlo.resolve_backend(args.backend)
    columns, rows, extra = figures.build_figure(args.name, args.trials, args.seed, backend)
    extra["backend"] = backend
    manifest = RunManifest(subcommand=f"figure {args.name}", config_echo=extra, seed=args.seed)
    os.makedirs(args.outdir, exist_ok=True)
    path = os.path.join(args.outdir, f"{args.name}.csv")
    _write_text(path, render_csv(manifest, columns, rows))
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netdim",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"netdim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ccdf = sub.add_parser(
        "ccdf",
        help="analytic CCDF/outage curve over a threshold grid",
        description="Columns: beta_db (threshold, dB), ccdf = Pr{SINR > beta}, "
        "outage = 1 - ccdf, method (formula used).",
    )
    _add_scenario_args(p_ccdf)
    p_ccdf.add_argument("--beta-db-range", metavar="LO:HI:STEP", help=f"threshold grid in dB (default {_DEFAULT_BETA_RANGE})")
    p_ccdf.add_argument("--method", choices=["auto", "closed_form", "general_integral"], help="formula selection (default auto)")
    p_ccdf.add_argument("--out", default="-", help="CSV output path ('-' = stdout)")
    p_ccdf.add_argument("--json-out", help="also write a JSON mirror")
    p_ccdf.set_defaults(handler=_cmd_ccdf)

    p_sim = sub.add_parser(
        "simulate",
        help="Monte Carlo outage estimates over a threshold grid",
        description="Columns: beta_db, ccdf, outage, ci_halfwidth_95 "
        "(95% normal-approximation halfwidth).  One sample set is shared "
        "across all thresholds; results are bit-reproducible from the seed.",
    )
    _add_scenario_args(p_sim)
    p_sim.add_argument("--beta-db-range", metavar="LO:HI:STEP", help=f"threshold grid in dB (default {_DEFAULT_BETA_RANGE})")
    p_sim.add_argument("--trials", type=int, help="number of trials (default 100000)")
    p_sim.add_argument("--seed", type=int, help="RNG seed (default 42)")
    p_sim.add_argument("--window-radius", type=float, help="interferer window radius in m (default: automatic rule)")
    p_sim.add_argument("--antithetic", action="store_true", help="antithetic trial pairs")
    p_sim.add_argument("--no-fading", action="store_true", help="freeze all fading gains at 1")
    p_sim.add_argument("--full-geometry", action="store_true", help="instantiate the collector field instead of sampling the nearest-distance law")
    p_sim.add_argument("--backend", choices=["auto", "numba", "numpy"], help="simulation kernel (default: NETPLAN_BACKEND or auto)")
    p_sim.add_argument("--dump-samples", metavar="FILE", help="write one SINR sample (dB) per line with a config header")
    p_sim.add_argument("--out", default="-", help="CSV output path ('-' = stdout)")
    p_sim.add_argument("--json-out", help="also write a JSON mirror")
    p_sim.set_defaults(handler=_cmd_simulate)

    p_des = sub.add_parser(
        "design",
        help="required collector intensity (and optionally transmit power)",
        description="Emits JSON with lambda_c_min, the bound kind, the "
        "designed power when --with-power is given, and the noise-neglect "
        "figure of merit (values well below 1 mean noise is negligible).",
    )
    _add_scenario_args(p_des)
    p_des.add_argument("--epsilon", type=float, help="target outage probability in (0, 1)")
    p_des.add_argument("--beta-db", type=float, help="required SINR threshold in dB (default 0)")
    p_des.add_argument("--with-power", action="store_true", help="two-step plan: pick transmit power first, then density")
    p_des.add_argument("--c", type=float, default=0.1, help="power design constant in (0, 1) (default 0.1)")
    p_des.add_argument("--out", default="-", help="JSON output path ('-' = stdout)")
    p_des.set_defaults(handler=_cmd_design)

    p_cmp = sub.add_parser(
        "compare",
        help="equivalent-density cost of a channel model vs Rayleigh",
        description="Feeds two outage probabilities (computed from the "
        "interference-limited closed forms, or given explicitly) into the "
        "equivalent-deployment ratio; above 1 means the examined channel "
        "needs fewer collectors than Rayleigh.",
    )
    _add_scenario_args(p_cmp)
    p_cmp.add_argument("--beta-db", type=float, help="SIR threshold in dB (default 0)")
    p_cmp.add_argument("--outage-rayleigh", type=float, help="measured reference outage in (0, 1)")
    p_cmp.add_argument("--outage-other", type=float, help="measured examined-channel outage in (0, 1)")
    p_cmp.add_argument("--out", default="-", help="JSON output path ('-' = stdout)")
    p_cmp.set_defaults(handler=_cmd_compare)

    p_fig = sub.add_parser(
        "figure",
        help="emit the data grid behind a numeric-results figure",
        description="Writes <name>.csv into --outdir.  fig3/6/7 are CCDF "
        "grids (analytic + simulated series); fig4/5/8/9 are design sweeps. "
        "Sweep grids not tabulated by the source material are package "
        "conventions: intensity ratios geomspace(2, 50, 25), thresholds "
        "-10..20 dB step 0.5.  The deployment illustration (fig2) has no "
        "quantitative content and is not emitted.",
    )
    p_fig.add_argument("name", choices=sorted(figures.FIGURES), help="figure name")
    p_fig.add_argument("--outdir", default=".", help="output directory (default .)")
    p_fig.add_argument("--trials", type=int, default=100_000, help="trials per simulated series (default 100000)")
    p_fig.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")
    p_fig.add_argument("--backend", choices=["auto", "numba", "numpy"], help="simulation kernel")
    p_fig.set_defaults(handler=_cmd_figure)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except QuadratureError as exc:
        print(f"netdim: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (NetdimError, ValueError, OSError) as exc:
        print(f"netdim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
