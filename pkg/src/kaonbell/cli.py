"""Command-line interface wiring all modules together.

Exit codes: 0 ok, 1 domain or numeric failure, 2 usage error.  Output
files carry metadata headers (tool version, effective constants, seed);
the KAONBELL_OUTDIR environment variable prefixes relative output paths.
"""

from __future__ import annotations

import json
import math
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import diagrams, plotting, reporting
from .bell import BellConfiguration, s_value
from .bipartite import (
    PureTwoKaonState,
    evolve_bipartite,
    expectation_closed_form,
    expectation_matrix,
    named_state,
    purity_bipartite,
)
from .entanglement import concurrence_closed_form, wootters_concurrence
from .exceptions import ConfigurationError, KaonBellError
from .optimizer import SearchSpace, maximize_s, maximize_s_fixed_state
from .params import MesonParameters, preset, preset_names
from .single_kaon import (
    QuasiSpin,
    SingleKaonInitial,
    evolve_single,
    purity_minimum_time,
    purity_single,
)

_INITIALS = {
    "KS": SingleKaonInitial.ks,
    "KL": SingleKaonInitial.kl,
    "K0": SingleKaonInitial.k0,
    "K0bar": SingleKaonInitial.k0bar,
}

_QUASISPINS = {
    "K0bar": QuasiSpin.k0bar,
    "K0": QuasiSpin.k0,
    "KS": QuasiSpin.ks,
    "KL": QuasiSpin.kl,
}


def _read_config(path: str) -> dict[str, float | str]:
    """Flat key = value file; '#' starts a comment."""
    values: dict[str, float | str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"bad config line: {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if key == "preset":
            values[key] = val
        else:
            values[key] = float(val)
    return values


def _resolve_params(
    preset_name: str,
    config: str | None,
    gamma_s: float | None,
    gamma_l: float | None,
    delta_m: float | None,
) -> MesonParameters:
    cfg = _read_config(config) if config else {}
    name = str(cfg.get("preset", preset_name))
    gs = gamma_s if gamma_s is not None else cfg.get("gamma_S")
    gl = gamma_l if gamma_l is not None else cfg.get("gamma_L")
    dm = delta_m if delta_m is not None else cfg.get("delta_m")
    if name == "custom":
        gs = 1.0 if gs is None else gs
        if gl is None or dm is None:
            raise ConfigurationError(
                "custom preset needs gamma_L and delta_m (flag or config file)"
            )
    return preset(name, gamma_s=gs, gamma_l=gl, delta_m=dm)


def _resolve_state(spec: str) -> PureTwoKaonState:
    """Named state or path to a JSON file with fields r[4], phi[4]."""
    if os.path.exists(spec) or spec.endswith(".json"):
        data = json.loads(Path(spec).read_text(encoding="utf-8"))
        return PureTwoKaonState(tuple(data["r"]), tuple(data.get("phi", [0.0] * 4)))
    return named_state(spec)


def _out_path(out: str) -> Path:
    path = Path(out)
    outdir = os.environ.get("KAONBELL_OUTDIR")
    if outdir and not path.is_absolute():
        path = Path(outdir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _echo_json(payload: dict) -> None:
    click.echo(reporting.dump_json(payload))


_param_options = [
    click.option("--preset", "preset_name", default="kaon-paper",
                 show_default=True, help=f"one of {preset_names()}"),
    click.option("--config", type=click.Path(exists=True), default=None,
                 help="flat key=value file (gamma_S, gamma_L, delta_m, preset)"),
    click.option("--gamma-s", type=float, default=None, help="override gamma_S"),
    click.option("--gamma-l", type=float, default=None, help="override gamma_L"),
    click.option("--delta-m", type=float, default=None, help="override delta_m"),
]


def with_params(fn):
    for opt in reversed(_param_options):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Neutral-kaon open-system toolkit: purity, entanglement, Bell-CHSH."""


@main.command("evolve-single")
@with_params
@click.option("--initial", default="K0", show_default=True,
              help="KS | KL | K0 | K0bar | custom")
@click.option("--t", "t", type=float, required=True, help="time [tau_S]")
@click.option("--offdiag", type=click.Choice(["zero", "formal-X"]), default="zero",
              show_default=True)
@click.option("--rho-ss", type=float, default=None, help="custom initial rho_SS")
@click.option("--rho-sl-re", type=float, default=0.0)
@click.option("--rho-sl-im", type=float, default=0.0)
def evolve_single_cmd(preset_name, config, gamma_s, gamma_l, delta_m,
                      initial, t, offdiag, rho_ss, rho_sl_re, rho_sl_im):
    """Evolve a single kaon and print the 4x4 density matrix plus purity."""
    params = _resolve_params(preset_name, config, gamma_s, gamma_l, delta_m)
    if initial == "custom":
        if rho_ss is None:
            raise ConfigurationError("custom initial requires --rho-ss")
        init = SingleKaonInitial(rho_ss, 1.0 - rho_ss,
                                 complex(rho_sl_re, rho_sl_im))
    else:
        try:
            init = _INITIALS[initial]()
        except KeyError:
            raise ConfigurationError(
                f"unknown initial {initial!r}; choose from "
                f"{sorted(_INITIALS)} or 'custom'"
            ) from None
    state = evolve_single(init, t, params, offdiag_mode=offdiag)
    m = state.full_matrix()
    _echo_json(reporting.json_payload(
        {
            "t": t,
            "density_matrix_re": m.real,
            "density_matrix_im": m.imag,
            "purity": state.purity(),
            "total_trace": state.total_trace,
        },
        params,
        initial=initial,
        offdiag=offdiag,
    ))


@main.command("purity-scan")
@with_params
@click.option("--initial", default="K0", show_default=True)
@click.option("--t-max", type=float, default=10.0, show_default=True)
@click.option("--steps", type=int, default=200, show_default=True)
@click.option("--rho-ss", type=float, default=None)
@click.option("--rho-sl-re", type=float, default=0.0)
@click.option("--rho-sl-im", type=float, default=0.0)
@click.option("--out", default="purity_scan.csv", show_default=True)
@click.option("--plot", is_flag=True, help="also render a PNG next to the CSV")
def purity_scan_cmd(preset_name, config, gamma_s, gamma_l, delta_m,
                    initial, t_max, steps, rho_ss, rho_sl_re, rho_sl_im,
                    out, plot):
    """Emit (t, purity) CSV for a single kaon."""
    params = _resolve_params(preset_name, config, gamma_s, gamma_l, delta_m)
    if initial == "custom":
        if rho_ss is None:
            raise ConfigurationError("custom initial requires --rho-ss")
        init = SingleKaonInitial(rho_ss, 1.0 - rho_ss,
                                 complex(rho_sl_re, rho_sl_im))
    else:
        init = _INITIALS[initial]()
    ts = np.linspace(0.0, t_max, steps)
    ps = purity_single(init, ts, params)
    path = _out_path(out)
    reporting.write_csv(path, ["t", "purity"], zip(ts, ps), params,
                        initial=initial)
    click.echo(f"wrote {path}")
    if plot:
        fig_path = plotting.save_purity_scan(
            ts, ps, path.with_suffix(".png"), title=f"initial {initial}")
        click.echo(f"wrote {fig_path}")


@main.command("expectation")
@with_params
@click.option("--state", required=True, help="named state or JSON file")
@click.option("--tl", type=float, required=True)
@click.option("--tr", type=float, required=True)
@click.option("--path", "e_path", type=click.Choice(["closed", "matrix"]),
              default="closed", show_default=True)
def expectation_cmd(preset_name, config, gamma_s, gamma_l, delta_m,
                    state, tl, tr, e_path):
    """Antikaon-antikaon expectation value E(t_l, t_r)."""
    params = _resolve_params(preset_name, config, gamma_s, gamma_l, delta_m)
    psi = _resolve_state(state)
    if e_path == "closed":
        val = expectation_closed_form(psi, tl, tr, params)
    else:
        val = expectation_matrix(psi, QuasiSpin.k0bar(), QuasiSpin.k0bar(),
                                 tl, tr, params)
    _echo_json(reporting.json_payload(
        {"E": val, "t_l": tl, "t_r": tr, "path": e_path}, params, state=state))


@main.command("concurrence")
@with_params
@click.option("--state", required=True)
@click.option("--tl", type=float, required=True)
@click.option("--tr", type=float, required=True)
@click.option("--method", type=click.Choice(["wootters", "closed"]),
              default="closed", show_default=True)
def concurrence_cmd(preset_name, config, gamma_s, gamma_l, delta_m,
                    state, tl, tr, method):
    """Concurrence of the surviving block at (t_l, t_r)."""
    params = _resolve_params(preset_name, config, gamma_s, gamma_l, delta_m)
    psi = _resolve_state(state)
    if method == "closed":
        val = concurrence_closed_form(psi, tl, tr, params)
    else:
        block = evolve_bipartite(psi, tl, tr, params).ssss
        val = wootters_concurrence(block).value
    _echo_json(reporting.json_payload(
        {"concurrence": val, "t_l": tl, "t_r": tr, "method": method},
        params, state=state))


@main.command("bell-eval")
@with_params
@click.option("--state", required=True)
@click.option("--times", required=True, help="t1,t2,t3,t4 [tau_S]")
@click.option("--quasispins", default=None,
              help="four comma-separated names, e.g. K0bar,K0bar,K0bar,K0bar")
@click.option("--path", "s_path", type=click.Choice(["closed", "matrix"]),
              default="closed", show_default=True)
def bell_eval_cmd(preset_name, config, gamma_s, gamma_l, delta_m,
                  state, times, quasispins, s_path):
    """CHSH S value for the given state, times and quasi-spins."""
    params = _resolve_params(preset_name, config, gamma_s, gamma_l, delta_m)
    psi = _resolve_state(state)
    try:
        t1, t2, t3, t4 = (float(x) for x in times.split(","))
    except ValueError:
        raise ConfigurationError("--times must be four comma-separated numbers")
    if quasispins:
        names = [x.strip() for x in quasispins.split(",")]
        if len(names) != 4:
            raise ConfigurationError("--quasispins needs four names")
        try:
            qs = tuple(_QUASISPINS[n]() for n in names)
        except KeyError as exc:
            raise ConfigurationError(
                f"unknown quasi-spin {exc.args[0]!r}; choose from "
                f"{sorted(_QUASISPINS)}"
            ) from None
        cfg = BellConfiguration(t1, t2, t3, t4, quasispins=qs)
        if s_path == "closed" and not cfg.all_antikaon():
            s_path = "matrix"
    else:
        cfg = BellConfiguration(t1, t2, t3, t4)
    val = s_value(psi, cfg, params, path=s_path)
    _echo_json(reporting.json_payload(
        {"S": val, "times": [t1, t2, t3, t4], "path": s_path},
        params, state=state))


@main.command("bell-optimize")
@with_params
@click.option("--fix-state", default=None,
              help="freeze the state (named or JSON file); search times only")
@click.option("--free-phases", is_flag=True)
@click.option("--starts", type=int, default=200, show_default=True)
@click.option("--budget", type=int, default=200_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--t-max", type=float, default=50.0, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True,
              help="process-parallel starts")
@click.option("--out", default=None, help="also write the result JSON here")
def bell_optimize_cmd(preset_name, config, gamma_s, gamma_l, delta_m,
                      fix_state, free_phases, starts, budget, seed, t_max,
                      threads, out):
    """Multi-start maximization of the strangeness CHSH S value."""
    params = _resolve_params(preset_name, config, gamma_s, gamma_l, delta_m)
    if fix_state:
        result = maximize_s_fixed_state(
            _resolve_state(fix_state), params, budget=budget, seed=seed,
            n_starts=starts, t_max=t_max)
    else:
        space = SearchSpace(t_max=t_max, free_phases=free_phases)
        result = maximize_s(space, params, budget=budget, seed=seed,
                            n_starts=starts, n_jobs=threads)
    payload = reporting.json_payload(result.as_dict(), params, seed=seed)
    if out:
        path = _out_path(out)
        path.write_text(reporting.dump_json(payload) + "\n", encoding="utf-8")
        click.echo(f"wrote {path}")
    _echo_json(payload)


@main.command("trajectory")
@with_params
@click.option("--state", required=True)
@click.option("--scenario", type=click.Choice(diagrams.SCENARIOS),
              default="equal-times", show_default=True)
@click.option("--t-end", type=float, default=100.0, show_default=True)
@click.option("--step", type=float, default=0.05, show_default=True)
@click.option("--out", default="trajectory.csv", show_default=True)
@click.option("--plot", is_flag=True)
def trajectory_cmd(preset_name, config, gamma_s, gamma_l, delta_m,
                   state, scenario, t_end, step, out, plot):
    """Purity/concurrence trajectory CSV (both concurrence conventions)."""
    params = _resolve_params(preset_name, config, gamma_s, gamma_l, delta_m)
    psi = _resolve_state(state)
    points = diagrams.trajectory(psi, scenario, params, t_end=t_end, step=step)
    path = _out_path(out)
    reporting.write_csv(
        path,
        ["t", "purity_raw", "purity_norm", "concurrence_raw",
         "concurrence_renorm"],
        ((p.t, p.purity_raw, p.purity_norm, p.concurrence_raw,
          p.concurrence_renorm) for p in points),
        params,
        state=state,
        scenario=scenario,
        concurrence_convention="raw and block-trace renormalized",
    )
    click.echo(f"wrote {path}")
    if plot:
        fig_path = plotting.save_trajectory(
            points, path.with_suffix(".png"),
            title=f"{state}, {scenario}")
        click.echo(f"wrote {fig_path}")


@main.command("curves")
@with_params
@click.option("--which", type=click.Choice(["mems", "werner", "s"]),
              required=True)
@click.option("--n-points", type=int, default=200, show_default=True)
@click.option("--state", default=None, help="for --which s")
@click.option("--times", default=None, help="optimal t1,t2,t3,t4 for --which s")
@click.option("--out", default=None)
@click.option("--plot", is_flag=True)
def curves_cmd(preset_name, config, gamma_s, gamma_l, delta_m,
               which, n_points, state, times, out, plot):
    """Reference curves (MEMS, Werner) or an S-versus-time path."""
    params = _resolve_params(preset_name, config, gamma_s, gamma_l, delta_m)
    path = _out_path(out or f"{which}_curve.csv")
    if which == "s":
        if not state or not times:
            raise ConfigurationError("--which s requires --state and --times")
        psi = _resolve_state(state)
        topt = tuple(float(x) for x in times.split(","))
        if len(topt) != 4:
            raise ConfigurationError("--times must be four comma-separated numbers")
        rows = diagrams.s_curve(psi, topt, params, n_points=n_points)
        reporting.write_csv(path, ["u", "S"], rows, params, state=state,
                            times_opt=times,
                            path_convention="times(u) = u * times_opt")
        click.echo(f"wrote {path}")
        if plot:
            click.echo(f"wrote {plotting.save_s_curve(rows, path.with_suffix('.png'), title=state)}")
        return
    curve = (diagrams.mems_curve if which == "mems" else diagrams.werner_curve)(
        n_points)
    reporting.write_csv(path, ["purity_norm_d4", "concurrence"], curve, params,
                        family=which)
    click.echo(f"wrote {path}")
    if plot:
        click.echo(f"wrote {plotting.save_reference_curves(path.with_suffix('.png'))}")


@main.command("reproduce")
@with_params
@click.option("--strict", is_flag=True, help="exit 1 if any check fails")
@click.option("--samples", type=int, default=200, show_default=True,
              help="random draws for the oracle-equivalence checks")
@click.option("--seed", type=int, default=0, show_default=True)
def reproduce_cmd(preset_name, config, gamma_s, gamma_l, delta_m,
                  strict, samples, seed):
    """Re-derive the headline numbers and print a pass/fail table."""
    params = _resolve_params(preset_name, config, gamma_s, gamma_l, delta_m)
    rows: list[tuple[str, float, float, float, bool]] = []

    def check(name, value, expected, tol):
        rows.append((name, value, expected, tol, abs(value - expected) <= tol))

    xi, chi = named_state("xi"), named_state("chi")
    check("S(xi) at t=(0,0,5.77,5.77)",
          s_value(xi, BellConfiguration(0, 0, 5.77, 5.77), params),
          2.1175, 0.03)
    check("S(chi) at t=(1.79,1.79,0,0)",
          s_value(chi, BellConfiguration(1.79, 1.79, 0, 0), params),
          2.1596, 0.03)

    t_ks, val_ks = purity_minimum_time(SingleKaonInitial.ks(), params, t_max=5.0)
    check("purity min (K_S), value", val_ks, 0.5, 1e-6)
    check("purity min (K_S), time", t_ks, math.log(2.0), 1e-5)
    t_k0, val_k0 = purity_minimum_time(SingleKaonInitial.k0(), params)
    check("purity min (K0), value", val_k0, 0.375, 1e-4)
    check("purity min (K0), time", t_k0, math.log(2.0) / params.gamma_l, 0.5)

    from .single_kaon import global_purity_minimum
    _, _, val_mixed = global_purity_minimum(params, n_starts=12, seed=seed)
    check("purity min (mixed)", val_mixed, 0.333068, 5e-5)

    rng = np.random.default_rng(seed)
    worst_e = worst_c = 0.0
    for _ in range(samples):
        v = rng.normal(size=4)
        psi = PureTwoKaonState(tuple(v / np.linalg.norm(v)),
                               tuple(rng.uniform(-math.pi, math.pi, 4)))
        tl, tr = rng.uniform(0.0, 8.0, 2)
        worst_e = max(worst_e, abs(
            expectation_closed_form(psi, tl, tr, params)
            - expectation_matrix(psi, QuasiSpin.k0bar(), QuasiSpin.k0bar(),
                                 tl, tr, params)))
        block = evolve_bipartite(psi, tl, tr, params).ssss
        worst_c = max(worst_c, abs(
            wootters_concurrence(block).value
            - concurrence_closed_form(psi, tl, tr, params)))
    check("E closed vs matrix (max |diff|)", worst_e, 0.0, 1e-10)
    check("C closed vs Wootters (max |diff|)", worst_c, 0.0, 1e-10)

    width = max(len(r[0]) for r in rows)
    failures = 0
    for name, value, expected, tol, ok in rows:
        status = "PASS" if ok else "FAIL"
        failures += not ok
        click.echo(f"{status}  {name:<{width}}  value={reporting.fmt(value):<18}"
                   f" expected={reporting.fmt(expected)} tol={reporting.fmt(tol)}")
    click.echo(f"{len(rows) - failures}/{len(rows)} checks passed "
               f"(preset {params.label})")
    if strict and failures:
        sys.exit(1)


def cli_entry() -> None:  # pragma: no cover
    main()


# map package errors to exit code 1 while keeping click's 2 for usage errors
_original_main = main.main


def _main_wrapper(*args, **kwargs):
    standalone = kwargs.pop("standalone_mode", True)
    try:
        return _original_main(*args, standalone_mode=False, **kwargs)
    except click.exceptions.Abort:
        sys.exit(130)
    except click.exceptions.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except KaonBellError as exc:
        click.echo(f"error: {exc}", err=True)
        if not standalone:
            raise
        sys.exit(1)
    else:  # pragma: no cover
        pass


main.main = _main_wrapper

if __name__ == "__main__":  # pragma: no cover
    main()
