"""Command-line front end: one subcommand per data product.

Every command writes CSV tables (``#`` comment header with column units)
and, where the result is structured, JSON. Energies and frequencies are
emitted in units of omega, times in field periods.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._jit import BACKEND
from .bloch_siegert import bs_sweep
from .dynamics import (
    evolve_closed_form,
    evolve_numeric,
    evolve_operator,
    evolve_rwa,
    reconcile_closed_form,
)
from .effective_model import ModelParams, crossing_amplitude, effective, ep_boundary, quasi_energies
from .errors import ConfigError, NhrabiError
from .floquet import FloquetConfig, classify, first_broken_amp, scan_phase, spectrum
from .io import resolve_out_dir, write_csv, write_error_log, write_json
from .spectral import extract_peaks, fourier_spectrum, label_peaks

log = logging.getLogger("nhrabi")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2, 3

# (delta / omega, A / omega)
PRESETS = {
    "A": (2.5, 1.0),
    "B": (3.5, 3.0),
    "C": (2.5, 4.0),
    "appB-4": (4.0, 2.0),
    "appB-5": (5.0, 2.0),
    "appB-6": (6.0, 2.0),
}

COMMON_DEFAULTS = {
    "omega": 1.0,
    "delta": 2.5,
    "amp": 1.0,
    "out": None,
    "harmonics": 64,
    "workers": None,
    "hermitian": False,
    "preset": None,
}

COMMAND_DEFAULTS = {
    "spectrum": {"amp_range": [0.0, 6.0], "amp_steps": 121, "shifts": 2, "eps_window": 3.0},
    "phase-diagram": {"delta_range": [0.0, 3.0], "amp_range": [0.0, 6.0], "resolution": [121, 121]},
    "dynamics": {"t_end": 10.0, "samples": 1024, "tol": 1e-10},
    "fourier": {
        "t_end": 50.0,
        "samples": 4096,
        "tol": 1e-10,
        "threshold": 0.05,
        "label_tol": 0.05,
        "max_n": 2,
        "window": "rect",
        "detrend": False,
    },
    "bs-shift": {"amp_range": [0.0, 5.0], "amp_steps": 26},
}

EPILOG = """\
settings precedence: command-line flags > --config file > --preset > built-in defaults.
--delta and --amp are in the units of --omega; ranges (--amp-range, --delta-range)
are in units of omega. The output directory is --out, else $NHRABI_OUT_DIR, else the
config file's "out", else ./nhrabi_out.
exit codes: 0 success, 1 computation failed, 2 invalid configuration,
3 partial failure (see the *_errors.log file next to the outputs).
"""


# --- argument parsing -------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("shared options")
    g.add_argument("--omega", type=float, help="drive frequency (default 1)")
    g.add_argument("--delta", type=float, help="atomic frequency, units of --omega")
    g.add_argument("--amp", type=float, help="coupling strength, units of --omega")
    g.add_argument("--config", type=Path, help="JSON file with any of the option names as keys")
    g.add_argument("--out", help="output directory")
    g.add_argument("--harmonics", type=int, help="Floquet truncation N, Fourier modes -N..N (default 64)")
    g.add_argument("--workers", type=int, help="worker processes for grid sweeps (default: CPU count)")
    g.add_argument("--hermitian", action="store_true", default=None, help="use real coupling A/4 (Hermitian counterpart)")
    g.add_argument("--preset", choices=sorted(PRESETS), help="named parameter point, sets delta and amp")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="nhrabi",
        description="Quasi-energies, phase diagrams and dynamics of a qubit with imaginary cosine coupling.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text, epilog=EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        return p

    p = add("spectrum", "Floquet and analytic quasi-energies along an amplitude sweep at fixed delta.")
    p.add_argument("--amp-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--amp-steps", type=int)
    p.add_argument("--shifts", type=int, help="emit analytic levels shifted by m omega, |m| <= SHIFTS")
    p.add_argument("--eps-window", type=float, help="keep Floquet levels with |Re eps| <= this (units of omega)")
    p.set_defaults(func=cmd_spectrum)

    p = add("phase-diagram", "PT phase over a (delta, A) grid with analytic boundary overlays.")
    p.add_argument("--delta-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--amp-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int, nargs="+", metavar="N", help="points per axis, or N_DELTA N_AMP")
    p.set_defaults(func=cmd_phase_diagram)

    p = add("dynamics", "Excited-state population by integration, analytic routes and RWA.")
    p.add_argument("--t-end", type=float, help="window length in field periods")
    p.add_argument("--samples", type=int)
    p.add_argument("--tol", type=float, help="integrator tolerance")
    p.set_defaults(func=cmd_dynamics)

    p = add("fourier", "Fourier spectra of the population with labelled peaks.")
    p.add_argument("--t-end", type=float, help="window length in field periods")
    p.add_argument("--samples", type=int)
    p.add_argument("--tol", type=float, help="integrator tolerance")
    p.add_argument("--threshold", type=float, help="relative peak threshold")
    p.add_argument("--label-tol", type=float, help="labelling tolerance, units of omega")
    p.add_argument("--max-n", type=int, help="largest k in the 2k omega +- 2 Omega_R candidates")
    p.add_argument("--window", choices=("rect", "hann"))
    p.add_argument("--detrend", action="store_true", default=None, help="subtract a fitted exponential first")
    p.set_defaults(func=cmd_fourier)

    p = add("bs-shift", "Resonance position versus amplitude: numeric, analytic and series.")
    p.add_argument("--amp-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--amp-steps", type=int)
    p.set_defaults(func=cmd_bs_shift)
    return parser


# --- settings -----------------------------------------------------------------


def _load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _number(settings, name, integer=False):
    v = settings[name]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(name, f"expected a number, got {v!r}")
    if integer and int(v) != v:
        raise ConfigError(name, f"expected an integer, got {v!r}")
    if not np.isfinite(v):
        raise ConfigError(name, "must be finite")
    return int(v) if integer else float(v)


def _range(settings, name):
    v = settings[name]
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ConfigError(name, f"expected [lo, hi], got {v!r}")
    lo, hi = (_number({name: x}, name) for x in v)
    if not hi > lo:
        raise ConfigError(name, f"empty range [{lo}, {hi}]")
    return [lo, hi]


def resolve_settings(args: argparse.Namespace) -> dict:
    """Merge defaults, preset, config file and flags, then validate."""
    command = args.command
    defaults = {**COMMON_DEFAULTS, **COMMAND_DEFAULTS[command]}
    config = _load_config(args.config)
    unknown = sorted(set(config) - set(defaults))
    if unknown:
        raise ConfigError(unknown[0], f"unknown option for '{command}'")
    flags = {k: v for k, v in vars(args).items() if k in defaults and v is not None}

    s = dict(defaults)
    preset = flags.get("preset", config.get("preset"))
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        s["preset"] = preset
    s.update(config)
    s.update(flags)
    s["omega"] = _number(s, "omega")
    if s["omega"] <= 0:
        raise ConfigError("omega", "must be positive")
    if preset is not None:
        d, a = PRESETS[preset]
        # the preset fills delta/amp unless given explicitly
        if "delta" not in flags and "delta" not in config:
            s["delta"] = d * s["omega"]
        if "amp" not in flags and "amp" not in config:
            s["amp"] = a * s["omega"]
    return validate(command, s)


def validate(command: str, s: dict) -> dict:
    for name in ("delta", "amp"):
        s[name] = _number(s, name)
        if s[name] < 0:
            raise ConfigError(name, "must be non-negative")
    s["harmonics"] = _number(s, "harmonics", integer=True)
    if s["harmonics"] < 8:
        raise ConfigError("harmonics", "must be at least 8")
    if s["workers"] is None:
        s["workers"] = os.cpu_count() or 1
    s["workers"] = _number(s, "workers", integer=True)
    if s["workers"] < 1:
        raise ConfigError("workers", "must be at least 1")
    s["hermitian"] = bool(s["hermitian"])
    for name in ("amp_range", "delta_range"):
        if name in s:
            s[name] = _range(s, name)
    for name in ("amp_steps", "samples"):
        if name in s:
            s[name] = _number(s, name, integer=True)
            if s[name] < 2:
                raise ConfigError(name, "must be at least 2")
    if "resolution" in s:
        r = s["resolution"]
        r = [r] if not isinstance(r, (list, tuple)) else list(r)
        if len(r) == 1:
            r = r * 2
        if len(r) != 2:
            raise ConfigError("resolution", "give one or two point counts")
        r = [_number({"resolution": x}, "resolution", integer=True) for x in r]
        if min(r) < 2:
            raise ConfigError("resolution", "must be at least 2 per axis")
        s["resolution"] = r
    for name in ("t_end", "tol", "eps_window", "label_tol"):
        if name in s:
            s[name] = _number(s, name)
            if s[name] <= 0:
                raise ConfigError(name, "must be positive")
    for name in ("shifts", "max_n"):
        if name in s:
            s[name] = _number(s, name, integer=True)
            if s[name] < 0:
                raise ConfigError(name, "must be non-negative")
    if "threshold" in s:
        s["threshold"] = _number(s, "threshold")
        if not 0 < s["threshold"] < 1:
            raise ConfigError("threshold", "must lie in (0, 1)")
    if "window" in s and s["window"] not in ("rect", "hann"):
        raise ConfigError("window", "must be 'rect' or 'hann'")
    if "detrend" in s:
        s["detrend"] = bool(s["detrend"])
    return s


def _floquet_cfg(s) -> FloquetConfig:
    return FloquetConfig(n_harmonics=s["harmonics"], hermitian_mode=s["hermitian"])


def _params(s) -> ModelParams:
    return ModelParams(s["delta"], s["amp"], s["omega"])


def _meta(command: str, s: dict) -> dict:
    keep = {k: v for k, v in s.items() if k not in ("out", "workers")}
    return {"command": command, "version": __version__, "backend": BACKEND,
            "settings": json.dumps(keep, sort_keys=True)}


def _finish(out: Path, stem: str, errors: list) -> int:
    if errors:
        path = write_error_log(out / f"{stem}_errors.log", errors)
        log.warning("%d computation(s) failed; see %s", len(errors), path)
        return EXIT_PARTIAL
    return EXIT_OK


# --- commands -------------------------------------------------------------------


def cmd_spectrum(s: dict, out: Path) -> int:
    w = s["omega"]
    cfg = _floquet_cfg(s)
    amps = np.linspace(*s["amp_range"], s["amp_steps"])
    cols = {k: [] for k in ("A_over_omega", "re_eps", "im_eps", "parity", "source")}
    errors = []

    def row(a, z, parity, source):
        cols["A_over_omega"].append(float(a))
        cols["re_eps"].append(float(np.real(z)) / w)
        cols["im_eps"].append(float(np.imag(z)) / w)
        cols["parity"].append(parity)
        cols["source"].append(source)

    for a in amps:
        p = ModelParams(s["delta"], a * w, w)
        try:
            qs = spectrum(p, cfg)
        except NhrabiError as exc:
            errors.append(f"A/omega={a!r} floquet: {exc}")
            row(a, complex(np.nan, np.nan), "unresolved", "floquet")
            continue
        sel = qs.kept_mask & (np.abs(qs.raw.real) <= s["eps_window"] * w)
        for z, par in zip(qs.raw[sel], qs.parity[sel]):
            row(a, z, str(par), "floquet")
        if s["hermitian"]:
            continue
        try:
            ep, em_ = quasi_energies(p)
        except NhrabiError as exc:
            errors.append(f"A/omega={a!r} analytic: {exc}")
            continue
        for z in (ep, em_):
            row(a, z, "odd", "analytic_n0")
        for m in range(-s["shifts"], s["shifts"] + 1):
            if m == 0:
                continue
            for z in (ep, em_):
                # shifts by an even multiple of omega stay in the odd block
                row(a, z + m * w, "odd" if m % 2 == 0 else "even", "analytic_shifted")

    units = {"A_over_omega": "omega", "re_eps": "omega", "im_eps": "omega", "parity": "label", "source": "label"}
    path = write_csv(out / "spectrum.csv", cols, units, "nhrabi spectrum: quasi-energies versus coupling", _meta("spectrum", s))
    print(path)
    return _finish(out, "spectrum", errors)


def cmd_phase_diagram(s: dict, out: Path) -> int:
    w = s["omega"]
    cfg = _floquet_cfg(s)
    grid = scan_phase(s["delta_range"], s["amp_range"], s["resolution"], cfg, omega=w, workers=s["workers"])
    dd, aa = np.meshgrid(grid.delta_axis, grid.amp_axis, indexing="ij")
    cols = {
        "delta_over_omega": dd.ravel(),
        "A_over_omega": aa.ravel(),
        "max_imag": grid.max_imag.ravel(),
        "broken": grid.broken.ravel(),
    }
    units = {"delta_over_omega": "omega", "A_over_omega": "omega", "max_imag": "omega", "broken": "bool"}
    meta = _meta("phase-diagram", s)
    paths = [write_csv(out / "phase_grid.csv", cols, units, "nhrabi phase-diagram: per-cell classification", meta)]

    a_hi = s["amp_range"][1]
    ep = [ep_boundary(d * w, w, a_max=a_hi) for d in grid.delta_axis]
    cross = {n: [crossing_amplitude(d * w, w, n, a_max=a_hi) for d in grid.delta_axis] for n in (1, 2)}
    scale = lambda v: None if v is None else v / w  # noqa: E731
    overlay = {
        "delta_over_omega": grid.delta_axis,
        "A_ep_over_omega": [scale(v) for v in ep],
        "A_cross_n1_over_omega": [scale(v) for v in cross[1]],
        "A_cross_n2_over_omega": [scale(v) for v in cross[2]],
    }
    units = {k: "omega" for k in overlay}
    paths.append(write_csv(out / "phase_overlays.csv", overlay, units, "nhrabi phase-diagram: analytic boundary and crossing lines", meta))

    step = grid.amp_axis[1] - grid.amp_axis[0]
    first = first_broken_amp(grid)
    gaps = []
    for d, a_ep, a_num in zip(grid.delta_axis, overlay["A_ep_over_omega"], first):
        if a_ep is None and a_num is None:
            gap = 0.0
        elif a_ep is None or a_num is None:
            gap = None
        else:
            gap = abs(a_ep - a_num) / step
        gaps.append({"delta_over_omega": float(d), "A_ep": a_ep, "A_first_broken": a_num, "gap_steps": gap})
    summary = {
        "n_broken": int(grid.broken.sum()),
        "n_failed": len(grid.errors),
        "amp_step": float(step),
        "boundary": gaps,
        "errors": [{"i": i, "j": j, "error": m} for i, j, m in grid.errors],
    }
    paths.append(write_json(out / "phase_summary.json", summary))
    for pth in paths:
        print(pth)
    errors = [f"delta/omega={grid.delta_axis[i]!r} A/omega={grid.amp_axis[j]!r}: {m}" for i, j, m in grid.errors]
    return _finish(out, "phase_diagram", errors)


def cmd_dynamics(s: dict, out: Path) -> int:
    p = _params(s)
    n, t_end = s["samples"], s["t_end"]
    errors = []
    num = evolve_numeric(p, t_end=t_end, n_samples=n, tol=s["tol"], hermitian=s["hermitian"])
    cols = {"t_periods": num.t, "pe_numeric": num.pe}
    routes = {
        "pe_analytic": lambda: evolve_operator(p, t_end=t_end, n_samples=n),
        "pe_closed_form": lambda: evolve_closed_form(p, t_end=t_end, n_samples=n),
        "pe_rwa": lambda: evolve_rwa(p, t_end=t_end, n_samples=n),
    }
    for name, fn in routes.items():
        if s["hermitian"]:
            cols[name] = [None] * n  # analytic routes describe the non-Hermitian model only
            continue
        try:
            cols[name] = fn().pe
        except NhrabiError as exc:
            errors.append(f"{name}: {exc}")
            cols[name] = np.full(n, np.nan)
    units = {"t_periods": "2pi/omega", "pe_numeric": "1", "pe_analytic": "1", "pe_closed_form": "1", "pe_rwa": "1"}
    meta = _meta("dynamics", s)
    meta["pe_analytic"] = "evolution-operator route"
    print(write_csv(out / "dynamics.csv", cols, units, "nhrabi dynamics: excited-state population", meta))
    if not s["hermitian"]:
        try:
            rec = reconcile_closed_form(p, t_end=t_end, n_samples=n)
        except NhrabiError as exc:
            rec = {"outcome": None, "error": str(exc)}
            errors.append(f"reconciliation: {exc}")
        print(write_json(out / "reconciliation.json", rec))
    return _finish(out, "dynamics", errors)


def _peaks_json(freqs, mags, s, em):
    ps = extract_peaks(freqs, mags, s["threshold"])
    if em is not None and em.rabi_sq >= 0:
        ps = label_peaks(ps, em, s["max_n"], s["label_tol"])
    return ps.to_dict()


def cmd_fourier(s: dict, out: Path) -> int:
    p = _params(s)
    w = p.omega
    n, t_end = s["samples"], s["t_end"]
    errors = []
    broken, max_imag = classify(p, _floquet_cfg(s))
    em = None if s["hermitian"] else effective(p)
    result = {
        "params": {"delta_over_omega": p.delta_ratio, "amp_over_omega": p.amp_ratio},
        "floquet_broken": bool(broken),
        "floquet_max_imag_over_omega": max_imag / w,
        "two_rabi_over_omega": None if em is None or em.rabi_sq < 0 else 2.0 * em.rabi.real / w,
        "threshold": s["threshold"],
        "label_tol": s["label_tol"],
    }
    if broken:
        msg = "point is PT-broken; exponential growth dominates the spectrum"
        log.warning(msg)
        result["warning"] = msg

    series = {"numeric": lambda: evolve_numeric(p, t_end=t_end, n_samples=n, tol=s["tol"], hermitian=s["hermitian"])}
    if not s["hermitian"]:
        series["analytic"] = lambda: evolve_operator(p, t_end=t_end, n_samples=n)
        series["rwa"] = lambda: evolve_rwa(p, t_end=t_end, n_samples=n)
    cols = {}
    for name, fn in series.items():
        try:
            f, m = fourier_spectrum(fn(), detrend_exponential=s["detrend"], window=s["window"])
            cols.setdefault("nu_over_omega", f)
            cols[f"mag_{name}"] = m
            result[name] = _peaks_json(f, m, s, em)
        except NhrabiError as exc:
            errors.append(f"{name}: {exc}")
            result[name] = None
            result[f"{name}_error"] = str(exc)
    n_freq = n // 2 + 1
    for name in ("numeric", "analytic", "rwa"):
        key = f"mag_{name}"
        if key not in cols:
            cols[key] = [None] * n_freq
    cols.setdefault("nu_over_omega", np.arange(n_freq) * (n - 1) / (n * t_end))
    cols = {k: cols[k] for k in ("nu_over_omega", "mag_numeric", "mag_analytic", "mag_rwa")}
    units = {"nu_over_omega": "omega", "mag_numeric": "2pi/omega", "mag_analytic": "2pi/omega", "mag_rwa": "2pi/omega"}
    print(write_csv(out / "fourier.csv", cols, units, "nhrabi fourier: magnitude spectra of P_e", _meta("fourier", s)))
    print(write_json(out / "peaks.json", result))
    return _finish(out, "fourier", errors)


def cmd_bs_shift(s: dict, out: Path) -> int:
    w = s["omega"]
    amps = np.linspace(*s["amp_range"], s["amp_steps"])
    results = bs_sweep(amps * w, w, _floquet_cfg(s), workers=s["workers"])
    nan_or = lambda v: np.nan if v is None else v / w  # noqa: E731
    cols = {
        "A_over_omega": [r.amp / w for r in results],
        "numeric": [nan_or(r.delta_res_numeric) for r in results],
        "analytic": [nan_or(r.delta_res_analytic) for r in results],
        "series2": [r.delta_res_series2 / w for r in results],
        "series4": [r.delta_res_series4 / w for r in results],
    }
    units = {k: "omega" for k in cols}
    print(write_csv(out / "bs_shift.csv", cols, units, "nhrabi bs-shift: resonance position versus coupling", _meta("bs-shift", s)))
    errors = [f"A/omega={r.amp / w!r}: {r.error}" for r in results if r.error]
    return _finish(out, "bs_shift", errors)


# --- entry point ------------------------------------------------------------------


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings(args)
        ModelParams(settings["delta"], settings["amp"], settings["omega"])
    except ConfigError as exc:
        print(f"nhrabi {args.command}: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    # settings["out"] holds the config value whenever --out is absent
    out = resolve_out_dir(args.out, settings["out"])
    try:
        return args.func(settings, out)
    except NhrabiError as exc:
        print(f"nhrabi {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
