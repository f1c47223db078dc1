"""Command-line surface: spectra, design estimates, resonance, sweeps, verify.

Configuration is a flat JSON object; every field is optional and defaults
to the worked silica-fiber example (n2 = 3.5e-20 m^2/W, L = 100 m,
S = 1e-10 m^2, lambda0 = 0.5 um, I = 1e6 W/m^2).  Command-line flags
override config-file values.

Exit codes: 0 success, 1 validation error, 2 numerical failure,
3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence, TextIO

import numpy as np

from . import __version__, bogolyubov, kernel, spectrum
from .errors import NumericalError, QuadratureError, ValidationError, VplError
from .fiber import SPEED_OF_LIGHT, FiberParams, derive_drive, design_pulse

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_VERIFICATION = 3

RESONANCE_REFERENCE = 2.944  # quoted resonance drive amplitude
RESONANCE_BAND = (2.914, 2.973)  # reference +- 1%
WIDTH_REFERENCE = 0.11  # quoted spectral width at controlled intensity
WIDTH_BAND = (0.05, 0.30)

CONFIG_FIELDS = (
    "n2", "length", "cross_section", "wavelength", "intensity",
    "grid_points", "kernel", "two_end_factor", "nu",
    "oracle_modes", "oracle_cutoff", "oracle_ramp_cycles",
    "oracle_steps_per_cycle", "oracle_total_time",
    "output", "format",
)


@dataclass
class RunConfig:
    """Resolved run configuration (defaults < config file < flags)."""

    fiber: FiberParams = field(default_factory=FiberParams)
    grid_points: int = 2001
    kernel_variant: str = "pv"
    two_end_factor: bool = False
    nu_override: Optional[float] = None
    oracle_modes: int = 200
    oracle_cutoff: float = 2.0
    oracle_ramp_cycles: float = 5.0
    oracle_steps_per_cycle: int = 40
    oracle_total_time: Optional[float] = None
    output: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.grid_points < 3 or self.grid_points % 2 == 0:
            raise ValidationError(
                f"grid_points must be odd and >= 3, got {self.grid_points}"
            )
        if self.kernel_variant not in kernel.VARIANTS:
            raise ValidationError(
                f"kernel must be one of {kernel.VARIANTS}, got {self.kernel_variant!r}"
            )
        if self.format not in ("csv", "json"):
            raise ValidationError(f"format must be csv or json, got {self.format!r}")
        if self.nu_override is not None and self.nu_override < 0:
            raise ValidationError("nu must be >= 0")

    @property
    def nu(self) -> float:
        if self.nu_override is not None:
            return self.nu_override
        return derive_drive(self.fiber).nu

    def mode_system(self, nu: Optional[float] = None) -> bogolyubov.ModeSystem:
        return bogolyubov.ModeSystem.from_drive(
            self.nu if nu is None else nu,
            mode_count=self.oracle_modes,
            cutoff=self.oracle_cutoff,
            total_time=self.oracle_total_time,
            ramp_cycles=self.oracle_ramp_cycles,
            steps_per_cycle=self.oracle_steps_per_cycle,
        )

    def as_flat_dict(self) -> dict:
        return {
            "n2": self.fiber.n2,
            "length": self.fiber.length,
            "cross_section": self.fiber.cross_section,
            "wavelength": self.fiber.wavelength,
            "intensity": self.fiber.intensity,
            "grid_points": self.grid_points,
            "kernel": self.kernel_variant,
            "two_end_factor": self.two_end_factor,
            "nu": self.nu_override,
            "oracle_modes": self.oracle_modes,
            "oracle_cutoff": self.oracle_cutoff,
            "oracle_ramp_cycles": self.oracle_ramp_cycles,
            "oracle_steps_per_cycle": self.oracle_steps_per_cycle,
            "oracle_total_time": self.oracle_total_time,
            "format": self.format,
        }


def load_config(path: Optional[str], overrides: dict) -> RunConfig:
    """Merge defaults, an optional JSON config file, and flag overrides."""
    data: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ValidationError("config root must be a JSON object")
        # Accept whole output documents back as config fragments.
        if "config" in raw and isinstance(raw["config"], dict):
            raw = raw["config"]
        unknown = set(raw) - set(CONFIG_FIELDS)
        if unknown:
            raise ValidationError(f"unknown config fields: {sorted(unknown)}")
        data.update(raw)
    data.update({k: v for k, v in overrides.items() if v is not None})

    fiber = FiberParams(
        n2=data.get("n2", 3.5e-20),
        length=data.get("length", 100.0),
        cross_section=data.get("cross_section", 1e-10),
        wavelength=data.get("wavelength", 0.5e-6),
        intensity=data.get("intensity", 1e6),
    )
    try:
        return RunConfig(
            fiber=fiber,
            grid_points=int(data.get("grid_points", 2001)),
            kernel_variant=data.get("kernel", "pv"),
            two_end_factor=bool(data.get("two_end_factor", False)),
            nu_override=data.get("nu"),
            oracle_modes=int(data.get("oracle_modes", 200)),
            oracle_cutoff=float(data.get("oracle_cutoff", 2.0)),
            oracle_ramp_cycles=float(data.get("oracle_ramp_cycles", 5.0)),
            oracle_steps_per_cycle=int(data.get("oracle_steps_per_cycle", 40)),
            oracle_total_time=data.get("oracle_total_time"),
            output=data.get("output"),
            format=data.get("format", "csv"),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"invalid config value: {exc}") from exc


def format_float(x: float) -> str:
    """Scientific notation with 9 significant digits (CSV cells)."""
    return f"{x:.8e}"


def write_table(columns: Sequence[str], rows: Sequence[Sequence[float]],
                config: RunConfig, stream: TextIO) -> None:
    if config.format == "csv":
        stream.write(",".join(columns) + "\n")
        for row in rows:
            stream.write(",".join(format_float(v) for v in row) + "\n")
    else:
        doc = {
            "columns": list(columns),
            "rows": [[float(v) for v in row] for row in rows],
            "config": config.as_flat_dict(),
        }
        json.dump(doc, stream, sort_keys=True, indent=2)
        stream.write("\n")


def _open_output(config: RunConfig):
    if config.output is None:
        return sys.stdout, False
    return open(config.output, "w", encoding="utf-8"), True


def cmd_spectrum(config: RunConfig) -> int:
    nu = config.nu
    drive = derive_drive(config.fiber)
    grid = spectrum.default_grid(config.grid_points)
    weak = spectrum.spectral_curve(nu, mode="weak", variant=config.kernel_variant,
                                   grid_points=config.grid_points,
                                   two_end=config.two_end_factor)
    full = spectrum.spectral_curve(nu, mode="full", variant=config.kernel_variant,
                                   grid_points=config.grid_points,
                                   two_end=config.two_end_factor)
    with np.errstate(invalid="ignore", divide="ignore"):
        enhancement = np.where(weak.values > 0.0, full.values / np.maximum(weak.values, 1e-300), 1.0)
    rows = np.column_stack([grid, weak.values, full.values, enhancement])
    peak, fwhm = spectrum.curve_peak_and_fwhm(full)

    stream, close = _open_output(config)
    try:
        write_table(["x", "rate_weak", "rate_full", "enhancement"], rows.tolist(),
                    config, stream)
    finally:
        if close:
            stream.close()
    amplitude = nu * SPEED_OF_LIGHT / drive.omega0
    print(f"nu = {nu:.6e}", file=sys.stderr)
    print(f"a = {amplitude:.6e} m", file=sys.stderr)
    print(f"Gamma = {drive.gamma:.6e} 1/s", file=sys.stderr)
    print(f"peak at x = {peak:.6f}, FWHM = {fwhm:.6f} (units of omega0)",
          file=sys.stderr)
    if full.saturated:
        print("note: resonance saturation (denominator floored)", file=sys.stderr)
    return EXIT_OK


def cmd_design(config: RunConfig, as_json: bool) -> int:
    pulse = design_pulse(config.fiber)
    optimal = FiberParams(
        n2=config.fiber.n2, length=config.fiber.length,
        cross_section=config.fiber.cross_section,
        wavelength=config.fiber.wavelength, intensity=pulse.intensity_opt,
    )
    nu_opt = derive_drive(optimal).nu
    payload = {
        "intensity_opt": pulse.intensity_opt,
        "energy_opt": pulse.energy_opt,
        "power_opt": pulse.power_opt,
        "duration": pulse.duration,
        "quanta": pulse.quanta,
        "nu_at_intensity_opt": nu_opt,
        "config": config.as_flat_dict(),
    }
    if as_json:
        json.dump(payload, sys.stdout, sort_keys=True, indent=2)
        sys.stdout.write("\n")
    else:
        print(f"optimal intensity  I_opt = {pulse.intensity_opt:.6e} W/m^2")
        print(f"optimal energy     E_opt = {pulse.energy_opt:.6e} J")
        print(f"laser power        W_opt = {pulse.power_opt:.6e} W")
        print(f"pulse duration     L/c   = {pulse.duration:.6e} s")
        print(f"excitation quanta  N0    = {pulse.quanta:.6e}")
        print(f"drive at I_opt     nu    = {nu_opt:.12f}")
    return EXIT_OK


def cmd_resonance(config: RunConfig, as_json: bool) -> int:
    nu0 = spectrum.find_resonance(config.kernel_variant)
    if as_json:
        json.dump({"variant": config.kernel_variant, "nu0": nu0,
                   "reference": RESONANCE_REFERENCE,
                   "config": config.as_flat_dict()},
                  sys.stdout, sort_keys=True, indent=2)
        sys.stdout.write("\n")
    else:
        print(f"nu0({config.kernel_variant}) = {nu0:.6f} "
              f"(reference {RESONANCE_REFERENCE})")
    return EXIT_OK


def cmd_sweep(config: RunConfig, axes: list[spectrum.SweepAxis], mode: str) -> int:
    table = spectrum.sweep(config.fiber, axes, mode=mode,
                           variant=config.kernel_variant,
                           grid_points=config.grid_points,
                           two_end=config.two_end_factor)
    stream, close = _open_output(config)
    try:
        write_table(table.columns, table.rows, config, stream)
    finally:
        if close:
            stream.close()
    best = table.argmax_row("total_photons")
    labeled = ", ".join(f"{c}={format_float(v)}" for c, v in zip(table.columns, best))
    print(f"max total_photons at: {labeled}", file=sys.stderr)
    return EXIT_OK


@dataclass
class Check:
    name: str
    value: str
    reference: str
    passed: bool
    gated: bool = True


def _run_verify_checks(config: RunConfig) -> tuple[list[Check], list[str]]:
    checks: list[Check] = []
    notes: list[str] = []
    variant = config.kernel_variant

    # Kernel oracle: PV quadrature against the half-log closed form.
    xs = np.linspace(0.01, 1.99, 200)
    dev = max(abs(kernel.g_pv(float(x)) - kernel.g_pv_closed(float(x))) for x in xs)
    checks.append(Check("kernel_pv_oracle", f"max|quad-closed| = {dev:.2e}",
                        "<= 1e-8 on 200 points", dev <= 1e-8))

    # Resonance drive amplitude for the configured variant.
    nu0 = spectrum.find_resonance(variant)
    in_band = RESONANCE_BAND[0] <= nu0 <= RESONANCE_BAND[1]
    checks.append(Check("resonance_value", f"nu0({variant}) = {nu0:.4f}",
                        f"within [{RESONANCE_BAND[0]}, {RESONANCE_BAND[1]}] "
                        f"(= {RESONANCE_REFERENCE} +- 1%)", in_band))
    nu0_pv = spectrum.find_resonance("pv")
    nu0_paper = spectrum.find_resonance("paper")
    notes.append(
        f"kernel log-term coefficient differs by 2 between variants: "
        f"g_paper(1) = {kernel.g_paper(1.0):.6f}, "
        f"g_pv(1) = {kernel.g_pv_closed(1.0):.6f}; "
        f"nu0(pv) = {nu0_pv:.4f} vs nu0(paper) = {nu0_paper:.4f}; "
        f"quoted value {RESONANCE_REFERENCE} is matched by the pv form only.")

    # Spectral symmetry about x = 1 on the sampling grid.
    worst = 0.0
    for nu_s in (0.1, 1.0, 2.9):
        for var in kernel.VARIANTS:
            curve = spectrum.spectral_curve(nu_s, mode="full", variant=var,
                                            grid_points=config.grid_points)
            vals = curve.values
            asym = np.abs(vals / vals[::-1] - 1.0).max()
            worst = max(worst, float(asym))
    checks.append(Check("spectral_symmetry", f"max asymmetry = {worst:.2e}",
                        "<= 1e-12 relative", worst <= 1e-12))

    # Weak limit: enhancement negligible at small drive.
    grid = spectrum.default_grid(config.grid_points)
    inner = grid[(grid >= 0.1) & (grid <= 1.9)]
    ratio = spectrum.rate_full(inner, 0.05, variant) / spectrum.rate_weak(inner, 0.05)
    wl = float(np.abs(ratio - 1.0).max())
    checks.append(Check("weak_limit", f"max|full/weak - 1| = {wl:.2e} at nu=0.05",
                        "<= 1e-3", wl <= 1e-3))

    # Inverse-square tail above resonance.
    tail = (spectrum.rate_full(1.0, 10 * nu0, variant)
            / spectrum.rate_full(1.0, 20 * nu0, variant))
    checks.append(Check("inverse_square_tail", f"rate(10nu0)/rate(20nu0) = {tail:.4f}",
                        "4 +- 5%", abs(tail - 4.0) <= 0.2))

    # Weak integral identity.
    worst_int = 0.0
    for nu_s in (0.01, 0.1, 1.0):
        summary = spectrum.total_photons(nu_s, 1.0, variant=variant, mode="weak",
                                         grid_points=config.grid_points)
        closed = 2.0 * np.pi * nu_s ** 2 / 3.0
        worst_int = max(worst_int, abs(summary.total_rate / closed - 1.0))
    checks.append(Check("weak_integral", f"max rel dev = {worst_int:.2e}",
                        "2*pi*nu^2/3 within 1e-6", worst_int <= 1e-6))
    drive = derive_drive(config.fiber)
    n_weak = spectrum.total_photons(drive.nu, drive.gamma_over_omega0,
                                    variant=variant, mode="weak",
                                    grid_points=config.grid_points).total_photons
    notes.append(
        f"printed total-photon formula carries coefficient 16*pi^3 "
        f"(= {2 * n_weak:.4e} photons for this fiber) vs 8*pi^3 from direct "
        f"band integration (= {n_weak:.4e}); factor 2 matches the two-end "
        f"emission remark and is reported, not resolved.")

    # Time-domain oracle, weak drive, echo-limited horizon.
    system = config.mode_system(nu=0.05)
    report = bogolyubov.compare_to_analytic(system, variant="pv", rate_mode="weak")
    checks.append(Check("oracle_weak_rates",
                        f"max band dev = {report.max_band_deviation:.3f} "
                        f"(K={system.mode_count}, T={system.total_time:.0f})",
                        "<= 10% on x in [0.3, 1.7]", report.rates_ok))
    checks.append(Check("oracle_canonical",
                        f"max residual = {report.canonical_max:.2e}",
                        "<= 1e-6 per row", report.canonical_ok))
    checks.append(Check("oracle_pair_mass",
                        f"fraction = {report.pair_fraction:.4f}",
                        ">= 0.95 within 4*pi/T_eff of the anti-diagonal",
                        report.pairs_ok))
    notes.append(
        "oracle horizon is echo-limited (T = 2*pi/spacing): a truncated mode "
        "set only emulates the open continuum inside its revival time; past "
        "it photon numbers grow coherently rather than linearly.")
    notes.append(
        "moderate-drive comparison against the resonance-enhanced rate is "
        "not attainable: for nu >~ 0.4 the sharp-cutoff mode system is "
        "parametrically unstable (collective modulation of the band), and "
        "below that the finite-horizon coherence bias exceeds the "
        "enhancement being tested; reported here, not gated.")

    # Design numbers.
    pulse = design_pulse(config.fiber)
    optimal = FiberParams(n2=config.fiber.n2, length=config.fiber.length,
                          cross_section=config.fiber.cross_section,
                          wavelength=config.fiber.wavelength,
                          intensity=pulse.intensity_opt)
    nu_opt = derive_drive(optimal).nu
    checks.append(Check("design_nu_opt", f"nu(I_opt) = {nu_opt:.15f}",
                        "pi within 1e-12 relative",
                        abs(nu_opt - np.pi) <= 1e-12 * np.pi))
    eta = spectrum.photon_yield(config.fiber, mode="weak", variant=variant,
                                grid_points=config.grid_points)
    notes.append(
        f"worked example: computed nu = {drive.nu:.3e} (quoted estimate 0.01), "
        f"E_opt = {pulse.energy_opt:.3e} J (quoted ~1e-5 J), first-principles "
        f"yield eta = {eta.pair_yield:.3e} (quoted ~1e-8; closed form gives "
        f"{eta.pair_yield_formula:.3e}).")
    notes.append(
        f"resonant-peak ceiling formula 9*pi^4*(omega0/Gamma)^2/(4*nu0^2) = "
        f"{spectrum.max_photons_formula(1.0 / drive.gamma_over_omega0, nu0_pv):.3e} "
        f"photons for this fiber (quoted verbatim; no independent check).")

    # Width scenario at nu = 0.9 nu0.
    near = spectrum.total_photons(0.9 * nu0_pv, drive.gamma_over_omega0,
                                  variant="pv", mode="full",
                                  grid_points=config.grid_points)
    checks.append(Check("width_scenario", f"FWHM(0.9 nu0) = {near.fwhm:.4f} omega0",
                        f"within [{WIDTH_BAND[0]}, {WIDTH_BAND[1]}]",
                        WIDTH_BAND[0] <= near.fwhm <= WIDTH_BAND[1]))
    notes.append(
        f"quoted near-resonance width is {WIDTH_REFERENCE} omega0; measured "
        f"FWHM at nu = 0.9*nu0 is {near.fwhm:.4f} omega0 with "
        f"N = {near.total_photons:.3e} photons (claimed scaling ~1e3 L/lambda0 "
        f"= {1e3 * config.fiber.length / config.fiber.wavelength:.3e}).")
    return checks, notes


def cmd_verify(config: RunConfig) -> int:
    checks, notes = _run_verify_checks(config)
    failed = [c for c in checks if c.gated and not c.passed]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"[{status}] {c.name}: {c.value} (expect {c.reference})")
    print("\ndiscrepancy ledger (informational, never gated):")
    for note in notes:
        print(f"  - {note}")
    if failed:
        print(f"\n{len(failed)} gated check(s) failed", file=sys.stderr)
        return EXIT_VERIFICATION
    print(f"\nall {len(checks)} gated checks passed")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--output", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="table format")
    common.add_argument("--kernel", choices=kernel.VARIANTS, help="kernel variant")
    common.add_argument("--nu", type=float,
                        help="drive amplitude override (else derived from intensity)")
    common.add_argument("--grid-points", type=int, help="spectral grid size (odd)")
    common.add_argument("--oracle-modes", type=int, help="oracle mode count")
    common.add_argument("--json", action="store_true", dest="as_json",
                        help="machine-readable output")

    parser = _Parser(prog="vpl", description=__doc__)
    parser.add_argument("--version", action="version", version=f"vpl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("spectrum", parents=[common],
                   help="weak/full spectral rate table over the band")
    sub.add_parser("design", parents=[common],
                   help="optimal-pulse estimates for the configured fiber")
    sub.add_parser("resonance", parents=[common],
                   help="resonance drive amplitude nu0")
    sw = sub.add_parser("sweep", parents=[common],
                        help="emission over a 1D/2D parameter grid")
    sw.add_argument("--param", required=True, choices=spectrum.SWEEP_PARAMETERS)
    sw.add_argument("--start", type=float, required=True)
    sw.add_argument("--stop", type=float, required=True)
    sw.add_argument("--count", type=int, required=True)
    sw.add_argument("--param2", choices=spectrum.SWEEP_PARAMETERS)
    sw.add_argument("--start2", type=float)
    sw.add_argument("--stop2", type=float)
    sw.add_argument("--count2", type=int)
    sw.add_argument("--mode", choices=("weak", "full"), default="full")
    sub.add_parser("verify", parents=[common],
                   help="run the validation suite and print the discrepancy ledger")
    return parser


def _config_from_args(args) -> RunConfig:
    overrides = {
        "output": args.output,
        "format": args.format,
        "kernel": args.kernel,
        "nu": args.nu,
        "grid_points": args.grid_points,
        "oracle_modes": args.oracle_modes,
    }
    return load_config(args.config, overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = _config_from_args(args)
        if args.command == "spectrum":
            return cmd_spectrum(config)
        if args.command == "design":
            return cmd_design(config, args.as_json)
        if args.command == "resonance":
            return cmd_resonance(config, args.as_json)
        if args.command == "sweep":
            axes = [spectrum.SweepAxis(args.param, args.start, args.stop, args.count)]
            if args.param2 is not None:
                missing = [n for n in ("start2", "stop2", "count2")
                           if getattr(args, n) is None]
                if missing:
                    raise ValidationError(f"--param2 requires {missing}")
                axes.append(spectrum.SweepAxis(args.param2, args.start2,
                                               args.stop2, args.count2))
            return cmd_sweep(config, axes, args.mode)
        if args.command == "verify":
            return cmd_verify(config)
        raise ValidationError(f"unknown command {args.command!r}")
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, QuadratureError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except VplError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
