"""Command-line experiment runner.

Subcommands mirror the experiment runners; every config key can come
from a flat config file (--config) and be overridden by the same-named
flag.  All file output happens here, never in the library modules.
"""

import argparse
import sys
from pathlib import Path

from . import experiment
from .config import ExperimentConfig, config_from_mapping, parse_config_text
from .errors import ParameterError


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--M", type=int, dest="M")
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--delta-f", type=float, dest="delta_f")
    p.add_argument("--modulation", type=int, help="PSK order D (2, 4, ...)")
    p.add_argument("--amplitude", type=float)
    p.add_argument("--method", help="none|proposed|companding|icf|dft, comma-separable")
    p.add_argument("--frames", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--snr-db-list", dest="snr_db_list",
                   help="comma-separated SNR grid in dB (inf allowed)")
    p.add_argument("--nu-max-hz", type=float, dest="nu_max_hz")
    p.add_argument("--profile", help="etu300 | single-path | identity")
    p.add_argument("--profile-file", help="flat config file with delays_ns, powers_db")
    p.add_argument("--max-iter", type=int, dest="max_iter",
                   help="greedy pass cap; 0 runs to the natural stop")
    p.add_argument("--mu", type=float)
    p.add_argument("--clip-ratio-db", type=float, dest="clip_ratio_db")
    p.add_argument("--icf-iterations", type=int, dest="icf_iterations")
    p.add_argument("--icf-oversample", type=int, dest="icf_oversample")
    p.add_argument("--dft-axis", dest="dft_axis", choices=("delay", "doppler"))
    p.add_argument("--output", dest="output_path", help="output path stem")
    p.add_argument("--plot-script", action="store_true", dest="plot_script",
                   help="also emit a matplotlib script consuming the CSV")


def _build_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        cfg = config_from_mapping(parse_config_text(Path(args.config).read_text()), cfg)
    overrides = {}
    for key in ("M", "N", "delta_f", "modulation", "amplitude", "method",
                "frames", "seed", "snr_db_list", "nu_max_hz", "profile",
                "max_iter", "mu", "clip_ratio_db", "icf_iterations",
                "icf_oversample", "dft_axis", "output_path"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return config_from_mapping(overrides, cfg)


def _load_profile_file(cfg: ExperimentConfig, args) -> ExperimentConfig:
    if getattr(args, "profile_file", None):
        from dataclasses import replace

        from .channel import PathProfile, register_profile
        mapping = parse_config_text(Path(args.profile_file).read_text())
        try:
            profile = PathProfile(tuple(mapping["delays_ns"]), tuple(mapping["powers_db"]))
        except KeyError as missing:
            raise ParameterError(f"profile file lacks key {missing}") from None
        name = f"file:{args.profile_file}"
        register_profile(name, profile)
        cfg = replace(cfg, profile=name)
    return cfg


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")


_PLOT_TEMPLATES = {
    "ccdf": """\
#!/usr/bin/env python3
\"\"\"Plot the CCDF curve written by `otfs-papr ccdf`.\"\"\"
import sys
import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
rows = [line for line in open(path) if not line.startswith("#")]
th, pr = np.loadtxt(rows[1:], delimiter=",", unpack=True)
keep = pr > 0
plt.semilogy(th[keep], pr[keep])
plt.xlabel("PAPR threshold (dB)")
plt.ylabel("P(PAPR > threshold)")
plt.grid(True, which="both", alpha=0.3)
plt.tight_layout()
plt.show()
""",
    "error-rate": """\
#!/usr/bin/env python3
\"\"\"Plot SER vs SNR from `otfs-papr error-rate` output.\"\"\"
import csv
import sys
from collections import defaultdict
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
curves = defaultdict(list)
with open(path) as fh:
    rows = (r for r in fh if not r.startswith("#"))
    for row in csv.DictReader(rows):
        curves[row["method"]].append((float(row["snr_db"]), float(row["ser"])))
for method, pts in curves.items():
    pts.sort()
    plt.semilogy(*zip(*pts), marker="o", label=method)
plt.xlabel("SNR (dB)")
plt.ylabel("SER")
plt.legend()
plt.grid(True, which="both", alpha=0.3)
plt.tight_layout()
plt.show()
""",
    "doppler-sweep": """\
#!/usr/bin/env python3
\"\"\"Plot SER vs maximum Doppler from `otfs-papr doppler-sweep` output.\"\"\"
import csv
import sys
from collections import defaultdict
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
curves = defaultdict(list)
with open(path) as fh:
    rows = (r for r in fh if not r.startswith("#"))
    for row in csv.DictReader(rows):
        curves[row["method"]].append((float(row["nu_max_hz"]), float(row["ser"])))
for method, pts in curves.items():
    pts.sort()
    plt.semilogy(*zip(*pts), marker="o", label=method)
plt.xlabel("maximum Doppler shift (Hz)")
plt.ylabel("SER")
plt.legend()
plt.grid(True, which="both", alpha=0.3)
plt.tight_layout()
plt.show()
""",
    "scaling-table": """\
#!/usr/bin/env python3
\"\"\"Plot PAPR at CCDF 0.1 vs grid size from `otfs-papr scaling-table`.\"\"\"
import csv
import sys
from collections import defaultdict
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
curves = defaultdict(list)
with open(path) as fh:
    rows = (r for r in fh if not r.startswith("#"))
    for row in csv.DictReader(rows):
        size = int(row["M"]) * int(row["N"])
        curves[row["method"]].append((size, float(row["papr_db_at_ccdf_0p1"])))
for method, pts in curves.items():
    pts.sort()
    plt.semilogx(*zip(*pts), base=2, marker="o", label=method)
plt.xlabel("frame size M*N")
plt.ylabel("PAPR at CCDF 0.1 (dB)")
plt.legend()
plt.grid(True, which="both", alpha=0.3)
plt.tight_layout()
plt.show()
""",
}


def _maybe_write_plot_script(args, kind: str, csv_path: Path):
    if getattr(args, "plot_script", False):
        script = _PLOT_TEMPLATES[kind].format(csv=str(csv_path))
        _write(csv_path.with_suffix(".plot.py"), script)


def _cmd_ccdf(args) -> int:
    cfg = _load_profile_file(_build_config(args), args)
    result = experiment.run_ccdf(cfg)
    stem = Path(cfg.output_path)
    _write(stem.with_suffix(".samples.csv"), experiment.render_ccdf_samples_csv(result))
    curve_path = stem.with_suffix(".curve.csv")
    _write(curve_path, experiment.render_ccdf_curve_csv(result))
    _maybe_write_plot_script(args, "ccdf", curve_path)
    for target, value in sorted(result.papr_at_targets.items(), reverse=True):
        print(f"papr_db at ccdf {target}: {value:.3f}")
    return 0


def _cmd_error_rate(args) -> int:
    cfg = _load_profile_file(_build_config(args), args)
    result = experiment.run_error_rate(cfg)
    csv_path = Path(cfg.output_path).with_suffix(".csv")
    _write(csv_path, experiment.render_error_rate_csv(result))
    _maybe_write_plot_script(args, "error-rate", csv_path)
    for p in result.points:
        print(f"{p.method} snr={p.snr_db:g} dB nu_max={p.nu_max_hz:g} Hz: "
              f"ser={p.counts.ser:.6g} ber={p.counts.ber:.6g}")
    return 0


def _cmd_doppler_sweep(args) -> int:
    cfg = _load_profile_file(_build_config(args), args)
    nus = None
    if args.nu_max_list:
        nus = [float(v) for v in args.nu_max_list.split(",")]
    result = experiment.run_doppler_sweep(cfg, nu_max_list=nus, snr_db=args.snr_db)
    csv_path = Path(cfg.output_path).with_suffix(".csv")
    _write(csv_path, experiment.render_error_rate_csv(result))
    _maybe_write_plot_script(args, "doppler-sweep", csv_path)
    for p in result.points:
        print(f"{p.method} nu_max={p.nu_max_hz:g} Hz: ser={p.counts.ser:.6g}")
    return 0


def _cmd_scaling_table(args) -> int:
    cfg = _load_profile_file(_build_config(args), args)
    sweep_m = [int(v) for v in args.sweep_m.split(",")] if args.sweep_m else None
    sweep_n = [int(v) for v in args.sweep_n.split(",")] if args.sweep_n else None
    result = experiment.run_scaling_table(cfg, sweep_m=sweep_m, sweep_n=sweep_n)
    csv_path = Path(cfg.output_path).with_suffix(".csv")
    _write(csv_path, experiment.render_scaling_csv(result))
    _maybe_write_plot_script(args, "scaling-table", csv_path)
    for r in result.rows:
        print(f"M={r.M} N={r.N} {r.method}: {r.papr_db_at_ccdf_0p1:.3f} dB")
    return 0


def _cmd_precode(args) -> int:
    cfg = _build_config(args)
    text = sys.stdin.read() if args.symbols == "-" else Path(args.symbols).read_text()
    u = [complex(line.strip().replace(" ", "")) for line in text.splitlines()
         if line.strip()]
    result = experiment.precode_frame(u, cfg)
    print(f"papr_before_db: {result.papr_before_db:.6f}")
    print(f"papr_after_db:  {result.papr_after_db:.6f}")
    print(f"iterations_used: {result.iterations_used}")
    print(f"flips: {','.join(map(str, result.flips)) or '-'}")
    for v in result.x_star:
        print(f"{v.real:+.12g}{v.imag:+.12g}j")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otfs-papr",
        description="OTFS PAPR-reduction experiments: CCDFs, error rates, "
                    "Doppler sweeps and grid-size scaling tables.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ccdf", help="per-frame PAPR samples and CCDF curve")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_ccdf)

    p = sub.add_parser("error-rate", help="SER/BER over an SNR grid")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_error_rate)

    p = sub.add_parser("doppler-sweep", help="SER at fixed SNR over a Doppler grid")
    _add_config_flags(p)
    p.add_argument("--nu-max-list", help="comma-separated Doppler grid in Hz")
    p.add_argument("--snr-db", type=float, default=experiment.DOPPLER_SWEEP_SNR_DB)
    p.set_defaults(func=_cmd_doppler_sweep)

    p = sub.add_parser("scaling-table", help="PAPR at CCDF 0.1 over grid sizes")
    _add_config_flags(p)
    p.add_argument("--sweep-m", help="comma-separated M values")
    p.add_argument("--sweep-n", help="comma-separated N values")
    p.set_defaults(func=_cmd_scaling_table)

    p = sub.add_parser("precode", help="precode one frame of symbols")
    _add_config_flags(p)
    p.add_argument("symbols", help="file of complex symbols, one per line; - for stdin")
    p.set_defaults(func=_cmd_precode)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
