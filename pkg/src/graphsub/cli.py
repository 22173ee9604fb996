"""Command line front end: enhance, mix, eval, and spectrum subcommands.

Every command writes a JSON manifest next to its primary output recording the
effective configuration, and every CSV starts with a format_version line.
Commands are deterministic; the seed option is recorded for provenance.
Exit codes: 0 success, 1 bad input or arguments, 2 internal failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import plots
from .baseline import BaselineConfig, bss, ibss
from .enhance import EnhancementConfig, gss, igss
from .framing import FramePlan, segment
from .gft import basis_circulant, gft_block
from .signals import SnrReport, mix_at_snr, snr
from .wavio import AudioBuffer, read_wav, write_wav

FORMAT_VERSION = 1
THREADS_ENV = "GRAPHSUB_THREADS"
METHODS = ("gss", "igss", "bss", "ibss")
DEFAULT_SPECTRUM_KS = (1, 3, 8, 20, 50)

_DEFAULTS = {
    "method": "igss",
    "k": 3,
    "frame_len": 256,
    "overlap": 0.5,
    "alpha": 1e-5,
    "max_iters": 30,
    "noise_frames": 5,
    "floor": 0.0,
}
_KEY_TYPES = {
    "method": str,
    "k": int,
    "frame_len": int,
    "overlap": float,
    "alpha": float,
    "max_iters": int,
    "noise_frames": int,
    "floor": float,
}


class UsageError(ValueError):
    """Bad command line; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise UsageError(f"{self.prog}: {message}")


def _fmt(value) -> str:
    """CSV cell formatting: shortest exact float repr, 'inf' for infinities."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["format_version", FORMAT_VERSION])
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def _write_manifest(primary_output, command, config, seed, inputs, outputs) -> Path:
    path = Path(primary_output).with_suffix(".manifest.json")
    payload = {
        "command": command,
        "config": config,
        "seed": seed,
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "format_version": FORMAT_VERSION,
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _load_config_file(path: str) -> dict:
    """Parse key=value lines; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, _, text = line.partition("=")
        key, text = key.strip(), text.strip()
        if key not in _KEY_TYPES:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            value = _KEY_TYPES[key](text)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key}: {text!r}") from exc
        if key == "method" and value not in METHODS:
            raise ValueError(f"{path}:{lineno}: method must be one of {METHODS}")
        values[key] = value
    return values


def _resolve_options(args, keys) -> dict:
    """Flags override the config file, which overrides built-in defaults."""
    options = {key: _DEFAULTS[key] for key in keys}
    if getattr(args, "config", None):
        file_values = _load_config_file(args.config)
        options.update({k: v for k, v in file_values.items() if k in options})
    for key in keys:
        flag = getattr(args, key, None)
        if flag is not None:
            options[key] = flag
    return options


def _run_method(method: str, samples: np.ndarray, options: dict):
    """Dispatch one enhancement run; returns (samples, iterations)."""
    if method in ("gss", "igss"):
        config = EnhancementConfig(
            k=options["k"],
            frame_len=options["frame_len"],
            overlap=options["overlap"],
            alpha=options["alpha"],
            max_iters=options["max_iters"],
            noise_region=options["noise_frames"],
            floor=options["floor"],
        )
        if method == "gss":
            return gss(samples, config), 1
        return igss(samples, config)
    config = BaselineConfig(
        frame_len=options["frame_len"],
        overlap=options["overlap"],
        fft_len=options["frame_len"],
        noise_frames=options["noise_frames"],
        alpha=options["alpha"],
        max_iters=options["max_iters"],
        floor=options["floor"],
    )
    if method == "bss":
        return bss(samples, config), 1
    return ibss(samples, config)


def _cmd_enhance(args) -> int:
    options = _resolve_options(args, tuple(_DEFAULTS))
    buf = read_wav(args.input, downmix=args.downmix)
    enhanced, iterations = _run_method(options["method"], buf.samples, options)
    clipped = write_wav(args.output, AudioBuffer(enhanced, buf.sample_rate))
    print(f"iterations={iterations} clipped={clipped}", file=sys.stderr)
    config = dict(options, sample_rate=buf.sample_rate)
    _write_manifest(args.output, "enhance", config, args.seed, [args.input], [args.output])
    return 0


def _parse_snr_grid(text: str) -> list[float]:
    """A single dB value, or an inclusive start:step:stop grid."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"SNR grid must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError(f"SNR grid step must be positive, got {step}")
        if stop < start:
            raise ValueError(f"SNR grid is empty: {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    return [float(text)]


def _cmd_mix(args) -> int:
    speech = read_wav(args.speech, downmix=args.downmix)
    noise = read_wav(args.noise, downmix=args.downmix)
    if speech.sample_rate != noise.sample_rate:
        raise ValueError(
            f"sample rates differ: speech {speech.sample_rate} Hz, noise {noise.sample_rate} Hz"
        )
    targets = _parse_snr_grid(args.snr_db)
    out = Path(args.output)
    outputs, records = [], []
    for target in targets:
        noisy, scale = mix_at_snr(speech.samples, noise.samples, target)
        achieved = snr(speech.samples, noisy)
        if len(targets) == 1:
            path = out
        else:
            path = out.with_name(f"{out.stem}_snr{target:g}dB{out.suffix or '.wav'}")
        clipped = write_wav(path, AudioBuffer(noisy, speech.sample_rate))
        print(f"{path}: target_snr_db={target:g} achieved_snr_db={achieved} scale={scale}")
        if clipped:
            print(f"{path}: clipped={clipped}", file=sys.stderr)
        outputs.append(path)
        records.append(
            {
                "path": str(path),
                "target_snr_db": target,
                "scale": scale,
                "achieved_snr_db": achieved,
                "clipped": clipped,
            }
        )
    config = {"snr_db": args.snr_db, "mixes": records, "sample_rate": speech.sample_rate}
    _write_manifest(out, "mix", config, args.seed, [args.speech, args.noise], outputs)
    return 0


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        threads = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, threads)


def _cmd_eval(args) -> int:
    options = _resolve_options(args, tuple(_DEFAULTS))
    method = options["method"]
    clean_dir, noisy_dir = Path(args.clean_dir), Path(args.noisy_dir)
    clean_names = {p.name for p in clean_dir.glob("*.wav")}
    noisy_names = {p.name for p in noisy_dir.glob("*.wav")}
    unpaired = sorted(clean_names ^ noisy_names)
    if unpaired:
        for name in unpaired:
            where = "noisy" if name in clean_names else "clean"
            print(f"unpaired: {name} (missing from {where} side)", file=sys.stderr)
        return 1
    names = sorted(clean_names)
    if not names:
        raise ValueError(f"no .wav pairs under {clean_dir} and {noisy_dir}")

    def evaluate(name: str) -> SnrReport:
        clean = read_wav(clean_dir / name)
        noisy = read_wav(noisy_dir / name)
        if clean.sample_rate != noisy.sample_rate or clean.samples.size != noisy.samples.size:
            raise ValueError(f"{name}: clean and noisy clips do not line up")
        enhanced, iterations = _run_method(method, noisy.samples, options)
        return SnrReport(
            clip_id=name,
            method=method,
            input_snr_db=snr(clean.samples, noisy.samples),
            output_snr_db=snr(clean.samples, enhanced),
            iterations=iterations,
        )

    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(evaluate, names))
    else:
        rows = [evaluate(name) for name in names]
    rows.sort(key=lambda r: r.clip_id)

    report = Path(args.report)
    header = ["clip_id", "method", "input_snr_db", "output_snr_db", "iterations"]
    table = [[r.clip_id, r.method, r.input_snr_db, r.output_snr_db, r.iterations] for r in rows]
    table.append(
        [
            "mean",
            method,
            float(np.mean([r.input_snr_db for r in rows])),
            float(np.mean([r.output_snr_db for r in rows])),
            float(np.mean([r.iterations for r in rows])),
        ]
    )
    _write_csv(report, header, table)
    outputs = [report]
    if not args.no_figure:
        figure = report.with_suffix(".png")
        plots.save_eval_figure(figure, rows, method)
        outputs.append(figure)
    _write_manifest(report, "eval", dict(options), args.seed, [clean_dir, noisy_dir], outputs)
    return 0


def _cmd_spectrum(args) -> int:
    buf = read_wav(args.input, downmix=args.downmix)
    frame_len = args.frame_len if args.frame_len is not None else _DEFAULTS["frame_len"]
    plan = FramePlan(frame_len, frame_len // 2, window="rectangular")
    frames = segment(buf.samples, plan)
    if not 0 <= args.frame_index < frames.shape[0]:
        raise ValueError(
            f"frame index {args.frame_index} out of range: clip has {frames.shape[0]} frames"
        )
    frame = frames[args.frame_index]
    ks = args.k if args.k else list(DEFAULT_SPECTRUM_KS)
    out = Path(args.output)
    stem = out.with_suffix("")
    outputs, entries = [], []
    for k in ks:
        basis = basis_circulant(frame_len, k, k1_identity=args.k1_identity)
        coefficients = gft_block(basis, frame[None, :])[0]
        magnitudes = np.abs(coefficients)
        path = stem.with_name(f"{stem.name}_k{k}.csv")
        rows = [
            [m, basis.eigenvalues[m].real, basis.eigenvalues[m].imag, magnitudes[m]]
            for m in range(frame_len)
        ]
        _write_csv(path, ["bin", "eigenvalue_re", "eigenvalue_im", "magnitude"], rows)
        outputs.append(path)
        entries.append((k, basis.eigenvalues, magnitudes))
    if not args.no_figure:
        figure = stem.with_suffix(".png")
        plots.save_spectrum_figure(figure, frame, buf.sample_rate, entries)
        outputs.append(figure)
    config = {
        "k": ks,
        "frame_len": frame_len,
        "frame_index": args.frame_index,
        "k1_identity": args.k1_identity,
        "sample_rate": buf.sample_rate,
    }
    _write_manifest(out, "spectrum", config, args.seed, [args.input], outputs)
    return 0


def _add_common(sub) -> None:
    sub.add_argument("--seed", type=int, default=0, help="recorded in the manifest")
    sub.add_argument("--config", help="key=value file; flags override it")


def _add_method_flags(sub) -> None:
    sub.add_argument("--method", choices=METHODS, help="enhancement method (default igss)")
    sub.add_argument("--k", type=int, help="combined shift order (default 3)")
    sub.add_argument("--frame-len", type=int, dest="frame_len", help="frame length (default 256)")
    sub.add_argument("--overlap", type=float, help="frame overlap fraction (default 0.5)")
    sub.add_argument("--alpha", type=float, help="iteration stop threshold (default 1e-5)")
    sub.add_argument("--max-iters", type=int, dest="max_iters", help="iteration cap (default 30)")
    sub.add_argument(
        "--noise-frames",
        type=int,
        dest="noise_frames",
        help="leading frames treated as noise (default 5)",
    )
    sub.add_argument("--floor", type=float, help="post-subtraction magnitude floor (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphsub", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    enhance = commands.add_parser("enhance", help="denoise one WAV file")
    enhance.add_argument("input")
    enhance.add_argument("output")
    enhance.add_argument("--downmix", action="store_true", help="average multichannel input")
    _add_method_flags(enhance)
    _add_common(enhance)
    enhance.set_defaults(func=_cmd_enhance)

    mix = commands.add_parser("mix", help="add noise to speech at exact SNRs")
    mix.add_argument("speech")
    mix.add_argument("noise")
    mix.add_argument("output")
    mix.add_argument(
        "--snr-db",
        dest="snr_db",
        required=True,
        help="target SNR in dB, or an inclusive start:step:stop grid",
    )
    mix.add_argument("--downmix", action="store_true", help="average multichannel inputs")
    _add_common(mix)
    mix.set_defaults(func=_cmd_mix)

    evaluate = commands.add_parser("eval", help="SNR report over paired clean/noisy directories")
    evaluate.add_argument("clean_dir")
    evaluate.add_argument("noisy_dir")
    evaluate.add_argument("--report", required=True, help="output CSV path")
    evaluate.add_argument("--no-figure", action="store_true", help="skip the PNG plot")
    _add_method_flags(evaluate)
    _add_common(evaluate)
    evaluate.set_defaults(func=_cmd_eval)

    spectrum = commands.add_parser("spectrum", help="dump per-bin spectra of one frame")
    spectrum.add_argument("input")
    spectrum.add_argument("output", help="CSV stem; one file per k is written")
    spectrum.add_argument("--k", type=int, nargs="+", help="shift orders (default 1 3 8 20 50)")
    spectrum.add_argument(
        "--frame-len", type=int, dest="frame_len", help="frame length (default 256)"
    )
    spectrum.add_argument(
        "--frame-index", type=int, dest="frame_index", default=0, help="frame to analyze"
    )
    spectrum.add_argument(
        "--k1-identity",
        action="store_true",
        dest="k1_identity",
        help="treat k=1 as the identity transform instead of the Fourier basis",
    )
    spectrum.add_argument("--no-figure", action="store_true", help="skip the PNG plot")
    spectrum.add_argument("--downmix", action="store_true", help="average multichannel input")
    _add_common(spectrum)
    spectrum.set_defaults(func=_cmd_spectrum)

    return parser


def _normalize_argv(argv):
    """Glue --snr-db to its value so grids like -5:5:5 do not parse as flags."""
    out = []
    it = iter(argv)
    for token in it:
        if token == "--snr-db":
            value = next(it, None)
            out.append(token if value is None else f"--snr-db={value}")
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_normalize_argv(argv))
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception:  # pragma: no cover - defensive
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
