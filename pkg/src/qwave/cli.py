"""Command-line interface.

Subcommands: multiply (two signals -> four component WAVs + metrics),
convolve (signal x kernel -> convolved WAV + oracle comparison), shot-sweep
(accuracy vs shot count for one signal pair), selftest. Every run that
writes files also writes a manifest.txt capturing hashed inputs and the full
configuration so it can be reproduced bit for bit.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys

import numpy as np

from . import __version__
from .audio import (
    AudioBuffer,
    load_wav,
    make_chunks,
    normalize_for_encoding,
    process_chunks,
    stitch_and_write,
    write_wav,
)
from .encoding import SignalChunk
from .errors import QwaveError, ShapeError
from .pipelines import (
    classical_circular_convolution,
    classical_dft,
    convolve_optimized,
    extract_component,
    pointwise_multiply_state,
    zero_pad,
)
from .sampling import (
    STANDARD_TEST_PAIR,
    decode_component,
    fidelity_percent,
    rmsd_percent,
    sample_counts,
)
from .selftest import run_selftest

_MAX_TEXT_SAMPLE = 1.0 - 2.0 ** -15

MANIFEST_VERSION = 1


def _parse_shots(text: str):
    if text == "exact":
        return None
    try:
        shots = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"shots must be a positive integer or 'exact', got {text!r}")
    if shots < 1:
        raise argparse.ArgumentTypeError(f"shots must be >= 1, got {shots}")
    return shots


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def _load_signal(path, sample_rate: int) -> AudioBuffer:
    """WAV by extension, otherwise a whitespace-separated numeric text file."""
    if str(path).lower().endswith(".wav"):
        return load_wav(path)
    values = np.loadtxt(path, dtype=np.float64, ndmin=1)
    if values.ndim != 1:
        raise ShapeError(f"{path}: expected a single column of samples")
    if not np.all(np.isfinite(values)):
        raise ShapeError(f"{path}: samples must be finite")
    if np.abs(values).max() > 1.0:
        raise ShapeError(f"{path}: samples must lie in [-1, 1]")
    return AudioBuffer(np.clip(values, -1.0, _MAX_TEXT_SAMPLE), sample_rate)


def _write_manifest(out_dir, entries) -> str:
    path = os.path.join(out_dir, "manifest.txt")
    with open(path, "w") as fh:
        fh.write(f"manifest_version = {MANIFEST_VERSION}\n")
        fh.write(f"tool = qwave {__version__}\n")
        for key, value in entries:
            fh.write(f"{key} = {value}\n")
    return path


def _shots_text(shots) -> str:
    return "exact" if shots is None else str(shots)


BUILTIN_KERNELS = ("identity", "shift-K", "moving-average-K", "low-pass-K")


def build_kernel(spec: str, chunk_size: int, padded_len: int, domain: str = "auto"):
    """Resolve a kernel spec to (time_domain_values, domain_label).

    Built-ins: identity, shift-K, moving-average-K (time domain) and
    low-pass-K (Fourier domain: keep bins within K of DC, inverse-transformed
    here before the pipeline). Anything else is read as a numeric file whose
    domain comes from the flag: time (length <= chunk_size) or fourier
    (length == padded_len exactly).
    """
    name = spec.strip()
    if name == "identity":
        return np.array([1.0]), "time"
    if name.startswith("shift-"):
        k = _kernel_param(name, "shift-")
        if not 0 <= k < chunk_size:
            raise ShapeError(f"shift amount {k} must be in [0, chunk_size)")
        kernel = np.zeros(k + 1)
        kernel[k] = 1.0
        return kernel, "time"
    if name.startswith("moving-average-"):
        k = _kernel_param(name, "moving-average-")
        if not 1 <= k <= chunk_size:
            raise ShapeError(f"moving-average width {k} must be in [1, chunk_size]")
        return np.full(k, 1.0 / k), "time"
    if name.startswith("low-pass-"):
        k = _kernel_param(name, "low-pass-")
        if not 0 <= k <= padded_len // 2:
            raise ShapeError(f"low-pass cutoff {k} must be in [0, {padded_len // 2}]")
        bins = np.arange(padded_len)
        ghat = np.where(np.minimum(bins, padded_len - bins) <= k, 1.0, 0.0)
        return classical_dft(ghat, inverse=True), "fourier"
    # numeric file
    values = np.loadtxt(name, dtype=np.float64, ndmin=1)
    if values.ndim != 1 or not np.all(np.isfinite(values)):
        raise ShapeError(f"{name}: kernel must be a finite 1-D sequence")
    if domain == "fourier":
        if values.size != padded_len:
            raise ShapeError(
                f"{name}: Fourier-domain kernel must have exactly {padded_len} bins, "
                f"got {values.size}"
            )
        return classical_dft(values, inverse=True), "fourier"
    if values.size > chunk_size:
        raise ShapeError(
            f"{name}: kernel length {values.size} exceeds chunk size {chunk_size}"
        )
    return values, "time"


def _kernel_param(name: str, prefix: str) -> int:
    tail = name[len(prefix):]
    try:
        return int(tail)
    except ValueError:
        raise ShapeError(f"bad kernel spec {name!r}: {tail!r} is not an integer")


def _add_common_flags(parser) -> None:
    parser.add_argument("--chunk-size", type=int, default=8,
                        help="samples per chunk, a power of two (default 8)")
    parser.add_argument("--shots", type=_parse_shots, default=None, metavar="N|exact",
                        help="shot count for sampling, or 'exact' (default exact)")
    parser.add_argument("--seed", type=int, default=0,
                        help="base seed; per-chunk streams derive from it (default 0)")
    parser.add_argument("--workers", type=int, default=1,
                        help="process pool size for chunk processing (default 1)")
    parser.add_argument("--normalization", choices=("assume-positive", "shift-scale"),
                        default="assume-positive",
                        help="how raw samples map into [0, 1) before encoding")
    parser.add_argument("--sample-rate", type=int, default=8000,
                        help="sample rate assumed for text-file inputs (default 8000)")
    parser.add_argument("--out", required=True, help="output directory")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwave",
        description="Amplitude-encoded signal processing on a statevector simulator.",
    )
    parser.add_argument("--version", action="version", version=f"qwave {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_mul = sub.add_parser("multiply", help="pointwise product of two signals")
    p_mul.add_argument("signal_f", help="first input (.wav or numeric text)")
    p_mul.add_argument("signal_g", help="second input (.wav or numeric text)")
    _add_common_flags(p_mul)

    p_conv = sub.add_parser("convolve", help="circular convolution with a kernel")
    p_conv.add_argument("signal_f", help="input signal (.wav or numeric text)")
    p_conv.add_argument("--kernel", required=True,
                        help="built-in (identity, shift-K, moving-average-K, low-pass-K) "
                             "or a numeric file")
    p_conv.add_argument("--kernel-domain", choices=("auto", "time", "fourier"),
                        default="auto",
                        help="interpretation of a file kernel (built-ins pick their own)")
    _add_common_flags(p_conv)

    p_sweep = sub.add_parser("shot-sweep", help="accuracy vs shot count")
    p_sweep.add_argument("--signal-f", default=None,
                         help="numeric text file (default: built-in 8-sample pair)")
    p_sweep.add_argument("--signal-g", default=None)
    p_sweep.add_argument("--shots-list",
                         default="10,100,1000,10000,100000,1000000,10000000",
                         help="comma-separated shot counts; 'exact' entries allowed")
    p_sweep.add_argument("--num-seeds", type=int, default=20,
                         help="seeds per shot count; medians are reported (default 20)")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--out", required=True)

    sub.add_parser("selftest", help="run built-in consistency checks")
    return parser


def _cmd_multiply(args) -> int:
    buf_f = _load_signal(args.signal_f, args.sample_rate)
    buf_g = _load_signal(args.signal_g, args.sample_rate)
    if buf_f.sample_rate != buf_g.sample_rate:
        raise ShapeError(
            f"sample rates differ: {buf_f.sample_rate} vs {buf_g.sample_rate}"
        )
    if len(buf_f) != len(buf_g):
        raise ShapeError(f"signals differ in length: {len(buf_f)} vs {len(buf_g)}")
    values_f, record = normalize_for_encoding(buf_f, args.normalization)
    values_g, _ = normalize_for_encoding(buf_g, args.normalization)
    plan_f = make_chunks(values_f, args.chunk_size)
    plan_g = make_chunks(values_g, args.chunk_size)
    quad = process_chunks(plan_f, plan_g, args.shots, args.seed, args.workers)
    paths = stitch_and_write(quad, plan_f, buf_f.sample_rate, args.out, record)
    _write_manifest(args.out, [
        ("command", "multiply"),
        ("input_f", args.signal_f),
        ("input_f_sha256", _sha256(args.signal_f)),
        ("input_g", args.signal_g),
        ("input_g_sha256", _sha256(args.signal_g)),
        ("sample_rate", buf_f.sample_rate),
        ("chunk_size", args.chunk_size),
        ("num_chunks", plan_f.num_chunks),
        ("tail_padding", plan_f.tail_padding),
        ("shots", _shots_text(args.shots)),
        ("seed", args.seed),
        ("workers", args.workers),
        ("normalization", record.mode),
        ("normalization_shift", record.shift),
        ("normalization_scale", record.scale),
        ("outputs", " ".join(sorted(os.path.basename(p) for p in paths.values()))),
    ])
    print(f"multiply: {plan_f.num_chunks} chunks x {args.chunk_size} samples, "
          f"shots={_shots_text(args.shots)}")
    for key in sorted(quad.components):
        print(f"  component_{key}.wav")
    print(f"  metrics.csv manifest.txt -> {args.out}")
    return 0


def _cmd_convolve(args) -> int:
    if args.shots is not None:
        raise ShapeError(
            "convolve runs on the exact statevector; --shots exact is the only mode"
        )
    buf = _load_signal(args.signal_f, args.sample_rate)
    padded_len = 2 * args.chunk_size
    kernel, domain = build_kernel(args.kernel, args.chunk_size, padded_len,
                                  args.kernel_domain)
    values, record = normalize_for_encoding(buf, args.normalization)
    plan = make_chunks(values, args.chunk_size)
    pieces = []
    rows = []
    for i, chunk in enumerate(plan.chunks):
        result = convolve_optimized(chunk, kernel, padded_len)
        reference = classical_circular_convolution(
            zero_pad(chunk, padded_len).values,
            np.concatenate([kernel, np.zeros(padded_len - kernel.size)]),
        )
        denom = float(np.linalg.norm(reference))
        rel = float(np.linalg.norm(result - reference)) / denom if denom else 0.0
        rows.append((i, rel))
        # chunks are disjoint and unwindowed, so the linear tail past
        # chunk_size has nowhere to go; it is dropped, not overlap-added
        pieces.append(result[: args.chunk_size].real / chunk.scale)
    convolved = np.concatenate(pieces)[: plan.total_samples]
    os.makedirs(args.out, exist_ok=True)
    out_wav = os.path.join(args.out, "convolved.wav")
    write_wav(out_wav, AudioBuffer(np.clip(convolved, -1.0, 1.0), buf.sample_rate))
    metrics_path = os.path.join(args.out, "metrics.csv")
    with open(metrics_path, "w") as fh:
        fh.write("chunk_index,rel_l2_vs_oracle\n")
        for i, rel in rows:
            fh.write(f"{i},{rel:.10g}\n")
    _write_manifest(args.out, [
        ("command", "convolve"),
        ("input_f", args.signal_f),
        ("input_f_sha256", _sha256(args.signal_f)),
        ("kernel", args.kernel),
        ("kernel_domain", domain),
        ("sample_rate", buf.sample_rate),
        ("chunk_size", args.chunk_size),
        ("padded_length", padded_len),
        ("num_chunks", plan.num_chunks),
        ("tail_padding", plan.tail_padding),
        ("shots", "exact"),
        ("seed", args.seed),
        ("workers", args.workers),
        ("normalization", record.mode),
        ("outputs", "convolved.wav manifest.txt metrics.csv"),
    ])
    worst = max((rel for _, rel in rows), default=0.0)
    print(f"convolve: {plan.num_chunks} chunks, kernel {args.kernel} ({domain} domain), "
          f"worst rel l2 vs oracle {worst:.3e}")
    print(f"  convolved.wav metrics.csv manifest.txt -> {args.out}")
    return 0


def _cmd_shot_sweep(args) -> int:
    if (args.signal_f is None) != (args.signal_g is None):
        raise ShapeError("provide both --signal-f and --signal-g, or neither")
    if args.signal_f is None:
        f_vals, g_vals = STANDARD_TEST_PAIR
        signal_desc = "built-in"
    else:
        f_vals = _load_signal(args.signal_f, 8000).samples
        g_vals = _load_signal(args.signal_g, 8000).samples
        signal_desc = f"{args.signal_f} {args.signal_g}"
    if np.any(f_vals < 0) or np.any(g_vals < 0):
        raise ShapeError("sweep signals must be non-negative")
    chunk_f = SignalChunk.from_values(f_vals)
    chunk_g = SignalChunk.from_values(g_vals)
    product = pointwise_multiply_state(chunk_f, chunk_g)
    ideal00 = np.abs(extract_component(product, (0, 0)))
    if args.num_seeds < 1:
        raise ShapeError(f"num-seeds must be >= 1, got {args.num_seeds}")

    shot_specs = []
    for token in args.shots_list.split(","):
        token = token.strip()
        if not token:
            continue
        shot_specs.append(None if token == "exact" else int(token))

    os.makedirs(args.out, exist_ok=True)
    sweep_path = os.path.join(args.out, "sweep.csv")
    with open(sweep_path, "w") as fh:
        fh.write("shots,log10_shots,rmsd_percent_median,rmsd_percent_min,"
                 "rmsd_percent_max,fidelity_percent_median,fidelity_percent_min,"
                 "fidelity_percent_max,num_seeds\n")
        for shots in shot_specs:
            if shots is None:
                fh.write(f"exact,,0,0,0,100,100,100,{args.num_seeds}\n")
                print("shots=exact rmsd=0% fidelity=100%")
                continue
            rmsds = np.empty(args.num_seeds)
            fids = np.empty(args.num_seeds)
            for i in range(args.num_seeds):
                counts = sample_counts(product.state, shots, [args.seed, shots, i])
                rmsds[i] = rmsd_percent(decode_component(counts, (0, 0)), ideal00)
                fids[i] = fidelity_percent(counts, product.state)
            fh.write(
                f"{shots},{np.log10(shots):.6g},{np.median(rmsds):.10g},"
                f"{rmsds.min():.10g},{rmsds.max():.10g},{np.median(fids):.10g},"
                f"{fids.min():.10g},{fids.max():.10g},{args.num_seeds}\n"
            )
            print(f"shots={shots} rmsd={np.median(rmsds):.4g}% "
                  f"fidelity={np.median(fids):.6g}%")
    _write_manifest(args.out, [
        ("command", "shot-sweep"),
        ("signals", signal_desc),
        ("shots_list", args.shots_list),
        ("num_seeds", args.num_seeds),
        ("seed", args.seed),
        ("outputs", "manifest.txt sweep.csv"),
    ])
    print(f"  sweep.csv manifest.txt -> {args.out}")
    return 0


def _cmd_selftest() -> int:
    results = run_selftest()
    failed = 0
    for name, ok, detail in results:
        print(f"selftest {name}: {'PASS' if ok else 'FAIL'} ({detail})")
        failed += 0 if ok else 1
    return 1 if failed else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "multiply":
            return _cmd_multiply(args)
        if args.command == "convolve":
            return _cmd_convolve(args)
        if args.command == "shot-sweep":
            return _cmd_shot_sweep(args)
        return _cmd_selftest()
    except QwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
