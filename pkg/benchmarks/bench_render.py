#!/usr/bin/env python3
"""Render-throughput benchmark: compiled kernels against the pure-Python
fallback.

Renders one generated bank under each kernel backend and reports per-preset
time, realtime factor, and the speedup the extension buys. Both backends
produce bit-identical audio (tests/test_kernels.py pins that), so this is a
pure speed comparison. Stage memos are cleared before every timed pass so
each backend computes every preset from scratch.

Usage: python3 benchmarks/bench_render.py [--presets N] [--repeats R]
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time

from presetlab import _kernels_py, kernels
from presetlab.bank import generate_bank
from presetlab.render import DEFAULT_CONFIG, render
from presetlab.schema import load_reference_schema

_COMPILED = {name: getattr(kernels, name) for name in kernels.__all__
             if callable(getattr(kernels, name))}
_FALLBACK = {name: getattr(_kernels_py, name) for name in _COMPILED}


def _use(backend: dict) -> None:
    for name, fn in backend.items():
        setattr(kernels, name, fn)


def _reset_stage_memos() -> None:
    render_mod = sys.modules["presetlab.render"]
    render_mod._OSC_CACHE = render_mod._StageCache(16)
    render_mod._ENV_CACHE = render_mod._StageCache(16)
    render_mod._COEFF_CACHE = render_mod._StageCache(32)


def _time_bank(presets, schema, repeats: int) -> tuple[float, str]:
    best = float("inf")
    digest = hashlib.sha256()
    for _ in range(repeats):
        _reset_stage_memos()
        digest = hashlib.sha256()
        start = time.perf_counter()
        for preset in presets:
            digest.update(render(preset, schema).samples.tobytes())
        best = min(best, time.perf_counter() - start)
    return best, digest.hexdigest()[:16]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--presets", type=int, default=40,
                        help="bank size to render (default 40)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed passes per backend, best-of (default 3)")
    parser.add_argument("--seed", type=int, default=91)
    args = parser.parse_args(argv)

    schema = load_reference_schema()
    presets = generate_bank(schema, args.presets, seed=args.seed).presets
    audio_seconds = args.presets * DEFAULT_CONFIG.duration

    print(f"bank: {args.presets} presets x {DEFAULT_CONFIG.duration:.1f}s "
          f"@ {DEFAULT_CONFIG.sample_rate} Hz, best of {args.repeats}")
    print(f"active extension backend: {kernels.BACKEND}")

    results = {}
    for label, backend in (("compiled", _COMPILED), ("fallback", _FALLBACK)):
        _use(backend)
        # warm allocators and grid caches outside the timed region
        _reset_stage_memos()
        render(presets[0], schema)
        elapsed, digest = _time_bank(presets, schema, args.repeats)
        results[label] = (elapsed, digest)
        print(f"{label:9s} {elapsed:7.3f}s total   "
              f"{1000.0 * elapsed / args.presets:6.2f} ms/preset   "
              f"{audio_seconds / elapsed:6.0f}x realtime   sha256[:16]={digest}")
    _use(_COMPILED)

    (t_c, d_c), (t_f, d_f) = results["compiled"], results["fallback"]
    print(f"speedup: {t_f / t_c:.2f}x  (audio {'identical' if d_c == d_f else 'DIFFERS'})")
    return 0 if d_c == d_f else 1


if __name__ == "__main__":
    raise SystemExit(main())
