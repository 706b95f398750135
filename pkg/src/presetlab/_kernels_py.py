"""Pure-Python fallback for the compiled DSP kernels.

scipy.signal.lfilter runs the same direct-form II transposed recurrence
at the same precision, and the elementwise helpers spell out the same
operation order with float32 scalars, so every function here is
bit-identical to its compiled twin; the only cost is extra array passes.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter

WAVE_SAW = 0
WAVE_SQUARE = 1
WAVE_TRIANGLE = 2

_F1 = np.float32(1.0)


def biquad_blocks(x, coeffs, block_size, zi):
    n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    z = np.asarray(zi, dtype=np.float64)
    a = np.empty(3, dtype=np.float64)
    a[0] = 1.0
    for i in range(coeffs.shape[0]):
        start = i * block_size
        stop = min(start + block_size, n)
        a[1] = coeffs[i, 3]
        a[2] = coeffs[i, 4]
        out[start:stop], z = lfilter(coeffs[i, :3], a, x[start:stop], zi=z)
    zi[:] = z
    return out


def biquad_blocks_f32io(x, coeffs, block_size, two_pass):
    y = biquad_blocks(x.astype(np.float64), coeffs, block_size, np.zeros(2))
    if two_pass:
        y = biquad_blocks(y, coeffs, block_size, np.zeros(2))
    return y.astype(np.float32)


def vcf_amp_f32(x, coeffs, block_size, two_pass, env, g):
    y = biquad_blocks_f32io(x, coeffs, block_size, two_pass)
    mul2_f32(y, env, g)
    return y


def power_c64(spec):
    return spec.real ** 2 + spec.imag ** 2


def iir1_f32(x, b0, b1, a1):
    b = np.array([b0, b1], dtype=np.float32)
    a = np.array([1.0, a1], dtype=np.float32)
    return lfilter(b, a, x)


def dc_clip_f32(x, b0, b1, a1, lo, hi):
    y = iir1_f32(x, b0, b1, a1)
    np.clip(y, lo, hi, out=y)
    return y


def biquad_f32(x, b0, b1, b2, a1, a2):
    b = np.array([b0, b1, b2], dtype=np.float32)
    a = np.array([1.0, a1, a2], dtype=np.float32)
    return lfilter(b, a, x)


def delay_mix_f32(x, d, fb, b0, a1):
    n = x.shape[0]
    b = np.array([b0], dtype=np.float32)
    a = np.array([1.0, a1], dtype=np.float32)
    fb = np.float32(fb)
    wet = np.zeros(n, dtype=np.float32)
    zi = np.zeros(1, dtype=np.float32)
    for start in range(d, n, d):
        stop = min(start + d, n)
        src = x[start - d : stop - d] + fb * wet[start - d : stop - d]
        wet[start:stop], zi = lfilter(b, a, src, zi=zi)
    return wet


def drive_f32(x, g):
    d = x * g
    return d / (_F1 + np.abs(d))


def osc_acc_f32(acc, phase, det, wave, pw, level):
    t = phase * det
    p = t - np.floor(t)
    if wave == WAVE_SAW:
        w = np.float32(2.0) * p - _F1
    elif wave == WAVE_SQUARE:
        w = np.where(p < pw, _F1, -_F1)
    else:
        w = _F1 - np.float32(4.0) * np.abs(p - np.float32(0.5))
    acc += level * w


def sine_phase_f32(phase, det, scale):
    t = phase * det
    return scale * (t - np.floor(t))


def acc_scaled_f32(acc, w, s):
    acc += s * w


def mul2_f32(y, env, g):
    y *= env
    y *= g
