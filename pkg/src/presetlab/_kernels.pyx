# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled DSP inner loops.

Every function mirrors the fallback's numpy/scipy operation order and
precision exactly, so the compiled and fallback backends produce
bit-identical output. The float32 helpers fuse elementwise stages that
would otherwise each make a full pass over the signal.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabsf, floorf

cnp.import_array()

WAVE_SAW = 0
WAVE_SQUARE = 1
WAVE_TRIANGLE = 2


def biquad_blocks(
    const cnp.float64_t[::1] x,
    const cnp.float64_t[:, ::1] coeffs,
    int block_size,
    cnp.float64_t[::1] zi,
):
    """Filter x through a biquad whose coefficients switch per block.

    coeffs rows are (b0, b1, b2, a1, a2) with a0 already normalized to 1.
    zi is the 2-element DF2T state, updated in place.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t nblocks = coeffs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef cnp.float64_t[::1] y = out
    cdef cnp.float64_t b0, b1, b2, a1, a2, z0, z1, xn, yn
    cdef Py_ssize_t i, j, start, stop

    z0 = zi[0]
    z1 = zi[1]
    for i in range(nblocks):
        b0 = coeffs[i, 0]
        b1 = coeffs[i, 1]
        b2 = coeffs[i, 2]
        a1 = coeffs[i, 3]
        a2 = coeffs[i, 4]
        start = i * block_size
        stop = start + block_size
        if stop > n:
            stop = n
        for j in range(start, stop):
            xn = x[j]
            yn = b0 * xn + z0
            z0 = b1 * xn + z1 - a1 * yn
            z1 = b2 * xn - a2 * yn
            y[j] = yn
    zi[0] = z0
    zi[1] = z1
    return out


def biquad_blocks_f32io(
    const cnp.float32_t[::1] x,
    const cnp.float64_t[:, ::1] coeffs,
    int block_size,
    bint two_pass,
):
    """biquad_blocks on float32 audio: widen to float64, run one or two
    zero-state passes chained in double precision, round once on output."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t nblocks = coeffs.shape[0]
    cdef cnp.ndarray[cnp.float32_t, ndim=1] out = np.empty(n, dtype=np.float32)
    cdef cnp.float32_t[::1] y32 = out
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tmp = np.empty(n, dtype=np.float64)
    cdef cnp.float64_t[::1] t = tmp
    cdef cnp.float64_t b0, b1, b2, a1, a2, z0, z1, xn, yn
    cdef Py_ssize_t i, j, start, stop
    cdef int p, passes = 2 if two_pass else 1

    for p in range(passes):
        z0 = 0.0
        z1 = 0.0
        for i in range(nblocks):
            b0 = coeffs[i, 0]
            b1 = coeffs[i, 1]
            b2 = coeffs[i, 2]
            a1 = coeffs[i, 3]
            a2 = coeffs[i, 4]
            start = i * block_size
            stop = start + block_size
            if stop > n:
                stop = n
            if p == passes - 1:
                for j in range(start, stop):
                    xn = t[j] if p else <cnp.float64_t> x[j]
                    yn = b0 * xn + z0
                    z0 = b1 * xn + z1 - a1 * yn
                    z1 = b2 * xn - a2 * yn
                    y32[j] = <cnp.float32_t> yn
            else:
                for j in range(start, stop):
                    xn = <cnp.float64_t> x[j]
                    yn = b0 * xn + z0
                    z0 = b1 * xn + z1 - a1 * yn
                    z1 = b2 * xn - a2 * yn
                    t[j] = yn
    return out


def vcf_amp_f32(
    const cnp.float32_t[::1] x,
    const cnp.float64_t[:, ::1] coeffs,
    int block_size,
    bint two_pass,
    const cnp.float32_t[::1] env,
    cnp.float32_t g,
):
    """biquad_blocks_f32io followed by y *= env, y *= g, fused into the
    output store of the final filter pass."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t nblocks = coeffs.shape[0]
    cdef cnp.ndarray[cnp.float32_t, ndim=1] out = np.empty(n, dtype=np.float32)
    cdef cnp.float32_t[::1] y32 = out
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tmp = np.empty(n if two_pass else 0, dtype=np.float64)
    cdef cnp.float64_t[::1] t = tmp
    cdef cnp.float64_t b0, b1, b2, a1, a2, z0, z1, xn, yn
    cdef cnp.float32_t yf
    cdef Py_ssize_t i, j, start, stop
    cdef int p, passes = 2 if two_pass else 1

    for p in range(passes):
        z0 = 0.0
        z1 = 0.0
        for i in range(nblocks):
            b0 = coeffs[i, 0]
            b1 = coeffs[i, 1]
            b2 = coeffs[i, 2]
            a1 = coeffs[i, 3]
            a2 = coeffs[i, 4]
            start = i * block_size
            stop = start + block_size
            if stop > n:
                stop = n
            if p == passes - 1:
                for j in range(start, stop):
                    xn = t[j] if p else <cnp.float64_t> x[j]
                    yn = b0 * xn + z0
                    z0 = b1 * xn + z1 - a1 * yn
                    z1 = b2 * xn - a2 * yn
                    yf = <cnp.float32_t> yn
                    y32[j] = (yf * env[j]) * g
            else:
                for j in range(start, stop):
                    xn = <cnp.float64_t> x[j]
                    yn = b0 * xn + z0
                    z0 = b1 * xn + z1 - a1 * yn
                    z1 = b2 * xn - a2 * yn
                    t[j] = yn
    return out


def power_c64(spec):
    """Power spectrum of a C-contiguous complex64 matrix: re^2 + im^2."""
    cdef const cnp.float32_t[:, ::1] xv = spec.view(np.float32)
    cdef Py_ssize_t rows = xv.shape[0], cols = xv.shape[1] // 2
    cdef cnp.ndarray[cnp.float32_t, ndim=2] out = np.empty((rows, cols), dtype=np.float32)
    cdef cnp.float32_t[:, ::1] y = out
    cdef cnp.float32_t re, im
    cdef Py_ssize_t i, j

    for i in range(rows):
        for j in range(cols):
            re = xv[i, 2 * j]
            im = xv[i, 2 * j + 1]
            y[i, j] = re * re + im * im
    return out


def iir1_f32(
    const cnp.float32_t[::1] x,
    cnp.float32_t b0,
    cnp.float32_t b1,
    cnp.float32_t a1,
):
    """First-order filter in single precision, zero initial state."""
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[cnp.float32_t, ndim=1] out = np.empty(n, dtype=np.float32)
    cdef cnp.float32_t[::1] y = out
    cdef cnp.float32_t z0 = 0.0, xn, yn
    cdef Py_ssize_t i

    for i in range(n):
        xn = x[i]
        yn = b0 * xn + z0
        z0 = b1 * xn - a1 * yn
        y[i] = yn
    return out


def dc_clip_f32(
    const cnp.float32_t[::1] x,
    cnp.float32_t b0,
    cnp.float32_t b1,
    cnp.float32_t a1,
    cnp.float32_t lo,
    cnp.float32_t hi,
):
    """iir1_f32 followed by a clip to [lo, hi] in the same pass.

    The filter state advances on the unclipped output; only the stored
    sample is clamped, and NaN passes through like numpy's clip.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[cnp.float32_t, ndim=1] out = np.empty(n, dtype=np.float32)
    cdef cnp.float32_t[::1] y = out
    cdef cnp.float32_t z0 = 0.0, xn, yn, s
    cdef Py_ssize_t i

    for i in range(n):
        xn = x[i]
        yn = b0 * xn + z0
        z0 = b1 * xn - a1 * yn
        s = yn
        if s < lo:
            s = lo
        if s > hi:
            s = hi
        y[i] = s
    return out


def biquad_f32(
    const cnp.float32_t[::1] x,
    cnp.float32_t b0,
    cnp.float32_t b1,
    cnp.float32_t b2,
    cnp.float32_t a1,
    cnp.float32_t a2,
):
    """Constant-coefficient biquad in single precision, zero initial state."""
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[cnp.float32_t, ndim=1] out = np.empty(n, dtype=np.float32)
    cdef cnp.float32_t[::1] y = out
    cdef cnp.float32_t z0 = 0.0, z1 = 0.0, xn, yn
    cdef Py_ssize_t i

    for i in range(n):
        xn = x[i]
        yn = b0 * xn + z0
        z0 = b1 * xn + z1 - a1 * yn
        z1 = b2 * xn - a2 * yn
        y[i] = yn
    return out


def delay_mix_f32(
    const cnp.float32_t[::1] x,
    Py_ssize_t d,
    cnp.float32_t fb,
    cnp.float32_t b0,
    cnp.float32_t a1,
):
    """Feedback delay line with a one-pole tone filter in the loop.

    wet[t] = tone(x[t - d] + fb * wet[t - d]); the first d samples are
    silent. The tone filter keeps scipy's padded-numerator update (the
    b1 term is zero) so output stays bit-identical to the fallback.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[cnp.float32_t, ndim=1] out = np.zeros(n, dtype=np.float32)
    cdef cnp.float32_t[::1] wet = out
    cdef cnp.float32_t z0 = 0.0, b1 = 0.0, src, yn
    cdef Py_ssize_t t

    for t in range(d, n):
        src = x[t - d] + fb * wet[t - d]
        yn = b0 * src + z0
        z0 = b1 * src - a1 * yn
        wet[t] = yn
    return out


def drive_f32(const cnp.float32_t[::1] x, cnp.float32_t g):
    """Soft saturation g*x / (1 + |g*x|), one pass."""
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[cnp.float32_t, ndim=1] out = np.empty(n, dtype=np.float32)
    cdef cnp.float32_t[::1] y = out
    cdef cnp.float32_t d
    cdef Py_ssize_t i

    for i in range(n):
        d = g * x[i]
        y[i] = d / (<cnp.float32_t> 1.0 + fabsf(d))
    return out


def osc_acc_f32(
    cnp.float32_t[::1] acc,
    const cnp.float32_t[::1] phase,
    cnp.float32_t det,
    int wave,
    cnp.float32_t pw,
    cnp.float32_t level,
):
    """acc += level * wave(frac(phase * det)) for the polynomial waveforms
    (WAVE_SAW, WAVE_SQUARE with threshold pw, WAVE_TRIANGLE), one pass."""
    cdef Py_ssize_t n = acc.shape[0]
    cdef cnp.float32_t t, p, w
    cdef Py_ssize_t i

    if wave == WAVE_SAW:
        for i in range(n):
            t = phase[i] * det
            p = t - floorf(t)
            w = <cnp.float32_t> 2.0 * p - <cnp.float32_t> 1.0
            acc[i] = acc[i] + level * w
    elif wave == WAVE_SQUARE:
        for i in range(n):
            t = phase[i] * det
            p = t - floorf(t)
            w = <cnp.float32_t> 1.0 if p < pw else <cnp.float32_t> -1.0
            acc[i] = acc[i] + level * w
    else:
        for i in range(n):
            t = phase[i] * det
            p = t - floorf(t)
            w = <cnp.float32_t> 1.0 - <cnp.float32_t> 4.0 * fabsf(p - <cnp.float32_t> 0.5)
            acc[i] = acc[i] + level * w


def sine_phase_f32(
    const cnp.float32_t[::1] phase,
    cnp.float32_t det,
    cnp.float32_t scale,
):
    """scale * frac(phase * det); the caller applies numpy's sin so both
    backends share one sine implementation."""
    cdef Py_ssize_t n = phase.shape[0]
    cdef cnp.ndarray[cnp.float32_t, ndim=1] out = np.empty(n, dtype=np.float32)
    cdef cnp.float32_t[::1] y = out
    cdef cnp.float32_t t
    cdef Py_ssize_t i

    for i in range(n):
        t = phase[i] * det
        y[i] = scale * (t - floorf(t))
    return out


def acc_scaled_f32(
    cnp.float32_t[::1] acc,
    const cnp.float32_t[::1] w,
    cnp.float32_t s,
):
    """acc += s * w, one pass."""
    cdef Py_ssize_t n = acc.shape[0]
    cdef Py_ssize_t i

    for i in range(n):
        acc[i] = acc[i] + s * w[i]


def mul2_f32(
    cnp.float32_t[::1] y,
    const cnp.float32_t[::1] env,
    cnp.float32_t g,
):
    """y *= env, then y *= g, in one pass."""
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t i

    for i in range(n):
        y[i] = (y[i] * env[i]) * g
