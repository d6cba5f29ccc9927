#!/usr/bin/env python3
# Copyright 2026 the seaug authors
# License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
"""Independent brute-force reference for the frequency-weighted segmental SNR.

Implements the documented parameterization from scratch with numpy — framing,
periodic Hann window, 25-band mel triangular filterbank, guarded per-band SNRs
clamped to [-10, 35] dB, activity gating at 40 dB below the loudest frame —
so the library can be checked against independently derived numbers.

The frozen output (fwssnr_oracle_expected.csv) is committed next to the wav
fixtures; regenerate it only if the metric contract itself changes.

Usage: fwssnr_oracle.py [--data-dir tests/data] [--out <csv>]
"""

import argparse
import math
import wave
from pathlib import Path

import numpy as np

FRAME_SECONDS = 0.032
HOP_SECONDS = 0.016
NUM_BANDS = 25
BAND_LOW_HZ = 50.0
WEIGHT_EXPONENT = 0.2
CLAMP_LOW_DB = -10.0
CLAMP_HIGH_DB = 35.0
ACTIVE_THRESHOLD = 1e-4
TINY = 1e-30


def load_wav(path):
    with wave.open(str(path), "rb") as w:
        if w.getsampwidth() != 2:
            raise ValueError(f"{path}: expected 16-bit PCM")
        raw = w.readframes(w.getnframes())
        x = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
        channels = w.getnchannels()
        if channels > 1:
            x = x.reshape(-1, channels).mean(axis=1)
        return x, w.getframerate()


def hz_to_mel(hz):
    return 2595.0 * math.log10(1.0 + hz / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (mel / 2595.0) - 1.0)


def mel_filterbank(num_bands, low_hz, rate, fft_len):
    bins = fft_len // 2 + 1
    mel_low = hz_to_mel(low_hz)
    mel_high = hz_to_mel(rate / 2.0)
    edges = [
        mel_to_hz(mel_low + (mel_high - mel_low) * i / (num_bands + 1))
        for i in range(num_bands + 2)
    ]
    freqs = np.arange(bins) * rate / fft_len
    filters = np.zeros((num_bands, bins))
    for j in range(num_bands):
        lo, mid, hi = edges[j], edges[j + 1], edges[j + 2]
        if mid > lo:
            rise = (freqs >= lo) & (freqs <= mid)
            filters[j, rise] = (freqs[rise] - lo) / (mid - lo)
        if hi > mid:
            fall = (freqs > mid) & (freqs <= hi)
            filters[j, fall] = (hi - freqs[fall]) / (hi - mid)
    return filters


def lround(x):
    # C lround: halfway cases away from zero (Python round() goes to even).
    return int(math.floor(x + 0.5))


def guarded_snr_db(num, den):
    if den <= TINY:
        return CLAMP_HIGH_DB
    if num <= TINY:
        return CLAMP_LOW_DB
    return min(CLAMP_HIGH_DB, max(CLAMP_LOW_DB, 10.0 * math.log10(num / den)))


def fwssnr(clean, test, rate):
    frame_len = lround(FRAME_SECONDS * rate)
    hop = lround(HOP_SECONDS * rate)
    if len(clean) < frame_len:
        raise ValueError("input shorter than one analysis frame")

    # conform the test signal to the reference length
    conformed = np.zeros(len(clean))
    n = min(len(clean), len(test))
    conformed[:n] = test[:n]

    starts = list(range(0, len(clean) - frame_len + 1, hop))
    energies = np.array(
        [float(np.sum(clean[s : s + frame_len] ** 2)) for s in starts]
    )
    peak = energies.max()
    if peak <= 0.0:
        raise ValueError("silent clean reference")
    active = energies > peak * ACTIVE_THRESHOLD

    i = np.arange(frame_len)
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * i / frame_len)
    filters = mel_filterbank(NUM_BANDS, BAND_LOW_HZ, rate, frame_len)

    def band_mags(x, s):
        spec = np.fft.rfft(x[s : s + frame_len] * window)
        return np.sqrt(filters @ (np.abs(spec) ** 2))

    total = 0.0
    count = 0
    for s, act in zip(starts, active):
        if not act:
            continue
        cb = band_mags(clean, s)
        tb = band_mags(conformed, s)
        num = 0.0
        den = 0.0
        for j in range(NUM_BANDS):
            c, t = cb[j], tb[j]
            w = max(c, 0.0) ** WEIGHT_EXPONENT
            num += w * guarded_snr_db(c * c, (c - t) * (c - t))
            den += w
        frame = (
            min(CLAMP_HIGH_DB, max(CLAMP_LOW_DB, num / den))
            if den > 0.0
            else CLAMP_LOW_DB
        )
        total += frame
        count += 1
    if count == 0:
        raise ValueError("no active frames")
    return total / count


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    default_data = Path(__file__).resolve().parent.parent / "data"
    ap.add_argument("--data-dir", type=Path, default=default_data)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()

    clean_dir = args.data_dir / "oracle" / "clean"
    test_dir = args.data_dir / "oracle" / "test"
    out_path = args.out or args.data_dir / "fwssnr_oracle_expected.csv"

    pairs = sorted(p.stem for p in clean_dir.glob("*.wav"))
    if not pairs:
        raise SystemExit(f"no fixture pairs under {clean_dir}")

    lines = ["pair,expected_fwssnr"]
    for pair in pairs:
        clean, rate_c = load_wav(clean_dir / f"{pair}.wav")
        test, rate_t = load_wav(test_dir / f"{pair}.wav")
        if rate_c != rate_t:
            raise SystemExit(f"{pair}: sample rates differ")
        value = fwssnr(clean, test, rate_c)
        lines.append(f"{pair},{value:.6f}")
        print(lines[-1])

    out_path.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(pairs)} rows to {out_path}")


if __name__ == "__main__":
    main()
