"""Randomized self-checks: detector vs brute force, invariances, Kronecker unitarity."""

import time
from dataclasses import dataclass, field

import numpy as np

from . import quantizer
from .codebook import canonicalize, verify_unitary_kron


@dataclass
class VerificationReport:
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, name, **details):
        self.failures.append((name, details))


def _random_input(rng, max_len, max_const):
    length = int(rng.integers(2, max_len + 1))
    consts = [n for n in (2, 4, 8, 16, 32) if n <= max_const]
    n_const = int(rng.choice(consts))
    y = rng.normal(size=length) + 1j * rng.normal(size=length)
    return y, n_const


def run_verification(max_len=6, max_const=8, trials=10_000, seed=0, detector=None,
                     tol=1e-9, unitary_max=16, stop_after=1):
    """Run every check and collect failures; stops a suite after ``stop_after`` counterexamples."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if max_len < 2 or max_const < 2:
        raise ValueError("max_len and max_const must be >= 2")
    detect = detector or quantizer.ncsd_detect
    rng = np.random.default_rng(seed)
    report = VerificationReport()

    n_bad = 0
    for _ in range(trials):
        y, n_const = _random_input(rng, max_len, max_const)
        fast = detect(y, n_const)
        ref = quantizer.exhaustive_psk_detect(y, n_const)
        report.checks += 1
        if abs(fast.metric - ref.metric) > tol * max(1.0, ref.metric):
            report.fail("oracle", y=y.tolist(), n_const=n_const, fast=fast.codeword.g,
                        fast_metric=fast.metric, best=ref.codeword.g, best_metric=ref.metric)
            n_bad += 1
            if n_bad >= stop_after:
                break

    n_inv = max(1, trials // 10)
    for _ in range(n_inv):
        y, n_const = _random_input(rng, max_len, max_const)
        base = detect(y, n_const)
        phase = rng.uniform(0, 2 * np.pi)
        scale = rng.uniform(0.1, 10.0)
        shift = int(rng.integers(0, n_const))
        rotated = detect(np.exp(1j * phase) * y, n_const)
        scaled = detect(scale * y, n_const)
        report.checks += 3
        if abs(rotated.metric - base.metric) > tol * max(1.0, base.metric):
            report.fail("phase-invariance", y=y.tolist(), n_const=n_const, phase=phase)
        if scaled.codeword != base.codeword or \
                abs(scaled.metric - scale ** 2 * base.metric) > tol * max(1.0, scaled.metric):
            report.fail("scale-invariance", y=y.tolist(), n_const=n_const, scale=scale)
        g_rot = np.mod(np.asarray(base.codeword.g) + shift, n_const)
        if canonicalize(g_rot, n_const) != base.codeword.g:
            report.fail("psk-rotation", g=base.codeword.g, shift=shift)

    for m_th in range(1, unitary_max + 1):
        for m_tv in range(1, unitary_max + 1):
            err = verify_unitary_kron(m_th, m_tv)
            report.checks += 1
            if err >= 1e-10:
                report.fail("unitarity", m_th=m_th, m_tv=m_tv, error=err)
    return report


def benchmark_ncsd(sizes, reps=100, n_const=4, seed=0):
    """Median wall time (ns) of ``ncsd_detect`` per length, and the fitted log-log slope.

    Sizes are sorted first; the slope is None for a single size.
    """
    sizes = sorted(int(s) for s in sizes)
    if any(s < 2 for s in sizes):
        raise ValueError("sizes must be >= 2")
    rng = np.random.default_rng(seed)
    medians = []
    for size in sizes:
        y = rng.normal(size=size) + 1j * rng.normal(size=size)
        quantizer.ncsd_detect(y, n_const)  # warm-up
        times = np.empty(reps)
        for i in range(reps):
            t0 = time.perf_counter_ns()
            quantizer.ncsd_detect(y, n_const)
            times[i] = time.perf_counter_ns() - t0
        medians.append(float(np.median(times)))
    slope = None
    if len(sizes) > 1:
        slope = float(np.polyfit(np.log(sizes), np.log(medians), 1)[0])
    return sizes, medians, slope
