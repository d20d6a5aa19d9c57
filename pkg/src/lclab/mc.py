"""Seeded Monte Carlo sampling and Kolmogorov-Smirnov goodness of fit.

The uniform source is a counter-based SplitMix64 stream: output i is the
SplitMix64 finalizer applied to ``key + (i+1) * GOLDEN``, so any index
range can be generated independently and in parallel with bit-identical
results.  Normal variates are the inverse standard-normal CDF of one
uniform each (monotone and stream-order-stable, unlike rejection
samplers), so value j of a generator consuming w normals per value owns
exactly the uniform indices ``w*j .. w*j + w - 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtri

#: Committed seed table used by the acceptance pipeline; golden statistics
#: in the test suite quantify over exactly these seeds.
GOLDEN_SEEDS: tuple[int, ...] = (101, 102, 103, 104, 105, 106, 107, 108, 109, 110)

_GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

# stream-domain tags so different generators with the same seed do not
# share uniform indices
_STREAM_TAG = {
    "normal-product": np.uint64(0x4E50),
    "product-self-difference": np.uint64(0x505344),
}


class Generator(enum.Enum):
    """Named sampling pipelines."""

    NORMAL_PRODUCT = "normal-product"
    PRODUCT_SELF_DIFFERENCE = "product-self-difference"


@dataclass(frozen=True)
class SampleBatch:
    """Reproducible draws: (generator, seed, n) determines values bit-exactly."""

    generator: Generator
    seed: int
    n: int
    values: np.ndarray


@dataclass(frozen=True)
class KSReport:
    """One-sample Kolmogorov-Smirnov outcome against a reference CDF."""

    n: int
    statistic: float
    scaled: float
    alpha: float
    threshold: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "D": self.statistic,
            "scaled": self.scaled,
            "alpha": self.alpha,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniform_stream(key: int, start: int, count: int) -> np.ndarray:
    """Uniforms in (0, 1) at counter positions start..start+count-1."""
    idx = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        raw = _mix64(np.uint64(key) + (idx + np.uint64(1)) * _GOLDEN_GAMMA)
    # 53-bit mantissa, offset by half a lattice cell so 0 and 1 are excluded
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * (2.0**-53)


def _stream_key(generator: Generator, seed: int) -> int:
    tagged = np.uint64(seed % (1 << 64)) ^ _STREAM_TAG[generator.value]
    return int(_mix64(tagged.reshape(1))[0])


_NORMALS_PER_VALUE = {
    Generator.NORMAL_PRODUCT: 2,
    Generator.PRODUCT_SELF_DIFFERENCE: 4,
}


def _values_for_range(generator: Generator, key: int, lo: int, hi: int) -> np.ndarray:
    w = _NORMALS_PER_VALUE[generator]
    u = uniform_stream(key, w * lo, w * (hi - lo)).reshape(hi - lo, w)
    z = ndtri(u)
    if generator is Generator.NORMAL_PRODUCT:
        return z[:, 0] * z[:, 1]
    return z[:, 0] * z[:, 1] - z[:, 2] * z[:, 3]


def sample(generator: Generator, seed: int, n: int, *, n_chunks: int = 1) -> SampleBatch:
    """Draw n values; chunked generation reproduces the single-pass stream.

    ``normal-product`` multiplies two independent standard normals per
    value; ``product-self-difference`` draws four and returns
    ``z1 z2 - z3 z4``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= n_chunks <= n:
        raise ValueError("n_chunks must be in [1, n]")
    generator = Generator(generator)
    key = _stream_key(generator, seed)
    bounds = np.linspace(0, n, n_chunks + 1, dtype=int)
    parts = [
        _values_for_range(generator, key, int(lo), int(hi))
        for lo, hi in zip(bounds, bounds[1:])
        if hi > lo
    ]
    return SampleBatch(generator, int(seed), int(n), np.concatenate(parts))


def kolmogorov_threshold(alpha: float) -> float:
    """c with P(sqrt(n) D > c) -> alpha under the Kolmogorov asymptotics.

    Solves ``2 sum_k (-1)^(k-1) exp(-2 k^2 c^2) = alpha`` by bisection;
    c(0.01) ~ 1.628, c(0.001) ~ 1.949.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")

    def survival(c: float) -> float:
        total = 0.0
        for k in range(1, 200):
            term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * c * c)
            total += term
            if abs(term) < 1e-18:
                break
        return total

    lo, hi = 0.01, 5.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if survival(mid) > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def ks_statistic(batch: SampleBatch, cdf: Callable, alpha: float = 0.001) -> KSReport:
    """Exact one-sample KS statistic of the batch against a reference CDF.

    D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n) over the sorted
    sample; the report passes iff sqrt(n) D <= c(alpha).
    """
    values = batch.values
    if values.size == 0:
        raise ValueError("empty sample batch")
    x = np.sort(values)
    f = np.asarray(cdf(x), dtype=float)
    if np.any(np.diff(f) < 0.0):
        raise ValueError("reference CDF is not monotone on the sample")
    if f[0] < 0.0 or f[-1] > 1.0:
        raise ValueError("reference CDF leaves [0, 1]")
    n = x.size
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - f))
    d_minus = float(np.max(f - (i - 1) / n))
    d = max(d_plus, d_minus)
    scaled = math.sqrt(n) * d
    threshold = kolmogorov_threshold(alpha)
    return KSReport(n, d, scaled, alpha, threshold, scaled <= threshold)


def ks_over_seeds(
    generator: Generator,
    seeds: Sequence[int],
    n: int,
    cdf: Callable,
    alpha: float = 0.001,
) -> list[KSReport]:
    """KS reports for one generator across a seed table."""
    return [ks_statistic(sample(generator, s, n), cdf, alpha) for s in seeds]
