"""Poisson-noise coincidence counts and polarization correlation scans.

Each measurement setting receives its own pair number drawn from Pois(N);
the recorded count is that draw times the Born probability, so counts are
real-valued unless integer rounding is requested.
"""
from dataclasses import dataclass

import numpy as np

from . import povm as _povm
from .errors import InvalidMean, ParameterOutOfRange
from .states import check_eta, werner_two_qubit

U64_MAX = 2**64 - 1


def random_source(seed, *indices):
    """Generator for the substream of ``seed`` addressed by ``indices``.

    Distinct index tuples give statistically independent streams, so trials
    can run in any order or in parallel without changing results.
    """
    seed = int(seed)
    if not 0 <= seed <= U64_MAX:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(i) for i in indices))
    return np.random.Generator(np.random.PCG64(ss))


def _check_mean(mean):
    mean = float(mean)
    if not np.isfinite(mean) or mean < 0:
        raise InvalidMean(f"Poisson mean must be finite and non-negative, got {mean}")
    return mean


def poisson_sample(mean, rng, size=None):
    mean = _check_mean(mean)
    return rng.poisson(mean, size=size)


@dataclass
class CountVector:
    counts: np.ndarray
    mean_pairs: float
    seed: int = None
    eta: float = None

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=float)
        if self.counts.shape != (16,):
            raise ValueError(f"expected 16 counts, got shape {self.counts.shape}")
        if not np.all(np.isfinite(self.counts)) or np.any(self.counts < 0):
            raise ValueError("counts must be finite and non-negative")
        if not self.mean_pairs > 0:
            raise InvalidMean(f"mean_pairs must be positive, got {self.mean_pairs}")


def simulate_counts(rho, povm, mean_pairs, rng, round_counts=False, seed=None, eta=None):
    """Noisy counts n_a = Poisson(N)_a * Tr(M_a rho), one independent draw per outcome."""
    if not mean_pairs > 0:
        raise InvalidMean(f"mean_pairs must be positive, got {mean_pairs}")
    probs = _povm.born_probabilities(povm, rho)
    pairs = poisson_sample(mean_pairs, rng, size=len(probs))
    counts = pairs * probs
    if round_counts:
        counts = np.rint(counts)
    return CountVector(counts, float(mean_pairs), seed=seed, eta=eta)


def expected_counts(sigma, povm, mean_pairs):
    if not mean_pairs > 0:
        raise InvalidMean(f"mean_pairs must be positive, got {mean_pairs}")
    probs = _povm.born_probabilities(povm, sigma)
    return CountVector(mean_pairs * probs, float(mean_pairs))


# Polarization correlations: arm 1 analyser fixed at H = |0>, arm 2 analyser
# at angle theta measured from V = |1>.

def analyser_state(theta):
    return np.array([np.sin(theta), np.cos(theta)], dtype=complex)


def coincidence_probability(theta, eta):
    eta = check_eta(eta)
    h = np.array([1.0, 0.0], dtype=complex)
    ket = np.kron(h, analyser_state(theta))
    rho = werner_two_qubit(eta)
    return float(np.clip((ket.conj() @ rho @ ket).real, 0.0, 1.0))


def default_angles(step_deg=5.0):
    """Full period 0..360 degrees inclusive, in radians."""
    n = int(round(360.0 / step_deg))
    return np.deg2rad(np.linspace(0.0, n * step_deg, n + 1))


@dataclass
class CorrelationScan:
    angles: np.ndarray
    counts: np.ndarray
    expected: np.ndarray
    eta: float
    mean_pairs: float
    seed: int = None

    def rms_relative_deviation(self):
        """RMS of (noisy - expected), relative to the mean expected count."""
        scale = np.mean(self.expected)
        if scale <= 0:
            return 0.0
        return float(np.sqrt(np.mean((self.counts - self.expected) ** 2)) / scale)


def correlation_scan(eta, mean_pairs, angles, rng, round_counts=False):
    eta = check_eta(eta)
    if not mean_pairs > 0:
        raise InvalidMean(f"mean_pairs must be positive, got {mean_pairs}")
    angles = np.asarray(angles, dtype=float)
    if angles.size == 0:
        raise ParameterOutOfRange("angle list is empty")
    probs = np.array([coincidence_probability(t, eta) for t in angles])
    pairs = poisson_sample(mean_pairs, rng, size=angles.size)
    counts = pairs * probs
    if round_counts:
        counts = np.rint(counts)
    return CorrelationScan(angles, counts, mean_pairs * probs, eta, float(mean_pairs))
