"""Chi-squared state estimation over the Cholesky parameterisation.

A parameter vector t of 16 reals fills a lower-triangular T:

    T00..T33 = t[0..3]            (real diagonal)
    T10 = t[4]  + i t[5]          T21 = t[6]  + i t[7]
    T32 = t[8]  + i t[9]          T20 = t[10] + i t[11]
    T31 = t[12] + i t[13]         T30 = t[14] + i t[15]

and sigma = T^H T / Tr(T^H T) is a density matrix for every non-zero t.
The objective is sum_a (n_a - c_a)^2 / max(c_a, floor) with c_a = N Tr(M_a sigma).
"""
from dataclasses import dataclass

import numba
import numpy as np

from .errors import DegenerateParams, DimensionMismatch, NotPsd
from .states import validate_density

N_PARAMS = 16
DEGENERATE_NORM = 1e-30
RIDGE = 1e-12
RESTART_BLEND = 0.1
MIXED = np.eye(4, dtype=complex) / 4

_OFF_ROWS = np.array([1, 2, 3, 2, 3, 3])
_OFF_COLS = np.array([0, 1, 2, 0, 1, 0])


@dataclass(frozen=True)
class EstimatorConfig:
    restarts: int = 5
    max_evaluations: int = 20000
    xtol: float = 1e-9
    ftol: float = 1e-12
    perturbation: float = 0.05
    # division guard only: at N ~ 10 every expected count is below one, so a
    # one-count floor would turn the fit into unweighted least squares
    floor: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_evaluations < N_PARAMS + 2:
            raise ValueError("max_evaluations too small for a 16-parameter simplex")
        if not self.floor > 0:
            raise ValueError("denominator floor must be positive")


@dataclass
class EstimationResult:
    sigma: np.ndarray
    chi2: float
    params: np.ndarray
    evaluations: int
    restarts_used: int
    converged: bool


def params_to_factor(t):
    t = np.asarray(t, dtype=float)
    if t.shape != (N_PARAMS,):
        raise DimensionMismatch(f"expected 16 parameters, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("parameters must be finite")
    T = np.zeros((4, 4), dtype=complex)
    T[np.arange(4), np.arange(4)] = t[:4]
    T[_OFF_ROWS, _OFF_COLS] = t[4::2] + 1j * t[5::2]
    return T


def factor_to_params(T):
    T = np.asarray(T, dtype=complex)
    t = np.empty(N_PARAMS)
    t[:4] = np.diag(T).real
    off = T[_OFF_ROWS, _OFF_COLS]
    t[4::2] = off.real
    t[5::2] = off.imag
    return t


def params_to_state(t):
    T = params_to_factor(t)
    gram = T.conj().T @ T
    norm = np.trace(gram).real
    if norm <= DEGENERATE_NORM:
        raise DegenerateParams("Cholesky parameters are all (numerically) zero")
    sigma = gram / norm
    return 0.5 * (sigma + sigma.conj().T)


def state_to_params(sigma):
    """Lower-triangular T with T^H T = sigma (after a tiny ridge), as 16 reals.

    Factorising the index-reversed matrix with an ordinary Cholesky gives
    sigma = U U^H with U upper triangular; T = U^H is then lower triangular.
    """
    sigma = validate_density(sigma, tol=1e-8)
    rev = sigma[::-1, ::-1] + RIDGE * np.eye(4)
    try:
        L = np.linalg.cholesky(rev)
    except np.linalg.LinAlgError as exc:
        raise NotPsd(str(exc)) from exc
    T = L.conj().T[::-1, ::-1]
    return factor_to_params(T)


def _check_observed(observed, povm):
    counts = np.asarray(observed.counts, dtype=float)
    if counts.shape != (len(povm),):
        raise DimensionMismatch(f"{counts.shape[0]} counts for a {len(povm)}-outcome POVM")
    return counts


def chi_squared(t, observed, povm, floor=1e-6):
    counts = _check_observed(observed, povm)
    sigma = params_to_state(t)
    expected = observed.mean_pairs * (povm.probability_map() @ sigma.ravel()).real
    return float(np.sum((counts - expected) ** 2 / np.maximum(expected, floor)))


# Compiled objective and simplex search used inside the optimiser loop.

@numba.njit(cache=True)
def _chi2_kernel(t, pmap, counts, mean_pairs, floor):
    T = np.zeros((4, 4), dtype=np.complex128)
    for k in range(4):
        T[k, k] = t[k]
    T[1, 0] = t[4] + 1j * t[5]
    T[2, 1] = t[6] + 1j * t[7]
    T[3, 2] = t[8] + 1j * t[9]
    T[2, 0] = t[10] + 1j * t[11]
    T[3, 1] = t[12] + 1j * t[13]
    T[3, 0] = t[14] + 1j * t[15]
    gram = T.conj().T @ T
    norm = 0.0
    for k in range(4):
        norm += gram[k, k].real
    if norm <= 1e-30:
        return np.inf
    flat = gram.ravel()
    total = 0.0
    for a in range(counts.shape[0]):
        p = 0.0
        for k in range(16):
            p += (pmap[a, k] * flat[k]).real
        c = mean_pairs * p / norm
        if c < 0.0:
            c = 0.0
        diff = counts[a] - c
        total += diff * diff / max(c, floor)
    return total


@numba.njit(cache=True)
def _nelder_mead(x0, pmap, counts, mean_pairs, floor, max_evals, xtol, ftol):
    """Adaptive Nelder-Mead (dimension-dependent coefficients).

    Stops when the simplex diameter drops below ``xtol`` or the objective
    spread below ``ftol``.  Returns (x, f, evaluations, converged).
    """
    dim = x0.shape[0]
    rho = 1.0
    chi = 1.0 + 2.0 / dim
    psi = 0.75 - 1.0 / (2.0 * dim)
    sig = 1.0 - 1.0 / dim

    sim = np.empty((dim + 1, dim))
    fs = np.empty(dim + 1)
    sim[0] = x0
    for k in range(dim):
        y = x0.copy()
        if y[k] != 0.0:
            y[k] *= 1.05
        else:
            y[k] = 0.00025
        sim[k + 1] = y
    for k in range(dim + 1):
        fs[k] = _chi2_kernel(sim[k], pmap, counts, mean_pairs, floor)
    evals = dim + 1
    converged = False

    while evals < max_evals:
        order = np.argsort(fs, kind="mergesort")
        sim = sim[order]
        fs = fs[order]

        diam = 0.0
        spread = 0.0
        for k in range(1, dim + 1):
            spread = max(spread, abs(fs[k] - fs[0]))
            for j in range(dim):
                diam = max(diam, abs(sim[k, j] - sim[0, j]))
        if diam <= xtol or spread <= ftol:
            converged = True
            break

        xbar = np.zeros(dim)
        for k in range(dim):
            xbar += sim[k]
        xbar /= dim

        xr = (1.0 + rho) * xbar - rho * sim[-1]
        fr = _chi2_kernel(xr, pmap, counts, mean_pairs, floor)
        evals += 1
        shrink = False
        if fr < fs[0]:
            xe = (1.0 + rho * chi) * xbar - rho * chi * sim[-1]
            fe = _chi2_kernel(xe, pmap, counts, mean_pairs, floor)
            evals += 1
            if fe < fr:
                sim[-1] = xe
                fs[-1] = fe
            else:
                sim[-1] = xr
                fs[-1] = fr
        elif fr < fs[-2]:
            sim[-1] = xr
            fs[-1] = fr
        elif fr < fs[-1]:
            xc = (1.0 + psi * rho) * xbar - psi * rho * sim[-1]
            fc = _chi2_kernel(xc, pmap, counts, mean_pairs, floor)
            evals += 1
            if fc <= fr:
                sim[-1] = xc
                fs[-1] = fc
            else:
                shrink = True
        else:
            xcc = (1.0 - psi) * xbar + psi * sim[-1]
            fcc = _chi2_kernel(xcc, pmap, counts, mean_pairs, floor)
            evals += 1
            if fcc < fs[-1]:
                sim[-1] = xcc
                fs[-1] = fcc
            else:
                shrink = True
        if shrink:
            for k in range(1, dim + 1):
                sim[k] = sim[0] + sig * (sim[k] - sim[0])
                fs[k] = _chi2_kernel(sim[k], pmap, counts, mean_pairs, floor)
            evals += dim

    best = np.argmin(fs)
    return sim[best].copy(), fs[best], evals, converged


def mixed_start():
    return state_to_params(MIXED)


def estimate(observed, povm, config=None):
    """Minimise the chi-squared objective with chained Nelder-Mead restarts.

    The first run starts at the maximally mixed state.  Every later run
    starts from the best state so far blended with a little of the mixed
    state, re-factorised, plus Gaussian noise of width ``config.perturbation``.
    Re-factorising matters: a rank-deficient incumbent has a zero on the
    diagonal of T, where the objective is flat along that direction and a
    simplex started there stays stuck.
    """
    config = config or EstimatorConfig()
    counts = _check_observed(observed, povm)
    pmap = np.ascontiguousarray(povm.probability_map(), dtype=np.complex128)
    rng = np.random.default_rng(config.seed)
    mean_pairs = float(observed.mean_pairs)

    best_x = mixed_start()
    best_f = _chi2_kernel(best_x, pmap, counts, mean_pairs, config.floor)
    best_converged = False
    evaluations = 1
    for r in range(config.restarts):
        if r == 0:
            start = best_x
        else:
            blend = (1.0 - RESTART_BLEND) * params_to_state(best_x) + RESTART_BLEND * MIXED
            start = state_to_params(blend) + rng.normal(0.0, config.perturbation, N_PARAMS)
        x, f, n_eval, conv = _nelder_mead(
            start, pmap, counts, mean_pairs, config.floor,
            config.max_evaluations, config.xtol, config.ftol,
        )
        evaluations += n_eval
        # ties keep the earlier restart
        if f < best_f:
            best_x, best_f, best_converged = x, f, conv
        elif r == 0:
            best_converged = conv

    params = best_x / np.linalg.norm(best_x)
    sigma = params_to_state(params)
    return EstimationResult(
        sigma=sigma,
        chi2=chi_squared(params, observed, povm, config.floor),
        params=params,
        evaluations=evaluations,
        restarts_used=config.restarts,
        converged=bool(best_converged),
    )
