"""Figures of merit: Uhlmann fidelity, purity, Wootters concurrence."""
from dataclasses import dataclass

import numpy as np

from . import qmat
from .errors import DimensionMismatch
from .states import check_eta

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class FiguresOfMerit:
    fidelity: float
    purity: float
    concurrence: float


def fidelity(sigma, rho):
    """(Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2, clamped to [0, 1]."""
    sigma = qmat.as_matrix(sigma)
    rho = qmat.as_matrix(rho)
    if sigma.shape != rho.shape:
        raise DimensionMismatch(f"dimension mismatch: {sigma.shape} vs {rho.shape}")
    root = qmat.sqrt_psd(sigma)
    inner = root @ rho @ root
    inner = 0.5 * (inner + inner.conj().T)
    vals = qmat.hermitian_eig(inner).eigenvalues
    f = np.sum(np.sqrt(np.clip(vals, 0.0, None))) ** 2
    return float(min(max(f, 0.0), 1.0))


def purity(rho):
    rho = qmat.as_matrix(rho)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))


def concurrence(rho):
    """Wootters concurrence of a two-qubit state.

    The spectrum of rho * rho_tilde is taken from the Hermitian matrix
    sqrt(rho) rho_tilde sqrt(rho), which has the same eigenvalues.
    """
    rho = qmat.as_matrix(rho)
    if rho.shape != (4, 4):
        raise DimensionMismatch(f"concurrence needs a 4x4 state, got {rho.shape}")
    tilde = SPIN_FLIP @ rho.conj() @ SPIN_FLIP
    root = qmat.sqrt_psd(rho)
    inner = root @ tilde @ root
    inner = 0.5 * (inner + inner.conj().T)
    vals = qmat.hermitian_eig(inner).eigenvalues
    lam = np.sort(np.sqrt(np.clip(vals, 0.0, None)))[::-1]
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(c, 0.0), 1.0))


def concurrence_werner_theory(eta):
    eta = check_eta(eta)
    return max(0.0, (3.0 * eta - 1.0) / 2.0)


def purity_werner_theory(eta):
    eta = check_eta(eta)
    return (1.0 + 3.0 * eta**2) / 4.0


def figures_of_merit(sigma, rho):
    """Fidelity of ``sigma`` to ``rho`` plus purity and concurrence of ``sigma``."""
    return FiguresOfMerit(fidelity(sigma, rho), purity(sigma), concurrence(sigma))
