"""Two-qubit Werner states, the singlet, and the flip-operator construction.

Basis order everywhere is |00>, |01>, |10>, |11> with the first qubit as the
left tensor factor.
"""
import numpy as np

from . import qmat
from .errors import NotHermitian, NotPsd, ParameterOutOfRange, TraceNotOne

DENSITY_TOL = 1e-10


def bell_singlet():
    """Amplitudes of (|01> - |10>)/sqrt(2)."""
    r = 1.0 / np.sqrt(2.0)
    return np.array([0.0, r, -r, 0.0], dtype=complex)


def projector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def check_eta(eta):
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ParameterOutOfRange(f"Werner parameter must lie in [0, 1], got {eta}")
    return eta


def werner_two_qubit(eta):
    """eta |Psi-><Psi-| + (1 - eta)/4 I."""
    eta = check_eta(eta)
    return eta * projector(bell_singlet()) + (1.0 - eta) / 4.0 * np.eye(4, dtype=complex)


def flip_operator(d):
    """Swap operator on C^d (x) C^d: sum_ij |i><j| (x) |j><i|."""
    d = int(d)
    if d < 2:
        raise ParameterOutOfRange(f"local dimension must be >= 2, got {d}")
    flip = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            flip[i * d + j, j * d + i] = 1.0
    return flip


def werner_general(coef, d):
    """coef * F + zeta * I on C^d (x) C^d, with zeta fixed by unit trace.

    ``coef`` is the flip-operator weight, not the singlet weight: for d = 2,
    ``werner_general(-eta / 2, 2) == werner_two_qubit(eta)``.
    """
    d = int(d)
    coef = float(coef)
    zeta = (1.0 - coef * d) / d**2
    rho = coef * flip_operator(d) + zeta * np.eye(d * d, dtype=complex)
    lowest = qmat.hermitian_eig(rho).eigenvalues[0]
    if lowest < -qmat.PSD_CLAMP:
        raise NotPsd(f"flip coefficient {coef} gives a non-physical state (min eigenvalue {lowest:.3g})")
    return rho


def validate_density(m, tol=DENSITY_TOL):
    """Return ``m`` as a complex array if it is a valid density matrix.

    Raises NotHermitian, TraceNotOne or NotPsd naming the first violated
    condition.  Eigenvalues down to ``-max(tol, 1e-9)`` are tolerated.
    """
    m = qmat.as_matrix(m)
    dev = qmat.hermitian_deviation(m)
    if dev > tol:
        raise NotHermitian(f"not Hermitian: max |A - A^H| = {dev:.3g}")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        raise TraceNotOne(f"trace is {tr.real:.12g}, expected 1")
    lowest = qmat.hermitian_eig(m, tol=tol).eigenvalues[0]
    if lowest < -max(tol, qmat.PSD_CLAMP):
        raise NotPsd(f"negative eigenvalue {lowest:.3g}")
    return m
