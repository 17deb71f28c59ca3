"""Qubit SIC-POVM, its two-qubit product extension, and Born-rule probabilities."""
from dataclasses import dataclass

import numpy as np

from . import qmat
from .errors import DimensionMismatch, TomographyError

PROB_CLAMP = 1e-12


@dataclass(frozen=True)
class PovmSet:
    """Ordered measurement operators; ``elements`` has shape (K, d, d)."""

    elements: np.ndarray
    labels: tuple

    @property
    def dim(self):
        return self.elements.shape[1]

    def __len__(self):
        return self.elements.shape[0]

    def probability_map(self):
        """Real (K, d*d) matrix taking a row-major vectorised state to Tr(M_k rho).

        Only the real part is meaningful for Hermitian input; the complex
        matrix is returned so callers can take ``.real`` of the product.
        """
        k, d, _ = self.elements.shape
        return np.transpose(self.elements, (0, 2, 1)).reshape(k, d * d)


def make_povm(elements, labels=None, tol=1e-10):
    """Build a PovmSet, checking positivity and completeness."""
    elems = np.array([qmat.as_matrix(e) for e in elements])
    if len({e.shape for e in elems}) != 1:
        raise DimensionMismatch("POVM elements differ in dimension")
    for e in elems:
        if qmat.hermitian_eig(e, tol=tol).eigenvalues[0] < -tol:
            raise TomographyError("POVM element is not positive semidefinite")
    total = elems.sum(axis=0)
    if np.max(np.abs(total - np.eye(elems.shape[1]))) > tol:
        raise TomographyError("POVM elements do not sum to the identity")
    if labels is None:
        labels = tuple(range(len(elems)))
    return PovmSet(elems, tuple(labels))


def sic_vectors():
    """The four tetrahedral qubit states |phi_1> .. |phi_4>."""
    a = 1.0 / np.sqrt(3.0)
    b = np.sqrt(2.0 / 3.0)
    return [
        np.array([1.0, 0.0], dtype=complex),
        np.array([a, b], dtype=complex),
        np.array([a, b * np.exp(2j * np.pi / 3)], dtype=complex),
        np.array([a, b * np.exp(4j * np.pi / 3)], dtype=complex),
    ]


def sic_povm():
    elements = [0.5 * np.outer(v, v.conj()) for v in sic_vectors()]
    return make_povm(elements, labels=(1, 2, 3, 4), tol=1e-12)


def alpha_index(i, j):
    """Outcome index for arm-1 result ``i`` and arm-2 result ``j`` (both 1-based)."""
    if not (1 <= i <= 4 and 1 <= j <= 4):
        raise ValueError(f"outcome pair ({i}, {j}) out of range")
    return 4 * (i - 1) + (j - 1)


def alpha_pair(alpha):
    if not 0 <= alpha < 16:
        raise ValueError(f"outcome index {alpha} out of range")
    return alpha // 4 + 1, alpha % 4 + 1


def two_qubit_povm():
    """The 16 products M_i (x) M_j ordered by alpha = 4(i-1) + (j-1)."""
    single = sic_povm().elements
    elements = [qmat.kron(single[i], single[j]) for i in range(4) for j in range(4)]
    labels = tuple(alpha_pair(a) for a in range(16))
    return make_povm(elements, labels=labels, tol=1e-12)


def born_probabilities(povm, rho):
    """Outcome probabilities Tr(M_k rho), clamped to [0, 1]."""
    rho = qmat.as_matrix(rho)
    if rho.shape[0] != povm.dim:
        raise DimensionMismatch(f"state has dim {rho.shape[0]}, POVM has dim {povm.dim}")
    probs = (povm.probability_map() @ rho.ravel()).real
    return np.clip(probs, 0.0, 1.0)
