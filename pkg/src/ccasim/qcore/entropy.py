"""Spectral state diagnostics: von Neumann entropy and purity."""

import numpy as np

from .spaces import DensityMatrix

# eigenvalues below this are treated as numerically zero
EIG_FLOOR = 1e-12
# eigenvalues may dip this far negative before we call the state invalid
NEG_TOL = 1e-9


def _eigvals(rho: DensityMatrix):
    return np.linalg.eigvalsh((rho.rho + rho.rho.conj().T) / 2)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S = -sum lambda ln lambda in nats, eigenvalues below 1e-12 dropped.

    Eigenvalues in [-1e-9, 0) are clamped to zero; anything more negative
    raises, because the state itself is then invalid.
    """
    w = _eigvals(rho)
    if w.min() < -NEG_TOL:
        raise ValueError(f"density matrix eigenvalue {w.min():g} < -{NEG_TOL:g}")
    w = np.clip(w, 0.0, None)
    w = w[w > EIG_FLOOR]
    return float(-np.sum(w * np.log(w)))


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2)."""
    return float(np.sum(np.abs(rho.rho) ** 2).real)
