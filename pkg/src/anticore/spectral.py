"""Eigen-decompositions of the single-excitation Hamiltonian.

Homogeneous chains use the closed-form sine basis; biased chains go through
the implicit-QL kernel in :mod:`anticore.kernels`.

Accuracy note: everything is plain float64.  Eigenvalue residuals scale like
``eps * max|lambda|``, so for bias around 1e6 the O(1) eigenvalues carry
absolute errors near 1e-10 and the residual invariant starts to fail.  Up to
bias 1e4 all documented tolerances hold with a wide margin.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, Hamiltonian1, build_hamiltonian
from .errors import ChainError
from .kernels import tridiagonal_eigh

CLUSTER_RTOL = 1e-9


class SpectrumSource(enum.Enum):
    ANALYTIC = "analytic"
    NUMERIC_TRIDIAGONAL = "numeric-tridiagonal"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and matching unit eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: SpectrumSource

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def residual(self, h: Hamiltonian1) -> np.ndarray:
        """Per-eigenpair ``max |H v - lambda v| / max(1, |lambda|)``."""
        hv = h.dense() @ self.eigenvectors
        r = np.abs(hv - self.eigenvectors * self.eigenvalues).max(axis=0)
        return r / np.maximum(1.0, np.abs(self.eigenvalues))

    def orthonormality_error(self) -> float:
        v = self.eigenvectors
        return float(np.abs(v.T @ v - np.eye(self.n)).max())

    def clusters(self, rtol: float = CLUSTER_RTOL) -> list[np.ndarray]:
        return eigenvalue_clusters(self.eigenvalues, rtol)

    def cluster_projectors(self, rtol: float = CLUSTER_RTOL) -> list[np.ndarray]:
        v = self.eigenvectors
        return [v[:, c] @ v[:, c].T for c in self.clusters(rtol)]


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def eigenvalue_clusters(eigenvalues, rtol=CLUSTER_RTOL):
    """Group indices of sorted eigenvalues closer than ``rtol * max(1, |lambda|)``."""
    groups = []
    start = 0
    for k in range(1, len(eigenvalues) + 1):
        if k == len(eigenvalues):
            groups.append(np.arange(start, k))
            break
        scale = max(1.0, abs(eigenvalues[k]))
        if eigenvalues[k] - eigenvalues[k - 1] > rtol * scale:
            groups.append(np.arange(start, k))
            start = k
    return groups


def fix_signs(v: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Flip columns so the first component above ``atol`` is positive."""
    v = v.copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        nz = np.flatnonzero(np.abs(col) > atol)
        if nz.size and col[nz[0]] < 0:
            v[:, k] = -col
    return v


def _gram_schmidt(block: np.ndarray) -> np.ndarray:
    q = block.copy()
    for a in range(q.shape[1]):
        for _ in range(2):
            for b in range(a):
                q[:, a] -= (q[:, b] @ q[:, a]) * q[:, b]
        q[:, a] /= np.linalg.norm(q[:, a])
    return q


def analytic_spectrum(spec: ChainSpec) -> SpectralDecomposition:
    """Sine-basis eigenpairs of the homogeneous chain, eigenvalues ascending.

    ``lambda_k = 2 cos(pi k / (N+1))`` and
    ``v_k[j] = sqrt(2/(N+1)) sin(pi j k / (N+1))``.
    """
    if not spec.homogeneous:
        raise ChainError("analytic spectrum exists only for bias = 0")
    n = spec.n_spins
    k = np.arange(n, 0, -1)  # k = N..1 gives ascending eigenvalues
    j = np.arange(1, n + 1)
    lam = 2.0 * np.cos(np.pi * k / (n + 1))
    vecs = np.sqrt(2.0 / (n + 1)) * np.sin(np.pi * np.outer(j, k) / (n + 1))
    _freeze(lam, vecs)
    return SpectralDecomposition(lam, vecs, SpectrumSource.ANALYTIC)


def numeric_spectrum(h: Hamiltonian1, max_iter: int = 60) -> SpectralDecomposition:
    """Implicit-QL eigen-decomposition of a tridiagonal Hamiltonian.

    Eigenvalues are sorted ascending, eigenvectors inside a cluster of
    (numerically) degenerate eigenvalues are re-orthonormalised, and every
    eigenvector is sign-normalised so its first nonzero entry is positive.
    """
    lam, vecs = tridiagonal_eigh(h.diag, h.offdiag, max_iter=max_iter)
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    vecs = vecs[:, order]
    for group in eigenvalue_clusters(lam):
        if group.size > 1:
            vecs[:, group] = _gram_schmidt(vecs[:, group])
    vecs = fix_signs(vecs)
    _freeze(lam, vecs)
    return SpectralDecomposition(lam, vecs, SpectrumSource.NUMERIC_TRIDIAGONAL)


def spectrum(spec: ChainSpec) -> SpectralDecomposition:
    """Analytic spectrum for homogeneous chains, numeric otherwise."""
    if spec.homogeneous:
        return analytic_spectrum(spec)
    return numeric_spectrum(build_hamiltonian(spec))
