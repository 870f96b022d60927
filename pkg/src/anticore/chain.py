"""Single-excitation Hamiltonians of homogeneous and center-biased XX chains.

Spins are numbered 1..N in every public function.  Arrays are stored 0-based,
so spin ``i`` lives at array index ``i - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ChainError


@dataclass(frozen=True)
class ChainSpec:
    """An XX chain of ``n_spins`` spins with potential ``bias`` on the center spin."""

    n_spins: int
    bias: float = 0.0

    def __post_init__(self):
        if isinstance(self.n_spins, bool) or int(self.n_spins) != self.n_spins:
            raise ChainError(f"n_spins must be an integer, got {self.n_spins!r}")
        object.__setattr__(self, "n_spins", int(self.n_spins))
        object.__setattr__(self, "bias", float(self.bias))
        if self.n_spins < 2:
            raise ChainError(f"n_spins must be >= 2, got {self.n_spins}")
        if not math.isfinite(self.bias) or self.bias < 0:
            raise ChainError(f"bias must be finite and >= 0, got {self.bias}")
        if self.bias > 0 and self.n_spins % 2 == 0:
            raise ChainError(
                f"a biased chain needs a center spin; n_spins={self.n_spins} is even"
            )

    @property
    def homogeneous(self) -> bool:
        return self.bias == 0.0

    @property
    def odd(self) -> bool:
        return self.n_spins % 2 == 1

    def with_bias(self, bias: float) -> "ChainSpec":
        return ChainSpec(self.n_spins, bias)


@dataclass(frozen=True)
class Hamiltonian1:
    """Tridiagonal single-excitation Hamiltonian ``T_N + bias * E``."""

    diag: np.ndarray
    offdiag: np.ndarray

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def dense(self) -> np.ndarray:
        h = np.diag(self.diag)
        idx = np.arange(self.n - 1)
        h[idx, idx + 1] = self.offdiag
        h[idx + 1, idx] = self.offdiag
        return h


def center_index(spec: ChainSpec) -> int:
    """1-based index of the center spin ``(N + 1) / 2`` of an odd chain."""
    if not spec.odd:
        raise ChainError(f"chain of {spec.n_spins} spins has no center spin")
    return (spec.n_spins + 1) // 2


def check_spin(spec_or_n, i: int) -> int:
    """Validate a 1-based spin index and return the 0-based storage index."""
    n = spec_or_n.n_spins if isinstance(spec_or_n, ChainSpec) else int(spec_or_n)
    if isinstance(i, bool) or int(i) != i or not 1 <= i <= n:
        raise ChainError(f"spin index {i!r} outside 1..{n}")
    return int(i) - 1


def build_hamiltonian(spec: ChainSpec) -> Hamiltonian1:
    n = spec.n_spins
    diag = np.zeros(n)
    if spec.bias > 0:
        diag[center_index(spec) - 1] = spec.bias
    offdiag = np.ones(n - 1)
    diag.setflags(write=False)
    offdiag.setflags(write=False)
    return Hamiltonian1(diag, offdiag)
