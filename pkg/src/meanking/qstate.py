"""State algebra for single qudits and photon pairs.

Provides the computational/quadratic-residue family of mutually unbiased
bases in odd prime dimension, conjugate kets, the generalized Bell state
and the post-measurement product states.  All objects are immutable and
all constructors renormalize defensively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisOutOfRange, NotOddPrime

#: tolerance for analytic identities on amplitudes
TOL = 1e-12


def is_odd_prime(n: int) -> bool:
    """Trial-division primality test, restricted to odd n >= 3."""
    if n < 3 or n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def require_odd_prime(n: int) -> None:
    if not is_odd_prime(n):
        raise NotOddPrime(f"dimension must be an odd prime >= 3, got {n}")


def _normalized(amps: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ValueError("cannot normalize a zero state")
    return amps / norm


@dataclass(frozen=True)
class Ket:
    """A single-qudit state: unit-norm complex amplitude vector."""

    dim: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.dim,):
            raise ValueError(f"expected shape ({self.dim},), got {amps.shape}")
        object.__setattr__(self, "amps", _normalized(amps))


@dataclass(frozen=True)
class MubFamily:
    """D+1 mutually unbiased bases in odd prime dimension D.

    ``bases[m, j]`` is the j-th state of basis m; basis m = D is the
    computational basis.
    """

    dim: int
    bases: np.ndarray

    def __post_init__(self):
        bases = np.asarray(self.bases, dtype=complex)
        if bases.shape != (self.dim + 1, self.dim, self.dim):
            raise ValueError(f"bad MUB tensor shape {bases.shape}")
        object.__setattr__(self, "bases", bases)

    def ket(self, m: int, j: int) -> Ket:
        self._check_basis(m)
        if not 0 <= j < self.dim:
            raise IndexError(f"outcome {j} out of range for D={self.dim}")
        return Ket(self.dim, self.bases[m, j])

    def _check_basis(self, m: int) -> None:
        if not 0 <= m <= self.dim:
            raise BasisOutOfRange(f"basis index {m} not in 0..{self.dim}")


@dataclass(frozen=True)
class TwoPhotonState:
    """Two-photon amplitude tensor, indexed [mode of a][mode of b]."""

    dim: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.dim, self.dim):
            raise ValueError(f"expected shape ({self.dim}, {self.dim}), got {amps.shape}")
        object.__setattr__(self, "amps", _normalized(amps))


def build_mub(dim: int) -> MubFamily:
    """Construct the D+1 MUBs for odd prime D.

    Basis m in 0..D-1 has components ``omega**(m*k*k + j*k) / sqrt(D)``
    with ``omega = exp(2j*pi/D)``; basis D is computational.
    """
    require_odd_prime(dim)
    bases = np.empty((dim + 1, dim, dim), dtype=complex)
    k = np.arange(dim)
    omega = np.exp(2j * np.pi / dim)
    for m in range(dim):
        for j in range(dim):
            bases[m, j] = omega ** ((m * k * k + j * k) % dim) / np.sqrt(dim)
    bases[dim] = np.eye(dim)
    return MubFamily(dim, bases)


def conjugate_ket(psi: Ket) -> Ket:
    """Componentwise complex conjugation in the computational basis."""
    return Ket(psi.dim, psi.amps.conj())


def bell_state(dim: int, mubs: MubFamily, m: int) -> TwoPhotonState:
    """Maximally entangled two-qudit state built from basis m.

    The result is independent of m: any basis of the family yields the
    same tensor, which equals ``sum_j |jj> / sqrt(D)``.
    """
    mubs._check_basis(m)
    amps = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        v = mubs.bases[m, j]
        amps += np.outer(v.conj(), v)
    return TwoPhotonState(dim, amps / np.sqrt(dim))


def collapsed_state(mubs: MubFamily, m: int, j: int) -> TwoPhotonState:
    """Product state conj(m_j) (x) m_j left after the King's projection."""
    mubs._check_basis(m)
    if not 0 <= j < mubs.dim:
        raise IndexError(f"outcome {j} out of range for D={mubs.dim}")
    v = mubs.bases[m, j]
    return TwoPhotonState(mubs.dim, np.outer(v.conj(), v))


def state_to_json(amps: np.ndarray) -> list:
    """Serialize a complex amplitude array as nested [re, im] pairs."""
    arr = np.asarray(amps, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()
