"""Latin-square mapping function and the VAA measurement basis.

The mapping function assigns to each VAA index k and King's basis m the
outcome Alice should guess; across k it fills a family of D+1 mutually
orthogonal Latin squares.  The VAA states themselves are built from the
Bell state and the collapsed product states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConstructionInconsistent
from .qstate import MubFamily, TwoPhotonState, bell_state, collapsed_state, require_odd_prime

#: Gram-matrix deviation above which the basis construction is rejected
GRAM_GUARD = 1e-8


def mapping_function(k: int, m: int, dim: int) -> int:
    """Alice's guessed outcome for VAA index k and basis m.

    k decomposes as k = j*D + i; returns (m*i - j) mod D for m < D and
    i for the computational basis m = D.
    """
    if not 0 <= k < dim * dim:
        raise IndexError(f"VAA index {k} out of range for D={dim}")
    if not 0 <= m <= dim:
        raise IndexError(f"basis index {m} not in 0..{dim}")
    i, j = k % dim, k // dim
    if m < dim:
        return (m * i - j) % dim
    return i


@dataclass(frozen=True)
class MappingTable:
    """All mapping-function values: ``table[k, m] = f_k(m)``."""

    dim: int
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=int)
        if table.shape != (self.dim * self.dim, self.dim + 1):
            raise ValueError(f"bad mapping table shape {table.shape}")
        object.__setattr__(self, "table", table)

    def decompose(self, k: int) -> tuple[int, int]:
        """Return (i, j) with k = j*D + i."""
        return k % self.dim, k // self.dim


def build_mapping_table(dim: int) -> MappingTable:
    require_odd_prime(dim)
    table = np.array(
        [[mapping_function(k, m, dim) for m in range(dim + 1)] for k in range(dim * dim)]
    )
    return MappingTable(dim, table)


def mols_check(mapping: MappingTable) -> bool:
    """Brute-force check of the two Latin-square invariants.

    Every (m, j) cell must be hit by exactly D values of k, and for any
    two distinct bases the pair map k -> (f_k(m), f_k(m')) must be a
    bijection onto Z_D x Z_D.
    """
    dim, table = mapping.dim, mapping.table
    for m in range(dim + 1):
        counts = np.bincount(table[:, m], minlength=dim)
        if not np.all(counts == dim):
            return False
    for m, mp in itertools.combinations(range(dim + 1), 2):
        pairs = {(a, b) for a, b in zip(table[:, m], table[:, mp])}
        if len(pairs) != dim * dim:
            return False
    return True


@dataclass(frozen=True)
class VaaBasis:
    """The D^2 orthonormal two-photon VAA states with their mapping table.

    ``states[k]`` is the amplitude tensor of state k, indexed like
    :class:`~meanking.qstate.TwoPhotonState`.
    """

    dim: int
    states: np.ndarray
    mapping: MappingTable

    def __post_init__(self):
        states = np.asarray(self.states, dtype=complex)
        d2 = self.dim * self.dim
        if states.shape != (d2, self.dim, self.dim):
            raise ValueError(f"bad VAA state stack shape {states.shape}")
        object.__setattr__(self, "states", states)

    def state(self, k: int) -> TwoPhotonState:
        return TwoPhotonState(self.dim, self.states[k])

    def gram(self) -> np.ndarray:
        flat = self.states.reshape(len(self.states), -1)
        return flat @ flat.conj().T


def build_vaa_basis(dim: int, mubs: MubFamily) -> VaaBasis:
    """Build the VAA states -B00 + (1/sqrt(D)) sum_m conj(m_f) (x) m_f.

    Raises ConstructionInconsistent if the resulting Gram matrix deviates
    from the identity by more than 1e-8, which would indicate a MUB or
    conjugation convention mismatch.
    """
    require_odd_prime(dim)
    mapping = build_mapping_table(dim)
    bell = bell_state(dim, mubs, dim).amps
    d2 = dim * dim
    states = np.empty((d2, dim, dim), dtype=complex)
    for k in range(d2):
        acc = -bell.copy()
        for m in range(dim + 1):
            j = mapping.table[k, m]
            v = mubs.bases[m, j]
            acc += np.outer(v.conj(), v) / np.sqrt(dim)
        states[k] = acc
    basis = VaaBasis(dim, states, mapping)
    dev = np.abs(basis.gram() - np.eye(d2)).max()
    if dev > GRAM_GUARD:
        raise ConstructionInconsistent(
            f"VAA Gram matrix deviates from identity by {dev:.3e} (> {GRAM_GUARD:.0e})"
        )
    return basis


def vaa_overlap_check(basis: VaaBasis, mubs: MubFamily) -> float:
    """Maximum deviation of |<phi_k | conj(m_j) (x) m_j>| from its target.

    The target is (1/sqrt(D)) when j = f_k(m) and 0 otherwise; scans all
    (k, m, j) triples.
    """
    dim = basis.dim
    dev = 0.0
    for m in range(dim + 1):
        for j in range(dim):
            coll = collapsed_state(mubs, m, j).amps
            overlaps = np.abs(np.einsum("kab,ab->k", basis.states.conj(), coll))
            target = np.where(basis.mapping.table[:, m] == j, 1 / np.sqrt(dim), 0.0)
            dev = max(dev, np.abs(overlaps - target).max())
    return dev


def completeness_deviation(basis: VaaBasis) -> float:
    """Deviation of sum_k |phi_k><phi_k| from the identity."""
    flat = basis.states.reshape(len(basis.states), -1)
    resolved = flat.conj().T @ flat
    return np.abs(resolved - np.eye(flat.shape[1])).max()


def mapping_to_json(basis: VaaBasis) -> dict:
    """JSON-friendly dump of the mapping table and state amplitudes."""
    from .qstate import state_to_json

    return {
        "dim": basis.dim,
        "mapping": basis.mapping.table.tolist(),
        "states": [state_to_json(s) for s in basis.states],
    }
