"""Graph-derived linear-optical setups and two-photon click statistics.

A setup maps the 2D input modes (a_0..a_{D-1}, b_0..b_{D-1}) to 2D
detector modes through sparse unit-modulus couplings; each input row
carries one tunable phase.  Propagation of a two-photon state is a
polynomial expansion: every input monomial a_i*b_j is replaced by the
product of its two transfer rows, coefficients are collected per
detector monomial and normalized to a probability distribution over
click patterns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateOutput, DimensionMismatch, PhaseCountMismatch
from .qstate import TwoPhotonState, require_odd_prime

Pattern = tuple[str, str]


@dataclass(frozen=True)
class SetupRow:
    """Couplings of one input mode: (detector name, fixed coefficient)."""

    input_mode: str
    phase_slot: int
    entries: tuple[tuple[str, complex], ...]


@dataclass(frozen=True)
class SetupModel:
    """Detector list plus per-input-mode coupling rows.

    Rows are ordered a_0..a_{D-1}, b_0..b_{D-1}; detector order is
    [c, d, J1..J_{D-1}, T1..T_{D-1}].
    """

    dim: int
    detectors: tuple[str, ...]
    rows: tuple[SetupRow, ...]

    def __post_init__(self):
        if len(self.rows) != 2 * self.dim:
            raise ValueError(f"expected {2*self.dim} rows, got {len(self.rows)}")
        if len(self.detectors) != 2 * self.dim:
            raise ValueError(f"expected {2*self.dim} detectors, got {len(self.detectors)}")
        det_index = {name: i for i, name in enumerate(self.detectors)}
        # dense coefficient matrices for the a- and b-photon rows, plus
        # each row's phase slot; cached because simulation is hot
        coeff = np.zeros((2 * self.dim, 2 * self.dim), dtype=complex)
        slots = np.empty(2 * self.dim, dtype=int)
        for r, row in enumerate(self.rows):
            slots[r] = row.phase_slot
            for det, c in row.entries:
                coeff[r, det_index[det]] = c
        object.__setattr__(self, "_coeff", coeff)
        object.__setattr__(self, "_slots", slots)

    @property
    def phase_count(self) -> int:
        return 2 * self.dim

    def pattern_names(self) -> tuple[list[Pattern], list[Pattern]]:
        """Ordered (coincidence, double) pattern name lists."""
        nd = len(self.detectors)
        iu, iv = np.triu_indices(nd, 1)
        coincidences = [(self.detectors[u], self.detectors[v]) for u, v in zip(iu, iv)]
        doubles = [(name, name) for name in self.detectors]
        return coincidences, doubles


@dataclass(frozen=True)
class ClickDistribution:
    """Probabilities over unordered detector click patterns.

    A pattern (u, v) with u != v is a decodable coincidence; (u, u) is a
    same-detector double occupation, kept for normalization but not
    decodable.
    """

    probs: dict[Pattern, float]

    def decodable(self) -> dict[Pattern, float]:
        return {p: v for p, v in self.probs.items() if p[0] != p[1]}

    def leakage(self) -> float:
        return sum(v for p, v in self.probs.items() if p[0] == p[1])

    def total(self) -> float:
        return sum(self.probs.values())


def build_setup(dim: int) -> SetupModel:
    """Template setup for odd prime D; the D=3 instance is the exact
    published 3D transfer matrix.

    Mode-0 rows couple to both target detectors and the first two
    junction losses; higher-mode rows couple to one target detector
    (c for odd modes, d for even), their junction loss and their tail
    loss.  Phase slots: a_i -> 2i, b_i -> 2i+1.
    """
    require_odd_prime(dim)
    detectors = ["c", "d"]
    detectors += [f"J{i}" for i in range(1, dim)]
    detectors += [f"T{i}" for i in range(1, dim)]

    rows = []
    a_rows: list[SetupRow] = []
    b_rows: list[SetupRow] = []
    a_rows.append(SetupRow("a0", 0, (("c", 1), ("d", 1j), ("J1", 1j), ("J2", -1))))
    b_rows.append(SetupRow("b0", 1, (("c", 1j), ("d", 1), ("J1", -1), ("J2", 1j))))
    for i in range(1, dim):
        if i % 2 == 1:
            a_rows.append(SetupRow(f"a{i}", 2 * i, (("c", -1), (f"J{i}", 1j), (f"T{i}", 1))))
            b_rows.append(SetupRow(f"b{i}", 2 * i + 1, (("c", 1j), (f"J{i}", 1), (f"T{i}", 1j))))
        else:
            a_rows.append(SetupRow(f"a{i}", 2 * i, (("d", 1j), (f"J{i}", 1), (f"T{i}", 1j))))
            b_rows.append(SetupRow(f"b{i}", 2 * i + 1, (("d", -1), (f"J{i}", 1j), (f"T{i}", 1))))
    rows = a_rows + b_rows
    return SetupModel(dim, tuple(detectors), tuple(rows))


def as_phase_vector(setup: SetupModel, phases: Sequence[float]) -> np.ndarray:
    angles = np.asarray(phases, dtype=float)
    if angles.shape != (setup.phase_count,):
        raise PhaseCountMismatch(
            f"expected {setup.phase_count} phases, got shape {angles.shape}"
        )
    return angles


def transfer_matrix(setup: SetupModel, phases: Sequence[float]) -> np.ndarray:
    """Dense 2D x 2D matrix: rows = input modes, columns = detectors."""
    angles = as_phase_vector(setup, phases)
    return setup._coeff * np.exp(1j * angles[setup._slots])[:, None]


def click_amplitudes(
    setup: SetupModel, phases: Sequence[float], states: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized pattern amplitudes for a stack of input states.

    ``states`` has shape (n, D, D); returns (coincidences, doubles) with
    shapes (n, C(2D,2)) and (n, 2D), ordered like ``pattern_names``.
    """
    dim = setup.dim
    states = np.asarray(states, dtype=complex)
    if states.shape[-2:] != (dim, dim):
        raise DimensionMismatch(f"state shape {states.shape} vs setup dim {dim}")
    mat = transfer_matrix(setup, phases)
    a_rows, b_rows = mat[:dim], mat[dim:]
    coeff = np.einsum("nij,iu,jv->nuv", states, a_rows, b_rows)
    sym = coeff + np.transpose(coeff, (0, 2, 1))
    nd = 2 * dim
    iu, iv = np.triu_indices(nd, 1)
    return sym[:, iu, iv], coeff[:, np.arange(nd), np.arange(nd)]


def click_probabilities(
    setup: SetupModel, phases: Sequence[float], states: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Normalized pattern probabilities for a stack of input states."""
    coin, dbl = click_amplitudes(setup, phases, states)
    coin, dbl = np.abs(coin) ** 2, np.abs(dbl) ** 2
    totals = coin.sum(axis=1) + dbl.sum(axis=1)
    if np.any(totals <= 0):
        raise DegenerateOutput("all polynomial coefficients vanished for an input state")
    return coin / totals[:, None], dbl / totals[:, None]


def simulate(
    setup: SetupModel, phases: Sequence[float], state: TwoPhotonState
) -> ClickDistribution:
    """Propagate one two-photon state to a click-pattern distribution."""
    coin, dbl = click_probabilities(setup, phases, state.amps[None])
    coincidences, doubles = setup.pattern_names()
    probs = dict(zip(coincidences, coin[0]))
    probs.update(zip(doubles, dbl[0]))
    return ClickDistribution(probs)


def cyclic_variant(setup: SetupModel, shift: int) -> SetupModel:
    """Relabel input modes i -> (i + shift) mod D for both photons.

    Each row keeps its couplings and phase slot; only the mode label it
    serves changes, so shift = 0 is the identity.
    """
    dim = setup.dim
    if not 0 <= shift < dim:
        raise IndexError(f"shift {shift} out of range for D={dim}")
    rows = list(setup.rows)
    new_rows = [None] * (2 * dim)
    for i in range(dim):
        target = (i + shift) % dim
        a = rows[i]
        b = rows[dim + i]
        new_rows[target] = SetupRow(f"a{target}", a.phase_slot, a.entries)
        new_rows[dim + target] = SetupRow(f"b{target}", b.phase_slot, b.entries)
    return SetupModel(dim, setup.detectors, tuple(new_rows))


def reachable_patterns(setup: SetupModel, state: TwoPhotonState) -> set[Pattern]:
    """Patterns supported by at least one perfect matching.

    A pattern {u, v} is reachable when some input monomial a_i*b_j with
    nonzero amplitude routes one photon to u and the other to v through
    the row supports.
    """
    dim = setup.dim
    a_sup = setup._coeff[:dim] != 0
    b_sup = setup._coeff[dim:] != 0
    reachable: set[Pattern] = set()
    names = setup.detectors
    for i, j in zip(*np.nonzero(np.abs(state.amps) > 1e-15)):
        for u in np.nonzero(a_sup[i])[0]:
            for v in np.nonzero(b_sup[j])[0]:
                lo, hi = sorted((u, v))
                reachable.add((names[lo], names[hi]))
    return reachable


def setup_to_json(setup: SetupModel) -> dict:
    return {
        "dim": setup.dim,
        "detectors": list(setup.detectors),
        "rows": [
            {
                "input": row.input_mode,
                "phase_slot": int(row.phase_slot),
                "entries": [
                    {"det": det, "re": float(c.real), "im": float(c.imag)}
                    for det, c in row.entries
                ],
            }
            for row in setup.rows
        ],
    }


def setup_from_json(data: dict) -> SetupModel:
    """Parse the setup JSON schema; raises ValueError on malformed input."""
    try:
        dim = int(data["dim"])
        detectors = tuple(str(d) for d in data["detectors"])
        rows = []
        for row in data["rows"]:
            entries = tuple(
                (str(e["det"]), complex(float(e["re"]), float(e["im"])))
                for e in row["entries"]
            )
            rows.append(SetupRow(str(row["input"]), int(row["phase_slot"]), entries))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed setup JSON: {exc}") from exc
    return SetupModel(dim, detectors, tuple(rows))


def load_setup(path: str) -> SetupModel:
    with open(path, "r", encoding="utf-8") as fh:
        return setup_from_json(json.load(fh))


def save_setup(setup: SetupModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(setup_to_json(setup), fh, indent=2)
