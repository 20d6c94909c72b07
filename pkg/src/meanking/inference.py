"""Bayesian MAP decoding of click patterns and the two success metrics.

``p_V`` is the probability that Alice identifies the incoming VAA state;
``p_M(m)`` is the probability that she retrodicts the King's outcome for
basis m.  Decoding uses a uniform prior over the D^2 VAA states; ties are
broken toward the lowest index for determinism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySubset
from .optics import Pattern, SetupModel, click_probabilities
from .qstate import MubFamily
from .vaa import VaaBasis

#: decoding strategies for p_M
STRATEGIES = ("vaa-map", "basis-conditioned")


@dataclass(frozen=True)
class LikelihoodTable:
    """P(pattern | phi_n) over decodable coincidence patterns.

    ``entries[n, i]`` is the probability that VAA state n triggers
    coincidence pattern i; the per-state mass lost to same-detector
    doubles is stored in ``leakage``.
    """

    dim: int
    patterns: tuple[Pattern, ...]
    entries: np.ndarray
    leakage: np.ndarray


@dataclass(frozen=True)
class DecodeRule:
    """MAP assignment pattern -> VAA index, with full posteriors.

    Unreachable patterns (zero likelihood under every state) get
    assignment -1 and a zero posterior column.
    """

    assignment: np.ndarray
    posterior: np.ndarray

    def reachable(self) -> np.ndarray:
        return self.assignment >= 0


def likelihoods(setup: SetupModel, phases: Sequence[float], vaa: VaaBasis) -> LikelihoodTable:
    """Simulate every VAA state and collect the coincidence likelihoods."""
    coin, dbl = click_probabilities(setup, phases, vaa.states)
    coincidences, _ = setup.pattern_names()
    return LikelihoodTable(vaa.dim, tuple(coincidences), coin, dbl.sum(axis=1))


def decode(table: LikelihoodTable) -> DecodeRule:
    """Bayes posterior with uniform prior and per-pattern argmax."""
    lik = table.entries
    col = lik.sum(axis=0)
    reachable = col > 0
    posterior = np.zeros_like(lik)
    posterior[:, reachable] = lik[:, reachable] / col[reachable]
    assignment = np.where(reachable, lik.argmax(axis=0), -1)
    return DecodeRule(assignment, posterior)


def success_v(table: LikelihoodTable, rule: DecodeRule, post_select: bool = False) -> float:
    """Overall identification probability p_V.

    Sums P(d_i) * max_k P(phi_k | d_i) over reachable coincidence
    patterns, with P(d_i) the uniform-prior total probability.  With
    ``post_select`` the result is conditioned on a coincidence occurring.
    """
    totals = table.entries.mean(axis=0)
    ok = rule.reachable()
    value = float((totals[ok] * rule.posterior[:, ok].max(axis=0)).sum())
    if post_select:
        value /= float(totals.sum())
    return value


def _collapsed_stack(mubs: MubFamily) -> np.ndarray:
    """All collapsed product states, ordered (m, j); shape ((D+1)*D, D, D)."""
    b = mubs.bases
    return np.einsum("mja,mjb->mjab", b.conj(), b).reshape(-1, mubs.dim, mubs.dim)


def pm_values(
    setup: SetupModel,
    phases: Sequence[float],
    mubs: MubFamily,
    vaa: VaaBasis,
    strategy: str = "vaa-map",
    post_select: bool = False,
) -> np.ndarray:
    """p_M for every basis m = 0..D at once.

    Under ``vaa-map`` a pattern is decoded to the MAP VAA state k* and
    Alice guesses f_{k*}(m) after the reveal; under ``basis-conditioned``
    the pattern is decoded by the outcome likelihoods of the revealed
    basis directly.  Same-detector doubles never count as success; with
    ``post_select`` each p_M is conditioned on a coincidence.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    dim = mubs.dim
    coll = _collapsed_stack(mubs)
    coin, _ = click_probabilities(setup, phases, coll)
    coin = coin.reshape(dim + 1, dim, -1)  # [m, j, pattern]

    if strategy == "vaa-map":
        rule = decode(likelihoods(setup, phases, vaa))
        guesses = np.where(
            rule.assignment[None, :] >= 0,
            vaa.mapping.table.T[:, np.maximum(rule.assignment, 0)],
            -1,
        )  # [m, pattern]
    else:
        guesses = coin.argmax(axis=1)  # [m, pattern]

    correct = coin * (guesses[:, None, :] == np.arange(dim)[None, :, None])
    values = correct.sum(axis=(1, 2)) / dim
    if post_select:
        values = values / (coin.sum(axis=(1, 2)) / dim)
    return values


def success_m(
    setup: SetupModel,
    phases: Sequence[float],
    mubs: MubFamily,
    vaa: VaaBasis,
    m: int,
    strategy: str = "vaa-map",
    post_select: bool = False,
) -> float:
    """p_M for a single basis; see :func:`pm_values`."""
    if not 0 <= m <= mubs.dim:
        raise IndexError(f"basis index {m} not in 0..{mubs.dim}")
    return float(pm_values(setup, phases, mubs, vaa, strategy, post_select)[m])


def subset_report(
    setup: SetupModel,
    phases: Sequence[float],
    mubs: MubFamily,
    vaa: VaaBasis,
    subset: Sequence[int],
    strategy: str = "vaa-map",
    post_select: bool = False,
) -> float:
    """Arithmetic mean of p_M over a non-empty basis subset."""
    subset = list(subset)
    if not subset:
        raise EmptySubset("basis subset must be non-empty")
    values = pm_values(setup, phases, mubs, vaa, strategy, post_select)
    return float(np.mean([values[m] for m in subset]))


def best_pair(values: Sequence[float]) -> tuple[tuple[int, int], float]:
    """Scan all 2-subsets of bases; returns the maximizing pair."""
    values = np.asarray(values, dtype=float)
    best: tuple[int, int] | None = None
    best_val = -np.inf
    for m1 in range(len(values)):
        for m2 in range(m1 + 1, len(values)):
            mean = (values[m1] + values[m2]) / 2
            if mean > best_val:
                best, best_val = (m1, m2), mean
    assert best is not None
    return best, float(best_val)


def pv_value(
    setup: SetupModel,
    phases: Sequence[float],
    vaa: VaaBasis,
    post_select: bool = False,
) -> float:
    """p_V directly from setup and phases."""
    table = likelihoods(setup, phases, vaa)
    return success_v(table, decode(table), post_select)
