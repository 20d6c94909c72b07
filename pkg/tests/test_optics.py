import json

import numpy as np
import pytest

from meanking import (
    DegenerateOutput,
    DimensionMismatch,
    PhaseCountMismatch,
    TwoPhotonState,
    build_setup,
    click_probabilities,
    cyclic_variant,
    simulate,
    transfer_matrix,
)
from meanking.optics import (
    SetupModel,
    SetupRow,
    reachable_patterns,
    setup_from_json,
    setup_to_json,
)
from meanking.qstate import bell_state, build_mub

from .conftest import random_state
from .oracles import polynomial_distribution, sympy_distribution

# the published 3D transfer matrix at unit phase factors; rows
# a0,a1,a2,b0,b1,b2, columns c,d,J1,J2,T1,T2
EQ8 = np.array(
    [
        [1, 1j, 1j, -1, 0, 0],
        [-1, 0, 1j, 0, 1, 0],
        [0, 1j, 0, 1, 0, 1j],
        [1j, 1, -1, 1j, 0, 0],
        [1j, 0, 1, 0, 1j, 0],
        [0, -1, 0, 1j, 0, 1],
    ],
    dtype=complex,
)


def test_dim3_matches_published_matrix(setup_of):
    mat = transfer_matrix(setup_of(3), np.zeros(6))
    assert np.abs(mat - EQ8).max() == 0.0


def test_phase_negates_row(setup_of):
    phases = np.zeros(6)
    phases[0] = np.pi
    mat = transfer_matrix(setup_of(3), phases)
    assert np.abs(mat[0] + EQ8[0]).max() < 1e-12
    assert np.abs(mat[1:] - EQ8[1:]).max() < 1e-12


@pytest.mark.parametrize("dim", [3, 5, 7])
def test_template_counts(setup_of, dim):
    setup = setup_of(dim)
    assert len(setup.rows) == 2 * dim
    assert len(setup.detectors) == 2 * dim
    assert setup.phase_count == 2 * dim
    mat = transfer_matrix(setup, np.zeros(2 * dim))
    mags = np.abs(mat)
    assert set(np.round(mags[mags > 0], 12)) == {1.0}


def test_dim5_detector_names(setup_of):
    assert setup_of(5).detectors == ("c", "d", "J1", "J2", "J3", "J4", "T1", "T2", "T3", "T4")


def test_phase_count_mismatch(setup_of):
    with pytest.raises(PhaseCountMismatch):
        transfer_matrix(setup_of(3), np.zeros(5))


def test_dimension_mismatch(setup_of):
    with pytest.raises(DimensionMismatch):
        click_probabilities(setup_of(3), np.zeros(6), np.zeros((1, 5, 5), dtype=complex))


@pytest.mark.parametrize("dim", [3, 5])
def test_distribution_normalized(setup_of, rng, dim):
    setup = setup_of(dim)
    for _ in range(5):
        phases = rng.uniform(0, 2 * np.pi, 2 * dim)
        dist = simulate(setup, phases, TwoPhotonState(dim, random_state(dim, rng)))
        assert abs(dist.total() - 1) < 1e-9
        assert all(v >= 0 for v in dist.probs.values())
        assert abs(sum(dist.decodable().values()) + dist.leakage() - 1) < 1e-9


@pytest.mark.parametrize("dim", [3, 5])
def test_matches_polynomial_oracle(setup_of, rng, dim):
    setup = setup_of(dim)
    for _ in range(20):
        phases = rng.uniform(0, 2 * np.pi, 2 * dim)
        state = random_state(dim, rng)
        dist = simulate(setup, phases, TwoPhotonState(dim, state))
        oracle = polynomial_distribution(setup, phases, state)
        for pattern, prob in dist.probs.items():
            assert abs(prob - oracle.get(pattern, 0.0)) < 1e-10


def test_bell_matches_sympy_oracle(setup_of, rng):
    setup = setup_of(3)
    phases = rng.uniform(0, 2 * np.pi, 6)
    bell = bell_state(3, build_mub(3), 3).amps
    dist = simulate(setup, phases, TwoPhotonState(3, bell))
    oracle = sympy_distribution(setup, phases, bell)
    for pattern, prob in dist.probs.items():
        assert abs(prob - oracle.get(pattern, 0.0)) < 1e-10


def test_both_photons_mode0_never_cd(setup_of, rng):
    # rows a0, b0 give a c*d coefficient of 1*1 + i*i = 0
    state = np.zeros((3, 3), dtype=complex)
    state[0, 0] = 1
    for _ in range(5):
        phases = rng.uniform(0, 2 * np.pi, 6)
        dist = simulate(setup_of(3), phases, TwoPhotonState(3, state))
        assert dist.probs[("c", "d")] < 1e-15


def test_degenerate_output(setup_of):
    rows = tuple(
        SetupRow(r.input_mode, r.phase_slot, () if r.input_mode == "a0" else r.entries)
        for r in setup_of(3).rows
    )
    dead = SetupModel(3, setup_of(3).detectors, rows)
    state = np.zeros((3, 3), dtype=complex)
    state[0, 0] = 1
    with pytest.raises(DegenerateOutput):
        simulate(dead, np.zeros(6), TwoPhotonState(3, state))


def test_cyclic_identity_and_order(setup_of):
    setup = setup_of(3)
    assert cyclic_variant(setup, 0) == setup
    thrice = cyclic_variant(cyclic_variant(cyclic_variant(setup, 1), 1), 1)
    assert thrice == setup


def test_cyclic_relabel_equivalence(setup_of, rng):
    setup = setup_of(3)
    phases = rng.uniform(0, 2 * np.pi, 6)
    e00 = np.zeros((3, 3), dtype=complex)
    e00[0, 0] = 1
    e11 = np.zeros((3, 3), dtype=complex)
    e11[1, 1] = 1
    orig = simulate(setup, phases, TwoPhotonState(3, e00))
    shifted = simulate(cyclic_variant(setup, 1), phases, TwoPhotonState(3, e11))
    for pattern, prob in orig.probs.items():
        assert abs(prob - shifted.probs[pattern]) < 1e-12


def test_reachable_patterns(setup_of):
    state = np.zeros((3, 3), dtype=complex)
    state[0, 0] = 1
    patterns = reachable_patterns(setup_of(3), TwoPhotonState(3, state))
    # a0 couples to {c,d,J1,J2} and so does b0, so everything in the
    # 4x4 product is reachable except nothing beyond those detectors
    flat = {det for p in patterns for det in p}
    assert flat == {"c", "d", "J1", "J2"}
    assert ("c", "d") in patterns


def test_json_roundtrip(setup_of, tmp_path):
    setup = setup_of(5)
    data = setup_to_json(setup)
    again = setup_from_json(json.loads(json.dumps(data)))
    assert again == setup


def test_malformed_json_rejected():
    with pytest.raises(ValueError):
        setup_from_json({"dim": 3, "detectors": ["c"]})
    with pytest.raises(ValueError):
        setup_from_json({"dim": 3, "detectors": ["c"] * 6, "rows": [{"input": "a0"}]})
