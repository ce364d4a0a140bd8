import math

import numpy as np
import pytest

from gascap import (
    BinaryPolynomial,
    IdealSampler,
    SampleOutcome,
    StateVector,
    amplified_probability,
    apply,
    build_grover,
    build_state_prep,
    ideal_gas_sample,
    marked_probability,
    sample,
    value_register_width,
)
from gascap.circuits import CircuitSpec, GateSpec
from gascap.poly import bits_to_int, int_to_bits


def test_hadamard_on_zero():
    c = CircuitSpec(1, 0, (GateSpec("h", target=0),))
    sv = apply(c, StateVector.zero(1))
    assert np.allclose(sv.amplitudes, [1 / math.sqrt(2)] * 2)


def test_z_flips_phase_of_one():
    c = CircuitSpec(1, 0, (GateSpec("h", target=0), GateSpec("z", target=0)))
    sv = apply(c, StateVector.zero(1))
    assert np.allclose(sv.amplitudes, [1 / math.sqrt(2), -1 / math.sqrt(2)])


def test_apply_rejects_mismatch_and_cap():
    c = CircuitSpec(1, 0, (GateSpec("h", target=0),))
    with pytest.raises(ValueError):
        apply(c, StateVector.zero(2))
    big = CircuitSpec(25, 0, ())
    with pytest.raises(ValueError):
        apply(big, StateVector.zero(25))


def test_norm_preserved_gate_by_gate():
    rng = np.random.default_rng(0)
    p = BinaryPolynomial(3, {(): 1.0, (0, 2): -2.5, (1,): 0.3})
    c = build_state_prep(p, 0.1, m=4)
    sv = StateVector.zero(c.n_qubits)
    for g in c.gates:
        sv = apply(CircuitSpec(c.n_key, c.m_val, (g,)), sv)
        assert sv.norm() == pytest.approx(1.0, abs=1e-9)


def test_state_prep_keys_stay_uniform_with_exact_values():
    p = BinaryPolynomial(4, {(): 3.0, (0,): -2.0, (1, 3): 1.0})
    y = 1
    m = value_register_width(p + (-y))
    c = build_state_prep(p, y, m)
    sv = apply(c, StateVector.zero(c.n_qubits))
    probs = sv.probabilities().reshape(1 << 4, 1 << m)
    for key in range(1 << 4):
        value = int(round(p.evaluate(int_to_bits(key, 4)) - y)) % (1 << m)
        assert probs[key, value] == pytest.approx(1 / 16, abs=1e-12)


def test_two_complement_readout():
    out = SampleOutcome.from_index(0b101_1101, n_key=3, m_val=4)
    assert out.key_bits == (1, 0, 1)
    assert out.value_bits == (1, 1, 0, 1)
    assert out.decoded_value == 0b1101 - 16


def test_sampling_is_seed_deterministic():
    p = BinaryPolynomial(3, {(0,): 1.0, (1, 2): -2.0})
    c = build_state_prep(p, 0.0, m=3)
    sv = apply(c, StateVector.zero(c.n_qubits))
    a = [sample(sv, np.random.default_rng(9), 3, 3) for _ in range(5)]
    b = [sample(sv, np.random.default_rng(9), 3, 3) for _ in range(5)]
    assert a == b


def test_sample_of_deterministic_state():
    sv = StateVector.zero(4)  # |0000> split as 2 key + 2 value
    out = sample(sv, np.random.default_rng(0), 2, 2)
    assert out.key_bits == (0, 0) and out.value_bits == (0, 0)


def test_sampled_key_frequencies_roughly_uniform():
    p = BinaryPolynomial(3, {(0, 1): 1.0})
    c = build_state_prep(p, 0.0, m=2)
    sv = apply(c, StateVector.zero(c.n_qubits))
    rng = np.random.default_rng(123)
    counts = np.zeros(8)
    draws = 10_000
    for _ in range(draws):
        counts[bits_to_int(sample(sv, rng, 3, 2).key_bits)] += 1
    # five-sigma band around the uniform expectation
    expect = draws / 8
    sigma = math.sqrt(draws * (1 / 8) * (7 / 8))
    assert np.all(np.abs(counts - expect) < 5 * sigma)


# -- amplification --------------------------------------------------------


def test_amplified_probability_edges():
    assert amplified_probability(0, 16, 5) == 0.0
    assert amplified_probability(16, 16, 3) == pytest.approx(1.0)
    assert amplified_probability(1, 256, 0) == pytest.approx(1 / 256)


def test_amplified_probability_reference_point():
    # a single mark in 256 states after 12 amplification rounds
    want = math.sin(25 * math.asin(1 / 16)) ** 2
    assert amplified_probability(1, 256, 12) == pytest.approx(want)
    assert want > 0.999


def test_statevector_matches_amplification_formula():
    rng = np.random.default_rng(21)
    for _ in range(6):
        n = int(rng.integers(3, 7))
        terms = {(): float(rng.integers(-2, 3))}
        for _ in range(4):
            deg = int(rng.integers(1, 3))
            sup = tuple(sorted(rng.choice(n, size=deg, replace=False)))
            terms[sup] = float(rng.integers(-3, 4))
        p = BinaryPolynomial(n, terms)
        values = p.evaluate_all()
        y = float(rng.integers(int(values.min()), int(values.max()) + 1))
        m = value_register_width(p + (-y))
        t = int((values < y).sum())
        marked = np.where(values < y)[0]
        state = apply(build_state_prep(p, y, m), StateVector.zero(n + m))
        grover = build_grover(p, y, m)
        for l_ops in range(4):
            got = marked_probability(state, marked, m)
            assert got == pytest.approx(amplified_probability(t, 1 << n, l_ops), abs=1e-6)
            state = apply(grover, state)


def test_optimal_rotation_count_succeeds_whp():
    # one marked state among N: L = round(pi / (4 asin(sqrt(1/N))) - 1/2)
    # rotations push the success probability above 1 - 1/N
    for n in (3, 4, 5):
        p = BinaryPolynomial(n, {tuple(range(n)): -1.0})
        y, m = 0, 2
        n_states = 1 << n
        theta = math.asin(math.sqrt(1 / n_states))
        l_opt = round(math.pi / (4 * theta) - 0.5)
        state = apply(build_state_prep(p, y, m), StateVector.zero(n + m))
        grover = build_grover(p, y, m)
        for _ in range(l_opt):
            state = apply(grover, state)
        success = marked_probability(state, np.array([n_states - 1]), m)
        assert success >= 1 - 1 / n_states
        assert success == pytest.approx(amplified_probability(1, n_states, l_opt))


def test_grover_with_no_marked_states_keeps_uniform_keys():
    p = BinaryPolynomial(3, {(): 1.0})  # constant 1, nothing below y = 0
    m = 2
    state = apply(build_state_prep(p, 0.0, m), StateVector.zero(3 + m))
    state = apply(build_grover(p, 0.0, m), state)
    key_probs = state.probabilities().reshape(8, 1 << m).sum(axis=1)
    assert np.allclose(key_probs, 1 / 8)


# -- ideal backend --------------------------------------------------------


def test_ideal_sampler_zero_marked_is_uniform():
    p = BinaryPolynomial(3, {(): 1.0})
    sampler = IdealSampler(p)
    rng = np.random.default_rng(5)
    draws = [bits_to_int(sampler.sample(0.0, 7, rng)) for _ in range(4000)]
    counts = np.bincount(draws, minlength=8)
    sigma = math.sqrt(4000 * (1 / 8) * (7 / 8))
    assert np.all(np.abs(counts - 500) < 5 * sigma)


def test_ideal_sampler_matches_statevector_distribution():
    p = BinaryPolynomial(4, {(): 2.0, (0,): -3.0, (2, 3): 1.0, (1,): -1.0})
    y = 0
    values = p.evaluate_all()
    marked = set(np.where(values < y)[0].tolist())
    t, n_states = len(marked), 16
    sampler = IdealSampler(p)
    rng = np.random.default_rng(31)
    l_ops = 2
    want = amplified_probability(t, n_states, l_ops)
    draws = 20_000
    hits = sum(
        1 for _ in range(draws)
        if bits_to_int(sampler.sample(y, l_ops, rng)) in marked
    )
    sigma = math.sqrt(draws * want * (1 - want))
    assert abs(hits - draws * want) < 5 * sigma


def test_ideal_sampler_marked_draws_are_marked():
    # one mark in four states: a single round amplifies to certainty
    p = BinaryPolynomial(2, {(0, 1): -1.0})
    sampler = IdealSampler(p)
    assert sampler.marked_count(-0.5) == 1
    assert amplified_probability(1, 4, 1) == pytest.approx(1.0)
    rng = np.random.default_rng(8)
    for _ in range(50):
        assert sampler.sample(-0.5, 1, rng) == (1, 1)


def test_ideal_gas_sample_wrapper():
    p = BinaryPolynomial(2, {(0,): 1.0, (1,): 1.0})
    x = ideal_gas_sample(p, 0.5, 0, np.random.default_rng(2))
    assert len(x) == 2


def test_ideal_sampler_cap():
    with pytest.raises(ValueError):
        IdealSampler(BinaryPolynomial.zero(25))


def test_amplitude_dump_round_trip(tmp_path):
    from gascap import dump_amplitudes, load_amplitudes
    p = BinaryPolynomial(2, {(0,): 1.0, (0, 1): -2.0})
    c = build_state_prep(p, 0.0, m=3)
    sv = apply(c, StateVector.zero(c.n_qubits))
    path = tmp_path / "amps.bin"
    dump_amplitudes(sv, path)
    assert path.stat().st_size == 16 * sv.amplitudes.size  # two f64 per amplitude
    back = load_amplitudes(path)
    assert back.n_qubits == sv.n_qubits
    assert np.allclose(back.amplitudes, sv.amplitudes)
