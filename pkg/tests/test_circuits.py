import math

import numpy as np
import pytest

from gascap import (
    BinaryPolynomial,
    CoeffTable,
    StateVector,
    apply,
    build_grover,
    build_state_prep,
    closed_form_qubits,
    closed_form_resources,
    coefficient_width,
    enumerate_resources,
    formulation_resources,
    formulation_width,
    value_register_width,
)
from gascap.circuits import cnot_cost, hubo_gate_beta, qubo_gate_beta, qubo_width
from gascap.formulation import formulation_from_table


def fig_poly():
    return BinaryPolynomial(4, {(): 1.0, (0,): 1.0, (1, 2, 3): -1.8})


# -- register sizing ------------------------------------------------------


def test_value_register_width_reference():
    # max value 2 needs the strict inequality: 2 < 2^(m-1) forces m = 3
    assert value_register_width(fig_poly()) == 3
    assert value_register_width(fig_poly(), bounds=(-0.8, 2.0)) == 3


def test_value_register_width_zero_polynomial():
    assert value_register_width(BinaryPolynomial.zero(3)) == 1


def test_value_register_width_monotone_in_bounds():
    p = BinaryPolynomial(2, {(0,): 1.0})
    assert value_register_width(p, bounds=(0.0, 1.0)) == 2
    assert value_register_width(p, bounds=(0.0, 100.0)) == 8


def test_coefficient_width_reference_circuit(hubo_desc, table):
    # the reference 8+4 circuit: largest magnitude coefficient 6.999 fits
    # four signed bits, and that is the sizing the circuit uses
    assert coefficient_width(hubo_desc.objective) == 4
    assert formulation_width(hubo_desc, d_sum=table.d_sum) == 4
    assert hubo_desc.n_vars + formulation_width(hubo_desc, d_sum=table.d_sum) == 12


def test_sizing_rules_differ_on_reference_objective(hubo_desc):
    # the strict two's-complement rule needs one more qubit than the
    # coefficient rule here: the objective's true maximum 8.527 does not fit
    # [-8, 8).  The compiled circuit accepts the rare wraparound because the
    # adaptive loop re-evaluates every sample classically.
    _, lo = hubo_desc.objective.exhaustive_min()
    _, hi = hubo_desc.objective.exhaustive_max()
    assert hi == pytest.approx(8.527, abs=5e-3)
    assert value_register_width(hubo_desc.objective, bounds=(lo, hi)) == 5
    assert coefficient_width(hubo_desc.objective) == 4


def test_closed_form_qubits_reference(table):
    # 12 + ceil(log2(3 * 8.527 + 4 * 4)) + 1 = 12 + 6 + 1
    assert closed_form_qubits(4, 3, table.d_sum, 1.0, "qubo") == 19
    # 8 + ceil(log2 8.527) + 1; the built circuit is one qubit slimmer
    assert closed_form_qubits(4, 3, table.d_sum, 1.0, "hubo-asc") == 13


def test_closed_form_hubo_below_qubo_everywhere():
    for n_ap in range(3, 65):
        for n_ch in range(2, n_ap):
            hubo = closed_form_qubits(n_ap, n_ch, math.comb(n_ap, 2), 1.0, "hubo-asc")
            qubo = closed_form_qubits(n_ap, n_ch, math.comb(n_ap, 2), 1.0, "qubo")
            assert hubo < qubo


# -- state preparation structure -----------------------------------------


def test_state_prep_reference_blocks():
    c = build_state_prep(fig_poly(), y=0.0, m=3)
    h_gates = [g for g in c.gates if g.kind == "h"]
    assert len(h_gates) == 7  # n + m
    # uncontrolled block carries theta = 2 pi / 8 = pi / 4 on its last rotation
    r_gates = [g for g in c.gates if g.kind == "r"]
    assert len(r_gates) == 3
    assert r_gates[-1].theta == pytest.approx(math.pi / 4)
    assert r_gates[0].theta == pytest.approx(4 * math.pi / 4)
    # the cubic term drives a triple-controlled block with theta = -1.8 pi / 4
    cr3 = [g for g in c.gates if g.kind == "cr" and len(g.controls) == 3]
    assert len(cr3) == 3
    assert cr3[-1].theta == pytest.approx(-1.8 * math.pi / 4)
    assert cr3[0].controls == (1, 2, 3)
    assert c.gates[-1].kind == "iqft"


def test_state_prep_hadamard_layer_for_reference_hubo(hubo_desc, table):
    m = formulation_width(hubo_desc, d_sum=table.d_sum)
    c = build_state_prep(hubo_desc.objective, 0.0, m)
    assert sum(1 for g in c.gates if g.kind == "h") == 12
    assert c.gates[0].kind == "h"


def test_reference_hubo_circuit_fingerprint(hubo_desc, table):
    # the compiled descending circuit carries the two hallmark phase blocks:
    # an uncontrolled 4.000 * pi/8 (the constant) and a four-fold controlled
    # 5.505 * pi/8 on the first AP pair's slot bits
    from gascap.circuits import hubo_gate_beta
    m = formulation_width(hubo_desc, d_sum=table.d_sum)
    assert m == hubo_gate_beta(4)  # coefficient sizing coincides with beta'
    c = build_state_prep(hubo_desc.objective, 0.0, m)
    unit = math.pi / 8  # 2 pi / 2^m
    r_last = [g for g in c.gates if g.kind == "r"][-1]
    assert r_last.theta == pytest.approx(4.000 * unit, abs=1e-3)
    quartic = [g for g in c.gates if g.kind == "cr" and g.controls == (0, 1, 2, 3)]
    assert len(quartic) == m
    assert quartic[-1].theta == pytest.approx(5.505 * unit, abs=1e-3)


def test_state_prep_rejects_overflowing_coefficient():
    p = BinaryPolynomial(1, {(0,): 9.0})
    with pytest.raises(ValueError, match="outside"):
        build_state_prep(p, 0.0, m=4)
    build_state_prep(p, 0.0, m=5)


def test_constant_polynomial_readout_is_deterministic():
    p = BinaryPolynomial.constant(1.0, 1)
    c = build_state_prep(p, 0.0, m=2)
    sv = apply(c, StateVector.zero(c.n_qubits))
    probs = sv.probabilities().reshape(2, 4)
    # both keys uniformly likely, value register always reads 01
    assert probs[:, 1] == pytest.approx([0.5, 0.5])
    assert probs[:, [0, 2, 3]].sum() == pytest.approx(0.0, abs=1e-12)


def test_state_prep_then_inverse_is_identity():
    rng = np.random.default_rng(12)
    p = BinaryPolynomial(3, {(): 2.0, (0, 1): -1.5, (2,): 0.75})
    c = build_state_prep(p, 0.25, m=4)
    sv = apply(c.inverse(), apply(c, StateVector.zero(c.n_qubits)))
    want = np.zeros(1 << c.n_qubits); want[0] = 1.0
    assert np.max(np.abs(sv.amplitudes - want)) < 1e-10


def test_grover_gate_order():
    g = build_grover(fig_poly(), 0.0, 3)
    kinds = [gate.kind for gate in g.gates]
    assert kinds[0] == "z"
    assert kinds.count("diffusion") == 1
    assert kinds[-1] == "iqft"  # the closing A_y ends with the inverse QFT
    # the Z oracle targets the sign qubit
    assert g.gates[0].target == g.n_key


# -- resource accounting --------------------------------------------------


def test_cnot_cost_rule():
    assert [cnot_cost(k) for k in (0, 1, 2, 3, 5)] == [0, 2, 6, 12, 24]


def test_enumerate_constant_only():
    p = BinaryPolynomial.constant(3.0, 0)
    c = build_state_prep(p, 0.0, m=3)
    rep = enumerate_resources(c)
    assert rep.r_count == 3
    assert rep.cr_counts == {}
    assert rep.cnot_count == 0
    assert rep.iqft_count == 1


def test_enumerate_qubo_counts_match_closed_forms():
    for n_ap in (4, 6, 8):
        n_ch = n_ap // 2
        t = CoeffTable.uniform(n_ap, 1.0)
        form = formulation_from_table(t, n_ch, "qubo", 1.0)
        rep = formulation_resources(form, d_sum=t.d_sum)
        closed = rep.closed_form
        beta = qubo_gate_beta(n_ap, n_ch)
        assert rep.m_val == qubo_width(n_ap, n_ch, t.d_sum, 1.0) == beta
        assert rep.h_count == rep.n_key + rep.m_val == closed.h_count
        assert rep.cr(1) == n_ap * n_ch * beta == closed.cr(1)
        assert rep.cr(2) == closed.cr(2)
        assert all(rep.cr(k) == 0 for k in range(3, 9))


def test_qubo_two_cr_closed_form_identity():
    # the binomial form equals N_AP N_CH (N_AP + N_CH - 2) / 2
    for n_ap, n_ch in [(4, 2), (6, 3), (10, 5), (12, 6)]:
        beta = qubo_gate_beta(n_ap, n_ch)
        closed = closed_form_resources(n_ap, n_ch, "qubo")
        assert closed.cr(2) == n_ap * n_ch * (n_ap + n_ch - 2) // 2 * beta


def test_hubo_beta_reference():
    assert hubo_gate_beta(4) == 4  # ceil(log2 6) + 1


def test_hubo_closed_form_two_cr():
    for n_ap, n_ch in [(6, 3), (10, 5)]:
        n_b = (n_ch - 1).bit_length()
        closed = closed_form_resources(n_ap, n_ch, "hubo")
        assert closed.cr(2) == math.comb(n_ap * n_b, 2) * hubo_gate_beta(n_ap)


def test_enumerated_hubo_never_exceeds_closed_form():
    for n_ap in (4, 6, 8, 10):
        n_ch = n_ap // 2
        t = CoeffTable.uniform(n_ap, 1.0)
        form = formulation_from_table(t, n_ch, "hubo-asc", 1.0)
        rep = formulation_resources(form, d_sum=t.d_sum)
        closed = rep.closed_form
        for k in range(1, max(rep.max_arity, closed.max_arity) + 1):
            assert rep.cr(k) <= closed.cr(k)
        assert rep.ancillae == form.objective.degree - 1


def test_descending_cnot_never_above_ascending():
    for n_ap in (4, 6, 8, 10, 12):
        n_ch = n_ap // 2
        t = CoeffTable.uniform(n_ap, 1.0)
        asc = formulation_resources(
            formulation_from_table(t, n_ch, "hubo-asc", 1.0), d_sum=t.d_sum,
            with_closed_form=False)
        desc = formulation_resources(
            formulation_from_table(t, n_ch, "hubo-desc", 1.0), d_sum=t.d_sum,
            with_closed_form=False)
        assert desc.cnot_count <= asc.cnot_count
        if n_ch & (n_ch - 1):  # not a power of two
            assert desc.cnot_count < asc.cnot_count
        else:
            assert desc.cnot_count == asc.cnot_count


def test_gate_and_circuit_validation():
    from gascap.circuits import CircuitSpec, GateSpec
    with pytest.raises(ValueError):
        GateSpec("cr", target=0, controls=())
    with pytest.raises(ValueError):
        CircuitSpec(1, 1, (GateSpec("h", target=5),))
