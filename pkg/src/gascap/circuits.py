"""Compilation of binary polynomials into adaptive-search circuits.

The state-preparation operator A_y acts on a key register of n qubits (one
per binary variable) and a value register of m qubits.  It is Hadamards on
everything, one phase block per polynomial term, and a final inverse QFT on
the value register.  A term with coefficient a contributes theta = 2 pi a /
2^m; the block applies R(2^(m-1-j) * theta) to value qubit j, controlled on
the term's key qubits.  The constant term absorbs -y and is uncontrolled.
With integer coefficients the value register then holds (E(x) - y) mod 2^m
in two's complement, so a single Z on the sign qubit marks exactly the
states with E(x) < y.

Qubit numbering: key qubits are 0..n-1 (variable order), value qubits are
n..n+m-1 with value qubit 0 the sign/most-significant bit.  The inverse QFT
is emitted as one unit and carries no terminal swap layer; readout uses the
same big-endian convention.

Register sizing.  ``value_register_width`` applies the two's-complement
inequalities strictly: every coefficient and the polynomial's value bounds
must lie in [-2^(m-1), 2^(m-1)).  Reference circuits for the binary-encoded
objective are sized by the coefficient inequality alone (real-valued
objectives tolerate rare wraparound because every sample is re-evaluated
classically), which ``coefficient_width`` reproduces; one-hot circuits use
the closed-form bound on max(E).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .formulation import Encoding, Formulation, bits_per_channel
from .poly import BinaryPolynomial

GateKind = str  # "h", "r", "cr", "z", "iqft", "qft", "diffusion"


@dataclass(frozen=True)
class GateSpec:
    kind: GateKind
    target: int | None = None
    controls: tuple[int, ...] = ()
    theta: float = 0.0

    def __post_init__(self):
        if self.kind == "cr" and not self.controls:
            raise ValueError("cr gates need at least one control")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")

    def inverse(self) -> "GateSpec":
        if self.kind in ("h", "z", "diffusion"):
            return self
        if self.kind in ("r", "cr"):
            return GateSpec(self.kind, self.target, self.controls, -self.theta)
        if self.kind == "iqft":
            return GateSpec("qft")
        if self.kind == "qft":
            return GateSpec("iqft")
        raise ValueError(f"unknown gate kind {self.kind!r}")


@dataclass(frozen=True)
class CircuitSpec:
    n_key: int
    m_val: int
    gates: tuple[GateSpec, ...]

    @property
    def n_qubits(self) -> int:
        return self.n_key + self.m_val

    def __post_init__(self):
        total = self.n_key + self.m_val
        for g in self.gates:
            for q in (() if g.target is None else (g.target,)) + g.controls:
                if not 0 <= q < total:
                    raise ValueError(f"gate {g} references qubit {q} outside 0..{total - 1}")

    def inverse(self) -> "CircuitSpec":
        return CircuitSpec(
            self.n_key, self.m_val, tuple(g.inverse() for g in reversed(self.gates))
        )


# -- register sizing ----------------------------------------------------


def _width_for_value(v: float) -> int:
    """Smallest m with -2^(m-1) <= v < 2^(m-1)."""
    m = 1
    while not (-(2 ** (m - 1)) <= v < 2 ** (m - 1)):
        m += 1
        if m > 128:
            raise ValueError(f"value {v} not representable")
    return m


def value_register_width(
    p: BinaryPolynomial, bounds: tuple[float, float] | None = None
) -> int:
    """Width m such that every coefficient and the value range fit the two's
    complement; ``bounds`` overrides the interval-arithmetic estimate when
    tighter (min, max) enclosures are known."""
    st = p.stats()
    lo, hi = bounds if bounds is not None else (st.min_value_bound, st.max_value_bound)
    m = 1
    for v in [lo, hi] + list(p.terms.values()):
        m = max(m, _width_for_value(v))
    return m


def coefficient_width(p: BinaryPolynomial, y: float = 0.0) -> int:
    """Smallest m admitting every coefficient (constant folded with -y).

    This is how the reference binary-encoding circuits are sized: value-range
    overflow is tolerated because each measured sample is re-evaluated
    classically before the threshold moves.
    """
    m = 1
    const = p.constant_term - y
    if const != 0.0:
        m = _width_for_value(const)
    for s, c in p.terms.items():
        if s:
            m = max(m, _width_for_value(c))
    return m


def qubo_width(n_ap: int, n_ch: int, d_sum: float, w: float) -> int:
    """Closed-form width for the one-hot objective: max(E) = N_CH * D_sum +
    w * N_AP * (N_CH - 1)^2, plus the sign bit."""
    max_e = n_ch * d_sum + w * n_ap * (n_ch - 1) ** 2
    return math.ceil(math.log2(max_e)) + 1


def hubo_width_closed_form(d_sum: float) -> int:
    """Closed-form width for the binary-encoded objective: max(E') = D_sum."""
    return math.ceil(math.log2(d_sum)) + 1


def formulation_width(form: Formulation, d_sum: float | None = None) -> int:
    """Value-register width used when compiling a formulation."""
    if form.encoding is Encoding.ONE_HOT:
        if d_sum is None:
            raise ValueError("one-hot sizing needs d_sum")
        return qubo_width(form.n_ap, form.n_ch, d_sum, form.penalty)
    return coefficient_width(form.objective)


def closed_form_qubits(
    n_ap: int, n_ch: int, d_sum: float, w: float, kind: str
) -> int:
    """Total n + m from the closed forms, per formulation family."""
    if d_sum <= 0:
        raise ValueError("d_sum must be positive")
    if kind == "qubo":
        return n_ap * n_ch + qubo_width(n_ap, n_ch, d_sum, w)
    if kind in ("hubo-asc", "hubo-desc", "hubo"):
        return n_ap * bits_per_channel(n_ch) + hubo_width_closed_form(d_sum)
    raise ValueError(f"unknown formulation kind {kind!r}")


# -- circuit construction -------------------------------------------------


def build_state_prep(p: BinaryPolynomial, y: float, m: int) -> CircuitSpec:
    """The operator A_y for polynomial p at threshold y with an m-qubit
    value register."""
    n = p.n_vars
    limit = 2.0 ** (m - 1)
    const = p.constant_term - y
    for label, coeff in [("constant-y", const)] + [
        (str(s), c) for s, c in p.terms.items() if s
    ]:
        if not -limit <= coeff < limit:
            raise ValueError(
                f"coefficient {coeff} ({label}) outside [-2^{m - 1}, 2^{m - 1}) for m={m}"
            )

    gates: list[GateSpec] = []
    for q in range(n + m):
        gates.append(GateSpec("h", target=q))

    def phase_block(coeff: float, controls: tuple[int, ...]):
        theta = 2.0 * math.pi * coeff / (2.0 ** m)
        for j in range(m):
            angle = (2.0 ** (m - 1 - j)) * theta
            if controls:
                gates.append(GateSpec("cr", target=n + j, controls=controls, theta=angle))
            else:
                gates.append(GateSpec("r", target=n + j, theta=angle))

    if const != 0.0:
        phase_block(const, ())
    for support, coeff in p.sorted_terms():
        if support:
            phase_block(coeff, tuple(support))

    gates.append(GateSpec("iqft"))
    return CircuitSpec(n_key=n, m_val=m, gates=tuple(gates))


def build_grover(p: BinaryPolynomial, y: float, m: int) -> CircuitSpec:
    """One Grover operator G = A_y D A_y^dagger O as a gate list.

    O is a Z on the sign qubit; D reflects about the all-zero state of the
    full register (global phase ignored).
    """
    a = build_state_prep(p, y, m)
    gates: list[GateSpec] = [GateSpec("z", target=a.n_key)]
    gates.extend(a.inverse().gates)
    gates.append(GateSpec("diffusion"))
    gates.extend(a.gates)
    return CircuitSpec(n_key=a.n_key, m_val=a.m_val, gates=tuple(gates))


# -- resource accounting --------------------------------------------------


def cnot_cost(arity: int) -> int:
    """CNOTs after decomposing a phase rotation with ``arity`` controls:
    2 for a singly controlled rotation, 6(k-1) for k >= 2, none uncontrolled."""
    if arity == 0:
        return 0
    if arity == 1:
        return 2
    return 6 * (arity - 1)


@dataclass(frozen=True)
class ResourceReport:
    n_key: int
    m_val: int
    h_count: int
    r_count: int                      # uncontrolled phase rotations
    cr_counts: dict[int, int]         # control arity k >= 1 -> gate count
    iqft_count: int
    ancillae: int                     # for the multi-control decomposition
    cnot_count: int
    closed_form: "ResourceReport | None" = None

    def cr(self, k: int) -> int:
        return self.cr_counts.get(k, 0)

    @property
    def max_arity(self) -> int:
        return max(self.cr_counts, default=0)


def _cnot_total(r_count: int, cr_counts: dict[int, int]) -> int:
    return sum(cnot_cost(k) * v for k, v in cr_counts.items())


def enumerate_resources(c: CircuitSpec, degree: int | None = None) -> ResourceReport:
    """Gate histogram of a state-preparation circuit (the dominant block of
    each search iteration)."""
    h = r = iqft = 0
    cr: dict[int, int] = {}
    max_controls = 0
    for g in c.gates:
        if g.kind == "h":
            h += 1
        elif g.kind == "r":
            r += 1
        elif g.kind == "cr":
            k = len(g.controls)
            cr[k] = cr.get(k, 0) + 1
            max_controls = max(max_controls, k)
        elif g.kind in ("iqft", "qft"):
            iqft += 1
        # z/diffusion appear only in full Grover operators, outside this scope
    if degree is None:
        degree = max_controls
    return ResourceReport(
        n_key=c.n_key,
        m_val=c.m_val,
        h_count=h,
        r_count=r,
        cr_counts=cr,
        iqft_count=iqft,
        ancillae=max(0, degree - 1),
        cnot_count=_cnot_total(r, cr),
    )


def qubo_gate_beta(n_ap: int, n_ch: int) -> int:
    """Angle-register width under unit costs and unit penalty."""
    return math.ceil(math.log2(n_ch * math.comb(n_ap, 2) + n_ap * (n_ch - 1) ** 2)) + 1


def hubo_gate_beta(n_ap: int) -> int:
    return math.ceil(math.log2(math.comb(n_ap, 2))) + 1


def closed_form_resources(n_ap: int, n_ch: int, kind: str) -> ResourceReport:
    """Exact gate-count formulas under the normalization D_ik = w = 1.

    For the descending encoding the ascending formulas are upper bounds (the
    whole point of the descending assignment is that its expansion is
    smaller), so both binary kinds share this closed form.
    """
    if kind == "qubo":
        n = n_ap * n_ch
        beta = qubo_gate_beta(n_ap, n_ch)
        cr = {
            1: n_ap * n_ch * beta,
            2: (n_ch * math.comb(n_ap, 2) + n_ap * math.comb(n_ch, 2)) * beta,
        }
        return ResourceReport(
            n_key=n, m_val=beta, h_count=n + beta, r_count=beta,
            cr_counts=cr, iqft_count=1, ancillae=1,
            cnot_count=_cnot_total(beta, cr),
        )
    if kind in ("hubo-asc", "hubo-desc", "hubo"):
        n_b = bits_per_channel(n_ch)
        n = n_ap * n_b
        beta = hubo_gate_beta(n_ap)
        cr = {1: n * beta}
        if n >= 2:
            cr[2] = math.comb(n, 2) * beta
        pairs = math.comb(n_ap, 2)
        for k in range(3, 2 * n_b + 1):
            if k <= n_b:
                count = pairs * math.comb(2 * n_b, k) - n_ap * (n_ap - 2) * math.comb(n_b, k)
            else:
                count = pairs * math.comb(2 * n_b, k)
            if count:
                cr[k] = count * beta
        return ResourceReport(
            n_key=n, m_val=beta, h_count=n + beta, r_count=beta,
            cr_counts=cr, iqft_count=1, ancillae=max(0, 2 * n_b - 1),
            cnot_count=_cnot_total(beta, cr),
        )
    raise ValueError(f"unknown formulation kind {kind!r}")


def formulation_resources(
    form: Formulation, d_sum: float | None = None, with_closed_form: bool = True
) -> ResourceReport:
    """Enumerated report for a formulation's state-preparation circuit, with
    the matching closed form attached."""
    m = formulation_width(form, d_sum=d_sum)
    circuit = build_state_prep(form.objective, 0.0, m)
    report = enumerate_resources(circuit, degree=form.objective.degree)
    if with_closed_form:
        kind = "qubo" if form.encoding is Encoding.ONE_HOT else "hubo"
        closed = closed_form_resources(form.n_ap, form.n_ch, kind)
        report = replace(report, closed_form=closed)
    return report
