"""Binary objective formulations of the channel assignment problem.

Three encodings of "AP i uses channel c" are supported:

* one-hot: N_CH indicator bits per AP, channel c sets bit c only.  Objective
  is quadratic; a penalty w * (sum_c x_ic - 1)^2 per AP enforces validity.
* ascending binary: each AP gets N_B = ceil(log2 N_CH) slot bits spelling
  the codeword [c - 1] in big-endian binary.
* descending binary: codewords are assigned in reverse, [N_CH - c + 1]; low
  channel indices get codewords dense in ones, which shrinks the expanded
  objective (the product for an all-ones codeword is a single monomial).

For both binary encodings the per-channel indicator is the degree-N_B product
prod_r (1 - b_r + (2 b_r - 1) x_ir), so co-channel costs become terms of
degree up to 2 N_B; codewords that decode outside 1..N_CH are penalized by
w' times their indicator.

When N_CH is a power of two the descending map [N_CH - c + 1] is taken
mod 2^N_B (channel 1 wraps to the all-zero codeword); this keeps the map a
bijection onto the codeword set, agrees with the tabulated mapping whenever
N_CH < 2^N_B, and leaves no invalid codewords to penalize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .cap import CapInstance, CoeffTable, coeff_table
from .poly import BinaryPolynomial, BitVector, bits_to_int


class Encoding(Enum):
    ONE_HOT = "one_hot"
    BINARY_ASCENDING = "binary_ascending"
    BINARY_DESCENDING = "binary_descending"

    @property
    def is_binary(self) -> bool:
        return self is not Encoding.ONE_HOT


def bits_per_channel(n_ch: int) -> int:
    """N_B = ceil(log2 N_CH), the slot width of the binary encodings."""
    if n_ch < 1:
        raise ValueError("n_ch must be positive")
    return max(1, (n_ch - 1).bit_length())


@dataclass(frozen=True)
class Formulation:
    encoding: Encoding
    objective: BinaryPolynomial
    penalty: float
    n_ap: int
    n_ch: int
    var_layout: dict[tuple[int, int], int] = field(compare=False)
    # var_layout keys: (ap, channel) for one-hot, (ap, slot) for binary;
    # ap is 0-based, channel/slot labels are 1-based, values are flat indices

    @property
    def n_vars(self) -> int:
        return self.objective.n_vars

    @property
    def slots_per_ap(self) -> int:
        if self.encoding is Encoding.ONE_HOT:
            return self.n_ch
        return bits_per_channel(self.n_ch)


@dataclass(frozen=True)
class DecodeResult:
    assignment: tuple[int, ...] | None
    violations: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return self.assignment is not None


# -- binary codewords and indicators -----------------------------------


def channel_codeword(c: int, n_ch: int, enc: Encoding) -> BitVector:
    """Big-endian codeword of width N_B for channel c under a binary encoding."""
    if not enc.is_binary:
        raise ValueError("codewords are defined only for binary encodings")
    if not 1 <= c <= n_ch:
        raise ValueError(f"channel {c} out of range 1..{n_ch}")
    n_b = bits_per_channel(n_ch)
    if enc is Encoding.BINARY_ASCENDING:
        value = c - 1
    else:
        value = (n_ch - c + 1) % (1 << n_b)
    return tuple((value >> (n_b - 1 - r)) & 1 for r in range(n_b))


def codeword_channel(value: int, n_ch: int, enc: Encoding) -> int:
    """Channel label a codeword integer decodes to (may fall outside 1..n_ch)."""
    n_b = bits_per_channel(n_ch)
    if enc is Encoding.BINARY_ASCENDING:
        return value + 1
    if value == 0 and n_ch == (1 << n_b):
        return 1
    return n_ch - value + 1


def codeword_indicator(ap: int, bits: Sequence[int], n_vars: int, slots: int) -> BinaryPolynomial:
    """Polynomial over AP ``ap``'s slot variables equal to 1 exactly when the
    slots spell ``bits``: factor x for a 1-bit, (1 - x) for a 0-bit."""
    poly = BinaryPolynomial.constant(1.0, n_vars)
    for r, b in enumerate(bits):
        var = ap * slots + r
        x = BinaryPolynomial.variable(var, n_vars)
        factor = x if b else BinaryPolynomial.constant(1.0, n_vars) - x
        poly = poly.multiply(factor)
    return poly


def channel_indicator(i: int, c: int, inst: CapInstance, enc: Encoding) -> BinaryPolynomial:
    """Indicator that AP i's slots spell channel c's codeword."""
    if not enc.is_binary:
        raise ValueError("channel indicators are defined only for binary encodings")
    if not 0 <= i < inst.n_ap:
        raise IndexError(f"AP index {i} out of range 0..{inst.n_ap - 1}")
    n_b = bits_per_channel(inst.n_ch)
    bits = channel_codeword(c, inst.n_ch, enc)
    return codeword_indicator(i, bits, inst.n_ap * n_b, n_b)


# -- builders -----------------------------------------------------------


def build_qubo(
    inst: CapInstance, w: float = 1.0, table: CoeffTable | None = None
) -> Formulation:
    """One-hot objective: co-channel costs plus w per-AP one-hot penalties."""
    if w <= 0:
        raise ValueError("penalty weight w must be positive")
    table = table if table is not None else coeff_table(inst)
    return _qubo_from_table(table, inst.n_ch, w)


def _qubo_from_table(table: CoeffTable, n_ch: int, w: float) -> Formulation:
    n_ap = table.n_ap
    n_vars = n_ap * n_ch
    layout = {(i, c): i * n_ch + (c - 1) for i in range(n_ap) for c in range(1, n_ch + 1)}
    terms: dict[tuple[int, ...], float] = {}

    def bump(support: tuple[int, ...], coeff: float):
        terms[support] = terms.get(support, 0.0) + coeff

    for i in range(n_ap):
        for k in range(i + 1, n_ap):
            for c in range(1, n_ch + 1):
                bump((layout[(i, c)], layout[(k, c)]), float(table.d[i, k]))
    # (sum_c x - 1)^2 = 1 - sum_c x + 2 sum_{c<l} x_c x_l  on binary variables
    bump((), w * n_ap)
    for i in range(n_ap):
        for c in range(1, n_ch + 1):
            bump((layout[(i, c)],), -w)
        for c in range(1, n_ch + 1):
            for l in range(c + 1, n_ch + 1):
                bump(tuple(sorted((layout[(i, c)], layout[(i, l)]))), 2.0 * w)

    return Formulation(
        encoding=Encoding.ONE_HOT,
        objective=BinaryPolynomial(n_vars, terms),
        penalty=w,
        n_ap=n_ap,
        n_ch=n_ch,
        var_layout=layout,
    )


def build_hubo(
    inst: CapInstance,
    enc: Encoding,
    w_prime: float = 1.0,
    table: CoeffTable | None = None,
) -> Formulation:
    """Binary-encoded objective of degree at most 2 N_B."""
    if not enc.is_binary:
        raise ValueError("build_hubo requires a binary encoding")
    if w_prime <= 0:
        raise ValueError("penalty weight must be positive")
    if inst.n_ch < 2:
        raise ValueError("binary encodings need at least 2 channels")
    table = table if table is not None else coeff_table(inst)
    return _hubo_from_table(table, inst.n_ch, enc, w_prime)


def _hubo_from_table(
    table: CoeffTable, n_ch: int, enc: Encoding, w_prime: float
) -> Formulation:
    n_ap = table.n_ap
    n_b = bits_per_channel(n_ch)
    n_vars = n_ap * n_b
    layout = {(i, r): i * n_b + (r - 1) for i in range(n_ap) for r in range(1, n_b + 1)}

    codewords = {c: channel_codeword(c, n_ch, enc) for c in range(1, n_ch + 1)}
    indicators = {
        (i, c): codeword_indicator(i, codewords[c], n_vars, n_b)
        for i in range(n_ap)
        for c in range(1, n_ch + 1)
    }

    objective = BinaryPolynomial.zero(n_vars)
    for i in range(n_ap):
        for k in range(i + 1, n_ap):
            pair = BinaryPolynomial.zero(n_vars)
            for c in range(1, n_ch + 1):
                pair = pair.add(indicators[(i, c)].multiply(indicators[(k, c)]))
            objective = objective.add(pair.scale(float(table.d[i, k])))

    # penalize codewords whose decoded channel falls outside 1..n_ch
    used = {bits_to_int(cw) for cw in codewords.values()}
    for value in range(1 << n_b):
        if value in used:
            continue
        bits = tuple((value >> (n_b - 1 - r)) & 1 for r in range(n_b))
        for i in range(n_ap):
            objective = objective.add(
                codeword_indicator(i, bits, n_vars, n_b).scale(w_prime)
            )

    return Formulation(
        encoding=enc,
        objective=objective,
        penalty=w_prime,
        n_ap=n_ap,
        n_ch=n_ch,
        var_layout=layout,
    )


def build_formulation(
    inst: CapInstance,
    kind: str,
    penalty: float = 1.0,
    table: CoeffTable | None = None,
) -> Formulation:
    """Dispatch by name: 'qubo', 'hubo-asc', or 'hubo-desc'."""
    if kind == "qubo":
        return build_qubo(inst, penalty, table)
    if kind == "hubo-asc":
        return build_hubo(inst, Encoding.BINARY_ASCENDING, penalty, table)
    if kind == "hubo-desc":
        return build_hubo(inst, Encoding.BINARY_DESCENDING, penalty, table)
    raise ValueError(f"unknown formulation kind {kind!r}")


def formulation_from_table(
    table: CoeffTable, n_ch: int, kind: str, penalty: float = 1.0
) -> Formulation:
    """Build directly from a coefficient table (used with CoeffTable.uniform
    for normalized resource analysis)."""
    if kind == "qubo":
        return _qubo_from_table(table, n_ch, penalty)
    if kind == "hubo-asc":
        return _hubo_from_table(table, n_ch, Encoding.BINARY_ASCENDING, penalty)
    if kind == "hubo-desc":
        return _hubo_from_table(table, n_ch, Encoding.BINARY_DESCENDING, penalty)
    raise ValueError(f"unknown formulation kind {kind!r}")


# -- quadratization -----------------------------------------------------


@dataclass(frozen=True)
class Quadratization:
    poly: BinaryPolynomial
    aux_map: tuple[tuple[tuple[int, int], int], ...]  # ((var_a, var_b), aux_index)


def quadratize(p: BinaryPolynomial, scale: float) -> Quadratization:
    """Reduce to degree <= 2 by repeatedly replacing a variable pair (a, b)
    with a fresh auxiliary y and adding scale * (ab - 2ay - 2by + 3y), which
    vanishes exactly when y = ab.

    The pair occurring in the most degree->=3 terms is substituted first,
    ties broken lexicographically.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    terms = dict(p.terms)
    n_vars = p.n_vars
    aux_map: list[tuple[tuple[int, int], int]] = []

    while True:
        freq: dict[tuple[int, int], int] = {}
        for support in terms:
            if len(support) < 3:
                continue
            for a_pos in range(len(support)):
                for b_pos in range(a_pos + 1, len(support)):
                    pair = (support[a_pos], support[b_pos])
                    freq[pair] = freq.get(pair, 0) + 1
        if not freq:
            break
        best = max(freq.items(), key=lambda kv: (kv[1], tuple(-i for i in kv[0])))[0]
        a, b = best
        y = n_vars
        n_vars += 1
        aux_map.append(((a, b), y))

        new_terms: dict[tuple[int, ...], float] = {}
        for support, coeff in terms.items():
            if len(support) >= 3 and a in support and b in support:
                support = tuple(sorted(set(support) - {a, b} | {y}))
            new_terms[support] = new_terms.get(support, 0.0) + coeff
        penalty = {
            (a, b): scale,
            tuple(sorted((a, y))): -2.0 * scale,
            tuple(sorted((b, y))): -2.0 * scale,
            (y,): 3.0 * scale,
        }
        for support, coeff in penalty.items():
            new_terms[support] = new_terms.get(support, 0.0) + coeff
        terms = {s: c for s, c in new_terms.items() if c != 0.0}

    return Quadratization(
        poly=BinaryPolynomial(n_vars, terms), aux_map=tuple(aux_map)
    )


def default_quadratization_scale(p: BinaryPolynomial) -> float:
    """A penalty large enough that breaking any substitution constraint costs
    more than the higher-order terms could possibly repay.

    Each corrupted auxiliary incurs at least ``scale`` while the substituted
    monomials can shift the objective by at most twice the total magnitude of
    the degree->=3 coefficients, so this bound preserves the minimum.
    """
    high = sum(abs(c) for s, c in p.terms.items() if len(s) >= 3)
    return 1.0 + 2.0 * high


# -- counting and decoding ----------------------------------------------


@dataclass(frozen=True)
class VariableCounts:
    n: int
    n_prime: int
    n_double_prime: int
    log2_search_space: float


def variable_counts(n_ap: int, n_ch: int) -> VariableCounts:
    """Binary-variable counts of the three formulations and the information
    lower bound N_AP * log2(N_CH)."""
    if n_ch < 2:
        raise ValueError("n_ch must be at least 2")
    n_b = bits_per_channel(n_ch)
    return VariableCounts(
        n=n_ap * n_ch,
        n_prime=n_ap * n_b,
        n_double_prime=n_ap * ((1 << n_b) - 1),
        log2_search_space=n_ap * math.log2(n_ch),
    )


def decode(form: Formulation, x: Sequence[int]) -> DecodeResult:
    """Map a bit vector back to a channel assignment, or report violations."""
    if len(x) != form.n_vars:
        raise ValueError(f"bit vector length {len(x)} != n_vars {form.n_vars}")
    assignment: list[int] = []
    violations: list[str] = []
    slots = form.slots_per_ap
    for i in range(form.n_ap):
        row = tuple(x[i * slots: (i + 1) * slots])
        if form.encoding is Encoding.ONE_HOT:
            ones = [c + 1 for c, bit in enumerate(row) if bit]
            if len(ones) != 1:
                violations.append(f"AP {i}: one-hot row {row} has {len(ones)} bits set")
                assignment.append(0)
            else:
                assignment.append(ones[0])
        else:
            ch = codeword_channel(bits_to_int(row), form.n_ch, form.encoding)
            if not 1 <= ch <= form.n_ch:
                violations.append(f"AP {i}: codeword {row} decodes to nonexistent channel {ch}")
                assignment.append(0)
            else:
                assignment.append(ch)
    if violations:
        return DecodeResult(assignment=None, violations=tuple(violations))
    return DecodeResult(assignment=tuple(assignment))


def encode_assignment(form: Formulation, assign: Sequence[int]) -> BitVector:
    """Bit vector representing a valid assignment under the formulation."""
    if len(assign) != form.n_ap:
        raise ValueError("assignment length mismatch")
    bits: list[int] = []
    for i, ch in enumerate(assign):
        if not 1 <= ch <= form.n_ch:
            raise ValueError(f"AP {i}: channel {ch} out of range 1..{form.n_ch}")
        if form.encoding is Encoding.ONE_HOT:
            row = [0] * form.n_ch
            row[ch - 1] = 1
            bits.extend(row)
        else:
            bits.extend(channel_codeword(ch, form.n_ch, form.encoding))
    return tuple(bits)


def dumps_formulation(form: Formulation) -> str:
    """Header line plus the polynomial dump; consumed by the CLI exports."""
    header = (
        f'# {{"encoding": "{form.encoding.value}", "n_vars": {form.n_vars}, '
        f'"penalty": {form.penalty}}}'
    )
    return header + "\n" + form.objective.dumps()
