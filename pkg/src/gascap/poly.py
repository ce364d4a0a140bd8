"""Multilinear pseudo-Boolean polynomials.

A polynomial over binary variables x_0, ..., x_{n-1} is stored as a map from
monomial supports (sorted tuples of variable indices, () for the constant
term) to nonzero real coefficients.  Because x^2 = x for x in {0, 1}, every
product reduces to this multilinear canonical form, and two polynomials are
equal as functions iff their term maps are equal.

Variable index 0 is the most significant position of a bit vector: the
integer enumeration order of assignments coincides with lexicographic order
on (x_0, x_1, ..., x_{n-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

BitVector = tuple[int, ...]

DEFAULT_EXHAUSTIVE_CAP = 24


def _canonical_terms(terms: Mapping[Sequence[int], float]) -> dict[tuple[int, ...], float]:
    out: dict[tuple[int, ...], float] = {}
    for support, coeff in terms.items():
        key = tuple(sorted(set(support)))
        if len(key) != len(tuple(support)):
            raise ValueError(f"duplicate variable in monomial support {support!r}")
        c = out.get(key, 0.0) + float(coeff)
        if c == 0.0:
            out.pop(key, None)
        else:
            out[key] = c
    return out


def term_order_key(support: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Graded lexicographic order: by degree, then by support."""
    return (len(support), support)


class BinaryPolynomial:
    """Immutable multilinear polynomial in canonical form."""

    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars: int, terms: Mapping[Sequence[int], float] | None = None):
        if n_vars < 0:
            raise ValueError("n_vars must be nonnegative")
        canon = _canonical_terms(terms or {})
        for support in canon:
            if support and support[-1] >= n_vars:
                raise ValueError(f"variable index {support[-1]} out of range for n_vars={n_vars}")
        object.__setattr__(self, "n_vars", n_vars)
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, *_):
        raise AttributeError("BinaryPolynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n_vars: int = 0) -> "BinaryPolynomial":
        return cls(n_vars, {})

    @classmethod
    def constant(cls, value: float, n_vars: int = 0) -> "BinaryPolynomial":
        return cls(n_vars, {(): value})

    @classmethod
    def variable(cls, index: int, n_vars: int) -> "BinaryPolynomial":
        return cls(n_vars, {(index,): 1.0})

    # -- basic queries ------------------------------------------------

    @property
    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(len(s) for s in self.terms)

    @property
    def constant_term(self) -> float:
        return self.terms.get((), 0.0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], float]]:
        return sorted(self.terms.items(), key=lambda kv: term_order_key(kv[0]))

    def coefficient(self, support: Iterable[int]) -> float:
        return self.terms.get(tuple(sorted(set(support))), 0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryPolynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_vars, frozenset(self.terms.items())))

    def __repr__(self):
        parts = [f"{c:+g}*x{list(s)}" if s else f"{c:+g}" for s, c in self.sorted_terms()]
        body = " ".join(parts) if parts else "0"
        return f"BinaryPolynomial(n_vars={self.n_vars}, {body})"

    # -- algebra ------------------------------------------------------

    def add(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        n = max(self.n_vars, other.n_vars)
        terms = dict(self.terms)
        for s, c in other.terms.items():
            terms[s] = terms.get(s, 0.0) + c
        return BinaryPolynomial(n, terms)

    def scale(self, factor: float) -> "BinaryPolynomial":
        return BinaryPolynomial(self.n_vars, {s: c * factor for s, c in self.terms.items()})

    def multiply(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        n = max(self.n_vars, other.n_vars)
        terms: dict[tuple[int, ...], float] = {}
        for s1, c1 in self.terms.items():
            set1 = set(s1)
            for s2, c2 in other.terms.items():
                key = tuple(sorted(set1.union(s2)))
                terms[key] = terms.get(key, 0.0) + c1 * c2
        return BinaryPolynomial(n, terms)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = BinaryPolynomial.constant(float(other), self.n_vars)
        return self.add(other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = BinaryPolynomial.constant(float(other), self.n_vars)
        return self.add(other.scale(-1.0))

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        return self.multiply(other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1.0)

    def shift(self, offset: float) -> "BinaryPolynomial":
        """Add a constant offset (used to fold a threshold into the objective)."""
        return self + offset

    # -- evaluation ---------------------------------------------------

    def evaluate(self, x: Sequence[int]) -> float:
        if len(x) != self.n_vars:
            raise ValueError(f"bit vector length {len(x)} != n_vars {self.n_vars}")
        total = 0.0
        for support, coeff in self.terms.items():
            for idx in support:
                if not x[idx]:
                    break
            else:
                total += coeff
        return total

    def evaluate_all(self) -> np.ndarray:
        """Values on all 2^n assignments, indexed with x_0 as the most
        significant bit so that array order equals lexicographic order."""
        n = self.n_vars
        if n > DEFAULT_EXHAUSTIVE_CAP:
            raise ValueError(f"n_vars={n} above exhaustive cap {DEFAULT_EXHAUSTIVE_CAP}")
        size = 1 << n
        idx = np.arange(size, dtype=np.uint64)
        values = np.zeros(size, dtype=np.float64)
        for support, coeff in self.terms.items():
            if not support:
                values += coeff
                continue
            sel = np.ones(size, dtype=bool)
            for j in support:
                sel &= ((idx >> np.uint64(n - 1 - j)) & np.uint64(1)).astype(bool)
            values[sel] += coeff
        return values

    # -- analysis -----------------------------------------------------

    def stats(self) -> "PolyStats":
        coeffs = list(self.terms.values())
        # interval arithmetic: each monomial contributes 0 or its coefficient,
        # except the constant term which always contributes
        const = self.constant_term
        lo = const + sum(min(0.0, c) for s, c in self.terms.items() if s)
        hi = const + sum(max(0.0, c) for s, c in self.terms.items() if s)
        return PolyStats(
            degree=self.degree,
            term_count=len(self.terms),
            max_abs_coeff=max((abs(c) for c in coeffs), default=0.0),
            min_value_bound=lo,
            max_value_bound=hi,
            all_integer=all(float(c).is_integer() for c in coeffs),
        )

    def exhaustive_min(self, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> tuple[BitVector, float]:
        """Global minimizer and value by full enumeration.

        Ties break to the lexicographically smallest bit vector.
        """
        if self.n_vars > cap:
            raise ValueError(f"n_vars={self.n_vars} above exhaustive cap {cap}")
        values = self.evaluate_all()
        best = int(np.argmin(values))  # argmin returns the first = lex smallest
        return int_to_bits(best, self.n_vars), float(values[best])

    def exhaustive_max(self, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> tuple[BitVector, float]:
        if self.n_vars > cap:
            raise ValueError(f"n_vars={self.n_vars} above exhaustive cap {cap}")
        values = self.evaluate_all()
        best = int(np.argmax(values))
        return int_to_bits(best, self.n_vars), float(values[best])

    # -- text format ---------------------------------------------------

    def dumps(self) -> str:
        """One term per line, ``coeff : i1 i2 ...``, canonical order."""
        lines = []
        for support, coeff in self.sorted_terms():
            idxs = " ".join(str(i) for i in support)
            lines.append(f"{coeff!r} : {idxs}".rstrip())
        return "\n".join(lines)


@dataclass(frozen=True)
class PolyStats:
    degree: int
    term_count: int
    max_abs_coeff: float
    min_value_bound: float
    max_value_bound: float
    all_integer: bool


def loads_poly(text: str, n_vars: int) -> BinaryPolynomial:
    """Parse the ``coeff : i1 i2 ...`` dump format."""
    terms: dict[tuple[int, ...], float] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        coeff_str, _, idx_str = line.partition(":")
        support = tuple(int(t) for t in idx_str.split())
        terms[support] = terms.get(support, 0.0) + float(coeff_str)
    return BinaryPolynomial(n_vars, terms)


def int_to_bits(value: int, width: int) -> BitVector:
    """Big-endian bits of ``value``: element 0 is the most significant."""
    return tuple((value >> (width - 1 - j)) & 1 for j in range(width))


def bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | (1 if b else 0)
    return value
