"""Threshold-descent search with amplitude amplification.

Each iteration amplifies the states whose objective value lies strictly
below the running minimum y_i, measures one candidate, re-evaluates it
classically (which also absorbs any value-register approximation from
real-valued coefficients), and tightens the threshold on improvement.  The
rotation count L_i is drawn uniformly from {0, ..., ceil(k - 1)} where the
reach k grows by lambda = 8/7 after every non-improving iteration, capped
at sqrt(2^n).

Accounting: classical queries = objective evaluations = iterations + 1 (the
initial uniform sample); quantum queries = Grover operators applied, with an
optional convention counting 2 L_i + 1 oracle calls per iteration instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .cap import CapInstance, CoeffTable, assignment_interference
from .circuits import build_grover, build_state_prep, coefficient_width
from .poly import BinaryPolynomial, BitVector
from .simulator import IdealSampler, StateVector, apply, sample


class BudgetExceededError(RuntimeError):
    """A classical enumeration or simulation exceeded its configured cap."""


@dataclass(frozen=True)
class GasConfig:
    lambda_: float = 8.0 / 7.0
    backend: str = "ideal"  # "ideal" | "statevector"
    max_classical_iters: int | None = None
    max_quantum_queries: int | None = None
    stop_at_known_optimum: float | None = None
    no_improvement_window: int | None = None
    master_seed: int = 0
    count_oracle_calls: bool = False  # count 2L+1 oracle calls instead of L
    value_width: int | None = None    # statevector register width override

    def __post_init__(self):
        if self.lambda_ <= 1.0:
            raise ValueError("lambda must exceed 1")
        if self.backend not in ("ideal", "statevector"):
            raise ValueError(f"unknown backend {self.backend!r}")
        rules = (
            self.max_classical_iters,
            self.max_quantum_queries,
            self.stop_at_known_optimum,
            self.no_improvement_window,
        )
        if all(r is None for r in rules):
            raise ValueError("at least one termination rule must be set")


@dataclass(frozen=True)
class GasIteration:
    i: int
    y_i: float
    k_i: float
    l_i: int
    sampled_x: BitVector
    sampled_y: float
    improved: bool


@dataclass
class GasTrace:
    iterations: list[GasIteration] = field(default_factory=list)
    best_x: BitVector = ()
    best_y: float = math.inf
    classical_queries: int = 0
    quantum_queries: int = 0

    def threshold_history(self) -> list[float]:
        return [it.y_i for it in self.iterations]


def run_gas(
    p: BinaryPolynomial, cfg: GasConfig, rng: np.random.Generator | None = None
) -> GasTrace:
    """One seeded search run over the polynomial's full bit cube."""
    rng = rng if rng is not None else np.random.default_rng(cfg.master_seed)
    n = p.n_vars
    sqrt_space = math.sqrt(2.0 ** n)

    if cfg.backend == "ideal":
        sampler = IdealSampler(p)
        draw = sampler.sample
    else:
        base_m = cfg.value_width if cfg.value_width is not None else coefficient_width(p)

        def draw(y: float, l_ops: int, gen: np.random.Generator) -> BitVector:
            # the folded constant moves with the threshold; widen the value
            # register when a large y would push it out of coefficient range
            m = max(base_m, coefficient_width(p, y))
            prep = build_state_prep(p, y, m)
            state = apply(prep, StateVector.zero(prep.n_qubits))
            if l_ops:
                grover = build_grover(p, y, m)
                for _ in range(l_ops):
                    state = apply(grover, state)
            return sample(state, gen, n, m).key_bits

    trace = GasTrace()
    x = tuple(int(b) for b in rng.integers(0, 2, size=n))
    y = p.evaluate(x)
    trace.classical_queries = 1
    trace.best_x, trace.best_y = x, y

    k = 1.0
    i = 0
    since_improvement = 0
    while True:
        if cfg.max_classical_iters is not None and i >= cfg.max_classical_iters:
            break
        if cfg.stop_at_known_optimum is not None and trace.best_y <= cfg.stop_at_known_optimum + 1e-12:
            break
        if cfg.max_quantum_queries is not None and trace.quantum_queries >= cfg.max_quantum_queries:
            break
        if cfg.no_improvement_window is not None and since_improvement >= cfg.no_improvement_window:
            break

        l_i = int(rng.integers(0, math.ceil(k - 1.0) + 1))
        x_new = draw(trace.best_y, l_i, rng)
        y_new = p.evaluate(x_new)
        improved = y_new < trace.best_y
        trace.iterations.append(
            GasIteration(
                i=i, y_i=trace.best_y, k_i=k, l_i=l_i,
                sampled_x=x_new, sampled_y=y_new, improved=improved,
            )
        )
        trace.classical_queries += 1
        trace.quantum_queries += (2 * l_i + 1) if cfg.count_oracle_calls else l_i
        if improved:
            trace.best_x, trace.best_y = x_new, y_new
            k = 1.0
            since_improvement = 0
        else:
            k = min(cfg.lambda_ * k, sqrt_space)
            since_improvement += 1
        i += 1

    return trace


def run_seed(run_index: int, master_seed: int) -> np.random.Generator:
    """Stream split rule: one independent generator per (master seed, run)."""
    return np.random.default_rng([master_seed, run_index])


def run_batch(
    p: BinaryPolynomial, cfg: GasConfig, n_runs: int
) -> list[GasTrace]:
    """Independent seeded runs; run i uses the stream (master_seed, i), so
    different formulations executed with the same config are seed-paired."""
    return [run_gas(p, cfg, rng=run_seed(i, cfg.master_seed)) for i in range(n_runs)]


# -- classical references -------------------------------------------------


@dataclass(frozen=True)
class BruteForceResult:
    best_assignment: tuple[int, ...]
    best_value: float
    evaluations: int

    def co_channel_partition(self) -> frozenset[frozenset[int]]:
        groups: dict[int, set[int]] = {}
        for ap, ch in enumerate(self.best_assignment):
            groups.setdefault(ch, set()).add(ap)
        return frozenset(frozenset(g) for g in groups.values())


def brute_force_cap(
    inst: CapInstance, table: CoeffTable, budget: int = 10_000_000
) -> BruteForceResult:
    """Exhaustive scan of all N_CH^N_AP assignments (lexicographic order,
    first minimum kept)."""
    space = inst.n_ch ** inst.n_ap
    if space > budget:
        raise BudgetExceededError(
            f"search space {space} exceeds the enumeration budget {budget}"
        )
    best_assign: tuple[int, ...] | None = None
    best_value = math.inf
    assign = [1] * inst.n_ap
    for _ in range(space):
        value = assignment_interference(inst, table, assign)
        if value < best_value:
            best_value = value
            best_assign = tuple(assign)
        # odometer increment, last AP fastest: lexicographic enumeration
        for pos in range(inst.n_ap - 1, -1, -1):
            if assign[pos] < inst.n_ch:
                assign[pos] += 1
                break
            assign[pos] = 1
    return BruteForceResult(
        best_assignment=best_assign, best_value=best_value, evaluations=space
    )


@dataclass(frozen=True)
class QueryEstimate:
    grover: float
    exhaustive: float


def expected_queries(n_vars: int) -> QueryEstimate:
    """Reference scaling curves: sqrt(2^n) amplified versus 2^n exhaustive."""
    return QueryEstimate(grover=2.0 ** (n_vars / 2.0), exhaustive=2.0 ** n_vars)


def log2_expected_queries(n_vars: int) -> QueryEstimate:
    """Same curves in log2, usable far beyond float range."""
    return QueryEstimate(grover=n_vars / 2.0, exhaustive=float(n_vars))
