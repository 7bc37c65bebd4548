"""Declarative descriptions and evaluators of the supported Bell and
network functionals, plus their closed-form classical and quantum bounds.

Seven kinds are supported. ``chsh``, ``chained`` and ``gm`` are bipartite
(one edge party, n = 1, linear combiner). ``bilocal``, ``star``, ``delta``
and ``xi`` are star-network functionals over n independent sources whose
value combines the term correlators as sum_i |I_i|^(1/n).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidScenario,
    MissingObservable,
    OutOfRange,
)
from .qcore import as_matrix, expectation, tensor_all
from .states import Observable, QuantumState


class Kind(str, enum.Enum):
    CHSH = "chsh"
    CHAINED = "chained"
    GM = "gm"
    BILOCAL = "bilocal"
    STAR = "star"
    DELTA = "delta"
    XI = "xi"


BIPARTITE_KINDS = (Kind.CHSH, Kind.CHAINED, Kind.GM)
NETWORK_KINDS = (Kind.BILOCAL, Kind.STAR, Kind.DELTA, Kind.XI)

LINEAR = "linear"
ROOT_SUM = "root_sum"


@dataclass(frozen=True)
class SignTable:
    """Sign rows (-1)^(bit) for the 2^(m-1) length-m bit strings whose
    first bit is zero; row i corresponds to the integer i-1 spelled out
    on bits 2..m, most significant first."""

    m: int
    rows: tuple[tuple[int, ...], ...]


def build_sign_table(m: int) -> SignTable:
    """Deterministic sign table for m settings; rows ordered by binary value."""
    if not 2 <= m <= 16:
        raise OutOfRange(f"m must be in 2..16, got {m}")
    rows = []
    for i in range(2 ** (m - 1)):
        bits = [(i >> (m - 2 - j)) & 1 for j in range(m - 1)]
        rows.append(tuple([1] + [1 - 2 * b for b in bits]))
    return SignTable(m=m, rows=tuple(rows))


@dataclass(frozen=True)
class TermSpec:
    """One correlator term: signed observable subsets per edge party and
    the central-party input it multiplies."""

    signs: tuple[tuple[int, ...], ...]
    central_input: int


@dataclass(frozen=True)
class Functional:
    """Term table plus combiner describing one Bell/network inequality."""

    kind: Kind
    m: int
    n: int
    combiner: str
    terms: tuple[TermSpec, ...]

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def n_central_inputs(self) -> int:
        return max(t.central_input for t in self.terms) + 1

    def coefficient_matrix(self, party: int) -> np.ndarray:
        """Term-by-setting sign coefficients for one edge party."""
        return np.array([t.signs[party] for t in self.terms], dtype=float)


@dataclass(frozen=True)
class CorrelatorSet:
    """One real correlator value per term."""

    values: tuple[float, ...]


@dataclass(frozen=True)
class ObservableAssignment:
    """Full measurement assignment: m observables per edge party and one
    central observable per central input."""

    edge: tuple[tuple[Observable, ...], ...]
    central: tuple[Observable, ...]


def _chained_signs(m: int) -> list[tuple[int, ...]]:
    # Cyclic pairs (A_i + A_{i+1}) with the wrap term (A_m - A_1).
    rows = []
    for i in range(m - 1):
        row = [0] * m
        row[i] = 1
        row[i + 1] = 1
        rows.append(tuple(row))
    wrap = [0] * m
    wrap[m - 1] = 1
    wrap[0] = -1
    rows.append(tuple(wrap))
    return rows


def build_functional(kind: Kind | str, m: int, n: int = 1) -> Functional:
    """Fully populated term table for a (kind, m, n) scenario; idempotent."""
    kind = Kind(kind)
    if kind in BIPARTITE_KINDS and n != 1:
        raise InvalidScenario(f"{kind.value} is bipartite; n must be 1, got {n}")
    if kind is Kind.BILOCAL and n != 2:
        raise InvalidScenario(f"bilocal means two sources, got n={n}")
    if kind in NETWORK_KINDS and n < 1:
        raise InvalidScenario(f"need at least one source, got n={n}")
    if kind in (Kind.CHSH, Kind.BILOCAL, Kind.STAR) and m != 2:
        raise InvalidScenario(f"{kind.value} has two settings per edge party, got m={m}")
    if m < 2:
        raise InvalidScenario(f"m must be at least 2, got {m}")

    if kind in (Kind.CHSH, Kind.BILOCAL, Kind.STAR, Kind.GM, Kind.DELTA):
        rows = build_sign_table(m).rows
    else:
        rows = _chained_signs(m)

    parties = 1 if kind in BIPARTITE_KINDS else n
    terms = tuple(
        TermSpec(signs=tuple([row] * parties), central_input=i)
        for i, row in enumerate(rows)
    )
    combiner = LINEAR if kind in BIPARTITE_KINDS else ROOT_SUM
    return Functional(kind=kind, m=m, n=n, combiner=combiner, terms=terms)


def combine(f: Functional, correlators: Sequence[float]) -> float:
    """Apply the functional's combiner to term correlators."""
    if f.combiner == LINEAR:
        return float(sum(correlators))
    return float(sum(abs(v) ** (1.0 / f.n) for v in correlators))


def eval_correlator(
    state: QuantumState,
    edge_ops: Sequence[np.ndarray],
    central_obs: Observable | np.ndarray,
) -> float:
    """Expectation of the tensor-ordered product of per-party signed
    observable combinations and the central observable."""
    central = central_obs.matrix if isinstance(central_obs, Observable) else as_matrix(central_obs)
    ops = [as_matrix(op) for op in edge_ops] + [central]
    dims = [op.shape[0] for op in ops]
    if tuple(dims) != tuple(state.subsystem_dims):
        raise DimensionMismatch(
            f"operator dims {tuple(dims)} do not match state slots {state.subsystem_dims}"
        )
    return expectation(state, tensor_all(ops))


def eval_functional(
    f: Functional,
    state: QuantumState,
    observables: ObservableAssignment,
) -> tuple[float, CorrelatorSet]:
    """Functional value and per-term correlators for a full assignment."""
    parties = 1 if f.kind in BIPARTITE_KINDS else f.n
    if len(observables.edge) != parties:
        raise MissingObservable(
            f"need observables for {parties} edge parties, got {len(observables.edge)}"
        )
    for k, obs in enumerate(observables.edge):
        if len(obs) != f.m:
            raise MissingObservable(
                f"edge party {k} needs {f.m} observables, got {len(obs)}"
            )
    if len(observables.central) < f.n_central_inputs:
        raise MissingObservable(
            f"need {f.n_central_inputs} central observables, got {len(observables.central)}"
        )
    if len(state.subsystem_dims) != parties + 1:
        raise DimensionMismatch(
            f"state must have {parties + 1} slots, got {len(state.subsystem_dims)}"
        )

    values = []
    for term in f.terms:
        edge_ops = []
        for k in range(parties):
            combo = sum(
                c * observables.edge[k][x].matrix
                for x, c in enumerate(term.signs[k])
                if c != 0
            )
            if isinstance(combo, int):  # all-zero coefficients
                combo = np.zeros((state.subsystem_dims[k],) * 2, dtype=complex)
            edge_ops.append(combo)
        values.append(
            eval_correlator(state, edge_ops, observables.central[term.central_input])
        )
    correlators = CorrelatorSet(values=tuple(values))
    return combine(f, values), correlators


def sign_family_classical_bound(m: int) -> int:
    """Classical bound of the sign-table families: m * C(m-1, floor((m-1)/2)).

    Equals sum_{j=0}^{floor(m/2)} C(m, j) (m - 2j) and is confirmed by
    exhaustive enumeration over deterministic strategies.
    """
    return m * math.comb(m - 1, (m - 1) // 2)


def classical_bound(f: Functional) -> float:
    """Largest value attainable by (n-)local deterministic models."""
    if f.kind in (Kind.CHSH, Kind.BILOCAL, Kind.STAR):
        return 2.0
    if f.kind in (Kind.CHAINED, Kind.XI):
        return float(2 * f.m - 2)
    return float(sign_family_classical_bound(f.m))


def quantum_bound(f: Functional) -> float:
    """Optimal quantum value (independent of n for the network kinds)."""
    if f.kind in (Kind.CHSH, Kind.BILOCAL, Kind.STAR):
        return 2.0 * math.sqrt(2.0)
    if f.kind in (Kind.CHAINED, Kind.XI):
        return 2.0 * f.m * math.cos(math.pi / (2 * f.m))
    return float(2 ** (f.m - 1) * math.sqrt(f.m))
