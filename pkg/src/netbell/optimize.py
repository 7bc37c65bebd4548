"""Quantum-side optimization.

Two routes to the optimal quantum value of a functional:

* ``seesaw_optimize`` works with explicit finite-dimensional observables
  and a state, alternating exact block updates. Nonlinear (root-sum)
  combiners are handled by per-sweep linearization with gradient weights;
  central-party observables are updated exactly (each term owns its
  central input), which keeps the true objective moving even where the
  linearization is flat.

* ``vector_model_optimize`` maximizes the dimension-free closed form in
  which each per-party norm is the Euclidean norm of a signed sum of unit
  vectors. Any unit-vector configuration is realizable by observables
  built on an anticommuting operator basis, so at ambient dimension m the
  model attains the quantum bound exactly.

``optimal_assignment`` builds the closed-form optimizer (anticommuting or
planar observables, transposed partner observables, maximally entangled
sources) that saturates the quantum bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse.linalg

from . import tolerances as tol
from .errors import DimensionGuard, DimensionMismatch, NonHermitianInput
from .functionals import (
    BIPARTITE_KINDS,
    LINEAR,
    Functional,
    Kind,
    ObservableAssignment,
    combine,
)
from .qcore import as_matrix, is_hermitian, tensor_all
from .states import (
    SIGMA_X,
    SIGMA_Z,
    Observable,
    QuantumState,
    anticommuting_set,
    maximally_entangled,
    network_product_state,
)

TOTAL_DIMENSION_GUARD = 2**12
_DENSE_EIG_LIMIT = 512
_WEIGHT_CLAMP = 1e-9
_MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class SeesawConfig:
    """Knobs for the alternating optimization.

    ``edge_dim`` is each edge party's local dimension; ``central_slot_dim``
    is the dimension of each of the central party's n slots (defaults to
    ``edge_dim``). ``tol`` is the relative value change that counts as
    converged.
    """

    edge_dim: int = 2
    central_slot_dim: int | None = None
    max_iters: int = 400
    tol: float = 1e-12
    restarts: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.edge_dim < 2:
            raise ValueError("edge_dim must be at least 2")
        if self.central_slot_dim is not None and self.central_slot_dim < 2:
            raise ValueError("central_slot_dim must be at least 2")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass(frozen=True)
class OptimizationResult:
    value: float
    state: QuantumState
    observables: ObservableAssignment
    iterations: int
    converged: bool
    history: tuple[float, ...]


@dataclass(frozen=True)
class VectorModel:
    """Per edge party, m real unit vectors in a shared ambient space."""

    vectors: np.ndarray  # (parties, m, ambient)


def best_response_observable(steering: np.ndarray) -> Observable:
    """Observable maximizing Tr(A H) over Hermitian involutions A.

    The maximizer is the eigenvalue-wise sign of H, with zero eigenvalues
    mapped to +1.
    """
    arr = as_matrix(steering)
    if not is_hermitian(arr, tol.HERMITIAN_INPUT):
        raise NonHermitianInput("steering matrix is not Hermitian")
    return Observable(_sign_eig(arr))


def _sign_eig(h: np.ndarray) -> np.ndarray:
    h = (h + h.conj().T) / 2
    vals, vecs = np.linalg.eigh(h)
    signs = np.where(vals < 0, -1.0, 1.0)
    return (vecs * signs) @ vecs.conj().T


def _apply_slot_ops(psi_t: np.ndarray, ops: Sequence[np.ndarray | None]) -> np.ndarray:
    out = psi_t
    for axis, op in enumerate(ops):
        if op is None:
            continue
        out = np.moveaxis(np.tensordot(op, out, axes=([1], [axis])), 0, axis)
    return out


class _Workspace:
    """Shared geometry for one seesaw run: slot dims, coefficient tables,
    and pure/density contraction helpers."""

    def __init__(self, f: Functional, dims: tuple[int, ...]):
        self.f = f
        self.dims = dims
        self.parties = len(dims) - 1
        self.coeffs = [f.coefficient_matrix(k) for k in range(self.parties)]
        self.groups: dict[int, list[int]] = {}
        for i, term in enumerate(f.terms):
            self.groups.setdefault(term.central_input, []).append(i)

    def edge_sums(self, edge: list[list[np.ndarray]]) -> list[list[np.ndarray]]:
        """Signed observable sums, one per (term, party)."""
        out = []
        for i in range(self.f.n_terms):
            row = []
            for k in range(self.parties):
                c = self.coeffs[k][i]
                row.append(sum(c[x] * edge[k][x] for x in range(self.f.m) if c[x]))
            out.append(row)
        return out

    def term_ops(self, sums: list[list[np.ndarray]], central, i: int):
        return [self._materialize(sums[i][k], k) for k in range(self.parties)] + [
            central[self.f.terms[i].central_input]
        ]

    def _materialize(self, op, slot: int) -> np.ndarray:
        if isinstance(op, np.ndarray):
            return op
        return np.zeros((self.dims[slot], self.dims[slot]), dtype=complex)


def _correlators_pure(ws: _Workspace, psi_t, sums, central) -> list[float]:
    flat = psi_t.reshape(-1)
    out = []
    for i in range(ws.f.n_terms):
        ops = ws.term_ops(sums, central, i)
        out.append(float(np.vdot(flat, _apply_slot_ops(psi_t, ops).reshape(-1)).real))
    return out


def _correlators_density(ws: _Workspace, rho, sums, central) -> list[float]:
    out = []
    for i in range(ws.f.n_terms):
        full = tensor_all(ws.term_ops(sums, central, i))
        out.append(float(np.einsum("ij,ji->", rho, full).real))
    return out


def _steering_pure(psi_t, slot: int, ops) -> np.ndarray:
    phi = _apply_slot_ops(psi_t, ops)
    d = psi_t.shape[slot]
    psi_m = np.moveaxis(psi_t, slot, 0).reshape(d, -1)
    phi_m = np.moveaxis(phi, slot, 0).reshape(d, -1)
    return (np.conj(psi_m) @ phi_m.T).T


def _steering_density(rho, dims, slot: int, ops) -> np.ndarray:
    k = len(dims)
    others = [j for j in range(k) if j != slot]
    rho_t = rho.reshape(dims + dims)
    perm = [slot] + others + [slot + k] + [o + k for o in others]
    d = dims[slot]
    rest = int(np.prod([dims[o] for o in others]))
    rho_p = rho_t.transpose(perm).reshape(d, rest, d, rest)
    o_rest = tensor_all(
        [np.eye(dims[o]) if ops[o] is None else ops[o] for o in others]
    )
    return np.einsum("arbs,sr->ab", rho_p, o_rest)


def _weights(f: Functional, correlators: Sequence[float]) -> np.ndarray:
    if f.combiner == LINEAR:
        return np.ones(len(correlators))
    out = np.zeros(len(correlators))
    for i, v in enumerate(correlators):
        if abs(v) >= _WEIGHT_CLAMP:
            out[i] = abs(v) ** (1.0 / f.n - 1.0) * np.sign(v) / f.n
    return out


def _top_eigvec(ws: _Workspace, sums, central, w, psi0: np.ndarray) -> np.ndarray:
    total = int(np.prod(ws.dims))
    ops_per_term = [
        ws.term_ops(sums, central, i) for i in range(ws.f.n_terms)
    ]
    if total <= _DENSE_EIG_LIMIT:
        g = np.zeros((total, total), dtype=complex)
        for wi, ops in zip(w, ops_per_term):
            if wi:
                g += wi * tensor_all(ops)
        vec = np.linalg.eigh(g)[1][:, -1]
    else:

        def matvec(v):
            t = v.reshape(ws.dims)
            acc = np.zeros_like(t)
            for wi, ops in zip(w, ops_per_term):
                if wi:
                    acc += wi * _apply_slot_ops(t, ops)
            return acc.reshape(-1)

        op = scipy.sparse.linalg.LinearOperator(
            (total, total), matvec=matvec, dtype=complex
        )
        _, vecs = scipy.sparse.linalg.eigsh(op, k=1, which="LA", v0=psi0)
        vec = vecs[:, 0]
    pivot = int(np.argmax(np.abs(vec)))
    vec = vec * (np.conj(vec[pivot]) / abs(vec[pivot]))
    return vec / np.linalg.norm(vec)


def _random_involution(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-rotated involution with a balanced spectrum. Definite (+-I)
    starts are avoided: they annihilate every signed observable sum."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    signs = np.array([1.0 if i % 2 == 0 else -1.0 for i in range(dim)])
    return (q * signs) @ q.conj().T


def _seesaw_single(
    f: Functional,
    ws: _Workspace,
    rng: np.random.Generator,
    cfg: SeesawConfig,
    fixed: QuantumState | None,
):
    dims = ws.dims
    central_dim = dims[-1]
    edge = [
        [_random_involution(dims[k], rng) for _ in range(f.m)]
        for k in range(ws.parties)
    ]
    central = [_random_involution(central_dim, rng) for _ in range(f.n_central_inputs)]

    if fixed is None:
        psi = rng.standard_normal(int(np.prod(dims))) + 1j * rng.standard_normal(
            int(np.prod(dims))
        )
        psi /= np.linalg.norm(psi)
        pure, rho = True, None
    elif fixed.kind == "pure":
        psi, pure, rho = np.array(fixed.data), True, None
    else:
        psi, pure, rho = None, False, np.array(fixed.data)

    def correlators(sums):
        if pure:
            return _correlators_pure(ws, psi.reshape(dims), sums, central)
        return _correlators_density(ws, rho, sums, central)

    def steering(slot, ops):
        if pure:
            return _steering_pure(psi.reshape(dims), slot, ops)
        return _steering_density(rho, dims, slot, ops)

    sums = ws.edge_sums(edge)
    corr = correlators(sums)
    value = combine(f, corr)
    history = [value]
    converged = False

    def refresh():
        nonlocal corr, value
        corr = correlators(sums)
        value = combine(f, corr)

    def state_step(w):
        # Top eigenvector of the linearized Bell operator, damped by a
        # line search on the true objective: root-sum combiners are
        # concave in the correlators, so the full jump can overshoot.
        nonlocal psi
        target = _top_eigvec(ws, sums, central, w, psi)
        held = psi
        for eta in (1.0, 0.6, 0.35, 0.2, 0.1, 0.05, 0.02):
            cand = (1.0 - eta) * held + eta * target
            norm = np.linalg.norm(cand)
            if norm < 1e-12:
                continue
            psi = cand / norm
            corr_new = correlators(sums)
            if combine(f, corr_new) > value:
                refresh()
                return
        psi = held

    def edge_step(w, k):
        nonlocal sums
        term_steer = []
        for i in range(f.n_terms):
            ops = ws.term_ops(sums, central, i)
            ops[k] = None
            term_steer.append(steering(k, ops))
        held = edge[k][:]
        held_sums = sums
        for x in range(f.m):
            h = sum(
                w[i] * ws.coeffs[k][i][x] * term_steer[i]
                for i in range(f.n_terms)
                if w[i] and ws.coeffs[k][i][x]
            )
            if isinstance(h, np.ndarray):
                edge[k][x] = _sign_eig(h)
        sums = ws.edge_sums(edge)
        corr_new = correlators(sums)
        if combine(f, corr_new) >= value:
            refresh()
        else:
            edge[k] = held
            sums = held_sums

    def central_step(w):
        # Each term owns its central input in every built-in kind, so this
        # update maximizes I_i (hence |I_i|) exactly and never decreases
        # the objective. Shared inputs fall back to linearized steering.
        for j, group in ws.groups.items():
            if f.combiner == LINEAR or len(group) == 1:
                h = sum(_central_steer(ws, steering, sums, i) for i in group)
            else:
                h = sum(w[i] * _central_steer(ws, steering, sums, i) for i in group)
            if isinstance(h, np.ndarray):
                central[j] = _sign_eig(h)
        refresh()

    for _ in range(cfg.max_iters):
        before = value
        w = _weights(f, corr)
        if not np.any(w):
            w = np.where(np.asarray(corr) < 0, -1.0, 1.0)
        if fixed is None:
            state_step(w)
        for k in range(ws.parties):
            edge_step(w, k)
        central_step(w)

        history.append(value)
        if value - before <= cfg.tol * max(1.0, abs(value)):
            converged = True
            break

    return value, psi, rho, edge, central, history, converged


def _central_steer(ws: _Workspace, steering, sums, i: int) -> np.ndarray:
    ops = [ws._materialize(sums[i][k], k) for k in range(ws.parties)] + [None]
    return steering(ws.parties, ops)


def seesaw_optimize(
    f: Functional,
    cfg: SeesawConfig | None = None,
    fixed_state: QuantumState | None = None,
) -> OptimizationResult:
    """Best-of-restarts alternating optimization of a functional.

    With ``fixed_state`` the state is held fixed (pure or density) and only
    the observables are optimized; otherwise the state is updated each
    sweep to the top eigenvector of the linearized Bell operator. The
    returned history is monotonically nondecreasing; a restart that fails
    to make progress is reported with ``converged=False``.
    """
    cfg = cfg or SeesawConfig()
    parties = 1 if f.kind in BIPARTITE_KINDS else f.n
    if fixed_state is not None:
        dims = tuple(fixed_state.subsystem_dims)
        if len(dims) != parties + 1:
            raise DimensionMismatch(
                f"fixed state must have {parties + 1} slots, got {len(dims)}"
            )
    else:
        slot = cfg.central_slot_dim or cfg.edge_dim
        dims = (cfg.edge_dim,) * parties + (slot**parties,)
    total = int(np.prod(dims))
    if total > TOTAL_DIMENSION_GUARD:
        raise DimensionGuard(
            f"total dimension {total} exceeds guard {TOTAL_DIMENSION_GUARD}"
        )

    ws = _Workspace(f, dims)
    best = None
    for child in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts):
        rng = np.random.default_rng(child)
        value, psi, rho, edge, central, history, converged = _seesaw_single(
            f, ws, rng, cfg, fixed_state
        )
        if best is None or value > best[0]:
            best = (value, psi, rho, edge, central, history, converged)

    value, psi, rho, edge, central, history, converged = best
    if fixed_state is not None:
        state = fixed_state
    else:
        state = QuantumState.pure(psi, dims)
    observables = ObservableAssignment(
        edge=tuple(tuple(Observable(a) for a in row) for row in edge),
        central=tuple(Observable(b) for b in central),
    )
    return OptimizationResult(
        value=float(value),
        state=state,
        observables=observables,
        iterations=len(history) - 1,
        converged=converged,
        history=tuple(float(v) for v in history),
    )


def vector_model_value(f: Functional, vectors: np.ndarray) -> float:
    """Closed-form value of a unit-vector configuration: each per-party
    norm is ||sum_x c_x v_x|| and the combiner is applied to their
    per-term products."""
    parties = 1 if f.kind in BIPARTITE_KINDS else f.n
    omegas = np.empty((parties, f.n_terms))
    for k in range(parties):
        w = f.coefficient_matrix(k) @ vectors[k]
        omegas[k] = np.linalg.norm(w, axis=1)
    return float(np.sum(np.prod(omegas, axis=0) ** (1.0 / f.n)))


def _vector_gradient(f: Functional, vectors: np.ndarray) -> np.ndarray:
    parties, _, _ = vectors.shape
    sums = [f.coefficient_matrix(k) @ vectors[k] for k in range(parties)]
    omegas = np.array([np.linalg.norm(w, axis=1) for w in sums])
    safe = np.where(omegas < 1e-12, 1.0, omegas)
    terms = np.prod(np.where(omegas < 1e-12, 0.0, omegas), axis=0) ** (1.0 / f.n)
    grad = np.zeros_like(vectors)
    for k in range(parties):
        coef = np.where(omegas[k] < 1e-12, 0.0, terms / (f.n * safe[k]))
        units = sums[k] / safe[k][:, None]
        grad[k] = f.coefficient_matrix(k).T @ (coef[:, None] * units)
    return grad


def _normalize_rows(vectors: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=2, keepdims=True)
    return vectors / np.where(norms < 1e-300, 1.0, norms)


def _ascend(f: Functional, v0: np.ndarray, max_iters: int) -> tuple[float, np.ndarray]:
    v = v0
    value = vector_model_value(f, v)
    step = 0.5
    for _ in range(max_iters):
        grad = _vector_gradient(f, v)
        improved = False
        for _ in range(60):
            cand = _normalize_rows(v + step * grad)
            cand_value = vector_model_value(f, cand)
            if cand_value > value:
                v, value = cand, cand_value
                step = min(step * 1.3, 1e6)
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    # Conditional-gradient polish: moving each vector to its normalized
    # gradient is monotone for the linear kinds and sharpens the optimum.
    for _ in range(500):
        cand = _normalize_rows(_vector_gradient(f, v))
        cand_value = vector_model_value(f, cand)
        if cand_value > value:
            v, value = cand, cand_value
        else:
            break
    return value, v


def vector_model_optimize(
    f: Functional,
    ambient: int,
    seed: int = 0,
    restarts: int = 12,
    max_iters: int = 3000,
) -> tuple[float, VectorModel]:
    """Maximize the vector-model closed form over unit vectors in the given
    ambient dimension by projected gradient ascent with restarts."""
    if ambient < 1:
        raise ValueError("ambient dimension must be at least 1")
    parties = 1 if f.kind in BIPARTITE_KINDS else f.n
    best_value, best_v = -np.inf, None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        v0 = _normalize_rows(rng.standard_normal((parties, f.m, ambient)))
        value, v = _ascend(f, v0, max_iters)
        if value > best_value:
            best_value, best_v = value, v
    return best_value, VectorModel(vectors=best_v)


def _planar_edge_observables(m: int) -> list[Observable]:
    """m qubit observables fanned at angle pi/m steps in the x-z plane."""
    out = []
    for i in range(m):
        phi = i * math.pi / m
        out.append(Observable(math.cos(phi) * SIGMA_Z + math.sin(phi) * SIGMA_X))
    return out


def optimal_assignment(f: Functional) -> tuple[QuantumState, ObservableAssignment]:
    """Closed-form optimal realization saturating ``quantum_bound(f)``.

    Sign-table kinds use a mutually anticommuting observable set per edge
    party (dimension 2^floor(m/2)); cyclic kinds use planar qubit
    observables. Every source is maximally entangled and each central
    observable is the tensor product over sources of the transposed,
    normalized signed sums.
    """
    parties = 1 if f.kind in BIPARTITE_KINDS else f.n
    if f.kind in (Kind.CHAINED, Kind.XI):
        edge_obs = _planar_edge_observables(f.m)
        norm = 2.0 * math.cos(math.pi / (2 * f.m))
    else:
        edge_obs = anticommuting_set(f.m)
        norm = math.sqrt(f.m)
    dim = edge_obs[0].dim

    partners = []
    for term in f.terms:
        combo = sum(
            c * edge_obs[x].matrix for x, c in enumerate(term.signs[0]) if c
        )
        partners.append(combo.T / norm)

    state = network_product_state([maximally_entangled(dim)] * parties)
    central = tuple(
        Observable(tensor_all([b] * parties)) for b in partners
    )
    edge = tuple(tuple(edge_obs) for _ in range(parties))
    return state, ObservableAssignment(edge=edge, central=central)
