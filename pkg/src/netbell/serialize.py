"""JSON (de)serialization for the package's domain objects.

Complex matrices are encoded as ``{"re": [[...]], "im": [[...]]}`` and
vectors as the same with flat lists; states additionally carry their
``subsystem_dims``. Parsers raise ``ValueError`` naming the first invalid
field so CLI diagnostics can point at it.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .classical import DeterministicStrategy
from .functionals import Functional, Kind, ObservableAssignment, TermSpec
from .states import Observable, QuantumState


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, full-precision
    floats (repr round-trips bit-identically)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1)


def _field(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: expected an object")
    if key not in obj:
        raise ValueError(f"{path}.{key}: missing field")
    return obj[key]


def matrix_to_json(m: np.ndarray) -> dict:
    arr = np.asarray(m, dtype=complex)
    return {"re": arr.real.tolist(), "im": arr.imag.tolist()}


def matrix_from_json(obj: dict, path: str = "matrix") -> np.ndarray:
    re = np.asarray(_field(obj, "re", path), dtype=float)
    im = np.asarray(_field(obj, "im", path), dtype=float)
    if re.shape != im.shape:
        raise ValueError(f"{path}: re/im shapes differ")
    return re + 1j * im


def state_to_json(state: QuantumState) -> dict:
    return {
        "kind": state.kind,
        "data": matrix_to_json(state.data),
        "subsystem_dims": list(state.subsystem_dims),
    }


def state_from_json(obj: dict, path: str = "state") -> QuantumState:
    kind = _field(obj, "kind", path)
    dims = _field(obj, "subsystem_dims", path)
    data = matrix_from_json(_field(obj, "data", path), f"{path}.data")
    if kind == "pure":
        return QuantumState.pure(data.reshape(-1), dims)
    if kind == "density":
        return QuantumState.density(data, dims)
    raise ValueError(f"{path}.kind: must be 'pure' or 'density'")


def observable_to_json(obs: Observable) -> dict:
    return matrix_to_json(obs.matrix)


def observable_from_json(obj: dict, path: str = "observable") -> Observable:
    try:
        return Observable(matrix_from_json(obj, path))
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc


def functional_to_json(f: Functional) -> dict:
    return {
        "kind": f.kind.value,
        "m": f.m,
        "n": f.n,
        "combiner": f.combiner,
        "terms": [
            {"signs": [list(row) for row in t.signs], "central_input": t.central_input}
            for t in f.terms
        ],
    }


def functional_from_json(obj: dict, path: str = "functional") -> Functional:
    terms = tuple(
        TermSpec(
            signs=tuple(
                tuple(int(c) for c in row)
                for row in _field(t, "signs", f"{path}.terms[{i}]")
            ),
            central_input=int(_field(t, "central_input", f"{path}.terms[{i}]")),
        )
        for i, t in enumerate(_field(obj, "terms", path))
    )
    return Functional(
        kind=Kind(_field(obj, "kind", path)),
        m=int(_field(obj, "m", path)),
        n=int(_field(obj, "n", path)),
        combiner=_field(obj, "combiner", path),
        terms=terms,
    )


def assignment_to_json(assignment: ObservableAssignment) -> dict:
    return {
        "edge_observables": [
            [observable_to_json(o) for o in row] for row in assignment.edge
        ],
        "central_observables": [
            observable_to_json(o) for o in assignment.central
        ],
    }


def assignment_from_json(obj: dict, path: str = "settings") -> ObservableAssignment:
    edge_rows = _field(obj, "edge_observables", path)
    central_objs = _field(obj, "central_observables", path)
    edge = tuple(
        tuple(
            observable_from_json(o, f"{path}.edge_observables[{k}][{x}]")
            for x, o in enumerate(row)
        )
        for k, row in enumerate(edge_rows)
    )
    central = tuple(
        observable_from_json(o, f"{path}.central_observables[{i}]")
        for i, o in enumerate(central_objs)
    )
    return ObservableAssignment(edge=edge, central=central)


def settings_from_json(obj: dict) -> tuple[QuantumState, ObservableAssignment]:
    """Parse a certify settings document: a state plus the observables."""
    state = state_from_json(_field(obj, "state", "settings"), "settings.state")
    return state, assignment_from_json(obj, "settings")


def strategy_to_json(s: DeterministicStrategy) -> dict:
    return {
        "edge_responses": [list(row) for row in s.edge_responses],
        "central_responses": list(s.central_responses),
    }


def strategy_from_json(obj: dict, path: str = "strategy") -> DeterministicStrategy:
    return DeterministicStrategy(
        edge_responses=tuple(
            tuple(int(v) for v in row)
            for row in _field(obj, "edge_responses", path)
        ),
        central_responses=tuple(
            int(v) for v in _field(obj, "central_responses", path)
        ),
    )
