"""JSON state-set files.

    {
      "dims": [2, 2],
      "states": [{"name": "psi1", "amps": [[0.6, 0.0], [0, 0], [0, 0], [0.8, 0.0]]}, ...],
      "priors": [0.5, 0.25, 0.25]          # optional
    }

Amplitudes are ``[re, im]`` pairs in lexicographic order (party 0 slowest).
States need not be normalized; the scale each was divided by is kept.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import LoccError
from .statecore import PartySignature, StateSet, make_state


class StateSetFileError(LoccError, ValueError):
    """A state-set file could not be parsed into a valid set."""


def _complex_pair(value, where: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in value)
    ):
        raise StateSetFileError(f"{where}: expected a [re, im] pair of numbers, got {value!r}")
    re, im = float(value[0]), float(value[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise StateSetFileError(f"{where}: non-finite amplitude {value!r}")
    return complex(re, im)


def parse_state_set(doc) -> StateSet:
    """Validate a decoded document and build the state set."""
    if not isinstance(doc, dict):
        raise StateSetFileError("top level must be an object with 'dims' and 'states'")
    for key in ("dims", "states"):
        if key not in doc:
            raise StateSetFileError(f"missing required field {key!r}")
    dims = doc["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise StateSetFileError(f"field 'dims': expected a list of integers, got {dims!r}")
    try:
        sig = PartySignature(tuple(dims))
    except LoccError as exc:
        raise StateSetFileError(f"field 'dims': {exc}") from None
    raw_states = doc["states"]
    if not isinstance(raw_states, list) or not raw_states:
        raise StateSetFileError("field 'states': expected a non-empty list")
    states, names = [], []
    for k, entry in enumerate(raw_states):
        if not isinstance(entry, dict) or "amps" not in entry:
            raise StateSetFileError(f"states[{k}]: expected an object with 'amps'")
        name = entry.get("name", f"psi{k + 1}")
        label = f"states[{k}] ({name!r})"
        if not isinstance(name, str) or not name:
            raise StateSetFileError(f"states[{k}]: 'name' must be a non-empty string")
        amps = entry["amps"]
        if not isinstance(amps, list):
            raise StateSetFileError(f"{label}: 'amps' must be a list of [re, im] pairs")
        if len(amps) != sig.total:
            raise StateSetFileError(
                f"{label}: 'amps' has {len(amps)} entries, expected {sig.total} for dims {dims}"
            )
        vec = np.array([_complex_pair(a, f"{label} amps[{i}]") for i, a in enumerate(amps)])
        try:
            states.append(make_state(sig, vec))
        except LoccError as exc:
            raise StateSetFileError(f"{label}: {exc}") from None
        names.append(name)
    priors = doc.get("priors")
    if priors is not None:
        if not isinstance(priors, list) or not all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in priors
        ):
            raise StateSetFileError(f"field 'priors': expected a list of numbers, got {priors!r}")
    try:
        return StateSet(tuple(states), tuple(names), None if priors is None else tuple(priors))
    except LoccError as exc:
        raise StateSetFileError(str(exc)) from None


def loads_state_set(text: str) -> StateSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateSetFileError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_state_set(doc)


def load_state_set(path) -> StateSet:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StateSetFileError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return loads_state_set(text)
    except StateSetFileError as exc:
        raise StateSetFileError(f"{path}: {exc}") from None


def complex_to_pairs(vec) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex).reshape(-1)]


def state_set_to_doc(S: StateSet) -> dict:
    doc = {
        "dims": list(S.signature.dims),
        "states": [
            {"name": n, "amps": complex_to_pairs(s.amps * s.scale)} for n, s in zip(S.names, S.states)
        ],
    }
    if S.priors is not None:
        doc["priors"] = list(S.priors)
    return doc


def dump_state_set(S: StateSet, path) -> None:
    Path(path).write_text(json.dumps(state_set_to_doc(S), indent=2) + "\n")
