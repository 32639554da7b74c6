"""One-shot LOCC protocol induced by a witness, and its Monte Carlo simulation.

Each party measures in an orthonormal basis whose first vector is its
witness factor. The joint outcome (0, ..., 0) is the conclusive one; every
other outcome is inconclusive and the protocol stops.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, PreconditionError
from .sampling import check_random_state
from .statecore import MultipartiteState, PartySignature, StateSet
from .witness import EPS_ZERO, Witness, verify_witness

DEFAULT_MAX_DIM = 2**10


@dataclass(frozen=True, eq=False)
class LocalBasisSet:
    signature: PartySignature
    bases: tuple[np.ndarray, ...]
    """``bases[j][k]`` is the k-th basis vector of party j (rows)."""


@dataclass(eq=False)
class ProtocolRunSummary:
    shots: int
    conclusive_count: int
    false_conclusive_count: int
    target_shots: int
    empirical_frequency: float
    predicted_probability: float
    per_true_state_counts: dict = field(default_factory=dict)

    @property
    def sigma(self) -> float:
        """Binomial standard error of the empirical frequency."""
        if self.target_shots == 0:
            return 0.0
        p = self.predicted_probability
        return float(np.sqrt(p * (1 - p) / self.target_shots))


def complete_basis(first: np.ndarray) -> np.ndarray:
    """Orthonormal basis (rows) starting with ``first``, completed by Gram-Schmidt
    against the standard basis."""
    first = np.asarray(first, dtype=complex).reshape(-1)
    d = first.size
    vecs = [first / np.linalg.norm(first)]
    for k in range(d):
        if len(vecs) == d:
            break
        e = np.zeros(d, dtype=complex)
        e[k] = 1.0
        for _ in range(2):  # second pass restores orthogonality lost to rounding
            for v in vecs:
                e = e - np.vdot(v, e) * v
        n = np.linalg.norm(e)
        if n > 1e-6:
            vecs.append(e / n)
    return np.vstack(vecs)


def complete_local_bases(w: Witness) -> LocalBasisSet:
    return LocalBasisSet(w.phi.signature, tuple(complete_basis(f) for f in w.phi.locals))


def outcome_distribution(true_state: MultipartiteState, bases: LocalBasisSet, max_dim=DEFAULT_MAX_DIM):
    """Born probabilities of every joint outcome, shaped like the signature."""
    if true_state.signature != bases.signature:
        raise DimensionError(
            f"state dims {list(true_state.dims)} do not match basis dims {list(bases.signature.dims)}"
        )
    if true_state.signature.total > max_dim:
        raise PreconditionError(
            f"joint outcome space has {true_state.signature.total} entries, above the cap {max_dim}"
        )
    t = true_state.tensor()
    for j, b in enumerate(bases.bases):
        # amplitude on basis vector k of party j is <b_k|psi> along axis j
        t = np.moveaxis(np.tensordot(b.conj(), t, axes=([1], [j])), 0, j)
    probs = np.abs(t) ** 2
    return probs / probs.sum()


def simulate_shot(true_state: MultipartiteState, bases: LocalBasisSet, rng=None) -> tuple[int, ...]:
    """One joint measurement outcome; (0, ..., 0) is the conclusive flag."""
    rng = check_random_state(rng)
    probs = outcome_distribution(true_state, bases)
    flat = int(rng.choice(probs.size, p=probs.reshape(-1)))
    return tuple(int(i) for i in np.unravel_index(flat, probs.shape))


def run_protocol(S: StateSet, w: Witness, shots: int, rng=None, max_dim=DEFAULT_MAX_DIM) -> ProtocolRunSummary:
    """Simulate ``shots`` rounds: prepare a state from the priors, measure, tally."""
    if not verify_witness(S, w.target, w.phi, EPS_ZERO):
        raise PreconditionError(f"witness does not verify for target {S.names[w.target]!r}")
    rng = check_random_state(rng)
    bases = complete_local_bases(w)
    priors = np.full(len(S), 1.0 / len(S)) if S.priors is None else np.asarray(S.priors)
    prepared = rng.choice(len(S), size=shots, p=priors) if shots > 0 else np.zeros(0, dtype=int)
    prepared_counts = np.bincount(prepared, minlength=len(S))

    per_state = {}
    conclusive = false_conclusive = 0
    for k, name in enumerate(S.names):
        n_k = int(prepared_counts[k])
        probs = outcome_distribution(S[k], bases, max_dim).reshape(-1)
        hits = int(np.sum(rng.choice(probs.size, size=n_k, p=probs) == 0)) if n_k else 0
        per_state[name] = {"shots": n_k, "conclusive": hits}
        if k == w.target:
            conclusive += hits
        else:
            false_conclusive += hits
    target_shots = int(prepared_counts[w.target])
    freq = conclusive / target_shots if target_shots else 0.0
    return ProtocolRunSummary(
        shots=int(shots),
        conclusive_count=conclusive,
        false_conclusive_count=false_conclusive,
        target_shots=target_shots,
        empirical_frequency=float(freq),
        predicted_probability=float(w.success_probability),
        per_true_state_counts=per_state,
    )
