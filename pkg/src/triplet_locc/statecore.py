"""Multipartite pure states, product states and the tensor primitives on them.

Amplitudes are stored flat in lexicographic order with party 0 varying
slowest, so ``amps.reshape(dims)`` is the amplitude tensor and merging two
adjacent parties never touches storage.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, PreconditionError, ZeroVectorError

EPS_NORM = 1e-9
EPS_DEGENERATE = 1e-12


@dataclass(frozen=True)
class PartySignature:
    """Ordered local Hilbert-space dimensions of an n-party system."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) < 2:
            raise DimensionError(f"need at least two parties, got dims={list(dims)}")
        if any(d < 2 for d in dims):
            raise DimensionError(f"every local dimension must be >= 2, got dims={list(dims)}")

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __getitem__(self, i):
        return self.dims[i]

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    @property
    def is_all_qubit(self) -> bool:
        return all(d == 2 for d in self.dims)


def as_signature(dims) -> PartySignature:
    if isinstance(dims, PartySignature):
        return dims
    return PartySignature(tuple(dims))


@dataclass(frozen=True, eq=False)
class MultipartiteState:
    """A unit-norm pure state on ``signature``.

    ``scale`` records the factor the raw amplitudes were divided by when the
    state was built through :func:`make_state`.
    """

    signature: PartySignature
    amps: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amps, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        if amps.size != self.signature.total:
            raise DimensionError(
                f"amplitude vector has length {amps.size}, expected {self.signature.total} "
                f"for dims {list(self.signature.dims)}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > EPS_NORM:
            raise PreconditionError(f"state is not normalized (norm={norm!r}); use make_state")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.signature.dims

    def tensor(self) -> np.ndarray:
        return self.amps.reshape(self.signature.dims)


@dataclass(frozen=True, eq=False)
class ProductState:
    """One unit local vector per party."""

    locals: tuple[np.ndarray, ...]
    signature: PartySignature = field(init=False)

    def __post_init__(self):
        vecs = []
        for j, v in enumerate(self.locals):
            v = np.array(v, dtype=complex).reshape(-1)
            n = np.linalg.norm(v)
            if abs(n - 1.0) > EPS_NORM:
                raise PreconditionError(f"local factor {j} has norm {n!r}, expected 1")
            v.setflags(write=False)
            vecs.append(v)
        object.__setattr__(self, "locals", tuple(vecs))
        object.__setattr__(self, "signature", PartySignature(tuple(v.size for v in vecs)))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.signature.dims

    def kron(self) -> np.ndarray:
        return _kron_all(self.locals)


@dataclass(frozen=True, eq=False)
class StateSet:
    """Named ordered collection of states on one signature, with optional priors."""

    states: tuple[MultipartiteState, ...]
    names: tuple[str, ...] = ()
    priors: tuple[float, ...] | None = None

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise PreconditionError("a state set needs at least one state")
        sig = states[0].signature
        for k, s in enumerate(states):
            if s.signature != sig:
                raise DimensionError(
                    f"state {k} has dims {list(s.dims)}, expected {list(sig.dims)}"
                )
        names = tuple(self.names) or tuple(f"psi{k + 1}" for k in range(len(states)))
        if len(names) != len(states):
            raise PreconditionError(f"{len(names)} names given for {len(states)} states")
        if len(set(names)) != len(names):
            raise PreconditionError(f"state names must be unique, got {list(names)}")
        priors = self.priors
        if priors is not None:
            priors = tuple(float(p) for p in priors)
            if len(priors) != len(states):
                raise PreconditionError(f"{len(priors)} priors given for {len(states)} states")
            if any(p <= 0 for p in priors):
                raise PreconditionError(f"priors must be strictly positive, got {list(priors)}")
            if abs(sum(priors) - 1.0) > EPS_NORM:
                raise PreconditionError(f"priors must sum to 1, got {sum(priors)!r}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "priors", priors)

    @classmethod
    def from_amplitudes(cls, dims, amplitudes, names=(), priors=None) -> "StateSet":
        sig = as_signature(dims)
        return cls(tuple(make_state(sig, a) for a in amplitudes), tuple(names), priors)

    @property
    def signature(self) -> PartySignature:
        return self.states[0].signature

    def __len__(self):
        return len(self.states)

    def __getitem__(self, k) -> MultipartiteState:
        return self.states[k]

    def __iter__(self):
        return iter(self.states)

    def index(self, key) -> int:
        """Resolve a state name or integer index to an index."""
        if isinstance(key, (int, np.integer)):
            if not 0 <= key < len(self.states):
                raise IndexError(f"state index {key} out of range for {len(self.states)} states")
            return int(key)
        try:
            return self.names.index(key)
        except ValueError:
            raise KeyError(f"no state named {key!r}; names are {list(self.names)}") from None

    def matrix(self) -> np.ndarray:
        """States as rows."""
        return np.vstack([s.amps for s in self.states])


def _kron_all(vecs: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for v in vecs:
        out = np.kron(out, v)
    return out


def make_state(signature, amps) -> MultipartiteState:
    """Build a state from raw amplitudes, normalizing silently."""
    sig = as_signature(signature)
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    if amps.size != sig.total:
        raise DimensionError(
            f"amplitude vector has length {amps.size}, expected {sig.total} for dims {list(sig.dims)}"
        )
    norm = float(np.linalg.norm(amps))
    if norm <= EPS_DEGENERATE:
        raise ZeroVectorError(f"amplitude vector has norm {norm!r}, cannot normalize")
    return MultipartiteState(sig, amps / norm, scale=norm)


def make_product(local_vectors: Iterable) -> ProductState:
    """Build a product state, normalizing each local factor."""
    vecs = []
    for j, v in enumerate(local_vectors):
        v = np.asarray(v, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n <= EPS_DEGENERATE:
            raise ZeroVectorError(f"local factor {j} is the zero vector")
        vecs.append(v / n)
    return ProductState(tuple(vecs))


def basis_state(signature, digits: Sequence[int]) -> MultipartiteState:
    """Computational basis state ``|digits>``."""
    sig = as_signature(signature)
    if len(digits) != len(sig):
        raise DimensionError(f"{len(digits)} digits for {len(sig)} parties")
    amps = np.zeros(sig.total, dtype=complex)
    amps[np.ravel_multi_index(tuple(digits), sig.dims)] = 1.0
    return MultipartiteState(sig, amps)


def inner(a, b) -> complex:
    """<a|b>, conjugate-linear in ``a``. Accepts states or product states."""
    a_sig, a_amps = _sig_amps(a)
    b_sig, b_amps = _sig_amps(b)
    if a_sig != b_sig:
        raise DimensionError(f"signature mismatch: {list(a_sig.dims)} vs {list(b_sig.dims)}")
    return complex(np.vdot(a_amps, b_amps))


def _sig_amps(s):
    if isinstance(s, ProductState):
        return s.signature, s.kron()
    return s.signature, s.amps


def embed(p: ProductState) -> MultipartiteState:
    return MultipartiteState(p.signature, p.kron())


def _check_party(sig: PartySignature, i):
    if not isinstance(i, (int, np.integer)) or not 0 <= i < len(sig):
        raise IndexError(f"party index {i!r} out of range for {len(sig)} parties")


def merge_parties(s: MultipartiteState, i: int, j: int) -> MultipartiteState:
    """Treat adjacent parties ``i`` and ``j`` as one party of dimension d_i*d_j."""
    sig = s.signature
    _check_party(sig, i)
    _check_party(sig, j)
    if abs(i - j) != 1:
        raise IndexError(f"only adjacent parties can be merged, got {i} and {j}")
    lo = min(i, j)
    if len(sig) < 3:
        raise DimensionError("merging would leave a single party")
    dims = sig.dims[:lo] + (sig.dims[lo] * sig.dims[lo + 1],) + sig.dims[lo + 2:]
    return MultipartiteState(PartySignature(dims), s.amps, s.scale)


def merge_product(p: ProductState, i: int, j: int) -> ProductState:
    lo = min(i, j)
    if abs(i - j) != 1:
        raise IndexError(f"only adjacent parties can be merged, got {i} and {j}")
    vecs = p.locals[:lo] + (np.kron(p.locals[lo], p.locals[lo + 1]),) + p.locals[lo + 2:]
    return ProductState(vecs)


def _probe_vectors(probe) -> list[np.ndarray]:
    if isinstance(probe, ProductState):
        return list(probe.locals)
    if isinstance(probe, np.ndarray) and probe.ndim == 1 and probe.dtype != object:
        return [probe]
    return [np.asarray(v, dtype=complex).reshape(-1) for v in probe]


def condition_on(s: MultipartiteState, kept, probe) -> np.ndarray:
    """Partial inner product ``(I_kept (x) <probe|) |s>``.

    ``probe`` holds one local vector per party not in ``kept`` (in party
    order); a :class:`ProductState` or a plain sequence of vectors is
    accepted. The result is over the kept parties in party order, flat and
    unnormalized; it is the zero vector when the probe is orthogonal.
    """
    sig = s.signature
    kept = sorted(set(int(k) for k in kept))
    for k in kept:
        _check_party(sig, k)
    rest = [j for j in range(len(sig)) if j not in kept]
    vecs = _probe_vectors(probe)
    if [v.size for v in vecs] != [sig.dims[j] for j in rest]:
        raise DimensionError(
            f"probe dims {[v.size for v in vecs]} do not match complementary dims "
            f"{[sig.dims[j] for j in rest]}"
        )
    t = s.tensor()
    # contract from the highest axis down so earlier axis numbers stay valid
    for j, v in sorted(zip(rest, vecs), key=lambda jv: -jv[0]):
        t = np.tensordot(t, v.conj(), axes=([j], [0]))
    return np.asarray(t, dtype=complex).reshape(-1)


def matricize(s, side_a) -> np.ndarray:
    """Amplitude matrix of ``s`` with parties ``side_a`` as rows."""
    sig = s.signature
    side_a = sorted(set(int(k) for k in side_a))
    for k in side_a:
        _check_party(sig, k)
    side_b = [j for j in range(len(sig)) if j not in side_a]
    if not side_a or not side_b:
        raise DimensionError("a bipartition needs parties on both sides")
    t = s.tensor() if isinstance(s, MultipartiteState) else s.kron().reshape(sig.dims)
    da = int(np.prod([sig.dims[k] for k in side_a]))
    return np.transpose(t, side_a + side_b).reshape(da, -1)


def is_product_across(s, cut, tol: float = 1e-9) -> bool:
    """True when every singular value but the largest of the cut matrix is <= tol."""
    sv = np.linalg.svd(matricize(s, cut), compute_uv=False)
    return bool(np.all(sv[1:] <= tol))


def is_fully_product(s: MultipartiteState, tol: float = 1e-9) -> bool:
    return all(is_product_across(s, [j], tol) for j in range(len(s.signature)))


def split_product(vec: np.ndarray, dims: Sequence[int]) -> list[np.ndarray]:
    """Local factors of a (nearly) fully product vector, via dominant singular pairs."""
    dims = list(dims)
    rest = np.asarray(vec, dtype=complex).reshape(-1)
    factors = []
    for d in dims[:-1]:
        u, sv, vh = np.linalg.svd(rest.reshape(d, -1), full_matrices=False)
        factors.append(u[:, 0])
        rest = sv[0] * vh[0]
    factors.append(rest)
    return factors


def as_product(s: MultipartiteState) -> ProductState:
    """Factor a product state into local unit vectors (phase absorbed in the last)."""
    vecs = split_product(s.amps, s.dims)
    head = vecs[:-1]
    last = vecs[-1]
    return ProductState(tuple(head) + (last / np.linalg.norm(last),))
