"""Small dense linear algebra over states: Gram matrices, complements, nullspaces,
and the exact list of product states inside a plane of C^2 (x) C^2."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import DimensionError, PreconditionError, RankError
from .sampling import haar_vector
from .statecore import (
    MultipartiteState,
    ProductState,
    StateSet,
    as_product,
    condition_on,
    inner,
    is_product_across,
    make_product,
    make_state,
    matricize,
)

EPS_QUAD = 1e-10
EPS_ROOT = 1e-7
ROOT_INFINITY = 1e8
EPS_DISC = 1e-13


def gram(states) -> np.ndarray:
    states = list(states)
    if not states:
        raise PreconditionError("gram needs at least one state")
    sig = states[0].signature
    for s in states[1:]:
        if s.signature != sig:
            raise DimensionError(f"signature mismatch: {list(sig.dims)} vs {list(s.dims)}")
    rows = np.vstack([s.amps for s in states])
    return rows.conj() @ rows.T


def min_gram_eigenvalue(states) -> float:
    return float(np.linalg.eigvalsh(gram(states))[0])


def linearly_independent(states, tol: float = 1e-9) -> bool:
    return min_gram_eigenvalue(states) > tol


def orthonormal_complement_basis(rows: np.ndarray) -> np.ndarray:
    """Columns spanning the orthogonal complement of the row space of ``rows``.

    ``rows`` must have orthonormal rows. Pivoted QR of the complement
    projector picks standard basis directions first, so e.g. the complement
    of {|00>,|01>,|10>} comes out as exactly |11> up to phase.
    """
    n = rows.shape[1]
    k = rows.shape[0]
    proj = np.eye(n, dtype=complex) - rows.T @ rows.conj()
    if k == n:
        return np.zeros((n, 0), dtype=complex)
    q, _, _ = scipy.linalg.qr(proj, pivoting=True)
    return q[:, : n - k]


def orthogonal_complement(states, tol: float = 1e-9) -> list[MultipartiteState]:
    """Orthonormal basis of the complement of span(states)."""
    states = list(states)
    if not linearly_independent(states, tol):
        raise RankError(f"{len(states)} states are not linearly independent at tol={tol:g}")
    sig = states[0].signature
    q, _ = np.linalg.qr(np.vstack([s.amps for s in states]).T)
    basis = orthonormal_complement_basis(q.T)
    return [make_state(sig, basis[:, c]) for c in range(basis.shape[1])]


def nullspace_two_rows(r1, r2, atol: float = 1e-13, rtol: float = 1e-12) -> np.ndarray:
    """Orthonormal columns x with ``r1 @ x = r2 @ x = 0`` (bilinear, no conjugation)."""
    r1 = np.asarray(r1, dtype=complex).reshape(-1)
    r2 = np.asarray(r2, dtype=complex).reshape(-1)
    if r1.size != r2.size:
        raise DimensionError(f"rows have lengths {r1.size} and {r2.size}")
    if r1.size < 2:
        raise DimensionError("rows must have length >= 2")
    return matrix_nullspace(np.vstack([r1, r2]), atol, rtol)


def matrix_nullspace(m: np.ndarray, atol: float = 1e-13, rtol: float = 1e-12) -> np.ndarray:
    _, sv, vh = np.linalg.svd(m, full_matrices=True)
    cutoff = max(atol, rtol * (sv[0] if sv.size else 0.0))
    rank = int(np.sum(sv > cutoff))
    return vh[rank:].conj().T


class PlaneKind(str, Enum):
    DISCRETE = "discrete"
    ALL_PRODUCT = "all_product"


@dataclass(frozen=True, eq=False)
class PlaneProductResult:
    kind: PlaneKind
    members: tuple[ProductState, ...]
    plane_basis: tuple[MultipartiteState, MultipartiteState]
    coefficients: tuple[complex, complex, complex]
    roots: tuple[complex | None, ...]
    """Projective roots t of det(M_u + t M_v); ``None`` stands for infinity."""


def det_coefficients(mu: np.ndarray, mv: np.ndarray) -> tuple[complex, complex, complex]:
    """(c0, c1, c2) with det(mu + t mv) = c0 + c1 t + c2 t^2 for 2x2 matrices."""
    c0 = mu[0, 0] * mu[1, 1] - mu[0, 1] * mu[1, 0]
    c2 = mv[0, 0] * mv[1, 1] - mv[0, 1] * mv[1, 0]
    c1 = mu[0, 0] * mv[1, 1] + mv[0, 0] * mu[1, 1] - mu[0, 1] * mv[1, 0] - mv[0, 1] * mu[1, 0]
    return complex(c0), complex(c1), complex(c2)


def _chordal(t1, t2) -> float:
    if t1 is None and t2 is None:
        return 0.0
    if t1 is None:
        return 1.0 / np.sqrt(1.0 + abs(t2) ** 2)
    if t2 is None:
        return 1.0 / np.sqrt(1.0 + abs(t1) ** 2)
    return abs(t1 - t2) / (np.sqrt(1.0 + abs(t1) ** 2) * np.sqrt(1.0 + abs(t2) ** 2))


def projective_quadratic_roots(c0, c1, c2, eps: float = EPS_QUAD) -> list[complex | None]:
    """Distinct roots of c0 + c1 t + c2 t^2 on the projective line (None = infinity).

    Caller guarantees the coefficients are not all zero at ``eps``.
    """
    roots: list[complex | None] = []
    if abs(c2) <= eps:
        roots.append(None)
        if abs(c1) > eps:
            roots.append(-c0 / c1)
        # c1 == c2 == 0: infinity is a double root
    else:
        disc2 = complex(c1 * c1 - 4 * c2 * c0)
        if abs(disc2) <= EPS_DISC * (abs(c0) + abs(c1) + abs(c2)):
            # inside the rounding band of the discriminant: treat as a double root
            disc2 = 0j
        disc = np.sqrt(disc2)
        # choose the sign that avoids cancellation
        q = -0.5 * (c1 + disc) if (np.conj(c1) * disc).real >= 0 else -0.5 * (c1 - disc)
        if q == 0:
            roots.extend([0j, 0j])
        else:
            roots.extend([q / c2, c0 / q])
    snapped = [None if (t is None or abs(t) > ROOT_INFINITY) else complex(t) for t in roots]
    if len(snapped) == 2 and _chordal(*snapped) <= EPS_ROOT:
        # a double root splits by ~sqrt(eps) under rounding; the midpoint is
        # accurate to working precision, either half is not
        t1, t2 = snapped
        return [None if t1 is None or t2 is None else (t1 + t2) / 2]
    return snapped


def product_states_in_plane(u: MultipartiteState, v: MultipartiteState) -> PlaneProductResult:
    """All product states in span{u, v} of C^2 (x) C^2.

    u + t v is product iff det(M_u + t M_v) = 0, a quadratic in t solved on
    the projective line; if the quadratic vanishes identically the whole
    plane is product.
    """
    for s in (u, v):
        if s.dims != (2, 2):
            raise DimensionError(f"product_states_in_plane needs dims [2,2], got {list(s.dims)}")
    g = np.array([[inner(u, u), inner(u, v)], [inner(v, u), inner(v, v)]])
    if np.max(np.abs(g - np.eye(2))) > 1e-9:
        raise PreconditionError("plane basis must be orthonormal")
    mu = u.amps.reshape(2, 2)
    mv = v.amps.reshape(2, 2)
    c0, c1, c2 = det_coefficients(mu, mv)
    if max(abs(c0), abs(c1), abs(c2)) <= EPS_QUAD:
        return PlaneProductResult(PlaneKind.ALL_PRODUCT, (), (u, v), (c0, c1, c2), ())
    roots = projective_quadratic_roots(c0, c1, c2)
    members = []
    for t in roots:
        vec = v.amps if t is None else u.amps + t * v.amps
        members.append(as_product(make_state(u.signature, vec)))
    return PlaneProductResult(PlaneKind.DISCRETE, tuple(members), (u, v), (c0, c1, c2), tuple(roots))


def project_onto(vec: np.ndarray, basis) -> np.ndarray:
    """Orthogonal projection of ``vec`` onto the span of orthonormal states ``basis``."""
    out = np.zeros_like(np.asarray(vec, dtype=complex))
    for b in basis:
        out = out + np.vdot(b.amps, vec) * b.amps
    return out


def plane_residual(m, basis) -> float:
    vec = m.kron() if isinstance(m, ProductState) else m.amps
    return float(np.linalg.norm(vec - project_onto(vec, basis)))


def sample_plane_all_product(u, v, rng, count: int = 16, tol: float = 1e-9) -> bool:
    """Check by sampling that random elements of span{u, v} are product."""
    for _ in range(count):
        a, b = haar_vector(2, rng)
        s = make_state(u.signature, a * u.amps + b * v.amps)
        if not is_product_across(s, [0], tol):
            return False
    return True


@dataclass(frozen=True, eq=False)
class LocalSupportReduction:
    """Compression of a state set onto the local supports of its span.

    ``isometries[j]`` maps the reduced local space of kept party j into the
    original one; parties whose local support is one-dimensional are dropped
    and remembered through ``anchors``. Inner products of the set with any
    lifted product state equal those of the reduced set with the unlifted
    state, which is what makes verdicts transfer in both directions.
    """

    original: StateSet
    reduced: StateSet
    kept: tuple[int, ...]
    isometries: dict
    anchors: dict

    @property
    def is_identity(self) -> bool:
        return self.reduced is self.original

    def lift(self, phi: ProductState) -> ProductState:
        if self.is_identity:
            return phi
        locals_ = {}
        for j, f in zip(self.kept, phi.locals):
            locals_[j] = self.isometries[j] @ f
        locals_.update(self.anchors)
        return make_product(locals_[j] for j in range(len(self.original.signature)))


def local_support_basis(states, party: int, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal columns spanning the joint local support of ``states`` on ``party``."""
    rho = 0
    for s in states:
        m = matricize(s, [party])
        rho = rho + m @ m.conj().T
    w, vecs = np.linalg.eigh(rho)
    return vecs[:, w > tol][:, ::-1]


def reduce_to_local_supports(S: StateSet, tol: float = 1e-10) -> LocalSupportReduction:
    """Restrict every party to the support of the set's reduced states.

    Left as the identity when nothing shrinks or when fewer than two
    parties would remain.
    """
    sig = S.signature
    bases = [local_support_basis(S.states, j, tol) for j in range(len(sig))]
    ranks = [b.shape[1] for b in bases]
    kept = tuple(j for j, r in enumerate(ranks) if r >= 2)
    if ranks == list(sig.dims) or len(kept) < 2:
        return LocalSupportReduction(S, S, tuple(range(len(sig))), {}, {})
    anchors = {j: bases[j][:, 0] for j, r in enumerate(ranks) if r < 2}
    isometries = {j: bases[j] for j in kept}
    new_dims = tuple(ranks[j] for j in kept)
    reduced = []
    for s in S.states:
        t = condition_on(s, kept, [anchors[j] for j in sorted(anchors)]) if anchors else s.amps
        t = t.reshape([sig.dims[j] for j in kept])
        for ax, j in enumerate(kept):
            t = np.moveaxis(np.tensordot(isometries[j].conj().T, t, axes=([1], [ax])), 0, ax)
        reduced.append(make_state(new_dims, t.reshape(-1)))
    return LocalSupportReduction(
        S, StateSet(tuple(reduced), S.names, S.priors), kept, isometries, anchors
    )
