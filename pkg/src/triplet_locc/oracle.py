"""Independent checks on witness existence.

``enumerate_witnesses_2x2`` lists every product witness of a two-qubit
triple by a route that shares nothing with the plane enumeration in
:mod:`subspace`: it fixes Alice's vector ``a``, which makes orthogonality
to the two other states a 2x2 linear system ``M(a) b = 0`` in Bob's vector,
and finds the ``a`` with singular ``M(a)`` as generalized eigenvalues of a
matrix pencil. ``random_search_witness`` samples product states and
polishes them by alternating least squares; it can find witnesses in any
signature but can never certify that none exist.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import DimensionError
from .sampling import check_random_state, haar_locals, haar_vector
from .statecore import ProductState, StateSet, condition_on, make_product
from .witness import EPS_ZERO, _require_triple, verify_witness

PENCIL_DEGENERATE = 1e-10
ROOT_CLUSTER = 1e-6
FAMILY_SAMPLES = 16


class OracleKind(str, Enum):
    EXISTS = "exists_witness"
    CERTIFIED_EMPTY = "certified_empty"
    NOT_FOUND = "not_found"


@dataclass(frozen=True, eq=False)
class OracleVerdict:
    target: int
    kind: OracleKind
    witnesses: tuple[ProductState, ...] = ()
    samples: int | None = None
    note: str = ""


def _pencil(S: StateSet, x: int):
    others = [k for k in range(3) if k != x]
    conj_amps = [S[k].amps.reshape(2, 2).conj() for k in others]
    # row k of M(a) is a^T conj(A_k); M(a) = a0 P0 + a1 P1
    p0 = np.vstack([c[0] for c in conj_amps])
    p1 = np.vstack([c[1] for c in conj_amps])
    return p0, p1


def _bob_vectors(S: StateSet, x: int, m: np.ndarray, a: np.ndarray) -> list[np.ndarray]:
    """Bob vectors b with M(a) b = 0 that maximize overlap with the target."""
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] <= EPS_ZERO:
        # M(a) = 0: every b works, take the one aligned with the target
        target_row = a @ S[x].amps.reshape(2, 2).conj()
        if np.linalg.norm(target_row) <= EPS_ZERO:
            return [np.array([1, 0], dtype=complex)]
        return [target_row.conj()]
    _, _, vh = np.linalg.svd(m)
    return [vh[-1].conj()]


def _candidates_at(S: StateSet, x: int, a: np.ndarray, p0, p1) -> list[ProductState]:
    a = a / np.linalg.norm(a)
    m = a[0] * p0 + a[1] * p1
    return [make_product([a, b]) for b in _bob_vectors(S, x, m, a)]


def _pencil_roots(p0, p1) -> list[np.ndarray]:
    """Alice vectors a (unit, homogeneous) with det(a0 P0 + a1 P1) = 0."""
    # (P0 + lam P1) b = 0  <=>  P0 b = lam (-P1) b; homogeneous form keeps infinity
    w = scipy.linalg.eigvals(p0, -p1, homogeneous_eigvals=True)
    pts = []
    for alpha, beta in zip(w[0], w[1]):
        # eigenvalue lam = alpha/beta corresponds to a = (1, lam) ~ (beta, alpha)
        a = np.array([beta, alpha], dtype=complex)
        pts.append(a / np.linalg.norm(a))
    if len(pts) == 2:
        # defective pencils split a double root by ~sqrt(eps); merge the pair
        a1, a2 = pts
        chord = np.sqrt(max(0.0, 1.0 - abs(np.vdot(a1, a2)) ** 2))
        if chord <= ROOT_CLUSTER:
            ph = np.vdot(a1, a2)
            ph = ph / abs(ph) if abs(ph) > 0 else 1.0
            mid = a1 * ph + a2
            pts = [mid / np.linalg.norm(mid)]
    return pts


def _det_form(p0, p1):
    """Coefficients of det(a0 P0 + a1 P1) in a0^2, a0 a1, a1^2."""
    def det(m):
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]

    d00 = det(p0)
    d11 = det(p1)
    d01 = det(p0 + p1) - d00 - d11
    return d00, d01, d11


def enumerate_witnesses_2x2(S: StateSet, x, rng=0) -> OracleVerdict:
    """Exact existence verdict for a two-qubit target.

    ``rng`` only seeds the sampling used when ``det M(a)`` vanishes for
    every ``a`` (a continuous family of candidates); there a polynomial
    overlap that is zero at many random points is zero everywhere.
    """
    x = S.index(x)
    if S.signature.dims != (2, 2):
        raise DimensionError(f"exact enumeration needs dims [2,2], got {list(S.signature.dims)}")
    _require_triple(S)
    p0, p1 = _pencil(S, x)
    form = _det_form(p0, p1)
    # Alice vectors with M(a) = 0, for which any Bob vector is orthogonal
    stacked = np.vstack([np.concatenate([p0[:, 0], p0[:, 1]]), np.concatenate([p1[:, 0], p1[:, 1]])])
    _, sv, vh = np.linalg.svd(stacked.T)
    special = [vh[-1].conj()] if sv[-1] <= EPS_ZERO else []

    if max(abs(c) for c in form) <= PENCIL_DEGENERATE:
        rng = check_random_state(rng)
        alices = special + [np.array([0, 1], dtype=complex)]
        alices += [haar_vector(2, rng) for _ in range(FAMILY_SAMPLES)]
        note = "singular pencil: continuous candidate family sampled"
    else:
        alices = special + _pencil_roots(p0, p1)
        note = "regular pencil: finite candidate list"

    found = []
    for a in alices:
        for phi in _candidates_at(S, x, a, p0, p1):
            if verify_witness(S, x, phi, EPS_ZERO):
                found.append(phi)
    if found:
        return OracleVerdict(x, OracleKind.EXISTS, tuple(found), note=note)
    return OracleVerdict(x, OracleKind.CERTIFIED_EMPTY, note=note)


def _als_refine(S: StateSet, x: int, locals_: list[np.ndarray], iters: int, tol: float):
    """Alternating per-party minimization of sum_{i != x} |<psi_i|phi>|^2."""
    others = [k for k in range(len(S)) if k != x]
    n = len(locals_)
    prev = np.inf
    for _ in range(iters):
        for j in range(n):
            rest = [locals_[k] for k in range(n) if k != j]
            h = np.zeros((locals_[j].size,) * 2, dtype=complex)
            for i in others:
                r = condition_on(S[i], [j], rest).conj()
                h += np.outer(r.conj(), r)
            w, vecs = np.linalg.eigh(h)
            locals_[j] = vecs[:, 0]
        vec = make_product(locals_).kron()
        resid = sum(abs(np.vdot(S[i].amps, vec)) ** 2 for i in others)
        if resid <= (tol * 1e-3) ** 2 or resid > 0.999 * prev:
            break
        prev = resid
    return locals_


def random_search_witness(
    S: StateSet, x, samples: int = 1000, rng=None, tol: float = EPS_ZERO, refine_iters: int = 50
) -> OracleVerdict:
    """Sample product states (refined by alternating least squares) looking for a witness."""
    x = S.index(x)
    rng = check_random_state(rng)
    dims = S.signature.dims
    for n in range(1, samples + 1):
        locals_ = haar_locals(dims, rng)
        phi = make_product(locals_)
        if verify_witness(S, x, phi, tol):
            return OracleVerdict(x, OracleKind.EXISTS, (phi,), samples=n)
        phi = make_product(_als_refine(S, x, locals_, refine_iters, tol))
        if verify_witness(S, x, phi, tol):
            return OracleVerdict(x, OracleKind.EXISTS, (phi,), samples=n)
    return OracleVerdict(x, OracleKind.NOT_FOUND, samples=samples)
