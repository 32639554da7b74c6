"""Product-state witnesses for conclusive local identification of one of three states.

A target state is conclusively locally identifiable exactly when some
product state is orthogonal to every other member of the set and not
orthogonal to the target; projecting onto it then succeeds with probability
``|<target|phi>|^2`` and never fires for the others. This module builds such
witnesses for the three structural cases (a party of dimension >= 3, two
qubits, three or more qubits) and classifies whole triples.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DimensionError,
    InternalContradiction,
    PreconditionError,
    RankError,
    SearchFailure,
)
from .sampling import check_random_state, haar_locals, haar_vector
from .statecore import (
    ProductState,
    StateSet,
    condition_on,
    inner,
    is_product_across,
    make_product,
    make_state,
    merge_parties,
    split_product,
)
from .subspace import (
    PlaneKind,
    linearly_independent,
    min_gram_eigenvalue,
    nullspace_two_rows,
    orthogonal_complement,
    orthonormal_complement_basis,
    product_states_in_plane,
    project_onto,
    reduce_to_local_supports,
)

logger = logging.getLogger(__name__)

EPS_ZERO = 1e-9
DEFAULT_RETRIES = 16


@dataclass(frozen=True, eq=False)
class Witness:
    target: int
    phi: ProductState
    success_probability: float


class VerdictKind(str, Enum):
    IDENTIFIABLE = "identifiable"
    CERTIFIED_NOT = "certified_not_identifiable"
    UNDECIDED = "undecided"


class SetVerdict(str, Enum):
    DISTINGUISHABLE = "conclusively_locally_distinguishable"
    NOT_DISTINGUISHABLE = "not_conclusively_distinguishable"
    PARTIAL = "partially_decided"


@dataclass(frozen=True, eq=False)
class StateVerdict:
    kind: VerdictKind
    witness: Witness | None = None
    note: str = ""

    @property
    def identifiable(self) -> bool:
        return self.kind is VerdictKind.IDENTIFIABLE


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    names: tuple[str, ...]
    per_state: tuple[StateVerdict, ...]
    set_verdict: SetVerdict
    diagnostics: dict = field(default_factory=dict)

    @property
    def identifiable(self) -> list[int]:
        return [k for k, v in enumerate(self.per_state) if v.identifiable]

    def witnesses(self) -> list[Witness]:
        return [v.witness for v in self.per_state if v.witness is not None]


def _overlaps(S: StateSet, phi: ProductState) -> np.ndarray:
    if phi.signature != S.signature:
        raise DimensionError(
            f"witness dims {list(phi.dims)} do not match state dims {list(S.signature.dims)}"
        )
    vec = phi.kron()
    return S.matrix().conj() @ vec


def verify_witness(S: StateSet, x: int, phi: ProductState, tol: float = EPS_ZERO) -> bool:
    """Check the product-state criterion for target ``x``."""
    x = S.index(x)
    ov = np.abs(_overlaps(S, phi))
    others = np.delete(ov, x)
    return bool(np.all(others <= tol) and ov[x] > tol)


def _checked(S: StateSet, x: int, phi: ProductState) -> Witness | None:
    if not verify_witness(S, x, phi, EPS_ZERO):
        return None
    p = float(abs(inner(S[x], phi)) ** 2)
    return Witness(x, phi, min(p, 1.0))


def _require_triple(S: StateSet, tol: float = 1e-9):
    if len(S) != 3:
        raise PreconditionError(f"expected exactly 3 states, got {len(S)}")
    if not linearly_independent(S.states, tol):
        raise PreconditionError(
            f"states are not linearly independent (smallest Gram eigenvalue "
            f"{min_gram_eigenvalue(S.states):.3e} <= {tol:g})"
        )


def _insert(locals_, pos: int, vec) -> list:
    out = list(locals_)
    out.insert(pos, vec)
    return out


# --- a party of dimension >= 3 ----------------------------------------------


def _highdim_attempt(S: StateSet, x: int, alice: int, theta) -> Witness | None:
    """One draw of the construction: fix ``theta`` on the other parties and
    solve the two orthogonality conditions for Alice's vector."""
    rows = [condition_on(s, [alice], theta).conj() for s in S.states]
    i, j = [k for k in range(3) if k != x]
    # parallel rows are fine as long as the target row leaves their span,
    # which the overlap test below decides
    null = nullspace_two_rows(rows[i], rows[j])
    if null.shape[1] == 0:
        return None
    # the unit nullspace element maximizing |r_x . v| is the normalized
    # projection of conj(r_x) onto the nullspace
    coeff = (rows[x] @ null).conj()
    if np.linalg.norm(coeff) <= EPS_ZERO:
        return None
    a_vec = null @ coeff
    phi = make_product(_insert(theta, alice, a_vec))
    return _checked(S, x, phi)


def _first_large_party(S: StateSet) -> int:
    for j, d in enumerate(S.signature.dims):
        if d >= 3:
            return j
    raise DimensionError(f"no party of dimension >= 3 in dims {list(S.signature.dims)}")


def witness_highdim(S: StateSet, x, rng=None, retries: int = DEFAULT_RETRIES, alice=None) -> Witness:
    """Witness for ``x`` when some party has local dimension >= 3.

    A Haar-random product state on every party but Alice turns the two
    orthogonality conditions into two linear equations in Alice's >= 3
    amplitudes; a nullspace element with nonzero overlap on the target is
    the witness. Degenerate draws are redrawn up to ``retries`` times.
    """
    x = S.index(x)
    _require_triple(S)
    alice = _first_large_party(S) if alice is None else alice
    if S.signature.dims[alice] < 3:
        raise DimensionError(f"party {alice} has dimension {S.signature.dims[alice]} < 3")
    rng = check_random_state(rng)
    other_dims = [d for j, d in enumerate(S.signature.dims) if j != alice]
    for _ in range(retries):
        w = _highdim_attempt(S, x, alice, haar_locals(other_dims, rng))
        if w is not None:
            return w
    raise SearchFailure(
        f"no witness for state {x} after {retries} random draws; "
        f"the set may be close to linearly dependent or confined to a qubit subspace"
    )


# --- two qubits -------------------------------------------------------------


def two_qubit_candidates(S: StateSet, x) -> list[Witness]:
    """Every witness the [2,2] enumeration produces for target ``x``.

    The witnesses live in the (two-dimensional) complement of the other two
    states; its product states are listed exactly, so an empty result
    certifies that ``x`` is not identifiable.
    """
    x = S.index(x)
    if S.signature.dims != (2, 2):
        raise DimensionError(f"two-qubit witness needs dims [2,2], got {list(S.signature.dims)}")
    others = [S[k] for k in range(3) if k != x]
    u, v = orthogonal_complement(others)
    plane = product_states_in_plane(u, v)
    if plane.kind is PlaneKind.ALL_PRODUCT:
        proj = project_onto(S[x].amps, (u, v))
        if np.linalg.norm(proj) <= EPS_ZERO:
            return []
        phi = make_product(split_product(proj / np.linalg.norm(proj), (2, 2)))
        w = _checked(S, x, phi)
        return [w] if w is not None else []
    found = [_checked(S, x, m) for m in plane.members]
    return sorted((w for w in found if w is not None), key=lambda w: -w.success_probability)


def witness_two_qubit(S: StateSet, x) -> Witness | None:
    """Best enumerated witness for ``x`` on two qubits, or None when none exists."""
    _require_triple(S)
    cands = two_qubit_candidates(S, x)
    return cands[0] if cands else None


# --- three or more qubits ---------------------------------------------------


def _unmerge(phi: ProductState, pos: int) -> list[np.ndarray]:
    """Split the 4-dim factor at ``pos`` back into two qubit factors."""
    a, b = split_product(phi.locals[pos], (2, 2))
    out = list(phi.locals[:pos]) + [a, b] + list(phi.locals[pos + 1:])
    return out


def _product_in_complement(avoid: list[np.ndarray], want: np.ndarray, rng, retries: int):
    """Product vector of C^2 (x) C^2 orthogonal to ``avoid`` with nonzero overlap on ``want``.

    The complement is cut into planes, first from pairs of its basis and then
    random ones, and each plane's product states are enumerated.
    """
    rows = np.vstack(avoid) if avoid else np.zeros((0, 4), dtype=complex)
    if rows.shape[0]:
        q, _ = np.linalg.qr(rows.T)
        comp = orthonormal_complement_basis(q.T)
    else:
        comp = np.eye(4, dtype=complex)
    planes = [comp[:, [a, b]] for a, b in itertools.combinations(range(comp.shape[1]), 2)]
    for _ in range(retries):
        z = np.column_stack([haar_vector(comp.shape[1], rng) for _ in range(2)])
        q, _ = np.linalg.qr(z)
        planes.append(comp @ q)
    for pl in planes:
        u, v = make_state((2, 2), pl[:, 0]), make_state((2, 2), pl[:, 1])
        res = product_states_in_plane(u, v)
        if res.kind is PlaneKind.ALL_PRODUCT:
            proj = project_onto(want, (u, v))
            if np.linalg.norm(proj) > EPS_ZERO:
                return split_product(proj / np.linalg.norm(proj), (2, 2))
            continue
        best = max(res.members, key=lambda m: abs(np.vdot(want, m.kron())))
        if abs(np.vdot(want, best.kron())) > EPS_ZERO:
            return list(best.locals)
    return None


def _multiqubit_attempt(S: StateSet, target: int, pos: int, rng, retries: int):
    """One pass of the merge-and-reduce construction; returns (index, Witness) or None."""
    merged = StateSet(tuple(merge_parties(s, pos, pos + 1) for s in S.states), S.names)
    w = witness_highdim(merged, target, rng, retries, alice=pos)
    theta_ab = w.phi.locals[pos]
    omega = [f for j, f in enumerate(w.phi.locals) if j != pos]
    if is_product_across(make_state((2, 2), theta_ab), [0], EPS_ZERO):
        found = _checked(S, target, make_product(_unmerge(w.phi, pos)))
        return (target, found) if found is not None else None

    v = [condition_on(s, [pos], omega) for s in merged.states]
    i, j = [k for k in range(3) if k != target]
    pair = np.vstack([v[i], v[j]])
    scale = max(np.linalg.norm(v[i]), np.linalg.norm(v[j]))
    sv = np.linalg.svd(pair, compute_uv=False)
    if scale <= EPS_ZERO or sv[-1] <= EPS_ZERO * max(scale, 1.0):
        # v_i, v_j parallel or zero: a product theta' orthogonal to both exists
        avoid = [vk / np.linalg.norm(vk) for vk in (v[i], v[j]) if np.linalg.norm(vk) > EPS_ZERO]
        avoid = avoid[:1]
        ab = _product_in_complement(avoid, v[target], rng, retries)
        if ab is None:
            return None
        phi = make_product(omega[:pos] + list(ab) + omega[pos:])
        found = _checked(S, target, phi)
        return (target, found) if found is not None else None

    try:
        sub = StateSet(tuple(make_state((2, 2), vk) for vk in v))
        _require_triple(sub)
    except (PreconditionError, RankError):
        return None
    for t in [target, i, j]:
        xi = witness_two_qubit(sub, t)
        if xi is None:
            continue
        phi = make_product(omega[:pos] + list(xi.phi.locals) + omega[pos:])
        found = _checked(S, t, phi)
        if found is not None:
            return (t, found)
    raise InternalContradiction(
        "no qubit-pair witness for any of the three conditioned states; numerical breakdown"
    )


def witness_multiqubit(S: StateSet, rng=None, retries: int = DEFAULT_RETRIES, target=2, pos: int = 0):
    """Some identifiable index and its witness on n >= 3 qubits.

    Parties ``pos`` and ``pos+1`` are merged into one four-dimensional party,
    the higher-dimensional construction yields ``theta_AB (x) omega``; then
    either ``theta_AB`` is already product, or conditioning the states on
    ``omega`` reduces the problem to three states of two qubits. The index
    returned need not be ``target``.
    """
    _require_triple(S)
    sig = S.signature
    if not sig.is_all_qubit or len(sig) < 3:
        raise DimensionError(f"multi-qubit witness needs >= 3 qubits, got dims {list(sig.dims)}")
    target = S.index(target)
    rng = check_random_state(rng)
    for _ in range(retries):
        try:
            got = _multiqubit_attempt(S, target, pos, rng, retries)
        except (RankError, InternalContradiction) as exc:
            logger.debug("multi-qubit attempt failed: %s", exc)
            got = None
        if got is not None:
            return got
    raise InternalContradiction(f"multi-qubit construction failed {retries} times for target {target}")


def _targeted_multiqubit(S: StateSet, target: int, rng, retries: int) -> tuple[dict, int]:
    """Random restarts of the multi-qubit pipeline aimed at ``target``.

    Cycles through the adjacent party pairs. Returns every (index -> witness)
    found along the way and the number of attempts spent.
    """
    found: dict[int, Witness] = {}
    n = len(S.signature)
    for attempt in range(retries):
        pos = attempt % (n - 1)
        try:
            got = _multiqubit_attempt(S, target, pos, rng, retries)
        except (SearchFailure, RankError, InternalContradiction):
            got = None
        if got is not None:
            idx, w = got
            found.setdefault(idx, w)
            if idx == target:
                return found, attempt + 1
    return found, retries


# --- classification ---------------------------------------------------------


def _set_verdict(per_state) -> SetVerdict:
    kinds = [v.kind for v in per_state]
    if all(k is VerdictKind.IDENTIFIABLE for k in kinds):
        return SetVerdict.DISTINGUISHABLE
    if any(k is VerdictKind.CERTIFIED_NOT for k in kinds):
        return SetVerdict.NOT_DISTINGUISHABLE
    return SetVerdict.PARTIAL


def _case(dims) -> str:
    if any(d >= 3 for d in dims):
        return "highdim"
    if len(dims) == 2:
        return "two_qubit"
    return "multi_qubit"


def classify(S: StateSet, tol: float = 1e-9, rng=None, retries: int = DEFAULT_RETRIES) -> ClassificationReport:
    """Verdict for each of three linearly independent states, and for the set.

    The set is first restricted to the local supports of its span, so a
    state set embedded in larger local spaces is treated by the case its
    actual structure belongs to. Two-qubit verdicts are exhaustive; with
    three or more qubits, targets the bounded search misses are Undecided.
    """
    seed = rng if isinstance(rng, (int, np.integer)) else None
    rng = check_random_state(rng)
    _require_triple(S, tol)
    red = reduce_to_local_supports(S)
    eff = red.reduced
    case = _case(eff.signature.dims)
    verdicts: dict[int, StateVerdict] = {}
    attempts = {}

    if case == "highdim":
        for x in range(3):
            try:
                w = witness_highdim(eff, x, rng, retries)
                verdicts[x] = StateVerdict(VerdictKind.IDENTIFIABLE, w)
            except SearchFailure as exc:
                verdicts[x] = StateVerdict(VerdictKind.UNDECIDED, note=str(exc))
    elif case == "two_qubit":
        for x in range(3):
            w = witness_two_qubit(eff, x)
            if w is None:
                verdicts[x] = StateVerdict(
                    VerdictKind.CERTIFIED_NOT,
                    note="no product state in the complement of the other two has overlap",
                )
            else:
                verdicts[x] = StateVerdict(VerdictKind.IDENTIFIABLE, w)
    else:
        found: dict[int, Witness] = {}
        idx, w = witness_multiqubit(eff, rng, retries)
        found[idx] = w
        for t in range(3):
            if t in found:
                continue
            more, spent = _targeted_multiqubit(eff, t, rng, retries)
            attempts[t] = spent
            for k, wk in more.items():
                found.setdefault(k, wk)
        for x in range(3):
            if x in found:
                verdicts[x] = StateVerdict(VerdictKind.IDENTIFIABLE, found[x])
            else:
                verdicts[x] = StateVerdict(
                    VerdictKind.UNDECIDED,
                    note=f"no witness found in {attempts.get(x, 0)} targeted restarts",
                )

    per_state = []
    for x in range(3):
        v = verdicts[x]
        if v.witness is not None and not red.is_identity:
            lifted = _checked(S, x, red.lift(v.witness.phi))
            if lifted is None:
                raise InternalContradiction(f"lifted witness for state {x} failed verification")
            v = StateVerdict(v.kind, lifted, v.note)
        per_state.append(v)
    if not any(v.identifiable for v in per_state):
        raise InternalContradiction("no identifiable state found; every triple has one")

    diagnostics = {
        "case": case,
        "tol": tol,
        "zero_threshold": EPS_ZERO,
        "retries": retries,
        "seed": seed,
        "effective_dims": list(eff.signature.dims),
        "targeted_attempts": {str(k): v for k, v in attempts.items()},
        "smallest_gram_eigenvalue": min_gram_eigenvalue(S.states),
    }
    return ClassificationReport(S.names, tuple(per_state), _set_verdict(per_state), diagnostics)


def maximize_success(
    S: StateSet,
    x,
    restarts: int = 32,
    rng=None,
    retries: int = DEFAULT_RETRIES,
    initial: Witness | None = None,
) -> Witness:
    """Best witness probability seen over randomized reruns of the constructions.

    A heuristic lower bound on what one-shot product projections achieve,
    not an optimum over LOCC protocols. On two qubits the enumeration is
    exhaustive and the best listed witness is returned.
    """
    x = S.index(x)
    _require_triple(S)
    rng = check_random_state(rng)
    red = reduce_to_local_supports(S)
    eff = red.reduced
    case = _case(eff.signature.dims)
    cands: list[Witness] = [] if initial is None else [initial]

    def keep(w):
        if w is None:
            return
        if not red.is_identity:
            w = _checked(S, x, red.lift(w.phi))
        if w is not None:
            cands.append(w)

    if case == "two_qubit":
        for w in two_qubit_candidates(eff, x):
            keep(w)
    elif case == "highdim":
        alice = _first_large_party(eff)
        other_dims = [d for j, d in enumerate(eff.signature.dims) if j != alice]
        for _ in range(max(restarts, 1)):
            w = None
            for _ in range(retries):
                w = _highdim_attempt(eff, x, alice, haar_locals(other_dims, rng))
                if w is not None:
                    break
            keep(w)
    else:
        for _ in range(max(restarts, 1)):
            more, _ = _targeted_multiqubit(eff, x, rng, retries)
            keep(more.get(x))
    if not cands:
        raise PreconditionError(f"no witness found for state {x}; it may not be identifiable")
    best = cands[0]
    for w in cands[1:]:
        if w.success_probability > best.success_probability:
            best = w
    return best
