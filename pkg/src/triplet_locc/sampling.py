"""Seeded random states and triples used by the searches and the test suites."""
from __future__ import annotations

import numbers

import numpy as np

from .statecore import (
    MultipartiteState,
    ProductState,
    StateSet,
    as_signature,
    make_product,
    make_state,
)


def check_random_state(seed) -> np.random.Generator:
    """Turn None, an int or a Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, numbers.Integral):
        return np.random.default_rng(seed)
    raise TypeError(f"cannot build a random generator from {seed!r}")


def haar_vector(dim: int, rng) -> np.ndarray:
    rng = check_random_state(rng)
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def haar_locals(dims, rng) -> list[np.ndarray]:
    """Independent Haar-random unit vectors, one per entry of ``dims``."""
    rng = check_random_state(rng)
    return [haar_vector(d, rng) for d in dims]


def random_state(signature, rng) -> MultipartiteState:
    sig = as_signature(signature)
    return make_state(sig, haar_vector(sig.total, rng))


def random_product_state(signature, rng) -> ProductState:
    sig = as_signature(signature)
    return make_product(haar_locals(sig.dims, rng))


def random_unitary(dim: int, rng) -> np.ndarray:
    rng = check_random_state(rng)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_triple(signature, rng, kind: str = "haar") -> StateSet:
    """Random triple of states.

    kind:
      ``haar``      three Haar-random states (entangled with probability one)
      ``product``   three Haar-random product states
      ``two_product`` two product states and one Haar-random state
      ``two_entangled`` [2,2] only: two states in span{|00>,|11>} and |01>,
                    rotated by a random local unitary; only the product
                    member is identifiable
    """
    sig = as_signature(signature)
    rng = check_random_state(rng)
    if kind == "haar":
        amps = [haar_vector(sig.total, rng) for _ in range(3)]
    elif kind == "product":
        amps = [random_product_state(sig, rng).kron() for _ in range(3)]
    elif kind == "two_product":
        amps = [random_product_state(sig, rng).kron() for _ in range(2)]
        amps.append(haar_vector(sig.total, rng))
    elif kind == "two_entangled":
        if sig.dims != (2, 2):
            raise ValueError("two_entangled triples are defined on [2,2] only")
        a, b = haar_vector(2, rng), haar_vector(2, rng)
        amps = [
            np.array([a[0], 0, 0, a[1]]),
            np.array([b[0], 0, 0, b[1]]),
            np.array([0, 1, 0, 0], dtype=complex),
        ]
        u = np.kron(random_unitary(2, rng), random_unitary(2, rng))
        amps = [u @ v for v in amps]
    else:
        raise ValueError(f"unknown triple kind {kind!r}")
    return StateSet(tuple(make_state(sig, v) for v in amps))
