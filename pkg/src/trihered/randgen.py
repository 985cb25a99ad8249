"""Seeded random generators used by property runs and the verify commands.

Per-trial generators derive from the master seed through SeedSequence
spawn keys, so reports are reproducible and trials are independent.
"""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .linalg import Matrix
from .quiver import (
    ExtClass,
    Quiver,
    RepMorphism,
    Representation,
    hom_ext_presentation,
)

__all__ = [
    "child_rng",
    "random_rep",
    "random_morphism",
    "random_ext_class",
    "random_complex",
    "random_chain_map",
    "random_formal_object",
    "random_formal_morphism",
]


def child_rng(seed: int, index: int) -> np.random.Generator:
    """Fixed splitting rule: child i of master seed s."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),)))


def random_rep(q: Quiver, rng: np.random.Generator, max_dim: int = 3) -> Representation:
    dims = [int(rng.integers(0, max_dim + 1)) for _ in range(q.n)]
    mats = {}
    for a in q.arrows:
        mats[a.label] = Matrix(q.p, rng.integers(0, q.p, size=(dims[a.tgt], dims[a.src])))
    return Representation(q, dims, mats)


def random_morphism(x: Representation, y: Representation, rng: np.random.Generator) -> RepMorphism:
    he = hom_ext_presentation(x, y)
    if he.hom_dim == 0:
        return RepMorphism.zero(x, y)
    coeffs = rng.integers(0, x.quiver.p, size=(he.hom_dim, 1))
    return he.hom_from_coords(Matrix(x.quiver.p, coeffs))


def random_ext_class(a: Representation, b: Representation, rng: np.random.Generator) -> ExtClass:
    he = hom_ext_presentation(a, b)
    coords = rng.integers(0, a.quiver.p, size=(he.ext_dim, 1)) if he.ext_dim else np.zeros((0, 1), dtype=np.int64)
    return ExtClass(a, b, Matrix(a.quiver.p, coords))


def random_complex(
    q: Quiver,
    rng: np.random.Generator,
    max_len: int = 3,
    max_dim: int = 2,
    low: Optional[int] = None,
):
    """Random bounded complex: terms first, then differentials drawn from
    the subspace killing the previous one (so d.d = 0 by construction)."""
    from .complexes import Complex

    length = int(rng.integers(1, max_len + 1))
    lo = int(rng.integers(-2, 2)) if low is None else low
    degrees = list(range(lo, lo + length))
    terms = {n: random_rep(q, rng, max_dim) for n in degrees}
    diffs = {}
    prev = None
    for n in degrees[:-1]:
        x, y = terms[n], terms[n + 1]
        he = hom_ext_presentation(x, y)
        if he.hom_dim == 0:
            d = RepMorphism.zero(x, y)
        elif prev is None:
            d = he.hom_from_coords(Matrix(q.p, rng.integers(0, q.p, size=(he.hom_dim, 1))))
        else:
            # coordinates of maps with d_prev-composite zero
            from .linalg import kernel_basis

            cols = []
            for j in range(he.hom_dim):
                comp = he.hom_basis[j] @ prev
                cols.append(comp.vec())
            stacked = cols[0]
            for c in cols[1:]:
                stacked = stacked.hstack(c)
            ker = kernel_basis(stacked)
            if ker.cols == 0:
                d = RepMorphism.zero(x, y)
            else:
                w = ker @ Matrix(q.p, rng.integers(0, q.p, size=(ker.cols, 1)))
                d = he.hom_from_coords(w)
        diffs[n] = d
        prev = d
    return Complex(q, terms, diffs)


def random_chain_map(c, d, rng: np.random.Generator):
    """Random chain map c -> d (possibly zero when the space is trivial)."""
    from .complexes import chain_map_space, zero_chain_map

    basis = chain_map_space(c, d)

    if not basis:
        return zero_chain_map(c, d)
    coeffs = rng.integers(0, c.quiver.p, size=len(basis))
    out = zero_chain_map(c, d)
    for w, f in zip(coeffs, basis):
        out = out + f.scale(int(w))
    return out


def random_formal_object(q: Quiver, rng: np.random.Generator, max_dim: int = 2, span: Tuple[int, int] = (-1, 1)):
    from .formal import FormalObject

    comps = {}
    for n in range(span[0], span[1] + 1):
        if rng.integers(0, 2):
            r = random_rep(q, rng, max_dim)
            if not r.is_zero():
                comps[n] = r
    return FormalObject(q, comps)


def random_formal_morphism(x, y, rng: np.random.Generator):
    from .formal import FormalMorphism

    q = x.quiver
    hom = {}
    ext = {}
    for n, xn in x.components.items():
        yn = y.components.get(n)
        if yn is not None:
            hom[n] = random_morphism(xn, yn, rng)
        ym = y.components.get(n - 1)
        if ym is not None:
            e = random_ext_class(xn, ym, rng)
            if not e.is_zero():
                ext[n] = e
    return FormalMorphism(x, y, hom, ext)
