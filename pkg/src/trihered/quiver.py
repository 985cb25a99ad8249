"""The hereditary abelian category of finite-dimensional representations
of a finite acyclic quiver over F_p.

Objects carry one matrix per arrow; morphisms are vertexwise matrices
satisfying the commuting-square constraints.  Hom and Ext^1 are computed
from the two-term presentation

    Phi : (+)_i Hom(X_i, Y_i) -> (+)_{a: i->j} Hom(X_i, Y_j),
    (phi_i) |-> (phi_j X_a - Y_a phi_i)

whose kernel is Hom(X, Y) and whose cokernel is Ext^1(X, Y).  The cokernel
chart (RREF free coordinates) makes extension classes canonical vectors,
so equality of classes and all transports are exact and reproducible.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .linalg import (
    Matrix,
    QuotientChart,
    charpoly,
    default_prime,
    image_basis,
    inverse,
    kernel_basis,
    poly_roots,
    rank,
    solve,
)

__all__ = [
    "Arrow",
    "Quiver",
    "Representation",
    "RepMorphism",
    "ExtClass",
    "ShortExact",
    "HomExt",
    "hom_ext_presentation",
    "factorize",
    "extension_middle",
    "ses_class",
    "transport_ext",
    "transport_matrix",
    "decompose_rep",
    "indecomposables",
    "indec_labels",
    "direct_sum_reps",
    "euler_form",
    "is_projective",
    "NotDynkinError",
]


class Arrow(NamedTuple):
    label: str
    src: int
    tgt: int


class NotDynkinError(ValueError):
    """Raised when an enumeration needs a Dynkin (ADE) underlying graph."""


class Quiver:
    """Finite acyclic quiver with labelled arrows and a fixed prime p."""

    def __init__(self, n: int, arrows: Iterable[Tuple[str, int, int]], p: Optional[int] = None):
        self.n = int(n)
        self.p = default_prime() if p is None else int(p)
        if self.p < 3 or not _is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        self.arrows: Tuple[Arrow, ...] = tuple(Arrow(str(l), int(s), int(t)) for l, s, t in arrows)
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise ValueError("arrow labels must be unique")
        for a in self.arrows:
            if not (0 <= a.src < self.n and 0 <= a.tgt < self.n):
                raise ValueError(f"arrow {a.label} endpoints out of range")
        self.arrow_by_label = {a.label: a for a in self.arrows}
        self.topological = self._topological_order()
        self._key = (self.p, self.n, self.arrows)

    def _topological_order(self) -> Tuple[int, ...]:
        indeg = [0] * self.n
        for a in self.arrows:
            indeg[a.tgt] += 1
        order: List[int] = []
        ready = sorted(v for v in range(self.n) if indeg[v] == 0)
        while ready:
            v = ready.pop(0)
            order.append(v)
            for a in self.arrows:
                if a.src == v:
                    indeg[a.tgt] -= 1
                    if indeg[a.tgt] == 0:
                        ready.append(a.tgt)
            ready.sort()
        if len(order) != self.n:
            raise ValueError("directed cycle detected")
        return tuple(order)

    def __eq__(self, other) -> bool:
        return isinstance(other, Quiver) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Quiver(n={self.n}, arrows={[tuple(a) for a in self.arrows]}, p={self.p})"

    # -- structure ----------------------------------------------------

    def arrows_from(self, v: int) -> List[Arrow]:
        return [a for a in self.arrows if a.src == v]

    def arrows_into(self, v: int) -> List[Arrow]:
        return [a for a in self.arrows if a.tgt == v]

    def reversed_at(self, v: int) -> "Quiver":
        flipped = [
            (a.label, a.tgt, a.src) if v in (a.src, a.tgt) else tuple(a) for a in self.arrows
        ]
        return Quiver(self.n, flipped, self.p)

    def undirected_components(self) -> List[List[int]]:
        adj = [set() for _ in range(self.n)]
        for a in self.arrows:
            adj[a.src].add(a.tgt)
            adj[a.tgt].add(a.src)
        seen = [False] * self.n
        comps = []
        for v in range(self.n):
            if seen[v]:
                continue
            comp, stack = [], [v]
            seen[v] = True
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_dynkin(self) -> bool:
        """True when every connected component has ADE underlying graph."""
        deg = [0] * self.n
        seen_pairs = set()
        for a in self.arrows:
            if a.src == a.tgt:
                return False
            pair = (min(a.src, a.tgt), max(a.src, a.tgt))
            if pair in seen_pairs:
                return False  # parallel edges (Kronecker-type)
            seen_pairs.add(pair)
            deg[a.src] += 1
            deg[a.tgt] += 1
        for comp in self.undirected_components():
            edges = sum(1 for a in self.arrows if a.src in comp)
            if edges != len(comp) - 1:
                return False  # not a tree
            branch = [v for v in comp if deg[v] >= 3]
            if any(deg[v] > 3 for v in comp) or len(branch) > 1:
                return False
            if branch:
                arms = sorted(_arm_lengths(self, branch[0]))
                if len(arms) != 3:
                    return False
                q, r, s = arms
                if not (q == 1 and (r == 1 or (r == 2 and s in (2, 3, 4)))):
                    return False
        return True

    # -- paths and canonical representations ----------------------------

    def paths(self, src: int, tgt: int) -> List[Tuple[str, ...]]:
        """All directed paths src -> tgt as arrow-label tuples, sorted by
        (length, labels).  The empty tuple is the trivial path (src == tgt)."""
        found: List[Tuple[str, ...]] = []

        def walk(v: int, acc: Tuple[str, ...]):
            if v == tgt:
                found.append(acc)
            for a in self.arrows_from(v):
                walk(a.tgt, acc + (a.label,))

        walk(src, ())
        found.sort(key=lambda q: (len(q), q))
        return found

    def zero_rep(self) -> "Representation":
        return Representation(self, [0] * self.n, {})

    def simple(self, v: int) -> "Representation":
        dims = [0] * self.n
        dims[v] = 1
        return Representation(self, dims, {})

    def projective(self, v: int) -> "Representation":
        """Indecomposable projective at v via the path basis."""
        bases = [self.paths(v, j) for j in range(self.n)]
        dims = [len(b) for b in bases]
        mats = {}
        for a in self.arrows:
            m = np.zeros((dims[a.tgt], dims[a.src]), dtype=np.int64)
            tgt_index = {q: k for k, q in enumerate(bases[a.tgt])}
            for k, q in enumerate(bases[a.src]):
                m[tgt_index[q + (a.label,)], k] = 1
            mats[a.label] = Matrix(self.p, m)
        return Representation(self, dims, mats)

    def injective(self, v: int) -> "Representation":
        """Indecomposable injective at v: basis = paths j -> v."""
        bases = [self.paths(j, v) for j in range(self.n)]
        dims = [len(b) for b in bases]
        mats = {}
        for a in self.arrows:
            m = np.zeros((dims[a.tgt], dims[a.src]), dtype=np.int64)
            tgt_index = {q: k for k, q in enumerate(bases[a.tgt])}
            for k, q in enumerate(bases[a.src]):
                if q and q[0] == a.label:
                    m[tgt_index[q[1:]], k] = 1
            mats[a.label] = Matrix(self.p, m)
        return Representation(self, dims, mats)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _arm_lengths(q: Quiver, center: int) -> List[int]:
    adj = [set() for _ in range(q.n)]
    for a in q.arrows:
        adj[a.src].add(a.tgt)
        adj[a.tgt].add(a.src)
    arms = []
    for start in adj[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return arms


class Representation:
    """A representation of a quiver: dims per vertex, one matrix per arrow."""

    __slots__ = ("quiver", "dims", "mats", "_key", "_hash")

    def __init__(self, quiver: Quiver, dims: Sequence[int], mats: Dict[str, Matrix]):
        self.quiver = quiver
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != quiver.n or any(d < 0 for d in self.dims):
            raise ValueError("bad dimension vector")
        p = quiver.p
        full: Dict[str, Matrix] = {}
        for a in quiver.arrows:
            m = mats.get(a.label)
            if m is None:
                m = Matrix.zeros(p, self.dims[a.tgt], self.dims[a.src])
            if m.shape != (self.dims[a.tgt], self.dims[a.src]):
                raise ValueError(f"arrow {a.label}: matrix shape {m.shape} does not match dims")
            if m.p != p:
                raise ValueError("prime mismatch")
            full[a.label] = m
        self.mats = full
        self._key = (quiver._key, self.dims, tuple(full[a.label].a.tobytes() for a in quiver.arrows))
        self._hash = hash(self._key)

    def mat(self, label: str) -> Matrix:
        return self.mats[label]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Representation) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Rep(dims={self.dims})"

    def path_action(self, labels: Sequence[str]) -> Matrix:
        """Composite matrix of a path given as arrow labels (first applied first)."""
        q = self.quiver
        if not labels:
            raise ValueError("path_action needs at least one arrow")
        m = self.mats[labels[0]]
        for lab in labels[1:]:
            m = self.mats[lab] @ m
        return m


class RepMorphism:
    """Vertexwise matrices phi_i with phi_j X_a = Y_a phi_i for every arrow."""

    __slots__ = ("source", "target", "phi")

    def __init__(self, source: Representation, target: Representation, phi: Sequence[Matrix], check: bool = True):
        if source.quiver != target.quiver:
            raise ValueError("quiver mismatch")
        self.source = source
        self.target = target
        self.phi = tuple(phi)
        if len(self.phi) != source.quiver.n:
            raise ValueError("one matrix per vertex required")
        for i, m in enumerate(self.phi):
            if m.shape != (target.dims[i], source.dims[i]):
                raise ValueError(f"vertex {i}: shape {m.shape}, expected {(target.dims[i], source.dims[i])}")
        if check:
            for a in source.quiver.arrows:
                lhs = self.phi[a.tgt] @ source.mats[a.label]
                rhs = target.mats[a.label] @ self.phi[a.src]
                if not lhs == rhs:
                    raise ValueError(f"square at arrow {a.label} does not commute")

    @staticmethod
    def zero(source: Representation, target: Representation) -> "RepMorphism":
        p = source.quiver.p
        return RepMorphism(
            source, target, [Matrix.zeros(p, target.dims[i], source.dims[i]) for i in range(source.quiver.n)], check=False
        )

    @staticmethod
    def identity(x: Representation) -> "RepMorphism":
        p = x.quiver.p
        return RepMorphism(x, x, [Matrix.identity(p, d) for d in x.dims], check=False)

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        assert other.target == self.source, "composition endpoint mismatch"
        return RepMorphism(other.source, self.target, [a @ b for a, b in zip(self.phi, other.phi)], check=False)

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        assert self.source == other.source and self.target == other.target
        return RepMorphism(self.source, self.target, [a + b for a, b in zip(self.phi, other.phi)], check=False)

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        assert self.source == other.source and self.target == other.target
        return RepMorphism(self.source, self.target, [a - b for a, b in zip(self.phi, other.phi)], check=False)

    def __neg__(self) -> "RepMorphism":
        return RepMorphism(self.source, self.target, [-a for a in self.phi], check=False)

    def scale(self, c: int) -> "RepMorphism":
        return RepMorphism(self.source, self.target, [a.scale(c) for a in self.phi], check=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.phi)

    def is_iso(self) -> bool:
        return self.inverse() is not None

    def inverse(self) -> Optional["RepMorphism"]:
        if self.source.dims != self.target.dims:
            return None
        invs = []
        for m in self.phi:
            mi = inverse(m)
            if mi is None:
                return None
            invs.append(mi)
        return RepMorphism(self.target, self.source, invs, check=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RepMorphism)
            and self.source == other.source
            and self.target == other.target
            and all(a == b for a, b in zip(self.phi, other.phi))
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.phi))

    def vec(self) -> Matrix:
        """Stacked row-major flattening over all vertices (column vector)."""
        p = self.source.quiver.p
        parts = [m.a.reshape(-1) for m in self.phi]
        if parts:
            v = np.concatenate(parts)
        else:
            v = np.zeros(0, dtype=np.int64)
        return Matrix(p, v.reshape(-1, 1))

    def __repr__(self) -> str:
        return f"RepMorphism({self.source.dims} -> {self.target.dims})"


def morphism_from_vec(x: Representation, y: Representation, v: Matrix) -> RepMorphism:
    q = x.quiver
    mats = []
    off = 0
    for i in range(q.n):
        r, c = y.dims[i], x.dims[i]
        block = v.a[off : off + r * c, 0].reshape(r, c)
        mats.append(Matrix(q.p, block))
        off += r * c
    return RepMorphism(x, y, mats, check=False)


# ---------------------------------------------------------------------------
# Hom / Ext presentation
# ---------------------------------------------------------------------------


class HomExt:
    """Presentation of Hom(X, Y) and Ext^1(X, Y) with canonical charts.

    hom_basis: RepMorphisms spanning Hom (kernel_basis convention).
    ext chart: coordinates in the cokernel of Phi; raw cocycles are the
    per-arrow matrices e_a in Hom(X_{s(a)}, Y_{t(a)}).
    """

    __slots__ = ("X", "Y", "hom_basis", "hom_dim", "ext_dim", "_chart", "_hom_mat", "_arrow_slices", "_d1")

    def __init__(self, X: Representation, Y: Representation):
        if X.quiver != Y.quiver:
            raise ValueError("quiver mismatch")
        q = X.quiver
        p = q.p
        self.X, self.Y = X, Y
        d0 = sum(X.dims[i] * Y.dims[i] for i in range(q.n))
        slices = {}
        off = 0
        for a in q.arrows:
            size = X.dims[a.src] * Y.dims[a.tgt]
            slices[a.label] = (off, off + size, Y.dims[a.tgt], X.dims[a.src])
            off += size
        d1 = off
        self._arrow_slices = slices
        self._d1 = d1

        phi = np.zeros((d1, d0), dtype=np.int64)
        col_off = [0] * q.n
        acc = 0
        for i in range(q.n):
            col_off[i] = acc
            acc += X.dims[i] * Y.dims[i]
        for a in q.arrows:
            r0, r1, _, _ = slices[a.label]
            # phi_{t(a)} X_a  : (I_{Y_t} kron X_a^T) acting on vec(phi_{t(a)})
            blk = np.kron(np.eye(Y.dims[a.tgt], dtype=np.int64), X.mats[a.label].a.T)
            c0 = col_off[a.tgt]
            phi[r0:r1, c0 : c0 + blk.shape[1]] += blk
            # -(Y_a phi_{s(a)}) : (Y_a kron I_{X_s})
            blk2 = np.kron(Y.mats[a.label].a, np.eye(X.dims[a.src], dtype=np.int64))
            c0 = col_off[a.src]
            phi[r0:r1, c0 : c0 + blk2.shape[1]] -= blk2
        phi_m = Matrix(p, phi)

        ker = kernel_basis(phi_m)
        self.hom_dim = ker.cols
        self.hom_basis = tuple(morphism_from_vec(X, Y, ker.column(j)) for j in range(ker.cols))
        self._hom_mat = ker  # d0 x hom_dim
        self._chart = QuotientChart(image_basis(phi_m))
        self.ext_dim = self._chart.dim

    # raw cocycles <-> per-arrow dicts

    def raw_to_vec(self, raw: Dict[str, Matrix]) -> Matrix:
        p = self.X.quiver.p
        v = np.zeros((self._d1, 1), dtype=np.int64)
        for lab, (r0, r1, rows, cols) in self._arrow_slices.items():
            m = raw.get(lab)
            if m is not None:
                assert m.shape == (rows, cols)
                v[r0:r1, 0] = m.a.reshape(-1)
        return Matrix(p, v)

    def vec_to_raw(self, v: Matrix) -> Dict[str, Matrix]:
        p = self.X.quiver.p
        out = {}
        for lab, (r0, r1, rows, cols) in self._arrow_slices.items():
            out[lab] = Matrix(p, v.a[r0:r1, 0].reshape(rows, cols))
        return out

    def ext_coords(self, raw: Dict[str, Matrix]) -> Matrix:
        return self._chart.reduce(self.raw_to_vec(raw))

    def ext_rep(self, coords: Matrix) -> Dict[str, Matrix]:
        return self.vec_to_raw(self._chart.section(coords))

    def hom_coords(self, f: RepMorphism) -> Matrix:
        """Coordinates of f in the hom basis (raises if not in the space)."""
        sol = solve(self._hom_mat, f.vec())
        if sol is None:
            raise ValueError("morphism does not lie in the hom space")
        return sol

    def hom_from_coords(self, c: Matrix) -> RepMorphism:
        return morphism_from_vec(self.X, self.Y, self._hom_mat @ c)


_HOMEXT_CACHE: Dict[Tuple, HomExt] = {}


def hom_ext_presentation(X: Representation, Y: Representation) -> HomExt:
    key = (X._key, Y._key)
    he = _HOMEXT_CACHE.get(key)
    if he is None:
        he = HomExt(X, Y)
        _HOMEXT_CACHE[key] = he
    return he


def hom_dim(X: Representation, Y: Representation) -> int:
    return hom_ext_presentation(X, Y).hom_dim


def ext_dim(X: Representation, Y: Representation) -> int:
    return hom_ext_presentation(X, Y).ext_dim


class ExtClass:
    """A class in Ext^1(A, B), i.e. of sequences 0 -> B -> E -> A -> 0,
    as a coordinate vector in the canonical cokernel chart."""

    __slots__ = ("A", "B", "coords")

    def __init__(self, A: Representation, B: Representation, coords: Matrix):
        self.A = A
        self.B = B
        he = hom_ext_presentation(A, B)
        if coords.shape != (he.ext_dim, 1):
            raise ValueError(f"coords shape {coords.shape}, chart dim {he.ext_dim}")
        self.coords = coords

    @staticmethod
    def zero(A: Representation, B: Representation) -> "ExtClass":
        he = hom_ext_presentation(A, B)
        return ExtClass(A, B, Matrix.zeros(A.quiver.p, he.ext_dim, 1))

    @staticmethod
    def from_raw(A: Representation, B: Representation, raw: Dict[str, Matrix]) -> "ExtClass":
        he = hom_ext_presentation(A, B)
        return ExtClass(A, B, he.ext_coords(raw))

    def raw(self) -> Dict[str, Matrix]:
        return hom_ext_presentation(self.A, self.B).ext_rep(self.coords)

    def is_zero(self) -> bool:
        return self.coords.is_zero()

    def __add__(self, other: "ExtClass") -> "ExtClass":
        assert self.A == other.A and self.B == other.B
        return ExtClass(self.A, self.B, self.coords + other.coords)

    def __sub__(self, other: "ExtClass") -> "ExtClass":
        assert self.A == other.A and self.B == other.B
        return ExtClass(self.A, self.B, self.coords - other.coords)

    def __neg__(self) -> "ExtClass":
        return ExtClass(self.A, self.B, -self.coords)

    def scale(self, c: int) -> "ExtClass":
        return ExtClass(self.A, self.B, self.coords.scale(c))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtClass)
            and self.A == other.A
            and self.B == other.B
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return hash((self.A, self.B, self.coords))

    def __repr__(self) -> str:
        return f"ExtClass(A={self.A.dims}, B={self.B.dims}, coords={self.coords.a.reshape(-1).tolist()})"


class ShortExact:
    """A short exact sequence 0 -> B -(i)-> E -(p)-> A -> 0, verified."""

    __slots__ = ("i", "p")

    def __init__(self, i: RepMorphism, p: RepMorphism):
        if i.target != p.source:
            raise ValueError("middle terms disagree")
        if not (p @ i).is_zero():
            raise ValueError("composite p.i is not zero")
        q = i.source.quiver
        for v in range(q.n):
            if kernel_basis(i.phi[v]).cols != 0:
                raise ValueError("i is not injective")
            if rank(p.phi[v]) != p.target.dims[v]:
                raise ValueError("p is not surjective")
            if i.source.dims[v] + p.target.dims[v] != i.target.dims[v]:
                raise ValueError("middle dimension mismatch")
        self.i = i
        self.p = p

    @property
    def B(self) -> Representation:
        return self.i.source

    @property
    def E(self) -> Representation:
        return self.i.target

    @property
    def A(self) -> Representation:
        return self.p.target


def extension_middle(e: ExtClass) -> ShortExact:
    """Middle term of a class: E_i = B_i (+) A_i, arrows [[B_a, e_a], [0, A_a]]."""
    A, B = e.A, e.B
    q = A.quiver
    raw = e.raw()
    dims = [B.dims[i] + A.dims[i] for i in range(q.n)]
    mats = {}
    for a in q.arrows:
        mats[a.label] = Matrix.block(
            [
                [B.mats[a.label], raw[a.label]],
                [Matrix.zeros(q.p, A.dims[a.tgt], B.dims[a.src]), A.mats[a.label]],
            ]
        )
    E = Representation(q, dims, mats)
    i = RepMorphism(
        B,
        E,
        [
            Matrix.block([[Matrix.identity(q.p, B.dims[v])], [Matrix.zeros(q.p, A.dims[v], B.dims[v])]])
            for v in range(q.n)
        ],
        check=False,
    )
    pr = RepMorphism(
        E,
        A,
        [
            Matrix.block([[Matrix.zeros(q.p, A.dims[v], B.dims[v]), Matrix.identity(q.p, A.dims[v])]])
            for v in range(q.n)
        ],
        check=False,
    )
    return ShortExact(i, pr)


def ses_class(s: ShortExact) -> ExtClass:
    """Class of a short exact sequence in the canonical chart.

    Choose vertexwise sections of p (deterministic solve), read the arrow
    defect through i.  Changing the section changes the cocycle by a
    coboundary, so the chart coordinates are well defined.
    """
    A, B, E = s.A, s.B, s.E
    q = A.quiver
    sec = []
    for v in range(q.n):
        sv = solve(s.p.phi[v], Matrix.identity(q.p, A.dims[v]))
        assert sv is not None, "section of an epi must exist"
        sec.append(sv)
    raw = {}
    for a in q.arrows:
        defect = E.mats[a.label] @ sec[a.src] - sec[a.tgt] @ A.mats[a.label]
        ea = solve(s.i.phi[a.tgt], defect)
        assert ea is not None, "defect must land in the image of i"
        raw[a.label] = ea
    return ExtClass.from_raw(A, B, raw)


def transport_ext(
    e: ExtClass,
    pre: Optional[RepMorphism] = None,
    post: Optional[RepMorphism] = None,
) -> ExtClass:
    """Pullback along pre: A' -> A and/or pushout along post: B -> B'."""
    A2, B2 = e.A, e.B
    if pre is not None:
        if pre.target != e.A:
            raise ValueError("pre endpoint mismatch")
        A2 = pre.source
    if post is not None:
        if post.source != e.B:
            raise ValueError("post endpoint mismatch")
        B2 = post.target
    raw = e.raw()
    q = e.A.quiver
    out = {}
    for a in q.arrows:
        m = raw[a.label]
        if pre is not None:
            m = m @ pre.phi[a.src]
        if post is not None:
            m = post.phi[a.tgt] @ m
        out[a.label] = m
    return ExtClass.from_raw(A2, B2, out)


def transport_matrix(
    A: Representation,
    B: Representation,
    pre: Optional[RepMorphism] = None,
    post: Optional[RepMorphism] = None,
) -> Matrix:
    """Matrix of transport_ext(-, pre, post) on chart coordinates."""
    he = hom_ext_presentation(A, B)
    A2 = pre.source if pre is not None else A
    B2 = post.target if post is not None else B
    he2 = hom_ext_presentation(A2, B2)
    p = A.quiver.p
    cols = []
    for j in range(he.ext_dim):
        unit = Matrix(p, np.eye(he.ext_dim, dtype=np.int64)[:, j : j + 1]) if he.ext_dim else Matrix.zeros(p, 0, 1)
        img = transport_ext(ExtClass(A, B, unit), pre=pre, post=post)
        cols.append(img.coords)
    if not cols:
        return Matrix.zeros(p, he2.ext_dim, 0)
    out = cols[0]
    for c in cols[1:]:
        out = out.hstack(c)
    return out


# ---------------------------------------------------------------------------
# Kernels, images, cokernels
# ---------------------------------------------------------------------------


def subrep_from_bases(X: Representation, bases: Sequence[Matrix]) -> Tuple[Representation, RepMorphism]:
    """Subrepresentation spanned by the given vertexwise column bases.

    The spans must be arrow-stable; arrow matrices are solved for.
    """
    q = X.quiver
    dims = [b.cols for b in bases]
    mats = {}
    for a in q.arrows:
        rhs = X.mats[a.label] @ bases[a.src]
        m = solve(bases[a.tgt], rhs)
        assert m is not None, f"span not stable under arrow {a.label}"
        mats[a.label] = m
    S = Representation(q, dims, mats)
    inc = RepMorphism(S, X, list(bases))
    return S, inc


def kernel_subrep(f: RepMorphism) -> Tuple[Representation, RepMorphism]:
    bases = [kernel_basis(m) for m in f.phi]
    return subrep_from_bases(f.source, bases)


def image_subrep(f: RepMorphism) -> Tuple[Representation, RepMorphism]:
    bases = [image_basis(m) for m in f.phi]
    return subrep_from_bases(f.target, bases)


def cokernel_quotient(f: RepMorphism) -> Tuple[Representation, RepMorphism]:
    """Quotient of target(f) by the image of f, with the projection map."""
    q = f.source.quiver
    charts = [QuotientChart(image_basis(m)) for m in f.phi]
    dims = [ch.dim for ch in charts]
    secs = [ch.section_matrix() for ch in charts]
    mats = {}
    for a in q.arrows:
        mats[a.label] = charts[a.tgt].reduce(f.target.mats[a.label] @ secs[a.src])
    C = Representation(q, dims, mats)
    proj = RepMorphism(
        f.target, C, [charts[v].reduce(Matrix.identity(q.p, f.target.dims[v])) for v in range(q.n)]
    )
    return C, proj


class Factorization(NamedTuple):
    kernel: RepMorphism  # K -> X
    coimage: RepMorphism  # X -> I (epi)
    image: RepMorphism  # I -> Y (mono)
    cokernel: RepMorphism  # Y -> C


def factorize(f: RepMorphism) -> Factorization:
    """Kernel, image factorization f = image . coimage, and cokernel."""
    _, k = kernel_subrep(f)
    I, m = image_subrep(f)
    q = f.source.quiver
    epi_mats = []
    for v in range(q.n):
        e = solve(m.phi[v], f.phi[v])
        assert e is not None
        epi_mats.append(e)
    e = RepMorphism(f.source, I, epi_mats)
    _, c = cokernel_quotient(f)
    return Factorization(k, e, m, c)


def pushout_extension(j: RepMorphism, xi: RepMorphism) -> ShortExact:
    """Pushout of 0 -> U -(j)-> Z -> M -> 0 along xi: U -> N.

    Returns 0 -> N -> E -> M -> 0 where M = coker(j); j must be injective.
    """
    assert j.source == xi.source
    U, Z, N = j.source, j.target, xi.target
    q = U.quiver
    NZ, incs, _ = direct_sum_reps([N, Z])
    incN = incs[0]
    span = RepMorphism(
        U, NZ, [Matrix.block([[xi.phi[v]], [-j.phi[v]]]) for v in range(q.n)], check=False
    )
    E, quot = cokernel_quotient(span)
    a = quot @ incN  # N -> E
    # b: E -> M induced by (0, coker j) on N (+) Z
    M, cj = cokernel_quotient(j)
    onNZ = RepMorphism(
        NZ,
        M,
        [Matrix.block([[Matrix.zeros(q.p, M.dims[v], N.dims[v]), cj.phi[v]]]) for v in range(q.n)],
        check=False,
    )
    b_mats = []
    for v in range(q.n):
        bv = solve(quot.phi[v].T, onNZ.phi[v].T)
        assert bv is not None, "pushout projection must factor through the quotient"
        b_mats.append(bv.T)
    b = RepMorphism(E, M, b_mats)
    return ShortExact(a, b)


def direct_sum_reps(
    parts: Sequence[Representation],
) -> Tuple[Representation, List[RepMorphism], List[RepMorphism]]:
    """Block-diagonal direct sum with canonical inclusions and projections."""
    assert parts, "need at least one summand"
    q = parts[0].quiver
    p = q.p
    dims = [sum(x.dims[v] for x in parts) for v in range(q.n)]
    mats = {}
    for a in q.arrows:
        blocks = []
        for r, xr in enumerate(parts):
            row = []
            for c, xc in enumerate(parts):
                if r == c:
                    row.append(xr.mats[a.label])
                else:
                    row.append(Matrix.zeros(p, xr.dims[a.tgt], xc.dims[a.src]))
            blocks.append(row)
        mats[a.label] = Matrix.block(blocks)
    S = Representation(q, dims, mats)
    incs, projs = [], []
    for k, xk in enumerate(parts):
        inc_mats, proj_mats = [], []
        for v in range(q.n):
            before = sum(x.dims[v] for x in parts[:k])
            after = dims[v] - before - xk.dims[v]
            inc_mats.append(
                Matrix.block(
                    [
                        [Matrix.zeros(p, before, xk.dims[v])],
                        [Matrix.identity(p, xk.dims[v])],
                        [Matrix.zeros(p, after, xk.dims[v])],
                    ]
                )
            )
            proj_mats.append(
                Matrix.block(
                    [
                        [
                            Matrix.zeros(p, xk.dims[v], before),
                            Matrix.identity(p, xk.dims[v]),
                            Matrix.zeros(p, xk.dims[v], after),
                        ]
                    ]
                )
            )
        incs.append(RepMorphism(xk, S, inc_mats, check=False))
        projs.append(RepMorphism(S, xk, proj_mats, check=False))
    return S, incs, projs


def euler_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    """<d, e> = sum d_i e_i - sum_{a: i->j} d_i e_j (an integer, not mod p)."""
    val = sum(int(d[i]) * int(e[i]) for i in range(q.n))
    for a in q.arrows:
        val -= int(d[a.src]) * int(e[a.tgt])
    return val


def is_projective(m: Representation) -> bool:
    q = m.quiver
    return all(ext_dim(m, q.simple(v)) == 0 for v in range(q.n))


# ---------------------------------------------------------------------------
# Decomposition into indecomposables (idempotent splitting)
# ---------------------------------------------------------------------------


class Summand(NamedTuple):
    rep: Representation
    include: RepMorphism  # summand -> X
    project: RepMorphism  # X -> summand


def _fitting_split(x: Representation, psi: RepMorphism) -> Optional[Tuple[Summand, Summand]]:
    """Split X = ker(psi^N) (+) im(psi^N) when both are proper."""
    n = x.total_dim
    q = x.quiver
    powers = [m.power(n) for m in psi.phi]
    w = RepMorphism(x, x, powers, check=False)
    kdim = sum(kernel_basis(m).cols for m in w.phi)
    if kdim == 0 or kdim == n:
        return None
    K, inck = kernel_subrep(w)
    I, inci = image_subrep(w)
    projk, proji = [], []
    for v in range(q.n):
        t = inck.phi[v].hstack(inci.phi[v])
        ti = inverse(t)
        assert ti is not None, "Fitting decomposition must be a direct sum"
        projk.append(Matrix(q.p, ti.a[: K.dims[v], :]))
        proji.append(Matrix(q.p, ti.a[K.dims[v] :, :]))
    return (
        Summand(K, inck, RepMorphism(x, K, projk)),
        Summand(I, inci, RepMorphism(x, I, proji)),
    )


def _try_split(x: Representation, rng: np.random.Generator, retries: int) -> Optional[Tuple[Summand, Summand]]:
    he = hom_ext_presentation(x, x)
    if he.hom_dim <= 1:
        return None  # End = k, certainly indecomposable
    p = x.quiver.p
    n = x.total_dim
    for _ in range(retries):
        coeffs = rng.integers(0, p, size=he.hom_dim)
        phi = he.hom_from_coords(Matrix(p, coeffs.reshape(-1, 1)))
        # eigenvalues of the total action; n < p keeps charpoly exact
        if n < p:
            big = np.zeros((n, n), dtype=np.int64)
            off = 0
            for v in range(x.quiver.n):
                d = x.dims[v]
                big[off : off + d, off : off + d] = phi.phi[v].a
                off += d
            lams = poly_roots(charpoly(Matrix(p, big)), p)
        else:
            lams = list(range(p))
        for lam in lams:
            shifted = RepMorphism(
                x, x, [m - Matrix.identity(p, m.rows).scale(lam) for m in phi.phi], check=False
            )
            split = _fitting_split(x, shifted)
            if split is not None:
                return split
    return None


def decompose_rep(x: Representation, seed: int = 0, retries: int = 64) -> List[Summand]:
    """Indecomposable direct summands with inclusions and projections.

    Meataxe-style: random endomorphisms, eigenvalue scan, Fitting splits
    on generalized eigenspaces; a piece whose End has dimension one, or
    that survives `retries` attempts, is declared indecomposable.
    """
    if x.is_zero():
        return []
    rng = np.random.default_rng(seed)
    out: List[Summand] = []
    stack = [Summand(x, RepMorphism.identity(x), RepMorphism.identity(x))]
    while stack:
        piece = stack.pop()
        split = _try_split(piece.rep, rng, retries)
        if split is None:
            out.append(piece)
            continue
        for part in split:
            stack.append(
                Summand(part.rep, piece.include @ part.include, part.project @ piece.project)
            )
    out.sort(key=lambda s: (s.rep.total_dim, s.rep.dims))
    return out


# ---------------------------------------------------------------------------
# Indecomposables of a Dynkin quiver via reflection functors
# ---------------------------------------------------------------------------


def reflect_at_source(m: Representation, v: int) -> Representation:
    """BGP reflection at a source v: new space = coker(M_v -> sum of targets)."""
    q = m.quiver
    out_arrows = q.arrows_from(v)
    assert not q.arrows_into(v), "v must be a source"
    total = sum(m.dims[a.tgt] for a in out_arrows)
    p = q.p
    if out_arrows:
        stack = Matrix.block([[m.mats[a.label]] for a in out_arrows])
    else:
        stack = Matrix.zeros(p, total, m.dims[v])
    chart = QuotientChart(image_basis(stack))
    q2 = q.reversed_at(v)
    dims = list(m.dims)
    dims[v] = chart.dim
    mats = {}
    offs = {}
    off = 0
    for a in out_arrows:
        offs[a.label] = off
        off += m.dims[a.tgt]
    for a in q2.arrows:
        orig = q.arrow_by_label[a.label]
        if orig.src == v:
            # reversed arrow t -> v: include component, pass to cokernel
            o = offs[a.label]
            inc = Matrix(
                p,
                np.vstack(
                    [
                        np.zeros((o, m.dims[orig.tgt]), dtype=np.int64),
                        np.eye(m.dims[orig.tgt], dtype=np.int64),
                        np.zeros((total - o - m.dims[orig.tgt], m.dims[orig.tgt]), dtype=np.int64),
                    ]
                ),
            )
            mats[a.label] = chart.reduce(inc)
        else:
            mats[a.label] = m.mats[a.label]
    return Representation(q2, dims, mats)


def coxeter_inverse(m: Representation) -> Representation:
    """tau^{-1}-like composite of source reflections along a topological order.

    Returns a representation of the original quiver (each arrow reversed
    twice); kills injectives.
    """
    cur = m
    for v in m.quiver.topological:
        cur = reflect_at_source(cur, v)
    assert cur.quiver == m.quiver
    return cur


def indecomposables(q: Quiver) -> List[Representation]:
    """One representative per isomorphism class, Dynkin quivers only.

    Reflection orbits of the indecomposable projectives; sorted by
    (total dim, dim vector) for a stable ordering.
    """
    if not q.is_dynkin():
        raise NotDynkinError(
            "indecomposable enumeration supports Dynkin (ADE) quivers only"
        )
    found: Dict[Tuple[int, ...], Representation] = {}
    for v in range(q.n):
        cur = q.projective(v)
        guard = 0
        while not cur.is_zero():
            if cur.dims in found:
                raise AssertionError("reflection orbit revisited a dimension vector")
            found[cur.dims] = cur
            cur = coxeter_inverse(cur)
            guard += 1
            if guard > 16 * (q.n + 1) ** 2:
                raise AssertionError("reflection orbit did not terminate")
    reps = sorted(found.values(), key=lambda r: (r.total_dim, r.dims))
    return reps


def indec_labels(q: Quiver, reps: Sequence[Representation]) -> List[str]:
    """Human names: simples S#, projectives P#, injectives I#, else M(dims).
    Vertex numbers are 1-based as in the file format."""
    simples = {q.simple(v).dims: f"S{v + 1}" for v in range(q.n)}
    projs = {q.projective(v).dims: f"P{v + 1}" for v in range(q.n)}
    injs = {q.injective(v).dims: f"I{v + 1}" for v in range(q.n)}
    labels = []
    for r in reps:
        if r.dims in simples:
            labels.append(simples[r.dims])
        elif r.dims in projs:
            labels.append(projs[r.dims])
        elif r.dims in injs:
            labels.append(injs[r.dims])
        else:
            labels.append("M(" + ",".join(str(d) for d in r.dims) + ")")
    return labels
