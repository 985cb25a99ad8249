"""Bounded cochain complexes of quiver representations.

Cochain convention: differentials raise degree by one, shifting by k
reindexes terms and multiplies differentials by (-1)^k, and the mapping
cone of f: X -> Y has terms X^{n+1} (+) Y^n with differential
[[-d_X, 0], [f, d_Y]].

Projective replacement applies the standard two-term resolution functor
degreewise and totalises.  The vertical inclusion enters the total
differential with sign (-1)^m and the resolved differentials with constant
signs; these are the unique choices (up to global units) for which the
replacement of a shifted complex equals the shifted replacement entry for
entry, which in turn makes the decomposition into shifted cohomology
pieces compatible with suspension by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from .linalg import Matrix, QuotientChart, image_basis, kernel_basis, solve
from .formal import FormalObject
from .quiver import (
    Quiver,
    RepMorphism,
    Representation,
    direct_sum_reps,
    hom_ext_presentation,
    is_projective,
    subrep_from_bases,
)

__all__ = [
    "Complex",
    "ChainMap",
    "stalk_complex",
    "zero_chain_map",
    "direct_sum_complexes",
    "cohomology",
    "cohomology_data",
    "induced_map",
    "mapping_cone",
    "projective_replacement",
    "chain_map_space",
    "hom_mod_homotopy",
    "HomotopyHom",
    "lift_through_replacement",
    "is_quasi_iso",
    "strictify",
    "Strictification",
]


class Complex:
    """Bounded cochain complex; zero terms are dropped."""

    __slots__ = ("quiver", "terms", "diffs", "_key", "_hash")

    def __init__(self, quiver: Quiver, terms: Dict[int, Representation], diffs: Dict[int, RepMorphism]):
        self.quiver = quiver
        tt = {int(n): r for n, r in terms.items() if not r.is_zero()}
        dd = {}
        for n, d in diffs.items():
            n = int(n)
            if d.is_zero():
                continue
            if d.source != tt.get(n) or d.target != tt.get(n + 1):
                raise ValueError(f"differential at degree {n} has wrong endpoints")
            dd[n] = d
        for n, d in dd.items():
            up = dd.get(n + 1)
            if up is not None and not (up @ d).is_zero():
                raise ValueError(f"d.d != 0 at degree {n}")
        self.terms = dict(sorted(tt.items()))
        self.diffs = dict(sorted(dd.items()))
        self._key = (
            quiver._key,
            tuple((n, r._key) for n, r in self.terms.items()),
            tuple((n, tuple(m.a.tobytes() for m in d.phi)) for n, d in self.diffs.items()),
        )
        self._hash = hash(self._key)

    def term(self, n: int) -> Representation:
        r = self.terms.get(n)
        return r if r is not None else self.quiver.zero_rep()

    def diff(self, n: int) -> RepMorphism:
        d = self.diffs.get(n)
        if d is not None:
            return d
        return RepMorphism.zero(self.term(n), self.term(n + 1))

    def degrees(self) -> List[int]:
        return list(self.terms.keys())

    def is_zero(self) -> bool:
        return not self.terms

    def shift(self, k: int) -> "Complex":
        terms = {n - k: r for n, r in self.terms.items()}
        sign = -1 if k % 2 else 1
        diffs = {n - k: (d if sign == 1 else -d) for n, d in self.diffs.items()}
        return Complex(self.quiver, terms, diffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Complex) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "Complex({%s})" % ", ".join(f"{n}: {r.dims}" for n, r in self.terms.items())


def stalk_complex(m: Representation, degree: int = 0) -> Complex:
    return Complex(m.quiver, {degree: m}, {})


class ChainMap:
    """Degreewise morphism commuting with the differentials."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Complex, target: Complex, comps: Dict[int, RepMorphism], check: bool = True):
        self.source = source
        self.target = target
        cc = {}
        for n, f in comps.items():
            if f.is_zero():
                continue
            if f.source != source.term(n) or f.target != target.term(n):
                raise ValueError(f"component at degree {n} has wrong endpoints")
            cc[int(n)] = f
        self.comps = dict(sorted(cc.items()))
        if check:
            degrees = set(source.terms) | set(target.terms)
            for n in degrees:
                lhs = self.comp(n + 1) @ source.diff(n)
                rhs = target.diff(n) @ self.comp(n)
                if not (lhs - rhs).is_zero():
                    raise ValueError(f"chain square at degree {n} does not commute")

    def comp(self, n: int) -> RepMorphism:
        f = self.comps.get(n)
        if f is not None:
            return f
        return RepMorphism.zero(self.source.term(n), self.target.term(n))

    @staticmethod
    def identity(c: Complex) -> "ChainMap":
        return ChainMap(c, c, {n: RepMorphism.identity(r) for n, r in c.terms.items()}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        assert other.target == self.source
        comps = {}
        for n in set(other.comps) | set(self.comps):
            comps[n] = self.comp(n) @ other.comp(n)
        return ChainMap(other.source, self.target, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        assert self.source == other.source and self.target == other.target
        comps = dict(self.comps)
        for n, f in other.comps.items():
            comps[n] = comps[n] + f if n in comps else f
        return ChainMap(self.source, self.target, comps, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + other.scale(-1)

    def scale(self, k: int) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: f.scale(k) for n, f in self.comps.items()}, check=False)

    def shift(self, k: int) -> "ChainMap":
        return ChainMap(
            self.source.shift(k), self.target.shift(k), {n - k: f for n, f in self.comps.items()}, check=False
        )

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChainMap)
            and self.source == other.source
            and self.target == other.target
            and self.comps == other.comps
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(self.comps.items())))

    def __repr__(self) -> str:
        return f"ChainMap(@{list(self.comps)})"


def zero_chain_map(c: Complex, d: Complex) -> ChainMap:
    return ChainMap(c, d, {}, check=False)


def direct_sum_complexes(parts: Sequence[Complex]) -> Tuple[Complex, List[ChainMap], List[ChainMap]]:
    assert parts
    q = parts[0].quiver
    degrees = sorted({n for c in parts for n in c.terms})
    terms: Dict[int, Representation] = {}
    inc_data: List[Dict[int, RepMorphism]] = [dict() for _ in parts]
    proj_data: List[Dict[int, RepMorphism]] = [dict() for _ in parts]
    for n in degrees:
        present = [(k, c.terms[n]) for k, c in enumerate(parts) if n in c.terms]
        s, incs, projs = direct_sum_reps([r for _, r in present])
        terms[n] = s
        for (k, _), i, pr in zip(present, incs, projs):
            inc_data[k][n] = i
            proj_data[k][n] = pr
    total_no_diff = Complex(q, terms, {})
    diffs: Dict[int, RepMorphism] = {}
    for n in degrees:
        if (n + 1) not in terms:
            continue
        d = RepMorphism.zero(terms[n], terms[n + 1])
        for k, c in enumerate(parts):
            if n in c.terms and (n + 1) in c.terms and n in c.diffs:
                d = d + (inc_data[k][n + 1] @ c.diffs[n] @ proj_data[k][n])
        diffs[n] = d
    total = Complex(q, terms, diffs)
    incs_c = [ChainMap(c, total, inc_data[k], check=False) for k, c in enumerate(parts)]
    projs_c = [ChainMap(total, c, proj_data[k], check=False) for k, c in enumerate(parts)]
    return total, incs_c, projs_c


# ---------------------------------------------------------------------------
# Cohomology
# ---------------------------------------------------------------------------


class CohomologyData(NamedTuple):
    rep: Representation
    cycle_bases: Tuple[Matrix, ...]  # per vertex: columns span ker d^n
    charts: Tuple[QuotientChart, ...]  # quotient by boundaries, in cycle coords
    sections: Tuple[Matrix, ...]  # per vertex: H-coords -> ambient term vectors

    def classify(self, v: int, vec: Matrix) -> Matrix:
        """H-coordinates of an ambient cycle vector at vertex v."""
        zc = solve(self.cycle_bases[v], vec)
        assert zc is not None, "vector is not a cycle"
        return self.charts[v].reduce(zc)


_COH_CACHE: Dict[Tuple, CohomologyData] = {}


def cohomology_data(c: Complex, n: int) -> CohomologyData:
    key = (c._key, n)
    cached = _COH_CACHE.get(key)
    if cached is not None:
        return cached
    q = c.quiver
    term = c.term(n)
    d_out = c.diff(n)
    d_in = c.diff(n - 1)
    zs, charts, secs = [], [], []
    dims = []
    for v in range(q.n):
        z = kernel_basis(d_out.phi[v])
        binz = solve(z, image_basis(d_in.phi[v]))
        assert binz is not None, "boundaries must be cycles"
        chart = QuotientChart(binz)
        zs.append(z)
        charts.append(chart)
        secs.append(z @ chart.section_matrix())
        dims.append(chart.dim)
    mats = {}
    for a in q.arrows:
        img = term.mats[a.label] @ secs[a.src]
        zc = solve(zs[a.tgt], img)
        assert zc is not None, "arrows preserve cycles"
        mats[a.label] = charts[a.tgt].reduce(zc)
    rep = Representation(q, dims, mats)
    data = CohomologyData(rep, tuple(zs), tuple(charts), tuple(secs))
    _COH_CACHE[key] = data
    return data


def cohomology(c: Complex, n: int) -> Representation:
    return cohomology_data(c, n).rep


def induced_map(f: ChainMap, n: int) -> RepMorphism:
    """H^n(f) between the canonical cohomologies."""
    src = cohomology_data(f.source, n)
    tgt = cohomology_data(f.target, n)
    q = f.source.quiver
    comp = f.comp(n)
    mats = [tgt.classify(v, comp.phi[v] @ src.sections[v]) for v in range(q.n)]
    return RepMorphism(src.rep, tgt.rep, mats)


def is_quasi_iso(f: ChainMap) -> bool:
    degrees = set(f.source.terms) | set(f.target.terms)
    for n in sorted(degrees | {d + 1 for d in degrees}):
        if induced_map(f, n).inverse() is None:
            return False
    return True


# ---------------------------------------------------------------------------
# Mapping cone
# ---------------------------------------------------------------------------


def mapping_cone(f: ChainMap) -> Tuple[Complex, ChainMap, ChainMap]:
    """Cone complex with terms X^{n+1} (+) Y^n plus the canonical maps
    g: Y -> C and h: C -> X[1]."""
    x, y = f.source, f.target
    q = x.quiver
    degrees = sorted({n for n in y.terms} | {n - 1 for n in x.terms})
    terms: Dict[int, Representation] = {}
    parts: Dict[int, Tuple] = {}
    for n in degrees:
        xa, ya = x.term(n + 1), y.term(n)
        s, incs, projs = direct_sum_reps([xa, ya])
        if s.is_zero():
            continue
        terms[n] = s
        parts[n] = (incs, projs)
    diffs: Dict[int, RepMorphism] = {}
    for n in terms:
        if (n + 1) not in terms:
            continue
        incs1, _ = parts[n + 1]
        _, projs0 = parts[n]
        d = RepMorphism.zero(terms[n], terms[n + 1])
        d = d + (incs1[0] @ (-x.diff(n + 1)) @ projs0[0])
        d = d + (incs1[1] @ f.comp(n + 1) @ projs0[0])
        d = d + (incs1[1] @ y.diff(n) @ projs0[1])
        diffs[n] = d
    cone_c = Complex(q, terms, diffs)
    g = ChainMap(y, cone_c, {n: parts[n][0][1] for n in terms if not y.term(n).is_zero()}, check=True)
    x1 = x.shift(1)
    h = ChainMap(cone_c, x1, {n: parts[n][1][0] for n in terms if not x.term(n + 1).is_zero()}, check=True)
    return cone_c, g, h


# ---------------------------------------------------------------------------
# Standard resolution (paths-based) and projective replacement
# ---------------------------------------------------------------------------


def _p_basis(m: Representation, j: int) -> List[Tuple[int, Tuple[str, ...], int]]:
    q = m.quiver
    out = []
    for i in range(q.n):
        for path in q.paths(i, j):
            for r in range(m.dims[i]):
                out.append((i, path, r))
    return out


def _q_basis(m: Representation, j: int) -> List[Tuple[int, Tuple[str, ...], int]]:
    q = m.quiver
    out = []
    for ai, a in enumerate(q.arrows):
        for path in q.paths(a.tgt, j):
            for r in range(m.dims[a.src]):
                out.append((ai, path, r))
    return out


class StdRes(NamedTuple):
    P: Representation
    Q: Representation
    eps: RepMorphism  # P -> M, surjective
    iota: RepMorphism  # Q -> P, injective, coker = M


def _rep_on_basis(q: Quiver, basis_of, shift_path) -> Representation:
    """Representation whose vertex-j basis is basis_of(j); an arrow a acts by
    appending a to the path component (shift_path)."""
    dims = [len(basis_of(j)) for j in range(q.n)]
    mats = {}
    for a in q.arrows:
        src_b = basis_of(a.src)
        tgt_index = {key: k for k, key in enumerate(basis_of(a.tgt))}
        mat = np.zeros((dims[a.tgt], dims[a.src]), dtype=np.int64)
        for k, key in enumerate(src_b):
            mat[tgt_index[shift_path(key, a.label)], k] = 1
        mats[a.label] = Matrix(q.p, mat)
    return Representation(q, dims, mats)


def standard_resolution(m: Representation) -> StdRes:
    """0 -> Q(M) -> P(M) -> M -> 0 with P(M) = (+)_i P_i (x) M_i and
    Q(M) = (+)_{a} P_{t(a)} (x) M_{s(a)}; both terms are projective."""
    q = m.quiver

    def pb(j):
        return _p_basis(m, j)

    def qb(j):
        return _q_basis(m, j)

    P = _rep_on_basis(q, pb, lambda key, lab: (key[0], key[1] + (lab,), key[2]))
    Q = _rep_on_basis(q, qb, lambda key, lab: (key[0], key[1] + (lab,), key[2]))
    eps_mats = []
    for j in range(q.n):
        mat = np.zeros((m.dims[j], len(pb(j))), dtype=np.int64)
        for k, (i, path, r) in enumerate(pb(j)):
            if path:
                col = m.path_action(path).a[:, r]
            else:
                col = np.eye(m.dims[i], dtype=np.int64)[:, r]
            mat[:, k] = col
        eps_mats.append(Matrix(q.p, mat))
    eps = RepMorphism(P, m, eps_mats)
    iota_mats = []
    for j in range(q.n):
        p_index = {key: k for k, key in enumerate(pb(j))}
        mat = np.zeros((len(pb(j)), len(qb(j))), dtype=np.int64)
        for k, (ai, path, r) in enumerate(qb(j)):
            a = q.arrows[ai]
            mat[p_index[(a.src, (a.label,) + path, r)], k] += 1
            col = m.mats[a.label].a[:, r]
            for t in range(m.dims[a.tgt]):
                if col[t]:
                    mat[p_index[(a.tgt, path, t)], k] -= int(col[t])
        iota_mats.append(Matrix(q.p, mat))
    iota = RepMorphism(Q, P, iota_mats)
    return StdRes(P, Q, eps, iota)


def res_P_map(m: Representation, n: Representation, f: RepMorphism, Pm: Representation, Pn: Representation) -> RepMorphism:
    q = m.quiver
    mats = []
    for j in range(q.n):
        src_b = _p_basis(m, j)
        tgt_index = {key: k for k, key in enumerate(_p_basis(n, j))}
        mat = np.zeros((len(tgt_index), len(src_b)), dtype=np.int64)
        for k, (i, path, r) in enumerate(src_b):
            col = f.phi[i].a[:, r]
            for t in range(n.dims[i]):
                if col[t]:
                    mat[tgt_index[(i, path, t)], k] = int(col[t])
        mats.append(Matrix(q.p, mat))
    return RepMorphism(Pm, Pn, mats)


def res_Q_map(m: Representation, n: Representation, f: RepMorphism, Qm: Representation, Qn: Representation) -> RepMorphism:
    q = m.quiver
    mats = []
    for j in range(q.n):
        src_b = _q_basis(m, j)
        tgt_index = {key: k for k, key in enumerate(_q_basis(n, j))}
        mat = np.zeros((len(tgt_index), len(src_b)), dtype=np.int64)
        for k, (ai, path, r) in enumerate(src_b):
            s = q.arrows[ai].src
            col = f.phi[s].a[:, r]
            for t in range(n.dims[s]):
                if col[t]:
                    mat[tgt_index[(ai, path, t)], k] = int(col[t])
        mats.append(Matrix(q.p, mat))
    return RepMorphism(Qm, Qn, mats)


def projective_replacement(c: Complex) -> Tuple[Complex, ChainMap]:
    """Degreewise standard resolutions, totalised; the quasi-isomorphism
    onto c is degreewise surjective.  The vertical inclusion enters with
    sign (-1)^m so that replacement commutes with shift exactly."""
    q = c.quiver
    if c.is_zero():
        z = Complex(q, {}, {})
        return z, ChainMap(z, c, {}, check=False)
    res = {n: standard_resolution(r) for n, r in c.terms.items()}
    degrees = sorted(set(c.terms) | {n - 1 for n in c.terms})
    terms: Dict[int, Representation] = {}
    parts: Dict[int, Tuple] = {}
    for m in degrees:
        pm = res[m].P if m in res else q.zero_rep()
        qm = res[m + 1].Q if (m + 1) in res else q.zero_rep()
        s, incs, projs = direct_sum_reps([pm, qm])
        if s.is_zero():
            continue
        terms[m] = s
        parts[m] = (incs, projs)
    diffs: Dict[int, RepMorphism] = {}
    for m in terms:
        if (m + 1) not in terms:
            continue
        incs1, _ = parts[m + 1]
        _, projs0 = parts[m]
        d = RepMorphism.zero(terms[m], terms[m + 1])
        if m in res and (m + 1) in res and m in c.diffs:
            pd = res_P_map(c.terms[m], c.terms[m + 1], c.diffs[m], res[m].P, res[m + 1].P)
            d = d + (incs1[0] @ pd @ projs0[0])
        if (m + 1) in res:
            iota = res[m + 1].iota if m % 2 == 0 else -res[m + 1].iota
            d = d + (incs1[0] @ iota @ projs0[1])
        if (m + 1) in res and (m + 2) in res and (m + 1) in c.diffs:
            qd = res_Q_map(c.terms[m + 1], c.terms[m + 2], c.diffs[m + 1], res[m + 1].Q, res[m + 2].Q)
            d = d + (incs1[1] @ qd @ projs0[1])
        diffs[m] = d
    P = Complex(q, terms, diffs)
    rho_comps = {}
    for m in terms:
        if m in res:
            rho_comps[m] = res[m].eps @ parts[m][1][0]
    rho = ChainMap(P, c, rho_comps)
    return P, rho


# ---------------------------------------------------------------------------
# Chain-map spaces and homotopy quotients
# ---------------------------------------------------------------------------


def _degreewise_space(c: Complex, d: Complex, offset: int = 0):
    """Coordinate segments for degreewise morphisms c^n -> d^{n+offset}."""
    segs = []
    for n in c.terms:
        tgt = d.terms.get(n + offset)
        if tgt is None:
            continue
        he = hom_ext_presentation(c.terms[n], tgt)
        if he.hom_dim:
            segs.append((n, he))
    return segs


def _vec_of_degreewise(segs, comps: Dict[int, RepMorphism], p: int) -> Matrix:
    blocks = []
    for n, he in segs:
        f = comps.get(n)
        blocks.append(np.zeros((he.hom_dim, 1), dtype=np.int64) if f is None else he.hom_coords(f).a)
    return Matrix(p, np.vstack(blocks) if blocks else np.zeros((0, 1), dtype=np.int64))


def _degreewise_from_vec(segs, v: Matrix):
    comps = {}
    off = 0
    for n, he in segs:
        comps[n] = he.hom_from_coords(Matrix(v.p, v.a[off : off + he.hom_dim, :]))
        off += he.hom_dim
    return comps


def chain_map_space(c: Complex, d: Complex) -> List[ChainMap]:
    """Basis of the space of chain maps c -> d."""
    p = c.quiver.p
    segs = _degreewise_space(c, d)
    total = sum(he.hom_dim for _, he in segs)
    if total == 0:
        return []
    rows = []
    degrees = sorted(set(c.terms) | set(d.terms))
    eye = np.eye(total, dtype=np.int64)
    cols = []
    for j in range(total):
        comps = _degreewise_from_vec(segs, Matrix(p, eye[:, j : j + 1]))
        f = ChainMap(c, d, comps, check=False)
        defect = []
        for n in degrees:
            sq = (f.comp(n + 1) @ c.diff(n)) - (d.diff(n) @ f.comp(n))
            defect.append(sq.vec().a)
        cols.append(np.vstack(defect) if defect else np.zeros((0, 1), dtype=np.int64))
    constraint = Matrix(p, np.hstack(cols))
    ker = kernel_basis(constraint)
    out = []
    for j in range(ker.cols):
        comps = _degreewise_from_vec(segs, ker.column(j))
        out.append(ChainMap(c, d, comps))
    return out


class HomotopyHom(NamedTuple):
    dim: int
    basis: List[ChainMap]
    # chart data for membership tests
    segs: list
    boundary_chart: QuotientChart

    def is_null_homotopic(self, f: ChainMap) -> bool:
        p = f.source.quiver.p
        v = _vec_of_degreewise(self.segs, f.comps, p)
        return self.boundary_chart.reduce(v).is_zero()

    def homotopic(self, f: ChainMap, g: ChainMap) -> bool:
        return self.is_null_homotopic(f - g)


def hom_mod_homotopy(c: Complex, d: Complex) -> HomotopyHom:
    """Chain maps modulo null-homotopic ones, for complexes of projectives."""
    for r in list(c.terms.values()) + list(d.terms.values()):
        if not is_projective(r):
            raise ValueError("hom_mod_homotopy requires degreewise projective terms")
    p = c.quiver.p
    segs = _degreewise_space(c, d)
    maps = chain_map_space(c, d)
    h_segs = _degreewise_space(c, d, offset=-1)
    boundary_cols = []
    for n, he in h_segs:
        for j in range(he.hom_dim):
            s = he.hom_basis[j]  # c^n -> d^{n-1}
            ds_sd: Dict[int, RepMorphism] = {
                n: d.diff(n - 1) @ s,
                n - 1: s @ c.diff(n - 1),
            }
            boundary_cols.append(_vec_of_degreewise(segs, ds_sd, p).a)
    total = sum(he.hom_dim for _, he in segs)
    if boundary_cols:
        bmat = Matrix(p, np.hstack(boundary_cols))
    else:
        bmat = Matrix.zeros(p, total, 0)
    chart = QuotientChart(image_basis(bmat))
    reduced_cols = []
    for f in maps:
        reduced_cols.append(chart.reduce(_vec_of_degreewise(segs, f.comps, p)).a)
    if reduced_cols:
        red = Matrix(p, np.hstack(reduced_cols))
        from .linalg import rref

        _, pivots, rk = rref(red)
    else:
        pivots, rk = [], 0
    basis = [maps[j] for j in pivots]
    return HomotopyHom(dim=rk, basis=basis, segs=segs, boundary_chart=chart)


def lift_through_replacement(g: ChainMap, rho: ChainMap) -> ChainMap:
    """Strict lift of g: X -> Y through a degreewise-surjective quasi-iso
    rho: P -> Y, when X is a bounded complex of projectives.

    Built degree by degree from the top; each step is one linear solve.
    """
    x, y, p_cx = g.source, rho.target, rho.source
    assert g.target == y
    q = x.quiver
    lift: Dict[int, RepMorphism] = {}
    degrees = sorted(x.terms, reverse=True)
    for n in degrees:
        xn = x.terms[n]
        pn = p_cx.term(n)
        if pn.is_zero():
            assert g.comp(n).is_zero(), "no room to lift a nonzero component"
            continue
        he = hom_ext_presentation(xn, pn)
        up = lift.get(n + 1)
        cols, rhs_parts = [], []
        for j in range(he.hom_dim):
            b = he.hom_basis[j]
            block = (rho.comp(n) @ b).vec()
            block2 = (p_cx.diff(n) @ b).vec()
            cols.append(block.vstack(block2))
        rhs1 = g.comp(n).vec()
        target_up = (up @ x.diff(n)) if up is not None else RepMorphism.zero(xn, p_cx.term(n + 1))
        rhs = rhs1.vstack(target_up.vec())
        m = cols[0] if cols else Matrix.zeros(q.p, rhs.rows, 0)
        for cc in cols[1:]:
            m = m.hstack(cc)
        sol = solve(m, rhs)
        assert sol is not None, "strict lift must exist through the replacement"
        lift[n] = he.hom_from_coords(sol)
    return ChainMap(x, p_cx, lift)


# ---------------------------------------------------------------------------
# Strictification: a complex as the sum of its shifted cohomologies
# ---------------------------------------------------------------------------


@dataclass
class SplitDegree:
    """Vertexwise splitting P^n = Z^n (+) U^n of a projective complex term:
    Z = cycles, U = a module-theoretic complement mapping isomorphically
    onto the next boundaries."""

    z_rep: Representation
    z_inc: RepMorphism  # Z^n -> P^n
    u_rep: Representation
    u_inc: RepMorphism  # U^n -> P^n
    z_proj: Tuple[Matrix, ...]  # per vertex: P^n coords -> Z coords
    u_proj: Tuple[Matrix, ...]


@dataclass
class Strictification:
    """A complex presented as the direct sum of its shifted cohomologies.

    `formal` has the canonical H^n in degree n.  The splitting lives on the
    projective replacement: two-term pieces U^{n-1} -> Z^n, each carrying
    one cohomology, with tau the comparison isomorphism onto H^n of the
    original complex.  Shifting the input shifts every piece on the nose.
    """

    complex: Complex
    formal: FormalObject
    replacement: Complex
    rho: ChainMap
    split: Dict[int, SplitDegree]
    j_maps: Dict[int, RepMorphism]  # U^{n-1} -> Z^n
    h_reps: Dict[int, Representation]  # cohomology of the piece at degree n
    h_quots: Dict[int, RepMorphism]  # Z^n -> H_T^n
    tau: Dict[int, RepMorphism]  # H_T^n -> H^n(complex), isomorphisms


_STRICT_CACHE: Dict[Tuple, Strictification] = {}


def strictify(c: Complex) -> Strictification:
    """Split a complex into shifted cohomology pieces, deterministically.

    The section of d onto the boundaries is a module morphism (it exists
    because submodules of projectives are projective here), solved in hom
    coordinates; everything downstream reuses the stored bases.
    """
    cached = _STRICT_CACHE.get(c._key)
    if cached is not None:
        return cached
    q = c.quiver
    P, rho = projective_replacement(c)
    split: Dict[int, SplitDegree] = {}
    sections: Dict[int, RepMorphism] = {}
    degrees = sorted(P.terms)
    for n in degrees:
        pn = P.terms[n]
        d = P.diff(n)
        z_bases = [kernel_basis(m) for m in d.phi]
        z_rep, z_inc = subrep_from_bases(pn, z_bases)
        # boundary image inside P^{n+1} and a module section of d onto it
        b_rep, b_inc = _image_with_inclusion(d)
        if b_rep.is_zero():
            u_rep, u_inc = q.zero_rep(), RepMorphism.zero(q.zero_rep(), pn)
        else:
            he = hom_ext_presentation(b_rep, pn)
            cols = [(d @ bb).vec() for bb in he.hom_basis]
            m = cols[0]
            for ccc in cols[1:]:
                m = m.hstack(ccc)
            sol = solve(m, b_inc.vec())
            assert sol is not None, "d splits onto its image (projective complex)"
            s = he.hom_from_coords(sol)
            u_rep, u_inc = _image_with_inclusion(s)
        zp, up = [], []
        for v in range(q.n):
            t = z_inc.phi[v].hstack(u_inc.phi[v])
            from .linalg import inverse as _inv

            ti = _inv(t)
            assert ti is not None, "Z (+) U must fill the whole term"
            zp.append(Matrix(q.p, ti.a[: z_rep.dims[v], :]))
            up.append(Matrix(q.p, ti.a[z_rep.dims[v] :, :]))
        split[n] = SplitDegree(z_rep, z_inc, u_rep, u_inc, tuple(zp), tuple(up))
    j_maps: Dict[int, RepMorphism] = {}
    h_reps: Dict[int, Representation] = {}
    h_quots: Dict[int, RepMorphism] = {}
    tau: Dict[int, RepMorphism] = {}
    formal_comps: Dict[int, Representation] = {}
    for n in degrees:
        sd = split[n]
        prev = split.get(n - 1)
        if prev is None or prev.u_rep.is_zero():
            j = RepMorphism.zero(q.zero_rep(), sd.z_rep)
        else:
            img = P.diff(n - 1) @ prev.u_inc
            mats = []
            for v in range(q.n):
                mv = solve(sd.z_inc.phi[v], img.phi[v])
                assert mv is not None, "boundaries are cycles"
                mats.append(mv)
            j = RepMorphism(prev.u_rep, sd.z_rep, mats)
        from .quiver import cokernel_quotient

        h, quot = cokernel_quotient(j)
        j_maps[n] = j
        h_reps[n] = h
        h_quots[n] = quot
        # comparison with the canonical cohomology of c through rho
        cdata = cohomology_data(c, n)
        sec = _section_of_quot(quot)
        mats = []
        for v in range(q.n):
            amb = rho.comp(n).phi[v] @ sd.z_inc.phi[v] @ sec[v]
            mats.append(cdata.classify(v, amb))
        t = RepMorphism(h, cdata.rep, mats)
        assert t.inverse() is not None, "replacement must compute the same cohomology"
        tau[n] = t
        if not cdata.rep.is_zero():
            formal_comps[n] = cdata.rep
    # degrees of c where P has no term cannot carry cohomology; include all
    formal = FormalObject(q, formal_comps)
    s = Strictification(
        complex=c,
        formal=formal,
        replacement=P,
        rho=rho,
        split=split,
        j_maps=j_maps,
        h_reps=h_reps,
        h_quots=h_quots,
        tau=tau,
    )
    _STRICT_CACHE[c._key] = s
    return s


def _image_with_inclusion(f: RepMorphism) -> Tuple[Representation, RepMorphism]:
    from .quiver import image_subrep

    return image_subrep(f)


def _section_of_quot(quot: RepMorphism) -> List[Matrix]:
    out = []
    for v in range(quot.source.quiver.n):
        s = solve(quot.phi[v], Matrix.identity(quot.phi[v].p, quot.phi[v].rows))
        assert s is not None
        out.append(s)
    return out
