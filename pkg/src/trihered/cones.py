"""Cones of morphisms in the graded model.

For a degree-zero morphism of representations the cone is assembled from a
pull-back/push-out grid: factor f through its image, lift the kernel
extension class through the surjection given by hereditarity, and read the
two connecting classes off the grid.  The general cone twists the
degreewise kernel/cokernel pieces by the transported ext parts of f and
completes the triangle maps by deterministic linear solves.

A realization road (honest two-term complexes and a genuine mapping cone)
is provided for cross-checking; it is used by tests and the verification
commands, never by the constructions themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .linalg import Matrix, solve
from .quiver import (
    ExtClass,
    RepMorphism,
    Representation,
    ShortExact,
    extension_middle,
    factorize,
    hom_ext_presentation,
    ses_class,
    transport_ext,
    transport_matrix,
)
from .formal import (
    FormalHomSpace,
    FormalMorphism,
    FormalObject,
    Triangle,
    formal_direct_sum,
    stalk_formal,
)

__all__ = [
    "PBPODiagram",
    "cone_in_heart",
    "cone_of_extension",
    "cone",
    "Roof",
    "realize",
    "TwoRowGrid",
    "assemble_sum_triangle",
    "GridHypothesisError",
]


@dataclass
class PBPODiagram:
    """The exact grid of a morphism f = f2.f1 in the module category.

        0 -> K -(x)-> X -(f1)-> I -> 0          (top row, class eps' = eps.f2)
        0 -> K -(i')-> E -(pi)-> Y -> 0         (middle row, class eps)
        0 -> X -(i)-> E -(pi')-> C -> 0         (middle column, class eta)
        0 -> I -(f2)-> Y -(y)-> C -> 0          (right column)
    """

    K: Representation
    X: Representation
    I: Representation
    E: Representation
    Y: Representation
    C: Representation
    x: RepMorphism  # K -> X
    f1: RepMorphism  # X -> I
    f2: RepMorphism  # I -> Y
    iota: RepMorphism  # X -> E
    iota_p: RepMorphism  # K -> E
    pi: RepMorphism  # E -> Y
    pi_p: RepMorphism  # E -> C
    y: RepMorphism  # Y -> C
    eps: ExtClass  # in Ext^1(Y, K)
    eta: ExtClass  # in Ext^1(C, X)

    def validate(self) -> None:
        ShortExact(self.x, self.f1)
        ShortExact(self.iota_p, self.pi)
        ShortExact(self.iota, self.pi_p)
        ShortExact(self.f2, self.y)
        assert (self.pi @ self.iota) == (self.f2 @ self.f1), "pi.iota = f"
        assert (self.iota @ self.x) == self.iota_p, "left square"
        assert (self.y @ self.pi) == self.pi_p, "bottom square"
        assert ses_class(ShortExact(self.iota_p, self.pi)) == self.eps
        assert ses_class(ShortExact(self.iota, self.pi_p)) == self.eta
        top = ses_class(ShortExact(self.x, self.f1))
        assert transport_ext(self.eps, pre=self.f2) == top, "eps pulls back to the top row"


def _heart_cone_data(f: RepMorphism) -> Tuple:
    """Factorization of f plus the lifted kernel class and the cokernel class."""
    fac = factorize(f)
    K, I, C = fac.kernel.source, fac.image.source, fac.cokernel.target
    X, Y = f.source, f.target
    top = ses_class(ShortExact(fac.kernel, fac.coimage))  # in Ext^1(I, K)
    lift_mat = transport_matrix(Y, K, pre=fac.image)
    coords = solve(lift_mat, top.coords)
    assert coords is not None, "hereditarity: pullback along a mono must be onto"
    eps = ExtClass(Y, K, coords)
    mid = extension_middle(eps)  # 0 -> K -> E -> Y -> 0
    E = mid.E
    # iota: X -> E with pi.iota = f and iota.x = iota'
    he = hom_ext_presentation(X, E)
    pi_sp = FormalHomSpace(stalk_formal(X), stalk_formal(Y))
    del pi_sp  # composition matrices built directly below
    cols = []
    he_xy = hom_ext_presentation(X, Y)
    he_ke = hom_ext_presentation(K, E)
    for j in range(he.hom_dim):
        b = he.hom_basis[j]
        cols.append((mid.p @ b).vec().vstack((b @ fac.kernel).vec()))
    rhs = f.vec().vstack(mid.i.vec())
    if cols:
        m = cols[0]
        for c in cols[1:]:
            m = m.hstack(c)
    else:
        m = Matrix.zeros(X.quiver.p, rhs.rows, 0)
    sol = solve(m, rhs)
    assert sol is not None, "grid completion iota must exist"
    iota = he.hom_from_coords(sol)
    pi_p = fac.cokernel @ mid.p  # E -> C
    eta = ses_class(ShortExact(iota, pi_p))
    diagram = PBPODiagram(
        K=K, X=X, I=I, E=E, Y=Y, C=C,
        x=fac.kernel, f1=fac.coimage, f2=fac.image,
        iota=iota, iota_p=mid.i, pi=mid.p, pi_p=pi_p, y=fac.cokernel,
        eps=eps, eta=eta,
    )
    return fac, eps, eta, diagram


def cone_in_heart(f: RepMorphism) -> Tuple[Triangle, PBPODiagram]:
    """Exact triangle X -> Y -> K[1] (+) C -> X[1] for f in the module category.

    The second map is (-eps; y) and the third (x[1], eta), with eps the
    lifted kernel class and eta the class of the middle column.
    """
    fac, eps, eta, diagram = _heart_cone_data(f)
    K, C = fac.kernel.source, fac.cokernel.target
    X, Y = f.source, f.target
    z_comps: Dict[int, Representation] = {}
    if not K.is_zero():
        z_comps[-1] = K
    if not C.is_zero():
        z_comps[0] = C
    Z = FormalObject(X.quiver, z_comps)
    f_f = FormalMorphism.from_rep(f, 0)
    g = FormalMorphism(
        stalk_formal(Y), Z,
        {0: fac.cokernel} if not C.is_zero() else {},
        {0: -eps} if not K.is_zero() else {},
    )
    x1 = stalk_formal(X, -1)
    h = FormalMorphism(
        Z, x1,
        {-1: fac.kernel} if not K.is_zero() else {},
        {0: eta} if (not C.is_zero() and not X.is_zero()) else {},
    )
    t = Triangle(f_f, g, h)
    diagram.validate()
    return t, diagram


def cone_of_extension(f: FormalMorphism) -> Triangle:
    """Cone of a pure one-component ext morphism A[-n] -> B[-n+1]:
    the middle term of the class, placed one degree below A.  The middle is
    built from the class with the parity sign of its degree, so the plain
    inclusion/projection legs complete it to a genuinely exact triangle."""
    if f.hom:
        raise ValueError("morphism has hom parts; not a pure ext morphism")
    if len(f.ext) > 1 or len(f.source.components) != 1 or len(f.target.components) != 1:
        raise ValueError("expected exactly one ext component")
    (n, a_rep), = f.source.components.items()
    if list(f.target.components) != [n - 1]:
        raise ValueError("target must sit one degree below the source")
    e = f.ext.get(n, ExtClass.zero(a_rep, f.target.components[n - 1]))
    ses = extension_middle(e if n % 2 == 0 else -e)  # 0 -> B -> E -> A -> 0
    g = FormalMorphism(f.target, stalk_formal(ses.E, n - 1), {n - 1: ses.i}, {})
    h = FormalMorphism(stalk_formal(ses.E, n - 1), f.source.shift(1), {n - 1: ses.p}, {})
    return Triangle(f, g, h)


def cone(f: FormalMorphism) -> Triangle:
    """Cone triangle of an arbitrary formal morphism.

    The degree-n cone component is the middle term of the ext part of f
    restricted to ker f0_{n+1} and pushed out to coker f0_n; the triangle
    maps carry the degreewise kernel/cokernel structure maps, with the
    remaining ext components fixed by linear solves against the vanishing
    of the three composites.
    """
    X, Y = f.source, f.target
    q = X.quiver
    degrees = sorted(set(X.degrees()) | set(Y.degrees()))
    if not degrees:
        z = FormalObject.zero(q)
        return Triangle(f, FormalMorphism.zero(Y, z), FormalMorphism.zero(z, X.shift(1)))

    # degreewise heart data for the hom parts
    data = {}
    for n in degrees:
        xn, yn = X.component(n), Y.component(n)
        f0 = f.hom.get(n)
        if f0 is None:
            f0 = RepMorphism.zero(xn, yn)
        fac, eps, eta, _ = _heart_cone_data(f0)
        data[n] = (f0, fac, eps, eta)

    def K(n):
        return data[n][1].kernel.source if n in data else q.zero_rep()

    def C(n):
        return data[n][1].cokernel.target if n in data else q.zero_rep()

    def x_map(n):
        return data[n][1].kernel

    def y_map(n):
        return data[n][1].cokernel

    # cone components: extensions of K_{n+1} by C_n along the transported ext
    # part of f, with the parity sign suspension imposes on the twist
    z_comps: Dict[int, Representation] = {}
    z_ses: Dict[int, ShortExact] = {}
    for n in range(degrees[0] - 1, degrees[-1] + 1):
        kn, cn = K(n + 1), C(n)
        if kn.is_zero() and cn.is_zero():
            continue
        mu = ExtClass.zero(kn, cn)
        e_up = f.ext.get(n + 1)
        if e_up is not None and not kn.is_zero() and not cn.is_zero():
            mu = transport_ext(e_up, pre=x_map(n + 1), post=y_map(n))
            if (n + 1) % 2:
                mu = -mu
        ses = extension_middle(mu)  # 0 -> C_n -> Z_n -> K_{n+1} -> 0
        z_comps[n] = ses.E
        z_ses[n] = ses
    Z = FormalObject(q, z_comps)

    # g: Y -> Z, h: Z -> X[1]; hom parts are the structure maps
    g_hom: Dict[int, RepMorphism] = {}
    h_hom: Dict[int, RepMorphism] = {}
    for n, ses in z_ses.items():
        if not C(n).is_zero():
            g_hom[n] = ses.i @ y_map(n)
        if not K(n + 1).is_zero():
            h_hom[n] = x_map(n + 1) @ ses.p

    # ext parts: anchor to the heart classes through the quotient/sub maps,
    # with the degree parity that genuine suspension imposes on connecting
    # classes, then correct so that g.f and f[1].h vanish exactly
    g_ext: Dict[int, ExtClass] = {}
    for n in degrees:
        yn = Y.component(n)
        zprev = Z.component(n - 1)
        if yn.is_zero() or zprev.is_zero():
            continue
        eps_n = data[n][2]
        target = ExtClass.zero(yn, zprev)
        if not K(n).is_zero():
            # particular solution of k_* gamma = -(+/-)eps_n
            push = transport_matrix(yn, zprev, post=z_ses[n - 1].p)
            anchor = (-eps_n) if n % 2 == 0 else eps_n
            coords = solve(push, anchor.coords)
            assert coords is not None, "quotient pushforward must be onto (Ext^2 = 0)"
            target = ExtClass(yn, zprev, coords)
        g_ext[n] = target
    h_ext: Dict[int, ExtClass] = {}
    for n, ses in z_ses.items():
        zn = Z.component(n)
        xn = X.component(n)
        if zn.is_zero() or xn.is_zero():
            continue
        eta_n = data[n][3] if n in data else None
        target = ExtClass.zero(zn, xn)
        if eta_n is not None and not C(n).is_zero():
            pull = transport_matrix(zn, xn, pre=ses.i)
            anchor = eta_n if n % 2 == 0 else -eta_n
            coords = solve(pull, anchor.coords)
            assert coords is not None, "subobject pullback must be onto (Ext^2 = 0)"
            target = ExtClass(zn, xn, coords)
        h_ext[n] = target

    g = FormalMorphism(Y, Z, g_hom, g_ext)
    h = FormalMorphism(Z, X.shift(1), h_hom, h_ext)

    # correction of g: kill (g.f)^1_n by delta in Ext^1(Y_n, C_{n-1}) pushed into Z_{n-1}
    gf = g @ f
    for n, bad in list(gf.ext.items()):
        xn = X.component(n)
        yn = Y.component(n)
        zprev = Z.component(n - 1)
        cprev = C(n - 1)
        f0 = data[n][0]
        assert not cprev.is_zero() or bad.is_zero(), "uncorrectable composite g.f"
        m = transport_matrix(yn, cprev, pre=f0, post=z_ses[n - 1].i)
        coords = solve(m, (-bad).coords)
        assert coords is not None, "correction for g.f must exist"
        delta = ExtClass(yn, cprev, coords)
        fix = transport_ext(delta, post=z_ses[n - 1].i)
        g_ext[n] = g_ext.get(n, ExtClass.zero(yn, zprev)) + fix
    g = FormalMorphism(Y, Z, g_hom, g_ext)
    assert (g @ f).is_zero(), "g.f must vanish after correction"

    # correction of h: kill (f[1].h)^1_n by zeta in Ext^1(K_{n+1}, X_n) pulled back along k_n
    f1h = f.shift(1) @ h
    for n, bad in list(f1h.ext.items()):
        zn = Z.component(n)
        xn = X.component(n)
        knext = K(n + 1)
        f0 = data[n][0]
        assert not knext.is_zero() or bad.is_zero(), "uncorrectable composite f[1].h"
        m = transport_matrix(knext, xn, pre=z_ses[n].p, post=f0)
        coords = solve(m, (-bad).coords)
        assert coords is not None, "correction for f[1].h must exist"
        zeta = ExtClass(knext, xn, coords)
        fix = transport_ext(zeta, pre=z_ses[n].p)
        h_ext[n] = h_ext.get(n, ExtClass.zero(zn, xn)) + fix
    h = FormalMorphism(Z, X.shift(1), h_hom, h_ext)
    assert (f.shift(1) @ h).is_zero(), "f[1].h must vanish after correction"
    assert (h @ g).is_zero(), "h.g must vanish by the grid identities"
    return Triangle(f, g, h)


@dataclass
class Roof:
    """Chain-level presentation of a formal morphism: a quasi-isomorphism
    onto the source stalks and an honest chain map to the target stalks."""

    quasi: "object"  # ChainMap: resolved -> source stalk complex
    arm: "object"  # ChainMap: resolved -> target stalk complex


def realize(f: FormalMorphism) -> Roof:
    """Present f by honest complexes: each ext component becomes a two-term
    complex through its middle term, hom components ride along the stalks."""
    from .complexes import ChainMap, Complex, direct_sum_complexes, stalk_complex

    X, Y = f.source, f.target
    q = X.quiver
    y_stalks = Complex(q, dict(Y.components), {})
    x_stalks = Complex(q, dict(X.components), {})

    pieces = []
    for m, xm in X.components.items():
        e = f.ext.get(m)
        f0 = f.hom.get(m)
        ym = Y.component(m)
        if e is not None:
            ses = extension_middle(e)  # 0 -> Y_{m-1} -> E -> X_m -> 0
            piece = Complex(q, {m - 1: ses.B, m: ses.E}, {m - 1: ses.i})
            quasi_comp = {m: ses.p}
            # identity arm carries the class; parity matches suspension
            sign = 1 if m % 2 == 0 else -1
            arm_comp = {m - 1: RepMorphism.identity(ses.B).scale(sign)}
            if f0 is not None:
                arm_comp[m] = f0 @ ses.p
        else:
            piece = stalk_complex(xm, m)
            quasi_comp = {m: RepMorphism.identity(xm)}
            arm_comp = {m: f0} if f0 is not None else {}
        pieces.append((piece, quasi_comp, arm_comp))
    if not pieces:
        zero = Complex(q, {}, {})
        return Roof(ChainMap(zero, x_stalks, {}), ChainMap(zero, y_stalks, {}))

    total, incs, projs = direct_sum_complexes([p for p, _, _ in pieces])
    quasi_parts: Dict[int, RepMorphism] = {}
    arm_parts: Dict[int, RepMorphism] = {}
    for (piece, quasi_comp, arm_comp), proj in zip(pieces, projs):
        for n, comp in quasi_comp.items():
            add = comp @ proj.comps[n]
            quasi_parts[n] = quasi_parts[n] + add if n in quasi_parts else add
        for n, comp in arm_comp.items():
            add = comp @ proj.comps[n]
            arm_parts[n] = arm_parts[n] + add if n in arm_parts else add
    quasi = ChainMap(total, x_stalks, quasi_parts)
    arm = ChainMap(total, y_stalks, arm_parts)
    return Roof(quasi=quasi, arm=arm)


class GridHypothesisError(ValueError):
    """The gluing hypothesis Hom(Y'', g') = 0 fails; carries a witness."""

    def __init__(self, witness: FormalMorphism):
        super().__init__("Hom(Y'', g') is nonzero; gluing hypothesis violated")
        self.witness = witness


@dataclass
class TwoRowGrid:
    """The commutative grid used to glue two exact rows over a shared fibre.

        I -(a)-> X  -(fp)-> Y'  -(yp)-> I[1]      row1
        I ----->  Y'' -(gpp)-> Z -(b)-> I[1]      row2  (first map = fpp.a)
        X -(fpp)-> Y'' -(ypp)-> E[1] --(x1)-> X[1] column
    with verticals g': Y' -> Z and z: Z -> E[1].
    """

    row1: Triangle
    row2: Triangle
    column: Triangle
    g_prime: FormalMorphism  # Y' -> Z
    z: FormalMorphism  # Z -> E[1]

    def validate(self) -> None:
        a, fp = self.row1.f, self.row1.g
        fpp = self.column.f
        assert self.row2.f == fpp @ a, "row2 starts with f''.a"
        assert self.g_prime @ fp == self.row2.g @ fpp, "middle square"
        assert self.row2.h @ self.g_prime == self.row1.h, "right square"
        assert self.z @ self.row2.g == self.column.g, "second column square"
        lhs = self.column.h @ self.z
        rhs = self.row1.f.shift(1) @ self.row2.h
        assert lhs == rhs, "the two descriptions of the connecting map agree"

    def connecting(self) -> FormalMorphism:
        return self.row1.f.shift(1) @ self.row2.h


def assemble_sum_triangle(grid: TwoRowGrid) -> Triangle:
    """Glue the rows into X -> Y' (+) Y'' -> Z -> X[1].

    Requires every morphism Y'' -> Y' to die under g' (checked on a basis);
    raises GridHypothesisError with the offending composite otherwise.
    """
    grid.validate()
    yp = grid.row1.g.target
    ypp = grid.column.f.target
    x = grid.row1.g.source
    space = FormalHomSpace(ypp, yp)
    for b in space.basis():
        comp = grid.g_prime @ b
        if not comp.is_zero():
            raise GridHypothesisError(comp)
    ysum, incs, projs = formal_direct_sum([yp, ypp])
    f_sum = (incs[0] @ (-grid.row1.g)) + (incs[1] @ grid.column.f)
    g_sum = (grid.g_prime @ projs[0]) + (grid.row2.g @ projs[1])
    return Triangle(f_sum, g_sum, grid.connecting())
