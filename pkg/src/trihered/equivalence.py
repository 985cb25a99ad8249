"""The lift of the module-category embedding to complexes: send a complex
to its graded cohomology and a chain map to its component matrix.

Degree-preserving entries are the induced maps on cohomology.  The
degree-dropping entry from H^m of the source to H^{m-1} of the target is
read off a projective replacement: lift the chain map strictly, take the
block that crosses between the splitting pieces, and push the resolution
sequence of H^m out along that block.  A parity sign keeps the extraction
strictly compatible with suspension, so the functor commutes with shift on
the nose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .linalg import rank
from .quiver import (
    ExtClass,
    Quiver,
    RepMorphism,
    ext_dim,
    hom_dim,
    indecomposables,
    pushout_extension,
    ses_class,
    transport_ext,
)
from .complexes import (
    ChainMap,
    Complex,
    Strictification,
    direct_sum_complexes,
    hom_mod_homotopy,
    induced_map,
    lift_through_replacement,
    mapping_cone,
    projective_replacement,
    stalk_complex,
    strictify,
)
from .formal import (
    FormalHomSpace,
    FormalMorphism,
    FormalObject,
    Triangle,
    formal_direct_sum,
    formal_hom_dim,
    is_exact,
    stalk_formal,
    tr3_complete,
)
from .cones import cone
from .randgen import child_rng, random_chain_map, random_complex, random_formal_object

__all__ = [
    "formal_object_of",
    "formal_morphism_of",
    "image_of_cone_triangle",
    "FunctorReport",
    "verify_equivalence",
]


def formal_object_of(c: Complex) -> FormalObject:
    """Graded cohomology of the complex, one component per degree."""
    return strictify(c).formal


def formal_morphism_of(f: ChainMap) -> FormalMorphism:
    """Component matrix of a chain map between the graded cohomologies."""
    sx = strictify(f.source)
    sy = strictify(f.target)
    x_obj, y_obj = sx.formal, sy.formal
    hom: Dict[int, RepMorphism] = {}
    for n in x_obj.components:
        if n in y_obj.components:
            hom[n] = induced_map(f, n)
    ext: Dict[int, ExtClass] = {}
    lifted: Optional[ChainMap] = None
    for m in x_obj.components:
        if (m - 1) not in y_obj.components:
            continue
        if lifted is None:
            lifted = lift_through_replacement(f @ sx.rho, sy.rho)
        e = _ext_entry(sx, sy, lifted, m)
        if e is not None:
            ext[m] = e
    return FormalMorphism(x_obj, y_obj, hom, ext)


def _ext_entry(sx: Strictification, sy: Strictification, lifted: ChainMap, m: int) -> Optional[ExtClass]:
    """Degree-dropping entry at m, in Ext^1(H^m source, H^{m-1} target)."""
    q = lifted.source.quiver
    if m not in sx.split or (m - 1) not in sx.split or (m - 1) not in sy.split:
        return None
    ux = sx.split[m - 1].u_rep
    zy = sy.split[m - 1]
    if ux.is_zero() or zy.z_rep.is_zero():
        return None
    comp = lifted.comp(m - 1)
    block = RepMorphism(
        ux,
        zy.z_rep,
        [zy.z_proj[v] @ comp.phi[v] @ sx.split[m - 1].u_inc.phi[v] for v in range(q.n)],
    )
    # the opposite block (cycles to complements) must vanish: the complement
    # maps injectively onward, so a chain map cannot reach it from cycles
    if m in sy.split:
        upper = [
            sy.split[m].u_proj[v] @ lifted.comp(m).phi[v] @ sx.split[m].z_inc.phi[v]
            for v in range(q.n)
        ]
        assert all(u.is_zero() for u in upper), "chain lift crossed the splitting the wrong way"
    xi = sy.h_quots[m - 1] @ block
    pushed = pushout_extension(sx.j_maps[m], xi)
    cls = ses_class(pushed)
    if m % 2:
        cls = -cls
    tau_x_inv = sx.tau[m].inverse()
    assert tau_x_inv is not None
    return transport_ext(cls, pre=tau_x_inv, post=sy.tau[m - 1])


def image_of_cone_triangle(f: ChainMap) -> Triangle:
    """Image of the mapping-cone triangle of f under the lifting functor."""
    cone_c, g, h = mapping_cone(f)
    return Triangle(formal_morphism_of(f), formal_morphism_of(g), formal_morphism_of(h))


# ---------------------------------------------------------------------------
# Verification driver
# ---------------------------------------------------------------------------


@dataclass
class FunctorReport:
    quiver: str
    seed: int
    trials: int
    checks: Dict[str, dict] = field(default_factory=dict)
    failures: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, name: str, runs: int, fails: List[dict]) -> None:
        self.checks[name] = {"runs": runs, "failures": len(fails)}
        for f in fails:
            f = dict(f)
            f["check"] = name
            self.failures.append(f)


def verify_equivalence(
    q: Quiver,
    seed: int = 7,
    trials: int = 100,
    window: Tuple[int, int] = (-2, 2),
    max_dim: int = 2,
    max_len: int = 3,
) -> FunctorReport:
    """Functoriality, additivity, shift commutation, Hom comparison,
    faithfulness on bases, essential surjectivity, and triangle exactness."""
    report = FunctorReport(quiver=repr(q), seed=seed, trials=trials)

    # (1) functoriality on composable pairs
    fails = []
    for t in range(trials):
        rng = child_rng(seed, t)
        c1 = random_complex(q, rng, max_len, max_dim)
        c2 = random_complex(q, rng, max_len, max_dim)
        c3 = random_complex(q, rng, max_len, max_dim)
        f = random_chain_map(c1, c2, rng)
        g = random_chain_map(c2, c3, rng)
        if formal_morphism_of(g @ f) != formal_morphism_of(g) @ formal_morphism_of(f):
            fails.append({"trial": t})
    report.record("functoriality", trials, fails)

    # (2) identity and shift commutation
    fails = []
    n_shift = max(10, trials // 4)
    for t in range(n_shift):
        rng = child_rng(seed, 10_000 + t)
        c = random_complex(q, rng, max_len, max_dim)
        d = random_complex(q, rng, max_len, max_dim)
        f = random_chain_map(c, d, rng)
        ok = formal_object_of(c.shift(1)) == formal_object_of(c).shift(1)
        ok = ok and formal_morphism_of(f.shift(1)) == formal_morphism_of(f).shift(1)
        ok = ok and formal_morphism_of(ChainMap.identity(c)) == FormalMorphism.identity(formal_object_of(c))
        if not ok:
            fails.append({"trial": t})
    report.record("shift", n_shift, fails)

    # (3) additivity through the canonical sum isomorphisms
    fails = []
    n_add = max(10, trials // 4)
    for t in range(n_add):
        rng = child_rng(seed, 20_000 + t)
        c1 = random_complex(q, rng, max_len, max_dim)
        c2 = random_complex(q, rng, max_len, max_dim)
        d1 = random_complex(q, rng, max_len, max_dim)
        d2 = random_complex(q, rng, max_len, max_dim)
        f1 = random_chain_map(c1, d1, rng)
        f2 = random_chain_map(c2, d2, rng)
        cs, cinc, cproj = direct_sum_complexes([c1, c2])
        ds, dinc, dproj = direct_sum_complexes([d1, d2])
        fsum = (dinc[0] @ f1 @ cproj[0]) + (dinc[1] @ f2 @ cproj[1])
        fc_sum, fc_inc, fc_proj = formal_direct_sum([formal_object_of(c1), formal_object_of(c2)])
        fd_sum, fd_inc, fd_proj = formal_direct_sum([formal_object_of(d1), formal_object_of(d2)])
        theta_c = (formal_morphism_of(cinc[0]) @ fc_proj[0]) + (formal_morphism_of(cinc[1]) @ fc_proj[1])
        theta_d = (formal_morphism_of(dinc[0]) @ fd_proj[0]) + (formal_morphism_of(dinc[1]) @ fd_proj[1])
        blockwise = (fd_inc[0] @ formal_morphism_of(f1) @ fc_proj[0]) + (
            fd_inc[1] @ formal_morphism_of(f2) @ fc_proj[1]
        )
        if formal_morphism_of(fsum) @ theta_c != theta_d @ blockwise:
            fails.append({"trial": t})
    report.record("additivity", n_add, fails)

    # (4) Hom comparison and faithfulness on shifted indecomposable pairs
    fails = []
    runs = 0
    indecs = indecomposables(q)
    reps = {i: projective_replacement(stalk_complex(m, 0))[0] for i, m in enumerate(indecs)}
    for i, mi in enumerate(indecs):
        for jj, mj in enumerate(indecs):
            for n in range(window[0], window[1] + 1):
                runs += 1
                hh = hom_mod_homotopy(reps[i], reps[jj].shift(n))
                expected = hom_dim(mi, mj) if n == 0 else (ext_dim(mi, mj) if n == 1 else 0)
                formal_d = formal_hom_dim(stalk_formal(mi, 0), stalk_formal(mj, -n))
                ok = hh.dim == expected == formal_d
                if ok and hh.dim:
                    vecs = []
                    for b in hh.basis:
                        fm = formal_morphism_of(b)
                        space = FormalHomSpace(fm.source, fm.target)
                        vecs.append(space.coords(fm))
                    stacked = vecs[0]
                    for v in vecs[1:]:
                        stacked = stacked.hstack(v)
                    ok = rank(stacked) == hh.dim
                if not ok:
                    fails.append({"pair": (i, jj), "shift": n})
    report.record("hom-comparison", runs, fails)

    # (5) essential surjectivity: graded objects are images of stalk sums
    fails = []
    n_ess = max(10, trials // 4)
    for t in range(n_ess):
        rng = child_rng(seed, 30_000 + t)
        x = random_formal_object(q, rng, max_dim)
        c = Complex(q, dict(x.components), {})
        if formal_object_of(c) != x:
            fails.append({"trial": t})
    report.record("essential-surjectivity", n_ess, fails)

    # (6) exact triangles: cone images pass the checker and match cone()
    fails = []
    n_tri = trials
    for t in range(n_tri):
        rng = child_rng(seed, 40_000 + t)
        c = random_complex(q, rng, max_len, max_dim)
        d = random_complex(q, rng, max_len, max_dim)
        f = random_chain_map(c, d, rng)
        t_img = image_of_cone_triangle(f)
        repx = is_exact(t_img)
        if not repx.passed:
            fails.append({"trial": t, "reason": "image triangle not exact"})
            continue
        t_cone = cone(t_img.f)
        z = tr3_complete(
            t_img, t_cone, FormalMorphism.identity(t_img.X), FormalMorphism.identity(t_img.Y)
        )
        if z is None or not z.is_iso():
            fails.append({"trial": t, "reason": "no triangle isomorphism onto cone()"})
    report.record("triangle-exactness", n_tri, fails)
    return report
