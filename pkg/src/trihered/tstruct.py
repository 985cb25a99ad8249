"""Path reachability between shifted indecomposables, blocks, walk
rewriting, and the split t-structures generated by an indecomposable.

Nodes of the path graph are pairs (indecomposable, shift).  A directed
edge records either a nonzero morphism (same shift, or one up through an
extension class) or the suspension step to the next shift.  All verdicts
are relative to an explicit finite shift window; morphism patterns are
shift-translation-invariant, so a modest window suffices and every report
carries its window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .quiver import (
    Quiver,
    Representation,
    decompose_rep,
    ext_dim,
    hom_dim,
    indec_labels,
    indecomposables,
    NotDynkinError,
)
from .formal import FormalMorphism, FormalObject, stalk_formal
from .cones import cone

__all__ = [
    "Node",
    "PathGraph",
    "build_path_graph",
    "blocks",
    "Walk",
    "WalkStep",
    "PathResult",
    "walk_to_path",
    "WindowExhausted",
    "TStructure",
    "t_structure_from",
    "is_bounded",
    "heart_decompose",
]

Node = Tuple[int, int]  # (indecomposable index, shift)


class WindowExhausted(ValueError):
    """A rewrite pushed shifts beyond the window; carries the needed bound."""

    def __init__(self, needed: int):
        super().__init__(f"window exhausted; enlarge the upper bound to at least {needed}")
        self.needed = needed


@dataclass
class PathGraph:
    quiver: Quiver
    window: Tuple[int, int]
    indecs: List[Representation]
    labels: List[str]
    hom_edges: Set[Tuple[Node, Node]]
    shift_edges: Set[Tuple[Node, Node]]

    def nodes(self) -> List[Node]:
        lo, hi = self.window
        return [(i, k) for k in range(lo, hi + 1) for i in range(len(self.indecs))]

    def successors(self, n: Node) -> List[Node]:
        out = [b for (a, b) in self.hom_edges if a == n]
        out += [b for (a, b) in self.shift_edges if a == n]
        return sorted(set(out))

    def node_label(self, n: Node) -> str:
        i, k = n
        return f"{self.labels[i]}[{k}]" if k else self.labels[i]

    def parse_node(self, text: str) -> Node:
        name, shift = text, 0
        if text.endswith("]") and "[" in text:
            name, rest = text.rsplit("[", 1)
            shift = int(rest[:-1])
        if name not in self.labels:
            raise ValueError(f"unknown indecomposable {name!r}")
        return (self.labels.index(name), shift)

    def reachable(self, start: Node) -> Dict[Node, Optional[Node]]:
        """BFS forward reachability; value is the BFS parent (None at start)."""
        parents: Dict[Node, Optional[Node]] = {start: None}
        queue = [start]
        while queue:
            cur = queue.pop(0)
            for nxt in self.successors(cur):
                if nxt not in parents:
                    parents[nxt] = cur
                    queue.append(nxt)
        return parents


def build_path_graph(q: Quiver, window: Tuple[int, int]) -> PathGraph:
    """Edges from exact Hom/Ext dimension computations over the window."""
    if not q.is_dynkin():
        raise NotDynkinError("path graphs need a Dynkin (ADE) underlying graph")
    lo, hi = window
    if lo > hi:
        return PathGraph(q, window, [], [], set(), set())
    indecs = indecomposables(q)
    labels = indec_labels(q, indecs)
    hom_edges: Set[Tuple[Node, Node]] = set()
    shift_edges: Set[Tuple[Node, Node]] = set()
    m = len(indecs)
    for i in range(m):
        for j in range(m):
            same = i != j and hom_dim(indecs[i], indecs[j]) > 0
            up = ext_dim(indecs[i], indecs[j]) > 0
            for k in range(lo, hi + 1):
                if same:
                    hom_edges.add(((i, k), (j, k)))
                if up and k + 1 <= hi:
                    hom_edges.add(((i, k), (j, k + 1)))
    for i in range(m):
        for k in range(lo, hi):
            shift_edges.add(((i, k), (i, k + 1)))
    return PathGraph(q, window, indecs, labels, hom_edges, shift_edges)


def blocks(g: PathGraph) -> List[Set[Node]]:
    """Connected components of the underlying undirected graph."""
    nodes = g.nodes()
    if not nodes:
        return []
    adj: Dict[Node, Set[Node]] = {n: set() for n in nodes}
    for a, b in list(g.hom_edges) + list(g.shift_edges):
        adj[a].add(b)
        adj[b].add(a)
    seen: Set[Node] = set()
    out: List[Set[Node]] = []
    for n in nodes:
        if n in seen:
            continue
        comp, stack = set(), [n]
        seen.add(n)
        while stack:
            cur = stack.pop()
            comp.add(cur)
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        out.append(comp)
    return out


@dataclass(frozen=True)
class WalkStep:
    kind: str  # hom-forward | hom-backward | shift-up | shift-down
    to: Node


@dataclass
class Walk:
    start: Node
    steps: List[WalkStep]

    def validate(self, g: PathGraph) -> None:
        cur = self.start
        lo, hi = g.window
        for st in self.steps:
            i, k = st.to
            if not (0 <= i < len(g.indecs) and lo <= k <= hi):
                raise ValueError(f"node {st.to} outside the graph")
            if st.kind == "hom-forward":
                if (cur, st.to) not in g.hom_edges:
                    raise ValueError(f"no hom edge {cur} -> {st.to}")
            elif st.kind == "hom-backward":
                if (st.to, cur) not in g.hom_edges:
                    raise ValueError(f"no hom edge {st.to} -> {cur}")
            elif st.kind == "shift-up":
                if st.to != (cur[0], cur[1] + 1):
                    raise ValueError("shift-up must raise the shift by one")
            elif st.kind == "shift-down":
                if st.to != (cur[0], cur[1] - 1):
                    raise ValueError("shift-down must lower the shift by one")
            else:
                raise ValueError(f"unknown step kind {st.kind!r}")
            cur = st.to


@dataclass
class PathResult:
    nodes: List[Node]
    m: int
    rewrites: int


def _first_nonzero_morphism(g: PathGraph, a: Node, b: Node) -> FormalMorphism:
    """Deterministic nonzero morphism a -> b along a hom edge."""
    from .quiver import hom_ext_presentation, ExtClass
    from .linalg import Matrix
    import numpy as np

    (i, k), (j, l) = a, b
    mi, mj = g.indecs[i], g.indecs[j]
    src = stalk_formal(mi, -k)
    tgt = stalk_formal(mj, -l)
    p = g.quiver.p
    if l == k:
        he = hom_ext_presentation(mi, mj)
        assert he.hom_dim > 0
        return FormalMorphism(src, tgt, {-k: he.hom_basis[0]}, {})
    if l == k + 1:
        he = hom_ext_presentation(mi, mj)
        assert he.ext_dim > 0
        unit = Matrix(p, np.eye(he.ext_dim, dtype=np.int64)[:, :1])
        return FormalMorphism(src, tgt, {}, {-k: ExtClass(mi, mj, unit)})
    raise ValueError("nodes are not hom-adjacent")


def _indec_index(g: PathGraph, dims: Tuple[int, ...]) -> int:
    for i, r in enumerate(g.indecs):
        if r.dims == dims:
            return i
    raise AssertionError("summand does not match any indecomposable")


def walk_to_path(g: PathGraph, walk: Walk, seed: int = 0) -> PathResult:
    """Rewrite a walk into a forward path landing on a nonnegative shift of
    the original endpoint.

    Backward shifts drop a node and shift the tail up; backward morphisms
    are replaced through a cone summand with both composites nonzero.  Each
    rewrite removes one backward step.
    """
    walk.validate(g)
    lo, hi = g.window
    seq: List[Node] = [walk.start] + [st.to for st in walk.steps]
    rels: List[str] = []
    for st in walk.steps:
        rels.append(
            {
                "hom-forward": "fwd",
                "hom-backward": "back",
                "shift-up": "fwd",
                "shift-down": "down",
            }[st.kind]
        )
    end_shift0 = seq[-1][1]
    rewrites = 0

    def shift_tail(idx: int) -> None:
        # shift nodes from idx on by +1, respecting the window
        for t in range(idx, len(seq)):
            i, k = seq[t]
            if k + 1 > hi:
                raise WindowExhausted(k + 1)
            seq[t] = (i, k + 1)

    while True:
        pos = next((t for t, r in enumerate(rels) if r in ("back", "down")), None)
        if pos is None:
            break
        if rels[pos] == "down":
            # X_{i+1} = X_i[-1]: drop it and shift the tail
            del seq[pos + 1]
            del rels[pos]
            shift_tail(pos + 1)
            rewrites += 1
            continue
        a, b = seq[pos], seq[pos + 1]  # backward morphism b -> a
        if a == b:
            # invertible case: collapse the step
            del seq[pos + 1]
            del rels[pos]
            rewrites += 1
            continue
        f = _first_nonzero_morphism(g, b, a)
        t = cone(f)
        replaced = False
        for deg in sorted(t.Z.components):
            comp = t.Z.components[deg]
            for summand in decompose_rep(comp, seed=seed):
                jdx = _indec_index(g, summand.rep.dims)
                node = (jdx, -deg)
                # composite X_i -> Z' nonzero?
                gm = t.g
                part_h = gm.hom.get(deg)
                ok_in = part_h is not None and not (summand.project @ part_h).is_zero()
                if not ok_in:
                    part_e = gm.ext.get(deg + 1)
                    ok_in = part_e is not None and _push_nonzero(part_e, summand.project)
                h = t.h
                part_hh = h.hom.get(deg)
                ok_out = part_hh is not None and not (part_hh @ summand.include).is_zero()
                if not ok_out:
                    part_he = h.ext.get(deg)
                    ok_out = part_he is not None and _pull_nonzero(part_he, summand.include)
                if ok_in and ok_out:
                    if node[1] > hi or node[1] < lo:
                        raise WindowExhausted(max(node[1], hi))
                    bi, bk = b
                    if bk + 1 > hi:
                        raise WindowExhausted(bk + 1)
                    seq[pos + 1 : pos + 2] = [node, (bi, bk + 1)]
                    rels[pos : pos + 1] = ["fwd", "fwd"]
                    shift_tail(pos + 3)
                    replaced = True
                    break
            if replaced:
                break
        assert replaced, "a cone summand with both composites nonzero must exist"
        rewrites += 1

    # collapse repeated nodes (endomorphism composites), then validate
    t = 0
    while t < len(seq) - 1:
        if seq[t] == seq[t + 1]:
            del seq[t + 1]
        else:
            t += 1
    for t in range(len(seq) - 1):
        a, b = seq[t], seq[t + 1]
        if (a, b) not in g.hom_edges and (a, b) not in g.shift_edges:
            raise AssertionError(f"rewrite produced a non-edge {a} -> {b}")
    return PathResult(nodes=seq, m=seq[-1][1] - end_shift0, rewrites=rewrites)


def _push_nonzero(e, proj) -> bool:
    from .quiver import transport_ext

    return not transport_ext(e, post=proj).is_zero()


def _pull_nonzero(e, inc) -> bool:
    from .quiver import transport_ext

    return not transport_ext(e, pre=inc).is_zero()


# ---------------------------------------------------------------------------
# t-structures from a generator
# ---------------------------------------------------------------------------


@dataclass
class TStructure:
    graph: PathGraph
    generator: Node
    leq0: FrozenSet[Node]
    geq0: FrozenSet[Node]
    heart: FrozenSet[Node]
    report: dict = field(default_factory=dict)

    @property
    def split_verified(self) -> bool:
        return self.report.get("split", False)

    @property
    def bounded_verified(self) -> bool:
        return self.report.get("bounded", False)


def _node_hom_dim(g: PathGraph, a: Node, b: Node) -> int:
    (i, k), (j, l) = a, b
    if l == k:
        return hom_dim(g.indecs[i], g.indecs[j])
    if l == k + 1:
        return ext_dim(g.indecs[i], g.indecs[j])
    return 0


def t_structure_from(g: PathGraph, m: Node) -> TStructure:
    """Aisles by directed reachability from the generator, with the
    t-structure axioms and the splitness criterion checked in the window."""
    lo, hi = g.window
    reach = set(g.reachable(m).keys())
    leq0 = frozenset(reach)
    geq0 = frozenset(
        n for n in g.nodes() if (n[0], n[1] - 1) not in reach
    )  # shift below the window counts as unreachable: verdict window-relative
    heart = leq0 & geq0
    report: dict = {"window": [lo, hi]}

    # (t1): no nonzero Hom from the aisle into the shifted-down co-aisle
    over = [(n[0], n[1] - 1) for n in geq0 if lo <= n[1] - 1 <= hi]
    t1_bad = [
        (a, b) for a in leq0 for b in over if _node_hom_dim(g, a, b) > 0
    ]
    report["t1"] = not t1_bad
    if t1_bad:
        report["t1_witness"] = [[list(a), list(b)] for a, b in t1_bad[:3]]

    # (t2): shift closure inside the window
    t2_ok = all((n[0], n[1] + 1) in leq0 for n in leq0 if n[1] + 1 <= hi)
    t2_ok = t2_ok and all((n[0], n[1] - 1) in geq0 for n in geq0 if n[1] - 1 >= lo)
    report["t2"] = t2_ok

    # (t3): each indecomposable lands in an aisle (X in aisle, or X[1] in co-aisle)
    t3_ok = True
    for n in g.nodes():
        if n in leq0:
            continue
        up = (n[0], n[1] + 1)
        if up[1] <= hi and up not in geq0:
            t3_ok = False
    report["t3"] = t3_ok

    # split: Hom(T^{>0}, T^{<0}) = 0
    tpos = [(n[0], n[1] - 1) for n in geq0 if lo <= n[1] - 1 <= hi]
    tneg = [(n[0], n[1] + 1) for n in leq0 if lo <= n[1] + 1 <= hi]
    split_bad = [(a, b) for a in tpos for b in tneg if _node_hom_dim(g, a, b) > 0]
    report["split"] = not split_bad
    if split_bad:
        report["split_witness"] = [[list(a), list(b)] for a, b in split_bad[:3]]

    bounded, witness = is_bounded(g, m)
    report["bounded"] = bounded
    if witness is not None:
        report["bounded_witness"] = [list(n) for n in witness]
    return TStructure(g, m, leq0, geq0, heart, report)


def is_bounded(g: PathGraph, m: Node) -> Tuple[bool, Optional[List[Node]]]:
    """No directed path from the generator to its downward shift; on
    failure the witness path is returned."""
    lo, hi = g.window
    target = (m[0], m[1] - 1)
    if target[1] < lo:
        raise ValueError("window too small: generator shift -1 lies outside")
    parents = g.reachable(m)
    if target not in parents:
        return True, None
    path = [target]
    while parents[path[-1]] is not None:
        path.append(parents[path[-1]])
    path.reverse()
    return False, path


def heart_decompose(ts: TStructure, x: FormalObject, seed: int = 0) -> List[Tuple[Node, int]]:
    """Write a graded object as shifted heart pieces: each indecomposable
    summand at degree d is assigned the minimal m with a path from the
    generator to its m-th shift."""
    g = ts.graph
    lo, hi = g.window
    reach = ts.leq0
    out: List[Tuple[Node, int]] = []
    for d, comp in x.components.items():
        for summand in decompose_rep(comp, seed=seed):
            i = _indec_index(g, summand.rep.dims)
            base_shift = -d
            if not (lo <= base_shift <= hi):
                raise ValueError(f"summand shift {base_shift} outside window {g.window}")
            found = None
            for target_shift in range(lo, hi + 1):
                if (i, target_shift) in reach:
                    found = target_shift
                    break
            if found is None:
                raise ValueError(
                    f"no shift of {g.labels[i]} is reachable within the window"
                )
            m = found - base_shift
            out.append(((i, found), m))
    return out
