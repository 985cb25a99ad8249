"""JSON file formats.

Vertex indices are 1-based on disk and 0-based in memory.  Formats:

  quiver:            {"vertices": n, "arrows": [{"label": "a", "from": 1, "to": 2}]}
  representation:    {"dims": [...], "mats": {"a": [[...]]}}
  rep morphism:      {"source": rep, "target": rep, "phi": [[[...]], ...]}
  complex:           {"terms": {"0": rep, ...}, "diffs": {"0": morphism-phi, ...}}
  chain map:         {"source": complex, "target": complex, "comps": {"0": phi}}
  formal object:     {"components": {"0": rep, ...}}
  formal morphism:   {"source": obj, "target": obj, "hom": {"0": phi}, "ext": {"0": [coords]}}
  walk:              {"start": ["P1", 0], "steps": [{"kind": "hom-backward", "to": ["S1", 0]}]}
"""

from __future__ import annotations

import json
from typing import Optional

import numpy as np

from .linalg import Matrix
from .quiver import ExtClass, Quiver, RepMorphism, Representation
from .complexes import ChainMap, Complex
from .formal import FormalMorphism, FormalObject
from .tstruct import PathGraph, Walk, WalkStep

__all__ = [
    "FormatError",
    "load_quiver",
    "quiver_to_json",
    "load_representation",
    "representation_to_json",
    "load_rep_morphism",
    "load_complex",
    "load_chain_map",
    "load_formal_object",
    "load_formal_morphism",
    "load_walk",
    "load_json",
]


class FormatError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise FormatError(path, "file not found")
    except json.JSONDecodeError as exc:
        raise FormatError(path, f"invalid JSON ({exc})")


def load_quiver(path: str, p: Optional[int] = None) -> Quiver:
    data = load_json(path)
    try:
        n = int(data["vertices"])
        arrows = [(a["label"], int(a["from"]) - 1, int(a["to"]) - 1) for a in data.get("arrows", [])]
    except (KeyError, TypeError) as exc:
        raise FormatError(path, f"bad quiver structure ({exc})")
    try:
        return Quiver(n, arrows, p)
    except ValueError as exc:
        raise FormatError(path, str(exc))


def quiver_to_json(q: Quiver) -> dict:
    return {
        "vertices": q.n,
        "arrows": [{"label": a.label, "from": a.src + 1, "to": a.tgt + 1} for a in q.arrows],
    }


def _rep_from_data(q: Quiver, data, location: str) -> Representation:
    try:
        dims = [int(d) for d in data["dims"]]
        mats = {}
        for lab, rows in data.get("mats", {}).items():
            arr = np.array(rows, dtype=np.int64) if rows else np.zeros((0, 0), dtype=np.int64)
            if arr.ndim == 1:
                arr = arr.reshape(0, 0) if arr.size == 0 else arr.reshape(1, -1)
            a = q.arrow_by_label.get(lab)
            if a is None:
                raise FormatError(location, f"unknown arrow label {lab!r}")
            if arr.size == 0:
                arr = np.zeros((dims[a.tgt], dims[a.src]), dtype=np.int64)
            mats[lab] = Matrix(q.p, arr)
        return Representation(q, dims, mats)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(location, f"bad representation ({exc})")


def load_representation(path: str, q: Quiver) -> Representation:
    return _rep_from_data(q, load_json(path), path)


def representation_to_json(r: Representation) -> dict:
    return {
        "dims": list(r.dims),
        "mats": {lab: m.tolist() for lab, m in r.mats.items() if m.rows and m.cols},
    }


def _morphism_from_data(q: Quiver, src: Representation, tgt: Representation, phi_data, location: str) -> RepMorphism:
    phi = []
    for v in range(q.n):
        rows = phi_data[v] if v < len(phi_data) else []
        arr = np.array(rows, dtype=np.int64) if rows else np.zeros((tgt.dims[v], src.dims[v]), dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((tgt.dims[v], src.dims[v]), dtype=np.int64)
        phi.append(Matrix(q.p, arr))
    try:
        return RepMorphism(src, tgt, phi)
    except ValueError as exc:
        raise FormatError(location, str(exc))


def load_rep_morphism(path: str, q: Quiver) -> RepMorphism:
    data = load_json(path)
    if "phi" not in data:
        raise FormatError(path, "missing 'phi'")
    src = _rep_from_data(q, data["source"], path + "#source")
    tgt = _rep_from_data(q, data["target"], path + "#target")
    return _morphism_from_data(q, src, tgt, data["phi"], path)


def _complex_from_data(q: Quiver, data, location: str) -> Complex:
    terms = {int(n): _rep_from_data(q, r, f"{location}#term{n}") for n, r in data.get("terms", {}).items()}
    diffs = {}
    for n, phi in data.get("diffs", {}).items():
        n = int(n)
        src = terms.get(n, q.zero_rep())
        tgt = terms.get(n + 1, q.zero_rep())
        diffs[n] = _morphism_from_data(q, src, tgt, phi, f"{location}#diff{n}")
    try:
        return Complex(q, terms, diffs)
    except ValueError as exc:
        raise FormatError(location, str(exc))


def load_complex(path: str, q: Quiver) -> Complex:
    return _complex_from_data(q, load_json(path), path)


def load_chain_map(path: str, q: Quiver) -> ChainMap:
    data = load_json(path)
    src = _complex_from_data(q, data["source"], path + "#source")
    tgt = _complex_from_data(q, data["target"], path + "#target")
    comps = {}
    for n, phi in data.get("comps", {}).items():
        n = int(n)
        comps[n] = _morphism_from_data(q, src.term(n), tgt.term(n), phi, f"{path}#comp{n}")
    try:
        return ChainMap(src, tgt, comps)
    except ValueError as exc:
        raise FormatError(path, str(exc))


def _formal_object_from_data(q: Quiver, data, location: str) -> FormalObject:
    comps = {int(n): _rep_from_data(q, r, f"{location}#comp{n}") for n, r in data.get("components", {}).items()}
    return FormalObject(q, comps)


def load_formal_object(path: str, q: Quiver) -> FormalObject:
    return _formal_object_from_data(q, load_json(path), path)


def load_formal_morphism(path: str, q: Quiver) -> FormalMorphism:
    data = load_json(path)
    src = _formal_object_from_data(q, data["source"], path + "#source")
    tgt = _formal_object_from_data(q, data["target"], path + "#target")
    hom = {}
    for n, phi in data.get("hom", {}).items():
        n = int(n)
        hom[n] = _morphism_from_data(q, src.component(n), tgt.component(n), phi, f"{path}#hom{n}")
    ext = {}
    for n, coords in data.get("ext", {}).items():
        n = int(n)
        vec = np.array(coords, dtype=np.int64).reshape(-1, 1)
        try:
            ext[n] = ExtClass(src.component(n), tgt.component(n - 1), Matrix(q.p, vec))
        except ValueError as exc:
            raise FormatError(f"{path}#ext{n}", str(exc))
    try:
        return FormalMorphism(src, tgt, hom, ext)
    except ValueError as exc:
        raise FormatError(path, str(exc))


def load_walk(path: str, g: PathGraph) -> Walk:
    data = load_json(path)
    try:
        start = g.parse_node(f'{data["start"][0]}[{int(data["start"][1])}]')
        steps = [
            WalkStep(kind=s["kind"], to=g.parse_node(f'{s["to"][0]}[{int(s["to"][1])}]'))
            for s in data.get("steps", [])
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(path, f"bad walk ({exc})")
    return Walk(start=start, steps=steps)
