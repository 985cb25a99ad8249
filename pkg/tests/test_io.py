import json

import pytest

from trihered import io as tio
from trihered.linalg import Matrix
from trihered.quiver import Quiver, RepMorphism


@pytest.fixture()
def a2_file(tmp_path):
    p = tmp_path / "a2.json"
    p.write_text(json.dumps({"vertices": 2, "arrows": [{"label": "a", "from": 1, "to": 2}]}))
    return str(p)


def test_quiver_roundtrip(a2_file, tmp_path):
    q = tio.load_quiver(a2_file)
    again = tmp_path / "again.json"
    again.write_text(json.dumps(tio.quiver_to_json(q)))
    q2 = tio.load_quiver(str(again))
    assert q == q2


def test_representation_roundtrip(a2_file, tmp_path):
    q = tio.load_quiver(a2_file)
    p1 = q.projective(0)
    f = tmp_path / "p1.json"
    f.write_text(json.dumps(tio.representation_to_json(p1)))
    assert tio.load_representation(str(f), q) == p1


def test_rep_morphism_load_checks_squares(a2_file, tmp_path):
    q = tio.load_quiver(a2_file)
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "source": {"dims": [1, 1], "mats": {"a": [[1]]}},
                "target": {"dims": [1, 1], "mats": {"a": [[2]]}},
                "phi": [[[1]], [[1]]],
            }
        )
    )
    with pytest.raises(tio.FormatError, match="commute"):
        tio.load_rep_morphism(str(bad), q)


def test_complex_load_checks_dd(a2_file, tmp_path):
    q = tio.load_quiver(a2_file)
    s1 = {"dims": [1, 0], "mats": {}}
    bad = tmp_path / "cx.json"
    bad.write_text(
        json.dumps(
            {
                "terms": {"0": s1, "1": s1, "2": s1},
                "diffs": {"0": [[[1]], []], "1": [[[1]], []]},
            }
        )
    )
    with pytest.raises(tio.FormatError):
        tio.load_complex(str(bad), q)


def test_formal_morphism_roundtrip(a2_file, tmp_path):
    q = tio.load_quiver(a2_file)
    f = tmp_path / "fm.json"
    f.write_text(
        json.dumps(
            {
                "source": {"components": {"0": {"dims": [1, 0], "mats": {}}}},
                "target": {"components": {"-1": {"dims": [0, 1], "mats": {}}}},
                "hom": {},
                "ext": {"0": [5]},
            }
        )
    )
    fm = tio.load_formal_morphism(str(f), q)
    assert fm.ext[0].coords == Matrix(q.p, [[5]])


def test_missing_file_reports_location():
    with pytest.raises(tio.FormatError, match="not found"):
        tio.load_json("/nonexistent/definitely.json")
