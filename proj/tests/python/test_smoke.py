"""Smoke tests for the python module: exact values across the boundary."""

import json
import pathlib

import pytest

import tropex

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_polytope_queries():
    p = tropex.Polytope.from_json((DATA / "simplex2.json").read_text())
    assert p.dim() == 2
    assert p.ambient_dim() == 2
    assert not p.contains_line()
    assert not p.is_cone()
    assert p.contains(["1/3", "1/3"])
    assert p.contains([0, 0])
    assert not p.contains(["1", "1"])


def test_round_trip_is_stable():
    text = (DATA / "simplex2.json").read_text()
    p = tropex.Polytope.from_json(text)
    again = tropex.Polytope.from_json(p.to_json())
    assert again.to_json() == p.to_json()


def test_strata_dims():
    p = tropex.Polytope.from_json((DATA / "simplex2.json").read_text())
    assert sorted(tropex.strata_dims(p), reverse=True) == [2, 2, 2, 1, 1, 1, 0]


def test_hilbert_basis():
    quadrant = json.dumps({
        "ambient_dim": 2,
        "constraints": [
            {"slope": ["1", "0"], "constant": "0", "rel": "ge"},
            {"slope": ["0", "1"], "constant": "0", "rel": "ge"},
        ],
    })
    basis = tropex.hilbert_basis(tropex.Polytope.from_json(quadrant))
    assert sorted(basis) == [["0", "1"], ["1", "0"]]


def test_smith_divisors():
    assert tropex.smith_divisors([[2, 4], [6, 8]]) == ["2", "4"]
    assert tropex.smith_divisors([["1", "0"], ["0", "1"]]) == ["1", "1"]
    big = 10**30
    assert tropex.smith_divisors([[big]]) == [str(big)]


def test_atlas_to_complex():
    atlas = tropex.Atlas.from_json(json.dumps({
        "mode": "exploded",
        "charts": [{"ambient_dim": 1, "constraints": []}],
        "gluings": [],
    }))
    complex_ = tropex.tropical_part(atlas)
    assert len(complex_) == 1
    assert tropex.is_basic_space(complex_)
    closed = tropex.trop_closure(complex_)
    assert len(closed) == 1


def test_curve_moduli_and_gluing():
    gamma = tropex.CurveType.from_json((DATA / "gamma-2v.json").read_text())
    plane = tropex.TropicalComplex.from_json((DATA / "plane.json").read_text())
    assert len(gamma) == 2
    assert tropex.moduli_dim(gamma, plane) == 3
    summary = tropex.glue_summary(gamma, plane)
    assert summary["verified"] is True
    assert summary["transverse"] is True
    assert summary["dim"] == 4
    assert summary["pieces"] == 2


def test_cut_edge_monoids():
    assert tropex.cut_edge_monoids_verified()


def test_errors_become_python_exceptions():
    with pytest.raises(ValueError):
        tropex.Polytope.from_json("{ not json")
    with pytest.raises(ValueError):
        tropex.Polytope.from_json(json.dumps({
            "ambient_dim": 1,
            "constraints": [
                {"slope": ["1"], "constant": "0", "rel": "gt"},
                {"slope": ["-1"], "constant": "0", "rel": "gt"},
            ],
        }))
