from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from normcalib.service.app import app

client = TestClient(app)


def test_health():
    r = client.get("/v1/health")
    assert r.status_code == 200
    assert r.json() == {"status": "up"}


def test_section_endpoint_square():
    r = client.post(
        "/v1/section",
        json={"norm": {"builtin": "linf", "dim": 3}, "plane": [["1", "0", "0"], ["0", "1", "0"]]},
    )
    assert r.status_code == 200
    data = r.json()
    assert data["status"] == "ok"
    assert data["report"]["weights"] == ["1/2", "1/2"]
    assert data["report"]["area"] == "4"
    verts = {tuple(v) for v in data["report"]["polygon"]["vertices"]}
    assert verts == {("1", "1"), ("-1", "1"), ("-1", "-1"), ("1", "-1")}


def test_density_endpoint_bh_and_ht():
    r = client.post(
        "/v1/density",
        json={"norm": {"builtin": "linf", "dim": 2}, "sigma": [["1", "0"], ["0", "1"]]},
    )
    data = r.json()
    assert data["report"]["bh"] == {"value": "1/4", "pi_power": 1}
    assert data["report"]["ht"] == {"value": "2", "pi_power": -1}
    assert data["report"]["bh_str"] == "pi/4"


def test_density_endpoint_alpha_needs_plane():
    r = client.post(
        "/v1/density",
        json={
            "norm": {"builtin": "linf", "dim": 2},
            "sigma": [["1", "0"], ["0", "1"]],
            "which": "alpha",
        },
    )
    assert r.status_code == 400


def test_density_endpoint_with_plane_alpha():
    r = client.post(
        "/v1/density",
        json={
            "norm": {"builtin": "l1", "dim": 3},
            "sigma": [["1", "0", "0"], ["0", "1", "0"]],
            "plane": [["1", "0", "0"], ["0", "1", "0"]],
            "which": "alpha",
        },
    )
    data = r.json()
    assert data["report"]["alpha"] == data["report"]["bh"]  # equality on the plane


def test_calibrate_endpoint():
    r = client.post(
        "/v1/calibrate",
        json={
            "norm": {"builtin": "random", "dim": 3, "seed": 11, "facet_pairs": 6},
            "plane": [["1", "0", "0"], ["0", "1", "1"]],
            "samples": 300,
            "seed": 5,
        },
    )
    data = r.json()
    assert data["status"] == "ok"
    v = data["report"]["verification"]
    assert v["equality_residual"]["value"] == "0"
    assert Fraction(v["max_violation"]["value"]) <= 0


def test_explicit_facets_with_vertex_cross_validation():
    good = {
        "norm": {
            "dim": 2,
            "facets": [["1", "0"], ["0", "1"]],
            "vertices": [["1", "1"], ["-1", "1"]],
        },
        "sigma": [["1", "0"], ["0", "1"]],
    }
    assert client.post("/v1/density", json=good).status_code == 200
    bad = {
        "norm": {"dim": 2, "facets": [["1", "0"], ["0", "1"]], "vertices": [["1/2", "0"]]},
        "sigma": [["1", "0"], ["0", "1"]],
    }
    assert client.post("/v1/density", json=bad).status_code == 400


def test_unbounded_norm_maps_to_400():
    r = client.post(
        "/v1/density",
        json={"norm": {"dim": 3, "facets": [["1", "0", "0"], ["0", "1", "0"]]},
              "sigma": [["1", "0", "0"], ["0", "1", "0"]]},
    )
    assert r.status_code == 400
    assert "unbounded" in r.json()["detail"]


def test_prop_check_endpoint():
    r = client.post("/v1/prop-check", json={"random_polygons": 25, "seed": 2})
    data = r.json()
    assert data["status"] == "ok"
    assert data["report"]["passes"]["area_edge_identity"] == 25
    assert data["report"]["all_ok"] is True


def test_semi_elliptic_endpoint():
    r = client.post(
        "/v1/semi-elliptic",
        json={
            "norm": {"builtin": "l1", "dim": 3},
            "plane": [["1", "0", "0"], ["0", "1", "0"]],
            "trials": 6,
            "seed": 4,
            "ring": "Z2",
        },
    )
    data = r.json()
    assert data["status"] == "ok"
    assert Fraction(data["report"]["experiment"]["min_gap"]["value"]) >= 0


def test_lp_search_endpoint():
    r = client.post(
        "/v1/lp-search",
        json={
            "norm": {"builtin": "linf", "dim": 3},
            "plane": [["1", "0", "0"], ["0", "1", "0"]],
            "samples": 50,
            "seed": 1,
        },
    )
    data = r.json()
    assert data["status"] == "ok"
    assert data["report"]["lp"]["status"] == "feasible"


def test_kdim_search_endpoint():
    r = client.post(
        "/v1/kdim-search",
        json={
            "body": {"builtin": "linf", "dim": 3},
            "samples": 30,
            "seed": 6,
            "revalidation_samples": 20,
        },
    )
    data = r.json()
    assert data["status"] == "ok"
    assert data["report"]["search"]["status"] in ("sample-feasible", "sample-infeasible")


def test_validation_error_is_422():
    r = client.post("/v1/density", json={"norm": {"builtin": "linf"}})
    assert r.status_code == 422


def test_identical_requests_identical_reports():
    body = {
        "norm": {"builtin": "random", "dim": 3, "seed": 9, "facet_pairs": 5},
        "plane": [["1", "0", "0"], ["0", "1", "0"]],
        "samples": 100,
        "seed": 31,
    }
    r1 = client.post("/v1/calibrate", json=body).json()
    r2 = client.post("/v1/calibrate", json=body).json()
    assert r1 == r2
