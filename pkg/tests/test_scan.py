import xml.etree.ElementTree as ET

import pytest

from qspectra.cohomology import CSV_COLUMNS, ToleranceConfig
from qspectra.errors import BadParameter
from qspectra.model import ModelParams, ReferenceSpectra
from qspectra.regions import Points
from qspectra.scan import (GridSpec, emit, model_grids, point_class, portrait_from_json,
                           portrait_to_csv, portrait_to_json, scan, verify_q_projection)

from conftest import nilpotent_pair

CHEAP = ToleranceConfig.with_sizes([60, 120], check_lr=False)


@pytest.fixture(scope="module")
def model_portrait(model):
    return scan(model, model_grids(0.5, angles=2), CHEAP)


def test_gridspec_validation_and_json():
    with pytest.raises(BadParameter):
        GridSpec(resolution=1)
    with pytest.raises(BadParameter):
        GridSpec(axis="Z")
    g = GridSpec("both", 0.5j, 2.0, 7, 2, "polar", 6)
    assert GridSpec.from_json(g.to_json()) == g
    assert len(g.base_params()) == 1 + 6 * 7


def test_zero_pair_cross(zero_pair):
    p = scan(zero_pair, GridSpec("both", 0j, 1.0, 11), CHEAP)
    spec = {(c.point.axis, complex(c.point.value)) for c in p.points if c.in_sigma}
    assert spec == {("X", 0j), ("Y", 0j)}
    assert len(p.points) == 2 * 121


def test_model_axis_y_points(model):
    g = GridSpec("Y", 0j, 0.01, 2, 0, "points", values=(0, 0.25, 0.5, 1, 1.3))
    p = scan(model, g, CHEAP)
    assert [complex(c.point.value) for c in p.points if c.in_sigma] == [1]


def test_model_annulus(model_portrait):
    for c in model_portrait.on_axis("X"):
        r = abs(complex(c.point.value))
        assert c.in_sigma == (1 - 1e-9 <= r <= 2 + 1e-9)


def test_summary_counts_recompute(model_portrait):
    s = model_portrait.summary
    xs = model_portrait.on_axis("X")
    assert s["X"]["points"] == len(xs)
    assert s["X"]["in_sigma"] == sum(c.in_sigma for c in xs)
    assert s["X"]["in_sigma_e"] == 4
    assert s["X"]["pi"][2] == s["X"]["in_sigma"] == s["X"]["delta"][0]


def test_refinement_adds_points_near_boundary(model):
    g = GridSpec("X", 0j, 2.5, 5, 1, "polar", 2)
    p = scan(model, g, CHEAP)
    assert max(p.levels) == 1 and len(p.points) > 1 + 2 * 5
    refined = [abs(complex(c.point.value)) for c, l in zip(p.points, p.levels) if l == 1]
    # cells straddling radius 2.0..2.5 or 0.5..1.0 were split
    assert any(2.0 < r < 2.5 for r in refined)


def test_refinement_skips_uniform_cells(zero_pair):
    p = scan(zero_pair, GridSpec("X", 3 + 3j, 0.5, 3, 2), CHEAP)
    assert max(p.levels) == 0


def test_q_projection_model(model_portrait):
    ref = ReferenceSpectra(ModelParams(0.5))
    rep = verify_q_projection(model_portrait, ref.sigma_T, ref.sigma_S, 0.5)
    assert rep.holds and rep.forward_fails and rep.backward_fails
    assert rep.forward_witness == 1.5 and rep.backward_witness == 0.5


def test_q_projection_zero_pair(zero_pair):
    p = scan(zero_pair, GridSpec("both", 0j, 1.0, 5), CHEAP)
    rep = verify_q_projection(p, Points((0,)), Points((0,)), 0.5)
    assert rep.holds and not rep.forward_fails and not rep.backward_fails


def test_q_projection_nilpotent():
    pair = nilpotent_pair(exact=False)
    g = GridSpec("both", 0j, 0.1, 2, 0, "points", values=(0, 1, 3, 9, 1 / 3, 2, 1j))
    p = scan(pair, g, CHEAP)
    rep = verify_q_projection(p, pair.T.spectrum(), pair.S.spectrum(), 3)
    assert rep.holds
    assert [(c.point.axis, complex(c.point.value)) for c in p.spectral_points()] == [("Y", 1), ("Y", 9)]


def test_emit_empty_portrait(zero_pair, tmp_path):
    p = scan(zero_pair, GridSpec("X", 0j, 1.0, 2, 0, "points"), CHEAP)
    out = tmp_path / "empty.csv"
    text = emit(p, "csv", out)
    assert text == ",".join(CSV_COLUMNS) + "\n" == out.read_text()
    assert portrait_from_json(portrait_to_json(p)) == p
    ET.fromstring(emit(p, "svg"))


def test_json_roundtrip(model_portrait):
    assert portrait_from_json(portrait_to_json(model_portrait)) == model_portrait


def test_csv_columns(model_portrait):
    lines = portrait_to_csv(model_portrait).splitlines()
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert len(lines) == 1 + len(model_portrait.points)
    row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
    assert row["axis"] == "X" and row["in_sigma"] == "0"


def test_svg_annulus_ring(model_portrait):
    svg = emit(model_portrait, "svg")
    root = ET.fromstring(svg)
    fills = [e.get("fill") for e in root.iter("{http://www.w3.org/2000/svg}rect")]
    # one extra swatch per class in the legend
    assert fills.count("#3b6fb6") - 1 == sum(point_class(c) == "spectral" for c in model_portrait.points)
    assert fills.count("#d1495b") >= 4
    assert "http" not in svg.replace('xmlns="http://www.w3.org/2000/svg"', "")


def test_scan_deterministic(model):
    g = model_grids(0.5, angles=1, radii=8)
    a = scan(model, g, CHEAP)
    b = scan(model, g, CHEAP)
    assert portrait_to_csv(a) == portrait_to_csv(b)
    assert portrait_to_json(a) == portrait_to_json(b)


def test_parallel_equals_serial(model):
    g = GridSpec("X", 0j, 2.5, 6, 0, "polar", 1)
    a = scan(model, g, CHEAP, workers=1)
    b = scan(model, g, CHEAP, workers=2)
    assert portrait_to_json(a) == portrait_to_json(b)
