"""Grid scans over the character cross, refinement, verification and emission."""
from __future__ import annotations

import csv
import html
import io
import json
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from threadpoolctl import threadpool_limits

from .cohomology import (CSV_COLUMNS, CohomologyReport, PointClassification, ToleranceConfig,
                         classification_row, classify_point)
from .errors import BadParameter, Inconclusive
from .koszul import CharacterPoint
from .pair import QPair, pair_to_json
from .regions import PlaneSet
from .scalars import parse_scalar, scalar_to_json

__all__ = ["GridSpec", "SpectralPortrait", "scan", "verify_q_projection", "QProjectionReport",
           "emit", "portrait_to_csv", "portrait_to_json", "portrait_from_json", "portrait_to_svg",
           "model_grids", "point_class"]

LAYOUTS = ("square", "polar", "points")


@dataclass(frozen=True)
class GridSpec:
    """Sample points on one or both axes of the cross.

    ``square``: ``resolution x resolution`` points on the square of half width
    ``half_width`` around ``center``.  ``polar``: the origin plus ``angles``
    rays of ``resolution`` radii up to ``half_width``.  ``points``: the explicit
    ``values``, with ``half_width`` read as the sampling resolution.
    """

    axis: str = "X"
    center: complex = 0j
    half_width: float = 1.0
    resolution: int = 11
    refine_depth: int = 0
    layout: str = "square"
    angles: int = 24
    values: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))
        if self.axis not in ("X", "Y", "both"):
            raise BadParameter(f"axis must be X, Y or both, got {self.axis!r}")
        if self.layout not in LAYOUTS:
            raise BadParameter(f"layout must be one of {LAYOUTS}")
        if self.resolution < 2 and self.layout != "points":
            raise BadParameter("resolution must be at least 2")
        if self.refine_depth < 0:
            raise BadParameter("refine_depth must be non-negative")
        if self.half_width <= 0:
            raise BadParameter("half_width must be positive")
        if self.layout == "polar" and self.angles < 1:
            raise BadParameter("polar grids need at least one angle")

    @property
    def axes(self):
        return ("X", "Y") if self.axis == "both" else (self.axis,)

    @property
    def cell(self) -> float:
        if self.layout == "square":
            return 2 * self.half_width / (self.resolution - 1)
        if self.layout == "polar":
            return self.half_width / self.resolution
        return self.half_width

    def _param_to_z(self, u, v):
        if self.layout == "polar":
            return self.center + v * complex(math.cos(u), math.sin(u))
        return complex(u, v)

    def base_params(self):
        """Parameter pairs ``(u, v)`` of the base grid in row-major order."""
        c, h, n = self.center, self.half_width, self.resolution
        if self.layout == "square":
            us = [c.real - h + 2 * h * j / (n - 1) for j in range(n)]
            vs = [c.imag - h + 2 * h * i / (n - 1) for i in range(n)]
            return [(u, v) for v in vs for u in us]
        if self.layout == "polar":
            out = [(0.0, 0.0)]
            for a in range(self.angles):
                u = 2 * math.pi * a / self.angles
                out.extend((u, h * k / n) for k in range(1, n + 1))
            return out
        return [(z.real, z.imag) for z in self.values]

    def base_cells(self):
        """Cells ``(u0, v0, du, dv)`` used for refinement."""
        c, h, n = self.center, self.half_width, self.resolution
        if self.layout == "square":
            d = 2 * h / (n - 1)
            return [(c.real - h + j * d, c.imag - h + i * d, d, d)
                    for i in range(n - 1) for j in range(n - 1)]
        if self.layout == "polar":
            du, dv = 2 * math.pi / self.angles, h / n
            return [(a * du, k * dv, du, dv) for a in range(self.angles) for k in range(n)]
        return []

    def z(self, u, v) -> complex:
        return self._param_to_z(u, v)

    def to_json(self):
        return {"schema": 1, "axis": self.axis, "center": scalar_to_json(self.center),
                "half_width": self.half_width, "resolution": self.resolution,
                "refine_depth": self.refine_depth, "layout": self.layout, "angles": self.angles,
                "values": [scalar_to_json(v) for v in self.values]}

    @classmethod
    def from_json(cls, doc):
        if doc.get("schema", 1) != 1:
            raise ValueError(f"unsupported grid schema {doc.get('schema')!r}")
        kw = {k: doc[k] for k in ("axis", "half_width", "resolution", "refine_depth", "layout", "angles")
              if k in doc}
        if "center" in doc:
            kw["center"] = complex(parse_scalar(doc["center"], exact=False))
        if "values" in doc:
            kw["values"] = tuple(complex(parse_scalar(v, exact=False)) for v in doc["values"])
        return cls(**kw)


def model_grids(q, angles: int = 24, radii: int = 40, refine_depth: int = 0):
    """Default grids for the shift/diagonal model: a polar X grid and Y candidates."""
    q = complex(q)
    gx = GridSpec("X", 0j, 1.25 / abs(q), radii, refine_depth, "polar", angles)
    ys = [0j] + [q ** k for k in range(13)]
    for r in (0.35, 0.7, 1.3):
        ys.extend(r * complex(math.cos(t), math.sin(t)) for t in np.arange(8) * math.pi / 4)
    gy = GridSpec("Y", 0j, abs(q) ** 12 / 2, 2, 0, "points", values=tuple(ys))
    return gx, gy


def point_class(c: PointClassification) -> str:
    if c.in_sigma_e:
        return "essential"
    if "inconclusive" in c.flags:
        return "inconclusive"
    return "spectral" if c.in_sigma else "resolvent"


@dataclass(frozen=True)
class SpectralPortrait:
    pair: dict
    grids: tuple
    cfg: ToleranceConfig
    points: tuple
    levels: tuple

    @property
    def summary(self) -> dict:
        out = {}
        for axis in ("X", "Y"):
            pts = [c for c in self.points if c.point.axis == axis]
            if not pts:
                continue
            spec = [complex(c.point.value) for c in pts if c.in_sigma]
            out[axis] = {
                "points": len(pts),
                "in_sigma": sum(c.in_sigma for c in pts),
                "in_sigma_e": sum(c.in_sigma_e for c in pts),
                "pi": [sum(c.in_sigma_pi[n] for c in pts) for n in range(3)],
                "delta": [sum(c.in_sigma_delta[n] for c in pts) for n in range(3)],
                "in_sigma_l_or_r": sum(c.in_sigma_l_or_r for c in pts),
                "inconclusive": sum("inconclusive" in c.flags for c in pts),
                "boundary": sum("boundary" in c.flags for c in pts),
                "bbox": ([min(z.real for z in spec), max(z.real for z in spec),
                          min(z.imag for z in spec), max(z.imag for z in spec)] if spec else None),
            }
        return out

    def on_axis(self, axis):
        return [c for c in self.points if c.point.axis == axis]

    def spectral_points(self, axis=None):
        return [c for c in self.points if c.in_sigma and (axis is None or c.point.axis == axis)]

    @property
    def cell(self) -> float:
        return max(g.cell for g in self.grids) if self.grids else 0.0


_WORKER = {}


def _init_worker(pair, cfg):
    _WORKER["pair"], _WORKER["cfg"] = pair, cfg
    _WORKER["limits"] = threadpool_limits(limits=1)


def _classify(pair, point, cfg):
    try:
        return classify_point(pair, point, cfg)
    except Inconclusive as exc:
        return exc.classification


def _worker_task(point):
    return _classify(_WORKER["pair"], point, _WORKER["cfg"])


class _Runner:
    def __init__(self, pair, cfg, workers):
        self.pair, self.cfg, self.workers = pair, cfg, workers
        self.pool = None

    def __enter__(self):
        if self.workers > 1:
            ctx = multiprocessing.get_context("spawn")
            self.pool = ProcessPoolExecutor(self.workers, mp_context=ctx, initializer=_init_worker,
                                            initargs=(self.pair, self.cfg))
        return self

    def __exit__(self, *exc):
        if self.pool is not None:
            self.pool.shutdown()

    def run(self, points):
        if not points:
            return []
        if self.pool is None:
            with threadpool_limits(limits=1):
                return [_classify(self.pair, p, self.cfg) for p in points]
        chunk = max(1, len(points) // (4 * self.workers))
        return list(self.pool.map(_worker_task, points, chunksize=chunk))


def _key(axis, z):
    return axis, round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0


def scan(pair: QPair, grids, cfg: ToleranceConfig = ToleranceConfig(), workers: int = 1) -> SpectralPortrait:
    """Classify every grid point, refining cells whose corners disagree.

    Points are ordered by grid, then axis, then refinement level, and
    row-major within a level.  The essential band is widened to half a grid
    cell so rule-based essential sets are hit by the sampling.
    """
    if isinstance(grids, GridSpec):
        grids = (grids,)
    grids = tuple(grids)
    cell = max(g.cell for g in grids) if grids else 0.0
    cfg = replace(cfg, essential_band=max(cfg.essential_band, cell / 2))
    results, levels, seen = [], [], {}
    with _Runner(pair, cfg, workers) as runner:
        for grid in grids:
            for axis in grid.axes:
                params = grid.base_params()
                todo = []
                for u, v in params:
                    z = grid.z(u, v)
                    if _key(axis, z) not in seen:
                        seen[_key(axis, z)] = None
                        todo.append(CharacterPoint(axis, z))
                level = 0
                for c in runner.run(todo):
                    seen[_key(axis, complex(c.point.value))] = c
                    results.append(c)
                    levels.append(level)
                cells = grid.base_cells()
                while cells and level < grid.refine_depth:
                    level += 1
                    split, todo = [], []
                    for (u0, v0, du, dv) in cells:
                        corners = [seen[_key(axis, grid.z(u0 + a * du, v0 + b * dv))]
                                   for a in (0, 1) for b in (0, 1)]
                        if len({c.in_sigma for c in corners}) < 2:
                            continue
                        hu, hv = du / 2, dv / 2
                        for a, b in ((1, 0), (0, 1), (1, 1), (2, 1), (1, 2)):
                            z = grid.z(u0 + a * hu, v0 + b * hv)
                            if _key(axis, z) not in seen:
                                seen[_key(axis, z)] = None
                                todo.append(CharacterPoint(axis, z))
                        split.extend((u0 + a * hu, v0 + b * hv, hu, hv) for b in (0, 1) for a in (0, 1))
                    for c in runner.run(todo):
                        seen[_key(axis, complex(c.point.value))] = c
                        results.append(c)
                        levels.append(level)
                    cells = split
    return SpectralPortrait(pair_to_json(pair), grids, cfg, tuple(results), tuple(levels))


@dataclass(frozen=True)
class QProjectionReport:
    holds: bool
    violations: tuple
    forward_fails: bool
    forward_witness: Optional[complex]
    backward_fails: bool
    backward_witness: Optional[complex]
    backward_unsampled: tuple
    dilation: float

    def to_json(self):
        def z(v):
            return None if v is None else [v.real, v.imag]
        return {"q_projection": "holds" if self.holds else "fails",
                "violations": [[a, v.real, v.imag] for a, v in self.violations],
                "naive_forward": "fails" if self.forward_fails else "holds",
                "forward_witness": z(self.forward_witness),
                "naive_backward": "fails" if self.backward_fails else "holds",
                "backward_witness": z(self.backward_witness),
                "backward_unsampled": [z(v) for v in self.backward_unsampled],
                "dilation": self.dilation}


def verify_q_projection(portrait: SpectralPortrait, sigma_T: PlaneSet, sigma_S: PlaneSet, q,
                        dilation: Optional[float] = None) -> QProjectionReport:
    """Check the q-projection inclusion and the two naive projection inclusions.

    Every spectral X point must lie within ``dilation`` of
    ``σ(T) ∪ q^-1 σ(T)`` and every spectral Y point within ``dilation`` of
    ``σ(S) ∪ q σ(S)``.  The forward witness is the X point outside ``σ(T)``
    that is deepest inside the sampled spectrum; the backward witness is the
    largest sampled point of ``σ(S)`` that is not spectral on axis Y.
    """
    q = complex(q)
    dil = portrait.cell if dilation is None else dilation
    cx = sigma_T | sigma_T.scaled(1 / q)
    cy = sigma_S | sigma_S.scaled(q)
    violations = []
    for c in portrait.spectral_points():
        z = complex(c.point.value)
        inside = cx.contains(z, dil) if c.point.axis == "X" else cy.contains(z, dil)
        if z == 0:
            inside = cx.contains(z, dil) or cy.contains(z, dil)
        if not inside:
            violations.append((c.point.axis, z))

    xs = portrait.on_axis("X")
    non_spec = [complex(c.point.value) for c in xs if not c.in_sigma]
    best, witness = -1.0, None
    for c in xs:
        z = complex(c.point.value)
        out = sigma_T.distance(z)
        if not c.in_sigma or out <= dil:
            continue
        depth = min((abs(z - w) for w in non_spec), default=math.inf)
        score = round(min(out, depth), 9)
        if score > best:
            best, witness = score, z
    forward_fails = witness is not None

    ys = {_key("Y", complex(c.point.value)): c for c in portrait.on_axis("Y")}
    sample = sigma_S.points()
    if sample is None:
        sample = [complex(c.point.value) for c in portrait.on_axis("Y")
                  if sigma_S.contains(complex(c.point.value), dil)]
    failing, unsampled = [], []
    for s in sample:
        c = ys.get(_key("Y", complex(s)))
        if c is None:
            unsampled.append(complex(s))
        elif not c.in_sigma:
            failing.append(complex(s))
    bwit = max(failing, key=abs) if failing else None
    return QProjectionReport(not violations, tuple(violations), forward_fails, witness,
                             bool(failing), bwit, tuple(unsampled), dil)


def portrait_to_csv(portrait: SpectralPortrait) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for c in portrait.points:
        w.writerow(classification_row(c))
    return buf.getvalue()


def _report_json(r: CohomologyReport):
    return {"h0": r.h0, "h1": r.h1, "h2": r.h2, "rank_d0": r.rank_d0, "rank_d1": r.rank_d1,
            "sigma_min_d0": r.sigma_min_d0, "sigma_min_d1_adjoint": r.sigma_min_d1_adjoint,
            "closed_range_d0": r.closed_range_d0, "closed_range_d1": r.closed_range_d1,
            "edge": list(r.edge), "boundary": r.boundary}


def _classification_json(c: PointClassification, level: int):
    return {"point": c.point.to_json(), "level": level, "dims": list(c.dims),
            "in_sigma": c.in_sigma, "in_sigma_e": c.in_sigma_e, "pi": list(c.in_sigma_pi),
            "delta": list(c.in_sigma_delta), "in_sigma_l_or_r": c.in_sigma_l_or_r,
            "fredholm": c.fredholm, "history": [list(h) for h in c.history],
            "flags": list(c.flags), "report": _report_json(c.report)}


def _classification_from_json(doc):
    r = dict(doc["report"])
    r["edge"] = tuple(r["edge"])
    return PointClassification(
        CharacterPoint.from_json(doc["point"]), CohomologyReport(**r), tuple(doc["dims"]),
        doc["in_sigma"], doc["in_sigma_e"], tuple(doc["pi"]), tuple(doc["delta"]),
        doc["in_sigma_l_or_r"], doc["fredholm"], tuple(tuple(h) for h in doc["history"]),
        tuple(doc["flags"]))


def portrait_to_json(portrait: SpectralPortrait) -> str:
    doc = {"schema": 1, "pair": portrait.pair, "grids": [g.to_json() for g in portrait.grids],
           "cfg": portrait.cfg.to_json(),
           "points": [_classification_json(c, l) for c, l in zip(portrait.points, portrait.levels)],
           "summary": portrait.summary}
    return json.dumps(doc, indent=1) + "\n"


def portrait_from_json(text: str) -> SpectralPortrait:
    doc = json.loads(text)
    if doc.get("schema", 1) != 1:
        raise ValueError(f"unsupported portrait schema {doc.get('schema')!r}")
    pts = [_classification_from_json(p) for p in doc["points"]]
    return SpectralPortrait(doc["pair"], tuple(GridSpec.from_json(g) for g in doc["grids"]),
                            ToleranceConfig.from_json(doc["cfg"]), tuple(pts),
                            tuple(p["level"] for p in doc["points"]))


COLORS = {"resolvent": "#e4e4e4", "spectral": "#3b6fb6", "essential": "#d1495b",
          "inconclusive": "#f0a202"}


def portrait_to_svg(portrait: SpectralPortrait, panel: int = 360) -> str:
    """Self-contained heatmap: one panel per axis, one legend."""
    pad, gap, legend_h = 40, 30, 40
    axes = [a for a in ("X", "Y") if portrait.on_axis(a)] or ["X"]
    width = pad * 2 + len(axes) * panel + (len(axes) - 1) * gap
    height = pad * 2 + panel + legend_h
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    for k, axis in enumerate(axes):
        x0 = pad + k * (panel + gap)
        pts = portrait.on_axis(axis)
        zs = [complex(c.point.value) for c in pts] or [0j]
        ext = max(max(abs(z.real) for z in zs), max(abs(z.imag) for z in zs), 1e-9) * 1.08
        scale = panel / (2 * ext)
        lev = dict(zip(portrait.points, portrait.levels))
        out.append(f'<rect x="{x0}" y="{pad}" width="{panel}" height="{panel}" fill="none" stroke="#888"/>')
        out.append(f'<text x="{x0}" y="{pad - 10}">axis {axis} (re, im in [{-ext:.3g}, {ext:.3g}])</text>')
        cell = portrait.cell
        for c in pts:
            z = complex(c.point.value)
            s = max(3.0, min(14.0, cell * scale / 2 ** lev.get(c, 0)))
            px = x0 + (z.real + ext) * scale - s / 2
            py = pad + (ext - z.imag) * scale - s / 2
            out.append(f'<rect x="{px:.2f}" y="{py:.2f}" width="{s:.2f}" height="{s:.2f}" '
                       f'fill="{COLORS[point_class(c)]}"><title>{html.escape(str(c.point))} '
                       f'h={c.dims}</title></rect>')
    ly = pad + panel + 25
    for i, (name, color) in enumerate(COLORS.items()):
        lx = pad + i * 110
        out.append(f'<rect x="{lx}" y="{ly - 10}" width="12" height="12" fill="{color}"/>')
        out.append(f'<text x="{lx + 16}" y="{ly}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit(portrait: SpectralPortrait, fmt: str, path=None) -> str:
    """Render ``portrait`` as csv, json or svg; write to ``path`` when given."""
    render = {"csv": portrait_to_csv, "json": portrait_to_json, "svg": portrait_to_svg}
    if fmt not in render:
        raise BadParameter(f"unknown format {fmt!r}")
    text = render[fmt](portrait)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
