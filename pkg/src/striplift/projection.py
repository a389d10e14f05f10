"""Projecting spatial conjugate surfaces back to stressed planar frameworks.

Dropping the height coordinate of a conjugate surface gives a planar
framework, and the heights induce closed-form stress functions on it.  The
developability of each strip, written in projected coordinates, is the
admission test: the induced stress is only meaningful when it holds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBasisError, NotConjugateError, StripLiftError
from .framework import AnalyticCurve, AnalyticSurface3D, Framework
from .geomcore import det2, regularity_report
from .lifting import SampledLifting
from .numerics import EPS_REG, NORM_FLOOR, Grid
from .statics import StressField

DEFAULT_CONJUGACY_TOL = 1e-8


class ProjectedSurface:
    """A planar framework together with per-curve height data.

    Analytic input keeps exact height jets; sampled input (a lifting) reuses
    the stencil-differentiated samples.  Height data may cover only part of
    the curve range; `z_indices` lists the covered curve indices.
    """

    def __init__(self, framework: Framework, z_funcs=None, z_samples=None, z_range=None):
        self.framework = framework
        self.grid = framework.grid
        self._z_funcs = z_funcs
        self._z = z_samples
        if z_funcs is not None:
            self.z_indices = list(framework.curve_indices)
        else:
            self.z_indices = list(z_range)
        self.analytic = z_funcs is not None

    def z_rows(self, i: int, grid: Grid | None = None):
        """Height samples and their first two derivatives for curve i."""
        grid = grid or self.grid
        if i not in self.z_indices:
            raise IndexError(f"no height data for curve {i}")
        if self.analytic:
            v, d1, d2, _ = self._z_funcs[i + 1].derivatives(grid.t, order=3)
            return v, d1, d2
        if grid.N != self.grid.N or grid.T != self.grid.T:
            raise ValueError("sampled heights only know their own grid")
        j = i - self.z_indices[0]
        return self._z[0][j], self._z[1][j], self._z[2][j]


def project(surface, grid: Grid | None = None) -> ProjectedSurface:
    """Split off the height coordinate; the planar part must be regular."""
    if isinstance(surface, AnalyticSurface3D):
        grid = grid or surface.grid
        flat = [
            AnalyticCurve(surface.curve(i).coords[:2]) for i in surface.curve_indices
        ]
        z_funcs = tuple(surface.curve(i).coords[2] for i in surface.curve_indices)
        fw = Framework(surface.T, surface.n, flat, grid)
        report = regularity_report(fw, grid)
        if not report.passed:
            exc = StripLiftError(f"projection is not regular: {report.summary()}")
            exc.report = report
            raise exc
        return ProjectedSurface(fw, z_funcs=z_funcs)
    if isinstance(surface, SampledLifting):
        fw = surface.framework
        report = regularity_report(fw, surface.grid)
        if not report.passed:
            exc = StripLiftError(f"projection is not regular: {report.summary()}")
            exc.report = report
            raise exc
        return ProjectedSurface(
            fw,
            z_samples=(surface.z, surface.z_d1, surface.z_d2),
            z_range=surface.curve_indices,
        )
    raise TypeError(f"cannot project {type(surface).__name__}")


def _strip_defect_rows(proj: ProjectedSurface, i: int, grid: Grid):
    """Normalized developability defect of strip (i, i+1) at all nodes."""
    fw = proj.framework
    a = fw.grid_jets(i, grid)
    b = fw.grid_jets(i + 1, grid)
    edge = b.p - a.p
    za, za1, _ = proj.z_rows(i, grid)
    zb, zb1, _ = proj.z_rows(i + 1, grid)
    terms = (
        det2(a.d1, b.d1) * (zb - za),
        -det2(edge, b.d1) * za1,
        det2(edge, a.d1) * zb1,
    )
    defect = terms[0] + terms[1] + terms[2]
    scale = np.max([np.abs(t) for t in terms], axis=0)
    return defect / np.maximum(scale, NORM_FLOOR)


def available_strips(proj: ProjectedSurface):
    """Strip indices whose two curves both carry height data."""
    return [i for i in proj.z_indices[:-1] if i + 1 in proj.z_indices and i <= proj.framework.n]


def developability_defect(proj: ProjectedSurface, i: int, t: float):
    """Normalized defects of the strips after and before curve i at node t.

    Returns a pair (strip i, strip i-1); entries are NaN when the strip does
    not exist or lacks height data.
    """
    grid = proj.grid
    j = grid.node_index(t)
    out = []
    for strip in (i, i - 1):
        if strip in available_strips(proj):
            out.append(float(_strip_defect_rows(proj, strip, grid)[j]))
        else:
            out.append(float("nan"))
    return tuple(out)


def developability_report(proj: ProjectedSurface, grid: Grid | None = None):
    """Worst normalized strip defect and its location over all data."""
    grid = grid or proj.grid
    worst, where = 0.0, (None, None)
    for i in available_strips(proj):
        rows = np.abs(_strip_defect_rows(proj, i, grid))
        j = int(np.argmax(rows))
        if rows[j] > worst:
            worst, where = float(rows[j]), (i, float(grid.t[j]))
    return worst, where


def induced_stress(
    proj: ProjectedSurface,
    conjugacy_tol: float = DEFAULT_CONJUGACY_TOL,
    grid: Grid | None = None,
) -> StressField:
    """Closed-form stress functions induced by the heights.

    Requires height data on every curve -1..n+1 and a developability defect
    below conjugacy_tol at every node (NotConjugateError otherwise); small
    projection denominators raise DegenerateBasisError.
    """
    fw = proj.framework
    grid = grid or proj.grid
    missing = [i for i in fw.curve_indices if i not in proj.z_indices]
    if missing:
        raise StripLiftError(
            f"induced stress needs heights on every curve; missing {missing} "
            "(surfaces sampled from liftings only support the interior diagnostic)"
        )
    worst, where = developability_report(proj, grid)
    if worst > conjugacy_tol:
        raise NotConjugateError(worst, conjugacy_tol, location=where)
    lam = np.empty((fw.n + 1, grid.N + 1))
    mu = np.empty((fw.n + 2, grid.N + 1))
    for i in range(-1, fw.n + 1):
        mu[i + 1] = _mu_row(proj, i, grid)
        if i >= 0:
            lam[i] = _lam_row(proj, i, grid)
    return StressField(grid, lam, mu)


def _guard(dets: np.ndarray, a: np.ndarray, b: np.ndarray, label: str, grid: Grid):
    scale = np.linalg.norm(a, axis=-1) * np.linalg.norm(b, axis=-1)
    bad = np.abs(dets) <= EPS_REG * scale
    if np.any(bad):
        j = int(np.flatnonzero(bad)[0])
        raise DegenerateBasisError(
            float(dets[j]), float(EPS_REG * scale[j]), location=(label, float(grid.t[j]))
        )


def _lam_row(proj: ProjectedSurface, i: int, grid: Grid) -> np.ndarray:
    fw = proj.framework
    cur = fw.grid_jets(i, grid)
    edge = fw.grid_jets(i + 1, grid).p - cur.p
    edge_prev = cur.p - fw.grid_jets(i - 1, grid).p
    b = det2(edge, cur.d1)
    c_bar = det2(edge_prev, cur.d1)
    _guard(b, edge, cur.d1, f"det(edge_{i}, tan_{i})", grid)
    _guard(c_bar, edge_prev, cur.d1, f"det(edge_{i - 1}, tan_{i})", grid)
    a = det2(edge_prev, edge)
    z, z1, _ = proj.z_rows(i, grid)
    z_prev = proj.z_rows(i - 1, grid)[0]
    z_next = proj.z_rows(i + 1, grid)[0]
    return a * z1 / (b * c_bar) + (z - z_prev) / c_bar - (z_next - z) / b


def _mu_row(proj: ProjectedSurface, i: int, grid: Grid) -> np.ndarray:
    fw = proj.framework
    cur = fw.grid_jets(i, grid)
    edge = fw.grid_jets(i + 1, grid).p - cur.p
    b = det2(edge, cur.d1)
    _guard(b, edge, cur.d1, f"det(edge_{i}, tan_{i})", grid)
    g = det2(edge, cur.d2)
    j = det2(cur.d1, cur.d2)
    z, z1, z2 = proj.z_rows(i, grid)
    z_next = proj.z_rows(i + 1, grid)[0]
    return (g * z1 - b * z2 - j * (z_next - z)) / b**2


def recovered_interior_stress(proj: ProjectedSurface, grid: Grid | None = None) -> dict:
    """Diagnostic stress rows recoverable without boundary heights.

    For height data on curves 0..n this returns lam rows for 1..n-1 and mu
    rows for 0..n-1 as a mapping, without any self-stress claim.
    """
    grid = grid or proj.grid
    lo, hi = proj.z_indices[0], proj.z_indices[-1]
    out = {"lambda": {}, "mu": {}}
    for i in range(max(lo + 1, 0), min(hi, proj.framework.n + 1)):
        out["lambda"][i] = _lam_row(proj, i, grid)
    for i in range(max(lo, -1), min(hi, proj.framework.n + 1)):
        out["mu"][i] = _mu_row(proj, i, grid)
    return out


def plane_fit_distance(points: np.ndarray) -> float:
    """Largest distance from a point set to its least-squares plane,
    normalized by the set diameter."""
    pts = np.asarray(points, dtype=float)
    centered = pts - pts.mean(axis=0)
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    normal = vt[-1]
    dist = np.abs(centered @ normal).max()
    diameter = 2.0 * np.linalg.norm(centered, axis=1).max()
    return float(dist / max(diameter, NORM_FLOOR))


def boundary_planarity(surface: SampledLifting) -> tuple:
    """Normalized plane-fit distances of the first and last lifted curves."""
    first = surface.grid_jets(0).p
    last = surface.grid_jets(surface.n).p
    return plane_fit_distance(first), plane_fit_distance(last)
