"""Stress fields on frameworks and the equilibrium machinery.

A stress is a pair of sampled scalar families: one value per curve 0..n and
grid node (tension along the curve) and one per edge family -1..n and node
(density of the ruling forces).  The local balance at curve i reads

    lam_dot_i * tan_i + lam_i * acc_i + mu_i * edge_i - mu_{i-1} * edge_{i-1} = 0

with edge_i = f_{i+1} - f_i, and a stress satisfying it everywhere is a
self-stress.  The residual of that balance is evaluated from the *given*
samples (derivatives of lam by fourth-order stencils), so it is a fair judge
of any externally supplied stress, not only of solver output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, SchemaError
from .framework import CoordFunction, Framework, _dump_json, parse_document
from .numerics import (
    NORM_FLOOR,
    Grid,
    fd_derivative,
    integrate_samples,
    ode_march,
    solve2x2,
)


@dataclass(frozen=True)
class StressField:
    """Sampled stress functions on a shared grid.

    lam has one row per curve index 0..n, mu one row per edge index -1..n;
    row j of either corresponds to grid node t_j.
    """

    grid: Grid
    lam: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        if lam.ndim != 2 or mu.ndim != 2:
            raise ValueError("stress samples must be 2-d arrays")
        if mu.shape[0] != lam.shape[0] + 1:
            raise ValueError(
                f"edge stress needs one more row than curve stress, got "
                f"{mu.shape[0]} vs {lam.shape[0]}"
            )
        if lam.shape[1] != self.grid.N + 1 or mu.shape[1] != self.grid.N + 1:
            raise ValueError("stress rows must have one sample per grid node")
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(mu))):
            raise ValueError("stress samples must be finite")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @property
    def n(self) -> int:
        return self.lam.shape[0] - 1

    def lam_at(self, i: int) -> np.ndarray:
        if not 0 <= i <= self.n:
            raise IndexError(f"curve stress index {i} outside 0..{self.n}")
        return self.lam[i]

    def mu_at(self, i: int) -> np.ndarray:
        if not -1 <= i <= self.n:
            raise IndexError(f"edge stress index {i} outside -1..{self.n}")
        return self.mu[i + 1]

    def scaled(self, c: float) -> "StressField":
        return StressField(self.grid, c * self.lam, c * self.mu)


def save_stress(stress: StressField) -> str:
    doc = {
        "T": stress.grid.T,
        "n": stress.n,
        "N": stress.grid.N,
        "lambda": stress.lam,
        "mu": stress.mu,
    }
    return _dump_json(doc)


def load_stress(text: str) -> StressField:
    doc = parse_document(text)
    if not isinstance(doc, dict):
        raise SchemaError("stress document root must be an object")
    for key in ("T", "n", "N", "lambda", "mu"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}", field=key)
    try:
        grid = Grid(float(doc["T"]), int(doc["N"]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc), field="T/N") from None
    lam = np.asarray(doc["lambda"], dtype=float)
    mu = np.asarray(doc["mu"], dtype=float)
    n = doc["n"]
    if lam.ndim != 2 or lam.shape[0] != n + 1:
        raise SchemaError(f"lambda must have {n + 1} rows", field="lambda")
    if mu.ndim != 2 or mu.shape[0] != n + 2:
        raise SchemaError(f"mu must have {n + 2} rows", field="mu")
    try:
        return StressField(grid, lam, mu)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def _row_terms(fw: Framework, stress: StressField, i: int, grid: Grid):
    """The four force terms of the balance at curve i, per grid node."""
    cur = fw.grid_jets(i, grid)
    edge_fwd = fw.grid_jets(i + 1, grid).p - cur.p
    edge_bwd = cur.p - fw.grid_jets(i - 1, grid).p
    lam = stress.lam_at(i)
    lam_dot = fd_derivative(lam, grid.h)
    t1 = lam_dot[:, None] * cur.d1
    t2 = lam[:, None] * cur.d2
    t3 = stress.mu_at(i)[:, None] * edge_fwd
    t4 = stress.mu_at(i - 1)[:, None] * edge_bwd
    return t1, t2, t3, t4


def _check_compatible(fw: Framework, stress: StressField):
    if stress.n != fw.n:
        raise ValueError(f"stress is for n={stress.n}, framework has n={fw.n}")
    if abs(stress.grid.T - fw.T) > 1e-12 * max(fw.T, 1.0):
        raise ValueError("stress grid does not span the framework interval")


def force_vector(fw: Framework, stress: StressField, i: int, t: float) -> np.ndarray:
    """Tension force lam_i(t) * tangent_i(t); t must be a grid node."""
    _check_compatible(fw, stress)
    j = stress.grid.node_index(t)
    return stress.lam_at(i)[j] * fw.jet(i, stress.grid.t[j]).d1


def equilibrium_residual(fw: Framework, stress: StressField, i: int, t: float) -> np.ndarray:
    """The force balance defect at curve i and grid node t."""
    _check_compatible(fw, stress)
    j = stress.grid.node_index(t)
    t1, t2, t3, t4 = _row_terms(fw, stress, i, stress.grid)
    return t1[j] + t2[j] + t3[j] - t4[j]


@dataclass(frozen=True)
class ResidualReport:
    """Equilibrium defect of a stress over every curve and grid node.

    residual[i, j] is the defect vector at curve i, node j; normalized[i, j]
    divides its magnitude by the largest of the four force-term magnitudes
    (floored, so the divisor is always positive).
    """

    grid: Grid
    residual: np.ndarray     # (n+1, N+1, 2)
    normalized: np.ndarray   # (n+1, N+1)
    max_normalized: float
    argmax: tuple            # (i, t_j)

    def summary(self) -> str:
        return (
            f"normalized equilibrium residual max {self.max_normalized:.6e} "
            f"at (i={self.argmax[0]}, t={self.argmax[1]:.6g})"
        )


def residual_report(fw: Framework, stress: StressField) -> ResidualReport:
    _check_compatible(fw, stress)
    grid = stress.grid
    res = np.empty((fw.n + 1, grid.N + 1, 2))
    normed = np.empty((fw.n + 1, grid.N + 1))
    for i in range(fw.n + 1):
        t1, t2, t3, t4 = _row_terms(fw, stress, i, grid)
        e = t1 + t2 + t3 - t4
        scale = np.max(
            [np.linalg.norm(term, axis=-1) for term in (t1, t2, t3, t4)], axis=0
        )
        res[i] = e
        normed[i] = np.linalg.norm(e, axis=-1) / np.maximum(scale, NORM_FLOOR)
    flat = int(np.argmax(normed))
    i_max, j_max = divmod(flat, grid.N + 1)
    return ResidualReport(
        grid=grid,
        residual=res,
        normalized=normed,
        max_normalized=float(normed[i_max, j_max]),
        argmax=(int(i_max), float(grid.t[j_max])),
    )


def force_load(fw: Framework, stress: StressField, i: int, a: float, b: float) -> np.ndarray:
    """Net force on the segment [a, b] of curve i (grid-aligned endpoints).

    Tension at the two cut ends plus the accumulated ruling forces; vanishes
    for every segment exactly when the stress is a self-stress.
    """
    _check_compatible(fw, stress)
    grid = stress.grid
    ja, jb = grid.node_index(a), grid.node_index(b)
    if ja > jb:
        raise ValueError(f"segment out of order: a={a} > b={b}")
    end = force_vector(fw, stress, i, grid.t[jb])
    start = force_vector(fw, stress, i, grid.t[ja])
    ruling = _ruling_density(fw, stress, i, grid)
    integral = np.array(
        [integrate_samples(ruling[:, c], grid.h, ja, jb) for c in range(2)]
    )
    return end - start + integral


def _ruling_density(fw: Framework, stress: StressField, i: int, grid: Grid) -> np.ndarray:
    cur = fw.grid_jets(i, grid)
    edge_fwd = fw.grid_jets(i + 1, grid).p - cur.p
    edge_bwd = cur.p - fw.grid_jets(i - 1, grid).p
    return stress.mu_at(i)[:, None] * edge_fwd - stress.mu_at(i - 1)[:, None] * edge_bwd


def segment_force_scale(fw: Framework, stress: StressField, i: int, a: float, b: float) -> float:
    """Magnitude scale for judging force_load on [a, b] of curve i.

    Uses the sizes of the forces being balanced (tension at the cut ends and
    the two ruling force families separately), so stresses whose ruling
    forces cancel pairwise still get a physical scale.
    """
    grid = stress.grid
    ja, jb = grid.node_index(a), grid.node_index(b)
    cur = fw.grid_jets(i, grid)
    tension = np.abs(stress.lam_at(i)) * np.linalg.norm(cur.d1, axis=-1)
    edge_fwd = fw.grid_jets(i + 1, grid).p - cur.p
    edge_bwd = cur.p - fw.grid_jets(i - 1, grid).p
    ruling = np.abs(stress.mu_at(i)) * np.linalg.norm(edge_fwd, axis=-1) + np.abs(
        stress.mu_at(i - 1)
    ) * np.linalg.norm(edge_bwd, axis=-1)
    span = grid.t[jb] - grid.t[ja]
    return max(float(tension.max()), span * float(ruling.max()), NORM_FLOOR)


def _as_scalar_fn(spec):
    """Normalize a prescribed edge-stress input to a scalar function of t."""
    if isinstance(spec, CoordFunction):
        return lambda t: float(spec.value(t))
    if callable(spec):
        return lambda t: float(spec(t))
    if isinstance(spec, (int, float)):
        value = float(spec)
        return lambda t: value
    raise TypeError(f"cannot interpret edge stress specification {spec!r}")


def solve_stress(fw: Framework, lambda0, mu_minus1, grid: Grid | None = None) -> StressField:
    """March the equilibrium system forward in t to construct a stress.

    lambda0 prescribes the curve stresses at t = 0 (one value per curve
    0..n); mu_minus1 prescribes the first boundary edge stress as a function
    of t (a callable, a CoordFunction, or a constant).  At each time the
    curves are swept in increasing i: the balance at curve i determines the
    growth rate of lam_i and the edge stress mu_i, given mu_{i-1} from the
    previous stage.  Sampling is classic RK4 on the grid; half-step data
    comes from exact jets.  The output includes the induced boundary edge
    stress at index n.
    """
    grid = grid or fw.grid
    lam0 = np.atleast_1d(np.asarray(lambda0, dtype=float))
    if lam0.shape != (fw.n + 1,):
        raise ValueError(f"lambda0 must supply {fw.n + 1} values, got shape {lam0.shape}")
    if not np.all(np.isfinite(lam0)):
        raise ValueError("lambda0 must be finite")
    mu_fn = _as_scalar_fn(mu_minus1)
    guard = 1e12 * max(1.0, float(np.abs(lam0).max()))

    def sweep(t, lam):
        lam_dot = np.empty_like(lam)
        mu = np.empty(fw.n + 1)
        jets = [fw.jet(i, t) for i in range(-1, fw.n + 2)]
        mu_prev = mu_fn(t)
        for i in range(fw.n + 1):
            cur = jets[i + 1]
            edge_fwd = jets[i + 2].p - cur.p
            edge_bwd = cur.p - jets[i].p
            rhs = -lam[i] * cur.d2 + mu_prev * edge_bwd
            lam_dot[i], mu[i] = solve2x2(
                cur.d1, edge_fwd, rhs, location=(i, float(t))
            )
            mu_prev = mu[i]
        return lam_dot, mu

    def deriv(t, lam):
        if np.abs(lam).max() > guard:
            raise DivergenceError(
                f"curve stress exceeded {guard:.3e} at t={float(t):.6g}"
            )
        return sweep(t, lam)[0]

    lam_samples = ode_march(deriv, lam0, grid).T
    mu_samples = np.empty((fw.n + 2, grid.N + 1))
    for j, t in enumerate(grid.t):
        mu_samples[0, j] = mu_fn(t)
        _, mu_samples[1:, j] = sweep(t, lam_samples[:, j])
    return StressField(grid, lam_samples, mu_samples)
