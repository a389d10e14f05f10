"""Planar and spatial determinant algebra and non-degeneracy predicates.

All determinant helpers broadcast over leading axes, so they accept single
vectors of shape (2,) or (3,) as well as stacked arrays of shape (m, dim).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import EPS_REG, NORM_FLOOR


def det2(a, b):
    """Determinant of two planar vectors (z component of the cross product)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def det3(a, b, c):
    """Scalar triple product of three spatial vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    return (
        a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
        - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
        + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0])
    )


def gp_residual(a, b, c, d):
    """det(a,b)det(c,d) - det(a,c)det(b,d) + det(a,d)det(b,c).

    Identically zero for any four planar vectors; the returned value is the
    floating-point defect of that identity.
    """
    return det2(a, b) * det2(c, d) - det2(a, c) * det2(b, d) + det2(a, d) * det2(b, c)


@dataclass(frozen=True)
class RegularityReport:
    """Minima of the two independence determinants over all curves and nodes.

    forward refers to det2(tangent_i, edge_i) with edge_i = f_{i+1} - f_i;
    backward to det2(tangent_i, edge_{i-1}).  Normalized values divide by the
    product of the two vector norms, which makes `passed` scale-free.
    """

    min_forward: float
    argmin_forward: tuple
    min_backward: float
    argmin_backward: tuple
    min_forward_normalized: float
    min_backward_normalized: float
    passed: bool

    def summary(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        return (
            f"regularity {state}: min |det(tangent, forward edge)| = "
            f"{self.min_forward:.6e} at (i={self.argmin_forward[0]}, "
            f"t={self.argmin_forward[1]:.6g}), "
            f"min |det(tangent, backward edge)| = {self.min_backward:.6e} at "
            f"(i={self.argmin_backward[0]}, t={self.argmin_backward[1]:.6g})"
        )


def regularity_report(fw, grid=None) -> RegularityReport:
    """Scan curves 0..n on the grid for the two independence determinants."""
    grid = grid or fw.grid
    stats = {k: {"raw": np.inf, "arg": (None, None), "normed": np.inf} for k in ("forward", "backward")}
    for i in range(0, fw.n + 1):
        jets = fw.grid_jets(i, grid)
        for kind, other in (("forward", i + 1), ("backward", i - 1)):
            edge = fw.grid_jets(other, grid).p - jets.p
            if kind == "backward":
                edge = -edge  # edge_{i-1} = f_i - f_{i-1}
            dets = np.abs(det2(jets.d1, edge))
            scale = np.linalg.norm(jets.d1, axis=-1) * np.linalg.norm(edge, axis=-1)
            normed = dets / np.maximum(scale, NORM_FLOOR)
            j = int(np.argmin(dets))
            s = stats[kind]
            if dets[j] < s["raw"]:
                s["raw"], s["arg"] = float(dets[j]), (i, float(grid.t[j]))
            s["normed"] = min(s["normed"], float(normed.min()))
    fwd, bwd = stats["forward"], stats["backward"]
    return RegularityReport(
        min_forward=fwd["raw"],
        argmin_forward=fwd["arg"],
        min_backward=bwd["raw"],
        argmin_backward=bwd["arg"],
        min_forward_normalized=fwd["normed"],
        min_backward_normalized=bwd["normed"],
        passed=bool(fwd["normed"] > EPS_REG and bwd["normed"] > EPS_REG),
    )


@dataclass(frozen=True)
class BracketSet:
    """The sixteen local determinants at one (curve, parameter) location.

    Field names spell out the two arguments of each 2x2 determinant:
    `edge` is the forward difference to the next curve, `edge_prev` the one
    arriving from the previous curve; `tan`/`acc` are the first/second
    derivatives of the current curve, with `_prev`/`_next` marking the
    neighboring curves.  So e.g. edge_prev_tan = det2(edge_prev, tan).
    """

    edge_prev_edge: float       # det2(edge_prev, edge)
    edge_tan: float             # det2(edge, tan)
    edge_prev_tan_prev: float   # det2(edge_prev, tan_prev)
    edge_tan_next: float        # det2(edge, tan_next)
    edge_prev_tan: float        # det2(edge_prev, tan)
    edge_tan_prev: float        # det2(edge, tan_prev)
    edge_prev_tan_next: float   # det2(edge_prev, tan_next)
    edge_acc: float             # det2(edge, acc)
    edge_prev_acc_prev: float   # det2(edge_prev, acc_prev)
    edge_prev_acc: float        # det2(edge_prev, acc)
    tan_tan_next: float         # det2(tan, tan_next)
    tan_prev_tan: float         # det2(tan_prev, tan)
    tan_acc: float              # det2(tan, acc)
    tan_prev_acc_prev: float    # det2(tan_prev, acc_prev)
    tan_prev_acc: float         # det2(tan_prev, acc)
    acc_prev_tan: float         # det2(acc_prev, tan)


def bracket_set(fw, i: int, t) -> BracketSet:
    """All sixteen determinants among the local derivative data at (i, t).

    Needs curves i-1, i and i+1; computed fresh from exact jets.  Accepts a
    scalar t (scalar fields) or an array (array-valued fields).
    """
    if not 0 <= i <= fw.n:
        raise IndexError(f"bracket set needs curves {i - 1}..{i + 1}, got i={i}")
    prev, cur, nxt = fw.jet(i - 1, t), fw.jet(i, t), fw.jet(i + 1, t)
    return brackets_from_jets(prev, cur, nxt)


def brackets_from_jets(prev, cur, nxt) -> BracketSet:
    """BracketSet from explicit jets of curves i-1, i, i+1."""
    edge = nxt.p - cur.p
    edge_prev = cur.p - prev.p
    return BracketSet(
        edge_prev_edge=det2(edge_prev, edge),
        edge_tan=det2(edge, cur.d1),
        edge_prev_tan_prev=det2(edge_prev, prev.d1),
        edge_tan_next=det2(edge, nxt.d1),
        edge_prev_tan=det2(edge_prev, cur.d1),
        edge_tan_prev=det2(edge, prev.d1),
        edge_prev_tan_next=det2(edge_prev, nxt.d1),
        edge_acc=det2(edge, cur.d2),
        edge_prev_acc_prev=det2(edge_prev, prev.d2),
        edge_prev_acc=det2(edge_prev, cur.d2),
        tan_tan_next=det2(cur.d1, nxt.d1),
        tan_prev_tan=det2(prev.d1, cur.d1),
        tan_acc=det2(cur.d1, cur.d2),
        tan_prev_acc_prev=det2(prev.d1, prev.d2),
        tan_prev_acc=det2(prev.d1, cur.d2),
        acc_prev_tan=det2(prev.d2, cur.d1),
    )
