import pytest

import striplift as sl


@pytest.fixture(scope="session")
def translational():
    """The 3-strip translational demo with its projection and induced stress."""
    surface = sl.builtin("translational3d")
    proj = sl.project(surface)
    stress = sl.induced_stress(proj)
    return surface, proj, stress


@pytest.fixture(scope="session")
def cylinder():
    surface = sl.builtin("cylinder-strip3d")
    proj = sl.project(surface)
    stress = sl.induced_stress(proj)
    return surface, proj, stress


@pytest.fixture(scope="session")
def parallel_lines():
    """Straight horizontal lines y = i, a trivially regular 1-strip framework."""
    curves = [
        sl.AnalyticCurve(
            (sl.CoordFunction((0.0, 1.0)), sl.CoordFunction((float(i),)))
        )
        for i in range(-1, 3)
    ]
    return sl.Framework(2.0, 1, curves, sl.Grid(2.0, 64))


def mu_minus1_fn(proj):
    """Closed-form boundary edge stress of an analytic projected surface."""
    fw = proj.framework
    z_funcs = proj._z_funcs

    def fn(t):
        cur = fw.jet(-1, t)
        nxt = fw.jet(0, t)
        edge = nxt.p - cur.p
        b = sl.det2(edge, cur.d1)
        g = sl.det2(edge, cur.d2)
        jj = sl.det2(cur.d1, cur.d2)
        z, z1, z2, _ = z_funcs[0].derivatives(t, order=3)
        z_next = z_funcs[1].value(t)
        return (g * z1 - b * z2 - jj * (z_next - z)) / b**2

    return fn


def twisted_surface():
    """translational3d with an index-dependent twist added to the heights."""
    surface = sl.builtin("translational3d")
    curves = []
    for i in surface.curve_indices:
        x, y, z = surface.curve(i).coords
        twist = sl.CoordFunction((0.0,), ((0.3 * i, 2.0, 0.4 * i),))
        curves.append(sl.AnalyticCurve((x, y, sl.combine(z, 1.0, twist, 1.0))))
    return sl.AnalyticSurface3D(surface.T, surface.n, curves)


def mu_scaled(stress, edge_index, factor):
    """Copy of a stress with one edge row multiplied by factor."""
    mu = stress.mu.copy()
    mu[edge_index + 1] *= factor
    return sl.StressField(stress.grid, stress.lam.copy(), mu)
