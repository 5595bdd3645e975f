"""Membership functions crafted to break one partition condition each.

Every callable takes ``(n, 2)`` offsets in data units with unit spacing.
"""

import numpy as np

from ruspini.partition1d import mf_triangular

SPACINGS = (1.0, 1.0)
_tri = mf_triangular()


def _pair(eta_x, eta_y=_tri):
    return lambda p: eta_x(p[:, 0]) * eta_y(p[:, 1])


def crisp(u):
    """Indicator of |u| < 1/2, halved on the edge: complementary but discontinuous."""
    a = np.abs(u)
    return np.where(a < 0.5, 1.0, np.where(a == 0.5, 0.5, 0.0))


def lopsided(u):
    """1 - u^2 on the right, (1 + u)^2 on the left: complementary, not mirror symmetric."""
    return np.where(u >= 0, np.maximum(0.0, 1.0 - u * u), np.where(u > -1, (1.0 + u) ** 2, 0.0))


_WIGGLE_X = [0.0, 0.2, 0.3, 0.5, 0.7, 0.8, 1.0]
_WIGGLE_Y = [1.0, 0.6, 0.7, 0.5, 0.3, 0.4, 0.0]


def wiggle(u):
    """Piecewise linear, complementary, but rising on [0.2, 0.3]."""
    return np.interp(np.abs(u), _WIGGLE_X, _WIGGLE_Y, right=0.0)


def _parabola(t):
    return np.where(np.abs(t) < 1, 1.0 - t * t, 0.0)


def _square(t):
    return np.where(np.abs(t) < 1, (1.0 - np.abs(t)) ** 2, 0.0)


def alternating_members(ids, x):
    """Sets on odd nodes use 1 - t^2, sets on even nodes use (1 - |t|)^2.

    Neighbouring shapes are complementary, so sums stay at one, but the
    sets are not translates of a single function.
    """
    ids = np.asarray(ids)
    out = np.ones(len(x))
    for j in range(x.shape[1]):
        t = x[:, j] - (ids[:, j] - 1)
        out = out * np.where(ids[:, j] % 2 == 1, _parabola(t), _square(t))
    return out


def _bulge(p):
    """Triangular product plus a zero-corner-sum term that is positive on the x faces,
    continued radially beyond the unit square with a linear fade."""
    x, y = p[:, 0], p[:, 1]
    t = np.maximum(np.abs(x), np.abs(y))
    scale = np.where(t > 1, t, 1.0)
    xi, yi = x / scale, y / scale
    inner = (1 - np.abs(xi)) * (1 - np.abs(yi)) - 0.05 * np.cos(np.pi * xi) * np.sin(np.pi * np.abs(yi))
    fade = np.clip(1.0 - (t - 1.0) / 0.5, 0.0, 1.0)
    return np.where(t > 1, inner * fade, inner)


def _l1_cone(p):
    return np.maximum(0.0, 1.0 - np.abs(p[:, 0]) - np.abs(p[:, 1]))


def _shrunk(p):
    return 0.9 * _tri(p[:, 0]) * _tri(p[:, 1])


# condition number -> (description, centralized mu, optional members)
COUNTEREXAMPLES = {
    1: ("crisp indicator product (discontinuous)", _pair(crisp, crisp), None),
    2: ("alternating set shapes (not translates)", _pair(_parabola, _parabola), alternating_members),
    3: ("lopsided shape (not mirror symmetric)", _pair(lopsided), None),
    4: ("triangular product scaled by 0.9 (core below one)", _shrunk, None),
    5: ("bulging faces continued past the unit square", _bulge, None),
    6: ("L1 cone (sums fall short of one)", _l1_cone, None),
    7: ("wiggly complementary shape (not radially monotone)", _pair(wiggle), None),
}
