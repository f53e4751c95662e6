"""Composite Gauss-Legendre rules on explicit breakpoints."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def _leggauss(m):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_rule(breaks, m=16):
    """Nodes and weights of an m-point Gauss rule on every panel of ``breaks``.

    Zero-length panels are dropped. Returns two 1-D arrays.
    """
    b = np.unique(np.asarray(breaks, dtype=float))
    if b.size < 2:
        return np.zeros(0), np.zeros(0)
    x, w = _leggauss(m)
    lo = b[:-1, None]
    half = 0.5 * np.diff(b)[:, None]
    nodes = lo + half * (x[None, :] + 1.0)
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def geometric_breaks(a, b, levels=40, ratio=0.5, toward="a"):
    """Breakpoints on [a, b] refined geometrically toward one endpoint.

    With ``toward="a"`` the points are ``a + (b - a) * ratio**k`` for
    k = 0..levels, plus ``a`` itself. Useful for integrable endpoint
    singularities and cusps.
    """
    k = ratio ** np.arange(levels + 1)
    if toward == "a":
        pts = a + (b - a) * k
    elif toward == "b":
        pts = b - (b - a) * k
    else:
        raise ValueError("toward must be 'a' or 'b'")
    return np.unique(np.concatenate([[a, b], pts]))


def graded_rule(a, b, m=16, levels=40, ratio=0.5, toward="a"):
    return composite_rule(geometric_breaks(a, b, levels, ratio, toward), m)


def doubly_graded_breaks(a, b, levels=40, ratio=0.5):
    """Geometric refinement toward both endpoints."""
    mid = 0.5 * (a + b)
    left = geometric_breaks(a, mid, levels, ratio, "a")
    right = geometric_breaks(mid, b, levels, ratio, "b")
    return np.unique(np.concatenate([left, right]))
