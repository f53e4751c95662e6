"""Hot loops, each in a numba flavour and a vectorised numpy flavour.

The public names at the bottom point at one of the two according to
:data:`fracheat._accel.USE_NUMBA`. Both flavours stay importable under their
suffixed names so the benchmark and the tests can compare them.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# angular density of a rectangle spectrum
#
# Theta(rho) = rho * int_0^{2 pi} |chi_hat(rho cos th, rho sin th)|^2 d th for the
# rectangle [-a1, a1] x [-a2, a2], where chi_hat = (2 pi)^{-1} * 4 *
# sin(a1 x)/x * sin(a2 y)/y. By symmetry the angle runs over one quadrant.


def _panels(rho, amax):
    # panels no wider than a quarter period of either oscillating factor
    return max(2, int(math.ceil(2.0 * amax * rho)) + 1)


@njit
def _sinc_a(a, x):
    if abs(x) < 1e-8:
        return a
    return math.sin(a * x) / x


@njit
def _rect_density_loop(rho, a1, a2, gx, gw):
    out = np.empty(rho.size)
    amax = max(a1, a2)
    pref = 16.0 / (TWO_PI * TWO_PI)
    m = gx.size
    for i in range(rho.size):
        r = rho[i]
        npan = max(2, int(math.ceil(2.0 * amax * r)) + 1)
        width = 0.5 * math.pi / npan
        acc = 0.0
        for p in range(npan):
            lo = p * width
            for q in range(m):
                th = lo + 0.5 * width * (gx[q] + 1.0)
                f1 = _sinc_a(a1, r * math.cos(th))
                f2 = _sinc_a(a2, r * math.sin(th))
                acc += 0.5 * width * gw[q] * f1 * f1 * f2 * f2
        out[i] = 4.0 * r * pref * acc
    return out


def _sinc_np(a, x):
    return a * np.sinc(a * x / np.pi)


def _rect_density_numpy(rho, a1, a2, gx, gw):
    out = np.empty(rho.size)
    amax = max(a1, a2)
    pref = 16.0 / (TWO_PI * TWO_PI)
    for i, r in enumerate(rho):
        npan = _panels(r, amax)
        width = 0.5 * np.pi / npan
        lo = width * np.arange(npan)[:, None]
        th = (lo + 0.5 * width * (gx[None, :] + 1.0)).ravel()
        w = np.broadcast_to(0.5 * width * gw[None, :], (npan, gx.size)).ravel()
        f = _sinc_np(a1, r * np.cos(th)) * _sinc_np(a2, r * np.sin(th))
        out[i] = 4.0 * r * pref * np.dot(w, f * f)
    return out


# ---------------------------------------------------------------------------
# ray integrals for the disk of radius R in the plane
#
# For x at distance d from the circle and a ray at angle th from the outward
# normal, rho is the distance to the circle along the ray. The inner integral
# over the complement is the kernel-specific tail F(rho):
#   mode 0 (s = 1/2 heat kernel, raw):  F = t / sqrt(rho^2 + t^2)
#   mode 1 (fractional perimeter):      F = rho^{-2s} / (2s)


@njit
def _ray_tail(rho, t, s, mode):
    if mode == 0:
        return t / math.sqrt(rho * rho + t * t)
    return rho ** (-2.0 * s) / (2.0 * s)


@njit
def _disk_inside_loop(d, dw, th, thw, R, t, s, mode):
    total = 0.0
    for i in range(d.size):
        di = d[i]
        r = R - di
        acc = 0.0
        for j in range(th.size):
            c = math.cos(th[j])
            sn = math.sin(th[j])
            root = math.sqrt(R * R - r * r * sn * sn)
            if c > 0.0:
                # cancellation-free form of -r c + root
                rho = di * (2.0 * R - di) / (r * c + root)
            else:
                rho = -r * c + root
            acc += thw[j] * _ray_tail(rho, t, s, mode)
        total += dw[i] * r * acc
    # theta over [0, pi] doubled, polar angle of x gives 2 pi
    return 2.0 * TWO_PI * total


def _disk_inside_numpy(d, dw, th, thw, R, t, s, mode):
    r = (R - d)[:, None]
    c = np.cos(th)[None, :]
    sn = np.sin(th)[None, :]
    root = np.sqrt(R * R - r * r * sn * sn)
    with np.errstate(divide="ignore", invalid="ignore"):
        rho_pos = d[:, None] * (2.0 * R - d[:, None]) / (r * c + root)
    rho = np.where(c > 0.0, rho_pos, -r * c + root)
    if mode == 0:
        f = t / np.sqrt(rho * rho + t * t)
    else:
        f = rho ** (-2.0 * s) / (2.0 * s)
    inner = f @ thw
    return 2.0 * TWO_PI * np.dot(dw, (R - d) * inner)


@njit
def _disk_outside_loop(d, dw, u, uw, R, t):
    # x at distance d outside the circle; th measured from the inward normal,
    # th = u * th_max so that every ray hits the disk
    total = 0.0
    for i in range(d.size):
        di = d[i]
        r = R + di
        thmax = math.asin(R / r)
        acc = 0.0
        for j in range(u.size):
            th = u[j] * thmax
            c = math.cos(th)
            sn = math.sin(th)
            h = math.sqrt(max(R * R - r * r * sn * sn, 0.0))
            rho1 = di * (2.0 * R + di) / (r * c + h)
            rho2 = r * c + h
            acc += uw[j] * (t / math.sqrt(rho1 * rho1 + t * t) - t / math.sqrt(rho2 * rho2 + t * t))
        total += dw[i] * r * thmax * acc
    return 2.0 * TWO_PI * total


def _disk_outside_numpy(d, dw, u, uw, R, t):
    r = (R + d)[:, None]
    thmax = np.arcsin(R / r)
    th = u[None, :] * thmax
    c = np.cos(th)
    sn = np.sin(th)
    h = np.sqrt(np.maximum(R * R - r * r * sn * sn, 0.0))
    rho1 = d[:, None] * (2.0 * R + d[:, None]) / (r * c + h)
    rho2 = r * c + h
    f = t / np.sqrt(rho1 * rho1 + t * t) - t / np.sqrt(rho2 * rho2 + t * t)
    inner = (f @ uw) * thmax[:, 0]
    return 2.0 * TWO_PI * np.dot(dw, (R + d) * inner)


# ---------------------------------------------------------------------------
# periodic marching squares: total length of the level set {f = level}


@njit
def _cross(fa, fb, level):
    return (level - fa) / (fb - fa)


@njit
def _contour_length_loop(f, level, h):
    ny, nx = f.shape
    total = 0.0
    px = np.empty(4)
    py = np.empty(4)
    hit = np.zeros(4, dtype=np.bool_)
    for i in range(ny):
        i1 = (i + 1) % ny
        for j in range(nx):
            j1 = (j + 1) % nx
            v0 = f[i, j]
            v1 = f[i, j1]
            v2 = f[i1, j1]
            v3 = f[i1, j]
            b0 = v0 > level
            b1 = v1 > level
            b2 = v2 > level
            b3 = v3 > level
            # crossing points on the 4 edges, local coordinates (x along j, y along i)
            hit[:] = False
            if b0 != b1:
                px[0] = _cross(v0, v1, level)
                py[0] = 0.0
                hit[0] = True
            if b1 != b2:
                px[1] = 1.0
                py[1] = _cross(v1, v2, level)
                hit[1] = True
            if b3 != b2:
                px[2] = _cross(v3, v2, level)
                py[2] = 1.0
                hit[2] = True
            if b0 != b3:
                px[3] = 0.0
                py[3] = _cross(v0, v3, level)
                hit[3] = True
            nhit = hit[0] + hit[1] + hit[2] + hit[3]
            if nhit == 2:
                a = -1
                b = -1
                for k in range(4):
                    if hit[k]:
                        if a < 0:
                            a = k
                        else:
                            b = k
                total += math.hypot(px[a] - px[b], py[a] - py[b])
            elif nhit == 4:
                centre = 0.25 * (v0 + v1 + v2 + v3) > level
                if centre == b0:
                    # corner 0 joined to corner 2 through the centre: cut corners 1 and 3
                    total += math.hypot(px[0] - px[1], py[0] - py[1])
                    total += math.hypot(px[2] - px[3], py[2] - py[3])
                else:
                    total += math.hypot(px[0] - px[3], py[0] - py[3])
                    total += math.hypot(px[1] - px[2], py[1] - py[2])
    return total * h


def _contour_length_numpy(f, level, h):
    v0 = f
    v1 = np.roll(f, -1, axis=1)
    v2 = np.roll(np.roll(f, -1, axis=0), -1, axis=1)
    v3 = np.roll(f, -1, axis=0)
    b0, b1, b2, b3 = (v > level for v in (v0, v1, v2, v3))
    with np.errstate(divide="ignore", invalid="ignore"):
        e0 = ((level - v0) / (v1 - v0), np.zeros_like(f))
        e1 = (np.ones_like(f), (level - v1) / (v2 - v1))
        e2 = ((level - v3) / (v2 - v3), np.ones_like(f))
        e3 = (np.zeros_like(f), (level - v0) / (v3 - v0))
    edges = (e0, e1, e2, e3)
    hits = np.stack([b0 != b1, b1 != b2, b3 != b2, b0 != b3])
    nhit = hits.sum(axis=0)

    def seg(a, b):
        # cells without both crossings hold NaN here and are masked out below
        with np.errstate(invalid="ignore"):
            return np.hypot(edges[a][0] - edges[b][0], edges[a][1] - edges[b][1])

    total = 0.0
    two = nhit == 2
    for a in range(4):
        for b in range(a + 1, 4):
            mask = two & hits[a] & hits[b]
            if mask.any():
                total += seg(a, b)[mask].sum()
    four = nhit == 4
    if four.any():
        centre = 0.25 * (v0 + v1 + v2 + v3) > level
        keep = four & (centre == b0)
        flip = four & (centre != b0)
        total += (seg(0, 1) + seg(2, 3))[keep].sum()
        total += (seg(0, 3) + seg(1, 2))[flip].sum()
    return total * h


# ---------------------------------------------------------------------------
# exported names

rect_density_numba = _rect_density_loop
rect_density_numpy = _rect_density_numpy
disk_inside_numba = _disk_inside_loop
disk_inside_numpy = _disk_inside_numpy
disk_outside_numba = _disk_outside_loop
disk_outside_numpy = _disk_outside_numpy
contour_length_numba = _contour_length_loop
contour_length_numpy = _contour_length_numpy

if USE_NUMBA:
    rect_density = rect_density_numba
    disk_inside = disk_inside_numba
    disk_outside = disk_outside_numba
    contour_length = contour_length_numba
else:
    rect_density = rect_density_numpy
    disk_inside = disk_inside_numpy
    disk_outside = disk_outside_numpy
    contour_length = contour_length_numpy
