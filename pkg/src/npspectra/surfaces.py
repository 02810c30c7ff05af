"""Smooth closed parametric surfaces: catalog, Mobius inversion, rigid motion.

Every surface is described by a single chart (u, v) -> R^3 together with
periodicity information and, for the catalog shapes, analytic first and
second derivatives.  Charts of kind "polar" cover sphere-like surfaces with
u in (0, pi) and coordinate poles at the interval ends; charts of kind
"biperiodic" cover torus-like surfaces with both directions periodic.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, SingularInversion

TWO_PI = 2.0 * np.pi

PositionMap = Callable[[np.ndarray, np.ndarray], np.ndarray]
FirstDerivatives = Callable[[np.ndarray, np.ndarray], tuple]
SecondDerivatives = Callable[[np.ndarray, np.ndarray], tuple]


class ParametricSurface:
    """A closed surface given by one chart with optional analytic derivatives.

    Parameters
    ----------
    position : callable
        Map ``(u, v) -> points`` with output shape ``(..., 3)``; must accept
        ndarray arguments of any common shape.
    d1 : callable, optional
        Analytic first derivatives ``(u, v) -> (x_u, x_v)``.
    d2 : callable, optional
        Analytic second derivatives ``(u, v) -> (x_uu, x_uv, x_vv)``.
    kind : str
        ``"polar"`` (u in (0, pi), v periodic) or ``"biperiodic"``.
    u_period, v_period : float
        Periods of the periodic directions; ``u_period`` is ignored for
        polar charts.
    name : str
        Display name used in configs and reports.
    params : dict
        Parameter map echoed into reports.
    derivative_mode : str, optional
        ``"analytic"`` or ``"finite_difference"``.  Defaults to analytic
        when both derivative callables are supplied.
    fd_step : float
        Central-difference step in parameter units.
    """

    def __init__(self, position, d1=None, d2=None, *, kind,
                 u_period=None, v_period=TWO_PI, name="surface",
                 params=None, derivative_mode=None, fd_step=1e-5):
        if kind not in ("polar", "biperiodic"):
            raise ConfigError(f"unknown chart kind {kind!r}")
        if kind == "biperiodic" and u_period is None:
            raise ConfigError("biperiodic charts require u_period")
        if derivative_mode is None:
            derivative_mode = "analytic" if (d1 is not None and d2 is not None) \
                else "finite_difference"
        if derivative_mode not in ("analytic", "finite_difference"):
            raise ConfigError(f"unknown derivative_mode {derivative_mode!r}")
        if derivative_mode == "analytic" and (d1 is None or d2 is None):
            raise ConfigError("analytic derivative_mode requires d1 and d2")
        self.position = position
        self._d1 = d1
        self._d2 = d2
        self.kind = kind
        self.u_period = u_period
        self.v_period = v_period
        self.name = name
        self.params = dict(params or {})
        self.derivative_mode = derivative_mode
        self.fd_step = float(fd_step)
        self._orientation_sign = None

    # ------------------------------------------------------------- derivatives
    def first_derivatives(self, u, v):
        """Return (x_u, x_v) honoring the declared derivative mode."""
        if self.derivative_mode == "analytic":
            return self._d1(u, v)
        h = self.fd_step
        xu = (self.position(u + h, v) - self.position(u - h, v)) / (2 * h)
        xv = (self.position(u, v + h) - self.position(u, v - h)) / (2 * h)
        return xu, xv

    def second_derivatives(self, u, v):
        """Return (x_uu, x_uv, x_vv) honoring the declared derivative mode.

        In finite-difference mode the second derivatives are central
        differences of the first-derivative map; when the surface carries
        analytic first derivatives those are differenced, which keeps the
        rounding error at the O(h^2) truncation level.
        """
        if self.derivative_mode == "analytic":
            return self._d2(u, v)
        d1 = self._d1 if self._d1 is not None else self.first_derivatives
        h = self.fd_step
        xu_up, _ = d1(u + h, v)
        xu_um, _ = d1(u - h, v)
        xu_vp, xv_vp = d1(u, v + h)
        xu_vm, xv_vm = d1(u, v - h)
        xuu = (xu_up - xu_um) / (2 * h)
        xuv = (xu_vp - xu_vm) / (2 * h)
        xvv = (xv_vp - xv_vm) / (2 * h)
        return xuu, xuv, xvv

    def with_derivative_mode(self, mode, fd_step=None):
        """Clone this surface with a different derivative mode."""
        clone = ParametricSurface(
            self.position, self._d1, self._d2, kind=self.kind,
            u_period=self.u_period, v_period=self.v_period, name=self.name,
            params=self.params, derivative_mode=mode,
            fd_step=self.fd_step if fd_step is None else fd_step)
        clone._orientation_sign = self._orientation_sign
        return clone

    # ------------------------------------------------------------- orientation
    def _probe_nodes(self, n_u, n_v):
        if self.kind == "polar":
            t, wt = np.polynomial.legendre.leggauss(n_u)
            u = np.arccos(t)[::-1]
            wu = wt[::-1] / np.sin(u)
        else:
            u = self.u_period * np.arange(n_u) / n_u
            wu = np.full(n_u, self.u_period / n_u)
        v = self.v_period * np.arange(n_v) / n_v
        dv = self.v_period / n_v
        UU, VV = np.meshgrid(u, v, indexing="ij")
        return UU.reshape(-1), VV.reshape(-1), np.repeat(wu, n_v) * dv

    def orientation_sign(self):
        """Global normal-direction sign making chart normals point outward.

        The raw normal is x_u cross x_v.  The sign is fixed once per surface
        by requiring that at the node farthest from the area centroid the
        normal points away from the centroid; for embedded closed surfaces
        the farthest point always faces outward.
        """
        if self._orientation_sign is None:
            u, v, wpar = self._probe_nodes(32, 48)
            x = self.position(u, v)
            xu, xv = self.first_derivatives(u, v)
            cr = np.cross(xu, xv)
            jac = np.sqrt(np.sum(cr * cr, axis=-1))
            w = wpar * jac
            cent = np.sum(x * w[:, None], axis=0) / np.sum(w)
            i_far = int(np.argmax(np.sum((x - cent) ** 2, axis=-1)))
            dot = float(np.dot(cr[i_far] / jac[i_far], x[i_far] - cent))
            self._orientation_sign = 1.0 if dot >= 0 else -1.0
        return self._orientation_sign


# ------------------------------------------------------------------ catalog
def sphere(r=1.0):
    """Round sphere of radius ``r`` in the polar chart."""
    r = float(r)
    if r <= 0:
        raise ConfigError("sphere requires r > 0")

    def fx(u, v):
        su = np.sin(u)
        return np.stack([r * su * np.cos(v), r * su * np.sin(v),
                         r * np.cos(u)], axis=-1)

    def d1(u, v):
        cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
        z = np.zeros_like(u * v)
        xu = np.stack([r * cu * cv, r * cu * sv, -r * su], axis=-1)
        xv = np.stack([-r * su * sv, r * su * cv, z], axis=-1)
        return xu, xv

    def d2(u, v):
        cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
        z = np.zeros_like(u * v)
        xuu = np.stack([-r * su * cv, -r * su * sv, -r * cu], axis=-1)
        xuv = np.stack([-r * cu * sv, r * cu * cv, z], axis=-1)
        xvv = np.stack([-r * su * cv, -r * su * sv, z], axis=-1)
        return xuu, xuv, xvv

    return ParametricSurface(fx, d1, d2, kind="polar", name="sphere",
                             params={"r": r})


def ellipsoid(a, b, c):
    """Axis-aligned ellipsoid with semi-axes ``a, b, c``."""
    a, b, c = float(a), float(b), float(c)
    if min(a, b, c) <= 0:
        raise ConfigError("ellipsoid requires positive semi-axes")

    def fx(u, v):
        su = np.sin(u)
        return np.stack([a * su * np.cos(v), b * su * np.sin(v),
                         c * np.cos(u)], axis=-1)

    def d1(u, v):
        cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
        z = np.zeros_like(u * v)
        xu = np.stack([a * cu * cv, b * cu * sv, -c * su], axis=-1)
        xv = np.stack([-a * su * sv, b * su * cv, z], axis=-1)
        return xu, xv

    def d2(u, v):
        cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
        z = np.zeros_like(u * v)
        xuu = np.stack([-a * su * cv, -b * su * sv, -c * cu], axis=-1)
        xuv = np.stack([-a * cu * sv, b * cu * cv, z], axis=-1)
        xvv = np.stack([-a * su * cv, -b * su * sv, z], axis=-1)
        return xuu, xuv, xvv

    return ParametricSurface(fx, d1, d2, kind="polar", name="ellipsoid",
                             params={"a": a, "b": b, "c": c})


def spheroid(a, c):
    """Spheroid with equatorial semi-axis ``a`` and polar semi-axis ``c``.

    Oblate for a > c, prolate for a < c; an alias for ellipsoid(a, a, c).
    """
    s = ellipsoid(a, a, c)
    s.name = "spheroid"
    s.params = {"a": float(a), "c": float(c)}
    return s


def torus(R=2.0, r=1.0):
    """Ring torus with center-circle radius ``R`` and tube radius ``r``.

    u winds around the tube (poloidal), v around the axis (toroidal).
    """
    R, r = float(R), float(r)
    if not (R > r > 0):
        raise ConfigError("torus requires R > r > 0")

    def fx(u, v):
        w = R + r * np.cos(u)
        return np.stack([w * np.cos(v), w * np.sin(v), r * np.sin(u)], axis=-1)

    def d1(u, v):
        cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
        w = R + r * cu
        z = np.zeros_like(u * v)
        xu = np.stack([-r * su * cv, -r * su * sv, r * cu], axis=-1)
        xv = np.stack([-w * sv, w * cv, z], axis=-1)
        return xu, xv

    def d2(u, v):
        cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
        w = R + r * cu
        z = np.zeros_like(u * v)
        xuu = np.stack([-r * cu * cv, -r * cu * sv, -r * su], axis=-1)
        xuv = np.stack([r * su * sv, -r * su * cv, z], axis=-1)
        xvv = np.stack([-w * cv, -w * sv, z], axis=-1)
        return xuu, xuv, xvv

    return ParametricSurface(fx, d1, d2, kind="biperiodic", u_period=TWO_PI,
                             name="torus", params={"R": R, "r": r})


def peanut(c=1.0, d=1.1):
    """Smooth non-convex genus-0 body of revolution.

    Radial profile rho(u) = c*sqrt(cos(2u) + sqrt(d - sin(2u)^2)) about the
    polar angle u; requires d > 1 so the profile stays positive and smooth.
    """
    c, d = float(c), float(d)
    if c <= 0:
        raise ConfigError("peanut requires c > 0")
    if d <= 1:
        raise ConfigError("peanut requires d > 1")

    def rho_funcs(u):
        s2, c2 = np.sin(2 * u), np.cos(2 * u)
        f = d - s2 * s2
        q = np.sqrt(f)
        # f' = -2 sin(4u), f'' = -8 cos(4u); chain rule through two sqrt layers
        fp = -2 * np.sin(4 * u)
        fpp = -8 * np.cos(4 * u)
        qp = fp / (2 * q)
        qpp = fpp / (2 * q) - fp * fp / (4 * q ** 3)
        rho2 = c * c * (c2 + q)
        rho = np.sqrt(rho2)
        dr2 = c * c * (-2 * s2 + qp)
        d2r2 = c * c * (-4 * c2 + qpp)
        drho = dr2 / (2 * rho)
        d2rho = d2r2 / (2 * rho) - dr2 * dr2 / (4 * rho ** 3)
        return rho, drho, d2rho

    def fx(u, v):
        rho, _, _ = rho_funcs(u)
        su = np.sin(u)
        return np.stack([rho * su * np.cos(v), rho * su * np.sin(v),
                         rho * np.cos(u)], axis=-1)

    def d1(u, v):
        rho, dr, _ = rho_funcs(u)
        su, cu, sv, cv = np.sin(u), np.cos(u), np.sin(v), np.cos(v)
        ru = dr * su + rho * cu
        z = np.zeros_like(u * v)
        xu = np.stack([ru * cv, ru * sv, dr * cu - rho * su], axis=-1)
        xv = np.stack([-rho * su * sv, rho * su * cv, z], axis=-1)
        return xu, xv

    def d2(u, v):
        rho, dr, d2r = rho_funcs(u)
        su, cu, sv, cv = np.sin(u), np.cos(u), np.sin(v), np.cos(v)
        ru = dr * su + rho * cu
        ruu = d2r * su + 2 * dr * cu - rho * su
        zuu = d2r * cu - 2 * dr * su - rho * cu
        z = np.zeros_like(u * v)
        xuu = np.stack([ruu * cv, ruu * sv, zuu], axis=-1)
        xuv = np.stack([-ru * sv, ru * cv, z], axis=-1)
        xvv = np.stack([-rho * su * cv, -rho * su * sv, z], axis=-1)
        return xuu, xuv, xvv

    return ParametricSurface(fx, d1, d2, kind="polar", name="peanut",
                             params={"c": c, "d": d})


CATALOG = {
    "sphere": sphere,
    "ellipsoid": ellipsoid,
    "spheroid": spheroid,
    "torus": torus,
    "peanut": peanut,
}


def catalog_names():
    """Names accepted by configs and the command line."""
    return sorted(CATALOG)


# ------------------------------------------------------------------ transforms
def mobius_invert(surface, center, radius=1.0):
    """Invert a surface in the sphere of the given center and radius.

    The image surface is x -> center + radius^2 (x - center)/|x - center|^2
    with first and second derivatives composed through the chain rule of the
    inversion map.  Orientation of the image is re-derived from scratch
    (inversions can reverse it), so image normals again point outward.

    Parameters
    ----------
    surface : ParametricSurface
        Base surface; the inversion center must not lie on it.
    center : sequence of 3 floats
        Center of the inversion sphere, strictly off the surface.
    radius : float
        Radius of the inversion sphere.

    Raises
    ------
    SingularInversion
        If the center lies on the surface within a relative tolerance of
        1e-6 of the surface extent (the image would be unbounded).
    """
    cvec = np.asarray(center, dtype=float).reshape(3)
    radius = float(radius)
    if radius <= 0:
        raise ConfigError("inversion radius must be positive")
    u, v, _ = surface._probe_nodes(64, 96)
    dist = np.sqrt(np.sum((surface.position(u, v) - cvec) ** 2, axis=-1))
    if dist.min() < 1e-6 * dist.max():
        raise SingularInversion(
            f"inversion center {cvec.tolist()} lies on the surface "
            f"(min distance {dist.min():.3e})")
    rho2 = radius * radius

    def fx(uu, vv):
        rvec = surface.position(uu, vv) - cvec
        r2 = np.sum(rvec * rvec, axis=-1)[..., None]
        return cvec + rho2 * rvec / r2

    def dphi(rvec, r2, a):
        ra = np.sum(rvec * a, axis=-1)[..., None]
        return rho2 * (a - 2 * rvec * ra / r2) / r2

    def d2phi(rvec, r2, a, b):
        ra = np.sum(rvec * a, axis=-1)[..., None]
        rb = np.sum(rvec * b, axis=-1)[..., None]
        ab = np.sum(a * b, axis=-1)[..., None]
        return (rho2 * (-2 * a * rb - 2 * b * ra - 2 * rvec * ab) / (r2 * r2)
                + 8 * rho2 * rvec * ra * rb / r2 ** 3)

    def d1(uu, vv):
        rvec = surface.position(uu, vv) - cvec
        r2 = np.sum(rvec * rvec, axis=-1)[..., None]
        xu, xv = surface.first_derivatives(uu, vv)
        return dphi(rvec, r2, xu), dphi(rvec, r2, xv)

    def d2(uu, vv):
        rvec = surface.position(uu, vv) - cvec
        r2 = np.sum(rvec * rvec, axis=-1)[..., None]
        xu, xv = surface.first_derivatives(uu, vv)
        xuu, xuv, xvv = surface.second_derivatives(uu, vv)
        yuu = d2phi(rvec, r2, xu, xu) + dphi(rvec, r2, xuu)
        yuv = d2phi(rvec, r2, xu, xv) + dphi(rvec, r2, xuv)
        yvv = d2phi(rvec, r2, xv, xv) + dphi(rvec, r2, xvv)
        return yuu, yuv, yvv

    return ParametricSurface(
        fx, d1, d2, kind=surface.kind, u_period=surface.u_period,
        v_period=surface.v_period, name=f"invert({surface.name})",
        params={"center": cvec.tolist(), "radius": radius,
                "inner": {"name": surface.name, **surface.params}})


def rigid_transform(surface, rotation=None, translation=(0.0, 0.0, 0.0)):
    """Apply a proper rigid motion x -> R x + t to a surface.

    ``rotation`` must be a proper orthogonal 3x3 matrix (det +1); the
    identity is used when omitted.
    """
    tvec = np.asarray(translation, dtype=float).reshape(3)
    if rotation is None:
        rot = np.eye(3)
    else:
        rot = np.asarray(rotation, dtype=float).reshape(3, 3)
        if not np.allclose(rot @ rot.T, np.eye(3), atol=1e-10) \
                or abs(np.linalg.det(rot) - 1.0) > 1e-10:
            raise ConfigError("rotation must be proper orthogonal (det +1)")
    rot_t = rot.T

    def fx(u, v):
        return surface.position(u, v) @ rot_t + tvec

    def d1(u, v):
        xu, xv = surface.first_derivatives(u, v)
        return xu @ rot_t, xv @ rot_t

    def d2(u, v):
        xuu, xuv, xvv = surface.second_derivatives(u, v)
        return xuu @ rot_t, xuv @ rot_t, xvv @ rot_t

    return ParametricSurface(
        fx, d1, d2, kind=surface.kind, u_period=surface.u_period,
        v_period=surface.v_period, name=surface.name, params=surface.params)
