"""Surface frames: fundamental forms, outward normals, principal curvatures.

Sign convention: second fundamental form coefficients are taken against the
outer unit normal, so the principal curvatures of a sphere are negative.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChart
from .surfaces import ParametricSurface


@dataclass
class SurfaceFrame:
    """First-order and second-order surface data at parameter points.

    All fields are scalars or ndarrays of a common shape; ``point`` and
    ``normal`` carry a trailing axis of length 3.  ``area_element`` is
    sqrt(E*G - F^2) = |x_u x x_v|.
    """

    point: np.ndarray
    normal: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    area_element: np.ndarray


def evaluate_frame(surface: ParametricSurface, u, v) -> SurfaceFrame:
    """Evaluate the surface frame at parameter points.

    Parameters
    ----------
    surface : ParametricSurface
        Surface whose chart is evaluated; second derivatives follow the
        surface's declared derivative mode.
    u, v : float or ndarray
        Parameter values inside the chart domain, away from polar ends.

    Returns
    -------
    SurfaceFrame
        Point, outer unit normal, (E, F, G), (L, M, N) against the outer
        normal, and the area element.

    Raises
    ------
    DegenerateChart
        If E*G - F^2 <= 0 (or is not finite) at any requested point.
    """
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float),
                               np.asarray(v, dtype=float))
    x = surface.position(u, v)
    xu, xv = surface.first_derivatives(u, v)
    xuu, xuv, xvv = surface.second_derivatives(u, v)
    E = np.sum(xu * xu, axis=-1)
    F = np.sum(xu * xv, axis=-1)
    G = np.sum(xv * xv, axis=-1)
    det = E * G - F * F
    bad = ~(np.isfinite(det) & (det > 0))
    if np.any(bad):
        i = np.unravel_index(np.argmax(bad), bad.shape) if bad.ndim else ()
        raise DegenerateChart(
            f"degenerate frame at (u, v) = ({float(u[i]):.6g}, "
            f"{float(v[i]):.6g}): EG - F^2 = {float(det[i]):.3e}")
    cr = np.cross(xu, xv)
    jac = np.sqrt(np.sum(cr * cr, axis=-1))
    normal = surface.orientation_sign() * cr / jac[..., None]
    L = np.sum(xuu * normal, axis=-1)
    M = np.sum(xuv * normal, axis=-1)
    N = np.sum(xvv * normal, axis=-1)
    return SurfaceFrame(point=x, normal=normal, E=E, F=F, G=G,
                        L=L, M=M, N=N, area_element=jac)


def principal_curvatures(frame: SurfaceFrame):
    """Principal curvatures and their symmetric functions from a frame.

    Returns
    -------
    (k1, k2, H, K_gauss)
        Eigenvalues of the shape operator with k1 >= k2, the mean curvature
        H = (k1 + k2)/2, and the Gauss curvature K_gauss = k1*k2.
    """
    det = frame.E * frame.G - frame.F * frame.F
    H = (frame.E * frame.N - 2 * frame.F * frame.M + frame.G * frame.L) \
        / (2 * det)
    K_gauss = (frame.L * frame.N - frame.M * frame.M) / det
    disc = np.sqrt(np.maximum(H * H - K_gauss, 0.0))
    return H + disc, H - disc, H, K_gauss
