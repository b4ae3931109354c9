"""The Kostant-Toda lattice, solved by factorization, and its embedding
into the universal centralizer.

Phase-space points are tridiagonal: unit subdiagonal, traceless diagonal,
nonzero superdiagonal.  The flows are *defined* by factorization rather
than by an ODE: the time-t image of x under the i-th flow is obtained by
right-translating the stabilizer lift of x by exp(t * gradient) and
dressing the chamber form with the result.  Conservation of the invariants
is then structural, and the vector field is recovered from the flow by
central differences when needed.

The embedding sends x to (d * lift * d^{-1}, section form of x) where d
conjugates the chamber form to the section form; its image is the open
subset of the centralizer with regular-real-part spectrum and group part
in the translated big cell, and the inverse is constructive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .centralizer import ZPoint, check_z_point, flow_step, hamiltonian_field
from .errors import NotInGStar, NotInW
from .invariants import (
    CHAMBER_GAP,
    in_chamber_image,
    invariant_gradient,
    invariant_vector,
    real_part_gap,
)
from .kostant_maps import (
    chamber_form,
    chamber_to_section_conjugator,
    decompose_to_section,
    dress,
    section_form,
    stabilizer_lift,
)
from .lie_core import ChevalleyData, scalar_aligned_distance, traceless_part

MIN_ROOT_COORD = 1e-13


@dataclass(frozen=True)
class TodaPoint:
    """diag: the n diagonal entries (traceless); root_coords: the r nonzero
    superdiagonal entries."""

    diag: np.ndarray
    root_coords: np.ndarray


def make_toda_point(diag, root_coords) -> TodaPoint:
    diag = np.asarray(diag, dtype=complex)
    root_coords = np.asarray(root_coords, dtype=complex)
    if diag.ndim != 1 or root_coords.shape != (diag.size - 1,):
        raise ValueError("need n diagonal entries and n-1 superdiagonal entries")
    if abs(np.sum(diag)) > 1e-12 * (1.0 + float(np.linalg.norm(diag))):
        raise ValueError(f"diagonal part has trace {np.sum(diag):.3e}")
    if np.any(np.abs(root_coords) <= MIN_ROOT_COORD):
        raise ValueError("superdiagonal coordinates must be nonzero")
    return TodaPoint(diag=diag, root_coords=root_coords)


def toda_matrix(chev: ChevalleyData, p: TodaPoint) -> np.ndarray:
    """xi + diag + superdiagonal, the matrix of a phase-space point."""
    m = chev.xi + np.diag(p.diag.astype(complex))
    m += np.diag(p.root_coords.astype(complex), k=1)
    return m


def toda_point_from_matrix(chev: ChevalleyData, m: np.ndarray,
                           tol: float = 1e-8) -> TodaPoint:
    """Read a phase-space point off a matrix, verifying the tridiagonal
    shape (unit subdiagonal, nothing else off the three diagonals)."""
    m = linalg.as_matrix(m)
    scale = 1.0 + linalg.norm(m)
    structure = chev.xi + np.diag(np.diag(m)) + np.diag(np.diagonal(m, 1), k=1)
    off = linalg.norm(m - structure)
    if off > tol * scale:
        raise ValueError(f"matrix is {off:.3e} away from the Toda phase space")
    return make_toda_point(np.diag(m).copy(), np.diagonal(m, 1).copy())


def in_flow_domain(chev: ChevalleyData, p: TodaPoint,
                   eps: float = CHAMBER_GAP) -> bool:
    """Whether the invariants of p land in the image of the open chamber,
    i.e. whether the chamber normal form (and hence the factorization
    solution) exists at p."""
    return in_chamber_image(chev, invariant_vector(chev, toda_matrix(chev, p)), eps=eps)


def toda_flow(chev: ChevalleyData, i: int, t: complex, p: TodaPoint,
              eps: float = CHAMBER_GAP,
              tol_minor: float = linalg.TOL_MINOR) -> TodaPoint:
    """Time-t image of p under the i-th flow, by factorization.

    Raises :class:`NotInV` off the flow domain and :class:`NotInGStar`
    when the group trajectory leaves the translated big cell (the expected
    blow-up mode at complex time; the offending minor index is attached).
    """
    x = toda_matrix(chev, p)
    theta_x = chamber_form(chev, x, eps=eps)
    lift = stabilizer_lift(chev, x, eps=eps, tol_minor=tol_minor)
    moved = lift @ linalg.mat_exp(t * invariant_gradient(chev, theta_x, i))
    result = dress(chev, theta_x, moved, tol_minor=tol_minor)
    return toda_point_from_matrix(chev, result)


def toda_vector_field(chev: ChevalleyData, i: int, p: TodaPoint,
                      step: float = 1e-6) -> np.ndarray:
    """Central difference of the factorization flow at t = 0.

    The result is tangent to the phase space: diagonal plus superdiagonal,
    zero subdiagonal.  Residual mass outside that shape is checked and
    truncated.
    """
    m_plus = toda_matrix(chev, toda_flow(chev, i, step, p))
    m_minus = toda_matrix(chev, toda_flow(chev, i, -step, p))
    w = (m_plus - m_minus) / (2.0 * step)
    shaped = np.diag(np.diag(w)) + np.diag(np.diagonal(w, 1), k=1)
    off = linalg.norm(w - shaped)
    if off > 1e-5 * (1.0 + linalg.norm(w)):
        raise ValueError(f"flow derivative has off-shape mass {off:.3e}")
    return shaped


def embed(chev: ChevalleyData, p: TodaPoint,
          eps: float = CHAMBER_GAP,
          tol_minor: float = linalg.TOL_MINOR) -> ZPoint:
    """The canonical centralizer point of p:
    (conjugated stabilizer lift, section form)."""
    x = toda_matrix(chev, p)
    conj = chamber_to_section_conjugator(chev, x, eps=eps)
    lift = stabilizer_lift(chev, x, eps=eps, tol_minor=tol_minor)
    g = conj @ lift @ linalg.inv(conj)
    zp = ZPoint(g=g, x=section_form(chev, x))
    # validation threshold follows the conditioning of the conjugated lift,
    # which only matters near the top of the supported rank range
    cond_g = linalg.norm(g) * linalg.norm(linalg.inv(g))
    return check_z_point(chev, zp, tol=1e-9 * (1.0 + cond_g),
                         tol_section=1e-10 * (1.0 + cond_g))


def embed_inverse(chev: ChevalleyData, zp: ZPoint,
                  eps: float = CHAMBER_GAP,
                  tol_minor: float = linalg.TOL_MINOR) -> TodaPoint:
    """Constructive inverse of :func:`embed` on its image.

    Raises :class:`NotInW` when the spectrum has collided real parts or the
    (conjugated) group part falls outside the translated big cell.
    """
    cond_g = linalg.norm(zp.g) * linalg.norm(linalg.inv(zp.g))
    check_z_point(chev, zp, tol=1e-9 * (1.0 + cond_g),
                  tol_section=1e-10 * (1.0 + cond_g))
    values, _ = linalg.eig(zp.x)
    gap = real_part_gap(values)
    if not gap > eps:
        raise NotInW(f"spectrum real-part gap {gap:.3e} below {eps:.1e}")
    ordered = values[np.argsort(-values.real)]
    z = chev.xi + np.diag(ordered)
    u_z = decompose_to_section(chev, z).u
    h = u_z @ zp.g @ linalg.inv(u_z)
    try:
        v = dress(chev, z, h, tol_minor=tol_minor)
    except NotInGStar as exc:
        raise NotInW(f"group part outside the embedding image: {exc}") from exc
    return toda_point_from_matrix(chev, v)


def rk4_toda(chev: ChevalleyData, i: int, p: TodaPoint, t_end: float,
             step: float = 1e-3, fd_step: float = 1e-6) -> TodaPoint:
    """Integrate the i-th vector field with classical RK4.

    This is a deliberately independent route to the time-t point: the field
    is itself a finite difference of the factorization flow, so agreement
    with :func:`toda_flow` at t_end is a local-to-global consistency check,
    not a tautology.
    """
    steps = max(1, round(abs(t_end) / step))
    h = t_end / steps
    m = toda_matrix(chev, p)

    def field(mat):
        return toda_vector_field(chev, i, toda_point_from_matrix(chev, mat),
                                 step=fd_step)

    for _ in range(steps):
        k1 = field(m)
        k2 = field(m + 0.5 * h * k1)
        k3 = field(m + 0.5 * h * k2)
        k4 = field(m + h * k3)
        m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return toda_point_from_matrix(chev, m)


def intertwine_check(chev: ChevalleyData, i: int, t: complex, p: TodaPoint,
                     eps: float = CHAMBER_GAP) -> float:
    """Deviation between flowing then embedding and embedding then flowing.

    Group parts are compared modulo scalar; both sides must be defined
    (the Toda side can raise :class:`NotInGStar` at complex time).
    """
    left = embed(chev, toda_flow(chev, i, t, p, eps=eps), eps=eps)
    right = flow_step(chev, t, embed(chev, p, eps=eps), i)
    dev_g = scalar_aligned_distance(left.g, right.g)
    dev_x = linalg.norm(left.x - right.x) / (1.0 + linalg.norm(right.x))
    return max(dev_g, dev_x)


def intertwine_infinitesimal(chev: ChevalleyData, i: int, p: TodaPoint,
                             step: float = 1e-6,
                             eps: float = CHAMBER_GAP) -> float:
    """Deviation between the Hamiltonian field at the embedded point and the
    finite-difference pushforward of the Toda vector field.

    The group-direction derivative is compared in the scalar quotient, so
    its traceless part is the meaningful representative.
    """
    base = embed(chev, p, eps=eps)
    target = hamiltonian_field(chev, base, i)
    w = toda_vector_field(chev, i, p, step=step)
    m = toda_matrix(chev, p)
    plus = embed(chev, toda_point_from_matrix(chev, m + step * w), eps=eps)
    minus = embed(chev, toda_point_from_matrix(chev, m - step * w), eps=eps)
    y_fd = traceless_part(linalg.solve(base.g, (plus.g - minus.g) / (2.0 * step)))
    z_fd = (plus.x - minus.x) / (2.0 * step)
    dev_y = linalg.norm(y_fd - target.y) / (1.0 + linalg.norm(target.y))
    dev_z = linalg.norm(z_fd - target.z)
    return max(dev_y, dev_z)
