"""The set M over C, for cosets of the group of t-th roots of unity.

Roots are found numerically (Aberth-Ehrlich simultaneous iteration,
then Newton polishing), so membership is decided with explicit
tolerances rather than exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import bounds
from .errors import NoConvergence

MAX_DEGREE = 256
EPS_ACCEPT = 1e-6
EPS_DEDUP = 1e-7
EPS_RESIDUAL = 1e-8


def _clean(coeffs: Sequence[complex]) -> np.ndarray:
    c = np.asarray([complex(v) for v in coeffs], dtype=complex)
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        return c[:0]
    return c[:nz[-1] + 1]


def polyval(coeffs: Sequence[complex], z):
    """Horner evaluation; coefficients in ascending degree."""
    acc = 0j * z
    for c in reversed(list(coeffs)):
        acc = acc * z + complex(c)
    return acc


def residual_ok(coeffs: Sequence[complex], z: complex) -> bool:
    c = _clean(coeffs)
    d = len(c) - 1
    scale = float(np.max(np.abs(c))) * (1 + abs(z)) ** d
    return abs(polyval(c, z)) <= EPS_RESIDUAL * scale


def complex_roots(coeffs: Sequence[complex], max_iter: int = 500) -> list[complex]:
    """All roots of a complex polynomial (ascending coefficients), with multiplicity."""
    c = _clean(coeffs)
    d = len(c) - 1
    if d < 1:
        raise ValueError('degree must be at least 1')
    if d > MAX_DEGREE:
        raise ValueError(f'degree {d} exceeds {MAX_DEGREE}')
    a = c / c[-1]
    if d == 1:
        return [complex(-a[0])]
    desc = a[::-1]
    ddesc = np.polyder(desc)
    center = -a[d - 1] / d
    # Cauchy-type radius of the shifted polynomial bounds the spread of the roots
    shifted = np.poly1d(desc)(np.poly1d([1, center]))
    sc = shifted.coeffs
    radius = max((abs(sc[k]) ** (1.0 / k) for k in range(1, d + 1) if sc[k] != 0), default=1.0)
    radius = max(radius, 1e-12)
    z = center + radius * np.exp(1j * (2 * np.pi * np.arange(d) / d + 0.4))
    for _ in range(max_iter):
        pz = np.polyval(desc, z)
        dpz = np.polyval(ddesc, z)
        with np.errstate(divide='ignore', invalid='ignore'):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            inv = 1 / diff
            np.fill_diagonal(inv, 0)
            w = ratio / (1 - ratio * inv.sum(axis=1))
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if np.all(np.abs(w) <= 1e-14 * (1 + np.abs(z))):
            break
    else:
        if not all(residual_ok(c, complex(r)) for r in z):
            raise NoConvergence(f'no convergence after {max_iter} iterations')
    roots = []
    for r in z:
        r = complex(r)
        for _ in range(3):
            dp = complex(np.polyval(ddesc, r))
            if dp == 0:
                break
            step = complex(np.polyval(desc, r)) / dp
            r_new = r - step
            if abs(np.polyval(desc, r_new)) > abs(np.polyval(desc, r)):
                break
            r = r_new
        roots.append(r)
    if not all(residual_ok(c, r) for r in roots):
        raise NoConvergence('root residual above tolerance')
    return roots


# --------------------------------------------------------------------------

def _degree(f: Sequence[complex]) -> int:
    return len(_clean(f)) - 1


def _dedup(points: list[complex]) -> list[complex]:
    out: list[complex] = []
    for z in points:
        if all(abs(z - w) > EPS_DEDUP for w in out):
            out.append(z)
    return sorted(out, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def coset_residual(f: Sequence[complex], g: complex, t: int, z: complex) -> float:
    """|f(z)^t - g^t|, scaled by |g|^t when |g| > 1."""
    gt = complex(g) ** t
    return abs(polyval(f, z) ** t - gt) / max(1.0, abs(gt))


def enumerate_M_complex(polys: Sequence[Sequence[complex]], t: int, reps: Sequence[complex]) -> list[complex]:
    """Approximate M = {z : f_i(z) in g_i G} where G is the group of t-th roots of unity.

    The roots of f_1^t - g_1^t, with f_1 of least degree, are found as the
    union of the roots of f_1 - g_1 zeta over all t-th roots of unity zeta;
    each candidate is kept when every other constraint holds to EPS_ACCEPT.
    """
    if len(polys) < 2 or len(polys) != len(reps):
        raise ValueError('need n >= 2 polynomials with one representative each')
    anchor = min(range(len(polys)), key=lambda i: _degree(polys[i]))
    f1, g1 = _clean(polys[anchor]), complex(reps[anchor])
    if len(f1) - 1 < 1:
        raise ValueError('polynomials must be nonconstant')
    if (len(f1) - 1) * t > MAX_DEGREE:
        raise ValueError('m_1 t exceeds the supported resolvent degree')
    cands = []
    for j in range(t):
        target = g1 * cmath.exp(2j * math.pi * j / t)
        shifted = f1.copy()
        shifted[0] -= target
        cands.extend(complex_roots(shifted))
    keep = [z for z in cands
            if all(coset_residual(f, g, t, z) <= EPS_ACCEPT for f, g in zip(polys, reps))]
    return _dedup(keep)


def admissible_complex(polys: Sequence[Sequence[complex]], tol: float = 1e-9) -> bool:
    """Numerical admissibility over C: f_i(0) != 0 and a root of f_i missing from every other f_j."""
    for i, f in enumerate(polys):
        if abs(complex(_clean(f)[0])) <= tol:
            return False
        others = [g for j, g in enumerate(polys) if j != i]
        roots = complex_roots(f)
        if not any(all(abs(polyval(g, r)) > tol * max(1.0, float(np.max(np.abs(_clean(g)))))
                       for g in others) for r in roots):
            return False
    return True


@dataclass
class Theorem3Report:
    t: int
    n: int
    m: list[int]
    status: str
    reason: str = ''
    members: list[complex] = field(default_factory=list)
    max_residual: float = 0.0
    bound_lhs: int | None = None
    bound_rhs: int | None = None
    bound_holds: bool | None = None
    on_circles: bool | None = None

    @property
    def size_M(self) -> int:
        return len(self.members)

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d['members'] = [[z.real, z.imag] for z in self.members]
        d['size_M'] = self.size_M
        return d


def verify_theorem3_instance(polys: Sequence[Sequence[complex]], t: int, reps: Sequence[complex]) -> Theorem3Report:
    """Check |M|^(2n) <= (4(n+1)M_n)^(2n) (prod m)^2 t^(n+1) once t exceeds C_1."""
    m = sorted(_degree(f) for f in polys)
    n = len(polys)
    rep = Theorem3Report(t, n, m, 'PASSED')
    c1 = bounds.c1_constant(m, n)
    if t <= c1:
        rep.status, rep.reason = 'SKIPPED', f'window: t <= C_1 = {c1}'
        return rep
    try:
        if not admissible_complex(polys):
            rep.status, rep.reason = 'SKIPPED', 'admissibility'
            return rep
        rep.members = enumerate_M_complex(polys, t, reps)
    except NoConvergence as exc:
        rep.status, rep.reason = 'SKIPPED', f'NoConvergence: {exc}'
        return rep
    rep.max_residual = max((coset_residual(f, g, t, z) for z in rep.members for f, g in zip(polys, reps)),
                           default=0.0)
    lhs, rhs = bounds.bound_sides(rep.size_M, t, m, n)
    rep.bound_lhs, rep.bound_rhs, rep.bound_holds = lhs, rhs, lhs <= rhs
    if all(d == 1 for d in m):
        rep.on_circles = all(abs(abs(polyval(f, z)) - abs(complex(g))) <= EPS_ACCEPT
                             for z in rep.members for f, g in zip(polys, reps))
    if not rep.bound_holds or rep.max_residual > EPS_ACCEPT or rep.on_circles is False:
        rep.status = 'FAILED'
    return rep
