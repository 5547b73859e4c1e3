"""U(1) and SU(2): elements, Haar sampling, and heat kernels by character series.

Scalar element classes serve the map/holonomy API; the group singletons also
expose vectorized operations on numpy arrays for Monte Carlo hot paths
(U(1): array of angles; SU(2): (..., 4) array of unit quaternions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
DEFAULT_T_MIN = 0.2


class SlowConvergenceError(ValueError):
    """Heat-kernel time below the configured minimum; series too slow."""


def _wrap_angle(theta: float) -> float:
    """Reduce to (-pi, pi]."""
    t = math.fmod(theta, TWO_PI)
    if t <= -math.pi:
        t += TWO_PI
    elif t > math.pi:
        t -= TWO_PI
    return t


@dataclass(frozen=True)
class U1Element:
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", _wrap_angle(float(self.angle)))

    @classmethod
    def identity(cls) -> "U1Element":
        return cls(0.0)

    def __mul__(self, other: "U1Element") -> "U1Element":
        return U1Element(self.angle + other.angle)

    def inverse(self) -> "U1Element":
        return U1Element(-self.angle)

    def normalized_trace(self) -> complex:
        return complex(math.cos(self.angle), math.sin(self.angle))

    def class_angle(self) -> float:
        return self.angle


@dataclass(frozen=True)
class SU2Element:
    """Unit quaternion (w, x, y, z) <-> w*I + i(x sig1 + y sig2 + z sig3)."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"quaternion norm {norm} too far from 1")
        if abs(norm - 1.0) > 1e-15:
            object.__setattr__(self, "w", self.w / norm)
            object.__setattr__(self, "x", self.x / norm)
            object.__setattr__(self, "y", self.y / norm)
            object.__setattr__(self, "z", self.z / norm)

    @classmethod
    def identity(cls) -> "SU2Element":
        return cls(1.0, 0.0, 0.0, 0.0)

    def __mul__(self, o: "SU2Element") -> "SU2Element":
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = o.w, o.x, o.y, o.z
        return SU2Element(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    def inverse(self) -> "SU2Element":
        return SU2Element(self.w, -self.x, -self.y, -self.z)

    def normalized_trace(self) -> float:
        # Tr/2 of the 2x2 unitary equals the real quaternion part
        return self.w

    def class_angle(self) -> float:
        """Eigenvalue angle in [0, pi]: eigenvalues are exp(+-i theta)."""
        return math.acos(max(-1.0, min(1.0, self.w)))

    def matrix(self) -> np.ndarray:
        # 1, i, j, k -> I, i sig3, i sig2, i sig1: a homomorphism onto SU(2)
        return np.array(
            [
                [self.w + 1j * self.x, self.y + 1j * self.z],
                [-self.y + 1j * self.z, self.w - 1j * self.x],
            ]
        )


def su2_casimir(m: int) -> float:
    """Casimir of the (m+1)-dimensional SU(2) irreducible.

    From the SU(N) Casimir at N=2 for the weight (m, 0):
    (1/2)(m^2 + m) - m^2/4 = (m^2 + 2m)/4.
    """
    return (m * m + 2 * m) / 4.0


def su2_character(m: int, theta) -> np.ndarray:
    """chi_m at class angle theta: sin((m+1) theta)/sin(theta), elementwise.

    Limits at theta = 0 and pi are taken via (m+1)cos((m+1)t)/cos(t).
    """
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    safe = np.abs(s) > 1e-9
    out = np.empty_like(theta)
    out[safe] = np.sin((m + 1) * theta[safe]) / s[safe]
    if not safe.all():
        t = theta[~safe]
        out[~safe] = (m + 1) * np.cos((m + 1) * t) / np.cos(t)
    return out


class U1Group:
    name = "U1"

    def identity(self) -> U1Element:
        return U1Element(0.0)

    def haar(self, gen: np.random.Generator) -> U1Element:
        return U1Element(float(self.haar_array(gen, 1)[0]))

    def haar_array(self, gen: np.random.Generator, size: int) -> np.ndarray:
        # one uniform per sample: fixed draw count keeps substreams aligned
        return gen.random(size) * TWO_PI - math.pi

    def array_identity(self, size: int) -> np.ndarray:
        return np.zeros(size)

    def array_multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a + b

    def array_inverse(self, a: np.ndarray) -> np.ndarray:
        return -a

    def array_normalized_trace(self, a: np.ndarray) -> np.ndarray:
        return np.exp(1j * a)

    def element_array(self, x: U1Element, size: int) -> np.ndarray:
        return np.full(size, x.angle)

    def heat_kernel_array(self, t: float, a: np.ndarray, tol: float = 1e-12,
                          t_min: float = DEFAULT_T_MIN) -> np.ndarray:
        _check_time(t, t_min)
        total = np.ones_like(a)
        n = 0
        while True:
            n += 1
            coef = 2.0 * math.exp(-t * n * n / 2.0)
            total += coef * np.cos(n * a)
            # coef bounds every later term; compare against the peak partial
            if coef < tol * max(1.0, float(np.max(total))):
                return total

    def heat_kernel(self, t: float, x: U1Element, tol: float = 1e-12,
                    t_min: float = DEFAULT_T_MIN) -> float:
        return float(self.heat_kernel_array(t, np.array([x.angle]), tol, t_min)[0])


class SU2Group:
    name = "SU2"

    def identity(self) -> SU2Element:
        return SU2Element.identity()

    def haar(self, gen: np.random.Generator) -> SU2Element:
        q = self.haar_array(gen, 1)[0]
        return SU2Element(*q)

    def haar_array(self, gen: np.random.Generator, size: int) -> np.ndarray:
        """Uniform on the unit 3-sphere from three uniforms per sample.

        (sqrt(1-u) sin a, sqrt(1-u) cos a, sqrt(u) sin b, sqrt(u) cos b) with
        a, b uniform angles is uniform on S^3; the draw count per sample is
        fixed, which keeps counter-based substreams reproducible.
        """
        u = gen.random(size)
        a = gen.random(size) * TWO_PI
        b = gen.random(size) * TWO_PI
        r1 = np.sqrt(1.0 - u)
        r2 = np.sqrt(u)
        return np.stack([r1 * np.sin(a), r1 * np.cos(a), r2 * np.sin(b), r2 * np.cos(b)], axis=-1)

    def array_identity(self, size: int) -> np.ndarray:
        q = np.zeros((size, 4))
        q[:, 0] = 1.0
        return q

    def array_multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        w1, x1, y1, z1 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
        w2, x2, y2, z2 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
        out = np.stack(
            [
                w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
                w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
                w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
                w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
            ],
            axis=-1,
        )
        # renormalize to keep products on the unit sphere within 1e-12
        out /= np.linalg.norm(out, axis=-1, keepdims=True)
        return out

    def array_inverse(self, a: np.ndarray) -> np.ndarray:
        out = a.copy()
        out[..., 1:] *= -1.0
        return out

    def array_normalized_trace(self, a: np.ndarray) -> np.ndarray:
        return a[..., 0]

    def element_array(self, x: SU2Element, size: int) -> np.ndarray:
        return np.tile(np.array([x.w, x.x, x.y, x.z]), (size, 1))

    def heat_kernel_array(self, t: float, q: np.ndarray, tol: float = 1e-12,
                          t_min: float = DEFAULT_T_MIN) -> np.ndarray:
        _check_time(t, t_min)
        theta = np.arccos(np.clip(q[..., 0], -1.0, 1.0))
        total = np.ones_like(theta)  # m = 0 term
        m = 0
        while True:
            m += 1
            weight = math.exp(-t * su2_casimir(m) / 2.0) * (m + 1)
            total += weight * su2_character(m, theta)
            # |chi_m| <= m+1 bounds the term uniformly over class angles
            if weight * (m + 1) < tol * max(1.0, float(np.max(total))):
                return total

    def heat_kernel(self, t: float, x: SU2Element, tol: float = 1e-12,
                    t_min: float = DEFAULT_T_MIN) -> float:
        q = np.array([[x.w, x.x, x.y, x.z]])
        return float(self.heat_kernel_array(t, q, tol, t_min)[0])


def _check_time(t: float, t_min: float):
    if t <= 0:
        raise ValueError(f"heat-kernel time must be positive, got {t}")
    if t < t_min:
        raise SlowConvergenceError(
            f"heat-kernel time {t} below minimum {t_min}; series converges too slowly"
        )


U1 = U1Group()
SU2 = SU2Group()

GROUPS = {"U1": U1, "SU2": SU2}


def heat_kernel_eval(group, t: float, x, tol: float = 1e-12,
                     t_min: float = DEFAULT_T_MIN) -> float:
    return group.heat_kernel(t, x, tol, t_min)


def haar_sample(group, gen: np.random.Generator):
    return group.haar(gen)
