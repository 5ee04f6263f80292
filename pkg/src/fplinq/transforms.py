"""Scalar and matrix fractional-programming transforms.

A scalar fraction is A/B with A >= 0, B > 0; its matrix counterpart is the
ratio sqrtA^H B^{-1} sqrtA between A = sqrtA sqrtA^H (Hermitian PSD) and a
Hermitian positive-definite B. Each transform introduces auxiliary variables
with closed-form optimizers; substituting the optimizer recovers the original
ratio exactly, which is the identity the tests pin down.

``certify_surrogate`` numerically checks the two minorization-maximization
conditions for a candidate surrogate g(x|x_hat) of an objective f(x):

- C1 (minorization): g(x|x_hat) <= f(x) for all probes x and anchors x_hat,
- C2 (tightness):    g(x_hat|x_hat) = f(x_hat) at every anchor.
"""

from dataclasses import dataclass

import numpy as np

from .linops import Singular, hermitianize, psd_solve


@dataclass(frozen=True)
class ScalarFraction:
    numerator: float        # A >= 0
    denominator: float      # B > 0
    weight: float = 1.0     # w >= 0

    def __post_init__(self):
        if self.numerator < 0:
            raise ValueError("numerator must be nonnegative")
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        if self.weight < 0:
            raise ValueError("weight must be nonnegative")

    @property
    def ratio(self):
        return self.numerator / self.denominator


@dataclass(frozen=True, eq=False)
class MatrixFraction:
    sqrt_numerator: np.ndarray   # n x n complex, A = sqrtA @ sqrtA^H
    denominator: np.ndarray      # n x n Hermitian positive definite
    weight: float = 1.0

    def __post_init__(self):
        sa = np.atleast_2d(np.asarray(self.sqrt_numerator, dtype=complex))
        b = np.atleast_2d(np.asarray(self.denominator, dtype=complex))
        if sa.shape != b.shape or sa.shape[0] != sa.shape[1]:
            raise ValueError("sqrt_numerator and denominator must be square and same shape")
        if self.weight < 0:
            raise ValueError("weight must be nonnegative")
        if np.linalg.eigvalsh(hermitianize(b))[0] <= 0:
            raise ValueError("denominator must be positive definite")
        object.__setattr__(self, "sqrt_numerator", sa)
        object.__setattr__(self, "denominator", b)

    @property
    def dim(self):
        return self.denominator.shape[0]

    @property
    def numerator(self):
        sa = self.sqrt_numerator
        return sa @ sa.conj().T

    def ratio(self):
        """sqrtA^H B^{-1} sqrtA, Hermitian PSD."""
        sa = self.sqrt_numerator
        return hermitianize(sa.conj().T @ psd_solve(self.denominator, sa))


@dataclass(frozen=True)
class ScalarAux:
    y: float = 0.0
    gamma: float = 0.0
    u: float = 0.0
    v: float = 0.0


@dataclass(frozen=True, eq=False)
class MatrixAux:
    Y: np.ndarray
    Gamma: np.ndarray


# --------------------------------------------------------------------------
# scalar transforms
# --------------------------------------------------------------------------

def scalar_quadratic_value(f: ScalarFraction, y: float) -> float:
    """Quadratic-transform objective 2 y sqrt(A) - y^2 B."""
    return 2.0 * y * np.sqrt(f.numerator) - y * y * f.denominator


def scalar_quadratic_opt_y(f: ScalarFraction) -> float:
    """Optimal auxiliary y* = sqrt(A)/B; the value there equals A/B."""
    return np.sqrt(f.numerator) / f.denominator


def benson_opt(f: ScalarFraction):
    """Optimal (u, v) of max 2 u sqrt(A) - v B s.t. u^2 <= v.

    The constraint is tight at the optimum, so u* = sqrt(A)/B and v* = u*^2,
    which collapses to the quadratic transform.
    """
    u = scalar_quadratic_opt_y(f)
    return u, u * u


def scalar_lagrangian_value(f: ScalarFraction, gamma: float) -> float:
    """Lagrangian-dual-transform term
    w log(1+gamma) - gamma w + (1+gamma) w A / (A+B),
    maximized over gamma >= 0 at gamma* = A/B where it equals w log(1+A/B).
    """
    a, b, w = f.numerator, f.denominator, f.weight
    return w * np.log1p(gamma) - gamma * w + (1.0 + gamma) * w * a / (a + b)


# --------------------------------------------------------------------------
# matrix transforms
# --------------------------------------------------------------------------

def _logdet_eye_plus(m):
    sign, logdet = np.linalg.slogdet(np.eye(m.shape[0]) + m)
    if sign.real <= 0:
        raise Singular("log-det argument is not positive definite")
    return logdet


def matrix_quadratic_value(f: MatrixFraction, y: np.ndarray) -> np.ndarray:
    """Matrix-quadratic-transform argument sqrtA^H Y + Y^H sqrtA - Y^H B Y.

    Hermitian by construction; equal to the matrix ratio at Y = B^{-1} sqrtA
    and dominated by it in the PSD order everywhere else.
    """
    sa = f.sqrt_numerator
    cross = sa.conj().T @ y
    return hermitianize(cross + cross.conj().T - y.conj().T @ f.denominator @ y)


def matrix_quadratic_opt_Y(f: MatrixFraction) -> np.ndarray:
    """Optimal auxiliary Y* = B^{-1} sqrtA (completing the square)."""
    return psd_solve(f.denominator, f.sqrt_numerator)


def matrix_lagrangian_value(f: MatrixFraction, gamma: np.ndarray) -> float:
    """Matrix Lagrangian-dual-transform term
    w (log|I+Gamma| - tr(Gamma) + tr((I+Gamma) sqrtA^H (A+B)^{-1} sqrtA)).
    """
    sa = f.sqrt_numerator
    apb = f.numerator + f.denominator
    core = sa.conj().T @ psd_solve(apb, sa)
    val = (_logdet_eye_plus(gamma)
           - np.trace(gamma).real
           + np.trace((np.eye(f.dim) + gamma) @ core).real)
    return f.weight * val


def matrix_lagrangian_opt_Gamma(f: MatrixFraction) -> np.ndarray:
    """Optimal auxiliary Gamma* = sqrtA^H B^{-1} sqrtA (the matrix ratio)."""
    return f.ratio()


def joint_fq_value(f: MatrixFraction, gamma: np.ndarray, y: np.ndarray) -> float:
    """Jointly transformed objective (quadratic transform applied inside the
    Lagrangian dual transform):

    w log|I+Gamma| - w tr(Gamma)
      + 2 sqrt(w) Re tr((I+Gamma) sqrtA^H Y) - tr((I+Gamma) Y^H (A+B) Y).

    With both auxiliaries at their closed-form optima this equals
    w log|I + sqrtA^H B^{-1} sqrtA|.
    """
    sa = f.sqrt_numerator
    w = f.weight
    eye_g = np.eye(f.dim) + gamma
    apb = f.numerator + f.denominator
    if w == 0.0:
        return 0.0
    val = (w * _logdet_eye_plus(gamma)
           - w * np.trace(gamma).real
           + 2.0 * np.sqrt(w) * np.trace(eye_g @ sa.conj().T @ y).real
           - np.trace(eye_g @ y.conj().T @ apb @ y).real)
    return val


def joint_fq_opt_Y(f: MatrixFraction) -> np.ndarray:
    """Optimal Y for the joint transform: (A+B)^{-1} (sqrt(w) sqrtA)."""
    return psd_solve(f.numerator + f.denominator,
                     np.sqrt(f.weight) * f.sqrt_numerator)


def log_det_ratio(f: MatrixFraction) -> float:
    """Original objective term w log|I + sqrtA^H B^{-1} sqrtA|."""
    if f.weight == 0.0:
        return 0.0
    return f.weight * _logdet_eye_plus(f.ratio())


# --------------------------------------------------------------------------
# MM surrogate certification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SurrogateReport:
    max_c1_violation: float   # max over (anchor, probe) of g(x|xh) - f(x)
    max_c2_violation: float   # max over anchors of |g(xh|xh) - f(xh)|
    num_pairs: int
    num_anchors: int
    tol: float

    @property
    def c1_ok(self):
        return self.max_c1_violation <= self.tol

    @property
    def c2_ok(self):
        return self.max_c2_violation <= self.tol

    @property
    def ok(self):
        return self.c1_ok and self.c2_ok


def certify_surrogate(f, g, anchors, probes, tol=1e-8) -> SurrogateReport:
    """Check the minorization conditions C1/C2 on explicit sample sets.

    ``f(x)`` evaluates the objective; ``g(x, x_hat)`` evaluates the surrogate
    anchored at x_hat. Violations are reported, not raised; the sample sets
    are caller-supplied so runs are reproducible under a seeded harness.
    """
    c1 = 0.0
    c2 = 0.0
    pairs = 0
    for xh in anchors:
        c2 = max(c2, abs(g(xh, xh) - f(xh)))
        for x in probes:
            c1 = max(c1, g(x, xh) - f(x))
            pairs += 1
    return SurrogateReport(max_c1_violation=c1, max_c2_violation=c2,
                           num_pairs=pairs, num_anchors=len(anchors), tol=tol)
