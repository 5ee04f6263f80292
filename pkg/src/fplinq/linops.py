"""Small dense linear-algebra kernel for the FP updates.

Everything here operates on modest Hermitian matrices (N <= 8 in practice):
principal square roots via eigendecomposition, ridge-regularized PSD solves,
and a scalar bisection used for power-constraint multipliers.
"""

import numpy as np

# Tolerances sized for double precision at N <= 8.
HERM_TOL = 1e-9      # relative deviation from A = A^H
PSD_TOL = 1e-8       # negative eigenvalues above -PSD_TOL * lam_max are clamped
RECON_TOL = 1e-9     # sqrt reconstruction check

BISECT_MAX_DOUBLINGS = 200
BISECT_MAX_ITERS = 500


class NotPSD(ValueError):
    """Matrix violates the Hermitian-PSD contract."""


class Singular(ValueError):
    """Linear system is numerically singular."""


class NoBracket(RuntimeError):
    """Bisection could not bracket the target within the doubling limit."""


def hermitian_deviation(m):
    """Relative asymmetry ||M - M^H|| / ||M|| (0 for the zero matrix)."""
    m = np.asarray(m)
    denom = np.linalg.norm(m)
    if denom == 0.0:
        return 0.0
    return np.linalg.norm(m - m.conj().T) / denom

def is_hermitian(m, tol=HERM_TOL):
    return hermitian_deviation(m) <= tol


def hermitianize(m):
    """Project onto the Hermitian subspace: (M + M^H) / 2."""
    return 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))


def hermitian_sqrt(m, psd_tol=PSD_TOL):
    """Principal (Hermitian PSD) square root S of a Hermitian PSD matrix,
    S @ S^H = M.

    Eigenvalues in [-psd_tol * lam_max, 0) are treated as rounding noise and
    clamped to zero; anything more negative raises NotPSD.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise NotPSD("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(m)
    lam_max = max(vals[-1], 0.0)
    if vals[0] < -psd_tol * max(lam_max, 1e-300):
        raise NotPSD(f"smallest eigenvalue {vals[0]:.3e} below PSD tolerance")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def psd_solve(b, x, ridge=0.0):
    """Solve (B + ridge*I) out = X for a Hermitian PSD B.

    With ridge=0 and a well-conditioned B this is the exact inverse applied
    to X. Raises Singular when the (regularized) system cannot be solved.
    """
    b = np.asarray(b, dtype=complex)
    x = np.asarray(x, dtype=complex)
    a = b if ridge == 0.0 else b + ridge * np.eye(b.shape[0])
    try:
        out = np.linalg.solve(a, x)
    except np.linalg.LinAlgError as exc:
        raise Singular(str(exc)) from None
    if not np.all(np.isfinite(out)):
        raise Singular("solve produced non-finite entries")
    return out


def bisect_multiplier(power_of_mu, p_max, tol=1e-12,
                      max_doublings=BISECT_MAX_DOUBLINGS,
                      max_iters=BISECT_MAX_ITERS):
    """Smallest mu >= 0 with power_of_mu(mu) <= p_max, for a nonincreasing
    power function.

    Returns 0 when the constraint is inactive; otherwise bisects until
    |power(mu) - p_max| <= tol * p_max. The returned multiplier always
    satisfies power(mu) <= p_max (feasible side of the final bracket).
    """
    if power_of_mu(0.0) <= p_max:
        return 0.0
    hi = 1.0
    for _ in range(max_doublings):
        if power_of_mu(hi) <= p_max:
            break
        hi *= 2.0
    else:
        raise NoBracket(f"no upper bracket within {max_doublings} doublings")
    lo = 0.0
    p_hi = power_of_mu(hi)
    for _ in range(max_iters):
        if abs(p_hi - p_max) <= tol * p_max:
            return hi
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval collapsed to one ulp
            return hi
        p = power_of_mu(mid)
        if p > p_max:
            lo = mid
        else:
            hi, p_hi = mid, p
    return hi
