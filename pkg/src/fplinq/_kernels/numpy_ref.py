"""Pure-numpy reference implementation of the per-iteration kernels.

Array conventions (complex128 throughout):
    H        (J, I, N, N)  channel from transmitter i to receiver j
    V        (I, N, r)     beamformer columns per transmitter, r in {N, 1}
    s        (J,) int64    scheduled transmitter per receiver, -1 for none
    Gamma    (J, r, r)     Hermitian PSD auxiliaries
    Y        (J, N, r)     complex auxiliaries
    pj, pi   (P,) int64    associated (receiver, transmitter) pair indices
"""

import numpy as np

LN2 = np.log(2.0)

# Fixed-count bisection resolves the multiplier to machine precision; each
# halving is a cheap vector op over all binding pairs at once.
_BISECT_ITERS = 110
_BRACKET_DOUBLINGS = 200


def _hermitianize(m):
    return 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))


def _ct(m):
    return np.conj(np.swapaxes(m, -1, -2))


def received_cov(H, V, active, sigma2):
    """Phi[j] = sigma2 I + sum_{i in active} H[j,i] V[i] V[i]^H H[j,i]^H."""
    J, _, N, _ = H.shape
    phi = np.broadcast_to(sigma2 * np.eye(N, dtype=complex), (J, N, N)).copy()
    active = np.asarray(active, dtype=np.int64)
    if active.size:
        G = np.matmul(H[:, active], V[active])          # (J, A, N, r)
        phi += np.matmul(G, _ct(G)).sum(axis=1)
    return _hermitianize(phi)


def aux_update(H, V, s, w_sched, Phi):
    """Closed-form auxiliary updates for the scheduled links.

    Gamma[j] = G^H F^{-1} G   with G = H[j, s_j] V[s_j], F = Phi[j] - G G^H
    Y[j]     = sqrt(w_j) Phi[j]^{-1} G
    Rows with s[j] < 0 are zero.
    """
    J, _, N, _ = H.shape
    r = V.shape[2]
    gamma = np.zeros((J, r, r), dtype=complex)
    y = np.zeros((J, N, r), dtype=complex)
    js = np.nonzero(s >= 0)[0]
    if js.size == 0:
        return gamma, y
    G = np.matmul(H[js, s[js]], V[s[js]])               # (Js, N, r)
    F = Phi[js] - np.matmul(G, _ct(G))
    X = np.linalg.solve(F, G)
    gamma[js] = _hermitianize(np.matmul(_ct(G), X))
    y[js] = np.linalg.solve(Phi[js], G) * np.sqrt(w_sched[js])[:, None, None]
    return gamma, y


def tx_quadratic(H, Gamma, Y, w_rx=None):
    """D[i] = sum_j H[j,i]^H M_j H[j,i] with M_j = c_j Y_j (I + Gamma_j) Y_j^H.

    c_j = w_rx[j] when given (the WMMSE decoupling), else 1.
    """
    r = Gamma.shape[1]
    M = np.matmul(np.matmul(Y, np.eye(r) + Gamma), _ct(Y))   # (J, N, N)
    if w_rx is not None:
        M = M * w_rx[:, None, None]
    P1 = np.matmul(M[:, None], H)                            # (J, I, N, N)
    D = np.matmul(_ct(H), P1).sum(axis=0)
    return _hermitianize(D)


def candidate_beams(H, Gamma, Y, D, pj, pi, w_pair, p_max, tol=1e-12):
    """Tentative per-pair beams, their power multipliers, and match weights.

    Vt  = (mu I + D_i)^{-1} T,  T = sqrt(w) H_{ji}^H Y_j (I + Gamma_j),
    with mu >= 0 the smallest multiplier meeting tr(Vt^H Vt) <= p_max
    (bisection in the eigenbasis of D_i).
    lam = w (log|I+Gamma_j| - tr Gamma_j) + 2 Re tr(T^H Vt) - tr(Vt^H D_i Vt).
    """
    P = pj.shape[0]
    N = H.shape[2]
    r = Gamma.shape[1]
    if P == 0:
        return (np.zeros((0, N, r), dtype=complex), np.zeros(0), np.zeros(0))

    evals, evecs = np.linalg.eigh(_hermitianize(D))
    evals = np.clip(evals, 0.0, None)

    eye_g = np.eye(r) + Gamma
    sign, ldet = np.linalg.slogdet(eye_g)
    trg = np.trace(Gamma, axis1=1, axis2=2).real

    T = np.matmul(_ct(H[pj, pi]), np.matmul(Y[pj], eye_g[pj]))
    T *= np.sqrt(w_pair)[:, None, None]
    Tt = np.matmul(_ct(evecs[pi]), T)                        # (P, N, r)
    S = (np.abs(Tt) ** 2).sum(axis=2)                        # (P, N)
    d = evals[pi]                                            # (P, N)

    with np.errstate(divide="ignore", invalid="ignore"):
        p0 = np.where(S > 0.0, S / d**2, 0.0).sum(axis=1)
    binding = p0 > p_max

    mu = np.zeros(P)
    if binding.any():
        Sb, db = S[binding], d[binding]
        hi = np.ones(binding.sum())
        for _ in range(_BRACKET_DOUBLINGS):
            over = (Sb / (db + hi[:, None]) ** 2).sum(axis=1) > p_max
            if not over.any():
                break
            hi[over] *= 2.0
        lo = np.zeros_like(hi)
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            over = (Sb / (db + mid[:, None]) ** 2).sum(axis=1) > p_max
            lo = np.where(over, mid, lo)
            hi = np.where(over, hi, mid)
        mu[binding] = hi                                     # feasible side

    denom = d + mu[:, None]
    inv = np.where(denom > 0.0, 1.0 / np.where(denom > 0.0, denom, 1.0), 0.0)
    Vt = np.matmul(evecs[pi], Tt * inv[:, :, None])
    lam = (w_pair * (ldet[pj] - trg[pj])
           + 2.0 * (S * inv).sum(axis=1)
           - (d * S * inv**2).sum(axis=1))
    return Vt, lam, mu


def pair_rates(H, V, active_mask, sigma2, pj, pi):
    """Achievable rate (bits/s/Hz) of pair (j, i) under fixed beams, with
    every active transmitter other than i treated as interference."""
    active = np.nonzero(active_mask)[0]
    phi = received_cov(H, V, active, sigma2)
    _, ld_phi = np.linalg.slogdet(phi)
    rates = np.zeros(pj.shape[0])
    live = active_mask[pi]
    if live.any():
        lj, li = pj[live], pi[live]
        G = np.matmul(H[lj, li], V[li])
        F = phi[lj] - np.matmul(G, _ct(G))
        sign, ld_f = np.linalg.slogdet(F)
        good = sign.real > 0
        out = np.zeros(lj.shape[0])
        out[good] = (ld_phi[lj][good] - ld_f[good]) / LN2
        rates[live] = np.clip(out, 0.0, None)
    return rates


def scheduled_rates(H, V, s, sigma2):
    """Per-receiver rates under schedule s; interference comes only from
    transmitters scheduled at other receivers."""
    J = H.shape[0]
    rates = np.zeros(J)
    js = np.nonzero(s >= 0)[0]
    if js.size == 0:
        return rates
    phi = received_cov(H, V, np.unique(s[js]), sigma2)
    G = np.matmul(H[js, s[js]], V[s[js]])
    F = phi[js] - np.matmul(G, _ct(G))
    _, ld_phi = np.linalg.slogdet(phi[js])
    sign, ld_f = np.linalg.slogdet(F)
    good = sign.real > 0
    out = np.zeros(js.shape[0])
    out[good] = (ld_phi[good] - ld_f[good]) / LN2
    rates[js] = np.clip(out, 0.0, None)
    return rates
