"""Cyclic Jacobi diagonalization of small complex Hermitian matrices.

Two implementations of the same algorithm live here:

* ``jacobi_eigh_loop`` walks one matrix at a time with scalar loops; it is
  written in the numba-compatible subset and gets compiled by ``_accel``.
* ``jacobi_eigh_vectorized`` applies each plane rotation to the whole batch
  at once with numpy broadcasting and needs nothing beyond numpy.

Both return unsorted eigenvalues and eigenvectors as columns; ordering and
the phase convention are applied by the caller.
"""

import numpy as np

MAX_SWEEPS = 30
# Squared off-diagonal Frobenius norm, relative to the squared full norm, at
# which sweeping stops (relative off-diagonal size ~1e-16).
REL_TOL = 1e-32


def jacobi_eigh_loop(h_batch):
    nb, n, _ = h_batch.shape
    w = np.empty((nb, n), dtype=np.float64)
    v = np.empty((nb, n, n), dtype=np.complex128)
    for b in range(nb):
        a = h_batch[b].copy()
        u = np.zeros((n, n), dtype=np.complex128)
        for i in range(n):
            u[i, i] = 1.0
        scale = 0.0
        for i in range(n):
            for j in range(n):
                scale += a[i, j].real ** 2 + a[i, j].imag ** 2
        for _sweep in range(MAX_SWEEPS):
            off = 0.0
            for i in range(n):
                for j in range(i + 1, n):
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
            if off <= REL_TOL * scale or off == 0.0:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    g = a[p, q]
                    mag = abs(g)
                    if mag == 0.0:
                        continue
                    phase = g / mag
                    app = a[p, p].real
                    aqq = a[q, q].real
                    zeta = (aqq - app) / (2.0 * mag)
                    if zeta >= 0.0:
                        t = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                    else:
                        t = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = t * c
                    # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                    g00 = c + 0j
                    g01 = s + 0j
                    g10 = -s * np.conj(phase)
                    g11 = c * np.conj(phase)
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = akp * g00 + akq * g10
                        a[k, q] = akp * g01 + akq * g11
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = np.conj(g00) * apk + np.conj(g10) * aqk
                        a[q, k] = np.conj(g01) * apk + np.conj(g11) * aqk
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    for k in range(n):
                        ukp = u[k, p]
                        ukq = u[k, q]
                        u[k, p] = ukp * g00 + ukq * g10
                        u[k, q] = ukp * g01 + ukq * g11
        for i in range(n):
            w[b, i] = a[i, i].real
        v[b] = u
    return w, v


def jacobi_eigh_vectorized(h_batch):
    a = np.array(h_batch, dtype=np.complex128, copy=True)
    nb, n, _ = a.shape
    u = np.broadcast_to(np.eye(n, dtype=np.complex128), (nb, n, n)).copy()
    scale = np.sum(np.abs(a) ** 2, axis=(1, 2))
    iu = np.triu_indices(n, 1)
    for _sweep in range(MAX_SWEEPS):
        off = np.sum(np.abs(a[:, iu[0], iu[1]]) ** 2, axis=1)
        if np.all((off <= REL_TOL * scale) | (off == 0.0)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[:, p, q]
                mag = np.abs(g)
                live = mag > 0.0
                safe = np.where(live, mag, 1.0)
                phase = np.where(live, g / safe, 1.0)
                zeta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe)
                with np.errstate(divide="ignore", over="ignore"):
                    # Overflow to inf only happens for negligible |g|, where t -> 0.
                    root = np.sqrt(1.0 + zeta * zeta)
                    t = np.where(zeta >= 0.0, 1.0 / (zeta + root), -1.0 / (-zeta + root))
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g00 = c.astype(np.complex128)
                g01 = s.astype(np.complex128)
                g10 = -s * np.conj(phase)
                g11 = c * np.conj(phase)
                cp = a[:, :, p].copy()
                cq = a[:, :, q]
                a[:, :, p] = cp * g00[:, None] + cq * g10[:, None]
                a[:, :, q] = cp * g01[:, None] + cq * g11[:, None]
                rp = a[:, p, :].copy()
                rq = a[:, q, :]
                a[:, p, :] = np.conj(g00)[:, None] * rp + np.conj(g10)[:, None] * rq
                a[:, q, :] = np.conj(g01)[:, None] * rp + np.conj(g11)[:, None] * rq
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real
                up = u[:, :, p].copy()
                uq = u[:, :, q]
                u[:, :, p] = up * g00[:, None] + uq * g10[:, None]
                u[:, :, q] = up * g01[:, None] + uq * g11[:, None]
    w = np.real(np.diagonal(a, axis1=1, axis2=2)).copy()
    return w, u
