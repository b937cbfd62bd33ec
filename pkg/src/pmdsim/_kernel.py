"""Compiled inner loop: carry one SU(2) propagator per frequency node."""

import numba as nb
import numpy as np


@nb.njit(cache=True, nogil=True)
def evolve_outer_products(bx, by, dz, f, kappa, a0, stride, ordered):
    """Outer products ``psi psi^dagger`` at every checkpoint and frequency.

    The propagator is stored by its first column ``(a, c)``, i.e.
    ``U = [[a, -conj(c)], [c, conj(a)]]``, which is exact for SU(2).

    Returns ``(out, max_unitarity_error)`` with ``out`` shaped
    ``(n_steps // stride + 1, len(f), 2, 2)``.
    """
    n_steps = bx.shape[0]
    nf = f.shape[0]
    n_out = n_steps // stride + 1
    out = np.empty((n_out, nf, 2, 2), dtype=np.complex128)
    a = np.ones(nf, dtype=np.complex128)
    c = np.zeros(nf, dtype=np.complex128)
    sx = 0.0
    sy = 0.0
    worst = 0.0
    _record(out, 0, a, c, a0)
    for i in range(n_steps):
        if ordered:
            for k in range(nf):
                hx = kappa * f[k] * bx[i] * dz
                hy = kappa * f[k] * by[i] * dz
                r = np.sqrt(hx * hx + hy * hy)
                cs = np.cos(r)
                sn = np.sin(r) / r if r >= 1e-12 else 1.0
                q = complex(sn * hy, -sn * hx)
                ak = a[k]
                ck = c[k]
                a[k] = cs * ak - q.conjugate() * ck
                c[k] = q * ak + cs * ck
                dev = abs(a[k].real ** 2 + a[k].imag ** 2 + c[k].real ** 2 + c[k].imag ** 2 - 1.0)
                if dev > worst:
                    worst = dev
        else:
            sx += bx[i] * dz
            sy += by[i] * dz
        if (i + 1) % stride == 0:
            if not ordered:
                for k in range(nf):
                    hx = kappa * f[k] * sx
                    hy = kappa * f[k] * sy
                    r = np.sqrt(hx * hx + hy * hy)
                    sn = np.sin(r) / r if r >= 1e-12 else 1.0
                    a[k] = np.cos(r)
                    c[k] = complex(sn * hy, -sn * hx)
                    dev = abs(a[k].real ** 2 + c[k].real ** 2 + c[k].imag ** 2 - 1.0)
                    if dev > worst:
                        worst = dev
            _record(out, (i + 1) // stride, a, c, a0)
    return out, worst


@nb.njit(cache=True, nogil=True)
def _record(out, j, a, c, a0):
    for k in range(a.shape[0]):
        p0 = a[k] * a0[0] - c[k].conjugate() * a0[1]
        p1 = c[k] * a0[0] + a[k].conjugate() * a0[1]
        out[j, k, 0, 0] = p0 * p0.conjugate()
        out[j, k, 0, 1] = p0 * p1.conjugate()
        out[j, k, 1, 0] = p1 * p0.conjugate()
        out[j, k, 1, 1] = p1 * p1.conjugate()
