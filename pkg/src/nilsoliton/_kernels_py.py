"""Pure numpy implementation of the soliton-residual kernels.

The residual tensor is evaluated through n x n intermediates, so each call
costs O(n^4) instead of the O(n^6) of the direct triple sum.
"""

import numpy as np


def _koszul_combo(a):
    # b[p, r, i] = a[p,r,i] + a[i,p,r] - a[r,i,p]
    return a + np.einsum("ipr->pri", a) - np.einsum("rip->pri", a)


def eq6_tensor(alpha, c):
    a = np.asarray(alpha, dtype=float)
    b = _koszul_combo(a)
    u = np.einsum("rjj->r", a)
    left = (
        -2.0 * np.einsum("r,qri->qi", u, b)
        + 2.0 * np.einsum("qjr,rji->qi", a, b)
        + np.einsum("jri,qjr->qi", b, b)
    )
    right = (
        -2.0 * np.einsum("r,irt->it", u, b)
        + 2.0 * np.einsum("ijr,rjt->it", a, b)
        + np.einsum("ijr,jrt->it", b, b)
    )
    mixed = np.einsum("ipt,qi->tpq", a, left)
    out = mixed - mixed.transpose(0, 2, 1)
    out += np.einsum("pqi,it->tpq", a, right)
    out *= 0.25
    out += c * np.einsum("qpt->tpq", a)
    return out


def eq6_fd_jacobian(base, templates, theta, c, steps):
    """Residual and central-difference Jacobian of ``eq6_tensor`` in ``(theta, c)``.

    ``alpha = base + tensordot(theta, templates)``; ``steps`` has one entry per
    parameter plus a final one for ``c``. Returns ``(r, J)`` with ``r`` the
    flattened residual and ``J`` of shape ``(n**3, k + 1)``.
    """
    templates = np.asarray(templates, dtype=float)
    theta = np.asarray(theta, dtype=float)
    k = theta.shape[0]
    alpha = np.asarray(base, dtype=float) + np.tensordot(theta, templates, axes=1)
    r = eq6_tensor(alpha, c).ravel()
    jac = np.empty((r.size, k + 1))
    for col in range(k):
        h = steps[col]
        plus = eq6_tensor(alpha + h * templates[col], c).ravel()
        minus = eq6_tensor(alpha - h * templates[col], c).ravel()
        jac[:, col] = (plus - minus) / (2.0 * h)
    h = steps[k]
    jac[:, k] = (eq6_tensor(alpha, c + h).ravel() - eq6_tensor(alpha, c - h).ravel()) / (2.0 * h)
    return r, jac
