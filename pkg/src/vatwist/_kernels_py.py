"""Pure-Python graded Cauchy product (fallback for the compiled kernel).

Layout shared with ``_kernels.pyx``: a dense series block is a flat list of
``mpq`` where entry ``(i * n + k) * phi + c`` is the coordinate of X^c
(X = zeta_N, power basis) in the eps^k component of the i-th exponent slot.
"""

from gmpy2 import mpq

ZERO = mpq(0)


def graded_convolve(a, na, b, nb, n, phi, red, caps):
    """Product of two dense blocks, truncated per eps-grade.

    ``caps[k]`` is the number of output slots kept for grade k; ``red`` holds
    the rows X^j mod Phi_N for phi <= j <= 2 phi - 2.  Returns a flat list
    of length ``max(caps) * n * phi``.
    """
    nout = max(caps) if caps else 0
    if nout <= 0:
        return []
    W = 2 * phi - 1
    acc = [ZERO] * (nout * n * W)
    A = [[] for _ in range(n)]
    for i in range(na):
        for k in range(n):
            base = (i * n + k) * phi
            for c in range(phi):
                v = a[base + c]
                if v:
                    A[k].append((i, c, v))
    B = [[] for _ in range(n)]
    for j in range(nb):
        for k in range(n):
            base = (j * n + k) * phi
            for d in range(phi):
                v = b[base + d]
                if v:
                    B[k].append((j, d, v))
    for k1 in range(n):
        Ak = A[k1]
        if not Ak:
            continue
        for k2 in range(n - k1):
            Bk = B[k2]
            if not Bk:
                continue
            k = k1 + k2
            cap = caps[k]
            for i, c, x in Ak:
                if i >= cap:
                    continue
                for j, d, y in Bk:
                    o = i + j
                    if o < cap:
                        idx = (o * n + k) * W + c + d
                        acc[idx] = acc[idx] + x * y
    out = [ZERO] * (nout * n * phi)
    for slot in range(nout * n):
        base = slot * W
        if phi > 1:
            for jj, row in enumerate(red):
                v = acc[base + phi + jj]
                if v:
                    for r in range(phi):
                        w = row[r]
                        if w:
                            acc[base + r] = acc[base + r] + w * v
        ob = slot * phi
        for c in range(phi):
            out[ob + c] = acc[base + c]
    return out
