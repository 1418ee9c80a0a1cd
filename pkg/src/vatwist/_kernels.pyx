# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled graded Cauchy product on raw GMP rationals.

Same contract and memory layout as ``_kernels_py.graded_convolve``; inputs
and outputs are lists of ``gmpy2.mpq``.  Accumulation happens in a private
``mpq_t`` buffer so no Python objects are created inside the loops.
"""

from libc.stdlib cimport malloc, free
from gmpy2 cimport *

import gmpy2

import_gmpy2()

cdef extern from "gmp.h":
    void mpq_init(mpq_ptr)
    void mpq_clear(mpq_ptr)
    void mpq_mul(mpq_ptr, mpq_srcptr, mpq_srcptr)
    void mpq_add(mpq_ptr, mpq_srcptr, mpq_srcptr)
    void mpq_set_si(mpq_ptr, long, unsigned long)
    int mpq_sgn(mpq_srcptr)

cdef object ZERO = gmpy2.mpq(0)


cdef struct Entry:
    int slot
    int coord
    mpq_ptr val


cdef Entry* _collect(list src, int count, int n, int phi, int k, int* size) except NULL:
    cdef Entry* out = <Entry*>malloc((count * phi + 1) * sizeof(Entry))
    if out == NULL:
        raise MemoryError()
    cdef int i, c, m = 0
    cdef object obj
    cdef mpq_ptr p
    for i in range(count):
        for c in range(phi):
            obj = src[(i * n + k) * phi + c]
            if not MPQ_Check(obj):
                free(out)
                raise TypeError("kernel inputs must be gmpy2.mpq")
            p = &(<mpq>obj).q[0]
            if mpq_sgn(p) != 0:
                out[m].slot = i
                out[m].coord = c
                out[m].val = p
                m += 1
    size[0] = m
    return out


def graded_convolve(list a, int na, list b, int nb, int n, int phi, red, caps):
    cdef int nout = max(caps) if caps else 0
    if nout <= 0:
        return []
    cdef int W = 2 * phi - 1
    cdef Py_ssize_t total = <Py_ssize_t>nout * n * W
    cdef int k, k1, k2, cap, ia, ib, o, r, jj, c
    cdef Py_ssize_t idx, slot, base
    cdef int* ccaps = <int*>malloc(n * sizeof(int))
    cdef long* cred = <long*>malloc((W - phi + 1) * phi * sizeof(long))
    cdef Entry** A = <Entry**>malloc(n * sizeof(Entry*))
    cdef Entry** B = <Entry**>malloc(n * sizeof(Entry*))
    cdef int* asz = <int*>malloc(n * sizeof(int))
    cdef int* bsz = <int*>malloc(n * sizeof(int))
    cdef __mpq_struct* acc = <__mpq_struct*>malloc(total * sizeof(__mpq_struct))
    cdef mpq_t tmp, coef
    cdef Entry ea, eb
    cdef mpq res
    cdef list out
    if not (ccaps and cred and A and B and asz and bsz and acc):
        free(ccaps); free(cred); free(A); free(B); free(asz); free(bsz); free(acc)
        raise MemoryError()
    for k in range(n):
        A[k] = NULL
        B[k] = NULL
        ccaps[k] = caps[k]
    for jj in range(W - phi):
        row = red[jj]
        for r in range(phi):
            cred[jj * phi + r] = row[r]
    for idx in range(total):
        mpq_init(&acc[idx])
    mpq_init(tmp)
    mpq_init(coef)
    try:
        for k in range(n):
            A[k] = _collect(a, na, n, phi, k, &asz[k])
            B[k] = _collect(b, nb, n, phi, k, &bsz[k])
        for k1 in range(n):
            for k2 in range(n - k1):
                k = k1 + k2
                cap = ccaps[k]
                for ia in range(asz[k1]):
                    ea = A[k1][ia]
                    if ea.slot >= cap:
                        continue
                    for ib in range(bsz[k2]):
                        eb = B[k2][ib]
                        o = ea.slot + eb.slot
                        if o < cap:
                            idx = (<Py_ssize_t>o * n + k) * W + ea.coord + eb.coord
                            mpq_mul(tmp, ea.val, eb.val)
                            mpq_add(&acc[idx], &acc[idx], tmp)
        out = [ZERO] * (nout * n * phi)
        for slot in range(<Py_ssize_t>nout * n):
            base = slot * W
            for jj in range(W - phi):
                if mpq_sgn(&acc[base + phi + jj]) != 0:
                    for r in range(phi):
                        if cred[jj * phi + r] != 0:
                            mpq_set_si(coef, cred[jj * phi + r], 1)
                            mpq_mul(tmp, coef, &acc[base + phi + jj])
                            mpq_add(&acc[base + r], &acc[base + r], tmp)
            for c in range(phi):
                if mpq_sgn(&acc[base + c]) != 0:
                    res = GMPy_MPQ_New(NULL)
                    mpq_set(res.q, &acc[base + c])
                    out[slot * phi + c] = res
        return out
    finally:
        for k in range(n):
            free(A[k])
            free(B[k])
        for idx in range(total):
            mpq_clear(&acc[idx])
        mpq_clear(tmp)
        mpq_clear(coef)
        free(ccaps); free(cred); free(A); free(B); free(asz); free(bsz); free(acc)
