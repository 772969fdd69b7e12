# cython: boundscheck=False, wraparound=False, cdivision=True
"""Fused C kernel for the master-equation right-hand side.

Same contract as the NumPy fallback: sparse-Hamiltonian commutator plus
mode-loss dissipators applied through their column maps.  The Hamiltonian
arrives as CSR arrays for both H and H^T so both products stream over rows.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.complex128_t cplx


cdef void _transpose_into(cplx[:, ::1] src, cplx[:, ::1] dst,
                          Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i0, j0, i, j, i_hi, j_hi
    for i0 in range(0, n, 64):
        i_hi = i0 + 64
        if i_hi > n:
            i_hi = n
        for j0 in range(0, n, 64):
            j_hi = j0 + 64
            if j_hi > n:
                j_hi = n
            for i in range(i0, i_hi):
                for j in range(j0, j_hi):
                    dst[j, i] = src[i, j]


cdef void _csr_dense(cplx[::1] data, int[::1] indices, int[::1] indptr,
                     cplx[:, ::1] mat, cplx[:, ::1] out,
                     Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t x, y, p
    cdef int u
    cdef cplx h
    for x in range(n):
        for y in range(n):
            out[x, y] = 0.0
        for p in range(indptr[x], indptr[x + 1]):
            u = indices[p]
            h = data[p]
            for y in range(n):
                out[x, y] = out[x, y] + h * mat[u, y]


def lindblad_rhs(cplx[:, ::1] rho,
                 cplx[::1] h_data, int[::1] h_indices, int[::1] h_indptr,
                 cplx[::1] ht_data, int[::1] ht_indices, int[::1] ht_indptr,
                 double[::1] total_nocc,
                 double[::1] jump_gamma,
                 long long[::1] jump_offsets,
                 long long[::1] src_all,
                 long long[::1] tgt_all,
                 double[::1] w_all,
                 cplx[:, ::1] work_a,
                 cplx[:, ::1] work_b,
                 cplx[:, ::1] out):
    cdef Py_ssize_t n = rho.shape[0]
    cdef Py_ssize_t x, y, j, p, q, lo, hi
    cdef Py_ssize_t row, src_row
    cdef double coef, wq
    cdef cplx minus_i = -1j
    cdef bint have_h = h_data.shape[0] > 0
    cdef bint have_n = total_nocc.shape[0] > 0
    cdef Py_ssize_t n_jumps = jump_gamma.shape[0]

    with nogil:
        if have_h:
            # out <- H rho ;  work_b <- (rho H)^T, built as H^T rho^T
            _transpose_into(rho, work_a, n)
            _csr_dense(ht_data, ht_indices, ht_indptr, work_a, work_b, n)
            _csr_dense(h_data, h_indices, h_indptr, rho, out, n)
            _transpose_into(work_b, work_a, n)
            if have_n:
                for x in range(n):
                    for y in range(n):
                        out[x, y] = minus_i * (out[x, y] - work_a[x, y]) \
                            - 0.5 * (total_nocc[x] + total_nocc[y]) * rho[x, y]
            else:
                for x in range(n):
                    for y in range(n):
                        out[x, y] = minus_i * (out[x, y] - work_a[x, y])
        else:
            if have_n:
                for x in range(n):
                    for y in range(n):
                        out[x, y] = -0.5 * (total_nocc[x] + total_nocc[y]) \
                            * rho[x, y]
            else:
                for x in range(n):
                    for y in range(n):
                        out[x, y] = 0.0

        for j in range(n_jumps):
            lo = jump_offsets[j]
            hi = jump_offsets[j + 1]
            for p in range(lo, hi):
                row = tgt_all[p]
                src_row = src_all[p]
                coef = jump_gamma[j] * w_all[p]
                for q in range(lo, hi):
                    wq = coef * w_all[q]
                    out[row, tgt_all[q]] = out[row, tgt_all[q]] \
                        + wq * rho[src_row, src_all[q]]
    return np.asarray(out)
