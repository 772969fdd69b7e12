"""Backend selection for the master-equation right-hand side.

The compiled extension is used when it imported cleanly; set
``RADGAIN_PURE_PYTHON=1`` to force the NumPy fallback (the benchmark under
``benchmarks/`` compares the two).
"""

import os

import numpy as np
import scipy.sparse as sp

from . import _pykernels

try:
    from . import _core
except ImportError:
    _core = None


def compiled_available():
    return _core is not None


def default_backend():
    if os.environ.get("RADGAIN_PURE_PYTHON", "") not in ("", "0"):
        return "python"
    return "compiled" if compiled_available() else "python"


class RhsOperator:
    """Right-hand side of the master equation for one prepared system.

    Calling it with a density matrix returns a freshly allocated derivative;
    the operator owns reusable workspaces, so one instance must not be shared
    across threads.
    """

    def __init__(self, h_csr, jump_terms, backend=None):
        if backend is None:
            backend = default_backend()
        if backend == "compiled" and not compiled_available():
            raise RuntimeError("compiled kernel requested but not built")
        if backend not in ("compiled", "python"):
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self.dimension = h_csr.shape[0]

        h = sp.csr_matrix(h_csr, dtype=np.complex128)
        h.sum_duplicates()
        ht = sp.csr_matrix(h.T)
        self._compact, self._total_nocc = _pykernels.prepare_jumps(jump_terms)

        if backend == "python":
            self._h = h
            self._ht = ht
            return

        d = self.dimension
        self._h_args = (np.ascontiguousarray(h.data),
                        np.ascontiguousarray(h.indices, dtype=np.int32),
                        np.ascontiguousarray(h.indptr, dtype=np.int32))
        self._ht_args = (np.ascontiguousarray(ht.data),
                         np.ascontiguousarray(ht.indices, dtype=np.int32),
                         np.ascontiguousarray(ht.indptr, dtype=np.int32))
        self._nocc_c = np.ascontiguousarray(self._total_nocc)
        gammas, offsets, srcs, tgts, ws = [], [0], [], [], []
        for gamma, src, tgt, w in self._compact:
            gammas.append(gamma)
            srcs.append(src)
            tgts.append(tgt)
            ws.append(w)
            offsets.append(offsets[-1] + src.size)
        self._jump_gamma = np.asarray(gammas, dtype=np.float64)
        self._jump_offsets = np.asarray(offsets, dtype=np.int64)
        self._src_all = (np.concatenate(srcs).astype(np.int64) if srcs
                         else np.zeros(0, dtype=np.int64))
        self._tgt_all = (np.concatenate(tgts).astype(np.int64) if tgts
                         else np.zeros(0, dtype=np.int64))
        self._w_all = (np.concatenate(ws).astype(np.float64) if ws
                       else np.zeros(0, dtype=np.float64))
        self._work_a = np.empty((d, d), dtype=np.complex128)
        self._work_b = np.empty((d, d), dtype=np.complex128)

    def __call__(self, rho):
        if self.backend == "python":
            return _pykernels.lindblad_rhs(rho, self._h, self._ht,
                                           self._compact, self._total_nocc)
        out = np.empty_like(rho)
        _core.lindblad_rhs(rho, *self._h_args, *self._ht_args, self._nocc_c,
                           self._jump_gamma, self._jump_offsets,
                           self._src_all, self._tgt_all, self._w_all,
                           self._work_a, self._work_b, out)
        return out
