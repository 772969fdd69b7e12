"""NumPy implementation of the master-equation right-hand side.

Mode-loss dissipators are applied through their column maps (each basis state
has at most one image under an annihilation operator), which keeps every term
at O(D^2) instead of the O(D^3) of dense superoperator algebra.
"""

import numpy as np


def prepare_jumps(jump_terms):
    """Compact (gamma, sources, targets, weights) per jump plus summed n-diag."""
    compact = []
    total_nocc = None
    for gamma, targets, weights in jump_terms:
        if total_nocc is None:
            total_nocc = np.zeros_like(weights)
        total_nocc += gamma * weights**2
        valid = targets >= 0
        compact.append((gamma, np.nonzero(valid)[0], targets[valid],
                        weights[valid]))
    if total_nocc is None:
        total_nocc = np.zeros(0)
    return compact, total_nocc


def lindblad_rhs(rho, h_csr, ht_csr, compact_jumps, total_nocc):
    """d(rho)/dt = -i[H, rho] + sum_j gamma_j (a rho a+ - {a+a, rho}/2)."""
    if h_csr.nnz:
        out = h_csr @ rho
        out -= (ht_csr @ rho.T).T
        out *= -1j
    else:
        out = np.zeros_like(rho)
    if total_nocc.size:
        out -= 0.5 * (total_nocc[:, None] + total_nocc[None, :]) * rho
    for gamma, src, tgt, w in compact_jumps:
        if src.size:
            out[np.ix_(tgt, tgt)] += gamma * (w[:, None] * w[None, :]) \
                * rho[np.ix_(src, src)]
    return out
