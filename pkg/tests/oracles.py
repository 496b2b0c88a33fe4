"""Independent reference computations for the test suite.

Nothing here imports the package's transform or conditioning code: the
oracles use explicit operator matrices, matrix exponentials and Kronecker
products in the most direct form available.
"""

from math import factorial, sqrt

import numpy as np
from scipy.linalg import expm, logm


def annihilation(d):
    return np.diag(np.sqrt(np.arange(1, d)), k=1).astype(complex)


def coherent_exact(gamma, d):
    """Coherent amplitudes straight from the series, no renormalisation."""
    return np.array(
        [np.exp(-abs(gamma) ** 2 / 2) * gamma ** n / sqrt(factorial(n)) for n in range(d)],
        dtype=complex,
    )


def two_mode_unitary(S, d, pad=12):
    """Fock-space unitary for creation-operator rows ``x† -> S[0]·(x†, y†)``.

    Built as ``expm(i G)`` with ``G = sum K_ij a_i† a_j`` and ``exp(iK) = S^T``
    on a space enlarged by ``pad`` levels, then cut back to ``d`` levels.
    """
    D = d + pad
    a = annihilation(D)
    eye = np.eye(D)
    ops = [np.kron(a, eye), np.kron(eye, a)]
    K = -1j * logm(np.asarray(S, dtype=complex).T)
    G = sum(K[i, j] * ops[i].conj().T @ ops[j] for i in range(2) for j in range(2))
    U = expm(1j * G).reshape(D, D, D, D)[:d, :d, :d, :d]
    return U.reshape(d * d, d * d)


def hand_built_ket(gamma, phi, d):
    """Output ket over (a, b, c) assembled term by term from its closed form.

    ``|1>|g cos>|g sin> + sin |0> b†|g cos>|g sin> - cos |0>|g cos> c†|g sin>``,
    all over sqrt(2), with b† and c† applied to the untruncated series.
    """
    s, c = np.sin(phi), np.cos(phi)
    alpha = coherent_exact(gamma * c, d + 1)
    beta = coherent_exact(gamma * s, d + 1)
    n = np.arange(d)
    raised_alpha = np.concatenate([[0.0], alpha[: d - 1]]) * np.sqrt(n)
    raised_beta = np.concatenate([[0.0], beta[: d - 1]]) * np.sqrt(n)
    ket = np.zeros((d, d, d), dtype=complex)
    ket[1] = np.outer(alpha[:d], beta[:d])
    ket[0] = s * np.outer(raised_alpha, beta[:d]) - c * np.outer(alpha[:d], raised_beta)
    return ket / np.sqrt(2)


def brute_force_condition(amplitudes, weights_by_mode):
    """Full density matrix, Kronecker-product POVM, explicit partial trace.

    ``weights_by_mode`` maps mode -> diagonal POVM weights; unmeasured modes
    get the identity. Returns ``(probability, reduced unnormalised operator)``.
    """
    m = amplitudes.ndim
    d = amplitudes.shape[0]
    vec = amplitudes.reshape(-1)
    rho = np.outer(vec, vec.conj())
    op = np.eye(1)
    for k in range(m):
        op = np.kron(op, np.diag(weights_by_mode[k]) if k in weights_by_mode else np.eye(d))
    weighted = rho @ op
    p = np.trace(weighted).real
    kept = [k for k in range(m) if k not in weights_by_mode]
    t = weighted.reshape((d,) * (2 * m))
    side = d ** len(kept)
    reduced = np.zeros((side, side), dtype=complex)
    for idx_r in np.ndindex(*(d,) * len(kept)):
        for idx_c in np.ndindex(*(d,) * len(kept)):
            total = 0.0
            for traced in np.ndindex(*(d,) * (m - len(kept))):
                row, col = [0] * m, [0] * m
                it = iter(traced)
                for k in range(m):
                    if k in kept:
                        row[k] = idx_r[kept.index(k)]
                        col[k] = idx_c[kept.index(k)]
                    else:
                        row[k] = col[k] = next(it)
                total += t[tuple(row) + tuple(col)]
            reduced[np.ravel_multi_index(idx_r, (d,) * len(kept)),
                    np.ravel_multi_index(idx_c, (d,) * len(kept))] = total
    return p, reduced
