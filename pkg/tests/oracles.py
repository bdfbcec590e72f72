"""Independent reference computations used only by the tests.

None of these share code paths with the package: no eigendecompositions,
no numpy.kron, no einsum.
"""

import math

import numpy as np


def taylor_expm(m, terms=30):
    """exp(m) by scaling and squaring a truncated Taylor series."""
    m = np.asarray(m, dtype=complex)
    norm = np.abs(m).sum(axis=0).max()
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    a = m / 2**squarings
    result = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def kron_loops(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim == 1:
        return np.array([x * y for x in a for y in b])
    n, m = a.shape[0], b.shape[0]
    out = np.zeros((n * m, n * m), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(m):
                for l in range(m):
                    out[i * m + k, j * m + l] = a[i, j] * b[k, l]
    return out


def partial_trace_loops(rho, keep):
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                if keep == "first":
                    out[i, j] += rho[2 * i + k, 2 * j + k]
                else:
                    out[i, j] += rho[2 * k + i, 2 * k + j]
    return out


def quadratic_eigenvalues(m):
    """Roots of the characteristic polynomial via numpy.roots."""
    m = np.asarray(m, dtype=complex)
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return np.roots([1, -tr, det])


def grid_argmax(f, lo, hi, n=100_000):
    xs = np.linspace(lo, hi, n)
    ys = np.array([f(x) for x in xs])
    k = int(np.argmax(ys))
    return xs[k], ys[k]


def entropy_bits(lams):
    return -sum(x * math.log2(x) for x in lams if x > 0)
