import numpy as np
import pytest

from noisybell.states import maximally_mixed, random_density_matrix


def brute_partial_transpose(m, dims, factors):
    """Index-by-index partial transpose, independent of the reshape implementation."""
    m = np.asarray(m)
    out = np.zeros_like(m)
    idx = list(np.ndindex(*dims))
    strides = [int(np.prod(dims[k + 1:])) for k in range(len(dims))]
    flat = {t: sum(a * s for a, s in zip(t, strides)) for t in idx}
    for r in idx:
        for c in idx:
            r2, c2 = list(r), list(c)
            for k in factors:
                r2[k], c2[k] = c[k], r[k]
            out[flat[tuple(r2)], flat[tuple(c2)]] = m[flat[r], flat[c]]
    return out


def brute_partial_trace(m, dims, keep):
    """Sum over matching indices of the discarded factors."""
    m = np.asarray(m)
    idx = list(np.ndindex(*dims))
    strides = [int(np.prod(dims[k + 1:])) for k in range(len(dims))]
    kd = [dims[k] for k in keep]
    kstr = [int(np.prod(kd[j + 1:])) for j in range(len(kd))]
    out = np.zeros((int(np.prod(kd)),) * 2, dtype=complex)
    for r in idx:
        for c in idx:
            if any(r[k] != c[k] for k in range(len(dims)) if k not in keep):
                continue
            i = sum(r[k] * s for k, s in zip(keep, kstr))
            j = sum(c[k] * s for k, s in zip(keep, kstr))
            out[i, j] += m[sum(a * s for a, s in zip(r, strides)), sum(a * s for a, s in zip(c, strides))]
    return out


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


@pytest.fixture
def sigmas():
    """Maximally mixed, three mixed and one pure seeded noise state."""
    return [maximally_mixed(4)] + [random_density_matrix(4, s) for s in (11, 12, 13)] + [
        random_density_matrix(4, 14, rank=1)
    ]
