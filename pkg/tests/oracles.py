"""Independent reference computations used by the tests.

None of these call into scalecalc; they recompute the same quantities by
brute force, finite differences or adaptive quadrature.
"""
import itertools
import math

import numpy as np
from scipy import integrate
from scipy.linalg import eigh_tridiagonal, eigvalsh


def brute_merge(a, b, count):
    """i-th smallest of the union multiset, by plain list sorting."""
    return sorted(list(a[:count]) + list(b[:count]))[:count]


def lattice_levels(n, radius_sq):
    """{|k|^2: multiplicity} over k in Z^n with |k|^2 <= radius_sq, by enumeration."""
    r = math.isqrt(radius_sq)
    levels = {}
    for k in itertools.product(range(-r, r + 1), repeat=n):
        s = sum(x * x for x in k)
        if s <= radius_sq:
            levels[s] = levels.get(s, 0) + 1
    return dict(sorted(levels.items()))


def fd_periodic(N, length=2 * math.pi, count=7):
    """Lowest eigenvalues of -u'' on a periodic grid (dense solve)."""
    h = length / N
    A = 2 * np.eye(N) - np.eye(N, k=1) - np.eye(N, k=-1)
    A[0, -1] = A[-1, 0] = -1
    return eigvalsh(A / h**2, subset_by_index=[0, count - 1])


def fd_interval(N, bc, count):
    """Lowest eigenvalues of -u'' on [0, 1].

    Dirichlet uses interior nodes; Neumann and mixed (Dirichlet at 0, Neumann
    at 1) use a cell-centred grid with reflecting ghost cells.
    """
    if bc == "dirichlet":
        h = 1.0 / N
        d = np.full(N - 1, 2.0)
        e = np.full(N - 2, -1.0)
    else:
        h = 1.0 / N
        d = np.full(N, 2.0)
        e = np.full(N - 1, -1.0)
        d[-1] = 1.0
        d[0] = 1.0 if bc == "neumann" else 3.0
    return eigh_tridiagonal(d / h**2, e / h**2, select="i", select_range=(0, count - 1), eigvals_only=True)


def fd_interval_richardson(N, bc, count):
    """Second-order scheme extrapolated from grids N/2 and N."""
    coarse = fd_interval(N // 2, bc, count)
    fine = fd_interval(N, bc, count)
    return (4 * fine - coarse) / 3


def circle_basis(mu):
    if mu == 1:
        return lambda t: 1 / math.sqrt(2 * math.pi)
    m = mu // 2
    trig = math.cos if mu % 2 == 0 else math.sin
    return lambda t: trig(m * t) / math.sqrt(math.pi)


def quad_coefficient(u, mu):
    """L^2 coefficient of u against basis function mu by adaptive quadrature."""
    phi = circle_basis(mu)
    val, _ = integrate.quad(lambda t: u(t) * phi(t), 0, 2 * math.pi, limit=200)
    return val


def quad_sq_norm(u, lo=0.0, hi=2 * math.pi):
    val, _ = integrate.quad(lambda t: u(t) ** 2, lo, hi, limit=200)
    return val
