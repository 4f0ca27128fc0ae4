"""Independent reference implementations used only by the tests."""

import itertools
from functools import lru_cache


def _mul2(A, B, rows, inner, cols):
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(inner)) % 2 for j in range(cols))
                 for i in range(rows))


def _rank2(rows, cols):
    rows = [list(r) for r in rows]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


@lru_cache(maxsize=None)
def gl2(d):
    """All invertible d x d matrices over F_2, as row tuples."""
    out = []
    for bits in itertools.product((0, 1), repeat=d * d):
        M = tuple(tuple(bits[i * d:(i + 1) * d]) for i in range(d))
        if _rank2(M, d) == d:
            out.append(M)
    return out


def brute_force_isomorphic(u, v):
    """Search every tuple of invertible matrices over F_2 for commuting squares."""
    if u.n != v.n or u.dims != v.dims:
        return False
    n, dims = u.n, u.dims
    A = [tuple(tuple(int(a) for a in row) for row in u.maps[k].data) for k in range(n)]
    B = [tuple(tuple(int(a) for a in row) for row in v.maps[k].data) for k in range(n)]
    for phis in itertools.product(*(gl2(d) for d in dims)):
        if all(_mul2(phis[(k + 1) % n], A[k], dims[(k + 1) % n], dims[(k + 1) % n], dims[k])
               == _mul2(B[k], phis[k], dims[(k + 1) % n], dims[k], dims[k])
               for k in range(n)):
            return True
    return False


def nilpotent_f2_reps(dims):
    """Every nilpotent n=2 cycle over F_2 with the given dimensions."""
    from kaplansky.cyclerep import CycleRep, is_locally_nilpotent
    from kaplansky.exactalg import GF, Matrix
    F = GF(2)
    d0, d1 = dims
    out = []
    for b0 in itertools.product((0, 1), repeat=d0 * d1):
        for b1 in itertools.product((0, 1), repeat=d0 * d1):
            M0 = Matrix(F, d1, d0, tuple(tuple(b0[i * d0:(i + 1) * d0]) for i in range(d1)))
            M1 = Matrix(F, d0, d1, tuple(tuple(b1[i * d1:(i + 1) * d1]) for i in range(d0)))
            u = CycleRep(F, 2, (d0, d1), (M0, M1))
            if is_locally_nilpotent(u):
                out.append(u)
    return out


def sympy_invariant_factors(M):
    """Monic invariant factors of tI - M over Q as coefficient lists, low degree first."""
    import sympy
    from sympy.matrices.normalforms import invariant_factors
    t = sympy.symbols("t")
    d = M.rows
    S = sympy.Matrix(d, d, lambda i, j: sympy.Rational(M.data[i][j].numerator, M.data[i][j].denominator))
    facs = invariant_factors(t * sympy.eye(d) - S, domain=sympy.QQ[t]) if d else ()
    out = []
    for f in facs:
        p = sympy.Poly(f, t)
        if p.degree() >= 1:
            p = p.monic()
            out.append([sympy.Rational(c) for c in reversed(p.all_coeffs())])
    return out
