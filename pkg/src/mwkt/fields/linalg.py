"""Exact dense linear algebra over a field: just enough Gaussian elimination
to solve square systems and compute matrix inverses for change-of-basis work
in extensions.  Matrices are lists of lists of field elements, row-major."""

from __future__ import annotations


def solve(field, matrix, rhs):
    """Solve M x = b for square M.  Returns the solution vector, or None if
    M is singular (whether or not b is in the image)."""
    n = len(matrix)
    assert all(len(row) == n for row in matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [c * inv for c in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def invert(field, matrix):
    """Inverse of a square matrix, or None if singular."""
    n = len(matrix)
    ident = [[field.one() if i == j else field.zero() for j in range(n)] for i in range(n)]
    aug = [list(row) + list(ident[i]) for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [c * inv for c in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def det(field, matrix):
    """Determinant by fraction-free-enough Gaussian elimination (we are over
    a field, so plain elimination with pivot bookkeeping is exact)."""
    n = len(matrix)
    m = [list(row) for row in matrix]
    result = field.one()
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return field.zero()
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        result = result * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if not m[r][col].is_zero():
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return result


def mat_vec(matrix, vec, zero):
    out = []
    for row in matrix:
        acc = zero
        for a, x in zip(row, vec):
            acc = acc + a * x
        out.append(acc)
    return out


def first_dependency(field, vectors):
    """Given a list of vectors (each a list of field elements), return the
    coefficients (c_0, ..., c_{k-1}) of the first vector that is a linear
    combination of its predecessors: vectors[k] = sum c_i vectors[i].
    Returns (k, coeffs) or None if the vectors are independent.

    Used to find minimal polynomials: feed 1, a, a^2, ... until dependent.
    """
    if not vectors:
        return None
    dim = len(vectors[0])
    # Rows of the echelon basis, plus the expression of each in the inputs.
    basis = []  # list of (reduced_vector, combo)
    for k, v in enumerate(vectors):
        vec = list(v)
        combo = [field.one() if i == k else field.zero() for i in range(len(vectors))]
        for red, red_combo in basis:
            lead = next(i for i in range(dim) if not red[i].is_zero())
            if not vec[lead].is_zero():
                f = vec[lead]
                vec = [a - f * b for a, b in zip(vec, red)]
                combo = [a - f * b for a, b in zip(combo, red_combo)]
        if all(c.is_zero() for c in vec):
            # combo expresses 0 = sum combo_i vectors[i] with combo_k = 1
            return k, [-combo[i] for i in range(k)]
        lead = next(i for i in range(dim) if not vec[i].is_zero())
        inv = vec[lead].inverse()
        vec = [c * inv for c in vec]
        combo = [c * inv for c in combo]
        basis.append((vec, combo))
    return None
