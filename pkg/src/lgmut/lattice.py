"""Integer linear algebra: primitive vectors, Hermite forms, unimodular maps.

Everything here works on plain tuples of Python ints, so results are exact
for arbitrarily large entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


class NotUnimodularlyCompletable(ValueError):
    """The given rows are not part of a basis of the integer lattice."""


def make_primitive(v: Sequence[int]) -> tuple[Vector, int]:
    """Return ``(v / g, g)`` where ``g`` is the gcd of the entries of ``v``."""
    v = tuple(int(a) for a in v)
    g = 0
    for a in v:
        g = gcd(g, a)
    if g == 0:
        raise ValueError("the zero vector has no primitive form")
    return tuple(a // g for a in v), g


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for a in v:
        g = gcd(g, int(a))
    return g == 1


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows: Sequence[Sequence[int]]) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    h, _ = hermite_form(rows)
    return sum(1 for r in h if any(r))


def hermite_form(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``.  ``H`` is in
    row echelon form, pivots are positive and the entries above each pivot lie
    in ``[0, pivot)``.  A matrix already in this form is returned unchanged
    with ``U`` the identity.
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    ncols = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        if r == m:
            break
        # gcd-combine the column below row r into row r
        for i in range(r + 1, m):
            if a[i][c] == 0:
                continue
            if a[r][c] == 0:
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
                continue
            x, y = a[r][c], a[i][c]
            g, s, t = _xgcd(x, y)
            # [s t; -y/g x/g] has determinant 1
            p, q = -y // g, x // g
            ar, ai = a[r], a[i]
            a[r] = [s * e + t * f for e, f in zip(ar, ai)]
            a[i] = [p * e + q * f for e, f in zip(ar, ai)]
            ur, ui = u[r], u[i]
            u[r] = [s * e + t * f for e, f in zip(ur, ui)]
            u[i] = [p * e + q * f for e, f in zip(ur, ui)]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-e for e in a[r]]
            u[r] = [-e for e in u[r]]
        piv = a[r][c]
        for i in range(r):
            f = a[i][c] // piv
            if f:
                a[i] = [e - f * g_ for e, g_ in zip(a[i], a[r])]
                u[i] = [e - f * g_ for e, g_ in zip(u[i], u[r])]
        r += 1
    return a, u


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) > 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def transpose(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    bt = list(zip(*b))
    return [[dot(r, c) for c in bt] for r in a]


def invert_exact(rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def solve_exact(rows: Sequence[Sequence[int]], rhs: Sequence[int | Fraction]) -> tuple[Fraction, ...] | None:
    """Solve a square system exactly; ``None`` if it is singular."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return None
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(r[n] for r in a)


@dataclass(frozen=True)
class UnimodularMap:
    """An n x n integer matrix with determinant +1 or -1.

    ``apply(v)`` is the usual matrix-vector product.  On Laurent polynomials
    the matrix acts through :func:`lgmut.laurent.monomial_substitute`, which
    sends an exponent ``u`` to ``transpose(M) @ u``.
    """

    entries: Matrix

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("a unimodular map needs a square, non-empty matrix")
        object.__setattr__(self, "entries", rows)
        d = determinant(rows)
        if d not in (1, -1):
            raise ValueError(f"matrix {rows} has determinant {d}, not +-1")
        object.__setattr__(self, "det", d)

    @classmethod
    def identity(cls, n: int) -> "UnimodularMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def apply(self, v: Sequence[int]) -> Vector:
        return tuple(dot(r, v) for r in self.entries)

    def apply_transpose(self, v: Sequence[int]) -> Vector:
        return tuple(dot(c, v) for c in zip(*self.entries))

    def __matmul__(self, other: "UnimodularMap") -> "UnimodularMap":
        return UnimodularMap(tuple(map(tuple, matmul(self.entries, other.entries))))

    def transpose(self) -> "UnimodularMap":
        return UnimodularMap(tuple(map(tuple, transpose(self.entries))))

    def inverse(self) -> "UnimodularMap":
        inv = invert_exact(self.entries)
        return UnimodularMap(tuple(tuple(int(x) for x in r) for r in inv))

    def inverse_transpose(self) -> "UnimodularMap":
        return self.inverse().transpose()

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def annihilator_basis(generators: Iterable[Sequence[int]], n: int | None = None) -> list[Vector]:
    """Integral basis of ``{u in Z^n : <u, g> = 0 for all generators g}``.

    The basis is saturated (it spans every integral solution) and returned in
    Hermite normal form, so it is deterministic.
    """
    gens = [tuple(int(a) for a in g) for g in generators]
    if n is None:
        if not gens:
            raise ValueError("ambient dimension unknown for an empty generator list")
        n = len(gens[0])
    if n == 0:
        raise ValueError("ambient dimension must be positive")
    if not gens:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    # U @ G^T = H; rows of U facing zero rows of H span the kernel of G
    h, u = hermite_form(transpose(gens))
    kernel = [u[i] for i in range(n) if not any(h[i])]
    if not kernel:
        return []
    hk, _ = hermite_form(kernel)
    return [tuple(r) for r in hk if any(r)]


def complete_to_unimodular(rows: Sequence[Sequence[int]], n: int | None = None) -> UnimodularMap:
    """Extend ``k`` rows to an ``n x n`` unimodular matrix with those rows first.

    Raises :class:`NotUnimodularlyCompletable` when the rows are not part of a
    lattice basis (some invariant factor exceeds 1).
    """
    rows = [tuple(int(a) for a in r) for r in rows]
    if n is None:
        if not rows:
            raise ValueError("ambient dimension unknown")
        n = len(rows[0])
    k = len(rows)
    if k == 0:
        return UnimodularMap.identity(n)
    if k > n:
        raise NotUnimodularlyCompletable("more rows than the dimension")
    # U @ A^T = H  =>  A = [T^T | 0] @ U^{-T} with T the top k x k block of H
    h, u = hermite_form(transpose(rows))
    top = [h[i][:k] for i in range(k)]
    if any(h[i][i] != 1 for i in range(k)):
        raise NotUnimodularlyCompletable(f"rows {rows} do not extend to a basis of Z^{n}")
    u_inv_t = transpose(invert_exact(u))
    block = [[0] * n for _ in range(n)]
    for i in range(k):
        for j in range(k):
            block[i][j] = top[j][i]
    for i in range(k, n):
        block[i][i] = 1
    full = [[int(x) for x in r] for r in matmul(block, [[int(x) for x in r] for r in u_inv_t])]
    for i in range(k):
        assert tuple(full[i]) == rows[i]
    return UnimodularMap(tuple(map(tuple, full)))


def same_lattice(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    """True when the row spans of ``a`` and ``b`` are the same sublattice."""
    ha = [tuple(r) for r in hermite_form(a)[0] if any(r)] if a else []
    hb = [tuple(r) for r in hermite_form(b)[0] if any(r)] if b else []
    return ha == hb
