"""Landau-Ginzburg seeds in two variables and their mutations."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .analysis import convex_hull_2d
from .lattice import _xgcd, is_primitive, make_primitive
from .laurent import LaurentPoly, NonLaurent, localized_mutate

Direction = tuple[int, int]

CATALOG_NAMES = ("cp2", "p1xp1", "bl1", "bl2", "bl3", "bl4", "bl5", "bl6", "bl7", "bl8")


@dataclass(frozen=True)
class LGSeed:
    """A potential in two variables together with a multiset of directions."""

    potential: LaurentPoly
    directions: tuple[Direction, ...]

    def __post_init__(self):
        if self.potential.n != 2:
            raise ValueError("LG seeds live in two variables")
        dirs = tuple(tuple(int(a) for a in d) for d in self.directions)
        for d in dirs:
            if len(d) != 2 or not is_primitive(d):
                raise ValueError(f"direction {d} is not a primitive vector in Z^2")
        object.__setattr__(self, "directions", dirs)

    def to_json(self) -> dict:
        return {"n": 2, "potential": self.potential.to_json(), "directions": [list(d) for d in self.directions]}

    @classmethod
    def from_json(cls, data: dict) -> "LGSeed":
        n = int(data.get("n", 2))
        if n != 2:
            raise ValueError(f"seed files must have n=2, got {n}")
        return cls(LaurentPoly.from_json(2, data["potential"]), tuple(tuple(d) for d in data["directions"]))


def wall_cross_factor(v: Sequence[int]) -> LaurentPoly:
    """``1 + x^{v2} y^{-v1}``."""
    return LaurentPoly(2, {(0, 0): 1, (v[1], -v[0]): 1})


def wall_cross_potential(w: LaurentPoly, v: Sequence[int]) -> LaurentPoly | NonLaurent:
    """Mutate ``w`` along ``v``: ``x^u -> x^u (1 + x^{v2} y^{-v1})^{-(u . v)}``."""
    if not is_primitive(v):
        raise ValueError(f"direction {tuple(v)} is not primitive")
    return localized_mutate(w, wall_cross_factor(v), tuple(v))


def wall_cross_point(point: Sequence[int | Fraction], v: Sequence[int]) -> tuple[Fraction, Fraction] | None:
    """The birational torus map along ``v`` evaluated at a rational point.

    Returns ``None`` where ``1 + x^{v2} y^{-v1}`` vanishes.
    """
    x, y = (Fraction(a) for a in point)
    f = 1 + x ** v[1] * y ** (-v[0])
    if f == 0:
        return None
    return x * f ** (-v[0]), y * f ** (-v[1])


def trop_mutate(u: Sequence[int], v: Sequence[int]) -> Direction:
    """Tropical mutation ``u + max(0, u1 v2 - u2 v1) v``."""
    k = max(0, u[0] * v[1] - u[1] * v[0])
    return (u[0] + k * v[0], u[1] + k * v[1])


def seed_mutate(s: LGSeed, j: int) -> LGSeed | NonLaurent:
    if not 0 <= j < len(s.directions):
        raise IndexError(f"direction index {j} out of range for {len(s.directions)} directions")
    v = s.directions[j]
    w = wall_cross_potential(s.potential, v)
    if isinstance(w, NonLaurent):
        return w
    dirs = tuple((-v[0], -v[1]) if i == j else trop_mutate(u, v) for i, u in enumerate(s.directions))
    return LGSeed(w, dirs)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    direction: Direction | None = None
    multiplicity: int = 0
    iterate: int = 0
    witness: NonLaurent | None = None

    def to_json(self) -> dict:
        if self.ok:
            return {"ok": True}
        return {
            "ok": False,
            "direction": list(self.direction),
            "multiplicity": self.multiplicity,
            "iterate": self.iterate,
            "witness": self.witness.to_json(),
        }


def is_lg_seed(s: LGSeed) -> Verdict:
    """Check that each direction of multiplicity ``p`` survives ``p`` iterated mutations.

    The direction is held fixed while iterating; the other directions are not
    touched by this check.
    """
    counts = Counter(s.directions)
    for v in sorted(counts):
        w = s.potential
        for it in range(1, counts[v] + 1):
            w = wall_cross_potential(w, v)
            if isinstance(w, NonLaurent):
                return Verdict(False, v, counts[v], it, w)
    return Verdict(True)


def upper_bound_member(w: LaurentPoly, directions: Sequence[Sequence[int]]) -> Verdict:
    """Membership of ``w`` in the upper bound of a direction multiset."""
    return is_lg_seed(LGSeed(w, tuple(tuple(d) for d in directions)))


# -- SL(2,Z) action and canonical forms -----------------------------------------


Mat2 = tuple[tuple[int, int], tuple[int, int]]


def _mul(a: Mat2, b: Mat2) -> Mat2:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def _inv_t(a: Mat2) -> Mat2:
    # inverse transpose of a det=+-1 matrix
    (p, q), (r, s) = a
    d = p * s - q * r
    return ((d * s, -d * r), (-d * q, d * p))


MIRROR: Mat2 = ((0, 1), (1, 0))


def act(s: LGSeed, a: Mat2) -> LGSeed:
    """Act on a seed by a unimodular matrix ``a``.

    Exponents move by ``u -> a @ u`` and directions by ``v -> a^{-T} @ v``.
    For det=+1 this commutes with :func:`seed_mutate` on the nose.  For
    det=-1, mutating ``act(s, a)`` at index ``j`` gives ``act(mu_j s, a @ t)``
    where ``t`` is the det=+1 shear ``u -> u + (u . v) (v2, -v1)``, so the two
    agree up to the det=+1 action.
    """
    (p, q), (r, t) = a
    if p * t - q * r not in (1, -1):
        raise ValueError(f"matrix {a} is not unimodular")
    b = _inv_t(a)
    return LGSeed(
        s.potential.map_exponents(a),
        tuple((b[0][0] * d[0] + b[0][1] * d[1], b[1][0] * d[0] + b[1][1] * d[1]) for d in s.directions),
    )


@dataclass(frozen=True)
class SeedCanonicalForm:
    directions: tuple[Direction, ...]
    terms: tuple[tuple[tuple[int, int], int], ...]
    transform: Mat2 = field(compare=False, hash=False)

    @property
    def key(self) -> tuple:
        return (self.directions, self.terms)

    def seed(self) -> LGSeed:
        return LGSeed(LaurentPoly(2, self.terms), self.directions)

    def digest(self) -> str:
        """Short stable text identifier for the canonical class."""
        import hashlib

        text = json.dumps([self.directions, [[list(e), c] for e, c in self.terms]], separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _to_x_axis(e: Sequence[int]) -> Mat2:
    p, q = e
    _, s, t = _xgcd(p, q)
    return ((s, t), (-q, p))


def canonical_form(s: LGSeed, reflections: bool = False) -> SeedCanonicalForm:
    """Representative of the seed's orbit under det=+1 changes of basis.

    With ``reflections`` the orbit is taken under all of GL(2,Z) instead, by
    also canonicalizing the mirror image ``act(s, MIRROR)`` and keeping the
    lesser of the two.

    Candidate frames send a primitive vector to ``(1, 0)``: the oriented edges
    of the Newton polygon when it is two-dimensional, otherwise every support
    exponent and every exponent-side direction ``(v2, -v1)``.  The remaining
    shear is fixed by making some companion vector's first coordinate land in
    ``[0, |second|)``.  Among all candidates the least
    ``(sorted directions, sorted terms)`` wins.
    """
    if reflections:
        plain = canonical_form(s)
        flipped = canonical_form(act(s, MIRROR))
        if flipped.key < plain.key:
            return SeedCanonicalForm(flipped.directions, flipped.terms, _mul(flipped.transform, MIRROR))
        return plain
    w = s.potential
    if w.is_constant() and not s.directions:
        raise ValueError("a constant potential with no directions has no canonical frame")
    support = w.support()
    # directions transform by a^{-T}; their perpendiculars (v2, -v1) by a
    perps = [(d[1], -d[0]) for d in s.directions]
    vectors = sorted(set(support) | set(perps))
    hull = convex_hull_2d(support) if support else []
    frames: set[tuple[int, int]] = set()
    if len(hull) >= 3:
        for i in range(len(hull)):
            a, b = hull[i], hull[(i + 1) % len(hull)]
            d = make_primitive((b[0] - a[0], b[1] - a[1]))[0]
            frames.add(d)
            frames.add((-d[0], -d[1]))
    else:
        for v in vectors:
            if v != (0, 0):
                frames.add(make_primitive(v)[0])
    if not frames:
        frames.add((1, 0))
    candidates: set[Mat2] = set()
    for e in frames:
        base = _to_x_axis(e)
        shears = set()
        for v in vectors:
            x = base[0][0] * v[0] + base[0][1] * v[1]
            y = base[1][0] * v[0] + base[1][1] * v[1]
            if y:
                shears.add((x % abs(y) - x) // y)
        for k in shears or {0}:
            candidates.add(_mul(((1, k), (0, 1)), base))
    # directions are cheap; compare terms only among direction-minimal frames
    scored = []
    for a in candidates:
        b = _inv_t(a)
        dirs = tuple(sorted((b[0][0] * d[0] + b[0][1] * d[1], b[1][0] * d[0] + b[1][1] * d[1]) for d in s.directions))
        scored.append((dirs, a))
    best_dirs = min(d for d, _ in scored)
    best = None
    for dirs, a in scored:
        if dirs != best_dirs:
            continue
        terms = tuple(sorted(
            ((a[0][0] * e[0] + a[0][1] * e[1], a[1][0] * e[0] + a[1][1] * e[1]), c) for e, c in w.terms.items()
        ))
        if best is None or (terms, a) < (best[0], best[1]):
            best = (terms, a)
    return SeedCanonicalForm(best_dirs, best[0], best[1])


# -- catalog ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _load_catalog(name: str) -> str:
    return resources.files("lgmut").joinpath("data").joinpath("catalog").joinpath(f"{name}.json").read_text(encoding="utf-8")


def catalog(name: str) -> LGSeed:
    """One of the del Pezzo seeds: ``cp2``, ``p1xp1``, ``bl1`` ... ``bl8``."""
    if name not in CATALOG_NAMES:
        raise KeyError(f"unknown catalog seed {name!r}; expected one of {', '.join(CATALOG_NAMES)}")
    return LGSeed.from_json(json.loads(_load_catalog(name)))
