"""Exact certificates about the shape of ``B``.

* the affine pieces of the partial sums ``B_n``;
* the coarsest lattice interval ``I_{m,j}`` that fits inside a query interval;
* a three-point witness that ``B`` is not affine there.

The witness works because ``B_{m+1}`` is affine on the closure of ``I_{m,j}``,
summands ``k >= m + 2`` vanish at all three witness abscissae, and summand
``m + 1`` vanishes at the endpoints but not at the chosen middle point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DomainError, InconsistencyError
from .generator import slope_on_piece
from .numeric import RationalLike, as_rational, rat_str
from .series import BAdicPoint, BlancmangeSpec, badic, eval_exact_badic, partial_sum

DEFAULT_LEVEL_CAP = 64


@dataclass(frozen=True)
class GridInterval:
    """``I_{m,j} = (j / (p b^m), (j+1) / (p b^m))``."""

    m: int
    j: int

    def left(self, spec: BlancmangeSpec) -> Fraction:
        return Fraction(self.j, spec.p * spec.b**self.m)

    def right(self, spec: BlancmangeSpec) -> Fraction:
        return Fraction(self.j + 1, spec.p * spec.b**self.m)

    def width(self, spec: BlancmangeSpec) -> Fraction:
        return Fraction(1, spec.p * spec.b**self.m)

    def to_json(self) -> dict:
        return {"m": self.m, "j": str(self.j)}


@dataclass(frozen=True)
class AffinePiece:
    """``B_n(t) = slope * t + intercept`` on the closure of ``interval``.

    ``interval`` is ``None`` only for ``B_0``, which is zero on the whole line.
    """

    interval: Optional[GridInterval]
    slope: Fraction
    intercept: Fraction

    def __call__(self, t: Fraction) -> Fraction:
        return self.slope * t + self.intercept


def affine_pieces(spec: BlancmangeSpec, n: int, indices: Iterable[int]) -> list[AffinePiece]:
    if n < 0:
        raise DomainError(f"number of terms must be >= 0, got {n}")
    if n == 0:
        return [AffinePiece(None, Fraction(0), Fraction(0))]
    p, b = spec.p, spec.b
    pieces = []
    for i in indices:
        gi = GridInterval(n - 1, i)
        # On gi, summand k sees b^k t inside piece floor(i / b^(n-1-k)) of s,
        # and the 1/b^k prefactor cancels the chain-rule factor b^k.
        slope = sum(
            (slope_on_piece(spec.gen, (i // b ** (n - 1 - k)) % p) for k in range(n)),
            Fraction(0),
        )
        left = gi.left(spec)
        pieces.append(AffinePiece(gi, slope, partial_sum(spec, n, left) - slope * left))
    return pieces


def _reduce_interval(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction, int]:
    if not lo < hi:
        raise DomainError(f"empty interval ({rat_str(lo)}, {rat_str(hi)})")
    shift = math.floor(lo)
    if hi - shift > 1:
        raise DomainError(
            f"interval ({rat_str(lo)}, {rat_str(hi)}) does not fit in one period after reduction"
        )
    return lo - shift, hi - shift, shift


def locate_grid_interval(
    spec: BlancmangeSpec,
    lo: RationalLike,
    hi: RationalLike,
    level_cap: int = DEFAULT_LEVEL_CAP,
) -> GridInterval:
    """Coarsest ``I_{m,j}`` (then leftmost) whose closure lies in ``[lo, hi]``.

    The interval is first shifted by an integer into ``[0, 1]``; the result is
    shifted back, so it always lies inside the interval that was asked about.
    """
    lo, hi = as_rational(lo), as_rational(hi)
    rlo, rhi, shift = _reduce_interval(lo, hi)
    scale = spec.p
    for m in range(level_cap + 1):
        j = math.ceil(rlo * scale)
        if j + 1 <= rhi * scale:
            return GridInterval(m, j + shift * scale)
        scale *= spec.b
    raise DomainError(
        f"interval ({rat_str(lo)}, {rat_str(hi)}) contains no lattice interval of level <= {level_cap}"
    )


def _witness_index(spec: BlancmangeSpec, gi: GridInterval) -> int:
    """Pick ``j0`` strictly inside ``(j b, (j+1) b)`` maximizing ``|v[j0 mod p]|``.

    The ``b - 1`` candidates hit every residue ``1..p-1``, so one of them lands
    on a nonzero interior vertex. Ties go to the smallest ``j0``.
    """
    v, p, b = spec.gen.vertices, spec.p, spec.b
    base = gi.j * b
    best = max(range(1, b), key=lambda r: (abs(v[(base + r) % p]), -r))
    return base + best


def roughness_lower_bound(spec: BlancmangeSpec, gi: GridInterval) -> Fraction:
    """``|v[i0]| / b**(m+1)``: how far ``B`` must stray from its chord over ``gi``."""
    i0 = _witness_index(spec, gi) % spec.p
    return abs(spec.gen.vertices[i0]) / Fraction(spec.b ** (gi.m + 1))


def collinearity_det(points: list[tuple[Fraction, Fraction]]) -> Fraction:
    """Orientation determinant of (left, right, middle); zero iff collinear."""
    (tl, vl), (tr, vr), (tm, vm) = points
    return (tr - tl) * (vm - vl) - (tm - tl) * (vr - vl)


@dataclass(frozen=True)
class NonAffineWitness:
    interval: GridInterval
    left: BAdicPoint
    right: BAdicPoint
    middle: BAdicPoint
    abscissae: tuple[Fraction, Fraction, Fraction]
    values: tuple[Fraction, Fraction, Fraction]
    det: Fraction

    @property
    def points(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.abscissae, self.values))

    def to_json(self) -> dict:
        return {
            "interval": self.interval.to_json(),
            "points": [[rat_str(t), rat_str(v)] for t, v in self.points],
            "det": rat_str(self.det),
        }


def nonaffine_certificate(
    spec: BlancmangeSpec,
    lo: RationalLike,
    hi: RationalLike,
    level_cap: int = DEFAULT_LEVEL_CAP,
) -> NonAffineWitness:
    gi = locate_grid_interval(spec, lo, hi, level_cap)
    return witness_for(spec, gi)


def witness_for(spec: BlancmangeSpec, gi: GridInterval) -> NonAffineWitness:
    left = badic(spec, gi.j, gi.m)
    right = badic(spec, gi.j + 1, gi.m)
    middle = badic(spec, _witness_index(spec, gi), gi.m + 1)
    pts = (left, right, middle)
    abscissae = tuple(pt.value(spec) for pt in pts)
    values = tuple(eval_exact_badic(spec, pt) for pt in pts)
    det = collinearity_det(list(zip(abscissae, values)))
    if det == 0:
        raise InconsistencyError(
            f"collinear witness on I_{{{gi.m},{gi.j}}} for {spec}; the certificate construction is broken"
        )
    return NonAffineWitness(gi, left, right, middle, abscissae, values, det)
