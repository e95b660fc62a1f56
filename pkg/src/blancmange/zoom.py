"""Behaviour of ``B`` under magnification, measured exactly at finite scales.

Rearranging the functional equation gives the renormalization identity

    b**n * (B(t0 + u / b**n) - B_n(t0 + u / b**n)) == B(b**n * t0 + u)

so zooming by ``b**n`` and discarding the first ``n`` summands returns a copy
of ``B`` itself. The chord defect over a window therefore never flattens out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .certify import GridInterval
from .errors import DomainError
from .numeric import Enclosure, RationalLike, as_rational, rat_str
from .series import (
    BAdicPoint,
    BlancmangeSpec,
    badic,
    eval_exact_badic,
    lattice_point,
    partial_sum,
    tail_bound,
)


def renormalize(spec: BlancmangeSpec, n: int, anchor: BAdicPoint, u: RationalLike) -> Fraction:
    """``b**n * (B - B_n)`` at ``anchor + u / b**n``, evaluated exactly."""
    if n < 0:
        raise DomainError(f"zoom level must be >= 0, got {n}")
    if anchor.m > n:
        raise DomainError(f"anchor level {anchor.m} exceeds zoom level {n}")
    scale = spec.b**n
    t = anchor.value(spec) + as_rational(u) / scale
    pt = BAdicPoint.from_rational(spec, t)
    return scale * (eval_exact_badic(spec, pt) - partial_sum(spec, n, t))


@dataclass(frozen=True)
class ZoomFrame:
    level: int
    anchor: BAdicPoint
    window: GridInterval
    samples: tuple[tuple[Fraction, Enclosure], ...]


def zoom_frame(spec: BlancmangeSpec, window: GridInterval, depth: int) -> ZoomFrame:
    """Exact samples of ``B`` on every level ``window.m + depth`` lattice point of ``window``."""
    if depth < 0:
        raise DomainError(f"sampling depth must be >= 0, got {depth}")
    sub = spec.b**depth
    samples = []
    for j in range(window.j * sub, (window.j + 1) * sub + 1):
        pt = badic(spec, j, window.m + depth)
        samples.append((pt.value(spec), Enclosure.point(eval_exact_badic(spec, pt))))
    return ZoomFrame(window.m, badic(spec, window.j, window.m), window, tuple(samples))


@dataclass(frozen=True)
class DefectReport:
    n: int
    defect: Enclosure
    normalized: Enclosure

    def to_json(self) -> dict:
        return {"n": self.n, "defect": self.defect.to_json(), "normalized": self.normalized.to_json()}


def _value_enclosure(spec: BlancmangeSpec, t: Fraction, n: int) -> Enclosure:
    # Summands n and up vanish on lattice levels below n.
    pt = lattice_point(spec, t)
    if pt is not None and pt.m < n:
        return Enclosure.point(eval_exact_badic(spec, pt))
    return Enclosure.around(partial_sum(spec, n, t), tail_bound(spec, n))


def chord_defect(
    spec: BlancmangeSpec,
    lo: RationalLike,
    hi: RationalLike,
    grid_level: int,
    terms: Optional[int] = None,
) -> DefectReport:
    """Enclose ``sup |f - chord|`` over ``[lo, hi]``, chord through the endpoint values.

    ``f`` is ``B`` by default, or the partial sum ``B_terms`` when ``terms`` is
    given. Samples are the level ``grid_level`` lattice points inside the
    interval, where ``B = B_{grid_level+1}`` exactly. The lower endpoint of the
    defect is a deviation actually attained. The upper endpoint bounds the sup
    over the whole interval: ``B_{grid_level+1}`` minus its chord is affine
    between samples, and the remaining tail adds at most twice its bound.
    """
    lo, hi = as_rational(lo), as_rational(hi)
    if not lo < hi:
        raise DomainError(f"empty interval ({rat_str(lo)}, {rat_str(hi)})")
    if grid_level < 0:
        raise DomainError(f"grid level must be >= 0, got {grid_level}")
    if terms is not None:
        if terms < 0:
            raise DomainError(f"number of terms must be >= 0, got {terms}")
        # B_terms is affine between level terms-1 vertices; sample at least that finely.
        grid_level = max(grid_level, terms - 1)
        n = terms
    else:
        n = grid_level + 1

    denom = spec.p * spec.b**grid_level
    inner = [Fraction(j, denom) for j in range(math.ceil(lo * denom), math.floor(hi * denom) + 1)]
    if not inner:
        raise DomainError(
            f"no level-{grid_level} lattice points in [{rat_str(lo)}, {rat_str(hi)}]; refine the grid"
        )

    width = hi - lo
    approx_lo, approx_hi = partial_sum(spec, n, lo), partial_sum(spec, n, hi)
    if terms is None:
        end_lo = _value_enclosure(spec, lo, n)
        end_hi = _value_enclosure(spec, hi, n)
        slack = 2 * tail_bound(spec, n)
    else:
        end_lo, end_hi = Enclosure.point(approx_lo), Enclosure.point(approx_hi)
        slack = Fraction(0)

    lower = []
    upper = []
    for t in inner:
        alpha = (hi - t) / width
        f_t = partial_sum(spec, n, t)  # exact value of B here when terms is None
        chord = end_lo.scale(alpha) + end_hi.scale(1 - alpha)
        lower.append((f_t - chord).abs().lo)
        upper.append(abs(f_t - (alpha * approx_lo + (1 - alpha) * approx_hi)))
    defect = Enclosure(max(lower), max(upper) + slack)
    return DefectReport(grid_level, defect, defect.scale(1 / width))


@dataclass(frozen=True)
class ScanRow:
    n: int
    h: Fraction
    slope: Fraction


def divergence_scan(
    spec: BlancmangeSpec,
    t0: BAdicPoint,
    depth: int,
    left: bool = False,
    start: int = 1,
) -> list[ScanRow]:
    """Exact difference quotients of ``B`` at ``t0`` with steps ``h_n = 1/(p b^n)``.

    Rows cover ``n = start..depth``. With ``left`` the step is taken to the left.
    """
    if depth < 1:
        raise DomainError(f"scan depth must be >= 1, got {depth}")
    if start < 0:
        raise DomainError(f"scan start must be >= 0, got {start}")
    base_t = t0.value(spec)
    base_v = eval_exact_badic(spec, t0)
    sign = -1 if left else 1
    rows = []
    for n in range(start, depth + 1):
        h = Fraction(1, spec.p * spec.b**n)
        step = sign * h
        pt = BAdicPoint.from_rational(spec, base_t + step)
        rows.append(ScanRow(n, h, (eval_exact_badic(spec, pt) - base_v) / step))
    return rows
