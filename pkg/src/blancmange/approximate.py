"""Uniform approximation of sampled continuous functions by blancmange functions.

Two steps, each with an exact error bound:

1. read a generator ``s`` off the function at the points ``i/p``;
2. pick ``c`` so that ``||s - B(s, c)|| <= M / (c p - 1)`` is small.

The target function enters as rational samples. Errors are measured against
the piecewise-linear function through those samples; anything that happens
between samples is the caller's business (``modulus_slack``).
"""

from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

from .errors import DomainError
from .generator import Generator, GeneratorError, eval_s, make_generator, sup_norm
from .numeric import Enclosure, RationalLike, as_rational, rat_parse, rat_str
from .series import BlancmangeSpec, badic, eval_exact_badic

DEFAULT_P_CAP = 2**14
DEFAULT_VERTEX_DEPTH = 2


@dataclass(frozen=True)
class SampledFunction:
    samples: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        pts = tuple((as_rational(t), as_rational(v)) for t, v in self.samples)
        object.__setattr__(self, "samples", pts)
        if len(pts) < 2 or pts[0][0] != 0 or pts[-1][0] != 1:
            raise DomainError("samples must start at t=0 and end at t=1")
        if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
            raise DomainError("sample abscissae must be strictly increasing")
        if pts[0][1] != 0 or pts[-1][1] != 0:
            raise DomainError(f"f(0) and f(1) must be 0, got {pts[0][1]} and {pts[-1][1]}")

    @property
    def abscissae(self) -> list[Fraction]:
        return [t for t, _ in self.samples]

    def __call__(self, t: RationalLike) -> Fraction:
        """Linear interpolant of the samples, for ``t`` in ``[0, 1]``."""
        t = as_rational(t)
        if not 0 <= t <= 1:
            raise DomainError(f"{rat_str(t)} is outside [0, 1]")
        xs = self.abscissae
        i = bisect.bisect_left(xs, t)
        if xs[i] == t:
            return self.samples[i][1]
        (t0, v0), (t1, v1) = self.samples[i - 1], self.samples[i]
        return v0 + (t - t0) / (t1 - t0) * (v1 - v0)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[RationalLike, RationalLike]]) -> SampledFunction:
        return cls(tuple(pairs))


def load_samples(path: str | Path) -> SampledFunction:
    """Read a two-column ``t,f`` CSV of rational strings."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"t", "f"} <= set(reader.fieldnames):
            raise DomainError(f"{path}: expected a CSV header with columns 't' and 'f'")
        pairs = [(rat_parse(row["t"]), rat_parse(row["f"])) for row in reader]
    return SampledFunction(tuple(pairs))


def interpolate(f: SampledFunction, p: int) -> Generator:
    return make_generator(p, [f(Fraction(i, p)) for i in range(p + 1)])


def interpolation_error(f: SampledFunction, g: Generator) -> Fraction:
    """Exact ``sup |f - s|`` over ``[0, 1]`` for the sample interpolant ``f``.

    Both functions are piecewise linear; ``f`` agrees with ``s`` at every
    ``i/p``, so the sup sits at one of the sample abscissae.
    """
    return max(abs(v - eval_s(g, t)) for t, v in f.samples)


def series_distance(spec: BlancmangeSpec, depth: int = DEFAULT_VERTEX_DEPTH) -> Enclosure:
    """Enclose ``||s - B(s, c)||``.

    The upper end is ``M / (b - 1)``. The lower end is the largest
    ``|s - B|`` over the level ``depth - 1`` lattice, where ``B`` equals
    ``B_depth`` exactly, so it is a value actually attained.
    """
    if depth < 1:
        raise DomainError(f"vertex depth must be >= 1, got {depth}")
    count = spec.p * spec.b ** (depth - 1)
    lo = Fraction(0)
    for j in range(count):
        pt = badic(spec, j, depth - 1)
        t = pt.value(spec)
        lo = max(lo, abs(eval_s(spec.gen, t) - eval_exact_badic(spec, pt)))
    hi = spec.M / (spec.b - 1)
    return Enclosure(lo, hi)


def series_bound(g: Generator, c: int) -> Fraction:
    return sup_norm(g) / (c * g.p - 1)


def choose_c(g: Generator, eps: RationalLike) -> int:
    """Least ``c >= 1`` with ``M / (c p - 1) < eps``."""
    eps = as_rational(eps)
    if eps <= 0:
        raise DomainError(f"tolerance must be positive, got {eps}")
    # M / (c p - 1) < eps  <=>  c > (M / eps + 1) / p
    c = math.floor((sup_norm(g) / eps + 1) / g.p) + 1
    return max(c, 1)


@dataclass(frozen=True)
class ApproximationResult:
    spec: BlancmangeSpec
    interp_error: Enclosure
    series_error: Enclosure
    total: Enclosure
    eps: Fraction

    @property
    def ok(self) -> bool:
        return self.total.hi < self.eps

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "p": self.spec.p,
            "c": self.spec.c,
            "b": self.spec.b,
            "eps": rat_str(self.eps),
            "interp_error": self.interp_error.to_json(),
            "series_error": self.series_error.to_json(),
            "total": self.total.to_json(),
            "ok": self.ok,
        }


class UnachievableError(DomainError):
    """The requested tolerance cannot be met at the given sample resolution."""

    def __init__(self, message: str, best: Optional[Fraction] = None) -> None:
        super().__init__(message)
        self.best = best


def approximate_function(
    f: SampledFunction,
    eps: RationalLike,
    p_hint: Optional[int] = None,
    split: RationalLike = Fraction(1, 2),
    modulus_slack: RationalLike = 0,
    p_cap: int = DEFAULT_P_CAP,
) -> ApproximationResult:
    """Build ``B(s, c)`` within ``eps`` of ``f`` in the sup norm.

    ``split`` is the share of ``eps`` granted to the interpolation step; the
    series step gets the rest. ``p`` doubles from ``p_hint`` (default 2).
    """
    eps, split, slack = as_rational(eps), as_rational(split), as_rational(modulus_slack)
    if eps <= 0:
        raise DomainError(f"tolerance must be positive, got {eps}")
    if not 0 < split < 1:
        raise DomainError(f"budget split must lie strictly between 0 and 1, got {split}")
    interp_budget = eps * split

    p = p_hint if p_hint is not None else 2
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    best: Optional[Fraction] = None
    gen = None
    while p <= p_cap:
        try:
            candidate = interpolate(f, p)
        except GeneratorError:
            candidate = None  # f vanishes at every i/p; refine
        if candidate is not None:
            err = interpolation_error(f, candidate) + slack
            best = err if best is None else min(best, err)
            if err <= interp_budget:
                gen = candidate
                break
        p *= 2
    if gen is None:
        if best is None:
            raise DomainError("samples vanish at every i/p tried; no generator exists")
        raise UnachievableError(
            f"interpolation error stays above {rat_str(interp_budget)} up to p={p_cap}; "
            f"best achieved {rat_str(best)}",
            best,
        )

    interp = Enclosure(err - slack, err)
    c = choose_c(gen, eps - interp_budget)
    spec = BlancmangeSpec(gen, c)
    series = series_distance(spec)
    return ApproximationResult(spec, interp, series, interp + series, eps)
