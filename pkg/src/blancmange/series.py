"""The generalized blancmange function ``B(s, c) = sum_k s(b**k t) / b**k``.

Here ``b = c * p``. At a lattice point ``j / (p * b**m)`` every summand with
index ``k > m`` vanishes, so ``B`` is a finite exact sum there. Anywhere else
it is enclosed by a partial sum plus the geometric tail bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import DomainError
from .generator import Generator, GeneratorError, eval_s, load_generator, sup_norm
from .numeric import Enclosure, RationalLike, as_rational, frac_mod1, rat_str

DEFAULT_TERM_CAP = 64


@dataclass(frozen=True)
class BlancmangeSpec:
    gen: Generator
    c: int
    b: int = field(init=False)

    def __post_init__(self) -> None:
        if not isinstance(self.c, int) or isinstance(self.c, bool) or self.c < 1:
            raise DomainError(f"dilation multiplier c must be an integer >= 1, got {self.c!r}")
        object.__setattr__(self, "b", self.c * self.gen.p)

    @property
    def p(self) -> int:
        return self.gen.p

    @property
    def M(self) -> Fraction:
        return sup_norm(self.gen)

    def to_json(self) -> dict:
        return {"generator": self.gen.to_json(), "c": self.c}

    @classmethod
    def from_json(cls, obj: dict, base_dir: str | Path | None = None) -> BlancmangeSpec:
        """Build from ``{"generator": <object or path>, "c": int}``.

        A generator given as a string is a path, resolved against ``base_dir``.
        """
        if not isinstance(obj, dict) or "generator" not in obj:
            raise DomainError("spec object needs a 'generator' entry")
        raw = obj["generator"]
        if isinstance(raw, str):
            path = Path(raw)
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            gen = load_generator(path)
        else:
            gen = Generator.from_json(raw)
        return cls(gen, obj.get("c", 1))


def load_spec(path: str | Path) -> BlancmangeSpec:
    path = Path(path)
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON: {exc}") from None
    try:
        return BlancmangeSpec.from_json(obj, base_dir=path.parent)
    except GeneratorError as exc:
        raise GeneratorError(f"{path}: {exc}") from None


@dataclass(frozen=True)
class BAdicPoint:
    """The lattice rational ``j / (p * b**m)``, stored at the least level ``m``.

    Build through :func:`badic` or :meth:`from_rational`; the raw constructor
    does not know ``b`` and so cannot canonicalize.
    """

    j: int
    m: int

    def value(self, spec: BlancmangeSpec) -> Fraction:
        return Fraction(self.j, spec.p * spec.b**self.m)

    def label(self, spec: BlancmangeSpec) -> str:
        return f"{self.j}/({spec.p}*{spec.b}^{self.m})"

    @classmethod
    def from_rational(cls, spec: BlancmangeSpec, t: RationalLike) -> BAdicPoint:
        pt = lattice_point(spec, as_rational(t))
        if pt is None:
            raise DomainError(f"{rat_str(as_rational(t))} is not of the form j/(p*b^m) for p={spec.p}, b={spec.b}")
        return pt


def badic(spec: BlancmangeSpec, j: int, m: int) -> BAdicPoint:
    if m < 0:
        raise DomainError(f"lattice level must be >= 0, got {m}")
    b = spec.b
    while m > 0 and j % b == 0:
        j //= b
        m -= 1
    return BAdicPoint(j, m)


def lattice_point(spec: BlancmangeSpec, t: Fraction) -> BAdicPoint | None:
    """Return ``t`` as a canonical lattice point, or ``None`` if it is off-lattice."""
    den = t.denominator
    # p divides b, so den fits some p*b**m iff den has no prime factor outside b.
    rest = den
    g = math.gcd(rest, spec.b)
    while g > 1:
        while rest % g == 0:
            rest //= g
        g = math.gcd(rest, spec.b)
    if rest != 1:
        return None
    m = 0
    scale = spec.p
    while scale % den:
        m += 1
        scale *= spec.b
    return BAdicPoint(t.numerator * (scale // den), m)


def partial_sum(spec: BlancmangeSpec, n: int, t: RationalLike) -> Fraction:
    """Exact ``B_n(t)``, the sum of the first ``n`` summands (``0`` for ``n = 0``)."""
    if n < 0:
        raise DomainError(f"number of terms must be >= 0, got {n}")
    gen, b = spec.gen, spec.b
    # s(b^k t) only depends on b^k t mod 1, which keeps denominators bounded.
    x = frac_mod1(as_rational(t))
    total = Fraction(0)
    scale = 1
    for _ in range(n):
        total += eval_s(gen, x) / scale
        x = frac_mod1(b * x)
        scale *= b
    return total


def tail_bound(spec: BlancmangeSpec, n: int) -> Fraction:
    """``sum_{k >= n} M / b**k``, an upper bound for ``|B(t) - B_n(t)|``."""
    if n < 0:
        raise DomainError(f"number of terms must be >= 0, got {n}")
    b = spec.b
    return Fraction(spec.M * b, (b - 1) * b**n)


def eval_exact_badic(spec: BlancmangeSpec, pt: BAdicPoint) -> Fraction:
    return partial_sum(spec, pt.m + 1, pt.value(spec))


@dataclass(frozen=True)
class SeriesValue:
    point: Fraction
    n_used: int
    enclosure: Enclosure
    lattice: BAdicPoint | None = None

    @property
    def exact(self) -> Fraction | None:
        return self.enclosure.lo if self.enclosure.is_exact else None

    def to_json(self, spec: BlancmangeSpec) -> dict:
        t = self.lattice.label(spec) if self.lattice is not None else rat_str(self.point)
        return {"t": t, **self.enclosure.to_json(), "n_used": self.n_used}


def terms_for(spec: BlancmangeSpec, eps: Fraction, cap: int = DEFAULT_TERM_CAP) -> int:
    """Least ``n`` with ``tail_bound(n) < eps``."""
    if eps <= 0:
        raise DomainError(f"tolerance must be positive, got {eps}")
    n = 0
    bound = tail_bound(spec, 0)
    while bound >= eps:
        n += 1
        if n > cap:
            raise DomainError(f"tolerance {rat_str(eps)} needs more than {cap} terms")
        bound /= spec.b
    return n


def eval_enclosure(
    spec: BlancmangeSpec, t: RationalLike, eps: RationalLike, cap: int = DEFAULT_TERM_CAP
) -> SeriesValue:
    t, eps = as_rational(t), as_rational(eps)
    n = terms_for(spec, eps, cap)
    center = partial_sum(spec, n, t)
    return SeriesValue(t, n, Enclosure.around(center, tail_bound(spec, n)))


def evaluate(
    spec: BlancmangeSpec, t: RationalLike, eps: RationalLike, cap: int = DEFAULT_TERM_CAP
) -> SeriesValue:
    """Exact value on the lattice, certified enclosure elsewhere."""
    t = as_rational(t)
    pt = lattice_point(spec, t)
    if pt is None:
        return eval_enclosure(spec, t, eps, cap)
    return SeriesValue(t, pt.m + 1, Enclosure.point(eval_exact_badic(spec, pt)), pt)


def functional_eq_residual(spec: BlancmangeSpec, n: int, pt: BAdicPoint) -> Fraction:
    """``B_n(t) + B(b**n t) / b**n - B(t)`` at a lattice point; always zero."""
    t = pt.value(spec)
    scale = spec.b**n
    dilated = BAdicPoint.from_rational(spec, scale * t)
    lhs = partial_sum(spec, n, t) + eval_exact_badic(spec, dilated) / scale
    return lhs - eval_exact_badic(spec, pt)
