"""Periodic piecewise-linear generators defined by vertex values.

A generator with subdivision count ``p`` is the period-1 function that takes
the value ``v[i]`` at ``i/p`` and is linear in between, with ``v[0] = v[p] = 0``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import DomainError
from .numeric import RationalLike, as_rational, frac_mod1, rat_parse, rat_str


class GeneratorError(DomainError):
    """Vertex data does not define a valid generator."""


@dataclass(frozen=True)
class Generator:
    p: int
    vertices: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(as_rational(v) for v in self.vertices))
        _validate(self.p, self.vertices)

    def __call__(self, t: Fraction) -> Fraction:
        return eval_s(self, t)

    @property
    def sup_norm(self) -> Fraction:
        return sup_norm(self)

    def to_json(self) -> dict:
        return {"p": self.p, "vertices": [rat_str(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, obj: dict) -> Generator:
        try:
            p = obj["p"]
            raw = obj["vertices"]
        except (KeyError, TypeError) as exc:
            raise GeneratorError(f"generator object needs 'p' and 'vertices': {exc}") from None
        if not isinstance(p, int) or isinstance(p, bool):
            raise GeneratorError(f"'p' must be an integer, got {p!r}")
        if not isinstance(raw, list):
            raise GeneratorError("'vertices' must be a list of rational strings")
        vertices = [rat_parse(v) if isinstance(v, str) else as_rational(v) for v in raw]
        return make_generator(p, vertices)


def _validate(p: int, vertices: Sequence[Fraction]) -> None:
    if p < 2:
        raise GeneratorError(f"subdivision count p must be >= 2, got {p}")
    if len(vertices) != p + 1:
        raise GeneratorError(f"expected p+1 = {p + 1} vertex values, got {len(vertices)}")
    if vertices[0] != 0 or vertices[-1] != 0:
        raise GeneratorError(
            f"endpoint vertices must be zero, got v0={vertices[0]}, v{p}={vertices[-1]}"
        )
    if not any(vertices[1:-1]):
        raise GeneratorError("all interior vertices are zero; need some v_i != 0 with 0 < i < p")


def make_generator(p: int, vertices: Sequence[RationalLike]) -> Generator:
    return Generator(p, tuple(as_rational(v) for v in vertices))


def load_generator(path: str | Path) -> Generator:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GeneratorError(f"{path}: invalid JSON: {exc}") from None
    return Generator.from_json(obj)


CLASSIC = Generator(2, (Fraction(0), Fraction(1, 2), Fraction(0)))


def eval_s(g: Generator, t: Fraction) -> Fraction:
    x = frac_mod1(Fraction(t)) * g.p
    i = math.floor(x)
    lam = x - i
    v = g.vertices
    return v[i] + lam * (v[i + 1] - v[i])


def check_base(g: Generator, b: int) -> None:
    if b < g.p or b % g.p:
        raise DomainError(f"base b={b} is not a positive multiple of p={g.p}")


def eval_s_k(g: Generator, b: int, k: int, t: Fraction) -> Fraction:
    """Dilated summand ``s(b**k * t) / b**k``."""
    check_base(g, b)
    if k < 0:
        raise DomainError(f"summand index must be >= 0, got {k}")
    scale = b**k
    return eval_s(g, scale * Fraction(t)) / scale


def sup_norm(g: Generator) -> Fraction:
    # A piecewise-linear function attains its sup at a vertex.
    return max(abs(v) for v in g.vertices)


def slope_on_piece(g: Generator, i: int) -> Fraction:
    if not 0 <= i < g.p:
        raise DomainError(f"piece index {i} out of range 0..{g.p - 1}")
    return g.p * (g.vertices[i + 1] - g.vertices[i])
