import math
import random
from fractions import Fraction

import pytest

from blancmange import (
    BlancmangeSpec,
    DomainError,
    SampledFunction,
    approximate_function,
    badic,
    choose_c,
    eval_exact_badic,
    eval_s,
    evaluate,
    interpolate,
    make_generator,
    partial_sum,
    series_distance,
    tail_bound,
)
from blancmange.approximate import UnachievableError, interpolation_error, load_samples, series_bound
from blancmange.generator import CLASSIC, GeneratorError

from conftest import CORPUS, random_generator


def sine_samples(steps=256):
    pairs = []
    for k in range(steps + 1):
        v = Fraction(0) if k in (0, steps) else Fraction(math.sin(math.pi * k / steps)).limit_denominator(10**12)
        pairs.append((Fraction(k, steps), v))
    return SampledFunction(tuple(pairs))


def tent_samples(steps=16):
    return SampledFunction(tuple((Fraction(k, steps), eval_s(CLASSIC, Fraction(k, steps))) for k in range(steps + 1)))


def test_sampled_function_validation():
    with pytest.raises(DomainError, match="f\\(0\\)"):
        SampledFunction(((0, 1), (1, 0)))
    with pytest.raises(DomainError, match="start at t=0"):
        SampledFunction(((Fraction(1, 2), 0), (1, 0)))
    with pytest.raises(DomainError, match="increasing"):
        SampledFunction(((0, 0), (Fraction(1, 2), 1), (Fraction(1, 2), 2), (1, 0)))


def test_sampled_function_interpolates():
    f = SampledFunction(((0, 0), (Fraction(1, 4), 1), (1, 0)))
    assert f(Fraction(1, 8)) == Fraction(1, 2)
    assert f(Fraction(5, 8)) == Fraction(1, 2)


def test_interpolate_sine_vertices():
    f = sine_samples()
    g = interpolate(f, 4)
    assert g.vertices[2] == 1
    assert list(g.vertices) == [f(Fraction(i, 4)) for i in range(5)]
    assert abs(g.vertices[1] - Fraction(7071, 10000)) < Fraction(1, 10**4)


def test_interpolate_tent_roundtrip():
    assert interpolate(tent_samples(), 2) == CLASSIC


def test_interpolate_errors():
    zero = SampledFunction(((0, 0), (Fraction(1, 2), 0), (1, 0)))
    with pytest.raises(GeneratorError):
        interpolate(zero, 2)


@pytest.mark.parametrize("spec", CORPUS, ids=lambda s: f"p{s.p}c{s.c}")
def test_interpolate_roundtrip_corpus(spec):
    g = spec.gen
    f = SampledFunction(tuple((Fraction(i, g.p), v) for i, v in enumerate(g.vertices)))
    assert interpolate(f, g.p) == g
    assert interpolation_error(f, g) == 0


def test_series_distance_examples(classic):
    d = series_distance(classic)
    assert d.hi == Fraction(1, 2) and d.lo == Fraction(1, 4)
    assert series_distance(BlancmangeSpec(CLASSIC, 6)).hi == Fraction(1, 22)


@pytest.mark.parametrize("spec", CORPUS, ids=lambda s: f"p{s.p}c{s.c}")
def test_series_distance_bounds(spec, rng):
    d = series_distance(spec)
    assert d.hi == spec.M / (spec.b - 1)
    for _ in range(50):
        m = rng.randint(0, 4)
        pt = badic(spec, rng.randint(0, spec.p * spec.b**m), m)
        t = pt.value(spec)
        assert abs(eval_s(spec.gen, t) - eval_exact_badic(spec, pt)) <= d.hi
        n = rng.randint(1, 6)
        assert abs(eval_s(spec.gen, t) - partial_sum(spec, n, t)) <= d.hi + tail_bound(spec, n)


@pytest.mark.parametrize("spec", CORPUS[:8], ids=lambda s: f"p{s.p}c{s.c}")
def test_vertex_max_equals_fine_max(spec):
    # s - B_n is affine between level n-1 vertices; a finer grid finds nothing larger.
    n = 2
    coarse = spec.p * spec.b ** (n - 1)
    fine = coarse * 5

    def dev(t):
        return abs(eval_s(spec.gen, t) - partial_sum(spec, n, t))

    assert max(dev(Fraction(j, coarse)) for j in range(coarse + 1)) == max(
        dev(Fraction(j, fine)) for j in range(fine + 1)
    )


def test_choose_c_examples():
    assert choose_c(CLASSIC, Fraction(1, 20)) == 6
    assert series_bound(CLASSIC, 6) == Fraction(1, 22) < Fraction(1, 20) <= series_bound(CLASSIC, 5)
    assert choose_c(make_generator(2, [0, 1, 0]), 1) == 2
    assert choose_c(CLASSIC, 10) == 1
    with pytest.raises(DomainError):
        choose_c(CLASSIC, 0)


def test_choose_c_minimal():
    rng = random.Random(7)
    for _ in range(300):
        g = random_generator(rng, rng.randint(2, 7))
        eps = Fraction(rng.randint(1, 400), rng.randint(1, 4000))
        c = choose_c(g, eps)
        assert series_bound(g, c) < eps
        assert c == 1 or series_bound(g, c - 1) >= eps


def test_approximate_sine():
    f = sine_samples()
    eps = Fraction(1, 20)
    res = approximate_function(f, eps)
    assert res.ok and res.total.hi < eps
    assert res.interp_error.hi <= eps / 2 and res.series_error.hi < eps / 2
    assert res.total == res.interp_error + res.series_error
    # p doubled from 2: the previous p must have missed the interpolation budget
    if res.spec.p > 2:
        prev = interpolate(f, res.spec.p // 2)
        assert interpolation_error(f, prev) > eps / 2
    for t, v in f.samples:
        enc = evaluate(res.spec, t, Fraction(1, 10**9)).enclosure
        assert max(abs(v - enc.lo), abs(v - enc.hi)) <= res.total.hi + enc.width


def test_approximate_tent():
    res = approximate_function(tent_samples(), Fraction(1, 10))
    assert res.spec.p == 2 and res.interp_error.hi == 0
    assert res.spec.c == choose_c(CLASSIC, Fraction(1, 20))


def test_approximate_p_hint_and_split():
    res = approximate_function(sine_samples(), Fraction(1, 20), p_hint=16, split=Fraction(1, 4))
    assert res.spec.p >= 16 and res.interp_error.hi <= Fraction(1, 80) and res.ok


def test_approximate_zero_function():
    zero = SampledFunction(((0, 0), (Fraction(1, 3), 0), (1, 0)))
    with pytest.raises(DomainError):
        approximate_function(zero, Fraction(1, 10))


def test_approximate_unachievable():
    bumpy = SampledFunction(((0, 0), (Fraction(1, 3), 1), (1, 0)))
    with pytest.raises(UnachievableError) as info:
        approximate_function(bumpy, Fraction(1, 10**9), p_cap=64)
    assert info.value.best is not None and info.value.best > 0


def test_load_samples(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("t,f\n0,0\n1/2,1/3\n1,0\n")
    f = load_samples(path)
    assert f.samples[1] == (Fraction(1, 2), Fraction(1, 3))
    (tmp_path / "bad.csv").write_text("x,y\n0,0\n")
    with pytest.raises(DomainError, match="header"):
        load_samples(tmp_path / "bad.csv")


def test_result_json():
    res = approximate_function(tent_samples(), Fraction(1, 10))
    obj = res.to_json()
    assert obj["spec"]["generator"] == {"p": 2, "vertices": ["0", "1/2", "0"]}
    assert set(obj) >= {"interp_error", "series_error", "total", "ok"}
    assert obj["ok"] is True
