import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blancmange import (
    BAdicPoint,
    BlancmangeSpec,
    DomainError,
    badic,
    eval_enclosure,
    eval_exact_badic,
    evaluate,
    functional_eq_residual,
    partial_sum,
    tail_bound,
)
from blancmange.generator import CLASSIC
from blancmange.series import lattice_point, load_spec

from conftest import CORPUS, oracle_partial


def test_spec_derives_base(g3):
    spec = BlancmangeSpec(g3, 4)
    assert spec.b == 12 and spec.p == 3 and spec.M == 1


@pytest.mark.parametrize("c", [0, -1, 1.5, True])
def test_spec_rejects_bad_c(c):
    with pytest.raises(DomainError):
        BlancmangeSpec(CLASSIC, c)


def test_partial_sum_examples(classic, g3):
    assert partial_sum(classic, 2, Fraction(1, 4)) == Fraction(1, 2)
    assert partial_sum(classic, 3, Fraction(1, 3)) == Fraction(7, 12)
    assert partial_sum(BlancmangeSpec(g3, 2), 0, Fraction(5, 7)) == 0


@pytest.mark.parametrize("spec", CORPUS[:8], ids=lambda s: f"p{s.p}c{s.c}")
def test_partial_sum_matches_oracle(spec, rng):
    for _ in range(25):
        t = Fraction(rng.randint(-500, 500), rng.randint(1, 300))
        n = rng.randint(0, 9)
        assert partial_sum(spec, n, t) == oracle_partial(spec.gen.vertices, spec.b, n, t)


def test_tail_bound_examples(classic, g3):
    assert tail_bound(classic, 3) == Fraction(1, 8)
    assert tail_bound(classic, 0) == 1
    spec = BlancmangeSpec(g3, 4)  # M = 1, b = 12
    assert tail_bound(spec, 1) == Fraction(1, 11)
    assert tail_bound(spec, 1) == spec.M / (spec.b - 1)


@pytest.mark.parametrize("spec", CORPUS, ids=lambda s: f"p{s.p}c{s.c}")
def test_tail_bound_refines_by_b(spec):
    for n in range(10):
        assert tail_bound(spec, n + 1) == tail_bound(spec, n) / spec.b


def test_badic_canonical(classic, g3):
    assert badic(classic, 4, 2) == BAdicPoint(1, 0)
    assert badic(classic, 2, 1) == BAdicPoint(1, 0)
    assert badic(classic, 3, 2) == BAdicPoint(3, 2)
    spec = BlancmangeSpec(g3, 2)  # p = 3, b = 6
    assert badic(spec, 36, 2) == BAdicPoint(1, 0)
    assert BAdicPoint.from_rational(spec, Fraction(1, 18)) == BAdicPoint(1, 1)
    assert BAdicPoint.from_rational(spec, Fraction(1, 12)) == BAdicPoint(9, 2)
    assert lattice_point(spec, Fraction(1, 5)) is None
    with pytest.raises(DomainError, match="not of the form"):
        BAdicPoint.from_rational(spec, Fraction(1, 5))


@pytest.mark.parametrize("spec", CORPUS, ids=lambda s: f"p{s.p}c{s.c}")
def test_lattice_point_roundtrip(spec, rng):
    for _ in range(30):
        m = rng.randint(0, 5)
        j = rng.randint(-3 * spec.p * spec.b**m, 3 * spec.p * spec.b**m)
        pt = badic(spec, j, m)
        t = pt.value(spec)
        assert t == Fraction(j, spec.p * spec.b**m)
        assert lattice_point(spec, t) == pt
        # least level: one level down would not be integral
        if pt.m > 0:
            assert (t * spec.p * spec.b ** (pt.m - 1)).denominator != 1


def test_eval_exact_examples(classic, g3):
    assert eval_exact_badic(classic, BAdicPoint(1, 1)) == Fraction(1, 2)
    assert eval_exact_badic(classic, BAdicPoint(0, 0)) == 0
    spec = BlancmangeSpec(g3, 1)
    assert eval_exact_badic(spec, BAdicPoint(1, 0)) == 1


@pytest.mark.parametrize("spec", CORPUS, ids=lambda s: f"p{s.p}c{s.c}")
def test_eval_exact_matches_long_brute_force(spec, rng):
    for _ in range(10):
        m = rng.randint(0, 3)
        pt = badic(spec, rng.randint(0, spec.p * spec.b**m), m)
        t = pt.value(spec)
        assert eval_exact_badic(spec, pt) == oracle_partial(spec.gen.vertices, spec.b, pt.m + 8, t)


@pytest.mark.parametrize("spec", CORPUS, ids=lambda s: f"p{s.p}c{s.c}")
def test_periodicity_on_lattice(spec, rng):
    for _ in range(20):
        m = rng.randint(0, 4)
        j = rng.randint(0, spec.p * spec.b**m)
        shifted = badic(spec, j + spec.p * spec.b**m, m)
        assert eval_exact_badic(spec, badic(spec, j, m)) == eval_exact_badic(spec, shifted)


def test_eval_enclosure_examples(classic):
    v = eval_enclosure(classic, Fraction(1, 3), Fraction(1, 10**9))
    assert v.enclosure.contains(Fraction(2, 3))
    assert v.enclosure.width <= 2 * tail_bound(classic, v.n_used)
    assert tail_bound(classic, v.n_used) < Fraction(1, 10**9) <= tail_bound(classic, v.n_used - 1)
    assert eval_enclosure(classic, Fraction(1, 4), Fraction(1, 10**6)).enclosure.contains(Fraction(1, 2))
    assert eval_enclosure(classic, 0, Fraction(1, 10)).enclosure.contains(0)


def test_eval_enclosure_errors(classic):
    with pytest.raises(DomainError, match="positive"):
        eval_enclosure(classic, Fraction(1, 3), 0)
    with pytest.raises(DomainError, match="more than 64 terms"):
        eval_enclosure(classic, Fraction(1, 3), Fraction(1, 2**80))
    assert eval_enclosure(classic, Fraction(1, 3), Fraction(1, 2**80), cap=100).n_used == 81


def test_evaluate_uses_lattice(classic):
    v = evaluate(classic, Fraction(1, 4), Fraction(1, 10))
    assert v.exact == Fraction(1, 2)
    assert v.to_json(classic) == {"t": "1/(2*2^1)", "lo": "1/2", "hi": "1/2", "n_used": 2}
    off = evaluate(classic, Fraction(1, 3), Fraction(1, 1000))
    assert off.exact is None and off.to_json(classic)["t"] == "1/3"


@pytest.mark.parametrize("spec", CORPUS, ids=lambda s: f"p{s.p}c{s.c}")
def test_exactness_consistency(spec, rng):
    for _ in range(10):
        m = rng.randint(0, 4)
        pt = badic(spec, rng.randint(0, spec.p * spec.b**m), m)
        exact = eval_exact_badic(spec, pt)
        for eps in (Fraction(1, 10), Fraction(1, 10**6)):
            assert eval_enclosure(spec, pt.value(spec), eps).enclosure.contains(exact)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(CORPUS),
    st.fractions(-3, 3, max_denominator=10**5),
    st.integers(0, 20),
)
def test_tail_soundness(spec, t, n):
    tight = eval_enclosure(spec, t, Fraction(1, 10**12))
    assert abs(tight.enclosure.midpoint - partial_sum(spec, n, t)) <= tail_bound(spec, n) + tight.enclosure.width


def test_functional_equation_examples(classic, g3):
    assert functional_eq_residual(classic, 1, BAdicPoint(1, 1)) == 0
    spec = BlancmangeSpec(g3, 2)
    assert functional_eq_residual(spec, 0, badic(spec, 5, 2)) == 0
    assert functional_eq_residual(spec, 3, badic(spec, 17, 2)) == 0


def test_functional_equation_is_not_vacuous(classic):
    # Dropping the 1/b^n factor must break the identity.
    pt = BAdicPoint(1, 2)
    t = pt.value(classic)
    wrong = partial_sum(classic, 1, t) + eval_exact_badic(classic, BAdicPoint.from_rational(classic, 2 * t))
    assert wrong != eval_exact_badic(classic, pt)


def test_load_spec(tmp_path, g3):
    (tmp_path / "g.json").write_text(json.dumps(g3.to_json()))
    (tmp_path / "by_path.json").write_text(json.dumps({"generator": "g.json", "c": 2}))
    (tmp_path / "inline.json").write_text(json.dumps({"generator": g3.to_json(), "c": 2}))
    assert load_spec(tmp_path / "by_path.json") == load_spec(tmp_path / "inline.json") == BlancmangeSpec(g3, 2)
    (tmp_path / "bad.json").write_text(json.dumps({"generator": {"p": 2, "vertices": ["0", "0", "0"]}, "c": 1}))
    with pytest.raises(DomainError, match="interior"):
        load_spec(tmp_path / "bad.json")
