import math
from fractions import Fraction

import numpy as np
import pytest

from superlambda.grassmann import gmul, gsqrt, ginv, relative_deviation
from superlambda.superring import SuperPolynomial, evaluate
from superlambda.triangulation import (
    build_triangulation, fan_triangulation, zigzag_triangulation, enumerate_triangulations,
    random_triangulation, random_spin, fan_decompose, default_orientation, normalize_to_default,
    SpinStructure, arc_key,
)
from superlambda.tpaths import (
    build_auxiliary, enumerate_paths, expand_lambda, expand_lambda_tilde, ordered_tilde_terms,
    path_weight, mu_single_fan, mu_zigzag, single_fan_flips, zigzag_flips,
)
from superlambda.ptolemy import random_state, flip_sequence_lambda, flip_many

from oracles import classical_tpaths, ptolemy_all_lengths
from goldens import (
    mono, hexagon_fan_expected, MAIN_T, MAIN_TERMS, main_hexagon, main_expected, main_names,
    classical_value,
)

def test_golden_hexagon_fan():
    t = fan_triangulation(6)
    got = expand_lambda(t, None, 2, 6)
    want = hexagon_fan_expected(t)
    assert len(got) == 10
    assert got.render() == want.render()
    assert got == want


def test_golden_main_hexagon():
    t, arrows = main_hexagon()
    got = expand_lambda_tilde(t, arrows, 1, 4)
    want = main_expected(t)
    assert len(got) == 14
    names = main_names(t)
    assert got.render(*names) == want.render(*names)
    # theta factors in the positive ordering carry the printed signs
    rows = ordered_tilde_terms(t, arrows, 1, 4)
    inv_t = {t.theta(tri): i for i, tri in MAIN_T.items()}
    printed = {(c, tuple(th)) for c, _, _, th in MAIN_TERMS}
    assert {(int(c), tuple(inv_t[j] for j in w)) for c, _, w in rows} == printed


def test_main_hexagon_normalized_is_positive():
    t, arrows = main_hexagon()
    f = fan_decompose(t, 1, 4)
    dflt, eps = normalize_to_default(arrows, f, rule="b")
    got = expand_lambda_tilde(t, dflt, 1, 4)
    assert got == main_expected(t, signs={1: 1, 2: 1, 3: 1, 4: -1})
    assert all(c == 1 for c, _, _ in ordered_tilde_terms(t, dflt, 1, 4))


def test_path_rendering():
    t, _ = main_hexagon()
    g = build_auxiliary(t, fan_decompose(t, 1, 4))
    paths = enumerate_paths(g)
    assert len(paths) == 14
    var_names, _ = main_names(t)
    rendered = [p.render(t, var_names) for p in paths]
    assert "(1,6,θ1,θ2,6,3,5,4 | x1,σ1,τ12,σ2,x8,x9,x5)" in rendered


@pytest.mark.parametrize("n", range(4, 11))
def test_fan_path_counts(n):
    t = fan_triangulation(n)
    spin = SpinStructure.from_pairs([(1, j) for j in range(3, n)])
    paths = enumerate_paths(build_auxiliary(t, fan_decompose(t, 2, n, orientation=spin)))
    ordinary = [p for p in paths if p.is_ordinary]
    assert len(ordinary) == n - 2
    assert len(paths) - len(ordinary) == math.comb(n - 2, 2)
    for p in paths:
        if not p.is_ordinary:
            assert p.vertices[:2] == (2, 1) and p.vertices[-2:] == (1, n)
    assert len(set(paths)) == len(paths)


def test_quadrilateral():
    q = build_triangulation(4, [(1, 3)])
    paths = enumerate_paths(build_auxiliary(q, fan_decompose(q, 2, 4)))
    assert sum(p.is_ordinary for p in paths) == 2 and len(paths) == 3
    # the sum does not depend on which endpoint of the diagonal is the center
    for o, other in [((1, 3), (3, 1)), ((3, 1), (1, 3))]:
        s = SpinStructure.from_pairs([o])
        g = build_auxiliary(q, fan_decompose(q, 2, 4, orientation=SpinStructure.from_pairs([other])))
        assert g.f.centers == (other[0],)
        total = SuperPolynomial.zero(q.num_arcs, q.num_triangles)
        for path in enumerate_paths(g):
            total = total + path_weight(path, g, s)
        assert total == expand_lambda(q, s, 2, 4)


def test_arc_is_generator():
    t = fan_triangulation(6)
    assert expand_lambda(t, None, 1, 4) == SuperPolynomial.var(t.num_arcs, t.num_triangles, t.variable(1, 4))
    assert expand_lambda(t, None, 3, 4) == SuperPolynomial.var(t.num_arcs, t.num_triangles, t.variable(3, 4))


def test_sign_under_one_disagreement():
    t = fan_triangulation(6)
    g = build_auxiliary(t, fan_decompose(t, 2, 6))
    dflt = default_orientation(g.f)
    s = dflt.reversed_arc((1, 3))
    for p in enumerate_paths(g):
        w0, w1 = path_weight(p, g, dflt), path_weight(p, g, s)
        crossed = any(e[0] == 2 and e[1] <= 1 < e[2] for e in p.edges)
        assert w1 == (-w0 if crossed else w0)


def test_orientation_covariance():
    rng = np.random.default_rng(3)
    for _ in range(60):
        n = int(rng.integers(4, 10))
        t = random_triangulation(n, rng)
        a, b = (int(v) for v in rng.choice(np.arange(1, n + 1), 2, replace=False))
        if t.is_arc(a, b):
            continue
        s = random_spin(t, rng)
        f = fan_decompose(t, a, b)
        dflt, eps = normalize_to_default(s, f)
        base = expand_lambda(t, dflt, a, b)
        gmap = {t.theta(f.triangles[i]): eps[i] for i in range(f.m)}
        full = [gmap.get(j, 1) for j in range(1, t.num_triangles + 1)]
        assert expand_lambda(t, s, a, b) == base.substitute_theta_signs(full)


def test_laurent_forms():
    rng = np.random.default_rng(4)
    for _ in range(40):
        n = int(rng.integers(4, 11))
        t = random_triangulation(n, rng)
        a, b = (int(v) for v in rng.choice(np.arange(1, n + 1), 2, replace=False))
        if t.is_arc(a, b):
            continue
        p = expand_lambda(t, None, a, b)
        assert p.is_even
        assert expand_lambda_tilde(t, None, a, b).has_integer_exponents()
        assert all(c == 1 for c, _, _ in ordered_tilde_terms(t, None, a, b))


@pytest.mark.parametrize("n", range(4, 8))
def test_classical_degeneration(n):
    for t in enumerate_triangulations(n):
        x = {e: Fraction(int(v)) for e, v in zip(t.arcs, range(2, 2 + t.num_arcs))}
        lengths = ptolemy_all_lengths(t, x)
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                body = expand_lambda(t, None, a, b).body_part()
                want = SuperPolynomial.zero(t.num_arcs, t.num_triangles)
                if t.is_arc(a, b):
                    want = SuperPolynomial.var(t.num_arcs, t.num_triangles, t.variable(a, b))
                else:
                    for path in classical_tpaths(t, a, b):
                        want = want + mono(t, *classical_value(t, path))
                assert body == want
                xs = [x[e] for e in t.arcs]
                assert evaluate(body, xs).body == pytest.approx(float(lengths[arc_key(a, b)]), rel=1e-12)


def test_oracle_small():
    rng = np.random.default_rng(8)
    for _ in range(60):
        n = int(rng.integers(4, 10))
        t = random_triangulation(n, rng)
        st = random_state(t, rng, mix=True)
        a, b = (int(v) for v in rng.choice(np.arange(1, n + 1), 2, replace=False))
        p = expand_lambda(t, st.spin, a, b)
        got = evaluate(p, [st.lam[e].body for e in t.arcs], [st.mu[tri] for tri in t.triangles])
        for strategy in ("first", "last", "random"):
            want = flip_sequence_lambda(t, None, a, b, st, strategy=strategy, rng=rng)
            assert relative_deviation(got, want) < 1e-9


@pytest.mark.parametrize("n", range(4, 9))
def test_mu_single_fan_against_flips(n):
    rng = np.random.default_rng(n)
    t = fan_triangulation(n)
    spin = SpinStructure.from_pairs([(1, j) for j in range(3, n)])
    for k in range(3, n + 1):
        st = random_state(t, rng, spin=spin)
        flips, target = single_fan_flips(n, k)
        end = flip_many(st, flips)
        lam = lambda u, v: end.lam_of(u, v)
        want = gmul(gsqrt(gmul(lam(2, k), ginv(gmul(lam(1, 2), lam(1, k))))), end.mu_of(target))
        p = mu_single_fan(t, k)
        assert p.is_odd
        got = evaluate(p, [st.lam[e].body for e in t.arcs], [st.mu[tri] for tri in t.triangles])
        assert relative_deviation(got, want) < 1e-9


@pytest.mark.parametrize("n", range(4, 9))
def test_mu_zigzag_against_flips(n):
    rng = np.random.default_rng(100 + n)
    t, pos, zs = zigzag_triangulation(n)
    for k in range(1, n - 1):
        st = random_state(t, rng, spin=zs)
        flips, target = zigzag_flips(n, k)
        end = flip_many(st, [(pos[u], pos[v]) for u, v in flips])
        lam = lambda u, v: end.lam_of(pos[u], pos[v])
        want = gmul(gsqrt(gmul(gmul(lam(k, n), lam(k + 1, n)), ginv(lam(k, k + 1)))),
                    end.mu_of(tuple(pos[v] for v in target)))
        p = mu_zigzag(t, k)
        assert p.is_odd and p.body_part() == SuperPolynomial.zero(t.num_arcs, t.num_triangles)
        got = evaluate(p, [st.lam[e].body for e in t.arcs], [st.mu[tri] for tri in t.triangles])
        assert relative_deviation(got, want) < 1e-9, (n, k)


def test_mu_errors():
    with pytest.raises(ValueError):
        mu_single_fan(fan_triangulation(6, center=2), 4)
    with pytest.raises(ValueError):
        mu_zigzag(fan_triangulation(6), 2)
