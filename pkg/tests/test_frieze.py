import json

import numpy as np
import pytest

from superlambda.grassmann import GrassmannNumber, relative_deviation, ParityError
from superlambda.superring import evaluate
from superlambda.tpaths import expand_lambda, mu_single_fan
from superlambda.frieze import (
    frieze_from_fan, frieze_by_propagation, random_frieze_input, check_diamond, diamond_deviations,
    solve_diamond, SuperFrieze, vertex, corrupt, PAIRS, solve_pair,
)
from superlambda.ptolemy import make_state, flip_with_record
from superlambda.triangulation import build_triangulation, SpinStructure


def test_trivial_diamond():
    one, zero = GrassmannNumber.scalar(1, 1.0), GrassmannNumber.zero(1)
    assert check_diamond(one, zero, zero, one, zero, zero, zero, zero)
    with pytest.raises(ParityError):
        check_diamond(one, zero, zero, one, one, zero, zero, zero)


def test_diamond_from_one_flip():
    # quadrilateral i, i+1, j, j+1 with two sides of length 1
    rng = np.random.default_rng(0)
    k = 2
    for _ in range(20):
        b, d, e = rng.uniform(0.5, 2, 3)
        th = GrassmannNumber.generator(k, 1) * rng.uniform(0.5, 2) + GrassmannNumber.generator(k, 2) * 0.3
        sg = GrassmannNumber.generator(k, 2) * rng.uniform(0.5, 2)
        # e = (1,3) with a = (1,4), b = (3,4), c = (2,3), d = (1,2): tail 1, left apex 4
        t = build_triangulation(4, [(1, 3)])
        st = make_state(t, SpinStructure.from_pairs([(1, 3)]),
                        {(1, 4): 1.0, (3, 4): b, (2, 3): 1.0, (1, 2): d, (1, 3): e},
                        {(1, 3, 4): th, (1, 2, 3): sg})
        _, rec = flip_with_record(st, (1, 3))
        v = rec.values
        from superlambda.grassmann import gmul, gsqrt
        tt = gmul(rec.theta, gsqrt(gmul(v["b"], v["e"])))
        ts = gmul(rec.sigma, gsqrt(gmul(v["e"], v["d"])))
        tt2 = gmul(rec.theta_new, gsqrt(gmul(v["d"], v["f"])))
        ts2 = gmul(rec.sigma_new, gsqrt(gmul(v["b"], v["f"])))
        assert check_diamond(v["e"], v["b"], v["d"], v["f"], tt, ts2, ts, tt2)


def test_corrupt_psi_fails():
    rng = np.random.default_rng(1)
    f = frieze_from_fan(*random_frieze_input(3, rng))
    _, _, d = f.diamonds()[2]
    A, B, C, D, Xi, Psi, Phi, Sigma = d
    assert check_diamond(*d)
    bad = Psi + GrassmannNumber.generator(A.k, 1) * 0.1
    devs = diamond_deviations(A, B, C, D, Xi, bad, Phi, Sigma)
    assert devs[3] > 1e-3 and devs[2] < 1e-12
    assert not check_diamond(A, B, C, D, Xi, bad, Phi, Sigma)


def test_pairs_agree():
    rng = np.random.default_rng(2)
    f = frieze_from_fan(*random_frieze_input(4, rng))
    for _, _, (A, B, C, D, Xi, Psi, Phi, Sigma) in f.diamonds():
        for pair in PAIRS:
            psi, sigma = solve_pair(A, B, C, D, Xi, Phi, pair)
            assert relative_deviation(psi, Psi) < 1e-10
            assert relative_deviation(sigma, Sigma) < 1e-10


@pytest.mark.parametrize("width", range(1, 7))
def test_random_friezes(width):
    rng = np.random.default_rng(width)
    for _ in range(5):
        x, xi = random_frieze_input(width, rng)
        f = frieze_from_fan(x, xi)
        assert f.num_diagonals == width + 4
        assert f.failing_diamonds() == []
        assert f.glide_deviation() < 1e-10
        assert f.edge_row_deviation() < 1e-12
        g = frieze_by_propagation(x, xi)
        for ra, rb in zip(f.even + f.odd + f.strip, g.even + g.odd + g.strip):
            for a, b in zip(ra, rb):
                assert (a - b).max_abs() < 1e-9


def test_first_diagonal_is_input():
    rng = np.random.default_rng(4)
    x, xi = random_frieze_input(3, rng)
    f = frieze_from_fan(x, xi)
    assert [g.body for g in f.even[0]] == pytest.approx([1.0] + [g.body for g in x] + [1.0])
    for got, want in zip(f.odd[0], xi):
        assert (got - want).max_abs() < 1e-14


def test_classical_limit():
    zero = GrassmannNumber.zero(1)
    f = frieze_from_fan([1.0, 1.0, 1.0], [zero] * 4)
    for row in f.even:
        for g in row:
            assert g.body == round(g.body) and g.body >= 1
    for row in f.odd + f.strip:
        for g in row:
            assert g.max_abs() == 0.0
    # quiddity row of the fan at 1 in a hexagon
    assert [f.even[i][1].body for i in range(6)] == [1, 2, 2, 2, 1, 4]


@pytest.mark.parametrize("width", range(1, 6))
def test_matches_tpaths(width):
    rng = np.random.default_rng(20 + width)
    x, xi = random_frieze_input(width, rng)
    f = frieze_from_fan(x, xi, keep_states=True)
    st = f.states[0]
    t, N = st.t, st.t.n
    xs = [st.lam[e].body for e in t.arcs]
    ims = [st.mu[tri] for tri in t.triangles]
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if i != j:
                p = expand_lambda(t, st.spin, vertex(N, i), vertex(N, j))
                assert relative_deviation(evaluate(p, xs, ims), f.lam(i, j)) < 1e-9
    # the first sweep is the single-fan flip sequence read clockwise
    for s in range(width + 1):
        k = s + 3
        got = evaluate(mu_single_fan(t, k, center=vertex(N, 1), start=vertex(N, 2)), xs, ims)
        assert relative_deviation(got * f.lam(1, k).body, f.strip[0][s]) < 1e-9


def test_corrupted_entry_is_located():
    rng = np.random.default_rng(5)
    f = frieze_from_fan(*random_frieze_input(3, rng))
    bad = corrupt(f, 2, 3)
    fails = bad.failing_diamonds()
    assert fails and all(i in (1, 2) for i, _ in fails)


def test_solve_diamond_roundtrip():
    rng = np.random.default_rng(6)
    f = frieze_from_fan(*random_frieze_input(3, rng))
    for _, _, (A, B, C, D, Xi, Psi, Phi, Sigma) in f.diamonds():
        d, psi, sigma = solve_diamond(A, B, C, Xi, Phi)
        assert relative_deviation(d, D) < 1e-10
        assert relative_deviation(psi, Psi) < 1e-10 and relative_deviation(sigma, Sigma) < 1e-10


def test_json_and_render():
    rng = np.random.default_rng(7)
    f = frieze_from_fan(*random_frieze_input(2, rng))
    g = SuperFrieze.from_json_obj(json.loads(f.to_json()))
    assert g.to_json() == f.to_json()
    lines = f.render().splitlines()
    assert len(lines) == 2 * 2 + 3
    assert lines[0].split() == ["1"] * f.num_diagonals


def test_bad_inputs():
    zero = GrassmannNumber.zero(2)
    with pytest.raises(ValueError):
        frieze_from_fan([1.0, -1.0], [zero] * 3)
    with pytest.raises(ValueError):
        frieze_from_fan([1.0, 1.0], [zero] * 2)
