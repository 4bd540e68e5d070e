import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siltkit.algebra import build_algebra
from siltkit.complexes import is_isomorphic, shift, stalk, two_term
from siltkit.errors import NotClosed
from siltkit.homs import stable_hom_dim
from siltkit.silting import lambda_object
from siltkit.torsion import (PosetLattice, bits, check_pool_covers, check_semidistributive,
                             closure_oracle, is_cotorsion_pair, is_torsion_pair, lattice,
                             lattice_violations, perp, phi, psi, psi_inv, psi_prime,
                             sublattice, to_mask, verify_bijection,
                             verify_characterizations, verify_triangle, window_pool)

from conftest import algebra, engine, silt
from hasse_fixtures import A2_D3_NODES, node


def members(pool, mask):
    return [pool.members[i] for i in bits(mask)]


def same_set(pool, mask, objs):
    got = members(pool, mask)
    return len(got) == len(objs) and all(any(is_isomorphic(X, Y) for Y in got) for X in objs)


# ------------------------------------------------------------------ pools


def test_a2_pools(a2):
    pool = engine("a2", 3).pool
    S1 = two_term(a2, 1, 0, a2.path_element(["a"]))
    P1, P2 = stalk(a2, 0), stalk(a2, 1)
    d_pool = [P1, P2, S1, shift(P1, 1), shift(P2, 1), shift(S1, 1)]
    assert same_set(pool, pool.D, d_pool)
    assert same_set(pool, pool.K, d_pool + [shift(P1, 2), shift(P2, 2)])
    assert same_set(pool, pool.lam, [shift(P1, 2), shift(P2, 2)])


def test_semisimple_pool():
    alg = build_algebra("vertices 1\n")
    pool = window_pool(alg, 2)
    assert same_set(pool, pool.D, [stalk(alg, 0)])


@pytest.mark.parametrize("name,d", [("a2", 3), ("nakayama2", 3), ("a2", 2)])
def test_pool_contains_silting_summands(name, d):
    assert check_pool_covers(engine(name, d), silt(name, d).elements) == []


# ------------------------------------------------------------------- perps


def test_perp_extremes():
    E = engine("a2", 3)
    pool, tab = E.pool, E.tables
    assert perp(tab, 0, "right", "hom") == pool.D
    assert perp(tab, pool.D, "right", "hom") == 0
    assert perp(tab, 0, "left", "ext1", "K") == pool.K


def test_perp_of_shifted_modules_matches_direct_homs(a2):
    d = 3
    E = engine("a2", d)
    pool = E.pool
    S = to_mask(i for i in bits(pool.D) if pool.members[i].hi <= -1)
    assert len(bits(S)) == 3
    expect = to_mask(j for j in bits(pool.D)
                     if all(stable_hom_dim(pool.members[s], pool.members[j], d) == 0
                            for s in bits(S)))
    assert perp(E.tables, S, "right", "hom") == expect


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([("a2", 3), ("nakayama2", 3)]), st.integers(0, 2**12 - 1))
def test_double_perp_idempotent(nd, raw):
    E = engine(*nd)
    tab, pool = E.tables, E.pool
    S = to_mask(i for k, i in enumerate(bits(pool.D)) if raw >> k & 1)
    R = perp(tab, S, "right", "hom")
    assert perp(tab, perp(tab, R, "left", "hom"), "right", "hom") == R
    Y = to_mask(i for k, i in enumerate(bits(pool.K)) if raw >> k & 1)
    X = perp(tab, Y, "left", "ext1", "K")
    assert perp(tab, perp(tab, X, "right", "ext1", "K"), "left", "ext1", "K") == X


# ------------------------------------------------------------------- pairs


def test_torsion_pair_examples():
    E = engine("a2", 3)
    pool, tab = E.pool, E.tables
    assert is_torsion_pair(tab, pool.D, 0)
    assert is_torsion_pair(tab, 0, pool.D)
    s2 = [i for i in bits(pool.D) if is_isomorphic(pool.members[i], shift(stalk(algebra("a2"), 1), 1))]
    T = perp(tab, perp(tab, to_mask(s2), "right", "hom"), "left", "hom")
    assert is_torsion_pair(tab, T, perp(tab, T, "right", "hom"))
    assert any(tp.T == T for tp in E.tors)


def test_extreme_pairs_classify():
    for nd in [("a2", 3), ("nakayama2", 3), ("a2", 2)]:
        E = engine(*nd)
        for tp in E.tors:
            if tp.T in (0, E.pool.D):
                f = tp.flags
                assert f["positive"] and f["s_torsion"] and f["functorially_finite"]


def test_d2_all_positive():
    E = engine("a2", 2)
    assert len(E.tors) == 5
    assert all(tp.flags["positive"] for tp in E.tors)


def test_cotorsion_examples():
    E = engine("a2", 3)
    pool, tab = E.pool, E.tables
    X = perp(tab, pool.lam, "left", "ext1", "K")
    assert X == pool.K
    assert is_cotorsion_pair(tab, X, pool.lam)
    cp = psi(tab, lambda_object(algebra("a2"), 3))
    assert is_cotorsion_pair(tab, cp.X, cp.Y)
    k = E.cotors_index(cp.Y)
    assert E.cotors[k].flags["complete"] and E.cotors[k].flags["hereditary"]
    broken = cp.Y & ~(1 << bits(cp.Y & ~pool.lam)[0])
    assert not is_cotorsion_pair(tab, perp(tab, broken, "left", "ext1", "K"), broken)


def test_every_cotorsion_class_contains_lambda_shift():
    for nd in [("a2", 3), ("nakayama2", 3)]:
        E = engine(*nd)
        assert all(cp.Y & E.pool.lam == E.pool.lam for cp in E.cotors)


# -------------------------------------------------------------------- maps


def test_phi_psi_examples(a2):
    d = 3
    E = engine("a2", d)
    pool, tab = E.pool, E.tables
    assert phi(pool, pool.lam) == 0
    assert psi_inv(pool, 0) == pool.lam
    assert psi_inv(pool, pool.D) == pool.K
    top = psi(tab, lambda_object(a2, d))
    assert top.Y == pool.K and phi(pool, top.Y) == pool.D
    everything = to_mask(i for i in bits(pool.K)
                         if all(tab.ext(i, j, 1) == 0 for j in bits(pool.K)))
    assert top.X == everything
    bottom = psi(tab, lambda_object(a2, d, d - 1))
    assert bottom.Y == pool.lam
    tp = psi_prime(tab, lambda_object(a2, d))
    assert tp.T == pool.D and tp.F == 0
    assert psi_prime(tab, lambda_object(a2, d, d - 1)).T == 0
    for name in ("S1+P1", "S1+sP2"):
        M = node(a2, A2_D3_NODES[name], d)
        assert phi(pool, psi(tab, M).Y) == psi_prime(tab, M).T


@pytest.mark.parametrize("name,d", [("a2", 3), ("nakayama2", 3), ("a2", 2)])
def test_closure_oracle_agrees(name, d):
    E = engine(name, d)
    for M in silt(name, d).elements:
        Y = psi_inv(E.pool, psi_prime(E.tables, M).T)
        assert closure_oracle(E.pool, M) == Y


@pytest.mark.parametrize("name,d", [("a2", 3), ("nakayama2", 3), ("a2", 2)])
def test_triangle_and_bijection(name, d):
    E = engine(name, d)
    P = silt(name, d)
    r = verify_triangle(E, P)
    assert r["violations"] == []
    assert len({tp.T for tp in r["psi_prime"]}) == len(P)
    assert verify_bijection(E) == []
    assert verify_characterizations(E) == []


# ---------------------------------------------------------------- lattices


def _toy(leq, kind="toy"):
    n = leq.shape[0]
    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for a, b in itertools.product(range(n), repeat=2):
        lower = [c for c in range(n) if leq[c, a] and leq[c, b]]
        upper = [c for c in range(n) if leq[a, c] and leq[b, c]]
        meet[a, b] = [c for c in lower if all(leq[x, c] for x in lower)][0]
        join[a, b] = [c for c in upper if all(leq[c, x] for x in upper)][0]
    return PosetLattice(list(range(n)), leq, meet, join, kind)


def test_semidistributive_small():
    # boolean lattice on two atoms: 0 < a, b < 1
    leq = np.array([[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]], dtype=bool)
    assert check_semidistributive(_toy(leq)) is None
    chain = np.triu(np.ones((4, 4), dtype=bool))
    assert check_semidistributive(_toy(chain)) is None
    # M3 is not semidistributive
    m3 = np.zeros((5, 5), dtype=bool)
    for a in range(5):
        m3[0, a] = m3[a, 4] = m3[a, a] = True
    assert check_semidistributive(_toy(m3)) is not None


def test_a2_lattices():
    E = engine("a2", 3)
    tab = E.tables
    L = lattice(tab, [tp.T for tp in E.tors], "tors")
    assert lattice_violations(L) == []
    top = L.elements.index(E.pool.D)
    for a in range(len(L)):
        assert L.meet[top, a] == a
    for a, b in itertools.product(range(len(L)), repeat=2):
        if L.leq[a, b]:
            assert L.meet[a, b] == a and L.join[a, b] == b
    pos = [k for k, tp in enumerate(E.tors) if tp.flags["positive"]]
    S = sublattice(L, pos)
    assert len(S) == 12 and lattice_violations(S) == []
    w = check_semidistributive(S)
    assert w is not None
    a, b, c, law = w
    if law == "meet":
        assert S.meet[a, b] == S.meet[a, c] and S.meet[a, S.join[b, c]] != S.meet[a, b]
    else:
        assert S.join[a, b] == S.join[a, c] and S.join[a, S.meet[b, c]] != S.join[a, b]
    Lc = lattice(tab, [cp.Y for cp in E.cotors], "cotors")
    assert lattice_violations(Lc) == []


def test_not_closed():
    E = engine("a2", 3)
    L = lattice(E.tables, [tp.T for tp in E.tors], "tors")
    atoms = [k for k in range(len(L)) if bin(L.elements[k]).count("1") == 1]
    with pytest.raises(NotClosed):
        sublattice(L, atoms)
    with pytest.raises(NotClosed):
        lattice(E.tables, [E.tors[1].T, E.tors[2].T], "tors")
