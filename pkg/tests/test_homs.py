import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from siltkit.algebra import ModuleRep
from siltkit.complexes import direct_sum, identity_map, k0_class, shift, stalk, two_term
from siltkit.homs import (ModuleComplex, cartan_pairing, duality_defect, euler_form, ext_dim,
                          happel_defect, hom_D_dim, hom_K, hom_K_dim, nakayama, resolve_down,
                          shift_modules, smart_truncate, stable_hom, stable_hom_dim,
                          tau_ge_module)

from conftest import algebra, engine


def s1(alg):
    return two_term(alg, 1, 0, alg.path_element(["a"]))


def test_hom_K_examples(a2):
    S, P1 = s1(a2), stalk(a2, 0)
    assert hom_K_dim(S, P1) == 0
    assert hom_K_dim(P1, S) == 1
    E = hom_K(S, S)
    assert E.dim >= 1 and not E.is_zero(identity_map(S))


def test_ext_examples(a2):
    S, P2 = s1(a2), stalk(a2, 1)
    assert ext_dim(S, S, 1) == 0
    assert ext_dim(S, P2, 1) == 1
    assert ext_dim(stalk(a2, 0), shift(stalk(a2, 0), 3), 1) == 0


def test_ext_direction(a2):
    # ext(X, Y, i) = Hom(X, Σ^i Y)
    P1 = stalk(a2, 0)
    assert ext_dim(P1, shift(P1, -1), 1) == 1
    assert ext_dim(P1, shift(P1, 1), 1) == 0


def test_stable_hom_examples(a2):
    d = 3
    lam = shift(stalk(a2, (0, 1)), d - 1)
    for Y in engine("a2", d).pool.members:
        assert stable_hom_dim(lam, Y, d) == 0
    assert stable_hom_dim(stalk(a2, 0), s1(a2), 2) == 1
    P1 = stalk(a2, 0)
    hs = stable_hom(P1, P1, d)
    assert hs.dim == 1 and not hs.is_zero(identity_map(P1))


def test_nakayama_examples(a2):
    for i in range(2):
        N = nakayama(stalk(a2, i))
        assert N.degrees == [0]
        assert N.term(0).dims == a2.nakayama_module(i).dims
    N = nakayama(s1(a2))
    assert N.check() and N.degrees == [-1, 0]
    assert any(x.any() for x in N.diff(-1))
    # ν commutes with shift
    A, B = nakayama(shift(s1(a2), 1)), shift_modules(nakayama(s1(a2)), 1)
    assert A.dims() == B.dims()
    assert all(np.array_equal(x, y) for k in A.diffs for x, y in zip(A.diff(k), B.diff(k)))


def test_smart_truncate_examples(a2):
    M = ModuleComplex(a2, {0: a2.projective_module(0)})
    assert smart_truncate(M, "<=", 0).dims() == M.dims()
    assert smart_truncate(M, ">=", 1).is_zero()
    assert smart_truncate(nakayama(stalk(a2, 0)), "<=", -1).is_zero()


def test_smart_truncate_cohomology(a2):
    N = nakayama(s1(a2))
    H = N.cohomology_dims()
    lo = smart_truncate(N, "<=", -1).cohomology_dims()
    hi = smart_truncate(N, ">=", 0).cohomology_dims()
    assert {**lo, **hi} == H


def test_hom_D_examples(a2):
    for i in range(2):
        for j in range(2):
            M = ModuleComplex(a2, {0: a2.projective_module(j)})
            assert hom_D_dim(stalk(a2, i), M) == a2.projective_module(j).dims[i]
    assert hom_D_dim(stalk(a2, 0), ModuleComplex(a2, {})) == 0
    assert hom_D_dim(stalk(a2, ()), ModuleComplex(a2, {0: a2.projective_module(0)})) == 0


def test_duality_defect_examples(a2):
    d = 3
    P1, P2 = stalk(a2, 0), stalk(a2, 1)
    assert duality_defect(stalk(a2, ()), P1, d) == 0
    assert duality_defect(P1, P1, d) == 0
    X = shift(P1, 2)
    assert ext_dim(X, P2, 1) == 0
    rhs = hom_D_dim(resolve_down(P2, -d + 1, -2 * d + 2),
                    shift_modules(smart_truncate(nakayama(X), "<=", -1), -1))
    assert rhs == 0
    assert duality_defect(X, P2, d) == 0


def test_cartan_pairing_a2(a2):
    assert cartan_pairing(a2, [1, 0], [1, 0]) == 1
    assert cartan_pairing(a2, [0, 1], [1, 0]) == 1
    assert cartan_pairing(a2, [1, 0], [0, 1]) == 0


pairs = st.tuples(st.sampled_from([("a2", 3), ("nakayama2", 3), ("a2", 2)]),
                  st.integers(0, 50), st.integers(0, 50))


def _pair(args):
    (name, d), i, j = args
    pool = engine(name, d).pool
    return algebra(name), d, pool.members[i % len(pool)], pool.members[j % len(pool)]


@settings(max_examples=40, deadline=None)
@given(pairs, st.integers(-2, 2))
def test_euler_form_matches_cartan(args, k):
    alg, d, X, Y = _pair(args)
    Y = shift(Y, k)
    assert euler_form(X, Y) == cartan_pairing(alg, k0_class(X), k0_class(Y))


@settings(max_examples=40, deadline=None)
@given(pairs)
def test_happel_and_window_duality(args):
    alg, d, X, Y = _pair(args)
    assert happel_defect(X, Y) == 0
    assert duality_defect(X, Y, d) == 0


@settings(max_examples=40, deadline=None)
@given(pairs, st.integers(0, 50))
def test_hom_additivity(args, k):
    alg, d, X, Y = _pair(args)
    pool = engine(*args[0]).pool
    Z = pool.members[k % len(pool)]
    assert hom_K_dim(X, direct_sum(Y, Z)) == hom_K_dim(X, Y) + hom_K_dim(X, Z)
    assert hom_K_dim(direct_sum(Y, Z), X) == hom_K_dim(Y, X) + hom_K_dim(Z, X)


@settings(max_examples=40, deadline=None)
@given(pairs)
def test_stable_hom_is_derived_hom_of_truncations(args):
    alg, d, X, Y = _pair(args)
    tY = tau_ge_module(Y, d)
    dim = stable_hom_dim(X, Y, d)
    assert dim == hom_D_dim(resolve_down(X, -d + 1, -2 * d + 2), tY)
    assert dim == hom_D_dim(X, tY)


def test_module_rep_sanity(a2):
    P1 = a2.projective_module(0)
    assert isinstance(P1, ModuleRep) and P1.dims == (1, 1)
