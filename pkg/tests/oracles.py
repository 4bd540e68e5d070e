"""Independent brute-force oracles for two-term complexes and mod A2.

Nothing here uses the complex, Hom or torsion code of the package: two-term
complexes are built directly from the multiplication table of the algebra,
and A2-modules are plain matrix representations over F_2.
"""

import itertools
from math import gcd

import numpy as np


def _rank(M, p):
    M = np.array(M, dtype=np.int64) % p
    r = 0
    rows, cols = M.shape if M.size else (M.shape[0], M.shape[1] if M.ndim == 2 else 0)
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i, c]), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = M[r] * pow(int(M[r, c]), p - 2, p) % p
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
    return r


# ------------------------------------------------------- two-term complexes


class TwoTerm:
    """P(a) -> P(b) with a Λ-matrix ``dX`` (rows b, cols a, entries in Λ)."""

    def __init__(self, alg, a, b, dX):
        self.alg, self.a, self.b, self.dX = alg, list(a), list(b), dX

    @property
    def g(self):
        v = [0] * self.alg.n
        for i in self.b:
            v[i] += 1
        for i in self.a:
            v[i] -= 1
        return tuple(v)


def _hom_coords(alg, U, V):
    """Coordinates of Hom(⊕P_U, ⊕P_V): (row, col, basis index) triples."""
    return [(r, c, b) for r, v in enumerate(V) for c, u in enumerate(U)
            for b in alg.paths_between(v, u)]


def _mat(alg, coords, vec, U, V):
    M = np.zeros((len(V), len(U), alg.dim), dtype=np.int64)
    for (r, c, b), x in zip(coords, vec):
        M[r, c, b] = (M[r, c, b] + x) % alg.p
    return M


def _compose(alg, G, F):
    """Λ-matrix product G·F."""
    out = np.zeros((G.shape[0], F.shape[1], alg.dim), dtype=np.int64)
    for r in range(G.shape[0]):
        for c in range(F.shape[1]):
            acc = np.zeros(alg.dim, dtype=np.int64)
            for k in range(G.shape[1]):
                acc = (acc + alg.multiply(G[r, k], F[k, c])) % alg.p
            out[r, c] = acc
    return out


def _flat(alg, M, coords):
    return np.array([M[r, c, b] for r, c, b in coords], dtype=np.int64)


def hom_shift_dim(X: TwoTerm, Y: TwoTerm) -> int:
    """dim Hom(X, ΣY) = dim Hom(X^{-1}, Y^0) modulo h∘dX + dY∘k."""
    alg = X.alg
    target = _hom_coords(alg, X.a, Y.b)
    if not target:
        return 0
    span = []
    for U, V, side in ((X.b, Y.b, "h"), (X.a, Y.a, "k")):
        cs = _hom_coords(alg, U, V)
        for i in range(len(cs)):
            e = np.zeros(len(cs), dtype=np.int64)
            e[i] = 1
            H = _mat(alg, cs, e, U, V)
            C = _compose(alg, H, X.dX) if side == "h" else _compose(alg, Y.dX, H)
            span.append(_flat(alg, C, target))
    r = _rank(np.array(span).T, alg.p) if span else 0
    return len(target) - r


def generic(alg, g, seed=0):
    """Two-term complex with g-vector g and a random differential."""
    rng = np.random.default_rng([seed, *[x + 10 for x in g]])
    a = [i for i in range(alg.n) for _ in range(max(-g[i], 0))]
    b = [i for i in range(alg.n) for _ in range(max(g[i], 0))]
    cs = _hom_coords(alg, a, b)
    dX = _mat(alg, cs, rng.integers(1, alg.p, size=len(cs)), a, b)
    return TwoTerm(alg, a, b, dX)


def rigid_indecomposables(alg, bound=2):
    """g-vectors of rigid indecomposable two-term complexes with |g_i| ≤ bound."""
    rigid = {}
    for g in itertools.product(range(-bound, bound + 1), repeat=alg.n):
        if not any(g):
            continue
        X = generic(alg, g)
        if hom_shift_dim(X, X) == 0:
            rigid[g] = X
    out = {}
    for g, X in rigid.items():
        if gcd(*[abs(x) for x in g]) != 1:
            continue
        split = False
        for g1, X1 in rigid.items():
            g2 = tuple(x - y for x, y in zip(g, g1))
            if g2 in rigid and compatible(X1, rigid[g2]):
                split = True
                break
        if not split:
            out[g] = X
    return out


def compatible(X, Y) -> bool:
    return hom_shift_dim(X, Y) == 0 and hom_shift_dim(Y, X) == 0


def two_term_silting(alg, bound=2):
    """All sets of n pairwise compatible rigid indecomposables, as g-vector sets."""
    ind = rigid_indecomposables(alg, bound)
    out = []
    for combo in itertools.combinations(sorted(ind), alg.n):
        if all(compatible(ind[x], ind[y]) for x, y in itertools.combinations(combo, 2)):
            out.append(frozenset(combo))
    return out, ind


def silt_leq_two_term(ind, M, N) -> bool:
    """M ≤ N iff Hom(N, ΣM) = 0."""
    return all(hom_shift_dim(ind[y], ind[x]) == 0 for y in N for x in M)


def h0_dims_rank_a2(X: TwoTerm):
    """(dim at 1, dim at 2, rank of the arrow) of H^0(X) for the algebra 1 -> 2."""
    alg = X.alg
    p = alg.p
    arrow = alg.path_element(["a"])
    spaces = {}
    for v in range(2):
        cols = [(r, q) for r, i in enumerate(X.b) for q in alg.paths_between(i, v)]
        img = []
        for c, j in enumerate(X.a):
            for q in alg.paths_between(j, v):
                vec = np.zeros(len(cols), dtype=np.int64)
                for r in range(len(X.b)):
                    y = alg.multiply(X.dX[r, c], alg.basis_vector(q))
                    for k, (rr, qq) in enumerate(cols):
                        if rr == r:
                            vec[k] = y[qq]
                img.append(vec)
        spaces[v] = (cols, np.array(img).T if img else np.zeros((len(cols), 0), dtype=np.int64))
    (c1, B1), (c2, B2) = spaces[0], spaces[1]
    d1 = len(c1) - _rank(B1, p)
    d2 = len(c2) - _rank(B2, p)
    # images of vertex-1 basis vectors under right multiplication by the arrow
    act = []
    for r, q in c1:
        y = alg.multiply(alg.basis_vector(q), arrow)
        vec = np.zeros(len(c2), dtype=np.int64)
        for k, (rr, qq) in enumerate(c2):
            if rr == r:
                vec[k] = y[qq]
        act.append(vec)
    A = np.array(act).T if act else np.zeros((len(c2), 0), dtype=np.int64)
    rank = _rank(np.hstack([B2, A]), p) - _rank(B2, p) if d1 and d2 else 0
    return d1, d2, rank


# ------------------------------------------------------- representations of A2
# A representation is (d1, d2, A) with A a d2 x d1 matrix over F_2.
# Indecomposables: S1 = (1, 0), S2 = (0, 1), P1 = (1, 1, [1]).

Q = 2
IND = {"S1": (1, 0, np.zeros((0, 1), dtype=np.int64)),
       "S2": (0, 1, np.zeros((1, 0), dtype=np.int64)),
       "P1": (1, 1, np.ones((1, 1), dtype=np.int64))}


def summands(d1, d2, A):
    r = _rank(A, Q) if A.size else 0
    out = {}
    if r:
        out["P1"] = r
    if d1 - r:
        out["S1"] = d1 - r
    if d2 - r:
        out["S2"] = d2 - r
    return out


def direct_sum(reps):
    d1 = sum(r[0] for r in reps)
    d2 = sum(r[1] for r in reps)
    A = np.zeros((d2, d1), dtype=np.int64)
    i = j = 0
    for a, b, M in reps:
        A[j:j + b, i:i + a] = M
        i += a
        j += b
    return d1, d2, A


def _subspaces(n):
    vecs = [np.array(v) for v in itertools.product(range(Q), repeat=n)]
    seen = set()
    for k in range(n + 1):
        for basis in itertools.combinations(vecs, k):
            M = np.array(basis).T if basis else np.zeros((n, 0), dtype=np.int64)
            if _rank(M, Q) != k:
                continue
            key = frozenset(tuple((M @ np.array(c)) % Q) for c in itertools.product(range(Q), repeat=k))
            if key in seen:
                continue
            seen.add(key)
            yield M


def quotient_types(rep):
    """Indecomposable summands of all quotients of ``rep``."""
    d1, d2, A = rep
    out = set()
    for U1 in _subspaces(d1):
        for U2 in _subspaces(d2):
            img = (A @ U1) % Q if U1.size else np.zeros((d2, 0), dtype=np.int64)
            if _rank(np.hstack([U2, img]), Q) != _rank(U2, Q):
                continue
            q1 = d1 - U1.shape[1]
            q2 = d2 - U2.shape[1]
            # rank of induced map = rank([U2 | A V1]) - rank(U2)
            r = _rank(np.hstack([U2, A % Q]), Q) - _rank(U2, Q) if d1 and d2 else 0
            if r:
                out.add("P1")
            if q1 - r > 0:
                out.add("S1")
            if q2 - r > 0:
                out.add("S2")
    return out


def extension_types(M, N):
    """Indecomposable summands of middle terms E of 0 -> N -> E -> M -> 0."""
    m1, m2, AM = M
    n1, n2, AN = N
    out = set()
    for xi in itertools.product(range(Q), repeat=n2 * m1):
        X = np.array(xi, dtype=np.int64).reshape(n2, m1)
        A = np.zeros((m2 + n2, m1 + n1), dtype=np.int64)
        A[:m2, :m1] = AM
        A[m2:, :m1] = X
        A[m2:, m1:] = AN
        out |= set(summands(m1 + n1, m2 + n2, A))
    return out


def torsion_classes_a2():
    """All subsets of {S1, S2, P1} whose additive closure is a torsion class."""
    names = sorted(IND)
    found = []
    for k in range(len(names) + 1):
        for T in itertools.combinations(names, k):
            T = set(T)
            reps = [IND[t] for t in T]
            ok = all(quotient_types(IND[t]) <= T for t in T)
            for M, N in itertools.product(
                    [direct_sum(c) for j in (1, 2) for c in itertools.combinations_with_replacement(reps, j)],
                    repeat=2) if reps else []:
                if not ok:
                    break
                ok = extension_types(M, N) <= T
            if ok:
                found.append(frozenset(T))
    return found


def torsion_closure_a2(types):
    """Smallest torsion class containing the listed indecomposables."""
    for T in sorted(torsion_classes_a2(), key=len):
        if set(types) <= T:
            return T
    raise AssertionError("no torsion class contains the given modules")
