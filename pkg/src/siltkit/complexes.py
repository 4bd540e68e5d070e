"""
Bounded complexes of finitely generated projectives over a QuiverAlgebra.

A complex stores, for each degree k, the tuple of vertices of its
indecomposable projective summands (``terms[k]``) and, for each k, the
differential ``diffs[k]: X^k -> X^{k+1}`` as a Λ-matrix: an int64 array
of shape (len(X^{k+1}), len(X^k), dim Λ) whose entry (r, c) lies in
e_{X^{k+1}_r} Λ e_{X^k_c}.
"""

from __future__ import annotations

import json

import numpy as np

from . import fp
from .algebra import QuiverAlgebra
from .errors import FieldTooSmall, OutOfWindow, Undecided

# ---------------------------------------------------------------- Λ-matrices


def lzeros(alg: QuiverAlgebra, rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols, alg.dim), dtype=np.int64)


def lmul(alg: QuiverAlgebra, A, B) -> np.ndarray:
    """Product of Λ-matrices A (r x t) and B (t x s)."""
    r, t, D = A.shape
    s = B.shape[1]
    if t == 0 or r == 0 or s == 0:
        return np.zeros((r, s, D), dtype=np.int64)
    AM = np.tensordot(A, alg.mult, axes=([2], [0])) % alg.p  # r,t,b,c
    return np.einsum("rtbc,tsb->rsc", AM, B) % alg.p


def leye(alg: QuiverAlgebra, verts) -> np.ndarray:
    m = len(verts)
    I = lzeros(alg, m, m)
    for i, v in enumerate(verts):
        I[i, i, v] = 1
    return I


def ltop(alg: QuiverAlgebra, A, rows, cols) -> np.ndarray:
    """F_p matrix of idempotent coefficients (the map on tops)."""
    T = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, v in enumerate(rows):
        for j, w in enumerate(cols):
            if v == w:
                T[i, j] = A[i, j, v]
    return T


def lscalar(alg: QuiverAlgebra, S, rows, cols) -> np.ndarray:
    """Λ-matrix with scalar matrix S placed on matching idempotents."""
    A = lzeros(alg, len(rows), len(cols))
    for i, v in enumerate(rows):
        for j, w in enumerate(cols):
            if v == w and S[i, j] % alg.p:
                A[i, j, v] = S[i, j] % alg.p
    return A


def linv(alg: QuiverAlgebra, A, verts) -> np.ndarray:
    """Inverse of a square Λ-matrix whose top is invertible."""
    p = alg.p
    T = ltop(alg, A, verts, verts)
    Ti = lscalar(alg, fp.inverse(T, p), verts, verts)
    N = (A - lscalar(alg, T, verts, verts)) % p
    step = (-lmul(alg, Ti, N)) % p
    term = Ti
    out = Ti.copy()
    for _ in range(alg.nilpotency + 1):
        term = lmul(alg, step, term)
        if not term.any():
            break
        out = (out + term) % p
    return out


def unit_inverse(alg: QuiverAlgebra, u, v: int) -> np.ndarray:
    """Inverse of a unit u of the local ring e_v Λ e_v."""
    return linv(alg, np.asarray(u).reshape(1, 1, -1), (v,))[0, 0]


# ------------------------------------------------------------------ complexes


class ProjComplex:
    """A bounded complex of projectives; immutable by convention."""

    def __init__(self, alg: QuiverAlgebra, terms, diffs=None):
        self.alg = alg
        p = alg.p
        self.terms: dict[int, tuple[int, ...]] = {
            int(k): tuple(int(v) for v in vs) for k, vs in terms.items() if len(vs)}
        self.diffs: dict[int, np.ndarray] = {}
        diffs = diffs or {}
        for k in self.terms:
            if k + 1 in self.terms:
                shape = (len(self.terms[k + 1]), len(self.terms[k]), alg.dim)
                if k in diffs:
                    M = np.asarray(diffs[k], dtype=np.int64) % p
                    if M.shape != shape:
                        raise ValueError(f"differential {k} has shape {M.shape}, expected {shape}")
                else:
                    M = np.zeros(shape, dtype=np.int64)
                self.diffs[k] = M

    # access ---------------------------------------------------------------
    def term(self, k: int) -> tuple[int, ...]:
        return self.terms.get(k, ())

    def diff(self, k: int) -> np.ndarray:
        if k in self.diffs:
            return self.diffs[k]
        return lzeros(self.alg, len(self.term(k + 1)), len(self.term(k)))

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    @property
    def lo(self):
        return min(self.terms) if self.terms else None

    @property
    def hi(self):
        return max(self.terms) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def multiplicity(self, k: int) -> tuple[int, ...]:
        m = [0] * self.alg.n
        for v in self.term(k):
            m[v] += 1
        return tuple(m)

    def signature(self) -> tuple:
        return tuple((k, self.multiplicity(k)) for k in self.degrees)

    def within(self, lo: int, hi: int) -> bool:
        return all(lo <= k <= hi for k in self.terms)

    def in_window(self, d: int) -> bool:
        return self.within(-d + 1, 0)

    def is_minimal(self) -> bool:
        n = self.alg.n
        for k, M in self.diffs.items():
            src, tgt = self.term(k), self.term(k + 1)
            for r, v in enumerate(tgt):
                for c, w in enumerate(src):
                    if v == w and M[r, c, v] and v < n:
                        return False
        return True

    def check(self) -> bool:
        """δ∘δ = 0 in every degree."""
        for k in self.diffs:
            if k + 1 in self.diffs:
                if lmul(self.alg, self.diffs[k + 1], self.diffs[k]).any():
                    return False
        return True

    def sort_key(self):
        parts = [self.signature()]
        for k in sorted(self.diffs):
            parts.append((k, tuple(self.diffs[k].ravel().tolist())))
        return tuple(parts)

    # presentation -----------------------------------------------------------
    def _entry(self, x) -> str:
        alg = self.alg
        out = []
        for b in np.flatnonzero(x):
            c = int(x[b])
            if c > alg.p // 2:
                c -= alg.p
            nm = alg.name(int(b))
            out.append(nm if c == 1 else f"-{nm}" if c == -1 else f"{c}*{nm}")
        return "+".join(out) if out else "0"

    def label(self) -> str:
        """Deterministic text form, e.g. ``P2@-1 -(a)-> P1@0``."""
        if self.is_zero():
            return "0"
        parts = []
        degs = self.degrees
        for i, k in enumerate(degs):
            parts.append("+".join(f"P{v + 1}" for v in self.term(k)) + f"@{k}")
            if i + 1 < len(degs):
                if degs[i + 1] == k + 1:
                    M = self.diff(k)
                    if M.shape[0] == 1 and M.shape[1] == 1:
                        ent = self._entry(M[0, 0])
                    else:
                        ent = "[" + ";".join(",".join(self._entry(M[r, c]) for c in range(M.shape[1]))
                                             for r in range(M.shape[0])) + "]"
                    parts.append(f"-({ent})->")
                else:
                    parts.append(",")
        return " ".join(parts)

    def to_dict(self) -> dict:
        alg = self.alg
        diffs = {}
        for k in sorted(self.diffs):
            M = self.diffs[k]
            diffs[str(k)] = [[[[int(b) , int(M[r, c, b])] for b in np.flatnonzero(M[r, c])]
                              for c in range(M.shape[1])] for r in range(M.shape[0])]
        return {
            "lo": self.lo,
            "hi": self.hi,
            "terms": {str(k): [v + 1 for v in self.term(k)] for k in self.degrees},
            "diffs": diffs,
            "basis": [alg.name(b) for b in range(alg.dim)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self):
        return f"ProjComplex({self.label()})"


def stalk(alg: QuiverAlgebra, verts, degree: int = 0) -> ProjComplex:
    if isinstance(verts, int):
        verts = (verts,)
    return ProjComplex(alg, {degree: tuple(verts)})


def zero_complex(alg: QuiverAlgebra) -> ProjComplex:
    return ProjComplex(alg, {})


def two_term(alg: QuiverAlgebra, src: int, tgt: int, element, degree: int = 0) -> ProjComplex:
    """P_src in degree-1 mapping to P_tgt in degree by ``element``."""
    M = np.asarray(element, dtype=np.int64).reshape(1, 1, -1)
    return ProjComplex(alg, {degree - 1: (src,), degree: (tgt,)}, {degree - 1: M})


def direct_sum(*Xs: ProjComplex) -> ProjComplex:
    alg = Xs[0].alg
    degs = sorted({k for X in Xs for k in X.terms})
    terms = {k: sum((X.term(k) for X in Xs), ()) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in terms:
            continue
        M = lzeros(alg, len(terms[k + 1]), len(terms[k]))
        r = c = 0
        for X in Xs:
            a, b = len(X.term(k + 1)), len(X.term(k))
            M[r:r + a, c:c + b] = X.diff(k)
            r += a
            c += b
        diffs[k] = M
    return ProjComplex(alg, terms, diffs)


def shift(X: ProjComplex, k: int = 1) -> ProjComplex:
    """Σ^k X: degrees move by -k, differentials pick up the sign (-1)^k."""
    sign = -1 if k % 2 else 1
    terms = {j - k: v for j, v in X.terms.items()}
    diffs = {j - k: (sign * M) % X.alg.p for j, M in X.diffs.items()}
    return ProjComplex(X.alg, terms, diffs)


def hard_truncate(X: ProjComplex, mode: str, m: int) -> ProjComplex:
    """Degreewise truncation; ``mode`` is '<=' or '>='."""
    if mode in ("<=", "le"):
        keep = [k for k in X.terms if k <= m]
    elif mode in (">=", "ge"):
        keep = [k for k in X.terms if k >= m]
    else:
        raise ValueError(f"unknown truncation mode {mode!r}")
    terms = {k: X.terms[k] for k in keep}
    diffs = {k: X.diffs[k] for k in keep if k in X.diffs and k + 1 in terms}
    return ProjComplex(X.alg, terms, diffs)


def k0_class(X: ProjComplex) -> np.ndarray:
    v = np.zeros(X.alg.n, dtype=np.int64)
    for k in X.terms:
        v += (-1) ** (k % 2) * np.array(X.multiplicity(k), dtype=np.int64)
    return v


# ---------------------------------------------------------------- chain maps


class ChainMap:
    """Degree-zero morphism of complexes, ``comps[k]: X^k -> Y^k``."""

    def __init__(self, source: ProjComplex, target: ProjComplex, comps=None):
        self.source = source
        self.target = target
        alg = source.alg
        self.comps: dict[int, np.ndarray] = {}
        comps = comps or {}
        for k in source.terms:
            if k in target.terms:
                shape = (len(target.term(k)), len(source.term(k)), alg.dim)
                M = np.asarray(comps[k], dtype=np.int64) % alg.p if k in comps else \
                    np.zeros(shape, dtype=np.int64)
                if M.shape != shape:
                    raise ValueError("chain map component has the wrong shape")
                self.comps[k] = M

    @property
    def alg(self):
        return self.source.alg

    def comp(self, k: int) -> np.ndarray:
        if k in self.comps:
            return self.comps[k]
        return lzeros(self.alg, len(self.target.term(k)), len(self.source.term(k)))

    def is_chain_map(self) -> bool:
        alg = self.alg
        X, Y = self.source, self.target
        for k in set(X.terms) | set(Y.terms):
            lhs = lmul(alg, Y.diff(k), self.comp(k))
            rhs = lmul(alg, self.comp(k + 1), X.diff(k))
            if ((lhs - rhs) % alg.p).any():
                return False
        return True

    def is_zero(self) -> bool:
        return not any(M.any() for M in self.comps.values())

    def __add__(self, other: "ChainMap") -> "ChainMap":
        p = self.alg.p
        return ChainMap(self.source, self.target,
                        {k: (self.comp(k) + other.comp(k)) % p for k in self.comps})

    def scale(self, c: int) -> "ChainMap":
        p = self.alg.p
        return ChainMap(self.source, self.target, {k: (c * M) % p for k, M in self.comps.items()})

    def __sub__(self, other):
        return self + other.scale(-1)


def identity_map(X: ProjComplex) -> ChainMap:
    return ChainMap(X, X, {k: leye(X.alg, v) for k, v in X.terms.items()})


def zero_map(X: ProjComplex, Y: ProjComplex) -> ChainMap:
    return ChainMap(X, Y)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g ∘ f."""
    alg = f.alg
    return ChainMap(f.source, g.target,
                    {k: lmul(alg, g.comp(k), f.comp(k)) for k in f.source.terms
                     if k in g.target.terms})


def combination(maps, coeffs, source=None, target=None) -> ChainMap:
    if not maps:
        return ChainMap(source, target)
    out = ChainMap(maps[0].source, maps[0].target)
    p = out.alg.p
    comps = {k: np.zeros_like(M) for k, M in out.comps.items()}
    for f, c in zip(maps, coeffs):
        c = int(c) % p
        if c:
            for k in comps:
                comps[k] = (comps[k] + c * f.comp(k)) % p
    return ChainMap(out.source, out.target, comps)


def shift_map(f: ChainMap, k: int = 1) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k),
                    {j - k: M for j, M in f.comps.items()})


def stack_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """[f; g]: X -> Y ⊕ Z for f: X -> Y and g: X -> Z."""
    tgt = direct_sum(f.target, g.target)
    return ChainMap(f.source, tgt,
                    {k: np.concatenate([f.comp(k), g.comp(k)], axis=0) for k in f.source.terms
                     if k in tgt.terms})


def row_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """[f, g]: X ⊕ Y -> Z for f: X -> Z and g: Y -> Z."""
    src = direct_sum(f.source, g.source)
    return ChainMap(src, f.target,
                    {k: np.concatenate([f.comp(k), g.comp(k)], axis=1) for k in src.terms
                     if k in f.target.terms})


def cone(f: ChainMap) -> ProjComplex:
    """Mapping cone: degree k is X^{k+1} ⊕ Y^k with [[-δ_X, 0], [f, δ_Y]]."""
    X, Y = f.source, f.target
    alg = X.alg
    p = alg.p
    degs = sorted({k - 1 for k in X.terms} | set(Y.terms))
    terms = {k: X.term(k + 1) + Y.term(k) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in terms:
            continue
        a0, b0 = len(X.term(k + 1)), len(Y.term(k))
        a1, b1 = len(X.term(k + 2)), len(Y.term(k + 1))
        M = lzeros(alg, a1 + b1, a0 + b0)
        M[:a1, :a0] = (-X.diff(k + 1)) % p
        M[a1:, :a0] = f.comp(k + 1)
        M[a1:, a0:] = Y.diff(k)
        diffs[k] = M
    return ProjComplex(alg, terms, diffs)


def cocone(f: ChainMap) -> ProjComplex:
    return shift(cone(f), -1)


def canonical_to_stalk(X: ProjComplex, degree: int) -> ChainMap:
    """X -> X^degree placed as a stalk, identity in that degree.

    Only a chain map when ``degree`` is the lowest degree of X.
    """
    P = stalk(X.alg, X.term(degree), degree)
    return ChainMap(X, P, {degree: leye(X.alg, X.term(degree))} if X.term(degree) else {})


def stalk_to_canonical(X: ProjComplex, degree: int) -> ChainMap:
    """X^degree as a stalk -> X; a chain map when ``degree`` is the top degree."""
    P = stalk(X.alg, X.term(degree), degree)
    return ChainMap(P, X, {degree: leye(X.alg, X.term(degree))} if X.term(degree) else {})


def make_inflation(f: ChainMap, d: int) -> ChainMap:
    """f' = [i; f]: A -> A^{-d+1}[d-1] ⊕ B, split mono in degree -d+1."""
    lo = -d + 1
    if not (f.source.within(lo, 0) and f.target.within(lo, 0)):
        raise OutOfWindow("make_inflation needs source and target in the window")
    i = canonical_to_stalk(f.source, lo)
    return stack_maps(i, f)


def make_deflation(f: ChainMap, d: int) -> ChainMap:
    """f' = [q, f]: B^0[0] ⊕ A -> B, split epi in degree 0."""
    lo = -d + 1
    if not (f.source.within(lo, 0) and f.target.within(lo, 0)):
        raise OutOfWindow("make_deflation needs source and target in the window")
    q = stalk_to_canonical(f.target, 0)
    return row_maps(q, f)


# --------------------------------------------------------------- minimization


def _find_unit(X: ProjComplex):
    n = X.alg.n
    for k in sorted(X.diffs):
        M = X.diffs[k]
        src, tgt = X.term(k), X.term(k + 1)
        for r, v in enumerate(tgt):
            for c, w in enumerate(src):
                if v == w and v < n and M[r, c, v]:
                    return k, r, c
    return None


def _cancel(X: ProjComplex, k: int, r: int, c: int) -> ProjComplex:
    alg = X.alg
    p = alg.p
    d = X.diff(k)
    v = X.term(k)[c]
    uinv = unit_inverse(alg, d[r, c], v).reshape(1, 1, -1)
    rows = [i for i in range(d.shape[0]) if i != r]
    cols = [j for j in range(d.shape[1]) if j != c]
    gamma = d[rows][:, [c]]
    beta = d[[r]][:, cols]
    delta = d[rows][:, cols]
    new = (delta - lmul(alg, lmul(alg, gamma, uinv), beta)) % p
    terms = dict(X.terms)
    terms[k] = tuple(x for j, x in enumerate(X.term(k)) if j != c)
    terms[k + 1] = tuple(x for i, x in enumerate(X.term(k + 1)) if i != r)
    diffs = dict(X.diffs)
    diffs[k] = new
    if k - 1 in diffs:
        diffs[k - 1] = np.delete(diffs[k - 1], c, axis=0)
    if k + 1 in diffs:
        diffs[k + 1] = np.delete(diffs[k + 1], r, axis=1)
    terms = {j: t for j, t in terms.items() if t}
    diffs = {j: M for j, M in diffs.items() if j in terms and j + 1 in terms}
    return ProjComplex(alg, terms, diffs)


def minimize(X: ProjComplex) -> ProjComplex:
    """Cancel invertible differential entries until every entry is radical."""
    while True:
        hit = _find_unit(X)
        if hit is None:
            return X
        X = _cancel(X, *hit)


# ----------------------------------------------------------- Krull–Schmidt


def _split_summand(X: ProjComplex, e: ChainMap) -> ProjComplex:
    """Image of an idempotent chain endomorphism, as a complex of projectives."""
    alg = X.alg
    p = alg.p
    iotas, pis, terms = {}, {}, {}
    for k in X.degrees:
        verts = X.term(k)
        E = e.comp(k)
        Ebar = ltop(alg, E, verts, verts)
        sel_rows, sel_cols = [], []
        for v in range(alg.n):
            idx = [i for i, w in enumerate(verts) if w == v]
            if not idx:
                continue
            Ev = Ebar[np.ix_(idx, idx)]
            piv = fp.independent_columns(Ev, p)
            if not piv:
                continue
            C = np.zeros((len(verts), len(piv)), dtype=np.int64)
            C[np.ix_(idx, range(len(piv)))] = Ev[:, piv]
            # left inverse supported on rows where C is invertible
            Cv = Ev[:, piv]
            prow = fp.independent_columns(Cv.T, p)
            R0 = np.zeros((len(piv), len(verts)), dtype=np.int64)
            R0[:, [idx[i] for i in prow]] = fp.inverse(Cv[prow], p)
            R = fp.matmul(R0, Ebar, p)
            sel_cols.append((v, C))
            sel_rows.append((v, R))
        if not sel_cols:
            continue
        new_verts = tuple(v for v, C in sel_cols for _ in range(C.shape[1]))
        Cfull = np.hstack([C for _, C in sel_cols])
        Rfull = np.vstack([R for _, R in sel_rows])
        iota0 = lscalar(alg, Cfull, verts, new_verts)
        pi0 = lscalar(alg, Rfull, new_verts, verts)
        iota = lmul(alg, E, iota0)
        pi = lmul(alg, pi0, E)
        u = lmul(alg, pi, iota)
        pi = lmul(alg, linv(alg, u, new_verts), pi)
        iotas[k], pis[k], terms[k] = iota, pi, new_verts
    diffs = {}
    for k in terms:
        if k + 1 in terms:
            diffs[k] = lmul(alg, lmul(alg, pis[k + 1], X.diff(k)), iotas[k])
    return ProjComplex(alg, terms, diffs)


def _rand_element(rng, n: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=n, dtype=np.int64)


def _poly_eval(hs, L_list, coeffs_vec, poly_coeffs, p):
    """Evaluate a polynomial (highest degree first) at the element ``coeffs_vec``."""
    one = hs.identity_coords()
    La = sum(int(c) * L for c, L in zip(coeffs_vec, L_list)) % p
    acc = np.zeros_like(one)
    for c in poly_coeffs:
        acc = (fp.matmul(La, acc, p) + int(c) * one) % p
    return acc


def _find_idempotent(hs, L_list, rng, p, tries: int = 24):
    """Nontrivial idempotent of End(X) as coordinates, or None if local."""
    import sympy

    n = len(L_list)
    t = sympy.Symbol("t")
    one = hs.identity_coords()
    for _ in range(tries):
        a = _rand_element(rng, n, p)
        La = sum(int(c) * L for c, L in zip(a, L_list)) % p
        # minimal polynomial of a via the Krylov sequence of 1
        vecs = [one]
        while True:
            nxt = fp.matmul(La, vecs[-1], p)
            K = np.stack(vecs, axis=1)
            try:
                c = fp.solve(K, nxt, p)
                break
            except Exception:
                vecs.append(nxt)
        deg = len(vecs)
        coeffs = [1] + [int((-c[deg - 1 - i]) % p) for i in range(deg)]
        poly = sympy.Poly(coeffs, t, modulus=p)
        _, factors = poly.factor_list()
        if len(factors) < 2:
            continue
        f1, e1 = factors[0]
        g1 = f1 ** e1
        g2 = sympy.Poly(1, t, modulus=p)
        for f, e in factors[1:]:
            g2 = g2 * f ** e
        s, tt, h = sympy.gcdex(g1, g2)
        hinv = pow(int(h.LC()) % p, p - 2, p)
        ep = (tt * g2) * hinv
        ep = ep.rem(poly)
        pc = [int(x) % p for x in ep.all_coeffs()]
        e = _poly_eval(hs, L_list, a, pc, p)
        return e
    return None


def decompose(X: ProjComplex, seed: int = 0) -> list[ProjComplex]:
    """Split X into indecomposable summands (Krull–Schmidt).

    Raises FieldTooSmall when p <= dim End(X), where the trace-form
    radical is no longer certified.
    """
    from .homs import hom_K

    X = minimize(X)
    if X.is_zero():
        return []
    alg = X.alg
    p = alg.p
    hs = hom_K(X, X)
    n = hs.dim
    if n >= p:
        raise FieldTooSmall(f"dim End = {n} >= p = {p}")
    if n == 1:
        return [X]
    L_list = hs.left_mult_matrices()
    T = np.array([[int(np.trace(fp.matmul(Li, Lj, p)) % p) for Lj in L_list] for Li in L_list],
                 dtype=np.int64)
    rad = fp.nullspace(T, p)
    if n - rad.shape[1] == 1:
        return [X]
    rng = np.random.default_rng(seed)
    e = _find_idempotent(hs, L_list, rng, p)
    if e is None:
        # the semisimple quotient looks like a field extension of F_p
        return [X]
    emap = hs.element(e)
    one = identity_map(X)
    for _ in range(64):
        e2 = compose(emap, emap)
        if not (e2 - emap).comps or (e2 - emap).is_zero():
            break
        e3 = compose(e2, emap)
        emap = e2.scale(3) - e3.scale(2)
    else:
        raise Undecided("idempotent lifting did not converge")
    Y1 = _split_summand(X, emap)
    Y2 = _split_summand(X, one - emap)
    pieces = decompose(Y1, seed + 1) + decompose(Y2, seed + 2)
    return sorted(pieces, key=lambda Z: Z.sort_key())


# -------------------------------------------------------------- isomorphism


def _top_blocks(f: ChainMap):
    X, Y = f.source, f.target
    alg = f.alg
    out = []
    for k in X.degrees:
        T = ltop(alg, f.comp(k), Y.term(k), X.term(k))
        for v in range(alg.n):
            r = [i for i, w in enumerate(Y.term(k)) if w == v]
            c = [j for j, w in enumerate(X.term(k)) if w == v]
            if c:
                out.append(T[np.ix_(r, c)])
    return out


def is_isomorphic(X: ProjComplex, Y: ProjComplex, seed: int = 0, trials: int = 32,
                  exhaustive_dim: int = 8, grid_limit: int = 200_000) -> bool:
    """Homotopy equivalence test on minimized complexes.

    Searches the space of chain maps X -> Y for a degreewise invertible
    one, first with ``trials`` seeded random draws and then, when the
    space of top parts has dimension <= ``exhaustive_dim``, on a full
    grid large enough to certify absence by counting roots.
    """
    from .homs import chain_map_basis

    X = minimize(X)
    Y = minimize(Y)
    if X.signature() != Y.signature():
        return False
    if X.is_zero():
        return True
    alg = X.alg
    p = alg.p
    Z = chain_map_basis(X, Y)
    if not Z:
        return False
    tops = [np.concatenate([B.ravel() for B in _top_blocks(f)]) for f in Z]
    blocks0 = _top_blocks(Z[0])
    shapes = [B.shape for B in blocks0]
    Tm = np.stack(tops, axis=1) % p
    basis_cols = fp.independent_columns(Tm, p)
    W = Tm[:, basis_cols]
    size = sum(s[0] for s in shapes)

    def invertible(vec):
        off = 0
        for (a, b) in shapes:
            B = vec[off:off + a * b].reshape(a, b)
            off += a * b
            if fp.rank(B, p) < a:
                return False
        return True

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        c = _rand_element(rng, W.shape[1], p)
        if invertible(fp.matmul(W, c, p)):
            return True
    w = W.shape[1]
    if w <= exhaustive_dim:
        # det of the block-diagonal top has degree <= size in each
        # variable, so vanishing on a (size+1)^w grid means it is zero
        npts = size + 1
        if npts ** w > grid_limit:
            raise Undecided("isomorphism grid search too large")
        import itertools
        for c in itertools.product(range(npts), repeat=w):
            if invertible(fp.matmul(W, np.array(c, dtype=np.int64), p)):
                return True
        return False
    raise Undecided("no invertible chain map found in random trials")


def clone(X: ProjComplex) -> ProjComplex:
    return ProjComplex(X.alg, X.terms, X.diffs)
