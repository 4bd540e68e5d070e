"""
Torsion and cotorsion pairs in the two window categories.

Both windows are represented by one finite pool of indecomposable
complexes of projectives supported in [-d+1, 0].  The K-window uses the
whole pool; the D-window uses the members that are not stalks of Λ in
degree -d+1, with Homs taken modulo add Λ[d-1].  Subcategories are
bitmasks over pool indices and stand for their additive closures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import fp
from .algebra import QuiverAlgebra
from .complexes import (ChainMap, ProjComplex, combination, compose, cone, decompose,
                        make_deflation, make_inflation, minimize, shift, stalk)
from .errors import (NotClosed, NotSTorsionByWitness, OracleMismatch, PoolCapExceeded,
                     PoolIncomplete)
from .homs import (ext_dim, hom_D_dim, hom_K, module_complex, shift_modules,
                   stable_hom, tau_ge_module, vertex_map)
from .silting import (Registry, SiltingObject, _assemble, _quotient_choice,
                      minimal_left_approx, minimal_right_approx)


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def to_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _sample_maps(basis: list, rng, p: int, source=None, target=None, zero: bool = False):
    """Basis maps, their sum, a seeded random combination and optionally 0."""
    out = list(basis)
    if len(basis) > 1:
        out.append(combination(basis, [1] * len(basis)))
        out.append(combination(basis, rng.integers(1, p, size=len(basis))))
    if zero and source is not None:
        out.append(ChainMap(source, target))
    return out


# ---------------------------------------------------------------------- pool


class Pool:
    """Indecomposables of the K-window, with the Λ[d-1] stalks flagged."""

    def __init__(self, alg: QuiverAlgebra, d: int, members: list, seed: int = 0):
        self.alg = alg
        self.d = d
        self.seed = seed
        self.reg = Registry(seed)
        for X in members:
            self.reg.lookup(X)
        self.members: list[ProjComplex] = self.reg.items
        lo = -d + 1
        self.lam = to_mask(i for i, X in enumerate(self.members)
                           if X.degrees == [lo] and len(X.term(lo)) == 1)
        self.K = (1 << len(self.members)) - 1
        self.D = self.K & ~self.lam

    def __len__(self):
        return len(self.members)

    def index(self, X: ProjComplex) -> int:
        i = self.reg.lookup(X, add=False)
        if i is None:
            raise PoolIncomplete(f"{X.label()} is not in the pool")
        return i

    def pieces(self, X: ProjComplex) -> int:
        """Mask of the indecomposable summands of X."""
        m = 0
        for Z in decompose(X, seed=self.seed):
            m |= 1 << self.index(Z)
        return m

    def labels(self, mask: int) -> list[str]:
        return [self.members[i].label() for i in bits(mask)]

    def stalk_mask(self, verts, k: int = 0) -> int:
        return to_mask(self.index(shift(stalk(self.alg, v), k)) for v in verts)


def window_pool(alg: QuiverAlgebra, d: int, cap: int = 40, seed: int = 0) -> Pool:
    """Closure of the shifted stalks under cones of inflations between members."""
    lo = -d + 1
    reg = Registry(seed)
    for k in range(d):
        for i in range(alg.n):
            reg.lookup(shift(stalk(alg, i), k))
    rng = np.random.default_rng(seed)
    done = set()
    while True:
        n = len(reg)
        new = False
        for a in range(n):
            for b in range(n):
                if (a, b) in done:
                    continue
                done.add((a, b))
                A, B = reg.items[a], reg.items[b]
                for f in _sample_maps(hom_K(A, B).basis, rng, alg.p):
                    C = minimize(cone(make_inflation(f, d)))
                    for Z in decompose(C, seed=seed):
                        if not Z.within(lo, 0):
                            continue
                        before = len(reg)
                        reg.lookup(Z)
                        if len(reg) > before:
                            new = True
                            if len(reg) > cap:
                                raise PoolCapExceeded(
                                    f"more than {cap} indecomposables in the window; the "
                                    "ambient is likely not locally finite (as for the "
                                    "Kronecker algebra)")
        if not new:
            break
    return Pool(alg, d, reg.items, seed)


# -------------------------------------------------------------------- tables


class Tables:
    """Pairwise Hom/Ext dimensions over a pool, filled on demand."""

    def __init__(self, pool: Pool):
        self.pool = pool
        self.d = pool.d
        self._t: dict = {}
        self._spaces: dict = {}
        self._tau: dict = {}
        n = len(pool)
        self.n = n

    def _get(self, key, fn):
        if key not in self._t:
            self._t[key] = fn()
        return self._t[key]

    def X(self, i) -> ProjComplex:
        return self.pool.members[i]

    def hom(self, i, j) -> int:
        return self._get(("hom", i, j), lambda: hom_K(self.X(i), self.X(j)).dim)

    def ext(self, i, j, k: int = 1) -> int:
        return self._get(("ext", k, i, j), lambda: ext_dim(self.X(i), self.X(j), k))

    def shom(self, i, j) -> int:
        return self._get(("shom", i, j), lambda: self.stable_space(i, j).dim)

    def tau(self, j):
        if j not in self._tau:
            self._tau[j] = tau_ge_module(self.X(j), self.d)
        return self._tau[j]

    def negext(self, i, j, k: int) -> int:
        """dim Hom_D(τX_i, Σ^{-k} τX_j)."""
        return self._get(("neg", k, i, j),
                         lambda: hom_D_dim(self.X(i), shift_modules(self.tau(j), -k)))

    def stable_space(self, i, j):
        key = ("S", i, j)
        if key not in self._spaces:
            self._spaces[key] = stable_hom(self.X(i), self.X(j), self.d)
        return self._spaces[key]

    def k_space(self, i, j):
        key = ("K", i, j)
        if key not in self._spaces:
            self._spaces[key] = hom_K(self.X(i), self.X(j))
        return self._spaces[key]

    # masks of nonvanishing --------------------------------------------
    def _masks(self, name, universe, fn):
        key = ("mask", name)
        if key not in self._t:
            out_m = {i: 0 for i in bits(universe)}
            in_m = {j: 0 for j in bits(universe)}
            for i in bits(universe):
                for j in bits(universe):
                    if fn(i, j):
                        out_m[i] |= 1 << j
                        in_m[j] |= 1 << i
            self._t[key] = (out_m, in_m)
        return self._t[key]

    def nonzero(self, kind: str):
        """(out, in) masks of pairs with a nonvanishing functor of ``kind``."""
        d = self.d
        pool = self.pool
        if kind == "shom":
            return self._masks(kind, pool.D, lambda i, j: self.shom(i, j) > 0)
        if kind == "hom":
            return self._masks(kind, pool.K, lambda i, j: self.hom(i, j) > 0)
        if kind == "ext1":
            return self._masks(kind, pool.K, lambda i, j: self.ext(i, j, 1) > 0)
        if kind == "ext2+":
            return self._masks(kind, pool.K,
                               lambda i, j: any(self.ext(i, j, k) for k in range(2, d)))
        if kind == "negext":
            return self._masks(kind, pool.D,
                               lambda i, j: any(self.negext(i, j, k) for k in range(1, d - 1)))
        if kind == "negext1":
            return self._masks(kind, pool.D,
                               lambda i, j: d > 2 and self.negext(i, j, 1) > 0)
        raise ValueError(kind)


def perp(tables: Tables, S: int, side: str, kind: str, ambient: str = "D") -> int:
    """Members annihilated by the functor against every member of S.

    ``side='right'`` gives {Y : F(s, Y) = 0}; ``side='left'`` gives {X : F(X, s) = 0}.
    ``kind`` is hom, ext1 or negext; hom means stable Hom in the D-window.
    """
    pool = tables.pool
    if kind == "hom":
        kind = "shom" if ambient == "D" else "hom"
    universe = pool.D if kind in ("shom", "negext", "negext1") else pool.K
    out_m, in_m = tables.nonzero(kind)
    acc = 0
    for i in bits(S & universe):
        acc |= out_m[i] if side == "right" else in_m[i]
    return universe & ~acc


# ---------------------------------------------------------------- pair types


@dataclass
class TorsionPair:
    T: int
    F: int
    flags: dict = field(default_factory=dict)


@dataclass
class CotorsionPair:
    X: int
    Y: int
    flags: dict = field(default_factory=dict)


def is_torsion_pair(tables: Tables, T: int, F: int) -> bool:
    return perp(tables, F, "left", "hom") == T and perp(tables, T, "right", "hom") == F


def is_cotorsion_pair(tables: Tables, X: int, Y: int) -> bool:
    return (perp(tables, Y, "left", "ext1", "K") == X
            and perp(tables, X, "right", "ext1", "K") == Y)


def _next_closure(universe: list[int], closure):
    """All closed sets of a closure operator, by Ganter's algorithm."""
    pos = {u: k for k, u in enumerate(universe)}

    def to_local(m):
        return to_mask(pos[u] for u in bits(m))

    def to_global(m):
        return to_mask(universe[k] for k in bits(m))

    n = len(universe)
    A = to_local(closure(0))
    out = [A]
    full = (1 << n) - 1
    while A != full:
        for i in reversed(range(n)):
            bit = 1 << i
            if A & bit:
                A &= ~bit
                continue
            B = to_local(closure(to_global(A | bit)))
            if (B & ~A) & (bit - 1) == 0:
                A = B
                out.append(A)
                break
        else:
            break
    return [to_global(m) for m in out]


def torsion_classes(tables: Tables) -> list[TorsionPair]:
    """Every torsion pair of the D-window, sorted by class size then mask."""
    pool = tables.pool

    def closure(S):
        return perp(tables, perp(tables, S, "right", "hom"), "left", "hom")

    Ts = _next_closure(bits(pool.D), closure)
    pairs = [TorsionPair(T, perp(tables, T, "right", "hom")) for T in Ts]
    pairs.sort(key=lambda tp: (bin(tp.T).count("1"), tp.T))
    return pairs


def cotorsion_pairs(tables: Tables) -> list[CotorsionPair]:
    """Every cotorsion pair of the K-window, sorted by |Y| then mask."""
    pool = tables.pool

    def closure(S):
        return perp(tables, perp(tables, S, "left", "ext1", "K"), "right", "ext1", "K")

    Ys = _next_closure(bits(pool.K), closure)
    pairs = [CotorsionPair(perp(tables, Y, "left", "ext1", "K"), Y) for Y in Ys]
    pairs.sort(key=lambda cp: (bin(cp.Y).count("1"), cp.Y))
    return pairs


# ----------------------------------------------------------- classification


class Classifier:
    """Predicates on pairs, with cached cone data per ordered pool pair."""

    def __init__(self, tables: Tables, seed: int = 0):
        self.tables = tables
        self.pool = tables.pool
        self.d = tables.d
        self.seed = seed
        self._cones: dict = {}

    def _rng(self, *key):
        return np.random.default_rng([self.seed, *key])

    # positive ------------------------------------------------------------
    def tau_cones(self, i: int, j: int) -> list[int]:
        """τ-images of cones of sampled stable maps X_i -> X_j (Λ[d-1] dropped)."""
        key = ("tau", i, j)
        if key not in self._cones:
            pool, p = self.pool, self.pool.alg.p
            hs = self.tables.stable_space(i, j)
            out = []
            for f in _sample_maps(hs.basis, self._rng(0, i, j), p,
                                  pool.members[i], pool.members[j], zero=True):
                C = minimize(cone(make_inflation(f, self.d)))
                out.append(pool.pieces(C) & ~pool.lam)
            self._cones[key] = out
        return self._cones[key]

    def positive_negext(self, T: int, F: int) -> bool:
        out_m, _ = self.tables.nonzero("negext")
        return all(not (out_m[t] & F) for t in bits(T))

    def positive_cones(self, T: int, F: int) -> bool:
        members = bits(T)
        return all(c & ~T == 0 for a in members for b in members for c in self.tau_cones(a, b))

    # s-torsion -------------------------------------------------------------
    def _stable_radical(self, i, j):
        hs = self.tables.stable_space(i, j)
        if i != j or not hs.dim:
            return hs.basis
        p = self.pool.alg.p
        L = hs.left_mult_matrices()
        T = np.array([[int(np.trace(fp.matmul(Li, Lj, p)) % p) for Lj in L] for Li in L],
                     dtype=np.int64)
        R = fp.nullspace(T, p)
        return [hs.element(R[:, k]) for k in range(R.shape[1])]

    def right_T_approx(self, T: int, c: int) -> ChainMap:
        """Minimal right add(T)-approximation of X_c in the stable category."""
        tabs = self.tables
        A = bits(T)
        homs = {a: tabs.stable_space(a, c) for a in A}
        parts = []
        for a in A:
            rel = []
            for b in A:
                if not homs[b].dim:
                    continue
                for g in self._stable_radical(a, b):
                    for f in homs[b].basis:
                        rel.append(homs[a].coords(compose(f, g)))
            for k in _quotient_choice(homs[a], rel):
                e = np.zeros(homs[a].dim, dtype=np.int64)
                e[k] = 1
                parts.append(homs[a].element(e))
        return _assemble(self.pool.members[c], parts, left=False)

    def _h_injective(self, f: ChainMap) -> bool:
        """Whether H^{-d+2}(f) is injective."""
        m = -self.d + 2
        A = module_complex(f.source)
        B = module_complex(f.target)
        alg = self.pool.alg
        p = alg.p
        for v in range(alg.n):
            if not A.term(m).dims[v]:
                continue
            ZA = fp.nullspace(A.diff(m)[v], p)
            h = ZA.shape[1] - fp.rank(A.diff(m - 1)[v], p)
            if not h:
                continue
            if not B.term(m).dims[v]:
                return False
            fm = vertex_map(alg, f.comp(m), f.source.term(m), f.target.term(m), v)
            BB = B.diff(m - 1)[v]
            img = fp.matmul(fm, ZA, p)
            if fp.rank(np.hstack([BB, img]), p) - fp.rank(BB, p) < h:
                return False
        return True

    def sc_witness(self, T: int, F: int):
        """First pool member without a conflation T -> C -> F, or None."""
        for c in bits(self.pool.D):
            f = self.right_T_approx(T, c)
            if not self._h_injective(f):
                return c
            C = minimize(cone(make_inflation(f, self.d)))
            if self.pool.pieces(C) & ~self.pool.lam & ~F:
                return c
        return None

    def require_s_torsion(self, T: int, F: int) -> None:
        """Raise NotSTorsionByWitness naming the first C with no conflation T -> C -> F."""
        c = self.sc_witness(T, F)
        if c is not None:
            raise NotSTorsionByWitness(self.pool.members[c].label())

    def classify_torsion(self, tp: TorsionPair) -> dict:
        T, F = tp.T, tp.F
        neg = self.positive_negext(T, F)
        cones = self.positive_cones(T, F)
        out_m, _ = self.tables.nonzero("negext1")
        sb = all(not (out_m[t] & F) for t in bits(T))
        w = self.sc_witness(T, F) if sb else None
        s = sb and w is None
        flags = {"torsion_pair": is_torsion_pair(self.tables, T, F),
                 "positive": neg, "positive_cones": cones, "s_torsion": s,
                 "Sb": sb, "Sc_witness": None if w is None else self.pool.members[w].label(),
                 # a finite pool makes every subcategory functorially finite
                 "contravariantly_finite": True, "covariantly_finite": True,
                 "functorially_finite": True}
        tp.flags = flags
        return flags

    # hereditary ---------------------------------------------------------------
    def k_cones(self, i: int, j: int) -> list[int]:
        key = ("kc", i, j)
        if key not in self._cones:
            pool, p = self.pool, self.pool.alg.p
            lo = -self.d + 1
            out = []
            for f in _sample_maps(self.tables.k_space(i, j).basis, self._rng(1, i, j), p,
                                  pool.members[i], pool.members[j], zero=True):
                C = minimize(cone(f))
                if C.within(lo, 0):
                    out.append(pool.pieces(C))
                out.append(pool.pieces(minimize(cone(make_inflation(f, self.d)))))
            self._cones[key] = out
        return self._cones[key]

    def k_cocones(self, i: int, j: int) -> list[int]:
        key = ("kcc", i, j)
        if key not in self._cones:
            pool, p = self.pool, self.pool.alg.p
            lo = -self.d + 1
            out = []
            for g in _sample_maps(self.tables.k_space(i, j).basis, self._rng(2, i, j), p,
                                  pool.members[i], pool.members[j], zero=True):
                C = minimize(shift(cone(g), -1))
                if C.within(lo, 0):
                    out.append(pool.pieces(C))
                out.append(pool.pieces(minimize(shift(cone(make_deflation(g, self.d)), -1))))
            self._cones[key] = out
        return self._cones[key]

    def hereditary_ext(self, X: int, Y: int) -> bool:
        out_m, _ = self.tables.nonzero("ext2+")
        return all(not (out_m[x] & Y) for x in bits(X))

    def hereditary_cones(self, Y: int) -> bool:
        m = bits(Y)
        return all(c & ~Y == 0 for a in m for b in m for c in self.k_cones(a, b))

    def hereditary_cocones(self, X: int) -> bool:
        m = bits(X)
        return all(c & ~X == 0 for a in m for b in m for c in self.k_cocones(a, b))

    # complete -----------------------------------------------------------------
    def _k_approx(self, c: int, A: int, left: bool) -> ChainMap:
        X = self.pool.members[c]
        members = [self.pool.members[a] for a in bits(A)]
        return minimal_left_approx(X, members) if left else minimal_right_approx(X, members)

    def complete(self, X: int, Y: int) -> tuple[bool, bool]:
        lo = -self.d + 1
        pool = self.pool
        ca = cb = True
        for c in bits(pool.K):
            f = self._k_approx(c, Y, left=True)
            C = minimize(cone(f))
            if not C.within(lo, 0):
                C = minimize(cone(make_inflation(f, self.d)))
            if pool.pieces(C) & ~X:
                ca = False
            g = self._k_approx(c, X, left=False)
            C = minimize(shift(cone(g), -1))
            if not C.within(lo, 0):
                C = minimize(shift(cone(make_deflation(g, self.d)), -1))
            if pool.pieces(C) & ~Y:
                cb = False
            if not (ca or cb):
                break
        return ca, cb

    def classify_cotorsion(self, cp: CotorsionPair) -> dict:
        X, Y = cp.X, cp.Y
        ca, cb = self.complete(X, Y)
        flags = {"cotorsion_pair": is_cotorsion_pair(self.tables, X, Y),
                 "hereditary": self.hereditary_ext(X, Y),
                 "hereditary_cones": self.hereditary_cones(Y),
                 "hereditary_cocones": self.hereditary_cocones(X),
                 "complete": ca and cb, "Ca": ca, "Cb": cb,
                 "contains_lambda_shift": (Y & self.pool.lam) == self.pool.lam}
        cp.flags = flags
        return flags


# ---------------------------------------------------------------- the maps


def phi(pool: Pool, Y: int) -> int:
    """τ^{≥-d+2} on a cotorsion class: drop the Λ[d-1] summands."""
    return Y & ~pool.lam


def psi_inv(pool: Pool, T: int) -> int:
    """Objects whose τ-image lies in T, together with add Λ[d-1]."""
    return (T & pool.D) | pool.lam


def _summand_indices(pool: Pool, M: SiltingObject) -> list[int]:
    return [pool.index(X) for X in M.summands]


def psi_prime(tables: Tables, M: SiltingObject) -> TorsionPair:
    """(U'_M, V'_M): T = {N : Hom(M, Σ^m τN) = 0 for m = 1..d-1}."""
    pool = tables.pool
    d = tables.d
    T = 0
    for n in bits(pool.D):
        if all(ext_dim(X, pool.members[n], m) == 0 for X in M.summands for m in range(1, d)):
            T |= 1 << n
    return TorsionPair(T, perp(tables, T, "right", "hom"))


def psi_prime_V(tables: Tables, M: SiltingObject) -> int:
    """Σ^{-1}V_M in the window: Hom(M, Σ^j τN) = 0 for j ≤ 0."""
    pool = tables.pool
    d = tables.d
    V = 0
    for n in bits(pool.D):
        tn = tables.tau(n)
        if all(hom_D_dim(X, shift_modules(tn, j)) == 0
               for X in M.summands for j in range(-d + 2, 1)):
            V |= 1 << n
    return V


def closure_oracle(pool: Pool, M: SiltingObject, seed: int = 0, width: int | None = None,
                   max_rounds: int = 50) -> int:
    """Extension- and summand-closure of {Σ^m M : m ≥ 0}, cut down to the window.

    The closure is computed among complexes supported in [-width+1, 0]
    (default 2d), a window closed under extensions, and then intersected
    with the pool.
    """
    d = pool.d
    width = width or 2 * d
    lo = -width + 1
    reg = Registry(seed)
    for m in range(width):
        for X in M.summands:
            Z = shift(X, m)
            if Z.within(lo, 0):
                reg.lookup(Z)
    rng = np.random.default_rng([seed, 7])
    p = pool.alg.p
    done = set()
    for _ in range(max_rounds):
        n = len(reg)
        for a in range(n):
            for b in range(n):
                if (a, b) in done:
                    continue
                done.add((a, b))
                A, B = reg.items[a], reg.items[b]
                E = hom_K(A, shift(B, 1))
                samples = _sample_maps(E.basis, rng, p)
                for i in range(E.dim):
                    for j in range(i + 1, E.dim):
                        samples.append(E.basis[i] + E.basis[j])
                for delta in samples:
                    for Z in decompose(minimize(shift(cone(delta), -1)), seed=seed):
                        reg.lookup(Z)
        if len(reg) == n:
            wlo = -d + 1
            return to_mask(pool.index(Z) for Z in reg.items if Z.within(wlo, 0))
    raise OracleMismatch("extension closure did not stabilise")


def psi(tables: Tables, M: SiltingObject, oracle: bool = True, seed: int = 0) -> CotorsionPair:
    """ψ(M) = (X'_M, Y'_M) with Y'_M = Ψ(ψ'(M).T), checked against the closure oracle."""
    pool = tables.pool
    Y = psi_inv(pool, psi_prime(tables, M).T)
    if oracle:
        Yo = closure_oracle(pool, M, seed)
        if Yo != Y:
            raise OracleMismatch(
                f"closure oracle {pool.labels(Yo)} differs from {pool.labels(Y)}")
    X = perp(tables, Y, "left", "ext1", "K")
    return CotorsionPair(X, Y)


# ------------------------------------------------------------------ lattices


@dataclass
class PosetLattice:
    elements: list  # masks
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    kind: str = "tors"
    covers: list = field(default_factory=list)

    def __len__(self):
        return len(self.elements)


def _order_meet_join(leq: np.ndarray):
    n = leq.shape[0]
    meet = -np.ones((n, n), dtype=np.int64)
    join = -np.ones((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            lower = [c for c in range(n) if leq[c, a] and leq[c, b]]
            g = [c for c in lower if all(leq[x, c] for x in lower)]
            upper = [c for c in range(n) if leq[a, c] and leq[b, c]]
            l_ = [c for c in upper if all(leq[c, x] for x in upper)]
            meet[a, b] = g[0] if len(g) == 1 else -1
            join[a, b] = l_[0] if len(l_) == 1 else -1
    return meet, join


def lattice(tables: Tables, elements: list, kind: str = "tors") -> PosetLattice:
    """Lattice of torsion classes (tors, p-tors) or cotorsion classes (cotors).

    Elements are torsion classes T for tors/p-tors and cotorsion classes Y
    for cotors.  Meets and joins use the intersection/double-perp formulas.
    """
    idx = {m: k for k, m in enumerate(elements)}
    n = len(elements)
    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for a, A in enumerate(elements):
        for b, B in enumerate(elements):
            if kind in ("tors", "p-tors"):
                Fa, Fb = perp(tables, A, "right", "hom"), perp(tables, B, "right", "hom")
                m_ = A & B
                j_ = perp(tables, Fa & Fb, "left", "hom")
            elif kind == "cotors":
                Xa = perp(tables, A, "left", "ext1", "K")
                Xb = perp(tables, B, "left", "ext1", "K")
                m_ = A & B
                j_ = perp(tables, Xa & Xb, "right", "ext1", "K")
            else:
                raise ValueError(kind)
            if m_ not in idx or j_ not in idx:
                raise NotClosed(f"{kind} meet/join of elements {a}, {b} leaves the set")
            meet[a, b] = idx[m_]
            join[a, b] = idx[j_]
    leq = np.array([[(A & ~B) == 0 for B in elements] for A in elements], dtype=bool)
    L = PosetLattice(list(elements), leq, meet, join, kind)
    L.covers = [(a, b) for a in range(n) for b in range(n)
                if a != b and leq[a, b]
                and not any(c not in (a, b) and leq[a, c] and leq[c, b] for c in range(n))]
    return L


def lattice_violations(L: PosetLattice) -> list[str]:
    """Failures of the lattice laws and of agreement with the order."""
    out = []
    n = len(L)
    M, J = L.meet, L.join
    om, oj = _order_meet_join(L.leq)
    for a in range(n):
        if M[a, a] != a or J[a, a] != a:
            out.append(f"idempotence fails at {a}")
        for b in range(n):
            if M[a, b] != M[b, a] or J[a, b] != J[b, a]:
                out.append(f"commutativity fails at {a},{b}")
            if M[a, J[a, b]] != a or J[a, M[a, b]] != a:
                out.append(f"absorption fails at {a},{b}")
            if M[a, b] != om[a, b] or J[a, b] != oj[a, b]:
                out.append(f"formula and order disagree at {a},{b}")
            for c in range(n):
                if M[a, M[b, c]] != M[M[a, b], c] or J[a, J[b, c]] != J[J[a, b], c]:
                    out.append(f"associativity fails at {a},{b},{c}")
    return out


def sublattice(L: PosetLattice, keep: list[int]) -> PosetLattice:
    """Restriction to a subset closed under the operations; NotClosed otherwise."""
    pos = {k: i for i, k in enumerate(keep)}
    n = len(keep)
    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(keep):
        for j, b in enumerate(keep):
            if L.meet[a, b] not in pos or L.join[a, b] not in pos:
                raise NotClosed("subset not closed under meet and join")
            meet[i, j] = pos[L.meet[a, b]]
            join[i, j] = pos[L.join[a, b]]
    leq = L.leq[np.ix_(keep, keep)]
    S = PosetLattice([L.elements[k] for k in keep], leq, meet, join, L.kind)
    S.covers = [(a, b) for a in range(n) for b in range(n)
                if a != b and leq[a, b]
                and not any(c not in (a, b) and leq[a, c] and leq[c, b] for c in range(n))]
    return S


def check_semidistributive(L: PosetLattice):
    """A triple (a, b, c, law) violating SD∧ or SD∨, or None."""
    n = len(L)
    M, J = L.meet, L.join
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if M[a, b] == M[a, c] and M[a, J[b, c]] != M[a, b]:
                    return (a, b, c, "meet")
                if J[a, b] == J[a, c] and J[a, M[b, c]] != J[a, b]:
                    return (a, b, c, "join")
    return None


def lattice_to_json(pool: Pool, L: PosetLattice, flags=None, witness=None) -> str:
    doc = {
        "kind": L.kind,
        "elements": [[pool.members[i].to_dict() for i in bits(m)] for m in L.elements],
        "labels": [pool.labels(m) for m in L.elements],
        "order": L.leq.astype(int).tolist(),
        "covers": [list(c) for c in L.covers],
        "meet": L.meet.tolist(),
        "join": L.join.tolist(),
        "flags": flags or [],
        "semidistributive": witness is None,
        "witness": None if witness is None else list(witness),
    }
    return json.dumps(doc, sort_keys=True, indent=1)


# ------------------------------------------------------------ verification


@dataclass
class TorsionEngine:
    """Pool, tables and every (co)torsion pair for one (Λ, d)."""

    pool: Pool
    tables: Tables
    classifier: Classifier
    tors: list
    cotors: list

    @property
    def d(self) -> int:
        return self.pool.d

    def tors_index(self, T: int) -> int | None:
        for k, tp in enumerate(self.tors):
            if tp.T == T:
                return k
        return None

    def cotors_index(self, Y: int) -> int | None:
        for k, cp in enumerate(self.cotors):
            if cp.Y == Y:
                return k
        return None

    def positive(self) -> list[TorsionPair]:
        return [tp for tp in self.tors if tp.flags["positive"]]


def build_engine(alg: QuiverAlgebra, d: int, pool_cap: int = 40, seed: int = 0,
                 classify: bool = True) -> TorsionEngine:
    pool = window_pool(alg, d, cap=pool_cap, seed=seed)
    tables = Tables(pool)
    cl = Classifier(tables, seed)
    tors = torsion_classes(tables)
    cotors = cotorsion_pairs(tables)
    if classify:
        for tp in tors:
            cl.classify_torsion(tp)
        for cp in cotors:
            cl.classify_cotorsion(cp)
    return TorsionEngine(pool, tables, cl, tors, cotors)


def check_pool_covers(engine: TorsionEngine, silt_elements) -> list[str]:
    """Every summand of every silting object must be a pool member."""
    out = []
    for M in silt_elements:
        for X in M.summands:
            try:
                engine.pool.index(X)
            except PoolIncomplete:
                out.append(f"summand {X.label()} of {M.label()} missing from the pool")
    return out


def verify_bijection(engine: TorsionEngine) -> list[str]:
    """Φ and Ψ are mutually inverse, monotone, and land in the right sets."""
    out = []
    pool = engine.pool
    Ts = {tp.T for tp in engine.tors}
    Ys = {cp.Y for cp in engine.cotors}
    for cp in engine.cotors:
        h, c = cp.flags.get("hereditary"), cp.flags.get("complete")
        if not (h and c):
            continue
        T = phi(pool, cp.Y)
        if T not in Ts:
            out.append(f"Φ({pool.labels(cp.Y)}) is not a torsion class")
        if psi_inv(pool, T) != cp.Y:
            out.append(f"ΨΦ ≠ id at {pool.labels(cp.Y)}")
    for tp in engine.tors:
        if not tp.flags.get("positive"):
            continue
        Y = psi_inv(pool, tp.T)
        if Y not in Ys:
            out.append(f"Ψ({pool.labels(tp.T)}) is not a cotorsion class")
            continue
        if phi(pool, Y) != tp.T:
            out.append(f"ΦΨ ≠ id at {pool.labels(tp.T)}")
        cp = engine.cotors[engine.cotors_index(Y)]
        if not (cp.flags.get("hereditary") and cp.flags.get("complete")):
            out.append(f"Ψ({pool.labels(tp.T)}) is not complete and hereditary")
    hc = [cp.Y for cp in engine.cotors if cp.flags.get("hereditary") and cp.flags.get("complete")]
    for A in hc:
        for B in hc:
            if (A & ~B) == 0 and (phi(pool, A) & ~phi(pool, B)) != 0:
                out.append("Φ is not monotone")
    pt = [tp.T for tp in engine.positive()]
    for A in pt:
        for B in pt:
            if (A & ~B) == 0 and (psi_inv(pool, A) & ~psi_inv(pool, B)) != 0:
                out.append("Ψ is not monotone")
    return out


def verify_characterizations(engine: TorsionEngine) -> list[str]:
    """Equivalent formulations of positive and hereditary agree; s-torsion implies positive."""
    out = []
    pool = engine.pool
    for tp in engine.tors:
        f = tp.flags
        if f["positive"] != f["positive_cones"]:
            out.append(f"positivity formulations disagree at {pool.labels(tp.T)}")
        if f["s_torsion"] and not f["positive"]:
            out.append(f"s-torsion but not positive at {pool.labels(tp.T)}")
        if not f["torsion_pair"]:
            out.append(f"not a torsion pair: {pool.labels(tp.T)}")
    for cp in engine.cotors:
        f = cp.flags
        if not (f["hereditary"] == f["hereditary_cones"] == f["hereditary_cocones"]):
            out.append(f"hereditary formulations disagree at {pool.labels(cp.Y)}")
        if not f["cotorsion_pair"]:
            out.append(f"not a cotorsion pair: {pool.labels(cp.Y)}")
    return out


def verify_triangle(engine: TorsionEngine, silt, seed: int = 0, oracle: bool = True) -> dict:
    """Check Φψ = ψ′ and the poset-isomorphism claims for a silting poset.

    Returns a report with the images and the list of violations.
    """
    pool, tables = engine.pool, engine.tables
    out = check_pool_covers(engine, silt.elements)
    if out:
        return {"violations": out, "psi": [], "psi_prime": []}
    psis, primes = [], []
    for M in silt.elements:
        tp = psi_prime(tables, M)
        try:
            cp = psi(tables, M, oracle=oracle, seed=seed)
        except OracleMismatch as e:
            out.append(f"closure oracle mismatch at {M.label()}: {e}")
            cp = psi(tables, M, oracle=False)
        psis.append(cp)
        primes.append(tp)
        if phi(pool, cp.Y) != tp.T:
            out.append(f"Φψ ≠ ψ′ at {M.label()}")
        if psi_prime_V(tables, M) != tp.F:
            out.append(f"ψ′ torsion-free class differs from its direct description at {M.label()}")
        k = engine.cotors_index(cp.Y)
        if k is None or engine.cotors[k].X != cp.X:
            out.append(f"ψ({M.label()}) is not a computed cotorsion pair")
        else:
            f = engine.cotors[k].flags
            if not (f["complete"] and f["hereditary"]):
                out.append(f"ψ({M.label()}) is not complete and hereditary")
        k = engine.tors_index(tp.T)
        if k is None or engine.tors[k].F != tp.F:
            out.append(f"ψ′({M.label()}) is not a computed torsion pair")
        else:
            f = engine.tors[k].flags
            if not (f["functorially_finite"] and f["positive"] and f["s_torsion"]):
                out.append(f"ψ′({M.label()}) is not functorially finite, positive and s-torsion")
    n = len(silt.elements)
    if len({cp.Y for cp in psis}) != n:
        out.append("ψ is not injective")
    if len({tp.T for tp in primes}) != n:
        out.append("ψ′ is not injective")
    for a in range(n):
        for b in range(n):
            # M ≤ N iff Y'_M ⊆ Y'_N iff U'_M ⊆ U'_N
            le = bool(silt.leq[a, b])
            if le != ((psis[a].Y & ~psis[b].Y) == 0):
                out.append(f"ψ is not an order isomorphism at {a},{b}")
            if le != ((primes[a].T & ~primes[b].T) == 0):
                out.append(f"ψ′ is not an order isomorphism at {a},{b}")
    ff_pos = {tp.T for tp in engine.tors if tp.flags["functorially_finite"] and tp.flags["positive"]}
    ff_s = {tp.T for tp in engine.tors if tp.flags["functorially_finite"] and tp.flags["s_torsion"]}
    if ff_pos != ff_s:
        out.append("functorially finite positive classes differ from functorially finite s-torsion classes")
    if ff_pos != {tp.T for tp in primes}:
        out.append("ψ′ is not onto the functorially finite positive classes")
    hc = {cp.Y for cp in engine.cotors if cp.flags["hereditary"] and cp.flags["complete"]}
    if hc != {cp.Y for cp in psis}:
        out.append("ψ is not onto the complete hereditary cotorsion pairs")
    return {"violations": out, "psi": psis, "psi_prime": primes}
