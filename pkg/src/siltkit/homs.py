"""
Hom and Ext spaces.

Homs between complexes of projectives are solution spaces of the
chain-map equations modulo the image of the homotopy map, assembled as
a single F_p linear system on the free coefficients of the Λ-matrix
components.  Module complexes (Nakayama images, smart truncations) only
ever appear as targets, where Hom(P_v, M) is the vertex space M_v.
"""

from __future__ import annotations

import numpy as np

from . import fp
from .algebra import ModuleRep, QuiverAlgebra, direct_sum_modules
from .complexes import ChainMap, ProjComplex, lmul, shift
from .errors import OutOfWindow

# --------------------------------------------------------- Λ-matrix layout


def _cache(alg: QuiverAlgebra, name: str) -> dict:
    return alg.__dict__.setdefault(name, {})


def free_coords(alg: QuiverAlgebra, U, V) -> np.ndarray:
    """Flat indices of the admissible coefficients of a Λ-matrix U -> V."""
    key = (tuple(U), tuple(V))
    cache = _cache(alg, "_free_coords")
    if key not in cache:
        D = alg.dim
        idx = []
        for r, w in enumerate(V):
            for c, u in enumerate(U):
                base = (r * len(U) + c) * D
                idx.extend(base + b for b in alg.paths_between(w, u))
        cache[key] = np.array(idx, dtype=np.int64)
    return cache[key]


def _left_op(alg: QuiverAlgebra, g, s: int) -> np.ndarray:
    """Matrix of M ↦ g·M on flattened (t, s, D) arrays."""
    a, t, D = g.shape
    G = np.tensordot(g, alg.mult, axes=([2], [0]))  # r,t,b,c
    op = np.einsum("rtbg,cd->rcgtdb", G, np.eye(s, dtype=np.int64))
    return op.reshape(a * s * D, t * s * D) % alg.p


def _right_op(alg: QuiverAlgebra, h, a: int) -> np.ndarray:
    """Matrix of M ↦ M·h on flattened (a, t, D) arrays."""
    t, s, D = h.shape
    H = np.einsum("tcb,abg->tcag", h, alg.mult)
    op = np.einsum("rs,tcag->rcgsta", np.eye(a, dtype=np.int64), H)
    return op.reshape(a * s * D, a * t * D) % alg.p


# ----------------------------------------------------------------- HomSpace


class HomSpace:
    """A Hom space with an explicit quotient basis.

    Attributes:
        dim: dimension of the quotient.
        Z: rows = free coordinates, columns = basis of all cocycles.
        rel: columns spanning the relation subspace (inside span Z).
        Q: columns of Z that give a basis modulo ``rel``.
    """

    def __init__(self, source, target, p: int, Z, rel, layout=None, kind: str = "K"):
        self.source = source
        self.target = target
        self.p = p
        self.kind = kind
        self.layout = layout
        self.Z = Z
        self.rel = fp.column_basis(rel, p) if rel.shape[1] else rel
        nrel = self.rel.shape[1]
        cols = fp.independent_columns(np.hstack([self.rel, Z]), p, start=nrel)
        self.Q = Z[:, [c - nrel for c in cols]]
        self.dim = self.Q.shape[1]
        self._basis = None
        self._proj = None

    def __len__(self):
        return self.dim

    @property
    def basis(self) -> list[ChainMap]:
        if self._basis is None:
            self._basis = [self.element_from_vector(self.Q[:, j]) for j in range(self.dim)]
        return self._basis

    @property
    def cocycle_basis(self) -> list[ChainMap]:
        return [self.element_from_vector(self.Z[:, j]) for j in range(self.Z.shape[1])]

    def element_from_vector(self, vec) -> ChainMap:
        X, Y = self.source, self.target
        alg = X.alg
        comps = {}
        for k, sel, off in self.layout:
            flat = np.zeros(len(Y.term(k)) * len(X.term(k)) * alg.dim, dtype=np.int64)
            flat[sel] = vec[off:off + len(sel)]
            comps[k] = flat.reshape(len(Y.term(k)), len(X.term(k)), alg.dim)
        return ChainMap(X, Y, comps)

    def element(self, coords) -> ChainMap:
        vec = fp.matmul(self.Q, np.asarray(coords, dtype=np.int64), self.p)
        return self.element_from_vector(vec)

    def vectorize(self, f: ChainMap) -> np.ndarray:
        parts = [f.comp(k).ravel()[sel] for k, sel, off in self.layout]
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts) % self.p

    def coords_of_vector(self, v) -> np.ndarray:
        if self._proj is None:
            A = np.hstack([self.Q, self.rel])
            if A.shape[1] == 0:
                self._proj = (np.zeros(0, dtype=np.int64), np.zeros((0, 0), dtype=np.int64))
            else:
                rows = fp.independent_columns(A.T, self.p)
                self._proj = (np.array(rows), fp.inverse(A[rows], self.p))
        rows, Ainv = self._proj
        if len(rows) == 0:
            return np.zeros(0, dtype=np.int64)
        return fp.matmul(Ainv, v[rows], self.p)[: self.dim]

    def coords(self, f: ChainMap) -> np.ndarray:
        v = self.vectorize(f)
        if v.size == 0:
            return np.zeros(self.dim, dtype=np.int64)
        return self.coords_of_vector(v)

    def is_zero(self, f: ChainMap) -> bool:
        return not self.coords(f).any()

    def identity_coords(self) -> np.ndarray:
        from .complexes import identity_map
        return self.coords(identity_map(self.source))

    def left_mult_matrices(self) -> list[np.ndarray]:
        """For End spaces: L_i[:, j] = coords(b_i ∘ b_j)."""
        from .complexes import compose
        B = self.basis
        return [np.stack([self.coords(compose(bi, bj)) for bj in B], axis=1) % self.p
                for bi in B]


def _hom_system(X: ProjComplex, Y: ProjComplex):
    """Cocycle equations and homotopy image for Λ-matrix chain maps X -> Y."""
    alg = X.alg
    p = alg.p
    D = alg.dim
    layout = []
    off = 0
    index = {}
    for k in sorted(set(X.terms) & set(Y.terms)):
        sel = free_coords(alg, X.term(k), Y.term(k))
        if len(sel):
            layout.append((k, sel, off))
            index[k] = (sel, off)
            off += len(sel)
    nvar = off
    # chain equations: d_Y f^k - f^{k+1} d_X = 0 in Hom(X^k, Y^{k+1})
    blocks = []
    for k in X.degrees:
        if not Y.term(k + 1):
            continue
        nx, ny1 = len(X.term(k)), len(Y.term(k + 1))
        E = np.zeros((ny1 * nx * D, nvar), dtype=np.int64)
        used = False
        if k in index and Y.term(k):
            sel, o = index[k]
            op = _left_op(alg, Y.diff(k), nx)
            E[:, o:o + len(sel)] = op[:, sel]
            used = True
        if k + 1 in index:
            sel, o = index[k + 1]
            op = _right_op(alg, X.diff(k), ny1)
            E[:, o:o + len(sel)] = (E[:, o:o + len(sel)] - op[:, sel]) % p
            used = True
        if used:
            E = E[np.any(E, axis=1)]
            blocks.append(E)
    eqs = np.vstack(blocks) if blocks else np.zeros((0, nvar), dtype=np.int64)
    # homotopies h^k: X^k -> Y^{k-1}; f^k += d_Y h^k, f^{k-1} += h^k d_X
    hcols = []
    for k in X.degrees:
        U, V = X.term(k), Y.term(k - 1)
        if not V:
            continue
        hsel = free_coords(alg, U, V)
        if not len(hsel):
            continue
        H = np.zeros((nvar, len(hsel)), dtype=np.int64)
        if k in index:
            sel, o = index[k]
            op = _left_op(alg, Y.diff(k - 1), len(U))
            H[o:o + len(sel)] = op[np.ix_(sel, hsel)]
        if k - 1 in index:
            sel, o = index[k - 1]
            op = _right_op(alg, X.diff(k - 1), len(V))
            H[o:o + len(sel)] = (H[o:o + len(sel)] + op[np.ix_(sel, hsel)]) % p
        hcols.append(H)
    homot = np.hstack(hcols) if hcols else np.zeros((nvar, 0), dtype=np.int64)
    return layout, nvar, eqs, homot


def chain_map_basis(X: ProjComplex, Y: ProjComplex) -> list[ChainMap]:
    """Basis of all chain maps X -> Y (no homotopy quotient)."""
    layout, nvar, eqs, _ = _hom_system(X, Y)
    Z = fp.nullspace(eqs, X.alg.p) if nvar else np.zeros((0, 0), dtype=np.int64)
    hs = HomSpace(X, Y, X.alg.p, Z, np.zeros((nvar, 0), dtype=np.int64), layout)
    return hs.cocycle_basis


def hom_K(X: ProjComplex, Y: ProjComplex) -> HomSpace:
    """Hom in the homotopy category K^b(proj Λ)."""
    p = X.alg.p
    layout, nvar, eqs, homot = _hom_system(X, Y)
    Z = fp.nullspace(eqs, p) if nvar else np.zeros((0, 0), dtype=np.int64)
    return HomSpace(X, Y, p, Z, homot, layout, kind="K")


def hom_K_dim(X: ProjComplex, Y: ProjComplex) -> int:
    p = X.alg.p
    layout, nvar, eqs, homot = _hom_system(X, Y)
    if not nvar:
        return 0
    return nvar - fp.rank(eqs, p) - fp.rank(homot, p)


def ext(X: ProjComplex, Y: ProjComplex, i: int) -> HomSpace:
    """E^i(X, Y) = Hom(X, Σ^i Y)."""
    return hom_K(X, shift(Y, i))


def ext_dim(X: ProjComplex, Y: ProjComplex, i: int) -> int:
    return hom_K_dim(X, shift(Y, i))


def _factoring_vectors(X: ProjComplex, Y: ProjComplex, lo: int, layout) -> np.ndarray:
    """Chain maps X -> Y factoring through stalks P_v placed in degree lo."""
    alg = X.alg
    p = alg.p
    D = alg.dim
    nvar = sum(len(sel) for _, sel, _ in layout)
    U, V = X.term(lo), Y.term(lo)
    ent = [(sel, off) for k, sel, off in layout if k == lo]
    if not U or not V or not ent:
        return np.zeros((nvar, 0), dtype=np.int64)
    sel, off = ent[0]
    cols = []
    for v in range(alg.n):
        # g: P_v -> Y^lo with d_Y g = 0
        gsel = free_coords(alg, (v,), V)
        if not len(gsel):
            continue
        if Y.term(lo + 1):
            op = _left_op(alg, Y.diff(lo), 1)[:, gsel]
            G = fp.nullspace(op, p)
        else:
            G = np.eye(len(gsel), dtype=np.int64)
        if not G.shape[1]:
            continue
        fsel = free_coords(alg, U, (v,))
        if not len(fsel):
            continue
        for gj in range(G.shape[1]):
            g = np.zeros(len(V) * D, dtype=np.int64)
            g[gsel] = G[:, gj]
            g = g.reshape(len(V), 1, D)
            for fi in fsel:
                f = np.zeros(len(U) * D, dtype=np.int64)
                f[fi] = 1
                prod = lmul(alg, g, f.reshape(1, len(U), D)).ravel()
                vec = np.zeros(nvar, dtype=np.int64)
                vec[off:off + len(sel)] = prod[sel]
                cols.append(vec)
    if not cols:
        return np.zeros((nvar, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def stable_hom(X: ProjComplex, Y: ProjComplex, d: int) -> HomSpace:
    """hom_K(X, Y) modulo maps factoring through add Λ[d-1].

    This is Hom between the smart truncations τ^{≥-d+2} in the derived
    category of modules.
    """
    lo = -d + 1
    if not (X.within(lo, 0) and Y.within(lo, 0)):
        raise OutOfWindow("stable_hom needs both complexes in the window")
    p = X.alg.p
    layout, nvar, eqs, homot = _hom_system(X, Y)
    Z = fp.nullspace(eqs, p) if nvar else np.zeros((0, 0), dtype=np.int64)
    fac = _factoring_vectors(X, Y, lo, layout)
    rel = np.hstack([homot, fac]) if nvar else np.zeros((0, 0), dtype=np.int64)
    return HomSpace(X, Y, p, Z, rel, layout, kind="stable")


def stable_hom_dim(X: ProjComplex, Y: ProjComplex, d: int) -> int:
    lo = -d + 1
    p = X.alg.p
    layout, nvar, eqs, homot = _hom_system(X, Y)
    if not nvar:
        return 0
    fac = _factoring_vectors(X, Y, lo, layout)
    return nvar - fp.rank(eqs, p) - fp.rank(np.hstack([homot, fac]), p)


# ---------------------------------------------------------- module complexes


def zero_module(alg: QuiverAlgebra) -> ModuleRep:
    return ModuleRep(alg, [0] * alg.n, [np.zeros((0, 0), dtype=np.int64)
                                        for _ in alg.quiver.arrows])


def proj_sum_module(alg: QuiverAlgebra, verts) -> ModuleRep:
    """⊕ P_w as a representation; vertex-u basis = paths w -> u, summand by summand."""
    key = tuple(verts)
    cache = _cache(alg, "_proj_sum")
    if key not in cache:
        cache[key] = direct_sum_modules(alg, [alg._proj_cache[w] for w in verts]) \
            if verts else zero_module(alg)
    return cache[key]


def inj_sum_module(alg: QuiverAlgebra, verts) -> ModuleRep:
    key = tuple(verts)
    cache = _cache(alg, "_inj_sum")
    if key not in cache:
        cache[key] = direct_sum_modules(alg, [alg._inj_cache[w] for w in verts]) \
            if verts else zero_module(alg)
    return cache[key]


def vertex_map(alg: QuiverAlgebra, M, src, tgt, u: int) -> np.ndarray:
    """Vertex-u matrix of the module map ⊕P_src -> ⊕P_tgt given by a Λ-matrix."""
    T = np.tensordot(M, alg.mult, axes=([2], [0]))  # r,c,y,z
    rows = []
    for r, w in enumerate(tgt):
        zs = alg.paths_between(w, u)
        row = [T[r, c][np.ix_(alg.paths_between(v, u), zs)].T for c, v in enumerate(src)]
        rows.append(np.hstack(row) if row else np.zeros((len(zs), 0), dtype=np.int64))
    if not rows:
        return np.zeros((0, sum(len(alg.paths_between(v, u)) for v in src)), dtype=np.int64)
    return np.vstack(rows) % alg.p


def nakayama_vertex_map(alg: QuiverAlgebra, M, src, tgt, s: int) -> np.ndarray:
    """Vertex-s matrix of ν(M): ⊕I_src -> ⊕I_tgt; entry [w, u] = coeff of u in w·x."""
    N = np.tensordot(alg.mult, M, axes=([1], [2]))  # w,u,r,c
    rows = []
    for r, j in enumerate(tgt):
        ws = alg.paths_between(s, j)
        row = [N[np.ix_(ws, alg.paths_between(s, i))][:, :, r, c] for c, i in enumerate(src)]
        rows.append(np.hstack(row) if row else np.zeros((len(ws), 0), dtype=np.int64))
    if not rows:
        return np.zeros((0, sum(len(alg.paths_between(s, i)) for i in src)), dtype=np.int64)
    return np.vstack(rows) % alg.p


class ModuleComplex:
    """Bounded complex of modules; ``diffs[k][v]`` is the vertex-v matrix of δ^k."""

    def __init__(self, alg: QuiverAlgebra, mods, diffs=None):
        self.alg = alg
        self.mods: dict[int, ModuleRep] = {int(k): m for k, m in mods.items() if m.dim}
        self.diffs: dict[int, list[np.ndarray]] = {}
        diffs = diffs or {}
        for k in self.mods:
            if k + 1 in self.mods:
                if k in diffs:
                    self.diffs[k] = [np.asarray(x, dtype=np.int64) % alg.p for x in diffs[k]]
                else:
                    self.diffs[k] = self._zero(k)

    def _zero(self, k):
        a, b = self.term(k + 1), self.term(k)
        return [np.zeros((a.dims[v], b.dims[v]), dtype=np.int64) for v in range(self.alg.n)]

    def term(self, k: int) -> ModuleRep:
        return self.mods.get(k) or zero_module(self.alg)

    def diff(self, k: int) -> list[np.ndarray]:
        return self.diffs[k] if k in self.diffs else self._zero(k)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.mods)

    def is_zero(self) -> bool:
        return not self.mods

    def dims(self) -> dict[int, tuple[int, ...]]:
        return {k: m.dims for k, m in sorted(self.mods.items())}

    def check(self) -> bool:
        """δ² = 0 and every δ^k commutes with the arrow actions."""
        alg = self.alg
        p = alg.p
        for k, dk in self.diffs.items():
            if k + 1 in self.diffs:
                for v in range(alg.n):
                    if fp.matmul(self.diffs[k + 1][v], dk[v], p).any():
                        return False
            A, B = self.term(k), self.term(k + 1)
            for a, arr in enumerate(alg.quiver.arrows):
                lhs = fp.matmul(B.maps[a], dk[arr.src], p)
                rhs = fp.matmul(dk[arr.tgt], A.maps[a], p)
                if ((lhs - rhs) % p).any():
                    return False
        return True

    def cohomology_dims(self) -> dict[int, tuple[int, ...]]:
        p = self.alg.p
        out = {}
        for k in self.degrees:
            dims = []
            for v in range(self.alg.n):
                n = self.term(k).dims[v]
                z = n - fp.rank(self.diff(k)[v], p) if n else 0
                b = fp.rank(self.diff(k - 1)[v], p) if k - 1 in self.diffs else 0
                dims.append(z - b)
            if any(dims):
                out[k] = tuple(dims)
        return out


def module_complex(X: ProjComplex) -> ModuleComplex:
    """X viewed as a complex of modules."""
    alg = X.alg
    mods = {k: proj_sum_module(alg, v) for k, v in X.terms.items()}
    diffs = {k: [vertex_map(alg, M, X.term(k), X.term(k + 1), u) for u in range(alg.n)]
             for k, M in X.diffs.items()}
    return ModuleComplex(alg, mods, diffs)


def nakayama(X: ProjComplex) -> ModuleComplex:
    """ν X: P_i ↦ I_i degreewise, maps transported along Hom(P_i,P_j) ≅ Hom(I_i,I_j)."""
    alg = X.alg
    mods = {k: inj_sum_module(alg, v) for k, v in X.terms.items()}
    diffs = {k: [nakayama_vertex_map(alg, M, X.term(k), X.term(k + 1), s) for s in range(alg.n)]
             for k, M in X.diffs.items()}
    return ModuleComplex(alg, mods, diffs)


def shift_modules(M: ModuleComplex, k: int = 1) -> ModuleComplex:
    sign = -1 if k % 2 else 1
    return ModuleComplex(M.alg, {j - k: m for j, m in M.mods.items()},
                         {j - k: [(sign * x) % M.alg.p for x in ds] for j, ds in M.diffs.items()})


def _submodule(mod: ModuleRep, bases) -> ModuleRep:
    alg = mod.alg
    maps = []
    for a, arr in enumerate(alg.quiver.arrows):
        Bs, Bt = bases[arr.src], bases[arr.tgt]
        img = fp.matmul(mod.maps[a], Bs, alg.p) if Bs.shape[1] else \
            np.zeros((mod.dims[arr.tgt], 0), dtype=np.int64)
        if Bt.shape[1] == 0 or Bs.shape[1] == 0:
            maps.append(np.zeros((Bt.shape[1], Bs.shape[1]), dtype=np.int64))
        else:
            maps.append(fp.solve(Bt, img, alg.p))
    return ModuleRep(alg, [b.shape[1] for b in bases], maps)


def _complement(B, n: int, p: int):
    """Identity columns completing B to a basis, and the projection onto them."""
    I = np.eye(n, dtype=np.int64)
    k = B.shape[1]
    cols = fp.independent_columns(np.hstack([B, I]), p, start=k)
    C = I[:, [c - k for c in cols]]
    if n == 0:
        return C, np.zeros((0, 0), dtype=np.int64)
    full = fp.inverse(np.hstack([B, C]), p)
    return C, full[k:]


def _quotient(mod: ModuleRep, bases):
    alg = mod.alg
    p = alg.p
    comp = [_complement(bases[v], mod.dims[v], p) for v in range(alg.n)]
    maps = []
    for a, arr in enumerate(alg.quiver.arrows):
        Cs, _ = comp[arr.src]
        _, qt = comp[arr.tgt]
        maps.append(fp.matmul(qt, fp.matmul(mod.maps[a], Cs, p), p)
                    if Cs.shape[1] and qt.shape[0] else
                    np.zeros((qt.shape[0], Cs.shape[1]), dtype=np.int64))
    return ModuleRep(alg, [c[0].shape[1] for c in comp], maps), comp


def smart_truncate(M: ModuleComplex, mode: str, m: int) -> ModuleComplex:
    """τ^{≤m} (kernel in degree m) or τ^{≥m} (cokernel in degree m)."""
    alg = M.alg
    p = alg.p
    n = alg.n
    if mode in ("<=", "le"):
        mods = {k: M.mods[k] for k in M.mods if k < m}
        diffs = {k: M.diffs[k] for k in M.diffs if k < m - 1}
        if m in M.mods:
            dm = M.diff(m)
            K = [fp.nullspace(dm[v], p) if M.term(m).dims[v] else
                 np.zeros((0, 0), dtype=np.int64) for v in range(n)]
            mods[m] = _submodule(M.term(m), K)
            if m - 1 in M.mods:
                diffs[m - 1] = [fp.solve(K[v], M.diff(m - 1)[v], p) if K[v].shape[1] else
                                np.zeros((0, M.term(m - 1).dims[v]), dtype=np.int64)
                                for v in range(n)]
        return ModuleComplex(alg, mods, diffs)
    if mode in (">=", "ge"):
        mods = {k: M.mods[k] for k in M.mods if k > m}
        diffs = {k: M.diffs[k] for k in M.diffs if k > m}
        if m in M.mods:
            dprev = M.diff(m - 1)
            im = [fp.column_basis(dprev[v], p) if M.term(m).dims[v] else
                  np.zeros((0, 0), dtype=np.int64) for v in range(n)]
            Q, comp = _quotient(M.term(m), im)
            mods[m] = Q
            if m + 1 in M.mods:
                diffs[m] = [fp.matmul(M.diff(m)[v], comp[v][0], p) for v in range(n)]
        return ModuleComplex(alg, mods, diffs)
    raise ValueError(f"unknown truncation mode {mode!r}")


# ---------------------------------------------------------------- derived Hom


def _hom_D_system(P: ProjComplex, M: ModuleComplex):
    alg = P.alg
    p = alg.p
    index = {}
    off = 0
    for k in P.degrees:
        if k not in M.mods:
            continue
        dims = M.term(k).dims
        segs = []
        for v in P.term(k):
            segs.append((off, dims[v]))
            off += dims[v]
        index[k] = segs
    nvar = off
    rows = []
    for k in P.degrees:
        if k + 1 not in M.mods:
            continue
        Mk1 = M.term(k + 1)
        for c, vc in enumerate(P.term(k)):
            E = np.zeros((Mk1.dims[vc], nvar), dtype=np.int64)
            if k in index:
                o, w = index[k][c]
                E[:, o:o + w] = M.diff(k)[vc]
            if k + 1 in index:
                dP = P.diff(k)
                for r, vr in enumerate(P.term(k + 1)):
                    o, w = index[k + 1][r]
                    E[:, o:o + w] = (E[:, o:o + w] - Mk1.element_action(dP[r, c], vr, vc)) % p
            rows.append(E)
    eqs = np.vstack(rows) if rows else np.zeros((0, nvar), dtype=np.int64)
    hcols = []
    for k in P.degrees:
        if k - 1 not in M.mods:
            continue
        Mk = M.term(k - 1)
        for c, vc in enumerate(P.term(k)):
            H = np.zeros((nvar, Mk.dims[vc]), dtype=np.int64)
            if k in index:
                o, w = index[k][c]
                H[o:o + w] = M.diff(k - 1)[vc]
            if k - 1 in index:
                dP = P.diff(k - 1)
                for c2, v2 in enumerate(P.term(k - 1)):
                    o, w = index[k - 1][c2]
                    H[o:o + w] = (H[o:o + w] + Mk.element_action(dP[c, c2], vc, v2)) % p
            hcols.append(H)
    homot = np.hstack(hcols) if hcols else np.zeros((nvar, 0), dtype=np.int64)
    return nvar, eqs, homot


def hom_D(P: ProjComplex, M: ModuleComplex) -> HomSpace:
    """Hom in D^b(mod Λ) from a bounded complex of projectives to a module complex."""
    p = P.alg.p
    nvar, eqs, homot = _hom_D_system(P, M)
    Z = fp.nullspace(eqs, p) if nvar else np.zeros((0, 0), dtype=np.int64)
    return HomSpace(P, M, p, Z, homot, None, kind="D")


def hom_D_dim(P: ProjComplex, M: ModuleComplex) -> int:
    p = P.alg.p
    nvar, eqs, homot = _hom_D_system(P, M)
    if not nvar:
        return 0
    return nvar - fp.rank(eqs, p) - fp.rank(homot, p)


# ----------------------------------------------------------------- resolution


def resolve_down(Y: ProjComplex, start: int, lo: int) -> ProjComplex:
    """Projective model of τ^{≥start+1} Y, hard-truncated below ``lo``.

    Keeps Y in degrees ≥ start and replaces everything below by a minimal
    projective resolution of ker(δ^start), stopping at degree ``lo``.
    """
    alg = Y.alg
    p = alg.p
    terms = {k: v for k, v in Y.terms.items() if k >= start}
    diffs = {k: M for k, M in Y.diffs.items() if k >= start}
    k = start
    while k > lo and terms.get(k):
        src = terms[k]
        mod = proj_sum_module(alg, src)
        if terms.get(k + 1):
            K = [fp.nullspace(vertex_map(alg, diffs[k], src, terms[k + 1], u), p)
                 for u in range(alg.n)]
        else:
            K = [np.eye(mod.dims[u], dtype=np.int64) for u in range(alg.n)]
        gens = []
        for v in range(alg.n):
            rad = [fp.matmul(mod.maps[a], K[arr.src], p)
                   for a, arr in enumerate(alg.quiver.arrows) if arr.tgt == v and K[arr.src].shape[1]]
            R = np.hstack(rad) if rad else np.zeros((mod.dims[v], 0), dtype=np.int64)
            if not K[v].shape[1]:
                continue
            cols = fp.independent_columns(np.hstack([R, K[v]]), p, start=R.shape[1])
            for c in cols:
                gens.append((v, K[v][:, c - R.shape[1]]))
        if not gens:
            break
        new = tuple(v for v, _ in gens)
        M = np.zeros((len(src), len(new), alg.dim), dtype=np.int64)
        for j, (v, vec) in enumerate(gens):
            o = 0
            for r, w in enumerate(src):
                bs = alg.paths_between(w, v)
                M[r, j, bs] = vec[o:o + len(bs)]
                o += len(bs)
        terms[k - 1] = new
        diffs[k - 1] = M % p
        k -= 1
    return ProjComplex(alg, terms, diffs)


def tau_ge_module(Y: ProjComplex, d: int) -> ModuleComplex:
    """τ^{≥-d+2} of a window complex, as a module complex."""
    return smart_truncate(module_complex(Y), ">=", -d + 2)


def duality_defect(X: ProjComplex, Y: ProjComplex, d: int) -> int:
    """dim E(X, Y) - dim Hom_D(τ^{≥-d+2}Y, Σ^{-1} τ^{≤-1} νX); zero by Serre duality."""
    lo = -d + 1
    if not (X.within(lo, 0) and Y.within(lo, 0)):
        raise OutOfWindow("duality_defect needs window complexes")
    lhs = ext_dim(X, Y, 1)
    src = resolve_down(Y, -d + 1, -2 * d + 2)
    tgt = shift_modules(smart_truncate(nakayama(X), "<=", -1), -1)
    return lhs - hom_D_dim(src, tgt)


def happel_defect(X: ProjComplex, Y: ProjComplex) -> int:
    """dim hom_K(X, Y) - dim hom_D(Y, νX)."""
    return hom_K_dim(X, Y) - hom_D_dim(Y, nakayama(X))


def euler_form(X: ProjComplex, Y: ProjComplex) -> int:
    """Σ_i (-1)^i dim E^i(X, Y) over the finitely many possibly nonzero i."""
    if X.is_zero() or Y.is_zero():
        return 0
    tot = 0
    for i in range(Y.lo - X.hi - 1, Y.hi - X.lo + 2):
        tot += (-1) ** (i % 2) * ext_dim(X, Y, i)
    return tot


def cartan_pairing(alg: QuiverAlgebra, a, b) -> int:
    """<[X], [Y]> = Σ a_i b_j dim Hom(P_i, P_j)."""
    C = alg.cartan_matrix()
    return int(np.asarray(a) @ C @ np.asarray(b))
