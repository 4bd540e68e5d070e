"""
d-term silting objects: predicates, order, approximations, mutation and
the mutation-graph enumeration of the silting poset.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
import sympy

from . import fp
from .algebra import QuiverAlgebra
from .complexes import (ChainMap, ProjComplex, compose, cone, decompose, direct_sum,
                        is_isomorphic, k0_class, minimize, shift, stalk)
from .errors import Diverged, OutOfWindow
from .homs import ext_dim, hom_K


@dataclass
class SiltingObject:
    """A basic object given by its indecomposable summands."""

    summands: tuple
    d: int
    ids: tuple = ()

    @property
    def alg(self) -> QuiverAlgebra:
        return self.summands[0].alg

    def k0_matrix(self) -> np.ndarray:
        return np.stack([k0_class(X) for X in self.summands])

    def complex(self) -> ProjComplex:
        return direct_sum(*self.summands)

    def label(self) -> str:
        return " (+) ".join(X.label() for X in self.summands)

    def key(self):
        return tuple(sorted(X.sort_key() for X in self.summands))

    def to_dict(self) -> dict:
        return {"summands": [X.to_dict() for X in self.summands],
                "labels": [X.label() for X in self.summands],
                "k0": self.k0_matrix().tolist()}


def make_object(summands, d: int) -> SiltingObject:
    summands = sorted(summands, key=lambda X: X.sort_key())
    return SiltingObject(tuple(summands), d)


def lambda_object(alg: QuiverAlgebra, d: int, k: int = 0) -> SiltingObject:
    """Σ^k Λ as a silting object."""
    return make_object([shift(stalk(alg, i), k) for i in range(alg.n)], d)


def _ext_vanish(X: ProjComplex, Y: ProjComplex, d: int) -> bool:
    return all(ext_dim(X, Y, i) == 0 for i in range(1, d))


def is_presilting(M: SiltingObject) -> bool:
    d = M.d
    if not all(X.in_window(d) for X in M.summands):
        return False
    return all(_ext_vanish(X, Y, d) for X in M.summands for Y in M.summands)


def is_basic(M: SiltingObject, seed: int = 0) -> bool:
    S = M.summands
    return not any(is_isomorphic(S[i], S[j], seed=seed)
                   for i in range(len(S)) for j in range(i + 1, len(S)))


def is_silting(M: SiltingObject) -> bool:
    """Presilting with n summands and a unimodular K₀ matrix.

    The last two conditions stand in for thick generation.
    """
    if len(M.summands) != M.alg.n or not is_presilting(M):
        return False
    return abs(sympy.Matrix(M.k0_matrix().tolist()).det()) == 1


def silt_leq(P: SiltingObject, Q: SiltingObject) -> bool:
    """P ≤ Q iff Hom(Q, Σ^i P) = 0 for i = 1..d-1."""
    return all(_ext_vanish(Y, X, P.d) for Y in Q.summands for X in P.summands)


# ------------------------------------------------------------ approximations


def radical_basis(A: ProjComplex, B: ProjComplex, same: bool) -> list[ChainMap]:
    """Basis of rad(A, B) for indecomposable A, B (``same`` when A ≅ B, A = B)."""
    hs = hom_K(A, B)
    if not same:
        return hs.basis
    p = A.alg.p
    L = hs.left_mult_matrices()
    T = np.array([[int(np.trace(fp.matmul(Li, Lj, p)) % p) for Lj in L] for Li in L],
                 dtype=np.int64)
    R = fp.nullspace(T, p)
    return [hs.element(R[:, j]) for j in range(R.shape[1])]


def _assemble(source: ProjComplex, parts, left: bool) -> ChainMap:
    """Stack maps source -> A_i (left) or glue maps A_i -> source (right)."""
    alg = source.alg
    if not parts:
        return ChainMap(source, ProjComplex(alg, {})) if left else \
            ChainMap(ProjComplex(alg, {}), source)
    other = direct_sum(*[(f.target if left else f.source) for f in parts])
    axis = 0 if left else 1
    comps = {}
    for k in source.terms:
        if k in other.terms:
            comps[k] = np.concatenate([f.comp(k) for f in parts], axis=axis)
    return ChainMap(source, other, comps) if left else ChainMap(other, source, comps)


def _quotient_choice(hs, rel_vectors) -> list[int]:
    """Coordinates of a basis of hs modulo the span of ``rel_vectors``."""
    n = hs.dim
    if n == 0:
        return []
    R = np.stack(rel_vectors, axis=1) if rel_vectors else np.zeros((n, 0), dtype=np.int64)
    cols = fp.independent_columns(np.hstack([R, np.eye(n, dtype=np.int64)]), hs.p,
                                  start=R.shape[1])
    return [c - R.shape[1] for c in cols]


def minimal_left_approx(X: ProjComplex, A: list) -> ChainMap:
    """Minimal left add(A)-approximation of X; A is a list of pairwise distinct indecomposables."""
    homs = [hom_K(X, Aj) for Aj in A]
    parts = []
    for j, Aj in enumerate(A):
        rel = []
        for k, Ak in enumerate(A):
            if not homs[k].dim:
                continue
            for g in radical_basis(Ak, Aj, same=(k == j)):
                for f in homs[k].basis:
                    rel.append(homs[j].coords(compose(g, f)))
        for c in _quotient_choice(homs[j], rel):
            e = np.zeros(homs[j].dim, dtype=np.int64)
            e[c] = 1
            parts.append(homs[j].element(e))
    return _assemble(X, parts, left=True)


def minimal_right_approx(X: ProjComplex, A: list) -> ChainMap:
    """Minimal right add(A)-approximation A_0 -> X."""
    homs = [hom_K(Aj, X) for Aj in A]
    parts = []
    for j, Aj in enumerate(A):
        rel = []
        for k, Ak in enumerate(A):
            if not homs[k].dim:
                continue
            for g in radical_basis(Aj, Ak, same=(k == j)):
                for f in homs[k].basis:
                    rel.append(homs[j].coords(compose(f, g)))
        for c in _quotient_choice(homs[j], rel):
            e = np.zeros(homs[j].dim, dtype=np.int64)
            e[c] = 1
            parts.append(homs[j].element(e))
    return _assemble(X, parts, left=False)


def _replace(M: SiltingObject, idx: int, C: ProjComplex, seed: int) -> SiltingObject:
    d = M.d
    if not C.in_window(d):
        raise OutOfWindow("mutation leaves the window")
    rest = [Y for j, Y in enumerate(M.summands) if j != idx]
    new = [Z for Z in decompose(C, seed=seed)
           if not any(is_isomorphic(Z, Y, seed=seed) for Y in rest)]
    return make_object(rest + new, d)


def left_mutate(M: SiltingObject, idx: int, seed: int = 0) -> SiltingObject:
    """Replace summand ``idx`` by the cone of its minimal left approximation."""
    X = M.summands[idx]
    rest = [Y for j, Y in enumerate(M.summands) if j != idx]
    f = minimal_left_approx(X, rest)
    return _replace(M, idx, minimize(cone(f)), seed)


def right_mutate(M: SiltingObject, idx: int, seed: int = 0) -> SiltingObject:
    """Replace summand ``idx`` by the cocone of its minimal right approximation."""
    X = M.summands[idx]
    rest = [Y for j, Y in enumerate(M.summands) if j != idx]
    g = minimal_right_approx(X, rest)
    return _replace(M, idx, minimize(shift(cone(g), -1)), seed)


# --------------------------------------------------------------- enumeration


class Registry:
    """Indecomposables up to isomorphism, with stable integer ids."""

    def __init__(self, seed: int = 0):
        self.items: list[ProjComplex] = []
        self._by_sig: dict = {}
        self.seed = seed

    def lookup(self, X: ProjComplex, add: bool = True):
        X = minimize(X)
        bucket = self._by_sig.setdefault(X.signature(), [])
        for i in bucket:
            if is_isomorphic(self.items[i], X, seed=self.seed):
                return i
        if not add:
            return None
        self.items.append(X)
        bucket.append(len(self.items) - 1)
        return len(self.items) - 1

    def __len__(self):
        return len(self.items)


@dataclass
class SiltingPoset:
    elements: list
    leq: np.ndarray
    covers: list = field(default_factory=list)
    d: int = 2

    def __len__(self):
        return len(self.elements)

    def index_of(self, M: SiltingObject, seed: int = 0):
        for i, N in enumerate(self.elements):
            if same_object(M, N, seed):
                return i
        return None

    def top(self) -> int:
        n = len(self.elements)
        return [i for i in range(n) if self.leq[:, i].all()][0]

    def bottom(self) -> int:
        n = len(self.elements)
        return [i for i in range(n) if self.leq[i, :].all()][0]


def same_object(M: SiltingObject, N: SiltingObject, seed: int = 0) -> bool:
    if len(M.summands) != len(N.summands):
        return False
    left = list(N.summands)
    for X in M.summands:
        for j, Y in enumerate(left):
            if X.signature() == Y.signature() and is_isomorphic(X, Y, seed=seed):
                del left[j]
                break
        else:
            return False
    return True


def enumerate_d_silt(alg: QuiverAlgebra, d: int, cap: int = 2000, seed: int = 0) -> SiltingPoset:
    """Closure of Λ under left mutation inside the window, with its order and covers."""
    reg = Registry(seed)
    start = lambda_object(alg, d)
    key0 = frozenset(reg.lookup(X) for X in start.summands)
    seen = {key0: start}
    queue = deque([start])
    while queue:
        M = queue.popleft()
        for idx in range(len(M.summands)):
            try:
                N = left_mutate(M, idx, seed=seed)
            except OutOfWindow:
                continue
            key = frozenset(reg.lookup(X) for X in N.summands)
            if key not in seen:
                if len(seen) >= cap:
                    raise Diverged(f"more than {cap} silting objects; likely not τ-tilting finite")
                seen[key] = N
                queue.append(N)
    objs = []
    for key, M in seen.items():
        ids = tuple(sorted(key))
        objs.append(SiltingObject(tuple(reg.items[i] for i in ids), d, ids))
    objs.sort(key=lambda M: M.key())
    # order from the table of positive extensions between registered indecomposables
    bad: dict = {}

    def ext_pos(a, b):
        if (a, b) not in bad:
            bad[(a, b)] = not _ext_vanish(reg.items[a], reg.items[b], d)
        return bad[(a, b)]

    n = len(objs)
    leq = np.zeros((n, n), dtype=bool)
    for i, P in enumerate(objs):
        for j, Q in enumerate(objs):
            leq[i, j] = not any(ext_pos(q, p) for q in Q.ids for p in P.ids)
    poset = SiltingPoset(objs, leq, [], d)
    poset.covers = hasse(poset)
    return poset


def hasse(P: SiltingPoset) -> list[tuple[int, int]]:
    """Covering pairs (lower, upper) of the order, by transitive reduction."""
    G = nx.DiGraph()
    n = len(P.elements)
    G.add_nodes_from(range(n))
    G.add_edges_from((i, j) for i in range(n) for j in range(n) if i != j and P.leq[i, j])
    return sorted(nx.transitive_reduction(G).edges())


def check_poset(P: SiltingPoset) -> list[str]:
    """Violations of the expected structure of an enumerated silting poset."""
    out = []
    L = P.leq
    n = len(P.elements)
    if not np.all(np.diag(L)):
        out.append("order not reflexive")
    for i in range(n):
        for j in range(n):
            if i != j and L[i, j] and L[j, i]:
                out.append(f"order not antisymmetric at {i},{j}")
    if np.any((L.astype(int) @ L.astype(int) > 0) & ~L):
        out.append("order not transitive")
    alg = P.elements[0].alg
    top = lambda_object(alg, P.d)
    bottom = lambda_object(alg, P.d, P.d - 1)
    maxima = [i for i in range(n) if L[:, i].all()]
    minima = [i for i in range(n) if L[i, :].all()]
    if len(maxima) != 1 or not same_object(P.elements[maxima[0]], top):
        out.append("Λ is not the unique maximum")
    if len(minima) != 1 or not same_object(P.elements[minima[0]], bottom):
        out.append("Σ^{d-1}Λ is not the unique minimum")
    for i, M in enumerate(P.elements):
        if not is_silting(M):
            out.append(f"element {i} fails the silting criterion")
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(P.covers)
    if n and not nx.is_connected(G):
        out.append("Hasse diagram is disconnected")
    return out


# -------------------------------------------------------------------- export


def to_dot(P: SiltingPoset) -> str:
    lines = ["digraph silt {", "  rankdir=BT;"]
    for i, M in enumerate(P.elements):
        lab = "\\n".join(X.label() for X in M.summands).replace('"', "'")
        lines.append(f'  n{i} [label="{lab}"];')
    for a, b in P.covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(P: SiltingPoset) -> str:
    doc = {
        "d": P.d,
        "elements": [M.to_dict() for M in P.elements],
        "order": P.leq.astype(int).tolist(),
        "covers": [list(c) for c in P.covers],
    }
    return json.dumps(doc, sort_keys=True, indent=1)
