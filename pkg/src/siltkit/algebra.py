"""
Bound quiver algebras kQ/I over F_p.

Conventions.  Paths are written left to right: ``a.b`` means first ``a``
then ``b``, so ``e_s . p . e_t = p`` for a path ``p`` from ``s`` to ``t``.
Modules are right modules and ``P_i = e_i Λ``.  A map ``P_i -> P_j`` is
left multiplication by an element of ``e_j Λ e_i`` (paths from ``j`` to
``i``), and composing ``x: P_i -> P_j`` with ``y: P_j -> P_k`` gives the
product ``y * x``.  For the quiver 1 -> 2 this makes rad P_1 = P_2.

Vertices are numbered 1..n in spec files and 0..n-1 in the API.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import fp
from .errors import NotAdmissible, NotFiniteDimensional


@dataclass(frozen=True)
class Arrow:
    name: str
    src: int
    tgt: int


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise NotAdmissible("arrow names must be distinct")
        for a in self.arrows:
            if not (0 <= a.src < self.n and 0 <= a.tgt < self.n):
                raise NotAdmissible(f"arrow {a.name} has an unknown endpoint")


@dataclass(frozen=True)
class Path:
    start: int
    end: int
    arrows: tuple[int, ...] = ()

    def __len__(self):
        return len(self.arrows)


@dataclass
class AlgebraSpec:
    """Parsed contents of an AlgebraSpec text file."""

    p: int = fp.DEFAULT_PRIME
    n: int = 0
    arrows: list[tuple[str, int, int]] = field(default_factory=list)
    # each relation is a list of (coefficient, tuple of arrow names)
    relations: list[list[tuple[int, tuple[str, ...]]]] = field(default_factory=list)
    nilpotency: int | None = None
    d: int | None = None


_TERM = re.compile(r"^(?:([+-]?\d*)\s*\*)?\s*([+-])?\s*([A-Za-z_][\w]*(?:\.[A-Za-z_][\w]*)*)$")


def _parse_relation(text: str) -> list[tuple[int, tuple[str, ...]]]:
    text = re.sub(r"(?<=[\w\s])-\s*", "+ -", text.strip())
    terms = []
    for raw in text.split("+"):
        raw = raw.strip()
        if not raw:
            continue
        m = _TERM.match(raw.replace(" ", ""))
        if m is None:
            raise NotAdmissible(f"cannot parse relation term {raw!r}")
        coef_s, sign, path = m.groups()
        if coef_s in (None, "", "+"):
            coef = 1
        elif coef_s == "-":
            coef = -1
        else:
            coef = int(coef_s)
        if sign == "-":
            coef = -coef
        terms.append((coef, tuple(path.split("."))))
    if not terms:
        raise NotAdmissible("empty relation")
    return terms


def parse_spec(text: str) -> AlgebraSpec:
    spec = AlgebraSpec()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "field":
                spec.p = int(rest)
            elif key == "vertices":
                spec.n = int(rest)
            elif key == "arrow":
                name, s, t = rest.split()
                spec.arrows.append((name, int(s), int(t)))
            elif key == "relation":
                spec.relations.append(_parse_relation(rest))
            elif key == "nilpotency":
                spec.nilpotency = int(rest)
            elif key == "d":
                spec.d = int(rest)
            else:
                raise NotAdmissible(f"line {lineno}: unknown keyword {key!r}")
        except ValueError as exc:
            if isinstance(exc, NotAdmissible):
                raise
            raise NotAdmissible(f"line {lineno}: {exc}") from exc
    if spec.n <= 0:
        raise NotAdmissible("spec must declare vertices >= 1")
    if not fp.is_prime(spec.p):
        raise NotAdmissible(f"field size {spec.p} is not prime")
    return spec


def load_spec(path) -> AlgebraSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


class ModuleRep:
    """A finite-dimensional right module, stored as a quiver representation.

    ``dims[v]`` is the dimension at vertex v and ``maps[k]`` is the matrix
    of arrow k, of shape (dims[tgt], dims[src]); a vector m at the source
    is sent to m * arrow.
    """

    def __init__(self, alg: "QuiverAlgebra", dims, maps):
        self.alg = alg
        self.dims = tuple(int(x) for x in dims)
        self.maps = tuple(np.asarray(m, dtype=np.int64) % alg.p for m in maps)
        self._act: dict[int, np.ndarray] = {}

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def action(self, b: int) -> np.ndarray:
        """Matrix of right multiplication by basis path ``b``."""
        if b not in self._act:
            alg = self.alg
            path = alg.basis[b]
            M = np.eye(self.dims[path.start], dtype=np.int64)
            for a in path.arrows:
                M = fp.matmul(self.maps[a], M, alg.p)
            self._act[b] = M
        return self._act[b]

    def element_action(self, x, s: int, t: int) -> np.ndarray:
        """Action of the (s, t)-component of element ``x``: V_s -> V_t."""
        alg = self.alg
        M = np.zeros((self.dims[t], self.dims[s]), dtype=np.int64)
        for b in alg.paths_between(s, t):
            if x[b]:
                M = (M + x[b] * self.action(b)) % alg.p
        return M

    def __repr__(self):
        return f"ModuleRep(dims={self.dims})"


def direct_sum_modules(alg: "QuiverAlgebra", mods) -> ModuleRep:
    dims = [sum(m.dims[v] for m in mods) for v in range(alg.n)]
    maps = []
    for k, arr in enumerate(alg.quiver.arrows):
        M = np.zeros((dims[arr.tgt], dims[arr.src]), dtype=np.int64)
        r = c = 0
        for m in mods:
            M[r:r + m.dims[arr.tgt], c:c + m.dims[arr.src]] = m.maps[k]
            r += m.dims[arr.tgt]
            c += m.dims[arr.src]
        maps.append(M)
    return ModuleRep(alg, dims, maps)


class QuiverAlgebra:
    """Λ = kQ/I with a path basis and structure constants.

    Attributes:
        basis: list of Path, sorted length-lexicographically on arrow names;
            the first n entries are the idempotents e_1..e_n.
        mult: int64 array (D, D, D); basis[a]*basis[b] = sum_c mult[a,b,c] basis[c].
    """

    def __init__(self, quiver: Quiver, relations, p: int = fp.DEFAULT_PRIME,
                 nilpotency: int | None = None):
        if not fp.is_prime(p):
            raise NotAdmissible(f"{p} is not prime")
        self.quiver = quiver
        self.p = p
        self.n = quiver.n
        self.relations = [list(r) for r in relations]
        self._validate_relations()
        self.nilpotency = self._nilpotency_bound(nilpotency)
        self._build()

    # construction -----------------------------------------------------
    @classmethod
    def from_spec(cls, spec: AlgebraSpec) -> "QuiverAlgebra":
        arrows = tuple(Arrow(name, s - 1, t - 1) for name, s, t in spec.arrows)
        quiver = Quiver(spec.n, arrows)
        index = {a.name: k for k, a in enumerate(arrows)}
        rels = []
        for rel in spec.relations:
            terms = []
            for coef, names in rel:
                try:
                    terms.append((coef, tuple(index[x] for x in names)))
                except KeyError as exc:
                    raise NotAdmissible(f"unknown arrow {exc.args[0]!r} in relation") from None
            rels.append(terms)
        return cls(quiver, rels, spec.p, spec.nilpotency)

    def _validate_relations(self):
        arrows = self.quiver.arrows
        cleaned = []
        for rel in self.relations:
            ends = set()
            terms = []
            for coef, word in rel:
                if len(word) < 2:
                    raise NotAdmissible("relations must only involve paths of length >= 2")
                for a, b in zip(word, word[1:]):
                    if arrows[a].tgt != arrows[b].src:
                        raise NotAdmissible("relation term is not a path")
                ends.add((arrows[word[0]].src, arrows[word[-1]].tgt))
                if coef % self.p:
                    terms.append((coef % self.p, tuple(word)))
            if len(ends) > 1:
                raise NotAdmissible("relation terms are not parallel")
            if terms:
                cleaned.append(terms)
        self.relations = cleaned

    def _monomial(self) -> bool:
        return all(len(r) == 1 for r in self.relations)

    def _nilpotency_bound(self, given):
        if given is not None:
            if given < 2:
                raise NotAdmissible("nilpotency bound must be at least 2")
            return given
        if not self._monomial():
            raise NotFiniteDimensional("a nilpotency bound is required for non-monomial relations")
        zero = {w for r in self.relations for _, w in r}
        rlen = max((len(w) for w in zero), default=1)
        na = len(self.quiver.arrows)
        # a nonzero path longer than the number of states of the
        # "last rlen-1 arrows" automaton can be pumped forever
        limit = max(na, 1) ** max(rlen - 1, 1) + rlen + 1
        longest = 0
        frontier = [(a,) for a in range(na)]
        length = 1
        while frontier:
            longest = length
            if length > limit:
                raise NotFiniteDimensional("monomial relations leave an infinite path")
            nxt = []
            for w in frontier:
                for a in range(na):
                    if self.quiver.arrows[w[-1]].tgt != self.quiver.arrows[a].src:
                        continue
                    v = w + (a,)
                    if any(v[-len(z):] == z for z in zero if len(z) <= len(v)):
                        continue
                    nxt.append(v)
            frontier = nxt
            length += 1
        return longest + 1 if na else 1

    def _paths_upto(self, L: int) -> list[Path]:
        arrows = self.quiver.arrows
        out = [Path(v, v) for v in range(self.n)]
        layer = [Path(a.src, a.tgt, (k,)) for k, a in enumerate(arrows)]
        length = 1
        while layer and length <= L:
            out.extend(layer)
            nxt = []
            for q in layer:
                for k, a in enumerate(arrows):
                    if a.src == q.end:
                        nxt.append(Path(q.start, a.tgt, q.arrows + (k,)))
            layer = nxt
            length += 1
        return out

    def _key(self, q: Path):
        names = tuple(self.quiver.arrows[a].name for a in q.arrows)
        return (len(q), names, q.start, q.end)

    def _build(self):
        N = self.nilpotency
        p = self.p
        arrows = self.quiver.arrows
        allp = sorted(self._paths_upto(N), key=self._key)
        pos = {q: i for i, q in enumerate(allp)}
        rows = []
        if self.relations:
            for rel in self.relations:
                s = arrows[rel[0][1][0]].src
                t = arrows[rel[0][1][-1]].tgt
                rl = min(len(w) for _, w in rel)
                lefts = [u for u in allp if u.end == s and len(u) + rl <= N]
                rights = [v for v in allp if v.start == t and len(v) + rl <= N]
                for u in lefts:
                    for v in rights:
                        vec = np.zeros(len(allp), dtype=np.int64)
                        for coef, w in rel:
                            word = u.arrows + w + v.arrows
                            if len(word) > N:
                                continue
                            vec[pos[Path(u.start, v.end, word)]] += coef
                        if np.any(vec % p):
                            rows.append(vec % p)
        W = np.array(rows, dtype=np.int64).reshape(len(rows), len(allp))
        # every path of length N must already vanish modulo the relations
        longN = [i for i, q in enumerate(allp) if len(q) == N]
        if longN and self.relations:
            r0 = fp.rank(W, p)
            for i in longN:
                e = np.zeros((1, len(allp)), dtype=np.int64)
                e[0, i] = 1
                if fp.rank(np.vstack([W, e]), p) != r0:
                    raise NotFiniteDimensional(
                        f"paths of length {N} do not vanish modulo the relations")
        elif longN and not self._monomial():
            raise NotFiniteDimensional(f"paths of length {N} do not vanish")
        short = [i for i, q in enumerate(allp) if len(q) < N]
        paths = [allp[i] for i in short]
        Ws = W[:, short] if W.size else np.zeros((0, len(short)), dtype=np.int64)
        # pivots on the largest terms: eliminate in descending key order
        order = list(range(len(paths)))[::-1]
        R, piv = fp.rref(Ws[:, order], p) if Ws.shape[0] else (Ws, [])
        pivot_paths = {order[c]: i for i, c in enumerate(piv)}
        basis_idx = [i for i in range(len(paths)) if i not in pivot_paths]
        self.basis: list[Path] = [paths[i] for i in basis_idx]
        D = len(self.basis)
        self.dim = D
        bpos = {paths[i]: k for k, i in enumerate(basis_idx)}
        # normal form of each short path in basis coordinates
        nf: dict[Path, np.ndarray] = {}
        col_of = {order[c]: c for c in range(len(order))}
        for i, q in enumerate(paths):
            v = np.zeros(D, dtype=np.int64)
            if i in pivot_paths:
                row = R[pivot_paths[i]]
                for k, j in enumerate(basis_idx):
                    v[k] = (-row[col_of[j]]) % p
            else:
                v[bpos[q]] = 1
            nf[q] = v
        self._nf = nf
        mult = np.zeros((D, D, D), dtype=np.int64)
        for a, x in enumerate(self.basis):
            for b, y in enumerate(self.basis):
                if x.end != y.start:
                    continue
                word = x.arrows + y.arrows
                if len(word) >= N:
                    continue
                mult[a, b] = nf[Path(x.start, y.end, word)]
        self.mult = mult
        self.index = bpos
        self.arrow_index = [bpos[Path(a.src, a.tgt, (k,))] for k, a in enumerate(arrows)]
        self._between = {}
        for s in range(self.n):
            for t in range(self.n):
                self._between[(s, t)] = [k for k, q in enumerate(self.basis)
                                         if q.start == s and q.end == t]
        self.start = np.array([q.start for q in self.basis])
        self.end = np.array([q.end for q in self.basis])

    # elements -----------------------------------------------------------
    def paths_between(self, s: int, t: int) -> list[int]:
        """Basis indices of paths from vertex s to vertex t."""
        return self._between[(s, t)]

    def name(self, b: int) -> str:
        q = self.basis[b]
        if not q.arrows:
            return f"e{q.start + 1}"
        return ".".join(self.quiver.arrows[a].name for a in q.arrows)

    def idempotent(self, v: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[v] = 1
        return e

    def one(self) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[: self.n] = 1
        return e

    def multiply(self, x, y) -> np.ndarray:
        return np.einsum("a,b,abc->c", np.asarray(x) % self.p, np.asarray(y) % self.p,
                         self.mult) % self.p

    def path_element(self, word) -> np.ndarray:
        """Element of Λ for a sequence of arrow names (or indices)."""
        arrows = self.quiver.arrows
        idx = [a if isinstance(a, int) else [x.name for x in arrows].index(a) for a in word]
        x = self.idempotent(arrows[idx[0]].src)
        for k in idx:
            x = self.multiply(x, self.basis_vector(self.arrow_index[k]))
        return x

    def basis_vector(self, b: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[b] = 1
        return e

    def is_radical(self, x) -> bool:
        return not np.any(np.asarray(x)[: self.n] % self.p)

    # projectives --------------------------------------------------------
    def hom_proj(self, i: int, j: int) -> list[int]:
        """Basis of Hom(P_i, P_j) = e_j Λ e_i, as basis indices."""
        return self.paths_between(j, i)

    def cartan_matrix(self) -> np.ndarray:
        """C[i][j] = dim Hom(P_i, P_j)."""
        return np.array([[len(self.hom_proj(i, j)) for j in range(self.n)]
                         for i in range(self.n)], dtype=np.int64)

    def projective_module(self, i: int) -> ModuleRep:
        """P_i = e_i Λ as a representation; basis = paths starting at i."""
        return self._path_module([b for b in range(self.dim) if self.basis[b].start == i],
                                 dual=False)

    def nakayama_module(self, i: int) -> ModuleRep:
        """I_i = D(Λ e_i); basis = duals of the paths ending at i."""
        return self._path_module([b for b in range(self.dim) if self.basis[b].end == i],
                                 dual=True)

    @cached_property
    def _proj_cache(self):
        return [self.projective_module(i) for i in range(self.n)]

    @cached_property
    def _inj_cache(self):
        return [self.nakayama_module(i) for i in range(self.n)]

    def _path_module(self, elems: list[int], dual: bool) -> ModuleRep:
        p = self.p
        tag = (lambda b: self.basis[b].start) if dual else (lambda b: self.basis[b].end)
        by_vertex = [[b for b in elems if tag(b) == v] for v in range(self.n)]
        local = {}
        for v in range(self.n):
            for k, b in enumerate(by_vertex[v]):
                local[b] = k
        dims = [len(x) for x in by_vertex]
        maps = []
        for k, arr in enumerate(self.quiver.arrows):
            a = self.arrow_index[k]
            M = np.zeros((dims[arr.tgt], dims[arr.src]), dtype=np.int64)
            if dual:
                # (u* . a)(y) = coefficient of u in a*y
                for y in by_vertex[arr.tgt]:
                    prod = self.mult[a, y]
                    for u in by_vertex[arr.src]:
                        M[local[y], local[u]] = prod[u]
            else:
                for x in by_vertex[arr.src]:
                    prod = self.mult[x, a]
                    for z in by_vertex[arr.tgt]:
                        M[local[z], local[x]] = prod[z]
            maps.append(M % p)
        mod = ModuleRep(self, dims, maps)
        mod.vertex_basis = by_vertex
        return mod

    def __repr__(self):
        return f"QuiverAlgebra(n={self.n}, dim={self.dim}, p={self.p})"


def build_algebra(spec: AlgebraSpec | str) -> QuiverAlgebra:
    """Build Λ from an AlgebraSpec or from spec text."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    return QuiverAlgebra.from_spec(spec)
