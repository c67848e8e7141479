"""G-lattices: free Z-modules with a right action of a permutation group.

Actions are stored as one unimodular matrix per group generator; a row
vector v transforms as v * rho(g).  All the modules the pipeline needs
live here: coset permutation modules Z[G/H], the augmentation ideal, the
Chevalley module J_{G/H} (cokernel of 1 -> N_{G/H}), duals, direct sums,
induced modules, and fixed sublattices.

Maps between lattices are stored explicitly and checked for equivariance
at construction; silent transpose/side mistakes are the dominant failure
mode in this kind of code, so they fail fast instead.
"""

from __future__ import annotations

from .errors import InternalCheckError
from .intmat import IntMatrix, hstack, inverse_unimodular, kernel_basis
from .perms import (
    PermGroup, SubgroupHandle, right_transversal, _coset_index,
)


class GLattice:
    """Free Z-module of finite rank with a right action of a PermGroup."""

    __slots__ = ("group", "rank", "action", "perm_summands", "label",
                 "_inv_action", "_matrix_cache")

    def __init__(self, group, rank, action, perm_summands=None, label=None):
        action = tuple(action)
        if len(action) != len(group.generators):
            raise ValueError("need one action matrix per group generator")
        for m in action:
            if m.nrows != rank or m.ncols != rank:
                raise ValueError("action matrix has wrong shape")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "perm_summands",
                           tuple(perm_summands) if perm_summands is not None else None)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "_inv_action", [None] * len(action))
        object.__setattr__(self, "_matrix_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("GLattice is immutable; caches are internal")

    def inverse_action(self, j):
        got = self._inv_action[j]
        if got is None:
            got = inverse_unimodular(self.action[j])
            self._inv_action[j] = got
        return got

    def word_matrix(self, word):
        """rho evaluated on a word over the group's generators."""
        m = IntMatrix.identity(self.rank)
        for letter in word:
            m = m * (self.action[letter - 1] if letter > 0
                     else self.inverse_action(-letter - 1))
        return m

    def matrix_of(self, p):
        """rho(p) for any group element, via a stored generator word."""
        got = self._matrix_cache.get(p)
        if got is None:
            words = self.group.elements_with_words()
            if p not in words:
                raise ValueError("element is not in the acting group")
            got = self.word_matrix(words[p])
            self._matrix_cache[p] = got
        return got

    def same_action(self, other):
        return (self.group is other.group and self.rank == other.rank
                and self.action == other.action)

    def to_dict(self):
        return {
            "group": self.group.label,
            "rank": self.rank,
            "action": [m.tolist() for m in self.action],
        }

    def __repr__(self):
        name = self.label or "GLattice"
        return f"{name}(rank={self.rank} over {self.group.label})"


class LatticeMap:
    """Equivariant map of G-lattices; v in source maps to v * matrix."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix):
        if source.group is not target.group:
            raise ValueError("maps must stay over one group")
        if matrix.nrows != source.rank or matrix.ncols != target.rank:
            raise ValueError("map matrix has wrong shape")
        for j in range(len(source.group.generators)):
            if source.action[j] * matrix != matrix * target.action[j]:
                raise InternalCheckError(
                    f"map is not equivariant for generator {j}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("LatticeMap is immutable")

    def __repr__(self):
        return f"LatticeMap({self.source!r} -> {self.target!r})"


def trivial_lattice(G: PermGroup) -> GLattice:
    one = IntMatrix.identity(1)
    return GLattice(G, 1, [one] * len(G.generators),
                    perm_summands=((G.as_subgroup(), 1),), label="Z")


def perm_lattice(G: PermGroup, H: SubgroupHandle):
    """Z[G/H]: basis the sorted canonical right cosets, permuted by G."""
    T = right_transversal(G, H)
    d = len(T)
    hset = H.element_set()
    mats = []
    for g in G.generators:
        rows = [[0] * d for _ in range(d)]
        for i in range(d):
            rows[i][_coset_index(hset, T, T[i] * g)] = 1
        mats.append(IntMatrix(rows))
    return GLattice(G, d, mats, perm_summands=((H, 1),),
                    label=f"Z[{G.label}/{H.describe()}]")


def chevalley_module(G: PermGroup, H: SubgroupHandle) -> GLattice:
    """J_{G/H}: quotient of Z[G/H] by the norm element, rank d-1.

    Basis: the first d-1 canonical cosets; the last coset is dropped.
    A generator g sends basis row i to the row of coset sigma(i) when
    that is not the dropped one, and to the all-minus-one row otherwise.
    """
    T = right_transversal(G, H)
    d = len(T)
    if d < 2:
        raise ValueError("index must be at least 2")
    hset = H.element_set()
    mats = []
    for g in G.generators:
        rows = []
        for i in range(d - 1):
            s = _coset_index(hset, T, T[i] * g)
            if s == d - 1:
                rows.append([-1] * (d - 1))
            else:
                row = [0] * (d - 1)
                row[s] = 1
                rows.append(row)
        mats.append(IntMatrix(rows))
    return GLattice(G, d - 1, mats, label=f"J[{G.label}/{H.describe()}]")


def augmentation_ideal(G: PermGroup, H: SubgroupHandle):
    """The kernel of the augmentation Z[G/H] -> Z, with its inclusion map.

    Basis: coset_i - coset_last for i < d.  With that choice the action
    matrices coincide with those of dual(chevalley_module(G, H)).
    """
    P = perm_lattice(G, H)
    d = P.rank
    if d < 2:
        raise ValueError("index must be at least 2")
    T = right_transversal(G, H)
    hset = H.element_set()
    mats = []
    for g in G.generators:
        sigma = [_coset_index(hset, T, T[i] * g) for i in range(d)]
        drop = sigma[d - 1]
        rows = []
        for i in range(d - 1):
            row = [0] * (d - 1)
            if sigma[i] < d - 1:
                row[sigma[i]] += 1
            if drop < d - 1:
                row[drop] -= 1
            rows.append(row)
        mats.append(IntMatrix(rows))
    I = GLattice(G, d - 1, mats, label=f"I[{G.label}/{H.describe()}]")
    inclusion = [[1 if j == i else (-1 if j == d - 1 else 0) for j in range(d)]
                 for i in range(d - 1)]
    return I, LatticeMap(I, P, IntMatrix(inclusion))


def dual(L: GLattice) -> GLattice:
    """Hom(L, Z) with the contragredient action transpose(rho(g)^-1)."""
    mats = [L.inverse_action(j).transpose() for j in range(len(L.action))]
    return GLattice(L.group, L.rank, mats, perm_summands=L.perm_summands,
                    label=f"dual({L.label})" if L.label else None)


def dual_map(f: LatticeMap) -> LatticeMap:
    return LatticeMap(dual(f.target), dual(f.source), f.matrix.transpose())


def direct_sum(L1: GLattice, L2: GLattice) -> GLattice:
    if L1.group is not L2.group:
        raise ValueError("direct sum needs a common group")
    r1, r2 = L1.rank, L2.rank
    mats = []
    for a, b in zip(L1.action, L2.action):
        rows = [list(row) + [0] * r2 for row in a.data]
        rows += [[0] * r1 + list(row) for row in b.data]
        mats.append(IntMatrix(rows))
    summands = None
    if L1.perm_summands is not None and L2.perm_summands is not None:
        summands = L1.perm_summands + L2.perm_summands
    return GLattice(L1.group, r1 + r2, mats, perm_summands=summands)


def induced(L: GLattice):
    """Z[G] tensor L with the diagonal right action, plus the norm-style
    embedding sum_x (x tensor v); the embedding splits over Z."""
    G = L.group
    elems = G.elements()
    n = len(elems)
    pos = {p: i for i, p in enumerate(elems)}
    R = L.rank
    N = n * R
    mats = []
    for k, g in enumerate(G.generators):
        rho = L.action[k]
        rows = [[0] * N for _ in range(N)]
        for x_i, x in enumerate(elems):
            t = pos[x * g]
            for j in range(R):
                src = x_i * R + j
                row = rho.data[j]
                base = t * R
                out = rows[src]
                for kk in range(R):
                    out[base + kk] = row[kk]
        mats.append(IntMatrix(rows))
    I = GLattice(G, N, mats, label=f"Ind({L.label})" if L.label else None)
    emb = [[0] * N for _ in range(R)]
    for j in range(R):
        for x_i in range(n):
            emb[j][x_i * R + j] = 1
    return I, LatticeMap(L, I, IntMatrix(emb))


def fixed_sublattice(L: GLattice, S: SubgroupHandle) -> IntMatrix:
    """Saturated basis of the vectors fixed by every element of S."""
    gens = S.generators
    if not gens:
        return IntMatrix.identity(L.rank)
    ident = IntMatrix.identity(L.rank)
    blocks = [L.matrix_of(s) - ident for s in gens]
    return kernel_basis(hstack(*blocks))
