"""Cohomology of G-lattices.

H^1 is computed from a finite presentation of the acting group: a
1-cocycle is determined by its generator values, subject to one linear
condition per relator.  The cocycle rule for right modules is fixed once
and for all as

    c(uv) = c(u) * rho(v) + c(v),      c(x^-1) = -c(x) * rho(x)^-1,

so coboundaries are m |-> m * rho(x) - m.  Unknown counts scale with the
generator count rather than |G|, which is what makes the A6/A7 pipeline
feasible; a brute-force bar-complex computation exists in the test suite
as an independent oracle for small groups.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceeded, InternalCheckError, NormOneError
from .intmat import (
    AbelianInvariants, IntMatrix, _pivot_cols, _solve_hnf, hnf_basis, hstack,
    inverse_unimodular, kernel_basis, quotient_invariants, snf,
    snf_invariants, vstack,
)
from .lattices import GLattice, LatticeMap, chevalley_module, induced
from .perms import Permutation, PermGroup, cyclic_subgroup_classes

SHA_ORDER_CAP = 24


@dataclass(frozen=True)
class Presentation:
    """Finite presentation with a permutation image for each generator.

    Words are tuples of nonzero ints, +k / -k for the k-th generator and
    its inverse.   The images need not be the group's stored generators;
    they only have to generate.
    """

    ngens: int
    relators: tuple
    images: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "relators",
                           tuple(tuple(int(x) for x in w) for w in self.relators))
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.ngens:
            raise ValueError("one image per generator required")
        for w in self.relators:
            for letter in w:
                if letter == 0 or abs(letter) > self.ngens:
                    raise ValueError(f"bad letter {letter}")

    def evaluate(self, word) -> Permutation:
        if not self.images:
            raise ValueError("presentation has no generators")
        p = Permutation.identity(self.images[0].degree)
        for letter in word:
            g = self.images[abs(letter) - 1]
            p = p * (g if letter > 0 else g.inverse())
        return p


_catalog = {}
_validated = set()


def presentation_catalog(G: PermGroup) -> Presentation:
    """Catalog presentation for groups built by the perms constructors."""
    if G.kind is None:
        raise NormOneError(f"no catalog presentation for {G.label}")
    got = _catalog.get(G.kind)
    if got is None:
        got = _build_presentation(G)
        _catalog[G.kind] = got
    _ensure_valid(got, G)
    return got


def _build_presentation(G: PermGroup) -> Presentation:
    kind, param = G.kind
    if kind == "C":
        n = param
        if n == 1:
            return Presentation(0, (), (), "C1")
        return Presentation(1, ((1,) * n,), (G.generators[0],), f"C{n}")
    if kind == "C*":
        parts = [p for p in param if p > 1]
        rels = []
        for k, p in enumerate(parts):
            rels.append((k + 1,) * p)
        for k in range(len(parts)):
            for l in range(k + 1, len(parts)):
                rels.append((k + 1, l + 1, -(k + 1), -(l + 1)))
        return Presentation(len(parts), tuple(rels), G.generators, G.label)
    if kind == "D":
        n = param
        if n == 1:
            return Presentation(1, ((1, 1),), (G.generators[0],), "D1")
        rels = ((1,) * n, (2, 2), (1, 2, 1, 2))
        return Presentation(2, rels, G.generators, f"D{n}")
    if kind == "S":
        n = param
        if n == 1:
            return Presentation(0, (), (), "S1")
        images = tuple(Permutation.from_cycles([(i, i + 1)], degree=n)
                       for i in range(1, n))
        rels = []
        for i in range(1, n):
            rels.append((i, i))
        for i in range(1, n - 1):
            rels.append((i, i + 1) * 3)
        for i in range(1, n):
            for j in range(i + 2, n):
                rels.append((i, j) * 2)
        return Presentation(n - 1, tuple(rels), images, f"S{n}")
    if kind == "A":
        n = param
        if n <= 2:
            return Presentation(0, (), (), G.label)
        t1 = Permutation.from_cycles([(1, 2)], degree=n)
        images = tuple(
            t1 * Permutation.from_cycles([(i + 1, i + 2)], degree=n)
            for i in range(1, n - 1)
        )
        if n == 3:
            return Presentation(1, ((1, 1, 1),), images, "A3")
        rels = [(1, 1, 1)]
        for i in range(2, n - 1):
            rels.append((i, i))
        for i in range(1, n - 2):
            rels.append((i, i + 1) * 3)
        for i in range(1, n - 1):
            for j in range(i + 2, n - 1):
                rels.append((i, j) * 2)
        return Presentation(n - 2, tuple(rels), images, f"A{n}")
    raise NormOneError(f"no catalog presentation for kind {kind!r}")


def _ensure_valid(P: Presentation, G: PermGroup):
    """Images satisfy the relators, generate G, and the presented group
    has the right order (checked once by coset enumeration)."""
    key = (G.kind, id(P))
    if key in _validated:
        return
    for w in P.relators:
        if not P.evaluate(w).is_identity():
            raise InternalCheckError(f"catalog relator {w} fails on images")
    if P.ngens:
        span = G.elements_with_words(alphabet=P.images)
        if len(span) != G.order():
            raise InternalCheckError("presentation images do not generate")
        from .fpgroups import FpGroup, todd_coxeter
        table = todd_coxeter(FpGroup(P.ngens, P.relators), ())
        if table.coset_count != G.order():
            raise InternalCheckError(
                f"presentation of {G.label} enumerates to {table.coset_count}, "
                f"expected {G.order()}")
    _validated.add(key)


@dataclass(frozen=True)
class Cocycle:
    """A 1-cocycle given by its value (a lattice row vector) on each
    presentation generator."""

    lattice: GLattice
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values",
                           tuple(tuple(int(x) for x in v) for v in self.values))


class _H1Data:
    """Everything h1 computes, kept for restriction maps."""

    __slots__ = ("lattice", "presentation", "mats", "invs", "Z1", "B1")

    def __init__(self, lattice, presentation, mats, invs, Z1, B1):
        self.lattice = lattice
        self.presentation = presentation
        self.mats = mats
        self.invs = invs
        self.Z1 = Z1
        self.B1 = B1

    def cocycles(self):
        R = self.lattice.rank
        out = []
        for row in self.Z1.data:
            vals = tuple(row[j * R:(j + 1) * R] for j in range(len(self.mats)))
            out.append(Cocycle(self.lattice, vals))
        return out

    def value_at(self, values, word):
        """Value of the cocycle with the given generator values at the
        element word (over presentation generators)."""
        R = self.lattice.rank
        acc = [0] * R
        for letter in word:
            j = abs(letter) - 1
            if letter > 0:
                m = self.mats[j]
                acc = _row_times(acc, m)
                cv = values[j]
                acc = [a + b for a, b in zip(acc, cv)]
            else:
                cv = values[j]
                acc = [a - b for a, b in zip(acc, cv)]
                acc = _row_times(acc, self.invs[j])
        return acc


def _row_times(row, mat: IntMatrix):
    out = [0] * mat.ncols
    for i, x in enumerate(row):
        if x:
            mrow = mat.data[i]
            for j, y in enumerate(mrow):
                if y:
                    out[j] += x * y
    return out


def _relator_blocks(word, mats, invs, R):
    """Coefficient blocks B_j with c(word) = sum_j c_j * B_j.

    Built from suffix products: the letter at position k contributes
    T_k (or -rho^-1 * T_k for an inverse letter) to its generator's block,
    where T_k is rho of the suffix after position k.
    """
    s = len(mats)
    suffix = [None] * (len(word) + 1)
    suffix[len(word)] = IntMatrix.identity(R)
    for k in range(len(word) - 1, -1, -1):
        letter = word[k]
        m = mats[letter - 1] if letter > 0 else invs[-letter - 1]
        suffix[k] = m * suffix[k + 1]
    blocks = [IntMatrix.zeros(R, R) for _ in range(s)]
    for k, letter in enumerate(word):
        j = abs(letter) - 1
        contrib = suffix[k + 1] if letter > 0 else -(invs[j] * suffix[k + 1])
        blocks[j] = blocks[j] + contrib
    return blocks


def h1_data(L: GLattice, P: Presentation) -> _H1Data:
    G = L.group
    if P.ngens == 0:
        empty = IntMatrix([], ncols=0)
        return _H1Data(L, P, (), (), empty, IntMatrix([], ncols=0))
    span = G.elements_with_words(alphabet=P.images)
    if len(span) != G.order():
        raise ValueError("presentation images do not generate the acting group")
    mats = tuple(L.matrix_of(img) for img in P.images)
    invs = tuple(inverse_unimodular(m) for m in mats)
    s, R = P.ngens, L.rank
    dim = s * R
    K = IntMatrix.identity(dim)
    for w in P.relators:
        if not w or K.nrows == 0:
            continue
        B = vstack(*_relator_blocks(w, mats, invs, R))
        M = K * B
        Kn = kernel_basis(M)
        K = hnf_basis(Kn * K) if Kn.nrows else IntMatrix([], ncols=dim)
    ident = IntMatrix.identity(R)
    B1 = hstack(*[m - ident for m in mats]) if R else IntMatrix([], ncols=0)
    return _H1Data(L, P, mats, invs, K, B1)


def h1(L: GLattice, P: Presentation) -> AbelianInvariants:
    """H^1(G, L) as invariant factors, via the presentation."""
    if L.rank == 0 or P.ngens == 0:
        return AbelianInvariants(0, ())
    data = h1_data(L, P)
    try:
        inv = quotient_invariants(data.Z1, data.B1)
    except ValueError as exc:
        raise InternalCheckError(
            f"coboundaries escape the cocycle lattice over {L.group.label}: "
            f"{exc}") from exc
    if inv.free_rank:
        raise InternalCheckError(
            f"H^1 came out with free rank {inv.free_rank} over {L.group.label} "
            f"(rank {L.rank}); the action is broken")
    return inv


def _norm_matrix(rho: IntMatrix, m: int) -> IntMatrix:
    acc = IntMatrix.identity(rho.nrows)
    cur = IntMatrix.identity(rho.nrows)
    for _ in range(m - 1):
        cur = cur * rho
        acc = acc + cur
    return acc


def tate_cyclic(c: Permutation, L: GLattice):
    """(Tate H^0, H^1) of the cyclic group <c> acting on L.

    With N = 1 + rho + ... + rho^(m-1):  H^0 = fixed / image(N),
    H^1 = ker(N) / image(rho - 1).
    """
    if L.rank == 0:
        return AbelianInvariants(0, ()), AbelianInvariants(0, ())
    m = c.order()
    rho = L.matrix_of(c)
    ident = IntMatrix.identity(L.rank)
    N = _norm_matrix(rho, m)
    diff = rho - ident
    fixed = kernel_basis(diff)
    h0 = quotient_invariants(fixed, N)
    h1_ = quotient_invariants(kernel_basis(N), diff)
    return (AbelianInvariants(0, h0.torsion) if h0.free_rank == 0 else h0,
            AbelianInvariants(0, h1_.torsion) if h1_.free_rank == 0 else h1_)


def tate_minus1(S, L: GLattice) -> AbelianInvariants:
    """Tate H^-1(S, L) = ker(N_S) / L*I_S.

    Computed as the torsion of L / L*I_S: over Q the module splits as
    fixed part plus ker(N_S), N_S is invertible on the fixed part, so
    ker(N_S) and L*I_S span the same subspace and the quotient is exactly
    the torsion of the coinvariants.  The augmentation ideal I_S is
    generated by s - 1 over the generators s of S, so only generator
    matrices enter.  The literal ker/image formula is kept as a test
    oracle.
    """
    gens = S.generators
    if not gens or L.rank == 0:
        return AbelianInvariants(0, ())
    ident = IntMatrix.identity(L.rank)
    stacked = vstack(*[L.matrix_of(s) - ident for s in gens])
    d = snf_invariants(stacked)
    return AbelianInvariants(0, tuple(x for x in d if x > 1))


@dataclass(frozen=True)
class ShiftData:
    """0 -> L -> Ind(L) -> shifted -> 0, with explicit maps."""

    induced_lattice: GLattice
    embed: LatticeMap
    shifted: GLattice
    project: LatticeMap


def dimension_shift(L: GLattice) -> ShiftData:
    """Cokernel of the split embedding L -> Ind(L); shifts Tate degree by one."""
    I, emb = induced(L)
    R, N = L.rank, I.rank
    dec = snf(emb.matrix)
    if dec.rank != R or any(dec.D.data[i][i] != 1 for i in range(R)):
        raise InternalCheckError("induced embedding is not split")
    Vinv = inverse_unimodular(dec.V)
    proj = IntMatrix([[row[j] for j in range(R, N)] for row in dec.V.data],
                     ncols=N - R)
    wlast = IntMatrix([Vinv.data[i] for i in range(R, N)], ncols=N)
    mats = [wlast * I.action[k] * proj for k in range(len(I.action))]
    shifted = GLattice(L.group, N - R, mats,
                       label=f"shift({L.label})" if L.label else None)
    if not (emb.matrix * proj).is_zero():
        raise InternalCheckError("projection does not kill the embedded copy")
    return ShiftData(I, emb, shifted, LatticeMap(I, shifted, proj))


def _relation_lattice(Z1: IntMatrix, B1: IntMatrix) -> IntMatrix:
    """{x : x * Z1 lies in the row lattice of B1}, as rows."""
    z = Z1.nrows
    K = kernel_basis(vstack(Z1, B1))
    rows = [list(row[:z]) for row in K.data]
    return hnf_basis(IntMatrix(rows, ncols=z))


def sha2_omega(G: PermGroup, H, cap=SHA_ORDER_CAP) -> AbelianInvariants:
    """Kernel of restriction on H^2(G, J_{G/H}), computed by shifting.

    H^2(G, J) = H^1(G, J1) for the shifted module J1, and the defining
    restriction product over all g in G collapses to one factor per
    nontrivial cyclic subgroup class: Res_g factors through <g>, the
    restriction class is conjugation-invariant, and the trivial subgroup
    has no cohomology.  Small |G| only: the shifted module has rank
    (|G|-1) * rank(J).
    """
    if G.order() > cap:
        raise CapExceeded(f"|G|={G.order()} exceeds the sha2 cap {cap}")
    J = chevalley_module(G, H)
    shift = dimension_shift(J)
    J1 = shift.shifted
    P = presentation_catalog(G)
    if P.ngens == 0:
        return AbelianInvariants(0, ())
    data = h1_data(J1, P)
    z = data.Z1.nrows
    if z == 0:
        return AbelianInvariants(0, ())
    R_s = _relation_lattice(data.Z1, data.B1)
    img_words = G.elements_with_words(alphabet=P.images)
    R = J1.rank
    phi_blocks = []
    rel_blocks = []
    for cls in cyclic_subgroup_classes(G):
        m = cls.order()
        gen = next(e for e in cls.elements() if e.order() == m)
        rho = J1.matrix_of(gen)
        N = _norm_matrix(rho, m)
        Kc = kernel_basis(N)
        if Kc.nrows == 0:
            continue
        # kernel_basis returns HNF-canonical rows, so coordinates come
        # straight from back-substitution against them
        krows = [list(r) for r in Kc.data]
        pivcols = _pivot_cols(krows)

        def coords(vec):
            coef = _solve_hnf(krows, pivcols, list(vec))
            if coef is None:
                raise InternalCheckError("restricted value escapes ker(N)")
            return coef

        diff = rho - IntMatrix.identity(R)
        rel_blocks.append(IntMatrix([coords(row) for row in diff.data],
                                    ncols=Kc.nrows))
        word = img_words[gen]
        rows = []
        for row in data.Z1.data:
            values = tuple(row[j * R:(j + 1) * R] for j in range(P.ngens))
            rows.append(coords(data.value_at(values, word)))
        phi_blocks.append(IntMatrix(rows, ncols=Kc.nrows))
    if not phi_blocks:
        pre = IntMatrix.identity(z)
    else:
        phi = hstack(*phi_blocks)
        total = phi.ncols
        rel_rows = []
        offset = 0
        for blk in rel_blocks:
            for row in blk.data:
                rel_rows.append([0] * offset + list(row)
                                + [0] * (total - offset - blk.ncols))
            offset += blk.ncols
        R_T = IntMatrix(rel_rows, ncols=total)
        K = kernel_basis(vstack(phi, R_T))
        pre = hnf_basis(IntMatrix([list(row[:z]) for row in K.data], ncols=z))
    try:
        inv = quotient_invariants(pre, R_s)
    except ValueError as exc:
        raise InternalCheckError(f"coboundary relations escape: {exc}") from exc
    if inv.free_rank:
        raise InternalCheckError("sha2_omega came out infinite; action broken")
    return inv
