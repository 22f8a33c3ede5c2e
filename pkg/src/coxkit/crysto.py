"""Split crystallographic groups Z^n x| G0 with G0 a finite permutation group
acting through integer matrices, the affine Weyl group models of type A~n,
and the complement-swap automorphism of a split extension with abelian
kernel.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import commutant_dimension, rref
from .permgrp import PermGroup, Permutation, cayley_table
from .report import VerificationReport

__all__ = [
    "CrystGroup",
    "CrystElement",
    "AffineCoxeterModel",
    "IrreducibilityStatus",
    "CrystError",
    "NotAComplement",
    "HNotAbelian",
    "NotNormal",
    "cryst_multiply",
    "is_faithful",
    "irreducibility_status",
    "build_affine_An",
    "verify_a2_phi",
    "complement_swap",
    "ComplementSwap",
    "random_split_instance",
    "search_complement",
]


class CrystError(ValueError):
    pass


class NotAComplement(CrystError):
    pass


class HNotAbelian(CrystError):
    pass


class NotNormal(CrystError):
    pass


@dataclass(frozen=True)
class CrystElement:
    v: tuple
    g: Permutation

    def __str__(self):
        return f"({', '.join(map(str, self.v))} | {self.g})"


class CrystGroup:
    """Z^n x| G0 with rho given on the generators of G0.

    rho is checked to be a well-defined homomorphism into GL_n(Z) by
    propagating it along the Cayley graph of G0 and testing every edge.
    """

    def __init__(self, point_group: PermGroup, rho_gens, rank: int | None = None):
        mats = [np.array(m, dtype=np.int64) for m in rho_gens]
        if len(mats) != len(point_group.gens):
            raise CrystError("one matrix per point-group generator required")
        if rank is None:
            if not mats:
                raise CrystError("rank needed when the point group has no generators")
            rank = mats[0].shape[0]
        for m in mats:
            if m.shape != (rank, rank):
                raise CrystError("matrices must be rank x rank")
            if round(abs(np.linalg.det(m))) != 1:
                raise CrystError("point-group matrices must have determinant +-1")
        self.rank = rank
        self.G0 = point_group
        self.rho_gens = tuple(mats)
        self._rho_all = self._propagate()

    def _propagate(self):
        G = self.G0
        E = G.elements_array
        N, n = len(E), self.rank
        R = np.zeros((N, n, n), dtype=np.int64)
        R[0] = np.eye(n, dtype=np.int64)
        for i in range(1, N):
            R[i] = R[G._parent[i]] @ self.rho_gens[G._letter[i]]
        for s, g in enumerate(G.gens):
            kids = G.index_rows(E[:, np.array(g.images, dtype=np.intp)])
            if not np.array_equal(R[kids], R @ self.rho_gens[s]):
                raise CrystError("rho does not define a homomorphism on the point group")
        return R

    def rho(self, g: Permutation) -> np.ndarray:
        i = self.G0.index(g)
        if i < 0:
            raise CrystError(f"{g} is not in the point group")
        return self._rho_all[i]

    def identity(self) -> CrystElement:
        return CrystElement((0,) * self.rank, self.G0.identity())

    def translation(self, v) -> CrystElement:
        return CrystElement(tuple(int(x) for x in v), self.G0.identity())

    def point(self, g: Permutation) -> CrystElement:
        return CrystElement((0,) * self.rank, g)

    def mul(self, a: CrystElement, b: CrystElement) -> CrystElement:
        return cryst_multiply(self, a, b)

    def inverse(self, a: CrystElement) -> CrystElement:
        gi = a.g.inverse()
        v = -(self.rho(gi) @ np.array(a.v, dtype=np.int64))
        return CrystElement(tuple(int(x) for x in v), gi)

    def product(self, *elems) -> CrystElement:
        out = self.identity()
        for e in elems:
            out = self.mul(out, e)
        return out

    def power(self, a: CrystElement, k: int) -> CrystElement:
        base = a if k >= 0 else self.inverse(a)
        out = self.identity()
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def conj(self, a: CrystElement, by: CrystElement) -> CrystElement:
        """by * a * by^-1."""
        return self.product(by, a, self.inverse(by))

    def is_identity(self, a: CrystElement) -> bool:
        return not any(a.v) and a.g.is_identity()

    def order(self, a: CrystElement, bound: int = 1000):
        """Order of a, or None if it exceeds ``bound``."""
        p = a
        for k in range(1, bound + 1):
            if self.is_identity(p):
                return k
            p = self.mul(p, a)
        return None

    def serialize(self) -> str:
        lines = [f"rank {self.rank}"]
        for g, m in zip(self.G0.gens, self.rho_gens):
            lines.append(f"gen {g} : " + " ".join(str(int(x)) for x in m.ravel()))
        return "\n".join(lines) + "\n"


def cryst_multiply(G: CrystGroup, a: CrystElement, b: CrystElement) -> CrystElement:
    """(v, g)(w, h) = (v + rho(g) w, g h)."""
    w = G.rho(a.g) @ np.array(b.v, dtype=np.int64)
    return CrystElement(tuple(int(x + y) for x, y in zip(a.v, w)), a.g * b.g)


def is_faithful(G: CrystGroup) -> bool:
    ident = np.eye(G.rank, dtype=np.int64)
    hits = np.all(G._rho_all == ident, axis=(1, 2))
    return int(hits.sum()) == 1


@dataclass(frozen=True)
class IrreducibilityStatus:
    kind: str  # "Irreducible", "Reducible" or "Undetermined"
    witness: tuple = ()

    def __str__(self):
        if self.kind != "Reducible":
            return self.kind
        basis = "; ".join(" ".join(str(x) for x in row) for row in self.witness)
        return f"Reducible(span {basis})"


def _spin(v, mats):
    """Basis (RREF rows) of the smallest subspace containing v and stable under mats."""
    basis, _ = rref([v])
    frontier = [list(v)]
    while frontier:
        nxt = []
        for w in frontier:
            for M in mats:
                u = [sum(Fraction(M[i][j]) * w[j] for j in range(len(w))) for i in range(len(w))]
                new, _ = rref(basis + [u])
                if len(new) > len(basis):
                    basis = new
                    nxt.append(u)
        frontier = nxt
    return basis


def irreducibility_status(G: CrystGroup, max_probes: int = 200) -> IrreducibilityStatus:
    """Irreducible when the commutant is one-dimensional; Reducible when some
    probe vector spans a proper invariant subspace; Undetermined otherwise.

    Probes: the standard basis, then vectors with entries in {-1, 0, 1}
    (lexicographic order), at most ``max_probes`` in total.
    """
    n = G.rank
    mats = [m.tolist() for m in G.rho_gens]
    if not mats:
        mats = [np.eye(n, dtype=int).tolist()]
    if commutant_dimension(mats) == 1:
        return IrreducibilityStatus("Irreducible")
    probes = [[int(i == j) for j in range(n)] for i in range(n)]
    probes += [list(v) for v in itertools.product((-1, 0, 1), repeat=n) if any(v)]
    for v in probes[:max_probes]:
        W = _spin(v, mats)
        if 0 < len(W) < n:
            witness = tuple(tuple(int(x) if x.denominator == 1 else x for x in row) for row in W)
            return IrreducibilityStatus("Reducible", witness)
    return IrreducibilityStatus("Undetermined")


# ---------------------------------------------------------------------------
# affine Weyl groups of type A~n in root-lattice coordinates


@dataclass
class AffineCoxeterModel:
    n: int
    group: CrystGroup
    gens: tuple  # s_1 .. s_{n+1}; the last one is the affine reflection
    translations: tuple = ()
    highest_root: tuple = field(default=())

    def word(self, w) -> CrystElement:
        """Product of generators along 0-based indices."""
        return self.group.product(*(self.gens[i] for i in w))


def _cartan_A(n):
    C = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        C[i, i] = 2
        if i + 1 < n:
            C[i, i + 1] = C[i + 1, i] = -1
    return C


def build_affine_An(n: int) -> AffineCoxeterModel:
    """A~n as Z^n x| S_{n+1} on the A_n root lattice (simple-root basis).

    s_i (i <= n) is the simple reflection, acting on points as (i i+1); the
    last generator is the reflection in the affine hyperplane <x, theta> = 1
    for the highest root theta, i.e. (theta, s_theta) with s_theta = (1 n+1).
    For n = 2 the translations (s1 s2)(s2 s3)^2 and (s2 s3)(s3 s1)^2 are
    returned as well.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    C = _cartan_A(n)
    mats = []
    for i in range(n):
        M = np.eye(n, dtype=np.int64)
        M[i, :] -= C[i, :]
        mats.append(M)
    deg = n + 1
    perms = [Permutation.from_cycles([[i + 1, i + 2]], deg) for i in range(n)]
    S = PermGroup(perms, deg, name=f"S{deg}")
    G = CrystGroup(S, mats, rank=n)
    theta = np.ones(n, dtype=np.int64)
    s_theta = Permutation.from_cycles([[1, deg]], deg)
    # check rho(s_theta) is the reflection x -> x - <x, theta> theta
    pairing = theta @ C  # <alpha_j, theta>
    refl = np.eye(n, dtype=np.int64) - np.outer(theta, pairing)
    if not np.array_equal(G.rho(s_theta), refl):
        raise CrystError("highest-root reflection mismatch")
    gens = tuple(G.point(p) for p in perms) + (CrystElement(tuple(int(x) for x in theta), s_theta),)
    model = AffineCoxeterModel(n, G, gens, highest_root=tuple(int(x) for x in theta))
    _check_affine_relations(model)
    if n == 2:
        model.translations = (model.word([0, 1, 1, 2, 1, 2]), model.word([1, 2, 2, 0, 2, 0]))
    return model


def _check_affine_relations(model: AffineCoxeterModel):
    G, k = model.group, len(model.gens)
    for i, s in enumerate(model.gens):
        if G.order(s, 2) != 2:
            raise CrystError(f"generator {i + 1} is not an involution")
    if k == 2:
        st = G.mul(model.gens[0], model.gens[1])
        if not any(st.v) or not st.g.is_identity():
            raise CrystError("s1 s2 should be a nonzero translation")
        return
    for i in range(k):
        for j in range(i + 1, k):
            m = 3 if (j - i == 1 or (i == 0 and j == k - 1)) else 2
            if G.order(G.mul(model.gens[i], model.gens[j]), m) != m:
                raise CrystError(f"(s{i + 1} s{j + 1}) should have order {m}")


# ---------------------------------------------------------------------------
# the A~2 endomorphism


def verify_a2_phi(translation_bound: int = 3) -> VerificationReport:
    """Checks on phi: s1 -> s1, s2 -> s2, s3 -> g s3 g^-1 with g = (s3 s1 s2)^2."""
    rep = VerificationReport("a2tilde")
    M = build_affine_An(2)
    G = M.group
    s1, s2, s3 = M.gens
    t1, t2 = M.translations
    g = M.word([2, 0, 1] * 2)
    h = M.word([2, 1, 0] * 2)
    phi_s3 = G.conj(s3, g)
    images = (s1, s2, phi_s3)

    def phi_word(w):
        return G.product(*(images[i] for i in w))

    rep.add("t1, t2 are translations", t1.g.is_identity() and t2.g.is_identity(),
            f"t1 = {t1}, t2 = {t2}")
    rep.add("t1 t2 = t2 t1 and the lattice <t1, t2> has rank 2",
            G.mul(t1, t2) == G.mul(t2, t1) and round(abs(np.linalg.det(np.array([t1.v, t2.v])))) != 0)
    o13 = G.order(phi_word([0, 2]), 100)
    o23 = G.order(phi_word([1, 2]), 100)
    rep.add("phi(s1 s3) has order 3", o13 == 3, f"order {o13}")
    rep.add("phi(s2 s3) has order 3", o23 == 3, f"order {o23}")
    rep.add("phi(s3) is an involution", G.order(phi_s3, 2) == 2)
    rep.add("g commutes with s1", G.mul(g, s1) == G.mul(s1, g), f"g = {g}")
    h_s1 = G.mul(h, s1) == G.mul(s1, h)
    rep.add("h commutes with s2", G.mul(h, s2) == G.mul(s2, h),
            f"h = {h}; h commutes with s1: {'yes' if h_s1 else 'no'}")
    pt1 = phi_word([0, 1, 1, 2, 1, 2])
    pt2 = phi_word([1, 2, 2, 0, 2, 0])
    rep.add("phi(t1) = t1^4", pt1 == G.power(t1, 4), f"phi(t1) = {pt1}")
    rep.add("phi(t2) = t2^4", pt2 == G.power(t2, 4), f"phi(t2) = {pt2}")
    # bounded evidence that s3 is not in the image: write x = t1^a t2^b w with
    # w in <s1, s2> (the whole point group); then phi(x) = phi(t1)^a phi(t2)^b w.
    S = G.G0
    words = [S.word_of(i) for i in range(S.order())]
    hit = None
    B = translation_bound
    for a in range(-B, B + 1):
        for b in range(-B, B + 1):
            base = G.product(G.power(pt1, a), G.power(pt2, b))
            for w in words:
                if G.mul(base, phi_word(w)) == s3:
                    hit = (a, b, w)
    rep.add(f"s3 is not phi(t1^a t2^b w) for |a|, |b| <= {B}, w in <s1, s2>", hit is None,
            "bounded search only" if hit is None else f"preimage found: {hit}")
    return rep


# ---------------------------------------------------------------------------
# complement swap


@dataclass(frozen=True)
class ComplementSwap:
    """Automorphism h k -> h k' of G = H K = H K' (k = h'' k' with h'' in H)."""

    G: PermGroup
    mapping: np.ndarray  # element index -> element index

    def __call__(self, g: Permutation) -> Permutation:
        i = self.G.index(g)
        if i < 0:
            raise CrystError(f"{g} is not in the group")
        return self.G.element(int(self.mapping[i]))


def _subgroup_mask(G: PermGroup, S: PermGroup) -> np.ndarray:
    return G.index_rows(S.elements_array) if S.order() else np.zeros(0, dtype=np.intp)


def complement_swap(G: PermGroup, H: PermGroup, K: PermGroup, K2: PermGroup,
                    table: np.ndarray | None = None) -> ComplementSwap:
    if not H.is_abelian():
        raise HNotAbelian("the normal subgroup H must be abelian")
    E = G.elements_array
    for h in H.gens:
        if h not in G:
            raise CrystError("H is not contained in G")
        for g in G.gens:
            if h.conj(g) not in H:
                raise NotNormal("H is not normal in G")
    hidx = _subgroup_mask(G, H)
    N = len(E)
    in_H = np.zeros(N, dtype=bool)
    in_H[hidx] = True
    T = cayley_table(G) if table is None else table
    inv = np.argmin(T, axis=1)  # column of the identity (index 0) in each row
    kidx = {}
    for name, Kx in (("K", K), ("K2", K2)):
        ki = _subgroup_mask(G, Kx)
        if (ki < 0).any():
            raise NotAComplement(f"{name} is not contained in G")
        if H.order() * Kx.order() != N or in_H[ki].sum() != 1:
            raise NotAComplement(f"{name} is not a complement of H")
        kidx[name] = ki
    # factor every g as h k with k in K: h = g k^-1
    K_of = np.full(N, -1)
    H_of = np.full(N, -1)
    for k in kidx["K"]:
        for h in hidx:
            g = T[h, k]
            K_of[g], H_of[g] = k, h
    if (K_of < 0).any():
        raise NotAComplement("H K does not cover G")
    # k -> the unique k' in K2 with k in H k'
    coset_rep = {}
    for k2 in kidx["K2"]:
        for h in hidx:
            coset_rep[int(T[h, k2])] = int(k2)
    mapping = np.array([T[H_of[g], coset_rep[int(K_of[g])]] for g in range(N)])
    if len(set(mapping.tolist())) != N:
        raise CrystError("complement swap is not bijective")
    if not np.array_equal(mapping[T], T[mapping][:, mapping]):
        raise CrystError("complement swap is not a homomorphism")
    if not np.array_equal(mapping[hidx], hidx):
        raise CrystError("complement swap moves H")
    return ComplementSwap(G, mapping)


def random_split_instance(rng: random.Random):
    """A random finite H x| K with H abelian, as permutation groups (G, H, K).

    Families: C_m wreath K' with K' a random subgroup of S_k permuting the
    blocks, and Z/p x| U inside AGL(1, p).
    """
    if rng.random() < 0.5:
        m = rng.choice([2, 3, 4, 5])
        k = rng.choice([2, 3]) if m <= 3 else 2
        deg = m * k
        H_gens = [Permutation.from_cycles([[b * m + i + 1 for i in range(m)]], deg) for b in range(k)]
        blocks = list(range(k))
        K_gens = []
        for _ in range(rng.randint(1, 2)):
            sigma = blocks[:]
            rng.shuffle(sigma)
            img = [0] * deg
            for b in range(k):
                for i in range(m):
                    img[b * m + i] = sigma[b] * m + i
            K_gens.append(Permutation(tuple(img)))
        K_gens = [g for g in K_gens if not g.is_identity()]
    else:
        p = rng.choice([3, 5, 7, 11, 13])
        deg = p
        H_gens = [Permutation(tuple((x + 1) % p for x in range(p)))]
        units = [u for u in range(2, p)]
        u = rng.choice(units)
        K_gens = [Permutation(tuple((u * x) % p for x in range(p)))]
    G = PermGroup(H_gens + K_gens, deg, name="H x| K")
    H = PermGroup(H_gens, deg, name="H")
    K = PermGroup(K_gens, deg, name="K")
    return G, H, K


def search_complement(G: PermGroup, H: PermGroup, K: PermGroup, rng: random.Random,
                      tries: int = 200):
    """Another complement <k_i h_i> of H, preferring one different from K."""
    H_elems = H.elements()
    fallback = None
    for _ in range(tries):
        gens = [k * rng.choice(H_elems) for k in K.gens]
        K2 = PermGroup(gens, G.degree, name="K2")
        if K2.order() != K.order():
            continue
        if any(H.index(x) >= 0 and not x.is_identity() for x in K2.elements()):
            continue
        if all(x in K2 for x in K.gens):
            fallback = fallback or K2
            continue
        return K2
    return fallback or K
