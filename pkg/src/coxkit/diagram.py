"""Coxeter matrices: a small text format, type classification against the
finite and affine families, special spherical subsets and the odd-subgraph
rank count for centralizers of generators.

Generators are indexed from 0 in the library. The text format and the
command line use 1-based indices.
"""
from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

INF = math.inf

__all__ = [
    "INF",
    "CoxeterMatrix",
    "DiagramError",
    "DiagramSyntaxError",
    "TypeTag",
    "ClassificationResult",
    "CentralizerRank",
    "parse_diagram",
    "classify",
    "classify_triangle",
    "special_spherical_subgroups",
    "centralizer_rank",
    "is_even",
    "finite_family",
    "affine_family",
    "affine_catalog",
    "finite_catalog",
    "triangle_matrix",
    "pretty_name",
    "format_label",
]


class DiagramError(ValueError):
    """Invalid diagram text or label data."""

    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


class DiagramSyntaxError(DiagramError):
    pass


def _label_ok(x) -> bool:
    return x == INF or (isinstance(x, int) and x >= 2)


def format_label(x) -> str:
    return "inf" if x == INF else str(x)


@dataclass(frozen=True)
class CoxeterMatrix:
    m: tuple

    def __post_init__(self):
        rows = tuple(tuple(INF if x == INF else int(x) for x in r) for r in self.m)
        n = len(rows)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise DiagramError("Coxeter matrix must be square")
            if r[i] != 1:
                raise DiagramError(f"diagonal entry {i + 1} must be 1")
            for j in range(i + 1, n):
                if r[j] != rows[j][i]:
                    raise DiagramError(f"labels at ({i + 1},{j + 1}) are not symmetric")
                if not _label_ok(r[j]):
                    raise DiagramError(f"label at ({i + 1},{j + 1}) must be >= 2 or inf")
        object.__setattr__(self, "m", rows)

    @classmethod
    def from_edges(cls, n: int, edges) -> "CoxeterMatrix":
        """Build from (i, j, label) with 0-based i, j; other pairs get 2."""
        m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        for i, j, lab in edges:
            m[i][j] = m[j][i] = lab
        return cls(tuple(map(tuple, m)))

    @property
    def n(self) -> int:
        return len(self.m)

    def __getitem__(self, ij):
        i, j = ij
        return self.m[i][j]

    def edges(self):
        """Diagram edges (i < j, label) where the label is not 2."""
        return [(i, j, self.m[i][j]) for i in range(self.n) for j in range(i + 1, self.n)
                if self.m[i][j] != 2]

    def induced(self, verts) -> "CoxeterMatrix":
        verts = list(verts)
        return CoxeterMatrix(tuple(tuple(self.m[i][j] for j in verts) for i in verts))

    def relabel(self, perm) -> "CoxeterMatrix":
        """Matrix with vertex perm[i] playing the role of old vertex i."""
        inv = [0] * self.n
        for i, p in enumerate(perm):
            inv[p] = i
        return CoxeterMatrix(tuple(tuple(self.m[inv[i]][inv[j]] for j in range(self.n))
                                   for i in range(self.n)))

    def components(self):
        """Connected components (sorted vertex tuples) of the diagram."""
        seen, out = set(), []
        for s in range(self.n):
            if s in seen:
                continue
            comp, stack = {s}, [s]
            while stack:
                i = stack.pop()
                for j in range(self.n):
                    if j not in comp and self.m[i][j] != 2 and i != j:
                        comp.add(j)
                        stack.append(j)
            seen |= comp
            out.append(tuple(sorted(comp)))
        return out

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        for i, j, lab in self.edges():
            g.add_edge(i, j, label=lab)
        return g

    def to_dsl(self) -> str:
        lines = [f"verts {self.n}"]
        lines += [f"edge {i + 1} {j + 1} {format_label(lab)}" for i, j, lab in self.edges()]
        return "\n".join(lines) + "\n"

    def __str__(self):
        return "\n".join(" ".join(format_label(x) for x in r) for r in self.m)


# ---------------------------------------------------------------------------
# text format


def _parse_label(tok, line, col):
    if tok == "inf":
        return INF
    if not tok.isdigit():
        raise DiagramSyntaxError(f"bad label {tok!r}", line, col)
    lab = int(tok)
    if lab < 2:
        raise DiagramError(f"off-diagonal label {lab} is below 2", line, col)
    return lab


def parse_diagram(text: str) -> CoxeterMatrix:
    """Parse ``verts N`` / ``edge i j L`` lines (``#`` starts a comment)."""
    n = None
    labels: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks, pos = [], 0
        for tok in body.split():
            pos = body.index(tok, pos)
            toks.append((tok, pos + 1))
            pos += len(tok)
        if not toks:
            continue
        head, hcol = toks[0]
        if head == "verts":
            if n is not None:
                raise DiagramSyntaxError("repeated 'verts' line", lineno, hcol)
            if len(toks) != 2:
                raise DiagramSyntaxError("expected 'verts N'", lineno, hcol)
            tok, col = toks[1]
            if not tok.isdigit() or int(tok) < 1:
                raise DiagramSyntaxError(f"bad vertex count {tok!r}", lineno, col)
            n = int(tok)
        elif head == "edge":
            if n is None:
                raise DiagramSyntaxError("'edge' before 'verts'", lineno, hcol)
            if len(toks) != 4:
                raise DiagramSyntaxError("expected 'edge i j L'", lineno, hcol)
            ends = []
            for tok, col in toks[1:3]:
                if not tok.isdigit() or not 1 <= int(tok) <= n:
                    raise DiagramSyntaxError(f"vertex {tok!r} out of range 1..{n}", lineno, col)
                ends.append(int(tok) - 1)
            i, j = ends
            if i == j:
                raise DiagramSyntaxError("loop edge", lineno, toks[2][1])
            lab = _parse_label(toks[3][0], lineno, toks[3][1])
            key = (min(i, j), max(i, j))
            if key in labels and labels[key] != lab:
                raise DiagramError(
                    f"edge {i + 1} {j + 1} redeclared with label {format_label(lab)} "
                    f"(was {format_label(labels[key])})", lineno, hcol)
            labels[key] = lab
        else:
            raise DiagramSyntaxError(f"unknown directive {head!r}", lineno, hcol)
    if n is None:
        raise DiagramSyntaxError("missing 'verts' line", 1, 1)
    return CoxeterMatrix.from_edges(n, [(i, j, lab) for (i, j), lab in labels.items()])


# ---------------------------------------------------------------------------
# families

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _chain(labels):
    n = len(labels) + 1
    return CoxeterMatrix.from_edges(n, [(i, i + 1, lab) for i, lab in enumerate(labels)])


def _star(arms):
    """Centre vertex 0 with simply laced arms of the given lengths."""
    edges, nxt = [], 1
    for length in arms:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt, 3))
            prev = nxt
            nxt += 1
    return CoxeterMatrix.from_edges(nxt, edges)


def _fork(n, tail_label=3, double=False):
    """n vertices: 0 and 1 both joined to 2, then a chain 2..n-1.

    The last chain edge gets ``tail_label``; ``double`` puts a second fork at
    the far end instead.
    """
    edges = [(0, 2, 3), (1, 2, 3)]
    last = n - 2 if double else n - 1
    for i in range(2, last):
        edges.append((i, i + 1, 3))
    if double:
        edges.append((n - 3, n - 1, 3))
    elif tail_label != 3:
        i, j, _ = edges[-1]
        edges[-1] = (i, j, tail_label)
    return CoxeterMatrix.from_edges(n, edges)


def finite_family(letter: str, n: int) -> CoxeterMatrix:
    """Diagram of the finite irreducible type ``letter`` of rank n.

    For ``I`` the parameter is the dihedral label (rank 2).
    """
    if letter == "A" and n >= 1:
        return _chain([3] * (n - 1))
    if letter == "B" and n >= 2:
        return _chain([3] * (n - 2) + [4])
    if letter == "D" and n >= 4:
        return _fork(n)
    if letter == "E" and n in (6, 7, 8):
        return _star((1, 2, n - 4))
    if letter == "F" and n == 4:
        return _chain([3, 4, 3])
    if letter == "H" and n in (3, 4):
        return _chain([5] + [3] * (n - 2))
    if letter == "I" and n >= 5:
        return _chain([n])
    raise ValueError(f"no finite family {letter}{n}")


def affine_family(letter: str, n: int) -> CoxeterMatrix:
    """Diagram of the affine type ``letter`` of rank n (n + 1 vertices)."""
    if letter == "A":
        if n == 1:
            return _chain([INF])
        if n >= 2:
            return CoxeterMatrix.from_edges(n + 1, [(i, (i + 1) % (n + 1), 3) for i in range(n + 1)])
    if letter == "B" and n >= 3:
        return _fork(n + 1, tail_label=4)
    if letter == "C" and n >= 2:
        return _chain([4] + [3] * (n - 2) + [4])
    if letter == "D" and n >= 4:
        if n == 4:
            return _star((1, 1, 1, 1))
        return _fork(n + 1, double=True)
    if letter == "E" and n in (6, 7, 8):
        return _star({6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}[n])
    if letter == "F" and n == 4:
        return _chain([3, 3, 4, 3])
    if letter == "G" and n == 2:
        return _chain([3, 6])
    raise ValueError(f"no affine family {letter}~{n}")


def _finite_name(letter, n):
    if letter == "I":
        return {3: "A2", 4: "B2", 6: "G2"}.get(n, f"I2({n})")
    return f"{letter}{n}"


def finite_catalog(max_rank: int):
    """(name, matrix) for every finite irreducible type of rank <= max_rank.

    Dihedral types I2(m) are listed for m <= 12.
    """
    out = []
    for n in range(1, max_rank + 1):
        out.append((f"A{n}", finite_family("A", n)))
        if n >= 2:
            out.append((f"B{n}", finite_family("B", n)))
        if n >= 4:
            out.append((f"D{n}", finite_family("D", n)))
        if n in (6, 7, 8):
            out.append((f"E{n}", finite_family("E", n)))
        if n == 4:
            out.append(("F4", finite_family("F", 4)))
        if n in (3, 4):
            out.append((f"H{n}", finite_family("H", n)))
        if n == 2:
            out += [(_finite_name("I", m), finite_family("I", m)) for m in range(5, 13)]
    return out


def affine_catalog(max_rank: int):
    """(name, matrix) for every affine irreducible type of rank <= max_rank."""
    out = []
    for n in range(1, max_rank + 1):
        for letter in "ABCDEFG":
            try:
                out.append((f"{letter}~{n}", affine_family(letter, n)))
            except ValueError:
                pass
    return out


def pretty_name(name: str) -> str:
    """'A~2' -> 'Ã₂', 'I2(5)' -> 'I₂(5)', 'E6' -> 'E₆'."""
    if "(" in name:
        head, rest = name.split("(", 1)
        return head.translate(_SUB) + "(" + rest
    if "~" in name:
        letter, n = name.split("~")
        return unicodedata.normalize("NFC", letter + "̃") + n.translate(_SUB)
    return name[0] + name[1:].translate(_SUB)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class TypeTag:
    kind: str  # "Spherical", "Affine" or "Other"
    family: str | None = None

    def __str__(self):
        return self.kind if self.family is None else f"{self.kind}({pretty_name(self.family)})"


@dataclass(frozen=True)
class ClassificationResult:
    components: tuple  # ((vertex tuple, TypeTag), ...)
    tag: str

    def __str__(self):
        parts = [str(t) for _, t in self.components]
        if len(parts) == 1:
            return parts[0]
        return f"{self.tag}: " + " x ".join(parts)


def _signature(cm: CoxeterMatrix):
    degs = sorted(d for _, d in cm.graph().degree())
    labels = sorted((lab for _, _, lab in cm.edges()), key=lambda x: (x == INF, x))
    return cm.n, tuple(degs), tuple(labels)


def _same_diagram(a: CoxeterMatrix, b: CoxeterMatrix) -> bool:
    if _signature(a) != _signature(b):
        return False
    return GraphMatcher(a.graph(), b.graph(),
                        edge_match=lambda x, y: x["label"] == y["label"]).is_isomorphic()


def _candidates(n):
    """Catalog diagrams with exactly n vertices."""
    out = []
    for name, cm in finite_catalog(n):
        if cm.n == n and not name.startswith("I2("):
            out.append(("Spherical", name, cm))
    for name, cm in affine_catalog(n - 1):
        if cm.n == n:
            out.append(("Affine", name, cm))
    return out


@lru_cache(maxsize=4096)
def _classify_connected(cm: CoxeterMatrix) -> TypeTag:
    n = cm.n
    if n == 1:
        return TypeTag("Spherical", "A1")
    if n == 2:
        lab = cm[0, 1]
        if lab == INF:
            return TypeTag("Affine", "A~1")
        return TypeTag("Spherical", _finite_name("I", lab) if lab != 3 else "A2")
    for kind, name, ref in _candidates(n):
        if _same_diagram(cm, ref):
            return TypeTag(kind, name)
    return TypeTag("Other")


def classify(cm: CoxeterMatrix) -> ClassificationResult:
    comps = []
    for comp in cm.components():
        comps.append((comp, _classify_connected(cm.induced(comp))))
    kinds = {t.kind for _, t in comps}
    if kinds <= {"Spherical"}:
        tag = "Spherical"
    elif "Other" in kinds:
        tag = "Other"
    else:
        tag = "Affine"
    return ClassificationResult(tuple(comps), tag)


def classify_triangle(p, q, r) -> str:
    """Spherical, Affine or Other according to 1/p + 1/q + 1/r against 1."""
    for x in (p, q, r):
        if x == INF or not isinstance(x, int):
            raise ValueError("triangle labels must be finite integers")
        if x < 2:
            raise ValueError("triangle labels must be >= 2")
    total = Fraction(1, p) + Fraction(1, q) + Fraction(1, r)
    if total > 1:
        return "Spherical"
    return "Affine" if total == 1 else "Other"


def triangle_matrix(p, q, r) -> CoxeterMatrix:
    """Three generators with m01 = p, m12 = q, m02 = r."""
    return CoxeterMatrix.from_edges(3, [(0, 1, p), (1, 2, q), (0, 2, r)])


def special_spherical_subgroups(cm: CoxeterMatrix):
    """All vertex subsets spanning a finite special subgroup, empty set
    included, ordered by size then lexicographically.

    Finiteness is inherited by subsets, so each size level only tests sets
    all of whose one-smaller subsets passed; this gives the same answer as a
    scan over all 2^n subsets.
    """
    level = [()]
    out = [()]
    for size in range(1, cm.n + 1):
        prev = set(level)
        cand = set()
        for base in level:
            start = base[-1] + 1 if base else 0
            for v in range(start, cm.n):
                t = base + (v,)
                if all(t[:i] + t[i + 1:] in prev for i in range(size)):
                    cand.add(t)
        level = sorted(t for t in cand if classify(cm.induced(t)).tag == "Spherical")
        if not level:
            break
        out += level
    return out


# ---------------------------------------------------------------------------
# odd subgraph


@dataclass(frozen=True)
class CentralizerRank:
    generator: int
    commuting: tuple
    odd_component: tuple
    e: int
    v: int
    k: int


def centralizer_rank(cm: CoxeterMatrix, s: int) -> CentralizerRank:
    """Edge/vertex count of the odd-label component of s, with k = e - v + 1."""
    if not 0 <= s < cm.n:
        raise IndexError(f"generator {s} out of range")
    odd = lambda lab: lab != INF and lab % 2 == 1
    comp, stack = {s}, [s]
    while stack:
        i = stack.pop()
        for j in range(cm.n):
            if j != i and j not in comp and odd(cm[i, j]):
                comp.add(j)
                stack.append(j)
    e = sum(1 for i, j in combinations(sorted(comp), 2) if odd(cm[i, j]))
    v = len(comp)
    commuting = tuple(sorted({s} | {t for t in range(cm.n) if t != s and cm[s, t] == 2}))
    return CentralizerRank(s, commuting, tuple(sorted(comp)), e, v, e - v + 1)


def is_even(cm: CoxeterMatrix) -> bool:
    return all(cm[i, j] == INF or cm[i, j] % 2 == 0
               for i in range(cm.n) for j in range(i + 1, cm.n))
