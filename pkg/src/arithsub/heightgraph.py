"""Digit-labelled period graph of a constant-length substitution.

For a primitive substitution of constant length l with height h, the letters
split into residue classes A_0..A_{h-1}; the graph's vertices are the letter
sets reachable from those classes under the digit maps
C -> {sigma(b)_i : b in C}, one edge per digit i < l.  Walking the base-l
digits of k from a root computes the exact alphabet of the arithmetic
subsequence with common difference h*l^m starting at k, which answers every
constant-subsequence question for the fixed point and its letter-to-letter
codings: witnesses for a given difference, the trichotomy (no constant
subsequence / periodic / unbounded essential periods), level-by-level
essential-period enumeration, and a DOT export of the whole automaton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import arith
from .errors import (
    BudgetError,
    DomainError,
    InvariantError,
    NotCodingError,
    PeriodicInputError,
    PrimitivityError,
)
from .words import Morphism, SeedPair, identity_coding


@dataclass(frozen=True)
class HeightData:
    """Height h and the partition of the alphabet into residue classes A_0..A_{h-1}."""

    height: int
    classes: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class PeriodGraph:
    alphabet: "object"
    arity: int
    vertices: tuple[frozenset[int], ...]
    roots: tuple[int, ...]
    edges: tuple[tuple[int, ...], ...]

    @property
    def height(self) -> int:
        return len(self.roots)

    def vertex_tokens(self, v: int) -> tuple[str, ...]:
        return tuple(self.alphabet.token(x) for x in sorted(self.vertices[v]))


class AutoClassification(Enum):
    NO_CONSTANT_AP = "no-constant-arithmetic-subsequence"
    PERIODIC = "periodic"
    UNBOUNDED_ESSENTIAL_PERIODS = "unbounded-essential-periods"
    HAS_CONSTANT_AP = "has-constant-arithmetic-subsequence"


@dataclass(frozen=True)
class GraphClassification:
    kind: AutoClassification
    witness_vertex: int | None = None
    cycle: tuple[int, ...] | None = None


@dataclass(frozen=True)
class LevelReport:
    """Singleton statistics of one level of the walk forest.

    ``new_essential_periods`` lists (period, residue, letter) for residues whose
    minimal admissible difference is exactly h*l^level.
    """

    level: int
    difference: int
    singleton_count: int
    new_essential_periods: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class DifferenceWitnesses:
    """Outcome of the constant-subsequence check for one common difference."""

    requested: int
    reduced: int
    level: int
    witnesses: tuple[tuple[int, int], ...]  # (residue mod reduced, codomain letter)


def _require_constant_length(m: Morphism) -> int:
    if not m.is_endomorphism:
        raise DomainError("this analysis needs an endomorphism")
    if m.is_erasing:
        raise DomainError("this analysis rejects erasing morphisms")
    profile = m.profile()
    if profile.constant_length is None:
        raise DomainError("this analysis needs a constant-length substitution")
    if profile.constant_length < 2:
        raise DomainError("constant length must be >= 2")
    return profile.constant_length


def _require_primitive(m: Morphism):
    from .words import is_primitive

    if not is_primitive(m):
        raise PrimitivityError("this analysis needs a primitive substitution")


def _resolve_coding(m_or_alphabet, coding: Morphism | None) -> Morphism:
    alphabet = m_or_alphabet
    if coding is None:
        return identity_coding(alphabet)
    if not coding.is_coding:
        raise NotCodingError("a letter-to-letter morphism is required")
    if coding.domain != alphabet:
        raise NotCodingError("the coding must be defined on the substitution's alphabet")
    return coding


def height(m: Morphism, seed: SeedPair) -> HeightData:
    """Largest n coprime to the length whose residues split the letters cleanly.

    Scanning n from |alphabet| downward, close the set of (letter, position
    mod n) pairs of the fixed point starting from (seed, 0): position j
    carrying letter c puts sigma(c)_r at position j*l + r.  The first n where
    every letter occupies exactly one residue is the height; n = 1 always
    works, so a single-class answer is a valid outcome, never an error.
    """
    length = _require_constant_length(m)
    _require_primitive(m)
    a = seed.right
    if not (m.images[a] and m.images[a][0] == a):
        raise DomainError("seed letter must be right-prolongable")
    d = len(m.domain)
    for n in range(d, 0, -1):
        if math.gcd(n, length) != 1:
            continue
        residues: dict[int, int] = {}
        seen = {(a, 0)}
        stack = [(a, 0)]
        ok = True
        while stack and ok:
            c, i = stack.pop()
            if c in residues and residues[c] != i:
                ok = False
                break
            residues[c] = i
            for r in range(length):
                child = (m.images[c][r], (i * length + r) % n)
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        if not ok or len(residues) != d:
            continue
        classes = tuple(
            frozenset(c for c, i in residues.items() if i == j) for j in range(n)
        )
        if any(not cls for cls in classes):
            continue
        return HeightData(height=n, classes=classes)
    raise InvariantError("height scan fell through; n = 1 should always be accepted")


def period_graph(m: Morphism, hd: HeightData) -> PeriodGraph:
    """Breadth-first closure of the residue classes under the digit maps."""
    length = _require_constant_length(m)
    vertices: list[frozenset[int]] = []
    index: dict[frozenset[int], int] = {}
    for cls in hd.classes:
        index[cls] = len(vertices)
        vertices.append(cls)
    roots = tuple(range(len(hd.classes)))
    edges: list[tuple[int, ...]] = []
    at = 0
    while at < len(vertices):
        v = vertices[at]
        row = []
        for digit in range(length):
            succ = frozenset(m.images[b][digit] for b in v)
            if succ not in index:
                index[succ] = len(vertices)
                vertices.append(succ)
            row.append(index[succ])
        edges.append(tuple(row))
        at += 1
    return PeriodGraph(
        alphabet=m.domain,
        arity=length,
        vertices=tuple(vertices),
        roots=roots,
        edges=tuple(edges),
    )


def _phi_masks(graph: PeriodGraph, coding: Morphism | None) -> list[int]:
    coding = _resolve_coding(graph.alphabet, coding)
    letter_mask = [1 << coding.images[a][0] for a in range(len(graph.alphabet))]
    masks = []
    for v in graph.vertices:
        acc = 0
        for b in v:
            acc |= letter_mask[b]
        masks.append(acc)
    return masks


def _is_singleton(mask: int) -> bool:
    return mask != 0 and mask & (mask - 1) == 0


def phi_image(graph: PeriodGraph, coding: Morphism | None, v: int) -> frozenset[int]:
    coding = _resolve_coding(graph.alphabet, coding)
    return frozenset(coding.images[b][0] for b in graph.vertices[v])


def walk_vertex(graph: PeriodGraph, k: int, m: int) -> int:
    """Terminal vertex of the admissible walk encoding position class k mod h*l^m."""
    h, l = graph.height, graph.arity
    if m < 0 or not 0 <= k < h * l**m:
        raise DomainError("position class out of range")
    v = graph.roots[k // l**m]
    for i in range(m - 1, -1, -1):
        v = graph.edges[v][(k // l**i) % l]
    return v


def alphabet_at(graph: PeriodGraph, coding: Morphism | None, k: int, m: int) -> frozenset[int]:
    """Alphabet of the arithmetic subsequence with difference h*l^m starting at k."""
    return phi_image(graph, coding, walk_vertex(graph, k, m))


def _level_vertices(graph: PeriodGraph, level: int, budget: int = 10**7) -> list[int]:
    h, l = graph.height, graph.arity
    if h * l**level > budget:
        raise BudgetError(f"level {level} needs {h * l ** level} residues (budget {budget})")
    verts = list(graph.roots)
    for _ in range(level):
        verts = [graph.edges[verts[k // l]][k % l] for k in range(len(verts) * l)]
    return verts


def constant_difference_witnesses(
    graph: PeriodGraph, coding: Morphism | None, q: int, level: int
) -> list[tuple[int, int]]:
    """Residues r < q whose whole position class carries one coded letter.

    Requires q to divide h*l^level; the class of r mod q is the union of the
    classes r + j*q mod h*l^level, so the test is a finite union of walks.
    """
    h, l = graph.height, graph.arity
    total = h * l**level
    if q < 1 or total % q:
        raise DomainError("the difference must divide height * length^level")
    masks = _phi_masks(graph, coding)
    verts = _level_vertices(graph, level)
    out = []
    for r in range(q):
        acc = 0
        for k in range(r, total, q):
            acc |= masks[verts[k]]
        if _is_singleton(acc):
            out.append((r, acc.bit_length() - 1))
    return out


def _reach_sets(graph: PeriodGraph) -> list[set[int]]:
    """reach[v] = vertices reachable from v in at least one step."""
    n = len(graph.vertices)
    succ = [set(row) for row in graph.edges]
    reach = []
    for v in range(n):
        seen: set[int] = set()
        stack = list(succ[v])
        while stack:
            w = stack.pop()
            if w in seen:
                continue
            seen.add(w)
            stack.extend(succ[w])
        reach.append(seen)
    return reach


def _eventual_vertices(graph: PeriodGraph, reach) -> set[int]:
    """Vertices that arbitrarily long admissible walks can end in.

    These are the vertices reachable from some vertex lying on a cycle; a walk
    longer than the vertex count has necessarily entered a cycle.
    """
    out: set[int] = set()
    for v in range(len(graph.vertices)):
        if v in reach[v]:
            out |= reach[v]
    return out


def all_long_walks_singleton(graph: PeriodGraph, coding: Morphism | None = None) -> bool:
    """True when every long enough admissible walk ends in a coded singleton."""
    masks = _phi_masks(graph, coding)
    reach = _reach_sets(graph)
    return all(_is_singleton(masks[v]) for v in _eventual_vertices(graph, reach))


def _find_cycle_through(graph: PeriodGraph, v: int) -> tuple[int, ...]:
    # BFS back to v; cardinality is constant around any cycle, so the cycle
    # stays among vertices of the same size automatically.
    parent = {}
    queue = [v]
    seen = set()
    while queue:
        nxt = []
        for u in queue:
            for w in graph.edges[u]:
                if w == v:
                    cycle = [v]
                    while u != v:
                        cycle.append(u)
                        u = parent[u]
                    cycle.reverse()
                    return tuple(cycle)
                if w not in seen:
                    seen.add(w)
                    parent[w] = u
                    nxt.append(w)
        queue = nxt
    raise InvariantError("no cycle through a vertex that reaches itself")


def classify(graph: PeriodGraph, coding: Morphism | None = None) -> GraphClassification:
    """Trichotomy of the coded fixed point, plus the periodic degenerate case.

    No coded singleton vertex: no constant arithmetic subsequence exists.
    Every long enough walk singleton: the coded sequence is periodic.
    Otherwise a cycle of non-singleton vertices reaches a singleton; for the
    identity (or any coding injective on every vertex) that certifies
    unbounded essential periods, while a merging coding only certifies
    existence, quantified by the level reports.
    """
    masks = _phi_masks(graph, coding)
    singles = [v for v in range(len(graph.vertices)) if _is_singleton(masks[v])]
    if not singles:
        return GraphClassification(AutoClassification.NO_CONSTANT_AP)
    reach = _reach_sets(graph)
    if all(_is_singleton(masks[v]) for v in _eventual_vertices(graph, reach)):
        return GraphClassification(AutoClassification.PERIODIC)
    resolved = _resolve_coding(graph.alphabet, coding)
    faithful = all(
        len(phi_image(graph, resolved, v)) == len(graph.vertices[v])
        for v in range(len(graph.vertices))
    )
    if faithful:
        for v in range(len(graph.vertices)):
            if len(graph.vertices[v]) < 2 or v not in reach[v]:
                continue
            target = next((w for w in singles if w == v or w in reach[v]), None)
            if target is not None:
                return GraphClassification(
                    AutoClassification.UNBOUNDED_ESSENTIAL_PERIODS,
                    witness_vertex=target,
                    cycle=_find_cycle_through(graph, v),
                )
        raise InvariantError("trichotomy broken: no qualifying cycle found")
    return GraphClassification(AutoClassification.HAS_CONSTANT_AP, witness_vertex=singles[0])


def level_reports(
    graph: PeriodGraph,
    coding: Morphism | None = None,
    max_level: int = 6,
    budget: int = 10**6,
) -> list[LevelReport]:
    """Per-level singleton counts and newly appearing essential periods.

    Level m looks at all h*l^m position classes; a residue contributes a new
    essential period when no proper divisor of h*l^m already carries its
    constant subsequence.  Raises BudgetError (with partial results attached)
    once a level needs more residues than the budget allows.
    """
    if max_level < 0:
        raise DomainError("max_level must be >= 0")
    h, l = graph.height, graph.arity
    masks = _phi_masks(graph, coding)
    reports: list[LevelReport] = []
    verts = list(graph.roots)
    for level in range(max_level + 1):
        total = h * l**level
        if total > budget:
            raise BudgetError(
                f"level {level} needs {total} residues (budget {budget})",
                partial=reports,
            )
        if level > 0:
            verts = [graph.edges[verts[k // l]][k % l] for k in range(total)]
        level_masks = [masks[v] for v in verts]
        singles = [k for k in range(total) if _is_singleton(level_masks[k])]
        unresolved = set(singles)
        minimal: dict[int, int] = {}
        for q in arith.divisors(total):
            if not unresolved:
                break
            union = [0] * q
            for k in range(total):
                union[k % q] |= level_masks[k]
            for k in list(unresolved):
                if union[k % q] == level_masks[k]:
                    minimal[k] = q
                    unresolved.discard(k)
        new = tuple(
            (total, k, level_masks[k].bit_length() - 1)
            for k in singles
            if minimal[k] == total
        )
        reports.append(
            LevelReport(
                level=level,
                difference=total,
                singleton_count=len(singles),
                new_essential_periods=new,
            )
        )
    return reports


def branching_number(graph: PeriodGraph) -> int:
    """Minimal vertex cardinality; 1 exactly when a constant subsequence exists."""
    return min(len(v) for v in graph.vertices)


def _reduce_by_height(p: int, length: int, height_value: int) -> int:
    out = 1
    for prime, mult in arith.factorize(p).items():
        if length % prime == 0:
            out *= prime**mult
        elif height_value % prime == 0:
            out *= prime ** min(mult, arith.valuation(height_value, prime))
    return out


def difference_witnesses(
    m: Morphism,
    p: int,
    coding: Morphism | None = None,
    seed: SeedPair | None = None,
) -> DifferenceWitnesses:
    """Decide one common difference for a constant-length substitution.

    The difference is first replaced by its greatest divisor of the form
    (divisor of h*l^M); a constant subsequence exists for p exactly when one
    exists for that reduced difference, and witnesses transfer to every
    residue congruent modulo it.
    """
    if p < 1:
        raise DomainError("the common difference must be >= 1")
    length = _require_constant_length(m)
    _require_primitive(m)
    if seed is None:
        from .words import admissible_seeds

        seeds = admissible_seeds(m)
        if not seeds:
            raise DomainError("no admissible fixed point; analyze a power of the substitution")
        seed = seeds[0]
    coding = _resolve_coding(m.domain, coding)
    hd = height(m, seed)
    graph = period_graph(m, hd)
    if all_long_walks_singleton(graph, None):
        raise PeriodicInputError(
            "the fixed point is periodic; use the periodicity analysis instead"
        )
    reduced = _reduce_by_height(p, length, hd.height)
    if reduced == 1:
        return DifferenceWitnesses(requested=p, reduced=1, level=0, witnesses=())
    level = 0
    while (hd.height * length**level) % reduced:
        level += 1
    wits = constant_difference_witnesses(graph, coding, reduced, level)
    return DifferenceWitnesses(
        requested=p, reduced=reduced, level=level, witnesses=tuple(wits)
    )


def graph_to_dot(graph: PeriodGraph, coding: Morphism | None = None) -> str:
    """Deterministic DOT rendering of the graph as a digit automaton.

    One node per vertex labelled ``letters|coded image`` (both sorted), one
    edge per digit; roots get shape=doublecircle, vertices whose coded image
    is a singleton are accepting (peripheries=2).
    """
    resolved = _resolve_coding(graph.alphabet, coding)
    masks = _phi_masks(graph, resolved)

    def label(v: int) -> str:
        letters = ",".join(graph.vertex_tokens(v))
        image = ",".join(
            resolved.codomain.token(i)
            for i in sorted(phi_image(graph, resolved, v))
        )
        return f"{letters}|{image}"

    lines = ["digraph period_graph {"]
    for v in range(len(graph.vertices)):
        attrs = []
        if v in graph.roots:
            attrs.append("shape=doublecircle")
        if _is_singleton(masks[v]):
            attrs.append("peripheries=2")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{label(v)}"{suffix};')
    for v in range(len(graph.vertices)):
        for digit, w in enumerate(graph.edges[v]):
            lines.append(f'  "{label(v)}" -> "{label(w)}" [label="{digit}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
