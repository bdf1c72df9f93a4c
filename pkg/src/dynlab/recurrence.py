"""Chain recurrence, the non-wandering set, and spectral decompositions.

Everything here treats a system through its *admissible step sets*: a
plain system steps with its map, while a window system steps with the
full multivalued extension relation it carries.  The single-valued map
of a window system picks one canonical extension per word, and using it
alone would make recurrence structure (periods, basic sets, mixing) an
artifact of that choice; the relation restores every admissible step.

The spectral decomposition is computed twice, by independent routes:

* a graph route — strongly connected pieces of the recurrent part,
  with the cyclic parts read off breadth-first phase classes; and
* a stable-set route — iterating "global stable set of a periodic
  anchor, intersected with the piece" until it closes up.

Both variants are kept on the result and compared, and every claimed
invariant can be re-verified from scratch via :meth:`Decomposition.verify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .core import as_fraction, threshold_grid
from .expansive import stable_sets, strong_measure_expansive_holds
from .shadowing import DeltaGraph, _largest_passing, modulus_table

__all__ = [
    "BasicPiece",
    "ChainRecurrence",
    "Decomposition",
    "HypothesisReport",
    "basic_sets",
    "chain_graph",
    "chain_recurrent_set",
    "cp_construction",
    "cyclic_decomposition",
    "hypothesis_report",
    "is_mixing",
    "is_transitive",
    "nonwandering_set",
    "spectral_decomposition",
]


def _step_sets(sys):
    """Admissible one-step successors per index: relation, else the map."""
    if sys.relation is not None:
        return sys.relation
    return tuple((j,) for j in sys.fmap)


def chain_graph(sys, delta):
    """Digraph with an edge x -> y iff some admissible step from x lands
    within delta of y (strict, matching the pseudo-orbit convention).

    Infinite walks of this graph are exactly the delta-pseudo-orbits a
    multivalued stepper can realise; for plain systems it coincides with
    the delta step graph used by the tracing procedures.
    """
    delta = as_fraction(delta)
    cut = sys.lt_cutoff(delta)
    rank = sys.rank
    steps = _step_sets(sys)
    succ = tuple(
        tuple(
            j for j in range(sys.n)
            if any(rank[z][j] < cut for z in steps[i])
        )
        for i in range(sys.n)
    )
    return DeltaGraph(delta, succ)


def _digraph(succ):
    g = nx.DiGraph()
    g.add_nodes_from(range(len(succ)))
    for i, out in enumerate(succ):
        for j in out:
            g.add_edge(i, j)
    return g


def _on_cycle(succ):
    """Indices through which the graph has a closed walk of length >= 1."""
    members = set()
    for comp in nx.strongly_connected_components(_digraph(succ)):
        if len(comp) > 1:
            members |= comp
        else:
            (i,) = comp
            if i in succ[i]:
                members.add(i)
    return members


@dataclass(frozen=True)
class ChainRecurrence:
    """Chain recurrent points, with the per-threshold table they came from.

    ``table`` rows are (delta, points-on-a-delta-chain-cycle) over the
    positive threshold grid, ascending; ``points`` is the intersection.
    """

    points: tuple
    table: tuple

    def at(self, delta):
        for d, pts in self.table:
            if d == delta:
                return pts
        raise KeyError(f"delta {delta} not on the grid")


def chain_recurrent_set(sys):
    """Points that chain back to themselves at every positive grid delta.

    A point is recurrent at delta when it lies on a cycle of
    :func:`chain_graph`; shrinking delta only removes edges, so the
    intersection over the grid decides every positive threshold at once.
    """
    rows = []
    common = set(range(sys.n))
    for delta in threshold_grid(sys).positive:
        members = _on_cycle(chain_graph(sys, delta).succ)
        rows.append((delta, tuple(sys.points[i] for i in sorted(members))))
        common &= members
    return ChainRecurrence(
        tuple(sys.points[i] for i in sorted(common)), tuple(rows)
    )


def nonwandering_set(sys):
    """Points every neighborhood of which returns to itself.

    Direct reading on the grid: x is non-wandering iff for every grid
    epsilon some admissible n-step image of the open ball B(x, eps)
    meets the ball again, n >= 1.  Return times are bounded by
    max(pre-period + cycle lcm, number of points): a functional orbit
    repeats beyond the former, and any multivalued return walk can be
    cut down below the latter.
    """
    steps = _step_sets(sys)
    horizon = max(sys.max_preperiod + sys.cycle_lcm, sys.n)
    grid = threshold_grid(sys)
    result = []
    for x in range(sys.n):
        wandering = False
        for eps in grid.positive:
            cut = sys.lt_cutoff(eps)
            ball = frozenset(y for y in range(sys.n) if sys.rank[x][y] < cut)
            layer, returned = ball, False
            for _ in range(horizon):
                layer = frozenset(j for i in layer for j in steps[i])
                if layer & ball:
                    returned = True
                    break
            if not returned:
                wandering = True
                break
        if not wandering:
            result.append(sys.points[x])
    return tuple(result)


def basic_sets(sys):
    """Classes of mutual chain reachability, within the recurrent part.

    Two recurrent points are equivalent when they lie in the same
    strongly connected component of the chain graph at *every* positive
    grid delta.  Returned as point tuples, each in canonical order,
    sorted by their least member.
    """
    labels = {i: [] for i in range(sys.n)}
    for delta in threshold_grid(sys).positive:
        graph = _digraph(chain_graph(sys, delta).succ)
        for comp in nx.strongly_connected_components(graph):
            tag = min(comp)
            for i in comp:
                labels[i].append(tag)
    recurrent = {sys.index[p] for p in chain_recurrent_set(sys).points}
    classes = {}
    for i in sorted(recurrent):
        classes.setdefault(tuple(labels[i]), []).append(i)
    pieces = sorted(classes.values(), key=lambda ids: ids[0])
    return tuple(tuple(sys.points[i] for i in ids) for ids in pieces)


def _restricted_succ(sys, members):
    """Admissible steps that stay inside ``members`` (an index set)."""
    steps = _step_sets(sys)
    return {i: tuple(j for j in steps[i] if j in members) for i in members}


def cyclic_decomposition(sys, B):
    """Period and cyclic parts of the step graph restricted to a basic set.

    Returns (a, parts) where a is the gcd of the lengths of all closed
    walks inside B (the period of the restricted graph) and parts
    C_0..C_{a-1} are the breadth-first phase classes, anchored so that
    C_0 contains the least member and each step advances the phase by
    one.

    Raises ValueError when B is not strongly connected under the
    restricted steps (then it is not a basic set).
    """
    members = {sys.index[p] for p in B}
    succ = _restricted_succ(sys, members)
    if any(not out for out in succ.values()):
        raise ValueError("not a basic set: a member has no step inside it")
    graph = nx.DiGraph()
    graph.add_nodes_from(members)
    graph.add_edges_from((i, j) for i, out in succ.items() for j in out)
    if not nx.is_strongly_connected(graph):
        raise ValueError("not a basic set: not strongly connected")
    root = min(members)
    level = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for i in frontier:
            for j in succ[i]:
                if j not in level:
                    level[j] = level[i] + 1
                    nxt.append(j)
        frontier = nxt
    a = 0
    for i, out in succ.items():
        for j in out:
            a = math.gcd(a, level[i] + 1 - level[j])
    parts = [[] for _ in range(a)]
    for i in sorted(members):
        parts[level[i] % a].append(sys.points[i])
    return a, tuple(tuple(part) for part in parts)


def _reach_after(sys, start, n):
    """Indices reachable from the index set ``start`` in exactly n steps."""
    steps = _step_sets(sys)
    layer = frozenset(start)
    for _ in range(n):
        layer = frozenset(j for i in layer for j in steps[i])
    return layer


def _primitive(matrix):
    """Does some power of the boolean matrix have every entry set?

    A primitive n x n matrix is all-positive by exponent n^2 - 2n + 2,
    so that many multiplications decide the question exactly.
    """
    n = len(matrix)
    power = matrix
    for _ in range(n * n - 2 * n + 3):
        if all(all(row) for row in power):
            return True
        power = [
            [any(power[i][k] and matrix[k][j] for k in range(n))
             for j in range(n)]
            for i in range(n)
        ]
    return False


def is_mixing(sys, part, a):
    """Is the a-step dynamics restricted to the part primitive?

    Builds the "reachable in exactly ``a`` admissible steps" relation
    between part members and asks whether some power of it is full.
    Walks may only pass through points that can return to the part, so
    no explicit restriction of the intermediate steps is needed for
    parts of a genuine decomposition; a wrong ``a`` shows up as a
    parity-style obstruction and yields False.
    """
    ids = [sys.index[p] for p in part]
    matrix = []
    for i in ids:
        reach = _reach_after(sys, (i,), a)
        matrix.append([(j in reach) for j in ids])
    return _primitive(matrix)


def is_transitive(sys, subset):
    """Does one admissible orbit visit every point of the subset?

    Plain systems: some point's forward orbit covers the subset.
    Multivalued systems: the relation restricted to the subset is
    strongly connected (a covering closed walk then exists).
    """
    wanted = {sys.index[p] for p in subset}
    if not wanted:
        raise ValueError("empty subset")
    if len(wanted) == 1:
        return True
    if sys.relation is None:
        for i in range(sys.n):
            seen = set(sys.cycle(i))
            j = i
            while j not in seen:
                seen.add(j)
                j = sys.fmap[j]
            if wanted <= seen:
                return True
        return False
    succ = _restricted_succ(sys, wanted)
    graph = nx.DiGraph()
    graph.add_nodes_from(wanted)
    graph.add_edges_from((i, j) for i, out in succ.items() for j in out)
    return nx.is_strongly_connected(graph)


def cp_construction(sys, B, p):
    """Part of a basic set grown from a periodic anchor's stable set.

    C_p = (global stable set of p) intersected with B.  Requires p to
    be a periodic member of B.
    """
    if p not in B:
        raise ValueError("anchor must belong to the basic set")
    if sys.preperiod(sys.index[p]) != 0:
        raise ValueError("anchor must be periodic")
    top = threshold_grid(sys).top
    stable = set(stable_sets(sys, p, top, include_unstable=False).s_global)
    return tuple(q for q in B if q in stable)


def _cp_parts(sys, B):
    """Stable-set route to the cyclic parts: iterate the anchor forward.

    Returns (M, parts) where M is the least positive step count with
    C_{f^M(anchor)} == C_anchor, or None when B holds no periodic point
    to anchor on (possible only for multivalued systems, where the
    canonical map may spiral out of the piece).
    """
    periodic = [p for p in B if sys.preperiod(sys.index[p]) == 0]
    if not periodic:
        return None
    anchor = periodic[0]
    first = cp_construction(sys, B, anchor)
    parts, point = [first], sys.apply(anchor)
    bound = len(sys.cycle(sys.index[anchor]))
    for m in range(1, bound + 1):
        current = cp_construction(sys, B, point)
        if current == first:
            return m, tuple(parts)
        parts.append(current)
        point = sys.apply(point)
    raise AssertionError("anchor iteration must close within its period")


@dataclass(frozen=True)
class HypothesisReport:
    """Grid diagnosis of the assumptions the decomposition relies on.

    ``strong_constant`` is the largest grid delta at which strong
    measure expansiveness holds (on a finite system the sub-minimal
    threshold always works, so it is never None); ``strong_fails_at``
    lists every positive grid delta where it fails, which is how a
    degenerating example announces itself.
    """

    invertible: bool
    shadowing_populated: bool
    strong_constant: Fraction
    strong_fails_at: tuple

    @property
    def passes(self):
        return self.invertible and self.shadowing_populated


def hypothesis_report(sys, cap=None):
    grid = threshold_grid(sys)
    constant = _largest_passing(
        grid.positive, lambda d: strong_measure_expansive_holds(sys, d)[0]
    )
    fails = tuple(d for d in grid.positive if d > constant)
    populated = modulus_table(sys, "shadowing", cap=cap).populated()
    return HypothesisReport(sys.invertible, populated, constant, fails)


@dataclass(frozen=True)
class BasicPiece:
    """One basic set with both decompositions of its cyclic structure.

    ``parts``/``period`` come from the graph route, ``cp_parts`` from
    the stable-set route (None when no periodic anchor exists);
    ``routes_agree`` compares them as partitions.
    """

    points: tuple
    period: int
    parts: tuple
    mixing: tuple
    cp_parts: tuple | None
    routes_agree: bool | None


@dataclass(frozen=True)
class Decomposition:
    pieces: tuple
    report: HypothesisReport

    def partition(self, route="graph"):
        """All cyclic parts of all pieces, as a set of frozensets."""
        if route == "graph":
            return {frozenset(part) for piece in self.pieces
                    for part in piece.parts}
        if route == "stable-set":
            return {frozenset(part) for piece in self.pieces
                    if piece.cp_parts is not None for part in piece.cp_parts}
        raise ValueError(f"unknown route {route!r}")

    def verify(self, sys):
        """Re-check every structural claim from scratch.

        Returns a dict of named booleans; all True means the output is
        a genuine decomposition of the non-wandering set into cyclically
        rotating, internally mixing pieces.
        """
        seen = set()
        disjoint = True
        for piece in self.pieces:
            if seen & set(piece.points):
                disjoint = False
            seen |= set(piece.points)
        covers = tuple(sorted(seen, key=sys.index.get)) == nonwandering_set(sys)

        invariant = shift = power = transitive = primitive = True
        for piece in self.pieces:
            members = {sys.index[p] for p in piece.points}
            succ = _restricted_succ(sys, members)
            if any(not out for out in succ.values()):
                invariant = False
            if sys.relation is None:
                if not all(sys.fmap[i] in members for i in members):
                    invariant = False
            a, parts = piece.period, piece.parts
            for k, part in enumerate(parts):
                nxt = {sys.index[p] for p in parts[(k + 1) % a]}
                here = {sys.index[p] for p in part}
                image = {j for i in here for j in succ[i]}
                if image != nxt:
                    shift = False
                back = here
                for _ in range(a):
                    back = {j for i in back for j in succ[i]}
                if back != here:
                    power = False
            if not is_transitive(sys, piece.points):
                transitive = False
            # mixing flags re-checked by a different criterion: primitive
            # iff strongly connected with trivial period
            for flag, part in zip(piece.mixing, parts):
                step_a = {
                    sys.index[p]: tuple(
                        j for j in _reach_after(sys, (sys.index[p],), a)
                        if sys.points[j] in part
                    )
                    for p in part
                }
                graph = nx.DiGraph()
                graph.add_nodes_from(step_a)
                graph.add_edges_from(
                    (i, j) for i, out in step_a.items() for j in out)
                connected = nx.is_strongly_connected(graph)
                period = 0
                if connected:
                    root = min(step_a)
                    level, frontier = {root: 0}, [root]
                    while frontier:
                        nxt_front = []
                        for i in frontier:
                            for j in step_a[i]:
                                if j not in level:
                                    level[j] = level[i] + 1
                                    nxt_front.append(j)
                        frontier = nxt_front
                    for i, out in step_a.items():
                        for j in out:
                            period = math.gcd(period, level[i] + 1 - level[j])
                if flag != (connected and period == 1):
                    primitive = False

        return {
            "disjoint": disjoint,
            "covers_nonwandering": covers,
            "invariant": invariant,
            "parts_shift": shift,
            "parts_period": power,
            "transitive": transitive,
            "primitive": primitive,
        }


def spectral_decomposition(sys, cap=None):
    """Basic sets, cyclic parts, periods and mixing flags, twice over.

    The hypotheses that make the decomposition meaningful (invertible,
    tracing modulus populated, strong measure expansiveness scale) are
    diagnosed in the report, never enforced: degenerate instances get a
    decomposition plus an honest flag.
    """
    pieces = []
    for B in basic_sets(sys):
        a, parts = cyclic_decomposition(sys, B)
        mixing = tuple(is_mixing(sys, part, a) for part in parts)
        cp = _cp_parts(sys, B)
        if cp is None:
            cp_parts, agree = None, None
        else:
            m, cp_parts = cp
            agree = (m == a) and (
                {frozenset(p) for p in cp_parts} == {frozenset(p) for p in parts}
            )
        pieces.append(BasicPiece(B, a, parts, mixing, cp_parts, agree))
    return Decomposition(tuple(pieces), hypothesis_report(sys, cap=cap))