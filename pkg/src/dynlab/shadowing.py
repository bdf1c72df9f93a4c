"""Decision procedures for pseudo-orbit tracing at fixed thresholds.

The key construction: fix delta and epsilon and build the *delta step
graph* (edge x -> y iff d(f(x), y) < delta), whose infinite walks are
exactly the delta-pseudo-orbits.  Whether every such walk is
epsilon-shadowed by a true orbit is decided by a subset construction:
push the set of still-viable tracer positions along every walk and
look for a reachable empty set.  On a finite space a walk is shadowed
iff its viable set never dies (an infinite surviving run yields an
actual orbit by a finite-branching chain argument), so reachability of
the empty set is a complete test, and the dying walk is a
counterexample certificate.

All answers are deterministic: searches expand states in (length,
lexicographic) order, so the reported counterexample is the first
failing walk in that order, completed into a lasso by the true orbit
of its last vertex.
"""

from __future__ import annotations

import math
import os
import warnings
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .core import Lasso, as_fraction, shadows, threshold_grid
from .errors import BoundTooSmall, NotDecaying, NotInvertible, StateExplosion

__all__ = [
    "DeltaGraph",
    "ModulusTable",
    "ShadowCertificate",
    "delta_graph",
    "shadowing_holds",
    "shadowing_modulus",
    "construct_shadow_point",
    "periodic_shadowing_holds",
    "strong_periodic_shadowing_holds",
    "strong_shadow_point",
    "special_shadowing_holds",
    "limit_shadowing_check",
    "two_sided_limit_shadowing_check",
    "lipschitz_constants",
    "modulus_table",
    "subset_cap",
]

DEFAULT_SUBSET_CAP = 2 ** 20


def subset_cap(cap=None):
    """Effective state cap: explicit argument, else DYNLAB_SUBSET_CAP, else 2^20."""
    if cap is not None:
        return cap
    return int(os.environ.get("DYNLAB_SUBSET_CAP", DEFAULT_SUBSET_CAP))


@dataclass(frozen=True)
class DeltaGraph:
    """The step graph of a system at threshold delta (strict inequality)."""

    delta: Fraction
    succ: tuple  # succ[i] = sorted tuple of j with d(f(i), j) < delta

    def edge(self, i, j):
        return j in self.succ[i]


def delta_graph(sys, delta):
    delta = as_fraction(delta)
    cut = sys.lt_cutoff(delta)
    rank, fmap = sys.rank, sys.fmap
    succ = tuple(
        tuple(j for j in range(sys.n) if rank[fmap[i]][j] < cut)
        for i in range(sys.n)
    )
    return DeltaGraph(delta, succ)


@dataclass(frozen=True)
class ShadowCertificate:
    """Evidence for a tracing verdict.

    ``kind`` is "counterexample" (a delta-pseudo-orbit no point traces;
    ``dying_step`` is the first index at which every tracer position is
    out of range) or "traced" (``point`` shadows ``lasso``).
    """

    kind: str
    delta: Fraction
    epsilon: Fraction
    lasso: Lasso
    dying_step: int | None = None
    point: object | None = None


def _ball_sets(sys, epsilon):
    """allowed[i] = indices within epsilon of i (strict)."""
    cut = sys.lt_cutoff(epsilon)
    rank = sys.rank
    return tuple(
        frozenset(z for z in range(sys.n) if rank[z][i] < cut) for i in range(sys.n)
    )


def _die_search(succ, step, allowed, cap):
    """Find a walk of the step graph along which the viable set empties.

    States are (vertex, frozenset of viable tracer positions); the
    search starts from (v, allowed[v]) for every v and moves along
    graph edges with W -> step(W) intersected with the target's allowed
    set.  Returns the vertex walk to the first death in (length, lex)
    order, or None if no death state is reachable.
    """
    visited = set()
    queue = deque()
    parent = {}
    for v in range(len(succ)):
        state = (v, allowed[v])
        if state not in visited:
            visited.add(state)
            queue.append(state)
    while queue:
        v, w = queue.popleft()
        image = frozenset(step[z] for z in w)
        for u in succ[v]:
            w2 = image & allowed[u]
            state = (u, w2)
            if state in visited:
                continue
            visited.add(state)
            if len(visited) > cap:
                raise StateExplosion(len(visited), cap, frontier_sample=[v, u])
            parent[state] = (v, w)
            if not w2:
                walk = [u]
                cur = state
                while cur in parent:
                    cur = parent[cur]
                    walk.append(cur[0])
                walk.reverse()
                return walk
            queue.append(state)
    return None


def _complete_walk(sys, walk):
    """Extend a finite index walk into a lasso by the true orbit of its end."""
    nxt = sys.fmap[walk[-1]]
    prefix = [nxt]
    while sys.preperiod(prefix[-1]) > 0:
        prefix.append(sys.fmap[prefix[-1]])
    stem = tuple(sys.points[i] for i in walk + prefix[:-1])
    cycle = tuple(sys.points[i] for i in sys.cycle(prefix[-1]))
    return Lasso(stem=stem, cycle=cycle)


def shadowing_holds(sys, delta, epsilon, cap=None):
    """Is every delta-pseudo-orbit epsilon-shadowed by some orbit?

    Returns (True, None) or (False, certificate) where the certificate
    carries the first dying pseudo-orbit in (length, lex) order,
    completed into a lasso by a true orbit tail.

    Raises
    ------
    StateExplosion
        If the subset search would exceed the state cap
        (``DYNLAB_SUBSET_CAP``, default 2^20).
    """
    delta, epsilon = as_fraction(delta), as_fraction(epsilon)
    if epsilon <= 0 or delta <= 0:
        raise ValueError("thresholds must be positive")
    g = delta_graph(sys, delta)
    allowed = _ball_sets(sys, epsilon)
    walk = _die_search(g.succ, sys.fmap, allowed, subset_cap(cap))
    if walk is None:
        return True, None
    lasso = _complete_walk(sys, walk)
    return False, ShadowCertificate(
        "counterexample", delta, epsilon, lasso, dying_step=len(walk) - 1
    )


def construct_shadow_point(sys, lasso, epsilon):
    """Search for a point whose orbit epsilon-shadows the given lasso.

    Returns (point, info).  On success info carries the verified
    certificate; on failure point is None and info locates the
    obstruction: the first index at which the viable tracer set dies
    (one-sided), or the forward/backward survivor sets whose
    intersection at index 0 is empty (two-sided).
    """
    epsilon = as_fraction(epsilon)
    for z in sys.points:
        if shadows(sys, z, lasso, epsilon):
            return z, {"certificate": ShadowCertificate(
                "traced", None, epsilon, lasso, point=z)}
    if lasso.two_sided:
        fwd = Lasso(stem=lasso.stem, cycle=lasso.cycle)
        forward = tuple(z for z in sys.points if shadows(sys, z, fwd, epsilon))
        back = tuple(
            z for z in sys.points
            if all(
                sys.d(sys.apply(z, k), lasso[k]) < epsilon
                for k in range(-math.lcm(len(sys.cycle(sys.index[z])),
                                         len(lasso.past)), 0)
            )
        )
        return None, {"forward_survivors": forward, "backward_survivors": back}
    allowed = _ball_sets(sys, epsilon)
    w = allowed[sys.index[lasso[0]]]
    i = 0
    seen = {}
    while w:
        key = (i if i < len(lasso.stem)
               else len(lasso.stem) + (i - len(lasso.stem)) % len(lasso.cycle), w)
        if key in seen:
            raise AssertionError(
                "viable set cycles without dying, yet no single tracer exists")
        seen[key] = i
        i += 1
        target = sys.index[lasso[i]]
        w = frozenset(sys.fmap[z] for z in w) & allowed[target]
    return None, {"failed_at": i}


def _closed_walks_of_graph(succ, length, cap, counter):
    """Closed walks w of given length with w[0] = min(w), primitive only."""
    walks = []

    def extend(walk):
        counter[0] += 1
        if counter[0] > cap:
            raise StateExplosion(counter[0], cap)
        if len(walk) == length:
            if walk[0] in succ[walk[-1]]:
                t = tuple(walk)
                for d in range(1, length):
                    if length % d == 0 and t[:d] * (length // d) == t:
                        return  # repetition of a shorter closed walk
                walks.append(t)
            return
        for u in succ[walk[-1]]:
            if u >= walk[0]:
                walk.append(u)
                extend(walk)
                walk.pop()

    for v in range(len(succ)):
        extend([v])
    return walks


def _warn_if_bound_blind(succ, bound, label):
    g = nx.DiGraph((i, j) for i, row in enumerate(succ) for j in row)
    for comp in nx.strongly_connected_components(g):
        if len(comp) > bound:
            warnings.warn(
                f"{label}: step graph has a strongly connected part of size "
                f"{len(comp)} > bound {bound}; longer periodic pseudo-orbits "
                "exist and were not checked",
                BoundTooSmall,
                stacklevel=3,
            )
            return


def _periodic_variant_holds(sys, delta, epsilon, period_bound, strong, cap):
    delta, epsilon = as_fraction(delta), as_fraction(epsilon)
    g = delta_graph(sys, delta)
    _warn_if_bound_blind(g.succ, period_bound,
                         "strong periodic" if strong else "periodic")
    eps_cut = sys.lt_cutoff(epsilon)
    rank = sys.rank
    per = sys.periodic_indices()
    counter = [0]
    cap = subset_cap(cap)
    for k in range(1, period_bound + 1):
        for walk in _closed_walks_of_graph(g.succ, k, cap, counter):
            found = False
            for z in per:
                p = len(sys.cycle(z))
                if strong and k % p != 0:
                    continue
                horizon = k if strong else math.lcm(p, k)
                if all(rank[sys.power(z, i)][walk[i % k]] < eps_cut
                       for i in range(horizon)):
                    found = True
                    break
            if not found:
                lasso = Lasso(cycle=tuple(sys.points[i] for i in walk))
                return False, ShadowCertificate(
                    "counterexample", delta, epsilon, lasso)
    return True, None


def periodic_shadowing_holds(sys, delta, epsilon, period_bound, cap=None):
    """Is every periodic delta-pseudo-orbit of period <= period_bound
    epsilon-shadowed by some periodic point?

    Periodic pseudo-orbits are the closed walks of the step graph
    (rotations and repetitions are checked once; a tracer for a walk
    yields tracers for its rotations by applying f).  Emits a
    :class:`BoundTooSmall` warning when the step graph provably has
    cycles longer than the bound.
    """
    return _periodic_variant_holds(sys, delta, epsilon, period_bound, False, cap)


def strong_periodic_shadowing_holds(sys, delta, epsilon, period_bound, cap=None):
    """Like :func:`periodic_shadowing_holds`, but the tracer must have the
    same period as the pseudo-orbit (f^N(x) = x for declared period N)."""
    return _periodic_variant_holds(sys, delta, epsilon, period_bound, True, cap)


def strong_shadow_point(sys, cycle_points, epsilon):
    """Exact-period tracer for one purely periodic sequence of points.

    Searches for x with f^N(x) = x (N = len(cycle_points)) whose orbit
    stays epsilon-close to the sequence read cyclically, and returns it,
    or None.  This is the single-instance form of the quantified
    :func:`strong_periodic_shadowing_holds`; the sequence need not be a
    pseudo-orbit at any particular delta.
    """
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    k = len(cycle_points)
    if k == 0:
        raise ValueError("need a non-empty cyclic sequence")
    walk = [sys.index[p] for p in cycle_points]
    eps_cut = sys.lt_cutoff(epsilon)
    rank = sys.rank
    for z in sys.periodic_indices():
        if k % len(sys.cycle(z)) != 0:
            continue
        if all(rank[sys.power(z, i)][walk[i]] < eps_cut for i in range(k)):
            return sys.points[z]
    return None


# -- moduli -----------------------------------------------------------------


@dataclass(frozen=True)
class ModulusTable:
    """Best thresholds per epsilon for one tracing property.

    ``rows`` is a tuple of (epsilon, payload) pairs, epsilon ascending
    over the positive threshold grid.  The payload is the best (largest)
    delta at which the property holds, or None; specification-type
    tables store (N, delta) pairs instead.
    """

    prop: str
    rows: tuple

    def best(self, epsilon):
        for eps, payload in self.rows:
            if eps == epsilon:
                return payload
        raise KeyError(f"epsilon {epsilon} not on the grid")

    def populated(self):
        return all(payload is not None for _, payload in self.rows)


def _largest_passing(values, predicate):
    """Rightmost value in ascending ``values`` satisfying a monotone
    (downward-closed) predicate, or None."""
    lo, hi = 0, len(values) - 1
    if predicate(values[hi]):
        return values[hi]
    if not predicate(values[lo]):
        return None
    # invariant: predicate(values[lo]) and not predicate(values[hi])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if predicate(values[mid]):
            lo = mid
        else:
            hi = mid
    return values[lo]


def shadowing_modulus(sys, epsilon, cap=None):
    """Largest grid delta at which shadowing holds for this epsilon.

    Never None: below the least positive distance the only pseudo-orbits
    are true orbits, which shadow themselves at any positive epsilon.
    """
    grid = threshold_grid(sys)
    return _largest_passing(
        grid.positive, lambda d: shadowing_holds(sys, d, epsilon, cap)[0]
    )


def modulus_table(sys, prop, period_bound=8, cap=None):
    """ModulusTable for prop in {"shadowing", "periodic", "strong-periodic"}."""
    grid = threshold_grid(sys)

    def best(eps):
        if prop == "shadowing":
            pred = lambda d: shadowing_holds(sys, d, eps, cap)[0]
        elif prop == "periodic":
            pred = lambda d: periodic_shadowing_holds(
                sys, d, eps, period_bound, cap)[0]
        elif prop == "strong-periodic":
            pred = lambda d: strong_periodic_shadowing_holds(
                sys, d, eps, period_bound, cap)[0]
        else:
            raise ValueError(f"unknown property {prop!r}")
        return _largest_passing(grid.positive, pred)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundTooSmall)
        rows = tuple((eps, best(eps)) for eps in grid.positive)
    return ModulusTable(prop, rows)


def special_shadowing_holds(sys, epsilon, period_bound=8, cap=None):
    """Shadowing and periodic shadowing both admit a delta at this epsilon."""
    s = shadowing_modulus(sys, epsilon, cap)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundTooSmall)
        p = _largest_passing(
            threshold_grid(sys).positive,
            lambda d: periodic_shadowing_holds(sys, d, epsilon, period_bound,
                                               cap)[0],
        )
    return (s is not None and p is not None), {
        "shadowing_delta": s,
        "periodic_delta": p,
    }


# -- limit-type variants ----------------------------------------------------


def _require_exact_cycle(sys, cycle, what):
    for j, x in enumerate(cycle):
        nxt = cycle[(j + 1) % len(cycle)]
        if sys.apply(x) != nxt:
            raise NotDecaying(
                f"{what} step {j}: f({x!r}) = {sys.apply(x)!r} != {nxt!r}"
            )


def limit_shadowing_check(sys, lasso):
    """Tracer for an error-decaying pseudo-orbit (errors eventually zero).

    On a finite metric space "errors -> 0" forces the tail to be an
    exact orbit segment, i.e. the lasso's cycle must be a true cycle of
    f (else :class:`NotDecaying`).  The point of that cycle whose orbit
    is phase-aligned with the tail then satisfies d(f^i(x), x_i) = 0
    for all i past the stem, so a tracer always exists.
    """
    if lasso.two_sided:
        raise ValueError("one-sided lasso expected; see the two-sided variant")
    _require_exact_cycle(sys, lasso.cycle, "cycle")
    c = len(lasso.cycle)
    x = lasso.cycle[(-len(lasso.stem)) % c]
    assert all(sys.apply(x, i) == lasso[i]
               for i in range(len(lasso.stem), len(lasso.stem) + c))
    return x


def two_sided_limit_shadowing_check(sys, lasso):
    """Orbit matching a two-sided decaying lasso in both time directions.

    Both tails must be exact cycles of f.  On a finite invertible
    system every orbit is a single cycle, so a matching point exists
    iff the past and future tails lie on the same orbit with
    compatible phases; the search below settles that exactly.
    Returns the point, or None when past and future cannot be joined.
    """
    if not sys.invertible:
        raise NotInvertible("two-sided limit tracing needs an invertible system")
    if not lasso.two_sided:
        raise ValueError("two-sided lasso expected")
    _require_exact_cycle(sys, lasso.cycle, "future cycle")
    _require_exact_cycle(sys, lasso.past, "past cycle")
    s = len(lasso.stem)
    for z in sys.points:
        cz = len(sys.cycle(sys.index[z]))
        fwd = math.lcm(cz, len(lasso.cycle))
        back = math.lcm(cz, len(lasso.past))
        if all(sys.apply(z, i) == lasso[i] for i in range(s, s + fwd)) and all(
            sys.apply(z, i) == lasso[i] for i in range(-back, 0)
        ):
            return z
    return None


def lipschitz_constants(sys, cap=None):
    """Linear tracing envelope: (L, d0) with every d-pseudo-orbit
    (L*d)-shadowed for all 0 < d <= d0.

    Computed from the exact threshold table: for each grid d the least
    grid epsilon that shadows, then the envelope slope is the running
    maximum of eps/d.  Among grid candidates the pair minimising L*d0
    (the certified tracing radius) is returned, preferring larger d0 on
    ties.  On a finite system the table always fits: below the least
    positive distance pseudo-orbits are true orbits.
    """
    grid = threshold_grid(sys)
    best = None
    slope = Fraction(0)
    for d in grid.positive:
        eps_needed = None
        for eps in grid.positive:
            if shadowing_holds(sys, d, eps, cap)[0]:
                eps_needed = eps
                break
        assert eps_needed is not None  # top epsilon always shadows
        slope = max(slope, eps_needed / d)
        cand = (slope * d, -d, slope, d)
        if best is None or cand < best:
            best = cand
    _, _, L, d0 = best
    # certified: for every grid d <= d0 the pair (d, L*d) passes
    return L, d0
