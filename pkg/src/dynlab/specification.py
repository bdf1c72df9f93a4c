"""Segment-chain tracing (specification-style properties) and the exact
block reductions between chain tracing and pseudo-orbit tracing.

A chain with gap n is a list of points x_1..x_k with d(f^n(x_i),
x_{i+1}) < delta; a tracer is a point whose orbit stays epsilon-close
to the n-step orbit burst of each x_i over the window [i*n, (i+1)*n).
Chains with gap n are walks of the graph with edges x -> y iff
d(f^n(x), y) < delta, so the same viable-set search used for
pseudo-orbits decides traceability, advancing n steps per edge.

The quantifier "for some/all n >= N" is finite on a finite system: the
n-step map, the gap graph, and the window sets are all eventually
periodic in n with preperiod at most the largest orbit preperiod T and
period dividing the lcm P of cycle lengths, so checking
n in [N, max(N+P, T+2P)) covers every n >= N.  The bound is reported.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .core import Lasso, as_fraction, shadows, threshold_grid
from .errors import BoundTooSmall, ModulusViolation, NotDecaying
from .shadowing import (
    ModulusTable,
    _closed_walks_of_graph,
    _die_search,
    _warn_if_bound_blind,
    periodic_shadowing_holds,
    strong_periodic_shadowing_holds,
    strong_shadow_point,
    subset_cap,
    two_sided_limit_shadowing_check,
)

__all__ = [
    "SpecInstance",
    "SpecCertificate",
    "Blocked",
    "gap_values",
    "local_weak_spec_holds",
    "local_spec_holds",
    "trace_chain",
    "eta_modulus",
    "blockify",
    "spec_to_shadow_point",
    "modulus_table_for_spec",
    "generalized_spec_checks",
    "pairwise_tracing_chain",
    "derived_periodic_shadowing",
]


@dataclass(frozen=True)
class SpecInstance:
    """A segment chain: sources, gap length, and its closing convention."""

    sources: tuple
    gap: int
    closed: bool
    delta: Fraction

    def verify(self, sys):
        """Re-check the chain inequality d(f^gap(x_i), x_{i+1}) < delta."""
        pairs = list(zip(self.sources, self.sources[1:]))
        if self.closed:
            pairs.append((self.sources[-1], self.sources[0]))
        return all(
            sys.d(sys.apply(x, self.gap), y) < self.delta for x, y in pairs
        )


@dataclass(frozen=True)
class SpecCertificate:
    """A tracing point for a chain, re-verifiable by orbit evaluation."""

    point: object
    sources: tuple
    gap: int
    epsilon: Fraction
    periodic: bool

    def verify(self, sys):
        k, n = len(self.sources), self.gap
        if self.periodic and sys.apply(self.point, k * n) != self.point:
            return False
        return all(
            sys.d(sys.apply(self.point, i * n + j), sys.apply(self.sources[i], j))
            < self.epsilon
            for i in range(k)
            for j in range(n)
        )


def gap_values(sys, N):
    """All gap lengths n >= N with distinct behavior, as an exact range.

    f^n, the gap graph, and the tracking windows repeat in n beyond
    T + P with period P (T = max preperiod, P = lcm of cycle lengths),
    so [N, max(N+P, T+2P)) exhausts the quantifier.
    """
    T, P = sys.max_preperiod, sys.cycle_lcm
    return range(N, max(N + P, T + 2 * P))


def _gap_structures(sys, n, delta, epsilon):
    """(succ, step, allowed) for gap length n: edges of the gap graph,
    the n-step map, and the epsilon tracking window per vertex."""
    d_cut = sys.lt_cutoff(delta)
    e_cut = sys.lt_cutoff(epsilon)
    rank = sys.rank
    step = [sys.power(i, n) for i in range(sys.n)]
    succ = tuple(
        tuple(j for j in range(sys.n) if rank[step[i]][j] < d_cut)
        for i in range(sys.n)
    )
    allowed = []
    for v in range(sys.n):
        members = []
        for z in range(sys.n):
            zi, vi = z, v
            ok = True
            for _ in range(n):
                if rank[zi][vi] >= e_cut:
                    ok = False
                    break
                zi, vi = sys.fmap[zi], sys.fmap[vi]
            if ok:
                members.append(z)
        allowed.append(frozenset(members))
    return succ, step, tuple(allowed)


def local_weak_spec_holds(sys, epsilon, N, delta, cap=None):
    """Can every segment chain with any gap n >= N be epsilon-traced?

    Returns (bool, info); info always reports the finite range of gaps
    that discharges "n >= N", and on failure carries the offending
    chain as a verified SpecInstance.
    """
    epsilon, delta = as_fraction(epsilon), as_fraction(delta)
    if epsilon <= 0 or delta <= 0 or N < 1:
        raise ValueError("need positive thresholds and N >= 1")
    gaps = gap_values(sys, N)
    cap = subset_cap(cap)
    for n in gaps:
        succ, step, allowed = _gap_structures(sys, n, delta, epsilon)
        walk = _die_search(succ, step, allowed, cap)
        if walk is not None:
            chain = SpecInstance(
                sources=tuple(sys.points[i] for i in walk),
                gap=n,
                closed=False,
                delta=delta,
            )
            return False, {"gap_range": gaps, "counterexample": chain}
    return True, {"gap_range": gaps}


def trace_chain(sys, sources, gap, epsilon, periodic=False):
    """Scan all points for a tracer of the given chain, definitionally.

    With periodic=True the tracer must also satisfy f^(k*gap)(x) = x.
    Returns a SpecCertificate or None.
    """
    epsilon = as_fraction(epsilon)
    k = len(sources)
    for z in sys.points:
        if periodic and sys.apply(z, k * gap) != z:
            continue
        cert = SpecCertificate(z, tuple(sources), gap, epsilon, periodic)
        if cert.verify(sys):
            return cert
    return None


def local_spec_holds(sys, epsilon, N, delta, k_bound=6, cap=None):
    """Can every closed chain (x_{k+1} = x_1, k <= k_bound, gap n >= N)
    be epsilon-traced by a point with f^(kn)(x) = x?

    Closed chains are closed walks of the gap graph; rotations and
    repetitions reduce to each other (shift the tracer by f^(rn)), so
    only primitive walks rooted at their least vertex are searched.
    Warns BoundTooSmall when the gap graph provably has longer cycles.
    """
    epsilon, delta = as_fraction(epsilon), as_fraction(delta)
    if epsilon <= 0 or delta <= 0 or N < 1:
        raise ValueError("need positive thresholds and N >= 1")
    gaps = gap_values(sys, N)
    e_cut = sys.lt_cutoff(epsilon)
    rank = sys.rank
    cap = subset_cap(cap)
    counter = [0]
    for n in gaps:
        succ, step, _ = _gap_structures(sys, n, delta, epsilon)
        _warn_if_bound_blind(succ, k_bound, f"closed chains at gap {n}")
        per = [z for z in range(sys.n) if sys.preperiod(z) == 0]
        for k in range(1, k_bound + 1):
            for walk in _closed_walks_of_graph(succ, k, cap, counter):
                found = False
                for z in per:
                    if (k * n) % len(sys.cycle(z)) != 0:
                        continue
                    zi = z
                    ok = True
                    for i in range(k):
                        vi = walk[i]
                        for _ in range(n):
                            if rank[zi][vi] >= e_cut:
                                ok = False
                                break
                            zi, vi = sys.fmap[zi], sys.fmap[vi]
                        if not ok:
                            break
                    if ok:
                        found = True
                        break
                if not found:
                    chain = SpecInstance(
                        sources=tuple(sys.points[i] for i in walk),
                        gap=n,
                        closed=True,
                        delta=delta,
                    )
                    return False, {"gap_range": gaps, "counterexample": chain}
    return True, {"gap_range": gaps}


def eta_modulus(sys, delta1, N):
    """Worst N-step spread of a pair closer than delta1:
    max{ d(f^i(u), f^i(v)) : d(u,v) < delta1, 0 <= i <= N }."""
    delta1 = as_fraction(delta1)
    worst = Fraction(0)
    for a in range(sys.n):
        for b in range(a + 1, sys.n):
            if sys.dist[a][b] >= delta1:
                continue
            u, v = a, b
            for _ in range(N + 1):
                if sys.dist[u][v] > worst:
                    worst = sys.dist[u][v]
                u, v = sys.fmap[u], sys.fmap[v]
    return worst


@dataclass(frozen=True)
class Blocked:
    """Result of blocking a pseudo-orbit into an N-gapped chain."""

    lasso: Lasso  # the blocked sequence y_i = x_{N*i}, as a lasso
    instance: SpecInstance  # one full stem+cycle window of it
    terms: tuple  # per-seam telescoped step distances


def blockify(sys, lasso, N, delta):
    """Block a pseudo-orbit into the chain y_i = x_{N*i} with gap N.

    Each seam is certified by the telescoping estimate

        d(f^N(y_i), y_{i+1}) <= sum_j d(f^(N-j)(x_{Ni+j}), f^(N-j-1)(x_{Ni+j+1}))

    whose terms are one-step errors pushed through f; the exact sums
    must stay below delta, else ModulusViolation reports the seam.
    """
    if lasso.two_sided:
        raise ValueError("blocking is a forward-time construction")
    delta = as_fraction(delta)
    s, c = len(lasso.stem), len(lasso.cycle)
    y_stem = tuple(lasso[N * i] for i in range(-(-s // N)))
    y_cycle = tuple(
        lasso[N * (len(y_stem) + i)] for i in range(c // math.gcd(N, c))
    )
    blocked = Lasso(stem=y_stem, cycle=y_cycle)
    seams = len(y_stem) + len(y_cycle)
    all_terms = []
    for i in range(seams):
        terms = []
        for j in range(N):
            u = sys.apply(lasso[N * i + j], N - j)
            v = sys.apply(lasso[N * i + j + 1], N - j - 1)
            terms.append(sys.d(u, v))
        terms = tuple(terms)
        all_terms.append(terms)
        if sum(terms) >= delta:
            raise ModulusViolation(i, terms, delta)
    window = tuple(blocked[i] for i in range(seams + 1))
    instance = SpecInstance(sources=window, gap=N, closed=False, delta=delta)
    return Blocked(blocked, instance, tuple(all_terms))


def spec_to_shadow_point(sys, lasso, N, epsilon, cap=None):
    """Produce an epsilon-shadowing point for a pseudo-orbit by the
    chain route: block at gap N, trace the blocked chain at epsilon/2,
    and let the N-step spread bound close the triangle estimate.

    Requires chain tracing to hold at (epsilon/2, N, delta) for some
    grid delta that also dominates N times the spread of the lasso's
    own error level (ValueError otherwise).  The returned point is
    re-verified against the original lasso before being returned.
    """
    epsilon = as_fraction(epsilon)
    half = epsilon / 2
    grid = threshold_grid(sys)
    err = max(
        (sys.d(sys.apply(x), y) for x, y in lasso.transitions()),
        default=Fraction(0),
    )
    level = next(v for v in grid.values if v > err)  # errors < level exactly
    eta = eta_modulus(sys, level, N)
    candidates = [d for d in grid.positive if d <= half and N * eta < d]
    chosen = None
    for d in sorted(candidates, reverse=True):
        if local_weak_spec_holds(sys, half, N, d, cap)[0]:
            chosen = d
            break
    if chosen is None:
        raise ValueError(
            "no grid delta supports the chain route at these parameters"
        )
    blocked = blockify(sys, lasso, N, chosen)
    y = blocked.lasso
    # trace the infinite blocked chain definitionally: the tracker must
    # stay within epsilon/2 of the n-step burst of every block
    sy, cy = len(y.stem), len(y.cycle)
    for z in sys.points:
        horizon = max(sys.preperiod(sys.index[z]), sy * N) + math.lcm(
            len(sys.cycle(sys.index[z])), cy * N
        )
        if all(
            sys.d(sys.apply(z, i * N + j), sys.apply(y[i], j)) < half
            for i in range(-(-horizon // N))
            for j in range(N)
        ):
            assert shadows(sys, z, lasso, epsilon)
            return z, SpecCertificate(
                z, tuple(y[i] for i in range(sy + cy)), N, half, False
            )
    raise AssertionError(
        "chain tracing held but no tracer was found for the blocked chain"
    )


def modulus_table_for_spec(sys, prop="weak", N_range=(1, 2, 3), k_bound=6,
                           cap=None):
    """Best (N, delta) per grid epsilon for chain tracing.

    prop "weak" quantifies over open chains, "full" over closed chains
    with periodic tracers.  Rows hold (N, delta) with the smallest
    workable N and the largest grid delta at that N, or None.
    """
    grid = threshold_grid(sys)

    def holds(eps, N, delta):
        if prop == "weak":
            return local_weak_spec_holds(sys, eps, N, delta, cap)[0]
        if prop == "full":
            return local_spec_holds(sys, eps, N, delta, k_bound, cap)[0]
        raise ValueError(f"unknown property {prop!r}")

    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundTooSmall)
        for eps in grid.positive:
            payload = None
            for N in N_range:
                passing = [d for d in grid.positive if holds(eps, N, d)]
                if passing:
                    payload = (N, max(passing))
                    break
            rows.append((eps, payload))
    return ModulusTable(f"spec-{prop}", tuple(rows))


def generalized_spec_checks(sys, variant, lasso=None, N=1, cap=None):
    """Finite-scale forms of the tail-exact and linear-envelope chain
    properties, each reduced through blocking.

    variant "limit": the blocked tail must be an exact orbit segment;
    returns the phase-matched tracer whose errors vanish eventually.
    variant "two-sided": both blocked tails must be exact; searches for
    an orbit matching past and future phases (may legitimately fail).
    variant "lipschitz": fits the linear envelope (L, d0) to the chain
    tracing table at N=1 (no lasso needed).
    """
    if variant == "lipschitz":
        grid = threshold_grid(sys)
        best = None
        slope = Fraction(0)
        for d in grid.positive:
            eps_needed = next(
                e for e in grid.positive
                if local_weak_spec_holds(sys, e, N, d, cap)[0]
            )
            slope = max(slope, eps_needed / d)
            cand = (slope * d, -d, slope, d)
            if best is None or cand < best:
                best = cand
        _, _, L, d0 = best
        return {"variant": variant, "holds": True, "envelope": (L, d0)}

    if lasso is None:
        raise ValueError(f"variant {variant!r} needs a lasso")
    if variant == "limit":
        blocked = _block_plain(sys, lasso, N)
        try:
            point = _limit_point_under_power(sys, blocked, N)
        except NotDecaying:
            return {"variant": variant, "holds": False, "point": None}
        return {"variant": variant, "holds": True, "point": point}
    if variant == "two-sided":
        point = two_sided_limit_shadowing_check(sys, lasso)
        return {"variant": variant, "holds": point is not None, "point": point}
    raise ValueError(f"unknown variant {variant!r}")


def _block_plain(sys, lasso, N):
    """y_i = x_(N*i) without any threshold bookkeeping."""
    s, c = len(lasso.stem), len(lasso.cycle)
    y_stem = tuple(lasso[N * i] for i in range(-(-s // N)))
    start = len(y_stem)
    y_cycle = tuple(lasso[N * (start + i)] for i in range(c // math.gcd(N, c)))
    return Lasso(stem=y_stem, cycle=y_cycle)


def _limit_point_under_power(sys, blocked, N):
    """Tracer whose f^N-orbit eventually agrees with the blocked tail."""
    cyc = blocked.cycle
    for j, x in enumerate(cyc):
        if sys.apply(x, N) != cyc[(j + 1) % len(cyc)]:
            raise NotDecaying(
                f"blocked cycle step {j}: f^{N}({x!r}) != {cyc[(j + 1) % len(cyc)]!r}"
            )
    c = len(cyc)
    x = cyc[(-len(blocked.stem)) % c]
    return x


# -- implication chains at matched bounds -------------------------------------


def pairwise_tracing_chain(sys, delta, epsilon, k_bound=6, cap=None):
    """The implication chain

        exact-period tracing  =>  chain tracing at N=1  =>  periodic tracing,

    checked pairwise at equal thresholds and matched bounds.

    The first link is discharged per instance: a closed chain with gap n
    unrolls into the period-(k*n) cyclic sequence that inserts each
    source's n-step orbit burst, and a tracer of matching exact period
    for that sequence (found by the walk machinery) satisfies the chain
    windows literally — so finding one must imply a chain tracer.  The
    second link is the boolean implication from local_spec_holds at N=1
    to periodic_shadowing_holds at the same thresholds and bound, sound
    because every periodic pseudo-orbit is a closed chain with gap 1.
    The third row restates the definitional implication from
    exact-period tracing to some-period tracing.

    Returns a dict with one entry per link plus "holds" for their
    conjunction and "routes_equal" recording whether the two tracer
    routes of link one agreed in both directions on every instance.
    """
    delta, epsilon = as_fraction(delta), as_fraction(epsilon)
    if delta <= 0 or epsilon <= 0:
        raise ValueError("thresholds must be positive")
    cap = subset_cap(cap)
    counter = [0]
    checked = 0
    exact_to_chain = True
    routes_equal = True
    counterexample = None
    for n in gap_values(sys, 1):
        succ, _, _ = _gap_structures(sys, n, delta, epsilon)
        _warn_if_bound_blind(succ, k_bound, f"closed chains at gap {n}")
        for k in range(1, k_bound + 1):
            for walk in _closed_walks_of_graph(succ, k, cap, counter):
                checked += 1
                sources = tuple(sys.points[i] for i in walk)
                unrolled = tuple(
                    sys.points[sys.power(i, r)] for i in walk for r in range(n)
                )
                exact = strong_shadow_point(sys, unrolled, epsilon)
                chain = trace_chain(sys, sources, n, epsilon, periodic=True)
                if (exact is None) != (chain is None):
                    routes_equal = False
                if exact is not None and chain is None:
                    exact_to_chain = False
                    if counterexample is None:
                        counterexample = SpecInstance(
                            sources=sources, gap=n, closed=True, delta=delta)
    chain_ok = local_spec_holds(sys, epsilon, 1, delta, k_bound, cap)[0]
    periodic_ok = periodic_shadowing_holds(sys, delta, epsilon, k_bound, cap)[0]
    exact_ok = strong_periodic_shadowing_holds(
        sys, delta, epsilon, k_bound, cap)[0]
    links = {
        "exact_to_chain": {
            "holds": exact_to_chain,
            "routes_equal": routes_equal,
            "counterexample": counterexample,
        },
        "chain_to_periodic": {
            "holds": (not chain_ok) or periodic_ok,
            "chain": chain_ok,
            "periodic": periodic_ok,
        },
        "exact_to_periodic": {
            "holds": (not exact_ok) or periodic_ok,
            "exact": exact_ok,
            "periodic": periodic_ok,
        },
    }
    holds = all(row["holds"] for row in links.values())
    return {
        "thresholds": (delta, epsilon),
        "instances_checked": checked,
        "holds": holds,
        **links,
    }


def derived_periodic_shadowing(sys, epsilon, N_range=(1, 2, 3), k_bound=6,
                               period_bound=None, cap=None):
    """Transfer chain tracing at half quality into periodic tracing.

    Hypothesis search on the grid: the first N in N_range admitting a
    grid delta < epsilon/2 with local_spec_holds at (epsilon/2, N,
    delta), taking the largest such delta; then the largest grid delta1
    whose N-step continuity spread eta = eta_modulus(sys, delta1, N)
    satisfies N*eta < delta (delta1 always exists: eta vanishes below
    the least positive distance).  Blocking a periodic delta1-pseudo-
    orbit by N telescopes every seam to at most N*eta < delta, the
    blocked chain is then traced at epsilon/2 by a point of matching
    power-period, and unblocking costs at most epsilon/2 + N*eta <
    epsilon — so periodic_shadowing_holds must confirm at (delta1,
    epsilon).  Returns the parameters and the confirmation; when no
    grid parameters fit the hypothesis shape, "applicable" is False and
    nothing is asserted.
    """
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if period_bound is None:
        period_bound = k_bound
    grid = threshold_grid(sys)
    half = epsilon / 2
    chosen = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundTooSmall)
        for N in N_range:
            for delta in reversed(grid.positive):
                if delta >= half:
                    continue
                if local_spec_holds(sys, half, N, delta, k_bound, cap)[0]:
                    chosen = (N, delta)
                    break
            if chosen:
                break
    if chosen is None:
        return {"applicable": False, "epsilon": epsilon}
    N, delta = chosen
    delta1 = eta = None
    for v in reversed(grid.positive):
        spread = eta_modulus(sys, v, N)
        if N * spread < delta:
            delta1, eta = v, spread
            break
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundTooSmall)
        holds, certificate = periodic_shadowing_holds(
            sys, delta1, epsilon, period_bound, cap)
    return {
        "applicable": True,
        "epsilon": epsilon,
        "N": N,
        "delta": delta,
        "eta": eta,
        "delta1": delta1,
        "holds": holds,
        "certificate": certificate,
    }
