"""Finite metric systems and eventually periodic pseudo-orbits.

A *finite metric system* is a finite set of points with an exact
(rational-valued) metric and a self-map.  Orbits on such a system are
eventually periodic, so every infinite quantifier "for all times i"
can be discharged by checking a finite window: preperiod plus one
least common multiple of the cycle lengths involved.  That reduction
is the workhorse of this module and is unit-tested against long
unrolled prefixes.

Infinite (pseudo-)orbits are represented by :class:`Lasso` values:
a finite stem followed by a cycle repeated forever, optionally
extended into the past by a (possibly different) cycle.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import MetricViolation, NotABijection, NotInvertible

__all__ = [
    "FiniteSystem",
    "Lasso",
    "ThresholdGrid",
    "as_fraction",
    "build_finite_system",
    "is_pseudo_orbit",
    "is_periodic_pseudo_orbit",
    "shadows",
    "threshold_grid",
]


def as_fraction(value):
    """Coerce ints, strings like ``"2/3"``, and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class FiniteSystem:
    """A finite metric space together with a self-map.

    Use :func:`build_finite_system` instead of calling this directly;
    the builder validates the metric axioms and the map.

    Attributes
    ----------
    points : tuple
        Point identifiers, in canonical order.
    dist : tuple of tuple of Fraction
        Exact distance matrix aligned with ``points``.
    fmap : tuple of int
        ``fmap[i]`` is the index of the image of point ``i``.
    invertible : bool
        Whether the system acts on two-sided time.  When True the map
        is a bijection and every point is periodic.
    relation : tuple of tuple of int, or None
        Optional multivalued successor relation (used by window systems
        to remember the full shift-extension structure that the
        single-valued map collapses).
    """

    def __init__(self, points, dist, fmap, invertible, relation=None):
        self.points = tuple(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        self.dist = tuple(tuple(row) for row in dist)
        self.fmap = tuple(fmap)
        self.invertible = bool(invertible)
        self.relation = None if relation is None else tuple(
            tuple(sorted(succ)) for succ in relation
        )
        self._orbit_cache = None
        self._values_cache = None
        self._rank_cache = None

    # -- basic queries -------------------------------------------------

    @property
    def n(self):
        return len(self.points)

    def d(self, x, y):
        """Distance between two point identifiers."""
        return self.dist[self.index[x]][self.index[y]]

    def apply(self, x, k=1):
        """Point identifier of the k-th image of ``x`` (k may be negative)."""
        return self.points[self.power(self.index[x], k)]

    # -- orbit structure -----------------------------------------------

    def _orbits(self):
        if self._orbit_cache is None:
            prefixes, cycles = [], []
            for start in range(self.n):
                seen = {}
                seq = []
                v = start
                while v not in seen:
                    seen[v] = len(seq)
                    seq.append(v)
                    v = self.fmap[v]
                enter = seen[v]
                prefixes.append(tuple(seq[:enter]))
                cycles.append(tuple(seq[enter:]))
            self._orbit_cache = (tuple(prefixes), tuple(cycles))
        return self._orbit_cache

    def preperiod(self, i):
        """Number of steps before the orbit of index ``i`` enters its cycle."""
        return len(self._orbits()[0][i])

    def cycle(self, i):
        """The cycle (as an index tuple) eventually reached from index ``i``."""
        return self._orbits()[1][i]

    def power(self, i, k):
        """Index of f^k applied to index ``i``; negative k needs invertibility."""
        prefix, cycle = self._orbits()[0][i], self._orbits()[1][i]
        if k < 0:
            if not self.invertible:
                raise NotInvertible("negative iterates need an invertible system")
            return cycle[k % len(cycle)]
        if k < len(prefix):
            return prefix[k]
        return cycle[(k - len(prefix)) % len(cycle)]

    @property
    def max_preperiod(self):
        return max((self.preperiod(i) for i in range(self.n)), default=0)

    @property
    def cycle_lcm(self):
        """lcm of the lengths of all cycles of the functional graph."""
        lengths = {len(self.cycle(i)) for i in range(self.n)}
        return math.lcm(*lengths) if lengths else 1

    def periodic_indices(self):
        """Indices lying on a cycle of the functional graph."""
        return tuple(i for i in range(self.n) if self.preperiod(i) == 0)

    # -- exact threshold machinery ---------------------------------------
    #
    # Only the relative order of distances matters to the decision
    # procedures, so distances are compared through integer ranks.

    @property
    def distance_values(self):
        """Sorted tuple of the distinct values of the distance matrix."""
        if self._values_cache is None:
            self._values_cache = tuple(sorted({d for row in self.dist for d in row}))
        return self._values_cache

    @property
    def rank(self):
        """rank[i][j] = position of dist[i][j] in :attr:`distance_values`."""
        if self._rank_cache is None:
            pos = {v: k for k, v in enumerate(self.distance_values)}
            self._rank_cache = tuple(
                tuple(pos[d] for d in row) for row in self.dist
            )
        return self._rank_cache

    def lt_cutoff(self, q):
        """Number of distance values < q, so d < q iff rank(d) < cutoff."""
        return bisect_left(self.distance_values, q)

    def le_cutoff(self, q):
        """Number of distance values <= q, so d <= q iff rank(d) < cutoff."""
        return bisect_right(self.distance_values, q)

    @property
    def max_distance(self):
        return self.distance_values[-1]

    def __repr__(self):
        tag = "invertible" if self.invertible else "forward"
        return f"<FiniteSystem {self.n} points, {tag}>"


@dataclass(frozen=True)
class Lasso:
    """Finite presentation of an eventually periodic (pseudo-)orbit.

    One-sided lassos denote the sequence ``stem`` followed by ``cycle``
    repeated forever.  Two-sided lassos additionally run a cycle
    backwards in time: index -1 is the last element of ``past_cycle``
    (which defaults to ``cycle``), index -2 the one before, and so on.
    """

    stem: tuple = ()
    cycle: tuple = ()
    two_sided: bool = False
    past_cycle: tuple | None = None

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be non-empty")
        if self.past_cycle is not None and not self.two_sided:
            raise ValueError("past_cycle only makes sense for two-sided lassos")

    @property
    def past(self):
        return self.cycle if self.past_cycle is None else self.past_cycle

    def __getitem__(self, i):
        s = len(self.stem)
        if i < 0:
            if not self.two_sided:
                raise IndexError("one-sided lasso has no negative indices")
            return self.past[i % len(self.past)]
        if i < s:
            return self.stem[i]
        return self.cycle[(i - s) % len(self.cycle)]

    def transitions(self):
        """All consecutive pairs (x_i, x_{i+1}), i drawn from one full pattern.

        Covers the stem, the seams, and one full wrap of every cycle;
        by periodicity this is every transition the lasso ever makes.
        """
        s = len(self.stem)
        pairs = []
        if self.two_sided:
            past = self.past
            pairs += [(past[j], past[(j + 1) % len(past)]) for j in range(len(past))]
            # seam from the past into index 0:
            pairs.append((past[-1], self[0]))
        pairs += [(self.stem[j], self[j + 1]) for j in range(s)]
        pairs += [
            (self.cycle[j], self.cycle[(j + 1) % len(self.cycle)])
            for j in range(len(self.cycle))
        ]
        return pairs

    def window(self, lo, hi):
        """The tuple (x_lo, ..., x_{hi-1})."""
        return tuple(self[i] for i in range(lo, hi))


@dataclass(frozen=True)
class ThresholdGrid:
    """All thresholds at which any strict or non-strict predicate can flip.

    Contains 0, every distance value of the system, a value strictly
    below the least positive distance, and a sentinel strictly above
    the maximum distance (strict-< predicates keep changing up there).
    Between consecutive grid values every predicate built from distance
    comparisons is constant.
    """

    values: tuple

    @property
    def positive(self):
        return tuple(v for v in self.values if v > 0)

    @property
    def submin(self):
        """A positive value below every positive distance."""
        return self.positive[0]

    @property
    def top(self):
        """A value above every distance."""
        return self.values[-1]


def build_finite_system(points, dist, fmap, invertible=None, relation=None):
    """Validate and assemble a :class:`FiniteSystem`.

    Parameters
    ----------
    points : sequence
        Point identifiers (order is kept and canonical).
    dist : sequence of sequences
        Square matrix of exact rationals (Fraction, int, or "p/q" strings).
    fmap : sequence
        Image of each point, given by identifier, aligned with ``points``.
    invertible : bool or None
        Requested time structure.  ``None`` means "two-sided iff the map
        is a bijection".  ``True`` on a non-bijection raises
        :class:`NotABijection`.  ``False`` on a bijection is allowed and
        simply runs the system on one-sided time.
    relation : sequence of sequences or None
        Optional multivalued successor structure, by identifier.

    Raises
    ------
    MetricViolation
        If the distance table is not a metric (with the failing points).
    NotABijection
        See ``invertible``.
    """
    points = tuple(points)
    n = len(points)
    if len(set(points)) != n:
        raise ValueError("duplicate point identifiers")
    if n == 0:
        raise ValueError("a system needs at least one point")
    matrix = [[as_fraction(v) for v in row] for row in dist]
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ValueError("distance matrix shape does not match points")
    for i in range(n):
        if matrix[i][i] != 0:
            raise MetricViolation("identity", (points[i],), "nonzero self-distance")
    for i, j in itertools.combinations(range(n), 2):
        if matrix[i][j] != matrix[j][i]:
            raise MetricViolation("symmetry", (points[i], points[j]))
        if matrix[i][j] <= 0:
            raise MetricViolation("positivity", (points[i], points[j]))
    for i, j, k in itertools.product(range(n), repeat=3):
        if matrix[i][k] > matrix[i][j] + matrix[j][k]:
            raise MetricViolation(
                "triangle",
                (points[i], points[j], points[k]),
                f"{matrix[i][k]} > {matrix[i][j]} + {matrix[j][k]}",
            )

    idx = {p: i for i, p in enumerate(points)}
    try:
        fidx = tuple(idx[y] for y in fmap)
    except KeyError as e:
        raise ValueError(f"map sends a point outside the space: {e}") from None
    if len(fidx) != n:
        raise ValueError("map length does not match points")

    bijective = len(set(fidx)) == n
    if invertible is None:
        invertible = bijective
    elif invertible and not bijective:
        raise NotABijection("map declared invertible is not a bijection")

    rel = None
    if relation is not None:
        rel = tuple(tuple(idx[y] for y in succ) for succ in relation)
        if len(rel) != n:
            raise ValueError("relation length does not match points")

    sys_ = FiniteSystem(points, matrix, fidx, invertible, rel)
    if sys_.invertible:
        # Finite bijections have no transient part; rely on this everywhere.
        assert all(sys_.preperiod(i) == 0 for i in range(n))
    return sys_


def is_pseudo_orbit(sys, lasso, delta):
    """True iff every step of the lasso jumps by less than ``delta``.

    A sequence (x_i) is a delta-pseudo-orbit when d(f(x_i), x_{i+1}) < delta
    for every i in its time set; the lasso structure reduces that to one
    pass over :meth:`Lasso.transitions`.
    """
    delta = as_fraction(delta)
    for a, b in lasso.transitions():
        ia, ib = sys.index[a], sys.index[b]
        if sys.dist[sys.fmap[ia]][ib] >= delta:
            return False
    return True


def is_periodic_pseudo_orbit(sys, lasso, delta):
    """Period of the lasso as a periodic delta-pseudo-orbit, else None.

    Only pure cycles (empty stem, past equal to future cycle) qualify.
    The returned period is the declared cycle length, not necessarily
    the least one.
    """
    if lasso.stem or (lasso.past_cycle is not None and lasso.past_cycle != lasso.cycle):
        return None
    if not is_pseudo_orbit(sys, lasso, delta):
        return None
    return len(lasso.cycle)


def _forward_window(sys, i, lasso):
    """Window length certifying all forward comparisons of orbit vs lasso."""
    s = len(lasso.stem)
    joint_start = max(sys.preperiod(i), s)
    period = math.lcm(len(sys.cycle(i)), len(lasso.cycle))
    return joint_start + period


def shadows(sys, point, lasso, epsilon):
    """Decide d(f^i(point), x_i) < epsilon for every time i of the lasso.

    Both the orbit of ``point`` and the lasso are eventually periodic,
    so the infinite check reduces to the joint preperiod plus one joint
    period forward (and one joint period backward for two-sided lassos,
    which require an invertible system).
    """
    epsilon = as_fraction(epsilon)
    i0 = sys.index[point]
    for k in range(_forward_window(sys, i0, lasso)):
        if sys.dist[sys.power(i0, k)][sys.index[lasso[k]]] >= epsilon:
            return False
    if lasso.two_sided:
        if not sys.invertible:
            raise NotInvertible("two-sided lasso on a one-sided system")
        back = math.lcm(len(sys.cycle(i0)), len(lasso.past))
        for k in range(-back, 0):
            if sys.dist[sys.power(i0, k)][sys.index[lasso[k]]] >= epsilon:
                return False
    return True


def threshold_grid(sys):
    """The :class:`ThresholdGrid` of a system.

    Examples
    --------
    Three points at mutual distance 1 give {0, 1/2, 1, 2}: the distance
    values plus a sub-minimal and a top sentinel.
    """
    positive = [v for v in sys.distance_values if v > 0]
    values = {Fraction(0)}
    if positive:
        values.add(positive[0] / 2)
        values.update(positive)
        values.add(positive[-1] + 1)
    else:
        values.add(Fraction(1))
    return ThresholdGrid(tuple(sorted(values)))
