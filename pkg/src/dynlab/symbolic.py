"""Edge shifts of finite type and their finite window approximations.

A shift of finite type (SFT) is presented by a directed graph on a
finite alphabet of vertices; its points are bi-infinite vertex walks.
Eventually periodic walks have exact finite presentations (the same
lasso idea as :mod:`dynlab.core`), and the dyadic shift metric
2^(-first disagreement) is an exact rational, so everything here is
decidable without rounding.

A *window system* replaces the shift by a finite metric system on the
allowed words of length 2w+1: the metric is the shift metric truncated
at radius w, the map is the left shift with the new rightmost letter
chosen by a canonical (lexicographically least) successor rule, and
the full multivalued extension structure is kept as the system's
``relation`` so that coarse structure (periods, mixing) is not an
artifact of the collapse.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import build_finite_system
from .errors import EmptyShift, HorizonExceeded

__all__ = [
    "Sft",
    "SymbolicPoint",
    "build_sft",
    "shift_distance",
    "periodic_points",
    "periodic_point_count",
    "window_system",
    "product_system",
]


@dataclass(frozen=True)
class Sft:
    """An edge shift: vertices ``alphabet`` and allowed transitions ``edges``."""

    alphabet: tuple
    edges: frozenset

    def successors(self, a):
        return tuple(sorted(b for (x, b) in self.edges if x == a))

    def predecessors(self, b):
        return tuple(sorted(a for (a, y) in self.edges if y == b))

    def allows(self, a, b):
        return (a, b) in self.edges

    def adjacency(self):
        """Adjacency matrix as a list of lists of Python ints (exact)."""
        pos = {a: i for i, a in enumerate(self.alphabet)}
        m = [[0] * len(self.alphabet) for _ in self.alphabet]
        for a, b in self.edges:
            m[pos[a]][pos[b]] = 1
        return m

    def point(self, stem=(), cycle=(), past_cycle=None):
        """A :class:`SymbolicPoint` after checking every transition is allowed."""
        pt = SymbolicPoint(tuple(stem), tuple(cycle),
                           None if past_cycle is None else tuple(past_cycle))
        for a, b in pt.transition_pairs():
            if not self.allows(a, b):
                raise ValueError(f"forbidden transition {a!r} -> {b!r}")
        return pt


def _rotation_period(word):
    """Least d dividing len(word) with the cyclic word invariant under d-rotation."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word == word[d:] + word[:d]:
            return d
    return n


class SymbolicPoint:
    """A bi-infinite, eventually periodic sequence of letters.

    Stored canonically: the forward tail as the shortest stem plus a
    primitive cycle, the past as a primitive cycle anchored so that
    index -1 is its last letter.  Two presentations of the same
    sequence compare (and hash) equal.
    """

    __slots__ = ("stem", "cycle", "past")

    def __init__(self, stem, cycle, past_cycle=None):
        if not cycle:
            raise ValueError("cycle must be non-empty")
        past = tuple(cycle) if past_cycle is None else tuple(past_cycle)
        if not past:
            raise ValueError("past cycle must be non-empty")
        stem, cycle = tuple(stem), tuple(cycle)
        # Canonical forward form: a cyclic word invariant under rotation by d
        # is d-periodic, so the forward tail's least period is the least such
        # d; anchoring at the same phase keeps the denoted sequence intact.
        cycle = cycle[: _rotation_period(cycle)]
        # Absorb stem letters that already match the tail (minimal stem).
        while stem and stem[-1] == cycle[-1]:
            stem = stem[:-1]
            cycle = cycle[-1:] + cycle[:-1]
        # Canonical past: same reduction; the anchor (index -1 = last letter)
        # is preserved because a rotation-invariant word is periodic in phase.
        past = past[: _rotation_period(past)]
        object.__setattr__(self, "stem", stem)
        object.__setattr__(self, "cycle", cycle)
        object.__setattr__(self, "past", past)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("SymbolicPoint is immutable")

    def __getitem__(self, i):
        if i < 0:
            return self.past[i % len(self.past)]
        s = len(self.stem)
        if i < s:
            return self.stem[i]
        return self.cycle[(i - s) % len(self.cycle)]

    def transition_pairs(self):
        """Every adjacent letter pair the sequence realises (finite cover)."""
        pairs = {(self.past[j], self.past[(j + 1) % len(self.past)])
                 for j in range(len(self.past))}
        pairs.add((self.past[-1], self[0]))
        for j in range(len(self.stem)):
            pairs.add((self.stem[j], self[j + 1]))
        pairs.update(
            (self.cycle[j], self.cycle[(j + 1) % len(self.cycle)])
            for j in range(len(self.cycle))
        )
        return pairs

    def _key(self):
        return (self.stem, self.cycle, self.past)

    def __eq__(self, other):
        return isinstance(other, SymbolicPoint) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        past = "".join(map(str, self.past))
        stem = "".join(map(str, self.stem))
        cyc = "".join(map(str, self.cycle))
        return f"<..{past}|{stem}({cyc})..>"


def build_sft(alphabet, edges):
    """Assemble an :class:`Sft`, pruning stranded vertices.

    Vertices without outgoing or without incoming edges carry no
    bi-infinite walk and are removed (repeatedly, until stable).

    Raises
    ------
    EmptyShift
        If pruning eats the whole graph.
    """
    alive = list(dict.fromkeys(alphabet))
    edge_set = {(a, b) for a, b in edges}
    for a, b in edge_set:
        if a not in alive or b not in alive:
            raise ValueError(f"edge {(a, b)!r} uses letters outside the alphabet")
    while True:
        outs = {a for a, _ in edge_set}
        ins = {b for _, b in edge_set}
        keep = [v for v in alive if v in outs and v in ins]
        if keep == alive:
            break
        alive = keep
        edge_set = {(a, b) for a, b in edge_set if a in alive and b in alive}
    if not alive:
        raise EmptyShift("no vertex carries a bi-infinite walk")
    return Sft(tuple(alive), frozenset(edge_set))


def shift_distance(x, y, cap=None):
    """Dyadic distance 2^(-k) between symbolic points, k = first disagreement.

    Equality is certified exactly from the periodic structure (no cap
    involved); for distinct points the scan stops at the first index
    where they differ.  If that index lies beyond ``cap`` the function
    refuses to answer and raises :class:`HorizonExceeded`.
    """
    if x == y:
        return Fraction(0)
    forward = max(len(x.stem), len(y.stem)) + math.lcm(len(x.cycle), len(y.cycle))
    backward = math.lcm(len(x.past), len(y.past))
    radius = max(forward, backward)
    for k in range(radius + 1):
        if x[k] != y[k] or (k > 0 and x[-k] != y[-k]):
            if cap is not None and k > cap:
                raise HorizonExceeded(f"first disagreement at |i|={k} > cap={cap}")
            return Fraction(1, 2 ** k)
    raise AssertionError("distinct points must disagree within the joint period")


def _closed_walks(sft, length):
    """All closed vertex walks (v_0, ..., v_{length-1}) with every step allowed."""
    succ = {a: sft.successors(a) for a in sft.alphabet}
    walks = []

    def extend(walk):
        if len(walk) == length:
            if sft.allows(walk[-1], walk[0]):
                walks.append(tuple(walk))
            return
        for b in succ[walk[-1]]:
            walk.append(b)
            extend(walk)
            walk.pop()

    for a in sft.alphabet:
        extend([a])
    return walks


def periodic_points(sft, period):
    """All points fixed by the ``period``-th power of the shift.

    These are exactly the closed walks of length ``period`` (one point
    per based walk — a rotation is a different point).  The count
    equals the trace of the ``period``-th power of the adjacency
    matrix; see :func:`periodic_point_count`.
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    pts = {SymbolicPoint((), walk) for walk in _closed_walks(sft, period)}
    return tuple(sorted(pts, key=lambda p: (len(p.cycle), p.cycle)))


def _mat_mult(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def periodic_point_count(sft, period):
    """trace(A^period) with exact integer arithmetic."""
    m = sft.adjacency()
    acc = m
    for _ in range(period - 1):
        acc = _mat_mult(acc, m)
    return sum(acc[i][i] for i in range(len(acc)))


def _allowed_words(sft, length):
    """All allowed words of the given length, in lexicographic order."""
    succ = {a: sft.successors(a) for a in sft.alphabet}
    words = []

    def extend(word):
        if len(word) == length:
            words.append(tuple(word))
            return
        for b in succ[word[-1]]:
            word.append(b)
            extend(word)
            word.pop()

    for a in sorted(sft.alphabet):
        extend([a])
    return words


def window_system(sft, w):
    """Finite metric system on the allowed words of length 2w+1.

    The distance between distinct words u, v is 2^(-k) where k <= w is
    the least |i| with u_i != v_i (positions indexed -w..w); the least
    positive value is therefore 2^(-w).  The map shifts left and fills
    the new rightmost letter with the least allowed successor; all
    allowed fillings are recorded in the system's ``relation``.
    """
    if w < 1:
        raise ValueError("window radius must be >= 1")
    words = _allowed_words(sft, 2 * w + 1)
    if not words:
        raise EmptyShift("no allowed words at this window size")
    ids = [",".join(map(str, word)) for word in words]
    pos = {word: k for k, word in enumerate(words)}
    succ = {a: sft.successors(a) for a in sft.alphabet}

    dist, n = [], len(words)
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(Fraction(0))
                continue
            u, v = words[i], words[j]
            k = min(abs(c - w) for c in range(2 * w + 1) if u[c] != v[c])
            row.append(Fraction(1, 2 ** k))
        dist.append(row)

    fmap, relation = [], []
    for word in words:
        images = [word[1:] + (b,) for b in succ[word[-1]]]
        images = [im for im in images if im in pos]
        # pruning keeps every follower of an allowed word allowed
        assert images, "an allowed word must have an allowed shift"
        relation.append(tuple(ids[pos[im]] for im in images))
        fmap.append(min(ids[pos[im]] for im in images))

    return build_finite_system(ids, dist, fmap, invertible=None, relation=relation)


def product_system(sfts):
    """Componentwise product of finitely many edge shifts.

    Letters of the product are tuples rendered as "a|b|...", and a
    transition is allowed iff it is allowed in every coordinate.
    """
    sfts = list(sfts)
    if not sfts:
        raise ValueError("need at least one factor")
    alphabet = ["|".join(map(str, combo))
                for combo in itertools.product(*(s.alphabet for s in sfts))]
    edges = set()
    for combo_a in itertools.product(*(s.alphabet for s in sfts)):
        for combo_b in itertools.product(*(s.alphabet for s in sfts)):
            if all(s.allows(a, b) for s, a, b in zip(sfts, combo_a, combo_b)):
                edges.add(("|".join(map(str, combo_a)), "|".join(map(str, combo_b))))
    return build_sft(alphabet, edges)
