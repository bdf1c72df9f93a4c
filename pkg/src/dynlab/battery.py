"""Quantified law batteries: grid-wide implication and equivalence sweeps
over one system, reported as JSON-ready rows with explicit verdicts.

A battery never adds mathematics: every cell calls one library decision
procedure and records its boolean (plus parameters and witnesses).  The
battery layer only chooses the sample (the threshold grid), states which
implications it asserts, and collects violations.  Batteries that carry
hypotheses (the six-property matrix) first diagnose them and downgrade
to a descriptive report when they fail, so falsifying instances are
first-class inputs rather than errors.

Resource caps are respected per cell: a subset search that trips
StateExplosion marks its cell and the battery moves on.

Battery ids (opaque tokens, fixed by the command-line contract):

=============  ==============================================================
id             contents
=============  ==============================================================
``thmA``       per-epsilon agreement of the chain-tracing and pseudo-orbit
               tracing modulus rows (each non-empty exactly when the other is)
``thmB``       periodic-tracing transfer at derived parameters, plus the
               pairwise chain exact-period => chain(N=1) => some-period
``thmC``       six tracing properties per epsilon with the transitivity and
               lockstep-freeness hypotheses diagnosed up front
``thmD``       decomposition invariants re-verified and the two construction
               routes compared under the hypothesis report
``hierarchy``  the expansiveness ladder per delta: 1-expansive => strong
               measure => measure, n => (n+1), strong => expansive on
               periodic points
=============  ==============================================================
"""

from __future__ import annotations

from .core import threshold_grid
from .errors import StateExplosion
from .expansive import (
    expansive_on_per,
    lockstep_orbit_pair,
    measure_expansive_holds,
    n_expansive_holds,
    strong_measure_expansive_holds,
)
from .recurrence import is_transitive, spectral_decomposition
from .serialize import fraction_str
from .shadowing import modulus_table, special_shadowing_holds
from .specification import (
    derived_periodic_shadowing,
    modulus_table_for_spec,
    pairwise_tracing_chain,
)

__all__ = ["BATTERY_IDS", "run_theorem_battery", "periodic_spectrum"]

BATTERY_IDS = ("thmA", "thmB", "thmC", "thmD", "hierarchy")


def _frac(value):
    return None if value is None else fraction_str(value)


def periodic_spectrum(sys, bound):
    """Count of period-m points for m = 1..bound, exactly.

    With an admissible-step relation the count is the trace of the m-th
    power of the relation matrix (closed relation walks of length m);
    otherwise it is the number of fixed points of the m-th iterate.
    """
    counts = {}
    if sys.relation is not None:
        mat = [[1 if j in row else 0 for j in range(sys.n)]
               for i, row in enumerate(sys.relation)]
        power = mat
        for m in range(1, bound + 1):
            if m > 1:
                power = [
                    [sum(power[i][k] * mat[k][j] for k in range(sys.n))
                     for j in range(sys.n)]
                    for i in range(sys.n)
                ]
            counts[str(m)] = sum(power[i][i] for i in range(sys.n))
    else:
        for m in range(1, bound + 1):
            counts[str(m)] = sum(
                1 for i in range(sys.n) if sys.power(i, m) == i)
    return counts


def _equivalence_battery(sys, period_bound, cap):
    """Per-epsilon: chain-tracing row non-empty iff shadowing row is."""
    result = {"asserted": True, "rows": [], "violations": [], "cap_hits": []}
    try:
        shad = modulus_table(sys, "shadowing", cap=cap)
        weak = modulus_table_for_spec(sys, "weak", cap=cap)
    except StateExplosion as exc:
        result["cap_hits"].append({"cell": "modulus tables", "detail": str(exc)})
        return result
    for (eps, s), (_, w) in zip(shad.rows, weak.rows):
        agree = (s is None) == (w is None)
        result["rows"].append({
            "epsilon": _frac(eps),
            "shadowing_delta": _frac(s),
            "weak_spec": None if w is None else [w[0], _frac(w[1])],
            "agree": agree,
        })
        if not agree:
            result["violations"].append({
                "law": "chain-tracing and shadowing rows must be non-empty "
                       "together",
                "epsilon": _frac(eps),
            })
    return result


def _transfer_battery(sys, period_bound, cap):
    """Derived-parameter periodic transfer plus the pairwise chain."""
    result = {"asserted": True, "transfer_rows": [], "chain_cells": [],
              "violations": [], "cap_hits": []}
    grid = threshold_grid(sys)
    for eps in grid.positive:
        try:
            row = derived_periodic_shadowing(
                sys, eps, k_bound=period_bound, cap=cap)
        except StateExplosion as exc:
            result["cap_hits"].append(
                {"cell": f"transfer at epsilon {fraction_str(eps)}",
                 "detail": str(exc)})
            continue
        out = {
            "epsilon": _frac(eps),
            "applicable": row["applicable"],
        }
        if row["applicable"]:
            out.update({
                "N": row["N"],
                "delta": _frac(row["delta"]),
                "eta": _frac(row["eta"]),
                "delta1": _frac(row["delta1"]),
                "holds": row["holds"],
            })
            if not row["holds"]:
                result["violations"].append({
                    "law": "chain tracing at half quality must transfer to "
                           "periodic tracing at the derived thresholds",
                    "epsilon": _frac(eps),
                })
        result["transfer_rows"].append(out)
    for eps in grid.positive:
        for delta in grid.positive:
            if delta > eps:
                continue
            try:
                cell = pairwise_tracing_chain(
                    sys, delta, eps, k_bound=period_bound, cap=cap)
            except StateExplosion as exc:
                result["cap_hits"].append(
                    {"cell": f"chain at delta {fraction_str(delta)} epsilon "
                             f"{fraction_str(eps)}",
                     "detail": str(exc)})
                continue
            result["chain_cells"].append({
                "delta": _frac(delta),
                "epsilon": _frac(eps),
                "holds": cell["holds"],
                "routes_equal": cell["exact_to_chain"]["routes_equal"],
                "instances": cell["instances_checked"],
            })
            if not cell["holds"]:
                result["violations"].append({
                    "law": "pairwise tracing chain",
                    "delta": _frac(delta),
                    "epsilon": _frac(eps),
                })
    return result


_MATRIX_COLUMNS = ("local_spec", "weak_spec", "shadowing", "strong_periodic",
                   "periodic", "special")


def _matrix_battery(sys, period_bound, cap):
    """Six tracing properties per epsilon, gated by the two hypotheses:
    transitivity and freeness from lockstep orbit pairs (the uniform
    finite form of measure-level expansiveness)."""
    grid = threshold_grid(sys)
    pair = lockstep_orbit_pair(sys)
    strong_constant = None
    for delta in grid.positive:
        if strong_measure_expansive_holds(sys, delta)[0]:
            strong_constant = delta
        else:
            break
    hypotheses = {
        "transitive": is_transitive(sys, sys.points),
        "strong_measure_expansive": pair is None,
        "lockstep_pair": None if pair is None else
            [pair[0], pair[1], fraction_str(pair[2])],
        "strong_constant": _frac(strong_constant),
    }
    asserted = hypotheses["transitive"] and hypotheses["strong_measure_expansive"]
    result = {"asserted": asserted, "hypotheses": hypotheses, "rows": [],
              "violations": [], "cap_hits": []}
    columns = {}
    try:
        columns["local_spec"] = dict(modulus_table_for_spec(
            sys, "full", k_bound=period_bound, cap=cap).rows)
        columns["weak_spec"] = dict(modulus_table_for_spec(
            sys, "weak", cap=cap).rows)
        columns["shadowing"] = dict(modulus_table(
            sys, "shadowing", cap=cap).rows)
        columns["strong_periodic"] = dict(modulus_table(
            sys, "strong-periodic", period_bound, cap).rows)
        columns["periodic"] = dict(modulus_table(
            sys, "periodic", period_bound, cap).rows)
    except StateExplosion as exc:
        result["cap_hits"].append(
            {"cell": "modulus tables", "detail": str(exc)})
        return result
    for eps in grid.positive:
        row = {"epsilon": _frac(eps)}
        for name in _MATRIX_COLUMNS[:-1]:
            row[name] = columns[name][eps] is not None
        try:
            row["special"] = special_shadowing_holds(
                sys, eps, period_bound, cap)[0]
        except StateExplosion as exc:
            result["cap_hits"].append(
                {"cell": f"special at epsilon {fraction_str(eps)}",
                 "detail": str(exc)})
            row["special"] = None
        flags = [row[name] for name in _MATRIX_COLUMNS if row[name] is not None]
        row["equivalent"] = len(set(flags)) <= 1
        result["rows"].append(row)
        if asserted and not row["equivalent"]:
            result["violations"].append({
                "law": "all six tracing properties must agree under the "
                       "diagnosed hypotheses",
                "epsilon": _frac(eps),
            })
    return result


def _decomposition_battery(sys, period_bound, cap):
    """Re-verify every decomposition invariant and compare routes."""
    result = {"asserted": True, "violations": [], "cap_hits": []}
    try:
        dec = spectral_decomposition(sys, cap=cap)
    except StateExplosion as exc:
        result["cap_hits"].append(
            {"cell": "decomposition", "detail": str(exc)})
        return result
    checks = dec.verify(sys)
    result["checks"] = checks
    result["pieces"] = [{
        "points": list(piece.points),
        "period": piece.period,
        "parts": [list(part) for part in piece.parts],
        "mixing": piece.mixing,
        "routes_agree": piece.routes_agree,
    } for piece in dec.pieces]
    result["hypothesis_report"] = {
        "invertible": dec.report.invertible,
        "shadowing_populated": dec.report.shadowing_populated,
        "strong_constant": _frac(dec.report.strong_constant),
        "strong_fails_at": [_frac(v) for v in dec.report.strong_fails_at],
        "passes": dec.report.passes,
    }
    for name, ok in checks.items():
        if not ok:
            result["violations"].append(
                {"law": f"decomposition invariant: {name}"})
    if dec.report.passes:
        for piece in dec.pieces:
            if not piece.routes_agree:
                result["violations"].append({
                    "law": "construction routes must agree when the "
                           "hypothesis report passes",
                    "piece": list(piece.points),
                })
    return result


def _hierarchy_battery(sys, period_bound, cap):
    """The expansiveness ladder at every grid delta."""
    result = {"asserted": True, "rows": [], "violations": [], "cap_hits": []}
    grid = threshold_grid(sys)
    for delta in grid.positive:
        counts = {n: n_expansive_holds(sys, n, delta) for n in range(1, 5)}
        strong = strong_measure_expansive_holds(sys, delta)[0]
        measure = measure_expansive_holds(sys, delta)[0]
        on_per = expansive_on_per(sys, delta)
        row = {
            "delta": _frac(delta),
            "n_expansive": {str(n): counts[n] for n in counts},
            "strong_measure": strong,
            "measure": measure,
            "expansive_on_per": on_per,
        }
        result["rows"].append(row)
        laws = [
            ("1-expansive implies strong measure expansive",
             (not counts[1]) or strong),
            ("strong measure expansive implies measure expansive",
             (not strong) or measure),
            ("strong measure expansive implies expansive on periodic points",
             (not strong) or on_per),
        ]
        for n in range(1, 4):
            laws.append((f"{n}-expansive implies {n + 1}-expansive",
                         (not counts[n]) or counts[n + 1]))
        for law, ok in laws:
            if not ok:
                result["violations"].append(
                    {"law": law, "delta": _frac(delta)})
    return result


_RUNNERS = {
    "thmA": _equivalence_battery,
    "thmB": _transfer_battery,
    "thmC": _matrix_battery,
    "thmD": _decomposition_battery,
    "hierarchy": _hierarchy_battery,
}


def run_theorem_battery(system, battery_id, period_bound=6, cap=None):
    """Run one battery over the system's threshold grid.

    ``system`` is a finite metric system (an object with a ``.system``
    attribute, such as a gallery instance wrapper, is unwrapped).
    Returns a JSON-ready dict: battery id, per-cell rows, diagnosed
    hypotheses where applicable, asserted flag, violations, cap hits,
    and the periodic-point spectrum up to max(period_bound, 8).
    """
    sys = getattr(system, "system", system)
    if battery_id not in _RUNNERS:
        raise ValueError(
            f"unknown battery {battery_id!r}; choose from {BATTERY_IDS}")
    body = _RUNNERS[battery_id](sys, period_bound, cap)
    spectrum = periodic_spectrum(sys, max(period_bound, 8))
    return {
        "battery": battery_id,
        "period_bound": period_bound,
        "periodic_spectrum": spectrum,
        **body,
    }
