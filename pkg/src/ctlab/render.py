"""Report shaping and text rendering for the command-line tools.

One policy everywhere: floats carry 12 significant digits, exact rationals
print as a/b, subsets print as sorted 1-based coordinate lists. JSON
payloads are {"config": ..., "report": ...}; CSV payloads put the config
echo in leading #-comment lines. The thread count never appears in any
payload: outputs must be identical whatever the worker count.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coarse_threshold import (
    BoosterHit,
    CorollaryReport,
    DiagnosticsReport,
    LevelReport,
    MarginReport,
    TheoremReport,
)
from .influence import RussoReport
from .sampling import Estimate


def sig12(value) -> str:
    """12-significant-digit decimal form."""
    return "%.12g" % float(value)


def number(value):
    """JSON-safe numeric: float rounded to 12 significant digits."""
    return float(sig12(value))


def rational(value) -> str:
    fr = Fraction(value)
    if fr.denominator == 1:
        return str(fr.numerator)
    return f"{fr.numerator}/{fr.denominator}"


def rational_field(value) -> dict:
    """Exact value rendered both ways so tables stay greppable."""
    fr = Fraction(value)
    return {"exact": rational(fr), "float": number(fr)}


def estimate_dict(est: Estimate) -> dict:
    return {
        "mean": number(est.mean),
        "stderr": number(est.stderr),
        "ci95": [number(est.ci95[0]), number(est.ci95[1])],
        "samples": est.samples,
        "seed": est.seed,
        "undecided": est.undecided,
    }


def spectrum_report(spec) -> dict:
    records = [
        {"subset": rec["subset"], "coefficient": number(rec["coefficient"])}
        for rec in spec.to_records()
    ]
    return {
        "n": spec.n,
        "p": rational(spec.measure.p),
        "coefficients": records,
        "parseval_sum": number(spec.parseval_sum()),
    }


def influence_report(n, influences, total, pivotals) -> dict:
    return {
        "n": n,
        "influences": [rational_field(v) for v in influences],
        "total": rational_field(total),
        "pivotal_probabilities": [rational_field(v) for v in pivotals],
    }


def threshold_curve_rows(rows) -> list[dict]:
    """rows: iterables (p, prob_one, derivative, total_influence, residual),
    all exact rationals."""
    out = []
    for p, prob, deriv, ti, residual in rows:
        out.append(
            {
                "p": number(p),
                "prob_one": number(prob),
                "derivative": number(deriv),
                "total_influence": number(ti),
                "russo_residual": number(residual),
            }
        )
    return out


def threshold_curve_csv(rows) -> list[str]:
    lines = ["p,prob_one,derivative,total_influence,russo_residual"]
    for p, prob, deriv, ti, residual in rows:
        lines.append(
            ",".join([sig12(p), sig12(prob), sig12(deriv), sig12(ti), sig12(residual)])
        )
    return lines


def critical_p_report(value, tolerance) -> dict:
    return {
        "critical_p": number(value),
        "critical_p_exact": rational(value),
        "tolerance": rational(tolerance),
    }


def russo_dict(rep: RussoReport) -> dict:
    return {
        "p": rational(rep.p),
        "lhs_4pq_derivative": rational_field(rep.lhs),
        "rhs_total_influence": rational_field(rep.rhs),
        "equal": rep.equal,
        "ratio": rational_field(rep.ratio) if rep.ratio is not None else None,
        "unit_range_lhs_pq_derivative": rational_field(rep.lhs_unit_range),
        "unit_range_rhs_quarter_influence": rational_field(rep.rhs_unit_range),
    }


def theorem_dict(rep: TheoremReport) -> dict:
    if rep.lhs_exact is not None:
        lhs = {"kind": "exact", "value": rational_field(rep.lhs_exact)}
    else:
        lhs = {"kind": "estimate", "value": estimate_dict(rep.lhs_estimate)}
    return {
        "C_used": rational_field(rep.C_used),
        "B": rep.B,
        "lhs": lhs,
        "balanced_defect": rational_field(rep.balanced_defect),
    }


def witness_dict(value, B) -> dict:
    return {"B": B, "witness_probability": rational_field(value)}


def booster_hit_dict(hit: BoosterHit) -> dict:
    return {"subset": list(hit.coords), "boost": rational_field(hit.boost)}


def booster_dict(hits, B, delta_prime) -> dict:
    return {
        "B": B,
        "delta_prime": rational_field(delta_prime),
        "boosters": [booster_hit_dict(h) for h in hits],
        "found": bool(hits),
    }


def corollary_dict(rep: CorollaryReport) -> dict:
    return {
        "C": rational_field(rep.C),
        "B": rep.B,
        "delta_prime": rational_field(rep.delta_prime),
        "expectation": rational_field(rep.expectation),
        "balanced": rep.balanced,
        "p_gate_bound": rational_field(rep.p_gate_bound),
        "p_gate": rep.p_gate,
        "hypotheses_hold": rep.hypotheses_hold,
        "witness_probability": rational_field(rep.witness_prob),
        "alternative1": rep.alternative1,
        "boosters": [booster_hit_dict(h) for h in rep.boosters],
        "alternative2": rep.alternative2,
        "holds": rep.holds,
    }


def diagnostics_dict(rep: DiagnosticsReport) -> dict:
    return {
        "B": rep.B,
        "epsilon": number(rep.epsilon),
        "M": number(rep.M),
        "coordinate_second_moments": [number(v) for v in rep.coordinate_second_moments],
        "mean_eta_sum": number(rep.mean_eta_sum),
        "mean_one_minus_xi": number(rep.mean_one_minus_xi),
        "term1": number(rep.term1),
        "term2": number(rep.term2),
        "term3": number(rep.term3),
        "level_mass": number(rep.level_mass),
        "split_ok": rep.split_ok,
        "markov_links": [number(v) for v in rep.markov_links],
        "markov_ok": rep.markov_ok,
        "counting_bound_ok": rep.counting_bound_ok,
        "h4_norm": number(rep.h4_norm),
        "holder_q": number(rep.holder_q),
        "holder_q_prime": number(rep.holder_q_prime),
    }


def level_dict(rep: LevelReport) -> dict:
    return {
        "B": rep.B,
        "level_mass": number(rep.level_mass),
        "tail": number(rep.tail),
        "total_influence": number(rep.total_influence),
        "tail_bound": number(rep.tail_bound),
        "tail_bound_ok": rep.tail_bound_ok,
    }


def margin_dict(rep: MarginReport) -> dict:
    return {
        "B": rep.B,
        "min_margin": rational_field(rep.min_margin),
        "subset": list(rep.coords),
    }


def emit_json(config: dict, report) -> str:
    return json.dumps({"config": config, "report": report}, indent=2) + "\n"


def emit_csv(config: dict, lines: list[str]) -> str:
    echo = [
        f"# {key}=" + (json.dumps(value) if isinstance(value, bool) else str(value))
        for key, value in config.items()
    ]
    return "\n".join(echo + lines) + "\n"
