//! JSON run reports.  Every subcommand writes the same envelope; the `result`
//! member depends on the subcommand.  p-adic numbers are written as digit
//! strings ending in their O(p^n) term.

use hyperelliptic::{CurvePoint, IntPoint};
use padic::{Padic, PadicPowerSeries};
use serde_json::{json, Value};

use crate::engine::{Candidates, Ledger, Status};
use crate::nf::NfCandidates;
use crate::{ChabautyError, ErrorClass};

pub const SCHEMA: &str = "linqc-report/1";

pub fn padic(x: &Padic) -> Value {
    Value::String(x.to_string())
}

pub fn padics(xs: &[Padic]) -> Value {
    Value::Array(xs.iter().map(padic).collect())
}

pub fn point(pt: &IntPoint) -> Value {
    json!([pt.x.to_string(), pt.y.to_string()])
}

pub fn points(pts: &[IntPoint]) -> Value {
    Value::Array(pts.iter().map(point).collect())
}

fn local_point(pt: &CurvePoint) -> Value {
    match pt {
        CurvePoint::Affine { x, y } => json!([x.to_string(), y.to_string()]),
        CurvePoint::InfinityPlus => json!("inf+"),
        CurvePoint::InfinityMinus => json!("inf-"),
    }
}

fn series(s: &PadicPowerSeries) -> Value {
    padics(&s.coeffs)
}

pub fn ledger(l: &Ledger) -> Value {
    json!({
        "N": l.digits,
        "k": l.det_valuation,
        "truncation": l.truncation,
        "frobenius_loss": l.frobenius_loss,
        "frobenius_working_digits": l.frobenius_working,
    })
}

fn totals<'a>(statuses: impl Iterator<Item = &'a Status>) -> Value {
    let mut counts = [0usize; 3];
    for s in statuses {
        counts[*s as usize] += 1;
    }
    json!({
        Status::KnownIntegralPoint.as_str(): counts[0],
        Status::UnexplainedCandidate.as_str(): counts[1],
        Status::UncertifiedBox.as_str(): counts[2],
    })
}

/// The `result` member for a run over Q.
pub fn candidates(c: &Candidates) -> Value {
    let discs: Vec<Value> = c
        .discs
        .iter()
        .map(|d| {
            let roots: Vec<Value> = d
                .roots
                .iter()
                .map(|r| {
                    json!({
                        "t": padic(&c.targets[r.target]),
                        "parameter": padic(&r.parameter),
                        "point": r.point.as_ref().map(local_point),
                        "status": r.status.as_str(),
                        "matches": r.matches.as_ref().and_then(|m| c.map.backward(m)).map(|m| point(&m)),
                    })
                })
                .collect();
            json!({
                "residue": [d.rho.disc.x_bar, d.rho.disc.y_bar],
                "kind": format!("{:?}", d.rho.disc.kind).to_lowercase(),
                "constant": padic(&d.rho.constant),
                "series_t": series(&d.rho.series),
                "series_z": padics(&d.rho.series.rescale().coeffs),
                "strassmann_bounds": d.bounds,
                "roots": roots,
            })
        })
        .collect();
    let input_model = |pts: &[IntPoint]| -> Vec<IntPoint> { pts.iter().filter_map(|q| c.map.backward(q)).collect() };
    json!({
        "prime": c.prime,
        "base_point": c.base.as_ref().and_then(|b| c.map.backward(b)).map(|b| point(&b)),
        "variant": if c.base.is_some() { "base-point" } else { "involution" },
        "T": padics(&c.targets),
        "alpha": padics(&c.hctx.alpha),
        "u": padics(&c.hctx.u),
        "generator_heights": padics(&c.hctx.heights),
        "known_points": points(&input_model(&c.known)),
        "discs": discs,
        "totals": totals(c.roots().map(|r| &r.status)),
        "certified_points": points(&c.certified_points()),
        "missing_known_points": points(&input_model(&c.missing_known)),
        "determined": c.determined(),
        "precision": ledger(&c.ledger),
    })
}

/// The `result` member for a run over a real quadratic field.
pub fn nf_candidates(c: &NfCandidates) -> Value {
    let polydiscs: Vec<Value> = c
        .polydiscs
        .iter()
        .filter(|d| !d.roots.is_empty())
        .map(|d| {
            let roots: Vec<Value> = d
                .roots
                .iter()
                .map(|r| {
                    json!({
                        "t": padic(&c.targets[r.target]),
                        "parameters": padics(&r.coords),
                        "status": r.status.as_str(),
                        "matches": r.matches.as_ref().map(point),
                        "back_substitutes": r.back_substitutes,
                    })
                })
                .collect();
            json!({
                "residues": d.residues.iter().map(|(x, y)| json!([x, y])).collect::<Vec<_>>(),
                "jacobian_unit": d.jacobian_unit,
                "roots": roots,
            })
        })
        .collect();
    let ctx = &c.context;
    json!({
        "prime": c.prime,
        "base_point": point(&c.base),
        "T": padics(&c.targets),
        "ell": ctx.ell.data.iter().map(|row| padics(row)).collect::<Vec<_>>(),
        "beta": ctx.beta.iter().map(|b| padics(b)).collect::<Vec<_>>(),
        "alpha": padics(&ctx.alpha),
        "generator_heights": padics(&ctx.heights),
        "known_points": points(&c.known),
        "polydiscs_searched": c.polydiscs.len(),
        "polydiscs": polydiscs,
        "totals": totals(c.roots().map(|r| &r.status)),
        "extra_solutions": c.extra(),
        "recovered_points": points(&c.recovered()),
        "missing_known_points": points(&c.missing_known),
        "relation_failures": points(&c.relation_failures),
        "precision": ledger(&c.ledger),
    })
}

pub fn class_name(class: ErrorClass) -> &'static str {
    match class {
        ErrorClass::Input => "input-error",
        ErrorClass::Precision => "precision-failure",
        ErrorClass::Hypothesis => "hypothesis-failure",
    }
}

/// A successful run.
pub fn envelope(command: &str, input: Value, result: Value, warnings: &[String]) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "outcome": "ok",
        "input": input,
        "result": result,
        "warnings": warnings,
        "error": null,
    })
}

/// A failed run.
pub fn failure(command: &str, input: Value, class: ErrorClass, kind: &str, message: &str, warnings: &[String]) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "outcome": class_name(class),
        "input": input,
        "result": null,
        "warnings": warnings,
        "error": { "kind": kind, "message": message },
    })
}

pub fn error_report(command: &str, input: Value, err: &ChabautyError) -> Value {
    failure(command, input, err.class(), &err.kind(), &err.to_string(), &[])
}
