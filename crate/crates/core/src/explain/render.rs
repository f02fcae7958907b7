//! Fixed per-mode sentence templates filled from an explanation bundle.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{ExplanationBundle, ExplanationMode};
use crate::scalar::Scalar;

fn num<T: Scalar>(v: T) -> String {
    format!("{:.4}", v.as_f64())
}

fn signed<T: Scalar>(v: T) -> String {
    format!("{:+.4}", v.as_f64())
}

/// Attributions by descending magnitude, ties by name.
fn ranked_attributions<T: Scalar>(bundle: &ExplanationBundle<T>) -> Vec<(&str, T)> {
    let mut items: Vec<(&str, T)> = bundle.attributions.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    items.sort_by(|a, b| {
        b.1.abs()
            .partial_cmp(&a.1.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(b.0))
    });
    items
}

pub fn render_text<T: Scalar>(bundle: &ExplanationBundle<T>, mode: ExplanationMode) -> Result<String> {
    let q = &bundle.query_id;
    let mut out = String::new();
    match mode {
        ExplanationMode::KnowledgeStructures => {
            let first = bundle.prototypes.first().ok_or(Error::MissingBundleField("prototypes"))?;
            write!(
                out,
                "Case {q} is closest to the representative case {} at distance {}.",
                first.id,
                num(first.value)
            )
            .ok();
            if !bundle.criticisms.is_empty() {
                let ids: Vec<&str> = bundle.criticisms.iter().map(|c| c.id.as_str()).collect();
                write!(out, " Cases the representatives do not cover well: {}.", ids.join(", ")).ok();
            }
        }
        ExplanationMode::DirectRecall => {
            let first = bundle.neighbors.first().ok_or(Error::MissingBundleField("neighbors"))?;
            let label = first
                .label
                .as_ref()
                .map_or_else(|| "unlabelled".to_owned(), |l| l.to_string());
            write!(
                out,
                "This case most resembles {} decided as {label} at distance {}.",
                first.id,
                num(first.distance)
            )
            .ok();
            if let Some(top) = bundle.influences.first() {
                write!(
                    out,
                    " Removing {} would move the prediction by {}.",
                    top.id,
                    signed(top.value)
                )
                .ok();
            }
        }
        ExplanationMode::SimulationProjection => {
            let cf = bundle
                .counterfactual
                .as_ref()
                .ok_or(Error::MissingBundleField("counterfactual"))?;
            write!(
                out,
                "The nearest case with a different outcome is {} at distance {}.",
                cf.id,
                num(cf.value)
            )
            .ok();
        }
        ExplanationMode::Covariation => {
            if bundle.attributions.is_empty() {
                return Err(Error::MissingBundleField("attributions"));
            }
            let parts: Vec<String> = ranked_attributions(bundle)
                .into_iter()
                .map(|(name, v)| format!("{name} {}", signed(v)))
                .collect();
            write!(out, "Feature contributions for case {q}: {}.", parts.join(", ")).ok();
        }
        ExplanationMode::Rationalization => {
            let pred = bundle.predicted_value.ok_or(Error::MissingBundleField("predicted_value"))?;
            let base = bundle.base_value.ok_or(Error::MissingBundleField("base_value"))?;
            let top = ranked_attributions(bundle);
            let (name, v) = top.first().ok_or(Error::MissingBundleField("attributions"))?;
            write!(
                out,
                "The output {} for case {q} differs from the reference level {}; the largest contribution comes from {name} ({}).",
                num(pred),
                num(base),
                signed(*v)
            )
            .ok();
        }
    }
    Ok(out)
}
