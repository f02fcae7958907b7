//! Rule engine: profile → behavior category → explanation rows → mode
//! scores → ranked, deferred and excluded methods.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    validate_catalog, BehaviorCategory, Expertise, ExplanationMode, ExplanationType, MethodCatalogEntry,
    MethodNote, ModeWeightTable, ModelProfile, Perspective, Recommendation, TaskKind, Tier, UserProfile,
};

/// Explanation rows chosen for a profile, each with the rule that selected it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowSelection {
    rows: Vec<ExplanationType>,
    provenance: BTreeMap<ExplanationType, String>,
}

impl RowSelection {
    pub fn new(rows: Vec<(ExplanationType, String)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("row selection must not be empty".into()));
        }
        let mut provenance = BTreeMap::new();
        let mut order = Vec::with_capacity(rows.len());
        for (row, why) in rows {
            if provenance.insert(row, why).is_some() {
                return Err(Error::InvalidArgument(format!("row {row} listed twice")));
            }
            order.push(row);
        }
        Ok(RowSelection {
            rows: order,
            provenance,
        })
    }

    /// Builds a selection from row names such as `"CausalHistory"`.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let rows = names
            .iter()
            .map(|n| {
                let n = n.as_ref();
                ExplanationType::ALL
                    .into_iter()
                    .find(|r| r.to_string() == n)
                    .map(|r| (r, "selected by caller".to_owned()))
                    .ok_or_else(|| Error::UnknownRow(n.to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        RowSelection::new(rows)
    }

    pub fn rows(&self) -> &[ExplanationType] {
        &self.rows
    }

    pub fn provenance(&self, row: ExplanationType) -> Option<&str> {
        self.provenance.get(&row).map(String::as_str)
    }
}

/// Maps a model/user profile onto the Actions or Experiences quadrant.
///
/// A discovery task whose target an expert can judge is treated as emulation.
pub fn classify_task(model: &ModelProfile, user: &UserProfile) -> BehaviorCategory {
    match model.task_kind {
        TaskKind::Emulation => BehaviorCategory::Actions,
        TaskKind::Discovery if model.target_judgeable_by_user && user.expertise == Expertise::Expert => {
            BehaviorCategory::Actions
        }
        TaskKind::Discovery => BehaviorCategory::Experiences,
    }
}

pub fn select_rows(category: BehaviorCategory, profile: &ModelProfile) -> Result<RowSelection> {
    use ExplanationType::*;
    let mut rows = Vec::new();
    match category {
        BehaviorCategory::Actions => {
            rows.push((CausalHistory, "intentional action: causal history of the reasoning".to_owned()));
            if !profile.pragmatic_goal_focus {
                rows.push((EnablingFactor, "intentional action: enabling conditions".to_owned()));
            }
            match profile.perspective {
                Perspective::Actor => {
                    rows.push((ReasonActors, "intentional action explained from the actor's side".to_owned()))
                }
                Perspective::Observer => rows.push((
                    ReasonObservers,
                    "intentional action explained from an observer's side".to_owned(),
                )),
            }
        }
        BehaviorCategory::Experiences => {
            rows.push((CauseUnintentional, "unintentional experience: causes".to_owned()));
            if profile.situation_cause_recall {
                rows.push((
                    ReasonActors,
                    "situation causes traced back to source material".to_owned(),
                ));
            }
        }
        other => return Err(Error::UnsupportedCategory(other.to_string())),
    }
    RowSelection::new(rows)
}

/// Each mode's score is the sum of its weights over the selected rows.
pub fn score_modes(rows: &RowSelection, table: &ModeWeightTable) -> BTreeMap<ExplanationMode, f64> {
    ExplanationMode::ALL
        .into_iter()
        .map(|mode| (mode, rows.rows().iter().map(|&r| table.weight(r, mode)).sum()))
        .collect()
}

/// Modes by descending score; equal scores keep column order.
pub fn rank_modes(scores: &BTreeMap<ExplanationMode, f64>) -> Vec<ExplanationMode> {
    let mut modes = ExplanationMode::ALL.to_vec();
    modes.sort_by(|a, b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.index().cmp(&b.index()))
    });
    modes
}

const DEFERRED_SIMULATION: &str = "single-instance simulation is offered only after knowledge-structure \
explanations have been exhausted";
const EXCLUDED_SIMULATION: &str = "confidence-style and what-if outputs present an exploratory system as \
deterministic and evaluable; unmet expectations of certainty reduce trust";

pub fn recommend(
    model: &ModelProfile,
    user: &UserProfile,
    catalog: &[MethodCatalogEntry],
    table: &ModeWeightTable,
) -> Result<Recommendation> {
    model.validate()?;
    validate_catalog(catalog)?;
    let category = classify_task(model, user);
    let rows = select_rows(category, model)?;
    let scores = score_modes(&rows, table);
    let row_names: Vec<String> = rows.rows().iter().map(ToString::to_string).collect();

    let mut ranked: Vec<(usize, &MethodCatalogEntry)> = Vec::new();
    let mut excluded = Vec::new();
    let mut deferred = Vec::new();
    for (pos, entry) in catalog.iter().enumerate() {
        if entry.tier != Tier::Implemented {
            continue;
        }
        let mode = entry.malle_category;
        let note = |rationale: String| MethodNote {
            method_name: entry.method_name.clone(),
            rationale,
        };
        if scores[&mode] <= 0.0 {
            excluded.push(note(format!(
                "{mode} has no association with the selected explanation types ({})",
                row_names.join(", ")
            )));
        } else if mode == ExplanationMode::SimulationProjection {
            match category {
                BehaviorCategory::Experiences => excluded.push(note(EXCLUDED_SIMULATION.to_owned())),
                _ => deferred.push(note(DEFERRED_SIMULATION.to_owned())),
            }
        } else {
            ranked.push((pos, entry));
        }
    }
    ranked.sort_by(|(pa, a), (pb, b)| {
        scores[&b.malle_category]
            .partial_cmp(&scores[&a.malle_category])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(pa.cmp(pb))
    });

    Ok(Recommendation {
        behavior_category: category,
        rows: rows.rows().to_vec(),
        ranked_modes: rank_modes(&scores),
        mode_scores: scores,
        ranked_methods: ranked.into_iter().map(|(_, e)| e.method_name.clone()).collect(),
        excluded,
        deferred,
    })
}
