//! Behavior categories, explanation rows and modes, the default mode weight
//! table and the method catalog.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadrant of the observability × intentionality grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BehaviorCategory {
    /// Observable and intentional.
    Actions,
    /// Observable and unintentional.
    Behaviors,
    /// Unobservable and intentional.
    IntentionalThoughts,
    /// Unobservable and unintentional.
    Experiences,
}

impl fmt::Display for BehaviorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Explanation types (rows of the weight table).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExplanationType {
    CauseUnintentional,
    CausalHistory,
    EnablingFactor,
    ReasonActors,
    ReasonObservers,
}

impl ExplanationType {
    pub const ALL: [ExplanationType; 5] = [
        ExplanationType::CauseUnintentional,
        ExplanationType::CausalHistory,
        ExplanationType::EnablingFactor,
        ExplanationType::ReasonActors,
        ExplanationType::ReasonObservers,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ExplanationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Explanation modes (columns of the weight table).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExplanationMode {
    KnowledgeStructures,
    SimulationProjection,
    Covariation,
    DirectRecall,
    Rationalization,
}

impl ExplanationMode {
    pub const ALL: [ExplanationMode; 5] = [
        ExplanationMode::KnowledgeStructures,
        ExplanationMode::SimulationProjection,
        ExplanationMode::Covariation,
        ExplanationMode::DirectRecall,
        ExplanationMode::Rationalization,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ExplanationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Ordinal association mark of one table cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mark {
    Blank,
    /// `( x )`
    Weak,
    /// `x`
    Regular,
    /// `xx`
    Strong,
}

impl Mark {
    pub fn weight(self) -> f64 {
        match self {
            Mark::Blank => 0.0,
            Mark::Weak => 0.5,
            Mark::Regular => 1.0,
            Mark::Strong => 2.0,
        }
    }

    /// Inverse of [`Mark::weight`]; `None` for weights that are not an encoding.
    pub fn from_weight(weight: f64) -> Option<Mark> {
        [Mark::Blank, Mark::Weak, Mark::Regular, Mark::Strong]
            .into_iter()
            .find(|m| m.weight() == weight)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Mark::Blank => "",
            Mark::Weak => "(x)",
            Mark::Regular => "x",
            Mark::Strong => "xx",
        }
    }
}

/// Association marks, rows in [`ExplanationType::ALL`] order and columns in
/// [`ExplanationMode::ALL`] order.
pub const DEFAULT_MARKS: [[Mark; 5]; 5] = {
    use Mark::*;
    [
        // cause (unintentional behavior)
        [Regular, Weak, Weak, Blank, Blank],
        // causal history
        [Strong, Regular, Regular, Blank, Blank],
        // enabling factor
        [Strong, Blank, Regular, Blank, Blank],
        // reason, actors
        [Weak, Blank, Blank, Strong, Regular],
        // reason, observers
        [Strong, Strong, Weak, Blank, Blank],
    ]
};

/// Non-negative weights linking explanation rows to modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "BTreeMap<ExplanationType, BTreeMap<ExplanationMode, f64>>",
    into = "BTreeMap<ExplanationType, BTreeMap<ExplanationMode, f64>>"
)]
pub struct ModeWeightTable {
    weights: [[f64; 5]; 5],
}

impl Default for ModeWeightTable {
    fn default() -> Self {
        let mut weights = [[0.0; 5]; 5];
        for (r, row) in DEFAULT_MARKS.iter().enumerate() {
            for (c, mark) in row.iter().enumerate() {
                weights[r][c] = mark.weight();
            }
        }
        ModeWeightTable { weights }
    }
}

impl ModeWeightTable {
    pub fn zeros() -> Self {
        ModeWeightTable {
            weights: [[0.0; 5]; 5],
        }
    }

    pub fn weight(&self, row: ExplanationType, mode: ExplanationMode) -> f64 {
        self.weights[row.index()][mode.index()]
    }

    pub fn set(&mut self, row: ExplanationType, mode: ExplanationMode, weight: f64) -> Result<()> {
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "weight {weight} for {row}/{mode} must be finite and non-negative"
            )));
        }
        self.weights[row.index()][mode.index()] = weight;
        Ok(())
    }

    /// Decodes every cell back to a mark; fails on weights that are not an encoding.
    pub fn decode_marks(&self) -> Result<[[Mark; 5]; 5]> {
        let mut marks = [[Mark::Blank; 5]; 5];
        for row in ExplanationType::ALL {
            for mode in ExplanationMode::ALL {
                let w = self.weight(row, mode);
                marks[row.index()][mode.index()] = Mark::from_weight(w).ok_or_else(|| {
                    Error::InvalidArgument(format!("weight {w} at {row}/{mode} is not a mark"))
                })?;
            }
        }
        Ok(marks)
    }
}

impl TryFrom<BTreeMap<ExplanationType, BTreeMap<ExplanationMode, f64>>> for ModeWeightTable {
    type Error = Error;

    fn try_from(map: BTreeMap<ExplanationType, BTreeMap<ExplanationMode, f64>>) -> Result<Self> {
        let mut table = ModeWeightTable::zeros();
        for row in ExplanationType::ALL {
            let cols = map
                .get(&row)
                .ok_or_else(|| Error::InvalidArgument(format!("weight table lacks row {row}")))?;
            for mode in ExplanationMode::ALL {
                let w = cols.get(&mode).copied().ok_or_else(|| {
                    Error::InvalidArgument(format!("weight table lacks cell {row}/{mode}"))
                })?;
                table.set(row, mode, w)?;
            }
        }
        Ok(table)
    }
}

impl From<ModeWeightTable> for BTreeMap<ExplanationType, BTreeMap<ExplanationMode, f64>> {
    fn from(table: ModeWeightTable) -> Self {
        ExplanationType::ALL
            .into_iter()
            .map(|row| {
                let cols = ExplanationMode::ALL
                    .into_iter()
                    .map(|mode| (mode, table.weight(row, mode)))
                    .collect();
                (row, cols)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tier {
    Implemented,
    Planned,
    OutOfScope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodCatalogEntry {
    pub method_name: String,
    pub malle_category: ExplanationMode,
    pub tier: Tier,
}

pub mod methods {
    pub const COUNTERFACTUAL_EXPLANATIONS: &str = "Counterfactual Explanations";
    pub const ADVERSARIAL_EXAMPLES: &str = "Adversarial Examples";
    pub const PROTOTYPES: &str = "Prototypes";
    pub const CRITICISMS: &str = "Criticisms";
    pub const INFLUENTIAL_INSTANCES: &str = "Influential Instances";
    pub const KNN_SHAP: &str = "K-Nearest Neighbors (SHAP-based)";
    pub const PDP: &str = "Partial Dependence Plot (PDP)";
    pub const ALE: &str = "Accumulated Local Effects (ALE)";
    pub const H_STATISTIC: &str = "Feature Interaction (H-statistic)";
    pub const FUNCTIONAL_DECOMPOSITION: &str = "Functional Decomposition";
    pub const PERMUTATION_IMPORTANCE: &str = "Permutation Feature Importance";
    pub const GLOBAL_SURROGATE: &str = "Global Surrogate Models";
    pub const TRAINING_REPORT: &str = "Model Training Report";
    pub const CLUSTER_ANALYSIS: &str = "Cluster Analysis for Covariation";
    pub const CASE_BASED_REASONING: &str = "Case-Based Reasoning (CBR)";
    pub const EXEMPLAR_BASED: &str = "Exemplar-Based Explanations";
    pub const MANN: &str = "Memory-Augmented Neural Networks (MANNs)";
    pub const NEAREST_PROTOTYPE_RECALL: &str = "Nearest Prototype Recall";
    pub const DECISION_LOGS: &str = "Historical Decision Logs";
    pub const NATURAL_LANGUAGE: &str = "Natural Language Explanations (NLE)";
    pub const RULEFIT: &str = "Decision Rule Extraction (RuleFit)";
    pub const NARRATIVE: &str = "Narrative-Based Explanations";
    pub const POST_HOC_JUSTIFICATION: &str = "Post-Hoc Justifications (Bias Alignment)";
}

/// The 23 catalogued methods in table order.
pub fn default_catalog() -> Vec<MethodCatalogEntry> {
    use methods::*;
    use ExplanationMode::*;
    use Tier::*;
    [
        (COUNTERFACTUAL_EXPLANATIONS, SimulationProjection, Implemented),
        (ADVERSARIAL_EXAMPLES, SimulationProjection, Implemented),
        (PROTOTYPES, KnowledgeStructures, Implemented),
        (CRITICISMS, KnowledgeStructures, Implemented),
        (INFLUENTIAL_INSTANCES, DirectRecall, Implemented),
        (KNN_SHAP, KnowledgeStructures, Implemented),
        (PDP, Covariation, Implemented),
        (ALE, Covariation, OutOfScope),
        (H_STATISTIC, Covariation, OutOfScope),
        (FUNCTIONAL_DECOMPOSITION, KnowledgeStructures, OutOfScope),
        (PERMUTATION_IMPORTANCE, Covariation, Implemented),
        (GLOBAL_SURROGATE, KnowledgeStructures, Implemented),
        (TRAINING_REPORT, Rationalization, Implemented),
        (CLUSTER_ANALYSIS, Covariation, Implemented),
        (CASE_BASED_REASONING, DirectRecall, OutOfScope),
        (EXEMPLAR_BASED, DirectRecall, Planned),
        (MANN, DirectRecall, OutOfScope),
        (NEAREST_PROTOTYPE_RECALL, DirectRecall, Planned),
        (DECISION_LOGS, DirectRecall, Implemented),
        (NATURAL_LANGUAGE, Rationalization, Implemented),
        (RULEFIT, Rationalization, OutOfScope),
        (NARRATIVE, Rationalization, OutOfScope),
        (POST_HOC_JUSTIFICATION, Rationalization, OutOfScope),
    ]
    .into_iter()
    .map(|(name, category, tier)| MethodCatalogEntry {
        method_name: name.to_owned(),
        malle_category: category,
        tier,
    })
    .collect()
}

/// Rejects catalogs with repeated method names.
pub fn validate_catalog(catalog: &[MethodCatalogEntry]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for entry in catalog {
        if !seen.insert(entry.method_name.as_str()) {
            return Err(Error::DuplicateId(entry.method_name.clone()));
        }
    }
    Ok(())
}
