//! Synthetic corporate-loan harness: a seeded portfolio, a fixed logistic
//! rating formula, and the explanation bundle produced for rejections.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::decision_log::{DecisionLog, DEFAULT_THRESHOLD};
use crate::engine::recommend;
use crate::error::{Error, Result};
use crate::explain::{
    cluster_covariation, influential_instances, knn_predict, knn_shapley, pdp_curve, permutation_importance,
    prototype_surrogate, render_text, select_criticisms, select_prototypes, training_report, ClusterReport,
    Criticism, Importance, ImportanceMetric, KernelConfig, PdpPoint, PredictMode, PrototypeSet, ShapleyConfig,
    TrainingReport,
};
use crate::model::{
    default_catalog, methods, write_instances_jsonl, DecisionRecord, ExplanationBundle, ExplanationMode, FeatureMap,
    Instance, Label, MethodNote, ModeWeightTable, Neighbor, ProfilePair, Recommendation, Scored,
};
use crate::store::{hit_order, Collection, Filter, Hit, Metric};

pub const SECTORS: [&str; 4] = ["Energy", "Manufacturing", "Retail", "Services"];
pub const DEFAULT_THRESHOLD_RATING: f64 = 0.5;
pub const MIN_QUADRANT_SIZE: usize = 10;

/// Features the rating formula reads, in embedding order.
pub const SCORING_FEATURES: [&str; 4] = ["size", "leverage", "profitability", "liquidity"];
/// Control feature with zero weight in the rating formula.
pub const NOISE_FEATURE: &str = "noise";

// (mean, std) used to standardize each raw feature; size is standardized on ln scale.
const LN_SIZE: (f64, f64) = (17.0, 1.0);
const LEVERAGE: (f64, f64) = (1.2, 0.6);
const PROFITABILITY: (f64, f64) = (0.05, 0.05);
const LIQUIDITY: (f64, f64) = (1.5, 0.5);

const WEIGHTS: [f64; 4] = [0.4, -1.5, 1.2, 0.8];
const BIAS: f64 = 0.2;

/// Valid what-if range per raw feature.
pub fn feature_range(name: &str) -> Option<(f64, f64)> {
    match name {
        "size" => Some((f64::MIN_POSITIVE, 1e12)),
        "leverage" => Some((0.0, 10.0)),
        "profitability" => Some((-1.0, 1.0)),
        "liquidity" => Some((0.0, 10.0)),
        NOISE_FEATURE => Some((-10.0, 10.0)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawFeatures {
    /// Revenue in currency units.
    pub size: f64,
    pub sector: String,
    pub leverage: f64,
    pub profitability: f64,
    pub liquidity: f64,
    pub noise: f64,
}

impl RawFeatures {
    /// Standardized scoring features in [`SCORING_FEATURES`] order.
    pub fn standardized(&self) -> [f64; 4] {
        [
            (self.size.ln() - LN_SIZE.0) / LN_SIZE.1,
            (self.leverage - LEVERAGE.0) / LEVERAGE.1,
            (self.profitability - PROFITABILITY.0) / PROFITABILITY.1,
            (self.liquidity - LIQUIDITY.0) / LIQUIDITY.1,
        ]
    }

    fn get(&self, name: &str) -> Option<f64> {
        match name {
            "size" => Some(self.size),
            "leverage" => Some(self.leverage),
            "profitability" => Some(self.profitability),
            "liquidity" => Some(self.liquidity),
            NOISE_FEATURE => Some(self.noise),
            _ => None,
        }
    }

    fn set(&mut self, name: &str, value: f64) {
        match name {
            "size" => self.size = value,
            "leverage" => self.leverage = value,
            "profitability" => self.profitability = value,
            "liquidity" => self.liquidity = value,
            NOISE_FEATURE => self.noise = value,
            _ => {}
        }
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Rating from standardized scoring features.
pub fn rating_from_standardized(z: &[f64; 4]) -> f64 {
    logistic(WEIGHTS.iter().zip(z).map(|(w, v)| w * v).sum::<f64>() + BIAS)
}

pub fn rating(raw: &RawFeatures) -> f64 {
    rating_from_standardized(&raw.standardized())
}

/// The scoring formula read off a standardized feature map.
pub fn rating_model(features: &FeatureMap<f64>) -> f64 {
    let z = SCORING_FEATURES.map(|f| features.get(f).copied().unwrap_or(0.0));
    rating_from_standardized(&z)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreditApplicant {
    pub id: String,
    pub features: RawFeatures,
    pub rating: f64,
    pub approved: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SizeBucket {
    Small,
    Large,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quadrant {
    pub size_bucket: SizeBucket,
    pub sector: String,
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{}", self.size_bucket, self.sector)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Portfolio {
    pub applicants: Vec<CreditApplicant>,
    pub threshold: f64,
    /// Median revenue; sizes strictly below it are `Small`.
    pub size_median: f64,
}

pub fn generate_portfolio(n: usize, seed: u64) -> Result<Portfolio> {
    generate_portfolio_with_threshold(n, seed, DEFAULT_THRESHOLD_RATING)
}

pub fn generate_portfolio_with_threshold(n: usize, seed: u64, threshold: f64) -> Result<Portfolio> {
    if n == 0 {
        return Err(Error::InvalidArgument("portfolio needs at least one applicant".into()));
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = |m: f64, s: f64| Normal::new(m, s).expect("constant parameters are valid");
    let (ln_size, lev, prof, liq, noise) = (
        normal(LN_SIZE.0, LN_SIZE.1),
        normal(LEVERAGE.0, LEVERAGE.1),
        normal(PROFITABILITY.0, PROFITABILITY.1),
        normal(LIQUIDITY.0, LIQUIDITY.1),
        normal(0.0, 1.0),
    );
    let width = n.to_string().len().max(4);
    let applicants: Vec<CreditApplicant> = (0..n)
        .map(|i| {
            let features = RawFeatures {
                size: ln_size.sample(&mut rng).exp(),
                sector: SECTORS[rng.random_range(0..SECTORS.len())].to_owned(),
                leverage: lev.sample(&mut rng).max(0.0),
                profitability: prof.sample(&mut rng),
                liquidity: liq.sample(&mut rng).max(0.0),
                noise: noise.sample(&mut rng),
            };
            let r = rating(&features);
            CreditApplicant {
                id: format!("app-{i:0width$}"),
                features,
                rating: r,
                approved: r >= threshold,
            }
        })
        .collect();
    let mut sizes: Vec<f64> = applicants.iter().map(|a| a.features.size).collect();
    sizes.sort_by(f64::total_cmp);
    let mid = sizes.len() / 2;
    let size_median = if sizes.len() % 2 == 1 {
        sizes[mid]
    } else {
        (sizes[mid - 1] + sizes[mid]) / 2.0
    };
    Ok(Portfolio {
        applicants,
        threshold,
        size_median,
    })
}

impl Portfolio {
    pub fn get(&self, id: &str) -> Option<&CreditApplicant> {
        self.applicants.iter().find(|a| a.id == id)
    }

    pub fn quadrant(&self, applicant: &CreditApplicant) -> Quadrant {
        Quadrant {
            size_bucket: if applicant.features.size < self.size_median {
                SizeBucket::Small
            } else {
                SizeBucket::Large
            },
            sector: applicant.features.sector.clone(),
        }
    }

    pub fn rejections(&self) -> impl Iterator<Item = &CreditApplicant> {
        self.applicants.iter().filter(|a| !a.approved)
    }

    /// Instance view: standardized embedding, standardized features plus
    /// noise, approval flag as label. Predictions are filled by
    /// [`Portfolio::to_collection`].
    pub fn to_instance(&self, applicant: &CreditApplicant) -> Instance<f64> {
        let z = applicant.features.standardized();
        let flag = if applicant.approved { 1.0 } else { 0.0 };
        let mut inst = Instance::new(applicant.id.clone(), z.to_vec())
            .with_label(flag)
            .with_feature(NOISE_FEATURE, applicant.features.noise)
            .with_metadata("sector", applicant.features.sector.clone())
            .with_metadata("quadrant", self.quadrant(applicant).to_string());
        for (name, v) in SCORING_FEATURES.iter().zip(z) {
            inst = inst.with_feature(*name, v);
        }
        inst
    }

    /// Euclidean collection of all applicants. Each stored prediction is the
    /// leave-one-out kNN vote, so cluster covariation shows where the
    /// neighbourhood disagrees with the rating formula.
    pub fn to_collection(&self, k: usize) -> Result<Collection<f64>> {
        let mut c = Collection::new("credit", SCORING_FEATURES.len(), Metric::Euclidean)?;
        c.upsert_all(self.applicants.iter().map(|a| self.to_instance(a)))?;
        if c.len() < 2 {
            return Ok(c);
        }
        let mut predicted = Vec::with_capacity(c.len());
        for inst in c.iter() {
            let filter = Filter::default().excluding(inst.id.clone());
            let p = knn_predict(&c, &inst.embedding, k, PredictMode::Classify, Some(&filter))?;
            predicted.push(inst.clone().with_prediction(p.prediction.label()));
        }
        c.upsert_all(predicted)?;
        Ok(c)
    }
}

fn approval_model(threshold: f64) -> impl Fn(&FeatureMap<f64>) -> f64 {
    move |f| if rating_model(f) >= threshold { 1.0 } else { 0.0 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIf {
    pub rating: f64,
    pub approved: bool,
    pub delta: f64,
}

/// Re-scores `applicant` with raw-unit edits applied; the applicant is unchanged.
pub fn whatif_rescore(applicant: &CreditApplicant, edits: &BTreeMap<String, f64>, threshold: f64) -> Result<WhatIf> {
    let mut raw = applicant.features.clone();
    for (name, &value) in edits {
        let (min, max) = feature_range(name).ok_or_else(|| Error::UnknownFeature(name.clone()))?;
        if !(value >= min && value <= max) {
            return Err(Error::OutOfRangeEdit {
                feature: name.clone(),
                value,
                min,
                max,
            });
        }
        raw.set(name, value);
    }
    let base = rating(&applicant.features);
    let r = rating(&raw);
    Ok(WhatIf {
        rating: r,
        approved: r >= threshold,
        delta: r - base,
    })
}

/// Current raw value of an editable feature.
pub fn raw_feature(applicant: &CreditApplicant, name: &str) -> Option<f64> {
    applicant.features.get(name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreditConfig {
    pub k: usize,
    pub prototypes_per_class: usize,
    pub criticisms_per_class: usize,
    pub clusters: usize,
    pub importance_repeats: usize,
    pub pdp_grid: usize,
    pub seed: u64,
    pub recall_threshold: f64,
}

impl Default for CreditConfig {
    fn default() -> Self {
        CreditConfig {
            k: 5,
            prototypes_per_class: 3,
            criticisms_per_class: 2,
            clusters: 4,
            importance_repeats: 5,
            pdp_grid: 20,
            seed: 0,
            recall_threshold: DEFAULT_THRESHOLD,
        }
    }
}

/// Permutation importance on one quadrant's applicants against the
/// approval decision.
pub fn quadrant_importance(
    portfolio: &Portfolio,
    quadrant: &Quadrant,
    repeats: usize,
    seed: u64,
) -> Result<BTreeMap<String, Importance<f64>>> {
    let instances: Vec<Instance<f64>> = portfolio
        .applicants
        .iter()
        .filter(|a| &portfolio.quadrant(a) == quadrant)
        .map(|a| portfolio.to_instance(a))
        .collect();
    if instances.len() < MIN_QUADRANT_SIZE {
        return Err(Error::EmptyQuadrant {
            quadrant: quadrant.to_string(),
            size: instances.len(),
            min: MIN_QUADRANT_SIZE,
        });
    }
    let refs: Vec<&Instance<f64>> = instances.iter().collect();
    let model = approval_model(portfolio.threshold);
    permutation_importance(&refs, &model, ImportanceMetric::Accuracy, repeats, seed)
}

/// Explainer outputs that do not depend on the applicant being explained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioArtifacts {
    pub prototypes: PrototypeSet<f64>,
    pub criticisms: Vec<Criticism<f64>>,
    pub surrogate_fidelity: f64,
    pub clusters: ClusterReport<f64>,
    pub training: TrainingReport<f64>,
    pub pdp: BTreeMap<String, Vec<PdpPoint<f64>>>,
    /// Keyed by quadrant; quadrants below the minimum size are absent.
    pub quadrant_importance: BTreeMap<String, BTreeMap<String, Importance<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterContext {
    pub cluster: usize,
    pub size: usize,
    pub error_rate: f64,
    pub lift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecalledDecision {
    pub record: DecisionRecord<f64>,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionExplanation {
    pub applicant: CreditApplicant,
    pub quadrant: Quadrant,
    pub bundle: ExplanationBundle<f64>,
    /// Recommended methods that produced output, in recommendation order.
    pub methods_used: Vec<String>,
    pub deferred: Vec<MethodNote>,
    pub quadrant_importance: Option<BTreeMap<String, Importance<f64>>>,
    pub surrogate_fidelity: Option<f64>,
    pub cluster: Option<ClusterContext>,
    pub training_digest: Option<String>,
    pub recalled_decision: Option<RecalledDecision>,
}

pub struct CreditHarness {
    pub portfolio: Portfolio,
    pub config: CreditConfig,
    pub collection: Collection<f64>,
    pub recommendation: Recommendation,
    pub artifacts: PortfolioArtifacts,
}

fn config_digest(config: &CreditConfig, threshold: f64) -> Result<String> {
    let bytes = serde_json::to_vec(&(config, threshold))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

impl CreditHarness {
    pub fn new(portfolio: Portfolio, config: CreditConfig) -> Result<Self> {
        let p = ProfilePair::credit();
        let recommendation = recommend(&p.model, &p.user, &default_catalog(), &ModeWeightTable::default())?;
        let collection = portfolio.to_collection(config.k)?;

        let prototypes = select_prototypes(&collection, config.prototypes_per_class, &KernelConfig::default())?;
        let criticisms = select_criticisms(&collection, &prototypes, config.criticisms_per_class)?;
        let surrogate_fidelity = prototype_surrogate(&collection, &prototypes.all_ids())?.fidelity;
        let clusters = cluster_covariation(&collection, config.clusters.min(collection.len()), config.seed, 0.5)?;
        let training = training_report(&collection, &config_digest(&config, portfolio.threshold)?);

        let instances: Vec<&Instance<f64>> = collection.iter().collect();
        let mut pdp = BTreeMap::new();
        for f in SCORING_FEATURES {
            pdp.insert(f.to_owned(), pdp_curve(&instances, &rating_model, f, config.pdp_grid)?);
        }
        let mut quadrant_imp = BTreeMap::new();
        let quadrants: std::collections::BTreeSet<Quadrant> =
            portfolio.applicants.iter().map(|a| portfolio.quadrant(a)).collect();
        for q in quadrants {
            match quadrant_importance(&portfolio, &q, config.importance_repeats, config.seed) {
                Ok(imp) => {
                    quadrant_imp.insert(q.to_string(), imp);
                }
                Err(Error::EmptyQuadrant { .. }) => {}
                Err(e) => return Err(e),
            }
        }

        Ok(CreditHarness {
            artifacts: PortfolioArtifacts {
                prototypes,
                criticisms,
                surrogate_fidelity,
                clusters,
                training,
                pdp,
                quadrant_importance: quadrant_imp,
            },
            portfolio,
            config,
            collection,
            recommendation,
        })
    }

    /// Builds the rejection bundle by running each ranked method in turn.
    pub fn explain_rejection(&self, id: &str, log: Option<&DecisionLog<f64>>) -> Result<RejectionExplanation> {
        let applicant = self.portfolio.get(id).ok_or_else(|| Error::UnknownId(id.to_owned()))?;
        if applicant.approved {
            return Err(Error::ApplicantApproved(id.to_owned()));
        }
        let c = &self.collection;
        let inst = c.get(id).ok_or_else(|| Error::UnknownId(id.to_owned()))?;
        let query = inst.embedding.as_slice();
        let quadrant = self.portfolio.quadrant(applicant);
        let k = self.config.k;

        let mut out = RejectionExplanation {
            applicant: applicant.clone(),
            quadrant: quadrant.clone(),
            bundle: ExplanationBundle::new(id),
            methods_used: Vec::new(),
            deferred: self.recommendation.deferred.clone(),
            quadrant_importance: None,
            surrogate_fidelity: None,
            cluster: None,
            training_digest: None,
            recalled_decision: None,
        };

        // Nearest approved and nearest rejected cases back every mode's text.
        let mut hits: Vec<Hit<f64>> = Vec::new();
        for flag in [1.0, 0.0] {
            let filter = Filter::label(flag).excluding(id);
            hits.extend(c.knn_query(query, k, Some(&filter))?);
        }
        hits.sort_by(hit_order);
        out.bundle.neighbors = hits
            .into_iter()
            .map(|h| Neighbor {
                label: c.get(&h.id).and_then(|i| i.label.clone()),
                id: h.id,
                distance: h.distance,
            })
            .collect();

        let own = Filter::default().excluding(id);
        for method in &self.recommendation.ranked_methods {
            let ran = match method.as_str() {
                methods::PROTOTYPES => {
                    let mut ps: Vec<Scored<f64>> = self
                        .artifacts
                        .prototypes
                        .all_ids()
                        .into_iter()
                        .filter_map(|pid| c.get(&pid).map(|p| Scored::new(pid.clone(), c.distance(query, &p.embedding))))
                        .collect();
                    ps.sort_by(|a, b| a.value.total_cmp(&b.value).then_with(|| a.id.cmp(&b.id)));
                    out.bundle.prototypes = ps;
                    !out.bundle.prototypes.is_empty()
                }
                methods::CRITICISMS => {
                    out.bundle.criticisms = self
                        .artifacts
                        .criticisms
                        .iter()
                        .map(|cr| Scored::new(cr.id.clone(), cr.witness))
                        .collect();
                    !out.bundle.criticisms.is_empty()
                }
                methods::KNN_SHAP => {
                    let mut q = Instance::new(id, query.to_vec());
                    for f in SCORING_FEATURES {
                        q = q.with_feature(f, inst.require_feature(f)?);
                    }
                    let mut cfg = ShapleyConfig::new(k, PredictMode::Classify);
                    cfg.target_class = Some(Label::Num(0.0));
                    let attr = knn_shapley(c, &q, &cfg)?;
                    out.bundle.attributions = attr.per_feature;
                    out.bundle.base_value = Some(attr.base_value);
                    out.bundle.predicted_value = Some(attr.prediction);
                    true
                }
                methods::GLOBAL_SURROGATE => {
                    out.surrogate_fidelity = Some(self.artifacts.surrogate_fidelity);
                    true
                }
                methods::INFLUENTIAL_INSTANCES => {
                    out.bundle.influences = influential_instances(c, query, k, PredictMode::Classify, Some(&own))?;
                    !out.bundle.influences.is_empty()
                }
                methods::DECISION_LOGS => {
                    if let Some(log) = log {
                        out.recalled_decision =
                            log.recall_decision(query, self.config.recall_threshold)?.map(|r| RecalledDecision {
                                record: r.record,
                                similarity: r.similarity,
                            });
                    }
                    // An absent log is consulted as an empty one.
                    true
                }
                methods::PDP => !self.artifacts.pdp.is_empty(),
                methods::PERMUTATION_IMPORTANCE => {
                    out.quadrant_importance = self.artifacts.quadrant_importance.get(&quadrant.to_string()).cloned();
                    out.quadrant_importance.is_some()
                }
                methods::CLUSTER_ANALYSIS => {
                    let r = &self.artifacts.clusters;
                    out.cluster = r.assignments.get(id).map(|&ci| ClusterContext {
                        cluster: ci,
                        size: r.sizes[ci],
                        error_rate: r.per_cluster_error_rate[ci],
                        lift: r.lifts[ci],
                    });
                    out.cluster.is_some()
                }
                methods::TRAINING_REPORT => {
                    out.training_digest = Some(self.artifacts.training.config_digest.clone());
                    true
                }
                // Rendered last, once the other fields are filled.
                methods::NATURAL_LANGUAGE => false,
                _ => false,
            };
            if ran {
                out.methods_used.push(method.clone());
            }
        }

        let lines = self
            .recommendation
            .ranked_modes
            .iter()
            .filter(|m| **m != ExplanationMode::SimulationProjection && self.recommendation.mode_scores[*m] > 0.0)
            .map(|&m| render_text(&out.bundle, m))
            .collect::<Result<Vec<_>>>()?;
        out.bundle.rendered_text = lines.join("\n");
        if self
            .recommendation
            .ranked_methods
            .iter()
            .any(|m| m == methods::NATURAL_LANGUAGE)
        {
            out.methods_used.push(methods::NATURAL_LANGUAGE.to_owned());
            let order = |m: &String| self.recommendation.ranked_methods.iter().position(|r| r == m);
            out.methods_used.sort_by_key(order);
        }
        Ok(out)
    }
}

/// Convenience wrapper: builds a harness with defaults and explains one applicant.
pub fn explain_rejection(portfolio: &Portfolio, applicant: &CreditApplicant) -> Result<RejectionExplanation> {
    if applicant.approved {
        return Err(Error::ApplicantApproved(applicant.id.clone()));
    }
    CreditHarness::new(portfolio.clone(), CreditConfig::default())?.explain_rejection(&applicant.id, None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoSummary {
    pub applicants: usize,
    pub rejections: usize,
    pub files: Vec<String>,
}

/// Writes the portfolio, the recommendation, the shared artifacts and one
/// bundle per rejection under `dir`. Output is a pure function of the arguments.
pub fn write_demo(dir: &Path, n: usize, seed: u64, threshold: f64) -> Result<DemoSummary> {
    let portfolio = generate_portfolio_with_threshold(n, seed, threshold)?;
    let config = CreditConfig {
        seed,
        ..CreditConfig::default()
    };
    let harness = CreditHarness::new(portfolio, config)?;
    fs::create_dir_all(dir.join("bundles"))?;
    let mut files = Vec::new();

    let mut body = Vec::new();
    write_instances_jsonl(&mut body, harness.collection.iter())?;
    fs::write(dir.join("portfolio.jsonl"), body)?;
    files.push("portfolio.jsonl".to_owned());

    let mut write_json = |name: &str, value: &dyn erased::Json| -> Result<()> {
        fs::write(dir.join(name), value.to_pretty()?)?;
        files.push(name.to_owned());
        Ok(())
    };
    write_json("applicants.json", &harness.portfolio)?;
    write_json("recommendation.json", &harness.recommendation)?;
    write_json("artifacts.json", &harness.artifacts)?;
    let mut rejections = 0;
    for a in harness.portfolio.rejections() {
        let expl = harness.explain_rejection(&a.id, None)?;
        write_json(&format!("bundles/{}.json", a.id), &expl)?;
        rejections += 1;
    }
    Ok(DemoSummary {
        applicants: harness.portfolio.applicants.len(),
        rejections,
        files,
    })
}

mod erased {
    use serde::Serialize;

    /// Object-safe pretty JSON serialization.
    pub trait Json {
        fn to_pretty(&self) -> crate::Result<Vec<u8>>;
    }

    impl<T: Serialize> Json for T {
        fn to_pretty(&self) -> crate::Result<Vec<u8>> {
            let mut v = serde_json::to_vec_pretty(self)?;
            v.push(b'\n');
            Ok(v)
        }
    }
}
