//! One PASS/FAIL line per primary acceptance criterion, each with its
//! runtime against a pinned budget.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use exemplar_core::credit::{generate_portfolio, write_demo, CreditConfig, CreditHarness};
use exemplar_core::decision_log::DecisionLog;
use exemplar_core::docs::{answer_with_provenance, build_corpus, record_validated_answer, Answer, EMBED_DIM};
use exemplar_core::engine::recommend;
use exemplar_core::explain::{
    adversarial_sensitivity, counterfactual_search, kmeans, knn_shapley, pdp_curve, permutation_importance,
    select_prototypes, CounterfactualTarget, ImportanceMetric, KernelConfig, PredictMode, ShapleyConfig,
};
use exemplar_core::model::{
    default_catalog, DecisionRecord, ExplanationMode, FeatureMap, Instance, Label, Mark, ModeWeightTable,
    ProfilePair,
};
use exemplar_core::store::{load, persist, Collection, Filter, Metric};
use rand::Rng;

const SHAPLEY_TOL: f64 = 1e-9;
const PDP_TOL: f64 = 1e-9;
const MMD_ORACLE_TOL: f64 = 1e-9;

/// Criteria whose target cannot be met by a faithful implementation; the
/// reason is printed with the FAIL line.
const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[(
    "prototype-criticism-oracle",
    "greedy squared MMD is not monotone in general; some random sets rise on a later step",
)];

fn run(name: &str, budget: Duration, check: impl FnOnce() -> Result<(), String>) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let elapsed = start.elapsed();
    let outcome = match outcome {
        Ok(()) if elapsed > budget => Err(format!("over budget {budget:?}")),
        other => other,
    };
    match &outcome {
        Ok(()) => println!("PASS {name} ({elapsed:.2?} / {budget:?})"),
        Err(why) => {
            let known = KNOWN_UNATTAINABLE.iter().find(|(n, _)| *n == name).map(|(_, r)| *r);
            match known {
                Some(reason) => println!("FAIL {name} ({elapsed:.2?}): {why} [known: {reason}]"),
                None => println!("FAIL {name} ({elapsed:.2?}): {why}"),
            }
        }
    }
    outcome.is_ok()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mode_weight_fidelity() -> Result<(), String> {
    use Mark::*;
    // Rows: Cause, Causal History, Enabling Factor, Reason/Actors, Reason/Observers.
    // Columns: KS, SP, Cov, DR, Rat.
    let expected = [
        [Regular, Weak, Weak, Blank, Blank],
        [Strong, Regular, Regular, Blank, Blank],
        [Strong, Blank, Regular, Blank, Blank],
        [Weak, Blank, Blank, Strong, Regular],
        [Strong, Strong, Weak, Blank, Blank],
    ];
    let decoded = ModeWeightTable::default().decode_marks().map_err(|e| e.to_string())?;
    ensure(decoded == expected, || format!("decoded {decoded:?}"))
}

fn method_catalog_fidelity() -> Result<(), String> {
    use ExplanationMode::*;
    let expected = [
        ("Counterfactual Explanations", SimulationProjection),
        ("Adversarial Examples", SimulationProjection),
        ("Prototypes", KnowledgeStructures),
        ("Criticisms", KnowledgeStructures),
        ("Influential Instances", DirectRecall),
        ("K-Nearest Neighbors (SHAP-based)", KnowledgeStructures),
        ("Partial Dependence Plot (PDP)", Covariation),
        ("Accumulated Local Effects (ALE)", Covariation),
        ("Feature Interaction (H-statistic)", Covariation),
        ("Functional Decomposition", KnowledgeStructures),
        ("Permutation Feature Importance", Covariation),
        ("Global Surrogate Models", KnowledgeStructures),
        ("Model Training Report", Rationalization),
        ("Cluster Analysis for Covariation", Covariation),
        ("Case-Based Reasoning (CBR)", DirectRecall),
        ("Exemplar-Based Explanations", DirectRecall),
        ("Memory-Augmented Neural Networks (MANNs)", DirectRecall),
        ("Nearest Prototype Recall", DirectRecall),
        ("Historical Decision Logs", DirectRecall),
        ("Natural Language Explanations (NLE)", Rationalization),
        ("Decision Rule Extraction (RuleFit)", Rationalization),
        ("Narrative-Based Explanations", Rationalization),
        ("Post-Hoc Justifications (Bias Alignment)", Rationalization),
    ];
    let got: Vec<(String, ExplanationMode)> =
        default_catalog().into_iter().map(|e| (e.method_name, e.malle_category)).collect();
    let want: Vec<(String, ExplanationMode)> = expected.iter().map(|(n, m)| (n.to_string(), *m)).collect();
    ensure(got == want, || format!("catalog differs: {got:?}"))
}

fn case_conclusions() -> Result<(), String> {
    let catalog = default_catalog();
    let table = ModeWeightTable::default();
    let credit = ProfilePair::credit();
    let r = recommend(&credit.model, &credit.user, &catalog, &table).map_err(|e| e.to_string())?;
    let top2: BTreeSet<ExplanationMode> = r.ranked_modes[..2].iter().copied().collect();
    let third = r.mode_scores[&r.ranked_modes[2]];
    ensure(
        top2 == BTreeSet::from([ExplanationMode::KnowledgeStructures, ExplanationMode::DirectRecall])
            && r.mode_scores[&r.ranked_modes[1]] > third,
        || format!("credit scores {:?}", r.mode_scores),
    )?;

    let docs = ProfilePair::documentation();
    let r = recommend(&docs.model, &docs.user, &catalog, &table).map_err(|e| e.to_string())?;
    let top = r.mode_scores[&ExplanationMode::DirectRecall];
    ensure(
        r.ranked_modes[0] == ExplanationMode::DirectRecall
            && r.mode_scores.iter().filter(|(m, _)| **m != ExplanationMode::DirectRecall).all(|(_, s)| *s < top),
        || format!("docs scores {:?}", r.mode_scores),
    )?;
    for e in catalog.iter().filter(|e| e.malle_category == ExplanationMode::SimulationProjection) {
        ensure(r.is_excluded(&e.method_name), || format!("{} not excluded for docs", e.method_name))?;
    }
    Ok(())
}

fn shapley_oracle() -> Result<(), String> {
    let mut r = rng(2024);
    for i in 0..50 {
        let case = random_shapley_case(&mut r, 1 + i % 6);
        let (c, q) = case.to_collection();
        let mode = if case.classify { PredictMode::Classify } else { PredictMode::Regress };
        let res = knn_shapley(&c, &q, &ShapleyConfig::new(case.k, mode)).map_err(|e| e.to_string())?;
        for (g, w) in res.per_feature.values().zip(case.shapley()) {
            ensure((g - w).abs() <= SHAPLEY_TOL, || format!("instance {i}: {g} vs {w}"))?;
        }
    }
    for i in 0..100 {
        let d = r.random_range(1..=5);
        let mut case = random_shapley_case(&mut r, d);
        case.classify = false;
        case.k = 2;
        if case.rows.len() < 4 {
            continue;
        }
        // Column d duplicates column 0; column d+1 is a constructed dummy.
        let mut order: Vec<usize> = (0..case.rows.len()).collect();
        order.sort_by(|a, b| case.ids[*a].cmp(&case.ids[*b]));
        let rest: Vec<f64> = order[2..].iter().map(|&j| case.labels[j]).collect();
        let mu = rest.iter().sum::<f64>() / rest.len() as f64;
        case.labels[order[0]] = mu;
        case.labels[order[1]] = mu;
        for row in case.rows.iter_mut() {
            row.push(row[0]);
        }
        case.query.push(case.query[0]);
        let with_dup = case.to_collection();
        let res = knn_shapley(&with_dup.0, &with_dup.1, &ShapleyConfig::new(case.k, PredictMode::Regress))
            .map_err(|e| e.to_string())?;
        ensure(res.efficiency_gap() <= SHAPLEY_TOL, || format!("case {i}: efficiency gap {}", res.efficiency_gap()))?;
        let phi: Vec<f64> = res.per_feature.values().copied().collect();
        ensure((phi[0] - phi[d]).abs() <= SHAPLEY_TOL, || format!("case {i}: symmetry {phi:?}"))?;

        for row in case.rows.iter_mut() {
            row.push(0.5);
        }
        case.query.push(0.5);
        let (c, q) = case.to_collection();
        let res = knn_shapley(&c, &q, &ShapleyConfig::new(case.k, PredictMode::Regress)).map_err(|e| e.to_string())?;
        let phi: Vec<f64> = res.per_feature.values().copied().collect();
        ensure(phi[d + 1].abs() <= SHAPLEY_TOL, || format!("case {i}: dummy {phi:?}"))?;
    }
    Ok(())
}

fn search_oracles() -> Result<(), String> {
    let mut r = rng(31337);
    for set in 0..30 {
        let n = r.random_range(2..=1000);
        let dim = r.random_range(1..=6);
        let metric = if set % 2 == 0 { Metric::Euclidean } else { Metric::Cosine };
        let data = random_dataset(&mut r, n, dim, 2, metric);
        let c = &data.collection;
        let ids: Vec<String> = c.iter().map(|i| i.id.clone()).collect();
        for _ in 0..5 {
            let q = random_point(&mut r, dim, data.grid);
            let k = r.random_range(1..=20);
            let got: Vec<(String, f64)> =
                c.knn_query(&q, k, None).unwrap().into_iter().map(|h| (h.id, h.distance)).collect();
            ensure(got == knn_oracle(c, &q, k, |_| true), || format!("set {set}: knn"))?;
            let f = Filter::default().excluding(ids[0].clone());
            let got: Vec<(String, f64)> =
                c.knn_query(&q, k, Some(&f)).unwrap().into_iter().map(|h| (h.id, h.distance)).collect();
            ensure(got == knn_oracle(c, &q, k, |i| i.id != ids[0]), || format!("set {set}: filtered knn"))?;

            let query = c.get(&ids[r.random_range(0..n)]).unwrap().clone();
            let immutable: BTreeSet<String> =
                if r.random_bool(0.5) { BTreeSet::from(["g".to_owned()]) } else { BTreeSet::new() };
            let got = counterfactual_search(c, &query, &CounterfactualTarget::NotCurrent, &immutable)
                .unwrap()
                .map(|s| (s.id, s.value));
            ensure(got == counterfactual_oracle(c, &query, None, &immutable), || format!("set {set}: counterfactual"))?;
            let target = Label::Num(1.0);
            let got = counterfactual_search(c, &query, &CounterfactualTarget::Label(target.clone()), &immutable)
                .unwrap()
                .map(|s| (s.id, s.value));
            ensure(got == counterfactual_oracle(c, &query, Some(&target), &immutable), || {
                format!("set {set}: labelled counterfactual")
            })?;
        }

        let classes: BTreeSet<String> = c.iter().map(|i| i.label.as_ref().unwrap().class_key()).collect();
        if classes.len() == 2 {
            let report = adversarial_sensitivity(c, 10, 1.0).map_err(|e| e.to_string())?;
            let (entries, flagged) = adversarial_oracle(c, 10, 1.0);
            for e in &report.entries {
                ensure(entries[&e.id] == (e.unlike_distance, e.like_distance, e.ratio), || {
                    format!("set {set}: sensitivity of {}", e.id)
                })?;
            }
            let got: Vec<(String, f64)> = report.flagged.into_iter().map(|s| (s.id, s.value)).collect();
            ensure(got == flagged, || format!("set {set}: flagged"))?;
        }

        let mut log = DecisionLog::new(dim).map_err(|e| e.to_string())?;
        let mut records = Vec::new();
        for (j, inst) in c.iter().enumerate().take(100) {
            let rec = DecisionRecord {
                id: inst.id.clone(),
                query_embedding: inst.embedding.clone(),
                decision: format!("d{j}"),
                justification: String::new(),
                validator: "reviewer".into(),
                validated: inst.validated,
                timestamp: chrono::DateTime::UNIX_EPOCH,
            };
            log.record_decision(rec.clone()).map_err(|e| e.to_string())?;
            records.push(rec);
        }
        for _ in 0..5 {
            let q = random_point(&mut r, dim, data.grid);
            let got = log.recall_decision(&q, 0.8).unwrap().map(|h| (h.record.id, h.similarity));
            ensure(got == recall_oracle(&records, &q, 0.8), || format!("set {set}: recall"))?;
        }
    }
    Ok(())
}

fn prototype_oracle() -> Result<(), String> {
    let mut r = rng(10);
    let mut rises = Vec::new();
    for set in 0..20 {
        let n = r.random_range(3..=12);
        let dim = r.random_range(1..=3);
        let points: Vec<Vec<f64>> = (0..n).map(|_| random_point(&mut r, dim, false)).collect();
        let m = r.random_range(1..=3.min(n));
        let mut c = Collection::new("p", dim, Metric::Euclidean).unwrap();
        for (i, p) in points.iter().enumerate() {
            c.upsert(Instance::new(format!("p{i:02}"), p.clone()).with_label(0.0)).unwrap();
        }
        let protos = select_prototypes(&c, m, &KernelConfig::default()).map_err(|e| e.to_string())?;
        let class = &protos.classes[0];
        let oracle = greedy_oracle(&points, m, median_pairwise(&points));
        for (step, ((id, got), (idx, want))) in class.ids.iter().zip(&class.mmd2_trace).zip(&oracle).enumerate() {
            ensure(
                id[1..].parse::<usize>().unwrap() == *idx && (got - want).abs() <= MMD_ORACLE_TOL,
                || format!("set {set} step {step} differs from oracle"),
            )?;
        }
        if class.mmd2_trace.windows(2).any(|w| w[1] >= w[0]) {
            rises.push(format!("set {set} trace {:?}", class.mmd2_trace));
        }
    }
    let mut blob = rng(11);
    let mut pts = Vec::new();
    for centre in [-20.0, 20.0] {
        for _ in 0..5 {
            pts.push(vec![centre + blob.random_range(-1.0..1.0), blob.random_range(-1.0..1.0)]);
        }
    }
    let mut c = Collection::new("blobs", 2, Metric::Euclidean).unwrap();
    for (i, p) in pts.iter().enumerate() {
        c.upsert(Instance::new(format!("p{i:02}"), p.clone()).with_label(0.0)).unwrap();
    }
    let protos = select_prototypes(&c, 2, &KernelConfig::default()).map_err(|e| e.to_string())?;
    let sides: BTreeSet<bool> = protos.classes[0].ids.iter().map(|id| id[1..].parse::<usize>().unwrap() < 5).collect();
    ensure(sides.len() == 2, || "blobs share a prototype".into())?;
    ensure(rises.is_empty(), || format!("squared MMD did not strictly decrease: {}", rises.join("; ")))
}

fn covariation_sanity() -> Result<(), String> {
    let mut r = rng(5);
    let instances: Vec<Instance<f64>> = (0..200)
        .map(|i| {
            let x1: f64 = r.random_range(-3.0..3.0);
            let x2: f64 = r.random_range(-3.0..3.0);
            let y = 2.0 * x1 - 0.5 * x2 + 1.0;
            Instance::new(format!("r{i:03}"), vec![x1, x2])
                .with_feature("x1", x1)
                .with_feature("x2", x2)
                .with_feature("constant", 4.0)
                .with_label(y)
        })
        .collect();
    let refs: Vec<&Instance<f64>> = instances.iter().collect();
    let model = |f: &FeatureMap<f64>| 2.0 * f["x1"] - 0.5 * f["x2"] + 1.0 + 0.0 * f["constant"];
    let imp = permutation_importance(&refs, &model, ImportanceMetric::Mae, 5, 9).map_err(|e| e.to_string())?;
    ensure(imp["constant"].mean == 0.0 && imp["constant"].std == 0.0, || format!("{:?}", imp["constant"]))?;

    let mean_x2 = instances.iter().map(|i| i.features["x2"]).sum::<f64>() / 200.0;
    for p in pdp_curve(&refs, &model, "x1", 25).map_err(|e| e.to_string())? {
        let analytic = 2.0 * p.value - 0.5 * mean_x2 + 1.0;
        ensure((p.mean_prediction - analytic).abs() <= PDP_TOL, || format!("pdp at {}: {}", p.value, p.mean_prediction))?;
    }

    let mut pts = Vec::new();
    let mut truth = Vec::new();
    for (b, centre) in [(0usize, -10.0), (1, 10.0)] {
        for _ in 0..50 {
            pts.push(vec![centre + r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)]);
            truth.push(b);
        }
    }
    let views: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
    let km = kmeans(&views, 2, 7, 1e-6).map_err(|e| e.to_string())?;
    let flip = km.assignments[0] != truth[0];
    let recovered = km.assignments.iter().zip(&truth).all(|(a, t)| (*a != *t) == flip);
    ensure(recovered && km.converged, || "k-means did not recover the two blobs".into())
}

fn determinism_and_persistence() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let sa = write_demo(&a, 500, 42, 0.5).map_err(|e| e.to_string())?;
    let sb = write_demo(&b, 500, 42, 0.5).map_err(|e| e.to_string())?;
    ensure(sa == sb, || "demo summaries differ".into())?;
    for f in &sa.files {
        let (x, y) = (std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
        ensure(x == y, || format!("{f} differs between runs"))?;
    }

    let mut r = rng(8);
    let data = random_dataset(&mut r, 1000, 6, 3, Metric::Euclidean);
    let path = dir.path().join("store.col");
    persist(&data.collection, &path).map_err(|e| e.to_string())?;
    let back: Collection<f64> = load(&path).map_err(|e| e.to_string())?;
    for _ in 0..100 {
        let q = random_point(&mut r, 6, data.grid);
        let k = r.random_range(1..=30);
        ensure(back.knn_query(&q, k, None).unwrap() == data.collection.knn_query(&q, k, None).unwrap(), || {
            "query results changed after reload".into()
        })?;
        let radius = r.random_range(0.0..4.0);
        ensure(
            back.range_query(&q, radius, None).unwrap() == data.collection.range_query(&q, radius, None).unwrap(),
            || "range results changed after reload".into(),
        )?;
    }
    Ok(())
}

fn credit_end_to_end() -> Result<(), String> {
    let portfolio = generate_portfolio(500, 42).map_err(|e| e.to_string())?;
    let harness = CreditHarness::new(portfolio, CreditConfig { seed: 42, ..CreditConfig::default() })
        .map_err(|e| e.to_string())?;
    let catalog: BTreeMap<String, ExplanationMode> =
        default_catalog().into_iter().map(|e| (e.method_name, e.malle_category)).collect();
    let rec = &harness.recommendation;
    let recommended: BTreeSet<ExplanationMode> = rec.ranked_methods.iter().map(|m| catalog[m]).collect();
    let mut count = 0;
    for a in harness.portfolio.rejections() {
        let e = harness.explain_rejection(&a.id, None).map_err(|e| e.to_string())?;
        let used: BTreeSet<ExplanationMode> = e.methods_used.iter().map(|m| catalog[m]).collect();
        ensure(used == recommended, || format!("{}: families {used:?} vs {recommended:?}", a.id))?;
        ensure(!e.bundle.prototypes.is_empty() && !e.bundle.criticisms.is_empty() && !e.bundle.influences.is_empty(), || {
            format!("{}: empty bundle section", a.id)
        })?;
        let gap = e.bundle.predicted_value.unwrap() - e.bundle.base_value.unwrap()
            - e.bundle.attributions.values().sum::<f64>();
        ensure(gap.abs() <= SHAPLEY_TOL, || format!("{}: efficiency gap {gap}", a.id))?;
        for m in &e.methods_used {
            ensure(catalog[m] != ExplanationMode::SimulationProjection, || format!("{}: {m} used", a.id))?;
        }
        ensure(e.bundle.counterfactual.is_none(), || format!("{}: counterfactual in bundle", a.id))?;
        for id in e.bundle.referenced_ids() {
            ensure(harness.portfolio.get(id).is_some(), || format!("{}: foreign id {id}", a.id))?;
        }
        count += 1;
    }
    for note in &rec.deferred {
        ensure(catalog[&note.method_name] == ExplanationMode::SimulationProjection, || {
            format!("{} deferred", note.method_name)
        })?;
    }
    ensure(count > 0, || "no rejections in the seeded portfolio".into())
}

fn docs_flow() -> Result<(), String> {
    let corpus = build_corpus::<f64>(
        "regs",
        &[
            ("policy".into(), "Capital buffers must be reported quarterly.\n\nLiquidity coverage applies to all banks.".into()),
            ("faq".into(), "Reports are filed through the supervisory portal.".into()),
        ],
    )
    .map_err(|e| e.to_string())?;
    let mut log = DecisionLog::new(EMBED_DIM).map_err(|e| e.to_string())?;
    let question = "How often are capital buffers reported?";
    let passages = answer_with_provenance(&corpus, &log, question, 0.95).map_err(|e| e.to_string())?;
    ensure(matches!(passages, Answer::PassagesOnly { .. }), || "empty log must return passages".into())?;
    record_validated_answer(&mut log, "qa-1", question, "Quarterly.", "compliance.officer").map_err(|e| e.to_string())?;
    let q: Vec<f64> = exemplar_core::docs::embed_text(question, EMBED_DIM).unwrap();
    let hit = log.recall_decision(&q, 0.95).unwrap().ok_or("no recall")?;
    ensure(hit.similarity == 1.0, || format!("similarity {}", hit.similarity))?;
    let answer = answer_with_provenance(&corpus, &log, question, 0.95).map_err(|e| e.to_string())?;
    match &answer {
        Answer::ValidatedLog { validator, record_id, .. } => {
            ensure(validator == "compliance.officer" && record_id == "qa-1", || format!("{answer:?}"))?
        }
        other => return Err(format!("expected reuse, got {other:?}")),
    }
    for value in [serde_json::to_value(&answer).unwrap(), serde_json::to_value(&passages).unwrap()] {
        let mut keys = Vec::new();
        collect_keys(&value, &mut keys);
        for k in keys {
            let k = k.to_lowercase();
            ensure(!["confidence", "probab", "certainty", "score"].iter().any(|b| k.contains(b)), || {
                format!("confidence-like field {k}")
            })?;
        }
    }
    Ok(())
}

fn collect_keys(v: &serde_json::Value, out: &mut Vec<String>) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, inner) in map {
                out.push(k.clone());
                collect_keys(inner, out);
            }
        }
        serde_json::Value::Array(items) => items.iter().for_each(|i| collect_keys(i, out)),
        _ => {}
    }
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        ("mode-weight-fidelity", run("mode-weight-fidelity", s(1), mode_weight_fidelity)),
        ("method-catalog-fidelity", run("method-catalog-fidelity", s(1), method_catalog_fidelity)),
        ("case-conclusions", run("case-conclusions", s(1), case_conclusions)),
        ("shapley-oracle", run("shapley-oracle", s(30), shapley_oracle)),
        ("search-oracles", run("search-oracles", s(60), search_oracles)),
        ("prototype-criticism-oracle", run("prototype-criticism-oracle", s(30), prototype_oracle)),
        ("covariation-importance-sanity", run("covariation-importance-sanity", s(10), covariation_sanity)),
        ("determinism-persistence", run("determinism-persistence", s(30), determinism_and_persistence)),
        ("credit-end-to-end", run("credit-end-to-end", s(60), credit_end_to_end)),
        ("docs-flow", run("docs-flow", s(10), docs_flow)),
    ];
    let unexpected: Vec<&str> = results
        .iter()
        .filter(|(name, ok)| !ok && !KNOWN_UNATTAINABLE.iter().any(|(n, _)| n == name))
        .map(|(name, _)| *name)
        .collect();
    let passed = results.iter().filter(|(_, ok)| *ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if !unexpected.is_empty() {
        eprintln!("failing criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
