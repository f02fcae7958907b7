//! Brute-force reference implementations used by the integration tests.
//! Written against the public data types only; none of them call into the
//! explainers they check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use exemplar_core::model::{DecisionRecord, Instance, Label};
use exemplar_core::store::{Collection, Metric};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---- geometry -------------------------------------------------------------

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

pub fn cosine_sim(a: &[f64], b: &[f64]) -> Option<f64> {
    let (na, nb) = (dot(a, a), dot(b, b));
    if na == 0.0 || nb == 0.0 {
        None
    } else {
        Some(dot(a, b) / (na * nb).sqrt())
    }
}

pub fn dist(metric: Metric, a: &[f64], b: &[f64]) -> f64 {
    match metric {
        Metric::Euclidean => sq_dist(a, b).sqrt(),
        Metric::Cosine => 1.0 - cosine_sim(a, b).unwrap_or(0.0),
    }
}

// ---- random data ------------------------------------------------------------

/// Coordinates are either continuous or drawn from a small integer grid,
/// which produces many exact distance ties.
pub fn random_point(r: &mut ChaCha8Rng, dim: usize, grid: bool) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim)
            .map(|_| if grid { r.random_range(-2..=2) as f64 } else { r.random_range(-5.0..5.0) })
            .collect();
        if v.iter().any(|x| *x != 0.0) {
            return v;
        }
    }
}

pub struct Dataset {
    pub collection: Collection<f64>,
    pub grid: bool,
}

/// `n` instances with shuffled ids, class labels `0..classes`, features
/// `f0..` mirroring the embedding plus a categorical feature `g` in {0, 1}.
pub fn random_dataset(r: &mut ChaCha8Rng, n: usize, dim: usize, classes: usize, metric: Metric) -> Dataset {
    let grid = r.random_bool(0.5);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(r);
    let mut c = Collection::new("rand", dim, metric).unwrap();
    for id in ids {
        let e = random_point(r, dim, grid);
        let class = r.random_range(0..classes) as f64;
        let mut inst = Instance::new(format!("i{id:04}"), e.clone())
            .with_label(class)
            .with_feature("g", r.random_range(0..2) as f64);
        for (j, v) in e.iter().enumerate() {
            inst = inst.with_feature(format!("f{j}"), *v);
        }
        if r.random_bool(0.5) {
            inst = inst.validated(true);
        }
        c.upsert(inst).unwrap();
    }
    Dataset { collection: c, grid }
}

// ---- search oracles ------------------------------------------------------------

/// Every instance passing `keep`, sorted by (distance, id), truncated to `k`.
pub fn knn_oracle(
    c: &Collection<f64>,
    query: &[f64],
    k: usize,
    keep: impl Fn(&Instance<f64>) -> bool,
) -> Vec<(String, f64)> {
    let mut all: Vec<(String, f64)> = c
        .iter()
        .filter(|i| keep(i))
        .map(|i| (i.id.clone(), dist(c.metric(), query, &i.embedding)))
        .collect();
    all.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

pub fn counterfactual_oracle(
    c: &Collection<f64>,
    query: &Instance<f64>,
    target: Option<&Label<f64>>,
    immutable: &BTreeSet<String>,
) -> Option<(String, f64)> {
    let current = query.label.as_ref().map(|l| l.class_key());
    let mut cands: Vec<(String, f64)> = c
        .iter()
        .filter(|i| i.id != query.id)
        .filter(|i| match (&i.label, target) {
            (None, _) => false,
            (Some(l), Some(t)) => l == t,
            (Some(l), None) => Some(l.class_key()) != current,
        })
        .filter(|i| immutable.iter().all(|f| i.features.get(f) == query.features.get(f)))
        .map(|i| (i.id.clone(), dist(c.metric(), &query.embedding, &i.embedding)))
        .collect();
    cands.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    cands.into_iter().next()
}

/// Per-instance (unlike distance, like distance, ratio) and the flagged list.
#[allow(clippy::type_complexity)]
pub fn adversarial_oracle(
    c: &Collection<f64>,
    k: usize,
    threshold: f64,
) -> (BTreeMap<String, (f64, Option<f64>, Option<f64>)>, Vec<(String, f64)>) {
    let keyed: Vec<(&Instance<f64>, String)> =
        c.iter().map(|i| (i, i.label.as_ref().unwrap().class_key())).collect();
    let mut entries = BTreeMap::new();
    for (a, ka) in &keyed {
        let mut like = f64::INFINITY;
        let mut unlike = f64::INFINITY;
        for (b, kb) in keyed.iter().filter(|(b, _)| b.id != a.id) {
            let d = dist(c.metric(), &a.embedding, &b.embedding);
            if ka == kb {
                like = like.min(d);
            } else {
                unlike = unlike.min(d);
            }
        }
        let like = like.is_finite().then_some(like);
        let ratio = match like {
            Some(l) if l > 0.0 => Some(unlike / l),
            _ if unlike == 0.0 => Some(1.0),
            _ => None,
        };
        entries.insert(a.id.clone(), (unlike, like, ratio));
    }
    let mut flagged: Vec<(String, f64)> = entries
        .iter()
        .filter_map(|(id, (_, _, r))| r.filter(|r| *r < threshold).map(|r| (id.clone(), r)))
        .collect();
    flagged.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    flagged.truncate(k);
    (entries, flagged)
}

pub fn recall_oracle(records: &[DecisionRecord<f64>], query: &[f64], tau: f64) -> Option<(String, f64)> {
    let mut best: Option<(String, f64)> = None;
    for r in records.iter().filter(|r| r.validated) {
        let Some(s) = cosine_sim(query, &r.query_embedding) else { continue };
        if s < tau {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bid, bs)) => s > *bs || (s == *bs && r.id < *bid),
        };
        if better {
            best = Some((r.id.clone(), s));
        }
    }
    best
}

// ---- Shapley oracle ----------------------------------------------------------------

pub struct ShapleyCase {
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    pub query: Vec<f64>,
    pub k: usize,
    pub classify: bool,
    /// Classification target; `None` means the class predicted with all features.
    pub target: Option<f64>,
}

impl ShapleyCase {
    fn knn(&self, subset: &[usize]) -> Vec<usize> {
        let d = self.query.len() as f64;
        let mut scored: Vec<(f64, usize)> = (0..self.rows.len())
            .map(|i| {
                let mut s = 0.0;
                for &j in subset {
                    let diff = self.query[j] - self.rows[i][j];
                    s += diff * diff;
                }
                ((d / subset.len() as f64 * s).sqrt(), i)
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(self.ids[a.1].cmp(&self.ids[b.1])));
        scored.into_iter().take(self.k).map(|(_, i)| i).collect()
    }

    fn majority(&self, idx: &[usize]) -> f64 {
        let mut best: Option<(usize, usize, f64)> = None; // (count, first pos, label)
        for (pos, &i) in idx.iter().enumerate() {
            let l = self.labels[i];
            if idx[..pos].iter().any(|&p| self.labels[p] == l) {
                continue;
            }
            let count = idx.iter().filter(|&&p| self.labels[p] == l).count();
            if best.is_none_or(|(bc, _, _)| count > bc) {
                best = Some((count, pos, l));
            }
        }
        best.unwrap().2
    }

    pub fn target_class(&self) -> f64 {
        let all: Vec<usize> = (0..self.query.len()).collect();
        self.target.unwrap_or_else(|| self.majority(&self.knn(&all)))
    }

    pub fn value(&self, subset: &[usize]) -> f64 {
        let pool: Vec<usize> = if subset.is_empty() {
            (0..self.rows.len()).collect()
        } else {
            self.knn(subset)
        };
        let n = pool.len() as f64;
        if self.classify {
            let t = self.target_class();
            pool.iter().filter(|&&i| self.labels[i] == t).count() as f64 / n
        } else {
            pool.iter().map(|&i| self.labels[i]).sum::<f64>() / n
        }
    }

    /// φ_i = Σ_{S ⊆ N∖{i}} |S|!(d−|S|−1)!/d! · (v(S ∪ {i}) − v(S)).
    pub fn shapley(&self) -> Vec<f64> {
        let d = self.query.len();
        let fact = |n: usize| (1..=n).map(|x| x as f64).product::<f64>();
        (0..d)
            .map(|i| {
                let others: Vec<usize> = (0..d).filter(|&j| j != i).collect();
                let mut phi = 0.0;
                for bits in 0..(1u32 << others.len()) {
                    let s: Vec<usize> = others
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| bits & (1 << b) != 0)
                        .map(|(_, &j)| j)
                        .collect();
                    let mut with = s.clone();
                    with.push(i);
                    with.sort();
                    let w = fact(s.len()) * fact(d - s.len() - 1) / fact(d);
                    phi += w * (self.value(&with) - self.value(&s));
                }
                phi
            })
            .collect()
    }

    pub fn to_collection(&self) -> (Collection<f64>, Instance<f64>) {
        let d = self.query.len();
        let mut c = Collection::new("shap", d, Metric::Euclidean).unwrap();
        for (i, row) in self.rows.iter().enumerate() {
            let mut inst = Instance::new(self.ids[i].clone(), row.clone()).with_label(self.labels[i]);
            for (j, v) in row.iter().enumerate() {
                inst = inst.with_feature(format!("f{j}"), *v);
            }
            c.upsert(inst).unwrap();
        }
        let mut q = Instance::new("query", self.query.clone());
        for (j, v) in self.query.iter().enumerate() {
            q = q.with_feature(format!("f{j}"), *v);
        }
        (c, q)
    }
}

pub fn random_shapley_case(r: &mut ChaCha8Rng, d: usize) -> ShapleyCase {
    let n = r.random_range(4..=30);
    let classify = r.random_bool(0.5);
    let grid = r.random_bool(0.3);
    let mut ids: Vec<String> = (0..n).map(|i| format!("s{i:03}")).collect();
    ids.shuffle(r);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| random_point(r, d, grid)).collect();
    let labels = (0..n)
        .map(|_| if classify { r.random_range(0..3) as f64 } else { r.random_range(-10.0..10.0) })
        .collect();
    ShapleyCase {
        ids,
        rows,
        labels,
        query: random_point(r, d, grid),
        k: r.random_range(1..=n.min(6)),
        classify,
        target: None,
    }
}

// ---- MMD oracles -----------------------------------------------------------------

pub fn rbf(a: &[f64], b: &[f64], sigma: f64) -> f64 {
    (-sq_dist(a, b) / (2.0 * sigma * sigma)).exp()
}

/// Direct MMD² between a sample and a subset of it.
pub fn mmd2(points: &[Vec<f64>], subset: &[usize], sigma: f64) -> f64 {
    let n = points.len() as f64;
    let m = subset.len() as f64;
    let mut xx = 0.0;
    for a in points {
        for b in points {
            xx += rbf(a, b, sigma);
        }
    }
    let mut xp = 0.0;
    for a in points {
        for &p in subset {
            xp += rbf(a, &points[p], sigma);
        }
    }
    let mut pp = 0.0;
    for &p in subset {
        for &q in subset {
            pp += rbf(&points[p], &points[q], sigma);
        }
    }
    xx / (n * n) - 2.0 * xp / (n * m) + pp / (m * m)
}

/// Greedy selection recomputing MMD² from scratch for every candidate;
/// ties go to the lowest index.
pub fn greedy_oracle(points: &[Vec<f64>], m: usize, sigma: f64) -> Vec<(usize, f64)> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut steps = Vec::new();
    for _ in 0..m {
        let mut best: Option<(usize, f64)> = None;
        for c in 0..points.len() {
            if chosen.contains(&c) {
                continue;
            }
            let mut s = chosen.clone();
            s.push(c);
            let v = mmd2(points, &s, sigma);
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((c, v));
            }
        }
        let (c, v) = best.unwrap();
        chosen.push(c);
        steps.push((c, v));
    }
    steps
}

pub fn median_pairwise(points: &[Vec<f64>]) -> f64 {
    let mut d = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d.push(sq_dist(&points[i], &points[j]).sqrt());
        }
    }
    d.sort_by(f64::total_cmp);
    if d.is_empty() {
        return 1.0;
    }
    let mid = d.len() / 2;
    let m = if d.len() % 2 == 1 { d[mid] } else { (d[mid - 1] + d[mid]) / 2.0 };
    if m > 0.0 { m } else { 1.0 }
}

/// Witness value of every point against a prototype subset.
pub fn witness_oracle(points: &[Vec<f64>], protos: &[usize], sigma: f64) -> Vec<f64> {
    points
        .iter()
        .map(|x| {
            let data = points.iter().map(|y| rbf(x, y, sigma)).sum::<f64>() / points.len() as f64;
            let proto = protos.iter().map(|&p| rbf(x, &points[p], sigma)).sum::<f64>() / protos.len() as f64;
            data - proto
        })
        .collect()
}
