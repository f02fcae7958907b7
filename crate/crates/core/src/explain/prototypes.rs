//! Prototype and criticism selection by maximum mean discrepancy, and the
//! nearest-prototype surrogate built on top of it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Label};
use crate::scalar::{self, Scalar};
use crate::store::Collection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    Rbf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Bandwidth {
    /// Median pairwise Euclidean distance over the collection.
    Auto,
    Fixed(f64),
}

/// `k(x, y) = exp(-|x - y|² / (2 σ²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub kind: KernelKind,
    pub bandwidth: Bandwidth,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            kind: KernelKind::Rbf,
            bandwidth: Bandwidth::Auto,
        }
    }
}

impl KernelConfig {
    pub fn fixed(sigma: f64) -> Self {
        KernelConfig {
            kind: KernelKind::Rbf,
            bandwidth: Bandwidth::Fixed(sigma),
        }
    }

    /// Resolves the bandwidth; a zero median falls back to one.
    pub fn resolve<T: Scalar>(&self, collection: &Collection<T>) -> Result<T> {
        match self.bandwidth {
            Bandwidth::Fixed(s) if s > 0.0 && s.is_finite() => Ok(T::of(s)),
            Bandwidth::Fixed(s) => Err(Error::InvalidArgument(format!("bandwidth {s} must be positive"))),
            Bandwidth::Auto => {
                let points: Vec<&[T]> = collection.iter().map(|i| i.embedding.as_slice()).collect();
                let median = median_pairwise_distance(&points);
                Ok(match median {
                    Some(m) if m > T::zero() && m.is_finite() => m,
                    _ => T::one(),
                })
            }
        }
    }
}

pub fn median_pairwise_distance<T: Scalar>(points: &[&[T]]) -> Option<T> {
    let mut dists = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            dists.push(scalar::euclidean(points[i], points[j]));
        }
    }
    if dists.is_empty() {
        return None;
    }
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mid = dists.len() / 2;
    Some(if dists.len() % 2 == 1 {
        dists[mid]
    } else {
        (dists[mid - 1] + dists[mid]) / T::of(2.0)
    })
}

pub fn rbf<T: Scalar>(a: &[T], b: &[T], sigma: T) -> T {
    (-scalar::squared_euclidean(a, b) / (T::of(2.0) * sigma * sigma)).exp()
}

/// Prototypes of one class with the squared MMD after each greedy step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ClassPrototypes<T> {
    pub class: String,
    pub label: Label<T>,
    pub ids: Vec<String>,
    pub mmd2_trace: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PrototypeSet<T> {
    pub bandwidth: T,
    pub classes: Vec<ClassPrototypes<T>>,
}

impl<T: Scalar> PrototypeSet<T> {
    pub fn all_ids(&self) -> Vec<String> {
        self.classes.iter().flat_map(|c| c.ids.iter().cloned()).collect()
    }

    pub fn class(&self, key: &str) -> Option<&ClassPrototypes<T>> {
        self.classes.iter().find(|c| c.class == key)
    }
}

/// Labelled instances grouped by class key, each group in id order.
pub(crate) fn group_by_class<T: Scalar>(collection: &Collection<T>) -> BTreeMap<String, Vec<&Instance<T>>> {
    let mut groups: BTreeMap<String, Vec<&Instance<T>>> = BTreeMap::new();
    for inst in collection.iter() {
        if let Some(label) = &inst.label {
            groups.entry(label.class_key()).or_default().push(inst);
        }
    }
    groups
}

fn gram<T: Scalar>(members: &[&Instance<T>], sigma: T) -> Vec<Vec<T>> {
    members
        .iter()
        .map(|a| members.iter().map(|b| rbf(&a.embedding, &b.embedding, sigma)).collect())
        .collect()
}

/// Greedy MMD minimisation over the indices of one class; returns the chosen
/// indices and the squared MMD after each step. Ties go to the lowest index.
pub(crate) fn greedy_mmd<T: Scalar>(k: &[Vec<T>], m: usize) -> (Vec<usize>, Vec<T>) {
    let n = k.len();
    let nt = T::of_usize(n);
    let data_term = k.iter().flatten().copied().sum::<T>() / (nt * nt);
    let col_sums: Vec<T> = (0..n).map(|c| (0..n).map(|i| k[i][c]).sum()).collect();

    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    let mut in_set = vec![false; n];
    // Σ_i Σ_{p∈P} k(x_i, p) and Σ_{p,q∈P} k(p, q)
    let mut cross = T::zero();
    let mut within = T::zero();
    let mut trace = Vec::with_capacity(m);
    for _ in 0..m {
        let size = T::of_usize(chosen.len() + 1);
        let mut best: Option<(usize, T)> = None;
        for c in (0..n).filter(|&c| !in_set[c]) {
            let link: T = chosen.iter().map(|&p| k[p][c]).sum();
            let mmd2 = data_term - T::of(2.0) * (cross + col_sums[c]) / (nt * size)
                + (within + T::of(2.0) * link + k[c][c]) / (size * size);
            if best.is_none_or(|(_, b)| mmd2 < b) {
                best = Some((c, mmd2));
            }
        }
        let Some((c, mmd2)) = best else { break };
        let link: T = chosen.iter().map(|&p| k[p][c]).sum();
        cross = cross + col_sums[c];
        within = within + T::of(2.0) * link + k[c][c];
        chosen.push(c);
        in_set[c] = true;
        trace.push(mmd2);
    }
    (chosen, trace)
}

/// Greedily picks `m` prototypes per class minimising the squared MMD
/// between the class sample and its prototypes.
pub fn select_prototypes<T: Scalar>(
    collection: &Collection<T>,
    per_class: usize,
    kernel: &KernelConfig,
) -> Result<PrototypeSet<T>> {
    if per_class == 0 {
        return Err(Error::InvalidArgument("per-class prototype count must be at least 1".into()));
    }
    if collection.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let groups = group_by_class(collection);
    if groups.is_empty() {
        let first = collection.iter().next().map(|i| i.id.clone()).unwrap_or_default();
        return Err(Error::MissingLabels(first));
    }
    let sigma = kernel.resolve(collection)?;
    let mut classes = Vec::with_capacity(groups.len());
    for (class, members) in groups {
        if members.len() < per_class {
            return Err(Error::ClassTooSmall {
                class,
                size: members.len(),
                requested: per_class,
            });
        }
        let k = gram(&members, sigma);
        let (chosen, mmd2_trace) = greedy_mmd(&k, per_class);
        classes.push(ClassPrototypes {
            label: members[0].label.clone().expect("grouped instances are labelled"),
            ids: chosen.iter().map(|&i| members[i].id.clone()).collect(),
            class,
            mmd2_trace,
        });
    }
    Ok(PrototypeSet {
        bandwidth: sigma,
        classes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Criticism<T> {
    pub class: String,
    pub id: String,
    /// Mean kernel similarity to the class minus mean similarity to its prototypes.
    pub witness: T,
}

/// Witness value of every class member, keyed by class then in id order.
pub fn witness_values<T: Scalar>(
    collection: &Collection<T>,
    prototypes: &PrototypeSet<T>,
) -> Result<BTreeMap<String, Vec<(String, T)>>> {
    let sigma = prototypes.bandwidth;
    let mut out = BTreeMap::new();
    for (class, members) in group_by_class(collection) {
        let Some(protos) = prototypes.class(&class) else { continue };
        if protos.ids.is_empty() {
            continue;
        }
        let proto_vecs: Vec<&[T]> = protos
            .ids
            .iter()
            .map(|id| {
                collection
                    .get(id)
                    .map(|i| i.embedding.as_slice())
                    .ok_or_else(|| Error::UnknownId(id.clone()))
            })
            .collect::<Result<_>>()?;
        let n = T::of_usize(members.len());
        let m = T::of_usize(proto_vecs.len());
        let values = members
            .iter()
            .map(|x| {
                let data: T = members.iter().map(|y| rbf(&x.embedding, &y.embedding, sigma)).sum();
                let proto: T = proto_vecs.iter().map(|p| rbf(&x.embedding, p, sigma)).sum();
                (x.id.clone(), data / n - proto / m)
            })
            .collect();
        out.insert(class, values);
    }
    Ok(out)
}

/// Per class, the `count` non-prototype members with the largest
/// |witness|; ties go to the lower id.
pub fn select_criticisms<T: Scalar>(
    collection: &Collection<T>,
    prototypes: &PrototypeSet<T>,
    count: usize,
) -> Result<Vec<Criticism<T>>> {
    if prototypes.classes.is_empty() {
        return Err(Error::NoPrototypes);
    }
    let mut out = Vec::new();
    if count == 0 {
        return Ok(out);
    }
    for (class, values) in witness_values(collection, prototypes)? {
        let protos = &prototypes.class(&class).expect("witness classes have prototypes").ids;
        let mut candidates: Vec<(String, T)> = values
            .into_iter()
            .filter(|(id, _)| !protos.contains(id))
            .collect();
        if candidates.len() < count {
            return Err(Error::CountExceedsRemaining {
                class,
                requested: count,
                remaining: candidates.len(),
            });
        }
        candidates.sort_by(|a, b| {
            b.1.abs()
                .partial_cmp(&a.1.abs())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        out.extend(candidates.into_iter().take(count).map(|(id, witness)| Criticism {
            class: class.clone(),
            id,
            witness,
        }));
    }
    Ok(out)
}

/// Nearest-prototype classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PrototypeSurrogate<T> {
    pub prototypes: Vec<(String, Vec<T>, Label<T>)>,
}

impl<T: Scalar> PrototypeSurrogate<T> {
    /// Label of the closest prototype under `collection`'s metric; ties go
    /// to the lower prototype id.
    pub fn predict(&self, collection: &Collection<T>, query: &[T]) -> &Label<T> {
        let mut best: Option<(T, &str, &Label<T>)> = None;
        for (id, emb, label) in &self.prototypes {
            let d = collection.distance(query, emb);
            let better = match best {
                None => true,
                Some((bd, bid, _)) => d < bd || (d == bd && id.as_str() < bid),
            };
            if better {
                best = Some((d, id, label));
            }
        }
        best.expect("surrogate has at least one prototype").2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SurrogateReport<T> {
    pub surrogate: PrototypeSurrogate<T>,
    /// Fraction of instances with a stored prediction on which the surrogate agrees.
    pub fidelity: T,
    pub evaluated: usize,
}

pub fn prototype_surrogate<T: Scalar>(
    collection: &Collection<T>,
    prototype_ids: &[String],
) -> Result<SurrogateReport<T>> {
    if prototype_ids.is_empty() {
        return Err(Error::NoPrototypes);
    }
    let prototypes = prototype_ids
        .iter()
        .map(|id| {
            let inst = collection.get(id).ok_or_else(|| Error::UnknownId(id.clone()))?;
            Ok((id.clone(), inst.embedding.clone(), inst.require_label()?.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let surrogate = PrototypeSurrogate { prototypes };
    let mut agree = 0usize;
    let mut evaluated = 0usize;
    for inst in collection.iter() {
        let Some(pred) = &inst.prediction else { continue };
        evaluated += 1;
        if surrogate.predict(collection, &inst.embedding).class_key() == pred.class_key() {
            agree += 1;
        }
    }
    if evaluated == 0 {
        return Err(Error::InvalidArgument("no instance carries a stored prediction".into()));
    }
    Ok(SurrogateReport {
        surrogate,
        fidelity: T::of_usize(agree) / T::of_usize(evaluated),
        evaluated,
    })
}
