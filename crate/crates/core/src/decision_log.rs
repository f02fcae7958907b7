//! Validated human decisions, recalled by cosine similarity.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::DecisionRecord;
use crate::scalar::{cosine_similarity, Scalar};
use crate::store::persist::{checksum, decode, encode, write_atomic, CollectionHeader};
use crate::store::Metric;

pub const DEFAULT_THRESHOLD: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub struct Recalled<T> {
    pub record: DecisionRecord<T>,
    pub similarity: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionLog<T> {
    dimension: usize,
    records: BTreeMap<String, DecisionRecord<T>>,
}

pub fn check_threshold(tau: f64) -> Result<()> {
    if (0.0..=1.0).contains(&tau) {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(tau))
    }
}

impl<T: Scalar> DecisionLog<T> {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(DecisionLog {
            dimension,
            records: BTreeMap::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&DecisionRecord<T>> {
        self.records.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &DecisionRecord<T>> {
        self.records.values()
    }

    /// Stores or replaces a record; returns the number of stored records.
    pub fn record_decision(&mut self, record: DecisionRecord<T>) -> Result<usize> {
        record.validate()?;
        if record.query_embedding.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: record.query_embedding.len(),
            });
        }
        if record.query_embedding.iter().all(|v| v.is_zero()) {
            return Err(Error::ZeroVectorUnderCosine(record.id));
        }
        self.records.insert(record.id.clone(), record);
        Ok(self.records.len())
    }

    /// Best validated record with similarity at least `tau`; ties go to the
    /// smaller id. Unvalidated records are never returned.
    pub fn recall_decision(&self, query: &[T], tau: f64) -> Result<Option<Recalled<T>>> {
        check_threshold(tau)?;
        if query.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: query.len(),
            });
        }
        let tau = T::of(tau);
        let mut best: Option<(&DecisionRecord<T>, T)> = None;
        // BTreeMap order makes the first strictly-better record win ties.
        for rec in self.records.values().filter(|r| r.validated) {
            let Some(sim) = cosine_similarity(query, &rec.query_embedding) else {
                continue;
            };
            if sim < tau {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| sim > *b) {
                best = Some((rec, sim));
            }
        }
        Ok(best.map(|(r, s)| Recalled {
            record: r.clone(),
            similarity: s,
        }))
    }

    pub fn persist(&self, path: impl AsRef<Path>) -> Result<u64> {
        let mut body = Vec::new();
        for rec in self.records.values() {
            serde_json::to_writer(&mut body, rec)?;
            body.write_all(b"\n")?;
        }
        let header = CollectionHeader {
            name: "decisions".into(),
            dimension: self.dimension,
            metric: Metric::Cosine,
            count: self.records.len(),
            checksum: checksum(&body),
        };
        let bytes = encode(&header, &body)?;
        write_atomic(path.as_ref(), &bytes)?;
        Ok(bytes.len() as u64)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let bytes = fs::read(path)?;
        let (header, body): (CollectionHeader, _) = decode(&bytes)?;
        if checksum(body) != header.checksum {
            return Err(Error::CorruptFile("checksum mismatch".into()));
        }
        let mut log = DecisionLog::new(header.dimension)?;
        for (n, line) in body.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: DecisionRecord<T> = serde_json::from_str(&line)
                .map_err(|e| Error::CorruptFile(format!("line {}: {e}", n + 2)))?;
            if log.records.contains_key(&rec.id) {
                return Err(Error::DuplicateId(rec.id));
            }
            log.record_decision(rec)?;
        }
        if log.len() != header.count {
            return Err(Error::CorruptFile(format!(
                "header declares {} records, body holds {}",
                header.count,
                log.len()
            )));
        }
        Ok(log)
    }
}
