//! Document-chunk corpus with hashed term-frequency embeddings, passage
//! retrieval, and reuse of previously validated answers.

use std::fs;
use std::hash::Hasher;
use std::path::Path;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

use crate::decision_log::{check_threshold, DecisionLog};
use crate::error::{Error, Result};
use crate::model::{DecisionRecord, Instance};
use crate::scalar::{cosine_similarity, Scalar};
use crate::store::{Collection, Metric};

pub const EMBED_DIM: usize = 256;
pub const MAX_CHUNK_TOKENS: usize = 200;
pub const DEFAULT_PASSAGES: usize = 5;

/// Lowercased alphanumeric tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// 64-bit FNV-1a of the token's UTF-8 bytes, reduced modulo `dimension`.
pub fn token_bucket(token: &str, dimension: usize) -> usize {
    let mut h = FnvHasher::default();
    h.write(token.as_bytes());
    (h.finish() % dimension as u64) as usize
}

/// Unit-length hashed term-frequency vector.
pub fn embed_text<T: Scalar>(text: &str, dimension: usize) -> Result<Vec<T>> {
    if dimension == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Err(Error::EmptyText);
    }
    let mut counts = vec![0usize; dimension];
    for t in &tokens {
        counts[token_bucket(t, dimension)] += 1;
    }
    let norm = T::of_usize(counts.iter().map(|c| c * c).sum::<usize>()).sqrt();
    Ok(counts.into_iter().map(|c| T::of_usize(c) / norm).collect())
}

/// Splits on blank lines, then cuts paragraphs longer than
/// [`MAX_CHUNK_TOKENS`] whitespace-separated words into consecutive pieces.
/// Chunks without any alphanumeric token are dropped.
pub fn chunk_text(text: &str) -> Vec<String> {
    let mut paragraphs = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                paragraphs.push(current.join("\n"));
                current.clear();
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        paragraphs.push(current.join("\n"));
    }
    let mut out = Vec::new();
    for p in paragraphs {
        let words: Vec<&str> = p.split_whitespace().collect();
        if words.len() <= MAX_CHUNK_TOKENS {
            out.push(p);
        } else {
            out.extend(words.chunks(MAX_CHUNK_TOKENS).map(|w| w.join(" ")));
        }
    }
    out.retain(|c| !tokenize(c).is_empty());
    out
}

/// Chunks and embeds `(stem, text)` documents into a cosine collection.
/// Chunk ids are `"<stem>#<index>"`; the text is kept in metadata.
pub fn build_corpus<T: Scalar>(name: &str, documents: &[(String, String)]) -> Result<Collection<T>> {
    let mut c = Collection::new(name, EMBED_DIM, Metric::Cosine)?;
    for (stem, text) in documents {
        for (i, chunk) in chunk_text(text).into_iter().enumerate() {
            let inst = Instance::new(format!("{stem}#{i}"), embed_text(&chunk, EMBED_DIM)?)
                .with_metadata("source", stem.clone())
                .with_metadata("text", chunk);
            c.upsert(inst)?;
        }
    }
    Ok(c)
}

/// Reads every `.txt` file in `dir` (sorted by file name) into a corpus.
pub fn load_corpus_dir<T: Scalar>(dir: &Path) -> Result<Collection<T>> {
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();
    let docs = paths
        .iter()
        .map(|p| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((stem, fs::read_to_string(p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    build_corpus("docs", &docs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Passage<T> {
    pub id: String,
    pub text: String,
    pub similarity: T,
}

/// Top-`k` chunks by cosine similarity to the query text, ordered as
/// nearest-neighbour search orders them.
pub fn influential_passages<T: Scalar>(corpus: &Collection<T>, query: &str, k: usize) -> Result<Vec<Passage<T>>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let q: Vec<T> = embed_text(query, corpus.dimension())?;
    let hits = corpus.knn_query(&q, k, None)?;
    Ok(hits
        .into_iter()
        .map(|h| {
            let inst = corpus.get(&h.id).expect("hit ids come from the corpus");
            Passage {
                similarity: cosine_similarity(&q, &inst.embedding).unwrap_or_else(T::zero),
                text: inst.metadata.get("text").cloned().unwrap_or_default(),
                id: h.id,
            }
        })
        .collect())
}

/// Where an answer came from. Neither variant carries a confidence or
/// correctness estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all_fields = "snake_case")]
#[serde(bound = "T: Scalar")]
pub enum Answer<T> {
    ValidatedLog {
        record_id: String,
        answer: String,
        justification: String,
        validator: String,
    },
    PassagesOnly {
        passages: Vec<Passage<T>>,
    },
}

/// Reuses a validated answer when the query matches one at `tau`,
/// otherwise returns the top passages.
pub fn answer_with_provenance<T: Scalar>(
    corpus: &Collection<T>,
    log: &DecisionLog<T>,
    query: &str,
    tau: f64,
) -> Result<Answer<T>> {
    check_threshold(tau)?;
    let q: Vec<T> = embed_text(query, log.dimension())?;
    if let Some(hit) = log.recall_decision(&q, tau)? {
        return Ok(Answer::ValidatedLog {
            record_id: hit.record.id,
            answer: hit.record.decision,
            justification: hit.record.justification,
            validator: hit.record.validator,
        });
    }
    Ok(Answer::PassagesOnly {
        passages: influential_passages(corpus, query, DEFAULT_PASSAGES)?,
    })
}

/// Stores a reviewed answer keyed by the embedding of its question.
pub fn record_validated_answer<T: Scalar>(
    log: &mut DecisionLog<T>,
    id: &str,
    question: &str,
    answer: &str,
    validator: &str,
) -> Result<usize> {
    log.record_decision(DecisionRecord {
        id: id.to_owned(),
        query_embedding: embed_text(question, log.dimension())?,
        decision: answer.to_owned(),
        justification: format!("reviewed answer to: {question}"),
        validator: validator.to_owned(),
        validated: true,
        timestamp: chrono::Utc::now(),
    })
}
