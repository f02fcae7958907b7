//! Single-file persistence: one JSON header line followed by the
//! line-delimited instance format. The header checksum is the SHA-256 of
//! everything after the header line.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Collection, Metric};
use crate::error::{Error, Result};
use crate::model::{read_instances_jsonl, write_instances_jsonl};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionHeader {
    pub name: String,
    pub dimension: usize,
    pub metric: Metric,
    pub count: usize,
    pub checksum: String,
}

pub(crate) fn checksum(body: &[u8]) -> String {
    hex::encode(Sha256::digest(body))
}

/// Serializes a header and body into the on-disk layout.
pub(crate) fn encode<H: Serialize>(header: &H, body: &[u8]) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec(header)?;
    out.push(b'\n');
    out.extend_from_slice(body);
    Ok(out)
}

/// Splits a file into its parsed header and raw body.
pub(crate) fn decode<'a, H: for<'de> Deserialize<'de>>(bytes: &'a [u8]) -> Result<(H, &'a [u8])> {
    let split = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::CorruptFile("missing header line".into()))?;
    let header = serde_json::from_slice(&bytes[..split])
        .map_err(|e| Error::CorruptFile(format!("bad header: {e}")))?;
    Ok((header, &bytes[split + 1..]))
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes the collection to `path`; returns the number of bytes written.
pub fn persist<T: Scalar>(collection: &Collection<T>, path: impl AsRef<Path>) -> Result<u64> {
    let mut body = Vec::new();
    write_instances_jsonl(&mut body, collection.iter())?;
    let header = CollectionHeader {
        name: collection.name().to_owned(),
        dimension: collection.dimension(),
        metric: collection.metric(),
        count: collection.len(),
        checksum: checksum(&body),
    };
    let bytes = encode(&header, &body)?;
    write_atomic(path.as_ref(), &bytes)?;
    Ok(bytes.len() as u64)
}

pub fn load<T: Scalar>(path: impl AsRef<Path>) -> Result<Collection<T>> {
    let bytes = fs::read(path)?;
    let (header, body): (CollectionHeader, _) = decode(&bytes)?;
    if checksum(body) != header.checksum {
        return Err(Error::CorruptFile("checksum mismatch".into()));
    }
    let instances = read_instances_jsonl(body)?;
    if instances.len() != header.count {
        return Err(Error::CorruptFile(format!(
            "header declares {} instances, body holds {}",
            header.count,
            instances.len()
        )));
    }
    let mut collection = Collection::new(header.name, header.dimension, header.metric)?;
    for inst in instances {
        if collection.contains(&inst.id) {
            return Err(Error::DuplicateId(inst.id));
        }
        collection.upsert(inst)?;
    }
    Ok(collection)
}
