use std::sync::{Arc, RwLock};

use super::Collection;
use crate::error::Result;
use crate::model::Instance;
use crate::scalar::Scalar;

/// A collection shared between readers and a writer.
///
/// Readers take an immutable snapshot; writers copy-on-write, so a snapshot
/// held by a long computation never observes a partial update.
#[derive(Debug)]
pub struct SharedCollection<T> {
    inner: RwLock<Arc<Collection<T>>>,
}

impl<T: Scalar> SharedCollection<T> {
    pub fn new(collection: Collection<T>) -> Self {
        SharedCollection {
            inner: RwLock::new(Arc::new(collection)),
        }
    }

    pub fn snapshot(&self) -> Arc<Collection<T>> {
        Arc::clone(&self.inner.read().unwrap_or_else(|e| e.into_inner()))
    }

    /// Applies `f` to a private copy and publishes it only if `f` succeeds.
    pub fn update<R>(&self, f: impl FnOnce(&mut Collection<T>) -> Result<R>) -> Result<R> {
        let mut guard = self.inner.write().unwrap_or_else(|e| e.into_inner());
        let mut next = Collection::clone(&guard);
        let out = f(&mut next)?;
        *guard = Arc::new(next);
        Ok(out)
    }

    pub fn upsert(&self, instance: Instance<T>) -> Result<usize> {
        self.update(|c| c.upsert(instance))
    }
}
