//! Memoization of strip solutions shared across threads.

use std::collections::HashMap;
use std::sync::{Mutex, RwLock};

use crate::minimal_surface::TurningPointSolution;
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionKey {
    pub geometry: String,
    pub width: u64,
    pub eps: u64,
    pub node_count: usize,
    pub rel_tol: u64,
}

impl SolutionKey {
    pub fn new(geometry_id: &str, width: f64, eps: f64, quad: &QuadratureSpec) -> Self {
        Self {
            geometry: geometry_id.to_owned(),
            width: width.to_bits(),
            eps: eps.to_bits(),
            node_count: quad.node_count,
            rel_tol: quad.rel_tol.to_bits(),
        }
    }
}

/// Thread-safe map from strip parameters to solved surfaces. Entries added
/// through [`SolutionCache::insert`] are also queued so that a caller can
/// persist them.
#[derive(Debug, Default)]
pub struct SolutionCache {
    map: RwLock<HashMap<SolutionKey, TurningPointSolution>>,
    fresh: Mutex<Vec<(SolutionKey, TurningPointSolution)>>,
}

impl SolutionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &SolutionKey) -> Option<TurningPointSolution> {
        self.map
            .read()
            .expect("cache lock poisoned")
            .get(key)
            .copied()
    }

    pub fn insert(&self, key: SolutionKey, value: TurningPointSolution) {
        let mut map = self.map.write().expect("cache lock poisoned");
        if map.insert(key.clone(), value).is_none() {
            self.fresh
                .lock()
                .expect("cache lock poisoned")
                .push((key, value));
        }
    }

    /// Inserts an entry that is already persisted.
    pub fn preload(&self, key: SolutionKey, value: TurningPointSolution) {
        self.map
            .write()
            .expect("cache lock poisoned")
            .insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drains the entries inserted since the last call, sorted by key.
    pub fn take_fresh(&self) -> Vec<(SolutionKey, TurningPointSolution)> {
        let mut fresh = std::mem::take(&mut *self.fresh.lock().expect("cache lock poisoned"));
        fresh.sort_by(|a, b| a.0.cmp(&b.0));
        fresh
    }

    pub fn get_or_try_insert<E>(
        &self,
        key: SolutionKey,
        compute: impl FnOnce() -> Result<TurningPointSolution, E>,
    ) -> Result<TurningPointSolution, E> {
        if let Some(hit) = self.get(&key) {
            return Ok(hit);
        }
        let value = compute()?;
        self.insert(key, value);
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimal_surface::Branch;

    fn solution(z: f64) -> TurningPointSolution {
        TurningPointSolution {
            z_star: z,
            width: 2.0 * z,
            area_reg: 1.0,
            cutoff: 0.01,
            branch: Branch::ConnectedU,
        }
    }

    #[test]
    fn fresh_entries_are_tracked_once() {
        let cache = SolutionCache::new();
        let q = QuadratureSpec::default();
        let k1 = SolutionKey::new("g", 1.0, 0.01, &q);
        let k2 = SolutionKey::new("g", 0.5, 0.01, &q);
        cache.insert(k1.clone(), solution(0.5));
        cache.insert(k1.clone(), solution(0.5));
        cache.preload(k2.clone(), solution(0.25));
        assert_eq!(cache.len(), 2);
        let fresh = cache.take_fresh();
        assert_eq!(fresh.len(), 1);
        assert_eq!(fresh[0].0, k1);
        assert!(cache.take_fresh().is_empty());
        let v: Result<_, ()> = cache.get_or_try_insert(k2, || panic!("must hit"));
        assert_eq!(v.unwrap().z_star, 0.25);
    }
}
