use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;

/// Memo table with as-if-computed-once semantics: concurrent requests for one
/// key block on a single computation and all observe its value.
pub struct Memo<K, V> {
    map: Mutex<HashMap<K, Arc<OnceLock<Result<V>>>>>,
}

impl<K, V> Default for Memo<K, V> {
    fn default() -> Self {
        Memo {
            map: Mutex::new(HashMap::new()),
        }
    }
}

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or(&self, key: &K, compute: impl FnOnce() -> Result<V>) -> Result<V> {
        let cell = {
            let mut map = self.map.lock().expect("memo lock");
            map.entry(key.clone()).or_default().clone()
        };
        cell.get_or_init(compute).clone()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn computes_once_under_contention() {
        let memo: Arc<Memo<u32, u64>> = Arc::new(Memo::new());
        let calls = Arc::new(AtomicUsize::new(0));
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let memo = memo.clone();
                let calls = calls.clone();
                std::thread::spawn(move || {
                    memo.get_or(&7, || {
                        calls.fetch_add(1, Ordering::SeqCst);
                        std::thread::sleep(std::time::Duration::from_millis(20));
                        Ok(49)
                    })
                    .unwrap()
                })
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), 49);
        }
        assert_eq!(calls.load(Ordering::SeqCst), 1);
    }
}
