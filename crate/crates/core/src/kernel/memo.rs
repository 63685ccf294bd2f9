//! Caches of successful applications that still charge the original cost, so
//! results and fuel accounting are exactly those of recomputation.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Mutex;

use super::{Fuel, Halt};

const CAPACITY: usize = 1 << 20;

pub struct Memo<K, V> {
    table: Mutex<HashMap<K, (V, u64)>>,
}

impl<K: Hash + Eq, V: Clone> Memo<K, V> {
    pub fn new() -> Self {
        Memo {
            table: Mutex::new(HashMap::new()),
        }
    }

    /// Returns the cached value of `key`, charging its cost, or runs `compute`
    /// and caches it if it succeeds.
    pub fn get_or_run(
        &self,
        key: K,
        fuel: &mut Fuel,
        compute: impl FnOnce(&mut Fuel) -> Result<V, Halt>,
    ) -> Result<V, Halt> {
        let hit = self.table.lock().expect("memo lock").get(&key).cloned();
        if let Some((v, cost)) = hit {
            fuel.spend(cost)?;
            return Ok(v);
        }
        let before = fuel.remaining();
        let v = compute(fuel)?;
        let cost = before - fuel.remaining();
        let mut table = self.table.lock().expect("memo lock");
        if table.len() >= CAPACITY {
            table.clear();
        }
        table.insert(key, (v.clone(), cost));
        Ok(v)
    }
}

impl<K: Hash + Eq, V: Clone> Default for Memo<K, V> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hits_charge_the_original_cost() {
        let memo: Memo<u32, u32> = Memo::new();
        let mut f = Fuel::new(100);
        let v = memo.get_or_run(1, &mut f, |f| f.spend(30).map(|_| 7));
        assert_eq!((v, f.remaining()), (Ok(7), 70));
        let v = memo.get_or_run(1, &mut f, |_| unreachable!());
        assert_eq!((v, f.remaining()), (Ok(7), 40));
        let mut low = Fuel::new(10);
        assert_eq!(
            memo.get_or_run(1, &mut low, |_| unreachable!()),
            Err(Halt::FuelExhausted)
        );
    }

    #[test]
    fn failures_are_not_cached() {
        let memo: Memo<u32, u32> = Memo::new();
        assert!(memo
            .get_or_run(1, &mut Fuel::new(5), |f| f.spend(30).map(|_| 7))
            .is_err());
        assert_eq!(
            memo.get_or_run(1, &mut Fuel::new(50), |f| f.spend(30).map(|_| 7)),
            Ok(7)
        );
    }
}
