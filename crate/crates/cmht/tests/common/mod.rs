#![allow(dead_code)]

use cmht::db;
use cmht::ideal::Arith;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

/// Every bundled field, loaded once per test binary.
pub fn fields() -> &'static [Arith] {
    static F: OnceLock<Vec<Arith>> = OnceLock::new();
    F.get_or_init(|| db::names().iter().map(|n| Arith::new(db::load(n).unwrap()).unwrap()).collect())
}

pub fn field(name: &str) -> &'static Arith {
    fields().iter().find(|a| a.k.name == name).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
