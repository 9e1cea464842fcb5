//! Randomized search for a subgroup isomorphic to Alt(5).

use num_bigint::BigUint;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{PermGroup, Permutation};
use crate::error::{Error, Result};

pub const DEFAULT_RETRIES: usize = 2000;

/// A located copy of Alt(5) with its (2,3,5) generating pair.
#[derive(Clone, Debug)]
pub struct Alt5Copy {
    pub a: Permutation,
    pub b: Permutation,
    pub group: PermGroup,
}

/// Random element of order exactly `k` (prime), by powering random elements.
fn random_of_prime_order(
    group: &PermGroup,
    k: u64,
    rng: &mut ChaCha8Rng,
    tries: usize,
) -> Option<Permutation> {
    for _ in 0..tries {
        let g = group.random_element(rng);
        let o = g.order();
        if o.is_multiple_of(&BigUint::from(k)) {
            let e = o / k;
            let e = i64::try_from(e).ok()?;
            return Some(g.pow(e));
        }
    }
    None
}

/// Finds `a, b` with `|a| = 2`, `|b| = 3`, `|ab| = 5` and `|⟨a, b⟩| = 60`.
///
/// Such a pair generates a quotient of the (2,3,5) triangle group of order
/// 60, which is Alt(5). Deterministic for a given seed. Failure does not
/// prove that no such subgroup exists.
pub fn find_alt5_subgroup(group: &PermGroup, seed: u64, retries: usize) -> Result<Alt5Copy> {
    if !group.order().is_multiple_of(&BigUint::from(60u32)) {
        return Err(Error::NotFound(format!(
            "60 does not divide the group order {}",
            group.order()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let not_found = || Error::NotFound(format!("no Alt(5) pair after {retries} attempts"));
    let a = random_of_prime_order(group, 2, &mut rng, retries).ok_or_else(not_found)?;
    let b0 = random_of_prime_order(group, 3, &mut rng, retries).ok_or_else(not_found)?;
    for _ in 0..retries {
        let c = group.random_element(&mut rng);
        let b = b0.conjugate_by(&c);
        if (&a * &b).order_u64() != Some(5) {
            continue;
        }
        let sub = PermGroup::new(vec![a.clone(), b.clone()])?;
        if sub.order_u64() == Some(60) {
            return Ok(Alt5Copy { a, b, group: sub });
        }
    }
    Err(not_found())
}
