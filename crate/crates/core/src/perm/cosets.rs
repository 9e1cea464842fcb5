//! Action on right cosets `Hg`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{PermGroup, Permutation};
use crate::error::{Budget, Error, Result};

/// Image of `G` acting on the right cosets of `H`; coset `i` is `H * transversal[i]`.
#[derive(Clone, Debug)]
pub struct CosetAction {
    pub image: PermGroup,
    pub transversal: Vec<Permutation>,
}

/// Canonical representative of `Hx`, read off the chain of `H` whose base is `G`'s base.
struct CosetKey<'a> {
    sub: &'a PermGroup,
    base: Vec<usize>,
}

impl CosetKey<'_> {
    /// Returns the key (base images of the representative) and the representative.
    fn canonical(&self, x: &Permutation) -> (Vec<u32>, Permutation) {
        let mut x = x.clone();
        for i in 0..self.sub.base_len() {
            let best = self
                .sub
                .basic_orbit(i)
                .min_by_key(|&y| x.apply(y))
                .expect("basic orbits are nonempty");
            if best != self.base[i] {
                let u = self.sub.transversal_element(i, best).unwrap();
                x = &u * &x;
            }
        }
        let key = self.base.iter().map(|&b| x.apply(b) as u32).collect();
        (key, x)
    }
}

/// Permutation image of `G` on the right cosets of `H ≤ G`; point 0 is `H`.
pub fn coset_action(group: &PermGroup, sub: &PermGroup, budget: Budget) -> Result<CosetAction> {
    if !sub.is_subgroup_of(group)? {
        return Err(Error::NotSubgroup("coset action needs H ≤ G".into()));
    }
    let (index, rem) = group.order().div_rem(&sub.order());
    debug_assert_eq!(rem, BigUint::from(0u32));
    let index = index.to_u64().unwrap_or(u64::MAX);
    budget.ensure(index, format!("{index} cosets"))?;

    let base = group.base();
    let chain = sub.with_base_prefix(&base)?;
    debug_assert_eq!(chain.base(), base[..chain.base_len()].to_vec());
    let keyer = CosetKey { sub: &chain, base };
    let n = group.degree();
    let gens: Vec<&Permutation> = group.generators().iter().collect();
    let mut keys: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut reps: Vec<Permutation> = Vec::new();
    let (k0, r0) = keyer.canonical(&Permutation::identity(n));
    keys.insert(k0, 0);
    reps.push(r0);
    let mut images: Vec<Vec<usize>> = vec![Vec::with_capacity(index as usize); gens.len()];
    let mut i = 0;
    while i < reps.len() {
        for (gi, g) in gens.iter().enumerate() {
            let (key, rep) = keyer.canonical(&(&reps[i] * g));
            let next = keys.len() as u32;
            let j = *keys.entry(key).or_insert_with(|| {
                reps.push(rep);
                next
            });
            images[gi].push(j as usize);
        }
        i += 1;
    }
    if reps.len() as u64 != index {
        return Err(Error::InvalidArgument(format!(
            "coset enumeration found {} cosets, expected {index}",
            reps.len()
        )));
    }
    let perms = images
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>>>()?;
    Ok(CosetAction {
        image: PermGroup::new(perms)?,
        transversal: reps,
    })
}
