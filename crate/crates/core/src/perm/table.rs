//! Enumerated small groups with multiplication tables, and their automorphisms.

use std::collections::HashMap;

use super::{PermGroup, Permutation};
use crate::error::{Budget, Error, Result};

/// Largest group this module will tabulate (the table has `order²` entries).
pub const MAX_TABLE_ORDER: usize = 6000;

/// The elements of a small permutation group, sorted lexicographically by
/// image sequence (so the identity is element 0), with full multiplication
/// and inversion tables.
#[derive(Clone, Debug)]
pub struct ElementTable {
    group: PermGroup,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl ElementTable {
    pub fn new(group: &PermGroup) -> Result<Self> {
        let order = group.order_u64().unwrap_or(u64::MAX);
        Budget(MAX_TABLE_ORDER as u64)
            .ensure(order, format!("tabulating a group of order {order}"))?;
        let mut elements = group.elements(Budget::DEFAULT)?;
        elements.sort();
        let n = elements.len();
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();
        let mut mul = vec![0u32; n * n];
        let mut buf = Permutation::identity(group.degree());
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                a.compose_into(b, &mut buf);
                mul[i * n + j] = index[&buf];
            }
        }
        let inv = elements.iter().map(|g| index[&g.inverse()]).collect();
        Ok(ElementTable {
            group: group.clone(),
            elements,
            index,
            mul,
            inv,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn element(&self, i: u32) -> &Permutation {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, g: &Permutation) -> Option<u32> {
        self.index.get(g).copied()
    }

    /// `a * b`: apply `a`, then `b`.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `a⁻¹ b`
    #[inline]
    pub fn ldiv(&self, a: u32, b: u32) -> u32 {
        self.mul(self.inv(a), b)
    }

    /// Indices of the generators of the underlying group.
    pub fn generator_indices(&self) -> Vec<u32> {
        self.group
            .generators()
            .iter()
            .map(|g| self.index[g])
            .collect()
    }

    /// Order of the element `a`.
    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Indices of the elements commuting with all of `gens`.
    pub fn centralizer(&self, gens: &[u32]) -> Vec<u32> {
        (0..self.order() as u32)
            .filter(|&x| gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect()
    }

    /// Closure of `gens` under multiplication, as sorted indices.
    pub fn subgroup_closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }
}

/// An automorphism of a tabulated group, as the image of every element index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism(Vec<u32>);

impl Automorphism {
    pub fn identity(table: &ElementTable) -> Self {
        Automorphism((0..table.order() as u32).collect())
    }

    /// Conjugation `x ↦ t⁻¹ x t`.
    pub fn inner(table: &ElementTable, t: u32) -> Self {
        let ti = table.inv(t);
        Automorphism(
            (0..table.order() as u32)
                .map(|x| table.mul(table.mul(ti, x), t))
                .collect(),
        )
    }

    /// Conjugation by a permutation of the underlying domain that normalizes the group.
    pub fn from_normalizing(table: &ElementTable, pi: &Permutation) -> Result<Self> {
        let pinv = pi.inverse();
        let mut images = Vec::with_capacity(table.order());
        for g in table.elements() {
            let c = &(&pinv * g) * pi;
            match table.index_of(&c) {
                Some(i) => images.push(i),
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "{pi} does not normalize the group"
                    )))
                }
            }
        }
        Ok(Automorphism(images))
    }

    /// Checks bijectivity and the homomorphism property on all pairs.
    pub fn from_images(table: &ElementTable, images: Vec<u32>) -> Result<Self> {
        let n = table.order();
        let mut seen = vec![false; n];
        if images.len() != n
            || images
                .iter()
                .any(|&x| x as usize >= n || std::mem::replace(&mut seen[x as usize], true))
        {
            return Err(Error::InvalidArgument(
                "not a bijection of the group".into(),
            ));
        }
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if images[table.mul(a, b) as usize]
                    != table.mul(images[a as usize], images[b as usize])
                {
                    return Err(Error::InvalidArgument("not a homomorphism".into()));
                }
            }
        }
        Ok(Automorphism(images))
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Automorphism) -> Automorphism {
        Automorphism(self.0.iter().map(|&x| other.apply(x)).collect())
    }

    pub fn inverse(&self) -> Automorphism {
        let mut out = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Automorphism(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Returns `t` with `self = ι_t`, if the automorphism is inner.
    pub fn as_inner(&self, table: &ElementTable) -> Option<u32> {
        let gens = table.generator_indices();
        (0..table.order() as u32).find(|&t| {
            let ti = table.inv(t);
            gens.iter()
                .all(|&g| table.mul(table.mul(ti, g), t) == self.apply(g))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alt5_table() {
        let t = ElementTable::new(&PermGroup::alternating(5)).unwrap();
        assert_eq!(t.order(), 60);
        assert!(t.element(0).is_identity());
        for a in 0..60 {
            assert_eq!(t.mul(a, t.inv(a)), 0);
            assert_eq!(t.mul(0, a), a);
        }
        let orders: Vec<usize> = (0..60).map(|a| t.element_order(a)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 5).count(), 24);
        assert_eq!(t.centralizer(&t.generator_indices()), vec![0]);
    }

    #[test]
    fn inner_and_outer_automorphisms() {
        let t = ElementTable::new(&PermGroup::alternating(5)).unwrap();
        let tr = Permutation::parse_cycles(5, "(0 1)").unwrap();
        let outer = Automorphism::from_normalizing(&t, &tr).unwrap();
        assert!(outer.as_inner(&t).is_none());
        for x in [3u32, 17, 42] {
            let inner = Automorphism::inner(&t, x);
            assert_eq!(inner.as_inner(&t), Some(x));
            assert!(inner.then(&inner.inverse()).is_identity());
            let via_perm = Automorphism::from_normalizing(&t, t.element(x)).unwrap();
            assert_eq!(via_perm, inner);
        }
        let bad = Permutation::parse_cycles(6, "(0 5)").unwrap();
        let t6 = ElementTable::new(&PermGroup::alternating(5)).unwrap();
        assert!(t6.index_of(&bad).is_none());
    }

    #[test]
    fn rejects_non_normalizing() {
        let g = PermGroup::new(vec![Permutation::parse_cycles(4, "(0 1 2 3)").unwrap()]).unwrap();
        let t = ElementTable::new(&g).unwrap();
        let pi = Permutation::parse_cycles(4, "(0 1)").unwrap();
        assert!(Automorphism::from_normalizing(&t, &pi).is_err());
    }
}
