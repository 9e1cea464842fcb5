use super::{PermGroup, Permutation};
use crate::error::{Error, Result};

impl PermGroup {
    /// True iff `sub` is normal in `self`. Errors when `sub` is not a subgroup.
    pub fn is_normal(&self, sub: &PermGroup) -> Result<bool> {
        if !sub.is_subgroup_of(self)? {
            return Err(Error::NotSubgroup(
                "normality test on a non-subgroup".into(),
            ));
        }
        for h in sub.generators() {
            for g in self.generators() {
                if !sub.contains_unchecked(&h.conjugate_by(g)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Smallest normal subgroup of `self` containing `gens`.
    pub fn normal_closure(&self, gens: &[Permutation]) -> Result<PermGroup> {
        let mut current: Vec<Permutation> =
            gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if current.is_empty() {
            return Ok(PermGroup::trivial(self.degree()));
        }
        let mut group = PermGroup::new(current.clone())?;
        loop {
            let mut grew = false;
            let snapshot = current.clone();
            for h in &snapshot {
                for g in self.generators() {
                    let c = h.conjugate_by(g);
                    if !group.contains_unchecked(&c) {
                        current.push(c);
                        group = PermGroup::new(current.clone())?;
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ok(group);
            }
        }
    }

    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        let gens = self.generators();
        let mut comms = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                comms.push(a.commutator(b));
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_perfect(&self) -> Result<bool> {
        Ok(self.derived_subgroup()?.order() == self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn normality() {
        let s4 = PermGroup::symmetric(4);
        assert!(s4.is_normal(&PermGroup::alternating(4)).unwrap());
        let s3 = PermGroup::symmetric(3);
        let t = PermGroup::new(vec![p(3, "(0 1)")]).unwrap();
        assert!(!s3.is_normal(&t).unwrap());
        let a3 = PermGroup::alternating(3);
        assert!(matches!(a3.is_normal(&t), Err(Error::NotSubgroup(_))));
    }

    #[test]
    fn derived_subgroups() {
        assert_eq!(
            PermGroup::symmetric(4)
                .derived_subgroup()
                .unwrap()
                .order_u64(),
            Some(12)
        );
        assert!(PermGroup::alternating(5).is_perfect().unwrap());
        assert!(!PermGroup::alternating(4).is_perfect().unwrap());
        let s4 = PermGroup::symmetric(4);
        let v4 = s4.normal_closure(&[p(4, "(0 1)(2 3)")]).unwrap();
        assert_eq!(v4.order_u64(), Some(4));
    }
}
