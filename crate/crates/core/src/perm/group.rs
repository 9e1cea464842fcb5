use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use rand::Rng;

use super::Permutation;
use crate::error::{Budget, Error, Result};

/// One level of a stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    /// Indices into the strong generating set; every one fixes the earlier base points.
    gen_ids: Vec<usize>,
    orbit: Vec<u32>,
    position: HashMap<u32, u32>,
    /// `u⁻¹` for the transversal element `u` carrying the base point to `orbit[i]`.
    inv_transversal: Vec<Permutation>,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Self {
        let mut position = HashMap::new();
        position.insert(base_point as u32, 0);
        Level {
            base_point,
            gen_ids: Vec::new(),
            orbit: vec![base_point as u32],
            position,
            inv_transversal: vec![Permutation::identity(degree)],
        }
    }
}

/// A permutation group held as a base and strong generating set.
///
/// Immutable once built: base changes produce a new value.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    strong: Vec<Permutation>,
    strong_inv: Vec<Permutation>,
    levels: Vec<Level>,
}

/// Deterministic Schreier–Sims state.
struct Builder {
    degree: usize,
    strong: Vec<Permutation>,
    strong_inv: Vec<Permutation>,
    levels: Vec<Level>,
    tested: Vec<Vec<u32>>,
    cursor: Vec<usize>,
}

impl Builder {
    fn new(degree: usize, prefix: &[usize]) -> Self {
        Builder {
            degree,
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: prefix.iter().map(|&b| Level::new(b, degree)).collect(),
            tested: prefix.iter().map(|_| vec![0]).collect(),
            cursor: vec![0; prefix.len()],
        }
    }

    fn push_level(&mut self, base_point: usize) {
        self.levels.push(Level::new(base_point, self.degree));
        self.tested.push(vec![0]);
        self.cursor.push(0);
    }

    /// Adds `h` to every level whose stabilizer contains it; returns the deepest such level.
    fn add_strong(&mut self, h: Permutation) -> usize {
        let j = match self.levels.iter().position(|l| !h.fixes(l.base_point)) {
            Some(j) => j,
            None => {
                let b = h
                    .smallest_moved_point()
                    .expect("identity is never added as a strong generator");
                self.push_level(b);
                self.levels.len() - 1
            }
        };
        let id = self.strong.len();
        self.strong_inv.push(h.inverse());
        self.strong.push(h);
        for l in 0..=j {
            self.levels[l].gen_ids.push(id);
            self.extend_orbit(l, id);
            self.cursor[l] = 0;
        }
        j
    }

    fn try_add(&mut self, l: usize, idx: usize, gid: usize) {
        let level = &mut self.levels[l];
        let delta = level.orbit[idx];
        let gamma = self.strong[gid].images()[delta as usize];
        if level.position.contains_key(&gamma) {
            return;
        }
        let inv = &self.strong_inv[gid] * &level.inv_transversal[idx];
        level.position.insert(gamma, level.orbit.len() as u32);
        level.orbit.push(gamma);
        level.inv_transversal.push(inv);
        self.tested[l].push(0);
    }

    fn extend_orbit(&mut self, l: usize, new_id: usize) {
        let old_len = self.levels[l].orbit.len();
        for idx in 0..old_len {
            self.try_add(l, idx, new_id);
        }
        let mut idx = old_len;
        while idx < self.levels[l].orbit.len() {
            let gens = self.levels[l].gen_ids.clone();
            for gid in gens {
                self.try_add(l, idx, gid);
            }
            idx += 1;
        }
    }

    fn next_untested(&mut self, l: usize) -> Option<(usize, usize)> {
        let ngen = self.levels[l].gen_ids.len() as u32;
        while self.cursor[l] < self.levels[l].orbit.len() {
            let idx = self.cursor[l];
            let done = self.tested[l][idx];
            if done < ngen {
                self.tested[l][idx] += 1;
                return Some((idx, self.levels[l].gen_ids[done as usize]));
            }
            self.cursor[l] += 1;
        }
        None
    }

    fn run(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let l = i as usize;
            let Some((idx, gid)) = self.next_untested(l) else {
                i -= 1;
                continue;
            };
            let level = &self.levels[l];
            let delta = level.orbit[idx] as usize;
            let gamma = self.strong[gid].apply(delta) as u32;
            let gpos = level.position[&gamma] as usize;
            let u = level.inv_transversal[idx].inverse();
            let schreier = &(&u * &self.strong[gid]) * &level.inv_transversal[gpos];
            let (residue, _) = sift_levels(&self.levels, schreier, l + 1);
            if !residue.is_identity() {
                i = self.add_strong(residue) as isize;
            }
        }
    }
}

fn sift_levels(levels: &[Level], mut g: Permutation, from: usize) -> (Permutation, usize) {
    let mut buf = Permutation::identity(0);
    for (l, level) in levels.iter().enumerate().skip(from) {
        let delta = g.images()[level.base_point];
        match level.position.get(&delta) {
            None => return (g, l),
            Some(&i) => {
                g.compose_into(&level.inv_transversal[i as usize], &mut buf);
                std::mem::swap(&mut g, &mut buf);
            }
        }
    }
    (g, levels.len())
}

impl PermGroup {
    /// Builds the group generated by `generators` with a deterministic Schreier–Sims.
    pub fn new(generators: Vec<Permutation>) -> Result<Self> {
        Self::with_prefix(generators, &[])
    }

    /// Builds with the given points leading the base.
    pub fn with_prefix(generators: Vec<Permutation>, prefix: &[usize]) -> Result<Self> {
        let degree = generators.first().ok_or(Error::NoGenerators)?.degree();
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let mut seen = std::collections::HashSet::new();
        for &p in prefix {
            if p >= degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            if !seen.insert(p) {
                return Err(Error::InvalidArgument(format!("base point {p} repeated")));
            }
        }
        let mut builder = Builder::new(degree, prefix);
        let mut added = std::collections::HashSet::new();
        for g in &generators {
            if !g.is_identity() && added.insert(g.clone()) {
                builder.add_strong(g.clone());
            }
        }
        builder.run();
        Ok(PermGroup {
            degree,
            generators,
            strong: builder.strong,
            strong_inv: builder.strong_inv,
            levels: builder.levels,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: vec![Permutation::identity(degree)],
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[vec![0, 1]]).unwrap());
        }
        if n >= 3 {
            gens.push(Permutation::from_cycles(n, &[(0..n).collect()]).unwrap());
        }
        if gens.is_empty() {
            return PermGroup::trivial(n);
        }
        PermGroup::new(gens).unwrap()
    }

    pub fn alternating(n: usize) -> Self {
        if n < 3 {
            return PermGroup::trivial(n);
        }
        let gens = (2..n)
            .map(|k| Permutation::from_cycles(n, &[vec![0, 1, k]]).unwrap())
            .collect();
        PermGroup::new(gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn base_len(&self) -> usize {
        self.levels.len()
    }

    /// Strong generators stored at chain level `i`; all of them fix the base points before `i`.
    pub fn level_generators(&self, i: usize) -> impl Iterator<Item = &Permutation> {
        self.levels[i].gen_ids.iter().map(|&g| &self.strong[g])
    }

    pub fn basic_orbit(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.levels[i].orbit.iter().map(|&x| x as usize)
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.levels
            .iter()
            .try_fold(1u64, |acc, l| acc.checked_mul(l.orbit.len() as u64))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    /// Element of level `i`'s transversal mapping the base point to `point`.
    pub fn transversal_element(&self, i: usize, point: usize) -> Option<Permutation> {
        let level = &self.levels[i];
        level
            .position
            .get(&(point as u32))
            .map(|&p| level.inv_transversal[p as usize].inverse())
    }

    /// Sifts `g` through the chain; returns the residue and the level where sifting stopped.
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        sift_levels(&self.levels, g.clone(), 0)
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            });
        }
        Ok(self.contains_unchecked(g))
    }

    pub(crate) fn contains_unchecked(&self, g: &Permutation) -> bool {
        let (residue, level) = self.sift(g);
        level == self.levels.len() && residue.is_identity()
    }

    /// True when every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same group with `prefix` leading the base; rebuilt unless the base already starts so.
    pub fn with_base_prefix(&self, prefix: &[usize]) -> Result<PermGroup> {
        let base = self.base();
        if base.len() >= prefix.len() && base[..prefix.len()] == *prefix {
            return Ok(self.clone());
        }
        let rebuilt = PermGroup::with_prefix(self.generators.clone(), prefix)?;
        debug_assert_eq!(rebuilt.order(), self.order());
        Ok(rebuilt)
    }

    /// The stabilizer of the first `k` base points, read off the chain.
    pub fn chain_suffix(&self, k: usize) -> PermGroup {
        let mut remap = HashMap::new();
        let mut strong = Vec::new();
        let mut strong_inv = Vec::new();
        let mut levels: Vec<Level> = self.levels[k.min(self.levels.len())..].to_vec();
        for level in &mut levels {
            for gid in &mut level.gen_ids {
                let new_id = *remap.entry(*gid).or_insert_with(|| {
                    strong.push(self.strong[*gid].clone());
                    strong_inv.push(self.strong_inv[*gid].clone());
                    strong.len() - 1
                });
                *gid = new_id;
            }
        }
        let generators = if strong.is_empty() {
            vec![Permutation::identity(self.degree)]
        } else {
            strong.clone()
        };
        PermGroup {
            degree: self.degree,
            generators,
            strong,
            strong_inv,
            levels,
        }
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        orbit_under(&self.generators, point, self.degree)
    }

    /// Orbits in order of their smallest point; each orbit is listed in BFS order.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if seen[p] {
                continue;
            }
            let orb = self.orbit(p);
            for &x in &orb {
                seen[x] = true;
            }
            out.push(orb);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    pub fn stabilizer(&self, point: usize) -> Result<PermGroup> {
        self.pointwise_stabilizer(&[point])
    }

    /// Pointwise stabilizer, by a base change putting `points` first.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        let mut prefix = Vec::new();
        for &p in points {
            if p >= self.degree {
                return Err(Error::PointOutOfRange {
                    point: p,
                    degree: self.degree,
                });
            }
            if !prefix.contains(&p) {
                prefix.push(p);
            }
        }
        if prefix.is_empty() {
            return Ok(self.clone());
        }
        Ok(self.with_base_prefix(&prefix)?.chain_suffix(prefix.len()))
    }

    /// Stabilizer of `{alpha, beta}` as a set.
    pub fn setwise_pair_stabilizer(&self, alpha: usize, beta: usize) -> Result<PermGroup> {
        if alpha == beta {
            return Err(Error::InvalidArgument(
                "setwise pair stabilizer needs two distinct points".into(),
            ));
        }
        let chain = self.with_base_prefix(&[alpha, beta])?;
        let pointwise = chain.chain_suffix(2);
        let Some(u) = chain.transversal_element(0, beta) else {
            return Ok(pointwise);
        };
        let gamma = u.inverse().apply(alpha);
        match chain.transversal_element(1, gamma) {
            None => Ok(pointwise),
            Some(h) => {
                let swap = &h * &u;
                debug_assert!(swap.apply(alpha) == beta && swap.apply(beta) == alpha);
                let mut gens: Vec<Permutation> = pointwise
                    .generators
                    .iter()
                    .filter(|g| !g.is_identity())
                    .cloned()
                    .collect();
                gens.push(swap);
                PermGroup::new(gens)
            }
        }
    }

    /// Uniformly random element: a product of random transversal elements.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let i = rng.gen_range(0..level.orbit.len());
            g = &g * &level.inv_transversal[i].inverse();
        }
        g
    }

    /// Calls `f` on every element; stops early when `f` returns `false`.
    pub fn for_each_element<F>(&self, budget: Budget, mut f: F) -> Result<()>
    where
        F: FnMut(&Permutation) -> bool,
    {
        let order = self.order_u64().unwrap_or(u64::MAX);
        budget.ensure(order, format!("enumerating {order} group elements"))?;
        let transversals: Vec<Vec<Permutation>> = self
            .levels
            .iter()
            .map(|l| l.inv_transversal.iter().map(|u| u.inverse()).collect())
            .collect();
        let depth = transversals.len();
        // element = u_{L-1} ... u_1 u_0
        fn rec<F: FnMut(&Permutation) -> bool>(
            transversals: &[Vec<Permutation>],
            level: usize,
            acc: &Permutation,
            f: &mut F,
        ) -> bool {
            if level == 0 {
                return f(acc);
            }
            for u in &transversals[level - 1] {
                if !rec(transversals, level - 1, &(acc * u), f) {
                    return false;
                }
            }
            true
        }
        rec(
            &transversals,
            depth,
            &Permutation::identity(self.degree),
            &mut f,
        );
        Ok(())
    }

    pub fn elements(&self, budget: Budget) -> Result<Vec<Permutation>> {
        let mut out = Vec::new();
        self.for_each_element(budget, |g| {
            out.push(g.clone());
            true
        })?;
        Ok(out)
    }
}

pub(crate) fn orbit_under(gens: &[Permutation], point: usize, degree: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    let mut out = vec![point];
    seen[point] = true;
    let mut queue = VecDeque::from([point]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    fn brute_closure(gens: &[Permutation]) -> std::collections::HashSet<Permutation> {
        let n = gens[0].degree();
        let mut set = std::collections::HashSet::from([Permutation::identity(n)]);
        let mut queue = vec![Permutation::identity(n)];
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = &x * g;
                if set.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn classic_orders() {
        assert_eq!(PermGroup::alternating(5).order_u64(), Some(60));
        assert_eq!(PermGroup::symmetric(6).order_u64(), Some(720));
        assert_eq!(PermGroup::symmetric(10).order_u64(), Some(3_628_800));
        assert_eq!(PermGroup::trivial(4).order_u64(), Some(1));
        let id = PermGroup::new(vec![Permutation::identity(5)]).unwrap();
        assert_eq!(id.order_u64(), Some(1));
    }

    #[test]
    fn membership_by_parity() {
        let a4 = PermGroup::alternating(4);
        let s4 = PermGroup::symmetric(4);
        assert!(!a4.contains(&p(4, "(0 1)")).unwrap());
        assert!(s4.contains(&p(4, "(0 1)")).unwrap());
        assert!(a4.contains(&p(4, "(0 1)(2 3)")).unwrap());
        assert!(s4.contains(&Permutation::identity(5)).is_err());
    }

    #[test]
    fn chain_invariants_hold() {
        let g = PermGroup::new(vec![p(7, "(0 1 2 3 4 5 6)"), p(7, "(1 2 4)(3 6 5)")]).unwrap();
        assert_eq!(g.order_u64(), Some(21));
        let base = g.base();
        for i in 0..g.base_len() {
            for s in g.level_generators(i) {
                for &b in &base[..i] {
                    assert!(s.fixes(b));
                }
            }
        }
        for s in g.generators() {
            assert!(g.contains(s).unwrap());
        }
    }

    #[test]
    fn orbits_and_transitivity() {
        let c3 = PermGroup::new(vec![p(3, "(0 1 2)")]).unwrap();
        let mut o = c3.orbit(0);
        o.sort();
        assert_eq!(o, vec![0, 1, 2]);
        let a5 = PermGroup::alternating(5);
        assert_eq!(a5.orbit(3).len(), 5);
        let v = PermGroup::new(vec![p(4, "(0 1)(2 3)")]).unwrap();
        let orbs: Vec<Vec<usize>> = v
            .orbits()
            .into_iter()
            .map(|mut o| {
                o.sort();
                o
            })
            .collect();
        assert_eq!(orbs, vec![vec![0, 1], vec![2, 3]]);
        assert!(!v.is_transitive());
    }

    #[test]
    fn stabilizers() {
        let s4 = PermGroup::symmetric(4);
        assert_eq!(s4.stabilizer(0).unwrap().order_u64(), Some(6));
        assert_eq!(
            s4.pointwise_stabilizer(&[0, 1]).unwrap().order_u64(),
            Some(2)
        );
        assert_eq!(s4.pointwise_stabilizer(&[]).unwrap().order_u64(), Some(24));
        // dihedral of order 2p on p points
        let d7 = PermGroup::new(vec![p(7, "(0 1 2 3 4 5 6)"), p(7, "(1 6)(2 5)(3 4)")]).unwrap();
        assert_eq!(d7.order_u64(), Some(14));
        assert_eq!(d7.stabilizer(0).unwrap().order_u64(), Some(2));
        let c5 = PermGroup::new(vec![p(5, "(0 1 2 3 4)")]).unwrap();
        assert!(c5.stabilizer(3).unwrap().is_trivial());
        let st = s4.stabilizer(2).unwrap();
        for g in st.generators() {
            assert!(g.fixes(2));
        }
    }

    #[test]
    fn setwise_pairs() {
        // AGL(1,5): x -> x+1, x -> 2x
        let agl = PermGroup::new(vec![p(5, "(0 1 2 3 4)"), p(5, "(1 2 4 3)")]).unwrap();
        assert_eq!(agl.order_u64(), Some(20));
        assert!(agl.pointwise_stabilizer(&[0, 1]).unwrap().is_trivial());
        assert_eq!(
            agl.setwise_pair_stabilizer(0, 1).unwrap().order_u64(),
            Some(2)
        );
        let c7 = PermGroup::new(vec![p(7, "(0 1 2 3 4 5 6)")]).unwrap();
        assert!(c7.setwise_pair_stabilizer(0, 1).unwrap().is_trivial());
        let s4 = PermGroup::symmetric(4);
        assert_eq!(
            s4.setwise_pair_stabilizer(0, 1).unwrap().order_u64(),
            Some(4)
        );
        assert!(s4.setwise_pair_stabilizer(1, 1).is_err());
    }

    #[test]
    fn setwise_pairs_match_brute_force() {
        let g = PermGroup::new(vec![p(6, "(0 1 2 3 4 5)"), p(6, "(0 2)(3 5)")]).unwrap();
        let all = brute_closure(g.generators());
        for a in 0..6 {
            for b in 0..6 {
                if a == b {
                    continue;
                }
                let expect = all
                    .iter()
                    .filter(|x| {
                        let (ia, ib) = (x.apply(a), x.apply(b));
                        (ia == a && ib == b) || (ia == b && ib == a)
                    })
                    .count();
                let got = g
                    .setwise_pair_stabilizer(a, b)
                    .unwrap()
                    .order_u64()
                    .unwrap();
                assert_eq!(got as usize, expect, "pair {a},{b}");
            }
        }
    }

    #[test]
    fn elements_and_random_elements_are_members() {
        let g = PermGroup::new(vec![p(6, "(0 1 2)(3 4)"), p(6, "(0 5)")]).unwrap();
        let elts = g.elements(Budget::DEFAULT).unwrap();
        assert_eq!(elts.len() as u64, g.order_u64().unwrap());
        let set: std::collections::HashSet<_> = elts.iter().cloned().collect();
        assert_eq!(set.len(), elts.len());
        assert_eq!(set, brute_closure(g.generators()));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            assert!(set.contains(&g.random_element(&mut rng)));
        }
        assert!(matches!(
            PermGroup::symmetric(12).elements(Budget(1000)),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn base_change_keeps_order() {
        let g = PermGroup::alternating(7);
        let h = g.with_base_prefix(&[5, 2, 6]).unwrap();
        assert_eq!(h.base()[..3], [5, 2, 6]);
        assert_eq!(h.order(), g.order());
        assert!(g.with_base_prefix(&[1, 1]).is_err());
    }
}
