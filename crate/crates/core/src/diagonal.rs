//! Diagonal actions realized as explicit permutation groups.
//!
//! `Ω` is the set of right cosets of the diagonal `D` in `N = T^{ℓ+1}`. Each
//! coset has a unique representative `(1, x₁, …, x_ℓ)`, stored as the
//! mixed-radix index `Σ xᵢ·|T|^{i−1}` with `xᵢ` an index into the element
//! table of `T`. The point `α = D(1, …, 1)` is index 0.

use crate::error::{Error, Result};
use crate::perm::{Automorphism, ElementTable, PermGroup, Permutation};

/// Largest `|Ω|` built explicitly.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct DiagonalSpace {
    table: ElementTable,
    ell: usize,
    size: usize,
}

/// `x = σ φ m` with `σ ∈ Sym(ℓ+1)`, `φ ∈ Aut(T)` and `m ∈ M` (so `m₀ = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredElement {
    pub sigma: Permutation,
    pub phi: Automorphism,
    /// Element indices `(m₀, …, m_ℓ)` with `m₀` the identity.
    pub m: Vec<u32>,
}

impl DiagonalSpace {
    pub fn new(table: ElementTable, ell: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidArgument("need at least two factors".into()));
        }
        let size = (0..ell).try_fold(1usize, |acc, _| acc.checked_mul(table.order()));
        match size {
            Some(s) if s <= MAX_POINTS => Ok(DiagonalSpace {
                table,
                ell,
                size: s,
            }),
            _ => Err(Error::Infeasible {
                what: format!(
                    "explicit diagonal space |T|^{ell} with |T| = {}",
                    table.order()
                ),
                budget: MAX_POINTS as u64,
            }),
        }
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of simple factors, `ℓ + 1`.
    pub fn factors(&self) -> usize {
        self.ell + 1
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The diagonal point `D(1, …, 1)`.
    pub fn alpha(&self) -> usize {
        0
    }

    /// `(1, a₀⁻¹a₁, …, a₀⁻¹a_ℓ)`.
    pub fn normalize(&self, tuple: &[u32]) -> Vec<u32> {
        let a0 = tuple[0];
        tuple.iter().map(|&a| self.table.ldiv(a0, a)).collect()
    }

    /// Full normalized tuple `(1, x₁, …, x_ℓ)` of a point.
    pub fn decode(&self, point: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.ell + 1];
        self.decode_into(point, &mut out);
        out
    }

    fn decode_into(&self, mut point: usize, out: &mut [u32]) {
        let n = self.table.order();
        out[0] = 0;
        for x in out.iter_mut().skip(1) {
            *x = (point % n) as u32;
            point /= n;
        }
    }

    /// Index of the coset `D·tuple`; the tuple need not be normalized.
    pub fn encode(&self, tuple: &[u32]) -> usize {
        let n = self.table.order();
        let inv0 = self.table.inv(tuple[0]);
        tuple[1..]
            .iter()
            .rev()
            .fold(0usize, |acc, &x| acc * n + self.table.mul(inv0, x) as usize)
    }

    fn build(&self, mut f: impl FnMut(&[u32], &mut [u32])) -> Permutation {
        let mut src = vec![0u32; self.ell + 1];
        let mut dst = vec![0u32; self.ell + 1];
        let images = (0..self.size)
            .map(|p| {
                self.decode_into(p, &mut src);
                f(&src, &mut dst);
                self.encode(&dst)
            })
            .collect();
        Permutation::from_images(images).expect("coset action is a bijection")
    }

    /// `D(1, αᵢ)^{(t₀, …, t_ℓ)} = D(t₀, αᵢtᵢ)`.
    pub fn perm_of_socle(&self, t: &[u32]) -> Result<Permutation> {
        self.check_tuple(t)?;
        Ok(self.build(|x, y| {
            for i in 0..=self.ell {
                y[i] = self.table.mul(x[i], t[i]);
            }
        }))
    }

    /// Coordinatewise application of `φ`.
    pub fn perm_of_automorphism(&self, phi: &Automorphism) -> Permutation {
        self.build(|x, y| {
            for i in 0..=self.ell {
                y[i] = phi.apply(x[i]);
            }
        })
    }

    /// `ω^σ = D(x_{0^{σ⁻¹}}, …, x_{ℓ^{σ⁻¹}})`.
    pub fn perm_of_top(&self, sigma: &Permutation) -> Result<Permutation> {
        if sigma.degree() != self.ell + 1 {
            return Err(Error::DegreeMismatch {
                left: self.ell + 1,
                right: sigma.degree(),
            });
        }
        let sinv = sigma.inverse();
        Ok(self.build(|x, y| {
            for j in 0..=self.ell {
                y[j] = x[sinv.apply(j)];
            }
        }))
    }

    pub fn perm_of_factored(&self, x: &FactoredElement) -> Result<Permutation> {
        let s = self.perm_of_top(&x.sigma)?;
        let f = self.perm_of_automorphism(&x.phi);
        let m = self.perm_of_socle(&x.m)?;
        Ok(&(&s * &f) * &m)
    }

    fn check_tuple(&self, t: &[u32]) -> Result<()> {
        if t.len() != self.ell + 1 || t.iter().any(|&x| x as usize >= self.table.order()) {
            return Err(Error::InvalidArgument(format!(
                "expected {} element indices below {}",
                self.ell + 1,
                self.table.order()
            )));
        }
        Ok(())
    }

    /// The tuple with `t` in coordinate `i` and the identity elsewhere.
    pub fn unit_tuple(&self, i: usize, t: u32) -> Vec<u32> {
        let mut v = vec![0u32; self.ell + 1];
        v[i] = t;
        v
    }

    /// Generators of the simple factor `T_i`.
    pub fn factor_generators(&self, i: usize) -> Vec<Permutation> {
        self.table
            .generator_indices()
            .into_iter()
            .map(|t| self.perm_of_socle(&self.unit_tuple(i, t)).unwrap())
            .collect()
    }

    /// The socle `N = T^{ℓ+1}`.
    pub fn build_socle(&self) -> Result<PermGroup> {
        PermGroup::new(
            (0..=self.ell)
                .flat_map(|i| self.factor_generators(i))
                .collect(),
        )
    }

    /// `M = {(1, t₁, …, t_ℓ)}`, regular on `Ω`.
    pub fn build_m(&self) -> Result<PermGroup> {
        PermGroup::new(
            (1..=self.ell)
                .flat_map(|i| self.factor_generators(i))
                .collect(),
        )
    }

    /// Generators of `Sym(ℓ+1)` on coordinates: a transposition and a full cycle.
    pub fn top_generators(&self) -> Vec<Permutation> {
        let k = self.ell + 1;
        let mut out = vec![Permutation::from_cycles(k, &[vec![0, 1]]).unwrap()];
        if k > 2 {
            out.push(Permutation::from_cycles(k, &[(0..k).collect()]).unwrap());
        }
        out
    }

    /// `W = (Sym(ℓ+1) × Aut(T)) M`, with `Aut(T)` generated by the inner
    /// automorphisms and `outer_reps`.
    pub fn build_w(&self, outer_reps: &[Automorphism]) -> Result<SdGroup> {
        let mut gens = Vec::new();
        let mut tags = Vec::new();
        let id_sigma = Permutation::identity(self.ell + 1);
        for i in 0..=self.ell {
            for t in self.table.generator_indices() {
                let m = self.unit_tuple(i, t);
                gens.push(self.perm_of_socle(&m)?);
                tags.push(id_sigma.clone());
            }
        }
        for phi in outer_reps {
            gens.push(self.perm_of_automorphism(phi));
            tags.push(id_sigma.clone());
        }
        for s in self.top_generators() {
            gens.push(self.perm_of_top(&s)?);
            tags.push(s);
        }
        SdGroup::new(self.clone(), gens, tags)
    }
}

/// A group between the socle and `W`, with the coordinate permutation of
/// each generator recorded.
#[derive(Clone, Debug)]
pub struct SdGroup {
    space: DiagonalSpace,
    group: PermGroup,
    tags: Vec<Permutation>,
    factor_gens: Vec<Vec<Permutation>>,
}

impl SdGroup {
    pub fn new(
        space: DiagonalSpace,
        gens: Vec<Permutation>,
        tags: Vec<Permutation>,
    ) -> Result<Self> {
        let factor_gens = (0..space.factors())
            .map(|i| space.factor_generators(i))
            .collect();
        let group = PermGroup::new(gens)?;
        Ok(SdGroup {
            space,
            group,
            tags,
            factor_gens,
        })
    }

    pub fn space(&self) -> &DiagonalSpace {
        &self.space
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    /// Coordinate permutation recorded for each generator.
    pub fn generator_tags(&self) -> &[Permutation] {
        &self.tags
    }

    /// Index of the simple factor `T_j` containing `c`, for `c` in some factor.
    fn factor_containing(&self, c: &Permutation) -> Option<usize> {
        let mut hits = (0..self.space.factors())
            .filter(|&j| self.factor_gens[j].iter().any(|s| !s.commutes_with(c)));
        let j = hits.next()?;
        hits.next().is_none().then_some(j)
    }

    /// Permutation `σ` of `{0, …, ℓ}` with `g⁻¹ T_i g = T_{i^σ}`.
    pub fn factor_action_on_components(&self, g: &Permutation) -> Result<Permutation> {
        if !self.group.contains(g)? {
            return Err(Error::NotSubgroup("element is outside the group".into()));
        }
        self.factor_action_unchecked(g)
    }

    fn factor_action_unchecked(&self, g: &Permutation) -> Result<Permutation> {
        let ginv = g.inverse();
        let images = (0..self.space.factors())
            .map(|i| {
                let s = &self.factor_gens[i][0];
                let c = &(&ginv * s) * g;
                self.factor_containing(&c).ok_or_else(|| {
                    Error::NotSubgroup("element does not normalize the socle".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }

    /// Unique factorization `g = σ φ m`, verified by recomposition.
    pub fn factor(&self, g: &Permutation) -> Result<FactoredElement> {
        if !self.group.contains(g)? {
            return Err(Error::NotSubgroup("element is outside the group".into()));
        }
        let sp = &self.space;
        let sigma = self.factor_action_unchecked(g)?;
        let m = sp.decode(g.apply(sp.alpha()));
        let rest = &(&sp.perm_of_top(&sigma)?.inverse() * g) * &sp.perm_of_socle(&m)?.inverse();
        // φ moves D(1, a, 1, …, 1) to D(1, a^φ, 1, …, 1)
        let n = sp.table().order();
        let phi_images: Vec<u32> = (0..n as u32)
            .map(|a| sp.decode(rest.apply(sp.encode(&sp.unit_tuple(1, a))))[1])
            .collect();
        let phi = Automorphism::from_images(sp.table(), phi_images)?;
        let out = FactoredElement { sigma, phi, m };
        if sp.perm_of_factored(&out)? != *g {
            return Err(Error::NotSubgroup("element is not of the form σφm".into()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space(ell: usize) -> DiagonalSpace {
        DiagonalSpace::new(ElementTable::new(&PermGroup::alternating(5)).unwrap(), ell).unwrap()
    }

    #[test]
    fn normalize_and_encode() {
        let sp = space(2);
        let t = sp.table();
        assert_eq!(sp.normalize(&[7, 7, 7]), vec![0, 0, 0]);
        assert_eq!(sp.normalize(&[0, 5, 9]), vec![0, 5, 9]);
        let v = sp.normalize(&[3, 5, 9]);
        assert_eq!(v, vec![0, t.ldiv(3, 5), t.ldiv(3, 9)]);
        assert_eq!(sp.normalize(&v), v);
        for p in [0, 1, 59, 60, 3599] {
            assert_eq!(sp.encode(&sp.decode(p)), p);
        }
        assert_eq!(sp.size(), 3600);
    }

    #[test]
    fn top_action_golden() {
        let sp = space(2);
        let t = sp.table();
        let sigma = Permutation::parse_cycles(3, "(0 1 2)").unwrap();
        let s = sp.perm_of_top(&sigma).unwrap();
        for (t1, t2) in [(4u32, 11u32), (0, 5), (17, 0)] {
            let beta = sp.encode(&[0, t1, t2]);
            let expect = sp.encode(&[0, t.inv(t2), t.ldiv(t2, t1)]);
            assert_eq!(s.apply(beta), expect);
        }
    }

    #[test]
    fn actions_are_homomorphic() {
        let sp = space(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = sp.table().order() as u32;
        for _ in 0..5 {
            let a: Vec<u32> = (0..3).map(|_| rng.gen_range(0..n)).collect();
            let b: Vec<u32> = (0..3).map(|_| rng.gen_range(0..n)).collect();
            let ab: Vec<u32> = (0..3).map(|i| sp.table().mul(a[i], b[i])).collect();
            assert_eq!(
                &sp.perm_of_socle(&a).unwrap() * &sp.perm_of_socle(&b).unwrap(),
                sp.perm_of_socle(&ab).unwrap()
            );
        }
        let s = Permutation::parse_cycles(3, "(0 1)").unwrap();
        let c = Permutation::parse_cycles(3, "(0 1 2)").unwrap();
        assert_eq!(
            &sp.perm_of_top(&s).unwrap() * &sp.perm_of_top(&c).unwrap(),
            sp.perm_of_top(&(&s * &c)).unwrap()
        );
        for t in [1u32, 20, 59] {
            let inner = Automorphism::inner(sp.table(), t);
            assert_eq!(
                sp.perm_of_automorphism(&inner),
                sp.perm_of_socle(&[t, t, t]).unwrap()
            );
        }
    }

    #[test]
    fn m_is_regular_and_w_has_expected_order() {
        let sp = space(2);
        let m = sp.build_m().unwrap();
        assert_eq!(m.order_u64(), Some(3600));
        assert!(m.stabilizer(0).unwrap().is_trivial());
        let tr = Permutation::parse_cycles(5, "(0 1)").unwrap();
        let outer = Automorphism::from_normalizing(sp.table(), &tr).unwrap();
        let w = sp.build_w(&[outer]).unwrap();
        assert_eq!(w.group().order_u64(), Some(2_592_000));
        assert_eq!(w.group().stabilizer(0).unwrap().order_u64(), Some(720));
    }

    #[test]
    fn factorization_round_trips() {
        let sp = space(2);
        let w = sp.build_w(&[]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let g = w.group().random_element(&mut rng);
            let f = w.factor(&g).unwrap();
            assert_eq!(f.m[0], 0);
            assert_eq!(sp.perm_of_factored(&f).unwrap(), g);
        }
        let sigma = Permutation::parse_cycles(3, "(0 2)").unwrap();
        let g = sp.perm_of_top(&sigma).unwrap();
        assert_eq!(w.factor_action_on_components(&g).unwrap(), sigma);
    }
}
