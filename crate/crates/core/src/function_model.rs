//! Diagonal actions on `Ω = T^X / D` without listing `Ω`.
//!
//! A point is a function `f: X → T` normalized so that `f(x₀) = 1`; `X` is
//! the index set of a coordinate group `V` (so `x₀`, the identity of `V`,
//! is index 0). An element `σφm` acts by `f ↦ (x ↦ f(x^{σ⁻¹})^φ · m(x))`
//! followed by left multiplication with the inverse of the value at `x₀`.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Budget, Error, Result};
use crate::perm::{Automorphism, ElementTable, PermGroup, Permutation};

#[derive(Clone, Debug)]
pub struct FunctionSpace {
    /// The simple-factor group `T`.
    pub target: ElementTable,
    /// The coordinate group `V`; `X` is its set of element indices.
    pub coords: ElementTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionPoint {
    values: Vec<u32>,
}

impl FunctionPoint {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, x: usize) -> u32 {
        self.values[x]
    }
}

/// `σφm`: `σ` permutes `X`, `φ ∈ Aut(T)`, `m: X → T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ImplicitElement {
    pub sigma: Permutation,
    pub phi: Automorphism,
    pub m: Vec<u32>,
}

impl FunctionSpace {
    pub fn new(target: ElementTable, coords: ElementTable) -> Self {
        FunctionSpace { target, coords }
    }

    pub fn x_size(&self) -> usize {
        self.coords.order()
    }

    /// Number of points, `|T|^{|X|−1}`, if it fits in a `u128`.
    pub fn omega_size(&self) -> Option<u128> {
        (1..self.x_size()).try_fold(1u128, |acc, _| acc.checked_mul(self.target.order() as u128))
    }

    /// The diagonal point `D`.
    pub fn alpha(&self) -> FunctionPoint {
        FunctionPoint {
            values: vec![0; self.x_size()],
        }
    }

    /// The coset `D·f`, normalized.
    pub fn point(&self, f: &[u32]) -> Result<FunctionPoint> {
        if f.len() != self.x_size() || f.iter().any(|&t| t as usize >= self.target.order()) {
            return Err(Error::InvalidArgument(format!(
                "a point needs {} values below {}",
                self.x_size(),
                self.target.order()
            )));
        }
        let c = f[0];
        Ok(FunctionPoint {
            values: f.iter().map(|&t| self.target.ldiv(c, t)).collect(),
        })
    }

    pub fn identity(&self) -> ImplicitElement {
        ImplicitElement {
            sigma: Permutation::identity(self.x_size()),
            phi: Automorphism::identity(&self.target),
            m: vec![0; self.x_size()],
        }
    }

    /// Pure coordinate permutation.
    pub fn top(&self, sigma: Permutation) -> ImplicitElement {
        ImplicitElement {
            sigma,
            ..self.identity()
        }
    }

    /// Conjugation by `t`, i.e. the diagonal element `(t, …, t)`.
    pub fn inner(&self, t: u32) -> ImplicitElement {
        ImplicitElement {
            phi: Automorphism::inner(&self.target, t),
            ..self.identity()
        }
    }

    /// `ι_t · σ`, a typical element of `ι(T) × L`.
    pub fn inner_then_top(&self, t: u32, sigma: &Permutation) -> ImplicitElement {
        ImplicitElement {
            sigma: sigma.clone(),
            phi: Automorphism::inner(&self.target, t),
            m: vec![0; self.x_size()],
        }
    }

    pub fn act(&self, f: &FunctionPoint, g: &ImplicitElement) -> FunctionPoint {
        let mut out = vec![0u32; f.values.len()];
        self.act_into(&f.values, g, &mut out);
        FunctionPoint { values: out }
    }

    fn act_into(&self, f: &[u32], g: &ImplicitElement, out: &mut [u32]) {
        let t = &self.target;
        for (x, &v) in f.iter().enumerate() {
            out[g.sigma.apply(x)] = g.phi.apply(v);
        }
        for (x, o) in out.iter_mut().enumerate() {
            *o = t.mul(*o, g.m[x]);
        }
        let c = out[0];
        if c != 0 {
            for o in out.iter_mut() {
                *o = t.ldiv(c, *o);
            }
        }
    }

    /// `act(f, g) == f`, with early exit.
    pub fn stabilizes(&self, f: &FunctionPoint, g: &ImplicitElement) -> bool {
        let t = &self.target;
        let fx = &f.values;
        let y0 = g.sigma.inverse().apply(0);
        let c = t.mul(g.phi.apply(fx[y0]), g.m[0]);
        (0..fx.len()).all(|x| {
            let img = g.sigma.apply(x);
            t.ldiv(c, t.mul(g.phi.apply(fx[x]), g.m[img])) == fx[img]
        })
    }

    /// Product: `g` then `h`, in canonical form.
    pub fn compose(&self, g: &ImplicitElement, h: &ImplicitElement) -> ImplicitElement {
        let t = &self.target;
        let sigma = &g.sigma * &h.sigma;
        let phi = g.phi.then(&h.phi);
        let n = self.x_size();
        let mut m = vec![0u32; n];
        for (x, &gm) in g.m.iter().enumerate() {
            let y = h.sigma.apply(x);
            m[y] = t.mul(h.phi.apply(gm), h.m[y]);
        }
        self.canonical(ImplicitElement { sigma, phi, m })
    }

    pub fn inverse(&self, g: &ImplicitElement) -> ImplicitElement {
        let t = &self.target;
        let sigma = g.sigma.inverse();
        let phi = g.phi.inverse();
        // m'(x^{σ⁻¹}) = φ⁻¹(m(x))⁻¹
        let mut m = vec![0u32; self.x_size()];
        for (x, &gm) in g.m.iter().enumerate() {
            m[sigma.apply(x)] = t.inv(phi.apply(gm));
        }
        self.canonical(ImplicitElement { sigma, phi, m })
    }

    /// Moves a constant factor of `m` into `φ` so that `m(x₀) = 1`.
    pub fn canonical(&self, g: ImplicitElement) -> ImplicitElement {
        let c = g.m[0];
        if c == 0 {
            return g;
        }
        let t = &self.target;
        ImplicitElement {
            phi: g.phi.then(&Automorphism::inner(t, c)),
            m: g.m.iter().map(|&x| t.ldiv(c, x)).collect(),
            sigma: g.sigma,
        }
    }

    /// The coordinate permutation `x ↦ x·v`.
    pub fn right_multiplication(&self, v: u32) -> Permutation {
        let images = (0..self.x_size() as u32)
            .map(|x| self.coords.mul(x, v) as usize)
            .collect();
        Permutation::from_images(images).unwrap()
    }

    /// The coordinate permutation induced by an automorphism of `V`.
    pub fn coordinate_automorphism(&self, h: &Automorphism) -> Permutation {
        Permutation::from_images(h.images().iter().map(|&x| x as usize).collect()).unwrap()
    }
}

/// A homomorphism `w: V → T` given by its values.
#[derive(Clone, Debug)]
pub struct HomomorphismSpec {
    images: Vec<u32>,
}

impl HomomorphismSpec {
    /// Checks `w(uv) = w(u)w(v)` for all pairs.
    pub fn new(space: &FunctionSpace, images: Vec<u32>, budget: Budget) -> Result<Self> {
        let n = space.x_size();
        if images.len() != n {
            return Err(Error::InvalidArgument("one image per element of V".into()));
        }
        budget.ensure((n * n) as u64, "homomorphism check over all pairs")?;
        let (v, t) = (&space.coords, &space.target);
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if images[v.mul(a, b) as usize] != t.mul(images[a as usize], images[b as usize]) {
                    return Err(Error::Precondition(format!(
                        "w is not a homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(HomomorphismSpec { images })
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.images[v as usize]
    }

    pub fn image_set(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.images.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn kernel(&self) -> Vec<u32> {
        (0..self.images.len() as u32)
            .filter(|&v| self.images[v as usize] == 0)
            .collect()
    }
}

/// `b(v) = w(−v)` for abelian `V`; `w` must map onto `P`.
pub fn build_b_example42(
    space: &FunctionSpace,
    w: &HomomorphismSpec,
    p_elements: &[u32],
) -> Result<FunctionPoint> {
    let v = &space.coords;
    let n = v.order() as u32;
    for a in 0..n {
        for b in 0..a {
            if v.mul(a, b) != v.mul(b, a) {
                return Err(Error::Precondition("V is not abelian".into()));
            }
        }
    }
    let mut p = p_elements.to_vec();
    p.sort_unstable();
    if w.image_set() != p {
        return Err(Error::Precondition("w is not surjective onto P".into()));
    }
    space.point(&(0..n).map(|x| w.apply(v.inv(x))).collect::<Vec<_>>())
}

/// `b(v) = w(v⁻¹)` where `w` projects `V = A^m` onto two coordinates inside `T`.
pub fn build_b_cf(space: &FunctionSpace, w: &HomomorphismSpec) -> Result<FunctionPoint> {
    let v = &space.coords;
    let n = v.order() as u32;
    // w is injective on the complement of its kernel: |V| = |ker w|·|image|
    if w.kernel().len() * w.image_set().len() != v.order() {
        return Err(Error::Precondition(
            "embedding of A×A into T is not injective".into(),
        ));
    }
    space.point(&(0..n).map(|x| w.apply(v.inv(x))).collect::<Vec<_>>())
}

/// Result of scanning a candidate family.
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub elements: Vec<ImplicitElement>,
    pub scanned: u64,
}

impl ScanResult {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Members of `candidates` fixing `beta`, split across `threads` workers.
pub fn two_point_stabilizer_scan(
    space: &FunctionSpace,
    beta: &FunctionPoint,
    candidates: &[ImplicitElement],
    threads: usize,
    budget: Budget,
) -> Result<ScanResult> {
    budget.ensure(candidates.len() as u64, "two-point stabilizer scan")?;
    let threads = threads.max(1).min(candidates.len().max(1));
    let chunk = candidates.len().div_ceil(threads).max(1);
    let elements = if threads == 1 {
        candidates
            .iter()
            .filter(|g| space.stabilizes(beta, g))
            .cloned()
            .collect()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = candidates
                .chunks(chunk)
                .map(|part| {
                    s.spawn(move || {
                        part.iter()
                            .filter(|g| space.stabilizes(beta, g))
                            .cloned()
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("scan worker panicked"))
                .collect()
        })
    };
    Ok(ScanResult {
        elements,
        scanned: candidates.len() as u64,
    })
}

/// Streams the candidates `ι_t·σ` for all `t ∈ T`, `σ ∈ sigmas`, keeping those that fix `beta`.
pub fn scan_inner_times_top(
    space: &FunctionSpace,
    beta: &FunctionPoint,
    sigmas: &[Permutation],
    threads: usize,
    budget: Budget,
) -> Result<ScanResult> {
    let total = (space.target.order() * sigmas.len()) as u64;
    budget.ensure(total, "scan of ι(T) × L")?;
    let inner: Vec<Automorphism> = (0..space.target.order() as u32)
        .map(|t| Automorphism::inner(&space.target, t))
        .collect();
    let m = vec![0u32; space.x_size()];
    let work = |part: &[Permutation]| -> Vec<ImplicitElement> {
        let mut found = Vec::new();
        for s in part {
            for phi in &inner {
                let g = ImplicitElement {
                    sigma: s.clone(),
                    phi: phi.clone(),
                    m: m.clone(),
                };
                if space.stabilizes(beta, &g) {
                    found.push(g);
                }
            }
        }
        found
    };
    let threads = threads.max(1).min(sigmas.len().max(1));
    let elements = if threads == 1 {
        work(sigmas)
    } else {
        let chunk = sigmas.len().div_ceil(threads).max(1);
        std::thread::scope(|s| {
            let handles: Vec<_> = sigmas
                .chunks(chunk)
                .map(|part| s.spawn(move || work(part)))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("scan worker panicked"))
                .collect()
        })
    };
    Ok(ScanResult {
        elements,
        scanned: total,
    })
}

/// Orbit of `point` under the group generated by `gens`.
pub fn orbit_of_point(
    space: &FunctionSpace,
    point: &FunctionPoint,
    gens: &[ImplicitElement],
    budget: Budget,
) -> Result<Vec<FunctionPoint>> {
    let mut seen: HashSet<FunctionPoint> = HashSet::from([point.clone()]);
    let mut out = vec![point.clone()];
    let mut queue = VecDeque::from([point.clone()]);
    let cost_per_point = space.x_size() as u64;
    while let Some(f) = queue.pop_front() {
        for g in gens {
            let h = space.act(&f, g);
            if seen.insert(h.clone()) {
                if (out.len() as u64 + 1) * cost_per_point > budget.0 {
                    return Err(budget.exceeded("orbit of a function point"));
                }
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(out)
}

/// The plus-kernel computed in the implicit model.
#[derive(Clone, Debug)]
pub struct KernelScan {
    pub kernel: Vec<ImplicitElement>,
    pub orbit_len: usize,
    /// The kernel's coordinate permutations form a regular group on `X`.
    pub regular_on_coordinates: bool,
}

/// Elements of `arc_stabilizer` fixing every point of `β^{G_α}`.
///
/// `alpha_gens` generate `G_α`; the kernel lies in `G_{αβ}`, so only those
/// elements are tested.
pub fn plus_kernel_scan(
    space: &FunctionSpace,
    beta: &FunctionPoint,
    alpha_gens: &[ImplicitElement],
    arc_stabilizer: &[ImplicitElement],
    budget: Budget,
) -> Result<KernelScan> {
    let orbit = orbit_of_point(space, beta, alpha_gens, budget)?;
    let cost = (orbit.len() as u64).saturating_mul(arc_stabilizer.len() as u64);
    budget.ensure(cost, "plus-kernel scan over the orbit")?;
    let kernel: Vec<ImplicitElement> = arc_stabilizer
        .iter()
        .filter(|g| orbit.iter().all(|f| space.stabilizes(f, g)))
        .cloned()
        .collect();
    let n = space.x_size();
    let regular = kernel.len() == n && {
        let images: HashSet<usize> = kernel.iter().map(|g| g.sigma.apply(0)).collect();
        images.len() == n
    };
    Ok(KernelScan {
        kernel,
        orbit_len: orbit.len(),
        regular_on_coordinates: regular,
    })
}

/// True iff every conjugate `g⁻¹ k g` (`k ∈ set`, `g ∈ conjugators`) lies in `set`.
pub fn closed_under_conjugation(
    space: &FunctionSpace,
    set: &[ImplicitElement],
    conjugators: &[ImplicitElement],
) -> bool {
    let members: HashSet<&ImplicitElement> = set.iter().collect();
    conjugators.iter().all(|g| {
        let gi = space.inverse(g);
        set.iter()
            .all(|k| members.contains(&space.compose(&space.compose(&gi, k), g)))
    })
}

/// Whether `σ ↦ β(x₀^{σ⁻¹})` is multiplicative on all pairs of kernel elements.
pub fn kernel_to_target_is_homomorphism(
    space: &FunctionSpace,
    beta: &FunctionPoint,
    kernel: &[ImplicitElement],
) -> bool {
    let index: HashMap<&Permutation, u32> = kernel
        .iter()
        .map(|k| (&k.sigma, beta.value(k.sigma.inverse().apply(0))))
        .collect();
    let t = &space.target;
    kernel.iter().all(|a| {
        kernel.iter().all(|b| {
            let ab = &a.sigma * &b.sigma;
            match index.get(&ab) {
                Some(&wab) => t.mul(index[&a.sigma], index[&b.sigma]) == wab,
                None => false,
            }
        })
    })
}

/// The coordinate group `L` as permutations of `X`, from `V`'s right
/// multiplications and the given automorphisms of `V`.
pub fn coordinate_group(
    space: &FunctionSpace,
    automorphisms: &[Automorphism],
) -> Result<PermGroup> {
    let mut gens: Vec<Permutation> = space
        .coords
        .generator_indices()
        .into_iter()
        .map(|v| space.right_multiplication(v))
        .collect();
    gens.extend(
        automorphisms
            .iter()
            .map(|h| space.coordinate_automorphism(h)),
    );
    PermGroup::new(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_space() -> FunctionSpace {
        let t = ElementTable::new(&PermGroup::symmetric(3)).unwrap();
        let c4 = PermGroup::new(vec![Permutation::parse_cycles(4, "(0 1 2 3)").unwrap()]).unwrap();
        FunctionSpace::new(t, ElementTable::new(&c4).unwrap())
    }

    fn random_element(
        space: &FunctionSpace,
        rng: &mut ChaCha8Rng,
        l: &PermGroup,
    ) -> ImplicitElement {
        let n = space.target.order() as u32;
        let g = ImplicitElement {
            sigma: l.random_element(rng),
            phi: Automorphism::inner(&space.target, rng.gen_range(0..n)),
            m: (0..space.x_size()).map(|_| rng.gen_range(0..n)).collect(),
        };
        space.canonical(g)
    }

    #[test]
    fn action_is_a_right_action() {
        let space = small_space();
        let l = coordinate_group(&space, &[]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = random_element(&space, &mut rng, &l);
            let h = random_element(&space, &mut rng, &l);
            let f: Vec<u32> = (0..4).map(|_| rng.gen_range(0..6)).collect();
            let f = space.point(&f).unwrap();
            let lhs = space.act(&space.act(&f, &g), &h);
            assert_eq!(lhs, space.act(&f, &space.compose(&g, &h)));
            let back = space.act(&space.act(&f, &g), &space.inverse(&g));
            assert_eq!(back, f);
            assert_eq!(space.stabilizes(&f, &g), space.act(&f, &g) == f);
        }
    }

    #[test]
    fn diagonal_multiplication_is_invisible() {
        let space = small_space();
        let f = space.point(&[0, 3, 4, 5]).unwrap();
        for t in 0..6 {
            let shifted = space
                .point(
                    &f.values()
                        .iter()
                        .map(|&x| space.target.mul(t, x))
                        .collect::<Vec<_>>(),
                )
                .unwrap();
            assert_eq!(shifted, f);
        }
        assert!(space.stabilizes(&space.alpha(), &space.inner(2)));
    }
}
