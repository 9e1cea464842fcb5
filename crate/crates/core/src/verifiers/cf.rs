//! A nontrivial normal two-point stabilizer in a twisted-wreath style action,
//! and the ingredients it needs at full size.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigUint;

use super::report::{Provenance, VerificationReport};
use super::Mode;
use crate::constructions::{is_prime, psl2};
use crate::error::{Budget, Error, Result};
use crate::function_model::{
    build_b_cf, closed_under_conjugation, coordinate_group, kernel_to_target_is_homomorphism,
    plus_kernel_scan, scan_inner_times_top, FunctionSpace, HomomorphismSpec, ImplicitElement,
};
use crate::orbital::suborbits;
use crate::perm::{
    centralizer_of_subgroup, coset_action, find_alt5_subgroup, search::DEFAULT_RETRIES,
    Automorphism, ElementTable, PermGroup, Permutation,
};

/// Parameters of the miniature: `V = A^m`, `H` permuting the `m` copies,
/// `T ⊇ A × A` via the coordinates `c1`, `c2`.
#[derive(Clone, Debug)]
pub struct CfMiniature {
    pub a_name: String,
    pub a: PermGroup,
    pub m: usize,
    pub h_name: String,
    /// Permutations of the `m` coordinates.
    pub h: PermGroup,
    pub t_name: String,
    pub t: PermGroup,
    pub c1: usize,
    pub c2: usize,
    pub mode: Mode,
    pub threads: usize,
}

/// `g` acting on copy `block` of `d` points inside `m·d` points.
fn in_block(g: &Permutation, block: usize, d: usize, m: usize) -> Permutation {
    let mut images: Vec<usize> = (0..m * d).collect();
    for j in 0..d {
        images[block * d + j] = block * d + g.apply(j);
    }
    Permutation::from_images(images).expect("block copy of a permutation")
}

/// `h` permuting the `m` copies of `d` points.
fn permuting_blocks(h: &Permutation, d: usize, m: usize) -> Permutation {
    let images = (0..m * d).map(|x| h.apply(x / d) * d + x % d).collect();
    Permutation::from_images(images).expect("block permutation")
}

/// Restriction of `v` to copy `block`, shifted to start at `offset` in a permutation of degree `n`.
fn block_into(
    v: &Permutation,
    block: usize,
    d: usize,
    offset: usize,
    n: usize,
    images: &mut [usize],
) {
    debug_assert_eq!(images.len(), n);
    for j in 0..d {
        images[offset + j] = offset + v.apply(block * d + j) - block * d;
    }
}

pub fn check_cf_miniature(cf: &CfMiniature, budget: Budget) -> Result<VerificationReport> {
    let started = Instant::now();
    let d = cf.a.degree();
    let m = cf.m;
    if cf.h.degree() != m {
        return Err(Error::InvalidArgument(format!(
            "H must act on {m} coordinates"
        )));
    }
    if cf.c1 == cf.c2 || cf.c1 >= m || cf.c2 >= m {
        return Err(Error::InvalidArgument(
            "c1, c2 must be distinct coordinates".into(),
        ));
    }
    if cf.t.degree() < 2 * d {
        return Err(Error::Precondition(format!(
            "T must act on at least {} points to contain A × A",
            2 * d
        )));
    }
    let a_table = ElementTable::new(&cf.a)?;
    if a_table.centralizer(&a_table.generator_indices()).len() != 1 {
        return Err(Error::Precondition("Z(A) ≠ 1".into()));
    }
    let h_elements = cf.h.elements(budget)?;
    let pair_fixers = h_elements
        .iter()
        .filter(|h| {
            let (x, y) = (h.apply(cf.c1), h.apply(cf.c2));
            (x == cf.c1 && y == cf.c2) || (x == cf.c2 && y == cf.c1)
        })
        .count();
    if pair_fixers != 1 {
        return Err(Error::Precondition(format!(
            "the setwise stabilizer of {{{}, {}}} in H has order {pair_fixers}",
            cf.c1, cf.c2
        )));
    }

    let v_gens: Vec<Permutation> = (0..m)
        .flat_map(|i| cf.a.generators().iter().map(move |g| in_block(g, i, d, m)))
        .collect();
    let v_group = PermGroup::new(v_gens)?;
    let t = ElementTable::new(&cf.t)?;
    let coords = ElementTable::new(&v_group)?;
    let space = FunctionSpace::new(t, coords);
    let n = space.x_size();
    let tn = cf.t.degree();
    let images = (0..n as u32)
        .map(|v| {
            let vp = space.coords.element(v);
            let mut img: Vec<usize> = (0..tn).collect();
            block_into(vp, cf.c1, d, 0, tn, &mut img);
            block_into(vp, cf.c2, d, d, tn, &mut img);
            let p = Permutation::from_images(img).expect("block restriction");
            space.target.index_of(&p).expect("A × A lies in T")
        })
        .collect::<Vec<u32>>();
    let w = HomomorphismSpec::new(&space, images, budget)?;
    let aa_gens: Vec<u32> = space
        .coords
        .generator_indices()
        .into_iter()
        .map(|v| w.apply(v))
        .collect();
    if space.target.centralizer(&aa_gens).len() != 1 {
        return Err(Error::Precondition("C_T(A × A) ≠ 1".into()));
    }
    let b = build_b_cf(&space, &w)?;
    let auts =
        cf.h.generators()
            .iter()
            .map(|h| Automorphism::from_normalizing(&space.coords, &permuting_blocks(h, d, m)))
            .collect::<Result<Vec<_>>>()?;
    let l_group = coordinate_group(&space, &auts)?;
    let tg = &space.target;
    let g_alpha_order = BigUint::from(tg.order()) * l_group.order();

    let mut report = VerificationReport::new("cf-mini");
    report.param("A", cf.a_name.as_str());
    report.param("m", m);
    report.param("H", cf.h_name.as_str());
    report.param("T", cf.t_name.as_str());
    report.param("coordinates", vec![cf.c1, cf.c2]);
    report.param("mode", cf.mode.to_string());
    report.param("|V|", n);
    report.param("|G_α|", g_alpha_order.to_string());

    let translated = (0..n as u32).all(|v| {
        (0..n as u32).all(|x| {
            let shifted = space.coords.mul(x, space.coords.inv(v)) as usize;
            b.value(shifted) == tg.mul(w.apply(v), b.value(x as usize))
        })
    });
    report.check(
        "b^v = w(v)·b for every v ∈ V",
        translated,
        Provenance::Paper,
    );
    let v_tops: Vec<ImplicitElement> = (0..n as u32)
        .map(|v| space.top(space.right_multiplication(v)))
        .collect();
    report.check(
        "V ≤ G_αβ",
        v_tops.iter().all(|x| space.stabilizes(&b, x)),
        Provenance::Paper,
    );

    let complement = l_group.stabilizer(0)?.elements(budget)?;
    let in_th = scan_inner_times_top(&space, &b, &complement, cf.threads, budget)?;
    report.claim("|G_αβ ∩ (T × H)|", 1, in_th.order(), Provenance::Paper);
    let fast: Vec<ImplicitElement> = v_tops
        .iter()
        .flat_map(|v| in_th.elements.iter().map(|x| space.compose(v, x)))
        .collect();
    let arc = match cf.mode {
        Mode::Fast => fast,
        Mode::Oracle => {
            let all_l = l_group.elements(budget)?;
            let full = scan_inner_times_top(&space, &b, &all_l, cf.threads, budget)?;
            let fast_set: HashSet<&ImplicitElement> = fast.iter().collect();
            let agree =
                full.order() == fast.len() && full.elements.iter().all(|x| fast_set.contains(x));
            report.check(
                "full scan of ι(T) × L agrees with the factorization",
                agree,
                Provenance::Derived,
            );
            report.param("scanned", full.scanned);
            full.elements
        }
    };
    report.claim("|G_αβ| = |V|", n, arc.len(), Provenance::Paper);
    report.check("G_αβ ≠ 1", arc.len() > 1, Provenance::Paper);

    let mut alpha_gens: Vec<ImplicitElement> = tg
        .generator_indices()
        .into_iter()
        .map(|t| space.inner(t))
        .collect();
    alpha_gens.extend(l_group.generators().iter().map(|s| space.top(s.clone())));
    let ks = plus_kernel_scan(&space, &b, &alpha_gens, &arc, budget)?;
    report.param("orbit_of_beta", ks.orbit_len);
    report.claim("|G_α^{+[1]}|", n, ks.kernel.len(), Provenance::Paper);
    report.claim(
        "|G_αβ| = |G_αβ ∩ (T × H)| · |G_α^{+[1]}|",
        arc.len(),
        in_th.order() * ks.kernel.len(),
        Provenance::Paper,
    );
    let arc_set: HashSet<&ImplicitElement> = arc.iter().collect();
    let equal = ks.kernel.len() == arc.len() && ks.kernel.iter().all(|x| arc_set.contains(x));
    report.check("G_αβ = G_α^{+[1]}", equal, Provenance::Paper);
    let normal = closed_under_conjugation(&space, &arc, &alpha_gens);
    report.check("G_αβ ⊴ G_α", normal, Provenance::Paper);
    report.claim(
        "G_αβ ⊴ G_α exactly when G_αβ = G_α^{+[1]}",
        normal,
        equal,
        Provenance::Trivial,
    );
    report.claim(
        "|β^{G_α}| = |G_α : G_αβ|",
        &g_alpha_order / BigUint::from(arc.len().max(1)),
        ks.orbit_len,
        Provenance::Trivial,
    );
    report.claim(
        "local action regular: |G_α : G_α^{+[1]}| = |β^{G_α}|",
        ks.orbit_len,
        &g_alpha_order / BigUint::from(ks.kernel.len().max(1)),
        Provenance::Derived,
    );
    report.check(
        "G_α^{+[1]} regular on X",
        ks.regular_on_coordinates,
        Provenance::Derived,
    );
    report.check(
        "σ ↦ b(x₀^{σ⁻¹}) is a homomorphism on G_α^{+[1]}",
        kernel_to_target_is_homomorphism(&space, &b, &ks.kernel),
        Provenance::Derived,
    );
    Ok(report.finish(started))
}

/// Default miniature: `Sym(3)³` permuted cyclically, inside `Sym(6)`.
pub fn default_miniature(mode: Mode, threads: usize) -> CfMiniature {
    CfMiniature {
        a_name: "Sym(3)".into(),
        a: PermGroup::symmetric(3),
        m: 3,
        h_name: "Cyc(3)".into(),
        h: PermGroup::new(vec![Permutation::parse_cycles(3, "(0 1 2)").unwrap()]).unwrap(),
        t_name: "Sym(6)".into(),
        t: PermGroup::symmetric(6),
        c1: 0,
        c2: 1,
        mode,
        threads,
    }
}

/// Ingredients at full size: `A ≅ Alt(5)` maximal and core-free in
/// `PSL₂(p)`, a pair of cosets with trivial setwise stabilizer, and
/// `C_{Alt(10)}(Alt(5) × Alt(5)) = 1`.
pub fn check_cf_ingredients(
    p: u64,
    force: bool,
    seed: u64,
    budget: Budget,
) -> Result<VerificationReport> {
    let started = Instant::now();
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if !force && (p % 10 != 1 && p % 10 != 9 || p < 61) {
        return Err(Error::Precondition(format!(
            "need p ≡ ±1 (mod 10) and p ≥ 61, got {p} (use --force to run anyway)"
        )));
    }
    let mut report = VerificationReport::new("cf-ingredients");
    report.param("p", p);
    report.param("seed", seed);
    report.param("forced", force);

    let h = psl2(p)?;
    let alt5 = find_alt5_subgroup(&h, seed, DEFAULT_RETRIES)?;
    report.param("a", alt5.a.to_string());
    report.param("b", alt5.b.to_string());
    let a = &alt5.group;
    let expected_order = p * (p * p - 1) / 2;
    report.claim(
        "|PSL₂(p)|, |A|, A perfect",
        format!("{expected_order}, 60, true"),
        format!("{}, {}, {}", h.order(), a.order(), a.is_perfect()?),
        Provenance::Paper,
    );

    let action = coset_action(&h, a, budget)?;
    let image = &action.image;
    let degree = action.transversal.len();
    report.param("degree", degree);
    report.claim(
        "coset degree |H|/60, transitive, primitive",
        format!("{}, true, true", expected_order / 60),
        format!(
            "{degree}, {}, {}",
            image.is_transitive(),
            image.is_primitive()?.is_primitive()
        ),
        Provenance::Paper,
    );
    report.claim(
        "coset action faithful (A core-free)",
        h.order(),
        image.order(),
        Provenance::Paper,
    );

    let stab = image.stabilizer(0)?;
    let regular = BigUint::from(60u32);
    let mut witnesses = Vec::new();
    let subs = suborbits(image, 0)?;
    for s in subs
        .iter()
        .filter(|s| !s.trivial && BigUint::from(s.length) == regular)
    {
        if image
            .setwise_pair_stabilizer(0, s.representative)?
            .is_trivial()
        {
            witnesses.push(s.representative);
        }
    }
    report.param("suborbits", subs.len());
    report.param("alpha_stabilizer_order", stab.order().to_string());
    report.param("trivial_pair_witnesses", witnesses.clone());
    report.check(
        "some pair {α, β} has trivial setwise stabilizer",
        !witnesses.is_empty(),
        Provenance::Paper,
    );

    let alt10 = PermGroup::alternating(10);
    let five = PermGroup::alternating(5);
    let aa: Vec<Permutation> = five
        .generators()
        .iter()
        .flat_map(|g| {
            let low = g.extend_to(10);
            let high = Permutation::identity(5).direct_sum(g);
            [low, high]
        })
        .collect();
    let cent = centralizer_of_subgroup(&alt10, &aa, budget)?;
    report.claim(
        "|C_{Alt(10)}(Alt(5) × Alt(5))|",
        1,
        cent.order(),
        Provenance::Paper,
    );
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miniature_fast() {
        let r = check_cf_miniature(&default_miniature(Mode::Fast, 1), Budget::DEFAULT).unwrap();
        assert!(r.pass, "{}", r.to_text());
    }

    #[test]
    fn full_symmetric_top_fails_the_pair_condition() {
        let mut cf = default_miniature(Mode::Fast, 1);
        cf.h = PermGroup::symmetric(3);
        assert!(matches!(
            check_cf_miniature(&cf, Budget::DEFAULT),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn large_centralizer_is_a_precondition_error() {
        let mut cf = default_miniature(Mode::Fast, 1);
        // Sym(6) × ⟨(6 7)⟩ centralizes A × A through the extra transposition
        let mut gens: Vec<Permutation> = PermGroup::symmetric(6)
            .generators()
            .iter()
            .map(|g| g.extend_to(8))
            .collect();
        gens.push(Permutation::parse_cycles(8, "(6 7)").unwrap());
        cf.t = PermGroup::new(gens).unwrap();
        assert!(matches!(
            check_cf_miniature(&cf, Budget::DEFAULT),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn small_prime_needs_force() {
        assert!(matches!(
            check_cf_ingredients(11, false, 0, Budget::DEFAULT),
            Err(Error::Precondition(_))
        ));
        let r = check_cf_ingredients(11, true, 0, Budget::DEFAULT).unwrap();
        assert_eq!(r.claims.len(), 5);
    }
}
