//! Two-point stabilizer `P × V` and kernel `V` in the affine example.

use std::collections::HashSet;
use std::time::Instant;

use super::report::{Provenance, VerificationReport};
use super::Mode;
use crate::constructions::affine_module;
use crate::diagonal::DiagonalSpace;
use crate::error::{Budget, Error, Result};
use crate::function_model::{
    build_b_example42, closed_under_conjugation, coordinate_group,
    kernel_to_target_is_homomorphism, plus_kernel_scan, scan_inner_times_top, FunctionSpace,
    HomomorphismSpec, ImplicitElement,
};
use crate::orbital::OrbitalGraph;
use crate::perm::{Automorphism, ElementTable, PermGroup, Permutation};

/// Largest `|Ω|` for which the explicit permutation group is also built.
pub const EXPLICIT_LIMIT: u128 = 100_000;

#[derive(Clone, Debug)]
pub struct Example42 {
    pub p: u64,
    pub k: u32,
    pub r: u64,
    pub t_name: String,
    pub t: PermGroup,
    /// Generator of `P`, an element of order `p` in `T`.
    pub p_generator: Permutation,
    pub mode: Mode,
    pub threads: usize,
}

pub fn check_example42(ex: &Example42, budget: Budget) -> Result<VerificationReport> {
    let started = Instant::now();
    let module = affine_module(ex.p, ex.k, ex.r, budget)?;
    let t = ElementTable::new(&ex.t)?;
    let g = t
        .index_of(&ex.p_generator)
        .ok_or_else(|| Error::Precondition("the generator of P is not in T".into()))?;
    let p_elements = t.subgroup_closure(&[g]);
    if p_elements.len() as u64 != ex.p {
        return Err(Error::Precondition(format!(
            "P has order {}, not {}",
            p_elements.len(),
            ex.p
        )));
    }
    let mut cent = t.centralizer(&[g]);
    cent.sort_unstable();
    let mut p_sorted = p_elements.clone();
    p_sorted.sort_unstable();
    if cent != p_sorted {
        return Err(Error::Precondition("C_T(P) ≠ P".into()));
    }

    let coords = ElementTable::new(&module.translations)?;
    let space = FunctionSpace::new(t, coords);
    let n = space.x_size();
    let r_aut = Automorphism::from_normalizing(&space.coords, &module.r_generator)?;
    let l_group = coordinate_group(&space, &[r_aut])?;
    let p = ex.p as u32;
    // w(v) = g^{v₀}, v₀ the first coordinate of the translation vector
    let images = (0..n as u32)
        .map(|v| {
            let v0 = space.coords.element(v).apply(0) as u32 % p;
            (0..v0).fold(space.target.identity(), |acc, _| space.target.mul(acc, g))
        })
        .collect();
    let w = HomomorphismSpec::new(&space, images, budget)?;
    let b = build_b_example42(&space, &w, &p_elements)?;
    let tg = &space.target;

    let mut report = VerificationReport::new("ex42");
    report.param("p", ex.p);
    report.param("k", ex.k);
    report.param("r", ex.r);
    report.param("T", ex.t_name.as_str());
    report.param("P", ex.p_generator.to_string());
    report.param("mode", ex.mode.to_string());
    report.param("|H|", l_group.order().to_string());

    report.check("b(x₀) = 1", b.value(0) == tg.identity(), Provenance::Paper);
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

    let r_elements: Vec<Permutation> = l_group.stabilizer(0)?.elements(budget)?;
    let in_tr = scan_inner_times_top(&space, &b, &r_elements, ex.threads, budget)?;
    let p_set: HashSet<u32> = p_elements.iter().copied().collect();
    let inside_p = in_tr
        .elements
        .iter()
        .all(|x| x.sigma.is_identity() && x.phi.as_inner(tg).is_some_and(|s| p_set.contains(&s)));
    report.claim("|G_αβ ∩ (T × R)|", ex.p, in_tr.order(), Provenance::Paper);
    report.check(
        "G_αβ ∩ (T × R) = P",
        inside_p && in_tr.order() as u64 == ex.p,
        Provenance::Paper,
    );

    let ker_w: HashSet<u32> = w.kernel().into_iter().collect();
    let preserving = r_elements
        .iter()
        .filter(|h| {
            ker_w
                .iter()
                .all(|&v| ker_w.contains(&(h.apply(v as usize) as u32)))
        })
        .count();
    report.claim(
        "elements of R preserving Ker(w)",
        1,
        preserving,
        Provenance::Paper,
    );

    let fast: Vec<ImplicitElement> = v_tops
        .iter()
        .flat_map(|v| in_tr.elements.iter().map(|x| space.compose(v, x)))
        .collect();
    let arc = match ex.mode {
        Mode::Fast => fast,
        Mode::Oracle => {
            let all_l = l_group.elements(budget)?;
            let full = scan_inner_times_top(&space, &b, &all_l, ex.threads, budget)?;
            let fast_set: HashSet<&ImplicitElement> = fast.iter().collect();
            let agree =
                full.order() == fast.len() && full.elements.iter().all(|x| fast_set.contains(x));
            report.check(
                "full scan of ι(T) × H agrees with the factorization",
                agree,
                Provenance::Derived,
            );
            report.param("scanned", full.scanned);
            full.elements
        }
    };
    let pv = ex.p.pow(ex.k);
    report.claim("|G_αβ| = |P × V|", pv * ex.p, arc.len(), Provenance::Paper);

    let mut alpha_gens: Vec<ImplicitElement> = space
        .target
        .generator_indices()
        .into_iter()
        .map(|t| space.inner(t))
        .collect();
    alpha_gens.extend(l_group.generators().iter().map(|s| space.top(s.clone())));
    let ks = plus_kernel_scan(&space, &b, &alpha_gens, &arc, budget)?;
    report.param("orbit_of_beta", ks.orbit_len);
    report.claim("|G_α^{+[1]}| = |V|", pv, ks.kernel.len(), Provenance::Paper);
    let v_set: HashSet<&ImplicitElement> = v_tops.iter().collect();
    report.check(
        "G_α^{+[1]} = V",
        ks.kernel.len() == n && ks.kernel.iter().all(|x| v_set.contains(x)),
        Provenance::Paper,
    );
    report.claim(
        "|G_αβ : G_α^{+[1]}| = |P|",
        ex.p,
        arc.len() / ks.kernel.len().max(1),
        Provenance::Paper,
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
    report.check(
        "G_α^{+[1]} ⊴ G_αβ",
        closed_under_conjugation(&space, &ks.kernel, &arc),
        Provenance::Trivial,
    );

    match space.omega_size() {
        Some(size) if size <= EXPLICIT_LIMIT => {
            let (arc_order, kernel_order) = explicit_orders(&space, &l_group, b.values())?;
            report.param("explicit_degree", size.to_string());
            report.claim(
                "explicit |G_αβ| agrees",
                arc.len(),
                arc_order,
                Provenance::Derived,
            );
            report.claim(
                "explicit |G_α^{+[1]}| agrees",
                ks.kernel.len(),
                kernel_order,
                Provenance::Derived,
            );
        }
        _ => report.param("explicit_degree", "skipped"),
    }
    Ok(report.finish(started))
}

/// `|G_αβ|` and `|G_α^{+[1]}|` in `T^X ⋊ L` acting on the cosets of the diagonal.
fn explicit_orders(
    space: &FunctionSpace,
    l_group: &PermGroup,
    beta: &[u32],
) -> Result<(String, String)> {
    let n = space.x_size();
    let ds = DiagonalSpace::new(space.target.clone(), n - 1)?;
    let mut gens = ds.build_socle()?.generators().to_vec();
    for s in l_group.generators() {
        gens.push(ds.perm_of_top(s)?);
    }
    let g = PermGroup::new(gens)?;
    let graph = OrbitalGraph::new(&g, ds.alpha(), ds.encode(beta))?;
    Ok((
        graph.arc_stabilizer()?.order().to_string(),
        graph.plus_kernel()?.order().to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn miniature(k: u32, r: u64, mode: Mode) -> VerificationReport {
        let ex = Example42 {
            p: 2,
            k,
            r,
            t_name: "Sym(3)".into(),
            t: PermGroup::symmetric(3),
            p_generator: Permutation::parse_cycles(3, "(0 1)").unwrap(),
            mode,
            threads: 1,
        };
        check_example42(&ex, Budget::DEFAULT).unwrap()
    }

    #[test]
    fn smallest_parameters_in_both_modes() {
        for mode in [Mode::Fast, Mode::Oracle] {
            let r = miniature(2, 3, mode);
            assert!(r.pass, "{}", r.to_text());
        }
    }

    #[test]
    fn cube_with_seven() {
        let r = miniature(3, 7, Mode::Oracle);
        assert!(r.pass, "{}", r.to_text());
    }

    #[test]
    fn large_centralizer_is_rejected() {
        // C_{Sym(4)}((0 1)) = ⟨(0 1), (2 3)⟩ ≠ P
        let ex = Example42 {
            p: 2,
            k: 2,
            r: 3,
            t_name: "Sym(4)".into(),
            t: PermGroup::symmetric(4),
            p_generator: Permutation::parse_cycles(4, "(0 1)").unwrap(),
            mode: Mode::Fast,
            threads: 1,
        };
        assert!(matches!(
            check_example42(&ex, Budget::DEFAULT),
            Err(Error::Precondition(_))
        ));
    }
}
