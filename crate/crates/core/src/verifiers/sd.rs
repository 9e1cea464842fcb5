//! Kernel dichotomy for explicit diagonal groups.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::Value;

use super::report::{Provenance, VerificationReport};
use crate::diagonal::SdGroup;
use crate::error::{Budget, Error, Result};
use crate::orbital::{suborbits, OrbitalGraph};
use crate::perm::{PermGroup, Permutation};

/// `N_G(T_0)`: the elements whose factor action fixes component 0.
pub fn first_factor_normalizer(sd: &SdGroup) -> Result<PermGroup> {
    let n = sd.space().size();
    let gens = sd
        .group()
        .generators()
        .iter()
        .map(|g| Ok(g.direct_sum(&sd.factor_action_on_components(g)?)))
        .collect::<Result<Vec<_>>>()?;
    let lifted = PermGroup::new(gens)?.stabilizer(n)?;
    let points: Vec<usize> = (0..n).collect();
    let restricted = lifted
        .generators()
        .iter()
        .map(|g| g.restrict(&points))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(restricted)
}

/// Order of the group of automorphisms induced on `T` by `G_α`.
fn automorphism_part_order(sd: &SdGroup, alpha_stab: &PermGroup) -> Result<u64> {
    let gens = alpha_stab
        .generators()
        .iter()
        .map(|g| {
            let f = sd.factor(g)?;
            Permutation::from_images(f.phi.images().iter().map(|&x| x as usize).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PermGroup::new(gens)?.order_u64().unwrap_or(u64::MAX))
}

/// Checks the dichotomy `G_α^{+[1]} = 1` or `|G_α^{+[1]}| = ℓ+1` (regular
/// on components, inside the coordinate permutations, with `σ ↦ t_{0^{σ⁻¹}}`
/// a homomorphism) at `α = D(1, …, 1)` for the given `β`s, or every suborbit
/// representative when `betas` is `None`.
pub fn check_sd_dichotomy(
    name: &str,
    sd: &SdGroup,
    betas: Option<&[usize]>,
    budget: Budget,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let space = sd.space();
    let group = sd.group();
    let alpha = space.alpha();
    let ell = space.ell();
    let factors = space.factors();

    let socle = space.build_socle()?;
    if !socle.is_subgroup_of(group)? {
        return Err(Error::Precondition("G does not contain the socle".into()));
    }
    let tags = group
        .generators()
        .iter()
        .map(|g| sd.factor_action_on_components(g))
        .collect::<Result<Vec<_>>>()?;
    let top = PermGroup::new(tags.clone())?;
    if factors > 2 && !top.is_primitive()?.is_primitive() {
        return Err(Error::Precondition(
            "G does not act primitively on the simple factors".into(),
        ));
    }

    let mut report = VerificationReport::new("sd");
    report.param("group", name);
    report.param("T_order", space.table().order());
    report.param("ell", ell);
    report.param("degree", space.size());

    report.check(
        "factor action of generators matches their recorded tags",
        tags.as_slice() == sd.generator_tags(),
        Provenance::Derived,
    );
    report.check(
        "G is primitive",
        group.is_primitive()?.is_primitive(),
        Provenance::Derived,
    );
    let m_group = space.build_m()?;
    report.claim(
        "|M| = |Ω|",
        space.size(),
        m_group.order(),
        Provenance::Paper,
    );
    report.check(
        "M_α = 1",
        m_group.stabilizer(alpha)?.is_trivial(),
        Provenance::Paper,
    );

    let alpha_stab = group.stabilizer(alpha)?;
    let aut_order = automorphism_part_order(sd, &alpha_stab)?;
    let top_order = top.order_u64().unwrap_or(u64::MAX);
    report.claim(
        "|G_α| = |top| · |Aut part|",
        top_order as u128 * aut_order as u128,
        alpha_stab.order(),
        Provenance::Paper,
    );
    report.claim(
        "|G| = |Ω| · |G_α|",
        group.order(),
        alpha_stab.order() * space.size(),
        Provenance::Trivial,
    );

    let normalizer = first_factor_normalizer(sd)?;
    report.claim(
        "|G : N_G(T_0)|",
        factors,
        group.order() / normalizer.order(),
        Provenance::Paper,
    );
    let h_alpha = normalizer.stabilizer(alpha)?;

    let subs = suborbits(group, alpha)?;
    report.claim(
        "suborbit lengths sum to |Ω|",
        space.size(),
        subs.iter().map(|s| s.length).sum::<usize>(),
        Provenance::Trivial,
    );
    let chosen: Vec<usize> = match betas {
        Some(b) => b.to_vec(),
        None => subs
            .iter()
            .filter(|s| !s.trivial)
            .map(|s| s.representative)
            .collect(),
    };
    let t = space.table();
    let mut branches = BTreeMap::new();
    let mut third_branch = 0;
    for &beta in &chosen {
        if beta == alpha || beta >= space.size() {
            return Err(Error::InvalidArgument(format!(
                "β = {beta} must be a point other than α"
            )));
        }
        let tag = format!("β={beta}");
        let graph = OrbitalGraph::with_stabilizer(group, alpha, beta, alpha_stab.clone())?;
        let kernel = graph.plus_kernel()?;
        let h_graph = OrbitalGraph::with_stabilizer(&normalizer, alpha, beta, h_alpha.clone())?;
        report.claim(
            format!("{tag}: |N_G(T_0)_α^{{+[1]}}|"),
            1,
            h_graph.plus_kernel()?.order(),
            Provenance::Paper,
        );
        if kernel.is_trivial() {
            branches.insert(beta.to_string(), Value::from(1));
            report.claim(format!("{tag}: |G_α^{{+[1]}}|"), 1, 1, Provenance::Paper);
            continue;
        }
        let elements = kernel.elements(budget)?;
        let factored = elements
            .iter()
            .map(|g| sd.factor(g))
            .collect::<Result<Vec<_>>>()?;
        let id = Permutation::identity(factors);
        let meets_aut = factored.iter().filter(|f| f.sigma == id).count();
        let c1 = report.claim(
            format!("{tag}: |G_α^{{+[1]}} ∩ Aut(T)|"),
            1,
            meets_aut,
            Provenance::Paper,
        );
        let pure = factored
            .iter()
            .all(|f| f.phi.is_identity() && f.m.iter().all(|&x| x == 0));
        let c2 = report.check(
            format!("{tag}: G_α^{{+[1]}} ≤ Sym(ℓ+1)"),
            pure,
            Provenance::Paper,
        );
        let c3 = report.claim(
            format!("{tag}: |G_α^{{+[1]}}|"),
            factors,
            elements.len(),
            Provenance::Paper,
        );
        let mut starts: Vec<usize> = factored.iter().map(|f| f.sigma.apply(0)).collect();
        starts.sort_unstable();
        starts.dedup();
        let c4 = report.check(
            format!("{tag}: G_α^{{+[1]}} regular on components"),
            starts.len() == factors && elements.len() == factors,
            Provenance::Paper,
        );
        let coords = space.decode(beta);
        let w = |s: &Permutation| coords[s.inverse().apply(0)];
        let homomorphic = factored.iter().all(|a| {
            factored
                .iter()
                .all(|b| t.mul(w(&a.sigma), w(&b.sigma)) == w(&(&a.sigma * &b.sigma)))
        });
        let c5 = report.check(
            format!("{tag}: σ ↦ t_{{0^{{σ⁻¹}}}} is a homomorphism"),
            homomorphic,
            Provenance::Paper,
        );
        let fixes_zero = factored.iter().filter(|f| f.sigma.apply(0) == 0).count();
        report.claim(
            format!("{tag}: |N_G(T_0) ∩ G_α^{{+[1]}}|"),
            1,
            fixes_zero,
            Provenance::Paper,
        );
        if c1 && c2 && c3 && c4 && c5 {
            branches.insert(beta.to_string(), Value::from(2));
        } else {
            third_branch += 1;
            branches.insert(beta.to_string(), Value::from(0));
        }
    }
    report.claim(
        "β outside both branches",
        0,
        third_branch,
        Provenance::Paper,
    );
    report.param("betas_checked", chosen.len());
    report.param("branches", Value::Object(branches.into_iter().collect()));
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{diag, GroupSpec};

    #[test]
    fn two_factor_diagonal() {
        let sd = diag(&GroupSpec::Alt(5), 2, 0, Budget::DEFAULT).unwrap();
        let r = check_sd_dichotomy("Diag(Alt(5),2)", &sd, None, Budget::DEFAULT).unwrap();
        assert!(r.pass, "{}", r.to_text());
    }
}
