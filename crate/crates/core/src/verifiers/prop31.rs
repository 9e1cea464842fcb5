//! Groups with a regular normal subgroup have trivial neighbourhood kernels.

use std::time::Instant;

use super::report::{Provenance, VerificationReport};
use crate::error::{Budget, Error, Result};
use crate::orbital::{suborbits, OrbitalGraph};
use crate::perm::{centralizer_by_enumeration, PermGroup};

/// For every nontrivial suborbit at `alpha`: the orbital graph is connected,
/// `G_α^{+[1]} = 1`, the elements `n_δ` (`δ ∈ Γ⁺(α)`) generate `N`, and
/// `G_{αβ} = C_{G_α}(n_β)`.
pub fn check_prop31(
    name: &str,
    group: &PermGroup,
    normal: &PermGroup,
    alpha: usize,
    budget: Budget,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let n = group.degree();
    if !normal.is_subgroup_of(group)? || !group.is_normal(normal)? {
        return Err(Error::Precondition(
            "N is not a normal subgroup of G".into(),
        ));
    }
    if !normal.is_transitive() || normal.order_u64() != Some(n as u64) {
        return Err(Error::Precondition("N is not regular".into()));
    }
    let mut report = VerificationReport::new("prop31");
    report.param("group", name);
    report.param("degree", n);
    report.param("alpha", alpha);
    report.claim("|G|", group.order(), group.order(), Provenance::Derived);
    report.claim("|N| = degree", n, normal.order(), Provenance::Trivial);

    let n_chain = normal.with_base_prefix(&[alpha])?;
    let n_elt = |beta: usize| {
        n_chain
            .transversal_element(0, beta)
            .expect("N is transitive")
    };
    let primitive = group.is_primitive()?.is_primitive();
    report.param("primitive", primitive);

    let subs = suborbits(group, alpha)?;
    let alpha_stab = group.stabilizer(alpha)?;
    for s in subs.iter().filter(|s| !s.trivial) {
        let beta = s.representative;
        let graph = OrbitalGraph::with_stabilizer(group, alpha, beta, alpha_stab.clone())?;
        let tag = format!("β={beta} (d={})", s.length);
        let (weak, strong) = graph.is_connected();
        report.check(format!("{tag}: Γ connected"), weak, Provenance::Paper);
        if primitive {
            report.claim(
                format!("{tag}: weak and strong connectivity agree"),
                weak,
                strong,
                Provenance::Trivial,
            );
        }
        let kernel = graph.plus_kernel()?;
        report.claim(
            format!("{tag}: |G_α^{{+[1]}}|"),
            1,
            kernel.order(),
            Provenance::Paper,
        );
        let gens: Vec<_> = graph.out_neighbors(alpha).map(n_elt).collect();
        let generated = PermGroup::new(gens)?;
        report.claim(
            format!("{tag}: |⟨n_δ : δ ∈ Γ⁺(α)⟩| = |N|"),
            normal.order(),
            generated.order(),
            Provenance::Paper,
        );
        let arc = graph.arc_stabilizer()?;
        let cent = centralizer_by_enumeration(&alpha_stab, &[n_elt(beta)], budget)?;
        report.claim(
            format!("{tag}: |G_αβ| = |C_{{G_α}}(n_β)|"),
            cent.order(),
            arc.order(),
            Provenance::Derived,
        );
    }
    Ok(report.finish(started))
}
