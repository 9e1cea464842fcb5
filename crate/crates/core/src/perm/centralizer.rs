//! Centralizer of a subgroup inside a permutation group.
//!
//! An element centralizing `S` is determined by the images of one
//! representative per `S`-orbit: if `x^g = z` then `(x^w)^g = z^w` for every
//! word `w` in the generators of `S`. The search assigns representatives one
//! orbit at a time, rejects assignments that break commutation, and prunes
//! with the base images of the ambient group's stabilizer chain.

use std::collections::VecDeque;

use super::{PermGroup, Permutation};
use crate::error::{Budget, Error, Result};

const UNSET: u32 = u32::MAX;

struct OrbitPlan {
    /// Points in BFS order; `parent[i] = (index of parent point, generator)`.
    points: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
}

struct Search<'a> {
    group: &'a PermGroup,
    sgens: &'a [Permutation],
    orbit_size: Vec<usize>,
    plans: Vec<OrbitPlan>,
    base: Vec<usize>,
    image: Vec<u32>,
    used: Vec<bool>,
    nodes: u64,
    budget: Budget,
    found: Vec<Permutation>,
}

impl<'a> Search<'a> {
    fn assign_orbit(&mut self, plan: usize, z: usize) -> Option<Vec<usize>> {
        let mut assigned = Vec::new();
        let ok = {
            let plan = &self.plans[plan];
            let mut ok = true;
            for (i, &y) in plan.points.iter().enumerate() {
                let img = match plan.parent[i] {
                    None => z,
                    Some((pi, s)) => self.sgens[s].apply(self.image[plan.points[pi]] as usize),
                };
                if self.used[img] {
                    ok = false;
                    break;
                }
                self.used[img] = true;
                self.image[y] = img as u32;
                assigned.push(y);
            }
            if ok {
                'outer: for &y in &plan.points {
                    for s in self.sgens {
                        let lhs = self.image[s.apply(y)] as usize;
                        let rhs = s.apply(self.image[y] as usize);
                        if lhs != rhs {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            ok
        };
        if ok {
            Some(assigned)
        } else {
            self.undo(&assigned);
            None
        }
    }

    fn undo(&mut self, assigned: &[usize]) {
        for &y in assigned {
            self.used[self.image[y] as usize] = false;
            self.image[y] = UNSET;
        }
    }

    /// Can the partial map still extend to an element of the ambient group?
    fn chain_feasible(&self) -> bool {
        let mut imgs: Vec<usize> = Vec::new();
        for &b in &self.base {
            if self.image[b] == UNSET {
                break;
            }
            imgs.push(self.image[b] as usize);
        }
        for i in 0..imgs.len() {
            let Some(u) = self.group.transversal_element(i, imgs[i]) else {
                return false;
            };
            let uinv = u.inverse();
            for img in imgs.iter_mut().skip(i + 1) {
                *img = uinv.apply(*img);
            }
        }
        true
    }

    fn run(&mut self, depth: usize) -> Result<()> {
        if depth == self.plans.len() {
            let images: Vec<usize> = self.image.iter().map(|&x| x as usize).collect();
            let g = Permutation::from_images(images)?;
            if self.group.contains_unchecked(&g) {
                self.found.push(g);
            }
            return Ok(());
        }
        let size = self.plans[depth].points.len();
        for z in 0..self.image.len() {
            if self.used[z] || self.orbit_size[z] != size {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget.0 {
                return Err(self.budget.exceeded("centralizer backtrack"));
            }
            if let Some(assigned) = self.assign_orbit(depth, z) {
                if self.chain_feasible() {
                    self.run(depth + 1)?;
                }
                self.undo(&assigned);
            }
        }
        Ok(())
    }
}

/// `C_G(S)` for `S = ⟨sgens⟩ ≤ G`.
///
/// Falls back to enumerating `G` when the backtrack exceeds the budget but
/// `|G|` does not.
pub fn centralizer_of_subgroup(
    group: &PermGroup,
    sgens: &[Permutation],
    budget: Budget,
) -> Result<PermGroup> {
    let n = group.degree();
    for s in sgens {
        if !group.contains(s)? {
            return Err(Error::NotSubgroup(format!(
                "generator {s} is not in the ambient group"
            )));
        }
    }
    match centralizer_backtrack(group, sgens, budget) {
        Err(Error::Infeasible { .. }) if group.order_u64().is_some_and(|o| o <= budget.0) => {
            centralizer_by_enumeration(group, sgens, budget)
        }
        other => other,
    }
    .map(|c| {
        if c.degree() == n {
            c
        } else {
            PermGroup::trivial(n)
        }
    })
}

fn centralizer_backtrack(
    group: &PermGroup,
    sgens: &[Permutation],
    budget: Budget,
) -> Result<PermGroup> {
    let n = group.degree();
    let base = group.base();
    let mut base_rank = vec![usize::MAX; n];
    for (i, &b) in base.iter().enumerate() {
        base_rank[b] = i;
    }
    let mut seen = vec![false; n];
    let mut plans = Vec::new();
    let mut orbit_size = vec![0; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // root each orbit at its earliest base point so pruning bites early
        let mut members = vec![start];
        seen[start] = true;
        let mut q = VecDeque::from([start]);
        while let Some(x) = q.pop_front() {
            for s in sgens {
                let y = s.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    q.push_back(y);
                }
            }
        }
        let root = *members.iter().min_by_key(|&&x| (base_rank[x], x)).unwrap();
        let mut points = vec![root];
        let mut parent = vec![None];
        let mut index = std::collections::HashMap::from([(root, 0usize)]);
        let mut q = VecDeque::from([root]);
        while let Some(x) = q.pop_front() {
            for (si, s) in sgens.iter().enumerate() {
                let y = s.apply(x);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                    e.insert(points.len());
                    parent.push(Some((index[&x], si)));
                    points.push(y);
                    q.push_back(y);
                }
            }
        }
        for &x in &points {
            orbit_size[x] = points.len();
        }
        plans.push(OrbitPlan { points, parent });
    }
    plans.sort_by_key(|p| {
        p.points
            .iter()
            .map(|&x| base_rank[x])
            .min()
            .unwrap_or(usize::MAX)
    });
    let mut search = Search {
        group,
        sgens,
        orbit_size,
        plans,
        base,
        image: vec![UNSET; n],
        used: vec![false; n],
        nodes: 0,
        budget,
        found: Vec::new(),
    };
    search.run(0)?;
    let gens: Vec<Permutation> = search
        .found
        .into_iter()
        .filter(|g| !g.is_identity())
        .collect();
    if gens.is_empty() {
        Ok(PermGroup::trivial(n))
    } else {
        PermGroup::new(gens)
    }
}

/// Reference path: test every element of `G`.
pub fn centralizer_by_enumeration(
    group: &PermGroup,
    sgens: &[Permutation],
    budget: Budget,
) -> Result<PermGroup> {
    let mut gens = Vec::new();
    group.for_each_element(budget, |g| {
        if !g.is_identity() && sgens.iter().all(|s| s.commutes_with(g)) {
            gens.push(g.clone());
        }
        true
    })?;
    if gens.is_empty() {
        Ok(PermGroup::trivial(group.degree()))
    } else {
        PermGroup::new(gens)
    }
}
