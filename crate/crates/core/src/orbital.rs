//! Orbital graphs, suborbits, local groups and neighbourhood kernels.

use std::collections::VecDeque;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Degrees above this are refused when materializing arcs.
pub const MAX_GRAPH_DEGREE: usize = 100_000;

/// An orbit of the point stabilizer `G_α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suborbit {
    /// Smallest point of the orbit.
    pub representative: usize,
    pub length: usize,
    /// The orbit `{α}`.
    pub trivial: bool,
}

/// Suborbits of a transitive group at `alpha`: `{α}` first, the rest by smallest point.
pub fn suborbits(group: &PermGroup, alpha: usize) -> Result<Vec<Suborbit>> {
    if alpha >= group.degree() {
        return Err(Error::PointOutOfRange {
            point: alpha,
            degree: group.degree(),
        });
    }
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let stab = group.stabilizer(alpha)?;
    let mut out: Vec<Suborbit> = stab
        .orbits()
        .into_iter()
        .map(|o| Suborbit {
            representative: *o.iter().min().unwrap(),
            length: o.len(),
            trivial: o.contains(&alpha),
        })
        .collect();
    out.sort_by_key(|s| (!s.trivial, s.representative));
    Ok(out)
}

/// The digraph on `Ω` whose arcs are the `G`-orbit of `(α, β)`.
#[derive(Clone, Debug)]
pub struct OrbitalGraph {
    group: PermGroup,
    alpha: usize,
    beta: usize,
    alpha_stabilizer: PermGroup,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
}

impl OrbitalGraph {
    pub fn new(group: &PermGroup, alpha: usize, beta: usize) -> Result<Self> {
        if alpha >= group.degree() {
            return Err(Error::PointOutOfRange {
                point: alpha,
                degree: group.degree(),
            });
        }
        let stab = group.stabilizer(alpha)?;
        Self::with_stabilizer(group, alpha, beta, stab)
    }

    /// As [`OrbitalGraph::new`], reusing a precomputed `G_α`.
    pub fn with_stabilizer(
        group: &PermGroup,
        alpha: usize,
        beta: usize,
        alpha_stabilizer: PermGroup,
    ) -> Result<Self> {
        let n = group.degree();
        for p in [alpha, beta] {
            if p >= n {
                return Err(Error::PointOutOfRange {
                    point: p,
                    degree: n,
                });
            }
        }
        if alpha == beta {
            return Err(Error::InvalidArgument(
                "an orbital graph needs two distinct points".into(),
            ));
        }
        if n > MAX_GRAPH_DEGREE {
            return Err(Error::Infeasible {
                what: format!("orbital graph on {n} vertices"),
                budget: MAX_GRAPH_DEGREE as u64,
            });
        }
        if !group.is_transitive() {
            return Err(Error::NotTransitive);
        }
        let mut first: Vec<u32> = alpha_stabilizer
            .orbit(beta)
            .into_iter()
            .map(|x| x as u32)
            .collect();
        first.sort_unstable();

        // Γ⁺(γ^g) = Γ⁺(γ)^g, spread along a breadth-first tree from α
        let mut out_adj: Vec<Option<Vec<u32>>> = vec![None; n];
        out_adj[alpha] = Some(first);
        let mut queue = VecDeque::from([alpha]);
        while let Some(x) = queue.pop_front() {
            for g in group.generators() {
                let y = g.apply(x);
                if out_adj[y].is_none() {
                    let mut nbrs: Vec<u32> = out_adj[x]
                        .as_ref()
                        .unwrap()
                        .iter()
                        .map(|&z| g.apply(z as usize) as u32)
                        .collect();
                    nbrs.sort_unstable();
                    out_adj[y] = Some(nbrs);
                    queue.push_back(y);
                }
            }
        }
        let out_adj: Vec<Vec<u32>> = out_adj.into_iter().map(Option::unwrap).collect();
        let mut in_adj = vec![Vec::new(); n];
        for (x, nbrs) in out_adj.iter().enumerate() {
            for &y in nbrs {
                in_adj[y as usize].push(x as u32);
            }
        }
        Ok(OrbitalGraph {
            group: group.clone(),
            alpha,
            beta,
            alpha_stabilizer,
            out_adj,
            in_adj,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    /// Out-valency, equal to the subdegree `|β^{G_α}|`.
    pub fn valency(&self) -> usize {
        self.out_adj[self.alpha].len()
    }

    pub fn arc_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_adj[v].iter().map(|&x| x as usize)
    }

    pub fn in_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.in_adj[v].iter().map(|&x| x as usize)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn is_arc(&self, x: usize, y: usize) -> bool {
        self.out_adj[x].binary_search(&(y as u32)).is_ok()
    }

    pub fn alpha_stabilizer(&self) -> &PermGroup {
        &self.alpha_stabilizer
    }

    /// `G_{αβ}`.
    pub fn arc_stabilizer(&self) -> Result<PermGroup> {
        self.alpha_stabilizer.stabilizer(self.beta)
    }

    /// True iff `(β, α)` is also an arc.
    pub fn is_self_paired(&self) -> bool {
        self.is_arc(self.beta, self.alpha)
    }

    /// `G_α^{+[1]}`: the elements of `G_α` fixing every out-neighbour of `α`.
    pub fn plus_kernel(&self) -> Result<PermGroup> {
        iterated_stabilizer(&self.alpha_stabilizer, self.out_neighbors(self.alpha))
    }

    /// `G_β^{-[1]}`: the elements of `G_β` fixing every in-neighbour of `β`.
    pub fn minus_kernel(&self) -> Result<PermGroup> {
        let gb = self.group.stabilizer(self.beta)?;
        iterated_stabilizer(&gb, self.in_neighbors(self.beta))
    }

    /// Permutation group induced by `G_α` on `Γ⁺(α)`, on points `0..d` in sorted order.
    pub fn local_group(&self) -> Result<PermGroup> {
        let points: Vec<usize> = self.out_neighbors(self.alpha).collect();
        let gens = self
            .alpha_stabilizer
            .generators()
            .iter()
            .map(|g| g.restrict(&points))
            .collect::<Result<Vec<Permutation>>>()?;
        PermGroup::new(gens)
    }

    /// `(weakly connected, strongly connected)`.
    pub fn is_connected(&self) -> (bool, bool) {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = n;
        for x in 0..n {
            for y in self.out_neighbors(x) {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                    components -= 1;
                }
            }
        }
        let weak = components <= 1;
        let forward = reach_count(n, self.alpha, |v| &self.out_adj[v]);
        let backward = reach_count(n, self.alpha, |v| &self.in_adj[v]);
        (weak, forward == n && backward == n)
    }
}

fn reach_count<'a, F: Fn(usize) -> &'a Vec<u32>>(n: usize, start: usize, next: F) -> usize {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut count = 1;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in next(x) {
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                stack.push(y as usize);
            }
        }
    }
    count
}

/// Pointwise stabilizer of `points`, one base change per point that is still moved.
fn iterated_stabilizer(
    group: &PermGroup,
    points: impl Iterator<Item = usize>,
) -> Result<PermGroup> {
    let mut k = group.clone();
    for p in points {
        if k.is_trivial() {
            break;
        }
        if k.generators().iter().any(|g| !g.fixes(p)) {
            k = k.stabilizer(p)?;
        }
    }
    Ok(k)
}

/// Order of `G_α^{+[1]}` computed by filtering all elements of `G_α`.
pub fn plus_kernel_by_enumeration(
    graph: &OrbitalGraph,
    budget: crate::error::Budget,
) -> Result<BigUint> {
    let nbrs: Vec<usize> = graph.out_neighbors(graph.alpha()).collect();
    let mut count = 0u64;
    graph.alpha_stabilizer().for_each_element(budget, |g| {
        if nbrs.iter().all(|&x| g.fixes(x)) {
            count += 1;
        }
        true
    })?;
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    fn dihedral(n: usize) -> PermGroup {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        PermGroup::new(vec![
            Permutation::from_images(rot).unwrap(),
            Permutation::from_images(refl).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn sym3_complete_digraph() {
        let g = OrbitalGraph::new(&PermGroup::symmetric(3), 0, 1).unwrap();
        assert_eq!(g.valency(), 2);
        assert_eq!(g.arc_count(), 6);
        assert!(g.is_self_paired());
        assert!(g.plus_kernel().unwrap().is_trivial());
        assert_eq!(g.local_group().unwrap().order_u64(), Some(2));
        assert_eq!(g.is_connected(), (true, true));
    }

    #[test]
    fn dihedral_cycle() {
        let g = OrbitalGraph::new(&dihedral(7), 0, 1).unwrap();
        assert_eq!(g.valency(), 2);
        assert_eq!(g.local_group().unwrap().order_u64(), Some(2));
        let lens: Vec<usize> = suborbits(&dihedral(7), 0)
            .unwrap()
            .iter()
            .map(|s| s.length)
            .collect();
        assert_eq!(lens, vec![1, 2, 2, 2]);
    }

    #[test]
    fn directed_triangle() {
        let c3 = PermGroup::new(vec![p(3, "(0 1 2)")]).unwrap();
        let g = OrbitalGraph::new(&c3, 0, 1).unwrap();
        assert!(!g.is_self_paired());
        assert_eq!(g.is_connected(), (true, true));
    }

    #[test]
    fn imprimitive_orbital_is_disconnected() {
        let c4 = PermGroup::new(vec![p(4, "(0 1 2 3)")]).unwrap();
        let g = OrbitalGraph::new(&c4, 0, 2).unwrap();
        assert_eq!(g.is_connected(), (false, false));
    }

    #[test]
    fn rejects_loops_and_intransitive_groups() {
        assert!(OrbitalGraph::new(&PermGroup::symmetric(3), 1, 1).is_err());
        let g = PermGroup::new(vec![p(4, "(0 1)")]).unwrap();
        assert!(matches!(
            OrbitalGraph::new(&g, 0, 1),
            Err(Error::NotTransitive)
        ));
    }

    #[test]
    fn suborbits_flag_the_trivial_one() {
        let s = suborbits(&PermGroup::symmetric(3), 0).unwrap();
        assert_eq!(
            s,
            vec![
                Suborbit {
                    representative: 0,
                    length: 1,
                    trivial: true
                },
                Suborbit {
                    representative: 1,
                    length: 2,
                    trivial: false
                },
            ]
        );
    }
}
