use super::{PermGroup, Permutation};
use crate::error::{Error, Result};

/// Outcome of a primitivity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primitivity {
    Primitive,
    /// A nontrivial block containing point 0 (sorted).
    Imprimitive {
        block: Vec<usize>,
    },
    NotTransitive,
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Primitivity::Primitive)
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[x] as usize;
            self.parent[x] = self.parent[up];
            x = up;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep as u32;
        Some((keep, drop))
    }
}

/// Smallest block of imprimitivity containing `a` and `b` (Atkinson's merge).
pub fn minimal_block(gens: &[Permutation], degree: usize, a: usize, b: usize) -> Vec<usize> {
    let mut uf = UnionFind::new(degree);
    let mut queue = Vec::new();
    if let Some(pair) = uf.union(a, b) {
        queue.push(pair);
    }
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            if let Some(pair) = uf.union(g.apply(x), g.apply(y)) {
                queue.push(pair);
            }
        }
    }
    let root = uf.find(a);
    (0..degree).filter(|&p| uf.find(p) == root).collect()
}

impl PermGroup {
    /// Decides primitivity by computing the minimal block of `{0, δ}` for one δ
    /// in each nontrivial orbit of the stabilizer of 0.
    pub fn is_primitive(&self) -> Result<Primitivity> {
        let n = self.degree();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "primitivity needs degree at least 2".into(),
            ));
        }
        if !self.is_transitive() {
            return Ok(Primitivity::NotTransitive);
        }
        let stab = self.stabilizer(0)?;
        for orbit in stab.orbits() {
            let delta = orbit[0];
            if delta == 0 {
                continue;
            }
            let block = minimal_block(self.generators(), n, 0, delta);
            if block.len() < n {
                return Ok(Primitivity::Imprimitive { block });
            }
        }
        Ok(Primitivity::Primitive)
    }
}
