use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

/// A bijection of `0..degree`, stored as its image sequence.
///
/// Products follow the right-action convention: `p * q` applies `p` first and
/// then `q`, so `x^(pq) = (x^p)^q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > u32::MAX as usize {
            return Err(Error::InvalidPermutation("degree too large".into()));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "image sequence is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Builds a permutation from an image table already known to be a bijection.
    #[allow(dead_code)]
    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!({
            let mut seen = vec![false; images.len()];
            images.iter().all(|&x| {
                let fresh = !seen[x as usize];
                seen[x as usize] = true;
                fresh
            })
        });
        Permutation { images }
    }

    /// Product of the given cycles, applied left to right.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut acc = Permutation::identity(degree);
        for cycle in cycles {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            let mut seen = std::collections::HashSet::new();
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if !seen.insert(x) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} repeated inside one cycle"
                    )));
                }
                images[x] = cycle[(i + 1) % cycle.len()] as u32;
            }
            acc = &acc * &Permutation { images };
        }
        Ok(acc)
    }

    /// Parses disjoint-cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
    /// Commas are accepted as separators inside a cycle.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b' ' | b'\t' => i += 1,
                b'(' => {
                    let start = i;
                    let close = text[i..].find(')').ok_or_else(|| Error::Parse {
                        position: start,
                        message: "unclosed cycle".into(),
                    })? + i;
                    let mut cycle = Vec::new();
                    for tok in text[i + 1..close]
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|t| !t.is_empty())
                    {
                        let point = tok.parse::<usize>().map_err(|_| Error::Parse {
                            position: start,
                            message: format!("bad point '{tok}'"),
                        })?;
                        cycle.push(point);
                    }
                    if !cycle.is_empty() {
                        cycles.push(cycle);
                    }
                    i = close + 1;
                }
                _ => {
                    return Err(Error::Parse {
                        position: i,
                        message: format!("unexpected character '{}'", bytes[i] as char),
                    })
                }
            }
        }
        Permutation::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self * other)
    }

    /// Writes `self * other` into `out` without allocating.
    #[inline]
    pub(crate) fn compose_into(&self, other: &Permutation, out: &mut Permutation) {
        out.images.clear();
        out.images
            .extend(self.images.iter().map(|&x| other.images[x as usize]));
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn fixes(&self, point: usize) -> bool {
        self.images[point] as usize == point
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i)
    }

    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i)
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[x as usize];
        }
        Permutation { images }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| other.images[x as usize] == self.images[other.images[i] as usize])
    }

    /// `self⁻¹ · other⁻¹ · self · other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        &(&self.inverse() * &other.inverse()) * &(self * other)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.fixes(start) {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> BigUint {
        self.cycles().iter().fold(BigUint::from(1u32), |acc, c| {
            acc.lcm(&BigUint::from(c.len()))
        })
    }

    /// Element order as a machine integer; `None` when it does not fit.
    pub fn order_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for c in self.cycles() {
            acc = acc.checked_mul(c.len() as u64 / acc.gcd(&(c.len() as u64)))?;
        }
        Some(acc)
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let mut images: Vec<u32> = (0..self.degree() as u32).collect();
        for cycle in self.cycles() {
            let len = cycle.len() as i64;
            let shift = k.rem_euclid(len) as usize;
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + shift) % cycle.len()] as u32;
            }
        }
        Permutation { images }
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// Restriction to an invariant set, relabelled by position in `points`.
    pub fn restrict(&self, points: &[usize]) -> Result<Permutation> {
        let mut pos = std::collections::HashMap::with_capacity(points.len());
        for (i, &p) in points.iter().enumerate() {
            pos.insert(p, i);
        }
        let mut images = Vec::with_capacity(points.len());
        for &p in points {
            let img = self.apply(p);
            match pos.get(&img) {
                Some(&j) => images.push(j as u32),
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "point set is not invariant: {p} maps outside"
                    )))
                }
            }
        }
        Ok(Permutation { images })
    }

    /// Disjoint union: `self` on `0..n`, `other` shifted onto `n..n+m`.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.degree() as u32;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&x| x + n));
        Permutation { images }
    }

    /// Extends the degree with fixed points.
    pub fn extend_to(&self, degree: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Permutation { images }
    }
}

impl Mul<&Permutation> for &Permutation {
    type Output = Permutation;

    /// Apply `self` then `rhs`. Panics on degree mismatch; use
    /// [`Permutation::compose`] for the checked form.
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| rhs.images[x as usize])
                .collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(degree: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(degree, s).unwrap()
    }

    #[test]
    fn involution_squares_to_identity() {
        let t = p(3, "(0 1)");
        assert!((&t * &t).is_identity());
    }

    #[test]
    fn three_cycle_squared() {
        let c = p(3, "(0 1 2)");
        assert_eq!(&c * &c, p(3, "(0 2 1)"));
    }

    #[test]
    fn identity_is_neutral() {
        let c = p(5, "(0 3)(1 2 4)");
        assert_eq!(&c * &Permutation::identity(5), c);
        assert_eq!(&Permutation::identity(5) * &c, c);
    }

    #[test]
    fn product_is_right_action() {
        // 0 -(0 1)-> 1 -(1 2)-> 2
        let a = p(3, "(0 1)");
        let b = p(3, "(1 2)");
        assert_eq!((&a * &b).apply(0), b.apply(a.apply(0)));
        assert_eq!(&a * &b, p(3, "(0 2 1)"));
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert_eq!(
            a.compose(&b),
            Err(Error::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn from_images_rejects_non_bijection() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn display_round_trips_through_parser() {
        let c = p(7, "(0 4 2)(3 6)");
        assert_eq!(c.to_string(), "(0 4 2)(3 6)");
        assert_eq!(p(7, &c.to_string()), c);
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert_eq!(p(4, "()"), Permutation::identity(4));
    }

    #[test]
    fn parse_errors_carry_position() {
        match Permutation::parse_cycles(5, "(0 1) x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Permutation::parse_cycles(3, "(0 5)").is_err());
    }

    #[test]
    fn conjugation_and_commutators() {
        let a = p(4, "(0 1 2 3)");
        let g = p(4, "(0 1)");
        let c = a.conjugate_by(&g);
        assert_eq!(c, &(&g.inverse() * &a) * &g);
        assert!(a.commutes_with(&a.pow(3)));
        assert!(!a.commutes_with(&g));
        assert!(a.commutator(&a.pow(2)).is_identity());
    }

    #[test]
    fn orders_and_powers() {
        let c = p(6, "(0 1 2)(3 4)");
        assert_eq!(c.order_u64(), Some(6));
        assert_eq!(c.order(), BigUint::from(6u32));
        assert!(c.pow(6).is_identity());
        assert_eq!(c.pow(-1), c.inverse());
        assert!(!c.is_even());
        assert!(p(3, "(0 1 2)").is_even());
    }

    #[test]
    fn restrict_and_direct_sum() {
        let c = p(5, "(1 3)(2 4)");
        let r = c.restrict(&[1, 3]).unwrap();
        assert_eq!(r, p(2, "(0 1)"));
        assert!(c.restrict(&[1, 2]).is_err());
        let s = p(2, "(0 1)").direct_sum(&p(3, "(0 1 2)"));
        assert_eq!(s, p(5, "(0 1)(2 3 4)"));
    }
}
