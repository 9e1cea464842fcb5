//! Named groups: a small notation and the recipes behind it.
//!
//! Grammar: `Name(arg, …)` with `Sym(n)`, `Alt(n)`, `Cyc(n)`, `Dih(n)`,
//! `AGL1(p)`, `PSL2(p)`, `HS(spec)`, `Diag(spec, m)`,
//! `Cosets(spec, sub)` where `sub` is `Alt5`, `Stab(i, …)` or
//! `Gens(perm; perm; …)`, and `File(path)`.

use std::fmt;
use std::path::PathBuf;

use crate::diagonal::{DiagonalSpace, SdGroup};
use crate::error::{Budget, Error, Result};
use crate::perm::genfile::read_generators;
use crate::perm::search::DEFAULT_RETRIES;
use crate::perm::{
    coset_action, find_alt5_subgroup, Automorphism, ElementTable, PermGroup, Permutation,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Sym(usize),
    Alt(usize),
    Cyc(usize),
    Dih(usize),
    Agl1(u64),
    Psl2(u64),
    Hs(Box<GroupSpec>),
    Diag(Box<GroupSpec>, usize),
    Cosets(Box<GroupSpec>, SubgroupRecipe),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupRecipe {
    Alt5,
    Stab(Vec<usize>),
    Gens(Vec<String>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Sym(n) => write!(f, "Sym({n})"),
            GroupSpec::Alt(n) => write!(f, "Alt({n})"),
            GroupSpec::Cyc(n) => write!(f, "Cyc({n})"),
            GroupSpec::Dih(n) => write!(f, "Dih({n})"),
            GroupSpec::Agl1(p) => write!(f, "AGL1({p})"),
            GroupSpec::Psl2(p) => write!(f, "PSL2({p})"),
            GroupSpec::Hs(t) => write!(f, "HS({t})"),
            GroupSpec::Diag(t, m) => write!(f, "Diag({t},{m})"),
            GroupSpec::Cosets(g, sub) => write!(f, "Cosets({g},{sub})"),
            GroupSpec::File(p) => write!(f, "File({})", p.display()),
        }
    }
}

impl fmt::Display for SubgroupRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupRecipe::Alt5 => write!(f, "Alt5"),
            SubgroupRecipe::Stab(pts) => {
                let s: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
                write!(f, "Stab({})", s.join(","))
            }
            SubgroupRecipe::Gens(g) => write!(f, "Gens({})", g.join(";")),
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(spec)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.rest().len());
        if len == 0 || !self.rest().starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(self.error("expected a group name"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a number"));
        }
        let v = self.rest()[..len]
            .parse()
            .map_err(|_| self.error("number out of range"))?;
        self.pos += len;
        Ok(v)
    }

    fn small(&mut self) -> Result<usize> {
        let at = self.pos;
        let v = self.number()?;
        usize::try_from(v).map_err(|_| Error::Parse {
            position: at,
            message: "number out of range".into(),
        })
    }

    /// Text up to the `)` closing the current argument list.
    fn raw_until_close(&mut self) -> Result<&str> {
        let start = self.pos;
        let mut depth = 0usize;
        for (i, c) in self.rest().char_indices() {
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => {
                    self.pos = start + i;
                    return Ok(&self.src[start..start + i]);
                }
                ')' => depth -= 1,
                _ => {}
            }
        }
        self.pos = self.src.len();
        Err(self.error("unbalanced parentheses"))
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let name_at = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident()?.to_string();
        self.expect('(')?;
        let spec = match name.as_str() {
            "Sym" => GroupSpec::Sym(self.small()?),
            "Alt" => GroupSpec::Alt(self.small()?),
            "Cyc" => GroupSpec::Cyc(self.small()?),
            "Dih" => GroupSpec::Dih(self.small()?),
            "AGL1" => GroupSpec::Agl1(self.number()?),
            "PSL2" => GroupSpec::Psl2(self.number()?),
            "HS" => GroupSpec::Hs(Box::new(self.spec()?)),
            "Diag" => {
                let t = self.spec()?;
                self.expect(',')?;
                GroupSpec::Diag(Box::new(t), self.small()?)
            }
            "Cosets" => {
                let g = self.spec()?;
                self.expect(',')?;
                GroupSpec::Cosets(Box::new(g), self.recipe()?)
            }
            "File" => {
                let path = self.raw_until_close()?.trim().to_string();
                if path.is_empty() {
                    return Err(self.error("empty file path"));
                }
                GroupSpec::File(PathBuf::from(path))
            }
            _ => {
                return Err(Error::Parse {
                    position: name_at,
                    message: format!("unknown group `{name}`"),
                })
            }
        };
        self.expect(')')?;
        Ok(spec)
    }

    fn recipe(&mut self) -> Result<SubgroupRecipe> {
        self.skip_ws();
        let at = self.pos;
        let name = self.ident()?.to_string();
        match name.as_str() {
            "Alt5" => Ok(SubgroupRecipe::Alt5),
            "Stab" => {
                self.expect('(')?;
                let mut pts = vec![self.small()?];
                loop {
                    self.skip_ws();
                    if self.rest().starts_with(',') {
                        self.pos += 1;
                        pts.push(self.small()?);
                    } else {
                        break;
                    }
                }
                self.expect(')')?;
                Ok(SubgroupRecipe::Stab(pts))
            }
            "Gens" => {
                self.expect('(')?;
                let body = self.raw_until_close()?;
                let gens = body.split(';').map(|s| s.trim().to_string()).collect();
                self.expect(')')?;
                Ok(SubgroupRecipe::Gens(gens))
            }
            _ => Err(Error::Parse {
                position: at,
                message: format!("unknown subgroup recipe `{name}`"),
            }),
        }
    }
}

/// A built group with whatever structure its recipe exposes.
#[derive(Clone, Debug)]
pub struct Construction {
    pub spec: GroupSpec,
    pub group: PermGroup,
    /// A regular normal subgroup known from the recipe.
    pub regular_normal: Option<PermGroup>,
    /// The diagonal structure for `Diag` recipes.
    pub diagonal: Option<SdGroup>,
    /// The subgroup used for `Cosets` recipes, as generators in the parent group.
    pub coset_subgroup: Option<Vec<Permutation>>,
}

impl Construction {
    fn plain(spec: &GroupSpec, group: PermGroup) -> Self {
        Construction {
            spec: spec.clone(),
            group,
            regular_normal: None,
            diagonal: None,
            coset_subgroup: None,
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("primes have primitive roots")
}

fn require_prime(p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if p > 1_000_000 {
        return Err(Error::Infeasible {
            what: format!("degree {p}"),
            budget: 1_000_000,
        });
    }
    Ok(p as usize)
}

fn perm_from_fn(n: usize, f: impl Fn(usize) -> usize) -> Result<Permutation> {
    Permutation::from_images((0..n).map(f).collect())
}

pub fn cyclic(n: usize) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    PermGroup::new(vec![perm_from_fn(n, |i| (i + 1) % n)?])
}

/// Dihedral group of order `2n` on `n ≥ 3` points.
pub fn dihedral(n: usize) -> Result<PermGroup> {
    if n < 3 {
        return Err(Error::InvalidArgument("dihedral groups need n ≥ 3".into()));
    }
    PermGroup::new(vec![
        perm_from_fn(n, |i| (i + 1) % n)?,
        perm_from_fn(n, |i| (n - i) % n)?,
    ])
}

/// `AGL(1, p)` with its translation subgroup.
pub fn agl1(p: u64) -> Result<(PermGroup, PermGroup)> {
    let n = require_prime(p)?;
    let g = primitive_root(p) as usize;
    let shift = perm_from_fn(n, |x| (x + 1) % n)?;
    let scale = perm_from_fn(n, |x| x * g % n)?;
    let translations = PermGroup::new(vec![shift.clone()])?;
    Ok((PermGroup::new(vec![shift, scale])?, translations))
}

/// `PSL(2, p)` on the projective line: points `0..p` with `∞ = p`.
pub fn psl2(p: u64) -> Result<PermGroup> {
    let n = require_prime(p)?;
    let inf = n;
    let lambda = primitive_root(p) as usize;
    let sq = lambda * lambda % n;
    let inv = |x: usize| pow_mod(x as u64, p - 2, p) as usize;
    let shift = perm_from_fn(n + 1, |x| if x == inf { inf } else { (x + 1) % n })?;
    let scale = perm_from_fn(n + 1, |x| if x == inf { inf } else { x * sq % n })?;
    let flip = perm_from_fn(n + 1, |x| {
        if x == inf {
            0
        } else if x == 0 {
            inf
        } else {
            (n - inv(x)) % n
        }
    })?;
    PermGroup::new(vec![shift, scale, flip])
}

/// Outer automorphism representatives used for `Diag` and `HS`: a
/// transposition for `Alt(n)`, `n ≥ 5`; none otherwise.
pub fn outer_representatives(spec: &GroupSpec, table: &ElementTable) -> Result<Vec<Automorphism>> {
    match spec {
        GroupSpec::Alt(n) if *n >= 5 => {
            let tr = Permutation::from_cycles(*n, &[vec![0, 1]])?;
            Ok(vec![Automorphism::from_normalizing(table, &tr)?])
        }
        _ => Ok(Vec::new()),
    }
}

/// Holomorph-type group on the elements of `T`: right multiplications,
/// left multiplications and the outer representatives. Returns the group
/// and the right multiplications (a regular normal subgroup).
pub fn hs(t_spec: &GroupSpec, seed: u64, budget: Budget) -> Result<(PermGroup, PermGroup)> {
    let t = build(t_spec, seed, budget)?.group;
    let table = ElementTable::new(&t)?;
    let n = table.order();
    let mut right = Vec::new();
    let mut gens = Vec::new();
    for g in table.generator_indices() {
        let r = perm_from_fn(n, |x| table.mul(x as u32, g) as usize)?;
        let l = perm_from_fn(n, |x| table.mul(table.inv(g), x as u32) as usize)?;
        right.push(r.clone());
        gens.push(r);
        gens.push(l);
    }
    for phi in outer_representatives(t_spec, &table)? {
        gens.push(Permutation::from_images(
            phi.images().iter().map(|&x| x as usize).collect(),
        )?);
    }
    Ok((PermGroup::new(gens)?, PermGroup::new(right)?))
}

/// Full diagonal group `W` for `m` copies of `T`.
pub fn diag(t_spec: &GroupSpec, m: usize, seed: u64, budget: Budget) -> Result<SdGroup> {
    if m < 2 {
        return Err(Error::InvalidArgument(
            "Diag needs at least two factors".into(),
        ));
    }
    let t = build(t_spec, seed, budget)?.group;
    let table = ElementTable::new(&t)?;
    let outer = outer_representatives(t_spec, &table)?;
    let space = DiagonalSpace::new(table, m - 1)?;
    space.build_w(&outer)
}

pub fn build(spec: &GroupSpec, seed: u64, budget: Budget) -> Result<Construction> {
    Ok(match spec {
        GroupSpec::Sym(n) | GroupSpec::Alt(n) if *n == 0 => {
            return Err(Error::InvalidArgument("degree must be positive".into()))
        }
        GroupSpec::Sym(n) => Construction::plain(spec, PermGroup::symmetric(*n)),
        GroupSpec::Alt(n) => Construction::plain(spec, PermGroup::alternating(*n)),
        GroupSpec::Cyc(n) => {
            let g = cyclic(*n)?;
            Construction {
                regular_normal: Some(g.clone()),
                ..Construction::plain(spec, g)
            }
        }
        GroupSpec::Dih(n) => Construction::plain(spec, dihedral(*n)?),
        GroupSpec::Agl1(p) => {
            let (g, n) = agl1(*p)?;
            Construction {
                regular_normal: Some(n),
                ..Construction::plain(spec, g)
            }
        }
        GroupSpec::Psl2(p) => Construction::plain(spec, psl2(*p)?),
        GroupSpec::Hs(t) => {
            let (g, n) = hs(t, seed, budget)?;
            Construction {
                regular_normal: Some(n),
                ..Construction::plain(spec, g)
            }
        }
        GroupSpec::Diag(t, m) => {
            let sd = diag(t, *m, seed, budget)?;
            let m_group = sd.space().build_m()?;
            Construction {
                regular_normal: Some(m_group),
                diagonal: Some(sd.clone()),
                ..Construction::plain(spec, sd.group().clone())
            }
        }
        GroupSpec::Cosets(g, recipe) => {
            let parent = build(g, seed, budget)?.group;
            let sub = match recipe {
                SubgroupRecipe::Alt5 => find_alt5_subgroup(&parent, seed, DEFAULT_RETRIES)?.group,
                SubgroupRecipe::Stab(pts) => parent.pointwise_stabilizer(pts)?,
                SubgroupRecipe::Gens(texts) => {
                    let gens = texts
                        .iter()
                        .map(|t| Permutation::parse_cycles(parent.degree(), t))
                        .collect::<Result<Vec<_>>>()?;
                    let sub = PermGroup::new(gens)?;
                    if !sub.is_subgroup_of(&parent)? {
                        return Err(Error::NotSubgroup(format!("{recipe} is not inside {g}")));
                    }
                    sub
                }
            };
            let action = coset_action(&parent, &sub, budget)?;
            Construction {
                coset_subgroup: Some(sub.generators().to_vec()),
                ..Construction::plain(spec, action.image)
            }
        }
        GroupSpec::File(path) => {
            let (_, gens) = read_generators(path)?;
            Construction::plain(spec, PermGroup::new(gens)?)
        }
    })
}

/// `V = F_p^k` with a cyclic group `R` of prime order `r` acting irreducibly.
#[derive(Clone, Debug)]
pub struct AffineModule {
    pub p: u64,
    pub k: u32,
    pub r: u64,
    /// Translations of `F_p^k`; points are base-`p` digit vectors.
    pub translations: PermGroup,
    /// The linear map generating `R`.
    pub r_generator: Permutation,
    /// `H = V ⋊ R` on `p^k` points.
    pub affine: PermGroup,
}

fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // modulus is monic of degree k
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for (i, &mc) in modulus.iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + p - c * mc % p) % p;
            }
        }
    }
    prod.truncate(k);
    prod
}

fn poly_divides(div: &[u64], f: &[u64], p: u64) -> bool {
    let mut rem = f.to_vec();
    let dd = div.len() - 1;
    let lead_inv = pow_mod(div[dd], p - 2, p);
    while rem.len() > dd {
        let c = rem[rem.len() - 1] * lead_inv % p;
        let shift = rem.len() - 1 - dd;
        for (i, &x) in div.iter().enumerate() {
            rem[shift + i] = (rem[shift + i] + p - c * x % p) % p;
        }
        rem.pop();
    }
    rem.iter().all(|&x| x == 0)
}

fn digits(mut x: u64, p: u64, k: u32) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(v: &[u64], p: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Smallest monic irreducible polynomial of degree `k` over `F_p`, coefficients low to high.
fn irreducible_polynomial(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for low in 0..count {
        let mut f = digits(low, p, k);
        f.push(1);
        let reducible = (1..=k / 2).any(|d| {
            (0..p.pow(d)).any(|lowd| {
                let mut g = digits(lowd, p, d);
                g.push(1);
                poly_divides(&g, &f, p)
            })
        });
        if !reducible {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub fn affine_module(p: u64, k: u32, r: u64, budget: Budget) -> Result<AffineModule> {
    if !is_prime(p) || !is_prime(r) || k == 0 {
        return Err(Error::Precondition(format!(
            "need primes p, r and k ≥ 1 (got p = {p}, k = {k}, r = {r})"
        )));
    }
    let q = p
        .checked_pow(k)
        .filter(|&q| q <= 1 << 16)
        .ok_or_else(|| budget.exceeded(format!("affine space of size {p}^{k}")))?;
    if (q - 1) % r != 0 {
        return Err(Error::Precondition(format!(
            "{r} does not divide {p}^{k} − 1"
        )));
    }
    if let Some(i) = (1..k).find(|&i| (p.pow(i) - 1) % r == 0) {
        return Err(Error::Precondition(format!(
            "{r} divides {p}^{i} − 1, so it is not a primitive prime divisor of {p}^{k} − 1"
        )));
    }
    budget.ensure(q * q, "irreducibility check")?;
    let modulus = irreducible_polynomial(p, k);
    let one = {
        let mut v = vec![0u64; k as usize];
        v[0] = 1;
        v
    };
    let power = |z: &[u64], mut e: u64| {
        let mut acc = one.clone();
        let mut base = z.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, &modulus, p);
            }
            base = poly_mulmod(&base, &base, &modulus, p);
            e >>= 1;
        }
        acc
    };
    let zeta = (1..q)
        .map(|x| power(&digits(x, p, k), (q - 1) / r))
        .find(|z| *z != one)
        .ok_or_else(|| Error::Precondition("no element of order r".into()))?;
    let n = q as usize;
    let mult = perm_from_fn(n, |x| {
        undigits(&poly_mulmod(&digits(x as u64, p, k), &zeta, &modulus, p), p) as usize
    })?;
    let mut trans_gens = Vec::new();
    for i in 0..k {
        let mut e = vec![0u64; k as usize];
        e[i as usize] = 1;
        trans_gens.push(perm_from_fn(n, |x| {
            let v = digits(x as u64, p, k);
            let s: Vec<u64> = v.iter().zip(&e).map(|(a, b)| (a + b) % p).collect();
            undigits(&s, p) as usize
        })?);
    }
    // irreducible: the additive span of every nonzero R-orbit is all of V
    for v in 1..n {
        let mut in_span = vec![false; n];
        in_span[0] = true;
        let mut span = vec![0usize];
        let mut orbit = vec![v];
        let mut y = mult.apply(v);
        while y != v {
            orbit.push(y);
            y = mult.apply(y);
        }
        let mut i = 0;
        while i < span.len() {
            let s = digits(span[i] as u64, p, k);
            for &o in &orbit {
                let t = digits(o as u64, p, k);
                let sum: Vec<u64> = s.iter().zip(&t).map(|(a, b)| (a + b) % p).collect();
                let idx = undigits(&sum, p) as usize;
                if !in_span[idx] {
                    in_span[idx] = true;
                    span.push(idx);
                }
            }
            i += 1;
        }
        if span.len() != n {
            return Err(Error::Precondition(format!(
                "R fixes a proper subspace of size {}",
                span.len()
            )));
        }
    }
    let translations = PermGroup::new(trans_gens.clone())?;
    let mut h_gens = trans_gens;
    h_gens.push(mult.clone());
    Ok(AffineModule {
        p,
        k,
        r,
        translations,
        r_generator: mult,
        affine: PermGroup::new(h_gens)?,
    })
}
