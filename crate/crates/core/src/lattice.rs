//! The Picard lattice of `X_{a,b,c}`, its Weyl group action, and the orbit of
//! `(-1)`-divisors that forms the vertex set of `G_{a,b,c}`.
//!
//! Classes are written in the basis `H_1..H_{a-1}, E_1..E_r` (with `r = b + c`)
//! and paired by `E_i·E_j = -δ_ij`, `H_i·H_j = c - 1 - δ_ij`, `H_i·E_j = 0`.
//! Simple roots have self-intersection `-2`, so the reflection in `α` is
//! `v ↦ v + (v·α) α`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;

use crate::error::Error;
use crate::graph::Multigraph;
use crate::rational::{binomial, Rational};

pub const DEFAULT_ORBIT_LIMIT: usize = 1_000_000;

/// Which minuscule diagram a parameter triple belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `(s+1, 1, r-1)`: vertices are the `(r-1)`-subsets of `[r+s]`.
    TypeA { r: u32, s: u32 },
    /// `(2, 2, r-2)`: vertices are the even subsets of `[r]`.
    TypeD { r: u32 },
    E6,
    E7,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::TypeA { r, s } => write!(f, "typeA:{r},{s}"),
            Family::TypeD { r } => write!(f, "typeD:{r}"),
            Family::E6 => f.write_str("e6"),
            Family::E7 => f.write_str("e7"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `typeA:r,s`, `typeD:r`, `e6` and `e7` (case-insensitive).
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("unknown family {s:?} (expected typeA:r,s | typeD:r | e6 | e7)"));
        let lower = s.trim().to_ascii_lowercase();
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        match lower.split_once(':') {
            None if lower == "e6" => Ok(Family::E6),
            None if lower == "e7" => Ok(Family::E7),
            Some(("typea", rest)) => {
                let (r, s) = rest.split_once(',').ok_or_else(bad)?;
                Ok(Family::TypeA { r: num(r)?, s: num(s)? })
            }
            Some(("typed", rest)) => Ok(Family::TypeD { r: num(rest)? }),
            _ => Err(bad()),
        }
    }
}

/// The integer data `(a, b, c)` of the bilinear form, without any validation
/// beyond what the form itself needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PicardLattice {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl PicardLattice {
    pub fn new(a: u32, b: u32, c: u32) -> Result<Self, Error> {
        if a < 2 || c < 2 || b < 1 {
            return Err(Error::OutsideAssumptions { a, b, c, reason: "need a >= 2, b >= 1, c >= 2" });
        }
        Ok(PicardLattice { a, b, c })
    }

    pub fn r(&self) -> usize {
        (self.b + self.c) as usize
    }

    pub fn h_len(&self) -> usize {
        self.a as usize - 1
    }

    /// `δ = bc + ac + ab - abc`.
    pub fn delta(&self) -> i64 {
        let (a, b, c) = (i64::from(self.a), i64::from(self.b), i64::from(self.c));
        b * c + a * c + a * b - a * b * c
    }

    /// `κ = ac - a - c`, the coefficient of each `E_j` in `K`.
    pub fn kappa(&self) -> i64 {
        let (a, c) = (i64::from(self.a), i64::from(self.c));
        a * c - a - c
    }

    fn check(&self, v: &PicardClass) -> Result<(), Error> {
        if v.h.len() != self.h_len() {
            return Err(Error::DimensionMismatch { expected: self.h_len(), found: v.h.len() });
        }
        if v.e.len() != self.r() {
            return Err(Error::DimensionMismatch { expected: self.r(), found: v.e.len() });
        }
        Ok(())
    }

    pub fn intersect(&self, u: &PicardClass, v: &PicardClass) -> Result<i64, Error> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.pair(u, v))
    }

    // H_i·H_j = (c-1) - δ_ij, so Σ h_i h'_j (c-1-δ_ij) = (c-1)(Σh)(Σh') - Σ h_i h'_i.
    fn pair(&self, u: &PicardClass, v: &PicardClass) -> i64 {
        let su: i64 = u.h.iter().sum();
        let sv: i64 = v.h.iter().sum();
        let hh: i64 = u.h.iter().zip(&v.h).map(|(x, y)| x * y).sum();
        let ee: i64 = u.e.iter().zip(&v.e).map(|(x, y)| x * y).sum();
        (i64::from(self.c) - 1) * su * sv - hh - ee
    }

    pub fn canonical_class(&self) -> PicardClass {
        PicardClass {
            h: vec![-i64::from(self.c); self.h_len()],
            e: vec![self.kappa(); self.r()],
        }
    }

    pub fn h_basis(&self, i: usize) -> PicardClass {
        let mut v = self.zero();
        v.h[i] = 1;
        v
    }

    pub fn e_basis(&self, j: usize) -> PicardClass {
        let mut v = self.zero();
        v.e[j] = 1;
        v
    }

    pub fn zero(&self) -> PicardClass {
        PicardClass { h: vec![0; self.h_len()], e: vec![0; self.r()] }
    }

    /// `α_i = E_i - E_{i+1}`, `α_r = H_1 - E_1 - … - E_c`, `α_{r+j} = H_{j+1} - H_j`.
    pub fn simple_roots(&self) -> RootBasis {
        let r = self.r();
        let mut roots = Vec::with_capacity(self.h_len() + r - 1);
        for i in 0..r - 1 {
            let mut v = self.zero();
            v.e[i] = 1;
            v.e[i + 1] = -1;
            roots.push(v);
        }
        let mut v = self.zero();
        v.h[0] = 1;
        for e in v.e.iter_mut().take(self.c as usize) {
            *e = -1;
        }
        roots.push(v);
        for j in 0..self.h_len() - 1 {
            let mut v = self.zero();
            v.h[j + 1] = 1;
            v.h[j] = -1;
            roots.push(v);
        }
        RootBasis { roots }
    }

    pub fn reflect(&self, v: &PicardClass, alpha: &PicardClass) -> Result<PicardClass, Error> {
        let aa = self.intersect(alpha, alpha)?;
        if aa != -2 {
            return Err(Error::InvalidRoot(aa));
        }
        let k = self.intersect(v, alpha)?;
        Ok(v.add_scaled(alpha, k))
    }

    /// Breadth-first closure of `start` under the simple reflections.
    /// Output is sorted lexicographically by `(h, e)`.
    pub fn weyl_orbit(&self, start: &PicardClass, limit: usize) -> Result<Vec<PicardClass>, Error> {
        self.check(start)?;
        let roots = self.simple_roots().roots;
        let mut seen = BTreeSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start.clone()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                for alpha in &roots {
                    let k = self.pair(v, alpha);
                    if k == 0 {
                        continue;
                    }
                    let w = v.add_scaled(alpha, k);
                    if !seen.contains(&w) {
                        if seen.len() >= limit {
                            return Err(Error::OrbitExplosion { limit });
                        }
                        seen.insert(w.clone());
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        Ok(seen.into_iter().collect())
    }
}

/// Validated parameters `(a, b, c)` of a minuscule `X_{a,b,c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MinusculeParams {
    lattice: PicardLattice,
    family: Family,
}

pub fn build_params(a: u32, b: u32, c: u32) -> Result<MinusculeParams, Error> {
    let lattice = PicardLattice::new(a, b, c)?;
    if a > c {
        return Err(Error::OutsideAssumptions { a, b, c, reason: "need a <= c" });
    }
    if a == 2 && c <= 2 {
        return Err(Error::OutsideAssumptions { a, b, c, reason: "need c > 2 when a = 2" });
    }
    // 1/a + 1/b + 1/c > 1  <=>  δ > 0
    if lattice.delta() <= 0 {
        return Err(Error::NotFinite { a, b, c });
    }
    let family = match (a, b, c) {
        (_, 1, _) => Family::TypeA { r: c + 1, s: a - 1 },
        (2, 2, _) => Family::TypeD { r: c + 2 },
        (2, 3, 3) => Family::E6,
        (2, 4, 3) => Family::E7,
        _ => return Err(Error::NotMinuscule { a, b, c }),
    };
    Ok(MinusculeParams { lattice, family })
}

impl MinusculeParams {
    /// `G_{s+1,1,r-1}`, isomorphic to the `(r-1)`-subset model on `[r+s]`.
    pub fn type_a(r: u32, s: u32) -> Result<Self, Error> {
        if r < 2 {
            return Err(Error::Domain("type A needs r >= 2"));
        }
        build_params(s + 1, 1, r - 1)
    }

    /// `G_{2,2,r-2}`, isomorphic to the even-subset model on `[r]`.
    pub fn type_d(r: u32) -> Result<Self, Error> {
        if r < 3 {
            return Err(Error::Domain("type D needs r >= 5"));
        }
        build_params(2, 2, r - 2)
    }

    pub fn e6() -> Self {
        build_params(2, 3, 3).expect("E6 parameters are minuscule")
    }

    pub fn e7() -> Self {
        build_params(2, 4, 3).expect("E7 parameters are minuscule")
    }

    pub fn from_family(family: Family) -> Result<Self, Error> {
        match family {
            Family::TypeA { r, s } => Self::type_a(r, s),
            Family::TypeD { r } => Self::type_d(r),
            Family::E6 => Ok(Self::e6()),
            Family::E7 => Ok(Self::e7()),
        }
    }

    pub fn lattice(&self) -> &PicardLattice {
        &self.lattice
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn abc(&self) -> (u32, u32, u32) {
        (self.lattice.a, self.lattice.b, self.lattice.c)
    }

    pub fn r(&self) -> usize {
        self.lattice.r()
    }

    pub fn delta(&self) -> i64 {
        self.lattice.delta()
    }

    pub fn kappa(&self) -> i64 {
        self.lattice.kappa()
    }

    /// Number of simple roots, `a + r - 2`.
    pub fn root_count(&self) -> usize {
        self.lattice.h_len() + self.r() - 1
    }

    /// `φ = δ / (δ + κ)`: distinct divisors `U, V` embed with `f(U)·f(V) = 1 - φ(1 + U·V)`.
    pub fn phi(&self) -> Rational {
        Rational::new(BigInt::from(self.delta()), BigInt::from(self.delta() + self.kappa()))
    }

    /// Size of the `(-1)`-divisor orbit (the minuscule dimension).
    pub fn vertex_count(&self) -> u128 {
        match self.family {
            Family::TypeA { r, s } => binomial(u64::from(r + s), u64::from(r - 1)),
            Family::TypeD { r } => 1u128 << (r - 1),
            Family::E6 => 27,
            Family::E7 => 56,
        }
    }
}

impl fmt::Display for MinusculeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.abc();
        write!(f, "{a},{b},{c}")
    }
}

/// An integer class `Σ h_i H_i + Σ e_j E_j`. Ordered lexicographically by `(h, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicardClass {
    pub h: Vec<i64>,
    pub e: Vec<i64>,
}

impl PicardClass {
    pub fn new(h: Vec<i64>, e: Vec<i64>) -> Self {
        PicardClass { h, e }
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &PicardClass, k: i64) -> PicardClass {
        PicardClass {
            h: self.h.iter().zip(&other.h).map(|(x, y)| x + k * y).collect(),
            e: self.e.iter().zip(&other.e).map(|(x, y)| x + k * y).collect(),
        }
    }

    pub fn scaled(&self, k: i64) -> PicardClass {
        PicardClass {
            h: self.h.iter().map(|x| k * x).collect(),
            e: self.e.iter().map(|x| k * x).collect(),
        }
    }

    /// Coordinates `(h_1..h_{a-1}, e_1..e_r)` as one vector.
    pub fn coords(&self) -> impl Iterator<Item = i64> + '_ {
        self.h.iter().chain(&self.e).copied()
    }
}

impl fmt::Display for PicardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({} ; {})", join(&self.h), join(&self.e))
    }
}

impl FromStr for PicardClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a Picard class: {s:?}"));
        let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let (h, e) = inner.split_once(';').ok_or_else(bad)?;
        let parse = |part: &str| -> Result<Vec<i64>, Error> {
            let part = part.trim();
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
        };
        Ok(PicardClass { h: parse(h)?, e: parse(e)? })
    }
}

/// The simple roots `α_1..α_{a+r-2}`, a basis of `K^⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBasis {
    pub roots: Vec<PicardClass>,
}

impl RootBasis {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// The Cartan matrix `C_ij = -α_i·α_j`, row-major.
    pub fn cartan(&self, lattice: &PicardLattice) -> Vec<i64> {
        let k = self.len();
        let mut c = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                c[i * k + j] = -lattice.pair(&self.roots[i], &self.roots[j]);
            }
        }
        c
    }
}

pub fn canonical_class(p: &MinusculeParams) -> PicardClass {
    p.lattice.canonical_class()
}

pub fn intersect(u: &PicardClass, v: &PicardClass, p: &MinusculeParams) -> Result<i64, Error> {
    p.lattice.intersect(u, v)
}

pub fn simple_roots(p: &MinusculeParams) -> RootBasis {
    p.lattice.simple_roots()
}

pub fn reflect(v: &PicardClass, alpha: &PicardClass, p: &MinusculeParams) -> Result<PicardClass, Error> {
    p.lattice.reflect(v, alpha)
}

/// The Weyl orbit of `E_r`, sorted.
pub fn minus_one_divisors(p: &MinusculeParams) -> Result<Vec<PicardClass>, Error> {
    minus_one_divisors_bounded(p, DEFAULT_ORBIT_LIMIT)
}

pub fn minus_one_divisors_bounded(p: &MinusculeParams, limit: usize) -> Result<Vec<PicardClass>, Error> {
    let start = p.lattice.e_basis(p.r() - 1);
    p.lattice.weyl_orbit(&start, limit)
}

/// `G_{a,b,c}`: vertices are the given classes, weights their pairwise products.
pub fn graph_from_divisors(divs: &[PicardClass], p: &MinusculeParams) -> Result<Multigraph, Error> {
    for d in divs {
        p.lattice.check(d)?;
    }
    let n = divs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let product = p.lattice.pair(&divs[i], &divs[j]);
            if product < 0 {
                return Err(Error::ModelViolation { i, j, product });
            }
        }
    }
    let labels: Vec<String> = divs.iter().map(|d| d.to_string()).collect();
    Multigraph::from_fn(labels, |i, j| p.lattice.pair(&divs[i], &divs[j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn class(h: &[i64], e: &[i64]) -> PicardClass {
        PicardClass::new(h.to_vec(), e.to_vec())
    }

    #[test]
    fn family_parsing() {
        for f in [Family::TypeA { r: 4, s: 1 }, Family::TypeD { r: 5 }, Family::E6, Family::E7] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert_eq!("TypeA: 5, 2".parse::<Family>().unwrap(), Family::TypeA { r: 5, s: 2 });
        assert!(matches!("e8".parse::<Family>(), Err(Error::Parse(_))));
        assert!(matches!("typeD:x".parse::<Family>(), Err(Error::Parse(_))));
    }

    #[test]
    fn params_validation() {
        let p = build_params(2, 3, 3).unwrap();
        assert_eq!((p.r(), p.delta(), p.kappa()), (6, 3, 1));
        assert_eq!(p.family(), Family::E6);
        assert_eq!(build_params(2, 4, 4), Err(Error::NotFinite { a: 2, b: 4, c: 4 }));
        assert_eq!(build_params(3, 2, 3), Err(Error::NotMinuscule { a: 3, b: 2, c: 3 }));
        assert_eq!(build_params(2, 5, 3), Err(Error::NotMinuscule { a: 2, b: 5, c: 3 }));
        assert!(matches!(build_params(2, 1, 2), Err(Error::OutsideAssumptions { .. })));
        assert!(matches!(build_params(4, 1, 3), Err(Error::OutsideAssumptions { .. })));
        assert!(matches!(build_params(1, 1, 3), Err(Error::OutsideAssumptions { .. })));
        assert_eq!(build_params(3, 1, 4).unwrap().family(), Family::TypeA { r: 5, s: 2 });
        assert_eq!(build_params(2, 2, 3).unwrap().family(), Family::TypeD { r: 5 });
        assert_eq!(MinusculeParams::type_a(4, 1).unwrap().abc(), (2, 1, 3));
        assert_eq!(MinusculeParams::type_d(7).unwrap().abc(), (2, 2, 5));
    }

    #[test]
    fn canonical_classes() {
        let k = canonical_class(&build_params(2, 1, 3).unwrap());
        assert_eq!(k, class(&[-3], &[1, 1, 1, 1]));
        let k = canonical_class(&build_params(2, 2, 4).unwrap());
        assert_eq!(k, class(&[-4], &[2; 6]));
    }

    #[test]
    fn intersection_values() {
        let p = build_params(2, 1, 3).unwrap();
        let e1 = p.lattice().e_basis(0);
        assert_eq!(intersect(&e1, &e1, &p).unwrap(), -1);
        let line = class(&[1], &[-1, -1, 0, 0]);
        assert_eq!(intersect(&line, &line, &p).unwrap(), -1);
        let e6 = MinusculeParams::e6();
        let k = canonical_class(&e6);
        assert_eq!(intersect(&k, &k, &e6).unwrap(), 3);
        assert!(matches!(
            intersect(&class(&[1, 0], &[0; 4]), &line, &p),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn root_counts_and_properties() {
        for (abc, count) in [((2, 1, 3), 4), ((2, 2, 3), 5), ((2, 4, 3), 7), ((4, 1, 4), 7)] {
            let p = build_params(abc.0, abc.1, abc.2).unwrap();
            let roots = simple_roots(&p);
            assert_eq!(roots.len(), count);
            let k = canonical_class(&p);
            for alpha in &roots.roots {
                assert_eq!(intersect(alpha, alpha, &p).unwrap(), -2);
                assert_eq!(intersect(alpha, &k, &p).unwrap(), 0);
            }
        }
    }

    #[test]
    fn reflections() {
        let p = build_params(2, 1, 3).unwrap();
        let l = p.lattice();
        let alpha = l.e_basis(0).add_scaled(&l.e_basis(1), -1);
        assert_eq!(reflect(&l.e_basis(0), &alpha, &p).unwrap(), l.e_basis(1));
        let k = canonical_class(&p);
        assert_eq!(reflect(&k, &alpha, &p).unwrap(), k);
        let conic = class(&[1], &[-1, -1, -1, 0]);
        assert_eq!(reflect(&l.e_basis(0), &conic, &p).unwrap(), class(&[1], &[0, -1, -1, 0]));
        assert_eq!(reflect(&k, &l.e_basis(0), &p), Err(Error::InvalidRoot(-1)));
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(minus_one_divisors(&build_params(2, 1, 3).unwrap()).unwrap().len(), 10);
        assert_eq!(minus_one_divisors(&MinusculeParams::e6()).unwrap().len(), 27);
        assert_eq!(minus_one_divisors(&build_params(2, 2, 3).unwrap()).unwrap().len(), 16);
        assert_eq!(
            minus_one_divisors_bounded(&MinusculeParams::e7(), 20),
            Err(Error::OrbitExplosion { limit: 20 })
        );
    }

    #[test]
    fn affine_orbit_explodes() {
        // (3,3,3) is affine E6: the orbit of E_r is infinite
        let l = PicardLattice::new(3, 3, 3).unwrap();
        let start = l.e_basis(l.r() - 1);
        assert_eq!(l.weyl_orbit(&start, 5000), Err(Error::OrbitExplosion { limit: 5000 }));
    }

    #[test]
    fn divisor_graphs() {
        let p = build_params(2, 1, 3).unwrap();
        let divs = minus_one_divisors(&p).unwrap();
        let g = graph_from_divisors(&divs, &p).unwrap();
        assert_eq!(g.n(), 10);
        let h = g.weight_histogram();
        assert_eq!(h.count_int(1), 15);
        assert_eq!(h.zero_pairs(), 30);
        let neg = [p.lattice().e_basis(0), p.lattice().e_basis(0)];
        assert_eq!(graph_from_divisors(&neg, &p), Err(Error::ModelViolation { i: 0, j: 1, product: -1 }));
        assert_eq!(*g.weight(0, 0), int(0));
    }

    #[test]
    fn class_text_round_trip() {
        let v = class(&[1, -2], &[0, 3, -1]);
        assert_eq!(v.to_string(), "(1,-2 ; 0,3,-1)");
        assert_eq!(v.to_string().parse::<PicardClass>().unwrap(), v);
        assert!("1,2".parse::<PicardClass>().is_err());
    }
}
