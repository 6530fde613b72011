//! The optimal vector embedding of `G_{a,b,c}`, its semidefinite value, the
//! matching dual certificate, and the integer bounds on the maximum cut.
//!
//! Divisors are projected to `K^⊥` by `q(V) = V + K/δ` and normalized with
//! the negated intersection form, giving unit vectors with
//! `f(U)·f(V) = 1 - φ(1 + U·V)`. The dual vector is the constant `-λ₁`, whose
//! feasibility is certified by an exactly verified spectrum.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::graph::Multigraph;
use crate::lattice::{graph_from_divisors, minus_one_divisors, Family, MinusculeParams, PicardClass};
use crate::matrix::{leading_minors, rational_rank};
use crate::models::s_k_closed_form;
use crate::precise::{arccos_over_pi, Enclosure};
use crate::rational::{to_f64, Rational};
use crate::spectral::{closed_form_degree, closed_form_spectrum, verify_spectrum_exact, Spectrum, SpectrumProof};

/// Distance from the nearest integer that `ℓ` must clear before it is rounded.
pub const ELL_GUARD_BITS: u32 = 30;
/// Precisions tried in turn for `ℓ`, in fractional bits.
pub const ELL_PRECISIONS: [u32; 3] = [96, 192, 384];

/// Unit vectors `f(V)` for every divisor, stored as their exact Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub params: MinusculeParams,
    pub classes: Vec<PicardClass>,
    gram: Vec<Rational>,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.classes.len()
    }

    pub fn gram(&self, i: usize, j: usize) -> &Rational {
        &self.gram[i * self.n() + j]
    }

    pub fn gram_entries(&self) -> &[Rational] {
        &self.gram
    }

    /// Exact rank of the Gram matrix.
    pub fn rank(&self) -> usize {
        rational_rank(self.n(), self.n(), &self.gram)
    }
}

pub fn build_embedding(p: &MinusculeParams, divs: &[PicardClass], g: &Multigraph) -> Result<Embedding, Error> {
    let n = divs.len();
    if g.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.n() });
    }
    let lat = p.lattice();
    let k = lat.canonical_class();
    let (delta, kappa) = (BigInt::from(p.delta()), BigInt::from(p.kappa()));
    let k2 = BigInt::from(lat.intersect(&k, &k)?);
    let kdot: Vec<BigInt> = divs.iter().map(|v| lat.intersect(v, &k).map(BigInt::from)).collect::<Result<_, _>>()?;
    // f(U)·f(V) = -q(U)·q(V) / ((δ+κ)/δ), and δ²·q(U)·q(V) = δ²U·V + δ(U·K + V·K) + K²
    let denom = &delta * (&delta + &kappa);
    let phi = p.phi();
    let mut gram = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let uv = lat.intersect(&divs[i], &divs[j])?;
            let qq = &delta * &delta * BigInt::from(uv) + &delta * (&kdot[i] + &kdot[j]) + &k2;
            let entry = Rational::new(-qq, denom.clone());
            if i == j {
                if !entry.is_one() {
                    return Err(Error::Inconsistency {
                        what: "embedding diagonal",
                        left: format!("{entry}"),
                        right: "1".into(),
                    });
                }
            } else {
                let uv_q = Rational::from_integer(uv.into());
                if *g.weight(i, j) != uv_q {
                    return Err(Error::Inconsistency {
                        what: "graph weight vs intersection",
                        left: format!("{}", g.weight(i, j)),
                        right: format!("{uv}"),
                    });
                }
                let expected = Rational::one() - &phi * (Rational::one() + uv_q);
                if entry != expected {
                    return Err(Error::Inconsistency {
                        what: "embedding inner product",
                        left: format!("{entry}"),
                        right: format!("{expected}"),
                    });
                }
            }
            gram.push(entry);
        }
    }
    Ok(Embedding { params: *p, classes: divs.to_vec(), gram })
}

/// Leading principal minors of the Cartan matrix of the simple roots; all positive on `K^⊥`.
pub fn root_gram_minors(p: &MinusculeParams) -> Vec<Rational> {
    let roots = p.lattice().simple_roots();
    leading_minors(roots.len(), &roots.cartan(p.lattice()))
}

/// `φ Σ_k S_k k(k+1)/2` from the closed-form weight counts.
pub fn sd_closed_form(p: &MinusculeParams) -> Rational {
    let mut sum = BigInt::zero();
    for k in 1..=64u32 {
        let s = s_k_closed_form(p, k);
        sum += BigInt::from(s) * BigInt::from(u64::from(k) * u64::from(k + 1) / 2);
    }
    p.phi() * Rational::from_integer(sum)
}

/// `SD(f) = Σ_{i<j} M_ij (1 - f_i·f_j)/2`, cross-checked against the closed form.
pub fn sd_primal(e: &Embedding, g: &Multigraph) -> Result<Rational, Error> {
    let n = e.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.n() });
    }
    let mut direct = Rational::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let w = g.weight(i, j);
            if !w.is_zero() {
                direct += w * (Rational::one() - e.gram(i, j));
            }
        }
    }
    direct /= Rational::from_integer(2.into());
    let closed = sd_closed_form(&e.params);
    if direct != closed {
        return Err(Error::Inconsistency { what: "SD(f)", left: format!("{direct}"), right: format!("{closed}") });
    }
    Ok(direct)
}

/// Constant dual vector `γ = -λ₁` with value `SD* = ½Σ_{i<j}M_ij - nλ₁/4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub gamma: Rational,
    pub sd_star: Rational,
    pub lambda1: Rational,
    pub proof: SpectrumProof,
}

/// Verifies `spec` against `g` exactly, then builds the dual certificate from it.
pub fn dual_certificate(g: &Multigraph, spec: &Spectrum) -> Result<DualCertificate, Error> {
    let proof = verify_spectrum_exact(g, spec).map_err(|e| match e {
        Error::Domain(why) => Error::UnverifiedSpectrum(why.into()),
        other => other,
    })?;
    dual_from_proof(g, proof)
}

pub fn dual_from_proof(g: &Multigraph, proof: SpectrumProof) -> Result<DualCertificate, Error> {
    if !proof.matches(g) {
        return Err(Error::UnverifiedSpectrum("proof was issued for a different graph".into()));
    }
    let lambda1 = proof.lambda1();
    let gamma = -lambda1.clone();
    let n = Rational::from_integer(BigInt::from(g.n()));
    let sd_star = g.total_weight() / Rational::from_integer(2.into()) + &n * &gamma / Rational::from_integer(4.into());
    Ok(DualCertificate { gamma, sd_star, lambda1, proof })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub family: Family,
    pub n: usize,
    pub sd_primal: Rational,
    pub sd_dual: Rational,
    pub lambda1: Rational,
    pub degree: Rational,
}

pub fn verify_strong_duality(p: &MinusculeParams) -> Result<DualityReport, Error> {
    let divs = minus_one_divisors(p)?;
    let g = graph_from_divisors(&divs, p)?;
    let e = build_embedding(p, &divs, &g)?;
    let primal = sd_primal(&e, &g)?;
    let dual = dual_certificate(&g, &closed_form_spectrum(p))?;
    if primal != dual.sd_star {
        return Err(Error::DualityGap { primal: format!("{primal}"), dual: format!("{}", dual.sd_star) });
    }
    Ok(DualityReport {
        family: p.family(),
        n: g.n(),
        sd_primal: primal,
        sd_dual: dual.sd_star,
        lambda1: dual.lambda1,
        degree: closed_form_degree(p),
    })
}

/// `ℓ ≤ m ≤ u` with `ℓ = E[W(f)]` and `u = SD(G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub ell: Enclosure,
    pub ell_value: f64,
    pub u: Rational,
    pub ell_ceil: i64,
    pub u_floor: i64,
}

impl BoundsReport {
    pub fn u_value(&self) -> f64 {
        to_f64(&self.u)
    }
}

/// `ℓ = Σ_k k·S_k·arccos(1 - φ(1+k))/π` as an enclosure at the given precision.
pub fn ell_enclosure(p: &MinusculeParams, bits: u32) -> Result<Enclosure, Error> {
    let phi = p.phi();
    let mut acc: Option<Enclosure> = None;
    for k in 1..=64u32 {
        let s = s_k_closed_form(p, k);
        if s == 0 {
            continue;
        }
        let kq = Rational::from_integer(BigInt::from(k));
        let x = Rational::one() - &phi * (Rational::one() + &kq);
        let term = arccos_over_pi(&x, bits)?.scale(&(BigInt::from(s) * BigInt::from(k)));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    Ok(acc.unwrap_or_else(|| Enclosure::zero(bits)))
}

pub fn bounds_closed_form(p: &MinusculeParams) -> Result<BoundsReport, Error> {
    let u = sd_closed_form(p);
    let u_floor = u.floor().to_integer();
    let mut last = None;
    for bits in ELL_PRECISIONS {
        let ell = ell_enclosure(p, bits)?;
        if let Some(c) = ell.certified_ceil(ELL_GUARD_BITS) {
            if ell.lower() > u {
                return Err(Error::Inconsistency { what: "bounds", left: format!("{}", ell.to_f64()), right: format!("{u}") });
            }
            let as_i64 = |v: &BigInt| v.to_i64().ok_or(Error::Domain("bound exceeds i64"));
            return Ok(BoundsReport {
                ell_value: ell.to_f64(),
                ell_ceil: as_i64(&c)?,
                u_floor: as_i64(&u_floor)?,
                ell,
                u,
            });
        }
        last = Some(ell);
    }
    let value = last.map(|e| format!("{:.12}", e.to_f64())).unwrap_or_default();
    Err(Error::NearInteger { value })
}

/// `Σ_{i<j} M_ij·arccos(f_i·f_j)/π` in double precision, straight from the Gram matrix.
pub fn expected_cut_direct(e: &Embedding, g: &Multigraph) -> f64 {
    let n = e.n();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let w = to_f64(g.weight(i, j));
            if w != 0.0 {
                total += w * libm::acos(to_f64(e.gram(i, j)).clamp(-1.0, 1.0));
            }
        }
    }
    total / core::f64::consts::PI
}

pub fn is_nonnegative_gamma(c: &DualCertificate) -> bool {
    !c.gamma.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn setup(p: &MinusculeParams) -> (Vec<PicardClass>, Multigraph, Embedding) {
        let divs = minus_one_divisors(p).unwrap();
        let g = graph_from_divisors(&divs, p).unwrap();
        let e = build_embedding(p, &divs, &g).unwrap();
        (divs, g, e)
    }

    #[test]
    fn gram_entries() {
        let (_, g, e) = setup(&MinusculeParams::e6());
        for i in 0..27 {
            assert_eq!(e.gram(i, i), &int(1));
            for j in 0..27 {
                if i != j && g.weight(i, j).is_zero() {
                    assert_eq!(e.gram(i, j), &ratio(1, 4));
                }
            }
        }
        assert_eq!(e.rank(), 6);
        let (_, g5, e5) = setup(&MinusculeParams::type_d(5).unwrap());
        let (i, j, _) = g5.edges().next().unwrap();
        assert_eq!(e5.gram(i, j), &ratio(-3, 5));
        assert_eq!(e5.rank(), 5);
    }

    #[test]
    fn primal_values() {
        for (p, want) in [
            (MinusculeParams::e6(), ratio(405, 4)),
            (MinusculeParams::e7(), int(560)),
            (MinusculeParams::type_d(5).unwrap(), int(32)),
        ] {
            let (_, g, e) = setup(&p);
            assert_eq!(sd_primal(&e, &g).unwrap(), want);
        }
    }

    #[test]
    fn dual_values() {
        let p = MinusculeParams::type_a(4, 1).unwrap();
        let (_, g, _) = setup(&p);
        let c = dual_certificate(&g, &closed_form_spectrum(&p)).unwrap();
        assert_eq!((c.gamma.clone(), c.sd_star.clone()), (int(2), ratio(25, 2)));
        let other = setup(&MinusculeParams::type_d(5).unwrap()).1;
        assert!(matches!(dual_from_proof(&other, c.proof), Err(Error::UnverifiedSpectrum(_))));
    }

    #[test]
    fn strong_duality_small() {
        let r = verify_strong_duality(&MinusculeParams::type_a(5, 1).unwrap()).unwrap();
        assert_eq!(r.sd_primal, ratio(135, 4));
        assert_eq!(r.sd_dual, ratio(135, 4));
    }

    #[test]
    fn bounds() {
        let e6 = bounds_closed_form(&MinusculeParams::e6()).unwrap();
        assert!(e6.ell.is_exact());
        assert_eq!((e6.ell.exact.clone(), e6.ell_ceil, e6.u_floor), (int(90), 90, 101));
        let a41 = bounds_closed_form(&MinusculeParams::type_a(4, 1).unwrap()).unwrap();
        // 15·arccos(-2/3)/π; the tabulated 10.986 is a sample mean
        assert!((a41.ell_value - 10.984_192_907_981_551).abs() < 1e-12);
        assert!((a41.ell_value - 10.986).abs() < 1e-2);
        assert_eq!((a41.ell_ceil, a41.u_floor), (11, 12));
        let d5 = bounds_closed_form(&MinusculeParams::type_d(5).unwrap()).unwrap();
        // 40·arccos(-3/5)/π
        assert!((d5.ell_value - 28.193_310_587_965_343).abs() < 1e-12);
        assert!((d5.ell_value - 28.191).abs() < 1e-2);
        assert_eq!((d5.ell_ceil, d5.u_floor), (29, 32));
    }

    #[test]
    fn direct_expectation_matches() {
        for p in [MinusculeParams::e7(), MinusculeParams::type_a(5, 2).unwrap()] {
            let (_, g, e) = setup(&p);
            let b = bounds_closed_form(&p).unwrap();
            assert!((expected_cut_direct(&e, &g) - b.ell_value).abs() < 1e-9);
        }
    }

    #[test]
    fn cartan_minors_positive() {
        for p in [MinusculeParams::e7(), MinusculeParams::type_d(6).unwrap(), MinusculeParams::type_a(5, 3).unwrap()] {
            assert!(root_gram_minors(&p).iter().all(|m| m.is_positive()));
        }
    }
}
