//! Subset models of the type A and type D divisor graphs.
//!
//! Type A: vertices are the `(r-1)`-subsets `T` of `[r+s]`, with weight
//! `|Tᶜ ∩ S| - 1`. Type D: vertices are the even subsets of `[r]`, with weight
//! `|T ∗ S|/2 - 1` where `∗` is symmetric difference. Subsets are bitmasks and
//! vertices are listed in lexicographic order of their sorted elements.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::Error;
use crate::graph::{Multigraph, WeightHistogram};
use crate::lattice::{graph_from_divisors, minus_one_divisors, Family, MinusculeParams};
use crate::rational::{binomial, Rational};
use crate::spectral::{closed_form_spectrum, verify_spectrum_exact, verify_srmg, Spectrum, SrmgCertificate};

pub const DEFAULT_MODEL_VERTEX_LIMIT: usize = 4096;
/// Largest graph on which [`check_model_agreement`] searches for an explicit bijection.
pub const EXPLICIT_ISOMORPHISM_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetKind {
    /// `(r-1)`-subsets of `[r+s]`.
    TypeA { r: u32, s: u32 },
    /// Even subsets of `[r]`.
    TypeD { r: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetModel {
    kind: SubsetKind,
    subsets: Vec<u64>,
}

fn elements(mask: u64) -> Vec<u32> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Text label `{1,2,3}` with 1-based elements.
pub fn subset_label(mask: u64) -> String {
    let parts: Vec<String> = elements(mask).iter().map(|e| format!("{}", e + 1)).collect();
    format!("{{{}}}", parts.join(","))
}

fn lex_sorted(mut masks: Vec<u64>) -> Vec<u64> {
    masks.sort_by_cached_key(|&m| elements(m));
    masks
}

/// All `k`-subsets of `[m]` in lexicographic order.
fn combinations(m: u32, k: u32) -> Vec<u64> {
    let mut out = Vec::new();
    let mut idx: Vec<u32> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(idx.iter().fold(0u64, |acc, &i| acc | 1 << i));
        let Some(pos) = (0..k as usize).rev().find(|&p| idx[p] < m - k + p as u32) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..k as usize {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

impl SubsetModel {
    pub fn type_a(r: u32, s: u32, vertex_limit: usize) -> Result<Self, Error> {
        if r < 3 || s < 1 {
            return Err(Error::Domain("type A model needs r >= 3 and s >= 1"));
        }
        if r + s > 63 {
            return Err(Error::SizeLimit { what: "type A ground set", size: (r + s) as usize, limit: 63 });
        }
        let count = binomial(u64::from(r + s), u64::from(r - 1));
        if count > vertex_limit as u128 {
            return Err(Error::SizeLimit {
                what: "type A vertices",
                size: count.min(usize::MAX as u128) as usize,
                limit: vertex_limit,
            });
        }
        Ok(SubsetModel { kind: SubsetKind::TypeA { r, s }, subsets: combinations(r + s, r - 1) })
    }

    pub fn type_d(r: u32, vertex_limit: usize) -> Result<Self, Error> {
        if r < 5 {
            return Err(Error::Domain("type D model needs r >= 5"));
        }
        if r > 40 || (1usize << (r - 1)) > vertex_limit {
            let size = if r > 40 { usize::MAX } else { 1usize << (r - 1) };
            return Err(Error::SizeLimit { what: "type D vertices", size, limit: vertex_limit });
        }
        let masks = (0u64..1 << r).filter(|m| m.count_ones() % 2 == 0).collect();
        Ok(SubsetModel { kind: SubsetKind::TypeD { r }, subsets: lex_sorted(masks) })
    }

    pub fn for_params(p: &MinusculeParams, vertex_limit: usize) -> Result<Self, Error> {
        match p.family() {
            Family::TypeA { r, s } => Self::type_a(r, s, vertex_limit),
            Family::TypeD { r } => Self::type_d(r, vertex_limit),
            Family::E6 | Family::E7 => Err(Error::UnsupportedFamily("subset models")),
        }
    }

    pub fn kind(&self) -> SubsetKind {
        self.kind
    }

    pub fn subsets(&self) -> &[u64] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn weight_of(&self, t: u64, s: u64) -> i64 {
        match self.kind {
            SubsetKind::TypeA { .. } => i64::from((s & !t).count_ones()) - 1,
            SubsetKind::TypeD { .. } => i64::from((s ^ t).count_ones()) / 2 - 1,
        }
    }

    pub fn weight(&self, i: usize, j: usize) -> i64 {
        self.weight_of(self.subsets[i], self.subsets[j])
    }

    pub fn to_graph(&self) -> Result<Multigraph, Error> {
        let labels = self.subsets.iter().map(|&m| subset_label(m)).collect();
        Multigraph::from_fn(labels, |i, j| self.weight(i, j))
    }

    /// `φ` of the matching lattice: `(r+s)/((s+1)(r-1))` for type A, `4/r` for type D.
    pub fn phi(&self) -> Rational {
        let q = |n: u64, d: u64| Rational::new(BigInt::from(n), BigInt::from(d));
        match self.kind {
            SubsetKind::TypeA { r, s } => q(u64::from(r + s), u64::from((s + 1) * (r - 1))),
            SubsetKind::TypeD { r } => q(4, u64::from(r)),
        }
    }
}

pub fn build_type_a(r: u32, s: u32) -> Result<Multigraph, Error> {
    SubsetModel::type_a(r, s, DEFAULT_MODEL_VERTEX_LIMIT)?.to_graph()
}

pub fn build_type_d(r: u32) -> Result<Multigraph, Error> {
    SubsetModel::type_d(r, DEFAULT_MODEL_VERTEX_LIMIT)?.to_graph()
}

/// Number of unordered vertex pairs of weight `k` (`k = 0` counts non-edges).
pub fn s_k_closed_form(p: &MinusculeParams, k: u32) -> u128 {
    let k = u64::from(k);
    match p.family() {
        Family::TypeA { r, s } => {
            let (r, s) = (u64::from(r), u64::from(s));
            if k + 2 > r {
                return 0;
            }
            binomial(r + s, r - 1) * binomial(s + 1, k + 1) * binomial(r - 1, r - 2 - k) / 2
        }
        Family::TypeD { r } => {
            let r = u64::from(r);
            (1u128 << (r - 1)) * binomial(r, 2 * (k + 1)) / 2
        }
        Family::E6 => match k {
            0 => 216,
            1 => 135,
            _ => 0,
        },
        Family::E7 => match k {
            0 => 756,
            1 => 756,
            2 => 28,
            _ => 0,
        },
    }
}

/// Unnormalized integer coordinates of a weight vector `ω_J` and its squared norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub coords: Vec<i64>,
    pub norm_sq: i64,
}

impl WeightVector {
    pub fn dot(&self, other: &WeightVector) -> i64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    /// `ω·ω'` after scaling both to unit length; all model vectors share one norm.
    pub fn normalized_dot(&self, other: &WeightVector) -> Rational {
        Rational::new(BigInt::from(self.dot(other)), BigInt::from(self.norm_sq))
    }
}

/// Weight vectors in model vertex order.
///
/// Type A: `(s+1)` on `J` and `1-r` off it, squared norm `(r-1)(s+1)(r+s)`.
/// Type D: `+1` on `J` and `-1` off it, squared norm `r`.
pub fn weight_vectors(model: &SubsetModel) -> Vec<WeightVector> {
    match model.kind {
        SubsetKind::TypeA { r, s } => {
            let (ri, si) = (i64::from(r), i64::from(s));
            let norm_sq = (ri - 1) * (si + 1) * (ri + si);
            model
                .subsets
                .iter()
                .map(|&j| WeightVector {
                    coords: (0..r + s).map(|e| if j >> e & 1 == 1 { si + 1 } else { 1 - ri }).collect(),
                    norm_sq,
                })
                .collect()
        }
        SubsetKind::TypeD { r } => model
            .subsets
            .iter()
            .map(|&j| WeightVector {
                coords: (0..r).map(|e| if j >> e & 1 == 1 { 1 } else { -1 }).collect(),
                norm_sq: i64::from(r),
            })
            .collect(),
    }
}

pub fn weight_coordinates(p: &MinusculeParams) -> Result<Vec<WeightVector>, Error> {
    Ok(weight_vectors(&SubsetModel::for_params(p, DEFAULT_MODEL_VERTEX_LIMIT)?))
}

/// Checks `ω_T·ω_S = 1 - φ(1 + M(T,S))` for every pair; returns the pair count.
pub fn check_gram_identity(model: &SubsetModel) -> Result<u64, Error> {
    let vectors = weight_vectors(model);
    let phi = model.phi();
    let (num, den) = (phi.numer().to_i128().unwrap_or(0), phi.denom().to_i128().unwrap_or(1));
    let mut pairs = 0;
    for i in 0..vectors.len() {
        for j in (i + 1)..vectors.len() {
            let dot = i128::from(vectors[i].dot(&vectors[j]));
            let norm = i128::from(vectors[i].norm_sq);
            let m = i128::from(model.weight(i, j));
            // dot / norm = 1 - (num/den)(1 + m)
            if dot * den != norm * (den - num * (1 + m)) {
                return Err(Error::ModelDisagreement(format!(
                    "Gram identity fails for {} and {}: dot {} over norm {}, weight {}",
                    subset_label(model.subsets[i]),
                    subset_label(model.subsets[j]),
                    dot,
                    norm,
                    m
                )));
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn weight_classes(g: &Multigraph, ids: &mut BTreeMap<Rational, u16>) -> Vec<u16> {
    let n = g.n();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for w in g.row(i) {
            let next = ids.len() as u16;
            out.push(*ids.entry(w.clone()).or_insert(next));
        }
    }
    out
}

fn profile_signature(classes: &[u16], n: usize, i: usize) -> Vec<u16> {
    let mut p = classes[i * n..(i + 1) * n].to_vec();
    p.sort_unstable();
    p
}

/// A weight-preserving bijection `g → h`, as `map[i] = image of vertex i`.
///
/// Backtracking over candidate bitsets, always branching on the vertex with
/// fewest candidates and trying the same index first. Limited to 64 vertices.
pub fn find_isomorphism(g: &Multigraph, h: &Multigraph) -> Result<Option<Vec<usize>>, Error> {
    let n = g.n();
    if n != h.n() {
        return Ok(None);
    }
    if n > 64 {
        return Err(Error::SizeLimit { what: "explicit isomorphism search", size: n, limit: 64 });
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut ids = BTreeMap::new();
    let gc = weight_classes(g, &mut ids);
    let hc = weight_classes(h, &mut ids);
    let classes = ids.len();
    // masks[v][c]: h-vertices u with class(v, u) = c
    let mut masks = vec![0u64; n * classes];
    for v in 0..n {
        for u in 0..n {
            if u != v {
                masks[v * classes + hc[v * n + u] as usize] |= 1 << u;
            }
        }
    }
    let hsig: Vec<Vec<u16>> = (0..n).map(|v| profile_signature(&hc, n, v)).collect();
    let mut cand = vec![0u64; n];
    for (i, c) in cand.iter_mut().enumerate() {
        let sig = profile_signature(&gc, n, i);
        for (v, hs) in hsig.iter().enumerate() {
            if *hs == sig {
                *c |= 1 << v;
            }
        }
        if *c == 0 {
            return Ok(None);
        }
    }
    let mut map = vec![usize::MAX; n];
    let ctx = Search { n, classes, gc: &gc, masks: &masks };
    Ok(ctx.extend(&mut map, cand, 0).then_some(map))
}

struct Search<'a> {
    n: usize,
    classes: usize,
    gc: &'a [u16],
    masks: &'a [u64],
}

impl Search<'_> {
    fn extend(&self, map: &mut [usize], cand: Vec<u64>, used: u64) -> bool {
        let next = (0..self.n)
            .filter(|&i| map[i] == usize::MAX)
            .min_by_key(|&i| ((cand[i] & !used).count_ones(), i));
        let Some(i) = next else {
            return true;
        };
        let options = cand[i] & !used;
        let mut order: Vec<usize> = (0..self.n).filter(|&v| options >> v & 1 == 1).collect();
        if let Some(p) = order.iter().position(|&v| v == i) {
            order[..=p].rotate_right(1);
        }
        for v in order {
            map[i] = v;
            let mut refined = cand.clone();
            let mut dead = false;
            for k in 0..self.n {
                if map[k] != usize::MAX {
                    continue;
                }
                let c = self.gc[i * self.n + k] as usize;
                refined[k] &= self.masks[v * self.classes + c];
                if refined[k] & !(used | 1 << v) == 0 {
                    dead = true;
                    break;
                }
            }
            if !dead && self.extend(map, refined, used | 1 << v) {
                return true;
            }
            map[i] = usize::MAX;
        }
        false
    }
}

/// Outcome of comparing the lattice construction with the subset model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub family: Family,
    pub n: usize,
    pub histogram: WeightHistogram,
    pub certificate: SrmgCertificate,
    pub spectrum: Spectrum,
    pub gram_pairs: u64,
    /// Lattice vertex `i` maps to model vertex `isomorphism[i]`; present when `n ≤ 64`.
    pub isomorphism: Option<Vec<usize>>,
}

fn sorted_profiles(g: &Multigraph) -> Vec<Vec<Rational>> {
    let mut v: Vec<Vec<Rational>> = (0..g.n()).map(|i| g.weight_profile(i)).collect();
    v.sort();
    v
}

pub fn check_model_agreement(p: &MinusculeParams) -> Result<AgreementReport, Error> {
    let model = SubsetModel::for_params(p, DEFAULT_MODEL_VERTEX_LIMIT)?;
    let model_graph = model.to_graph()?;
    let divisors = minus_one_divisors(p)?;
    let lattice_graph = graph_from_divisors(&divisors, p)?;
    let disagree = |what: &str, l: String, m: String| {
        Error::ModelDisagreement(format!("{what}: lattice {l}, model {m}"))
    };
    if lattice_graph.n() != model_graph.n() {
        return Err(disagree("vertex count", format!("{}", lattice_graph.n()), format!("{}", model_graph.n())));
    }
    let histogram = lattice_graph.weight_histogram();
    let model_histogram = model_graph.weight_histogram();
    if histogram != model_histogram {
        return Err(disagree("weight histogram", format!("{histogram:?}"), format!("{model_histogram:?}")));
    }
    if sorted_profiles(&lattice_graph) != sorted_profiles(&model_graph) {
        return Err(Error::ModelDisagreement("per-vertex weight profiles differ".into()));
    }
    let certificate = verify_srmg(&lattice_graph)?;
    let model_certificate = verify_srmg(&model_graph)?;
    if certificate != model_certificate {
        return Err(disagree("regularity certificate", format!("{certificate}"), format!("{model_certificate}")));
    }
    let spectrum = closed_form_spectrum(p);
    verify_spectrum_exact(&lattice_graph, &spectrum)?;
    verify_spectrum_exact(&model_graph, &spectrum)?;
    let gram_pairs = check_gram_identity(&model)?;
    let isomorphism = if lattice_graph.n() <= EXPLICIT_ISOMORPHISM_LIMIT {
        match find_isomorphism(&lattice_graph, &model_graph)? {
            Some(map) => Some(map),
            None => return Err(Error::ModelDisagreement("no weight-preserving bijection exists".into())),
        }
    } else {
        None
    };
    Ok(AgreementReport { family: p.family(), n: lattice_graph.n(), histogram, certificate, spectrum, gram_pairs, isomorphism })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn type_a_small_cases() {
        let g = build_type_a(4, 1).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.labels()[0], "{1,2,3}");
        assert_eq!(g.edges().count(), 15);
        // positive weight exactly when the complementary 2-sets are disjoint
        let m = SubsetModel::type_a(4, 1, 100).unwrap();
        for i in 0..10 {
            for j in (i + 1)..10 {
                let (ci, cj) = (!m.subsets()[i] & 0b11111, !m.subsets()[j] & 0b11111);
                assert_eq!(m.weight(i, j) > 0, ci & cj == 0);
            }
        }
        let g42 = build_type_a(4, 2).unwrap();
        assert_eq!(g42.n(), 20);
        assert!(g42.edges().all(|(_, _, w)| *w >= int(1) && *w <= int(2)));
        assert_eq!(build_type_a(5, 1).unwrap().weight_histogram().count_int(1), 45);
    }

    #[test]
    fn type_d_small_cases() {
        let g = build_type_d(5).unwrap();
        assert_eq!(g.n(), 16);
        assert_eq!(g.labels()[0], "{}");
        assert_eq!(g.labels()[1], "{1,2}");
        assert_eq!(g.weight(0, 1), &int(0));
        assert_eq!(g.weight_histogram().count_int(1), 40);
        assert_eq!(build_type_d(6).unwrap().regular_degree(), Some(int(17)));
        assert!(build_type_d(4).is_err());
    }

    #[test]
    fn closed_form_counts() {
        assert_eq!(s_k_closed_form(&MinusculeParams::type_a(4, 1).unwrap(), 1), 15);
        assert_eq!(s_k_closed_form(&MinusculeParams::type_d(5).unwrap(), 1), 40);
        assert_eq!(s_k_closed_form(&MinusculeParams::e7(), 2), 28);
        assert_eq!(s_k_closed_form(&MinusculeParams::e7(), 3), 0);
    }

    #[test]
    fn weight_vector_examples() {
        let d5 = MinusculeParams::type_d(5).unwrap();
        let w = weight_coordinates(&d5).unwrap();
        assert_eq!(w[0], WeightVector { coords: vec![-1; 5], norm_sq: 5 });
        // {} against {1,2}: three agreeing and two disagreeing signs
        assert_eq!(w[0].normalized_dot(&w[1]), ratio(1, 5));
        assert!(matches!(weight_coordinates(&MinusculeParams::e6()), Err(Error::UnsupportedFamily(_))));
        let a41 = SubsetModel::type_a(4, 1, 100).unwrap();
        assert_eq!(check_gram_identity(&a41).unwrap(), 45);
    }

    #[test]
    fn self_isomorphism_is_identity() {
        let g = build_type_d(5).unwrap();
        assert_eq!(find_isomorphism(&g, &g).unwrap(), Some((0..16).collect()));
    }

    #[test]
    fn non_isomorphic_graphs() {
        let labels: Vec<String> = (0..4).map(|i| format!("{i}")).collect();
        let path = Multigraph::from_fn(labels.clone(), |i, j| i64::from(j == i + 1)).unwrap();
        let star = Multigraph::from_fn(labels, |i, _| i64::from(i == 0)).unwrap();
        assert_eq!(find_isomorphism(&path, &star).unwrap(), None);
    }

    #[test]
    fn lattice_and_models_agree() {
        for p in [MinusculeParams::type_a(4, 1).unwrap(), MinusculeParams::type_d(5).unwrap()] {
            let report = check_model_agreement(&p).unwrap();
            let map = report.isomorphism.expect("small graphs get an explicit bijection");
            let lattice = graph_from_divisors(&minus_one_divisors(&p).unwrap(), &p).unwrap();
            let model = SubsetModel::for_params(&p, 100).unwrap().to_graph().unwrap();
            for i in 0..report.n {
                for j in 0..report.n {
                    assert_eq!(lattice.weight(i, j), model.weight(map[i], map[j]));
                }
            }
        }
    }
}
