//! Exact maximum cuts by Gray-code enumeration, and seeded local search for
//! graphs beyond enumeration range.
//!
//! Enumeration keeps vertex 0 outside `S` (cuts are symmetric under
//! complement) and walks the remaining `2^(n-1)` subsets in Gray-code order.
//! Each vertex carries its flip gain, the change in cut weight if it switched
//! sides, so a step costs `O(n)` machine-integer updates. The space splits
//! into blocks by fixing the highest vertices, which parallel drivers scan
//! independently.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::RngCore;

use crate::error::Error;
use crate::graph::{Cut, IntWeights, Multigraph};
use crate::rational::Rational;
use crate::rounding::{chunk_rng, integer_weights};

pub const BRUTE_FORCE_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Exhaustive,
    LocalSearch,
}

impl OracleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleMethod::Exhaustive => "exhaustive",
            OracleMethod::LocalSearch => "local_search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub value: Rational,
    pub witness: Cut,
    pub method: OracleMethod,
    pub exact: bool,
}

/// Best cut of one enumeration block: value in scaled units and the membership mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockBest {
    pub value: i64,
    pub mask: u64,
}

impl BlockBest {
    /// Larger value wins; equal values keep the smaller mask.
    pub fn better(self, other: BlockBest) -> BlockBest {
        if other.value > self.value || (other.value == self.value && other.mask < self.mask) {
            other
        } else {
            self
        }
    }
}

/// Gains `g_v` = change in cut weight when `v` switches sides.
fn initial_gains(w: &IntWeights, in_s: impl Fn(usize) -> bool) -> (i64, Vec<i64>) {
    let n = w.n;
    let mut value = 0;
    let mut gains = vec![0i64; n];
    for (v, gain) in gains.iter_mut().enumerate() {
        let row = w.row(v);
        for (u, &x) in row.iter().enumerate() {
            if u == v {
                continue;
            }
            if in_s(u) == in_s(v) {
                *gain += x;
            } else {
                *gain -= x;
                if in_s(v) {
                    value += x;
                }
            }
        }
    }
    (value, gains)
}

fn flip(w: &IntWeights, side: &mut [bool], gains: &mut [i64], value: &mut i64, v: usize) {
    *value += gains[v];
    side[v] = !side[v];
    let row = w.row(v);
    for (u, &x) in row.iter().enumerate() {
        if u == v || x == 0 {
            continue;
        }
        // u and v now on the same side: moving u would newly cut the edge
        if side[u] == side[v] {
            gains[u] += 2 * x;
        } else {
            gains[u] -= 2 * x;
        }
    }
    gains[v] = -gains[v];
}

/// Number of vertices (excluding vertex 0) fixed per block when splitting `n` vertices into `2^bits` blocks.
pub fn split_bits(n: usize, wanted: u32) -> u32 {
    wanted.min(n.saturating_sub(1) as u32)
}

/// Scans every cut whose top `bits` vertices are fixed to `prefix`, vertex 0 outside `S`.
pub fn brute_force_block(w: &IntWeights, bits: u32, prefix: u64) -> BlockBest {
    let n = w.n;
    if n <= 1 {
        return BlockBest { value: 0, mask: 0 };
    }
    let free = (n - 1) as u32 - bits;
    let base = prefix << (1 + free);
    let mut side: Vec<bool> = (0..n).map(|i| base >> i & 1 == 1).collect();
    let (mut value, mut gains) = initial_gains(w, |i| base >> i & 1 == 1);
    let mut mask = base;
    let mut best = BlockBest { value, mask };
    for step in 1u64..(1u64 << free) {
        let v = 1 + step.trailing_zeros() as usize;
        flip(w, &mut side, &mut gains, &mut value, v);
        mask ^= 1 << v;
        if value >= best.value {
            best = best.better(BlockBest { value, mask });
        }
    }
    best
}

fn check_size(n: usize, limit: usize) -> Result<(), Error> {
    if n > limit || n > 64 {
        return Err(Error::SizeLimit { what: "exhaustive max cut (use local search)", size: n, limit: limit.min(64) });
    }
    Ok(())
}

/// Combines block results into a verified exact answer.
pub fn finish_brute_force(g: &Multigraph, w: &IntWeights, blocks: impl IntoIterator<Item = BlockBest>) -> Result<OracleResult, Error> {
    let best = blocks.into_iter().reduce(BlockBest::better).unwrap_or(BlockBest { value: 0, mask: 0 });
    let witness = Cut::from_mask(g.n(), best.mask);
    finish(g, w.to_rational(best.value), witness, OracleMethod::Exhaustive, true)
}

fn finish(g: &Multigraph, value: Rational, witness: Cut, method: OracleMethod, exact: bool) -> Result<OracleResult, Error> {
    let check = g.cut_weight(&witness)?;
    if check != value {
        return Err(Error::Inconsistency { what: "max cut witness", left: format!("{check}"), right: format!("{value}") });
    }
    Ok(OracleResult { value, witness, method, exact })
}

pub fn brute_force_maxcut(g: &Multigraph) -> Result<OracleResult, Error> {
    brute_force_maxcut_with_limit(g, BRUTE_FORCE_LIMIT)
}

pub fn brute_force_maxcut_with_limit(g: &Multigraph, limit: usize) -> Result<OracleResult, Error> {
    check_size(g.n(), limit)?;
    let w = integer_weights(g)?;
    finish_brute_force(g, &w, [brute_force_block(&w, 0, 0)])
}

/// Blocks for a parallel scan: `(bits, prefix)` pairs covering the whole space.
pub fn brute_force_plan(g: &Multigraph, limit: usize, wanted_bits: u32) -> Result<(IntWeights, Vec<(u32, u64)>), Error> {
    check_size(g.n(), limit)?;
    let w = integer_weights(g)?;
    let bits = split_bits(g.n(), wanted_bits);
    Ok((w, (0..1u64 << bits).map(|p| (bits, p)).collect()))
}

/// One steepest-ascent run from a random start; returns the value and sides.
pub fn local_search_restart(w: &IntWeights, seed: u64, index: u64) -> (i64, Vec<bool>) {
    let n = w.n;
    let mut rng = chunk_rng(seed, index);
    let mut side = Vec::with_capacity(n);
    let mut bits = 0u64;
    for i in 0..n {
        if i % 64 == 0 {
            bits = rng.next_u64();
        }
        side.push(bits >> (i % 64) & 1 == 1);
    }
    let snapshot = side.clone();
    let (mut value, mut gains) = initial_gains(w, |i| snapshot[i]);
    loop {
        let (v, &g) = match gains.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))) {
            Some(x) => x,
            None => break,
        };
        if g <= 0 {
            break;
        }
        flip(w, &mut side, &mut gains, &mut value, v);
    }
    if side.first() == Some(&true) {
        side.iter_mut().for_each(|s| *s = !*s);
    }
    (value, side)
}

/// Best of the restart results; the earliest restart wins ties.
pub fn finish_local_search(g: &Multigraph, w: &IntWeights, runs: impl IntoIterator<Item = (i64, Vec<bool>)>) -> Result<OracleResult, Error> {
    let mut best: Option<(i64, Vec<bool>)> = None;
    for run in runs {
        if best.as_ref().is_none_or(|b| run.0 > b.0) {
            best = Some(run);
        }
    }
    let (value, side) = best.ok_or(Error::Domain("local search needs at least one restart"))?;
    let witness = Cut::from_bools(&side);
    if !is_locally_optimal(g, &witness)? {
        return Err(Error::Inconsistency { what: "local search", left: "improving flip".into(), right: "none".into() });
    }
    finish(g, w.to_rational(value), witness, OracleMethod::LocalSearch, false)
}

pub fn local_search_maxcut(g: &Multigraph, restarts: u64, seed: u64) -> Result<OracleResult, Error> {
    let w = integer_weights(g)?;
    finish_local_search(g, &w, (0..restarts).map(|i| local_search_restart(&w, seed, i)))
}

/// No single vertex flip increases the cut weight (checked in exact arithmetic).
pub fn is_locally_optimal(g: &Multigraph, cut: &Cut) -> Result<bool, Error> {
    let n = g.n();
    if cut.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: cut.len() });
    }
    for v in 0..n {
        let mut gain = Rational::from_integer(0.into());
        for u in 0..n {
            if u == v {
                continue;
            }
            if cut.contains(u) == cut.contains(v) {
                gain += g.weight(u, v);
            } else {
                gain -= g.weight(u, v);
            }
        }
        if gain > Rational::from_integer(0.into()) {
            return Ok(false);
        }
    }
    Ok(true)
}
