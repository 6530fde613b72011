//! Counting identities behind the closed forms, checked against direct
//! enumeration of subsets.

use divisor_maxcut::models::s_k_closed_form;
use divisor_maxcut::rational::binomial_i;
use divisor_maxcut::MinusculeParams;
use proptest::prelude::*;

fn c(n: i64, k: i64) -> u128 {
    binomial_i(n, k)
}

fn subsets_of_size(m: u32, k: u32) -> Vec<u64> {
    (0u64..1 << m).filter(|x| x.count_ones() == k).collect()
}

/// `counts[k]` = unordered pairs of `(r-1)`-subsets of `[r+s]` with `|J \ T| = k + 1`.
fn pair_counts(r: u32, s: u32) -> Vec<u128> {
    let sets = subsets_of_size(r + s, r - 1);
    let mut counts = vec![0u128; s as usize + 1];
    for (i, &j) in sets.iter().enumerate() {
        for &t in &sets[i + 1..] {
            counts[(j & !t).count_ones() as usize - 1] += 1;
        }
    }
    counts
}

fn type_a_params() -> impl Iterator<Item = (u32, u32)> {
    (3..=12u32).flat_map(|r| (1..=12 - r).map(move |s| (r, s)))
}

#[test]
fn type_a_edge_counts() {
    for (r, s) in type_a_params() {
        let counts = pair_counts(r, s);
        let (ri, si) = (i64::from(r), i64::from(s));
        let n = c(ri + si, ri - 1);
        let mut total = 0;
        let mut first = 0;
        let mut second = 0;
        for (k, &count) in counts.iter().enumerate() {
            let k = k as i64;
            // S_k = ½ C(r+s, r-1) C(s+1, k+1) C(r-1, r-1-(k+1))
            assert_eq!(2 * count, n * c(si + 1, k + 1) * c(ri - 1, ri - 2 - k), "S_{k} at ({r},{s})");
            total += count;
            first += count * (k as u128 + 1);
            second += count * c(k + 1, 2);
        }
        assert_eq!(2 * total, n * (n - 1), "sum at ({r},{s})");
        assert_eq!(2 * first, n * (si as u128 + 1) * c(ri + si - 1, ri - 2), "first moment at ({r},{s})");
        assert_eq!(2 * second, n * c(si + 1, 2) * c(ri + si - 2, ri - 3), "second moment at ({r},{s})");
    }
}

#[test]
fn library_counts_match_enumeration() {
    for (r, s) in type_a_params().filter(|&(r, s)| r >= 4 && s + 2 <= r && r + s <= 10) {
        let p = MinusculeParams::type_a(r, s).unwrap();
        let counts = pair_counts(r, s);
        for (k, &count) in counts.iter().enumerate() {
            assert_eq!(s_k_closed_form(&p, k as u32), count, "({r},{s}) k = {k}");
        }
    }
}

fn parity_moments(r: u32) -> ([u128; 3], [u128; 3]) {
    let mut even = [0u128; 3];
    let mut odd = [0u128; 3];
    for x in 0u64..1 << r {
        let size = u128::from(x.count_ones());
        let side = if size % 2 == 0 { &mut even } else { &mut odd };
        for (j, slot) in side.iter_mut().enumerate() {
            *slot += size.pow(j as u32);
        }
    }
    (even, odd)
}

#[test]
fn even_odd_moments() {
    for r in 3..=14u32 {
        let (even, odd) = parity_moments(r);
        assert_eq!(even, odd, "r = {r}");
        let r128 = u128::from(r);
        assert_eq!(even[0], 1 << (r - 1));
        assert_eq!(even[1], r128 << (r - 2));
        assert_eq!(even[2], (r128 * (r128 - 1) << (r - 3)) + (r128 << (r - 2)));
    }
}

#[test]
fn even_subset_row_square() {
    // Σ_{S even} (|S|/2 - 1)² = (r² - 7r + 16) 2^{r-5}
    for r in 5..=14u32 {
        let direct: i128 = (0u64..1 << r)
            .filter(|x| x.count_ones() % 2 == 0)
            .map(|x| {
                let w = i128::from(x.count_ones() / 2) - 1;
                w * w
            })
            .sum();
        let r = i128::from(r);
        assert_eq!(direct, (r * r - 7 * r + 16) << (r - 5));
    }
}

#[test]
fn hockey_stick() {
    for s in 0..=12i64 {
        for m in 1..=12i64 {
            let lhs: u128 = (0..=s).map(|j| j as u128 * c(s, j) * c(m, m - j)).sum();
            // choose a team of m from s + m, one captain among the first s players
            let direct = subsets_of_size((s + m) as u32, m as u32)
                .into_iter()
                .map(|x| u128::from((x & ((1u64 << s) - 1)).count_ones()))
                .sum::<u128>();
            assert_eq!(lhs, direct, "s = {s}, m = {m}");
            assert_eq!(lhs, s as u128 * c(m + s - 1, m - 1), "s = {s}, m = {m}");
        }
    }
}

proptest! {
    #[test]
    fn vandermonde_form_of_hockey_stick(s in 0i64..40, m in 1i64..40) {
        let lhs: u128 = (0..=s).map(|j| j as u128 * c(s, j) * c(m, m - j)).sum();
        prop_assert_eq!(lhs, s as u128 * c(m + s - 1, m - 1));
    }

    #[test]
    fn type_a_counts_sum_to_all_pairs(r in 3i64..30, s in 1i64..12) {
        let n = c(r + s, r - 1);
        let total: u128 = (0..=s).map(|k| n * c(s + 1, k + 1) * c(r - 1, r - 2 - k)).sum();
        prop_assert_eq!(total, n * (n - 1));
    }
}
