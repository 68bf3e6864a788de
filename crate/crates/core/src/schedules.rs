//! The Hilbert series of the diagonal coinvariants as a sum over `S_n` of
//! `t^maj(σ) ∏ [w_i(σ)]_q`.
//!
//! Permutations are bucketed by `(maj, multiset of w-values)` first, so each
//! distinct q-product is expanded once rather than once per permutation.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinat::{maj_of, wseq_into, LexPermutations, WSequence};
use crate::polyalg::q_product;

/// Largest `n` accepted by [`hilbert_schedules`]; the bucket key packs one
/// 4-bit count per w-value.
pub const MAX_SCHEDULES_N: usize = 15;

/// A polynomial in `q` and `t` with positive integer coefficients, keyed by
/// `(q-degree, t-degree)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariateSeries {
    coeffs: BTreeMap<(usize, usize), BigUint>,
}

impl BivariateSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut s = Self::new();
        s.add(0, 0, BigUint::from(1u8));
        s
    }

    /// Adds `c q^a t^b`.
    pub fn add(&mut self, a: usize, b: usize, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.coeffs.entry((a, b)).or_default() += c;
    }

    /// `[q^a t^b]`, zero when absent.
    pub fn get(&self, a: usize, b: usize) -> BigUint {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// Entries `((a, b), c)` in increasing `(a, b)` order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &BigUint)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at `q = t = 1`.
    pub fn total(&self) -> BigUint {
        self.coeffs.values().sum()
    }

    /// Whether `[q^a t^b] = [q^b t^a]` for every pair.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(&(a, b), c)| self.coeffs.get(&(b, a)) == Some(c))
    }

    pub fn max_q_degree(&self) -> usize {
        self.coeffs.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn max_t_degree(&self) -> usize {
        self.coeffs.keys().map(|k| k.1).max().unwrap_or(0)
    }
}

impl FromIterator<((usize, usize), BigUint)> for BivariateSeries {
    fn from_iter<I: IntoIterator<Item = ((usize, usize), BigUint)>>(iter: I) -> Self {
        let mut s = Self::new();
        for ((a, b), c) in iter {
            s.add(a, b, c);
        }
        s
    }
}

type Buckets = HashMap<(usize, u64), u64>;

/// Packs the multiset of w-values ≥ 2 as 4-bit counts.
fn bucket_key(w: &[usize]) -> u64 {
    w.iter().filter(|&&x| x >= 2).fold(0u64, |k, &x| k + (1u64 << (4 * (x - 2))))
}

fn unpack_key(key: u64, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for v in 2..=n.max(1) {
        let c = (key >> (4 * (v - 2))) & 0xf;
        out.extend(std::iter::repeat_n(v, c as usize));
    }
    out
}

fn bucket_block(mut perms: LexPermutations, n: usize) -> Buckets {
    let mut buckets = Buckets::new();
    let mut w = vec![0; n];
    while let Some(s) = perms.next_slice() {
        wseq_into(s, &mut w);
        *buckets.entry((maj_of(s), bucket_key(&w))).or_default() += 1;
    }
    buckets
}

fn expand(buckets: Buckets, n: usize) -> BivariateSeries {
    // accumulate in u128 and promote once at the end
    let mut acc: BTreeMap<(usize, usize), u128> = BTreeMap::new();
    for ((maj, key), count) in buckets {
        let poly = q_product(unpack_key(key, n));
        for (a, c) in poly.coeffs().iter().enumerate() {
            let c = c.to_u128().expect("q-product coefficient fits in u128");
            *acc.entry((a, maj)).or_default() += c * u128::from(count);
        }
    }
    acc.into_iter().map(|(k, c)| (k, BigUint::from(c))).collect()
}

fn merge(mut a: Buckets, b: Buckets) -> Buckets {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// `Hilb(DR_n)` by the schedules formula, in parallel over blocks of `S_n`
/// sharing a first entry. Panics if `n > MAX_SCHEDULES_N`.
pub fn hilbert_schedules(n: usize) -> BivariateSeries {
    assert!(n <= MAX_SCHEDULES_N, "n = {n} exceeds {MAX_SCHEDULES_N}");
    if n == 0 {
        return BivariateSeries::one();
    }
    let buckets = (1..=n)
        .into_par_iter()
        .map(|first| bucket_block(LexPermutations::with_first(n, first), n))
        .reduce(Buckets::new, merge);
    expand(buckets, n)
}

/// Single-threaded [`hilbert_schedules`].
pub fn hilbert_schedules_sequential(n: usize) -> BivariateSeries {
    assert!(n <= MAX_SCHEDULES_N, "n = {n} exceeds {MAX_SCHEDULES_N}");
    if n == 0 {
        return BivariateSeries::one();
    }
    expand(bucket_block(LexPermutations::new(n), n), n)
}

/// `dim DR_n^{a,b}`, the coefficient of `q^a t^b`.
pub fn dim_exact(n: usize, a: usize, b: usize) -> BigUint {
    hilbert_schedules(n).get(a, b)
}

/// Replaces every value `y` by `min(y, k + 1)`; the coefficient of `q^k`
/// in a product of q-integers only sees factors up to `[k+1]_q`.
pub fn truncate_w(w: &WSequence, k: usize) -> WSequence {
    WSequence(w.values().iter().map(|&y| y.min(k + 1)).collect())
}

/// Memoised Hilbert series keyed by `n`, shareable across threads.
#[derive(Debug, Default)]
pub struct HilbertCache {
    series: Mutex<HashMap<usize, Arc<BivariateSeries>>>,
}

impl HilbertCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: usize) -> Arc<BivariateSeries> {
        if let Some(s) = self.series.lock().expect("cache lock").get(&n) {
            return Arc::clone(s);
        }
        // computed outside the lock; a racing duplicate is harmless
        let s = Arc::new(hilbert_schedules(n));
        Arc::clone(self.series.lock().expect("cache lock").entry(n).or_insert(s))
    }

    pub fn dim(&self, n: usize, a: usize, b: usize) -> BigUint {
        self.get(n).get(a, b)
    }
}
