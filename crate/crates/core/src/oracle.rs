//! Brute-force ground truth, independent of the recursion: the Hilbert
//! series from parking-function statistics, direct counts of counting
//! states over `S_n`, and stable polynomials recovered by interpolating
//! exact dimensions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::combinat::{descent_positions, pf_stats_of, wseq_into, LexPermutations, ParkingFunctions, Permutation};
use crate::polyalg::interpolate;
use crate::schedules::{BivariateSeries, HilbertCache};
use crate::stability::CountingState;
use crate::{DimensionPolynomial, Error};

/// Enumeration bounds for the exhaustive oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for the schedules sum over `S_n`.
    pub schedules_max_n: usize,
    /// Largest `n` for the sum over parking functions.
    pub parking_max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { schedules_max_n: 10, parking_max_n: 8 }
    }
}

/// `Σ_{P ∈ PF(n)} q^{dinv(P)} t^{area(P)}`, in parallel over the first
/// preference.
pub fn hilbert_parking(n: usize) -> BivariateSeries {
    if n == 0 {
        return BivariateSeries::one();
    }
    let counts = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut counts: HashMap<(usize, usize), u64> = HashMap::new();
            let mut it = ParkingFunctions::with_first(n, first);
            while let Some(p) = it.next_slice() {
                let (area, dinv) = pf_stats_of(p);
                *counts.entry((dinv, area)).or_default() += 1;
            }
            counts
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    counts.into_iter().map(|(k, c)| (k, BigUint::from(c))).collect()
}

/// Prefix → (count, lexicographically first witness), per descent set.
type Classes = HashMap<Vec<usize>, BTreeMap<Vec<usize>, (u64, Vec<usize>)>>;

/// All of `S_n` bucketed by descent set, then by w-prefix up to the last
/// descent, with a witness permutation per prefix.
#[derive(Debug)]
pub struct DescentTable {
    n: usize,
    classes: Classes,
}

impl DescentTable {
    pub fn new(n: usize) -> Self {
        let mut classes = Classes::new();
        let mut perms = LexPermutations::new(n);
        let mut w = vec![0; n];
        while let Some(p) = perms.next_slice() {
            let d = descent_positions(p);
            wseq_into(p, &mut w);
            let prefix = w[..d.last().copied().unwrap_or(0)].to_vec();
            let entry = classes.entry(d).or_default().entry(prefix).or_insert_with(|| (0, p.to_vec()));
            entry.0 += 1;
        }
        DescentTable { n, classes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn matching<'a>(&'a self, state: &'a CountingState) -> impl Iterator<Item = &'a (u64, Vec<usize>)> + 'a {
        let tau = state.tau();
        let u = state.lower_bounds();
        self.classes
            .get(state.descent_set().positions())
            .into_iter()
            .flat_map(|m| m.iter())
            .filter(move |(prefix, _)| {
                prefix.iter().zip(tau).enumerate().all(|(i, (&w, &t))| {
                    if u.contains(&(i + 1)) {
                        w >= t
                    } else {
                        w == t
                    }
                })
            })
            .map(|(_, v)| v)
    }

    /// `|D_S ∩ W(τ, U)|` in `S_n`.
    pub fn count(&self, state: &CountingState) -> u64 {
        self.matching(state).map(|(c, _)| c).sum()
    }

    /// Some permutation counted by [`DescentTable::count`].
    pub fn witness(&self, state: &CountingState) -> Option<Permutation> {
        self.matching(state)
            .map(|(_, p)| p)
            .min()
            .map(|p| Permutation::new(p.clone()).expect("enumerated permutation"))
    }
}

/// Shared [`DescentTable`]s keyed by `n`.
#[derive(Debug, Default)]
pub struct BruteForce {
    tables: Mutex<HashMap<usize, Arc<DescentTable>>>,
}

impl BruteForce {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn table(&self, n: usize) -> Arc<DescentTable> {
        if let Some(t) = self.tables.lock().expect("table lock").get(&n) {
            return Arc::clone(t);
        }
        let t = Arc::new(DescentTable::new(n));
        Arc::clone(self.tables.lock().expect("table lock").entry(n).or_insert(t))
    }

    pub fn count(&self, state: &CountingState, n: usize) -> u64 {
        self.table(n).count(state)
    }
}

/// Direct count over `S_n` of permutations with descent set exactly `S`,
/// `w_i = τ_i` off `U` and `w_i ≥ τ_i` on `U`.
pub fn count_bruteforce(state: &CountingState, n: usize) -> u64 {
    let sd = state.descent_set().last();
    let mut perms = LexPermutations::new(n);
    let mut w = vec![0; n];
    let mut count = 0;
    while let Some(p) = perms.next_slice() {
        if descent_positions(p) != state.descent_set().positions() {
            continue;
        }
        wseq_into(p, &mut w);
        let ok = (1..=sd).all(|i| {
            let t = state.tau()[i - 1];
            if state.lower_bounds().contains(&i) {
                w[i - 1] >= t
            } else {
                w[i - 1] == t
            }
        });
        count += u64::from(ok);
    }
    count
}

/// `P_{a,b}` through `(n, dim DR_n^{a,b})` for `n = a+b, …, 2(a+b)`.
pub fn interpolate_dimension_poly(a: usize, b: usize, limits: &Limits, cache: &HilbertCache) -> Result<DimensionPolynomial, Error> {
    let top = 2 * (a + b);
    if top > limits.schedules_max_n {
        return Err(Error::BoundExceeded { what: "schedules n", requested: top, bound: limits.schedules_max_n });
    }
    let samples: Vec<usize> = (a + b..=top).collect();
    // fill the cache in parallel before reading it back in order
    samples.par_iter().for_each(|&n| {
        cache.get(n);
    });
    let points: Vec<(i64, BigRational)> = samples
        .iter()
        .map(|&n| (n as i64, BigRational::from_integer(BigInt::from(cache.dim(n, a, b)))))
        .collect();
    interpolate(&points)
}

/// One comparison in a [`VerificationReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Outcome of a verification suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: String,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport { subject: subject.into(), records: Vec::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let pass = expected == actual;
        self.records.push(CheckRecord { name: name.into(), expected, actual, pass });
    }

    /// Records a check whose pass/fail is decided by the caller.
    pub fn record(&mut self, name: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display, pass: bool) {
        self.records.push(CheckRecord { name: name.into(), expected: expected.to_string(), actual: actual.to_string(), pass });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn total(&self) -> usize {
        self.records.len()
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.pass).count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{}: {}/{} checks passed [{status}]", self.subject, self.total() - self.failures(), self.total())
    }
}
