//! Permutations and parking functions with the statistics the Hilbert series
//! is built from: descents, runs, major index and w-sequences on one side,
//! area and dinv on the other.
//!
//! Positions are 1-based throughout the public API, matching the usual
//! one-line notation; entries are the values `1..=n`.

use std::fmt;
use std::ops::RangeInclusive;

use crate::polyalg::q_product;
use crate::{Error, QPolynomial};

/// A permutation of `1..=n` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<usize>,
}

impl Permutation {
    pub fn new(entries: Vec<usize>) -> Result<Self, Error> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            if v == 0 || v > n || seen[v] {
                return Err(Error::NotAPermutation(v));
            }
            seen[v] = true;
        }
        Ok(Permutation { entries })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { entries: (1..=n).collect() }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn descents(&self) -> DescentSet {
        DescentSet { positions: descent_positions(&self.entries) }
    }

    pub fn maj(&self) -> usize {
        maj_of(&self.entries)
    }

    /// Maximal increasing blocks as 1-based inclusive index ranges.
    pub fn runs(&self) -> Vec<RangeInclusive<usize>> {
        let mut out = Vec::new();
        let mut start = 1;
        for e in self.descents().positions.iter().copied().chain(Some(self.len())) {
            if e >= start {
                out.push(start..=e);
            }
            start = e + 1;
        }
        out
    }

    pub fn wseq(&self) -> WSequence {
        let mut w = vec![0; self.len()];
        wseq_into(&self.entries, &mut w);
        WSequence(w)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub(crate) fn descent_positions(entries: &[usize]) -> Vec<usize> {
    (1..entries.len()).filter(|&i| entries[i - 1] > entries[i]).collect()
}

pub(crate) fn maj_of(entries: &[usize]) -> usize {
    (1..entries.len()).filter(|&i| entries[i - 1] > entries[i]).sum()
}

/// Writes the w-sequence of `entries` into `out` (same length).
///
/// The value 0 is appended as a final one-element run, so `w_i` is the
/// number of later entries in `σ_i`'s run (all larger, the run being
/// increasing) plus the number of entries of the following run below `σ_i`.
pub(crate) fn wseq_into(entries: &[usize], out: &mut [usize]) {
    let n = entries.len();
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && entries[end] < entries[end + 1] {
            end += 1;
        }
        let next = end + 1;
        let mut next_end = next;
        while next_end + 1 < n && entries[next_end] < entries[next_end + 1] {
            next_end += 1;
        }
        let next_run: &[usize] = if next < n { &entries[next..=next_end] } else { &[] };
        for i in start..=end {
            // the sentinel 0 of the final run is always below σ_i
            let below = if next < n {
                next_run.iter().filter(|&&v| v < entries[i]).count()
            } else {
                1
            };
            out[i] = (end - i) + below;
        }
        start = next;
    }
}

/// A set of descent positions `s_1 < … < s_d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescentSet {
    positions: Vec<usize>,
}

impl DescentSet {
    /// Validates that positions are positive and strictly increasing.
    pub fn new(positions: Vec<usize>) -> Result<Self, Error> {
        let ok = positions.first().is_none_or(|&p| p >= 1) && positions.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::InvalidDescentSet(positions));
        }
        Ok(DescentSet { positions })
    }

    pub fn empty() -> Self {
        DescentSet::default()
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// The last descent `s_d`, or 0 for the empty set.
    pub fn last(&self) -> usize {
        self.positions.last().copied().unwrap_or(0)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.positions.binary_search(&i).is_ok()
    }

    /// Index of `p` among the descents.
    pub fn index_of(&self, p: usize) -> Option<usize> {
        self.positions.binary_search(&p).ok()
    }

    pub fn maj(&self) -> usize {
        self.positions.iter().sum()
    }
}

impl fmt::Display for DescentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The w-sequence of a permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WSequence(pub Vec<usize>);

impl WSequence {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `∏ [w_i]_q`.
    pub fn q_weight(&self) -> QPolynomial {
        q_product(self.0.iter().copied())
    }
}

/// Lexicographic permutations with an allocation-free cursor for hot loops.
#[derive(Clone, Debug)]
pub struct LexPermutations {
    current: Vec<usize>,
    /// Number of leading entries held fixed (a block of the index space).
    fixed: usize,
    started: bool,
    done: bool,
}

impl LexPermutations {
    /// All of `S_n`.
    pub fn new(n: usize) -> Self {
        LexPermutations { current: (1..=n).collect(), fixed: 0, started: false, done: false }
    }

    /// The block of `S_n` whose first entry is `first`.
    pub fn with_first(n: usize, first: usize) -> Self {
        assert!((1..=n).contains(&first), "first entry out of range");
        let mut current = vec![first];
        current.extend((1..=n).filter(|&v| v != first));
        LexPermutations { current, fixed: 1, started: false, done: false }
    }

    /// Advances and returns the next permutation as a borrowed slice.
    pub fn next_slice(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let tail = &mut self.current[self.fixed..];
        let Some(i) = (1..tail.len()).rev().find(|&i| tail[i - 1] < tail[i]) else {
            self.done = true;
            return None;
        };
        let j = (i..tail.len()).rev().find(|&j| tail[j] > tail[i - 1]).expect("pivot has a successor");
        tail.swap(i - 1, j);
        tail[i..].reverse();
        Some(&self.current)
    }
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        self.next_slice().map(|s| Permutation { entries: s.to_vec() })
    }
}

/// Every element of `S_n` exactly once, in lexicographic order.
pub fn iter_permutations(n: usize) -> LexPermutations {
    LexPermutations::new(n)
}

/// A parking function given by its preference sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParkingFunction {
    prefs: Vec<usize>,
}

impl ParkingFunction {
    pub fn new(prefs: Vec<usize>) -> Result<Self, Error> {
        if !is_parking(&prefs) {
            return Err(Error::NotAParkingFunction(prefs));
        }
        Ok(ParkingFunction { prefs })
    }

    pub fn prefs(&self) -> &[usize] {
        &self.prefs
    }

    pub fn len(&self) -> usize {
        self.prefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefs.is_empty()
    }

    /// `(area, dinv)` of the associated labeled Dyck path.
    pub fn stats(&self) -> (usize, usize) {
        pf_stats_of(&self.prefs)
    }
}

/// `(area, dinv)` of a parking function.
pub fn pf_stats(p: &ParkingFunction) -> (usize, usize) {
    p.stats()
}

fn is_parking(prefs: &[usize]) -> bool {
    let n = prefs.len();
    let mut count = vec![0usize; n + 1];
    for &p in prefs {
        if p == 0 || p > n {
            return false;
        }
        count[p] += 1;
    }
    let mut cum = 0;
    (1..=n).all(|j| {
        cum += count[j];
        cum >= j
    })
}

/// Cars sorted by (preference, label) fill the rows of the Dyck path from
/// the bottom; row `r` has `a_r = r - (pref - 1)` full cells to its left.
/// dinv counts pairs of rows `r < s` with equal `a` and a smaller label
/// below, or with `a_r = a_s + 1` and a larger label below.
pub(crate) fn pf_stats_of(prefs: &[usize]) -> (usize, usize) {
    let n = prefs.len();
    let mut rows: Vec<(usize, usize)> = (0..n).map(|c| (prefs[c], c + 1)).collect();
    rows.sort_unstable();
    let a: Vec<usize> = rows.iter().enumerate().map(|(r, &(p, _))| r + 1 - p).collect();
    let area = a.iter().sum();
    let mut dinv = 0;
    for r in 0..n {
        for s in r + 1..n {
            let (cr, cs) = (rows[r].1, rows[s].1);
            if (a[r] == a[s] && cr < cs) || (a[r] == a[s] + 1 && cr > cs) {
                dinv += 1;
            }
        }
    }
    (area, dinv)
}

/// Parking functions of length `n` in lexicographic order of their
/// preference sequences, generated depth-first with a feasibility cut.
#[derive(Clone, Debug)]
pub struct ParkingFunctions {
    n: usize,
    prefs: Vec<usize>,
    /// `count[v]` = occurrences of `v` in the current prefix.
    count: Vec<usize>,
    fixed: usize,
    started: bool,
    done: bool,
}

impl ParkingFunctions {
    pub fn new(n: usize) -> Self {
        Self::build(n, None)
    }

    /// The block whose first preference is `first`.
    pub fn with_first(n: usize, first: usize) -> Self {
        assert!((1..=n).contains(&first), "first preference out of range");
        Self::build(n, Some(first))
    }

    fn build(n: usize, first: Option<usize>) -> Self {
        let mut it = ParkingFunctions {
            n,
            prefs: Vec::with_capacity(n),
            count: vec![0; n + 2],
            fixed: usize::from(first.is_some()),
            started: false,
            done: false,
        };
        if let Some(f) = first {
            if !it.push_if_feasible(f) {
                it.done = true;
            }
        }
        it
    }

    fn feasible(&self) -> bool {
        let remaining = self.n - self.prefs.len();
        let mut cum = 0;
        (1..=self.n).all(|j| {
            cum += self.count[j];
            cum + remaining >= j
        })
    }

    fn push_if_feasible(&mut self, v: usize) -> bool {
        self.prefs.push(v);
        self.count[v] += 1;
        if self.feasible() {
            true
        } else {
            self.pop();
            false
        }
    }

    fn pop(&mut self) -> usize {
        let v = self.prefs.pop().expect("nonempty prefix");
        self.count[v] -= 1;
        v
    }

    /// Extends the prefix with the smallest feasible values.
    fn fill(&mut self) -> bool {
        while self.prefs.len() < self.n {
            if !(1..=self.n).any(|v| self.push_if_feasible(v)) {
                return false;
            }
        }
        true
    }

    /// Advances and returns the next preference sequence as a borrowed slice.
    pub fn next_slice(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.fill() {
                return Some(&self.prefs);
            }
            self.done = true;
            return None;
        }
        loop {
            if self.prefs.len() <= self.fixed {
                self.done = true;
                return None;
            }
            let v = self.pop();
            if (v + 1..=self.n).any(|w| self.push_if_feasible(w)) && self.fill() {
                return Some(&self.prefs);
            }
        }
    }
}

impl Iterator for ParkingFunctions {
    type Item = ParkingFunction;

    fn next(&mut self) -> Option<ParkingFunction> {
        self.next_slice().map(|s| ParkingFunction { prefs: s.to_vec() })
    }
}

/// Every parking function of length `n` exactly once, in lexicographic order.
pub fn iter_parking_functions(n: usize) -> ParkingFunctions {
    ParkingFunctions::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::q_factorial;
    use proptest::prelude::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    const EXAMPLE: [usize; 9] = [4, 2, 5, 1, 3, 8, 6, 7, 9];

    #[test]
    fn example_statistics() {
        let s = perm(&EXAMPLE);
        assert_eq!(s.descents().positions(), &[1, 3, 6]);
        assert_eq!(s.maj(), 10);
        assert_eq!(s.wseq().values(), &[1, 2, 2, 2, 1, 2, 3, 2, 1]);
        assert_eq!(s.runs(), vec![1..=1, 2..=3, 4..=6, 7..=9]);
    }

    #[test]
    fn small_statistics() {
        assert!(Permutation::identity(5).descents().is_empty());
        assert_eq!(perm(&[2, 1]).descents().positions(), &[1]);
        assert_eq!(Permutation::identity(6).maj(), 0);
        assert_eq!(perm(&[4, 3, 2, 1]).maj(), 6);
        assert_eq!(Permutation::identity(4).wseq().values(), &[4, 3, 2, 1]);
        // 21 contributes t alone to the series of S_2, so both factors are [1]_q
        assert_eq!(perm(&[2, 1]).wseq().values(), &[1, 1]);
        assert_eq!(Permutation::identity(4).runs(), vec![1..=4]);
        assert_eq!(perm(&[3, 2, 1]).runs(), vec![1..=1, 2..=2, 3..=3]);
        assert!(Permutation::identity(0).runs().is_empty());
    }

    #[test]
    fn rejects_non_permutations() {
        assert_eq!(Permutation::new(vec![1, 1]), Err(Error::NotAPermutation(1)));
        assert_eq!(Permutation::new(vec![0]), Err(Error::NotAPermutation(0)));
        assert!(DescentSet::new(vec![2, 2]).is_err());
        assert!(DescentSet::new(vec![0, 1]).is_err());
        assert!(ParkingFunction::new(vec![2, 2]).is_err());
    }

    #[test]
    fn permutation_counts_and_order() {
        assert_eq!(iter_permutations(3).count(), 6);
        assert_eq!(iter_permutations(0).count(), 1);
        assert_eq!(iter_permutations(8).count(), 40320);
        let all: Vec<_> = iter_permutations(4).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let blocks: Vec<_> = (1..=4).flat_map(|f| LexPermutations::with_first(4, f)).collect();
        assert_eq!(all, blocks);
    }

    #[test]
    fn parking_function_counts_and_order() {
        assert_eq!(iter_parking_functions(1).count(), 1);
        let two: Vec<Vec<usize>> = iter_parking_functions(2).map(|p| p.prefs().to_vec()).collect();
        assert_eq!(two, vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        for n in 1..=6usize {
            let all: Vec<_> = iter_parking_functions(n).collect();
            assert_eq!(all.len(), (n + 1).pow(n as u32 - 1), "n={n}");
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            let blocks: Vec<_> = (1..=n).flat_map(|f| ParkingFunctions::with_first(n, f)).collect();
            assert_eq!(all, blocks);
        }
    }

    #[test]
    fn parking_functions_match_filtered_odometer() {
        let n: usize = 4;
        let mut want = Vec::new();
        for code in 0..n.pow(n as u32) {
            let prefs: Vec<usize> = (0..n).map(|i| code / n.pow((n - 1 - i) as u32) % n + 1).collect();
            if is_parking(&prefs) {
                want.push(prefs);
            }
        }
        let got: Vec<Vec<usize>> = iter_parking_functions(n).map(|p| p.prefs().to_vec()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn parking_statistics() {
        assert_eq!(ParkingFunction::new(vec![1]).unwrap().stats(), (0, 0));
        let mut two: Vec<_> = iter_parking_functions(2).map(|p| pf_stats(&p)).collect();
        two.sort();
        // 1 + q + t as (area, dinv): t^0 q^0, t^0 q^1, t^1 q^0
        assert_eq!(two, vec![(0, 0), (0, 1), (1, 0)]);
    }

    #[test]
    fn identity_class_gives_q_factorial() {
        for n in 0..=6 {
            let sum: QPolynomial = iter_permutations(n)
                .filter(|s| s.maj() == 0)
                .map(|s| s.wseq().q_weight())
                .sum();
            assert_eq!(sum, q_factorial(n));
        }
    }

    fn bounds(s: &[usize], i: usize, n: usize) -> (usize, usize) {
        // run end e and the following descent (or n)
        let k = s.iter().position(|&x| i <= x).unwrap();
        let e = s[k];
        let next = s.get(k + 1).copied().unwrap_or(n);
        let min = if i == e { 1 } else { e - i };
        (min, (e - i) + (next - e))
    }

    #[test]
    fn exhaustive_w_sequence_laws() {
        for n in 1..=7 {
            for s in iter_permutations(n) {
                let w = s.wseq();
                let w = w.values();
                let d = s.descents();
                let sd = d.last();
                assert!(w.iter().all(|&x| x >= 1));
                for (j, &wj) in w.iter().enumerate().skip(sd) {
                    assert_eq!(wj, n - j, "tail law for {s}");
                }
                for j in 1..n {
                    if !d.contains(j) {
                        assert!(w[j - 1] <= w[j] + 1, "run condition for {s}");
                    }
                }
                for i in 1..=sd {
                    let (lo, hi) = bounds(d.positions(), i, n);
                    assert!(lo <= w[i - 1] && w[i - 1] <= hi, "bounds for {s} at {i}");
                }
                let weight = s.wseq().q_weight();
                let at_one: num_bigint::BigInt = weight.coeffs().iter().sum();
                assert_eq!(at_one, w.iter().product::<usize>().into());
            }
        }
    }

    proptest! {
        #[test]
        fn runs_partition_positions(v in Just((1..=9usize).collect::<Vec<_>>()).prop_shuffle()) {
            let s = Permutation::new(v).unwrap();
            let runs = s.runs();
            let flat: Vec<usize> = runs.iter().flat_map(|r| r.clone()).collect();
            prop_assert_eq!(flat, (1..=9).collect::<Vec<_>>());
            for r in &runs {
                let block = &s.entries()[r.start() - 1..*r.end()];
                prop_assert!(block.windows(2).all(|w| w[0] < w[1]));
            }
            prop_assert_eq!(runs.len(), s.descents().len() + 1);
        }

        #[test]
        fn pf_stats_bounded(seed in prop::collection::vec(1usize..=6, 6)) {
            if let Ok(p) = ParkingFunction::new(seed) {
                let (area, dinv) = p.stats();
                prop_assert!(area <= 15 && dinv <= 15);
            }
        }
    }
}
