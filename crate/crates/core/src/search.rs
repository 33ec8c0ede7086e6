//! Extremal-constant searches: `M_k(G)`, `N_k(G)`, `b⁺_ρ(G)` and the
//! identities tying them together.
//!
//! All enumerations are deterministic: subsets of a fixed size are visited in
//! lexicographic order of their index tuples, the combination space is split
//! into contiguous chunks whose boundaries depend only on the problem size,
//! and chunk results are merged in chunk order. Reports are therefore
//! identical regardless of worker count.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::group::{diam_plus, enumerate_subgroups, quotient_map, GroupSpec, Subgroup};
use crate::sets::{DenseSubset, SetEngine};
use crate::stopwatch::Stopwatch;
use crate::{Error, Result};

/// Which constant a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantKind {
    Mk,
    Nk,
    BtRho,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    Formula,
    Exhaustive,
    Descending,
    Stochastic,
}

/// Outcome of a search: the value, up to [`WITNESS_CAP`] extremal sets in
/// enumeration order, and the work done. `elapsed` is wall-clock under the
/// `std` feature and zero otherwise; everything else is deterministic.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub group: GroupSpec,
    pub k: u32,
    pub constant: ConstantKind,
    pub value: u64,
    pub witnesses: Vec<DenseSubset>,
    pub nodes_visited: u64,
    pub elapsed: Duration,
    pub method: SearchMethod,
}

/// Maximum number of witnesses kept in a report.
pub const WITNESS_CAP: usize = 16;

/// Default node budget for the descending searches.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// A closed-form value for `N_k(G)` together with where it comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnownValue {
    pub value: u64,
    pub source: ValueSource,
}

/// Provenance tags for closed-form values, named by the case they cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueSource {
    /// k = 1: everything but one element.
    KOne,
    /// k = 2 below the diameter: half the group.
    KTwoBelowDiam,
    /// k = diam⁺ - 1: rank plus one.
    DiamMinusOne,
    /// k at or above the diameter, prime order.
    TailPrime,
    /// k at or above the diameter, composite (or trivial) order.
    TailComposite,
    /// Cyclic groups with |G| >= k + 2: the general upper bound is exact.
    CyclicExact,
    /// k = 3, diam⁺ >= 4, 3 divides |G|.
    MultipleOfThree,
    /// k = 3, diam⁺ >= 4, every divisor of |G| is 1 mod 3.
    DivisorsOneModThree,
    /// k = 3 in Z_5^n.
    ElementaryFive,
    /// k = 3 in Z_2^n, n >= 4.
    ElementaryTwo,
}

impl ValueSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            ValueSource::KOne => "k1",
            ValueSource::KTwoBelowDiam => "k2-below-diam",
            ValueSource::DiamMinusOne => "diam-minus-one",
            ValueSource::TailPrime => "tail-prime",
            ValueSource::TailComposite => "tail-composite",
            ValueSource::CyclicExact => "cyclic-exact",
            ValueSource::MultipleOfThree => "multiple-of-three",
            ValueSource::DivisorsOneModThree => "divisors-one-mod-three",
            ValueSource::ElementaryFive => "elementary-five",
            ValueSource::ElementaryTwo => "elementary-two",
        }
    }
}

/// `max over divisors d of |G| of (⌊(d-2)/k⌋ + 1) * |G|/d`, together with the
/// smallest maximizing divisor. Pure integer arithmetic, any group size.
pub fn mk_formula(group: &GroupSpec, k: u32) -> (u64, u64) {
    let m = group.order();
    let mut best = 0u64;
    let mut best_d = 1u64;
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let inner = (d as i128 - 2).div_euclid(k as i128) + 1;
        let value = (inner.max(0) as u64) * (m / d);
        if value > best {
            best = value;
            best_d = d;
        }
    }
    (best, best_d)
}

/// Order cap for the full-scan oracle below.
pub const MK_BRUTE_MAX_ORDER: u64 = 16;

/// Exhaustive oracle for `M_k`: scans all `2^|G|` subsets (|G| <= 16) and
/// maximizes `|A|` over those with `kA ≠ G`. The witness is the first subset
/// of maximal size in ascending bitmask order.
pub fn mk_bruteforce(group: &GroupSpec, k: u32) -> Result<SearchReport> {
    if k == 0 {
        return Err(Error::ZeroFold);
    }
    if group.order() > MK_BRUTE_MAX_ORDER {
        return Err(Error::OrderLimit {
            order: group.order(),
            limit: MK_BRUTE_MAX_ORDER,
        });
    }
    let watch = Stopwatch::start();
    let engine = SetEngine::new(group.clone())?;
    let n = group.order() as u32;
    let mut best: Option<(usize, u32)> = None; // (size, mask)
    let mut scratch = ScanScratch::new(&engine, k);
    for mask in 0u32..1u32 << n {
        let size = mask.count_ones() as usize;
        if let Some((b, _)) = best {
            if size <= b {
                continue;
            }
        }
        scratch.load_mask(mask);
        scratch.compute_powers(&engine);
        if !engine.is_full_words(&scratch.powers[k as usize]) {
            best = Some((size, mask));
        }
    }
    let (value, mask) = best.map(|(s, m)| (s as u64, m)).unwrap_or((0, 0));
    let indices: Vec<u64> = (0..n as u64).filter(|&i| mask >> i & 1 == 1).collect();
    let witness = DenseSubset::from_indices(group.clone(), &indices)?;
    Ok(SearchReport {
        group: group.clone(),
        k,
        constant: ConstantKind::Mk,
        value,
        witnesses: vec![witness],
        nodes_visited: 1u64 << n,
        elapsed: watch.elapsed(),
        method: SearchMethod::Exhaustive,
    })
}

/// Size-descending search for `M_k` on groups too large for the full scan:
/// the first size (from `|G|-1` downward) with a non-full `k`-fold sumset is
/// the maximum.
pub fn mk_search_descending(group: &GroupSpec, k: u32, budget: u64) -> Result<SearchReport> {
    if k == 0 {
        return Err(Error::ZeroFold);
    }
    let watch = Stopwatch::start();
    let engine = SetEngine::new(group.clone())?;
    let n = group.order();
    let start = (n.saturating_sub(1)) as usize;
    let mut nodes = 0u64;
    let mut size = start as i64;
    while size >= 0 {
        let s = size as usize;
        let class = binom(n, s as u64);
        if nodes.saturating_add(class) > budget {
            return Err(Error::BudgetExceeded {
                required: nodes.saturating_add(class),
                budget,
                covered: if s < start { Some((start, s + 1)) } else { None },
            });
        }
        let hits = scan_size_class(&engine, s, k, CandidateFilter::NonFullOnly);
        nodes += class;
        if !hits.is_empty() {
            return Ok(SearchReport {
                group: group.clone(),
                k,
                constant: ConstantKind::Mk,
                value: s as u64,
                witnesses: materialize(group, &hits),
                nodes_visited: nodes,
                elapsed: watch.elapsed(),
                method: SearchMethod::Descending,
            });
        }
        size -= 1;
    }
    unreachable!("the empty set always has a non-full sumset")
}

/// Exhaustive size-descending search for `N_k(G)`: the largest aperiodic
/// subset with `kA ≠ G` that is maximal with this property. Starts at the
/// general upper bound `⌊(|G|-2)/k⌋ + 1` and descends; the first size with a
/// hit is the value. Refuses when a size class would blow the node budget.
pub fn nk_search(group: &GroupSpec, k: u32, budget: u64) -> Result<SearchReport> {
    if k == 0 {
        return Err(Error::ZeroFold);
    }
    let watch = Stopwatch::start();
    let engine = SetEngine::new(group.clone())?;
    let n = group.order();
    let start = nk_upper_bound(n, k);
    let mut nodes = 0u64;
    let mut size = start as i64;
    while size >= 0 {
        let s = size as usize;
        let class = binom(n, s as u64);
        if nodes.saturating_add(class) > budget {
            return Err(Error::BudgetExceeded {
                required: nodes.saturating_add(class),
                budget,
                covered: if s < start {
                    Some((start, s + 1))
                } else {
                    None
                },
            });
        }
        let hits = scan_size_class(&engine, s, k, CandidateFilter::AperiodicMaximal);
        nodes += class;
        if !hits.is_empty() {
            return Ok(SearchReport {
                group: group.clone(),
                k,
                constant: ConstantKind::Nk,
                value: s as u64,
                witnesses: materialize(group, &hits),
                nodes_visited: nodes,
                elapsed: watch.elapsed(),
                method: SearchMethod::Descending,
            });
        }
        size -= 1;
    }
    Ok(SearchReport {
        group: group.clone(),
        k,
        constant: ConstantKind::Nk,
        value: 0,
        witnesses: Vec::new(),
        nodes_visited: nodes,
        elapsed: watch.elapsed(),
        method: SearchMethod::Descending,
    })
}

/// `⌊(|G|-2)/k⌋ + 1`, floored at zero (the general upper bound for `N_k`).
pub fn nk_upper_bound(order: u64, k: u32) -> usize {
    let b = (order as i128 - 2).div_euclid(k as i128) + 1;
    b.max(0) as usize
}

/// The closed-form value of `N_k(G)` when one of the known cases applies.
pub fn known_value(group: &GroupSpec, k: u32) -> Option<KnownValue> {
    if k == 0 {
        return None;
    }
    let m = group.order();
    let dp = diam_plus(group);
    let r = group.rank() as u64;
    if k == 1 {
        return Some(KnownValue {
            value: m - 1,
            source: ValueSource::KOne,
        });
    }
    if k as u64 >= dp {
        return Some(if is_prime(m) {
            KnownValue {
                value: 1,
                source: ValueSource::TailPrime,
            }
        } else {
            KnownValue {
                value: 0,
                source: ValueSource::TailComposite,
            }
        });
    }
    if k == 2 && 2 < dp {
        return Some(KnownValue {
            value: m / 2,
            source: ValueSource::KTwoBelowDiam,
        });
    }
    if k as u64 == dp - 1 {
        return Some(KnownValue {
            value: r + 1,
            source: ValueSource::DiamMinusOne,
        });
    }
    if group.rank() == 1 && m >= k as u64 + 2 {
        return Some(KnownValue {
            value: nk_upper_bound(m, k) as u64,
            source: ValueSource::CyclicExact,
        });
    }
    if k == 3 && dp >= 4 {
        if m.is_multiple_of(3) {
            return Some(KnownValue {
                value: m / 3,
                source: ValueSource::MultipleOfThree,
            });
        }
        if all_divisors_one_mod_three(m) {
            return Some(KnownValue {
                value: (m - 1) / 3,
                source: ValueSource::DivisorsOneModThree,
            });
        }
    }
    if group.is_elementary(5) && k == 3 {
        let n = group.rank() as u32;
        let value = if n == 1 { 2 } else { (3 * 5u64.pow(n - 1) - 1) / 2 };
        return Some(KnownValue {
            value,
            source: ValueSource::ElementaryFive,
        });
    }
    if group.is_elementary(2) && k == 3 && r >= 4 {
        return Some(KnownValue {
            value: (1 << (r - 2)) + 1,
            source: ValueSource::ElementaryTwo,
        });
    }
    None
}

fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn all_divisors_one_mod_three(mut m: u64) -> bool {
    // equivalent to: every prime divisor is 1 mod 3
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            if p % 3 != 1 {
                return false;
            }
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    m == 1 || m % 3 == 1
}

/// Exhaustive value of `b⁺_ρ(G)`: the largest aperiodic generating subset
/// with `(ρ-1)(A ∪ {0}) ≠ G`, maximal with this property. For `ρ` at most
/// `diam⁺(G)` the generating requirement is redundant and skipped (the
/// equivalence is cross-checked in the test suite, not assumed silently).
pub fn bt_rho_search(group: &GroupSpec, rho: u32, budget: u64) -> Result<SearchReport> {
    let require_generating = rho as u64 > diam_plus(group);
    bt_scan(group, rho, budget, require_generating)
}

/// `b⁺_ρ(G)` computed strictly from its definition (generating requirement
/// always enforced).
pub fn bt_rho_search_strict(group: &GroupSpec, rho: u32, budget: u64) -> Result<SearchReport> {
    bt_scan(group, rho, budget, true)
}

/// The simplified characterization with the generating requirement dropped.
/// Agrees with the strict definition exactly when `ρ <= diam⁺(G)`.
pub fn bt_rho_search_relaxed(group: &GroupSpec, rho: u32, budget: u64) -> Result<SearchReport> {
    bt_scan(group, rho, budget, false)
}

fn bt_scan(group: &GroupSpec, rho: u32, budget: u64, require_generating: bool) -> Result<SearchReport> {
    if rho == 0 {
        return Err(Error::Precondition("rho must be at least 1"));
    }
    let watch = Stopwatch::start();
    let n = group.order();
    if n > 24 {
        return Err(Error::OrderLimit { order: n, limit: 24 });
    }
    let required = 1u64 << n;
    if required > budget {
        return Err(Error::BudgetExceeded {
            required,
            budget,
            covered: None,
        });
    }
    let engine = SetEngine::new(group.clone())?;
    let k = rho - 1;
    let mut scratch = ScanScratch::new(&engine, k);
    let mut best = 0usize;
    let mut witnesses: Vec<Vec<u64>> = Vec::new();
    for mask in 0u64..1u64 << n {
        let size = mask.count_ones() as usize;
        if size < best || size == 0 {
            continue;
        }
        scratch.load_mask64(mask);
        // powers are of A ∪ {0}; candidates without 0 fail maximality anyway
        scratch.compute_powers_with_zero(&engine);
        if engine.is_full_words(&scratch.powers[k as usize]) {
            continue;
        }
        if require_generating
            && !engine.generates_words(
                &scratch.a_words,
                &scratch.indices,
                &mut scratch.t1,
                &mut scratch.t2,
            )
        {
            continue;
        }
        if !engine.is_aperiodic_words(&scratch.a_words, size, &mut scratch.t1, &mut scratch.t2) {
            continue;
        }
        if !engine.is_maximal_nonfull_words(
            &scratch.a_words,
            &scratch.powers,
            k,
            &mut scratch.cover,
            &mut scratch.t1,
            &mut scratch.t2,
        ) {
            continue;
        }
        if size > best {
            best = size;
            witnesses.clear();
        }
        if witnesses.len() < WITNESS_CAP {
            witnesses.push(scratch.indices.clone());
        }
    }
    Ok(SearchReport {
        group: group.clone(),
        k: rho,
        constant: ConstantKind::BtRho,
        value: best as u64,
        witnesses: materialize(group, &witnesses),
        nodes_visited: required,
        elapsed: watch.elapsed(),
        method: SearchMethod::Exhaustive,
    })
}

/// One subgroup term of the reduction identity.
#[derive(Clone, Debug)]
pub struct ReductionTerm {
    pub subgroup: Subgroup,
    pub quotient: GroupSpec,
    pub nk_quotient: u64,
    pub product: u64,
}

/// Verification record for `M_k(G) = max over H of |H| * N_k(G/H)`.
#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub group: GroupSpec,
    pub k: u32,
    pub mk_formula: u64,
    pub mk_bruteforce: u64,
    pub best_term: usize,
    pub terms: Vec<ReductionTerm>,
    pub holds: bool,
}

/// Verifies `M_k(G) = max |H| * N_k(G/H)` with every side computed by brute
/// force (|G| <= 16). Returns the full term table and the first maximizing
/// subgroup in the canonical subgroup order.
pub fn reduction_identity_check(group: &GroupSpec, k: u32) -> Result<ReductionReport> {
    if group.order() > MK_BRUTE_MAX_ORDER {
        return Err(Error::OrderLimit {
            order: group.order(),
            limit: MK_BRUTE_MAX_ORDER,
        });
    }
    let mk = mk_formula(group, k).0;
    let mk_brute = mk_bruteforce(group, k)?.value;
    let subgroups = enumerate_subgroups(group, group.order())?;
    let mut memo: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut terms = Vec::with_capacity(subgroups.len());
    for h in subgroups {
        let (quotient, _) = quotient_map(group, &h)?;
        let nk_q = match memo.get(quotient.factors()) {
            Some(&v) => v,
            None => {
                let v = nk_search(&quotient, k, DEFAULT_BUDGET)?.value;
                memo.insert(quotient.factors().to_vec(), v);
                v
            }
        };
        let product = h.order() * nk_q;
        terms.push(ReductionTerm {
            subgroup: h,
            quotient,
            nk_quotient: nk_q,
            product,
        });
    }
    let best_term = terms
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.product.cmp(&b.product).then(ib.cmp(ia)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let best = terms[best_term].product;
    Ok(ReductionReport {
        group: group.clone(),
        k,
        mk_formula: mk,
        mk_bruteforce: mk_brute,
        best_term,
        terms,
        holds: best == mk && mk == mk_brute,
    })
}

// ---------------------------------------------------------------------------
// combination scanning machinery
// ---------------------------------------------------------------------------

/// Saturating binomial coefficient.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut res: u128 = 1;
    for i in 1..=k {
        res = res * (n - k + i) as u128 / i as u128;
        if res > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    res as u64
}

/// Lexicographic combination cursor, startable at any rank.
pub(crate) struct Combinations {
    pub(crate) indices: Vec<u64>,
    n: u64,
}

impl Combinations {
    pub(crate) fn unrank(n: u64, s: usize, mut rank: u64) -> Self {
        let mut indices = Vec::with_capacity(s);
        let mut v = 0u64;
        for i in 0..s {
            loop {
                let c = binom(n - 1 - v, (s - 1 - i) as u64);
                if rank < c {
                    indices.push(v);
                    v += 1;
                    break;
                }
                rank -= c;
                v += 1;
            }
        }
        Combinations { indices, n }
    }

    pub(crate) fn advance(&mut self) -> bool {
        let s = self.indices.len();
        if s == 0 {
            return false;
        }
        let mut i = s;
        while i > 0 {
            i -= 1;
            if self.indices[i] < self.n - (s - i) as u64 {
                self.indices[i] += 1;
                for j in i + 1..s {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

enum CandidateFilter {
    /// Keep subsets with `kA ≠ G` (for the descending `M_k` search).
    NonFullOnly,
    /// Keep aperiodic maximal non-full subsets (for `N_k`).
    AperiodicMaximal,
}

/// Per-worker scratch: candidate words, its power chain and translation
/// buffers. Sized once, reused across the whole chunk.
struct ScanScratch {
    indices: Vec<u64>,
    a_words: Vec<u64>,
    powers: Vec<Vec<u64>>,
    cover: Vec<u64>,
    t1: Vec<u64>,
    t2: Vec<u64>,
}

impl ScanScratch {
    fn new(engine: &SetEngine, k: u32) -> Self {
        ScanScratch {
            indices: Vec::new(),
            a_words: engine.alloc(),
            powers: (0..=k).map(|_| engine.alloc()).collect(),
            cover: engine.alloc(),
            t1: engine.alloc(),
            t2: engine.alloc(),
        }
    }

    fn load_indices(&mut self, indices: &[u64]) {
        self.indices.clear();
        self.indices.extend_from_slice(indices);
        self.a_words.fill(0);
        for &i in indices {
            self.a_words[(i / 64) as usize] |= 1u64 << (i % 64);
        }
    }

    fn load_mask(&mut self, mask: u32) {
        self.load_mask64(mask as u64);
    }

    fn load_mask64(&mut self, mask: u64) {
        self.indices.clear();
        let mut bits = mask;
        while bits != 0 {
            let b = bits.trailing_zeros() as u64;
            self.indices.push(b);
            bits &= bits - 1;
        }
        self.a_words.fill(0);
        self.a_words[0] = mask;
    }

    /// powers[i] = iA for i in 1..=k; powers[0] = {0}.
    fn compute_powers(&mut self, engine: &SetEngine) {
        let k = self.powers.len() - 1;
        self.powers[0].fill(0);
        self.powers[0][0] = 1;
        if k >= 1 {
            self.powers[1].copy_from_slice(&self.a_words);
        }
        for i in 2..=k {
            let (lo, hi) = self.powers.split_at_mut(i);
            engine.sumset_words(&mut hi[0], &self.indices, &lo[i - 1], &mut self.t1, &mut self.t2);
        }
    }

    /// powers[i] = i(A ∪ {0}); used by the `b⁺` scan.
    fn compute_powers_with_zero(&mut self, engine: &SetEngine) {
        let k = self.powers.len() - 1;
        self.powers[0].fill(0);
        self.powers[0][0] = 1;
        if k >= 1 {
            self.powers[1].copy_from_slice(&self.a_words);
            self.powers[1][0] |= 1;
        }
        let with_zero: Vec<u64> = if self.indices.first() == Some(&0) {
            self.indices.clone()
        } else {
            let mut v = Vec::with_capacity(self.indices.len() + 1);
            v.push(0);
            v.extend_from_slice(&self.indices);
            v
        };
        for i in 2..=k {
            let (lo, hi) = self.powers.split_at_mut(i);
            engine.sumset_words(&mut hi[0], &with_zero, &lo[i - 1], &mut self.t1, &mut self.t2);
        }
    }
}

/// Scans one size class, returning hit index-tuples in lexicographic order
/// (at most [`WITNESS_CAP`]). Chunk boundaries depend only on the class size,
/// so the result is independent of the worker count.
fn scan_size_class(
    engine: &SetEngine,
    s: usize,
    k: u32,
    filter: CandidateFilter,
) -> Vec<Vec<u64>> {
    let n = engine.group().order();
    let total = binom(n, s as u64);
    if total == 0 {
        return Vec::new();
    }
    let chunk_len = 16_384u64;
    let chunks = total.div_ceil(chunk_len);
    let filter = &filter;
    let run_chunk = |c: u64| -> Vec<Vec<u64>> {
        let lo = c * chunk_len;
        let hi = (lo + chunk_len).min(total);
        let mut hits: Vec<Vec<u64>> = Vec::new();
        let mut scratch = ScanScratch::new(engine, k);
        let mut cursor = Combinations::unrank(n, s, lo);
        for _ in lo..hi {
            if test_candidate(engine, &mut scratch, &cursor.indices, k, filter)
                && hits.len() < WITNESS_CAP
            {
                hits.push(cursor.indices.clone());
            }
            cursor.advance();
        }
        hits
    };
    let chunk_hits = run_chunks(chunks, run_chunk);
    let mut out = Vec::new();
    for hits in chunk_hits {
        for h in hits {
            if out.len() < WITNESS_CAP {
                out.push(h);
            }
        }
    }
    out
}

#[cfg(feature = "parallel")]
fn run_chunks<F>(chunks: u64, f: F) -> Vec<Vec<Vec<u64>>>
where
    F: Fn(u64) -> Vec<Vec<u64>> + Sync + Send,
{
    use rayon::prelude::*;
    (0..chunks).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_chunks<F>(chunks: u64, f: F) -> Vec<Vec<Vec<u64>>>
where
    F: Fn(u64) -> Vec<Vec<u64>> + Sync + Send,
{
    (0..chunks).map(f).collect()
}

fn test_candidate(
    engine: &SetEngine,
    scratch: &mut ScanScratch,
    indices: &[u64],
    k: u32,
    filter: &CandidateFilter,
) -> bool {
    scratch.load_indices(indices);
    scratch.compute_powers(engine);
    if engine.is_full_words(&scratch.powers[k as usize]) {
        return false;
    }
    match filter {
        CandidateFilter::NonFullOnly => true,
        CandidateFilter::AperiodicMaximal => {
            if !engine.is_aperiodic_words(
                &scratch.a_words,
                indices.len(),
                &mut scratch.t1,
                &mut scratch.t2,
            ) {
                return false;
            }
            engine.is_maximal_nonfull_words(
                &scratch.a_words,
                &scratch.powers,
                k,
                &mut scratch.cover,
                &mut scratch.t1,
                &mut scratch.t2,
            )
        }
    }
}

fn materialize(group: &GroupSpec, hits: &[Vec<u64>]) -> Vec<DenseSubset> {
    hits.iter()
        .map(|idx| DenseSubset::from_indices(group.clone(), idx).expect("indices in range"))
        .collect()
}
