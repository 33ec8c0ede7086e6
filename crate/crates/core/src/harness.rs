//! Falsification harness: seeded property suites for the classical sumset
//! inequalities, the density propositions over `Z_5^n`, an exhaustive
//! verification of the two-coset stability property at `n = 2`, and a
//! stochastic falsifier for `n >= 3`.
//!
//! Violations are data, not errors: every suite returns a (hopefully empty)
//! list of [`ViolationReport`]s, each of which can be re-verified
//! deterministically from its stored witness sets.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::group::{GroupElement, GroupSpec};
use crate::rng::SplitMix64;
use crate::search::{binom, Combinations};
use crate::sets::{DenseSubset, SetEngine};
use crate::{Error, Result};

/// How trial sets are drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sampler {
    /// Size uniform in `[0, |G|]`, elements uniform without replacement.
    UniformSize,
    /// Size confined to `[lo, hi] * |G|`.
    DensityWindow { lo: f64, hi: f64 },
    /// Start from a random two-coset union of an index-5 subgroup and
    /// perturb it (remove a few members, sometimes add outsiders). Only for
    /// groups of exponent 5; this is the only sampler that hits the
    /// hypotheses of the density propositions with useful frequency.
    ConstructionPerturbation,
}

/// A reproducible batch of trials.
#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub group: GroupSpec,
    pub sampler: Sampler,
    pub trials: u64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn new(group: GroupSpec, sampler: Sampler, trials: u64, seed: u64) -> Self {
        TrialConfig {
            group,
            sampler,
            trials,
            seed,
        }
    }
}

/// A counterexample candidate: property id, witness sets, and the observed
/// vs required quantities in human-readable form.
#[derive(Clone, Debug)]
pub struct ViolationReport {
    pub property: &'static str,
    pub sets: Vec<DenseSubset>,
    pub observed: String,
}

impl ViolationReport {
    /// Re-runs the violated property on the stored sets; `true` means the
    /// violation is still present (the report replays).
    pub fn reverify(&self, engine: &SetEngine) -> Result<bool> {
        Ok(match self.property {
            property::KNESER => {
                let (a, b) = (&self.sets[0], &self.sets[1]);
                let sum = engine.sumset(a, b)?;
                let pi = engine.period(&sum)?.order();
                (sum.len() as u64) < (a.len() + b.len()) as u64 - pi.min((a.len() + b.len()) as u64)
            }
            property::UNION_LEMMA => {
                let (a, b) = (&self.sets[0], &self.sets[1]);
                let u = a.union(b)?;
                let lhs = u.len() as u64 + engine.period(&u)?.order();
                let ra = a.len() as u64 + engine.period(a)?.order();
                let rb = b.len() as u64 + engine.period(b)?.order();
                lhs < ra.min(rb)
            }
            property::PIGEONHOLE => {
                let (a, b) = (&self.sets[0], &self.sets[1]);
                let sum = engine.sumset(a, b)?;
                !sum.is_full() && (a.len() + b.len()) as u64 > engine.group().order()
            }
            property::DOUBLING_DENSITY => {
                let a = &self.sets[0];
                let m = engine.group().order();
                let two_a = engine.k_fold(a, 2)?;
                2 * (two_a.len() as u64) < m && 4 * (a.len() as u64) >= m
            }
            property::THREE_COSET_MEET
            | property::HEAVY_COSET_SPREAD
            | property::DENSITY_SPREAD => {
                let a = &self.sets[0];
                !proposition_violations(engine, a)?
                    .iter()
                    .all(|v| v.property != self.property)
            }
            property::TRIPLE_COVER => {
                let (a, b, c) = (&self.sets[0], &self.sets[1], &self.sets[2]);
                let abc = engine.sumset(&engine.sumset(a, b)?, c)?;
                !abc.is_full()
            }
            property::STABILITY_COVER => {
                let a = &self.sets[0];
                let three = engine.k_fold(a, 3)?;
                !three.is_full() && engine.two_coset_cover_exists(a)?.is_none()
            }
            _ => return Err(Error::Precondition("unknown property id")),
        })
    }
}

/// Property identifiers used in violation reports.
pub mod property {
    pub const KNESER: &str = "kneser";
    pub const UNION_LEMMA: &str = "union-lemma";
    pub const PIGEONHOLE: &str = "pigeonhole";
    pub const DOUBLING_DENSITY: &str = "doubling-density";
    pub const THREE_COSET_MEET: &str = "three-coset-meet";
    pub const HEAVY_COSET_SPREAD: &str = "heavy-coset-spread";
    pub const DENSITY_SPREAD: &str = "density-spread";
    pub const TRIPLE_COVER: &str = "triple-cover";
    pub const STABILITY_COVER: &str = "stability-missing-cover";
}

/// Draws one set according to the sampler.
pub fn sample_set(engine: &SetEngine, sampler: Sampler, rng: &mut SplitMix64) -> Result<DenseSubset> {
    let group = engine.group().clone();
    let m = group.order();
    match sampler {
        Sampler::UniformSize => {
            let size = rng.below(m + 1) as usize;
            let idx = rng.distinct(m, size);
            DenseSubset::from_indices(group, &idx)
        }
        Sampler::DensityWindow { lo, hi } => {
            use num_traits::float::FloatCore;
            let lo_n = FloatCore::ceil(lo * m as f64).max(0.0) as u64;
            let hi_n = (FloatCore::floor(hi * m as f64) as u64).min(m);
            let size = if hi_n <= lo_n {
                lo_n
            } else {
                lo_n + rng.below(hi_n - lo_n + 1)
            };
            let idx = rng.distinct(m, size as usize);
            DenseSubset::from_indices(group, &idx)
        }
        Sampler::ConstructionPerturbation => {
            if !group.is_elementary(5) {
                return Err(Error::NotExponentFive);
            }
            let func = group.coords_of(1 + rng.below(m - 1));
            let v1 = rng.below(5);
            let v2 = (v1 + 1 + rng.below(4)) % 5;
            let mut set = DenseSubset::empty(group.clone())?;
            for x in 0..m {
                let phase: u64 = func
                    .iter()
                    .zip(group.coords_of(x).iter())
                    .map(|(&f, &c)| f * c)
                    .sum::<u64>()
                    % 5;
                if phase == v1 || phase == v2 {
                    set.insert(x);
                }
            }
            // carve a few members out, occasionally add outsiders
            let removals = rng.below(set.len() as u64 / 4 + 1);
            for _ in 0..removals {
                let members = set.indices();
                set.remove(members[rng.below(members.len() as u64) as usize]);
            }
            if rng.below(4) == 0 {
                for _ in 0..=rng.below(2) {
                    set.insert(rng.below(m));
                }
            }
            Ok(set)
        }
    }
}

/// Runs `trials` independent trials on parallel workers, each with its own
/// generator forked from the master seed, and concatenates the violation
/// lists in trial order. Identical seeds give identical outputs at any
/// worker count, and any single trial can be replayed from its index.
fn run_trials<F>(seed: u64, trials: u64, body: F) -> Result<Vec<ViolationReport>>
where
    F: Fn(&mut SplitMix64) -> Result<Vec<ViolationReport>> + Sync + Send,
{
    let mut master = SplitMix64::new(seed);
    let rngs: Vec<SplitMix64> = (0..trials).map(|i| master.fork(i)).collect();
    let per_trial = map_trials(rngs, &body);
    let mut out = Vec::new();
    for trial in per_trial {
        out.extend(trial?);
    }
    Ok(out)
}

#[cfg(feature = "parallel")]
fn map_trials<F>(rngs: Vec<SplitMix64>, body: &F) -> Vec<Result<Vec<ViolationReport>>>
where
    F: Fn(&mut SplitMix64) -> Result<Vec<ViolationReport>> + Sync + Send,
{
    use rayon::prelude::*;
    rngs.into_par_iter().map(|mut rng| body(&mut rng)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_trials<F>(rngs: Vec<SplitMix64>, body: &F) -> Vec<Result<Vec<ViolationReport>>>
where
    F: Fn(&mut SplitMix64) -> Result<Vec<ViolationReport>> + Sync + Send,
{
    rngs.into_iter().map(|mut rng| body(&mut rng)).collect()
}

// ---------------------------------------------------------------------------
// classical inequality suite
// ---------------------------------------------------------------------------

/// Checks, on `cfg.trials` sampled pairs, the lower bound
/// `|A+B| >= |A| + |B| - |π(A+B)|`, the union bound
/// `|A∪B| + |π(A∪B)| >= min(|A| + |π(A)|, |B| + |π(B)|)`, and the pigeonhole
/// bound `A+B ≠ G ⇒ |A| + |B| <= |G|`.
pub fn check_kneser_suite(cfg: &TrialConfig) -> Result<Vec<ViolationReport>> {
    let engine = SetEngine::new(cfg.group.clone())?;
    let order = cfg.group.order();
    let sampler = cfg.sampler;
    run_trials(cfg.seed, cfg.trials, |rng| {
        let mut violations = Vec::new();
        let a = sample_set(&engine, sampler, rng)?;
        let b = sample_set(&engine, sampler, rng)?;
        let sum = engine.sumset(&a, &b)?;
        let pi_sum = engine.period(&sum)?.order();
        let lhs = sum.len() as u64 + pi_sum;
        if lhs < (a.len() + b.len()) as u64 {
            violations.push(ViolationReport {
                property: property::KNESER,
                observed: format!(
                    "|A+B| = {}, |A| + |B| - |pi| = {}",
                    sum.len(),
                    (a.len() + b.len()) as u64 - pi_sum
                ),
                sets: alloc::vec![a.clone(), b.clone()],
            });
        }
        let u = a.union(&b)?;
        let union_lhs = u.len() as u64 + engine.period(&u)?.order();
        let ra = a.len() as u64 + engine.period(&a)?.order();
        let rb = b.len() as u64 + engine.period(&b)?.order();
        if union_lhs < ra.min(rb) {
            violations.push(ViolationReport {
                property: property::UNION_LEMMA,
                observed: format!("lhs = {union_lhs}, required >= {}", ra.min(rb)),
                sets: alloc::vec![a.clone(), b.clone()],
            });
        }
        if !sum.is_full() && (a.len() + b.len()) as u64 > order {
            violations.push(ViolationReport {
                property: property::PIGEONHOLE,
                observed: format!("|A| + |B| = {} > |G|", a.len() + b.len()),
                sets: alloc::vec![a, b],
            });
        }
        Ok(violations)
    })
}

// ---------------------------------------------------------------------------
// density propositions over Z_5^n
// ---------------------------------------------------------------------------

/// Checks `density(2A) < 1/2 ⇒ density(A) < 1/4` on sampled sets
/// (exponent-5 groups).
pub fn check_doubling_density(cfg: &TrialConfig) -> Result<Vec<ViolationReport>> {
    if !cfg.group.is_elementary(5) {
        return Err(Error::NotExponentFive);
    }
    let engine = SetEngine::new(cfg.group.clone())?;
    let m = cfg.group.order();
    let sampler = cfg.sampler;
    run_trials(cfg.seed, cfg.trials, |rng| {
        let a = sample_set(&engine, sampler, rng)?;
        let two_a = engine.k_fold(&a, 2)?;
        let mut violations = Vec::new();
        if 2 * (two_a.len() as u64) < m && 4 * (a.len() as u64) >= m {
            violations.push(ViolationReport {
                property: property::DOUBLING_DENSITY,
                observed: format!("|2A| = {} < |G|/2 but |A| = {}", two_a.len(), a.len()),
                sets: alloc::vec![a],
            });
        }
        Ok(violations)
    })
}

/// Coset occupancy of `a` along the normalized functional with coefficient
/// tuple `func`.
fn coset_counts(group: &GroupSpec, a_indices: &[u64], func: &[u64]) -> [u64; 5] {
    let mut counts = [0u64; 5];
    for &x in a_indices {
        let phase: u64 = func
            .iter()
            .zip(group.coords_of(x).iter())
            .map(|(&f, &c)| f * c)
            .sum::<u64>()
            % 5;
        counts[phase as usize] += 1;
    }
    counts
}

/// The three density propositions for a single set with density above 0.3
/// and non-full triple sumset, scanned over every index-5 subgroup:
/// the set never meets exactly three cosets; a coset of density above 1/2
/// forces at most three met cosets; and if every coset density is below 1/2,
/// at most one exceeds 2/5. Returns the (expected empty) violation list.
/// Sets outside the hypotheses yield no checks.
pub fn proposition_violations(engine: &SetEngine, a: &DenseSubset) -> Result<Vec<ViolationReport>> {
    let group = engine.group().clone();
    let m = group.order();
    let mut out = Vec::new();
    if 10 * (a.len() as u64) <= 3 * m {
        return Ok(out); // density at most 0.3: out of hypothesis
    }
    if engine.k_fold(a, 3)?.is_full() {
        return Ok(out);
    }
    let f_order = m / 5;
    let indices = a.indices();
    for c_idx in 1..m {
        let func = group.coords_of(c_idx);
        if *func.iter().find(|&&x| x != 0).unwrap() != 1 {
            continue;
        }
        let counts = coset_counts(&group, &indices, &func);
        let met = counts.iter().filter(|&&c| c > 0).count();
        if met == 3 {
            out.push(ViolationReport {
                property: property::THREE_COSET_MEET,
                observed: format!("functional {func:?} meets exactly 3 cosets: {counts:?}"),
                sets: alloc::vec![a.clone()],
            });
        }
        let max = *counts.iter().max().unwrap();
        if 2 * max > f_order && met > 3 {
            out.push(ViolationReport {
                property: property::HEAVY_COSET_SPREAD,
                observed: format!("heavy coset but {met} cosets met: {counts:?}"),
                sets: alloc::vec![a.clone()],
            });
        }
        if counts.iter().all(|&c| 2 * c < f_order) {
            let heavy = counts.iter().filter(|&&c| 5 * c > 2 * f_order).count();
            if heavy > 1 {
                out.push(ViolationReport {
                    property: property::DENSITY_SPREAD,
                    observed: format!("{heavy} cosets above density 2/5: {counts:?}"),
                    sets: alloc::vec![a.clone()],
                });
            }
        }
    }
    Ok(out)
}

/// Runs [`proposition_violations`] on sampled sets and, with the same
/// budget, samples triples `(A, B, C)` with `0.4 < α, β < 0.5` and
/// `α + β + 3γ > 1.5`, asserting `A + B + C = G`.
pub fn check_propositions(cfg: &TrialConfig) -> Result<Vec<ViolationReport>> {
    if !cfg.group.is_elementary(5) {
        return Err(Error::NotExponentFive);
    }
    let engine = SetEngine::new(cfg.group.clone())?;
    let m = cfg.group.order();
    let sampler = cfg.sampler;
    let mut violations = run_trials(cfg.seed, cfg.trials, |rng| {
        let a = sample_set(&engine, sampler, rng)?;
        proposition_violations(&engine, &a)
    })?;
    // triple lemma: strict windows for the two dense factors
    let lo = 2 * m / 5 + 1;
    let hi = m.div_ceil(2) - 1;
    if lo <= hi {
        let group = cfg.group.clone();
        violations.extend(run_trials(cfg.seed ^ 0x7465_6d70, cfg.trials, |rng| {
            let size_a = lo + rng.below(hi - lo + 1);
            let size_b = lo + rng.below(hi - lo + 1);
            // smallest c with 2(a + b + 3c) > 3m
            let threshold = 3 * m;
            let mut c_min = threshold.saturating_sub(2 * (size_a + size_b)).div_ceil(6);
            while 2 * (size_a + size_b + 3 * c_min) <= threshold {
                c_min += 1;
            }
            if c_min > m {
                return Ok(Vec::new());
            }
            let size_c = c_min + rng.below(m - c_min + 1);
            let a = DenseSubset::from_indices(group.clone(), &rng.distinct(m, size_a as usize))?;
            let b = DenseSubset::from_indices(group.clone(), &rng.distinct(m, size_b as usize))?;
            let c = DenseSubset::from_indices(group.clone(), &rng.distinct(m, size_c as usize))?;
            let abc = engine.sumset(&engine.sumset(&a, &b)?, &c)?;
            let mut out = Vec::new();
            if !abc.is_full() {
                out.push(ViolationReport {
                    property: property::TRIPLE_COVER,
                    observed: format!(
                        "|A|={size_a} |B|={size_b} |C|={size_c}: |A+B+C| = {}",
                        abc.len()
                    ),
                    sets: alloc::vec![a, b, c],
                });
            }
            Ok(out)
        })?);
    }
    Ok(violations)
}

// ---------------------------------------------------------------------------
// exhaustive stability verification at n = 2
// ---------------------------------------------------------------------------

/// Per-size statistics of the exhaustive scan.
#[derive(Clone, Debug)]
pub struct SizeStats {
    pub size: usize,
    pub scanned: u64,
    /// Subsets with a non-full triple sumset.
    pub survivors: u64,
    /// Survivors contained in two cosets of some index-5 subgroup.
    pub covered: u64,
    /// Complete list of survivors when there are at most 64, as index
    /// tuples (used for the symmetry checks at size 10).
    pub survivor_sample: Vec<Vec<u64>>,
    pub violations: Vec<ViolationReport>,
}

/// Report of the full `Z_5^2` scan over sizes 8..=11.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub per_size: Vec<SizeStats>,
}

impl StabilityReport {
    pub fn total_violations(&self) -> usize {
        self.per_size.iter().map(|s| s.violations.len()).sum()
    }

    pub fn stats_for(&self, size: usize) -> &SizeStats {
        self.per_size
            .iter()
            .find(|s| s.size == size)
            .expect("size in scanned range")
    }
}

const SURVIVOR_SAMPLE_CAP: usize = 64;

/// Enumerates every subset of `Z_5^2` of size 8 through 11 and checks that
/// each one with a non-full triple sumset lies in a union of two cosets of
/// an index-5 subgroup. Expected: zero violations, exactly 60 survivors at
/// size 10, none at size 11.
pub fn verify_stability_exhaustive() -> Result<StabilityReport> {
    let group = GroupSpec::elementary(5, 2)?;
    let engine = SetEngine::new(group)?;
    let per_size = (8..=11)
        .map(|s| scan_stability_size(&engine, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityReport { per_size })
}

/// True iff some index-5 subgroup has two cosets containing all of
/// `indices` (inline version of the cover scan for hot loops).
fn covered_by_two_cosets(group: &GroupSpec, indices: &[u64]) -> bool {
    let m = group.order();
    'functional: for c_idx in 1..m {
        let func = group.coords_of(c_idx);
        if *func.iter().find(|&&x| x != 0).unwrap() != 1 {
            continue;
        }
        let mut hit = 0u8;
        for &x in indices {
            let phase: u64 = func
                .iter()
                .zip(group.coords_of(x).iter())
                .map(|(&f, &c)| f * c)
                .sum::<u64>()
                % 5;
            hit |= 1 << phase;
            if hit.count_ones() > 2 {
                continue 'functional;
            }
        }
        return true;
    }
    false
}

struct StabilityChunk {
    scanned: u64,
    survivors: u64,
    covered: u64,
    survivor_sample: Vec<Vec<u64>>,
    violations: Vec<Vec<u64>>,
}

fn scan_stability_size(engine: &SetEngine, s: usize) -> Result<SizeStats> {
    let group = engine.group().clone();
    let n = group.order();
    let total = binom(n, s as u64);
    let chunk_len = 16_384u64;
    let chunks = total.div_ceil(chunk_len);
    let run_chunk = |c: u64| -> StabilityChunk {
        let lo = c * chunk_len;
        let hi = (lo + chunk_len).min(total);
        let mut cursor = Combinations::unrank(n, s, lo);
        let mut a_words = engine.alloc();
        let mut two_a = engine.alloc();
        let mut three_a = engine.alloc();
        let (mut t1, mut t2) = (engine.alloc(), engine.alloc());
        let mut out = StabilityChunk {
            scanned: hi - lo,
            survivors: 0,
            covered: 0,
            survivor_sample: Vec::new(),
            violations: Vec::new(),
        };
        for _ in lo..hi {
            let indices = &cursor.indices;
            a_words.fill(0);
            for &i in indices {
                a_words[(i / 64) as usize] |= 1 << (i % 64);
            }
            engine.sumset_words(&mut two_a, indices, &a_words, &mut t1, &mut t2);
            engine.sumset_words(&mut three_a, indices, &two_a, &mut t1, &mut t2);
            if !engine.is_full_words(&three_a) {
                out.survivors += 1;
                if covered_by_two_cosets(&group, indices) {
                    out.covered += 1;
                } else {
                    out.violations.push(indices.clone());
                }
                if out.survivor_sample.len() < SURVIVOR_SAMPLE_CAP {
                    out.survivor_sample.push(indices.clone());
                }
            }
            cursor.advance();
        }
        out
    };
    let results = run_stability_chunks(chunks, run_chunk);
    let mut stats = SizeStats {
        size: s,
        scanned: 0,
        survivors: 0,
        covered: 0,
        survivor_sample: Vec::new(),
        violations: Vec::new(),
    };
    for chunk in results {
        stats.scanned += chunk.scanned;
        stats.survivors += chunk.survivors;
        stats.covered += chunk.covered;
        for sample in chunk.survivor_sample {
            if stats.survivor_sample.len() < SURVIVOR_SAMPLE_CAP {
                stats.survivor_sample.push(sample);
            }
        }
        for v in chunk.violations {
            let set = DenseSubset::from_indices(group.clone(), &v)?;
            stats.violations.push(ViolationReport {
                property: property::STABILITY_COVER,
                observed: format!("size {s} subset with non-full 3A and no cover"),
                sets: alloc::vec![set],
            });
        }
    }
    Ok(stats)
}

#[cfg(feature = "parallel")]
fn run_stability_chunks<F>(chunks: u64, f: F) -> Vec<StabilityChunk>
where
    F: Fn(u64) -> StabilityChunk + Sync + Send,
{
    use rayon::prelude::*;
    (0..chunks).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_stability_chunks<F>(chunks: u64, f: F) -> Vec<StabilityChunk>
where
    F: Fn(u64) -> StabilityChunk + Sync + Send,
{
    (0..chunks).map(f).collect()
}

// ---------------------------------------------------------------------------
// stochastic falsifier for n >= 3
// ---------------------------------------------------------------------------

/// Hill-climbing falsifier: starts from random sets of size
/// `⌊3·5^(n-1)/2⌋ + 1` outside every two-coset union and greedily swaps
/// elements to shrink the triple sumset (maximizing the missing count, then
/// the distance to the nearest two-coset union), escaping plateaus with a
/// forced random swap after 50 non-improving proposals. Any visited state
/// with `3A ≠ G` and no two-coset cover is reported (none are expected).
pub fn falsify_stability_stochastic(
    n: usize,
    restarts: u64,
    seed: u64,
) -> Result<Vec<ViolationReport>> {
    const STEPS_PER_RESTART: u64 = 500;
    const PLATEAU_LIMIT: u32 = 50;
    let group = GroupSpec::elementary(5, n)?;
    let engine = SetEngine::new(group.clone())?;
    let m = group.order();
    let target = (3 * 5u64.pow(n as u32 - 1) / 2 + 1) as usize;
    run_trials(seed, restarts, |rng| {
        let mut violations = Vec::new();
        // sample a start outside every two-coset union
        let mut indices;
        loop {
            indices = rng.distinct(m, target);
            if !covered_by_two_cosets(&group, &indices) {
                break;
            }
        }
        let mut current = objective(&engine, &group, &indices);
        let mut stale = 0u32;
        for _ in 0..STEPS_PER_RESTART {
            let (out_pos, in_elem) = propose_swap(&group, &indices, rng);
            let mut candidate = indices.clone();
            candidate[out_pos] = in_elem;
            candidate.sort_unstable();
            let cand_obj = objective(&engine, &group, &candidate);
            let forced = stale >= PLATEAU_LIMIT;
            if cand_obj >= current || forced {
                if cand_obj <= current {
                    stale = if forced { 0 } else { stale + 1 };
                } else {
                    stale = 0;
                }
                indices = candidate;
                current = cand_obj;
                if current.0 > 0 && current.1 > 0 {
                    let set = DenseSubset::from_indices(group.clone(), &indices)?;
                    violations.push(ViolationReport {
                        property: property::STABILITY_COVER,
                        observed: format!(
                            "missing {} elements from 3A, distance {} from any union",
                            current.0, current.1
                        ),
                        sets: alloc::vec![set],
                    });
                }
            } else {
                stale += 1;
            }
        }
        Ok(violations)
    })
}

fn propose_swap(group: &GroupSpec, indices: &[u64], rng: &mut SplitMix64) -> (usize, u64) {
    let m = group.order();
    let out_pos = rng.below(indices.len() as u64) as usize;
    loop {
        let candidate = rng.below(m);
        if indices.binary_search(&candidate).is_err() {
            return (out_pos, candidate);
        }
    }
}

/// Lexicographic climb objective: (elements missing from 3A, distance to the
/// nearest two-coset union).
fn objective(engine: &SetEngine, group: &GroupSpec, indices: &[u64]) -> (u64, u64) {
    let mut a_words = engine.alloc();
    for &i in indices {
        a_words[(i / 64) as usize] |= 1 << (i % 64);
    }
    let mut two_a = engine.alloc();
    let mut three_a = engine.alloc();
    let (mut t1, mut t2) = (engine.alloc(), engine.alloc());
    engine.sumset_words(&mut two_a, indices, &a_words, &mut t1, &mut t2);
    engine.sumset_words(&mut three_a, indices, &two_a, &mut t1, &mut t2);
    let missing = group.order() - crate::sets::popcount(&three_a) as u64;
    (missing, union_distance(group, indices))
}

/// Least number of elements that must leave the set before it fits in two
/// cosets of some index-5 subgroup (0 means covered).
fn union_distance(group: &GroupSpec, indices: &[u64]) -> u64 {
    let m = group.order();
    let mut best_keep = 0u64;
    for c_idx in 1..m {
        let func = group.coords_of(c_idx);
        if *func.iter().find(|&&x| x != 0).unwrap() != 1 {
            continue;
        }
        let counts = coset_counts(group, indices, &func);
        let mut sorted = counts;
        sorted.sort_unstable();
        best_keep = best_keep.max(sorted[3] + sorted[4]);
    }
    indices.len() as u64 - best_keep
}

/// Applies the invertible linear map with matrix rows `rows` (mod 5) to a
/// set in `Z_5^n`; survivor counts of the stability scan are invariant
/// under these.
pub fn apply_linear_automorphism(
    engine: &SetEngine,
    a: &DenseSubset,
    rows: &[Vec<u64>],
) -> Result<DenseSubset> {
    let group = engine.group().clone();
    if !group.is_elementary(5) {
        return Err(Error::NotExponentFive);
    }
    let rank = group.rank();
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(Error::Precondition("matrix shape must match the rank"));
    }
    let mut out = DenseSubset::empty(group.clone())?;
    for &x in &a.indices() {
        let coords = group.coords_of(x);
        let image: Vec<u64> = rows
            .iter()
            .map(|row| row.iter().zip(coords.iter()).map(|(&r, &c)| r * c).sum::<u64>() % 5)
            .collect();
        let elem = GroupElement::new(&group, &image)?;
        out.insert(elem.index(&group));
    }
    if out.len() != a.len() {
        return Err(Error::Precondition("matrix is not invertible mod 5"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kneser_suite_equality_cases() {
        // hand equality cases first: {0,1}+{0,1} in Z_10 and a subgroup
        let g = GroupSpec::cyclic(10).unwrap();
        let engine = SetEngine::new(g.clone()).unwrap();
        let a = DenseSubset::from_indices(g.clone(), &[0, 1]).unwrap();
        let s = engine.sumset(&a, &a).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(engine.period(&s).unwrap().order(), 1);
        let h = DenseSubset::from_indices(g, &[0, 2, 4, 6, 8]).unwrap();
        let hh = engine.sumset(&h, &h).unwrap();
        assert_eq!(hh.len(), 5);
        assert_eq!(engine.period(&hh).unwrap().order(), 5);
    }

    #[test]
    fn kneser_suite_random_groups() {
        for factors in [&[20u64][..], &[5, 5], &[2, 2, 2], &[97], &[3, 9]] {
            let cfg = TrialConfig::new(
                GroupSpec::from_chain(factors).unwrap(),
                Sampler::UniformSize,
                300,
                0xabcd,
            );
            let v = check_kneser_suite(&cfg).unwrap();
            assert!(v.is_empty(), "violations in {factors:?}: {v:?}");
        }
    }

    #[test]
    fn doubling_density_suite() {
        for n in [1usize, 2] {
            let cfg = TrialConfig::new(
                GroupSpec::elementary(5, n).unwrap(),
                Sampler::UniformSize,
                400,
                7,
            );
            let v = check_doubling_density(&cfg).unwrap();
            assert!(v.is_empty(), "violations: {v:?}");
        }
    }

    #[test]
    fn proposition_suite_on_z5_squared() {
        let cfg = TrialConfig::new(
            GroupSpec::elementary(5, 2).unwrap(),
            Sampler::ConstructionPerturbation,
            400,
            123,
        );
        let v = check_propositions(&cfg).unwrap();
        assert!(v.is_empty(), "violations: {v:?}");
    }

    #[test]
    fn two_coset_union_meets_hypotheses_consistently() {
        // a full two-coset union has density 0.4 > 0.3 and non-full 3A:
        // the proposition scan must accept it silently
        let g = GroupSpec::elementary(5, 2).unwrap();
        let engine = SetEngine::new(g.clone()).unwrap();
        let union: Vec<u64> = (0..25)
            .filter(|&x| {
                let c = g.coords_of(x);
                c[0] == 0 || c[0] == 1
            })
            .collect();
        let a = DenseSubset::from_indices(g, &union).unwrap();
        assert!(proposition_violations(&engine, &a).unwrap().is_empty());
    }

    #[test]
    fn three_coset_union_has_full_triple_sumset() {
        // contrapositive of the three-coset proposition on a direct witness
        let g = GroupSpec::elementary(5, 2).unwrap();
        let engine = SetEngine::new(g.clone()).unwrap();
        let union: Vec<u64> = (0..25)
            .filter(|&x| {
                let c = g.coords_of(x);
                c[0] <= 2
            })
            .collect();
        let a = DenseSubset::from_indices(g, &union).unwrap();
        assert!(engine.k_fold(&a, 3).unwrap().is_full());
    }

    #[test]
    fn sampler_respects_density_window() {
        let g = GroupSpec::elementary(5, 2).unwrap();
        let engine = SetEngine::new(g).unwrap();
        let mut rng = SplitMix64::new(9);
        for _ in 0..200 {
            let a = sample_set(
                &engine,
                Sampler::DensityWindow { lo: 0.3, hi: 0.5 },
                &mut rng,
            )
            .unwrap();
            assert!(a.len() >= 8 && a.len() <= 12, "size {}", a.len());
        }
    }

    #[test]
    fn violation_reports_replay() {
        let g = GroupSpec::cyclic(10).unwrap();
        let engine = SetEngine::new(g.clone()).unwrap();
        let a = DenseSubset::from_indices(g.clone(), &[0, 1]).unwrap();
        let b = DenseSubset::from_indices(g, &[2, 5]).unwrap();
        // the inequalities hold here, so a fabricated report must not replay
        let fake = ViolationReport {
            property: property::KNESER,
            observed: String::new(),
            sets: alloc::vec![a, b],
        };
        assert!(!fake.reverify(&engine).unwrap());
    }

    #[test]
    fn union_distance_zero_inside_union() {
        let g = GroupSpec::elementary(5, 2).unwrap();
        let union: Vec<u64> = (0..25)
            .filter(|&x| {
                let c = g.coords_of(x);
                c[0] == 0 || c[0] == 3
            })
            .collect();
        assert_eq!(union_distance(&g, &union), 0);
        let spread: Vec<u64> = (0..25).collect();
        assert_eq!(union_distance(&g, &spread), 15);
    }

    #[test]
    fn falsifier_smoke_n2() {
        // must agree with the exhaustive verdict: no counterexamples
        let v = falsify_stability_stochastic(2, 20, 1).unwrap();
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn automorphism_application() {
        let g = GroupSpec::elementary(5, 2).unwrap();
        let engine = SetEngine::new(g.clone()).unwrap();
        let a = DenseSubset::from_indices(g, &[0, 1, 7, 24]).unwrap();
        let rows = alloc::vec![alloc::vec![1, 1], alloc::vec![0, 1]];
        let image = apply_linear_automorphism(&engine, &a, &rows).unwrap();
        assert_eq!(image.len(), a.len());
        let singular = alloc::vec![alloc::vec![1, 1], alloc::vec![2, 2]];
        assert!(apply_linear_automorphism(&engine, &a, &singular).is_err());
    }
}
