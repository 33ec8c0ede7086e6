//! Bit-packed subsets and the sumset kernel.
//!
//! A [`DenseSubset`] is an indicator over element indices, packed 64 to a
//! word. Translation by a group element decomposes, in the mixed-radix
//! encoding, into one block rotation per coordinate; each rotation is two
//! word-parallel shifts stitched together by a precomputed coordinate mask.
//! Sumsets iterate over the smaller operand and OR translated copies of the
//! larger one, which is what makes the exhaustive scans affordable.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::group::{GroupElement, GroupSpec, Subgroup};
use crate::{Error, Result, MAX_DENSE_ORDER};

/// Indicator of a subset of a finite abelian group, bit-packed by element
/// index, with the cardinality cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseSubset {
    group: GroupSpec,
    words: Vec<u64>,
    card: usize,
}

fn word_count(order: u64) -> usize {
    order.div_ceil(64) as usize
}

impl DenseSubset {
    pub fn empty(group: GroupSpec) -> Result<Self> {
        if group.order() > MAX_DENSE_ORDER {
            return Err(Error::OrderLimit {
                order: group.order(),
                limit: MAX_DENSE_ORDER,
            });
        }
        let words = vec![0u64; word_count(group.order())];
        Ok(DenseSubset {
            group,
            words,
            card: 0,
        })
    }

    pub fn full(group: GroupSpec) -> Result<Self> {
        let mut s = Self::empty(group)?;
        let order = s.group.order();
        for w in 0..s.words.len() {
            s.words[w] = u64::MAX;
        }
        mask_tail(&mut s.words, order);
        s.card = order as usize;
        Ok(s)
    }

    pub fn from_indices(group: GroupSpec, indices: &[u64]) -> Result<Self> {
        let mut s = Self::empty(group)?;
        for &i in indices {
            s.insert(i);
        }
        Ok(s)
    }

    pub fn from_elements(group: GroupSpec, elements: &[GroupElement]) -> Result<Self> {
        let mut s = Self::empty(group.clone())?;
        for e in elements {
            s.insert(e.index(&group));
        }
        Ok(s)
    }

    pub fn singleton(group: GroupSpec, index: u64) -> Result<Self> {
        Self::from_indices(group, &[index])
    }

    pub(crate) fn from_words(group: GroupSpec, words: Vec<u64>) -> Self {
        let card = popcount(&words);
        DenseSubset { group, words, card }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// The packed indicator words (low bit of word 0 is element 0).
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn is_full(&self) -> bool {
        self.card as u64 == self.group.order()
    }

    pub fn contains(&self, index: u64) -> bool {
        debug_assert!(index < self.group.order());
        self.words[(index / 64) as usize] >> (index % 64) & 1 == 1
    }

    pub fn insert(&mut self, index: u64) -> bool {
        debug_assert!(index < self.group.order());
        let w = &mut self.words[(index / 64) as usize];
        let bit = 1u64 << (index % 64);
        if *w & bit == 0 {
            *w |= bit;
            self.card += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, index: u64) -> bool {
        let w = &mut self.words[(index / 64) as usize];
        let bit = 1u64 << (index % 64);
        if *w & bit != 0 {
            *w &= !bit;
            self.card -= 1;
            true
        } else {
            false
        }
    }

    /// Sorted element indices.
    pub fn indices(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.card);
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as u64;
                out.push(w as u64 * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Elements as coordinate tuples, sorted by index.
    pub fn elements(&self) -> Vec<GroupElement> {
        self.indices()
            .into_iter()
            .map(|i| GroupElement::from_index(&self.group, i))
            .collect()
    }

    pub fn complement(&self) -> DenseSubset {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        mask_tail(&mut words, self.group.order());
        DenseSubset {
            group: self.group.clone(),
            card: self.group.order() as usize - self.card,
            words,
        }
    }

    pub fn union(&self, other: &DenseSubset) -> Result<DenseSubset> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        Ok(DenseSubset::from_words(self.group.clone(), words))
    }

    pub fn intersection(&self, other: &DenseSubset) -> Result<DenseSubset> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Ok(DenseSubset::from_words(self.group.clone(), words))
    }

    pub fn is_subset_of(&self, other: &DenseSubset) -> bool {
        self.group == other.group
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// Clone with one extra element.
    pub fn with_inserted(&self, index: u64) -> DenseSubset {
        let mut s = self.clone();
        s.insert(index);
        s
    }
}

fn mask_tail(words: &mut [u64], order: u64) {
    let tail = (order % 64) as u32;
    if tail != 0 {
        let last = words.len() - 1;
        words[last] &= (1u64 << tail) - 1;
    }
}

pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Density profile of a set over the five cosets of an index-5 subgroup,
/// taken along a fixed direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetProfile {
    pub subgroup: Subgroup,
    pub direction: GroupElement,
    pub counts: [u64; 5],
    pub densities: [Ratio<u64>; 5],
}

/// Witness that a set fits inside two cosets of one index-5 subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCosetCover {
    /// Normalized linear functional (first nonzero coefficient is 1) whose
    /// kernel is the subgroup.
    pub functional: Vec<u64>,
    pub subgroup: Subgroup,
    /// The two functional values whose cosets contain the set.
    pub cosets: (u8, u8),
}

enum TranslateImpl {
    /// Per-coordinate rotation masks, flattened; `offsets[i] + (t-1)` selects
    /// the mask for shifting coordinate `i` by `t`.
    Masks { masks: Vec<u64>, offsets: Vec<usize> },
    /// Bit-at-a-time fallback when the mask table would be too large.
    PerBit,
}

/// Upper bound on precomputed mask storage, in words.
const MASK_WORD_LIMIT: u128 = 8 << 20;

/// Sumset/translation kernel for one group. Build once, share freely: all
/// methods take `&self` and the precomputed state is immutable.
pub struct SetEngine {
    group: GroupSpec,
    order: u64,
    nwords: usize,
    strides: Vec<u64>,
    imp: TranslateImpl,
}

impl SetEngine {
    pub fn new(group: GroupSpec) -> Result<Self> {
        let order = group.order();
        if order > MAX_DENSE_ORDER {
            return Err(Error::OrderLimit {
                order,
                limit: MAX_DENSE_ORDER,
            });
        }
        let nwords = word_count(order);
        let mut strides = Vec::with_capacity(group.rank());
        let mut stride = 1u64;
        for &m in group.factors() {
            strides.push(stride);
            stride *= m;
        }
        let shift_count: u64 = group.factors().iter().map(|&m| m - 1).sum();
        let imp = if shift_count as u128 * nwords as u128 <= MASK_WORD_LIMIT {
            let mut offsets = Vec::with_capacity(group.rank());
            let mut masks = vec![0u64; shift_count as usize * nwords];
            let mut off = 0usize;
            for (i, &m) in group.factors().iter().enumerate() {
                offsets.push(off);
                for t in 1..m {
                    let base = (off + (t - 1) as usize) * nwords;
                    for idx in 0..order {
                        let coord = idx / strides[i] % m;
                        if coord >= t {
                            masks[base + (idx / 64) as usize] |= 1u64 << (idx % 64);
                        }
                    }
                }
                off += (m - 1) as usize;
            }
            TranslateImpl::Masks { masks, offsets }
        } else {
            TranslateImpl::PerBit
        };
        Ok(SetEngine {
            group,
            order,
            nwords,
            strides,
            imp,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub(crate) fn alloc(&self) -> Vec<u64> {
        vec![0u64; self.nwords]
    }

    fn check(&self, set: &DenseSubset) -> Result<()> {
        if *set.group() != self.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// Writes `src` translated by the element with index `g` into `dst`,
    /// using `tmp` as scratch. All three buffers must have `nwords` words.
    pub(crate) fn translate_into(&self, dst: &mut [u64], src: &[u64], g: u64, tmp: &mut [u64]) {
        match &self.imp {
            TranslateImpl::Masks { masks, offsets } => {
                dst.copy_from_slice(src);
                let mut rem = g;
                let mut in_dst = true;
                for (i, &m) in self.group.factors().iter().enumerate() {
                    let t = rem % m;
                    rem /= m;
                    if t == 0 {
                        continue;
                    }
                    let base = (offsets[i] + (t - 1) as usize) * self.nwords;
                    let mask = &masks[base..base + self.nwords];
                    let s_up = (t * self.strides[i]) as usize;
                    let s_dn = ((m - t) * self.strides[i]) as usize;
                    if in_dst {
                        rotate_coord(tmp, dst, mask, s_up, s_dn);
                    } else {
                        rotate_coord(dst, tmp, mask, s_up, s_dn);
                    }
                    in_dst = !in_dst;
                }
                if !in_dst {
                    dst.copy_from_slice(tmp);
                }
                mask_tail(dst, self.order);
            }
            TranslateImpl::PerBit => {
                dst.fill(0);
                for (w, &word) in src.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let b = bits.trailing_zeros() as u64;
                        bits &= bits - 1;
                        let to = self.group.add_index(w as u64 * 64 + b, g);
                        dst[(to / 64) as usize] |= 1u64 << (to % 64);
                    }
                }
            }
        }
    }

    /// OR of `src` translated by `g` into `acc`.
    pub(crate) fn translate_or(
        &self,
        acc: &mut [u64],
        src: &[u64],
        g: u64,
        t1: &mut [u64],
        t2: &mut [u64],
    ) {
        self.translate_into(t1, src, g, t2);
        for (a, b) in acc.iter_mut().zip(t1.iter()) {
            *a |= b;
        }
    }

    /// `out = {a + b : a in a_indices, b in b_words}`; `out` is cleared first.
    pub(crate) fn sumset_words(
        &self,
        out: &mut [u64],
        a_indices: &[u64],
        b_words: &[u64],
        t1: &mut [u64],
        t2: &mut [u64],
    ) {
        out.fill(0);
        for &a in a_indices {
            self.translate_or(out, b_words, a, t1, t2);
        }
    }

    pub(crate) fn is_full_words(&self, words: &[u64]) -> bool {
        popcount(words) as u64 == self.order
    }

    /// The translate `A + g`.
    pub fn translate(&self, a: &DenseSubset, g: &GroupElement) -> Result<DenseSubset> {
        self.check(a)?;
        let mut out = self.alloc();
        let mut tmp = self.alloc();
        self.translate_into(&mut out, a.words(), g.index(&self.group), &mut tmp);
        Ok(DenseSubset::from_words(self.group.clone(), out))
    }

    /// Exact sumset `A + B`.
    pub fn sumset(&self, a: &DenseSubset, b: &DenseSubset) -> Result<DenseSubset> {
        self.check(a)?;
        self.check(b)?;
        // iterate the smaller operand, translate the larger
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut out = self.alloc();
        let (mut t1, mut t2) = (self.alloc(), self.alloc());
        self.sumset_words(&mut out, &small.indices(), large.words(), &mut t1, &mut t2);
        Ok(DenseSubset::from_words(self.group.clone(), out))
    }

    /// `k`-fold sumset `kA`, by doubling for larger `k`.
    pub fn k_fold(&self, a: &DenseSubset, k: u32) -> Result<DenseSubset> {
        self.check(a)?;
        if k == 0 {
            return Err(Error::ZeroFold);
        }
        if a.is_empty() {
            return Ok(a.clone());
        }
        let mut memo: Vec<(u32, DenseSubset)> = vec![(1, a.clone())];
        Ok(self.k_fold_memo(k, &mut memo))
    }

    fn k_fold_memo(&self, k: u32, memo: &mut Vec<(u32, DenseSubset)>) -> DenseSubset {
        if let Some((_, s)) = memo.iter().find(|(kk, _)| *kk == k) {
            return s.clone();
        }
        let half = k / 2;
        let lo = self.k_fold_memo(half, memo);
        let hi = self.k_fold_memo(k - half, memo);
        let out = self.sumset(&lo, &hi).expect("same group");
        memo.push((k, out.clone()));
        out
    }

    /// The period (stabilizer) `π(A) = {g : A + g = A}`, always a subgroup.
    /// `π(∅) = G` and `π(G) = G`: every translation fixes both.
    pub fn period(&self, a: &DenseSubset) -> Result<Subgroup> {
        self.check(a)?;
        let (mut t1, mut t2) = (self.alloc(), self.alloc());
        let mut stab: Vec<u64> = vec![0];
        for g in 1..self.order {
            // A + g = A forces |<g>| to divide |A|
            if !(a.len() as u64).is_multiple_of(self.group.element_order(g)) {
                continue;
            }
            self.translate_into(&mut t1, a.words(), g, &mut t2);
            if t1 == a.words() {
                stab.push(g);
            }
        }
        let members = DenseSubset::from_indices(self.group.clone(), &stab)?;
        Subgroup::new(members, vec![])
    }

    /// True when `π(A) = {0}`.
    pub fn is_aperiodic(&self, a: &DenseSubset) -> Result<bool> {
        self.check(a)?;
        let (mut t1, mut t2) = (self.alloc(), self.alloc());
        Ok(self.is_aperiodic_words(a.words(), a.len(), &mut t1, &mut t2))
    }

    pub(crate) fn is_aperiodic_words(
        &self,
        words: &[u64],
        card: usize,
        t1: &mut [u64],
        t2: &mut [u64],
    ) -> bool {
        for g in 1..self.order {
            if !(card as u64).is_multiple_of(self.group.element_order(g)) {
                continue;
            }
            self.translate_into(t1, words, g, t2);
            if t1 == words {
                return false;
            }
        }
        true
    }

    /// True iff `kA ≠ G` while `k(A ∪ {g}) = G` for every `g ∉ A`.
    ///
    /// The per-`g` sumsets are assembled from cached powers of `A`:
    /// `k(A ∪ {g}) = kA ∪ ((k-1)A + g) ∪ ... ∪ (A + (k-1)g) ∪ {kg}`.
    pub fn is_maximal_nonfull(&self, a: &DenseSubset, k: u32) -> Result<bool> {
        self.check(a)?;
        if k == 0 {
            return Err(Error::ZeroFold);
        }
        let powers = self.power_words(a, k);
        let (mut t1, mut t2) = (self.alloc(), self.alloc());
        let mut cover = self.alloc();
        Ok(self.is_maximal_nonfull_words(a.words(), &powers, k, &mut cover, &mut t1, &mut t2))
    }

    /// Words of `1A, 2A, ..., kA` (index 0 unused, holds `{0}` for the
    /// `j = k` translation step).
    pub(crate) fn power_words(&self, a: &DenseSubset, k: u32) -> Vec<Vec<u64>> {
        let mut powers: Vec<Vec<u64>> = Vec::with_capacity(k as usize + 1);
        let mut zero = self.alloc();
        zero[0] |= 1;
        powers.push(zero);
        powers.push(a.words().to_vec());
        let (mut t1, mut t2) = (self.alloc(), self.alloc());
        let a_idx = a.indices();
        for _ in 2..=k {
            let mut next = self.alloc();
            if a.is_empty() {
                // kA stays empty
            } else {
                let prev = powers.last().unwrap();
                self.sumset_words(&mut next, &a_idx, prev, &mut t1, &mut t2);
            }
            powers.push(next);
        }
        powers
    }

    pub(crate) fn is_maximal_nonfull_words(
        &self,
        a_words: &[u64],
        powers: &[Vec<u64>],
        k: u32,
        cover: &mut [u64],
        t1: &mut [u64],
        t2: &mut [u64],
    ) -> bool {
        let k = k as usize;
        if self.is_full_words(&powers[k]) {
            return false;
        }
        for g in 0..self.order {
            if a_words[(g / 64) as usize] >> (g % 64) & 1 == 1 {
                continue;
            }
            cover.copy_from_slice(&powers[k]);
            let mut jg = 0u64;
            for j in 1..=k {
                jg = self.group.add_index(jg, g);
                self.translate_or(cover, &powers[k - j], jg, t1, t2);
            }
            if !self.is_full_words(cover) {
                return false;
            }
        }
        true
    }

    /// True iff the closure of `A` under addition is all of `G`.
    pub fn generates(&self, a: &DenseSubset) -> Result<bool> {
        self.check(a)?;
        let (mut t1, mut t2) = (self.alloc(), self.alloc());
        Ok(self.generates_words(a.words(), &a.indices(), &mut t1, &mut t2))
    }

    pub(crate) fn generates_words(
        &self,
        a_words: &[u64],
        a_indices: &[u64],
        t1: &mut [u64],
        t2: &mut [u64],
    ) -> bool {
        let mut cur = self.alloc();
        cur[0] |= 1;
        for (c, &a) in cur.iter_mut().zip(a_words.iter()) {
            *c |= a;
        }
        let mut next = self.alloc();
        loop {
            if self.is_full_words(&cur) {
                return true;
            }
            next.copy_from_slice(&cur);
            for &a in a_indices {
                self.translate_or(&mut next, &cur, a, t1, t2);
            }
            if next == cur {
                return false;
            }
            core::mem::swap(&mut cur, &mut next);
        }
    }

    /// Least `k` with `k(A ∪ {0}) = G`, or `None` when `A` does not
    /// generate. Returns 0 only for the trivial group.
    pub fn min_cover_k(&self, a: &DenseSubset) -> Result<Option<u32>> {
        self.check(a)?;
        if self.order == 1 {
            return Ok(Some(0));
        }
        let mut base = a.clone();
        base.insert(0);
        let base_idx = base.indices();
        let mut cur = base.words().to_vec();
        let (mut t1, mut t2) = (self.alloc(), self.alloc());
        let mut next = self.alloc();
        let mut k = 1u32;
        loop {
            if self.is_full_words(&cur) {
                return Ok(Some(k));
            }
            // 0 is in the base, so successive sumsets only grow
            next.copy_from_slice(&cur);
            for &b in &base_idx {
                if b != 0 {
                    self.translate_or(&mut next, &cur, b, &mut t1, &mut t2);
                }
            }
            if next == cur {
                return Ok(None);
            }
            core::mem::swap(&mut cur, &mut next);
            k += 1;
        }
    }

    /// Densities of `A` in the cosets `ie + F`, `i ∈ [0,4]`, for an index-5
    /// subgroup `F` and a direction `e ∉ F`.
    pub fn coset_profile(
        &self,
        a: &DenseSubset,
        subgroup: &Subgroup,
        direction: &GroupElement,
    ) -> Result<CosetProfile> {
        self.check(a)?;
        if subgroup.group() != &self.group {
            return Err(Error::GroupMismatch);
        }
        if subgroup.subgroup_index() != 5 {
            return Err(Error::Precondition("subgroup must have index 5"));
        }
        let e = direction.index(&self.group);
        if subgroup.contains(e) {
            return Err(Error::Precondition("direction must lie outside the subgroup"));
        }
        let f_order = subgroup.order();
        let members = subgroup.members().indices();
        let mut counts = [0u64; 5];
        let mut ie = 0u64;
        for count in counts.iter_mut() {
            for &h in &members {
                if a.contains(self.group.add_index(ie, h)) {
                    *count += 1;
                }
            }
            ie = self.group.add_index(ie, e);
        }
        debug_assert_eq!(counts.iter().sum::<u64>(), a.len() as u64);
        let densities = counts.map(|c| Ratio::new(c, f_order));
        Ok(CosetProfile {
            subgroup: subgroup.clone(),
            direction: direction.clone(),
            counts,
            densities,
        })
    }

    /// Scans every index-5 subgroup of `Z_5^n` (as kernels of normalized
    /// functionals) for one whose two cosets cover `A`. Returns the first
    /// witness in functional order, or `None`. The empty set is covered by
    /// the first candidate.
    pub fn two_coset_cover_exists(&self, a: &DenseSubset) -> Result<Option<TwoCosetCover>> {
        self.check(a)?;
        if !self.group.is_elementary(5) {
            return Err(Error::NotExponentFive);
        }
        let indices = a.indices();
        let coords: Vec<Vec<u64>> = indices.iter().map(|&i| self.group.coords_of(i)).collect();
        for c_idx in 1..self.order {
            let func = self.group.coords_of(c_idx);
            // normalize representatives: first nonzero coefficient is 1
            if *func.iter().find(|&&x| x != 0).unwrap() != 1 {
                continue;
            }
            let mut hit = 0u8;
            for xc in &coords {
                let v: u64 = func
                    .iter()
                    .zip(xc.iter())
                    .map(|(&f, &x)| f * x)
                    .sum::<u64>()
                    % 5;
                hit |= 1 << v;
                if hit.count_ones() > 2 {
                    break;
                }
            }
            if hit.count_ones() <= 2 {
                let cosets = cover_pair(hit);
                let subgroup = self.kernel_subgroup(&func)?;
                return Ok(Some(TwoCosetCover {
                    functional: func,
                    subgroup,
                    cosets,
                }));
            }
        }
        Ok(None)
    }

    /// Kernel of a nonzero mod-5 functional as a validated subgroup.
    pub fn kernel_subgroup(&self, func: &[u64]) -> Result<Subgroup> {
        let members: Vec<u64> = (0..self.order)
            .filter(|&x| {
                let xc = self.group.coords_of(x);
                func.iter().zip(xc.iter()).map(|(&f, &c)| f * c).sum::<u64>() % 5 == 0
            })
            .collect();
        let set = DenseSubset::from_indices(self.group.clone(), &members)?;
        // independent solutions: pivot coordinate p carries -func[q]
        let p = func.iter().position(|&x| x != 0).expect("nonzero functional");
        let mut gens = Vec::new();
        let inv_p = mod5_inverse(func[p]);
        for q in 0..self.group.rank() {
            if q == p {
                continue;
            }
            let mut v = vec![0u64; self.group.rank()];
            v[q] = 1;
            v[p] = (5 - func[q] * inv_p % 5) % 5;
            gens.push(GroupElement::new(&self.group, &v)?);
        }
        Subgroup::new(set, gens)
    }
}

fn mod5_inverse(x: u64) -> u64 {
    match x % 5 {
        1 => 1,
        2 => 3,
        3 => 2,
        4 => 4,
        _ => panic!("no inverse of 0 mod 5"),
    }
}

fn cover_pair(hit: u8) -> (u8, u8) {
    let mut vals = [0u8; 2];
    let mut n = 0;
    for v in 0..5u8 {
        if hit >> v & 1 == 1 && n < 2 {
            vals[n] = v;
            n += 1;
        }
    }
    match n {
        0 => (0, 1),
        1 => (vals[0], (vals[0] + 1) % 5),
        _ => (vals[0], vals[1]),
    }
}

/// `dst = rotate(src)` for one coordinate: bits whose output coordinate is at
/// least `t` come from the up-shift, the rest wrap around via the down-shift.
/// The mask kills all carry artifacts because it selects by the *output*
/// coordinate.
fn rotate_coord(dst: &mut [u64], src: &[u64], mask_ge: &[u64], s_up: usize, s_dn: usize) {
    let (wu, bu) = (s_up / 64, (s_up % 64) as u32);
    let (wd, bd) = (s_dn / 64, (s_dn % 64) as u32);
    for w in 0..dst.len() {
        let up = shl_word(src, w, wu, bu);
        let dn = shr_word(src, w, wd, bd);
        dst[w] = (up & mask_ge[w]) | (dn & !mask_ge[w]);
    }
}

#[inline]
fn shl_word(src: &[u64], w: usize, word_shift: usize, bit_shift: u32) -> u64 {
    if w < word_shift {
        return 0;
    }
    let lo = src[w - word_shift];
    if bit_shift == 0 {
        lo
    } else {
        let carry = if w > word_shift {
            src[w - word_shift - 1] >> (64 - bit_shift)
        } else {
            0
        };
        (lo << bit_shift) | carry
    }
}

#[inline]
fn shr_word(src: &[u64], w: usize, word_shift: usize, bit_shift: u32) -> u64 {
    let i = w + word_shift;
    if i >= src.len() {
        return 0;
    }
    let lo = src[i];
    if bit_shift == 0 {
        lo
    } else {
        let carry = if i + 1 < src.len() {
            src[i + 1] << (64 - bit_shift)
        } else {
            0
        };
        (lo >> bit_shift) | carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use alloc::collections::BTreeSet;

    fn engine(factors: &[u64]) -> SetEngine {
        SetEngine::new(GroupSpec::from_chain(factors).unwrap()).unwrap()
    }

    fn set(e: &SetEngine, idx: &[u64]) -> DenseSubset {
        DenseSubset::from_indices(e.group().clone(), idx).unwrap()
    }

    /// Reference sumset by plain double loop over index arithmetic.
    fn sumset_naive(e: &SetEngine, a: &DenseSubset, b: &DenseSubset) -> DenseSubset {
        let mut out = DenseSubset::empty(e.group().clone()).unwrap();
        for &x in &a.indices() {
            for &y in &b.indices() {
                out.insert(e.group().add_index(x, y));
            }
        }
        out
    }

    #[test]
    fn sumset_examples() {
        let e = engine(&[10]);
        let a = set(&e, &[0, 1]);
        assert_eq!(e.sumset(&a, &a).unwrap().indices(), vec![0, 1, 2]);
        let evens = set(&e, &[0, 2, 4, 6, 8]);
        assert_eq!(e.sumset(&evens, &evens).unwrap(), evens);
        let empty = set(&e, &[]);
        assert!(e.sumset(&empty, &a).unwrap().is_empty());
    }

    #[test]
    fn sumset_group_mismatch() {
        let e = engine(&[10]);
        let other = GroupSpec::from_chain(&[5]).unwrap();
        let a = set(&e, &[0]);
        let b = DenseSubset::from_indices(other, &[0]).unwrap();
        assert_eq!(e.sumset(&a, &b), Err(Error::GroupMismatch));
    }

    #[test]
    fn sumset_matches_naive_on_mixed_groups() {
        // exercises multi-coordinate rotation incl. multi-word groups
        for factors in [&[10u64][..], &[5, 5], &[2, 12], &[3, 3, 3], &[2, 2, 4], &[90]] {
            let e = engine(factors);
            let n = e.group().order();
            let mut rng = crate::rng::SplitMix64::new(0x5eed + n);
            for _ in 0..40 {
                let a_idx: Vec<u64> = (0..n).filter(|_| rng.next_u64().is_multiple_of(3)).collect();
                let b_idx: Vec<u64> = (0..n).filter(|_| rng.next_u64().is_multiple_of(4)).collect();
                let a = set(&e, &a_idx);
                let b = set(&e, &b_idx);
                assert_eq!(
                    e.sumset(&a, &b).unwrap(),
                    sumset_naive(&e, &a, &b),
                    "factors {factors:?}"
                );
            }
        }
    }

    #[test]
    fn k_fold_examples() {
        let e = engine(&[10]);
        assert_eq!(e.k_fold(&set(&e, &[0, 1]), 3).unwrap().indices(), vec![0, 1, 2, 3]);
        let e5 = engine(&[5]);
        assert_eq!(e5.k_fold(&set(&e5, &[1]), 3).unwrap().indices(), vec![3]);
        assert_eq!(e5.k_fold(&set(&e5, &[1]), 0), Err(Error::ZeroFold));
        // doubling path equals iterated products
        let e = engine(&[2, 12]);
        let a = set(&e, &[1, 2, 7]);
        let mut it = a.clone();
        for k in 2..=9u32 {
            it = e.sumset(&it, &a).unwrap();
            assert_eq!(e.k_fold(&a, k).unwrap(), it, "k = {k}");
        }
    }

    #[test]
    fn two_cosets_of_index5_subgroup_stay_nonfull() {
        let e = engine(&[5, 5]);
        let g = e.group();
        // two cosets of {x : x_0 = 0}
        let mut idx = Vec::new();
        for x1 in 0..5 {
            idx.push(g.index_of(&[0, x1]).unwrap());
            idx.push(g.index_of(&[1, x1]).unwrap());
        }
        let a = set(&e, &idx);
        let s = e.k_fold(&a, 3).unwrap();
        assert_eq!(s.len(), 20);
        assert!(!s.is_full());
    }

    #[test]
    fn period_examples() {
        let e = engine(&[10]);
        assert_eq!(e.period(&set(&e, &[0, 2, 4, 6, 8])).unwrap().order(), 5);
        assert_eq!(e.period(&set(&e, &[0, 1])).unwrap().order(), 1);
        // conventions: empty and full sets are stabilized by everything
        assert_eq!(e.period(&set(&e, &[])).unwrap().order(), 10);
        let full = DenseSubset::full(e.group().clone()).unwrap();
        assert_eq!(e.period(&full).unwrap().order(), 10);
    }

    #[test]
    fn maximality_examples() {
        let e = engine(&[5, 5]);
        let g = e.group();
        let mut idx = Vec::new();
        for x1 in 0..5 {
            idx.push(g.index_of(&[0, x1]).unwrap());
            idx.push(g.index_of(&[1, x1]).unwrap());
        }
        let two_cosets = set(&e, &idx);
        assert!(e.is_maximal_nonfull(&two_cosets, 3).unwrap());

        let full = DenseSubset::full(g.clone()).unwrap();
        assert!(!e.is_maximal_nonfull(&full, 3).unwrap());

        let e5 = engine(&[5]);
        let empty = set(&e5, &[]);
        assert!(!e5.is_maximal_nonfull(&empty, 3).unwrap());
    }

    #[test]
    fn maximality_matches_direct_recomputation() {
        let e = engine(&[12]);
        let mut rng = crate::rng::SplitMix64::new(7);
        for _ in 0..200 {
            let idx: Vec<u64> = (0..12).filter(|_| rng.next_u64().is_multiple_of(3)).collect();
            let a = set(&e, &idx);
            let k = 2 + (rng.next_u64() % 3) as u32;
            let fast = e.is_maximal_nonfull(&a, k).unwrap();
            // direct: recompute k(A ∪ {g}) from scratch
            let ka = e.k_fold(&a, k).unwrap();
            let slow = !ka.is_full()
                && (0..12)
                    .filter(|&g| !a.contains(g))
                    .all(|g| e.k_fold(&a.with_inserted(g), k).unwrap().is_full());
            assert_eq!(fast, slow, "set {idx:?} k={k}");
        }
    }

    #[test]
    fn generates_examples() {
        let e = engine(&[5]);
        assert!(e.generates(&set(&e, &[1])).unwrap());
        let e10 = engine(&[10]);
        assert!(!e10.generates(&set(&e10, &[0, 2])).unwrap());
        let e55 = engine(&[5, 5]);
        let g = e55.group();
        let gens = set(
            &e55,
            &[g.index_of(&[1, 0]).unwrap(), g.index_of(&[0, 1]).unwrap()],
        );
        assert!(e55.generates(&gens).unwrap());
    }

    #[test]
    fn min_cover_examples() {
        let e = engine(&[10]);
        assert_eq!(e.min_cover_k(&set(&e, &[0, 1])).unwrap(), Some(9));
        assert_eq!(e.min_cover_k(&set(&e, &[2])).unwrap(), None);
        let e5 = engine(&[5]);
        assert_eq!(e5.min_cover_k(&set(&e5, &[1])).unwrap(), Some(4));
        let t = SetEngine::new(GroupSpec::trivial()).unwrap();
        let empty = DenseSubset::empty(GroupSpec::trivial()).unwrap();
        assert_eq!(t.min_cover_k(&empty).unwrap(), Some(0));
    }

    #[test]
    fn coset_profile_examples() {
        let e = engine(&[5, 5]);
        let g = e.group().clone();
        let f_members: Vec<u64> = (0..25)
            .filter(|&i| g.coords_of(i)[0] == 0)
            .collect();
        let f = Subgroup::new(
            DenseSubset::from_indices(g.clone(), &f_members).unwrap(),
            vec![GroupElement::new(&g, &[0, 1]).unwrap()],
        )
        .unwrap();
        let e_dir = GroupElement::new(&g, &[1, 0]).unwrap();

        let a = DenseSubset::from_indices(g.clone(), &f_members).unwrap();
        let p = e.coset_profile(&a, &f, &e_dir).unwrap();
        assert_eq!(p.counts, [5, 0, 0, 0, 0]);

        let full = DenseSubset::full(g.clone()).unwrap();
        let p = e.coset_profile(&full, &f, &e_dir).unwrap();
        assert_eq!(p.counts, [5, 5, 5, 5, 5]);

        let inside = GroupElement::new(&g, &[0, 2]).unwrap();
        assert!(e.coset_profile(&a, &f, &inside).is_err());

        // wrong subgroup index
        let full_sub = Subgroup::full(&g).unwrap();
        assert!(matches!(
            e.coset_profile(&a, &full_sub, &e_dir),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn two_coset_cover_examples() {
        let e = engine(&[5, 5]);
        let g = e.group();
        let mut idx = Vec::new();
        for x1 in 0..5 {
            idx.push(g.index_of(&[0, x1]).unwrap());
            idx.push(g.index_of(&[2, x1]).unwrap());
        }
        let a = set(&e, &idx);
        let cover = e.two_coset_cover_exists(&a).unwrap().expect("cover");
        assert_eq!(cover.subgroup.subgroup_index(), 5);
        let full = DenseSubset::full(g.clone()).unwrap();
        assert!(e.two_coset_cover_exists(&full).unwrap().is_none());

        let z10 = engine(&[10]);
        let b = set(&z10, &[0]);
        assert_eq!(z10.two_coset_cover_exists(&b), Err(Error::NotExponentFive));
    }

    #[test]
    fn subgroup_count_scanned_by_cover() {
        // normalized functionals of Z_5^2: (5^2-1)/4 = 6 lines
        let e = engine(&[5, 5]);
        let g = e.group();
        let mut count = 0;
        for c in 1..25u64 {
            let func = g.coords_of(c);
            if *func.iter().find(|&&x| x != 0).unwrap() == 1 {
                count += 1;
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn indices_roundtrip() {
        let e = engine(&[2, 12]);
        let idx = vec![0u64, 3, 17, 23];
        let a = set(&e, &idx);
        assert_eq!(a.indices(), idx);
        assert_eq!(a.len(), 4);
        let c = a.complement();
        assert_eq!(c.len(), 20);
        let all: BTreeSet<u64> = a.indices().into_iter().chain(c.indices()).collect();
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn dense_subset_order_cap() {
        let g = GroupSpec::from_chain(&[1 << 21]).unwrap();
        assert!(matches!(
            DenseSubset::empty(g),
            Err(Error::OrderLimit { .. })
        ));
    }
}
