//! Finite abelian groups as invariant-factor chains.
//!
//! A group is stored as the chain `m_1 | m_2 | ... | m_r` (each factor at
//! least 2, each dividing the next, empty chain = trivial group). Elements
//! are indexed in mixed radix with the **first factor varying fastest**:
//! `index = x_0 + x_1*m_1 + x_2*m_1*m_2 + ...`. Every other module relies on
//! this encoding, so it is fixed here once and for all.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::sets::{DenseSubset, SetEngine};
use crate::{Error, Result};

/// A finite abelian group, canonically presented by its invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    factors: Vec<u64>,
    order: u64,
}

impl GroupSpec {
    /// The trivial group (empty factor chain, order 1).
    pub fn trivial() -> Self {
        GroupSpec {
            factors: Vec::new(),
            order: 1,
        }
    }

    /// Builds the invariant-factor chain of `Z_{f_1} ⊕ ... ⊕ Z_{f_s}` for an
    /// arbitrary multiset of cyclic orders, e.g. `[4, 6]` normalizes to
    /// `[2, 12]`.
    pub fn normalize(factors: &[u64]) -> Result<Self> {
        for &m in factors {
            if m < 2 {
                return Err(Error::InvalidFactor(m));
            }
        }
        // Per prime, collect exponents over all supplied factors, largest
        // first; the j-th invariant factor (from the top) multiplies the
        // j-th largest exponent of every prime.
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &m in factors {
            for (p, e) in factorize(m) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        for exps in by_prime.values_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut chain = vec![1u64; rank];
        for (p, exps) in &by_prime {
            for (j, &e) in exps.iter().enumerate() {
                chain[j] *= p.pow(e);
            }
        }
        chain.reverse();
        let order = chain.iter().product();
        Ok(GroupSpec {
            factors: chain,
            order,
        })
    }

    /// Builds a spec from a list that is already an invariant chain.
    /// Rejects lists that violate the divisibility requirement.
    pub fn from_chain(factors: &[u64]) -> Result<Self> {
        for &m in factors {
            if m < 2 {
                return Err(Error::InvalidFactor(m));
            }
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Precondition("factors must form a divisibility chain"));
            }
        }
        Ok(GroupSpec {
            factors: factors.to_vec(),
            order: factors.iter().product(),
        })
    }

    /// Cyclic group of the given order.
    pub fn cyclic(m: u64) -> Result<Self> {
        Self::from_chain(&[m])
    }

    /// Elementary group `Z_p^n`.
    pub fn elementary(p: u64, n: usize) -> Result<Self> {
        Self::from_chain(&vec![p; n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of invariant factors (the minimal number of generators).
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// True for `Z_p^n` with the given prime (rank may be zero only if the
    /// group is trivial, which is not considered elementary here).
    pub fn is_elementary(&self, p: u64) -> bool {
        !self.factors.is_empty() && self.factors.iter().all(|&m| m == p)
    }

    /// Decodes an element index into coordinates.
    pub fn coords_of(&self, index: u64) -> Vec<u64> {
        debug_assert!(index < self.order);
        let mut rem = index;
        self.factors
            .iter()
            .map(|&m| {
                let c = rem % m;
                rem /= m;
                c
            })
            .collect()
    }

    /// Encodes coordinates (reduced componentwise) into an element index.
    pub fn index_of(&self, coords: &[u64]) -> Result<u64> {
        if coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                found: coords.len(),
            });
        }
        let mut idx = 0u64;
        let mut stride = 1u64;
        for (&c, &m) in coords.iter().zip(&self.factors) {
            idx += (c % m) * stride;
            stride *= m;
        }
        Ok(idx)
    }

    /// Index arithmetic: `i + j` in the group.
    pub fn add_index(&self, i: u64, j: u64) -> u64 {
        let mut out = 0u64;
        let mut stride = 1u64;
        let (mut a, mut b) = (i, j);
        for &m in &self.factors {
            let c = (a % m + b % m) % m;
            out += c * stride;
            stride *= m;
            a /= m;
            b /= m;
        }
        out
    }

    /// Index arithmetic: `-i` in the group.
    pub fn neg_index(&self, i: u64) -> u64 {
        let mut out = 0u64;
        let mut stride = 1u64;
        let mut a = i;
        for &m in &self.factors {
            let c = (m - a % m) % m;
            out += c * stride;
            stride *= m;
            a /= m;
        }
        out
    }

    /// Index arithmetic: `c * i` in the group.
    pub fn scalar_mul_index(&self, c: u64, i: u64) -> u64 {
        let mut out = 0u64;
        let mut stride = 1u64;
        let mut a = i;
        for &m in &self.factors {
            out += ((a % m) * (c % m) % m) * stride;
            stride *= m;
            a /= m;
        }
        out
    }

    /// Order of the element with the given index.
    pub fn element_order(&self, i: u64) -> u64 {
        let mut ord = 1u64;
        let mut a = i;
        for &m in &self.factors {
            let c = a % m;
            a /= m;
            let o = m / gcd(c, m);
            ord = ord / gcd(ord, o) * o;
        }
        ord
    }
}

impl fmt::Display for GroupSpec {
    /// Comma-separated factor list; the trivial group prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, m) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// An element of a [`GroupSpec`], held as reduced coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(group: &GroupSpec, coords: &[u64]) -> Result<Self> {
        if coords.len() != group.rank() {
            return Err(Error::DimensionMismatch {
                expected: group.rank(),
                found: coords.len(),
            });
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(group.factors())
                .map(|(&c, &m)| c % m)
                .collect(),
        })
    }

    pub fn zero(group: &GroupSpec) -> Self {
        GroupElement {
            coords: vec![0; group.rank()],
        }
    }

    /// The `i`-th standard generator (1 in coordinate `i`).
    pub fn generator(group: &GroupSpec, i: usize) -> Self {
        let mut coords = vec![0; group.rank()];
        coords[i] = 1;
        GroupElement { coords }
    }

    pub fn from_index(group: &GroupSpec, index: u64) -> Self {
        GroupElement {
            coords: group.coords_of(index),
        }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn index(&self, group: &GroupSpec) -> u64 {
        group
            .index_of(&self.coords)
            .expect("element built for this group")
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Componentwise sum modulo the factor chain.
    pub fn add(&self, other: &GroupElement, group: &GroupSpec) -> Result<GroupElement> {
        if self.coords.len() != other.coords.len() || self.coords.len() != group.rank() {
            return Err(Error::DimensionMismatch {
                expected: group.rank(),
                found: self.coords.len().max(other.coords.len()),
            });
        }
        Ok(GroupElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .zip(group.factors())
                .map(|((&a, &b), &m)| (a + b) % m)
                .collect(),
        })
    }

    pub fn neg(&self, group: &GroupSpec) -> GroupElement {
        GroupElement {
            coords: self
                .coords
                .iter()
                .zip(group.factors())
                .map(|(&a, &m)| (m - a) % m)
                .collect(),
        }
    }

    pub fn scalar_mul(&self, c: u64, group: &GroupSpec) -> GroupElement {
        GroupElement {
            coords: self
                .coords
                .iter()
                .zip(group.factors())
                .map(|(&a, &m)| a * (c % m) % m)
                .collect(),
        }
    }
}

impl fmt::Display for GroupElement {
    /// Parenthesized coordinate tuple, e.g. `(2,3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Componentwise sum of two elements (free-function form).
pub fn element_add(g: &GroupElement, h: &GroupElement, group: &GroupSpec) -> Result<GroupElement> {
    g.add(h, group)
}

/// `diam⁺(G) = Σ (m_i - 1)`: the least `k` such that every generating subset
/// `A` satisfies `k(A ∪ {0}) = G`.
pub fn diam_plus(group: &GroupSpec) -> u64 {
    group.factors().iter().map(|&m| m - 1).sum()
}

/// Order cap for [`diam_plus_bruteforce`]: a full 2^|G| subset scan.
pub const DIAM_BRUTE_MAX_ORDER: u64 = 12;

/// Independent oracle for [`diam_plus`]: enumerates every generating subset
/// and takes the worst cover exponent. Only for groups of order at most 12.
pub fn diam_plus_bruteforce(group: &GroupSpec) -> Result<u64> {
    if group.order() > DIAM_BRUTE_MAX_ORDER {
        return Err(Error::OrderLimit {
            order: group.order(),
            limit: DIAM_BRUTE_MAX_ORDER,
        });
    }
    let engine = SetEngine::new(group.clone())?;
    let n = group.order() as usize;
    let mut worst = 0u64;
    for mask in 0u32..(1u32 << n) {
        let indices: Vec<u64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i as u64).collect();
        let set = DenseSubset::from_indices(group.clone(), &indices)?;
        if !engine.generates(&set)? {
            continue;
        }
        let k = engine
            .min_cover_k(&set)?
            .expect("generating sets have a cover exponent");
        worst = worst.max(k as u64);
    }
    Ok(worst)
}

/// A subgroup of an ambient group: dense member set, the generators it was
/// built from, and its index in the ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: DenseSubset,
    generators: Vec<GroupElement>,
    index: u64,
}

impl Subgroup {
    /// Validates closure under addition and membership of zero.
    pub fn new(members: DenseSubset, generators: Vec<GroupElement>) -> Result<Self> {
        let group = members.group().clone();
        if !members.contains(0) {
            return Err(Error::NotASubgroup);
        }
        let indices = members.indices();
        for &a in &indices {
            for &b in &indices {
                if !members.contains(group.add_index(a, b)) {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        let index = group.order() / indices.len() as u64;
        Ok(Subgroup {
            members,
            generators,
            index,
        })
    }

    /// Closure of the given generators inside `group`.
    pub fn generated_by(group: &GroupSpec, generators: &[GroupElement]) -> Result<Self> {
        let seed: Vec<u64> = generators.iter().map(|g| g.index(group)).collect();
        let members_idx = closure_indices(group, &seed);
        let members = DenseSubset::from_indices(group.clone(), &members_idx)?;
        let index = group.order() / members_idx.len() as u64;
        Ok(Subgroup {
            members,
            generators: generators.to_vec(),
            index,
        })
    }

    pub fn trivial(group: &GroupSpec) -> Result<Self> {
        Subgroup::generated_by(group, &[])
    }

    pub fn full(group: &GroupSpec) -> Result<Self> {
        let gens: Vec<GroupElement> = (0..group.rank())
            .map(|i| GroupElement::generator(group, i))
            .collect();
        Subgroup::generated_by(group, &gens)
    }

    pub fn members(&self) -> &DenseSubset {
        &self.members
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    /// Index `|G| / |H|` in the ambient group.
    pub fn subgroup_index(&self) -> u64 {
        self.index
    }

    pub fn group(&self) -> &GroupSpec {
        self.members.group()
    }

    pub fn contains(&self, idx: u64) -> bool {
        self.members.contains(idx)
    }
}

/// Closure of a seed set under addition (which, in a finite group, also
/// yields negatives and zero). Returns sorted element indices.
pub(crate) fn closure_indices(group: &GroupSpec, seed: &[u64]) -> Vec<u64> {
    let mut members = BTreeSet::new();
    members.insert(0u64);
    let mut queue: Vec<u64> = seed.to_vec();
    while let Some(x) = queue.pop() {
        if !members.insert(x) {
            continue;
        }
        let snapshot: Vec<u64> = members.iter().copied().collect();
        for y in snapshot {
            let z = group.add_index(x, y);
            if !members.contains(&z) {
                queue.push(z);
            }
        }
    }
    // keep folding until genuinely closed (new sums of old members)
    loop {
        let snapshot: Vec<u64> = members.iter().copied().collect();
        let mut grew = false;
        for &a in &snapshot {
            for &b in &snapshot {
                if members.insert(group.add_index(a, b)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    members.into_iter().collect()
}

/// Order cap for [`enumerate_subgroups`].
pub const SUBGROUP_ENUM_MAX_ORDER: u64 = 64;

/// All subgroups of `group` with order at most `max_order`, found by closing
/// generator sets iteratively. Sorted by order, then lexicographically by
/// member set. Requires `|G| <= 64`.
pub fn enumerate_subgroups(group: &GroupSpec, max_order: u64) -> Result<Vec<Subgroup>> {
    if group.order() > SUBGROUP_ENUM_MAX_ORDER {
        return Err(Error::OrderLimit {
            order: group.order(),
            limit: SUBGROUP_ENUM_MAX_ORDER,
        });
    }
    let mut seen: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new(); // members -> generator indices
    let trivial: Vec<u64> = vec![0];
    seen.insert(trivial.clone(), Vec::new());
    let mut work: Vec<(Vec<u64>, Vec<u64>)> = vec![(trivial, Vec::new())];
    while let Some((members, gens)) = work.pop() {
        for g in 0..group.order() {
            if members.binary_search(&g).is_ok() {
                continue;
            }
            let mut seed = members.clone();
            seed.push(g);
            let grown = closure_indices(group, &seed);
            if !seen.contains_key(&grown) {
                let mut new_gens = gens.clone();
                new_gens.push(g);
                seen.insert(grown.clone(), new_gens.clone());
                work.push((grown, new_gens));
            }
        }
    }
    let mut out: Vec<Subgroup> = Vec::new();
    for (members, gens) in seen {
        if members.len() as u64 > max_order {
            continue;
        }
        let set = DenseSubset::from_indices(group.clone(), &members)?;
        let generators = gens
            .iter()
            .map(|&g| GroupElement::from_index(group, g))
            .collect();
        let index = group.order() / members.len() as u64;
        out.push(Subgroup {
            members: set,
            generators,
            index,
        });
    }
    out.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members.words().cmp(b.members.words()))
    });
    Ok(out)
}

/// Canonical projection `G -> G/H`: the quotient's invariant-factor chain and
/// a table mapping every element index of `G` to its coset index. Coset 0 is
/// the subgroup itself; cosets are numbered by least member index.
pub fn quotient_map(group: &GroupSpec, subgroup: &Subgroup) -> Result<(GroupSpec, Vec<u64>)> {
    if subgroup.group() != group {
        return Err(Error::GroupMismatch);
    }
    // re-verify closure; a Subgroup is validated at construction, but the
    // quotient structure silently corrupts if this ever regresses
    let idxs = subgroup.members().indices();
    for &a in &idxs {
        for &b in &idxs {
            if !subgroup.contains(group.add_index(a, b)) {
                return Err(Error::NotASubgroup);
            }
        }
    }
    let n = group.order() as usize;
    let mut table = vec![u64::MAX; n];
    let mut reps: Vec<u64> = Vec::new();
    for i in 0..n as u64 {
        if table[i as usize] != u64::MAX {
            continue;
        }
        let id = reps.len() as u64;
        reps.push(i);
        for &h in &idxs {
            table[group.add_index(i, h) as usize] = id;
        }
    }
    let quotient = quotient_spec_from_reps(group, &reps, &table);
    Ok((quotient, table))
}

/// Reconstructs the invariant factors of the quotient from element-order
/// statistics: for each prime `p`, the count of cosets killed by `p^k`
/// determines the multiset of `p`-exponents.
fn quotient_spec_from_reps(group: &GroupSpec, reps: &[u64], table: &[u64]) -> GroupSpec {
    let q = reps.len() as u64;
    if q == 1 {
        return GroupSpec::trivial();
    }
    let mut partitions: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, _) in factorize(q) {
        // counts[k] = #{cosets x : p^k * x = 0}, a power of p
        let mut exps_ge: Vec<u32> = Vec::new(); // #{invariant exponents >= k}
        let mut prev_log = 0u32;
        let mut pk = 1u64;
        loop {
            pk *= p;
            let count = reps
                .iter()
                .filter(|&&r| table[group.scalar_mul_index(pk, r) as usize] == 0)
                .count() as u64;
            let log = exact_log(count, p);
            if log == prev_log {
                break;
            }
            exps_ge.push(log - prev_log);
            prev_log = log;
        }
        // exps_ge[k-1] = #exponents >= k; conjugate into the exponents
        let mut exps: Vec<u32> = Vec::new();
        let max_e = exps_ge.len() as u32;
        let count_parts = exps_ge[0];
        for i in 0..count_parts {
            let e = (1..=max_e)
                .take_while(|&k| exps_ge[(k - 1) as usize] > i)
                .count() as u32;
            exps.push(e);
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        partitions.insert(p, exps);
    }
    let rank = partitions.values().map(Vec::len).max().unwrap_or(0);
    let mut chain = vec![1u64; rank];
    for (p, exps) in &partitions {
        for (j, &e) in exps.iter().enumerate() {
            chain[j] *= p.pow(e);
        }
    }
    chain.reverse();
    let spec = GroupSpec::from_chain(&chain).expect("order statistics yield a valid chain");
    debug_assert_eq!(spec.order(), q);
    spec
}

fn exact_log(mut count: u64, p: u64) -> u32 {
    let mut log = 0;
    while count > 1 {
        debug_assert_eq!(count % p, 0, "torsion count must be a power of {p}");
        count /= p;
        log += 1;
    }
    log
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn normalize_keeps_chains() {
        let g = GroupSpec::normalize(&[5, 5]).unwrap();
        assert_eq!(g.factors(), &[5, 5]);
        assert_eq!(g.order(), 25);
        let g = GroupSpec::normalize(&[2, 10]).unwrap();
        assert_eq!(g.factors(), &[2, 10]);
        assert_eq!(g.order(), 20);
    }

    #[test]
    fn normalize_reduces_mixed_factors() {
        // Z_4 ⊕ Z_6 ≅ Z_2 ⊕ Z_12
        let g = GroupSpec::normalize(&[4, 6]).unwrap();
        assert_eq!(g.factors(), &[2, 12]);
        assert_eq!(g.order(), 24);
    }

    #[test]
    fn normalize_matches_element_order_statistics() {
        // oracle: the multiset of element orders is an isomorphism invariant
        fn order_multiset(factors: &[u64]) -> Vec<u64> {
            let order: u64 = factors.iter().product();
            let mut orders: Vec<u64> = (0..order)
                .map(|idx| {
                    let mut rem = idx;
                    let mut o = 1u64;
                    for &m in factors {
                        let c = rem % m;
                        rem /= m;
                        let oc = m / gcd(c, m);
                        o = o / gcd(o, oc) * oc;
                    }
                    o
                })
                .collect();
            orders.sort_unstable();
            orders
        }
        for input in [&[4u64, 6][..], &[2, 2, 9], &[6, 10], &[8, 12, 3]] {
            let g = GroupSpec::normalize(input).unwrap();
            assert_eq!(
                order_multiset(input),
                order_multiset(g.factors()),
                "normalize changed the isomorphism type of {input:?}"
            );
        }
    }

    #[test]
    fn normalize_rejects_unit_factors() {
        assert_eq!(GroupSpec::normalize(&[1, 5]), Err(Error::InvalidFactor(1)));
        assert_eq!(GroupSpec::normalize(&[0]), Err(Error::InvalidFactor(0)));
    }

    #[test]
    fn trivial_group_is_legal() {
        let g = GroupSpec::normalize(&[]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.rank(), 0);
        assert_eq!(diam_plus(&g), 0);
    }

    #[test]
    fn element_addition() {
        let g = GroupSpec::from_chain(&[5, 5]).unwrap();
        let a = GroupElement::new(&g, &[2, 3]).unwrap();
        let b = GroupElement::new(&g, &[4, 4]).unwrap();
        assert_eq!(a.add(&b, &g).unwrap().coords(), &[1, 2]);
        let zero = GroupElement::zero(&g);
        assert_eq!(a.add(&zero, &g).unwrap(), a);

        let z10 = GroupSpec::cyclic(10).unwrap();
        let one = GroupElement::new(&z10, &[1]).unwrap();
        let nine = GroupElement::new(&z10, &[9]).unwrap();
        assert!(one.add(&nine, &z10).unwrap().is_zero());
    }

    #[test]
    fn element_dimension_mismatch() {
        let g = GroupSpec::from_chain(&[5, 5]).unwrap();
        let h = GroupSpec::cyclic(5).unwrap();
        let a = GroupElement::new(&h, &[2]).unwrap();
        let b = GroupElement::new(&g, &[1, 1]).unwrap();
        assert!(matches!(
            a.add(&b, &g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mixed_radix_first_factor_fastest() {
        let g = GroupSpec::from_chain(&[2, 12]).unwrap();
        assert_eq!(g.index_of(&[1, 0]).unwrap(), 1);
        assert_eq!(g.index_of(&[0, 1]).unwrap(), 2);
        assert_eq!(g.coords_of(5), vec![1, 2]);
        for idx in 0..g.order() {
            assert_eq!(g.index_of(&g.coords_of(idx)).unwrap(), idx);
        }
    }

    #[test]
    fn diam_plus_formula_values() {
        assert_eq!(diam_plus(&GroupSpec::from_chain(&[5, 5]).unwrap()), 8);
        assert_eq!(diam_plus(&GroupSpec::cyclic(10).unwrap()), 9);
    }

    #[test]
    fn diam_plus_bruteforce_agrees() {
        // every isomorphism class within the enumeration budget
        for factors in [
            &[][..],
            &[2],
            &[3],
            &[4],
            &[2, 2],
            &[5],
            &[6],
            &[7],
            &[8],
            &[2, 4],
            &[2, 2, 2],
            &[9],
            &[3, 3],
            &[10],
            &[11],
            &[12],
            &[2, 6],
        ] {
            let g = GroupSpec::from_chain(factors).unwrap();
            assert_eq!(
                diam_plus_bruteforce(&g).unwrap(),
                diam_plus(&g),
                "diam+ mismatch for {factors:?}"
            );
        }
    }

    #[test]
    fn diam_plus_bruteforce_budget() {
        let g = GroupSpec::cyclic(13).unwrap();
        assert!(matches!(
            diam_plus_bruteforce(&g),
            Err(Error::OrderLimit { .. })
        ));
    }

    #[test]
    fn subgroup_counts() {
        let cases: [(&[u64], usize); 4] =
            [(&[5, 5], 8), (&[4], 3), (&[2, 2], 5), (&[2, 2, 2, 2], 67)];
        for (factors, expected) in cases {
            let g = GroupSpec::from_chain(factors).unwrap();
            let subs = enumerate_subgroups(&g, g.order()).unwrap();
            assert_eq!(subs.len(), expected, "subgroup count for {factors:?}");
            // Lagrange + closure re-verification
            for h in &subs {
                assert_eq!(g.order() % h.order(), 0);
                Subgroup::new(h.members().clone(), h.generators().to_vec()).unwrap();
            }
        }
    }

    #[test]
    fn subgroups_of_z5_squared_by_order() {
        let g = GroupSpec::from_chain(&[5, 5]).unwrap();
        let subs = enumerate_subgroups(&g, 25).unwrap();
        let orders: Vec<u64> = subs.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 5, 5, 5, 5, 5, 5, 25]);
    }

    #[test]
    fn quotient_of_z10_by_order2() {
        let g = GroupSpec::cyclic(10).unwrap();
        let h = Subgroup::generated_by(&g, &[GroupElement::new(&g, &[5]).unwrap()]).unwrap();
        assert_eq!(h.order(), 2);
        let (q, table) = quotient_map(&g, &h).unwrap();
        assert_eq!(q.factors(), &[5]);
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(
                    q.add_index(table[i as usize], table[j as usize]),
                    table[g.add_index(i, j) as usize],
                    "homomorphism property fails at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn quotient_by_trivial_is_identity() {
        let g = GroupSpec::from_chain(&[5, 5]).unwrap();
        let h = Subgroup::trivial(&g).unwrap();
        let (q, table) = quotient_map(&g, &h).unwrap();
        assert_eq!(q, g);
        assert_eq!(table, (0..25).collect::<Vec<u64>>());
    }

    #[test]
    fn quotient_detects_non_cyclic_structure() {
        // (Z_2 ⊕ Z_4) / <(0,2)> ≅ Z_2 ⊕ Z_2
        let g = GroupSpec::from_chain(&[2, 4]).unwrap();
        let h = Subgroup::generated_by(&g, &[GroupElement::new(&g, &[0, 2]).unwrap()]).unwrap();
        let (q, _) = quotient_map(&g, &h).unwrap();
        assert_eq!(q.factors(), &[2, 2]);

        // Z_12 / <6> ≅ Z_6
        let g = GroupSpec::cyclic(12).unwrap();
        let h = Subgroup::generated_by(&g, &[GroupElement::new(&g, &[6]).unwrap()]).unwrap();
        let (q, _) = quotient_map(&g, &h).unwrap();
        assert_eq!(q.factors(), &[6]);

        // (Z_4 ⊕ Z_8) / <(2,0)> ≅ Z_2 ⊕ Z_8: the order-statistics
        // reconstruction must keep the large cyclic part intact
        let g = GroupSpec::from_chain(&[4, 8]).unwrap();
        let h = Subgroup::generated_by(&g, &[GroupElement::new(&g, &[2, 0]).unwrap()]).unwrap();
        let (q, table) = quotient_map(&g, &h).unwrap();
        assert_eq!(q.factors(), &[2, 8]);
        for i in 0..32 {
            for j in 0..32 {
                assert_eq!(
                    q.add_index(table[i as usize], table[j as usize]),
                    table[g.add_index(i, j) as usize]
                );
            }
        }
    }

    #[test]
    fn quotient_of_z5_squared_by_line() {
        let g = GroupSpec::from_chain(&[5, 5]).unwrap();
        let h = Subgroup::generated_by(&g, &[GroupElement::new(&g, &[0, 1]).unwrap()]).unwrap();
        let (q, table) = quotient_map(&g, &h).unwrap();
        assert_eq!(q.factors(), &[5]);
        // constant on cosets
        for &m in h.members().indices().iter() {
            for i in 0..25 {
                assert_eq!(table[g.add_index(i, m) as usize], table[i as usize]);
            }
        }
    }

    #[test]
    fn subgroup_rejects_non_closed_set() {
        let g = GroupSpec::cyclic(10).unwrap();
        let set = DenseSubset::from_indices(g.clone(), &[0, 1]).unwrap();
        assert_eq!(Subgroup::new(set, vec![]), Err(Error::NotASubgroup));
    }

    #[test]
    fn element_display() {
        let g = GroupSpec::from_chain(&[5, 5]).unwrap();
        let a = GroupElement::new(&g, &[2, 3]).unwrap();
        assert_eq!(format!("{a}"), "(2,3)");
        assert_eq!(format!("{g}"), "5,5");
    }
}
