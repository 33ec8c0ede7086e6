//! Exact certificates for the ten small linear programs that close the
//! density argument: minimize a cosine-weighted sum of five coset densities
//! subject to a total-mass floor of 3/2 and per-coset caps (0.4, relaxed to
//! 0.5 at one index). Each instance is solved twice — by the continuous-
//! knapsack greedy rule and by full vertex enumeration — in exact rational
//! arithmetic over 60-digit fixed-point cosines, and certified to exceed
//! -9/14 with the cosine error budget subtracted.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::bigfixed::{cos_two_pi, scale, to_decimal_string, COS_ERROR_BOUND};
use crate::{Error, Result};

/// Which cube root of unity the instance's objective was rotated by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpCase {
    /// Objective coefficients `cos(2*pi*j/5)`.
    ZetaOne,
    /// Objective coefficients `cos(2*pi*(1/3 + j/5))`.
    ZetaOmega,
}

impl LpCase {
    pub fn label(&self) -> &'static str {
        match self {
            LpCase::ZetaOne => "I",
            LpCase::ZetaOmega => "II",
        }
    }

    fn ordinal(&self) -> u8 {
        match self {
            LpCase::ZetaOne => 1,
            LpCase::ZetaOmega => 2,
        }
    }
}

/// One of the ten instances: a case and the index whose cap is relaxed from
/// 2/5 to 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpInstance {
    pub case: LpCase,
    pub relaxed: usize,
}

impl LpInstance {
    pub fn new(case: LpCase, relaxed: usize) -> Result<Self> {
        if relaxed > 4 {
            return Err(Error::Precondition("relaxed index must be in [0,4]"));
        }
        Ok(LpInstance { case, relaxed })
    }

    /// All ten instances in canonical order (case I then II, k ascending).
    pub fn all() -> Vec<LpInstance> {
        let mut out = Vec::with_capacity(10);
        for case in [LpCase::ZetaOne, LpCase::ZetaOmega] {
            for relaxed in 0..5 {
                out.push(LpInstance { case, relaxed });
            }
        }
        out
    }

    /// Objective coefficients as 60-digit fixed-point integers.
    pub fn coefficients_scaled(&self) -> [BigInt; 5] {
        core::array::from_fn(|j| match self.case {
            LpCase::ZetaOne => cos_two_pi(j as i64, 5),
            LpCase::ZetaOmega => cos_two_pi(5 + 3 * j as i64, 15),
        })
    }

    /// Objective coefficients as exact rationals (fixed-point over 10^60).
    pub fn coefficients(&self) -> [BigRational; 5] {
        let s = scale();
        self.coefficients_scaled()
            .map(|c| BigRational::new(c, s.clone()))
    }

    /// Per-variable upper bounds: 1/2 at the relaxed index, 2/5 elsewhere.
    pub fn upper_bounds(&self) -> [BigRational; 5] {
        core::array::from_fn(|j| {
            if j == self.relaxed {
                BigRational::new(BigInt::from(1), BigInt::from(2))
            } else {
                BigRational::new(BigInt::from(2), BigInt::from(5))
            }
        })
    }
}

/// The total-mass floor `3/2`.
pub fn required_mass() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(2))
}

/// The threshold `-9/14` every minimum must exceed.
pub fn threshold() -> BigRational {
    BigRational::new(BigInt::from(-9), BigInt::from(14))
}

/// An exact optimum: value and attaining point.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub minimum: BigRational,
    pub argmin: [BigRational; 5],
}

fn evaluate(coeffs: &[BigRational; 5], point: &[BigRational; 5]) -> BigRational {
    let mut acc = BigRational::zero();
    for (c, x) in coeffs.iter().zip(point.iter()) {
        acc += c * x;
    }
    acc
}

fn is_feasible(point: &[BigRational; 5], ub: &[BigRational; 5]) -> bool {
    let mass: BigRational = point.iter().sum();
    mass >= required_mass()
        && point
            .iter()
            .zip(ub.iter())
            .all(|(x, u)| !x.is_negative() && x <= u)
}

/// Continuous-knapsack rule: cap every negative-coefficient variable, then
/// if the mass floor is still unmet, raise the cheapest remaining variables
/// (ascending coefficient, ties by index) until the floor is exactly met.
/// Optimal for this polytope: lowering a capped negative or raising beyond
/// the floor can only increase the objective.
pub fn solve_greedy(coeffs: &[BigRational; 5], ub: &[BigRational; 5]) -> LpSolution {
    let mut x: [BigRational; 5] = core::array::from_fn(|_| BigRational::zero());
    for j in 0..5 {
        if coeffs[j].is_negative() {
            x[j] = ub[j].clone();
        }
    }
    let mut need = required_mass() - x.iter().sum::<BigRational>();
    if need.is_positive() {
        let mut order: Vec<usize> = (0..5).filter(|&j| !coeffs[j].is_negative()).collect();
        order.sort_by(|&a, &b| coeffs[a].cmp(&coeffs[b]).then(a.cmp(&b)));
        for j in order {
            if !need.is_positive() {
                break;
            }
            let take = if need < ub[j] { need.clone() } else { ub[j].clone() };
            x[j] = take.clone();
            need -= take;
        }
    }
    assert!(
        !need.is_positive(),
        "infeasible: total capacity 2.1 always covers the 1.5 floor"
    );
    LpSolution {
        minimum: evaluate(coeffs, &x),
        argmin: x,
    }
}

/// Independent cross-check: enumerate every vertex of the polytope. A vertex
/// pins all five coordinates at a bound, or four at bounds with the fifth
/// fixed by the active mass floor. 112 candidates in a fixed order; the
/// first minimizer wins ties.
pub fn solve_vertices(coeffs: &[BigRational; 5], ub: &[BigRational; 5]) -> LpSolution {
    let mut best: Option<LpSolution> = None;
    let mut consider = |point: [BigRational; 5]| {
        if !is_feasible(&point, ub) {
            return;
        }
        let value = evaluate(coeffs, &point);
        let replace = match &best {
            None => true,
            Some(b) => value < b.minimum,
        };
        if replace {
            best = Some(LpSolution {
                minimum: value,
                argmin: point,
            });
        }
    };
    for corner in 0u32..32 {
        let point: [BigRational; 5] = core::array::from_fn(|j| {
            if corner >> j & 1 == 1 {
                ub[j].clone()
            } else {
                BigRational::zero()
            }
        });
        consider(point);
    }
    for free in 0..5 {
        for corner in 0u32..16 {
            let mut point: [BigRational; 5] = core::array::from_fn(|_| BigRational::zero());
            let mut bit = 0;
            for j in 0..5 {
                if j == free {
                    continue;
                }
                if corner >> bit & 1 == 1 {
                    point[j] = ub[j].clone();
                }
                bit += 1;
            }
            let rest: BigRational = point.iter().sum();
            let x = required_mass() - rest;
            if x.is_negative() || x > ub[free] {
                continue;
            }
            point[free] = x;
            consider(point);
        }
    }
    best.expect("the all-capped corner is always feasible")
}

/// Minimum over the box alone (mass floor dropped): every negative
/// coefficient at its cap.
pub fn box_minimum(coeffs: &[BigRational; 5], ub: &[BigRational; 5]) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 0..5 {
        if coeffs[j].is_negative() {
            acc += &coeffs[j] * &ub[j];
        }
    }
    acc
}

/// A certified instance: exact minimum, margin above -9/14, and the
/// agreement between the two independent solving routes.
#[derive(Clone, Debug)]
pub struct LpCertificate {
    pub instance: LpInstance,
    pub minimum_exact: BigRational,
    pub minimum: f64,
    /// Upper bound on the distance between `minimum_exact` (computed from
    /// fixed-point cosines) and the true-real minimum.
    pub error_bound: f64,
    pub argmin: [BigRational; 5],
    pub margin_exact: BigRational,
    pub margin: f64,
    pub method_agreement: f64,
}

impl LpCertificate {
    /// Coefficients as 30-digit decimal strings for third-party replay.
    pub fn coefficient_strings(&self) -> Vec<alloc::string::String> {
        self.instance
            .coefficients_scaled()
            .iter()
            .map(|c| to_decimal_string(c, 30))
            .collect()
    }
}

/// Solves one instance both ways and certifies its minimum against -9/14,
/// subtracting the cosine error budget before comparing.
pub fn certify(instance: LpInstance) -> Result<LpCertificate> {
    let coeffs = instance.coefficients();
    let ub = instance.upper_bounds();
    let greedy = solve_greedy(&coeffs, &ub);
    let vertices = solve_vertices(&coeffs, &ub);
    let agreement = (&greedy.minimum - &vertices.minimum).abs();
    let margin_exact = &greedy.minimum - threshold();
    // total mass at most 2.1, so the exact-vs-real gap is below 2.1 * bound
    let error_bound = 2.1 * COS_ERROR_BOUND;
    let error_rational =
        BigRational::from_f64(error_bound).expect("error bound is a normal float");
    if margin_exact <= error_rational || !agreement.is_zero() {
        return Err(Error::CertificationFailed {
            case: instance.case.ordinal(),
            relaxed: instance.relaxed,
        });
    }
    Ok(LpCertificate {
        instance,
        minimum: greedy.minimum.to_f64().expect("small rational"),
        minimum_exact: greedy.minimum,
        error_bound,
        argmin: greedy.argmin,
        margin: margin_exact.to_f64().expect("small rational"),
        margin_exact,
        method_agreement: agreement.to_f64().expect("small rational"),
    })
}

/// All ten certificates, or the first failure. Every margin is positive by
/// construction of the returned value.
pub fn certify_all() -> Result<Vec<LpCertificate>> {
    LpInstance::all().into_iter().map(certify).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn frozen_minima() {
        // reference values from an independent 80-digit solve
        let expected = [
            ("I", 0, -0.4309016994374947),
            ("I", 1, -0.4309016994374947),
            ("I", 2, -0.5427050983124842),
            ("I", 3, -0.5427050983124842),
            ("I", 4, -0.4309016994374947),
            ("II", 0, -0.549_244_304_328_812),
            ("II", 1, -0.5970590644021926),
            ("II", 2, -0.5096971506555773),
            ("II", 3, -0.4323312436929262),
            ("II", 4, -0.4323312436929262),
        ];
        let certs = certify_all().unwrap();
        assert_eq!(certs.len(), 10);
        for (cert, (label, k, want)) in certs.iter().zip(expected.iter()) {
            assert_eq!(cert.instance.case.label(), *label);
            assert_eq!(cert.instance.relaxed, *k);
            assert!(
                (cert.minimum - want).abs() < 1e-12,
                "case {label} k={k}: {} vs {want}",
                cert.minimum
            );
        }
    }

    #[test]
    fn frozen_argmin_spot_checks() {
        let certs = certify_all().unwrap();
        // case II, k=1: negatives capped, then the cheapest positive
        let c = &certs[6];
        let want = [ratio(2, 5), ratio(1, 2), ratio(2, 5), ratio(0, 1), ratio(1, 5)];
        assert_eq!(c.argmin, want);
        // case I, k=2: the tied positive pair is raised in index order
        let c = &certs[2];
        let want = [ratio(0, 1), ratio(2, 5), ratio(1, 2), ratio(2, 5), ratio(1, 5)];
        assert_eq!(c.argmin, want);
    }

    #[test]
    fn margins_exceed_four_percent() {
        let certs = certify_all().unwrap();
        let mut min_margin = f64::INFINITY;
        for c in &certs {
            assert!(c.margin_exact.is_positive());
            assert!(c.margin >= 0.04, "margin {} too small", c.margin);
            assert!(c.method_agreement <= 1e-12);
            min_margin = min_margin.min(c.margin);
        }
        assert!((min_margin - 0.0457980784549503).abs() < 1e-12);
    }

    #[test]
    fn greedy_argmin_is_feasible_exactly() {
        for inst in LpInstance::all() {
            let coeffs = inst.coefficients();
            let ub = inst.upper_bounds();
            let sol = solve_greedy(&coeffs, &ub);
            assert!(is_feasible(&sol.argmin, &ub));
            assert_eq!(evaluate(&coeffs, &sol.argmin), sol.minimum);
        }
    }

    #[test]
    fn greedy_equals_vertices_on_random_instances() {
        let mut rng = SplitMix64::new(2024);
        for trial in 0..1000 {
            let coeffs: [BigRational; 5] =
                core::array::from_fn(|_| ratio(rng.below(2001) as i64 - 1000, 1000));
            let relaxed = rng.below(5) as usize;
            let ub: [BigRational; 5] = core::array::from_fn(|j| {
                if j == relaxed {
                    ratio(1, 2)
                } else {
                    ratio(2, 5)
                }
            });
            let g = solve_greedy(&coeffs, &ub);
            let v = solve_vertices(&coeffs, &ub);
            assert_eq!(g.minimum, v.minimum, "trial {trial}: {coeffs:?}");
        }
    }

    #[test]
    fn box_minimum_matches_unconstrained_corner() {
        for inst in LpInstance::all() {
            let coeffs = inst.coefficients();
            let ub = inst.upper_bounds();
            let expected = box_minimum(&coeffs, &ub);
            // enumerate all corners without the mass floor
            let mut best: Option<BigRational> = None;
            for corner in 0u32..32 {
                let point: [BigRational; 5] = core::array::from_fn(|j| {
                    if corner >> j & 1 == 1 {
                        ub[j].clone()
                    } else {
                        BigRational::zero()
                    }
                });
                let v = evaluate(&coeffs, &point);
                best = Some(match best {
                    None => v,
                    Some(b) if v < b => v,
                    Some(b) => b,
                });
            }
            assert_eq!(best.unwrap(), expected);
        }
    }

    #[test]
    fn certified_minimum_is_lower_bound_for_feasible_profiles() {
        let certs = certify_all().unwrap();
        let mut rng = SplitMix64::new(77);
        for cert in &certs {
            let coeffs = cert.instance.coefficients();
            let ub = cert.instance.upper_bounds();
            let mut tested = 0;
            while tested < 1000 {
                let point: [BigRational; 5] = core::array::from_fn(|j| {
                    let cap = (&ub[j] * BigRational::from_integer(BigInt::from(1000)))
                        .to_integer()
                        .to_u64()
                        .unwrap();
                    ratio(rng.below(cap + 1) as i64, 1000)
                });
                if !is_feasible(&point, &ub) {
                    continue;
                }
                tested += 1;
                assert!(evaluate(&coeffs, &point) >= cert.minimum_exact);
            }
        }
    }

    #[test]
    fn coefficient_strings_have_thirty_digits() {
        let certs = certify_all().unwrap();
        for s in certs[5].coefficient_strings() {
            let frac = s.split('.').nth(1).unwrap();
            assert_eq!(frac.len(), 30);
        }
    }

    #[test]
    fn rejects_bad_relaxed_index() {
        assert!(LpInstance::new(LpCase::ZetaOne, 5).is_err());
    }
}
