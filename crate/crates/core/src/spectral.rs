//! Character sums over `Z_5^n`: Fourier coefficients of indicator functions,
//! the cubic-sum identity, the off-principal Parseval sum, and the
//! large-coefficient witness extraction used to rule out sparse-but-heavy
//! coset profiles.
//!
//! Arithmetic is plain `f64` complex; the only irrational inputs are the
//! fifth roots of unity, fixed below to their nearest-double values, so every
//! sum here is exact to a few ulps times the number of terms.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::group::{GroupElement, GroupSpec};
use crate::sets::{CosetProfile, DenseSubset, SetEngine};
use crate::{Error, Result};

/// `exp(2*pi*i*k/5)` for `k = 0..5`, nearest doubles.
pub const FIFTH_ROOTS: [(f64, f64); 5] = [
    (1.0, 0.0),
    (0.309_016_994_374_947_45, 0.951_056_516_295_153_5),
    (-0.809_016_994_374_947_5, 0.587_785_252_292_473_1),
    (-0.809_016_994_374_947_5, -0.587_785_252_292_473_1),
    (0.309_016_994_374_947_45, -0.951_056_516_295_153_5),
];

/// `exp(2*pi*i/3)`.
pub const OMEGA: (f64, f64) = (-0.5, 0.866_025_403_784_438_6);

fn root5(k: u64) -> Complex64 {
    let (re, im) = FIFTH_ROOTS[(k % 5) as usize];
    Complex64::new(re, im)
}

/// A cube root of unity, as used to rotate Fourier coefficients toward the
/// positive real axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubeRoot {
    One,
    Omega,
    OmegaSquared,
}

impl CubeRoot {
    pub fn value(self) -> Complex64 {
        let omega = Complex64::new(OMEGA.0, OMEGA.1);
        match self {
            CubeRoot::One => Complex64::new(1.0, 0.0),
            CubeRoot::Omega => omega,
            CubeRoot::OmegaSquared => omega.conj(),
        }
    }

    fn from_turn(t: u8) -> Self {
        match t {
            0 => CubeRoot::One,
            1 => CubeRoot::Omega,
            _ => CubeRoot::OmegaSquared,
        }
    }
}

/// A character of `Z_5^n`: `x ↦ exp(2πi (c·x)/5)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    coeffs: Vec<u8>,
}

impl Character {
    pub fn new(group: &GroupSpec, coeffs: &[u8]) -> Result<Self> {
        check_exponent_five(group)?;
        if coeffs.len() != group.rank() {
            return Err(Error::DimensionMismatch {
                expected: group.rank(),
                found: coeffs.len(),
            });
        }
        Ok(Character {
            coeffs: coeffs.iter().map(|&c| c % 5).collect(),
        })
    }

    pub fn principal(group: &GroupSpec) -> Result<Self> {
        Self::new(group, &vec![0; group.rank()])
    }

    /// The character whose coefficient vector is the coordinate tuple of
    /// `index` (so `index = 0` is principal).
    pub fn from_index(group: &GroupSpec, index: u64) -> Result<Self> {
        check_exponent_five(group)?;
        let coeffs: Vec<u8> = group.coords_of(index).iter().map(|&c| c as u8).collect();
        Ok(Character { coeffs })
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn is_principal(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn conjugate(&self) -> Character {
        Character {
            coeffs: self.coeffs.iter().map(|&c| (5 - c % 5) % 5).collect(),
        }
    }

    /// `(c · coords(x)) mod 5`.
    pub fn phase(&self, group: &GroupSpec, index: u64) -> u64 {
        let coords = group.coords_of(index);
        self.coeffs
            .iter()
            .zip(coords.iter())
            .map(|(&c, &x)| c as u64 * x)
            .sum::<u64>()
            % 5
    }

    pub fn eval(&self, group: &GroupSpec, index: u64) -> Complex64 {
        root5(self.phase(group, index))
    }
}

fn check_exponent_five(group: &GroupSpec) -> Result<()> {
    if group.is_elementary(5) {
        Ok(())
    } else {
        Err(Error::NotExponentFive)
    }
}

/// `1̂_A(χ) = 5^{-n} Σ_{a ∈ A} χ(a)`.
pub fn fourier_coefficient(a: &DenseSubset, chi: &Character) -> Result<Complex64> {
    check_exponent_five(a.group())?;
    let group = a.group();
    let scale = 1.0 / group.order() as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for &idx in &a.indices() {
        sum += chi.eval(group, idx);
    }
    Ok(sum * scale)
}

/// `Σ_χ (1̂_A(χ))³` over all `5^n` characters. Vanishes exactly when `A`
/// has no zero-sum triple, since the sum counts triples `a + b + c = 0`
/// scaled by `5^{-2n}`.
pub fn cubic_sum(a: &DenseSubset) -> Result<Complex64> {
    check_exponent_five(a.group())?;
    let group = a.group().clone();
    // phase histogram per character, then cube the resulting coefficient
    let indices = a.indices();
    let mut total = Complex64::new(0.0, 0.0);
    let scale = 1.0 / group.order() as f64;
    for c in 0..group.order() {
        let chi = Character::from_index(&group, c)?;
        let mut hist = [0u64; 5];
        for &idx in &indices {
            hist[chi.phase(&group, idx) as usize] += 1;
        }
        let mut coef = Complex64::new(0.0, 0.0);
        for (k, &count) in hist.iter().enumerate() {
            coef += root5(k as u64) * count as f64;
        }
        coef *= scale;
        total += coef * coef * coef;
    }
    Ok(total)
}

/// `Σ_{χ ≠ 1} |1̂_A(χ)|²`, which Parseval pins to `α(1-α)`.
pub fn parseval_offprincipal(a: &DenseSubset) -> Result<f64> {
    check_exponent_five(a.group())?;
    let group = a.group().clone();
    let indices = a.indices();
    let scale = 1.0 / group.order() as f64;
    let mut sum = 0.0;
    for c in 1..group.order() {
        let chi = Character::from_index(&group, c)?;
        let mut hist = [0u64; 5];
        for &idx in &indices {
            hist[chi.phase(&group, idx) as usize] += 1;
        }
        let mut coef = Complex64::new(0.0, 0.0);
        for (k, &count) in hist.iter().enumerate() {
            coef += root5(k as u64) * count as f64;
        }
        sum += (coef * scale).norm_sqr();
    }
    Ok(sum)
}

/// A non-principal character with a maximally negative (rotated) Fourier
/// coefficient, the cube root used to rotate it, and the coset profile of
/// its kernel.
#[derive(Clone, Debug)]
pub struct SpectralWitness {
    pub character: Character,
    pub coefficient: Complex64,
    pub zeta: CubeRoot,
    pub z: Complex64,
    pub re_z: f64,
    pub profile: CosetProfile,
}

/// Finds the non-principal character maximizing `Re(-1̂_A(χ) ζ(χ))`, where
/// `ζ(χ)` is the cube root of unity bringing the rotated coefficient closest
/// to the positive real axis (ties toward 1, then `ω`).
///
/// Requires `0 ∉ 3A` and `A` nonempty; under that hypothesis the returned
/// witness always satisfies `Re(z) >= α²/(1-α)`. The character is conjugated
/// if needed so the reported `ζ` is `1` or `ω`, never `ω²`.
pub fn find_witness(engine: &SetEngine, a: &DenseSubset) -> Result<SpectralWitness> {
    check_exponent_five(a.group())?;
    if a.is_empty() {
        return Err(Error::Precondition("witness extraction needs a nonempty set"));
    }
    let three_a = engine.k_fold(a, 3)?;
    if three_a.contains(0) {
        return Err(Error::Precondition("requires 0 outside 3A"));
    }
    let group = a.group().clone();
    let indices = a.indices();
    let scale = 1.0 / group.order() as f64;
    let omega = Complex64::new(OMEGA.0, OMEGA.1);

    let mut best: Option<(f64, u64, u8, Complex64)> = None; // (re_z, chi index, turn, coef)
    for c in 1..group.order() {
        let chi = Character::from_index(&group, c)?;
        let mut hist = [0u64; 5];
        for &idx in &indices {
            hist[chi.phase(&group, idx) as usize] += 1;
        }
        let mut coef = Complex64::new(0.0, 0.0);
        for (k, &count) in hist.iter().enumerate() {
            coef += root5(k as u64) * count as f64;
        }
        coef *= scale;
        let minus = -coef;
        let candidates = [minus, minus * omega, minus * omega * omega];
        let mut turn = 0u8;
        for t in 1..3u8 {
            if candidates[t as usize].re > candidates[turn as usize].re {
                turn = t;
            }
        }
        let re_z = candidates[turn as usize].re;
        let better = match &best {
            None => true,
            Some((b, _, _, _)) => re_z > *b,
        };
        if better {
            best = Some((re_z, c, turn, coef));
        }
    }
    let (re_z, c, mut turn, mut coef) = best.expect("non-principal characters exist");
    let mut chi = Character::from_index(&group, c)?;
    if turn == 2 {
        // conjugating the character conjugates the coefficient and swaps
        // ω² for ω without changing Re(z)
        chi = chi.conjugate();
        coef = coef.conj();
        turn = 1;
    }
    let zeta = CubeRoot::from_turn(turn);
    let z = -coef * zeta.value();

    let functional: Vec<u64> = chi.coeffs().iter().map(|&x| x as u64).collect();
    let subgroup = engine.kernel_subgroup(&functional)?;
    let e_idx = (0..group.order())
        .find(|&x| chi.phase(&group, x) == 1)
        .expect("a nonzero functional attains 1");
    let direction = GroupElement::from_index(&group, e_idx);
    let profile = engine.coset_profile(a, &subgroup, &direction)?;
    Ok(SpectralWitness {
        character: chi,
        coefficient: coef,
        zeta,
        z,
        re_z,
        profile,
    })
}

/// `α²/(1-α)`: the guaranteed floor for `Re(z)` of a witness.
pub fn witness_floor(alpha: f64) -> f64 {
    alpha * alpha / (1.0 - alpha)
}
