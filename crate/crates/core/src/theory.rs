//! Closed-form predictions: the quadratic Gauss sum, the character sums
//! over squares and non-squares, the two- and three-weight spectra, and the
//! Griesmer and sphere-packing checks.
//!
//! Everything that can exceed 64 bits is computed with `BigUint`/`BigInt`.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{roots_of_unity, Field, FieldElement};

fn big(p: u32) -> BigUint {
    BigUint::from(p)
}

fn pow(p: u32, e: usize) -> BigUint {
    num_traits::pow(big(p), e)
}

/// `epsilon(p) = (-1)^{(p+1)/2}`.
pub fn epsilon(p: u32) -> i8 {
    if p.div_ceil(2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Gray length `N = 2 (p^{4m} - p^{3m})`.
pub fn gray_length(p: u32, m: usize) -> BigUint {
    (pow(p, 4 * m) - pow(p, 3 * m)) * 2u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `m = 2 (mod 4)`.
    ThreeWeight,
    /// `m` odd and `p = 3 (mod 4)`.
    TwoWeight,
    Unsupported,
}

impl Regime {
    pub fn of(p: u32, m: usize) -> Regime {
        if m % 4 == 2 {
            Regime::ThreeWeight
        } else if m % 2 == 1 && p % 4 == 3 {
            Regime::TwoWeight
        } else {
            Regime::Unsupported
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::ThreeWeight => "three_weight",
            Regime::TwoWeight => "two_weight",
            Regime::Unsupported => "unsupported",
        }
    }
}

/// Predicted nonzero weights with their frequencies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumPrediction {
    pub p: u32,
    pub m: usize,
    pub regime: Regime,
    pub gray_length: BigUint,
    pub dimension: usize,
    pub epsilon: i8,
    /// `(weight, frequency)`, ascending by weight; empty when unsupported.
    pub weights: Vec<(BigUint, BigUint)>,
}

impl SpectrumPrediction {
    pub fn frequency_total(&self) -> BigUint {
        self.weights.iter().map(|(_, f)| f).sum()
    }

    pub fn min_weight(&self) -> Option<&BigUint> {
        self.weights.first().map(|(w, _)| w)
    }

    /// `(weight, frequency)` pairs including the zero codeword, as `u64`
    /// when they fit.
    pub fn to_u64_pairs(&self) -> Option<Vec<(u64, u64)>> {
        if self.regime == Regime::Unsupported {
            return None;
        }
        let mut out = vec![(0u64, 1u64)];
        for (w, f) in &self.weights {
            out.push((u64::try_from(w).ok()?, u64::try_from(f).ok()?));
        }
        Some(out)
    }
}

/// Minimum weight `2 (p-1) (p^{4m-1} - p^{3m-1})`, shared by both regimes.
pub fn generic_weight(p: u32, m: usize) -> BigUint {
    (pow(p, 4 * m - 1) - pow(p, 3 * m - 1)) * (2 * (p - 1))
}

pub fn predict_spectrum(p: u32, m: usize) -> SpectrumPrediction {
    let regime = Regime::of(p, m);
    let q = pow(p, m);
    let size = pow(p, 4 * m);
    let weights = match regime {
        Regime::ThreeWeight => {
            let base = pow(p, 4 * m - 1);
            let shift = pow(p, (7 * m - 2) / 2);
            let scale = 2 * (p - 1);
            let half = (&q - 1u32) / 2u32;
            vec![
                ((&base - &shift) * scale, half.clone()),
                (generic_weight(p, m), &size - &q),
                ((&base + &shift) * scale, half),
            ]
        }
        Regime::TwoWeight => vec![
            (generic_weight(p, m), &size - &q),
            ((&size - pow(p, 4 * m - 1)) * 2u32, &q - 1u32),
        ],
        Regime::Unsupported => Vec::new(),
    };
    SpectrumPrediction {
        p,
        m,
        regime,
        gray_length: gray_length(p, m),
        dimension: 4 * m,
        epsilon: epsilon(p),
        weights,
    }
}

/// `G(eta)` from the closed form: `(-1)^{m-1} p^{m/2}` for `p = 1 (mod 4)`,
/// `(-1)^{m-1} i^m p^{m/2}` for `p = 3 (mod 4)`.
pub fn gauss_sum_closed_form(p: u32, m: usize) -> Complex64 {
    let sign = if (m - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let magnitude = (p as f64).powf(m as f64 / 2.0);
    let unit = if p % 4 == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::i().powu(m as u32)
    };
    unit * (sign * magnitude)
}

/// `sum_{x != 0} omega^{tr(x)} eta(x)` by direct summation.
pub fn gauss_sum_numeric(field: &Field) -> Complex64 {
    let roots = roots_of_unity(field.p());
    field
        .elements()
        .skip(1)
        .map(|x| roots[field.tr(x) as usize] * field.eta(x).expect("nonzero") as f64)
        .sum()
}

/// `(Qbar, Nbar)` by direct summation over squares and non-squares.
pub fn qbar_nbar_numeric(field: &Field) -> (Complex64, Complex64) {
    let roots = roots_of_unity(field.p());
    let (squares, nonsquares) = field.squares_and_nonsquares();
    let sum = |xs: &[FieldElement]| xs.iter().map(|&x| roots[field.tr(x) as usize]).sum();
    (sum(&squares), sum(&nonsquares))
}

/// `Qbar = (G - 1)/2`, `Nbar = -(G + 1)/2`, valid for every `m`; for
/// `m = 2 (mod 4)` this is `(eps p^{m/2} - 1)/2` and `-(eps p^{m/2} + 1)/2`.
pub fn qbar_nbar_closed_form(p: u32, m: usize) -> (Complex64, Complex64) {
    let g = gauss_sum_closed_form(p, m);
    ((g - 1.0) / 2.0, -(g + 1.0) / 2.0)
}

/// Closed form for even `m`, direct summation otherwise.
pub fn qbar_nbar(field: &Field) -> (Complex64, Complex64) {
    if field.m().is_multiple_of(2) {
        qbar_nbar_closed_form(field.p(), field.m())
    } else {
        qbar_nbar_numeric(field)
    }
}

/// Weight of `alpha uv` for a square `alpha`, rebuilt from
/// `(p-1)/p (N - 4 p^{3m} Qbar)` with the exact integer `Qbar` of the
/// three-weight regime. `None` outside that regime.
pub fn square_uv_weight_from_qbar(p: u32, m: usize) -> Option<BigInt> {
    if Regime::of(p, m) != Regime::ThreeWeight {
        return None;
    }
    let eps_root = BigInt::from(epsilon(p)) * BigInt::from(pow(p, m / 2));
    let qbar: BigInt = (eps_root - 1) / 2;
    let n = BigInt::from(gray_length(p, m));
    let inner: BigInt = n - BigInt::from(pow(p, 3 * m)) * 4 * qbar;
    let scaled: BigInt = inner * BigInt::from(p - 1);
    let (quot, rem) = scaled.div_rem(&BigInt::from(p));
    debug_assert!(rem.is_zero());
    Some(quot)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GriesmerCheck {
    #[serde(serialize_with = "crate::report::ser_big")]
    pub sum: BigUint,
    pub satisfied: bool,
}

/// `sum_{j<K} ceil(d / p^j)` and whether it is at most `N`.
pub fn griesmer_sum(n: &BigUint, k: usize, d: &BigUint, p: u32) -> GriesmerCheck {
    let mut sum = BigUint::zero();
    let mut denom = BigUint::one();
    for _ in 0..k {
        sum += Integer::div_ceil(d, &denom);
        denom *= p;
    }
    let satisfied = &sum <= n;
    GriesmerCheck { sum, satisfied }
}

/// `2 p^{4m} - 2 p^{3m} + 3m - 1`, the Griesmer sum at `d + 1`.
pub fn griesmer_margin_closed_form(p: u32, m: usize) -> BigUint {
    gray_length(p, m) + BigUint::from(3 * m - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalityCertificate {
    pub p: u32,
    pub m: usize,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub n: BigUint,
    pub k: usize,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub d: BigUint,
    pub at_d: GriesmerCheck,
    pub at_d_plus_1: GriesmerCheck,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub closed_form_sum_d_plus_1: BigUint,
    pub optimal: bool,
}

/// Griesmer optimality of the two-weight Gray image: `d + 1` must violate
/// the bound.
pub fn is_optimal(p: u32, m: usize) -> Result<OptimalityCertificate> {
    if Regime::of(p, m) != Regime::TwoWeight {
        return Err(Error::WrongRegime { p, m });
    }
    let n = gray_length(p, m);
    let k = 4 * m;
    let d = generic_weight(p, m);
    let at_d = griesmer_sum(&n, k, &d, p);
    let at_d_plus_1 = griesmer_sum(&n, k, &(&d + 1u32), p);
    let optimal = at_d.satisfied && !at_d_plus_1.satisfied;
    Ok(OptimalityCertificate {
        p,
        m,
        n,
        k,
        d,
        at_d,
        at_d_plus_1,
        closed_form_sum_d_plus_1: griesmer_margin_closed_form(p, m),
        optimal,
    })
}

/// True when `p^{4m} < 1 + N (p - 1)`, so the Gray image of the dual cannot
/// have minimum distance 3 or more.
pub fn sphere_packing_excludes(p: u32, m: usize) -> bool {
    pow(p, 4 * m) < gray_length(p, m) * (p - 1) + 1u32
}
