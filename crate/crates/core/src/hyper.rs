//! Pochhammer symbols, terminating hypergeometric series, the real Gamma
//! function, and their q-analogues.

use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::laurent::{NumPoly1, RatPoly1};

/// Exact half-integer, stored as twice its value. Parameter shifts of the
/// form (n + a + b + 1)/2 and the parity-split exponents k/2, (k-1)/2 run
/// through this type so that no floating-point division sneaks in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HalfInteger {
    pub twice_value: i64,
}

impl HalfInteger {
    pub fn from_twice(twice_value: i64) -> Self {
        HalfInteger { twice_value }
    }

    pub fn from_int(n: i64) -> Self {
        HalfInteger { twice_value: 2 * n }
    }

    pub fn is_integer(&self) -> bool {
        self.twice_value % 2 == 0
    }

    /// Floor to an integer (exact when is_integer).
    pub fn floor(&self) -> i64 {
        self.twice_value.div_euclid(2)
    }

    pub fn to_exact(&self) -> ExactScalar {
        ExactScalar::ratio(self.twice_value, 2)
    }

    pub fn to_f64(&self) -> f64 {
        self.twice_value as f64 / 2.0
    }
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1), exact.
pub fn pochhammer(a: &ExactScalar, n: u32) -> ExactScalar {
    let mut acc = ExactScalar::one();
    for i in 0..n {
        acc = acc * (a + &ExactScalar::from_integer(i as i64));
    }
    acc
}

/// Rising factorial in doubles, for norm formulas with real parameters.
pub fn pochhammer_f64(a: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..n {
        acc *= a + i as f64;
    }
    acc
}

/// Terminating Gauss series 2F1(-n, b; c; z) as an exact polynomial in z.
///
/// Fails with `PochhammerPole` if the lower Pochhammer (c)_j vanishes before
/// the series terminates, i.e. if c + j = 0 for some 0 <= j < n.
pub fn gauss_2f1_terminating(n: u32, b: &ExactScalar, c: &ExactScalar) -> Result<RatPoly1> {
    for j in 0..n {
        if (c + &ExactScalar::from_integer(j as i64)).is_zero() {
            return Err(Error::PochhammerPole { base: c.to_string(), offset: j });
        }
    }
    let mut poly = RatPoly1::zero();
    let mut term = ExactScalar::one();
    poly.add_term(0, term.clone());
    for j in 0..n {
        let jj = ExactScalar::from_integer(j as i64);
        let num = (ExactScalar::from_integer(-(n as i64)) + &jj) * (b + &jj);
        let den = (c + &jj) * (&jj + &ExactScalar::one());
        term = term * num / den;
        poly.add_term((j + 1) as i64, term.clone());
    }
    Ok(poly)
}

/// Lanczos coefficients (g = 607/128, 15 terms). This set keeps the relative
/// error of the rational part below double rounding, so accuracy on (0, 50]
/// is limited only by the final exp/pow evaluations.
const LANCZOS_G: f64 = 607.0 / 128.0;
// Published table digits kept verbatim; the excess rounds away on parse.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    3.399_464_998_481_188_869_9e-5,
    4.652_362_892_704_857_566_5e-5,
    -9.837_447_530_487_956_467_7e-5,
    1.580_887_032_249_124_888_4e-4,
    -2.102_644_417_241_048_831_9e-4,
    2.174_396_181_152_126_432e-4,
    -1.643_181_065_367_638_902_2e-4,
    8.441_822_398_385_274_329_3e-5,
    -2.619_083_840_158_140_867e-5,
    3.689_918_265_953_162_270_4e-6,
];

/// Real Gamma function via the Lanczos approximation with reflection for
/// arguments below 1/2. Poles at 0, -1, -2, ... are reported as errors.
pub fn gamma_real(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.floor() {
        return Err(Error::GammaPole { argument: x });
    }
    if x < 0.5 {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI / (s * gamma_real(1.0 - x)?));
    }
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x - 1.0 + i as f64);
    }
    let t = x + LANCZOS_G - 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(x - 0.5) * (-t).exp() * acc)
}

/// q-shifted factorial (a; q)_n = prod_{i=0}^{n-1} (1 - a q^i).
pub fn qpochhammer(a: f64, q: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut aq = a;
    for _ in 0..n {
        acc *= 1.0 - aq;
        aq *= q;
    }
    acc
}

/// Terminating basic series 3phi2(q^-n, a2, a3; b1, b2; q, z) as a polynomial
/// in z. The first upper parameter q^-n forces termination after n + 1 terms.
///
/// Fails with `QPochhammerPole` if a denominator factor (1 - b1 q^j),
/// (1 - b2 q^j) or (1 - q^(j+1)) vanishes before termination.
pub fn phi32_terminating(n: u32, a2: f64, a3: f64, b1: f64, b2: f64, q: f64) -> Result<NumPoly1> {
    const EPS: f64 = 1e-14;
    let qn = q.powi(-(n as i32));
    let mut poly = NumPoly1::zero();
    let mut term = 1.0;
    poly.add_term(0, term);
    let mut qj = 1.0;
    for j in 0..n {
        let d1 = 1.0 - b1 * qj;
        let d2 = 1.0 - b2 * qj;
        let d3 = 1.0 - q * qj;
        for (d, base) in [(d1, b1), (d2, b2), (d3, q)] {
            if d.abs() < EPS {
                return Err(Error::QPochhammerPole { base, index: j });
            }
        }
        term *= (1.0 - qn * qj) * (1.0 - a2 * qj) * (1.0 - a3 * qj) / (d1 * d2 * d3);
        qj *= q;
        poly.add_term((j + 1) as i64, term);
    }
    Ok(poly)
}
