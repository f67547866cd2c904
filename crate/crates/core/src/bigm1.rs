//! Univariate Big -1 Jacobi polynomials J_n(x; a, b, c): exact construction,
//! three-term recurrence, monic normalization, the first-order Dunkl-type
//! operator with reflections, and the orthogonality weights and norms for the
//! two support regimes.
//!
//! Conventions:
//! - J_n(1) = 1 for every n (checked in tests); the leading coefficient is
//!   the reciprocal of [`monic_kappa`].
//! - C_0 = 0 by convention, so the n = 0 recurrence never divides by a + b.
//! - The operator factor written "d/dx R" applies the reflection first and
//!   then differentiates.

use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::hyper::{gamma_real, gauss_2f1_terminating, pochhammer, pochhammer_f64};
use crate::laurent::RatPoly1;
use crate::quad::{IntervalUnion, SegmentCtx};

/// Which of the two orthogonality regimes a weight or support refers to:
/// `Inside` is the |c| < 1 measure on [-1, -|c|] u [|c|, 1], `Outside` the
/// |c| > 1 measure on [-|c|, -1] u [1, |c|].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UniRegime {
    Inside,
    Outside,
}

/// Parameters (a, b, c) with a > -1, b > -1 and |c| != 1.
#[derive(Clone, Debug, PartialEq)]
pub struct UniParams {
    pub a: ExactScalar,
    pub b: ExactScalar,
    pub c: ExactScalar,
}

impl UniParams {
    pub fn new(a: ExactScalar, b: ExactScalar, c: ExactScalar) -> Result<Self> {
        let neg_one = ExactScalar::from_integer(-1);
        if a <= neg_one {
            return Err(Error::InvalidParameter(format!("a = {a} must exceed -1")));
        }
        if b <= neg_one {
            return Err(Error::InvalidParameter(format!("b = {b} must exceed -1")));
        }
        if c.abs() == ExactScalar::one() {
            return Err(Error::InvalidParameter("|c| = 1 is excluded".into()));
        }
        Ok(UniParams { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        UniParams::new(
            ExactScalar::from_integer(a),
            ExactScalar::from_integer(b),
            ExactScalar::from_integer(c),
        )
        .expect("invalid integer parameters")
    }
}

fn half(x: ExactScalar) -> ExactScalar {
    x * ExactScalar::ratio(1, 2)
}

fn int(n: i64) -> ExactScalar {
    ExactScalar::from_integer(n)
}

/// Exact coefficients of J_n(x; a, b, c).
///
/// The polynomial is assembled from one or two terminating Gauss series in
/// the variable z = (1 - x^2)/(1 - c^2).
pub fn bigm1_coeffs(n: u32, p: &UniParams) -> Result<RatPoly1> {
    let one = ExactScalar::one();
    let s = (&one - &(&p.c * &p.c)).recip();
    // z as a polynomial in x: s - s x^2
    let mut z_poly = RatPoly1::zero();
    z_poly.add_term(0, s.clone());
    z_poly.add_term(2, -s);
    // 1 - x
    let mut one_minus_x = RatPoly1::zero();
    one_minus_x.add_term(0, one.clone());
    one_minus_x.add_term(1, -&one);

    let c1 = half(&p.a + &one); // (a+1)/2
    let c2 = half(&p.a + &int(3)); // (a+3)/2
    let inv_pref = ((&one + &p.c) * (&p.a + &one)).recip(); // 1/((1+c)(a+1))

    if n % 2 == 0 {
        let m = n / 2;
        let upper = half(int(n as i64 + 2) + &p.a + &p.b); // (n+a+b+2)/2
        let f1 = gauss_2f1_terminating(m, &upper, &c1)?;
        let mut poly = f1.compose(&z_poly);
        if m >= 1 {
            let f2 = gauss_2f1_terminating(m - 1, &upper, &c2)?;
            let factor = int(n as i64) * &inv_pref;
            poly = poly.add(&one_minus_x.mul(&f2.compose(&z_poly)).scale(&factor));
        }
        Ok(poly)
    } else {
        let m = (n - 1) / 2;
        let upper1 = half(int(n as i64 + 1) + &p.a + &p.b); // (n+a+b+1)/2
        let upper2 = half(int(n as i64 + 3) + &p.a + &p.b); // (n+a+b+3)/2
        let f1 = gauss_2f1_terminating(m, &upper1, &c1)?;
        let f2 = gauss_2f1_terminating(m, &upper2, &c2)?;
        let factor = (int(n as i64) + &p.a + &p.b + &one) * &inv_pref;
        let poly = f1.compose(&z_poly).sub(&one_minus_x.mul(&f2.compose(&z_poly)).scale(&factor));
        Ok(poly)
    }
}

/// Little -1 Jacobi: the c = 0 member of the family.
pub fn little_m1_coeffs(n: u32, a: &ExactScalar, b: &ExactScalar) -> Result<RatPoly1> {
    let p = UniParams::new(a.clone(), b.clone(), ExactScalar::zero())?;
    bigm1_coeffs(n, &p)
}

/// Recurrence coefficients (A_n, C_n) in
/// x J_n = A_n J_{n+1} + (1 - A_n - C_n) J_n + C_n J_{n-1}, with C_0 = 0.
pub fn recurrence_coeffs(n: u32, p: &UniParams) -> Result<(ExactScalar, ExactScalar)> {
    let one = ExactScalar::one();
    let nn = int(n as i64);
    let den_a = int(2 * n as i64 + 2) + &p.a + &p.b; // 2n + a + b + 2
    if den_a.is_zero() {
        return Err(Error::DegenerateDenominator { context: format!("A_{n}") });
    }
    let a_n = if n % 2 == 0 {
        (&nn + &p.a + &one) * (&one + &p.c) / &den_a
    } else {
        (&one - &p.c) * (&nn + &p.a + &p.b + &one) / &den_a
    };
    let c_n = if n == 0 {
        ExactScalar::zero()
    } else {
        let den_c = int(2 * n as i64) + &p.a + &p.b; // 2n + a + b
        if den_c.is_zero() {
            return Err(Error::DegenerateDenominator { context: format!("C_{n}") });
        }
        if n % 2 == 0 {
            nn * (&one - &p.c) / &den_c
        } else {
            (&nn + &p.b) * (&one + &p.c) / &den_c
        }
    };
    Ok((a_n, c_n))
}

/// Leading-coefficient normalizer: the monic variant is kappa_n J_n.
// (n + 1) / 2 is written as in the odd-branch formula, not as a ceiling.
#[allow(clippy::manual_div_ceil)]
pub fn monic_kappa(n: u32, p: &UniParams) -> ExactScalar {
    let one = ExactScalar::one();
    let omc2 = &one - &(&p.c * &p.c); // 1 - c^2
    if n % 2 == 0 {
        let m = n / 2;
        let num = pochhammer(&half(&p.a + &one), m);
        let den = pochhammer(&half(int(n as i64 + 2) + &p.a + &p.b), m);
        omc2.powi(m as i32) * num / den
    } else {
        let m = (n + 1) / 2;
        let num = pochhammer(&half(&p.a + &one), m);
        let den = pochhammer(&half(int(n as i64 + 1) + &p.a + &p.b), m);
        (&one + &p.c) * omc2.powi(m as i32 - 1) * num / den
    }
}

/// Monic polynomial kappa_n J_n.
pub fn monic_coeffs(n: u32, p: &UniParams) -> Result<RatPoly1> {
    Ok(bigm1_coeffs(n, p)?.scale(&monic_kappa(n, p)))
}

/// Applies the Dunkl-type operator
/// L = (x+c)(x-1)/x d/dx R + [c/(2x^2) + (ca-b)/(2x)] (R - I) + (a+b+1)/2 R,
/// where R f(x) = f(-x). Polynomial inputs must map to polynomials; the
/// transient pole terms have to cancel exactly.
pub fn operator_l_apply(p: &UniParams, f: &RatPoly1) -> Result<RatPoly1> {
    let one = ExactScalar::one();
    let rf = f.reflect();
    let drf = rf.differentiate();

    // (x + c)(x - 1)/x = x + (c - 1) - c x^{-1}
    let mut coeff1 = RatPoly1::zero();
    coeff1.add_term(1, one.clone());
    coeff1.add_term(0, &p.c - &one);
    coeff1.add_term(-1, -&p.c);

    // c/(2x^2) + (c a - b)/(2x)
    let mut coeff2 = RatPoly1::zero();
    coeff2.add_term(-2, half(p.c.clone()));
    coeff2.add_term(-1, half(&p.c * &p.a - &p.b));

    let term1 = coeff1.mul(&drf);
    let term2 = coeff2.mul(&rf.sub(f));
    let term3 = rf.scale(&half(&p.a + &p.b + &one));
    let out = term1.add(&term2).add(&term3);
    if f.valuation().unwrap_or(0) >= 0 {
        out.assert_polynomial("operator L applied to a polynomial")
    } else {
        Ok(out)
    }
}

/// Eigenvalue of L on J_n: (-1)^n (n + (a+b+1)/2).
pub fn eigenvalue_lambda(n: u32, p: &UniParams) -> ExactScalar {
    let v = int(n as i64) + half(&p.a + &p.b + &ExactScalar::one());
    if n % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Support of the orthogonality measure for the given regime.
pub fn support(p: &UniParams, regime: UniRegime) -> Result<IntervalUnion> {
    let cabs = p.c.abs().to_f64();
    match regime {
        UniRegime::Inside => {
            if cabs >= 1.0 {
                return Err(Error::RegimeMismatch {
                    reason: format!("inside regime needs |c| < 1, got |c| = {cabs}"),
                });
            }
            Ok(IntervalUnion::new(vec![(-1.0, -cabs), (cabs, 1.0)]))
        }
        UniRegime::Outside => {
            if cabs <= 1.0 {
                return Err(Error::RegimeMismatch {
                    reason: format!("outside regime needs |c| > 1, got |c| = {cabs}"),
                });
            }
            Ok(IntervalUnion::new(vec![(-cabs, -1.0), (1.0, cabs)]))
        }
    }
}

/// Weight value at an interior point of the support.
pub fn weight_uni(x: f64, p: &UniParams, regime: UniRegime) -> Result<f64> {
    let sup = support(p, regime)?;
    if !sup.contains_interior(x) {
        return Err(Error::OutsideSupport { point: (x, 0.0) });
    }
    let a = p.a.to_f64();
    let b = p.b.to_f64();
    let c = p.c.to_f64();
    let theta = |t: f64| if t >= 0.0 { 1.0 } else { -1.0 };
    match regime {
        UniRegime::Inside => Ok(theta(x)
            * (1.0 + x)
            * (x - c)
            * (x * x - c * c).powf((b - 1.0) / 2.0)
            * (1.0 - x * x).powf((a - 1.0) / 2.0)),
        UniRegime::Outside => Ok(theta(c * x)
            * (1.0 + x)
            * (c - x)
            * (c * c - x * x).powf((b - 1.0) / 2.0)
            * (x * x - 1.0).powf((a - 1.0) / 2.0)),
    }
}

/// Weight evaluator for quadrature: boundary-vanishing factors are computed
/// from the segment-context distances, so endpoint singularities integrate at
/// full precision.
pub fn weight_ctx(p: &UniParams, regime: UniRegime) -> impl Fn(&SegmentCtx) -> f64 {
    let a = p.a.to_f64();
    let b = p.b.to_f64();
    let c = p.c.to_f64();
    let cabs = c.abs();
    move |ctx: &SegmentCtx| {
        let xm1 = ctx.affine(1.0);
        let xp1 = ctx.affine(-1.0);
        let xmc = ctx.affine(cabs);
        let xpc = ctx.affine(-cabs);
        match regime {
            UniRegime::Inside => {
                let theta = if ctx.x >= 0.0 { 1.0 } else { -1.0 };
                let x_minus_c = if c >= 0.0 { xmc } else { xpc };
                let one_minus_x2 = -xm1 * xp1;
                let x2_minus_c2 = xmc * xpc;
                theta
                    * xp1
                    * x_minus_c
                    * x2_minus_c2.powf((b - 1.0) / 2.0)
                    * one_minus_x2.powf((a - 1.0) / 2.0)
            }
            UniRegime::Outside => {
                let theta = if c * ctx.x >= 0.0 { 1.0 } else { -1.0 };
                let c_minus_x = if c >= 0.0 { -xmc } else { -xpc };
                let c2_minus_x2 = -xmc * xpc;
                let x2_minus_1 = xm1 * xp1;
                theta
                    * xp1
                    * c_minus_x
                    * c2_minus_x2.powf((b - 1.0) / 2.0)
                    * x2_minus_1.powf((a - 1.0) / 2.0)
            }
        }
    }
}

fn factorial_f64(m: u32) -> f64 {
    let mut acc = 1.0;
    for i in 2..=m {
        acc *= i as f64;
    }
    acc
}

/// Norm h_n(a, b) with the regime-independent closed form (the outside-regime
/// norm uses the identical expression; the constant prefactor differs).
// (n + 1) / 2 is written as in the odd-branch formula, not as a ceiling.
#[allow(clippy::manual_div_ceil)]
pub fn norm_h_bare(n: u32, a: f64, b: f64) -> Result<f64> {
    let nf = n as f64;
    if n % 2 == 0 {
        let m = n / 2;
        let num = 2.0
            * gamma_real((nf + b + 1.0) / 2.0)?
            * gamma_real((nf + a + 3.0) / 2.0)?
            * factorial_f64(m);
        let den = (nf + a + 1.0)
            * gamma_real((nf + a + b + 2.0) / 2.0)?
            * pochhammer_f64((a + 1.0) / 2.0, m).powi(2);
        Ok(num / den)
    } else {
        let m = (n - 1) / 2;
        let num = (nf + a + b + 1.0)
            * gamma_real((nf + b + 2.0) / 2.0)?
            * gamma_real((nf + a + 2.0) / 2.0)?
            * factorial_f64(m);
        let den = 2.0
            * gamma_real((nf + a + b + 3.0) / 2.0)?
            * pochhammer_f64((a + 1.0) / 2.0, (n + 1) / 2).powi(2);
        Ok(num / den)
    }
}

/// Full orthogonality constant: the squared norm of J_n against the weight of
/// the given regime, prefactor included.
pub fn norm_h(n: u32, p: &UniParams, regime: UniRegime) -> Result<f64> {
    support(p, regime)?; // regime compatibility check
    let a = p.a.to_f64();
    let b = p.b.to_f64();
    let c = p.c.to_f64();
    let bare = norm_h_bare(n, a, b)?;
    match regime {
        UniRegime::Inside => Ok((1.0 - c * c).powf((a + b + 2.0) / 2.0) / (1.0 + c) * bare),
        UniRegime::Outside => {
            let theta = if c >= 0.0 { 1.0 } else { -1.0 };
            Ok(theta * (c * c - 1.0).powf((a + b + 2.0) / 2.0) / (1.0 + c) * bare)
        }
    }
}
