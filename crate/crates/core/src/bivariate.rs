//! Two-variable big -1 Jacobi polynomials.
//!
//! The family J_{n,k}(x, y) couples a univariate big -1 Jacobi polynomial in
//! y with a y-dependent one in x/y, glued by a radical factor that clears
//! every denominator. This module builds the family exactly, carries its
//! weight function and butterfly-shaped support, evaluates norms, applies the
//! two commuting first-order reflection operators it diagonalizes, expands
//! x J_{n,k} and y J_{n,k} back over the family (both from closed-form
//! coefficient tables and from exact linear algebra), and checks the
//! Pearson-type system that pins the weight as the symmetry factor of the
//! principal operator.

use std::collections::BTreeSet;

use crate::bigm1::{bigm1_coeffs, little_m1_coeffs, norm_h_bare, UniParams};
use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::hyper::gauss_2f1_terminating;
use crate::laurent::{RatPoly1, RatPoly2};
use crate::quad::{BivDomain, IntervalUnion, SegmentCtx};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int(n: i64) -> ExactScalar {
    ExactScalar::from_integer(n)
}

fn half(x: ExactScalar) -> ExactScalar {
    x * ExactScalar::ratio(1, 2)
}

fn theta(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Which branch of the parameter space the measure lives on: bands inside
/// [-1, 1] for |delta| < 1, or beyond the unit interval for |delta| > 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BivRegime {
    Inside,
    Outside,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BivParams {
    pub alpha: ExactScalar,
    pub beta: ExactScalar,
    pub gamma: ExactScalar,
    pub delta: ExactScalar,
}

impl BivParams {
    pub fn new(
        alpha: ExactScalar,
        beta: ExactScalar,
        gamma: ExactScalar,
        delta: ExactScalar,
    ) -> Result<Self> {
        let neg_one = int(-1);
        for (name, v) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
            if *v <= neg_one {
                return Err(Error::InvalidParameter(format!("{name} = {v} must exceed -1")));
            }
        }
        if delta.abs() == ExactScalar::one() {
            return Err(Error::InvalidParameter("|delta| = 1 is excluded".into()));
        }
        Ok(BivParams { alpha, beta, gamma, delta })
    }

    pub fn from_ratios(
        alpha: (i64, i64),
        beta: (i64, i64),
        gamma: (i64, i64),
        delta: (i64, i64),
    ) -> Result<Self> {
        BivParams::new(
            ExactScalar::ratio(alpha.0, alpha.1),
            ExactScalar::ratio(beta.0, beta.1),
            ExactScalar::ratio(gamma.0, gamma.1),
            ExactScalar::ratio(delta.0, delta.1),
        )
    }

    /// Parameters of the univariate factor in y at fixed section index k.
    pub fn y_factor_params(&self, k: u32) -> Result<UniParams> {
        let b = int(2 * k as i64) + &self.beta + &self.gamma + int(1);
        let c = if k % 2 == 0 { self.delta.clone() } else { ExactScalar::zero() - &self.delta };
        UniParams::new(self.alpha.clone(), b, c)
    }
}

/// Index pair (n, k) with 0 <= k <= n; n is the total degree and k the
/// degree in x.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BivIndex {
    pub n: u32,
    pub k: u32,
}

impl BivIndex {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidParameter(format!("index k = {k} exceeds n = {n}")));
        }
        Ok(BivIndex { n, k })
    }
}

fn xy_poly(terms: &[(i64, i64, ExactScalar)]) -> RatPoly2 {
    let mut p = RatPoly2::zero();
    for (ex, ey, c) in terms {
        p.add_term((*ex, *ey), c.clone());
    }
    p
}

/// Radical glue factor in y: (y^2 - delta^2)^{k/2} for even k, with an extra
/// (y + delta) for odd k.
pub fn rho_coeffs(k: u32, delta: &ExactScalar) -> RatPoly1 {
    let quad = RatPoly1::from_coeffs(&[
        ExactScalar::zero() - delta * delta,
        ExactScalar::zero(),
        ExactScalar::one(),
    ]);
    let body = quad.pow(k / 2);
    if k % 2 == 0 {
        body
    } else {
        body.mul(&RatPoly1::from_coeffs(&[delta.clone(), ExactScalar::one()]))
    }
}

/// Sum_j s_j A^j B^{top-j} with s_j the series coefficients.
fn binomial_combo(series: &RatPoly1, top: u32, a: &RatPoly2, b: &RatPoly2) -> RatPoly2 {
    let mut acc = RatPoly2::zero();
    for j in 0..=top {
        let c = series.coefficient(j as i64);
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&a.pow(j).mul(&b.pow(top - j)).scale(&c));
    }
    acc
}

/// The x-carrying section rho_k(y) J_k(x/y; gamma, beta, delta/y), assembled
/// so every 1/y and 1/(y + delta) cancels term by term. The result is a
/// genuine polynomial of total degree k.
fn x_section(k: u32, p: &BivParams) -> Result<RatPoly2> {
    let g = &p.gamma;
    let b = &p.beta;
    let d = &p.delta;
    let y2_minus_x2 = xy_poly(&[(0, 2, int(1)), (2, 0, int(-1))]);
    let y2_minus_d2 = xy_poly(&[(0, 2, int(1)), (0, 0, ExactScalar::zero() - d * d)]);
    let m = k / 2;
    if k % 2 == 0 {
        let f1 =
            gauss_2f1_terminating(m, &half(int(k as i64) + g + b + int(2)), &half(g + int(1)))?;
        let mut acc = binomial_combo(&f1, m, &y2_minus_x2, &y2_minus_d2);
        if m >= 1 {
            let f2 = gauss_2f1_terminating(
                m - 1,
                &half(int(k as i64) + g + b + int(2)),
                &half(g + int(3)),
            )?;
            let tail = binomial_combo(&f2, m - 1, &y2_minus_x2, &y2_minus_d2);
            let y_minus_x = xy_poly(&[(0, 1, int(1)), (1, 0, int(-1))]);
            let y_minus_d = xy_poly(&[(0, 1, int(1)), (0, 0, ExactScalar::zero() - d)]);
            let front = int(k as i64) / (g + int(1));
            acc = acc.add(&y_minus_x.mul(&y_minus_d).mul(&tail).scale(&front));
        }
        Ok(acc)
    } else {
        let f1 =
            gauss_2f1_terminating(m, &half(int(k as i64) + g + b + int(1)), &half(g + int(1)))?;
        let f2 =
            gauss_2f1_terminating(m, &half(int(k as i64) + g + b + int(3)), &half(g + int(3)))?;
        let y_plus_d = xy_poly(&[(0, 1, int(1)), (0, 0, d.clone())]);
        let y_minus_x = xy_poly(&[(0, 1, int(1)), (1, 0, int(-1))]);
        let head = y_plus_d.mul(&binomial_combo(&f1, m, &y2_minus_x2, &y2_minus_d2));
        let front = (int(k as i64) + g + b + int(1)) / (g + int(1));
        let tail = y_minus_x.mul(&binomial_combo(&f2, m, &y2_minus_x2, &y2_minus_d2)).scale(&front);
        Ok(head.sub(&tail))
    }
}

/// Exact coefficients of J_{n,k}(x, y).
pub fn biv_coeffs(idx: BivIndex, p: &BivParams) -> Result<RatPoly2> {
    let section = x_section(idx.k, p)?;
    let y_part = bigm1_coeffs(idx.n - idx.k, &p.y_factor_params(idx.k)?)?.subst_monomial2(0, 1);
    y_part.mul(&section).assert_polynomial("bivariate construction")
}

/// Bivariate little -1 Jacobi polynomials: the delta = 0 family built along
/// an independent route, with the x-section homogenized directly.
pub fn little_biv_coeffs(
    idx: BivIndex,
    alpha: &ExactScalar,
    beta: &ExactScalar,
    gamma: &ExactScalar,
) -> Result<RatPoly2> {
    let k = idx.k;
    let little_x = little_m1_coeffs(k, gamma, beta)?;
    let mut section = RatPoly2::zero();
    for (e, c) in little_x.terms() {
        section.add_term((e, k as i64 - e), c.clone());
    }
    let b_outer = int(2 * k as i64) + beta + gamma + int(1);
    let y_part = little_m1_coeffs(idx.n - k, alpha, &b_outer)?.subst_monomial2(0, 1);
    y_part.mul(&section).assert_polynomial("little bivariate construction")
}

fn delta_abs_f64(p: &BivParams) -> f64 {
    p.delta.to_f64().abs()
}

/// Support in y for the given regime.
pub fn support_y(p: &BivParams, regime: BivRegime) -> Result<IntervalUnion> {
    let dabs = delta_abs_f64(p);
    match regime {
        BivRegime::Inside => {
            if dabs >= 1.0 {
                return Err(Error::RegimeMismatch {
                    reason: format!("inside measure needs |delta| < 1, got {dabs}"),
                });
            }
            Ok(IntervalUnion::new(vec![(-1.0, -dabs), (dabs, 1.0)]))
        }
        BivRegime::Outside => {
            if dabs <= 1.0 {
                return Err(Error::RegimeMismatch {
                    reason: format!("outside measure needs |delta| > 1, got {dabs}"),
                });
            }
            Ok(IntervalUnion::new(vec![(-dabs, -1.0), (1.0, dabs)]))
        }
    }
}

/// Sliced integration domain: for each admissible y, x runs over the bands
/// between |delta| and |y| (inside) or |y| and |delta| (outside).
pub fn domain_biv(p: &BivParams, regime: BivRegime) -> Result<BivDomain> {
    let y_support = support_y(p, regime)?;
    let dabs = delta_abs_f64(p);
    let x_of = move |y: f64| {
        let ya = y.abs();
        match regime {
            BivRegime::Inside => IntervalUnion::new(vec![(-ya, -dabs), (dabs, ya)]),
            BivRegime::Outside => IntervalUnion::new(vec![(-dabs, -ya), (ya, dabs)]),
        }
    };
    Ok(BivDomain::new(y_support, x_of))
}

/// Closed-form area of the support: four congruent triangles.
pub fn domain_area(p: &BivParams, regime: BivRegime) -> Result<f64> {
    support_y(p, regime)?;
    let dabs = delta_abs_f64(p);
    Ok(2.0 * (1.0 - dabs) * (1.0 - dabs))
}

/// Vertices of the four triangles making up the support.
pub fn triangle_vertices(p: &BivParams, regime: BivRegime) -> Result<[[(f64, f64); 3]; 4]> {
    support_y(p, regime)?;
    let d = delta_abs_f64(p);
    let quadrant = |sx: f64, sy: f64| [(sx * d, sy * d), (sx * 1.0, sy * 1.0), (sx * d, sy * 1.0)];
    Ok([quadrant(1.0, 1.0), quadrant(-1.0, 1.0), quadrant(-1.0, -1.0), quadrant(1.0, -1.0)])
}

/// Weight function at an interior point of the support.
///
/// Both regimes reduce to a pure product of affine factors: the |y| powers of
/// the raw two-factor form cancel identically (checked in the tests).
pub fn weight_biv(x: f64, y: f64, p: &BivParams, regime: BivRegime) -> Result<f64> {
    let dom = domain_biv(p, regime)?;
    if !dom.y_support.contains_interior(y) || !dom.x_support_of(y).contains_interior(x) {
        return Err(Error::OutsideSupport { point: (x, y) });
    }
    let a = p.alpha.to_f64();
    let b = p.beta.to_f64();
    let g = p.gamma.to_f64();
    let d = p.delta.to_f64();
    match regime {
        BivRegime::Inside => Ok(theta(x * y)
            * (1.0 + y)
            * (x + y)
            * (x - d)
            * (1.0 - y * y).powf((a - 1.0) / 2.0)
            * (y * y - x * x).powf((g - 1.0) / 2.0)
            * (x * x - d * d).powf((b - 1.0) / 2.0)),
        BivRegime::Outside => Ok(theta(d * x * y)
            * (1.0 + y)
            * (x + y)
            * (d - x)
            * (y * y - 1.0).powf((a - 1.0) / 2.0)
            * (x * x - y * y).powf((g - 1.0) / 2.0)
            * (d * d - x * x).powf((b - 1.0) / 2.0)),
    }
}

/// Weight evaluator for quadrature: every factor vanishing on a support edge
/// is read from the segment-context distances.
pub fn weight_biv_ctx(
    p: &BivParams,
    regime: BivRegime,
) -> impl Fn(&SegmentCtx, &SegmentCtx) -> f64 {
    let a = p.alpha.to_f64();
    let b = p.beta.to_f64();
    let g = p.gamma.to_f64();
    let d = p.delta.to_f64();
    let dabs = d.abs();
    move |xc: &SegmentCtx, yc: &SegmentCtx| {
        let x = xc.x;
        let y = yc.x;
        let one_plus_y = yc.affine(-1.0);
        let x_plus_y = xc.affine(-y);
        let xmd = xc.affine(dabs);
        let xpd = xc.affine(-dabs);
        let x_minus_delta = if d >= 0.0 { xmd } else { xpd };
        let x2_minus_d2 = xmd * xpd;
        let y2_minus_x2 = -xc.affine(y) * xc.affine(-y);
        let y2_minus_1 = yc.affine(1.0) * yc.affine(-1.0);
        match regime {
            BivRegime::Inside => {
                theta(x * y)
                    * one_plus_y
                    * x_plus_y
                    * x_minus_delta
                    * (-y2_minus_1).powf((a - 1.0) / 2.0)
                    * y2_minus_x2.powf((g - 1.0) / 2.0)
                    * x2_minus_d2.powf((b - 1.0) / 2.0)
            }
            BivRegime::Outside => {
                theta(d * x * y)
                    * one_plus_y
                    * x_plus_y
                    * (-x_minus_delta)
                    * y2_minus_1.powf((a - 1.0) / 2.0)
                    * (-y2_minus_x2).powf((g - 1.0) / 2.0)
                    * (-x2_minus_d2).powf((b - 1.0) / 2.0)
            }
        }
    }
}

/// Squared norm of J_{n,k} for the given regime.
pub fn norm_h_biv(idx: BivIndex, p: &BivParams, regime: BivRegime) -> Result<f64> {
    support_y(p, regime)?;
    let a = p.alpha.to_f64();
    let b = p.beta.to_f64();
    let g = p.gamma.to_f64();
    let d = p.delta.to_f64();
    let (n, k) = (idx.n, idx.k);
    let sign_k = if k % 2 == 0 { 1.0 } else { -1.0 };
    let exponent = (2.0 * k as f64 + a + b + g + 3.0) / 2.0;
    let h_section = norm_h_bare(k, g, b)?;
    let h_outer = norm_h_bare(n - k, a, 2.0 * k as f64 + g + b + 1.0)?;
    let prefactor = match regime {
        BivRegime::Inside => (1.0 - d * d).powf(exponent) / (1.0 + sign_k * d),
        BivRegime::Outside => sign_k * theta(d) * (d * d - 1.0).powf(exponent) / (1.0 + sign_k * d),
    };
    Ok(prefactor * h_section * h_outer)
}

/// Coefficient functions of the principal operator, one per reflection /
/// derivative term. Each is a Laurent polynomial in x and y; the identity
/// coefficient balances the three pure-reflection ones.
pub struct ReflectionCoeffs {
    pub rxry_dy: RatPoly2,
    pub ry_dy: RatPoly2,
    pub rxry_dx: RatPoly2,
    pub rx_dx: RatPoly2,
    pub rxry: RatPoly2,
    pub rx: RatPoly2,
    pub ry: RatPoly2,
    pub identity: RatPoly2,
}

pub fn l1_coefficients(p: &BivParams) -> ReflectionCoeffs {
    let a = &p.alpha;
    let b = &p.beta;
    let g = &p.gamma;
    let d = &p.delta;
    let quarter = ExactScalar::ratio(1, 4);
    let hf = ExactScalar::ratio(1, 2);
    let x_plus_d = xy_poly(&[(1, 0, int(1)), (0, 0, d.clone())]);
    let y_minus_1 = xy_poly(&[(0, 1, int(1)), (0, 0, int(-1))]);
    let x_minus_y = xy_poly(&[(1, 0, int(1)), (0, 1, int(-1))]);

    let rxry = xy_poly(&[
        (1, 0, b + g + int(1)),
        (1, 1, ExactScalar::zero() - (a + b + g + int(2))),
        (0, 1, ExactScalar::zero() - d * (a + g + int(1))),
        (0, 0, d * g),
    ])
    .shift(-1, -1)
    .scale(&quarter);

    let rx = xy_poly(&[
        (2, 0, b + g + int(1)),
        (1, 1, ExactScalar::zero() - b),
        (0, 1, d.clone()),
        (1, 0, d * g),
    ])
    .shift(-2, -1)
    .scale(&(ExactScalar::zero() - &quarter));

    let ry = xy_poly(&[
        (1, 0, int(1)),
        (1, 1, a.clone()),
        (0, 2, ExactScalar::zero() - (a + g + int(1))),
        (0, 1, g.clone()),
    ])
    .shift(-1, -2)
    .scale(&(ExactScalar::zero() - &quarter * d));

    let identity = rxry.add(&rx).add(&ry).neg();

    let rxry_dy = x_plus_d.mul(&y_minus_1).shift(-1, 0).scale(&hf);
    let ry_dy = x_minus_y.mul(&y_minus_1).shift(-1, -1).scale(&(&hf * d));
    let rxry_dx = x_plus_d.mul(&y_minus_1).shift(0, -1).scale(&hf);
    let rx_dx = x_plus_d.mul(&x_minus_y).shift(-1, -1).scale(&hf);

    ReflectionCoeffs { rxry_dy, ry_dy, rxry_dx, rx_dx, rxry, rx, ry, identity }
}

fn is_polynomial2(f: &RatPoly2) -> bool {
    f.min_x_exponent().unwrap_or(0) >= 0 && f.min_y_exponent().unwrap_or(0) >= 0
}

/// Applies the principal operator. Composition is rightmost first: each term
/// differentiates, then reflects, then multiplies by its coefficient.
pub fn l1_apply(p: &BivParams, f: &RatPoly2) -> Result<RatPoly2> {
    let c = l1_coefficients(p);
    let dx = f.differentiate_x();
    let dy = f.differentiate_y();
    let mut out = c.rxry_dy.mul(&dy.reflect_both());
    out = out.add(&c.ry_dy.mul(&dy.reflect_y()));
    out = out.add(&c.rxry_dx.mul(&dx.reflect_both()));
    out = out.add(&c.rx_dx.mul(&dx.reflect_x()));
    out = out.add(&c.rxry.mul(&f.reflect_both()));
    out = out.add(&c.rx.mul(&f.reflect_x()));
    out = out.add(&c.ry.mul(&f.reflect_y()));
    out = out.add(&c.identity.mul(f));
    if is_polynomial2(f) {
        // All transient negative powers must cancel on polynomial input.
        out.assert_polynomial("principal operator output")
    } else {
        Ok(out)
    }
}

/// Eigenvalue of the principal operator on total degree n.
pub fn eigenvalue_mu(n: u32, p: &BivParams) -> ExactScalar {
    if n % 2 == 0 {
        half(int(-(n as i64)))
    } else {
        half(int(n as i64) + &p.alpha + &p.beta + &p.gamma + int(2))
    }
}

/// Applies the section operator, which acts on x alone and grades the family
/// by k. Same rightmost-first composition as the principal operator.
pub fn l2_apply(p: &BivParams, f: &RatPoly2) -> Result<RatPoly2> {
    let b = &p.beta;
    let g = &p.gamma;
    let d = &p.delta;
    let c1 = xy_poly(&[(0, 1, int(1)), (1, 0, int(-1))])
        .mul(&xy_poly(&[(1, 0, int(1)), (0, 0, d.clone())]))
        .shift(-1, 0)
        .scale(&int(2));
    let c2 = xy_poly(&[
        (2, 0, g + b + int(1)),
        (1, 0, d * g),
        (1, 1, ExactScalar::zero() - b),
        (0, 1, d.clone()),
    ])
    .shift(-2, 0);
    let rf = f.reflect_x();
    let out = c1.mul(&f.differentiate_x().reflect_x()).add(&c2.mul(&rf.sub(f)));
    if is_polynomial2(f) {
        out.assert_polynomial("section operator output")
    } else {
        Ok(out)
    }
}

/// Eigenvalue of the section operator on x-degree k.
pub fn eigenvalue_nu(k: u32, p: &BivParams) -> ExactScalar {
    if k % 2 == 0 {
        int(2 * k as i64)
    } else {
        int(-2) * (int(k as i64) + &p.beta + &p.gamma + int(1))
    }
}

/// Which route produces structure coefficients: the closed-form tables, or
/// exact expansion of the shifted polynomial over the family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoeffSource {
    ClosedForm,
    Expansion,
}

/// One entry of a recurrence stencil: the coefficient of J_{n+dn, k+dk}.
#[derive(Clone, Debug)]
pub struct StencilCoeff {
    pub dn: i32,
    pub dk: i32,
    pub value: ExactScalar,
}

const Y_STENCIL: [(i32, i32); 3] = [(1, 0), (0, 0), (-1, 0)];
const X_STENCIL: [(i32, i32); 9] =
    [(1, -1), (1, 0), (1, 1), (0, -1), (0, 0), (0, 1), (-1, -1), (-1, 0), (-1, 1)];

fn signed_delta(n: u32, p: &BivParams) -> ExactScalar {
    if n % 2 == 0 {
        p.delta.clone()
    } else {
        ExactScalar::zero() - &p.delta
    }
}

fn param_sum(p: &BivParams) -> ExactScalar {
    &p.alpha + &p.beta + &p.gamma
}

/// Mixing ratio toward lower section index; the k = 0 value is fixed to zero
/// by convention, which also covers the 0/0 at beta + gamma = 0.
fn tau_mix(k: u32, p: &BivParams) -> ExactScalar {
    if k == 0 {
        return ExactScalar::zero();
    }
    let odd = int((k % 2) as i64);
    (int(k as i64) + &p.beta * &odd) / (int(2 * k as i64) + &p.beta + &p.gamma)
}

/// Mixing ratio toward higher section index.
fn sigma_mix(k: u32, p: &BivParams) -> ExactScalar {
    let odd = int((k % 2) as i64);
    (int(k as i64) + &p.beta * &odd + &p.gamma + int(1))
        / (int(2 * k as i64) + &p.beta + &p.gamma + int(2))
}

/// Middle-band shift entering the same-n coefficients of the x relation.
fn z_shift(n: u32, p: &BivParams) -> Result<ExactScalar> {
    let sign = int(if n % 2 == 0 { 1 } else { -1 });
    let s = param_sum(p);
    let d1 = int(2 * n as i64 + 1) + &s;
    let d2 = int(2 * n as i64 + 3) + &s;
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::DegenerateDenominator {
            context: format!("middle-band shift at n = {n}"),
        });
    }
    Ok((sign - &p.delta * (int(2 * n as i64 + 2) + &s)) / (d1 * d2))
}

fn parity_case(n: u32, k: u32, even: ExactScalar, odd: ExactScalar) -> ExactScalar {
    if (n + k) % 2 == 0 {
        even
    } else {
        odd
    }
}

fn closed_a(n: u32, k: u32, p: &BivParams) -> ExactScalar {
    let (nn, kk) = (n as i64, k as i64);
    let case = parity_case(n, k, int(nn - kk + 1) + &p.alpha, int(nn + kk + 2) + &param_sum(p));
    (ExactScalar::one() + signed_delta(n, p)) * case / (int(2 * nn + 3) + param_sum(p))
}

fn closed_c(n: u32, k: u32, p: &BivParams) -> ExactScalar {
    let (nn, kk) = (n as i64, k as i64);
    let case = parity_case(n, k, int(nn - kk), int(nn + kk + 1) + &p.beta + &p.gamma);
    if case.is_zero() {
        return ExactScalar::zero();
    }
    (ExactScalar::one() + signed_delta(n + 1, p)) * case / (int(2 * nn + 1) + param_sum(p))
}

fn closed_y_coeffs(idx: BivIndex, p: &BivParams) -> Vec<StencilCoeff> {
    let a = closed_a(idx.n, idx.k, p);
    let c = closed_c(idx.n, idx.k, p);
    let b = ExactScalar::one() - &a - &c;
    vec![
        StencilCoeff { dn: 1, dk: 0, value: a },
        StencilCoeff { dn: 0, dk: 0, value: b },
        StencilCoeff { dn: -1, dk: 0, value: c },
    ]
}

fn closed_x_coeffs(idx: BivIndex, p: &BivParams) -> Result<Vec<StencilCoeff>> {
    let (n, k) = (idx.n, idx.k);
    let (nn, kk) = (n as i64, k as i64);
    let s = param_sum(p);
    let tau = tau_mix(k, p);
    let sigma = sigma_mix(k, p);
    let dk_sign = signed_delta(k, p);
    let dn_sign = signed_delta(n, p);
    let one = ExactScalar::one();

    // Raising / lowering in k ride on z only when their parity factor
    // survives, so z is computed lazily behind those zero checks.
    let e = if tau.is_zero() {
        ExactScalar::zero()
    } else {
        let case = parity_case(n, k, int(nn - kk + 1) + &p.alpha, int(nn - kk + 2) + &p.alpha);
        &tau * (&one - &dk_sign) * (&one + &dn_sign) * case / (int(2 * nn + 3) + &s)
    };

    let g = {
        let case = parity_case(n, k, int(nn + kk + 3) + &s, int(nn + kk + 2) + &s);
        &sigma * (&one + &dn_sign) * case / ((&one + &dk_sign) * (int(2 * nn + 3) + &s))
    };

    let r = if tau.is_zero() {
        ExactScalar::zero()
    } else {
        let case =
            parity_case(n, k, int(nn - kk + 1) + &p.alpha, int(nn + kk + 1) + &p.beta + &p.gamma);
        let kp = int(if k % 2 == 0 { 1 } else { -1 });
        int(2) * &tau * z_shift(n, p)? * (kp - &p.delta) * case
    };

    let t = {
        let case = parity_case(n, k, int(nn - kk), int(nn + kk + 2) + &s);
        if case.is_zero() {
            ExactScalar::zero()
        } else {
            let kp = int(if k % 2 == 0 { -1 } else { 1 });
            int(2) * kp * &sigma * z_shift(n, p)? * case / (&one + &dk_sign)
        }
    };

    let u = if tau.is_zero() {
        ExactScalar::zero()
    } else {
        let case = parity_case(
            n,
            k,
            int(nn + kk) + &p.beta + &p.gamma,
            int(nn + kk + 1) + &p.beta + &p.gamma,
        );
        &tau * (&one - &dk_sign) * (&one - &dn_sign) * case / (int(2 * nn + 1) + &s)
    };

    let w = {
        let case = parity_case(n, k, int(nn - kk), int(nn - kk - 1));
        if case.is_zero() {
            ExactScalar::zero()
        } else {
            &sigma * (&one - &dn_sign) * case / ((&one + &dk_sign) * (int(2 * nn + 1) + &s))
        }
    };

    let a = closed_a(n, k, p);
    let c = closed_c(n, k, p);
    let b = &one - &a - &c;
    let mix = &one - &sigma - &tau;
    let f = &a * &mix;
    let v = &c * &mix;
    let sc = &b * &mix - &dk_sign * (&sigma - &tau);

    Ok(vec![
        StencilCoeff { dn: 1, dk: -1, value: e },
        StencilCoeff { dn: 1, dk: 0, value: f },
        StencilCoeff { dn: 1, dk: 1, value: g },
        StencilCoeff { dn: 0, dk: -1, value: r },
        StencilCoeff { dn: 0, dk: 0, value: sc },
        StencilCoeff { dn: 0, dk: 1, value: t },
        StencilCoeff { dn: -1, dk: -1, value: u },
        StencilCoeff { dn: -1, dk: 0, value: v },
        StencilCoeff { dn: -1, dk: 1, value: w },
    ])
}

fn shifted_index(idx: BivIndex, dn: i32, dk: i32) -> Option<BivIndex> {
    let n = idx.n as i64 + dn as i64;
    let k = idx.k as i64 + dk as i64;
    if n < 0 || k < 0 || k > n {
        return None;
    }
    Some(BivIndex { n: n as u32, k: k as u32 })
}

/// Solves target = sum_j coeff_j candidate_j exactly; every monomial equation
/// is enforced, so a solution is a proof of the expansion.
fn expand_over_stencil(target: &RatPoly2, candidates: &[RatPoly2]) -> Result<Vec<ExactScalar>> {
    let ncols = candidates.len();
    let mut keys: BTreeSet<(i64, i64)> = target.terms().map(|(e, _)| e).collect();
    for c in candidates {
        keys.extend(c.terms().map(|(e, _)| e));
    }
    let mut rows: Vec<Vec<ExactScalar>> = keys
        .iter()
        .map(|&(ex, ey)| {
            let mut row: Vec<ExactScalar> =
                candidates.iter().map(|c| c.coefficient(ex, ey)).collect();
            row.push(target.coefficient(ex, ey));
            row
        })
        .collect();
    let width = ncols + 1;
    let mut pivot_row_of = Vec::with_capacity(ncols);
    let mut next = 0usize;
    for col in 0..ncols {
        let Some(r) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return Err(Error::StencilResidual {
                context: format!("no pivot for stencil column {col}"),
            });
        };
        rows.swap(next, r);
        let inv = rows[next][col].recip();
        for cell in rows[next][col..width].iter_mut() {
            *cell = &*cell * &inv;
        }
        let pivot = rows[next].clone();
        for (rr, row) in rows.iter_mut().enumerate() {
            if rr == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..width {
                row[c] = &row[c] - &factor * &pivot[c];
            }
        }
        pivot_row_of.push(next);
        next += 1;
    }
    for row in rows.iter().skip(next) {
        if !row[ncols].is_zero() {
            return Err(Error::StencilResidual {
                context: format!("inconsistent monomial equation, rhs {}", row[ncols]),
            });
        }
    }
    Ok(pivot_row_of.iter().map(|&r| rows[r][ncols].clone()).collect())
}

fn expansion_coeffs(
    idx: BivIndex,
    p: &BivParams,
    stencil: &[(i32, i32)],
    multiplier: (i64, i64),
) -> Result<Vec<StencilCoeff>> {
    let target = biv_coeffs(idx, p)?.shift(multiplier.0, multiplier.1);
    let mut live = Vec::new();
    let mut candidates = Vec::new();
    for &(dn, dk) in stencil {
        if let Some(s) = shifted_index(idx, dn, dk) {
            live.push((dn, dk));
            candidates.push(biv_coeffs(s, p)?);
        }
    }
    let solved = expand_over_stencil(&target, &candidates)?;
    Ok(stencil
        .iter()
        .map(|&(dn, dk)| {
            let value = live
                .iter()
                .position(|&s| s == (dn, dk))
                .map(|i| solved[i].clone())
                .unwrap_or_else(ExactScalar::zero);
            StencilCoeff { dn, dk, value }
        })
        .collect())
}

/// Coefficients of y J_{n,k} over {J_{n+1,k}, J_{n,k}, J_{n-1,k}}.
pub fn y_recurrence_coeffs(
    idx: BivIndex,
    p: &BivParams,
    source: CoeffSource,
) -> Result<Vec<StencilCoeff>> {
    match source {
        CoeffSource::ClosedForm => Ok(closed_y_coeffs(idx, p)),
        CoeffSource::Expansion => expansion_coeffs(idx, p, &Y_STENCIL, (0, 1)),
    }
}

/// Coefficients of x J_{n,k} over the nine neighbours J_{n+dn, k+dk}.
pub fn x_recurrence_coeffs(
    idx: BivIndex,
    p: &BivParams,
    source: CoeffSource,
) -> Result<Vec<StencilCoeff>> {
    match source {
        CoeffSource::ClosedForm => closed_x_coeffs(idx, p),
        CoeffSource::Expansion => expansion_coeffs(idx, p, &X_STENCIL, (1, 0)),
    }
}

/// A disagreement between the closed-form table and the expansion route.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Deviation {
    pub relation: String,
    pub n: u32,
    pub k: u32,
    pub dn: i32,
    pub dk: i32,
    pub closed_form: String,
    pub derived: String,
    pub abs_diff: f64,
}

/// Compares the two coefficient routes exactly over all indices through
/// n_max and reports every entry where they disagree.
pub fn recurrence_deviations(p: &BivParams, n_max: u32) -> Result<Vec<Deviation>> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        for k in 0..=n {
            let idx = BivIndex { n, k };
            for (relation, closed, derived) in [
                (
                    "y-recurrence",
                    y_recurrence_coeffs(idx, p, CoeffSource::ClosedForm)?,
                    y_recurrence_coeffs(idx, p, CoeffSource::Expansion)?,
                ),
                (
                    "x-recurrence",
                    x_recurrence_coeffs(idx, p, CoeffSource::ClosedForm)?,
                    x_recurrence_coeffs(idx, p, CoeffSource::Expansion)?,
                ),
            ] {
                for (cf, dv) in closed.iter().zip(derived.iter()) {
                    if cf.value != dv.value {
                        out.push(Deviation {
                            relation: relation.into(),
                            n,
                            k,
                            dn: cf.dn,
                            dk: cf.dk,
                            closed_form: cf.value.to_string(),
                            derived: dv.value.to_string(),
                            abs_diff: (cf.value.to_f64() - dv.value.to_f64()).abs(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Deliberate distortions of the weight used as negative controls for the
/// Pearson system.
#[derive(Clone, Copy, Debug)]
pub enum WeightPerturbation {
    None,
    /// Shifts the exponent of the (1 - y^2) factor.
    YEdgeExponentShift(f64),
    /// Replaces (x - delta) by (x - delta - offset).
    XFactorOffset(f64),
}

/// Max residual of one symmetry equation, with the worst sample point.
#[derive(Clone, Debug)]
pub struct PearsonReport {
    pub equation: &'static str,
    pub max_residual: f64,
    pub witness: (f64, f64),
}

struct WeightModel {
    delta: f64,
    offset: f64,
    e_y: f64,
    e_band: f64,
    e_x: f64,
}

impl WeightModel {
    fn build(p: &BivParams, pert: WeightPerturbation) -> Self {
        let mut model = WeightModel {
            delta: p.delta.to_f64(),
            offset: 0.0,
            e_y: (p.alpha.to_f64() - 1.0) / 2.0,
            e_band: (p.gamma.to_f64() - 1.0) / 2.0,
            e_x: (p.beta.to_f64() - 1.0) / 2.0,
        };
        match pert {
            WeightPerturbation::None => {}
            WeightPerturbation::YEdgeExponentShift(s) => model.e_y += s,
            WeightPerturbation::XFactorOffset(t) => model.offset = t,
        }
        model
    }

    fn factors(&self, x: f64, y: f64) -> [f64; 6] {
        [
            1.0 + y,
            x + y,
            x - self.delta - self.offset,
            1.0 - y * y,
            y * y - x * x,
            x * x - self.delta * self.delta,
        ]
    }

    fn w(&self, x: f64, y: f64) -> f64 {
        let [f1, f2, f3, p1, p2, p3] = self.factors(x, y);
        theta(x * y) * f1 * f2 * f3 * p1.powf(self.e_y) * p2.powf(self.e_band) * p3.powf(self.e_x)
    }

    fn lam_x(&self, x: f64, y: f64) -> f64 {
        let [_, f2, f3, _, p2, p3] = self.factors(x, y);
        1.0 / f2 + 1.0 / f3 - self.e_band * 2.0 * x / p2 + self.e_x * 2.0 * x / p3
    }

    fn lam_y(&self, x: f64, y: f64) -> f64 {
        let [f1, f2, _, p1, p2, _] = self.factors(x, y);
        1.0 / f1 + 1.0 / f2 - self.e_y * 2.0 * y / p1 + self.e_band * 2.0 * y / p2
    }

    fn regular_at(&self, x: f64, y: f64) -> bool {
        self.factors(x, y).iter().all(|f| f.abs() > 1e-9)
    }
}

/// Deterministic g x g grid of interior points in the first-quadrant
/// triangle of the support: cell midpoints in y, then in x at fixed y.
pub fn pearson_grid_points(p: &BivParams, g: u32) -> Result<Vec<(f64, f64)>> {
    support_y(p, BivRegime::Inside)?;
    let dabs = delta_abs_f64(p);
    let gf = g as f64;
    let mut pts = Vec::with_capacity((g * g) as usize);
    for i in 0..g {
        let y = dabs + (i as f64 + 0.5) / gf * (1.0 - dabs);
        for j in 0..g {
            let x = dabs + (j as f64 + 0.5) / gf * (y - dabs);
            pts.push((x, y));
        }
    }
    Ok(pts)
}

/// Sample points in the open first-quadrant triangle of the support, pulled
/// away from all edges so the log-derivatives stay tame.
pub fn pearson_sample_points(p: &BivParams, count: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    support_y(p, BivRegime::Inside)?;
    let dabs = delta_abs_f64(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let u: f64 = rng.gen_range(0.1..0.9);
        let v: f64 = rng.gen_range(0.1..0.9);
        let y = dabs + u * (1.0 - dabs);
        let x = dabs + v * (y - dabs);
        let model = WeightModel::build(p, WeightPerturbation::None);
        if model.regular_at(x, y) && model.regular_at(-x, y) && model.regular_at(x, -y) {
            pts.push((x, y));
        }
    }
    Ok(pts)
}

/// Residuals of the seven symmetry equations that characterize the weight as
/// the symmetry factor of the principal operator. Each equation balances one
/// coefficient function against its reflected image, with first-order
/// correction terms for the derivative entries.
pub fn pearson_residuals(
    p: &BivParams,
    pert: WeightPerturbation,
    points: &[(f64, f64)],
) -> Result<Vec<PearsonReport>> {
    support_y(p, BivRegime::Inside)?;
    let model = WeightModel::build(p, pert);
    let c = l1_coefficients(p);
    let g1 = c.rxry.to_num().eval_table();
    let g2 = c.rx.to_num().eval_table();
    let g3 = c.ry.to_num().eval_table();
    let g5 = c.rxry_dy.to_num().eval_table();
    let g6 = c.ry_dy.to_num().eval_table();
    let g7 = c.rxry_dx.to_num().eval_table();
    let g8 = c.rx_dx.to_num().eval_table();
    let d5y = c.rxry_dy.differentiate_y().to_num().eval_table();
    let d6y = c.ry_dy.differentiate_y().to_num().eval_table();
    let d7x = c.rxry_dx.differentiate_x().to_num().eval_table();
    let d8x = c.rx_dx.differentiate_x().to_num().eval_table();

    let mut reports = [
        ("rx_dx", 0.0f64, (0.0, 0.0)),
        ("rxry_dx", 0.0, (0.0, 0.0)),
        ("ry_dy", 0.0, (0.0, 0.0)),
        ("rxry_dy", 0.0, (0.0, 0.0)),
        ("ry", 0.0, (0.0, 0.0)),
        ("rx", 0.0, (0.0, 0.0)),
        ("rxry", 0.0, (0.0, 0.0)),
    ];

    for &(x, y) in points {
        for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
            if !model.regular_at(sx * x, sy * y) {
                return Err(Error::SingularPoint {
                    reason: format!("weight factor vanishes near ({x}, {y})"),
                });
            }
        }
        let dx_h =
            |tbl: &crate::laurent::EvalTable, dtbl: &crate::laurent::EvalTable, u: f64, v: f64| {
                model.w(u, v) * (model.lam_x(u, v) * tbl.eval(u, v) + dtbl.eval(u, v))
            };
        let dy_h =
            |tbl: &crate::laurent::EvalTable, dtbl: &crate::laurent::EvalTable, u: f64, v: f64| {
                model.w(u, v) * (model.lam_y(u, v) * tbl.eval(u, v) + dtbl.eval(u, v))
            };
        let h = |tbl: &crate::laurent::EvalTable, u: f64, v: f64| model.w(u, v) * tbl.eval(u, v);

        let updates: [(usize, f64, f64); 7] = [
            // Pure balances of the derivative coefficients.
            (0, h(&g8, x, y), h(&g8, -x, y)),
            (1, h(&g7, x, y), h(&g7, -x, -y)),
            (2, h(&g6, x, y), h(&g6, x, -y)),
            (3, h(&g5, x, y), h(&g5, -x, -y)),
            // Reflection coefficients balance up to divergence terms.
            (4, h(&g3, x, y), h(&g3, x, -y) + dy_h(&g6, &d6y, x, -y)),
            (5, h(&g2, x, y), h(&g2, -x, y) + dx_h(&g8, &d8x, -x, y)),
            (6, h(&g1, x, y), h(&g1, -x, -y) + dx_h(&g7, &d7x, -x, -y) + dy_h(&g5, &d5y, -x, -y)),
        ];
        for (slot, lhs, rhs) in updates {
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            let res = (lhs - rhs).abs() / scale;
            if res > reports[slot].1 {
                reports[slot].1 = res;
                reports[slot].2 = (x, y);
            }
        }
    }

    Ok(reports
        .into_iter()
        .map(|(equation, max_residual, witness)| PearsonReport { equation, max_residual, witness })
        .collect())
}
