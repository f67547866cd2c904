//! Chihara polynomials and the Christoffel-kernel route to the big -1
//! Jacobi norms.
//!
//! The Christoffel transform of the monic big -1 Jacobi family at nu = 1,
//! rescaled by sqrt(1 - c^2), is a Chihara family with parameters
//! ((b - 1)/2, (a + 1)/2, -c/sqrt(1 - c^2)). Chihara norms have a plain
//! Gamma-ratio closed form, so chasing scale factors back through the
//! transform reproduces the big -1 Jacobi norms along a path that shares no
//! code with [`crate::bigm1::norm_h_bare`].

use crate::bigm1::{monic_coeffs, monic_kappa, UniParams};
use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::hyper::{gamma_real, gauss_2f1_terminating, pochhammer, pochhammer_f64};
use crate::laurent::RatPoly1;
use crate::quad::{IntervalUnion, SegmentCtx};

fn int(n: i64) -> ExactScalar {
    ExactScalar::from_integer(n)
}

/// Degree-n Chihara polynomial C_n(x; alpha, beta, gamma) with exact
/// rational coefficients. Both parities reduce to a terminating 2F1 in
/// x^2 - gamma^2; the odd branch carries an extra (x - gamma) factor.
pub fn chihara_coeffs(
    n: u32,
    alpha: &ExactScalar,
    beta: &ExactScalar,
    gamma: &ExactScalar,
) -> Result<RatPoly1> {
    let m = n / 2;
    // Upper Pochhammer entry of the prefactor ratio; shifts by one for odd n.
    let shift = if n % 2 == 0 { 1 } else { 2 };
    let base = int(m as i64) + alpha + beta + int(shift);
    let denom = pochhammer(&base, m);
    if denom.is_zero() {
        return Err(Error::DegenerateDenominator {
            context: format!("Chihara prefactor at n = {n}"),
        });
    }
    let mut front = pochhammer(&(alpha + int(shift)), m) / denom;
    if m % 2 == 1 {
        front = ExactScalar::zero() - front;
    }
    let series = gauss_2f1_terminating(
        m,
        &(int(m as i64) + alpha + beta + int(shift)),
        &(alpha + int(shift)),
    )?;
    let t_poly = RatPoly1::from_coeffs(&[
        ExactScalar::zero() - gamma * gamma,
        ExactScalar::zero(),
        ExactScalar::one(),
    ]);
    let even_part = series.compose(&t_poly).scale(&front);
    if n % 2 == 0 {
        Ok(even_part)
    } else {
        let linear = RatPoly1::from_coeffs(&[ExactScalar::zero() - gamma, ExactScalar::one()]);
        Ok(even_part.mul(&linear))
    }
}

/// Point evaluation of C_n for floating parameters; the only route available
/// when gamma is irrational, as it is on the kernel side of the relation.
pub fn chihara_eval(n: u32, alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<f64> {
    let m = n / 2;
    let shift = if n % 2 == 0 { 1.0 } else { 2.0 };
    let mf = m as f64;
    let denom = pochhammer_f64(mf + alpha + beta + shift, m);
    if denom == 0.0 {
        return Err(Error::DegenerateDenominator {
            context: format!("Chihara prefactor at n = {n}"),
        });
    }
    let front = if m % 2 == 0 { 1.0 } else { -1.0 } * pochhammer_f64(alpha + shift, m) / denom;
    let t = x * x - gamma * gamma;
    let upper = mf + alpha + beta + shift;
    let lower = alpha + shift;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..m {
        let jf = j as f64;
        let den = (lower + jf) * (jf + 1.0);
        if den == 0.0 {
            return Err(Error::DegenerateDenominator {
                context: format!("Chihara series at n = {n}, j = {j}"),
            });
        }
        term *= (jf - mf) * (upper + jf) / den * t;
        sum += term;
    }
    let odd_factor = if n % 2 == 0 { 1.0 } else { x - gamma };
    Ok(front * odd_factor * sum)
}

/// Orthogonality support of the Chihara family: two symmetric bands between
/// |gamma| and sqrt(1 + gamma^2).
pub fn chihara_support(gamma: f64) -> IntervalUnion {
    let g = gamma.abs();
    let r = (1.0 + gamma * gamma).sqrt();
    IntervalUnion::new(vec![(-r, -g), (g, r)])
}

/// Chihara weight at a point of the open support.
pub fn chihara_weight(x: f64, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    if !chihara_support(gamma).contains_interior(x) {
        return Err(Error::OutsideSupport { point: (x, 0.0) });
    }
    let theta = if x >= 0.0 { 1.0 } else { -1.0 };
    Ok(theta
        * (x + gamma)
        * (x * x - gamma * gamma).powf(alpha)
        * (1.0 + gamma * gamma - x * x).powf(beta))
}

/// Chihara weight evaluator for quadrature; band-edge factors come from the
/// segment-context distances so edge singularities integrate cleanly.
pub fn chihara_weight_ctx(alpha: f64, beta: f64, gamma: f64) -> impl Fn(&SegmentCtx) -> f64 {
    let g = gamma.abs();
    let r = (1.0 + gamma * gamma).sqrt();
    move |ctx: &SegmentCtx| {
        let theta = if ctx.x >= 0.0 { 1.0 } else { -1.0 };
        let xmg = ctx.affine(g);
        let xpg = ctx.affine(-g);
        let xmr = ctx.affine(r);
        let xpr = ctx.affine(-r);
        let x_plus_gamma = if gamma >= 0.0 { xpg } else { xmg };
        let x2_minus_g2 = xmg * xpg;
        let band_edge = -xmr * xpr;
        theta * x_plus_gamma * x2_minus_g2.powf(alpha) * band_edge.powf(beta)
    }
}

/// Squared norm of C_n against the Chihara weight.
pub fn chihara_norm_eta(n: u32, alpha: f64, beta: f64) -> Result<f64> {
    let m = (n / 2) as f64;
    let shift = if n % 2 == 0 { 1.0 } else { 2.0 };
    let mut acc = 1.0;
    for i in 2..=(n / 2) {
        acc *= i as f64;
    }
    let num = gamma_real(m + alpha + shift)? * gamma_real(m + beta + 1.0)? * acc;
    let den = gamma_real(m + alpha + beta + shift)?
        * (2.0 * m + alpha + beta + shift)
        * pochhammer_f64(m + alpha + beta + shift, n / 2).powi(2);
    Ok(num / den)
}

/// Degree-n Christoffel kernel of the monic big -1 Jacobi family at nu:
/// the monic combination of hat-J_{n+1} and hat-J_n that vanishes at nu,
/// divided exactly by (x - nu).
pub fn christoffel_kernel(n: u32, p: &UniParams, nu: &ExactScalar) -> Result<RatPoly1> {
    let jn = monic_coeffs(n, p)?;
    let jn1 = monic_coeffs(n + 1, p)?;
    let dn = jn.evaluate_exact(nu);
    if dn.is_zero() {
        return Err(Error::KernelPole { nu: nu.to_f64() });
    }
    let ratio = jn1.evaluate_exact(nu) / dn;
    jn1.sub(&jn.scale(&ratio)).divide_by_linear(nu)
}

/// Maximum relative residual of the kernel/Chihara identity
/// K_n(x) = s^n C_n(x/s; (b-1)/2, (a+1)/2, -c/s), s = sqrt(1 - c^2),
/// over degrees through n_max and the given sample points. Returns the
/// residual together with a witness location.
pub fn relation_check(p: &UniParams, n_max: u32, points: &[f64]) -> Result<(f64, String)> {
    let a = p.a.to_f64();
    let b = p.b.to_f64();
    let c = p.c.to_f64();
    let s2 = 1.0 - c * c;
    if s2 <= 0.0 {
        return Err(Error::RegimeMismatch {
            reason: format!("kernel/Chihara relation needs |c| < 1, got c = {c}"),
        });
    }
    let s = s2.sqrt();
    let alpha = (b - 1.0) / 2.0;
    let beta = (a + 1.0) / 2.0;
    let gamma = -c / s;
    let nu = ExactScalar::one();
    let mut worst = 0.0f64;
    let mut witness = String::from("none");
    for n in 0..=n_max {
        let kernel = christoffel_kernel(n, p, &nu)?;
        for &x in points {
            let lhs = kernel.evaluate(x)?;
            let rhs = s.powi(n as i32) * chihara_eval(n, alpha, beta, gamma, x / s)?;
            let res = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0);
            if res > worst {
                worst = res;
                witness = format!("n = {n}, x = {x}");
            }
        }
    }
    Ok((worst, witness))
}

/// Big -1 Jacobi norm h_n recovered through the kernel family: the Chihara
/// norm, scaled back through the x -> x/s substitution, fixes the moment of
/// (x - 1) K_n^2, and the Christoffel ratio at nu = 1 converts that into the
/// monic squared norm. Valid for |c| < 1, where the Chihara parameters are
/// real. Returns the bare h_n, comparable to [`crate::bigm1::norm_h_bare`].
pub fn norm_h_via_kernel(n: u32, p: &UniParams) -> Result<f64> {
    let a = p.a.to_f64();
    let b = p.b.to_f64();
    let c = p.c.to_f64();
    let s2 = 1.0 - c * c;
    if s2 <= 0.0 {
        return Err(Error::RegimeMismatch {
            reason: format!("kernel norm route needs |c| < 1, got c = {c}"),
        });
    }
    let eta = chihara_norm_eta(n, (b - 1.0) / 2.0, (a + 1.0) / 2.0)?;
    // Moment of (x - 1) K_n^2 against the band weight: the (x - 1) factor
    // joins (1 + x) into -(1 - x^2)^{(a+1)/2}, which is exactly the Chihara
    // weight after rescaling; the Jacobian and s^n powers give the exponent.
    let eta_tilde = -s2.powf(n as f64 + (a + b + 2.0) / 2.0) * eta;
    let one = ExactScalar::one();
    let jn_at_one = monic_coeffs(n, p)?.evaluate_exact(&one);
    if jn_at_one.is_zero() {
        return Err(Error::KernelPole { nu: 1.0 });
    }
    let ratio = monic_coeffs(n + 1, p)?.evaluate_exact(&one) / jn_at_one;
    let h_hat = -eta_tilde / ratio.to_f64();
    let kappa = monic_kappa(n, p).to_f64();
    Ok(h_hat * (1.0 + c) / (kappa * kappa * s2.powf((a + b + 2.0) / 2.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigm1::norm_h_bare;
    use crate::quad::{integrate_union_vec, QuadratureSpec};

    fn sample_points() -> Vec<f64> {
        (0..21).map(|j| -1.3 + 0.13 * j as f64).collect()
    }

    #[test]
    fn lowest_degrees() {
        let alpha = ExactScalar::ratio(-1, 4);
        let beta = ExactScalar::ratio(1, 3);
        let gamma = ExactScalar::ratio(1, 2);
        let c0 = chihara_coeffs(0, &alpha, &beta, &gamma).unwrap();
        assert_eq!(c0, RatPoly1::one());
        let c1 = chihara_coeffs(1, &alpha, &beta, &gamma).unwrap();
        let expect1 = RatPoly1::from_coeffs(&[ExactScalar::ratio(-1, 2), ExactScalar::one()]);
        assert_eq!(c1, expect1);
        // C_2 = x^2 - gamma^2 - (alpha + 1)/(alpha + beta + 2).
        let c2 = chihara_coeffs(2, &alpha, &beta, &gamma).unwrap();
        let shift = ExactScalar::ratio(-1, 4)
            - (&alpha + ExactScalar::one()) / (&alpha + &beta + ExactScalar::from_integer(2));
        let expect2 = RatPoly1::from_coeffs(&[shift, ExactScalar::zero(), ExactScalar::one()]);
        assert_eq!(c2, expect2);
    }

    #[test]
    fn eval_matches_exact_coeffs() {
        let alpha = ExactScalar::ratio(3, 4);
        let beta = ExactScalar::ratio(1, 2);
        let gamma = ExactScalar::ratio(-2, 5);
        for n in 0..=7 {
            let poly = chihara_coeffs(n, &alpha, &beta, &gamma).unwrap();
            for &x in &sample_points() {
                let direct = chihara_eval(n, 0.75, 0.5, -0.4, x).unwrap();
                let via_poly = poly.evaluate(x).unwrap();
                assert!(
                    (direct - via_poly).abs() <= 1e-12 * via_poly.abs().max(1.0),
                    "n = {n}, x = {x}: {direct} vs {via_poly}"
                );
            }
        }
    }

    #[test]
    fn orthogonality_by_quadrature() {
        let alpha = ExactScalar::ratio(-1, 4);
        let beta = ExactScalar::ratio(1, 3);
        let gamma = ExactScalar::ratio(1, 2);
        let n_max = 4usize;
        let polys: Vec<RatPoly1> =
            (0..=n_max as u32).map(|n| chihara_coeffs(n, &alpha, &beta, &gamma).unwrap()).collect();
        let w = chihara_weight_ctx(-0.25, 1.0 / 3.0, 0.5);
        let dim = (n_max + 1) * (n_max + 1);
        let f = |ctx: &SegmentCtx, out: &mut [f64]| {
            let weight = w(ctx);
            let vals: Vec<f64> = polys.iter().map(|p| p.evaluate(ctx.x).unwrap()).collect();
            for i in 0..=n_max {
                for j in 0..=n_max {
                    out[i * (n_max + 1) + j] = vals[i] * vals[j] * weight;
                }
            }
        };
        let dom = chihara_support(0.5);
        let (gram, _) = integrate_union_vec(&f, dim, &dom, &QuadratureSpec::default()).unwrap();
        for i in 0..=n_max {
            for j in 0..=n_max {
                let got = gram[i * (n_max + 1) + j];
                let expect = if i == j {
                    chihara_norm_eta(i as u32, -0.25, 1.0 / 3.0).unwrap()
                } else {
                    0.0
                };
                assert!(
                    (got - expect).abs() <= 1e-9 * expect.abs().max(1.0),
                    "({i}, {j}): {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn kernel_division_is_exact_and_monic() {
        let p = UniParams::from_i64(1, 2, 0);
        for n in 0..=6u32 {
            let nu = ExactScalar::one();
            let kernel = christoffel_kernel(n, &p, &nu).unwrap();
            assert_eq!(kernel.degree(), Some(n as i64));
            assert_eq!(kernel.leading_coefficient(), Some(&ExactScalar::one()));
            // Reassemble the dividend and compare exactly.
            let jn = monic_coeffs(n, &p).unwrap();
            let jn1 = monic_coeffs(n + 1, &p).unwrap();
            let ratio = jn1.evaluate_exact(&nu) / jn.evaluate_exact(&nu);
            let x_minus_nu =
                RatPoly1::from_coeffs(&[ExactScalar::zero() - &nu, ExactScalar::one()]);
            let rebuilt = kernel.mul(&x_minus_nu).add(&jn.scale(&ratio));
            assert_eq!(rebuilt, jn1);
        }
    }

    #[test]
    fn kernel_pole_is_reported() {
        let p = UniParams::from_i64(0, 0, 0);
        // hat-J_1 = x - 1/2 at these parameters, so nu = 1/2 degenerates.
        let err = christoffel_kernel(1, &p, &ExactScalar::ratio(1, 2)).unwrap_err();
        assert!(matches!(err, Error::KernelPole { .. }));
    }

    #[test]
    fn kernel_matches_scaled_chihara() {
        let sets = [((1, 2), (3, 2), (1, 3)), ((0, 1), (0, 1), (1, 2)), ((-1, 2), (1, 2), (-2, 5))];
        let pts = sample_points();
        for &(a, b, c) in &sets {
            let p = UniParams::new(
                ExactScalar::ratio(a.0, a.1),
                ExactScalar::ratio(b.0, b.1),
                ExactScalar::ratio(c.0, c.1),
            )
            .unwrap();
            let (res, witness) = relation_check(&p, 6, &pts).unwrap();
            assert!(res <= 1e-10, "residual {res} at {witness}");
        }
    }

    #[test]
    fn norm_route_agreement() {
        let sets = [((1, 2), (3, 2), (1, 3)), ((0, 1), (0, 1), (1, 2)), ((3, 2), (1, 2), (-1, 4))];
        for &(a, b, c) in &sets {
            let p = UniParams::new(
                ExactScalar::ratio(a.0, a.1),
                ExactScalar::ratio(b.0, b.1),
                ExactScalar::ratio(c.0, c.1),
            )
            .unwrap();
            for n in 0..=6u32 {
                let direct = norm_h_bare(n, p.a.to_f64(), p.b.to_f64()).unwrap();
                let via_kernel = norm_h_via_kernel(n, &p).unwrap();
                assert!(
                    (direct - via_kernel).abs() <= 1e-10 * direct.abs(),
                    "n = {n}: {direct} vs {via_kernel}"
                );
            }
        }
    }

    #[test]
    fn kernel_norm_anchor_is_pi() {
        let p = UniParams::from_i64(0, 0, 0);
        let h0 = norm_h_via_kernel(0, &p).unwrap();
        assert!((h0 - std::f64::consts::PI).abs() <= 1e-12);
        // The bare norm is c-independent; cross-check at a second offset.
        let p2 = UniParams::new(ExactScalar::zero(), ExactScalar::zero(), ExactScalar::ratio(1, 3))
            .unwrap();
        let h0b = norm_h_via_kernel(0, &p2).unwrap();
        assert!((h0b - std::f64::consts::PI).abs() <= 1e-12);
    }

    #[test]
    fn relation_rejects_outside_regime() {
        let p = UniParams::from_i64(0, 0, 2);
        let err = relation_check(&p, 3, &[0.5]).unwrap_err();
        assert!(matches!(err, Error::RegimeMismatch { .. }));
        let err2 = norm_h_via_kernel(2, &p).unwrap_err();
        assert!(matches!(err2, Error::RegimeMismatch { .. }));
    }
}
