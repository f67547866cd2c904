//! Named verification suites producing machine-readable reports.
//!
//! Each suite bundles one family of identity checks (recurrences, eigen
//! equations, orthogonality, commutation, the Pearson system, the q-side
//! identities, the degeneration limit, or the quadrature engine itself) and
//! returns a single [`OpReport`]: worst residual, the witness where it
//! occurred, a pass flag, and wall time. Exact identities report a residual
//! of exactly zero on success; quadrature-backed checks report relative
//! residuals against their natural scales.
//!
//! The suites named `limit` and `quad-engine` aggregate checks with
//! heterogeneous tolerances; those two report residuals normalized so that
//! 1.0 marks the pass boundary for every component.

use std::time::Instant;

use crate::bigm1::{
    bigm1_coeffs, eigenvalue_lambda, norm_h, norm_h_bare, operator_l_apply, recurrence_coeffs,
    support, weight_ctx, UniParams, UniRegime,
};
use crate::bigq::{
    biv_limit_deviation, limit_qparams, omega_apply, omega_eigenvalue, q_x_recurrence_coeffs,
    q_y_recurrence_coeffs, QParams,
};
use crate::bivariate::{
    biv_coeffs, domain_area, domain_biv, eigenvalue_mu, eigenvalue_nu, l1_apply, l2_apply,
    norm_h_biv, pearson_grid_points, pearson_residuals, recurrence_deviations, weight_biv,
    weight_biv_ctx, x_recurrence_coeffs, y_recurrence_coeffs, BivIndex, BivParams, BivRegime,
    CoeffSource, WeightPerturbation,
};
use crate::chihara::{christoffel_kernel, norm_h_via_kernel, relation_check};
use crate::error::Result;
use crate::exact::ExactScalar;
use crate::laurent::{NumPoly2, RatPoly1, RatPoly2};
use crate::quad::{
    integrate_biv, integrate_biv_vec, integrate_union, integrate_union_stable, integrate_union_vec,
    IntervalUnion, QuadratureSpec, SegmentCtx,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All recognized suite names, sorted; "all" expands to this list.
pub const SUITE_NAMES: &[&str] = &[
    "biv-commutation",
    "biv-construction",
    "biv-eigen",
    "biv-gram",
    "biv-recurrence",
    "christoffel",
    "limit",
    "pearson",
    "q-eigen",
    "q-recurrence",
    "quad-engine",
    "uni-eigen",
    "uni-gram",
    "uni-recurrence",
];

/// One suite outcome. `pass` holds exactly when `max_residual` is within the
/// suite tolerance.
#[derive(Clone, Debug, serde::Serialize)]
pub struct OpReport {
    pub check_name: String,
    pub max_residual: f64,
    pub witness: String,
    pub pass: bool,
    pub elapsed_ms: u64,
}

/// Shared configuration for the suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub uni: UniParams,
    pub biv: BivParams,
    pub n_max: u32,
    pub spec: QuadratureSpec,
    pub grid: u32,
    pub source: CoeffSource,
}

impl SuiteConfig {
    pub fn standard() -> Self {
        SuiteConfig {
            uni: UniParams::new(rat(1, 2), rat(3, 4), rat(1, 5)).unwrap(),
            biv: BivParams::from_ratios((1, 2), (1, 2), (1, 2), (1, 5)).unwrap(),
            n_max: 8,
            spec: QuadratureSpec { abs_tol: 1e-11, rel_tol: 1e-9, level_max: 12 },
            grid: 10,
            source: CoeffSource::Expansion,
        }
    }
}

fn rat(p: i64, q: i64) -> ExactScalar {
    ExactScalar::ratio(p, q)
}

fn poly1_residual(f: &RatPoly1) -> f64 {
    f.terms().map(|(_, c)| c.to_f64().abs()).fold(0.0, f64::max)
}

fn poly2_residual(f: &RatPoly2) -> f64 {
    f.terms().map(|(_, c)| c.to_f64().abs()).fold(0.0, f64::max)
}

fn num2_residual(f: &NumPoly2) -> f64 {
    f.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max)
}

struct Tracker {
    max: f64,
    witness: String,
}

impl Tracker {
    fn new() -> Self {
        Tracker { max: 0.0, witness: "no residual exceeded zero".into() }
    }

    fn update(&mut self, residual: f64, witness: impl FnOnce() -> String) {
        if residual > self.max || !residual.is_finite() {
            self.max = if residual.is_finite() { residual } else { f64::INFINITY };
            self.witness = witness();
        }
    }
}

fn uni_label(p: &UniParams) -> String {
    format!("(a, b, c) = ({}, {}, {})", p.a, p.b, p.c)
}

fn biv_label(p: &BivParams) -> String {
    format!("(alpha, beta, gamma, delta) = ({}, {}, {}, {})", p.alpha, p.beta, p.gamma, p.delta)
}

fn uni_regime_of(p: &UniParams) -> UniRegime {
    if p.c.abs() < ExactScalar::one() {
        UniRegime::Inside
    } else {
        UniRegime::Outside
    }
}

/// The configured univariate parameters plus three fixed sets per regime.
fn uni_battery(cfg: &SuiteConfig) -> Vec<UniParams> {
    let mut sets = vec![cfg.uni.clone()];
    for (a, b, c) in [
        ((1, 2), (3, 4), (1, 5)),
        ((1, 3), (1, 2), (-2, 7)),
        ((2, 1), (1, 1), (1, 2)),
        ((1, 2), (3, 4), (5, 2)),
        ((1, 3), (1, 2), (-7, 3)),
        ((2, 1), (1, 1), (3, 2)),
    ] {
        sets.push(UniParams::new(rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1)).unwrap());
    }
    sets
}

/// Companion parameter set in the other regime: same exponents, |delta|
/// moved across 1 with its sign kept.
fn biv_companion(p: &BivParams) -> BivParams {
    let sign = if p.delta.is_negative() { -1 } else { 1 };
    let delta = if p.delta.abs() < ExactScalar::one() { rat(5 * sign, 2) } else { rat(sign, 5) };
    BivParams::new(p.alpha.clone(), p.beta.clone(), p.gamma.clone(), delta).unwrap()
}

fn biv_inside(cfg: &SuiteConfig) -> BivParams {
    if cfg.biv.delta.abs() < ExactScalar::one() {
        cfg.biv.clone()
    } else {
        biv_companion(&cfg.biv)
    }
}

fn biv_outside(cfg: &SuiteConfig) -> BivParams {
    if cfg.biv.delta.abs() > ExactScalar::one() {
        cfg.biv.clone()
    } else {
        biv_companion(&cfg.biv)
    }
}

/// Runs one named suite. Failures inside a suite (including hard errors)
/// yield a failed report rather than an error.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> OpReport {
    let start = Instant::now();
    let outcome = match name {
        "uni-recurrence" => suite_uni_recurrence(cfg),
        "uni-eigen" => suite_uni_eigen(cfg),
        "uni-gram" => suite_uni_gram(cfg),
        "christoffel" => suite_christoffel(cfg),
        "biv-construction" => suite_biv_construction(cfg),
        "biv-eigen" => suite_biv_eigen(cfg),
        "biv-commutation" => suite_biv_commutation(cfg),
        "biv-gram" => suite_biv_gram(cfg),
        "biv-recurrence" => suite_biv_recurrence(cfg),
        "pearson" => suite_pearson(cfg),
        "q-eigen" => suite_q_eigen(cfg),
        "q-recurrence" => suite_q_recurrence(cfg),
        "limit" => suite_limit(cfg),
        "quad-engine" => suite_quad_engine(cfg),
        other => Err(crate::error::Error::InvalidParameter(format!("unknown suite {other}"))),
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match outcome {
        Ok((tracker, tol)) => OpReport {
            check_name: name.into(),
            max_residual: tracker.max,
            witness: tracker.witness,
            pass: tracker.max <= tol,
            elapsed_ms,
        },
        Err(e) => OpReport {
            check_name: name.into(),
            max_residual: f64::INFINITY,
            witness: format!("error: {e}"),
            pass: false,
            elapsed_ms,
        },
    }
}

/// Runs the given suites ("all" expands to every suite), sorted by name.
pub fn run_suites(names: &[String], cfg: &SuiteConfig) -> Vec<OpReport> {
    let mut expanded: Vec<&str> = Vec::new();
    for name in names {
        if name == "all" {
            expanded.extend_from_slice(SUITE_NAMES);
        } else {
            expanded.push(name.as_str());
        }
    }
    expanded.sort_unstable();
    expanded.dedup();
    expanded.into_iter().map(|name| run_suite(name, cfg)).collect()
}

fn suite_uni_recurrence(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    let x = RatPoly1::monomial(1, ExactScalar::one());
    let one = ExactScalar::one();
    for p in uni_battery(cfg) {
        for n in 0..=cfg.n_max {
            let jn = bigm1_coeffs(n, &p)?;
            // Normalization anchor: the value at 1 is 1 for every degree.
            let at_one = jn.evaluate_exact(&one);
            t.update((&at_one - &one).to_f64().abs(), || {
                format!("value at 1 for n = {n}, {}", uni_label(&p))
            });
            let (a_n, c_n) = recurrence_coeffs(n, &p)?;
            let b_n = &one - &a_n - &c_n;
            let mut rhs = bigm1_coeffs(n + 1, &p)?.scale(&a_n).add(&jn.scale(&b_n));
            if n > 0 {
                rhs = rhs.add(&bigm1_coeffs(n - 1, &p)?.scale(&c_n));
            }
            let residual = x.mul(&jn).sub(&rhs);
            t.update(poly1_residual(&residual), || {
                format!("three-term relation at n = {n}, {}", uni_label(&p))
            });
        }
    }
    Ok((t, 0.0))
}

fn suite_uni_eigen(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    for p in uni_battery(cfg) {
        for n in 0..=cfg.n_max {
            let jn = bigm1_coeffs(n, &p)?;
            let lambda = eigenvalue_lambda(n, &p);
            let residual = operator_l_apply(&p, &jn)?.sub(&jn.scale(&lambda));
            t.update(poly1_residual(&residual), || {
                format!("eigen relation at n = {n}, {}", uni_label(&p))
            });
        }
    }
    Ok((t, 0.0))
}

fn uni_gram_check(p: &UniParams, n_max: u32, spec: &QuadratureSpec, t: &mut Tracker) -> Result<()> {
    let regime = uni_regime_of(p);
    let m = n_max as usize + 1;
    let polys: Vec<_> =
        (0..m).map(|n| bigm1_coeffs(n as u32, p).map(|f| f.to_num())).collect::<Result<_>>()?;
    let norms: Vec<f64> = (0..m).map(|n| norm_h(n as u32, p, regime)).collect::<Result<_>>()?;
    let w = weight_ctx(p, regime);
    let f = |ctx: &SegmentCtx, out: &mut [f64]| {
        let weight = w(ctx);
        let vals: Vec<f64> = polys.iter().map(|f| f.evaluate(ctx.x).unwrap_or(f64::NAN)).collect();
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = vals[i] * vals[j] * weight;
            }
        }
    };
    let (gram, _) = integrate_union_vec(&f, m * m, &support(p, regime)?, spec)?;
    for i in 0..m {
        for j in 0..m {
            let got = gram[i * m + j];
            let residual = if i == j {
                (got - norms[i]).abs() / norms[i].abs()
            } else {
                got.abs() / (norms[i] * norms[j]).abs().sqrt()
            };
            t.update(residual, || {
                format!("Gram entry ({i}, {j}) in regime {regime:?}, {}", uni_label(p))
            });
        }
    }
    Ok(())
}

fn suite_uni_gram(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    let n_max = cfg.n_max.min(8);
    let mut sets = vec![cfg.uni.clone()];
    sets.push(UniParams::new(rat(1, 2), rat(3, 4), rat(1, 5)).unwrap());
    sets.push(UniParams::new(rat(1, 2), rat(3, 4), rat(5, 2)).unwrap());
    for p in sets {
        uni_gram_check(&p, n_max, &cfg.spec, &mut t)?;
    }
    // Constant-weight anchor: at vanishing exponents the measure of the
    // support is pi.
    let p0 = UniParams::new(rat(0, 1), rat(0, 1), rat(0, 1)).unwrap();
    let w = weight_ctx(&p0, UniRegime::Inside);
    let (mass, _) =
        integrate_union_stable(|ctx| w(ctx), &support(&p0, UniRegime::Inside)?, &cfg.spec)?;
    t.update((mass - std::f64::consts::PI).abs(), || {
        format!("weight mass {mass} vs pi at zero exponents")
    });
    Ok((t, 1e-8))
}

fn suite_christoffel(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    let p = if uni_regime_of(&cfg.uni) == UniRegime::Inside {
        cfg.uni.clone()
    } else {
        UniParams::new(rat(1, 2), rat(3, 4), rat(1, 5)).unwrap()
    };
    let n_max = cfg.n_max.min(6);

    // Kernel polynomials against the rescaled Chihara family, pointwise.
    let points: Vec<f64> = (0..21).map(|i| -0.95 + 0.095 * i as f64).collect();
    let (rel_res, rel_witness) = relation_check(&p, n_max, &points)?;
    t.update(rel_res, || format!("kernel/Chihara relation at {rel_witness}, {}", uni_label(&p)));

    // The synthetic division behind the kernel construction is exact:
    // (x - 1) K_n + (Jhat_(n+1)(1)/Jhat_n(1)) Jhat_n reassembles Jhat_(n+1).
    let nu = ExactScalar::one();
    for n in 0..=n_max {
        let jn = crate::bigm1::monic_coeffs(n, &p)?;
        let jn1 = crate::bigm1::monic_coeffs(n + 1, &p)?;
        let ratio = jn1.evaluate_exact(&nu) / jn.evaluate_exact(&nu);
        let kernel = christoffel_kernel(n, &p, &nu)?;
        let lin = RatPoly1::from_coeffs(&[ExactScalar::zero() - &nu, ExactScalar::one()]);
        let rebuilt = lin.mul(&kernel).add(&jn.scale(&ratio));
        t.update(poly1_residual(&rebuilt.sub(&jn1)), || {
            format!("kernel division remainder at n = {n}, {}", uni_label(&p))
        });
    }

    // Norm route agreement: closed form, kernel route, quadrature.
    let m = n_max as usize + 1;
    let polys: Vec<_> =
        (0..m).map(|n| bigm1_coeffs(n as u32, &p).map(|f| f.to_num())).collect::<Result<_>>()?;
    let w = weight_ctx(&p, UniRegime::Inside);
    let f = |ctx: &SegmentCtx, out: &mut [f64]| {
        let weight = w(ctx);
        for (slot, poly) in polys.iter().enumerate() {
            let v = poly.evaluate(ctx.x).unwrap_or(f64::NAN);
            out[slot] = v * v * weight;
        }
    };
    let (diag, _) = integrate_union_vec(&f, m, &support(&p, UniRegime::Inside)?, &cfg.spec)?;
    for n in 0..=n_max {
        let closed = norm_h(n, &p, UniRegime::Inside)?;
        // The kernel route produces the bare constant; rescale by the same
        // weight prefactor the closed form carries.
        let prefactor = closed / norm_h_bare(n, p.a.to_f64(), p.b.to_f64())?;
        let kernel = norm_h_via_kernel(n, &p)? * prefactor;
        let quad = diag[n as usize];
        for (label, other) in [("kernel route", kernel), ("quadrature", quad)] {
            t.update((closed - other).abs() / closed.abs(), || {
                format!("norm via {label} at n = {n}, {}", uni_label(&p))
            });
        }
    }
    Ok((t, 1e-8))
}

fn suite_biv_construction(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    for p in [biv_inside(cfg), biv_outside(cfg)] {
        for n in 0..=cfg.n_max.min(5) {
            for k in 0..=n {
                // biv_coeffs itself certifies that all inverse powers cancel.
                let poly = biv_coeffs(BivIndex { n, k }, &p)?;
                if poly.total_degree() != Some(n as i64) || poly.x_degree() != Some(k as i64) {
                    t.update(1.0, || {
                        format!("degree pattern at (n, k) = ({n}, {k}), {}", biv_label(&p))
                    });
                }
            }
        }
    }
    Ok((t, 0.0))
}

fn suite_biv_eigen(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    for p in [biv_inside(cfg), biv_outside(cfg)] {
        for n in 0..=cfg.n_max.min(5) {
            let mu = eigenvalue_mu(n, &p);
            for k in 0..=n {
                let idx = BivIndex { n, k };
                let poly = biv_coeffs(idx, &p)?;
                let r1 = l1_apply(&p, &poly)?.sub(&poly.scale(&mu));
                t.update(poly2_residual(&r1), || {
                    format!("principal operator at (n, k) = ({n}, {k}), {}", biv_label(&p))
                });
                let nu = eigenvalue_nu(k, &p);
                let r2 = l2_apply(&p, &poly)?.sub(&poly.scale(&nu));
                t.update(poly2_residual(&r2), || {
                    format!("section operator at (n, k) = ({n}, {k}), {}", biv_label(&p))
                });
            }
        }
    }
    Ok((t, 0.0))
}

fn suite_biv_commutation(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    let p = biv_inside(cfg);
    for i in 0..=6i64 {
        for j in 0..=(6 - i) {
            let f = RatPoly2::monomial(i, j, ExactScalar::one());
            let a1 = l1_apply(&p, &f)?;
            let a2 = l2_apply(&p, &f)?;
            for (label, out) in [("principal", &a1), ("section", &a2)] {
                if out.total_degree().unwrap_or(0) > i + j {
                    t.update(1.0, || format!("{label} operator raised degree of x^{i} y^{j}"));
                }
            }
            let residual = l2_apply(&p, &a1)?.sub(&l1_apply(&p, &a2)?);
            t.update(poly2_residual(&residual), || {
                format!("commutator on x^{i} y^{j}, {}", biv_label(&p))
            });
        }
    }
    Ok((t, 0.0))
}

fn biv_gram_check(
    p: &BivParams,
    regime: BivRegime,
    n_max: u32,
    spec: &QuadratureSpec,
    t: &mut Tracker,
) -> Result<()> {
    let indices: Vec<BivIndex> =
        (0..=n_max).flat_map(|n| (0..=n).map(move |k| BivIndex { n, k })).collect();
    let tables: Vec<_> = indices
        .iter()
        .map(|&idx| biv_coeffs(idx, p).map(|f| f.to_num().eval_table()))
        .collect::<Result<_>>()?;
    let norms: Vec<f64> =
        indices.iter().map(|&idx| norm_h_biv(idx, p, regime)).collect::<Result<_>>()?;
    let m = indices.len();
    let w = weight_biv_ctx(p, regime);
    let f = |xc: &SegmentCtx, yc: &SegmentCtx, out: &mut [f64]| {
        let weight = w(xc, yc);
        let vals: Vec<f64> = tables.iter().map(|tb| tb.eval(xc.x, yc.x)).collect();
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = vals[i] * vals[j] * weight;
            }
        }
    };
    let (gram, _) = integrate_biv_vec(&f, m * m, &domain_biv(p, regime)?, spec)?;
    for i in 0..m {
        for j in 0..m {
            let got = gram[i * m + j];
            let residual = if i == j {
                (got - norms[i]).abs() / norms[i].abs()
            } else {
                got.abs() / (norms[i] * norms[j]).abs().sqrt()
            };
            t.update(residual, || {
                format!(
                    "Gram entry ({:?}, {:?}) in regime {regime:?}, {}",
                    indices[i],
                    indices[j],
                    biv_label(p)
                )
            });
        }
    }
    Ok(())
}

fn positivity_check(p: &BivParams, regime: BivRegime, t: &mut Tracker) -> Result<()> {
    let dom = domain_biv(p, regime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0u32;
    while checked < 1000 {
        let segs = dom.y_support.segments().to_vec();
        let seg = segs[rng.gen_range(0..segs.len())];
        let y = rng.gen_range(seg.0..seg.1);
        let xs = dom.x_support_of(y);
        let xsegs = xs.segments().to_vec();
        if xsegs.is_empty() {
            continue;
        }
        let xseg = xsegs[rng.gen_range(0..xsegs.len())];
        if xseg.1 - xseg.0 < 1e-9 {
            continue;
        }
        let x = rng.gen_range(xseg.0..xseg.1);
        let value = weight_biv(x, y, p, regime)?;
        if !value.is_finite() || value <= 0.0 {
            t.update(1.0, || {
                format!("weight {value} at ({x}, {y}) in regime {regime:?}, {}", biv_label(p))
            });
        }
        checked += 1;
    }
    Ok(())
}

fn suite_biv_gram(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    let n_max = cfg.n_max.min(4);
    for (p, regime) in
        [(biv_inside(cfg), BivRegime::Inside), (biv_outside(cfg), BivRegime::Outside)]
    {
        biv_gram_check(&p, regime, n_max, &cfg.spec, &mut t)?;
        positivity_check(&p, regime, &mut t)?;
    }
    Ok((t, 1e-6))
}

fn suite_biv_recurrence(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    let p = biv_inside(cfg);
    for n in 0..=cfg.n_max.min(4) {
        for k in 0..=n {
            let idx = BivIndex { n, k };
            let base = biv_coeffs(idx, &p)?;
            for (coeffs, shift, label) in [
                (y_recurrence_coeffs(idx, &p, cfg.source)?, (0i64, 1i64), "y"),
                (x_recurrence_coeffs(idx, &p, cfg.source)?, (1, 0), "x"),
            ] {
                let mut acc = RatPoly2::zero();
                for sc in &coeffs {
                    let sn = n as i64 + sc.dn as i64;
                    let sk = k as i64 + sc.dk as i64;
                    if sn < 0 || sk < 0 || sk > sn {
                        t.update(sc.value.to_f64().abs(), || {
                            format!(
                                "{label}-relation coefficient aimed at missing member \
                                 ({}, {}) from (n, k) = ({n}, {k})",
                                sc.dn, sc.dk
                            )
                        });
                        continue;
                    }
                    let member = biv_coeffs(BivIndex { n: sn as u32, k: sk as u32 }, &p)?;
                    acc = acc.add(&member.scale(&sc.value));
                }
                let residual = acc.sub(&base.shift(shift.0, shift.1));
                t.update(poly2_residual(&residual), || {
                    format!("{label}-relation identity at (n, k) = ({n}, {k}), {}", biv_label(&p))
                });
            }
        }
    }
    // Cross-route adjudication: closed-form tables against the expansion
    // oracle, exact comparison.
    let deviations = recurrence_deviations(&p, cfg.n_max.min(3))?;
    if !deviations.is_empty() {
        let d = &deviations[0];
        t.update(deviations.len() as f64, || {
            format!(
                "{} coefficient route disagreement at (n, k) = ({}, {}), shift ({}, {})",
                d.relation, d.n, d.k, d.dn, d.dk
            )
        });
    }
    Ok((t, 0.0))
}

fn suite_pearson(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    let p = biv_inside(cfg);
    let points = pearson_grid_points(&p, cfg.grid)?;
    for report in pearson_residuals(&p, WeightPerturbation::None, &points)? {
        t.update(report.max_residual, || {
            format!(
                "balance {} at ({:.6}, {:.6}), {}",
                report.equation,
                report.witness.0,
                report.witness.1,
                biv_label(&p)
            )
        });
    }
    Ok((t, 1e-10))
}

fn q_param_sets() -> [QParams; 2] {
    [
        QParams::new(0.5, 0.6, 0.4, 0.3, 0.7).unwrap(),
        QParams::new(0.3, 0.5, 0.7, -0.2, 0.55).unwrap(),
    ]
}

fn q_label(p: &QParams) -> String {
    format!("(a, b, c, d, q) = ({}, {}, {}, {}, {})", p.a, p.b, p.c, p.d, p.q)
}

fn suite_q_eigen(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    for p in q_param_sets() {
        for n in 0..=cfg.n_max.min(4) {
            let lambda = omega_eigenvalue(n, &p);
            for k in 0..=n {
                let poly = crate::bigq::bigq_biv_coeffs(BivIndex { n, k }, &p)?;
                let residual = omega_apply(&p, &poly).sub(&poly.scale(&lambda));
                let scale = num2_residual(&poly) * lambda.abs().max(1.0);
                t.update(num2_residual(&residual) / scale.max(1.0), || {
                    format!("q eigen relation at (n, k) = ({n}, {k}), {}", q_label(&p))
                });
            }
        }
    }
    Ok((t, 1e-9))
}

fn suite_q_recurrence(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    for p in q_param_sets() {
        for n in 0..=cfg.n_max.min(4) {
            for k in 0..=n {
                let idx = BivIndex { n, k };
                let base = crate::bigq::bigq_biv_coeffs(idx, &p)?;
                let scale = num2_residual(&base).max(1.0);
                for (coeffs, shift, label) in [
                    (q_y_recurrence_coeffs(idx, &p)?, (0i64, 1i64), "y"),
                    (q_x_recurrence_coeffs(idx, &p)?, (1, 0), "x"),
                ] {
                    let mut acc = NumPoly2::zero();
                    for &(dn, dk, value) in &coeffs {
                        let sn = n as i64 + dn as i64;
                        let sk = k as i64 + dk as i64;
                        if sn < 0 || sk < 0 || sk > sn {
                            t.update(value.abs() / scale, || {
                                format!(
                                    "q {label}-relation coefficient aimed at missing member \
                                     from (n, k) = ({n}, {k})"
                                )
                            });
                            continue;
                        }
                        let member = crate::bigq::bigq_biv_coeffs(
                            BivIndex { n: sn as u32, k: sk as u32 },
                            &p,
                        )?;
                        acc = acc.add(&member.scale(&value));
                    }
                    let residual = acc.sub(&base.shift(shift.0, shift.1));
                    t.update(num2_residual(&residual) / scale, || {
                        format!("q {label}-relation at (n, k) = ({n}, {k}), {}", q_label(&p))
                    });
                }
            }
        }
    }
    Ok((t, 1e-9))
}

/// Residuals here are normalized to their tolerance bands: decay-order
/// windows of 1 +/- 0.3, and an operator-degeneration gap of 1e-3.
fn suite_limit(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    let p = biv_inside(cfg);
    let eps_seq = [1e-2, 1e-3, 1e-4];
    for n in 0..=cfg.n_max.min(3) {
        for k in 0..=n {
            let idx = BivIndex { n, k };
            let devs: Vec<f64> =
                eps_seq.iter().map(|&e| biv_limit_deviation(idx, &p, e)).collect::<Result<_>>()?;
            if devs.iter().all(|d| *d <= 1e-13) {
                // Constant member: both sides coincide identically.
                continue;
            }
            for w in devs.windows(2) {
                if w[1] >= w[0] {
                    t.update(2.0, || {
                        format!(
                            "deviation not decreasing at (n, k) = ({n}, {k}): {} then {}",
                            w[0], w[1]
                        )
                    });
                    continue;
                }
                let order = (w[0] / w[1]).log10();
                t.update((order - 1.0).abs() / 0.3, || {
                    format!("decay order {order:.3} at (n, k) = ({n}, {k}), {}", biv_label(&p))
                });
            }
        }
    }
    // On the degeneration path the rescaled q-difference operator reproduces
    // the principal reflection operator on low-degree polynomials.
    let qp = limit_qparams(&p, 1e-4);
    for i in 0..=3i64 {
        for j in 0..=(3 - i) {
            let f = RatPoly2::monomial(i, j, ExactScalar::one());
            let target = l1_apply(&p, &f)?.to_num();
            let got = omega_apply(&qp, &f.to_num()).scale(&(1.0 / (1.0 + qp.q)));
            let gap = num2_residual(&got.sub(&target)) / num2_residual(&target).max(1.0);
            t.update(gap / 1e-3, || format!("operator degeneration gap {gap:.3e} on x^{i} y^{j}"));
        }
    }
    Ok((t, 1.0))
}

/// Residuals normalized to the tolerance band of each integral check.
fn suite_quad_engine(cfg: &SuiteConfig) -> Result<(Tracker, f64)> {
    let mut t = Tracker::new();
    let unit = IntervalUnion::new(vec![(0.0, 1.0)]);
    let (inv_sqrt, _) =
        integrate_union_stable(|ctx| 1.0 / ctx.affine(0.0).abs().sqrt(), &unit, &cfg.spec)?;
    t.update((inv_sqrt - 2.0).abs() / 1e-10, || {
        format!("inverse square root mass {inv_sqrt} vs 2")
    });

    let sym = IntervalUnion::new(vec![(-1.0, 1.0)]);
    let (momentum, _) = integrate_union(|x| x.powi(20), &sym, &cfg.spec)?;
    t.update((momentum - 2.0 / 21.0).abs() / 1e-12, || {
        format!("degree-20 moment {momentum} vs 2/21")
    });

    let p0 = BivParams::new(rat(1, 2), rat(1, 2), rat(1, 2), ExactScalar::zero()).unwrap();
    let dom = domain_biv(&p0, BivRegime::Inside)?;
    let (area, _) = integrate_biv(|_, _| 1.0, &dom, &cfg.spec)?;
    let expected = domain_area(&p0, BivRegime::Inside)?;
    t.update((area - expected).abs() / 1e-9, || {
        format!("support area {area} vs {expected} at delta = 0")
    });
    Ok((t, 1.0))
}

/// One Gram matrix row for tabular export.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GramRow {
    pub n1: u32,
    pub k1: u32,
    pub n2: u32,
    pub k2: u32,
    pub value: f64,
    pub expected: f64,
    pub abs_err: f64,
}

/// Full univariate Gram matrix with expected diagonal, for export. The
/// section columns k1, k2 are zero for this family.
pub fn uni_gram_rows(p: &UniParams, n_max: u32, spec: &QuadratureSpec) -> Result<Vec<GramRow>> {
    let regime = uni_regime_of(p);
    let m = n_max as usize + 1;
    let polys: Vec<_> =
        (0..m).map(|n| bigm1_coeffs(n as u32, p).map(|f| f.to_num())).collect::<Result<_>>()?;
    let norms: Vec<f64> = (0..m).map(|n| norm_h(n as u32, p, regime)).collect::<Result<_>>()?;
    let w = weight_ctx(p, regime);
    let f = |ctx: &SegmentCtx, out: &mut [f64]| {
        let weight = w(ctx);
        let vals: Vec<f64> = polys.iter().map(|f| f.evaluate(ctx.x).unwrap_or(f64::NAN)).collect();
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = vals[i] * vals[j] * weight;
            }
        }
    };
    let (gram, _) = integrate_union_vec(&f, m * m, &support(p, regime)?, spec)?;
    let mut rows = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let value = gram[i * m + j];
            let expected = if i == j { norms[i] } else { 0.0 };
            rows.push(GramRow {
                n1: i as u32,
                k1: 0,
                n2: j as u32,
                k2: 0,
                value,
                expected,
                abs_err: (value - expected).abs(),
            });
        }
    }
    Ok(rows)
}

/// Full bivariate Gram matrix with expected diagonal, for export.
pub fn biv_gram_rows(
    p: &BivParams,
    regime: BivRegime,
    n_max: u32,
    spec: &QuadratureSpec,
) -> Result<Vec<GramRow>> {
    let indices: Vec<BivIndex> =
        (0..=n_max).flat_map(|n| (0..=n).map(move |k| BivIndex { n, k })).collect();
    let tables: Vec<_> = indices
        .iter()
        .map(|&idx| biv_coeffs(idx, p).map(|f| f.to_num().eval_table()))
        .collect::<Result<_>>()?;
    let norms: Vec<f64> =
        indices.iter().map(|&idx| norm_h_biv(idx, p, regime)).collect::<Result<_>>()?;
    let m = indices.len();
    let w = weight_biv_ctx(p, regime);
    let f = |xc: &SegmentCtx, yc: &SegmentCtx, out: &mut [f64]| {
        let weight = w(xc, yc);
        let vals: Vec<f64> = tables.iter().map(|tb| tb.eval(xc.x, yc.x)).collect();
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = vals[i] * vals[j] * weight;
            }
        }
    };
    let (gram, _) = integrate_biv_vec(&f, m * m, &domain_biv(p, regime)?, spec)?;
    let mut rows = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let value = gram[i * m + j];
            let expected = if i == j { norms[i] } else { 0.0 };
            rows.push(GramRow {
                n1: indices[i].n,
                k1: indices[i].k,
                n2: indices[j].n,
                k2: indices[j].k,
                value,
                expected,
                abs_err: (value - expected).abs(),
            });
        }
    }
    Ok(rows)
}
