//! Tanh-sinh (double-exponential) quadrature over interval unions and over
//! y-sliced planar regions.
//!
//! The engine targets integrands of the form w(x) p(x) where w has endpoint
//! power singularities (exponents > -1). Two points matter for accuracy:
//!
//! - Node positions are cached as distances from the segment endpoint, not as
//!   absolute abscissas. An integrand that needs the boundary-vanishing factor
//!   (x - endpoint) reads it from [`SegmentCtx`] with full relative precision
//!   even when x rounds to the endpoint itself.
//! - Levels double the node density and reuse previous evaluations; the level
//!   difference drives the convergence test and the error estimate.
//!
//! Non-finite integrand values are treated as zero. They occur only at nodes
//! whose double-exponential weight has already underflowed to the point of
//! irrelevance, or for genuinely divergent integrands, which then fail the
//! convergence test honestly.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Disjoint union of closed intervals, each with lo < hi.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalUnion {
    segments: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Builds a union, dropping empty segments and sorting by left endpoint.
    /// Segments may share endpoints but not interiors.
    pub fn new(mut segments: Vec<(f64, f64)>) -> Self {
        segments.retain(|(lo, hi)| lo < hi);
        segments.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in segments.windows(2) {
            assert!(w[0].1 <= w[1].0, "overlapping segments {:?} {:?}", w[0], w[1]);
        }
        IntervalUnion { segments }
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        self.segments.iter().any(|(lo, hi)| *lo < x && x < *hi)
    }
}

/// Planar region sliced by vertical position: y ranges over `y_support` and,
/// for each y, x ranges over `x_of(y)`.
pub struct BivDomain {
    pub y_support: IntervalUnion,
    x_of: Box<dyn Fn(f64) -> IntervalUnion + Send + Sync>,
}

impl BivDomain {
    pub fn new(
        y_support: IntervalUnion,
        x_of: impl Fn(f64) -> IntervalUnion + Send + Sync + 'static,
    ) -> Self {
        BivDomain { y_support, x_of: Box::new(x_of) }
    }

    pub fn x_support_of(&self, y: f64) -> IntervalUnion {
        (self.x_of)(y)
    }
}

/// Convergence targets for the level-doubling loop.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub level_max: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-10, level_max: 12 }
    }
}

/// Evaluation point on a segment [lo, hi]. `dl` and `dr` are the distances to
/// the endpoints, accurate to full relative precision however close the node
/// sits to the boundary.
#[derive(Clone, Copy, Debug)]
pub struct SegmentCtx {
    pub lo: f64,
    pub hi: f64,
    pub x: f64,
    pub dl: f64,
    pub dr: f64,
}

impl SegmentCtx {
    /// Value of the affine factor (x - root), read from the stable endpoint
    /// distance when the root is one of the segment endpoints.
    pub fn affine(&self, root: f64) -> f64 {
        if root == self.lo {
            self.dl
        } else if root == self.hi {
            -self.dr
        } else {
            self.x - root
        }
    }
}

const T_MAX: f64 = 6.5;
const MAX_CACHED_LEVEL: usize = 14;

/// Node at abscissa t > 0: `dm` is the distance of the mapped point from the
/// near endpoint of [-1, 1] and `w` the transformed trapezoid weight.
#[derive(Clone, Copy)]
struct Node {
    dm: f64,
    w: f64,
}

struct NodeCache {
    center_w: f64,
    /// levels[l] holds the t > 0 nodes introduced at refinement level l.
    levels: Vec<Vec<Node>>,
}

fn node_at(t: f64) -> Option<Node> {
    let v = std::f64::consts::FRAC_PI_2 * t.sinh();
    let e = (-2.0 * v).exp();
    let dm = 2.0 * e / (1.0 + e);
    let w = std::f64::consts::FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    if dm == 0.0 || w < 1e-320 {
        None
    } else {
        Some(Node { dm, w })
    }
}

fn node_cache() -> &'static NodeCache {
    static CACHE: OnceLock<NodeCache> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut levels = Vec::with_capacity(MAX_CACHED_LEVEL + 1);
        // level 0: integer t >= 1
        let mut level0 = Vec::new();
        let mut k = 1;
        while (k as f64) <= T_MAX {
            match node_at(k as f64) {
                Some(n) => level0.push(n),
                None => break,
            }
            k += 1;
        }
        levels.push(level0);
        for level in 1..=MAX_CACHED_LEVEL {
            let h = 0.5f64.powi(level as i32);
            let mut nodes = Vec::new();
            let mut j = 1u64;
            loop {
                let t = (2 * j - 1) as f64 * h;
                if t > T_MAX {
                    break;
                }
                match node_at(t) {
                    Some(n) => nodes.push(n),
                    None => break,
                }
                j += 1;
            }
            levels.push(nodes);
        }
        NodeCache { center_w: std::f64::consts::FRAC_PI_2, levels }
    })
}

/// Core loop: integrates a vector-valued integrand over one segment.
/// Accumulates into `acc` and returns the error estimate.
fn segment_vec<F>(
    f: &F,
    dim: usize,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
    acc: &mut [f64],
) -> Result<f64>
where
    F: Fn(&SegmentCtx, &mut [f64]) + ?Sized,
{
    let cache = node_cache();
    let half = 0.5 * (hi - lo);
    let width = hi - lo;
    let mut sums = vec![0.0; dim];
    let mut buf = vec![0.0; dim];
    let mut prev = vec![f64::NAN; dim];
    let mut level_ok = false;
    let mut err_est = f64::INFINITY;

    let eval_into = |ctx: &SegmentCtx, w: f64, sums: &mut [f64], buf: &mut [f64]| {
        for b in buf.iter_mut() {
            *b = 0.0;
        }
        f(ctx, buf);
        for (s, b) in sums.iter_mut().zip(buf.iter()) {
            if b.is_finite() {
                *s += w * *b;
            }
        }
    };

    // center node t = 0
    let mid = lo + half;
    let ctx = SegmentCtx { lo, hi, x: mid, dl: half, dr: width - half };
    eval_into(&ctx, cache.center_w, &mut sums, &mut buf);

    let top_level = (spec.level_max as usize).min(MAX_CACHED_LEVEL);
    for level in 0..=top_level {
        for node in &cache.levels[level] {
            let d = half * node.dm;
            // node on the left half: x = lo + d
            let ctx_l = SegmentCtx { lo, hi, x: lo + d, dl: d, dr: width - d };
            eval_into(&ctx_l, node.w, &mut sums, &mut buf);
            // mirrored node on the right half: x = hi - d
            let ctx_r = SegmentCtx { lo, hi, x: hi - d, dl: width - d, dr: d };
            eval_into(&ctx_r, node.w, &mut sums, &mut buf);
        }
        let h = 0.5f64.powi(level as i32);
        let scale = sums.iter().fold(0.0f64, |m, s| m.max((h * half * s).abs()));
        let tol = spec.abs_tol.max(spec.rel_tol * scale);
        if level >= 2 {
            let delta = sums
                .iter()
                .zip(prev.iter())
                .fold(0.0f64, |m, (s, p)| m.max((h * half * s - p).abs()));
            err_est = delta;
            if delta <= tol {
                level_ok = true;
            }
        }
        for (p, s) in prev.iter_mut().zip(sums.iter()) {
            *p = h * half * s;
        }
        if level_ok {
            break;
        }
    }

    for (a, p) in acc.iter_mut().zip(prev.iter()) {
        *a += p;
    }
    if level_ok {
        Ok(err_est)
    } else {
        let best = prev.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        Err(Error::NoConvergence { value: best, err_est })
    }
}

/// Integrates a vector-valued integrand over an interval union.
pub fn integrate_union_vec<F>(
    f: &F,
    dim: usize,
    dom: &IntervalUnion,
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&SegmentCtx, &mut [f64]) + ?Sized,
{
    let mut acc = vec![0.0; dim];
    let mut err = 0.0;
    for &(lo, hi) in dom.segments() {
        err += segment_vec(f, dim, lo, hi, spec, &mut acc)?;
    }
    Ok((acc, err))
}

/// Integrates a scalar integrand that wants endpoint distances.
pub fn integrate_union_stable(
    f: impl Fn(&SegmentCtx) -> f64,
    dom: &IntervalUnion,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let g = move |ctx: &SegmentCtx, out: &mut [f64]| {
        out[0] = f(ctx);
    };
    let (v, e) = integrate_union_vec(&g, 1, dom, spec)?;
    Ok((v[0], e))
}

/// Integrates a plain scalar integrand over an interval union.
pub fn integrate_union(
    f: impl Fn(f64) -> f64,
    dom: &IntervalUnion,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    integrate_union_stable(|ctx| f(ctx.x), dom, spec)
}

/// Integrates a vector-valued integrand over a sliced planar region. The
/// integrand receives segment contexts for both coordinates, so weight
/// factors vanishing on any domain edge can be computed stably.
pub fn integrate_biv_vec<F>(
    f: &F,
    dim: usize,
    dom: &BivDomain,
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&SegmentCtx, &SegmentCtx, &mut [f64]) + ?Sized,
{
    // Inner integrals run an order tighter so their noise stays below the
    // outer convergence threshold.
    let inner_spec = QuadratureSpec {
        abs_tol: spec.abs_tol * 0.1,
        rel_tol: spec.rel_tol * 0.1,
        level_max: spec.level_max,
    };
    let inner_failure: std::cell::Cell<Option<Error>> = std::cell::Cell::new(None);
    let outer = |yctx: &SegmentCtx, out: &mut [f64]| {
        let x_dom = dom.x_support_of(yctx.x);
        let g = |xctx: &SegmentCtx, o: &mut [f64]| f(xctx, yctx, o);
        match integrate_union_vec(&g, dim, &x_dom, &inner_spec) {
            Ok((v, _)) => out.copy_from_slice(&v),
            Err(e) => {
                inner_failure.set(Some(e));
            }
        }
    };
    let result = integrate_union_vec(&outer, dim, &dom.y_support, spec);
    if let Some(e) = inner_failure.take() {
        return Err(e);
    }
    result
}

/// Integrates a plain scalar integrand over a sliced planar region.
pub fn integrate_biv(
    f: impl Fn(f64, f64) -> f64,
    dom: &BivDomain,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let g = move |xctx: &SegmentCtx, yctx: &SegmentCtx, out: &mut [f64]| {
        out[0] = f(xctx.x, yctx.x);
    };
    let (v, e) = integrate_biv_vec(&g, 1, dom, spec)?;
    Ok((v[0], e))
}
