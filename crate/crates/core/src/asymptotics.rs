//! Floating-point evaluation of the analytic bound functions behind the decay
//! rates: Lambert W, the one-, two- and three-variable bound functions, their
//! stationary points and grid maxima.
//!
//! Boundary values use `0^0 = 1` and `0 log 0 = 0`.

use std::f64::consts::E;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// `e * ln(b)` with `0 * ln 0 = 0`.
fn xlog(e: f64, b: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else {
        e * b.ln()
    }
}

/// Principal branch of `w e^w = x` for `x > 0`, by Halley iteration.
pub fn lambert_w(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("lambert_w needs a finite x > 0, got {x}"));
    }
    let mut w = if x < 1.0 { x / (1.0 + x) } else { x.ln() - x.ln().ln().max(0.0) * 0.5 };
    if !(w > 0.0) {
        w = 0.5;
    }
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        // Halley can overshoot below zero from a poor start; bisect toward 0 instead.
        let next = if next <= 0.0 { w / 2.0 } else { next };
        if (next - w).abs() <= 4.0 * f64::EPSILON * next.abs() {
            w = next;
            break;
        }
        w = next;
    }
    let residual = (w * w.exp() - x).abs();
    if residual > 1e-12 * x.max(1.0) {
        return Err(Error::Numeric(format!("lambert_w({x}) residual {residual:e}")));
    }
    Ok(w)
}

/// `W(1)`, the omega constant.
pub fn omega() -> f64 {
    lambert_w(1.0).expect("W(1) converges")
}

/// `x log(1/x - 1) + x` on `(0, 1)`.
pub fn f_single(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return domain(format!("f_single needs 0 < x < 1, got {x}"));
    }
    Ok(x * (1.0 / x - 1.0).ln() + x)
}

/// Limit of `log(G_n)/n`, equal to `Ω - 1`.
pub fn decay_rate_g() -> f64 {
    omega() - 1.0
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return domain(format!("{name} must lie in [0,1], got {v}"));
    }
    Ok(())
}

/// `x^{2(1-x)} / (1-x)^{2(1-x)}`.
pub fn f1(x: f64) -> Result<f64> {
    check_unit("x", x)?;
    Ok((xlog(2.0 * (1.0 - x), x) - xlog(2.0 * (1.0 - x), 1.0 - x)).exp())
}

/// `y^{1-2xy} / (e^{x(1+y)} (1-y)^{2x(1-y)})`.
pub fn f2(x: f64, y: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    Ok((xlog(1.0 - 2.0 * x * y, y) - x * (1.0 + y) - xlog(2.0 * x * (1.0 - y), 1.0 - y)).exp())
}

/// `-1 - y - 2(1-y) log(1-y) - 2y log y`.
pub fn f3(y: f64) -> Result<f64> {
    check_unit("y", y)?;
    Ok(-1.0 - y - xlog(2.0 * (1.0 - y), 1.0 - y) - xlog(2.0 * y, y))
}

/// `F(x, y) = F1(x) F2(x, y)` on the closed unit square.
pub fn f_two_var(x: f64, y: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    Ok(log_f_two_var(x, y).exp())
}

fn log_f_two_var(x: f64, y: f64) -> f64 {
    xlog(2.0 * (1.0 - x), x) + xlog(1.0 - 2.0 * x * y, y)
        - x * (1.0 + y)
        - xlog(2.0 * (1.0 - x), 1.0 - x)
        - xlog(2.0 * x * (1.0 - y), 1.0 - y)
}

/// `x^{1-x} y^{1-y} z^{1-2z} / (e^{x+y+z} (1-x)^{2(1-x)} (1-y)^{2(1-y)} (x-z)^{x-z} (y-z)^{y-z})`
/// for `x, y ∈ [0,1]`, `0 ≤ z ≤ min(x, y)`.
pub fn g_three_var(x: f64, y: f64, z: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    if !(z >= 0.0 && z <= x.min(y)) {
        return domain(format!("need 0 ≤ z ≤ min(x, y), got ({x}, {y}, {z})"));
    }
    Ok(log_g(x, y, z).exp())
}

fn log_g(x: f64, y: f64, z: f64) -> f64 {
    xlog(1.0 - x, x) + xlog(1.0 - y, y) + xlog(1.0 - 2.0 * z, z)
        - (x + y + z)
        - xlog(2.0 * (1.0 - x), 1.0 - x)
        - xlog(2.0 * (1.0 - y), 1.0 - y)
        - xlog(x - z, x - z)
        - xlog(y - z, y - z)
}

/// `1 / (1 + W(1/e))`, the maximiser of `F1`-type terms.
pub fn x0() -> f64 {
    1.0 / (1.0 + lambert_w(1.0 / E).expect("positive argument"))
}

/// `1 / (1 + W(e^{-1/2}))`.
pub fn y0() -> f64 {
    1.0 / (1.0 + lambert_w((-0.5f64).exp()).expect("positive argument"))
}

/// Root of `f` in `[lo, hi]`, given a sign change.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::Numeric(format!(
            "no sign change on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Maximiser of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// The stationary point `(α, α, γ)` of `G`: `α` solves
/// `eα/(eα² - e^{1/α}(1-α)²) + 2 log(e^{1/α}(1-α)² / (eα² - e^{1/α}(1-α)²)) = 1`
/// and `γ = α - e^{1/α}(1-α)²/(eα)`.
pub fn stationary_point_g() -> Result<(f64, f64)> {
    let equation = |a: f64| {
        let c = (1.0 / a).exp() * (1.0 - a).powi(2);
        let d = E * a * a - c;
        E * a / d + 2.0 * (c / d).ln() - 1.0
    };
    let alpha = bisect(equation, 0.5871, 0.999, 1e-15)?;
    let gamma = alpha - (1.0 / alpha).exp() * (1.0 - alpha).powi(2) / (E * alpha);
    Ok((alpha, gamma))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionId {
    F1d,
    F1,
    F2,
    F3,
    F2var,
    G3var,
}

/// Result of a grid scan, optionally followed by local refinement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEval {
    pub function_id: FunctionId,
    pub argmax: Vec<f64>,
    pub max_value: f64,
    pub grid_resolution: usize,
    pub refined: bool,
}

fn better(a: (f64, Vec<f64>), b: (f64, Vec<f64>)) -> (f64, Vec<f64>) {
    // NaN never wins; ties keep the first point.
    if b.0 > a.0 || a.0.is_nan() {
        b
    } else {
        a
    }
}

/// Maximum of `f_single` over `resolution` interior points `i/(resolution+1)`.
pub fn max_f_single(resolution: usize, refine: bool) -> BoundEval {
    let step = 1.0 / (resolution as f64 + 1.0);
    let (mut best, mut arg) = (1..=resolution)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * step;
            (f_single(x).unwrap_or(f64::NEG_INFINITY), vec![x])
        })
        .reduce(|| (f64::NEG_INFINITY, vec![]), better);
    if refine {
        let lo = (arg[0] - step).max(step * 0.5);
        let hi = (arg[0] + step).min(1.0 - step * 0.5);
        let (x, v) = golden_section_max(|x| f_single(x).unwrap_or(f64::NEG_INFINITY), lo, hi, 1e-14);
        if v > best {
            best = v;
            arg = vec![x];
        }
    }
    BoundEval {
        function_id: FunctionId::F1d,
        argmax: arg,
        max_value: best,
        grid_resolution: resolution,
        refined: refine,
    }
}

/// Maximum of `F3` over `(0, 1)`.
pub fn max_f3(resolution: usize, refine: bool) -> BoundEval {
    let step = 1.0 / (resolution as f64 + 1.0);
    let (mut best, mut arg) = (1..=resolution)
        .into_par_iter()
        .map(|i| {
            let y = i as f64 * step;
            (f3(y).unwrap_or(f64::NEG_INFINITY), vec![y])
        })
        .reduce(|| (f64::NEG_INFINITY, vec![]), better);
    if refine {
        let lo = (arg[0] - step).max(0.0);
        let hi = (arg[0] + step).min(1.0);
        let (y, v) = golden_section_max(|y| f3(y).unwrap_or(f64::NEG_INFINITY), lo, hi, 1e-14);
        if v > best {
            best = v;
            arg = vec![y];
        }
    }
    BoundEval {
        function_id: FunctionId::F3,
        argmax: arg,
        max_value: best,
        grid_resolution: resolution,
        refined: refine,
    }
}

/// Maximum of `F(x, y)` over the grid `{i/res, j/res}` covering `[0,1]²`.
pub fn max_f_two_var(resolution: usize, refine: bool) -> BoundEval {
    let res = resolution as f64;
    let (best, arg) = (0..=resolution)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / res;
            let mut row = (f64::NEG_INFINITY, vec![]);
            for j in 0..=resolution {
                let y = j as f64 / res;
                let v = log_f_two_var(x, y).exp();
                if v > row.0 {
                    row = (v, vec![x, y]);
                }
            }
            row
        })
        .reduce(|| (f64::NEG_INFINITY, vec![]), better);
    let mut out = (best, arg);
    if refine {
        let step = 1.0 / res;
        out = refine_coordinates(
            |p| log_f_two_var(p[0], p[1]).exp(),
            out,
            step,
            |_, _| (0.0, 1.0),
        );
    }
    BoundEval {
        function_id: FunctionId::F2var,
        argmax: out.1,
        max_value: out.0,
        grid_resolution: resolution,
        refined: refine,
    }
}

/// Maximum of `G` over `{(i, j, l)/res : l ≤ min(i, j)}`.
pub fn max_g_three_var(resolution: usize, refine: bool) -> BoundEval {
    let res = resolution as f64;
    let (best, arg) = (0..=resolution)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / res;
            let mut row = (f64::NEG_INFINITY, vec![]);
            for j in 0..=resolution {
                let y = j as f64 / res;
                for l in 0..=i.min(j) {
                    let z = l as f64 / res;
                    let v = log_g(x, y, z).exp();
                    if v > row.0 {
                        row = (v, vec![x, y, z]);
                    }
                }
            }
            row
        })
        .reduce(|| (f64::NEG_INFINITY, vec![]), better);
    let mut out = (best, arg);
    if refine {
        out = refine_coordinates(
            |p| log_g(p[0], p[1], p[2]).exp(),
            out,
            1.0 / res,
            |p, i| match i {
                2 => (0.0, p[0].min(p[1])),
                _ => (p[2], 1.0),
            },
        );
    }
    BoundEval {
        function_id: FunctionId::G3var,
        argmax: out.1,
        max_value: out.0,
        grid_resolution: resolution,
        refined: refine,
    }
}

/// Coordinate-wise golden-section sweeps within one grid step of the start;
/// `range(p, i)` bounds coordinate `i` given the others.
fn refine_coordinates(
    f: impl Fn(&[f64]) -> f64,
    start: (f64, Vec<f64>),
    step: f64,
    range: impl Fn(&[f64], usize) -> (f64, f64),
) -> (f64, Vec<f64>) {
    let (mut best, mut point) = start;
    for _ in 0..30 {
        let before = best;
        for i in 0..point.len() {
            let (lo, hi) = range(&point, i);
            let lo = lo.max(point[i] - step);
            let hi = hi.min(point[i] + step);
            if hi <= lo {
                continue;
            }
            let mut probe = point.clone();
            let (t, v) = golden_section_max(
                |t| {
                    probe[i] = t;
                    let v = f(&probe);
                    if v.is_nan() {
                        f64::NEG_INFINITY
                    } else {
                        v
                    }
                },
                lo,
                hi,
                1e-13,
            );
            if v > best {
                best = v;
                point[i] = t;
            }
        }
        if best - before <= 1e-15 {
            break;
        }
    }
    (best, point)
}

/// A constant compared with a printed bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketCheck {
    pub name: String,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub pass: bool,
}

impl BracketCheck {
    fn new(name: &str, value: f64, lower: Option<f64>, upper: Option<f64>) -> Self {
        let pass = lower.map_or(true, |l| value > l) && upper.map_or(true, |u| value < u);
        Self {
            name: name.into(),
            value,
            lower,
            upper,
            pass,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsConfig {
    pub single_resolution: usize,
    pub square_resolution: usize,
    pub simplex_resolution: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            single_resolution: 1_000_000,
            square_resolution: 2000,
            simplex_resolution: 300,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub omega: f64,
    pub decay_rate_g: f64,
    pub f_single_at_stationary: f64,
    pub x0: f64,
    pub f1_at_x0: f64,
    pub y0: f64,
    pub f2_at_half_y0: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub g_at_stationary: f64,
    pub f3_max_closed_form: f64,
    pub maxima: Vec<BoundEval>,
    pub checks: Vec<BracketCheck>,
}

/// Every constant with its printed bracket, plus the grid maxima.
pub fn bounds_report(config: BoundsConfig) -> Result<BoundsReport> {
    let omega = omega();
    let f_at = f_single(omega / (1.0 + omega))?;
    let x0 = x0();
    let f1_x0 = f1(x0)?;
    let y0 = y0();
    let f2_y0 = f2(0.5, y0)?;
    let (alpha, gamma) = stationary_point_g()?;
    let g_at = g_three_var(alpha, alpha, gamma)?;
    let f3_closed = 2.0 * (1.0 + 0.5f64.exp()).ln() - 2.0;

    let single = max_f_single(config.single_resolution, true);
    let f3_max = max_f3(config.single_resolution, true);
    let square = max_f_two_var(config.square_resolution, true);
    let simplex = max_g_three_var(config.simplex_resolution, true);

    let checks = vec![
        BracketCheck::new("omega", omega, Some(0.5671439 - 5e-8), Some(0.5671439 + 5e-8)),
        BracketCheck::new("f_single(omega/(1+omega)) - omega", f_at - omega, Some(-1e-9), Some(1e-9)),
        BracketCheck::new("decay_rate_g", omega - 1.0, None, Some(0.0)),
        BracketCheck::new("x0", x0, Some(0.78), None),
        BracketCheck::new("f1(x0)", f1_x0, None, Some(1.75)),
        BracketCheck::new("f2(1/2, y0)", f2_y0, None, Some(0.56)),
        BracketCheck::new("alpha", alpha, Some(0.68152), Some(0.68153)),
        BracketCheck::new("gamma", gamma, Some(0.44403), Some(0.44407)),
        BracketCheck::new("g(alpha, alpha, gamma)", g_at, None, Some(0.999)),
        BracketCheck::new("max f_single - omega", single.max_value - omega, None, Some(1e-6)),
        BracketCheck::new("max f3", f3_max.max_value, None, Some(0.0)),
        BracketCheck::new("max f(x, y)", square.max_value, None, Some(0.981)),
        BracketCheck::new("max g(x, y, z)", simplex.max_value, None, Some(1.0)),
    ];
    Ok(BoundsReport {
        omega,
        decay_rate_g: omega - 1.0,
        f_single_at_stationary: f_at,
        x0,
        f1_at_x0: f1_x0,
        y0,
        f2_at_half_y0: f2_y0,
        alpha,
        gamma,
        g_at_stationary: g_at,
        f3_max_closed_form: f3_closed,
        maxima: vec![single, f3_max, square, simplex],
        checks,
    })
}
