//! Poisson kernel, harmonic extension to the unit disk, and the analytic-side
//! norms: Hardy means, BMOA and its weak variant, the analytic atomic norm
//! `∫∫|F'|`, and the derivative-bound ratio.
//!
//! Boundary data lives on the torus grid; all disk-side values come from
//! quadrature against the kernels over the boundary cells (the uniform rule,
//! which is the trapezoid rule for periodic integrands and spectrally
//! accurate). Field sweeps are data-parallel over `(r, θ)`; per-point
//! quadrature sums run in fixed index order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{CubeFamily, GridFunction};
use crate::maximal::{NormReport, Part, Witness};
use crate::num::{kahan_sum, Kahan};
use crate::par;

/// `P_r(θ) = (1 − r²) / (1 − 2r cos θ + r²)`, strictly positive for `r < 1`.
pub fn poisson_kernel(r: f64, theta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidParam(format!(
            "poisson kernel needs 0 <= r < 1, got {r}"
        )));
    }
    Ok((1.0 - r * r) / (1.0 - 2.0 * r * theta.cos() + r * r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct C {
    re: f64,
    im: f64,
}

impl C {
    fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    fn mul(self, o: C) -> C {
        C::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    fn div(self, o: C) -> C {
        let d = o.re * o.re + o.im * o.im;
        C::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }

    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn require_torus(f: &GridFunction) -> Result<()> {
    if f.dim() != 1 || !f.is_torus() {
        return Err(Error::NotTorus);
    }
    Ok(())
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InvalidParam("need at least one radius".into()));
    }
    for &r in radii {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidParam(format!(
                "radii must satisfy 0 <= r < 1, got {r}"
            )));
        }
    }
    Ok(())
}

/// Uniformly spaced radii `0 = r_0 < … < r_{count−1} = r_max`.
pub fn radial_grid(count: usize, r_max: f64) -> Result<Vec<f64>> {
    if count < 1 || !(0.0..1.0).contains(&r_max) {
        return Err(Error::InvalidParam(format!(
            "radial grid needs count >= 1 and 0 <= r_max < 1, got {count}, {r_max}"
        )));
    }
    if count == 1 {
        return Ok(vec![0.0]);
    }
    Ok((0..count)
        .map(|i| r_max * i as f64 / (count - 1) as f64)
        .collect())
}

/// Real harmonic extension on a radial grid; values are row-major over
/// `(radius, angle)` with angles at the boundary cell midpoints.
#[derive(Debug, Clone)]
pub struct PoissonField {
    pub radii: Vec<f64>,
    pub n_theta: usize,
    pub values: Vec<f64>,
    pub boundary: GridFunction,
}

impl PoissonField {
    pub fn value(&self, ri: usize, ti: usize) -> f64 {
        self.values[ri * self.n_theta + ti]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(r, θ, value)` rows for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,theta,value\n");
        for (ri, &r) in self.radii.iter().enumerate() {
            for ti in 0..self.n_theta {
                let theta = self.boundary.axis(0).midpoint(ti);
                out.push_str(&format!("{r},{theta},{}\n", self.value(ri, ti)));
            }
        }
        out
    }
}

/// Complex-valued field (analytic completion), stored as real pairs.
#[derive(Debug, Clone)]
pub struct AnalyticField {
    pub radii: Vec<f64>,
    pub n_theta: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub boundary: GridFunction,
}

impl AnalyticField {
    pub fn modulus(&self, ri: usize, ti: usize) -> f64 {
        let idx = ri * self.n_theta + ti;
        self.re[idx].hypot(self.im[idx])
    }
}

/// `F(re^{iθ}) = (1/2π) ∫ P_r(θ − ξ) f(ξ) dλ(ξ)` over the radial grid.
pub fn extend(f: &GridFunction, radii: &[f64]) -> Result<PoissonField> {
    require_torus(f)?;
    check_radii(radii)?;
    let n = f.n(0);
    let mesh = f.mesh(0);
    let axis = *f.axis(0);
    let vals = f.values().to_vec();
    let n_points = radii.len() * n;
    let radii_owned = radii.to_vec();
    let values = par::map_collect(n_points, |idx| {
        let r = radii_owned[idx / n];
        let theta = axis.midpoint(idx % n);
        let mut acc = Kahan::new();
        for (k, &fv) in vals.iter().enumerate() {
            let xi = axis.midpoint(k);
            let p = (1.0 - r * r) / (1.0 - 2.0 * r * (theta - xi).cos() + r * r);
            acc.add(p * fv);
        }
        acc.value() * mesh / std::f64::consts::TAU
    });
    Ok(PoissonField {
        radii: radii_owned,
        n_theta: n,
        values,
        boundary: f.clone(),
    })
}

/// Analytic completion through the Herglotz kernel
/// `(1 + e^{-iξ}z) / (1 − e^{-iξ}z)`; its real part is the Poisson integral.
pub fn extend_analytic(f: &GridFunction, radii: &[f64]) -> Result<AnalyticField> {
    require_torus(f)?;
    check_radii(radii)?;
    let n = f.n(0);
    let mesh = f.mesh(0);
    let axis = *f.axis(0);
    let vals = f.values().to_vec();
    let n_points = radii.len() * n;
    let radii_owned = radii.to_vec();
    let eval = |idx: usize| -> C {
        let r = radii_owned[idx / n];
        let theta = axis.midpoint(idx % n);
        let z = C::new(r * theta.cos(), r * theta.sin());
        let mut re = Kahan::new();
        let mut im = Kahan::new();
        for (k, &fv) in vals.iter().enumerate() {
            let xi = axis.midpoint(k);
            let e = C::new(xi.cos(), -xi.sin());
            let w = e.mul(z);
            let h = C::new(1.0 + w.re, w.im).div(C::new(1.0 - w.re, -w.im));
            re.add(h.re * fv);
            im.add(h.im * fv);
        }
        C::new(
            re.value() * mesh / std::f64::consts::TAU,
            im.value() * mesh / std::f64::consts::TAU,
        )
    };
    let re = par::map_collect(n_points, |idx| eval(idx).re);
    let im = par::map_collect(n_points, |idx| eval(idx).im);
    Ok(AnalyticField {
        radii: radii_owned,
        n_theta: n,
        re,
        im,
        boundary: f.clone(),
    })
}

/// `F'(z) = (1/2π) ∫ 2e^{-iξ} / (1 − e^{-iξ}z)² f(ξ) dλ(ξ)` at one point.
fn f_prime_at(axis: &crate::grid::AxisSpec, vals: &[f64], mesh: f64, r: f64, theta: f64) -> C {
    let z = C::new(r * theta.cos(), r * theta.sin());
    let mut re = Kahan::new();
    let mut im = Kahan::new();
    for (k, &fv) in vals.iter().enumerate() {
        let xi = axis.midpoint(k);
        let e = C::new(xi.cos(), -xi.sin());
        let w = e.mul(z);
        let denom = C::new(1.0 - w.re, -w.im);
        let kern = C::new(2.0 * e.re, 2.0 * e.im).div(denom.mul(denom));
        re.add(kern.re * fv);
        im.add(kern.im * fv);
    }
    C::new(
        re.value() * mesh / std::f64::consts::TAU,
        im.value() * mesh / std::f64::consts::TAU,
    )
}

/// `sup_r ((1/2π) ∫ |F(re^{iθ})|^p dθ)^{1/p}` over the field's radial grid.
pub fn hardy_norm(field: &AnalyticField, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "hardy norm needs p > 0, got {p}"
        )));
    }
    let mesh = field.boundary.mesh(0);
    let mut best = 0.0f64;
    for ri in 0..field.radii.len() {
        let mean = kahan_sum((0..field.n_theta).map(|ti| field.modulus(ri, ti).powf(p))) * mesh
            / std::f64::consts::TAU;
        best = best.max(mean.powf(1.0 / p));
    }
    Ok(best)
}

/// Per-radius `L^p` means, for monotonicity checks.
pub fn hardy_radial_means(field: &AnalyticField, p: f64) -> Result<Vec<f64>> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "hardy norm needs p > 0, got {p}"
        )));
    }
    let mesh = field.boundary.mesh(0);
    Ok((0..field.radii.len())
        .map(|ri| {
            (kahan_sum((0..field.n_theta).map(|ti| field.modulus(ri, ti).powf(p))) * mesh
                / std::f64::consts::TAU)
                .powf(1.0 / p)
        })
        .collect())
}

fn bmoa_norm_impl(f: &GridFunction, radii: &[f64], weak: bool) -> Result<NormReport> {
    require_torus(f)?;
    check_radii(radii)?;
    let field = extend(f, radii)?;
    let n = f.n(0);
    let mesh = f.mesh(0);
    let axis = *f.axis(0);
    let vals = f.values().to_vec();
    let f0 = f.mean();
    let n_points = radii.len() * n;
    let radii_owned = radii.to_vec();
    let osc = par::map_collect(n_points, |idx| {
        let r = radii_owned[idx / n];
        let theta = axis.midpoint(idx % n);
        let center = field.value(idx / n, idx % n);
        let mut acc = Kahan::new();
        for (k, &fv) in vals.iter().enumerate() {
            let xi = axis.midpoint(k);
            let p = (1.0 - r * r) / (1.0 - 2.0 * r * (theta - xi).cos() + r * r);
            let integrand = if weak {
                fv - center
            } else {
                (fv - center).abs()
            };
            acc.add(p * integrand);
        }
        let mean = acc.value() * mesh / std::f64::consts::TAU;
        if weak {
            mean.abs()
        } else {
            mean
        }
    });
    let (idx, sup) = par::argmax(n_points, |i| osc[i]).expect("field is nonempty");
    let name = if weak { "bmoa_weak" } else { "bmoa" };
    Ok(NormReport {
        name: name.into(),
        value: f0.abs() + sup,
        parts: vec![
            Part {
                name: "center".into(),
                value: f0.abs(),
                witness: None,
            },
            Part {
                name: "oscillation".into(),
                value: sup,
                witness: Some(Witness::RTheta {
                    r_index: idx / n,
                    theta_index: idx % n,
                }),
            },
        ],
        convention: if weak {
            // The kernel reproduces its own mean, so the weak integrand is
            // zero up to quadrature; the norm collapses to |F(0)|.
            "collapses-to-center"
        } else {
            "kernel-weighted"
        },
        family: CubeFamily::All,
    })
}

/// `|F(0)| + sup_{r,θ} (1/2π)∫ P_r(θ−ξ) |f(ξ) − F(re^{iθ})| dλ`.
pub fn bmoa_norm(f: &GridFunction, radii: &[f64]) -> Result<NormReport> {
    bmoa_norm_impl(f, radii, false)
}

/// Weak variant with the integral inside the absolute value. Identically
/// `|F(0)|` in exact arithmetic by the reproducing property; reported as
/// such.
pub fn bmoa_weak_norm(f: &GridFunction, radii: &[f64]) -> Result<NormReport> {
    bmoa_norm_impl(f, radii, true)
}

/// Configuration for the `∫∫|F'|` quadrature.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct B1aConfig {
    /// Radial truncation; the untruncated display integrates to `r = 1`.
    pub r_max: f64,
    /// Composite-midpoint nodes in `r`.
    pub radial_nodes: usize,
    /// Uniform nodes in `θ` for the outer integral (the inner quadrature
    /// always uses the boundary cells).
    pub theta_nodes: usize,
}

impl Default for B1aConfig {
    fn default() -> Self {
        Self {
            r_max: 0.999,
            radial_nodes: 256,
            theta_nodes: 512,
        }
    }
}

/// `∫_0^{r_max} ∫_{-π}^{π} |F'(z)| dθ dr` with the truncation reported.
#[derive(Debug, Clone, Serialize)]
pub struct B1aReport {
    pub value: f64,
    pub r_max: f64,
    pub radial_nodes: usize,
    pub theta_nodes: usize,
}

pub fn b1a_norm(f: &GridFunction, cfg: B1aConfig) -> Result<B1aReport> {
    require_torus(f)?;
    if !(0.0 < cfg.r_max && cfg.r_max < 1.0) {
        return Err(Error::InvalidParam(format!(
            "b1a needs 0 < r_max < 1, got {}",
            cfg.r_max
        )));
    }
    if cfg.radial_nodes == 0 || cfg.theta_nodes == 0 {
        return Err(Error::InvalidParam("b1a needs at least one node".into()));
    }
    let axis = *f.axis(0);
    let mesh = f.mesh(0);
    let vals = f.values().to_vec();
    let dr = cfg.r_max / cfg.radial_nodes as f64;
    let dtheta = std::f64::consts::TAU / cfg.theta_nodes as f64;
    let n_points = cfg.radial_nodes * cfg.theta_nodes;
    let moduli = par::map_collect(n_points, |idx| {
        let r = (idx / cfg.theta_nodes) as f64 * dr + dr / 2.0;
        let theta = (idx % cfg.theta_nodes) as f64 * dtheta + dtheta / 2.0;
        f_prime_at(&axis, &vals, mesh, r, theta).abs()
    });
    Ok(B1aReport {
        value: kahan_sum(moduli) * dr * dtheta,
        r_max: cfg.r_max,
        radial_nodes: cfg.radial_nodes,
        theta_nodes: cfg.theta_nodes,
    })
}

/// `max_θ |F'(re^{iθ})| / ‖f‖_{L¹(𝕋)}` at a fixed radius; measures the
/// radius-dependent constant in the derivative bound, never asserts it.
pub fn fprime_bound_ratio(f: &GridFunction, r: f64) -> Result<f64> {
    require_torus(f)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidParam(format!(
            "fprime ratio needs 0 <= r < 1, got {r}"
        )));
    }
    let mesh = f.mesh(0);
    let l1 = kahan_sum(f.values().iter().map(|v| v.abs())) * mesh;
    if l1 == 0.0 {
        return Ok(0.0);
    }
    let axis = *f.axis(0);
    let vals = f.values().to_vec();
    let n = f.n(0);
    let (_, sup) = par::argmax(n, |ti| {
        f_prime_at(&axis, &vals, mesh, r, axis.midpoint(ti)).abs()
    })
    .expect("boundary is nonempty");
    Ok(sup / l1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn kernel_examples() {
        for theta in [0.0, 0.5, 2.0, -1.0] {
            assert!((poisson_kernel(0.0, theta).unwrap() - 1.0).abs() < 1e-15);
        }
        for r in [0.1, 0.5, 0.9] {
            let expected = (1.0 + r) / (1.0 - r);
            assert!((poisson_kernel(r, 0.0).unwrap() - expected).abs() < 1e-12);
            for theta in [0.3, 1.0, 3.0] {
                assert!(poisson_kernel(r, theta).unwrap() > 0.0);
            }
        }
        assert!(poisson_kernel(1.0, 0.0).is_err());
        assert!(poisson_kernel(-0.1, 0.0).is_err());
    }

    #[test]
    fn kernel_normalization_by_quadrature() {
        // (1/2π) ∫ P_r dθ = 1: uniform rule over 4096 nodes.
        let n = 4096;
        let mesh = TAU / n as f64;
        for r in [0.0, 0.5, 0.9, 0.99] {
            let sum = kahan_sum((0..n).map(|j| {
                let theta = (j as f64 + 0.5) * mesh;
                poisson_kernel(r, theta).unwrap()
            })) * mesh
                / TAU;
            assert!((sum - 1.0).abs() < 1e-9, "r = {r}: {sum}");
        }
    }

    #[test]
    fn extend_constant_and_modes() {
        let one = GridFunction::new_torus(vec![1.0; 256]).unwrap();
        let radii = radial_grid(5, 0.9).unwrap();
        let field = extend(&one, &radii).unwrap();
        for v in &field.values {
            assert!((v - 1.0).abs() < 1e-10);
        }

        // cos kθ ↦ r^k cos kθ and sin kθ ↦ r^k sin kθ.
        for k in [1u32, 3] {
            for sin in [false, true] {
                let f = GridFunction::from_fn_torus(512, |t| {
                    let arg = k as f64 * t;
                    if sin {
                        arg.sin()
                    } else {
                        arg.cos()
                    }
                })
                .unwrap();
                let field = extend(&f, &radii).unwrap();
                for (ri, &r) in radii.iter().enumerate() {
                    for ti in (0..512).step_by(37) {
                        let theta = f.axis(0).midpoint(ti);
                        let arg = k as f64 * theta;
                        let expected = r.powi(k as i32) * if sin { arg.sin() } else { arg.cos() };
                        assert!(
                            (field.value(ri, ti) - expected).abs() < 1e-8,
                            "k={k} sin={sin} r={r} theta={theta}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn extend_center_is_mean_and_max_principle() {
        let f = GridFunction::from_fn_torus(128, |t| 0.3 + t.sin() - (2.0 * t).cos()).unwrap();
        let radii = radial_grid(4, 0.95).unwrap();
        let field = extend(&f, &radii).unwrap();
        let mean = f.mean();
        for ti in 0..128 {
            assert!((field.value(0, ti) - mean).abs() < 1e-12);
        }
        assert!(field.max_abs() <= f.max_abs() + 1e-6);
    }

    #[test]
    fn extend_is_linear() {
        let f = GridFunction::from_fn_torus(64, |t| t.cos()).unwrap();
        let g = GridFunction::from_fn_torus(64, |t| (3.0 * t).sin() - 0.5).unwrap();
        let combo = GridFunction::linear_combine(2.0, &f, -1.5, &g).unwrap();
        let radii = radial_grid(3, 0.8).unwrap();
        let ff = extend(&f, &radii).unwrap();
        let fg = extend(&g, &radii).unwrap();
        let fc = extend(&combo, &radii).unwrap();
        for i in 0..fc.values.len() {
            let expected = 2.0 * ff.values[i] - 1.5 * fg.values[i];
            assert!((fc.values[i] - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn analytic_completion_of_cos_is_z() {
        let f = GridFunction::from_fn_torus(512, f64::cos).unwrap();
        let radii = radial_grid(4, 0.9).unwrap();
        let field = extend_analytic(&f, &radii).unwrap();
        for (ri, &r) in radii.iter().enumerate() {
            for ti in (0..512).step_by(61) {
                let theta = f.axis(0).midpoint(ti);
                let idx = ri * 512 + ti;
                assert!((field.re[idx] - r * theta.cos()).abs() < 1e-8);
                assert!((field.im[idx] - r * theta.sin()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn hardy_norm_examples() {
        let c = GridFunction::new_torus(vec![-2.5; 512]).unwrap();
        let radii = radial_grid(4, 0.9).unwrap();
        let field = extend_analytic(&c, &radii).unwrap();
        assert!((hardy_norm(&field, 1.0).unwrap() - 2.5).abs() < 1e-10);
        assert!((hardy_norm(&field, 2.0).unwrap() - 2.5).abs() < 1e-10);

        // F(z) = z: the L² mean at radius r is r, so the sup is r_max.
        let f = GridFunction::from_fn_torus(512, f64::cos).unwrap();
        let field = extend_analytic(&f, &radii).unwrap();
        assert!((hardy_norm(&field, 2.0).unwrap() - 0.9).abs() < 1e-8);
        let means = hardy_radial_means(&field, 2.0).unwrap();
        for w in means.windows(2) {
            assert!(w[1] >= w[0] - 1e-10);
        }
        assert!(hardy_norm(&field, 0.0).is_err());
    }

    #[test]
    fn bmoa_examples() {
        let radii = radial_grid(4, 0.9).unwrap();
        let c = GridFunction::new_torus(vec![1.75; 512]).unwrap();
        let strong = bmoa_norm(&c, &radii).unwrap();
        assert!((strong.value - 1.75).abs() < 1e-9);
        let weak = bmoa_weak_norm(&c, &radii).unwrap();
        assert!((weak.value - 1.75).abs() < 1e-9);

        // cos θ: zero center plus a positive oscillation part.
        let f = GridFunction::from_fn_torus(256, f64::cos).unwrap();
        let strong = bmoa_norm(&f, &radii).unwrap();
        assert!(strong.part("center").unwrap().value.abs() < 1e-12);
        assert!(strong.part("oscillation").unwrap().value > 0.1);

        // Weak norm collapses to |mean| by the reproducing property.
        let g = GridFunction::from_fn_torus(256, |t| 0.4 + t.sin() - (3.0 * t).cos()).unwrap();
        let weak = bmoa_weak_norm(&g, &radii).unwrap();
        assert!((weak.value - g.mean().abs()).abs() < 1e-6);
    }

    #[test]
    fn b1a_norm_examples() {
        let c = GridFunction::new_torus(vec![3.0; 256]).unwrap();
        let cfg = B1aConfig {
            r_max: 0.9,
            radial_nodes: 64,
            theta_nodes: 128,
        };
        assert!(b1a_norm(&c, cfg).unwrap().value < 1e-9);

        // f = cos θ: F' ≡ 1 on the disk, so the integral is 2π·r_max.
        let f = GridFunction::from_fn_torus(512, f64::cos).unwrap();
        let r = b1a_norm(&f, cfg).unwrap();
        assert!(
            (r.value - TAU * 0.9).abs() / (TAU * 0.9) < 1e-3,
            "{}",
            r.value
        );
    }

    #[test]
    fn fprime_kernel_matches_fourier_series_route() {
        // Independent oracle: for band-limited boundary data
        // f = Σ a_k cos kξ + b_k sin kξ the analytic completion is
        // F(z) = Σ (a_k − i b_k) z^k, so F'(z) = Σ k (a_k − i b_k) z^{k−1}.
        // The kernel quadrature must agree with the series algebra.
        let modes = [(1u32, 0.7, -0.3), (2, -0.4, 0.5), (5, 0.2, 0.1)];
        let f = GridFunction::from_fn_torus(128, |t| {
            modes
                .iter()
                .map(|&(k, a, b)| a * (k as f64 * t).cos() + b * (k as f64 * t).sin())
                .sum()
        })
        .unwrap();
        let series = |r: f64, theta: f64| -> (f64, f64) {
            let mut re = 0.0;
            let mut im = 0.0;
            for &(k, a, b) in &modes {
                let kf = k as f64;
                let p = r.powi(k as i32 - 1);
                let (s, c) = ((kf - 1.0) * theta).sin_cos();
                // k (a − i b) (cos + i sin)((k−1)θ) r^{k−1}
                re += kf * p * (a * c + b * s);
                im += kf * p * (a * s - b * c);
            }
            (re, im)
        };
        let axis = *f.axis(0);
        let mesh = f.mesh(0);
        for &r in &[0.0, 0.3, 0.7] {
            for &theta in &[0.1, 1.7, 4.0] {
                let quad = f_prime_at(&axis, f.values(), mesh, r, theta);
                let (re, im) = series(r, theta);
                assert!(
                    (quad.re - re).abs() < 1e-10 && (quad.im - im).abs() < 1e-10,
                    "r={r} theta={theta}: quadrature ({}, {}) vs series ({re}, {im})",
                    quad.re,
                    quad.im
                );
            }
        }
    }

    #[test]
    fn hardy_means_match_parseval() {
        // F = c + a z has radial L² mean sqrt(c² + a² r²).
        let (c, a) = (0.4, 1.2);
        let f = GridFunction::from_fn_torus(512, |t| c + a * t.cos()).unwrap();
        let radii = radial_grid(4, 0.9).unwrap();
        let field = extend_analytic(&f, &radii).unwrap();
        let means = hardy_radial_means(&field, 2.0).unwrap();
        for (ri, &r) in radii.iter().enumerate() {
            let expected = (c * c + a * a * r * r).sqrt();
            assert!(
                (means[ri] - expected).abs() < 1e-8,
                "r={r}: {} vs {expected}",
                means[ri]
            );
        }
    }

    #[test]
    fn fprime_ratio_examples() {
        let zero = GridFunction::new_torus(vec![0.0; 64]).unwrap();
        assert_eq!(fprime_bound_ratio(&zero, 0.5).unwrap(), 0.0);

        // f = cos θ: |F'| = 1 everywhere and ‖f‖_L¹ = 4.
        let f = GridFunction::from_fn_torus(1024, f64::cos).unwrap();
        let ratio = fprime_bound_ratio(&f, 0.5).unwrap();
        assert!((ratio - 0.25).abs() < 1e-6, "{ratio}");

        // The ratio grows as r → 1.
        let r1 = fprime_bound_ratio(&f, 0.5).unwrap();
        let r2 = fprime_bound_ratio(&f, 0.9).unwrap();
        assert!(r2 >= r1 - 1e-12);
    }

    #[test]
    fn field_csv_has_header_and_rows() {
        let f = GridFunction::new_torus(vec![1.0; 4]).unwrap();
        let field = extend(&f, &[0.0, 0.5]).unwrap();
        let csv = field.to_csv();
        assert!(csv.starts_with("r,theta,value\n"));
        assert_eq!(csv.lines().count(), 1 + 8);
    }

    #[test]
    fn input_validation() {
        let interval = GridFunction::new_1d(0.0, 1.0, vec![1.0; 8]).unwrap();
        assert!(extend(&interval, &[0.5]).is_err());
        let t = GridFunction::new_torus(vec![1.0; 8]).unwrap();
        assert!(extend(&t, &[1.0]).is_err());
        assert!(extend(&t, &[]).is_err());
        assert!(b1a_norm(
            &t,
            B1aConfig {
                r_max: 1.0,
                ..Default::default()
            }
        )
        .is_err());
        assert!(fprime_bound_ratio(&t, 1.0).is_err());
    }
}
