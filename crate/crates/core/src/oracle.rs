//! Independent reference implementations used by tests and the CLI
//! `verify` command: an oscillation-aware adaptive quadrature for
//! Hankel-type integrals and long-series special-function references.
//!
//! Nothing in this module calls the fast special-function path in
//! [`crate::specfun`]; agreement between the two is evidence, not a
//! tautology. Kernel values are taken from the double-double ascending
//! series for arguments up to 30 and from a downward (Miller) recurrence
//! beyond that.

use crate::dd::Dd;
use crate::error::{check_nonnegative, Error, Result};
use crate::hankel::HankelOrder;

/// Largest argument for which the reference power series is used.
pub const REFERENCE_SERIES_MAX: f64 = 30.0;

/// Function selector for [`reference_specfun`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecFunName {
    J0,
    J1,
    H0,
    H1,
}

/// Reference value from a 60-term ascending power series carried in
/// double-double (compensated) arithmetic.
///
/// The branch structure is deliberately different from the fast path,
/// which switches to asymptotic expansions well below x = 30: here one
/// series covers the whole admissible range, so the two implementations
/// share no code on the region where the comparison is interesting.
pub fn reference_specfun(name: SpecFunName, x: f64) -> Result<f64> {
    check_nonnegative("reference_specfun", x)?;
    if x > REFERENCE_SERIES_MAX {
        return Err(Error::Domain(format!(
            "reference_specfun: x = {x} exceeds the series-safe range ({REFERENCE_SERIES_MAX})"
        )));
    }
    Ok(match name {
        SpecFunName::J0 => ref_j0_dd(x).value(),
        SpecFunName::J1 => ref_j1_dd(x).value(),
        SpecFunName::H0 => ref_h0_dd(x).value(),
        SpecFunName::H1 => ref_h1_dd(x).value(),
    })
}

const REF_TERMS: usize = 60;

fn ref_j0_dd(x: f64) -> Dd {
    // J0(x) = sum_k (-1)^k q^k / (k!)^2, q = (x/2)^2
    let half = Dd::from_f64(0.5 * x);
    let q = half.mul(half);
    let mut term = Dd::from_f64(1.0);
    let mut sum = term;
    for k in 1..=REF_TERMS {
        let kk = (k * k) as f64;
        term = term.mul(q).div_f64(-kk);
        sum = sum.add(term);
        if term.hi.abs() < 1e-24 * sum.hi.abs() {
            break;
        }
    }
    sum
}

fn ref_j1_dd(x: f64) -> Dd {
    // J1(x) = (x/2) sum_k (-1)^k q^k / (k! (k+1)!)
    let half = Dd::from_f64(0.5 * x);
    let q = half.mul(half);
    let mut term = Dd::from_f64(1.0);
    let mut sum = term;
    for k in 1..=REF_TERMS {
        let d = (k * (k + 1)) as f64;
        term = term.mul(q).div_f64(-d);
        sum = sum.add(term);
        if term.hi.abs() < 1e-24 * sum.hi.abs() {
            break;
        }
    }
    sum.mul(half)
}

fn ref_h0_dd(x: f64) -> Dd {
    // H0(x) = sum_k (-1)^k (x/2)^(2k+1) / Gamma(k+3/2)^2, first term 2x/pi
    let half = Dd::from_f64(0.5 * x);
    let q = half.mul(half);
    let mut term = Dd::from_f64(x).mul_f64(2.0).div(Dd::PI);
    let mut sum = term;
    for k in 1..=REF_TERMS {
        let h = k as f64 + 0.5;
        term = term.mul(q).div_f64(-(h * h));
        sum = sum.add(term);
        if term.hi.abs() < 1e-24 * sum.hi.abs() {
            break;
        }
    }
    sum
}

fn ref_h1_dd(x: f64) -> Dd {
    // H1(x) = sum_k (-1)^k (x/2)^(2k+2) / [Gamma(k+3/2) Gamma(k+5/2)],
    // first term 2x^2/(3 pi)
    let half = Dd::from_f64(0.5 * x);
    let q = half.mul(half);
    let mut term = Dd::from_f64(x)
        .mul(Dd::from_f64(x))
        .mul_f64(2.0)
        .div(Dd::PI.mul_f64(3.0));
    let mut sum = term;
    for k in 1..=REF_TERMS {
        let d = (k as f64 + 0.5) * (k as f64 + 1.5);
        term = term.mul(q).div_f64(-d);
        sum = sum.add(term);
        if term.hi.abs() < 1e-24 * sum.hi.abs() {
            break;
        }
    }
    sum
}

/// J0 and J1 by downward recurrence with Miller normalization
/// (J0 + 2*sum of even orders = 1). Used for kernel arguments beyond the
/// series-safe range; independent of the fast path's asymptotic branch.
pub fn bessel_j01_downward(x: f64) -> Result<(f64, f64)> {
    check_nonnegative("bessel_j01_downward", x)?;
    if x == 0.0 {
        return Ok((1.0, 0.0));
    }
    let start = (x + 15.0 * x.cbrt() + 40.0).ceil() as usize;
    let start = if start % 2 == 0 { start } else { start + 1 };

    let mut above = 0.0_f64; // J_{k+1}
    let mut current = 1e-300_f64; // J_start (arbitrary seed)
    let mut norm = 2.0 * current; // start is even and >= 2
    let mut j1 = 0.0_f64;
    for k in (1..=start).rev() {
        let below = (2.0 * k as f64 / x) * current - above;
        above = current;
        current = below;
        let idx = k - 1;
        if idx >= 2 && idx % 2 == 0 {
            norm += 2.0 * current;
        }
        if idx == 1 {
            j1 = current;
        }
        if current.abs() > 1e250 {
            current *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += current; // J_0 term
    Ok((current / norm, j1 / norm))
}

/// Kernel J_n used inside the quadrature oracle. Never touches the fast
/// path: dd series up to 30, Miller recurrence beyond.
pub(crate) fn kernel_j(order: HankelOrder, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x <= REFERENCE_SERIES_MAX {
        match order {
            HankelOrder::Zero => ref_j0_dd(x).value(),
            HankelOrder::One => ref_j1_dd(x).value(),
        }
    } else {
        let (j0, j1) = bessel_j01_downward(x).expect("x is finite and positive");
        match order {
            HankelOrder::Zero => j0,
            HankelOrder::One => j1,
        }
    }
}

/// Configuration of the adaptive panel quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub panels_per_oscillation: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
            panels_per_oscillation: 8,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Domain("abs_tol must be positive".into()));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Domain("rel_tol must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive".into()));
        }
        if self.panels_per_oscillation < 4 {
            return Err(Error::Domain(
                "panels_per_oscillation must be at least 4".into(),
            ));
        }
        Ok(())
    }
}

/// Reference Hankel-type integral: integral of g(r) * J_order(p r) over
/// [0, r_max].
///
/// The initial panelization resolves the kernel's oscillation (panel width
/// at most (2 pi / p) / panels_per_oscillation when p > 0); panels are then
/// halved adaptively, worst first, with the embedded Gauss rule providing
/// the error estimate.
pub fn quadrature_hankel<G>(
    g: G,
    r_max: f64,
    order: HankelOrder,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    cfg.validate()?;
    check_nonnegative("quadrature_hankel: p", p)?;
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::Domain(format!(
            "quadrature_hankel: upper limit {r_max} must be positive and finite"
        )));
    }
    let oscillations = r_max * p / (2.0 * std::f64::consts::PI);
    let init = initial_panels(oscillations, cfg.panels_per_oscillation);
    let f = |r: f64| g(r) * kernel_j(order, p * r);
    adaptive_panels(&f, 0.0, r_max, init, cfg).map(|(value, _)| value)
}

pub(crate) fn initial_panels(oscillations: f64, per_oscillation: usize) -> usize {
    let wanted = (oscillations * per_oscillation as f64).ceil();
    (wanted as usize).clamp(8, 4096)
}

/// Reference values for J and H beyond the series-safe range, from the
/// trigonometric integral representations evaluated with the same panel
/// quadrature. Valid for any finite x >= 0; used by the wide-range
/// cross-checks in the test suite.
pub fn reference_specfun_quadrature(name: SpecFunName, x: f64) -> Result<f64> {
    check_nonnegative("reference_specfun_quadrature", x)?;
    use std::f64::consts::{FRAC_PI_2, PI};
    let cfg = QuadratureConfig {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        ..QuadratureConfig::default()
    };
    let osc = x / (2.0 * PI);
    match name {
        SpecFunName::J0 => {
            // (1/pi) * integral over [0, pi] of cos(x sin t)
            let f = |t: f64| (x * t.sin()).cos();
            let n = initial_panels(osc, cfg.panels_per_oscillation);
            adaptive_panels(&f, 0.0, PI, n, &cfg).map(|(v, _)| v / PI)
        }
        SpecFunName::J1 => {
            // (1/pi) * integral over [0, pi] of cos(t - x sin t)
            let f = |t: f64| (t - x * t.sin()).cos();
            let n = initial_panels(osc + 1.0, cfg.panels_per_oscillation);
            adaptive_panels(&f, 0.0, PI, n, &cfg).map(|(v, _)| v / PI)
        }
        SpecFunName::H0 => {
            // (2/pi) * integral over [0, pi/2] of sin(x cos t)
            let f = |t: f64| (x * t.cos()).sin();
            let n = initial_panels(osc, cfg.panels_per_oscillation);
            adaptive_panels(&f, 0.0, FRAC_PI_2, n, &cfg).map(|(v, _)| 2.0 * v / PI)
        }
        SpecFunName::H1 => {
            // (2x/pi) * integral over [0, pi/2] of sin(x cos t) sin^2 t
            let f = |t: f64| (x * t.cos()).sin() * t.sin() * t.sin();
            let n = initial_panels(osc, cfg.panels_per_oscillation);
            adaptive_panels(&f, 0.0, FRAC_PI_2, n, &cfg).map(|(v, _)| 2.0 * x * v / PI)
        }
    }
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod machinery
// ---------------------------------------------------------------------------

// 15-point Kronrod abscissae on [-1, 1] (positive half) with the embedded
// 7-point Gauss rule; the classic QUADPACK dqk15 constants.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_84,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_95,
    0.417_959_183_673_469_4,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let eval = |t: f64| -> Result<f64> {
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::Evaluation(format!(
                "integrand returned non-finite value {v} at r = {t}"
            )));
        }
        Ok(v)
    };

    let fc = eval(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut samples = [0.0_f64; 15];
    samples[7] = fc;

    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).enumerate().take(7) {
        let dx = half * x;
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        samples[i] = f1;
        samples[14 - i] = f2;
        kronrod += w * (f1 + f2);
        res_abs += w * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (i, &w) in WGK.iter().enumerate().take(7) {
        res_asc += w * ((samples[i] - mean).abs() + (samples[14 - i] - mean).abs());
    }

    let value = kronrod * half;
    let raw_err = ((kronrod - gauss) * half).abs();
    Ok(Panel {
        a,
        b,
        value,
        error: rescale_error(raw_err, res_abs * half.abs(), res_asc * half.abs()),
    })
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// Integrates f over [a, b]: `init` equal panels, then adaptive halving of
/// the worst panel until the summed error estimate meets the tolerance.
/// Returns (value, error bound).
pub(crate) fn adaptive_panels<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    init: usize,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let init = init.max(1);
    let mut panels = Vec::with_capacity(init + cfg.max_subdivisions / 4);
    let width = (b - a) / init as f64;
    for i in 0..init {
        let pa = a + i as f64 * width;
        let pb = if i + 1 == init { b } else { pa + width };
        panels.push(gk15(f, pa, pb)?);
    }

    let mut splits = 0;
    loop {
        let total_value: f64 = panels.iter().map(|p| p.value).sum();
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * total_value.abs());
        if total_error <= tol {
            return Ok((total_value, total_error));
        }
        if splits >= cfg.max_subdivisions {
            return Err(Error::Convergence {
                estimate: total_value,
                error_bound: total_error,
                message: format!("tolerance {tol:e} not reached after {splits} subdivisions"),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.error.total_cmp(&y.error))
            .map(|(i, _)| i)
            .expect("panel list is non-empty");
        let Panel { a: pa, b: pb, .. } = panels[worst];
        let mid = 0.5 * (pa + pb);
        panels[worst] = gk15(f, pa, mid)?;
        panels.push(gk15(f, mid, pb)?);
        splits += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn reference_trivia() {
        assert_eq!(reference_specfun(SpecFunName::J0, 0.0).unwrap(), 1.0);
        assert_eq!(reference_specfun(SpecFunName::J1, 0.0).unwrap(), 0.0);
        assert_eq!(reference_specfun(SpecFunName::H0, 0.0).unwrap(), 0.0);
        assert_eq!(reference_specfun(SpecFunName::H1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn reference_rejects_out_of_range() {
        assert!(matches!(
            reference_specfun(SpecFunName::J0, 31.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            reference_specfun(SpecFunName::J0, -1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            reference_specfun(SpecFunName::J0, f64::NAN),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn series_and_quadrature_representations_agree() {
        // Two genuinely different routes to the same four functions.
        for &x in &[0.5, 1.0, 5.0, 12.0, 25.0, 30.0] {
            for &name in &[
                SpecFunName::J0,
                SpecFunName::J1,
                SpecFunName::H0,
                SpecFunName::H1,
            ] {
                let series = reference_specfun(name, x).unwrap();
                let quad = reference_specfun_quadrature(name, x).unwrap();
                assert!(
                    (series - quad).abs() <= 1e-10 * series.abs().max(1.0),
                    "{name:?}({x}): series {series} vs quadrature {quad}"
                );
            }
        }
    }

    #[test]
    fn downward_recurrence_matches_series_at_handoff() {
        for &x in &[25.0, 28.0, 30.0] {
            let (j0, j1) = bessel_j01_downward(x).unwrap();
            let r0 = reference_specfun(SpecFunName::J0, x).unwrap();
            let r1 = reference_specfun(SpecFunName::J1, x).unwrap();
            assert!((j0 - r0).abs() < 1e-13, "J0({x}): {j0} vs {r0}");
            assert!((j1 - r1).abs() < 1e-13, "J1({x}): {j1} vs {r1}");
        }
    }

    #[test]
    fn quadrature_zero_integrand() {
        let v = quadrature_hankel(|_| 0.0, 1.0, HankelOrder::Zero, 3.0, &default_cfg()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn quadrature_linear_case_hits_known_antiderivative() {
        // integral over [0,1] of r*J0(r) dr = J1(1)
        let v = quadrature_hankel(|r| r, 1.0, HankelOrder::Zero, 1.0, &default_cfg()).unwrap();
        let j1_ref = reference_specfun(SpecFunName::J1, 1.0).unwrap();
        assert!((v - j1_ref).abs() < 1e-10, "{v} vs {j1_ref}");
    }

    #[test]
    fn quadrature_self_consistent_on_gaussian_example() {
        let g = |r: f64| r * r * (-0.4 * r * r).exp();
        let loose = QuadratureConfig {
            abs_tol: 1e-8,
            rel_tol: 1e-8,
            ..default_cfg()
        };
        let tight = QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            ..default_cfg()
        };
        let a = quadrature_hankel(g, 8.0, HankelOrder::One, 2.0, &loose).unwrap();
        let b = quadrature_hankel(g, 8.0, HankelOrder::One, 2.0, &tight).unwrap();
        assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    }

    #[test]
    fn quadrature_reports_nonconvergence_with_estimate() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-300,
            rel_tol: 1e-300,
            max_subdivisions: 4,
            ..default_cfg()
        };
        let out = quadrature_hankel(|r| r.sqrt().sin() * 17.3, 7.0, HankelOrder::Zero, 9.0, &cfg);
        match out {
            Err(Error::Convergence {
                estimate,
                error_bound,
                ..
            }) => {
                assert!(estimate.is_finite());
                assert!(error_bound > 0.0);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn quadrature_rejects_bad_inputs() {
        assert!(quadrature_hankel(|_| 1.0, -1.0, HankelOrder::Zero, 1.0, &default_cfg()).is_err());
        assert!(quadrature_hankel(|_| 1.0, 1.0, HankelOrder::Zero, -1.0, &default_cfg()).is_err());
        let bad = QuadratureConfig {
            abs_tol: 0.0,
            ..default_cfg()
        };
        assert!(quadrature_hankel(|_| 1.0, 1.0, HankelOrder::Zero, 1.0, &bad).is_err());
    }

    #[test]
    fn non_finite_integrand_is_an_evaluation_error() {
        let out = quadrature_hankel(
            |r| if r > 0.4 { f64::NAN } else { 1.0 },
            1.0,
            HankelOrder::Zero,
            1.0,
            &default_cfg(),
        );
        assert!(matches!(out, Err(Error::Evaluation(_))));
    }

    #[test]
    fn self_consistency_under_tolerance_halving() {
        // Fixed probe set: halving both tolerances moves the result by less
        // than the looser tolerance.
        let probes: [(&dyn Fn(f64) -> f64, f64, HankelOrder, f64); 5] = [
            (&|r: f64| (1.5 * r).sin() + 0.3, 2.0, HankelOrder::Zero, 0.7),
            (&|r: f64| r * (-r).exp(), 6.0, HankelOrder::One, 3.0),
            (&|r: f64| 1.0 / (1.0 + r * r), 4.0, HankelOrder::Zero, 11.0),
            (&|r: f64| r.powi(3) - r, 1.0, HankelOrder::One, 25.0),
            (&|r: f64| (0.5 * r).cos(), 3.0, HankelOrder::Zero, 40.0),
        ];
        for (g, r_max, order, p) in probes {
            let loose = QuadratureConfig {
                abs_tol: 1e-8,
                rel_tol: 1e-8,
                ..default_cfg()
            };
            let halved = QuadratureConfig {
                abs_tol: 5e-9,
                rel_tol: 5e-9,
                ..default_cfg()
            };
            let a = quadrature_hankel(g, r_max, order, p, &loose).unwrap();
            let b = quadrature_hankel(g, r_max, order, p, &halved).unwrap();
            assert!(
                (a - b).abs() < 1e-8,
                "order {order:?}, p {p}: {a} vs {b}"
            );
        }
    }
}
