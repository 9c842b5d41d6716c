//! Bath correlation kernels and the time-dependent master-equation
//! coefficients they generate.
//!
//! Units: ħ = k_B = 1, frequencies and temperature in the reference unit ω₀,
//! times in 1/ω₀. The bath correlation function is stationary,
//! α(τ) = η(τ) + iν(τ) with τ = t − s.
//!
//! Discrete baths are handled entirely in closed form. For the Ohmic
//! continuum every time integral is moved inside the frequency integral, so
//! each coefficient costs a single adaptive quadrature over ω ∈ [0, 40 ω_c].

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureConfig};

/// Frequency integrals are truncated at this multiple of the cutoff.
pub const OHMIC_TRUNCATION: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMode {
    pub coupling: f64,
    pub frequency: f64,
}

impl DiscreteMode {
    pub fn new(coupling: f64, frequency: f64) -> Result<Self> {
        if !coupling.is_finite() || coupling < 0.0 {
            return Err(Error::arg(format!(
                "mode coupling must be finite and >= 0, got {coupling}"
            )));
        }
        if !frequency.is_finite() || frequency <= 0.0 {
            return Err(Error::arg(format!(
                "mode frequency must be > 0, got {frequency}"
            )));
        }
        Ok(DiscreteMode {
            coupling,
            frequency,
        })
    }
}

/// J(ω) = η_c · ω · exp(−ω/ω_c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicSpectrum {
    pub coupling: f64,
    pub cutoff: f64,
}

impl OhmicSpectrum {
    pub fn new(coupling: f64, cutoff: f64) -> Result<Self> {
        if !coupling.is_finite() || coupling < 0.0 {
            return Err(Error::arg(format!(
                "Ohmic coupling must be finite and >= 0, got {coupling}"
            )));
        }
        if !cutoff.is_finite() || cutoff <= 0.0 {
            return Err(Error::arg(format!(
                "Ohmic cutoff must be > 0, got {cutoff}"
            )));
        }
        Ok(OhmicSpectrum { coupling, cutoff })
    }

    pub fn spectral_density(&self, omega: f64) -> f64 {
        self.coupling * omega * (-omega / self.cutoff).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    Discrete(Vec<DiscreteMode>),
    Ohmic(OhmicSpectrum),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BathModel {
    spectrum: Spectrum,
    temperature: f64,
    quadrature: QuadratureConfig,
}

impl BathModel {
    pub fn discrete(modes: Vec<DiscreteMode>, temperature: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::arg("a discrete bath needs at least one mode"));
        }
        Self::new(Spectrum::Discrete(modes), temperature)
    }

    pub fn ohmic(spectrum: OhmicSpectrum, temperature: f64) -> Result<Self> {
        Self::new(Spectrum::Ohmic(spectrum), temperature)
    }

    fn new(spectrum: Spectrum, temperature: f64) -> Result<Self> {
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(Error::arg(format!(
                "temperature must be finite and >= 0, got {temperature}"
            )));
        }
        Ok(BathModel {
            spectrum,
            temperature,
            quadrature: QuadratureConfig::default(),
        })
    }

    pub fn with_quadrature(mut self, cfg: QuadratureConfig) -> Self {
        self.quadrature = cfg;
        self
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(self.spectrum.clone(), temperature).map(|b| b.with_quadrature(self.quadrature))
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// coth(ω / 2T), exactly 1 at zero temperature.
    pub fn coth_factor(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            1.0
        } else {
            1.0 / (omega / (2.0 * self.temperature)).tanh()
        }
    }

    /// ω·coth(ω/2T), finite (= 2T) at ω = 0.
    fn omega_coth(&self, omega: f64) -> f64 {
        let t = self.temperature;
        if t == 0.0 {
            return omega;
        }
        let x = omega / (2.0 * t);
        let x_coth_x = if x.abs() < 1e-4 {
            1.0 + x * x / 3.0
        } else {
            x / x.tanh()
        };
        2.0 * t * x_coth_x
    }

    fn integrate_ohmic<F: Fn(f64) -> f64>(&self, spec: &OhmicSpectrum, f: F) -> Result<f64> {
        quadrature::integrate(f, 0.0, OHMIC_TRUNCATION * spec.cutoff, &self.quadrature)
    }
}

fn check_time(t: f64, what: &str) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::arg(format!(
            "{what} must be finite and >= 0, got {t}"
        )));
    }
    Ok(())
}

/// sin(ωt)/ω, equal to t at ω = 0.
fn sin_over_omega(omega: f64, t: f64) -> f64 {
    let x = omega * t;
    if x.abs() < 1e-6 {
        t * (1.0 - x * x / 6.0)
    } else {
        (x).sin() / omega
    }
}

/// (1 − cos ωt)/ω².
fn one_minus_cos_over_omega2(omega: f64, t: f64) -> f64 {
    let x = omega * t;
    if x.abs() < 1e-4 {
        t * t * (0.5 - x * x / 24.0)
    } else {
        let s = (0.5 * x).sin();
        2.0 * s * s / (omega * omega)
    }
}

/// ∫₀ᵗ τ cos(ωτ) dτ / 1 and ∫₀ᵗ τ sin(ωτ) dτ, as (cos moment, sin moment).
fn first_moments(omega: f64, t: f64) -> (f64, f64) {
    let x = omega * t;
    if x.abs() < 1e-3 {
        let t2 = t * t;
        let cos_m = t2 * (0.5 - x * x / 8.0);
        let sin_m = t2 * t * omega * (1.0 / 3.0 - x * x / 30.0);
        (cos_m, sin_m)
    } else {
        let (s, c) = x.sin_cos();
        let cos_m = t * s / omega - 2.0 * (0.5 * x).sin().powi(2) / (omega * omega);
        let sin_m = s / (omega * omega) - t * c / omega;
        (cos_m, sin_m)
    }
}

/// Real part of the bath correlation function, η(τ).
pub fn eta_kernel(bath: &BathModel, tau: f64) -> Result<f64> {
    check_time(tau, "kernel lag")?;
    match &bath.spectrum {
        Spectrum::Discrete(modes) => Ok(modes
            .iter()
            .map(|m| m.coupling.powi(2) * bath.coth_factor(m.frequency) * (m.frequency * tau).cos())
            .sum()),
        Spectrum::Ohmic(spec) => bath.integrate_ohmic(spec, |w| {
            spec.coupling * (-w / spec.cutoff).exp() * bath.omega_coth(w) * (w * tau).cos()
        }),
    }
}

/// Imaginary part of the bath correlation function, ν(τ). Independent of
/// temperature.
pub fn nu_kernel(bath: &BathModel, tau: f64) -> Result<f64> {
    check_time(tau, "kernel lag")?;
    match &bath.spectrum {
        Spectrum::Discrete(modes) => Ok(-modes
            .iter()
            .map(|m| m.coupling.powi(2) * (m.frequency * tau).sin())
            .sum::<f64>()),
        Spectrum::Ohmic(spec) => bath
            .integrate_ohmic(spec, |w| spec.spectral_density(w) * (w * tau).sin())
            .map(|v| -v),
    }
}

/// F(t) = ∫₀ᵗ α(τ) dτ.
pub fn coefficient_f(bath: &BathModel, t: f64) -> Result<C64> {
    check_time(t, "time")?;
    if t == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(C64::new(
        coefficient_f_re(bath, t)?,
        coefficient_f_im(bath, t)?,
    ))
}

fn coefficient_f_re(bath: &BathModel, t: f64) -> Result<f64> {
    match &bath.spectrum {
        Spectrum::Discrete(modes) => Ok(modes
            .iter()
            .map(|m| {
                m.coupling.powi(2) * bath.coth_factor(m.frequency) * (m.frequency * t).sin()
                    / m.frequency
            })
            .sum()),
        // J(ω)coth(ω/2T)·sin(ωt)/ω with J/ω = η_c e^{−ω/ω_c}.
        Spectrum::Ohmic(spec) => bath.integrate_ohmic(spec, |w| {
            spec.coupling * (-w / spec.cutoff).exp() * bath.omega_coth(w) * sin_over_omega(w, t)
        }),
    }
}

fn coefficient_f_im(bath: &BathModel, t: f64) -> Result<f64> {
    match &bath.spectrum {
        Spectrum::Discrete(modes) => Ok(-modes
            .iter()
            .map(|m| m.coupling.powi(2) * (1.0 - (m.frequency * t).cos()) / m.frequency)
            .sum::<f64>()),
        Spectrum::Ohmic(spec) => bath
            .integrate_ohmic(spec, |w| {
                spec.coupling * (-w / spec.cutoff).exp() * w * w * one_minus_cos_over_omega2(w, t)
            })
            .map(|v| -v),
    }
}

/// G(t) = κ ∫₀ᵗ α(τ) τ dτ. Exactly zero when κ = 0.
pub fn coefficient_g(bath: &BathModel, kappa: f64, t: f64) -> Result<C64> {
    check_time(t, "time")?;
    if kappa == 0.0 || t == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let (re, im) = match &bath.spectrum {
        Spectrum::Discrete(modes) => modes.iter().fold((0.0, 0.0), |(re, im), m| {
            let g2 = m.coupling.powi(2);
            let (cos_m, sin_m) = first_moments(m.frequency, t);
            (
                re + g2 * bath.coth_factor(m.frequency) * cos_m,
                im - g2 * sin_m,
            )
        }),
        Spectrum::Ohmic(spec) => {
            let weight = |w: f64| spec.coupling * (-w / spec.cutoff).exp();
            let re = bath.integrate_ohmic(spec, |w| {
                weight(w) * bath.omega_coth(w) * first_moments(w, t).0
            })?;
            let im = bath.integrate_ohmic(spec, |w| weight(w) * w * first_moments(w, t).1)?;
            (re, -im)
        }
    };
    Ok(C64::new(kappa * re, kappa * im))
}

/// Long-time limit Γ of F_R(t) for an Ohmic bath at T > 0, taken from the
/// low-frequency limit (π/2)·J(ω)coth(ω/2T) as ω → 0.
pub fn markov_rate(bath: &BathModel) -> Result<f64> {
    match &bath.spectrum {
        Spectrum::Discrete(_) => Err(Error::Unsupported(
            "markov_rate: a discrete bath has no long-time limit (F_R is quasi-periodic)".into(),
        )),
        Spectrum::Ohmic(_) if bath.temperature == 0.0 => Err(Error::Unsupported(
            "markov_rate: at T = 0 the Ohmic F_R(t) decays to zero and defines no rate".into(),
        )),
        Spectrum::Ohmic(spec) => Ok(0.5 * PI * spec.coupling * bath.omega_coth(0.0)),
    }
}

/// Sampled coefficients on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    step: f64,
    times: Vec<f64>,
    f_re: Vec<f64>,
    f_im: Vec<f64>,
    d: Vec<f64>,
    phi: Vec<f64>,
    g_re: Vec<f64>,
    g_im: Vec<f64>,
    kappa: f64,
}

/// Coefficient values at a single time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub f: C64,
    pub g: C64,
}

/// Running composite-Simpson integral of uniformly spaced samples.
///
/// Even indices use plain Simpson panels; odd indices add the 3-point
/// partial-panel rule h/12·(5f₀ + 8f₁ − f₂) to the preceding even value.
/// Requires an even number of intervals.
pub fn running_simpson(values: &[f64], step: f64) -> Vec<f64> {
    let n = values.len();
    assert!(
        n >= 3 && n % 2 == 1,
        "running_simpson needs an even number of intervals"
    );
    let mut out = vec![0.0; n];
    let mut i = 2;
    while i < n {
        out[i] = out[i - 2] + step / 3.0 * (values[i - 2] + 4.0 * values[i - 1] + values[i]);
        out[i - 1] =
            out[i - 2] + step / 12.0 * (5.0 * values[i - 2] + 8.0 * values[i - 1] - values[i]);
        i += 2;
    }
    out
}

/// Samples F, G and the memory integrals D = ∫F_R, Φ = ∫F_I.
///
/// `steps` counts grid intervals; an odd count is padded by one extra
/// sample past `t_max` so that Simpson panels tile the grid.
pub fn tabulate(
    bath: &BathModel,
    kappa: f64,
    t_max: f64,
    steps: usize,
) -> Result<CoefficientTable> {
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::arg(format!("t_max must be > 0, got {t_max}")));
    }
    if steps < 2 {
        return Err(Error::arg(format!("steps must be >= 2, got {steps}")));
    }
    if !kappa.is_finite() {
        return Err(Error::arg("kappa must be finite"));
    }
    let step = t_max / steps as f64;
    let intervals = steps + steps % 2;
    let times: Vec<f64> = (0..=intervals).map(|i| i as f64 * step).collect();

    let mut f_re = Vec::with_capacity(times.len());
    let mut f_im = Vec::with_capacity(times.len());
    for &t in &times {
        let f = coefficient_f(bath, t)?;
        f_re.push(f.re);
        f_im.push(f.im);
    }
    let (d, phi) = match &bath.spectrum {
        Spectrum::Discrete(modes) => {
            let d = times
                .iter()
                .map(|&t| {
                    modes
                        .iter()
                        .map(|m| {
                            m.coupling.powi(2)
                                * bath.coth_factor(m.frequency)
                                * one_minus_cos_over_omega2(m.frequency, t)
                        })
                        .sum()
                })
                .collect();
            let phi = times
                .iter()
                .map(|&t| {
                    -modes
                        .iter()
                        .map(|m| {
                            let w = m.frequency;
                            m.coupling.powi(2) * (t - (w * t).sin() / w) / w
                        })
                        .sum::<f64>()
                })
                .collect();
            (d, phi)
        }
        Spectrum::Ohmic(_) => (running_simpson(&f_re, step), running_simpson(&f_im, step)),
    };
    let mut g_re = Vec::with_capacity(times.len());
    let mut g_im = Vec::with_capacity(times.len());
    for &t in &times {
        let g = coefficient_g(bath, kappa, t)?;
        g_re.push(g.re);
        g_im.push(g.im);
    }
    Ok(CoefficientTable {
        step,
        times,
        f_re,
        f_im,
        d,
        phi,
        g_re,
        g_im,
        kappa,
    })
}

impl CoefficientTable {
    /// Builds a table from user-supplied F and G samples on a uniform grid
    /// starting at t = 0. D and Φ are accumulated by running Simpson.
    pub fn from_samples(step: f64, f: &[C64], g: &[C64], kappa: f64) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::arg(format!("grid step must be > 0, got {step}")));
        }
        if f.len() != g.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} F samples vs {} G samples",
                f.len(),
                g.len()
            )));
        }
        if f.len() < 3 || f.len() % 2 == 0 {
            return Err(Error::arg(
                "coefficient samples must cover an even number (>= 2) of intervals",
            ));
        }
        let f_re: Vec<f64> = f.iter().map(|z| z.re).collect();
        let f_im: Vec<f64> = f.iter().map(|z| z.im).collect();
        Ok(CoefficientTable {
            step,
            times: (0..f.len()).map(|i| i as f64 * step).collect(),
            d: running_simpson(&f_re, step),
            phi: running_simpson(&f_im, step),
            f_re,
            f_im,
            g_re: g.iter().map(|z| z.re).collect(),
            g_im: g.iter().map(|z| z.im).collect(),
            kappa,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn f_re(&self) -> &[f64] {
        &self.f_re
    }

    pub fn f_im(&self) -> &[f64] {
        &self.f_im
    }

    /// D(t) = ∫₀ᵗ F_R(s) ds at each grid time.
    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// Φ(t) = ∫₀ᵗ F_I(s) ds at each grid time.
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn g_re(&self) -> &[f64] {
        &self.g_re
    }

    pub fn g_im(&self) -> &[f64] {
        &self.g_im
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().expect("table is never empty")
    }

    /// F and G at an arbitrary time inside the grid, by 4-point Lagrange
    /// interpolation (3-point on the smallest grids).
    pub fn interpolate(&self, t: f64) -> Coefficients {
        let n = self.times.len();
        let mut u = (t / self.step).clamp(0.0, (n - 1) as f64);
        if (u - u.round()).abs() < 1e-9 {
            u = u.round();
        }
        let width = n.min(4);
        let cell = (u.floor() as usize).min(n - 2);
        let start = cell.saturating_sub(1).min(n - width);
        let x = u - start as f64;
        let weights: [f64; 4] = if width == 4 {
            [
                -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0,
                x * (x - 2.0) * (x - 3.0) / 2.0,
                -x * (x - 1.0) * (x - 3.0) / 2.0,
                x * (x - 1.0) * (x - 2.0) / 6.0,
            ]
        } else {
            [
                (x - 1.0) * (x - 2.0) / 2.0,
                -x * (x - 2.0),
                x * (x - 1.0) / 2.0,
                0.0,
            ]
        };
        let eval =
            |samples: &[f64]| -> f64 { (0..width).map(|k| weights[k] * samples[start + k]).sum() };
        Coefficients {
            f: C64::new(eval(&self.f_re), eval(&self.f_im)),
            g: C64::new(eval(&self.g_re), eval(&self.g_im)),
        }
    }
}
