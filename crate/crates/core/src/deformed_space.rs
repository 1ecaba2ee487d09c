//! Kinematics of the γ-deformed space.
//!
//! A particle with mass `m(x) = m₀/(1 + γx)²` becomes a constant-mass
//! particle in the coordinate `η = ln(1 + γx)/γ`. Everything here is
//! expressed through that map: the mass function, the deformed derivative
//! `(1 + γx) d/dx`, the deformed plane waves and the deformed Fourier
//! transform, which is an ordinary Fourier transform in η.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{differentiate, Integrator, Interval};
use crate::profile::Space;
use crate::special::atanh_ratio;

/// Physical configuration of the deformed infinite well of width `2a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedWell {
    gamma_a: f64,
    a: f64,
    m0: f64,
    hbar: f64,
}

impl DeformedWell {
    /// Requires `|γa| < 1` so the singular point `-1/γ` stays outside the well.
    pub fn new(gamma_a: f64, a: f64, m0: f64, hbar: f64) -> Result<Self> {
        if !(gamma_a.is_finite() && gamma_a.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "deformation must satisfy |γa| < 1, got {gamma_a}"
            )));
        }
        for (name, v) in [("a", a), ("m0", m0), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            gamma_a,
            a,
            m0,
            hbar,
        })
    }

    /// Well in natural units: `a = m₀ = ħ = 1`.
    pub fn natural(gamma_a: f64) -> Result<Self> {
        Self::new(gamma_a, 1.0, 1.0, 1.0)
    }

    pub fn gamma_a(&self) -> f64 {
        self.gamma_a
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// γ, in inverse length units.
    pub fn gamma(&self) -> f64 {
        self.gamma_a / self.a
    }

    /// `x_d = -1/γ`, or `None` in the undeformed case.
    pub fn singular_point(&self) -> Option<f64> {
        (self.gamma_a != 0.0).then(|| -1.0 / self.gamma())
    }

    /// `ε₀ = ħ²π²/(8 m₀ a²)`, the undeformed ground-state energy.
    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.hbar * PI * PI / (8.0 * self.m0 * self.a * self.a)
    }

    /// `m₀/(1 + γx)²`.
    pub fn mass_at(&self, x: f64) -> Result<f64> {
        let u = 1.0 + self.gamma() * x;
        if u.abs() <= 4.0 * f64::EPSILON * (1.0 + (self.gamma() * x).abs()) {
            return Err(Error::SingularPoint { at: x });
        }
        Ok(self.m0 / (u * u))
    }

    fn check_forward(&self, x: f64) -> Result<f64> {
        let u = 1.0 + self.gamma() * x;
        if !(u > 0.0) {
            return Err(Error::Domain {
                value: x,
                reason: "1 + γx must be positive",
            });
        }
        Ok(u)
    }

    /// `η = ln(1 + γx)/γ`; the identity when γ = 0.
    pub fn eta_of_x(&self, x: f64) -> Result<f64> {
        self.check_forward(x)?;
        Ok(self.eta_unchecked(x))
    }

    pub(crate) fn eta_unchecked(&self, x: f64) -> f64 {
        let g = self.gamma();
        if g == 0.0 {
            x
        } else {
            (g * x).ln_1p() / g
        }
    }

    /// Inverse map `x = (e^{γη} - 1)/γ`.
    pub fn x_of_eta(&self, eta: f64) -> f64 {
        let g = self.gamma();
        if g == 0.0 {
            eta
        } else {
            (g * eta).exp_m1() / g
        }
    }

    /// `(1 + γx) f'(x)`.
    pub fn deformed_derivative<F>(&self, f: F, x: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let u = 1.0 + self.gamma() * x;
        if u.abs() <= 4.0 * f64::EPSILON {
            return Err(Error::SingularPoint { at: x });
        }
        // Step scale follows the local stretching of the η coordinate.
        let scale = (u.abs() / self.gamma().abs().max(1.0 / self.a)).min(self.a);
        Ok(u * differentiate(f, x, scale)?)
    }

    /// Length of the well in η: `2a·atanh(γa)/(γa)`.
    pub fn box_length(&self) -> f64 {
        2.0 * self.a * atanh_ratio(self.gamma_a)
    }

    /// η coordinates of the walls at `x = -a` and `x = +a`.
    pub fn eta_walls(&self) -> (f64, f64) {
        (self.eta_unchecked(-self.a), self.eta_unchecked(self.a))
    }

    /// Deformed plane wave `(1 + γx)^{-1/2} exp(ik η(x))` with unit amplitude.
    pub fn plane_wave(&self, k: f64, x: f64) -> Result<Complex64> {
        let u = self.check_forward(x)?;
        let eta = self.eta_unchecked(x);
        Ok(Complex64::from_polar(u.sqrt().recip(), k * eta))
    }

    /// Deformed Fourier transform
    /// `(2π)^{-1/2} ∫ ψ(x)(1 + γx)^{-1/2} e^{-ik η(x)} dx`,
    /// evaluated as a plain Fourier integral of `ϕ(η) = ψ(x(η))√(1 + γx)`.
    pub fn deformed_fourier(
        &self,
        psi: &WaveFunction,
        k: f64,
        integrator: &Integrator,
    ) -> Result<Complex64> {
        if psi.space() != Space::Position {
            return Err(Error::InvalidParameter(
                "the deformed transform takes a position-space wavefunction".into(),
            ));
        }
        let support = psi.support();
        let eta_lo = self.eta_of_x(support.lo())?;
        let eta_hi = self.eta_of_x(support.hi())?;

        let mut points = vec![eta_lo];
        points.extend(
            psi.breakpoints()
                .iter()
                .filter(|&&x| support.contains(x))
                .map(|&x| self.eta_unchecked(x)),
        );
        points.push(eta_hi);
        points.sort_by(f64::total_cmp);
        points.dedup();

        let g = self.gamma();
        let phi = |eta: f64| -> Complex64 {
            let x = self.x_of_eta(eta);
            let jac = (g * eta).exp().sqrt();
            psi.eval(x) * jac
        };
        let re = integrator.integrate_points(
            |eta| (phi(eta) * Complex64::from_polar(1.0, -k * eta)).re,
            &points,
        )?;
        let im = integrator.integrate_points(
            |eta| (phi(eta) * Complex64::from_polar(1.0, -k * eta)).im,
            &points,
        )?;
        Ok(Complex64::new(re.value, im.value) / (2.0 * PI).sqrt())
    }
}

impl fmt::Display for DeformedWell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "γa = {}, a = {}", self.gamma_a, self.a)
    }
}

pub type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A complex wavefunction over `support` in one of the three spaces.
///
/// Normalization is checked on demand through [`WaveFunction::norm`].
#[derive(Clone)]
pub struct WaveFunction {
    space: Space,
    eval: ComplexFn,
    support: Interval,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for WaveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WaveFunction")
            .field("space", &self.space)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl WaveFunction {
    pub fn new<F>(space: Space, support: Interval, eval: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            space,
            eval: Arc::new(eval),
            support,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, points: Vec<f64>) -> Self {
        self.breakpoints = points;
        self
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, z: f64) -> Complex64 {
        (self.eval)(z)
    }

    /// `∫ |ψ|²` over the support.
    pub fn norm(&self, integrator: &Integrator) -> Result<f64> {
        let mut points = vec![self.support.lo()];
        points.extend(
            self.breakpoints
                .iter()
                .copied()
                .filter(|&p| p > self.support.lo() && p < self.support.hi()),
        );
        points.push(self.support.hi());
        Ok(integrator
            .integrate_points(|z| self.eval(z).norm_sqr(), &points)?
            .value)
    }

    /// Pointwise linear combination `α·self + β·other` on the same support.
    pub fn superpose(
        &self,
        alpha: Complex64,
        other: &WaveFunction,
        beta: Complex64,
    ) -> Result<Self> {
        if self.space != other.space || self.support != other.support {
            return Err(Error::InvalidParameter(
                "superposed wavefunctions must share space and support".into(),
            ));
        }
        let (f, g) = (Arc::clone(&self.eval), Arc::clone(&other.eval));
        let mut points = self.breakpoints.clone();
        points.extend_from_slice(&other.breakpoints);
        points.sort_by(f64::total_cmp);
        points.dedup();
        Ok(Self::new(self.space, self.support, move |z| {
            alpha * f(z) + beta * g(z)
        })
        .with_breakpoints(points))
    }
}
