//! Eigenstates of the deformed infinite well in position, wavevector and
//! η space, their moments, and the classical ensemble they approach.
//!
//! The spectrum follows from the boundary conditions `ψ(±a) = 0`, which
//! quantize the wavenumber as `k_n = nπ/L_γ` with `L_γ` the η-length of
//! the well.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::deformed_space::{DeformedWell, WaveFunction};
use crate::error::{Error, Result};
use crate::numerics::Interval;
use crate::profile::{DensityProfile, OscillatoryTail, Space};
use crate::special::{atanh_ratio, atanh_remainder, sinc, sinc_derivative};

/// Decay exponent of `ρ̃_n(k)` for large `|k|`.
pub const K_DENSITY_DECAY: f64 = 4.0;

/// Position and momentum moments of a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub x_mean: f64,
    pub x2_mean: f64,
    pub p_mean: f64,
    pub p2_mean: f64,
}

impl Moments {
    pub fn x_variance(&self) -> f64 {
        self.x2_mean - self.x_mean * self.x_mean
    }
}

/// First two moments of the wavevector distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMoments {
    pub k_mean: f64,
    pub k2_mean: f64,
}

/// Stationary state `n` of a particle in a [`DeformedWell`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenState {
    well: DeformedWell,
    n: u32,
    box_length: f64,
    wavenumber: f64,
    amplitude: f64,
}

impl EigenState {
    pub fn new(well: DeformedWell, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "quantum number must be at least 1".into(),
            ));
        }
        let box_length = well.box_length();
        Ok(Self {
            well,
            n,
            box_length,
            wavenumber: n as f64 * PI / box_length,
            amplitude: (2.0 / box_length).sqrt(),
        })
    }

    pub fn well(&self) -> &DeformedWell {
        &self.well
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `L_γ`.
    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// `k_{γ,n} = nπ/L_γ`.
    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    /// `A_γ = √(2/L_γ)`.
    pub fn normalization(&self) -> f64 {
        self.amplitude
    }

    /// `E_n / ε₀ = n² [γa/atanh(γa)]²`.
    pub fn energy_level(&self) -> f64 {
        let r = atanh_ratio(self.well.gamma_a());
        let n = self.n as f64;
        n * n / (r * r)
    }

    /// `E_n = ħ²k_n²/(2m₀)` in physical units.
    pub fn energy(&self) -> f64 {
        self.energy_level() * self.well.energy_unit()
    }

    fn phase(&self, x: f64) -> f64 {
        let (_, eta_hi) = self.well.eta_walls();
        self.wavenumber * (self.well.eta_unchecked(x) - eta_hi)
    }

    fn inside(&self, x: f64) -> bool {
        x.abs() < self.well.a()
    }

    /// `ψ_n(x)`, zero outside the open well.
    pub fn eigenfunction_x(&self, x: f64) -> f64 {
        if !self.inside(x) {
            return 0.0;
        }
        let u = 1.0 + self.well.gamma() * x;
        self.amplitude * self.phase(x).sin() / u.sqrt()
    }

    /// `dψ_n/dx`.
    pub fn eigenfunction_x_derivative(&self, x: f64) -> f64 {
        if !self.inside(x) {
            return 0.0;
        }
        let g = self.well.gamma();
        let u = 1.0 + g * x;
        let th = self.phase(x);
        self.amplitude * (self.wavenumber * th.cos() - 0.5 * g * th.sin()) / (u * u.sqrt())
    }

    /// `ρ_n(x) = |ψ_n(x)|²`.
    pub fn density_x(&self, x: f64) -> f64 {
        let p = self.eigenfunction_x(x);
        p * p
    }

    /// The `n - 1` interior zeros of `ψ_n`, ascending.
    ///
    /// The phase is monotone in x, so the nodes are the images of the
    /// equally spaced η nodes.
    pub fn nodes_x(&self) -> Vec<f64> {
        let (eta_lo, _) = self.well.eta_walls();
        let step = self.box_length / self.n as f64;
        (1..self.n)
            .map(|j| self.well.x_of_eta(eta_lo + j as f64 * step))
            .collect()
    }

    /// Real signed amplitude `ζ_n(k)` with `ψ̃_n(k) = ζ_n(k) e^{-iα_n(k)}`.
    pub fn amplitude_k(&self, k: f64) -> f64 {
        let (c, u) = self.k_reduced(k);
        let pref = (PI * self.box_length).sqrt() * self.n as f64 / 2.0;
        pref * self.k_shape(c, u)
    }

    /// `dζ_n/dk`.
    pub fn amplitude_k_derivative(&self, k: f64) -> f64 {
        let (c, u) = self.k_reduced(k);
        let pref = (PI * self.box_length).sqrt() * self.n as f64 / 2.0;
        let (v, w, sign) = self.k_split(c, u);
        let d = sign * (sinc_derivative(v) / w - sinc(v) / (w * w));
        pref * d * self.box_length / 2.0
    }

    /// `α_n(k) = ½[k ln(1 - γ²a²)/γ + π(n + 1)]`.
    pub fn phase_k(&self, k: f64) -> f64 {
        let (eta_lo, eta_hi) = self.well.eta_walls();
        // ln(1 - γ²a²)/γ is the sum of the two wall coordinates.
        0.5 * (k * (eta_lo + eta_hi) + PI * (self.n as f64 + 1.0))
    }

    /// `ψ̃_n(k)`.
    pub fn eigenfunction_k(&self, k: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.phase_k(k)) * self.amplitude_k(k)
    }

    /// `ρ̃_n(k) = |ψ̃_n(k)|²`.
    pub fn density_k(&self, k: f64) -> f64 {
        let z = self.amplitude_k(k);
        z * z
    }

    fn k_reduced(&self, k: f64) -> (f64, f64) {
        (self.n as f64 * PI / 2.0, k * self.box_length / 2.0)
    }

    /// `sin(u - c)/(u² - c²)` factored around whichever pole is near,
    /// returned as `sign · sinc(v)/w`.
    fn k_split(&self, c: f64, u: f64) -> (f64, f64, f64) {
        if u >= 0.0 {
            (u - c, u + c, 1.0)
        } else {
            // sin(u - c) = (-1)^n sin(u + c)
            let sign = if self.n % 2 == 0 { 1.0 } else { -1.0 };
            (u + c, u - c, sign)
        }
    }

    fn k_shape(&self, c: f64, u: f64) -> f64 {
        let (v, w, sign) = self.k_split(c, u);
        sign * sinc(v) / w
    }

    /// η coordinates of the walls.
    pub fn eta_interval(&self) -> (f64, f64) {
        self.well.eta_walls()
    }

    /// `ϕ_n(η) = A_γ sin(k_n(η - η₊))`, the constant-mass box state.
    pub fn eigenfunction_eta(&self, eta: f64) -> f64 {
        let (lo, hi) = self.well.eta_walls();
        if !(eta > lo && eta < hi) {
            return 0.0;
        }
        self.amplitude * (self.wavenumber * (eta - hi)).sin()
    }

    pub fn eigenfunction_eta_derivative(&self, eta: f64) -> f64 {
        let (lo, hi) = self.well.eta_walls();
        if !(eta > lo && eta < hi) {
            return 0.0;
        }
        self.amplitude * self.wavenumber * (self.wavenumber * (eta - hi)).cos()
    }

    /// `ϱ_n(η) = A_γ² sin²(k_n (η - η₋))` inside the transported well.
    pub fn density_eta(&self, eta: f64) -> f64 {
        let p = self.eigenfunction_eta(eta);
        p * p
    }

    /// Closed-form `⟨x⟩, ⟨x²⟩, ⟨p⟩, ⟨p²⟩`.
    pub fn quantum_moments(&self) -> Moments {
        let s = self.well.gamma_a();
        let a = self.well.a();
        let hbar = self.well.hbar();
        let r = atanh_ratio(s);
        let rem = atanh_remainder(s);
        let t = s * r;
        let nn = self.n as f64 * PI;
        let (t2, n2) = (t * t, nn * nn);

        // (γa/atanh γa - 1)/γ = -a s R/r
        let x_mean = -a * s * rem / r - a * t / (t2 + n2);
        let x2_mean =
            a * a * rem / r + a * a * r * (4.0 * t2 - 2.0 * n2) / ((t2 + n2) * (4.0 * t2 + n2));
        let one_m = 1.0 - s * s;
        let k = self.wavenumber;
        let p2_mean = hbar * hbar * k * k / (one_m * one_m * r) * (1.0 + t2 / (4.0 * t2 + n2));
        Moments {
            x_mean,
            x2_mean,
            p_mean: 0.0,
            p2_mean,
        }
    }

    /// `⟨k⟩ = 0`, `⟨k²⟩ = (nπ/L_γ)²`.
    pub fn k_moments(&self) -> KMoments {
        KMoments {
            k_mean: 0.0,
            k2_mean: self.wavenumber * self.wavenumber,
        }
    }

    pub fn wavefunction_x(&self) -> WaveFunction {
        let me = *self;
        let a = self.well.a();
        WaveFunction::new(
            Space::Position,
            Interval::new(-a, a).expect("a > 0"),
            move |x| Complex64::new(me.eigenfunction_x(x), 0.0),
        )
        .with_breakpoints(self.nodes_x())
    }

    pub fn wavefunction_k(&self) -> WaveFunction {
        let me = *self;
        WaveFunction::new(Space::Wavevector, Interval::real_line(), move |k| {
            me.eigenfunction_k(k)
        })
    }

    /// Window half-width, in k, for integrals of `ρ̃_n`: whole oscillation
    /// periods well past the main lobes at `±k_n`.
    pub fn k_window(&self) -> (f64, f64) {
        let period = 2.0 * PI / self.box_length;
        let periods = 1000.0 + 50.0 * self.n as f64;
        (period, periods * period)
    }

    /// The density of this state in `space`, with its nodes as breakpoints.
    pub fn density_profile(&self, space: Space) -> DensityProfile {
        let me = *self;
        match space {
            Space::Position => {
                let a = self.well.a();
                DensityProfile::new(space, Interval::new(-a, a).expect("a > 0"), move |x| {
                    me.density_x(x)
                })
                .with_breakpoints(self.nodes_x())
            }
            Space::DeformedEta => {
                let (lo, hi) = self.well.eta_walls();
                let step = self.box_length / self.n as f64;
                let nodes = (1..self.n).map(|j| lo + j as f64 * step).collect();
                DensityProfile::new(space, Interval::new(lo, hi).expect("L > 0"), move |e| {
                    me.density_eta(e)
                })
                .with_breakpoints(nodes)
            }
            Space::Wavevector => {
                let (period, window) = self.k_window();
                // The two main lobes are centred on ±k_n.
                let k = self.wavenumber;
                DensityProfile::new(space, Interval::real_line(), move |q| me.density_k(q))
                    .with_breakpoints(vec![-k, 0.0, k])
                    .with_tail(OscillatoryTail {
                        period,
                        decay: K_DENSITY_DECAY,
                        window,
                    })
                    .expect("real-line profile")
            }
        }
    }

    /// Derivative of the real amplitude whose square is the density in
    /// `space`.
    pub fn amplitude_derivative(&self, space: Space) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
        let me = *self;
        match space {
            Space::Position => Arc::new(move |x| me.eigenfunction_x_derivative(x)),
            Space::Wavevector => Arc::new(move |k| me.amplitude_k_derivative(k)),
            Space::DeformedEta => Arc::new(move |e| me.eigenfunction_eta_derivative(e)),
        }
    }
}

/// Classical particle of fixed energy bouncing between the walls; its
/// density is proportional to the inverse speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalEnsemble {
    well: DeformedWell,
    energy: f64,
}

impl ClassicalEnsemble {
    pub fn new(well: DeformedWell, energy: f64) -> Result<Self> {
        if !(energy.is_finite() && energy > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "classical energy must be positive, got {energy}"
            )));
        }
        Ok(Self { well, energy })
    }

    /// Ensemble at the energy of `state`.
    pub fn for_state(state: &EigenState) -> Self {
        Self {
            well: state.well,
            energy: state.energy(),
        }
    }

    pub fn well(&self) -> &DeformedWell {
        &self.well
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    fn check(&self, x: f64) -> Result<()> {
        if x.abs() > self.well.a() || x.is_nan() {
            return Err(Error::Domain {
                value: x,
                reason: "classical density is defined inside the well",
            });
        }
        Ok(())
    }

    /// `ρ_cl(x) = γ/[ln((1+γa)/(1-γa))(1+γx)] = 1/(L_γ(1+γx))`.
    pub fn density(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(1.0 / (self.well.box_length() * (1.0 + self.well.gamma() * x)))
    }

    /// Cumulative distribution `∫_{-a}^{x} ρ_cl`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let (lo, _) = self.well.eta_walls();
        Ok((self.well.eta_unchecked(x) - lo) / self.well.box_length())
    }

    /// Closed-form `x̄, x̄², p̄, p̄²`.
    pub fn moments(&self) -> Moments {
        let s = self.well.gamma_a();
        let a = self.well.a();
        let r = atanh_ratio(s);
        let rem = atanh_remainder(s);
        let one_m = 1.0 - s * s;
        Moments {
            x_mean: -a * s * rem / r,
            x2_mean: a * a * rem / r,
            p_mean: 0.0,
            p2_mean: 2.0 * self.well.m0() * self.energy / (one_m * one_m * r),
        }
    }

    pub fn density_profile(&self) -> DensityProfile {
        let me = *self;
        let a = self.well.a();
        DensityProfile::new(
            Space::Position,
            Interval::new(-a, a).expect("a > 0"),
            move |x| me.density(x).unwrap_or(0.0),
        )
    }
}
