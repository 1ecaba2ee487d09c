//! One-dimensional probability densities as evaluable functions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{power_tail, Integrator, Interval};

/// Which variable a density or wavefunction is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Position,
    Wavevector,
    /// The auxiliary coordinate η = ln(1 + γx)/γ.
    DeformedEta,
}

impl Space {
    pub fn tag(self) -> &'static str {
        match self {
            Space::Position => "x",
            Space::Wavevector => "k",
            Space::DeformedEta => "eta",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "position" => Ok(Space::Position),
            "k" | "wavevector" => Ok(Space::Wavevector),
            "eta" | "deformed_eta" => Ok(Space::DeformedEta),
            other => Err(Error::InvalidParameter(format!("unknown space '{other}'"))),
        }
    }
}

/// Asymptotic description of a density on the whole real line that
/// oscillates with a fixed `period` under an envelope decaying like
/// `|z|^-decay`.
///
/// Integrals are taken over `[-window, window]` and the two tails are
/// extrapolated from the envelope fitted over the outermost period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryTail {
    pub period: f64,
    pub decay: f64,
    pub window: f64,
}

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A probability density over `support`, tagged with its space.
#[derive(Clone)]
pub struct DensityProfile {
    space: Space,
    support: Interval,
    density: RealFn,
    breakpoints: Vec<f64>,
    tail: Option<OscillatoryTail>,
    length_scale: f64,
}

impl fmt::Debug for DensityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityProfile")
            .field("space", &self.space)
            .field("support", &self.support)
            .field("breakpoints", &self.breakpoints.len())
            .field("tail", &self.tail)
            .finish()
    }
}

impl DensityProfile {
    pub fn new<F>(space: Space, support: Interval, density: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let length_scale = if support.is_finite() {
            support.length()
        } else {
            1.0
        };
        Self {
            space,
            support,
            density: Arc::new(density),
            breakpoints: Vec::new(),
            tail: None,
            length_scale,
        }
    }

    /// Interior points (nodes, kinks) used as initial panel boundaries.
    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.retain(|p| p.is_finite() && *p > self.support.lo() && *p < self.support.hi());
        points.sort_by(f64::total_cmp);
        points.dedup();
        if self.support.is_finite() {
            self.length_scale = self.support.length() / (points.len() + 1) as f64;
        }
        self.breakpoints = points;
        self
    }

    pub fn with_tail(mut self, tail: OscillatoryTail) -> Result<Self> {
        if self.support != Interval::real_line() {
            return Err(Error::InvalidParameter(
                "an oscillatory tail needs a density on the whole real line".into(),
            ));
        }
        if !(tail.period > 0.0 && tail.window > tail.period && tail.decay > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "bad tail description {tail:?}"
            )));
        }
        self.length_scale = tail.period;
        self.tail = Some(tail);
        Ok(self)
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

    pub fn tail(&self) -> Option<OscillatoryTail> {
        self.tail
    }

    /// Characteristic length over which the density changes.
    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    pub fn eval(&self, z: f64) -> f64 {
        (self.density)(z)
    }

    pub fn density_fn(&self) -> RealFn {
        Arc::clone(&self.density)
    }

    /// Integrates `g` over the support. `moment_order` is the power of `z`
    /// that `g` carries relative to the density, used only to extrapolate
    /// oscillatory tails (a `g` decaying like the density squared should pass
    /// a negative order equal to `-decay`).
    pub fn integrate<G>(&self, integrator: &Integrator, g: G, moment_order: f64) -> Result<f64>
    where
        G: Fn(f64) -> f64,
    {
        match self.tail {
            None => {
                let mut points = Vec::with_capacity(self.breakpoints.len() + 2);
                points.push(self.support.lo());
                points.extend_from_slice(&self.breakpoints);
                points.push(self.support.hi());
                Ok(integrator.integrate_points(&g, &points)?.value)
            }
            Some(tail) => {
                let w = tail.window;
                let panels = (2.0 * w / tail.period).round() as usize;
                let mut points: Vec<f64> =
                    (0..=panels).map(|i| -w + i as f64 * tail.period).collect();
                *points.last_mut().unwrap() = w;
                points.extend(self.breakpoints.iter().copied().filter(|p| p.abs() < w));
                points.sort_by(f64::total_cmp);
                points.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * w);
                let budget = integrator.max_evaluations.max(points.len() * 21 * 16);
                let body = integrator
                    .with_budget(budget)
                    .integrate_points(&g, &points)?
                    .value;
                let decay = tail.decay - moment_order;
                if decay <= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "moment of order {moment_order} diverges for a tail decaying like z^-{}",
                        tail.decay
                    )));
                }
                let right = power_tail(integrator, &g, w, tail.period, decay)?;
                let left = power_tail(integrator, |z| g(-z), w, tail.period, decay)?;
                Ok(body + right + left)
            }
        }
    }
}
