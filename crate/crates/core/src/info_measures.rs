//! Shannon entropy, Fisher information, disequilibrium and the associated
//! lengths, both by quadrature over an arbitrary [`DensityProfile`] and in
//! closed form for the well eigenstates.

use std::collections::HashMap;
use std::f64::consts::{E, PI};
use std::sync::{Arc, Mutex, OnceLock};

use crate::deformed_space::DeformedWell;
use crate::error::{Error, Result};
use crate::numerics::{plogp, Integrator, DEFAULT_MAX_EVALUATIONS};
use crate::profile::{DensityProfile, RealFn, Space};
use crate::special::{atanh_ratio, EULER_GAMMA};
use crate::well_model::EigenState;

/// Allowed deviation of `∫ρ` from 1 before measures are refused.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Scale `σ` that makes the logarithm argument of the entropies
/// dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureContext {
    sigma: f64,
}

impl MeasureContext {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "entropy scale must be positive, got {sigma}"
            )));
        }
        Ok(Self { sigma })
    }

    /// `σ = a`.
    pub fn for_well(well: &DeformedWell) -> Self {
        Self { sigma: well.a() }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Shift from the raw entropy `-∫ρ ln ρ` to the scaled one.
    fn shift(&self, space: Space) -> f64 {
        match space {
            Space::Position | Space::DeformedEta => -self.sigma.ln(),
            Space::Wavevector => self.sigma.ln(),
        }
    }
}

impl Default for MeasureContext {
    fn default() -> Self {
        Self { sigma: 1.0 }
    }
}

/// Information measures of a single density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSet {
    /// Entropy with the σ-scaled logarithm argument.
    pub shannon: f64,
    /// `+∞` for densities that jump at the edge of their support.
    pub fisher: f64,
    pub disequilibrium: f64,
    /// Standard deviation.
    pub l_heisenberg: f64,
    /// `exp` of the unscaled entropy.
    pub l_shannon: f64,
    /// `1/√F`.
    pub l_fisher: f64,
}

impl MeasureSet {
    pub fn variance(&self) -> f64 {
        self.l_heisenberg * self.l_heisenberg
    }

    /// `-∫ρ ln ρ`, recovered from the Shannon length.
    pub fn raw_shannon(&self) -> f64 {
        self.l_shannon.ln()
    }

    /// Checks `L_F ≤ L_H` and `√(2πe) L_F ≤ L_S ≤ √(2πe) L_H` with a
    /// relative slack `rel`.
    pub fn length_inequalities_hold(&self, rel: f64) -> bool {
        let c = (2.0 * PI * E).sqrt();
        let le = |lhs: f64, rhs: f64| lhs <= rhs * (1.0 + rel);
        le(self.l_fisher, self.l_heisenberg)
            && le(c * self.l_fisher, self.l_shannon)
            && le(self.l_shannon, c * self.l_heisenberg)
    }
}

/// Measures of `density` by quadrature with the default integrator.
///
/// When `sqrt_derivative` is given it must be the derivative of a real
/// amplitude whose square is the density; the Fisher information is then
/// `4∫(amplitude')²`, which has no trouble at nodes.
pub fn numeric_measures(
    density: &DensityProfile,
    sqrt_derivative: Option<RealFn>,
    ctx: MeasureContext,
) -> Result<MeasureSet> {
    numeric_measures_with(&Integrator::default(), density, sqrt_derivative, ctx)
}

pub fn numeric_measures_with(
    integrator: &Integrator,
    density: &DensityProfile,
    sqrt_derivative: Option<RealFn>,
    ctx: MeasureContext,
) -> Result<MeasureSet> {
    let rho = density.density_fn();
    let decay = density.tail().map_or(0.0, |t| t.decay);

    let norm = density.integrate(integrator, |z| rho(z), 0.0)?;
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { integral: norm });
    }
    let mean = density.integrate(integrator, |z| z * rho(z), 1.0)?;
    let second = density.integrate(integrator, |z| (z - mean) * (z - mean) * rho(z), 2.0)?;
    let entropy = -density.integrate(integrator, |z| plogp(rho(z)), 0.0)?;
    let diseq = density.integrate(integrator, |z| rho(z) * rho(z), -decay)?;
    let fisher = fisher_information(integrator, density, sqrt_derivative)?;

    Ok(MeasureSet {
        shannon: entropy + ctx.shift(density.space()),
        fisher,
        disequilibrium: diseq,
        l_heisenberg: second.sqrt(),
        l_shannon: entropy.exp(),
        l_fisher: 1.0 / fisher.sqrt(),
    })
}

fn fisher_information(
    integrator: &Integrator,
    density: &DensityProfile,
    sqrt_derivative: Option<RealFn>,
) -> Result<f64> {
    let support = density.support();
    let rho = density.density_fn();
    let edge_jump = |z: f64| z.is_finite() && rho(z) > 0.0;
    if edge_jump(support.lo()) || edge_jump(support.hi()) {
        return Ok(f64::INFINITY);
    }
    match sqrt_derivative {
        Some(d) => Ok(4.0 * density.integrate(integrator, |z| d(z) * d(z), 0.0)?),
        None => {
            let scale = density.length_scale() * 1e-2;
            let value = density.integrate(
                integrator,
                |z| {
                    let r = rho(z);
                    if r < 1e-280 {
                        return 0.0;
                    }
                    // Stay inside the support when differentiating near an edge.
                    let h = scale
                        .min(0.5 * (z - support.lo()))
                        .min(0.5 * (support.hi() - z));
                    match crate::numerics::differentiate(|y| rho(y), z, h) {
                        Ok(d) => d * d / r,
                        Err(_) => f64::NAN,
                    }
                },
                0.0,
            )?;
            Ok(value)
        }
    }
}

/// Memoized values of the entropy functional `f(n)` of the wavevector
/// densities.
///
/// Each key is computed once per process; concurrent callers asking for the
/// same `n` wait on that key's lock while other keys proceed.
pub struct FTable {
    cells: Mutex<HashMap<u32, Arc<Mutex<Option<f64>>>>>,
}

impl FTable {
    fn global() -> &'static FTable {
        static TABLE: OnceLock<FTable> = OnceLock::new();
        TABLE.get_or_init(|| FTable {
            cells: Mutex::new(HashMap::new()),
        })
    }

    fn get(&self, n: u32) -> Result<f64> {
        let cell = {
            let mut cells = self.cells.lock().unwrap_or_else(|e| e.into_inner());
            Arc::clone(cells.entry(n).or_default())
        };
        let mut slot = cell.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = *slot {
            return Ok(v);
        }
        let v = compute_f(n)?;
        *slot = Some(v);
        Ok(v)
    }

    /// Quantum numbers whose value is currently cached.
    pub fn cached() -> Vec<u32> {
        let cells = Self::global()
            .cells
            .lock()
            .unwrap_or_else(|e| e.into_inner());
        let mut keys: Vec<u32> = cells
            .iter()
            .filter(|(_, c)| c.try_lock().map(|v| v.is_some()).unwrap_or(false))
            .map(|(k, _)| *k)
            .collect();
        keys.sort_unstable();
        keys
    }
}

/// `f(n) = ln(8/π) - π ∫_{-nπ/2}^{∞} g ln g du`, with
/// `g(u) = n² sin²u / (u² + πnu)²`.
pub fn f_of_n(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "quantum number must be at least 1".into(),
        ));
    }
    FTable::global().get(n)
}

/// Large-n limit `ln(8π) + 2(1 - c)` of [`f_of_n`].
pub fn f_infinity() -> f64 {
    (8.0 * PI).ln() + 2.0 * (1.0 - EULER_GAMMA)
}

fn f_kernel(n: f64, u: f64) -> f64 {
    let v = n * crate::special::sinc(u) / (u + PI * n);
    v * v
}

/// Uncached evaluation of [`f_of_n`].
pub fn compute_f(n: u32) -> Result<f64> {
    let nf = n as f64;
    let lo = -nf * PI / 2.0;
    // Panels one zero of sin u apart, out to a cutoff past which the
    // envelope tail is extrapolated.
    let cutoff = (2000.0 + nf) * PI;
    let mut points = vec![lo];
    let first = (lo / PI).floor() as i64 + 1;
    let last = (cutoff / PI).round() as i64;
    points.extend((first..=last).map(|j| j as f64 * PI));
    let integrator =
        Integrator::default().with_budget(DEFAULT_MAX_EVALUATIONS.max(points.len() * 21 * 16));
    let g = |u: f64| plogp(f_kernel(nf, u));
    let body = integrator.integrate_points(g, &points)?.value;
    let tail = crate::numerics::power_tail(&integrator, g, cutoff, PI, 4.0)?;
    Ok((8.0 / PI).ln() - PI * (body + tail))
}

/// `π ∫ g du`, which is 1 for every `n`.
pub fn f_kernel_normalization(n: u32) -> Result<f64> {
    let nf = n as f64;
    let lo = -nf * PI / 2.0;
    let mut points = vec![lo, 0.0];
    let cutoff = (2000.0 + nf) * PI;
    points.extend((1..=(cutoff / PI) as i64).map(|j| j as f64 * PI));
    let integrator = Integrator::default().with_budget(points.len() * 21 * 16);
    let g = |u: f64| f_kernel(nf, u);
    let body = integrator.integrate_points(g, &points)?.value;
    let tail = crate::numerics::power_tail(&integrator, g, cutoff, PI, 4.0)?;
    Ok(PI * (body + tail))
}

struct WellParams {
    s: f64,
    r: f64,
    t2: f64,
    n2: f64,
    l: f64,
}

fn params(state: &EigenState) -> WellParams {
    let s = state.well().gamma_a();
    let r = atanh_ratio(s);
    let t = s * r;
    let nn = state.n() as f64 * PI;
    WellParams {
        s,
        r,
        t2: t * t,
        n2: nn * nn,
        l: state.box_length(),
    }
}

/// Variance of `ρ_n(x)` arranged so that no term cancels as `γ → 0`.
pub fn position_variance(state: &EigenState) -> f64 {
    let WellParams { s, r, t2, n2, .. } = params(state);
    let a = state.well().a();
    let rem = crate::special::atanh_remainder(s);
    let bracket = rem * n2 * n2 + 2.0 * r * r * n2 * (r - 2.0) + s * s * r.powi(5);
    a * a * n2 * bracket / (r * r * (4.0 * t2 + n2) * (t2 + n2).powi(2))
}

/// Closed-form measures of state `n` in `space`.
pub fn closed_measures(
    state: &EigenState,
    space: Space,
    ctx: MeasureContext,
) -> Result<MeasureSet> {
    let WellParams { s, r, t2, n2, l } = params(state);
    let a = state.well().a();
    let hbar = state.well().hbar();
    let one_m = 1.0 - s * s;
    let (raw_entropy, fisher, diseq, variance) = match space {
        Space::Position => {
            // ln(2 L √(1 - s²)) - 1 with L = 2ar
            let entropy = (4.0 * r * a).ln() + 0.5 * (-s * s).ln_1p() - 1.0;
            let fisher = 4.0 * state.quantum_moments().p2_mean / (hbar * hbar);
            let diseq =
                3.0 / (4.0 * a) / (one_m * r * r) * 4.0 * n2 * n2 / ((t2 + n2) * (t2 + 4.0 * n2));
            (entropy, fisher, diseq, position_variance(state))
        }
        Space::Wavevector => {
            let f = f_of_n(state.n())?;
            let fisher = 4.0 * l * l * (1.0 / 12.0 - 0.5 / n2);
            let diseq = l / (6.0 * PI) * (1.0 + 7.5 / n2);
            (f - (2.0 * l).ln(), fisher, diseq, n2 / (l * l))
        }
        Space::DeformedEta => {
            let k = state.wavenumber();
            (
                (2.0 * l).ln() - 1.0,
                4.0 * k * k,
                1.5 / l,
                l * l * (1.0 / 12.0 - 0.5 / n2),
            )
        }
    };
    Ok(MeasureSet {
        shannon: raw_entropy + ctx.shift(space),
        fisher,
        disequilibrium: diseq,
        l_heisenberg: variance.sqrt(),
        l_shannon: raw_entropy.exp(),
        l_fisher: 1.0 / fisher.sqrt(),
    })
}

/// `4⟨η²⟩` about the origin of η rather than about the mean; it differs
/// from the wavevector Fisher information by `4⟨η⟩²`.
pub fn uncentered_k_fisher(state: &EigenState) -> f64 {
    let (_, hi) = state.eta_interval();
    let l = state.box_length();
    let n2 = (state.n() as f64 * PI).powi(2);
    4.0 * l * l * (1.0 / 3.0 - hi / l + hi * hi / (l * l) - 0.5 / n2)
}

/// Pointwise integrand whose integral is the scaled entropy in `space`.
pub fn entropy_density(state: &EigenState, space: Space, z: f64, ctx: MeasureContext) -> f64 {
    let sigma = ctx.sigma();
    match space {
        Space::Position => -plogp(sigma * state.density_x(z)) / sigma,
        Space::DeformedEta => -plogp(sigma * state.density_eta(z)) / sigma,
        Space::Wavevector => -sigma * plogp(state.density_k(z) / sigma),
    }
}

/// Position- and η-space entropies each paired with the wavevector one,
/// next to the entropic uncertainty bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySums {
    pub sum_xk: f64,
    pub sum_eta_k: f64,
    pub bound: f64,
}

pub fn bbm_sum(state: &EigenState, ctx: MeasureContext) -> Result<EntropySums> {
    let x = closed_measures(state, Space::Position, ctx)?.shannon;
    let k = closed_measures(state, Space::Wavevector, ctx)?.shannon;
    let eta = closed_measures(state, Space::DeformedEta, ctx)?.shannon;
    Ok(EntropySums {
        sum_xk: x + k,
        sum_eta_k: eta + k,
        bound: 1.0 + PI.ln(),
    })
}

/// Scaled entropy of the classical density at any energy.
pub fn classical_entropy(well: &DeformedWell, ctx: MeasureContext) -> f64 {
    // -∫ρ ln ρ with ρ = 1/(L(1+γx)) equals ln L + ⟨ln(1+γx)⟩ = ln L + ⟨γη⟩,
    // and ⟨γη⟩ is the midpoint of the η walls times γ.
    let s = well.gamma_a();
    let l = well.box_length();
    let raw = l.ln() + 0.5 * (-s * s).ln_1p();
    raw - ctx.sigma().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Interval;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn state(s: f64, n: u32) -> EigenState {
        EigenState::new(DeformedWell::natural(s).unwrap(), n).unwrap()
    }

    #[test]
    fn f_values() {
        assert_abs_diff_eq!(f_of_n(1).unwrap(), 3.212_038_087_6, epsilon = 1e-8);
        assert_abs_diff_eq!(f_of_n(2).unwrap(), 3.607_003_706_1, epsilon = 1e-8);
        assert_abs_diff_eq!(f_of_n(3).unwrap(), 3.753_142_003_2, epsilon = 1e-8);
        assert_abs_diff_eq!(f_infinity(), 4.069_740_097_7, epsilon = 1e-9);
        assert!(f_of_n(0).is_err());
        assert!(FTable::cached().contains(&2));
    }

    #[test]
    fn f_kernel_is_normalized() {
        for n in [1, 2, 5] {
            assert_abs_diff_eq!(f_kernel_normalization(n).unwrap(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn f_increasing_below_limit() {
        let mut prev = 0.0;
        for n in [1, 2, 3, 5, 10, 40] {
            let f = f_of_n(n).unwrap();
            assert!(f > prev && f < f_infinity());
            prev = f;
        }
    }

    #[test]
    fn undeformed_closed_values() {
        let ctx = MeasureContext::default();
        let m = closed_measures(&state(0.0, 1), Space::Position, ctx).unwrap();
        assert_relative_eq!(m.shannon, 4f64.ln() - 1.0, max_relative = 1e-14);
        assert_relative_eq!(m.fisher, PI * PI, max_relative = 1e-14);
        assert_relative_eq!(m.disequilibrium, 0.75, max_relative = 1e-14);
        let k = closed_measures(&state(0.0, 2), Space::Wavevector, ctx).unwrap();
        let n2 = 4.0 * PI * PI;
        assert_relative_eq!(k.fisher, 4.0 / 3.0 * (1.0 - 6.0 / n2), max_relative = 1e-14);
        assert_relative_eq!(
            k.disequilibrium,
            (1.0 + 15.0 / (2.0 * n2)) / (3.0 * PI),
            max_relative = 1e-14
        );
        let s = closed_measures(&state(0.5, 1), Space::Position, ctx).unwrap();
        assert_relative_eq!(s.shannon, 0.336_501_152_5, max_relative = 1e-9);
    }

    #[test]
    fn position_variance_matches_moments() {
        for &s in &[0.3, -0.6, 0.9] {
            for n in [1, 4] {
                let st = state(s, n);
                assert_relative_eq!(
                    position_variance(&st),
                    st.quantum_moments().x_variance(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn uniform_density_has_infinite_fisher() {
        let p = DensityProfile::new(Space::Position, Interval::new(-1.0, 1.0).unwrap(), |_| 0.5);
        let m = numeric_measures(&p, None, MeasureContext::default()).unwrap();
        assert_relative_eq!(m.shannon, 2f64.ln(), max_relative = 1e-12);
        assert!(m.fisher.is_infinite());
        assert_eq!(m.l_fisher, 0.0);
        assert_relative_eq!(m.disequilibrium, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn unnormalized_density_rejected() {
        let p = DensityProfile::new(Space::Position, Interval::new(-1.0, 1.0).unwrap(), |_| 0.6);
        assert!(matches!(
            numeric_measures(&p, None, MeasureContext::default()),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn gaussian_measures() {
        let sd = 0.7f64;
        let p = DensityProfile::new(Space::Position, Interval::real_line(), move |x| {
            (-(x * x) / (2.0 * sd * sd)).exp() / (sd * (2.0 * PI).sqrt())
        })
        .with_breakpoints(vec![-3.0, 0.0, 3.0]);
        let m = numeric_measures(&p, None, MeasureContext::default()).unwrap();
        assert_relative_eq!(
            m.raw_shannon(),
            0.5 * (2.0 * PI * E * sd * sd).ln(),
            max_relative = 1e-10
        );
        assert_relative_eq!(m.fisher, 1.0 / (sd * sd), max_relative = 1e-7);
        assert_relative_eq!(m.l_heisenberg, sd, max_relative = 1e-10);
    }

    #[test]
    fn numeric_matches_closed_small_sample() {
        let ctx = MeasureContext::default();
        for space in [Space::Position, Space::Wavevector, Space::DeformedEta] {
            let st = state(0.6, 2);
            let num = numeric_measures(
                &st.density_profile(space),
                Some(st.amplitude_derivative(space)),
                ctx,
            )
            .unwrap();
            let cl = closed_measures(&st, space, ctx).unwrap();
            for (a, b) in [
                (num.shannon, cl.shannon),
                (num.fisher, cl.fisher),
                (num.disequilibrium, cl.disequilibrium),
                (num.l_heisenberg, cl.l_heisenberg),
            ] {
                assert_relative_eq!(a, b, max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn fisher_fallback_agrees_with_amplitude_form() {
        let st = state(-0.4, 3);
        let p = st.density_profile(Space::Position);
        let via_rho = numeric_measures(&p, None, MeasureContext::default()).unwrap();
        let closed = closed_measures(&st, Space::Position, MeasureContext::default()).unwrap();
        assert_relative_eq!(via_rho.fisher, closed.fisher, max_relative = 1e-6);
    }

    #[test]
    fn entropy_sums_and_classical_offset() {
        let ctx = MeasureContext::default();
        let st = state(0.5, 1);
        let sums = bbm_sum(&st, ctx).unwrap();
        let f1 = f_of_n(1).unwrap();
        assert_relative_eq!(
            sums.sum_xk,
            f1 - 1.0 + 0.5 * 0.75f64.ln(),
            max_relative = 1e-12
        );
        assert_relative_eq!(sums.sum_eta_k, f1 - 1.0, max_relative = 1e-12);
        assert!(sums.sum_xk < sums.bound);
        let sx = closed_measures(&st, Space::Position, ctx).unwrap().shannon;
        assert_relative_eq!(
            sx - classical_entropy(st.well(), ctx),
            2f64.ln() - 1.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn uncentered_form_differs_only_when_deformed() {
        let st = state(0.0, 2);
        let k = closed_measures(&st, Space::Wavevector, MeasureContext::default()).unwrap();
        assert_relative_eq!(uncentered_k_fisher(&st), k.fisher, max_relative = 1e-12);
        let st = state(0.5, 2);
        let k = closed_measures(&st, Space::Wavevector, MeasureContext::default()).unwrap();
        let (lo, hi) = st.eta_interval();
        let mean = 0.5 * (lo + hi);
        assert_relative_eq!(
            uncentered_k_fisher(&st) - k.fisher,
            4.0 * mean * mean,
            max_relative = 1e-10
        );
    }

    #[test]
    fn entropy_density_negative_region() {
        let st = state(0.8, 3);
        let ctx = MeasureContext::default();
        let min = (0..2001)
            .map(|i| entropy_density(&st, Space::Position, -1.0 + i as f64 / 1000.0, ctx))
            .fold(f64::INFINITY, f64::min);
        assert!(min < 0.0);
    }
}
