//! Quadrature and differentiation engine.
//!
//! Every integral in the crate goes through [`Integrator`], a globally
//! adaptive 21-point Gauss–Kronrod scheme. Panels are bisected in order of
//! decreasing error estimate until the summed estimate meets
//! `max(abs_tol, rel_tol * |value|)`. Semi-infinite and doubly infinite
//! intervals are mapped onto finite ones with rational substitutions.
//!
//! Exhausting the evaluation budget is reported as
//! [`Error::NonConvergence`]; a low-accuracy value is never returned.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default relative tolerance of [`Integrator::default`].
pub const DEFAULT_REL_TOL: f64 = 1e-10;
/// Default absolute tolerance of [`Integrator::default`].
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
/// Default evaluation budget per integral.
pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;

/// Densities below this are treated as exact zeros inside `p ln p`.
pub const PLOGP_FLOOR: f64 = 1e-300;

// Kronrod abscissae on [-1, 1]; odd indices are the embedded 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_758_128_080,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

/// Integration domain. Either endpoint may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(Error::InvalidParameter(format!(
                "interval requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Outcome of one quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate, always `>= 0`.
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Change of variable applied to one piece of the domain.
#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// x = t / (1 - t^2), t in (-1, 1).
    RealLine,
    /// x = origin + t / (1 - t), t in [0, 1).
    Upper {
        origin: f64,
    },
    /// x = origin - t / (1 - t), t in [0, 1).
    Lower {
        origin: f64,
    },
}

impl Map {
    /// Returns (x, dx/dt).
    #[inline]
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Map::Identity => (t, 1.0),
            Map::RealLine => {
                let d = 1.0 - t * t;
                (t / d, (1.0 + t * t) / (d * d))
            }
            Map::Upper { origin } => {
                let d = 1.0 - t;
                (origin + t / d, 1.0 / (d * d))
            }
            Map::Lower { origin } => {
                let d = 1.0 - t;
                (origin - t / d, 1.0 / (d * d))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    map: Map,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive Gauss–Kronrod integrator with fixed tolerances and budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evaluations: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }
}

impl Integrator {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && abs_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be positive, got rel {rel_tol}, abs {abs_tol}"
            )));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        })
    }

    pub fn with_budget(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    /// Integrates `f` over `domain`.
    pub fn integrate<F>(&self, f: F, domain: Interval) -> Result<QuadratureResult>
    where
        F: Fn(f64) -> f64,
    {
        self.integrate_points(f, &[domain.lo, domain.hi])
    }

    /// Integrates over `[points[0], points[last]]`, using every interior
    /// point as an initial panel boundary. Panels are refined globally, so a
    /// long list of breakpoints (nodes, oscillation periods) costs nothing
    /// extra beyond one rule application per panel.
    pub fn integrate_points<F>(&self, f: F, points: &[f64]) -> Result<QuadratureResult>
    where
        F: Fn(f64) -> f64,
    {
        if points.len() < 2 {
            return Err(Error::InvalidParameter(
                "need at least two integration points".into(),
            ));
        }
        for w in points.windows(2) {
            Interval::new(w[0], w[1])?;
        }
        for &p in &points[1..points.len() - 1] {
            if !p.is_finite() {
                return Err(Error::InvalidParameter(
                    "only the outer integration points may be infinite".into(),
                ));
            }
        }

        let last = points.len() - 2;
        let mut pieces = Vec::with_capacity(points.len() - 1);
        for (i, w) in points.windows(2).enumerate() {
            let (lo, hi) = (w[0], w[1]);
            let piece = match (lo.is_finite(), hi.is_finite()) {
                (true, true) => (Map::Identity, lo, hi),
                (true, false) => {
                    debug_assert_eq!(i, last);
                    (Map::Upper { origin: lo }, 0.0, 1.0)
                }
                (false, true) => {
                    debug_assert_eq!(i, 0);
                    (Map::Lower { origin: hi }, 0.0, 1.0)
                }
                (false, false) => (Map::RealLine, -1.0, 1.0),
            };
            pieces.push(piece);
        }

        let mut evaluations = 0usize;
        let mut heap = BinaryHeap::with_capacity(pieces.len() * 2);
        for (map, a, b) in pieces {
            heap.push(apply_rule(&f, map, a, b)?);
            evaluations += 21;
        }

        let mut frozen: Vec<Panel> = Vec::new();
        let mut since_resum = 0usize;
        let (mut value, mut error) = sum_panels(heap.iter().chain(frozen.iter()));

        loop {
            if error <= self.tolerance(value) {
                let (v, e) = sum_panels(heap.iter().chain(frozen.iter()));
                if e <= self.tolerance(v) {
                    return Ok(QuadratureResult {
                        value: v,
                        error_estimate: e,
                        evaluations,
                    });
                }
                value = v;
                error = e;
            }
            if evaluations + 42 > self.max_evaluations {
                return Err(Error::NonConvergence {
                    value,
                    error_estimate: error,
                    evaluations,
                });
            }
            let Some(worst) = heap.pop() else {
                // Every panel has shrunk to the resolution of f64.
                return Err(Error::NonConvergence {
                    value,
                    error_estimate: error,
                    evaluations,
                });
            };
            let mid = 0.5 * (worst.a + worst.b);
            let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
            if (worst.b - worst.a) <= 8.0 * f64::EPSILON * scale || mid <= worst.a || mid >= worst.b
            {
                frozen.push(worst);
                continue;
            }
            let left = apply_rule(&f, worst.map, worst.a, mid)?;
            let right = apply_rule(&f, worst.map, mid, worst.b)?;
            evaluations += 42;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);

            since_resum += 1;
            if since_resum == 512 {
                since_resum = 0;
                (value, error) = sum_panels(heap.iter().chain(frozen.iter()));
            }
        }
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

fn sum_panels<'a>(panels: impl Iterator<Item = &'a Panel>) -> (f64, f64) {
    // Neumaier summation: thousands of panels of mixed sign.
    let (mut s, mut c, mut e) = (0.0f64, 0.0f64, 0.0f64);
    for p in panels {
        let t = s + p.value;
        if s.abs() >= p.value.abs() {
            c += (s - t) + p.value;
        } else {
            c += (p.value - t) + s;
        }
        s = t;
        e += p.error;
    }
    (s + c, e)
}

fn apply_rule<F>(f: &F, map: Map, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let eval = |t: f64| -> Result<f64> {
        let (x, w) = map.apply(t);
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::NonFinite { at: x, value: y });
        }
        let v = y * w;
        // A vanishing integrand times a huge Jacobian near a mapped infinity.
        if v.is_nan() {
            return Ok(0.0);
        }
        Ok(v)
    };

    let fc = eval(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel {
        map,
        a,
        b,
        value,
        error,
    })
}

/// Integrates `f` over `domain` with the default budget.
pub fn integrate<F>(f: F, domain: Interval, rel_tol: f64, abs_tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    Integrator::new(rel_tol, abs_tol)?.integrate(f, domain)
}

/// Central-difference derivative of `f` at `x`.
///
/// `scale` is the length over which `f` varies appreciably; the step is
/// `scale * eps^(1/3)`, which balances truncation against cancellation.
pub fn differentiate<F>(f: F, x: f64, scale: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "differentiation scale must be positive, got {scale}"
        )));
    }
    let h = scale * f64::EPSILON.cbrt();
    let xp = x + h;
    let xm = x - h;
    let fp = f(xp);
    let fm = f(xm);
    if !fp.is_finite() {
        return Err(Error::NonFinite { at: xp, value: fp });
    }
    if !fm.is_finite() {
        return Err(Error::NonFinite { at: xm, value: fm });
    }
    Ok((fp - fm) / (xp - xm))
}

/// `p ln p` with the removable zero at `p = 0` filled in.
#[inline]
pub fn plogp(p: f64) -> f64 {
    if p < PLOGP_FLOOR {
        0.0
    } else {
        p * p.ln()
    }
}

/// Integral of `f` over `[edge, ∞)` for an oscillating integrand whose
/// envelope decays like `x^-decay`.
///
/// The envelope amplitude is fitted from the integral of `f` over the last
/// full `period` before `edge`, so `edge` should sit on a period boundary.
pub fn power_tail<F>(
    integrator: &Integrator,
    f: F,
    edge: f64,
    period: f64,
    decay: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(edge > period && period > 0.0 && decay > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "power tail needs edge > period > 0 and decay > 1 (edge {edge}, period {period}, decay {decay})"
        )));
    }
    let start = edge - period;
    let last = integrator.integrate(f, Interval::new(start, edge)?)?.value;
    let q = 1.0 - decay;
    let envelope = (start.powf(q) - edge.powf(q)) / (decay - 1.0);
    let amplitude = last / envelope;
    Ok(amplitude * edge.powf(q) / (decay - 1.0))
}
