//! Self-verification: every closed form is checked against quadrature,
//! limits, symmetries and inequalities. Items marked informational are
//! reported but never fail the run.

use std::f64::consts::{E, PI};
use std::fmt;

use rayon::prelude::*;

use pdmwell::info_measures::{
    bbm_sum, classical_entropy, entropy_density, f_infinity, f_of_n, uncentered_k_fisher,
};
use pdmwell::numerics::{plogp, Integrator, Interval};
use pdmwell::profile::RealFn;
use pdmwell::{
    closed_measures, complexity_closed, complexity_numeric, numeric_measures, ClassicalEnsemble,
    ComplexitySet, DeformedWell, DensityProfile, EigenState, MeasureContext, MeasureSet, Space,
};

use crate::config::linspace;
use crate::error::CliResult;
use crate::table::{Cell, Table};

/// Source of the closed forms under test. The default methods use the
/// library; tests substitute deliberately broken versions.
pub trait ClosedForms: Sync {
    fn measures(
        &self,
        state: &EigenState,
        space: Space,
        ctx: MeasureContext,
    ) -> pdmwell::Result<MeasureSet> {
        closed_measures(state, space, ctx)
    }

    fn complexities(&self, state: &EigenState, space: Space) -> pdmwell::Result<ComplexitySet> {
        complexity_closed(state, space)
    }
}

pub struct LibraryForms;

impl ClosedForms for LibraryForms {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn within(name: &str, deviation: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        let ok = deviation <= tolerance;
        Self {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            deviation,
            tolerance,
            detail: detail.into(),
        }
    }

    /// A yes/no condition; the deviation is the count of violations.
    fn holds(name: &str, violations: usize, detail: impl Into<String>) -> Self {
        Self::within(name, violations as f64, 0.0, detail)
    }

    fn info(name: &str, value: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Info,
            deviation: value,
            tolerance: f64::NAN,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let tol = if c.tolerance.is_nan() {
                "-".to_string()
            } else {
                format!("{:.1e}", c.tolerance)
            };
            out.push_str(&format!(
                "{} {:width$} deviation {:.3e} tol {} {}\n",
                c.status, c.name, c.deviation, tol, c.detail
            ));
        }
        let failed = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks
                .iter()
                .filter(|c| c.status != Status::Info)
                .count(),
            failed
        ));
        out
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["check", "status", "deviation", "tolerance", "detail"]);
        for c in &self.checks {
            t.push(vec![
                c.name.as_str().into(),
                c.status.to_string().as_str().into(),
                c.deviation.into(),
                if c.tolerance.is_nan() {
                    Cell::Empty
                } else {
                    c.tolerance.into()
                },
                c.detail.as_str().into(),
            ]);
        }
        t
    }
}

fn state(s: f64, n: u32) -> EigenState {
    EigenState::new(DeformedWell::natural(s).expect("|γa| < 1"), n).expect("n ≥ 1")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn fields(m: &MeasureSet) -> [f64; 6] {
    [
        m.shannon,
        m.fisher,
        m.disequilibrium,
        m.l_heisenberg,
        m.l_shannon,
        m.l_fisher,
    ]
}

const ORACLE_N: [u32; 4] = [1, 2, 3, 10];
const ORACLE_GAMMA: [f64; 7] = [0.0, 0.2, -0.2, 0.5, -0.5, 0.8, -0.8];

/// Runs the whole suite. `tol` applies to the quadrature comparisons; the
/// remaining checks carry their own fixed thresholds.
pub fn run_verify(tol: f64, forms: &dyn ClosedForms) -> CliResult<Report> {
    let mut checks = Vec::new();
    let q = Integrator::default();
    let ctx = MeasureContext::default();

    // entropy functional
    let reported = [(1, 3.21204), (2, 3.60700), (3, 3.75314)];
    let mut dev: f64 = 0.0;
    for (n, v) in reported {
        dev = dev.max((f_of_n(n)? - v).abs());
    }
    checks.push(Check::within("f_n_values", dev, 1e-4, "f(1), f(2), f(3)"));
    checks.push(Check::within(
        "f_n_limit",
        (f_of_n(500)? - f_infinity()).abs(),
        1e-2,
        "f(500) against ln(8π) + 2(1 - c)",
    ));

    // closed forms against quadrature
    let cells: Vec<(Space, u32, f64)> = [Space::Position, Space::Wavevector]
        .into_iter()
        .flat_map(|sp| {
            ORACLE_N
                .into_iter()
                .flat_map(move |n| ORACLE_GAMMA.into_iter().map(move |g| (sp, n, g)))
        })
        .collect();
    let pairs: Vec<pdmwell::Result<(MeasureSet, MeasureSet, ComplexitySet, ComplexitySet)>> = cells
        .par_iter()
        .map(|&(space, n, g)| {
            let st = state(g, n);
            let num = numeric_measures(
                &st.density_profile(space),
                Some(st.amplitude_derivative(space)),
                ctx,
            )?;
            let cl = forms.measures(&st, space, ctx)?;
            let c_direct = forms.complexities(&st, space)?;
            let c_num = complexity_numeric(&num)?;
            Ok((num, cl, c_direct, c_num))
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut worst_cell = String::new();
    let mut cworst: f64 = 0.0;
    let mut length_violations = 0;
    for (cell, res) in cells.iter().zip(pairs) {
        let (num, cl, cd, cn) = res?;
        for (a, b) in fields(&num).into_iter().zip(fields(&cl)) {
            let d = rel(a, b);
            if !(d <= worst) {
                worst = d;
                worst_cell = format!("{} n={} γa={}", cell.0, cell.1, cell.2);
            }
        }
        for (a, b) in cd.as_array().into_iter().zip(cn.as_array()) {
            cworst = cworst.max((a - b).abs() / b.abs());
        }
        for m in [num, cl] {
            if !m.length_inequalities_hold(1e-12) {
                length_violations += 1;
            }
        }
    }
    checks.push(Check::within(
        "oracle_equivalence",
        worst,
        tol,
        format!("{} cells, worst at {worst_cell}", cells.len()),
    ));
    checks.push(Check::within(
        "complexity_consistency",
        cworst,
        tol,
        "closed complexities against complexities of quadrature measures",
    ));
    checks.push(Check::holds(
        "length_inequalities",
        length_violations,
        format!("{} measure sets", 2 * cells.len()),
    ));
    checks.push(gaussian_check()?);

    checks.extend(undeformed_limits(forms, ctx)?);
    checks.extend(normalization_and_transform(&q, tol)?);
    checks.extend(moment_identities(&q, tol, forms, ctx)?);
    checks.extend(classical_limit(&q)?);
    checks.extend(symmetry_and_ordering(forms)?);
    checks.extend(entropy_structure(&q, forms, ctx)?);
    checks.extend(uncertainty_sums(ctx)?);
    checks.extend(informational(forms, ctx)?);

    Ok(Report { checks })
}

fn gaussian_check() -> CliResult<Check> {
    let sd = 0.8f64;
    let p = DensityProfile::new(Space::Position, Interval::real_line(), move |x: f64| {
        (-x * x / (2.0 * sd * sd)).exp() / (sd * (2.0 * PI).sqrt())
    })
    .with_breakpoints(vec![-4.0 * sd, 0.0, 4.0 * sd]);
    let amp: RealFn = std::sync::Arc::new(move |x: f64| {
        let root = (-x * x / (4.0 * sd * sd)).exp() / (sd * (2.0 * PI).sqrt()).sqrt();
        -x / (2.0 * sd * sd) * root
    });
    let m = numeric_measures(&p, Some(amp), MeasureContext::default())?;
    let c = complexity_numeric(&m)?;
    let dev = (c.c_cr - 1.0).abs().max((c.c_fs - 1.0).abs());
    Ok(Check::within(
        "gaussian_saturation",
        dev,
        1e-10,
        "C_CR = C_FS = 1",
    ))
}

fn undeformed_limits(forms: &dyn ClosedForms, ctx: MeasureContext) -> CliResult<Vec<Check>> {
    let s = 1e-10;
    let mut entropy: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for n in 1..=3u32 {
        let st = state(s, n);
        let nf = n as f64;
        let n2 = (nf * PI).powi(2);
        let x = forms.measures(&st, Space::Position, ctx)?;
        let k = forms.measures(&st, Space::Wavevector, ctx)?;
        let cx = forms.complexities(&st, Space::Position)?;
        let ck = forms.complexities(&st, Space::Wavevector)?;
        entropy = entropy.max((x.shannon - (4f64.ln() - 1.0)).abs());
        let r = |a: f64, b: f64| (a / b - 1.0).abs();
        for d in [
            r(x.fisher, n2),
            r(k.fisher, 4.0 / 3.0 * (1.0 - 6.0 / n2)),
            r(cx.c_cr, n2 / 3.0 - 2.0),
            r(ck.c_cr, n2 / 3.0 - 2.0),
            r(cx.c_lmc, 3.0 / E),
            r(cx.c_fs, 8.0 * PI * nf * nf / E.powi(3)),
        ] {
            worst = worst.max(d);
        }
    }
    Ok(vec![
        Check::within(
            "undeformed_entropy",
            entropy,
            1e-8,
            "S_x at γa = 1e-10 against ln 4 - 1",
        ),
        Check::within(
            "undeformed_limits",
            worst,
            1e-6,
            "F_x, F_k, C_CR, C_LMC(x), C_FS(x) at γa = 1e-10, n = 1..3",
        ),
    ])
}

fn normalization_and_transform(q: &Integrator, tol: f64) -> CliResult<Vec<Check>> {
    let mut norm: f64 = 0.0;
    let mut transform: f64 = 0.0;
    for s in [0.0, 0.5, 0.8] {
        for n in 1..=3 {
            let st = state(s, n);
            for space in [Space::Position, Space::Wavevector, Space::DeformedEta] {
                let p = st.density_profile(space);
                norm = norm.max((p.integrate(q, |z| p.eval(z), 0.0)? - 1.0).abs());
            }
            let psi = st.wavefunction_x();
            let kn = st.wavenumber();
            let k3 = 3.0 * PI / st.box_length();
            for k in [0.0, kn, -kn, k3, -k3] {
                let d = st.well().deformed_fourier(&psi, k, q)? - st.eigenfunction_k(k);
                transform = transform.max(d.norm());
            }
        }
    }
    Ok(vec![
        Check::within(
            "normalization",
            norm,
            tol,
            "x, k and η densities, n = 1..3, γa ∈ {0, 0.5, 0.8}",
        ),
        Check::within(
            "transform_oracle",
            transform,
            tol,
            "deformed transform against closed form at 5 wavevectors",
        ),
    ])
}

fn moment_identities(
    q: &Integrator,
    tol: f64,
    forms: &dyn ClosedForms,
    ctx: MeasureContext,
) -> CliResult<Vec<Check>> {
    let mut moments: f64 = 0.0;
    let mut fisher_closed: f64 = 0.0;
    let mut fisher_numeric: f64 = 0.0;
    let mut k2: f64 = 0.0;
    for s in [0.0, 0.6, -0.6] {
        for n in 1..=3 {
            let st = state(s, n);
            let m = st.quantum_moments();
            let p = st.density_profile(Space::Position);
            let xm = p.integrate(q, |x| x * st.density_x(x), 1.0)?;
            let x2 = p.integrate(q, |x| x * x * st.density_x(x), 2.0)?;
            let p2 = p.integrate(q, |x| st.eigenfunction_x_derivative(x).powi(2), 0.0)?;
            moments = moments
                .max((m.x_mean - xm).abs())
                .max((m.x2_mean - x2).abs())
                .max(rel(m.p2_mean, p2));
            let f = forms.measures(&st, Space::Position, ctx)?.fisher;
            fisher_closed = fisher_closed.max(rel(f, 4.0 * m.p2_mean));
            let f_num = numeric_measures(&p, None, ctx)?.fisher;
            fisher_numeric = fisher_numeric.max(rel(f_num, 4.0 * m.p2_mean));
            let pk = st.density_profile(Space::Wavevector);
            let k2_num = pk.integrate(q, |k| k * k * pk.eval(k), 2.0)?;
            k2 = k2.max((k2_num / st.k_moments().k2_mean - 1.0).abs());
        }
    }
    Ok(vec![
        Check::within(
            "quantum_moments",
            moments,
            tol,
            "<x>, <x²>, <p²> against quadrature",
        ),
        Check::within(
            "fisher_momentum_closed",
            fisher_closed,
            1e-12,
            "F = 4<p²>/ħ² in closed form",
        ),
        Check::within(
            "fisher_momentum_numeric",
            fisher_numeric,
            tol,
            "F from ρ'²/ρ quadrature against 4<p²>/ħ²",
        ),
        Check::within(
            "k_second_moment",
            k2,
            1e-5,
            "<k²> with tail correction against (nπ/L)²",
        ),
    ])
}

fn classical_limit(q: &Integrator) -> CliResult<Vec<Check>> {
    let st = state(0.5, 200);
    let qm = st.quantum_moments();
    let cm = ClassicalEnsemble::for_state(&st).moments();
    let gap = [
        (qm.x_mean, cm.x_mean),
        (qm.x2_mean, cm.x2_mean),
        (qm.p2_mean, cm.p2_mean),
    ]
    .into_iter()
    .map(|(a, b)| (a / b - 1.0).abs())
    .fold(0.0, f64::max);

    let st = state(0.8, 10);
    let cl = ClassicalEnsemble::for_state(&st);
    let mut nodes = vec![-1.0];
    nodes.extend(st.nodes_x());
    nodes.push(1.0);
    let mut sup: f64 = 0.0;
    for w in nodes.windows(3).step_by(2) {
        let average = q.integrate_points(|x| st.density_x(x), w)?.value / (w[2] - w[0]);
        sup = sup.max((average / cl.density(0.5 * (w[0] + w[2]))? - 1.0).abs());
    }
    let mut above = 0;
    for x in linspace(-1.0, 1.0, 20001) {
        if st.density_x(x) > 2.0 * cl.density(x)? + 1e-9 {
            above += 1;
        }
    }
    Ok(vec![
        Check::within("classical_moments", gap, 0.01, "n = 200, γa = 0.5"),
        Check::within(
            "correspondence_average",
            sup,
            0.02,
            "lobe-pair averages, n = 10, γa = 0.8",
        ),
        Check::holds(
            "classical_envelope",
            above,
            "ρ ≤ 2ρ_cl + 1e-9 on 20001 points",
        ),
    ])
}

fn symmetry_and_ordering(forms: &dyn ClosedForms) -> CliResult<Vec<Check>> {
    let grid = linspace(-0.9, 0.9, 37);
    let mut even: f64 = 0.0;
    let mut disordered = 0;
    for &s in &grid {
        for space in [Space::Position, Space::Wavevector] {
            for n in 1..=3 {
                let p = forms.complexities(&state(s, n), space)?;
                let m = forms.complexities(&state(-s, n), space)?;
                for (a, b) in p.as_array().into_iter().zip(m.as_array()) {
                    even = even.max((a - b).abs() / a.abs());
                }
            }
            if !forms.complexities(&state(s, 1), space)?.is_ordered() {
                disordered += 1;
            }
        }
    }
    Ok(vec![
        Check::within("complexity_evenness", even, 1e-9, "37-point grid, n = 1..3"),
        Check::holds(
            "ground_state_ordering",
            disordered,
            "C_CR > C_FS > C_LMC > 1 for |γa| ≤ 0.9",
        ),
    ])
}

fn entropy_structure(
    q: &Integrator,
    forms: &dyn ClosedForms,
    ctx: MeasureContext,
) -> CliResult<Vec<Check>> {
    let mut integral: f64 = 0.0;
    for s in [0.0, 0.4, -0.4, 0.8, -0.8] {
        for n in 1..=3 {
            let st = state(s, n);
            for space in [Space::Position, Space::Wavevector] {
                let p = st.density_profile(space);
                let v = p.integrate(q, |z| entropy_density(&st, space, z, ctx), 0.0)?;
                integral = integral.max((v - forms.measures(&st, space, ctx)?.shannon).abs());
            }
        }
    }
    let st = state(0.8, 3);
    let negative = linspace(-1.0, 1.0, 2001)
        .into_iter()
        .map(|x| entropy_density(&st, Space::Position, x, ctx))
        .fold(f64::INFINITY, f64::min);

    let mut spread: f64 = 0.0;
    for s in [0.0, 0.5, -0.8] {
        let base = forms.measures(&state(s, 1), Space::Position, ctx)?.shannon;
        for n in 2..=10 {
            spread = spread
                .max((forms.measures(&state(s, n), Space::Position, ctx)?.shannon - base).abs());
        }
    }

    let mut offset: f64 = 0.0;
    for s in [0.0, 0.5, 0.8] {
        let st = state(s, 4);
        let p = st.density_profile(Space::Position);
        let quantum = -p.integrate(q, |x| plogp(p.eval(x)), 0.0)?;
        let cl = ClassicalEnsemble::for_state(&st).density_profile();
        let classical = -cl.integrate(q, |x| plogp(cl.eval(x)), 0.0)?;
        offset = offset.max((quantum - classical - (2f64.ln() - 1.0)).abs());
        let closed =
            forms.measures(&st, Space::Position, ctx)?.shannon - classical_entropy(st.well(), ctx);
        offset = offset.max((closed - (2f64.ln() - 1.0)).abs());
    }
    Ok(vec![
        Check::within(
            "entropy_density_integral",
            integral,
            1e-8,
            "∫ρ_S against closed entropies",
        ),
        Check::holds(
            "entropy_density_negative",
            usize::from(negative >= 0.0),
            format!("min ρ_S(x) = {negative:.4} at γa = 0.8, n = 3"),
        ),
        Check::within("entropy_n_independence", spread, 1e-8, "S_x for n = 1..10"),
        Check::within(
            "classical_entropy_offset",
            offset,
            1e-8,
            "S_x[ρ_n] - S_x[ρ_cl] = ln 2 - 1",
        ),
    ])
}

fn uncertainty_sums(ctx: MeasureContext) -> CliResult<Vec<Check>> {
    let mut below = 0;
    for n in 1..=10 {
        let sums = bbm_sum(&state(0.3, n), ctx)?;
        if sums.sum_eta_k < sums.bound {
            below += 1;
        }
    }
    let mut formula: f64 = 0.0;
    for s in [0.0, 0.5, -0.7, 0.95] {
        for n in 1..=3 {
            let sums = bbm_sum(&state(s, n), ctx)?;
            let expect = f_of_n(n)? - 1.0 + 0.5 * (-s * s).ln_1p();
            formula = formula.max((sums.sum_xk - expect).abs());
        }
    }
    Ok(vec![
        Check::holds(
            "eta_k_entropy_bound",
            below,
            "S_η + S_k ≥ 1 + ln π for n = 1..10",
        ),
        Check::within(
            "x_k_entropy_sum",
            formula,
            1e-8,
            "S_x + S_k against f(n) - 1 + ln√(1 - γ²a²)",
        ),
    ])
}

fn informational(forms: &dyn ClosedForms, ctx: MeasureContext) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    let sums = bbm_sum(&state(0.5, 1), ctx)?;
    // Smallest |γa| at which the position/wavevector sum drops below the bound.
    let grid = linspace(0.0, 0.99, 991);
    let mut onset = None;
    for &s in &grid {
        let v = bbm_sum(&state(s, 1), ctx)?;
        if v.sum_xk < v.bound {
            onset = Some(s);
            break;
        }
    }
    out.push(Check::info(
        "x_k_sum_below_bound",
        sums.bound - sums.sum_xk,
        format!(
            "S_x + S_k = {:.6} < 1 + ln π = {:.6} at γa = 0.5, n = 1; ground state first below for |γa| ≥ {}",
            sums.sum_xk,
            sums.bound,
            onset.map_or("none".into(), |s| format!("{s:.3}"))
        ),
    ));
    let st = state(0.5, 1);
    let k = forms.measures(&st, Space::Wavevector, ctx)?.fisher;
    out.push(Check::info(
        "uncentered_k_fisher",
        uncentered_k_fisher(&st) / k - 1.0,
        "4<η²> about η = 0 exceeds the wavevector Fisher information 4 Var(η) at γa = 0.5, n = 1",
    ));
    let flat = forms.complexities(&state(0.0, 1), Space::Position)?.c_cr;
    let claimed = 4.0 * (PI * PI / 3.0 - 2.0);
    out.push(Check::info(
        "undeformed_cramer_rao",
        flat / claimed,
        format!("C_CR at γa = 0, n = 1 is {flat:.6}; the value 4(π²/3 - 2) = {claimed:.6} is four times larger"),
    ));
    Ok(out)
}
