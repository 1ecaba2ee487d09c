//! Table builders behind the `eigenstate`, `measures`, `sweep` and `figure`
//! subcommands.

use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;

use pdmwell::info_measures::{entropy_density, f_of_n};
use pdmwell::{
    closed_measures, complexity_closed, complexity_numeric, numeric_measures, ClassicalEnsemble,
    DeformedWell, EigenState, MeasureContext, MeasureSet, Space,
};

use crate::config::{linspace, RunConfig};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, Table};

/// Deformations plotted when none are requested.
pub const FIGURE_DEFORMATIONS: [f64; 3] = [0.0, 0.4, 0.8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Closed,
    Numeric,
}

impl Method {
    fn tag(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    CramerRao,
    FisherShannon,
    Lmc,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::CramerRao, Quantity::FisherShannon, Quantity::Lmc];

    pub fn column(self) -> &'static str {
        match self {
            Quantity::CramerRao => "c_cr",
            Quantity::FisherShannon => "c_fs",
            Quantity::Lmc => "c_lmc",
        }
    }
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "ccr" | "c_cr" => Ok(Quantity::CramerRao),
            "cfs" | "c_fs" => Ok(Quantity::FisherShannon),
            "clmc" | "c_lmc" => Ok(Quantity::Lmc),
            other => Err(CliError::InvalidConfig(format!(
                "unknown quantity '{other}'"
            ))),
        }
    }
}

fn state(n: u32, gamma_a: f64) -> CliResult<EigenState> {
    Ok(EigenState::new(DeformedWell::natural(gamma_a)?, n)?)
}

/// Sample points in `space` covering the support of state `st`; the
/// wavevector range spans a few lobes beyond the main peaks at `±k_n`.
fn grid(st: &EigenState, space: Space, points: usize) -> Vec<f64> {
    match space {
        Space::Position => {
            let a = st.well().a();
            linspace(-a, a, points)
        }
        Space::DeformedEta => {
            let (lo, hi) = st.eta_interval();
            linspace(lo, hi, points)
        }
        Space::Wavevector => {
            let kmax = 2.0 * (st.n() as f64 + 4.0) * PI / st.box_length();
            linspace(-kmax, kmax, points)
        }
    }
}

/// All `(n, γa)` pairs of the configuration in output order.
fn cells(cfg: &RunConfig) -> Vec<(u32, f64)> {
    cfg.n_list
        .iter()
        .flat_map(|&n| cfg.gamma_a_list.iter().map(move |&g| (n, g)))
        .collect()
}

pub const EIGENSTATE_COLUMNS: [&str; 7] = ["space", "n", "gamma_a", "z", "psi_re", "psi_im", "rho"];

pub fn eigenstate_table(cfg: &RunConfig) -> CliResult<Table> {
    let mut table = Table::new(EIGENSTATE_COLUMNS);
    for (n, g) in cells(cfg) {
        let st = state(n, g)?;
        for &space in &cfg.spaces {
            for z in grid(&st, space, cfg.grid_points) {
                let (psi, rho) = match space {
                    Space::Position => {
                        let v = st.eigenfunction_x(z);
                        ((v, 0.0), st.density_x(z))
                    }
                    Space::Wavevector => {
                        let v = st.eigenfunction_k(z);
                        ((v.re, v.im), st.density_k(z))
                    }
                    Space::DeformedEta => {
                        let v = st.eigenfunction_eta(z);
                        ((v, 0.0), st.density_eta(z))
                    }
                };
                table.push(vec![
                    space.tag().into(),
                    n.into(),
                    g.into(),
                    z.into(),
                    psi.0.into(),
                    psi.1.into(),
                    rho.into(),
                ]);
            }
        }
    }
    Ok(table)
}

pub const MEASURE_COLUMNS: [&str; 11] = [
    "space",
    "n",
    "gamma_a",
    "method",
    "shannon",
    "fisher",
    "disequilibrium",
    "l_heisenberg",
    "l_shannon",
    "l_fisher",
    "f_n",
];

pub fn measure_set(st: &EigenState, space: Space, method: Method) -> CliResult<MeasureSet> {
    let ctx = MeasureContext::for_well(st.well());
    Ok(match method {
        Method::Closed => closed_measures(st, space, ctx)?,
        Method::Numeric => numeric_measures(
            &st.density_profile(space),
            Some(st.amplitude_derivative(space)),
            ctx,
        )?,
    })
}

fn space_cells(cfg: &RunConfig) -> Vec<(Space, u32, f64)> {
    cfg.spaces
        .iter()
        .flat_map(|&s| cells(cfg).into_iter().map(move |(n, g)| (s, n, g)))
        .collect()
}

pub fn measures_table(cfg: &RunConfig, method: Method) -> CliResult<Table> {
    let rows: Vec<CliResult<Vec<Cell>>> = space_cells(cfg)
        .into_par_iter()
        .map(|(space, n, g)| {
            let st = state(n, g)?;
            let m = measure_set(&st, space, method)?;
            let f = match space {
                Space::Wavevector => Some(f_of_n(n)?),
                _ => None,
            };
            Ok(vec![
                space.tag().into(),
                n.into(),
                g.into(),
                method.tag().into(),
                m.shannon.into(),
                m.fisher.into(),
                m.disequilibrium.into(),
                m.l_heisenberg.into(),
                m.l_shannon.into(),
                m.l_fisher.into(),
                f.into(),
            ])
        })
        .collect();
    let mut table = Table::new(MEASURE_COLUMNS);
    for row in rows {
        table.push(row?);
    }
    Ok(table)
}

pub const ENTROPY_DENSITY_COLUMNS: [&str; 6] =
    ["space", "n", "gamma_a", "z", "rho", "entropy_density"];

pub fn entropy_density_table(cfg: &RunConfig) -> CliResult<Table> {
    let mut table = Table::new(ENTROPY_DENSITY_COLUMNS);
    for &space in &cfg.spaces {
        for (n, g) in cells(cfg) {
            let st = state(n, g)?;
            let ctx = MeasureContext::for_well(st.well());
            for z in grid(&st, space, cfg.grid_points) {
                let rho = match space {
                    Space::Position => st.density_x(z),
                    Space::Wavevector => st.density_k(z),
                    Space::DeformedEta => st.density_eta(z),
                };
                table.push(vec![
                    space.tag().into(),
                    n.into(),
                    g.into(),
                    z.into(),
                    rho.into(),
                    entropy_density(&st, space, z, ctx).into(),
                ]);
            }
        }
    }
    Ok(table)
}

/// Complexities per `(space, n, γa)`, rows ordered by ascending `γa`
/// within each `(space, n)` block regardless of evaluation order.
pub fn sweep_table(cfg: &RunConfig, quantities: &[Quantity], method: Method) -> CliResult<Table> {
    if quantities.is_empty() {
        return Err(CliError::InvalidConfig("no quantities selected".into()));
    }
    let mut gammas = cfg.gamma_a_list.clone();
    gammas.sort_by(f64::total_cmp);
    let mut ordered = cfg.clone();
    ordered.gamma_a_list = gammas;
    let rows: Vec<CliResult<Vec<Cell>>> = space_cells(&ordered)
        .into_par_iter()
        .map(|(space, n, g)| {
            let st = state(n, g)?;
            let c = match method {
                Method::Closed => complexity_closed(&st, space)?,
                Method::Numeric => complexity_numeric(&measure_set(&st, space, method)?)?,
            };
            let mut row: Vec<Cell> = vec![space.tag().into(), n.into(), g.into()];
            row.extend(quantities.iter().map(|q| {
                Cell::Real(match q {
                    Quantity::CramerRao => c.c_cr,
                    Quantity::FisherShannon => c.c_fs,
                    Quantity::Lmc => c.c_lmc,
                })
            }));
            Ok(row)
        })
        .collect();
    let mut columns = vec!["space", "n", "gamma_a"];
    columns.extend(quantities.iter().map(|q| q.column()));
    let mut table = Table::new(columns);
    for row in rows {
        table.push(row?);
    }
    Ok(table)
}

pub const CLASSICAL_COLUMNS: [&str; 7] = [
    "space",
    "n",
    "gamma_a",
    "z",
    "rho",
    "rho_classical",
    "two_rho_classical",
];

/// Quantum density next to the classical one and its doubled envelope;
/// the classical columns are empty outside position space.
pub fn classical_overlay_table(cfg: &RunConfig) -> CliResult<Table> {
    let mut table = Table::new(CLASSICAL_COLUMNS);
    for (n, g) in cells(cfg) {
        let st = state(n, g)?;
        let cl = ClassicalEnsemble::for_state(&st);
        for &space in &cfg.spaces {
            for z in grid(&st, space, cfg.grid_points) {
                let (rho, classical) = match space {
                    Space::Position => (st.density_x(z), Some(cl.density(z)?)),
                    Space::Wavevector => (st.density_k(z), None),
                    Space::DeformedEta => (st.density_eta(z), None),
                };
                table.push(vec![
                    space.tag().into(),
                    n.into(),
                    g.into(),
                    z.into(),
                    rho.into(),
                    classical.into(),
                    classical.map(|c| 2.0 * c).into(),
                ]);
            }
        }
    }
    Ok(table)
}

/// Default deformation grid of the complexity figure.
pub fn figure_sweep_grid() -> Vec<f64> {
    linspace(-0.98, 0.98, 99)
}

/// Data behind each figure. Deformations and quantum numbers from `cfg`
/// are used only when `overrides` is set.
pub fn figure_table(id: u8, cfg: &RunConfig, overrides: bool) -> CliResult<Table> {
    let mut c = cfg.clone();
    let pick = |c: &mut RunConfig, n: Vec<u32>, g: Vec<f64>, spaces: Vec<Space>| {
        if !overrides {
            c.n_list = n;
            c.gamma_a_list = g;
        }
        c.spaces = spaces;
    };
    match id {
        1 => {
            pick(
                &mut c,
                vec![1, 2, 3],
                FIGURE_DEFORMATIONS.to_vec(),
                vec![Space::Position, Space::Wavevector],
            );
            eigenstate_table(&c)
        }
        2 => {
            pick(
                &mut c,
                vec![10],
                vec![0.8],
                vec![Space::Position, Space::Wavevector],
            );
            classical_overlay_table(&c)
        }
        3 => {
            pick(
                &mut c,
                vec![1, 2, 3],
                FIGURE_DEFORMATIONS.to_vec(),
                vec![Space::Position, Space::Wavevector],
            );
            entropy_density_table(&c)
        }
        4 => {
            pick(
                &mut c,
                vec![1, 2, 3],
                figure_sweep_grid(),
                vec![Space::Position, Space::Wavevector],
            );
            sweep_table(&c, &Quantity::ALL, Method::Closed)
        }
        other => Err(CliError::InvalidConfig(format!(
            "figure id must be 1 to 4, got {other}"
        ))),
    }
}
