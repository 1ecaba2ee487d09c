//! Cramér–Rao, Fisher–Shannon and LMC complexities.
//!
//! `C_CR = F·L_H²`, `C_FS = F·L_S²/(2πe)` and `C_LMC = D·L_S`. All three are
//! dimensionless, invariant under translations and rescalings of the
//! variable, and bounded below by 1.

use std::f64::consts::{E, PI};

use crate::deformed_space::DeformedWell;
use crate::error::{Error, Result};
use crate::info_measures::{closed_measures, f_infinity, f_of_n, MeasureContext, MeasureSet};
use crate::profile::Space;
use crate::special::{atanh_ratio, atanh_remainder};
use crate::well_model::EigenState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexitySet {
    pub c_cr: f64,
    pub c_fs: f64,
    pub c_lmc: f64,
}

impl ComplexitySet {
    pub fn as_array(&self) -> [f64; 3] {
        [self.c_cr, self.c_fs, self.c_lmc]
    }

    /// `C_CR > C_FS > C_LMC > 1`.
    pub fn is_ordered(&self) -> bool {
        self.c_cr > self.c_fs && self.c_fs > self.c_lmc && self.c_lmc > 1.0
    }
}

/// Combines already computed measures.
pub fn complexity_numeric(m: &MeasureSet) -> Result<ComplexitySet> {
    if !m.fisher.is_finite() {
        return Err(Error::NonFinite {
            at: f64::NAN,
            value: m.fisher,
        });
    }
    Ok(ComplexitySet {
        c_cr: m.fisher * m.variance(),
        c_fs: m.fisher * m.l_shannon * m.l_shannon / (2.0 * PI * E),
        c_lmc: m.disequilibrium * m.l_shannon,
    })
}

/// Closed-form complexities of `state`.
///
/// Position space uses the closed forms directly, with the common factor
/// `(γa)³` cancelled out of the Cramér–Rao bracket so the expression stays
/// finite at `γa = 0`. Wavevector and η space do not depend on `γa`.
pub fn complexity_closed(state: &EigenState, space: Space) -> Result<ComplexitySet> {
    let s = state.well().gamma_a();
    let r = atanh_ratio(s);
    let t = s * r;
    let nn = state.n() as f64 * PI;
    let (t2, n2) = (t * t, nn * nn);
    let one_m = 1.0 - s * s;
    match space {
        Space::Position => {
            let rem = atanh_remainder(s);
            let kinetic = 1.0 + t2 / (4.0 * t2 + n2);
            let spread = n2 * (rem * n2 * n2 + 2.0 * r * r * n2 * (r - 2.0) + s * s * r.powi(5))
                / ((4.0 * t2 + n2) * (t2 + n2).powi(2));
            let c_cr = n2 / (one_m * one_m * r.powi(5)) * kinetic * spread;
            let n = state.n() as f64;
            let c_fs = 8.0 * PI * n * n / E.powi(3) / (one_m * r) * kinetic;
            let c_lmc =
                3.0 / E / (one_m.sqrt() * r) * 4.0 * n2 * n2 / ((t2 + n2) * (t2 + 4.0 * n2));
            Ok(ComplexitySet { c_cr, c_fs, c_lmc })
        }
        Space::Wavevector => {
            let f = f_of_n(state.n())?;
            let bracket = 1.0 / 12.0 - 0.5 / n2;
            Ok(ComplexitySet {
                c_cr: n2 / 3.0 - 2.0,
                c_fs: (2.0 * f - 1.0).exp() / (2.0 * PI) * bracket,
                c_lmc: f.exp() / (12.0 * PI) * (1.0 + 7.5 / n2),
            })
        }
        Space::DeformedEta => complexity_numeric(&closed_measures(
            state,
            space,
            MeasureContext::for_well(state.well()),
        )?),
    }
}

/// Leading large-n behaviour of [`complexity_closed`].
pub fn rydberg_asymptotics(well: &DeformedWell, space: Space, n: u32) -> Result<ComplexitySet> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "quantum number must be at least 1".into(),
        ));
    }
    let s = well.gamma_a();
    let r = atanh_ratio(s);
    let one_m = 1.0 - s * s;
    let nf = n as f64;
    let n2 = (nf * PI).powi(2);
    match space {
        Space::Position => Ok(ComplexitySet {
            c_cr: n2 * atanh_remainder(s) / (one_m * one_m * r.powi(5)),
            c_fs: 8.0 * PI * nf * nf / E.powi(3) / (one_m * r),
            c_lmc: 3.0 / E / (one_m.sqrt() * r),
        }),
        Space::Wavevector => {
            let f = f_infinity();
            Ok(ComplexitySet {
                c_cr: n2 / 3.0,
                c_fs: (2.0 * f - 1.0).exp() / (24.0 * PI),
                c_lmc: f.exp() / (12.0 * PI),
            })
        }
        Space::DeformedEta => Err(Error::InvalidParameter(
            "large-n asymptotics are tabulated for position and wavevector space".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info_measures::numeric_measures;
    use crate::numerics::Interval;
    use crate::profile::DensityProfile;
    use crate::special::EULER_GAMMA;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn state(s: f64, n: u32) -> EigenState {
        EigenState::new(DeformedWell::natural(s).unwrap(), n).unwrap()
    }

    #[test]
    fn undeformed_position_values() {
        let c = complexity_closed(&state(0.0, 1), Space::Position).unwrap();
        assert_relative_eq!(c.c_cr, PI * PI / 3.0 - 2.0, max_relative = 1e-14);
        assert_relative_eq!(c.c_fs, 8.0 * PI / E.powi(3), max_relative = 1e-14);
        assert_relative_eq!(c.c_lmc, 3.0 / E, max_relative = 1e-14);
        assert_relative_eq!(c.c_fs, 1.251_285_505_8, max_relative = 1e-9);
        let tiny = complexity_closed(&state(1e-10, 3), Space::Position).unwrap();
        assert_relative_eq!(tiny.c_cr, 9.0 * PI * PI / 3.0 - 2.0, max_relative = 1e-12);
    }

    #[test]
    fn wavevector_lmc_ground_state() {
        let c = complexity_closed(&state(0.3, 1), Space::Wavevector).unwrap();
        assert_abs_diff_eq!(c.c_lmc, 1.159_123, epsilon = 1e-6);
    }

    #[test]
    fn closed_matches_recomposed_measures() {
        for n in 1..=3 {
            for &s in &[0.2, -0.2, 0.5, -0.5, 0.8, -0.8] {
                let st = state(s, n);
                for space in [Space::Position, Space::Wavevector] {
                    let direct = complexity_closed(&st, space).unwrap();
                    let m = closed_measures(&st, space, MeasureContext::default()).unwrap();
                    let via = complexity_numeric(&m).unwrap();
                    for (a, b) in direct.as_array().into_iter().zip(via.as_array()) {
                        assert_relative_eq!(a, b, max_relative = 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn even_in_deformation() {
        for i in 0..37 {
            let s = -0.9 + 0.05 * i as f64;
            for space in [Space::Position, Space::Wavevector] {
                let p = complexity_closed(&state(s, 2), space).unwrap();
                let m = complexity_closed(&state(-s, 2), space).unwrap();
                for (a, b) in p.as_array().into_iter().zip(m.as_array()) {
                    assert!((a - b).abs() <= 1e-9 * a.abs());
                }
            }
        }
    }

    #[test]
    fn ground_state_ordering() {
        for i in 0..37 {
            let s = -0.9 + 0.05 * i as f64;
            for space in [Space::Position, Space::Wavevector] {
                let c = complexity_closed(&state(s, 1), space).unwrap();
                assert!(c.is_ordered(), "{space} at {s}: {c:?}");
            }
        }
    }

    #[test]
    fn rydberg_limits() {
        let w = DeformedWell::natural(0.5).unwrap();
        let a = rydberg_asymptotics(&w, Space::Position, 100).unwrap();
        let c = complexity_closed(&EigenState::new(w, 100).unwrap(), Space::Position).unwrap();
        assert!((a.c_cr / c.c_cr - 1.0).abs() < 1e-3);
        let k = rydberg_asymptotics(&w, Space::Wavevector, 7).unwrap();
        assert_relative_eq!(
            k.c_lmc,
            2.0 / 3.0 * (2.0 * (1.0 - EULER_GAMMA)).exp(),
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(k.c_lmc, 1.552_868, epsilon = 1e-6);
        let flat = DeformedWell::natural(0.0).unwrap();
        let exact = complexity_closed(&EigenState::new(flat, 5).unwrap(), Space::Position).unwrap();
        assert_relative_eq!(
            rydberg_asymptotics(&flat, Space::Position, 5).unwrap().c_fs,
            exact.c_fs,
            max_relative = 1e-14
        );
        assert!(rydberg_asymptotics(&w, Space::Position, 0).is_err());
    }

    #[test]
    fn quadratic_growth() {
        for &s in &[0.0, 0.5, -0.8] {
            let c100x = complexity_closed(&state(s, 100), Space::Position).unwrap();
            let c200x = complexity_closed(&state(s, 200), Space::Position).unwrap();
            let c100k = complexity_closed(&state(s, 100), Space::Wavevector).unwrap();
            let c200k = complexity_closed(&state(s, 200), Space::Wavevector).unwrap();
            for ratio in [
                c200x.c_cr / c100x.c_cr,
                c200x.c_fs / c100x.c_fs,
                c200k.c_cr / c100k.c_cr,
            ] {
                assert!((ratio / 4.0 - 1.0).abs() < 0.01);
            }
            for ratio in [c200x.c_lmc / c100x.c_lmc, c200k.c_lmc / c100k.c_lmc] {
                assert!((ratio - 1.0).abs() < 0.01);
            }
            // f(n) approaches its limit only like 1/n.
            let limit =
                rydberg_asymptotics(&DeformedWell::natural(s).unwrap(), Space::Wavevector, 1)
                    .unwrap();
            let gap = |c: &ComplexitySet| (c.c_fs / limit.c_fs - 1.0).abs();
            assert!(gap(&c200k) < gap(&c100k) && gap(&c200k) < 0.02);
        }
    }

    #[test]
    fn infinite_fisher_rejected() {
        let p = DensityProfile::new(Space::Position, Interval::new(0.0, 1.0).unwrap(), |_| 1.0);
        let m = numeric_measures(&p, None, MeasureContext::default()).unwrap();
        assert!(matches!(
            complexity_numeric(&m),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn gaussian_saturates_bounds() {
        let sd = 1.3;
        let m = MeasureSet {
            shannon: 0.5 * (2.0 * PI * E * sd * sd).ln(),
            fisher: 1.0 / (sd * sd),
            disequilibrium: 1.0 / (2.0 * sd * PI.sqrt()),
            l_heisenberg: sd,
            l_shannon: (2.0 * PI * E).sqrt() * sd,
            l_fisher: sd,
        };
        let c = complexity_numeric(&m).unwrap();
        assert_abs_diff_eq!(c.c_cr, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.c_fs, 1.0, epsilon = 1e-12);
        assert_relative_eq!(c.c_lmc, (E / 2.0).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn numeric_complexities_scale_invariant() {
        let ctx = MeasureContext::default();
        let base = state(0.4, 2);
        let wide = EigenState::new(DeformedWell::new(0.4, 3.5, 1.0, 1.0).unwrap(), 2).unwrap();
        let c = |st: &EigenState| {
            let sp = Space::Position;
            let m = numeric_measures(
                &st.density_profile(sp),
                Some(st.amplitude_derivative(sp)),
                ctx,
            )
            .unwrap();
            complexity_numeric(&m).unwrap()
        };
        for (a, b) in c(&base).as_array().into_iter().zip(c(&wide).as_array()) {
            assert_relative_eq!(a, b, max_relative = 1e-8);
        }
    }
}
