//! Fault loops and apparent impedances.
//!
//! A loop projects the relay's phase quantities onto one measurement: a
//! phase-to-ground loop (with zero-sequence compensation of its current) or
//! a phase-to-phase loop. For a fault of type η the voltage at the fault
//! point is a fixed resistive map of the total fault current, so with the
//! prefault currents cancelling across the fault point, the loop sees
//!
//! ```text
//! z_A = m_T z + (m_F R_F / d) · (row · (ĩ_L + σ)) / i_A
//! ```
//!
//! where `row / d` is the loop selector applied to the fault's resistance
//! pattern. For ag this is `m_F R_F (ĩ_L^a + σ^a) / (i_L^a + k i_L^0)`, and for
//! ab it is `(m_F R_F / 2)(ψĩ_L + ψσ) / ψi_L`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::admittance::{FaultSpec, FaultType};
use crate::error::{Error, Result};
use crate::network::Line;
use crate::phasors::{loop_projection, zero_sequence, MeasurementWindow, Phasor3};
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Loop {
    Ag,
    Bg,
    Cg,
    Ab,
    Bc,
    Ca,
}

impl Loop {
    pub const ALL: [Loop; 6] = [Loop::Ag, Loop::Bg, Loop::Cg, Loop::Ab, Loop::Bc, Loop::Ca];

    pub fn is_ground(self) -> bool {
        matches!(self, Loop::Ag | Loop::Bg | Loop::Cg)
    }

    /// Row selector ψ.
    pub fn psi(self) -> [i32; 3] {
        match self {
            Loop::Ag => [1, 0, 0],
            Loop::Bg => [0, 1, 0],
            Loop::Cg => [0, 0, 1],
            Loop::Ab => [1, -1, 0],
            Loop::Bc => [0, 1, -1],
            Loop::Ca => [-1, 0, 1],
        }
    }

    pub fn phases(self) -> &'static [usize] {
        match self {
            Loop::Ag => &[0],
            Loop::Bg => &[1],
            Loop::Cg => &[2],
            Loop::Ab => &[0, 1],
            Loop::Bc => &[1, 2],
            Loop::Ca => &[0, 2],
        }
    }

    /// Loop used for a fault type's characteristic.
    pub fn for_fault(eta: FaultType) -> Loop {
        match eta {
            FaultType::Ag => Loop::Ag,
            FaultType::Bg => Loop::Bg,
            FaultType::Cg => Loop::Cg,
            FaultType::Ab | FaultType::Abg | FaultType::Abc | FaultType::Abcg => Loop::Ab,
            FaultType::Bc | FaultType::Bcg => Loop::Bc,
            FaultType::Ac | FaultType::Acg => Loop::Ca,
        }
    }

    /// Every loop that measures the fault correctly.
    pub fn candidates(eta: FaultType) -> Vec<Loop> {
        Loop::ALL.into_iter().filter(|lp| lp.sees(eta)).collect()
    }

    pub fn sees(self, eta: FaultType) -> bool {
        self.phases().iter().all(|p| eta.phases().contains(p))
            && (!self.is_ground() || eta.is_grounded())
    }

    pub fn rotate_phases(self) -> Loop {
        match self {
            Loop::Ag => Loop::Bg,
            Loop::Bg => Loop::Cg,
            Loop::Cg => Loop::Ag,
            Loop::Ab => Loop::Bc,
            Loop::Bc => Loop::Ca,
            Loop::Ca => Loop::Ab,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Loop::Ag => "ag",
            Loop::Bg => "bg",
            Loop::Cg => "cg",
            Loop::Ab => "ab",
            Loop::Bc => "bc",
            Loop::Ca => "ca",
        }
    }

    /// Loop current: `ψ i` plus `k i_0` on ground loops.
    pub fn current(self, i: Phasor3, k: Complex64) -> Complex64 {
        let base = loop_projection(self, i);
        if self.is_ground() {
            base + k * zero_sequence(i)
        } else {
            base
        }
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Loop selector applied to the fault's resistance pattern: the fault-point
/// loop voltage is `(R / denom) · row · i_fault`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoopGain {
    pub row: [i32; 3],
    pub denom: u32,
}

impl LoopGain {
    pub fn new(lp: Loop, eta: FaultType) -> Result<Self> {
        if !lp.sees(eta) {
            return Err(Error::LoopMismatch { lp, eta });
        }
        let (m, denom) = eta.resistance_pattern();
        let psi = lp.psi();
        let mut row = [0i32; 3];
        for (c, out) in row.iter_mut().enumerate() {
            *out = (0..3).map(|r| psi[r] * m[r][c]).sum();
        }
        Ok(LoopGain { row, denom })
    }

    /// Loop voltage at the fault point for fault resistance `r` and total
    /// fault current `f`.
    pub fn apply(&self, r: f64, f: Phasor3) -> Complex64 {
        let v = f.to_array();
        let mut dot = Complex64::new(0.0, 0.0);
        for (c, x) in self.row.iter().zip(v) {
            if *c != 0 {
                dot += x * f64::from(*c);
            }
        }
        dot * (r / f64::from(self.denom))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopQuantities {
    pub v_a: Complex64,
    pub i_a: Complex64,
    pub v_a_inc: Complex64,
    pub i_a_inc: Complex64,
    pub k: Complex64,
}

pub fn loop_quantities(lp: Loop, w: &MeasurementWindow, line: &Line) -> LoopQuantities {
    let k = line.k();
    LoopQuantities {
        v_a: loop_projection(lp, w.v_now),
        i_a: lp.current(w.i_now, k),
        v_a_inc: loop_projection(lp, w.v_inc()),
        i_a_inc: lp.current(w.i_inc(), k),
        k,
    }
}

/// `z_A` from the loop's own formula with a supplied remote current `σ`.
pub fn apparent_impedance(
    lp: Loop,
    fault: &FaultSpec,
    w: &MeasurementWindow,
    line: &Line,
    sigma: Phasor3,
    settings: &Settings,
) -> Result<Complex64> {
    let gain = LoopGain::new(lp, fault.eta)?;
    if fault.m_f == 0.0 {
        return Ok(line.z1 * fault.m_t);
    }
    let i_a = lp.current(w.i_now, line.k());
    if i_a.norm() <= settings.i_min {
        return Err(Error::Underexcited {
            lp,
            magnitude: i_a.norm(),
        });
    }
    let fault_term = gain.apply(fault.resistance(), w.i_inc() + sigma);
    Ok(line.z1 * fault.m_t + fault_term / i_a)
}

/// `z̃_A`: the same fault-point voltage divided by the incremental loop
/// current. It excludes the prefault fault-point voltage, so it is not
/// the ratio `ṽ_A / ĩ_A`; see [`prefault_loop_voltage`].
pub fn incremental_apparent_impedance(
    lp: Loop,
    fault: &FaultSpec,
    w: &MeasurementWindow,
    line: &Line,
    sigma: Phasor3,
    settings: &Settings,
) -> Result<Complex64> {
    let gain = LoopGain::new(lp, fault.eta)?;
    if fault.m_f == 0.0 {
        return Ok(line.z1 * fault.m_t);
    }
    let i_a = lp.current(w.i_inc(), line.k());
    if i_a.norm() <= settings.i_min {
        return Err(Error::DegenerateDenominator {
            lp,
            magnitude: i_a.norm(),
        });
    }
    let fault_term = gain.apply(fault.resistance(), w.i_inc() + sigma);
    Ok(line.z1 * fault.m_t + fault_term / i_a)
}

/// `ψ v_F(t-δ)`, the loop's prefault fault-point voltage:
/// `ṽ_A / ĩ_A = z̃_A - ψ v_F(t-δ) / ĩ_A`.
pub fn prefault_loop_voltage(lp: Loop, fault_voltage_prev: Phasor3) -> Complex64 {
    loop_projection(lp, fault_voltage_prev)
}

/// `v_A / i_A` straight from the measurements.
pub fn measured_impedance(lp: Loop, w: &MeasurementWindow, line: &Line) -> Complex64 {
    let q = loop_quantities(lp, w, line);
    q.v_a / q.i_a
}

/// `ṽ_A / ĩ_A` straight from the measurements.
pub fn measured_incremental_impedance(lp: Loop, w: &MeasurementWindow, line: &Line) -> Complex64 {
    let q = loop_quantities(lp, w, line);
    q.v_a_inc / q.i_a_inc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasors::rot120;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn line(z1: Complex64, z0: Complex64) -> Line {
        Line {
            id: "LR".into(),
            from: "L".into(),
            to: "R".into(),
            z1,
            z0,
        }
    }

    #[test]
    fn ground_loop_quantities() {
        let a = rot120();
        let w = MeasurementWindow::new(
            Phasor3::balanced(c(1.0, 0.0)),
            Phasor3::ZERO,
            Phasor3::new(c(0.8, 0.0), a * a, a),
            Phasor3::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
        );
        // k = z0/z1 - 1 = 1
        let q = loop_quantities(Loop::Ag, &w, &line(c(0.0, 1.0), c(0.0, 2.0)));
        assert_eq!(q.k, c(1.0, 0.0));
        assert_eq!(q.v_a, c(0.8, 0.0));
        assert!((q.i_a - c(1.0 + 1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_loop_quantities() {
        let a = rot120();
        let v = Phasor3::balanced(c(1.0, 0.0));
        let i = Phasor3::new(c(2.0, 0.0), c(0.5, 0.5), c(0.0, 0.0));
        let w = MeasurementWindow::new(v, i, v, i);
        let q = loop_quantities(Loop::Ab, &w, &line(c(0.0, 1.0), c(0.0, 3.0)));
        assert!((q.v_a - (1.0 - a * a)).norm() < 1e-15);
        assert_eq!(q.i_a, c(1.5, -0.5));
        assert_eq!(q.i_a_inc, c(0.0, 0.0));
    }

    #[test]
    fn bolted_fault_reads_line_fraction() {
        let l = line(c(0.1, 1.0), c(0.3, 3.0));
        let w = MeasurementWindow::healthy(Phasor3::ZERO, Phasor3::ZERO);
        let f = FaultSpec::new(FaultType::Ag, 0.7, 0.0, 1.0);
        let z =
            apparent_impedance(Loop::Ag, &f, &w, &l, Phasor3::ZERO, &Settings::default()).unwrap();
        assert!((z - c(0.07, 0.7)).norm() < 1e-15);
        let f = FaultSpec::new(FaultType::Ag, 1e-6, 0.0, 1.0);
        let z =
            apparent_impedance(Loop::Ag, &f, &w, &l, Phasor3::ZERO, &Settings::default()).unwrap();
        assert!(z.norm() < 1e-5);
        let zt = incremental_apparent_impedance(
            Loop::Ag,
            &f,
            &w,
            &l,
            Phasor3::ZERO,
            &Settings::default(),
        )
        .unwrap();
        assert_eq!(zt, z);
    }

    #[test]
    fn unenergized_loops_are_errors() {
        let l = line(c(0.1, 1.0), c(0.3, 3.0));
        let v = Phasor3::balanced(c(1.0, 0.0));
        let i = Phasor3::balanced(c(0.2, -0.1));
        let healthy = MeasurementWindow::healthy(v, i);
        let f = FaultSpec::new(FaultType::Ag, 0.5, 1.0, 1.0);
        let s = Settings::default();
        assert!(matches!(
            incremental_apparent_impedance(Loop::Ag, &f, &healthy, &l, Phasor3::ZERO, &s),
            Err(Error::DegenerateDenominator { .. })
        ));
        let dead = MeasurementWindow::healthy(v, Phasor3::ZERO);
        assert!(matches!(
            apparent_impedance(Loop::Ag, &f, &dead, &l, Phasor3::ZERO, &s),
            Err(Error::Underexcited { .. })
        ));
    }

    #[test]
    fn mismatched_loop_is_rejected() {
        assert!(LoopGain::new(Loop::Ag, FaultType::Bc).is_err());
        assert!(LoopGain::new(Loop::Ab, FaultType::Ag).is_err());
        assert!(LoopGain::new(Loop::Ag, FaultType::Ab).is_err());
        assert!(LoopGain::new(Loop::Bc, FaultType::Abg).is_err());
    }

    #[test]
    fn gains_for_the_two_modelled_loops() {
        assert_eq!(
            LoopGain::new(Loop::Ag, FaultType::Ag).unwrap(),
            LoopGain {
                row: [1, 0, 0],
                denom: 1
            }
        );
        // (R/4)·[2, -2, 0] = (R/2)·ψ^ab
        assert_eq!(
            LoopGain::new(Loop::Ab, FaultType::Ab).unwrap(),
            LoopGain {
                row: [2, -2, 0],
                denom: 4
            }
        );
        assert_eq!(
            LoopGain::new(Loop::Ab, FaultType::Abc).unwrap(),
            LoopGain {
                row: [3, -3, 0],
                denom: 9
            }
        );
    }

    #[test]
    fn candidate_loops() {
        assert_eq!(
            Loop::candidates(FaultType::Abc),
            vec![Loop::Ab, Loop::Bc, Loop::Ca]
        );
        assert_eq!(Loop::candidates(FaultType::Ag), vec![Loop::Ag]);
        assert_eq!(
            Loop::candidates(FaultType::Abg),
            vec![Loop::Ag, Loop::Bg, Loop::Ab]
        );
        for eta in FaultType::ALL {
            assert!(Loop::for_fault(eta).sees(eta));
        }
    }
}
