//! Remote-current operator: maps the relay's prefault window to the
//! incremental current flowing into the protected line at the remote bus.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::admittance::{omega_for, BlockOrder, FaultSpec, FaultType};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Mat3};
use crate::network::{phase_impedance, BusRole, NetworkModel};
use crate::phasors::{MeasurementWindow, Phasor3};
use crate::settings::Settings;

/// Row selector `D_k` picking one bus's block out of the stacked state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selector {
    block: usize,
    n_blocks: usize,
}

impl Selector {
    pub fn fault(order: &BlockOrder) -> Self {
        Selector {
            block: order.fault_block(),
            n_blocks: order.len(),
        }
    }

    /// Selector for a non-SG bus; SG voltages are not unknowns.
    pub fn bus(net: &NetworkModel, order: &BlockOrder, bus: usize) -> Result<Self> {
        if net.buses()[bus].role() == BusRole::Sg {
            return Err(Error::validation(
                format!("buses[{bus}]"),
                "no voltage selector for an sg bus",
            ));
        }
        Ok(Selector {
            block: order.of_bus(bus),
            n_blocks: order.len(),
        })
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// `D_k ω` as a 3×3 block.
    pub fn apply(&self, omega: &CMatrix) -> Mat3 {
        omega.block(self.block, 0)
    }

    /// The explicit `3 × 3(n+1)` matrix.
    pub fn matrix(&self) -> CMatrix {
        let mut d = CMatrix::zeros(3, 3 * self.n_blocks);
        d.set_block(0, self.block, &Mat3::IDENTITY);
        d
    }
}

/// `Ω^η(m)`: a 3×6 operator on `[v_L(t-δ); i_L(t-δ)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemoteCurrentMap {
    pub from_voltage: Mat3,
    pub from_current: Mat3,
}

impl RemoteCurrentMap {
    pub fn matrix(&self) -> [[Complex64; 6]; 3] {
        let mut out = [[Complex64::new(0.0, 0.0); 6]; 3];
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] = self.from_voltage.0[r][c];
                out[r][c + 3] = self.from_current.0[r][c];
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.from_voltage.is_finite() && self.from_current.is_finite()
    }
}

/// Prefault voltage at the fault point seen from the relay:
/// `v_L(t-δ) - m_T Z i_L(t-δ)`.
pub fn prefault_fault_voltage(z_line: &Mat3, m_t: f64, w: &MeasurementWindow) -> Phasor3 {
    w.v_prev - z_line.scale(m_t.into()).mul_vec(w.i_prev)
}

pub fn build_omega_map(
    net: &NetworkModel,
    fault: &FaultSpec,
    settings: &Settings,
) -> Result<RemoteCurrentMap> {
    if fault.m_f <= 0.0 {
        return Err(Error::BoltedFault {
            what: "build_omega_map",
        });
    }
    let (omega, order) = omega_for(net, fault, settings)?;
    let z = phase_impedance(net.protected_line())?;
    let d_r = Selector::bus(net, &order, net.remote_index())?;
    let d_f = Selector::fault(&order);
    let far = z
        .scale((1.0 - fault.m_t).into())
        .inverse()
        .ok_or_else(|| Error::SingularImpedance("segment F-R".into()))?;
    let from_voltage = far * (d_r.apply(&omega) - d_f.apply(&omega));
    let from_current = -(from_voltage * z.scale(fault.m_t.into()));
    let map = RemoteCurrentMap {
        from_voltage,
        from_current,
    };
    if !map.is_finite() {
        return Err(Error::Singular {
            context: format!("remote-current map at m_T = {}", fault.m_t),
            cond: f64::INFINITY,
        });
    }
    Ok(map)
}

/// `σ = Ω [v_L(t-δ); i_L(t-δ)]`. Reads only the prefault half of the window.
pub fn remote_current(map: &RemoteCurrentMap, w: &MeasurementWindow) -> Phasor3 {
    map.from_voltage.mul_vec(w.v_prev) + map.from_current.mul_vec(w.i_prev)
}

/// Full incremental state `[ṽ_F, ṽ_J, ṽ_C, ĩ_S]` for one fault, one block
/// per entry of the ordering.
#[derive(Debug, Clone)]
pub struct IncrementalState {
    pub order: BlockOrder,
    pub blocks: Vec<Phasor3>,
}

pub fn incremental_state(
    net: &NetworkModel,
    fault: &FaultSpec,
    w: &MeasurementWindow,
    settings: &Settings,
) -> Result<IncrementalState> {
    let (omega, order) = omega_for(net, fault, settings)?;
    let z = phase_impedance(net.protected_line())?;
    let v_f = prefault_fault_voltage(&z, fault.m_t, w);
    let blocks = (0..order.len())
        .map(|k| omega.block(k, 0).mul_vec(v_f))
        .collect();
    Ok(IncrementalState { order, blocks })
}

/// Remote-current maps precomputed over a set of `(m_T, m_F)` points for one
/// network and fault type; reusable across relay windows.
#[derive(Debug, Clone)]
pub struct OmegaTable {
    pub eta: FaultType,
    pub r_f: f64,
    /// `(m_T, m_F, map)`; bolted points (`m_F = 0`) carry no map.
    pub entries: Vec<(f64, f64, Option<RemoteCurrentMap>)>,
}

impl OmegaTable {
    pub fn build(
        net: &NetworkModel,
        eta: FaultType,
        points: &[(f64, f64)],
        settings: &Settings,
    ) -> Result<Self> {
        let r_f = net.relay().r_fault_max;
        let entries = points
            .par_iter()
            .map(|&(m_t, m_f)| {
                let fault = FaultSpec::new(eta, m_t, m_f, r_f);
                fault.validate(settings).map_err(|e| e.at(m_t, m_f))?;
                if m_f == 0.0 {
                    return Ok((m_t, m_f, None));
                }
                build_omega_map(net, &fault, settings)
                    .map(|m| (m_t, m_f, Some(m)))
                    .map_err(|e| e.at(m_t, m_f))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OmegaTable { eta, r_f, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::network::Line;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn window(seed: f64) -> MeasurementWindow {
        let v = Phasor3::new(c(1.0, 0.1 * seed), c(-0.5, -0.85), c(-0.45, 0.9));
        let i = Phasor3::new(c(0.3, -0.2), c(-0.1 * seed, 0.2), c(0.05, 0.1));
        MeasurementWindow::healthy(v, i)
    }

    #[test]
    fn zero_window_gives_zero_current() {
        let net = fixtures::four_bus();
        let fault = FaultSpec::new(FaultType::Ag, 0.4, 0.7, net.relay().r_fault_max);
        let map = build_omega_map(&net, &fault, &Settings::default()).unwrap();
        let w = MeasurementWindow::healthy(Phasor3::ZERO, Phasor3::ZERO);
        assert_eq!(remote_current(&map, &w), Phasor3::ZERO);
    }

    #[test]
    fn scaling_window_scales_current() {
        let net = fixtures::four_bus();
        let fault = FaultSpec::new(FaultType::Bc, 0.6, 0.3, net.relay().r_fault_max);
        let map = build_omega_map(&net, &fault, &Settings::default()).unwrap();
        let w = window(1.0);
        let alpha = c(0.3, -1.7);
        let scaled = MeasurementWindow::healthy(w.v_prev * alpha, w.i_prev * alpha);
        let lhs = remote_current(&map, &scaled);
        let rhs = remote_current(&map, &w) * alpha;
        assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm());
    }

    #[test]
    fn only_prefault_half_matters() {
        let net = fixtures::four_bus();
        let fault = FaultSpec::new(FaultType::Ab, 0.5, 1.0, net.relay().r_fault_max);
        let map = build_omega_map(&net, &fault, &Settings::default()).unwrap();
        let mut w = window(2.0);
        let before = remote_current(&map, &w);
        w.v_now = Phasor3::balanced(c(0.2, 0.3));
        w.i_now = Phasor3::balanced(c(9.0, -4.0));
        assert_eq!(remote_current(&map, &w), before);
    }

    #[test]
    fn bolted_fault_has_no_map() {
        let net = fixtures::four_bus();
        let fault = FaultSpec::new(FaultType::Ag, 0.5, 0.0, net.relay().r_fault_max);
        assert!(matches!(
            build_omega_map(&net, &fault, &Settings::default()),
            Err(Error::BoltedFault { .. })
        ));
    }

    #[test]
    fn open_fault_vanishes() {
        // g = 1e-12 S
        let net = fixtures::four_bus();
        let w = window(1.0);
        for eta in FaultType::ALL {
            let fault = FaultSpec::new(eta, 0.5, 1.0, 1e12);
            let map = build_omega_map(&net, &fault, &Settings::default()).unwrap();
            assert!(remote_current(&map, &w).norm() < 1e-6, "{eta}");
            let st = incremental_state(&net, &fault, &w, &Settings::default()).unwrap();
            let total: f64 = st.blocks.iter().map(|b| b.norm()).sum();
            assert!(total < 1e-6, "{eta}: {total}");
        }
    }

    #[test]
    fn decoupled_line_matches_scalar_formula() {
        let z = c(0.02, 0.2);
        let net = NetworkModel::new(
            fixtures::four_bus().buses().to_vec(),
            fixtures::four_bus()
                .lines()
                .iter()
                .map(|l| {
                    if l.id == "LR" {
                        Line {
                            z0: z,
                            z1: z,
                            ..l.clone()
                        }
                    } else {
                        l.clone()
                    }
                })
                .collect(),
            fixtures::four_bus().relay().clone(),
        )
        .unwrap();
        let fault = FaultSpec::new(FaultType::Ag, 0.3, 0.8, net.relay().r_fault_max);
        let s = Settings::default();
        let map = build_omega_map(&net, &fault, &s).unwrap();
        let (omega, order) = omega_for(&net, &fault, &s).unwrap();
        let diff = omega.block(order.of_bus(net.remote_index()), 0) - omega.block(0, 0);
        let scalar_v = diff.scale(1.0 / ((1.0 - fault.m_t) * z));
        let scalar_i = scalar_v.scale(-fault.m_t * z);
        assert!((map.from_voltage - scalar_v).max_abs() <= 1e-13 * scalar_v.max_abs());
        assert!((map.from_current - scalar_i).max_abs() <= 1e-13 * scalar_i.max_abs());
    }

    #[test]
    fn selector_matrix_picks_block() {
        let net = fixtures::four_bus();
        let s = Settings::default();
        let fault = FaultSpec::new(FaultType::Ag, 0.5, 1.0, 0.15);
        let (omega, order) = omega_for(&net, &fault, &s).unwrap();
        let d = Selector::bus(&net, &order, net.remote_index()).unwrap();
        let picked = d.matrix().matmul(&omega);
        assert_eq!(picked.block(0, 0), d.apply(&omega));
        let g = net.bus_index("G").unwrap();
        assert!(Selector::bus(&net, &order, g).is_err());
    }

    #[test]
    fn table_skips_bolted_points_and_annotates_errors() {
        let net = fixtures::four_bus();
        let s = Settings::default();
        let t = OmegaTable::build(&net, FaultType::Ag, &[(0.5, 0.0), (0.5, 1.0)], &s).unwrap();
        assert!(t.entries[0].2.is_none());
        assert!(t.entries[1].2.is_some());
        match OmegaTable::build(&net, FaultType::Ag, &[(0.0, 1.0)], &s) {
            Err(Error::AtGridPoint { m_t, .. }) => assert_eq!(m_t, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
