//! Direct fault simulation: the oracle for the incremental pipeline.
//!
//! The prefault and during-fault networks are each solved outright with a
//! modified nodal formulation: unknowns are the non-SG node voltages
//! (including the fault point F), the two protected-segment currents, and
//! one current per zero-resistance fault element. SG voltages and IBR
//! source currents are held at their setpoints in both solves. Stamping and
//! factorization here share no code with [`crate::admittance`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::admittance::Block;
use crate::admittance::{FaultSpec, FaultType};
use crate::error::{Error, Result};
use crate::incremental::{
    build_omega_map, incremental_state, prefault_fault_voltage, remote_current,
};
use crate::loops::{
    apparent_impedance, incremental_apparent_impedance, measured_impedance,
    measured_incremental_impedance, prefault_loop_voltage, Loop,
};
use crate::network::{BusKind, NetworkModel};
use crate::phasors::{MeasurementWindow, Phasor3};
use crate::settings::Settings;

pub const SIGMA_TOL: f64 = 1e-9;
pub const Z_TOL: f64 = 1e-9;
pub const STATE_TOL: f64 = 1e-9;
pub const BALANCE_TOL: f64 = 1e-10;
pub const KCL_TOL: f64 = 1e-10;

type M3 = [[Complex64; 3]; 3];

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn line_matrix(z1: Complex64, z0: Complex64) -> M3 {
    let s = (z0 + z1 * 2.0) / 3.0;
    let m = (z0 - z1) / 3.0;
    [[s, m, m], [m, s, m], [m, m, s]]
}

fn invert(m: &M3) -> Option<M3> {
    let a = DMatrix::from_fn(3, 3, |r, c| m[r][c]);
    let inv = a.try_inverse()?;
    Some(std::array::from_fn(|r| {
        std::array::from_fn(|c| inv[(r, c)])
    }))
}

fn apply(m: &M3, x: &Phasor3) -> Phasor3 {
    let v = x.to_array();
    Phasor3::from_array(std::array::from_fn(|r| {
        (0..3).map(|k| m[r][k] * v[k]).sum()
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BusState {
    pub id: String,
    pub voltage: Phasor3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceCurrent {
    pub id: String,
    pub current: Phasor3,
}

/// One steady-state solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkState {
    pub buses: Vec<BusState>,
    pub fault_voltage: Phasor3,
    /// Current each SG injects into the network.
    pub sg_currents: Vec<SourceCurrent>,
    /// IBR source currents (the Norton current, not the terminal current).
    pub ibr_source_currents: Vec<SourceCurrent>,
    /// Current from L into the protected line.
    pub i_local: Phasor3,
    /// Current from R into the protected line.
    pub i_remote: Phasor3,
    /// Current drawn by the fault.
    pub fault_current: Phasor3,
    /// Largest per-bus KCL mismatch relative to the largest current at that bus.
    pub kcl_residual: f64,
}

impl NetworkState {
    pub fn voltage(&self, id: &str) -> Option<Phasor3> {
        self.buses.iter().find(|b| b.id == id).map(|b| b.voltage)
    }

    pub fn sg_current(&self, id: &str) -> Option<Phasor3> {
        self.sg_currents
            .iter()
            .find(|s| s.id == id)
            .map(|s| s.current)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub fault: FaultSpec,
    pub prefault: NetworkState,
    #[serde(rename = "faulted")]
    pub fault_state: NetworkState,
    /// Relay window at L.
    pub window: MeasurementWindow,
    /// The same quantities at R.
    pub remote_window: MeasurementWindow,
    pub fault_current: Phasor3,
}

impl ScenarioResult {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn incremental_voltage(&self, id: &str) -> Option<Phasor3> {
        Some(self.fault_state.voltage(id)? - self.prefault.voltage(id)?)
    }
}

/// Fault elements active in one solve.
enum FaultModel {
    None,
    Resistive {
        g: f64,
        elements: Vec<(usize, Option<usize>)>,
    },
    Bolted {
        elements: Vec<(usize, Option<usize>)>,
    },
}

/// Elements of a bolted fault reduced to a spanning forest over
/// {a, b, c, ground}; parallel zero-resistance loops leave the currents
/// undetermined.
fn spanning_elements(eta: FaultType) -> Vec<(usize, Option<usize>)> {
    let mut parent = [0usize, 1, 2, 3];
    fn find(p: &mut [usize; 4], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut out = Vec::new();
    for (x, y) in eta.elements() {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y.unwrap_or(3)));
        if rx != ry {
            parent[rx] = ry;
            out.push((x, y));
        }
    }
    out
}

struct Layout {
    /// Scalar offset of each bus's voltage block; `None` for SG buses.
    volt: Vec<Option<usize>>,
    fault: usize,
    seg_local: usize,
    seg_remote: usize,
    bolted: usize,
    size: usize,
}

fn solve_state(net: &NetworkModel, m_t: f64, model: &FaultModel) -> Result<NetworkState> {
    let buses = net.buses();
    let mut volt = Vec::with_capacity(buses.len());
    let mut next = 0;
    for b in buses {
        if matches!(b.kind, BusKind::Sg { .. }) {
            volt.push(None);
        } else {
            volt.push(Some(next));
            next += 3;
        }
    }
    let n_bolted = match model {
        FaultModel::Bolted { elements } => elements.len(),
        _ => 0,
    };
    let lay = Layout {
        volt,
        fault: next,
        seg_local: next + 3,
        seg_remote: next + 6,
        bolted: next + 9,
        size: next + 9 + n_bolted,
    };
    // rows: node KCL (next + 3), then 6 segment constraints, then bolted constraints
    let n = lay.size;
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    let mut rhs = DVector::<Complex64>::zeros(n);
    let known = |i: usize| match &buses[i].kind {
        BusKind::Sg { voltage } => Some(*voltage),
        _ => None,
    };

    let mut line_adm = Vec::with_capacity(net.lines().len());
    for (li, line) in net.lines().iter().enumerate() {
        let from = net.bus_index(&line.from).expect("validated");
        let to = net.bus_index(&line.to).expect("validated");
        let z = line_matrix(line.z1, line.z0);
        let y = invert(&z).ok_or_else(|| Error::SingularImpedance(format!("line {}", line.id)))?;
        line_adm.push((from, to, y, z));
        if li == net.protected_index() {
            continue;
        }
        for (p, q) in [(from, to), (to, from)] {
            let Some(rp) = lay.volt[p] else { continue };
            for r in 0..3 {
                for c in 0..3 {
                    a[(rp + r, rp + c)] += y[r][c];
                    match (lay.volt[q], known(q)) {
                        (Some(cq), _) => a[(rp + r, cq + c)] -= y[r][c],
                        (None, Some(e)) => rhs[rp + r] += y[r][c] * e.to_array()[c],
                        (None, None) => unreachable!(),
                    }
                }
            }
        }
    }

    for (i, b) in buses.iter().enumerate() {
        let Some(rp) = lay.volt[i] else { continue };
        let (shunt, inj) = match &b.kind {
            BusKind::Ibr {
                current,
                admittance,
            } => (admittance.0, Some(*current)),
            BusKind::Junction { admittance } => (admittance.0, None),
            BusKind::Sg { .. } => unreachable!(),
        };
        for r in 0..3 {
            for c in 0..3 {
                a[(rp + r, rp + c)] += shunt[r][c];
            }
            if let Some(inj) = inj {
                rhs[rp + r] += inj.to_array()[r];
            }
        }
    }

    // protected line segments as branch currents
    let (_, _, _, z_line) = line_adm[net.protected_index()];
    let local = lay.volt[net.local_index()].expect("terminals are not sg");
    let remote = lay.volt[net.remote_index()].expect("terminals are not sg");
    let kcl_rows = lay.fault + 3;
    for (seg, node, frac, row0) in [
        (lay.seg_local, local, m_t, kcl_rows),
        (lay.seg_remote, remote, 1.0 - m_t, kcl_rows + 3),
    ] {
        for p in 0..3 {
            a[(node + p, seg + p)] += Complex64::new(1.0, 0.0);
            a[(lay.fault + p, seg + p)] -= Complex64::new(1.0, 0.0);
            a[(row0 + p, node + p)] = Complex64::new(1.0, 0.0);
            a[(row0 + p, lay.fault + p)] = Complex64::new(-1.0, 0.0);
            for q in 0..3 {
                a[(row0 + p, seg + q)] = -z_line[p][q] * frac;
            }
        }
    }

    let f = lay.fault;
    match model {
        FaultModel::None => {}
        FaultModel::Resistive { g, elements } => {
            let g = Complex64::new(*g, 0.0);
            for &(x, y) in elements {
                a[(f + x, f + x)] += g;
                if let Some(y) = y {
                    a[(f + y, f + y)] += g;
                    a[(f + x, f + y)] -= g;
                    a[(f + y, f + x)] -= g;
                }
            }
        }
        FaultModel::Bolted { elements } => {
            let row0 = kcl_rows + 6;
            for (k, &(x, y)) in elements.iter().enumerate() {
                let j = lay.bolted + k;
                a[(f + x, j)] += Complex64::new(1.0, 0.0);
                a[(row0 + k, f + x)] = Complex64::new(1.0, 0.0);
                if let Some(y) = y {
                    a[(f + y, j)] -= Complex64::new(1.0, 0.0);
                    a[(row0 + k, f + y)] = Complex64::new(-1.0, 0.0);
                }
            }
        }
    }

    let x = a.clone().lu().solve(&rhs).ok_or_else(|| Error::Singular {
        context: "simulator nodal system".into(),
        cond: f64::INFINITY,
    })?;
    if x.iter().any(|z| !z.is_finite()) {
        return Err(Error::Singular {
            context: "simulator nodal system".into(),
            cond: f64::INFINITY,
        });
    }

    let block = |off: usize| Phasor3::new(x[off], x[off + 1], x[off + 2]);
    let v_of = |i: usize| match lay.volt[i] {
        Some(off) => block(off),
        None => known(i).expect("sg"),
    };
    let i_local = block(lay.seg_local);
    let i_remote = block(lay.seg_remote);
    let fault_voltage = block(f);

    // currents leaving each bus through non-protected lines
    let mut out_current = vec![Phasor3::ZERO; buses.len()];
    let mut max_term = vec![0.0f64; buses.len()];
    for (li, (from, to, y, _)) in line_adm.iter().enumerate() {
        if li == net.protected_index() {
            continue;
        }
        let flow = apply(y, &(v_of(*from) - v_of(*to)));
        out_current[*from] = out_current[*from] + flow;
        out_current[*to] = out_current[*to] - flow;
        max_term[*from] = max_term[*from].max(flow.norm());
        max_term[*to] = max_term[*to].max(flow.norm());
    }
    out_current[net.local_index()] = out_current[net.local_index()] + i_local;
    out_current[net.remote_index()] = out_current[net.remote_index()] + i_remote;
    max_term[net.local_index()] = max_term[net.local_index()].max(i_local.norm());
    max_term[net.remote_index()] = max_term[net.remote_index()].max(i_remote.norm());

    let mut kcl_residual: f64 = 0.0;
    let mut sg_currents = Vec::new();
    let mut ibr_source_currents = Vec::new();
    for (i, b) in buses.iter().enumerate() {
        match &b.kind {
            BusKind::Sg { .. } => sg_currents.push(SourceCurrent {
                id: b.id.clone(),
                current: out_current[i],
            }),
            BusKind::Ibr {
                current,
                admittance,
            } => {
                let shunt = apply(&admittance.0, &v_of(i));
                let mismatch = out_current[i] + shunt - *current;
                let scale = max_term[i]
                    .max(shunt.norm())
                    .max(current.norm())
                    .max(f64::MIN_POSITIVE);
                kcl_residual = kcl_residual.max(mismatch.norm() / scale);
                ibr_source_currents.push(SourceCurrent {
                    id: b.id.clone(),
                    current: *current,
                });
            }
            BusKind::Junction { admittance } => {
                let shunt = apply(&admittance.0, &v_of(i));
                let mismatch = out_current[i] + shunt;
                let scale = max_term[i].max(shunt.norm()).max(f64::MIN_POSITIVE);
                kcl_residual = kcl_residual.max(mismatch.norm() / scale);
            }
        }
    }

    let fault_current = match model {
        FaultModel::None => Phasor3::ZERO,
        FaultModel::Resistive { g, elements } => {
            let v = fault_voltage.to_array();
            let mut i = [c0(); 3];
            for &(x, y) in elements {
                let across = v[x] - y.map_or(c0(), |y| v[y]);
                i[x] += across * *g;
                if let Some(y) = y {
                    i[y] -= across * *g;
                }
            }
            Phasor3::from_array(i)
        }
        FaultModel::Bolted { elements } => {
            let mut i = [c0(); 3];
            for (k, &(p, q)) in elements.iter().enumerate() {
                let j = x[lay.bolted + k];
                i[p] += j;
                if let Some(q) = q {
                    i[q] -= j;
                }
            }
            Phasor3::from_array(i)
        }
    };
    let into_f = i_local + i_remote;
    let scale = i_local
        .norm()
        .max(i_remote.norm())
        .max(fault_current.norm())
        .max(f64::MIN_POSITIVE);
    kcl_residual = kcl_residual.max((into_f - fault_current).norm() / scale);

    Ok(NetworkState {
        buses: buses
            .iter()
            .enumerate()
            .map(|(i, b)| BusState {
                id: b.id.clone(),
                voltage: v_of(i),
            })
            .collect(),
        fault_voltage,
        sg_currents,
        ibr_source_currents,
        i_local,
        i_remote,
        fault_current,
        kcl_residual,
    })
}

/// Prefault and during-fault solutions with the relay windows at L and R.
pub fn simulate(
    net: &NetworkModel,
    fault: &FaultSpec,
    settings: &Settings,
) -> Result<ScenarioResult> {
    fault.validate(settings)?;
    let prefault = solve_state(net, fault.m_t, &FaultModel::None)?;
    let model = if fault.m_f == 0.0 {
        FaultModel::Bolted {
            elements: spanning_elements(fault.eta),
        }
    } else {
        FaultModel::Resistive {
            g: 1.0 / (fault.m_f * fault.r_f),
            elements: fault.eta.elements(),
        }
    };
    let fault_state = solve_state(net, fault.m_t, &model)?;
    let local = &net.relay().local;
    let remote = &net.relay().remote;
    let window = MeasurementWindow::new(
        prefault.voltage(local).expect("local bus"),
        prefault.i_local,
        fault_state.voltage(local).expect("local bus"),
        fault_state.i_local,
    );
    let remote_window = MeasurementWindow::new(
        prefault.voltage(remote).expect("remote bus"),
        prefault.i_remote,
        fault_state.voltage(remote).expect("remote bus"),
        fault_state.i_remote,
    );
    let fault_current = fault_state.fault_current;
    Ok(ScenarioResult {
        fault: *fault,
        prefault,
        fault_state,
        window,
        remote_window,
        fault_current,
    })
}

/// Residuals of the incremental pipeline against a direct simulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub fault: FaultSpec,
    /// `|σ_pipeline - ĩ_R| / |ĩ_R|`; zero for bolted faults.
    pub sigma_rel: f64,
    /// Largest `|z_A formula - v_A / i_A| / |v_A / i_A|` over the loops that see the fault.
    pub z_rel: f64,
    /// Largest residual of `z̃_A - ψ v_F(t-δ) / ĩ_A` against `ṽ_A / ĩ_A`.
    pub z_inc_rel: f64,
    /// Largest relative mismatch of the solved incremental state
    /// `[ṽ_F, ṽ_J, ṽ_C, ĩ_S]` against the simulator, per block.
    pub state_rel: f64,
    /// Smallest incremental-state block norm relative to `|ṽ_F|`.
    pub state_min_rel: f64,
    pub sg_incremental_voltage: f64,
    pub ibr_incremental_source_current: f64,
    /// `|i_F(t-δ)|` relative to the prefault line current.
    pub prefault_fault_current: f64,
    /// `|i_L(t-δ) + i_R(t-δ)|` relative to the prefault line current.
    pub prefault_balance: f64,
    pub kcl_residual: f64,
}

impl VerifyReport {
    pub fn passes(&self) -> bool {
        self.sigma_rel <= SIGMA_TOL
            && self.z_rel <= Z_TOL
            && self.z_inc_rel <= Z_TOL
            && self.state_rel <= STATE_TOL
            && self.sg_incremental_voltage == 0.0
            && self.ibr_incremental_source_current == 0.0
            && self.prefault_fault_current <= BALANCE_TOL
            && self.prefault_balance <= BALANCE_TOL
            && self.kcl_residual <= KCL_TOL
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Verify the pipeline built on `model` against a simulation of `truth`.
/// Pass the same network twice for a self-consistency check.
pub fn verify_pipeline(
    model: &NetworkModel,
    truth: &NetworkModel,
    fault: &FaultSpec,
    settings: &Settings,
) -> Result<VerifyReport> {
    let sc = simulate(truth, fault, settings)?;
    let w = &sc.window;
    let line = model.protected_line();
    let sigma_direct = sc.remote_window.i_inc();

    let (sigma_rel, state_rel, state_min_rel) = if fault.m_f > 0.0 {
        let map = build_omega_map(model, fault, settings)?;
        let sigma = remote_current(&map, w);
        let sigma_rel = (sigma - sigma_direct).norm() / sigma_direct.norm();

        let st = incremental_state(model, fault, w, settings)?;
        let mut worst: f64 = 0.0;
        let mut smallest = f64::INFINITY;
        let v_f_inc = sc.fault_state.fault_voltage - sc.prefault.fault_voltage;
        for (k, block) in st.order.blocks().iter().enumerate() {
            let direct = match block {
                Block::Fault => v_f_inc,
                Block::Bus(i) => {
                    let b = &model.buses()[*i];
                    match b.kind {
                        BusKind::Sg { .. } => {
                            sc.fault_state.sg_current(&b.id).unwrap()
                                - sc.prefault.sg_current(&b.id).unwrap()
                        }
                        _ => sc.incremental_voltage(&b.id).unwrap(),
                    }
                }
            };
            worst = worst.max((st.blocks[k] - direct).norm() / direct.norm());
            smallest = smallest.min(st.blocks[k].norm() / v_f_inc.norm());
        }
        (sigma_rel, worst, smallest)
    } else {
        (0.0, 0.0, 0.0)
    };
    let sigma_used = if fault.m_f > 0.0 {
        remote_current(&build_omega_map(model, fault, settings)?, w)
    } else {
        Phasor3::ZERO
    };

    let z_line = crate::network::phase_impedance(line)?;
    let v_f_prev = prefault_fault_voltage(&z_line, fault.m_t, w);
    let mut z_rel: f64 = 0.0;
    let mut z_inc_rel: f64 = 0.0;
    for lp in Loop::candidates(fault.eta) {
        let formula = apparent_impedance(lp, fault, w, line, sigma_used, settings)?;
        z_rel = z_rel.max(rel(formula, measured_impedance(lp, w, line)));
        if fault.m_f > 0.0 {
            let inc = incremental_apparent_impedance(lp, fault, w, line, sigma_used, settings)?;
            let i_inc = lp.current(w.i_inc(), line.k());
            let corrected = inc - prefault_loop_voltage(lp, v_f_prev) / i_inc;
            z_inc_rel = z_inc_rel.max(rel(corrected, measured_incremental_impedance(lp, w, line)));
        }
    }

    let sg_incremental_voltage = truth
        .buses()
        .iter()
        .filter(|b| matches!(b.kind, BusKind::Sg { .. }))
        .map(|b| sc.incremental_voltage(&b.id).unwrap().norm())
        .fold(0.0, f64::max);
    let ibr_incremental_source_current = sc
        .fault_state
        .ibr_source_currents
        .iter()
        .zip(&sc.prefault.ibr_source_currents)
        .map(|(a, b)| (a.current - b.current).norm())
        .fold(0.0, f64::max);
    let line_scale = w.i_prev.norm().max(f64::MIN_POSITIVE);
    Ok(VerifyReport {
        fault: *fault,
        sigma_rel,
        z_rel,
        z_inc_rel,
        state_rel,
        state_min_rel,
        sg_incremental_voltage,
        ibr_incremental_source_current,
        prefault_fault_current: sc.prefault.fault_current.norm() / line_scale,
        prefault_balance: (w.i_prev + sc.remote_window.i_prev).norm() / line_scale,
        kcl_residual: sc.prefault.kcl_residual.max(sc.fault_state.kcl_residual),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn open_fault_leaves_state_unchanged() {
        let net = fixtures::four_bus();
        let fault = FaultSpec::new(FaultType::Abcg, 0.5, 1.0, 1e12);
        let sc = simulate(&net, &fault, &Settings::default()).unwrap();
        for (a, b) in sc.prefault.buses.iter().zip(&sc.fault_state.buses) {
            assert!((a.voltage - b.voltage).norm() < 1e-9);
        }
    }

    #[test]
    fn prefault_line_currents_balance() {
        let net = fixtures::four_bus();
        let fault = FaultSpec::new(FaultType::Ag, 0.3, 1.0, 0.15);
        let sc = simulate(&net, &fault, &Settings::default()).unwrap();
        let sum = sc.prefault.i_local + sc.prefault.i_remote;
        assert!(sum.norm() <= 1e-12 * sc.prefault.i_local.norm());
        assert_eq!(sc.prefault.fault_current, Phasor3::ZERO);
        assert!(sc.prefault.kcl_residual < KCL_TOL);
        assert!(sc.fault_state.kcl_residual < KCL_TOL);
    }

    #[test]
    fn ag_fault_current_only_on_phase_a() {
        let net = fixtures::four_bus();
        let fault = FaultSpec::new(FaultType::Ag, 0.5, 1.0, 0.15);
        let sc = simulate(&net, &fault, &Settings::default()).unwrap();
        assert!(sc.fault_current.a.norm() > 0.1);
        assert_eq!(sc.fault_current.b, c0());
        assert_eq!(sc.fault_current.c, c0());
    }

    #[test]
    fn bolted_faults_pin_fault_point() {
        let net = fixtures::four_bus();
        for eta in FaultType::ALL {
            let fault = FaultSpec::new(eta, 0.4, 0.0, 0.15);
            let sc = simulate(&net, &fault, &Settings::default()).unwrap();
            let v = sc.fault_state.fault_voltage.to_array();
            for (x, y) in eta.elements() {
                let across = v[x] - y.map_or(c0(), |y| v[y]);
                assert!(across.norm() < 1e-12, "{eta}");
            }
            assert!(sc.fault_state.kcl_residual < KCL_TOL, "{eta}");
        }
    }

    #[test]
    fn bolted_spanning_forest() {
        assert_eq!(spanning_elements(FaultType::Abcg).len(), 3);
        assert_eq!(spanning_elements(FaultType::Abc).len(), 2);
        assert_eq!(spanning_elements(FaultType::Abg).len(), 2);
        assert_eq!(spanning_elements(FaultType::Ab).len(), 1);
    }

    #[test]
    fn healthy_scenario_has_no_increments() {
        let net = fixtures::four_bus();
        let fault = FaultSpec::new(FaultType::Ag, 0.5, 1.0, 1e300);
        let sc = simulate(&net, &fault, &Settings::default()).unwrap();
        assert!(sc.window.i_inc().norm() <= 1e-12);
        assert!(sc.window.v_inc().norm() <= 1e-12);
        assert!(sc.remote_window.i_inc().norm() <= 1e-12);
    }

    #[test]
    fn scenario_exports_as_toml() {
        let net = fixtures::four_bus();
        let fault = FaultSpec::new(FaultType::Ab, 0.5, 1.0, 0.15);
        let sc = simulate(&net, &fault, &Settings::default()).unwrap();
        let text = sc.to_toml();
        let value: toml::Value = toml::from_str(&text).unwrap();
        assert_eq!(value["fault"]["eta"].as_str(), Some("ab"));
        assert!(value["window"]["v_prev"].as_array().unwrap().len() == 3);
    }
}
