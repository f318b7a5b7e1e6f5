//! Faulted bus admittance matrix and the incremental nodal system.
//!
//! Unknowns are ordered in blocks `[F, J, C, S]`: the virtual fault bus,
//! junction/load buses, IBR buses and SG buses, three phases each. Within a
//! role, buses keep their file order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Mat3};
use crate::network::{phase_impedance, BusRole, NetworkModel};
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaultType {
    Ag,
    Bg,
    Cg,
    Ab,
    Ac,
    Bc,
    Abg,
    Acg,
    Bcg,
    Abc,
    Abcg,
}

impl FaultType {
    pub const ALL: [FaultType; 11] = [
        FaultType::Ag,
        FaultType::Bg,
        FaultType::Cg,
        FaultType::Ab,
        FaultType::Ac,
        FaultType::Bc,
        FaultType::Abg,
        FaultType::Acg,
        FaultType::Bcg,
        FaultType::Abc,
        FaultType::Abcg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FaultType::Ag => "ag",
            FaultType::Bg => "bg",
            FaultType::Cg => "cg",
            FaultType::Ab => "ab",
            FaultType::Ac => "ac",
            FaultType::Bc => "bc",
            FaultType::Abg => "abg",
            FaultType::Acg => "acg",
            FaultType::Bcg => "bcg",
            FaultType::Abc => "abc",
            FaultType::Abcg => "abcg",
        }
    }

    /// Faulted phases as indices into (a, b, c).
    pub fn phases(self) -> &'static [usize] {
        match self {
            FaultType::Ag => &[0],
            FaultType::Bg => &[1],
            FaultType::Cg => &[2],
            FaultType::Ab | FaultType::Abg => &[0, 1],
            FaultType::Ac | FaultType::Acg => &[0, 2],
            FaultType::Bc | FaultType::Bcg => &[1, 2],
            FaultType::Abc | FaultType::Abcg => &[0, 1, 2],
        }
    }

    pub fn is_grounded(self) -> bool {
        !matches!(
            self,
            FaultType::Ab | FaultType::Ac | FaultType::Bc | FaultType::Abc
        )
    }

    /// The fault as resistor elements `(x, y)`: `y = None` is phase x to
    /// ground, otherwise a resistor between phases x and y. Every element
    /// carries the same resistance.
    pub fn elements(self) -> Vec<(usize, Option<usize>)> {
        let ph = self.phases();
        let mut out = Vec::new();
        if self.is_grounded() {
            out.extend(ph.iter().map(|&x| (x, None)));
        }
        for (i, &x) in ph.iter().enumerate() {
            for &y in &ph[i + 1..] {
                out.push((x, Some(y)));
            }
        }
        out
    }

    /// Integer conductance pattern `P` with `Y_F = P / (m_F R_F)`.
    pub fn conductance_pattern(self) -> [[i32; 3]; 3] {
        let mut p = [[0i32; 3]; 3];
        for (x, y) in self.elements() {
            p[x][x] += 1;
            if let Some(y) = y {
                p[y][y] += 1;
                p[x][y] -= 1;
                p[y][x] -= 1;
            }
        }
        p
    }

    /// Integer pattern `M` and divisor `d` such that `(m_F R_F / d) M` is the
    /// pseudo-inverse of the fault stamp: the map from fault currents to
    /// fault-point voltages on the phases the fault touches.
    pub fn resistance_pattern(self) -> ([[i32; 3]; 3], u32) {
        let ph = self.phases();
        let mut m = [[0i32; 3]; 3];
        match (ph.len(), self.is_grounded()) {
            (1, _) => {
                m[ph[0]][ph[0]] = 1;
                (m, 1)
            }
            (2, false) => {
                let (x, y) = (ph[0], ph[1]);
                m[x][x] = 1;
                m[y][y] = 1;
                m[x][y] = -1;
                m[y][x] = -1;
                (m, 4)
            }
            (2, true) => {
                let (x, y) = (ph[0], ph[1]);
                m[x][x] = 2;
                m[y][y] = 2;
                m[x][y] = 1;
                m[y][x] = 1;
                (m, 3)
            }
            (3, false) => {
                for (r, row) in m.iter_mut().enumerate() {
                    for (c, v) in row.iter_mut().enumerate() {
                        *v = if r == c { 2 } else { -1 };
                    }
                }
                (m, 9)
            }
            (3, true) => {
                for (r, row) in m.iter_mut().enumerate() {
                    for (c, v) in row.iter_mut().enumerate() {
                        *v = if r == c { 2 } else { 1 };
                    }
                }
                (m, 4)
            }
            _ => unreachable!("fault types touch one to three phases"),
        }
    }

    pub fn rotate_phases(self) -> FaultType {
        match self {
            FaultType::Ag => FaultType::Bg,
            FaultType::Bg => FaultType::Cg,
            FaultType::Cg => FaultType::Ag,
            FaultType::Ab => FaultType::Bc,
            FaultType::Bc => FaultType::Ac,
            FaultType::Ac => FaultType::Ab,
            FaultType::Abg => FaultType::Bcg,
            FaultType::Bcg => FaultType::Acg,
            FaultType::Acg => FaultType::Abg,
            FaultType::Abc => FaultType::Abc,
            FaultType::Abcg => FaultType::Abcg,
        }
    }
}

impl fmt::Display for FaultType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownFaultType(pub String);

impl fmt::Display for UnknownFaultType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = FaultType::ALL.iter().map(|t| t.name()).collect();
        write!(
            f,
            "unknown fault type {:?}; expected one of: {}",
            self.0,
            names.join(", ")
        )
    }
}

impl std::error::Error for UnknownFaultType {}

impl FromStr for FaultType {
    type Err = UnknownFaultType;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        FaultType::ALL
            .into_iter()
            .find(|t| t.name() == lower)
            .ok_or_else(|| UnknownFaultType(s.to_string()))
    }
}

/// Fault type, normalized location and resistance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultSpec {
    pub eta: FaultType,
    /// Normalized location along the protected line, from the local end.
    pub m_t: f64,
    /// Fraction of the maximum fault resistance.
    pub m_f: f64,
    /// Maximum fault resistance R_F.
    pub r_f: f64,
}

impl FaultSpec {
    pub fn new(eta: FaultType, m_t: f64, m_f: f64, r_f: f64) -> Self {
        FaultSpec { eta, m_t, m_f, r_f }
    }

    /// Fault resistance `m_F R_F`.
    pub fn resistance(&self) -> f64 {
        self.m_f * self.r_f
    }

    pub fn validate(&self, settings: &Settings) -> Result<()> {
        if !settings.location_in_range(self.m_t) {
            return Err(Error::LocationRange {
                m_t: self.m_t,
                lo: settings.eps,
                hi: 1.0 - settings.eps,
            });
        }
        if !(0.0..=1.0).contains(&self.m_f) {
            return Err(Error::ResistanceRange(self.m_f));
        }
        if !(self.r_f.is_finite() && self.r_f > 0.0) {
            return Err(Error::FaultResistance(self.r_f));
        }
        Ok(())
    }
}

/// One entry of the block ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Fault,
    Bus(usize),
}

/// Block ordering `[F, J, C, S]` and the inverse map from bus index.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOrder {
    blocks: Vec<Block>,
    of_bus: Vec<usize>,
    first_sg: usize,
}

impl BlockOrder {
    pub fn new(net: &NetworkModel) -> Self {
        let mut blocks = vec![Block::Fault];
        for role in [BusRole::Junction, BusRole::Ibr, BusRole::Sg] {
            blocks.extend(
                net.buses()
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.role() == role)
                    .map(|(i, _)| Block::Bus(i)),
            );
        }
        let mut of_bus = vec![0; net.buses().len()];
        for (k, b) in blocks.iter().enumerate() {
            if let Block::Bus(i) = b {
                of_bus[*i] = k;
            }
        }
        let first_sg = blocks.len() - net.count(BusRole::Sg);
        BlockOrder {
            blocks,
            of_bus,
            first_sg,
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Block holding the given bus.
    pub fn of_bus(&self, bus: usize) -> usize {
        self.of_bus[bus]
    }

    /// Blocks `first_sg..len()` are the SG buses.
    pub fn sg_blocks(&self) -> std::ops::Range<usize> {
        self.first_sg..self.blocks.len()
    }

    pub fn fault_block(&self) -> usize {
        0
    }
}

/// `Y(m_T)`: series stamps only, with the protected line split at F.
#[derive(Debug, Clone)]
pub struct FaultedSystem {
    pub y: CMatrix,
    pub order: BlockOrder,
    pub m_t: f64,
}

/// `Y_LHS x = Y_RHS v_F(t-δ)` with `x = [ṽ_F, ṽ_J, ṽ_C, ĩ_S]`.
#[derive(Debug, Clone)]
pub struct IncrementalSystem {
    pub lhs: CMatrix,
    pub rhs: CMatrix,
    pub order: BlockOrder,
}

fn stamp_series(y: &mut CMatrix, i: usize, j: usize, adm: &Mat3) {
    y.add_block(i, i, adm);
    y.add_block(j, j, adm);
    y.add_block(i, j, &(-*adm));
    y.add_block(j, i, &(-*adm));
}

pub fn assemble_y(net: &NetworkModel, m_t: f64, settings: &Settings) -> Result<FaultedSystem> {
    if !settings.location_in_range(m_t) {
        return Err(Error::LocationRange {
            m_t,
            lo: settings.eps,
            hi: 1.0 - settings.eps,
        });
    }
    let order = BlockOrder::new(net);
    let n = order.len();
    let mut y = CMatrix::zeros(3 * n, 3 * n);
    for (li, line) in net.lines().iter().enumerate() {
        let z = phase_impedance(line)?;
        let from = order.of_bus(net.bus_index(&line.from).expect("validated"));
        let to = order.of_bus(net.bus_index(&line.to).expect("validated"));
        if li == net.protected_index() {
            let local = order.of_bus(net.local_index());
            let remote = order.of_bus(net.remote_index());
            let near = z
                .scale(m_t.into())
                .inverse()
                .ok_or_else(|| Error::SingularImpedance(format!("segment L-F of {}", line.id)))?;
            let far = z
                .scale((1.0 - m_t).into())
                .inverse()
                .ok_or_else(|| Error::SingularImpedance(format!("segment F-R of {}", line.id)))?;
            stamp_series(&mut y, local, order.fault_block(), &near);
            stamp_series(&mut y, order.fault_block(), remote, &far);
        } else {
            let adm = z
                .inverse()
                .ok_or_else(|| Error::SingularImpedance(format!("line {}", line.id)))?;
            stamp_series(&mut y, from, to, &adm);
        }
    }
    Ok(FaultedSystem { y, order, m_t })
}

/// `Y_F = P / (m_F R_F)` for the fault's conductance pattern `P`.
pub fn fault_stamp(eta: FaultType, m_f: f64, r_f: f64) -> Result<Mat3> {
    if m_f <= 0.0 {
        return Err(Error::BoltedFault {
            what: "fault_stamp",
        });
    }
    if !(r_f.is_finite() && r_f > 0.0) {
        return Err(Error::FaultResistance(r_f));
    }
    let g = 1.0 / (m_f * r_f);
    let p = eta.conductance_pattern();
    let mut out = Mat3::ZERO;
    for r in 0..3 {
        for c in 0..3 {
            out.0[r][c] = (g * f64::from(p[r][c])).into();
        }
    }
    Ok(out)
}

pub fn assemble_incremental(
    net: &NetworkModel,
    faulted: &FaultedSystem,
    stamp: &Mat3,
) -> IncrementalSystem {
    let order = faulted.order.clone();
    let mut lhs = faulted.y.clone();
    lhs.add_block(0, 0, stamp);
    for (k, block) in order.blocks().iter().enumerate() {
        if let Block::Bus(i) = block {
            if let Some(shunt) = net.buses()[*i].shunt_admittance() {
                lhs.add_block(k, k, &shunt);
            }
        }
    }
    // SG voltages do not change: their columns carry the unknown SG
    // current increments instead.
    let size = 3 * order.len();
    for k in order.sg_blocks() {
        for c in 3 * k..3 * k + 3 {
            for r in 0..size {
                lhs[(r, c)] = 0.0.into();
            }
            lhs[(c, c)] = (-1.0).into();
        }
    }
    let mut rhs = CMatrix::zeros(size, 3);
    rhs.set_block(0, 0, &(-*stamp));
    IncrementalSystem { lhs, rhs, order }
}

/// `ω = Y_LHS⁻¹ Y_RHS`.
pub fn solve_omega(sys: &IncrementalSystem, settings: &Settings) -> Result<CMatrix> {
    let lu = sys.lhs.lu();
    let cond = lu.condition_estimate();
    if lu.is_singular() || cond.is_nan() || cond > settings.cond_limit {
        return Err(Error::Singular {
            context: "incremental system".into(),
            cond,
        });
    }
    Ok(lu.solve(&sys.rhs))
}

/// Assemble and solve in one go.
pub fn omega_for(
    net: &NetworkModel,
    fault: &FaultSpec,
    settings: &Settings,
) -> Result<(CMatrix, BlockOrder)> {
    fault.validate(settings)?;
    let faulted = assemble_y(net, fault.m_t, settings)?;
    let stamp = fault_stamp(fault.eta, fault.m_f, fault.r_f)?;
    let sys = assemble_incremental(net, &faulted, &stamp);
    let omega = solve_omega(&sys, settings).map_err(|e| match e {
        Error::Singular { cond, .. } => Error::Singular {
            context: format!(
                "{} fault at m_T = {}, m_F = {}",
                fault.eta, fault.m_t, fault.m_f
            ),
            cond,
        },
        other => other,
    })?;
    Ok((omega, sys.order))
}
