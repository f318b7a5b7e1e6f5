//! Network data model and the TOML network-description format.
//!
//! ```toml
//! [relay]
//! line = "LR"          # protected line id
//! local = "L"
//! remote = "R"
//! r_fault_max = 0.5    # maximum fault resistance R_F
//!
//! [[buses]]
//! id = "G"
//! role = "sg"          # sg | ibr | junction
//! voltage = [[1.0, 0.0], [-0.5, -0.8660254037844386], [-0.5, 0.8660254037844386]]
//!
//! [[buses]]
//! id = "I"
//! role = "ibr"
//! current = [[0.4, -0.1], [-0.29, 0.30], [-0.11, -0.20]]
//! admittance = { diag = [0.05, -0.5] }   # or nine [re, im] pairs, row-major
//!
//! [[lines]]
//! id = "GL"
//! from = "G"
//! to = "L"
//! z1 = [0.01, 0.1]
//! z0 = [0.03, 0.3]
//! ```
//!
//! Shunt admittances use the physical sign: a load or Norton admittance
//! draws `Y v` out of its bus.

use std::collections::{HashMap, HashSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::phasors::Phasor3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BusRole {
    /// Synchronous generator: ideal voltage source.
    Sg,
    /// Inverter-based resource: Norton current source.
    Ibr,
    /// Junction or constant-admittance load.
    Junction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BusKind {
    Sg { voltage: Phasor3 },
    Ibr { current: Phasor3, admittance: Mat3 },
    Junction { admittance: Mat3 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bus {
    pub id: String,
    pub kind: BusKind,
}

impl Bus {
    pub fn role(&self) -> BusRole {
        match self.kind {
            BusKind::Sg { .. } => BusRole::Sg,
            BusKind::Ibr { .. } => BusRole::Ibr,
            BusKind::Junction { .. } => BusRole::Junction,
        }
    }

    /// Shunt admittance to ground; `None` for SG buses.
    pub fn shunt_admittance(&self) -> Option<Mat3> {
        match &self.kind {
            BusKind::Sg { .. } => None,
            BusKind::Ibr { admittance, .. } | BusKind::Junction { admittance } => Some(*admittance),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub id: String,
    pub from: String,
    pub to: String,
    /// Positive-sequence series impedance.
    pub z1: Complex64,
    /// Zero-sequence series impedance.
    pub z0: Complex64,
}

impl Line {
    /// Zero-sequence compensation factor `z0 / z1 - 1`.
    pub fn k(&self) -> Complex64 {
        self.z0 / self.z1 - 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relay {
    pub line: String,
    pub local: String,
    pub remote: String,
    /// Maximum fault resistance R_F.
    pub r_fault_max: f64,
}

/// A validated network. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    buses: Vec<Bus>,
    lines: Vec<Line>,
    relay: Relay,
    protected: usize,
    local: usize,
    remote: usize,
}

/// Symmetric phase-impedance matrix of a transposed line: self impedance
/// `(z0 + 2 z1) / 3` and mutual impedance `(z0 - z1) / 3`. Row a of
/// `Z · i` equals `z1 (i_a + k i_0)`.
pub fn phase_impedance(line: &Line) -> Result<Mat3> {
    let zs = (line.z0 + 2.0 * line.z1) / 3.0;
    let zm = (line.z0 - line.z1) / 3.0;
    let z = Mat3([[zs, zm, zm], [zm, zs, zm], [zm, zm, zs]]);
    if line.z1 == Complex64::new(0.0, 0.0) || line.z0 == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularImpedance(format!("line {}", line.id)));
    }
    z.inverse()
        .ok_or_else(|| Error::SingularImpedance(format!("line {}", line.id)))?;
    Ok(z)
}

impl NetworkModel {
    pub fn new(buses: Vec<Bus>, lines: Vec<Line>, relay: Relay) -> Result<Self> {
        if buses.is_empty() {
            return Err(Error::validation("buses", "empty bus list"));
        }
        let mut index = HashMap::new();
        for (i, bus) in buses.iter().enumerate() {
            if index.insert(bus.id.as_str(), i).is_some() {
                return Err(Error::validation(
                    format!("buses[{i}].id"),
                    format!("duplicate bus id {:?}", bus.id),
                ));
            }
            let field = format!("buses[{i}]");
            match &bus.kind {
                BusKind::Sg { voltage } => {
                    if !voltage.is_finite() {
                        return Err(Error::validation(field + ".voltage", "non-finite phasor"));
                    }
                }
                BusKind::Ibr {
                    current,
                    admittance,
                } => {
                    if !current.is_finite() {
                        return Err(Error::validation(field + ".current", "non-finite phasor"));
                    }
                    check_shunt(admittance, &field)?;
                }
                BusKind::Junction { admittance } => check_shunt(admittance, &field)?,
            }
        }
        if !buses.iter().any(|b| b.role() != BusRole::Junction) {
            return Err(Error::validation(
                "buses",
                "network has no source (needs at least one sg or ibr bus)",
            ));
        }

        let mut line_ids = HashSet::new();
        for (i, line) in lines.iter().enumerate() {
            let field = format!("lines[{i}]");
            if !line_ids.insert(line.id.as_str()) {
                return Err(Error::validation(
                    field + ".id",
                    format!("duplicate line id {:?}", line.id),
                ));
            }
            for (end, id) in [("from", &line.from), ("to", &line.to)] {
                if !index.contains_key(id.as_str()) {
                    return Err(Error::validation(
                        format!("{field}.{end}"),
                        format!("unknown bus {id:?}"),
                    ));
                }
            }
            if line.from == line.to {
                return Err(Error::validation(field, "line connects a bus to itself"));
            }
            if !(line.z1.is_finite() && line.z0.is_finite()) {
                return Err(Error::validation(field, "non-finite impedance"));
            }
            if line.z1.re < 0.0 || line.z0.re < 0.0 {
                return Err(Error::validation(field, "negative series resistance"));
            }
            if line.z1 == Complex64::new(0.0, 0.0) {
                return Err(Error::validation(
                    field + ".z1",
                    "zero positive-sequence impedance",
                ));
            }
            phase_impedance(line)
                .map_err(|e| Error::validation(format!("lines[{i}]"), e.to_string()))?;
        }

        let protected = lines
            .iter()
            .position(|l| l.id == relay.line)
            .ok_or_else(|| {
                Error::validation("relay.line", format!("unknown line {:?}", relay.line))
            })?;
        let local = *index.get(relay.local.as_str()).ok_or_else(|| {
            Error::validation("relay.local", format!("unknown bus {:?}", relay.local))
        })?;
        let remote = *index.get(relay.remote.as_str()).ok_or_else(|| {
            Error::validation("relay.remote", format!("unknown bus {:?}", relay.remote))
        })?;
        let pl = &lines[protected];
        let ends_match = (pl.from == relay.local && pl.to == relay.remote)
            || (pl.from == relay.remote && pl.to == relay.local);
        if !ends_match {
            return Err(Error::validation(
                "relay",
                format!(
                    "protected line {:?} does not join {:?} and {:?}",
                    pl.id, relay.local, relay.remote
                ),
            ));
        }
        for (field, i) in [("relay.local", local), ("relay.remote", remote)] {
            if buses[i].role() == BusRole::Sg {
                return Err(Error::validation(
                    field,
                    format!(
                        "bus {:?} is an sg; a voltage source at a line terminal makes a bolted terminal fault draw infinite current",
                        buses[i].id
                    ),
                ));
            }
        }
        if !(relay.r_fault_max.is_finite() && relay.r_fault_max > 0.0) {
            return Err(Error::validation(
                "relay.r_fault_max",
                "must be positive and finite",
            ));
        }

        // connectivity
        let mut adj = vec![Vec::new(); buses.len()];
        for l in &lines {
            let (f, t) = (index[l.from.as_str()], index[l.to.as_str()]);
            adj[f].push(t);
            adj[t].push(f);
        }
        let mut seen = vec![false; buses.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::validation(
                "lines",
                format!(
                    "network is disconnected: bus {:?} unreachable from {:?}",
                    buses[i].id, buses[0].id
                ),
            ));
        }

        Ok(NetworkModel {
            buses,
            lines,
            relay,
            protected,
            local,
            remote,
        })
    }

    pub fn buses(&self) -> &[Bus] {
        &self.buses
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn relay(&self) -> &Relay {
        &self.relay
    }

    pub fn protected_line(&self) -> &Line {
        &self.lines[self.protected]
    }

    pub fn protected_index(&self) -> usize {
        self.protected
    }

    pub fn local_index(&self) -> usize {
        self.local
    }

    pub fn remote_index(&self) -> usize {
        self.remote
    }

    pub fn bus_index(&self, id: &str) -> Option<usize> {
        self.buses.iter().position(|b| b.id == id)
    }

    pub fn bus(&self, id: &str) -> Option<&Bus> {
        self.buses.iter().find(|b| b.id == id)
    }

    pub fn count(&self, role: BusRole) -> usize {
        self.buses.iter().filter(|b| b.role() == role).count()
    }

    /// Same structure with every source setpoint replaced.
    pub fn with_sources<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&Bus) -> Option<Phasor3>,
    {
        let mut out = self.clone();
        for bus in &mut out.buses {
            if let Some(p) = f(bus) {
                match &mut bus.kind {
                    BusKind::Sg { voltage } => *voltage = p,
                    BusKind::Ibr { current, .. } => *current = p,
                    BusKind::Junction { .. } => {}
                }
            }
        }
        out
    }

    /// Relabel phases a→b→c→a in every source and shunt.
    pub fn rotate_phases(&self) -> Self {
        let mut out = self.clone();
        for bus in &mut out.buses {
            match &mut bus.kind {
                BusKind::Sg { voltage } => *voltage = voltage.rotate_phases(),
                BusKind::Ibr {
                    current,
                    admittance,
                } => {
                    *current = current.rotate_phases();
                    *admittance = admittance.rotate_phases();
                }
                BusKind::Junction { admittance } => *admittance = admittance.rotate_phases(),
            }
        }
        out
    }

    pub fn with_line_impedance(&self, line_id: &str, z1: Complex64, z0: Complex64) -> Result<Self> {
        let mut lines = self.lines.clone();
        let line = lines
            .iter_mut()
            .find(|l| l.id == line_id)
            .ok_or_else(|| Error::validation("lines", format!("unknown line {line_id:?}")))?;
        line.z1 = z1;
        line.z0 = z0;
        NetworkModel::new(self.buses.clone(), lines, self.relay.clone())
    }

    pub fn to_toml(&self) -> String {
        let file = NetworkFile::from(self);
        toml::to_string(&file).expect("network file serializes")
    }
}

fn check_shunt(y: &Mat3, field: &str) -> Result<()> {
    if !y.is_finite() {
        return Err(Error::validation(
            format!("{field}.admittance"),
            "non-finite entry",
        ));
    }
    if !y.is_symmetric(1e-12) {
        return Err(Error::validation(
            format!("{field}.admittance"),
            "matrix is not symmetric",
        ));
    }
    Ok(())
}

pub fn parse_network(text: &str) -> Result<NetworkModel> {
    let file: NetworkFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_model()
}

type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    relay: RelayEntry,
    buses: Vec<BusEntry>,
    #[serde(default)]
    lines: Vec<LineEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelayEntry {
    line: String,
    local: String,
    remote: String,
    r_fault_max: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BusEntry {
    id: String,
    role: BusRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    voltage: Option<Phasor3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    current: Option<Phasor3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    admittance: Option<AdmittanceEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum AdmittanceEntry {
    Full(Vec<Pair>),
    Diag(DiagEntry),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagEntry {
    diag: Pair,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineEntry {
    id: String,
    from: String,
    to: String,
    z1: Pair,
    z0: Pair,
}

impl AdmittanceEntry {
    fn to_mat3(&self, field: &str) -> Result<Mat3> {
        match self {
            AdmittanceEntry::Diag(d) => Ok(Mat3::diag(complex(d.diag))),
            AdmittanceEntry::Full(v) => {
                if v.len() != 9 {
                    return Err(Error::validation(
                        field,
                        format!("expected nine [re, im] entries, found {}", v.len()),
                    ));
                }
                let mut m = Mat3::ZERO;
                for (k, p) in v.iter().enumerate() {
                    m.0[k / 3][k % 3] = complex(*p);
                }
                Ok(m)
            }
        }
    }

    fn from_mat3(m: &Mat3) -> Option<Self> {
        if *m == Mat3::ZERO {
            return None;
        }
        let d = m.0[0][0];
        if *m == Mat3::diag(d) {
            return Some(AdmittanceEntry::Diag(DiagEntry { diag: pair(d) }));
        }
        Some(AdmittanceEntry::Full(
            m.0.iter().flatten().map(|z| pair(*z)).collect(),
        ))
    }
}

impl NetworkFile {
    fn into_model(self) -> Result<NetworkModel> {
        let mut buses = Vec::with_capacity(self.buses.len());
        for (i, b) in self.buses.into_iter().enumerate() {
            let field = format!("buses[{i}]");
            let admittance = b
                .admittance
                .as_ref()
                .map(|a| a.to_mat3(&format!("{field}.admittance")))
                .transpose()?;
            let kind = match b.role {
                BusRole::Sg => {
                    if admittance.is_some() || b.current.is_some() {
                        return Err(Error::validation(field, "sg buses take only `voltage`"));
                    }
                    let voltage = b.voltage.ok_or_else(|| {
                        Error::validation(format!("{field}.voltage"), "missing for sg bus")
                    })?;
                    BusKind::Sg { voltage }
                }
                BusRole::Ibr => {
                    if b.voltage.is_some() {
                        return Err(Error::validation(field, "ibr buses do not take `voltage`"));
                    }
                    let current = b.current.ok_or_else(|| {
                        Error::validation(format!("{field}.current"), "missing for ibr bus")
                    })?;
                    BusKind::Ibr {
                        current,
                        admittance: admittance.unwrap_or(Mat3::ZERO),
                    }
                }
                BusRole::Junction => {
                    if b.voltage.is_some() || b.current.is_some() {
                        return Err(Error::validation(
                            field,
                            "junction buses take only `admittance`",
                        ));
                    }
                    BusKind::Junction {
                        admittance: admittance.unwrap_or(Mat3::ZERO),
                    }
                }
            };
            buses.push(Bus { id: b.id, kind });
        }
        let lines = self
            .lines
            .into_iter()
            .map(|l| Line {
                id: l.id,
                from: l.from,
                to: l.to,
                z1: complex(l.z1),
                z0: complex(l.z0),
            })
            .collect();
        let relay = Relay {
            line: self.relay.line,
            local: self.relay.local,
            remote: self.relay.remote,
            r_fault_max: self.relay.r_fault_max,
        };
        NetworkModel::new(buses, lines, relay)
    }
}

impl From<&NetworkModel> for NetworkFile {
    fn from(net: &NetworkModel) -> Self {
        let buses = net
            .buses
            .iter()
            .map(|b| {
                let mut e = BusEntry {
                    id: b.id.clone(),
                    role: b.role(),
                    voltage: None,
                    current: None,
                    admittance: None,
                };
                match &b.kind {
                    BusKind::Sg { voltage } => e.voltage = Some(*voltage),
                    BusKind::Ibr {
                        current,
                        admittance,
                    } => {
                        e.current = Some(*current);
                        e.admittance = AdmittanceEntry::from_mat3(admittance);
                    }
                    BusKind::Junction { admittance } => {
                        e.admittance = AdmittanceEntry::from_mat3(admittance)
                    }
                }
                e
            })
            .collect();
        let lines = net
            .lines
            .iter()
            .map(|l| LineEntry {
                id: l.id.clone(),
                from: l.from.clone(),
                to: l.to.clone(),
                z1: pair(l.z1),
                z0: pair(l.z0),
            })
            .collect();
        NetworkFile {
            relay: RelayEntry {
                line: net.relay.line.clone(),
                local: net.relay.local.clone(),
                remote: net.relay.remote.clone(),
                r_fault_max: net.relay.r_fault_max,
            },
            buses,
            lines,
        }
    }
}
