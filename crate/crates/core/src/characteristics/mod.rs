//! Relay characteristics in the impedance plane.
//!
//! Three constructions over the uncertainty `m = (m_T, m_F) ∈ [0, 1]²`, all
//! driven by one measurement window:
//!
//! - exact-sampled: `z_A(m)` evaluated through the full network pipeline on
//!   a grid of `m`;
//! - parallelogram: the remote current frozen at a nominal `m̂`, which makes
//!   `z_A` bilinear in `m` and the image the Minkowski sum of `[0, z]` and
//!   `[0, w]`;
//! - convex hull of the exact samples.

mod grid;
mod hull;

pub use grid::{Grid, GridParseError, GridPreset};
pub use hull::{convex_hull, orientation, COLLINEAR_TOL};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::admittance::{FaultSpec, FaultType};
use crate::error::{Error, Result};
use crate::incremental::{build_omega_map, remote_current, OmegaTable};
use crate::loops::{apparent_impedance, Loop, LoopGain};
use crate::network::NetworkModel;
use crate::phasors::MeasurementWindow;
use crate::settings::Settings;

/// `|w| < PARALLELOGRAM_DEGENERATE_TOL · |z|` collapses the parallelogram.
pub const PARALLELOGRAM_DEGENERATE_TOL: f64 = 1e-12;

/// Relative boundary tolerance used by [`contains`].
pub const CONTAINS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharacteristicKind {
    ExactSampled,
    Parallelogram,
    ConvexHull,
}

/// Fault type plus the loop that measures it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Target {
    pub eta: FaultType,
    pub lp: Loop,
}

impl Target {
    pub fn on(eta: FaultType, lp: Loop) -> Target {
        Target { eta, lp }
    }
}

impl From<FaultType> for Target {
    fn from(eta: FaultType) -> Target {
        Target {
            eta,
            lp: Loop::for_fault(eta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub m_t: f64,
    pub m_f: f64,
    pub z: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Characteristic {
    pub kind: CharacteristicKind,
    pub eta: FaultType,
    #[serde(rename = "loop")]
    pub lp: Loop,
    /// Counterclockwise polygon; empty for exact-sampled clouds.
    pub vertices: Vec<Complex64>,
    pub samples: Vec<Sample>,
    pub grid: Option<String>,
    pub m_hat: Option<(f64, f64)>,
    /// Fewer than three distinct vertices (or a collapsed parallelogram).
    pub degenerate: bool,
}

impl Characteristic {
    pub fn points(&self) -> Vec<Complex64> {
        self.samples.iter().map(|s| s.z).collect()
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max((v[i] - v[j]).norm());
            }
        }
        d
    }

    /// Euclidean distance from `p` to the polygon; zero inside.
    pub fn distance_outside(&self, p: Complex64) -> f64 {
        distance_outside(&self.vertices, p)
    }
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    (a + ab * t.clamp(0.0, 1.0) - p).norm()
}

fn distance_outside(v: &[Complex64], p: Complex64) -> f64 {
    match v.len() {
        0 => f64::INFINITY,
        1 => (p - v[0]).norm(),
        2 => segment_distance(v[0], v[1], p),
        n => {
            let inside = (0..n).all(|i| {
                let (a, b) = (v[i], v[(i + 1) % n]);
                let e = b - a;
                let q = p - a;
                e.re * q.im - e.im * q.re >= 0.0
            });
            if inside {
                0.0
            } else {
                (0..n)
                    .map(|i| segment_distance(v[i], v[(i + 1) % n], p))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Inside, or within `1e-9 · diameter` of the boundary.
pub fn contains(ch: &Characteristic, p: Complex64) -> bool {
    contains_within(ch, p, CONTAINS_TOL * ch.diameter())
}

pub fn contains_within(ch: &Characteristic, p: Complex64, slack: f64) -> bool {
    ch.distance_outside(p) <= slack
}

/// Evaluate `z_A` for every entry of a precomputed table.
pub fn evaluate_table(
    net: &NetworkModel,
    table: &OmegaTable,
    lp: Loop,
    window: &MeasurementWindow,
    settings: &Settings,
) -> Result<Vec<Sample>> {
    let line = net.protected_line();
    table
        .entries
        .iter()
        .map(|(m_t, m_f, map)| {
            let fault = FaultSpec::new(table.eta, *m_t, *m_f, table.r_f);
            let sigma = map
                .as_ref()
                .map(|m| remote_current(m, window))
                .unwrap_or_default();
            apparent_impedance(lp, &fault, window, line, sigma, settings)
                .map(|z| Sample {
                    m_t: *m_t,
                    m_f: *m_f,
                    z,
                })
                .map_err(|e| e.at(*m_t, *m_f))
        })
        .collect()
}

pub fn exact_sampled(
    net: &NetworkModel,
    target: impl Into<Target>,
    window: &MeasurementWindow,
    grid: &Grid,
    settings: &Settings,
) -> Result<Characteristic> {
    let target = target.into();
    LoopGain::new(target.lp, target.eta)?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let table = OmegaTable::build(net, target.eta, &grid.clamped(settings).points, settings)?;
    let samples = evaluate_table(net, &table, target.lp, window, settings)?;
    Ok(Characteristic {
        kind: CharacteristicKind::ExactSampled,
        eta: target.eta,
        lp: target.lp,
        vertices: Vec::new(),
        samples,
        grid: Some(grid.description.clone()),
        m_hat: None,
        degenerate: false,
    })
}

pub fn hull_characteristic(
    net: &NetworkModel,
    target: impl Into<Target>,
    window: &MeasurementWindow,
    grid: &Grid,
    settings: &Settings,
) -> Result<Characteristic> {
    let mut ch = exact_sampled(net, target, window, grid, settings)?;
    ch.vertices = convex_hull(&ch.points());
    ch.kind = CharacteristicKind::ConvexHull;
    ch.degenerate = ch.vertices.len() < 3;
    Ok(ch)
}

/// Second edge `w` of the parallelogram: the fault-resistance term at
/// `m_F = 1` with the remote current frozen at `m̂`.
pub fn parallelogram_edge(
    net: &NetworkModel,
    target: impl Into<Target>,
    window: &MeasurementWindow,
    m_hat: (f64, f64),
    settings: &Settings,
) -> Result<Complex64> {
    let target = target.into();
    let gain = LoopGain::new(target.lp, target.eta)?;
    let (mt, mf) = m_hat;
    if !(mf > 0.0 && mf <= 1.0) {
        return Err(Error::ResistanceRange(mf));
    }
    let r_f = net.relay().r_fault_max;
    let fault = FaultSpec::new(target.eta, mt, mf, r_f);
    fault.validate(settings)?;
    let sigma = remote_current(&build_omega_map(net, &fault, settings)?, window);
    let line = net.protected_line();
    let i_a = target.lp.current(window.i_now, line.k());
    if i_a.norm() <= settings.i_min {
        return Err(Error::Underexcited {
            lp: target.lp,
            magnitude: i_a.norm(),
        });
    }
    Ok(gain.apply(r_f, window.i_inc() + sigma) / i_a)
}

pub fn parallelogram(
    net: &NetworkModel,
    target: impl Into<Target>,
    window: &MeasurementWindow,
    m_hat: (f64, f64),
    settings: &Settings,
) -> Result<Characteristic> {
    let target = target.into();
    let w = parallelogram_edge(net, target, window, m_hat, settings)?;
    let z = net.protected_line().z1;
    let zero = Complex64::new(0.0, 0.0);
    let (vertices, degenerate) = if w.norm() < PARALLELOGRAM_DEGENERATE_TOL * z.norm() {
        (vec![zero, z], true)
    } else {
        match orientation(zero, z, w) {
            1 => (vec![zero, z, z + w, w], false),
            -1 => (vec![zero, w, z + w, z], false),
            _ => (convex_hull(&[zero, z, w, z + w]), true),
        }
    };
    Ok(Characteristic {
        kind: CharacteristicKind::Parallelogram,
        eta: target.eta,
        lp: target.lp,
        vertices,
        samples: Vec::new(),
        grid: None,
        m_hat: Some(m_hat),
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::phasors::Phasor3;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn polygon(v: Vec<Complex64>) -> Characteristic {
        Characteristic {
            kind: CharacteristicKind::ConvexHull,
            eta: FaultType::Ag,
            lp: Loop::Ag,
            vertices: v,
            samples: Vec::new(),
            grid: None,
            m_hat: None,
            degenerate: false,
        }
    }

    fn loaded_window() -> MeasurementWindow {
        let v = Phasor3::balanced(c(1.0, 0.0));
        let i = Phasor3::balanced(c(0.4, -0.1));
        MeasurementWindow::new(v, i, v * c(0.7, 0.0), i * c(2.0, -1.5))
    }

    #[test]
    fn containment_basics() {
        let sq = polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]);
        assert!(contains(&sq, c(0.5, 0.5)));
        assert!(contains(&sq, c(1.0, 0.5)));
        assert!(contains(&sq, c(1.0 + 1e-10, 0.5)));
        assert!(!contains(&sq, c(1.0 + 1e-6, 0.5)));
        assert!(!contains(&sq, c(14.0, 14.0)));
        assert!((sq.distance_outside(c(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-15);
        let seg = polygon(vec![c(0.0, 0.0), c(2.0, 0.0)]);
        assert!(contains(&seg, c(1.0, 0.0)));
        assert!(!contains(&seg, c(1.0, 0.1)));
    }

    #[test]
    fn bolted_midpoint_sample() {
        let net = fixtures::four_bus();
        let g = Grid::from_points("single", vec![(0.5, 0.0)]);
        let ch = exact_sampled(
            &net,
            FaultType::Ag,
            &loaded_window(),
            &g,
            &Settings::default(),
        )
        .unwrap();
        assert_eq!(ch.samples.len(), 1);
        assert_eq!(ch.samples[0].z, net.protected_line().z1 * 0.5);
    }

    #[test]
    fn bolted_row_is_collinear_along_line() {
        let net = fixtures::four_bus();
        let pts = [0.0, 0.25, 0.5, 0.75, 1.0].map(|t| (t, 0.0)).to_vec();
        let g = Grid::from_points("row", pts);
        let s = Settings::default();
        let ch = exact_sampled(&net, FaultType::Ab, &loaded_window(), &g, &s).unwrap();
        let z = net.protected_line().z1;
        for smp in &ch.samples {
            assert_eq!(smp.z, z * smp.m_t);
            assert!(orientation(c(0.0, 0.0), z, smp.z) == 0);
        }
        assert_eq!(ch.samples[0].m_t, s.eps);
        assert_eq!(ch.samples[4].m_t, 1.0 - s.eps);
        let hull = convex_hull(&ch.points());
        assert_eq!(hull.len(), 2);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let net = fixtures::four_bus();
        let g = Grid::from_points("none", vec![]);
        assert!(matches!(
            exact_sampled(
                &net,
                FaultType::Ag,
                &loaded_window(),
                &g,
                &Settings::default()
            ),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn parallelogram_is_minkowski_sum() {
        let net = fixtures::four_bus();
        let s = Settings::default();
        for eta in [FaultType::Ag, FaultType::Ab, FaultType::Bcg] {
            let ch = parallelogram(&net, eta, &loaded_window(), (0.5, 1.0), &s).unwrap();
            let z = net.protected_line().z1;
            let w = parallelogram_edge(&net, eta, &loaded_window(), (0.5, 1.0), &s).unwrap();
            assert_eq!(ch.vertices.len(), 4);
            for p in [c(0.0, 0.0), z, w, z + w] {
                assert!(ch.vertices.contains(&p));
            }
            // opposite edges equal
            let v = &ch.vertices;
            assert!(((v[1] - v[0]) - (v[2] - v[3])).norm() <= 1e-14 * z.norm());
            // counterclockwise
            assert!((0..4).all(|i| orientation(v[i], v[(i + 1) % 4], v[(i + 2) % 4]) == 1));
        }
    }

    #[test]
    fn parallelogram_collapses_when_remote_current_cancels() {
        let net = fixtures::four_bus();
        let s = Settings::default();
        let w = loaded_window();
        let fault = FaultSpec::new(FaultType::Ag, 0.5, 1.0, net.relay().r_fault_max);
        let sigma = remote_current(&build_omega_map(&net, &fault, &s).unwrap(), &w);
        // choose now-currents so that ĩ_L = -σ
        let mut synthetic = w;
        synthetic.i_now = w.i_prev - sigma;
        let ch = parallelogram(&net, FaultType::Ag, &synthetic, (0.5, 1.0), &s).unwrap();
        assert!(ch.degenerate);
        assert_eq!(ch.vertices, vec![c(0.0, 0.0), net.protected_line().z1]);
    }

    #[test]
    fn parallelogram_rejects_bolted_nominal() {
        let net = fixtures::four_bus();
        assert!(parallelogram(
            &net,
            FaultType::Ag,
            &loaded_window(),
            (0.5, 0.0),
            &Settings::default()
        )
        .is_err());
    }
}
