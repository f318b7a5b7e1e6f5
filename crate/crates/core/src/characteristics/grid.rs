use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::settings::Settings;

/// Named sampling patterns over `(m_T, m_F) ∈ [0, 1]²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridPreset {
    /// `(0, 0)`, `(1, 0)` and the 5 × 4 grid `m_T ∈ {0, ¼, ½, ¾, 1}`,
    /// `m_F ∈ {¼, ½, ¾, 1}`: 22 points.
    Paper22,
    /// The four corners of the unit square.
    Corners4,
    /// `n_t × n_f` evenly spaced points including the edges.
    Dense { n_t: usize, n_f: usize },
    /// `n` evenly spaced points per side of the unit square.
    Perimeter(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridParseError(pub String);

impl fmt::Display for GridParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid grid {:?}; expected paper22, corners4, dense:NxM or perimeter:N",
            self.0
        )
    }
}

impl std::error::Error for GridParseError {}

impl FromStr for GridPreset {
    type Err = GridParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GridParseError(s.to_string());
        match s {
            "paper22" => return Ok(GridPreset::Paper22),
            "corners4" => return Ok(GridPreset::Corners4),
            _ => {}
        }
        if let Some(dims) = s.strip_prefix("dense:") {
            let (a, b) = dims.split_once(['x', 'X']).ok_or_else(err)?;
            let n_t: usize = a.parse().map_err(|_| err())?;
            let n_f: usize = b.parse().map_err(|_| err())?;
            if n_t < 2 || n_f < 2 {
                return Err(err());
            }
            return Ok(GridPreset::Dense { n_t, n_f });
        }
        if let Some(n) = s.strip_prefix("perimeter:") {
            let n: usize = n.parse().map_err(|_| err())?;
            if n < 2 {
                return Err(err());
            }
            return Ok(GridPreset::Perimeter(n));
        }
        Err(err())
    }
}

impl fmt::Display for GridPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridPreset::Paper22 => f.write_str("paper22"),
            GridPreset::Corners4 => f.write_str("corners4"),
            GridPreset::Dense { n_t, n_f } => write!(f, "dense:{n_t}x{n_f}"),
            GridPreset::Perimeter(n) => write!(f, "perimeter:{n}"),
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

/// A list of `(m_T, m_F)` sample points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub description: String,
    pub points: Vec<(f64, f64)>,
}

impl Grid {
    pub fn preset(p: GridPreset) -> Grid {
        let points = match p {
            GridPreset::Paper22 => {
                let mut pts = vec![(0.0, 0.0), (1.0, 0.0)];
                for m_f in linspace(0.25, 1.0, 4) {
                    pts.extend(linspace(0.0, 1.0, 5).map(|m_t| (m_t, m_f)));
                }
                pts
            }
            GridPreset::Corners4 => vec![(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)],
            GridPreset::Dense { n_t, n_f } => linspace(0.0, 1.0, n_f)
                .flat_map(|m_f| linspace(0.0, 1.0, n_t).map(move |m_t| (m_t, m_f)))
                .collect(),
            GridPreset::Perimeter(n) => {
                let side: Vec<f64> = linspace(0.0, 1.0, n).collect();
                let mut pts = Vec::with_capacity(4 * (n - 1));
                pts.extend(side[..n - 1].iter().map(|&t| (t, 0.0)));
                pts.extend(side[..n - 1].iter().map(|&f| (1.0, f)));
                pts.extend(side[1..].iter().rev().map(|&t| (t, 1.0)));
                pts.extend(side[1..].iter().rev().map(|&f| (0.0, f)));
                pts
            }
        };
        Grid {
            description: p.to_string(),
            points,
        }
    }

    pub fn paper22() -> Grid {
        Grid::preset(GridPreset::Paper22)
    }

    pub fn corners4() -> Grid {
        Grid::preset(GridPreset::Corners4)
    }

    pub fn dense(n_t: usize, n_f: usize) -> Grid {
        Grid::preset(GridPreset::Dense { n_t, n_f })
    }

    pub fn perimeter(n: usize) -> Grid {
        Grid::preset(GridPreset::Perimeter(n))
    }

    pub fn from_points(description: impl Into<String>, points: Vec<(f64, f64)>) -> Grid {
        Grid {
            description: description.into(),
            points,
        }
    }

    /// Move `m_T` into `[ε, 1 - ε]`.
    pub fn clamped(&self, settings: &Settings) -> Grid {
        Grid {
            description: self.description.clone(),
            points: self
                .points
                .iter()
                .map(|&(t, f)| (settings.clamp_location(t), f))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
