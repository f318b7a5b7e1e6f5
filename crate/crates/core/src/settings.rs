/// Numerical knobs shared by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Fault locations are confined to `[eps, 1 - eps]`; the incremental
    /// remote current divides by `(1 - m_T)` and the local segment by `m_T`.
    pub eps: f64,
    /// Loop currents at or below this magnitude are treated as unenergized.
    pub i_min: f64,
    /// Largest accepted condition estimate for the incremental system.
    pub cond_limit: f64,
}

pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_I_MIN: f64 = 1e-9;
pub const DEFAULT_COND_LIMIT: f64 = 1e12;

impl Default for Settings {
    fn default() -> Self {
        Settings {
            eps: DEFAULT_EPS,
            i_min: DEFAULT_I_MIN,
            cond_limit: DEFAULT_COND_LIMIT,
        }
    }
}

impl Settings {
    pub fn with_eps(eps: f64) -> Self {
        Settings {
            eps,
            ..Settings::default()
        }
    }

    /// Clamp a location into the admissible interval.
    pub fn clamp_location(&self, m_t: f64) -> f64 {
        m_t.clamp(self.eps, 1.0 - self.eps)
    }

    pub fn location_in_range(&self, m_t: f64) -> bool {
        m_t >= self.eps && m_t <= 1.0 - self.eps
    }
}
