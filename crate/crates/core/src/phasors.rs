//! Three-phase phasors and incremental quantities.
//!
//! Phase order is fixed as (a, b, c) throughout the crate. An incremental
//! quantity is the difference between a phasor and the same phasor `p`
//! cycles earlier, so it vanishes in steady state.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::loops::Loop;

/// One complex value per phase.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[[f64; 2]; 3]", into = "[[f64; 2]; 3]")]
pub struct Phasor3 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

/// `e^{j 2π/3}`, the 120° rotation operator.
pub fn rot120() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

impl Phasor3 {
    pub const ZERO: Phasor3 = Phasor3 {
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
    };

    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Phasor3 { a, b, c }
    }

    /// Balanced positive-sequence set `(x, a² x, a x)`.
    pub fn balanced(x: Complex64) -> Self {
        let a = rot120();
        Phasor3::new(x, a * a * x, a * x)
    }

    pub fn from_array(v: [Complex64; 3]) -> Self {
        Phasor3::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [Complex64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|z| z.is_finite())
    }

    /// Euclidean norm over the three phases.
    pub fn norm(&self) -> f64 {
        self.to_array()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(self, s: Complex64) -> Self {
        Phasor3::new(self.a * s, self.b * s, self.c * s)
    }

    /// Relabel phases a→b→c→a: the new phase b carries the old phase a.
    pub fn rotate_phases(self) -> Self {
        Phasor3::new(self.c, self.a, self.b)
    }
}

impl From<[[f64; 2]; 3]> for Phasor3 {
    fn from(v: [[f64; 2]; 3]) -> Self {
        Phasor3::new(
            Complex64::new(v[0][0], v[0][1]),
            Complex64::new(v[1][0], v[1][1]),
            Complex64::new(v[2][0], v[2][1]),
        )
    }
}

impl From<Phasor3> for [[f64; 2]; 3] {
    fn from(p: Phasor3) -> Self {
        [[p.a.re, p.a.im], [p.b.re, p.b.im], [p.c.re, p.c.im]]
    }
}

impl Add for Phasor3 {
    type Output = Phasor3;
    fn add(self, o: Phasor3) -> Phasor3 {
        Phasor3::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl Sub for Phasor3 {
    type Output = Phasor3;
    fn sub(self, o: Phasor3) -> Phasor3 {
        Phasor3::new(self.a - o.a, self.b - o.b, self.c - o.c)
    }
}

impl Neg for Phasor3 {
    type Output = Phasor3;
    fn neg(self) -> Phasor3 {
        Phasor3::new(-self.a, -self.b, -self.c)
    }
}

impl Mul<Complex64> for Phasor3 {
    type Output = Phasor3;
    fn mul(self, s: Complex64) -> Phasor3 {
        self.scale(s)
    }
}

/// Relay measurements at one bus: the present cycle and `p` cycles earlier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementWindow {
    pub v_prev: Phasor3,
    pub i_prev: Phasor3,
    pub v_now: Phasor3,
    pub i_now: Phasor3,
    pub p: u32,
}

impl MeasurementWindow {
    pub fn new(v_prev: Phasor3, i_prev: Phasor3, v_now: Phasor3, i_now: Phasor3) -> Self {
        MeasurementWindow {
            v_prev,
            i_prev,
            v_now,
            i_now,
            p: 1,
        }
    }

    /// A steady-state window: nothing changed between the two cycles.
    pub fn healthy(v: Phasor3, i: Phasor3) -> Self {
        MeasurementWindow::new(v, i, v, i)
    }

    pub fn v_inc(&self) -> Phasor3 {
        incremental(self.v_now, self.v_prev)
    }

    pub fn i_inc(&self) -> Phasor3 {
        incremental(self.i_now, self.i_prev)
    }

    pub fn is_valid(&self) -> bool {
        self.p >= 1
            && self.v_prev.is_finite()
            && self.i_prev.is_finite()
            && self.v_now.is_finite()
            && self.i_now.is_finite()
    }

    pub fn rotate_phases(self) -> Self {
        MeasurementWindow {
            v_prev: self.v_prev.rotate_phases(),
            i_prev: self.i_prev.rotate_phases(),
            v_now: self.v_now.rotate_phases(),
            i_now: self.i_now.rotate_phases(),
            p: self.p,
        }
    }
}

pub fn incremental(now: Phasor3, prev: Phasor3) -> Phasor3 {
    now - prev
}

pub fn zero_sequence(i: Phasor3) -> Complex64 {
    (i.a + i.b + i.c) / 3.0
}

/// `ψ · x` for the loop's row selector.
pub fn loop_projection(lp: Loop, x: Phasor3) -> Complex64 {
    match lp {
        Loop::Ag => x.a,
        Loop::Bg => x.b,
        Loop::Cg => x.c,
        Loop::Ab => x.a - x.b,
        Loop::Bc => x.b - x.c,
        Loop::Ca => x.c - x.a,
    }
}
