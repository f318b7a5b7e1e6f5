//! Small dense complex linear algebra: 3×3 phase blocks and an LU solver.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::phasors::Phasor3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 3×3 complex matrix acting on phase vectors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3(pub [[Complex64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[ZERO; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]);

    pub fn diag(d: Complex64) -> Mat3 {
        Mat3::IDENTITY.scale(d)
    }

    pub fn from_real(m: [[f64; 3]; 3]) -> Mat3 {
        let mut out = Mat3::ZERO;
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] = Complex64::new(m[r][c], 0.0);
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Mat3 {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|x| *x *= s);
        out
    }

    pub fn transpose(&self) -> Mat3 {
        let mut out = Mat3::ZERO;
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] = self.0[c][r];
            }
        }
        out
    }

    pub fn mul_vec(&self, x: Phasor3) -> Phasor3 {
        let v = x.to_array();
        let row = |r: usize| self.0[r][0] * v[0] + self.0[r][1] * v[1] + self.0[r][2] * v[2];
        Phasor3::new(row(0), row(1), row(2))
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        (0..3).all(|r| (0..3).all(|c| (self.0[r][c] - self.0[c][r]).norm() <= tol * scale))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse by Gauss-Jordan with partial pivoting; `None` when singular.
    pub fn inverse(&self) -> Option<Mat3> {
        let mut a = self.0;
        let mut inv = Mat3::IDENTITY.0;
        let scale = self.max_abs();
        if scale == 0.0 || !self.is_finite() {
            return None;
        }
        for col in 0..3 {
            let piv = (col..3)
                .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
                .unwrap();
            if a[piv][col].norm() <= 1e-14 * scale {
                return None;
            }
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col];
            for k in 0..3 {
                a[col][k] /= p;
                inv[col][k] /= p;
            }
            for r in 0..3 {
                if r != col {
                    let f = a[r][col];
                    if f != ZERO {
                        for k in 0..3 {
                            a[r][k] -= f * a[col][k];
                            inv[r][k] -= f * inv[col][k];
                        }
                    }
                }
            }
        }
        Some(Mat3(inv))
    }

    /// Conjugation by the cyclic phase relabeling a→b→c→a.
    pub fn rotate_phases(&self) -> Mat3 {
        // new index i carries old index (i + 2) % 3
        let mut out = Mat3::ZERO;
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] = self.0[(r + 2) % 3][(c + 2) % 3];
            }
        }
        out
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(mut self, o: Mat3) -> Mat3 {
        self += o;
        self
    }
}

impl AddAssign for Mat3 {
    fn add_assign(&mut self, o: Mat3) {
        for r in 0..3 {
            for c in 0..3 {
                self.0[r][c] += o.0[r][c];
            }
        }
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(mut self, o: Mat3) -> Mat3 {
        self -= o;
        self
    }
}

impl SubAssign for Mat3 {
    fn sub_assign(&mut self, o: Mat3) {
        for r in 0..3 {
            for c in 0..3 {
                self.0[r][c] -= o.0[r][c];
            }
        }
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self.scale(-ONE)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = Mat3::ZERO;
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] = (0..3).map(|k| self.0[r][k] * o.0[k][c]).sum();
            }
        }
        out
    }
}

impl Mul<Phasor3> for Mat3 {
    type Output = Phasor3;
    fn mul(self, x: Phasor3) -> Phasor3 {
        self.mul_vec(x)
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// 3×3 block whose top-left entry is `(3 * br, 3 * bc)`.
    pub fn block(&self, br: usize, bc: usize) -> Mat3 {
        let mut out = Mat3::ZERO;
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] = self[(3 * br + r, 3 * bc + c)];
            }
        }
        out
    }

    pub fn add_block(&mut self, br: usize, bc: usize, m: &Mat3) {
        for r in 0..3 {
            for c in 0..3 {
                self[(3 * br + r, 3 * bc + c)] += m.0[r][c];
            }
        }
    }

    pub fn set_block(&mut self, br: usize, bc: usize, m: &Mat3) {
        for r in 0..3 {
            for c in 0..3 {
                self[(3 * br + r, 3 * bc + c)] = m.0[r][c];
            }
        }
    }

    pub fn matmul(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..o.cols {
                    out[(r, c)] += a * o[(k, c)];
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        (0..self.rows).all(|r| (0..r).all(|c| (self[(r, c)] - self[(c, r)]).norm() <= tol * scale))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Lu {
        assert_eq!(self.rows, self.cols, "LU of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
                .unwrap();
            if a[(piv, k)] == ZERO {
                singular = true;
                continue;
            }
            if piv != k {
                perm.swap(k, piv);
                for c in 0..n {
                    a.data.swap(k * n + c, piv * n + c);
                }
            }
            let p = a[(k, k)];
            for r in k + 1..n {
                let f = a[(r, k)] / p;
                if f == ZERO {
                    continue;
                }
                a[(r, k)] = f;
                for c in k + 1..n {
                    let u = a[(k, c)];
                    a[(r, c)] -= f * u;
                }
            }
        }
        Lu {
            factors: a,
            perm,
            singular,
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Packed `PA = LU` factors.
#[derive(Debug, Clone)]
pub struct Lu {
    factors: CMatrix,
    perm: Vec<usize>,
    singular: bool,
}

impl Lu {
    /// Ratio of the largest to the smallest pivot magnitude. A cheap lower
    /// bound on the condition number; infinite for an exactly zero pivot.
    pub fn condition_estimate(&self) -> f64 {
        if self.singular {
            return f64::INFINITY;
        }
        let n = self.factors.rows;
        let (lo, hi) = (0..n)
            .map(|i| self.factors[(i, i)].norm())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| {
                (lo.min(d), hi.max(d))
            });
        if n == 0 {
            1.0
        } else {
            hi / lo
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Solve `A X = B` column by column. The caller checks singularity first.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let n = self.factors.rows;
        assert_eq!(b.rows, n, "right-hand side has wrong row count");
        let lu = &self.factors;
        let mut x = CMatrix::zeros(n, b.cols);
        for col in 0..b.cols {
            let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[(p, col)]).collect();
            for r in 0..n {
                let mut s = y[r];
                for k in 0..r {
                    s -= lu[(r, k)] * y[k];
                }
                y[r] = s;
            }
            for r in (0..n).rev() {
                let mut s = y[r];
                for k in r + 1..n {
                    s -= lu[(r, k)] * y[k];
                }
                y[r] = s / lu[(r, r)];
            }
            for r in 0..n {
                x[(r, col)] = y[r];
            }
        }
        x
    }
}
