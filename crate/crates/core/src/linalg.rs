//! Dense complex LU factorization with partial pivoting.

use num_complex::Complex64;

/// Pivots at or below this magnitude are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Relative pivot threshold, scaled by the largest matrix entry. Equal
/// columns do not cancel exactly in floating point, so a purely absolute
/// floor would miss them.
pub const PIVOT_RELATIVE: f64 = 64.0 * f64::EPSILON;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let n = columns.len();
        let mut m = Self::zeros(n);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "column length must equal column count");
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[l * n + j];
                }
            }
        }
        out
    }

    /// Induced 1-norm (max column sum of moduli).
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// `P A = L U` with unit lower-triangular `L`, both stored in `lu`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    singular: bool,
}

impl Lu {
    pub fn factor(a: &Matrix) -> Self {
        let n = a.dim();
        let threshold = PIVOT_FLOOR.max(PIVOT_RELATIVE * a.max_abs());
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for col in 0..n {
            let (piv, piv_abs) = (col..n)
                .map(|r| (r, lu[(r, col)].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if piv_abs <= threshold {
                singular = true;
                continue;
            }
            if piv != col {
                for j in 0..n {
                    lu.data.swap(piv * n + j, col * n + j);
                }
                perm.swap(piv, col);
            }
            let inv = 1.0 / lu[(col, col)];
            for r in col + 1..n {
                let factor = lu[(r, col)] * inv;
                lu[(r, col)] = factor;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in col + 1..n {
                    let u = lu.data[col * n + j];
                    lu.data[r * n + j] -= factor * u;
                }
            }
        }
        Self { lu, perm, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// `log |det A|`, or `-inf` when a pivot fell below the threshold.
    pub fn log_abs_det(&self) -> f64 {
        if self.singular {
            return f64::NEG_INFINITY;
        }
        (0..self.lu.dim()).map(|i| self.lu[(i, i)].norm().ln()).sum()
    }

    /// Solves `A x = b`. Caller must check [`Lu::is_singular`] first.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in 0..i {
                acc -= row[j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= row[j] * x[j];
            }
            x[i] = acc / row[i];
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        // A^T = U^T L^T P, so solve U^T y = b, L^T z = y, x = P^T z.
        let mut y = b.to_vec();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[(j, i)] * y[j];
            }
            y[i] = acc / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[(j, i)] * y[j];
            }
            y[i] = acc;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.lu.dim();
        let mut inv = Matrix::zeros(n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Determinant by cofactor expansion along the first row. Exponential cost;
/// only meant for cross-checks on tiny matrices.
pub fn det_cofactor(a: &Matrix) -> Complex64 {
    let n = a.dim();
    match n {
        0 => Complex64::new(1.0, 0.0),
        1 => a[(0, 0)],
        _ => {
            let mut det = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let minor = minor(a, 0, j);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                det += sign * a[(0, j)] * det_cofactor(&minor);
            }
            det
        }
    }
}

/// Matrix with row `r` and column `c` removed.
pub fn minor(a: &Matrix, r: usize, c: usize) -> Matrix {
    let n = a.dim();
    let mut m = Matrix::zeros(n - 1);
    for (ii, i) in (0..n).filter(|&i| i != r).enumerate() {
        for (jj, j) in (0..n).filter(|&j| j != c).enumerate() {
            m[(ii, jj)] = a[(i, j)];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> Matrix {
        Matrix::from_columns(&[
            vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.3, 1.0)],
            vec![c(0.0, 1.0), c(4.0, -1.0), c(1.0, 0.0)],
            vec![c(2.0, 0.0), c(0.5, 0.5), c(-1.0, 2.0)],
        ])
    }

    #[test]
    fn log_det_matches_cofactor() {
        let a = sample();
        let lu = Lu::factor(&a);
        let expect = det_cofactor(&a).norm().ln();
        assert!((lu.log_abs_det() - expect).abs() < 1e-13);
    }

    #[test]
    fn solve_and_transpose_solve() {
        let a = sample();
        let lu = Lu::factor(&a);
        let b = vec![c(1.0, 0.0), c(0.0, -1.0), c(2.0, 3.0)];
        let x = lu.solve(&b);
        let y = lu.solve_transpose(&b);
        let at = a.transpose();
        for i in 0..3 {
            let ax: Complex64 = (0..3).map(|j| a[(i, j)] * x[j]).sum();
            let aty: Complex64 = (0..3).map(|j| at[(i, j)] * y[j]).sum();
            assert!((ax - b[i]).norm() < 1e-13);
            assert!((aty - b[i]).norm() < 1e-13);
        }
        let prod = a.mul(&lu.inverse());
        let id = Matrix::identity(3);
        for i in 0..3 {
            for j in 0..3 {
                assert!((prod[(i, j)] - id[(i, j)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn equal_columns_are_singular() {
        let col = vec![c(0.3, 0.1), c(0.7, -0.2), c(0.11, 0.9)];
        let a = Matrix::from_columns(&[col.clone(), vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 1.0)], col]);
        let lu = Lu::factor(&a);
        assert!(lu.is_singular());
        assert_eq!(lu.log_abs_det(), f64::NEG_INFINITY);
    }
}
