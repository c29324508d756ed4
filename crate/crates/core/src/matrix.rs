//! Small symmetric matrices (2x2 position, 3x3 position + heading) used for
//! covariance bookkeeping, plus a Jacobi eigenvalue sweep for PSD checks.

use crate::real::Real;

/// Symmetric matrix of dimension 2 or 3, stored dense.
///
/// Entries are in m^2 for position rows/columns; when a heading axis is
/// present its row/column mixes meters and degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymMatrix<F> {
    dim: usize,
    m: [[F; 3]; 3],
}

impl<F: Real> SymMatrix<F> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 3, "supported dimensions are 2 and 3");
        SymMatrix { dim, m: [[F::zero(); 3]; 3] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> F {
        assert!(row < self.dim && col < self.dim);
        self.m[row][col]
    }

    /// Sets entry (row, col) and its mirror.
    pub fn set(&mut self, row: usize, col: usize, value: F) {
        assert!(row < self.dim && col < self.dim);
        self.m[row][col] = value;
        self.m[col][row] = value;
    }

    /// Accumulates `weight * d * d^T` for the first `dim` entries of `d`.
    pub fn add_weighted_outer(&mut self, weight: F, d: [F; 3]) {
        for r in 0..self.dim {
            for c in r..self.dim {
                let v = self.m[r][c] + weight * d[r] * d[c];
                self.m[r][c] = v;
                self.m[c][r] = v;
            }
        }
    }

    /// Accumulates `scale * other` entrywise.
    pub fn add_scaled(&mut self, other: &SymMatrix<F>, scale: F) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for r in 0..self.dim {
            for c in 0..self.dim {
                self.m[r][c] = self.m[r][c] + scale * other.m[r][c];
            }
        }
    }

    pub fn scale(&mut self, s: F) {
        for r in 0..self.dim {
            for c in 0..self.dim {
                self.m[r][c] = self.m[r][c] * s;
            }
        }
    }

    pub fn diagonal(&self) -> Vec<F> {
        (0..self.dim).map(|i| self.m[i][i]).collect()
    }

    /// Largest absolute difference between an entry and its mirror.
    pub fn max_asymmetry(&self) -> F {
        let mut worst = F::zero();
        for r in 0..self.dim {
            for c in 0..self.dim {
                worst = worst.max((self.m[r][c] - self.m[c][r]).abs());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order, via cyclic Jacobi rotations.
    ///
    /// For 2x2 and 3x3 symmetric matrices a handful of sweeps reaches machine
    /// precision; used by the positive-semidefiniteness checks.
    pub fn eigenvalues(&self) -> Vec<F> {
        let n = self.dim;
        let mut a = self.m;
        for _sweep in 0..32 {
            let mut off = F::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a[p][q].abs());
                }
            }
            let scale = (0..n).fold(F::zero(), |acc, i| acc.max(a[i][i].abs()));
            if off <= F::epsilon() * scale.max(F::one()) {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if a[p][q] == F::zero() {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (F::cast(2.0) * a[p][q]);
                    let t = {
                        let t = theta.abs() + (theta * theta + F::one()).sqrt();
                        let t = F::one() / t;
                        if theta < F::zero() {
                            -t
                        } else {
                            t
                        }
                    };
                    let c = F::one() / (t * t + F::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eig: Vec<F> = (0..n).map(|i| a[i][i]).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
        eig
    }

    pub fn min_eigenvalue(&self) -> F {
        self.eigenvalues()[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diagonal() {
        let mut m = SymMatrix::<f64>::zeros(2);
        m.set(0, 0, 4.0);
        m.set(1, 1, 1.0);
        let e = m.eigenvalues();
        assert!((e[0] - 1.0).abs() < 1e-14);
        assert!((e[1] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_known_3x3() {
        // [[2,1,0],[1,2,1],[0,1,2]] has eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2)
        let mut m = SymMatrix::<f64>::zeros(3);
        m.set(0, 0, 2.0);
        m.set(1, 1, 2.0);
        m.set(2, 2, 2.0);
        m.set(0, 1, 1.0);
        m.set(1, 2, 1.0);
        let e = m.eigenvalues();
        let r2 = 2.0_f64.sqrt();
        assert!((e[0] - (2.0 - r2)).abs() < 1e-12);
        assert!((e[1] - 2.0).abs() < 1e-12);
        assert!((e[2] - (2.0 + r2)).abs() < 1e-12);
    }

    #[test]
    fn outer_product_accumulation() {
        let mut m = SymMatrix::<f64>::zeros(2);
        m.add_weighted_outer(0.5, [2.0, -1.0, 0.0]);
        assert_eq!(m.get(0, 0), 2.0);
        assert_eq!(m.get(0, 1), -1.0);
        assert_eq!(m.get(1, 0), -1.0);
        assert_eq!(m.get(1, 1), 0.5);
        assert_eq!(m.max_asymmetry(), 0.0);
    }

    #[test]
    fn rank_one_matrix_is_psd() {
        let mut m = SymMatrix::<f64>::zeros(3);
        m.add_weighted_outer(1.0, [1.0, 2.0, 3.0]);
        assert!(m.min_eigenvalue() > -1e-12);
    }
}
