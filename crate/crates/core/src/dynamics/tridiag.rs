//! Tridiagonal and cyclic tridiagonal solves.
//!
//! Row `i` of the system reads `lower[i]·x[i−1] + diag[i]·x[i] + upper[i]·x[i+1] = rhs[i]`,
//! with indices taken cyclically for the periodic variant.

/// LU factors of a non-cyclic tridiagonal matrix (Thomas algorithm).
#[derive(Clone, Debug)]
struct Thomas {
    lower: Vec<f64>,
    upper_mod: Vec<f64>,
    denom: Vec<f64>,
}

impl Thomas {
    fn factor(lower: &[f64], diag: &[f64], upper: &[f64]) -> Self {
        let n = diag.len();
        let mut upper_mod = vec![0.0; n];
        let mut denom = vec![0.0; n];
        denom[0] = diag[0];
        upper_mod[0] = upper[0] / denom[0];
        for i in 1..n {
            denom[i] = diag[i] - lower[i] * upper_mod[i - 1];
            upper_mod[i] = upper[i] / denom[i];
        }
        Thomas { lower: lower.to_vec(), upper_mod, denom }
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let n = x.len();
        x[0] /= self.denom[0];
        for i in 1..n {
            x[i] = (x[i] - self.lower[i] * x[i - 1]) / self.denom[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.upper_mod[i] * x[i + 1];
        }
    }
}

/// A factored periodic tridiagonal matrix, solved by the Sherman–Morrison
/// correction of a Thomas factorisation.
///
/// Intended for diagonally dominant systems such as `I − dt·D_ss`, where no
/// pivoting is needed.
#[derive(Clone, Debug)]
pub struct CyclicTridiag {
    inner: Thomas,
    z: Vec<f64>,
    gamma: f64,
    corner_top: f64,
}

impl CyclicTridiag {
    /// Factors the matrix; `lower[0]` couples row 0 to `x[n−1]` and
    /// `upper[n−1]` couples row `n−1` to `x[0]`. Requires `n ≥ 3`.
    pub fn new(lower: &[f64], diag: &[f64], upper: &[f64]) -> Self {
        let n = diag.len();
        assert!(n >= 3 && lower.len() == n && upper.len() == n, "cyclic system needs n >= 3");
        let corner_top = lower[0];
        let corner_bottom = upper[n - 1];
        let gamma = -diag[0];
        let mut d = diag.to_vec();
        d[0] -= gamma;
        d[n - 1] -= corner_bottom * corner_top / gamma;
        let inner = Thomas::factor(lower, &d, upper);
        let mut z = vec![0.0; n];
        z[0] = gamma;
        z[n - 1] = corner_bottom;
        inner.solve_in_place(&mut z);
        CyclicTridiag { inner, z, gamma, corner_top }
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = x.len();
        self.inner.solve_in_place(x);
        let num = x[0] + self.corner_top * x[n - 1] / self.gamma;
        let den = 1.0 + self.z[0] + self.corner_top * self.z[n - 1] / self.gamma;
        let fact = num / den;
        for (xi, zi) in x.iter_mut().zip(&self.z) {
            *xi -= fact * zi;
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(lower: &[f64], diag: &[f64], upper: &[f64], x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| lower[i] * x[(i + n - 1) % n] + diag[i] * x[i] + upper[i] * x[(i + 1) % n])
            .collect()
    }

    /// Dense Gaussian elimination with partial pivoting.
    #[allow(clippy::needless_range_loop)]
    fn dense_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut m = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            m[i][(i + n - 1) % n] += lower[i];
            m[i][i] += diag[i];
            m[i][(i + 1) % n] += upper[i];
            m[i][n] = rhs[i];
        }
        for col in 0..n {
            let p = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
            m.swap(col, p);
            for r in col + 1..n {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
            x[r] = (m[r][n] - s) / m[r][r];
        }
        x
    }

    #[test]
    fn periodic_laplacian_shift() {
        // (2 + 2)I − shift − shift⁻¹ applied to a constant is 2·constant
        let n = 16;
        let lower = vec![-1.0; n];
        let upper = vec![-1.0; n];
        let diag = vec![4.0; n];
        let s = CyclicTridiag::new(&lower, &diag, &upper);
        let x = s.solve(&vec![2.0; n]);
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn matches_dense_elimination(
            n in 3usize..40,
            seed in proptest::collection::vec(-1.0f64..1.0, 160),
        ) {
            let lower: Vec<f64> = (0..n).map(|i| seed[i]).collect();
            let upper: Vec<f64> = (0..n).map(|i| seed[40 + i]).collect();
            let diag: Vec<f64> = (0..n)
                .map(|i| lower[i].abs() + upper[i].abs() + 0.5 + seed[80 + i].abs())
                .collect();
            let rhs: Vec<f64> = (0..n).map(|i| seed[120 + i]).collect();
            let s = CyclicTridiag::new(&lower, &diag, &upper);
            let x = s.solve(&rhs);
            let reference = dense_solve(&lower, &diag, &upper, &rhs);
            let back = apply(&lower, &diag, &upper, &x);
            for i in 0..n {
                prop_assert!((x[i] - reference[i]).abs() < 1e-11);
                prop_assert!((back[i] - rhs[i]).abs() < 1e-12);
            }
        }
    }
}
