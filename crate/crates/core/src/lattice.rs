//! Dilation lattices: expanding integer matrices, coset representatives of
//! `Z^n / L Z^n` and of the dual quotient, and the numeric Fourier transform
//! matrix attached to a scheme.
//!
//! A dilation matrix `L` is an `n x n` integer matrix whose eigenvalues all
//! exceed 1 in magnitude; `q = |det L|` is the sampling rate. The scheme
//! fixes an ordered set `gamma` of `q` coset representatives (`nu_0 = 0`
//! first, the rest lexicographic) and an ordered set `dual_reps` of integer
//! vectors `d_k` representing the dual frequencies `gamma_k = 2*pi*(L^T)^-1*d_k`.
//! Dual frequencies are never stored as floats; every exact computation works
//! with the integer representatives.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Dense square integer matrix, row-major storage.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(n: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::BadMatrixShape { n, got: data.len() });
        }
        Ok(Self { n, data })
    }

    /// `k * I_n`.
    pub fn scalar(n: usize, k: i64) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = k;
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.n + col]
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = vec![0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                data[j * self.n + i] = self.get(i, j);
            }
        }
        IntMatrix { n: self.n, data }
    }

    pub fn det(&self) -> i64 {
        i64::try_from(self.det_i128()).expect("determinant overflows i64")
    }

    fn det_i128(&self) -> i128 {
        match self.n {
            0 => 1,
            1 => self.data[0] as i128,
            _ => {
                let mut acc: i128 = 0;
                for j in 0..self.n {
                    let a = self.get(0, j) as i128;
                    if a == 0 {
                        continue;
                    }
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    acc += sign * a * self.minor(0, j).det_i128();
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let mut data = Vec::with_capacity((self.n - 1) * (self.n - 1));
        for i in 0..self.n {
            if i == row {
                continue;
            }
            for j in 0..self.n {
                if j == col {
                    continue;
                }
                data.push(self.get(i, j));
            }
        }
        IntMatrix { n: self.n - 1, data }
    }

    /// Adjugate matrix, satisfying `adj(M) * M = det(M) * I`.
    pub fn adjugate(&self) -> IntMatrix {
        if self.n == 1 {
            return IntMatrix { n: 1, data: vec![1] };
        }
        let mut data = vec![0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                let c = sign as i128 * self.minor(i, j).det_i128();
                // adj = transpose of the cofactor matrix
                data[j * self.n + i] = i64::try_from(c).expect("cofactor overflows i64");
            }
        }
        IntMatrix { n: self.n, data }
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Solves `M x = v` over the integers, returning `None` when the exact
    /// rational solution is not integral. Requires `det != 0`.
    pub fn solve_integer(&self, v: &[i64]) -> Option<Vec<i64>> {
        let det = self.det();
        assert_ne!(det, 0, "solve_integer on singular matrix");
        let y = self.adjugate().mul_vec(v);
        let mut out = Vec::with_capacity(self.n);
        for yi in y {
            if yi % det != 0 {
                return None;
            }
            out.push(yi / det);
        }
        Some(out)
    }

    fn largest_eigenvalue_floor(&self) -> f64 {
        let m = nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as f64);
        m.complex_eigenvalues()
            .iter()
            .map(|l| l.norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Parses `"a,b;c,d"` row-major notation into a square matrix.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let rows: Vec<Vec<i64>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|cell| {
                    cell.trim()
                        .parse::<i64>()
                        .map_err(|e| Error::Parse(format!("bad matrix entry `{}`: {e}", cell.trim())))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for row in &rows {
        if row.len() != n {
            return Err(Error::BadMatrixShape { n, got: row.len() * n });
        }
        data.extend_from_slice(row);
    }
    IntMatrix::new(n, data)
}

/// An expanding dilation matrix together with ordered coset data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DilationScheme {
    dim: usize,
    lambda: IntMatrix,
    q: usize,
    gamma: Vec<Vec<i64>>,
    dual_reps: Vec<Vec<i64>>,
}

/// Tolerance for the numeric expansiveness test: every eigenvalue must
/// exceed `1 + EXPANDING_TOL` in magnitude.
pub const EXPANDING_TOL: f64 = 1e-9;

/// Tolerance for the numeric orthogonality identity
/// `sum_k exp(i*gamma_k . (nu - nu')) = q * delta`.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

impl DilationScheme {
    /// Validates `lambda` as an expanding dilation matrix and derives the
    /// canonical coset data: representatives with `L^-1 m` in `[0,1)^n`,
    /// lexicographically sorted with 0 first, for both `L` and `L^T`.
    pub fn validate(lambda: IntMatrix) -> Result<Self> {
        let dim = lambda.dim();
        if dim == 0 {
            return Err(Error::BadMatrixShape { n: 0, got: 0 });
        }
        let det = lambda.det();
        if det == 0 {
            return Err(Error::SingularDilation);
        }
        let magnitude = lambda.largest_eigenvalue_floor();
        if magnitude <= 1.0 + EXPANDING_TOL {
            return Err(Error::NotExpanding { magnitude });
        }
        let q = det.unsigned_abs() as usize;
        let gamma = enumerate_coset_reps(&lambda);
        let dual_reps = enumerate_coset_reps(&lambda.transpose());
        let scheme = Self { dim, lambda, q, gamma, dual_reps };
        scheme.check_counts_and_orthogonality()?;
        Ok(scheme)
    }

    /// Builds a scheme from explicitly listed representatives, preserving
    /// their order. Used when reading bank files, whose component order is
    /// fixed by the stored lists.
    pub fn with_reps(
        lambda: IntMatrix,
        gamma: Vec<Vec<i64>>,
        dual_reps: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let canonical = Self::validate(lambda)?;
        let scheme = Self {
            dim: canonical.dim,
            lambda: canonical.lambda,
            q: canonical.q,
            gamma,
            dual_reps,
        };
        scheme.check_reps_complete()?;
        scheme.check_counts_and_orthogonality()?;
        Ok(scheme)
    }

    fn check_reps_complete(&self) -> Result<()> {
        for (name, reps, m) in [
            ("gamma", &self.gamma, &self.lambda),
            ("dual_reps", &self.dual_reps, &self.lambda.transpose()),
        ] {
            if reps.len() != self.q {
                return Err(Error::InvariantViolation {
                    name: "coset count",
                    detail: format!("{name} lists {} vectors, expected {}", reps.len(), self.q),
                });
            }
            if reps[0].iter().any(|&x| x != 0) {
                return Err(Error::InvariantViolation {
                    name: "zero representative first",
                    detail: format!("{name} must start with the zero vector"),
                });
            }
            for v in reps {
                if v.len() != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
                }
            }
            for i in 0..reps.len() {
                for j in i + 1..reps.len() {
                    let diff: Vec<i64> =
                        reps[i].iter().zip(&reps[j]).map(|(a, b)| a - b).collect();
                    if m.solve_integer(&diff).is_some() {
                        return Err(Error::InvariantViolation {
                            name: "distinct cosets",
                            detail: format!("{name} entries {i} and {j} lie in the same coset"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_counts_and_orthogonality(&self) -> Result<()> {
        if self.q < 2 || self.gamma.len() != self.q || self.dual_reps.len() != self.q {
            return Err(Error::InvariantViolation {
                name: "coset count",
                detail: format!(
                    "q = {}, |gamma| = {}, |dual| = {}",
                    self.q,
                    self.gamma.len(),
                    self.dual_reps.len()
                ),
            });
        }
        let defect = self.orthogonality_defect();
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::InvariantViolation {
                name: "coset orthogonality",
                detail: format!("defect {defect:e}"),
            });
        }
        Ok(())
    }

    /// Max deviation of `sum_k exp(i*gamma_k . (nu - nu'))` from `q * delta`
    /// over all representative pairs.
    pub fn orthogonality_defect(&self) -> f64 {
        let freqs: Vec<Vec<f64>> = (0..self.q).map(|k| self.dual_frequency(k)).collect();
        let mut worst: f64 = 0.0;
        for (a, nu) in self.gamma.iter().enumerate() {
            for (b, nu2) in self.gamma.iter().enumerate() {
                let mut sum = Complex64::new(0.0, 0.0);
                for freq in &freqs {
                    let phase: f64 = freq
                        .iter()
                        .zip(nu.iter().zip(nu2))
                        .map(|(f, (x, y))| f * (x - y) as f64)
                        .sum();
                    sum += Complex64::from_polar(1.0, phase);
                }
                let expect = if a == b { self.q as f64 } else { 0.0 };
                worst = worst.max((sum - expect).norm());
            }
        }
        worst
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Coset representatives `nu_0 = 0, ..., nu_{q-1}` in scheme order.
    pub fn coset_reps(&self) -> &[Vec<i64>] {
        &self.gamma
    }

    /// Integer representatives `d_k` of the dual frequencies.
    pub fn dual_reps(&self) -> &[Vec<i64>] {
        &self.dual_reps
    }

    /// Dual frequency `gamma_k = 2*pi*(L^T)^-1 d_k` as floats.
    pub fn dual_frequency(&self, k: usize) -> Vec<f64> {
        let lt = self.lambda.transpose();
        let det = lt.det() as f64;
        lt.adjugate()
            .mul_vec(&self.dual_reps[k])
            .into_iter()
            .map(|y| 2.0 * PI * y as f64 / det)
            .collect()
    }

    /// Index of the coset representative congruent to `v` modulo `L Z^n`.
    pub fn coset_index(&self, v: &[i64]) -> Option<usize> {
        self.gamma.iter().position(|nu| {
            let diff: Vec<i64> = v.iter().zip(nu).map(|(a, b)| a - b).collect();
            self.lambda.solve_integer(&diff).is_some()
        })
    }

    /// Fourier transform matrix `X(omega)`: rows indexed by `nu` in Gamma,
    /// columns by the dual frequencies, entry `q^{-1/2} exp(i*(omega+gamma_k) . nu)`.
    /// Unitary for every `omega`.
    pub fn fourier_matrix(&self, omega: &[f64]) -> Vec<Vec<Complex64>> {
        assert_eq!(omega.len(), self.dim, "frequency dimension mismatch");
        let scale = 1.0 / (self.q as f64).sqrt();
        (0..self.q)
            .map(|row| {
                let nu = &self.gamma[row];
                (0..self.q)
                    .map(|col| {
                        let freq = self.dual_frequency(col);
                        let phase: f64 = nu
                            .iter()
                            .zip(omega.iter().zip(&freq))
                            .map(|(x, (w, g))| (w + g) * *x as f64)
                            .sum();
                        scale * Complex64::from_polar(1.0, phase)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Validates a dilation matrix and returns the full scheme.
pub fn validate_dilation(lambda: IntMatrix) -> Result<DilationScheme> {
    DilationScheme::validate(lambda)
}

/// Canonical coset representatives of `Z^n / L Z^n` for an expanding `L`.
pub fn coset_reps(lambda: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    Ok(DilationScheme::validate(lambda.clone())?.gamma)
}

/// Canonical coset representatives of `Z^n / L^T Z^n`, i.e. the integer
/// representatives of the dual frequencies.
pub fn dual_coset_reps(lambda: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    Ok(DilationScheme::validate(lambda.clone())?.dual_reps)
}

/// Enumerates the integer points of `L [0,1)^n` by scanning the bounding box
/// and testing membership exactly: `m` qualifies iff every coordinate of
/// `adj(L) m / det` lies in `[0,1)`.
fn enumerate_coset_reps(lambda: &IntMatrix) -> Vec<Vec<i64>> {
    let n = lambda.dim();
    let det = lambda.det();
    let adj = lambda.adjugate();
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for i in 0..n {
        for j in 0..n {
            let c = lambda.get(i, j);
            if c < 0 {
                lo[i] += c;
            } else {
                hi[i] += c;
            }
        }
    }

    let mut reps = Vec::new();
    let mut point = lo.clone();
    'scan: loop {
        let y = adj.mul_vec(&point);
        let inside = y.iter().all(|&yi| {
            if det > 0 {
                0 <= yi && yi < det
            } else {
                det < yi && yi <= 0
            }
        });
        if inside {
            reps.push(point.clone());
        }
        // odometer over the box [lo, hi]
        for axis in (0..n).rev() {
            if point[axis] < hi[axis] {
                point[axis] += 1;
                continue 'scan;
            }
            point[axis] = lo[axis];
        }
        break;
    }

    reps.sort_by(|a, b| {
        let az = a.iter().all(|&x| x == 0);
        let bz = b.iter().all(|&x| x == 0);
        bz.cmp(&az).then_with(|| a.cmp(b))
    });
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quincunx() -> IntMatrix {
        IntMatrix::new(2, vec![1, 1, 1, -1]).unwrap()
    }

    #[test]
    fn dyadic_1d_scheme() {
        let s = DilationScheme::validate(IntMatrix::new(1, vec![2]).unwrap()).unwrap();
        assert_eq!(s.q(), 2);
        assert_eq!(s.coset_reps(), &[vec![0], vec![1]]);
        assert_eq!(s.dual_reps(), &[vec![0], vec![1]]);
        let g1 = s.dual_frequency(1);
        assert!((g1[0] - PI).abs() < 1e-12);
    }

    #[test]
    fn quincunx_scheme() {
        let s = DilationScheme::validate(quincunx()).unwrap();
        assert_eq!(s.q(), 2);
        assert_eq!(s.coset_reps(), &[vec![0, 0], vec![1, 0]]);
        let g1 = s.dual_frequency(1);
        assert!((g1[0] - PI).abs() < 1e-12 && (g1[1] - PI).abs() < 1e-12);
    }

    #[test]
    fn dyadic_2d_cosets() {
        let s = DilationScheme::validate(IntMatrix::scalar(2, 2)).unwrap();
        let mut got: Vec<Vec<i64>> = s.coset_reps().to_vec();
        got.sort();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        // dual frequencies are the half-integer grid scaled by 2*pi
        let freqs: Vec<Vec<f64>> = (0..4).map(|k| s.dual_frequency(k)).collect();
        for f in freqs {
            for c in f {
                assert!((c - 0.0).abs() < 1e-12 || (c - PI).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_is_not_expanding() {
        let err = DilationScheme::validate(IntMatrix::scalar(2, 1)).unwrap_err();
        assert!(matches!(err, Error::NotExpanding { .. }));
    }

    #[test]
    fn shear_is_not_expanding() {
        // det = 1, eigenvalues on the unit circle
        let err = DilationScheme::validate(IntMatrix::new(2, vec![1, 1, 0, 1]).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::NotExpanding { .. }));
    }

    #[test]
    fn singular_matrix_rejected() {
        let err = DilationScheme::validate(IntMatrix::new(2, vec![2, 2, 1, 1]).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::SingularDilation));
    }

    #[test]
    fn triadic_cosets_match_brute_force() {
        // independent oracle: for L = [3], the fundamental domain [0,3)
        // contains exactly the integers 0, 1, 2
        let expected: Vec<Vec<i64>> = (0..3).map(|m| vec![m]).collect();
        let got = coset_reps(&IntMatrix::new(1, vec![3]).unwrap()).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn fourier_matrix_dyadic_at_zero() {
        let s = DilationScheme::validate(IntMatrix::new(1, vec![2]).unwrap()).unwrap();
        let x = s.fourier_matrix(&[0.0]);
        let r = 1.0 / 2f64.sqrt();
        let expect = [[r, r], [r, -r]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((x[i][j] - expect[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fourier_matrix_dyadic_2d_first_row() {
        let s = DilationScheme::validate(IntMatrix::scalar(2, 2)).unwrap();
        let x = s.fourier_matrix(&[0.0, 0.0]);
        for j in 0..4 {
            assert!((x[0][j] - 0.5).norm() < 1e-12, "row nu=0 must be constant 1/2");
        }
    }

    #[test]
    fn fourier_unitarity_quincunx() {
        let s = DilationScheme::validate(quincunx()).unwrap();
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state as f64 / u64::MAX as f64) * 2.0 * PI - PI
        };
        for _ in 0..100 {
            let omega = [next(), next()];
            let x = s.fourier_matrix(&omega);
            for i in 0..2 {
                for j in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..2 {
                        acc += x[k][i].conj() * x[k][j];
                    }
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((acc - expect).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn with_reps_rejects_duplicate_coset() {
        let lambda = IntMatrix::new(1, vec![2]).unwrap();
        let err = DilationScheme::with_reps(
            lambda,
            vec![vec![0], vec![2]], // 2 is congruent to 0 mod 2
            vec![vec![0], vec![1]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }

    #[test]
    fn solve_integer_quincunx() {
        let m = quincunx();
        assert_eq!(m.solve_integer(&[2, 0]), Some(vec![1, 1]));
        assert_eq!(m.solve_integer(&[1, 0]), None);
    }
}
