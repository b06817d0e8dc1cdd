//! Small dense complex matrices.
//!
//! Dimensions never exceed a handful (the two-qubit space is 4-dimensional).
//! Spectral work goes through nalgebra.

use std::ops::{Index, IndexMut, Mul};

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::scalar::{Cx, Real};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Cx::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cx::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from equally sized rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Cx<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Cx::new(v, T::zero());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols)).fold(Cx::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<Cx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_sqr())
            .sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn frobenius(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermiticity_error(&self) -> T {
        let mut err = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                err = err.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        err
    }

    /// Submatrix on the given rows and columns (same index list for both).
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    /// Symmetric permutation `P A Pᵀ` where row `i` of the result is row `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.principal(perm)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }
}

impl<T> Index<(usize, usize)> for CMat<T> {
    type Output = Cx<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &CMat<T> {
    type Output = CMat<T>;

    fn mul(self, rhs: &CMat<T>) -> CMat<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// `⟨a|b⟩ = Σ conj(a_i) b_i`.
pub fn inner<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Cx<T> {
    a.iter()
        .zip(b)
        .fold(Cx::zero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn norm<T: Real>(a: &[Cx<T>]) -> T {
    a.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    /// Eigenvalues in descending order.
    pub values: Vec<T>,
    /// Unit eigenvectors as columns, matching `values`.
    pub vectors: CMat<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Cx<T>> {
        self.vectors.column(k)
    }
}

/// Dense spectral kernels, delegated to nalgebra for each concrete precision.
pub trait Dense: Sized {
    fn eigh(m: &CMat<Self>) -> HermitianEigen<Self>;
    fn svals(m: &CMat<Self>) -> Vec<Self>;
}

macro_rules! dense_via_nalgebra {
    ($($t:ty),*) => {$(
        impl Dense for $t {
            fn eigh(m: &CMat<$t>) -> HermitianEigen<$t> {
                let n = m.rows;
                let a = DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
                let e = a.symmetric_eigen();
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&i, &j| e.eigenvalues[j].total_cmp(&e.eigenvalues[i]));
                HermitianEigen {
                    values: order.iter().map(|&k| e.eigenvalues[k]).collect(),
                    vectors: CMat::from_fn(n, n, |i, k| e.eigenvectors[(i, order[k])]),
                }
            }

            fn svals(m: &CMat<$t>) -> Vec<$t> {
                let a = DMatrix::from_fn(m.rows, m.cols, |i, j| m[(i, j)]);
                let mut sv: Vec<$t> = a.singular_values().iter().copied().collect();
                sv.sort_by(|x, y| y.total_cmp(x));
                sv
            }
        }
    )*};
}

dense_via_nalgebra!(f32, f64);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
///
/// Only the Hermitian part of the input is used.
pub fn hermitian_eigen<T: Real>(m: &CMat<T>) -> HermitianEigen<T> {
    assert!(m.is_square(), "hermitian_eigen needs a square matrix");
    T::eigh(m)
}

/// Singular values of a general complex matrix, descending.
pub fn singular_values<T: Real>(m: &CMat<T>) -> Vec<T> {
    T::svals(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat<f64> {
        let g = CMat::from_fn(n, n, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        &g + &g.adjoint()
    }

    impl std::ops::Add for &CMat<f64> {
        type Output = CMat<f64>;
        fn add(self, rhs: &CMat<f64>) -> CMat<f64> {
            CMat::from_fn(self.rows(), self.cols(), |i, j| self[(i, j)] + rhs[(i, j)])
        }
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=5 {
            for _ in 0..20 {
                let h = random_hermitian(&mut rng, n);
                let e = hermitian_eigen(&h);
                let d = CMat::diag(&e.values);
                let back = &(&e.vectors * &d) * &e.vectors.adjoint();
                assert!(back.max_abs_diff(&h) < 1e-12, "n={n}");
                let unit = &e.vectors.adjoint() * &e.vectors;
                assert!(unit.max_abs_diff(&CMat::identity(n)) < 1e-12);
                for w in e.values.windows(2) {
                    assert!(w[0] >= w[1]);
                }
            }
        }
    }

    #[test]
    fn eigen_of_diagonal_is_sorted_diagonal() {
        let e = hermitian_eigen(&CMat::<f64>::diag(&[0.1, 0.7, 0.2]));
        assert_eq!(e.values, vec![0.7, 0.2, 0.1]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[a, b e^{iL}], [b e^{-iL}, d]] has eigenvalues (a+d)/2 ± sqrt(((a-d)/2)^2 + b^2)
        let (a, d, b, l) = (0.7, 0.3, 0.2, 1.3);
        let m = CMat::from_rows(&[
            vec![C::new(a, 0.0), C::from_polar(b, l)],
            vec![C::from_polar(b, -l), C::new(d, 0.0)],
        ]);
        let e = hermitian_eigen(&m);
        let r = (((a - d) / 2.0_f64).powi(2) + b * b).sqrt();
        assert!((e.values[0] - (0.5 + r)).abs() < 1e-15);
        assert!((e.values[1] - (0.5 - r)).abs() < 1e-15);
    }

    #[test]
    fn singular_values_match_eigen_of_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = CMat::from_fn(4, 4, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let sv = singular_values(&m);
            let gram = hermitian_eigen(&(&m.adjoint() * &m));
            for (s, g) in sv.iter().zip(&gram.values) {
                assert!((s * s - g).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_values_resolve_tiny_values() {
        let m = CMat::<f64>::diag(&[1.0, 1e-14, 0.0]);
        let sv = singular_values(&m);
        assert_eq!(sv[0], 1.0);
        assert!((sv[1] - 1e-14).abs() < 1e-28);
        assert_eq!(sv[2], 0.0);
    }

    #[test]
    fn kron_and_trace() {
        let x = CMat::<f64>::from_rows(&[vec![C::new(0.0, 0.0), C::new(1.0, 0.0)], vec![C::new(1.0, 0.0), C::new(0.0, 0.0)]]);
        let xx = x.kron(&x);
        assert_eq!(xx[(0, 3)], C::new(1.0, 0.0));
        assert_eq!(xx[(1, 2)], C::new(1.0, 0.0));
        assert_eq!(xx.trace(), C::new(0.0, 0.0));
    }

    #[test]
    fn works_in_single_precision() {
        let m = CMat::<f32>::diag(&[0.25, 0.75]);
        let e = hermitian_eigen(&m);
        assert_eq!(e.values, vec![0.75, 0.25]);
    }
}
