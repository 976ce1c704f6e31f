//! Dense and tridiagonal eigensolvers, generic over the scalar type.
//!
//! * [`SymTridiagonal`]: selected eigenpairs by Sturm-sequence bisection and
//!   inverse iteration. Used for the discretized flux Hamiltonian.
//! * [`sym_eigen`]: all eigenpairs of a dense real symmetric matrix
//!   (Householder tridiagonalization followed by implicit QL).
//! * Hermitian helpers on [`ComplexMatrix`], reduced to the real symmetric
//!   case through the standard 2n×2n real embedding.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric tridiagonal matrix given by its diagonal and first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Self {
        assert!(!diag.is_empty(), "empty tridiagonal matrix");
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length must be n-1");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Infinity norm, used to scale solver tolerances.
    pub fn norm(&self) -> T {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: T) -> usize {
        let max_off2 = self
            .off
            .iter()
            .fold(T::one(), |m, &e| m.max(e * e));
        let pivmin = T::min_positive_value() * max_off2;
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < T::zero() {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> Result<T> {
        if index >= self.len() {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue index {index} out of range for n = {}",
                self.len()
            )));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let eps = T::epsilon();
        let floor = T::min_positive_value() * T::lit(1e3);
        for _ in 0..400 {
            let width = hi - lo;
            if width <= T::two() * eps * (lo.abs() + hi.abs()) + floor {
                return Ok(T::half() * (lo + hi));
            }
            let mid = T::half() * (lo + hi);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.sturm_count(mid) <= index {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::NonConvergence(format!(
            "bisection for eigenvalue {index} exceeded iteration limit"
        )))
    }

    /// Eigenvector for `lambda` by inverse iteration, made orthogonal to
    /// every vector in `against` (the already computed members of a cluster).
    /// Returned with unit Euclidean norm.
    pub fn eigenvector(&self, lambda: T, against: &[Vec<T>]) -> Vec<T> {
        let n = self.len();
        let tiny = T::epsilon() * self.norm().max(T::min_positive_value());
        let lu = TridiagonalLu::factor(&self.diag, &self.off, lambda, tiny);
        // Deterministic, non-symmetric start vector so that no eigenvector of
        // definite parity is missed.
        let mut x: Vec<T> = (0..n)
            .map(|j| {
                let t = T::from_usize_lossy(j);
                T::one() + T::lit(0.37) * (t * T::lit(0.731)).sin() + T::lit(0.11) * (t * T::lit(0.013)).cos()
            })
            .collect();
        orthonormalize(&mut x, against);
        for _ in 0..4 {
            lu.solve_in_place(&mut x);
            orthonormalize(&mut x, against);
        }
        x
    }
}

fn orthonormalize<T: Real>(x: &mut [T], against: &[Vec<T>]) {
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for v in against {
            let proj: T = x.iter().zip(v).map(|(&a, &b)| a * b).sum();
            for (xi, &vi) in x.iter_mut().zip(v) {
                *xi -= proj * vi;
            }
        }
    }
    let norm = x.iter().map(|&a| a * a).sum::<T>().sqrt();
    if norm > T::zero() {
        for xi in x.iter_mut() {
            *xi /= norm;
        }
    }
}

/// LU factorization with partial pivoting of `T - shift·I` for a symmetric
/// tridiagonal `T`.
struct TridiagonalLu<T> {
    lower: Vec<T>,
    diag: Vec<T>,
    upper: Vec<T>,
    upper2: Vec<T>,
    swapped: Vec<bool>,
}

impl<T: Real> TridiagonalLu<T> {
    fn factor(diag: &[T], off: &[T], shift: T, tiny: T) -> Self {
        let n = diag.len();
        let mut d: Vec<T> = diag.iter().map(|&a| a - shift).collect();
        let mut lower = off.to_vec();
        let mut upper = off.to_vec();
        let mut upper2 = vec![T::zero(); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= lower[i].abs() {
                if d[i] == T::zero() {
                    d[i] = tiny;
                }
                let fact = lower[i] / d[i];
                lower[i] = fact;
                d[i + 1] -= fact * upper[i];
            } else {
                let fact = d[i] / lower[i];
                d[i] = lower[i];
                lower[i] = fact;
                let temp = upper[i];
                upper[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    upper2[i] = upper[i + 1];
                    upper[i + 1] = -fact * upper[i + 1];
                }
                swapped[i] = true;
            }
        }
        for di in d.iter_mut() {
            if di.abs() < tiny {
                *di = if *di < T::zero() { -tiny } else { tiny };
            }
        }
        Self {
            lower,
            diag: d,
            upper,
            upper2,
            swapped,
        }
    }

    fn solve_in_place(&self, b: &mut [T]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.lower[i] * b[i];
            } else {
                b[i + 1] = b[i + 1] - self.lower[i] * b[i];
            }
        }
        b[n - 1] = b[n - 1] / self.diag[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.upper[n - 2] * b[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.upper[i] * b[i + 1] - self.upper2[i] * b[i + 2]) / self.diag[i];
        }
    }
}

/// Square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> RealMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T> std::ops::Index<(usize, usize)> for RealMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for RealMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen<T> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Column `j` holds the eigenvector of `values[j]`.
    pub vectors: RealMatrix<T>,
}

/// All eigenpairs of a real symmetric matrix. Only the lower triangle is read.
pub fn sym_eigen<T: Real>(a: &RealMatrix<T>) -> Result<SymEigen<T>> {
    let n = a.dim();
    if n == 0 {
        return Ok(SymEigen {
            values: vec![],
            vectors: RealMatrix::zeros(0),
        });
    }
    let mut v = RealMatrix::from_fn(n, |i, j| if j <= i { a[(i, j)] } else { a[(j, i)] });
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e)?;
    Ok(SymEigen { values: d, vectors: v })
}

// Householder reduction to tridiagonal form, accumulating the transform in `v`.
fn tred2<T: Real>(v: &mut RealMatrix<T>, d: &mut [T], e: &mut [T]) {
    let n = v.dim();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for &dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = T::zero();
                v[(j, i)] = T::zero();
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let upd = f * e[k] + g * d[k];
                    v[(k, j)] -= upd;
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    let upd = g * d[k];
                    v[(k, j)] -= upd;
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = T::zero();
    }
    v[(n - 1, n - 1)] = T::one();
    e[0] = T::zero();
}

// Implicit QL on the tridiagonal (d, e), accumulating rotations into `v`.
fn tql2<T: Real>(v: &mut RealMatrix<T>, d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = v.dim();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let mut f = T::zero();
    let mut tst1 = T::zero();
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NonConvergence(format!(
                        "QL iteration stalled at index {l}"
                    )));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (T::two() * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }

    // selection sort, keeping columns in step
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for row in 0..n {
                let tmp = v[(row, i)];
                v[(row, i)] = v[(row, k)];
                v[(row, k)] = tmp;
            }
        }
    }
    Ok(())
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(a: &RealMatrix<T>) -> Self {
        Self::from_fn(a.dim(), |i, j| Complex::new(a[(i, j)], T::zero()))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.data[k * n + j];
                    out.data[i * n + j] = out.data[i * n + j] + a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        let n = self.n;
        (0..n)
            .map(|i| {
                let row = &self.data[i * n..(i + 1) * n];
                row.iter()
                    .zip(x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// Largest entry-wise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..=i {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entry-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).norm()))
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == T::zero())
    }

    fn real_part(&self) -> RealMatrix<T> {
        RealMatrix::from_fn(self.n, |i, j| self[(i, j)].re)
    }

    // [[Re, -Im], [Im, Re]]
    fn real_embedding(&self) -> RealMatrix<T> {
        let n = self.n;
        RealMatrix::from_fn(2 * n, |i, j| {
            let z = self[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        })
    }
}

impl<T> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<T: Real>(h: &ComplexMatrix<T>) -> Result<Vec<T>> {
    if h.is_real() {
        return Ok(sym_eigen(&h.real_part())?.values);
    }
    // every eigenvalue of the embedding appears twice
    let doubled = sym_eigen(&h.real_embedding())?.values;
    Ok(doubled.into_iter().step_by(2).collect())
}

/// `exp(-i·angle·H)` for Hermitian `H`, evaluated through the spectral
/// decomposition.
pub fn unitary_from_hermitian<T: Real>(h: &ComplexMatrix<T>, angle: T) -> Result<ComplexMatrix<T>> {
    let n = h.dim();
    if h.is_real() {
        let eig = sym_eigen(&h.real_part())?;
        let phases: Vec<Complex<T>> = eig
            .values
            .iter()
            .map(|&l| Complex::from_polar(T::one(), -angle * l))
            .collect();
        let v = &eig.vectors;
        let mut u = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (k, &ph) in phases.iter().enumerate() {
                    acc = acc + ph * (v[(i, k)] * v[(j, k)]);
                }
                u[(i, j)] = acc;
                u[(j, i)] = acc;
            }
        }
        return Ok(u);
    }
    // exp(-iθH) = cos(θH) - i sin(θH); with the embedding R of H, cos(θR) and
    // sin(θR) are the embeddings of cos(θH) and sin(θH).
    let eig = sym_eigen(&h.real_embedding())?;
    let m = 2 * n;
    let v = &eig.vectors;
    let mut u = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (mut c_re, mut c_im, mut s_re, mut s_im) = (T::zero(), T::zero(), T::zero(), T::zero());
            for k in 0..m {
                let (s, c) = (angle * eig.values[k]).sin_cos();
                let top = v[(i, k)] * v[(j, k)];
                let bottom = v[(i + n, k)] * v[(j, k)];
                c_re += c * top;
                c_im += c * bottom;
                s_re += s * top;
                s_im += s * bottom;
            }
            // cos - i sin
            u[(i, j)] = Complex::new(c_re + s_im, c_im - s_re);
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag_dense(t: &SymTridiagonal<f64>) -> RealMatrix<f64> {
        let n = t.len();
        RealMatrix::from_fn(n, |i, j| {
            if i == j {
                t.diag[i]
            } else if i + 1 == j {
                t.off[i]
            } else if j + 1 == i {
                t.off[j]
            } else {
                0.0
            }
        })
    }

    #[test]
    fn bisection_matches_dense_solver() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| ((i * 7) % 11) as f64 - 3.0).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.5 + ((i * 3) % 5) as f64 * 0.3).collect();
        let t = SymTridiagonal::new(diag, off);
        let dense = sym_eigen(&tridiag_dense(&t)).unwrap();
        for k in 0..n {
            let l = t.eigenvalue(k).unwrap();
            assert!((l - dense.values[k]).abs() < 1e-12, "k={k}: {l} vs {}", dense.values[k]);
        }
    }

    #[test]
    fn inverse_iteration_residual() {
        // free particle on a line: known spectrum 2 - 2cos(kπ/(n+1))
        let n = 200;
        let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]);
        let mut found: Vec<Vec<f64>> = vec![];
        for k in 0..3 {
            let l = t.eigenvalue(k).unwrap();
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((l - exact).abs() < 1e-13);
            let v = t.eigenvector(l, &found);
            let mut res = 0.0f64;
            for i in 0..n {
                let mut hv = 2.0 * v[i];
                if i > 0 {
                    hv -= v[i - 1];
                }
                if i + 1 < n {
                    hv -= v[i + 1];
                }
                res = res.max((hv - l * v[i]).abs());
            }
            assert!(res < 1e-12, "residual {res}");
            found.push(v);
        }
    }

    #[test]
    fn sym_eigen_reconstructs() {
        let a = RealMatrix::from_fn(6, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { i as f64 } else { 0.0 });
        let e = sym_eigen(&a).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let r: f64 = (0..6).map(|k| e.vectors[(i, k)] * e.values[k] * e.vectors[(j, k)]).sum();
                assert!((r - a[(i, j)]).abs() < 1e-12);
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn complex_exponential_of_pauli_y() {
        // exp(-iθσy) = cosθ I - i sinθ σy = [[c, -s], [s, c]]
        let mut y = ComplexMatrix::zeros(2);
        y[(0, 1)] = Complex::new(0.0, -1.0);
        y[(1, 0)] = Complex::new(0.0, 1.0);
        let th = 0.3f64;
        let u = unitary_from_hermitian(&y, th).unwrap();
        let (s, c) = th.sin_cos();
        assert!((u[(0, 0)] - Complex::new(c, 0.0)).norm() < 1e-14);
        assert!((u[(0, 1)] - Complex::new(-s, 0.0)).norm() < 1e-14);
        assert!((u[(1, 0)] - Complex::new(s, 0.0)).norm() < 1e-14);
        let ev = hermitian_eigenvalues(&y).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }
}
