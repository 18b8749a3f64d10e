//! Exact entropy / mutual-information kernels for dense discrete
//! distributions, plus the scalar and log-determinant Gaussian
//! mutual-information helpers used by the AWGN rate evaluators.
//!
//! Conventions: all logarithms are base 2 (rates in bits per channel use),
//! and 0·log₂0 = 0 — probabilities at or below [`Scalar::prob_floor`] are
//! treated as exact zeros.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex;

/// Hard cap on the dense joint tensor size.
pub const MAX_JOINT_ENTRIES: usize = 10_000_000;

/// Dense probability tensor over named finite alphabets, row-major in the
/// declared axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<T> {
    dims: Vec<(String, usize)>,
    probs: Vec<T>,
}

impl<T: Scalar> JointPmf<T> {
    /// Validates and normalizes the tensor. Entries must be nonnegative and
    /// sum to one within [`Scalar::pmf_sum_tol`]; inputs inside the tolerance
    /// are renormalized, anything further off is rejected.
    pub fn new(dims: Vec<(String, usize)>, probs: Vec<T>) -> Result<Self> {
        let mut expected: usize = 1;
        for (name, size) in &dims {
            if *size == 0 {
                return Err(Error::Validation(format!("axis {name} has empty alphabet")));
            }
            expected = expected
                .checked_mul(*size)
                .filter(|n| *n <= MAX_JOINT_ENTRIES)
                .ok_or_else(|| {
                    Error::Validation(format!(
                        "joint tensor exceeds the {MAX_JOINT_ENTRIES}-entry cap"
                    ))
                })?;
        }
        for i in 0..dims.len() {
            for j in (i + 1)..dims.len() {
                if dims[i].0 == dims[j].0 {
                    return Err(Error::Validation(format!("duplicate axis name {}", dims[i].0)));
                }
            }
        }
        if probs.len() != expected {
            return Err(Error::Validation(format!(
                "tensor has {} entries, axis sizes require {expected}",
                probs.len()
            )));
        }
        let mut sum = T::zero();
        for &p in &probs {
            if !p.is_finite() || p < T::zero() {
                return Err(Error::Validation(format!("invalid probability entry {p}")));
            }
            sum += p;
        }
        if (sum - T::one()).abs() > T::pmf_sum_tol() {
            return Err(Error::Validation(format!("probabilities sum to {sum}, expected 1")));
        }
        let mut probs = probs;
        if sum != T::one() {
            for p in &mut probs {
                *p /= sum;
            }
        }
        Ok(Self { dims, probs })
    }

    pub fn axes(&self) -> &[(String, usize)] {
        &self.dims
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.dims
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::Validation(format!("unknown axis {name}")))
    }

    /// Marginal over `keep` (axes retained in their order within `self`).
    pub fn marginalize(&self, keep: &[&str]) -> Result<Self> {
        let mut keep_idx = Vec::with_capacity(keep.len());
        for name in keep {
            keep_idx.push(self.axis_index(name)?);
        }
        keep_idx.sort_unstable();
        keep_idx.dedup();
        if keep_idx.len() != keep.len() {
            return Err(Error::Validation("repeated axis in marginal".into()));
        }

        let out_dims: Vec<(String, usize)> =
            keep_idx.iter().map(|&i| self.dims[i].clone()).collect();
        let out_len: usize = out_dims.iter().map(|(_, s)| *s).product();
        let mut out = vec![T::zero(); out_len];

        // stride of each kept axis inside the projected tensor
        let mut proj_stride = vec![0usize; self.dims.len()];
        let mut acc = 1usize;
        for &i in keep_idx.iter().rev() {
            proj_stride[i] = acc;
            acc *= self.dims[i].1;
        }

        let mut idx = vec![0usize; self.dims.len()];
        for &p in &self.probs {
            let mut flat = 0usize;
            for &i in &keep_idx {
                flat += idx[i] * proj_stride[i];
            }
            out[flat] += p;
            // odometer increment over the full index
            for ax in (0..self.dims.len()).rev() {
                idx[ax] += 1;
                if idx[ax] < self.dims[ax].1 {
                    break;
                }
                idx[ax] = 0;
            }
        }
        Self::new(out_dims, out)
    }

    /// Same distribution with axes re-ordered as listed.
    pub fn permute_axes(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.dims.len() {
            return Err(Error::Validation("permutation must list every axis".into()));
        }
        let mut src_axis = Vec::with_capacity(order.len());
        for name in order {
            src_axis.push(self.axis_index(name)?);
        }
        {
            let mut seen = src_axis.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != order.len() {
                return Err(Error::Validation("permutation repeats an axis".into()));
            }
        }
        let out_dims: Vec<(String, usize)> =
            src_axis.iter().map(|&i| self.dims[i].clone()).collect();
        let mut src_stride = vec![1usize; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            src_stride[i] = src_stride[i + 1] * self.dims[i + 1].1;
        }
        let mut out = vec![T::zero(); self.probs.len()];
        let mut idx = vec![0usize; out_dims.len()];
        for slot in out.iter_mut() {
            let mut flat = 0usize;
            for (k, &src) in src_axis.iter().enumerate() {
                flat += idx[k] * src_stride[src];
            }
            *slot = self.probs[flat];
            for ax in (0..out_dims.len()).rev() {
                idx[ax] += 1;
                if idx[ax] < out_dims[ax].1 {
                    break;
                }
                idx[ax] = 0;
            }
        }
        Self::new(out_dims, out)
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> T {
        entropy_of(&self.probs)
    }

    /// Entropy of the marginal over `axes`.
    pub fn entropy_of(&self, axes: &[&str]) -> Result<T> {
        Ok(self.marginalize(axes)?.entropy())
    }

    /// I(A;B) with the remaining axes marginalized out.
    pub fn mutual_information(&self, group_a: &[&str], group_b: &[&str]) -> Result<T> {
        self.check_groups(&[group_a, group_b])?;
        let h_a = self.entropy_of(group_a)?;
        let h_b = self.entropy_of(group_b)?;
        let h_ab = self.entropy_of(&union(&[group_a, group_b]))?;
        Ok((h_a + h_b - h_ab).max(T::zero()))
    }

    /// I(A;B|C); an empty `group_c` reduces to plain mutual information.
    pub fn conditional_mi(
        &self,
        group_a: &[&str],
        group_b: &[&str],
        group_c: &[&str],
    ) -> Result<T> {
        if group_c.is_empty() {
            return self.mutual_information(group_a, group_b);
        }
        self.check_groups(&[group_a, group_b, group_c])?;
        let h_ac = self.entropy_of(&union(&[group_a, group_c]))?;
        let h_bc = self.entropy_of(&union(&[group_b, group_c]))?;
        let h_abc = self.entropy_of(&union(&[group_a, group_b, group_c]))?;
        let h_c = self.entropy_of(group_c)?;
        Ok((h_ac + h_bc - h_abc - h_c).max(T::zero()))
    }

    fn check_groups(&self, groups: &[&[&str]]) -> Result<()> {
        for (gi, g) in groups.iter().enumerate() {
            // conditioning group may be empty, argument groups may not
            if gi < 2 && g.is_empty() {
                return Err(Error::Validation("axis group must be non-empty".into()));
            }
            for name in *g {
                self.axis_index(name)?;
            }
        }
        for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                for a in groups[i] {
                    if groups[j].contains(a) {
                        return Err(Error::Validation(format!("axis {a} appears in two groups")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn union<'a>(groups: &[&[&'a str]]) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for g in groups {
        for name in *g {
            if !out.contains(name) {
                out.push(name);
            }
        }
    }
    out
}

/// −Σ p log₂ p over a raw slice, with the zero-floor convention.
pub fn entropy_of<T: Scalar>(probs: &[T]) -> T {
    let mut h = T::zero();
    for &p in probs {
        if p > T::prob_floor() {
            h -= p * p.log2();
        }
    }
    h.max(T::zero())
}

/// ½ log₂(1 + snr) for a scalar Gaussian channel.
pub fn gaussian_mi_scalar<T: Scalar>(snr: T) -> Result<T> {
    if !snr.is_finite() || snr < T::zero() {
        return Err(Error::Validation(format!("snr must be finite and >= 0, got {snr}")));
    }
    Ok((T::one() + snr).log2() * T::from_f64_lossy(0.5))
}

/// Small dense complex matrix (row-major), just large enough for the
/// covariance algebra the evaluators need.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> CMat<T> {
    pub fn new(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Validation(format!(
                "matrix data has {} entries, expected {}",
                data.len(),
                n * n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::new(T::zero(), T::zero()); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = Complex::new(d, T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Validation("matrix dimension mismatch".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| *a + *b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                let d = self.at(i, j) - self.at(j, i).conj();
                if d.norm_sqr() > tol * tol {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex<T> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex::new(T::one(), T::zero());
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].norm_sqr();
            for row in (col + 1)..n {
                let mag = a[row * n + col].norm_sqr();
                if mag > best {
                    best = mag;
                    pivot = row;
                }
            }
            if best == T::zero() {
                return Complex::new(T::zero(), T::zero());
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det = det * d;
            for row in (col + 1)..n {
                let f = a[row * n + col] / d;
                for k in col..n {
                    let sub = f * a[col * n + k];
                    a[row * n + k] = a[row * n + k] - sub;
                }
            }
        }
        det
    }
}

/// Signal/noise covariance pair for the vector Gaussian mutual information.
#[derive(Debug, Clone)]
pub struct CovariancePair<T> {
    signal: CMat<T>,
    noise: CMat<T>,
}

impl<T: Scalar> CovariancePair<T> {
    pub fn new(signal: CMat<T>, noise: CMat<T>) -> Result<Self> {
        if signal.dim() != noise.dim() {
            return Err(Error::Validation("signal/noise dimension mismatch".into()));
        }
        let tol = T::from_f64_lossy(1e-9);
        if !signal.is_hermitian(tol) || !noise.is_hermitian(tol) {
            return Err(Error::Validation("covariances must be Hermitian".into()));
        }
        let nd = noise.det();
        if !(nd.re > T::zero()) || nd.im.abs() > tol * (T::one() + nd.re.abs()) {
            return Err(Error::Validation(format!(
                "noise covariance must have strictly positive determinant, got {nd}"
            )));
        }
        Ok(Self { signal, noise })
    }

    pub fn signal(&self) -> &CMat<T> {
        &self.signal
    }

    pub fn noise(&self) -> &CMat<T> {
        &self.noise
    }
}

/// ½ log₂( det(signal + noise) / det(noise) ) in bits per vector symbol.
pub fn gaussian_mi_logdet<T: Scalar>(c: &CovariancePair<T>) -> Result<T> {
    let det_n = c.noise.det();
    let det_sn = c.signal.add(&c.noise)?.det();
    let tol = T::from_f64_lossy(1e-9);
    if det_n.norm_sqr() <= T::prob_floor() * T::prob_floor() {
        return Err(Error::NumericalDomain("singular noise covariance".into()));
    }
    let ratio = det_sn / det_n;
    if ratio.im.abs() > tol * (T::one() + ratio.re.abs()) {
        return Err(Error::NumericalDomain(format!(
            "determinant ratio is not real: {ratio}"
        )));
    }
    if ratio.re <= T::zero() {
        return Err(Error::NumericalDomain(format!(
            "non-positive determinant ratio {}",
            ratio.re
        )));
    }
    Ok((ratio.re.log2() * T::from_f64_lossy(0.5)).max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bit() -> JointPmf<f64> {
        JointPmf::new(vec![("x".into(), 2)], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn entropy_uniform_binary_is_one() {
        assert_relative_eq!(bit().entropy(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_point_mass_is_zero() {
        let p = JointPmf::new(vec![("x".into(), 3)], vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.entropy(), 0.0);
    }

    #[test]
    fn entropy_quarter_three_quarters() {
        // oracle: -0.25 log2 0.25 - 0.75 log2 0.75
        let p = JointPmf::new(vec![("x".into(), 2)], vec![0.25, 0.75]).unwrap();
        assert_relative_eq!(p.entropy(), 0.811278124459133, epsilon = 1e-14);
    }

    #[test]
    fn rejects_negative_and_unnormalized() {
        assert!(JointPmf::new(vec![("x".into(), 2)], vec![-0.1, 1.1]).is_err());
        assert!(JointPmf::new(vec![("x".into(), 2)], vec![0.6, 0.6]).is_err());
        // within tolerance: renormalized silently
        let p = JointPmf::new(vec![("x".into(), 2)], vec![0.5 + 4e-13, 0.5]).unwrap();
        assert_relative_eq!(p.probs().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_duplicate_axes_and_bad_shape() {
        assert!(JointPmf::new(
            vec![("x".into(), 2), ("x".into(), 2)],
            vec![0.25; 4]
        )
        .is_err());
        assert!(JointPmf::new(vec![("x".into(), 2)], vec![0.25; 4]).is_err());
    }

    #[test]
    fn mi_independent_bits_is_zero() {
        let p = JointPmf::new(
            vec![("a".into(), 2), ("b".into(), 2)],
            vec![0.25, 0.25, 0.25, 0.25],
        )
        .unwrap();
        assert_relative_eq!(p.mutual_information(&["a"], &["b"]).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn mi_identity_channel_is_one_bit() {
        let p = JointPmf::new(
            vec![("a".into(), 2), ("b".into(), 2)],
            vec![0.5, 0.0, 0.0, 0.5],
        )
        .unwrap();
        assert_relative_eq!(p.mutual_information(&["a"], &["b"]).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mi_binary_symmetric_crossover_011() {
        // uniform input through BSC(0.11): I = 1 - h2(0.11)
        let e = 0.11;
        let p = JointPmf::new(
            vec![("a".into(), 2), ("b".into(), 2)],
            vec![(1.0 - e) / 2.0, e / 2.0, e / 2.0, (1.0 - e) / 2.0],
        )
        .unwrap();
        let mi = p.mutual_information(&["a"], &["b"]).unwrap();
        assert_relative_eq!(mi, 0.500084041835472, epsilon = 1e-13);
    }

    #[test]
    fn mi_rejects_overlapping_groups() {
        let p = JointPmf::new(
            vec![("a".into(), 2), ("b".into(), 2)],
            vec![0.25; 4],
        )
        .unwrap();
        assert!(p.mutual_information(&["a"], &["a"]).is_err());
        assert!(p.mutual_information(&[], &["a"]).is_err());
    }

    #[test]
    fn conditional_mi_ignores_independent_axis() {
        // a = b uniform bit, c independent uniform bit: I(a;b|c) = 1
        let mut probs = vec![0.0; 8];
        for a in 0..2 {
            for c in 0..2 {
                probs[a * 4 + a * 2 + c] = 0.25;
            }
        }
        let p = JointPmf::new(
            vec![("a".into(), 2), ("b".into(), 2), ("c".into(), 2)],
            probs,
        )
        .unwrap();
        assert_relative_eq!(p.conditional_mi(&["a"], &["b"], &["c"]).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn conditional_mi_independent_triple_is_zero() {
        let p = JointPmf::new(
            vec![("a".into(), 2), ("b".into(), 2), ("c".into(), 2)],
            vec![0.125; 8],
        )
        .unwrap();
        assert_relative_eq!(p.conditional_mi(&["a"], &["b"], &["c"]).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn conditional_mi_chain_rule_on_random_pmf() {
        // fixed arbitrary 2x2x2 pmf; chain rule I(a;b,c) = I(a;c) + I(a;b|c)
        let raw = [0.07, 0.13, 0.02, 0.18, 0.11, 0.05, 0.29, 0.15];
        let p = JointPmf::new(
            vec![("a".into(), 2), ("b".into(), 2), ("c".into(), 2)],
            raw.to_vec(),
        )
        .unwrap();
        let lhs = p.mutual_information(&["a"], &["b", "c"]).unwrap();
        let rhs = p.mutual_information(&["a"], &["c"]).unwrap()
            + p.conditional_mi(&["a"], &["b"], &["c"]).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn entropy_invariant_under_axis_permutation() {
        let raw = [0.07, 0.13, 0.02, 0.18, 0.11, 0.05, 0.29, 0.15];
        let p = JointPmf::new(
            vec![("a".into(), 2), ("b".into(), 2), ("c".into(), 2)],
            raw.to_vec(),
        )
        .unwrap();
        let q = p.permute_axes(&["c", "a", "b"]).unwrap();
        assert_relative_eq!(p.entropy(), q.entropy(), epsilon = 1e-15);
        assert_relative_eq!(
            p.mutual_information(&["a"], &["b"]).unwrap(),
            q.mutual_information(&["a"], &["b"]).unwrap(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn gaussian_scalar_anchors() {
        assert_eq!(gaussian_mi_scalar(0.0f64).unwrap(), 0.0);
        assert_relative_eq!(gaussian_mi_scalar(1.0f64).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(gaussian_mi_scalar(3.0f64).unwrap(), 1.0, epsilon = 1e-15);
        assert!(gaussian_mi_scalar(-0.5f64).is_err());
    }

    #[test]
    fn gaussian_logdet_zero_signal() {
        let c = CovariancePair::new(CMat::<f64>::zeros(2), CMat::identity(2)).unwrap();
        assert_eq!(gaussian_mi_logdet(&c).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_logdet_diagonal_decouples() {
        let c = CovariancePair::new(CMat::from_diag(&[3.0, 1.0]), CMat::identity(2)).unwrap();
        let expected = 0.5 * ((1.0 + 3.0) * (1.0 + 1.0) as f64).log2();
        assert_relative_eq!(gaussian_mi_logdet(&c).unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn gaussian_logdet_matches_scalar_on_1x1() {
        let s = 2.7182818;
        let c = CovariancePair::new(CMat::from_diag(&[s]), CMat::from_diag(&[1.0])).unwrap();
        assert_relative_eq!(
            gaussian_mi_logdet(&c).unwrap(),
            gaussian_mi_scalar(s).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn gaussian_logdet_rejects_singular_noise() {
        assert!(CovariancePair::new(CMat::<f64>::zeros(2), CMat::zeros(2)).is_err());
    }

    #[test]
    fn mi_bounded_by_marginal_entropies() {
        let raw: [f64; 8] = [0.03, 0.17, 0.22, 0.08, 0.19, 0.01, 0.21, 0.09];
        let p = JointPmf::new(
            vec![("a".into(), 2), ("b".into(), 4)],
            raw.to_vec(),
        )
        .unwrap();
        let mi = p.mutual_information(&["a"], &["b"]).unwrap();
        let ha = p.entropy_of(&["a"]).unwrap();
        let hb = p.entropy_of(&["b"]).unwrap();
        assert!(mi >= -1e-10 && mi <= ha.min(hb) + 1e-10);
    }
}
