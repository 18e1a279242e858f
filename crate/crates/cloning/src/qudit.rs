//! Tensor-product linear algebra over d-dimensional complex factors:
//! basis states, Bell states, tensor products, partial traces and
//! partial transposes.
//!
//! Factor ordering is left-to-right, with the leftmost factor most
//! significant in the flat index (row-major, matching the Kronecker
//! product). Indices run 0..d-1 and index arithmetic is mod d.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance for exact-structure checks (orthonormality,
/// unitarity, Hermiticity).
pub const STRUCT_TOL: f64 = 1e-10;

fn check_factor_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return Err(Error::DimensionMismatch(format!(
            "factor dimensions must be positive, got {dims:?}"
        )));
    }
    Ok(())
}

fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Stride (index weight) of each factor for the flat row-major index.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn decode(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for i in (0..dims.len()).rev() {
        out[i] = idx % dims[i];
        idx /= dims[i];
    }
}

/// A pure state on a tensor product of finite-dimensional factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    dims: Vec<usize>,
    amps: DVector<C64>,
}

impl Ket {
    pub fn new(dims: Vec<usize>, amps: DVector<C64>) -> Result<Self> {
        check_factor_dims(&dims)?;
        if amps.len() != total_dim(&dims) {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector of length {} does not match factor dims {:?}",
                amps.len(),
                dims
            )));
        }
        let n = amps.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self { dims, amps })
    }

    pub fn zero(dims: Vec<usize>) -> Self {
        let n = total_dim(&dims);
        Self {
            dims,
            amps: DVector::zeros(n),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut DVector<C64> {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Fails unless the norm is within `tol` of one.
    pub fn check_unit(&self, tol: f64) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(())
    }

    pub fn normalized(&self) -> Ket {
        let n = self.norm();
        Ket {
            dims: self.dims.clone(),
            amps: &self.amps / C64::new(n, 0.0),
        }
    }

    pub fn scaled(&self, c: C64) -> Ket {
        Ket {
            dims: self.dims.clone(),
            amps: &self.amps * c,
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Ket) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Ket {
            dims,
            amps: self.amps.kronecker(&other.amps),
        }
    }

    /// |self⟩⟨self| as an operator.
    pub fn projector(&self) -> Op {
        let mat = &self.amps * self.amps.adjoint();
        Op {
            dims: self.dims.clone(),
            mat,
        }
    }

    /// Reorders factors so that result factor `i` is source factor `perm[i]`.
    pub fn permute_factors(&self, perm: &[usize]) -> Result<Ket> {
        let new_dims = permuted_dims(&self.dims, perm)?;
        let src_strides = strides(&self.dims);
        let n = self.dims.len();
        let mut digits = vec![0usize; n];
        let mut amps = DVector::zeros(self.amps.len());
        for idx in 0..self.amps.len() {
            decode(idx, &new_dims, &mut digits);
            let mut src = 0usize;
            for (i, &p) in perm.iter().enumerate() {
                src += digits[i] * src_strides[p];
            }
            amps[idx] = self.amps[src];
        }
        Ok(Ket {
            dims: new_dims,
            amps,
        })
    }
}

fn permuted_dims(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    if perm.len() != dims.len() {
        return Err(Error::LengthMismatch {
            expected: dims.len(),
            got: perm.len(),
        });
    }
    let mut seen = vec![false; dims.len()];
    for &p in perm {
        if p >= dims.len() || seen[p] {
            return Err(Error::InvalidFactor {
                index: p,
                nfactors: dims.len(),
            });
        }
        seen[p] = true;
    }
    Ok(perm.iter().map(|&p| dims[p]).collect())
}

/// A linear operator on a tensor product of finite-dimensional factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    dims: Vec<usize>,
    mat: DMatrix<C64>,
}

impl Op {
    pub fn new(dims: Vec<usize>, mat: DMatrix<C64>) -> Result<Self> {
        check_factor_dims(&dims)?;
        let n = total_dim(&dims);
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix does not match factor dims {:?}",
                mat.nrows(),
                mat.ncols(),
                dims
            )));
        }
        Ok(Self { dims, mat })
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let n = total_dim(&dims);
        Self {
            dims,
            mat: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let n = total_dim(&dims);
        Self {
            dims,
            mat: DMatrix::zeros(n, n),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn mat_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn adjoint(&self) -> Op {
        Op {
            dims: self.dims.clone(),
            mat: self.mat.adjoint(),
        }
    }

    pub fn transpose(&self) -> Op {
        Op {
            dims: self.dims.clone(),
            mat: self.mat.transpose(),
        }
    }

    pub fn scaled(&self, c: C64) -> Op {
        Op {
            dims: self.dims.clone(),
            mat: &self.mat * c,
        }
    }

    pub fn add(&self, other: &Op) -> Result<Op> {
        self.check_same_layout(other)?;
        Ok(Op {
            dims: self.dims.clone(),
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Op) -> Result<Op> {
        self.check_same_layout(other)?;
        Ok(Op {
            dims: self.dims.clone(),
            mat: &self.mat - &other.mat,
        })
    }

    /// Matrix product self · other.
    pub fn compose(&self, other: &Op) -> Result<Op> {
        self.check_same_layout(other)?;
        Ok(Op {
            dims: self.dims.clone(),
            mat: &self.mat * &other.mat,
        })
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        if ket.dims != self.dims {
            return Err(Error::DimensionMismatch(format!(
                "operator dims {:?} vs ket dims {:?}",
                self.dims, ket.dims
            )));
        }
        Ok(Ket {
            dims: self.dims.clone(),
            amps: &self.mat * &ket.amps,
        })
    }

    fn check_same_layout(&self, other: &Op) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "factor dims {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// ‖M − M†‖_max.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.mat.nrows() {
            for j in i..self.mat.ncols() {
                dev = dev.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol,
            });
        }
        Ok(())
    }

    pub fn tensor(&self, other: &Op) -> Op {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Op {
            dims,
            mat: self.mat.kronecker(&other.mat),
        }
    }

    /// Traces out every factor not listed in `keep`; kept factors stay in
    /// their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Op> {
        let nf = self.dims.len();
        let mut is_kept = vec![false; nf];
        for &k in keep {
            if k >= nf {
                return Err(Error::InvalidFactor {
                    index: k,
                    nfactors: nf,
                });
            }
            is_kept[k] = true;
        }
        let kept: Vec<usize> = (0..nf).filter(|&i| is_kept[i]).collect();
        let traced: Vec<usize> = (0..nf).filter(|&i| !is_kept[i]).collect();
        let kept_dims: Vec<usize> = kept.iter().map(|&i| self.dims[i]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&i| self.dims[i]).collect();
        let kd = total_dim(&kept_dims);
        let td: usize = traced_dims.iter().product();
        let full_strides = strides(&self.dims);

        // Precompute flat offsets of kept and traced sub-indices.
        let kept_offsets: Vec<usize> = (0..kd)
            .map(|i| {
                let mut digits = vec![0usize; kept.len()];
                decode(i, &kept_dims, &mut digits);
                digits
                    .iter()
                    .zip(&kept)
                    .map(|(&dg, &f)| dg * full_strides[f])
                    .sum()
            })
            .collect();
        let traced_offsets: Vec<usize> = (0..td)
            .map(|i| {
                let mut digits = vec![0usize; traced.len()];
                decode(i, &traced_dims, &mut digits);
                digits
                    .iter()
                    .zip(&traced)
                    .map(|(&dg, &f)| dg * full_strides[f])
                    .sum()
            })
            .collect();

        let mut out = DMatrix::<C64>::zeros(kd, kd);
        for (r, &ro) in kept_offsets.iter().enumerate() {
            for (c, &co) in kept_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &to in &traced_offsets {
                    acc += self.mat[(ro + to, co + to)];
                }
                out[(r, c)] = acc;
            }
        }
        Op::new(kept_dims, out)
    }

    /// Transposes the given factor in the computational basis.
    pub fn partial_transpose(&self, factor: usize) -> Result<Op> {
        let nf = self.dims.len();
        if factor >= nf {
            return Err(Error::InvalidFactor {
                index: factor,
                nfactors: nf,
            });
        }
        let st = strides(&self.dims);
        let n = self.dim();
        let mut out = DMatrix::<C64>::zeros(n, n);
        let mut rdig = vec![0usize; nf];
        let mut cdig = vec![0usize; nf];
        for r in 0..n {
            decode(r, &self.dims, &mut rdig);
            for c in 0..n {
                decode(c, &self.dims, &mut cdig);
                let r2 = r - rdig[factor] * st[factor] + cdig[factor] * st[factor];
                let c2 = c - cdig[factor] * st[factor] + rdig[factor] * st[factor];
                out[(r, c)] = self.mat[(r2, c2)];
            }
        }
        Op::new(self.dims.clone(), out)
    }

    /// Reorders factors so that result factor `i` is source factor `perm[i]`.
    pub fn permute_factors(&self, perm: &[usize]) -> Result<Op> {
        let new_dims = permuted_dims(&self.dims, perm)?;
        let src_strides = strides(&self.dims);
        let n = self.dim();
        let nf = self.dims.len();
        let mut digits = vec![0usize; nf];
        // map[new_index] = source index
        let mut map = vec![0usize; n];
        for (idx, m) in map.iter_mut().enumerate() {
            decode(idx, &new_dims, &mut digits);
            *m = perm
                .iter()
                .enumerate()
                .map(|(i, &p)| digits[i] * src_strides[p])
                .sum();
        }
        let mut out = DMatrix::<C64>::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = self.mat[(map[r], map[c])];
            }
        }
        Op::new(new_dims, out)
    }
}

/// The k-th computational basis vector on one factor of dimension d.
pub fn basis_ket(d: usize, k: usize) -> Result<Ket> {
    if d < 1 {
        return Err(Error::DimensionTooSmall(d));
    }
    if k >= d {
        return Err(Error::IndexOutOfRange { index: k, dim: d });
    }
    let mut amps = DVector::zeros(d);
    amps[k] = C64::new(1.0, 0.0);
    Ket::new(vec![d], amps)
}

/// The maximally entangled state (1/√d) Σ_j |j⟩|j⟩ on two d-dimensional factors.
pub fn max_entangled(d: usize) -> Result<Ket> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut amps = DVector::zeros(d * d);
    let w = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for j in 0..d {
        amps[j * d + j] = w;
    }
    Ket::new(vec![d, d], amps)
}

/// Principal d-th root of unity, exp(2πi/d).
pub fn root_of_unity(d: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64)
}

/// Qudit Bell state (1/√d) Σ_k γ^{kn} |k⟩|k+m mod d⟩.
pub fn bell_state(d: usize, m: usize, n: usize) -> Result<Ket> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if m >= d {
        return Err(Error::IndexOutOfRange { index: m, dim: d });
    }
    if n >= d {
        return Err(Error::IndexOutOfRange { index: n, dim: d });
    }
    let g = root_of_unity(d);
    let w = 1.0 / (d as f64).sqrt();
    let mut amps = DVector::zeros(d * d);
    for k in 0..d {
        amps[k * d + (k + m) % d] = g.powu((k * n) as u32) * w;
    }
    Ket::new(vec![d, d], amps)
}

/// Symmetrized two-qudit basis state: (|kl⟩+|lk⟩)/√2 for k≠l, |kk⟩ for k=l.
pub fn symmetric_ket(d: usize, k: usize, l: usize) -> Result<Ket> {
    if k >= d {
        return Err(Error::IndexOutOfRange { index: k, dim: d });
    }
    if l >= d {
        return Err(Error::IndexOutOfRange { index: l, dim: d });
    }
    let mut amps = DVector::zeros(d * d);
    if k == l {
        amps[k * d + k] = C64::new(1.0, 0.0);
    } else {
        let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[k * d + l] = w;
        amps[l * d + k] = w;
    }
    Ket::new(vec![d, d], amps)
}

/// Discrete Fourier transform on one d-dimensional factor, F_{jk} = γ^{jk}/√d.
pub fn dft(d: usize) -> Result<Op> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let g = root_of_unity(d);
    let w = 1.0 / (d as f64).sqrt();
    let mat = DMatrix::from_fn(d, d, |j, k| g.powu((j * k) as u32) * w);
    Op::new(vec![d], mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng as _;
    use rand_chacha::ChaCha8Rng;

    fn random_ket(dims: Vec<usize>, rng: &mut impl rand::Rng) -> Ket {
        let n: usize = dims.iter().product();
        let amps = DVector::from_fn(n, |_, _| {
            C64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal))
        });
        Ket::new(dims, amps).unwrap()
    }

    fn random_op(dims: Vec<usize>, rng: &mut impl rand::Rng) -> Op {
        let n: usize = dims.iter().product();
        let mat = DMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal))
        });
        Op::new(dims, mat).unwrap()
    }

    fn random_hermitian(dims: Vec<usize>, rng: &mut impl rand::Rng) -> Op {
        let a = random_op(dims, rng);
        a.add(&a.adjoint()).unwrap().scaled(C64::new(0.5, 0.0))
    }

    #[test]
    fn basis_ket_definition() {
        let k = basis_ket(2, 0).unwrap();
        assert_eq!(k.amps()[0], C64::new(1.0, 0.0));
        assert_eq!(k.amps()[1], C64::new(0.0, 0.0));
        let k = basis_ket(3, 2).unwrap();
        assert_eq!(k.amps()[2], C64::new(1.0, 0.0));
        assert!(basis_ket(3, 3).is_err());
    }

    #[test]
    fn basis_kets_orthonormal() {
        for i in 0..5 {
            for j in 0..5 {
                let d = basis_ket(5, i).unwrap().inner(&basis_ket(5, j).unwrap());
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(d.re, want, epsilon = 1e-14);
                assert_abs_diff_eq!(d.im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn max_entangled_d2() {
        let p = max_entangled(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(p.amps()[0].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(p.amps()[3].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(p.amps()[1].norm(), 0.0, epsilon = 1e-15);
        assert!(max_entangled(1).is_err());
    }

    #[test]
    fn max_entangled_reductions_are_maximally_mixed() {
        for d in 2..=5 {
            let rho = max_entangled(d).unwrap().projector();
            for f in 0..2 {
                let red = rho.partial_trace(&[f]).unwrap();
                let diff = red
                    .sub(&Op::identity(vec![d]).scaled(C64::new(1.0 / d as f64, 0.0)))
                    .unwrap();
                assert!(diff.frobenius_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn max_entangled_is_bell_00() {
        for d in 2..=7 {
            let a = max_entangled(d).unwrap();
            let b = bell_state(d, 0, 0).unwrap();
            assert!((a.amps() - b.amps()).norm() < 1e-14);
        }
    }

    #[test]
    fn bell_d2_singlet_like() {
        // bell(2,1,1) = (|01⟩ - |10⟩)/√2
        let b = bell_state(2, 1, 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(b.amps()[1].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(b.amps()[2].re, -s, epsilon = 1e-12);
        assert!(bell_state(2, 2, 0).is_err());
    }

    #[test]
    fn bell_basis_orthonormal_and_maximally_entangled() {
        for d in 2..=5 {
            let states: Vec<Ket> = (0..d)
                .flat_map(|m| (0..d).map(move |n| (m, n)))
                .map(|(m, n)| bell_state(d, m, n).unwrap())
                .collect();
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let g = a.inner(b);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - C64::new(want, 0.0)).norm() < 1e-12);
                }
            }
            for s in &states {
                let red = s.projector().partial_trace(&[0]).unwrap();
                let diff = red
                    .sub(&Op::identity(vec![d]).scaled(C64::new(1.0 / d as f64, 0.0)))
                    .unwrap();
                assert!(diff.frobenius_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_ket_cases() {
        let s = symmetric_ket(2, 0, 1).unwrap();
        let w = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amps()[1].re, w, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amps()[2].re, w, epsilon = 1e-15);
        let s = symmetric_ket(3, 1, 1).unwrap();
        assert_eq!(s.amps()[4], C64::new(1.0, 0.0));
        assert!(symmetric_ket(3, 3, 0).is_err());
    }

    #[test]
    fn symmetric_ket_swap_invariant() {
        for d in 2..=5 {
            for k in 0..d {
                for l in 0..d {
                    let s = symmetric_ket(d, k, l).unwrap();
                    let sw = s.permute_factors(&[1, 0]).unwrap();
                    assert!((s.amps() - sw.amps()).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn tensor_basics() {
        let t = basis_ket(2, 0).unwrap().tensor(&basis_ket(2, 1).unwrap());
        assert_eq!(t.amps()[1], C64::new(1.0, 0.0));
        assert_eq!(t.dims(), &[2, 2]);
        let i6 = Op::identity(vec![2]).tensor(&Op::identity(vec![3]));
        assert!(i6.sub(&Op::identity(vec![2, 3])).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_tensor_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_op(vec![3], &mut rng);
        let b = random_op(vec![2], &mut rng);
        let t = a.tensor(&b);
        let red = t.partial_trace(&[0]).unwrap();
        let want = a.scaled(b.trace());
        assert!(red.sub(&want).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..=4 {
            let h = random_hermitian(vec![d, d, d], &mut rng);
            for keep in [&[0usize][..], &[1], &[0, 2], &[2]] {
                let red = h.partial_trace(keep).unwrap();
                assert!((red.trace() - h.trace()).norm() < 1e-10);
                assert!(red.hermiticity_deviation() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_transpose_involution_and_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_op(vec![2, 3], &mut rng);
        let twice = a
            .partial_transpose(1)
            .unwrap()
            .partial_transpose(1)
            .unwrap();
        assert!(twice.sub(&a).unwrap().frobenius_norm() < 1e-14);
        let id = Op::identity(vec![2, 3]);
        assert!(id.partial_transpose(0).unwrap().sub(&id).unwrap().frobenius_norm() < 1e-15);
        assert!(a.partial_transpose(2).is_err());
    }

    #[test]
    fn partial_transpose_of_phi_plus_is_swap_over_d() {
        // d·(Φ⁺)^{T_1} = SWAP, eigenvalues ±1/2 at d=2
        let p = max_entangled(2).unwrap().projector();
        let pt = p.partial_transpose(0).unwrap();
        let eig = pt.mat().clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(vals[0], -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[3], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn permute_factors_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let k = random_ket(vec![2, 3, 4], &mut rng);
        let p = k.permute_factors(&[2, 0, 1]).unwrap();
        assert_eq!(p.dims(), &[4, 2, 3]);
        // invert: position of i in perm
        let back = p.permute_factors(&[1, 2, 0]).unwrap();
        assert!((back.amps() - k.amps()).norm() < 1e-15);
    }

    #[test]
    fn dft_is_unitary_and_symmetric() {
        for d in 2..=7 {
            let f = dft(d).unwrap();
            let prod = f.adjoint().compose(&f).unwrap();
            assert!(prod.sub(&Op::identity(vec![d])).unwrap().frobenius_norm() < 1e-12);
            assert!(f.sub(&f.transpose()).unwrap().frobenius_norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn tensor_norm_multiplicative(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_ket(vec![3], &mut rng);
            let b = random_ket(vec![2, 2], &mut rng);
            let t = a.tensor(&b);
            prop_assert!((t.norm() - a.norm() * b.norm()).abs() < 1e-10 * a.norm() * b.norm());
        }

        #[test]
        fn partial_trace_then_tensor_identity(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_op(vec![2], &mut rng);
            let b = random_op(vec![3], &mut rng);
            let red = a.tensor(&b).partial_trace(&[1]).unwrap();
            let want = b.scaled(a.trace());
            prop_assert!(red.sub(&want).unwrap().frobenius_norm() < 1e-10);
        }
    }
}
