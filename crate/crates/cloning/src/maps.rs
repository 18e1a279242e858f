//! Choi-operator representation of 1→2 cloning CP maps: construction from
//! isometries, trace-preservation checks, map application and per-state
//! clone fidelities.
//!
//! Factor order is (in, B, E). Normalization convention: Tr S = d for a
//! trace-preserving map.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qudit::{basis_ket, Ket, Op, C64, STRUCT_TOL};

/// Tr(A·B) without forming the product matrix.
pub fn trace_product(a: &Op, b: &Op) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "trace_product: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let (am, bm) = (a.mat(), b.mat());
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += am[(i, j)] * bm[(j, i)];
        }
    }
    Ok(acc)
}

/// An isometry from one d-dimensional factor into two d-dimensional factors
/// (B ⊗ E), stored as a d²×d matrix of columns V|k⟩.
#[derive(Debug, Clone)]
pub struct Isometry {
    d: usize,
    mat: DMatrix<C64>,
}

impl Isometry {
    pub fn new(d: usize, mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != d * d || mat.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "isometry must be {}x{}, got {}x{}",
                d * d,
                d,
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { d, mat })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// ‖V†V − 𝟙‖_F.
    pub fn isometry_deviation(&self) -> f64 {
        let g = self.mat.adjoint() * &self.mat;
        (g - DMatrix::<C64>::identity(self.d, self.d)).norm()
    }

    /// V|k⟩ as a two-factor ket on B ⊗ E.
    pub fn column(&self, k: usize) -> Result<Ket> {
        if k >= self.d {
            return Err(Error::IndexOutOfRange {
                index: k,
                dim: self.d,
            });
        }
        Ket::new(vec![self.d, self.d], self.mat.column(k).into_owned())
    }

    /// The economical isometry |k⟩ ↦ U(|k⟩_B ⊗ |blank⟩_E) induced by a
    /// two-qudit unitary and a fixed blank state.
    pub fn from_unitary(u: &Op, blank: &Ket) -> Result<Self> {
        let dims = u.dims();
        if dims.len() != 2 || dims[0] != dims[1] {
            return Err(Error::DimensionMismatch(format!(
                "expected a two-factor unitary on equal dims, got {dims:?}"
            )));
        }
        let d = dims[0];
        if blank.dims() != [d] {
            return Err(Error::DimensionMismatch(format!(
                "blank state dims {:?} vs factor dim {}",
                blank.dims(),
                d
            )));
        }
        let mut mat = DMatrix::<C64>::zeros(d * d, d);
        for k in 0..d {
            let input = basis_ket(d, k)?.tensor(blank);
            let out = u.apply(&input)?;
            mat.set_column(k, out.amps());
        }
        Self::new(d, mat)
    }
}

/// A Haar-ish random isometry obtained by QR of a complex Gaussian matrix.
pub fn random_isometry(d: usize, rng: &mut impl Rng) -> Result<Isometry> {
    let g = DMatrix::from_fn(d * d, d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let q = qr.q();
    Isometry::new(d, q.columns(0, d).into_owned())
}

/// The Choi operator of a 1→2 cloning CP map, on factors (in, B, E),
/// normalized so that Tr S = d for a trace-preserving map.
#[derive(Debug, Clone)]
pub struct ChoiOp {
    op: Op,
    d: usize,
}

impl ChoiOp {
    /// Validates layout, Hermiticity, and positive semidefiniteness
    /// (minimum eigenvalue ≥ −1e-10).
    pub fn new(op: Op, d: usize) -> Result<Self> {
        if op.dims() != [d, d, d] {
            return Err(Error::DimensionMismatch(format!(
                "Choi operator dims {:?}, expected [{d}, {d}, {d}]",
                op.dims()
            )));
        }
        op.check_hermitian(1e-10)?;
        if let Some(min_eig) = psd_violation(op.mat()) {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(Self { op, d })
    }

    pub fn op(&self) -> &Op {
        &self.op
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

/// Rank-one Choi operator |S⟩⟨S| with |S⟩ = Σ_k |k⟩_in ⊗ V|k⟩.
/// Trace-preserving by construction, Tr = d.
pub fn choi_from_isometry(v: &Isometry) -> Result<ChoiOp> {
    let dev = v.isometry_deviation();
    if dev > STRUCT_TOL {
        return Err(Error::NotIsometry { deviation: dev });
    }
    let s = choi_vector_from_isometry(v)?;
    ChoiOp::new(s.projector(), v.d())
}

/// The (unnormalized, norm √d) Choi vector Σ_k |k⟩_in ⊗ V|k⟩.
pub fn choi_vector_from_isometry(v: &Isometry) -> Result<Ket> {
    let d = v.d();
    let mut s = Ket::zero(vec![d, d, d]);
    for k in 0..d {
        let term = basis_ket(d, k)?.tensor(&v.column(k)?);
        *s.amps_mut() += term.amps();
    }
    Ok(s)
}

/// Returns (is trace-preserving within tol, residual ‖Tr_BE S − 𝟙‖_F).
pub fn is_trace_preserving(s: &ChoiOp, tol: f64) -> (bool, f64) {
    let residual = trace_preservation_residual(s.op(), s.d());
    (residual <= tol, residual)
}

/// ‖Tr_BE M − 𝟙_in‖_F for any operator on (in, B, E).
pub fn trace_preservation_residual(op: &Op, d: usize) -> f64 {
    let reduced = op.partial_trace(&[0]).expect("factor 0 exists");
    reduced
        .sub(&Op::identity(vec![d]))
        .expect("layout matches")
        .frobenius_norm()
}

fn check_density_matrix(rho: &Op, d: usize) -> Result<()> {
    if rho.dims() != [d] {
        return Err(Error::NotDensityMatrix(format!(
            "dims {:?}, expected [{d}]",
            rho.dims()
        )));
    }
    rho.check_hermitian(1e-10)?;
    if (rho.trace() - C64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::NotDensityMatrix(format!("trace {}", rho.trace())));
    }
    if let Some(min_eig) = psd_violation(rho.mat()) {
        return Err(Error::NotDensityMatrix(format!("min eigenvalue {min_eig}")));
    }
    Ok(())
}

/// Returns `Some(estimated min eigenvalue)` when the Hermitian matrix is
/// not positive semidefinite within −1e-10 (relative to its largest entry),
/// `None` when it is. Tested via Cholesky of the tolerance-shifted matrix,
/// which stays reliable on exactly-singular inputs.
fn psd_violation(m: &DMatrix<C64>) -> Option<f64> {
    let scale = m.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
    let tol = 1e-10 * scale;
    let shifted = m + DMatrix::<C64>::identity(m.nrows(), m.ncols()) * C64::new(tol, 0.0);
    if nalgebra::Cholesky::new(shifted).is_some() {
        return None;
    }
    let eig = m.clone().symmetric_eigen();
    let min_eig = eig
        .eigenvalues
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(f64::INFINITY, f64::min);
    Some(min_eig)
}

/// ρ_out = Tr_in[(ρ_in^T ⊗ 𝟙_BE) S], the two-clone output state on B ⊗ E.
pub fn apply_map(s: &ChoiOp, rho_in: &Op) -> Result<Op> {
    let d = s.d();
    check_density_matrix(rho_in, d)?;
    let big = rho_in.transpose().tensor(&Op::identity(vec![d, d]));
    big.compose(s.op())?.partial_trace(&[1, 2])
}

/// Per-state clone fidelities (F_B, F_E) of Eq-style functionals
/// Tr(ψ^T⊗ψ⊗𝟙·S) and Tr(ψ^T⊗𝟙⊗ψ·S).
pub fn clone_fidelities(s: &ChoiOp, psi: &Ket) -> Result<(f64, f64)> {
    let d = s.d();
    if psi.dims() != [d] {
        return Err(Error::DimensionMismatch(format!(
            "state dims {:?} vs factor dim {}",
            psi.dims(),
            d
        )));
    }
    psi.check_unit(STRUCT_TOL)?;
    let p = psi.projector();
    let pt = p.transpose();
    let id = Op::identity(vec![d]);
    let fb = trace_product(&pt.tensor(&p).tensor(&id), s.op())?;
    let fe = trace_product(&pt.tensor(&id).tensor(&p), s.op())?;
    Ok((fb.re, fe.re))
}

/// Mean fidelity Tr(S·R) against a Hermitian figure-of-merit operator.
pub fn mean_fidelity(s: &ChoiOp, r: &Op) -> Result<f64> {
    r.check_hermitian(1e-12)?;
    if r.dims() != s.op().dims() {
        return Err(Error::DimensionMismatch(format!(
            "R dims {:?} vs Choi dims {:?}",
            r.dims(),
            s.op().dims()
        )));
    }
    let t = trace_product(s.op(), r)?;
    Ok(t.re)
}
