//! The Bell-biorthogonal four-qudit cloning ansatz: amplitude matrices for
//! the universal, phase-covariant and Fourier-covariant machines, the
//! cloning state on (A, B, E, M), its reduced Choi operator, and the
//! constraint systems governing ancilla-free realizations.

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::economical::{FEASIBILITY_TOL, INFEASIBILITY_FLOOR};
use crate::error::{Error, Result};
use crate::figures_of_merit::{max_eigenspace, r_operator, CloneFamily, DEGENERACY_TOL};
use crate::maps::{trace_preservation_residual, trace_product, ChoiOp};
use crate::optim::nelder_mead;
use crate::qudit::{bell_state, root_of_unity, Ket, Op, C64};

/// The three real parameters of the amplitude-matrix families. Components
/// may be negative: the phase-covariant optimum requires x2 < 0 in this
/// sign convention, and an overall sign is immaterial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XParams {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeLabel {
    Universal,
    PhaseCovariant,
    FourierCovariant,
    Custom,
}

/// A normalized d×d amplitude matrix a_{m,n} defining a cloning machine.
#[derive(Debug, Clone)]
pub struct AmplitudeMatrix {
    d: usize,
    a: DMatrix<C64>,
    label: AmplitudeLabel,
}

impl AmplitudeMatrix {
    /// Requires Frobenius norm 1 within 1e-10.
    pub fn new(d: usize, a: DMatrix<C64>, label: AmplitudeLabel) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if a.nrows() != d || a.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} amplitude matrix for d={d}",
                a.nrows(),
                a.ncols()
            )));
        }
        let norm = a.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::AmplitudeNotNormalized { norm });
        }
        Ok(Self { d, a, label })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn a(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn label(&self) -> AmplitudeLabel {
        self.label
    }
}

/// Unnormalized family matrix: the raw linear-in-x entries.
fn family_matrix(family: CloneFamily, x: XParams, d: usize) -> DMatrix<C64> {
    DMatrix::from_fn(d, d, |m, n| {
        let mut v = x.x3;
        match family {
            CloneFamily::Universal => {
                if m == 0 && n == 0 {
                    v += x.x1;
                }
            }
            CloneFamily::PhaseCovariant => {
                if m == 0 {
                    v += x.x2;
                }
                if m == 0 && n == 0 {
                    v += x.x1;
                }
            }
            CloneFamily::Fourier => {
                if m == 0 {
                    v += x.x2;
                }
                if n == 0 {
                    v += x.x2;
                }
                if m == 0 && n == 0 {
                    v += x.x1;
                }
            }
        }
        C64::new(v, 0.0)
    })
}

/// a_{m,n} = x1 δ_{m0}δ_{n0} + x3. Requires x2 = 0 and normalization.
pub fn amp_universal(x: XParams, d: usize) -> Result<AmplitudeMatrix> {
    if x.x2 != 0.0 {
        return Err(Error::InvalidParameters(format!(
            "universal amplitudes have no x2 term (got x2 = {})",
            x.x2
        )));
    }
    AmplitudeMatrix::new(
        d,
        family_matrix(CloneFamily::Universal, x, d),
        AmplitudeLabel::Universal,
    )
}

/// a_{m,n} = x1 δ_{m0}δ_{n0} + x2 δ_{m0} + x3.
pub fn amp_phase_covariant(x: XParams, d: usize) -> Result<AmplitudeMatrix> {
    AmplitudeMatrix::new(
        d,
        family_matrix(CloneFamily::PhaseCovariant, x, d),
        AmplitudeLabel::PhaseCovariant,
    )
}

/// a_{m,n} = x1 δ_{m0}δ_{n0} + x2 (δ_{m0} + δ_{n0}) + x3.
pub fn amp_fourier(x: XParams, d: usize) -> Result<AmplitudeMatrix> {
    AmplitudeMatrix::new(
        d,
        family_matrix(CloneFamily::Fourier, x, d),
        AmplitudeLabel::FourierCovariant,
    )
}

/// Parameters of the optimal symmetric universal cloner:
/// x1 = d·x3 with x1² = d/(2(d+1)), so that both Tr(S·R) saturates d·r_max
/// and the amplitude matrix is normalized.
pub fn universal_symmetric_xparams(d: usize) -> XParams {
    let dd = d as f64;
    let x1 = (dd / (2.0 * (dd + 1.0))).sqrt();
    XParams {
        x1,
        x2: 0.0,
        x3: x1 / dd,
    }
}

fn raw_cloning_state(a: &DMatrix<C64>, d: usize) -> Result<Ket> {
    let mut psi = Ket::zero(vec![d, d, d, d]);
    for m in 0..d {
        for n in 0..d {
            let c = a[(m, n)];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let term = bell_state(d, m, n)?.tensor(&bell_state(d, m, (d - n) % d)?);
            *psi.amps_mut() += term.amps() * c;
        }
    }
    Ok(psi)
}

/// |Ψ⟩ = Σ_{m,n} a_{m,n} |B_{m,n}⟩_{A,B} |B_{m,−n}⟩_{E,M} on factors
/// (A, B, E, M). Unit norm by Bell-basis orthonormality.
pub fn cloning_state(a: &AmplitudeMatrix) -> Result<Ket> {
    raw_cloning_state(a.a(), a.d())
}

fn reduced_choi_matrix(psi: &Ket, d: usize) -> DMatrix<C64> {
    // reshape to T[abe, m]; d · T T† = d · Tr_M |Ψ⟩⟨Ψ|
    let n = d * d * d;
    let t = DMatrix::from_fn(n, d, |abe, m| psi.amps()[abe * d + m]);
    let mut s = &t * t.adjoint();
    s *= C64::new(d as f64, 0.0);
    s
}

/// d·Tr_M |Ψ⟩⟨Ψ| reinterpreted as a Choi operator on (in, B, E) with
/// in ≡ A, together with its trace-preservation residual.
pub fn reduced_choi(psi: &Ket) -> Result<(ChoiOp, f64)> {
    let dims = psi.dims();
    if dims.len() != 4 || dims.iter().any(|&x| x != dims[0]) {
        return Err(Error::DimensionMismatch(format!(
            "expected four equal factors, got {dims:?}"
        )));
    }
    psi.check_unit(1e-10)?;
    let d = dims[0];
    let op = Op::new(vec![d, d, d], reduced_choi_matrix(psi, d))?;
    let residual = trace_preservation_residual(&op, d);
    let choi = ChoiOp::new(op, d)?;
    Ok((choi, residual))
}

/// The d (generally unnormalized) states |r_p⟩ = ⟨p|_M |Ψ⟩ spanning the
/// support of the reduced Choi operator.
pub fn support_states(a: &AmplitudeMatrix) -> Result<Vec<Ket>> {
    let d = a.d();
    let psi = cloning_state(a)?;
    (0..d)
        .map(|p| {
            let amps = DVector::from_fn(d * d * d, |abe, _| psi.amps()[abe * d + p]);
            Ket::new(vec![d, d, d], amps)
        })
        .collect()
}

/// Columns w_k = Σ_{m,n,j} α_{j+m} a_{m,n} γ^{n(k−j)} |k+m⟩_B |j⟩_E of the
/// would-be ancilla-free unitary acting as |k⟩_B|ψ₀⟩_E ↦ w_k. Economical
/// realization demands these be orthonormal.
pub fn ansatz_unitary_columns(a: &AmplitudeMatrix, alpha: &[C64]) -> Result<Vec<Ket>> {
    let d = a.d();
    if alpha.len() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: alpha.len(),
        });
    }
    let g = root_of_unity(d);
    let mut cols = Vec::with_capacity(d);
    for k in 0..d {
        let mut col = Ket::zero(vec![d, d]);
        for m in 0..d {
            for n in 0..d {
                for j in 0..d {
                    // γ^{n(k−j)} with k−j taken mod d
                    let phase = g.powu((n * ((k + d - j) % d)) as u32);
                    let b = (k + m) % d;
                    col.amps_mut()[b * d + j] +=
                        alpha[(j + m) % d] * a.a()[(m, n)] * phase;
                }
            }
        }
        cols.push(col);
    }
    Ok(cols)
}

/// f_d = x1² + d·x2² + d²·x3² + 2·x1x2 + 2d·x2x3.
pub fn f_poly(x: XParams, d: usize) -> f64 {
    let dd = d as f64;
    x.x1 * x.x1
        + dd * x.x2 * x.x2
        + dd * dd * x.x3 * x.x3
        + 2.0 * x.x1 * x.x2
        + 2.0 * dd * x.x2 * x.x3
}

/// g_d = (d²+2d)·x2² + 2d·x1x2 + 2d·x1x3 + 2d²·x2x3.
pub fn g_poly(x: XParams, d: usize) -> f64 {
    let dd = d as f64;
    (dd * dd + 2.0 * dd) * x.x2 * x.x2
        + 2.0 * dd * x.x1 * x.x2
        + 2.0 * dd * x.x1 * x.x3
        + 2.0 * dd * dd * x.x2 * x.x3
}

/// Residuals of the unitarity system for the Fourier-parametrized
/// amplitude matrix (which subsumes the universal family at x2 = 0).
#[derive(Debug, Clone)]
pub struct ConstraintResiduals {
    pub f_d: f64,
    pub g_d: f64,
    /// f_d + g_d/d − 1; vanishes iff the cloning state is normalized.
    pub normalization_residual: f64,
    /// |Σ_j|α_j|²·f_d + |α_k|²·g_d − 1| for each k.
    pub diagonal: Vec<f64>,
    /// Magnitudes of the k ≠ k′ orthogonality conditions, row-major over
    /// ordered pairs.
    pub offdiagonal: Vec<f64>,
    pub max_residual: f64,
}

/// Evaluates the diagonal and off-diagonal unitarity conditions in their
/// polynomial form. Indices are mod d.
pub fn constraint_residuals(x: XParams, alpha: &[C64], d: usize) -> Result<ConstraintResiduals> {
    if alpha.len() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: alpha.len(),
        });
    }
    let dd = d as f64;
    let f = f_poly(x, d);
    let g = g_poly(x, d);
    let alpha_norm2: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();

    let diagonal: Vec<f64> = (0..d)
        .map(|k| (alpha_norm2 * f + alpha[k].norm_sqr() * g - 1.0).abs())
        .collect();

    // cyclic autocorrelations Σ_j α_j α*_{j+m}
    let autocorr: Vec<C64> = (0..d)
        .map(|m| {
            (0..d)
                .map(|j| alpha[j] * alpha[(j + m) % d].conj())
                .sum()
        })
        .collect();

    let c1 = dd * x.x2 * x.x2 + 2.0 * x.x1 * x.x2 + 2.0 * dd * x.x2 * x.x3;
    let c2 = dd * x.x2 * x.x2;
    let c3 = 2.0 * dd * x.x1 * x.x3;
    let mut offdiagonal = Vec::with_capacity(d * (d - 1));
    for k in 0..d {
        for kp in 0..d {
            if k == kp {
                continue;
            }
            let m = (k + d - kp) % d;
            let term = autocorr[m] * c1
                + (alpha[k] * alpha[(2 * k + d - kp) % d].conj()
                    + alpha[(2 * kp + d * 2 - k) % d] * alpha[kp].conj())
                    * c2
                + alpha[kp] * alpha[k].conj() * c3;
            offdiagonal.push(term.norm());
        }
    }

    let max_residual = diagonal
        .iter()
        .chain(offdiagonal.iter())
        .cloned()
        .fold(0.0f64, f64::max);
    Ok(ConstraintResiduals {
        f_d: f,
        g_d: g,
        normalization_residual: f + g / dd - 1.0,
        diagonal,
        offdiagonal,
        max_residual,
    })
}

/// Minimizes the worst constraint residual over unit vectors α via seeded
/// multistart simplex descent. Returns (best residual, best α).
pub fn constraint_search(
    x: XParams,
    d: usize,
    restarts: usize,
    seed: u64,
) -> Result<(f64, Vec<C64>)> {
    if restarts == 0 {
        return Err(Error::InvalidParameters("need at least one restart".into()));
    }
    let objective = |u: &[f64]| -> f64 {
        let norm2: f64 = u.iter().map(|v| v * v).sum();
        if norm2 < 1e-24 {
            return f64::INFINITY;
        }
        let s = norm2.sqrt();
        let alpha: Vec<C64> = (0..d)
            .map(|j| C64::new(u[2 * j] / s, u[2 * j + 1] / s))
            .collect();
        constraint_residuals(x, &alpha, d)
            .map(|r| r.max_residual)
            .unwrap_or(f64::INFINITY)
    };
    let mut best = f64::INFINITY;
    let mut best_alpha = vec![C64::new(0.0, 0.0); d];
    for i in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let x0: Vec<f64> = (0..2 * d).map(|_| rng.sample(StandardNormal)).collect();
        let min = nelder_mead(&objective, &x0, 0.4, 1e-12, 1e-14, 4000);
        if min.value < best {
            best = min.value;
            let norm2: f64 = min.x.iter().map(|v| v * v).sum();
            let s = norm2.sqrt();
            best_alpha = (0..d)
                .map(|j| C64::new(min.x[2 * j] / s, min.x[2 * j + 1] / s))
                .collect();
        }
    }
    Ok((best, best_alpha))
}

/// Verdict on the recurrence α̃_{k+1} = −α̃_k² α̃*_{k−1} for unimodular
/// amplitudes, combined with the cyclic orthogonality sums.
#[derive(Debug, Clone)]
pub struct RecurrenceVerdict {
    pub d: usize,
    pub min_residual: f64,
    pub best_alpha1: C64,
    pub solvable: bool,
}

fn recurrence_residual(d: usize, alpha1: C64) -> f64 {
    // α̃_{2n} = (−1)ⁿ α̃₁^{2n}, α̃_{2n+1} = (−1)ⁿ α̃₁^{2n+1}
    let mut alpha = vec![C64::new(1.0, 0.0); d];
    for j in 1..d {
        let n = (j / 2) as i32;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        alpha[j] = alpha1.powu(j as u32) * sign;
    }
    let mut worst = 0.0f64;
    // the recurrence itself, cyclically closed mod d
    for k in 0..d {
        let lhs = alpha[(k + 1) % d];
        let rhs = -alpha[k] * alpha[k] * alpha[(k + d - 1) % d].conj();
        worst = worst.max((lhs - rhs).norm());
    }
    // Σ_j α_j α*_{j+m} = 0 for m ≠ 0 (with α_j = α̃_j/√d)
    for m in 1..d {
        let s: C64 = (0..d).map(|j| alpha[j] * alpha[(j + m) % d].conj()).sum();
        worst = worst.max(s.norm() / d as f64);
    }
    worst
}

/// Scans unimodular α̃₁ on a fine phase grid (with local refinement) for a
/// solution of the recurrence plus orthogonality constraints. A solution
/// exists only for d = 2.
pub fn fourier_recurrence_check(d: usize) -> Result<RecurrenceVerdict> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let grid = 4096usize;
    let mut best_phase = 0.0f64;
    let mut best = f64::INFINITY;
    for i in 0..grid {
        let phase = std::f64::consts::TAU * i as f64 / grid as f64;
        let r = recurrence_residual(d, C64::from_polar(1.0, phase));
        if r < best {
            best = r;
            best_phase = phase;
        }
    }
    let mut width = std::f64::consts::TAU / grid as f64;
    for _ in 0..8 {
        for i in 0..65 {
            let phase = best_phase - width + 2.0 * width * i as f64 / 64.0;
            let r = recurrence_residual(d, C64::from_polar(1.0, phase));
            if r < best {
                best = r;
                best_phase = phase;
            }
        }
        width /= 16.0;
    }
    let solvable = if best < FEASIBILITY_TOL {
        true
    } else if best > INFEASIBILITY_FLOOR {
        false
    } else {
        return Err(Error::FeasibilityGap {
            residual: best,
            lo: FEASIBILITY_TOL,
            hi: INFEASIBILITY_FLOOR,
        });
    };
    Ok(RecurrenceVerdict {
        d,
        min_residual: best,
        best_alpha1: C64::from_polar(1.0, best_phase),
        solvable,
    })
}

/// Verdict on the phase-covariant unitarity system after resolving the
/// off-diagonal conditions with α_k = δ_{k,l}.
#[derive(Debug, Clone)]
pub struct PcSystemVerdict {
    pub d: usize,
    pub x: XParams,
    /// |x1² + d²·x3² − 1| with α concentrated on one level.
    pub support_residual: f64,
    /// |x1² + d²x3² + dx2² + 2x1x2 + 2x1x3 + 2d·x2x3 − 1| (cloning-state
    /// normalization in the phase-covariant parametrization).
    pub normalization_residual: f64,
    /// x3 ≈ 0: the non-cloning identity channel satisfies the system
    /// trivially and is excluded.
    pub degenerate: bool,
    pub solvable: bool,
}

pub fn pc_system_check(x: XParams, d: usize) -> Result<PcSystemVerdict> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let dd = d as f64;
    let support_residual = (x.x1 * x.x1 + dd * dd * x.x3 * x.x3 - 1.0).abs();
    let normalization_residual = (x.x1 * x.x1
        + dd * dd * x.x3 * x.x3
        + dd * x.x2 * x.x2
        + 2.0 * x.x1 * x.x2
        + 2.0 * x.x1 * x.x3
        + 2.0 * dd * x.x2 * x.x3
        - 1.0)
        .abs();
    let degenerate = x.x3.abs() < 1e-9;
    let solvable = !degenerate
        && support_residual < FEASIBILITY_TOL
        && normalization_residual < FEASIBILITY_TOL;
    Ok(PcSystemVerdict {
        d,
        x,
        support_residual,
        normalization_residual,
        degenerate,
        solvable,
    })
}

/// An optimal amplitude-matrix parametrization with its achieved mean
/// fidelity and the saturation check against d·r_max.
#[derive(Debug, Clone)]
pub struct OptimalAnsatz {
    pub family: CloneFamily,
    pub d: usize,
    pub x: XParams,
    /// Tr(S·R) at the optimum.
    pub fidelity: f64,
    pub d_r_max: f64,
    pub saturates: bool,
}

fn vars_to_x(family: CloneFamily, v: &[f64]) -> XParams {
    match family {
        CloneFamily::Universal => XParams {
            x1: v[0],
            x2: 0.0,
            x3: v[1],
        },
        _ => XParams {
            x1: v[0],
            x2: v[1],
            x3: v[2],
        },
    }
}

/// Tr(S(x)·R) for the (possibly unnormalized) family matrix at x.
fn ansatz_functional(family: CloneFamily, x: XParams, d: usize, r: &Op) -> Result<f64> {
    let a = family_matrix(family, x, d);
    let psi = raw_cloning_state(&a, d)?;
    let s = Op::new(vec![d, d, d], reduced_choi_matrix(&psi, d))?;
    Ok(trace_product(&s, r)?.re)
}

/// Symmetric matrix of a quadratic form recovered by polarization.
fn polarize(nvars: usize, q: impl Fn(&[f64]) -> f64) -> DMatrix<f64> {
    let mut m = DMatrix::<f64>::zeros(nvars, nvars);
    let basis = |i: usize| -> Vec<f64> {
        let mut e = vec![0.0; nvars];
        e[i] = 1.0;
        e
    };
    let diag: Vec<f64> = (0..nvars).map(|i| q(&basis(i))).collect();
    for i in 0..nvars {
        m[(i, i)] = diag[i];
        for j in i + 1..nvars {
            let mut e = basis(i);
            e[j] = 1.0;
            m[(i, j)] = (q(&e) - diag[i] - diag[j]) / 2.0;
            m[(j, i)] = m[(i, j)];
        }
    }
    m
}

/// Finds the XParams maximizing Tr(S·R) on the normalization surface.
/// Both the functional and the norm are quadratic forms in x, so the
/// optimum is the top generalized eigenvector of a 2×2 or 3×3 pencil —
/// exact up to roundoff, no iterative search involved.
pub fn optimal_xparams(family: CloneFamily, d: usize) -> Result<OptimalAnsatz> {
    let r = r_operator(family, d)?;
    let space = max_eigenspace(&r, DEGENERACY_TOL)?;
    let nvars = match family {
        CloneFamily::Universal => 2,
        _ => 3,
    };
    let m = polarize(nvars, |v| {
        ansatz_functional(family, vars_to_x(family, v), d, &r).expect("valid layout")
    });
    let n = polarize(nvars, |v| {
        family_matrix(family, vars_to_x(family, v), d).norm_squared()
    });
    let chol = nalgebra::Cholesky::new(n.clone())
        .ok_or_else(|| Error::InvalidParameters("normalization form not positive".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameters("singular Cholesky factor".into()))?;
    let reduced = &linv * &m * linv.transpose();
    let eig = reduced.symmetric_eigen();
    let mut top = 0;
    for i in 1..nvars {
        if eig.eigenvalues[i] > eig.eigenvalues[top] {
            top = i;
        }
    }
    let z = eig.eigenvectors.column(top).into_owned();
    let mut v: Vec<f64> = (linv.transpose() * z).iter().copied().collect();
    if v[0] < 0.0 {
        for c in v.iter_mut() {
            *c = -*c;
        }
    }
    let x = vars_to_x(family, &v);
    let fidelity = eig.eigenvalues[top];
    let d_r_max = d as f64 * space.r_max;
    Ok(OptimalAnsatz {
        family,
        d,
        x,
        fidelity,
        d_r_max,
        saturates: (fidelity - d_r_max).abs() < 1e-9,
    })
}
