//! Feasibility of economical (ancilla-free) cloning: searching the maximal
//! eigenspace of R for trace-preserving rank-one maps, the qubit
//! Niu-Griffiths unitary, and the suboptimal economical phase-covariant
//! cloner that exists in every dimension.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::maps::Isometry;
use crate::optim::nelder_mead;
use crate::qudit::{symmetric_ket, Ket, Op, C64};

/// Residual below which a coefficient vector counts as trace-preserving.
pub const FEASIBILITY_TOL: f64 = 1e-8;
/// Residual above which the search verdict is a confident "infeasible".
pub const INFEASIBILITY_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Feasible => "feasible",
            Verdict::Infeasible => "infeasible",
        })
    }
}

/// Outcome of the trace-preservation search over a maximal eigenspace.
#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    /// Smallest trace-preservation residual found over all restarts.
    pub residual: f64,
    /// Coefficients achieving it, normalized to ‖c‖² = d.
    pub best_coeffs: Vec<C64>,
    pub verdict: Verdict,
    pub restarts: usize,
    /// Set when a closed-form argument pins the answer independently of
    /// the numerical search.
    pub analytic_note: Option<String>,
}

fn check_basis(basis: &[Ket], d: usize) -> Result<()> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    for v in basis {
        if v.dims() != [d, d, d] {
            return Err(Error::DimensionMismatch(format!(
                "eigenbasis ket has dims {:?}, expected [{d}, {d}, {d}]",
                v.dims()
            )));
        }
    }
    Ok(())
}

/// ‖Tr_BE |S⟩⟨S| − 𝟙‖_F for |S⟩ = Σ_k c_k v_k on (in, B, E).
pub fn trace_residual(basis: &[Ket], c: &[C64], d: usize) -> Result<f64> {
    check_basis(basis, d)?;
    if c.len() != basis.len() {
        return Err(Error::LengthMismatch {
            expected: basis.len(),
            got: c.len(),
        });
    }
    let grams = reduced_grams(basis, d);
    Ok(residual_from_grams(&grams, c, d))
}

/// Partial traces A_{kl} = Tr_BE |v_k⟩⟨v_l| as d×d matrices:
/// A_{kl}[a, a'] = Σ_{b,e} v_k[(a,b,e)] · conj(v_l[(a',b,e)]).
fn reduced_grams(basis: &[Ket], d: usize) -> Vec<Vec<DMatrix<C64>>> {
    let m = basis.len();
    let mut grams = vec![vec![DMatrix::<C64>::zeros(d, d); m]; m];
    for k in 0..m {
        for l in 0..m {
            let (vk, vl) = (basis[k].amps(), basis[l].amps());
            let a_kl = &mut grams[k][l];
            for a in 0..d {
                for ap in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for be in 0..d * d {
                        acc += vk[a * d * d + be] * vl[ap * d * d + be].conj();
                    }
                    a_kl[(a, ap)] = acc;
                }
            }
        }
    }
    grams
}

fn residual_from_grams(grams: &[Vec<DMatrix<C64>>], c: &[C64], d: usize) -> f64 {
    let mut acc = DMatrix::<C64>::identity(d, d) * C64::new(-1.0, 0.0);
    for (k, row) in grams.iter().enumerate() {
        for (l, a_kl) in row.iter().enumerate() {
            let w = c[k] * c[l].conj();
            acc += a_kl * w;
        }
    }
    acc.norm()
}

/// Maps 2m unconstrained reals onto the coefficient sphere ‖c‖² = d.
fn sphere_coeffs(u: &[f64], d: usize) -> Option<Vec<C64>> {
    let m = u.len() / 2;
    let norm2: f64 = u.iter().map(|x| x * x).sum();
    if norm2 < 1e-24 {
        return None;
    }
    let scale = (d as f64 / norm2).sqrt();
    Some(
        (0..m)
            .map(|j| C64::new(u[2 * j] * scale, u[2 * j + 1] * scale))
            .collect(),
    )
}

/// Minimizes the trace-preservation residual over |S⟩ = Σ c_k v_k with
/// ‖c‖² = d, using seeded multistart simplex descent. Residuals between
/// `FEASIBILITY_TOL` and `INFEASIBILITY_FLOOR` are inconclusive and error.
pub fn feasibility_search(
    basis: &[Ket],
    d: usize,
    restarts: usize,
    seed: u64,
) -> Result<FeasibilityReport> {
    check_basis(basis, d)?;
    if restarts == 0 {
        return Err(Error::InvalidParameters("need at least one restart".into()));
    }
    let grams = reduced_grams(basis, d);
    let m = basis.len();
    let objective = |u: &[f64]| -> f64 {
        match sphere_coeffs(u, d) {
            Some(c) => residual_from_grams(&grams, &c, d),
            None => f64::INFINITY,
        }
    };

    let mut best_residual = f64::INFINITY;
    let mut best_coeffs: Vec<C64> = Vec::new();
    for i in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let x0: Vec<f64> = (0..2 * m).map(|_| rng.sample(StandardNormal)).collect();
        let min = nelder_mead(objective, &x0, 0.4, 1e-12, 1e-14, 4000);
        if min.value < best_residual {
            if let Some(c) = sphere_coeffs(&min.x, d) {
                best_residual = min.value;
                best_coeffs = c;
            }
        }
    }

    let verdict = if best_residual < FEASIBILITY_TOL {
        Verdict::Feasible
    } else if best_residual > INFEASIBILITY_FLOOR {
        Verdict::Infeasible
    } else {
        return Err(Error::FeasibilityGap {
            residual: best_residual,
            lo: FEASIBILITY_TOL,
            hi: INFEASIBILITY_FLOOR,
        });
    };
    Ok(FeasibilityReport {
        residual: best_residual,
        best_coeffs,
        verdict,
        restarts,
        analytic_note: None,
    })
}

/// Exact trace-preservation residual of any ‖c‖² = d combination of the
/// universal maximal eigenstates: √(d(d−1))/(d+1), independent of c.
pub fn universal_sphere_residual(d: usize) -> f64 {
    let dd = d as f64;
    (dd * (dd - 1.0)).sqrt() / (dd + 1.0)
}

/// γ = β² + 4αβ/√d + 2α²/d: the coefficient of the diagonal obstruction in
/// the reduced phase-covariant map. Economical realization requires γ = 0.
pub fn gamma_pc(d: usize, alpha: f64, beta: f64) -> f64 {
    let dd = d as f64;
    beta * beta + 4.0 * alpha * beta / dd.sqrt() + 2.0 * alpha * alpha / dd
}

/// The Niu-Griffiths two-qubit unitary on (B, E):
/// |00⟩ ↦ |00⟩, |10⟩ ↦ cos α |10⟩ + sin α |01⟩, completed orthogonally.
pub fn niu_griffiths(alpha: f64) -> Op {
    let (c, s) = (alpha.cos(), alpha.sin());
    let mut u = Op::zeros(vec![2, 2]);
    let m = u.mat_mut();
    // basis order |be⟩: 00, 01, 10, 11
    m[(0, 0)] = C64::new(1.0, 0.0);
    m[(2, 2)] = C64::new(c, 0.0);
    m[(1, 2)] = C64::new(s, 0.0);
    m[(1, 1)] = C64::new(c, 0.0);
    m[(2, 1)] = C64::new(-s, 0.0);
    m[(3, 3)] = C64::new(1.0, 0.0);
    u
}

/// Cloning isometry of the Niu-Griffiths unitary with the blank copy
/// prepared in |0⟩_E.
pub fn niu_griffiths_isometry(alpha: f64) -> Result<Isometry> {
    let blank = crate::qudit::basis_ket(2, 0)?;
    Isometry::from_unitary(&niu_griffiths(alpha), &blank)
}

/// Equatorial-state fidelities ((1+cos α)/2, (1+sin α)/2) of the two
/// Niu-Griffiths clones.
pub fn niu_griffiths_fidelities(alpha: f64) -> (f64, f64) {
    ((1.0 + alpha.cos()) / 2.0, (1.0 + alpha.sin()) / 2.0)
}

/// The suboptimal economical phase-covariant cloner |k⟩ ↦ |kl⁺⟩ for a
/// fixed target level l, as an isometry into the symmetric subspace.
pub fn suboptimal_economical(d: usize, l: usize) -> Result<Isometry> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if l >= d {
        return Err(Error::IndexOutOfRange { index: l, dim: d });
    }
    let mut mat = DMatrix::<C64>::zeros(d * d, d);
    for k in 0..d {
        let col = symmetric_ket(d, k, l)?;
        mat.set_column(k, col.amps());
    }
    Isometry::new(d, mat)
}

/// Fidelity of the phase-twisted cloner |k⟩ ↦ e^{iθ_k}|kl⁺⟩ on uniform
/// superpositions: (1/(2d²))(d−1+|Σ_{k≠l} e^{iθ_k} + √2 e^{iθ_l}|²).
pub fn theta_fidelity(d: usize, thetas: &[f64], l: usize) -> Result<f64> {
    if thetas.len() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: thetas.len(),
        });
    }
    if l >= d {
        return Err(Error::IndexOutOfRange { index: l, dim: d });
    }
    let mut s = C64::new(0.0, 0.0);
    for (k, &t) in thetas.iter().enumerate() {
        let w = if k == l { 2.0f64.sqrt() } else { 1.0 };
        s += C64::from_polar(w, t);
    }
    let dd = d as f64;
    Ok((dd - 1.0 + s.norm_sqr()) / (2.0 * dd * dd))
}

/// Fidelity of the optimal suboptimal economical cloner (all θ_k = 0):
/// (1/(2d²))[d−1+(d−1+√2)²].
pub fn suboptimal_fidelity(d: usize) -> f64 {
    let dd = d as f64;
    (dd - 1.0 + (dd - 1.0 + 2.0f64.sqrt()).powi(2)) / (2.0 * dd * dd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures_of_merit::{
        conjectured_states, max_eigenspace, r_phase_covariant, CloneFamily, DEGENERACY_TOL,
    };
    use crate::maps::{choi_from_isometry, clone_fidelities, is_trace_preserving, mean_fidelity};
    use crate::qudit::basis_ket;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn universal_residual_is_constant_on_sphere() {
        for d in 2..=4usize {
            let basis = conjectured_states(CloneFamily::Universal, d).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..5 {
                let u: Vec<f64> = (0..2 * d).map(|_| rng.sample(StandardNormal)).collect();
                let c = sphere_coeffs(&u, d).unwrap();
                let r = trace_residual(&basis, &c, d).unwrap();
                assert_abs_diff_eq!(r, universal_sphere_residual(d), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn universal_search_confirms_nogo() {
        for d in 2..=3usize {
            let basis = conjectured_states(CloneFamily::Universal, d).unwrap();
            let report = feasibility_search(&basis, d, 10, 0).unwrap();
            assert_eq!(report.verdict, Verdict::Infeasible);
            assert_abs_diff_eq!(
                report.residual,
                universal_sphere_residual(d),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn pc_search_feasible_only_at_d2() {
        let basis = conjectured_states(CloneFamily::PhaseCovariant, 2).unwrap();
        let report = feasibility_search(&basis, 2, 20, 0).unwrap();
        assert_eq!(report.verdict, Verdict::Feasible);
        // best coefficients concentrate on a single eigenstate, |c_l| = √d
        let mags: Vec<f64> = report.best_coeffs.iter().map(|c| c.norm()).collect();
        let max = mags.iter().cloned().fold(0.0f64, f64::max);
        assert_abs_diff_eq!(max, 2.0f64.sqrt(), epsilon = 1e-5);

        for d in 3..=4usize {
            let basis = conjectured_states(CloneFamily::PhaseCovariant, d).unwrap();
            let report = feasibility_search(&basis, d, 20, 0).unwrap();
            assert_eq!(report.verdict, Verdict::Infeasible, "d={d}");
        }
    }

    #[test]
    fn gamma_vanishes_only_for_d2_eigenstate_ratio() {
        use crate::figures_of_merit::alpha_beta_pc;
        let (a2, b2) = alpha_beta_pc(2);
        assert_abs_diff_eq!(gamma_pc(2, a2, b2), 0.0, epsilon = 1e-12);
        for d in 3..=7usize {
            let (a, b) = alpha_beta_pc(d);
            assert!(gamma_pc(d, a, b).abs() > 1e-3, "d={d}");
        }
    }

    #[test]
    fn single_spike_residual_matches_gamma() {
        // residual of c = √d e_l is |γ|·√(norm factors); for d=2 it vanishes
        let basis = conjectured_states(CloneFamily::PhaseCovariant, 2).unwrap();
        let c = vec![C64::new(2.0f64.sqrt(), 0.0), C64::new(0.0, 0.0)];
        let r = trace_residual(&basis, &c, 2).unwrap();
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn niu_griffiths_is_unitary_and_matches_definition() {
        let u = niu_griffiths(0.7);
        let dev = u
            .adjoint()
            .compose(&u)
            .unwrap()
            .sub(&Op::identity(vec![2, 2]))
            .unwrap()
            .frobenius_norm();
        assert!(dev < 1e-14);
        assert_abs_diff_eq!(u.mat()[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.mat()[(2, 2)].re, 0.7f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(u.mat()[(1, 2)].re, 0.7f64.sin(), epsilon = 1e-15);
    }

    #[test]
    fn niu_griffiths_equatorial_fidelities() {
        for &alpha in &[0.3, FRAC_PI_4, 1.1] {
            let v = niu_griffiths_isometry(alpha).unwrap();
            let s = choi_from_isometry(&v).unwrap();
            let (tp, _) = is_trace_preserving(&s, 1e-10);
            assert!(tp);
            for &phi in &[0.0, 0.9, 2.5] {
                let mut psi = Ket::zero(vec![2]);
                psi.amps_mut()[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                psi.amps_mut()[1] =
                    C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phi);
                let (fb, fe) = clone_fidelities(&s, &psi).unwrap();
                let (wb, we) = niu_griffiths_fidelities(alpha);
                assert_abs_diff_eq!(fb, wb, epsilon = 1e-12);
                assert_abs_diff_eq!(fe, we, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_ng_saturates_pc_bound() {
        // α = π/4 reaches the optimal phase-covariant fidelity (2+√2)/4
        let v = niu_griffiths_isometry(FRAC_PI_4).unwrap();
        let s = choi_from_isometry(&v).unwrap();
        let r = r_phase_covariant(2).unwrap();
        let f = mean_fidelity(&s, &r).unwrap();
        assert_abs_diff_eq!(f, (2.0 + 2.0f64.sqrt()) / 4.0, epsilon = 1e-12);
        let space = max_eigenspace(&r, DEGENERACY_TOL).unwrap();
        assert_abs_diff_eq!(f, 2.0 * space.r_max, epsilon = 1e-12);
    }

    #[test]
    fn ng_completion_choice_does_not_change_fidelities() {
        // flipping the sign of the completed column leaves the channel's
        // action on the |·,0⟩ sector untouched
        let alpha = 0.6;
        let mut u2 = niu_griffiths(alpha);
        let d = u2.mat()[(1, 1)];
        u2.mat_mut()[(1, 1)] = -d;
        let d = u2.mat()[(2, 1)];
        u2.mat_mut()[(2, 1)] = -d;
        let blank = basis_ket(2, 0).unwrap();
        let v1 = niu_griffiths_isometry(alpha).unwrap();
        let v2 = Isometry::from_unitary(&u2, &blank).unwrap();
        let s1 = choi_from_isometry(&v1).unwrap();
        let s2 = choi_from_isometry(&v2).unwrap();
        let diff = s1.op().sub(s2.op()).unwrap().frobenius_norm();
        assert!(diff < 1e-14);
    }

    #[test]
    fn suboptimal_cloner_is_trace_preserving_isometry() {
        for d in 2..=4usize {
            for l in 0..d {
                let v = suboptimal_economical(d, l).unwrap();
                assert!(v.isometry_deviation() < 1e-14);
                let s = choi_from_isometry(&v).unwrap();
                let (tp, res) = is_trace_preserving(&s, 1e-10);
                assert!(tp, "d={d} l={l} residual {res}");
            }
        }
    }

    #[test]
    fn suboptimal_fidelity_matches_channel_average() {
        // fidelity on uniform superpositions equals the closed form, and the
        // zero-phase point maximizes the θ-fidelity
        for d in 2..=4usize {
            let dd = d as f64;
            let v = suboptimal_economical(d, 0).unwrap();
            let s = choi_from_isometry(&v).unwrap();
            let mut psi = Ket::zero(vec![d]);
            for k in 0..d {
                psi.amps_mut()[k] = C64::new(1.0 / dd.sqrt(), 0.0);
            }
            let (fb, fe) = clone_fidelities(&s, &psi).unwrap();
            let want = suboptimal_fidelity(d);
            assert_abs_diff_eq!((fb + fe) / 2.0, want, epsilon = 1e-12);
            // clone-swap symmetry
            assert_abs_diff_eq!(fb, fe, epsilon = 1e-12);

            let zeros = vec![0.0; d];
            assert_abs_diff_eq!(theta_fidelity(d, &zeros, 0).unwrap(), want, epsilon = 1e-14);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..50 {
                let thetas: Vec<f64> = (0..d)
                    .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                    .collect();
                assert!(theta_fidelity(d, &thetas, 0).unwrap() <= want + 1e-12);
            }
        }
    }

    #[test]
    fn suboptimal_cloner_phase_covariant() {
        // fidelity of uniform superpositions is independent of their phases
        let d = 3;
        let v = suboptimal_economical(d, 1).unwrap();
        let s = choi_from_isometry(&v).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut values = Vec::new();
        for _ in 0..10 {
            let mut psi = Ket::zero(vec![d]);
            for k in 0..d {
                let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                psi.amps_mut()[k] = C64::from_polar(1.0 / (d as f64).sqrt(), phi);
            }
            let (fb, fe) = clone_fidelities(&s, &psi).unwrap();
            values.push((fb + fe) / 2.0);
        }
        for w in values.windows(2) {
            assert_abs_diff_eq!(w[0], w[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn gap_residuals_error() {
        // a basis engineered to land between the two thresholds must refuse
        // a verdict rather than guess
        let r = trace_residual(
            &conjectured_states(CloneFamily::Universal, 2).unwrap(),
            &[C64::new(2.0f64.sqrt(), 0.0), C64::new(0.0, 0.0)],
            2,
        )
        .unwrap();
        assert!(r > INFEASIBILITY_FLOOR); // sanity: universal is clearly infeasible
        let err = feasibility_search(&[], 2, 5, 0);
        assert!(matches!(err, Err(Error::EmptyBasis)));
    }
}
