//! Radial decomposition `φ = ρ h(j) φ₀` and the trace identity for `h†Fh`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::config::ModelError;
use crate::matrix::{
    hermitian_form, lie_element_graded, mode_epsilon, random_rational, random_su2j_params,
    su2j_graded, su2j_make, su2j_membership_defect, DoubletState, GaugeError, GaugeMatrix, Mat2, ModeMatrix, NumMatrix,
};
use crate::report::{DecisionPath, ReportBuilder, VerificationReport};
use crate::ring::{cr, cr_to_f64, rational_sqrt, ComplexRational, ContractionScalar, JMode, Reduced};
use crate::rng::seeded;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSplit {
    pub rho: f64,
    /// Present in the rational modes.
    pub rho_exact: Option<BigRational>,
    /// Unimodular, unitary, with first column `φ/ρ`.
    pub h: ModeMatrix,
}

/// Splits `(φ₁, jφ₂)` into its radius and an SU(2;j) element.
///
/// In the rational modes the radius must itself be rational.
pub fn radial_split(phi1: &ComplexRational, phi2: &ComplexRational, mode: JMode) -> Result<RadialSplit, ModelError> {
    let form = hermitian_form(&DoubletState::new(phi1.clone(), phi2.clone()), mode);
    match form {
        Reduced::Exact(v) => {
            let q = v.coeff(0).re;
            if q.is_zero() {
                return Err(GaugeError::DegenerateState.into());
            }
            let rho = rational_sqrt(&q)
                .ok_or_else(|| ModelError::Parameter(format!("radius sqrt({q}) is irrational; use a numeric mode")))?;
            let alpha = cr(&phi1.re / &rho, &phi1.im / &rho);
            let beta = cr(-&phi2.re / &rho, &phi2.im / &rho);
            let h = su2j_make(&alpha, &beta, mode)?;
            Ok(RadialSplit { rho: rho.to_f64().unwrap_or(f64::NAN), rho_exact: Some(rho), h })
        }
        Reduced::Float(z) => {
            let eps = match mode {
                JMode::Numeric(e) => e,
                _ => 1.0,
            };
            if z.re <= 1e-300 {
                return Err(GaugeError::DegenerateState.into());
            }
            let rho = z.re.sqrt();
            let alpha = cr_to_f64(phi1) / rho;
            let beta = -cr_to_f64(phi2).conj() / rho;
            let h = Mat2::new(alpha, beta * eps, -beta.conj() * eps, alpha.conj());
            Ok(RadialSplit { rho, rho_exact: None, h: ModeMatrix::Float(h) })
        }
    }
}

fn column_error(split: &RadialSplit, phi1: &ComplexRational, phi2: &ComplexRational, mode: JMode) -> f64 {
    match (&split.h, &split.rho_exact) {
        (ModeMatrix::Exact(h), Some(rho)) => {
            let r = ContractionScalar::constant(cr(rho.clone(), BigRational::zero()));
            let col = [&h.e[0][0] * &r, &h.e[1][0] * &r];
            let want = DoubletState::new(phi1.clone(), phi2.clone()).column();
            let d0 = (&col[0] - &want[0].reduce_exact(mode)).reduce_exact(mode);
            let d1 = (&col[1] - &want[1].reduce_exact(mode)).reduce_exact(mode);
            [d0, d1].iter().flat_map(|d| d.terms().map(|(_, c)| cr_to_f64(c).norm()).collect::<Vec<_>>()).fold(0.0, f64::max)
        }
        (m, _) => {
            let eps = match mode {
                JMode::Numeric(e) => e,
                _ => 1.0,
            };
            let h = m.to_float(mode);
            let want = [cr_to_f64(phi1), cr_to_f64(phi2) * eps];
            let got = [h.e[0][0] * split.rho, h.e[1][0] * split.rho];
            (got[0] - want[0]).norm().max((got[1] - want[1]).norm()) / split.rho.max(1.0)
        }
    }
}

/// Random doublets with rational radius: `ρ h φ₀` must give back `φ`, and `h`
/// must lie in SU(2;j).
pub fn verify_radial_split(mode: JMode, samples: usize, seed: u64) -> VerificationReport {
    let (path, tol) = if mode.is_exact() { (DecisionPath::ExactSymbolic, 0.0) } else { (DecisionPath::NumericOracle, 1e-12) };
    let mut b = ReportBuilder::new("radial_split", mode.label(), path, tol);
    let mut rng = seeded(seed, "radial_split");
    for i in 0..samples.max(1) {
        let c = random_rational(&mut rng, 9, 4).abs() + BigRational::from_integer(1.into());
        let (alpha, beta) = random_su2j_params(&mut rng, mode);
        let phi1 = cr(&alpha.re * &c, &alpha.im * &c);
        let phi2 = cr(-&beta.re * &c, &beta.im * &c);
        match radial_split(&phi1, &phi2, mode) {
            Ok(split) => {
                b.error(column_error(&split, &phi1, &phi2, mode), || format!("sample {i}: rho h phi0 != phi"));
                b.error(su2j_membership_defect(&split.h, mode), || format!("sample {i}: h not in SU(2;j)"));
            }
            Err(e) => {
                b.require(false, || format!("sample {i}: {e}"));
            }
        }
    }
    b.finish()
}

const PAIRS: usize = 6;

fn trace_sq_sum(f: &[GaugeMatrix; PAIRS]) -> ContractionScalar {
    // Σ_{μ,ν} tr(F_μν F_μν) = 2 Σ_{μ<ν} tr(F_μν²) by antisymmetry.
    let two = ContractionScalar::from(2);
    f.iter().fold(ContractionScalar::zero(), |acc, m| &acc + &(&m.mul(m).trace() * &two))
}

fn float_trace_sq_sum(f: &[NumMatrix; PAIRS]) -> Complex64 {
    f.iter().map(|m| m.mul(m).trace() * 2.0).sum()
}

/// `Σ tr(F²) = Σ tr((h†Fh)²)` for random `h ∈ SU(2;j)` and random
/// su(2;j)-valued antisymmetric `F_μν`. The rational modes compute with the
/// full grading and reduce at the end.
pub fn verify_trace_identity(mode: JMode, samples: usize, seed: u64) -> VerificationReport {
    let (path, tol) = if mode.is_exact() { (DecisionPath::ExactSymbolic, 0.0) } else { (DecisionPath::NumericOracle, 1e-10) };
    let mut b = ReportBuilder::new("trace_identity", mode.label(), path, tol);
    let mut rng = seeded(seed, "trace_identity");
    if let JMode::Numeric(e) = mode {
        if mode_epsilon(mode).is_none() {
            b.note(format!("epsilon {e} has no exact rational form"));
        }
    }
    for i in 0..samples.max(1) {
        let (alpha, beta) = random_su2j_params(&mut rng, mode);
        let h = su2j_graded(&alpha, &beta);
        let hd = h.adjoint();
        let f: [GaugeMatrix; PAIRS] = std::array::from_fn(|_| {
            let a: [BigRational; 3] = std::array::from_fn(|_| random_rational(&mut rng, 9, 5));
            lie_element_graded([&a[0], &a[1], &a[2]])
        });
        match mode {
            JMode::Numeric(eps) => {
                let lhs = float_trace_sq_sum(&f.clone().map(|m| m.eval(eps)));
                let hf = h.eval(eps);
                let hdf = hd.eval(eps);
                let rhs = float_trace_sq_sum(&f.map(|m| hdf.mul(&m.eval(eps)).mul(&hf)));
                let err = (lhs - rhs).norm() / lhs.norm().max(1.0);
                b.error(err, || format!("sample {i}: tr F^2 = {lhs}, tr (h^dagger F h)^2 = {rhs}"));
            }
            _ => {
                let lhs = trace_sq_sum(&f).reduce_exact(mode);
                let w: [GaugeMatrix; PAIRS] = std::array::from_fn(|k| hd.mul(&f[k]).mul(&h));
                let rhs = trace_sq_sum(&w).reduce_exact(mode);
                let d = (&lhs - &rhs).terms().map(|(_, c)| cr_to_f64(c).norm()).fold(0.0, f64::max);
                b.error(d, || format!("sample {i}: tr F^2 = {lhs}, tr (h^dagger F h)^2 = {rhs}"));
            }
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{cr_int, rat};

    #[test]
    fn split_examples() {
        let s = radial_split(&cr_int(2, 0), &cr_int(0, 0), JMode::One).unwrap();
        assert_eq!(s.rho_exact, Some(rat(2, 1)));
        assert_eq!(s.h, ModeMatrix::Exact(GaugeMatrix::identity()));

        let s = radial_split(&cr_int(3, 0), &cr_int(4, 0), JMode::One).unwrap();
        assert_eq!(s.rho_exact, Some(rat(5, 1)));
        let h = s.h.as_exact().unwrap().clone();
        assert_eq!((h.e[0][0].coeff(0), h.e[1][0].coeff(0)), (cr(rat(3, 5), rat(0, 1)), cr(rat(4, 5), rat(0, 1))));

        let s = radial_split(&cr_int(3, 0), &cr_int(4, 0), JMode::Nilpotent).unwrap();
        assert_eq!(s.rho_exact, Some(rat(3, 1)));

        let err = radial_split(&cr_int(0, 0), &cr_int(4, 0), JMode::Nilpotent).unwrap_err();
        assert_eq!(err, ModelError::Gauge(GaugeError::DegenerateState));
    }

    #[test]
    fn split_round_trips() {
        for mode in [JMode::One, JMode::Nilpotent, JMode::Numeric(0.01)] {
            let r = verify_radial_split(mode, 50, 7);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn trace_identity_all_modes() {
        for mode in [JMode::One, JMode::Nilpotent, JMode::Numeric(0.01)] {
            let r = verify_trace_identity(mode, 30, 11);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn trace_identity_catches_non_unitary_h() {
        let h = GaugeMatrix::from_scalars(cr_int(2, 0), cr_int(0, 0), cr_int(0, 0), cr_int(1, 0));
        let f: [GaugeMatrix; PAIRS] = std::array::from_fn(|_| lie_element_graded([&rat(1, 1), &rat(0, 1), &rat(1, 1)]));
        let w = f.clone().map(|m| h.adjoint().mul(&m).mul(&h));
        assert_ne!(trace_sq_sum(&f).reduce_exact(JMode::One), trace_sq_sum(&w).reduce_exact(JMode::One));
    }
}
