//! Gauge potentials, field strengths and the two pieces of the Lagrangian.

use crate::algebra::{parse, AlgebraError, Expression, Field, Params, Term};
use crate::matrix::{generator_graded, GaugeMatrix};
use crate::ring::{cr_int, ContractionScalar};

/// Builds a fixed expression from its text form.
pub(crate) fn ex(text: &str) -> Expression {
    parse(text).unwrap_or_else(|e| panic!("built-in expression {text:?}: {e}"))
}

fn from_scalar(s: &ContractionScalar) -> Expression {
    let terms = s.terms().map(|(d, c)| Term { jdeg: d, ..Term::constant(c.clone()) });
    Expression::from_terms(terms).expect("scalar terms have no indices")
}

/// 2×2 matrix of symbolic expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprMatrix {
    pub e: [[Expression; 2]; 2],
}

impl ExprMatrix {
    pub fn new(a: Expression, b: Expression, c: Expression, d: Expression) -> Self {
        Self { e: [[a, b], [c, d]] }
    }

    pub fn zero() -> Self {
        Self::new(Expression::zero(), Expression::zero(), Expression::zero(), Expression::zero())
    }

    pub fn identity() -> Self {
        Self::new(Expression::one(), Expression::zero(), Expression::zero(), Expression::one())
    }

    pub fn from_gauge(m: &GaugeMatrix) -> Self {
        Self { e: std::array::from_fn(|r| std::array::from_fn(|c| from_scalar(&m.e[r][c]))) }
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&Expression, &Expression) -> Expression) -> Self {
        Self { e: std::array::from_fn(|r| std::array::from_fn(|c| f(&self.e[r][c], &rhs.e[r][c]))) }
    }

    fn try_map(&self, f: impl Fn(&Expression) -> Result<Expression, AlgebraError>) -> Result<Self, AlgebraError> {
        let [[a, b], [c, d]] = &self.e;
        Ok(Self::new(f(a)?, f(b)?, f(c)?, f(d)?))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, Expression::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, Expression::sub)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] = self.e[r][0].mul(&rhs.e[0][c])?.add(&self.e[r][1].mul(&rhs.e[1][c])?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Expression) -> Result<Self, AlgebraError> {
        self.try_map(|x| s.mul(x))
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(rhs)?.sub(&rhs.mul(self)?))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let [[a, b], [c, d]] = &self.e;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn derive(&self, idx: &str) -> Result<Self, AlgebraError> {
        self.try_map(|x| x.derive(idx))
    }

    pub fn trace(&self) -> Expression {
        self.e[0][0].add(&self.e[1][1])
    }

    pub fn apply(&self, v: &[Expression; 2]) -> Result<[Expression; 2], AlgebraError> {
        Ok([
            self.e[0][0].mul(&v[0])?.add(&self.e[0][1].mul(&v[1])?),
            self.e[1][0].mul(&v[0])?.add(&self.e[1][1].mul(&v[1])?),
        ])
    }
}

/// `g Σ T_k(j) X^k[idx]` for the vector fields `x = [X1, X2, X3]`.
pub fn gauge_potential(idx: &str, x: [Field; 3]) -> ExprMatrix {
    let mut out = ExprMatrix::zero();
    for (k, f) in (1u8..=3).zip(x) {
        let t = ExprMatrix::from_gauge(&generator_graded(k).expect("generator index in range"));
        let comp = Expression::field(f, &[idx]).expect("vector field").scale_params(Params::g(1));
        out = out.add(&t.scale(&comp).expect("no shared indices"));
    }
    out
}

/// Components `X^k` of a matrix `g(i/2)[[X3, j(X1 − iX2)], [j(X1 + iX2), −X3]]`.
pub fn su2_components(m: &ExprMatrix) -> Result<[Expression; 3], AlgebraError> {
    let ginv = Params::g(-1);
    let x3 = m.e[0][0].scale(&cr_int(0, -2)).scale_params(ginv);
    let sum = m.e[0][1].add(&m.e[1][0]).div_j()?;
    let diff = m.e[0][1].sub(&m.e[1][0]).div_j()?;
    let x1 = sum.scale(&cr_int(0, -1)).scale_params(ginv);
    let x2 = diff.scale_params(ginv);
    if !m.e[1][1].add(&m.e[0][0]).is_zero() {
        return Err(AlgebraError::Unsupported("matrix is not traceless".into()));
    }
    Ok([x1, x2, x3])
}

/// Sign of the commutator term in the field strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearSign {
    /// `F = ∂A − ∂A + [A, A]`, matching `D = ∂ + A`.
    Consistent,
    /// The opposite sign, `F¹ = 𝓕¹ + g(A²A³ − A³A²)` and cyclic.
    Flipped,
}

/// Field strengths with free indices `mu`, `nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct StressTensors {
    pub f: [Expression; 3],
    pub b: Expression,
}

pub fn build_stress_tensors_with(sign: NonlinearSign) -> StressTensors {
    const A: [Field; 3] = [Field::A1, Field::A2, Field::A3];
    let (a_mu, a_nu) = (gauge_potential("mu", A), gauge_potential("nu", A));
    let curl = a_nu.derive("mu").and_then(|x| Ok(x.sub(&a_mu.derive("nu")?))).expect("curl");
    let comm = a_mu.commutator(&a_nu).expect("commutator");
    let f = match sign {
        NonlinearSign::Consistent => curl.add(&comm),
        NonlinearSign::Flipped => curl.sub(&comm),
    };
    StressTensors { f: su2_components(&f).expect("su(2;j)-valued"), b: ex("d[mu]B[nu] - d[nu]B[mu]") }
}

pub fn build_stress_tensors() -> StressTensors {
    build_stress_tensors_with(NonlinearSign::Consistent)
}

fn square(x: &Expression) -> Expression {
    x.mul(x).expect("free indices pair up")
}

/// `−¼[j²(F¹)² + j²(F²)² + (F³)²] − ¼(B)²`.
pub fn build_la_with(sign: NonlinearSign) -> Expression {
    let t = build_stress_tensors_with(sign);
    let nonabelian = square(&t.f[0]).add(&square(&t.f[1])).mul_j(2).add(&square(&t.f[2]));
    nonabelian.add(&square(&t.b)).scale_rational(-1, 4)
}

pub fn build_la() -> Expression {
    build_la_with(NonlinearSign::Consistent)
}

/// `tr(F²)/(2g²) + tr(B̂²)/(2g'²)` straight from the matrices.
pub fn build_la_from_trace() -> Expression {
    const A: [Field; 3] = [Field::A1, Field::A2, Field::A3];
    let (a_mu, a_nu) = (gauge_potential("mu", A), gauge_potential("nu", A));
    let f = a_nu.derive("mu").unwrap().sub(&a_mu.derive("nu").unwrap()).add(&a_mu.commutator(&a_nu).unwrap());
    let ff = f.mul(&f).unwrap().trace();
    let b = ex("1/2*i*gp*(d[mu]B[nu] - d[nu]B[mu])");
    let bb = square(&b).scale_rational(2, 1);
    ff.scale_params(Params::g(-2)).add(&bb.scale_params(Params::gp(-2))).scale_rational(1, 2)
}

/// `(D_idx φ₁, D_idx(jφ₂))` with `D = ∂ + g T_k A^k + g' Y B`.
pub fn covariant_derivative(idx: &str) -> [Expression; 2] {
    let phi = [ex("phi1"), ex("j*phi2")];
    let a = gauge_potential(idx, [Field::A1, Field::A2, Field::A3]);
    let y = ex(&format!("1/2*i*gp*B[{idx}]"));
    let ay = a.add(&ExprMatrix::identity().scale(&y).unwrap());
    let moved = ay.apply(&phi).expect("no shared indices");
    [phi[0].derive(idx).unwrap().add(&moved[0]), phi[1].derive(idx).unwrap().add(&moved[1])]
}

fn half_norm(v: &[Expression; 2]) -> Expression {
    v.iter()
        .map(|x| x.conj().mul(x).expect("free indices pair up"))
        .fold(Expression::zero(), |acc, t| acc.add(&t))
        .scale_rational(1, 2)
}

/// `½ (Dφ)†(Dφ)`.
pub fn build_lphi() -> Expression {
    half_norm(&covariant_derivative("mu"))
}

/// `½ |∂ρ φ₀ + ρ (W + B̂τ₃) φ₀|²` with `W = (i/2)g[j(W¹τ₁ + W²τ₂) + W³τ₃]`.
pub fn build_matter_radial() -> Expression {
    let w = gauge_potential("mu", [Field::W1, Field::W2, Field::W3]);
    let bhat = ex("1/2*i*gp*B[mu]");
    let tau3 = ExprMatrix::new(Expression::one(), Expression::zero(), Expression::zero(), Expression::one().neg());
    let m = w.add(&tau3.scale(&bhat).unwrap());
    let rho = ex("rho");
    let moved = m.apply(&[rho.clone(), Expression::zero()]).unwrap();
    let v = [ex("d[mu]rho").add(&moved[0]), moved[1].clone()];
    half_norm(&v)
}

/// The radial matter Lagrangian written in the physical fields.
pub fn matter_radial_display() -> Expression {
    ex("1/2*d[mu]rho*d[mu]rho + 1/8*s^2*rho^2*Z[mu]*Z[mu] + 1/4*j^2*g^2*rho^2*W+[mu]*W-[mu]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::JMode;

    #[test]
    fn stress_tensor_components() {
        let t = build_stress_tensors();
        assert_eq!(t.f[2].reduce_j(JMode::Nilpotent), ex("d[mu]A3[nu] - d[nu]A3[mu]"));
        assert_eq!(t.f[2].filter(|t| t.jdeg == 2), ex("-j^2*g*(A1[mu]*A2[nu] - A2[mu]*A1[nu])"));
        let lin = |e: &Expression| e.filter(|t| t.factors.len() == 1);
        assert_eq!(lin(&t.f[0]), ex("d[mu]A1[nu] - d[nu]A1[mu]"));
        assert_eq!(t.f[0].sub(&lin(&t.f[0])), ex("-g*(A2[mu]*A3[nu] - A3[mu]*A2[nu])"));
        assert_eq!(t.f[1].sub(&lin(&t.f[1])), ex("-g*(A3[mu]*A1[nu] - A1[mu]*A3[nu])"));
        let flipped = build_stress_tensors_with(NonlinearSign::Flipped);
        assert_eq!(flipped.f[0].sub(&lin(&flipped.f[0])), ex("g*(A2[mu]*A3[nu] - A3[mu]*A2[nu])"));
        assert_eq!(flipped.f[2].filter(|t| t.jdeg == 2), ex("j^2*g*(A1[mu]*A2[nu] - A2[mu]*A1[nu])"));
        let swapped = t.b.rename_free(&[("mu", "nu"), ("nu", "mu")]).unwrap();
        assert_eq!(swapped, t.b.neg());
    }

    #[test]
    fn gauge_lagrangian_grades_and_trace_form() {
        let la = build_la();
        assert!(la.j_grades().is_subset(&[0, 2, 4].into()));
        assert_eq!(la.j_grades(), [0, 2, 4].into());
        assert_eq!(la, build_la_from_trace());
        let grade0 = la.j_decompose()[&0].clone();
        let quad = ex("-1/4*(d[mu]A3[nu] - d[nu]A3[mu])*(d[mu]A3[nu] - d[nu]A3[mu]) - 1/4*(d[mu]B[nu] - d[nu]B[mu])*(d[mu]B[nu] - d[nu]B[mu])");
        assert_eq!(grade0, quad);
    }

    #[test]
    fn matter_lagrangian_components() {
        let d = covariant_derivative("mu");
        let j2 = d[0].filter(|t| t.jdeg == 2);
        assert_eq!(j2, ex("j^2*1/2*i*g*(A1[mu] - i*A2[mu])*phi2"));
        assert_eq!(d[1].div_j().unwrap(), ex("d[mu]phi2 - 1/2*i*(g*A3[mu] - gp*B[mu])*phi2 + 1/2*i*g*(A1[mu] + i*A2[mu])*phi1"));
        let free = build_lphi().filter(|t| t.params.is_one());
        assert_eq!(free, ex("1/2*d[mu]conj(phi1)*d[mu]phi1 + 1/2*j^2*d[mu]conj(phi2)*d[mu]phi2"));
    }

    #[test]
    fn matter_radial_has_expected_shape() {
        let m = build_matter_radial();
        assert_eq!(m.filter(|t| t.factors.iter().any(|f| !f.derivs.is_empty())), ex("1/2*d[mu]rho*d[mu]rho"));
        assert_eq!(m.j_grades(), [0, 2].into());
        assert_eq!(m.j_decompose()[&2], ex("1/8*g^2*rho^2*(W1[mu]*W1[mu] + W2[mu]*W2[mu])"));
    }
}
