//! 2×2 matrices realizing SU(2;j), its Lie algebra su(2;j), U(1) and U(1)_em.
//!
//! Matrices are built graded (entries are polynomials in `j`) and reduced in a
//! [`JMode`] when a concrete value of the contraction parameter is needed.
//! Reduction is a ring homomorphism in every mode, so products may be formed
//! before or after reducing.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::report::{DecisionPath, ReportBuilder, VerificationReport};
use crate::ring::{
    cr, cr_int, cr_norm_sqr, cr_to_f64, parse_rational, rat, ComplexRational, ContractionScalar, JMode, Reduced,
    RingError,
};
use crate::rng::seeded;

/// Tolerance for matrix identities evaluated in floating point.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaugeError {
    #[error("determinant condition fails: |alpha|^2 + j^2|beta|^2 reduces to {0}, not 1")]
    NotUnimodular(String),
    #[error("generator index must be 1, 2 or 3, got {0}")]
    BadGenerator(u8),
    #[error("degenerate doublet: hermitian form reduces to zero")]
    DegenerateState,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Ring operations needed for 2×2 matrix arithmetic.
pub trait Entry: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn conj(&self) -> Self;
}

impl Entry for ContractionScalar {
    fn zero() -> Self {
        ContractionScalar::zero()
    }
    fn one() -> Self {
        ContractionScalar::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn conj(&self) -> Self {
        ContractionScalar::conj(self)
    }
}

impl Entry for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mat2<T> {
    pub e: [[T; 2]; 2],
}

pub type GaugeMatrix = Mat2<ContractionScalar>;
pub type NumMatrix = Mat2<Complex64>;

impl<T: Entry> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { e: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        Mat2 { e: [[f(&self.e[0][0]), f(&self.e[0][1])], [f(&self.e[1][0]), f(&self.e[1][1])]] }
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Self {
            e: [
                [f(&self.e[0][0], &rhs.e[0][0]), f(&self.e[0][1], &rhs.e[0][1])],
                [f(&self.e[1][0], &rhs.e[1][0]), f(&self.e[1][1], &rhs.e[1][1])],
            ],
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, T::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, T::sub)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let m = |r: usize, c: usize| self.e[r][0].mul(&rhs.e[0][c]).add(&self.e[r][1].mul(&rhs.e[1][c]));
        Self::new(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    /// Conjugate transpose. The contraction parameter is real, so only
    /// coefficients are conjugated.
    pub fn adjoint(&self) -> Self {
        Self::new(self.e[0][0].conj(), self.e[1][0].conj(), self.e[0][1].conj(), self.e[1][1].conj())
    }

    pub fn det(&self) -> T {
        self.e[0][0].mul(&self.e[1][1]).sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn trace(&self) -> T {
        self.e[0][0].add(&self.e[1][1])
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn apply(&self, v: &[T; 2]) -> [T; 2] {
        [
            self.e[0][0].mul(&v[0]).add(&self.e[0][1].mul(&v[1])),
            self.e[1][0].mul(&v[0]).add(&self.e[1][1].mul(&v[1])),
        ]
    }
}

impl NumMatrix {
    pub fn max_abs(&self) -> f64 {
        self.e.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl GaugeMatrix {
    pub fn from_scalars(a: ComplexRational, b: ComplexRational, c: ComplexRational, d: ComplexRational) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn reduce(&self, mode: JMode) -> ModeMatrix {
        match mode {
            JMode::Numeric(eps) => ModeMatrix::Float(self.map(|x| x.eval(eps))),
            _ => ModeMatrix::Exact(self.map(|x| x.reduce_exact(mode))),
        }
    }

    pub fn eval(&self, j: f64) -> NumMatrix {
        self.map(|x| x.eval(j))
    }

    pub fn mul_j(&self) -> Self {
        self.map(|x| x.mul_j())
    }
}

/// A matrix reduced in a particular mode: exact for `j = 1, ι`, floating for `j = ε`.
#[derive(Debug, Clone, PartialEq)]
pub enum ModeMatrix {
    Exact(GaugeMatrix),
    Float(NumMatrix),
}

impl ModeMatrix {
    pub fn to_float(&self, mode: JMode) -> NumMatrix {
        match self {
            ModeMatrix::Exact(m) => match mode {
                JMode::Numeric(eps) => m.eval(eps),
                _ => m.eval(1.0),
            },
            ModeMatrix::Float(m) => m.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&GaugeMatrix> {
        match self {
            ModeMatrix::Exact(m) => Some(m),
            ModeMatrix::Float(_) => None,
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            ModeMatrix::Exact(m) => ModeMatrix::Exact(m.adjoint()),
            ModeMatrix::Float(m) => ModeMatrix::Float(m.adjoint()),
        }
    }

    pub fn scale(&self, s: &ContractionScalar, mode: JMode) -> Self {
        match self {
            ModeMatrix::Exact(m) => ModeMatrix::Exact(m.scale(s)).rereduce(mode),
            ModeMatrix::Float(m) => ModeMatrix::Float(m.scale(&s.reduce(mode).to_complex())),
        }
    }

    fn rereduce(self, mode: JMode) -> Self {
        match self {
            ModeMatrix::Exact(m) => m.reduce(mode),
            f => f,
        }
    }

    /// Size of `self − rhs`: zero exactly when the matrices agree in this mode.
    pub fn distance(&self, rhs: &Self, mode: JMode) -> f64 {
        match (self, rhs) {
            (ModeMatrix::Exact(a), ModeMatrix::Exact(b)) if mode.is_exact() => {
                let d = a.sub(b);
                d.e.iter()
                    .flatten()
                    .map(|x| x.terms().map(|(_, c)| cr_to_f64(c).norm()).sum::<f64>())
                    .fold(0.0, f64::max)
            }
            _ => self.to_float(mode).sub(&rhs.to_float(mode)).max_abs(),
        }
    }
}

impl fmt::Display for GaugeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1])
    }
}

/// Matrix product reduced in `mode`.
pub fn mat_mul(x: &ModeMatrix, y: &ModeMatrix, mode: JMode) -> ModeMatrix {
    match (x, y) {
        (ModeMatrix::Exact(a), ModeMatrix::Exact(b)) => a.mul(b).reduce(mode),
        _ => ModeMatrix::Float(x.to_float(mode).mul(&y.to_float(mode))),
    }
}

pub fn mat_sub(x: &ModeMatrix, y: &ModeMatrix, mode: JMode) -> ModeMatrix {
    match (x, y) {
        (ModeMatrix::Exact(a), ModeMatrix::Exact(b)) => a.sub(b).reduce(mode),
        _ => ModeMatrix::Float(x.to_float(mode).sub(&y.to_float(mode))),
    }
}

/// `XY − YX`, reduced in `mode`.
pub fn commutator(x: &ModeMatrix, y: &ModeMatrix, mode: JMode) -> ModeMatrix {
    mat_sub(&mat_mul(x, y, mode), &mat_mul(y, x, mode), mode)
}

/// Ω(j) = [[α, jβ], [−j·β̄, ᾱ]] with the full j-grading kept.
pub fn su2j_graded(alpha: &ComplexRational, beta: &ComplexRational) -> GaugeMatrix {
    Mat2::new(
        alpha.clone().into(),
        ContractionScalar::monomial(beta.clone(), 1),
        ContractionScalar::monomial(-beta.conj(), 1),
        alpha.conj().into(),
    )
}

/// `|α|² + j²|β|²` reduced in `mode`, compared against 1.
fn determinant_defect(alpha: &ComplexRational, beta: &ComplexRational, mode: JMode) -> Result<(), GaugeError> {
    let det = ContractionScalar::constant(cr(cr_norm_sqr(alpha), BigRational::zero()))
        + ContractionScalar::monomial(cr(cr_norm_sqr(beta), BigRational::zero()), 2);
    match det.reduce(mode) {
        Reduced::Exact(v) if v == ContractionScalar::one() => Ok(()),
        Reduced::Float(z) if (z - Complex64::new(1.0, 0.0)).norm() <= FLOAT_TOL => Ok(()),
        Reduced::Exact(v) => Err(GaugeError::NotUnimodular(v.to_string())),
        Reduced::Float(z) => Err(GaugeError::NotUnimodular(z.to_string())),
    }
}

/// An element of SU(2;j), reduced in `mode`.
pub fn su2j_make(alpha: &ComplexRational, beta: &ComplexRational, mode: JMode) -> Result<ModeMatrix, GaugeError> {
    determinant_defect(alpha, beta, mode)?;
    Ok(su2j_graded(alpha, beta).reduce(mode))
}

/// Generator T_k(j): T₁ = j(i/2)τ₁, T₂ = j(i/2)τ₂, T₃ = (i/2)τ₃.
pub fn generator_graded(k: u8) -> Result<GaugeMatrix, GaugeError> {
    let half = |re: i64, im: i64| ContractionScalar::constant(cr(rat(re, 2), rat(im, 2)));
    let z = ContractionScalar::zero;
    match k {
        1 => Ok(Mat2::new(z(), half(0, 1), half(0, 1), z()).mul_j()),
        // (i/2)·[[0, −i], [i, 0]] = [[0, 1/2], [−1/2, 0]]
        2 => Ok(Mat2::new(z(), half(1, 0), half(-1, 0), z()).mul_j()),
        3 => Ok(Mat2::new(half(0, 1), z(), z(), half(0, -1))),
        other => Err(GaugeError::BadGenerator(other)),
    }
}

pub fn generator(k: u8, mode: JMode) -> Result<ModeMatrix, GaugeError> {
    Ok(generator_graded(k)?.reduce(mode))
}

/// Σ a_k T_k(j).
pub fn lie_element_graded(a: [&BigRational; 3]) -> GaugeMatrix {
    let mut acc = GaugeMatrix::zero();
    for (k, ak) in (1u8..=3).zip(a) {
        let s = ContractionScalar::constant(cr(ak.clone(), BigRational::zero()));
        acc = acc.add(&generator_graded(k).expect("k in 1..=3").scale(&s));
    }
    acc
}

pub fn lie_element(a1: &BigRational, a2: &BigRational, a3: &BigRational, mode: JMode) -> ModeMatrix {
    lie_element_graded([a1, a2, a3]).reduce(mode)
}

/// Hypercharge generator Y = (i/2)·1.
pub fn hypercharge() -> GaugeMatrix {
    let h = ContractionScalar::constant(cr(rat(0, 1), rat(1, 2)));
    Mat2::new(h.clone(), ContractionScalar::zero(), ContractionScalar::zero(), h)
}

/// Electric charge generator Q = Y + T₃.
pub fn charge() -> GaugeMatrix {
    hypercharge().add(&generator_graded(3).expect("T3"))
}

/// A point on the unit circle with rational coordinates, i.e. an exact phase e^{iθ}.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitPhase {
    pub cos: BigRational,
    pub sin: BigRational,
}

impl UnitPhase {
    pub fn identity() -> Self {
        Self { cos: BigRational::one(), sin: BigRational::zero() }
    }

    /// Phase at θ = n·π/2.
    pub fn quarter_turns(n: i64) -> Self {
        let (c, s) = match n.rem_euclid(4) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        Self { cos: rat(c, 1), sin: rat(s, 1) }
    }

    /// Rational parametrization through t = tan(θ/2).
    pub fn from_half_tangent(t: &BigRational) -> Self {
        let one = BigRational::one();
        let t2 = t * t;
        let d = &one + &t2;
        Self { cos: (&one - &t2) / &d, sin: (t * BigRational::from_integer(2.into())) / d }
    }

    pub fn value(&self) -> ComplexRational {
        cr(self.cos.clone(), self.sin.clone())
    }
}

/// u(β) = e^{βY} = diag(e^{iβ/2}, e^{iβ/2}), given the half-angle phase e^{iβ/2}.
pub fn u1_element(half_phase: &UnitPhase) -> GaugeMatrix {
    let p = half_phase.value();
    GaugeMatrix::from_scalars(p.clone(), cr_int(0, 0), cr_int(0, 0), p)
}

/// u_em(γ) = e^{γQ} = diag(e^{iγ}, 1), given the phase e^{iγ}.
pub fn u1em_element(phase: &UnitPhase) -> GaugeMatrix {
    GaugeMatrix::from_scalars(phase.value(), cr_int(0, 0), cr_int(0, 0), cr_int(1, 0))
}

pub fn u1_element_angle(beta: f64) -> NumMatrix {
    let p = Complex64::from_polar(1.0, beta / 2.0);
    Mat2::new(p, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), p)
}

pub fn u1em_element_angle(gamma: f64) -> NumMatrix {
    Mat2::new(Complex64::from_polar(1.0, gamma), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
}

/// Doublet (φ₁, jφ₂). The fiber component is stored without its j weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubletState {
    pub phi1: ContractionScalar,
    pub phi2: ContractionScalar,
}

impl DoubletState {
    pub fn new(phi1: impl Into<ContractionScalar>, phi2: impl Into<ContractionScalar>) -> Self {
        Self { phi1: phi1.into(), phi2: phi2.into() }
    }

    /// The weighted column (φ₁, jφ₂).
    pub fn column(&self) -> [ContractionScalar; 2] {
        [self.phi1.clone(), self.phi2.mul_j()]
    }

    /// Action of a graded matrix on the doublet; the j weight of the second
    /// component is cancelled again afterwards.
    pub fn transform(&self, omega: &GaugeMatrix) -> Result<Self, GaugeError> {
        let [a, b] = omega.apply(&self.column());
        Ok(Self { phi1: a, phi2: b.div_j()? })
    }
}

/// φ†(j)φ(j) = |φ₁|² + j²|φ₂|², reduced in `mode`.
pub fn hermitian_form(phi: &DoubletState, mode: JMode) -> Reduced {
    let form = &phi.phi1.conj() * &phi.phi1 + (&phi.phi2.conj() * &phi.phi2).mul_j().mul_j();
    form.reduce(mode)
}

/// Distance of a reduced matrix from the SU(2;j) element shape [[α, jβ], [−jβ̄, ᾱ]]
/// with unit determinant. Zero means membership.
pub fn su2j_membership_defect(m: &ModeMatrix, mode: JMode) -> f64 {
    let ident = ModeMatrix::Exact(GaugeMatrix::identity()).rereduce(mode);
    let shape = match m {
        ModeMatrix::Exact(x) => {
            let mut d = 0.0;
            let c00 = x.e[1][1].sub(&x.e[0][0].conj());
            let c01 = x.e[1][0].add(&x.e[0][1].conj());
            for c in [c00, c01] {
                d += c.terms().map(|(_, v)| cr_to_f64(v).norm()).sum::<f64>();
            }
            if mode == JMode::Nilpotent {
                // off-diagonal entries must be pure ι multiples, diagonal entries ι-free
                d += x.e[0][1].coeff(0).norm_sqr().to_f64_lossy();
                d += x.e[0][0].coeff(1).norm_sqr().to_f64_lossy();
            }
            d
        }
        ModeMatrix::Float(x) => {
            (x.e[1][1] - x.e[0][0].conj()).norm().max((x.e[1][0] + x.e[0][1].conj()).norm())
        }
    };
    let det = match m {
        ModeMatrix::Exact(x) => ModeMatrix::Exact(Mat2::new(x.det(), ContractionScalar::zero(), ContractionScalar::zero(), x.det())),
        ModeMatrix::Float(x) => ModeMatrix::Float(Mat2::new(x.det(), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), x.det())),
    }
    .rereduce(mode);
    shape + det.distance(&ident, mode)
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Random small rational p/q.
pub fn random_rational(rng: &mut (impl Rng + ?Sized), max_num: i64, max_den: i64) -> BigRational {
    rat(rng.random_range(-max_num..=max_num), rng.random_range(1..=max_den))
}

pub fn random_complex_rational(rng: &mut (impl Rng + ?Sized), max_num: i64, max_den: i64) -> ComplexRational {
    cr(random_rational(rng, max_num, max_den), random_rational(rng, max_num, max_den))
}

/// Rational point on the unit 3-sphere by inverse stereographic projection.
pub fn random_sphere_point(rng: &mut impl Rng) -> [BigRational; 4] {
    let t: [BigRational; 3] = std::array::from_fn(|_| random_rational(rng, 9, 7));
    let n: BigRational = t.iter().map(|x| x * x).sum();
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let d = &n + &one;
    [&t[0] * &two / &d, &t[1] * &two / &d, &t[2] * &two / &d, (&n - &one) / &d]
}

/// Half-width of the rational box β is drawn from when |α| = 1 leaves β free.
pub const BETA_BOX: i64 = 4;

/// Random (α, β) satisfying the determinant condition of `mode` exactly.
pub fn random_su2j_params(rng: &mut impl Rng, mode: JMode) -> (ComplexRational, ComplexRational) {
    let free_beta = |rng: &mut dyn rand::RngCore| {
        let t = random_rational(rng, 9, 7);
        let p = UnitPhase::from_half_tangent(&t);
        (p.value(), random_complex_rational(rng, BETA_BOX * 8, 8))
    };
    match mode {
        JMode::One => {
            let [a, b, c, d] = random_sphere_point(rng);
            (cr(a, b), cr(c, d))
        }
        JMode::Nilpotent => free_beta(rng),
        JMode::Numeric(eps) => {
            let eps_q = parse_rational(&format!("{eps}")).filter(|e| !e.is_zero());
            match eps_q {
                Some(e) => {
                    let [a, b, c, d] = random_sphere_point(rng);
                    (cr(a, b), cr(c / &e, d / &e))
                }
                None => free_beta(rng),
            }
        }
    }
}

/// Exact rational value of a numeric mode's ε, used to sample group elements
/// whose determinant condition holds exactly before float evaluation.
pub fn mode_epsilon(mode: JMode) -> Option<BigRational> {
    match mode {
        JMode::Numeric(eps) => parse_rational(&format!("{eps}")),
        _ => None,
    }
}

/// Checks the commutation relations [T₁,T₂] = −j²T₃, [T₃,T₁] = −T₂, [T₂,T₃] = −T₁.
pub fn verify_commutators(mode: JMode) -> VerificationReport {
    let (path, tol) = if mode.is_exact() { (DecisionPath::ExactSymbolic, 0.0) } else { (DecisionPath::NumericOracle, FLOAT_TOL) };
    let mut b = ReportBuilder::new("commutator_table", mode.label(), path, tol);
    let t = |k| generator(k, mode).expect("valid generator");
    let j2 = ContractionScalar::monomial(cr_int(-1, 0), 2);
    let minus = ContractionScalar::from(-1);
    let cases = [
        ("[T1,T2] = -j^2 T3", commutator(&t(1), &t(2), mode), generator_graded(3).unwrap().scale(&j2).reduce(mode)),
        ("[T3,T1] = -T2", commutator(&t(3), &t(1), mode), generator_graded(2).unwrap().scale(&minus).reduce(mode)),
        ("[T2,T3] = -T1", commutator(&t(2), &t(3), mode), generator_graded(1).unwrap().scale(&minus).reduce(mode)),
    ];
    for (name, lhs, rhs) in cases {
        let err = lhs.distance(&rhs, mode);
        b.error(err, || format!("{name} violated: lhs={lhs:?}"));
    }
    if mode == JMode::Nilpotent {
        let c = commutator(&t(1), &t(2), mode);
        b.require(c.distance(&ModeMatrix::Exact(GaugeMatrix::zero()), mode) == 0.0, || "T1 and T2 do not commute at j=iota".into());
    }
    b.finish()
}

/// Randomized check of the group axioms of SU(2;j) in `mode`: determinant
/// condition, unitarity, closure, invariance of the hermitian form and
/// anti-hermiticity of Lie-algebra elements.
pub fn verify_group(mode: JMode, samples: usize, seed: u64) -> VerificationReport {
    let (path, tol) = if mode.is_exact() { (DecisionPath::ExactSymbolic, 0.0) } else { (DecisionPath::NumericOracle, FLOAT_TOL) };
    let mut b = ReportBuilder::new("group_axioms", mode.label(), path, tol);
    let mut rng = seeded(seed, "group_axioms");
    let ident = GaugeMatrix::identity().reduce(mode);
    let zero = GaugeMatrix::zero().reduce(mode);
    if matches!(mode, JMode::Nilpotent) || mode_epsilon(mode).is_some_and(|e| e.is_zero()) {
        b.note(format!("beta sampled from the rational box [-{BETA_BOX},{BETA_BOX}]^2; SU(2;iota) leaves beta unbounded"));
    }
    let samples = samples.max(1);
    let mut prev: Option<GaugeMatrix> = None;
    for i in 0..samples {
        let (alpha, beta) = random_su2j_params(&mut rng, mode);
        let omega = match su2j_make(&alpha, &beta, mode) {
            Ok(m) => m,
            Err(e) => {
                b.require(false, || format!("sample {i}: {e}"));
                continue;
            }
        };
        let graded = su2j_graded(&alpha, &beta);

        b.error(su2j_membership_defect(&omega, mode), || format!("sample {i}: determinant/shape defect"));
        let adj = omega.adjoint();
        b.error(mat_mul(&omega, &adj, mode).distance(&ident, mode), || format!("sample {i}: Omega Omega^dagger != 1"));
        b.error(mat_mul(&adj, &omega, mode).distance(&ident, mode), || format!("sample {i}: Omega^dagger Omega != 1"));

        if let Some(p) = &prev {
            let product = mat_mul(&p.reduce(mode), &omega, mode);
            b.error(su2j_membership_defect(&product, mode), || format!("sample {i}: product left the group"));
        }

        let phi = DoubletState::new(random_complex_rational(&mut rng, 9, 5), random_complex_rational(&mut rng, 9, 5));
        match phi.transform(&graded) {
            Ok(moved) => {
                let before = hermitian_form(&phi, mode);
                let after = hermitian_form(&moved, mode);
                let err = match (&before, &after) {
                    (Reduced::Exact(x), Reduced::Exact(y)) => {
                        if x == y {
                            0.0
                        } else {
                            (x.eval(1.0) - y.eval(1.0)).norm().max(f64::MIN_POSITIVE)
                        }
                    }
                    _ => (before.to_complex() - after.to_complex()).norm() / (1.0 + before.to_complex().norm()),
                };
                b.error(err, || format!("sample {i}: hermitian form changed under Omega"));
            }
            Err(e) => {
                b.require(false, || format!("sample {i}: {e}"));
            }
        }

        let a: [BigRational; 3] = std::array::from_fn(|_| random_rational(&mut rng, 9, 5));
        let t = lie_element(&a[0], &a[1], &a[2], mode);
        let sum = match (&t, &t.adjoint()) {
            (ModeMatrix::Exact(x), ModeMatrix::Exact(y)) => ModeMatrix::Exact(x.add(y)),
            (x, y) => ModeMatrix::Float(x.to_float(mode).add(&y.to_float(mode))),
        };
        b.error(sum.distance(&zero, mode), || format!("sample {i}: T + T^dagger != 0"));

        prev = Some(graded);
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(m: ModeMatrix) -> GaugeMatrix {
        m.as_exact().cloned().expect("exact mode")
    }

    #[test]
    fn su2j_make_examples() {
        let beta = cr(rat(7, 3), rat(-2, 1));
        let m = exact(su2j_make(&cr_int(1, 0), &beta, JMode::Nilpotent).unwrap());
        assert_eq!(m.det().reduce_exact(JMode::Nilpotent), ContractionScalar::one());

        let id = exact(su2j_make(&cr_int(1, 0), &cr_int(0, 0), JMode::One).unwrap());
        assert_eq!(id, GaugeMatrix::identity());

        let m = su2j_make(&cr(rat(3, 5), rat(0, 1)), &cr(rat(0, 1), rat(4, 5)), JMode::One).unwrap();
        assert_eq!(su2j_membership_defect(&m, JMode::One), 0.0);

        assert!(matches!(
            su2j_make(&cr(rat(3, 5), rat(0, 1)), &cr(rat(0, 1), rat(4, 5)), JMode::Nilpotent),
            Err(GaugeError::NotUnimodular(_))
        ));
    }

    #[test]
    fn generator_examples() {
        let t3 = exact(generator(3, JMode::Nilpotent).unwrap());
        assert_eq!(t3, GaugeMatrix::from_scalars(cr(rat(0, 1), rat(1, 2)), cr_int(0, 0), cr_int(0, 0), cr(rat(0, 1), rat(-1, 2))));
        let t1 = exact(generator(1, JMode::Nilpotent).unwrap());
        assert_eq!(t1.e[0][1], ContractionScalar::monomial(cr(rat(0, 1), rat(1, 2)), 1));
        assert_eq!(t1.e[1][0], ContractionScalar::monomial(cr(rat(0, 1), rat(1, 2)), 1));
        let t1_0 = generator(1, JMode::Numeric(0.0)).unwrap().to_float(JMode::Numeric(0.0));
        assert_eq!(t1_0.max_abs(), 0.0);
        assert!(matches!(generator(4, JMode::One), Err(GaugeError::BadGenerator(4))));
    }

    #[test]
    fn lie_element_examples() {
        let t = exact(lie_element(&rat(0, 1), &rat(0, 1), &rat(2, 1), JMode::One));
        assert_eq!(t, GaugeMatrix::from_scalars(cr_int(0, 1), cr_int(0, 0), cr_int(0, 0), cr_int(0, -1)));

        // (i/2)[[1, 1−i], [1+i, −1]]
        let t = exact(lie_element(&rat(1, 1), &rat(1, 1), &rat(1, 1), JMode::One));
        let h = |re: i64, im: i64| cr(rat(re, 2), rat(im, 2));
        assert_eq!(t, GaugeMatrix::from_scalars(h(0, 1), h(1, 1), h(-1, 1), h(0, -1)));

        let t = exact(lie_element(&rat(1, 1), &rat(1, 1), &rat(1, 1), JMode::Nilpotent));
        assert_eq!(t.e[0][1].min_degree(), Some(1));
        assert_eq!(t.e[1][0].min_degree(), Some(1));
    }

    #[test]
    fn commutator_examples() {
        let one = JMode::One;
        let c = commutator(&generator(1, one).unwrap(), &generator(2, one).unwrap(), one);
        assert_eq!(c, generator(3, one).unwrap().scale(&ContractionScalar::from(-1), one));

        let nil = JMode::Nilpotent;
        let c = commutator(&generator(1, nil).unwrap(), &generator(2, nil).unwrap(), nil);
        assert_eq!(exact(c), GaugeMatrix::zero());
        let c = commutator(&generator(3, nil).unwrap(), &generator(1, nil).unwrap(), nil);
        assert_eq!(c, generator(2, nil).unwrap().scale(&ContractionScalar::from(-1), nil));

        for mode in [JMode::One, JMode::Nilpotent, JMode::Numeric(1e-3), JMode::Numeric(0.37)] {
            assert!(verify_commutators(mode).passed(), "{mode}");
        }
    }

    #[test]
    fn product_and_unitarity() {
        let mut rng = seeded(7, "t");
        for mode in [JMode::One, JMode::Nilpotent] {
            let (a, b) = random_su2j_params(&mut rng, mode);
            let m = su2j_make(&a, &b, mode).unwrap();
            let id = GaugeMatrix::identity().reduce(mode);
            assert_eq!(mat_mul(&id, &m, mode), m);
            assert_eq!(mat_mul(&m, &m.adjoint(), mode), id);
        }
        // closure at j = ι for elements with α = e^{iφ}
        let p = UnitPhase::from_half_tangent(&rat(1, 2));
        let q = UnitPhase::from_half_tangent(&rat(-3, 4));
        let a = su2j_make(&p.value(), &cr(rat(5, 1), rat(1, 3)), JMode::Nilpotent).unwrap();
        let b = su2j_make(&q.value(), &cr(rat(-2, 7), rat(3, 1)), JMode::Nilpotent).unwrap();
        let ab = mat_mul(&a, &b, JMode::Nilpotent);
        assert_eq!(su2j_membership_defect(&ab, JMode::Nilpotent), 0.0);
    }

    #[test]
    fn u1_examples() {
        assert_eq!(u1_element(&UnitPhase::identity()), GaugeMatrix::identity());
        assert_eq!(u1em_element(&UnitPhase::identity()), GaugeMatrix::identity());
        let p = UnitPhase::from_half_tangent(&rat(2, 3));
        let phi = DoubletState::new(cr_int(2, 1), cr_int(-1, 5));
        let moved = phi.transform(&u1em_element(&p)).unwrap();
        assert_eq!(moved.phi2, phi.phi2);
        assert_eq!(moved.phi1, &phi.phi1 * &ContractionScalar::from(p.value()));
        // Q = Y + T3 = diag(i, 0)
        assert_eq!(charge(), GaugeMatrix::from_scalars(cr_int(0, 1), cr_int(0, 0), cr_int(0, 0), cr_int(0, 0)));
        let u = u1em_element_angle(0.3);
        assert!((u.e[0][0] - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        assert!((u1_element_angle(0.0).sub(&NumMatrix::identity())).max_abs() < 1e-15);
        assert_eq!(UnitPhase::quarter_turns(1).value(), cr_int(0, 1));
    }

    #[test]
    fn hermitian_form_examples() {
        let e0 = DoubletState::new(cr_int(1, 0), cr_int(0, 0));
        for mode in [JMode::One, JMode::Nilpotent] {
            assert_eq!(hermitian_form(&e0, mode), Reduced::Exact(ContractionScalar::one()));
        }
        let fiber = DoubletState::new(cr_int(0, 0), cr_int(1, 0));
        assert_eq!(hermitian_form(&fiber, JMode::Nilpotent), Reduced::Exact(ContractionScalar::zero()));
        let v = DoubletState::new(cr(rat(3, 5), rat(0, 1)), cr(rat(4, 5), rat(0, 1)));
        assert_eq!(hermitian_form(&v, JMode::One), Reduced::Exact(ContractionScalar::one()));
    }

    #[test]
    fn verify_group_all_modes() {
        for mode in [JMode::One, JMode::Nilpotent, JMode::Numeric(1e-3)] {
            let r = verify_group(mode, 50, 42);
            assert!(r.passed(), "{mode}: {r:?}");
        }
    }
}
