//! Eigenvalues and eigenfunctions of `-y'' = λ ρ y`, `y(0) = 0`, with a
//! Dirichlet or Neumann condition on the right, for a signed weight `ρ`.
//!
//! Two independent routes are provided:
//!
//! * transfer-matrix shooting: `(y, y')` is carried across density pieces by
//!   exact trigonometric/hyperbolic propagators and across atoms by the jump
//!   `y' ↦ y' - λ w y`; eigenvalues are bracketed by the oscillation count of
//!   the shooting solution and refined by bisection on its boundary residual;
//! * Galerkin projection onto the sine basis of the energy space, whose matrix
//!   eigenvalues approximate the reciprocals `1/λ`.
//!
//! The oscillation count uses the Morse index of `∫y'² - σ∫ρy²`: the number
//! of eigenvalues strictly between `0` and `σ` equals the number of zeros of
//! the shooting solution in the open interval, plus one for the Neumann
//! condition when `y(1) y'(1) < 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::klbasis::SineBasis;
use crate::linalg::{jacobi_eigenvalues, SymMatrix};
use crate::measure::SignedMeasure;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// `y(1) = 0`
    Dirichlet,
    /// `y'(1) = 0`, read after the jump of an atom sitting at `x = 1`
    Neumann,
}

impl BoundaryCondition {
    pub fn galerkin_basis(self) -> SineBasis {
        match self {
            BoundaryCondition::Dirichlet => SineBasis::Pinned,
            BoundaryCondition::Neumann => SineBasis::Wiener,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Shooting,
    Galerkin,
}

/// 2×2 propagation matrix acting on `(y, y')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer<T>(pub [[T; 2]; 2]);

impl<T: Real> Transfer<T> {
    pub fn identity() -> Self {
        Self([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    /// `y'' = 0` over length `h`.
    pub fn free(h: T) -> Self {
        Self([[T::one(), h], [T::zero(), T::one()]])
    }

    /// `y' ↦ y' - λ w y` across an atom of weight `w`.
    pub fn jump(lambda: T, w: T) -> Self {
        Self([[T::one(), T::zero()], [-lambda * w, T::one()]])
    }

    /// `y'' = -κ y` over length `h`.
    pub fn constant(kappa: T, h: T) -> Self {
        if kappa.abs() < T::lit(1e-12) {
            return Self::free(h);
        }
        if kappa > T::zero() {
            let s = kappa.sqrt();
            let (sn, cs) = (s * h).sin_cos();
            Self([[cs, sn / s], [-s * sn, cs]])
        } else {
            let s = (-kappa).sqrt();
            let (sh, ch) = ((s * h).sinh(), (s * h).cosh());
            Self([[ch, sh / s], [s * sh, ch]])
        }
    }

    /// `self · rhs`
    pub fn then_after(&self, rhs: &Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        Self([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn det(&self) -> T {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, y: T, dy: T) -> (T, T) {
        (
            self.0[0][0] * y + self.0[0][1] * dy,
            self.0[1][0] * y + self.0[1][1] * dy,
        )
    }
}

/// `(y, y')` at the right end together with the accumulated transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferState<T> {
    pub y: T,
    pub dy: T,
    pub matrix: Transfer<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Step<T> {
    Flight { h: T, c: T },
    Kick { w: T },
}

/// The boundary problem for one weight on a subinterval `[a, b] ⊂ [0, 1]`,
/// with `y(a) = 0` and the chosen condition at `b`.
#[derive(Debug, Clone)]
pub struct EigenProblem<T> {
    steps: Vec<Step<T>>,
    start: T,
    end: T,
    bc: BoundaryCondition,
}

#[derive(Debug, Clone, Copy)]
struct Sweep<T> {
    y: T,
    dy: T,
    zeros: usize,
}

#[inline]
fn right_sign<T: Real>(y: T, dy: T) -> i8 {
    let v = if y.is_zero() { dy } else { y };
    if v > T::zero() {
        1
    } else if v < T::zero() {
        -1
    } else {
        0
    }
}

impl<T: Real> EigenProblem<T> {
    pub fn new(rho: &SignedMeasure<T>, bc: BoundaryCondition) -> Self {
        Self::on_interval(rho, bc, T::zero(), T::one())
    }

    /// Restriction of the weight to `(a, b]`; atoms at `a` are irrelevant since `y(a) = 0`.
    pub fn on_interval(rho: &SignedMeasure<T>, bc: BoundaryCondition, a: T, b: T) -> Self {
        assert!(a < b, "empty interval");
        let layout = rho.layout();
        let mut steps = Vec::new();
        let mut pos = a;
        for (j, win) in layout.nodes.windows(2).enumerate() {
            let (l, r) = (win[0].max(a), win[1].min(b));
            if r > l {
                if l > pos {
                    steps.push(Step::Flight { h: l - pos, c: T::zero() });
                }
                steps.push(Step::Flight {
                    h: r - l,
                    c: layout.seg_density[j],
                });
                pos = r;
            }
            let node = win[1];
            let w = layout.node_atom[j + 1];
            if node > a && node <= b && !w.is_zero() {
                if node > pos {
                    steps.push(Step::Flight { h: node - pos, c: T::zero() });
                    pos = node;
                }
                steps.push(Step::Kick { w });
            }
        }
        if b > pos {
            steps.push(Step::Flight { h: b - pos, c: T::zero() });
        }
        Self {
            steps,
            start: a,
            end: b,
            bc,
        }
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn interval(&self) -> (T, T) {
        (self.start, self.end)
    }

    /// Exact propagation from `(y, y') = (0, 1)` at the left end.
    pub fn propagate(&self, lambda: T) -> TransferState<T> {
        let mut m = Transfer::identity();
        for step in &self.steps {
            let f = match *step {
                Step::Flight { h, c } => Transfer::constant(lambda * c, h),
                Step::Kick { w } => Transfer::jump(lambda, w),
            };
            m = f.then_after(&m);
        }
        let (y, dy) = m.apply(T::zero(), T::one());
        TransferState { y, dy, matrix: m }
    }

    /// Boundary residual: `y(b)` for Dirichlet, `y'(b)` for Neumann.
    pub fn shooting(&self, lambda: T) -> T {
        let s = self.propagate(lambda);
        match self.bc {
            BoundaryCondition::Dirichlet => s.y,
            BoundaryCondition::Neumann => s.dy,
        }
    }

    // rescaled propagation with zero counting; only signs and ratios are meaningful
    fn sweep(&self, lambda: T) -> Sweep<T> {
        let mut y = T::zero();
        let mut dy = T::one();
        let mut zeros = 0usize;
        let big = T::lit(1e100).min(T::max_value().sqrt());
        for step in &self.steps {
            match *step {
                Step::Kick { w } => dy = dy - lambda * w * y,
                Step::Flight { h, c } => {
                    let kappa = lambda * c;
                    let before = right_sign(y, dy);
                    let (y1, dy1) = Transfer::constant(kappa, h).apply(y, dy);
                    let after = right_sign(y1, dy1);
                    let parity = usize::from(before != after);
                    let crossed = if kappa >= T::lit(1e-12) {
                        let s = kappa.sqrt();
                        let psi = (s * y).atan2(dy);
                        let r = (psi + s * h) / T::PI();
                        let mut n = (r.floor() - (psi / T::PI()).floor()).to_i64().unwrap_or(0).max(0) as usize;
                        if n % 2 != parity {
                            // the phase sits on a multiple of π; trust the propagated sign
                            if r - r.floor() < T::half() && n > 0 {
                                n -= 1;
                            } else {
                                n += 1;
                            }
                        }
                        n
                    } else {
                        parity
                    };
                    zeros += crossed;
                    y = y1;
                    dy = dy1;
                    let scale = y.abs().max(dy.abs());
                    if scale > big || (scale < big.recip() && !scale.is_zero()) {
                        y = y / scale;
                        dy = dy / scale;
                    }
                }
            }
        }
        Sweep { y, dy, zeros }
    }

    /// Number of eigenvalues strictly between `0` and `sigma`.
    pub fn count(&self, sigma: T) -> usize {
        if sigma.is_zero() {
            return 0;
        }
        let s = self.sweep(sigma);
        match self.bc {
            BoundaryCondition::Dirichlet => {
                if s.y.is_zero() {
                    s.zeros.saturating_sub(1)
                } else {
                    s.zeros
                }
            }
            BoundaryCondition::Neumann => {
                if s.y.is_zero() {
                    s.zeros
                } else {
                    s.zeros + usize::from(s.y * s.dy < T::zero())
                }
            }
        }
    }

    fn residual_sign(&self, lambda: T) -> i8 {
        let s = self.sweep(lambda);
        let v = match self.bc {
            BoundaryCondition::Dirichlet => s.y,
            BoundaryCondition::Neumann => s.dy,
        };
        if v > T::zero() {
            1
        } else if v < T::zero() {
            -1
        } else {
            0
        }
    }

    // Isolates the first `k` eigenvalues in (0, hi) on one side of zero.
    fn enumerate_side(&self, sign: T, k: usize, hi: T, found: &mut Vec<T>, multiple: &mut Vec<T>) {
        let c_hi = self.count(sign * hi);
        let mut stack = vec![(T::zero(), hi, 0usize, c_hi)];
        let mut isolated: Vec<(T, T, usize)> = Vec::new();
        let rel = T::lit(1e-14);
        while let Some((lo, up, c_lo, c_up)) = stack.pop() {
            if c_lo >= k || c_up == c_lo {
                continue;
            }
            if c_up - c_lo == 1 {
                isolated.push((lo, up, c_up));
                continue;
            }
            let mid = (lo + up) * T::half();
            if up - lo <= rel * up.abs().max(T::epsilon()) {
                multiple.push(sign * mid);
                for j in (c_lo + 1)..=c_up.min(k) {
                    isolated.push((mid, mid, j));
                }
                continue;
            }
            let c_mid = self.count(sign * mid);
            // push the upper half first so the lower half is processed first
            stack.push((mid, up, c_mid, c_up));
            stack.push((lo, mid, c_lo, c_mid));
        }
        isolated.sort_by_key(|t| t.2);
        for (lo, up, _) in isolated {
            found.push(sign * self.refine(sign * lo, sign * up));
        }
    }

    // Bisection on the sign of the boundary residual inside a bracket holding one root.
    fn refine(&self, a: T, b: T) -> T {
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        if lo == hi {
            return lo.abs();
        }
        let s_lo = self.residual_sign(lo);
        let s_hi = self.residual_sign(hi);
        let rel = T::lit(1e-15);
        if s_lo == 0 {
            return lo.abs();
        }
        if s_hi == 0 {
            return hi.abs();
        }
        if s_lo == s_hi {
            // fall back on the oscillation count
            let target = self.count(hi);
            for _ in 0..200 {
                let mid = (lo + hi) * T::half();
                if hi - lo <= rel * mid.abs() {
                    break;
                }
                if self.count(mid) >= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return ((lo + hi) * T::half()).abs();
        }
        for _ in 0..200 {
            let mid = (lo + hi) * T::half();
            if hi - lo <= rel * mid.abs() || mid == lo || mid == hi {
                break;
            }
            let s = self.residual_sign(mid);
            if s == 0 {
                return mid.abs();
            }
            if s == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ((lo + hi) * T::half()).abs()
    }

    /// First `m_max` eigenvalues of each sign with `|λ| < lambda_max`.
    pub fn eigenvalues(&self, m_max: usize, lambda_max: T) -> Result<Spectrum<T>> {
        if !(lambda_max > T::zero()) {
            return Err(Error::InvalidWindow(lambda_max.as_f64()));
        }
        if m_max == 0 {
            return Err(Error::InvalidArgument("m_max must be at least 1".into()));
        }
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        let mut multiple = Vec::new();
        self.enumerate_side(T::one(), m_max, lambda_max, &mut positive, &mut multiple);
        self.enumerate_side(-T::one(), m_max, lambda_max, &mut negative, &mut multiple);
        Ok(Spectrum {
            positive_exhausted: positive.len() < m_max,
            negative_exhausted: negative.len() < m_max,
            positive,
            negative,
            window: lambda_max,
            method: Method::Shooting,
            bc: self.bc,
            multiplicity_suspected: multiple,
        })
    }

    /// The `m`-th positive eigenvalue (1-based) if it lies below `lambda_max`.
    pub fn positive_eigenvalue(&self, m: usize, lambda_max: T) -> Option<T> {
        if m == 0 || self.count(lambda_max) < m {
            return None;
        }
        let (mut lo, mut hi) = (T::zero(), lambda_max);
        let rel = T::lit(1e-15);
        for _ in 0..300 {
            let mid = (lo + hi) * T::half();
            if hi - lo <= rel * hi || mid == lo || mid == hi {
                break;
            }
            if self.count(mid) >= m {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some((lo + hi) * T::half())
    }

    /// Normalized eigenfunction for an eigenvalue found by [`Self::eigenvalues`].
    pub fn eigenfunction(&self, lambda: T) -> Result<EigenPair<T>> {
        let mut pieces = Vec::new();
        let mut jumps = Vec::new();
        let mut x = self.start;
        let mut y = T::zero();
        let mut dy = T::one();
        // residual is measured against the largest state along the path
        let mut scale = T::one();
        for step in &self.steps {
            match *step {
                Step::Kick { w } => {
                    let before = dy;
                    dy = dy - lambda * w * y;
                    jumps.push(AtomJump {
                        x,
                        weight: w,
                        y,
                        dy_before: before,
                        dy_after: dy,
                    });
                }
                Step::Flight { h, c } => {
                    let kappa = lambda * c;
                    pieces.push(Piece {
                        start: x,
                        end: x + h,
                        y0: y,
                        dy0: dy,
                        kappa: if kappa.abs() < T::lit(1e-12) { T::zero() } else { kappa },
                    });
                    let (y1, dy1) = Transfer::constant(kappa, h).apply(y, dy);
                    y = y1;
                    dy = dy1;
                    x = x + h;
                    scale = scale.max(y.abs()).max(dy.abs());
                }
            }
        }
        let residual = match self.bc {
            BoundaryCondition::Dirichlet => y,
            BoundaryCondition::Neumann => dy,
        };
        if !(residual.abs() <= T::lit(1e-6) * scale) {
            return Err(Error::NotAnEigenvalue {
                lambda: lambda.as_f64(),
                residual: (residual / scale).as_f64(),
            });
        }
        let energy: T = pieces.iter().map(|p| p.energy()).sum();
        let norm = energy.sqrt();
        for p in &mut pieces {
            p.y0 = p.y0 / norm;
            p.dy0 = p.dy0 / norm;
        }
        for j in &mut jumps {
            j.y = j.y / norm;
            j.dy_before = j.dy_before / norm;
            j.dy_after = j.dy_after / norm;
        }
        Ok(EigenPair {
            lambda,
            pieces,
            jumps,
            residual: residual / scale,
        })
    }
}

/// Shooting from `(0, 1)` at `x = 0` through the whole interval.
pub fn propagate<T: Real>(rho: &SignedMeasure<T>, lambda: T) -> TransferState<T> {
    EigenProblem::new(rho, BoundaryCondition::Neumann).propagate(lambda)
}

pub fn shooting_function<T: Real>(rho: &SignedMeasure<T>, lambda: T, bc: BoundaryCondition) -> T {
    EigenProblem::new(rho, bc).shooting(lambda)
}

/// `ω(λ) = 2 sin(λ/2) / λ`, the limit of the comb shooting functions.
pub fn limit_omega<T: Real>(lambda: T) -> T {
    if lambda.abs() < T::lit(1e-4) {
        let l2 = lambda * lambda;
        T::one() - l2 / T::lit(24.0) + l2 * l2 / T::lit(1920.0)
    } else {
        T::two() * (lambda * T::half()).sin() / lambda
    }
}

/// Eigenvalues found on both sides of zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum<T> {
    /// `0 < λ₁ < λ₂ < …`
    pub positive: Vec<T>,
    /// negative eigenvalues ordered by increasing `|λ|`
    pub negative: Vec<T>,
    pub window: T,
    pub method: Method,
    pub bc: BoundaryCondition,
    pub positive_exhausted: bool,
    pub negative_exhausted: bool,
    /// locations where an interval could not be split below rounding level
    pub multiplicity_suspected: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn all(&self) -> impl Iterator<Item = T> + '_ {
        self.positive.iter().chain(&self.negative).copied()
    }
}

pub fn find_eigenvalues<T: Real>(
    rho: &SignedMeasure<T>,
    bc: BoundaryCondition,
    m_max: usize,
    lambda_max: T,
) -> Result<Spectrum<T>> {
    EigenProblem::new(rho, bc).eigenvalues(m_max, lambda_max)
}

pub fn eigenfunction<T: Real>(rho: &SignedMeasure<T>, lambda: T, bc: BoundaryCondition) -> Result<EigenPair<T>> {
    EigenProblem::new(rho, bc).eigenfunction(lambda)
}

/// Solution on one flight: `y'' = -κ y` on `[start, end]` with data `(y0, dy0)` at `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece<T> {
    pub start: T,
    pub end: T,
    pub y0: T,
    pub dy0: T,
    pub kappa: T,
}

impl<T: Real> Piece<T> {
    fn at(&self, x: T) -> (T, T) {
        Transfer::constant(self.kappa, x - self.start).apply(self.y0, self.dy0)
    }

    /// `∫ (y')²` over the piece, in closed form.
    pub fn energy(&self) -> T {
        let h = self.end - self.start;
        let (y, d) = (self.y0, self.dy0);
        if self.kappa.is_zero() {
            return d * d * h;
        }
        let two = T::two();
        let four = T::lit(4.0);
        if self.kappa > T::zero() {
            let s = self.kappa.sqrt();
            let sin2 = (two * s * h).sin() / (four * s);
            let cos_sq = h * T::half() + sin2;
            let sin_sq = h * T::half() - sin2;
            let sc = (s * h).sin().powi(2) / (two * s);
            d * d * cos_sq + y * y * s * s * sin_sq - two * d * y * s * sc
        } else {
            let s = (-self.kappa).sqrt();
            let sinh2 = (two * s * h).sinh() / (four * s);
            let cosh_sq = h * T::half() + sinh2;
            let sinh_sq = sinh2 - h * T::half();
            let sc = (s * h).sinh().powi(2) / (two * s);
            d * d * cosh_sq + y * y * s * s * sinh_sq + two * d * y * s * sc
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomJump<T> {
    pub x: T,
    pub weight: T,
    pub y: T,
    pub dy_before: T,
    pub dy_after: T,
}

/// Eigenvalue with its eigenfunction normalized by `∫(y')² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    pub lambda: T,
    pub pieces: Vec<Piece<T>>,
    pub jumps: Vec<AtomJump<T>>,
    /// boundary residual relative to the largest `max(|y|, |y'|)` along the solution
    pub residual: T,
}

impl<T: Real> EigenPair<T> {
    fn piece_for(&self, x: T) -> &Piece<T> {
        let idx = self.pieces.partition_point(|p| p.end <= x);
        &self.pieces[idx.min(self.pieces.len() - 1)]
    }

    pub fn eval(&self, x: T) -> T {
        self.piece_for(x).at(x).0
    }

    /// Right derivative.
    pub fn deriv(&self, x: T) -> T {
        self.piece_for(x).at(x).1
    }

    pub fn energy(&self) -> T {
        self.pieces.iter().map(|p| p.energy()).sum()
    }

    /// `max |Δy' + λ w y|` over the atoms.
    pub fn jump_residual(&self) -> T {
        self.jumps
            .iter()
            .map(|j| (j.dy_after - j.dy_before + self.lambda * j.weight * j.y).abs())
            .fold(T::zero(), T::max)
    }
}

/// Galerkin matrix in the sine basis adapted to `bc`.
pub fn galerkin_matrix<T: Real>(rho: &SignedMeasure<T>, size: usize, bc: BoundaryCondition) -> SymMatrix<T> {
    bc.galerkin_basis().coeff_matrix(rho, size)
}

/// All eigenvalues of a symmetric matrix, ordered by decreasing magnitude.
pub fn galerkin_spectrum<T: Real>(r: &SymMatrix<T>) -> Vec<T> {
    let mut mu = jacobi_eigenvalues(r);
    mu.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
    mu
}

/// Eigenvalue estimates `1/μ` from a Galerkin projection of size `size`.
pub fn galerkin_eigenvalues<T: Real>(
    rho: &SignedMeasure<T>,
    bc: BoundaryCondition,
    size: usize,
    m_max: usize,
    lambda_max: T,
) -> Spectrum<T> {
    let mu = galerkin_spectrum(&galerkin_matrix(rho, size, bc));
    let cutoff = T::epsilon().sqrt() * mu.first().map_or(T::zero(), |m| m.abs());
    let mut positive: Vec<T> = mu
        .iter()
        .filter(|m| **m > cutoff)
        .map(|m| m.recip())
        .filter(|l| *l < lambda_max)
        .collect();
    let mut negative: Vec<T> = mu
        .iter()
        .filter(|m| **m < -cutoff)
        .map(|m| m.recip())
        .filter(|l| -*l < lambda_max)
        .collect();
    positive.sort_by(|a, b| a.partial_cmp(b).unwrap());
    negative.sort_by(|a, b| b.partial_cmp(a).unwrap());
    positive.truncate(m_max);
    negative.truncate(m_max);
    Spectrum {
        positive_exhausted: positive.len() < m_max,
        negative_exhausted: negative.len() < m_max,
        positive,
        negative,
        window: lambda_max,
        method: Method::Galerkin,
        bc,
        multiplicity_suspected: Vec::new(),
    }
}

/// `∫∫ P(max(t, s))² dt ds = 2 ∫ t P(t)² dt`, the squared Hilbert–Schmidt norm
/// of the multiplier for the free right end.
pub fn hs_norm_sq<T: Real>(rho: &SignedMeasure<T>) -> T {
    T::two() * rho.primitive().moment_sq()
}

/// Trace of the multiplier: `∫t dρ` (Neumann) or `∫t(1-t) dρ` (Dirichlet).
pub fn trace<T: Real>(rho: &SignedMeasure<T>, bc: BoundaryCondition) -> T {
    match bc {
        BoundaryCondition::Neumann => rho.first_moment(),
        BoundaryCondition::Dirichlet => rho.pinned_moment(),
    }
}

pub const DEFAULT_GALERKIN_SIZE: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuclearReport {
    /// `Σ_{m≤M} 1/λ⁺_m`, one entry per M
    pub positive_partial: Vec<f64>,
    /// `Σ_{m≤M} 1/λ⁻_m`
    pub negative_partial: Vec<f64>,
    /// `Σ_{m≤M} (1/λ⁺_m + 1/|λ⁻_m|)` with zero-padding for the shorter side
    pub absolute_partial: Vec<f64>,
    pub signed_sum: f64,
    pub absolute_sum: f64,
    pub trace: f64,
    pub galerkin_trace: f64,
    pub galerkin_size: usize,
    pub hs_norm_sq: f64,
    pub hs_partial: f64,
    pub positive_found: usize,
    pub negative_found: usize,
    pub non_nuclear_evidence: bool,
}

/// Partial sums of reciprocal eigenvalues against trace and Hilbert–Schmidt references.
///
/// The evidence flag is raised when the absolute partial sums keep growing at
/// a non-decaying rate over the last two doublings of `M` while the sum of
/// squares stays below the Hilbert–Schmidt norm.
pub fn nuclear_diagnostics<T: Real>(
    rho: &SignedMeasure<T>,
    bc: BoundaryCondition,
    m_max: usize,
    lambda_max: T,
) -> Result<NuclearReport> {
    let spec = find_eigenvalues(rho, bc, m_max, lambda_max)?;
    let pos: Vec<f64> = spec.positive.iter().map(|l| l.as_f64()).collect();
    let neg: Vec<f64> = spec.negative.iter().map(|l| l.as_f64()).collect();
    let len = pos.len().max(neg.len());
    let mut positive_partial = Vec::with_capacity(len);
    let mut negative_partial = Vec::with_capacity(len);
    let mut absolute_partial = Vec::with_capacity(len);
    let (mut sp, mut sn) = (0.0, 0.0);
    for m in 0..len {
        sp += pos.get(m).map_or(0.0, |l| 1.0 / l);
        sn += neg.get(m).map_or(0.0, |l| 1.0 / l);
        positive_partial.push(sp);
        negative_partial.push(sn);
        absolute_partial.push(sp - sn);
    }
    let hs_partial: f64 = pos.iter().chain(&neg).map(|l| 1.0 / (l * l)).sum();
    let galerkin_size = DEFAULT_GALERKIN_SIZE;
    let r = galerkin_matrix(rho, galerkin_size, bc);
    let hs = match bc {
        BoundaryCondition::Neumann => hs_norm_sq(rho).as_f64(),
        BoundaryCondition::Dirichlet => r.frobenius_sq().as_f64(),
    };
    let evidence = {
        let a = &absolute_partial;
        let m = a.len();
        if m >= 8 {
            let inc_last = a[m - 1] - a[m / 2 - 1];
            let inc_prev = a[m / 2 - 1] - a[m / 4 - 1];
            inc_last > 0.0 && inc_last >= 0.75 * inc_prev && hs_partial <= hs * (1.0 + 1e-9) + 1e-15
        } else {
            false
        }
    };
    Ok(NuclearReport {
        signed_sum: sp + sn,
        absolute_sum: sp - sn,
        positive_partial,
        negative_partial,
        absolute_partial,
        trace: trace(rho, bc).as_f64(),
        galerkin_trace: r.trace().as_f64(),
        galerkin_size,
        hs_norm_sq: hs,
        hs_partial,
        positive_found: pos.len(),
        negative_found: neg.len(),
        non_nuclear_evidence: evidence,
    })
}
