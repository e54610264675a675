//! The law of `τ_ρ = ∫ρ ξ² dt` as a weighted chi-square series
//! `Σ w_n ζ_n²` with `w_n = 1/λ_n`, its moments, Monte Carlo sampling and
//! the distribution function.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nuclear_norm, SymMatrix};
use crate::measure::{m_norm_sq, SignedMeasure};
use crate::sampling::{mean_and_se, Domain, NormalStream};
use crate::spectral::{galerkin_matrix, hs_norm_sq, trace, BoundaryCondition, Spectrum, DEFAULT_GALERKIN_SIZE};

/// Weights below this fraction of the largest one are dropped.
pub const RELATIVE_CUT: f64 = 1e-8;
pub const MAX_TERMS: usize = 5000;

/// Truncated chi-square series `Σ w_n ζ_n² + tail_trace`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareSeries {
    /// ordered by decreasing `|w|`
    pub weights: Vec<f64>,
    /// deterministic shift restoring the exact mean
    pub tail_trace: f64,
    /// variance missing from the truncation, `2(‖·‖²_HS - Σw²)`, not added
    pub tail_variance: f64,
    /// number of eigenvalues offered before truncation
    pub offered: usize,
}

impl ChiSquareSeries {
    /// Series with explicit weights and no tail.
    pub fn from_weights(mut weights: Vec<f64>) -> Self {
        weights.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
        let offered = weights.len();
        Self {
            weights,
            tail_trace: 0.0,
            tail_variance: 0.0,
            offered,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Weights `1/λ` for the eigenvalues of `spec`, truncated, with the trace of
/// the weight measure used to fix the mean.
pub fn series_from_spectrum(spec: &Spectrum<f64>, rho: &SignedMeasure<f64>) -> Result<ChiSquareSeries> {
    if !spec.multiplicity_suspected.is_empty() {
        return Err(Error::MultiplicitySuspected);
    }
    if spec.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if spec.all().any(|l| l == 0.0) {
        return Err(Error::ZeroEigenvalue);
    }
    let mut weights: Vec<f64> = spec.all().map(|l| 1.0 / l).collect();
    weights.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
    let offered = weights.len();
    let lead = weights[0].abs();
    let keep = weights
        .iter()
        .position(|w| w.abs() < RELATIVE_CUT * lead)
        .unwrap_or(offered)
        .min(MAX_TERMS);
    weights.truncate(keep);
    let hs = match spec.bc {
        BoundaryCondition::Neumann => hs_norm_sq(rho),
        BoundaryCondition::Dirichlet => galerkin_matrix(rho, DEFAULT_GALERKIN_SIZE, spec.bc).frobenius_sq(),
    };
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    Ok(ChiSquareSeries {
        tail_trace: trace(rho, spec.bc) - weights.iter().sum::<f64>(),
        tail_variance: (2.0 * (hs - sum_sq)).max(0.0),
        offered,
        weights,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    pub second_moment: f64,
    /// 0 for analytic summaries
    pub sample_size: usize,
    pub mean_se: Option<f64>,
    pub second_moment_se: Option<f64>,
}

impl MomentSummary {
    fn analytic(mean: f64, second_moment: f64) -> Self {
        Self {
            mean,
            variance: (second_moment - mean * mean).max(0.0),
            second_moment,
            sample_size: 0,
            mean_se: None,
            second_moment_se: None,
        }
    }

    /// Sample moments with standard errors of the mean and of the second moment.
    pub fn from_sample(xs: &[f64]) -> Self {
        let (mean, mean_se) = mean_and_se(xs);
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let (second_moment, second_se) = mean_and_se(&sq);
        let n = xs.len() as f64;
        let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        Self {
            mean,
            variance,
            second_moment,
            sample_size: xs.len(),
            mean_se: Some(mean_se),
            second_moment_se: Some(second_se),
        }
    }

    /// Whether `mean` and `second_moment` lie within `k` standard errors of `other`.
    pub fn agrees_with(&self, other: &MomentSummary, k: f64) -> bool {
        let close = |a: f64, b: f64, se: f64| (a - b).abs() <= k * se;
        match (self.mean_se, self.second_moment_se) {
            (Some(ms), Some(ss)) => close(self.mean, other.mean, ms) && close(self.second_moment, other.second_moment, ss),
            _ => false,
        }
    }
}

/// Mean `Σw + shift`, variance `2Σw²`.
pub fn analytic_moments(series: &ChiSquareSeries) -> MomentSummary {
    let mean = series.weight_sum() + series.tail_trace;
    let var = 2.0 * series.weights.iter().map(|w| w * w).sum::<f64>();
    MomentSummary::analytic(mean, var + mean * mean)
}

/// Mean `∫t dρ` and second moment `‖ρ‖²_M` straight from the measure.
pub fn measure_moments(rho: &SignedMeasure<f64>) -> MomentSummary {
    MomentSummary::analytic(rho.first_moment(), m_norm_sq(rho))
}

/// One value of the series per draw.
pub fn sample_series(series: &ChiSquareSeries, draws: usize, seed: u64) -> Vec<f64> {
    let stream = NormalStream::new(seed, Domain::Series);
    let w = &series.weights;
    stream.par_map(draws, w.len(), |_, z| {
        w.iter().zip(z).map(|(w, z)| w * z * z).sum::<f64>() + series.tail_trace
    })
}

/// Asymptotic two-sample Kolmogorov–Smirnov constant at level 0.01.
pub const KS_C_001: f64 = 1.6276;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub sizes: (usize, usize),
}

pub fn compare_laws(a: &[f64], b: &[f64]) -> Result<KsReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (m, n) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < m && j < n {
        let v = xs[i].min(ys[j]);
        while i < m && xs[i] <= v {
            i += 1;
        }
        while j < n && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / m as f64 - j as f64 / n as f64).abs());
    }
    let (mf, nf) = (m as f64, n as f64);
    let threshold = KS_C_001 * ((mf + nf) / (mf * nf)).sqrt();
    Ok(KsReport {
        statistic: d,
        threshold,
        pass: d < threshold,
        sizes: (m, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuclearBoundReport {
    /// `sqrt((tr R)² + 2‖R‖²_F)`, the L² norm of `ζᵀRζ`
    pub lhs: f64,
    pub nuclear_norm: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn nuclear_bound_check(r: &SymMatrix<f64>) -> NuclearBoundReport {
    let tr = r.trace();
    let lhs = (tr * tr + 2.0 * r.frobenius_sq()).sqrt();
    let nn = nuclear_norm(r);
    let bound = (3f64.sqrt() + 2f64.sqrt()) * nn;
    NuclearBoundReport {
        lhs,
        nuclear_norm: nn,
        bound,
        holds: lhs <= bound * (1.0 + 1e-12),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HsIdentityReport {
    /// `E[(ζᵀRζ)²]` computed from the Gaussian moment identity
    pub analytic: f64,
    pub frobenius_sq: f64,
    pub empirical: f64,
    pub empirical_se: f64,
    pub draws: usize,
    pub within_3se: bool,
}

/// `E[(Σ_{i≠j} R_ij ζ_i ζ_j)²] = 2‖R‖²_F` for a zero-diagonal `R`.
pub fn hs_identity_check(r: &SymMatrix<f64>, draws: usize, seed: u64) -> Result<HsIdentityReport> {
    if let Some((i, v)) = r.diagonal().into_iter().enumerate().find(|(_, v)| *v != 0.0) {
        return Err(Error::NonzeroDiagonal { index: i, value: v });
    }
    let fro = r.frobenius_sq();
    let tr = r.trace();
    let analytic = tr * tr + 2.0 * fro;
    let stream = NormalStream::new(seed, Domain::Generic);
    let sq = stream.par_map(draws, r.dim(), |_, z| r.quadratic_form(z).powi(2));
    let (empirical, se) = mean_and_se(&sq);
    Ok(HsIdentityReport {
        analytic,
        frobenius_sq: fro,
        empirical,
        empirical_se: se,
        draws,
        within_3se: draws > 1 && (empirical - analytic).abs() <= 3.0 * se.max(f64::MIN_POSITIVE),
    })
}

// 10-point Gauss–Legendre nodes and weights on [-1, 1]
const GL_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for k in 0..5 {
        s += GL_W[k] * (f(c - h * GL_X[k]) + f(c + h * GL_X[k]));
    }
    s * h
}

// Last even column of Wynn's epsilon table for the given partial sums.
fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = *s.last().unwrap();
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                return best;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 {
            best = *cur.last().unwrap();
        }
    }
    best
}

// Weights sorted by decreasing magnitude; those with |w u| below SMALL are
// handled through power sums of the tail.
struct Integrand {
    w: Vec<f64>,
    y: f64,
    // suffix sums of w, w², w³, w⁴
    s: [Vec<f64>; 4],
    // log of the prefix bound factors Π_{j<k} |w_j|^{-1/2}
    log_prefix: Vec<f64>,
    abs_sum: f64,
}

const SMALL: f64 = 1e-3;

impl Integrand {
    fn new(w: Vec<f64>, y: f64) -> Self {
        let n = w.len();
        let mut s: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; n + 1]);
        for j in (0..n).rev() {
            let mut p = 1.0;
            for sk in s.iter_mut() {
                p *= w[j];
                sk[j] = sk[j + 1] + p;
            }
        }
        let mut log_prefix = Vec::with_capacity(n + 1);
        log_prefix.push(0.0);
        for v in &w {
            log_prefix.push(log_prefix.last().unwrap() - 0.5 * v.abs().ln());
        }
        let abs_sum = w.iter().map(|v| v.abs()).sum();
        Self {
            w,
            y,
            s,
            log_prefix,
            abs_sum,
        }
    }

    fn split(&self, u: f64) -> usize {
        self.w.partition_point(|v| v.abs() * u >= SMALL)
    }

    fn eval(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 0.5 * (self.s[0][0] - self.y);
        }
        let k = self.split(u);
        let mut theta = -0.5 * self.y * u;
        let mut log_rho = 0.0;
        for &w in &self.w[..k] {
            let wu = w * u;
            theta += 0.5 * wu.atan();
            log_rho += 0.25 * (wu * wu).ln_1p();
        }
        let (u2, u3, u4) = (u * u, u * u * u, u * u * u * u);
        theta += 0.5 * (u * self.s[0][k] - u3 * self.s[2][k] / 3.0);
        log_rho += 0.25 * (u2 * self.s[1][k] - 0.5 * u4 * self.s[3][k]);
        theta.sin() / (u * log_rho.exp())
    }

    // bound on the phase derivative from u onward
    fn phase_speed(&self, u: f64) -> f64 {
        let k = self.split(u);
        let head: f64 = self.w[..k].iter().map(|w| w.abs() / (1.0 + w * w * u * u)).sum();
        let tail: f64 = self.abs_sum - self.w[..k].iter().map(|w| w.abs()).sum::<f64>();
        0.5 * (head + tail.max(0.0)) + 0.5 * self.y.abs()
    }

    // ∫_U^∞ 1/(u ρ(u)) du ≤ (2/k) U^{-k/2} Π_{j<k}|w_j|^{-1/2} for every k ≥ 1;
    // the logarithm is convex in k, so the scan stops at its minimum
    fn tail_bound(&self, u: f64) -> f64 {
        let lu = u.ln();
        let mut best = f64::INFINITY;
        for k in 1..=self.w.len() {
            let kf = k as f64;
            let v = (2.0 / kf).ln() - 0.5 * kf * lu + self.log_prefix[k];
            if v > best {
                break;
            }
            best = v;
        }
        best.exp()
    }
}

/// `P(Σ w ζ² + tail_trace ≤ x)` by numerical inversion of the characteristic
/// function.
///
/// The inversion integral is summed over Gauss–Legendre panels whose width
/// grows geometrically but never exceeds half of the local phase period.
/// Once the phase is dominated by its linear part the remainder is summed over
/// half periods and extrapolated with Wynn's epsilon algorithm; otherwise the
/// integration stops when the absolute tail bound drops below `1e-10`.
pub fn cdf(series: &ChiSquareSeries, x: f64) -> Result<f64> {
    let mut nz: Vec<f64> = series.weights.iter().copied().filter(|w| *w != 0.0).collect();
    if nz.is_empty() {
        return Err(Error::DegenerateWeights);
    }
    nz.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
    let scale = nz[0].abs();
    let w: Vec<f64> = nz.iter().map(|v| v / scale).collect();
    let y = (x - series.tail_trace) / scale;
    if w.iter().all(|v| *v > 0.0) && y <= 0.0 {
        return Ok(0.0);
    }
    if w.iter().all(|v| *v < 0.0) && y >= 0.0 {
        return Ok(1.0);
    }
    let g = Integrand::new(w, y);
    let f = |u: f64| g.eval(u);
    const TOL: f64 = 1e-10;
    const MAX_PANELS: usize = 2_000_000;
    let mut u: f64 = 0.0;
    let mut total = 0.0;
    let mut panels = 0;
    let linear_phase = |u: f64| y != 0.0 && g.phase_speed(u) - 0.5 * y.abs() <= 0.05 * y.abs();
    loop {
        if g.tail_bound(u.max(1e-300)) < TOL && u > 0.0 {
            return Ok((0.5 - total / std::f64::consts::PI).clamp(0.0, 1.0));
        }
        if u > 0.0 && linear_phase(u) {
            break;
        }
        let h = u.max(0.25).min(std::f64::consts::PI / g.phase_speed(u));
        total += gauss_legendre(&f, u, u + h);
        u += h;
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::IterationCap(MAX_PANELS));
        }
    }
    // half periods of the asymptotic phase
    let half = 2.0 * std::f64::consts::PI / y.abs();
    let mut partial = vec![total];
    let mut last_est = f64::NAN;
    for k in 0..400 {
        let mut s = 0.0;
        for q in 0..2 {
            let a = u + half * q as f64 / 2.0;
            s += gauss_legendre(&f, a, a + half / 2.0);
        }
        u += half;
        total += s;
        partial.push(total);
        if g.tail_bound(u) < TOL {
            return Ok((0.5 - total / std::f64::consts::PI).clamp(0.0, 1.0));
        }
        if k >= 8 && k % 2 == 0 {
            let window = &partial[partial.len().saturating_sub(21)..];
            let est = wynn_epsilon(window);
            if (est - last_est).abs() < 1e-12 {
                return Ok((0.5 - est / std::f64::consts::PI).clamp(0.0, 1.0));
            }
            last_est = est;
        }
    }
    Ok((0.5 - last_est / std::f64::consts::PI).clamp(0.0, 1.0))
}

/// CDF on `points` equally spaced abscissae spanning `mean ± 6 sd` widened by
/// 24 times the extreme weight on each side (clipped at the support).
pub fn cdf_grid(series: &ChiSquareSeries, points: usize) -> Result<Vec<(f64, f64)>> {
    let m = analytic_moments(series);
    let sd = m.variance.sqrt();
    let top = series.weights.iter().fold(0.0f64, |a, w| a.max(*w));
    let bottom = series.weights.iter().fold(0.0f64, |a, w| a.min(*w));
    let mut lo = m.mean - 6.0 * sd + 24.0 * bottom;
    let mut hi = m.mean + 6.0 * sd + 24.0 * top;
    if series.weights.iter().all(|w| *w >= 0.0) {
        lo = lo.max(series.tail_trace);
    }
    if series.weights.iter().all(|w| *w <= 0.0) {
        hi = hi.min(series.tail_trace);
    }
    let n = points.max(2);
    (0..n)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            cdf(series, x).map(|p| (x, p))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::find_eigenvalues;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_series_weights_and_moments() {
        let rho = SignedMeasure::uniform(1.0);
        let spec = find_eigenvalues(&rho, BoundaryCondition::Neumann, 2000, 1e9).unwrap();
        let s = series_from_spectrum(&spec, &rho).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        for (m, w) in s.weights.iter().take(5).enumerate() {
            assert_relative_eq!(*w, 1.0 / (pi2 * (m as f64 + 0.5).powi(2)), max_relative = 1e-10);
        }
        let a = analytic_moments(&s);
        assert_relative_eq!(a.mean, 0.5, epsilon = 1e-12);
        assert_relative_eq!(a.variance, 1.0 / 3.0, epsilon = 1e-6);
        let b = measure_moments(&rho);
        assert_relative_eq!(b.second_moment, 7.0 / 12.0, epsilon = 1e-14);
        assert!(s.tail_variance < 1e-6);
    }

    #[test]
    fn two_atom_series() {
        let rho = SignedMeasure::from_atoms([(0.5, 1.0), (0.75, -1.0)]).unwrap();
        let spec = find_eigenvalues(&rho, BoundaryCondition::Neumann, 10, 1e6).unwrap();
        let s = series_from_spectrum(&spec, &rho).unwrap();
        assert_eq!(s.len(), 2);
        assert_relative_eq!(s.weights[0], -0.5, max_relative = 1e-12);
        assert_relative_eq!(s.weights[1], 0.25, max_relative = 1e-12);
        assert!(s.tail_trace.abs() < 1e-12);
        let a = analytic_moments(&s);
        assert_relative_eq!(a.mean, -0.25, epsilon = 1e-12);
        assert_relative_eq!(a.second_moment, 11.0 / 16.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_and_multiple_spectra_are_refused() {
        let rho = SignedMeasure::<f64>::zero();
        let spec = find_eigenvalues(&rho, BoundaryCondition::Neumann, 3, 10.0).unwrap();
        assert!(matches!(series_from_spectrum(&spec, &rho), Err(Error::EmptySpectrum)));
        let mut spec = find_eigenvalues(&SignedMeasure::uniform(1.0), BoundaryCondition::Neumann, 3, 100.0).unwrap();
        spec.multiplicity_suspected.push(5.0);
        assert!(matches!(
            series_from_spectrum(&spec, &SignedMeasure::uniform(1.0)),
            Err(Error::MultiplicitySuspected)
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_empty_series_gives_zeros() {
        let s = ChiSquareSeries::from_weights(vec![0.25, -0.5]);
        assert_eq!(sample_series(&s, 100, 3), sample_series(&s, 100, 3));
        let e = ChiSquareSeries::from_weights(vec![]);
        assert!(sample_series(&e, 10, 0).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn ks_identical_samples() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let r = compare_laws(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass);
        let b: Vec<f64> = a.iter().map(|v| v + 50.0).collect();
        assert!(!compare_laws(&a, &b).unwrap().pass);
        assert!(matches!(compare_laws(&[], &a), Err(Error::EmptySample)));
    }

    #[test]
    fn nuclear_bound_on_identity() {
        let r = nuclear_bound_check(&SymMatrix::identity(1));
        assert_relative_eq!(r.lhs, 3f64.sqrt(), epsilon = 1e-15);
        assert!(r.holds);
    }

    #[test]
    fn hs_identity_two_by_two() {
        let r = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let rep = hs_identity_check(&r, 20000, 1).unwrap();
        assert_eq!(rep.analytic, 4.0);
        assert!(rep.within_3se, "{rep:?}");
        let bad = SymMatrix::identity(2);
        assert!(matches!(hs_identity_check(&bad, 10, 0), Err(Error::NonzeroDiagonal { .. })));
        let z = hs_identity_check(&SymMatrix::zeros(3), 10, 0).unwrap();
        assert_eq!(z.analytic, 0.0);
        assert_eq!(z.empirical, 0.0);
    }

    #[test]
    fn cdf_chi_square_one() {
        let s = ChiSquareSeries::from_weights(vec![1.0]);
        assert_relative_eq!(cdf(&s, 1.0).unwrap(), 0.682_689_492_137_086, epsilon = 1e-8);
        assert_relative_eq!(cdf(&s, 4.0).unwrap(), 0.954_499_736_103_642, epsilon = 1e-8);
        assert_eq!(cdf(&s, -1.0).unwrap(), 0.0);
        let a = ChiSquareSeries::from_weights(vec![2.5]);
        assert_relative_eq!(cdf(&a, 2.5).unwrap(), 0.682_689_492_137_086, epsilon = 1e-8);
        assert!(matches!(cdf(&ChiSquareSeries::from_weights(vec![0.0]), 1.0), Err(Error::DegenerateWeights)));
    }

    #[test]
    fn cdf_chi_square_two_is_exponential() {
        let s = ChiSquareSeries::from_weights(vec![1.0, 1.0]);
        for x in [0.1, 1.0, 3.0, 10.0] {
            assert_relative_eq!(cdf(&s, x).unwrap(), 1.0 - (-x / 2.0f64).exp(), epsilon = 1e-8);
        }
    }

    #[test]
    fn cdf_of_difference_is_symmetric() {
        // ζ₁² - ζ₂² is symmetric about zero
        let s = ChiSquareSeries::from_weights(vec![1.0, -1.0]);
        assert_relative_eq!(cdf(&s, 0.0).unwrap(), 0.5, epsilon = 1e-8);
        let p = cdf(&s, 1.3).unwrap();
        let q = cdf(&s, -1.3).unwrap();
        assert_relative_eq!(p + q, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn cdf_of_long_series_is_monotone_with_limits() {
        let rho = SignedMeasure::uniform(1.0);
        let spec = find_eigenvalues(&rho, BoundaryCondition::Neumann, 2000, 1e9).unwrap();
        let s = series_from_spectrum(&spec, &rho).unwrap();
        let grid = cdf_grid(&s, 60).unwrap();
        for w in grid.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-6, "{w:?}");
        }
        assert!(grid[0].1 < 1e-4);
        assert!(grid.last().unwrap().1 > 1.0 - 1e-4);
    }
}
