//! Sine bases of the energy space, the coefficient matrices `r_ij(ρ) = ∫ρ φ_i φ_j`,
//! Karhunen–Loève path simulation and the truncated double series for `∫ρ·W² dt`.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::measure::SignedMeasure;
use crate::report::fmt_f64;
use crate::sampling::{Domain, NormalStream};
use crate::scalar::Real;

pub const DEFAULT_MODES: usize = 512;

/// Orthonormal basis `φ_k(x) = √2 sin(ω_k x) / ω_k` of functions with `φ(0) = 0`
/// in the norm `‖φ'‖_{L²}`.
///
/// `ω_k = π(k + ½)` gives the Karhunen–Loève basis of the Wiener process (free
/// right end); `ω_k = π(k + 1)` pins the right end to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SineBasis {
    Wiener,
    Pinned,
}

impl SineBasis {
    /// Twice the frequency offset; `ω_k = π(k + shift2/2)`.
    #[inline]
    fn shift2(self) -> usize {
        match self {
            SineBasis::Wiener => 1,
            SineBasis::Pinned => 2,
        }
    }

    #[inline]
    pub fn freq<T: Real>(self, k: usize) -> T {
        T::PI() * T::from_usize_exact(2 * k + self.shift2()) * T::half()
    }

    #[inline]
    pub fn eval<T: Real>(self, k: usize, x: T) -> T {
        let w = self.freq::<T>(k);
        T::SQRT_2() * (w * x).sin() / w
    }

    #[inline]
    pub fn deriv<T: Real>(self, k: usize, x: T) -> T {
        T::SQRT_2() * (self.freq::<T>(k) * x).cos()
    }

    /// `(φ_0(x), …, φ_{K-1}(x))`
    pub fn values<T: Real>(self, modes: usize, x: T) -> Vec<T> {
        (0..modes).map(|k| self.eval(k, x)).collect()
    }

    /// Galerkin matrix `∫ρ φ_i φ_j` on the first `modes` functions, in closed form.
    pub fn coeff_matrix<T: Real>(self, rho: &SignedMeasure<T>, modes: usize) -> SymMatrix<T> {
        let mut r = SymMatrix::zeros(modes);
        let freqs: Vec<T> = (0..modes).map(|k| self.freq(k)).collect();
        let s2 = self.shift2();
        let top = 2 * modes + s2;
        let mut sin_diff = vec![T::zero(); top + 1];
        for (a, b, c) in rho.density_pieces() {
            if c.is_zero() {
                continue;
            }
            // ∫_a^b cos(π m x) dx for every integer m that occurs
            for (m, slot) in sin_diff.iter_mut().enumerate() {
                *slot = if m == 0 {
                    b - a
                } else {
                    let pm = T::PI() * T::from_usize_exact(m);
                    ((pm * b).sin() - (pm * a).sin()) / pm
                };
            }
            for i in 0..modes {
                for j in i..modes {
                    // 2 sin(ω_i x) sin(ω_j x) = cos(π(i-j)x) - cos(π(i+j+s2)x)
                    let v = c * (sin_diff[j - i] - sin_diff[i + j + s2]) / (freqs[i] * freqs[j]);
                    r.set_sym(i, j, r.get(i, j) + v);
                }
            }
        }
        for atom in rho.atoms() {
            if atom.x.is_zero() {
                continue;
            }
            let phi = self.values(modes, atom.x);
            r.add_scaled_outer(atom.w, &phi);
        }
        r
    }

    /// `r_kk` through the primitive: `r_kk = -(2/ω_k) ∫ P(x) sin(2ω_k x) dx`.
    pub fn diag_coeff_via_primitive<T: Real>(self, rho: &SignedMeasure<T>, k: usize) -> T {
        let w = self.freq::<T>(k);
        let beta = T::two() * w;
        let integral: T = rho
            .primitive()
            .pieces()
            .map(|(a, b, p, q)| {
                // P = p + q (x - a) on [a, b)
                let pb = p + q * (b - a);
                -(pb * (beta * b).cos() - p * (beta * a).cos()) / beta
                    + q * ((beta * b).sin() - (beta * a).sin()) / (beta * beta)
            })
            .sum();
        -T::two() / w * integral
    }
}

/// `f_k(x) = √8 sin(π(k+½)x) / (π(2k+1))`.
pub fn basis_eval<T: Real>(k: usize, x: T) -> T {
    SineBasis::Wiener.eval(k, x)
}

/// `f_k'(x) = √2 cos(π(k+½)x)`.
pub fn basis_deriv<T: Real>(k: usize, x: T) -> T {
    SineBasis::Wiener.deriv(k, x)
}

/// `Σ_{k<K} f_k(t) f_k(s)`, which tends to `min(t, s)`.
pub fn kernel_partial_sum<T: Real>(modes: usize, t: T, s: T) -> T {
    (0..modes).map(|k| basis_eval(k, t) * basis_eval(k, s)).sum()
}

/// Wiener-basis coefficient matrix `r_ij(ρ)`, `0 ≤ i, j < modes`.
pub fn coeff_matrix<T: Real>(rho: &SignedMeasure<T>, modes: usize) -> SymMatrix<T> {
    SineBasis::Wiener.coeff_matrix(rho, modes)
}

pub fn diag_coeff_via_primitive<T: Real>(rho: &SignedMeasure<T>, k: usize) -> T {
    SineBasis::Wiener.diag_coeff_via_primitive(rho, k)
}

/// Standard-normal coordinates `ξ_k` for a batch of paths.
///
/// Rows are regenerated on demand from the counter-based stream, so a large
/// ensemble costs no memory until it is materialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleEnsemble {
    stream: NormalStream,
    draws: usize,
    modes: usize,
}

pub fn sample_normals(seed: u64, draws: usize, modes: usize) -> Result<SampleEnsemble> {
    if draws == 0 || modes == 0 {
        return Err(Error::InvalidArgument(
            "ensemble needs at least one draw and one mode".into(),
        ));
    }
    Ok(SampleEnsemble {
        stream: NormalStream::new(seed, Domain::KlModes),
        draws,
        modes,
    })
}

impl SampleEnsemble {
    pub fn seed(&self) -> u64 {
        self.stream.seed()
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn row(&self, draw: usize) -> Vec<f64> {
        self.stream.draw(draw as u64, self.modes)
    }

    /// Full `draws × modes` matrix.
    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.map_rows(|_, xi| xi.to_vec())
    }

    pub fn map_rows<R, F>(&self, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize, &[f64]) -> R + Sync,
    {
        self.stream.par_map(self.draws, self.modes, f)
    }
}

/// Truncated Karhunen–Loève paths `Σ_k f_k(t) ξ_k`, one row per draw.
pub fn path_values(ens: &SampleEnsemble, grid: &[f64]) -> Vec<Vec<f64>> {
    let basis: Vec<Vec<f64>> = grid
        .iter()
        .map(|&t| SineBasis::Wiener.values(ens.modes(), t))
        .collect();
    ens.map_rows(|_, xi| {
        basis
            .iter()
            .map(|phi| phi.iter().zip(xi).map(|(a, b)| a * b).sum())
            .collect()
    })
}

pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|i| i as f64 / (points - 1) as f64).collect(),
    }
}

/// `ξᵀRξ` split into a dense density block and rank-one atom terms.
struct QuadraticForm {
    dense: Option<SymMatrix<f64>>,
    atoms: Vec<(f64, Vec<f64>)>,
}

impl QuadraticForm {
    fn new(rho: &SignedMeasure<f64>, modes: usize) -> Self {
        let dense = if rho.has_density() {
            let d = SignedMeasure::new(Vec::new(), rho.density().clone())
                .expect("density of a valid measure");
            Some(coeff_matrix(&d, modes))
        } else {
            None
        };
        let atoms = rho
            .atoms()
            .iter()
            .filter(|a| a.x > 0.0)
            .map(|a| (a.w, SineBasis::Wiener.values(modes, a.x)))
            .collect();
        Self { dense, atoms }
    }

    fn eval(&self, xi: &[f64]) -> f64 {
        let dense = self.dense.as_ref().map_or(0.0, |r| r.quadratic_form(xi));
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|(w, phi)| {
                let s: f64 = phi.iter().zip(xi).map(|(a, b)| a * b).sum();
                w * s * s
            })
            .sum();
        dense + atoms
    }
}

fn check_cutoff(ens: &SampleEnsemble, cutoff: usize) -> Result<usize> {
    let needed = cutoff + 1;
    if needed > ens.modes() {
        return Err(Error::CutoffExceedsModes {
            cutoff,
            needed,
            modes: ens.modes(),
        });
    }
    Ok(needed)
}

/// `τ_{ρ,n} = Σ_{k,l ≤ n} r_kl(ρ) ξ_k ξ_l` for every draw.
pub fn tau_truncated(rho: &SignedMeasure<f64>, ens: &SampleEnsemble, cutoff: usize) -> Result<Vec<f64>> {
    let modes = check_cutoff(ens, cutoff)?;
    if rho.is_zero() {
        return Ok(vec![0.0; ens.draws()]);
    }
    let q = QuadraticForm::new(rho, modes);
    Ok(ens.map_rows(|_, xi| q.eval(&xi[..modes])))
}

/// Diagonal part `Σ r_ii ξ_i²` and off-diagonal part `Σ_{i≠j} r_ij ξ_i ξ_j` per draw.
pub fn tau_split(
    rho: &SignedMeasure<f64>,
    ens: &SampleEnsemble,
    cutoff: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let modes = check_cutoff(ens, cutoff)?;
    let r = coeff_matrix(rho, modes);
    let pairs: Vec<(f64, f64)> = ens.map_rows(|_, xi| {
        let mut diag = 0.0;
        let mut off = 0.0;
        for i in 0..modes {
            let row = r.row(i);
            diag += row[i] * xi[i] * xi[i];
            let mut s = 0.0;
            for j in (i + 1)..modes {
                s += row[j] * xi[j];
            }
            off += 2.0 * xi[i] * s;
        }
        (diag, off)
    });
    Ok(pairs.into_par_iter().unzip())
}

/// CSV with columns `draw,value`.
pub fn write_values_csv<W: Write>(mut out: W, values: &[f64]) -> std::io::Result<()> {
    writeln!(out, "draw,value")?;
    for (p, v) in values.iter().enumerate() {
        writeln!(out, "{},{}", p, fmt_f64(*v))?;
    }
    Ok(())
}

/// CSV with columns `draw,t,value`.
pub fn write_paths_csv<W: Write>(mut out: W, grid: &[f64], paths: &[Vec<f64>]) -> std::io::Result<()> {
    writeln!(out, "draw,t,value")?;
    for (p, row) in paths.iter().enumerate() {
        for (t, v) in grid.iter().zip(row) {
            writeln!(out, "{},{},{}", p, fmt_f64(*t), fmt_f64(*v))?;
        }
    }
    Ok(())
}
