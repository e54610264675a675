//! Comb measures whose spectra keep `Σ|1/λ_m|` from converging.
//!
//! `ρ_n` alternates `+δ` and `-δ` on a grid of step `1/(2n)`; its Dirichlet
//! eigenvalues satisfy `λ_{m,n} < 2πm`. `ρ_{N,n}` is the same comb squeezed
//! into `(2^{-N}, 2^{-N+1}]`, and `ρ_ν = Σ_N ρ_{N,ν_N}` stacks them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{Atom, Density, SignedMeasure};
use crate::spectral::{limit_omega, BoundaryCondition, EigenProblem};

/// `Σ_{k=1}^n (δ_{(k-½)/n} - δ_{k/n})`
pub fn rho_comb(n: usize) -> SignedMeasure<f64> {
    assert!(n >= 1, "comb needs at least one tooth");
    let nf = n as f64;
    let atoms = (1..=n)
        .flat_map(|k| {
            let k = k as f64;
            [Atom { x: (k - 0.5) / nf, w: 1.0 }, Atom { x: k / nf, w: -1.0 }]
        })
        .collect();
    SignedMeasure::new(atoms, Density::zero()).expect("comb atoms are valid")
}

/// `Σ_{k=1}^n (δ_{(n+k-½)/(2^N n)} - δ_{(n+k)/(2^N n)})`
pub fn rho_scaled(big_n: u32, n: usize) -> SignedMeasure<f64> {
    assert!(big_n >= 1 && n >= 1, "levels and teeth start at 1");
    SignedMeasure::new(scaled_atoms(big_n, n), Density::zero()).expect("comb atoms are valid")
}

fn scaled_atoms(big_n: u32, n: usize) -> Vec<Atom<f64>> {
    let d = (n as f64) * 2f64.powi(big_n as i32);
    let nf = n as f64;
    (1..=n)
        .flat_map(|k| {
            let k = k as f64;
            [
                Atom { x: (nf + k - 0.5) / d, w: 1.0 },
                Atom { x: (nf + k) / d, w: -1.0 },
            ]
        })
        .collect()
}

/// `Σ_{N=1}^{len} ρ_{N, ν_N}`
pub fn rho_nu(nu: &[usize]) -> SignedMeasure<f64> {
    let atoms = nu
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| scaled_atoms(i as u32 + 1, n))
        .collect();
    SignedMeasure::new(atoms, Density::zero()).expect("comb atoms are valid")
}

/// Closed-form positive Dirichlet eigenvalues of `ρ_n`: `4n sin(jπ/(2n))`, `j < n`, then `4n`.
pub fn comb_eigenvalues_exact(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=n).map(|j| 4.0 * nf * (j as f64 * PI / (2.0 * nf)).sin()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CombRow {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub gap_to_2pim: f64,
}

/// First `m_max` positive Dirichlet eigenvalues of `ρ_n` for every `n`.
pub fn comb_eigenvalue_table(n_list: &[usize], m_max: usize) -> Result<Vec<CombRow>> {
    let per_n: Vec<Result<Vec<CombRow>>> = n_list
        .par_iter()
        .map(|&n| {
            let p = EigenProblem::new(&rho_comb(n), BoundaryCondition::Dirichlet);
            let spec = p.eigenvalues(m_max, 2.0 * PI * (m_max as f64 + 1.0))?;
            Ok(spec
                .positive
                .iter()
                .enumerate()
                .map(|(i, &lambda)| CombRow {
                    n,
                    m: i + 1,
                    lambda,
                    gap_to_2pim: lambda - 2.0 * PI * (i + 1) as f64,
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_n {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn write_comb_csv<W: std::io::Write>(mut out: W, rows: &[CombRow]) -> std::io::Result<()> {
    use crate::report::fmt_f64;
    writeln!(out, "n,m,lambda,gap_to_2pim")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.n, r.m, fmt_f64(r.lambda), fmt_f64(r.gap_to_2pim))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaGap {
    pub n: usize,
    pub sup_gap: f64,
    pub at_lambda: f64,
}

/// `λ_k = -20 + 40k/400`, `k = 0..=400`
pub fn default_lambda_grid() -> Vec<f64> {
    (0..=400).map(|k| -20.0 + 40.0 * k as f64 / 400.0).collect()
}

/// `max_λ |y_n(λ, 1) - ω(λ)|` for each comb size.
pub fn omega_convergence_report(n_list: &[usize], grid: &[f64]) -> Vec<OmegaGap> {
    n_list
        .par_iter()
        .map(|&n| {
            let p = EigenProblem::new(&rho_comb(n), BoundaryCondition::Dirichlet);
            let (mut sup, mut at) = (0.0f64, f64::NAN);
            for &l in grid {
                let g = (p.shooting(l) - limit_omega(l)).abs();
                if g > sup || at.is_nan() {
                    sup = g.max(sup);
                    at = l;
                }
            }
            OmegaGap {
                n,
                sup_gap: sup,
                at_lambda: at,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorizationRow {
    pub level: u32,
    pub n: usize,
    pub m: usize,
    /// m-th positive eigenvalue of `ρ_{N,n}` on `[0, 1]`, free right end
    pub full: f64,
    /// `2^N λ_{m,n}`
    pub sub_rescaled: f64,
    /// Dirichlet problem shot directly on `[2^{-N}, 2^{-N+1}]`
    pub sub_direct: f64,
    pub holds: bool,
}

pub fn majorization_check(big_n: u32, n: usize, m_max: usize) -> Result<Vec<MajorizationRow>> {
    let scale = 2f64.powi(big_n as i32);
    let window = scale * 2.0 * PI * (m_max as f64 + 1.0);
    let rho = rho_scaled(big_n, n);
    let full = EigenProblem::new(&rho, BoundaryCondition::Neumann).eigenvalues(m_max, window)?;
    let comb = EigenProblem::new(&rho_comb(n), BoundaryCondition::Dirichlet).eigenvalues(m_max, window / scale)?;
    let direct = EigenProblem::on_interval(&rho, BoundaryCondition::Dirichlet, 1.0 / scale, 2.0 / scale)
        .eigenvalues(m_max, window)?;
    let k = m_max.min(full.positive.len()).min(comb.positive.len()).min(direct.positive.len());
    if k < m_max {
        return Err(Error::InvalidArgument(format!(
            "only {k} of {m_max} eigenvalues found below {window}"
        )));
    }
    Ok((0..k)
        .map(|i| {
            let sub = scale * comb.positive[i];
            MajorizationRow {
                level: big_n,
                n,
                m: i + 1,
                full: full.positive[i],
                sub_rescaled: sub,
                sub_direct: direct.positive[i],
                holds: full.positive[i] <= sub * (1.0 + 1e-12),
            }
        })
        .collect())
}

/// First index where the growth schedule is enforced.
pub const SCHEDULE_START: usize = 10;
/// Largest comb size tried for a single level.
pub const MAX_TEETH: usize = 20_000;

/// `2πm ln m`
pub fn schedule(m: usize) -> f64 {
    let m = m as f64;
    2.0 * PI * m * m.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub level: u32,
    pub teeth: usize,
    /// indices `m` whose bound comes from this level
    pub first_m: usize,
    pub last_m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub m: usize,
    pub lambda: f64,
    /// `2^N λ_{m,ν_N}` from the covering level, if any
    pub sub_bound: Option<f64>,
    pub target: f64,
    pub checked: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthSums {
    pub depth: usize,
    pub atoms: usize,
    pub eigenvalues: usize,
    pub complete: bool,
    pub absolute_sum: f64,
    pub signed_sum: f64,
    pub trace: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuReport {
    pub nu: Vec<usize>,
    pub margin: f64,
    pub levels: Vec<Level>,
    pub table: Vec<BoundRow>,
    /// `Σ_{m≤M} |1/λ_m|` over the positive eigenvalues of the full `ρ_ν`
    pub positive_partial: Vec<f64>,
    pub by_depth: Vec<DepthSums>,
    pub schedule_met: bool,
    pub sums_increasing: bool,
    pub failed: bool,
    pub message: Option<String>,
}

/// Far beyond any eigenvalue of the stacked combs used here.
const FULL_WINDOW: f64 = 1e9;

fn all_sums(nu: &[usize]) -> Result<DepthSums> {
    let rho = rho_nu(nu);
    let p = EigenProblem::new(&rho, BoundaryCondition::Neumann);
    let atoms = rho.atoms().len();
    let spec = p.eigenvalues(atoms, FULL_WINDOW)?;
    let abs: f64 = spec.all().map(|l| 1.0 / l.abs()).sum();
    let signed: f64 = spec.all().map(|l| 1.0 / l).sum();
    Ok(DepthSums {
        depth: nu.len(),
        atoms,
        eigenvalues: spec.len(),
        complete: spec.len() == atoms,
        absolute_sum: abs,
        signed_sum: signed,
        trace: rho.first_moment(),
    })
}

/// Comb sizes `ν_1, …, ν_{N_max}` making the m-th eigenvalue of `ρ_ν` at most
/// `2πm ln m` for `10 ≤ m ≤ ν_{N_max}`.
///
/// Levels are assigned backwards. The last one covers the single index
/// `m = ν_{N_max}`, the smallest comb size whose top eigenvalue, scaled by
/// `2^{N_max}`, beats the schedule shrunk by `1 + margin`. Each earlier level
/// `N` then covers the indices just below the next level's first index with
/// `ν_N` equal to the last of them; its first index is the smallest `m` from
/// which all `2^N λ_{m,ν_N}` beat the shrunk schedule. The bounds hold because
/// the m-th eigenvalue of the whole problem never exceeds the m-th eigenvalue
/// of a Dirichlet sub-problem on any of the dyadic blocks.
pub fn choose_nu(n_max: u32, margin: f64) -> Result<NuReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    if !(margin >= 0.0) {
        return Err(Error::InvalidArgument("margin must be nonnegative".into()));
    }
    let shrunk = |m: usize| schedule(m) / (1.0 + margin);
    let top = |n: usize, level: u32| -> f64 {
        let p = EigenProblem::new(&rho_comb(n), BoundaryCondition::Dirichlet);
        2f64.powi(level as i32) * p.positive_eigenvalue(n, 4.0 * n as f64 + 1.0).unwrap_or(f64::INFINITY)
    };
    let fail = |msg: String| NuReport {
        nu: Vec::new(),
        margin,
        levels: Vec::new(),
        table: Vec::new(),
        positive_partial: Vec::new(),
        by_depth: Vec::new(),
        schedule_met: false,
        sums_increasing: false,
        failed: true,
        message: Some(msg),
    };

    // last level: smallest n with 2^N λ_{n,n} ≤ target(n); the ratio falls like 1/ln n
    if top(MAX_TEETH, n_max) > shrunk(MAX_TEETH) {
        return Ok(fail(format!(
            "level {n_max} cannot meet the schedule with at most {MAX_TEETH} teeth"
        )));
    }
    let (mut lo, mut hi) = (SCHEDULE_START, MAX_TEETH);
    if top(lo, n_max) <= shrunk(lo) {
        hi = lo;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if top(mid, n_max) <= shrunk(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut levels = vec![Level {
        level: n_max,
        teeth: hi,
        first_m: hi,
        last_m: hi,
    }];
    let mut bounds: Vec<(usize, f64)> = vec![(hi, top(hi, n_max))];
    let mut next_first = hi;
    for level in (1..n_max).rev() {
        if next_first <= SCHEDULE_START {
            // nothing left to cover; keep the level present with a small comb
            levels.push(Level {
                level,
                teeth: SCHEDULE_START,
                first_m: next_first,
                last_m: next_first - 1,
            });
            continue;
        }
        let n = next_first - 1;
        let scale = 2f64.powi(level as i32);
        let p = EigenProblem::new(&rho_comb(n), BoundaryCondition::Dirichlet);
        let spec = p.eigenvalues(n, 4.0 * n as f64 + 1.0)?;
        if spec.positive.len() < n {
            return Ok(fail(format!("comb with {n} teeth returned {} eigenvalues", spec.positive.len())));
        }
        let mut first = n + 1;
        while first > SCHEDULE_START.min(n) && first > 1 {
            let m = first - 1;
            if scale * spec.positive[m - 1] <= shrunk(m) {
                first = m;
            } else {
                break;
            }
        }
        if first > n {
            return Ok(fail(format!("level {level} cannot cover index {n}")));
        }
        for m in first..=n {
            bounds.push((m, scale * spec.positive[m - 1]));
        }
        levels.push(Level {
            level,
            teeth: n,
            first_m: first,
            last_m: n,
        });
        next_first = first;
    }
    levels.reverse();
    let nu: Vec<usize> = levels.iter().map(|l| l.teeth).collect();
    if next_first > SCHEDULE_START {
        let mut r = fail(format!("indices {SCHEDULE_START}..{next_first} are not covered"));
        r.nu = nu;
        r.levels = levels;
        return Ok(r);
    }

    let last = levels.last().map_or(0, |l| l.last_m);
    let rho = rho_nu(&nu);
    let full = EigenProblem::new(&rho, BoundaryCondition::Neumann);
    let spec = full.eigenvalues(last, schedule(last) * 2.0)?;
    let mut table = Vec::with_capacity(last);
    let mut schedule_met = spec.positive.len() >= last;
    for m in 1..=last.min(spec.positive.len()) {
        let lambda = spec.positive[m - 1];
        let checked = m >= SCHEDULE_START;
        let ok = lambda <= schedule(m);
        schedule_met &= !checked || ok;
        table.push(BoundRow {
            m,
            lambda,
            sub_bound: bounds.iter().find(|b| b.0 == m).map(|b| b.1),
            target: schedule(m),
            checked,
            ok,
        });
    }
    let mut acc = 0.0;
    let positive_partial = table
        .iter()
        .map(|r| {
            acc += 1.0 / r.lambda;
            acc
        })
        .collect();
    let by_depth = (1..=nu.len()).map(|d| all_sums(&nu[..d])).collect::<Result<Vec<_>>>()?;
    let sums_increasing = by_depth.windows(2).all(|w| w[1].absolute_sum > w[0].absolute_sum);
    Ok(NuReport {
        nu,
        margin,
        levels,
        table,
        positive_partial,
        by_depth,
        schedule_met,
        sums_increasing,
        failed: !schedule_met,
        message: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::dstar_norm;
    use approx::assert_relative_eq;

    #[test]
    fn single_tooth() {
        let r = rho_comb(1);
        let a = r.atoms();
        assert_eq!(a.len(), 2);
        assert_eq!((a[0].x, a[0].w), (0.5, 1.0));
        assert_eq!((a[1].x, a[1].w), (1.0, -1.0));
    }

    #[test]
    fn comb_norms() {
        for n in [1, 5, 50] {
            assert_relative_eq!(dstar_norm(&rho_comb(n)).powi(2), 0.5, epsilon = 1e-14);
        }
        assert_relative_eq!(dstar_norm(&rho_scaled(3, 10)).powi(2), 1.0 / 16.0, epsilon = 1e-14);
    }

    #[test]
    fn scaled_supports_are_nested_in_dyadic_blocks() {
        for big_n in 1..=4u32 {
            let lo = 2f64.powi(-(big_n as i32));
            for a in rho_scaled(big_n, 7).atoms() {
                assert!(a.x > lo && a.x <= 2.0 * lo);
            }
        }
        assert_eq!(rho_nu(&[3, 4, 5]).atoms().len(), 24);
    }

    #[test]
    fn comb_spectrum_matches_closed_form() {
        let p = EigenProblem::new(&rho_comb(12), BoundaryCondition::Dirichlet);
        let s = p.eigenvalues(20, 100.0).unwrap();
        let exact = comb_eigenvalues_exact(12);
        assert_eq!(s.positive.len(), 12);
        for (a, b) in s.positive.iter().zip(&exact) {
            assert_relative_eq!(*a, *b, max_relative = 1e-12);
        }
        // negative branch mirrors all but the top
        assert_eq!(s.negative.len(), 11);
        assert_relative_eq!(s.negative[0], -exact[0], max_relative = 1e-12);
    }

    #[test]
    fn positive_eigenvalue_matches_enumeration() {
        let p = EigenProblem::new(&rho_comb(9), BoundaryCondition::Dirichlet);
        let exact = comb_eigenvalues_exact(9);
        for m in [1, 4, 9] {
            assert_relative_eq!(p.positive_eigenvalue(m, 40.0).unwrap(), exact[m - 1], max_relative = 1e-12);
        }
        assert!(p.positive_eigenvalue(10, 40.0).is_none());
    }

    #[test]
    fn omega_at_zero_is_exact() {
        let r = omega_convergence_report(&[3, 10], &[0.0]);
        assert!(r.iter().all(|g| g.sup_gap == 0.0));
    }

    #[test]
    fn shallow_choice_meets_schedule() {
        let r = choose_nu(1, 0.05).unwrap();
        assert!(!r.failed, "{r:?}");
        assert!(r.table.iter().filter(|b| b.checked).all(|b| b.ok));
    }
}
