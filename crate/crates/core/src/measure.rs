//! Signed measures on `[0, 1]` built from a piecewise-constant density and a
//! finite list of point masses, together with their primitive
//! `Y(x) = -∫_(x,1] dρ` and the norms that are quadratic in `Y`.
//!
//! Every integral here is evaluated in closed form on the affine pieces of
//! `Y`; no quadrature is involved.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<T> {
    pub x: T,
    pub w: T,
}

/// Piecewise-constant density: value `values[i]` on `[breakpoints[i], breakpoints[i + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Density<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> Density<T> {
    pub fn zero() -> Self {
        Self {
            breakpoints: vec![T::zero(), T::one()],
            values: vec![T::zero()],
        }
    }

    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidMeasure("density needs at least two breakpoints".into()));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            )));
        }
        if breakpoints[0] != T::zero() || *breakpoints.last().unwrap() != T::one() {
            return Err(Error::InvalidMeasure("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidMeasure("breakpoints must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMeasure("density values must be finite".into()));
        }
        let mut d = Self { breakpoints, values };
        d.coalesce();
        Ok(d)
    }

    // adjacent pieces with equal values are merged
    fn coalesce(&mut self) {
        let mut bps = vec![self.breakpoints[0]];
        let mut vals: Vec<T> = Vec::with_capacity(self.values.len());
        for (i, &v) in self.values.iter().enumerate() {
            if vals.last() == Some(&v) {
                *bps.last_mut().unwrap() = self.breakpoints[i + 1];
            } else {
                vals.push(v);
                bps.push(self.breakpoints[i + 1]);
            }
        }
        self.breakpoints = bps;
        self.values = vals;
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Value on the half-open piece containing `x` (the last piece is closed at 1).
    pub fn value_at(&self, x: T) -> T {
        let idx = self.breakpoints[1..].partition_point(|&b| b <= x);
        self.values[idx.min(self.values.len() - 1)]
    }
}

/// A signed measure `ρ` on `[0, 1]`.
///
/// Atoms are kept sorted by position with unique positions; zero-weight atoms
/// are discarded. An atom at `x = 0` is stored but has no effect on any norm
/// or spectrum since every admissible function vanishes there.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasure<T> {
    atoms: Vec<Atom<T>>,
    density: Density<T>,
}

impl<T: Real> Default for SignedMeasure<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> SignedMeasure<T> {
    pub fn zero() -> Self {
        Self {
            atoms: Vec::new(),
            density: Density::zero(),
        }
    }

    pub fn new(atoms: Vec<Atom<T>>, density: Density<T>) -> Result<Self> {
        for a in &atoms {
            if !a.x.is_finite() || !a.w.is_finite() {
                return Err(Error::InvalidMeasure("atom position and weight must be finite".into()));
            }
            if a.x < T::zero() || a.x > T::one() {
                return Err(Error::InvalidMeasure(format!("atom position {} outside [0, 1]", a.x)));
            }
        }
        Ok(Self {
            atoms: normalize_atoms(atoms),
            density,
        })
    }

    /// Constant density `c` on the whole interval.
    pub fn uniform(c: T) -> Self {
        Self {
            atoms: Vec::new(),
            density: Density {
                breakpoints: vec![T::zero(), T::one()],
                values: vec![c],
            },
        }
    }

    pub fn dirac(x: T, w: T) -> Result<Self> {
        Self::new(vec![Atom { x, w }], Density::zero())
    }

    pub fn from_atoms<I: IntoIterator<Item = (T, T)>>(atoms: I) -> Result<Self> {
        Self::new(
            atoms.into_iter().map(|(x, w)| Atom { x, w }).collect(),
            Density::zero(),
        )
    }

    pub fn piecewise(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        Ok(Self {
            atoms: Vec::new(),
            density: Density::new(breakpoints, values)?,
        })
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn density(&self) -> &Density<T> {
        &self.density
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.density.is_zero()
    }

    pub fn has_density(&self) -> bool {
        !self.density.is_zero()
    }

    /// `∫ t dρ(t)`, the trace of the multiplier in the energy space.
    pub fn first_moment(&self) -> T {
        let atoms: T = self.atoms.iter().map(|a| a.w * a.x).sum();
        let dens: T = self.density_pieces().map(|(a, b, c)| c * (b * b - a * a) * T::half()).sum();
        atoms + dens
    }

    /// `∫ t(1 - t) dρ(t)`, the trace with both ends pinned.
    pub fn pinned_moment(&self) -> T {
        let atoms: T = self.atoms.iter().map(|a| a.w * a.x * (T::one() - a.x)).sum();
        let third = T::one() / T::lit(3.0);
        let dens: T = self
            .density_pieces()
            .map(|(a, b, c)| c * ((b * b - a * a) * T::half() - (b * b * b - a * a * a) * third))
            .sum();
        atoms + dens
    }

    /// Total mass `ρ([0, 1])`.
    pub fn total_mass(&self) -> T {
        let atoms: T = self.atoms.iter().map(|a| a.w).sum();
        let dens: T = self.density_pieces().map(|(a, b, c)| c * (b - a)).sum();
        atoms + dens
    }

    pub(crate) fn density_pieces(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.density
            .breakpoints
            .windows(2)
            .zip(&self.density.values)
            .map(|(w, &c)| (w[0], w[1], c))
    }

    /// Merged grid of density breakpoints and atom positions.
    pub fn layout(&self) -> Layout<T> {
        let mut nodes: Vec<T> = self.density.breakpoints.clone();
        nodes.extend(self.atoms.iter().map(|a| a.x));
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup();
        let node_atom = {
            let mut w = vec![T::zero(); nodes.len()];
            let mut j = 0;
            for a in &self.atoms {
                while nodes[j] < a.x {
                    j += 1;
                }
                w[j] = a.w;
            }
            w
        };
        let mut seg_density = Vec::with_capacity(nodes.len() - 1);
        let mut piece = 0;
        for win in nodes.windows(2) {
            while self.density.breakpoints[piece + 1] <= win[0] {
                piece += 1;
            }
            seg_density.push(self.density.values[piece]);
        }
        Layout {
            nodes,
            seg_density,
            node_atom,
        }
    }

    pub fn scaled(&self, c: T) -> Self {
        combine(&[(c, self)])
    }

    pub fn primitive(&self) -> Primitive<T> {
        primitive(self)
    }

    pub fn map_scalar<U: Real>(&self) -> SignedMeasure<U> {
        let cv = |x: T| U::lit(x.as_f64());
        SignedMeasure {
            atoms: normalize_atoms(
                self.atoms
                    .iter()
                    .map(|a| Atom { x: cv(a.x), w: cv(a.w) })
                    .collect(),
            ),
            density: Density {
                breakpoints: self.density.breakpoints.iter().map(|&b| cv(b)).collect(),
                values: self.density.values.iter().map(|&v| cv(v)).collect(),
            },
        }
    }
}

fn normalize_atoms<T: Real>(mut atoms: Vec<Atom<T>>) -> Vec<Atom<T>> {
    atoms.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    let mut out: Vec<Atom<T>> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if last.x == a.x => last.w = last.w + a.w,
            _ => out.push(a),
        }
    }
    out.retain(|a| !a.w.is_zero());
    out
}

/// Merged grid `0 = z_0 < … < z_L = 1` with the density on each `[z_j, z_{j+1})`
/// and the atom weight sitting at each node.
#[derive(Debug, Clone)]
pub struct Layout<T> {
    pub nodes: Vec<T>,
    pub seg_density: Vec<T>,
    pub node_atom: Vec<T>,
}

/// Linear combination `Σ c_i ρ_i`.
pub fn combine<T: Real>(terms: &[(T, &SignedMeasure<T>)]) -> SignedMeasure<T> {
    let mut bps: Vec<T> = terms
        .iter()
        .flat_map(|(_, m)| m.density.breakpoints.iter().copied())
        .collect();
    bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bps.dedup();
    if bps.len() < 2 {
        bps = vec![T::zero(), T::one()];
    }
    let values: Vec<T> = bps
        .windows(2)
        .map(|w| {
            terms
                .iter()
                .map(|(c, m)| *c * m.density.value_at(w[0]))
                .sum()
        })
        .collect();
    let mut density = Density {
        breakpoints: bps,
        values,
    };
    density.coalesce();
    let atoms = terms
        .iter()
        .flat_map(|(c, m)| m.atoms.iter().map(move |a| Atom { x: a.x, w: *c * a.w }))
        .collect();
    SignedMeasure {
        atoms: normalize_atoms(atoms),
        density,
    }
}

impl<T: Real> std::ops::Add for &SignedMeasure<T> {
    type Output = SignedMeasure<T>;
    fn add(self, rhs: Self) -> SignedMeasure<T> {
        combine(&[(T::one(), self), (T::one(), rhs)])
    }
}

impl<T: Real> std::ops::Sub for &SignedMeasure<T> {
    type Output = SignedMeasure<T>;
    fn sub(self, rhs: Self) -> SignedMeasure<T> {
        combine(&[(T::one(), self), (-T::one(), rhs)])
    }
}

/// The primitive `Y(x) = -∫_(x,1] dρ`, right-continuous with `Y(1) = 0`.
///
/// Stored as affine pieces on the merged grid: on `[z_j, z_{j+1})` the value
/// is `start[j] + slope[j] · (x - z_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Primitive<T> {
    nodes: Vec<T>,
    start: Vec<T>,
    slope: Vec<T>,
}

pub fn primitive<T: Real>(rho: &SignedMeasure<T>) -> Primitive<T> {
    let Layout {
        nodes,
        seg_density,
        node_atom,
    } = rho.layout();
    let segs = seg_density.len();
    let mut start = vec![T::zero(); segs];
    // right value at the current node, walking leftwards from Y(1) = 0
    let mut right = T::zero();
    for j in (0..segs).rev() {
        let left_limit = right - node_atom[j + 1];
        let h = nodes[j + 1] - nodes[j];
        start[j] = left_limit - seg_density[j] * h;
        right = start[j];
    }
    Primitive {
        nodes,
        start,
        slope: seg_density,
    }
}

/// `∫_0^h (p + q s)(r + u s) ds`
#[inline]
fn affine_product<T: Real>(p: T, q: T, r: T, u: T, h: T) -> T {
    let third = T::one() / T::lit(3.0);
    p * r * h + (p * u + q * r) * h * h * T::half() + q * u * h * h * h * third
}

/// `∫_0^h (a + s)(p + q s)^2 ds`
#[inline]
fn moment_affine_sq<T: Real>(a: T, p: T, q: T, h: T) -> T {
    let h2 = h * h;
    let h3 = h2 * h;
    let h4 = h3 * h;
    let base = affine_product(p, q, p, q, h);
    a * base
        + p * p * h2 * T::half()
        + T::lit(2.0 / 3.0) * p * q * h3
        + q * q * h4 * T::lit(0.25)
}

impl<T: Real> Primitive<T> {
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Affine pieces as `(left, right, value at left, slope)`.
    pub fn pieces(&self) -> impl Iterator<Item = (T, T, T, T)> + '_ {
        self.nodes
            .windows(2)
            .zip(self.start.iter().zip(&self.slope))
            .map(|(w, (&p, &q))| (w[0], w[1], p, q))
    }

    pub fn eval(&self, x: T) -> T {
        if x >= T::one() {
            return T::zero();
        }
        let j = self.nodes[1..].partition_point(|&z| z <= x).min(self.start.len() - 1);
        self.start[j] + self.slope[j] * (x - self.nodes[j])
    }

    /// `∫_0^1 Y dt`
    pub fn integral(&self) -> T {
        self.pieces()
            .map(|(a, b, p, q)| {
                let h = b - a;
                p * h + q * h * h * T::half()
            })
            .sum()
    }

    /// `∫_0^1 Y² dt`
    pub fn integral_sq(&self) -> T {
        self.pieces()
            .map(|(a, b, p, q)| affine_product(p, q, p, q, b - a))
            .sum()
    }

    /// `∫_0^1 t Y² dt`
    pub fn moment_sq(&self) -> T {
        self.pieces()
            .map(|(a, b, p, q)| moment_affine_sq(a, p, q, b - a))
            .sum()
    }

    /// `∫_0^1 Y₁ Y₂ dt` over the merged grid of both primitives.
    pub fn inner(&self, other: &Self) -> T {
        let mut grid: Vec<T> = self.nodes.iter().chain(&other.nodes).copied().collect();
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup();
        grid.windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let (p1, q1) = self.local(a);
                let (p2, q2) = other.local(a);
                affine_product(p1, q1, p2, q2, b - a)
            })
            .sum()
    }

    // value and slope of the piece starting at or before `x`
    fn local(&self, x: T) -> (T, T) {
        let j = self.nodes[1..].partition_point(|&z| z <= x).min(self.start.len() - 1);
        (self.start[j] + self.slope[j] * (x - self.nodes[j]), self.slope[j])
    }
}

/// `‖ρ‖_{𝔇*} = ‖Y‖_{L²}`.
pub fn dstar_norm<T: Real>(rho: &SignedMeasure<T>) -> T {
    rho.primitive().integral_sq().max(T::zero()).sqrt()
}

/// `⟨ρ₁, ρ₂⟩_{𝔇*} = ∫ Y₁ Y₂ dt = ∫∫ min(t, s) dρ₁ dρ₂`.
pub fn dstar_inner<T: Real>(a: &SignedMeasure<T>, b: &SignedMeasure<T>) -> T {
    a.primitive().inner(&b.primitive())
}

/// `‖ρ‖²_𝔐 = (∫Y)² + 4∫tY²`, the second moment of `∫ρ·W² dt`.
pub fn m_norm_sq<T: Real>(rho: &SignedMeasure<T>) -> T {
    let y = rho.primitive();
    let i = y.integral();
    i * i + T::lit(4.0) * y.moment_sq()
}

/// JSON form of a measure: `{"atoms":[{"x":..,"w":..}],"density":{"breakpoints":[..],"values":[..]}}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub x: f64,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl MeasureSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn build<T: Real>(&self) -> Result<SignedMeasure<T>> {
        let density = match &self.density {
            Some(d) => Density::new(
                d.breakpoints.iter().map(|&b| T::lit(b)).collect(),
                d.values.iter().map(|&v| T::lit(v)).collect(),
            )?,
            None => Density::zero(),
        };
        SignedMeasure::new(
            self.atoms
                .iter()
                .map(|a| Atom {
                    x: T::lit(a.x),
                    w: T::lit(a.w),
                })
                .collect(),
            density,
        )
    }
}

impl<T: Real> From<&SignedMeasure<T>> for MeasureSpec {
    fn from(m: &SignedMeasure<T>) -> Self {
        MeasureSpec {
            atoms: m
                .atoms
                .iter()
                .map(|a| AtomSpec {
                    x: a.x.as_f64(),
                    w: a.w.as_f64(),
                })
                .collect(),
            density: if m.density.is_zero() {
                None
            } else {
                Some(DensitySpec {
                    breakpoints: m.density.breakpoints.iter().map(|b| b.as_f64()).collect(),
                    values: m.density.values.iter().map(|v| v.as_f64()).collect(),
                })
            },
        }
    }
}
