#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wiener_quad::{Atom, Density, Measure};

// 10-point Gauss–Legendre on [-1, 1], exact for polynomials of degree ≤ 19
const X: [f64; 10] = [
    -0.973_906_528_517_171_7,
    -0.865_063_366_688_984_5,
    -0.679_409_568_299_024_4,
    -0.433_395_394_129_247_2,
    -0.148_874_338_981_631_2,
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const W: [f64; 10] = [
    0.066_671_344_308_688_1,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_0,
    0.269_266_719_309_996_4,
    0.295_524_224_714_752_9,
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

fn gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    X.iter().zip(&W).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

// ∫_a^b g(s) ds for a kernel that is polynomial on each side of `kink`
fn gl_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, kink: f64) -> f64 {
    if kink > a && kink < b {
        gl(&f, a, kink) + gl(&f, kink, b)
    } else {
        gl(&f, a, b)
    }
}

/// `∫∫ k(t, s) dρ(t) dρ(s)` by direct quadrature, for kernels polynomial on each
/// side of the diagonal.
pub fn double_integral<K: Fn(f64, f64) -> f64>(rho: &Measure, k: K) -> f64 {
    let atoms: Vec<(f64, f64)> = rho.atoms().iter().map(|a| (a.x, a.w)).collect();
    let bp = rho.density().breakpoints();
    let pieces: Vec<(f64, f64, f64)> = bp
        .windows(2)
        .zip(rho.density().values())
        .map(|(w, &c)| (w[0], w[1], c))
        .filter(|p| p.2 != 0.0)
        .collect();
    let mut total = 0.0;
    for &(x, w) in &atoms {
        for &(y, v) in &atoms {
            total += w * v * k(x, y);
        }
        for &(a, b, c) in &pieces {
            total += 2.0 * w * c * gl_split(|s| k(x, s), a, b, x);
        }
    }
    for &(a, b, c) in &pieces {
        for &(a2, b2, c2) in &pieces {
            let inner = |t: f64| gl_split(|s| k(t, s), a2, b2, t);
            let mut cuts = vec![a, b];
            cuts.extend([a2, b2].iter().filter(|&&p| p > a && p < b));
            cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
            let outer: f64 = cuts.windows(2).map(|w| gl(&inner, w[0], w[1])).sum();
            total += c * c2 * outer;
        }
    }
    total
}

pub fn min_kernel(t: f64, s: f64) -> f64 {
    t.min(s)
}

pub fn m_kernel(t: f64, s: f64) -> f64 {
    let m = t.min(s);
    2.0 * m * m + t * s
}

/// Random measure with up to 5 atoms (possibly at 0 or 1) and up to 4 density pieces.
pub fn random_measure(rng: &mut ChaCha8Rng) -> Measure {
    let n_atoms = rng.random_range(0..=5);
    let mut atoms = Vec::new();
    for _ in 0..n_atoms {
        let x = match rng.random_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random::<f64>(),
        };
        atoms.push(Atom {
            x,
            w: rng.random_range(-2.0..2.0),
        });
    }
    let n_pieces = rng.random_range(0..=4);
    let density = if n_pieces == 0 {
        Density::zero()
    } else {
        let mut cuts: Vec<f64> = (0..n_pieces - 1).map(|_| rng.random::<f64>()).collect();
        cuts.push(0.0);
        cuts.push(1.0);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let values = (0..cuts.len() - 1).map(|_| rng.random_range(-3.0..3.0)).collect();
        Density::new(cuts, values).unwrap()
    };
    Measure::new(atoms, density).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atoms(list: &[(f64, f64)]) -> Measure {
    Measure::from_atoms(list.iter().copied()).unwrap()
}

pub fn piecewise(bps: &[f64], vals: &[f64]) -> Measure {
    Measure::piecewise(bps.to_vec(), vals.to_vec()).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// `(1 + 1/(2n) [[-λ, 2-λ/(2n)], [-λ², λ-λ²/(2n)]])` for one comb cell.
pub fn comb_cell_matrix(lambda: f64, n: usize) -> [[f64; 2]; 2] {
    let e = 1.0 / (2.0 * n as f64);
    [
        [1.0 - e * lambda, e * (2.0 - lambda * e)],
        [-e * lambda * lambda, 1.0 + e * (lambda - lambda * lambda * e)],
    ]
}
