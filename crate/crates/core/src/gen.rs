//! Seeded random instances for tests, benchmarks and the `--seed` CLI flag.
//!
//! Nothing in the core algorithms is randomized; these generators only
//! produce inputs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::chain::{Complex, IntChain};
use crate::cone::{Simplex, SimplicialChain};
use crate::cubical::{BoxCell, BoxChain, Grid};
use crate::onedim::CurveSystem;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero(rng: &mut GenRng, max: i64) -> i64 {
    let v = rng.gen_range(1..=max);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// A random `k`-box on the lattice `(1/den)ℤ` inside `[0, size]^n`.
pub fn random_box(rng: &mut GenRng, n: usize, k: usize, size: i64, den: i64) -> BoxCell {
    let mut axes: Vec<usize> = (0..n).collect();
    axes.shuffle(rng);
    let dirs = &axes[..k];
    let top = size * den;
    let bounds = (0..n)
        .map(|j| {
            if dirs.contains(&j) {
                let a = rng.gen_range(0..top);
                let b = rng.gen_range(a + 1..=top);
                (a as f64 / den as f64, b as f64 / den as f64)
            } else {
                let c = rng.gen_range(0..=top) as f64 / den as f64;
                (c, c)
            }
        })
        .collect();
    BoxCell::new(bounds).expect("ordered intervals")
}

/// Up to `cells` random boxes with coefficients in `±1..=±max_coeff`.
pub fn random_box_chain(rng: &mut GenRng, n: usize, k: usize, cells: usize, size: i64, den: i64, max_coeff: i64) -> BoxChain {
    let count = rng.gen_range(1..=cells.max(1));
    let items: Vec<(BoxCell, i64)> = (0..count)
        .map(|_| (random_box(rng, n, k, size, den), nonzero(rng, max_coeff)))
        .collect();
    BoxChain::new(n, k, items).expect("boxes have the requested shape")
}

/// A level on axis-lattice `(1/den)ℤ` shifted by half a step, inside
/// `[−1, size + 1]`; never a lattice coordinate.
pub fn generic_level(rng: &mut GenRng, size: i64, den: i64) -> f64 {
    let i = rng.gen_range(-den..(size + 1) * den);
    (i as f64 + 0.5) / den as f64
}

/// A random subcomplex-sized grid: `n`-dimensional grid whose top cells
/// number at most `max_top`, with unit or random real spacings.
pub fn random_grid(rng: &mut GenRng, n: usize, max_top: usize, real_volumes: bool) -> Grid {
    loop {
        let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        if counts.iter().product::<usize>() > max_top {
            continue;
        }
        let breaks = counts
            .iter()
            .map(|&c| {
                let mut x = 0.0;
                let mut out = vec![0.0];
                for _ in 0..c {
                    x += if real_volumes {
                        rng.gen_range(0.2..2.0)
                    } else {
                        rng.gen_range(1..=3) as f64
                    };
                    out.push(x);
                }
                out
            })
            .collect();
        return Grid::new(breaks);
    }
}

/// A random integer chain of dimension `dim` with coefficients in
/// `[−max, max]`, each cell nonzero with probability `density`.
pub fn random_int_chain(rng: &mut GenRng, complex: &Arc<Complex>, dim: usize, max: i64, density: f64) -> IntChain {
    let coeffs: Vec<(usize, i64)> = (0..complex.num_cells(dim))
        .filter_map(|i| rng.gen_bool(density).then(|| (i, rng.gen_range(-max..=max))))
        .collect();
    IntChain::from_coeffs(complex, dim, coeffs).expect("indices in range")
}

/// A 1-chain on a grid complex with 2-cells whose boundary vanishes mod `p`:
/// the boundary of a random 2-chain plus `p` times a random 1-chain.
pub fn random_mod_p_boundary_chain(rng: &mut GenRng, complex: &Arc<Complex>, p: u64) -> IntChain {
    let a = random_int_chain(rng, complex, 2, 2, 0.4);
    let b = random_int_chain(rng, complex, 1, 1, 0.3);
    &a.boundary().expect("dimension two") + &b.scaled(p as i64)
}

/// Up to `cells` random `k`-simplices in `ℝⁿ` whose vertices come from a
/// pool of `pool` random points in `[0, 1]ⁿ`, so that faces are shared.
pub fn random_simplicial_chain(rng: &mut GenRng, n: usize, k: usize, cells: usize, pool: usize, max_coeff: i64) -> SimplicialChain {
    let points: Vec<Vec<f64>> = (0..pool.max(k + 1))
        .map(|_| (0..n).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect();
    let count = rng.gen_range(1..=cells.max(1));
    let items: Vec<(Simplex, i64)> = (0..count)
        .map(|_| {
            let chosen = rand::seq::index::sample(rng, points.len(), k + 1);
            let verts = chosen.iter().map(|i| points[i].clone()).collect();
            (Simplex::new(verts).expect("finite points"), nonzero(rng, max_coeff))
        })
        .collect();
    SimplicialChain::new(n, k, items).expect("simplices have the requested shape")
}

/// A random point in `[0, 1]ⁿ`.
pub fn random_point(rng: &mut GenRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.0..1.0)).collect()
}

/// A curve system with `p`-divisible boundary: random skeleton paths through
/// a pool of points, each edge repeated `mult` times, plus enough direct
/// curves from first to last point to make the count divisible by `p`.
pub fn random_curve_system(rng: &mut GenRng, p: u64) -> CurveSystem {
    let points = rng.gen_range(2..=6);
    let mut items: Vec<(String, String)> = Vec::new();
    let skeletons = rng.gen_range(1..=3);
    for _ in 0..skeletons {
        let len = rng.gen_range(1..=3);
        let mut path = vec![rng.gen_range(0..points)];
        for _ in 0..len {
            path.push(rng.gen_range(0..points));
        }
        let mult = p as usize * rng.gen_range(0..=1) + rng.gen_range(1..p as usize);
        for w in path.windows(2) {
            for _ in 0..mult {
                items.push((format!("v{}", w[0]), format!("v{}", w[1])));
            }
        }
        let rem = mult % p as usize;
        let (first, last) = (path[0], *path.last().unwrap());
        for _ in 0..(p as usize - rem) % p as usize {
            items.push((format!("v{first}"), format!("v{last}")));
        }
    }
    items.shuffle(rng);
    CurveSystem::new(items.into_iter().map(|(s, e)| (s, e, rng.gen_range(0.5..2.0)))).expect("finite masses")
}
