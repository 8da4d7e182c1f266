use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{extract_cycle_indices, CurveSystem, OneDimError};
use crate::chain::{Complex, IntChain, Modulus};

/// A simple directed edge path, or a loop when `closed`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWalk {
    /// Vertices visited in order; a loop repeats its first vertex at the end.
    pub vertices: Vec<usize>,
    /// Edges with the sign in which they are traversed.
    pub edges: Vec<(usize, i64)>,
    pub closed: bool,
    pub mass: f64,
}

impl EdgeWalk {
    pub fn chain(&self, complex: &std::sync::Arc<Complex>) -> IntChain {
        IntChain::from_coeffs(complex, 1, self.edges.iter().copied()).expect("edges of the complex")
    }
}

/// `(tail, head)` of every edge, from `∂e = [head] − [tail]`.
fn endpoints(complex: &Complex) -> Result<Vec<(usize, usize)>, OneDimError> {
    complex
        .cells(1)
        .iter()
        .map(|cell| match cell.boundary() {
            [(x, cx), (y, cy)] if cx * cy == -1 && x != y => Ok(if *cx == 1 { (*y, *x) } else { (*x, *y) }),
            _ => Err(OneDimError::NotGraphLike(cell.label().to_string())),
        })
        .collect()
}

struct Walker {
    /// Remaining copies per edge, positive meaning tail → head.
    remaining: Vec<i64>,
    ends: Vec<(usize, usize)>,
    /// Outgoing edges per vertex in increasing edge index, with the sign of
    /// traversal.
    out: Vec<Vec<(usize, i64)>>,
    volumes: Vec<f64>,
}

impl Walker {
    fn next_edge(&self, v: usize) -> Option<(usize, i64, usize)> {
        self.out[v].iter().find_map(|&(e, sign)| {
            let r = self.remaining[e];
            if r != 0 && r.signum() == sign {
                let (t, h) = self.ends[e];
                Some((e, sign, if sign > 0 { h } else { t }))
            } else {
                None
            }
        })
    }

    fn take(&mut self, e: usize, sign: i64) {
        self.remaining[e] -= sign;
    }

    fn walk(&self, vertices: Vec<usize>, edges: Vec<(usize, i64)>, closed: bool) -> EdgeWalk {
        let mass = edges.iter().map(|&(e, _)| self.volumes[e]).fold(0.0, |a, b| a + b);
        EdgeWalk {
            vertices,
            edges,
            closed,
            mass,
        }
    }

    /// Walks from `start`, popping loops on revisits, until `stop(v)` holds
    /// at a vertex other than the start or no edge leaves the start.
    fn run(&mut self, start: usize, stop: impl Fn(usize) -> bool, out: &mut Vec<EdgeWalk>) -> Option<EdgeWalk> {
        let mut vs = vec![start];
        let mut es: Vec<(usize, i64)> = Vec::new();
        loop {
            let v = *vs.last().expect("nonempty stack");
            if vs.len() > 1 && stop(v) {
                return Some(self.walk(vs, es, false));
            }
            let Some((e, sign, w)) = self.next_edge(v) else {
                debug_assert!(vs.len() == 1, "flow conservation guarantees an outgoing edge");
                return None;
            };
            self.take(e, sign);
            es.push((e, sign));
            if let Some(pos) = vs.iter().position(|&x| x == w) {
                let mut loop_vs: Vec<usize> = vs.split_off(pos);
                loop_vs.push(w);
                let loop_es = es.split_off(pos);
                vs.push(w);
                out.push(self.walk(loop_vs, loop_es, true));
            } else {
                vs.push(w);
            }
        }
    }
}

/// Splits a 1-chain on a graph into simple paths and loops whose sum is the
/// chain.
///
/// Paths start at vertices where the remaining boundary is negative (more
/// curves leave than arrive), follow the least-index edge with remaining
/// multiplicity and end at the first vertex where the boundary is positive.
/// Revisiting a vertex splits off a loop. Leftover balanced edges are
/// extracted as loops from the least vertex.
pub fn decompose_paths_loops(t: &IntChain) -> Result<Vec<EdgeWalk>, OneDimError> {
    if t.dim() != 1 {
        return Err(OneDimError::NotOneDimensional(t.dim()));
    }
    let complex = t.complex();
    let ends = endpoints(complex)?;
    let nv = complex.num_cells(0);
    let mut remaining = vec![0i64; ends.len()];
    for (e, g) in t.iter() {
        remaining[e] = g.to_i64().ok_or_else(|| OneDimError::Defect("coefficient exceeds i64".into()))?;
    }
    let mut out_edges = vec![Vec::new(); nv];
    for (e, &(tail, head)) in ends.iter().enumerate() {
        out_edges[tail].push((e, 1));
        out_edges[head].push((e, -1));
    }
    for list in &mut out_edges {
        list.sort_unstable();
    }
    let mut demand = vec![0i64; nv];
    for (e, &g) in remaining.iter().enumerate() {
        let (tail, head) = ends[e];
        demand[head] += g;
        demand[tail] -= g;
    }
    let mut w = Walker {
        remaining,
        ends,
        out: out_edges,
        volumes: complex.cells(1).iter().map(|c| c.volume()).collect(),
    };
    let mut result = Vec::new();
    while let Some(s) = (0..nv).find(|&v| demand[v] < 0) {
        let d = demand.clone();
        let path = w
            .run(s, |v| d[v] > 0, &mut result)
            .ok_or_else(|| OneDimError::Defect("path search stalled".into()))?;
        demand[s] += 1;
        demand[*path.vertices.last().expect("nonempty")] -= 1;
        result.push(path);
    }
    while let Some(s) = (0..nv).find(|&v| w.next_edge(v).is_some()) {
        w.run(s, |_| false, &mut result);
    }
    Ok(result)
}

/// A cycle `T′ ≡ T (mod p)` with `∂T′ = 0` and `M(T′) ≤ (p − 1)·M_p(T)`.
///
/// The canonical representative of `T` is split into paths and loops, which
/// become a curve system; the indices `Γ₁` found for it are subtracted `p`
/// times.
pub fn cycle_representative(t: &IntChain, p: Modulus) -> Result<IntChain, OneDimError> {
    if t.dim() != 1 {
        return Err(OneDimError::NotOneDimensional(t.dim()));
    }
    let complex = t.complex();
    let boundary = t.boundary()?;
    for (v, g) in boundary.iter() {
        if !(g % BigInt::from(p.get())).is_zero() {
            return Err(OneDimError::NotDivisible {
                point: complex.cells(0)[v].label().to_string(),
                coefficient: g.to_i64().unwrap_or(i64::MAX),
                p: p.get(),
            });
        }
    }
    let lift = t.reduce_mod_p(p).lift();
    let walks = decompose_paths_loops(&lift)?;
    let label = |v: usize| complex.cells(0)[v].label().to_string();
    let sys = CurveSystem::new(walks.iter().map(|w| {
        (
            label(w.vertices[0]),
            label(*w.vertices.last().expect("nonempty")),
            w.mass,
        )
    }))?;
    let cut = extract_cycle_indices(&sys, p)?;
    let mut out = lift.clone();
    let pi = p.get() as i64;
    for &id in &cut.gamma1 {
        out = &out - &walks[id - 1].chain(complex).scaled(pi);
    }
    if !out.boundary()?.is_zero() || !out.congruent(t, p) {
        return Err(OneDimError::Defect("representative is not a congruent cycle".into()));
    }
    debug_assert!(out.mass() <= (pi - 1) as f64 * t.mass_p(p) * (1.0 + 1e-12) + 1e-12);
    Ok(out)
}
