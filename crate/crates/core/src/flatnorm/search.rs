//! Depth-first branch and bound over coefficient assignments to the
//! `(k+1)`-cells of a complex.
//!
//! The objective for an assignment `s` is `‖T − ∂s‖ + ‖s‖`, where `‖·‖` is
//! either mass (absolute values) or mass mod p (distance to `pℤ`). In fill
//! mode every `k`-cell of `T − ∂s` must vanish instead of being paid for.
//!
//! Variables are explored in decreasing-volume order, ties by cell index. A
//! `k`-cell is *settled* once all of its cofaces are assigned; the lower bound
//! at a node is the cost of the assigned variables plus the settled cells.

use std::cmp::Ordering;

use crate::chain::Modulus;

use super::sum_in_order;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Norm {
    Abs,
    Mod(Modulus),
}

impl Norm {
    #[inline]
    fn of(self, g: i64) -> u64 {
        match self {
            Norm::Abs => g.unsigned_abs(),
            Norm::Mod(p) => p.norm(g),
        }
    }

    #[inline]
    fn reduce(self, g: i64) -> i64 {
        match self {
            Norm::Abs => g,
            Norm::Mod(p) => p.residue(g),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Minimize `‖T − ∂s‖ + ‖s‖`.
    Flat,
    /// Minimize `‖s‖` subject to `∂s = T`.
    Fill,
}

/// Dense description of one search problem.
pub(crate) struct Problem {
    pub norm: Norm,
    pub mode: Mode,
    /// Coefficients of `T` on the `k`-cells (residues in the mod-p case).
    pub target: Vec<i64>,
    pub target_volumes: Vec<f64>,
    pub var_volumes: Vec<f64>,
    /// Faces of each `(k+1)`-cell: `(k-cell, incidence)`.
    pub var_faces: Vec<Vec<(usize, i64)>>,
    /// Candidate values for every variable.
    pub values: Vec<i64>,
}

pub(crate) struct Solution {
    /// Assignment by cell index.
    pub assignment: Vec<i64>,
    /// Residual `T − ∂s` by cell index (reduced in the mod-p case).
    pub residual: Vec<i64>,
}

struct Search<'a> {
    pb: &'a Problem,
    order: Vec<usize>,
    settle: Vec<Vec<usize>>,
    residual: Vec<i64>,
    assignment: Vec<i64>,
    best_value: f64,
    best: Option<Vec<i64>>,
}

/// Canonical objective: both masses summed in cell index order, then added.
/// The solver and the chain types agree on this bit for bit.
fn canonical_value(pb: &Problem, residual: &[i64], assignment: &[i64]) -> f64 {
    let r = sum_in_order(
        residual
            .iter()
            .zip(&pb.target_volumes)
            .filter(|(g, _)| **g != 0)
            .map(|(&g, &v)| pb.norm.of(g) as f64 * v),
    );
    let s = sum_in_order(
        assignment
            .iter()
            .zip(&pb.var_volumes)
            .filter(|(g, _)| **g != 0)
            .map(|(&g, &v)| pb.norm.of(g) as f64 * v),
    );
    match pb.mode {
        Mode::Flat => r + s,
        Mode::Fill => s,
    }
}

fn tolerance(value: f64) -> f64 {
    1e-9 * (1.0 + value.abs())
}

impl<'a> Search<'a> {
    fn new(pb: &'a Problem) -> Self {
        let n = pb.var_volumes.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            pb.var_volumes[b]
                .partial_cmp(&pb.var_volumes[a])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut position = vec![0; n];
        for (pos, &v) in order.iter().enumerate() {
            position[v] = pos;
        }
        let mut last: Vec<Option<usize>> = vec![None; pb.target.len()];
        for (v, faces) in pb.var_faces.iter().enumerate() {
            for &(tau, _) in faces {
                let pos = position[v];
                last[tau] = Some(last[tau].map_or(pos, |q: usize| q.max(pos)));
            }
        }
        let mut settle = vec![Vec::new(); n];
        for (tau, l) in last.iter().enumerate() {
            if let Some(pos) = l {
                settle[*pos].push(tau);
            }
        }
        Search {
            pb,
            order,
            settle,
            residual: pb.target.iter().map(|&g| pb.norm.reduce(g)).collect(),
            assignment: vec![0; n],
            best_value: f64::INFINITY,
            best: None,
        }
    }

    fn cell_cost(&self, tau: usize) -> Option<f64> {
        let g = self.residual[tau];
        match self.pb.mode {
            Mode::Flat => Some(self.pb.norm.of(g) as f64 * self.pb.target_volumes[tau]),
            Mode::Fill => (g == 0).then_some(0.0),
        }
    }

    fn unsettled_cost(&self, settled: &[bool]) -> Option<f64> {
        let mut cost = 0.0;
        for tau in 0..self.residual.len() {
            if !settled[tau] {
                cost += self.cell_cost(tau)?;
            }
        }
        Some(cost)
    }

    fn offer(&mut self) {
        let value = canonical_value(self.pb, &self.residual, &self.assignment);
        let better = match &self.best {
            None => true,
            Some(best) => match value.partial_cmp(&self.best_value) {
                Some(Ordering::Less) => true,
                Some(Ordering::Equal) => self.assignment < *best,
                _ => false,
            },
        };
        if better {
            self.best_value = value;
            self.best = Some(self.assignment.clone());
        }
    }

    fn assign(&mut self, var: usize, value: i64) {
        let delta = value - self.assignment[var];
        self.assignment[var] = value;
        if delta != 0 {
            for &(tau, c) in &self.pb.var_faces[var] {
                self.residual[tau] = self.pb.norm.reduce(self.residual[tau] - c * delta);
            }
        }
    }

    fn descend(&mut self, pos: usize, cost: f64) {
        if pos == self.order.len() {
            self.offer();
            return;
        }
        let var = self.order[pos];
        let vol = self.pb.var_volumes[var];
        for vi in 0..self.pb.values.len() {
            let value = self.pb.values[vi];
            self.assign(var, value);
            let mut bound = cost + self.pb.norm.of(value) as f64 * vol;
            let mut feasible = true;
            for i in 0..self.settle[pos].len() {
                match self.cell_cost(self.settle[pos][i]) {
                    Some(c) => bound += c,
                    None => {
                        feasible = false;
                        break;
                    }
                }
            }
            if feasible && bound <= self.best_value + tolerance(self.best_value) {
                self.descend(pos + 1, bound);
            }
        }
        self.assign(var, 0);
    }

    fn run(mut self) -> Option<Solution> {
        let mut settled = vec![false; self.residual.len()];
        for cells in &self.settle {
            for &tau in cells {
                settled[tau] = true;
            }
        }
        // Cells without cofaces are paid for (or must vanish) regardless of s.
        let fixed = self.unsettled_cost(&settled)?;
        if self.pb.mode == Mode::Flat {
            // s = 0 is always feasible and seeds the incumbent.
            self.offer();
        }
        self.descend(0, fixed);
        let best = self.best?;
        let mut residual: Vec<i64> = self.pb.target.iter().map(|&g| self.pb.norm.reduce(g)).collect();
        for (var, &value) in best.iter().enumerate() {
            for &(tau, c) in &self.pb.var_faces[var] {
                residual[tau] = self.pb.norm.reduce(residual[tau] - c * value);
            }
        }
        Some(Solution {
            assignment: best,
            residual,
        })
    }
}

/// Exact optimum, or `None` in fill mode when no assignment satisfies the
/// constraints. Among optimal assignments the lexicographically least (by
/// cell index, then value) is returned.
pub(crate) fn solve(pb: &Problem) -> Option<Solution> {
    Search::new(pb).run()
}
