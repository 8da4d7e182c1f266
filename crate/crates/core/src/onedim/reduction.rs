//! The admissible-decomposition reduction.
//!
//! After preprocessing no end point is a start point, so every item is an
//! edge of a bipartite graph from start points to end points. A piece
//! `(α₀, …, α_k)` stands for `Σ (−1)^m T_{α_m}`: even entries are traversed
//! forwards (start → end), odd entries backwards (end → start). A piece is a
//! closed walk exactly when `k` is odd.
//!
//! While at least `p` pieces are open, take the lowest-index open piece `S₁`
//! (last entry `a`, right end `e`) and the next `p − 1` open pieces ending
//! at `e`.
//!
//! * `k₁ = 0`: `S₁ = (a)` goes to `Q`; every partner traverses `a` backwards,
//!   closing up when its left end is `start(a)` and otherwise continuing
//!   with another open piece starting at `start(a)`. The number of open
//!   pieces drops by `p`.
//! * `k₁ ≥ 2`: with `b` the entry before `a`, every backward use of `b` and
//!   the forward `a` are removed, the partners traverse `a` backwards, and
//!   `b` is used forwards once. Walks are re-linked at `start(b)`: a partner
//!   containing `b` closes up with its own last tail, the others take the
//!   remaining tails, then `(b)`. The number of open pieces is unchanged and
//!   `S₁` loses at least two entries.
//!
//! Pieces may use an index more than once; the rewiring acts on occurrences,
//! so this is harmless for the endpoint bookkeeping.

use std::collections::HashMap;

use super::{preprocess, weighted_boundary, CurveSystem, OneDimError};
use crate::chain::Modulus;

/// Result of [`extract_cycle_indices`].
#[derive(Clone, Debug, PartialEq)]
pub struct CycleCut {
    /// Sorted original ids `Γ₁`.
    pub gamma1: Vec<usize>,
    /// Reduction steps taken.
    pub steps: usize,
    /// Admissibility checks passed (one per step, plus the final one).
    pub checks: usize,
    /// `Σ |coefficient|·mass` of `S − p·Σ_{Γ₁} T_i`.
    pub output_mass: f64,
    /// `(p − 1)·Σ mass(T_i)`.
    pub mass_bound: f64,
}

struct Decomposition {
    p: usize,
    start: Vec<usize>,
    end: Vec<usize>,
    pieces: Vec<Vec<usize>>,
}

fn is_open(piece: &[usize]) -> bool {
    piece.len() % 2 == 1
}

impl Decomposition {
    fn right(&self, piece: &[usize]) -> usize {
        self.end[*piece.last().expect("pieces are nonempty")]
    }

    fn left(&self, piece: &[usize]) -> usize {
        self.start[piece[0]]
    }

    fn open_slots(&self) -> Vec<usize> {
        (0..self.pieces.len()).filter(|&i| is_open(&self.pieces[i])).collect()
    }

    fn measure(&self) -> (usize, usize) {
        let open = self.open_slots();
        let k1 = open.first().map_or(0, |&i| self.pieces[i].len() - 1);
        (open.len(), k1)
    }

    fn dump(&self) -> String {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|piece| {
                let terms: Vec<String> = piece
                    .iter()
                    .enumerate()
                    .map(|(m, &i)| format!("{}{}", if m % 2 == 0 { "+" } else { "-" }, i + 1))
                    .collect();
                format!("({})", terms.join(" "))
            })
            .collect();
        format!("p = {}, pieces = {}", self.p, parts.join(" "))
    }

    fn defect(&self, what: &str) -> OneDimError {
        OneDimError::Defect(format!("{what}; decomposition: {}", self.dump()))
    }

    /// Index multiplicities, alternating endpoint matching, and
    /// closed-iff-odd.
    fn check(&self) -> Result<(), OneDimError> {
        let n = self.start.len();
        let mut even = vec![0usize; n];
        let mut odd = vec![0usize; n];
        for piece in &self.pieces {
            if piece.is_empty() {
                return Err(self.defect("empty piece"));
            }
            for (m, &i) in piece.iter().enumerate() {
                if m % 2 == 0 {
                    even[i] += 1;
                } else {
                    odd[i] += 1;
                }
            }
            for m in 0..piece.len() - 1 {
                let (x, y) = (piece[m], piece[m + 1]);
                let ok = if m % 2 == 0 {
                    self.end[x] == self.end[y]
                } else {
                    self.start[x] == self.start[y]
                };
                if !ok {
                    return Err(self.defect(&format!("entries {} and {} do not match at position {m}", x + 1, y + 1)));
                }
            }
            if !is_open(piece) && self.start[*piece.last().expect("nonempty")] != self.left(piece) {
                return Err(self.defect("odd-length piece is not closed"));
            }
        }
        for i in 0..n {
            let ok = (even[i] == 1 && odd[i] == 0) || (even[i] == 0 && odd[i] == self.p - 1);
            if !ok {
                return Err(self.defect(&format!(
                    "index {} used {} times forwards and {} times backwards",
                    i + 1,
                    even[i],
                    odd[i]
                )));
            }
        }
        Ok(())
    }

    fn compact(&mut self) {
        self.pieces.retain(|piece| !piece.is_empty());
    }

    fn step_single(&mut self, s1: usize, partners: &[usize]) -> Result<(), OneDimError> {
        let a = self.pieces[s1][0];
        let s0 = self.start[a];
        let group: Vec<usize> = std::iter::once(s1).chain(partners.iter().copied()).collect();
        let (same, other): (Vec<usize>, Vec<usize>) = partners.iter().partition(|&&j| self.left(&self.pieces[j]) == s0);
        let extras: Vec<usize> = self
            .open_slots()
            .into_iter()
            .filter(|i| !group.contains(i) && self.left(&self.pieces[*i]) == s0)
            .take(other.len())
            .collect();
        if extras.len() < other.len() {
            return Err(self.defect("not enough open pieces share the left end of S1"));
        }
        for &j in &same {
            self.pieces[j].push(a);
        }
        for (&j, &x) in other.iter().zip(&extras) {
            let tail = std::mem::take(&mut self.pieces[x]);
            self.pieces[j].push(a);
            self.pieces[j].extend(tail);
        }
        self.pieces[s1].clear();
        self.compact();
        Ok(())
    }

    fn step_reroute(&mut self, s1: usize, partners: &[usize]) -> Result<(), OneDimError> {
        let k1 = self.pieces[s1].len() - 1;
        let a = self.pieces[s1][k1];
        let b = self.pieces[s1][k1 - 1];
        self.pieces[s1].pop();

        // Segments of every touched piece, cut at each backward use of b.
        struct Seg {
            items: Vec<usize>,
            slot: usize,
            head: bool,
        }
        let mut segs: Vec<Seg> = Vec::new();
        let mut last_seg: HashMap<usize, usize> = HashMap::new();
        let mut keep: Vec<Option<Vec<usize>>> = Vec::with_capacity(self.pieces.len());
        for (slot, piece) in self.pieces.iter().enumerate() {
            let has_b = piece.iter().enumerate().any(|(m, &i)| m % 2 == 1 && i == b);
            let touched = has_b || slot == s1 || partners.contains(&slot);
            if !touched {
                keep.push(Some(piece.clone()));
                continue;
            }
            keep.push(None);
            let open = is_open(piece) || slot == s1;
            let seq: Vec<usize> = if open {
                piece.clone()
            } else {
                // Rotate a closed walk to begin right after a use of b.
                let t = piece.iter().enumerate().position(|(m, &i)| m % 2 == 1 && i == b).expect("has b");
                piece[t + 1..].iter().chain(&piece[..=t]).copied().collect()
            };
            let mut cur = Vec::new();
            let mut first = true;
            for (m, &i) in seq.iter().enumerate() {
                if m % 2 == 1 && i == b {
                    if !cur.is_empty() {
                        segs.push(Seg {
                            items: std::mem::take(&mut cur),
                            slot,
                            head: open && first,
                        });
                    }
                    first = false;
                } else {
                    cur.push(i);
                }
            }
            if !cur.is_empty() {
                segs.push(Seg {
                    items: cur,
                    slot,
                    head: open && first,
                });
            }
            if open && slot != s1 {
                last_seg.insert(slot, segs.len() - 1);
            }
        }

        // Followers after each partner's new backward a.
        let own: Vec<Option<usize>> = partners
            .iter()
            .map(|&j| {
                let s = last_seg[&j];
                (!segs[s].head).then_some(s)
            })
            .collect();
        let mut queue: Vec<usize> = (0..segs.len())
            .filter(|&s| !segs[s].head && !own.contains(&Some(s)))
            .collect();
        segs.push(Seg {
            items: vec![b],
            slot: usize::MAX,
            head: false,
        });
        queue.push(segs.len() - 1);
        let mut queue = queue.into_iter();
        let mut next: HashMap<usize, usize> = HashMap::new();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for (&j, own_tail) in partners.iter().zip(&own) {
            match own_tail {
                Some(s) => {
                    let mut c = segs[*s].items.clone();
                    c.push(a);
                    cycles.push(c);
                }
                None => {
                    let f = queue.next().ok_or_else(|| self.defect("ran out of tails"))?;
                    next.insert(last_seg[&j], f);
                }
            }
        }
        if queue.next().is_some() {
            return Err(self.defect("unused tails after re-linking"));
        }

        let mut pieces: Vec<Vec<usize>> = keep.into_iter().map(Option::unwrap_or_default).collect();
        for (s, seg) in segs.iter().enumerate() {
            if !seg.head {
                continue;
            }
            let mut walk = seg.items.clone();
            if let Some(&f) = next.get(&s) {
                walk.push(a);
                walk.extend(&segs[f].items);
            }
            pieces[seg.slot] = walk;
        }
        pieces.extend(cycles);
        self.pieces = pieces;
        self.compact();
        Ok(())
    }

    fn reduce(&mut self) -> Result<(usize, usize), OneDimError> {
        let mut steps = 0;
        let mut checks = 0;
        loop {
            self.check()?;
            checks += 1;
            let open = self.open_slots();
            if open.len() < self.p {
                if !open.is_empty() {
                    return Err(self.defect("fewer than p open pieces remain but not none"));
                }
                return Ok((steps, checks));
            }
            let s1 = open[0];
            let e = self.right(&self.pieces[s1]);
            let partners: Vec<usize> = open[1..]
                .iter()
                .copied()
                .filter(|&i| self.right(&self.pieces[i]) == e)
                .take(self.p - 1)
                .collect();
            if partners.len() < self.p - 1 {
                return Err(self.defect("fewer than p open pieces share the right end of S1"));
            }
            let before = self.measure();
            if self.pieces[s1].len() == 1 {
                self.step_single(s1, &partners)?;
            } else {
                self.step_reroute(s1, &partners)?;
            }
            let after = self.measure();
            if after >= before {
                return Err(self.defect(&format!("measure did not decrease: {before:?} -> {after:?}")));
            }
            steps += 1;
        }
    }
}

/// `Γ₁` such that `S − p·Σ_{i∈Γ₁} T_i` is a cycle.
///
/// Requires every coefficient of the system boundary to be divisible by
/// `p`. The output boundary is recomputed exactly before returning.
pub fn extract_cycle_indices(sys: &CurveSystem, p: Modulus) -> Result<CycleCut, OneDimError> {
    let pv = p.get();
    for (point, &g) in &weighted_boundary(sys, |_| 1) {
        if g.rem_euclid(pv as i64) != 0 {
            return Err(OneDimError::NotDivisible {
                point: point.clone(),
                coefficient: g,
                p: pv,
            });
        }
    }
    let pre = preprocess(sys);
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut intern = |s: &str| {
        let next = ids.len();
        *ids.entry(s.to_string()).or_insert(next)
    };
    let items = pre.system.items();
    let start: Vec<usize> = items.iter().map(|c| intern(&c.start)).collect();
    let end: Vec<usize> = items.iter().map(|c| intern(&c.end)).collect();
    let mut dec = Decomposition {
        p: pv as usize,
        start,
        end,
        pieces: (0..items.len()).map(|i| vec![i]).collect(),
    };
    let (steps, checks) = dec.reduce()?;

    let mut gamma1: Vec<usize> = Vec::new();
    for piece in &dec.pieces {
        for (m, &i) in piece.iter().enumerate() {
            if m % 2 == 1 {
                gamma1.extend(&pre.trace[i]);
            }
        }
    }
    gamma1.sort_unstable();
    gamma1.dedup();

    let p_i = pv as i64;
    let weight = |id: usize| if gamma1.binary_search(&id).is_ok() { 1 - p_i } else { 1 };
    let residual = weighted_boundary(sys, weight);
    if !residual.is_empty() {
        return Err(OneDimError::Defect(format!("output boundary is not zero: {residual:?}")));
    }
    let output_mass = sys
        .items()
        .iter()
        .map(|c| weight(c.id).unsigned_abs() as f64 * c.mass)
        .fold(0.0, |a, b| a + b);
    Ok(CycleCut {
        gamma1,
        steps,
        checks,
        output_mass,
        mass_bound: (pv - 1) as f64 * sys.total_mass(),
    })
}
