use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;

use super::boxes::{split_along, OrdF};
use super::{subsets, BoxCell, BoxChain, BoxError};
use crate::chain::{validate_complex, Complex, ComplexDescription, IntChain, Modulus, RawCell};
use crate::flatnorm::flat_norm_mod_p_int;

/// A rectilinear grid given by sorted per-axis coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    breaks: Vec<Vec<f64>>,
}

/// A grid complex together with the lookup from boxes to cell indices.
#[derive(Clone, Debug)]
pub struct GridComplex {
    pub complex: Arc<Complex>,
    pub index: HashMap<BoxCell, usize>,
    pub cells: Vec<Vec<BoxCell>>,
}

impl Grid {
    pub fn new(breaks: Vec<Vec<f64>>) -> Self {
        let breaks = breaks
            .into_iter()
            .map(|axis| {
                let set: BTreeSet<OrdF> = axis.into_iter().map(|x| OrdF(if x == 0.0 { 0.0 } else { x })).collect();
                set.into_iter().map(|x| x.0).collect()
            })
            .collect();
        Grid { breaks }
    }

    /// The coarsest grid on which every cell of `t` is a union of grid cells.
    pub fn from_chain(t: &BoxChain) -> Self {
        Grid {
            breaks: t.breakpoints(),
        }
    }

    pub fn breaks(&self) -> &[Vec<f64>] {
        &self.breaks
    }

    pub fn ambient_dim(&self) -> usize {
        self.breaks.len()
    }

    /// Splits every grid interval into `m` equal parts.
    pub fn refine(&self, m: u64) -> Result<Grid, BoxError> {
        if m < 1 {
            return Err(BoxError::BadSubdivision { min: 1, found: m });
        }
        let breaks = self
            .breaks
            .iter()
            .map(|axis| {
                let mut out = Vec::new();
                for w in axis.windows(2) {
                    for i in 0..m {
                        out.push(w[0] + (w[1] - w[0]) * i as f64 / m as f64);
                    }
                }
                out.extend(axis.last());
                out
            })
            .collect();
        Ok(Grid::new(breaks))
    }

    pub fn with_break(&self, axis: usize, r: f64) -> Grid {
        let mut breaks = self.breaks.clone();
        breaks[axis].push(r);
        Grid::new(breaks)
    }

    /// All grid cells of dimension at most `max_dim`, with cubical incidences.
    pub fn complex(&self, max_dim: usize) -> GridComplex {
        let n = self.breaks.len();
        let top = max_dim.min(n);
        let mut cells: Vec<Vec<BoxCell>> = Vec::new();
        for d in 0..=top {
            let mut here = Vec::new();
            for dirs in subsets(n, d) {
                let choices: Vec<Vec<(f64, f64)>> = (0..n)
                    .map(|j| {
                        if dirs.contains(&j) {
                            self.breaks[j].windows(2).map(|w| (w[0], w[1])).collect()
                        } else {
                            self.breaks[j].iter().map(|&x| (x, x)).collect()
                        }
                    })
                    .collect();
                product(&choices, &mut |bounds| here.push(BoxCell::from_bounds_unchecked(bounds.to_vec())));
            }
            here.sort();
            cells.push(here);
        }
        let mut index = HashMap::new();
        let mut desc = ComplexDescription::new(n);
        for (d, list) in cells.iter().enumerate() {
            for (i, cell) in list.iter().enumerate() {
                index.insert(cell.clone(), i);
                let mut raw = RawCell::new(cell.to_string(), cell.volume());
                if d > 0 {
                    for (face, sign) in cell.faces() {
                        raw = raw.with_face(face.to_string(), sign);
                    }
                }
                desc.push(d, raw);
            }
        }
        // Keep a slot for every requested dimension even when it is empty.
        while desc.cells.len() <= top {
            desc.cells.push(Vec::new());
        }
        let complex = validate_complex(&desc).expect("grid complexes are valid");
        GridComplex {
            complex: Arc::new(complex),
            index,
            cells,
        }
    }
}

fn product(choices: &[Vec<(f64, f64)>], f: &mut impl FnMut(&[(f64, f64)])) {
    fn rec(choices: &[Vec<(f64, f64)>], cur: &mut Vec<(f64, f64)>, f: &mut impl FnMut(&[(f64, f64)])) {
        if cur.len() == choices.len() {
            f(cur);
            return;
        }
        for &c in &choices[cur.len()] {
            cur.push(c);
            rec(choices, cur, f);
            cur.pop();
        }
    }
    rec(choices, &mut Vec::with_capacity(choices.len()), f);
}

impl GridComplex {
    /// The integer chain of `t` on this grid.
    pub fn embed(&self, t: &BoxChain, grid: &Grid) -> Result<IntChain, BoxError> {
        if t.ambient_dim() != grid.ambient_dim() {
            return Err(BoxError::GridMismatch);
        }
        let mut coeffs: HashMap<usize, BigInt> = HashMap::new();
        for (cell, g) in t.iter() {
            for piece in split_along(cell, grid.breaks()) {
                let i = *self.index.get(&piece).ok_or_else(|| BoxError::NotOnGrid(cell.to_string()))?;
                *coeffs.entry(i).or_default() += g;
            }
        }
        Ok(IntChain::from_coeffs(&self.complex, t.dim(), coeffs)?)
    }

    /// The box chain of an integer chain on this grid.
    pub fn decode(&self, c: &IntChain) -> BoxChain {
        let n = self.complex.ambient_dim();
        let raw = c.iter().map(|(i, g)| (self.cells[c.dim()][i].clone(), g.clone())).collect();
        BoxChain::canonical(n, c.dim(), raw)
    }
}

/// The complex of all cells of `t` and their iterated faces, with the chain.
pub fn compile(t: &BoxChain) -> (Arc<Complex>, IntChain) {
    let n = t.ambient_dim();
    let k = t.dim();
    let mut levels: Vec<BTreeSet<BoxCell>> = vec![BTreeSet::new(); k + 1];
    for (cell, _) in t.iter() {
        levels[k].insert(cell.clone());
    }
    for d in (1..=k).rev() {
        let faces: Vec<BoxCell> = levels[d].iter().flat_map(|c| c.faces().into_iter().map(|(f, _)| f)).collect();
        levels[d - 1].extend(faces);
    }
    let mut desc = ComplexDescription::new(n);
    if !t.is_zero() {
        for (d, set) in levels.iter().enumerate() {
            for cell in set {
                let mut raw = RawCell::new(cell.to_string(), cell.volume());
                if d > 0 {
                    for (face, sign) in cell.faces() {
                        raw = raw.with_face(face.to_string(), sign);
                    }
                }
                desc.push(d, raw);
            }
        }
    }
    let complex = Arc::new(validate_complex(&desc).expect("canonical box chains compile to valid complexes"));
    let chain = if t.is_zero() {
        IntChain::zero(&complex, k)
    } else {
        let labels: Vec<(String, BigInt)> = t.iter().map(|(c, g)| (c.to_string(), g.clone())).collect();
        IntChain::from_labels(&complex, k, labels.iter().map(|(l, g)| (l.as_str(), g.clone())))
            .expect("every cell was added")
    };
    (complex, chain)
}

/// `𝓕_p` of `t` on its breakpoint grid and on the `m`-fold refinement of
/// that grid. Competitors are the `(k+1)`-cells of each grid, so the refined
/// value never exceeds the coarse one.
pub fn flat_norm_under_refinement(t: &BoxChain, p: Modulus, m: u64) -> Result<(f64, f64), BoxError> {
    if m < 2 {
        return Err(BoxError::BadSubdivision { min: 2, found: m });
    }
    if t.is_zero() {
        return Ok((0.0, 0.0));
    }
    let coarse_grid = Grid::from_chain(t);
    let fine_grid = coarse_grid.refine(m)?;
    let mut values = [0.0; 2];
    for (slot, grid) in [coarse_grid, fine_grid].iter().enumerate() {
        let gc = grid.complex(t.dim() + 1);
        let chain = gc.embed(t, grid)?;
        values[slot] = flat_norm_mod_p_int(&chain, p).value;
    }
    Ok((values[0], values[1]))
}
