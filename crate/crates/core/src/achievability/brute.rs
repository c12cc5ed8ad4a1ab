//! Bounded integer search, independent of the case engine.
//!
//! Every box is drawn from integer sorted dimensions in `[1, max_side]` with
//! one expandable side, and every expansion amount is an integer in
//! `(a_j, 2·a_j]`, so whatever this finds also satisfies the expansion
//! bound. Boxes are chosen in order with a pairwise fit filter; complete box
//! sets are checked arrangement by arrangement with a small backtracking
//! search over presentations.

use thiserror::Error;

use crate::model::{BoxDesign, Dims, Presentation};
use crate::nesting::{verify_trick, Arrangement, TrickInstance};
use crate::scalar::Scalar;

use super::PermSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteError {
    #[error("max_side must be at least 2, got {0}")]
    MaxSideTooSmall(i64),
    #[error("search budget of {0} box sets exhausted")]
    BudgetExceeded(u64),
    #[error("found instance fails verification: {0}")]
    Unverified(String),
}

/// One box shape with its options, closed first then amounts ascending.
struct Design {
    dims: Vec<i64>,
    side: usize,
    /// `(amount, presented sorted sides)`; amount 0 means closed.
    options: Vec<(i64, Vec<i64>)>,
}

fn designs(dim: usize, max_side: i64) -> Vec<Design> {
    let mut shapes: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..dim {
        shapes = shapes
            .into_iter()
            .flat_map(|s: Vec<i64>| {
                let lo = s.last().copied().unwrap_or(1);
                (lo..=max_side).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for dims in shapes {
        for side in 1..=dim {
            let mut options = vec![(0, dims.clone())];
            let a = dims[side - 1];
            for e in a + 1..=2 * a {
                let mut shown = dims.clone();
                shown[side - 1] = e;
                shown.sort_unstable();
                options.push((e, shown));
            }
            out.push(Design {
                dims: dims.clone(),
                side,
                options,
            });
        }
    }
    out
}

fn strictly_above(outer: &[i64], inner: &[i64]) -> bool {
    outer.iter().zip(inner).all(|(o, i)| o > i)
}

struct Brute<'a> {
    spec: &'a PermSpec,
    designs: Vec<Design>,
    /// `fits[x][y]`: some option of `y` strictly contains closed `x`, a
    /// necessary condition for `x` directly inside `y`.
    fits: Vec<Vec<bool>>,
    /// `position[a][b]`: where box `b` sits in arrangement `a`.
    position: Vec<Vec<usize>>,
    chosen: Vec<usize>,
    budget: Option<u64>,
    leaves: u64,
    limit: usize,
    found: Vec<TrickInstance>,
}

/// Lexicographically first integer instance within `max_side`, if any.
pub fn brute_force_search(
    spec: &PermSpec,
    max_side: i64,
    budget: Option<u64>,
) -> Result<Option<TrickInstance>, BruteError> {
    Ok(brute_force_witnesses(spec, max_side, budget, 1)?
        .into_iter()
        .next())
}

/// Up to `limit` instances in enumeration order.
pub fn brute_force_witnesses(
    spec: &PermSpec,
    max_side: i64,
    budget: Option<u64>,
    limit: usize,
) -> Result<Vec<TrickInstance>, BruteError> {
    if max_side < 2 {
        return Err(BruteError::MaxSideTooSmall(max_side));
    }
    let designs = designs(spec.dim(), max_side);
    let fits = designs
        .iter()
        .map(|x| {
            designs
                .iter()
                .map(|y| y.options.iter().any(|(_, shown)| strictly_above(shown, &x.dims)))
                .collect()
        })
        .collect();
    let position = spec
        .arrangements()
        .iter()
        .map(|p| p.inverse().values().iter().map(|&i| i - 1).collect())
        .collect();
    let mut brute = Brute {
        spec,
        designs,
        fits,
        position,
        chosen: Vec::with_capacity(spec.boxes()),
        budget,
        leaves: 0,
        limit,
        found: Vec::new(),
    };
    if limit > 0 {
        brute.pick_box()?;
    }
    Ok(brute.found)
}

impl Brute<'_> {
    fn pick_box(&mut self) -> Result<(), BruteError> {
        let b = self.chosen.len();
        if b == self.spec.boxes() {
            return self.check_leaf();
        }
        for d in 0..self.designs.len() {
            if !self.compatible(b, d) {
                continue;
            }
            self.chosen.push(d);
            self.pick_box()?;
            self.chosen.pop();
            if self.found.len() >= self.limit {
                break;
            }
        }
        Ok(())
    }

    /// Pairwise filter for placing design `d` as box `b`.
    fn compatible(&self, b: usize, d: usize) -> bool {
        for (a, perm) in self.spec.arrangements().iter().enumerate() {
            let order = perm.values();
            let pos = self.position[a][b];
            if pos > 0 {
                let inner = order[pos - 1] - 1;
                if inner < b && !self.fits[self.chosen[inner]][d] {
                    return false;
                }
            }
            if pos + 1 < order.len() {
                let outer = order[pos + 1] - 1;
                if outer < b && !self.fits[d][self.chosen[outer]] {
                    return false;
                }
            }
        }
        true
    }

    fn check_leaf(&mut self) -> Result<(), BruteError> {
        self.leaves += 1;
        if let Some(budget) = self.budget {
            if self.leaves > budget {
                return Err(BruteError::BudgetExceeded(budget));
            }
        }
        let mut chains = Vec::new();
        for perm in self.spec.arrangements() {
            let order: Vec<usize> = perm.values().iter().map(|&i| self.chosen[i - 1]).collect();
            let mut picks = Vec::with_capacity(order.len());
            if !self.chain(&order, &mut picks) {
                return Ok(());
            }
            chains.push(picks);
        }
        let instance = self.instance(&chains);
        let report = verify_trick(&instance);
        if let Some(v) = report.violations.first() {
            return Err(BruteError::Unverified(v.to_string()));
        }
        self.found.push(instance);
        Ok(())
    }

    /// First choice of options (innermost first) making `order` a strict
    /// chain.
    fn chain(&self, order: &[usize], picks: &mut Vec<usize>) -> bool {
        let i = picks.len();
        if i == order.len() {
            return true;
        }
        let design = &self.designs[order[i]];
        for (o, (_, shown)) in design.options.iter().enumerate() {
            if let Some(&prev) = picks.last() {
                let below = &self.designs[order[i - 1]].options[prev].1;
                if !strictly_above(shown, below) {
                    continue;
                }
            }
            picks.push(o);
            if self.chain(order, picks) {
                return true;
            }
            picks.pop();
        }
        false
    }

    fn instance(&self, chains: &[Vec<usize>]) -> TrickInstance {
        let labels = self.spec.labels();
        let boxes = self
            .chosen
            .iter()
            .zip(&labels)
            .map(|(&d, label)| {
                let design = &self.designs[d];
                let dims = Dims::from_ints(&design.dims).expect("positive sides");
                BoxDesign::new(label.clone(), dims, Some(design.side)).expect("side in range")
            })
            .collect();
        let arrangements = self
            .spec
            .arrangements()
            .iter()
            .zip(chains)
            .map(|(perm, picks)| {
                let order: Vec<String> = perm.values().iter().map(|&i| labels[i - 1].clone()).collect();
                let mut arr = Arrangement::new(perm.to_letters(), order.clone());
                for ((label, &i), &o) in order.iter().zip(perm.values()).zip(picks) {
                    let amount = self.designs[self.chosen[i - 1]].options[o].0;
                    if amount > 0 {
                        arr.presentation
                            .insert(label.clone(), Presentation::Expanded(Scalar::from_int(amount)));
                    }
                }
                arr
            })
            .collect();
        TrickInstance::new(boxes, arrangements)
    }
}
