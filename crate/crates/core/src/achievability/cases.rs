//! Discrete cases of the achievability search and their linear systems.
//!
//! A case fixes, for every box, which sorted side can expand, and for every
//! (arrangement, box) slot whether the box is closed or expanded, and if
//! expanded, the position (rank) its expanded side takes in sorted order.
//! Within one case every presented side is a single variable, so nesting
//! becomes a conjunction of strict inequalities between variables.

use crate::feasibility::{Comparison, LinExpr, LinearSystem, Var};
use crate::scalar::Scalar;

use super::{AchievabilityError, PermSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseState {
    Closed,
    /// Expanded side lands at this 1-based position of the sorted sides.
    Expanded {
        rank: usize,
    },
}

impl CaseState {
    pub fn is_closed(self) -> bool {
        self == CaseState::Closed
    }

    /// Options for a box whose expandable side is `side` in `dim`
    /// dimensions, in enumeration order: closed, then ranks ascending.
    pub fn options(side: usize, dim: usize) -> impl Iterator<Item = CaseState> {
        std::iter::once(CaseState::Closed).chain((side..=dim).map(|rank| CaseState::Expanded { rank }))
    }

    pub fn option_count(side: usize, dim: usize) -> usize {
        dim - side + 2
    }

    fn option_index(self, side: usize) -> usize {
        match self {
            CaseState::Closed => 0,
            CaseState::Expanded { rank } => rank - side + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CaseAssignment {
    /// 1-based expandable side per box.
    pub expand_side: Vec<usize>,
    /// `states[arrangement][box]`.
    pub states: Vec<Vec<CaseState>>,
}

impl CaseAssignment {
    /// `C`/`E` per box for one arrangement, innermost first.
    pub fn pattern(&self, spec: &PermSpec, arrangement: usize) -> String {
        spec.arrangements()[arrangement]
            .values()
            .iter()
            .map(|&b| {
                if self.states[arrangement][b - 1].is_closed() {
                    'C'
                } else {
                    'E'
                }
            })
            .collect()
    }

    /// Position of this case in the full (unnormalized) lexicographic
    /// enumeration.
    pub fn index(&self, spec: &PermSpec) -> u128 {
        let (k, n) = (spec.boxes(), spec.dim());
        let mut index: u128 = 0;
        // Expand-side tuples before this one.
        let mut prefix = vec![];
        for b in 0..k {
            for smaller in 1..self.expand_side[b] {
                let mut sides = prefix.clone();
                sides.push(smaller);
                index += leaves_with_prefix(spec, &sides);
            }
            prefix.push(self.expand_side[b]);
        }
        // Mixed-radix position of the states.
        let mut within: u128 = 0;
        for row in &self.states {
            for (b, state) in row.iter().enumerate() {
                let radix = CaseState::option_count(self.expand_side[b], n) as u128;
                within = within * radix + state.option_index(self.expand_side[b]) as u128;
            }
        }
        index + within
    }
}

/// Number of state combinations for fixed expandable sides.
pub fn leaves_for_sides(spec: &PermSpec, sides: &[usize]) -> u128 {
    let m = spec.arrangements().len() as u32;
    sides
        .iter()
        .map(|&j| (CaseState::option_count(j, spec.dim()) as u128).pow(m))
        .product()
}

/// Leaves whose expand-side tuple starts with `prefix`.
fn leaves_with_prefix(spec: &PermSpec, prefix: &[usize]) -> u128 {
    let m = spec.arrangements().len() as u32;
    let n = spec.dim();
    let per_box_any: u128 = (1..=n)
        .map(|j| (CaseState::option_count(j, n) as u128).pow(m))
        .sum();
    leaves_for_sides(spec, prefix) * per_box_any.pow((spec.boxes() - prefix.len()) as u32)
}

/// Total number of cases in the unnormalized enumeration:
/// `Π_boxes Σ_j (n − j + 2)^m`.
pub fn case_count(spec: &PermSpec) -> u128 {
    leaves_with_prefix(spec, &[])
}

/// Normalization filter for the natural/reverse problem: every box closed
/// in exactly one of the two orders, innermost boxes closed, outermost
/// boxes expanded. `states[a][b]` may be `None` for unassigned slots; the
/// check then only looks at what is known.
pub(crate) fn normalization_allows(
    spec: &PermSpec,
    states: &[Vec<Option<CaseState>>],
    arrangement: usize,
    b: usize,
) -> bool {
    let k = spec.boxes();
    let Some(state) = states[arrangement][b] else {
        return true;
    };
    let order = spec.arrangements()[arrangement].values();
    if order[0] == b + 1 && !state.is_closed() {
        return false;
    }
    if order[k - 1] == b + 1 && state.is_closed() {
        return false;
    }
    let other = 1 - arrangement;
    match states[other][b] {
        Some(o) => o.is_closed() != state.is_closed(),
        None => true,
    }
}

/// Deterministic lexicographic enumeration of cases: expandable sides per
/// box first, then states arrangement by arrangement, box by box.
pub fn enumerate_cases(
    spec: &PermSpec,
    normalize: bool,
) -> Result<impl Iterator<Item = CaseAssignment> + '_, AchievabilityError> {
    if normalize && !spec.is_natural_reverse() {
        return Err(AchievabilityError::NormalizeUnsupported);
    }
    Ok(CaseIter::new(spec).filter(move |case| {
        if !normalize {
            return true;
        }
        let states: Vec<Vec<Option<CaseState>>> = case
            .states
            .iter()
            .map(|row| row.iter().map(|&s| Some(s)).collect())
            .collect();
        (0..2).all(|a| (0..spec.boxes()).all(|b| normalization_allows(spec, &states, a, b)))
    }))
}

struct CaseIter<'a> {
    spec: &'a PermSpec,
    sides: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl<'a> CaseIter<'a> {
    fn new(spec: &'a PermSpec) -> Self {
        let k = spec.boxes();
        CaseIter {
            spec,
            sides: vec![1; k],
            digits: vec![0; k * spec.arrangements().len()],
            done: false,
        }
    }

    fn current(&self) -> CaseAssignment {
        let (k, n) = (self.spec.boxes(), self.spec.dim());
        let states = self
            .digits
            .chunks(k)
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(b, &d)| CaseState::options(self.sides[b], n).nth(d).unwrap())
                    .collect()
            })
            .collect();
        CaseAssignment {
            expand_side: self.sides.clone(),
            states,
        }
    }

    fn advance(&mut self) {
        let (k, n) = (self.spec.boxes(), self.spec.dim());
        for i in (0..self.digits.len()).rev() {
            let radix = CaseState::option_count(self.sides[i % k], n);
            self.digits[i] += 1;
            if self.digits[i] < radix {
                return;
            }
            self.digits[i] = 0;
        }
        for b in (0..k).rev() {
            self.sides[b] += 1;
            if self.sides[b] <= n {
                return;
            }
            self.sides[b] = 1;
        }
        self.done = true;
    }
}

impl Iterator for CaseIter<'_> {
    type Item = CaseAssignment;

    fn next(&mut self) -> Option<CaseAssignment> {
        if self.done {
            return None;
        }
        let case = self.current();
        self.advance();
        Some(case)
    }
}

/// The linear system of a case together with the variables it introduced.
#[derive(Debug, Clone)]
pub struct CaseSystem {
    pub system: LinearSystem,
    /// `sides[box][i]` is the closed side `i + 1` of the box.
    pub sides: Vec<Vec<Var>>,
    /// `amounts[arrangement][box]`, present for expanded slots.
    pub amounts: Vec<Vec<Option<Var>>>,
}

pub(crate) fn side_name(label: &str, i: usize) -> String {
    if label.chars().count() == 1 {
        format!("{}{i}", label.to_lowercase())
    } else {
        format!("{}_{i}", label.to_lowercase())
    }
}

/// Presented sides of a slot, in sorted order, as variables.
pub(crate) fn presented_vars(
    sides: &[Var],
    state: CaseState,
    expand_side: usize,
    amount: Option<Var>,
) -> Vec<Var> {
    match state {
        CaseState::Closed => sides.to_vec(),
        CaseState::Expanded { rank } => {
            let mut v: Vec<Var> = sides
                .iter()
                .enumerate()
                .filter(|(i, _)| i + 1 != expand_side)
                .map(|(_, &x)| x)
                .collect();
            v.insert(rank - 1, amount.expect("expanded slot has an amount"));
            v
        }
    }
}

/// Constraints tying an expansion amount to its box: strictly longer than
/// the closed side, and between the sides around its rank.
pub(crate) fn push_expansion(
    sys: &mut LinearSystem,
    sides: &[Var],
    expand_side: usize,
    rank: usize,
    amount: Var,
) {
    let n = sides.len();
    sys.push(sides[expand_side - 1], Comparison::Less, amount);
    if rank > expand_side {
        sys.push(sides[rank - 1], Comparison::LessEq, amount);
    }
    if rank < n {
        sys.push(amount, Comparison::LessEq, sides[rank]);
    }
}

pub(crate) fn push_box_basics(sys: &mut LinearSystem, sides: &[Var]) {
    sys.push(LinExpr::constant(Scalar::one()), Comparison::LessEq, sides[0]);
    for w in sides.windows(2) {
        sys.push(w[0], Comparison::LessEq, w[1]);
    }
}

pub(crate) fn push_domination(sys: &mut LinearSystem, inner: &[Var], outer: &[Var]) {
    for (i, o) in inner.iter().zip(outer) {
        sys.push(*i, Comparison::Less, *o);
    }
}

pub(crate) fn check_case(case: &CaseAssignment, spec: &PermSpec) -> Result<(), AchievabilityError> {
    let (k, n, m) = (spec.boxes(), spec.dim(), spec.arrangements().len());
    let bad = |why: String| Err(AchievabilityError::InconsistentCase(why));
    if case.expand_side.len() != k {
        return bad(format!("{} expand sides for {k} boxes", case.expand_side.len()));
    }
    if let Some(j) = case.expand_side.iter().find(|&&j| j == 0 || j > n) {
        return bad(format!("expand side {j} outside 1..={n}"));
    }
    if case.states.len() != m || case.states.iter().any(|row| row.len() != k) {
        return bad("state table does not match the arrangements".into());
    }
    for row in &case.states {
        for (b, state) in row.iter().enumerate() {
            if let CaseState::Expanded { rank } = *state {
                if rank < case.expand_side[b] || rank > n {
                    return bad(format!(
                        "rank {rank} invalid for expand side {}",
                        case.expand_side[b]
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Builds the strict system whose solutions are exactly the box sets (up to
/// scale, sides ≥ 1) realizing `case`. The expansion bound is not included.
pub fn case_to_system(case: &CaseAssignment, spec: &PermSpec) -> Result<CaseSystem, AchievabilityError> {
    check_case(case, spec)?;
    let (k, n) = (spec.boxes(), spec.dim());
    let labels = spec.labels();
    let mut sys = LinearSystem::new();
    let sides: Vec<Vec<Var>> = labels
        .iter()
        .map(|l| (1..=n).map(|i| sys.add_var(side_name(l, i))).collect())
        .collect();
    for s in &sides {
        push_box_basics(&mut sys, s);
    }
    let mut amounts = vec![vec![None; k]; spec.arrangements().len()];
    for (a, perm) in spec.arrangements().iter().enumerate() {
        for b in 0..k {
            if let CaseState::Expanded { rank } = case.states[a][b] {
                let j = case.expand_side[b];
                let e = sys.add_var(format!("{}'({})", side_name(&labels[b], j), perm.to_letters()));
                push_expansion(&mut sys, &sides[b], j, rank, e);
                amounts[a][b] = Some(e);
            }
        }
        let presented: Vec<Vec<Var>> = (0..k)
            .map(|b| presented_vars(&sides[b], case.states[a][b], case.expand_side[b], amounts[a][b]))
            .collect();
        for w in perm.values().windows(2) {
            push_domination(&mut sys, &presented[w[0] - 1], &presented[w[1] - 1]);
        }
    }
    Ok(CaseSystem {
        system: sys,
        sides,
        amounts,
    })
}
