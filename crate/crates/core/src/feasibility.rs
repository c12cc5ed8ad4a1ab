//! Feasibility of mixed strict / non-strict linear inequality systems over
//! the rationals.
//!
//! [`solve`] runs Fourier–Motzkin elimination, carrying a strictness flag on
//! every derived row: combining two rows gives a strict row iff either input
//! was strict. A system is infeasible iff elimination derives `0 < c` with
//! `c ≤ 0` or `0 ≤ c` with `c < 0`. Feasible systems get an exact witness by
//! back-substitution in reverse elimination order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("constraint {constraint} references undeclared variable #{var}")]
    MalformedSystem { constraint: usize, var: usize },
    #[error("no value for variable {0}")]
    MissingVariable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

/// `Σ coefᵢ·xᵢ + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinExpr {
    pub terms: BTreeMap<usize, Scalar>,
    pub constant: Scalar,
}

impl LinExpr {
    pub fn constant(value: Scalar) -> Self {
        LinExpr {
            terms: BTreeMap::new(),
            constant: value,
        }
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(v.0, Scalar::one());
        LinExpr {
            terms,
            constant: Scalar::zero(),
        }
    }

    fn add_scaled(mut self, other: &LinExpr, factor: &Scalar) -> Self {
        for (&v, c) in &other.terms {
            let entry = self.terms.entry(v).or_insert_with(Scalar::zero);
            *entry += &(c * factor);
            if entry.is_zero() {
                self.terms.remove(&v);
            }
        }
        self.constant += &(&other.constant * factor);
        self
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        LinExpr::default().add_scaled(self, factor)
    }

    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (&v, c)| acc + c * &values[v])
    }
}

impl From<Var> for LinExpr {
    fn from(v: Var) -> Self {
        LinExpr::var(v)
    }
}

impl From<Scalar> for LinExpr {
    fn from(c: Scalar) -> Self {
        LinExpr::constant(c)
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, &Scalar::one())
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, &-Scalar::one())
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        self.scale(&-Scalar::one())
    }
}

impl Mul<&Scalar> for LinExpr {
    type Output = LinExpr;
    fn mul(self, rhs: &Scalar) -> LinExpr {
        self.scale(rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Less,
    LessEq,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Less => "<",
            Comparison::LessEq => "≤",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: LinExpr,
    pub cmp: Comparison,
    pub rhs: LinExpr,
}

impl Constraint {
    pub fn holds(&self, values: &[Scalar]) -> bool {
        let (l, r) = (self.lhs.eval(values), self.rhs.eval(values));
        match self.cmp {
            Comparison::Less => l < r,
            Comparison::LessEq => l <= r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearSystem {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> Var {
        self.variables.push(name.into());
        Var(self.variables.len() - 1)
    }

    pub fn var_named(&self, name: &str) -> Option<Var> {
        self.variables.iter().position(|v| v == name).map(Var)
    }

    pub fn push(&mut self, lhs: impl Into<LinExpr>, cmp: Comparison, rhs: impl Into<LinExpr>) {
        self.constraints.push(Constraint {
            lhs: lhs.into(),
            cmp,
            rhs: rhs.into(),
        });
    }

    pub fn less(&mut self, lhs: impl Into<LinExpr>, rhs: impl Into<LinExpr>) {
        self.push(lhs, Comparison::Less, rhs);
    }

    pub fn less_eq(&mut self, lhs: impl Into<LinExpr>, rhs: impl Into<LinExpr>) {
        self.push(lhs, Comparison::LessEq, rhs);
    }

    /// Whether the system contains `lhs < rhs` or `lhs ≤ rhs` for two
    /// single variables, exactly as written.
    pub fn has_var_constraint(&self, lhs: Var, cmp: Comparison, rhs: Var) -> bool {
        let (l, r) = (LinExpr::var(lhs), LinExpr::var(rhs));
        self.constraints
            .iter()
            .any(|c| c.cmp == cmp && c.lhs == l && c.rhs == r)
    }

    fn check_well_formed(&self) -> Result<(), FeasibilityError> {
        let n = self.variables.len();
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some(&var) = c.lhs.terms.keys().chain(c.rhs.terms.keys()).find(|&&v| v >= n) {
                return Err(FeasibilityError::MalformedSystem { constraint: i, var });
            }
        }
        Ok(())
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let expr = |e: &LinExpr| {
            let mut parts: Vec<String> = e
                .terms
                .iter()
                .map(|(&v, c)| {
                    if *c == Scalar::one() {
                        self.variables[v].clone()
                    } else {
                        format!("{c}·{}", self.variables[v])
                    }
                })
                .collect();
            if !e.constant.is_zero() || parts.is_empty() {
                parts.push(e.constant.to_string());
            }
            parts.join(" + ")
        };
        for c in &self.constraints {
            writeln!(f, "{} {} {}", expr(&c.lhs), c.cmp, expr(&c.rhs))?;
        }
        Ok(())
    }
}

/// Variable name → value.
pub type Assignment = BTreeMap<String, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible(Assignment),
    Infeasible,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible(_))
    }
}

/// Decides the system; feasible results carry an exact witness.
pub fn solve(sys: &LinearSystem) -> Result<FeasibilityResult, FeasibilityError> {
    Ok(match solve_values(sys)? {
        Some(values) => FeasibilityResult::Feasible(sys.variables.iter().cloned().zip(values).collect()),
        None => FeasibilityResult::Infeasible,
    })
}

/// [`solve`] returning the witness indexed by variable.
pub fn solve_values(sys: &LinearSystem) -> Result<Option<Vec<Scalar>>, FeasibilityError> {
    sys.check_well_formed()?;
    let rows = sys.constraints.iter().map(Row::from_constraint).collect();
    Ok(eliminate(rows, sys.variables.len()))
}

/// Feasibility only, skipping witness reconstruction. Difference systems
/// with integer constants take the [`difference_feasible`] shortcut.
pub fn is_feasible(sys: &LinearSystem) -> Result<bool, FeasibilityError> {
    sys.check_well_formed()?;
    if let Some(verdict) = difference_feasible(sys) {
        return Ok(verdict);
    }
    Ok(solve_values(sys)?.is_some())
}

/// Decides a system whose constraints all have the form `x − y (<|≤) c`,
/// `±x (<|≤) c` or `0 (<|≤) c` with integer `c`, by negative cycle detection.
/// Returns `None` for any other system.
pub fn difference_feasible(sys: &LinearSystem) -> Option<bool> {
    let n = sys.variables.len();
    let mut edges = Vec::with_capacity(sys.constraints.len());
    for c in &sys.constraints {
        match difference_edge(c, n)? {
            Some(edge) => edges.push(edge),
            None => return Some(false),
        }
    }
    Some(difference_graph_feasible(n, &edges))
}

/// `to − from ≤ bound − strict·ε`, node `n` standing for the constant zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffEdge {
    pub from: usize,
    pub to: usize,
    pub bound: i128,
    pub strict: bool,
}

/// The edge of a difference constraint over `n` variables. `None` if the
/// constraint has another shape, `Some(None)` if it is a contradiction
/// without variables. A tautology becomes a harmless self-loop.
pub fn difference_edge(c: &Constraint, n: usize) -> Option<Option<DiffEdge>> {
    let diff = c.lhs.clone() - c.rhs.clone();
    let bound = -diff.constant;
    if !bound.is_integer() {
        return None;
    }
    let bound = i128::from(bound.to_i64()?);
    let strict = c.cmp == Comparison::Less;
    let one = Scalar::one();
    let minus_one = -Scalar::one();
    let (mut plus, mut minus) = (None, None);
    for (&v, k) in &diff.terms {
        if *k == one && plus.is_none() {
            plus = Some(v);
        } else if *k == minus_one && minus.is_none() {
            minus = Some(v);
        } else {
            return None;
        }
    }
    let (from, to) = (minus.unwrap_or(n), plus.unwrap_or(n));
    if from == to && (bound < 0 || (bound == 0 && strict)) {
        return Some(None);
    }
    Some(Some(DiffEdge {
        from,
        to,
        bound,
        strict,
    }))
}

/// Bellman–Ford from a virtual source at distance 0 to every node of a
/// graph on `n + 1` nodes. Path lengths are `c − k·ε` for an infinitesimal
/// `ε`, `k` counting strict edges, and compare lexicographically.
pub fn difference_graph_feasible(n: usize, edges: &[DiffEdge]) -> bool {
    let mut dist = vec![(0i128, 0u32); n + 1];
    for _ in 0..=n + 1 {
        let mut changed = false;
        for e in edges {
            let (c, k) = dist[e.from];
            let cand = (c + e.bound, k + u32::from(e.strict));
            let cur = dist[e.to];
            if cand.0 < cur.0 || (cand.0 == cur.0 && cand.1 > cur.1) {
                dist[e.to] = cand;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

/// Exact evaluation of every constraint under `assignment`.
pub fn check_witness(sys: &LinearSystem, assignment: &Assignment) -> Result<bool, FeasibilityError> {
    sys.check_well_formed()?;
    let values = sys
        .variables
        .iter()
        .map(|name| {
            assignment
                .get(name)
                .cloned()
                .ok_or_else(|| FeasibilityError::MissingVariable(name.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(check_values(sys, &values))
}

pub fn check_values(sys: &LinearSystem, values: &[Scalar]) -> bool {
    sys.constraints.iter().all(|c| c.holds(values))
}

/// `Σ coefs (< | ≤) bound`, coefficients sorted by variable.
#[derive(Debug, Clone)]
struct Row {
    coefs: Vec<(usize, Scalar)>,
    bound: Scalar,
    strict: bool,
}

enum Normalized {
    Trivial(bool),
    Row(Row),
}

impl Row {
    fn from_constraint(c: &Constraint) -> Row {
        let diff = c.lhs.clone() - c.rhs.clone();
        Row {
            coefs: diff.terms.into_iter().collect(),
            bound: -diff.constant,
            strict: c.cmp == Comparison::Less,
        }
    }

    fn coef(&self, var: usize) -> Option<&Scalar> {
        self.coefs
            .binary_search_by_key(&var, |(v, _)| *v)
            .ok()
            .map(|i| &self.coefs[i].1)
    }

    /// Scales so the leading coefficient is ±1, or decides a variable-free row.
    fn normalize(mut self) -> Normalized {
        let Some((_, lead)) = self.coefs.first() else {
            let zero = Scalar::zero();
            return Normalized::Trivial(if self.strict {
                zero < self.bound
            } else {
                zero <= self.bound
            });
        };
        let lead = lead.abs();
        if lead != Scalar::one() {
            for (_, c) in &mut self.coefs {
                *c = &*c / &lead;
            }
            self.bound = &self.bound / &lead;
        }
        Normalized::Row(self)
    }

    /// Combination of an upper bound row (positive coefficient on `var`)
    /// and a lower bound row (negative coefficient) that cancels `var`.
    fn combine(upper: &Row, lower: &Row, var: usize) -> Row {
        let cu = upper.coef(var).expect("var present");
        let cl = lower.coef(var).expect("var present").abs();
        // upper·cl + lower·cu
        let mut coefs: Vec<(usize, Scalar)> = Vec::with_capacity(upper.coefs.len() + lower.coefs.len());
        let (mut i, mut j) = (0, 0);
        while i < upper.coefs.len() || j < lower.coefs.len() {
            let next_u = upper.coefs.get(i).map(|(v, _)| *v).unwrap_or(usize::MAX);
            let next_l = lower.coefs.get(j).map(|(v, _)| *v).unwrap_or(usize::MAX);
            let (v, c) = if next_u < next_l {
                i += 1;
                (next_u, &upper.coefs[i - 1].1 * &cl)
            } else if next_l < next_u {
                j += 1;
                (next_l, &lower.coefs[j - 1].1 * cu)
            } else {
                i += 1;
                j += 1;
                (next_u, &upper.coefs[i - 1].1 * &cl + &lower.coefs[j - 1].1 * cu)
            };
            if !c.is_zero() {
                coefs.push((v, c));
            }
        }
        Row {
            coefs,
            bound: &upper.bound * &cl + &lower.bound * cu,
            strict: upper.strict || lower.strict,
        }
    }
}

/// Rows keyed by their coefficient vector; only the tightest bound is kept.
#[derive(Default)]
struct RowSet {
    rows: HashMap<Vec<(usize, Scalar)>, (Scalar, bool)>,
}

impl RowSet {
    /// Returns false if the row is a contradiction.
    fn insert(&mut self, row: Row) -> bool {
        match row.normalize() {
            Normalized::Trivial(ok) => ok,
            Normalized::Row(row) => {
                match self.rows.get_mut(&row.coefs) {
                    Some((bound, strict)) => {
                        if row.bound < *bound || (row.bound == *bound && row.strict && !*strict) {
                            *bound = row.bound;
                            *strict = row.strict;
                        }
                    }
                    None => {
                        self.rows.insert(row.coefs, (row.bound, row.strict));
                    }
                }
                true
            }
        }
    }

    fn into_rows(self) -> Vec<Row> {
        self.rows
            .into_iter()
            .map(|(coefs, (bound, strict))| Row { coefs, bound, strict })
            .collect()
    }
}

struct Stage {
    var: usize,
    /// Rows mentioning `var` at the time it was eliminated.
    rows: Vec<Row>,
}

fn eliminate(rows: Vec<Row>, num_vars: usize) -> Option<Vec<Scalar>> {
    let mut set = RowSet::default();
    for row in rows {
        if !set.insert(row) {
            return None;
        }
    }
    let mut rows = set.into_rows();
    let mut remaining: Vec<bool> = vec![true; num_vars];
    let mut stages = Vec::with_capacity(num_vars);

    for _ in 0..num_vars {
        let mut pos = vec![0usize; num_vars];
        let mut neg = vec![0usize; num_vars];
        for row in &rows {
            for (v, c) in &row.coefs {
                if c.is_positive() {
                    pos[*v] += 1;
                } else {
                    neg[*v] += 1;
                }
            }
        }
        // Cheapest variable first: fewest new rows, lowest index on ties.
        let var = (0..num_vars)
            .filter(|&v| remaining[v])
            .min_by_key(|&v| (pos[v] * neg[v]) as isize - (pos[v] + neg[v]) as isize)
            .expect("a variable remains");
        remaining[var] = false;

        let (with, without): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| r.coef(var).is_some());
        let mut next = RowSet::default();
        for row in without {
            next.insert(row);
        }
        for upper in with
            .iter()
            .filter(|r| r.coef(var).is_some_and(Scalar::is_positive))
        {
            for lower in with
                .iter()
                .filter(|r| r.coef(var).is_some_and(Scalar::is_negative))
            {
                if !next.insert(Row::combine(upper, lower, var)) {
                    return None;
                }
            }
        }
        stages.push(Stage { var, rows: with });
        rows = next.into_rows();
    }
    debug_assert!(rows.is_empty());

    let mut values = vec![Scalar::zero(); num_vars];
    for stage in stages.iter().rev() {
        values[stage.var] = pick_value(stage, &values);
    }
    Some(values)
}

/// Chooses a value for the stage variable inside the interval left by the
/// already-assigned later variables. Prefers a closed endpoint, then the
/// midpoint, then one unit inside an open half-line.
fn pick_value(stage: &Stage, values: &[Scalar]) -> Scalar {
    let mut lower: Option<(Scalar, bool)> = None;
    let mut upper: Option<(Scalar, bool)> = None;
    for row in &stage.rows {
        let c = row.coef(stage.var).expect("stage rows mention the variable");
        let rest = row
            .coefs
            .iter()
            .filter(|(v, _)| *v != stage.var)
            .fold(Scalar::zero(), |acc, (v, k)| acc + k * &values[*v]);
        let limit = (&row.bound - &rest) / c;
        if c.is_positive() {
            let tighter = match &upper {
                None => true,
                Some((u, s)) => limit < *u || (limit == *u && row.strict && !s),
            };
            if tighter {
                upper = Some((limit, row.strict));
            }
        } else {
            let tighter = match &lower {
                None => true,
                Some((l, s)) => limit > *l || (limit == *l && row.strict && !s),
            };
            if tighter {
                lower = Some((limit, row.strict));
            }
        }
    }
    match (lower, upper) {
        (None, None) => Scalar::zero(),
        (Some((l, false)), _) => l,
        (Some((l, true)), None) => l + Scalar::one(),
        (None, Some((u, strict))) => {
            if strict {
                u - Scalar::one()
            } else {
                u
            }
        }
        (Some((l, true)), Some((u, false))) => {
            debug_assert!(l < u);
            u
        }
        (Some((l, true)), Some((u, true))) => l.midpoint(&u),
    }
}
