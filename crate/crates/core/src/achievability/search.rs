//! Pruned, parallel walk over the case tree.
//!
//! The tree branches first on the expandable side of every box, then on the
//! state of each (arrangement, box) slot in enumeration order. Each slot adds
//! its constraints to one growing system; as soon as the partial system is
//! infeasible every case below it is counted as checked and skipped. The
//! walk is therefore exhaustive: on an infeasible spec the skipped and
//! visited leaves add up to [`case_count`].

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::feasibility::{
    difference_edge, difference_graph_feasible, is_feasible, solve_values, DiffEdge, LinearSystem, Var,
};
use crate::model::{BoxDesign, Dims, Presentation};
use crate::nesting::{verify_with, Arrangement, TrickInstance};
use crate::perm::{label_for, Permutation};

use super::cases::{
    case_count, case_to_system, normalization_allows, presented_vars, push_box_basics, push_domination,
    push_expansion, side_name, CaseAssignment, CaseState,
};
use super::{AchievabilityError, PermSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    /// `case_index` is the position of `case` in the full unnormalized
    /// enumeration; no earlier case is feasible.
    Witness {
        instance: TrickInstance,
        case: CaseAssignment,
        case_index: u128,
    },
    ProvedInfeasible {
        cases_checked: u128,
    },
}

impl SearchResult {
    pub fn is_witness(&self) -> bool {
        matches!(self, SearchResult::Witness { .. })
    }

    pub fn witness(&self) -> Option<&TrickInstance> {
        match self {
            SearchResult::Witness { instance, .. } => Some(instance),
            SearchResult::ProvedInfeasible { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub result: SearchResult,
    /// Size of the enumeration searched (normalized if requested).
    pub cases_total: u128,
    /// Partial and complete systems handed to the solver.
    pub systems_solved: u64,
}

/// Decides `spec` over the full case enumeration.
pub fn achievable(spec: &PermSpec) -> Result<SearchResult, AchievabilityError> {
    Ok(search(spec, false)?.result)
}

/// Same engine as [`achievable`]; every arrangement of `spec` shares one box
/// set, so this is the joint question for more than one permutation.
pub fn jointly_achievable(spec: &PermSpec) -> Result<SearchResult, AchievabilityError> {
    achievable(spec)
}

/// Searches with optional normalization (natural/reverse specs only). The
/// returned witness is the feasible case with the smallest index and is
/// re-verified with the expansion bound off.
pub fn search(spec: &PermSpec, normalize: bool) -> Result<SearchReport, AchievabilityError> {
    if normalize && !spec.is_natural_reverse() {
        return Err(AchievabilityError::NormalizeUnsupported);
    }
    let tuples = side_tuples(spec.boxes(), spec.dim());
    let best = AtomicUsize::new(usize::MAX);
    let outcomes: Vec<BranchOutcome> = tuples
        .par_iter()
        .enumerate()
        .map(|(index, sides)| run_branch(spec, normalize, sides, index, &best))
        .collect::<Result<_, _>>()?;

    let systems_solved = outcomes.iter().map(|o| o.solved).sum();
    let cases_total: u128 = if normalize {
        tuples
            .iter()
            .map(|s| completions(spec, s, &empty_states(spec), 0, true))
            .sum()
    } else {
        case_count(spec)
    };

    if let Some((sides, states)) = outcomes.iter().find_map(|o| o.found.clone()) {
        let case = CaseAssignment {
            expand_side: sides,
            states,
        };
        let instance = witness_instance(spec, &case)?;
        let case_index = case.index(spec);
        return Ok(SearchReport {
            result: SearchResult::Witness {
                instance,
                case,
                case_index,
            },
            cases_total,
            systems_solved,
        });
    }

    let covered: u128 = outcomes.iter().map(|o| o.covered).sum();
    assert_eq!(
        covered, cases_total,
        "pruned walk must account for every case exactly once"
    );
    Ok(SearchReport {
        result: SearchResult::ProvedInfeasible {
            cases_checked: covered,
        },
        cases_total,
        systems_solved,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpossibilityReport {
    pub boxes: usize,
    pub dim: usize,
    pub arrangements: Vec<Permutation>,
    pub cases_total: u128,
    /// Cases decided before the verdict: all of them when infeasible, up to
    /// and including the first feasible case otherwise.
    pub cases_checked: u128,
    pub systems_solved: u64,
    pub all_infeasible: bool,
    pub counterexample: Option<CaseAssignment>,
}

/// Exhausts the unnormalized enumeration and reports whether every case is
/// infeasible. A feasible case is reported, never dropped.
pub fn verify_impossibility(
    boxes: usize,
    dim: usize,
    perms: impl IntoIterator<Item = Permutation>,
) -> Result<ImpossibilityReport, AchievabilityError> {
    let spec = PermSpec::new(boxes, dim, perms)?;
    let report = search(&spec, false)?;
    let (cases_checked, counterexample) = match report.result {
        SearchResult::Witness { case, case_index, .. } => (case_index + 1, Some(case)),
        SearchResult::ProvedInfeasible { cases_checked } => (cases_checked, None),
    };
    Ok(ImpossibilityReport {
        boxes,
        dim,
        arrangements: spec.arrangements().to_vec(),
        cases_total: report.cases_total,
        cases_checked,
        systems_solved: report.systems_solved,
        all_infeasible: counterexample.is_none(),
        counterexample,
    })
}

/// All expand-side tuples in lexicographic order.
fn side_tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (1..=n).map(move |j| {
                    let mut t = prefix.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

fn empty_states(spec: &PermSpec) -> Vec<Vec<Option<CaseState>>> {
    vec![vec![None; spec.boxes()]; spec.arrangements().len()]
}

/// Number of leaves completing `states` from slot `from` on.
fn completions(
    spec: &PermSpec,
    sides: &[usize],
    states: &[Vec<Option<CaseState>>],
    from: usize,
    normalize: bool,
) -> u128 {
    let (k, n) = (spec.boxes(), spec.dim());
    let m = spec.arrangements().len();
    if !normalize {
        return (from..m * k)
            .map(|slot| CaseState::option_count(sides[slot % k], n) as u128)
            .product();
    }
    // Normalized specs have two arrangements and the filter is per box.
    let mut scratch = states.to_vec();
    let mut total: u128 = 1;
    for b in 0..k {
        let options = |a: usize| -> Vec<Option<CaseState>> {
            if a * k + b < from {
                vec![states[a][b]]
            } else {
                CaseState::options(sides[b], n).map(Some).collect()
            }
        };
        let mut count = 0;
        for s0 in options(0) {
            for s1 in options(1) {
                scratch[0][b] = s0;
                scratch[1][b] = s1;
                if normalization_allows(spec, &scratch, 0, b) && normalization_allows(spec, &scratch, 1, b) {
                    count += 1;
                }
            }
        }
        total *= count;
    }
    total
}

struct BranchOutcome {
    found: Option<(Vec<usize>, Vec<Vec<CaseState>>)>,
    covered: u128,
    solved: u64,
}

struct Branch<'a> {
    spec: &'a PermSpec,
    normalize: bool,
    sides: &'a [usize],
    index: usize,
    best: &'a AtomicUsize,
    /// `position[a][b]`: where box `b` sits in arrangement `a`.
    position: Vec<Vec<usize>>,
    sys: LinearSystem,
    /// Graph form of `sys`, node `zero` standing for the constant 0.
    edges: Vec<DiffEdge>,
    zero: usize,
    side_vars: Vec<Vec<Var>>,
    states: Vec<Vec<Option<CaseState>>>,
    amounts: Vec<Vec<Option<Var>>>,
    covered: u128,
    solved: u64,
}

enum Walk {
    Found,
    Exhausted,
    Cancelled,
}

fn run_branch(
    spec: &PermSpec,
    normalize: bool,
    sides: &[usize],
    index: usize,
    best: &AtomicUsize,
) -> Result<BranchOutcome, AchievabilityError> {
    let labels = spec.labels();
    let mut sys = LinearSystem::new();
    let side_vars: Vec<Vec<Var>> = labels
        .iter()
        .map(|l| (1..=spec.dim()).map(|i| sys.add_var(side_name(l, i))).collect())
        .collect();
    for s in &side_vars {
        push_box_basics(&mut sys, s);
    }
    let position = spec
        .arrangements()
        .iter()
        .map(|p| p.inverse().values().iter().map(|&i| i - 1).collect())
        .collect();
    let zero = spec.boxes() * (spec.dim() + spec.arrangements().len());
    let mut edges = Vec::new();
    for c in &sys.constraints {
        edges.extend(difference_edge(c, zero).flatten());
    }
    let mut branch = Branch {
        spec,
        normalize,
        sides,
        index,
        best,
        position,
        sys,
        edges,
        zero,
        side_vars,
        states: empty_states(spec),
        amounts: vec![vec![None; spec.boxes()]; spec.arrangements().len()],
        covered: 0,
        solved: 0,
    };
    let found = match branch.walk(0)? {
        Walk::Found => {
            best.fetch_min(index, Ordering::SeqCst);
            let states = branch
                .states
                .iter()
                .map(|row| row.iter().map(|s| s.expect("leaf is fully assigned")).collect())
                .collect();
            Some((sides.to_vec(), states))
        }
        Walk::Exhausted | Walk::Cancelled => None,
    };
    Ok(BranchOutcome {
        found,
        covered: branch.covered,
        solved: branch.solved,
    })
}

impl Branch<'_> {
    fn walk(&mut self, slot: usize) -> Result<Walk, AchievabilityError> {
        let (k, n) = (self.spec.boxes(), self.spec.dim());
        if slot == k * self.spec.arrangements().len() {
            return Ok(Walk::Found);
        }
        if self.best.load(Ordering::Relaxed) < self.index {
            return Ok(Walk::Cancelled);
        }
        let (a, b) = (slot / k, slot % k);
        let j = self.sides[b];
        for state in CaseState::options(j, n) {
            self.states[a][b] = Some(state);
            if self.normalize && !normalization_allows(self.spec, &self.states, a, b) {
                continue;
            }
            let (var_mark, row_mark) = (self.sys.variables.len(), self.sys.constraints.len());
            let edge_mark = self.edges.len();
            let constrained = self.push_slot(a, b, state);
            let alive = if constrained {
                self.solved += 1;
                self.feasible(row_mark)?
            } else {
                true
            };
            let outcome = if alive {
                self.walk(slot + 1)?
            } else {
                self.covered += completions(self.spec, self.sides, &self.states, slot + 1, self.normalize);
                Walk::Exhausted
            };
            match outcome {
                Walk::Exhausted => {}
                done => return Ok(done),
            }
            self.sys.variables.truncate(var_mark);
            self.sys.constraints.truncate(row_mark);
            self.edges.truncate(edge_mark);
            self.amounts[a][b] = None;
        }
        self.states[a][b] = None;
        Ok(Walk::Exhausted)
    }

    /// Feasibility of the system after rows `from..` were pushed. Case
    /// systems are difference constraints, checked on the graph kept in
    /// step with the rows; anything else goes to the general solver.
    fn feasible(&mut self, from: usize) -> Result<bool, AchievabilityError> {
        for c in &self.sys.constraints[from..] {
            match difference_edge(c, self.zero) {
                Some(Some(edge)) => self.edges.push(edge),
                Some(None) => return Ok(false),
                None => return Ok(is_feasible(&self.sys)?),
            }
        }
        Ok(difference_graph_feasible(self.zero, &self.edges))
    }

    /// Adds the constraints of slot `(a, b)`; false if nothing was added.
    fn push_slot(&mut self, a: usize, b: usize, state: CaseState) -> bool {
        let k = self.spec.boxes();
        let mut constrained = false;
        if let CaseState::Expanded { rank } = state {
            let j = self.sides[b];
            let name = format!(
                "{}'({})",
                side_name(&label_for(b), j),
                self.spec.arrangements()[a].to_letters()
            );
            let e = self.sys.add_var(name);
            push_expansion(&mut self.sys, &self.side_vars[b], j, rank, e);
            self.amounts[a][b] = Some(e);
            constrained = true;
        }
        let order = self.spec.arrangements()[a].values();
        let pos = self.position[a][b];
        let presented = |this: &Self, box_: usize| {
            presented_vars(
                &this.side_vars[box_],
                this.states[a][box_].expect("assigned"),
                this.sides[box_],
                this.amounts[a][box_],
            )
        };
        if pos > 0 {
            let inner = order[pos - 1] - 1;
            if inner < b {
                let (i, o) = (presented(self, inner), presented(self, b));
                push_domination(&mut self.sys, &i, &o);
                constrained = true;
            }
        }
        if pos + 1 < k {
            let outer = order[pos + 1] - 1;
            if outer < b {
                let (i, o) = (presented(self, b), presented(self, outer));
                push_domination(&mut self.sys, &i, &o);
                constrained = true;
            }
        }
        constrained
    }
}

/// Turns a feasible case into boxes and presentations with exact values.
fn witness_instance(spec: &PermSpec, case: &CaseAssignment) -> Result<TrickInstance, AchievabilityError> {
    let cs = case_to_system(case, spec)?;
    let values = solve_values(&cs.system)?.ok_or_else(|| {
        AchievabilityError::WitnessRejected("full system of a feasible case is infeasible".into())
    })?;
    let labels = spec.labels();
    let boxes = (0..spec.boxes())
        .map(|b| {
            let dims = Dims::new(cs.sides[b].iter().map(|v| values[v.0].clone()).collect())
                .map_err(|e| AchievabilityError::WitnessRejected(e.to_string()))?;
            BoxDesign::new(labels[b].clone(), dims, Some(case.expand_side[b]))
                .map_err(|e| AchievabilityError::WitnessRejected(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let arrangements = spec
        .arrangements()
        .iter()
        .enumerate()
        .map(|(a, perm)| {
            let order = perm.values().iter().map(|&i| labels[i - 1].clone()).collect();
            let mut arr = Arrangement::new(perm.to_letters(), order);
            for (b, amount) in cs.amounts[a].iter().enumerate() {
                if let Some(v) = amount {
                    arr.presentation
                        .insert(labels[b].clone(), Presentation::Expanded(values[v.0].clone()));
                }
            }
            arr
        })
        .collect();
    let instance = TrickInstance::new(boxes, arrangements).with_bound(false);
    let report = verify_with(&instance, false);
    if let Some(v) = report.violations.first() {
        return Err(AchievabilityError::WitnessRejected(v.to_string()));
    }
    Ok(instance)
}
