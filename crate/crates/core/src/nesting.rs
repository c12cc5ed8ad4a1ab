//! Nesting checks for concrete box sets.
//!
//! An [`Arrangement`] lists boxes innermost first together with how each
//! one is presented. A chain nests when every box strictly dominates its
//! inner neighbour; non-adjacent pairs then follow by transitivity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{presented_dims, presented_sides, BoxDesign, Dims, ModelError, Presentation};
use crate::perm::Permutation;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NestingError {
    #[error("duplicate box label {0}")]
    DuplicateLabel(String),
    #[error("unknown box label {0}")]
    UnknownLabel(String),
    #[error("arrangement {name} is not a permutation of the box labels")]
    BadOrder { name: String },
    #[error("arrangement {name} has no presentation for box {label}")]
    MissingPresentation { name: String, label: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("pair classification is only defined for 3-dimensional boxes")]
    NotThreeDimensional,
    #[error("the two boxes cannot be nested inside each other")]
    NotMutuallyNestable,
    #[error("chain {0} has two adjacent equalities")]
    AdjacentEqualities(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub name: String,
    /// Box labels, innermost first.
    pub order: Vec<String>,
    pub presentation: BTreeMap<String, Presentation>,
}

impl Arrangement {
    pub fn new(name: impl Into<String>, order: Vec<String>) -> Self {
        let presentation = order.iter().map(|l| (l.clone(), Presentation::Closed)).collect();
        Arrangement {
            name: name.into(),
            order,
            presentation,
        }
    }

    /// Builder-style: present `label` expanded to `amount`.
    pub fn expand(mut self, label: &str, amount: Scalar) -> Self {
        self.presentation
            .insert(label.to_string(), Presentation::Expanded(amount));
        self
    }

    pub fn presentation_of(&self, label: &str) -> Option<&Presentation> {
        self.presentation.get(label)
    }
}

/// A box set and the arrangements it is claimed to support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrickInstance {
    pub boxes: Vec<BoxDesign>,
    pub arrangements: Vec<Arrangement>,
    pub enforce_bound: bool,
}

impl TrickInstance {
    pub fn new(boxes: Vec<BoxDesign>, arrangements: Vec<Arrangement>) -> Self {
        TrickInstance {
            boxes,
            arrangements,
            enforce_bound: true,
        }
    }

    pub fn with_bound(mut self, enforce_bound: bool) -> Self {
        self.enforce_bound = enforce_bound;
        self
    }

    pub fn box_by_label(&self, label: &str) -> Option<&BoxDesign> {
        self.boxes.iter().find(|b| b.label == label)
    }

    pub fn dim(&self) -> Option<usize> {
        self.boxes.first().map(BoxDesign::dim)
    }

    /// Checks labels are unique and every arrangement is a bijection over
    /// them with a presentation per box.
    pub fn validate(&self) -> Result<(), NestingError> {
        let mut labels = BTreeSet::new();
        for b in &self.boxes {
            if !labels.insert(b.label.as_str()) {
                return Err(NestingError::DuplicateLabel(b.label.clone()));
            }
        }
        for arr in &self.arrangements {
            validate_arrangement(&self.boxes, arr)?;
        }
        Ok(())
    }

    /// The permutation each arrangement realizes, numbering boxes by their
    /// position in `boxes`.
    pub fn permutations(&self) -> Result<Vec<Permutation>, NestingError> {
        self.arrangements
            .iter()
            .map(|arr| {
                let values = arr
                    .order
                    .iter()
                    .map(|l| {
                        self.boxes
                            .iter()
                            .position(|b| &b.label == l)
                            .map(|i| i + 1)
                            .ok_or_else(|| NestingError::UnknownLabel(l.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Permutation::new(values).map_err(|_| NestingError::BadOrder {
                    name: arr.name.clone(),
                })
            })
            .collect()
    }

    /// All closed sides and expansion amounts appearing anywhere.
    pub fn all_values(&self) -> Vec<Scalar> {
        let mut values: Vec<Scalar> = self
            .boxes
            .iter()
            .flat_map(|b| b.dims.sides().iter().cloned())
            .collect();
        for arr in &self.arrangements {
            values.extend(arr.presentation.values().filter_map(|p| p.amount().cloned()));
        }
        values
    }
}

fn validate_arrangement(boxes: &[BoxDesign], arr: &Arrangement) -> Result<(), NestingError> {
    let labels: BTreeSet<&str> = boxes.iter().map(|b| b.label.as_str()).collect();
    let order: BTreeSet<&str> = arr.order.iter().map(String::as_str).collect();
    if order.len() != arr.order.len() || order != labels {
        return Err(NestingError::BadOrder {
            name: arr.name.clone(),
        });
    }
    for label in &arr.order {
        if !arr.presentation.contains_key(label) {
            return Err(NestingError::MissingPresentation {
                name: arr.name.clone(),
                label: label.clone(),
            });
        }
    }
    if let Some(extra) = arr.presentation.keys().find(|l| !labels.contains(l.as_str())) {
        return Err(NestingError::UnknownLabel(extra.clone()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `outer` does not strictly exceed `inner` in this 1-based coordinate.
    NotNested {
        arrangement: usize,
        inner: String,
        outer: String,
        coordinate: usize,
        inner_value: Scalar,
        outer_value: Scalar,
    },
    Presentation {
        arrangement: usize,
        label: String,
        error: ModelError,
    },
    Structure {
        arrangement: usize,
        error: NestingError,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotNested {
                arrangement,
                inner,
                outer,
                coordinate,
                inner_value,
                outer_value,
            } => write!(
                f,
                "arrangement {arrangement}: {inner} does not fit in {outer} \
                 (side {coordinate}: {inner_value} vs {outer_value})"
            ),
            Violation::Presentation {
                arrangement,
                label,
                error,
            } => write!(f, "arrangement {arrangement}: box {label}: {error}"),
            Violation::Structure { arrangement, error } => {
                write!(f, "arrangement {arrangement}: {error}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks one arrangement. Never fails: every problem becomes a violation.
pub fn verify_arrangement(boxes: &[BoxDesign], arr: &Arrangement, enforce_bound: bool) -> VerifyReport {
    let mut report = VerifyReport::default();
    check_arrangement(boxes, arr, 0, enforce_bound, &mut report);
    report
}

fn check_arrangement(
    boxes: &[BoxDesign],
    arr: &Arrangement,
    index: usize,
    enforce_bound: bool,
    report: &mut VerifyReport,
) {
    if let Err(error) = validate_arrangement(boxes, arr) {
        report.violations.push(Violation::Structure {
            arrangement: index,
            error,
        });
        return;
    }
    let mut presented: Vec<Option<Dims>> = Vec::with_capacity(arr.order.len());
    for label in &arr.order {
        let design = boxes.iter().find(|b| &b.label == label).expect("validated");
        let p = &arr.presentation[label];
        match presented_dims(design, p, enforce_bound) {
            Ok(dims) => presented.push(Some(dims)),
            Err(error) => {
                report.violations.push(Violation::Presentation {
                    arrangement: index,
                    label: label.clone(),
                    error,
                });
                presented.push(None);
            }
        }
    }
    for (w, labels) in presented.windows(2).zip(arr.order.windows(2)) {
        let (Some(inner), Some(outer)) = (&w[0], &w[1]) else {
            continue;
        };
        if inner.len() != outer.len() {
            report.violations.push(Violation::Presentation {
                arrangement: index,
                label: labels[1].clone(),
                error: ModelError::DimensionMismatch {
                    left: inner.len(),
                    right: outer.len(),
                },
            });
            continue;
        }
        for (i, (x, y)) in inner.sides().iter().zip(outer.sides()).enumerate() {
            if y <= x {
                report.violations.push(Violation::NotNested {
                    arrangement: index,
                    inner: labels[0].clone(),
                    outer: labels[1].clone(),
                    coordinate: i + 1,
                    inner_value: x.clone(),
                    outer_value: y.clone(),
                });
            }
        }
    }
}

/// Checks every arrangement of the instance, using its bound flag.
pub fn verify_trick(instance: &TrickInstance) -> VerifyReport {
    verify_with(instance, instance.enforce_bound)
}

/// [`verify_trick`] with an explicit bound flag.
pub fn verify_with(instance: &TrickInstance, enforce_bound: bool) -> VerifyReport {
    let mut report = VerifyReport::default();
    let mut seen = BTreeSet::new();
    for b in &instance.boxes {
        if !seen.insert(b.label.as_str()) {
            report.violations.push(Violation::Structure {
                arrangement: 0,
                error: NestingError::DuplicateLabel(b.label.clone()),
            });
        }
    }
    for (i, arr) in instance.arrangements.iter().enumerate() {
        check_arrangement(&instance.boxes, arr, i, enforce_bound, &mut report);
    }
    report
}

/// One line per box, outermost first, e.g. `A: 4 × 5 × 6(3)`.
pub fn render_diagram(boxes: &[BoxDesign], arr: &Arrangement) -> Result<String, NestingError> {
    validate_arrangement(boxes, arr)?;
    let mut out = String::new();
    for label in arr.order.iter().rev() {
        let design = boxes.iter().find(|b| &b.label == label).expect("validated");
        let sides = presented_sides(design, &arr.presentation[label])?;
        out.push_str(label);
        out.push(':');
        for (i, side) in sides.iter().enumerate() {
            out.push_str(if i == 0 { " " } else { " × " });
            out.push_str(&side.value.to_string());
            if let Some(orig) = &side.original {
                out.push_str(&format!("({orig})"));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Less,
    Equal,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Less => "<",
            Relation::Equal => "=",
        })
    }
}

/// Classification of a mutually nestable 3D pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairType {
    pub type_id: u8,
    /// The chain's terms in order, e.g. `("a1", 6)`.
    pub terms: Vec<(String, Scalar)>,
    /// Instantiated relations between consecutive terms.
    pub relations: Vec<Relation>,
    /// Whether the inputs were swapped to make `a_1 ≤ b_1`.
    pub swapped: bool,
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type {}: ", self.type_id)?;
        for (i, (name, value)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", self.relations[i - 1])?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Term {
    A(usize),
    B(usize),
}

#[derive(Clone, Copy, PartialEq)]
enum Link {
    Le,
    Lt,
}

use Link::{Le, Lt};
use Term::{A, B};

/// The four chains, in the order they are tried.
const CHAINS: [([Term; 6], [Link; 5]); 4] = [
    ([A(1), B(1), A(2), B(2), A(3), B(3)], [Le, Lt, Le, Lt, Le]),
    ([A(1), B(1), A(2), B(2), B(3), A(3)], [Le, Lt, Le, Le, Lt]),
    ([A(1), B(1), B(2), A(2), A(3), B(3)], [Le, Le, Lt, Le, Le]),
    ([A(1), B(1), B(2), A(2), B(3), A(3)], [Le, Le, Lt, Lt, Lt]),
];

/// Classifies two 3D boxes that can each hold the other into one of the four
/// relative side orderings. Boundary cases go to the lowest matching type.
pub fn classify_pair(a: &Dims, b: &Dims) -> Result<PairType, NestingError> {
    if a.len() != 3 || b.len() != 3 {
        return Err(NestingError::NotThreeDimensional);
    }
    if !pair_mutually_fits(a, b, false)? {
        return Err(NestingError::NotMutuallyNestable);
    }
    let swapped = a.side(1) > b.side(1);
    let (a, b) = if swapped { (b, a) } else { (a, b) };
    let value = |t: Term| match t {
        A(i) => a.side(i),
        B(i) => b.side(i),
    };
    let name = |t: Term| match t {
        A(i) => format!("a{i}"),
        B(i) => format!("b{i}"),
    };
    for (type_index, (terms, links)) in CHAINS.iter().enumerate() {
        let holds = links.iter().enumerate().all(|(i, link)| {
            let (x, y) = (value(terms[i]), value(terms[i + 1]));
            match link {
                Le => x <= y,
                Lt => x < y,
            }
        });
        if !holds {
            continue;
        }
        let relations: Vec<Relation> = (0..5)
            .map(|i| {
                if value(terms[i]) == value(terms[i + 1]) {
                    Relation::Equal
                } else {
                    Relation::Less
                }
            })
            .collect();
        let pair_type = PairType {
            type_id: type_index as u8 + 1,
            terms: terms.iter().map(|&t| (name(t), value(t).clone())).collect(),
            relations,
            swapped,
        };
        if pair_type
            .relations
            .windows(2)
            .any(|w| w[0] == Relation::Equal && w[1] == Relation::Equal)
        {
            return Err(NestingError::AdjacentEqualities(pair_type.to_string()));
        }
        return Ok(pair_type);
    }
    // Mutual nesting forces b1 < a2 < b3 and a1 < b2 < a3, which always
    // lands in one of the chains.
    unreachable!("mutually nestable pair {a} / {b} matched no chain")
}

/// Can each of the two boxes hold the other, for some choice of expandable
/// side and amount?
///
/// Without the bound, expanding the smallest side without limit is the best
/// choice. With the bound, each candidate side is tried at twice its length,
/// the largest presentation it allows.
pub fn pair_mutually_fits(a: &Dims, b: &Dims, enforce_bound: bool) -> Result<bool, ModelError> {
    if a.len() != b.len() {
        return Err(ModelError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(can_hold(a, b, enforce_bound) && can_hold(b, a, enforce_bound))
}

/// Some expansion of `outer` strictly dominates closed `inner`.
fn can_hold(outer: &Dims, inner: &Dims, enforce_bound: bool) -> bool {
    if !enforce_bound {
        // (outer_2, …, outer_n, ∞) against inner.
        return outer.sides()[1..].iter().zip(inner.sides()).all(|(o, i)| o > i);
    }
    (0..outer.len()).any(|j| {
        let mut sides: Vec<Scalar> = outer.sides().to_vec();
        sides[j] = sides[j].double();
        sides.sort();
        sides.iter().zip(inner.sides()).all(|(o, i)| o > i)
    })
}
