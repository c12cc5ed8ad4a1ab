//! Building new box sets from old ones.
//!
//! Every operation checks its input, transforms sides and expansion amounts
//! exactly, and re-verifies the output before returning it. Outputs are
//! relabeled `A`, `B`, … in natural order, and arrangements are named by the
//! letters of their order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{BoxDesign, Dims, ModelError, Presentation};
use crate::nesting::{verify_trick, verify_with, Arrangement, NestingError, TrickInstance};
use crate::perm::{label_for, Permutation};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("instances have dimensions {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("input does not verify: {0}")]
    UnverifiedInput(String),
    #[error("output does not verify: {0}")]
    UnverifiedOutput(String),
    #[error("element {element} is not in 1..={len}")]
    ElementAbsent { element: usize, len: usize },
    #[error("cannot reduce below 2 dimensions (input has {0})")]
    DimensionTooSmall(usize),
    #[error("constant {0} is not positive")]
    NonPositiveConstant(Scalar),
    #[error("side {side} of box {label} has no isolation gap")]
    NoIsolationGap { label: String, side: usize },
    #[error("{value} is outside the isolation gap ({lower}, {upper})")]
    ValueOutsideGap {
        value: Scalar,
        lower: Scalar,
        upper: String,
    },
    #[error("unknown box label {0}")]
    UnknownLabel(String),
    #[error("side index {side} outside 1..={dim}")]
    SideOutOfRange { side: usize, dim: usize },
    #[error("expected a natural arrangement plus at most one other, found {0}")]
    NotAPermutationWitness(String),
    #[error(transparent)]
    Nesting(#[from] NestingError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn check_input(w: &TrickInstance) -> Result<(), ConstructionError> {
    w.validate()?;
    match verify_trick(w).violations.first() {
        Some(v) => Err(ConstructionError::UnverifiedInput(v.to_string())),
        None => Ok(()),
    }
}

fn check_output(w: TrickInstance) -> Result<TrickInstance, ConstructionError> {
    match verify_trick(&w).violations.first() {
        Some(v) => Err(ConstructionError::UnverifiedOutput(v.to_string())),
        None => Ok(w),
    }
}

/// Index of the natural arrangement and of the single other one, if any.
fn natural_and_target(w: &TrickInstance) -> Result<(usize, Option<usize>), ConstructionError> {
    let perms = w.permutations()?;
    let natural = perms
        .iter()
        .position(Permutation::is_identity)
        .ok_or_else(|| ConstructionError::NotAPermutationWitness("no natural arrangement".into()))?;
    let others: Vec<usize> = (0..perms.len()).filter(|&i| i != natural).collect();
    match others.as_slice() {
        [] => Ok((natural, None)),
        [t] => Ok((natural, Some(*t))),
        _ => Err(ConstructionError::NotAPermutationWitness(format!(
            "{} arrangements",
            perms.len()
        ))),
    }
}

/// The permutation a witness realizes: its non-natural arrangement, or the
/// identity.
pub fn realized_permutation(w: &TrickInstance) -> Result<Permutation, ConstructionError> {
    let (natural, target) = natural_and_target(w)?;
    Ok(w.permutations()?[target.unwrap_or(natural)].clone())
}

/// Renames boxes to `A`, `B`, … following `order` (old labels), keeping
/// every arrangement's sequence of physical boxes, and renames arrangements
/// to their letters.
fn relabel(w: &TrickInstance, order: &[String]) -> TrickInstance {
    let rename: BTreeMap<&str, String> = order
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), label_for(i)))
        .collect();
    let boxes = order
        .iter()
        .map(|l| {
            let b = w.box_by_label(l).expect("label exists");
            BoxDesign {
                label: rename[l.as_str()].clone(),
                ..b.clone()
            }
        })
        .collect();
    let arrangements = w
        .arrangements
        .iter()
        .map(|arr| {
            let new_order: Vec<String> = arr.order.iter().map(|l| rename[l.as_str()].clone()).collect();
            let presentation = arr
                .presentation
                .iter()
                .map(|(l, p)| (rename[l.as_str()].clone(), p.clone()))
                .collect();
            Arrangement {
                name: new_order.concat(),
                order: new_order,
                presentation,
            }
        })
        .collect();
    TrickInstance {
        boxes,
        arrangements,
        enforce_bound: w.enforce_bound,
    }
}

/// Applies `f` to every closed side and every expansion amount.
fn map_values(w: &TrickInstance, f: impl Fn(&Scalar) -> Scalar) -> Result<TrickInstance, ConstructionError> {
    let boxes = w
        .boxes
        .iter()
        .map(|b| {
            Ok(BoxDesign {
                dims: b.dims.map(&f)?,
                ..b.clone()
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    let arrangements = w
        .arrangements
        .iter()
        .map(|arr| Arrangement {
            presentation: arr
                .presentation
                .iter()
                .map(|(l, p)| {
                    let p = match p {
                        Presentation::Closed => Presentation::Closed,
                        Presentation::Expanded(e) => Presentation::Expanded(f(e)),
                    };
                    (l.clone(), p)
                })
                .collect(),
            ..arr.clone()
        })
        .collect();
    Ok(TrickInstance {
        boxes,
        arrangements,
        enforce_bound: w.enforce_bound,
    })
}

fn largest_value(w: &TrickInstance) -> Scalar {
    w.all_values().into_iter().max().unwrap_or_default()
}

/// Multiplies every side and amount by `c > 0`. The verdict of the input,
/// positive or negative, carries over; the output is not re-verified.
pub fn scale(w: &TrickInstance, c: &Scalar) -> Result<TrickInstance, ConstructionError> {
    if !c.is_positive() {
        return Err(ConstructionError::NonPositiveConstant(c.clone()));
    }
    map_values(w, |v| v * c)
}

/// Adds `c > 0` to every side and amount. Preserves the verdict, and the
/// expansion bound: `e ≤ 2a` gives `e + c < 2(a + c)`.
pub fn shift(w: &TrickInstance, c: &Scalar) -> Result<TrickInstance, ConstructionError> {
    if !c.is_positive() {
        return Err(ConstructionError::NonPositiveConstant(c.clone()));
    }
    map_values(w, |v| v + c)
}

/// Shifts a witness that only verifies without the expansion bound by one
/// more than its largest value, after which every amount is below twice
/// its side.
pub fn restore_expansion_bound(w: &TrickInstance) -> Result<TrickInstance, ConstructionError> {
    w.validate()?;
    if let Some(v) = verify_with(w, false).violations.first() {
        return Err(ConstructionError::UnverifiedInput(v.to_string()));
    }
    let m = largest_value(w) + Scalar::one();
    let mut out = shift(w, &m)?;
    out.enforce_bound = true;
    check_output(out)
}

/// Puts `w2`, shifted above everything in `w1`, around `w1`. Realizes `p1`
/// followed by `p2 + n`.
pub fn boost_concat(w1: &TrickInstance, w2: &TrickInstance) -> Result<TrickInstance, ConstructionError> {
    check_input(w1)?;
    check_input(w2)?;
    if let (Some(l), Some(r)) = (w1.dim(), w2.dim()) {
        if l != r {
            return Err(ConstructionError::DimensionMismatch { left: l, right: r });
        }
    }
    let (n1, t1) = natural_and_target(w1)?;
    let (n2, t2) = natural_and_target(w2)?;
    let c = largest_value(w1).ceil() + Scalar::one();
    let upper = shift(w2, &c)?;

    // Disjoint temporary labels, then the usual relabeling.
    let tag = |w: &TrickInstance, side: char| -> TrickInstance {
        let order: Vec<String> = w.boxes.iter().map(|b| b.label.clone()).collect();
        let mut t = relabel(w, &order);
        for b in &mut t.boxes {
            b.label = format!("{side}{}", b.label);
        }
        for arr in &mut t.arrangements {
            arr.order = arr.order.iter().map(|l| format!("{side}{l}")).collect();
            arr.presentation = std::mem::take(&mut arr.presentation)
                .into_iter()
                .map(|(l, p)| (format!("{side}{l}"), p))
                .collect();
        }
        t
    };
    let lower = tag(w1, '1');
    let upper = tag(&upper, '2');
    let join = |a: &Arrangement, b: &Arrangement| Arrangement {
        name: String::new(),
        order: a.order.iter().chain(&b.order).cloned().collect(),
        presentation: a
            .presentation
            .iter()
            .chain(&b.presentation)
            .map(|(l, p)| (l.clone(), p.clone()))
            .collect(),
    };
    let mut arrangements = vec![join(&lower.arrangements[n1], &upper.arrangements[n2])];
    if t1.is_some() || t2.is_some() {
        arrangements.push(join(
            &lower.arrangements[t1.unwrap_or(n1)],
            &upper.arrangements[t2.unwrap_or(n2)],
        ));
    }
    let joined = TrickInstance {
        boxes: lower.boxes.iter().chain(&upper.boxes).cloned().collect(),
        arrangements,
        enforce_bound: w1.enforce_bound && w2.enforce_bound,
    };
    let order: Vec<String> = joined.boxes.iter().map(|b| b.label.clone()).collect();
    check_output(relabel(&joined, &order))
}

/// Smallest positive difference between any two values of the instance.
fn smallest_gap(w: &TrickInstance) -> Option<Scalar> {
    let mut values = w.all_values();
    values.sort();
    values.dedup();
    values.windows(2).map(|p| &p[1] - &p[0]).min()
}

/// Adds a copy of box `x` (1-based natural position) with every side and
/// amount raised by `ε`, directly outside `x` in every arrangement. `ε` is
/// half the smallest positive difference between values, or 1 if all
/// values are equal.
pub fn boost_duplicate(w: &TrickInstance, x: usize) -> Result<TrickInstance, ConstructionError> {
    check_input(w)?;
    let (natural, _) = natural_and_target(w)?;
    let k = w.boxes.len();
    if x == 0 || x > k {
        return Err(ConstructionError::ElementAbsent { element: x, len: k });
    }
    let eps = smallest_gap(w).map(|d| d.half()).unwrap_or_else(Scalar::one);
    let source = w.arrangements[natural].order[x - 1].clone();
    let copy = format!("{source}'");
    let design = w.box_by_label(&source).expect("validated");
    let mut boxes = w.boxes.clone();
    let at = boxes.iter().position(|b| b.label == source).expect("validated");
    boxes.insert(
        at + 1,
        BoxDesign {
            label: copy.clone(),
            dims: design.dims.map(|v| v + &eps)?,
            expand_side: design.expand_side,
        },
    );
    let arrangements = w
        .arrangements
        .iter()
        .map(|arr| {
            let mut arr = arr.clone();
            let pos = arr.order.iter().position(|l| *l == source).expect("validated");
            arr.order.insert(pos + 1, copy.clone());
            let shown = match &arr.presentation[&source] {
                Presentation::Closed => Presentation::Closed,
                Presentation::Expanded(e) => Presentation::Expanded(e + &eps),
            };
            arr.presentation.insert(copy.clone(), shown);
            arr
        })
        .collect();
    let grown = TrickInstance {
        boxes,
        arrangements,
        enforce_bound: w.enforce_bound,
    };
    let order = grown.arrangements[natural].order.clone();
    check_output(relabel(&grown, &order))
}

/// Makes the realized order the natural one: box `i` of the output is box
/// `p_i` of the input, so the output realizes `p⁻¹`.
pub fn boost_inverse(w: &TrickInstance) -> Result<TrickInstance, ConstructionError> {
    check_input(w)?;
    let (natural, target) = natural_and_target(w)?;
    let target = target.unwrap_or(natural);
    let order = w.arrangements[target].order.clone();
    let mut out = relabel(w, &order);
    out.arrangements.swap(natural, target);
    check_output(out)
}

/// Drops the largest side of every box. An expanded box in `n` dimensions
/// with expandable side `j < n` and amount `v` becomes one whose side `j`
/// expands to `min(v, a_n)`, so each presented vector loses exactly its
/// largest entry and strict domination survives. A box expanding its
/// largest side is never expanded afterwards.
pub fn reduce_dimension(w: &TrickInstance) -> Result<TrickInstance, ConstructionError> {
    let n = w.dim().unwrap_or(0);
    if n < 3 {
        return Err(ConstructionError::DimensionTooSmall(n));
    }
    check_input(w)?;
    let boxes = w
        .boxes
        .iter()
        .map(|b| {
            let mut sides = b.dims.sides().to_vec();
            sides.pop();
            let expand_side = b.expand_side.filter(|&j| j < n);
            Ok(BoxDesign::new(b.label.clone(), Dims::new(sides)?, expand_side)?)
        })
        .collect::<Result<Vec<_>, ConstructionError>>()?;
    let arrangements = w
        .arrangements
        .iter()
        .map(|arr| {
            let mut arr = arr.clone();
            for (label, p) in arr.presentation.iter_mut() {
                let Presentation::Expanded(v) = p else {
                    continue;
                };
                let design = w.box_by_label(label).expect("validated");
                let j = design.expand_side.unwrap_or(n);
                let a_n = design.dims.largest();
                *p = if j == n || design.dims.side(j) == a_n {
                    Presentation::Closed
                } else {
                    Presentation::Expanded(v.clone().min(a_n.clone()))
                };
            }
            arr
        })
        .collect();
    check_output(TrickInstance {
        boxes,
        arrangements,
        enforce_bound: w.enforce_bound,
    })
}

/// Open interval around side `side` (1-based, sorted) of box `label` that
/// contains no other closed side or expansion amount of the instance.
/// `None` as upper end means unbounded; the lower end is at least 0.
pub fn isolation_gap(
    w: &TrickInstance,
    label: &str,
    side: usize,
) -> Result<(Scalar, Option<Scalar>), ConstructionError> {
    let design = w
        .box_by_label(label)
        .ok_or_else(|| ConstructionError::UnknownLabel(label.to_string()))?;
    if side == 0 || side > design.dim() {
        return Err(ConstructionError::SideOutOfRange {
            side,
            dim: design.dim(),
        });
    }
    let s = design.dims.side(side);
    // Closed sides come first in `all_values`, box by box.
    let own: usize = w
        .boxes
        .iter()
        .take_while(|b| b.label != label)
        .map(BoxDesign::dim)
        .sum::<usize>()
        + side
        - 1;
    let mut others = w.all_values();
    others.remove(own);
    if others.contains(s) {
        return Err(ConstructionError::NoIsolationGap {
            label: label.to_string(),
            side,
        });
    }
    let lower = others
        .iter()
        .filter(|v| *v < s)
        .max()
        .cloned()
        .unwrap_or_default();
    let upper = others.iter().filter(|v| *v > s).min().cloned();
    Ok((lower, upper))
}

/// Replaces an isolated side by any value strictly inside its isolation
/// gap. Every comparison involving the side keeps its outcome, so the case
/// structure and the verdict are unchanged.
pub fn replace_gap_side(
    w: &TrickInstance,
    label: &str,
    side: usize,
    value: &Scalar,
) -> Result<TrickInstance, ConstructionError> {
    check_input(w)?;
    let (lower, upper) = isolation_gap(w, label, side)?;
    if value <= &lower || upper.as_ref().is_some_and(|u| value >= u) {
        return Err(ConstructionError::ValueOutsideGap {
            value: value.clone(),
            lower,
            upper: upper.map_or_else(|| "∞".to_string(), |u| u.to_string()),
        });
    }
    let mut out = w.clone();
    let design = out
        .boxes
        .iter_mut()
        .find(|b| b.label == label)
        .expect("gap lookup found the box");
    let mut sides = design.dims.sides().to_vec();
    sides[side - 1] = value.clone();
    design.dims = Dims::new(sides)?;
    check_output(out)
}

/// Three boxes in `n` dimensions realizing the natural and reverse orders:
/// outer and inner `(n, …, 2n−1)` expanding their smallest side to `2n`,
/// and `(n+½, …, 2n−½)` between them, never expanded.
pub fn gen_triple(n: usize) -> Result<TrickInstance, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::DimensionTooSmall(n));
    }
    let n_i = n as i64;
    let ends = Dims::new((n_i..2 * n_i).map(Scalar::from_int).collect())?;
    let middle = Dims::new((n_i..2 * n_i).map(|v| Scalar::ratio(2 * v + 1, 2)).collect())?;
    let boxes = vec![
        BoxDesign::new("A", ends.clone(), Some(1))?,
        BoxDesign::new("B", middle, None)?,
        BoxDesign::new("C", ends, Some(1))?,
    ];
    let order = |s: &str| s.chars().map(String::from).collect::<Vec<_>>();
    let top = Scalar::from_int(2 * n_i);
    let arrangements = vec![
        Arrangement::new("ABC", order("ABC")).expand("C", top.clone()),
        Arrangement::new("CBA", order("CBA")).expand("A", top),
    ];
    check_output(TrickInstance::new(boxes, arrangements))
}
