//! Box designs, sorted dimensions and the domination order.
//!
//! A box is described by its closed side lengths sorted non-decreasingly
//! ([`Dims`]) and, optionally, the one side that can expand. A
//! [`Presentation`] says whether the box is shown closed or with that side
//! pulled out to a given length; [`presented_dims`] computes the sorted
//! dimensions the outside world sees.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("side length {0} is not positive")]
    NonPositiveSide(Scalar),
    #[error("a box needs at least 2 sides, got {0}")]
    TooFewSides(usize),
    #[error("dimension mismatch: {left} vs {right} sides")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expand side {side} is out of range 1..={dim}")]
    ExpandSideOutOfRange { side: usize, dim: usize },
    #[error("box {label} has no expandable side")]
    NoExpandSide { label: String },
    #[error("box {label}: expansion to {amount} does not exceed the closed side {side}")]
    AmountNotLarger {
        label: String,
        amount: Scalar,
        side: Scalar,
    },
    #[error("box {label}: expansion to {amount} exceeds twice the closed side {side}")]
    BoundExceeded {
        label: String,
        amount: Scalar,
        side: Scalar,
    },
}

/// Side lengths of a box, sorted non-decreasingly. Always at least two
/// entries, all positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dims(Vec<Scalar>);

impl Dims {
    /// Sorts `values` into a dimensions vector.
    pub fn new(mut values: Vec<Scalar>) -> Result<Self, ModelError> {
        if values.len() < 2 {
            return Err(ModelError::TooFewSides(values.len()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_positive()) {
            return Err(ModelError::NonPositiveSide(bad.clone()));
        }
        values.sort();
        Ok(Dims(values))
    }

    pub fn from_ints(values: &[i64]) -> Result<Self, ModelError> {
        Self::new(values.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sides(&self) -> &[Scalar] {
        &self.0
    }

    /// 1-based side access, matching the usual `a_1 ≤ a_2 ≤ …` numbering.
    pub fn side(&self, index: usize) -> &Scalar {
        &self.0[index - 1]
    }

    pub fn largest(&self) -> &Scalar {
        self.0.last().expect("dims are never empty")
    }

    pub fn smallest(&self) -> &Scalar {
        &self.0[0]
    }

    pub fn into_vec(self) -> Vec<Scalar> {
        self.0
    }

    /// Applies `f` to every side and re-sorts. `f` must keep sides positive.
    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Result<Self, ModelError> {
        Self::new(self.0.iter().map(f).collect())
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// `make_dims`: canonicalizes a list of side lengths.
pub fn make_dims(values: Vec<Scalar>) -> Result<Dims, ModelError> {
    Dims::new(values)
}

fn check_same_len(a: &Dims, b: &Dims) -> Result<(), ModelError> {
    if a.len() != b.len() {
        return Err(ModelError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// `a_i ≥ b_i` for every coordinate.
pub fn dominates(a: &Dims, b: &Dims) -> Result<bool, ModelError> {
    check_same_len(a, b)?;
    Ok(a.sides().iter().zip(b.sides()).all(|(x, y)| x >= y))
}

/// `a_i > b_i` for every coordinate: box `b` fits inside closed box `a`.
pub fn strictly_dominates(a: &Dims, b: &Dims) -> Result<bool, ModelError> {
    check_same_len(a, b)?;
    Ok(a.sides().iter().zip(b.sides()).all(|(x, y)| x > y))
}

/// A physical box: closed dimensions plus the one side (1-based, in sorted
/// order) that can expand, if any.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxDesign {
    pub label: String,
    pub dims: Dims,
    pub expand_side: Option<usize>,
}

impl BoxDesign {
    pub fn new(label: impl Into<String>, dims: Dims, expand_side: Option<usize>) -> Result<Self, ModelError> {
        if let Some(side) = expand_side {
            if side == 0 || side > dims.len() {
                return Err(ModelError::ExpandSideOutOfRange {
                    side,
                    dim: dims.len(),
                });
            }
        }
        Ok(BoxDesign {
            label: label.into(),
            dims,
            expand_side,
        })
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    fn expand_index(&self) -> Result<usize, ModelError> {
        self.expand_side.ok_or_else(|| ModelError::NoExpandSide {
            label: self.label.clone(),
        })
    }

    /// Closed length of the expandable side.
    pub fn expandable_length(&self) -> Result<&Scalar, ModelError> {
        Ok(self.dims.side(self.expand_index()?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Presentation {
    Closed,
    /// The expandable side pulled out to this length.
    Expanded(Scalar),
}

impl Presentation {
    pub fn is_closed(&self) -> bool {
        matches!(self, Presentation::Closed)
    }

    pub fn amount(&self) -> Option<&Scalar> {
        match self {
            Presentation::Closed => None,
            Presentation::Expanded(v) => Some(v),
        }
    }
}

/// True iff `dims[j] < amount ≤ 2·dims[j]` for the box's expandable side `j`.
pub fn expansion_bound_ok(design: &BoxDesign, amount: &Scalar) -> Result<bool, ModelError> {
    let side = design.expandable_length()?;
    Ok(amount > side && *amount <= side.double())
}

/// Checks a presentation against the design; the twice-the-side bound is
/// only checked when `enforce_bound` is set.
pub fn check_presentation(
    design: &BoxDesign,
    presentation: &Presentation,
    enforce_bound: bool,
) -> Result<(), ModelError> {
    let Presentation::Expanded(amount) = presentation else {
        return Ok(());
    };
    let side = design.expandable_length()?;
    if amount <= side {
        return Err(ModelError::AmountNotLarger {
            label: design.label.clone(),
            amount: amount.clone(),
            side: side.clone(),
        });
    }
    if enforce_bound && *amount > side.double() {
        return Err(ModelError::BoundExceeded {
            label: design.label.clone(),
            amount: amount.clone(),
            side: side.clone(),
        });
    }
    Ok(())
}

/// Sorted dimensions of `design` shown with `presentation`.
pub fn presented_dims(
    design: &BoxDesign,
    presentation: &Presentation,
    enforce_bound: bool,
) -> Result<Dims, ModelError> {
    check_presentation(design, presentation, enforce_bound)?;
    Ok(Dims(
        presented_sides(design, presentation)?
            .into_iter()
            .map(|s| s.value)
            .collect(),
    ))
}

/// One entry of a presented box: its current length, and the closed length
/// when this is the expanded side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedSide {
    pub value: Scalar,
    pub original: Option<Scalar>,
}

/// Presented sides in sorted order, marking the expanded one. Among equal
/// values the expanded side is placed last. Does not validate the amount.
pub fn presented_sides(
    design: &BoxDesign,
    presentation: &Presentation,
) -> Result<Vec<PresentedSide>, ModelError> {
    let closed = design.dims.sides().iter().map(|v| PresentedSide {
        value: v.clone(),
        original: None,
    });
    let Presentation::Expanded(amount) = presentation else {
        return Ok(closed.collect());
    };
    let j = design.expand_index()?;
    let mut sides: Vec<PresentedSide> = closed
        .enumerate()
        .filter(|(i, _)| i + 1 != j)
        .map(|(_, s)| s)
        .collect();
    let at = sides.partition_point(|s| s.value <= *amount);
    sides.insert(
        at,
        PresentedSide {
            value: amount.clone(),
            original: Some(design.dims.side(j).clone()),
        },
    );
    Ok(sides)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[i64]) -> Dims {
        Dims::from_ints(v).unwrap()
    }

    fn q(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn design(v: &[i64], side: Option<usize>) -> BoxDesign {
        BoxDesign::new("A", d(v), side).unwrap()
    }

    #[test]
    fn make_dims_sorts() {
        assert_eq!(d(&[10, 4, 5, 3]), d(&[3, 4, 5, 10]));
        assert_eq!(d(&[3, 4, 5]).sides(), &[q("3"), q("4"), q("5")]);
        assert_eq!(d(&[5, 5, 7]).sides(), &[q("5"), q("5"), q("7")]);
    }

    #[test]
    fn make_dims_errors() {
        assert_eq!(
            Dims::from_ints(&[3, 0, 4]),
            Err(ModelError::NonPositiveSide(q("0")))
        );
        assert_eq!(
            Dims::new(vec![q("3"), q("-1/2")]),
            Err(ModelError::NonPositiveSide(q("-1/2")))
        );
        assert_eq!(Dims::from_ints(&[3]), Err(ModelError::TooFewSides(1)));
    }

    #[test]
    fn domination_examples() {
        assert!(dominates(&d(&[4, 5, 6]), &d(&[3, 4, 5])).unwrap());
        assert!(dominates(&d(&[3, 4, 5]), &d(&[3, 4, 5])).unwrap());
        assert!(!dominates(&d(&[3, 9, 9]), &d(&[4, 5, 6])).unwrap());

        assert!(strictly_dominates(&d(&[7, 9, 11]), &d(&[6, 8, 10])).unwrap());
        assert!(!strictly_dominates(&d(&[3, 4, 5]), &d(&[3, 4, 5])).unwrap());
        assert!(strictly_dominates(&d(&[4, 5, 6]), &d(&[3, 4, 5])).unwrap());

        assert_eq!(
            dominates(&d(&[1, 2]), &d(&[1, 2, 3])),
            Err(ModelError::DimensionMismatch { left: 2, right: 3 })
        );
        assert!(strictly_dominates(&d(&[1, 2, 3]), &d(&[1, 2])).is_err());
    }

    #[test]
    fn presented_dims_examples() {
        let p = presented_dims(
            &design(&[3, 4, 5], Some(1)),
            &Presentation::Expanded(q("6")),
            true,
        );
        assert_eq!(p.unwrap(), d(&[4, 5, 6]));

        let p = presented_dims(&design(&[6, 8, 10], Some(1)), &Presentation::Closed, true);
        assert_eq!(p.unwrap(), d(&[6, 8, 10]));

        let p = presented_dims(
            &design(&[6, 8, 500], Some(3)),
            &Presentation::Expanded(q("1000")),
            true,
        );
        assert_eq!(p.unwrap(), d(&[6, 8, 1000]));
    }

    #[test]
    fn presented_dims_errors() {
        let no_side = design(&[3, 4, 5], None);
        assert!(matches!(
            presented_dims(&no_side, &Presentation::Expanded(q("6")), false),
            Err(ModelError::NoExpandSide { .. })
        ));
        assert!(presented_dims(&no_side, &Presentation::Closed, true).is_ok());

        let a = design(&[3, 4, 5], Some(1));
        assert!(matches!(
            presented_dims(&a, &Presentation::Expanded(q("3")), false),
            Err(ModelError::AmountNotLarger { .. })
        ));
        assert!(matches!(
            presented_dims(&a, &Presentation::Expanded(q("7")), true),
            Err(ModelError::BoundExceeded { .. })
        ));
        assert_eq!(
            presented_dims(&a, &Presentation::Expanded(q("7")), false).unwrap(),
            d(&[4, 5, 7])
        );
    }

    #[test]
    fn expand_side_must_be_in_range() {
        assert_eq!(
            BoxDesign::new("A", d(&[3, 4]), Some(3)),
            Err(ModelError::ExpandSideOutOfRange { side: 3, dim: 2 })
        );
        assert!(BoxDesign::new("A", d(&[3, 4]), Some(0)).is_err());
    }

    #[test]
    fn expansion_bound_examples() {
        let a = design(&[3, 4, 5], Some(1));
        assert!(expansion_bound_ok(&a, &q("6")).unwrap());
        assert!(!expansion_bound_ok(&a, &q("6.5")).unwrap());
        assert!(!expansion_bound_ok(&a, &q("3")).unwrap());
        let r = design(&[10, 12], Some(1));
        assert!(expansion_bound_ok(&r, &q("20")).unwrap());
        assert!(expansion_bound_ok(&design(&[3, 4], None), &q("5")).is_err());
    }

    #[test]
    fn expanded_side_sorts_after_ties() {
        let b = BoxDesign::new("B", d(&[5, 5, 7]), Some(1)).unwrap();
        let sides = presented_sides(&b, &Presentation::Expanded(q("7"))).unwrap();
        let originals: Vec<_> = sides.iter().map(|s| s.original.clone()).collect();
        assert_eq!(originals, vec![None, None, Some(q("5"))]);
    }
}
