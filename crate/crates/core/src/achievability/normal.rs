//! Normal form of a natural/reverse witness: every box closed in exactly
//! one of the two orders, innermost boxes closed, outermost expanded.
//!
//! * An innermost box can always be shown closed, since its closed shape is
//!   dominated by any presentation.
//! * A box expanded in both orders is redefined so that its smaller
//!   presentation is the closed box and the larger one expands from it.
//! * A box closed in both orders is expanded by a tiny amount on its
//!   largest side in one order.
//!
//! All three keep every nesting strict and every expansion within bound.

use crate::model::{presented_dims, BoxDesign, Dims, Presentation};
use crate::nesting::{verify_trick, TrickInstance};
use crate::perm::Permutation;

use super::AchievabilityError;

/// Applies the rules above to a verified two-order witness whose first
/// arrangement is the natural order and second its reverse.
pub fn observation_normal_form(w: &TrickInstance) -> Result<TrickInstance, AchievabilityError> {
    let not_verified = |why: String| AchievabilityError::NotVerified(why);
    if let Some(v) = verify_trick(w).violations.first() {
        return Err(not_verified(v.to_string()));
    }
    let perms = w.permutations().map_err(|e| not_verified(e.to_string()))?;
    let k = w.boxes.len();
    let reverse = Permutation::reverse(k);
    if perms.len() != 2 || !perms[0].is_identity() || perms[1] != reverse || k < 2 {
        return Err(AchievabilityError::InvalidSpec(
            "normal form needs exactly the natural and reverse orders".into(),
        ));
    }
    let mut out = w.clone();
    for arr in &mut out.arrangements {
        let innermost = arr.order[0].clone();
        arr.presentation.insert(innermost, Presentation::Closed);
    }
    for b in 0..k {
        let label = out.boxes[b].label.clone();
        let shown: Vec<Presentation> = out
            .arrangements
            .iter()
            .map(|a| a.presentation[&label].clone())
            .collect();
        match (&shown[0], &shown[1]) {
            (Presentation::Expanded(e0), Presentation::Expanded(e1)) if e0 != e1 => {
                let (small, large) = if e0 < e1 { (0, 1) } else { (1, 0) };
                let design = &out.boxes[b];
                let closed = presented_dims(design, &shown[small], false)?;
                let amount = shown[small].amount().expect("expanded").clone();
                let side = closed
                    .sides()
                    .iter()
                    .rposition(|v| *v == amount)
                    .expect("amount is a side")
                    + 1;
                let large_amount = shown[large].amount().expect("expanded").clone();
                out.boxes[b] = BoxDesign::new(label.clone(), closed, Some(side))?;
                out.arrangements[small]
                    .presentation
                    .insert(label.clone(), Presentation::Closed);
                out.arrangements[large]
                    .presentation
                    .insert(label, Presentation::Expanded(large_amount));
            }
            (Presentation::Expanded(_), Presentation::Expanded(_)) => {
                // Same shape in both orders: that shape is the closed box.
                let dims = presented_dims(&out.boxes[b], &shown[0], false)?;
                out.boxes[b] = BoxDesign::new(label.clone(), dims, None)?;
                for arr in &mut out.arrangements {
                    arr.presentation.insert(label.clone(), Presentation::Closed);
                }
                expand_slightly(&mut out, b)?;
            }
            (Presentation::Closed, Presentation::Closed) => expand_slightly(&mut out, b)?,
            _ => {}
        }
    }
    if let Some(v) = verify_trick(&out).violations.first() {
        return Err(AchievabilityError::WitnessRejected(v.to_string()));
    }
    Ok(out)
}

/// Expands the largest side of box `b`, closed in both orders, by half its
/// slack to the next box out, in the natural order unless `b` is innermost
/// there.
fn expand_slightly(w: &mut TrickInstance, b: usize) -> Result<(), AchievabilityError> {
    let label = w.boxes[b].label.clone();
    let a = if w.arrangements[0].order[0] == label { 1 } else { 0 };
    let arr = &w.arrangements[a];
    let pos = arr.order.iter().position(|l| *l == label).expect("validated");
    let design = &w.boxes[b];
    let n = design.dim();
    let largest = design.dims.largest().clone();
    let mut delta = largest.clone();
    if let Some(outer_label) = arr.order.get(pos + 1) {
        let outer = w.box_by_label(outer_label).expect("validated");
        let outer_dims: Dims = presented_dims(outer, &arr.presentation[outer_label], false)?;
        delta = delta.min((outer_dims.largest() - &largest).half());
    }
    let grown = BoxDesign::new(label.clone(), design.dims.clone(), Some(n))?;
    w.boxes[b] = grown;
    w.arrangements[a]
        .presentation
        .insert(label, Presentation::Expanded(largest + delta));
    Ok(())
}
