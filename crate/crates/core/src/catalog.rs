//! The classic worked examples, as data.
//!
//! Each entry reproduces the boxes and presentations of its diagrams
//! exactly. Arrangements are named by their order, innermost first; the
//! natural order comes first. Boxes that never expand in any diagram carry
//! no expandable side.

use crate::model::{BoxDesign, Dims};
use crate::nesting::{Arrangement, TrickInstance};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub caption: &'static str,
    pub instance: TrickInstance,
}

type BoxRow<'a> = (&'a str, &'a [i64], Option<usize>);
type ArrRow<'a> = (&'a str, &'a [(&'a str, i64)]);

fn build(boxes: &[BoxRow], arrangements: &[ArrRow]) -> TrickInstance {
    let boxes = boxes
        .iter()
        .map(|&(label, dims, side)| {
            BoxDesign::new(label, Dims::from_ints(dims).expect("catalog dims"), side).expect("catalog box")
        })
        .collect();
    let arrangements = arrangements
        .iter()
        .map(|&(order, expanded)| {
            let labels = order.chars().map(String::from).collect();
            expanded
                .iter()
                .fold(Arrangement::new(order, labels), |arr, &(label, amount)| {
                    arr.expand(label, Scalar::from_int(amount))
                })
        })
        .collect();
    TrickInstance::new(boxes, arrangements)
}

fn entry(name: &'static str, caption: &'static str, boxes: &[BoxRow], arrs: &[ArrRow]) -> CatalogEntry {
    CatalogEntry {
        name,
        caption,
        instance: build(boxes, arrs),
    }
}

/// All entries in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        entry(
            "ex-3-4-5",
            "the original pair of identical (3,4,5) boxes",
            &[("A", &[3, 4, 5], Some(1)), ("B", &[3, 4, 5], Some(1))],
            &[("AB", &[("B", 6)]), ("BA", &[("A", 6)])],
        ),
        entry(
            "ex-6-8-10",
            "integer triple: two (6,8,10) boxes around a (7,9,11) box",
            &[
                ("A", &[6, 8, 10], Some(1)),
                ("B", &[7, 9, 11], None),
                ("C", &[6, 8, 10], Some(1)),
            ],
            &[("ABC", &[("C", 12)]), ("CBA", &[("A", 12)])],
        ),
        entry(
            "ex-6-9-10",
            "a pair where the middle side of the outer box expands",
            &[("A", &[6, 9, 10], Some(1)), ("B", &[7, 8, 11], Some(2))],
            &[("AB", &[("B", 12)]), ("BA", &[("A", 12)])],
        ),
        entry(
            "ex-5-7-999",
            "a pair where the largest side has to expand",
            &[("A", &[5, 7, 999], Some(1)), ("B", &[6, 8, 500], Some(3))],
            &[("AB", &[("B", 1000)]), ("BA", &[("A", 9)])],
        ),
        entry(
            "ex-5-7-11",
            "a pair where the expanded side becomes the middle one",
            &[("A", &[5, 7, 11], Some(1)), ("B", &[6, 8, 10], Some(1))],
            &[("AB", &[("B", 12)]), ("BA", &[("A", 9)])],
        ),
        entry(
            "ex-5-11-13",
            "a pair where the expanded side stays the smallest",
            &[("A", &[5, 11, 13], Some(1)), ("B", &[7, 10, 12], Some(1))],
            &[("AB", &[("B", 14)]), ("BA", &[("A", 8)])],
        ),
        entry(
            "ex-2d-quad",
            "four rectangles in both orders",
            &[
                ("A", &[8, 14], Some(1)),
                ("B", &[9, 15], Some(1)),
                ("C", &[11, 13], Some(2)),
                ("D", &[10, 12], Some(1)),
            ],
            &[
                ("ABCD", &[("C", 16), ("D", 20)]),
                ("DCBA", &[("A", 16), ("B", 12)]),
            ],
        ),
        entry(
            "ex-2d-quad-ad",
            "four rectangles with identical innermost and outermost",
            &[
                ("A", &[9, 13], Some(1)),
                ("B", &[11, 14], Some(2)),
                ("C", &[10, 15], Some(1)),
                ("D", &[9, 13], Some(1)),
            ],
            &[
                ("ABCD", &[("C", 12), ("D", 16)]),
                ("DCBA", &[("A", 17), ("B", 16)]),
            ],
        ),
        entry(
            "ex-2413",
            "four boxes realizing 2413",
            &[
                ("A", &[12, 16, 20], Some(1)),
                ("B", &[13, 17, 21], None),
                ("C", &[14, 18, 22], Some(1)),
                ("D", &[15, 19, 23], None),
            ],
            &[("ABCD", &[]), ("BDAC", &[("A", 24), ("C", 25)])],
        ),
        entry(
            "ex-2431",
            "four boxes realizing 2431",
            &[
                ("A", &[12, 16, 20], Some(1)),
                ("B", &[13, 17, 21], None),
                ("C", &[15, 19, 23], None),
                ("D", &[14, 18, 22], Some(1)),
            ],
            &[("ABCD", &[("D", 24)]), ("BDCA", &[("A", 24)])],
        ),
        entry(
            "ex-3241",
            "four boxes realizing 3241, two of them identical",
            &[
                ("A", &[10, 13, 16], Some(1)),
                ("B", &[11, 14, 17], None),
                ("C", &[10, 13, 16], Some(1)),
                ("D", &[12, 15, 18], Some(1)),
            ],
            &[("ABCD", &[("C", 18), ("D", 19)]), ("CBDA", &[("A", 19)])],
        ),
        entry(
            "ex-butBAC",
            "three boxes realizing every order except BAC",
            &[
                ("A", &[10, 13, 16], Some(1)),
                ("B", &[11, 14, 17], Some(1)),
                ("C", &[9, 12, 15], Some(1)),
            ],
            &[
                ("ABC", &[("C", 18)]),
                ("ACB", &[("B", 18), ("C", 17)]),
                ("BCA", &[("A", 19), ("C", 18)]),
                ("CAB", &[]),
                ("CBA", &[("A", 18)]),
            ],
        ),
        entry(
            "ex-butBAC-2d",
            "three rectangles realizing every order except BAC",
            &[
                ("A", &[10, 13], Some(1)),
                ("B", &[11, 14], Some(1)),
                ("C", &[9, 12], Some(1)),
            ],
            &[
                ("ABC", &[("C", 15)]),
                ("ACB", &[("B", 17), ("C", 15)]),
                ("BCA", &[("A", 16), ("C", 15)]),
                ("CAB", &[]),
                ("CBA", &[("A", 16)]),
            ],
        ),
        entry(
            "ex-6-8-10-four",
            "the integer triple in four orders",
            &[
                ("A", &[6, 8, 10], Some(1)),
                ("B", &[7, 9, 11], Some(1)),
                ("C", &[6, 8, 10], Some(1)),
            ],
            &[
                ("ABC", &[("C", 12)]),
                ("ACB", &[("B", 14), ("C", 12)]),
                ("CAB", &[("A", 12), ("B", 14)]),
                ("CBA", &[("A", 12)]),
            ],
        ),
        entry(
            "ex-4-6-6",
            "a pair with equal sides in both boxes",
            &[("A", &[4, 6, 6], Some(1)), ("B", &[5, 5, 7], Some(1))],
            &[("AB", &[("B", 7)]), ("BA", &[("A", 8)])],
        ),
    ]
}

/// Looks up one entry by name.
pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}
