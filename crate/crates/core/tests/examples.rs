use proptest::prelude::*;

use gozinta::catalog::{catalog, catalog_entry};
use gozinta::format::{parse, render, FormatError};
use gozinta::nesting::{
    classify_pair, pair_mutually_fits, render_diagram, verify_trick, verify_with, Arrangement, NestingError,
};
use gozinta::{BoxDesign, Dims, Scalar, TrickInstance};

fn d(v: &[i64]) -> Dims {
    Dims::from_ints(v).unwrap()
}

fn type_of(a: &[i64], b: &[i64]) -> u8 {
    classify_pair(&d(a), &d(b)).unwrap().type_id
}

/// With `a_1 ≤ b_1`, the type follows from how the middle and largest
/// sides compare.
fn type_oracle(a: &[i64], b: &[i64]) -> u8 {
    let (a, b) = if a[0] <= b[0] { (a, b) } else { (b, a) };
    1 + 2 * u8::from(b[1] < a[1]) + u8::from(b[2] < a[2])
}

#[test]
fn classic_type_examples() {
    assert_eq!(type_of(&[6, 8, 10], &[7, 9, 11]), 1);
    assert_eq!(type_of(&[6, 9, 10], &[7, 8, 11]), 3);
    assert_eq!(type_of(&[5, 11, 13], &[7, 10, 12]), 4);
    assert_eq!(type_of(&[4, 6, 6], &[5, 5, 7]), 3);
    assert_eq!(type_of(&[3, 4, 5], &[3, 4, 5]), 1);
}

#[test]
fn type_two_examples_match_the_oracle() {
    for (a, b) in [([5, 7, 999], [6, 8, 500]), ([5, 7, 11], [6, 8, 10])] {
        assert_eq!(type_of(&a, &b), type_oracle(&a, &b));
        assert_eq!(type_of(&a, &b), 2);
    }
}

#[test]
fn classification_is_symmetric_and_explains_itself() {
    let t = classify_pair(&d(&[7, 8, 11]), &d(&[6, 9, 10])).unwrap();
    assert!(t.swapped);
    assert_eq!(t.to_string(), "Type 3: a1=6 < b1=7 < b2=8 < a2=9 < a3=10 < b3=11");
    let eq = classify_pair(&d(&[4, 6, 6]), &d(&[5, 5, 7])).unwrap();
    assert_eq!(eq.to_string(), "Type 3: a1=4 < b1=5 = b2=5 < a2=6 = a3=6 < b3=7");
}

#[test]
fn non_nestable_pairs_are_rejected() {
    assert_eq!(
        classify_pair(&d(&[1, 2, 3]), &d(&[5, 6, 7])),
        Err(NestingError::NotMutuallyNestable)
    );
    assert_eq!(
        classify_pair(&d(&[1, 2]), &d(&[2, 3])),
        Err(NestingError::NotThreeDimensional)
    );
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, max_global_rejects: 8192, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn classifier_matches_oracle(
        a in prop::collection::vec(3i64..12, 3),
        delta in prop::collection::vec(-2i64..=2, 3),
    ) {
        let b: Vec<i64> = a.iter().zip(&delta).map(|(x, e)| x + e).collect();
        let (da, db) = (d(&a), d(&b));
        prop_assume!(pair_mutually_fits(&da, &db, false).unwrap());
        let (sa, sb) = (da.sides().iter().map(|s| s.to_i64().unwrap()).collect::<Vec<_>>(),
                        db.sides().iter().map(|s| s.to_i64().unwrap()).collect::<Vec<_>>());
        match classify_pair(&da, &db) {
            Ok(t) => prop_assert_eq!(t.type_id, type_oracle(&sa, &sb)),
            Err(NestingError::AdjacentEqualities(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn every_catalog_entry_verifies_with_the_bound() {
    let entries = catalog();
    assert_eq!(entries.len(), 15);
    for e in &entries {
        let report = verify_with(&e.instance, true);
        assert!(report.ok(), "{}: {:?}", e.name, report.violations);
        assert!(e.instance.enforce_bound);
    }
}

#[test]
fn catalog_round_trips_through_the_text_format() {
    for e in catalog() {
        let text = render(&e.instance);
        assert_eq!(parse(&text).unwrap(), e.instance, "{}", e.name);
        assert_eq!(render(&parse(&text).unwrap()), text);
    }
}

#[test]
fn alternative_expansions_of_the_larger_box() {
    // In the natural order any side of (6,8,10) can grow to 12 around (5,7,11).
    let expected = [
        "B: 8 × 10 × 12(6)\nA: 5 × 7 × 11\n",
        "B: 6 × 10 × 12(8)\nA: 5 × 7 × 11\n",
        "B: 6 × 8 × 12(10)\nA: 5 × 7 × 11\n",
    ];
    for (side, diagram) in (1..=3).zip(expected) {
        let boxes = vec![
            BoxDesign::new("A", d(&[5, 7, 11]), Some(1)).unwrap(),
            BoxDesign::new("B", d(&[6, 8, 10]), Some(side)).unwrap(),
        ];
        let arr = Arrangement::new("AB", vec!["A".into(), "B".into()]).expand("B", Scalar::from_int(12));
        assert_eq!(render_diagram(&boxes, &arr).unwrap(), diagram);
        assert!(verify_trick(&TrickInstance::new(boxes, vec![arr])).ok());
    }
}

#[test]
fn scaled_half_integer_triple_is_not_a_witness() {
    // (7,9,10) sits between two (6,8,10) boxes only if its largest side
    // exceeds 10; equal largest sides never nest strictly.
    let w = TrickInstance::new(
        vec![
            BoxDesign::new("A", d(&[6, 8, 10]), Some(1)).unwrap(),
            BoxDesign::new("B", d(&[7, 9, 10]), None).unwrap(),
            BoxDesign::new("C", d(&[6, 8, 10]), Some(1)).unwrap(),
        ],
        vec![
            Arrangement::new("ABC", vec!["A".into(), "B".into(), "C".into()])
                .expand("C", Scalar::from_int(12)),
            Arrangement::new("CBA", vec!["C".into(), "B".into(), "A".into()])
                .expand("A", Scalar::from_int(12)),
        ],
    );
    assert!(!verify_trick(&w).ok());
}

#[test]
fn parser_reports_positions() {
    let err = parse("box A dims 3 4 5\nbox A dims 3 4 5\n").unwrap_err();
    assert_eq!(
        err,
        FormatError::DuplicateLabel {
            line: 2,
            label: "A".into()
        }
    );
    let err = parse("box A dims 3 x 5\n").unwrap_err();
    assert!(
        matches!(
            err,
            FormatError::Parse {
                line: 1,
                column: 14,
                ..
            }
        ),
        "{err}"
    );
    let err = parse("box A dims 3 4 5\narrangement AB order A B\n").unwrap_err();
    assert_eq!(
        err,
        FormatError::UnknownLabel {
            line: 2,
            label: "B".into()
        }
    );
    let err = parse("box A dims 3 4 5 expand 4\n").unwrap_err();
    assert!(
        matches!(
            err,
            FormatError::Parse {
                line: 1,
                column: 25,
                ..
            }
        ),
        "{err}"
    );
    let err = parse("crate A\n").unwrap_err();
    assert!(
        matches!(
            err,
            FormatError::Parse {
                line: 1,
                column: 1,
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn missing_show_lines_mean_closed() {
    let text = "# comment\nbox A dims 3 4 5 expand 1\nbox B dims 3 4 5 expand 1\n\
                arrangement AB order A B\narrangement BA order B A\n\
                show AB B expanded 6\nshow BA A expanded 6\n";
    let w = parse(text).unwrap();
    assert_eq!(w, catalog_entry("ex-3-4-5").unwrap().instance);
}

#[test]
fn exact_decimals_and_fractions_parse_alike() {
    let a = parse("box A dims 3.5 9/2 expand 1\narrangement A order A\n").unwrap();
    let b = parse("box A dims 7/2 4.5 expand 1\narrangement A order A\n").unwrap();
    assert_eq!(a, b);
    assert!(render(&a).starts_with("box A dims 7/2 9/2 expand 1\n"));
}
