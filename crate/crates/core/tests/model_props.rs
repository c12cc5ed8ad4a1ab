use proptest::prelude::*;

use gozinta::format::{parse, render};
use gozinta::model::{dominates, expansion_bound_ok, make_dims, presented_dims, strictly_dominates};
use gozinta::nesting::{verify_trick, Arrangement};
use gozinta::{BoxDesign, Dims, Presentation, Scalar, TrickInstance};

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Box `inner` fits in `outer` if some rotation puts every side strictly
/// inside, checked over all rotations.
fn fits_some_rotation(inner: &[i64], outer: &[i64]) -> bool {
    permutations(inner.len())
        .iter()
        .any(|p| p.iter().enumerate().all(|(i, &j)| inner[j] < outer[i]))
}

/// One box as (closed sides in input order, expandable index, amount if
/// expanded), shown as the raw multiset of current side lengths.
type RawBox = (Vec<i64>, usize, Option<i64>);

fn shown(raw: &RawBox) -> Vec<i64> {
    let (sides, j, amount) = raw;
    let mut sorted = sides.clone();
    sorted.sort_unstable();
    if let Some(e) = amount {
        sorted[*j] = *e;
    }
    sorted
}

fn raw_box(dim: usize) -> impl Strategy<Value = RawBox> {
    (
        prop::collection::vec(1i64..=7, dim),
        0..dim,
        any::<bool>(),
        1i64..=7,
    )
        .prop_map(|(sides, j, expand, bump)| {
            let mut sorted = sides.clone();
            sorted.sort_unstable();
            let a = sorted[j];
            let amount = expand.then(|| a + 1 + (bump - 1) % a);
            (sides, j, amount)
        })
}

fn instance(raw: &[RawBox], order: &[usize]) -> TrickInstance {
    let labels: Vec<String> = (0..raw.len())
        .map(|i| ((b'A' + i as u8) as char).to_string())
        .collect();
    let boxes = raw
        .iter()
        .zip(&labels)
        .map(|((sides, j, _), l)| {
            BoxDesign::new(l.clone(), Dims::from_ints(sides).unwrap(), Some(j + 1)).unwrap()
        })
        .collect();
    let order_labels: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();
    let mut arr = Arrangement::new(order_labels.concat(), order_labels);
    for (i, (_, _, amount)) in raw.iter().enumerate() {
        if let Some(e) = amount {
            arr = arr.expand(&labels[i], Scalar::from_int(*e));
        }
    }
    TrickInstance::new(boxes, vec![arr])
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn dims_are_sorted_and_order_free(mut v in prop::collection::vec(1i64..50, 2..5), seed in any::<u64>()) {
        let d = make_dims(ints(&v)).unwrap();
        prop_assert!(d.sides().windows(2).all(|w| w[0] <= w[1]));
        let n = v.len();
        v.rotate_left((seed as usize) % n);
        prop_assert_eq!(make_dims(ints(&v)).unwrap(), d);
    }

    #[test]
    fn strict_domination_matches_rotation_search(
        a in prop::collection::vec(1i64..9, 3),
        b in prop::collection::vec(1i64..9, 3),
    ) {
        let (da, db) = (Dims::from_ints(&a).unwrap(), Dims::from_ints(&b).unwrap());
        prop_assert_eq!(strictly_dominates(&da, &db).unwrap(), fits_some_rotation(&b, &a));
        if strictly_dominates(&da, &db).unwrap() {
            prop_assert!(dominates(&da, &db).unwrap());
            prop_assert!(!strictly_dominates(&db, &da).unwrap());
        }
        prop_assert!(!strictly_dominates(&da, &da).unwrap());
        prop_assert!(dominates(&da, &da).unwrap());
    }

    #[test]
    fn strict_domination_is_transitive(
        a in prop::collection::vec(1i64..9, 2),
        b in prop::collection::vec(1i64..9, 2),
        c in prop::collection::vec(1i64..9, 2),
    ) {
        let (a, b, c) = (Dims::from_ints(&a).unwrap(), Dims::from_ints(&b).unwrap(), Dims::from_ints(&c).unwrap());
        if strictly_dominates(&a, &b).unwrap() && strictly_dominates(&b, &c).unwrap() {
            prop_assert!(strictly_dominates(&a, &c).unwrap());
        }
    }

    #[test]
    fn presented_dims_replace_one_side(raw in raw_box(3)) {
        let (sides, j, amount) = &raw;
        let design = BoxDesign::new("A", Dims::from_ints(sides).unwrap(), Some(j + 1)).unwrap();
        let presentation = amount.map_or(Presentation::Closed, |e| Presentation::Expanded(Scalar::from_int(e)));
        let mut expected = shown(&raw);
        expected.sort_unstable();
        prop_assert_eq!(presented_dims(&design, &presentation, true).unwrap(), Dims::from_ints(&expected).unwrap());
    }

    #[test]
    fn bound_is_twice_the_side(side in 1i64..20, amount in 1i64..45) {
        let design = BoxDesign::new("A", Dims::from_ints(&[side, 50]).unwrap(), Some(1)).unwrap();
        let ok = expansion_bound_ok(&design, &Scalar::from_int(amount)).unwrap();
        prop_assert_eq!(ok, side < amount && amount <= 2 * side);
    }

    #[test]
    fn verification_matches_rotation_oracle(
        raw in prop::collection::vec(raw_box(3), 2..4),
        seed in any::<u64>(),
    ) {
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.rotate_left((seed as usize) % raw.len());
        if seed & 1 == 1 {
            order.reverse();
        }
        let expected = order
            .windows(2)
            .all(|w| fits_some_rotation(&shown(&raw[w[0]]), &shown(&raw[w[1]])));
        prop_assert_eq!(verify_trick(&instance(&raw, &order)).ok(), expected);
    }

    #[test]
    fn render_then_parse_is_identity(raw in prop::collection::vec(raw_box(2), 1..5)) {
        let order: Vec<usize> = (0..raw.len()).rev().collect();
        let w = instance(&raw, &order);
        prop_assert_eq!(parse(&render(&w)).unwrap(), w);
    }

}
