//! Independent feasibility oracle for small strict/non-strict systems.
//!
//! Every generated system boxes its variables into `[-BOX, BOX]`, so the
//! closure `P` (all inequalities made non-strict) is a bounded polytope.
//! If the strict system `S` is non-empty then `cl S = P` and the relative
//! interior of `P` lies in `S`. The average of all vertices of `P` is in
//! that relative interior, so `S` is non-empty exactly when `P` has a vertex
//! and that average satisfies every original inequality.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

use gozinta::feasibility::{Comparison, LinExpr, LinearSystem};
use gozinta::Scalar;

pub const BOX: i64 = 6;

/// `coefs · x (< | ≤) bound`.
#[derive(Debug, Clone)]
pub struct Ineq {
    pub coefs: Vec<i64>,
    pub bound: i64,
    pub strict: bool,
}

#[derive(Debug, Clone)]
pub struct RandomSystem {
    pub vars: usize,
    pub rows: Vec<Ineq>,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn to_rational(s: &Scalar) -> BigRational {
    BigRational::new(s.numerator().clone(), s.denominator().clone())
}

/// Either general rows with coefficients in `-2..=2`, or difference rows,
/// which take the solver's shortest-path route.
pub fn random_system(rng: &mut StdRng) -> RandomSystem {
    let vars = rng.gen_range(1..=3);
    let count = rng.gen_range(1..=5);
    let difference = rng.gen_bool(0.4);
    let mut rows = Vec::new();
    for _ in 0..count {
        let mut coefs = vec![0; vars];
        if difference {
            let i = rng.gen_range(0..vars);
            coefs[i] = 1;
            let j = rng.gen_range(0..vars);
            if j != i && rng.gen_bool(0.7) {
                coefs[j] = -1;
            } else if rng.gen_bool(0.5) {
                coefs[i] = -1;
            }
        } else {
            for c in &mut coefs {
                *c = rng.gen_range(-2..=2);
            }
        }
        rows.push(Ineq {
            coefs,
            bound: rng.gen_range(-4..=4),
            strict: rng.gen_bool(0.5),
        });
    }
    for i in 0..vars {
        for sign in [1, -1] {
            let mut coefs = vec![0; vars];
            coefs[i] = sign;
            rows.push(Ineq {
                coefs,
                bound: BOX,
                strict: false,
            });
        }
    }
    RandomSystem { vars, rows }
}

pub fn to_linear_system(sys: &RandomSystem) -> LinearSystem {
    let mut out = LinearSystem::new();
    let vars: Vec<_> = (0..sys.vars).map(|i| out.add_var(format!("x{i}"))).collect();
    for row in &sys.rows {
        let lhs = row
            .coefs
            .iter()
            .zip(&vars)
            .fold(LinExpr::constant(Scalar::zero()), |acc, (&c, &v)| {
                acc + LinExpr::var(v) * &Scalar::from_int(c)
            });
        let cmp = if row.strict {
            Comparison::Less
        } else {
            Comparison::LessEq
        };
        out.push(lhs, cmp, LinExpr::constant(Scalar::from_int(row.bound)));
    }
    out
}

pub fn satisfies(sys: &RandomSystem, point: &[BigRational], closure: bool) -> bool {
    sys.rows.iter().all(|row| {
        let lhs: BigRational = row.coefs.iter().zip(point).map(|(&c, x)| q(c) * x).sum();
        if row.strict && !closure {
            lhs < q(row.bound)
        } else {
            lhs <= q(row.bound)
        }
    })
}

/// Solves the square system by Gaussian elimination; `None` if singular.
fn solve_square(rows: &[&Ineq]) -> Option<Vec<BigRational>> {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.coefs.iter().map(|&c| q(c)).chain([q(r.bound)]).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in &mut m[col] {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, p) in m[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

pub fn vertices(sys: &RandomSystem) -> Vec<Vec<BigRational>> {
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for pick in subsets(sys.rows.len(), sys.vars) {
        let rows: Vec<&Ineq> = pick.iter().map(|&i| &sys.rows[i]).collect();
        if let Some(p) = solve_square(&rows) {
            if satisfies(sys, &p, true) && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// A strictly feasible point if one exists.
pub fn oracle_point(sys: &RandomSystem) -> Option<Vec<BigRational>> {
    let vs = vertices(sys);
    if vs.is_empty() {
        return None;
    }
    let count = q(vs.len() as i64);
    let centroid: Vec<BigRational> = (0..sys.vars)
        .map(|i| vs.iter().map(|v| v[i].clone()).sum::<BigRational>() / &count)
        .collect();
    satisfies(sys, &centroid, false).then_some(centroid)
}

/// Exact check of a solver witness against the generated rows.
pub fn witness_holds(sys: &RandomSystem, values: &[Scalar]) -> bool {
    let point: Vec<BigRational> = values.iter().map(to_rational).collect();
    point.len() == sys.vars && satisfies(sys, &point, false)
}
