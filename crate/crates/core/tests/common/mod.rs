//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Row-reduce in place, returning the pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x = &*x - p * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(o) = points.first() else { return 0 };
    let rows: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|y| y.iter().zip(o).map(|(a, b)| rat(a - b)).collect())
        .collect();
    rank(&rows)
}

/// Normal of the hyperplane through `d` affinely independent points.
fn normal(pts: &[&Vec<i64>]) -> Option<Vec<BigRational>> {
    let d = pts[0].len();
    let mut m: Vec<Vec<BigRational>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0]).map(|(a, b)| rat(a - b)).collect())
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != d - 1 {
        return None;
    }
    let free = (0..d).find(|c| !pivots.contains(c)).expect("one free column");
    let mut n = vec![BigRational::zero(); d];
    n[free] = BigRational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        n[pc] = -m[row][free].clone();
    }
    Some(n)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(s: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in s..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Vertices of the hull of a full-dimensional point set: every `d`-subset
/// spans a candidate hyperplane; it supports the set if no two points lie
/// strictly on opposite sides, and a point is a vertex iff the supporting
/// hyperplanes through it have normals of full rank.
pub fn naive_vertices(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let d = pts[0].len();
    let mut normals_at: Vec<Vec<Vec<BigRational>>> = vec![Vec::new(); pts.len()];
    for s in subsets(pts.len(), d) {
        let chosen: Vec<&Vec<i64>> = s.iter().map(|&i| &pts[i]).collect();
        let Some(n) = normal(&chosen) else { continue };
        let value = |y: &Vec<i64>| -> BigRational {
            y.iter().zip(&n).map(|(a, c)| rat(*a) * c).sum::<BigRational>()
        };
        let c = value(chosen[0]);
        let signs: Vec<i32> = pts
            .iter()
            .map(|y| {
                let v = value(y) - &c;
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .collect();
        if signs.contains(&1) && signs.contains(&-1) {
            continue;
        }
        for (i, &sg) in signs.iter().enumerate() {
            if sg == 0 {
                normals_at[i].push(n.clone());
            }
        }
    }
    pts.iter()
        .zip(&normals_at)
        .filter(|(_, ns)| !ns.is_empty() && rank(ns) == d)
        .map(|(y, _)| y.clone())
        .collect()
}

/// `count` integer points in `[0, hi]^d`, full-dimensional.
pub fn random_full_set(rng: &mut ChaCha8Rng, d: usize, count: usize, hi: i64) -> Vec<Vec<i64>> {
    loop {
        let pts: Vec<Vec<i64>> = (0..count)
            .map(|_| (0..d).map(|_| rng.gen_range(0..=hi)).collect())
            .collect();
        if affine_rank(&pts) == d {
            return pts;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn example1_costs() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![3, 6, 4, 5], vec![2, 3, 5, 4], vec![3, 5, 4, 2], vec![4, 5, 3, 6]],
        vec![vec![2, 3, 5, 4], vec![5, 3, 4, 3], vec![5, 2, 6, 4], vec![4, 5, 2, 5]],
        vec![vec![4, 2, 4, 2], vec![4, 2, 4, 6], vec![4, 2, 6, 3], vec![2, 4, 5, 3]],
    ]
}
