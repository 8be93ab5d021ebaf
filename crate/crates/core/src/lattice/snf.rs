//! Smith and Hermite normal forms over `Z`, saturated kernels, and unimodular completion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, Matrix};

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal with `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub rank: usize,
}

impl Smith {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// row[dst] += f * row[src]
fn add_row(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    for j in 0..m.cols() {
        let v = &m[(src, j)] * f;
        m[(dst, j)] += v;
    }
}

fn add_col(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    for i in 0..m.rows() {
        let v = &m[(i, src)] * f;
        m[(i, dst)] += v;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        m[(r, j)] = -&m[(r, j)];
    }
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                add_row(&mut d, i, t, &q);
                add_row(&mut u, i, t, &q);
                if !d[(i, t)].is_zero() {
                    swap_rows(&mut d, t, i);
                    swap_rows(&mut u, t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                add_col(&mut d, j, t, &q);
                add_col(&mut v, j, t, &q);
                if !d[(t, j)].is_zero() {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad {
                Some(i) => {
                    add_row(&mut d, t, i, &BigInt::one());
                    add_row(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    Smith { u, v, d, rank: t }
}

/// Row-style Hermite normal form: echelon rows, positive pivots, entries above each pivot
/// reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !m[(i, c)].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[(i, c)].abs()).unwrap();
            swap_rows(&mut m, r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !m[(i, c)].is_zero() {
                    let q = -m[(i, c)].div_floor(&m[(r, c)]);
                    add_row(&mut m, i, r, &q);
                    if !m[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[(r, c)].is_zero() {
            continue;
        }
        if m[(r, c)].is_negative() {
            negate_row(&mut m, r);
        }
        for i in 0..r {
            let q = -m[(i, c)].div_floor(&m[(r, c)]);
            add_row(&mut m, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    m.submatrix(0, 0, r, cols)
}

/// Saturated basis of the integer kernel `{x : a x = 0}` as columns, in a canonical form:
/// the transpose of the Hermite form of the basis rows.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let n = a.cols();
    if s.rank == n {
        return IntMatrix::zeros(n, 0);
    }
    let k = s.v.submatrix(0, s.rank, n, n - s.rank);
    hermite_rows(&k.transpose()).transpose()
}

/// Whether the columns of `k` span a saturated sublattice of full column rank.
pub fn is_saturated(k: &IntMatrix) -> bool {
    let s = smith(k);
    s.rank == k.cols() && s.invariant_factors().iter().all(One::is_one)
}

/// A unimodular matrix whose first columns are the columns of `k`, which must be saturated.
pub fn complete_unimodular(k: &IntMatrix) -> Option<IntMatrix> {
    if !is_saturated(k) {
        return None;
    }
    let (r, e) = (k.rows(), k.cols());
    let s = smith(k);
    let u_inv = s.u.inverse_unimodular()?;
    let v_inv = s.v.inverse_unimodular()?;
    let q = u_inv.mul(&Matrix::block_diag(&[v_inv, IntMatrix::identity(r - e)]));
    debug_assert_eq!(q.submatrix(0, 0, r, e), *k);
    Some(q)
}
