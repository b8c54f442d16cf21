// SPDX-License-Identifier: Apache-2.0

//! Hermite and Smith normal forms over the integers.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;
use crate::Int;

/// Row-style Hermite normal form of the row space of `m`.
///
/// The result is in echelon form with positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, and zero rows removed. Two integer
/// matrices have the same row space iff their Hermite forms are equal.
pub fn hermite_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // smallest nonzero |a[i][c]| for i >= r goes to row r
            let pick = (r..rows)
                .filter(|&i| !a[(i, c)].is_zero())
                .min_by(|&i, &j| a[(i, c)].abs().cmp(&a[(j, c)].abs()));
            let Some(p) = pick else { break };
            a.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = a[(i, c)].div_floor(&a[(r, c)]);
                sub_row_multiple(&mut a, i, r, &q);
                if !a[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r == rows || a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            for x in a.row_mut(r) {
                *x = -core::mem::take(x);
            }
        }
        for i in 0..r {
            let q = a[(i, c)].div_floor(&a[(r, c)]);
            if !q.is_zero() {
                sub_row_multiple(&mut a, i, r, &q);
            }
        }
        r += 1;
    }
    a.select_rows(0..r)
}

fn sub_row_multiple(a: &mut IntMatrix, target: usize, src: usize, q: &Int) {
    for j in 0..a.cols() {
        let v = &a[(src, j)] * q;
        a[(target, j)] -= v;
    }
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub diagonal: Vec<Int>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Diagonal entries larger than one.
    pub fn elementary_divisors(&self) -> Vec<Int> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut vinv = IntMatrix::identity(cols);
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        vinv.swap_rows(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                sub_row_multiple(&mut a, i, t, &q);
                sub_row_multiple(&mut u, i, t, &q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                // col_j -= q col_t ; inverse: row_t(vinv) += q row_j(vinv)
                for i in 0..rows {
                    let x = &a[(i, t)] * &q;
                    a[(i, j)] -= x;
                }
                for i in 0..cols {
                    let x = &v[(i, t)] * &q;
                    v[(i, j)] -= x;
                }
                for k in 0..cols {
                    let x = &vinv[(j, k)] * &q;
                    vinv[(t, k)] += x;
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let (pi, pj) = min_abs_entry(&a, t).expect("pivot block is nonzero");
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                vinv.swap_rows(t, pj);
                continue;
            }
            // divisibility: fold an offending row into row t
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)])));
            match bad {
                Some(i) => {
                    for j in 0..cols {
                        let x = a[(i, j)].clone();
                        a[(t, j)] += x;
                    }
                    for j in 0..rows {
                        let x = u[(i, j)].clone();
                        u[(t, j)] += x;
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            for x in a.row_mut(t) {
                *x = -core::mem::take(x);
            }
            for x in u.row_mut(t) {
                *x = -core::mem::take(x);
            }
        }
        diagonal.push(a[(t, t)].clone());
    }

    SmithForm {
        diagonal,
        left: u,
        right: v,
        right_inv: vinv,
    }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= a[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Basis (as rows, Hermite-reduced) of `{x in Z^n : m * x^T = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith(m);
    let n = m.cols();
    let basis = s.right.transpose().select_rows(s.rank()..n);
    hermite_rows(&basis)
}

/// Basis (as rows, Hermite-reduced) of `rowspace_Q(m) ∩ Z^n`.
pub fn saturate_rows(m: &IntMatrix) -> IntMatrix {
    let s = smith(m);
    hermite_rows(&s.right_inv.select_rows(0..s.rank()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(m: &IntMatrix) {
        let s = smith(m);
        let d = s.left.mul(m).unwrap().mul(&s.right).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j && i < s.rank() {
                    s.diagonal[i].clone()
                } else {
                    Int::zero()
                };
                assert_eq!(d[(i, j)], expect, "entry ({i},{j}) of {d}");
            }
        }
        assert!(s.left.det().unwrap().abs().is_one());
        assert_eq!(
            s.right.mul(&s.right_inv).unwrap(),
            IntMatrix::identity(m.cols())
        );
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn smith_examples() {
        check_smith(&IntMatrix::from_i64(&[
            &[2, 4, 4],
            &[-6, 6, 12],
            &[10, -4, -16],
        ]));
        check_smith(&IntMatrix::from_i64(&[&[0, 3], &[3, 0]]));
        check_smith(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        check_smith(&IntMatrix::from_i64(&[&[1, 2, 3]]));
        check_smith(&IntMatrix::from_i64(&[&[0, 0], &[0, 0]]));
        let s = smith(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal, crate::matrix::int_vec(&[1, 6]));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = IntMatrix::from_i64(&[&[2, 4], &[1, 3]]);
        let b = IntMatrix::from_i64(&[&[1, 3], &[3, 7]]);
        assert_eq!(hermite_rows(&a), hermite_rows(&b));
        assert_eq!(hermite_rows(&a), IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
        let z = IntMatrix::from_i64(&[&[0, 0]]);
        assert_eq!(hermite_rows(&z).rows(), 0);
    }

    #[test]
    fn saturation_and_kernel() {
        let m = IntMatrix::from_i64(&[&[2, 2]]);
        assert_eq!(saturate_rows(&m), IntMatrix::from_i64(&[&[1, 1]]));
        let k = integer_kernel(&IntMatrix::from_i64(&[&[2, 3, 0]]));
        assert_eq!(k.rows(), 2);
        for r in k.row_iter() {
            let s: Int = &r[0] * 2 + &r[1] * 3;
            assert!(s.is_zero());
        }
    }
}
