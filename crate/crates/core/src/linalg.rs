//! Dense exact linear algebra over [`Rat`] for the small systems used here.

use num_traits::{One, Zero};

use crate::rat::Rat;

pub type Matrix = Vec<Vec<Rat>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

pub fn determinant(m: &Matrix) -> Rat {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] / &pivot;
            let (upper, lower) = a.split_at_mut(i);
            for (x, p) in lower[0][c..n].iter_mut().zip(&upper[c][c..n]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

/// Solves `a x = b` for square nonsingular `a`; `None` if singular.
pub fn solve(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

/// A nonzero vector in the kernel of `m` (rows are equations), if one exists.
pub fn kernel_vector(m: &Matrix, cols: usize) -> Option<Vec<Rat>> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rat::zero(); cols];
    x[free] = Rat::one();
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = -work[row][free].clone();
    }
    Some(x)
}

pub fn mat_vec(m: &Matrix, v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| crate::rat::dot(row, v)).collect()
}
