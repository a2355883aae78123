//! Exact linear algebra over fields (Q, Q(i)) and over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, Zero};

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<T: Num + Clone>(rows: &mut Vec<Vec<T>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<T: Num + Clone>(rows: &[Vec<T>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : A x = 0}`, one vector per free column, free entry 1.
pub fn nullspace<T: Num + Clone>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); ncols];
        v[free] = T::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = T::zero() - row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Row Hermite normal form over Z: pivots positive, entries above a pivot
/// reduced into `[0, pivot)`, zero rows dropped. Only the first `pivot_cols`
/// columns are used for pivoting; the rest ride along.
pub fn hermite(mut rows: Vec<Vec<BigInt>>, pivot_cols: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        // Euclid on column c over rows r.., by unimodular row operations.
        loop {
            let nonzero: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(r, p);
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let q = row[c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    rows
}

/// Hermite-reduced basis of the integer kernel `{x in Z^n : A x = 0}`.
/// The basis generates the full lattice of integer solutions.
pub fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let m = rows.len();
    // Row-reduce [A^T | I]; rows whose A^T part vanishes span the kernel.
    let augmented: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut row: Vec<BigInt> = rows.iter().map(|r| r[j].clone()).collect();
            row.extend((0..ncols).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let reduced = hermite(augmented, m);
    let kernel: Vec<Vec<BigInt>> = reduced
        .into_iter()
        .filter(|row| row[..m].iter().all(Zero::is_zero))
        .map(|row| row[m..].to_vec())
        .collect();
    hermite(kernel, ncols)
}
