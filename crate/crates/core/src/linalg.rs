//! Integer-preserving Gaussian elimination.
//!
//! Each elimination step replaces `row <- pivot * row - row[c] * pivot_row`
//! and then divides the row by its content, so entries stay integral and
//! small without ever forming fractions.

use crate::scalar::{self, Overflow, Scalar};

/// Reduces `rows` in place to row echelon form; returns pivot columns.
fn echelon<S: Scalar>(
    rows: &mut Vec<Vec<S>>,
    cols: usize,
    stop_at: usize,
) -> Result<Vec<usize>, Overflow> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        if top == rows.len() || pivots.len() == stop_at {
            break;
        }
        // prefer the pivot with the smallest magnitude to keep numbers small
        let Some(p) = (top..rows.len())
            .filter(|&r| !rows[r][c].is_zero())
            .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
        else {
            continue;
        };
        rows.swap(top, p);
        let (head, tail) = rows.split_at_mut(top + 1);
        let prow = &head[top];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            eliminate(row, prow, c)?;
        }
        pivots.push(c);
        top += 1;
    }
    Ok(pivots)
}

/// row <- a * row - b * prow with a = prow[c] / g, b = row[c] / g.
fn eliminate<S: Scalar>(row: &mut [S], prow: &[S], c: usize) -> Result<(), Overflow> {
    let g = prow[c].gcd(&row[c]);
    let a = prow[c].div_floor(&g);
    let b = row[c].div_floor(&g);
    for j in 0..row.len() {
        if prow[j].is_zero() {
            if !row[j].is_zero() {
                row[j] = scalar::mul(&row[j], &a)?;
            }
            continue;
        }
        let x = scalar::mul(&row[j], &a)?;
        let y = scalar::mul(&prow[j], &b)?;
        row[j] = scalar::sub(&x, &y)?;
    }
    debug_assert!(row[c].is_zero());
    scalar::make_primitive(row);
    Ok(())
}

/// Exact rank of the matrix whose rows are `rows`.
pub fn rank<S: Scalar, R: AsRef<[S]>>(rows: &[R], cols: usize) -> Result<usize, Overflow> {
    rank_capped(rows, cols, cols)
}

/// Exact rank, but stops as soon as it reaches `cap`.
pub fn rank_capped<S: Scalar, R: AsRef<[S]>>(
    rows: &[R],
    cols: usize,
    cap: usize,
) -> Result<usize, Overflow> {
    let mut m: Vec<Vec<S>> = rows.iter().map(|r| r.as_ref().to_vec()).collect();
    for r in m.iter_mut() {
        scalar::make_primitive(r);
    }
    Ok(echelon(&mut m, cols, cap)?.len())
}

/// Primitive integer basis of the right nullspace `{x : rows . x = 0}`.
pub fn nullspace<S: Scalar, R: AsRef<[S]>>(
    rows: &[R],
    cols: usize,
) -> Result<Vec<Vec<S>>, Overflow> {
    let mut m: Vec<Vec<S>> = rows.iter().map(|r| r.as_ref().to_vec()).collect();
    for r in m.iter_mut() {
        scalar::make_primitive(r);
    }
    let pivots = echelon(&mut m, cols, cols)?;
    m.truncate(pivots.len());
    // back substitution to reduced echelon form (still integral)
    for i in (0..pivots.len()).rev() {
        let c = pivots[i];
        let (head, tail) = m.split_at_mut(i);
        let prow = &tail[0];
        for row in head.iter_mut() {
            if !row[c].is_zero() {
                eliminate(row, prow, c)?;
            }
        }
    }
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        // x_f = L, x_{p_i} = -row_i[f] * L / row_i[p_i]
        let mut l = S::one();
        for (i, &c) in pivots.iter().enumerate() {
            if !m[i][f].is_zero() {
                l = l.lcm(&m[i][c]);
            }
        }
        let l = l.abs();
        let mut x = vec![S::zero(); cols];
        x[f] = l.clone();
        for (i, &c) in pivots.iter().enumerate() {
            if m[i][f].is_zero() {
                continue;
            }
            let q = l.div_floor(&m[i][c]);
            x[c] = -scalar::mul(&m[i][f], &q)?;
        }
        scalar::make_primitive(&mut x);
        basis.push(x);
    }
    Ok(basis)
}
