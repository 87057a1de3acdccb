//! Row reduction over F_q.

use crate::gf::{Elem, FieldSpec};

/// Reduced row echelon form: pivots normalised to 1, leftmost pivot first,
/// zero rows dropped. Returns the nonzero rows and their pivot columns.
pub fn rref(field: &FieldSpec, rows: &[Vec<Elem>]) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let mut mat: Vec<Vec<Elem>> = rows.to_vec();
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == mat.len() {
            break;
        }
        let Some(pr) = (r..mat.len()).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = field.inv(mat[r][col]).expect("pivot is nonzero");
        for x in mat[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let c = row[col];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(c, pv));
            }
        }
        pivots.push(col);
        r += 1;
    }
    mat.truncate(r);
    (mat, pivots)
}

pub fn rank(field: &FieldSpec, rows: &[Vec<Elem>]) -> usize {
    rref(field, rows).1.len()
}

/// Basis of {x : M x = 0} for an r×c matrix M (one vector per free column,
/// in increasing free-column order).
pub fn nullspace(field: &FieldSpec, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let (red, pivots) = rref(field, rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Elem::ZERO; ncols];
            v[fc] = Elem::ONE;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = field.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// Columns `cols` of `rows`.
pub fn select_columns(rows: &[Vec<Elem>], cols: &[usize]) -> Vec<Vec<Elem>> {
    rows.iter()
        .map(|r| cols.iter().map(|&c| r[c]).collect())
        .collect()
}

pub fn transpose(rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    (0..ncols)
        .map(|c| rows.iter().map(|r| r[c]).collect())
        .collect()
}

/// Σ_i coeffs_i · rows_i.
pub fn combine(field: &FieldSpec, coeffs: &[Elem], rows: &[Vec<Elem>], ncols: usize) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; ncols];
    for (&c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = field.add(*o, field.mul(c, x));
        }
    }
    out
}
