//! Canonical subspace representation over GF(q).
//!
//! A subspace of the projective space of dimension `ambient_n` is stored as
//! its reduced-row-echelon basis matrix (rows of n+1 element codes). Two
//! subspaces are equal as point sets iff their matrices are identical, so
//! ordinary equality and ordering on the matrix give set semantics.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

#[derive(Debug, Clone)]
pub struct Subspace {
    pub ambient_n: usize,
    pub field: Arc<FieldSpec>,
    /// RREF basis, one row per basis vector; empty for the empty subspace.
    pub basis: Vec<Vec<FieldElement>>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_n == other.ambient_n
            && self.field.q == other.field.q
            && self.basis == other.basis
    }
}
impl Eq for Subspace {}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_n, self.field.q, &self.basis).cmp(&(
            other.ambient_n,
            other.field.q,
            &other.basis,
        ))
    }
}
impl std::hash::Hash for Subspace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient_n.hash(state);
        self.field.q.hash(state);
        self.basis.hash(state);
    }
}

/// In-place row reduction to RREF; returns the matrix without zero rows.
fn rref(field: &FieldSpec, mut rows: Vec<Vec<FieldElement>>) -> Vec<Vec<FieldElement>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(src) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = field.inv(rows[pivot_row][col]).expect("nonzero pivot");
        for x in rows[pivot_row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..ncols {
                    let sub = field.mul(factor, rows[pivot_row][c]);
                    rows[r][c] = field.sub(rows[r][c], sub);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}

impl Subspace {
    /// Canonical subspace spanned by the given rows. Dependent and zero rows
    /// are legal and reduced away; idempotent on RREF input.
    pub fn canonicalize(
        field: Arc<FieldSpec>,
        ambient_n: usize,
        rows: Vec<Vec<FieldElement>>,
    ) -> Result<Subspace> {
        for row in &rows {
            if row.len() != ambient_n + 1 {
                return Err(Error::DimensionMismatch {
                    expected: ambient_n + 1,
                    got: row.len(),
                });
            }
            for &x in row {
                if x as u32 >= field.q {
                    return Err(Error::ParseError(format!(
                        "element code {x} out of range for GF({})",
                        field.q
                    )));
                }
            }
        }
        let basis = rref(&field, rows);
        Ok(Subspace {
            ambient_n,
            field,
            basis,
        })
    }

    pub fn empty(field: Arc<FieldSpec>, ambient_n: usize) -> Subspace {
        Subspace {
            ambient_n,
            field,
            basis: Vec::new(),
        }
    }

    /// Whole-space subspace.
    pub fn full(field: Arc<FieldSpec>, ambient_n: usize) -> Subspace {
        let basis = (0..=ambient_n)
            .map(|i| {
                let mut row = vec![0; ambient_n + 1];
                row[i] = 1;
                row
            })
            .collect();
        Subspace {
            ambient_n,
            field,
            basis,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Projective dimension; -1 for the empty subspace.
    pub fn proj_dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient_n != other.ambient_n || self.field.q != other.field.q {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// Span of the union.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::canonicalize(self.field.clone(), self.ambient_n, rows)
    }

    /// Intersection, by the Zassenhaus block trick: reduce [U|U; V|0] and
    /// read the right halves of rows whose left half vanished.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let w = self.ambient_n + 1;
        let mut block: Vec<Vec<FieldElement>> = Vec::new();
        for row in &self.basis {
            let mut r = row.clone();
            r.extend(row.iter().copied());
            block.push(r);
        }
        for row in &other.basis {
            let mut r = row.clone();
            r.extend(std::iter::repeat(0).take(w));
            block.push(r);
        }
        let reduced = rref(&self.field, block);
        let inter_rows: Vec<Vec<FieldElement>> = reduced
            .into_iter()
            .filter(|r| r[..w].iter().all(|&x| x == 0))
            .map(|r| r[w..].to_vec())
            .collect();
        Subspace::canonicalize(self.field.clone(), self.ambient_n, inter_rows)
    }

    /// True iff `other` lies inside `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(other.basis.iter().all(|row| self.reduces_to_zero(row)))
    }

    /// True iff the vector lies in the row space.
    pub fn contains_vector(&self, vector: &[FieldElement]) -> bool {
        self.reduces_to_zero(vector)
    }

    fn reduces_to_zero(&self, row: &[FieldElement]) -> bool {
        let field = &self.field;
        let mut v = row.to_vec();
        for basis_row in &self.basis {
            let pivot = basis_row.iter().position(|&x| x != 0).expect("RREF row");
            if v[pivot] != 0 {
                let factor = v[pivot];
                for (x, &b) in v.iter_mut().zip(basis_row) {
                    *x = field.sub(*x, field.mul(factor, b));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Pivot columns of the RREF basis.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|row| row.iter().position(|&x| x != 0).expect("RREF row"))
            .collect()
    }
}
