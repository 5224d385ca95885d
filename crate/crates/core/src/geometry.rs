//! Ambient-space model for PG(n,q) and AG(n,q) plus subspace enumeration.
//!
//! The affine space AG(n,q) is modeled inside PG(n,q) with the hyperplane at
//! infinity fixed as {x_0 = 0}; an affine subspace is a projective subspace
//! not contained in that hyperplane. Enumeration generates canonical RREF
//! matrices directly: pivot-column patterns in lexicographic order, free
//! entries in odometer order, so the stream order is reproducible.

use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::subspace::Subspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    #[serde(rename = "PG")]
    Pg,
    #[serde(rename = "AG")]
    Ag,
}

impl std::fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpaceKind::Pg => write!(f, "PG"),
            SpaceKind::Ag => write!(f, "AG"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AmbientSpace {
    pub kind: SpaceKind,
    pub n: usize,
    pub field: Arc<FieldSpec>,
}

impl AmbientSpace {
    pub fn new(kind: SpaceKind, n: usize, q: u32) -> Result<AmbientSpace> {
        if n < 1 {
            return Err(Error::DimensionOutOfRange(n as i64));
        }
        Ok(AmbientSpace {
            kind,
            n,
            field: FieldSpec::new(q)?,
        })
    }

    pub fn q(&self) -> u32 {
        self.field.q
    }

    /// The hyperplane at infinity {x_0 = 0}, as a subspace of the projective
    /// closure.
    pub fn hyperplane_at_infinity(&self) -> Subspace {
        let basis = (1..=self.n)
            .map(|i| {
                let mut row = vec![0; self.n + 1];
                row[i] = 1;
                row
            })
            .collect();
        Subspace {
            ambient_n: self.n,
            field: self.field.clone(),
            basis,
        }
    }

    /// An affine subspace is one not contained in the hyperplane at
    /// infinity, i.e. some basis row has x_0 != 0.
    pub fn is_affine_subspace(&self, u: &Subspace) -> bool {
        u.basis.iter().any(|row| row[0] != 0)
    }

    /// A subspace belongs to this ambient space: always for PG, affine
    /// (or empty) for AG.
    pub fn admits(&self, u: &Subspace) -> bool {
        u.ambient_n == self.n
            && u.field.q == self.field.q
            && (self.kind == SpaceKind::Pg || u.is_empty() || self.is_affine_subspace(u))
    }

    /// Trace at infinity of an affine subspace: its meet with {x_0 = 0}.
    pub fn trace_at_infinity(&self, u: &Subspace) -> Result<Subspace> {
        if !self.is_affine_subspace(u) {
            return Err(Error::NotAffine);
        }
        u.meet(&self.hyperplane_at_infinity())
    }

    /// Dimension of the affine part of the intersection of two affine
    /// subspaces: -1 if the meet is empty or lies at infinity.
    pub fn affine_intersection_dim(&self, u: &Subspace, v: &Subspace) -> Result<i64> {
        if u.ambient_n != self.n || v.ambient_n != self.n {
            return Err(Error::AmbientMismatch);
        }
        if !self.is_affine_subspace(u) || !self.is_affine_subspace(v) {
            return Err(Error::NotAffine);
        }
        let w = u.meet(v)?;
        if w.is_empty() || !self.is_affine_subspace(&w) {
            Ok(-1)
        } else {
            Ok(w.proj_dim())
        }
    }

    /// Intersection dimension in this space's sense: projective meet
    /// dimension for PG, affine for AG.
    pub fn intersection_dim(&self, u: &Subspace, v: &Subspace) -> Result<i64> {
        match self.kind {
            SpaceKind::Pg => Ok(u.meet(v)?.proj_dim()),
            SpaceKind::Ag => self.affine_intersection_dim(u, v),
        }
    }
}

/// All canonical RREF matrices with r rows over ncols columns, as subspaces.
/// Deterministic order: pivot patterns lexicographic, free entries odometer.
fn rref_matrices(
    field: &Arc<FieldSpec>,
    ambient_n: usize,
    r: usize,
) -> impl Iterator<Item = Subspace> {
    let field = field.clone();
    let ncols = ambient_n + 1;
    let q = field.q as usize;
    (0..ncols).combinations(r).flat_map(move |pivots| {
        // Free positions: (row, col) with col right of the row's pivot and
        // not itself a pivot column.
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for c in p + 1..ncols {
                if !pivots.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        let field = field.clone();
        let pivots = pivots.clone();
        let total: u64 = (q as u64).checked_pow(free.len() as u32).expect("fits u64");
        (0..total).map(move |idx| {
            let mut basis = vec![vec![0 as FieldElement; ncols]; r];
            for (i, &p) in pivots.iter().enumerate() {
                basis[i][p] = 1;
            }
            // Odometer: last free position varies fastest.
            let mut rem = idx;
            for &(row, col) in free.iter().rev() {
                basis[row][col] = (rem % q as u64) as FieldElement;
                rem /= q as u64;
            }
            Subspace {
                ambient_n,
                field: field.clone(),
                basis,
            }
        })
    })
}

/// All d-spaces of the ambient space (affine only, for AG), in deterministic
/// order.
pub fn enumerate_subspaces(
    space: &AmbientSpace,
    d: i64,
) -> Result<Box<dyn Iterator<Item = Subspace> + '_>> {
    if d < -1 || d > space.n as i64 {
        return Err(Error::DimensionOutOfRange(d));
    }
    if d == -1 {
        let e = Subspace::empty(space.field.clone(), space.n);
        let keep = space.kind == SpaceKind::Pg;
        return Ok(Box::new(keep.then_some(e).into_iter()));
    }
    let r = (d + 1) as usize;
    let it = rref_matrices(&space.field, space.n, r);
    match space.kind {
        SpaceKind::Pg => Ok(Box::new(it)),
        SpaceKind::Ag => Ok(Box::new(it.filter(|u| space.is_affine_subspace(u)))),
    }
}

/// All d-spaces of the ambient space containing `base`. Works in the
/// quotient modulo `base`: complements are enumerated as RREF matrices over
/// the non-pivot columns of `base` and joined back, which is exact (every
/// d-space through `base` appears once) and avoids scanning the ambient.
pub fn enumerate_through<'a>(
    space: &'a AmbientSpace,
    base: &'a Subspace,
    d: i64,
) -> Result<Box<dyn Iterator<Item = Subspace> + 'a>> {
    if !space.admits(base) {
        return Err(Error::NotInSpace(format!(
            "base of dimension {}",
            base.proj_dim()
        )));
    }
    if d < base.proj_dim() || d > space.n as i64 {
        return Err(Error::DimensionOutOfRange(d));
    }
    let r = (d - base.proj_dim()) as usize;
    if r == 0 {
        return Ok(Box::new(std::iter::once(base.clone())));
    }
    let pivots = base.pivot_columns();
    let free_cols: Vec<usize> = (0..=space.n).filter(|c| !pivots.contains(c)).collect();
    let m = free_cols.len();
    let it = rref_matrices(&space.field, m.saturating_sub(1), r).map(move |small| {
        let mut rows = base.basis.clone();
        for srow in &small.basis {
            let mut row = vec![0 as FieldElement; space.n + 1];
            for (&c, &x) in free_cols.iter().zip(srow) {
                row[c] = x;
            }
            rows.push(row);
        }
        Subspace::canonicalize(space.field.clone(), space.n, rows).expect("well-formed rows")
    });
    // A join containing an affine base is itself affine; otherwise filter.
    if space.kind == SpaceKind::Ag && !space.is_affine_subspace(base) {
        Ok(Box::new(it.filter(|u| space.is_affine_subspace(u))))
    } else {
        Ok(Box::new(it))
    }
}

/// All d-spaces disjoint from `fixed`.
pub fn enumerate_disjoint_from<'a>(
    space: &'a AmbientSpace,
    fixed: &'a Subspace,
    d: i64,
) -> Result<Box<dyn Iterator<Item = Subspace> + 'a>> {
    if d < 0 || d > space.n as i64 {
        return Err(Error::DimensionOutOfRange(d));
    }
    Ok(Box::new(enumerate_subspaces(space, d)?.filter(move |u| {
        u.meet(fixed).expect("same ambient").is_empty()
    })))
}

/// All d-spaces of the ambient space contained in `within` (affine only for
/// AG). Enumerates in the coordinates of `within` and maps up, so the cost
/// scales with the small space.
pub fn enumerate_within<'a>(
    space: &'a AmbientSpace,
    within: &'a Subspace,
    d: i64,
) -> Result<Box<dyn Iterator<Item = Subspace> + 'a>> {
    let inner_dim = within.proj_dim();
    if d < -1 || d > inner_dim {
        return Err(Error::DimensionOutOfRange(d));
    }
    if d == -1 {
        let e = Subspace::empty(space.field.clone(), space.n);
        let keep = space.kind == SpaceKind::Pg;
        return Ok(Box::new(keep.then_some(e).into_iter()));
    }
    let r = (d + 1) as usize;
    let field = space.field.clone();
    let it = rref_matrices(&field, inner_dim as usize, r).map(move |coeffs| {
        // Each coefficient row combines the rows of `within`'s basis.
        let rows: Vec<Vec<FieldElement>> = coeffs
            .basis
            .iter()
            .map(|crow| {
                let mut v = vec![0 as FieldElement; space.n + 1];
                for (c, wrow) in crow.iter().zip(&within.basis) {
                    if *c != 0 {
                        for (x, &w) in v.iter_mut().zip(wrow) {
                            *x = space.field.add(*x, space.field.mul(*c, w));
                        }
                    }
                }
                v
            })
            .collect();
        Subspace::canonicalize(space.field.clone(), space.n, rows).expect("well-formed rows")
    });
    match space.kind {
        SpaceKind::Pg => Ok(Box::new(it)),
        SpaceKind::Ag => Ok(Box::new(it.filter(|u| space.is_affine_subspace(u)))),
    }
}
