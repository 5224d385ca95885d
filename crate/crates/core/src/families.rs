//! The extremal family constructions and their defining predicates:
//! pairwise t-intersection, maximality, the minimum cover dimension ψ and
//! the cover set 𝒯, plus the on-disk family format.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{size_pencil, ExampleId, Params};
use crate::error::{Error, Result};
use crate::geometry::{
    enumerate_subspaces, enumerate_through, enumerate_within, AmbientSpace, SpaceKind,
};
use crate::gf::FieldElement;
use crate::subspace::Subspace;

/// A finite set of k-spaces in a fixed ambient space, kept deduplicated and
/// sorted so families compare as sets.
#[derive(Debug, Clone)]
pub struct Family {
    pub space: AmbientSpace,
    pub k: i64,
    pub members: Vec<Subspace>,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.space.kind == other.space.kind
            && self.space.n == other.space.n
            && self.space.q() == other.space.q()
            && self.k == other.k
            && self.members == other.members
    }
}
impl Eq for Family {}

impl Family {
    /// Build a family from arbitrary member order; sorts, deduplicates and
    /// validates the dimension/ambient invariants.
    pub fn new(space: AmbientSpace, k: i64, mut members: Vec<Subspace>) -> Result<Family> {
        members.sort();
        members.dedup();
        for m in &members {
            if m.proj_dim() != k {
                return Err(Error::InvariantViolation(format!(
                    "member of dimension {} in a family of {}-spaces",
                    m.proj_dim(),
                    k
                )));
            }
            if !space.admits(m) {
                return Err(Error::NotInSpace(format!(
                    "member not admitted by {}({},{})",
                    space.kind,
                    space.n,
                    space.q()
                )));
            }
        }
        Ok(Family { space, k, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: &Subspace) -> bool {
        self.members.binary_search(u).is_ok()
    }
}

/// Anchor subspaces for `make_example`; when absent, canonical anchors are
/// synthesized from standard coordinate points.
#[derive(Debug, Clone)]
pub enum Anchors {
    /// δ and π for the one-type examples (P1/A1).
    OneType { delta: Subspace, pi: Subspace },
    /// Γ for the Γ-based examples (P2/A2).
    TwoType { gamma: Subspace },
}

fn standard_span(space: &AmbientSpace, coords: &[usize]) -> Subspace {
    let rows = coords
        .iter()
        .map(|&i| {
            let mut row = vec![0 as FieldElement; space.n + 1];
            row[i] = 1;
            row
        })
        .collect();
    Subspace::canonicalize(space.field.clone(), space.n, rows).expect("standard rows")
}

/// Canonical anchors: δ spans the last coordinate points (plus the affine
/// unit point for AG); π extends a (t-1)-subspace of δ by leading points;
/// Γ extends δ by two more points.
pub fn canonical_anchors(id: ExampleId, space: &AmbientSpace, params: Params) -> Anchors {
    let n = space.n;
    let (k, t) = (params.k as usize, params.t as usize);
    match (id, space.kind) {
        (ExampleId::P1, _) => {
            let delta: Vec<usize> = (n - t..=n).collect();
            let mut pi: Vec<usize> = (n - t + 1..=n).collect();
            pi.extend(0..=k - t);
            Anchors::OneType {
                delta: standard_span(space, &delta),
                pi: standard_span(space, &pi),
            }
        }
        (ExampleId::A1, _) => {
            let mut delta = vec![0usize];
            delta.extend(n - t + 1..=n);
            let mut pi = vec![0usize];
            pi.extend(1..=k - t + 1);
            pi.extend(n - t + 2..=n);
            Anchors::OneType {
                delta: standard_span(space, &delta),
                pi: standard_span(space, &pi),
            }
        }
        (ExampleId::P2, _) => {
            let mut gamma = vec![0usize, 1];
            gamma.extend(n - t..=n);
            Anchors::TwoType {
                gamma: standard_span(space, &gamma),
            }
        }
        (ExampleId::A2, _) => {
            let mut gamma = vec![0usize, 1, 2];
            gamma.extend(n - t + 1..=n);
            Anchors::TwoType {
                gamma: standard_span(space, &gamma),
            }
        }
    }
}

/// All k-spaces of the ambient through a fixed subspace.
pub fn make_pencil(space: &AmbientSpace, delta: &Subspace, k: i64) -> Result<Family> {
    if !space.admits(delta) {
        return Err(Error::NotInSpace("pencil base".into()));
    }
    if k < delta.proj_dim() || k > space.n as i64 {
        return Err(Error::DimensionOutOfRange(k));
    }
    let members: Vec<Subspace> = enumerate_through(space, delta, k)?.collect();
    let fam = Family::new(space.clone(), k, members)?;
    debug_assert_eq!(
        num_traits::ToPrimitive::to_usize(
            &size_pencil(Params::new(
                space.q(),
                space.n as i64,
                k,
                delta.proj_dim()
            ))
            .unwrap_or_default()
        )
        .unwrap_or(fam.len()),
        fam.len()
    );
    Ok(fam)
}

/// Lexicographically least affine point of `within` that is not in `avoid`.
fn least_affine_point(
    space: &AmbientSpace,
    within: &Subspace,
    avoid: Option<&Subspace>,
) -> Result<Subspace> {
    enumerate_within(space, within, 0)?
        .filter(|p| space.is_affine_subspace(p))
        .filter(|p| avoid.is_none_or(|a| !a.contains(p).unwrap()))
        .min()
        .ok_or_else(|| Error::BadAnchors("no affine base point available".into()))
}

fn validate_one_type(
    id: ExampleId,
    space: &AmbientSpace,
    params: Params,
    delta: &Subspace,
    pi: &Subspace,
) -> Result<()> {
    let Params { k, t, .. } = params;
    if !space.admits(delta) || !space.admits(pi) {
        return Err(Error::BadAnchors("anchors outside the ambient space".into()));
    }
    if delta.proj_dim() != t || pi.proj_dim() != k {
        return Err(Error::BadAnchors(format!(
            "{id} needs a {t}-space δ and a {k}-space π, got dimensions {} and {}",
            delta.proj_dim(),
            pi.proj_dim()
        )));
    }
    let meet = pi.meet(delta)?;
    if meet.proj_dim() != t - 1 {
        return Err(Error::BadAnchors(format!(
            "dim(π ∩ δ) must be {}, got {}",
            t - 1,
            meet.proj_dim()
        )));
    }
    if id == ExampleId::A1 {
        if !space.is_affine_subspace(&meet) {
            return Err(Error::BadAnchors("π ∩ δ lies at infinity".into()));
        }
        let trace = space.trace_at_infinity(delta)?;
        if pi.contains(&trace)? {
            return Err(Error::BadAnchors(
                "the trace of δ at infinity lies inside π".into(),
            ));
        }
    }
    Ok(())
}

/// The full member list of one of the four extremal examples. Deterministic
/// given anchors; canonical anchors are synthesized when omitted.
pub fn make_example(
    id: ExampleId,
    space: &AmbientSpace,
    params: Params,
    anchors: Option<Anchors>,
) -> Result<Family> {
    if space.kind != id.space_kind() {
        return Err(Error::BadAnchors(format!(
            "{id} lives in {}, not {}",
            id.space_kind(),
            space.kind
        )));
    }
    if space.n as i64 != params.n || space.q() != params.q {
        return Err(Error::AmbientMismatch);
    }
    crate::counting::check_example_hypotheses(id, params)?;
    let Params { k, t, .. } = params;
    let anchors = anchors.unwrap_or_else(|| canonical_anchors(id, space, params));
    let members: Vec<Subspace> = match (id, anchors) {
        (ExampleId::P1 | ExampleId::A1, Anchors::OneType { delta, pi }) => {
            validate_one_type(id, space, params, &delta, &pi)?;
            let span = pi.join(&delta)?;
            let mut members: Vec<Subspace> = match id {
                // S₁ projectively: all k-spaces of ⟨π, δ⟩.
                ExampleId::P1 => enumerate_within(space, &span, k)?.collect(),
                // S₁ affinely: the hyperplanes of ⟨π, δ⟩ through a fixed
                // affine point O ∈ π∖δ avoiding the trace of δ; distinct
                // traces at infinity then hold automatically.
                _ => {
                    let o = least_affine_point(space, &pi, Some(&delta))?;
                    let trace = space.trace_at_infinity(&delta)?;
                    enumerate_within(space, &span, k)?
                        .filter(|u| u.contains(&o).unwrap() && !u.contains(&trace).unwrap())
                        .collect()
                }
            };
            // S₂: all k-spaces through δ meeting ⟨π, δ⟩ in ≥ (t+1)-space.
            for u in enumerate_through(space, &delta, k)? {
                if u.meet(&span)?.proj_dim() >= t + 1 {
                    members.push(u);
                }
            }
            members
        }
        (ExampleId::P2 | ExampleId::A2, Anchors::TwoType { gamma }) => {
            if !space.admits(&gamma) || gamma.proj_dim() != t + 2 {
                return Err(Error::BadAnchors(format!(
                    "{id} needs a (t+2)-space Γ, got dimension {}",
                    gamma.proj_dim()
                )));
            }
            let sections: Vec<Subspace> = match id {
                // All (t+1)-spaces of Γ.
                ExampleId::P2 => enumerate_within(space, &gamma, t + 1)?.collect(),
                // ℛ: the (t+1)-spaces of Γ through a fixed affine point,
                // a maximal choice with pairwise distinct traces.
                _ => {
                    let o = least_affine_point(space, &gamma, None)?;
                    enumerate_within(space, &gamma, t + 1)?
                        .filter(|u| u.contains(&o).unwrap())
                        .collect()
                }
            };
            // No k-space contains Γ when k = t + 1.
            let mut members: Vec<Subspace> = if k >= t + 2 {
                enumerate_through(space, &gamma, k)?.collect()
            } else {
                Vec::new()
            };
            for sigma in &sections {
                for u in enumerate_through(space, sigma, k)? {
                    if u.meet(&gamma)? == *sigma {
                        members.push(u);
                    }
                }
            }
            members
        }
        (_, anchors) => {
            return Err(Error::BadAnchors(format!(
                "{id} does not take {} anchors",
                match anchors {
                    Anchors::OneType { .. } => "δ/π",
                    Anchors::TwoType { .. } => "Γ",
                }
            )));
        }
    };
    Family::new(space.clone(), k, members)
}

/// Outcome of the pairwise t-intersection scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseReport {
    pub holds: bool,
    /// Lexicographically least violating pair, when the check fails.
    pub witness: Option<(Subspace, Subspace)>,
}

/// Whether every member pair intersects in dimension >= t (projectively for
/// PG, affinely for AG).
pub fn is_pairwise_t_intersecting(fam: &Family, t: i64) -> PairwiseReport {
    let members = &fam.members;
    let witness = (0..members.len())
        .into_par_iter()
        .flat_map(|i| (i + 1..members.len()).into_par_iter().map(move |j| (i, j)))
        .filter(|&(i, j)| {
            fam.space
                .intersection_dim(&members[i], &members[j])
                .map(|d| d < t)
                .unwrap_or(true)
        })
        .min()
        .map(|(i, j)| (members[i].clone(), members[j].clone()));
    PairwiseReport {
        holds: witness.is_none(),
        witness,
    }
}

/// Outcome of the maximality scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityReport {
    pub holds: bool,
    /// Lexicographically least k-space extending the family, when not
    /// maximal.
    pub extension: Option<Subspace>,
}

/// Whether no k-space of the ambient outside the family meets every member
/// in >= t. Exhaustive over the ambient; intended for small instances.
pub fn is_maximal(fam: &Family, t: i64) -> Result<MaximalityReport> {
    if !is_pairwise_t_intersecting(fam, t).holds {
        return Err(Error::NotIntersecting);
    }
    let candidates: Vec<Subspace> = enumerate_subspaces(&fam.space, fam.k)?.collect();
    let extension = candidates
        .par_iter()
        .filter(|u| !fam.contains(u))
        .filter(|u| {
            fam.members.iter().all(|m| {
                fam.space
                    .intersection_dim(u, m)
                    .map(|d| d >= t)
                    .unwrap_or(false)
            })
        })
        .min()
        .cloned();
    Ok(MaximalityReport {
        holds: extension.is_none(),
        extension,
    })
}

/// Result of the minimum-cover search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Psi {
    Found(i64),
    /// No cover exists up to the searched dimension bound.
    NotFound(i64),
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub psi: Psi,
    /// The set 𝒯 of all minimum-dimension covers (empty when not found).
    pub covers: Family,
}

/// Smallest d in [t, max_dim] such that some d-space meets every member in
/// >= t, together with all such d-spaces.
pub fn cover_analysis(fam: &Family, t: i64, max_dim: i64) -> Result<CoverReport> {
    if fam.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for d in t..=max_dim {
        let candidates: Vec<Subspace> = enumerate_subspaces(&fam.space, d)?.collect();
        let mut covers: Vec<Subspace> = candidates
            .into_par_iter()
            .filter(|c| {
                fam.members.iter().all(|m| {
                    fam.space
                        .intersection_dim(c, m)
                        .map(|dim| dim >= t)
                        .unwrap_or(false)
                })
            })
            .collect();
        if !covers.is_empty() {
            covers.sort();
            return Ok(CoverReport {
                psi: Psi::Found(d),
                covers: Family::new(fam.space.clone(), d, covers)?,
            });
        }
    }
    Ok(CoverReport {
        psi: Psi::NotFound(max_dim),
        covers: Family::new(fam.space.clone(), max_dim, Vec::new())?,
    })
}

#[derive(Serialize, Deserialize)]
struct FamilyFile {
    space: SpaceKind,
    q: u32,
    n: usize,
    k: i64,
    subspaces: Vec<Vec<Vec<u32>>>,
}

pub fn family_to_json(fam: &Family) -> String {
    let file = FamilyFile {
        space: fam.space.kind,
        q: fam.space.q(),
        n: fam.space.n,
        k: fam.k,
        subspaces: fam
            .members
            .iter()
            .map(|m| {
                m.basis
                    .iter()
                    .map(|row| row.iter().map(|&x| x as u32).collect())
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

pub fn family_from_json(text: &str) -> Result<Family> {
    let file: FamilyFile =
        serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    let space = AmbientSpace::new(file.space, file.n, file.q)
        .map_err(|e| Error::ParseError(e.to_string()))?;
    let mut members = Vec::with_capacity(file.subspaces.len());
    for mat in file.subspaces {
        let rows: Vec<Vec<FieldElement>> = mat
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| {
                        if x >= file.q {
                            Err(Error::ParseError(format!(
                                "element code {x} out of range for GF({})",
                                file.q
                            )))
                        } else {
                            Ok(x as FieldElement)
                        }
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let sub = Subspace::canonicalize(space.field.clone(), space.n, rows)?;
        members.push(sub);
    }
    let deduped = {
        let mut sorted = members.clone();
        sorted.sort();
        sorted.dedup();
        sorted.len()
    };
    if deduped != members.len() {
        return Err(Error::InvariantViolation(
            "duplicate members after canonicalization".into(),
        ));
    }
    Family::new(space, file.k, members)
}

pub fn family_save(fam: &Family, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
    f.write_all(family_to_json(fam).as_bytes())
        .map_err(|e| Error::ParseError(e.to_string()))
}

pub fn family_load(path: &Path) -> Result<Family> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
    family_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{size_example, Form};
    use num_traits::ToPrimitive;

    fn pg(n: usize, q: u32) -> AmbientSpace {
        AmbientSpace::new(SpaceKind::Pg, n, q).unwrap()
    }
    fn ag(n: usize, q: u32) -> AmbientSpace {
        AmbientSpace::new(SpaceKind::Ag, n, q).unwrap()
    }

    #[test]
    fn pencils() {
        let space = pg(3, 2);
        let point = standard_span(&space, &[0]);
        let fam = make_pencil(&space, &point, 1).unwrap();
        assert_eq!(fam.len(), 7);
        assert_eq!(make_pencil(&space, &point, 0).unwrap().members, vec![point]);
        let aspace = ag(3, 2);
        let apoint = standard_span(&aspace, &[0]);
        assert_eq!(make_pencil(&aspace, &apoint, 1).unwrap().len(), 7);
    }

    #[test]
    fn example_sizes_match_formulas() {
        let cases: &[(ExampleId, u32, usize, i64, i64)] = &[
            (ExampleId::P1, 2, 4, 2, 1),
            (ExampleId::P2, 2, 4, 2, 1),
            (ExampleId::P1, 2, 6, 3, 1),
            (ExampleId::A1, 2, 6, 3, 1),
            (ExampleId::A2, 2, 4, 2, 1),
            (ExampleId::A2, 3, 6, 3, 1),
        ];
        for &(id, q, n, k, t) in cases {
            let space = AmbientSpace::new(id.space_kind(), n, q).unwrap();
            let params = Params::new(q, n as i64, k, t);
            let fam = make_example(id, &space, params, None).unwrap();
            let expected = size_example(id, Form::Closed, params)
                .unwrap()
                .to_usize()
                .unwrap();
            assert_eq!(fam.len(), expected, "{id} at ({q},{n},{k},{t})");
        }
    }

    #[test]
    fn p1_and_p2_coincide_at_k_t_plus_1() {
        // With Γ = ⟨π, δ⟩ both examples are all (t+1)-spaces of a (t+2)-space.
        let space = pg(4, 2);
        let params = Params::new(2, 4, 2, 1);
        let Anchors::OneType { delta, pi } = canonical_anchors(ExampleId::P1, &space, params)
        else {
            unreachable!()
        };
        let gamma = pi.join(&delta).unwrap();
        let f1 = make_example(ExampleId::P1, &space, params, None).unwrap();
        let f2 = make_example(
            ExampleId::P2,
            &space,
            params,
            Some(Anchors::TwoType { gamma }),
        )
        .unwrap();
        assert_eq!(f1, f2);
        assert_eq!(f1.len(), 15);
    }

    #[test]
    fn examples_are_intersecting_and_not_pencils() {
        for (id, q, n, k, t) in [
            (ExampleId::P1, 2u32, 4usize, 2i64, 1i64),
            (ExampleId::P2, 2, 4, 2, 1),
            (ExampleId::A1, 2, 6, 3, 1),
            (ExampleId::A2, 2, 4, 2, 1),
        ] {
            let space = AmbientSpace::new(id.space_kind(), n, q).unwrap();
            let params = Params::new(q, n as i64, k, t);
            let fam = make_example(id, &space, params, None).unwrap();
            assert!(is_pairwise_t_intersecting(&fam, t).holds, "{id}");
            // Not a t-pencil: no t-space lies in every member.
            let report = cover_analysis(&fam, t, t).unwrap();
            assert_eq!(report.psi, Psi::NotFound(t), "{id}");
        }
    }

    #[test]
    fn a1_trace_conditions_hold_literally() {
        let space = ag(6, 2);
        let params = Params::new(2, 6, 3, 1);
        let Anchors::OneType { delta, pi } = canonical_anchors(ExampleId::A1, &space, params)
        else {
            unreachable!()
        };
        let span = pi.join(&delta).unwrap();
        let fam = make_example(ExampleId::A1, &space, params, None).unwrap();
        let trace_delta = space.trace_at_infinity(&delta).unwrap();
        // S₁ proper: members inside ⟨π, δ⟩ that do not belong to S₂
        // (i.e. do not contain δ).
        let s1: Vec<_> = fam
            .members
            .iter()
            .filter(|m| span.contains(m).unwrap() && !m.contains(&delta).unwrap())
            .collect();
        assert!(s1.iter().any(|m| **m == pi));
        let traces: Vec<_> = s1
            .iter()
            .map(|m| space.trace_at_infinity(m).unwrap())
            .collect();
        let mut dedup = traces.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), traces.len(), "pairwise distinct traces");
        for m in &s1 {
            assert!(!m.contains(&trace_delta).unwrap());
        }
    }

    #[test]
    fn a2_section_conditions_hold_literally() {
        let space = ag(4, 2);
        let params = Params::new(2, 4, 2, 1);
        let Anchors::TwoType { gamma } = canonical_anchors(ExampleId::A2, &space, params) else {
            unreachable!()
        };
        let fam = make_example(ExampleId::A2, &space, params, None).unwrap();
        let sections: Vec<_> = fam
            .members
            .iter()
            .map(|m| m.meet(&gamma).unwrap())
            .filter(|s| s.proj_dim() == params.t + 1)
            .collect();
        let distinct: Vec<_> = {
            let mut s = sections.clone();
            s.sort();
            s.dedup();
            s
        };
        let mut traces: Vec<_> = distinct
            .iter()
            .map(|s| space.trace_at_infinity(s).unwrap())
            .collect();
        let total = traces.len();
        traces.sort();
        traces.dedup();
        assert_eq!(traces.len(), total, "pairwise distinct traces");
        for (i, a) in distinct.iter().enumerate() {
            for b in &distinct[i + 1..] {
                assert_eq!(
                    space.affine_intersection_dim(a, b).unwrap(),
                    params.t,
                    "sections meet in an affine t-space"
                );
            }
        }
    }

    #[test]
    fn pairwise_and_maximality_witnesses() {
        let space = pg(3, 2);
        let point = standard_span(&space, &[0]);
        let pencil = make_pencil(&space, &point, 1).unwrap();
        assert!(is_pairwise_t_intersecting(&pencil, 0).holds);
        assert!(is_maximal(&pencil, 0).unwrap().holds);

        let mut clipped = pencil.clone();
        let removed = clipped.members.pop().unwrap();
        let report = is_maximal(&clipped, 0).unwrap();
        assert!(!report.holds);
        // The removed line extends the clipped pencil; the reported witness
        // is the least extension, which must itself extend the family.
        let ext = report.extension.unwrap();
        assert!(ext == removed || !pencil.contains(&ext));

        let l1 = standard_span(&space, &[0, 1]);
        let l2 = standard_span(&space, &[2, 3]);
        let fam = Family::new(space.clone(), 1, vec![l1.clone(), l2.clone()]).unwrap();
        let rep = is_pairwise_t_intersecting(&fam, 0);
        assert!(!rep.holds);
        let (a, b) = rep.witness.unwrap();
        assert_eq!(
            (a.clone().min(b.clone()), a.max(b)),
            (l1.clone().min(l2.clone()), l1.max(l2))
        );
    }

    #[test]
    fn maximality_of_examples() {
        let space = pg(4, 2);
        let params = Params::new(2, 4, 2, 1);
        let fam = make_example(ExampleId::P2, &space, params, None).unwrap();
        assert!(is_maximal(&fam, 1).unwrap().holds);
        let aspace = ag(4, 2);
        let afam = make_example(ExampleId::A2, &aspace, params, None).unwrap();
        assert!(is_maximal(&afam, 1).unwrap().holds);
    }

    #[test]
    fn cover_analysis_examples() {
        let space = pg(3, 2);
        let point = standard_span(&space, &[0]);
        let pencil = make_pencil(&space, &point, 1).unwrap();
        let report = cover_analysis(&pencil, 0, 1).unwrap();
        assert_eq!(report.psi, Psi::Found(0));
        assert!(report.covers.contains(&point));

        let space = pg(4, 2);
        let params = Params::new(2, 4, 2, 1);
        for id in [ExampleId::P1, ExampleId::P2] {
            let fam = make_example(id, &space, params, None).unwrap();
            let report = cover_analysis(&fam, 1, 2).unwrap();
            assert_eq!(report.psi, Psi::Found(2), "{id}");
            assert!(report.covers.len() >= 3);
            // All covers lie in a common (t+2)-space (the Γ dichotomy).
            let mut hull = report.covers.members[0].clone();
            for c in &report.covers.members[1..] {
                hull = hull.join(c).unwrap();
            }
            assert_eq!(hull.proj_dim(), 3);
            // Lemma 4.3(2): every k-space through a cover is a member.
            for cover in &report.covers.members {
                for u in enumerate_through(&space, cover, 2).unwrap() {
                    assert!(fam.contains(&u));
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let space = pg(3, 2);
        let point = standard_span(&space, &[0]);
        let pencil = make_pencil(&space, &point, 1).unwrap();
        let text = family_to_json(&pencil);
        let loaded = family_from_json(&text).unwrap();
        assert_eq!(loaded, pencil);

        let bad_q = text.replace("\"q\": 2", "\"q\": 6");
        assert!(matches!(family_from_json(&bad_q), Err(Error::ParseError(_))));

        // Dependent rows canonicalize to lower dimension -> wrong k.
        let bad = r#"{"space":"PG","q":2,"n":3,"k":1,
            "subspaces":[[[1,0,0,0],[1,0,0,0]]]}"#;
        assert!(matches!(
            family_from_json(bad),
            Err(Error::InvariantViolation(_))
        ));

        // AG member inside the hyperplane at infinity.
        let infty = r#"{"space":"AG","q":2,"n":3,"k":1,
            "subspaces":[[[0,1,0,0],[0,0,1,0]]]}"#;
        assert!(matches!(
            family_from_json(infty),
            Err(Error::NotInSpace(_))
        ));
    }
}
