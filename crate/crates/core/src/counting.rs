//! Exact closed-form counts: Gaussian binomials, θ, disjoint-space counts,
//! the sizes of the four extremal examples in every printed form, the
//! Hilton–Milner thresholds f_p/f_a, and the auxiliary bounds used in the
//! classification proofs. Everything is arbitrary-precision integer
//! arithmetic; rational intermediate values must divide out exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SpaceKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExampleId {
    P1,
    P2,
    A1,
    A2,
}

impl ExampleId {
    pub fn space_kind(self) -> SpaceKind {
        match self {
            ExampleId::P1 | ExampleId::P2 => SpaceKind::Pg,
            ExampleId::A1 | ExampleId::A2 => SpaceKind::Ag,
        }
    }
}

impl std::fmt::Display for ExampleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ExampleId::P1 => "P1",
            ExampleId::P2 => "P2",
            ExampleId::A1 => "A1",
            ExampleId::A2 => "A2",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for ExampleId {
    type Err = Error;
    fn from_str(s: &str) -> Result<ExampleId> {
        match s {
            "P1" | "p1" => Ok(ExampleId::P1),
            "P2" | "p2" => Ok(ExampleId::P2),
            "A1" | "a1" => Ok(ExampleId::A1),
            "A2" | "a2" => Ok(ExampleId::A2),
            _ => Err(Error::ParseError(format!("unknown example id: {s}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Closed,
    Sum,
    Refined,
}

impl std::str::FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Form> {
        match s {
            "closed" => Ok(Form::Closed),
            "sum" => Ok(Form::Sum),
            "refined" => Ok(Form::Refined),
            _ => Err(Error::ParseError(format!("unknown form: {s}"))),
        }
    }
}

/// Parameter tuple for the size formulas and lemma grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub q: u32,
    pub n: i64,
    pub k: i64,
    pub t: i64,
    pub x: Option<i64>,
    pub j: Option<i64>,
}

impl Params {
    pub fn new(q: u32, n: i64, k: i64, t: i64) -> Params {
        Params {
            q,
            n,
            k,
            t,
            x: None,
            j: None,
        }
    }

    pub fn with_x(mut self, x: i64) -> Params {
        self.x = Some(x);
        self
    }
}

fn check_order(q: u32) -> Result<BigInt> {
    if q < 2 {
        return Err(Error::InvalidFieldOrder(q as i64));
    }
    Ok(BigInt::from(q))
}

/// q^e for e >= 0; e < 0 is a caller bug in this module.
fn qpow(q: u32, e: i64) -> BigInt {
    assert!(e >= 0, "negative exponent {e}");
    BigInt::from(q).pow(e as u32)
}

/// Gaussian binomial coefficient; 0 outside 0 <= k <= n so the printed
/// formulas degenerate correctly at boundary indices like k - t - 2 = -1.
pub fn gaussian(n: i64, k: i64, q: u32) -> Result<BigInt> {
    let bq = check_order(q)?;
    if k < 0 || k > n {
        return Ok(BigInt::zero());
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= bq.pow((n - i) as u32) - 1;
        den *= bq.pow((i + 1) as u32) - 1;
    }
    let (quot, rem) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(rem.is_zero());
    Ok(quot)
}

/// θ_n = number of points of PG(n,q); θ(-1) = 0, θ(0) = 1.
pub fn theta(n: i64, q: u32) -> Result<BigInt> {
    gaussian(n + 1, 1, q)
}

/// Number of j-spaces disjoint from a fixed m-space in PG(n,q).
pub fn count_disjoint(n: i64, m: i64, j: i64, q: u32) -> Result<BigInt> {
    check_order(q)?;
    if m < 0 || j < 0 {
        return Err(Error::HypothesisViolation(format!(
            "count_disjoint needs m >= 0 and j >= 0, got m={m}, j={j}"
        )));
    }
    Ok(qpow(q, (m + 1) * (j + 1)) * gaussian(n - m, j + 1, q)?)
}

/// Number of affine k-spaces in a projective m-space (those not inside a
/// fixed hyperplane).
pub fn count_affine_subspaces(m: i64, k: i64, q: u32) -> Result<BigInt> {
    Ok(gaussian(m + 1, k + 1, q)? - gaussian(m, k + 1, q)?)
}

/// Size of a t-pencil of k-spaces (projective or affine alike).
pub fn size_pencil(params: Params) -> Result<BigInt> {
    let Params { q, n, k, t, .. } = params;
    if !(0 <= t && t <= k && k <= n) {
        return Err(Error::HypothesisViolation(format!(
            "size_pencil needs 0 <= t <= k <= n, got (n,k,t)=({n},{k},{t})"
        )));
    }
    gaussian(n - t, k - t, q)
}

pub(crate) fn check_example_hypotheses(id: ExampleId, params: Params) -> Result<()> {
    let Params { n, k, t, .. } = params;
    let t_min = match id.space_kind() {
        SpaceKind::Pg => 0,
        SpaceKind::Ag => 1,
    };
    if t < t_min || k <= t || n <= 2 * k - t {
        return Err(Error::HypothesisViolation(format!(
            "{id} needs t >= {t_min}, k > t and n > 2k - t, got (n,k,t)=({n},{k},{t})"
        )));
    }
    check_order(params.q)?;
    Ok(())
}

/// Σ_{j=0}^{k-t-2} [k-t+1 over j+1] q^{(k-t-j)(k-t-j-1)} [n-k-1 over k-t-j-1],
/// the common tail of the P1/A1 sum forms.
fn example_one_tail(params: Params) -> Result<BigInt> {
    let Params { q, n, k, t, .. } = params;
    let mut acc = BigInt::zero();
    for j in 0..=k - t - 2 {
        acc += gaussian(k - t + 1, j + 1, q)?
            * qpow(q, (k - t - j) * (k - t - j - 1))
            * gaussian(n - k - 1, k - t - j - 1, q)?;
    }
    Ok(acc)
}

/// The factored display of the P2/A2 sizes; only defined for k > t+1 where
/// the denominator q^{k-t-1} - 1 is nonzero.
fn example_two_factored(params: Params, theta_index: i64) -> Result<BigInt> {
    let Params { q, n, k, t, .. } = params;
    // The fraction alone need not be an integer; only the full product is.
    let den: BigInt = qpow(q, k - t - 1) - 1;
    let num = theta(theta_index, q)? * qpow(q, k - t - 1) * (qpow(q, n - k) - 1);
    let total = BigRational::from(gaussian(n - t - 2, k - t - 2, q)?)
        * (BigRational::one() + BigRational::new(num, den));
    big_rational_to_int(total, "factored example-size display")
}

/// The two-term in-proof expansion of the P2/A2 sizes (k-spaces through Γ
/// plus k-spaces meeting Γ in exactly a (t+1)-space); total for all k > t.
fn example_two_terms(params: Params, theta_index: i64) -> Result<BigInt> {
    let Params { q, n, k, t, .. } = params;
    let through = gaussian(n - t - 2, k - t - 2, q)?;
    let exactly = gaussian(n - t - 1, k - t - 1, q)? - &through;
    Ok(&through + theta(theta_index, q)? * exactly)
}

fn big_rational_to_int(value: BigRational, what: &str) -> Result<BigInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(Error::DivisibilityViolation(format!(
            "{what} evaluates to the non-integer {value}"
        )))
    }
}

/// Refined decomposition of the P2 size at k = 2t+2 (relative to a disjoint
/// t-space τ), and of the A2 size at k = 2t+1 (relative to a disjoint
/// (t-1)-space). Terms are rational; the total must be an integer.
fn example_two_refined(params: Params, affine: bool) -> Result<BigInt> {
    let Params { q, n, t, .. } = params;
    // Shift by one between the two variants: the P display uses θ_{t+2},
    // tail indices n-2t-3 / t-j; the A display uses θ_{t+1}, n-2t-2 / t-j-1.
    let (th, top, jmax) = if affine {
        (theta(t + 1, q)?, t - 1, t - 1)
    } else {
        (theta(t + 2, q)?, t, t)
    };
    let mut acc = BigRational::from(gaussian(n - t - 2, top, q)? + &th);
    for j in 0..=jmax {
        let s = top - j + 1;
        let num = qpow(q, n - t - j - 1) - 2 * qpow(q, s) + 1;
        let den = qpow(q, s) - 1;
        let coeff = &th
            * gaussian(top + 1, j, q)?
            * qpow(q, s * (s - 1))
            * gaussian(n - params.k - 1, top - j, q)?;
        acc += BigRational::new(coeff * num, den);
    }
    big_rational_to_int(acc, "refined example-size sum")
}

/// Size of the named example in the requested printed form. All forms of the
/// same example agree; refined forms exist only on their k-relation slices
/// (k = 2t+2 for P2/P1, k = 2t+1 for A2/A1).
pub fn size_example(id: ExampleId, form: Form, params: Params) -> Result<BigInt> {
    check_example_hypotheses(id, params)?;
    let Params { q, n, k, t, .. } = params;
    if form == Form::Refined {
        let expected_k = match id.space_kind() {
            SpaceKind::Pg => 2 * t + 2,
            SpaceKind::Ag => 2 * t + 1,
        };
        if k != expected_k {
            return Err(Error::FormUnavailable(format!(
                "refined form of {id} needs k = {expected_k}, got k = {k}"
            )));
        }
    }
    match (id, form) {
        (ExampleId::P1, Form::Closed) => Ok(theta(k + 1, q)? - theta(k - t, q)?
            + gaussian(n - t, k - t, q)?
            - qpow(q, (k - t + 1) * (k - t)) * gaussian(n - k - 1, k - t, q)?),
        (ExampleId::A1, Form::Closed) => Ok(theta(k, q)? - theta(k - t, q)?
            + gaussian(n - t, k - t, q)?
            - qpow(q, (k - t + 1) * (k - t)) * gaussian(n - k - 1, k - t, q)?),
        (ExampleId::P1, Form::Sum | Form::Refined) => {
            Ok(theta(k + 1, q)? + example_one_tail(params)?)
        }
        (ExampleId::A1, Form::Sum | Form::Refined) => Ok(theta(k, q)? + example_one_tail(params)?),
        (ExampleId::P2, Form::Closed) => example_two_terms(params, t + 2),
        (ExampleId::A2, Form::Closed) => example_two_terms(params, t + 1),
        (ExampleId::P2, Form::Sum) | (ExampleId::A2, Form::Sum) => {
            if k == t + 1 {
                return Err(Error::FormUnavailable(format!(
                    "factored form of {id} degenerates at k = t + 1"
                )));
            }
            let idx = if id == ExampleId::P2 { t + 2 } else { t + 1 };
            example_two_factored(params, idx)
        }
        (ExampleId::P2, Form::Refined) => example_two_refined(params, false),
        (ExampleId::A2, Form::Refined) => example_two_refined(params, true),
    }
}

/// Which example attains the Hilton–Milner threshold, plus its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    pub value: BigInt,
    pub branch: ExampleId,
}

/// f_p (PG) or f_a (AG): the larger of the two example sizes. The attained
/// branch must match the proven case split (the one-type example wins iff
/// k > 2t+2 projectively, iff k > 2t+1 affinely); a mismatch means a
/// transcription bug and is reported as such.
pub fn hm_threshold(kind: SpaceKind, params: Params) -> Result<Threshold> {
    let Params { q, n, k, t, .. } = params;
    if n <= 2 * k - t || k <= t + 1 || q < 3 {
        return Err(Error::HypothesisViolation(format!(
            "threshold needs n > 2k - t, k > t + 1 and q >= 3, got (q,n,k,t)=({q},{n},{k},{t})"
        )));
    }
    let (one, two, split) = match kind {
        SpaceKind::Pg => (ExampleId::P1, ExampleId::P2, 2 * t + 2),
        SpaceKind::Ag => (ExampleId::A1, ExampleId::A2, 2 * t + 1),
    };
    let s1 = size_example(one, Form::Closed, params)?;
    let s2 = size_example(two, Form::Closed, params)?;
    // Ties go to the Γ-based example, matching the "k <= split" clause.
    let branch = if s1 > s2 { one } else { two };
    let expected = if k > split { one } else { two };
    if branch != expected {
        return Err(Error::InvariantViolation(format!(
            "threshold branch {branch} contradicts the case split (expected {expected}) at (q,n,k,t)=({q},{n},{k},{t})"
        )));
    }
    Ok(Threshold {
        value: s1.max(s2),
        branch,
    })
}

/// Upper bound on |S| when the minimum cover dimension ψ(S) equals t + x.
pub fn bound_psi_families(kind: SpaceKind, params: Params) -> Result<BigInt> {
    let Params { q, n, k, t, .. } = params;
    let x = params.x.ok_or_else(|| {
        Error::HypothesisViolation("bound_psi_families needs the offset x".into())
    })?;
    if x < 2 || k <= t + 1 || n <= 2 * k - t {
        return Err(Error::HypothesisViolation(format!(
            "bound_psi_families needs x >= 2, k > t + 1 and n > 2k - t, got (n,k,t,x)=({n},{k},{t},{x})"
        )));
    }
    let common = theta(k - t, q)?.pow(x as u32) * gaussian(n - t - x, k - t - x, q)?;
    match kind {
        SpaceKind::Pg => Ok(common * gaussian(t + x + 1, t + 1, q)?),
        SpaceKind::Ag => Ok(common * qpow(q, x) * gaussian(t + x, x, q)?),
    }
}

/// Upper bound on |S| when ψ(S) = t + 1 and the cover set has at most two
/// elements.
pub fn bound_small_cover(kind: SpaceKind, params: Params) -> Result<BigInt> {
    let Params { q, n, k, t, .. } = params;
    if k <= t || n <= 2 * k - t {
        return Err(Error::HypothesisViolation(format!(
            "bound_small_cover needs k > t and n > 2k - t, got (n,k,t)=({n},{k},{t})"
        )));
    }
    let tt = theta(t + 1, q)?;
    let tk = theta(k - t, q)?;
    let inner = match kind {
        SpaceKind::Pg => &tt * &tk - &tt - 1,
        SpaceKind::Ag => &tt * &tk - &tt - &tk,
    };
    debug_assert!(!inner.is_negative());
    Ok(2 * gaussian(n - t - 1, k - t - 1, q)?
        + inner * tk * gaussian(n - t - 2, k - t - 2, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn u(v: Result<BigInt>) -> u64 {
        v.unwrap().to_u64().unwrap()
    }

    #[test]
    fn gaussian_values_and_conventions() {
        assert_eq!(u(gaussian(4, 2, 2)), 35);
        assert_eq!(u(gaussian(5, 0, 7)), 1);
        assert_eq!(u(gaussian(5, 5, 7)), 1);
        assert_eq!(u(gaussian(1, -1, 2)), 0);
        assert_eq!(u(gaussian(1, 2, 2)), 0);
        assert_eq!(gaussian(3, 1, 1).unwrap_err(), Error::InvalidFieldOrder(1));
    }

    #[test]
    fn gaussian_symmetry_and_pascal() {
        for q in [2u32, 3, 4, 5] {
            for n in 0..=12i64 {
                for k in 0..=n {
                    let g = gaussian(n, k, q).unwrap();
                    assert_eq!(g, gaussian(n, n - k, q).unwrap());
                    if n > 0 {
                        let rec = gaussian(n - 1, k - 1, q).unwrap()
                            + BigInt::from(q).pow(k as u32) * gaussian(n - 1, k, q).unwrap();
                        assert_eq!(g, rec, "Pascal at ({n},{k},{q})");
                    }
                }
            }
        }
    }

    #[test]
    fn theta_values() {
        assert_eq!(u(theta(2, 2)), 7);
        assert_eq!(u(theta(2, 3)), 13);
        assert_eq!(u(theta(0, 5)), 1);
        assert_eq!(u(theta(-1, 2)), 0);
    }

    #[test]
    fn disjoint_counts() {
        assert_eq!(u(count_disjoint(3, 1, 1, 2)), 16);
        assert_eq!(u(count_disjoint(2, 1, 1, 2)), 0);
        assert_eq!(u(count_disjoint(4, 0, 0, 2)), 30);
    }

    #[test]
    fn affine_counts() {
        assert_eq!(u(count_affine_subspaces(3, 1, 2)), 28);
        assert_eq!(u(count_affine_subspaces(4, 4, 3)), 1);
        // Resolved by the AG(2,2) enumeration oracle: 7 - 1 = 6 affine lines.
        assert_eq!(u(count_affine_subspaces(2, 1, 2)), 6);
    }

    #[test]
    fn pencil_sizes() {
        let p = |q, n, k, t| u(size_pencil(Params::new(q, n, k, t)));
        assert_eq!(p(2, 3, 1, 0), 7);
        assert_eq!(p(5, 9, 4, 4), 1);
        assert_eq!(p(2, 4, 2, 1), 7);
        assert!(size_pencil(Params::new(2, 3, 2, 3)).is_err());
    }

    #[test]
    fn example_sizes_pinned() {
        let s = |id, form, q, n, k, t| u(size_example(id, form, Params::new(q, n, k, t)));
        assert_eq!(s(ExampleId::P1, Form::Closed, 2, 6, 3, 1), 115);
        assert_eq!(s(ExampleId::P1, Form::Sum, 2, 6, 3, 1), 115);
        assert_eq!(s(ExampleId::P2, Form::Closed, 2, 4, 2, 1), 15);
        assert_eq!(s(ExampleId::P1, Form::Closed, 2, 4, 2, 1), 15);
        assert_eq!(s(ExampleId::A1, Form::Closed, 2, 6, 3, 1), 99);
        assert_eq!(s(ExampleId::A2, Form::Closed, 3, 6, 3, 1), 508);
        assert_eq!(s(ExampleId::A1, Form::Closed, 3, 6, 3, 1), 508);
        // At k = t + 1 the Γ-based example degenerates to all (t+1)-spaces
        // of Γ through an element of the chosen spread-like set.
        assert_eq!(s(ExampleId::A2, Form::Closed, 2, 4, 2, 1), 7);
        assert_eq!(
            size_example(ExampleId::A2, Form::Sum, Params::new(2, 4, 2, 1)).unwrap_err(),
            Error::FormUnavailable("factored form of A2 degenerates at k = t + 1".into())
        );
    }

    #[test]
    fn forms_agree_on_grid() {
        for q in [2u32, 3, 4] {
            for t in [1i64, 2] {
                for k in t + 1..=t + 4 {
                    for n in 2 * k - t + 1..=2 * k + 6 {
                        let p = Params::new(q, n, k, t);
                        for id in [ExampleId::P1, ExampleId::P2, ExampleId::A1, ExampleId::A2] {
                            let closed = size_example(id, Form::Closed, p).unwrap();
                            match size_example(id, Form::Sum, p) {
                                Ok(sum) => assert_eq!(closed, sum, "{id} sum at {p:?}"),
                                Err(Error::FormUnavailable(_)) => assert_eq!(k, t + 1),
                                Err(e) => panic!("{e}"),
                            }
                            match size_example(id, Form::Refined, p) {
                                Ok(refined) => {
                                    assert_eq!(closed, refined, "{id} refined at {p:?}")
                                }
                                Err(Error::FormUnavailable(_)) => {}
                                Err(e) => panic!("{e}"),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn threshold_branches() {
        let th = hm_threshold(SpaceKind::Pg, Params::new(3, 10, 3, 1)).unwrap();
        assert_eq!(th.branch, ExampleId::P2);
        let th = hm_threshold(SpaceKind::Ag, Params::new(3, 10, 4, 1)).unwrap();
        assert_eq!(th.branch, ExampleId::A1);
        let th = hm_threshold(SpaceKind::Ag, Params::new(3, 6, 3, 1)).unwrap();
        assert_eq!(th.value.to_u64().unwrap(), 508);
        assert_eq!(th.branch, ExampleId::A2);
        for q in [3u32, 4, 5] {
            for t in [1i64, 2] {
                for k in t + 2..=t + 5 {
                    for n in 2 * k - t + 1..=2 * k + 5 {
                        hm_threshold(SpaceKind::Pg, Params::new(q, n, k, t)).unwrap();
                        hm_threshold(SpaceKind::Ag, Params::new(q, n, k, t)).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn psi_and_cover_bounds() {
        let p = Params::new(2, 8, 3, 1).with_x(2);
        assert_eq!(u(bound_psi_families(SpaceKind::Pg, p)), 1715);
        assert_eq!(u(bound_psi_families(SpaceKind::Ag, p)), 1372);
        assert_eq!(
            u(bound_small_cover(SpaceKind::Pg, Params::new(2, 6, 3, 1))),
            317
        );
        assert_eq!(
            u(bound_small_cover(SpaceKind::Ag, Params::new(2, 6, 3, 1))),
            275
        );
        // k - t - 2 < 0: the second term vanishes by the zero convention.
        assert_eq!(
            u(bound_small_cover(SpaceKind::Pg, Params::new(2, 4, 2, 1))),
            2
        );
    }
}
