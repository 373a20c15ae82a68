//! Closed-form spectral scalars of `Σ M_i M_i*` (τ) and `Σ M_i* M_i` (δ) on each `P_s`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::number::{int, Rational};
use crate::signatures::{BoundaryProfile, Signature};
use crate::weights::WeightSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaTag {
    Tau,
    DeltaCaseI,
    DeltaCaseII,
    /// Only established at rank <= 2 and for boundary profiles of size <= 2.
    DeltaConjecture,
    EtaGap,
}

impl FormulaTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaTag::Tau => "tau",
            FormulaTag::DeltaCaseI => "delta-case-i",
            FormulaTag::DeltaCaseII => "delta-case-ii",
            FormulaTag::DeltaConjecture => "delta-conjecture",
            FormulaTag::EtaGap => "eta-gap",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralScalar {
    pub value: Rational,
    pub signature: Signature,
    pub tag: FormulaTag,
}

fn check_multiplicity(a: &Rational) -> Result<()> {
    if !a.is_positive() {
        return Err(Error::ParameterBound("multiplicity a must be positive".into()));
    }
    Ok(())
}

fn product_over_others(s: &Signature, j: usize, a: &Rational, shift: i64) -> Result<Rational> {
    check_multiplicity(a)?;
    if j == 0 || j > s.rank() {
        return Err(Error::IndexOutOfRange { index: j, rank: s.rank() });
    }
    let half_a = a / int(2);
    let sj = int(s.part(j) as i64);
    let mut acc = int(1);
    for k in (1..=s.rank()).filter(|&k| k != j) {
        let gap = &sj - int(s.part(k) as i64);
        let offset = k as i64 - j as i64;
        let num = &gap + &half_a * int(offset + shift);
        if num.is_zero() {
            return Ok(Rational::zero());
        }
        acc *= num / (&gap + &half_a * int(offset));
    }
    Ok(acc)
}

/// `c'_s(j) = Π_{k≠j} (s_j - s_k + (a/2)(k-j-1)) / (s_j - s_k + (a/2)(k-j))`.
///
/// Vanishes when `s_j = s_{j+1}`. At `j = r` with `s_r = 0` the product is
/// positive even though `s - ε_r` is not a signature; those terms are part of
/// `Σ_j c'_s(j) = r` and are cancelled in τ by the factor `(a/2)(r-j) + s_j`.
pub fn c_prime(s: &Signature, j: usize, a: &Rational) -> Result<Rational> {
    product_over_others(s, j, a, -1)
}

/// `c_s(j) = Π_{k≠j} (s_j - s_k + (a/2)(k-j+1)) / (s_j - s_k + (a/2)(k-j))`.
pub fn c_plain(s: &Signature, j: usize, a: &Rational) -> Result<Rational> {
    product_over_others(s, j, a, 1)
}

/// `(d/r)_{s+ε_j} / (d/r)_s = d/r - (a/2)(j-1) + s_j`.
fn hardy_up_ratio(spec: &DomainSpec, s: &Signature, j: usize) -> Rational {
    spec.d_over_r() - spec.half_a() * int(j as i64 - 1) + int(s.part(j) as i64)
}

/// One `(s, j)` term of the boundedness quantity:
/// `(a_{s-ε_j}/a_s)((d/r)_s/(d/r)_{s-ε_j})`, for valid `s - ε_j`.
pub fn down_ratio(w: &WeightSequence, s: &Signature, j: usize) -> Result<Rational> {
    let down = s
        .shift_down(j)?
        .ok_or_else(|| Error::ParameterBound(format!("{s} - ε_{j} is not a signature")))?;
    Ok(hardy_up_ratio(w.domain(), &down, j) / w.up_ratio(&down, j)?)
}

/// Scalar by which `Σ M_i M_i*` acts on `P_s`.
pub fn tau(s: &Signature, w: &WeightSequence) -> Result<SpectralScalar> {
    let spec = w.domain();
    s.checked_rank(spec.rank())?;
    let mut value = Rational::zero();
    let r = spec.rank() as i64;
    let b = int(spec.b() as i64);
    let half_a = spec.half_a();
    for j in (1..=spec.rank()).filter(|&j| s.can_shift_down(j)) {
        let inner = &half_a * int(r - j as i64) + int(s.part(j) as i64);
        let frac = &inner / (&b + &inner);
        value += down_ratio(w, s, j)? * frac * c_prime(s, j, spec.a())?;
    }
    Ok(SpectralScalar { value, signature: s.clone(), tag: FormulaTag::Tau })
}

/// δ(s) for signatures whose only admissible upward shift is `j = 1`.
pub fn delta_case_i(s: &Signature, w: &WeightSequence) -> Result<SpectralScalar> {
    let spec = w.domain();
    s.checked_rank(spec.rank())?;
    let profile = s.boundary_profile();
    if profile != BoundaryProfile::Single {
        return Err(Error::ProfileMismatch { signature: s.clone(), profile: profile.indices(), required: "{1}" });
    }
    let r = int(spec.rank() as i64);
    let value = r * (spec.d_over_r() + int(s.part(1) as i64)) / w.up_ratio(s, 1)?;
    Ok(SpectralScalar { value, signature: s.clone(), tag: FormulaTag::DeltaCaseI })
}

/// δ(s) for signatures whose admissible upward shifts are exactly `j = 1, k`.
pub fn delta_case_ii(s: &Signature, w: &WeightSequence) -> Result<SpectralScalar> {
    let spec = w.domain();
    s.checked_rank(spec.rank())?;
    let k = match s.boundary_profile() {
        BoundaryProfile::Pair { k } => k,
        other => {
            return Err(Error::ProfileMismatch { signature: s.clone(), profile: other.indices(), required: "{1,k}" })
        }
    };
    let half_a = spec.half_a();
    let r = spec.rank() as i64;
    let d_over_r = spec.d_over_r();
    let gap = int(s.part(1) as i64) - int(s.part(k) as i64);
    let denom = &gap + &half_a * int(k as i64 - 1);
    let first = int(k as i64 - 1) * (&d_over_r + int(s.part(1) as i64)) * (&gap + &half_a * int(r)) / &denom;
    let second = int(r - k as i64 + 1)
        * (&d_over_r - &half_a * int(k as i64 - 1) + int(s.part(k) as i64))
        * &gap
        / &denom;
    let value = first / w.up_ratio(s, 1)? + second / w.up_ratio(s, k)?;
    Ok(SpectralScalar { value, signature: s.clone(), tag: FormulaTag::DeltaCaseII })
}

/// `δ(s) = Σ_j (a_s/a_{s+ε_j}) ((d/r)_{s+ε_j}/(d/r)_s) c_s(j)`, valid for every profile at rank <= 2.
pub fn delta_conjecture(s: &Signature, w: &WeightSequence) -> Result<SpectralScalar> {
    let spec = w.domain();
    s.checked_rank(spec.rank())?;
    let mut value = Rational::zero();
    for j in (1..=spec.rank()).filter(|&j| s.can_shift_up(j)) {
        value += hardy_up_ratio(spec, s, j) * c_plain(s, j, spec.a())? / w.up_ratio(s, j)?;
    }
    Ok(SpectralScalar { value, signature: s.clone(), tag: FormulaTag::DeltaConjecture })
}

/// δ(s) from the strongest available source: a proved case when the profile
/// allows it, the conjectured formula otherwise.
pub fn delta(s: &Signature, w: &WeightSequence) -> Result<SpectralScalar> {
    match s.boundary_profile() {
        BoundaryProfile::Single => delta_case_i(s, w),
        BoundaryProfile::Pair { .. } => delta_case_ii(s, w),
        BoundaryProfile::General(_) => delta_conjecture(s, w),
    }
}

/// `δ - τ` on `P_(l,0,...,0)` for weighted Bergman weights, next to the
/// expression printed for it in the literature.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaGap {
    pub l: u32,
    pub derived: Rational,
    pub printed: Rational,
}

pub fn eta_gap(l: u32, nu: &Rational, spec: &DomainSpec) -> Result<EtaGap> {
    let w = WeightSequence::bergman(spec, nu.clone())?;
    let s = Signature::row(spec.rank(), l);
    let derived = delta(&s, &w)?.value - tau(&s, &w)?.value;

    let l_q = int(l as i64);
    let half_a = spec.half_a();
    let d_over_r = spec.d_over_r();
    let ar2 = spec.a() * int(spec.rank() as i64) / int(2);
    let first = (&d_over_r + &l_q) * (&l_q + &ar2) / ((nu + &l_q) * (&l_q + &ar2));
    let second = if spec.rank() == 1 {
        Rational::zero()
    } else {
        &l_q * int(spec.rank() as i64 - 1) * (&d_over_r - &half_a) / ((nu - &half_a) * (&l_q + &half_a))
    };
    let third = if l == 0 { Rational::zero() } else { &l_q / (nu + &l_q - int(1)) };
    Ok(EtaGap { l, derived, printed: first + second - third })
}

/// `lim_{l→∞} (δ - τ)(l,0,...,0) = (r-1)(d/r - a/2)/(ν - a/2)`.
pub fn eta_limit(nu: &Rational, spec: &DomainSpec) -> Rational {
    if spec.rank() == 1 {
        return Rational::zero();
    }
    let half_a = spec.half_a();
    int(spec.rank() as i64 - 1) * (spec.d_over_r() - &half_a) / (nu - &half_a)
}
