//! Decision procedures on weight sequences: boundedness, closed range, essential normality,
//! the Hardy identity, unitary equivalence and similarity.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::number::{int, round15, Rational, Value};
use crate::signatures::{enumerate_signatures, Signature};
use crate::spectral::{self, down_ratio};
use crate::weights::WeightSequence;

/// Rows `(t,0,…,0)` used for the growth slope of parametric pairs reach at least this far.
pub const SLOPE_HORIZON: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    Holds,
    Fails,
    EvidenceOnly,
}

impl Decision {
    pub fn exit_code(self) -> i32 {
        match self {
            Decision::Holds => 0,
            Decision::Fails => 1,
            Decision::EvidenceOnly => 2,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Holds => "Holds",
            Decision::Fails => "Fails",
            Decision::EvidenceOnly => "EvidenceOnly",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub signature: Signature,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub criterion: &'static str,
    pub decision: Decision,
    pub truncation: Option<u64>,
    pub bound: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_bound: Option<Value>,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope: Option<[Value; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(criterion: &'static str, decision: Decision) -> Self {
        Verdict {
            criterion,
            decision,
            truncation: None,
            bound: None,
            closed_form_bound: None,
            witness: None,
            envelope: None,
            slope: None,
            notes: Vec::new(),
        }
    }
}

fn require_weight(max_weight: u64) -> Result<()> {
    if max_weight == 0 {
        return Err(Error::ParameterBound("max_weight must be at least 1".into()));
    }
    Ok(())
}

/// `ε = ν − (a/2)(r−1)`.
fn epsilon(spec: &DomainSpec, nu: &Rational) -> Rational {
    nu - spec.wallach_threshold()
}

/// Per-signature extremum with the first signature (graded-lex) attaining it.
fn extremum<F>(spec: &DomainSpec, max_weight: u64, f: F, want_max: bool) -> Result<Option<(Signature, Rational)>>
where
    F: Fn(&Signature) -> Result<Option<Rational>> + Sync,
{
    let signatures: Vec<Signature> = enumerate_signatures(spec.rank(), max_weight).collect();
    let values = signatures.par_iter().map(&f).collect::<Result<Vec<_>>>()?;
    let mut best: Option<(Signature, Rational)> = None;
    for (s, v) in signatures.into_iter().zip(values) {
        let Some(v) = v else { continue };
        let better = match &best {
            None => true,
            Some((_, b)) => (want_max && v > *b) || (!want_max && v < *b),
        };
        if better {
            best = Some((s, v));
        }
    }
    Ok(best)
}

/// Truncated `A = sup_{s,j} (a_{s−ε_j}/a_s)((d/r)_s/(d/r)_{s−ε_j})`.
pub fn boundedness_sup(w: &WeightSequence, max_weight: u64) -> Result<Verdict> {
    require_weight(max_weight)?;
    let spec = w.domain();
    let best = extremum(
        spec,
        max_weight,
        |s| {
            let mut m: Option<Rational> = None;
            for j in 1..=s.rank() {
                if s.can_shift_down(j) {
                    let v = down_ratio(w, s, j)?;
                    if m.as_ref().is_none_or(|x| v > *x) {
                        m = Some(v);
                    }
                }
            }
            Ok(m)
        },
        true,
    )?;
    let mut v = Verdict::new("bounded", Decision::EvidenceOnly);
    v.truncation = Some(max_weight);
    if let Some((s, value)) = best {
        v.bound = Some(Value::Exact(value.clone()));
        v.witness = Some(Witness { signature: s, value: Value::Exact(value) });
    }
    match w.parametric_nu() {
        Some(nu) => {
            let bound = bergman_sup_bound(spec, &nu);
            v.decision = Decision::Holds;
            v.notes.push(format!("closed form: A ≤ max{{1, (1+b)/(ν−(a/2)(r−1))}} = {}", Value::Exact(bound.clone())));
            v.closed_form_bound = Some(Value::Exact(bound));
        }
        None => v.notes.push("non-parametric weights: supremum observed on the truncation only".into()),
    }
    Ok(v)
}

/// `max{1, (1+b)/ε}` for parametric weights.
pub fn bergman_sup_bound(spec: &DomainSpec, nu: &Rational) -> Rational {
    let x = int(1 + spec.b() as i64) / epsilon(spec, nu);
    if x > Rational::one() { x } else { Rational::one() }
}

/// Lower bound for `B`: 1 when `ε ≤ b+1`, `1/ε` otherwise.
pub fn bergman_inf_bound(spec: &DomainSpec, nu: &Rational) -> Rational {
    let e = epsilon(spec, nu);
    if e <= int(1 + spec.b() as i64) { Rational::one() } else { e.recip() }
}

/// `Σ_j (a_{s−ε_j}/a_s)((d/r)_s/(d/r)_{s−ε_j})` over admissible `j`.
pub fn closed_range_sum(w: &WeightSequence, s: &Signature) -> Result<Rational> {
    let mut acc = Rational::zero();
    for j in 1..=s.rank() {
        if s.can_shift_down(j) {
            acc += down_ratio(w, s, j)?;
        }
    }
    Ok(acc)
}

/// Truncated `B = inf_{s≠0} Σ_j (a_{s−ε_j}/a_s)((d/r)_s/(d/r)_{s−ε_j})`.
pub fn closed_range_inf(w: &WeightSequence, max_weight: u64) -> Result<Verdict> {
    require_weight(max_weight)?;
    let spec = w.domain();
    let best = extremum(spec, max_weight, |s| if s.is_zero() { Ok(None) } else { closed_range_sum(w, s).map(Some) }, false)?;
    let mut v = Verdict::new("closed-range", Decision::EvidenceOnly);
    v.truncation = Some(max_weight);
    if let Some((s, value)) = best {
        v.bound = Some(Value::Exact(value.clone()));
        v.witness = Some(Witness { signature: s, value: Value::Exact(value) });
    }
    match w.parametric_nu() {
        Some(nu) => {
            let bound = bergman_inf_bound(spec, &nu);
            v.decision = Decision::Holds;
            v.notes.push(format!("closed form: B ≥ {} (1 if ε ≤ b+1, else 1/ε)", Value::Exact(bound.clone())));
            v.notes.push("Cowen–Douglas premises satisfied: joint kernel of the adjoint tuple is the constants (dim 1) and B > 0".into());
            v.closed_form_bound = Some(Value::Exact(bound));
        }
        None => v.notes.push("non-parametric weights: infimum observed on the truncation only".into()),
    }
    Ok(v)
}

/// Essential normality of the Bergman-type tuple: holds exactly in rank one.
pub fn essential_normality(nu: &Rational, spec: &DomainSpec) -> Result<Verdict> {
    if *nu <= spec.wallach_threshold() {
        return Err(Error::ParameterBound(format!(
            "ν = {} must exceed (a/2)(r−1) = {}",
            Value::Exact(nu.clone()),
            Value::Exact(spec.wallach_threshold())
        )));
    }
    let limit = spectral::eta_limit(nu, spec);
    let decision = if spec.rank() == 1 { Decision::Holds } else { Decision::Fails };
    let mut v = Verdict::new("ess-normal", decision);
    v.notes.push(format!("lim (δ−τ)(l,0,…,0) = (r−1)(d/r−a/2)/(ν−a/2) = {}", Value::Exact(limit.clone())));
    v.bound = Some(Value::Exact(limit));
    Ok(v)
}

/// `δ(s) = r` for Hardy weights on every `|s| ≤ max_weight`.
pub fn hardy_identity_check(spec: &DomainSpec, max_weight: u64) -> Result<Verdict> {
    let w = WeightSequence::hardy(spec);
    let r = int(spec.rank() as i64);
    let worst = extremum(spec, max_weight, |s| Ok(Some((spectral::delta_conjecture(s, &w)?.value - &r).abs())), true)?;
    let mut v = Verdict::new("hardy-identity", Decision::Holds);
    v.truncation = Some(max_weight);
    if let Some((s, dev)) = worst {
        if !dev.is_zero() {
            v.decision = Decision::Fails;
            v.witness = Some(Witness { signature: s, value: Value::Exact(dev.clone()) });
        }
        v.bound = Some(Value::Exact(dev));
    }
    v.notes.push("max |δ(s) − r| in exact arithmetic".into());
    Ok(v)
}

fn same_rank(w1: &WeightSequence, w2: &WeightSequence) -> Result<()> {
    if w1.domain().rank() != w2.domain().rank() {
        return Err(Error::Incompatible(format!("ranks differ: {} vs {}", w1.domain(), w2.domain())));
    }
    Ok(())
}

/// Unitary equivalence: `a_s = b_s` for every signature.
pub fn unitary_equivalence(w1: &WeightSequence, w2: &WeightSequence, max_weight: u64) -> Result<Verdict> {
    same_rank(w1, w2)?;
    let mut v = Verdict::new("unitary-equiv", Decision::EvidenceOnly);
    v.truncation = Some(max_weight);
    for s in enumerate_signatures(w1.domain().rank(), max_weight) {
        let (a, b) = (w1.weight(&s)?, w2.weight(&s)?);
        if a != b {
            v.decision = Decision::Fails;
            v.notes.push(format!("a_{s} = {} ≠ b_{s} = {}", Value::Exact(a), Value::Exact(b.clone())));
            v.witness = Some(Witness { signature: s, value: Value::Exact(b) });
            return Ok(v);
        }
    }
    if w1.same_definition(w2) {
        v.decision = Decision::Holds;
        v.notes.push("identical weight definitions".into());
    } else {
        v.notes.push("weights agree on the truncation".into());
    }
    Ok(v)
}

/// Least-squares slope of `ln(a_s/b_s)` against `ln t` on rows `s = (t,0,…,0)`, `t ∈ [T/2, T]`.
pub fn growth_slope(w1: &WeightSequence, w2: &WeightSequence, horizon: u32) -> Result<f64> {
    let rank = w1.domain().rank();
    let lo = (horizon / 2).max(1);
    let mut pts = Vec::new();
    for t in lo..=horizon.max(lo + 1) {
        let s = Signature::row(rank, t);
        pts.push(((t as f64).ln(), w1.ln_weight(&s)? - w2.ln_weight(&s)?));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Similarity: `α a_s ≤ b_s ≤ β a_s` for constants `α, β > 0`.
pub fn similarity(w1: &WeightSequence, w2: &WeightSequence, max_weight: u64) -> Result<Verdict> {
    require_weight(max_weight)?;
    same_rank(w1, w2)?;
    let spec = w1.domain();
    let ratio = |s: &Signature| -> Result<Option<Rational>> { Ok(Some(w2.weight(s)? / w1.weight(s)?)) };
    let lo = extremum(spec, max_weight, ratio, false)?.expect("non-empty truncation");
    let hi = extremum(spec, max_weight, ratio, true)?.expect("non-empty truncation");
    let mut v = Verdict::new("similar", Decision::EvidenceOnly);
    v.truncation = Some(max_weight);
    v.envelope = Some([Value::Exact(lo.1.clone()), Value::Exact(hi.1.clone())]);
    v.bound = Some(Value::Exact(hi.1.clone()));
    v.witness = Some(Witness { signature: hi.0, value: Value::Exact(hi.1.clone()) });
    let parametric = w1.parametric_nu().zip(w2.parametric_nu());
    let horizon = if parametric.is_some() { SLOPE_HORIZON.max(max_weight as u32) } else { max_weight as u32 };
    if horizon >= 2 {
        v.slope = Some(round15(growth_slope(w1, w2, horizon)?));
    }
    if w1.same_definition(w2) {
        v.decision = Decision::Holds;
        v.notes.push("identical weight definitions".into());
    } else if let Some((nu1, nu2)) = parametric {
        v.decision = if nu1 == nu2 { Decision::Holds } else { Decision::Fails };
        v.notes.push(format!(
            "parametric pair: (ν₁)_t/(ν₂)_t ~ t^(ν₁−ν₂), ν₁−ν₂ = {}",
            Value::Exact(nu1 - nu2)
        ));
    } else {
        v.notes.push(format!("ratio envelope b_s/a_s on |s| ≤ {max_weight}; slope of ln(a_s/b_s) on (t,0,…,0)"));
    }
    Ok(v)
}
