//! Weight sequences `a_s` of K-invariant kernels `Σ a_s K_s`.
//!
//! On `P_s` the Hilbert norm is `‖p‖² = ‖p‖²_F / a_s`. Parametric sources
//! (weighted Bergman, Hardy, classical Bergman) use generalized Pochhammer
//! symbols and are evaluated exactly; tables and rules hold explicit values.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::number::{exact_string, int, parse_rational, to_f64, Rational};
use crate::signatures::Signature;

/// `(ν)_s = Π_j Π_{l=1}^{s_j} (ν - (a/2)(j-1) + l - 1)`, exact.
pub fn pochhammer(nu: &Rational, s: &Signature, a: &Rational) -> Result<Rational> {
    let half_a = a / int(2);
    let mut acc = Rational::one();
    for (j, &sj) in s.parts().iter().enumerate() {
        let base = nu - &half_a * int(j as i64);
        for l in 0..sj {
            let factor = &base + int(l as i64);
            if factor.is_zero() {
                return Err(Error::ZeroFactor {
                    nu: exact_string(nu),
                    signature: s.clone(),
                });
            }
            acc *= factor;
        }
    }
    Ok(acc)
}

/// Direct floating-point product.
pub fn pochhammer_f64(nu: f64, s: &Signature, a: f64) -> Result<f64> {
    let mut acc = 1.0;
    for (j, &sj) in s.parts().iter().enumerate() {
        let base = nu - 0.5 * a * j as f64;
        for l in 0..sj {
            let factor = base + l as f64;
            if factor == 0.0 {
                return Err(Error::ZeroFactor { nu: nu.to_string(), signature: s.clone() });
            }
            acc *= factor;
        }
    }
    Ok(acc)
}

/// `ln|(ν)_s|` and the sign, accumulated with Kahan summation.
pub fn ln_pochhammer(nu: f64, s: &Signature, a: f64) -> Result<(f64, i8)> {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    let mut sign = 1i8;
    for (j, &sj) in s.parts().iter().enumerate() {
        let base = nu - 0.5 * a * j as f64;
        for l in 0..sj {
            let factor = base + l as f64;
            if factor == 0.0 {
                return Err(Error::ZeroFactor { nu: nu.to_string(), signature: s.clone() });
            }
            if factor < 0.0 {
                sign = -sign;
            }
            let y = factor.abs().ln() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
    }
    Ok((sum, sign))
}

/// A Pochhammer evaluation carried in both linear and log form.
#[derive(Debug, Clone, PartialEq)]
pub struct PochhammerValue {
    pub value: f64,
    pub ln_abs: f64,
    pub sign: i8,
    pub exact: Option<Rational>,
    /// ν at or below `(a/2)(r-1)`: the value may be non-positive and no
    /// operator-level statement applies.
    pub below_continuous_range: bool,
}

impl PochhammerValue {
    pub fn exact(nu: &Rational, s: &Signature, a: &Rational) -> Result<Self> {
        let q = pochhammer(nu, s, a)?;
        let (ln_abs, sign) = ln_pochhammer(to_f64(nu), s, to_f64(a))?;
        let threshold = a / int(2) * int(s.rank() as i64 - 1);
        Ok(PochhammerValue {
            value: to_f64(&q),
            ln_abs,
            sign,
            below_continuous_range: *nu <= threshold,
            exact: Some(q),
        })
    }

    pub fn real(nu: f64, s: &Signature, a: f64) -> Result<Self> {
        let (ln_abs, sign) = ln_pochhammer(nu, s, a)?;
        Ok(PochhammerValue {
            value: pochhammer_f64(nu, s, a)?,
            ln_abs,
            sign,
            exact: None,
            below_continuous_range: nu <= 0.5 * a * (s.rank() as f64 - 1.0),
        })
    }
}

type RuleFn = dyn Fn(&Signature, &DomainSpec) -> Rational + Send + Sync;

/// A deterministic user rule `s -> a_s`, memoized per signature.
#[derive(Clone)]
pub struct Rule {
    name: String,
    f: Arc<RuleFn>,
    memo: Arc<Mutex<HashMap<Signature, Rational>>>,
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rule").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub enum WeightSource {
    Bergman(Rational),
    Hardy,
    ClassicalBergman,
    Table { label: String, values: Arc<BTreeMap<Signature, Rational>> },
    Rule(Rule),
}

#[derive(Debug, Clone)]
pub struct WeightSequence {
    source: WeightSource,
    domain: DomainSpec,
}

pub const BUILTIN_RULES: &[&str] = &[
    "fock",
    "hardy-doubling",
    "hardy-factorial-squared",
    "hardy-inverse-factorial-squared",
    "hardy-doubled",
];

fn factorial(n: u64) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k as i64))
}

impl WeightSequence {
    /// Weighted Bergman weights `(ν)_s`; ν must exceed `(a/2)(r-1)`.
    pub fn bergman(domain: &DomainSpec, nu: Rational) -> Result<Self> {
        let threshold = domain.wallach_threshold();
        if nu <= threshold {
            return Err(Error::ParameterBound(format!(
                "ν = {} is not above the continuous Wallach threshold {} for {domain}",
                exact_string(&nu),
                exact_string(&threshold)
            )));
        }
        Ok(WeightSequence { source: WeightSource::Bergman(nu), domain: domain.clone() })
    }

    pub fn hardy(domain: &DomainSpec) -> Self {
        WeightSequence { source: WeightSource::Hardy, domain: domain.clone() }
    }

    pub fn classical_bergman(domain: &DomainSpec) -> Self {
        WeightSequence { source: WeightSource::ClassicalBergman, domain: domain.clone() }
    }

    pub fn table(domain: &DomainSpec, label: impl Into<String>, values: BTreeMap<Signature, Rational>) -> Result<Self> {
        for (s, v) in &values {
            s.checked_rank(domain.rank())?;
            if !v.is_positive() {
                return Err(Error::NonPositiveWeight { signature: s.clone(), value: exact_string(v) });
            }
        }
        let zero = Signature::zero(domain.rank());
        match values.get(&zero) {
            Some(v) if v.is_one() => {}
            Some(v) => {
                return Err(Error::ParameterBound(format!(
                    "weight table must have a_0 = 1, got {}",
                    exact_string(v)
                )))
            }
            None => return Err(Error::MissingTableEntry(zero)),
        }
        Ok(WeightSequence {
            source: WeightSource::Table { label: label.into(), values: Arc::new(values) },
            domain: domain.clone(),
        })
    }

    pub fn rule<F>(domain: &DomainSpec, name: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(&Signature, &DomainSpec) -> Rational + Send + Sync + 'static,
    {
        let w = WeightSequence {
            source: WeightSource::Rule(Rule {
                name: name.into(),
                f: Arc::new(f),
                memo: Arc::default(),
            }),
            domain: domain.clone(),
        };
        let a0 = w.weight(&Signature::zero(domain.rank()))?;
        if !a0.is_one() {
            return Err(Error::ParameterBound(format!(
                "rule must give a_0 = 1, got {}",
                exact_string(&a0)
            )));
        }
        Ok(w)
    }

    /// Named built-in rules (see [`BUILTIN_RULES`]).
    pub fn builtin_rule(domain: &DomainSpec, name: &str) -> Result<Self> {
        let hardy = |s: &Signature, d: &DomainSpec| pochhammer(&d.d_over_r(), s, d.a()).expect("d/r is in the continuous range");
        match name {
            "fock" => Self::rule(domain, name, |_, _| Rational::one()),
            "hardy-doubling" => Self::rule(domain, name, move |s, d| {
                hardy(s, d) * num_traits::pow(int(2), s.weight() as usize)
            }),
            "hardy-factorial-squared" => Self::rule(domain, name, move |s, d| {
                let f = factorial(s.weight());
                hardy(s, d) * &f * &f
            }),
            "hardy-inverse-factorial-squared" => Self::rule(domain, name, move |s, d| {
                let f = factorial(s.weight());
                hardy(s, d) / (&f * &f)
            }),
            "hardy-doubled" => Self::rule(domain, name, move |s, d| {
                if s.is_zero() {
                    Rational::one()
                } else {
                    hardy(s, d) * int(2)
                }
            }),
            other => Err(Error::Unknown { kind: "weight rule", name: other.to_string() }),
        }
    }

    /// Parses `bergman:<ν>`, `hardy`, `classical-bergman`, `table:<path>`, `rule:<name>`.
    pub fn parse(text: &str, domain: &DomainSpec) -> Result<Self> {
        let t = text.trim();
        let (head, arg) = match t.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (t, None),
        };
        let arg_pos = head.len() + 1;
        match (head, arg) {
            ("hardy", None) => Ok(Self::hardy(domain)),
            ("classical-bergman", None) => Ok(Self::classical_bergman(domain)),
            ("bergman", Some(nu)) => {
                let nu = parse_rational(nu).map_err(|e| shift_parse(e, arg_pos))?;
                Self::bergman(domain, nu)
            }
            ("table", Some(path)) => Self::load_table(domain, path),
            ("rule", Some(name)) => Self::builtin_rule(domain, name.trim()),
            ("bergman" | "table" | "rule", None) => {
                Err(Error::parse(head.len(), format!("{head} needs an argument after ':'")))
            }
            _ => Err(Error::parse(0, format!("unknown weight source {t:?}"))),
        }
    }

    pub fn load_table(domain: &DomainSpec, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let values = parse_table_csv(&text, domain.rank())?;
        Self::table(domain, format!("table:{}", path.display()), values)
    }

    pub fn source(&self) -> &WeightSource {
        &self.source
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// ν for the parametric families (Hardy is `d/r`, classical Bergman `(a/2)(r-1) + d/r`).
    pub fn parametric_nu(&self) -> Option<Rational> {
        match &self.source {
            WeightSource::Bergman(nu) => Some(nu.clone()),
            WeightSource::Hardy => Some(self.domain.d_over_r()),
            WeightSource::ClassicalBergman => Some(self.domain.wallach_threshold() + self.domain.d_over_r()),
            _ => None,
        }
    }

    /// `a_s`, always positive.
    pub fn weight(&self, s: &Signature) -> Result<Rational> {
        s.checked_rank(self.domain.rank())?;
        if let Some(nu) = self.parametric_nu() {
            return pochhammer(&nu, s, self.domain.a());
        }
        match &self.source {
            WeightSource::Table { values, .. } => {
                values.get(s).cloned().ok_or_else(|| Error::MissingTableEntry(s.clone()))
            }
            WeightSource::Rule(rule) => {
                if let Some(v) = rule.memo.lock().expect("memo lock").get(s) {
                    return Ok(v.clone());
                }
                let v = (rule.f)(s, &self.domain);
                if !v.is_positive() {
                    return Err(Error::NonPositiveWeight { signature: s.clone(), value: exact_string(&v) });
                }
                rule.memo.lock().expect("memo lock").insert(s.clone(), v.clone());
                Ok(v)
            }
            _ => unreachable!("parametric sources handled above"),
        }
    }

    /// `a_{s+ε_j} / a_s` for a valid `s + ε_j`; telescoped for parametric sources.
    pub fn up_ratio(&self, s: &Signature, j: usize) -> Result<Rational> {
        let up = s
            .shift_up(j)?
            .ok_or_else(|| Error::ParameterBound(format!("{s} + ε_{j} is not a signature")))?;
        if let Some(nu) = self.parametric_nu() {
            return Ok(nu - self.domain.half_a() * int(j as i64 - 1) + int(s.part(j) as i64));
        }
        Ok(self.weight(&up)? / self.weight(s)?)
    }

    /// `ln a_s` in floating point (large signatures, parametric sources).
    pub fn ln_weight(&self, s: &Signature) -> Result<f64> {
        match self.parametric_nu() {
            Some(nu) => Ok(ln_pochhammer(to_f64(&nu), s, self.domain.a_f64())?.0),
            None => Ok(to_f64(&self.weight(s)?).ln()),
        }
    }

    /// Structural identity: same domain and the same source definition.
    pub fn same_definition(&self, other: &WeightSequence) -> bool {
        if self.domain != other.domain {
            return false;
        }
        if let (Some(x), Some(y)) = (self.parametric_nu(), other.parametric_nu()) {
            return x == y;
        }
        match (&self.source, &other.source) {
            (WeightSource::Table { values: x, .. }, WeightSource::Table { values: y, .. }) => x == y,
            (WeightSource::Rule(x), WeightSource::Rule(y)) => x.name == y.name || Arc::ptr_eq(&x.f, &y.f),
            _ => false,
        }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            WeightSource::Bergman(nu) => write!(f, "bergman:{}", exact_string(nu)),
            WeightSource::Hardy => write!(f, "hardy"),
            WeightSource::ClassicalBergman => write!(f, "classical-bergman"),
            WeightSource::Table { label, .. } => write!(f, "{label}"),
            WeightSource::Rule(rule) => write!(f, "rule:{}", rule.name),
        }
    }
}

/// `‖p‖²_H = ‖p‖²_F / a_s` for `p ∈ P_s`.
pub fn norm_squared_on_ps(w: &WeightSequence, fock_norm_sq: &Rational, s: &Signature) -> Result<Rational> {
    if !fock_norm_sq.is_positive() {
        return Err(Error::ParameterBound("Fock norm must be positive".into()));
    }
    Ok(fock_norm_sq / w.weight(s)?)
}

fn shift_parse(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse { position: position + by, message },
        other => other,
    }
}

/// Parses a weight table: optional header `s1,...,sr,a_s`, one row per signature.
/// Error positions are byte offsets into `text`.
pub fn parse_table_csv(text: &str, rank: usize) -> Result<BTreeMap<Signature, Rational>> {
    let mut out = BTreeMap::new();
    let mut offset = 0usize;
    for (lineno, raw) in text.split('\n').enumerate() {
        let line_start = offset;
        offset += raw.len() + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if lineno == 0 && fields.first().is_some_and(|f| f.starts_with('s')) {
            if fields.len() != rank + 1 {
                return Err(Error::parse(line_start, format!("header has {} columns, expected {}", fields.len(), rank + 1)));
            }
            continue;
        }
        if fields.len() != rank + 1 {
            return Err(Error::parse(
                line_start,
                format!("line {} has {} columns, expected {}", lineno + 1, fields.len(), rank + 1),
            ));
        }
        let mut parts = Vec::with_capacity(rank);
        for f in &fields[..rank] {
            parts.push(f.parse::<u32>().map_err(|_| {
                Error::parse(line_start, format!("line {}: bad signature part {f:?}", lineno + 1))
            })?);
        }
        let s = Signature::new(parts).map_err(|e| Error::parse(line_start, e.to_string()))?;
        let v = parse_rational(fields[rank]).map_err(|e| shift_parse(e, line_start))?;
        if out.insert(s.clone(), v).is_some() {
            return Err(Error::parse(line_start, format!("duplicate row for {s}")));
        }
    }
    Ok(out)
}

pub fn table_to_csv(values: &BTreeMap<Signature, Rational>, rank: usize) -> String {
    let mut out = String::new();
    for j in 1..=rank {
        out.push_str(&format!("s{j},"));
    }
    out.push_str("a_s\n");
    for (s, v) in values {
        for p in s.parts() {
            out.push_str(&format!("{p},"));
        }
        out.push_str(&exact_string(v));
        out.push('\n');
    }
    out
}
