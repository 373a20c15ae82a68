//! Classical Cartan domains and their numerical invariants.
//!
//! A domain is fixed by its kind and size; the rank `r`, the characteristic
//! multiplicities `a` and `b` and the complex dimension `d` are derived from
//! it and always satisfy `d = r + (a/2) r (r-1) + r b`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::number::{half, int, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainKind {
    /// `n x m` matrices, `m >= n >= 1`.
    TypeI { n: usize, m: usize },
    /// Symmetric `n x n` matrices.
    TypeII { n: usize },
    /// Antisymmetric `n x n` matrices, `n >= 2`.
    TypeIII { n: usize },
    /// The Lie ball in `C^d`, `d >= 5`.
    TypeIV { d: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    kind: DomainKind,
    rank: usize,
    a: Rational,
    b: usize,
    dim: usize,
}

impl DomainSpec {
    pub fn new(kind: DomainKind) -> Result<Self> {
        let (rank, a, b, dim) = match kind {
            DomainKind::TypeI { n, m } => {
                if n < 1 || m < n {
                    return Err(Error::ParameterBound(format!(
                        "type I needs m >= n >= 1, got n={n}, m={m}"
                    )));
                }
                (n, 2, m - n, n * m)
            }
            DomainKind::TypeII { n } => {
                if n < 1 {
                    return Err(Error::ParameterBound("type II needs n >= 1".into()));
                }
                (n, 1, 0, n * (n + 1) / 2)
            }
            DomainKind::TypeIII { n } => {
                if n < 2 {
                    return Err(Error::ParameterBound(format!("type III needs n >= 2, got {n}")));
                }
                (n / 2, 4, if n % 2 == 0 { 0 } else { 2 }, n * (n - 1) / 2)
            }
            DomainKind::TypeIV { d } => {
                if d < 5 {
                    return Err(Error::ParameterBound(format!("type IV needs d >= 5, got {d}")));
                }
                (2, d - 2, 0, d)
            }
        };
        let spec = DomainSpec {
            kind,
            rank,
            a: int(a as i64),
            b,
            dim,
        };
        debug_assert_eq!(spec.dimension_from_invariants(), int(dim as i64));
        Ok(spec)
    }

    pub fn type_i(n: usize, m: usize) -> Result<Self> {
        Self::new(DomainKind::TypeI { n, m })
    }

    pub fn type_ii(n: usize) -> Result<Self> {
        Self::new(DomainKind::TypeII { n })
    }

    pub fn type_iii(n: usize) -> Result<Self> {
        Self::new(DomainKind::TypeIII { n })
    }

    pub fn type_iv(d: usize) -> Result<Self> {
        Self::new(DomainKind::TypeIV { d })
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Multiplicity `a` as an exact rational.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// `a/2`, the step appearing in every Pochhammer and `c_s(j)` factor.
    pub fn half_a(&self) -> Rational {
        half(&self.a)
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `d/r`, the Hardy-space parameter.
    pub fn d_over_r(&self) -> Rational {
        Rational::new((self.dim as i64).into(), (self.rank as i64).into())
    }

    /// Left end `(a/2)(r-1)` of the continuous Wallach range.
    pub fn wallach_threshold(&self) -> Rational {
        self.half_a() * int(self.rank as i64 - 1)
    }

    /// `r + (a/2) r (r-1) + r b`.
    pub fn dimension_from_invariants(&self) -> Rational {
        let r = int(self.rank as i64);
        &r + self.half_a() * &r * (&r - int(1)) + &r * int(self.b as i64)
    }

    pub fn a_f64(&self) -> f64 {
        to_f64(&self.a)
    }

    /// Orthonormal linear coordinates of the ambient matrix space.
    pub fn ambient_coordinates(&self) -> Vec<Coordinate> {
        let mut out = Vec::with_capacity(self.dim);
        match self.kind {
            DomainKind::TypeI { n, m } => {
                for i in 0..n {
                    for j in 0..m {
                        out.push(Coordinate::entry(i, j, CoordScale::One));
                    }
                }
            }
            DomainKind::TypeII { n } => {
                for i in 0..n {
                    for j in i..n {
                        let scale = if i == j { CoordScale::One } else { CoordScale::Sqrt2 };
                        out.push(Coordinate::entry(i, j, scale));
                    }
                }
            }
            DomainKind::TypeIII { n } => {
                for i in 0..n {
                    for j in i + 1..n {
                        out.push(Coordinate::entry(i, j, CoordScale::Sqrt2));
                    }
                }
            }
            DomainKind::TypeIV { d } => {
                for i in 0..d {
                    out.push(Coordinate::Plain { index: i });
                }
            }
        }
        out
    }

    /// Shape of the matrix variable (rows, cols); the Lie ball has none.
    pub fn matrix_shape(&self) -> Option<(usize, usize)> {
        match self.kind {
            DomainKind::TypeI { n, m } => Some((n, m)),
            DomainKind::TypeII { n } | DomainKind::TypeIII { n } => Some((n, n)),
            DomainKind::TypeIV { .. } => None,
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DomainKind::TypeI { n, m } => write!(f, "I:{n},{m}"),
            DomainKind::TypeII { n } => write!(f, "II:{n}"),
            DomainKind::TypeIII { n } => write!(f, "III:{n}"),
            DomainKind::TypeIV { d } => write!(f, "IV:{d}"),
        }
    }
}

impl Serialize for DomainSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses the compact grammar `I:n,m`, `II:n`, `III:n`, `IV:d`.
impl FromStr for DomainSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(0, format!("expected '<type>:<sizes>' in {text:?}")))?;
        let offset = kind.len() + 1;
        let sizes: Vec<usize> = rest
            .split(',')
            .scan(offset, |pos, part| {
                let start = *pos;
                *pos += part.len() + 1;
                Some((start, part))
            })
            .map(|(pos, part)| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(pos, format!("expected a non-negative integer, got {part:?}")))
            })
            .collect::<Result<_>>()?;
        let want = |count: usize| -> Result<()> {
            if sizes.len() != count {
                Err(Error::parse(
                    offset,
                    format!("type {} takes {count} size parameter(s), got {}", kind.trim(), sizes.len()),
                ))
            } else {
                Ok(())
            }
        };
        let kind = match kind.trim() {
            "I" => {
                want(2)?;
                DomainKind::TypeI { n: sizes[0], m: sizes[1] }
            }
            "II" => {
                want(1)?;
                DomainKind::TypeII { n: sizes[0] }
            }
            "III" => {
                want(1)?;
                DomainKind::TypeIII { n: sizes[0] }
            }
            "IV" => {
                want(1)?;
                DomainKind::TypeIV { d: sizes[0] }
            }
            "V" | "VI" => {
                return Err(Error::UnsupportedDomain(
                    "exceptional domains (types V, VI) are not supported".into(),
                ))
            }
            other => return Err(Error::parse(0, format!("unknown domain type {other:?}"))),
        };
        DomainSpec::new(kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordScale {
    One,
    Sqrt2,
}

impl CoordScale {
    pub fn factor(self) -> f64 {
        match self {
            CoordScale::One => 1.0,
            CoordScale::Sqrt2 => std::f64::consts::SQRT_2,
        }
    }
}

/// One orthonormal coordinate: `scale * z[row][col]`, or a plain Lie-ball coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    Entry { row: usize, col: usize, scale: CoordScale },
    Plain { index: usize },
}

impl Coordinate {
    fn entry(row: usize, col: usize, scale: CoordScale) -> Self {
        Coordinate::Entry { row, col, scale }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Coordinate::Entry { row, col, scale } => {
                if scale == CoordScale::Sqrt2 {
                    write!(f, "√2·")?;
                }
                write!(f, "z{}{}", row + 1, col + 1)
            }
            Coordinate::Plain { index } => write!(f, "z{}", index + 1),
        }
    }
}

impl Serialize for Coordinate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
