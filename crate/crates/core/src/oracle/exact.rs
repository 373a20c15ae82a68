//! Exact rational oracle for type I domains at low grade.
//!
//! Orbits are taken under integer matrices `Z ↦ A Z B` (the complexified group preserves every `P_s`),
//! spans are computed by Gaussian elimination over `Q`, and `τ`, `δ` are read off exact Gram matrices.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::conical::{conical_minors, conical_product, PolyMatrix};
use super::polynomial::{MonomialIndex, Polynomial};
use crate::domains::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::number::Rational;
use crate::signatures::{signatures_of_weight, Signature};
use crate::weights::WeightSequence;

/// Largest grade built by the exact path.
pub const EXACT_MAX_GRADE: usize = 4;

type Vector = Vec<Rational>;

/// Fock-orthogonal (not normalized) basis of one `P_s` in plain monomial coefficients.
#[derive(Debug, Clone)]
pub struct ExactBlock {
    pub signature: Signature,
    pub basis: Vec<Vector>,
}

#[derive(Debug, Clone)]
pub struct ExactGrade {
    pub grade: usize,
    pub index: MonomialIndex,
    factorials: Vec<Rational>,
    pub blocks: Vec<ExactBlock>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactMeasurement {
    pub signature: Signature,
    pub dim: usize,
    pub tau: Rational,
    pub delta: Option<Rational>,
}

impl ExactGrade {
    fn fock(&self, p: &[Rational], q: &[Rational]) -> Rational {
        p.iter().zip(q).zip(&self.factorials).filter(|((a, b), _)| !a.is_zero() && !b.is_zero()).map(|((a, b), f)| a * b * f).sum()
    }

    fn members(&self) -> impl Iterator<Item = (usize, &Vector)> {
        self.blocks.iter().enumerate().flat_map(|(k, b)| b.basis.iter().map(move |v| (k, v)))
    }
}

/// Exact decompositions of grades `0..=top` for a type I domain.
#[derive(Debug, Clone)]
pub struct ExactDecomposition {
    pub spec: DomainSpec,
    pub grades: Vec<ExactGrade>,
}

fn integer_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect()).collect()
}

fn orbit_polynomial(spec: &DomainSpec, s: &Signature, a: &[Vec<i64>], b: &[Vec<i64>], n: usize, m: usize) -> Result<Polynomial<Rational>> {
    let d = n * m;
    let mut mat: PolyMatrix<Rational> = Vec::with_capacity(n);
    for a_row in a.iter().take(n) {
        let mut row = Vec::with_capacity(m);
        for c in 0..m {
            let mut coeffs = vec![Rational::zero(); d];
            for (i, &a_ri) in a_row.iter().take(n).enumerate() {
                for (j, b_row) in b.iter().take(m).enumerate() {
                    coeffs[i * m + j] = Rational::from_integer(BigInt::from(a_ri * b_row[c]));
                }
            }
            row.push(Polynomial::linear(&coeffs));
        }
        mat.push(row);
    }
    let minors = conical_minors(spec, &mat, d)?;
    Ok(conical_product(&minors, s, d))
}

/// Reduced row echelon accumulator.
struct Echelon {
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    fn insert(&mut self, mut v: Vector) -> bool {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else { return false };
        let f = v[pivot].clone();
        for x in v.iter_mut() {
            *x /= &f;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let g = row[pivot].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &g * y;
                    }
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

impl ExactDecomposition {
    pub fn build(spec: &DomainSpec, top: usize, seed: u64) -> Result<Self> {
        let DomainKind::TypeI { n, m } = spec.kind() else {
            return Err(Error::UnsupportedDomain(format!("exact oracle supports type I only, got {spec}")));
        };
        if top > EXACT_MAX_GRADE {
            return Err(Error::ParameterBound(format!("exact oracle requires grade ≤ {EXACT_MAX_GRADE}")));
        }
        let d = spec.dim();
        let mut grades = Vec::with_capacity(top + 1);
        for g in 0..=top {
            let index = MonomialIndex::new(d, g);
            let factorials: Vec<Rational> = index
                .exponents()
                .iter()
                .map(|e| Rational::from_integer(e.iter().map(|&k| (1..=k as u64).product::<u64>()).product::<u64>().into()))
                .collect();
            let mut blocks = Vec::new();
            for s in signatures_of_weight(spec.rank(), g as u64) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(s.parts().iter().fold(0u64, |h, &p| h * 131 + p as u64 + 1));
                let mut ech = Echelon { rows: Vec::new() };
                let mut idle = 0;
                for _ in 0..2 * index.len() {
                    let a = integer_matrix(&mut rng, n);
                    let b = integer_matrix(&mut rng, m);
                    let p = orbit_polynomial(spec, &s, &a, &b, n, m)?;
                    let mut v = vec![Rational::zero(); index.len()];
                    for (e, c) in p.terms() {
                        v[index.position(e).expect("homogeneous")] = c.clone();
                    }
                    if ech.insert(v) {
                        idle = 0;
                    } else {
                        idle += 1;
                        if idle > index.len() {
                            break;
                        }
                    }
                }
                blocks.push(ExactBlock { signature: s, basis: ech.rows.into_iter().map(|(_, v)| v).collect() });
            }
            let mut grade = ExactGrade { grade: g, index, factorials, blocks };
            orthogonalize(&mut grade)?;
            grades.push(grade);
        }
        Ok(ExactDecomposition { spec: spec.clone(), grades })
    }

    /// Exact `τ(s)` and, when the next grade is built, `δ(s)`; errors unless both blocks are exactly scalar.
    pub fn measure(&self, w: &WeightSequence) -> Result<Vec<ExactMeasurement>> {
        let d = self.spec.dim();
        let weights: Vec<Vec<Rational>> = self
            .grades
            .iter()
            .map(|g| g.blocks.iter().map(|b| w.weight(&b.signature)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for (g, grade) in self.grades.iter().enumerate() {
            let members: Vec<(usize, &Vector)> = grade.members().collect();
            let h_norm = |k: usize, v: &Vector| grade.fock(v, v) / &weights[g][k];
            let tau_gram = if g == 0 {
                None
            } else {
                let lower = &self.grades[g - 1];
                let mut images = Vec::new();
                for (l, q) in lower.members() {
                    let qn = lower.fock(q, q) / &weights[g - 1][l];
                    for i in 0..d {
                        images.push((multiply(lower, grade, q, i), qn.clone()));
                    }
                }
                Some(gram(&members, |(ka, pa), (kb, pb)| {
                    images
                        .iter()
                        .map(|(zq, qn)| grade.fock(pa, zq) / &weights[g][*ka] * (grade.fock(pb, zq) / &weights[g][*kb]) / qn)
                        .sum()
                }))
            };
            let delta_gram = self.grades.get(g + 1).map(|upper| {
                let up_members: Vec<(usize, &Vector)> = upper.members().collect();
                let images: Vec<Vec<Vector>> = members.iter().map(|(_, p)| (0..d).map(|i| multiply(grade, upper, p, i)).collect()).collect();
                let h_upper = |x: &Vector, y: &Vector| -> Rational {
                    up_members.iter().map(|(l, q)| upper.fock(x, q) * upper.fock(y, q) / upper.fock(q, q) / &weights[g + 1][*l]).sum()
                };
                let mut m = vec![vec![Rational::zero(); members.len()]; members.len()];
                for a in 0..members.len() {
                    for b in a..members.len() {
                        let v: Rational = (0..d).map(|i| h_upper(&images[a][i], &images[b][i])).sum();
                        m[a][b] = v.clone();
                        m[b][a] = v;
                    }
                }
                m
            });
            let mut offset = 0;
            for (k, block) in grade.blocks.iter().enumerate() {
                let dim = block.basis.len();
                let norms: Vec<Rational> = block.basis.iter().map(|v| h_norm(k, v)).collect();
                let tau = match &tau_gram {
                    Some(t) => scalar(t, offset, &norms, &block.signature)?,
                    None => Rational::zero(),
                };
                let delta = delta_gram.as_ref().map(|t| scalar(t, offset, &norms, &block.signature)).transpose()?;
                out.push(ExactMeasurement { signature: block.signature.clone(), dim, tau, delta });
                offset += dim;
            }
        }
        Ok(out)
    }
}

fn gram<F>(members: &[(usize, &Vector)], f: F) -> Vec<Vec<Rational>>
where
    F: Fn((&usize, &Vector), (&usize, &Vector)) -> Rational,
{
    let n = members.len();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for a in 0..n {
        for b in a..n {
            let v = f((&members[a].0, members[a].1), (&members[b].0, members[b].1));
            m[a][b] = v.clone();
            m[b][a] = v;
        }
    }
    m
}

/// Common value of `G_kk / ‖p_k‖²` over the block, requiring every other entry in its rows to vanish.
fn scalar(m: &[Vec<Rational>], offset: usize, norms: &[Rational], s: &Signature) -> Result<Rational> {
    let mut value: Option<Rational> = None;
    for (r, norm) in norms.iter().enumerate() {
        let row = &m[offset + r];
        if row.iter().enumerate().any(|(c, x)| c != offset + r && !x.is_zero()) {
            return Err(Error::NonScalarBlock { signature: s.clone(), residual: 1.0 });
        }
        let v = &row[offset + r] / norm;
        match &value {
            Some(u) if *u != v => return Err(Error::NonScalarBlock { signature: s.clone(), residual: 1.0 }),
            _ => value = Some(v),
        }
    }
    Ok(value.unwrap_or_else(Rational::zero))
}

fn multiply(from: &ExactGrade, to: &ExactGrade, v: &[Rational], i: usize) -> Vector {
    let mut out = vec![Rational::zero(); to.index.len()];
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = from.index.exponents()[k].clone();
        e[i] += 1;
        out[to.index.position(&e).expect("next grade")] += c;
    }
    out
}

fn orthogonalize(grade: &mut ExactGrade) -> Result<()> {
    let total: usize = grade.blocks.iter().map(|b| b.basis.len()).sum();
    if total != grade.index.len() {
        return Err(Error::IncompleteDecomposition {
            grade: grade.grade,
            message: format!("exact ranks sum to {total}, expected {}", grade.index.len()),
        });
    }
    let factorials = grade.factorials.clone();
    let fock = |p: &Vector, q: &Vector| -> Rational { p.iter().zip(q).zip(&factorials).map(|((a, b), f)| a * b * f).sum() };
    for block in grade.blocks.iter_mut() {
        let mut done: Vec<(Vector, Rational)> = Vec::new();
        for v in block.basis.drain(..) {
            let mut u = v;
            for (q, qq) in &done {
                let f = fock(&u, q) / qq;
                if !f.is_zero() {
                    for (x, y) in u.iter_mut().zip(q) {
                        *x -= &f * y;
                    }
                }
            }
            let uu = fock(&u, &u);
            done.push((u, uu));
        }
        block.basis = done.into_iter().map(|(v, _)| v).collect();
    }
    for (a, x) in grade.blocks.iter().enumerate() {
        for y in &grade.blocks[a + 1..] {
            for p in &x.basis {
                for q in &y.basis {
                    if !fock(p, q).is_zero() {
                        return Err(Error::IncompleteDecomposition {
                            grade: grade.grade,
                            message: format!("{} and {} not orthogonal", x.signature, y.signature),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}
