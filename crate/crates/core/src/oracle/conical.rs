//! Conical polynomials `Δ_s = Δ_1^{s_1−s_2}···Δ_r^{s_r}` and their compositions with group elements.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::group::unit_matrix;
use super::polynomial::{Coeff, ComplexPoly, Polynomial};
use crate::domains::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::signatures::Signature;

/// Square or rectangular matrix of polynomials.
pub type PolyMatrix<T> = Vec<Vec<Polynomial<T>>>;

/// Matrix variable `Z(g·x)` whose entries are linear forms in the ambient coordinates `x`.
pub fn matrix_variable(spec: &DomainSpec, action: &DMatrix<Complex64>) -> Result<PolyMatrix<Complex64>> {
    let (rows, cols) = spec.matrix_shape().ok_or_else(|| Error::UnsupportedDomain(spec.to_string()))?;
    let coords = spec.ambient_coordinates();
    let units = coords.iter().map(|c| unit_matrix(spec, c)).collect::<Result<Vec<_>>>()?;
    let d = coords.len();
    let mut out = Vec::with_capacity(rows);
    for a in 0..rows {
        let mut row = Vec::with_capacity(cols);
        for b in 0..cols {
            let coeffs: Vec<Complex64> = (0..d)
                .map(|l| (0..d).map(|c| units[c][(a, b)] * action[(c, l)]).sum())
                .collect();
            row.push(Polynomial::linear(&coeffs));
        }
        out.push(row);
    }
    Ok(out)
}

/// Determinant of the leading `k×k` block by cofactor expansion.
pub fn leading_minor<T: Coeff>(m: &PolyMatrix<T>, k: usize, nvars: usize) -> Polynomial<T> {
    let rows: Vec<usize> = (0..k).collect();
    let cols: Vec<usize> = (0..k).collect();
    det(m, &rows, &cols, nvars)
}

fn det<T: Coeff>(m: &PolyMatrix<T>, rows: &[usize], cols: &[usize], nvars: usize) -> Polynomial<T> {
    if rows.is_empty() {
        return Polynomial::constant(nvars, T::one());
    }
    let r0 = rows[0];
    let rest = &rows[1..];
    let mut acc = Polynomial::zero(nvars);
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[r0][c];
        if entry.is_zero() {
            continue;
        }
        let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * &det(m, rest, &sub, nvars);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Pfaffian of the leading `2k×2k` block of a skew matrix.
pub fn leading_pfaffian<T: Coeff>(m: &PolyMatrix<T>, k: usize, nvars: usize) -> Polynomial<T> {
    let idx: Vec<usize> = (0..2 * k).collect();
    pfaffian(m, &idx, nvars)
}

fn pfaffian<T: Coeff>(m: &PolyMatrix<T>, idx: &[usize], nvars: usize) -> Polynomial<T> {
    if idx.is_empty() {
        return Polynomial::constant(nvars, T::one());
    }
    let first = idx[0];
    let mut acc = Polynomial::zero(nvars);
    for (k, &j) in idx.iter().enumerate().skip(1) {
        let entry = &m[first][j];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != j).collect();
        let term = entry * &pfaffian(m, &rest, nvars);
        acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Rank-`j` conical minors `Δ_1..Δ_r` of a matrix variable.
pub fn conical_minors<T: Coeff>(spec: &DomainSpec, m: &PolyMatrix<T>, nvars: usize) -> Result<Vec<Polynomial<T>>> {
    let r = spec.rank();
    match spec.kind() {
        DomainKind::TypeI { .. } | DomainKind::TypeII { .. } => Ok((1..=r).map(|j| leading_minor(m, j, nvars)).collect()),
        DomainKind::TypeIII { .. } => Ok((1..=r).map(|j| leading_pfaffian(m, j, nvars)).collect()),
        DomainKind::TypeIV { .. } => Err(Error::UnsupportedDomain(spec.to_string())),
    }
}

/// `Δ_1^{s_1−s_2}···Δ_r^{s_r}` from precomputed minors.
pub fn conical_product<T: Coeff>(minors: &[Polynomial<T>], s: &Signature, nvars: usize) -> Polynomial<T> {
    let parts = s.parts();
    let mut acc = Polynomial::constant(nvars, T::one());
    for (j, minor) in minors.iter().enumerate() {
        let next = parts.get(j + 1).copied().unwrap_or(0);
        let e = parts[j] - next;
        if e > 0 {
            acc = &acc * &minor.pow(e);
        }
    }
    acc
}

/// `Δ_s ∘ g` where `g` is the action matrix on the ambient coordinates.
pub fn conical_composed(spec: &DomainSpec, s: &Signature, action: &DMatrix<Complex64>) -> Result<ComplexPoly> {
    s.checked_rank(spec.rank())?;
    let m = matrix_variable(spec, action)?;
    let minors = conical_minors(spec, &m, spec.dim())?;
    Ok(conical_product(&minors, s, spec.dim()))
}

pub fn conical_polynomial(spec: &DomainSpec, s: &Signature) -> Result<ComplexPoly> {
    let d = spec.dim();
    let id = DMatrix::identity(d, d);
    conical_composed(spec, s, &id).map(|p| p.prune(1e-15))
}


#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn mono(d: usize, e: &[u8], v: f64) -> ComplexPoly {
        let mut p = ComplexPoly::zero(d);
        p.add_term(e.to_vec(), c(v));
        p
    }

    fn close(p: &ComplexPoly, q: &ComplexPoly) -> bool {
        (p - q).prune(1e-12).is_zero()
    }

    #[test]
    fn type_i_examples() {
        let spec = DomainSpec::type_i(2, 2).unwrap();
        let det = conical_polynomial(&spec, &Signature::new(vec![1, 1]).unwrap()).unwrap();
        let want = &mono(4, &[1, 0, 0, 1], 1.0) - &mono(4, &[0, 1, 1, 0], 1.0);
        assert!(close(&det, &want));
        let z11 = conical_polynomial(&spec, &Signature::new(vec![1, 0]).unwrap()).unwrap();
        assert!(close(&z11, &mono(4, &[1, 0, 0, 0], 1.0)));
        let one = conical_polynomial(&spec, &Signature::zero(2)).unwrap();
        assert!(close(&one, &mono(4, &[0, 0, 0, 0], 1.0)));
    }

    #[test]
    fn type_ii_determinant() {
        let spec = DomainSpec::type_ii(2).unwrap();
        let det = conical_polynomial(&spec, &Signature::new(vec![1, 1]).unwrap()).unwrap();
        let want = &mono(3, &[1, 0, 1], 1.0) - &mono(3, &[0, 2, 0], 0.5);
        assert!(close(&det, &want));
    }

    #[test]
    fn type_iii_pfaffian() {
        let spec = DomainSpec::type_iii(4).unwrap();
        // coordinates: x12 x13 x14 x23 x24 x34, each √2 z_ij
        let pf = conical_polynomial(&spec, &Signature::new(vec![1, 1]).unwrap()).unwrap();
        let want = &(&mono(6, &[1, 0, 0, 0, 0, 1], 0.5) - &mono(6, &[0, 1, 0, 0, 1, 0], 0.5))
            + &mono(6, &[0, 0, 1, 1, 0, 0], 0.5);
        assert!(close(&pf, &want));
        let d1 = conical_polynomial(&spec, &Signature::new(vec![1, 0]).unwrap()).unwrap();
        assert!(close(&d1, &mono(6, &[1, 0, 0, 0, 0, 0], 1.0 / SQRT_2)));
    }

    #[test]
    fn degree_is_signature_weight() {
        for spec in [DomainSpec::type_i(2, 3).unwrap(), DomainSpec::type_iii(5).unwrap(), DomainSpec::type_ii(3).unwrap()] {
            for s in crate::signatures::enumerate_signatures(spec.rank(), 4) {
                let p = conical_polynomial(&spec, &s).unwrap();
                assert_eq!(p.degree(), Some(s.weight() as usize), "{spec} {s}");
            }
        }
    }

    #[test]
    fn type_iv_unsupported() {
        let spec = DomainSpec::type_iv(5).unwrap();
        assert!(matches!(conical_polynomial(&spec, &Signature::zero(2)), Err(Error::UnsupportedDomain(_))));
    }
}
