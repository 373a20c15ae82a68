//! Sparse polynomials in `d` orthonormal coordinates and Fock-normalized coordinate vectors.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};

/// Exponent multi-index.
pub type Exponent = Vec<u8>;

/// Coefficient ring for [`Polynomial`].
pub trait Coeff:
    Clone + Zero + One + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Finitely supported map exponent -> coefficient; never stores zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    nvars: usize,
    terms: BTreeMap<Exponent, T>,
}

pub type ComplexPoly = Polynomial<Complex64>;

impl<T: Coeff> Polynomial<T> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, T::one());
        p
    }

    /// `Σ_i coeffs[i] z_i`.
    pub fn linear(coeffs: &[T]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, T> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max()
    }

    pub fn coefficient(&self, e: &[u8]) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: T) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let sum = v.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂z_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            let k = f[i];
            f[i] -= 1;
            let mut c = v.clone();
            let mut m = T::one();
            for _ in 1..k {
                m = m + T::one();
            }
            c = c * m;
            out.add_term(f, c);
        }
        out
    }
}

impl<T: Coeff> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }
}

impl<T: Coeff> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), -v.clone());
        }
        out
    }
}

impl<T: Coeff> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let mut acc: HashMap<Exponent, T> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (e1, v1) in &self.terms {
            for (e2, v2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let prod = v1.clone() * v2.clone();
                match acc.get_mut(&e) {
                    Some(v) => *v = v.clone() + prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        Polynomial {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }
}

impl ComplexPoly {
    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(mut self, tol: f64) -> Self {
        self.terms.retain(|_, v| v.norm() > tol);
        self
    }
}

pub fn factorial_f64(e: &[u8]) -> f64 {
    e.iter().map(|&k| (1..=k as u32).map(f64::from).product::<f64>()).product()
}

/// `⟨p, q⟩_F = Σ_α p_α conj(q_α) α!`.
pub fn fock_inner(p: &ComplexPoly, q: &ComplexPoly) -> Complex64 {
    p.terms
        .iter()
        .filter_map(|(e, pv)| q.terms.get(e).map(|qv| pv * qv.conj() * factorial_f64(e)))
        .sum()
}

/// Degree-`n` monomials in `d` variables, descending lexicographic order.
#[derive(Debug, Clone)]
pub struct MonomialIndex {
    nvars: usize,
    degree: usize,
    exponents: Vec<Exponent>,
    positions: HashMap<Exponent, usize>,
    sqrt_factorials: Vec<f64>,
}

impl MonomialIndex {
    pub fn new(nvars: usize, degree: usize) -> Self {
        let mut exponents = Vec::new();
        let mut current = vec![0u8; nvars];
        fill(&mut exponents, &mut current, 0, degree);
        let positions = exponents.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let sqrt_factorials = exponents.iter().map(|e| factorial_f64(e).sqrt()).collect();
        MonomialIndex { nvars, degree, exponents, positions, sqrt_factorials }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exponents
    }

    pub fn position(&self, e: &[u8]) -> Option<usize> {
        self.positions.get(e).copied()
    }

    /// Coordinates in the Fock-orthonormal basis `z^α/√(α!)`; terms of other degrees are ignored.
    pub fn to_fock(&self, p: &ComplexPoly) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.len());
        for (e, c) in p.terms() {
            if let Some(i) = self.position(e) {
                v[i] = c * self.sqrt_factorials[i];
            }
        }
        v
    }

    pub fn from_fock(&self, v: &DVector<Complex64>) -> ComplexPoly {
        let mut p = ComplexPoly::zero(self.nvars);
        for (i, c) in v.iter().enumerate() {
            p.add_term(self.exponents[i].clone(), c / self.sqrt_factorials[i]);
        }
        p
    }

    /// Matrix of multiplication by `z_i` from this degree to the next, in Fock coordinates.
    pub fn multiplication(&self, next: &MonomialIndex, i: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(next.len(), self.len());
        for (col, e) in self.exponents.iter().enumerate() {
            let mut f = e.clone();
            f[i] += 1;
            let row = next.position(&f).expect("next degree index");
            m[(row, col)] = Complex64::new((e[i] as f64 + 1.0).sqrt(), 0.0);
        }
        m
    }
}

fn fill(out: &mut Vec<Exponent>, current: &mut Exponent, var: usize, remaining: usize) {
    if var + 1 == current.len() {
        current[var] = remaining as u8;
        out.push(current.clone());
        return;
    }
    if current.is_empty() {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=remaining).rev() {
        current[var] = k as u8;
        fill(out, current, var + 1, remaining - k);
    }
    current[var] = 0;
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn fock_inner_examples() {
        let z1 = ComplexPoly::variable(3, 0);
        let z2 = ComplexPoly::variable(3, 1);
        assert_eq!(fock_inner(&z1, &z1), c(1.0));
        assert_eq!(fock_inner(&z1.pow(2), &z1.pow(2)), c(2.0));
        assert_eq!(fock_inner(&z1, &z2), c(0.0));
        let p = &(&z1 * &z2) * &z2;
        assert_eq!(fock_inner(&p, &p), c(2.0));
    }

    #[test]
    fn fock_coordinates_are_isometric() {
        let idx = MonomialIndex::new(3, 3);
        assert_eq!(idx.len(), binomial(5, 2));
        let z = |i| ComplexPoly::variable(3, i);
        let p = &(&z(0).pow(2) * &z(1)).scale(&Complex64::new(1.0, 2.0)) + &z(2).pow(3).scale(&c(-0.5));
        let q = &(&z(0) * &z(1)) * &z(2);
        let (vp, vq) = (idx.to_fock(&p), idx.to_fock(&q));
        assert!((vp.dotc(&vp) - fock_inner(&p, &p)).norm() < 1e-12);
        assert!((vq.dotc(&vp) - fock_inner(&p, &q)).norm() < 1e-12);
        let back = idx.from_fock(&vp);
        assert!((&back - &p).prune(1e-12).is_zero());
    }

    #[test]
    fn multiplication_adjoint_is_derivative() {
        let (i2, i3) = (MonomialIndex::new(3, 2), MonomialIndex::new(3, 3));
        let z = |i| ComplexPoly::variable(3, i);
        let p = &(&z(0).pow(2) * &z(1)) + &(&z(1) * &z(2).pow(2)).scale(&c(3.0));
        for i in 0..3 {
            let m = i2.multiplication(&i3, i);
            let via_matrix = i2.from_fock(&(m.adjoint() * i3.to_fock(&p)));
            assert!((&via_matrix - &p.derivative(i)).prune(1e-12).is_zero());
        }
    }

    #[test]
    fn exponent_order_and_count() {
        let idx = MonomialIndex::new(2, 2);
        assert_eq!(idx.exponents(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        for d in 1..6 {
            for n in 0..6 {
                assert_eq!(MonomialIndex::new(d, n).len(), binomial(n + d - 1, d - 1));
            }
        }
    }
}
