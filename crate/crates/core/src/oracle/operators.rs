//! Coordinate multiplication operators in weighted orthonormal bases, and measured `τ`, `δ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::isotypic::{grade_action, Decomposition, GradeDecomposition, IsotypicBasis};
use super::polynomial::ComplexPoly;
use crate::error::{Error, Result};
use crate::number::to_f64;
use crate::signatures::Signature;
use crate::weights::WeightSequence;

/// Blocks of multiplication by one coordinate: `blocks[n]` maps grade `n` to grade `n+1`.
#[derive(Debug, Clone)]
pub struct GradedOperator {
    pub coordinate: usize,
    pub blocks: Vec<DMatrix<Complex64>>,
}

/// Value of a diagonal block of a self-adjoint combination and its distance from a scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockMeasurement {
    pub value: f64,
    pub residual: f64,
}

/// Weighted operator model over a fixed decomposition.
#[derive(Debug, Clone)]
pub struct OperatorModel<'a> {
    decomposition: &'a Decomposition,
    weights: Vec<Vec<f64>>,
    operators: Vec<GradedOperator>,
    tau_sums: Vec<DMatrix<Complex64>>,
    delta_sums: Vec<DMatrix<Complex64>>,
    max_expansion_residual: f64,
}

fn column_scales(grade: &GradeDecomposition, a: &[f64]) -> DVector<f64> {
    let mut v = Vec::new();
    for (b, &w) in grade.blocks.iter().zip(a) {
        v.extend(std::iter::repeat_n(w, b.dim()));
    }
    DVector::from_vec(v)
}

fn scale_rows(m: &mut DMatrix<Complex64>, f: &DVector<f64>) {
    for (i, mut row) in m.row_iter_mut().enumerate() {
        row *= Complex64::new(f[i], 0.0);
    }
}

fn scale_cols(m: &mut DMatrix<Complex64>, f: &DVector<f64>) {
    for (j, mut col) in m.column_iter_mut().enumerate() {
        col *= Complex64::new(f[j], 0.0);
    }
}

impl<'a> OperatorModel<'a> {
    /// Multiplication blocks for grades `0..top`, where `top` is the decomposition's top grade.
    pub fn build(decomposition: &'a Decomposition, w: &WeightSequence) -> Result<Self> {
        if w.domain() != &decomposition.spec {
            return Err(Error::Incompatible(format!("weights on {} but decomposition on {}", w.domain(), decomposition.spec)));
        }
        let weights = decomposition
            .grades
            .iter()
            .map(|g| g.blocks.iter().map(|b| w.weight(&b.signature).map(|x| to_f64(&x))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let d = decomposition.spec.dim();
        let top = decomposition.top();
        let fulls: Vec<DMatrix<Complex64>> = decomposition.grades.iter().map(GradeDecomposition::full_basis).collect();
        let sqrt_a: Vec<DVector<f64>> = decomposition
            .grades
            .iter()
            .zip(&weights)
            .map(|(g, a)| column_scales(g, a).map(f64::sqrt))
            .collect();
        let built: Vec<(GradedOperator, f64)> = (0..d)
            .into_par_iter()
            .map(|i| {
                let mut blocks = Vec::with_capacity(top);
                let mut residual: f64 = 0.0;
                for n in 0..top {
                    let (g0, g1) = (&decomposition.grades[n], &decomposition.grades[n + 1]);
                    let image = g0.index.multiplication(&g1.index, i) * &fulls[n];
                    let coeffs = fulls[n + 1].adjoint() * &image;
                    residual = residual.max((&image - &fulls[n + 1] * &coeffs).camax());
                    let mut block = coeffs;
                    scale_rows(&mut block, &sqrt_a[n + 1].map(|x| 1.0 / x));
                    scale_cols(&mut block, &sqrt_a[n]);
                    blocks.push(block);
                }
                (GradedOperator { coordinate: i, blocks }, residual)
            })
            .collect();
        let max_expansion_residual = built.iter().map(|(_, r)| *r).fold(0.0, f64::max);
        if max_expansion_residual > 1e-8 {
            return Err(Error::IncompleteDecomposition {
                grade: top,
                message: format!("multiplication expansion residual {max_expansion_residual:e}"),
            });
        }
        let operators: Vec<GradedOperator> = built.into_iter().map(|(op, _)| op).collect();
        let size = |n: usize| decomposition.grades[n].index.len();
        let tau_sums = (0..=top)
            .map(|n| {
                let mut acc = DMatrix::zeros(size(n), size(n));
                if n > 0 {
                    for op in &operators {
                        acc += &op.blocks[n - 1] * op.blocks[n - 1].adjoint();
                    }
                }
                acc
            })
            .collect();
        let delta_sums = (0..top)
            .map(|n| {
                let mut acc = DMatrix::zeros(size(n), size(n));
                for op in &operators {
                    acc += op.blocks[n].adjoint() * &op.blocks[n];
                }
                acc
            })
            .collect();
        Ok(OperatorModel { decomposition, weights, operators, tau_sums, delta_sums, max_expansion_residual })
    }

    pub fn decomposition(&self) -> &Decomposition {
        self.decomposition
    }

    pub fn operators(&self) -> &[GradedOperator] {
        &self.operators
    }

    pub fn max_expansion_residual(&self) -> f64 {
        self.max_expansion_residual
    }

    /// Largest `|s|` for which `δ(s)` can be measured.
    pub fn max_delta_weight(&self) -> usize {
        self.delta_sums.len().saturating_sub(1)
    }

    fn locate(&self, s: &Signature) -> Result<(usize, usize, usize)> {
        let n = s.weight() as usize;
        let grade = self.decomposition.grade(n).ok_or_else(|| Error::ParameterBound(format!("grade {n} not built")))?;
        let k = grade.position(s).ok_or_else(|| Error::ParameterBound(format!("{s} not in decomposition")))?;
        Ok((n, grade.offsets()[k], grade.blocks[k].dim()))
    }

    fn weight_of(&self, s: &Signature) -> Result<f64> {
        let n = s.weight() as usize;
        let k = self.decomposition.grades[n].position(s).ok_or_else(|| Error::ParameterBound(format!("{s} not in decomposition")))?;
        Ok(self.weights[n][k])
    }

    pub fn measure_tau(&self, s: &Signature) -> Result<BlockMeasurement> {
        let (n, off, dim) = self.locate(s)?;
        Ok(scalar_block(&self.tau_sums[n], off, dim))
    }

    pub fn measure_delta(&self, s: &Signature) -> Result<BlockMeasurement> {
        let (n, off, dim) = self.locate(s)?;
        let sum = self
            .delta_sums
            .get(n)
            .ok_or_else(|| Error::ParameterBound(format!("δ at grade {n} needs grade {} built", n + 1)))?;
        Ok(scalar_block(sum, off, dim))
    }

    /// `Σ M_i M_i*` on `P_s`; fails when the block is not scalar within `tol`.
    pub fn measured_tau(&self, s: &Signature, tol: f64) -> Result<f64> {
        checked(s, self.measure_tau(s)?, tol)
    }

    /// `Σ M_i* M_i` on `P_s`; fails when the block is not scalar within `tol`.
    pub fn measured_delta(&self, s: &Signature, tol: f64) -> Result<f64> {
        checked(s, self.measure_delta(s)?, tol)
    }

    /// `M_i* p = Σ_j (a_{s−ε_j}/a_s)(∂_i p)_{s−ε_j}` for `p ∈ P_s` given in Fock coordinates.
    pub fn adjoint_via_formula(&self, p: &DVector<Complex64>, s: &Signature, i: usize) -> Result<DVector<Complex64>> {
        let n = s.weight() as usize;
        if n == 0 {
            return Ok(DVector::zeros(0));
        }
        let (lower, upper) = (&self.decomposition.grades[n - 1], &self.decomposition.grades[n]);
        let derivative = lower.index.multiplication(&upper.index, i).adjoint() * p;
        let a_s = self.weight_of(s)?;
        let mut out = DVector::zeros(lower.index.len());
        for j in 1..=s.rank() {
            if let Some(t) = s.shift_down(j)? {
                let block: &IsotypicBasis = lower.block(&t).ok_or_else(|| Error::ParameterBound(format!("{t} missing")))?;
                out += block.project(&derivative) * Complex64::new(self.weight_of(&t)? / a_s, 0.0);
            }
        }
        Ok(out)
    }

    /// Adjoint of multiplication by `z_i` from the weighted Gram structure, for `p` of grade `n ≥ 1`.
    pub fn gram_adjoint(&self, p: &DVector<Complex64>, n: usize, i: usize) -> DVector<Complex64> {
        let (lower, upper) = (&self.decomposition.grades[n - 1], &self.decomposition.grades[n]);
        let sqrt_hi = column_scales(upper, &self.weights[n]).map(f64::sqrt);
        let sqrt_lo = column_scales(lower, &self.weights[n - 1]).map(f64::sqrt);
        let mut beta = upper.full_basis().adjoint() * p;
        beta.component_mul_assign(&sqrt_hi.map(|x| Complex64::new(1.0 / x, 0.0)));
        let mut gamma = self.operators[i].blocks[n - 1].adjoint() * beta;
        gamma.component_mul_assign(&sqrt_lo.map(|x| Complex64::new(x, 0.0)));
        lower.full_basis() * gamma
    }

    /// Polynomial form of [`Self::adjoint_via_formula`].
    pub fn adjoint_polynomial(&self, p: &ComplexPoly, s: &Signature, i: usize) -> Result<ComplexPoly> {
        let n = s.weight() as usize;
        if n == 0 {
            return Ok(ComplexPoly::zero(self.decomposition.spec.dim()));
        }
        let v = self.decomposition.grades[n].index.to_fock(p);
        let out = self.adjoint_via_formula(&v, s, i)?;
        Ok(self.decomposition.grades[n - 1].index.from_fock(&out).prune(1e-14))
    }

    /// Re-measures every scalar after moving all bases by a group element; returns the largest change.
    pub fn invariance_defect(&self, w: &WeightSequence, action: &DMatrix<Complex64>) -> Result<f64> {
        let moved = self.decomposition.transformed(action);
        let other = OperatorModel::build(&moved, w)?;
        let mut worst: f64 = 0.0;
        for g in &self.decomposition.grades {
            for b in &g.blocks {
                let s = &b.signature;
                worst = worst.max((self.measure_tau(s)?.value - other.measure_tau(s)?.value).abs());
                if (g.grade) < self.delta_sums.len() {
                    worst = worst.max((self.measure_delta(s)?.value - other.measure_delta(s)?.value).abs());
                }
            }
        }
        Ok(worst)
    }
}

impl Decomposition {
    /// Same decomposition with every basis replaced by its image under `p ↦ p∘g`.
    pub fn transformed(&self, action: &DMatrix<Complex64>) -> Decomposition {
        let grades = self
            .grades
            .iter()
            .map(|g| {
                let act = grade_action(&g.index, action);
                let blocks = g
                    .blocks
                    .iter()
                    .map(|b| IsotypicBasis { signature: b.signature.clone(), basis: &act * &b.basis, scale: b.scale })
                    .collect();
                GradeDecomposition { grade: g.grade, index: g.index.clone(), blocks, max_cross_gram: g.max_cross_gram }
            })
            .collect();
        Decomposition { spec: self.spec.clone(), config: self.config, grades }
    }
}

fn scalar_block(m: &DMatrix<Complex64>, off: usize, dim: usize) -> BlockMeasurement {
    let rows = m.rows(off, dim);
    let block = rows.columns(off, dim);
    let value = block.trace().re / dim as f64;
    let mut dev: f64 = 0.0;
    for r in 0..dim {
        for c in 0..m.ncols() {
            let want = if c == off + r { value } else { 0.0 };
            dev = dev.max((rows[(r, c)] - Complex64::new(want, 0.0)).norm());
        }
    }
    let residual = if value.abs() > 0.0 { dev / value.abs() } else { dev };
    BlockMeasurement { value, residual }
}

fn checked(s: &Signature, m: BlockMeasurement, tol: f64) -> Result<f64> {
    if m.residual > tol {
        return Err(Error::NonScalarBlock { signature: s.clone(), residual: m.residual });
    }
    Ok(m.value)
}
