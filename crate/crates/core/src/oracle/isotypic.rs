//! Isotypic spaces `P_s` as orbit spans of conical polynomials, and graded decompositions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::conical::{conical_minors, conical_product, matrix_variable};
use super::group::{sample_group_element, GroupElement};
use super::polynomial::{factorial_f64, ComplexPoly, MonomialIndex};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::signatures::{signatures_of_weight, Signature};

/// Largest ambient dimension the oracle accepts.
pub const MAX_DIM: usize = 10;
/// Largest grade the oracle builds.
pub const MAX_GRADE: usize = 7;

/// Orthonormal basis (columns) of `P_s` inside the degree-`|s|` Fock coordinates.
#[derive(Debug, Clone)]
pub struct IsotypicBasis {
    pub signature: Signature,
    pub basis: DMatrix<Complex64>,
    /// Column scale: 1 for Fock-orthonormal columns, `√a_s` after weighting.
    pub scale: f64,
}

impl IsotypicBasis {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Columns orthonormal in the weighted inner product `‖p‖² = ‖p‖²_F / a_s`.
    pub fn weighted(&self, a_s: f64) -> IsotypicBasis {
        let f = a_s.sqrt();
        IsotypicBasis { signature: self.signature.clone(), basis: &self.basis * Complex64::new(f, 0.0), scale: self.scale * f }
    }

    /// Fock-orthogonal projection of `v` onto the span.
    pub fn project(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let q = &self.basis / Complex64::new(self.scale, 0.0);
        &q * (q.adjoint() * v)
    }
}

pub fn weighted_onb(basis: &IsotypicBasis, a_s: f64) -> IsotypicBasis {
    basis.weighted(a_s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub seeds: (u64, u64),
    /// Orbit samples per monomial dimension; at least 2.
    pub sample_factor: usize,
    /// Relative singular-value cut.
    pub rank_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { seeds: (1, 2), sample_factor: 2, rank_tol: 1e-9 }
    }
}

pub fn check_supported(spec: &DomainSpec, max_grade: usize) -> Result<()> {
    if spec.matrix_shape().is_none() {
        return Err(Error::UnsupportedDomain(spec.to_string()));
    }
    if spec.dim() > MAX_DIM {
        return Err(Error::ParameterBound(format!("oracle requires d ≤ {MAX_DIM}, got {}", spec.dim())));
    }
    if max_grade > MAX_GRADE {
        return Err(Error::ParameterBound(format!("oracle requires grade ≤ {MAX_GRADE}, got {max_grade}")));
    }
    Ok(())
}

fn signature_rng(seed: u64, s: &Signature) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = s.parts().iter().fold(s.rank() as u64, |h, &p| h.wrapping_mul(1_000_003).wrapping_add(p as u64 + 1));
    rng.set_stream(stream);
    rng
}

/// Orthonormal basis of the orbit span of `Δ_s` from `num_samples` random group elements.
pub fn orbit_span(
    spec: &DomainSpec,
    s: &Signature,
    index: &MonomialIndex,
    num_samples: usize,
    rank_tol: f64,
    seed: u64,
) -> Result<DMatrix<Complex64>> {
    let mut rng = signature_rng(seed, s);
    let mut samples = DMatrix::zeros(index.len(), num_samples);
    for k in 0..num_samples {
        let g = sample_group_element(spec, &mut rng)?;
        let p = composed(spec, s, &g)?;
        samples.set_column(k, &index.to_fock(&p));
    }
    Ok(dominant_columns(samples, rank_tol))
}

fn composed(spec: &DomainSpec, s: &Signature, g: &GroupElement) -> Result<ComplexPoly> {
    let m = matrix_variable(spec, &g.action_matrix(spec)?)?;
    let minors = conical_minors(spec, &m, spec.dim())?;
    Ok(conical_product(&minors, s, spec.dim()))
}

fn dominant_columns(m: DMatrix<Complex64>, rank_tol: f64) -> DMatrix<Complex64> {
    let rows = m.nrows();
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors");
    let sigma = &svd.singular_values;
    let top = sigma.iter().cloned().fold(0.0, f64::max);
    let mut keep: Vec<usize> = (0..sigma.len()).filter(|&i| top > 0.0 && sigma[i] > rank_tol * top).collect();
    keep.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));
    let mut out = DMatrix::zeros(rows, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        let mut col = u.column(i).into_owned();
        // fix the phase so the largest entry is real positive
        let (imax, _) = col.iter().enumerate().fold((0, 0.0), |acc, (k, z)| if z.norm() > acc.1 + 1e-12 { (k, z.norm()) } else { acc });
        let ph = col[imax] / col[imax].norm();
        col /= ph;
        out.set_column(c, &col);
    }
    out
}

/// Basis of `P_s` with the two-seed dimension check.
pub fn build_isotypic(spec: &DomainSpec, s: &Signature, num_samples: usize, tol: f64, seeds: (u64, u64)) -> Result<IsotypicBasis> {
    s.checked_rank(spec.rank())?;
    check_supported(spec, s.weight() as usize)?;
    let index = MonomialIndex::new(spec.dim(), s.weight() as usize);
    if num_samples < 2 * index.len() {
        return Err(Error::ParameterBound(format!(
            "need at least {} orbit samples, got {num_samples}",
            2 * index.len()
        )));
    }
    let first = orbit_span(spec, s, &index, num_samples, tol, seeds.0)?;
    let second = orbit_span(spec, s, &index, num_samples, tol, seeds.1)?;
    if first.ncols() != second.ncols() {
        return Err(Error::Instability { signature: s.clone(), first: first.ncols(), second: second.ncols() });
    }
    Ok(IsotypicBasis { signature: s.clone(), basis: first, scale: 1.0 })
}

/// All isotypic pieces of one grade.
#[derive(Debug, Clone)]
pub struct GradeDecomposition {
    pub grade: usize,
    pub index: MonomialIndex,
    pub blocks: Vec<IsotypicBasis>,
    pub max_cross_gram: f64,
}

impl GradeDecomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(IsotypicBasis::dim).collect()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.dim();
                o
            })
            .collect()
    }

    pub fn position(&self, s: &Signature) -> Option<usize> {
        self.blocks.iter().position(|b| &b.signature == s)
    }

    pub fn block(&self, s: &Signature) -> Option<&IsotypicBasis> {
        self.blocks.iter().find(|b| &b.signature == s)
    }

    /// Concatenated Fock-orthonormal bases; unitary when the decomposition is complete.
    pub fn full_basis(&self) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.index.len(), self.index.len());
        let mut c = 0;
        for b in &self.blocks {
            for k in 0..b.dim() {
                out.set_column(c, &(b.basis.column(k) / Complex64::new(b.scale, 0.0)));
                c += 1;
            }
        }
        out
    }
}

pub fn decompose_grade(spec: &DomainSpec, n: usize, config: &OracleConfig) -> Result<GradeDecomposition> {
    check_supported(spec, n)?;
    let index = MonomialIndex::new(spec.dim(), n);
    let num_samples = config.sample_factor.max(2) * index.len();
    let signatures = signatures_of_weight(spec.rank(), n as u64);
    let blocks = signatures
        .par_iter()
        .map(|s| build_isotypic(spec, s, num_samples, config.rank_tol, config.seeds))
        .collect::<Result<Vec<_>>>()?;
    let total: usize = blocks.iter().map(IsotypicBasis::dim).sum();
    if total != index.len() {
        return Err(Error::IncompleteDecomposition {
            grade: n,
            message: format!("isotypic dimensions sum to {total}, monomial space has {}", index.len()),
        });
    }
    let mut max_cross_gram: f64 = 0.0;
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            max_cross_gram = max_cross_gram.max((a.basis.adjoint() * &b.basis).camax());
        }
    }
    if max_cross_gram > 1e-8 {
        return Err(Error::IncompleteDecomposition {
            grade: n,
            message: format!("isotypic pieces not orthogonal (cross-Gram {max_cross_gram:e})"),
        });
    }
    Ok(GradeDecomposition { grade: n, index, blocks, max_cross_gram })
}

/// Isotypic decompositions of grades `0..=top`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub spec: DomainSpec,
    pub config: OracleConfig,
    pub grades: Vec<GradeDecomposition>,
}

impl Decomposition {
    pub fn build(spec: &DomainSpec, top: usize, config: &OracleConfig) -> Result<Self> {
        check_supported(spec, top)?;
        let grades = (0..=top).map(|n| decompose_grade(spec, n, config)).collect::<Result<Vec<_>>>()?;
        Ok(Decomposition { spec: spec.clone(), config: *config, grades })
    }

    pub fn top(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grade(&self, n: usize) -> Option<&GradeDecomposition> {
        self.grades.get(n)
    }

    pub fn block(&self, s: &Signature) -> Option<&IsotypicBasis> {
        self.grade(s.weight() as usize).and_then(|g| g.block(s))
    }
}

/// Matrix of `p ↦ p∘g` on degree-`n` Fock coordinates.
pub fn grade_action(index: &MonomialIndex, action: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let d = index.nvars();
    let forms: Vec<ComplexPoly> = (0..d)
        .map(|i| ComplexPoly::linear(&action.row(i).iter().cloned().collect::<Vec<_>>()))
        .collect();
    let mut out = DMatrix::zeros(index.len(), index.len());
    for (col, e) in index.exponents().iter().enumerate() {
        let mut p = ComplexPoly::constant(d, Complex64::new(1.0, 0.0));
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                p = &p * &forms[i].pow(k as u32);
            }
        }
        out.set_column(col, &(index.to_fock(&p) / Complex64::new(factorial_f64(e).sqrt(), 0.0)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::polynomial::binomial;

    fn sig(p: &[u32]) -> Signature {
        Signature::new(p.to_vec()).unwrap()
    }

    #[test]
    fn type_i_dimensions() {
        let spec = DomainSpec::type_i(2, 2).unwrap();
        let seeds = (3, 4);
        assert_eq!(build_isotypic(&spec, &sig(&[1, 1]), 20, 1e-9, seeds).unwrap().dim(), 1);
        assert_eq!(build_isotypic(&spec, &sig(&[1, 0]), 8, 1e-9, seeds).unwrap().dim(), 4);
        assert_eq!(build_isotypic(&spec, &sig(&[2, 0]), 20, 1e-9, seeds).unwrap().dim(), 9);
    }

    #[test]
    fn too_few_samples_rejected() {
        let spec = DomainSpec::type_i(2, 2).unwrap();
        assert!(matches!(build_isotypic(&spec, &sig(&[1, 0]), 7, 1e-9, (1, 2)), Err(Error::ParameterBound(_))));
    }

    #[test]
    fn grades_are_complete_and_orthogonal() {
        let config = OracleConfig::default();
        for spec in [DomainSpec::type_i(2, 2).unwrap(), DomainSpec::type_ii(2).unwrap(), DomainSpec::type_iii(4).unwrap(), DomainSpec::type_i(2, 3).unwrap()] {
            let dec = Decomposition::build(&spec, 3, &config).unwrap();
            for g in &dec.grades {
                assert_eq!(g.dims().iter().sum::<usize>(), binomial(g.grade + spec.dim() - 1, spec.dim() - 1));
                assert!(g.max_cross_gram <= 1e-8);
                let u = g.full_basis();
                let n = u.ncols();
                assert!((u.adjoint() * &u - DMatrix::<Complex64>::identity(n, n)).camax() < 1e-10, "{spec}");
            }
        }
    }

    #[test]
    fn isotypic_spaces_are_invariant() {
        let spec = DomainSpec::type_i(2, 2).unwrap();
        let dec = Decomposition::build(&spec, 3, &OracleConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let g = sample_group_element(&spec, &mut rng).unwrap().action_matrix(&spec).unwrap();
        for grade in &dec.grades {
            let act = grade_action(&grade.index, &g);
            let n = act.ncols();
            assert!((act.adjoint() * &act - DMatrix::<Complex64>::identity(n, n)).camax() < 1e-10);
            for b in &grade.blocks {
                let moved = &act * &b.basis;
                let back = &b.basis * (b.basis.adjoint() * &moved);
                assert!((moved - back).camax() < 1e-9, "{}", b.signature);
            }
        }
    }

    #[test]
    fn weighted_scaling() {
        let spec = DomainSpec::type_i(2, 2).unwrap();
        let b = build_isotypic(&spec, &sig(&[2, 0]), 20, 1e-9, (1, 2)).unwrap();
        let w = weighted_onb(&b, 12.0);
        assert!((w.scale - 12f64.sqrt()).abs() < 1e-15);
        assert!((w.basis.column(0).norm() - 12f64.sqrt()).abs() < 1e-12);
    }
}
