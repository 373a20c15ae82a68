//! Haar-random elements of the linear isotropy group and their action on the ambient coordinates.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::domains::{Coordinate, DomainKind, DomainSpec};
use crate::error::{Error, Result};

/// Haar-distributed `n×n` unitary: QR of a complex Gaussian matrix with phase-normalized `R` diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) / std::f64::consts::SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `Z ↦ u Z v*` (type I) or `Z ↦ u Z uᵗ` (types II, III).
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub u: DMatrix<Complex64>,
    pub v: Option<DMatrix<Complex64>>,
}

impl GroupElement {
    pub fn identity(spec: &DomainSpec) -> Result<Self> {
        let (rows, cols) = matrix_shape(spec)?;
        let v = matches!(spec.kind(), DomainKind::TypeI { .. }).then(|| DMatrix::identity(cols, cols));
        Ok(GroupElement { u: DMatrix::identity(rows, rows), v })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let v = match (&self.v, &other.v) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        GroupElement { u: &self.u * &other.u, v }
    }

    pub fn apply(&self, z: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        match &self.v {
            Some(v) => &self.u * z * v.adjoint(),
            None => &self.u * z * self.u.transpose(),
        }
    }

    /// `d×d` matrix of the action in orthonormal ambient coordinates.
    pub fn action_matrix(&self, spec: &DomainSpec) -> Result<DMatrix<Complex64>> {
        let coords = spec.ambient_coordinates();
        let d = coords.len();
        let mut out = DMatrix::zeros(d, d);
        for (col, c) in coords.iter().enumerate() {
            let image = self.apply(&unit_matrix(spec, c)?);
            let x = coordinates_of(spec, &image)?;
            out.set_column(col, &x);
        }
        Ok(out)
    }
}

pub fn sample_group_element<R: Rng + ?Sized>(spec: &DomainSpec, rng: &mut R) -> Result<GroupElement> {
    let (rows, cols) = matrix_shape(spec)?;
    let u = haar_unitary(rows, rng);
    let v = match spec.kind() {
        DomainKind::TypeI { .. } => Some(haar_unitary(cols, rng)),
        _ => None,
    };
    Ok(GroupElement { u, v })
}

fn matrix_shape(spec: &DomainSpec) -> Result<(usize, usize)> {
    spec.matrix_shape().ok_or_else(|| Error::UnsupportedDomain(spec.to_string()))
}

/// Matrix-space vector of the unit coordinate `c`; these are orthonormal under `tr(AB*)`.
pub fn unit_matrix(spec: &DomainSpec, c: &Coordinate) -> Result<DMatrix<Complex64>> {
    let (rows, cols) = matrix_shape(spec)?;
    let mut m = DMatrix::zeros(rows, cols);
    if let Coordinate::Entry { row, col, scale } = *c {
        let f = Complex64::new(1.0 / scale.factor(), 0.0);
        m[(row, col)] = f;
        if row != col {
            match spec.kind() {
                DomainKind::TypeII { .. } => m[(col, row)] = f,
                DomainKind::TypeIII { .. } => m[(col, row)] = -f,
                _ => {}
            }
        }
    }
    Ok(m)
}

/// Inverse of [`unit_matrix`] extended linearly.
pub fn coordinates_of(spec: &DomainSpec, z: &DMatrix<Complex64>) -> Result<nalgebra::DVector<Complex64>> {
    matrix_shape(spec)?;
    let coords = spec.ambient_coordinates();
    Ok(nalgebra::DVector::from_iterator(
        coords.len(),
        coords.iter().map(|c| match *c {
            Coordinate::Entry { row, col, scale } => z[(row, col)] * scale.factor(),
            Coordinate::Plain { index } => z[(index, 0)],
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
        let n = m.nrows();
        (m.adjoint() * m - DMatrix::<Complex64>::identity(n, n)).camax()
    }

    fn specs() -> Vec<DomainSpec> {
        vec![
            DomainSpec::type_i(2, 2).unwrap(),
            DomainSpec::type_i(2, 3).unwrap(),
            DomainSpec::type_ii(3).unwrap(),
            DomainSpec::type_iii(4).unwrap(),
            DomainSpec::type_iii(5).unwrap(),
        ]
    }

    #[test]
    fn coordinates_are_orthonormal_in_matrix_space() {
        for spec in specs() {
            let mats: Vec<_> = spec.ambient_coordinates().iter().map(|c| unit_matrix(&spec, c).unwrap()).collect();
            assert_eq!(mats.len(), spec.dim());
            for (i, a) in mats.iter().enumerate() {
                for (j, b) in mats.iter().enumerate() {
                    let g = (a * b.adjoint()).trace();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - Complex64::new(want, 0.0)).norm() < 1e-15, "{spec} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn sampled_actions_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for spec in specs() {
            for _ in 0..5 {
                let g = sample_group_element(&spec, &mut rng).unwrap();
                assert!(unitarity_defect(&g.u) < 1e-12);
                assert!(unitarity_defect(&g.action_matrix(&spec).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn identity_and_row_phase() {
        let spec = DomainSpec::type_i(2, 2).unwrap();
        let id = GroupElement::identity(&spec).unwrap();
        let m = id.action_matrix(&spec).unwrap();
        assert!((m - DMatrix::<Complex64>::identity(4, 4)).camax() < 1e-15);
        let theta = 0.7;
        let ph = Complex64::from_polar(1.0, theta);
        let mut u = DMatrix::identity(2, 2);
        u[(0, 0)] = ph;
        let g = GroupElement { u, v: Some(DMatrix::identity(2, 2)) };
        let m = g.action_matrix(&spec).unwrap();
        let mut want = DMatrix::<Complex64>::identity(4, 4);
        want[(0, 0)] = ph;
        want[(1, 1)] = ph;
        assert!((m - want).camax() < 1e-15);
    }

    #[test]
    fn action_is_functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in specs() {
            let g = sample_group_element(&spec, &mut rng).unwrap();
            let h = sample_group_element(&spec, &mut rng).unwrap();
            let lhs = g.compose(&h).action_matrix(&spec).unwrap();
            let rhs = g.action_matrix(&spec).unwrap() * h.action_matrix(&spec).unwrap();
            assert!((lhs - rhs).camax() < 1e-12);
        }
    }

    #[test]
    fn type_iv_unsupported() {
        let spec = DomainSpec::type_iv(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(sample_group_element(&spec, &mut rng), Err(Error::UnsupportedDomain(_))));
    }
}
