//! Numeric unitary matrix groups.

use nalgebra::{Complex, DMatrix};

use super::GroupError;

pub type Complex64 = Complex<f64>;
pub type CMatrix = DMatrix<Complex64>;

/// Default tolerance for matrix equality and unitarity.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A subgroup of `U(n)` described by its dimension, a tolerance and an
/// optional list of named generators.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixGroup {
    dim: usize,
    tolerance: f64,
    generators: Vec<CMatrix>,
}

impl MatrixGroup {
    pub fn new(dim: usize, tolerance: f64, generators: Vec<CMatrix>) -> Result<Self, GroupError> {
        if dim == 0 {
            return Err(GroupError::InvalidTable("matrix dimension must be positive".into()));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(GroupError::InvalidTable(format!("tolerance {tolerance} must be positive")));
        }
        let group = MatrixGroup { dim, tolerance, generators: Vec::new() };
        for g in &generators {
            group.check(g)?;
        }
        Ok(MatrixGroup { generators, ..group })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Checks shape and unitarity: `‖U†U − I‖_F ≤ ε`.
    pub fn check(&self, m: &CMatrix) -> Result<(), GroupError> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(GroupError::ContextMismatch);
        }
        let defect = unitarity_defect(m);
        if defect > self.tolerance {
            return Err(GroupError::NotUnitary(defect));
        }
        Ok(())
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.dim, self.dim)
    }

    pub fn eq(&self, a: &CMatrix, b: &CMatrix) -> bool {
        (a - b).norm() <= self.tolerance
    }

    /// Complex dimension of the commutant `{X | X gᵢ = gᵢ X}`.
    ///
    /// With column-major vectorisation `vec(X g − g X) = (gᵀ ⊗ I − I ⊗ g) vec(X)`;
    /// the blocks for all generators are stacked and the nullity read off
    /// the singular values.
    pub fn commutant_dimension(&self, gens: &[CMatrix]) -> usize {
        let n = self.dim;
        let n2 = n * n;
        if gens.is_empty() {
            return n2;
        }
        let eye = CMatrix::identity(n, n);
        let mut system = CMatrix::zeros(gens.len() * n2, n2);
        for (k, g) in gens.iter().enumerate() {
            let block = g.transpose().kronecker(&eye) - eye.kronecker(g);
            system.view_mut((k * n2, 0), (n2, n2)).copy_from(&block);
        }
        let rank = system
            .singular_values()
            .iter()
            .filter(|&&s| s > self.tolerance)
            .count();
        n2 - rank
    }
}

/// `‖U†U − I‖_F`
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    (m.adjoint() * m - CMatrix::identity(m.nrows(), m.ncols())).norm()
}

/// The SU(2) element attached to the unit quaternion `a + bi + cj + dk`.
/// The input is normalised first.
pub fn su2_from_quaternion(a: f64, b: f64, c: f64, d: f64) -> CMatrix {
    let r = (a * a + b * b + c * c + d * d).sqrt();
    let (a, b, c, d) = (a / r, b / r, c / r, d / r);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(a, b),
            Complex64::new(c, d),
            Complex64::new(-c, d),
            Complex64::new(a, -b),
        ],
    )
}

/// `diag(e^{iθ}, e^{-iθ})`
pub fn su2_diagonal(theta: f64) -> CMatrix {
    let z = Complex64::from_polar(1.0, theta);
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![z, z.conj()]))
}

/// Real rotation `[[cos θ, −sin θ], [sin θ, cos θ]]` as a complex matrix.
pub fn rotation(theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_elements_are_unitary() {
        for q in [(1.0, 0.0, 0.0, 0.0), (0.3, -1.2, 0.5, 2.0), (0.0, 0.0, 0.0, 1.0)] {
            let u = su2_from_quaternion(q.0, q.1, q.2, q.3);
            assert!(unitarity_defect(&u) < 1e-12);
            assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let g = MatrixGroup::new(2, DEFAULT_TOLERANCE, vec![]).unwrap();
        let m = CMatrix::identity(2, 2) * Complex64::new(2.0, 0.0);
        assert!(matches!(g.check(&m), Err(GroupError::NotUnitary(_))));
        assert!(matches!(g.check(&CMatrix::identity(3, 3)), Err(GroupError::ContextMismatch)));
    }

    #[test]
    fn commutant_of_scalars_is_everything() {
        let g = MatrixGroup::new(3, DEFAULT_TOLERANCE, vec![]).unwrap();
        let phase = CMatrix::identity(3, 3) * Complex64::from_polar(1.0, 0.7);
        assert_eq!(g.commutant_dimension(&[phase]), 9);
        assert_eq!(g.commutant_dimension(&[]), 9);
    }
}
