use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use super::{reciprocal_residue, CharFunError, CharacteristicFunction, Provenance};
use crate::linalg::{cholesky, dot, eig_general, DenseMatrix, EigenData, LinalgError, Lu};

/// `B₀ ẋ = (A₀ + ε f(t) u vᵀ) x` with `B₀` symmetric positive definite.
#[derive(Clone, Debug)]
pub struct RankOneSystem {
    b0: DenseMatrix,
    a0: DenseMatrix,
    u: Vec<C64>,
    v: Vec<C64>,
}

impl RankOneSystem {
    pub fn new(
        b0: DenseMatrix,
        a0: DenseMatrix,
        u: Vec<C64>,
        v: Vec<C64>,
    ) -> Result<Self, CharFunError> {
        let n = b0.rows();
        if !b0.is_square() || !a0.is_square() || a0.rows() != n || u.len() != n || v.len() != n {
            return Err(CharFunError::InvalidSystem(format!(
                "inconsistent dimensions: B0 {}×{}, A0 {}×{}, u {}, v {}",
                b0.rows(),
                b0.cols(),
                a0.rows(),
                a0.cols(),
                u.len(),
                v.len()
            )));
        }
        if u.iter().all(|z| z.norm() == 0.0) || v.iter().all(|z| z.norm() == 0.0) {
            return Err(CharFunError::InvalidSystem(
                "forcing vectors u and v must be nonzero".into(),
            ));
        }
        if u.iter().chain(&v).any(|z| !z.is_finite()) {
            return Err(CharFunError::Linalg(LinalgError::NonFinite));
        }
        cholesky(&b0)?;
        Ok(RankOneSystem { b0, a0, u, v })
    }

    pub fn order(&self) -> usize {
        self.b0.rows()
    }

    pub fn b0(&self) -> &DenseMatrix {
        &self.b0
    }

    pub fn a0(&self) -> &DenseMatrix {
        &self.a0
    }

    pub fn u(&self) -> &[C64] {
        &self.u
    }

    pub fn v(&self) -> &[C64] {
        &self.v
    }

    /// `A₁ = u vᵀ`.
    pub fn a1(&self) -> DenseMatrix {
        DenseMatrix::outer(&self.u, &self.v)
    }

    fn resolvent(&self, sigma: C64) -> Result<Lu, CharFunError> {
        let m = self
            .b0
            .scale(sigma)
            .add_scaled(&self.a0, C64::new(-1.0, 0.0))?;
        Lu::factor(&m).map_err(|e| match e {
            LinalgError::Singular { .. } => CharFunError::NearEigenvalue { sigma },
            other => other.into(),
        })
    }

    /// `vᵀ(σB₀ − A₀)⁻¹u`, i.e. `−1/f_A(σ)`.
    pub fn transfer(&self, sigma: C64) -> Result<C64, CharFunError> {
        let lu = self.resolvent(sigma)?;
        Ok(dot(&self.v, &lu.solve(&self.u)?))
    }

    /// `f_A(σ) = −1 / (vᵀ(σB₀ − A₀)⁻¹u)`.
    pub fn fa_matrix(&self, sigma: C64) -> Result<C64, CharFunError> {
        let t = self.transfer(sigma)?;
        if t.norm() == 0.0 {
            return Err(CharFunError::AtPole { sigma });
        }
        Ok(-1.0 / t)
    }

    /// `f_A′(σ) = −f_A² vᵀ R B₀ R u` with `R = (σB₀ − A₀)⁻¹`.
    pub fn fa_matrix_derivative(&self, sigma: C64) -> Result<C64, CharFunError> {
        let lu = self.resolvent(sigma)?;
        let x = lu.solve(&self.u)?;
        let t = dot(&self.v, &x);
        if t.norm() == 0.0 {
            return Err(CharFunError::AtPole { sigma });
        }
        let w = lu.solve(&self.b0.matvec(&x)?)?;
        Ok(-dot(&self.v, &w) / (t * t))
    }

    /// `f_A′` at an eigenvalue from the residue of `1/f_A = −vᵀRu`, which is
    /// insensitive to small errors in `sigma`.
    pub fn fa_matrix_derivative_at_root(&self, sigma: C64) -> Result<C64, CharFunError> {
        self.derivative_at_root_within(sigma, f64::INFINITY)
    }

    /// As [`RankOneSystem::fa_matrix_derivative_at_root`], with the contour
    /// kept inside a quarter of `gap`, the distance to the nearest other
    /// eigenvalue.
    pub fn derivative_at_root_within(&self, sigma: C64, gap: f64) -> Result<C64, CharFunError> {
        let scale = self.a0.max_abs() / self.b0.max_abs();
        let radius = (1e-2 * sigma.norm().max(1e-3 * scale))
            .min(0.25 * gap)
            .max(1e-12);
        let res = reciprocal_residue(|z| Ok(-self.transfer(z)?), sigma, radius, 32)?;
        if res.norm() == 0.0 {
            return Err(CharFunError::DegenerateMode {
                sigma,
                derivative: f64::INFINITY,
            });
        }
        Ok(1.0 / res)
    }
}

/// Resolvent-backed characteristic function of a [`RankOneSystem`].
#[derive(Debug)]
pub struct MatrixCharFun {
    sys: RankOneSystem,
    eig: OnceLock<Result<EigenData, LinalgError>>,
}

impl MatrixCharFun {
    pub fn new(sys: RankOneSystem) -> Self {
        MatrixCharFun {
            sys,
            eig: OnceLock::new(),
        }
    }

    pub fn system(&self) -> &RankOneSystem {
        &self.sys
    }

    /// Eigen-decomposition of the unforced pencil, computed once.
    pub fn eigen_data(&self) -> Result<&EigenData, CharFunError> {
        self.eig
            .get_or_init(|| eig_general(&self.sys.a0, &self.sys.b0))
            .as_ref()
            .map_err(|e| e.clone().into())
    }
}

impl CharacteristicFunction for MatrixCharFun {
    fn value(&self, sigma: C64) -> Result<C64, CharFunError> {
        self.sys.fa_matrix(sigma)
    }

    fn derivative(&self, sigma: C64) -> Result<C64, CharFunError> {
        self.sys.fa_matrix_derivative(sigma)
    }

    fn derivative_at_root(&self, sigma: C64) -> Result<C64, CharFunError> {
        let gap = match self.eigen_data() {
            Ok(eig) => eig
                .sigma
                .iter()
                .map(|s| (s - sigma).norm())
                .filter(|&d| d > 1e-8 * (1.0 + sigma.norm()))
                .fold(f64::INFINITY, f64::min),
            Err(_) => f64::INFINITY,
        };
        self.sys.derivative_at_root_within(sigma, gap)
    }

    fn eigenvalues(&self, count: usize) -> Result<Vec<C64>, CharFunError> {
        let eig = self.eigen_data()?;
        if count > eig.order() {
            return Err(CharFunError::SeedExhausted {
                found: eig.order(),
                wanted: count,
            });
        }
        Ok(eig.sigma[..count].to_vec())
    }

    fn spectrum_size(&self) -> Option<usize> {
        Some(self.sys.order())
    }

    fn provenance(&self) -> Provenance {
        Provenance::Matrix
    }
}
