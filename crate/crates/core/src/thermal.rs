//! Diagonalize once, then evaluate Boltzmann ensembles at any temperature.
//!
//! Boltzmann weights always use exponents shifted by the ground energy, so
//! `beta` in the thousands stays finite.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::entanglement::DensityMatrix;
use crate::error::{Error, Result};
use crate::lattice::{magnetization_sectors, LatticeHamiltonian, Sector};
use crate::spin::{DimCap, HermitianOperator};

/// Absolute tolerance for grouping eigenvalues into one level.
pub const DEGENERACY_TOL: f64 = 1e-9;

const MAX_SWEEPS_PER_ROW: usize = 1_000;

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: DMatrix<f64>,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalEnsemble {
    pub beta: f64,
    pub weights: Vec<f64>,
    pub log_z: f64,
}

fn eigen(m: DMatrix<f64>, sector: Option<i64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let n = m.nrows();
    SymmetricEigen::try_new(m, f64::EPSILON, MAX_SWEEPS_PER_ROW * n.max(1))
        .ok_or(Error::EigenNonConvergence { sector })
}

fn sorted(eigenvalues: Vec<f64>, eigenvectors: DMatrix<f64>, dims: Vec<usize>) -> SpectralDecomposition {
    let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]).then(a.cmp(&b)));
    SpectralDecomposition {
        eigenvalues: order.iter().map(|&k| eigenvalues[k]).collect(),
        eigenvectors: eigenvectors.select_columns(&order),
        dims,
    }
}

/// Full dense diagonalization with no symmetry blocking.
pub fn decompose_dense(op: &HermitianOperator) -> Result<SpectralDecomposition> {
    let eig = eigen(op.matrix().clone(), None)?;
    Ok(sorted(eig.eigenvalues.iter().copied().collect(), eig.eigenvectors, op.dims().to_vec()))
}

/// Diagonalize `op` block by block; `op` must not couple different sectors.
pub fn decompose_blocked(op: &HermitianOperator, sectors: &[Sector]) -> Result<SpectralDecomposition> {
    let n = op.side();
    let m = op.matrix();
    let mut values = Vec::with_capacity(n);
    let mut vectors = DMatrix::zeros(n, n);
    let mut col = 0;
    for sector in sectors {
        let idx = &sector.indices;
        let block = DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])]);
        let eig = eigen(block, Some(sector.twice_m))?;
        for k in 0..idx.len() {
            values.push(eig.eigenvalues[k]);
            for (a, &row) in idx.iter().enumerate() {
                vectors[(row, col)] = eig.eigenvectors[(a, k)];
            }
            col += 1;
        }
    }
    if col != n {
        return Err(Error::DimensionMismatch { expected: n, found: col });
    }
    Ok(sorted(values, vectors, op.dims().to_vec()))
}

/// Spectrum of a chain Hamiltonian, blocked by total `S_z`.
pub fn decompose(h: &LatticeHamiltonian) -> Result<SpectralDecomposition> {
    decompose_blocked(&h.matrix, &magnetization_sectors(&h.spec))
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Number of states within `DEGENERACY_TOL` of the ground energy.
    pub fn ground_degeneracy(&self) -> usize {
        let e0 = self.ground_energy();
        self.eigenvalues.iter().take_while(|&&e| e - e0 <= DEGENERACY_TOL).count()
    }

    /// `<v_i| op |v_i>` for every eigenvector.
    pub fn diagonal_elements(&self, op: &HermitianOperator) -> Result<Vec<f64>> {
        if op.side() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: op.side() });
        }
        let applied = op.matrix() * &self.eigenvectors;
        Ok((0..self.dim()).map(|i| self.eigenvectors.column(i).dot(&applied.column(i))).collect())
    }
}

/// Boltzmann ensemble at temperature `temperature` (`f64::INFINITY` means `beta = 0`).
pub fn ensemble(spec: &SpectralDecomposition, temperature: f64) -> Result<ThermalEnsemble> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    Ok(ensemble_at_beta(spec, 1.0 / temperature))
}

/// Same as [`ensemble`], parameterized by `beta >= 0`.
pub fn ensemble_at_beta(spec: &SpectralDecomposition, beta: f64) -> ThermalEnsemble {
    let e_min = spec.ground_energy();
    let mut weights: Vec<f64> = spec.eigenvalues.iter().map(|e| (-beta * (e - e_min)).exp()).collect();
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= sum);
    ThermalEnsemble { beta, weights, log_z: sum.ln() - beta * e_min }
}

/// Uniform mixture over the degenerate ground level.
pub fn ground_state_ensemble(spec: &SpectralDecomposition) -> ThermalEnsemble {
    let g = spec.ground_degeneracy();
    let weights = (0..spec.dim()).map(|i| if i < g { 1.0 / g as f64 } else { 0.0 }).collect();
    ThermalEnsemble { beta: f64::INFINITY, weights, log_z: f64::NAN }
}

impl ThermalEnsemble {
    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn partition_function(&self) -> f64 {
        self.log_z.exp()
    }
}

/// `sum_i w_i <v_i| op |v_i>`. Real storage makes the result exactly real.
pub fn thermal_expectation(spec: &SpectralDecomposition, ens: &ThermalEnsemble, op: &HermitianOperator) -> Result<f64> {
    if op.side() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: op.side() });
    }
    let mut acc = 0.0;
    for (i, &w) in ens.weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = spec.eigenvectors.column(i);
        acc += w * v.dot(&(op.matrix() * v));
    }
    Ok(acc)
}

pub fn thermal_density_matrix(spec: &SpectralDecomposition, ens: &ThermalEnsemble, cap: DimCap) -> Result<DensityMatrix> {
    cap.check(&spec.dims)?;
    let w = DVector::from_column_slice(&ens.weights);
    let scaled = DMatrix::from_fn(spec.dim(), spec.dim(), |r, c| spec.eigenvectors[(r, c)] * w[c]);
    let rho = scaled * spec.eigenvectors.transpose();
    let rho = (&rho + rho.transpose()) * 0.5;
    DensityMatrix::new(spec.dims.clone(), rho)
}
