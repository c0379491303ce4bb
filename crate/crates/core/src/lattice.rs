//! The alternating spin-1/2 / spin-s Heisenberg chain and its symmetry operators.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{add_dot_coupling, twice_m_of, Basis, DimCap, HermitianOperator, TwiceSpin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Ring,
    Open,
    /// One bond between the two sites of a single cell.
    SingleBond,
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ring" => Ok(Boundary::Ring),
            "open" => Ok(Boundary::Open),
            "single-bond" => Ok(Boundary::SingleBond),
            other => Err(Error::InvalidChain(format!("unknown boundary '{other}'"))),
        }
    }
}

/// Chain of `cells` unit cells, each a spin-1/2 followed by a spin-s.
///
/// Site 0 is always spin-1/2. A ring needs at least two cells; the one-cell
/// system is the single bond `J s.S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub cells: usize,
    pub big_spin: TwiceSpin,
    pub coupling: f64,
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn new(cells: usize, big_spin: TwiceSpin, coupling: f64, boundary: Boundary) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidChain("at least one cell is required".into()));
        }
        if !coupling.is_finite() {
            return Err(Error::InvalidChain(format!("coupling must be finite, got {coupling}")));
        }
        match boundary {
            Boundary::SingleBond if cells != 1 => {
                return Err(Error::InvalidChain(format!("single-bond needs exactly one cell, got {cells}")))
            }
            Boundary::Ring if cells == 1 => {
                return Err(Error::InvalidChain("a one-cell ring would double the bond; use single-bond".into()))
            }
            _ => {}
        }
        Ok(ChainSpec { cells, big_spin, coupling, boundary })
    }

    /// The two-site model `H = J s.S`.
    pub fn two_site(big_spin: TwiceSpin, coupling: f64) -> Result<Self> {
        Self::new(1, big_spin, coupling, Boundary::SingleBond)
    }

    /// `cells` cells on a ring (single bond when `cells == 1`) with `J = 1`.
    pub fn ring_or_pair(cells: usize, big_spin: TwiceSpin) -> Result<Self> {
        let boundary = if cells == 1 { Boundary::SingleBond } else { Boundary::Ring };
        Self::new(cells, big_spin, 1.0, boundary)
    }

    pub fn sites(&self) -> usize {
        2 * self.cells
    }

    pub fn site_spin(&self, site: usize) -> TwiceSpin {
        if site.is_multiple_of(2) {
            TwiceSpin::HALF
        } else {
            self.big_spin
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.sites()).map(|i| self.site_spin(i).dim()).collect()
    }

    /// Hilbert-space dimension, saturating on overflow.
    pub fn dimension(&self) -> u128 {
        self.dims().iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let l = self.sites();
        match self.boundary {
            Boundary::SingleBond => vec![(0, 1)],
            Boundary::Open => (0..l - 1).map(|i| (i, i + 1)).collect(),
            Boundary::Ring => (0..l).map(|i| (i, (i + 1) % l)).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LatticeHamiltonian {
    pub spec: ChainSpec,
    pub matrix: HermitianOperator,
    pub bonds: Vec<(usize, usize)>,
}

pub fn build_hamiltonian(spec: &ChainSpec, cap: DimCap) -> Result<LatticeHamiltonian> {
    let dims = spec.dims();
    let side = cap.check(&dims)?;
    let bonds = spec.bonds();
    let mut matrix = DMatrix::zeros(side, side);
    for &(a, b) in &bonds {
        add_dot_coupling(&mut matrix, a, b, &dims, spec.coupling)?;
    }
    Ok(LatticeHamiltonian { spec: *spec, matrix: HermitianOperator::new(dims, matrix)?, bonds })
}

fn twice_total_m(basis: &Basis, dims: &[usize], index: usize) -> i64 {
    (0..dims.len()).map(|s| twice_m_of(dims[s] - 1, basis.digit(index, s))).sum()
}

pub fn total_sz(spec: &ChainSpec, cap: DimCap) -> Result<HermitianOperator> {
    let dims = spec.dims();
    let side = cap.check(&dims)?;
    let basis = Basis::new(&dims);
    let diag = nalgebra::DVector::from_fn(side, |i, _| twice_total_m(&basis, &dims, i) as f64 / 2.0);
    HermitianOperator::new(dims, DMatrix::from_diagonal(&diag))
}

/// `S_tot^2 = sum_i s_i(s_i+1) + 2 sum_{i<k} S_i.S_k`.
pub fn total_s_squared(spec: &ChainSpec, cap: DimCap) -> Result<HermitianOperator> {
    total_s_squared_for(&spec.dims(), cap)
}

pub(crate) fn total_s_squared_for(dims: &[usize], cap: DimCap) -> Result<HermitianOperator> {
    let side = cap.check(dims)?;
    let casimirs: f64 = dims.iter().map(|&d| ((d - 1) * (d + 1)) as f64 / 4.0).sum();
    let mut matrix = DMatrix::identity(side, side) * casimirs;
    for a in 0..dims.len() {
        for b in a + 1..dims.len() {
            add_dot_coupling(&mut matrix, a, b, dims, 2.0)?;
        }
    }
    HermitianOperator::new(dims.to_vec(), matrix)
}

/// Basis indices sharing one total-`S_z` eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    pub twice_m: i64,
    pub indices: Vec<usize>,
}

/// Partition of the basis by total magnetization, largest `M` first.
pub fn magnetization_sectors(spec: &ChainSpec) -> Vec<Sector> {
    sectors_for(&spec.dims())
}

pub(crate) fn sectors_for(dims: &[usize]) -> Vec<Sector> {
    let basis = Basis::new(dims);
    let mut by_m = std::collections::BTreeMap::<i64, Vec<usize>>::new();
    for i in 0..basis.size() {
        by_m.entry(twice_total_m(&basis, dims, i)).or_default().push(i);
    }
    by_m.into_iter().rev().map(|(twice_m, indices)| Sector { twice_m, indices }).collect()
}

/// Image of every basis index under translation of the chain by one unit cell.
pub fn cell_translation(spec: &ChainSpec) -> Vec<usize> {
    let dims = spec.dims();
    let basis = Basis::new(&dims);
    let l = dims.len();
    (0..basis.size())
        .map(|i| (0..l).map(|s| basis.digit(i, s) * basis.stride((s + 2) % l)).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::max_abs;

    fn spin(t: u32) -> TwiceSpin {
        TwiceSpin::new(t).unwrap()
    }

    fn sorted_eigs(m: &DMatrix<f64>) -> Vec<f64> {
        let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn chain_validation() {
        assert!(ChainSpec::new(0, spin(1), 1.0, Boundary::Ring).is_err());
        assert!(ChainSpec::new(2, spin(1), 1.0, Boundary::SingleBond).is_err());
        assert!(ChainSpec::new(1, spin(1), 1.0, Boundary::Ring).is_err());
        assert!(ChainSpec::new(1, spin(1), 1.0, Boundary::Open).is_ok());
        assert_eq!("single-bond".parse::<Boundary>().unwrap(), Boundary::SingleBond);
        assert!("periodic".parse::<Boundary>().is_err());
    }

    #[test]
    fn bond_counts() {
        let ring = ChainSpec::new(3, spin(2), 1.0, Boundary::Ring).unwrap();
        assert_eq!(ring.bonds().len(), 6);
        assert_eq!(ring.bonds()[5], (5, 0));
        let open = ChainSpec::new(3, spin(2), 1.0, Boundary::Open).unwrap();
        assert_eq!(open.bonds().len(), 5);
        assert_eq!(ChainSpec::two_site(spin(2), 1.0).unwrap().bonds(), vec![(0, 1)]);
        assert_eq!(ring.dims(), vec![2, 3, 2, 3, 2, 3]);
    }

    #[test]
    fn two_site_spectrum_is_exact() {
        for t in 1..=10 {
            let s = f64::from(t) / 2.0;
            let h = build_hamiltonian(&ChainSpec::two_site(spin(t), 1.0).unwrap(), DimCap::default()).unwrap();
            let ev = sorted_eigs(h.matrix.matrix());
            assert_eq!(ev.len(), 2 * (t as usize + 1));
            for (k, e) in ev.iter().enumerate() {
                let want = if k < t as usize { -(s + 1.0) / 2.0 } else { s / 2.0 };
                assert!((e - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hamiltonian_is_traceless_and_symmetric() {
        for (cells, t, b) in [(2, 1, Boundary::Ring), (2, 3, Boundary::Open), (3, 2, Boundary::Ring)] {
            let h = build_hamiltonian(&ChainSpec::new(cells, spin(t), 1.3, b).unwrap(), DimCap::default()).unwrap();
            assert!(h.matrix.trace().abs() < 1e-10);
            assert_eq!(h.matrix.symmetry_defect(), 0.0);
        }
    }

    #[test]
    fn hamiltonian_respects_cap() {
        let spec = ChainSpec::new(3, spin(4), 1.0, Boundary::Ring).unwrap();
        assert!(matches!(build_hamiltonian(&spec, DimCap(100)), Err(Error::DimensionCap { required: 1000, cap: 100 })));
    }

    #[test]
    fn su2_symmetry() {
        let cap = DimCap::default();
        for (cells, t) in [(1, 3), (2, 1), (2, 2), (2, 3)] {
            let spec = ChainSpec::ring_or_pair(cells, spin(t)).unwrap();
            let h = build_hamiltonian(&spec, cap).unwrap();
            assert!(h.matrix.commutator_norm(&total_sz(&spec, cap).unwrap()) < 1e-10);
            assert!(h.matrix.commutator_norm(&total_s_squared(&spec, cap).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn pair_total_spin_levels() {
        for t in 1..=6 {
            let spec = ChainSpec::two_site(spin(t), 1.0).unwrap();
            let s = f64::from(t) / 2.0;
            let ev = sorted_eigs(total_s_squared(&spec, DimCap::default()).unwrap().matrix());
            let lo = (s - 0.5) * (s + 0.5);
            let hi = (s + 0.5) * (s + 1.5);
            for (k, e) in ev.iter().enumerate() {
                let want = if k < t as usize { lo } else { hi };
                assert!((e - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn total_sz_spectrum_is_a_ladder() {
        let spec = ChainSpec::new(2, spin(3), 1.0, Boundary::Ring).unwrap();
        let sz = total_sz(&spec, DimCap::default()).unwrap();
        for v in sz.matrix().diagonal().iter() {
            assert_eq!((2.0 * v).fract(), 0.0);
        }
        let sectors = magnetization_sectors(&spec);
        for w in sectors.windows(2) {
            assert_eq!(w[0].twice_m - w[1].twice_m, 2);
        }
    }

    #[test]
    fn sectors_partition_and_block_hamiltonian() {
        let two = ChainSpec::two_site(spin(1), 1.0).unwrap();
        let sizes: Vec<(i64, usize)> = magnetization_sectors(&two).iter().map(|s| (s.twice_m, s.indices.len())).collect();
        assert_eq!(sizes, vec![(2, 1), (0, 2), (-2, 1)]);

        let spec = ChainSpec::new(2, spin(2), 1.0, Boundary::Ring).unwrap();
        let sectors = magnetization_sectors(&spec);
        let total: usize = sectors.iter().map(|s| s.indices.len()).sum();
        assert_eq!(total as u128, spec.dimension());
        let h = build_hamiltonian(&spec, DimCap::default()).unwrap();
        let mut label = vec![0i64; total];
        for s in &sectors {
            for &i in &s.indices {
                label[i] = s.twice_m;
            }
        }
        let mut cross = 0.0f64;
        for i in 0..total {
            for j in 0..total {
                if label[i] != label[j] {
                    cross = cross.max(h.matrix.matrix()[(i, j)].abs());
                }
            }
        }
        assert_eq!(cross, 0.0);
    }

    #[test]
    fn ring_is_translation_invariant() {
        for (cells, t) in [(2, 1), (2, 3), (3, 2)] {
            let spec = ChainSpec::ring_or_pair(cells, spin(t)).unwrap();
            let h = build_hamiltonian(&spec, DimCap::default()).unwrap();
            let perm = cell_translation(&spec);
            let m = h.matrix.matrix();
            let permuted = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(perm[i], perm[j])]);
            assert!(max_abs(&(permuted - m)) < 1e-12);
        }
    }
}
