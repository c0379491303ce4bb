//! Negativity of a (spin-1/2, spin-s) pair, computed three ways.
//!
//! * `negativity_numeric`: spectrum of the partial transpose.
//! * `negativity_su2`: the single-correlator formula for SU(2)-invariant pairs.
//! * `partial_time_reversal`: closed form in the projector onto total spin
//!   `s - 1/2`, which shares its spectrum with the partial transpose.
//!
//! Pairs are always ordered spin-1/2 first; transposes act on the spin-s factor.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::total_s_squared_for;
use crate::spin::{dot_coupling, max_abs, twice_m_of, Basis, DimCap, TwiceSpin};

/// Gate on `||rho - proj(rho)||_max` before the SU(2) fast paths are used.
pub const SU2_GATE: f64 = 1e-6;

const CORRELATOR_SLACK: f64 = 1e-9;

/// Unit-trace, symmetric, positive semidefinite state on `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: DMatrix<f64>,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: DMatrix<f64>) -> Result<Self> {
        let side: usize = dims.iter().product();
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(Error::DimensionMismatch { expected: side, found: matrix.nrows() });
        }
        Ok(DensityMatrix { dims, matrix })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.clone().symmetric_eigenvalues().iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }

    /// `(|tr - 1|, symmetry defect, min eigenvalue)`.
    pub fn health(&self) -> (f64, f64, f64) {
        ((self.trace() - 1.0).abs(), max_abs(&(&self.matrix - self.matrix.transpose())), self.min_eigenvalue())
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        let (dt, asym, min_ev) = self.health();
        dt <= tol && asym <= tol && min_ev >= -1e-9
    }
}

/// Trace out every site not in `keep`; the result is ordered as `keep`.
pub fn reduce(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = &rho.dims;
    for (n, &k) in keep.iter().enumerate() {
        if k >= dims.len() {
            return Err(Error::SiteOutOfRange { site: k, sites: dims.len() });
        }
        if keep[..n].contains(&k) {
            return Err(Error::InvalidChain(format!("site {k} kept twice")));
        }
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let full = Basis::new(dims);
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kept_basis = Basis::new(&kept_dims);
    let traced_basis = Basis::new(&traced_dims);

    // groups[t] = [(kept index, full index)] for traced configuration t
    let mut groups = vec![Vec::with_capacity(kept_basis.size()); traced_basis.size()];
    for i in 0..full.size() {
        let k: usize = keep.iter().enumerate().map(|(n, &s)| full.digit(i, s) * kept_basis.stride(n)).sum();
        let t: usize = traced.iter().enumerate().map(|(n, &s)| full.digit(i, s) * traced_basis.stride(n)).sum();
        groups[t].push((k, i));
    }
    let mut out = DMatrix::zeros(kept_basis.size(), kept_basis.size());
    for group in &groups {
        for &(a, i) in group {
            for &(b, j) in group {
                out[(a, b)] += rho.matrix[(i, j)];
            }
        }
    }
    DensityMatrix::new(kept_dims, out)
}

/// State of one spin-1/2 (first factor) and one spin-s (second factor).
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    state: DensityMatrix,
    big_spin: TwiceSpin,
}

impl PairState {
    pub fn new(big_spin: TwiceSpin, matrix: DMatrix<f64>) -> Result<Self> {
        Ok(PairState { state: DensityMatrix::new(vec![2, big_spin.dim()], matrix)?, big_spin })
    }

    pub fn big_spin(&self) -> TwiceSpin {
        self.big_spin
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.state.matrix
    }

    pub fn side(&self) -> usize {
        2 * self.big_spin.dim()
    }
}

/// Reduced state of one even (spin-1/2) and one odd (spin-s) site.
pub fn partial_trace(rho: &DensityMatrix, keep: (usize, usize), big_spin: TwiceSpin) -> Result<PairState> {
    let (a, b) = keep;
    if a == b || a % 2 == b % 2 {
        return Err(Error::NotMixedPair(a, b));
    }
    let (half, big) = if a % 2 == 0 { (a, b) } else { (b, a) };
    let reduced = reduce(rho, &[half, big])?;
    if reduced.dims != [2, big_spin.dim()] {
        return Err(Error::DimensionMismatch { expected: big_spin.dim(), found: reduced.dims[1] });
    }
    Ok(PairState { state: reduced, big_spin })
}

/// Transpose the indices of the second factor of a `d1 x d2` bipartite matrix.
pub fn partial_transpose_second(m: &DMatrix<f64>, d1: usize, d2: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (a, mu) = (r / d2, r % d2);
        let (b, nu) = (c / d2, c % d2);
        m[(a * d2 + nu, b * d2 + mu)]
    })
}

/// Transpose the indices of the first factor.
pub fn partial_transpose_first(m: &DMatrix<f64>, d1: usize, d2: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (a, mu) = (r / d2, r % d2);
        let (b, nu) = (c / d2, c % d2);
        m[(b * d2 + mu, a * d2 + nu)]
    })
}

pub fn partial_transpose(rho: &PairState) -> DMatrix<f64> {
    partial_transpose_second(rho.matrix(), 2, rho.big_spin.dim())
}

fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityReport {
    pub negativity: f64,
    /// `sum |lambda|` over the partial-transpose spectrum.
    pub trace_norm: f64,
    /// Ascending partial-transpose spectrum.
    pub spectrum: Vec<f64>,
}

impl NegativityReport {
    fn from_spectrum(spectrum: Vec<f64>) -> Self {
        let negativity = -spectrum.iter().filter(|&&x| x < 0.0).sum::<f64>();
        let trace_norm = spectrum.iter().map(|x| x.abs()).sum();
        NegativityReport { negativity: negativity.max(0.0), trace_norm, spectrum }
    }

    /// Eigenvalues below `-threshold`.
    pub fn negative_eigenvalues(&self, threshold: f64) -> Vec<f64> {
        self.spectrum.iter().copied().filter(|&x| x < -threshold).collect()
    }
}

pub fn negativity_numeric(rho: &PairState) -> NegativityReport {
    NegativityReport::from_spectrum(sorted_eigenvalues(&partial_transpose(rho)))
}

/// The exchange operator `s_1 . S_2` on the pair space.
pub fn pair_coupling(big_spin: TwiceSpin) -> DMatrix<f64> {
    dot_coupling(0, 1, &[2, big_spin.dim()], DimCap::default())
        .expect("pair space is far below the dimension cap")
        .into_matrix()
}

/// `<s_1 . S_2>` in the pair state.
pub fn su2_correlator(rho: &PairState) -> f64 {
    (rho.matrix() * pair_coupling(rho.big_spin)).trace()
}

/// `max(0, -(s + 2c) / (2s + 1))`, valid for SU(2)-invariant pairs.
pub fn negativity_su2(correlator: f64, big_spin: TwiceSpin) -> Result<f64> {
    let s = big_spin.value();
    let (min, max) = (-(s + 1.0) / 2.0, s / 2.0);
    if !(correlator >= min - CORRELATOR_SLACK && correlator <= max + CORRELATOR_SLACK) {
        return Err(Error::CorrelatorOutOfRange { value: correlator, min, max });
    }
    Ok((-(s + 2.0 * correlator) / (2.0 * s + 1.0)).max(0.0))
}

/// Orthogonal projectors onto pair total spin `s - 1/2` (`minus`) and `s + 1/2` (`plus`).
#[derive(Debug, Clone)]
pub struct PairProjectors {
    pub minus: DMatrix<f64>,
    pub plus: DMatrix<f64>,
}

/// Built from the eigenvectors of the pair's total `S^2`.
pub fn pair_projectors(big_spin: TwiceSpin) -> PairProjectors {
    let dims = [2, big_spin.dim()];
    let s2 = total_s_squared_for(&dims, DimCap::default())
        .expect("pair space is far below the dimension cap")
        .into_matrix();
    let eig = s2.symmetric_eigen();
    let s = big_spin.value();
    let j_minus = (s - 0.5) * (s + 0.5);
    let n = dims[0] * dims[1];
    let mut minus = DMatrix::zeros(n, n);
    for (k, &ev) in eig.eigenvalues.iter().enumerate() {
        if (ev - j_minus).abs() < 0.5 {
            let v = eig.eigenvectors.column(k);
            minus += v * v.transpose();
        }
    }
    let plus = DMatrix::identity(n, n) - &minus;
    PairProjectors { minus, plus }
}

/// `F = <P_{s-1/2}> = (s - 2c) / (2s + 1)`.
pub fn projector_f(rho: &PairState) -> f64 {
    let s = rho.big_spin.value();
    (s - 2.0 * su2_correlator(rho)) / (2.0 * s + 1.0)
}

/// `F = tr(rho P_{s-1/2})` with the projector built explicitly.
pub fn projector_f_explicit(rho: &PairState) -> f64 {
    (rho.matrix() * pair_projectors(rho.big_spin).minus).trace()
}

/// Distance from `rho` to its projection onto the SU(2)-invariant family
/// `a P_{s-1/2} + b P_{s+1/2}`.
pub fn su2_invariance_defect(rho: &PairState) -> f64 {
    let p = pair_projectors(rho.big_spin);
    let t = rho.big_spin.twice() as f64;
    let a = (rho.matrix() * &p.minus).trace() / t;
    let b = (rho.matrix() * &p.plus).trace() / (t + 2.0);
    max_abs(&(rho.matrix() - (&p.minus * a + &p.plus * b)))
}

/// `rho^{tau_2}` from the projector decomposition; only valid for SU(2)-invariant pairs.
pub fn partial_time_reversal(rho: &PairState) -> Result<DMatrix<f64>> {
    let defect = su2_invariance_defect(rho);
    if defect > SU2_GATE {
        return Err(Error::NotSu2Invariant(defect));
    }
    let s = rho.big_spin.value();
    let p = pair_projectors(rho.big_spin);
    let f = (rho.matrix() * &p.minus).trace();
    let n = rho.side();
    let slope = -(2.0 * s * f + f - s) / (2.0 * s * (s + 1.0));
    let offset = (2.0 * s * f + f + 1.0) / (2.0 * (2.0 * s + 1.0) * (s + 1.0));
    Ok(p.minus * slope + DMatrix::identity(n, n) * offset)
}

/// `exp(-i pi S_y)` for spin `big_spin`; real in the `S_z` basis.
pub fn spin_flip(big_spin: TwiceSpin) -> DMatrix<f64> {
    let t = big_spin.twice() as usize;
    let d = t + 1;
    DMatrix::from_fn(d, d, |r, c| {
        if r + c != t {
            return 0.0;
        }
        // <m'|exp(-i pi S_y)|m> = (-1)^(j - m') delta(m', -m)
        let j_minus_m = (t as i64 - twice_m_of(t, r)) / 2;
        if j_minus_m % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

/// Partial time reversal of any operator on the pair space, applied as the
/// partial transpose followed by the local spin flip on the spin-s factor.
pub fn time_reverse_second(m: &DMatrix<f64>, big_spin: TwiceSpin) -> DMatrix<f64> {
    let flip = DMatrix::<f64>::identity(2, 2).kronecker(&spin_flip(big_spin));
    &flip * partial_transpose_second(m, 2, big_spin.dim()) * flip.transpose()
}

/// Negativity from all three routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeWayNegativity {
    pub partial_transpose: f64,
    pub correlator_formula: f64,
    pub time_reversal: f64,
}

impl ThreeWayNegativity {
    pub fn max_spread(&self) -> f64 {
        let v = [self.partial_transpose, self.correlator_formula, self.time_reversal];
        let hi = v.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let lo = v.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        hi - lo
    }
}

pub fn negativity_three_ways(rho: &PairState) -> Result<ThreeWayNegativity> {
    let tau = partial_time_reversal(rho)?;
    Ok(ThreeWayNegativity {
        partial_transpose: negativity_numeric(rho).negativity,
        correlator_formula: negativity_su2(su2_correlator(rho), rho.big_spin)?,
        time_reversal: NegativityReport::from_spectrum(sorted_eigenvalues(&tau)).negativity,
    })
}

/// Correlator formula when the state passes the SU(2) gate, partial transpose otherwise.
pub fn negativity(rho: &PairState) -> f64 {
    if su2_invariance_defect(rho) <= SU2_GATE {
        if let Ok(n) = negativity_su2(su2_correlator(rho), rho.big_spin) {
            return n;
        }
    }
    negativity_numeric(rho).negativity
}
