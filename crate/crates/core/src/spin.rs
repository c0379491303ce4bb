//! Spin-j matrices, tensor products and site embeddings.
//!
//! Basis convention: each site is ordered `m = j, j-1, ..., -j`; multi-site
//! bases are row-major over sites, site 0 being the slowest index. Serialized
//! matrices are therefore reproducible bit-for-bit.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the side of any constructed operator.
pub const DEFAULT_DIM_CAP: usize = 20_000;

/// A spin value stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct TwiceSpin(u32);

impl TwiceSpin {
    pub const HALF: TwiceSpin = TwiceSpin(1);

    pub fn new(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::ZeroSpin);
        }
        Ok(TwiceSpin(twice_j))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    /// Local Hilbert space dimension `2j + 1`.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// `j` as a float, for use inside formulas.
    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// `j (j + 1)`.
    pub fn casimir(self) -> f64 {
        let t = f64::from(self.0);
        t * (t + 2.0) / 4.0
    }
}

impl TryFrom<u32> for TwiceSpin {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        TwiceSpin::new(v)
    }
}

impl From<TwiceSpin> for u32 {
    fn from(s: TwiceSpin) -> u32 {
        s.0
    }
}

impl std::fmt::Display for TwiceSpin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Upper bound on operator sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimCap(pub usize);

impl Default for DimCap {
    fn default() -> Self {
        DimCap(DEFAULT_DIM_CAP)
    }
}

impl DimCap {
    /// Product of `dims`, or an error when it exceeds the cap.
    pub fn check(self, dims: &[usize]) -> Result<usize> {
        let required = dims.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128));
        if required > self.0 as u128 {
            return Err(Error::DimensionCap { required, cap: self.0 });
        }
        Ok(required as usize)
    }
}

/// A real-symmetric operator on a tensor product of local spaces.
///
/// Every operator this crate diagonalizes is real in the `S_z` / ladder
/// basis, so entries are stored as `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dims: Vec<usize>,
    matrix: DMatrix<f64>,
}

impl HermitianOperator {
    pub fn new(dims: Vec<usize>, matrix: DMatrix<f64>) -> Result<Self> {
        let side: usize = dims.iter().product();
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(Error::DimensionMismatch { expected: side, found: matrix.nrows() });
        }
        Ok(HermitianOperator { dims, matrix })
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let side = dims.iter().product();
        HermitianOperator { dims, matrix: DMatrix::identity(side, side) }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn side(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Largest `|A[a,b] - A[b,a]|`.
    pub fn symmetry_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.transpose()))
    }

    /// Largest entry of `|AB - BA|`.
    pub fn commutator_norm(&self, other: &HermitianOperator) -> f64 {
        commutator_norm(&self.matrix, &other.matrix)
    }
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub(crate) fn commutator_norm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    max_abs(&(a * b - b * a))
}

/// The spin-j irrep in the `S_z` eigenbasis.
#[derive(Debug, Clone)]
pub struct SpinTriple {
    pub spin: TwiceSpin,
    pub sx: HermitianOperator,
    /// `S_y` is purely imaginary in this basis; kept for algebra checks only.
    pub sy: DMatrix<Complex<f64>>,
    pub sz: HermitianOperator,
    pub s_plus: DMatrix<f64>,
    pub s_minus: DMatrix<f64>,
}

/// `<m+1| S+ |m>` with both `j` and `m` passed doubled.
pub(crate) fn ladder_element(twice_j: i64, twice_m: i64) -> f64 {
    (((twice_j * (twice_j + 2)) - twice_m * (twice_m + 2)) as f64 / 4.0).sqrt()
}

/// Doubled `m` of basis index `k` for a site of spin `twice_j / 2`.
pub(crate) fn twice_m_of(twice_j: usize, k: usize) -> i64 {
    twice_j as i64 - 2 * k as i64
}

pub fn spin_matrices(j: TwiceSpin) -> SpinTriple {
    let tj = j.twice() as usize;
    let d = j.dim();
    let mut sz = DMatrix::zeros(d, d);
    let mut s_plus = DMatrix::zeros(d, d);
    for k in 0..d {
        let tm = twice_m_of(tj, k);
        sz[(k, k)] = tm as f64 / 2.0;
        if k > 0 {
            s_plus[(k - 1, k)] = ladder_element(tj as i64, tm);
        }
    }
    let s_minus = s_plus.transpose();
    let sx = (&s_plus + &s_minus) * 0.5;
    let half_i = Complex::new(0.0, -0.5);
    let sy = (&s_plus - &s_minus).map(|x| Complex::new(x, 0.0) * half_i);
    SpinTriple {
        spin: j,
        sx: HermitianOperator { dims: vec![d], matrix: sx },
        sy,
        sz: HermitianOperator { dims: vec![d], matrix: sz },
        s_plus,
        s_minus,
    }
}

pub fn tensor_product(a: &HermitianOperator, b: &HermitianOperator, cap: DimCap) -> Result<HermitianOperator> {
    let dims: Vec<usize> = a.dims.iter().chain(&b.dims).copied().collect();
    cap.check(&dims)?;
    Ok(HermitianOperator { dims, matrix: a.matrix.kronecker(&b.matrix) })
}

/// Place a single-site operator on `site`, identity elsewhere.
pub fn embed(op: &HermitianOperator, site: usize, dims: &[usize], cap: DimCap) -> Result<HermitianOperator> {
    if site >= dims.len() {
        return Err(Error::SiteOutOfRange { site, sites: dims.len() });
    }
    if op.dims.len() != 1 || op.side() != dims[site] {
        return Err(Error::DimensionMismatch { expected: dims[site], found: op.side() });
    }
    cap.check(dims)?;
    let left: usize = dims[..site].iter().product();
    let right: usize = dims[site + 1..].iter().product();
    let matrix = DMatrix::<f64>::identity(left, left)
        .kronecker(&op.matrix)
        .kronecker(&DMatrix::<f64>::identity(right, right));
    Ok(HermitianOperator { dims: dims.to_vec(), matrix })
}

/// Mixed-radix indexing over a list of local dimensions.
#[derive(Debug, Clone)]
pub(crate) struct Basis {
    dims: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl Basis {
    pub(crate) fn new(dims: &[usize]) -> Self {
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        Basis { dims: dims.to_vec(), strides, size: dims.iter().product() }
    }

    pub(crate) fn size(&self) -> usize {
        self.size
    }

    pub(crate) fn stride(&self, site: usize) -> usize {
        self.strides[site]
    }

    pub(crate) fn digit(&self, index: usize, site: usize) -> usize {
        (index / self.strides[site]) % self.dims[site]
    }
}

/// `S_a . S_b` assembled as `(S+S- + S-S+)/2 + SzSz` directly on basis states.
pub fn dot_coupling(site_a: usize, site_b: usize, dims: &[usize], cap: DimCap) -> Result<HermitianOperator> {
    let side = cap.check(dims)?;
    let mut matrix = DMatrix::zeros(side, side);
    add_dot_coupling(&mut matrix, site_a, site_b, dims, 1.0)?;
    Ok(HermitianOperator { dims: dims.to_vec(), matrix })
}

pub(crate) fn add_dot_coupling(
    matrix: &mut DMatrix<f64>,
    site_a: usize,
    site_b: usize,
    dims: &[usize],
    scale: f64,
) -> Result<()> {
    for &site in &[site_a, site_b] {
        if site >= dims.len() {
            return Err(Error::SiteOutOfRange { site, sites: dims.len() });
        }
    }
    if site_a == site_b {
        return Err(Error::SelfBond(site_a));
    }
    let basis = Basis::new(dims);
    let (ta, tb) = (dims[site_a] - 1, dims[site_b] - 1);
    let (stride_a, stride_b) = (basis.stride(site_a), basis.stride(site_b));
    for col in 0..basis.size() {
        let ka = basis.digit(col, site_a);
        let kb = basis.digit(col, site_b);
        let (ma, mb) = (twice_m_of(ta, ka), twice_m_of(tb, kb));
        matrix[(col, col)] += scale * (ma * mb) as f64 / 4.0;
        // S+_a S-_b: raise a (k -> k-1), lower b (k -> k+1)
        if ka > 0 && kb + 1 < dims[site_b] {
            let row = col - stride_a + stride_b;
            let amp = ladder_element(ta as i64, ma) * ladder_element(tb as i64, mb - 2);
            matrix[(row, col)] += scale * 0.5 * amp;
        }
        if kb > 0 && ka + 1 < dims[site_a] {
            let row = col + stride_a - stride_b;
            let amp = ladder_element(tb as i64, mb) * ladder_element(ta as i64, ma - 2);
            matrix[(row, col)] += scale * 0.5 * amp;
        }
    }
    Ok(())
}
