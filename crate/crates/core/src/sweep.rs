//! Temperature sweeps, threshold bisection and figure-data serialization.
//!
//! A sweep diagonalizes each `(s, L)` Hamiltonian once and evaluates every
//! temperature against that shared decomposition. Grid points are independent,
//! so with the `parallel` feature they run on the current rayon pool; results
//! are collected in grid order, making output independent of thread count.

use std::time::Instant;

use nalgebra::DMatrix;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::TwoSiteAnalytics;
use crate::entanglement::{negativity_numeric, PairState};
use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, Boundary, ChainSpec};
use crate::spin::{DimCap, HermitianOperator, TwiceSpin};
use crate::thermal::{decompose, ensemble_at_beta, ground_state_ensemble, SpectralDecomposition, ThermalEnsemble};

pub const CSV_HEADER: &str = "twice_s,temperature,correlator,negativity,method";

/// Above this many stored floats, per-eigenvector pair blocks are rebuilt per temperature.
const PAIR_BLOCK_BUDGET: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Numeric,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Method::Analytic),
            "numeric" => Ok(Method::Numeric),
            "both" => Ok(Method::Both),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Numeric => "numeric",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidConfig(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub twice_s_list: Vec<TwiceSpin>,
    pub cells: usize,
    pub boundary: Boundary,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub method: Method,
    pub format: OutputFormat,
    pub coupling: f64,
    pub dim_cap: DimCap,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            twice_s_list: vec![TwiceSpin::HALF],
            cells: 1,
            boundary: Boundary::SingleBond,
            t_min: 0.05,
            t_max: 3.0,
            t_steps: 60,
            method: Method::Numeric,
            format: OutputFormat::Csv,
            coupling: 1.0,
            dim_cap: DimCap::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.twice_s_list.is_empty() {
            return bad("no spin values given".into());
        }
        if !(self.t_min > 0.0 && self.t_min.is_finite()) {
            return bad(format!("t_min must be positive, got {}", self.t_min));
        }
        if !(self.t_max > self.t_min && self.t_max.is_finite()) {
            return bad(format!("t_max must exceed t_min, got [{}, {}]", self.t_min, self.t_max));
        }
        if self.t_steps < 2 {
            return bad(format!("t_steps must be at least 2, got {}", self.t_steps));
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return bad(format!("coupling must be positive, got {}", self.coupling));
        }
        if self.method != Method::Numeric && self.cells != 1 {
            return bad(format!("method '{}' needs cells = 1", self.method.as_str()));
        }
        for &s in &self.twice_s_list {
            ChainSpec::new(self.cells, s, self.coupling, self.boundary).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        }
        Ok(())
    }

    /// Linear grid from `t_min` to `t_max` inclusive.
    pub fn temperatures(&self) -> Vec<f64> {
        let n = self.t_steps;
        let step = (self.t_max - self.t_min) / (n - 1) as f64;
        (0..n).map(|k| if k + 1 == n { self.t_max } else { self.t_min + step * k as f64 }).collect()
    }

    fn chain(&self, s: TwiceSpin) -> Result<ChainSpec> {
        ChainSpec::new(self.cells, s, self.coupling, self.boundary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointValues {
    pub correlator: f64,
    pub negativity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub twice_s: u32,
    pub temperature: f64,
    pub correlator: f64,
    pub negativity: f64,
    pub method: Method,
    /// Closed-form values when `method` is `both`; the main fields hold the numeric ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<PointValues>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_diff: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEntry {
    pub twice_s: u32,
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub tool: String,
    pub version: String,
    pub config: SweepConfig,
    /// Closed-form thresholds, present for single-cell sweeps.
    #[serde(default)]
    pub thresholds: Vec<ThresholdEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_abs_diff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metadata: SweepMetadata,
    pub records: Vec<Record>,
}

/// Thermal data for the `(0, 1)` pair of one chain, reused across temperatures.
#[derive(Debug, Clone)]
pub struct PairThermalModel {
    pub spec: ChainSpec,
    pub spectrum: SpectralDecomposition,
    /// `<v_i| s_0 . S_1 |v_i>` per eigenvector.
    bond_diag: Vec<f64>,
    /// Reduced `(0, 1)` state of each eigenvector, when it fits the budget.
    pair_blocks: Option<Vec<DMatrix<f64>>>,
}

impl PairThermalModel {
    pub fn new(spec: &ChainSpec, cap: DimCap) -> Result<Self> {
        let h = build_hamiltonian(spec, cap)?;
        let spectrum = decompose(&h)?;
        let bond = crate::spin::dot_coupling(0, 1, &spec.dims(), cap)?;
        let bond_diag = spectrum.diagonal_elements(&bond)?;
        let pd = 2 * spec.big_spin.dim();
        let pair_blocks = (spectrum.dim() * pd * pd <= PAIR_BLOCK_BUDGET)
            .then(|| (0..spectrum.dim()).map(|i| pure_pair_block(&spectrum, i, pd)).collect());
        Ok(PairThermalModel { spec: *spec, spectrum, bond_diag, pair_blocks })
    }

    pub fn ensemble(&self, temperature: f64) -> Result<ThermalEnsemble> {
        crate::thermal::ensemble(&self.spectrum, temperature)
    }

    pub fn ground_ensemble(&self) -> ThermalEnsemble {
        ground_state_ensemble(&self.spectrum)
    }

    pub fn correlator(&self, ens: &ThermalEnsemble) -> f64 {
        ens.weights.iter().zip(&self.bond_diag).map(|(w, b)| w * b).sum()
    }

    pub fn pair_state(&self, ens: &ThermalEnsemble) -> PairState {
        let pd = 2 * self.spec.big_spin.dim();
        let mut rho = DMatrix::zeros(pd, pd);
        for (i, &w) in ens.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            match &self.pair_blocks {
                Some(blocks) => rho += &blocks[i] * w,
                None => rho += pure_pair_block(&self.spectrum, i, pd) * w,
            }
        }
        PairState::new(self.spec.big_spin, rho).expect("pair block side matches the pair space")
    }

    /// Correlator and partial-transpose negativity of the `(0, 1)` pair.
    pub fn evaluate(&self, ens: &ThermalEnsemble) -> PointValues {
        PointValues { correlator: self.correlator(ens), negativity: negativity_numeric(&self.pair_state(ens)).negativity }
    }

    /// `-(s + 2c) / (2s + 1)`: positive exactly when the pair is entangled.
    pub fn entanglement_margin(&self, temperature: f64) -> Result<f64> {
        let s = self.spec.big_spin.value();
        let c = self.correlator(&self.ensemble(temperature)?);
        Ok(-(s + 2.0 * c) / (2.0 * s + 1.0))
    }
}

/// Sites 0 and 1 are the slowest indices, so eigenvector `i` reshapes to a
/// `pd x rest` matrix `M` and its reduced pair state is `M M^T`.
fn pure_pair_block(spec: &SpectralDecomposition, i: usize, pd: usize) -> DMatrix<f64> {
    let v = spec.eigenvectors.column(i);
    let rest = spec.dim() / pd;
    let m = DMatrix::from_fn(pd, rest, |p, r| v[p * rest + r]);
    &m * m.transpose()
}

fn analytic_point(s: TwiceSpin, coupling: f64, temperature: f64) -> PointValues {
    let a = TwoSiteAnalytics { s, coupling };
    let beta = 1.0 / temperature;
    PointValues { correlator: a.correlator(beta), negativity: a.thermal_negativity(beta) }
}

fn map_points<F>(temps: &[f64], f: F) -> Vec<Record>
where
    F: Fn(f64) -> Record + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        temps.par_iter().map(|&t| f(t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        temps.iter().map(|&t| f(t)).collect()
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    let start = Instant::now();
    cfg.validate()?;
    let mut spins = cfg.twice_s_list.clone();
    spins.sort();
    spins.dedup();
    for &s in &spins {
        cfg.dim_cap.check(&cfg.chain(s)?.dims())?;
    }
    let temps = cfg.temperatures();
    let mut records = Vec::with_capacity(spins.len() * temps.len());
    for &s in &spins {
        let model = match cfg.method {
            Method::Analytic => None,
            _ => Some(PairThermalModel::new(&cfg.chain(s)?, cfg.dim_cap)?),
        };
        let point = |t: f64| -> Record {
            let analytic = (cfg.method != Method::Numeric).then(|| analytic_point(s, cfg.coupling, t));
            let numeric = model.as_ref().map(|m| m.evaluate(&ensemble_at_beta(&m.spectrum, 1.0 / t)));
            let main = numeric.or(analytic).expect("one of the two methods always runs");
            let both = cfg.method == Method::Both;
            Record {
                twice_s: s.twice(),
                temperature: t,
                correlator: main.correlator,
                negativity: main.negativity.max(0.0),
                method: cfg.method,
                analytic: if both { analytic } else { None },
                abs_diff: match (both, analytic) {
                    (true, Some(a)) => Some((a.negativity - main.negativity).abs()),
                    _ => None,
                },
            }
        };
        records.extend(map_points(&temps, point));
    }
    let max_abs_diff = records.iter().filter_map(|r| r.abs_diff).reduce(f64::max);
    let thresholds = if cfg.cells == 1 {
        spins
            .iter()
            .map(|&s| ThresholdEntry {
                twice_s: s.twice(),
                temperature: TwoSiteAnalytics { s, coupling: cfg.coupling }.threshold_temperature(),
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(SweepResult {
        metadata: SweepMetadata {
            tool: "ferri".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: cfg.clone(),
            thresholds,
            max_abs_diff,
            wall_time_s: Some(start.elapsed().as_secs_f64()),
        },
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdQuery {
    pub big_spin: TwiceSpin,
    pub cells: usize,
    pub boundary: Boundary,
    pub coupling: f64,
    pub tolerance: f64,
    pub t_start: f64,
    pub t_ceiling: f64,
    pub dim_cap: DimCap,
}

impl ThresholdQuery {
    /// Ring (or single bond for one cell) at `J = 1`, tolerance `1e-9`.
    pub fn new(big_spin: TwiceSpin, cells: usize) -> Self {
        ThresholdQuery {
            big_spin,
            cells,
            boundary: if cells == 1 { Boundary::SingleBond } else { Boundary::Ring },
            coupling: 1.0,
            tolerance: 1e-9,
            t_start: 0.05,
            t_ceiling: 1e6,
            dim_cap: DimCap::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub temperature: f64,
    /// Final bracket: entangled at `lower`, not at `upper`.
    pub lower: f64,
    pub upper: f64,
}

/// Bisection on the sign of the entanglement margin.
pub fn solve_threshold(q: &ThresholdQuery) -> Result<ThresholdResult> {
    if q.tolerance.is_nan() || q.tolerance <= 0.0 {
        return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", q.tolerance)));
    }
    if !(q.t_start > 0.0 && q.t_ceiling > q.t_start) {
        return Err(Error::InvalidConfig(format!("need 0 < t_start < t_ceiling, got {} and {}", q.t_start, q.t_ceiling)));
    }
    let spec = ChainSpec::new(q.cells, q.big_spin, q.coupling, q.boundary)?;
    let model = PairThermalModel::new(&spec, q.dim_cap)?;
    solve_threshold_with(&model, q)
}

/// [`solve_threshold`] on an already diagonalized chain.
pub fn solve_threshold_with(model: &PairThermalModel, q: &ThresholdQuery) -> Result<ThresholdResult> {
    if model.entanglement_margin(q.t_start)? <= 0.0 {
        return Err(Error::NotEntangledAtStart(q.t_start));
    }
    let mut lo = q.t_start;
    let mut hi = q.t_start;
    loop {
        hi *= 2.0;
        if hi > q.t_ceiling {
            return Err(Error::ThresholdNotFound { ceiling: q.t_ceiling });
        }
        if model.entanglement_margin(hi)? <= 0.0 {
            break;
        }
        lo = hi;
    }
    while hi - lo > q.tolerance {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if model.entanglement_margin(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult { temperature: 0.5 * (lo + hi), lower: lo, upper: hi })
}

/// Zero-temperature pair negativity (uniform mixture over the ground level).
pub fn ground_pair_negativity(spec: &ChainSpec, cap: DimCap) -> Result<f64> {
    let model = PairThermalModel::new(spec, cap)?;
    Ok(model.evaluate(&model.ground_ensemble()).negativity)
}

/// 12 significant digits, no negative zero.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn to_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * (result.records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &result.records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.twice_s,
            format_float(r.temperature),
            format_float(r.correlator),
            format_float(r.negativity),
            r.method.as_str()
        ));
    }
    out
}

pub fn to_json(result: &SweepResult) -> Result<String> {
    let mut s = serde_json::to_string_pretty(result).map_err(|e| Error::Serialization(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<SweepResult> {
    serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
}

pub fn emit(result: &SweepResult, format: OutputFormat) -> Result<Vec<u8>> {
    Ok(match format {
        OutputFormat::Csv => to_csv(result).into_bytes(),
        OutputFormat::Json => to_json(result)?.into_bytes(),
    })
}

/// The exchange operator on the first bond of a chain.
pub fn first_bond(spec: &ChainSpec, cap: DimCap) -> Result<HermitianOperator> {
    crate::spin::dot_coupling(0, 1, &spec.dims(), cap)
}
