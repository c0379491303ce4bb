//! Cross-check of the three negativity routes on thermal pair states.

use serde::Serialize;

use crate::entanglement::{negativity_numeric, negativity_three_ways, partial_trace, ThreeWayNegativity};
use crate::error::Result;
use crate::lattice::{build_hamiltonian, ChainSpec};
use crate::spin::{DimCap, TwiceSpin};
use crate::thermal::{decompose, ensemble, thermal_density_matrix};

/// Agreement tolerance between the three routes.
pub const AGREEMENT_TOL: f64 = 1e-9;
/// Negativities above this must show `2s` equal negative eigenvalues.
pub const ENTANGLED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct ValidationCase {
    pub sites: usize,
    pub twice_s: u32,
    pub temperature: f64,
    pub partial_transpose: f64,
    pub correlator_formula: f64,
    pub time_reversal: f64,
    pub spread: f64,
    /// `| ||rho^T2||_1 - 1 - 2N |`.
    pub trace_norm_defect: f64,
    pub negative_count: usize,
    /// Spread among the negative eigenvalues.
    pub negative_spread: f64,
    pub passed: bool,
}

/// Thermal `(0, 1)` pair state built through the full density matrix and partial trace.
pub fn thermal_pair(spec: &ChainSpec, temperature: f64, cap: DimCap) -> Result<crate::entanglement::PairState> {
    let h = build_hamiltonian(spec, cap)?;
    let d = decompose(&h)?;
    let rho = thermal_density_matrix(&d, &ensemble(&d, temperature)?, cap)?;
    partial_trace(&rho, (0, 1), spec.big_spin)
}

pub fn check_case(spec: &ChainSpec, temperature: f64, cap: DimCap) -> Result<ValidationCase> {
    let pair = thermal_pair(spec, temperature, cap)?;
    let ThreeWayNegativity { partial_transpose, correlator_formula, time_reversal } = negativity_three_ways(&pair)?;
    let spread = negativity_three_ways(&pair)?.max_spread();
    let report = negativity_numeric(&pair);
    let negatives = report.negative_eigenvalues(1e-12);
    let negative_spread = match (negatives.first(), negatives.last()) {
        (Some(a), Some(b)) => (b - a).abs(),
        _ => 0.0,
    };
    let trace_norm_defect = (report.trace_norm - 1.0 - 2.0 * report.negativity).abs();
    let structure_ok = report.negativity <= ENTANGLED_TOL
        || (negatives.len() == spec.big_spin.twice() as usize && negative_spread <= AGREEMENT_TOL);
    Ok(ValidationCase {
        sites: spec.sites(),
        twice_s: spec.big_spin.twice(),
        temperature,
        partial_transpose,
        correlator_formula,
        time_reversal,
        spread,
        trace_norm_defect,
        negative_count: negatives.len(),
        negative_spread,
        passed: spread <= AGREEMENT_TOL && trace_norm_defect <= 1e-10 && structure_ok,
    })
}

/// Every combination of `cells`, `2s` and temperature.
pub fn run_suite(cells: &[usize], twice_s: &[u32], temperatures: &[f64], cap: DimCap) -> Result<Vec<ValidationCase>> {
    let mut out = Vec::new();
    for &n in cells {
        for &t in twice_s {
            let spec = ChainSpec::ring_or_pair(n, TwiceSpin::new(t)?)?;
            for &temp in temperatures {
                out.push(check_case(&spec, temp, cap)?);
            }
        }
    }
    Ok(out)
}
