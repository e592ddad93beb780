//! Counting full-dimensional Voronoi cells.

use serde::Serialize;
use thiserror::Error;

use crate::curve::{self, CurveError, TangencyReport};
use crate::metrics::FiniteMetric;
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountingError {
    #[error("facet count {0} is odd; centrally symmetric polytopes have an even number of facets")]
    OddFacetCount(u64),
    #[error("facet count and dual degree must be positive")]
    NonPositive,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl CountingError {
    pub fn kind(&self) -> &'static str {
        match self {
            CountingError::OddFacetCount(_) => "OddFacetCount",
            CountingError::NonPositive => "NonPositive",
            CountingError::Curve(e) => e.kind(),
        }
    }
}

/// Which row of the three-way case split applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `d13 > max(d12, d23)`: one cell.
    #[serde(rename = "strict_case_1")]
    StrictCase1,
    /// `d13` strictly between `d12` and `d23`: two cells.
    #[serde(rename = "strict_case_2")]
    StrictCase2,
    /// `d13 < min(d12, d23)`: three cells.
    #[serde(rename = "strict_case_3")]
    StrictCase3,
    /// `d13` equals `d12` or `d23`; the count extends the strict cases.
    Boundary,
}

impl Regime {
    pub fn of(d: &FiniteMetric) -> Regime {
        let (d12, d13, d23) = (d.get(0, 1), d.get(0, 2), d.get(1, 2));
        if d13 > d12 && d13 > d23 {
            Regime::StrictCase1
        } else if (d12 < d13 && d13 < d23) || (d23 < d13 && d13 < d12) {
            Regime::StrictCase2
        } else if d13 < d12 && d13 < d23 {
            Regime::StrictCase3
        } else {
            Regime::Boundary
        }
    }

    /// Cell count predicted for a strict regime.
    pub fn table_value(self) -> Option<usize> {
        match self {
            Regime::StrictCase1 => Some(1),
            Regime::StrictCase2 => Some(2),
            Regime::StrictCase3 => Some(3),
            Regime::Boundary => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::StrictCase1 => "strict_case_1",
            Regime::StrictCase2 => "strict_case_2",
            Regime::StrictCase3 => "strict_case_3",
            Regime::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellCensus {
    pub count: usize,
    pub regime: Regime,
    pub tangency: TangencyReport,
}

/// Full-dimensional cells of the Hardy-Weinberg curve under `W_d`:
/// `1 + [d12 > d13] + [d23 > d13]`, one per interior edge tangency.
pub fn count_full_dim_cells_hw(d: &FiniteMetric) -> Result<CellCensus, CountingError> {
    let tangency = curve::hw_tangency_points(d)?;
    Ok(CellCensus {
        count: tangency.entries.len(),
        regime: Regime::of(d),
        tangency,
    })
}

/// `facet_count * dual_degree / 2`, the most full-dimensional cells a smooth
/// variety with hypersurface dual can have under a polyhedral norm whose
/// ball has `facet_count` facets.
pub fn full_dim_upper_bound(facet_count: u64, dual_degree: u64) -> Result<Q, CountingError> {
    if facet_count == 0 || dual_degree == 0 {
        return Err(CountingError::NonPositive);
    }
    if !facet_count.is_multiple_of(2) {
        return Err(CountingError::OddFacetCount(facet_count));
    }
    Ok(rational::int(facet_count as i64) * rational::int(dual_degree as i64) / rational::int(2))
}
