//! Output documents of the subcommands. Every type deserializes back from
//! what it serializes to.

use serde::{Deserialize, Serialize};
use sparseres::canny_emiris::RowEntry;
use sparseres::elimination::FamilyAnalysis;
use sparseres::geometry::{Facet, LatticePoint};
use sparseres::respoly::RunStats;
use sparseres::resultant::Route;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub analysis: FamilyAnalysis,
    /// How the resultant is obtained; only for `n + 1` supports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<Route>,
}

/// Mixed volume of `n` supports, or the mixed volumes `MV_{-i}` of the
/// subfamilies omitting one support when there are `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedVolumeReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed_volume: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub without: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixReport {
    pub delta: Vec<String>,
    /// Lattice points labelling the columns of `h`.
    pub columns: Vec<LatticePoint>,
    /// Row content, one entry per row of `h`.
    pub rows: Vec<RowEntry>,
    /// Entries of `H` by coefficient name; `null` is zero.
    pub h: Vec<Vec<Option<String>>>,
    /// Labels of the principal submatrix `E`.
    pub e_labels: Vec<LatticePoint>,
    pub full_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueReport {
    /// `"rationals"` or `"mod <p>"`; residues are printed as symmetric lifts.
    pub field: String,
    /// Coefficient values used, in family order.
    pub point: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KoszulReport {
    pub rays: Vec<Vec<i64>>,
    /// Offsets of the chosen degree on `rays`.
    pub degree: Vec<i64>,
    /// Dimension of each term, by number of wedge factors.
    pub dims: Vec<usize>,
    pub determinant: ValueReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VRep {
    pub kept: Vec<usize>,
    pub vertices: Vec<LatticePoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HRep {
    pub kept: Vec<usize>,
    pub facets: Vec<Facet>,
    #[serde(default)]
    pub equations: Vec<Facet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationReport {
    pub kept: Vec<usize>,
    pub vertices: Vec<LatticePoint>,
    pub simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    #[serde(flatten)]
    pub stats: RunStats,
    /// `vertices + facets`, the bound on oracle calls after initialization.
    pub call_bound: usize,
}
