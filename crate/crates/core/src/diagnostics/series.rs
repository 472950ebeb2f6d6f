use super::bounds::TrajectoryProfiles;
use super::convergence::ConvergenceMetrics;
use crate::comparison::ComparisonOffset;
use crate::dynamics::SeriesRow;

/// Fills the diagnostic columns of `series.csv`, one row per snapshot.
///
/// `t_bar` is the run's offset from its initial profile and is left empty
/// when ā(0) = 0; `a_bar` and `min_Z` need the per-snapshot profiles.
pub fn fill_series(
    rows: &mut [SeriesRow],
    offset: Option<&ComparisonOffset>,
    profiles: Option<&TrajectoryProfiles>,
    metrics: Option<&ConvergenceMetrics>,
) {
    for (i, row) in rows.iter_mut().enumerate() {
        if let Some(off) = offset {
            row.t_bar = (!off.round).then_some(off.t_bar);
        }
        if let Some(p) = profiles {
            if let Some(s) = p.summaries.get(i) {
                row.a_bar = Some(s.a_bar);
                row.min_z = s.min_z.map(|m| m.value);
            }
        }
        if let Some(m) = metrics {
            row.l2_dev = m.series.get(i).map(|c| c.l2_dev);
        }
    }
}
