use crate::error::{Error, Result};
use crate::funcspace::TimePath;
use crate::report::CheckReport;

/// Frame-by-frame `p_n(a(t) - b(t))`, with its max and time average.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub report: CheckReport,
    /// `(n, max_t p_n(a(t) - b(t)))`.
    pub max: Vec<(usize, f64)>,
    /// `(n, trapezoid time average)`.
    pub mean: Vec<(usize, f64)>,
}

impl Comparison {
    pub fn max_for(&self, n: usize) -> Option<f64> {
        self.max.iter().find(|(m, _)| *m == n).map(|(_, v)| *v)
    }
}

/// One report row per frame and index; a row passes when the discrepancy is
/// at most `threshold`.
pub fn compare_solutions(a: &TimePath, b: &TimePath, indices: &[usize], threshold: f64) -> Result<Comparison> {
    if a.steps() != b.steps() || a.ratio() != b.ratio() {
        return Err(Error::ShapeMismatch(format!(
            "paths with {} and {} frames (ratios {} and {})",
            a.steps() + 1,
            b.steps() + 1,
            a.ratio(),
            b.ratio()
        )));
    }
    let diff = a.sub(b)?;
    let norms = diff.frame_seminorms(indices)?;
    let mut report = CheckReport::new("compare");
    let mut max = Vec::new();
    let mut mean = Vec::new();
    for (&n, series) in indices.iter().zip(&norms) {
        for (l, &v) in series.iter().enumerate() {
            report.push("discrepancy", n, Some(diff.time(l)), v, threshold);
        }
        max.push((n, series.iter().copied().fold(0.0, f64::max)));
        let avg = if diff.t0() > 0.0 { crate::funcspace::trapezoid(series, diff.step()) / diff.t0() } else { series[0] };
        mean.push((n, avg));
    }
    Ok(Comparison { report, max, mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{Exponent, Grid, GridFunction};

    #[test]
    fn identical_paths_agree() {
        let g = Grid::new(1.0, 2.0, 1.0 / 32.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let f = TimePath::from_fn(g, p, 1.0, 1.0 / 16.0, |t, s| t * s).unwrap();
        let c = compare_solutions(&f, &f, &[1, 2], 1e-12).unwrap();
        assert!(c.report.passed());
        assert_eq!(c.max_for(2), Some(0.0));
        assert_eq!(c.report.rows.len(), 2 * 17);
    }

    #[test]
    fn constant_offset_is_measured_exactly() {
        let g = Grid::new(1.0, 2.0, 1.0 / 32.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let x = GridFunction::constant(g, p, 1.0).unwrap();
        let a = TimePath::constant(&x, 0.5, 1.0 / 32.0).unwrap();
        let b = a.scaled(0.0);
        let c = compare_solutions(&a, &b, &[1], 1.0).unwrap();
        // p_1(1) = sqrt(2)
        assert!((c.max_for(1).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((c.mean[0].1 - 2f64.sqrt()).abs() < 1e-12);
        assert!(!c.report.passed());
    }

    #[test]
    fn shape_mismatch() {
        let g = Grid::new(1.0, 2.0, 1.0 / 32.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let a = TimePath::zeros(g, p, 0.5, 1.0 / 32.0).unwrap();
        let b = TimePath::zeros(g, p, 0.25, 1.0 / 32.0).unwrap();
        assert!(matches!(compare_solutions(&a, &b, &[1], 0.0), Err(Error::ShapeMismatch(_))));
    }
}
