//! Per-scale summaries used to choose the estimation scales, sliding-window
//! extraction for bootstrap-style variability assessment, identifiability
//! checks, and component differentiation.

use crate::error::{Error, Result};
use crate::float::Float;
use crate::series::MultiSeries;
use crate::wavelet::WaveletDecomp;
use crate::whittle::wavelet::UNRELIABLE_GAP_BAND;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatKind {
    Variance,
    Covariance,
    Correlation,
}

impl StatKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StatKind::Variance => "variance",
            StatKind::Covariance => "covariance",
            StatKind::Correlation => "correlation",
        }
    }
}

/// Five-number boxplot summary with 1.5-IQR whiskers clipped to the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSummary<T: Float> {
    pub q1: T,
    pub median: T,
    pub q3: T,
    pub lo: T,
    pub hi: T,
    /// Replications/windows contributing to the summary.
    pub count: usize,
}

/// One summarized statistic at one scale for one component pair.
#[derive(Debug, Clone)]
pub struct ScaleStatRow<T: Float> {
    pub scale: usize,
    /// 1-based component indices, `l <= m`.
    pub l: usize,
    pub m: usize,
    pub stat: StatKind,
    /// Missing when the statistic was undefined in every replication.
    pub summary: Option<BoxSummary<T>>,
    /// Wavelet coefficients available at this scale.
    pub nj: usize,
}

/// Tidy per-scale statistics over replications or windows.
#[derive(Debug, Clone)]
pub struct ScaleStats<T: Float> {
    pub rows: Vec<ScaleStatRow<T>>,
}

impl<T: Float> ScaleStats<T> {
    /// CSV emission: `scale,pair,stat,q1,median,q3,lo,hi,n` with empty cells
    /// for missing statistics.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale,pair,stat,q1,median,q3,lo,hi,n\n");
        for row in &self.rows {
            let nums = match &row.summary {
                Some(s) => format!(
                    "{},{},{},{},{}",
                    fmt(s.q1),
                    fmt(s.median),
                    fmt(s.q3),
                    fmt(s.lo),
                    fmt(s.hi)
                ),
                None => ",,,,".to_string(),
            };
            out.push_str(&format!(
                "{},{}-{},{},{},{}\n",
                row.scale,
                row.l,
                row.m,
                row.stat.as_str(),
                nums,
                row.nj
            ));
        }
        out
    }
}

fn fmt<T: Float>(x: T) -> String {
    // shortest representation that parses back exactly
    format!("{}", x.to_f64().unwrap_or(f64::NAN))
}

/// Quartile by linear interpolation between order statistics.
fn quantile<T: Float>(sorted: &[T], q: f64) -> T {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = T::cst(pos - lo as f64);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

fn summarize<T: Float>(mut values: Vec<T>) -> Option<BoxSummary<T>> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite statistics"));
    let q1 = quantile(&values, 0.25);
    let median = quantile(&values, 0.5);
    let q3 = quantile(&values, 0.75);
    let iqr = q3 - q1;
    let fence = T::cst(1.5) * iqr;
    let lo_fence = q1 - fence;
    let hi_fence = q3 + fence;
    let lo = values
        .iter()
        .copied()
        .find(|v| *v >= lo_fence)
        .unwrap_or(values[0]);
    let hi = values
        .iter()
        .rev()
        .copied()
        .find(|v| *v <= hi_fence)
        .unwrap_or(*values.last().unwrap());
    Some(BoxSummary {
        q1,
        median,
        q3,
        lo,
        hi,
        count: values.len(),
    })
}

/// Sample covariance (mean-subtracted, `n-1` denominator); `None` when fewer
/// than two coefficients are available.
fn sample_cov<T: Float>(a: &[T], b: &[T]) -> Option<T> {
    let n = a.len();
    if n < 2 {
        return None;
    }
    let nf = T::from_count(n);
    let ma = a.iter().fold(T::zero(), |s, &x| s + x) / nf;
    let mb = b.iter().fold(T::zero(), |s, &x| s + x) / nf;
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc += (*x - ma) * (*y - mb);
    }
    Some(acc / (nf - T::one()))
}

/// Per-scale variance/covariance/correlation summaries across replications.
///
/// Each replication is one decomposition per component; all replications
/// must share the same per-scale counts. Correlations at scales with fewer
/// than 3 coefficients, or with a zero-variance component, are missing.
pub fn scale_stats<T: Float>(replications: &[Vec<WaveletDecomp<T>>]) -> Result<ScaleStats<T>> {
    let first = replications
        .first()
        .and_then(|r| r.first())
        .ok_or_else(|| Error::ShapeMismatch("no decompositions".into()))?;
    let nj = first.nj().to_vec();
    let p = replications[0].len();
    for rep in replications {
        if rep.len() != p {
            return Err(Error::ShapeMismatch(
                "replications have different component counts".into(),
            ));
        }
        for d in rep {
            if d.nj() != nj.as_slice() {
                return Err(Error::ShapeMismatch(
                    "replications have different per-scale counts".into(),
                ));
            }
        }
    }

    let jmax = nj.len();
    let mut rows = Vec::new();
    for j in 1..=jmax {
        let mut per_pair: Vec<(usize, usize, StatKind, Vec<T>)> = Vec::new();
        for l in 0..p {
            per_pair.push((l, l, StatKind::Variance, Vec::new()));
        }
        for l in 0..p {
            for m in l + 1..p {
                per_pair.push((l, m, StatKind::Covariance, Vec::new()));
                per_pair.push((l, m, StatKind::Correlation, Vec::new()));
            }
        }
        for rep in replications {
            let scales: Vec<&[T]> = rep.iter().map(|d| d.scale(j)).collect();
            for (l, m, stat, values) in per_pair.iter_mut() {
                match stat {
                    StatKind::Variance => {
                        if let Some(v) = sample_cov(scales[*l], scales[*l]) {
                            values.push(v);
                        }
                    }
                    StatKind::Covariance => {
                        if let Some(v) = sample_cov(scales[*l], scales[*m]) {
                            values.push(v);
                        }
                    }
                    StatKind::Correlation => {
                        if nj[j - 1] < 3 {
                            continue;
                        }
                        let (va, vb, cv) = (
                            sample_cov(scales[*l], scales[*l]),
                            sample_cov(scales[*m], scales[*m]),
                            sample_cov(scales[*l], scales[*m]),
                        );
                        if let (Some(va), Some(vb), Some(cv)) = (va, vb, cv) {
                            if va > T::zero() && vb > T::zero() {
                                values.push(cv / (va * vb).sqrt());
                            }
                        }
                    }
                }
            }
        }
        for (l, m, stat, values) in per_pair {
            rows.push(ScaleStatRow {
                scale: j,
                l: l + 1,
                m: m + 1,
                stat,
                summary: summarize(values),
                nj: nj[j - 1],
            });
        }
    }
    Ok(ScaleStats { rows })
}

/// Reference line for the log2-scalogram diagram: slope `d_l + d_m`,
/// intercept `log2 G_lm` (missing for non-positive `G_lm`).
pub fn theoretical_line<T: Float>(d: (T, T), g_entry: T) -> (T, Option<T>) {
    let slope = d.0 + d.1;
    let intercept = if g_entry > T::zero() {
        Some(g_entry.ln() / T::cst(std::f64::consts::LN_2))
    } else {
        None
    };
    (slope, intercept)
}

/// Overlapping windows starting at `0, step, 2 step, ...` while fully inside
/// the series; their count is `floor((N - width)/step) + 1`.
pub fn sliding_windows<T: Float>(
    x: &MultiSeries<T>,
    width: usize,
    step: usize,
) -> Result<Vec<MultiSeries<T>>> {
    if step == 0 {
        return Err(Error::InvalidParameter("window step must be >= 1".into()));
    }
    if width < 2 || width > x.n() {
        return Err(Error::InvalidParameter(format!(
            "window width must be in 2..=N, got {width} with N = {}",
            x.n()
        )));
    }
    let count = (x.n() - width) / step + 1;
    let mut out = Vec::with_capacity(count);
    for w in 0..count {
        out.push(MultiSeries::new(
            x.data().rows(w * step, width).into_owned(),
        )?);
    }
    Ok(out)
}

/// Pairs (0-based) whose memory gap `|d_l - d_m|` falls in the open band
/// `(0.75, 1.25)` around 1, where the covariance correction degenerates.
pub fn identifiability_check<T: Float>(d: &[T]) -> Vec<(usize, usize)> {
    let (lo, hi) = UNRELIABLE_GAP_BAND;
    let mut flags = Vec::new();
    for l in 0..d.len() {
        for m in l + 1..d.len() {
            let gap = (d[l] - d[m]).abs().to_f64().unwrap_or(f64::NAN);
            if gap > lo && gap < hi {
                flags.push((l, m));
            }
        }
    }
    flags
}

/// Replaces component `component` (0-based) with its `order`-th difference;
/// all components are truncated to the last `N - order` rows to stay aligned.
/// The memory parameter of the differenced component shifts by `-order`.
pub fn differentiate_component<T: Float>(
    x: &MultiSeries<T>,
    component: usize,
    order: usize,
) -> Result<MultiSeries<T>> {
    if component >= x.p() {
        return Err(Error::InvalidParameter(format!(
            "component {component} out of range for p = {}",
            x.p()
        )));
    }
    if order == 0 {
        return Err(Error::InvalidParameter("difference order must be >= 1".into()));
    }
    if x.n() <= order {
        return Err(Error::SeriesTooShort {
            needed: order + 1,
            got: x.n(),
        });
    }
    let mut cols: Vec<Vec<T>> = (0..x.p()).map(|l| x.component(l)).collect();
    for _ in 0..order {
        let c = &cols[component];
        cols[component] = c.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let keep = x.n() - order;
    for (l, col) in cols.iter_mut().enumerate() {
        if l != component {
            *col = col[order..].to_vec();
        }
        debug_assert_eq!(col.len(), keep);
    }
    MultiSeries::from_columns(&cols)
}
