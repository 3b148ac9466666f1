//! Multivariate observation container.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::float::Float;

/// An `N x p` block of observations; one column per component.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSeries<T: Float> {
    data: DMatrix<T>,
    labels: Option<Vec<String>>,
}

impl<T: Float> MultiSeries<T> {
    /// Wraps an `N x p` matrix. Requires `N >= 2` and finite entries.
    pub fn new(data: DMatrix<T>) -> Result<Self> {
        Self::with_labels(data, None)
    }

    pub fn with_labels(data: DMatrix<T>, labels: Option<Vec<String>>) -> Result<Self> {
        if data.nrows() < 2 {
            return Err(Error::SeriesTooShort {
                needed: 2,
                got: data.nrows(),
            });
        }
        if data.ncols() == 0 {
            return Err(Error::ShapeMismatch("series has no components".into()));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("series contains a non-finite entry".into()));
        }
        if let Some(l) = &labels {
            if l.len() != data.ncols() {
                return Err(Error::ShapeMismatch(format!(
                    "{} labels for {} components",
                    l.len(),
                    data.ncols()
                )));
            }
        }
        Ok(Self { data, labels })
    }

    /// Builds a series from per-component columns of equal length.
    pub fn from_columns(cols: &[Vec<T>]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::ShapeMismatch("no components".into()));
        }
        let n = cols[0].len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::ShapeMismatch("columns of unequal length".into()));
        }
        Self::new(DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]))
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    /// Number of components.
    pub fn p(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> &DMatrix<T> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<T> {
        self.data
    }

    /// Copy of component `l` (0-based).
    pub fn component(&self, l: usize) -> Vec<T> {
        self.data.column(l).iter().copied().collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_non_finite() {
        assert!(MultiSeries::new(DMatrix::from_row_slice(1, 1, &[1.0f64])).is_err());
        assert!(MultiSeries::new(DMatrix::from_row_slice(2, 1, &[1.0f64, f64::NAN])).is_err());
        assert!(MultiSeries::new(DMatrix::from_row_slice(2, 1, &[1.0f64, 2.0])).is_ok());
    }

    #[test]
    fn from_columns_roundtrip() {
        let s = MultiSeries::from_columns(&[vec![1.0f64, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.p(), 2);
        assert_eq!(s.component(1), vec![4.0, 5.0, 6.0]);
    }
}
