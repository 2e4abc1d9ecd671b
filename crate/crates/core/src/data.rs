//! First-order evaluations and validated datasets.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::vecops::is_finite;
use crate::{Error, Result};

/// One first-order evaluation `(x, f, g)`, optionally carrying a scalar Hessian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataTriple {
    pub x: Vec<f64>,
    pub f: f64,
    pub g: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hess: Option<f64>,
}

impl DataTriple {
    pub fn new(x: Vec<f64>, f: f64, g: Vec<f64>) -> Self {
        Self {
            x,
            f,
            g,
            hess: None,
        }
    }

    /// One-dimensional triple.
    pub fn scalar(x: f64, f: f64, g: f64) -> Self {
        Self::new(alloc::vec![x], f, alloc::vec![g])
    }

    pub fn with_hess(mut self, h: f64) -> Self {
        self.hess = Some(h);
        self
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub(crate) fn view(&self) -> Point<'_> {
        Point {
            x: &self.x,
            f: self.f,
            g: &self.g,
            hess: self.hess,
        }
    }

    fn check(&self, index: usize, dim: usize) -> Result<()> {
        if self.x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.x.len(),
            });
        }
        if self.g.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.g.len(),
            });
        }
        let hess_ok = self.hess.is_none_or(f64::is_finite);
        if !(self.f.is_finite() && hess_ok && is_finite(&self.x) && is_finite(&self.g)) {
            return Err(Error::NonFiniteEntry { index });
        }
        Ok(())
    }
}

/// Borrowed view of a triple, used by the evaluators' inner loops.
#[derive(Clone, Copy, Debug)]
pub struct Point<'a> {
    pub x: &'a [f64],
    pub f: f64,
    pub g: &'a [f64],
    pub hess: Option<f64>,
}

/// A nonempty list of triples sharing one dimension.
///
/// Equal `x` with different `f` is rejected; equal `x` with different `g`
/// is allowed and encodes a multi-valued subgradient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDataset", into = "RawDataset")]
pub struct Dataset {
    triples: Vec<DataTriple>,
    dim: usize,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawDataset {
    #[serde(default)]
    dim: Option<usize>,
    points: Vec<DataTriple>,
}

impl TryFrom<RawDataset> for Dataset {
    type Error = Error;

    fn try_from(raw: RawDataset) -> Result<Self> {
        let ds = validate_dataset(raw.points)?;
        match raw.dim {
            Some(d) if d != ds.dim => Err(Error::DimensionMismatch {
                expected: d,
                found: ds.dim,
            }),
            _ => Ok(ds),
        }
    }
}

impl From<Dataset> for RawDataset {
    fn from(ds: Dataset) -> Self {
        RawDataset {
            dim: Some(ds.dim),
            points: ds.triples,
        }
    }
}

/// Checks the dataset invariants and fixes the common dimension.
pub fn validate_dataset(triples: Vec<DataTriple>) -> Result<Dataset> {
    let dim = triples.first().ok_or(Error::EmptyDataset)?.dim();
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    for (k, t) in triples.iter().enumerate() {
        t.check(k, dim)?;
    }
    for (a, s) in triples.iter().enumerate() {
        for (b, t) in triples.iter().enumerate().skip(a + 1) {
            if s.x == t.x && s.f != t.f {
                return Err(Error::InconsistentDuplicate {
                    first: a,
                    second: b,
                });
            }
        }
    }
    Ok(Dataset { triples, dim })
}

impl Dataset {
    pub fn new(triples: Vec<DataTriple>) -> Result<Self> {
        validate_dataset(triples)
    }

    /// One-dimensional dataset from `(x, f, g)` tuples.
    pub fn from_scalars(points: &[(f64, f64, f64)]) -> Result<Self> {
        validate_dataset(
            points
                .iter()
                .map(|&(x, f, g)| DataTriple::scalar(x, f, g))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[DataTriple] {
        &self.triples
    }

    pub fn get(&self, i: usize) -> Option<&DataTriple> {
        self.triples.get(i)
    }

    pub fn iter(&self) -> core::slice::Iter<'_, DataTriple> {
        self.triples.iter()
    }

    pub fn into_triples(self) -> Vec<DataTriple> {
        self.triples
    }

    /// Returns a copy with `t` appended, re-validated.
    pub fn with(&self, t: DataTriple) -> Result<Self> {
        let mut v = self.triples.clone();
        v.push(t);
        validate_dataset(v)
    }

    /// Drops triples that repeat an earlier one exactly.
    pub fn dedup_exact(self) -> Self {
        let mut out: Vec<DataTriple> = Vec::with_capacity(self.triples.len());
        for t in self.triples {
            if !out.contains(&t) {
                out.push(t);
            }
        }
        Dataset {
            triples: out,
            dim: self.dim,
        }
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a DataTriple;
    type IntoIter = core::slice::Iter<'a, DataTriple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn accepts_well_formed() {
        let ds = Dataset::from_scalars(&[(0.0, 0.0, 1.0), (3.0, -1.5, 1.0)]).unwrap();
        assert_eq!(ds.dim(), 1);
        assert_eq!(ds.len(), 2);
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let t = DataTriple::new(vec![0.0, 0.0], 0.0, vec![1.0]);
        assert!(matches!(
            validate_dataset(vec![t]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_inconsistent_duplicate() {
        let r = Dataset::from_scalars(&[(0.0, 0.0, 1.0), (0.0, 1.0, 1.0)]);
        assert!(matches!(
            r,
            Err(Error::InconsistentDuplicate {
                first: 0,
                second: 1
            })
        ));
    }

    #[test]
    fn multivalued_gradient_is_allowed() {
        assert!(Dataset::from_scalars(&[(0.0, 0.0, 1.0), (0.0, 0.0, -1.0)]).is_ok());
    }

    #[test]
    fn rejects_nan_and_empty() {
        let r = Dataset::from_scalars(&[(0.0, f64::NAN, 1.0)]);
        assert!(matches!(r, Err(Error::NonFiniteEntry { index: 0 })));
        assert!(matches!(validate_dataset(vec![]), Err(Error::EmptyDataset)));
    }

    #[test]
    fn dedup_keeps_first_copy() {
        let ds =
            Dataset::from_scalars(&[(0.0, 0.0, 1.0), (1.0, 1.0, 1.0), (0.0, 0.0, 1.0)]).unwrap();
        assert_eq!(ds.dedup_exact().len(), 2);
    }
}
