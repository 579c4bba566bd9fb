//! Weighted samples: distinct points with a probability mass function.
//!
//! Raw sampler output is a [`PointSequence`] (rows may repeat); a
//! [`WeightedSample`] is its canonical discrete measure, with duplicate rows
//! merged and their weights summed.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major `n × d` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::Parameter(format!(
                "{} coordinates do not form rows of length {dim}",
                coords.len()
            )));
        }
        Ok(PointSet { dim, coords })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                actual: rows[bad].len(),
            });
        }
        PointSet::new(dim.max(1), rows.concat())
    }

    /// A set with no rows. Panics if `dim` is zero.
    pub fn empty(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        PointSet { dim, coords: Vec::new() }
    }

    /// Appends a row. Panics on a length mismatch.
    pub fn push(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.dim, "row length");
        self.coords.extend_from_slice(row);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// `‖x_i − x_l‖₁`.
    pub fn l1_distance(&self, i: usize, l: usize) -> f64 {
        self.row(i)
            .iter()
            .zip(self.row(l))
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// Raw, ordered output of a sampler; repeats allowed.
pub type PointSequence = PointSet;

impl PointSet {
    /// Weighted sample over the first `n` rows with uniform weights.
    pub fn prefix(&self, n: usize) -> Result<WeightedSample> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if n > self.len() {
            return Err(Error::Parameter(format!(
                "prefix of {n} points requested from a sequence of {}",
                self.len()
            )));
        }
        let head = PointSet {
            dim: self.dim,
            coords: self.coords[..n * self.dim].to_vec(),
        };
        WeightedSample::from_points(head, None)
    }
}

/// Distinct points `x_1..x_n` with strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    points: PointSet,
    weights: Vec<f64>,
}

impl WeightedSample {
    /// Canonicalizes raw points: drops zero-weight rows, merges rows that are
    /// bitwise equal (after mapping `-0.0` to `0.0`) by summing their weights,
    /// and renormalizes. Omitted weights default to uniform.
    pub fn from_points(points: PointSet, weights: Option<&[f64]>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if let Some(row) = points.rows().position(|r| r.iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFinite { row });
        }
        let raw: Vec<f64> = match weights {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        actual: w.len(),
                    });
                }
                if let Some(i) = w.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::Parameter(format!("weight {i} is {}", w[i])));
                }
                w.to_vec()
            }
            None => vec![1.0; n],
        };

        let dim = points.dim();
        let mut index: HashMap<Vec<u64>, usize> = HashMap::with_capacity(n);
        let mut coords = Vec::with_capacity(points.coords.len());
        let mut merged: Vec<f64> = Vec::with_capacity(n);
        for (row, &w) in points.rows().zip(&raw) {
            if w == 0.0 {
                continue;
            }
            let key: Vec<u64> = row.iter().map(|v| (v + 0.0).to_bits()).collect();
            match index.get(&key) {
                Some(&k) => merged[k] += w,
                None => {
                    index.insert(key, merged.len());
                    coords.extend(row.iter().map(|v| v + 0.0));
                    merged.push(w);
                }
            }
        }
        let total: f64 = merged.iter().sum();
        if merged.is_empty() || total <= 0.0 {
            return Err(Error::Parameter("all weights are zero".into()));
        }
        for w in &mut merged {
            *w /= total;
        }
        Ok(WeightedSample {
            points: PointSet { dim, coords },
            weights: merged,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], weights: Option<&[f64]>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySample);
        }
        Self::from_points(PointSet::from_rows(rows)?, weights)
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    /// `E_Q[f(X)]`.
    pub fn expect(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        self.points
            .rows()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .sum()
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    /// Reads the sample CSV format: optional header `x1,…,xd[,weight]`,
    /// '.' decimal separator. Without a header every column is a coordinate.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);

        let mut weight_col = None;
        let mut width = None;
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for (k, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse {
                line: e.position().map_or(k + 1, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(k + 1, |p| p.line() as usize);
            if k == 0 && record.iter().any(|f| f.parse::<f64>().is_err()) {
                weight_col = record.iter().position(|f| f.eq_ignore_ascii_case("weight"));
                width = Some(record.len());
                continue;
            }
            match width {
                Some(w) if w != record.len() => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected {w} fields, found {}", record.len()),
                    })
                }
                None => width = Some(record.len()),
                _ => {}
            }
            for (c, field) in record.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("field `{field}` is not a number"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        line,
                        message: format!("non-finite value `{field}`"),
                    });
                }
                if Some(c) == weight_col {
                    weights.push(v);
                } else {
                    coords.push(v);
                }
            }
        }
        let width = width.unwrap_or(0);
        let dim = width - usize::from(weight_col.is_some());
        if coords.is_empty() || dim == 0 {
            return Err(Error::EmptySample);
        }
        let points = PointSet::new(dim, coords)?;
        let weights = weight_col.map(|_| weights);
        WeightedSample::from_points(points, weights.as_deref())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        let header: Vec<String> = (1..=self.dim()).map(|j| format!("x{j}")).collect();
        writeln!(out, "{},weight", header.join(","))?;
        for (x, w) in self.points.rows().zip(&self.weights) {
            for v in x {
                write!(out, "{v:?},")?;
            }
            writeln!(out, "{w:?}")?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: &[&[f64]], w: Option<&[f64]>) -> Result<WeightedSample> {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        WeightedSample::from_rows(&rows, w)
    }

    #[test]
    fn uniform_default_weights() {
        let s = sample(&[&[0.0], &[1.0], &[2.0]], None).unwrap();
        assert_eq!(s.len(), 3);
        for w in s.weights() {
            assert!((w - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn duplicates_merge() {
        let s = sample(&[&[0.0], &[0.0], &[1.0]], None).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.weights()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.weights()[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn signed_zero_is_one_point() {
        let s = sample(&[&[0.0, 1.0], &[-0.0, 1.0]], None).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn weights_renormalize() {
        let s = sample(&[&[0.0], &[1.0], &[2.0]], Some(&[2.0, 1.0, 1.0])).unwrap();
        assert_eq!(s.weights(), &[0.5, 0.25, 0.25]);
    }

    #[test]
    fn zero_weight_rows_are_dropped() {
        let s = sample(&[&[0.0], &[1.0]], Some(&[0.0, 3.0])).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.points().row(0), &[1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(sample(&[], None), Err(Error::EmptySample)));
        assert!(matches!(
            sample(&[&[0.0], &[f64::NAN]], None),
            Err(Error::NonFinite { row: 1 })
        ));
        assert!(sample(&[&[0.0]], Some(&[0.0])).is_err());
        assert!(sample(&[&[0.0]], Some(&[-1.0])).is_err());
    }

    #[test]
    fn prefix_behaviour() {
        let seq = PointSet::new(1, (0..10).map(f64::from).collect()).unwrap();
        assert_eq!(seq.prefix(10).unwrap().len(), 10);
        let one = seq.prefix(1).unwrap();
        assert_eq!(one.weights(), &[1.0]);
        assert!(matches!(seq.prefix(0), Err(Error::EmptySample)));
        assert!(seq.prefix(11).is_err());

        let rep = PointSet::new(1, vec![3.0, 3.0, 4.0]).unwrap();
        let s = rep.prefix(2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.weights(), &[1.0]);
    }

    #[test]
    fn csv_with_weights() {
        let s = WeightedSample::read_csv("x1,x2,weight\n0,1,1\n2,3,3\n".as_bytes()).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.len(), 2);
        assert_eq!(s.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn csv_without_weight_column() {
        let s = WeightedSample::read_csv("x1\n0.5\n0.25\n".as_bytes()).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.weights(), &[0.5, 0.5]);
        let h = WeightedSample::read_csv("0.5\n0.25\n".as_bytes()).unwrap();
        assert_eq!(h, s);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let err = WeightedSample::read_csv("x1\n0.5\nNaN\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = WeightedSample::read_csv("x1,x2\n0.5,1\n0.25\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = WeightedSample::read_csv("x1\n0.5\nabc\n".as_bytes());
        // a second non-numeric row is not a header
        assert!(matches!(err, Err(Error::Parse { line: 3, .. })), "{err:?}");
    }

    #[test]
    fn csv_round_trip() {
        let s = sample(
            &[&[0.1, -2.5e-7], &[1.0 / 3.0, 7.0], &[-0.0, 1e300]],
            Some(&[0.2, 0.3, 0.5]),
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        s.save_csv(&path).unwrap();
        let back = WeightedSample::load_csv(&path).unwrap();
        assert_eq!(back.points(), s.points());
        for (a, b) in back.weights().iter().zip(s.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
