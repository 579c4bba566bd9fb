use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{sigmoid, softplus, DataModel, Interval, Target};
use crate::error::{Error, Result};

/// Nodal involvement in prostate cancer (53 patients): a column of ones `m`,
/// the binary outcome `r`, and five binary predictors.
pub const NODAL_CSV: &str = include_str!("../../data/nodal.csv");

const LABEL_COLUMNS: [&str; 3] = ["r", "y", "label"];

/// Bayesian logistic regression posterior under an `N(0, I)` prior:
/// `∇ log p(w) = Σ_l (y_l − σ(⟨w, x_l⟩)) x_l − w`.
#[derive(Debug, Clone)]
pub struct LogisticPosterior {
    covariates: Vec<f64>,
    labels: Vec<f64>,
    support: Vec<Interval>,
    synthetic: bool,
}

impl LogisticPosterior {
    pub fn new(covariates: Vec<f64>, labels: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 || covariates.len() != labels.len() * dim {
            return Err(Error::Parameter(format!(
                "covariate matrix of {} entries does not match {} labels × {dim}",
                covariates.len(),
                labels.len()
            )));
        }
        if labels.iter().any(|&y| y != 0.0 && y != 1.0) {
            return Err(Error::Parameter("labels must be 0 or 1".into()));
        }
        if covariates.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("covariates must be finite".into()));
        }
        Ok(LogisticPosterior {
            covariates,
            labels,
            support: vec![Interval::REAL_LINE; dim],
            synthetic: false,
        })
    }

    /// The bundled nodal dataset (intercept column included as a covariate).
    pub fn nodal() -> Self {
        Self::from_csv_str(NODAL_CSV).expect("bundled dataset parses")
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv_str(&text)
    }

    /// Parses a headed CSV. The label column is the first of `r`, `y`,
    /// `label`; columns with an empty header (row names) are ignored; every
    /// other column is a covariate.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| csv_error(&e))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let label_idx = LABEL_COLUMNS
            .iter()
            .find_map(|name| headers.iter().position(|h| h == name))
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: "no label column (r, y or label)".into(),
            })?;
        let covariate_idx: Vec<usize> = (0..headers.len())
            .filter(|&c| c != label_idx && !headers[c].is_empty())
            .collect();

        let mut covariates = Vec::new();
        let mut labels = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let line = row + 2;
            let record = record.map_err(|e| csv_error(&e))?;
            let field = |c: usize| -> Result<f64> {
                record
                    .get(c)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("column `{}` is not numeric", headers[c]),
                    })
            };
            labels.push(field(label_idx)?);
            for &c in &covariate_idx {
                covariates.push(field(c)?);
            }
        }
        Self::new(covariates, labels, covariate_idx.len())
    }

    /// Seeded stand-in with the nodal shape: 53 rows, an intercept and five
    /// binary predictors, labels drawn from the model at a random `w`.
    pub fn synthetic(n_data: usize, dim: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let truth: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let mut covariates = Vec::with_capacity(n_data * dim);
        let mut labels = Vec::with_capacity(n_data);
        for _ in 0..n_data {
            let row: Vec<f64> = (0..dim)
                .map(|k| if k == 0 { 1.0 } else { f64::from(rng.gen_bool(0.5) as u8) })
                .collect();
            let z: f64 = row.iter().zip(&truth).map(|(a, b)| a * b).sum();
            labels.push(f64::from(rng.gen_bool(sigmoid(z)) as u8));
            covariates.extend(row);
        }
        let mut p = Self::new(covariates, labels, dim)?;
        p.synthetic = true;
        Ok(p)
    }

    pub fn is_synthetic(&self) -> bool {
        self.synthetic
    }

    pub fn covariate(&self, l: usize) -> &[f64] {
        let d = self.support.len();
        &self.covariates[l * d..(l + 1) * d]
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    fn margin(&self, l: usize, w: &[f64]) -> f64 {
        self.covariate(l).iter().zip(w).map(|(a, b)| a * b).sum()
    }
}

fn csv_error(e: &csv::Error) -> Error {
    Error::Parse {
        line: e.position().map_or(0, |p| p.line() as usize),
        message: e.to_string(),
    }
}

impl Target for LogisticPosterior {
    fn name(&self) -> &str {
        "logistic-posterior"
    }

    fn dim(&self) -> usize {
        self.support.len()
    }

    fn support(&self) -> &[Interval] {
        &self.support
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        self.log_prior(x) + self.total_log_likelihood(x)
    }

    fn score_into(&self, x: &[f64], out: &mut [f64]) {
        self.grad_log_prior(x, out);
        for l in 0..self.labels.len() {
            self.add_grad_log_likelihood(l, x, 1.0, out);
        }
    }

    fn data_model(&self) -> Option<&dyn DataModel> {
        Some(self)
    }
}

impl DataModel for LogisticPosterior {
    fn n_data(&self) -> usize {
        self.labels.len()
    }

    fn dim(&self) -> usize {
        self.support.len()
    }

    fn log_prior(&self, theta: &[f64]) -> f64 {
        -0.5 * theta.iter().map(|v| v * v).sum::<f64>()
    }

    fn grad_log_prior(&self, theta: &[f64], out: &mut [f64]) {
        for (o, v) in out.iter_mut().zip(theta) {
            *o = -v;
        }
    }

    fn log_likelihood(&self, datum: usize, theta: &[f64]) -> f64 {
        let z = self.margin(datum, theta);
        self.labels[datum] * z - softplus(z)
    }

    fn add_grad_log_likelihood(&self, datum: usize, theta: &[f64], scale: f64, out: &mut [f64]) {
        let resid = self.labels[datum] - sigmoid(self.margin(datum, theta));
        for (o, x) in out.iter_mut().zip(self.covariate(datum)) {
            *o += scale * resid * x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodal_has_expected_shape() {
        let p = LogisticPosterior::nodal();
        assert_eq!(p.n_data(), 53);
        assert_eq!(Target::dim(&p), 6);
        assert!(!p.is_synthetic());
        // intercept column
        assert!((0..53).all(|l| p.covariate(l)[0] == 1.0));
        assert_eq!(p.labels().iter().filter(|&&y| y == 1.0).count(), 20);
    }

    #[test]
    fn gradient_formula() {
        let p = LogisticPosterior::new(vec![1.0, 2.0, 1.0, -1.0], vec![1.0, 0.0], 2).unwrap();
        let w = [0.3, -0.2];
        let g = p.grad_log_density(&w).unwrap();
        let s1 = sigmoid(0.3 - 0.4);
        let s2 = sigmoid(0.3 + 0.2);
        let expect = [(1.0 - s1) - s2 - 0.3, 2.0 * (1.0 - s1) + s2 + 0.2];
        for (a, b) in g.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn synthetic_dataset_is_flagged_and_seeded() {
        let a = LogisticPosterior::synthetic(53, 6, 4).unwrap();
        let b = LogisticPosterior::synthetic(53, 6, 4).unwrap();
        assert!(a.is_synthetic());
        assert_eq!(a.labels(), b.labels());
        assert_eq!(a.covariates, b.covariates);
    }

    #[test]
    fn missing_label_column_is_a_parse_error() {
        let err = LogisticPosterior::from_csv_str("a,b\n1,2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn non_numeric_field_reports_line() {
        let err = LogisticPosterior::from_csv_str("y,a\n1,2\n0,x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }
}
