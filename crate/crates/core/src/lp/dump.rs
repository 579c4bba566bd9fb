use std::io::Write;

use super::LinearProgram;
use crate::error::Result;

impl LinearProgram {
    /// Plain-text, row-oriented dump for cross-checking with other solvers.
    ///
    /// ```text
    /// lp vars 2 rows 1
    /// max 0:1 1:1
    /// bound 0 0 1
    /// row 0:1 1:1 <= 1
    /// ```
    /// Objective terms and bounds at their defaults (zero, free) are omitted.
    pub fn write_text(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "lp vars {} rows {}", self.var_count(), self.row_count())?;
        write!(out, "max")?;
        for (j, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                write!(out, " {j}:{c:?}")?;
            }
        }
        writeln!(out)?;
        for j in 0..self.var_count() {
            let (lo, hi) = self.bounds(j);
            if lo != f64::NEG_INFINITY || hi != f64::INFINITY {
                writeln!(out, "bound {j} {lo:?} {hi:?}")?;
            }
        }
        for r in 0..self.row_count() {
            let (cols, vals, b) = self.row(r);
            write!(out, "row")?;
            for (c, v) in cols.iter().zip(vals) {
                write!(out, " {c}:{v:?}")?;
            }
            writeln!(out, " <= {b:?}")?;
        }
        Ok(())
    }
}
