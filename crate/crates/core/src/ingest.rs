//! Loading raw series, rate-of-change transform and the lagged-variable panel.
//!
//! All tables are stored column-major: one `Vec<f64>` per variable, indexed
//! by time step.

use std::collections::HashSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::netbuild::NodeId;

/// Smallest number of aligned samples any pairwise metric is evaluated on.
pub const MIN_OVERLAP: usize = 3;

/// Whether the first CSV column holds dates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DateColumn {
    /// Detected from the first body cell: a date column iff it parses as an
    /// ISO-8601 date (`YYYY-MM-DD` or `YYYY-MM`).
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, Default)]
pub struct CsvOptions {
    pub date_column: DateColumn,
}

/// Raw aligned multivariate series.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesTable {
    variable_names: Vec<String>,
    timestamps: Option<Vec<NaiveDate>>,
    columns: Vec<Vec<f64>>,
}

impl TimeSeriesTable {
    pub fn new(
        variable_names: Vec<String>,
        timestamps: Option<Vec<NaiveDate>>,
        columns: Vec<Vec<f64>>,
    ) -> Result<Self> {
        validate_names(&variable_names)?;
        if columns.len() != variable_names.len() {
            return Err(Error::LengthMismatch {
                left: variable_names.len(),
                right: columns.len(),
            });
        }
        let len = columns.first().map_or(0, Vec::len);
        if len < 2 {
            return Err(Error::InsufficientSamples { needed: 2, got: len });
        }
        for (name, col) in variable_names.iter().zip(&columns) {
            if col.len() != len {
                return Err(Error::csv(
                    None,
                    Some(name),
                    format!("column has {} values, expected {len}", col.len()),
                ));
            }
            if let Some(t) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::csv(Some(t + 1), Some(name), "non-finite value"));
            }
        }
        if let Some(ts) = &timestamps {
            if ts.len() != len {
                return Err(Error::LengthMismatch {
                    left: ts.len(),
                    right: len,
                });
            }
        }
        Ok(Self {
            variable_names,
            timestamps,
            columns,
        })
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn timestamps(&self) -> Option<&[NaiveDate]> {
        self.timestamps.as_deref()
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn n_variables(&self) -> usize {
        self.columns.len()
    }

    pub fn len(&self) -> usize {
        self.columns[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes the table in the CSV input format (dates as `YYYY-MM-DD`).
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        if self.timestamps.is_some() {
            out.push_str("date,");
        }
        out.push_str(&self.variable_names.join(","));
        out.push('\n');
        for t in 0..self.len() {
            if let Some(ts) = &self.timestamps {
                out.push_str(&ts[t].format("%Y-%m-%d").to_string());
                out.push(',');
            }
            let row: Vec<String> = self.columns.iter().map(|c| c[t].to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn validate_names(names: &[String]) -> Result<()> {
    if names.is_empty() {
        return Err(Error::csv(None, None, "no variable columns"));
    }
    let mut seen = HashSet::new();
    for name in names {
        if name.trim().is_empty() {
            return Err(Error::csv(None, None, "empty variable name in header"));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::csv(None, Some(name), "duplicate variable name"));
        }
    }
    Ok(())
}

fn parse_date(cell: &str) -> Option<NaiveDate> {
    let cell = cell.trim();
    NaiveDate::parse_from_str(cell, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(&format!("{cell}-01"), "%Y-%m-%d"))
        .ok()
}

pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<TimeSeriesTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_csv(file, options)
}

/// Parses the CSV input format from any reader. See `load_csv`.
pub fn parse_csv<R: Read>(reader: R, options: &CsvOptions) -> Result<TimeSeriesTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::csv(None, None, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();

    let mut records = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::csv(Some(idx + 1), None, e.to_string()))?;
        records.push(rec);
    }
    if records.len() < 2 {
        return Err(Error::csv(
            None,
            None,
            format!("need at least 2 data rows, found {}", records.len()),
        ));
    }

    let has_dates = match options.date_column {
        DateColumn::Present => true,
        DateColumn::Absent => false,
        DateColumn::Auto => records[0].get(0).and_then(parse_date).is_some(),
    };
    let first_value_col = usize::from(has_dates);
    if header.len() <= first_value_col {
        return Err(Error::csv(None, None, "no variable columns"));
    }
    let names = header[first_value_col..].to_vec();
    validate_names(&names)?;

    let mut timestamps = has_dates.then(Vec::new);
    let mut columns = vec![Vec::with_capacity(records.len()); names.len()];
    for (idx, rec) in records.iter().enumerate() {
        let row = idx + 1;
        if rec.len() != header.len() {
            return Err(Error::csv(
                Some(row),
                None,
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        if let Some(ts) = timestamps.as_mut() {
            let cell = &rec[0];
            let date = parse_date(cell)
                .ok_or_else(|| Error::csv(Some(row), Some(&header[0]), format!("'{cell}' is not an ISO-8601 date")))?;
            ts.push(date);
        }
        for (c, name) in names.iter().enumerate() {
            let cell = &rec[c + first_value_col];
            if cell.is_empty() {
                return Err(Error::csv(Some(row), Some(name), "missing value"));
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| Error::csv(Some(row), Some(name), format!("'{cell}' is not a number")))?;
            if !v.is_finite() {
                return Err(Error::csv(Some(row), Some(name), format!("non-finite value '{cell}'")));
            }
            columns[c].push(v);
        }
    }
    TimeSeriesTable::new(names, timestamps, columns)
}

/// Per-variable rates of change, stored as fractions (0.10 is +10%).
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnsTable {
    variable_names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl ReturnsTable {
    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn n_variables(&self) -> usize {
        self.columns.len()
    }

    pub fn len(&self) -> usize {
        self.columns[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variable_names.iter().position(|n| n == name)
    }
}

pub fn rate_of_change(table: &TimeSeriesTable) -> Result<ReturnsTable> {
    let mut columns = Vec::with_capacity(table.n_variables());
    for (name, col) in table.variable_names().iter().zip(table.columns()) {
        let mut out = Vec::with_capacity(col.len() - 1);
        for (t, w) in col.windows(2).enumerate() {
            if w[0] == 0.0 {
                return Err(Error::ZeroDenominator {
                    t,
                    variable: name.clone(),
                });
            }
            let r = (w[1] - w[0]) / w[0];
            if !r.is_finite() {
                return Err(Error::csv(Some(t + 2), Some(name), "rate of change is not finite"));
            }
            out.push(r);
        }
        columns.push(out);
    }
    Ok(ReturnsTable {
        variable_names: table.variable_names().to_vec(),
        columns,
    })
}

/// The rate-of-change series of every variable together with lags `0..=max_lag`.
///
/// Lag `k` of variable `i` at panel time `t` is the base value at `t - k`, so it
/// is defined for `t` in `k..len` and has `len - k` samples. Lag views borrow
/// from the base table.
#[derive(Debug, Clone)]
pub struct LaggedPanel {
    base: ReturnsTable,
    max_lag: usize,
}

pub fn build_lags(returns: ReturnsTable, max_lag: usize) -> Result<LaggedPanel> {
    let len = returns.len();
    if len < MIN_OVERLAP || max_lag > len - MIN_OVERLAP {
        return Err(Error::invalid(
            "max_lag",
            format!("{max_lag} leaves fewer than {MIN_OVERLAP} overlapping samples for {len} rates of change"),
        ));
    }
    Ok(LaggedPanel { base: returns, max_lag })
}

impl LaggedPanel {
    pub fn base(&self) -> &ReturnsTable {
        &self.base
    }

    pub fn max_lag(&self) -> usize {
        self.max_lag
    }

    pub fn n_variables(&self) -> usize {
        self.base.n_variables()
    }

    /// Number of base time steps (`T - 1` for a table of `T` raw rows).
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn series_count(&self) -> usize {
        self.n_variables() * (self.max_lag + 1)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n_variables()).flat_map(move |variable| (0..=self.max_lag).map(move |lag| NodeId::new(variable, lag)))
    }

    fn check(&self, id: NodeId) -> Result<()> {
        if id.variable >= self.n_variables() {
            return Err(Error::invalid(
                "variable",
                format!("index {} out of range (have {})", id.variable, self.n_variables()),
            ));
        }
        if id.lag > self.max_lag {
            return Err(Error::invalid(
                "lag",
                format!("{} exceeds max lag {}", id.lag, self.max_lag),
            ));
        }
        Ok(())
    }

    /// The defined samples of the lag view, in time order.
    pub fn series(&self, id: NodeId) -> Result<&[f64]> {
        self.check(id)?;
        let col = self.base.column(id.variable);
        Ok(&col[..col.len() - id.lag])
    }

    /// Time-aligned overlap of two lag views: panel times `max(k, m)..len`.
    pub fn align_pair(&self, a: NodeId, b: NodeId) -> Result<AlignedPair<'_>> {
        self.check(a)?;
        self.check(b)?;
        let len = self.len();
        let start = a.lag.max(b.lag);
        let n = len - start;
        if n < MIN_OVERLAP {
            return Err(Error::InsufficientSamples {
                needed: MIN_OVERLAP,
                got: n,
            });
        }
        let x_start = start - a.lag;
        let y_start = start - b.lag;
        Ok(AlignedPair {
            xs: &self.base.column(a.variable)[x_start..x_start + n],
            ys: &self.base.column(b.variable)[y_start..y_start + n],
            x_id: a,
            y_id: b,
            x_start,
            y_start,
        })
    }
}

pub fn align_pair(panel: &LaggedPanel, a: NodeId, b: NodeId) -> Result<AlignedPair<'_>> {
    panel.align_pair(a, b)
}

/// Two equal-length, time-aligned sample vectors drawn from lag views.
///
/// `x_start`/`y_start` are the base-series indices of the first element of
/// each vector; they key the tie-breaking jitter.
#[derive(Debug, Clone, Copy)]
pub struct AlignedPair<'a> {
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub x_id: NodeId,
    pub y_id: NodeId,
    pub x_start: usize,
    pub y_start: usize,
}

impl<'a> AlignedPair<'a> {
    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn swapped(&self) -> AlignedPair<'a> {
        AlignedPair {
            xs: self.ys,
            ys: self.xs,
            x_id: self.y_id,
            y_id: self.x_id,
            x_start: self.y_start,
            y_start: self.x_start,
        }
    }
}
