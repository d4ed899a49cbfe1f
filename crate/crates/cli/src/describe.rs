//! Per-variable descriptive statistics of the rates of change.

use serde::Serialize;

use leadlag_core::ReturnsTable;

/// Statistics are stored as fractions; `to_table` and `to_csv` print percent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableStats {
    pub variable: String,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptiveStats {
    pub rows: Vec<VariableStats>,
}

impl DescriptiveStats {
    pub fn from_returns(returns: &ReturnsTable) -> Self {
        let rows = returns
            .variable_names()
            .iter()
            .zip(returns.columns())
            .map(|(name, col)| {
                let n = col.len() as f64;
                let mean = col.iter().sum::<f64>() / n;
                let ss: f64 = col.iter().map(|x| (x - mean) * (x - mean)).sum();
                let std_dev = if col.len() > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
                VariableStats {
                    variable: name.clone(),
                    mean,
                    std_dev,
                    min: col.iter().copied().fold(f64::INFINITY, f64::min),
                    max: col.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                }
            })
            .collect();
        Self { rows }
    }

    pub fn to_table(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.variable.chars().count())
            .max()
            .unwrap_or(0)
            .max("Variable".len());
        let mut out = format!(
            "{:<width$}  {:>8}  {:>9}  {:>8}  {:>8}\n",
            "Variable", "Mean", "Std. Dev.", "Min", "Max"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<width$}  {:>8}  {:>9}  {:>8}  {:>8}\n",
                r.variable,
                percent(r.mean),
                percent(r.std_dev),
                percent(r.min),
                percent(r.max)
            ));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("variable,mean_pct,std_dev_pct,min_pct,max_pct\n");
        for r in &self.rows {
            let name = if r.variable.contains([',', '"']) {
                format!("\"{}\"", r.variable.replace('"', "\"\""))
            } else {
                r.variable.clone()
            };
            out.push_str(&format!(
                "{name},{},{},{},{}\n",
                percent(r.mean),
                percent(r.std_dev),
                percent(r.min),
                percent(r.max)
            ));
        }
        out
    }
}

/// A fraction as a percent with two decimals; never prints `-0.00`.
pub fn percent(fraction: f64) -> String {
    let s = format!("{:.2}", fraction * 100.0);
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}
