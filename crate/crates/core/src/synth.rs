//! Seeded synthetic panel with one planted lead variable.
//!
//! Rates of change follow a sparse VAR(2): the leader is white noise and
//! every follower loads on the leader's value two months earlier plus its own
//! noise. Levels start at 100 and compound the rates.

use chrono::{Months, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ingest::TimeSeriesTable;

pub const LEADER_NAME: &str = "Leader";
pub const LEADER_INDEX: usize = 4;
pub const DEFAULT_SEED: u64 = 2019;

#[derive(Debug, Clone)]
pub struct PlantedLeadSpec {
    pub n_variables: usize,
    pub n_rows: usize,
    pub lead_lag: usize,
    pub leader_sd: f64,
    pub noise_sd: f64,
    pub loading: (f64, f64),
    pub seed: u64,
}

impl Default for PlantedLeadSpec {
    fn default() -> Self {
        Self {
            n_variables: 13,
            n_rows: 42,
            lead_lag: 2,
            leader_sd: 0.03,
            noise_sd: 0.012,
            loading: (0.6, 1.0),
            seed: DEFAULT_SEED,
        }
    }
}

pub fn variable_names(n_variables: usize) -> Vec<String> {
    let mut follower = 0;
    (0..n_variables)
        .map(|i| {
            if i == LEADER_INDEX {
                LEADER_NAME.to_string()
            } else {
                follower += 1;
                format!("Follower{follower:02}")
            }
        })
        .collect()
}

pub fn planted_lead_table(spec: &PlantedLeadSpec) -> TimeSeriesTable {
    assert!(spec.n_variables > LEADER_INDEX, "need room for the leader column");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n_rates = spec.n_rows - 1;
    let leader: Vec<f64> = (0..n_rates + spec.lead_lag)
        .map(|_| spec.leader_sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut columns = Vec::with_capacity(spec.n_variables);
    for i in 0..spec.n_variables {
        let rates: Vec<f64> = if i == LEADER_INDEX {
            leader[spec.lead_lag..].to_vec()
        } else {
            let beta = rng.gen_range(spec.loading.0..spec.loading.1);
            (0..n_rates)
                .map(|t| beta * leader[t] + spec.noise_sd * rng.sample::<f64, _>(StandardNormal))
                .collect()
        };
        let mut level = 100.0;
        let mut col = Vec::with_capacity(spec.n_rows);
        col.push(level);
        for r in rates {
            level *= 1.0 + r;
            col.push(level);
        }
        columns.push(col);
    }
    let start = NaiveDate::from_ymd_opt(2019, 7, 1).unwrap();
    let timestamps = (0..spec.n_rows)
        .map(|m| start.checked_add_months(Months::new(m as u32)).unwrap())
        .collect();
    TimeSeriesTable::new(variable_names(spec.n_variables), Some(timestamps), columns)
        .expect("generator output satisfies table invariants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_csv, rate_of_change, CsvOptions};

    #[test]
    fn shape_and_names() {
        let t = planted_lead_table(&PlantedLeadSpec::default());
        assert_eq!(t.n_variables(), 13);
        assert_eq!(t.len(), 42);
        assert_eq!(t.variable_names()[LEADER_INDEX], LEADER_NAME);
        let ts = t.timestamps().unwrap();
        assert_eq!(ts[41], NaiveDate::from_ymd_opt(2022, 12, 1).unwrap());
    }

    #[test]
    fn followers_track_leader_two_steps_back() {
        let t = planted_lead_table(&PlantedLeadSpec::default());
        let r = rate_of_change(&t).unwrap();
        let lead = r.column(LEADER_INDEX);
        for j in (0..13).filter(|&j| j != LEADER_INDEX) {
            let f = r.column(j);
            let c = crate::metrics::abs_correlation(&lead[..39], &f[2..]).unwrap();
            assert!(c > 0.7, "follower {j}: {c}");
        }
    }

    #[test]
    fn bundled_csv_matches_generator() {
        let bundled = include_str!("../../../data/planted_lead.csv");
        let table = planted_lead_table(&PlantedLeadSpec::default());
        assert_eq!(bundled, table.to_csv_string());
        assert_eq!(parse_csv(bundled.as_bytes(), &CsvOptions::default()).unwrap(), table);
    }
}
