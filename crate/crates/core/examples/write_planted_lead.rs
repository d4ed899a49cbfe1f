//! Regenerates `data/planted_lead.csv`.
//!
//! Run: cargo run -p leadlag-core --example write_planted_lead > data/planted_lead.csv

use leadlag_core::synth::{planted_lead_table, PlantedLeadSpec};

fn main() {
    print!("{}", planted_lead_table(&PlantedLeadSpec::default()).to_csv_string());
}
