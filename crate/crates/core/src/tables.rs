//! The table of second and third quandle homology and pi_2 for the small regular
//! Alexander quandles, with expected values embedded from `fixtures/regular_table.txt`.

use crate::homology::{AbelianGroupClass, QuandleHomology, Variant};
use crate::homotopy::{pi2_quandle_space_with, Derivation};
use crate::quandle::AlexanderQuandle;

const REGULAR_TABLE: &str = include_str!("../fixtures/regular_table.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub label: String,
    /// Quandle specs that all represent this row.
    pub specs: Vec<String>,
    /// H_2^Q, H_3^Q, pi_2.
    pub expected: [AbelianGroupClass; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowComputation {
    pub spec: String,
    pub values: Result<([AbelianGroupClass; 3], Derivation), String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowOutcome {
    pub row: TableRow,
    pub computed: Vec<RowComputation>,
}

impl RowOutcome {
    pub fn passed(&self) -> bool {
        self.computed.iter().all(|c| matches!(&c.values, Ok((v, _)) if *v == self.row.expected))
    }
}

/// The embedded rows. Panics only if the fixture shipped with the crate is malformed.
pub fn regular_table() -> Vec<TableRow> {
    parse_table(REGULAR_TABLE).expect("embedded table fixture is well formed")
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>, String> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        let [label, specs, h2, h3, pi2] = cols[..] else {
            return Err(format!("line {}: expected 5 columns", i + 1));
        };
        let group = |s: &str| s.parse::<AbelianGroupClass>().map_err(|e| format!("line {}: {e}", i + 1));
        rows.push(TableRow {
            label: label.to_string(),
            specs: specs.split(',').map(|s| s.trim().to_string()).collect(),
            expected: [group(h2)?, group(h3)?, group(pi2)?],
        });
    }
    Ok(rows)
}

pub fn compute_spec(spec: &str) -> Result<([AbelianGroupClass; 3], Derivation), String> {
    let x = AlexanderQuandle::parse(spec).map_err(|e| e.to_string())?;
    let h = QuandleHomology::new(x.quandle(), 4);
    let h2 = h.homology(Variant::Q, 2).map_err(|e| e.to_string())?;
    let h3 = h.homology(Variant::Q, 3).map_err(|e| e.to_string())?;
    let pi2 = pi2_quandle_space_with(&x, &h).map_err(|e| e.to_string())?;
    Ok(([h2, h3, pi2.value], pi2.derivation))
}

pub fn evaluate_row(row: &TableRow) -> RowOutcome {
    let computed = row.specs.iter().map(|s| RowComputation { spec: s.clone(), values: compute_spec(s) }).collect();
    RowOutcome { row: row.clone(), computed }
}
