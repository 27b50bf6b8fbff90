//! Minimal CSV writer with a pinned number format: `f64` values use Rust's
//! shortest round-trip `Display`, `,` delimiter, `\n` line endings and a
//! mandatory header row.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Float values of a column, skipping non-numeric cells.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column_index(name)?;
        Some(
            self.rows
                .iter()
                .filter_map(|r| match r[idx] {
                    Cell::Float(v) => Some(v),
                    Cell::Int(v) => Some(v as f64),
                    Cell::Text(_) => None,
                })
                .collect(),
        )
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Float(v) => write!(out, "{v}").unwrap(),
                    Cell::Int(v) => write!(out, "{v}").unwrap(),
                    Cell::Text(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_round_trip_numbers() {
        let mut t = CsvTable::new(vec!["t".into(), "v".into(), "n".into()]);
        t.push(vec![0.1.into(), (1.0 / 3.0).into(), 24u64.into()]);
        t.push(vec![Cell::Text("mean".into()), 1e-20.into(), 0u64.into()]);
        let text = t.render();
        assert_eq!(
            text,
            "t,v,n\n0.1,0.3333333333333333,24\nmean,0.00000000000000000001,0\n"
        );
        for line in text.lines().skip(1) {
            let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!(v == 1.0 / 3.0 || v == 1e-20);
        }
        assert_eq!(t.column("v").unwrap(), vec![1.0 / 3.0, 1e-20]);
        assert_eq!(t.column("t").unwrap(), vec![0.1]);
    }
}
