//! Result tables and their CSV/TSV serialisation.

use std::io::Write;
use std::path::Path;

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(n) => Some(*n as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Column headers are `name [unit]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Self {
            columns: columns.iter().map(|(n, u)| format!("{n} [{u}]")).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<(), CliError> {
        if row.len() != self.columns.len() {
            return Err(CliError::Internal(format!(
                "row has {} cells for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns
            .iter()
            .position(|c| c == name || c.split(" [").next() == Some(name))
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        self.rows.iter().map(|r| r[j].as_f64()).collect()
    }
}

/// Writes `table` as delimited text; an empty table is an error.
pub fn emit<W: Write>(table: &Table, format: Format, out: W) -> Result<(), CliError> {
    if table.rows.is_empty() {
        return Err(CliError::Internal("refusing to emit an empty table".into()));
    }
    let mut w = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_to_path(table: &Table, format: Format, path: &Path) -> Result<(), CliError> {
    if table.rows.is_empty() {
        return Err(CliError::Internal("refusing to emit an empty table".into()));
    }
    let file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    emit(table, format, std::io::BufWriter::new(file))
}

/// Parses delimited text produced by [`emit`]; numeric-looking cells become `Num`.
pub fn parse(text: &str, format: Format) -> Result<Table, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .from_reader(text.as_bytes());
    let columns = r.headers()?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(
            rec.iter()
                .map(|s| {
                    if s.contains(['e', 'N']) {
                        s.parse::<f64>().map(Cell::Num).unwrap_or_else(|_| Cell::Text(s.to_owned()))
                    } else {
                        s.parse::<i64>().map(Cell::Int).unwrap_or_else(|_| Cell::Text(s.to_owned()))
                    }
                })
                .collect(),
        );
    }
    Ok(Table { columns, rows })
}
