//! CSV and JSON emission with shortest round-trip floats.

use std::io::{self, Write};

use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

use crate::config::Format;

/// Shortest representation that round-trips; never more than 17 significant digits.
pub fn float(v: f64) -> String {
    ryu::Buffer::new().format(v).to_string()
}

/// Named columns of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Leading columns holding indices, written without a fractional part.
    pub index_columns: usize,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new(), index_columns: 0 }
    }

    pub fn indexed(columns: &[&'static str]) -> Self {
        Table { index_columns: 1, ..Self::new(columns) }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, v)| if i < self.index_columns { format!("{}", *v as u64) } else { float(*v) })
                .collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write(&self, format: Format, w: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, self)?;
                writeln!(w)
            }
        }
    }
}

struct Row<'a>(&'a [&'static str], &'a [f64], usize);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (i, (k, v)) in self.0.iter().zip(self.1).enumerate() {
            // Non-finite values (an undefined g2) become null.
            if i < self.2 {
                map.serialize_entry(k, &(*v as u64))?;
            } else if v.is_finite() {
                map.serialize_entry(k, v)?;
            } else {
                map.serialize_entry(k, &())?;
            }
        }
        map.end()
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for row in &self.rows {
            seq.serialize_element(&Row(&self.columns, row, self.index_columns))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(float(0.1), "0.1");
        assert_eq!(float(1.0), "1.0");
        assert_eq!(float(f64::NAN), "NaN");
        let x = std::f64::consts::PI;
        assert_eq!(float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn table_output() {
        let mut t = Table::new(&["t", "g2"]);
        t.push(vec![0.0, f64::NAN]);
        t.push(vec![0.5, 3.25]);
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "t,g2\n0.0,NaN\n0.5,3.25\n");
        let json = serde_json::to_value(&t).unwrap();
        assert!(json[0]["g2"].is_null());
        assert_eq!(json[1]["g2"], 3.25);
        let mut t = Table::indexed(&["m", "re"]);
        t.push(vec![3.0, 0.5]);
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "m,re\n3,0.5\n");
    }
}
