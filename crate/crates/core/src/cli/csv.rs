//! Trajectory CSV: header `t,x1,y1,x2,y2,z,H,I,C`, 17 significant digits.

use std::io::{self, Write};

use crate::system::{conserved, State5};
use crate::{Error, Result};

pub const HEADER: &str = "t,x1,y1,x2,y2,z,H,I,C";

pub fn write_header(w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "{HEADER}")
}

pub fn write_row(w: &mut dyn Write, t: f64, p: &State5) -> io::Result<()> {
    let q = conserved(p);
    let cols = [t, p.x1, p.y1, p.x2, p.y2, p.z, q.h, q.i, q.c];
    let mut first = true;
    for v in cols {
        if !first {
            w.write_all(b",")?;
        }
        first = false;
        write!(w, "{v:.16e}")?;
    }
    writeln!(w)
}

/// One parsed row: time, state, and the stored `(H, I, C)` columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub t: f64,
    pub state: State5,
    pub hic: [f64; 3],
}

/// Parses a trajectory CSV. Anything after the last numeric row (such as an
/// appended JSON summary) is ignored.
pub fn parse(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == HEADER => {}
        _ => return Err(Error::Config("missing trajectory CSV header".into())),
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.starts_with('{') || line.trim().is_empty() {
            break;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("bad CSV field: {e}")))?;
        if vals.len() != 9 {
            return Err(Error::Config(format!("expected 9 columns, found {}", vals.len())));
        }
        rows.push(Row {
            t: vals[0],
            state: State5::new(vals[1], vals[2], vals[3], vals[4], vals[5]),
            hic: [vals[6], vals[7], vals[8]],
        });
    }
    Ok(rows)
}
