//! CSV dumps of spinor fields, one row per cell in storage order.

use std::io::{BufRead, Write};

use super::field::{Basis, SpinorField};
use crate::{Error, Result, C64};

fn header(basis: Basis) -> &'static str {
    match basis {
        Basis::Original => "x,y,re_up,im_up,re_down,im_down",
        _ => "n_plus,n_minus,re_up,im_up,re_down,im_down",
    }
}

/// Write `field` as CSV. Floats use the shortest representation that parses
/// back to the same bits.
pub fn write_field_csv<W: Write>(field: &SpinorField, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{}", header(field.basis()))?;
    let (n0, n1) = field.extents();
    for i in 0..n0 {
        for j in 0..n1 {
            let a = field.amplitudes()[i * n1 + j];
            writeln!(w, "{i},{j},{:?},{:?},{:?},{:?}", a[0].re, a[0].im, a[1].re, a[1].im)?;
        }
    }
    Ok(())
}

/// Parse a dump written by [`write_field_csv`]. Extents are taken from the
/// largest cell index present.
pub fn read_field_csv<R: BufRead>(r: R, basis: Basis) -> Result<SpinorField> {
    let bad = |line: usize, what: &str| Error::InvalidParameter(format!("line {line}: {what}"));
    let mut lines = r.lines();
    let head = lines
        .next()
        .ok_or_else(|| bad(1, "missing header"))?
        .map_err(|e| bad(1, &e.to_string()))?;
    if head.trim() != header(basis) {
        return Err(bad(1, "unexpected header"));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line.map_err(|e| bad(n + 2, &e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(bad(n + 2, "expected 6 columns"));
        }
        let idx = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(n + 2, "bad index"));
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(n + 2, "bad number"));
        rows.push((
            idx(f[0])?,
            idx(f[1])?,
            [C64::new(num(f[2])?, num(f[3])?), C64::new(num(f[4])?, num(f[5])?)],
        ));
    }
    let n0 = rows.iter().map(|r| r.0 + 1).max().unwrap_or(0);
    let n1 = rows.iter().map(|r| r.1 + 1).max().unwrap_or(0);
    let mut field = SpinorField::zeros(basis, (n0, n1))?;
    for (i, j, a) in rows {
        let k = field.index(i, j);
        field.amplitudes_mut()[k] = a;
    }
    Ok(field)
}
