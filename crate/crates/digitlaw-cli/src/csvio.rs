//! Minimal CSV ingestion: header row required, column by name or 0-based
//! index, comma separator, no quoting. Values with thousands separators
//! or other locale formatting fail to parse and are dropped (and counted)
//! rather than guessed at.

use digitlaw::digitcore::{canonicalize, Dataset, RawEntry};

pub struct CsvColumn {
    pub dataset: Dataset,
    pub column_name: String,
    pub rows: usize,
}

pub fn read_column(text: &str, column: &str) -> Result<CsvColumn, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file: a header row is required")?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let index = match names.iter().position(|n| *n == column) {
        Some(i) => i,
        None => column
            .parse::<usize>()
            .ok()
            .filter(|i| *i < names.len())
            .ok_or_else(|| {
                format!(
                    "column '{column}' not found; header has: {}",
                    names.join(", ")
                )
            })?,
    };
    let mut raw = Vec::new();
    let mut rows = 0usize;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        rows += 1;
        let field = line.split(',').nth(index).unwrap_or("").trim();
        raw.push(RawEntry::Text(field.to_string()));
    }
    Ok(CsvColumn {
        dataset: canonicalize(raw),
        column_name: names[index].to_string(),
        rows,
    })
}

/// Read a curve file with header `s,G` into knot vectors.
pub fn read_curve(text: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty curve file")?;
    if header.trim() != "s,G" {
        return Err(format!("expected header 's,G', got '{header}'"));
    }
    let mut knots = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let s: f64 = parts
            .next()
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| format!("bad s value on data row {}", i + 1))?;
        let g: f64 = parts
            .next()
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| format!("bad G value on data row {}", i + 1))?;
        knots.push((s, g));
    }
    if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err("curve s values must be strictly increasing".into());
    }
    Ok(knots)
}

pub fn write_curve(points: &[(f64, f64)]) -> String {
    let mut out = String::from("s,G\n");
    for (s, g) in points {
        out.push_str(&format!("{s:.12},{g:.12}\n"));
    }
    out
}

/// FNV-1a 64-bit content hash for provenance blocks.
pub fn fnv1a(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}
