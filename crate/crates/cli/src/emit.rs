//! Sweep-table emission: CSV with 12-significant-digit numbers and LF line
//! endings, or JSON mirroring the same fields plus run metadata. Both are
//! byte-identical across reruns of the same config.

use crate::config::OutputFormat;
use crate::sweep::SweepTable;
use crate::CliError;
use secrecy_relay::awgn::Strategy;

/// 12 significant digits, scientific notation (deterministic rendering).
pub fn fmt_sig12(x: f64) -> String {
    format!("{:.11e}", x)
}

fn columns(table: &SweepTable) -> Vec<String> {
    let mut cols = vec!["x".to_string()];
    for s in Strategy::ALL {
        if table.strategies.iter().any(|n| n == s.name()) {
            cols.push(match s {
                Strategy::DeafNf => "deaf_nf".to_string(),
                other => other.name().to_string(),
            });
        }
    }
    cols.push("outer".to_string());
    if table.has_ci {
        if table.strategies.iter().any(|n| n == "df") {
            cols.push("df_ci".to_string());
        }
        if table.strategies.iter().any(|n| n == "af") {
            cols.push("af_ci".to_string());
        }
    }
    cols
}

fn cell(table: &SweepTable, row_idx: usize, col: &str) -> f64 {
    let row = &table.rows[row_idx];
    match col {
        "x" => row.x,
        "wiretap" => row.wiretap.unwrap_or(f64::NAN),
        "df" => row.df.unwrap_or(f64::NAN),
        "nf" => row.nf.unwrap_or(f64::NAN),
        "cf" => row.cf.unwrap_or(f64::NAN),
        "af" => row.af.unwrap_or(f64::NAN),
        "deaf_nf" => row.deaf_nf.unwrap_or(f64::NAN),
        "outer" => row.outer,
        "df_ci" => row.df_ci.unwrap_or(f64::NAN),
        "af_ci" => row.af_ci.unwrap_or(f64::NAN),
        _ => f64::NAN,
    }
}

pub fn emit_csv(table: &SweepTable) -> Vec<u8> {
    let cols = columns(table);
    let mut out = String::new();
    out.push_str(&cols.join(","));
    out.push('\n');
    for i in 0..table.rows.len() {
        let cells: Vec<String> = cols.iter().map(|c| fmt_sig12(cell(table, i, c))).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

pub fn emit_json(table: &SweepTable) -> Vec<u8> {
    let doc = serde_json::json!({
        "metadata": table.metadata,
        "columns": columns(table),
        "rows": table.rows,
    });
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("table serializes");
    bytes.push(b'\n');
    bytes
}

/// Renders the table in the requested format.
pub fn emit(table: &SweepTable, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Csv => emit_csv(table),
        OutputFormat::Json => emit_json(table),
    }
}

/// Parses bytes produced by [`emit_csv`] back into (header, rows).
pub fn parse_csv(bytes: &[u8]) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let text =
        std::str::from_utf8(bytes).map_err(|e| CliError::Config(format!("csv: {e}")))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| CliError::Config("csv: empty".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|cell| {
                cell.parse::<f64>()
                    .map_err(|e| CliError::Config(format!("csv line {}: {e}", ln + 2)))
            })
            .collect::<Result<_, _>>()?;
        if row.len() != header.len() {
            return Err(CliError::Config(format!(
                "csv line {}: {} cells, header has {}",
                ln + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig12(0.05), "5.00000000000e-2");
        assert_eq!(fmt_sig12(0.0), "0.00000000000e0");
        assert_eq!(fmt_sig12(1.0 / 3.0), "3.33333333333e-1");
        let x = 0.39082720586312706;
        let rt: f64 = fmt_sig12(x).parse().unwrap();
        assert!((rt - x).abs() < 1e-12);
    }
}
