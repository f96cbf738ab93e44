//! The `.dat` study-table format: tab-separated, fixed seven-column header,
//! reals in scientific notation with four significant digits, `nan` for
//! unavailable values.

pub const HEADER: &str = "L\tnv\tndof\terrL2_u\terrH1_u\tL2_dxph\tinfsup";
pub const COLUMNS: [&str; 7] = ["L", "nv", "ndof", "errL2_u", "errH1_u", "L2_dxph", "infsup"];

/// `1.175e+00`-style scientific notation with 4 significant digits.
pub fn fmt_sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let s = format!("{x:.3e}");
    let (mantissa, exp) = s.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    format!("{mantissa}e{exp:+03}")
}

/// Parsed study table.
pub struct Table {
    /// One row per level, all seven columns as reals.
    pub rows: Vec<[f64; 7]>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Table, String> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, head)) if head == HEADER => {}
            Some((_, head)) => {
                return Err(format!("line 1: bad header `{head}`"));
            }
            None => return Err("line 1: empty table".into()),
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            let n = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 7 {
                return Err(format!("line {n}: expected 7 fields, got {}", fields.len()));
            }
            let mut row = [0.0f64; 7];
            for (i, f) in fields.iter().enumerate() {
                row[i] = if *f == "nan" {
                    f64::NAN
                } else {
                    f.parse()
                        .map_err(|_| format!("line {n}: field {}: bad number `{f}`", i + 1))?
                };
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err("table has no data rows".into());
        }
        Ok(Table { rows })
    }

    /// `(nv, value)` pairs of the rows where the column is finite.
    pub fn finite_points(&self, col: usize) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r[col].is_finite() && r[col] > 0.0)
            .map(|r| (r[1], r[col]))
            .collect()
    }

    /// DOF count at which this table reaches the target error, by log-log
    /// interpolation between levels; extrapolates past the final level with
    /// the fitted slope. `None` when the error never decays to the target.
    pub fn dofs_to_reach(&self, col: usize, target: f64, tail_slope: f64) -> Option<f64> {
        let pts = self.finite_points(col);
        let (first_nv, first_err) = *pts.first()?;
        if first_err <= target {
            return Some(first_nv);
        }
        for pair in pts.windows(2) {
            let [(nv0, e0), (nv1, e1)] = [pair[0], pair[1]];
            if e1 <= target && target <= e0 {
                let t = (target.ln() - e0.ln()) / (e1.ln() - e0.ln());
                return Some((nv0.ln() + t * (nv1.ln() - nv0.ln())).exp());
            }
        }
        let (nv_last, e_last) = *pts.last()?;
        if tail_slope < 0.0 {
            Some(nv_last * (target / e_last).powf(1.0 / tail_slope))
        } else {
            None
        }
    }
}
