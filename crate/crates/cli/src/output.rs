use std::fmt::Write as _;

use restricted_hpd::coverage::CoverageRow;

use crate::{CliError, Format, Report};

/// `x` rounded to 9 significant digits, written in plain decimal.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    rounded.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

pub const COVERAGE_HEADER: [&str; 8] = [
    "tau",
    "estimate",
    "std_err",
    "n_reps",
    "theory_bound",
    "bound_direction",
    "boundary_flag",
    "closed_form",
];

fn coverage_record(r: &CoverageRow) -> [String; 8] {
    [
        sig9(r.tau),
        sig9(r.estimate),
        sig9(r.std_err),
        r.n_reps.to_string(),
        sig9(r.theory_bound),
        r.bound_direction.to_string(),
        r.boundary_flag.to_string(),
        opt(r.closed_form),
    ]
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_text<T: serde::Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.into()))?;
    s.push('\n');
    Ok(s)
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => match report {
            Report::Interval(r) => json_text(r),
            Report::Bounds(r) => json_text(r),
            Report::Coverage(r, _) => json_text(&r.rows),
            Report::Skew(r) => json_text(r),
        },
        Format::Csv => match report {
            Report::Coverage(r, _) => {
                let rows: Vec<Vec<String>> = r.rows.iter().map(|x| coverage_record(x).to_vec()).collect();
                csv_text(&COVERAGE_HEADER, &rows)
            }
            Report::Interval(r) => csv_text(
                &["model", "alpha", "a1", "a2", "class", "branch", "lower", "upper", "parameter_lower", "parameter_upper"],
                &[vec![
                    r.model.clone(),
                    sig9(r.alpha),
                    sig9(r.a1),
                    sig9(r.a2),
                    r.class.to_string(),
                    r.branch.to_string(),
                    sig9(r.lower),
                    sig9(r.upper),
                    sig9(r.parameter.lower),
                    sig9(r.parameter.upper),
                ]],
            ),
            Report::Bounds(r) => csv_text(
                &["model", "alpha", "class", "threshold", "uniform_bound", "direction", "boundary_value", "limit"],
                &[vec![
                    r.model.clone(),
                    sig9(r.alpha),
                    r.class.to_string(),
                    opt(r.threshold),
                    sig9(r.uniform_bound),
                    r.direction.to_string(),
                    sig9(r.boundary_value),
                    sig9(r.limit),
                ]],
            ),
            Report::Skew(r) => csv_text(
                &["model", "resolution", "holds", "worst_z", "worst_margin"],
                &[vec![
                    r.model.clone(),
                    r.resolution.to_string(),
                    r.holds.to_string(),
                    sig9(r.worst_z),
                    sig9(r.worst_margin),
                ]],
            ),
        },
        Format::Human => Ok(human(report)),
    }
}

fn human(report: &Report) -> String {
    let mut s = String::new();
    write_human(&mut s, report).expect("writing to a String");
    s
}

fn write_human(s: &mut String, report: &Report) -> std::fmt::Result {
    match report {
        Report::Interval(r) => {
            writeln!(s, "model      {} (pivot {})", r.model, r.pivot)?;
            writeln!(s, "alpha      {}", r.alpha)?;
            writeln!(s, "a1, a2     {:.6}, {:.6}  (t = {:.6})", r.a1, r.a2, r.t)?;
            writeln!(s, "class      {}", r.class)?;
            if let Some(y) = r.threshold {
                writeln!(s, "threshold  {y:.6}")?;
            }
            let note = if r.hpd { "" } else { " (not shortest: multimodal pivot)" };
            writeln!(s, "branch     {}{note}", r.branch)?;
            writeln!(s, "tau        [{:.6}, {:.6}]", r.lower, r.upper)?;
            writeln!(s, "parameter  [{:.6}, {:.6}]", r.parameter.lower, r.parameter.upper)
        }
        Report::Bounds(r) => {
            writeln!(s, "model      {} (pivot {})", r.model, r.pivot)?;
            writeln!(s, "alpha      {}", r.alpha)?;
            writeln!(s, "class      {}", r.class)?;
            if let Some(y) = r.threshold {
                let name = if r.symmetric { "d0" } else { "y0" };
                writeln!(s, "{name:<11}{y:.6}")?;
            }
            writeln!(s, "{:<11}{:.6}", r.direction.to_string(), r.uniform_bound)?;
            writeln!(s, "boundary   {:.6}", r.boundary_value)?;
            writeln!(s, "limit      {:.6}", r.limit)
        }
        Report::Coverage(r, verdict) => {
            writeln!(s, "{:>10} {:>10} {:>9} {:>9}  {:<8}  check", "tau", "estimate", "std_err", "bound", "kind")?;
            for (row, v) in r.rows.iter().zip(&verdict.rows) {
                let kind = if row.boundary_flag { "boundary".to_string() } else { row.bound_direction.to_string() };
                writeln!(
                    s,
                    "{:>10.4} {:>10.6} {:>9.2e} {:>9.6}  {kind:<8}  {}",
                    row.tau,
                    row.estimate,
                    row.std_err,
                    row.theory_bound,
                    if v.pass { "ok" } else { "FAIL" }
                )?;
            }
            let summary = if verdict.all_pass() {
                "all rows consistent with the bounds"
            } else {
                "some rows violate the bounds"
            };
            writeln!(s, "alpha {}  seed {}  limit {:.6}  {summary}", r.alpha, r.seed, r.bounds.limit)
        }
        Report::Skew(r) => {
            writeln!(s, "model         {} (pivot {})", r.model, r.pivot)?;
            writeln!(s, "holds         {}", r.holds)?;
            writeln!(s, "worst z       {:.6}", r.worst_z)?;
            writeln!(s, "worst margin  {:.6e}", r.worst_margin)?;
            writeln!(s, "resolution    {}", r.resolution)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::sig9;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.979_353_123_456), "0.979353123");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(123_456_789_012.0), "123456789000");
        assert_eq!(sig9(-2.5e-7), "-0.00000025");
        assert_eq!(sig9(0.0), "0");
    }
}
