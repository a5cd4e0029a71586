//! CSV formatting shared by every emitter: comma separated, `.` decimal
//! point, LF line endings, 17 significant digits so binary64 values
//! round-trip exactly.

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header plus rows, each row already split into fields.
pub fn csv<S: AsRef<str>>(header: &[&str], rows: impl IntoIterator<Item = Vec<S>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<&str> = row.iter().map(AsRef::as_ref).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
