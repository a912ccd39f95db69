use crate::Failure;
use selberg_det::Complex64;
use std::io::Write;
use std::path::Path;

/// 17 significant digits, enough to read back the same double.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn cplx(z: Complex64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

/// A CSV table with a fixed column order. Column names carry their unit in
/// brackets; `[1]` marks a dimensionless quantity.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.header.len());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Lib(selberg_det::Error::Io(format!("{}: {e}", path.display())))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Lib(selberg_det::Error::Io(format!("stdout: {e}"))))
        }
    }
}
