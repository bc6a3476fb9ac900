use std::fmt::Write as _;
use std::path::Path;

/// 17 significant digits, so every value parses back to the same f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// A CSV table with `#`-prefixed metadata lines above a single header row.
#[derive(Debug, Default)]
pub struct CsvTable {
    meta: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, fields: Vec<String>) {
        debug_assert_eq!(fields.len(), self.header.len());
        self.rows.push(fields);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

/// Lines of a CSV document that are not metadata.
pub fn csv_body(doc: &str) -> String {
    doc.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn quote(p: &Path) -> String {
    format!("'{}'", p.display().to_string().replace('\'', "''"))
}

pub fn sweep_plot_script(data: &Path, tau_k: Option<f64>) -> String {
    let mut s = String::from(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set logscale xy\n\
         set format y '%.0e'\n\
         set xlabel 'tau'\n\
         set ylabel 'error'\n",
    );
    if let Some(t) = tau_k {
        let _ = writeln!(
            s,
            "set arrow from {t:e}, graph 0 to {t:e}, graph 1 nohead dt 2"
        );
    }
    let d = quote(data);
    let _ = writeln!(
        s,
        "plot {d} using 1:2 with linespoints, {d} using 1:3 with linespoints, {d} using 1:4 with linespoints"
    );
    s
}

pub fn convergence_plot_script(data: &Path) -> String {
    let d = quote(data);
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead left top\n\
         set logscale xy\n\
         set format y '%.0e'\n\
         set xlabel 'h'\n\
         set ylabel 'error'\n\
         plot {d} using 2:6 with linespoints, {d} using 2:7 with linespoints, {d} using 2:8 with linespoints\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-300, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(opt(None), "");
    }

    #[test]
    fn body_drops_metadata() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.meta("k", 1);
        t.row(vec!["1".into(), "".into()]);
        let doc = t.render();
        assert!(doc.starts_with("# k = 1\n"));
        assert_eq!(csv_body(&doc), "a,b\n1,\n");
    }
}
