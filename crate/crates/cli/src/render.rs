use std::fmt::Write as _;

use serde::Serialize;
use zpk_cycles::catmap::CensusReport;
use zpk_cycles::dynamics::{CycleHistogram, MapMod};

use crate::commands::{CatReport, DMatrixReport, EnumerateReport, GraphReport, OrderCheck, PolyReport};
use crate::Format;

/// Text and CSV forms of a report; JSON comes from serde.
pub trait Render: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> Option<Result<String, String>> {
        None
    }
}

pub fn render<R: Render>(r: &R, fmt: Format) -> Result<String, String> {
    match fmt {
        Format::Json => serde_json::to_string_pretty(r).map(|s| s + "\n").map_err(|e| e.to_string()),
        Format::Text => Ok(r.text()),
        Format::Csv => r.csv().unwrap_or_else(|| Err("csv output is available for census, enumerate and verify-order".into())),
        Format::Dot => Err("dot output is only available for enumerate".into()),
    }
}

fn csv_rows<S: Serialize>(rows: impl IntoIterator<Item = S>) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn histogram_lines(out: &mut String, h: &CycleHistogram) {
    let _ = writeln!(out, "  {:>10}  {:>10}", "length", "cycles");
    for (t, n) in &h.cycles {
        let _ = writeln!(out, "  {t:>10}  {n:>10}");
    }
    let _ = writeln!(out, "  states: {}", h.states);
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

impl Render for PolyReport {
    fn text(&self) -> String {
        let mut s = format!("f = {} over Z/{}^k\nP_1 = {}\nk_s = {} ({:?})\nsplitting degree = {}\n", self.f, self.p, self.p1, self.ks, self.rule, self.splitting_degree);
        for r in &self.roots {
            let fk = r.fk.map_or("-".to_string(), |t| t.to_string());
            let _ = writeln!(s, "root {} multiplicity {} order {} f_k {}", r.root, r.multiplicity, r.order, fk);
        }
        for (k, pk) in &self.orders {
            let _ = writeln!(s, "P_{k} = {pk}");
        }
        s
    }
}

impl Render for OrderCheck {
    fn text(&self) -> String {
        format!("{}: f = {} p = {} k = {}: theory {} oracle {} (k_s = {})\n", verdict(self.pass), self.f, self.p, self.k, self.theory, self.oracle, self.ks)
    }

    fn csv(&self) -> Option<Result<String, String>> {
        #[derive(Serialize)]
        struct Row<'a> {
            f: &'a str,
            p: u64,
            k: u32,
            theory: u128,
            oracle: u128,
            ks: String,
            pass: bool,
        }
        Some(csv_rows([Row { f: &self.f, p: self.p, k: self.k, theory: self.theory, oracle: self.oracle, ks: self.ks.to_string(), pass: self.pass }]))
    }
}

impl Render for CatReport {
    fn text(&self) -> String {
        let mut s = format!("Cat map a = {} b = {} over Z/{}^{}\nf = {}\nperiod = {}\n", self.a, self.b, self.p, self.k, self.poly, self.period);
        if let Some(pr) = &self.prediction {
            let _ = writeln!(s, "table row {:?}, predicted period {}", pr.row, pr.period);
        }
        if let Some(n) = &self.notice {
            let _ = writeln!(s, "note: {n}");
        }
        if let Some(t) = &self.thresholds {
            let _ = writeln!(s, "stabilization threshold {} (coarse bound {})", t.threshold, t.coarse_bound);
        }
        if let Some(h) = &self.histogram {
            histogram_lines(&mut s, h);
        }
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", verdict(c.pass), c.name, c.detail);
        }
        s
    }
}

impl Render for EnumerateReport {
    fn text(&self) -> String {
        let mut s = format!("{} over Z/{}^{}\n", self.map, self.p, self.k);
        histogram_lines(&mut s, &self.histogram);
        s
    }

    fn csv(&self) -> Option<Result<String, String>> {
        #[derive(Serialize)]
        struct Row {
            #[serde(rename = "T")]
            t: u64,
            count: u64,
        }
        Some(csv_rows(self.histogram.cycles.iter().map(|(&t, &count)| Row { t, count })))
    }
}

impl Render for GraphReport {
    fn text(&self) -> String {
        let mut s = format!("{} over Z/{}^{}\nglobal period {}\n", self.map, self.p, self.k, self.global_period);
        histogram_lines(&mut s, &self.histogram);
        let _ = writeln!(s, "{} cycle lengths divide the global period", verdict(self.lengths_divide_period));
        if let Some(e) = &self.embedding {
            let _ = writeln!(s, "{} multiples of p copy precision {} ({} mismatches)", verdict(e.pass), self.k - 1, e.pointwise_mismatches);
        }
        if let Some(l) = &self.lift_law {
            let _ = writeln!(s, "{} lcm lifting law: {} pairs, {} failures", verdict(l.pass), l.checked, l.failures);
        }
        s
    }
}

impl Render for CensusReport {
    fn text(&self) -> String {
        let mut s = format!("census p = {} k = {}\n  {:>10}  {:>10}  {:>10}\n", self.p, self.k, "T", "table", "measured");
        for r in &self.rows {
            let _ = writeln!(s, "  {:>10}  {:>10}  {:>10}  {}", r.t, r.predicted_count, r.measured_count, verdict(r.pass));
        }
        let _ = writeln!(s, "totals: table {} measured {}", self.predicted_total, self.measured_total);
        let _ = writeln!(s, "pairs whose own prediction misses: {}", self.prediction_mismatches);
        s
    }

    fn csv(&self) -> Option<Result<String, String>> {
        #[derive(Serialize)]
        struct Row {
            #[serde(rename = "T")]
            t: u128,
            predicted_count: u128,
            measured_count: u128,
            pass: bool,
        }
        Some(csv_rows(self.rows.iter().map(|r| Row { t: r.t, predicted_count: r.predicted_count, measured_count: r.measured_count, pass: r.pass })))
    }
}

impl Render for DMatrixReport {
    fn text(&self) -> String {
        let mut s = format!("{} over Z/{}, v = {}\nbasis {:?}\n", self.map, self.p, self.v, self.d.basis);
        for row in &self.d.entries {
            let _ = writeln!(s, "  {row:?}");
        }
        if !self.d.hypothesis_met {
            s.push_str("note: v <= nu(P_1)\n");
        }
        for v in &self.d.violations {
            let _ = writeln!(s, "violation: {v}");
        }
        let r = &self.recursion;
        let _ = writeln!(s, "{} N_{}({}) = {:?} -> predicted {:?}, measured {:?}", verdict(r.pass), r.k, r.v, r.measured_from, r.predicted, r.measured_to);
        s
    }
}

/// The functional graph as DOT, one node per state.
pub fn dot(m: &MapMod) -> zpk_cycles::Result<String> {
    let label = |x: &[u64]| x.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let mut s = format!("digraph \"{}\" {{\n  node [shape=circle];\n", m.map().label().replace('"', "'"));
    let states: Vec<_> = m.states()?.collect();
    for x in &states {
        let _ = writeln!(s, "  \"{}\";", label(x));
    }
    for x in &states {
        let _ = writeln!(s, "  \"{}\" -> \"{}\";", label(x), label(&m.apply(x)));
    }
    s.push_str("}\n");
    Ok(s)
}
