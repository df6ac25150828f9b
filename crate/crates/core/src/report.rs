//! Report types and their text, JSON and CSV renderings.
//!
//! JSON floats use the shortest representation that parses back to the same
//! double. Text output rounds to 7 significant digits. CSV column order is
//! fixed per report type; see [`Report::csv_header`].

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{period, scc, DirectedGraph};
use crate::markov::{eml_symbol_check, SpectralProfile};
use crate::mixing::{EmlReport, FormSummary, SubsetPair};
use crate::toughness::{BoundComparison, ExtReal, ToughnessResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edge_count: usize,
    pub strongly_connected: bool,
    pub component_count: usize,
    /// Only defined for strongly connected graphs.
    pub period: Option<usize>,
    /// Vertex labels in index order.
    pub labels: Vec<String>,
}

impl GraphSummary {
    pub fn new(g: &DirectedGraph) -> Result<Self> {
        let component_count = scc(g).component_count;
        let strongly_connected = component_count == 1;
        Ok(GraphSummary {
            n: g.vertex_count(),
            edge_count: g.edge_count(),
            strongly_connected,
            component_count,
            period: if strongly_connected {
                Some(period(g)?)
            } else {
                None
            },
            labels: (0..g.vertex_count()).map(|v| g.label(v)).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSection {
    /// Descending modulus, then descending real part, then descending
    /// imaginary part.
    pub eigenvalues: Vec<ComplexValue>,
    pub rho: f64,
    pub pi: Vec<f64>,
    pub pi_min: f64,
    pub pi_max: f64,
    pub norm_c: f64,
    pub norm_c_inv: f64,
    pub kappa: f64,
    /// `||PC - C diag(lambda)||_F`
    pub residual: f64,
    /// `max_j |(C^-1)_{0j} - sqrt(n) pi_j|`
    pub dual_row_deviation: f64,
}

impl SpectralSection {
    pub fn new(profile: &SpectralProfile) -> Self {
        let mut eigenvalues = profile.eigenvalues().to_vec();
        eigenvalues.sort_by_key(|&z| crate::linalg::order_key(z));
        SpectralSection {
            eigenvalues: eigenvalues.into_iter().map(ComplexValue::from).collect(),
            rho: profile.rho,
            pi: profile.pi.clone(),
            pi_min: profile.pi_min,
            pi_max: profile.pi_max,
            norm_c: profile.norm_c,
            norm_c_inv: profile.norm_c_inv,
            kappa: profile.kappa,
            residual: profile.decomposition.residual,
            dual_row_deviation: eml_symbol_check(profile).dual_row_deviation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub graph: GraphSummary,
    pub spectral: SpectralSection,
    pub eml: Option<EmlReport>,
    pub toughness: Option<BoundComparison>,
}

/// Both bound forms on one subset pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub u: Vec<usize>,
    pub w: Vec<usize>,
    pub u_labels: Vec<String>,
    pub w_labels: Vec<String>,
    pub lhs: f64,
    pub lhs_u_centered: f64,
    pub bound: f64,
    pub bound_simple: f64,
    /// `lhs <= bound + slack_tol` and `lhs <= bound_simple + slack_tol`
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToughnessBoundReport {
    pub spectral_bound: ExtReal,
    /// Present for symmetric regular graphs only.
    pub alon_bound: Option<ExtReal>,
    pub note: Option<String>,
}

/// A report that can be rendered in every output format.
pub trait Report: Serialize {
    fn text(&self) -> String;
    fn csv_header(&self) -> &'static [&'static str];
    fn csv_rows(&self) -> Vec<Vec<String>>;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report types serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(self.csv_header()).expect("in-memory write");
                for row in self.csv_rows() {
                    w.write_record(&row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
            }
        }
    }
}

/// `%.7g`-style formatting.
pub fn sig7(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..7).contains(&exp) {
        let decimals = (6 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.6e}")
    }
}

fn ext7(x: ExtReal) -> String {
    match x {
        ExtReal::Finite(v) => sig7(v),
        ExtReal::Infinite => "infinite".into(),
    }
}

fn complex7(z: ComplexValue) -> String {
    if z.im == 0.0 {
        sig7(z.re)
    } else if z.im < 0.0 {
        format!("{} - {}i", sig7(z.re), sig7(-z.im))
    } else {
        format!("{} + {}i", sig7(z.re), sig7(z.im))
    }
}

fn set(s: &[usize]) -> String {
    let items: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

// space separated, for CSV cells
fn cell(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn ext_cell(x: ExtReal) -> String {
    x.to_string()
}

fn opt_cell<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

fn line(out: &mut String, key: &str, value: impl AsRef<str>) {
    let _ = writeln!(out, "{key:<22}{}", value.as_ref());
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report for AnalysisReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let g = &self.graph;
        line(&mut out, "vertices", g.n.to_string());
        line(&mut out, "edges", g.edge_count.to_string());
        line(&mut out, "strongly connected", yes_no(g.strongly_connected));
        line(&mut out, "period", opt_cell(&g.period));
        let s = &self.spectral;
        line(&mut out, "rho", sig7(s.rho));
        line(&mut out, "pi_min", sig7(s.pi_min));
        line(&mut out, "pi_max", sig7(s.pi_max));
        line(&mut out, "||C||", sig7(s.norm_c));
        line(&mut out, "||C^-1||", sig7(s.norm_c_inv));
        line(&mut out, "kappa(C)", sig7(s.kappa));
        line(&mut out, "residual", sig7(s.residual));
        out.push_str("eigenvalues\n");
        for (i, z) in s.eigenvalues.iter().enumerate() {
            let _ = writeln!(out, "  {i:<4}{}", complex7(*z));
        }
        out.push_str("stationary distribution\n");
        for (label, p) in g.labels.iter().zip(&s.pi) {
            let _ = writeln!(out, "  {label:<8}{}", sig7(*p));
        }
        if let Some(eml) = &self.eml {
            out.push_str("mixing\n");
            out.push_str(&indent(&eml.text()));
        }
        if let Some(t) = &self.toughness {
            out.push_str("toughness\n");
            out.push_str(&indent(&t.text()));
        }
        out
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &["field", "index", "value", "imag"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let scalar =
            |name: &str, v: String| vec![name.to_string(), String::new(), v, String::new()];
        let g = &self.graph;
        let s = &self.spectral;
        let mut rows = vec![
            scalar("n", g.n.to_string()),
            scalar("edge_count", g.edge_count.to_string()),
            scalar("strongly_connected", g.strongly_connected.to_string()),
            scalar("period", opt_cell(&g.period)),
            scalar("rho", s.rho.to_string()),
            scalar("pi_min", s.pi_min.to_string()),
            scalar("pi_max", s.pi_max.to_string()),
            scalar("norm_c", s.norm_c.to_string()),
            scalar("norm_c_inv", s.norm_c_inv.to_string()),
            scalar("kappa", s.kappa.to_string()),
            scalar("residual", s.residual.to_string()),
        ];
        for (i, z) in s.eigenvalues.iter().enumerate() {
            rows.push(vec![
                "eigenvalue".into(),
                i.to_string(),
                z.re.to_string(),
                z.im.to_string(),
            ]);
        }
        for (i, p) in s.pi.iter().enumerate() {
            rows.push(vec![
                "pi".into(),
                i.to_string(),
                p.to_string(),
                String::new(),
            ]);
        }
        if let Some(eml) = &self.eml {
            rows.push(scalar("eml_pair_count", eml.pair_count.to_string()));
            rows.push(scalar("eml_max_violation", eml.max_violation.to_string()));
        }
        if let Some(t) = &self.toughness {
            rows.push(scalar("toughness", t.exact.value.to_string()));
            rows.push(scalar(
                "toughness_spectral_bound",
                ext_cell(t.spectral_bound),
            ));
            rows.push(scalar("toughness_bound_holds", t.holds.to_string()));
        }
        rows
    }
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}\n")).collect()
}

fn form_text(out: &mut String, name: &str, f: &FormSummary) {
    let _ = writeln!(
        out,
        "{name:<22}max violation {}  min slack {}  mean slack {}  tightness {}  worst U={} W={}",
        sig7(f.max_violation),
        sig7(f.min_slack),
        sig7(f.mean_slack),
        sig7(f.tightness_ratio),
        set(&f.worst_pair.u),
        set(&f.worst_pair.w),
    );
}

impl Report for EmlReport {
    fn text(&self) -> String {
        let mut out = String::new();
        line(
            &mut out,
            "result",
            if self.passed() { "PASS" } else { "FAIL" },
        );
        line(&mut out, "pairs", self.pair_count.to_string());
        line(&mut out, "max violation", sig7(self.max_violation));
        form_text(&mut out, "full bound", &self.full);
        form_text(&mut out, "simple bound", &self.simple);
        line(
            &mut out,
            "ordering violations",
            self.ordering_violations.to_string(),
        );
        if let Some(rows) = &self.rows {
            out.push_str("U\tW\tlhs\tbound\tbound_simple\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    set(&r.u),
                    set(&r.w),
                    sig7(r.lhs),
                    sig7(r.bound),
                    sig7(r.bound_simple)
                );
            }
        }
        out
    }

    /// With kept rows the CSV lists every pair; otherwise one summary row
    /// per bound form.
    fn csv_header(&self) -> &'static [&'static str] {
        if self.rows.is_some() {
            &["u", "w", "lhs", "lhs_u_centered", "bound", "bound_simple"]
        } else {
            &[
                "form",
                "pair_count",
                "max_violation",
                "min_slack",
                "mean_slack",
                "tightness_ratio",
                "worst_u",
                "worst_w",
            ]
        }
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        if let Some(rows) = &self.rows {
            return rows
                .iter()
                .map(|r| {
                    vec![
                        cell(&r.u),
                        cell(&r.w),
                        r.lhs.to_string(),
                        r.lhs_u_centered.to_string(),
                        r.bound.to_string(),
                        r.bound_simple.to_string(),
                    ]
                })
                .collect();
        }
        [("full", &self.full), ("simple", &self.simple)]
            .into_iter()
            .map(|(name, f)| {
                vec![
                    name.to_string(),
                    self.pair_count.to_string(),
                    f.max_violation.to_string(),
                    f.min_slack.to_string(),
                    f.mean_slack.to_string(),
                    f.tightness_ratio.to_string(),
                    cell(&f.worst_pair.u),
                    cell(&f.worst_pair.w),
                ]
            })
            .collect()
    }
}

impl PairReport {
    pub fn new(
        g: &DirectedGraph,
        pair: &SubsetPair,
        (lhs, lhs_u_centered): (f64, f64),
        (bound, bound_simple): (f64, f64),
        slack_tol: f64,
    ) -> Self {
        let labels = |s: &[usize]| s.iter().map(|&v| g.label(v)).collect();
        PairReport {
            u: pair.u.clone(),
            w: pair.w.clone(),
            u_labels: labels(&pair.u),
            w_labels: labels(&pair.w),
            lhs,
            lhs_u_centered,
            bound,
            bound_simple,
            holds: lhs <= bound + slack_tol && lhs <= bound_simple + slack_tol,
        }
    }
}

impl Report for PairReport {
    fn text(&self) -> String {
        let mut out = String::new();
        line(&mut out, "U", format!("{{{}}}", self.u_labels.join(",")));
        line(&mut out, "W", format!("{{{}}}", self.w_labels.join(",")));
        line(&mut out, "lhs", sig7(self.lhs));
        line(&mut out, "lhs (U-centered)", sig7(self.lhs_u_centered));
        line(&mut out, "bound", sig7(self.bound));
        line(&mut out, "bound (simple)", sig7(self.bound_simple));
        line(&mut out, "holds", yes_no(self.holds));
        out
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &[
            "u",
            "w",
            "lhs",
            "lhs_u_centered",
            "bound",
            "bound_simple",
            "holds",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            cell(&self.u),
            cell(&self.w),
            self.lhs.to_string(),
            self.lhs_u_centered.to_string(),
            self.bound.to_string(),
            self.bound_simple.to_string(),
            self.holds.to_string(),
        ]]
    }
}

impl Report for ToughnessResult {
    fn text(&self) -> String {
        let mut out = String::new();
        line(&mut out, "toughness", ext7(self.value));
        if let Some(w) = &self.witness_labels {
            line(&mut out, "witness", format!("{{{}}}", w.join(",")));
        }
        if let Some(c) = self.component_count_at_witness {
            line(&mut out, "components", c.to_string());
        }
        out
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &["value", "witness", "component_count"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            ext_cell(self.value),
            self.witness.as_deref().map(cell).unwrap_or_default(),
            opt_cell(&self.component_count_at_witness),
        ]]
    }
}

impl Report for ToughnessBoundReport {
    fn text(&self) -> String {
        let mut out = String::new();
        line(&mut out, "spectral bound", ext7(self.spectral_bound));
        if let Some(b) = self.alon_bound {
            line(&mut out, "regular-graph bound", ext7(b));
        }
        if let Some(note) = &self.note {
            line(&mut out, "note", note);
        }
        out
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &["spectral_bound", "alon_bound", "note"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            ext_cell(self.spectral_bound),
            self.alon_bound.map(ext_cell).unwrap_or_default(),
            self.note.clone().unwrap_or_default(),
        ]]
    }
}

impl Report for BoundComparison {
    fn text(&self) -> String {
        let mut out = self.exact.text();
        line(&mut out, "spectral bound", ext7(self.spectral_bound));
        line(
            &mut out,
            "gap",
            self.gap.map(ext7).unwrap_or_else(|| "undefined".into()),
        );
        line(&mut out, "holds", yes_no(self.holds));
        if let Some(note) = &self.note {
            line(&mut out, "note", note);
        }
        out
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &[
            "exact",
            "witness",
            "component_count",
            "spectral_bound",
            "gap",
            "holds",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            ext_cell(self.exact.value),
            self.exact.witness.as_deref().map(cell).unwrap_or_default(),
            opt_cell(&self.exact.component_count_at_witness),
            ext_cell(self.spectral_bound),
            self.gap.map(ext_cell).unwrap_or_default(),
            self.holds.to_string(),
        ]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_significant_digits() {
        assert_eq!(sig7(0.5f64.sqrt()), "0.7071068");
        assert_eq!(sig7(4.0 / 3.0), "1.333333");
        assert_eq!(sig7(1.0), "1");
        assert_eq!(sig7(-0.1055728), "-0.1055728");
        assert_eq!(sig7(1.5e-12), "1.500000e-12");
        assert_eq!(sig7(0.0), "0");
        assert_eq!(sig7(-1e-20 * 0.0), "0");
    }

    #[test]
    fn toughness_renderings() {
        let r = ToughnessResult {
            value: ExtReal::Infinite,
            witness: None,
            witness_labels: None,
            component_count_at_witness: None,
        };
        assert!(r.render(Format::Json).contains("\"value\": \"infinite\""));
        assert_eq!(
            r.render(Format::Csv),
            "value,witness,component_count\ninfinite,,\n"
        );
        let r = ToughnessResult {
            value: ExtReal::Finite(0.5),
            witness: Some(vec![0, 3]),
            witness_labels: Some(vec!["a".into(), "d".into()]),
            component_count_at_witness: Some(4),
        };
        assert_eq!(
            r.render(Format::Csv),
            "value,witness,component_count\n0.5,0 3,4\n"
        );
        assert!(r.render(Format::Text).contains("{a,d}"));
    }
}
