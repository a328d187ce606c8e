//! Grid sweeps of certification verdicts over two pole parameters.
//!
//! A scan file is TOML:
//!
//! ```toml
//! [plant]                      # base spectrum; swept slots are overwritten
//! zeros = [-10, -15, -30]
//! poles = [-5, 0, 0]
//!
//! [axes]
//! kind = "real-pair"           # or "conjugate-pair"
//! slots = [2, 3]               # 1-based pole indices
//! a = { start = -35, stop = -5, step = 0.5 }
//! b = { start = -35, stop = -5, step = 0.5 }
//!
//! [[methods]]
//! method = "theorem1"          # corollary1, necessary, sampled, polynomial, pipeline, expos
//! mu = 2
//! delta = 35                   # omit for the automatic shift
//! ```
//!
//! For `real-pair` the two slots take `a` and `b`. For `conjugate-pair` they
//! take `a + ib` and `a - ib`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fmt::g12;
use crate::lcm::{
    auto_delta, certify, certify_corollary1, certify_theorem1, check_exact_polynomial, check_exact_sampled,
    check_necessary, default_strategy, LcmCertificate,
};
use crate::plant_file::{build_plant, from_toml, parse_error, RawPlant};
use crate::positivity::external_positivity;
use crate::response::DEFAULT_SAMPLES;
use crate::tf::RationalTF;
use crate::Complex64;

pub const CSV_HEADER: &str = "p_a,p_b,method,mu,delta,verdict";
/// Verdict recorded when a method's preconditions fail at a cell.
pub const DOMAIN_ERROR: &str = "domain-error";

/// Evenly spaced values `start + i step` up to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range1 {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range1 {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let r = Range1 { start, stop, step };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(Error::InvalidGrid("bounds and step must be finite".into()));
        }
        if !(self.step > 0.0) {
            return Err(Error::InvalidGrid(format!("step {} must be positive", self.step)));
        }
        if self.stop < self.start {
            return Err(Error::InvalidGrid(format!(
                "stop {} is below start {}",
                self.stop, self.start
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisKind {
    RealPair,
    ConjugatePair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axes {
    pub kind: AxisKind,
    /// 0-based pole slots.
    pub slots: [usize; 2],
    pub a: Range1,
    pub b: Range1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanMethod {
    Theorem1 { mu: u32, delta: Option<f64> },
    Corollary1 { mu: u32, delta: Option<f64> },
    Necessary,
    Sampled { t_max: Option<f64>, samples: usize },
    Polynomial { gamma: f64 },
    Pipeline,
    ExternalPositivity,
}

impl ScanMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ScanMethod::Theorem1 { .. } => "theorem1",
            ScanMethod::Corollary1 { .. } => "corollary1",
            ScanMethod::Necessary => "necessary",
            ScanMethod::Sampled { .. } => "sampled",
            ScanMethod::Polynomial { .. } => "polynomial",
            ScanMethod::Pipeline => "pipeline",
            ScanMethod::ExternalPositivity => "expos",
        }
    }

    pub fn mu(&self) -> Option<u32> {
        match *self {
            ScanMethod::Theorem1 { mu, .. } | ScanMethod::Corollary1 { mu, .. } => Some(mu),
            _ => None,
        }
    }

    /// `(delta used, verdict label)` at one cell.
    pub fn evaluate(&self, tf: &RationalTF) -> (Option<f64>, String) {
        let lcm = |r: Result<LcmCertificate>| {
            r.map_or_else(|_| DOMAIN_ERROR.to_string(), |c| c.verdict.label().to_string())
        };
        match *self {
            ScanMethod::Theorem1 { mu, delta } => {
                let d = delta.unwrap_or_else(|| auto_delta(tf, mu));
                (Some(d), lcm(certify_theorem1(tf, mu, d)))
            }
            ScanMethod::Corollary1 { mu, delta } => {
                let d = delta.unwrap_or_else(|| auto_delta(tf, mu));
                (Some(d), lcm(certify_corollary1(tf, mu, d)))
            }
            ScanMethod::Necessary => (None, lcm(Ok(check_necessary(tf)))),
            ScanMethod::Sampled { t_max, samples } => (None, lcm(Ok(check_exact_sampled(tf, t_max, samples)))),
            ScanMethod::Polynomial { gamma } => (None, lcm(check_exact_polynomial(tf, gamma))),
            ScanMethod::Pipeline => (None, lcm(Ok(certify(tf, &default_strategy())))),
            ScanMethod::ExternalPositivity => (None, external_positivity(tf).verdict.label().to_string()),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxes {
    kind: AxisKind,
    slots: Spanned<[usize; 2]>,
    a: Spanned<Range1>,
    b: Spanned<Range1>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMethod {
    method: String,
    mu: Option<u32>,
    delta: Option<f64>,
    gamma: Option<f64>,
    t_max: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    plant: RawPlant,
    axes: RawAxes,
    methods: Spanned<Vec<Spanned<RawMethod>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub base: RationalTF,
    pub axes: Axes,
    pub methods: Vec<ScanMethod>,
}

fn method_of(raw: &RawMethod) -> std::result::Result<ScanMethod, String> {
    let mu = || raw.mu.filter(|&m| m > 0).ok_or("needs a positive `mu`");
    Ok(match raw.method.as_str() {
        "theorem1" => ScanMethod::Theorem1 { mu: mu()?, delta: raw.delta },
        "corollary1" => ScanMethod::Corollary1 { mu: mu()?, delta: raw.delta },
        "necessary" => ScanMethod::Necessary,
        "sampled" => ScanMethod::Sampled {
            t_max: raw.t_max,
            samples: raw.samples.unwrap_or(DEFAULT_SAMPLES),
        },
        "polynomial" => ScanMethod::Polynomial {
            gamma: raw.gamma.ok_or("needs `gamma`")?,
        },
        "pipeline" => ScanMethod::Pipeline,
        "expos" => ScanMethod::ExternalPositivity,
        other => return Err(format!("unknown method `{other}`")),
    })
}

impl ScanSpec {
    pub fn new(base: RationalTF, axes: Axes, methods: Vec<ScanMethod>) -> Result<Self> {
        axes.a.validate()?;
        axes.b.validate()?;
        let n = base.order();
        if axes.slots[0] == axes.slots[1] || axes.slots.iter().any(|&s| s >= n) {
            return Err(Error::InvalidGrid(format!(
                "pole slots {:?} must be distinct and within 1..={n}",
                axes.slots.map(|s| s + 1)
            )));
        }
        if methods.is_empty() {
            return Err(Error::InvalidGrid("no methods listed".into()));
        }
        Ok(ScanSpec { base, axes, methods })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawScan = from_toml(text)?;
        let base = build_plant(text, raw.plant)?;
        let mut methods = Vec::new();
        for m in raw.methods.get_ref() {
            methods.push(method_of(m.get_ref()).map_err(|msg| parse_error(text, Some(m.span()), msg))?);
        }
        let slots = *raw.axes.slots.get_ref();
        if slots.contains(&0) {
            return Err(parse_error(text, Some(raw.axes.slots.span()), "pole slots are 1-based"));
        }
        let axes = Axes {
            kind: raw.axes.kind,
            slots: slots.map(|s| s - 1),
            a: raw.axes.a.into_inner(),
            b: raw.axes.b.into_inner(),
        };
        ScanSpec::new(base, axes, methods)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
        ScanSpec::parse(&text)
    }

    /// `(a, b)` cells in row-major order (`a` outer).
    pub fn cells(&self) -> Vec<(f64, f64)> {
        let bs = self.axes.b.values();
        self.axes
            .a
            .values()
            .into_iter()
            .flat_map(|a| bs.iter().map(move |&b| (a, b)))
            .collect()
    }

    /// The base system with the swept slots set for cell `(a, b)`.
    pub fn system_at(&self, a: f64, b: f64) -> Result<RationalTF> {
        let mut poles = self.base.poles().to_vec();
        let [i, j] = self.axes.slots;
        match self.axes.kind {
            AxisKind::RealPair => {
                poles[i] = Complex64::new(a, 0.0);
                poles[j] = Complex64::new(b, 0.0);
            }
            AxisKind::ConjugatePair => {
                poles[i] = Complex64::new(a, b);
                poles[j] = Complex64::new(a, -b);
            }
        }
        RationalTF::new(self.base.gain(), self.base.zeros().to_vec(), poles)
    }

    pub fn run(&self, exec: Execution) -> ScanResult {
        let cells = self.cells();
        let per_cell = exec.map(&cells, |&(a, b)| {
            let tf = self.system_at(a, b);
            self.methods
                .iter()
                .map(|m| {
                    let (delta, verdict) = match &tf {
                        Ok(tf) => m.evaluate(tf),
                        Err(_) => (None, DOMAIN_ERROR.to_string()),
                    };
                    ScanRow {
                        a,
                        b,
                        method: m.name(),
                        mu: m.mu(),
                        delta,
                        verdict,
                    }
                })
                .collect::<Vec<_>>()
        });
        ScanResult {
            rows: per_cell.into_iter().flatten().collect(),
            methods: self.methods.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub a: f64,
    pub b: f64,
    pub method: &'static str,
    pub mu: Option<u32>,
    pub delta: Option<f64>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// Cell-major: all methods of a cell are adjacent, in spec order.
    pub rows: Vec<ScanRow>,
    methods: usize,
}

impl ScanResult {
    /// Rows of the `k`-th method of the spec.
    pub fn method_rows(&self, k: usize) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().skip(k).step_by(self.methods.max(1))
    }

    /// Cells where the `k`-th method returned `verdict`.
    pub fn region(&self, k: usize, verdict: &str) -> Vec<(f64, f64)> {
        self.method_rows(k)
            .filter(|r| r.verdict == verdict)
            .map(|r| (r.a, r.b))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 48);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                g12(r.a),
                g12(r.b),
                r.method,
                r.mu.map_or_else(String::new, |m| m.to_string()),
                r.delta.map_or_else(String::new, g12),
                r.verdict
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_POLE: &str = r#"
[plant]
zeros = [-10, -15, -30]
poles = [-5, 0, 0]

[axes]
kind = "real-pair"
slots = [2, 3]
a = { start = -35, stop = -5, step = 5 }
b = { start = -35, stop = -5, step = 5 }

[[methods]]
method = "theorem1"
mu = 1
delta = 35

[[methods]]
method = "theorem1"
mu = 2
delta = 35
"#;

    #[test]
    fn grid_lengths() {
        assert_eq!(Range1::new(-35.0, -5.0, 0.5).unwrap().len(), 61);
        assert_eq!(Range1::new(-12.0, -1.0, 0.1).unwrap().len(), 111);
        assert_eq!(Range1::new(1.0, 1.0, 0.1).unwrap().len(), 1);
        assert!(matches!(Range1::new(0.0, 1.0, 0.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Range1::new(1.0, 0.0, 0.1), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn three_pole_coarse_scan() {
        let spec = ScanSpec::parse(THREE_POLE).unwrap();
        let result = spec.run(Execution::Sequential);
        assert_eq!(result.rows.len(), 7 * 7 * 2);
        let mu2 = result.region(1, "certified");
        for (a, b) in spec.cells().into_iter().filter(|(a, b)| (a + b + 50.0).abs() > 1e-9) {
            assert_eq!(mu2.contains(&(a, b)), a + b >= -50.0, "cell ({a}, {b})");
        }
        let mu1 = result.region(0, "certified");
        assert!(mu1.iter().all(|c| mu2.contains(c)));
    }

    #[test]
    fn parallel_matches_sequential() {
        let spec = ScanSpec::parse(THREE_POLE).unwrap();
        assert_eq!(
            spec.run(Execution::Sequential).to_csv(),
            spec.run(Execution::Parallel).to_csv()
        );
    }

    #[test]
    fn single_cell_csv() {
        let text = THREE_POLE
            .replace("start = -35, stop = -5, step = 5", "start = -20, stop = -20, step = 1");
        let csv = ScanSpec::parse(&text).unwrap().run(Execution::Sequential).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "-20,-20,theorem1,1,35,certified");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn conjugate_axes() {
        let text = THREE_POLE
            .replace("real-pair", "conjugate-pair")
            .replace("b = { start = -35, stop = -5", "b = { start = 0, stop = 10")
            .replace("[[methods]]\nmethod = \"theorem1\"\nmu = 1", "[[methods]]\nmethod = \"corollary1\"\nmu = 3");
        let spec = ScanSpec::parse(&text).unwrap();
        let tf = spec.system_at(-24.0, 3.0).unwrap();
        assert!(tf.poles().contains(&Complex64::new(-24.0, -3.0)));
    }

    #[test]
    fn bad_specs() {
        let bad_method = THREE_POLE.replacen("theorem1", "theorem9", 1);
        assert!(matches!(ScanSpec::parse(&bad_method), Err(Error::Parse { line: 12, .. })));
        let bad_slot = THREE_POLE.replace("slots = [2, 3]", "slots = [2, 4]");
        assert!(matches!(ScanSpec::parse(&bad_slot), Err(Error::InvalidGrid(_))));
        let bad_step = THREE_POLE.replacen("step = 5", "step = -5", 1);
        assert!(matches!(ScanSpec::parse(&bad_step), Err(Error::InvalidGrid(_))));
    }
}
