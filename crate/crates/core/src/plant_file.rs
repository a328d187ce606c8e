//! Plant description files.
//!
//! A plant file is a TOML document in one of two forms:
//!
//! ```toml
//! # zero/pole form; each root is [re, im] or a bare real number
//! gain = 1.0
//! zeros = [-2.0]
//! poles = [[-1.0, 0.5], [-1.0, -0.5], -3.0]
//! ```
//!
//! ```toml
//! # coefficient form, highest power first
//! num_coeffs = [1.0, 2.0]
//! den_coeffs = [1.0, 0.8, -0.2]
//! ```
//!
//! `gain` defaults to 1 and is not allowed in coefficient form.

use std::fmt::Write as _;
use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::fmt::g12;
use crate::poly::Polynomial;
use crate::tf::RationalTF;
use crate::Complex64;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub(crate) enum Root {
    Real(f64),
    Pair([f64; 2]),
}

impl Root {
    pub(crate) fn value(&self) -> Complex64 {
        match *self {
            Root::Real(re) => Complex64::new(re, 0.0),
            Root::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawPlant {
    gain: Option<Spanned<f64>>,
    zeros: Option<Spanned<Vec<Root>>>,
    poles: Option<Spanned<Vec<Root>>>,
    num_coeffs: Option<Spanned<Vec<f64>>>,
    den_coeffs: Option<Spanned<Vec<f64>>>,
}

/// 1-based line and column of byte `offset` in `text`.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// A parse error located at `span` within `text`.
pub fn parse_error(text: &str, span: Option<Range<usize>>, message: impl Into<String>) -> Error {
    let (line, column) = span.map_or((1, 1), |s| line_column(text, s.start));
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Deserializes TOML, turning failures into located parse errors.
pub fn from_toml<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T> {
    toml::from_str(text).map_err(|e| parse_error(text, e.span(), e.message().trim().to_string()))
}

pub fn parse_plant(text: &str) -> Result<RationalTF> {
    build_plant(text, from_toml(text)?)
}

/// Validates a deserialized plant table; spans refer to `text`.
pub(crate) fn build_plant(text: &str, raw: RawPlant) -> Result<RationalTF> {
    let located = |span: Range<usize>, e: Error| match e {
        Error::Domain(msg) => parse_error(text, Some(span), msg),
        other => other,
    };
    match raw {
        RawPlant {
            num_coeffs: None,
            den_coeffs: None,
            gain,
            zeros,
            poles: Some(poles),
        } => {
            let gain_value = gain.as_ref().map_or(1.0, |g| *g.get_ref());
            let zero_list: Vec<Complex64> = zeros
                .as_ref()
                .map_or_else(Vec::new, |z| z.get_ref().iter().map(Root::value).collect());
            let pole_list = poles.get_ref().iter().map(Root::value).collect();
            let span = gain.map_or_else(|| poles.span(), |g| g.span());
            RationalTF::new(gain_value, zero_list, pole_list).map_err(|e| located(span, e))
        }
        RawPlant {
            num_coeffs: Some(num),
            den_coeffs: Some(den),
            gain: None,
            zeros: None,
            poles: None,
        } => {
            let span = num.span();
            RationalTF::from_coeffs(
                &Polynomial::new(num.into_inner()),
                &Polynomial::new(den.into_inner()),
            )
            .map_err(|e| located(span, e))
        }
        RawPlant {
            num_coeffs: Some(s), ..
        }
        | RawPlant {
            den_coeffs: Some(s), ..
        } => Err(parse_error(
            text,
            Some(s.span()),
            "coefficient form needs both num_coeffs and den_coeffs and excludes gain/zeros/poles",
        )),
        _ => Err(parse_error(
            text,
            None,
            "plant file needs `poles` (zero/pole form) or `num_coeffs` and `den_coeffs`",
        )),
    }
}

pub fn read_plant(path: &Path) -> Result<RationalTF> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
    parse_plant(&text)
}

/// Zero/pole form with `%.12g` numbers.
pub fn render_plant(tf: &RationalTF) -> String {
    let roots = |r: &[Complex64]| {
        r.iter()
            .map(|z| format!("[{}, {}]", g12(z.re), g12(z.im)))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "gain = {}", g12(tf.gain()));
    let _ = writeln!(out, "zeros = [{}]", roots(tf.zeros()));
    let _ = writeln!(out, "poles = [{}]", roots(tf.poles()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_pole_form() {
        let tf = parse_plant("gain = 2\nzeros = [-2.0]\npoles = [[-1, 1], [-1, -1], -3]\n").unwrap();
        assert_eq!(tf.gain(), 2.0);
        assert_eq!(tf.zeros(), &[Complex64::new(-2.0, 0.0)]);
        assert_eq!(tf.order(), 3);
    }

    #[test]
    fn coefficient_form() {
        let tf = parse_plant("num_coeffs = [1.0, 2.0]\nden_coeffs = [1.0, 0.8, -0.2]\n").unwrap();
        assert_eq!(tf.order(), 2);
        assert!((tf.zeros()[0].re + 2.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip() {
        let tf = RationalTF::new(
            1.5,
            vec![Complex64::new(-2.0, 0.0)],
            vec![Complex64::new(-1.0, 0.5), Complex64::new(-1.0, -0.5)],
        )
        .unwrap();
        assert_eq!(parse_plant(&render_plant(&tf)).unwrap(), tf);
    }

    #[test]
    fn syntax_errors_are_located() {
        match parse_plant("gain = 1\npoles = [-1, \n") {
            Err(Error::Parse { line, .. }) => assert!(line >= 2),
            other => panic!("{other:?}"),
        }
        match parse_plant("gain = 1\npolse = [-1]\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mixed_or_missing_forms() {
        assert!(matches!(
            parse_plant("poles = [-1]\nnum_coeffs = [1]\nden_coeffs = [1, 1]\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_plant("gain = 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_plant("poles = [[-1, 1]]\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn columns_count_from_one() {
        assert_eq!(line_column("ab\ncd", 4), (2, 2));
        assert_eq!(line_column("ab", 0), (1, 1));
    }
}
