//! Rendered documents for states, diagrams and series.

use crate::alpha::alpha_build;
use crate::chain::{build_diagram, Ladder};
use crate::error::{Error, Result};
use crate::gauged::Kind;
use crate::series::FormalSeries;
use crate::states::{build_state, Family, Normalization, StateLabel};
use crate::text::{format_element, format_scalar, latex_element};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Canonical,
    Latex,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        match s {
            "canonical" => Ok(Format::Canonical),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            _ => Err(Error::Invalid(format!("unknown format `{s}`"))),
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn emit_state(family: Family, n: i64, norm: Normalization, format: Format) -> Result<String> {
    let state = build_state(StateLabel::new(family, n), norm)?;
    Ok(match format {
        Format::Canonical => format_element(&state.func) + "\n",
        Format::Latex => latex_element(&state.func) + "\n",
        Format::Json => json_text(&serde_json::json!({
            "family": family.name(),
            "index": n,
            "label": state.label.to_string(),
            "energy": state.energy(),
            "normalization": norm.name(),
            "provenance": state.provenance,
            "canonical": format_element(&state.func),
            "latex": latex_element(&state.func),
        })),
    })
}

/// `dot` or `json`; an empty range gives an empty graph.
pub fn emit_diagram(ladder: Ladder, lo: i64, hi: i64, format: &str) -> Result<String> {
    build_diagram(ladder, lo, hi)?.export(format)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Mu,
    Nu,
    Alpha,
}

impl SeriesKind {
    pub fn parse(s: &str) -> Result<SeriesKind> {
        match s {
            "mu" => Ok(SeriesKind::Mu),
            "nu" => Ok(SeriesKind::Nu),
            "alpha" => Ok(SeriesKind::Alpha),
            _ => Err(Error::Invalid(format!("unknown series kind `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Mu => "mu",
            SeriesKind::Nu => "nu",
            SeriesKind::Alpha => "alpha",
        }
    }
}

pub fn series_of(kind: SeriesKind, n: i64, order: usize) -> Result<FormalSeries> {
    Ok(match kind {
        SeriesKind::Mu => Kind::Mu.series(n, order),
        SeriesKind::Nu => Kind::Nu.series(n, order),
        SeriesKind::Alpha => alpha_build(n, order)?.1,
    })
}

/// One coefficient per line, `x^k: c`, closed by the truncation order.
pub fn emit_series(kind: SeriesKind, n: i64, order: usize) -> Result<String> {
    let f = series_of(kind, n, order)?;
    let mut s = format!("{}_{n}\n", kind.name());
    for (k, c) in f.coeffs().iter().enumerate() {
        s.push_str(&format!("x^{k}: {}\n", format_scalar(c)));
    }
    match f.precision() {
        Some(p) => s.push_str(&format!("+ O(x^{p})\n")),
        None => s.push_str("exact\n"),
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_state_texts() {
        let s = emit_state(Family::Osc, 0, Normalization::Darboux, Format::Canonical).unwrap();
        assert_eq!(s, "(1) * E^-1\n");
        let l = emit_state(Family::Osc, 0, Normalization::Darboux, Format::Latex).unwrap();
        assert_eq!(l, "e^{-\\frac{1}{2}x^{2}}\n");
        let g = emit_state(Family::Def, -3, Normalization::Eop, Format::Canonical).unwrap();
        assert_eq!(g, "(1)/(2 + 4*x^2) * E^-1\n");
    }

    #[test]
    fn rodrigues_provenance() {
        let j = emit_state(Family::Def, 1, Normalization::Rodrigues, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["provenance"], "b†·psi(0)");
        assert_eq!(v["energy"], 5);
    }

    #[test]
    fn empty_diagram() {
        let d = emit_diagram(Ladder::B, 1, 0, "json").unwrap();
        let v: serde_json::Value = serde_json::from_str(&d).unwrap();
        assert_eq!(v["nodes"].as_array().unwrap().len(), 0);
        assert_eq!(v["edges"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn series_text() {
        let s = emit_series(SeriesKind::Mu, 4, 8).unwrap();
        assert!(s.starts_with("mu_4\nx^0: 1\n"), "{s}");
        assert!(s.contains("x^4: -4\n") && s.ends_with("+ O(x^9)\n"), "{s}");
        assert!(emit_series(SeriesKind::Alpha, 0, 8).is_err());
    }
}
