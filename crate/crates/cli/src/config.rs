//! Configuration documents.
//!
//! A config file is TOML (or JSON when the path ends in `.json`). Top-level
//! keys are exactly the [`ParameterSet`] field names; any key left out keeps
//! its default. An optional `scenarios` array lists farms to simulate:
//!
//! ```toml
//! credit_price = 150.0
//! bagasse_availability = 0.8
//!
//! [[scenarios]]
//! label = "coop-B"
//! farm_size_ha = 15000.0
//! kind = "land-application"   # or "direct-sale"
//! ```
//!
//! Unknown keys are rejected. [`to_toml`] writes every field, so a saved
//! parameter set loads back unchanged.

use std::path::Path;

use biochar_core::{ParameterSet, ScenarioSpec};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(#[from] biochar_core::Error),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Toml,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Toml,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigDocument {
    pub parameters: ParameterSet,
    /// `None` when the document lists no scenarios.
    pub scenarios: Option<Vec<ScenarioSpec>>,
}

fn parse_value(text: &str, format: Format) -> Result<Value, ConfigError> {
    let value: Value = match format {
        Format::Toml => toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?,
        Format::Json => {
            if text.trim().is_empty() {
                Value::Object(Default::default())
            } else {
                serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
            }
        }
    };
    if !value.is_object() {
        return Err(ConfigError::Parse(
            "top level must be a table/object".into(),
        ));
    }
    Ok(value)
}

pub fn parse_document(text: &str, format: Format) -> Result<ConfigDocument, ConfigError> {
    let mut value = parse_value(text, format)?;
    let scenarios = match value.as_object_mut().and_then(|m| m.remove("scenarios")) {
        None => None,
        Some(v) => {
            let list: Vec<ScenarioSpec> = serde_json::from_value(v)
                .map_err(|e| ConfigError::Parse(format!("scenarios: {e}")))?;
            for s in &list {
                s.validate()?;
            }
            Some(list)
        }
    };
    let parameters: ParameterSet =
        serde_json::from_value(value).map_err(|e| ConfigError::Parse(e.to_string()))?;
    parameters.validate()?;
    Ok(ConfigDocument {
        parameters,
        scenarios,
    })
}

/// Defaults overlaid with the keys present in `text`, validated.
pub fn load_parameters(text: &str, format: Format) -> Result<ParameterSet, ConfigError> {
    parse_document(text, format).map(|d| d.parameters)
}

pub fn load_file(path: &Path) -> Result<ConfigDocument, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_document(&text, Format::from_path(path))
}

pub fn to_toml(p: &ParameterSet) -> String {
    toml::to_string(p).expect("parameter set is always representable in TOML")
}

pub fn to_json(p: &ParameterSet) -> String {
    serde_json::to_string_pretty(p).expect("parameter set serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(
            load_parameters("", Format::Toml).unwrap(),
            ParameterSet::default()
        );
        assert_eq!(
            load_parameters("{}", Format::Json).unwrap(),
            ParameterSet::default()
        );
    }

    #[test]
    fn single_field_overlay() {
        let p = load_parameters(r#"{"credit_price": 50}"#, Format::Json).unwrap();
        let expect = ParameterSet {
            credit_price: 50.0,
            ..ParameterSet::default()
        };
        assert_eq!(p, expect);
        assert_eq!(
            load_parameters("credit_price = 50", Format::Toml).unwrap(),
            expect
        );
    }

    #[test]
    fn out_of_range_fraction() {
        let err = load_parameters(r#"{"bagasse_availability": 1.2}"#, Format::Json).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bagasse_availability"), "{msg}");
        assert!(msg.contains("fraction out of [0,1]"), "{msg}");
    }

    #[test]
    fn unknown_key_rejected() {
        let err = load_parameters("credit_prize = 3.0", Format::Toml).unwrap_err();
        assert!(matches!(err, ConfigError::Parse(_)));
        assert!(err.to_string().contains("credit_prize"), "{err}");
    }

    #[test]
    fn syntax_error() {
        assert!(matches!(
            load_parameters("credit_price = = 3", Format::Toml),
            Err(ConfigError::Parse(_))
        ));
        assert!(matches!(
            load_parameters("[1, 2]", Format::Json),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn scenarios_table() {
        let doc = parse_document(
            r#"
            horizon_years = 10
            [[scenarios]]
            label = "coop-B"
            farm_size_ha = 15000.0
            kind = "land-application"
            [[scenarios]]
            label = "coop-A"
            farm_size_ha = 15000
            kind = "A"
            "#,
            Format::Toml,
        )
        .unwrap();
        assert_eq!(doc.parameters.horizon_years, 10);
        let s = doc.scenarios.unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].kind, biochar_core::ScenarioKind::DirectSale);
        assert!(parse_document(
            "[[scenarios]]\nlabel='x'\nfarm_size_ha=-1.0\nkind='A'",
            Format::Toml
        )
        .is_err());
    }

    #[test]
    fn serialized_defaults_round_trip() {
        let p = ParameterSet::default();
        assert_eq!(load_parameters(&to_toml(&p), Format::Toml).unwrap(), p);
        assert_eq!(load_parameters(&to_json(&p), Format::Json).unwrap(), p);
    }
}
