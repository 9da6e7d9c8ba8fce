use clap::ValueEnum;
use collapsekit_core::rational::{format_decimal, format_rational, Rounding};
use collapsekit_core::{Rational, StratumEffect, StratumValue};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A command result in both renderings.
pub struct Rendered {
    pub json: Value,
    pub text: String,
}

impl Rendered {
    pub fn into_string(self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Text => self.text,
        }
    }
}

pub fn decimal(r: &Rational, places: usize) -> String {
    format_decimal(r, places, Rounding::HalfUp)
}

/// `"99/35 (2.828571)"`
pub fn both(r: &Rational, places: usize) -> String {
    let exact = format_rational(r);
    let approx = decimal(r, places);
    if exact == approx || r.is_integer() {
        exact
    } else {
        format!("{exact} ({approx})")
    }
}

pub fn value_json(r: &Rational, places: usize) -> Value {
    json!({ "value": format_rational(r), "decimal": decimal(r, places) })
}

pub fn effect_json(e: &StratumEffect, places: usize) -> Value {
    match &e.value {
        StratumValue::Defined(v) => json!({
            "label": e.label,
            "value": format_rational(v),
            "decimal": decimal(v, places),
        }),
        StratumValue::Undefined(reason) => json!({
            "label": e.label,
            "value": null,
            "undefined": reason,
        }),
    }
}

pub fn effect_text(e: &StratumEffect, places: usize) -> String {
    match &e.value {
        StratumValue::Defined(v) => format!("{}: {}", e.label, both(v, places)),
        StratumValue::Undefined(reason) => format!("{}: undefined ({reason})", e.label),
    }
}

pub fn weights_text(entries: &[(String, Rational)], places: usize) -> String {
    entries
        .iter()
        .map(|(l, w)| format!("  {l}: {}\n", both(w, places)))
        .collect()
}
