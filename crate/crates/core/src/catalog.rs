//! The five 5x5 example matrices over `F_7` used throughout the tests and the
//! `table1` command, with their reference success probabilities.
//!
//! With `f = x^2+3x+6` and `g = x+4`:
//! A1 = C_f + C_g + C_g + C_g, A2 = J_{f^2} + C_g, A3 = C_f + C_f + C_g,
//! A4 = C_f + J_{g^2} + C_g, A5 = five distinct linear blocks (x+2 .. x+6).

use crate::jordan::ElementaryDivisorSpec;

pub const A1_JSON: &str =
    r#"{"q": 7, "blocks": [{"poly": "6,3,1", "exps": [1]}, {"poly": "4,1", "exps": [1, 1, 1]}]}"#;
pub const A2_JSON: &str =
    r#"{"q": 7, "blocks": [{"poly": "6,3,1", "exps": [2]}, {"poly": "4,1", "exps": [1]}]}"#;
pub const A3_JSON: &str =
    r#"{"q": 7, "blocks": [{"poly": "6,3,1", "exps": [1, 1]}, {"poly": "4,1", "exps": [1]}]}"#;
pub const A4_JSON: &str =
    r#"{"q": 7, "blocks": [{"poly": "6,3,1", "exps": [1]}, {"poly": "4,1", "exps": [2, 1]}]}"#;
pub const A5_JSON: &str = r#"{"q": 7, "blocks": [{"poly": "2,1", "exps": [1]}, {"poly": "3,1", "exps": [1]}, {"poly": "4,1", "exps": [1]}, {"poly": "5,1", "exps": [1]}, {"poly": "6,1", "exps": [1]}]}"#;

/// Reference values for b = 1..4, as decimal strings at their published
/// precision.
pub const TABLE1: [(&str, [&str; 4]); 5] = [
    ("A1", ["0.820", "0.998", "0.99998", "0.9999996"]),
    ("A2", ["0.705", "0.959", "0.994", "0.9992"]),
    ("A3", ["0.719", "0.960", "0.994", "0.9992"]),
    ("A4", ["0.705", "0.959", "0.994", "0.9992"]),
    ("A5", ["0.214", "0.814", "0.971", "0.996"]),
];

/// Digits after the decimal point of a reference string.
pub fn decimals(reference: &str) -> usize {
    reference.split_once('.').map_or(0, |(_, frac)| frac.len())
}

pub fn table1_specs() -> Vec<(&'static str, ElementaryDivisorSpec)> {
    [
        ("A1", A1_JSON),
        ("A2", A2_JSON),
        ("A3", A3_JSON),
        ("A4", A4_JSON),
        ("A5", A5_JSON),
    ]
    .into_iter()
    .map(|(name, json)| {
        (
            name,
            ElementaryDivisorSpec::from_json(json).expect("catalog specs are valid"),
        )
    })
    .collect()
}
