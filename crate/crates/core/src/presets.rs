//! Built-in code descriptions.

use crate::code_spec::CodeSpec;
use crate::error::{Error, Result};

// Towers: {"a": -1} is Q(i) over Q; {"m": -1, "a": 5} is Q(i)(√5) with
// coordinates over {1, i, √5, i√5}.
const PRESETS: &[(&str, &str)] = &[
    (
        "alamouti-na",
        r#"{
  "name": "alamouti-na",
  "description": "Nonassociative Alamouti-like code Cay(Q(i), i) over Q, integer symbols, shaped by 1/sqrt(2)",
  "tower": {"a": -1},
  "b": [0, 1],
  "shape": "2x2",
  "shaping": 2,
  "constellation": {"kind": "box", "L": 2},
  "nvd_fraction": {"b_n": [0, 1], "b_d": 1},
  "expect": {"min_det": "1/4", "nvd": "1/4", "unitary": true, "uniform_energy": true, "full_diversity": true}
}"#,
    ),
    (
        "alamouti-na-b",
        r#"{
  "name": "alamouti-na-b",
  "description": "Cay(Q(i), -i) over Q, the conjugate Alamouti-like code, shaped by 1/sqrt(2)",
  "tower": {"a": -1},
  "b": [0, -1],
  "shape": "2x2",
  "shaping": 2,
  "constellation": {"kind": "box", "L": 2},
  "nvd_fraction": {"b_n": [0, -1], "b_d": 1},
  "expect": {"min_det": "1/4", "nvd": "1/4", "unitary": true, "uniform_energy": true, "full_diversity": true}
}"#,
    ),
    (
        "golden",
        r#"{
  "name": "golden",
  "description": "Golden code: Cay(Q(i)(sqrt5), i), basis {1, theta}, ideal (1+i-i*theta), shaped by 1/sqrt(5)",
  "tower": {"m": -1, "a": 5},
  "b": [0, 1, 0, 0],
  "shape": "2x2",
  "basis": [1, ["1/2", 0, "1/2", 0]],
  "ideal": [1, "1/2", 0, "-1/2"],
  "transpose": true,
  "shaping": 5,
  "constellation": {"kind": "box", "L": 1},
  "nvd_fraction": {"b_n": [0, 1, 0, 0], "b_d": 1},
  "expect": {"min_det": "1/5", "nvd": "1/5", "unitary": true, "uniform_energy": true, "full_diversity": true}
}"#,
    ),
    (
        "golden-na-1",
        r#"{
  "name": "golden-na-1",
  "description": "Nonassociative Golden code with b = (i+sqrt5)/(i-sqrt5)",
  "tower": {"m": -1, "a": 5},
  "b": ["-2/3", 0, 0, "-1/3"],
  "shape": "2x2",
  "basis": [1, ["1/2", 0, "1/2", 0]],
  "ideal": [1, "1/2", 0, "-1/2"],
  "transpose": true,
  "shaping": 5,
  "constellation": {"kind": "box", "L": 1},
  "nvd_fraction": {"b_n": [0, 1, 1, 0], "b_d": [0, 1, -1, 0]},
  "expect": {"unitary": true, "uniform_energy": true, "full_diversity": true}
}"#,
    ),
    (
        "golden-na-2",
        r#"{
  "name": "golden-na-2",
  "description": "Nonassociative Golden code with b = (2i+sqrt5)/3",
  "tower": {"m": -1, "a": 5},
  "b": [0, "2/3", "1/3", 0],
  "shape": "2x2",
  "basis": [1, ["1/2", 0, "1/2", 0]],
  "ideal": [1, "1/2", 0, "-1/2"],
  "transpose": true,
  "shaping": 5,
  "constellation": {"kind": "box", "L": 1},
  "nvd_fraction": {"b_n": [0, 2, 1, 0], "b_d": 3},
  "expect": {"unitary": true, "uniform_energy": true, "full_diversity": true}
}"#,
    ),
    (
        "zeta8",
        r#"{
  "name": "zeta8",
  "description": "Cay(Q(i)(sqrt2), zeta8), basis {1, zeta8}, shaped by 1/sqrt(2)",
  "tower": {"m": -1, "a": 2},
  "b": [0, 0, "1/2", "1/2"],
  "shape": "2x2",
  "basis": [1, [0, 0, "1/2", "1/2"]],
  "shaping": 2,
  "constellation": {"kind": "box", "L": 1},
  "nvd_fraction": {"b_n": [0, 0, "1/2", "1/2"], "b_d": 1},
  "expect": {"unitary": true, "uniform_energy": true, "full_diversity": true}
}"#,
    ),
    (
        "zeta3",
        r#"{
  "name": "zeta3",
  "description": "Cay(Q(i)(sqrt3), zeta3), basis {1, zeta3}, unshaped",
  "tower": {"m": -1, "a": 3},
  "b": ["-1/2", 0, 0, "1/2"],
  "shape": "2x2",
  "basis": [1, ["-1/2", 0, 0, "1/2"]],
  "constellation": {"kind": "box", "L": 1},
  "nvd_fraction": {"b_n": ["-1/2", 0, 0, "1/2"], "b_d": 1},
  "expect": {"unitary": false, "uniform_energy": true, "full_diversity": true}
}"#,
    ),
    (
        "mb-8.4",
        r#"{
  "name": "mb-8.4",
  "description": "2x4 multiblock code over Cay(Q(i)(sqrt5), (i+sqrt5)/(i-sqrt5)) with the golden ideal",
  "tower": {"m": -1, "a": 5},
  "b": ["-2/3", 0, 0, "-1/3"],
  "shape": "2x4",
  "basis": [1, ["1/2", 0, "1/2", 0]],
  "ideal": [1, "1/2", 0, "-1/2"],
  "shaping": 5,
  "constellation": {"kind": "box", "L": 1},
  "nvd_fraction": {"b_n": [0, 1, 1, 0], "b_d": [0, 1, -1, 0]},
  "expect": {"nvd": "1/30", "unitary": true, "full_diversity": true}
}"#,
    ),
    (
        "mb-8.5",
        r#"{
  "name": "mb-8.5",
  "description": "2x4 multiblock code over Cay(Q(i)(sqrt5), (2i+sqrt5)/3) with the golden ideal",
  "tower": {"m": -1, "a": 5},
  "b": [0, "2/3", "1/3", 0],
  "shape": "2x4",
  "basis": [1, ["1/2", 0, "1/2", 0]],
  "ideal": [1, "1/2", 0, "-1/2"],
  "shaping": 5,
  "constellation": {"kind": "box", "L": 1},
  "nvd_fraction": {"b_n": [0, 2, 1, 0], "b_d": 3},
  "expect": {"nvd": "1/45", "unitary": true, "full_diversity": true}
}"#,
    ),
    (
        "mb-8.6",
        r#"{
  "name": "mb-8.6",
  "description": "2x4 multiblock code over Cay(Q(i)(sqrt2), zeta8), shaped by 1/sqrt(2)",
  "tower": {"m": -1, "a": 2},
  "b": [0, 0, "1/2", "1/2"],
  "shape": "2x4",
  "basis": [1, [0, 0, "1/2", "1/2"]],
  "shaping": 2,
  "constellation": {"kind": "box", "L": 1},
  "nvd_fraction": {"b_n": [0, 0, "1/2", "1/2"], "b_d": 1},
  "expect": {"nvd": "1/4", "unitary": true, "full_diversity": true}
}"#,
    ),
    (
        "four-9.2",
        r#"{
  "name": "four-9.2",
  "description": "4x4 code from Cay(Q(i), i) over Q, integer symbols",
  "tower": {"a": -1},
  "b": [0, 1],
  "shape": "4x4",
  "constellation": {"kind": "box", "L": 3},
  "nvd_fraction": {"p_n": 0, "p_d": 1, "q_n": 1, "q_d": 1},
  "expect": {"min_det": 1, "nvd": 1, "info_lossless": true, "full_diversity": true}
}"#,
    ),
    (
        "four-9.2bis",
        r#"{
  "name": "four-9.2bis",
  "description": "4x4 code from Cay(Q(i), -i) over Q, integer symbols",
  "tower": {"a": -1},
  "b": [0, -1],
  "shape": "4x4",
  "constellation": {"kind": "box", "L": 3},
  "nvd_fraction": {"p_n": 0, "p_d": 1, "q_n": -1, "q_d": 1},
  "expect": {"min_det": 1, "nvd": 1, "info_lossless": true, "full_diversity": true}
}"#,
    ),
    (
        "four-9.3",
        r#"{
  "name": "four-9.3",
  "description": "4x4 code from Cay(Q(i)(zeta8), zeta8) over Q(i), a = i, Gaussian symbols",
  "tower": {"m": -1, "a": [0, 1]},
  "b": [0, 0, 1, 0],
  "shape": "4x4",
  "constellation": {"kind": "box", "L": 1},
  "nvd_fraction": {"p_n": 0, "p_d": 1, "q_n": 1, "q_d": 1},
  "expect": {"min_det": 1, "nvd": 1, "info_lossless": true, "full_diversity": true}
}"#,
    ),
    (
        "split",
        r#"{
  "name": "split",
  "description": "Split comparator Cay(Q(i), 1) over Q: associative, not a division algebra",
  "tower": {"a": -1},
  "b": 1,
  "shape": "2x2",
  "constellation": {"kind": "box", "L": 2},
  "expect": {"full_diversity": false}
}"#,
    ),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

/// The raw JSON of a preset.
pub fn preset_json(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, j)| *j)
}

pub fn preset(name: &str) -> Result<CodeSpec> {
    let json = preset_json(name).ok_or_else(|| {
        Error::InvalidSpec(format!(
            "unknown preset {name:?}; available: {}",
            preset_names().join(", ")
        ))
    })?;
    CodeSpec::from_json(json)
}

pub fn all_presets() -> Vec<CodeSpec> {
    preset_names()
        .into_iter()
        .map(|n| preset(n).expect("built-in presets are valid"))
        .collect()
}
