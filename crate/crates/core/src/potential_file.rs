//! Line-oriented text format for stencil potentials.
//!
//! ```text
//! # nearest-neighbor interaction in 2D
//! dim 2
//! offsets
//! 0 0
//! 1 0
//! 0 1
//! values
//! 0b000 0
//! 0b001 2
//! ...
//! ```
//!
//! The first offset must be the origin. Bit `i` of a bitmask refers to the
//! `i`-th offset line; masks are decimal or `0b`-prefixed binary. With the
//! `symmetric_complement` keyword (before `values`), only one of each pair
//! `u`, `1 - u` needs to be listed. `#` starts a comment.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::potential::StencilPotential;
use crate::stencil::{Stencil, MAX_STENCIL_LEN};

#[derive(PartialEq)]
enum Section {
    Header,
    Offsets,
    Values,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_mask(token: &str, line: usize) -> Result<u32> {
    let parsed = match token.strip_prefix("0b") {
        Some(bin) => u32::from_str_radix(bin, 2),
        None => token.parse::<u32>(),
    };
    parsed.map_err(|_| parse_err(line, format!("invalid bitmask '{token}'")))
}

/// Parses the text format. Syntax problems and incomplete tables are
/// [`Error::Parse`]; tables that parse but violate the potential
/// invariants are [`Error::Config`].
pub fn parse_potential(text: &str) -> Result<StencilPotential> {
    let mut dim: Option<usize> = None;
    let mut symmetric = false;
    let mut offsets: Vec<Vec<i64>> = Vec::new();
    let mut entries: Vec<Option<f64>> = Vec::new();
    let mut section = Section::Header;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "dim" => {
                if section != Section::Header || dim.is_some() {
                    return Err(parse_err(line_no, "'dim' must appear once, first"));
                }
                let d = tokens
                    .get(1)
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|&d| d > 0)
                    .ok_or_else(|| parse_err(line_no, "expected 'dim <positive integer>'"))?;
                dim = Some(d);
                continue;
            }
            "symmetric_complement" => {
                if section == Section::Values {
                    return Err(parse_err(
                        line_no,
                        "'symmetric_complement' must precede 'values'",
                    ));
                }
                symmetric = true;
                continue;
            }
            "offsets" => {
                if section != Section::Header || dim.is_none() {
                    return Err(parse_err(line_no, "'offsets' must follow 'dim'"));
                }
                section = Section::Offsets;
                continue;
            }
            "values" => {
                if section != Section::Offsets || offsets.is_empty() {
                    return Err(parse_err(line_no, "'values' must follow the offsets"));
                }
                if offsets.len() > MAX_STENCIL_LEN {
                    return Err(parse_err(
                        line_no,
                        format!("at most {MAX_STENCIL_LEN} offsets are supported"),
                    ));
                }
                entries = vec![None; 1 << offsets.len()];
                section = Section::Values;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Header => {
                return Err(parse_err(line_no, format!("unexpected '{line}'")));
            }
            Section::Offsets => {
                let d = dim.expect("dim set before offsets");
                let y: Vec<i64> = tokens
                    .iter()
                    .map(|t| t.parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| parse_err(line_no, format!("invalid offset '{line}'")))?;
                if y.len() != d {
                    return Err(parse_err(
                        line_no,
                        format!("offset has {} coordinates, expected {d}", y.len()),
                    ));
                }
                if offsets.is_empty() && y.iter().any(|&c| c != 0) {
                    return Err(parse_err(line_no, "the first offset must be the origin"));
                }
                offsets.push(y);
            }
            Section::Values => {
                if tokens.len() != 2 {
                    return Err(parse_err(line_no, "expected '<bitmask> <value>'"));
                }
                let mask = parse_mask(tokens[0], line_no)? as usize;
                if mask >= entries.len() {
                    return Err(parse_err(
                        line_no,
                        format!("bitmask {mask} out of range for {} offsets", offsets.len()),
                    ));
                }
                let value: f64 = tokens[1]
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("invalid value '{}'", tokens[1])))?;
                if entries[mask].is_some_and(|old| old != value) {
                    return Err(parse_err(line_no, format!("conflicting entry for mask {mask}")));
                }
                entries[mask] = Some(value);
            }
        }
    }

    if section != Section::Values {
        return Err(parse_err(0, "missing 'values' section"));
    }
    let full = entries.len() - 1;
    if symmetric {
        for mask in 0..entries.len() {
            let comp = !mask & full;
            match (entries[mask], entries[comp]) {
                (Some(a), Some(b)) if a != b => {
                    return Err(parse_err(
                        0,
                        format!("masks {mask} and {comp} break complement symmetry"),
                    ));
                }
                (None, Some(b)) => entries[mask] = Some(b),
                _ => {}
            }
        }
    }
    let values: Vec<f64> = entries
        .iter()
        .enumerate()
        .map(|(m, v)| v.ok_or_else(|| parse_err(0, format!("missing entry for bitmask {m:#b}"))))
        .collect::<Result<_>>()?;

    let stencil = Stencil::with_origin(dim.expect("dim checked"), offsets)?;
    StencilPotential::new(stencil, values)
}

/// Writes the full table in the text format, masks in binary.
pub fn write_potential(potential: &StencilPotential) -> String {
    let stencil = potential.stencil();
    let n = stencil.len();
    let mut out = String::new();
    writeln!(out, "dim {}", stencil.dim()).unwrap();
    writeln!(out, "offsets").unwrap();
    // origin first, remapping bits accordingly
    let mut order = vec![stencil.origin_index()];
    order.extend((0..n).filter(|&i| i != stencil.origin_index()));
    for &i in &order {
        let y: Vec<String> = stencil.offsets()[i].iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", y.join(" ")).unwrap();
    }
    writeln!(out, "values").unwrap();
    for mask in 0..potential.values().len() as u32 {
        let original = order
            .iter()
            .enumerate()
            .fold(0u32, |m, (k, &i)| m | ((mask >> k & 1) << i));
        writeln!(out, "0b{:0width$b} {:?}", mask, potential.value(original), width = n).unwrap();
    }
    out
}
