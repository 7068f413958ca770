//! Input parsing: quiver description files and element expressions.

use std::collections::BTreeMap;
use std::io::Read;
use std::str::FromStr;

use num::{BigRational, Zero};
use quiverdt::coha::{MultiPartition, SymElement};
use quiverdt::{DimVector, Quiver};
use serde::Deserialize;

/// On-disk quiver description: vertex names plus the arrow matrix in vertex
/// order; `arrows[i][j]` counts arrows i -> j.
#[derive(Debug, Deserialize)]
struct QuiverFile {
    vertices: Vec<String>,
    arrows: Vec<Vec<u32>>,
}

/// Load a quiver from `--m` (one vertex, m loops; takes precedence), a JSON
/// file, or stdin when the path is "-".
pub fn load_quiver(
    path: Option<&str>,
    loops: Option<u32>,
    stdin: &mut dyn Read,
) -> Result<Quiver, String> {
    if let Some(m) = loops {
        return Ok(Quiver::loops(m));
    }
    let Some(path) = path else {
        return Err("one of --quiver or --m is required".into());
    };
    let text = if path == "-" {
        let mut buf = String::new();
        stdin
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?
    };
    let file: QuiverFile =
        serde_json::from_str(&text).map_err(|e| format!("parsing quiver JSON: {e}"))?;
    Quiver::new(file.vertices, file.arrows).map_err(|e| e.to_string())
}

/// Parse an element at `d` written as a signed sum of monomial-symmetric
/// terms, e.g. "2*[1|]-[|1]", "[2,1|1]", or a bare rational for the
/// weight-zero key.
pub fn parse_element(d: &DimVector, text: &str) -> Result<SymElement, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty element expression".into());
    }
    let mut acc: BTreeMap<MultiPartition, BigRational> = BTreeMap::new();
    let marked = text.replace('+', "\u{0}+").replace('-', "\u{0}-");
    for piece in marked.split('\u{0}') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (negate, body) = match piece.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, piece.strip_prefix('+').unwrap_or(piece).trim()),
        };
        if body.is_empty() {
            return Err(format!("dangling sign in {text:?}"));
        }
        let (coeff_str, mono_str) = match body.split_once('*') {
            Some((c, m)) => (Some(c.trim()), Some(m.trim())),
            None if body.starts_with('[') => (None, Some(body)),
            None => (Some(body), None),
        };
        let mut coeff = match coeff_str {
            Some(c) => BigRational::from_str(c).map_err(|e| format!("coefficient {c:?}: {e}"))?,
            None => BigRational::from_integer(1.into()),
        };
        if negate {
            coeff = -coeff;
        }
        let mono = match mono_str {
            Some(m) => MultiPartition::from_str(m).map_err(|e| e.to_string())?,
            None => MultiPartition::new(vec![Vec::new(); d.len()]),
        };
        *acc.entry(mono).or_insert_with(BigRational::zero) += coeff;
    }
    acc.retain(|_, c| !c.is_zero());
    let degree = acc
        .keys()
        .next()
        .map(|m| m.weight() as usize)
        .unwrap_or(0);
    SymElement::from_terms(d.clone(), degree, acc.into_iter().collect())
        .map_err(|e| e.to_string())
}
