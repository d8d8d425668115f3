//! Family documents: the text format and the JSON object form.
//!
//! Text: first line `n k`, then one member per line as space-separated
//! elements. Blank lines and `#` comments are skipped on input and never
//! written, so writer output parses back byte-identically. JSON input is
//! detected by a leading `{` and carries `{"n", "k", "sets"}`.

use std::fmt;

use serde::Deserialize;
use setfam::{KFamily, SetMask};

/// A diagnostic tied to an input line (0 = whole document).
#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "family document: {}", self.msg)
        } else {
            write!(f, "family document line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Deserialize)]
struct JsonDoc {
    n: u32,
    k: u32,
    sets: Vec<Vec<u32>>,
}

/// Parses either format, sniffing JSON by its leading brace.
pub fn parse_family(src: &str) -> Result<KFamily, ParseError> {
    if src.trim_start().starts_with('{') {
        return parse_json(src);
    }
    parse_text(src)
}

fn parse_json(src: &str) -> Result<KFamily, ParseError> {
    let doc: JsonDoc = serde_json::from_str(src)
        .map_err(|e| ParseError::at(e.line(), format!("invalid JSON: {e}")))?;
    KFamily::from_element_lists(doc.n, doc.k, &doc.sets)
        .map_err(|e| ParseError::at(0, e.to_string()))
}

fn parse_text(src: &str) -> Result<KFamily, ParseError> {
    let mut header: Option<(u32, u32)> = None;
    let mut members: Vec<SetMask> = Vec::new();
    let mut member_lines: Vec<usize> = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((n, k)) = header else {
            let mut it = line.split_whitespace();
            let n = parse_u32(it.next(), lineno, "ground size")?;
            let k = parse_u32(it.next(), lineno, "uniformity")?;
            if let Some(extra) = it.next() {
                return Err(ParseError::at(
                    lineno,
                    format!("header must be exactly \"n k\", found extra token {extra:?}"),
                ));
            }
            header = Some((n, k));
            continue;
        };
        let elems = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>().map_err(|_| {
                    ParseError::at(lineno, format!("element {tok:?} is not a positive integer"))
                })
            })
            .collect::<Result<Vec<u32>, ParseError>>()?;
        let mask = SetMask::from_elements(n, &elems)
            .map_err(|e| ParseError::at(lineno, e.to_string()))?;
        if mask.len() != k {
            return Err(ParseError::at(
                lineno,
                format!("member has {} elements, expected k = {k}", mask.len()),
            ));
        }
        if let Some(pos) = members.iter().position(|&m| m == mask) {
            return Err(ParseError::at(
                lineno,
                format!("duplicate member (first seen on line {})", member_lines[pos]),
            ));
        }
        members.push(mask);
        member_lines.push(lineno);
    }
    let Some((n, k)) = header else {
        return Err(ParseError::at(0, "empty document, expected a \"n k\" header"));
    };
    KFamily::new(n, k, members).map_err(|e| ParseError::at(0, e.to_string()))
}

fn parse_u32(tok: Option<&str>, line: usize, what: &str) -> Result<u32, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::at(line, format!("missing {what} in header")))?;
    tok.parse::<u32>()
        .map_err(|_| ParseError::at(line, format!("{what} {tok:?} is not a positive integer")))
}

/// Canonical text form: header line, then members in family order.
pub fn write_family(fam: &KFamily) -> String {
    let mut out = format!("{} {}\n", fam.n(), fam.k());
    for m in fam.members() {
        let elems: Vec<String> = m.elements().map(|e| e.to_string()).collect();
        out.push_str(&elems.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_byte_identical() {
        let src = "4 3\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n";
        let fam = parse_family(src).unwrap();
        assert_eq!(write_family(&fam), src);
    }

    #[test]
    fn comments_blanks_and_reordering_normalize() {
        let src = "# a family\n3 2\n\n2 3\n1 2\n";
        let fam = parse_family(src).unwrap();
        assert_eq!(write_family(&fam), "3 2\n1 2\n2 3\n");
    }

    #[test]
    fn json_form_parses() {
        let fam = parse_family(r#"{"n": 4, "k": 2, "sets": [[1,2],[3,4]]}"#).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(write_family(&fam), "4 2\n1 2\n3 4\n");
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = parse_family("3 2\n1 2 3\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.msg.contains("expected k = 2"), "{}", err.msg);
        let err = parse_family("3 2\n1 2\n1 2\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.msg.contains("line 2"), "{}", err.msg);
        let err = parse_family("3 2\n1 9\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_family("3\n1 2\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_family("").unwrap_err();
        assert_eq!(err.line, 0);
    }

    #[test]
    fn json_errors_surface() {
        assert!(parse_family("{\"n\": 3}").is_err());
        assert!(parse_family(r#"{"n": 3, "k": 2, "sets": [[1,2,3]]}"#).is_err());
    }
}
