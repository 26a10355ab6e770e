//! The family file format.
//!
//! ```text
//! # comment
//! n 4
//! 1 2        # element labels
//! 0x0c       # or a hexadecimal mask: {3,4}
//! ```
//!
//! The first non-comment line is the header `n <k>`. Every later non-blank
//! line holds exactly one set. `#` starts a comment that runs to the end of
//! the line. The serializer writes element labels in ascending order, one set
//! per line, sets sorted by mask value. The empty set has no labels and is
//! written as `0x0`.

use thiserror::Error;

use crate::family::{ground_mask, SetFamily, SetMask, MAX_GROUND};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing `n <k>` header")]
    MissingHeader,
    #[error("line {line}: malformed header")]
    BadHeader { line: usize },
    #[error("line {line}: ground size {k} exceeds the supported maximum of {MAX_GROUND}")]
    GroundTooLarge { line: usize, k: u64 },
    #[error("line {line}: ground size must be at least 1")]
    GroundZero { line: usize },
    #[error("line {line}: element {element} is outside [1, {n}]")]
    ElementOutOfRange { line: usize, element: u64, n: u32 },
    #[error("line {line}: mask {token} has bits outside [1, {n}]")]
    MaskOutOfRange { line: usize, token: String, n: u32 },
    #[error("line {line}: element {element} listed twice")]
    RepeatedElement { line: usize, element: u32 },
    #[error("line {line}: duplicate set {set}")]
    DuplicateSet { line: usize, set: SetMask },
    #[error("line {line}: the empty set is not allowed without --allow-empty")]
    EmptySet { line: usize },
    #[error("line {line}: unexpected token `{token}`")]
    BadToken { line: usize, token: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept the empty set as a member.
    pub allow_empty: bool,
}

/// Parses a family with default options (the empty set rejected).
pub fn parse_family(text: &str) -> Result<SetFamily, ParseError> {
    parse_family_with(text, ParseOptions::default())
}

pub fn parse_family_with(text: &str, opts: ParseOptions) -> Result<SetFamily, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let n = parse_header(header_line, header)?;

    let mut family = SetFamily::empty(n);
    for (line, body) in lines {
        let set = parse_set_line(line, body, n)?;
        if set.is_empty() && !opts.allow_empty {
            return Err(ParseError::EmptySet { line });
        }
        if !family.insert(set) {
            return Err(ParseError::DuplicateSet { line, set });
        }
    }
    Ok(family)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_header(line: usize, header: &str) -> Result<u32, ParseError> {
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("n") {
        return Err(ParseError::MissingHeader);
    }
    let k: u64 = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(ParseError::BadHeader { line })?;
    if tokens.next().is_some() {
        return Err(ParseError::BadHeader { line });
    }
    if k == 0 {
        return Err(ParseError::GroundZero { line });
    }
    if k > u64::from(MAX_GROUND) {
        return Err(ParseError::GroundTooLarge { line, k });
    }
    Ok(k as u32)
}

fn parse_set_line(line: usize, body: &str, n: u32) -> Result<SetMask, ParseError> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if let Some(hex) = tokens[0]
        .strip_prefix("0x")
        .or_else(|| tokens[0].strip_prefix("0X"))
    {
        if tokens.len() > 1 {
            return Err(ParseError::BadToken { line, token: tokens[1].to_string() });
        }
        let bits = Some(hex)
            .filter(|h| !h.is_empty() && h.bytes().all(|b| b.is_ascii_hexdigit()))
            .and_then(|h| u64::from_str_radix(h, 16).ok())
            .ok_or_else(|| ParseError::BadToken { line, token: tokens[0].to_string() })?;
        if bits & !ground_mask(n) != 0 {
            return Err(ParseError::MaskOutOfRange { line, token: tokens[0].to_string(), n });
        }
        return Ok(SetMask(bits));
    }

    let mut set = SetMask::EMPTY;
    for tok in tokens {
        let element: u64 = Some(tok)
            .filter(|t| t.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::BadToken { line, token: tok.to_string() })?;
        if element == 0 || element > u64::from(n) {
            return Err(ParseError::ElementOutOfRange { line, element, n });
        }
        let element = element as u32;
        if set.contains(element) {
            return Err(ParseError::RepeatedElement { line, element });
        }
        set = set.with(element);
    }
    Ok(set)
}

/// Writes `family` in the canonical file form.
pub fn serialize_family(family: &SetFamily) -> String {
    let mut out = format!("n {}\n", family.n());
    for set in family.iter() {
        if set.is_empty() {
            out.push_str("0x0");
        } else {
            let labels: Vec<String> = set.elements().map(|e| e.to_string()).collect();
            out.push_str(&labels.join(" "));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(e: &[u32]) -> SetMask {
        SetMask::from_elements(e.iter().copied())
    }

    #[test]
    fn labels_and_hex() {
        let f = parse_family("n 3\n1 2\n3\n").unwrap();
        assert_eq!(f.n(), 3);
        assert_eq!(f.members(), &[s(&[1, 2]), s(&[3])]);

        let f = parse_family("n 4\n0x0F\n").unwrap();
        assert_eq!(f.members(), &[s(&[1, 2, 3, 4])]);
    }

    #[test]
    fn duplicate_rejected() {
        assert_eq!(
            parse_family("n 3\n1\n1\n"),
            Err(ParseError::DuplicateSet { line: 3, set: s(&[1]) })
        );
        // same set spelled two ways
        assert!(matches!(
            parse_family("n 3\n1 2\n0x3\n"),
            Err(ParseError::DuplicateSet { line: 3, .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a family\n\n  n 4 # ground\n\n2 1 # unordered ok\n# nothing\n4\n";
        let f = parse_family(text).unwrap();
        assert_eq!(f.members(), &[s(&[1, 2]), s(&[4])]);
    }

    #[test]
    fn header_errors() {
        assert_eq!(parse_family(""), Err(ParseError::MissingHeader));
        assert_eq!(parse_family("# only\n"), Err(ParseError::MissingHeader));
        assert_eq!(parse_family("1 2\n"), Err(ParseError::MissingHeader));
        assert_eq!(parse_family("n x\n"), Err(ParseError::BadHeader { line: 1 }));
        assert_eq!(parse_family("n 3 4\n"), Err(ParseError::BadHeader { line: 1 }));
        assert_eq!(parse_family("n 0\n"), Err(ParseError::GroundZero { line: 1 }));
        assert_eq!(
            parse_family("n 65\n"),
            Err(ParseError::GroundTooLarge { line: 1, k: 65 })
        );
    }

    #[test]
    fn element_errors() {
        assert_eq!(
            parse_family("n 3\n1 4\n"),
            Err(ParseError::ElementOutOfRange { line: 2, element: 4, n: 3 })
        );
        assert_eq!(
            parse_family("n 3\n0 1\n"),
            Err(ParseError::ElementOutOfRange { line: 2, element: 0, n: 3 })
        );
        assert!(matches!(parse_family("n 3\n0x8\n"), Err(ParseError::MaskOutOfRange { .. })));
        assert!(matches!(parse_family("n 3\n1 a\n"), Err(ParseError::BadToken { .. })));
        assert!(matches!(parse_family("n 3\n0x1 2\n"), Err(ParseError::BadToken { .. })));
        assert!(matches!(parse_family("n 3\n0xZZ\n"), Err(ParseError::BadToken { .. })));
        assert!(matches!(parse_family("n 3\n0x+1\n"), Err(ParseError::BadToken { .. })));
        assert!(matches!(parse_family("n 3\n+1\n"), Err(ParseError::BadToken { .. })));
        assert_eq!(
            parse_family("n 3\n1 1\n"),
            Err(ParseError::RepeatedElement { line: 2, element: 1 })
        );
    }

    #[test]
    fn empty_set_gated() {
        assert_eq!(parse_family("n 3\n0x0\n"), Err(ParseError::EmptySet { line: 2 }));
        let f = parse_family_with("n 3\n0x0\n1\n", ParseOptions { allow_empty: true }).unwrap();
        assert!(f.contains_empty());
        assert_eq!(serialize_family(&f), "n 3\n0x0\n1\n");
    }

    #[test]
    fn serializer_form() {
        let f = parse_family("n 5\n5 3\n0x3\n").unwrap();
        assert_eq!(serialize_family(&f), "n 5\n1 2\n3 5\n");
    }

    #[test]
    fn full_width_ground() {
        let f = parse_family("n 64\n64\n0xffffffffffffffff\n").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(parse_family(&serialize_family(&f)).unwrap(), f);
    }
}
