//! Line-oriented sectioned text documents.
//!
//! ```text
//! # comment
//! [section]
//! token token   # trailing comment
//! ```

use std::str::FromStr;

use thiserror::Error;

use crate::algebra::Label;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Line<'a> {
    pub no: usize,
    pub tokens: Vec<&'a str>,
}

impl Line<'_> {
    pub fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.no, msg)
    }

    pub fn expect_len(&self, n: usize, what: &str) -> Result<(), ParseError> {
        if self.tokens.len() == n {
            Ok(())
        } else {
            Err(self.err(format!(
                "expected {what} ({n} fields), found {} fields",
                self.tokens.len()
            )))
        }
    }

    pub fn real(&self, i: usize) -> Result<f64, ParseError> {
        parse_real(self.tokens[i], self.no)
    }

    pub fn label(&self, i: usize) -> Result<Label, ParseError> {
        parse_label(self.tokens[i], self.no)
    }

    /// `key = value`, `key=value` or `key value`.
    pub fn key_value(&self) -> Result<(&str, &str), ParseError> {
        match self.tokens.as_slice() {
            [k, "=", v] | [k, v] => Ok((k, v)),
            [kv] => kv
                .split_once('=')
                .filter(|(k, v)| !k.is_empty() && !v.is_empty())
                .ok_or_else(|| self.err("expected `key = value`")),
            _ => Err(self.err("expected `key = value`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Section<'a> {
    pub name: &'a str,
    pub line: usize,
    pub lines: Vec<Line<'a>>,
}

#[derive(Debug, Clone)]
pub struct Document<'a> {
    pub sections: Vec<Section<'a>>,
}

impl<'a> Document<'a> {
    pub fn parse(text: &'a str) -> Result<Self, ParseError> {
        let mut sections: Vec<Section<'a>> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ParseError::new(no, "unterminated section header"))?
                    .trim();
                if sections.iter().any(|s| s.name == name) {
                    return Err(ParseError::new(no, format!("duplicate section [{name}]")));
                }
                sections.push(Section {
                    name,
                    line: no,
                    lines: Vec::new(),
                });
                continue;
            }
            let tokens = body.split_whitespace().collect::<Vec<_>>();
            match sections.last_mut() {
                Some(s) => s.lines.push(Line { no, tokens }),
                None => {
                    return Err(ParseError::new(
                        no,
                        "content before the first section header",
                    ))
                }
            }
        }
        Ok(Document { sections })
    }

    pub fn section(&self, name: &str) -> Option<&Section<'a>> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Section<'a>, ParseError> {
        self.section(name)
            .ok_or_else(|| ParseError::new(0, format!("missing section [{name}]")))
    }

    pub fn reject_unknown(&self, known: &[&str]) -> Result<(), ParseError> {
        match self.sections.iter().find(|s| !known.contains(&s.name)) {
            Some(s) => Err(ParseError::new(
                s.line,
                format!("unknown section [{}]", s.name),
            )),
            None => Ok(()),
        }
    }
}

pub fn parse_real(token: &str, line: usize) -> Result<f64, ParseError> {
    let v = f64::from_str(token)
        .map_err(|_| ParseError::new(line, format!("`{token}` is not a number")))?;
    if v.is_nan() {
        return Err(ParseError::new(line, "NaN is not allowed"));
    }
    Ok(v)
}

pub fn parse_label(token: &str, line: usize) -> Result<Label, ParseError> {
    u32::from_str(token)
        .map(Label)
        .map_err(|_| ParseError::new(line, format!("`{token}` is not a label id")))
}

pub fn parse_bool(token: &str, line: usize) -> Result<bool, ParseError> {
    match token {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(ParseError::new(line, format!("`{token}` is not a boolean"))),
    }
}

/// Text form that parses back to exactly the same value.
pub fn fmt_exact(v: f64) -> String {
    format!("{v:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let doc =
            Document::parse("# head\n[a]\n1 2 # tail\n\n[b]\nkey = 3\nother 4\nx=5\n").unwrap();
        let a = doc.require("a").unwrap();
        assert_eq!(a.lines[0].tokens, vec!["1", "2"]);
        assert_eq!(a.lines[0].no, 3);
        let b = doc.require("b").unwrap();
        assert_eq!(b.lines[0].key_value().unwrap(), ("key", "3"));
        assert_eq!(b.lines[1].key_value().unwrap(), ("other", "4"));
        assert_eq!(b.lines[2].key_value().unwrap(), ("x", "5"));
        assert!(doc.require("c").is_err());
    }

    #[test]
    fn malformed_documents() {
        assert_eq!(Document::parse("1 2\n").unwrap_err().line, 1);
        assert_eq!(Document::parse("[a]\n[a]\n").unwrap_err().line, 2);
        assert_eq!(Document::parse("[a\n").unwrap_err().line, 1);
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_real("2e-4", 1).unwrap(), 2e-4);
        assert_eq!(parse_real("inf", 1).unwrap(), f64::INFINITY);
        assert!(parse_real("NaN", 1).is_err());
        assert!(parse_real("abc", 7).unwrap_err().msg.contains("abc"));
        for v in [0.1, 2e-4, 1e-300, -3.25, f64::INFINITY, 123456789.125] {
            assert_eq!(parse_real(&fmt_exact(v), 1).unwrap(), v);
        }
    }
}
