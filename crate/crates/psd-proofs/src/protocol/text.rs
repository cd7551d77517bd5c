//! The canonical text format shared by instances, messages, and transcripts:
//! one `key: value` per line, integers base-10, lists space-separated,
//! sections delimited by `---`. Everything that is digested, diffed, or
//! mutated flows through this form.

use crate::error::{Error, Result};

pub const SECTION_DELIMITER: &str = "---";

/// An ordered list of lines; keyed lines are `key: value`, bare lines carry
/// no key (used for matrix rows). Duplicate keys are meaningful and keep
/// their order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KvLines {
    lines: Vec<(Option<String>, String)>,
}

impl KvLines {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        debug_assert!(!key.is_empty() && !key.contains(':'));
        self.lines.push((Some(key.to_string()), value.into()));
    }

    pub fn push_bare(&mut self, value: impl Into<String>) {
        self.lines.push((None, value.into()));
    }

    pub fn push_ints<I: std::fmt::Display>(&mut self, key: &str, values: &[I]) {
        self.push(key, join_ints(values));
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        for raw in text.lines() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            match line.split_once(':') {
                Some((key, value)) if !key.trim().is_empty() && !key.contains(' ') => {
                    lines.push((Some(key.trim().to_string()), value.trim().to_string()));
                }
                _ => lines.push((None, line.trim().to_string())),
            }
        }
        Ok(KvLines { lines })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines
            .iter()
            .find(|(k, _)| k.as_deref() == Some(key))
            .map(|(_, v)| v.as_str())
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.lines
            .iter()
            .filter(move |(k, _)| k.as_deref() == Some(key))
            .map(|(_, v)| v.as_str())
    }

    pub fn bare(&self) -> impl Iterator<Item = &str> {
        self.lines
            .iter()
            .filter(|(k, _)| k.is_none())
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::parse(format!("missing `{key}:` line")))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.lines {
            match key {
                Some(k) => {
                    out.push_str(k);
                    out.push_str(": ");
                    out.push_str(value);
                }
                None => out.push_str(value),
            }
            out.push('\n');
        }
        out
    }
}

pub fn join_ints<I: std::fmt::Display>(values: &[I]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::parse(format!("bad integer `{t}`")))
        })
        .collect()
}

pub fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::parse(format!("bad integer `{t}`")))
        })
        .collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(format!("bad integer `{t}`")))
        })
        .collect()
}

pub fn parse_i64(s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| Error::parse(format!("bad integer `{s}`")))
}

pub fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::parse(format!("bad integer `{s}`")))
}

pub fn parse_u64(s: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::parse(format!("bad integer `{s}`")))
}

/// Splits a document on `---` delimiter lines.
pub fn split_sections(text: &str) -> Vec<String> {
    let mut sections = vec![String::new()];
    for line in text.lines() {
        if line.trim_end_matches('\r').trim() == SECTION_DELIMITER {
            sections.push(String::new());
        } else {
            let cur = sections.last_mut().unwrap();
            cur.push_str(line);
            cur.push('\n');
        }
    }
    sections
}

pub fn join_sections<S: AsRef<str>>(sections: &[S]) -> String {
    let mut out = String::new();
    for (i, s) in sections.iter().enumerate() {
        if i > 0 {
            out.push_str(SECTION_DELIMITER);
            out.push('\n');
        }
        out.push_str(s.as_ref());
        if !s.as_ref().is_empty() && !s.as_ref().ends_with('\n') {
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let mut kv = KvLines::new();
        kv.push("problem", "threesum");
        kv.push_ints("a", &[1i64, -2, 3]);
        kv.push_bare("7 8 9");
        let text = kv.render();
        assert_eq!(text, "problem: threesum\na: 1 -2 3\n7 8 9\n");
        let back = KvLines::parse(&text).unwrap();
        assert_eq!(back.get("problem"), Some("threesum"));
        assert_eq!(back.get("a"), Some("1 -2 3"));
        assert_eq!(back.bare().collect::<Vec<_>>(), vec!["7 8 9"]);
    }

    #[test]
    fn duplicate_keys_keep_order() {
        let kv = KvLines::parse("s: 1 2\ns: 3\nt: 4\n").unwrap();
        let all: Vec<&str> = kv.get_all("s").collect();
        assert_eq!(all, vec!["1 2", "3"]);
    }

    #[test]
    fn sections_split_and_join() {
        let text = "a: 1\n---\nb: 2\n---\nc: 3\n";
        let sections = split_sections(text);
        assert_eq!(sections.len(), 3);
        assert_eq!(sections[1], "b: 2\n");
        assert_eq!(join_sections(&sections), text);
    }

    #[test]
    fn int_list_parsing() {
        assert_eq!(parse_i64_list("1 -2  3").unwrap(), vec![1, -2, 3]);
        assert!(parse_i64_list("1 x").is_err());
    }
}
