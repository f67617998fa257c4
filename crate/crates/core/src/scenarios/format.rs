//! Line-oriented scenario documents.
//!
//! ```text
//! # comment
//! [medium Fe]
//! density = 8.49e28 m-3
//!
//! [scenario proton_10MeV]
//! particle = proton
//! energy = 10 MeV
//! ```
//!
//! Section kinds are `medium`, `scenario`, `cmb` and `lag`. Keys are
//! `key = value`; values stay as text until the section is interpreted.

use crate::error::{Error, Result};
use crate::units::{parse_as, Dimension};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionKind {
    Medium,
    Scenario,
    Cmb,
    Lag,
}

impl SectionKind {
    fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "medium" => SectionKind::Medium,
            "scenario" => SectionKind::Scenario,
            "cmb" => SectionKind::Cmb,
            "lag" => SectionKind::Lag,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub kind: SectionKind,
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry> {
        self.get(key).ok_or_else(|| Error::Parse {
            line: self.line,
            field: key.to_string(),
            message: format!("missing key in section `{}`", self.name),
        })
    }

    /// Reads a quantity of the given dimension, if the key is present.
    pub fn quantity(&self, key: &str, dimension: Dimension) -> Result<Option<f64>> {
        self.get(key).map(|e| e.quantity(dimension)).transpose()
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        self.quantity(key, Dimension::Dimensionless)
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            Some(e) => Err(e.error(format!("unknown key in section `{}`", self.name))),
            None => Ok(()),
        }
    }
}

impl Entry {
    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            field: self.key.clone(),
            message: message.into(),
        }
    }

    pub fn quantity(&self, dimension: Dimension) -> Result<f64> {
        let token: String = self.value.split_whitespace().collect();
        parse_as(&token, dimension).map_err(|e| self.error(e.to_string()))
    }

    /// Comma- or whitespace-separated list.
    pub fn list(&self) -> Vec<&str> {
        self.value
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect()
    }
}

/// Splits a document into sections. Names must be unique per kind.
pub fn parse_document(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let header = header.strip_suffix(']').ok_or_else(|| Error::Parse {
                line,
                field: "section".into(),
                message: "unterminated section header".into(),
            })?;
            let mut parts = header.split_whitespace();
            let tag = parts.next().unwrap_or("");
            let kind = SectionKind::from_tag(tag).ok_or_else(|| Error::Parse {
                line,
                field: "section".into(),
                message: format!("unknown section kind `{tag}`"),
            })?;
            let name = match (parts.next(), parts.next()) {
                (Some(n), None) => n.to_string(),
                _ => {
                    return Err(Error::Parse {
                        line,
                        field: "section".into(),
                        message: "expected `[kind name]`".into(),
                    })
                }
            };
            if sections.iter().any(|s| s.kind == kind && s.name == name) {
                return Err(Error::Parse {
                    line,
                    field: "section".into(),
                    message: format!("duplicate section `{name}`"),
                });
            }
            sections.push(Section {
                kind,
                name,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            field: content.to_string(),
            message: "expected `key = value`".into(),
        })?;
        let key = key.trim().to_string();
        let section = sections.last_mut().ok_or_else(|| Error::Parse {
            line,
            field: key.clone(),
            message: "key outside of any section".into(),
        })?;
        if section.get(&key).is_some() {
            return Err(Error::Parse {
                line,
                field: key,
                message: "duplicate key".into(),
            });
        }
        section.entries.push(Entry {
            key,
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(sections)
}
