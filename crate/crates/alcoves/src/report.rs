//! Plain-text pass/fail reports.

use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub property: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<Line>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    /// Records one property and returns whether it passed.
    pub fn check(&mut self, property: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.lines.push(Line { property: property.into(), passed, detail: detail.into() });
        passed
    }

    pub fn append(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    /// Prefixes every property name.
    pub fn scoped(mut self, scope: &str) -> Report {
        for l in &mut self.lines {
            l.property = format!("{scope}: {}", l.property);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Line> {
        self.lines.iter().filter(|l| !l.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let tag = if l.passed { "PASS" } else { "FAIL" };
            if l.detail.is_empty() {
                writeln!(out, "{tag}  {}", l.property).unwrap();
            } else {
                writeln!(out, "{tag}  {}: {}", l.property, l.detail).unwrap();
            }
        }
        out
    }
}
