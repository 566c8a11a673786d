//! Report documents.
//!
//! A report is a sequence of `key: value` lines; nesting is two spaces per
//! level and a key with no value opens a section. The last line is always
//! `verdict: ok|holds|fails`.

use std::fmt::Write;

use coconvex::Interval;

use crate::args::FloatFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Holds,
    Fails,
}

impl Verdict {
    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Ok | Verdict::Holds => 0,
            Verdict::Fails => 1,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Ok => "ok",
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        }
    }
}

pub struct Report {
    format: FloatFormat,
    depth: usize,
    body: String,
}

impl Report {
    pub fn new(command: &str, format: FloatFormat) -> Self {
        let mut r = Report {
            format,
            depth: 0,
            body: String::new(),
        };
        r.text("command", command);
        r
    }

    pub fn float(&self, v: f64) -> String {
        // Adding 0.0 folds -0.0 into 0.0.
        let v = v + 0.0;
        match self.format {
            FloatFormat::Shortest => format!("{v:?}"),
            FloatFormat::Fixed17 => format!("{v:.16e}"),
        }
    }

    fn line(&mut self, key: &str, value: Option<&str>) {
        let indent = "  ".repeat(self.depth);
        match value {
            Some(v) => writeln!(self.body, "{indent}{key}: {v}"),
            None => writeln!(self.body, "{indent}{key}:"),
        }
        .expect("writing to a String");
    }

    pub fn text(&mut self, key: &str, value: impl AsRef<str>) {
        self.line(key, Some(value.as_ref()));
    }

    pub fn num(&mut self, key: &str, v: f64) {
        let s = self.float(v);
        self.line(key, Some(&s));
    }

    pub fn opt_num(&mut self, key: &str, v: Option<f64>) {
        match v {
            Some(v) => self.num(key, v),
            None => self.text(key, "none"),
        }
    }

    pub fn int(&mut self, key: &str, v: usize) {
        self.line(key, Some(&v.to_string()));
    }

    pub fn flag(&mut self, key: &str, v: bool) {
        self.line(key, Some(if v { "true" } else { "false" }));
    }

    pub fn nums(&mut self, key: &str, vs: &[f64]) {
        let items: Vec<String> = vs.iter().map(|&v| self.float(v)).collect();
        self.line(key, Some(&format!("[{}]", items.join(", "))));
    }

    pub fn interval(&mut self, key: &str, iv: Interval) {
        let s = format!("[{}, {}]", self.float(iv.lo()), self.float(iv.hi()));
        self.line(key, Some(&s));
    }

    /// Opens a nested section; close it with [`Report::end`].
    pub fn begin(&mut self, key: &str) {
        self.line(key, None);
        self.depth += 1;
    }

    pub fn end(&mut self) {
        self.depth = self.depth.saturating_sub(1);
    }

    pub fn finish(mut self, verdict: Verdict, quiet: bool) -> String {
        self.depth = 0;
        if quiet {
            self.body.clear();
        }
        self.text("verdict", verdict.as_str());
        self.body
    }
}
