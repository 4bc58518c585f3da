//! Two-mode report writer: human-readable text or a line-oriented
//! `key=value` stream for scripting. Both modes share the same value
//! encodings so documentation written against one applies to the other.

use std::fmt::Display;

/// Output style selected with `--format`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    /// Aligned `key = value` lines with commentary and small matrix blocks.
    Text,
    /// One `key=value` pair per line, nothing else; values run to the end
    /// of the line.
    Machine,
}

pub struct Report {
    machine: bool,
    buf: String,
}

impl Report {
    pub fn new(format: Format) -> Report {
        Report {
            machine: format == Format::Machine,
            buf: String::new(),
        }
    }

    /// One key/value pair, in both modes.
    pub fn kv(&mut self, key: &str, value: impl Display) {
        if self.machine {
            self.buf.push_str(&format!("{key}={value}\n"));
        } else {
            self.buf.push_str(&format!("{key:<22} {value}\n"));
        }
    }

    /// Commentary shown only in text mode.
    pub fn note(&mut self, text: impl Display) {
        if !self.machine {
            self.buf.push_str(&format!("# {text}\n"));
        }
    }

    /// Blank separator, text mode only.
    pub fn blank(&mut self) {
        if !self.machine {
            self.buf.push('\n');
        }
    }

    /// Verbatim multi-line block (matrix or vector in the exchange format),
    /// text mode only; machine consumers get artifacts through `--emit`.
    pub fn block(&mut self, body: &str) {
        if !self.machine {
            for line in body.lines() {
                self.buf.push_str("    ");
                self.buf.push_str(line);
                self.buf.push('\n');
            }
        }
    }

    /// One record of several pairs on a single line, in both modes.
    pub fn row(&mut self, pairs: &[(&str, String)]) {
        let joined: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if self.machine {
            self.buf.push_str(&joined.join(" "));
        } else {
            self.buf.push_str("  ");
            self.buf.push_str(&joined.join("  "));
        }
        self.buf.push('\n');
    }

    pub fn finish(self) {
        print!("{}", self.buf);
    }
}

/// Comma-joined list; empty slices encode as an empty value.
pub fn csv<T: Display>(items: &[T]) -> String {
    items
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Node partition: members comma-joined, classes separated by `|`.
pub fn classes(cs: &[Vec<usize>]) -> String {
    cs.iter()
        .map(|c| csv(c))
        .collect::<Vec<_>>()
        .join("|")
}

/// Arc list `u>v` comma-joined.
pub fn arcs(list: &[(usize, usize)]) -> String {
    list.iter()
        .map(|(u, v)| format!("{u}>{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Walk `v0>v1>...>vn`.
pub fn path(nodes: &[usize]) -> String {
    nodes
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(">")
}
