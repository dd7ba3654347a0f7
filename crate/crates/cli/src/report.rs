//! Deterministic, machine-parseable report documents: an ordered tree of
//! key/value pairs rendered as indented `key: value` lines. Exact values
//! (dyadic rationals, bitmasks) are rendered as integers or hex, never as
//! floating point.

use ideal_forge::Dyadic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportNode {
    Value(String),
    Section(ReportDocument),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReportDocument {
    entries: Vec<(String, ReportNode)>,
}

impl ReportDocument {
    pub fn new() -> Self {
        ReportDocument::default()
    }

    pub fn value(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), ReportNode::Value(value.into())));
        self
    }

    pub fn uint(&mut self, key: impl Into<String>, value: u64) -> &mut Self {
        self.value(key, value.to_string())
    }

    pub fn flag(&mut self, key: impl Into<String>, value: bool) -> &mut Self {
        self.value(key, if value { "true" } else { "false" })
    }

    pub fn hex(&mut self, key: impl Into<String>, value: u64) -> &mut Self {
        self.value(key, format!("{value:#x}"))
    }

    /// Exact dyadic value as `numerator/2^exponent`.
    pub fn dyadic(&mut self, key: impl Into<String>, value: &Dyadic) -> &mut Self {
        self.value(
            key,
            format!("{}/2^{}", value.numerator(), value.exponent()),
        )
    }

    pub fn list(&mut self, key: impl Into<String>, items: impl IntoIterator<Item = String>) -> &mut Self {
        let joined = items.into_iter().collect::<Vec<_>>().join(",");
        self.value(key, if joined.is_empty() { "-".into() } else { joined })
    }

    pub fn section(&mut self, key: impl Into<String>, body: ReportDocument) -> &mut Self {
        self.entries.push((key.into(), ReportNode::Section(body)));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        for (key, node) in &self.entries {
            for _ in 0..indent {
                out.push_str("  ");
            }
            match node {
                ReportNode::Value(v) => {
                    out.push_str(key);
                    out.push_str(": ");
                    out.push_str(v);
                    out.push('\n');
                }
                ReportNode::Section(body) => {
                    out.push_str(key);
                    out.push_str(":\n");
                    body.render_into(out, indent + 1);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_is_ordered_and_stable() {
        let mut inner = ReportDocument::new();
        inner.uint("b", 2).uint("a", 1);
        let mut doc = ReportDocument::new();
        doc.value("command", "member")
            .dyadic("mass", &Dyadic::new(3, 4))
            .section("details", inner);
        let text = doc.render();
        assert_eq!(
            text,
            "command: member\nmass: 3/2^4\ndetails:\n  b: 2\n  a: 1\n"
        );
        assert_eq!(doc.render(), text);
    }
}
