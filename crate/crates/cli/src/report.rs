use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Assertion {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Result of one command: a JSON body, human-readable lines and the
/// assertion ledger.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub result: Value,
    pub assertions: Vec<Assertion>,
    #[serde(skip)]
    pub text: Vec<String>,
    #[serde(skip)]
    pub dot: Option<String>,
}

impl Report {
    pub fn new(
        command: &str,
        result: Value,
        text: Vec<String>,
        assertions: Vec<Assertion>,
    ) -> Self {
        let passed = assertions.iter().all(|a| a.passed);
        Report {
            command: command.to_string(),
            passed,
            result,
            assertions,
            text,
            dot: None,
        }
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for line in &self.text {
            out.push_str(line);
            out.push('\n');
        }
        if !self.assertions.is_empty() {
            out.push_str("assertions:\n");
            for a in &self.assertions {
                let tag = if a.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("  {tag} {}: {}\n", a.name, a.detail));
            }
        }
        out
    }
}
