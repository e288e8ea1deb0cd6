//! Check reports: a command echo plus one record per verification, with a
//! machine-readable payload. A failing record always carries a
//! counterexample witness in its payload. JSON output is deterministic
//! (sorted maps, declaration-ordered fields, no timing data).

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Self-contained statement of the property being verified.
    pub property: String,
    /// "pass" or "fail".
    pub status: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub payload: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            pass: true,
            checks: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        property: impl Into<String>,
        ok: bool,
        payload: Value,
    ) {
        if !ok {
            self.pass = false;
            debug_assert!(
                !payload.is_null(),
                "failing checks must carry a counterexample payload"
            );
        }
        self.checks.push(CheckRecord {
            name: name.into(),
            property: property.into(),
            status: if ok { "pass" } else { "fail" }.into(),
            payload,
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for c in &self.checks {
            out.push_str(&format!("  [{}] {} — {}\n", c.status, c.name, c.property));
            if c.status == "fail" && !c.payload.is_null() {
                out.push_str(&format!(
                    "        witness: {}\n",
                    serde_json::to_string(&c.payload).expect("payload serializes")
                ));
            }
        }
        out.push_str(&format!(
            "result: {} ({}/{} checks pass)\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.iter().filter(|c| c.status == "pass").count(),
            self.checks.len()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn report_flow() {
        let mut r = Report::new("demo");
        r.push("a", "first property", true, Value::Null);
        r.push("b", "second property", false, json!({"witness": 3}));
        assert!(!r.pass);
        let text = r.render_text();
        assert!(text.contains("[fail] b"));
        assert!(text.contains("witness"));
        let js = r.to_json();
        let parsed: Value = serde_json::from_str(&js).unwrap();
        assert_eq!(parsed["checks"][1]["payload"]["witness"], 3);
        assert_eq!(parsed["pass"], false);
        // Deterministic serialization.
        assert_eq!(js, r.to_json());
    }
}
