use serde_json::{json, Map, Value};

use causekit::Error;

/// What a command produced: the text for standard output, the verdict
/// document behind it (if any) and the sign of the verdict.
pub struct Output {
    pub text: String,
    pub document: Option<Value>,
    pub positive: bool,
}

impl Output {
    pub fn verdict(document: Value, positive: bool) -> Self {
        Output {
            text: render(&document),
            document: Some(document),
            positive,
        }
    }

    pub fn raw(text: String) -> Self {
        Output {
            text,
            document: None,
            positive: true,
        }
    }
}

pub enum Failure {
    Usage(String),
    Core(Error),
}

impl Failure {
    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::BudgetExceeded(_)) => 3,
            _ => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Keys of `serde_json` maps are kept sorted, so the rendering is canonical.
pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Assembles a verdict document.
pub struct Doc {
    map: Map<String, Value>,
}

impl Doc {
    pub fn new(command: &str, args: Value) -> Self {
        let mut map = Map::new();
        map.insert("command".into(), json!({ "name": command, "args": args }));
        Doc { map }
    }

    pub fn set(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.map.insert(key.into(), value.into());
        self
    }

    pub fn budget(self, used: u64, limit: u64) -> Self {
        self.set(
            "diagnostics",
            json!({ "budgetUsed": used, "budgetLimit": limit }),
        )
    }

    pub fn finish(mut self, verdict: bool) -> Output {
        self.map.insert("verdict".into(), Value::Bool(verdict));
        Output::verdict(Value::Object(self.map), verdict)
    }
}

/// One `key  value` line per top-level field, keys padded to a column.
pub fn human(doc: &Value) -> String {
    let Some(map) = doc.as_object() else {
        return String::new();
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in map {
        let shown = match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push_str(&format!("{k:width$}  {shown}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_aligned() {
        let out = Doc::new("solve", json!({"model": "m.json"}))
            .set("minDistance", 0.5)
            .finish(true);
        let text = out.text;
        assert!(text.find("\"command\"").unwrap() < text.find("\"minDistance\"").unwrap());
        assert!(text.find("\"minDistance\"").unwrap() < text.find("\"verdict\"").unwrap());
        let h = human(out.document.as_ref().unwrap());
        assert!(h.lines().all(|l| l.chars().nth(11) == Some(' ')));
    }

    #[test]
    fn budget_errors_exit_with_three() {
        assert_eq!(Failure::Core(Error::BudgetExceeded(5)).exit_code(), 3);
        assert_eq!(Failure::Usage("x".into()).exit_code(), 2);
    }
}
