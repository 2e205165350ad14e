use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Accept,
    Reject,
    Ok,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass | Status::Accept | Status::Ok => 0,
            Status::Fail | Status::Reject => 1,
            Status::Error => 2,
        }
    }
}

/// The result of one command. `data` is command specific.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    pub message: String,
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, status: Status, message: impl Into<String>, data: Value) -> Report {
        Report { command: command.into(), status, code: None, message: message.into(), data }
    }

    pub fn with_code(mut self, code: &str) -> Report {
        self.code = Some(code.into());
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut out = format!("{:?}", self.status).to_uppercase();
        if let Some(c) = &self.code {
            out.push_str(&format!(" [{}]", c));
        }
        if !self.message.is_empty() {
            out.push_str(": ");
            out.push_str(&self.message);
        }
        out.push('\n');
        if let Value::Object(map) = &self.data {
            for (k, v) in map {
                write_value(&mut out, k, v);
            }
        }
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_value(out: &mut String, key: &str, v: &Value) {
    match v {
        Value::Array(items) if items.is_empty() => out.push_str(&format!("{}: (none)\n", key)),
        Value::Array(items) => {
            out.push_str(&format!("{}:\n", key));
            for it in items {
                out.push_str(&format!("  - {}\n", scalar_text(it)));
            }
        }
        Value::Object(map) => {
            out.push_str(&format!("{}:\n", key));
            for (k, x) in map {
                out.push_str(&format!("  {}: {}\n", k, scalar_text(x)));
            }
        }
        Value::Null => {}
        other => out.push_str(&format!("{}: {}\n", key, scalar_text(other))),
    }
}
