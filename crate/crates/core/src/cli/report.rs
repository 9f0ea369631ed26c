use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::monoids::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failure,
    Unknown,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failure => 1,
            Status::Unknown => 2,
            Status::Error => 3,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetEcho {
    pub max_sum: u64,
    pub max_states: usize,
}

impl From<Budget> for BudgetEcho {
    fn from(b: Budget) -> Self {
        BudgetEcho {
            max_sum: b.max_sum,
            max_states: b.max_states,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    /// SHA-256 of the canonical text of the input graph.
    pub graph_hash: Option<String>,
    /// `(C-set, e_X)` for the algebra the computation ran in.
    pub distinguished: Vec<(String, String)>,
    pub budget: Option<BudgetEcho>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub status: Status,
    pub verb: String,
    pub payload: Value,
    pub provenance: Provenance,
    /// Plain-text rendering; not part of the JSON form.
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn new(verb: impl Into<String>) -> Self {
        Report {
            status: Status::Ok,
            verb: verb.into(),
            payload: Value::Null,
            provenance: Provenance {
                version: env!("CARGO_PKG_VERSION").to_string(),
                ..Provenance::default()
            },
            text: String::new(),
        }
    }

    pub fn error(verb: impl Into<String>, code: &str, message: String) -> Self {
        let mut r = Report::new(verb);
        r.status = Status::Error;
        r.text = format!("error [{code}]: {message}");
        r.payload = serde_json::json!({ "code": code, "message": message });
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values serialize")
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.text.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("monoid");
        r.payload = serde_json::json!({ "group": "Z/2", "n": [1, 2] });
        r.provenance.budget = Some(Budget::default().into());
        r.provenance.distinguished = vec![("v:[e1 e2]".into(), "e2".into())];
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back.to_json(), r.to_json());
        assert_eq!(back.status, Status::Ok);
        assert_eq!(Status::Unknown.exit_code(), 2);
    }
}
