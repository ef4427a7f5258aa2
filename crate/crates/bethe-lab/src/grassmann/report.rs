use serde::Serialize;
use serde_json::Value;

/// Outcome of one mechanically verified identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub parameters: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl IdentityReport {
    pub fn new(identity: &str, parameters: Value, counterexample: Option<String>) -> Self {
        IdentityReport { identity: identity.to_string(), parameters, pass: counterexample.is_none(), counterexample }
    }
}
