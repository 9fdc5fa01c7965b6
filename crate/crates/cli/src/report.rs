use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const SCHEMA: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Undetermined,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undetermined => 3,
        }
    }
}

/// Exit code for configurations rejected before any command runs.
pub const EXIT_INVALID_CONFIG: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub status: Status,
    pub exit_code: i32,
    pub message: String,
}

impl Summary {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        Summary {
            status,
            exit_code: status.exit_code(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub config: RunConfig,
    pub config_hash: String,
    pub summary: Summary,
    pub payload: serde_json::Value,
    /// Wall-clock time; the only field that varies between identical runs.
    pub timing_ms: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
