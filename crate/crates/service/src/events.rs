//! The JSON-lines event log: one `{"ts", "type", "payload"}` object per line.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use regret_elicit::engine::{ModuleKind, Probe};
use regret_elicit::fuzzy::{FuzzyResponse, ResponseClass};
use regret_elicit::{FitReport, MetricsReport, PStarRecord, SubjectSpec};

use crate::error::{Result, ServiceError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SubjectKind {
    Human,
    Synthetic { spec: SubjectSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub session_id: Uuid,
    /// Dollar value of a normalized outcome of magnitude 1.
    pub money_scale: f64,
    pub seed: u64,
    #[serde(default)]
    pub practice: bool,
    pub subject: SubjectKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "payload", rename_all = "kebab-case")]
pub enum EventBody {
    SessionCreated(SessionConfig),
    ProblemPresented(Probe),
    ResponseRecorded {
        sequence: usize,
        response: FuzzyResponse,
        class: ResponseClass,
    },
    PStarEstimated {
        module: ModuleKind,
        record: PStarRecord,
    },
    ModelFitted(FitReport),
    MetricsComputed {
        metrics: Option<MetricsReport>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
}

impl EventBody {
    pub fn type_name(&self) -> &'static str {
        match self {
            EventBody::SessionCreated(_) => "session-created",
            EventBody::ProblemPresented(_) => "problem-presented",
            EventBody::ResponseRecorded { .. } => "response-recorded",
            EventBody::PStarEstimated { .. } => "p-star-estimated",
            EventBody::ModelFitted(_) => "model-fitted",
            EventBody::MetricsComputed { .. } => "metrics-computed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub ts: DateTime<Utc>,
    #[serde(flatten)]
    pub body: EventBody,
}

impl Event {
    pub fn now(body: EventBody) -> Self {
        Self {
            ts: Utc::now(),
            body,
        }
    }
}

/// Appends events, one line per event, each with a single write.
pub fn append_events(path: &Path, events: &[Event]) -> Result<()> {
    if events.is_empty() {
        return Ok(());
    }
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    for event in events {
        let mut line =
            serde_json::to_vec(event).map_err(|e| ServiceError::Corrupt(e.to_string()))?;
        line.push(b'\n');
        file.write_all(&line)?;
    }
    file.sync_data()?;
    Ok(())
}

/// Reads a log. A final line without its newline that does not parse is a
/// torn write: it is dropped and, with `repair`, cut from the file so later
/// appends start on a fresh line. Any other unparseable line is corruption.
pub fn read_events(path: &Path, repair: bool) -> Result<Vec<Event>> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut events = Vec::new();
    let mut line = String::new();
    let mut number = 0;
    let mut valid_len = 0u64;
    loop {
        line.clear();
        let read = reader.read_line(&mut line)?;
        if read == 0 {
            break;
        }
        number += 1;
        let complete = line.ends_with('\n');
        if !line.trim().is_empty() {
            match serde_json::from_str(line.trim_end()) {
                Ok(event) => events.push(event),
                Err(_) if !complete => {
                    tracing::warn!(path = %path.display(), line = number, "dropping torn final line");
                    if repair {
                        OpenOptions::new()
                            .write(true)
                            .open(path)?
                            .set_len(valid_len)?;
                    }
                    break;
                }
                Err(e) => {
                    return Err(ServiceError::Corrupt(format!(
                        "{} line {number}: {e}",
                        path.display()
                    )))
                }
            }
        }
        if !complete && repair {
            // a parseable last event missing its newline
            OpenOptions::new()
                .append(true)
                .open(path)?
                .write_all(b"\n")?;
        }
        valid_len += read as u64;
    }
    Ok(events)
}
