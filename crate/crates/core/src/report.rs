//! Check records shared by every verification suite.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// A printed coefficient disagrees with the recomputed one while every
    /// structural statement holds.
    SoftMismatch,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::SoftMismatch => "soft-mismatch",
            Status::Fail => "fail",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// The worse of two statuses.
    pub fn and(self, other: Status) -> Status {
        self.max(other)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    /// Relation or table the check belongs to.
    pub group: String,
    /// Ladder index or power, when the check is one member of a family.
    pub index: Option<i64>,
    pub id: String,
    /// The printed statement being checked.
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recomputed: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub convention_dependent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(suite: &str, group: &str, index: Option<i64>, id: impl Into<String>, anchor: impl Into<String>) -> Self {
        CheckRecord {
            suite: suite.into(),
            group: group.into(),
            index,
            id: id.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            expected: None,
            recomputed: None,
            convention_dependent: false,
            note: None,
        }
    }

    pub fn status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub fn expected(mut self, v: impl Into<String>) -> Self {
        self.expected = Some(v.into());
        self
    }

    pub fn recomputed(mut self, v: impl Into<String>) -> Self {
        self.recomputed = Some(v.into());
        self
    }

    pub fn note(mut self, v: impl Into<String>) -> Self {
        self.note = Some(v.into());
        self
    }

    pub fn convention(mut self, flag: bool) -> Self {
        self.convention_dependent = flag;
        self
    }

    fn sort_key(&self) -> (&str, &str, i64, &str) {
        (&self.suite, &self.group, self.index.unwrap_or(i64::MIN), &self.id)
    }

    pub fn is_hard_failure(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}/{}", self.status, self.suite, self.group)?;
        if let Some(n) = self.index {
            write!(f, " n={n}")?;
        }
        write!(f, ": {}", self.id)?;
        if self.status != Status::Pass {
            if let Some(e) = &self.expected {
                write!(f, " expected {e}")?;
            }
            if let Some(r) = &self.recomputed {
                write!(f, " recomputed {r}")?;
            }
        }
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub soft_mismatch: usize,
    pub fail: usize,
}

impl Summary {
    pub fn of(records: &[CheckRecord]) -> Self {
        let mut s = Summary { total: records.len(), ..Default::default() };
        for r in records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::SoftMismatch => s.soft_mismatch += 1,
                Status::Fail => s.fail += 1,
            }
        }
        s
    }
}

/// Sort records into their canonical emission order.
pub fn sort_records(records: &mut [CheckRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// A check that raised an error is a hard failure carrying the message.
pub fn error_record(suite: &str, group: &str, index: Option<i64>, id: impl Into<String>, err: &crate::Error) -> CheckRecord {
    CheckRecord::new(suite, group, index, id, "").status(Status::Fail).note(err.to_string())
}
