//! Verdicts and machine-readable check records shared by the verification
//! routines and the command-line front end.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Combines two verdicts: any failure wins, then any inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }
}

/// One check: what was run, on which inputs, what came out, and which
/// identity it exercises.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    pub inputs: Value,
    pub outputs: Value,
    pub verdict: Verdict,
    pub anchor: String,
}

impl Record {
    pub fn new(name: &str, anchor: &str, inputs: Value, outputs: Value, verdict: Verdict) -> Self {
        Record {
            name: name.to_string(),
            inputs,
            outputs,
            verdict,
            anchor: anchor.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        Report {
            command: command.into(),
            seed,
            records: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    /// Sorts records by name then inputs and recomputes the summary, so the
    /// output does not depend on the order checks were run in.
    pub fn finish(mut self) -> Self {
        self.records.sort_by(|x, y| {
            x.name
                .cmp(&y.name)
                .then_with(|| x.inputs.to_string().cmp(&y.inputs.to_string()))
        });
        let mut s = Summary::default();
        for r in &self.records {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Inconclusive => s.inconclusive += 1,
            }
        }
        self.summary = s;
        self
    }

    /// 0 all-pass, 1 any fail, 3 inconclusive without failures.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if self.summary.inconclusive > 0 {
            3
        } else {
            0
        }
    }

    /// One JSON object per line: a header, every record, then the summary.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let header = serde_json::json!({ "command": self.command, "seed": self.seed });
        out.push_str(&header.to_string());
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "summary": self.summary }).to_string());
        out.push('\n');
        out
    }

    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let tag = match r.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!("[{tag}] {} ({})\n", r.name, r.anchor));
        }
        out.push_str(&format!(
            "{}: {} pass, {} fail, {} inconclusive\n",
            self.command, self.summary.pass, self.summary.fail, self.summary.inconclusive
        ));
        out
    }
}
