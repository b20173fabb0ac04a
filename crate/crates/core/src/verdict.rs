//! Three-valued outcomes for quantified asymptotic conditions checked at a
//! finite horizon.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Witnessed,
    Falsified,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Witnessed => "witnessed",
            Status::Falsified => "falsified",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn is_witnessed(self) -> bool {
        self == Status::Witnessed
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a check together with its evidence.
///
/// A witnessed verdict carries the constants that make the inequality hold on
/// every probed point; a falsified one carries the point where it fails. The
/// horizon records the search bounds that were used, so every verdict is
/// readable as "at this horizon".
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Vec<(String, f64)>,
    pub counterexample: Vec<(String, f64)>,
    pub horizon: Vec<(String, f64)>,
    pub note: String,
}

impl Verdict {
    pub fn new(status: Status) -> Self {
        Verdict {
            status,
            witness: Vec::new(),
            counterexample: Vec::new(),
            horizon: Vec::new(),
            note: String::new(),
        }
    }

    pub fn witnessed() -> Self {
        Self::new(Status::Witnessed)
    }

    pub fn falsified() -> Self {
        Self::new(Status::Falsified)
    }

    pub fn inconclusive() -> Self {
        Self::new(Status::Inconclusive)
    }

    pub fn with_witness(mut self, key: &str, value: f64) -> Self {
        self.witness.push((key.to_string(), value));
        self
    }

    pub fn with_counterexample(mut self, key: &str, value: f64) -> Self {
        self.counterexample.push((key.to_string(), value));
        self
    }

    pub fn with_horizon(mut self, key: &str, value: f64) -> Self {
        self.horizon.push((key.to_string(), value));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if self.note.is_empty() {
            self.note = note;
        } else {
            self.note.push_str("; ");
            self.note.push_str(&note);
        }
        self
    }

    pub fn witness_value(&self, key: &str) -> Option<f64> {
        lookup(&self.witness, key)
    }

    pub fn counterexample_value(&self, key: &str) -> Option<f64> {
        lookup(&self.counterexample, key)
    }

    pub fn horizon_value(&self, key: &str) -> Option<f64> {
        lookup(&self.horizon, key)
    }

    pub fn is_witnessed(&self) -> bool {
        self.status == Status::Witnessed
    }

    pub fn is_falsified(&self) -> bool {
        self.status == Status::Falsified
    }

    /// Flat key-value record with a stable field order.
    pub fn to_record(&self) -> Vec<(String, String)> {
        vec![
            ("status".to_string(), self.status.to_string()),
            ("witness".to_string(), render_pairs(&self.witness)),
            ("counterexample".to_string(), render_pairs(&self.counterexample)),
            ("horizon".to_string(), render_pairs(&self.horizon)),
            ("note".to_string(), self.note.clone()),
        ]
    }
}

fn lookup(pairs: &[(String, f64)], key: &str) -> Option<f64> {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
}

pub fn render_pairs(pairs: &[(String, f64)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={}", format_number(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

/// Shortest round-trippable rendering, with `inf`/`-inf` spelled out.
pub fn format_number(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

/// Shape of the tail of a sequence of log-ratios indexed by order or shell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    /// The supremum has stabilized: either the tail is non-increasing or it
    /// stays below the maximum reached before the tail window.
    Bounded,
    /// Every step of the tail window increases by at least the margin.
    Diverging,
    /// Neither of the above.
    Rising,
}

fn step(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        0.0
    } else {
        b - a
    }
}

/// Classifies the last `window` entries of `values`.
pub fn classify_tail(values: &[f64], window: usize, margin: f64, tol: f64) -> Trend {
    let n = values.len();
    if n < 2 || window == 0 {
        return Trend::Rising;
    }
    let window = window.min(n - 1);
    let tail_start = n - window - 1;
    let tail = &values[tail_start..];
    let steps: Vec<f64> = tail.windows(2).map(|w| step(w[0], w[1])).collect();
    if steps.iter().all(|&d| d >= margin) {
        return Trend::Diverging;
    }
    if steps.iter().all(|&d| d <= tol) {
        return Trend::Bounded;
    }
    let head_max = values[..=tail_start].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tail_max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if tail_max <= head_max + tol && steps.last().is_some_and(|&d| d <= tol) {
        return Trend::Bounded;
    }
    Trend::Rising
}

/// True when the increments themselves grow by at least `margin` at every
/// step of the tail window, i.e. the sequence grows faster than any
/// geometric rate.
pub fn superlinear_tail(values: &[f64], window: usize, margin: f64) -> bool {
    let n = values.len();
    if n < window + 2 || window == 0 {
        return false;
    }
    let tail = &values[n - window - 2..];
    if tail.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let inc: Vec<f64> = tail.windows(2).map(|w| w[1] - w[0]).collect();
    inc.iter().all(|&d| d > 0.0) && inc.windows(2).all(|w| w[1] - w[0] >= margin)
}

/// True when the increments grow by at least `margin` at every step of the
/// tail window, whatever their sign. Such a tail is not read as bounded.
pub fn accelerating_tail(values: &[f64], window: usize, margin: f64) -> bool {
    let n = values.len();
    if n < window + 2 || window == 0 {
        return false;
    }
    let inc: Vec<f64> = values[n - window - 2..].windows(2).map(|w| w[1] - w[0]).collect();
    inc.windows(2).all(|w| w[1] - w[0] >= margin)
}
