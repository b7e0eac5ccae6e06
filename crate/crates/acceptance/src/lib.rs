//! Shared reporting for the acceptance target.

/// Outcome of one criterion: a pass flag and the measured quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }

    /// `criterion N: PASS|FAIL <detail>`.
    pub fn line(&self, n: u32) -> String {
        format!("criterion {n}: {} {}", if self.pass { "PASS" } else { "FAIL" }, self.detail)
    }
}

/// Criteria selected by the command-line arguments; all when none are given.
pub fn selected(args: &[String]) -> Vec<u32> {
    let picked: Vec<u32> = args.iter().filter_map(|a| a.parse().ok()).filter(|n| (1..=9).contains(n)).collect();
    if picked.is_empty() {
        (1..=9).collect()
    } else {
        picked
    }
}
