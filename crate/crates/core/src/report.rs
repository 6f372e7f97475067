use serde::Serialize;

/// Outcome of a randomized or exhaustive check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        SuiteReport { name: name.into(), ..Default::default() }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(witness());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} checked, {} failed", self.name, self.checked, self.failures.len())?;
        if let Some(w) = self.failures.first() {
            write!(f, " (first: {w})")?;
        }
        Ok(())
    }
}
