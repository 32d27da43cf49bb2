//! Golden-value comparison report.

use std::fmt::Display;
use std::time::Instant;

use serde::Serialize;

use crate::config::Format;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    /// Wall-clock seconds; left out of JSON so that reports are reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GoldenReport {
    pub target: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl GoldenReport {
    pub fn new(target: &str) -> Self {
        GoldenReport {
            target: target.to_string(),
            checks: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, name: &str, expected: impl Display, computed: impl Display, pass: bool, since: Instant) {
        self.checks.push(Check {
            name: name.to_string(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            pass,
            seconds: since.elapsed().as_secs_f64(),
        });
        self.pass = self.checks.iter().all(|c| c.pass);
    }

    /// Records an equality check.
    pub fn eq<T: PartialEq + Display>(&mut self, name: &str, expected: T, computed: T, since: Instant) {
        let pass = expected == computed;
        self.push(name, expected, computed, pass, since);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Text => {
                let mut s = String::new();
                for c in &self.checks {
                    s.push_str(&format!(
                        "{} {}: expected {}, computed {} ({:.1}s)\n",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        c.expected,
                        c.computed,
                        c.seconds
                    ));
                }
                s.push_str(&format!("{} {}\n", self.target, if self.pass { "PASS" } else { "FAIL" }));
                s
            }
            Format::Md => {
                let mut s = format!(
                    "# {}\n\n| check | expected | computed | result | seconds |\n|---|---|---|---|---|\n",
                    self.target
                );
                for c in &self.checks {
                    s.push_str(&format!(
                        "| {} | {} | {} | {} | {:.1} |\n",
                        c.name,
                        c.expected,
                        c.computed,
                        if c.pass { "PASS" } else { "FAIL" },
                        c.seconds
                    ));
                }
                s.push_str(&format!("\nOverall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let t = Instant::now();
        let mut r = GoldenReport::new("x");
        r.eq("a", 1, 1, t);
        assert!(r.pass);
        r.eq("b", 1, 2, t);
        r.eq("c", 3, 3, t);
        assert!(!r.pass);
        assert!(r.render(Format::Text).contains("FAIL b"));
    }

    #[test]
    fn json_omits_timing() {
        let mut r = GoldenReport::new("x");
        r.eq("a", "p", "p", Instant::now());
        let j = r.render(Format::Json);
        assert!(!j.contains("seconds"));
        assert!(j.contains("\"pass\": true"));
    }
}
