use std::fmt;

/// One measured estimate together with the reference it is judged against.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub measured: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub params: Vec<(String, f64)>,
    pub pass: bool,
}

/// How `measured` is compared with `reference`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Check {
    /// `measured ≤ reference + tolerance`
    AtMost,
    /// `measured ≥ reference − tolerance`
    AtLeast,
    /// `|measured − reference| ≤ tolerance`
    Within,
}

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        measured: f64,
        reference: f64,
        tolerance: f64,
        check: Check,
    ) -> Self {
        let pass = measured.is_finite()
            && match check {
                Check::AtMost => measured <= reference + tolerance,
                Check::AtLeast => measured >= reference - tolerance,
                Check::Within => (measured - reference).abs() <= tolerance,
            };
        Self {
            name: name.into(),
            measured,
            reference,
            tolerance,
            params: Vec::new(),
            pass,
        }
    }

    pub fn flag(name: impl Into<String>, measured: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            measured,
            reference: f64::NAN,
            tolerance: f64::NAN,
            params: Vec::new(),
            pass,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.push((key.to_string(), value));
        self
    }

    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub const CSV_HEADER: &'static str = "name,measured,reference,tolerance,params,pass";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{},{}",
            self.name,
            self.measured,
            self.reference,
            self.tolerance,
            self.params_string(),
            self.pass
        )
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} measured={:.6e} reference={:.6e} tol={:.1e} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.reference,
            self.tolerance,
            self.params_string()
        )
    }
}
