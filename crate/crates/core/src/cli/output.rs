//! CSV and JSON artifact writers. Every CSV starts with a schema-version
//! line; the JSON summary is the machine-readable pass/fail manifest.

use std::io::Write;
use std::path::Path;

/// Write a CSV with a `# schema:` first line, a header row, then data rows.
pub fn write_csv(
    path: &Path,
    schema: &str,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "# schema: {schema} v1")?;
    writeln!(f, "{header}")?;
    for row in rows {
        writeln!(f, "{row}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Clause {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Clause { name: name.to_string(), pass, detail: detail.into() }
    }
}

#[derive(Debug, serde::Serialize)]
struct Summary<'a> {
    schema: &'static str,
    command: &'a str,
    pass: bool,
    clauses: &'a [Clause],
}

/// Write the summary manifest; returns overall pass.
pub fn write_summary(path: &Path, command: &str, clauses: &[Clause]) -> std::io::Result<bool> {
    let pass = clauses.iter().all(|c| c.pass);
    let summary = Summary { schema: "acflow.summary v1", command, pass, clauses };
    let text = serde_json::to_string_pretty(&summary).expect("summary serialization");
    std::fs::write(path, text)?;
    Ok(pass)
}
