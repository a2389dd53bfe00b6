//! Deterministic command reports: key/value sections rendered either as
//! aligned text tables or as JSON. Byte-identical output for identical
//! (input, seed, version).

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub title: String,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: String,
    pub seed: u64,
    pub status: String,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
}

impl Report {
    pub fn new(command: &str, input_digest: &str, seed: u64) -> Self {
        Report {
            tool: "dirac-stab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input_digest: input_digest.into(),
            seed,
            status: "pass".into(),
            sections: Vec::new(),
        }
    }

    pub fn fail(&mut self) {
        self.status = "fail".into();
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn section(&mut self, title: &str) -> &mut Section {
        self.sections.push(Section {
            title: title.into(),
            rows: Vec::new(),
        });
        self.sections.last_mut().unwrap()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Table => self.render_table(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} | {} | input {} | seed {} | {}\n",
            self.tool, self.version, self.command, self.input_digest, self.seed, self.status
        ));
        for sec in &self.sections {
            out.push_str(&format!("\n[{}]\n", sec.title));
            let width = sec.rows.iter().map(|r| r.key.len()).max().unwrap_or(0);
            for r in &sec.rows {
                out.push_str(&format!("  {:width$}  {}\n", r.key, r.value));
            }
        }
        out
    }
}

impl Section {
    pub fn row(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.rows.push(Row {
            key: key.into(),
            value: value.to_string(),
        });
        self
    }
}

/// Hex SHA-256 of the raw input bytes.
pub fn digest(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
