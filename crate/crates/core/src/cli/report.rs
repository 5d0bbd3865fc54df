//! Tabular output in text, CSV and JSON.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub class: String,
    pub h: u32,
    pub t: u32,
    pub coeff: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportTable {
    pub rows: Vec<ReportRow>,
}

impl ReportTable {
    fn has_input(&self) -> bool {
        self.rows.iter().any(|r| r.input.is_some())
    }

    pub fn to_text(&self) -> String {
        let with_input = self.has_input();
        let mut cells: Vec<Vec<String>> = Vec::new();
        let mut head = vec![];
        if with_input {
            head.push("input".to_string());
        }
        head.extend(["class", "h", "t", "coeff"].map(String::from));
        cells.push(head);
        for r in &self.rows {
            let mut row = vec![];
            if with_input {
                row.push(r.input.clone().unwrap_or_default());
            }
            row.extend([r.class.clone(), r.h.to_string(), r.t.to_string(), r.coeff.to_string()]);
            cells.push(row);
        }
        let ncol = cells[0].len();
        let widths: Vec<usize> = (0..ncol)
            .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in &cells {
            let line: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(i, s)| format!("{s:<w$}", w = widths[i]))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let with_input = self.has_input();
        let mut out = String::from(if with_input { "input,class,h,t,coeff\n" } else { "class,h,t,coeff\n" });
        for r in &self.rows {
            if with_input {
                out.push_str(r.input.as_deref().unwrap_or(""));
                out.push(',');
            }
            out.push_str(&format!("{},{},{},{}\n", r.class, r.h, r.t, r.coeff));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
