use std::io::{self, Write};

use clap::ValueEnum;
use convexity_core::verifier::{Report, Trace};
use serde_json::json;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Tsv,
    Jsonl,
}

pub struct Renderer<W: Write> {
    out: W,
    format: Format,
    trace: bool,
    header_written: bool,
}

impl<W: Write> Renderer<W> {
    pub fn new(out: W, format: Format, trace: bool) -> Self {
        Self {
            out,
            format,
            trace,
            header_written: false,
        }
    }

    pub fn report(&mut self, report: &Report) -> io::Result<()> {
        match self.format {
            Format::Human => self.human(report),
            Format::Tsv => self.tsv(report),
            Format::Jsonl => self.jsonl(report),
        }
    }

    pub fn finish(&mut self, reports: &[Report]) -> io::Result<()> {
        if self.format == Format::Human && reports.len() > 1 {
            let passed = reports.iter().filter(|r| r.all_pass()).count();
            writeln!(self.out, "{passed}/{} reports pass", reports.len())?;
        }
        self.out.flush()
    }

    fn human(&mut self, report: &Report) -> io::Result<()> {
        let title = report.title();
        writeln!(self.out, "== {title} ==")?;
        let rows: Vec<[String; 4]> = report
            .claims
            .iter()
            .map(|c| {
                [
                    if c.pass { "PASS" } else { "FAIL" }.to_owned(),
                    c.label.clone(),
                    c.computed.to_string(),
                    c.expected
                        .as_ref()
                        .map_or_else(|| "-".to_owned(), ToString::to_string),
                ]
            })
            .collect();
        let header = ["", "claim", "computed", "expected"].map(str::to_owned);
        let widths = column_widths(std::iter::once(&header[..]).chain(rows.iter().map(|r| &r[..])));
        write_row(&mut self.out, &header, &widths)?;
        for (row, claim) in rows.iter().zip(&report.claims) {
            let mut cells = row.to_vec();
            cells.push(claim.statement.clone());
            let mut widths = widths.clone();
            widths.push(0);
            write_row(&mut self.out, &cells, &widths)?;
        }
        for note in &report.notes {
            writeln!(self.out, "note: {note}")?;
        }
        if self.trace {
            if let Some(trace) = &report.trace {
                writeln!(self.out)?;
                self.human_trace(trace)?;
            }
        }
        let passed = report.claims.iter().filter(|c| c.pass).count();
        writeln!(
            self.out,
            "{title}: {passed}/{} claims pass",
            report.claims.len()
        )?;
        writeln!(self.out)
    }

    fn human_trace(&mut self, trace: &Trace) -> io::Result<()> {
        let widths = column_widths(
            std::iter::once(&trace.columns[..]).chain(trace.rows.iter().map(|r| &r[..])),
        );
        write_row(&mut self.out, &trace.columns, &widths)?;
        for row in &trace.rows {
            write_row(&mut self.out, row, &widths)?;
        }
        for line in &trace.footer {
            writeln!(self.out, "{line}")?;
        }
        Ok(())
    }

    fn tsv(&mut self, report: &Report) -> io::Result<()> {
        if !self.header_written {
            writeln!(self.out, "scenario\tlabel\tcomputed\texpected\tpass")?;
            self.header_written = true;
        }
        let title = report.title();
        for c in &report.claims {
            let expected = c
                .expected
                .as_ref()
                .map(ToString::to_string)
                .unwrap_or_default();
            writeln!(
                self.out,
                "{}\t{}\t{}\t{}\t{}",
                tsv_cell(&title),
                tsv_cell(&c.label),
                tsv_cell(&c.computed.to_string()),
                tsv_cell(&expected),
                c.pass
            )?;
        }
        if self.trace {
            if let Some(trace) = &report.trace {
                writeln!(self.out, "# trace {title}\t{}", trace.columns.join("\t"))?;
                for row in &trace.rows {
                    writeln!(
                        self.out,
                        "# trace {title}\t{}",
                        row.iter()
                            .map(|c| tsv_cell(c))
                            .collect::<Vec<_>>()
                            .join("\t")
                    )?;
                }
                for line in &trace.footer {
                    writeln!(self.out, "# {line}")?;
                }
            }
        }
        Ok(())
    }

    fn jsonl(&mut self, report: &Report) -> io::Result<()> {
        let title = report.title();
        for c in &report.claims {
            let line = json!({
                "scenario": title,
                "label": c.label,
                "computed": c.computed.to_string(),
                "expected": c.expected.as_ref().map(ToString::to_string),
                "pass": c.pass,
            });
            writeln!(self.out, "{line}")?;
        }
        if self.trace {
            if let Some(trace) = &report.trace {
                for row in &trace.rows {
                    let cells: serde_json::Map<String, serde_json::Value> = trace
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(|c| json!(c)))
                        .collect();
                    writeln!(self.out, "{}", json!({ "scenario": title, "trace": cells }))?;
                }
                for line in &trace.footer {
                    writeln!(self.out, "{}", json!({ "scenario": title, "footer": line }))?;
                }
            }
        }
        Ok(())
    }
}

fn tsv_cell(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

fn column_widths<'a>(rows: impl Iterator<Item = &'a [String]>) -> Vec<usize> {
    let mut widths = Vec::new();
    for row in rows {
        if widths.len() < row.len() {
            widths.resize(row.len(), 0);
        }
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    widths
}

fn write_row(out: &mut impl Write, cells: &[String], widths: &[usize]) -> io::Result<()> {
    let mut line = String::new();
    for (i, cell) in cells.iter().enumerate() {
        if i > 0 {
            line.push_str("  ");
        }
        line.push_str(cell);
        let pad = widths
            .get(i)
            .copied()
            .unwrap_or(0)
            .saturating_sub(cell.chars().count());
        line.extend(std::iter::repeat_n(' ', pad));
    }
    writeln!(out, "{}", line.trim_end())
}

#[cfg(test)]
mod tests {
    use super::*;
    use convexity_core::verifier::{Claim, Value};

    fn sample() -> Report {
        let mut r = Report::new("demo").with_parameter("n", 3);
        r.push(Claim::new("ok", "x = -1", Value::int(-1), Value::int(-1)));
        r.push(Claim::observed("seen", "y", Value::int(2)));
        r.trace = Some(Trace {
            columns: vec!["a".into(), "b".into()],
            rows: vec![vec!["1".into(), "2".into()]],
            footer: vec!["done".into()],
        });
        r
    }

    fn render(format: Format, trace: bool) -> String {
        let mut buf = Vec::new();
        let mut r = Renderer::new(&mut buf, format, trace);
        r.report(&sample()).unwrap();
        r.finish(&[sample()]).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn tsv_rows() {
        let out = render(Format::Tsv, false);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "scenario\tlabel\tcomputed\texpected\tpass");
        assert_eq!(lines[1], "demo[n=3]\tok\t-1\t-1\ttrue");
        assert_eq!(lines[2], "demo[n=3]\tseen\t2\t\ttrue");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn jsonl_objects() {
        let out = render(Format::Jsonl, true);
        let values: Vec<serde_json::Value> = out
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(values[0]["computed"], "-1");
        assert_eq!(values[0]["pass"], true);
        assert!(values[1]["expected"].is_null());
        assert_eq!(values[2]["trace"]["b"], "2");
        assert_eq!(values[3]["footer"], "done");
    }

    #[test]
    fn human_trace_only_on_request() {
        assert!(!render(Format::Human, false).contains("done"));
        let out = render(Format::Human, true);
        assert!(out.contains("done"));
        assert!(out.contains("demo[n=3]: 2/2 claims pass"));
    }
}
