//! Plain-text report: `[section]` headers followed by `key: value` lines.
//!
//! ```text
//! [group]     generators:/relator: lines of G
//! [oracle]    kind: none|free|finite|abelian, then table:/generator: or matrix:/row: lines
//! [A1]        optional knot: and slope:, then the presentation
//! [L1]        word: lines (`1` is the empty word)
//! [A2] [L2]   as above
//! [gstar]     the presentation of G*
//! [renames]   rename: lines
//! [audit]     check: ... status: ... witness: ... lines, then detail: lines
//! ```

use std::fmt::{self, Write as _};

use super::audit::{AuditEntry, Status};
use super::gstar::{build_gstar, EmbeddingReport, Provenance, VertexInput};
use super::prepare::{construct_f1_f2, OracleChoice};
use super::PipelineError;
use crate::homology::IntMatrix;
use crate::knots::{FillingSlope, KnotTable};
use crate::normalform::FiniteOracle;
use crate::words::{FinitePresentation, Word};

fn write_words(out: &mut String, p: &FinitePresentation, words: &[Word]) {
    for w in words {
        let text = if w.is_empty() { "1".to_string() } else { p.format_word(w) };
        writeln!(out, "word: {text}").unwrap();
    }
}

fn write_vertex(out: &mut String, v: &VertexInput) {
    if let Some(p) = &v.provenance {
        writeln!(out, "knot: {}\nslope: {}", p.knot, p.slope).unwrap();
    }
    out.push_str(&v.presentation.to_string());
}

fn write_oracle(out: &mut String, choice: &OracleChoice, g: &FinitePresentation) {
    writeln!(out, "kind: {}", choice.kind()).unwrap();
    match choice {
        OracleChoice::Finite(f) => {
            for row in f.group().table() {
                let cells: Vec<String> = row.iter().map(usize::to_string).collect();
                writeln!(out, "table: {}", cells.join(" ")).unwrap();
            }
            for (i, e) in f.images().iter().enumerate() {
                writeln!(out, "generator: {} {e}", g.alphabet().name(i)).unwrap();
            }
        }
        OracleChoice::Abelian(m) => {
            writeln!(out, "matrix: {} {}", m.rows(), m.cols()).unwrap();
            for r in 0..m.rows() {
                let cells: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
                writeln!(out, "row: {}", cells.join(" ")).unwrap();
            }
        }
        OracleChoice::None | OracleChoice::Free => {}
    }
}

impl fmt::Display for EmbeddingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let g = &self.prepared.original;
        out.push_str("[group]\n");
        out.push_str(&g.to_string());
        out.push_str("[oracle]\n");
        write_oracle(&mut out, &self.prepared.choice, g);
        out.push_str("[A1]\n");
        write_vertex(&mut out, &self.a1);
        out.push_str("[L1]\n");
        write_words(&mut out, &self.a1.presentation, &self.l1.words);
        out.push_str("[A2]\n");
        write_vertex(&mut out, &self.a2);
        out.push_str("[L2]\n");
        write_words(&mut out, &self.a2.presentation, &self.l2.words);
        out.push_str("[gstar]\n");
        out.push_str(&self.gstar.to_string());
        out.push_str("[renames]\n");
        for r in &self.renames {
            writeln!(out, "rename: {r}").unwrap();
        }
        out.push_str("[audit]\n");
        for e in &self.audit {
            writeln!(out, "{e}").unwrap();
        }
        for d in &self.details {
            writeln!(out, "detail: {d}").unwrap();
        }
        f.write_str(&out)
    }
}

/// A report rebuilt from text, plus the audit lines it carried.
#[derive(Debug)]
pub struct ParsedReport {
    pub report: EmbeddingReport,
    pub recorded_audit: Vec<AuditEntry>,
    pub recorded_details: Vec<String>,
}

const SECTIONS: [&str; 10] = ["group", "oracle", "A1", "L1", "A2", "L2", "gstar", "renames", "audit", "prepared"];

fn bad(line: usize, m: impl fmt::Display) -> PipelineError {
    PipelineError::Report(format!("line {line}: {m}"))
}

fn parse_audit_line(rest: &str, line: usize) -> Result<AuditEntry, PipelineError> {
    let (check, rest) = rest.split_once(" status: ").ok_or_else(|| bad(line, "missing `status:`"))?;
    let (status, witness) = rest.split_once(" witness: ").ok_or_else(|| bad(line, "missing `witness:`"))?;
    let status: Status = status.trim().parse().map_err(|e| bad(line, e))?;
    let witness = match witness.trim() {
        "-" => None,
        "1" => Some(String::new()),
        w => Some(w.to_string()),
    };
    Ok(AuditEntry { check: check.trim().to_string(), status, witness })
}

fn parse_vertex(
    lines: &[(usize, &str)],
    table: &KnotTable,
    which: &str,
) -> Result<VertexInput, PipelineError> {
    let mut knot = None;
    let mut slope = None;
    let mut rest = Vec::new();
    for &(n, l) in lines {
        if let Some(k) = l.strip_prefix("knot:") {
            knot = Some(k.trim().to_string());
        } else if let Some(s) = l.strip_prefix("slope:") {
            slope = Some(FillingSlope::parse(s.trim()).map_err(|e| bad(n, e))?);
        } else {
            rest.push((n, l));
        }
    }
    let recorded = FinitePresentation::parse_lines(rest.into_iter())?;
    match (knot, slope) {
        (Some(k), Some(s)) => {
            let v = VertexInput::from_knot(table, &k, s)?;
            if v.presentation != recorded {
                return Err(PipelineError::Report(format!("{which}: presentation does not match {k}({s})")));
            }
            Ok(v)
        }
        (None, None) => Ok(VertexInput::raw(recorded)),
        _ => Err(PipelineError::Report(format!("{which}: `knot:` and `slope:` must appear together"))),
    }
}

fn parse_words(lines: &[(usize, &str)], p: &FinitePresentation) -> Result<Vec<Word>, PipelineError> {
    lines
        .iter()
        .map(|&(n, l)| {
            let w = l.strip_prefix("word:").ok_or_else(|| bad(n, "expected `word:`"))?.trim();
            if w == "1" {
                Ok(Word::identity())
            } else {
                p.parse_word(w).map_err(|e| bad(n, e))
            }
        })
        .collect()
}

fn parse_oracle(lines: &[(usize, &str)], g: &FinitePresentation) -> Result<OracleChoice, PipelineError> {
    let Some(&(n0, first)) = lines.first() else {
        return Ok(OracleChoice::None);
    };
    let kind = first.strip_prefix("kind:").ok_or_else(|| bad(n0, "expected `kind:`"))?.trim();
    let body: Vec<&str> = lines[1..].iter().map(|&(_, l)| l).collect();
    match kind {
        "none" => Ok(OracleChoice::None),
        "free" => Ok(OracleChoice::Free),
        "finite" => Ok(OracleChoice::Finite(FiniteOracle::parse(&body.join("\n"), g.alphabet())?)),
        "abelian" => {
            let mut text = String::new();
            for l in body {
                let v = l.strip_prefix("matrix:").or_else(|| l.strip_prefix("row:")).unwrap_or(l);
                writeln!(text, "{}", v.trim()).unwrap();
            }
            let m = IntMatrix::parse(&text).map_err(|e| bad(n0, e))?;
            Ok(OracleChoice::Abelian(m))
        }
        other => Err(bad(n0, format!("unknown oracle kind `{other}`"))),
    }
}

/// Parses a report and rebuilds `G*` from its inputs; the recorded `[gstar]`
/// section must match the rebuilt presentation.
pub fn parse_report(text: &str, table: &KnotTable) -> Result<ParsedReport, PipelineError> {
    let mut sections: Vec<(String, Vec<(usize, &str)>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if !SECTIONS.contains(&name) {
                return Err(bad(i + 1, format!("unknown section `{name}`")));
            }
            sections.push((name.to_string(), Vec::new()));
        } else {
            let Some(last) = sections.last_mut() else {
                return Err(bad(i + 1, "line outside any section"));
            };
            last.1.push((i + 1, line));
        }
    }
    let get = |name: &str| -> Result<&[(usize, &str)], PipelineError> {
        sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, l)| l.as_slice())
            .ok_or_else(|| PipelineError::Report(format!("missing section [{name}]")))
    };
    let group = FinitePresentation::parse_lines(get("group")?.iter().copied())?;
    let choice = parse_oracle(get("oracle")?, &group)?;
    let a1 = parse_vertex(get("A1")?, table, "A1")?;
    let l1 = parse_words(get("L1")?, &a1.presentation)?;
    let a2 = parse_vertex(get("A2")?, table, "A2")?;
    let l2 = parse_words(get("L2")?, &a2.presentation)?;
    let prepared = construct_f1_f2(&group, &choice)?;
    let report = build_gstar(prepared, a1, l1, a2, l2)?;
    if let Ok(lines) = get("gstar") {
        if !lines.is_empty() {
            let recorded = FinitePresentation::parse_lines(lines.iter().copied())?;
            if recorded != report.gstar {
                return Err(PipelineError::Report("[gstar] does not match the presentation rebuilt from the inputs".into()));
            }
        }
    }
    let mut recorded_audit = Vec::new();
    let mut recorded_details = Vec::new();
    if let Ok(lines) = get("audit") {
        for &(n, l) in lines {
            if let Some(rest) = l.strip_prefix("check:") {
                recorded_audit.push(parse_audit_line(rest.trim(), n)?);
            } else if let Some(rest) = l.strip_prefix("detail:") {
                recorded_details.push(rest.trim().to_string());
            } else {
                return Err(bad(n, "expected `check:` or `detail:`"));
            }
        }
    }
    Ok(ParsedReport { report, recorded_audit, recorded_details })
}

impl Provenance {
    pub fn label(&self) -> String {
        format!("{}({})", self.knot, self.slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalform::FiniteGroup;
    use crate::pipeline::{default_l_words, hypothesis_audit};

    fn sample(choice: OracleChoice, g: &FinitePresentation) -> EmbeddingReport {
        let table = KnotTable::bundled();
        let pg = construct_f1_f2(g, &choice).unwrap();
        let a1 = VertexInput::from_knot(&table, "10_102", FillingSlope::new(7, 1).unwrap()).unwrap();
        let a2 = VertexInput::from_knot(&table, "10_106", FillingSlope::new(5, 1).unwrap()).unwrap();
        let l1 = default_l_words(&a1.presentation, pg.f1.rank);
        let l2 = default_l_words(&a2.presentation, 3);
        build_gstar(pg, a1, l1, a2, l2).unwrap()
    }

    #[test]
    fn report_round_trip() {
        let g = FinitePresentation::from_strs(&["b"], &["b b"]).unwrap();
        let o = FiniteOracle::new(g.alphabet().clone(), FiniteGroup::cyclic(2), vec![1]).unwrap();
        for choice in [OracleChoice::Finite(o), OracleChoice::Abelian(IntMatrix::from_i64(&[&[2]])), OracleChoice::None] {
            let mut r = sample(choice, &g);
            let (audit, details) = hypothesis_audit(&r, 3);
            r.audit = audit;
            r.details = details;
            let text = r.to_string();
            let back = parse_report(&text, &KnotTable::bundled()).unwrap();
            assert_eq!(back.recorded_audit, r.audit);
            assert_eq!(back.recorded_details, r.details);
            assert_eq!(back.report.to_string().split("[audit]").next(), text.split("[audit]").next());
        }
    }

    #[test]
    fn tampered_gstar_is_rejected() {
        let g = FinitePresentation::from_strs(&["b"], &[]).unwrap();
        let text = sample(OracleChoice::Free, &g).to_string();
        let (head, tail) = text.split_once("[gstar]\n").unwrap();
        let tampered = format!("{head}[gstar]\n{}", tail.replacen("relator: ", "relator: s s ", 1));
        assert!(parse_report(&text, &KnotTable::bundled()).is_ok());
        assert!(matches!(parse_report(&tampered, &KnotTable::bundled()), Err(PipelineError::Report(_))));
    }
}
