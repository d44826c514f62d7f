//! Plain-text and CSV renderings.

use std::fmt::Write as _;

use reap_core::engine::{Decision, FailureBasis, HoldsReason, Verdict};
use reap_core::kb::{OpenTarget, QueryResult, TableCell};
use reap_core::polarized::PolMatrix;

pub fn verdict_text(verdict: &Verdict) -> String {
    match verdict {
        Verdict::Fails { depth, basis, .. } => {
            let basis = match basis {
                FailureBasis::VacuousBranching => "vacuous branching",
                FailureBasis::Arithmetic => "counting",
                FailureBasis::Certificate => "stored certificate",
                FailureBasis::Search => "search",
            };
            format!("fails (depth {depth}, {basis})")
        }
        Verdict::Holds { reason } => match reason {
            HoldsReason::TrivialColors => "holds (too few colors)".into(),
            HoldsReason::PigeonholeArithmetic => "holds (pigeonhole)".into(),
            HoldsReason::Axiom { citation } => format!("holds ({citation})"),
            HoldsReason::BoundedGeneralSearch { max_leaves } => {
                format!("holds on trees with at most {max_leaves} leaves")
            }
        },
        Verdict::Unknown {
            max_depth_searched,
            nodes_explored,
        } => {
            format!(
                "unknown (exhausted through depth {max_depth_searched}, {nodes_explored} nodes)"
            )
        }
    }
}

pub fn decision_text(decision: &Decision) -> String {
    let mut out = format!("{}: {}\n", decision.query, verdict_text(&decision.verdict));
    for line in &decision.trace {
        let _ = writeln!(out, "  {line}");
    }
    if let Verdict::Fails { witness, .. } = &decision.verdict {
        let _ = writeln!(
            out,
            "  witness: {}",
            serde_json::to_string(witness).unwrap_or_default()
        );
    }
    out
}

pub fn query_text(result: &QueryResult) -> String {
    let mut out = format!(
        "{} vs {}: {}\n",
        result.lhs,
        result.rhs,
        result.answer.label()
    );
    if let Some(d) = &result.decision {
        let _ = writeln!(out, "  decided {}: {}", d.query, verdict_text(&d.verdict));
    }
    if let Some(proof) = &result.proof {
        for step in &proof.steps {
            let _ = writeln!(out, "  {step}");
        }
    }
    out
}

pub fn table_text(cells: &[TableCell], max_n: usize) -> String {
    let mut out = String::from("   ");
    for j in 2..=max_n {
        let _ = write!(out, "{j:>3}");
    }
    out.push('\n');
    for i in 2..=max_n {
        let _ = write!(out, "{i:>3}");
        for cell in cells.iter().filter(|c| c.row == i) {
            let _ = write!(out, "{:>3}", cell.display_value());
        }
        out.push('\n');
    }
    for cell in cells.iter().filter(|c| c.value.is_none()) {
        let _ = write!(out, "({},{}) open", cell.row, cell.col);
        if let Some(c) = cell.conjectured {
            let _ = write!(out, ", conjectured {c}");
        }
        if let Some(d) = cell.derived {
            let _ = write!(out, ", derivable from stored facts as {d}");
        }
        out.push('\n');
    }
    let dependent: Vec<String> = cells
        .iter()
        .filter(|c| c.laflamme_dependent)
        .map(|c| format!("({},{})", c.row, c.col))
        .collect();
    if !dependent.is_empty() {
        let _ = writeln!(out, "needs the Laflamme axiom: {}", dependent.join(" "));
    }
    out
}

pub fn table_csv(cells: &[TableCell]) -> String {
    let mut out = String::from("row,col,status,value,conjectured,derived,laflamme_dependent\n");
    let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
    for c in cells {
        let status = if c.value.is_some() { "proved" } else { "open" };
        let _ = writeln!(
            out,
            "{},{},{status},{},{},{},{}",
            c.row,
            c.col,
            opt(c.value),
            opt(c.conjectured),
            opt(c.derived),
            c.laflamme_dependent
        );
    }
    out
}

pub fn matrix_text(matrix: &PolMatrix) -> String {
    let mut out = String::new();
    for r in 0..matrix.rows() {
        let row: Vec<String> = matrix.row(r).iter().map(u8::to_string).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
    out
}

pub fn open_text(targets: &[OpenTarget]) -> String {
    let mut out = String::new();
    let mut last = "";
    for t in targets {
        if t.question != last {
            let _ = writeln!(out, "{}", t.question);
            last = &t.question;
        }
        let _ = write!(out, "  {}: ", t.reading);
        match (&t.query, &t.verdict) {
            (Some(q), Some(v)) => {
                let _ = writeln!(
                    out,
                    "{q} {}; knowledge base: {}; {} of {} nodes",
                    verdict_text(v),
                    t.kb_answer.label(),
                    t.nodes,
                    t.budget
                );
            }
            _ => {
                let _ = writeln!(out, "knowledge base: {}", t.kb_answer.label());
            }
        }
        if let Some(note) = &t.note {
            let _ = writeln!(out, "    {note}");
        }
    }
    out
}
