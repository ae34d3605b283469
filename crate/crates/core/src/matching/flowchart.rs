use std::collections::HashSet;

use serde::Serialize;

use super::engine::TraceStep;
use super::MatchingError;
use crate::algebra::BetaField;

/// Edges of the tribonacci flowchart for positive codes; the mirrored
/// edges with both signs flipped are accepted as well.
const EDGES: &[(&str, &str)] = &[
    ("+011", "-001"),
    ("-001", "-010"),
    ("-010", "-100"),
    ("-100", "match"),
    ("-010", "+011"),
    ("+011", "+110"),
    ("+011", "+101"),
    ("+110", "+100"),
    ("+100", "match"),
    ("+001", "+010"),
    ("+010", "+100"),
    ("+101", "+010"),
];

/// The edge labelled by `p − c_1 > d(n)` in the diagram.
const DIAGRAM_EDGE: (&str, &str) = ("+011", "+101");

const ALPHABET: &[&str] = &["001", "010", "011", "100", "101", "110"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OffGraph {
    pub n: usize,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowchartReport {
    pub transitions: usize,
    pub off_graph: Vec<OffGraph>,
    /// Uses of the `+011 → +101` edge (or its mirror).
    pub diagram_edge_uses: usize,
    /// Uses of the `+011 → +110` edge (or its mirror).
    pub prose_chain_uses: usize,
}

impl FlowchartReport {
    pub fn conforms(&self) -> bool {
        self.off_graph.is_empty()
    }
}

fn mirror(code: &str) -> String {
    match code.chars().next() {
        Some('+') => format!("-{}", &code[1..]),
        Some('-') => format!("+{}", &code[1..]),
        _ => code.to_string(),
    }
}

fn edge_set() -> HashSet<(String, String)> {
    let mut s = HashSet::new();
    for (a, b) in EDGES {
        s.insert((a.to_string(), b.to_string()));
        s.insert((mirror(a), mirror(b)));
    }
    s
}

/// Audits consecutive trace states from `n = 1` on.
pub fn flowchart_check(trace: &[TraceStep], field: &BetaField) -> Result<FlowchartReport, MatchingError> {
    if !field.is_multinacci() || field.degree() != 3 {
        return Err(MatchingError::InvalidArgument(
            "the flowchart is for the tribonacci field".into(),
        ));
    }
    let edges = edge_set();
    let diagram = [
        (DIAGRAM_EDGE.0.to_string(), DIAGRAM_EDGE.1.to_string()),
        (mirror(DIAGRAM_EDGE.0), mirror(DIAGRAM_EDGE.1)),
    ];
    let prose = [
        ("+011".to_string(), "+110".to_string()),
        ("-011".to_string(), "-110".to_string()),
    ];
    let steps: Vec<&TraceStep> = trace.iter().filter(|s| s.n >= 1).collect();
    let mut report = FlowchartReport {
        transitions: 0,
        off_graph: Vec::new(),
        diagram_edge_uses: 0,
        prose_chain_uses: 0,
    };
    for s in &steps {
        let code = s.state().code();
        if code != "match" && !ALPHABET.contains(&&code[1..]) {
            return Err(MatchingError::OutsideAlphabet { n: s.n, code });
        }
    }
    for w in steps.windows(2) {
        let from = w[0].state().code();
        let to = w[1].state().code();
        report.transitions += 1;
        let e = (from.clone(), to.clone());
        if diagram.contains(&e) {
            report.diagram_edge_uses += 1;
        }
        if prose.contains(&e) {
            report.prose_chain_uses += 1;
        }
        if !edges.contains(&e) {
            report.off_graph.push(OffGraph { n: w[1].n, from, to });
        }
    }
    Ok(report)
}
