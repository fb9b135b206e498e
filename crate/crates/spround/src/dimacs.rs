//! DIMACS CNF reader: `c` comment lines, a `p cnf <vars> <clauses>` header,
//! then whitespace-separated literals with `0` terminating each clause.
//! Clauses must have exactly three literals.

use std::fmt;

use spround_core::reduction::{CnfError, CnfFormula, Literal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimacsError {
    MissingHeader,
    BadHeader(String),
    BadLiteral(String),
    LiteralOutOfRange(i64),
    UnterminatedClause,
    ClauseCountMismatch { declared: usize, found: usize },
    Cnf(CnfError),
}

impl fmt::Display for DimacsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimacsError::MissingHeader => write!(f, "missing 'p cnf' header"),
            DimacsError::BadHeader(s) => write!(f, "malformed header '{s}'"),
            DimacsError::BadLiteral(s) => write!(f, "malformed literal '{s}'"),
            DimacsError::LiteralOutOfRange(v) => write!(f, "literal {v} out of range"),
            DimacsError::UnterminatedClause => write!(f, "last clause is not 0-terminated"),
            DimacsError::ClauseCountMismatch { declared, found } => {
                write!(f, "header declares {declared} clauses, found {found}")
            }
            DimacsError::Cnf(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DimacsError {}

/// Parses DIMACS CNF text into a 3-CNF formula.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[1] != "cnf" {
                return Err(DimacsError::BadHeader(line.to_string()));
            }
            let vars = fields[2]
                .parse()
                .map_err(|_| DimacsError::BadHeader(line.to_string()))?;
            let count = fields[3]
                .parse()
                .map_err(|_| DimacsError::BadHeader(line.to_string()))?;
            header = Some((vars, count));
            continue;
        }
        let (vars, _) = header.ok_or(DimacsError::MissingHeader)?;
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| DimacsError::BadLiteral(token.to_string()))?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let variable = value.unsigned_abs() - 1;
            if variable >= vars as u64 {
                return Err(DimacsError::LiteralOutOfRange(value));
            }
            current.push(Literal {
                variable: variable as u32,
                negated: value < 0,
            });
        }
    }
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause);
    }
    let (vars, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    CnfFormula::new(vars, clauses).map_err(DimacsError::Cnf)
}

/// Renders a formula back to DIMACS text.
pub fn format_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!(
        "p cnf {} {}\n",
        formula.variable_count(),
        formula.clauses().len()
    );
    for clause in formula.clauses() {
        for lit in clause {
            let v = lit.variable as i64 + 1;
            let signed = if lit.negated { -v } else { v };
            out.push_str(&format!("{signed} "));
        }
        out.push_str("0\n");
    }
    out
}
