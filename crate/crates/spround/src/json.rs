//! JSON documents for roundings, verification reports, minimum-epsilon
//! results, and the reduction sidecar. Rationals travel as exact `p/q`
//! strings so every document parses back losslessly.

use serde::{Deserialize, Serialize};

use spround_core::graph::{Rounding, WeightedGraph};
use spround_core::rational::{format_rational, parse_rational, Rational};
use spround_core::reduction::{GadgetGraph, GadgetMembership};
use spround_core::verify::VerificationReport;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RoundedEdge {
    pub u: u32,
    pub v: u32,
    pub value: u64,
}

/// A rounding as a standalone document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RoundingDoc {
    pub edges: Vec<RoundedEdge>,
}

impl RoundingDoc {
    pub fn from_rounding(rounding: &Rounding) -> Self {
        RoundingDoc {
            edges: rounding
                .iter()
                .map(|(&(u, v), &value)| RoundedEdge { u, v, value })
                .collect(),
        }
    }

    pub fn to_rounding(&self) -> Rounding {
        Rounding::from_pairs(self.edges.iter().map(|e| ((e.u, e.v), e.value)))
    }
}

/// Minimum achievable error together with a witness rounding.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MinimizeDoc {
    pub epsilon: String,
    pub edges: Vec<RoundedEdge>,
}

impl MinimizeDoc {
    pub fn new(epsilon: &Rational, rounding: &Rounding) -> Self {
        MinimizeDoc {
            epsilon: format_rational(epsilon),
            edges: RoundingDoc::from_rounding(rounding).edges,
        }
    }

    pub fn epsilon(&self) -> Result<Rational, String> {
        parse_rational(&self.epsilon).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessDoc {
    pub u: u32,
    pub v: u32,
    pub description: String,
}

/// A verification report as a document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportDoc {
    pub level: String,
    pub comparison: String,
    pub epsilon: String,
    pub passed: bool,
    pub worst_error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

impl ReportDoc {
    pub fn from_report(report: &VerificationReport) -> Self {
        ReportDoc {
            level: report.level.to_string(),
            comparison: report.comparison.to_string(),
            epsilon: format_rational(&report.epsilon),
            passed: report.passed,
            worst_error: format_rational(&report.worst_error),
            witness: report.witness.as_ref().map(|w| WitnessDoc {
                u: w.u,
                v: w.v,
                description: w.description.clone(),
            }),
        }
    }

    /// One-line human rendering.
    pub fn to_text(&self) -> String {
        let mut line = format!(
            "{}: level {}, |error| {} {} (worst {})",
            if self.passed { "PASS" } else { "FAIL" },
            self.level,
            if self.comparison == "strict" { "<" } else { "<=" },
            self.epsilon,
            self.worst_error,
        );
        if let Some(w) = &self.witness {
            line.push_str(&format!(
                "; witness pair ({}, {}): {}",
                w.u, w.v, w.description
            ));
        }
        line
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VariableAnchorsDoc {
    pub variable: u32,
    pub v0: u32,
    pub v_end: u32,
    pub bases: Vec<u32>,
    pub inverters: Vec<Option<u32>>,
    pub value_edge: (u32, u32),
    /// (clause index, literal slot) per occurrence
    pub occurrences: Vec<(u32, u8)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClauseAnchorsDoc {
    pub clause: u32,
    pub cycle: Vec<u32>,
    pub knobs: Vec<u32>,
    pub center: u32,
    pub handles: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeRoleDoc {
    pub u: u32,
    pub v: u32,
    pub role: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MembershipDoc {
    pub kind: String,
    pub index: u32,
}

/// Sidecar describing a reduction graph: anchors, roles, and membership.
/// Everything tests or assignment round-tripping need beyond the edge list.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SidecarDoc {
    pub d: String,
    pub variables: Vec<Option<VariableAnchorsDoc>>,
    pub clauses: Vec<ClauseAnchorsDoc>,
    pub edge_roles: Vec<EdgeRoleDoc>,
    pub membership: Vec<MembershipDoc>,
}

impl SidecarDoc {
    pub fn from_gadget(gadget: &GadgetGraph) -> Self {
        SidecarDoc {
            d: format_rational(&gadget.d),
            variables: gadget
                .variables
                .iter()
                .map(|v| {
                    v.as_ref().map(|a| VariableAnchorsDoc {
                        variable: a.variable,
                        v0: a.v0,
                        v_end: a.v_end,
                        bases: a.bases.clone(),
                        inverters: a.inverters.clone(),
                        value_edge: a.value_edge,
                        occurrences: a.occurrences.clone(),
                    })
                })
                .collect(),
            clauses: gadget
                .clauses
                .iter()
                .map(|c| ClauseAnchorsDoc {
                    clause: c.clause,
                    cycle: c.cycle.to_vec(),
                    knobs: c.knobs.to_vec(),
                    center: c.center,
                    handles: c.handles.to_vec(),
                })
                .collect(),
            edge_roles: gadget
                .roles
                .iter()
                .map(|(&(u, v), role)| EdgeRoleDoc {
                    u,
                    v,
                    role: role.as_str().to_string(),
                })
                .collect(),
            membership: gadget
                .membership
                .iter()
                .map(|m| match m {
                    GadgetMembership::Variable(i) => MembershipDoc {
                        kind: "variable".to_string(),
                        index: *i,
                    },
                    GadgetMembership::Clause(j) => MembershipDoc {
                        kind: "clause".to_string(),
                        index: *j,
                    },
                })
                .collect(),
        }
    }
}

/// A rounding document must cover the graph exactly to be applied to it.
pub fn rounding_for_graph(doc: &RoundingDoc, graph: &WeightedGraph) -> Result<Rounding, String> {
    let rounding = doc.to_rounding();
    if !rounding.is_total_for(graph) {
        return Err("rounding does not match the graph's edge set".to_string());
    }
    Ok(rounding)
}
