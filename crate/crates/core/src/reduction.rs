//! Construction of a weighted graph from a 3-CNF formula whose strong
//! 1-roundings correspond exactly to satisfying assignments.
//!
//! Per variable, a chain of weight-5/2 triangles admits exactly two
//! 1-roundings (all triangle edges up and everything else down, or vice
//! versa), encoding true/false. Per clause, a nonagon of weight-18/5 edges
//! with three weight-5/2 handles and an integer-weighted center admits a
//! 1-rounding iff at least one handle is rounded down. Integer-weight
//! clause-variable edges couple handle directions to variable directions,
//! and shortcut edges keep all remaining shortest paths trivial.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{edge_key, EdgeKey, Rounding, WeightedGraph};
use crate::rational::{rat, ratio, Rational};

/// One of exactly three literals of a clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub variable: u32,
    pub negated: bool,
}

impl Literal {
    pub fn positive(variable: u32) -> Self {
        Literal {
            variable,
            negated: false,
        }
    }

    pub fn negative(variable: u32) -> Self {
        Literal {
            variable,
            negated: true,
        }
    }
}

/// A 3-CNF formula: every clause has exactly three literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    variable_count: u32,
    clauses: Vec<[Literal; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CnfError {
    ClauseArity { clause: usize, arity: usize },
    VariableOutOfRange { clause: usize, variable: u32 },
}

impl fmt::Display for CnfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CnfError::ClauseArity { clause, arity } => {
                write!(f, "clause {clause} has {arity} literals, expected exactly 3")
            }
            CnfError::VariableOutOfRange { clause, variable } => {
                write!(f, "clause {clause} uses variable {variable} out of range")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CnfError {}

impl CnfFormula {
    pub fn new(variable_count: u32, clauses: Vec<Vec<Literal>>) -> Result<Self, CnfError> {
        let mut fixed = Vec::with_capacity(clauses.len());
        for (i, clause) in clauses.into_iter().enumerate() {
            if clause.len() != 3 {
                return Err(CnfError::ClauseArity {
                    clause: i,
                    arity: clause.len(),
                });
            }
            for lit in &clause {
                if lit.variable >= variable_count {
                    return Err(CnfError::VariableOutOfRange {
                        clause: i,
                        variable: lit.variable,
                    });
                }
            }
            fixed.push([clause[0], clause[1], clause[2]]);
        }
        Ok(CnfFormula {
            variable_count,
            clauses: fixed,
        })
    }

    pub fn variable_count(&self) -> u32 {
        self.variable_count
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// True if no variable appears twice in any clause.
    pub fn is_normalized(&self) -> bool {
        self.clauses.iter().all(|clause| {
            clause[0].variable != clause[1].variable
                && clause[0].variable != clause[2].variable
                && clause[1].variable != clause[2].variable
        })
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|lit| assignment[lit.variable as usize] != lit.negated)
        })
    }

    /// Exhaustive satisfiability check, for small formulas only.
    pub fn first_satisfying_assignment(&self) -> Option<Vec<bool>> {
        let n = self.variable_count as usize;
        assert!(n < 24, "exhaustive check is for small formulas");
        (0u32..1 << n)
            .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<bool>>())
            .find(|a| self.evaluate(a))
    }
}

/// Rewrites a formula so that no variable appears twice in a clause, keeping
/// satisfiability: clauses containing a variable and its negation are
/// dropped, duplicate literals are replaced by fresh variables `b` (second
/// copy) and `c` (third copy), and six fixed clauses over fresh `a`, `b`,
/// `c` force `b` and `c` to false.
pub fn normalize_cnf(formula: &CnfFormula) -> CnfFormula {
    let mut clauses: Vec<[Literal; 3]> = Vec::with_capacity(formula.clauses.len());
    let a = formula.variable_count;
    let (b, c) = (a + 1, a + 2);
    let mut used_fresh = false;
    for clause in &formula.clauses {
        let complementary = clause.iter().any(|l1| {
            clause
                .iter()
                .any(|l2| l1.variable == l2.variable && l1.negated != l2.negated)
        });
        if complementary {
            continue; // always satisfied
        }
        let mut rewritten = *clause;
        let mut seen: Vec<Literal> = Vec::with_capacity(3);
        for slot in rewritten.iter_mut() {
            let copies = seen.iter().filter(|l| **l == *slot).count();
            seen.push(*slot);
            match copies {
                0 => {}
                1 => {
                    *slot = Literal::positive(b);
                    used_fresh = true;
                }
                _ => {
                    *slot = Literal::positive(c);
                    used_fresh = true;
                }
            }
        }
        clauses.push(rewritten);
    }
    if !used_fresh {
        return CnfFormula {
            variable_count: formula.variable_count,
            clauses,
        };
    }
    // any assignment with b or c true falsifies one of these
    let patterns = [
        (false, false, false),
        (false, false, true),
        (false, true, false),
        (true, false, false),
        (true, false, true),
        (true, true, false),
    ];
    for (sa, sb, sc) in patterns {
        clauses.push([
            Literal {
                variable: a,
                negated: !sa,
            },
            Literal {
                variable: b,
                negated: !sb,
            },
            Literal {
                variable: c,
                negated: !sc,
            },
        ]);
    }
    CnfFormula {
        variable_count: formula.variable_count + 3,
        clauses,
    }
}

/// What an edge does in the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeRole {
    /// edge of a variable-gadget triangle
    Triangle,
    /// chain or end edge of a variable gadget (other than the value edge)
    NonTriangle,
    /// the edge attached to the gadget's first end vertex; its direction
    /// encodes the variable's value
    VariableValue,
    /// edge from a base vertex to its inverter
    Inverter,
    /// nonagon edge of a clause gadget
    Nonagon,
    /// handle edge from the nonagon to a knob
    Handle,
    /// integer edge from the clause center to a nonagon vertex
    Center,
    /// integer edge coupling a clause knob to a variable gadget
    ClauseVariable,
    /// integer edge making a cross-gadget pair trivially shortest
    Shortcut,
}

impl EdgeRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeRole::Triangle => "triangle",
            EdgeRole::NonTriangle => "non-triangle",
            EdgeRole::VariableValue => "variable-value",
            EdgeRole::Inverter => "inverter",
            EdgeRole::Nonagon => "nonagon",
            EdgeRole::Handle => "handle",
            EdgeRole::Center => "center",
            EdgeRole::ClauseVariable => "clause-variable",
            EdgeRole::Shortcut => "shortcut",
        }
    }
}

/// Anchor vertices of one variable gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableAnchors {
    pub variable: u32,
    /// the end vertex whose unique edge encodes the value
    pub v0: u32,
    /// the other end vertex
    pub v_end: u32,
    /// base vertices, one per occurrence
    pub bases: Vec<u32>,
    /// inverter vertex per occurrence, for negated occurrences
    pub inverters: Vec<Option<u32>>,
    /// e(v_{i,0})
    pub value_edge: EdgeKey,
    /// (clause index, literal slot 0..3) per occurrence
    pub occurrences: Vec<(u32, u8)>,
}

/// Anchor vertices of one clause gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseAnchors {
    pub clause: u32,
    pub cycle: [u32; 9],
    pub knobs: [u32; 3],
    pub center: u32,
    /// handle edge per knob
    pub handles: [EdgeKey; 3],
}

/// Which gadget a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetMembership {
    Variable(u32),
    Clause(u32),
}

/// A constructed graph together with the labelling needed to move between
/// assignments and roundings.
#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub graph: WeightedGraph,
    pub roles: BTreeMap<EdgeKey, EdgeRole>,
    /// weight of clause-variable edges (shortcuts weigh twice this)
    pub d: Rational,
    /// per variable of the formula; `None` for variables without occurrences
    pub variables: Vec<Option<VariableAnchors>>,
    pub clauses: Vec<ClauseAnchors>,
    /// gadget of each vertex
    pub membership: Vec<GadgetMembership>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    NotNormalized,
    /// a value edge was rounded to something other than 2 or 3
    UnexpectedValueEdge { u: u32, v: u32, value: u64 },
    AssignmentLength { expected: usize, got: usize },
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::NotNormalized => {
                write!(f, "formula must be normalized (no repeated variables per clause)")
            }
            ReductionError::UnexpectedValueEdge { u, v, value } => write!(
                f,
                "value edge {{{u}, {v}}} rounded to {value}, expected 2 or 3"
            ),
            ReductionError::AssignmentLength { expected, got } => {
                write!(f, "assignment covers {got} variables, formula has {expected}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ReductionError {}

struct Builder {
    next_vertex: u32,
    edges: Vec<(u32, u32, Rational)>,
    roles: BTreeMap<EdgeKey, EdgeRole>,
    membership: Vec<GadgetMembership>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            next_vertex: 0,
            edges: Vec::new(),
            roles: BTreeMap::new(),
            membership: Vec::new(),
        }
    }

    fn vertex(&mut self, membership: GadgetMembership) -> u32 {
        let v = self.next_vertex;
        self.next_vertex += 1;
        self.membership.push(membership);
        v
    }

    fn edge(&mut self, u: u32, v: u32, weight: Rational, role: EdgeRole) {
        self.roles.insert(edge_key(u, v), role);
        self.edges.push((u, v, weight));
    }

    fn variable_gadget(
        &mut self,
        variable: u32,
        occurrences: Vec<(u32, u8)>,
        negated: &[bool],
    ) -> VariableAnchors {
        let h = negated.len();
        debug_assert!(h >= 1);
        let w = ratio(5, 2);
        let member = GadgetMembership::Variable(variable);
        let v0 = self.vertex(member);
        let mut bases = Vec::with_capacity(h);
        let mut lefts = Vec::with_capacity(h);
        let mut rights = Vec::with_capacity(h);
        for k in 0..h {
            let left = self.vertex(member);
            let right = self.vertex(member);
            let base = self.vertex(member);
            self.edge(left, right, w.clone(), EdgeRole::Triangle);
            self.edge(left, base, w.clone(), EdgeRole::Triangle);
            self.edge(right, base, w.clone(), EdgeRole::Triangle);
            if k > 0 {
                self.edge(rights[k - 1], left, w.clone(), EdgeRole::NonTriangle);
            }
            lefts.push(left);
            rights.push(right);
            bases.push(base);
        }
        self.edge(v0, lefts[0], w.clone(), EdgeRole::VariableValue);
        let v_end = self.vertex(member);
        self.edge(rights[h - 1], v_end, w.clone(), EdgeRole::NonTriangle);
        let mut inverters = vec![None; h];
        for (k, &neg) in negated.iter().enumerate() {
            if neg {
                let inv = self.vertex(member);
                self.edge(bases[k], inv, w.clone(), EdgeRole::Inverter);
                inverters[k] = Some(inv);
            }
        }
        VariableAnchors {
            variable,
            v0,
            v_end,
            bases,
            inverters,
            value_edge: edge_key(v0, lefts[0]),
            occurrences,
        }
    }

    fn clause_gadget(&mut self, clause: u32) -> ClauseAnchors {
        let member = GadgetMembership::Clause(clause);
        let mut cycle = [0u32; 9];
        for slot in cycle.iter_mut() {
            *slot = self.vertex(member);
        }
        for i in 0..9 {
            self.edge(cycle[i], cycle[(i + 1) % 9], ratio(18, 5), EdgeRole::Nonagon);
        }
        let mut knobs = [0u32; 3];
        let mut handles = [(0u32, 0u32); 3];
        for t in 0..3 {
            let knob = self.vertex(member);
            let attach = cycle[3 * t];
            self.edge(attach, knob, ratio(5, 2), EdgeRole::Handle);
            knobs[t] = knob;
            handles[t] = edge_key(attach, knob);
        }
        let center = self.vertex(member);
        for &v in &cycle {
            self.edge(center, v, rat(6), EdgeRole::Center);
        }
        ClauseAnchors {
            clause,
            cycle,
            knobs,
            center,
            handles,
        }
    }

    fn finish(
        self,
        d: Rational,
        variables: Vec<Option<VariableAnchors>>,
        clauses: Vec<ClauseAnchors>,
    ) -> GadgetGraph {
        let graph = WeightedGraph::from_edges(self.next_vertex as usize, self.edges)
            .expect("construction produces a canonical simple graph");
        GadgetGraph {
            graph,
            roles: self.roles,
            d,
            variables,
            clauses,
            membership: self.membership,
        }
    }
}

/// A standalone variable gadget with `h` occurrences, the listed positions
/// (1-based) negated. Clause-variable and shortcut edges are absent.
pub fn build_variable_gadget(h: usize, negated_positions: &[usize]) -> GadgetGraph {
    assert!(h >= 1);
    let mut negated = vec![false; h];
    for &p in negated_positions {
        negated[p - 1] = true;
    }
    let mut b = Builder::new();
    let anchors = b.variable_gadget(0, Vec::new(), &negated);
    b.finish(rat(25), vec![Some(anchors)], Vec::new())
}

/// A standalone clause gadget: nonagon, three knobs, integer center.
pub fn build_clause_gadget() -> GadgetGraph {
    let mut b = Builder::new();
    let anchors = b.clause_gadget(0);
    b.finish(rat(25), Vec::new(), vec![anchors])
}

/// Builds the full reduction graph for a normalized formula: variable and
/// clause gadgets, clause-variable edges of weight `D = 5m + 20`, and
/// shortcut edges of weight `2D` between all cross-gadget pairs that are not
/// coupled by a clause-variable edge.
pub fn build_reduction(formula: &CnfFormula) -> Result<GadgetGraph, ReductionError> {
    if !formula.is_normalized() {
        return Err(ReductionError::NotNormalized);
    }
    let m = formula.clauses.len();
    let d = rat(5 * m as i64 + 20);
    let mut b = Builder::new();

    // occurrences per variable, scanning clauses in order
    let n = formula.variable_count as usize;
    let mut occurrences: Vec<Vec<(u32, u8, bool)>> = vec![Vec::new(); n];
    for (j, clause) in formula.clauses.iter().enumerate() {
        for (t, lit) in clause.iter().enumerate() {
            occurrences[lit.variable as usize].push((j as u32, t as u8, lit.negated));
        }
    }

    let mut variables: Vec<Option<VariableAnchors>> = Vec::with_capacity(n);
    for (i, occ) in occurrences.iter().enumerate() {
        if occ.is_empty() {
            variables.push(None);
            continue;
        }
        let negated: Vec<bool> = occ.iter().map(|&(_, _, neg)| neg).collect();
        let slots: Vec<(u32, u8)> = occ.iter().map(|&(j, t, _)| (j, t)).collect();
        variables.push(Some(b.variable_gadget(i as u32, slots, &negated)));
    }
    let clauses: Vec<ClauseAnchors> = (0..m as u32).map(|j| b.clause_gadget(j)).collect();

    // clause-variable edges: the k-th occurrence of a variable couples its
    // k-th base (or inverter) to the knob of that occurrence
    for anchors in variables.iter().flatten() {
        for (k, &(j, t)) in anchors.occurrences.iter().enumerate() {
            let knob = clauses[j as usize].knobs[t as usize];
            let attach = match anchors.inverters[k] {
                Some(inv) => inv,
                None => anchors.bases[k],
            };
            b.edge(attach, knob, d.clone(), EdgeRole::ClauseVariable);
        }
    }

    // shortcut edges between cross-gadget pairs without a direct coupling
    let mut appears: BTreeSet<(u32, u32)> = BTreeSet::new(); // (variable, clause)
    for (j, clause) in formula.clauses.iter().enumerate() {
        for lit in clause {
            appears.insert((lit.variable, j as u32));
        }
    }
    let two_d = &d * rat(2);
    let total = b.next_vertex;
    for u in 0..total {
        for v in (u + 1)..total {
            let needs_shortcut = match (b.membership[u as usize], b.membership[v as usize]) {
                (GadgetMembership::Variable(i1), GadgetMembership::Variable(i2)) => i1 != i2,
                (GadgetMembership::Clause(j1), GadgetMembership::Clause(j2)) => j1 != j2,
                (GadgetMembership::Variable(i), GadgetMembership::Clause(j))
                | (GadgetMembership::Clause(j), GadgetMembership::Variable(i)) => {
                    !appears.contains(&(i, j))
                }
            };
            if needs_shortcut {
                b.edge(u, v, two_d.clone(), EdgeRole::Shortcut);
            }
        }
    }
    Ok(b.finish(d, variables, clauses))
}

/// Rounds every edge according to an assignment, following the construction
/// that proves satisfiable formulas yield strong 1-roundings.
pub fn rounding_from_assignment(
    gadget: &GadgetGraph,
    assignment: &[bool],
) -> Result<Rounding, ReductionError> {
    if assignment.len() != gadget.variables.len() {
        return Err(ReductionError::AssignmentLength {
            expected: gadget.variables.len(),
            got: assignment.len(),
        });
    }
    let mut rounding = Rounding::new();
    for e in gadget.graph.edges() {
        let role = gadget.roles[&(e.u, e.v)];
        let value: u64 = match role {
            EdgeRole::Center | EdgeRole::ClauseVariable | EdgeRole::Shortcut => e
                .weight
                .to_integer()
                .try_into()
                .expect("integer weights fit u64"),
            EdgeRole::Nonagon | EdgeRole::Handle => 0, // fixed up per clause below
            EdgeRole::Triangle
            | EdgeRole::NonTriangle
            | EdgeRole::VariableValue
            | EdgeRole::Inverter => {
                let GadgetMembership::Variable(i) = gadget.membership[e.u as usize] else {
                    unreachable!("variable-gadget edges live in variable gadgets");
                };
                // true: triangles up (3), the rest down (2); false: opposite
                let up = assignment[i as usize] == matches!(role, EdgeRole::Triangle);
                if up {
                    3
                } else {
                    2
                }
            }
        };
        rounding.set(e.u, e.v, value);
    }

    for (j, clause) in gadget.clauses.iter().enumerate() {
        let literals = literal_values(gadget, j as u32, assignment);
        // a satisfied literal rounds its handle down
        for t in 0..3 {
            let (u, v) = clause.handles[t];
            rounding.set(u, v, if literals[t] { 2 } else { 3 });
        }
        // nonagon triple between consecutive handles: both up -> 3,4,3;
        // otherwise 4,3,4
        for t in 0..3 {
            let up_pair = !literals[t] && !literals[(t + 1) % 3];
            let triple = if up_pair { [3, 4, 3] } else { [4, 3, 4] };
            for (step, value) in triple.into_iter().enumerate() {
                let a = clause.cycle[(3 * t + step) % 9];
                let b = clause.cycle[(3 * t + step + 1) % 9];
                rounding.set(a, b, value);
            }
        }
    }
    Ok(rounding)
}

fn literal_values(gadget: &GadgetGraph, clause: u32, assignment: &[bool]) -> [bool; 3] {
    let mut out = [false; 3];
    for anchors in gadget.variables.iter().flatten() {
        for (k, &(j, t)) in anchors.occurrences.iter().enumerate() {
            if j == clause {
                let negated = anchors.inverters[k].is_some();
                out[t as usize] = assignment[anchors.variable as usize] != negated;
            }
        }
    }
    out
}

/// Reads the variable assignment off a rounding: a value edge rounded down
/// to 2 means true, up to 3 means false. Variables without occurrences
/// default to false.
pub fn assignment_from_rounding(
    gadget: &GadgetGraph,
    rounding: &Rounding,
) -> Result<Vec<bool>, ReductionError> {
    let mut assignment = vec![false; gadget.variables.len()];
    for anchors in gadget.variables.iter().flatten() {
        let (u, v) = anchors.value_edge;
        match rounding.get(u, v) {
            Some(2) => assignment[anchors.variable as usize] = true,
            Some(3) => assignment[anchors.variable as usize] = false,
            other => {
                return Err(ReductionError::UnexpectedValueEdge {
                    u,
                    v,
                    value: other.unwrap_or(u64::MAX),
                })
            }
        }
    }
    Ok(assignment)
}
