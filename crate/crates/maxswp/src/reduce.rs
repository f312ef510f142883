//! Reduction from monotone exact-1-in-3 SAT with three occurrences per
//! variable (M3XSAT(3L)) to maximum-welfare partition on 4-regular graphs.
//!
//! Each variable becomes a triangle of three occurrence vertices; each clause
//! becomes an edge pair joined to its three occurrence vertices, so every
//! clause induces a triple triangle and every vertex has degree 4. The
//! instance is satisfiable exactly when the gadget admits a partition of
//! welfare `41n/12`: triangles for true variables, double triangles (clause
//! pair plus the two false occurrences) for the clauses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoalitionSet, Graph};
use crate::oracle::{solve_exact, EXACT_LIMIT};
use crate::rational::Rational;
use crate::welfare::Partition;

/// A monotone exact-1-in-3 SAT instance where every variable occurs in
/// exactly three clauses (hence `#clauses == #variables`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XsatInstance {
    n_vars: usize,
    clauses: Vec<[u32; 3]>,
}

impl XsatInstance {
    /// Validates and wraps an instance; clause entries are 0-based variable
    /// ids, each clause holding three distinct variables. Duplicate clauses
    /// are allowed (the small instances require them).
    pub fn new(n_vars: usize, clauses: Vec<[u32; 3]>) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::InvalidInstance("no variables".into()));
        }
        let mut occurrences = vec![0usize; n_vars];
        for (idx, clause) in clauses.iter().enumerate() {
            let [a, b, c] = *clause;
            if a == b || a == c || b == c {
                return Err(Error::InvalidInstance(format!(
                    "clause {idx} repeats a variable"
                )));
            }
            for &v in clause {
                if v as usize >= n_vars {
                    return Err(Error::InvalidInstance(format!(
                        "clause {idx} uses variable {} but only {n_vars} exist",
                        v + 1
                    )));
                }
                occurrences[v as usize] += 1;
            }
        }
        if let Some(v) = occurrences.iter().position(|&c| c != 3) {
            return Err(Error::InvalidInstance(format!(
                "variable {} occurs {} times, expected 3",
                v + 1,
                occurrences[v]
            )));
        }
        debug_assert_eq!(clauses.len(), n_vars);
        Ok(XsatInstance { n_vars, clauses })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[[u32; 3]] {
        &self.clauses
    }

    /// Parses the instance file format: a header `p xsat n m` followed by
    /// `m` lines of three 1-based variable ids; `c` lines are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('c'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty instance".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [p, xsat, n, m] = fields.as_slice() else {
            return Err(Error::Parse("header must be 'p xsat n m'".into()));
        };
        if *p != "p" || *xsat != "xsat" {
            return Err(Error::Parse("header must be 'p xsat n m'".into()));
        }
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse("invalid variable count".into()))?;
        let m: usize = m
            .parse()
            .map_err(|_| Error::Parse("invalid clause count".into()))?;
        let mut clauses = Vec::with_capacity(m);
        for line in lines {
            let ids: Vec<u32> = line
                .split_whitespace()
                .map(|tok| tok.parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("invalid clause line '{line}'")))?;
            let [a, b, c] = ids.as_slice() else {
                return Err(Error::Parse(format!(
                    "clause line '{line}' must list exactly 3 variables"
                )));
            };
            if ids.contains(&0) {
                return Err(Error::Parse("variable ids are 1-based".into()));
            }
            clauses.push([a - 1, b - 1, c - 1]);
        }
        if clauses.len() != m {
            return Err(Error::Parse(format!(
                "expected {m} clauses, found {}",
                clauses.len()
            )));
        }
        XsatInstance::new(n, clauses)
    }

    /// Renders the instance in the file format accepted by [`parse`].
    ///
    /// [`parse`]: XsatInstance::parse
    pub fn to_file_string(&self) -> String {
        let mut out = format!("p xsat {} {}\n", self.n_vars, self.clauses.len());
        for clause in &self.clauses {
            out.push_str(&format!(
                "{} {} {}\n",
                clause[0] + 1,
                clause[1] + 1,
                clause[2] + 1
            ));
        }
        out
    }

    /// Checks that every clause has exactly one true literal; on failure
    /// reports the first violating clause and its true-literal count.
    pub fn check_exactly_one(&self, assignment: &[bool]) -> Result<()> {
        if assignment.len() != self.n_vars {
            return Err(Error::InvalidInstance(format!(
                "assignment covers {} of {} variables",
                assignment.len(),
                self.n_vars
            )));
        }
        for (idx, clause) in self.clauses.iter().enumerate() {
            let true_count = clause.iter().filter(|&&v| assignment[v as usize]).count();
            if true_count != 1 {
                return Err(Error::NotExactlyOneSatisfied {
                    clause: idx,
                    true_count,
                });
            }
        }
        Ok(())
    }

    /// Exhaustive search for an exact-1-in-3 satisfying assignment.
    ///
    /// Only intended for small instances; refuses `n > 24`.
    pub fn find_satisfying_assignment(&self) -> Result<Option<Vec<bool>>> {
        if self.n_vars > 24 {
            return Err(Error::TooLarge {
                n: self.n_vars,
                limit: 24,
            });
        }
        for bits in 0u32..1 << self.n_vars {
            let assignment: Vec<bool> = (0..self.n_vars).map(|i| bits >> i & 1 == 1).collect();
            if self.check_exactly_one(&assignment).is_ok() {
                return Ok(Some(assignment));
            }
        }
        Ok(None)
    }
}

/// Vertex labeling of a gadget graph, serializable as the JSON label map.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GadgetLabels {
    /// `literal_vertices[i]` lists the three occurrence vertices of variable `i`.
    pub literal_vertices: Vec<[u32; 3]>,
    /// `clause_vertices[j]` lists the two clause vertices of clause `j`.
    pub clause_vertices: Vec<[u32; 2]>,
    /// `occurrence_clause[i][k]` is the clause that the k-th occurrence of
    /// variable `i` (in clause order) belongs to.
    pub occurrence_clause: Vec<[u32; 3]>,
}

/// The 4-regular graph produced by the reduction, with its labeling.
#[derive(Debug, Clone)]
pub struct GadgetGraph {
    graph: Graph,
    n_vars: usize,
    labels: GadgetLabels,
    /// Occurrence vertices attached to each clause, in clause-literal order.
    clause_members: Vec<[u32; 3]>,
}

impl GadgetGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn labels(&self) -> &GadgetLabels {
        &self.labels
    }

    /// The `41n/12` welfare threshold separating yes- from no-instances.
    pub fn threshold(&self) -> Rational {
        Rational::from_i128(41 * self.n_vars as i128, 12)
    }
}

/// Builds the gadget graph. The instance is validated at construction, so
/// this never fails: vertices `3i..3i+3` are the occurrence triangle of
/// variable `i` (the k-th occurrence, in clause order, is vertex `3i+k`) and
/// vertices `3n+2j, 3n+2j+1` are the clause pair of clause `j`.
pub fn build_gadget(inst: &XsatInstance) -> GadgetGraph {
    let n = inst.n_vars();
    let mut edges = Vec::with_capacity(10 * n);
    // Occurrence triangles.
    for i in 0..n as u32 {
        let base = 3 * i;
        edges.push((base, base + 1));
        edges.push((base + 1, base + 2));
        edges.push((base, base + 2));
    }
    let clause_vertex = |j: usize, side: u32| (3 * n + 2 * j) as u32 + side;
    let mut occurrence_clause = vec![[u32::MAX; 3]; n];
    let mut next_occurrence = vec![0usize; n];
    let mut clause_members = Vec::with_capacity(n);
    for (j, clause) in inst.clauses().iter().enumerate() {
        edges.push((clause_vertex(j, 0), clause_vertex(j, 1)));
        let mut members = [0u32; 3];
        for (slot, &var) in clause.iter().enumerate() {
            let k = next_occurrence[var as usize];
            next_occurrence[var as usize] += 1;
            occurrence_clause[var as usize][k] = j as u32;
            let occ_vertex = 3 * var + k as u32;
            members[slot] = occ_vertex;
            edges.push((occ_vertex, clause_vertex(j, 0)));
            edges.push((occ_vertex, clause_vertex(j, 1)));
        }
        clause_members.push(members);
    }
    let graph = Graph::new(5 * n, &edges).expect("gadget edges are simple");
    debug_assert!((0..graph.n() as u32).all(|v| graph.degree(v) == 4));
    let labels = GadgetLabels {
        literal_vertices: (0..n as u32).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect(),
        clause_vertices: (0..n)
            .map(|j| [clause_vertex(j, 0), clause_vertex(j, 1)])
            .collect(),
        occurrence_clause,
    };
    GadgetGraph {
        graph,
        n_vars: n,
        labels,
        clause_members,
    }
}

/// Turns an exact-1-in-3 satisfying assignment into the canonical partition
/// of welfare `41n/12`: one triangle per true variable, one double triangle
/// per clause (the clause pair plus its two false occurrence vertices).
///
/// Fails, naming the violated clause, if the assignment does not satisfy
/// every clause exactly once.
pub fn assignment_to_partition(
    gadget: &GadgetGraph,
    inst: &XsatInstance,
    assignment: &[bool],
) -> Result<Partition> {
    inst.check_exactly_one(assignment)?;
    let mut blocks = Vec::new();
    for (i, &truth) in assignment.iter().enumerate() {
        if truth {
            blocks.push(CoalitionSet::new(
                gadget.labels.literal_vertices[i].to_vec(),
            ));
        }
    }
    for (j, clause) in inst.clauses().iter().enumerate() {
        let mut members: Vec<u32> = gadget.labels.clause_vertices[j].to_vec();
        for (slot, &var) in clause.iter().enumerate() {
            if !assignment[var as usize] {
                members.push(gadget.clause_members[j][slot]);
            }
        }
        blocks.push(CoalitionSet::new(members));
    }
    Ok(Partition::new(blocks))
}

/// Outcome of [`verify_threshold`].
#[derive(Debug, Clone)]
pub enum ThresholdReport {
    /// The gadget was small enough to solve exactly.
    Exact {
        threshold: Rational,
        optimum: Rational,
        /// True iff the optimum reaches the threshold, i.e. the underlying
        /// instance is satisfiable.
        satisfiable: bool,
        partition: Partition,
    },
    /// Too large for the exact oracle; only a supplied assignment was checked.
    Forward {
        threshold: Rational,
        /// Welfare of the certified partition, when an assignment was given.
        certified: Option<Rational>,
    },
}

/// Checks the `41n/12` threshold on a gadget.
///
/// Gadgets with at most 20 vertices (4 variables) are solved exactly and the
/// optimum is compared against the threshold. Larger gadgets run in forward
/// mode: if `assignment` is given, it is converted to a partition and its
/// welfare is verified to equal the threshold exactly.
pub fn verify_threshold(
    gadget: &GadgetGraph,
    inst: &XsatInstance,
    assignment: Option<&[bool]>,
) -> Result<ThresholdReport> {
    let threshold = gadget.threshold();
    if gadget.graph().n() <= EXACT_LIMIT {
        let (partition, optimum) = solve_exact(gadget.graph())?;
        let satisfiable = optimum == threshold;
        debug_assert!(optimum <= threshold);
        return Ok(ThresholdReport::Exact {
            threshold,
            optimum,
            satisfiable,
            partition,
        });
    }
    let certified = match assignment {
        Some(a) => {
            let partition = assignment_to_partition(gadget, inst, a)?;
            let value = crate::welfare::welfare(gadget.graph(), &partition)?;
            debug_assert_eq!(value, threshold);
            Some(value)
        }
        None => None,
    };
    Ok(ThresholdReport::Forward {
        threshold,
        certified,
    })
}

/// Enumerates every valid instance on `n_vars` variables, up to clause order.
///
/// Clause multisets are drawn from all 3-subsets of the variables with each
/// variable used exactly three times. Only practical for tiny `n_vars`.
pub fn enumerate_instances(n_vars: usize) -> Vec<XsatInstance> {
    let mut subsets = Vec::new();
    for a in 0..n_vars as u32 {
        for b in a + 1..n_vars as u32 {
            for c in b + 1..n_vars as u32 {
                subsets.push([a, b, c]);
            }
        }
    }
    let mut found = Vec::new();
    let mut chosen: Vec<[u32; 3]> = Vec::new();
    fn rec(
        subsets: &[[u32; 3]],
        start: usize,
        remaining: usize,
        occurrences: &mut [usize],
        chosen: &mut Vec<[u32; 3]>,
        found: &mut Vec<XsatInstance>,
    ) {
        if remaining == 0 {
            if occurrences.iter().all(|&c| c == 3) {
                if let Ok(inst) = XsatInstance::new(occurrences.len(), chosen.clone()) {
                    found.push(inst);
                }
            }
            return;
        }
        for (i, subset) in subsets.iter().enumerate().skip(start) {
            if subset.iter().any(|&v| occurrences[v as usize] >= 3) {
                continue;
            }
            for &v in subset {
                occurrences[v as usize] += 1;
            }
            chosen.push(*subset);
            rec(subsets, i, remaining - 1, occurrences, chosen, found);
            chosen.pop();
            for &v in subset {
                occurrences[v as usize] -= 1;
            }
        }
    }
    rec(
        &subsets,
        0,
        n_vars,
        &mut vec![0; n_vars],
        &mut chosen,
        &mut found,
    );
    found
}
