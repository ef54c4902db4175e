//! Graphs of groups with free vertex groups and trivial edge groups.
//!
//! The fundamental group is free on the vertex generators followed by one
//! stable letter per edge outside the maximal subtree `Y₀`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::asphericity::{Membership, WordProblemOracle};
use crate::chain::{row_space_contains, IntMatrix};
use crate::error::{invalid, precondition, Error, Result};
use crate::perm::Perm;
use crate::stagger::{check_strongly_staggered, Staggering};
use crate::trees::{axis_footprint, EdgeOrbit, TreeModel};
use crate::words::{cyclic_core, Generator, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub name: String,
    pub rank: usize,
}

/// A directed edge; factors are lists of generator names of the end vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub from: usize,
    pub to: usize,
    pub in_tree: bool,
    #[serde(default)]
    pub factor_from: Vec<String>,
    #[serde(default)]
    pub factor_to: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct GogRepr {
    vertices: Vec<VertexSpec>,
    edges: Vec<EdgeSpec>,
}

/// Which free factor of the fundamental group a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Vertex(usize),
    Stable(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GogRepr", into = "GogRepr")]
pub struct GraphOfGroups {
    vertices: Vec<VertexSpec>,
    edges: Vec<EdgeSpec>,
    offsets: Vec<u32>,
    stable: Vec<Option<u32>>,
    factor_from: Vec<Vec<Generator>>,
    factor_to: Vec<Vec<Generator>>,
    rank: usize,
}

impl TryFrom<GogRepr> for GraphOfGroups {
    type Error = Error;

    fn try_from(r: GogRepr) -> Result<Self> {
        GraphOfGroups::new(r.vertices, r.edges)
    }
}

impl From<GraphOfGroups> for GogRepr {
    fn from(g: GraphOfGroups) -> Self {
        GogRepr { vertices: g.vertices, edges: g.edges }
    }
}

impl GraphOfGroups {
    pub fn new(vertices: Vec<VertexSpec>, edges: Vec<EdgeSpec>) -> Result<GraphOfGroups> {
        let n = vertices.len();
        if n == 0 {
            return invalid("a graph of groups needs at least one vertex");
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut tree_edges = 0;
        for (i, e) in edges.iter().enumerate() {
            if e.from >= n || e.to >= n {
                return invalid(format!("edge {i} has an endpoint outside 0..{n}"));
            }
            if e.in_tree {
                let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
                if a == b {
                    return invalid(format!("tree edge {i} closes a cycle in Y0"));
                }
                parent[a] = b;
                tree_edges += 1;
            }
        }
        if tree_edges + 1 != n {
            return invalid("Y0 is not a spanning tree");
        }
        let mut offsets = Vec::with_capacity(n);
        let mut next = 0u32;
        for v in &vertices {
            offsets.push(next);
            next += v.rank as u32;
        }
        let mut stable = Vec::with_capacity(edges.len());
        for e in &edges {
            if e.in_tree {
                stable.push(None);
            } else {
                stable.push(Some(next));
                next += 1;
            }
        }
        let mut g = GraphOfGroups {
            vertices,
            edges,
            offsets,
            stable,
            factor_from: Vec::new(),
            factor_to: Vec::new(),
            rank: next as usize,
        };
        for i in 0..g.edges.len() {
            let (from, to) = (g.edges[i].from, g.edges[i].to);
            let ff = g.parse_factor(from, &g.edges[i].factor_from)?;
            let ft = g.parse_factor(to, &g.edges[i].factor_to)?;
            g.factor_from.push(ff);
            g.factor_to.push(ft);
        }
        Ok(g)
    }

    fn parse_factor(&self, v: usize, names: &[String]) -> Result<Vec<Generator>> {
        let mut out = Vec::new();
        for name in names {
            let g = Generator::parse(name)?;
            if self.factor_of(g) != Factor::Vertex(v) {
                return invalid(format!("generator {name} does not belong to vertex {v}"));
            }
            out.push(g);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// One vertex of rank 0 and `rank` loops: the Cayley tree of F(rank).
    pub fn cayley(rank: usize) -> GraphOfGroups {
        let edges = (0..rank)
            .map(|_| EdgeSpec { from: 0, to: 0, in_tree: false, factor_from: vec![], factor_to: vec![] })
            .collect();
        GraphOfGroups::new(vec![VertexSpec { name: "v".into(), rank: 0 }], edges).expect("valid bouquet")
    }

    /// Two vertices joined by one tree edge: the tree of `A ∗ B`.
    pub fn free_product(left: usize, right: usize) -> GraphOfGroups {
        GraphOfGroups::new(
            vec![VertexSpec { name: "A".into(), rank: left }, VertexSpec { name: "B".into(), rank: right }],
            vec![EdgeSpec { from: 0, to: 1, in_tree: true, factor_from: vec![], factor_to: vec![] }],
        )
        .expect("valid segment")
    }

    pub fn vertices(&self) -> &[VertexSpec] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeSpec] {
        &self.edges
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_generators(&self, v: usize) -> std::ops::Range<u32> {
        self.offsets[v]..self.offsets[v] + self.vertices[v].rank as u32
    }

    pub fn stable_letter(&self, e: usize) -> Option<u32> {
        self.stable[e]
    }

    pub fn edge_factors(&self, e: usize) -> (&[Generator], &[Generator]) {
        (&self.factor_from[e], &self.factor_to[e])
    }

    /// Generators beyond the rank are reported as the last stable factor;
    /// callers check ranks first.
    pub fn factor_of(&self, g: Generator) -> Factor {
        for v in 0..self.vertices.len() {
            if self.vertex_generators(v).contains(&g.0) {
                return Factor::Vertex(v);
            }
        }
        let e = self.stable.iter().position(|s| *s == Some(g.0)).unwrap_or(self.edges.len());
        Factor::Stable(e)
    }

    /// The path of tree edges from vertex `from` to vertex `to`, as
    /// `(edge, forward)` pairs.
    pub fn tree_path(&self, from: usize, to: usize) -> Vec<(usize, bool)> {
        let n = self.vertices.len();
        let mut prev: Vec<Option<(usize, usize, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate().filter(|(_, e)| e.in_tree) {
                let (next, fwd) = if e.from == v {
                    (e.to, true)
                } else if e.to == v {
                    (e.from, false)
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    prev[next] = Some((v, i, fwd));
                    queue.push_back(next);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, i, fwd) = prev[cur].expect("Y0 spans the graph");
            path.push((i, fwd));
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        w.check_rank(self.rank)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph gog {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"{} ({})\"];\n", v.name, v.rank));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let style = if e.in_tree { ", color=red, penwidth=2" } else { ", style=dashed" };
            s.push_str(&format!("  v{} -> v{} [label=\"e{i}\"{style}];\n", e.from, e.to));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationGenerator {
    pub name: String,
    pub factor: Factor,
}

/// Free presentation of the fundamental group (no relations, since edge
/// groups are trivial).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalPresentation {
    pub rank: usize,
    pub generators: Vec<PresentationGenerator>,
    pub relations: Vec<Word>,
}

pub fn fundamental_presentation(g: &GraphOfGroups) -> FundamentalPresentation {
    let generators = (0..g.rank as u32)
        .map(|i| PresentationGenerator { name: Generator(i).name(), factor: g.factor_of(Generator(i)) })
        .collect();
    FundamentalPresentation { rank: g.rank, generators, relations: Vec::new() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syllable {
    pub factor: Factor,
    pub word: Word,
}

/// Free-product normal form: maximal runs of letters from one factor.
pub fn normal_form(g: &GraphOfGroups, w: &Word) -> Result<Vec<Syllable>> {
    g.check_word(w)?;
    let mut out: Vec<(Factor, Vec<crate::Letter>)> = Vec::new();
    for &l in w.letters() {
        let f = g.factor_of(l.gen);
        match out.last_mut() {
            Some((last, letters)) if *last == f => letters.push(l),
            _ => out.push((f, vec![l])),
        }
    }
    Ok(out.into_iter().map(|(factor, letters)| Syllable { factor, word: Word::from_letters(letters) }).collect())
}

/// Syllable count of the cyclic normal form (first and last syllables merge
/// when they share a factor).
pub fn cyclic_syllable_length(g: &GraphOfGroups, w: &Word) -> Result<usize> {
    let (core, _) = cyclic_core(w);
    let nf = normal_form(g, &core)?;
    Ok(match nf.len() {
        0 | 1 => nf.len(),
        n if nf[0].factor == nf[n - 1].factor => n - 1,
        n => n,
    })
}

/// The cyclic reduction of `r` when it lies in the basis-subset factor,
/// i.e. a witness that some conjugate of `r` lies in `⟨factor⟩`.
pub fn conjugate_into_factor(r: &Word, factor: &[Generator]) -> Option<Word> {
    let (core, _) = cyclic_core(r);
    core.uses_only(|g| factor.contains(&Generator(g))).then_some(core)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeEnd {
    From,
    To,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCheck {
    pub vertex: usize,
    pub edge: usize,
    pub end: EdgeEnd,
    pub factor: Vec<String>,
    pub pass: bool,
    /// Conjugate of the relator inside the factor, on failure.
    pub witness: Option<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub checks: Vec<FactorCheck>,
    pub all_pass: bool,
    pub note: String,
}

/// Checks that no vertex-group conjugate of `r_v` lies in any incident edge
/// factor, for every vertex carrying a relator.
pub fn check_relator_family(g: &GraphOfGroups, family: &BTreeMap<usize, Word>) -> Result<FamilyReport> {
    let mut checks = Vec::new();
    for (&v, r) in family {
        if v >= g.vertices.len() {
            return invalid(format!("no vertex {v}"));
        }
        let gens = g.vertex_generators(v);
        if !r.uses_only(|x| gens.contains(&x)) {
            return invalid(format!("relator {r} uses generators outside vertex {v}"));
        }
        for (i, e) in g.edges.iter().enumerate() {
            for (end, at, factor) in [(EdgeEnd::From, e.from, &g.factor_from[i]), (EdgeEnd::To, e.to, &g.factor_to[i])] {
                if at != v {
                    continue;
                }
                let witness = conjugate_into_factor(r, factor);
                checks.push(FactorCheck {
                    vertex: v,
                    edge: i,
                    end,
                    factor: factor.iter().map(|x| x.name()).collect(),
                    pass: witness.is_none(),
                    witness,
                });
            }
        }
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(FamilyReport {
        checks,
        all_pass,
        note: "intersections of normal closures with vertex groups are only checked on folding windows".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineVertex {
    pub relator: Word,
    pub mu: usize,
    pub nu: usize,
    /// Orbits spanning the vertex group `F[mu..=nu]`.
    pub orbits: Vec<EdgeOrbit>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineEdge {
    pub left: usize,
    pub right: usize,
    /// Orbit positions of the edge group, `None` when trivial.
    pub interval: Option<(usize, usize)>,
    pub orbits: Vec<EdgeOrbit>,
}

/// A line of groups read off a strongly staggered relator set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineDecomposition {
    pub vertices: Vec<LineVertex>,
    pub edges: Vec<LineEdge>,
}

/// Orders the relators by footprint minimum (0-based orbit positions) and
/// records the intervals `[mu_n, nu_n]` with their intersections.
pub fn staggered_to_line(model: &TreeModel, relators: &[Word], ord: &Staggering) -> Result<LineDecomposition> {
    let report = check_strongly_staggered(model, relators, ord)?;
    if !report.strongly_staggered() {
        return precondition("relators are not strongly staggered under the given order");
    }
    let pos: BTreeMap<&EdgeOrbit, usize> = ord.ordering.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut classes: Vec<(usize, usize, Word, BTreeSet<usize>)> = Vec::new();
    for r in relators {
        let fp: BTreeSet<usize> = axis_footprint(model, r)?.iter().map(|o| pos[o]).collect();
        let (mu, nu) = (*fp.first().expect("non-empty footprint"), *fp.last().expect("non-empty footprint"));
        classes.push((mu, nu, r.clone(), fp));
    }
    classes.sort_by(|x, y| x.0.cmp(&y.0));
    for pair in classes.windows(2) {
        assert!(pair[0].0 < pair[1].0 && pair[0].1 < pair[1].1, "staggered intervals must increase strictly");
    }
    let span = |a: usize, b: usize| ord.ordering[a..=b].to_vec();
    let vertices: Vec<LineVertex> = classes
        .iter()
        .map(|(mu, nu, r, _)| LineVertex { relator: r.clone(), mu: *mu, nu: *nu, orbits: span(*mu, *nu) })
        .collect();
    let mut edges = Vec::new();
    for n in 0..classes.len().saturating_sub(1) {
        let (lo, hi) = (classes[n + 1].0, classes[n].1);
        let interval = (lo <= hi).then_some((lo, hi));
        if let Some((lo, hi)) = interval {
            for side in [&classes[n], &classes[n + 1]] {
                assert!(!side.3.iter().all(|p| (lo..=hi).contains(p)), "relator conjugate into an edge group");
            }
        }
        edges.push(LineEdge {
            left: n,
            right: n + 1,
            interval,
            orbits: interval.map(|(a, b)| span(a, b)).unwrap_or_default(),
        });
    }
    Ok(LineDecomposition { vertices, edges })
}

/// Optional evidence for [`freiheitssatz_probe`].
#[derive(Clone, Debug, Default)]
pub struct ProbeCertificates {
    pub permutations: Option<Vec<Perm>>,
    pub search: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    Embedded,
    Refuted,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    pub evidence: String,
}

/// Tries to certify that `a`, a non-trivial element of one vertex group,
/// survives in `F/⟨⟨r⟩⟩`.
pub fn freiheitssatz_probe(g: &GraphOfGroups, r: &Word, a: &Word, certs: &ProbeCertificates) -> Result<ProbeReport> {
    g.check_word(r)?;
    g.check_word(a)?;
    if a.is_identity() {
        return invalid("the probed element must be non-trivial");
    }
    let factors: BTreeSet<Factor> = a.letters().iter().map(|l| g.factor_of(l.gen)).collect();
    let v = match factors.into_iter().collect::<Vec<_>>()[..] {
        [Factor::Vertex(v)] => v,
        _ => return invalid(format!("{a} does not lie in a single vertex group")),
    };
    let gens: Vec<Generator> = g.vertex_generators(v).map(Generator).collect();
    if let Some(w) = conjugate_into_factor(r, &gens) {
        return precondition(format!("a conjugate {w} of the relator lies in the vertex group of {a}"));
    }
    let m = IntMatrix::from_rows(g.rank, vec![r.exponent_sums(g.rank)]);
    let x = a.exponent_sums(g.rank);
    if !row_space_contains(&m, &x) {
        return Ok(ProbeReport {
            verdict: ProbeVerdict::Embedded,
            evidence: format!("exponent vector {x:?} is not in the row space of the relator exponents"),
        });
    }
    if let Some(perms) = &certs.permutations {
        let oracle = WordProblemOracle::finite_quotient(g.rank, vec![r.clone()], perms.clone())?;
        if oracle.decide(a) == Membership::No {
            return Ok(ProbeReport {
                verdict: ProbeVerdict::Embedded,
                evidence: "non-trivial image in the supplied permutation quotient".into(),
            });
        }
    }
    let (k, m) = certs.search.unwrap_or((4, 4));
    let oracle = WordProblemOracle::bounded_search(g.rank, vec![r.clone()], k, m);
    if oracle.decide(a) == Membership::Yes {
        return Ok(ProbeReport {
            verdict: ProbeVerdict::Refuted,
            evidence: format!("{a} is a product of at most {k} conjugates of the relator"),
        });
    }
    Ok(ProbeReport { verdict: ProbeVerdict::Unknown, evidence: "no certificate found".into() })
}
