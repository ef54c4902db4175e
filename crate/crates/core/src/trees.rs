//! Trees with a free edge action, generated on demand from a graph of groups.
//!
//! A concrete edge is a pair `(g, e)`: the translate by `g` of the lift of
//! the quotient edge `e`. It joins `g·G_ι(e)` to `g·t_e·G_τ(e)`, where `t_e`
//! is the stable letter of `e` (trivial on `Y₀`). Paths are computed by
//! walking a word letter by letter and cancelling backtracks.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gog::{Factor, GraphOfGroups};
use crate::words::{Generator, Word};

/// An element of `F\ET`, indexed like the edges of the quotient graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeOrbit(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Cayley { rank: usize },
    FreeProduct { left: usize, right: usize },
    Gog(GraphOfGroups),
}

/// An F-tree model together with its quotient graph of groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ModelKind", into = "ModelKind")]
pub struct TreeModel {
    kind: ModelKind,
    gog: GraphOfGroups,
}

impl From<ModelKind> for TreeModel {
    fn from(kind: ModelKind) -> TreeModel {
        let gog = match &kind {
            ModelKind::Cayley { rank } => GraphOfGroups::cayley(*rank),
            ModelKind::FreeProduct { left, right } => GraphOfGroups::free_product(*left, *right),
            ModelKind::Gog(g) => g.clone(),
        };
        TreeModel { kind, gog }
    }
}

impl From<TreeModel> for ModelKind {
    fn from(m: TreeModel) -> ModelKind {
        m.kind
    }
}

impl FromStr for TreeModel {
    type Err = Error;

    /// `cayley:N` or `freeproduct:L:R`.
    fn from_str(s: &str) -> Result<TreeModel> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad model {s:?}")));
        match parts[..] {
            ["cayley", n] => Ok(TreeModel::cayley(num(n)?)),
            ["freeproduct", l, r] => Ok(TreeModel::free_product(num(l)?, num(r)?)),
            _ => invalid(format!("unknown model {s:?}; expected cayley:N or freeproduct:L:R")),
        }
    }
}

impl TreeModel {
    pub fn cayley(rank: usize) -> TreeModel {
        ModelKind::Cayley { rank }.into()
    }

    pub fn free_product(left: usize, right: usize) -> TreeModel {
        ModelKind::FreeProduct { left, right }.into()
    }

    pub fn from_gog(g: GraphOfGroups) -> TreeModel {
        ModelKind::Gog(g).into()
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn gog(&self) -> &GraphOfGroups {
        &self.gog
    }

    pub fn is_cayley(&self) -> bool {
        matches!(self.kind, ModelKind::Cayley { .. })
    }

    /// Rank of the free group acting on the tree.
    pub fn rank(&self) -> usize {
        self.gog.rank()
    }

    pub fn orbit_count(&self) -> usize {
        self.gog.edges().len()
    }

    pub fn orbits(&self) -> Vec<EdgeOrbit> {
        (0..self.orbit_count()).map(EdgeOrbit).collect()
    }

    pub fn orbit_label(&self, o: EdgeOrbit) -> String {
        match self.kind {
            ModelKind::Cayley { .. } => Generator(o.0 as u32).name(),
            ModelKind::FreeProduct { .. } => "e".to_string(),
            ModelKind::Gog(_) => format!("e{}", o.0),
        }
    }

    /// Accepts an orbit label or a numeric index.
    pub fn parse_orbit(&self, s: &str) -> Result<EdgeOrbit> {
        let s = s.trim();
        let found = self
            .orbits()
            .into_iter()
            .find(|&o| self.orbit_label(o) == s)
            .or_else(|| s.parse::<usize>().ok().filter(|&i| i < self.orbit_count()).map(EdgeOrbit));
        found.ok_or_else(|| Error::InvalidInput(format!("unknown edge orbit {s:?}")))
    }

    fn vertex_type_count(&self) -> usize {
        self.gog.vertices().len()
    }

    /// Canonical vertex `coset·G_v` with the trailing `G_v` letters removed.
    pub fn vertex(&self, element: &Word, v: usize) -> ConcreteVertex {
        let gens = self.gog.vertex_generators(v);
        let letters = element.letters();
        let keep = letters.iter().rposition(|l| !gens.contains(&l.gen.0)).map_or(0, |i| i + 1);
        ConcreteVertex { coset: element.prefix(keep), vertex: v }
    }

    pub fn base_vertex(&self) -> ConcreteVertex {
        ConcreteVertex { coset: Word::identity(), vertex: 0 }
    }

    pub fn source(&self, e: &ConcreteEdge) -> ConcreteVertex {
        self.vertex(&e.element, self.gog.edges()[e.orbit.0].from)
    }

    pub fn target(&self, e: &ConcreteEdge) -> ConcreteVertex {
        let t = self.stable_word(e.orbit.0);
        self.vertex(&e.element.mul(&t), self.gog.edges()[e.orbit.0].to)
    }

    fn stable_word(&self, e: usize) -> Word {
        self.gog.stable_letter(e).map_or_else(Word::identity, Word::generator)
    }

    pub fn vertex_label(&self, v: &ConcreteVertex) -> String {
        let coset = if v.coset.is_identity() { "1".to_string() } else { v.coset.to_string() };
        if self.vertex_type_count() == 1 {
            coset
        } else {
            format!("{coset}.{}", self.gog.vertices()[v.vertex].name)
        }
    }

    /// The geodesic from the base vertex to `w` applied to it.
    pub fn geodesic(&self, w: &Word) -> Result<Vec<Step>> {
        w.check_rank(self.rank())?;
        let mut path: Vec<Step> = Vec::new();
        let push = |path: &mut Vec<Step>, element: &Word, orbit: usize, forward: bool| {
            let edge = ConcreteEdge { element: element.clone(), orbit: EdgeOrbit(orbit) };
            match path.last() {
                Some(last) if last.edge == edge && last.forward != forward => {
                    path.pop();
                }
                _ => path.push(Step { edge, forward }),
            }
        };
        let mut p = Word::identity();
        let mut at = 0usize;
        let travel = |path: &mut Vec<Step>, p: &Word, from: usize, to: usize| {
            for (e, fwd) in self.gog.tree_path(from, to) {
                push(path, p, e, fwd);
            }
        };
        for &l in w.letters() {
            let step = Word::from_letters([l]);
            match self.gog.factor_of(l.gen) {
                Factor::Vertex(v) => {
                    travel(&mut path, &p, at, v);
                    at = v;
                    p = p.mul(&step);
                }
                Factor::Stable(e) => {
                    let spec = &self.gog.edges()[e];
                    if l.inverse {
                        travel(&mut path, &p, at, spec.to);
                        p = p.mul(&step);
                        push(&mut path, &p, e, false);
                        at = spec.from;
                    } else {
                        travel(&mut path, &p, at, spec.from);
                        push(&mut path, &p, e, true);
                        p = p.mul(&step);
                        at = spec.to;
                    }
                }
            }
        }
        travel(&mut path, &p, at, 0);
        Ok(path)
    }

    /// Axis data of `r`, or `None` when `r` fixes a vertex.
    pub fn axis(&self, r: &Word) -> Result<Option<Axis>> {
        let path = self.geodesic(r)?;
        let n = path.len();
        let mut k = 0;
        while 2 * k < n {
            let head = &path[k];
            let tail = &path[n - 1 - k];
            if tail.forward == head.forward || tail.edge != head.edge.translate(r) {
                break;
            }
            k += 1;
        }
        if 2 * k >= n {
            return Ok(None);
        }
        Ok(Some(Axis { element: r.clone(), domain: path[k..n - k].to_vec() }))
    }

    fn hyperbolic_axis(&self, r: &Word) -> Result<Axis> {
        self.axis(r)?.ok_or_else(|| Error::PreconditionViolation(format!("{r} fixes a vertex of the tree")))
    }

    pub fn subtree_from_edges<I: IntoIterator<Item = ConcreteEdge>>(&self, edges: I) -> FiniteSubtree {
        let edges: BTreeSet<ConcreteEdge> = edges.into_iter().collect();
        let vertices = edges.iter().flat_map(|e| [self.source(e), self.target(e)]).collect();
        FiniteSubtree { edges, vertices }
    }

    pub fn subtree_dot(&self, part: &FiniteSubtree) -> String {
        let mut s = String::from("digraph subtree {\n  node [shape=circle];\n");
        for v in &part.vertices {
            let shape = if *v == self.base_vertex() { " [shape=doublecircle]" } else { "" };
            s.push_str(&format!("  \"{}\"{shape};\n", self.vertex_label(v)));
        }
        for e in &part.edges {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                self.vertex_label(&self.source(e)),
                self.vertex_label(&self.target(e)),
                self.orbit_label(e.orbit)
            ));
        }
        s.push_str("}\n");
        s
    }

    /// The quotient graph `F\T` with edges labelled by orbit.
    pub fn quotient_dot(&self) -> String {
        let mut s = String::from("digraph quotient {\n");
        for (i, v) in self.gog.vertices().iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"{}\"];\n", v.name));
        }
        for (i, e) in self.gog.edges().iter().enumerate() {
            let style = if e.in_tree { ", color=red" } else { "" };
            s.push_str(&format!("  v{} -> v{} [label=\"{}\"{style}];\n", e.from, e.to, self.orbit_label(EdgeOrbit(i))));
        }
        s.push_str("}\n");
        s
    }
}

/// The edge `(element, orbit)` of the tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConcreteEdge {
    pub element: Word,
    pub orbit: EdgeOrbit,
}

impl ConcreteEdge {
    pub fn translate(&self, f: &Word) -> ConcreteEdge {
        ConcreteEdge { element: f.mul(&self.element), orbit: self.orbit }
    }
}

impl fmt::Display for ConcreteEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = if self.element.is_identity() { "1".to_string() } else { self.element.to_string() };
        write!(f, "({g}, e{})", self.orbit.0)
    }
}

/// The vertex `coset·G_vertex`, `coset` carrying no trailing `G_vertex` letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConcreteVertex {
    pub coset: Word,
    pub vertex: usize,
}

/// An edge traversed forwards (source to target) or backwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub edge: ConcreteEdge,
    pub forward: bool,
}

/// One fundamental domain of the axis of `element`, starting at the point of
/// the axis nearest the base vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    pub element: Word,
    pub domain: Vec<Step>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSubtree {
    pub edges: BTreeSet<ConcreteEdge>,
    pub vertices: BTreeSet<ConcreteVertex>,
}

impl FiniteSubtree {
    /// Connected and acyclic as an abstract graph.
    pub fn is_tree(&self, model: &TreeModel) -> bool {
        if self.vertices.is_empty() {
            return self.edges.is_empty();
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return false;
        }
        let index: std::collections::BTreeMap<&ConcreteVertex, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (Some(&a), Some(&b)) = (index.get(&model.source(e)), index.get(&model.target(e))) else {
                return false;
            };
            let (a, b) = (find(&mut parent, a), find(&mut parent, b));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlueMode {
    Edges,
    Vertices,
}

pub fn fixes_vertex(model: &TreeModel, w: &Word) -> Result<bool> {
    Ok(model.axis(w)?.is_none())
}

/// The edge orbits met by the axis of `r`.
pub fn axis_footprint(model: &TreeModel, r: &Word) -> Result<BTreeSet<EdgeOrbit>> {
    Ok(model.hyperbolic_axis(r)?.domain.iter().map(|s| s.edge.orbit).collect())
}

pub fn translation_length(model: &TreeModel, r: &Word) -> Result<usize> {
    Ok(model.hyperbolic_axis(r)?.domain.len())
}

/// The smallest subtree containing the base vertex and its translates by
/// `elements`.
pub fn spanned_subtree(model: &TreeModel, elements: &[Word]) -> Result<FiniteSubtree> {
    let mut edges = BTreeSet::new();
    for g in elements {
        edges.extend(model.geodesic(g)?.into_iter().map(|s| s.edge));
    }
    let mut tree = model.subtree_from_edges(edges);
    tree.vertices.insert(model.base_vertex());
    Ok(tree)
}

/// `{f : f·part ∩ part ≠ ∅}` over edges or vertices of `part`.
pub fn glue_set(model: &TreeModel, part: &FiniteSubtree, mode: GlueMode) -> Result<BTreeSet<Word>> {
    let mut out = BTreeSet::new();
    match mode {
        GlueMode::Edges => {
            if part.edges.is_empty() {
                return Err(Error::DegenerateInput("glue set of an empty edge set".into()));
            }
            for x in &part.edges {
                for y in part.edges.iter().filter(|y| y.orbit == x.orbit) {
                    out.insert(y.element.mul(&x.element.inverse()));
                }
            }
        }
        GlueMode::Vertices => {
            if part.vertices.is_empty() {
                return Err(Error::DegenerateInput("glue set of an empty vertex set".into()));
            }
            for x in &part.vertices {
                if model.gog.vertices()[x.vertex].rank > 0 {
                    return Err(Error::OutOfScope(format!(
                        "vertex {} has a non-trivial stabilizer, so its glue set is infinite",
                        model.vertex_label(x)
                    )));
                }
                for y in part.vertices.iter().filter(|y| y.vertex == x.vertex) {
                    out.insert(y.coset.mul(&x.coset.inverse()));
                }
            }
        }
    }
    Ok(out)
}

/// `window` consecutive fundamental domains of the axis of `r`, centred on
/// the domain nearest the base vertex.
pub fn axis_segment(model: &TreeModel, r: &Word, window: usize) -> Result<FiniteSubtree> {
    let axis = model.hyperbolic_axis(r)?;
    let half = (window / 2) as i64;
    let mut edges = Vec::new();
    for j in -half..(window as i64 - half) {
        let shift = r.pow(j);
        edges.extend(axis.domain.iter().map(|s| s.edge.translate(&shift)));
    }
    Ok(model.subtree_from_edges(edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_cyclically_reduced, random_word, seeded_rng};
    use crate::words::{cyclic_core, enumerate_ball};
    use rand::Rng;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn edge(g: &str, o: usize) -> ConcreteEdge {
        ConcreteEdge { element: w(g), orbit: EdgeOrbit(o) }
    }

    #[test]
    fn vertex_fixing() {
        let c2 = TreeModel::cayley(2);
        let fp = TreeModel::free_product(1, 1);
        assert!(!fixes_vertex(&c2, &w("ab")).unwrap());
        assert!(fixes_vertex(&c2, &Word::identity()).unwrap());
        assert!(fixes_vertex(&fp, &w("a")).unwrap());
        assert!(fixes_vertex(&fp, &w("baB")).unwrap());
        assert!(!fixes_vertex(&fp, &w("ab")).unwrap());
    }

    #[test]
    fn footprints() {
        let c2 = TreeModel::cayley(2);
        let set = |v: &[usize]| v.iter().map(|&i| EdgeOrbit(i)).collect::<BTreeSet<_>>();
        assert_eq!(axis_footprint(&c2, &w("ab")).unwrap(), set(&[0, 1]));
        assert_eq!(axis_footprint(&c2, &w("aaa")).unwrap(), set(&[0]));
        assert!(matches!(axis_footprint(&c2, &Word::identity()), Err(Error::PreconditionViolation(_))));
        let mut rng = seeded_rng(41);
        for _ in 0..100 {
            let f = random_word(&mut rng, 2, 8);
            assert_eq!(axis_footprint(&c2, &w("ab").conjugate_by(&f)).unwrap(), set(&[0, 1]));
        }
    }

    #[test]
    fn cayley_footprint_is_cyclic_support() {
        let c3 = TreeModel::cayley(3);
        for x in enumerate_ball(3, 4).into_iter().skip(1) {
            let (core, _) = cyclic_core(&x);
            let support: BTreeSet<EdgeOrbit> = core.letters().iter().map(|l| EdgeOrbit(l.gen.0 as usize)).collect();
            assert_eq!(axis_footprint(&c3, &x).unwrap(), support);
            assert_eq!(translation_length(&c3, &x).unwrap(), core.len());
        }
    }

    #[test]
    fn footprint_power_invariance() {
        let c2 = TreeModel::cayley(2);
        for r in enumerate_ball(2, 5).into_iter().skip(1).filter(Word::is_cyclically_reduced) {
            let fp = axis_footprint(&c2, &r).unwrap();
            for n in [-2i64, -1, 1, 2, 3] {
                assert_eq!(axis_footprint(&c2, &r.pow(n)).unwrap(), fp, "{r}^{n}");
            }
        }
    }

    #[test]
    fn translation_lengths() {
        let c2 = TreeModel::cayley(2);
        assert_eq!(translation_length(&c2, &w("abA")).unwrap(), 1);
        assert_eq!(translation_length(&c2, &w("abab")).unwrap(), 4);
        let fp = TreeModel::free_product(1, 1);
        assert_eq!(translation_length(&fp, &w("ababb")).unwrap(), 4);
        assert_eq!(translation_length(&fp, &w("ab").conjugate_by(&w("ba"))).unwrap(), 2);
    }

    #[test]
    fn free_product_fixing_matches_normal_form() {
        let fp = TreeModel::free_product(1, 1);
        for x in enumerate_ball(2, 6) {
            let syllables = crate::gog::cyclic_syllable_length(fp.gog(), &x).unwrap();
            if syllables <= 4 {
                assert_eq!(fixes_vertex(&fp, &x).unwrap(), syllables <= 1, "{x}");
            }
        }
    }

    #[test]
    fn spanned_subtrees() {
        let c2 = TreeModel::cayley(2);
        let t = spanned_subtree(&c2, &[w("a")]).unwrap();
        assert_eq!(t.edges, BTreeSet::from([edge("1", 0)]));
        let t = spanned_subtree(&c2, &[w("ab")]).unwrap();
        assert_eq!(t.edges, BTreeSet::from([edge("1", 0), edge("a", 1)]));
        assert_eq!(t.vertices.len(), 3);
        assert!(t.is_tree(&c2));
        let t = spanned_subtree(&c2, &[]).unwrap();
        assert!(t.edges.is_empty());
        assert_eq!(t.vertices, BTreeSet::from([c2.base_vertex()]));
        let fp = TreeModel::free_product(2, 1);
        let t = spanned_subtree(&fp, &[w("acb"), w("ca"), w("b")]).unwrap();
        assert!(t.is_tree(&fp));
    }

    #[test]
    fn glue_sets() {
        let c2 = TreeModel::cayley(2);
        let single = c2.subtree_from_edges([edge("1", 0)]);
        assert_eq!(glue_set(&c2, &single, GlueMode::Edges).unwrap(), BTreeSet::from([Word::identity()]));
        let ya = spanned_subtree(&c2, &[w("a")]).unwrap();
        assert_eq!(glue_set(&c2, &ya, GlueMode::Vertices).unwrap(), BTreeSet::from([Word::identity(), w("a"), w("A")]));
        assert!(matches!(glue_set(&c2, &FiniteSubtree::default(), GlueMode::Edges), Err(Error::DegenerateInput(_))));
        let fp = TreeModel::free_product(1, 1);
        let y = spanned_subtree(&fp, &[w("ab")]).unwrap();
        assert!(matches!(glue_set(&fp, &y, GlueMode::Vertices), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn glue_sets_are_symmetric_and_match_brute_force() {
        let c2 = TreeModel::cayley(2);
        let mut rng = seeded_rng(42);
        let ball = enumerate_ball(2, 8);
        for _ in 0..10 {
            let elements: Vec<Word> = (0..rng.gen_range(1..3)).map(|_| random_word(&mut rng, 2, 4)).collect();
            let y = spanned_subtree(&c2, &elements).unwrap();
            if y.edges.is_empty() {
                continue;
            }
            let glue = glue_set(&c2, &y, GlueMode::Edges).unwrap();
            assert!(glue.contains(&Word::identity()));
            assert!(glue.iter().all(|f| glue.contains(&f.inverse())));
            let brute: BTreeSet<Word> = ball
                .iter()
                .filter(|f| y.edges.iter().any(|e| y.edges.contains(&e.translate(f))))
                .cloned()
                .collect();
            assert_eq!(glue, brute);
        }
    }

    #[test]
    fn axis_segments() {
        let c2 = TreeModel::cayley(2);
        assert_eq!(axis_segment(&c2, &w("ab"), 1).unwrap().edges.len(), 2);
        let seg = axis_segment(&c2, &w("ab"), 2).unwrap();
        assert_eq!(seg.edges.len(), 4);
        assert!(seg.is_tree(&c2));
        assert!(axis_segment(&c2, &w("ab"), 0).unwrap().edges.is_empty());
        let mut rng = seeded_rng(43);
        for _ in 0..30 {
            let r = random_cyclically_reduced(&mut rng, 2, 6).conjugate_by(&random_word(&mut rng, 2, 3));
            let seg = axis_segment(&c2, &r, 3).unwrap();
            assert_eq!(seg.edges.len(), 3 * translation_length(&c2, &r).unwrap());
            assert!(seg.is_tree(&c2));
        }
    }

    #[test]
    fn gog_tree_paths() {
        let json = r#"{"vertices":[{"name":"A","rank":1},{"name":"B","rank":1},{"name":"C","rank":1}],
            "edges":[{"from":0,"to":1,"in_tree":true},{"from":1,"to":2,"in_tree":true},{"from":2,"to":0,"in_tree":false}]}"#;
        let g: GraphOfGroups = serde_json::from_str(json).unwrap();
        let m = TreeModel::from_gog(g);
        assert_eq!(m.rank(), 4);
        assert_eq!(translation_length(&m, &w("ac")).unwrap(), 4);
        assert_eq!(translation_length(&m, &w("d")).unwrap(), 3);
        assert!(fixes_vertex(&m, &w("b")).unwrap());
        let t = spanned_subtree(&m, &[w("ac"), w("db"), w("cA")]).unwrap();
        assert!(t.is_tree(&m));
    }

    #[test]
    fn model_parsing_and_serde() {
        let m: TreeModel = "freeproduct:2:1".parse().unwrap();
        assert_eq!(m.rank(), 3);
        assert!("cayley".parse::<TreeModel>().is_err());
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<TreeModel>(&json).unwrap(), m);
        let c = TreeModel::cayley(2);
        assert_eq!(c.parse_orbit("b").unwrap(), EdgeOrbit(1));
        assert!(c.parse_orbit("c").is_err());
    }

    #[test]
    fn subtree_dot_is_stable() {
        let c2 = TreeModel::cayley(2);
        let t = spanned_subtree(&c2, &[w("ab")]).unwrap();
        assert_eq!(
            c2.subtree_dot(&t),
            "digraph subtree {\n  node [shape=circle];\n  \"1\" [shape=doublecircle];\n  \"a\";\n  \"ab\";\n  \"1\" -> \"a\" [label=\"a\"];\n  \"a\" -> \"ab\" [label=\"b\"];\n}\n"
        );
    }
}
