//! Stallings graphs of finitely generated subgroups of a free group.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::words::{Generator, Letter, Word};

/// A labelled edge `(source, generator, target)`.
pub type Edge = (usize, Generator, usize);

/// A product of basis elements, each `(index, ±1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisExpression(pub Vec<(usize, i8)>);

impl BasisExpression {
    pub fn evaluate(&self, basis: &[Word]) -> Word {
        let mut out = Word::identity();
        for &(i, s) in &self.0 {
            out = out.mul(&basis[i].pow(i64::from(s)));
        }
        out
    }

    /// Exponent sum of each basis element.
    pub fn exponent_sums(&self, basis_len: usize) -> Vec<i64> {
        let mut v = vec![0; basis_len];
        for &(i, s) in &self.0 {
            v[i] += i64::from(s);
        }
        v
    }
}

/// A subgroup graph with base vertex 0. Folded graphs are pruned and
/// renumbered in breadth-first order, so equal subgroups give equal graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    folded: bool,
    out: Vec<BTreeMap<Letter, usize>>,
    prefixes: Vec<Word>,
    edge_basis: HashMap<Edge, usize>,
    basis: Vec<Word>,
}

/// Disjoint-set forest with path halving.
struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

impl SubgroupGraph {
    /// The bouquet of petals spelling each generator, not yet folded.
    pub fn unfolded(generators: &[Word]) -> SubgroupGraph {
        let mut edges = Vec::new();
        let mut vertex_count = 1;
        for w in generators.iter().filter(|w| !w.is_identity()) {
            let mut cur = 0;
            let n = w.len();
            for (i, l) in w.letters().iter().enumerate() {
                let next = if i + 1 == n {
                    0
                } else {
                    vertex_count += 1;
                    vertex_count - 1
                };
                if l.inverse {
                    edges.push((next, l.gen, cur));
                } else {
                    edges.push((cur, l.gen, next));
                }
                cur = next;
            }
        }
        SubgroupGraph::from_edges(vertex_count, edges)
    }

    /// An unfolded graph on vertices `0..vertex_count` with base 0.
    pub fn from_edges(vertex_count: usize, edges: Vec<Edge>) -> SubgroupGraph {
        SubgroupGraph {
            vertex_count: vertex_count.max(1),
            edges,
            folded: false,
            out: Vec::new(),
            prefixes: Vec::new(),
            edge_basis: HashMap::new(),
            basis: Vec::new(),
        }
    }

    /// Folds, prunes hanging trees away from the base, and renumbers.
    pub fn fold(&self) -> Result<SubgroupGraph> {
        let n = self.vertex_count;
        if let Some(e) = self.edges.iter().find(|e| e.0 >= n || e.2 >= n) {
            return invalid(format!("edge {e:?} leaves the vertex range 0..{n}"));
        }
        let mut uf = UnionFind((0..n).collect());
        let mut adj: Vec<Vec<(Letter, usize)>> = vec![Vec::new(); n];
        for &(s, g, t) in &self.edges {
            adj[s].push((Letter { gen: g, inverse: false }, t));
            adj[t].push((Letter { gen: g, inverse: true }, s));
        }
        let mut stack: Vec<usize> = (0..n).rev().collect();
        while let Some(v0) = stack.pop() {
            let v = uf.find(v0);
            let mut seen: HashMap<Letter, usize> = HashMap::new();
            let mut clash = None;
            for i in 0..adj[v].len() {
                let (l, t) = adj[v][i];
                let t = uf.find(t);
                match seen.get(&l) {
                    Some(&t2) if t2 != t => {
                        clash = Some((t.min(t2), t.max(t2)));
                        break;
                    }
                    _ => {
                        seen.insert(l, t);
                    }
                }
            }
            if let Some((keep, gone)) = clash {
                uf.0[gone] = keep;
                let moved = std::mem::take(&mut adj[gone]);
                adj[keep].extend(moved);
                let keep = uf.find(keep);
                let neighbours: Vec<usize> = adj[keep].iter().map(|&(_, t)| t).collect();
                stack.extend(neighbours);
                stack.push(keep);
                stack.push(v);
            }
        }
        let mut edges: BTreeSet<Edge> = BTreeSet::new();
        for v in 0..n {
            if uf.find(v) != v {
                continue;
            }
            for &(l, t) in &adj[v] {
                let t = uf.find(t);
                if l.inverse {
                    edges.insert((t, l.gen, v));
                } else {
                    edges.insert((v, l.gen, t));
                }
            }
        }
        let base = uf.find(0);
        prune(base, &mut edges);
        Ok(renumber(base, &edges))
    }

    pub fn is_folded(&self) -> bool {
        self.folded
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Free basis read off the non-tree edges of the breadth-first tree.
    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    /// Reduced path label from the base to `v` in the spanning tree.
    pub fn tree_path(&self, v: usize) -> &Word {
        &self.prefixes[v]
    }

    /// Follows `w` from `start`; `None` if some letter has no edge.
    pub fn walk(&self, start: usize, w: &Word) -> Option<usize> {
        let mut v = start;
        for l in w.letters() {
            v = *self.out.get(v)?.get(l)?;
        }
        Some(v)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.walk(0, w) == Some(0)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph subgroup {\n  node [shape=circle];\n");
        for v in 0..self.vertex_count {
            if v == 0 {
                s.push_str("  0 [shape=doublecircle];\n");
            } else {
                s.push_str(&format!("  {v};\n"));
            }
        }
        for &(a, g, b) in &self.edges {
            s.push_str(&format!("  {a} -> {b} [label=\"{}\"];\n", g.name()));
        }
        s.push_str("}\n");
        s
    }
}

fn prune(base: usize, edges: &mut BTreeSet<Edge>) {
    loop {
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for &(a, _, b) in edges.iter() {
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        let leaves: BTreeSet<usize> =
            degree.iter().filter(|&(&v, &d)| v != base && d == 1).map(|(&v, _)| v).collect();
        if leaves.is_empty() {
            return;
        }
        edges.retain(|e| !leaves.contains(&e.0) && !leaves.contains(&e.2));
    }
}

fn renumber(base: usize, edges: &BTreeSet<Edge>) -> SubgroupGraph {
    let mut adj: HashMap<usize, BTreeMap<Letter, usize>> = HashMap::new();
    for &(a, g, b) in edges {
        adj.entry(a).or_default().insert(Letter { gen: g, inverse: false }, b);
        adj.entry(b).or_default().insert(Letter { gen: g, inverse: true }, a);
    }
    let mut ids: HashMap<usize, usize> = HashMap::from([(base, 0)]);
    let mut prefixes = vec![Word::identity()];
    let mut tree: BTreeSet<Edge> = BTreeSet::new();
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        let vid = ids[&v];
        for (&l, &t) in adj.get(&v).into_iter().flatten() {
            if ids.contains_key(&t) {
                continue;
            }
            let tid = prefixes.len();
            ids.insert(t, tid);
            prefixes.push(prefixes[vid].mul(&Word::from_letters([l])));
            tree.insert(if l.inverse { (tid, l.gen, vid) } else { (vid, l.gen, tid) });
            queue.push_back(t);
        }
    }
    let mut new_edges: Vec<Edge> = edges.iter().map(|&(a, g, b)| (ids[&a], g, ids[&b])).collect();
    new_edges.sort();
    let vertex_count = prefixes.len();
    let mut out = vec![BTreeMap::new(); vertex_count];
    let mut edge_basis = HashMap::new();
    let mut basis = Vec::new();
    for &(a, g, b) in &new_edges {
        out[a].insert(Letter { gen: g, inverse: false }, b);
        out[b].insert(Letter { gen: g, inverse: true }, a);
        if !tree.contains(&(a, g, b)) {
            edge_basis.insert((a, g, b), basis.len());
            basis.push(Word::product([&prefixes[a], &Word::generator(g.0), &prefixes[b].inverse()]));
        }
    }
    SubgroupGraph { vertex_count, edges: new_edges, folded: true, out, prefixes, edge_basis, basis }
}

/// The folded graph of `⟨generators⟩`.
pub fn build_and_fold(generators: &[Word]) -> SubgroupGraph {
    SubgroupGraph::unfolded(generators).fold().expect("petal graphs are well formed")
}

/// Rank of the subgroup represented by a folded graph.
pub fn graph_rank(g: &SubgroupGraph) -> Result<usize> {
    if !g.folded {
        return Err(Error::InvalidState("graph_rank needs a folded graph".into()));
    }
    Ok(g.edges.len() + 1 - g.vertex_count)
}

/// Expresses `w` over the graph's basis when it labels a base loop.
pub fn is_member(w: &Word, g: &SubgroupGraph) -> Option<BasisExpression> {
    let mut v = 0;
    let mut expr = Vec::new();
    for l in w.letters() {
        let t = *g.out.get(v)?.get(l)?;
        let edge = if l.inverse { (t, l.gen, v) } else { (v, l.gen, t) };
        if let Some(&i) = g.edge_basis.get(&edge) {
            expr.push((i, if l.inverse { -1 } else { 1 }));
        }
        v = t;
    }
    (v == 0).then_some(BasisExpression(expr))
}

/// Whether `candidates` freely generate the subgroup they span.
pub fn is_free_basis(candidates: &[Word]) -> Result<bool> {
    if candidates.iter().any(Word::is_identity) {
        return invalid("the identity cannot belong to a free basis");
    }
    Ok(graph_rank(&build_and_fold(candidates))? == candidates.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisReport {
    pub words: Vec<Word>,
    pub rank: usize,
    pub free_basis: bool,
    /// A free basis of the span, read off the folded graph.
    pub basis: Vec<Word>,
}

pub fn basis_report(words: &[Word]) -> Result<BasisReport> {
    let free_basis = is_free_basis(words)?;
    let g = build_and_fold(words);
    Ok(BasisReport { words: words.to_vec(), rank: graph_rank(&g)?, free_basis, basis: g.basis().to_vec() })
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: usize,
    edges: Vec<(usize, String, usize)>,
    basis: Vec<Word>,
}

impl Serialize for SubgroupGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|&(a, g, b)| (a, g.name(), b)).collect(),
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubgroupGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<SubgroupGraph, D::Error> {
        use serde::de::Error as _;
        let repr = GraphRepr::deserialize(d)?;
        let edges = repr
            .edges
            .iter()
            .map(|(a, g, b)| Generator::parse(g).map(|g| (*a, g, *b)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        SubgroupGraph::from_edges(repr.vertices, edges).fold().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_word, seeded_rng};
    use crate::words::enumerate_ball;
    use rand::seq::SliceRandom;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn ws(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn fold_examples() {
        let g = build_and_fold(&ws(&["a"]));
        assert_eq!((g.vertex_count(), g.edges().len()), (1, 1));
        assert_eq!(graph_rank(&g).unwrap(), 1);
        let g = build_and_fold(&[]);
        assert_eq!((g.vertex_count(), graph_rank(&g).unwrap()), (1, 0));
        assert_eq!(graph_rank(&build_and_fold(&ws(&["a", "a"]))).unwrap(), 1);
        assert_eq!(graph_rank(&build_and_fold(&ws(&["a", "Bab"]))).unwrap(), 2);
        assert_eq!(graph_rank(&build_and_fold(&ws(&["a", "aa"]))).unwrap(), 1);
    }

    #[test]
    fn unfolded_rank_is_rejected() {
        let g = SubgroupGraph::unfolded(&ws(&["ab"]));
        assert!(matches!(graph_rank(&g), Err(Error::InvalidState(_))));
    }

    #[test]
    fn membership_examples() {
        let ga = build_and_fold(&ws(&["a"]));
        assert_eq!(is_member(&w("a"), &ga), Some(BasisExpression(vec![(0, 1)])));
        assert_eq!(is_member(&w("b"), &ga), None);
        let g = build_and_fold(&ws(&["a", "Bab"]));
        let e = is_member(&w("aa"), &g).unwrap();
        assert_eq!(e.evaluate(g.basis()), w("aa"));
        assert_eq!(e.exponent_sums(g.basis().len()).iter().sum::<i64>(), 2);
        assert_eq!(g.basis().len(), 2);
        let ia = g.basis().iter().position(|x| *x == w("a")).unwrap();
        assert_eq!(e, BasisExpression(vec![(ia, 1), (ia, 1)]));
    }

    #[test]
    fn free_basis_examples() {
        assert!(is_free_basis(&ws(&["a", "b"])).unwrap());
        assert!(!is_free_basis(&ws(&["a", "aa"])).unwrap());
        let comm = w("abAB");
        let mut conj = Vec::new();
        for i in 0..=2 {
            for j in 0..=2 {
                let t = Word::generator(0).pow(i).mul(&Word::generator(1).pow(j));
                conj.push(comm.conjugate_by(&t));
            }
        }
        assert!(is_free_basis(&conj).unwrap());
        assert!(matches!(is_free_basis(&[w("a"), Word::identity()]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn fold_is_confluent() {
        let mut rng = seeded_rng(21);
        for _ in 0..5 {
            let gens: Vec<Word> = (0..4).map(|_| random_word(&mut rng, 2, 7)).collect();
            let reference = build_and_fold(&gens);
            for _ in 0..20 {
                let mut shuffled = gens.clone();
                shuffled.shuffle(&mut rng);
                let shuffled: Vec<Word> =
                    shuffled.into_iter().map(|x| if rand::Rng::gen_bool(&mut rng, 0.5) { x.inverse() } else { x }).collect();
                assert_eq!(build_and_fold(&shuffled), reference);
            }
        }
    }

    /// All reduced words of length ≤ `max` labelling base loops, by DFS on the graph.
    fn loops_up_to(g: &SubgroupGraph, max: usize) -> BTreeSet<Word> {
        fn go(g: &SubgroupGraph, v: usize, path: &mut Vec<Letter>, max: usize, out: &mut BTreeSet<Word>) {
            if v == 0 {
                out.insert(Word::from_letters(path.iter().copied()));
            }
            if path.len() == max {
                return;
            }
            for (&l, &t) in &g.out[v] {
                if path.last() == Some(&l.inv()) {
                    continue;
                }
                path.push(l);
                go(g, t, path, max, out);
                path.pop();
            }
        }
        let mut out = BTreeSet::new();
        go(g, 0, &mut Vec::new(), max, &mut out);
        out
    }

    #[test]
    fn membership_soundness() {
        let gens = ws(&["ab", "bbA", "aBaB"]);
        let g = build_and_fold(&gens);
        let basis = g.basis().to_vec();
        let mut letters: Vec<Word> = basis.clone();
        letters.extend(basis.iter().map(Word::inverse));
        let mut products = vec![Word::identity()];
        for _ in 0..4 {
            let prev = products.clone();
            for p in &prev {
                for x in &letters {
                    products.push(p.mul(x));
                }
            }
        }
        for p in &products {
            let e = is_member(p, &g).expect("product of basis elements");
            assert_eq!(e.evaluate(&basis), *p);
        }
        let loops = loops_up_to(&g, 8);
        let mut rng = seeded_rng(22);
        let mut rejected = 0;
        while rejected < 100 {
            let x = random_word(&mut rng, 2, 8);
            if is_member(&x, &g).is_none() {
                assert!(!loops.contains(&x));
                rejected += 1;
            } else {
                assert!(loops.contains(&x));
            }
        }
    }

    #[test]
    fn subsets_of_a_basis_are_bases() {
        let basis: Vec<Word> = (-2..=2).map(|j| w("a").conjugate_by(&Word::generator(1).pow(j))).collect();
        assert!(is_free_basis(&basis).unwrap());
        for mask in 1u32..(1 << basis.len()) {
            let subset: Vec<Word> =
                basis.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, x)| x.clone()).collect();
            assert!(is_free_basis(&subset).unwrap());
        }
    }

    #[test]
    fn full_group_from_ball() {
        let g = build_and_fold(&enumerate_ball(2, 2));
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(graph_rank(&g).unwrap(), 2);
    }

    #[test]
    fn serde_round_trip() {
        let g = build_and_fold(&ws(&["ab", "Bab", "aaB"]));
        let json = serde_json::to_string(&g).unwrap();
        let back: SubgroupGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn dot_output() {
        let g = build_and_fold(&ws(&["ab"]));
        assert_eq!(
            g.to_dot(),
            "digraph subgroup {\n  node [shape=circle];\n  0 [shape=doublecircle];\n  1;\n  0 -> 1 [label=\"a\"];\n  1 -> 0 [label=\"b\"];\n}\n"
        );
    }
}
