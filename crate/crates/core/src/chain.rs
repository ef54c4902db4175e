//! Integer linear algebra and the descending subgroup chain `F₀ ⊇ … ⊇ F_ν`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::stallings::{build_and_fold, is_free_basis, is_member, SubgroupGraph};
use crate::trees::{glue_set, spanned_subtree, FiniteSubtree, GlueMode, TreeModel};
use crate::words::{are_conjugate, centralizer_generator, Word};

/// A dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, entries: vec![vec![0; cols]; rows] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<i64>>) -> IntMatrix {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, entries: rows }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i][j] += a * other.entries[k][j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j][i] = self.entries[i][j];
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, x: &[i64]) -> Vec<i64> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| x[i] * self.entries[i][j]).sum()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.entries {
            row.swap(a, b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i64) {
        for j in 0..self.cols {
            let v = self.entries[src][j];
            self.entries[dst][j] += q * v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i64) {
        for row in &mut self.entries {
            row[dst] += q * row[src];
        }
    }
}

/// `u · m · v = d` with `d` diagonal, `d₁ | d₂ | …`, and `u`, `v` unimodular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diagonal: Vec<i64>,
    pub rank: usize,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        'pivot: loop {
            let Some((pi, pj)) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| d.entries[i][j] != 0)
                .min_by_key(|&(i, j)| d.entries[i][j].abs())
            else {
                break 'pivot;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = d.entries[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = d.entries[i][t] / p;
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                dirty |= d.entries[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = d.entries[t][j] / p;
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                dirty |= d.entries[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d.entries[i][j] % p != 0));
            match bad {
                Some(i) => {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break 'pivot,
            }
        }
        if t < rows && d.entries[t][t] < 0 {
            for j in 0..cols {
                d.entries[t][j] = -d.entries[t][j];
            }
            for j in 0..rows {
                u.entries[t][j] = -u.entries[t][j];
            }
        }
    }
    let diagonal: Vec<i64> = (0..rows.min(cols)).map(|i| d.entries[i][i]).collect();
    let rank = diagonal.iter().filter(|x| **x != 0).count();
    SmithForm { d, u, v, diagonal, rank }
}

/// Whether the row vector `x` is an integer combination of the rows of `m`.
pub fn row_space_contains(m: &IntMatrix, x: &[i64]) -> bool {
    let s = smith_normal_form(m);
    let y = s.v.apply_row(x);
    y.iter().enumerate().all(|(i, &yi)| if i < s.rank { yi % s.diagonal[i] == 0 } else { yi == 0 })
}

/// Relator exponent sums over a subgroup basis, with their Smith form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianizationData {
    pub matrix: IntMatrix,
    pub smith: SmithForm,
}

impl AbelianizationData {
    /// Free rank of the cokernel.
    pub fn free_rank(&self) -> usize {
        self.matrix.cols - self.smith.rank
    }

    /// Non-unit invariant factors of the cokernel.
    pub fn torsion(&self) -> Vec<i64> {
        self.smith.diagonal.iter().copied().filter(|d| *d > 1).collect()
    }

    /// Trivial abelianized quotient.
    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.torsion().is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicQuotient {
    pub infinite_cyclic_quotient: bool,
    /// Images of the folded basis elements under a surjection onto ℤ.
    pub witness: Option<Vec<i64>>,
    pub basis: Vec<Word>,
    pub abelianization: AbelianizationData,
}

/// Decides whether `⟨gens⟩ / ⟨⟨S⟩⟩` maps onto ℤ.
pub fn has_infinite_cyclic_quotient(gens: &[Word], s: &[Word]) -> Result<CyclicQuotient> {
    let graph = build_and_fold(gens);
    quotient_over(&graph, s)
}

fn quotient_over(graph: &SubgroupGraph, s: &[Word]) -> Result<CyclicQuotient> {
    let k = graph.basis().len();
    let mut rows = Vec::new();
    for x in s {
        match is_member(x, graph) {
            Some(e) => rows.push(e.exponent_sums(k)),
            None => return precondition(format!("{x} does not lie in the subgroup")),
        }
    }
    let matrix = IntMatrix::from_rows(k, rows);
    let smith = smith_normal_form(&matrix);
    let infinite = smith.rank < k;
    let witness = infinite.then(|| {
        let mut h: Vec<i64> = (0..k).map(|i| smith.v.entries[i][smith.rank]).collect();
        if h.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
            h.iter_mut().for_each(|x| *x = -*x);
        }
        h
    });
    Ok(CyclicQuotient {
        infinite_cyclic_quotient: infinite,
        witness,
        basis: graph.basis().to_vec(),
        abelianization: AbelianizationData { matrix, smith },
    })
}

/// A subgroup of the ambient free group that supports membership.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupHandle {
    FullGroup { rank: usize },
    Folded(SubgroupGraph),
    /// Kernel of `hom` (images of the parent's basis) inside the parent.
    Kernel { parent: SubgroupGraph, hom: Vec<i64> },
}

impl SubgroupHandle {
    pub fn contains(&self, w: &Word) -> bool {
        match self {
            SubgroupHandle::FullGroup { rank } => w.check_rank(*rank).is_ok(),
            SubgroupHandle::Folded(g) => g.contains(w),
            SubgroupHandle::Kernel { parent, hom } => is_member(w, parent).is_some_and(|e| {
                e.0.iter().map(|&(i, s)| hom[i] * i64::from(s)).sum::<i64>() == 0
            }),
        }
    }

    pub fn kernel(parent: SubgroupGraph, hom: Vec<i64>) -> Result<SubgroupHandle> {
        if hom.len() != parent.basis().len() {
            return Err(Error::InvalidInput("hom length differs from the parent basis".into()));
        }
        if hom.iter().fold(0i64, |g, &x| gcd(g, x.abs())) != 1 {
            return Err(Error::InvalidInput("hom is not onto ℤ".into()));
        }
        Ok(SubgroupHandle::Kernel { parent, hom })
    }

    pub fn graph(&self) -> Option<&SubgroupGraph> {
        match self {
            SubgroupHandle::Folded(g) => Some(g),
            _ => None,
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `H† = ⟨S⁺ ∩ H⟩`.
pub fn dagger(h: &SubgroupHandle, s_plus: &[Word]) -> SubgroupHandle {
    let members: Vec<Word> = s_plus.iter().filter(|s| h.contains(s)).cloned().collect();
    SubgroupHandle::Folded(build_and_fold(&members))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub index: usize,
    pub chose_dagger: bool,
    pub hom: Option<Vec<i64>>,
    /// `S⁺ ∩ F_index`.
    pub s_plus_members: Vec<Word>,
    pub handle: SubgroupHandle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub rank: usize,
    pub s: Vec<Word>,
    pub phi: Vec<Word>,
    pub y: FiniteSubtree,
    /// `glue(F, EY)` including the identity.
    pub glue_edges: Vec<Word>,
    /// `glue(F, Y)`, which contains `S⁺`.
    pub glue_vertices: Vec<Word>,
    pub s_plus: Vec<Word>,
    pub nu: usize,
    pub steps: Vec<ChainStep>,
    pub final_basis: Vec<Word>,
    pub final_abelianization: AbelianizationData,
}

impl ChainReport {
    pub fn final_handle(&self) -> &SubgroupHandle {
        &self.steps.last().expect("a chain has at least one step").handle
    }

    pub fn final_graph(&self) -> &SubgroupGraph {
        self.final_handle().graph().expect("the last step of a chain is a dagger")
    }
}

/// Runs the chain for `S`, `Φ` on a Cayley tree, based at the identity.
///
/// `S⁺` omits the identity: it contributes nothing to any dagger and would
/// only lengthen the chain.
pub fn build_chain(model: &TreeModel, s: &[Word], phi: &[Word]) -> Result<ChainReport> {
    if !model.is_cayley() {
        return Err(Error::OutOfScope("chains are built on Cayley trees only".into()));
    }
    let rank = model.rank();
    for w in s.iter().chain(phi) {
        w.check_rank(rank)?;
    }
    let s_phi: Vec<Word> = s.iter().chain(phi).cloned().collect();
    let hyp = has_infinite_cyclic_quotient(&s_phi, s)?;
    if hyp.infinite_cyclic_quotient {
        return precondition("⟨S ∪ Φ⟩/⟨⟨S⟩⟩ has an infinite cyclic quotient");
    }
    let y = spanned_subtree(model, &s_phi)?;
    let glue_edges: BTreeSet<Word> = match glue_set(model, &y, GlueMode::Edges) {
        Ok(g) => g,
        Err(Error::DegenerateInput(_)) => BTreeSet::new(),
        Err(e) => return Err(e),
    };
    let glue_vertices = glue_set(model, &y, GlueMode::Vertices)?;
    let mut s_plus: Vec<Word> = Vec::new();
    for w in s.iter().chain(phi).chain(glue_edges.iter()) {
        if !w.is_identity() && !s_plus.contains(w) {
            s_plus.push(w.clone());
        }
    }
    let nu = s_plus.len() + 1;
    let mut current = SubgroupHandle::FullGroup { rank };
    let mut members: Vec<Word> = s_plus.clone();
    let mut steps = Vec::with_capacity(nu);
    let mut shrinking = 0;
    for n in 0..nu {
        let dag = dagger(&current, &s_plus);
        let dag_graph = dag.graph().expect("daggers are folded").clone();
        let q = quotient_over(&dag_graph, s)?;
        let (handle, hom) = match q.witness {
            None => (dag, None),
            Some(h) => (SubgroupHandle::kernel(dag_graph, h.clone())?, Some(h)),
        };
        let next: Vec<Word> = s_plus.iter().filter(|x| handle.contains(x)).cloned().collect();
        if next.len() < members.len() {
            shrinking += 1;
        }
        members = next;
        steps.push(ChainStep {
            index: n + 1,
            chose_dagger: hom.is_none(),
            hom,
            s_plus_members: members.clone(),
            handle: handle.clone(),
        });
        current = handle;
    }
    let last = steps.last().expect("nu ≥ 1");
    assert!(last.chose_dagger, "the final step of the chain must be a dagger step");
    let final_graph = last.handle.graph().expect("folded").clone();
    assert_eq!(build_and_fold(&last.s_plus_members), final_graph, "F_ν = ⟨S⁺ ∩ F_ν⟩");
    assert!(s_phi.iter().all(|w| final_graph.contains(w)), "S ∪ Φ ⊆ F_ν");
    assert!(shrinking <= s_plus.len(), "too many shrinking steps");
    let final_q = quotient_over(&final_graph, s)?;
    assert!(!final_q.infinite_cyclic_quotient, "F_ν/⟨⟨S⟩⟩ has no infinite cyclic quotient");
    Ok(ChainReport {
        rank,
        s: s.to_vec(),
        phi: phi.to_vec(),
        y,
        glue_edges: glue_edges.into_iter().collect(),
        glue_vertices: glue_vertices.into_iter().collect(),
        s_plus,
        nu,
        final_basis: final_graph.basis().to_vec(),
        final_abelianization: final_q.abelianization,
        steps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generation {
    /// Every basis element of the subgroup lies in the span of the transversal.
    Exact,
    /// Generated once conjugates by subgroup words of length ≤ bound are added.
    UpToBound(usize),
    Unverified { bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BottomVerdict {
    pub transversal: Vec<Word>,
    pub independent: bool,
    pub generation: Generation,
    pub free_action: String,
    pub verified: bool,
}

/// Bound on conjugator powers and word lengths used by the bottom checks.
pub const BOTTOM_BOUND: usize = 3;

/// Some `h ∈ H` with `h x h⁻¹ = y`, searching conjugators `u·c^k` for
/// `|k| ≤ bound`, where `c` generates the centralizer of `x`.
pub fn subgroup_conjugator(x: &Word, y: &Word, h: &SubgroupGraph, bound: usize) -> Option<Word> {
    let u = are_conjugate(x, y)?;
    if x.is_identity() {
        return Some(Word::identity());
    }
    let c = centralizer_generator(x).expect("non-trivial");
    let b = bound as i64;
    (-b..=b).map(|k| u.mul(&c.pow(k))).find(|cand| h.contains(cand))
}

/// Checks that `S`, reduced to one element per `F_ν`-conjugacy class, is a
/// free basis of `F_ν`.
pub fn verify_bottom(report: &ChainReport) -> Result<BottomVerdict> {
    let h = report.final_graph();
    let bound = BOTTOM_BOUND;
    let mut transversal: Vec<Word> = Vec::new();
    for s in &report.s {
        if s.is_identity() {
            continue;
        }
        if !transversal.iter().any(|t| subgroup_conjugator(t, s, h, bound + h.vertex_count()).is_some()) {
            transversal.push(s.clone());
        }
    }
    let independent = is_free_basis(&transversal)?;
    let span = build_and_fold(&transversal);
    let generation = if h.basis().iter().all(|b| span.contains(b)) {
        Generation::Exact
    } else {
        let words = subgroup_words(h.basis(), bound);
        let conj: Vec<Word> = transversal.iter().flat_map(|t| words.iter().map(move |u| t.conjugate_by(u))).collect();
        let wide = build_and_fold(&conj);
        if h.basis().iter().all(|b| wide.contains(b)) {
            Generation::UpToBound(bound)
        } else {
            Generation::Unverified { bound }
        }
    };
    let verified = independent && generation == Generation::Exact;
    Ok(BottomVerdict {
        transversal,
        independent,
        generation,
        free_action: "automatic: the free group acts freely on its Cayley tree".into(),
        verified,
    })
}

/// Reduced products of at most `len` basis letters.
fn subgroup_words(basis: &[Word], len: usize) -> Vec<Word> {
    let mut letters: Vec<Word> = basis.to_vec();
    letters.extend(basis.iter().map(Word::inverse));
    let mut out: BTreeSet<Word> = BTreeSet::from([Word::identity()]);
    let mut layer = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                let x = w.mul(l);
                if out.insert(x.clone()) {
                    next.push(x);
                }
            }
        }
        layer = next;
    }
    out.into_iter().collect()
}
