//! Word-problem oracles for `F/⟨⟨R⟩⟩` and finite windows of Cohen-Lyndon
//! bases, Whitehead subsets and kernel decompositions.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::chain::subgroup_conjugator;
use crate::error::{invalid, precondition, Error, Result};
use crate::perm::Perm;
use crate::stallings::{build_and_fold, graph_rank, is_free_basis};
use crate::words::{are_conjugate, cyclic_core, enumerate_ball, root, Generator, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum OracleKind {
    /// Exact on the whitelisted relators: a primitive letter, or a
    /// commutator of the two generators at rank 2.
    Abelianized,
    /// Dehn's algorithm for a C′(1/6) relator.
    Dehn,
    /// Products of at most `k` conjugates by words of length at most `m`.
    BoundedSearch { k: usize, m: usize },
    /// A permutation representation of the quotient.
    FiniteQuotient { images: Vec<Perm> },
}

/// Default bounds of the bounded-search oracle.
pub const DEFAULT_SEARCH: (usize, usize) = (4, 4);

/// Decides (or semi-decides) membership in the normal closure of `relators`.
#[derive(Debug)]
pub struct WordProblemOracle {
    rank: usize,
    relators: Vec<Word>,
    kind: OracleKind,
    /// Generator deleted by the primitive-letter case of the abelianized oracle.
    deleted: Option<u32>,
    products: OnceLock<ProductTable>,
}

impl Clone for WordProblemOracle {
    fn clone(&self) -> Self {
        WordProblemOracle {
            rank: self.rank,
            relators: self.relators.clone(),
            kind: self.kind.clone(),
            deleted: self.deleted,
            products: OnceLock::new(),
        }
    }
}

/// Products of relator conjugates, split for a meet-in-the-middle search.
#[derive(Debug)]
struct ProductTable {
    left: Vec<(Word, Vec<i64>)>,
    right: HashMap<Vec<i64>, HashSet<Word>>,
}

impl WordProblemOracle {
    pub fn abelianized(rank: usize, relator: &Word) -> Result<WordProblemOracle> {
        relator.check_rank(rank)?;
        let (core, _) = cyclic_core(relator);
        let deleted = match core.letters() {
            [l] => Some(l.gen.0),
            _ => None,
        };
        let commutator = rank == 2 && {
            let c: Word = "abAB".parse().expect("literal");
            are_conjugate(relator, &c).is_some() || are_conjugate(relator, &c.inverse()).is_some()
        };
        if deleted.is_none() && !commutator {
            return Err(Error::InvalidOracle(format!(
                "the abelianized oracle is only valid for a generator or [a,b] at rank 2, not {relator}"
            )));
        }
        Ok(WordProblemOracle::make(rank, vec![relator.clone()], OracleKind::Abelianized, deleted))
    }

    pub fn dehn(rank: usize, relator: &Word) -> Result<WordProblemOracle> {
        relator.check_rank(rank)?;
        let (core, _) = cyclic_core(relator);
        if core.is_identity() || !is_sixth(&core).holds {
            return Err(Error::InvalidOracle(format!("{relator} does not satisfy C'(1/6)")));
        }
        Ok(WordProblemOracle::make(rank, vec![core], OracleKind::Dehn, None))
    }

    pub fn bounded_search(rank: usize, relators: Vec<Word>, k: usize, m: usize) -> WordProblemOracle {
        WordProblemOracle::make(rank, relators, OracleKind::BoundedSearch { k, m }, None)
    }

    pub fn finite_quotient(rank: usize, relators: Vec<Word>, images: Vec<Perm>) -> Result<WordProblemOracle> {
        if images.len() != rank {
            return Err(Error::InvalidOracle(format!("need {rank} permutation images, got {}", images.len())));
        }
        if images.windows(2).any(|p| p[0].degree() != p[1].degree()) {
            return Err(Error::InvalidOracle("permutation images have different degrees".into()));
        }
        for r in &relators {
            if !Perm::evaluate(r, &images)?.is_identity() {
                return Err(Error::InvalidOracle(format!("the images do not satisfy the relator {r}")));
            }
        }
        Ok(WordProblemOracle::make(rank, relators, OracleKind::FiniteQuotient { images }, None))
    }

    fn make(rank: usize, relators: Vec<Word>, kind: OracleKind, deleted: Option<u32>) -> WordProblemOracle {
        WordProblemOracle { rank, relators, kind, deleted, products: OnceLock::new() }
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Whether some answer may be `Unknown`.
    pub fn is_complete(&self) -> bool {
        matches!(self.kind, OracleKind::Abelianized | OracleKind::Dehn)
    }

    pub fn decide(&self, w: &Word) -> Membership {
        if w.is_identity() {
            return Membership::Yes;
        }
        match &self.kind {
            OracleKind::Abelianized => {
                let inside = match self.deleted {
                    Some(g) => Word::from_letters(w.letters().iter().copied().filter(|l| l.gen.0 != g)).is_identity(),
                    None => w.exponent_sums(self.rank.max(w.max_generator().map_or(0, |g| g as usize + 1))).iter().all(|e| *e == 0),
                };
                if inside {
                    Membership::Yes
                } else {
                    Membership::No
                }
            }
            OracleKind::Dehn => {
                let reduced = dehn_reduce_unchecked(w, &self.relators[0]);
                if reduced.is_identity() {
                    Membership::Yes
                } else {
                    Membership::No
                }
            }
            OracleKind::BoundedSearch { k, m } => {
                if self.search(w, *k, *m) {
                    Membership::Yes
                } else {
                    Membership::Unknown
                }
            }
            OracleKind::FiniteQuotient { images } => match Perm::evaluate(w, images) {
                Ok(p) if !p.is_identity() => Membership::No,
                _ => Membership::Unknown,
            },
        }
    }

    fn search(&self, w: &Word, k: usize, m: usize) -> bool {
        if k == 0 || self.relators.is_empty() {
            return false;
        }
        let rank = self.rank.max(w.max_generator().map_or(0, |g| g as usize + 1));
        let ew = w.exponent_sums(rank);
        let er: Vec<Vec<i64>> = self.relators.iter().map(|r| r.exponent_sums(rank)).collect();
        if self.relators.len() == 1 {
            let e = &er[0];
            let feasible = (-(k as i64)..=k as i64).any(|c| ew.iter().zip(e).all(|(x, y)| *x == c * y));
            if !feasible {
                return false;
            }
        }
        let table = self.products.get_or_init(|| ProductTable::build(self.rank, &self.relators, k, m));
        table.left.iter().any(|(p, ep)| {
            let need: Vec<i64> = ew.iter().zip(ep).map(|(x, y)| x - y).collect();
            match table.right.get(&need) {
                Some(set) => set.contains(&p.inverse().mul(w)),
                None => false,
            }
        })
    }
}

impl ProductTable {
    fn build(rank: usize, relators: &[Word], k: usize, m: usize) -> ProductTable {
        let mut factors: BTreeSet<Word> = BTreeSet::new();
        for u in enumerate_ball(rank, m) {
            for r in relators {
                factors.insert(r.conjugate_by(&u));
                factors.insert(r.inverse().conjugate_by(&u));
            }
        }
        let factors: Vec<Word> = factors.into_iter().collect();
        let products = |n: usize| -> Vec<Word> {
            let mut all: HashSet<Word> = HashSet::from([Word::identity()]);
            let mut layer = vec![Word::identity()];
            for _ in 0..n {
                let mut next = Vec::new();
                for p in &layer {
                    for f in &factors {
                        let x = p.mul(f);
                        if all.insert(x.clone()) {
                            next.push(x);
                        }
                    }
                }
                layer = next;
            }
            let mut v: Vec<Word> = all.into_iter().collect();
            v.sort();
            v
        };
        let (k1, k2) = (k / 2, k - k / 2);
        let left = products(k1).into_iter().map(|p| {
            let e = p.exponent_sums(rank);
            (p, e)
        });
        let mut right: HashMap<Vec<i64>, HashSet<Word>> = HashMap::new();
        for p in products(k2) {
            right.entry(p.exponent_sums(rank)).or_default().insert(p);
        }
        ProductTable { left: left.collect(), right }
    }
}

/// Membership of `w` in `⟨⟨r⟩⟩`, using an oracle built for `r`.
pub fn in_normal_closure(w: &Word, r: &Word, oracle: &WordProblemOracle) -> Result<Membership> {
    let matches = oracle.relators.len() == 1 && {
        let o = &oracle.relators[0];
        are_conjugate(o, r).is_some() || are_conjugate(o, &r.inverse()).is_some()
    };
    if !matches {
        return Err(Error::InvalidOracle(format!("the oracle was not built for the relator {r}")));
    }
    w.check_rank(oracle.rank)?;
    Ok(oracle.decide(w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixthReport {
    pub holds: bool,
    pub max_piece: usize,
}

/// All cyclic shifts of `r` and `r⁻¹`, as letter sequences.
fn symmetrized(r: &Word) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    for x in [r.clone(), r.inverse()] {
        let l = x.letters();
        for i in 0..l.len() {
            let mut v = l[i..].to_vec();
            v.extend_from_slice(&l[..i]);
            out.push(v);
        }
    }
    out
}

fn common_prefix(x: &[Letter], y: &[Letter]) -> usize {
    x.iter().zip(y).take_while(|(a, b)| a == b).count()
}

/// Longest piece of the cyclically reduced `r`, and whether it is shorter
/// than `|r|/6`. Shifts at distinct positions count as distinct, so proper
/// powers never pass.
pub fn is_sixth(r: &Word) -> SixthReport {
    let shifts = symmetrized(r);
    let mut max_piece = 0;
    for i in 0..shifts.len() {
        for j in i + 1..shifts.len() {
            max_piece = max_piece.max(common_prefix(&shifts[i], &shifts[j]));
        }
    }
    SixthReport { holds: 6 * max_piece < r.len(), max_piece }
}

/// Dehn's algorithm: replace the leftmost longest subword that is more than
/// half of a relator shift by the shorter complement, until none remains.
pub fn dehn_reduce(w: &Word, r: &Word) -> Result<Word> {
    let (core, _) = cyclic_core(r);
    if core.is_identity() || !is_sixth(&core).holds {
        return Err(Error::InvalidOracle(format!("{r} does not satisfy C'(1/6)")));
    }
    Ok(dehn_reduce_unchecked(w, &core))
}

fn dehn_reduce_unchecked(w: &Word, r: &Word) -> Word {
    let shifts = symmetrized(r);
    let n = r.len();
    let mut cur = w.clone();
    'outer: loop {
        let letters = cur.letters();
        for start in 0..letters.len() {
            let mut best: Option<(usize, usize)> = None;
            for (k, s) in shifts.iter().enumerate() {
                let len = common_prefix(&letters[start..], s);
                if 2 * len > n && best.map_or(true, |(_, b)| len > b) {
                    best = Some((k, len));
                }
            }
            if let Some((k, len)) = best {
                let complement = Word::from_letters(shifts[k][len..].iter().copied()).inverse();
                let mut next: Vec<Letter> = letters[..start].to_vec();
                next.extend(complement.letters());
                next.extend_from_slice(&letters[start + len..]);
                cur = Word::from_letters(next);
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Greedy shortlex representatives of the right cosets of `⟨⟨r⟩⟩·⟨√r⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transversal {
    pub representatives: Vec<Word>,
    pub relator: Word,
    pub root: Word,
    pub bound: usize,
    /// No oracle answer during the scan was `Unknown`.
    pub complete: bool,
}

pub fn coset_transversal(r: &Word, oracle: &WordProblemOracle, bound: usize) -> Result<Transversal> {
    if r.is_identity() || !r.is_cyclically_reduced() {
        return invalid(format!("{r} must be a non-trivial cyclically reduced word"));
    }
    let sq = root(r).root;
    let powers: Vec<Word> = (-(bound as i64)..=bound as i64).map(|k| sq.pow(-k)).collect();
    let mut reps: Vec<Word> = Vec::new();
    let mut complete = true;
    for w in enumerate_ball(oracle.rank, bound) {
        let mut same = false;
        'kept: for x in &reps {
            let xw = x.inverse().mul(&w);
            for p in &powers {
                match in_normal_closure(&xw.mul(p), r, oracle)? {
                    Membership::Yes => {
                        same = true;
                        break 'kept;
                    }
                    Membership::Unknown => complete = false,
                    Membership::No => {}
                }
            }
        }
        if !same {
            reps.push(w);
        }
    }
    Ok(Transversal { representatives: reps, relator: r.clone(), root: sq, bound, complete })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CLWindowReport {
    pub relator: Word,
    pub window: Vec<Word>,
    pub conjugates: Vec<Word>,
    pub rank: usize,
    pub independent: bool,
    /// Whether the window came from a scan with only definite answers.
    pub transversal_complete: Option<bool>,
}

/// Folds `{x r x⁻¹ : x ∈ window}` and compares its rank with the count.
pub fn cl_basis_window(r: &Word, window: &[Word]) -> Result<CLWindowReport> {
    if window.is_empty() {
        return invalid("the transversal window is empty");
    }
    let conjugates: Vec<Word> = window.iter().map(|x| r.conjugate_by(x)).collect();
    let rank = graph_rank(&build_and_fold(&conjugates))?;
    Ok(CLWindowReport {
        relator: r.clone(),
        window: window.to_vec(),
        independent: rank == conjugates.len(),
        rank,
        conjugates,
        transversal_complete: None,
    })
}

pub fn cl_basis_from_transversal(x: &Transversal, window: usize) -> Result<CLWindowReport> {
    let reps: Vec<Word> = x.representatives.iter().take(window).cloned().collect();
    let mut rep = cl_basis_window(&x.relator, &reps)?;
    rep.transversal_complete = Some(x.complete);
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhiteheadVerdict {
    pub transversal: Vec<Word>,
    pub independent: bool,
    /// Generators outside the span even after bounded conjugation.
    pub unverified: Vec<Word>,
    /// Generators that needed conjugates of the transversal.
    pub via_conjugates: Vec<Word>,
    pub bound: usize,
    pub whitehead: bool,
}

/// Checks on a window that `y` is a Whitehead subset of `⟨gens⟩`.
pub fn verify_whitehead_window(y: &[Word], gens: &[Word], bound: usize) -> Result<WhiteheadVerdict> {
    if y.iter().any(Word::is_identity) {
        return invalid("the identity cannot lie in a Whitehead subset");
    }
    let h = build_and_fold(gens);
    let mut transversal: Vec<Word> = Vec::new();
    for s in y {
        if !transversal.iter().any(|t| subgroup_conjugator(t, s, &h, bound).is_some()) {
            transversal.push(s.clone());
        }
    }
    let independent = is_free_basis(&transversal)?;
    let span = build_and_fold(&transversal);
    let missing: Vec<Word> = gens.iter().filter(|g| !span.contains(g)).cloned().collect();
    let mut via_conjugates = Vec::new();
    let mut unverified = Vec::new();
    if !missing.is_empty() {
        let conjugators = enumerate_ball(h.basis().len().max(1), bound)
            .into_iter()
            .map(|w| substitute(&w, h.basis()))
            .collect::<Vec<_>>();
        let conj: Vec<Word> =
            transversal.iter().flat_map(|t| conjugators.iter().map(move |u| t.conjugate_by(u))).collect();
        let wide = build_and_fold(&conj);
        for g in missing {
            if wide.contains(&g) {
                via_conjugates.push(g);
            } else {
                unverified.push(g);
            }
        }
    }
    Ok(WhiteheadVerdict {
        whitehead: independent && unverified.is_empty(),
        transversal,
        independent,
        unverified,
        via_conjugates,
        bound,
    })
}

/// Replaces generator `i` of `w` by `images[i]`.
fn substitute(w: &Word, images: &[Word]) -> Word {
    let mut out = Word::identity();
    for l in w.letters() {
        let x = images.get(l.gen.0 as usize).cloned().unwrap_or_default();
        out = out.mul(&if l.inverse { x.inverse() } else { x });
    }
    out
}

/// `F = A ∗ B` graded onto ℤ, with designated `a ∈ A`, `b ∈ B` of degree 1.
/// `A` is generated by the first `left_rank` generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZCover {
    pub left_rank: usize,
    pub grading: Vec<i64>,
    pub a: u32,
    pub b: u32,
}

/// A free factor of `N = N_A ∗ ᵃʲN_B ∗ ⟨tᵢ⟩` with `tᵢ = aⁱ⁺¹b⁻¹a⁻ⁱ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZSyllable {
    /// An element of `N_A = A ∩ N`.
    A(Word),
    /// An element of `N_B = B ∩ N`, to be conjugated by `aʲ`.
    B(Word),
    /// `t_index^power`.
    T { index: i64, power: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZRewrite {
    pub shift: i64,
    pub syllables: Vec<ZSyllable>,
    pub t_indices: BTreeSet<i64>,
}

impl ZCover {
    pub fn new(left_rank: usize, grading: Vec<i64>, a: u32, b: u32) -> Result<ZCover> {
        let rank = grading.len();
        if (a as usize) >= left_rank || (b as usize) < left_rank || (b as usize) >= rank {
            return invalid("a must lie in A and b in B");
        }
        if grading[a as usize] != 1 || grading[b as usize] != 1 {
            return invalid("the designated letters must have degree 1");
        }
        Ok(ZCover { left_rank, grading, a, b })
    }

    pub fn rank(&self) -> usize {
        self.grading.len()
    }

    pub fn degree(&self, w: &Word) -> i64 {
        w.letters().iter().map(|l| l.sign() * self.grading[l.gen.0 as usize]).sum()
    }

    pub fn t(&self, i: i64) -> Word {
        let a = Word::generator(self.a);
        Word::product([&a.pow(i + 1), &Word::generator(self.b).inverse(), &a.pow(-i)])
    }

    /// `a^h b^(j-h) a^-j`, written over the `tᵢ`.
    fn connector(&self, h: i64, j: i64, out: &mut Vec<ZSyllable>) {
        if h > j {
            for i in (j..h).rev() {
                out.push(ZSyllable::T { index: i, power: 1 });
            }
        } else {
            for i in h..j {
                out.push(ZSyllable::T { index: i, power: -1 });
            }
        }
    }

    fn inverse_connector(&self, h: i64, j: i64, out: &mut Vec<ZSyllable>) {
        let mut tmp = Vec::new();
        self.connector(h, j, &mut tmp);
        for s in tmp.into_iter().rev() {
            if let ZSyllable::T { index, power } = s {
                out.push(ZSyllable::T { index, power: -power });
            }
        }
    }

    pub fn evaluate(&self, rw: &ZRewrite) -> Word {
        let aj = Word::generator(self.a).pow(rw.shift);
        let mut out = Word::identity();
        for s in &rw.syllables {
            let x = match s {
                ZSyllable::A(w) => w.clone(),
                ZSyllable::B(w) => w.conjugate_by(&aj),
                ZSyllable::T { index, power } => self.t(*index).pow(*power),
            };
            out = out.mul(&x);
        }
        out
    }
}

fn push_syllable(stack: &mut Vec<ZSyllable>, s: ZSyllable) {
    let merged = match (stack.last(), &s) {
        (Some(ZSyllable::A(x)), ZSyllable::A(y)) => Some(ZSyllable::A(x.mul(y))),
        (Some(ZSyllable::B(x)), ZSyllable::B(y)) => Some(ZSyllable::B(x.mul(y))),
        (Some(ZSyllable::T { index: i, power: p }), ZSyllable::T { index: k, power: q }) if i == k => {
            Some(ZSyllable::T { index: *i, power: p + q })
        }
        _ => None,
    };
    let empty = |s: &ZSyllable| match s {
        ZSyllable::A(w) | ZSyllable::B(w) => w.is_identity(),
        ZSyllable::T { power, .. } => *power == 0,
    };
    match merged {
        Some(m) => {
            stack.pop();
            if !empty(&m) {
                stack.push(m);
            }
        }
        None if !empty(&s) => stack.push(s),
        None => {}
    }
}

/// Rewrites a degree-0 word over `N = N_A ∗ ᵃʲN_B ∗ ⟨tᵢ : i ∈ ℤ⟩`.
pub fn z_cover_rewrite(w: &Word, cover: &ZCover, shift: i64) -> Result<ZRewrite> {
    w.check_rank(cover.rank())?;
    if cover.degree(w) != 0 {
        return precondition(format!("{w} has non-zero degree"));
    }
    let a = Word::generator(cover.a);
    let b = Word::generator(cover.b);
    let in_a = |g: Generator| (g.0 as usize) < cover.left_rank;
    let mut raw: Vec<ZSyllable> = Vec::new();
    let mut h = 0i64;
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let side = in_a(letters[i].gen);
        let mut k = i;
        while k < letters.len() && in_a(letters[k].gen) == side {
            k += 1;
        }
        let s = Word::from_letters(letters[i..k].iter().copied());
        let g = cover.degree(&s);
        if side {
            raw.push(ZSyllable::A(Word::product([&a.pow(h), &s, &a.pow(-(h + g))])));
        } else {
            cover.connector(h, shift, &mut raw);
            raw.push(ZSyllable::B(Word::product([&b.pow(h - shift), &s, &b.pow(-(h + g - shift))])));
            cover.inverse_connector(h + g, shift, &mut raw);
        }
        h += g;
        i = k;
    }
    let mut syllables = Vec::new();
    for s in raw {
        push_syllable(&mut syllables, s);
    }
    let t_indices = syllables
        .iter()
        .filter_map(|s| match s {
            ZSyllable::T { index, .. } => Some(*index),
            _ => None,
        })
        .collect();
    Ok(ZRewrite { shift, syllables, t_indices })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableLetterReport {
    pub extended_rank: usize,
    pub stable_letter: Word,
    pub relator: Word,
    pub kernel_window: Vec<Word>,
    pub factor_window: Vec<Word>,
    pub kernel_rank: usize,
    pub combined_rank: usize,
    /// `rank(N ∪ Z) = rank(N) + |Z|` on the window.
    pub free_factor: bool,
}

/// Adjoins `z` with relator `f z⁻¹` and checks on a window that the new
/// conjugates `fⁱ(f z⁻¹)f⁻ⁱ` form a free factor next to the old kernel.
pub fn adjoin_stable_letter(rank: usize, f: &Word, hom: &[i64], window: usize) -> Result<StableLetterReport> {
    f.check_rank(rank)?;
    if hom.len() != rank {
        return invalid(format!("the grading needs {rank} entries"));
    }
    let deg = |w: &Word| -> i64 { w.letters().iter().map(|l| l.sign() * hom[l.gen.0 as usize]).sum() };
    let e = deg(f);
    if e.abs() != 1 {
        return precondition(format!("{f} maps to {e}, which does not generate ℤ"));
    }
    let z = Word::generator(rank as u32);
    let relator = f.mul(&z.inverse());
    let w = window as i64;
    let mut kernel_window: Vec<Word> = Vec::new();
    for i in -w..=w {
        for g in 0..rank as u32 {
            let x = Word::generator(g);
            let back = f.pow(-(e * (i * e + hom[g as usize])));
            let elem = Word::product([&f.pow(i), &x, &back]);
            let elem = if e == 1 { elem } else { Word::product([&f.pow(i), &x, &f.pow(-(i + hom[g as usize] * e))]) };
            if !elem.is_identity() && !kernel_window.contains(&elem) {
                kernel_window.push(elem);
            }
        }
    }
    let factor_window: Vec<Word> = (-w..=w).map(|i| relator.conjugate_by(&f.pow(i))).collect();
    let kernel_rank = graph_rank(&build_and_fold(&kernel_window))?;
    let mut all = kernel_window.clone();
    all.extend(factor_window.iter().cloned());
    let combined_rank = graph_rank(&build_and_fold(&all))?;
    Ok(StableLetterReport {
        extended_rank: rank + 1,
        stable_letter: z,
        relator,
        free_factor: combined_rank == kernel_rank + factor_window.len(),
        kernel_window,
        factor_window,
        kernel_rank,
        combined_rank,
    })
}
