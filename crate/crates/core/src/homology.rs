//! Torsion, Fox calculus and the identity-theorem chain complexes of
//! `G = F/⟨⟨R₀⟩⟩` in the Cayley-tree case.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::asphericity::{coset_transversal, Membership, WordProblemOracle};
use crate::chain::{smith_normal_form, IntMatrix};
use crate::error::{invalid, Error, Result};
use crate::perm::Perm;
use crate::trees::TreeModel;
use crate::words::{are_conjugate, root, Generator, Word};

/// A finitely supported integer combination of free-group elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<(i64, Word)>", into = "Vec<(i64, Word)>")]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl From<Vec<(i64, Word)>> for GroupRingElement {
    fn from(v: Vec<(i64, Word)>) -> Self {
        let mut e = GroupRingElement::zero();
        for (c, w) in v {
            e.add_term(c, w);
        }
        e
    }
}

impl From<GroupRingElement> for Vec<(i64, Word)> {
    fn from(e: GroupRingElement) -> Self {
        e.terms.into_iter().map(|(w, c)| (c, w)).collect()
    }
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement::default()
    }

    pub fn one() -> Self {
        GroupRingElement::from_word(Word::identity())
    }

    pub fn from_word(w: Word) -> Self {
        GroupRingElement::term(1, w)
    }

    pub fn term(c: i64, w: Word) -> Self {
        let mut e = GroupRingElement::zero();
        e.add_term(c, w);
        e
    }

    pub fn add_term(&mut self, c: i64, w: Word) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn coefficient(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(c, w.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = GroupRingElement::zero();
        for (w, c) in self.terms() {
            out.add_term(k * c, w.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = GroupRingElement::zero();
        for (u, c) in self.terms() {
            for (v, d) in other.terms() {
                out.add_term(c * d, u.mul(v));
            }
        }
        out
    }

    /// Left multiplication by a group element.
    pub fn left(&self, g: &Word) -> Self {
        GroupRingElement::from_word(g.clone()).mul(self)
    }

    /// The augmentation: every group element goes to 1.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            match (i, sign) {
                (0, "+") => {}
                (0, _) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            let word = if w.is_identity() { "1".to_string() } else { w.to_string() };
            match (mag, w.is_identity()) {
                (1, _) => write!(f, "{word}")?,
                (_, true) => write!(f, "{mag}")?,
                _ => write!(f, "{mag}{word}")?,
            }
        }
        Ok(())
    }
}

/// The free derivative `∂w/∂x`.
pub fn fox_derivative(w: &Word, x: Generator) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for &l in w.letters() {
        let step = Word::from_letters([l]);
        if l.gen == x {
            if l.inverse {
                out.add_term(-1, prefix.mul(&step));
            } else {
                out.add_term(1, prefix.clone());
            }
        }
        prefix = prefix.mul(&step);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ModuleKind {
    /// `ℤG`.
    Free,
    /// `ℤ[G/G_v]` with `G_v = ⟨root⟩` cyclic of the given order.
    Coset { root: Word, order: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub label: String,
    pub module: ModuleKind,
}

/// An augmented complex `C₂ → C₁ → C₀ → ℤ` of left `ℤG`-modules.
/// `boundaries[k - 1]` has one row per summand of `C_k`; a basis element
/// maps to the row read against the summands of `C_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub name: String,
    pub rank: usize,
    pub relators: Vec<Word>,
    pub modules: Vec<Vec<Summand>>,
    pub boundaries: Vec<Vec<Vec<GroupRingElement>>>,
    pub notes: Vec<String>,
}

impl ComplexSpec {
    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(Vec::len).collect()
    }

    /// Integer matrix of `∂_k` after tensoring with the trivial module.
    pub fn augmented(&self, k: usize) -> IntMatrix {
        let rows: Vec<Vec<i64>> =
            self.boundaries[k - 1].iter().map(|row| row.iter().map(GroupRingElement::augmentation).collect()).collect();
        IntMatrix::from_rows(self.modules[k - 1].len(), rows)
    }
}

/// Whether two words name the same element of `module` over `G`.
fn same_point(x: &Word, y: &Word, module: &ModuleKind, oracle: &WordProblemOracle) -> Membership {
    let d = x.inverse().mul(y);
    match module {
        ModuleKind::Free => oracle.decide(&d),
        ModuleKind::Coset { root, order } => {
            let mut answer = Membership::No;
            for k in 0..*order as i64 {
                match oracle.decide(&d.mul(&root.pow(-k))) {
                    Membership::Yes => return Membership::Yes,
                    Membership::Unknown => answer = Membership::Unknown,
                    Membership::No => {}
                }
            }
            answer
        }
    }
}

/// Whether `e` is zero in `ℤG` or `ℤ[G/G_v]`, grouping terms with the oracle.
pub fn vanishes(e: &GroupRingElement, module: &ModuleKind, oracle: &WordProblemOracle) -> Membership {
    let words: Vec<(&Word, i64)> = e.terms().collect();
    let mut class: Vec<usize> = (0..words.len()).collect();
    let mut undecided = false;
    for i in 0..words.len() {
        for j in 0..i {
            if class[j] != j {
                continue;
            }
            match same_point(words[j].0, words[i].0, module, oracle) {
                Membership::Yes => {
                    class[i] = j;
                    break;
                }
                Membership::Unknown => undecided = true,
                Membership::No => {}
            }
        }
    }
    let mut sums: BTreeMap<usize, i64> = BTreeMap::new();
    for (i, (_, c)) in words.iter().enumerate() {
        *sums.entry(class[i]).or_insert(0) += c;
    }
    if sums.values().all(|s| *s == 0) {
        Membership::Yes
    } else if undecided {
        Membership::Unknown
    } else {
        Membership::No
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeCheck {
    /// `∂₁∂₂` entrywise, as computed in the free-group ring.
    pub composite: Vec<Vec<GroupRingElement>>,
    pub verdicts: Vec<Vec<Membership>>,
    /// `ε∂₁ = 0`, exactly.
    pub augmentation_zero: bool,
    pub zero: Membership,
}

/// Checks `∂₁∂₂ = 0` over `G` and `ε∂₁ = 0`.
pub fn check_composites(c: &ComplexSpec, oracle: &WordProblemOracle) -> CompositeCheck {
    let (d2, d1) = (&c.boundaries[1], &c.boundaries[0]);
    let mut composite = Vec::new();
    let mut verdicts = Vec::new();
    let mut zero = Membership::Yes;
    for row in d2 {
        let mut out_row = Vec::new();
        let mut v_row = Vec::new();
        for (l, target) in c.modules[0].iter().enumerate() {
            let mut e = GroupRingElement::zero();
            for (j, coeff) in row.iter().enumerate() {
                e = e.add(&coeff.mul(&d1[j][l]));
            }
            let v = vanishes(&e, &target.module, oracle);
            zero = match (zero, v) {
                (Membership::No, _) | (_, Membership::No) => Membership::No,
                (Membership::Unknown, _) | (_, Membership::Unknown) => Membership::Unknown,
                _ => Membership::Yes,
            };
            out_row.push(e);
            v_row.push(v);
        }
        composite.push(out_row);
        verdicts.push(v_row);
    }
    let augmentation_zero =
        d1.iter().all(|row| row.iter().map(GroupRingElement::augmentation).sum::<i64>() == 0);
    CompositeCheck { composite, verdicts, augmentation_zero, zero }
}

fn relator_data(rank: usize, r0: &[Word]) -> Result<Vec<(Word, Word, u32)>> {
    r0.iter()
        .map(|r| {
            r.check_rank(rank)?;
            if r.is_identity() || !r.is_cyclically_reduced() {
                return invalid(format!("{r} must be a non-trivial cyclically reduced word"));
            }
            let d = root(r);
            Ok((r.clone(), d.root, d.exponent))
        })
        .collect()
}

/// The two complexes for the Cayley tree of `F(rank)`: cells with coset
/// 2-cells, and the subdivision with a cone point in each 2-cell.
pub fn build_complexes(model: &TreeModel, r0: &[Word]) -> Result<(ComplexSpec, ComplexSpec)> {
    if !model.is_cayley() {
        return Err(Error::OutOfScope("complexes are only built for the Cayley tree".into()));
    }
    let rank = model.rank();
    let data = relator_data(rank, r0)?;
    let gens: Vec<Generator> = (0..rank as u32).map(Generator).collect();
    let x_minus_1 = |g: Generator| GroupRingElement::from_word(Word::generator(g.0)).sub(&GroupRingElement::one());
    let free = |label: String| Summand { label, module: ModuleKind::Free };
    let edges: Vec<Summand> = gens.iter().map(|g| free(format!("e:{}", g.name()))).collect();

    let c2: Vec<Summand> = data
        .iter()
        .map(|(r, s, n)| Summand { label: format!("r:{r}"), module: ModuleKind::Coset { root: s.clone(), order: *n } })
        .collect();
    let d2: Vec<Vec<GroupRingElement>> = data.iter().map(|(r, _, _)| gens.iter().map(|g| fox_derivative(r, *g)).collect()).collect();
    let d1: Vec<Vec<GroupRingElement>> = gens.iter().map(|g| vec![x_minus_1(*g)]).collect();
    let cells = ComplexSpec {
        name: "cells".into(),
        rank,
        relators: r0.to_vec(),
        modules: vec![vec![free("v".into())], edges.clone(), c2],
        boundaries: vec![d1, d2],
        notes: vec![
            "C2 is the abelianized normal closure of the relators, one coset module per relator".into(),
            "edges are the generators, with the single vertex orbit v".into(),
        ],
    };

    let mut c0 = vec![free("v".into())];
    c0.extend(data.iter().map(|(r, s, n)| Summand {
        label: format!("c:{r}"),
        module: ModuleKind::Coset { root: s.clone(), order: *n },
    }));
    let mut c1 = edges;
    c1.extend(data.iter().map(|(r, _, _)| free(format!("spoke:{r}"))));
    let c2: Vec<Summand> = data.iter().map(|(r, _, _)| free(format!("sector:{r}"))).collect();
    let m = data.len();
    let mut d1: Vec<Vec<GroupRingElement>> = gens
        .iter()
        .map(|g| {
            let mut row = vec![GroupRingElement::zero(); m + 1];
            row[0] = x_minus_1(*g);
            row
        })
        .collect();
    for i in 0..m {
        let mut row = vec![GroupRingElement::zero(); m + 1];
        row[0] = GroupRingElement::one();
        row[i + 1] = GroupRingElement::one().neg();
        d1.push(row);
    }
    let d2: Vec<Vec<GroupRingElement>> = data
        .iter()
        .enumerate()
        .map(|(i, (_, s, _))| {
            let mut row: Vec<GroupRingElement> = gens.iter().map(|g| fox_derivative(s, *g)).collect();
            row.extend(vec![GroupRingElement::zero(); m]);
            row[rank + i] = GroupRingElement::one().sub(&GroupRingElement::from_word(s.clone()));
            row
        })
        .collect();
    let subdivided = ComplexSpec {
        name: "subdivided".into(),
        rank,
        relators: r0.to_vec(),
        modules: vec![c0, c1, c2],
        boundaries: vec![d1, d2],
        notes: vec![
            "each 2-cell is cut into sectors around a cone point fixed by its root".into(),
            "spokes run from the cone point to the base vertex".into(),
        ],
    };
    Ok((cells, subdivided))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            n => parts.push(format!("Z^{n}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub complex: String,
    pub groups: Vec<AbelianGroup>,
    /// Degrees three and up are stated, not computed.
    pub higher: String,
}

/// `H₀, H₁, H₂` of `ℤ ⊗_G C` via Smith normal forms.
pub fn homology_trivial_coeffs(c: &ComplexSpec) -> HomologyReport {
    let dims = c.ranks();
    let smith: Vec<(usize, Vec<i64>)> = (1..=2)
        .map(|k| {
            let s = smith_normal_form(&c.augmented(k));
            let torsion = s.diagonal.iter().map(|d| d.abs()).filter(|d| *d > 1).collect();
            (s.rank, torsion)
        })
        .collect();
    let rank_of = |k: usize| if (1..=2).contains(&k) { smith[k - 1].0 } else { 0 };
    let groups = (0..=2)
        .map(|k| AbelianGroup {
            free_rank: dims[k] - rank_of(k) - rank_of(k + 1),
            torsion: if k < 2 { smith[k].1.clone() } else { Vec::new() },
        })
        .collect();
    HomologyReport {
        complex: c.name.clone(),
        groups,
        higher: "for n >= 3, H_n(G) is the sum of H_n over the cyclic stabilizers of the cone points".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionEntry {
    pub relator: Word,
    pub root: Word,
    pub exponent: u32,
    /// Coset representatives of `N·G_r`, when a window was requested.
    pub window: Vec<Word>,
    pub window_complete: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub entries: Vec<TorsionEntry>,
    pub torsion_free: bool,
    pub statement: String,
}

/// Cyclic torsion subgroups `G_r = ⟨√r⟩ ≅ ℤ/n_r` and the free-product
/// description of the subgroup they generate. A transversal window is
/// computed when a one-relator oracle is supplied.
pub fn torsion_decomposition(
    rank: usize,
    r0: &[Word],
    window: Option<(&WordProblemOracle, usize)>,
) -> Result<TorsionReport> {
    let data = relator_data(rank, r0)?;
    for i in 0..data.len() {
        for j in 0..i {
            if are_conjugate(&data[i].0, &data[j].0).is_some() {
                return invalid(format!("{} and {} are conjugate", data[j].0, data[i].0));
            }
        }
    }
    let mut entries = Vec::new();
    for (r, s, n) in data {
        let (window, window_complete) = match window {
            Some((oracle, bound)) if r0.len() == 1 => {
                let t = coset_transversal(&r, oracle, bound)?;
                (t.representatives, Some(t.complete))
            }
            _ => (Vec::new(), None),
        };
        entries.push(TorsionEntry { relator: r, root: s, exponent: n, window, window_complete });
    }
    let torsion_free = entries.iter().all(|e| e.exponent == 1);
    let statement = if torsion_free {
        "every relator is a non-power, so G is torsion-free, N is trivial and every torsion-free subgroup is locally indicable".into()
    } else {
        let parts: Vec<String> = entries
            .iter()
            .filter(|e| e.exponent > 1)
            .map(|e| format!("*_(y in Y) y<{}>, order {}", e.root, e.exponent))
            .collect();
        format!("N = {}; every finite subgroup is conjugate into exactly one G_r", parts.join(" * "))
    };
    Ok(TorsionReport { entries, torsion_free, statement })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCertificate {
    pub word: Word,
    /// Order of the permutation image; divides the true order.
    pub image_order: u64,
    /// A multiple of the true order, from `wⁿ` lying in the normal closure.
    pub upper_bound: Option<u64>,
    /// Set when the two bounds meet.
    pub exact: Option<u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Brackets the order of `w` in `F/⟨⟨relators⟩⟩` between the order of a
/// permutation image and the bound coming from a conjugate power of a root.
pub fn order_certificate(w: &Word, relators: &[Word], images: &[Perm]) -> Result<OrderCertificate> {
    for r in relators {
        if !Perm::evaluate(r, images)?.is_identity() {
            return invalid(format!("the images do not satisfy {r}"));
        }
    }
    let image_order = Perm::evaluate(w, images)?.order();
    if w.is_identity() {
        return Ok(OrderCertificate { word: w.clone(), image_order, upper_bound: Some(1), exact: Some(1) });
    }
    let wr = root(w);
    let mut upper: Option<u64> = None;
    for r in relators {
        let rr = root(r);
        let matches = are_conjugate(&wr.root, &rr.root).is_some() || are_conjugate(&wr.root, &rr.root.inverse()).is_some();
        if matches {
            let n = u64::from(rr.exponent);
            let bound = n / gcd(n, u64::from(wr.exponent));
            upper = Some(upper.map_or(bound, |u| gcd(u, bound)));
        }
    }
    let exact = upper.filter(|u| *u == image_order);
    Ok(OrderCertificate { word: w.clone(), image_order, upper_bound: upper, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_word, seeded_rng};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn fox_identity_holds(x: &Word, rank: usize) -> bool {
        let mut lhs = GroupRingElement::zero();
        for g in 0..rank as u32 {
            let xm1 = GroupRingElement::from_word(Word::generator(g)).sub(&GroupRingElement::one());
            lhs = lhs.add(&fox_derivative(x, Generator(g)).mul(&xm1));
        }
        lhs == GroupRingElement::from_word(x.clone()).sub(&GroupRingElement::one())
    }

    #[test]
    fn fox_examples() {
        let a = Generator(0);
        assert_eq!(fox_derivative(&w("ab"), a), GroupRingElement::one());
        assert_eq!(fox_derivative(&w("A"), a), GroupRingElement::term(-1, w("A")));
        let expected = GroupRingElement::one().sub(&GroupRingElement::from_word(w("abA")));
        assert_eq!(fox_derivative(&w("abAB"), a), expected);
        assert_eq!(expected.to_string(), "1 - abA");
        assert!(fox_derivative(&w("b"), a).is_zero());
    }

    proptest! {
        #[test]
        fn fox_identity(seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = random_word(&mut rng, 3, 10);
            prop_assert!(fox_identity_holds(&x, 3));
        }

        #[test]
        fn fox_product_rule(seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (u, v) = (random_word(&mut rng, 2, 8), random_word(&mut rng, 2, 8));
            for g in 0..2 {
                let lhs = fox_derivative(&u.mul(&v), Generator(g));
                let rhs = fox_derivative(&u, Generator(g)).add(&fox_derivative(&v, Generator(g)).left(&u));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ring_serde() {
        let e = GroupRingElement::from(vec![(2, w("ab")), (-1, w("")), (3, w("ab"))]);
        assert_eq!(e.coefficient(&w("ab")), 5);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"[[-1,"1"],[5,"a b"]]"#);
        assert_eq!(serde_json::from_str::<GroupRingElement>(&json).unwrap(), e);
    }

    #[test]
    fn commutator_complexes() {
        let (cells, sub) = build_complexes(&TreeModel::cayley(2), &[w("abAB")]).unwrap();
        assert_eq!(cells.ranks(), vec![1, 2, 1]);
        assert_eq!(sub.ranks(), vec![2, 3, 1]);
        let o = WordProblemOracle::abelianized(2, &w("abAB")).unwrap();
        for c in [&cells, &sub] {
            let chk = check_composites(c, &o);
            assert!(chk.augmentation_zero);
            assert_eq!(chk.zero, Membership::Yes, "{}", c.name);
        }
        let h = homology_trivial_coeffs(&cells);
        let z = |n| AbelianGroup { free_rank: n, torsion: vec![] };
        assert_eq!(h.groups, vec![z(1), z(2), z(1)]);
        assert_eq!(homology_trivial_coeffs(&sub).groups, vec![z(1), z(2), z(1)]);
    }

    #[test]
    fn torsion_complexes() {
        let r = w("ababab");
        let (cells, sub) = build_complexes(&TreeModel::cayley(2), &[r.clone()]).unwrap();
        assert_eq!(cells.modules[2][0].module, ModuleKind::Coset { root: w("ab"), order: 3 });
        let h = homology_trivial_coeffs(&cells);
        assert_eq!(h.groups[1], AbelianGroup { free_rank: 1, torsion: vec![3] });
        assert_eq!(h.groups[2], AbelianGroup { free_rank: 0, torsion: vec![] });
        assert_eq!(h.groups[1].to_string(), "Z + Z/3");
        let o = WordProblemOracle::bounded_search(2, vec![r], 1, 2);
        for c in [&cells, &sub] {
            assert_eq!(check_composites(c, &o).zero, Membership::Yes, "{}", c.name);
        }
    }

    #[test]
    fn composites_detect_a_broken_boundary() {
        let (mut cells, _) = build_complexes(&TreeModel::cayley(2), &[w("abAB")]).unwrap();
        cells.boundaries[1][0][0] = GroupRingElement::one();
        let o = WordProblemOracle::abelianized(2, &w("abAB")).unwrap();
        assert_eq!(check_composites(&cells, &o).zero, Membership::No);
    }

    #[test]
    fn rank_one_and_free_complexes() {
        let (cells, _) = build_complexes(&TreeModel::cayley(1), &[w("a")]).unwrap();
        assert_eq!(cells.boundaries[1][0][0], GroupRingElement::one());
        let h = homology_trivial_coeffs(&cells);
        assert_eq!(h.groups.iter().map(|g| g.free_rank).collect::<Vec<_>>(), vec![1, 0, 0]);
        let (free, _) = build_complexes(&TreeModel::cayley(2), &[]).unwrap();
        let h = homology_trivial_coeffs(&free);
        assert_eq!(h.groups[1].free_rank, 2);
        assert_eq!(h.groups[2], AbelianGroup { free_rank: 0, torsion: vec![] });
        assert!(matches!(
            build_complexes(&TreeModel::free_product(1, 1), &[w("ab")]),
            Err(Error::OutOfScope(_))
        ));
    }

    /// `H₁` of a one-relator rank-2 presentation is `ℤ ⊕ ℤ/gcd` of the
    /// relator's exponent sums.
    #[test]
    fn h1_matches_gcd_formula() {
        let mut rng = seeded_rng(81);
        for _ in 0..40 {
            let r = crate::sample::random_cyclically_reduced(&mut rng, 2, 10);
            let e = r.exponent_sums(2);
            let g = gcd(e[0].unsigned_abs(), e[1].unsigned_abs()) as i64;
            let expected = match g {
                0 => AbelianGroup { free_rank: 2, torsion: vec![] },
                1 => AbelianGroup { free_rank: 1, torsion: vec![] },
                _ => AbelianGroup { free_rank: 1, torsion: vec![g] },
            };
            let (cells, _) = build_complexes(&TreeModel::cayley(2), &[r.clone()]).unwrap();
            let h = homology_trivial_coeffs(&cells);
            assert_eq!(h.groups[1], expected, "{r}");
            assert_eq!(h.groups[0], AbelianGroup { free_rank: 1, torsion: vec![] });
        }
    }

    #[test]
    fn torsion_examples() {
        let t = torsion_decomposition(2, &[w("ababab")], None).unwrap();
        assert_eq!((t.entries[0].root.clone(), t.entries[0].exponent), (w("ab"), 3));
        assert!(!t.torsion_free);
        let t = torsion_decomposition(2, &[w("abAB")], None).unwrap();
        assert!(t.torsion_free);
        let t = torsion_decomposition(2, &[w("aa")], None).unwrap();
        assert_eq!(t.entries[0].exponent, 2);
        assert!(torsion_decomposition(2, &[w("ab"), w("ba")], None).is_err());
        let o = WordProblemOracle::abelianized(2, &w("abAB")).unwrap();
        let t = torsion_decomposition(2, &[w("abAB")], Some((&o, 1))).unwrap();
        assert_eq!(t.entries[0].window.len(), 5);
        assert_eq!(t.entries[0].window_complete, Some(true));
    }

    #[test]
    fn search_never_shortens_root_orders() {
        for (r, n) in [(w("ababab"), 3), (w("aa"), 2), (w("abAbabAb"), 2)] {
            let o = WordProblemOracle::bounded_search(2, vec![r.clone()], 2, 2);
            let s = root(&r).root;
            for k in 1..n {
                assert_ne!(o.decide(&s.pow(k)), Membership::Yes, "{r} {k}");
            }
        }
    }

    #[test]
    fn order_examples() {
        let imgs = vec![Perm::parse_cycles("(1 2)", 3).unwrap(), Perm::parse_cycles("(2 3)", 3).unwrap()];
        let rel = [w("ababab")];
        let c = order_certificate(&w("ab"), &rel, &imgs).unwrap();
        assert_eq!((c.image_order, c.upper_bound, c.exact), (3, Some(3), Some(3)));
        let c = order_certificate(&w("BA"), &rel, &imgs).unwrap();
        assert_eq!(c.exact, Some(3));
        assert_eq!(order_certificate(&Word::identity(), &rel, &imgs).unwrap().exact, Some(1));
        let c = order_certificate(&w("a"), &rel, &imgs).unwrap();
        assert_eq!((c.image_order, c.upper_bound, c.exact), (2, None, None));
        assert!(order_certificate(&w("a"), &[w("abab")], &imgs).is_err());
    }
}
