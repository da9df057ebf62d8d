//! Cell projections and augmentations on `E_J`, plus a search for group
//! elements that make the augmentation of a vector nonzero.
//!
//! Vectors are dense coordinates on the basis `u w C_J` (`w` in `Y_J`,
//! `u` in `U_{w_J w^{-1}}`). The group acts through [`Rewriter`], so no coset
//! of `B` is ever enumerated.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::{Atom, Chevalley, GroupWord, UnipotentElement};
use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::field::FqElem;
use crate::flagmod::{FlagBasisIndex, Rewriter};
use crate::rootsys::{NodeSet, ParabolicSubset, WeylElement};

pub const DEFAULT_BUDGET: usize = 10_000;

type SparseColumns<E> = Vec<Vec<(usize, E)>>;

/// `epsilon(xi)`: one coefficient sum per `w` in `Y_J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AugmentationProfile {
    pub j: NodeSet,
    /// Words for the elements of `Y_J`, in the order of `values`.
    pub cells: Vec<String>,
    pub values: Vec<String>,
    pub nonzero: bool,
}

/// `E_J` with cell bookkeeping and cached atom actions.
pub struct Augmenter<F: Field> {
    g: Chevalley,
    field: F,
    j: NodeSet,
    pd: ParabolicSubset,
    rewriter: Rewriter,
    cells: BTreeMap<WeylElement, Vec<usize>>,
    e_index: HashMap<UnipotentElement, usize>,
    actions: RefCell<HashMap<Atom, SparseColumns<F::Elem>>>,
}

impl<F: Field> Augmenter<F> {
    pub fn new(g: &Chevalley, field: &F, j: NodeSet) -> Result<Augmenter<F>> {
        let rewriter = Rewriter::new(g, j)?;
        let pd = g.root_system().parabolic_data(j)?;
        let mut cells: BTreeMap<WeylElement, Vec<usize>> = pd.y_j.iter().map(|&w| (w, Vec::new())).collect();
        let mut e_index = HashMap::new();
        for (k, b) in rewriter.basis().iter().enumerate() {
            cells.get_mut(&b.w).expect("basis cell lies in Y_J").push(k);
            if b.w == g.root_system().identity() {
                e_index.insert(b.u.clone(), k);
            }
        }
        Ok(Augmenter {
            g: g.clone(),
            field: field.clone(),
            j,
            pd,
            rewriter,
            cells,
            e_index,
            actions: RefCell::new(HashMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.rewriter.basis().len()
    }
    pub fn basis(&self) -> &[FlagBasisIndex] {
        self.rewriter.basis()
    }
    pub fn group(&self) -> &Chevalley {
        &self.g
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn j(&self) -> NodeSet {
        self.j
    }
    pub fn zero(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim()]
    }
    /// The basis vector `u w C_J`.
    pub fn basis_vector(&self, label: &FlagBasisIndex) -> Result<Vec<F::Elem>> {
        let k = self
            .basis()
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| Error::Domain("label is not an E_J basis label".into()))?;
        let mut v = self.zero();
        v[k] = self.field.one();
        Ok(v)
    }
    /// `C_J`, the basis vector at `w = e`, `u = 1`.
    pub fn c_j(&self) -> Vec<F::Elem> {
        let mut v = self.zero();
        v[self.e_index[&self.g.unipotent_identity()]] = self.field.one();
        v
    }

    fn check_cell(&self, w: WeylElement) -> Result<&[usize]> {
        self.cells.get(&w).map(|v| v.as_slice()).ok_or_else(|| {
            Error::Domain(format!("{} is not in Y_J for J = {}", self.g.root_system().word_label(w), self.j))
        })
    }

    /// `P_w`: keeps the coordinates of the `w`-cell.
    pub fn project(&self, w: WeylElement, xi: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let cell = self.check_cell(w)?;
        let mut out = self.zero();
        for &k in cell {
            out[k] = xi[k].clone();
        }
        Ok(out)
    }

    /// `epsilon_w P_w`.
    pub fn cell_sum(&self, w: WeylElement, xi: &[F::Elem]) -> Result<F::Elem> {
        let cell = self.check_cell(w)?;
        Ok(cell.iter().fold(self.field.zero(), |acc, &k| self.field.add(&acc, &xi[k])))
    }

    pub fn augmentation_values(&self, xi: &[F::Elem]) -> Vec<F::Elem> {
        self.cells.keys().map(|&w| self.cell_sum(w, xi).expect("cell of Y_J")).collect()
    }

    pub fn augmentation(&self, xi: &[F::Elem]) -> AugmentationProfile {
        let values = self.augmentation_values(xi);
        let rs = self.g.root_system();
        AugmentationProfile {
            j: self.j,
            cells: self.cells.keys().map(|&w| rs.word_label(w)).collect(),
            nonzero: values.iter().any(|v| !self.field.is_zero(v)),
            values: values.iter().map(|v| self.field.render(v)).collect(),
        }
    }

    fn augmentation_nonzero(&self, xi: &[F::Elem]) -> bool {
        self.augmentation_values(xi).iter().any(|v| !self.field.is_zero(v))
    }

    /// Cells of `Y_J` where `xi` has a nonzero coordinate.
    pub fn support_cells(&self, xi: &[F::Elem]) -> Vec<WeylElement> {
        self.cells
            .iter()
            .filter(|(_, ks)| ks.iter().any(|&k| !self.field.is_zero(&xi[k])))
            .map(|(&w, _)| w)
            .collect()
    }

    /// The condition that the `e`-cell coefficients over `x` in `U'_h` have a
    /// nonzero sum, for `h` in `W_J`.
    pub fn heart_condition(&self, xi: &[F::Elem], h: WeylElement) -> Result<bool> {
        let rs = self.g.root_system();
        if !self.pd.w_group.contains(&h) {
            return Err(Error::Domain(format!("{} is not in W_J for J = {}", rs.word_label(h), self.j)));
        }
        let (_, pos) = rs.inversion_sets(h);
        let mut sum = self.field.zero();
        for (u, &k) in &self.e_index {
            if u.support().iter().all(|r| pos.contains(r)) {
                sum = self.field.add(&sum, &xi[k]);
            }
        }
        Ok(!self.field.is_zero(&sum))
    }

    fn columns(&self, atom: &Atom) -> Result<()> {
        if self.actions.borrow().contains_key(atom) {
            return Ok(());
        }
        let cols = (0..self.dim())
            .map(|k| {
                Ok(self
                    .rewriter
                    .act_basis(atom, k)?
                    .into_iter()
                    .map(|(r, c)| (r, self.field.from_i64(c)))
                    .collect())
            })
            .collect::<Result<SparseColumns<F::Elem>>>()?;
        self.actions.borrow_mut().insert(atom.clone(), cols);
        Ok(())
    }

    pub fn act_atom(&self, atom: &Atom, xi: &[F::Elem]) -> Result<Vec<F::Elem>> {
        self.columns(atom)?;
        let actions = self.actions.borrow();
        let cols = &actions[atom];
        let mut out = self.zero();
        for (k, x) in xi.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (r, c) in &cols[k] {
                out[*r] = self.field.add(&out[*r], &self.field.mul(c, x));
            }
        }
        Ok(out)
    }

    /// Acts by the product `a_1 ... a_n`, so `a_n` is applied first.
    pub fn act_word(&self, word: &GroupWord, xi: &[F::Elem]) -> Result<Vec<F::Elem>> {
        word.0.iter().rev().try_fold(xi.to_vec(), |v, a| self.act_atom(a, &v))
    }

    /// Minimal `h` in `W_J`, by length, with the heart condition.
    fn minimal_heart(&self, xi: &[F::Elem]) -> Option<WeylElement> {
        let rs = self.g.root_system();
        let mut hs = self.pd.w_group.clone();
        hs.sort_by_key(|&h| (rs.length(h), h));
        hs.into_iter().find(|&h| self.heart_condition(xi, h).unwrap_or(false))
    }
}

/// One step of a search, for the trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStep {
    pub phase: String,
    /// The element applied at this step, leftmost atom applied last.
    pub word: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub success: bool,
    /// `g` with `epsilon(g xi) != 0` on success.
    #[serde(skip)]
    pub word: GroupWord,
    pub word_length: usize,
    pub moves_used: usize,
    pub profile: AugmentationProfile,
    pub trace: Vec<SearchStep>,
}

pub(crate) fn render_word(g: &Chevalley, word: &GroupWord) -> String {
    if word.0.is_empty() {
        return "e".into();
    }
    let fq = g.field();
    word.0
        .iter()
        .map(|a| match a {
            Atom::Root { root, c } => format!("x{}({})", root + 1, fq.coords(*c).iter().map(|d| d.to_string()).collect::<String>()),
            Atom::Weyl(i) => format!("s{}", i + 1),
            Atom::Torus(t) => format!("h({:?})", t.values().iter().map(|v| v.0).collect::<Vec<_>>()),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

struct Search<'a, F: Field> {
    aug: &'a Augmenter<F>,
    xi: Vec<F::Elem>,
    word: GroupWord,
    moves: usize,
    budget: usize,
    trace: Vec<SearchStep>,
}

impl<F: Field> Search<'_, F> {
    /// Applies `g` (left multiplication), charging its atoms to the budget.
    fn apply(&mut self, g: &GroupWord) -> Result<bool> {
        if self.moves + g.0.len() > self.budget {
            return Ok(false);
        }
        self.moves += g.0.len();
        self.xi = self.aug.act_word(g, &self.xi)?;
        let mut w = g.0.clone();
        w.extend(std::mem::take(&mut self.word.0));
        self.word = GroupWord(w);
        Ok(true)
    }

    /// Evaluates `g xi` without committing.
    fn try_move(&mut self, g: &GroupWord) -> Result<Option<Vec<F::Elem>>> {
        if self.moves + g.0.len() > self.budget {
            return Ok(None);
        }
        self.moves += g.0.len();
        Ok(Some(self.aug.act_word(g, &self.xi)?))
    }

    fn log(&mut self, phase: &str, g: &GroupWord, note: String) {
        let word = render_word(self.aug.group(), g);
        self.trace.push(SearchStep { phase: phase.into(), word, note });
    }

    /// Words `s` and `s y` with `y` running over `U_{alpha_i} \ 1`.
    fn candidates(&self, i: usize) -> Vec<GroupWord> {
        let mut out = vec![GroupWord(vec![Atom::Weyl(i)])];
        for c in self.aug.group().field().nonzero() {
            out.push(GroupWord(vec![Atom::Weyl(i), Atom::Root { root: i, c }]));
        }
        out
    }

    /// Translates within the cell of `w` so that the coefficient at `u = 1`
    /// is nonzero.
    fn normalize_cell(&mut self, w: WeylElement, phase: &str) -> Result<bool> {
        let aug = self.aug;
        let g = aug.group();
        let cell = aug.check_cell(w)?.to_vec();
        let Some(&k) = cell.iter().find(|&&k| !aug.field.is_zero(&self.xi[k])) else {
            return Ok(false);
        };
        let x = &aug.basis()[k].u;
        if x.is_identity() {
            return Ok(true);
        }
        let word = g.unipotent_word(&g.inverse_unipotent(x));
        if !self.apply(&word)? {
            return Ok(false);
        }
        self.log(phase, &word, "translate the leading coefficient to u = 1".into());
        Ok(true)
    }

    fn min_cell_length(&self, xi: &[F::Elem]) -> Option<(usize, WeylElement)> {
        let rs = self.aug.group().root_system();
        self.aug.support_cells(xi).into_iter().map(|w| (rs.length(w), w)).min()
    }

    /// Drives the lowest nonzero cell down to `e`.
    fn phase_one(&mut self) -> Result<bool> {
        let rs = self.aug.group().root_system().clone();
        loop {
            if self.aug.augmentation_nonzero(&self.xi) {
                return Ok(true);
            }
            let Some((len, h)) = self.min_cell_length(&self.xi) else {
                return Ok(false);
            };
            if len == 0 {
                return Ok(true);
            }
            if !self.normalize_cell(h, "cells")? {
                return Ok(false);
            }
            let i = rs.left_descents(h).nodes()[0];
            let mut advanced = false;
            for cand in self.candidates(i) {
                let Some(next) = self.try_move(&cand)? else {
                    return Ok(false);
                };
                if self.min_cell_length(&next).is_some_and(|(l, _)| l < len) {
                    self.moves -= cand.0.len();
                    self.apply(&cand)?;
                    self.log("cells", &cand, format!("lowest nonzero cell now below {}", rs.word_label(h)));
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return Ok(false);
            }
        }
    }

    /// Descends the heart condition from `h` to `e` within `W_J`.
    fn phase_two(&mut self) -> Result<bool> {
        let rs = self.aug.group().root_system().clone();
        let e = rs.identity();
        if !self.normalize_cell(e, "heart")? {
            return Ok(false);
        }
        loop {
            if self.aug.augmentation_nonzero(&self.xi) {
                return Ok(true);
            }
            let Some(h) = self.aug.minimal_heart(&self.xi) else {
                return Ok(false);
            };
            let len = rs.length(h);
            let i = rs.descents(h).nodes()[0];
            let mut advanced = false;
            for cand in self.candidates(i) {
                let Some(next) = self.try_move(&cand)? else {
                    return Ok(false);
                };
                if self.aug.minimal_heart(&next).is_some_and(|h2| rs.length(h2) < len) {
                    self.moves -= cand.0.len();
                    self.apply(&cand)?;
                    self.log("heart", &cand, format!("heart condition now below {}", rs.word_label(h)));
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return Ok(false);
            }
        }
    }
}

/// Looks for `g` with `epsilon(g xi) != 0`, first by the descent moves
/// `s` and `s y` (`y` in `U_s`) on cells and then on the heart condition,
/// then by seeded random atoms until the budget of atomic moves runs out.
pub fn nonvanishing_search<F: Field>(aug: &Augmenter<F>, xi: &[F::Elem], budget: usize, seed: u64) -> Result<SearchOutcome> {
    if xi.len() != aug.dim() {
        return Err(Error::Domain(format!("vector has length {}, E_J has dimension {}", xi.len(), aug.dim())));
    }
    if xi.iter().all(|x| aug.field.is_zero(x)) {
        return Err(Error::Domain("the zero vector has no nonvanishing translate".into()));
    }
    let mut s = Search { aug, xi: xi.to_vec(), word: GroupWord::default(), moves: 0, budget, trace: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = aug.group();
    let rank = g.rank();
    let q = g.field().q();
    loop {
        if aug.augmentation_nonzero(&s.xi) {
            break;
        }
        let ok = s.phase_one()? && s.phase_two()?;
        if ok || aug.augmentation_nonzero(&s.xi) {
            break;
        }
        // fallback: one random s_i or x_i(c), then retry the descent
        let atom = if rng.gen_bool(0.5) {
            Atom::Weyl(rng.gen_range(0..rank))
        } else {
            Atom::Root { root: rng.gen_range(0..rank), c: FqElem(rng.gen_range(1..q) as u16) }
        };
        let word = GroupWord(vec![atom]);
        if !s.apply(&word)? {
            s.trace.push(SearchStep { phase: "exhausted".into(), word: String::new(), note: format!("budget {budget} used") });
            break;
        }
        s.log("random", &word, "descent stalled".into());
    }
    let profile = aug.augmentation(&s.xi);
    Ok(SearchOutcome {
        success: profile.nonzero,
        word_length: s.word.0.len(),
        word: s.word,
        moves_used: s.moves,
        profile,
        trace: s.trace,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;
    use std::sync::Arc;

    use super::*;
    use crate::coeff::PrimeField;
    use crate::field::Fq;
    use crate::flagmod::{ej_presentation, EjMode, FlagSpace, DEFAULT_DIM_CAP};
    use crate::rootsys::{CartanType, RootSystem};

    fn group(rank: usize, q: u32) -> Chevalley {
        let rs = Arc::new(RootSystem::new(CartanType::A, rank).unwrap());
        Chevalley::new(rs, Fq::new(q).unwrap()).unwrap()
    }

    fn random_vector(f: &PrimeField, n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
        loop {
            let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.order())).collect();
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    }

    #[test]
    fn projections_partition_the_identity() {
        let f = PrimeField::new(5).unwrap();
        let g = group(2, 2);
        let aug = Augmenter::new(&g, &f, NodeSet::from_nodes(&[0])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cells: Vec<WeylElement> = aug.cells.keys().copied().collect();
        for _ in 0..20 {
            let xi = random_vector(&f, aug.dim(), &mut rng);
            let mut total = aug.zero();
            for &w in &cells {
                let p = aug.project(w, &xi).unwrap();
                assert_eq!(aug.project(w, &p).unwrap(), p);
                for &w2 in cells.iter().filter(|&&w2| w2 != w) {
                    assert!(aug.project(w2, &p).unwrap().iter().all(|&x| x == 0));
                }
                total = total.iter().zip(&p).map(|(a, b)| f.add(a, b)).collect();
            }
            assert_eq!(total, xi);
        }
        let c = aug.c_j();
        assert_eq!(aug.project(g.root_system().identity(), &c).unwrap(), c);
        assert!(aug.project(g.root_system().simple_reflection(0), &c).is_err());
    }

    #[test]
    fn augmentation_examples() {
        let f = PrimeField::new(5).unwrap();
        let g = group(2, 4);
        let rs = g.root_system();
        for j in NodeSet::all(2) {
            let aug = Augmenter::new(&g, &f, j).unwrap();
            let p = aug.augmentation(&aug.c_j());
            assert_eq!(p.values[0], "1");
            assert!(p.values[1..].iter().all(|v| v == "0"));
            // group sum over a whole cell counts its elements
            for (&w, cell) in &aug.cells {
                let mut v = aug.zero();
                for &k in cell {
                    v[k] = 1;
                }
                assert_eq!(aug.cell_sum(w, &v).unwrap(), (cell.len() % 5) as u32);
            }
            // U permutes each cell, so the profile is U-invariant
            let mut rng = ChaCha8Rng::seed_from_u64(j.0 as u64);
            for _ in 0..5 {
                let xi = random_vector(&f, aug.dim(), &mut rng);
                let u = g.random_unipotent(&mut rng);
                let moved = aug.act_word(&g.unipotent_word(&u), &xi).unwrap();
                assert_eq!(aug.augmentation(&moved), aug.augmentation(&xi));
            }
        }
        let aug = Augmenter::new(&g, &f, NodeSet::full(2)).unwrap();
        assert_eq!(aug.augmentation(&aug.c_j()).cells, vec!["e"]);
        assert_eq!(rs.label(), "A2");
    }

    #[test]
    fn heart_condition_examples() {
        let f = PrimeField::new(5).unwrap();
        let g = group(2, 2);
        let j = NodeSet::full(2);
        let aug = Augmenter::new(&g, &f, j).unwrap();
        let pd = g.root_system().parabolic_data(j).unwrap();
        let c = aug.c_j();
        for &h in &pd.w_group {
            assert!(aug.heart_condition(&c, h).unwrap());
        }
        // x1(1) C_J - C_J cancels over U'_e = U but not over U'_{w_J}
        let x = g.root_element(0, FqElem::ONE).unwrap();
        let mut v = aug.zero();
        v[aug.e_index[&g.unipotent_identity()]] = 1;
        v[aug.e_index[&x]] = f.neg(&1);
        assert!(!aug.heart_condition(&v, g.root_system().identity()).unwrap());
        assert!(aug.heart_condition(&v, pd.w_j).unwrap());
        let small = Augmenter::new(&g, &f, NodeSet::from_nodes(&[0])).unwrap();
        assert!(small.heart_condition(&small.c_j(), g.root_system().simple_reflection(1)).is_err());
    }

    #[test]
    fn rewriting_action_matches_quotient_matrices() {
        let f = PrimeField::new(5).unwrap();
        let g = group(2, 3);
        let space = FlagSpace::new(g.clone(), DEFAULT_DIM_CAP).unwrap();
        let gens = crate::flagmod::generators(&g);
        for j in NodeSet::all(2) {
            let aug = Augmenter::new(&g, &f, j).unwrap();
            let p = ej_presentation(&space, &f, j, EjMode::Quotient, DEFAULT_DIM_CAP).unwrap();
            for (a, m) in gens.iter().zip(&p.matrices) {
                for k in 0..aug.dim() {
                    let mut e = aug.zero();
                    e[k] = 1;
                    assert_eq!(aug.act_atom(a, &e).unwrap(), m.column(k));
                }
            }
        }
    }

    #[test]
    fn search_trivial_and_rank_one() {
        let f = PrimeField::new(5).unwrap();
        let g = group(1, 3);
        let aug = Augmenter::new(&g, &f, NodeSet::full(1)).unwrap();
        let out = nonvanishing_search(&aug, &aug.c_j(), DEFAULT_BUDGET, 0).unwrap();
        assert!(out.success);
        assert_eq!(out.word_length, 0);
        // (u - 1) C_I in the Steinberg module of SL_2(3)
        let u = FlagBasisIndex { w: g.root_system().identity(), u: g.root_element(0, FqElem::ONE).unwrap() };
        let xi: Vec<u32> = aug.basis_vector(&u).unwrap().iter().zip(aug.c_j()).map(|(a, b)| f.sub(a, &b)).collect();
        assert!(!aug.augmentation(&xi).nonzero);
        // exhaustive words of length <= 2 certify that a witness exists
        let mut atoms = vec![Atom::Weyl(0)];
        atoms.extend(g.field().nonzero().map(|c| Atom::Root { root: 0, c }));
        let witness = atoms.iter().flat_map(|a| atoms.iter().map(move |b| GroupWord(vec![a.clone(), b.clone()]))).any(|w| {
            aug.augmentation(&aug.act_word(&w, &xi).unwrap()).nonzero
        });
        assert!(witness);
        let out = nonvanishing_search(&aug, &xi, DEFAULT_BUDGET, 0).unwrap();
        assert!(out.success);
        assert!(aug.augmentation(&aug.act_word(&out.word, &xi).unwrap()).nonzero);
        assert!(nonvanishing_search(&aug, &aug.zero(), 10, 0).is_err());
    }

    #[test]
    fn search_batch_a2() {
        let f = PrimeField::new(5).unwrap();
        let g = group(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut lengths = HashSet::new();
        for j in NodeSet::all(2) {
            let aug = Augmenter::new(&g, &f, j).unwrap();
            for t in 0..25 {
                let xi = random_vector(&f, aug.dim(), &mut rng);
                let out = nonvanishing_search(&aug, &xi, DEFAULT_BUDGET, t).unwrap();
                assert!(out.success, "J = {j}: {:?}", out.trace);
                assert!(aug.augmentation(&aug.act_word(&out.word, &xi).unwrap()).nonzero);
                lengths.insert(out.word_length);
            }
        }
        assert!(lengths.len() > 1);
    }

    #[test]
    fn search_reaches_vectors_with_zero_augmentation() {
        let f = PrimeField::new(2).unwrap();
        let g = group(2, 2);
        let j = NodeSet::full(2);
        let aug = Augmenter::new(&g, &f, j).unwrap();
        // every vector whose cell sums all vanish, in the Steinberg module over F_2
        let n = aug.dim();
        let mut found = 0;
        for mask in 1u32..(1 << n) {
            let xi: Vec<u32> = (0..n).map(|k| (mask >> k) & 1).collect();
            if aug.augmentation(&xi).nonzero {
                continue;
            }
            found += 1;
            let out = nonvanishing_search(&aug, &xi, DEFAULT_BUDGET, mask as u64).unwrap();
            assert!(out.success, "{xi:?}: {:?}", out.trace);
        }
        assert!(found > 0);
    }
}
