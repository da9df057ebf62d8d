//! The permutation module `F[G/B]`.
//!
//! Every coset of `B` has a unique form `u w B` with `w` in `W` and `u` in
//! `U_{w^{-1}}`, the product of the root subgroups `U_a` with `w^{-1}(a) < 0`.
//! [`FlagSpace`] numbers these cosets densely and computes left translation
//! by generators; [`FlagVector`] is a sparse combination of cosets.

mod modules;
mod rewrite;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use modules::{
    ej_basis, ej_presentation, eta, mj_basis, mj_presentation, uw_eta, BasisCheck, EjMode, EjQuotient, ModuleKind,
    ModulePresentation,
};
pub use rewrite::{ej_rewriting_matrices, lemma23_rewrite, RewriteCase, RewriteOutput, Rewriter, Term};

use crate::chevalley::{Atom, Chevalley, GroupWord, RootOrder, UnipotentElement};
use crate::coeff::Field;
use crate::error::{check_cap, Error, Result};
use crate::field::FqElem;
use crate::rootsys::{RootSystem, WeylElement};

/// Default cap on the number of cosets and on spin dimensions.
pub const DEFAULT_DIM_CAP: usize = 5000;

/// A coset `u w B` in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FlagBasisIndex {
    pub w: WeylElement,
    pub u: UnipotentElement,
}

/// The set `G/B` with a dense numbering and generator actions.
#[derive(Clone, Debug)]
pub struct FlagSpace {
    g: Chevalley,
    inv: Vec<Vec<usize>>,
    orders: Vec<RootOrder>,
    simple_last: Vec<RootOrder>,
    offsets: Vec<usize>,
    size: usize,
    /// For a negative root `r`: `(w, i, s)` with `eps_r(c) = w eps_{a_i}(s c) w^{-1}`.
    neg_root: Vec<(WeylElement, usize, i8)>,
}

impl FlagSpace {
    pub fn new(g: Chevalley, cap: usize) -> Result<FlagSpace> {
        let rs = g.root_system();
        let q = g.field().q() as usize;
        let mut size = 0usize;
        let mut offsets = Vec::with_capacity(rs.weyl_order());
        for w in rs.weyl_elements() {
            offsets.push(size);
            size = size.saturating_add(q.saturating_pow(rs.length(w) as u32));
            check_cap("number of cosets in G/B", size, cap)?;
        }
        let mut inv = Vec::with_capacity(rs.weyl_order());
        let mut orders = Vec::with_capacity(rs.weyl_order());
        for w in rs.weyl_elements() {
            let (neg, _) = rs.inversion_sets(rs.inverse(w));
            orders.push(RootOrder::with_prefix(rs, &neg)?);
            inv.push(neg);
        }
        let simple_last = (0..rs.rank())
            .map(|i| {
                let mut seq: Vec<usize> = rs.positive_roots().filter(|&r| r != i).collect();
                seq.push(i);
                RootOrder::from_sequence(rs, seq)
            })
            .collect::<Result<_>>()?;
        let mut neg_root = Vec::new();
        for r in rs.num_positive()..rs.num_roots() {
            let found = rs.weyl_elements().find_map(|w| {
                (0..rs.rank()).find_map(|i| {
                    let (r2, c) = g.conj_root_by_weyl(w, i, FqElem::ONE);
                    (r2 == r).then(|| (w, i, if c == FqElem::ONE { 1 } else { -1 }))
                })
            });
            neg_root.push(found.ok_or_else(|| Error::Domain(format!("root {r} is not conjugate to a simple root")))?);
        }
        Ok(FlagSpace { g, inv, orders, simple_last, offsets, size, neg_root })
    }

    pub fn group(&self) -> &Chevalley {
        &self.g
    }
    pub fn root_system(&self) -> &RootSystem {
        self.g.root_system()
    }
    /// Number of cosets, `sum_w q^{l(w)}`.
    pub fn size(&self) -> usize {
        self.size
    }
    /// `Phi^-_{w^{-1}}` in height order: the roots carried by the `u` of a `w`-cell.
    pub fn cell_roots(&self, w: WeylElement) -> &[usize] {
        &self.inv[w.index()]
    }
    pub fn cell_range(&self, w: WeylElement) -> std::ops::Range<usize> {
        let k = w.index();
        let end = self.offsets.get(k + 1).copied().unwrap_or(self.size);
        self.offsets[k]..end
    }

    pub fn index(&self, b: &FlagBasisIndex) -> usize {
        let q = self.g.field().q() as usize;
        let digits = &self.inv[b.w.index()];
        let mut idx = 0usize;
        for &r in digits.iter().rev() {
            idx = idx * q + b.u.coord(r).0 as usize;
        }
        self.offsets[b.w.index()] + idx
    }

    pub fn basis(&self, idx: usize) -> FlagBasisIndex {
        let k = self.offsets.partition_point(|&o| o <= idx) - 1;
        let q = self.g.field().q() as usize;
        let mut rest = idx - self.offsets[k];
        let mut coords = vec![FqElem::ZERO; self.g.num_positive()];
        for &r in &self.inv[k] {
            coords[r] = FqElem((rest % q) as u16);
            rest /= q;
        }
        FlagBasisIndex { w: WeylElement(k as u32), u: UnipotentElement::from_coords(coords) }
    }

    /// The coset `x w B` for `x` given as a product of positive-root factors.
    pub fn normalize(&self, w: WeylElement, factors: impl IntoIterator<Item = (usize, FqElem)>) -> FlagBasisIndex {
        let mut coords = self.g.collect(&self.orders[w.index()], factors);
        let keep = &self.inv[w.index()];
        for (r, c) in coords.iter_mut().enumerate() {
            if !keep.contains(&r) {
                *c = FqElem::ZERO;
            }
        }
        FlagBasisIndex { w, u: UnipotentElement::from_coords(coords) }
    }

    fn u_factors(&self, b: &FlagBasisIndex) -> Vec<(usize, FqElem)> {
        Chevalley::factors(self.g.height_order(), b.u.coords())
    }

    /// Left translation of a coset by one atom.
    pub fn apply_atom(&self, atom: &Atom, b: &FlagBasisIndex) -> FlagBasisIndex {
        let g = &self.g;
        let rs = g.root_system();
        match atom {
            Atom::Root { root, c } if rs.is_positive(*root) => {
                let factors = std::iter::once((*root, *c)).chain(self.u_factors(b));
                self.normalize(b.w, factors)
            }
            Atom::Root { root, c } => {
                let (w, i, s) = self.neg_root[*root - rs.num_positive()];
                let e = if s > 0 { *c } else { g.field().neg(*c) };
                let mut word = g.word_inverse(&g.weyl_word(w)).0;
                word.insert(0, Atom::Root { root: i, c: e });
                let mut full = g.weyl_word(w).0;
                full.extend(word);
                self.apply_word(&GroupWord(full), b)
            }
            Atom::Torus(t) => FlagBasisIndex { w: b.w, u: g.conj_by_torus(t, &b.u) },
            Atom::Weyl(i) => {
                let i = *i;
                let order = &self.simple_last[i];
                let coords = g.recollect(b.u.coords(), g.height_order(), order);
                let c = coords[i];
                let v: Vec<(usize, FqElem)> = Chevalley::factors(order, &coords)
                    .into_iter()
                    .filter(|&(r, _)| r != i)
                    .map(|(r, x)| g.conj_simple(i, r, x))
                    .collect();
                if c.is_zero() {
                    self.normalize(rs.mul_simple_left(i, b.w), v)
                } else {
                    // s x_i(c) s^{-1} = x_{-a}(d) = x_a(1/d) s h x_a(1/d), and the
                    // trailing factors are absorbed since s_i w < w here.
                    let d = if g.constants().eta(i, i) > 0 { c } else { g.field().neg(c) };
                    let a = g.field().inv(d).expect("d is nonzero");
                    self.normalize(b.w, v.into_iter().chain(std::iter::once((i, a))))
                }
            }
        }
    }

    /// Left translation by a word `a_1 ... a_n` (rightmost atom acts first).
    pub fn apply_word(&self, word: &GroupWord, b: &FlagBasisIndex) -> FlagBasisIndex {
        word.0.iter().rev().fold(b.clone(), |acc, a| self.apply_atom(a, &acc))
    }

    /// The coset `word B`.
    pub fn canonical_coset(&self, word: &GroupWord) -> FlagBasisIndex {
        self.apply_word(word, &self.base_point())
    }

    /// The coset `B` itself.
    pub fn base_point(&self) -> FlagBasisIndex {
        FlagBasisIndex { w: WeylElement::IDENTITY, u: self.g.unipotent_identity() }
    }

    /// Image index of every coset under `atom`.
    pub fn permutation(&self, atom: &Atom) -> Vec<u32> {
        (0..self.size).map(|k| self.index(&self.apply_atom(atom, &self.basis(k))) as u32).collect()
    }

    /// Generators of `G(F_q)`: root elements `eps_{a_i}(b)` for an additive
    /// basis `b` of `F_q`, the representatives `s_i`, and `h_i(z)` for a
    /// primitive element `z` (omitted when `q = 2`).
    pub fn generators(&self) -> Vec<Atom> {
        generators(&self.g)
    }
}

pub fn generators(g: &Chevalley) -> Vec<Atom> {
    let fq = g.field();
    let mut out = Vec::new();
    for i in 0..g.rank() {
        for b in fq.additive_basis() {
            out.push(Atom::Root { root: i, c: b });
        }
        out.push(Atom::Weyl(i));
        if fq.q() > 2 {
            let t = crate::chevalley::TorusElement::coroot(g.rank(), i, fq.generator()).expect("generator is nonzero");
            out.push(Atom::Torus(t));
        }
    }
    out
}

/// Applies a coset permutation to a dense vector.
pub fn permute_dense<F: Field>(field: &F, perm: &[u32], v: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); v.len()];
    for (k, x) in v.iter().enumerate() {
        if !field.is_zero(x) {
            out[perm[k] as usize] = x.clone();
        }
    }
    out
}

/// A sparse combination of cosets. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVector<F: Field> {
    field: F,
    terms: BTreeMap<usize, F::Elem>,
}

impl<F: Field> FlagVector<F> {
    pub fn zero(field: &F) -> Self {
        FlagVector { field: field.clone(), terms: BTreeMap::new() }
    }
    pub fn basis(field: &F, idx: usize) -> Self {
        let mut v = Self::zero(field);
        v.add_term(idx, field.one());
        v
    }
    pub fn from_dense(field: &F, v: &[F::Elem]) -> Self {
        let terms = v.iter().enumerate().filter(|(_, x)| !field.is_zero(x)).map(|(k, x)| (k, x.clone())).collect();
        FlagVector { field: field.clone(), terms }
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn terms(&self) -> &BTreeMap<usize, F::Elem> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn get(&self, idx: usize) -> F::Elem {
        self.terms.get(&idx).cloned().unwrap_or_else(|| self.field.zero())
    }
    pub fn add_term(&mut self, idx: usize, c: F::Elem) {
        let f = &self.field;
        let cur = self.get(idx);
        let s = f.add(&cur, &c);
        if f.is_zero(&s) {
            self.terms.remove(&idx);
        } else {
            self.terms.insert(idx, s);
        }
    }
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out
    }
    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f);
        }
        FlagVector { field: f.clone(), terms: self.terms.iter().map(|(&k, x)| (k, f.mul(x, c))).collect() }
    }
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }
    pub fn to_dense(&self, size: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); size];
        for (&k, x) in &self.terms {
            v[k] = x.clone();
        }
        v
    }
    /// Sum of all coefficients.
    pub fn augmentation(&self) -> F::Elem {
        self.terms.values().fold(self.field.zero(), |acc, x| self.field.add(&acc, x))
    }

    /// Left translation by a word.
    pub fn act(&self, space: &FlagSpace, word: &GroupWord) -> Self {
        let mut out = Self::zero(&self.field);
        for (&k, c) in &self.terms {
            let img = space.apply_word(word, &space.basis(k));
            out.add_term(space.index(&img), c.clone());
        }
        out
    }

    pub fn act_atom(&self, space: &FlagSpace, atom: &Atom) -> Self {
        self.act(space, &GroupWord(vec![atom.clone()]))
    }
}
