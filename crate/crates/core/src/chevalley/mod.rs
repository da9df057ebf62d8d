//! Exact group calculus in a split simply-connected Chevalley group `G(F_q)`.
//!
//! Elements of the maximal unipotent subgroup `U` are coordinate vectors over
//! the positive roots: `coords[r] = c_r` stands for the ordered product of the
//! root elements `eps_r(c_r)` taken in a [`RootOrder`]. Products are put back
//! into normal form by collection with the commutator relation
//! `[eps_a(x), eps_b(y)] = eps_{a+b}(N(a, b) x y)`, which is the only one that
//! occurs in simply-laced type.
//!
//! Conventions: the Weyl representative is
//! `s_i = eps_{a_i}(1) eps_{-a_i}(-1) eps_{a_i}(1)`, and the torus is written in
//! simple-coroot coordinates `t = prod_j h_j(lambda_j)`.

mod constants;
mod matrix;
mod selfcheck;

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use constants::{order_hash, ConstantsCache, StructureConstants};
pub use matrix::FqMatrix;
pub use selfcheck::{selfcheck, sl2_matrix_check, SelfCheckReport, Sl2Check};

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::rootsys::{RootSystem, WeylElement};

/// A total order on the positive roots, used as a product order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootOrder {
    seq: Vec<usize>,
    pos: Vec<usize>,
}

impl RootOrder {
    /// Roots by increasing height (the root numbering itself).
    pub fn height(rs: &RootSystem) -> RootOrder {
        let n = rs.num_positive();
        RootOrder { seq: (0..n).collect(), pos: (0..n).collect() }
    }

    pub fn from_sequence(rs: &RootSystem, seq: Vec<usize>) -> Result<RootOrder> {
        let n = rs.num_positive();
        let mut pos = vec![usize::MAX; n];
        for (k, &r) in seq.iter().enumerate() {
            if r >= n || pos[r] != usize::MAX {
                return Err(Error::Domain(format!("{seq:?} is not an ordering of the positive roots")));
            }
            pos[r] = k;
        }
        if seq.len() != n {
            return Err(Error::Domain(format!("{seq:?} is not an ordering of the positive roots")));
        }
        Ok(RootOrder { seq, pos })
    }

    /// `first` (in height order) followed by every other root (in height order).
    pub fn with_prefix(rs: &RootSystem, first: &[usize]) -> Result<RootOrder> {
        let mut seq: Vec<usize> = first.to_vec();
        seq.sort_unstable();
        seq.dedup();
        seq.extend(rs.positive_roots().filter(|r| !first.contains(r)));
        Self::from_sequence(rs, seq)
    }

    pub fn sequence(&self) -> &[usize] {
        &self.seq
    }
    pub fn position(&self, r: usize) -> usize {
        self.pos[r]
    }
}

/// An element of `U` in normal form with respect to the height order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnipotentElement {
    coords: Vec<FqElem>,
}

impl UnipotentElement {
    pub fn identity(npos: usize) -> Self {
        UnipotentElement { coords: vec![FqElem::ZERO; npos] }
    }
    pub fn from_coords(coords: Vec<FqElem>) -> Self {
        UnipotentElement { coords }
    }
    pub fn coords(&self) -> &[FqElem] {
        &self.coords
    }
    pub fn coord(&self, r: usize) -> FqElem {
        self.coords[r]
    }
    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
    pub fn support(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&r| !self.coords[r].is_zero()).collect()
    }
}

/// An element `prod_j h_j(lambda_j)` of the split torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusElement {
    vals: Vec<FqElem>,
}

impl TorusElement {
    pub fn identity(rank: usize) -> Self {
        TorusElement { vals: vec![FqElem::ONE; rank] }
    }
    pub fn new(vals: Vec<FqElem>) -> Result<Self> {
        if vals.iter().any(|v| v.is_zero()) {
            return Err(Error::Domain("torus coordinates must be nonzero".into()));
        }
        Ok(TorusElement { vals })
    }
    /// `h_i(lambda)`.
    pub fn coroot(rank: usize, i: usize, lambda: FqElem) -> Result<Self> {
        let mut vals = vec![FqElem::ONE; rank];
        vals[i] = lambda;
        Self::new(vals)
    }
    pub fn values(&self) -> &[FqElem] {
        &self.vals
    }
    pub fn is_identity(&self) -> bool {
        self.vals.iter().all(|&v| v == FqElem::ONE)
    }
    pub fn mul(&self, fq: &Fq, other: &TorusElement) -> TorusElement {
        TorusElement { vals: self.vals.iter().zip(&other.vals).map(|(&a, &b)| fq.mul(a, b)).collect() }
    }
    pub fn inverse(&self, fq: &Fq) -> TorusElement {
        TorusElement { vals: self.vals.iter().map(|&a| fq.pow(a, -1)).collect() }
    }
}

/// One generator in a [`GroupWord`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Atom {
    /// `eps_root(c)` for any root index (negative roots allowed).
    Root { root: usize, c: FqElem },
    /// The representative `s_i`.
    Weyl(usize),
    Torus(TorusElement),
}

/// A product `a_1 a_2 ... a_n` of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GroupWord(pub Vec<Atom>);

/// Output of [`Chevalley::sl2_decompose`]:
/// `s_i eps_i(c) s_i^{-1} = eps_i(f) s_i h eps_i(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Decomposition {
    pub f: FqElem,
    pub h: TorusElement,
    pub g: FqElem,
}

/// The two factorizations returned by [`Chevalley::factor_rel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// `u = a b` with `a` in the complement product and `b` in `V`.
    pub left: (UnipotentElement, UnipotentElement),
    /// `u = b' a'` with `b'` in `V`.
    pub right: (UnipotentElement, UnipotentElement),
}

/// The group `G(F_q)` attached to a root system.
#[derive(Clone, Debug)]
pub struct Chevalley {
    rs: Arc<RootSystem>,
    fq: Fq,
    sc: Arc<StructureConstants>,
    height: RootOrder,
}

impl Chevalley {
    pub fn new(rs: Arc<RootSystem>, fq: Fq) -> Result<Chevalley> {
        let sc = Arc::new(StructureConstants::build(&rs)?);
        Ok(Self::with_constants(rs, fq, sc))
    }

    pub fn with_constants(rs: Arc<RootSystem>, fq: Fq, sc: Arc<StructureConstants>) -> Chevalley {
        let height = RootOrder::height(&rs);
        Chevalley { rs, fq, sc, height }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }
    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }
    pub fn field(&self) -> &Fq {
        &self.fq
    }
    pub fn constants(&self) -> &StructureConstants {
        &self.sc
    }
    pub fn height_order(&self) -> &RootOrder {
        &self.height
    }
    pub fn rank(&self) -> usize {
        self.rs.rank()
    }
    pub fn num_positive(&self) -> usize {
        self.rs.num_positive()
    }

    #[inline]
    fn signed(&self, sign: i8, x: FqElem) -> FqElem {
        if sign >= 0 { x } else { self.fq.neg(x) }
    }

    // ---- unipotent collection ----

    /// Multiplies the ordered product `coords` (in `order`) on the right by
    /// `eps_beta(b)` and re-collects in place.
    pub fn mul_root_right(&self, order: &RootOrder, coords: &mut [FqElem], beta: usize, b: FqElem) {
        if b.is_zero() {
            return;
        }
        let p = order.pos[beta];
        let tail: Vec<(usize, FqElem)> =
            order.seq[p + 1..].iter().filter(|&&d| !coords[d].is_zero()).map(|&d| (d, coords[d])).collect();
        for &(d, _) in &tail {
            coords[d] = FqElem::ZERO;
        }
        coords[beta] = self.fq.add(coords[beta], b);
        // eps_b(-b) eps_d(c) eps_b(b) = eps_{b+d}(-N(b,d) b c) eps_d(c)
        for (d, c) in tail {
            if let Some(s) = self.rs.sum(beta, d) {
                let x = self.signed(-self.sc.n(beta, d), self.fq.mul(b, c));
                self.mul_root_right(order, coords, s, x);
            }
            self.mul_root_right(order, coords, d, c);
        }
    }

    /// Collects a sequence of positive-root factors into normal form for `order`.
    pub fn collect(&self, order: &RootOrder, factors: impl IntoIterator<Item = (usize, FqElem)>) -> Vec<FqElem> {
        let mut coords = vec![FqElem::ZERO; self.num_positive()];
        for (r, c) in factors {
            self.mul_root_right(order, &mut coords, r, c);
        }
        coords
    }

    /// Factors of an ordered product, skipping zeros.
    pub fn factors(order: &RootOrder, coords: &[FqElem]) -> Vec<(usize, FqElem)> {
        order.seq.iter().filter(|&&r| !coords[r].is_zero()).map(|&r| (r, coords[r])).collect()
    }

    /// Converts normal-form coordinates from order `from` to order `to`.
    pub fn recollect(&self, coords: &[FqElem], from: &RootOrder, to: &RootOrder) -> Vec<FqElem> {
        if from == to {
            return coords.to_vec();
        }
        self.collect(to, Self::factors(from, coords))
    }

    fn check_unipotent(&self, u: &UnipotentElement) -> Result<()> {
        if u.coords.len() != self.num_positive() || u.coords.iter().any(|&c| !self.fq.contains(c)) {
            return Err(Error::Domain(format!("element does not belong to U of {}", self.rs.label())));
        }
        Ok(())
    }

    pub fn unipotent_identity(&self) -> UnipotentElement {
        UnipotentElement::identity(self.num_positive())
    }

    /// `eps_r(c)` for a positive root `r`.
    pub fn root_element(&self, r: usize, c: FqElem) -> Result<UnipotentElement> {
        if !self.rs.is_positive(r) {
            return Err(Error::Domain(format!("root {r} is not positive")));
        }
        let mut u = self.unipotent_identity();
        u.coords[r] = c;
        Ok(u)
    }

    pub fn mul_unipotent(&self, u: &UnipotentElement, v: &UnipotentElement) -> Result<UnipotentElement> {
        self.check_unipotent(u)?;
        self.check_unipotent(v)?;
        let mut coords = u.coords.clone();
        for (r, c) in Self::factors(&self.height, &v.coords) {
            self.mul_root_right(&self.height, &mut coords, r, c);
        }
        Ok(UnipotentElement { coords })
    }

    pub fn inverse_unipotent(&self, u: &UnipotentElement) -> UnipotentElement {
        let factors = Self::factors(&self.height, &u.coords);
        let coords = self.collect(&self.height, factors.into_iter().rev().map(|(r, c)| (r, self.fq.neg(c))));
        UnipotentElement { coords }
    }

    pub fn random_unipotent<R: Rng>(&self, rng: &mut R) -> UnipotentElement {
        let q = self.fq.q();
        UnipotentElement { coords: (0..self.num_positive()).map(|_| FqElem(rng.gen_range(0..q) as u16)).collect() }
    }

    /// Splits `u` relative to the root subgroup product `V` (a closed set of
    /// positive roots): `u = a b` and `u = b' a'` with `b, b'` in `V` and
    /// `a, a'` in the product of the remaining root subgroups.
    pub fn factor_rel(&self, u: &UnipotentElement, v: &[usize]) -> Result<Factorization> {
        self.check_unipotent(u)?;
        let rs = &self.rs;
        let mut in_v = vec![false; rs.num_positive()];
        for &r in v {
            if !rs.is_positive(r) {
                return Err(Error::Domain(format!("root {r} in V is not positive")));
            }
            in_v[r] = true;
        }
        for &a in v {
            for &b in v {
                if let Some(s) = rs.sum(a, b) {
                    if !in_v[s] {
                        return Err(Error::Domain(format!("V is not closed: {a} + {b} = {s} is missing")));
                    }
                }
            }
        }
        let comp: Vec<usize> = rs.positive_roots().filter(|&r| !in_v[r]).collect();
        let v_sorted: Vec<usize> = rs.positive_roots().filter(|&r| in_v[r]).collect();
        let split = |coords: Vec<FqElem>, first_is_v: bool| {
            let pick = |want_v: bool| {
                UnipotentElement {
                    coords: (0..coords.len())
                        .map(|r| if in_v[r] == want_v { coords[r] } else { FqElem::ZERO })
                        .collect(),
                }
            };
            if first_is_v { (pick(true), pick(false)) } else { (pick(false), pick(true)) }
        };
        let left_order = RootOrder::from_sequence(rs, comp.iter().chain(&v_sorted).copied().collect())?;
        let right_order = RootOrder::from_sequence(rs, v_sorted.iter().chain(&comp).copied().collect())?;
        let left = split(self.recollect(&u.coords, &self.height, &left_order), false);
        let right = split(self.recollect(&u.coords, &self.height, &right_order), true);
        Ok(Factorization { left, right })
    }

    // ---- torus ----

    pub fn torus_identity(&self) -> TorusElement {
        TorusElement::identity(self.rank())
    }

    /// The character value `r(t)` for any root `r`.
    pub fn character(&self, r: usize, t: &TorusElement) -> FqElem {
        (0..self.rank()).fold(FqElem::ONE, |acc, j| {
            self.fq.mul(acc, self.fq.pow(t.vals[j], self.rs.pairing(r, j) as i64))
        })
    }

    pub fn conj_by_torus(&self, t: &TorusElement, u: &UnipotentElement) -> UnipotentElement {
        UnipotentElement {
            coords: u.coords.iter().enumerate().map(|(r, &c)| self.fq.mul(self.character(r, t), c)).collect(),
        }
    }

    /// `s_i t s_i^{-1}`.
    pub fn weyl_on_torus(&self, i: usize, t: &TorusElement) -> TorusElement {
        let cartan = self.rs.cartan();
        let mut vals = t.vals.clone();
        let mut new = self.fq.pow(t.vals[i], -1);
        for j in 0..self.rank() {
            if j != i && cartan[i][j] != 0 {
                new = self.fq.mul(new, self.fq.pow(t.vals[j], -(cartan[i][j] as i64)));
            }
        }
        vals[i] = new;
        TorusElement { vals }
    }

    // ---- Weyl representatives ----

    /// `s_i eps_r(c) s_i^{-1}` as a root element.
    #[inline]
    pub fn conj_simple(&self, i: usize, r: usize, c: FqElem) -> (usize, FqElem) {
        (self.rs.reflect(i, r), self.signed(self.sc.eta(i, r), c))
    }

    /// `s_i^{-1} eps_r(c) s_i`.
    pub fn conj_simple_inv(&self, i: usize, r: usize, c: FqElem) -> (usize, FqElem) {
        // s_i^{-1} = s_i h_i(-1)
        let sign = if self.rs.pairing(r, i).rem_euclid(2) == 0 { 1 } else { -1 };
        let (r2, c2) = self.conj_simple(i, r, c);
        (r2, self.signed(sign, c2))
    }

    /// `w eps_r(c) w^{-1}` for the representative of `w` built from its canonical word.
    pub fn conj_root_by_weyl(&self, w: WeylElement, r: usize, c: FqElem) -> (usize, FqElem) {
        self.rs.word(w).into_iter().rev().fold((r, c), |(r, c), i| self.conj_simple(i, r, c))
    }

    /// `w^{-1} eps_r(c) w`.
    pub fn conj_root_by_weyl_inv(&self, w: WeylElement, r: usize, c: FqElem) -> (usize, FqElem) {
        self.rs.word(w).into_iter().fold((r, c), |(r, c), i| self.conj_simple_inv(i, r, c))
    }

    /// `w u w^{-1}`, defined when `w` keeps the support of `u` positive.
    pub fn conj_by_weyl(&self, w: WeylElement, u: &UnipotentElement) -> Result<UnipotentElement> {
        self.check_unipotent(u)?;
        let mut images = Vec::new();
        for (r, c) in Self::factors(&self.height, &u.coords) {
            let (r2, c2) = self.conj_root_by_weyl(w, r, c);
            if !self.rs.is_positive(r2) {
                return Err(Error::Domain(format!(
                    "{} sends root {r} negative; reduce at the flag level instead",
                    self.rs.word_label(w)
                )));
            }
            images.push((r2, c2));
        }
        Ok(UnipotentElement { coords: self.collect(&self.height, images) })
    }

    /// The rank-one identity `s_i eps_i(c) s_i^{-1} = eps_i(f) s_i h eps_i(g)` for `c != 0`.
    pub fn sl2_decompose(&self, i: usize, c: FqElem) -> Result<Sl2Decomposition> {
        if i >= self.rank() {
            return Err(Error::Domain(format!("simple index {i} out of range")));
        }
        if c.is_zero() {
            return Err(Error::Domain("sl2_decompose needs a nonidentity element of U_{alpha_i}".into()));
        }
        // s eps(c) s^{-1} = eps_{-a}(d) with d = eta c, and
        // eps_{-a}(d) = eps_a(1/d) s h_a(-d) eps_a(1/d).
        let d = self.signed(self.sc.eta(i, i), c);
        let a = self.fq.inv(d)?;
        let h = TorusElement::coroot(self.rank(), i, self.fq.neg(d))?;
        Ok(Sl2Decomposition { f: a, h, g: a })
    }

    // ---- words ----

    pub fn atom_inverse(&self, a: &Atom) -> Vec<Atom> {
        match a {
            Atom::Root { root, c } => vec![Atom::Root { root: *root, c: self.fq.neg(*c) }],
            Atom::Weyl(i) => {
                let h = TorusElement::coroot(self.rank(), *i, self.fq.neg(FqElem::ONE)).expect("-1 is nonzero");
                vec![Atom::Weyl(*i), Atom::Torus(h)]
            }
            Atom::Torus(t) => vec![Atom::Torus(t.inverse(&self.fq))],
        }
    }

    pub fn word_inverse(&self, w: &GroupWord) -> GroupWord {
        GroupWord(w.0.iter().rev().flat_map(|a| self.atom_inverse(a)).collect())
    }

    /// The representative `w` as a word in the `s_i`.
    pub fn weyl_word(&self, w: WeylElement) -> GroupWord {
        GroupWord(self.rs.word(w).into_iter().map(Atom::Weyl).collect())
    }

    /// Word for an element of `U`, in height order.
    pub fn unipotent_word(&self, u: &UnipotentElement) -> GroupWord {
        GroupWord(Self::factors(&self.height, &u.coords).into_iter().map(|(root, c)| Atom::Root { root, c }).collect())
    }
}
