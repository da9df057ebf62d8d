//! Symbolic action on `E_J` by the three-case rule for `s_i u_i w eta_J`.
//!
//! Nothing here touches cosets of `B`: vectors are combinations of basis
//! labels `u w C_J`, generators are pushed through with unipotent collection,
//! the rank-one decomposition, and a straightening step that rewrites
//! `w eta_J` for `w` in `X_J \ Y_J` modulo `M_J'`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::modules::{ej_basis, label_index};
use super::FlagBasisIndex;
use crate::chevalley::{Atom, Chevalley, RootOrder, UnipotentElement};
use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::field::FqElem;
use crate::linalg::Matrix;
use crate::rootsys::{NodeSet, ParabolicSubset, WeylElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RewriteCase {
    /// `l(s_i w w_J) > l(w w_J)`: the result is `s_i w eta_J`.
    I,
    /// `s_i w < w`: the result is `f(u_i) w eta_J`.
    II,
    /// Otherwise: the result is `(f(u_i) - 1) w eta_J`.
    III,
}

/// `coeff * u w eta_J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub u: UnipotentElement,
    pub w: WeylElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteOutput {
    pub case: RewriteCase,
    pub terms: Vec<Term>,
}

/// Rewrites `s_i eps_{a_i}(c) w eta_J` for `c != 0` and `w` with
/// `l(w w_J) = l(w) + l(w_J)`.
pub fn lemma23_rewrite(g: &Chevalley, i: usize, c: FqElem, w: WeylElement, j: NodeSet) -> Result<RewriteOutput> {
    let rs = g.root_system();
    if i >= rs.rank() {
        return Err(Error::Domain(format!("simple index {i} out of range")));
    }
    if c.is_zero() {
        return Err(Error::Domain("u_i must be a nonidentity element of U_{alpha_i}".into()));
    }
    let pd = rs.parabolic_data(j)?;
    let wwj = rs.mul(w, pd.w_j);
    if rs.length(wwj) != rs.length(w) + rs.length(pd.w_j) {
        return Err(Error::Precondition(format!(
            "l(w w_J) != l(w) + l(w_J) for w = {}, J = {j}",
            rs.word_label(w)
        )));
    }
    let id = g.unipotent_identity();
    let si_w = rs.mul_simple_left(i, w);
    if rs.length(rs.mul_simple_left(i, wwj)) > rs.length(wwj) {
        return Ok(RewriteOutput { case: RewriteCase::I, terms: vec![Term { coeff: 1, u: id, w: si_w }] });
    }
    let f = g.root_element(i, g.sl2_decompose(i, c)?.f)?;
    if rs.length(si_w) < rs.length(w) {
        Ok(RewriteOutput { case: RewriteCase::II, terms: vec![Term { coeff: 1, u: f, w }] })
    } else {
        Ok(RewriteOutput {
            case: RewriteCase::III,
            terms: vec![Term { coeff: 1, u: f, w }, Term { coeff: -1, u: id, w }],
        })
    }
}

/// The symbolic `E_J` engine for one `J`.
pub struct Rewriter {
    g: Chevalley,
    j: NodeSet,
    pd: ParabolicSubset,
    x_set: HashSet<WeylElement>,
    y_set: HashSet<WeylElement>,
    basis: Vec<FlagBasisIndex>,
    index: HashMap<FlagBasisIndex, usize>,
    simple_last: Vec<RootOrder>,
    cells: RefCell<HashMap<WeylElement, (Vec<usize>, RootOrder)>>,
    straight: RefCell<HashMap<WeylElement, Vec<(WeylElement, i64)>>>,
}

impl Rewriter {
    pub fn new(g: &Chevalley, j: NodeSet) -> Result<Rewriter> {
        let rs = g.root_system();
        let pd = rs.parabolic_data(j)?;
        let basis = ej_basis(g, j)?;
        let index = label_index(&basis);
        let simple_last = (0..rs.rank())
            .map(|i| {
                let mut seq: Vec<usize> = rs.positive_roots().filter(|&r| r != i).collect();
                seq.push(i);
                RootOrder::from_sequence(rs, seq)
            })
            .collect::<Result<_>>()?;
        Ok(Rewriter {
            g: g.clone(),
            j,
            x_set: pd.x_j.iter().copied().collect(),
            y_set: pd.y_j.iter().copied().collect(),
            pd,
            basis,
            index,
            simple_last,
            cells: RefCell::new(HashMap::new()),
            straight: RefCell::new(HashMap::new()),
        })
    }

    pub fn basis(&self) -> &[FlagBasisIndex] {
        &self.basis
    }

    /// The part of `x` in `U_{w_J y^{-1}}`; the rest fixes `y eta_J`.
    fn project(&self, y: WeylElement, factors: &[(usize, FqElem)]) -> UnipotentElement {
        let rs = self.g.root_system();
        let mut cells = self.cells.borrow_mut();
        let (roots, order) = cells.entry(y).or_insert_with(|| {
            let (roots, _) = rs.inversion_sets(rs.mul(self.pd.w_j, rs.inverse(y)));
            let order = RootOrder::with_prefix(rs, &roots).expect("valid prefix");
            (roots, order)
        });
        let mut coords = self.g.collect(order, factors.iter().copied());
        for (r, c) in coords.iter_mut().enumerate() {
            if !roots.contains(&r) {
                *c = FqElem::ZERO;
            }
        }
        UnipotentElement::from_coords(coords)
    }

    /// `w eta_J` modulo `M_J'` as a combination of `y eta_J`, `y` in `Y_J`.
    pub fn straighten(&self, w: WeylElement) -> Vec<(WeylElement, i64)> {
        if let Some(s) = self.straight.borrow().get(&w) {
            return s.clone();
        }
        let rs = self.g.root_system();
        let result = if self.y_set.contains(&w) {
            vec![(w, 1)]
        } else {
            let wwj = rs.mul(w, self.pd.w_j);
            let extra = NodeSet(rs.descents(wwj).0 & !self.j.0);
            let k = extra.nodes()[0];
            let kset = self.j.insert(k);
            let pk = rs.parabolic_data(kset).expect("valid subset");
            let z = rs.mul(wwj, pk.w_j);
            let x0 = rs.mul(pk.w_j, self.pd.w_j);
            let sign0 = if rs.length(x0) % 2 == 0 { 1 } else { -1 };
            let mut acc: BTreeMap<WeylElement, i64> = BTreeMap::new();
            // z eta_K = sum over x in W_K cap X_J of (-1)^{l(x)} (z x) eta_J lies in M_J'.
            for x in pk.w_group.iter().copied().filter(|x| self.x_set.contains(x)) {
                if x == x0 {
                    continue;
                }
                let sx = if rs.length(x) % 2 == 0 { 1 } else { -1 };
                for (y, c) in self.straighten(rs.mul(z, x)) {
                    *acc.entry(y).or_insert(0) += -sign0 * sx * c;
                }
            }
            acc.into_iter().filter(|&(_, c)| c != 0).collect()
        };
        self.straight.borrow_mut().insert(w, result.clone());
        result
    }

    /// Expands `coeff * x w eta_J` (with `w` in `X_J`) in the `E_J` basis.
    fn expand(&self, coeff: i64, factors: &[(usize, FqElem)], w: WeylElement, out: &mut BTreeMap<usize, i64>) -> Result<()> {
        for (y, c) in self.straighten(w) {
            let label = FlagBasisIndex { w: y, u: self.project(y, factors) };
            let k = *self.index.get(&label).ok_or_else(|| Error::Domain("label outside the E_J basis".into()))?;
            *out.entry(k).or_insert(0) += coeff * c;
        }
        Ok(())
    }

    /// Image of basis vector `k` under an atom, as integer coefficients.
    pub fn act_basis(&self, atom: &Atom, k: usize) -> Result<BTreeMap<usize, i64>> {
        let g = &self.g;
        let rs = g.root_system();
        let b = &self.basis[k];
        let mut out = BTreeMap::new();
        let u_factors = Chevalley::factors(g.height_order(), b.u.coords());
        match atom {
            Atom::Torus(t) => {
                let u = g.conj_by_torus(t, &b.u);
                let f = Chevalley::factors(g.height_order(), u.coords());
                self.expand(1, &f, b.w, &mut out)?;
            }
            Atom::Root { root, c } if rs.is_positive(*root) => {
                let mut f = vec![(*root, *c)];
                f.extend(u_factors);
                self.expand(1, &f, b.w, &mut out)?;
            }
            Atom::Root { .. } => {
                return Err(Error::Unsupported("rewriting acts by positive root elements, s_i and torus elements".into()))
            }
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
                    let siw = rs.mul_simple_left(i, b.w);
                    if self.x_set.contains(&siw) {
                        self.expand(1, &v, siw, &mut out)?;
                    } else {
                        // s_i w = w s_j with j in J, and s_j eta_J = -eta_J
                        self.expand(-1, &v, b.w, &mut out)?;
                    }
                } else {
                    for t in lemma23_rewrite(g, i, c, b.w, self.j)?.terms {
                        let mut f = v.clone();
                        f.extend(Chevalley::factors(g.height_order(), t.u.coords()));
                        self.expand(t.coeff, &f, t.w, &mut out)?;
                    }
                }
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }

    /// Matrix of an atom on `E_J` over `field`.
    pub fn matrix<F: Field>(&self, field: &F, atom: &Atom) -> Result<Matrix<F>> {
        let n = self.basis.len();
        let mut m = Matrix::zeros(field, n, n);
        for k in 0..n {
            for (row, c) in self.act_basis(atom, k)? {
                m.set(row, k, field.from_i64(c));
            }
        }
        Ok(m)
    }
}

/// Generator matrices on `E_J` obtained purely by rewriting.
pub fn ej_rewriting_matrices<F: Field>(g: &Chevalley, field: &F, j: NodeSet, gens: &[Atom]) -> Result<Vec<Matrix<F>>> {
    let rw = Rewriter::new(g, j)?;
    gens.iter().map(|a| rw.matrix(field, a)).collect()
}
