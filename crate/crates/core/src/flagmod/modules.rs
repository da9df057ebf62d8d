//! The submodules `M_J = F G eta_J` and the subquotients `E_J = M_J / M_J'`.

use std::collections::HashMap;

use serde::Serialize;

use super::{generators, permute_dense, FlagBasisIndex, FlagSpace, FlagVector};
use crate::chevalley::{Atom, Chevalley, GroupWord, UnipotentElement};
use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::field::FqElem;
use crate::linalg::{spin, Echelon, Matrix};
use crate::rootsys::{NodeSet, RootSystem, WeylElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleKind {
    M,
    E,
}

/// How the `E_J` action matrices are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EjMode {
    /// Linear algebra in `F[G/B]` modulo `M_J'`.
    Quotient,
    /// Symbolic rewriting of `s_i u w C_J` without touching cosets.
    Rewriting,
    /// Both, with an entrywise comparison.
    Both,
}

impl std::str::FromStr for EjMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<EjMode> {
        match s {
            "quotient" => Ok(EjMode::Quotient),
            "rewriting" => Ok(EjMode::Rewriting),
            "both" => Ok(EjMode::Both),
            _ => Err(Error::Config(format!("unknown mode '{s}' (use quotient, rewriting or both)"))),
        }
    }
}

/// Outcome of checking a claimed basis in the finite model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisCheck {
    /// Number of claimed basis vectors.
    pub claimed: usize,
    /// Rank of the claimed vectors (modulo `M_J'` for `E_J`).
    pub rank: usize,
    /// Dimension of the module computed independently by spinning.
    pub module_dim: usize,
    /// Every generator maps the span of the claimed vectors into itself.
    pub stable: bool,
    pub holds: bool,
}

/// A module given by a basis and one action matrix per generator.
#[derive(Clone, Debug)]
pub struct ModulePresentation<F: Field> {
    pub kind: ModuleKind,
    pub j: NodeSet,
    /// Basis labels `(w, u)` standing for `u w eta_J` (or `u w C_J`).
    pub basis: Vec<FlagBasisIndex>,
    pub generators: Vec<Atom>,
    /// Matrices acting on column vectors; empty when the basis check failed.
    pub matrices: Vec<Matrix<F>>,
    pub check: Option<BasisCheck>,
    /// Entrywise agreement of the quotient and rewriting constructions.
    pub modes_agree: Option<bool>,
}

impl<F: Field> ModulePresentation<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `eta_J = sum_{v in W_J} (-1)^{l(v)} v B`.
pub fn eta<F: Field>(space: &FlagSpace, field: &F, j: NodeSet) -> FlagVector<F> {
    uw_eta(space, field, &space.group().unipotent_identity(), WeylElement::IDENTITY, j)
}

/// The vector `u w eta_J`.
pub fn uw_eta<F: Field>(space: &FlagSpace, field: &F, u: &UnipotentElement, w: WeylElement, j: NodeSet) -> FlagVector<F> {
    let rs = space.root_system();
    let factors = Chevalley::factors(space.group().height_order(), u.coords());
    let mut out = FlagVector::zero(field);
    for v in rs.parabolic_subgroup(j) {
        let sign = if rs.length(v) % 2 == 0 { field.one() } else { field.neg(&field.one()) };
        let b = space.normalize(rs.mul(w, v), factors.iter().copied());
        out.add_term(space.index(&b), sign);
    }
    out
}

/// All `u` in `U_{w_J w^{-1}}`, in mixed-radix order over the roots of that group.
pub(crate) fn cell_elements(g: &Chevalley, w_j: WeylElement, w: WeylElement) -> Vec<UnipotentElement> {
    let rs = g.root_system();
    let (roots, _) = rs.inversion_sets(rs.mul(w_j, rs.inverse(w)));
    let q = g.field().q() as usize;
    let count = q.pow(roots.len() as u32);
    (0..count)
        .map(|mut k| {
            let mut coords = vec![FqElem::ZERO; rs.num_positive()];
            for &r in &roots {
                coords[r] = FqElem((k % q) as u16);
                k /= q;
            }
            UnipotentElement::from_coords(coords)
        })
        .collect()
}

fn basis_over(g: &Chevalley, w_j: WeylElement, reps: &[WeylElement]) -> Vec<FlagBasisIndex> {
    reps.iter()
        .flat_map(|&w| cell_elements(g, w_j, w).into_iter().map(move |u| FlagBasisIndex { w, u }))
        .collect()
}

/// Labels of the claimed basis `{u w eta_J : w in X_J, u in U_{w_J w^{-1}}}` of `M_J`.
pub fn mj_basis(g: &Chevalley, j: NodeSet) -> Result<Vec<FlagBasisIndex>> {
    let pd = g.root_system().parabolic_data(j)?;
    Ok(basis_over(g, pd.w_j, &pd.x_j))
}

/// Labels of the claimed basis `{u w C_J : w in Y_J, u in U_{w_J w^{-1}}}` of `E_J`.
pub fn ej_basis(g: &Chevalley, j: NodeSet) -> Result<Vec<FlagBasisIndex>> {
    let pd = g.root_system().parabolic_data(j)?;
    Ok(basis_over(g, pd.w_j, &pd.y_j))
}

fn check_subset(rs: &RootSystem, j: NodeSet) -> Result<()> {
    if !j.is_subset(NodeSet::full(rs.rank())) {
        return Err(Error::Domain(format!("{j} is not a set of simple nodes of {}", rs.label())));
    }
    Ok(())
}

/// Builds `M_J` on its claimed basis, after checking that the basis vectors
/// are independent, span a generator-stable space, and that this space has
/// the dimension of the spin of `eta_J`.
pub fn mj_presentation<F: Field>(space: &FlagSpace, field: &F, j: NodeSet, cap: usize) -> Result<ModulePresentation<F>> {
    check_subset(space.root_system(), j)?;
    let g = space.group();
    let gens = generators(g);
    let perms: Vec<Vec<u32>> = gens.iter().map(|a| space.permutation(a)).collect();
    let size = space.size();
    let basis = mj_basis(g, j)?;
    let vecs: Vec<Vec<F::Elem>> = basis.iter().map(|b| uw_eta(space, field, &b.u, b.w, j).to_dense(size)).collect();
    let mut ech = Echelon::with_tracking(field.clone(), size);
    for v in &vecs {
        ech.insert(v);
    }
    let seed = eta(space, field, j).to_dense(size);
    let module_dim = spin(field, size, &[seed], gens.len(), |k, v| permute_dense(field, &perms[k], v), cap)?.dim();
    let rank = ech.dim();
    let mut matrices = Vec::new();
    let mut stable = true;
    if rank == basis.len() {
        for perm in &perms {
            let mut cols = Vec::with_capacity(vecs.len());
            for v in &vecs {
                match ech.express(&permute_dense(field, perm, v)) {
                    Some(c) => cols.push(c),
                    None => {
                        stable = false;
                        break;
                    }
                }
            }
            if !stable {
                break;
            }
            matrices.push(Matrix::from_columns(field, basis.len(), &cols));
        }
    } else {
        stable = false;
    }
    let holds = stable && rank == basis.len() && module_dim == rank;
    if !holds {
        matrices.clear();
    }
    let check = BasisCheck { claimed: basis.len(), rank, module_dim, stable, holds };
    Ok(ModulePresentation {
        kind: ModuleKind::M,
        j,
        basis,
        generators: gens,
        matrices,
        check: Some(check),
        modes_agree: None,
    })
}

/// `E_J` realised inside `F[G/B]`: lifts of the basis vectors, the subspace
/// `M_J'`, and the reduced images used to read off coordinates.
#[derive(Clone, Debug)]
pub struct EjQuotient<F: Field> {
    field: F,
    j: NodeSet,
    basis: Vec<FlagBasisIndex>,
    lifts: Vec<Vec<F::Elem>>,
    mj_prime: Echelon<F>,
    reduced: Echelon<F>,
    presentation: ModulePresentation<F>,
}

impl<F: Field> EjQuotient<F> {
    pub fn build(space: &FlagSpace, field: &F, j: NodeSet, cap: usize) -> Result<EjQuotient<F>> {
        let rs = space.root_system();
        check_subset(rs, j)?;
        let g = space.group();
        let gens = generators(g);
        let perms: Vec<Vec<u32>> = gens.iter().map(|a| space.permutation(a)).collect();
        let size = space.size();
        let act = |k: usize, v: &[F::Elem]| permute_dense(field, &perms[k], v);

        let mj = spin(field, size, &[eta(space, field, j).to_dense(size)], gens.len(), act, cap)?;
        let supersets: Vec<Vec<F::Elem>> = NodeSet::all(rs.rank())
            .filter(|&k| k != j && j.is_subset(k))
            .map(|k| eta(space, field, k).to_dense(size))
            .collect();
        let contained = supersets.iter().all(|v| mj.contains(v));
        let mj_prime = spin(field, size, &supersets, gens.len(), act, cap)?;

        let basis = ej_basis(g, j)?;
        let lifts: Vec<Vec<F::Elem>> = basis.iter().map(|b| uw_eta(space, field, &b.u, b.w, j).to_dense(size)).collect();
        let mut reduced = Echelon::with_tracking(field.clone(), size);
        for v in &lifts {
            reduced.insert(&mj_prime.reduce(v));
        }
        let rank = reduced.dim();
        let module_dim = mj.dim() - mj_prime.dim();
        let mut stable = rank == basis.len();
        let mut matrices = Vec::new();
        if stable {
            'gens: for perm in &perms {
                let mut cols = Vec::with_capacity(lifts.len());
                for v in &lifts {
                    match reduced.express(&mj_prime.reduce(&permute_dense(field, perm, v))) {
                        Some(c) => cols.push(c),
                        None => {
                            stable = false;
                            break 'gens;
                        }
                    }
                }
                matrices.push(Matrix::from_columns(field, basis.len(), &cols));
            }
        }
        let holds = stable && contained && rank == basis.len() && module_dim == rank;
        if !holds {
            matrices.clear();
        }
        let check = BasisCheck { claimed: basis.len(), rank, module_dim, stable, holds };
        let presentation = ModulePresentation {
            kind: ModuleKind::E,
            j,
            basis: basis.clone(),
            generators: gens,
            matrices,
            check: Some(check),
            modes_agree: None,
        };
        Ok(EjQuotient { field: field.clone(), j, basis, lifts, mj_prime, reduced, presentation })
    }

    pub fn presentation(&self) -> &ModulePresentation<F> {
        &self.presentation
    }
    pub fn into_presentation(self) -> ModulePresentation<F> {
        self.presentation
    }
    pub fn j(&self) -> NodeSet {
        self.j
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[FlagBasisIndex] {
        &self.basis
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn holds(&self) -> bool {
        self.presentation.check.as_ref().is_some_and(|c| c.holds)
    }

    /// A vector of `F[G/B]` lifting the `E_J` vector with coordinates `coords`.
    pub fn lift(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.mj_prime.ncols()];
        for (c, l) in coords.iter().zip(&self.lifts) {
            if f.is_zero(c) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(l) {
                if !f.is_zero(x) {
                    *o = f.add(o, &f.mul(c, x));
                }
            }
        }
        out
    }

    /// Coordinates of the image of an `M_J` vector in `E_J`; `None` if it is not in `M_J`.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.reduced.express(&self.mj_prime.reduce(v))
    }

    /// Acts by a group word on `E_J` coordinates.
    pub fn act_word(&self, space: &FlagSpace, word: &GroupWord, coords: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let lifted = FlagVector::from_dense(&self.field, &self.lift(coords));
        let moved = lifted.act(space, word).to_dense(space.size());
        self.coordinates(&moved).ok_or_else(|| Error::Domain("image left M_J; the E_J model is inconsistent".into()))
    }

    /// Matrix of a word on `E_J`.
    pub fn word_matrix(&self, space: &FlagSpace, word: &GroupWord) -> Result<Matrix<F>> {
        let f = &self.field;
        let n = self.dim();
        let cols = (0..n)
            .map(|k| {
                let mut e = vec![f.zero(); n];
                e[k] = f.one();
                self.act_word(space, word, &e)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(f, n, &cols))
    }
}

/// Builds `E_J` in the requested mode. In `Both` mode the quotient matrices
/// are returned and `modes_agree` records the comparison.
pub fn ej_presentation<F: Field>(
    space: &FlagSpace,
    field: &F,
    j: NodeSet,
    mode: EjMode,
    cap: usize,
) -> Result<ModulePresentation<F>> {
    match mode {
        EjMode::Quotient => Ok(EjQuotient::build(space, field, j, cap)?.into_presentation()),
        EjMode::Rewriting => {
            let g = space.group();
            let gens = generators(g);
            let matrices = super::ej_rewriting_matrices(g, field, j, &gens)?;
            Ok(ModulePresentation {
                kind: ModuleKind::E,
                j,
                basis: ej_basis(g, j)?,
                generators: gens,
                matrices,
                check: None,
                modes_agree: None,
            })
        }
        EjMode::Both => {
            let mut p = EjQuotient::build(space, field, j, cap)?.into_presentation();
            let rewritten = super::ej_rewriting_matrices(space.group(), field, j, &p.generators)?;
            p.modes_agree = Some(!p.matrices.is_empty() && p.matrices == rewritten);
            Ok(p)
        }
    }
}

/// Basis position of each label, for translating between constructions.
pub(crate) fn label_index(basis: &[FlagBasisIndex]) -> HashMap<FlagBasisIndex, usize> {
    basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect()
}
