//! Equal-characteristic tools: group sums, fixed points of finite `p`-groups
//! and the reductions that move a nonzero vector of `E_J` to a single group
//! sum `X w C_J` and then down to the cell of `e`.
//!
//! Every reduction returns a [`Certificate`]: the operators it applied, in
//! order, and the resulting vector. [`Certificate::verify`] replays the
//! operators and checks membership in the submodule generated by the input
//! by exact rank.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::augment::{render_word, Augmenter};
use crate::chevalley::{Atom, Chevalley, GroupWord, UnipotentElement};
use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::flagmod::{FlagSpace, FlagVector};
use crate::linalg::{spin, Echelon, Matrix};
use crate::rootsys::WeylElement;
use crate::selfenc::{additive_span, closure, UnipotentSubgroup, DEFAULT_GROUP_CAP};

/// Fails unless the coefficient field and the base field share a characteristic.
pub fn require_equal_characteristic<F: Field>(field: &F, fq: &Fq) -> Result<()> {
    if field.characteristic() != fq.p() {
        return Err(Error::Config(format!(
            "equal-characteristic procedures need char {} coefficients, got {}",
            fq.p(),
            field.label()
        )));
    }
    Ok(())
}

fn add_vec<F: Field>(f: &F, a: &mut [F::Elem], b: &[F::Elem]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = f.add(x, y);
    }
}

fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

/// `X v = sum_{x in X} x v` on `E_J`.
pub fn apply_group_sum<F: Field>(aug: &Augmenter<F>, xs: &[GroupWord], v: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let mut out = aug.zero();
    for x in xs {
        add_vec(aug.field(), &mut out, &aug.act_word(x, v)?);
    }
    Ok(out)
}

/// `X v` for a set of unipotent elements.
pub fn apply_unipotent_sum<F: Field>(aug: &Augmenter<F>, xs: &[UnipotentElement], v: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let g = aug.group();
    let words: Vec<GroupWord> = xs.iter().map(|x| g.unipotent_word(x)).collect();
    apply_group_sum(aug, &words, v)
}

/// `X v` on the full permutation module.
pub fn apply_group_sum_flag<F: Field>(space: &FlagSpace, xs: &[GroupWord], v: &FlagVector<F>) -> FlagVector<F> {
    xs.iter().fold(FlagVector::zero(v.field()), |acc, x| acc.add(&v.act(space, x)))
}

/// A finite abelian group `Z/m_1 x ... x Z/m_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    moduli: Vec<u32>,
}

impl AbelianGroup {
    pub fn new(moduli: Vec<u32>) -> Result<AbelianGroup> {
        if moduli.iter().any(|&m| m < 2) {
            return Err(Error::Domain("cyclic factors need order at least 2".into()));
        }
        Ok(AbelianGroup { moduli })
    }
    pub fn order(&self) -> usize {
        self.moduli.iter().map(|&m| m as usize).product()
    }
    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect()
    }
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &m in &self.moduli {
            out = out.into_iter().flat_map(|e| (0..m).map(move |x| [e.clone(), vec![x]].concat())).collect();
        }
        out
    }
    pub fn is_subgroup(&self, s: &BTreeSet<Vec<u32>>) -> bool {
        s.contains(&vec![0; self.moduli.len()]) && s.iter().all(|a| s.iter().all(|b| s.contains(&self.add(a, b))))
    }
    /// Every subgroup, as element sets.
    pub fn subgroups(&self) -> Vec<BTreeSet<Vec<u32>>> {
        let zero = vec![0; self.moduli.len()];
        let mut seen: HashSet<Vec<Vec<u32>>> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = vec![BTreeSet::from([zero])];
        while let Some(s) = queue.pop() {
            if !seen.insert(s.iter().cloned().collect()) {
                continue;
            }
            for g in self.elements() {
                if !s.contains(&g) {
                    queue.push(self.generate(&s, &g));
                }
            }
            out.push(s);
        }
        out.sort_by_key(|s| (s.len(), s.iter().cloned().collect::<Vec<_>>()));
        out
    }
    fn generate(&self, s: &BTreeSet<Vec<u32>>, g: &[u32]) -> BTreeSet<Vec<u32>> {
        let mut out = s.clone();
        let mut frontier: Vec<Vec<u32>> = s.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            let y = self.add(&x, g);
            if out.insert(y.clone()) {
                frontier.push(y.clone());
                for z in s {
                    let w = self.add(&y, z);
                    if out.insert(w.clone()) {
                        frontier.push(w);
                    }
                }
            }
        }
        out
    }
}

/// The two possible values of `H' K` in the group algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SumIdentity {
    Zero,
    Full,
    /// Neither outcome; never expected on valid inputs.
    Other,
}

/// Computes `H' K` in `F_p G` for `G = H x K` and `|H'| = |H|`.
pub fn abelian_sum_identity(
    g: &AbelianGroup,
    p: u32,
    h: &BTreeSet<Vec<u32>>,
    k: &BTreeSet<Vec<u32>>,
    h_prime: &BTreeSet<Vec<u32>>,
) -> Result<SumIdentity> {
    for (name, s) in [("H", h), ("K", k), ("H'", h_prime)] {
        if !g.is_subgroup(s) {
            return Err(Error::Precondition(format!("{name} is not a subgroup")));
        }
    }
    if h.len() * k.len() != g.order() || h.intersection(k).count() != 1 {
        return Err(Error::Precondition("G is not the direct product of H and K".into()));
    }
    if h_prime.len() != h.len() {
        return Err(Error::Precondition(format!("|H'| = {} but |H| = {}", h_prime.len(), h.len())));
    }
    let mut counts: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    for a in h_prime {
        for b in k {
            *counts.entry(g.add(a, b)).or_insert(0) += 1;
        }
    }
    let residues: Vec<u32> = g.elements().iter().map(|x| counts.get(x).copied().unwrap_or(0) % p).collect();
    Ok(if residues.iter().all(|&r| r == 0) {
        SumIdentity::Zero
    } else if residues.iter().all(|&r| r == 1) {
        SumIdentity::Full
    } else {
        SumIdentity::Other
    })
}

/// Basis of the vectors in `span(s)` fixed by every element of `gens`.
pub fn fixed_points<F: Field>(aug: &Augmenter<F>, gens: &[UnipotentElement], s: &[Vec<F::Elem>]) -> Result<Vec<Vec<F::Elem>>> {
    let f = aug.field();
    let g = aug.group();
    let mut ech = Echelon::new(f.clone(), aug.dim());
    let basis: Vec<Vec<F::Elem>> = s.iter().filter(|v| ech.insert(v)).cloned().collect();
    // columns (v - 1) b_i for every generator, stacked
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    let mut images: Vec<Vec<Vec<F::Elem>>> = Vec::new();
    for x in gens {
        let word = g.unipotent_word(x);
        let imgs: Vec<Vec<F::Elem>> = basis
            .iter()
            .map(|b| {
                let y = aug.act_word(&word, b)?;
                if !ech.contains(&y) {
                    return Err(Error::Domain("subspace is not stable under the group".into()));
                }
                Ok(y.iter().zip(b).map(|(a, c)| f.sub(a, c)).collect())
            })
            .collect::<Result<_>>()?;
        images.push(imgs);
    }
    for imgs in &images {
        for r in 0..aug.dim() {
            rows.push(imgs.iter().map(|col| col[r].clone()).collect());
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let null = if rows.is_empty() {
        (0..basis.len())
            .map(|i| (0..basis.len()).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(rows).nullspace(f)
    };
    Ok(null
        .into_iter()
        .map(|c| {
            let mut v = aug.zero();
            for (ci, b) in c.iter().zip(&basis) {
                let scaled: Vec<F::Elem> = b.iter().map(|x| f.mul(ci, x)).collect();
                add_vec(f, &mut v, &scaled);
            }
            v
        })
        .collect())
}

/// One operator applied during a reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operator {
    /// Left multiplication by a group element.
    Element(GroupWord),
    /// `x - 1`.
    MinusOne(UnipotentElement),
    /// The group sum over an explicit set.
    Sum(Vec<UnipotentElement>),
}

impl Operator {
    pub fn apply<F: Field>(&self, aug: &Augmenter<F>, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        match self {
            Operator::Element(w) => aug.act_word(w, v),
            Operator::MinusOne(x) => {
                let y = aug.act_word(&aug.group().unipotent_word(x), v)?;
                Ok(y.iter().zip(v).map(|(a, b)| aug.field().sub(a, b)).collect())
            }
            Operator::Sum(xs) => apply_unipotent_sum(aug, xs, v),
        }
    }

    pub fn render(&self, g: &Chevalley) -> String {
        let u = |x: &UnipotentElement| render_word(g, &g.unipotent_word(x));
        match self {
            Operator::Element(w) => render_word(g, w),
            Operator::MinusOne(x) => format!("({} - 1)", u(x)),
            Operator::Sum(xs) => format!("sum[{}]", xs.iter().map(u).collect::<Vec<_>>().join(", ")),
        }
    }
}

/// A vector `a_w X_w w C_J` summed over cells, each `X_w` a subgroup of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumShape<E> {
    pub cells: Vec<(WeylElement, E, BTreeSet<UnipotentElement>)>,
}

/// Recognises `v` as a combination of cell-wise group sums.
pub fn group_sum_shape<F: Field>(aug: &Augmenter<F>, v: &[F::Elem]) -> Option<SumShape<F::Elem>> {
    let f = aug.field();
    let g = aug.group();
    let mut by_cell: BTreeMap<WeylElement, Vec<usize>> = BTreeMap::new();
    for (k, x) in v.iter().enumerate() {
        if !f.is_zero(x) {
            by_cell.entry(aug.basis()[k].w).or_default().push(k);
        }
    }
    let mut cells = Vec::new();
    for (w, ks) in by_cell {
        let a = v[ks[0]].clone();
        if ks.iter().any(|&k| v[k] != a) {
            return None;
        }
        let set: BTreeSet<UnipotentElement> = ks.iter().map(|&k| aug.basis()[k].u.clone()).collect();
        let closed = set.contains(&g.unipotent_identity())
            && set.iter().all(|x| set.iter().all(|y| g.mul_unipotent(x, y).is_ok_and(|z| set.contains(&z))));
        if !closed {
            return None;
        }
        cells.push((w, a, set));
    }
    Some(SumShape { cells })
}

/// The outcome of a reduction: operators applied to the input, in order.
#[derive(Clone, Debug)]
pub struct Certificate<F: Field> {
    pub input: Vec<F::Elem>,
    pub operators: Vec<Operator>,
    pub output: Vec<F::Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub operators: Vec<String>,
    pub output: Vec<String>,
    pub cell: Option<String>,
    pub group_order: Option<usize>,
}

impl<F: Field> Certificate<F> {
    fn new(input: &[F::Elem]) -> Self {
        Certificate { input: input.to_vec(), operators: Vec::new(), output: input.to_vec() }
    }

    fn push<A: Field<Elem = F::Elem>>(&mut self, aug: &Augmenter<A>, op: Operator) -> Result<()> {
        self.output = op.apply(aug, &self.output)?;
        self.operators.push(op);
        Ok(())
    }

    /// Replays the operators and checks that the output lies in the
    /// submodule generated by the input.
    pub fn verify(&self, aug: &Augmenter<F>) -> Result<bool> {
        let mut v = self.input.clone();
        for op in &self.operators {
            v = op.apply(aug, &v)?;
        }
        if v != self.output {
            return Ok(false);
        }
        Ok(submodule(aug, &self.input)?.contains(&self.output))
    }

    pub fn report(&self, aug: &Augmenter<F>) -> CertificateReport {
        let g = aug.group();
        let shape = group_sum_shape(aug, &self.output).filter(|s| s.cells.len() == 1);
        CertificateReport {
            operators: self.operators.iter().map(|o| o.render(g)).collect(),
            output: self.output.iter().map(|x| aug.field().render(x)).collect(),
            cell: shape.as_ref().map(|s| g.root_system().word_label(s.cells[0].0)),
            group_order: shape.map(|s| s.cells[0].2.len()),
        }
    }
}

/// The submodule generated by `v`.
pub fn submodule<F: Field>(aug: &Augmenter<F>, v: &[F::Elem]) -> Result<Echelon<F>> {
    let gens = crate::flagmod::generators(aug.group());
    let err = std::cell::RefCell::new(None);
    let act = |k: usize, x: &[F::Elem]| match aug.act_atom(&gens[k], x) {
        Ok(y) => y,
        Err(e) => {
            *err.borrow_mut() = Some(e);
            x.to_vec()
        }
    };
    let ech = spin(aug.field(), aug.dim(), &[v.to_vec()], gens.len(), act, aug.dim())?;
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(ech),
    }
}

/// Why a reduction stopped early.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stall {
    pub step: String,
    pub reason: String,
}

pub struct Reduction<F: Field> {
    pub certificate: Certificate<F>,
    /// `(w, X)` with output `a X w C_J`, when the reduction completed.
    pub result: Option<(WeylElement, BTreeSet<UnipotentElement>)>,
    pub stall: Option<Stall>,
}

fn single_cell<E>(shape: &Option<SumShape<E>>) -> Option<(WeylElement, BTreeSet<UnipotentElement>)> {
    match shape {
        Some(s) if s.cells.len() == 1 => Some((s.cells[0].0, s.cells[0].2.clone())),
        _ => None,
    }
}

/// Nontrivial additive subgroups of `F_q`, smallest first.
fn field_subgroups(fq: &Fq) -> Vec<BTreeSet<FqElem>> {
    let mut out: Vec<BTreeSet<FqElem>> = Vec::new();
    let mut frontier = vec![BTreeSet::from([FqElem::ZERO])];
    let mut seen = HashSet::new();
    while let Some(s) = frontier.pop() {
        for c in fq.nonzero() {
            if !s.contains(&c) {
                let t = additive_span(fq, s.iter().copied().chain([c]));
                if seen.insert(t.clone()) {
                    frontier.push(t.clone());
                    out.push(t);
                }
            }
        }
    }
    out.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
    out
}

/// Group sums over nontrivial subgroups of single root subgroups `U_b`.
fn root_multipliers(g: &Chevalley, roots: &[usize]) -> Result<Vec<Vec<UnipotentElement>>> {
    let subs = field_subgroups(g.field());
    let mut out = Vec::new();
    for s in &subs {
        for &r in roots {
            out.push(s.iter().map(|&c| g.root_element(r, c)).collect::<Result<Vec<_>>>()?);
        }
    }
    Ok(out)
}

/// Breadth-first search over products of at most `depth` operators for a
/// vector accepted by `goal`.
fn operator_search<F: Field>(
    aug: &Augmenter<F>,
    start: &[F::Elem],
    ops: &[Operator],
    depth: usize,
    goal: impl Fn(&[F::Elem]) -> bool,
) -> Result<Option<Vec<Operator>>> {
    let mut layer: Vec<(Vec<F::Elem>, Vec<Operator>)> = vec![(start.to_vec(), Vec::new())];
    let mut seen: HashSet<Vec<F::Elem>> = HashSet::from([start.to_vec()]);
    for _ in 0..depth {
        let mut next = Vec::new();
        for (v, path) in &layer {
            for op in ops {
                let w = op.apply(aug, v)?;
                if is_zero_vec(aug.field(), &w) || !seen.insert(w.clone()) {
                    continue;
                }
                let mut p = path.clone();
                p.push(op.clone());
                if goal(&w) {
                    return Ok(Some(p));
                }
                next.push((w, p));
            }
        }
        layer = next;
    }
    Ok(None)
}

/// Moves a nonzero `xi` to `a X w C_J` for one cell `w` and a subgroup
/// `X` of `U_{w_J w^{-1}}`.
///
/// First `V`, the self-enclosed closure of the labels in the support, is
/// applied through factors `v - 1` until the vector is `V`-fixed; it then
/// has the form `sum_w a_w V_{w_J w^{-1}} w C_J`. Cells are removed one at a
/// time with a coset-sum multiplier built from a root `g` lying in some but
/// not all of the `Phi^-_{w_J w^{-1}}`, falling back to a bounded search over
/// sums of root subgroups.
pub fn oneterm_reduce<F: Field>(aug: &Augmenter<F>, xi: &[F::Elem]) -> Result<Reduction<F>> {
    let g = aug.group();
    require_equal_characteristic(aug.field(), g.field())?;
    let f = aug.field();
    if is_zero_vec(f, xi) {
        return Err(Error::Domain("oneterm reduction needs a nonzero vector".into()));
    }
    let rs = g.root_system();
    let pd = rs.parabolic_data(aug.j())?;
    let mut cert = Certificate::new(xi);
    let labels: Vec<UnipotentElement> =
        xi.iter().enumerate().filter(|(_, x)| !f.is_zero(x)).map(|(k, _)| aug.basis()[k].u.clone()).collect();
    let mut v_group = closure(g, &labels, DEFAULT_GROUP_CAP)?;

    // reach a V-fixed vector through the nilpotent augmentation ideal
    let gens: Vec<UnipotentElement> = v_group.generators().to_vec();
    for _ in 0..=aug.dim() * gens.len().max(1) {
        let moved = gens.iter().find(|x| {
            Operator::MinusOne((*x).clone()).apply(aug, &cert.output).is_ok_and(|y| !is_zero_vec(f, &y))
        });
        match moved {
            Some(x) => cert.push(aug, Operator::MinusOne(x.clone()))?,
            None => break,
        }
    }
    let stall = |cert: Certificate<F>, step: &str, reason: String| Reduction {
        certificate: cert,
        result: None,
        stall: Some(Stall { step: step.into(), reason }),
    };
    let Some(mut shape) = group_sum_shape(aug, &cert.output) else {
        return Ok(stall(cert, "fixed", "V-fixed vector is not a sum of cell group sums".into()));
    };

    while shape.cells.len() > 1 {
        let cell_roots: Vec<Vec<usize>> =
            shape.cells.iter().map(|(w, _, _)| rs.inversion_sets(rs.mul(pd.w_j, rs.inverse(*w))).0).collect();
        let mut union: Vec<usize> = cell_roots.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        union.sort_by_key(|&r| (g.height_order().position(r), r));
        let before = shape.cells.len();
        let accept = |v: &[F::Elem]| group_sum_shape(aug, v).is_some_and(|s| s.cells.len() < before);

        // the coset-sum multiplier
        let mut done = false;
        let s_idx = (0..union.len()).rev().find(|&i| cell_roots.iter().any(|c| !c.contains(&union[i])));
        if let Some(s_idx) = s_idx {
            let gamma = union[s_idx];
            let tail: Vec<usize> = union[s_idx..].to_vec();
            let v_part = v_group.root_part(gamma);
            if let Some(y) = g.field().elements().find(|c| !v_part.contains(c)) {
                let mut seeds: Vec<UnipotentElement> = v_group.elements().iter().cloned().collect();
                seeds.push(g.root_element(gamma, y)?);
                let x_group = closure(g, &seeds, DEFAULT_GROUP_CAP)?;
                if let Some(omega) = coset_representatives(g, &x_group, &v_group, &tail)? {
                    let op = Operator::Sum(omega);
                    let next = op.apply(aug, &cert.output)?;
                    if !is_zero_vec(f, &next) && accept(&next) {
                        cert.push(aug, op)?;
                        v_group = x_group;
                        done = true;
                    }
                }
            }
        }
        if !done {
            let ops: Vec<Operator> = root_multipliers(g, &union)?.into_iter().map(Operator::Sum).collect();
            match operator_search(aug, &cert.output, &ops, 2, accept)? {
                Some(path) => {
                    for op in path {
                        cert.push(aug, op)?;
                    }
                }
                None => return Ok(stall(cert, "cells", format!("no multiplier removes a cell from {before}"))),
            }
        }
        shape = group_sum_shape(aug, &cert.output).expect("accepted vectors have the sum shape");
    }
    let result = single_cell(&Some(shape));
    Ok(Reduction { certificate: cert, result, stall: None })
}

/// Left coset representatives of the product of the `tail` parts of `v`
/// inside the elements of `x` supported on `tail`.
fn coset_representatives(
    g: &Chevalley,
    x: &UnipotentSubgroup,
    v: &UnipotentSubgroup,
    tail: &[usize],
) -> Result<Option<Vec<UnipotentElement>>> {
    let within = |u: &UnipotentElement| u.support().iter().all(|r| tail.contains(r));
    let big: Vec<UnipotentElement> = x.elements().iter().filter(|u| within(u)).cloned().collect();
    let small: Vec<UnipotentElement> = v.elements().iter().filter(|u| within(u)).cloned().collect();
    let mut covered: HashSet<UnipotentElement> = HashSet::new();
    let mut reps = Vec::new();
    for a in &big {
        if covered.contains(a) {
            continue;
        }
        reps.push(a.clone());
        for b in &small {
            let ab = g.mul_unipotent(a, b)?;
            if !covered.insert(ab) {
                return Ok(None);
            }
        }
    }
    Ok((covered.len() == big.len()).then_some(reps))
}

/// From `a X (s w) C_J` with `s w` in `Y_J` and `s w > w`, reaches
/// `a' H w C_J` with `H` a subgroup of `U_{w_J w^{-1}}`: apply `s`, then
/// search over sums of subgroups of root subgroups on the roots of
/// `Phi^-_{w_J w^{-1}}` and `Phi^-_{w_J w^{-1} s}`.
pub fn leastterm_descend<F: Field>(
    aug: &Augmenter<F>,
    input: &[F::Elem],
    i: usize,
    depth: usize,
) -> Result<(Reduction<F>, bool)> {
    let g = aug.group();
    require_equal_characteristic(aug.field(), g.field())?;
    let rs = g.root_system();
    let pd = rs.parabolic_data(aug.j())?;
    let shape = group_sum_shape(aug, input);
    let Some((sw, _)) = single_cell(&shape) else {
        return Err(Error::Precondition("input is not a single-cell group sum".into()));
    };
    let w = rs.mul_simple_left(i, sw);
    if rs.length(w) >= rs.length(sw) {
        return Err(Error::Precondition(format!("s{} does not shorten {}", i + 1, rs.word_label(sw))));
    }
    let cell_w = rs.inversion_sets(rs.mul(pd.w_j, rs.inverse(w))).0;
    let cell_sw = rs.inversion_sets(rs.mul(pd.w_j, rs.inverse(sw))).0;
    // (U_{w_J w^{-1}})^s differs from U_{w_J w^{-1}}
    let conj: BTreeSet<usize> = cell_w.iter().map(|&r| rs.reflect(i, r)).collect();
    let moves_cell = conj != cell_w.iter().copied().collect::<BTreeSet<_>>();

    let mut cert = Certificate::new(input);
    cert.push(aug, Operator::Element(GroupWord(vec![Atom::Weyl(i)])))?;
    let goal = |v: &[F::Elem]| single_cell(&group_sum_shape(aug, v)).is_some_and(|(c, _)| c == w);
    if goal(&cert.output) {
        let result = single_cell(&group_sum_shape(aug, &cert.output));
        return Ok((Reduction { certificate: cert, result, stall: None }, moves_cell));
    }
    let roots: Vec<usize> = cell_w.iter().chain(&cell_sw).copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut ops: Vec<Operator> = root_multipliers(g, &roots)?.into_iter().map(Operator::Sum).collect();
    ops.push(Operator::Element(GroupWord(vec![Atom::Weyl(i)])));
    match operator_search(aug, &cert.output, &ops, depth, goal)? {
        Some(path) => {
            for op in path {
                cert.push(aug, op)?;
            }
            let result = single_cell(&group_sum_shape(aug, &cert.output));
            Ok((Reduction { certificate: cert, result, stall: None }, moves_cell))
        }
        None => Ok((
            Reduction {
                certificate: cert,
                result: None,
                stall: Some(Stall { step: "descend".into(), reason: format!("no multiplier product of depth <= {depth}") }),
            },
            moves_cell,
        )),
    }
}

/// Per-trial record of the full reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub j: String,
    pub completed: bool,
    pub stages: Vec<CertificateReport>,
    pub certificates_verified: bool,
    /// Coefficient sum of `w_J H C_J` over the cell of `e`, when reached.
    pub final_sum: Option<String>,
    pub final_sum_expected: String,
    pub c_j_in_submodule: bool,
    pub stall: Option<Stall>,
}

/// Runs the reduction from `xi` to `H C_J`, then checks the coefficient sum
/// of `w_J H C_J` and whether `C_J` lies in the submodule generated by `xi`.
pub fn pipeline<F: Field>(aug: &Augmenter<F>, xi: &[F::Elem], depth: usize) -> Result<PipelineReport> {
    let g = aug.group();
    let rs = g.root_system();
    let f = aug.field();
    let pd = rs.parabolic_data(aug.j())?;
    let sign = if rs.length(pd.w_j) % 2 == 0 { 1 } else { -1 };
    let mut stages = Vec::new();
    let mut verified = true;
    let one = oneterm_reduce(aug, xi)?;
    verified &= one.certificate.verify(aug)?;
    stages.push(one.certificate.report(aug));
    let c_j_in_submodule = submodule(aug, xi)?.contains(&aug.c_j());
    let mut report = PipelineReport {
        j: aug.j().to_string(),
        completed: false,
        stages,
        certificates_verified: verified,
        final_sum: None,
        final_sum_expected: f.render(&f.from_i64(sign)),
        c_j_in_submodule,
        stall: one.stall.clone(),
    };
    let Some((mut w, _)) = one.result else {
        return Ok(report);
    };
    let mut current = one.certificate.output.clone();
    while w != rs.identity() {
        let i = rs.left_descents(w).nodes()[0];
        let (red, _) = leastterm_descend(aug, &current, i, depth)?;
        let ok = red.certificate.verify(aug)? && submodule(aug, xi)?.contains(&red.certificate.output);
        report.certificates_verified &= ok;
        report.stages.push(red.certificate.report(aug));
        match red.result {
            Some((w2, _)) => {
                w = w2;
                current = red.certificate.output;
            }
            None => {
                report.stall = red.stall;
                return Ok(report);
            }
        }
    }
    // w_J applied to a C_J-cell group sum
    let wj = g.weyl_word(pd.w_j);
    let image = aug.act_word(&wj, &current)?;
    let scale = current.iter().find(|x| !f.is_zero(x)).cloned().expect("nonzero vector");
    let e_sum = aug.cell_sum(rs.identity(), &image)?;
    report.final_sum = Some(f.render(&f.mul(&e_sum, &f.inv(&scale))));
    report.completed = true;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::coeff::PrimeField;
    use crate::rootsys::{CartanType, NodeSet, RootSystem};

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
    fn group_sums() {
        let f = PrimeField::new(2).unwrap();
        let g = group(2, 2);
        let aug = Augmenter::new(&g, &f, NodeSet::full(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random_vector(&f, aug.dim(), &mut rng);
        let id = [g.unipotent_identity()];
        assert_eq!(apply_unipotent_sum(&aug, &id, &v).unwrap(), v);
        let h = UnipotentSubgroup::generate(&g, &[g.root_element(0, FqElem::ONE).unwrap()], 16).unwrap();
        let hs: Vec<UnipotentElement> = h.elements().iter().cloned().collect();
        let hv = apply_unipotent_sum(&aug, &hs, &v).unwrap();
        let moved = aug.act_word(&g.unipotent_word(&hs[1]), &v).unwrap();
        assert_eq!(apply_unipotent_sum(&aug, &hs, &moved).unwrap(), hv);
        assert!(apply_unipotent_sum(&aug, &hs, &hv).unwrap().iter().all(|&x| x == 0));
        let f5 = PrimeField::new(5).unwrap();
        let aug5 = Augmenter::new(&g, &f5, NodeSet::full(2)).unwrap();
        assert!(matches!(oneterm_reduce(&aug5, &aug5.c_j()), Err(Error::Config(_))));
    }

    #[test]
    fn group_sums_on_the_permutation_module() {
        let f = PrimeField::new(3).unwrap();
        let g = group(1, 3);
        let space = FlagSpace::new(g.clone(), 100).unwrap();
        let xs: Vec<GroupWord> = g.field().elements().map(|c| GroupWord(vec![Atom::Root { root: 0, c }])).collect();
        let v = FlagVector::basis(&f, 0);
        // U fixes B, so the sum is |U| B = 0 in characteristic 3
        assert!(apply_group_sum_flag(&space, &xs, &v).is_zero());
    }

    #[test]
    fn abelian_sum_identity_cases() {
        for p in [2u32, 3] {
            let g = AbelianGroup::new(vec![p, p]).unwrap();
            let subs = g.subgroups();
            assert_eq!(subs.len(), p as usize + 3);
            let h: BTreeSet<Vec<u32>> = (0..p).map(|x| vec![x, 0]).collect();
            let k: BTreeSet<Vec<u32>> = (0..p).map(|x| vec![0, x]).collect();
            let diag: BTreeSet<Vec<u32>> = (0..p).map(|x| vec![x, x]).collect();
            assert_eq!(abelian_sum_identity(&g, p, &h, &k, &h).unwrap(), SumIdentity::Full);
            assert_eq!(abelian_sum_identity(&g, p, &h, &k, &diag).unwrap(), SumIdentity::Full);
            assert_eq!(abelian_sum_identity(&g, p, &h, &k, &k).unwrap(), SumIdentity::Zero);
            for s in subs.iter().filter(|s| s.len() == p as usize) {
                assert_ne!(abelian_sum_identity(&g, p, &h, &k, s).unwrap(), SumIdentity::Other);
            }
            assert!(abelian_sum_identity(&g, p, &h, &k, &subs[0]).is_err());
        }
        let g = AbelianGroup::new(vec![4, 2]).unwrap();
        let h: BTreeSet<Vec<u32>> = (0..4).map(|x| vec![x, 0]).collect();
        let k: BTreeSet<Vec<u32>> = (0..2).map(|x| vec![0, x]).collect();
        for s in g.subgroups().iter().filter(|s| s.len() == 4) {
            assert_ne!(abelian_sum_identity(&g, 2, &h, &k, s).unwrap(), SumIdentity::Other);
        }
    }

    #[test]
    fn fixed_point_examples() {
        let f = PrimeField::new(2).unwrap();
        let g = group(1, 2);
        let aug = Augmenter::new(&g, &f, NodeSet::full(1)).unwrap();
        let all: Vec<Vec<u32>> = (0..aug.dim()).map(|k| (0..aug.dim()).map(|j| (j == k) as u32).collect()).collect();
        assert_eq!(fixed_points(&aug, &[], &all).unwrap().len(), 2);
        // U acts regularly on the Steinberg basis of SL_2(2)
        let x = g.root_element(0, FqElem::ONE).unwrap();
        let fixed = fixed_points(&aug, &[x.clone()], &all).unwrap();
        assert_eq!(fixed, vec![vec![1, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..5 {
            let xi = random_vector(&f, aug.dim(), &mut rng);
            let s = submodule(&aug, &xi).unwrap();
            assert!(!fixed_points(&aug, &[x.clone()], s.rows()).unwrap().is_empty());
        }
        let c = aug.c_j();
        assert!(matches!(fixed_points(&aug, &[x], &[c]), Err(Error::Domain(_))));
    }

    #[test]
    fn oneterm_examples() {
        let f = PrimeField::new(2).unwrap();
        let g = group(2, 2);
        for j in NodeSet::all(2) {
            let aug = Augmenter::new(&g, &f, j).unwrap();
            let r = oneterm_reduce(&aug, &aug.c_j()).unwrap();
            assert!(r.certificate.operators.is_empty());
            assert_eq!(r.result.unwrap().0, g.root_system().identity());
            let mut rng = ChaCha8Rng::seed_from_u64(j.0 as u64);
            for _ in 0..10 {
                let xi = random_vector(&f, aug.dim(), &mut rng);
                let r = oneterm_reduce(&aug, &xi).unwrap();
                assert!(r.certificate.verify(&aug).unwrap());
                if let Some((w, x)) = &r.result {
                    let s = single_cell(&group_sum_shape(&aug, &r.certificate.output)).unwrap();
                    assert_eq!((&s.0, &s.1), (w, x));
                }
            }
        }
    }

    #[test]
    fn leastterm_two_cells() {
        let f = PrimeField::new(2).unwrap();
        let g = group(1, 2);
        for j in NodeSet::all(1) {
            // every E_J of rank one has a single cell
            assert_eq!(Augmenter::new(&g, &f, j).unwrap().support_cells(&vec![1; 1 + j.0 as usize]).len(), 1);
        }
        let g = group(2, 2);
        let rs = g.root_system();
        let aug = Augmenter::new(&g, &f, NodeSet::from_nodes(&[0])).unwrap();
        let top = aug.basis().iter().find(|b| b.w != rs.identity() && b.u.is_identity()).unwrap().clone();
        let input = aug.basis_vector(&top).unwrap();
        let i = rs.left_descents(top.w).nodes()[0];
        let (red, _) = leastterm_descend(&aug, &input, i, 3).unwrap();
        assert!(red.certificate.verify(&aug).unwrap());
        let (w, h) = red.result.unwrap();
        assert_eq!(w, rs.mul_simple_left(i, top.w));
        assert!(!h.is_empty());
        assert!(leastterm_descend(&aug, &aug.c_j(), 0, 3).is_err());
    }

    #[test]
    fn pipeline_on_the_steinberg_piece() {
        let f = PrimeField::new(2).unwrap();
        let g = group(2, 2);
        let aug = Augmenter::new(&g, &f, NodeSet::full(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let xi = random_vector(&f, aug.dim(), &mut rng);
            let r = pipeline(&aug, &xi, 3).unwrap();
            assert!(r.certificates_verified);
            assert!(r.c_j_in_submodule);
            if r.completed {
                assert_eq!(r.final_sum.as_deref(), Some("1"));
            }
        }
    }
}
