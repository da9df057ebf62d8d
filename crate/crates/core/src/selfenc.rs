//! Finite subgroups of `U`, their slices along root orders, and
//! self-enclosedness.
//!
//! For an order `d_1 < ... < d_m` on the positive roots every `u` in `U` is a
//! unique product `u_1 ... u_m` with `u_k` in `U_{d_k}`. The `k`-th slice of a
//! set `X` collects the factors `u_k` over `u` in `X`. A subgroup `H` is
//! self-enclosed for the order when each slice equals `H ∩ U_{d_k}`.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::{Chevalley, RootOrder, UnipotentElement};
use crate::error::{check_cap, Error, Result};
use crate::field::{Fq, FqElem};
use crate::rootsys::{RootSystem, WeylElement};

/// Default cap on explicit subgroup sizes.
pub const DEFAULT_GROUP_CAP: usize = 1 << 16;

/// An explicitly enumerated subgroup of `U`.
#[derive(Clone, Debug)]
pub struct UnipotentSubgroup {
    elements: BTreeSet<UnipotentElement>,
    generators: Vec<UnipotentElement>,
}

/// Subgroups compare as sets; the stored generators are ignored.
impl PartialEq for UnipotentSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}
impl Eq for UnipotentSubgroup {}

impl UnipotentSubgroup {
    pub fn trivial(g: &Chevalley) -> Self {
        UnipotentSubgroup { elements: BTreeSet::from([g.unipotent_identity()]), generators: Vec::new() }
    }

    /// The subgroup generated by `gens`.
    pub fn generate(g: &Chevalley, gens: &[UnipotentElement], cap: usize) -> Result<Self> {
        let gens: Vec<UnipotentElement> = gens.iter().filter(|x| !x.is_identity()).cloned().collect();
        let mut seen: HashSet<UnipotentElement> = HashSet::from([g.unipotent_identity()]);
        let mut queue = vec![g.unipotent_identity()];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for s in &gens {
                let y = g.mul_unipotent(&x, s)?;
                if seen.insert(y.clone()) {
                    check_cap("subgroup order", seen.len(), cap)?;
                    queue.push(y);
                }
            }
        }
        Ok(UnipotentSubgroup { elements: seen.into_iter().collect(), generators: gens })
    }

    /// Wraps an explicit set after checking closure under products and inverses.
    pub fn from_elements(g: &Chevalley, elements: impl IntoIterator<Item = UnipotentElement>, cap: usize) -> Result<Self> {
        let elements: BTreeSet<UnipotentElement> = elements.into_iter().collect();
        check_cap("subgroup order", elements.len(), cap)?;
        if !elements.contains(&g.unipotent_identity()) {
            return Err(Error::Domain("set does not contain the identity".into()));
        }
        for x in &elements {
            if !elements.contains(&g.inverse_unipotent(x)) {
                return Err(Error::Domain("set is not closed under inverses".into()));
            }
            for y in &elements {
                if !elements.contains(&g.mul_unipotent(x, y)?) {
                    return Err(Error::Domain("set is not closed under products".into()));
                }
            }
        }
        let generators = elements.iter().filter(|x| !x.is_identity()).cloned().collect();
        Ok(UnipotentSubgroup { elements, generators })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &BTreeSet<UnipotentElement> {
        &self.elements
    }
    pub fn generators(&self) -> &[UnipotentElement] {
        &self.generators
    }
    pub fn contains(&self, x: &UnipotentElement) -> bool {
        self.elements.contains(x)
    }
    pub fn is_subset(&self, other: &UnipotentSubgroup) -> bool {
        self.elements.is_subset(&other.elements)
    }
    pub fn is_p_power(&self, p: u32) -> bool {
        let mut n = self.order();
        while n % p as usize == 0 {
            n /= p as usize;
        }
        n == 1
    }
    pub fn intersection(&self, other: &UnipotentSubgroup) -> UnipotentSubgroup {
        let elements: BTreeSet<UnipotentElement> = self.elements.intersection(&other.elements).cloned().collect();
        let generators = elements.iter().filter(|x| !x.is_identity()).cloned().collect();
        UnipotentSubgroup { elements, generators }
    }
    /// `H ∩ U_r` as a set of coordinates.
    pub fn root_part(&self, r: usize) -> BTreeSet<FqElem> {
        self.elements
            .iter()
            .filter(|x| x.coords().iter().enumerate().all(|(s, c)| s == r || c.is_zero()))
            .map(|x| x.coord(r))
            .collect()
    }
}

/// The `k`-th slice of `x` for `order`: the `U_{d_k}` factors of its elements.
pub fn slice<'a>(g: &Chevalley, x: impl IntoIterator<Item = &'a UnipotentElement>, order: &RootOrder, k: usize) -> BTreeSet<FqElem> {
    let r = order.sequence()[k];
    x.into_iter().map(|u| g.recollect(u.coords(), g.height_order(), order)[r]).collect()
}

/// How orders on the positive roots are chosen for checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderPolicy {
    /// Height order, plus every order when `m! <= 720`, else 50 random ones.
    Default,
    Exhaustive,
    Sample(usize),
}

impl std::str::FromStr for OrderPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<OrderPolicy> {
        match s {
            "default" => Ok(OrderPolicy::Default),
            "exhaustive" => Ok(OrderPolicy::Exhaustive),
            _ => s
                .strip_prefix("sample:")
                .and_then(|n| n.parse().ok())
                .map(OrderPolicy::Sample)
                .ok_or_else(|| Error::Config(format!("unknown order policy '{s}' (exhaustive, default or sample:N)"))),
        }
    }
}

/// The orders selected by `policy`; the height order always comes first.
pub fn orders_for(rs: &RootSystem, policy: OrderPolicy, seed: u64) -> Result<Vec<RootOrder>> {
    let m = rs.num_positive();
    let factorial = (1..=m).try_fold(1usize, |acc, k| acc.checked_mul(k));
    let exhaustive = match policy {
        OrderPolicy::Exhaustive => true,
        OrderPolicy::Default => factorial.is_some_and(|f| f <= 720),
        OrderPolicy::Sample(_) => false,
    };
    let mut out = vec![RootOrder::height(rs)];
    if exhaustive {
        check_cap("number of root orders", factorial.unwrap_or(usize::MAX), 40_320)?;
        for perm in (0..m).permutations(m) {
            let o = RootOrder::from_sequence(rs, perm)?;
            if o != out[0] {
                out.push(o);
            }
        }
    } else {
        let n = match policy {
            OrderPolicy::Sample(n) => n,
            _ => 50,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..n {
            let mut seq: Vec<usize> = (0..m).collect();
            seq.shuffle(&mut rng);
            out.push(RootOrder::from_sequence(rs, seq)?);
        }
    }
    Ok(out)
}

/// Result of a self-enclosedness check on one order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderVerdict {
    /// The order as 0-based root indices.
    pub order: Vec<usize>,
    pub self_enclosed: bool,
    /// First position whose slice is larger than `H ∩ U_{d_k}`.
    pub failing_position: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfEnclosedReport {
    pub per_order: Vec<OrderVerdict>,
    pub all: bool,
}

pub fn check_order(g: &Chevalley, h: &UnipotentSubgroup, order: &RootOrder) -> OrderVerdict {
    let recollected: Vec<Vec<FqElem>> =
        h.elements.iter().map(|u| g.recollect(u.coords(), g.height_order(), order)).collect();
    let failing = (0..order.sequence().len()).find(|&k| {
        let r = order.sequence()[k];
        let sl: BTreeSet<FqElem> = recollected.iter().map(|c| c[r]).collect();
        sl != h.root_part(r)
    });
    OrderVerdict { order: order.sequence().to_vec(), self_enclosed: failing.is_none(), failing_position: failing }
}

pub fn is_self_enclosed(g: &Chevalley, h: &UnipotentSubgroup, orders: &[RootOrder]) -> SelfEnclosedReport {
    let per_order: Vec<OrderVerdict> = orders.iter().map(|o| check_order(g, h, o)).collect();
    let all = per_order.iter().all(|v| v.self_enclosed);
    SelfEnclosedReport { per_order, all }
}

/// The additive subgroup of `F_q` generated by `xs`.
pub fn additive_span(fq: &Fq, xs: impl IntoIterator<Item = FqElem>) -> BTreeSet<FqElem> {
    let gens: Vec<FqElem> = xs.into_iter().filter(|x| !x.is_zero()).collect();
    let mut set = BTreeSet::from([FqElem::ZERO]);
    let mut frontier = vec![FqElem::ZERO];
    while let Some(x) = frontier.pop() {
        for &y in &gens {
            let z = fq.add(x, y);
            if set.insert(z) {
                frontier.push(z);
            }
        }
    }
    set
}

fn root_subgroup_elements(g: &Chevalley, r: usize, cs: &BTreeSet<FqElem>) -> Result<Vec<UnipotentElement>> {
    cs.iter().filter(|c| !c.is_zero()).map(|&c| g.root_element(r, c)).collect()
}

/// The self-enclosed subgroup built from `x` by the height-order recursion:
/// `H_k` is generated by the `k`-th slice of `x` and the `k`-th slice of
/// `<H_1, ..., H_{k-1}>`, and the result is `<H_1, ..., H_m>`.
pub fn closure(g: &Chevalley, x: &[UnipotentElement], cap: usize) -> Result<UnipotentSubgroup> {
    let height = g.height_order().clone();
    let m = g.num_positive();
    let mut gens: Vec<UnipotentElement> = Vec::new();
    for k in 0..m {
        let r = height.sequence()[k];
        let xk = slice(g, x, &height, k);
        let prev = UnipotentSubgroup::generate(g, &gens, cap)?;
        let yk = slice(g, prev.elements(), &height, k);
        let hk = additive_span(g.field(), xk.into_iter().chain(yk));
        gens.extend(root_subgroup_elements(g, r, &hk)?);
    }
    UnipotentSubgroup::generate(g, &gens, cap)
}

/// The factors `H_{d_1}, ..., H_{d_m}` along the height order, after
/// checking that their product enumerates `H` exactly once.
pub fn root_factor(g: &Chevalley, h: &UnipotentSubgroup) -> Result<Vec<BTreeSet<FqElem>>> {
    let height = g.height_order();
    if !check_order(g, h, height).self_enclosed {
        return Err(Error::Precondition("H is not self-enclosed for the height order".into()));
    }
    let factors: Vec<BTreeSet<FqElem>> = height.sequence().iter().map(|&r| h.root_part(r)).collect();
    let product: usize = factors.iter().map(|f| f.len()).product();
    if product != h.order() {
        return Err(Error::Precondition(format!("factor sizes multiply to {product}, but |H| = {}", h.order())));
    }
    Ok(factors)
}

/// `H_w = H ∩ U_w`, checked against the product of the `H_g` over `g` in `Phi_w^-`.
pub fn h_w(g: &Chevalley, h: &UnipotentSubgroup, w: WeylElement) -> Result<(UnipotentSubgroup, bool)> {
    let rs = g.root_system();
    let (neg, _) = rs.inversion_sets(w);
    let inside: BTreeSet<UnipotentElement> = h
        .elements
        .iter()
        .filter(|u| u.support().iter().all(|r| neg.contains(r)))
        .cloned()
        .collect();
    let parts: Vec<Vec<FqElem>> = neg.iter().map(|&r| h.root_part(r).into_iter().collect()).collect();
    let mut product = BTreeSet::new();
    for combo in parts.iter().map(|p| p.iter()).multi_cartesian_product() {
        let factors = neg.iter().copied().zip(combo.into_iter().copied());
        product.insert(UnipotentElement::from_coords(g.collect(g.height_order(), factors)));
    }
    if neg.is_empty() {
        product.insert(g.unipotent_identity());
    }
    let matches = product == inside;
    let generators = inside.iter().filter(|x| !x.is_identity()).cloned().collect();
    Ok((UnipotentSubgroup { elements: inside, generators }, matches))
}

/// The projections of `H` onto `V` through left and right coset decompositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projections {
    /// `{v : u = x v, u in H}` with `x` in the complement product.
    pub h_v: BTreeSet<UnipotentElement>,
    /// `{v : u = v y, u in H}`.
    pub v_h: BTreeSet<UnipotentElement>,
    pub h_cap_v: BTreeSet<UnipotentElement>,
    pub holds: bool,
}

pub fn coset_projections(g: &Chevalley, h: &UnipotentSubgroup, v: &[usize]) -> Result<Projections> {
    let mut h_v = BTreeSet::new();
    let mut v_h = BTreeSet::new();
    for u in h.elements() {
        let f = g.factor_rel(u, v)?;
        h_v.insert(f.left.1);
        v_h.insert(f.right.0);
    }
    let h_cap_v: BTreeSet<UnipotentElement> =
        h.elements.iter().filter(|u| u.support().iter().all(|r| v.contains(r))).cloned().collect();
    let holds = h_v == h_cap_v && v_h == h_cap_v;
    Ok(Projections { h_v, v_h, h_cap_v, holds })
}

/// `prod_k U_{d_k}(F_{p^{a_k}})` along the height order, as a subgroup of
/// `U(F_q)`. Fails with a domain error when the product set is not closed.
pub fn tower(g: &Chevalley, exponents: &[u32], cap: usize) -> Result<UnipotentSubgroup> {
    let m = g.num_positive();
    if exponents.len() != m {
        return Err(Error::Domain(format!("need {m} exponents, got {}", exponents.len())));
    }
    let fq = g.field();
    let subfields: Vec<Vec<FqElem>> = exponents.iter().map(|&a| fq.subfield(a)).collect::<Result<_>>()?;
    let size: usize = subfields.iter().map(|s| s.len()).product();
    check_cap("tower size", size, cap)?;
    let mut elements = BTreeSet::new();
    for combo in subfields.iter().map(|s| s.iter()).multi_cartesian_product() {
        let factors = g.height_order().sequence().iter().copied().zip(combo.into_iter().copied());
        elements.insert(UnipotentElement::from_coords(g.collect(g.height_order(), factors)));
    }
    let set_gens: Vec<UnipotentElement> = g
        .height_order()
        .sequence()
        .iter()
        .zip(&subfields)
        .flat_map(|(&r, s)| s.iter().filter(|c| !c.is_zero()).map(move |&c| (r, c)))
        .map(|(r, c)| g.root_element(r, c))
        .collect::<Result<_>>()?;
    let generated = UnipotentSubgroup::generate(g, &set_gens, cap.max(size))?;
    if generated.elements != elements {
        return Err(Error::Domain(format!(
            "the product set for exponents {exponents:?} is not a subgroup: it has {} elements but generates {}",
            elements.len(),
            generated.order()
        )));
    }
    Ok(generated)
}

/// Smallest self-enclosed subgroup containing `x`, by enumerating every
/// subgroup between `<x>` and `upper` (which must be self-enclosed and
/// contain `x`). Meant for `|U| <= 2^6`.
pub fn minimal_self_enclosed_bruteforce(
    g: &Chevalley,
    x: &[UnipotentElement],
    upper: &UnipotentSubgroup,
    orders: &[RootOrder],
    cap: usize,
) -> Result<UnipotentSubgroup> {
    let base = UnipotentSubgroup::generate(g, x, cap)?;
    if !base.is_subset(upper) {
        return Err(Error::Precondition("upper bound does not contain X".into()));
    }
    let mut seen: HashSet<BTreeSet<UnipotentElement>> = HashSet::from([base.elements.clone()]);
    let mut queue = vec![base];
    let mut best: Option<UnipotentSubgroup> = None;
    let mut head = 0;
    while head < queue.len() {
        let k = queue[head].clone();
        head += 1;
        if best.as_ref().is_some_and(|b| b.order() <= k.order()) {
            continue;
        }
        if is_self_enclosed(g, &k, orders).all {
            best = Some(k);
            continue;
        }
        for u in upper.elements() {
            if k.contains(u) {
                continue;
            }
            let mut gens = k.generators.clone();
            gens.push(u.clone());
            let next = UnipotentSubgroup::generate(g, &gens, cap)?;
            if seen.insert(next.elements.clone()) {
                check_cap("subgroups enumerated", seen.len(), cap)?;
                queue.push(next);
            }
        }
    }
    best.ok_or_else(|| Error::Precondition("upper bound is not self-enclosed".into()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::Rng;

    use super::*;
    use crate::rootsys::CartanType;

    fn group(rank: usize, q: u32) -> Chevalley {
        let rs = Arc::new(RootSystem::new(CartanType::A, rank).unwrap());
        Chevalley::new(rs, Fq::new(q).unwrap()).unwrap()
    }

    fn all_orders(g: &Chevalley) -> Vec<RootOrder> {
        orders_for(g.root_system(), OrderPolicy::Exhaustive, 0).unwrap()
    }

    #[test]
    fn slice_examples() {
        let g = group(2, 2);
        let id = g.unipotent_identity();
        let h = g.height_order().clone();
        for k in 0..3 {
            assert_eq!(slice(&g, [&id], &h, k), BTreeSet::from([FqElem::ZERO]));
        }
        let e = g.root_element(1, FqElem::ONE).unwrap();
        assert_eq!(slice(&g, [&e], &h, 1), BTreeSet::from([FqElem::ONE]));
        assert_eq!(slice(&g, [&e], &h, 0), BTreeSet::from([FqElem::ZERO]));
        // e1(1) e2(1) read in the order (a2, a1, a1+a2) picks up a commutator
        let x = g.mul_unipotent(&g.root_element(0, FqElem::ONE).unwrap(), &e).unwrap();
        let o = RootOrder::from_sequence(g.root_system(), vec![1, 0, 2]).unwrap();
        assert_eq!(slice(&g, [&x], &o, 2), BTreeSet::from([FqElem::ONE]));
    }

    #[test]
    fn self_enclosed_examples() {
        let g = group(2, 4);
        let orders = all_orders(&g);
        assert_eq!(orders.len(), 6);
        let gens: Vec<_> = g.field().additive_basis().into_iter().map(|c| g.root_element(0, c).unwrap()).collect();
        let ua1 = UnipotentSubgroup::generate(&g, &gens, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(ua1.order(), 4);
        assert!(is_self_enclosed(&g, &ua1, &orders).all);

        let g2 = group(2, 2);
        let x = g2.mul_unipotent(&g2.root_element(0, FqElem::ONE).unwrap(), &g2.root_element(1, FqElem::ONE).unwrap()).unwrap();
        let cyc = UnipotentSubgroup::generate(&g2, &[x], DEFAULT_GROUP_CAP).unwrap();
        let report = is_self_enclosed(&g2, &cyc, &all_orders(&g2));
        assert!(!report.all);
        assert_eq!(cyc.order(), 4);
        let pair = [g2.unipotent_identity(), cyc.generators()[0].clone()];
        assert!(matches!(UnipotentSubgroup::from_elements(&g2, pair, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn closure_examples() {
        let g = group(2, 4);
        let x = g.root_element(0, FqElem(3)).unwrap();
        let h = closure(&g, &[x.clone()], DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(h.order(), 2);
        assert!(h.contains(&x));

        let g2 = group(2, 2);
        let gens = [g2.root_element(0, FqElem::ONE).unwrap(), g2.root_element(1, FqElem::ONE).unwrap()];
        let h = closure(&g2, &gens, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(h.order(), 8);
        assert!(h.contains(&g2.root_element(2, FqElem::ONE).unwrap()));
        // brute-force enumeration of <X> inside the 3x3 unitriangular matrices over F_2
        let mut mats = HashSet::new();
        let mut frontier = vec![crate::chevalley::FqMatrix::identity(3)];
        let gm: Vec<_> = gens.iter().map(|u| g2.to_matrix(&g2.unipotent_word(u)).unwrap()).collect();
        mats.insert(frontier[0].clone());
        while let Some(m) = frontier.pop() {
            for x in &gm {
                let y = m.mul(g2.field(), x);
                if mats.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        assert_eq!(mats.len(), 8);
    }

    #[test]
    fn closure_properties_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for q in [2, 4] {
            let g = group(2, q);
            let orders = all_orders(&g);
            for _ in 0..20 {
                let n = rng.gen_range(1..3);
                let x: Vec<_> = (0..n).map(|_| g.random_unipotent(&mut rng)).collect();
                let h = closure(&g, &x, DEFAULT_GROUP_CAP).unwrap();
                assert!(x.iter().all(|u| h.contains(u)));
                assert!(h.is_p_power(2));
                assert!(is_self_enclosed(&g, &h, &orders).all);
                let again = closure(&g, &h.elements().iter().cloned().collect::<Vec<_>>(), DEFAULT_GROUP_CAP).unwrap();
                assert_eq!(again, h);
                let bigger = closure(&g, &[x.clone(), vec![g.random_unipotent(&mut rng)]].concat(), DEFAULT_GROUP_CAP).unwrap();
                assert!(h.is_subset(&bigger));
                let factors = root_factor(&g, &h).unwrap();
                assert_eq!(factors.iter().map(|f| f.len()).product::<usize>(), h.order());
                let min = minimal_self_enclosed_bruteforce(&g, &x, &h, &orders, DEFAULT_GROUP_CAP).unwrap();
                assert_eq!(min, h);
            }
        }
    }

    #[test]
    fn intersections_stay_self_enclosed() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = group(2, 4);
        let orders = all_orders(&g);
        for _ in 0..10 {
            let a = closure(&g, &[g.random_unipotent(&mut rng)], DEFAULT_GROUP_CAP).unwrap();
            let b = closure(&g, &[g.random_unipotent(&mut rng)], DEFAULT_GROUP_CAP).unwrap();
            assert!(is_self_enclosed(&g, &a.intersection(&b), &orders).all);
        }
    }

    #[test]
    fn root_factor_and_h_w() {
        let g = group(2, 2);
        let rs = g.root_system();
        let u: Vec<_> = (0..3).map(|r| g.root_element(r, FqElem::ONE).unwrap()).collect();
        let full = UnipotentSubgroup::generate(&g, &u, DEFAULT_GROUP_CAP).unwrap();
        let sizes: Vec<usize> = root_factor(&g, &full).unwrap().iter().map(|f| f.len()).collect();
        assert_eq!(sizes, vec![2, 2, 2]);
        let (hw, ok) = h_w(&g, &full, rs.simple_reflection(0)).unwrap();
        assert!(ok);
        assert_eq!(hw.order(), 2);
        assert!(hw.contains(&u[0]));
        let g3 = group(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = closure(&g3, &[g3.random_unipotent(&mut rng), g3.random_unipotent(&mut rng)], DEFAULT_GROUP_CAP).unwrap();
        for w in g3.root_system().weyl_elements() {
            assert!(h_w(&g3, &h, w).unwrap().1);
        }
    }

    #[test]
    fn projections() {
        let g = group(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let h = closure(&g, &[g.random_unipotent(&mut rng)], DEFAULT_GROUP_CAP).unwrap();
        let p = coset_projections(&g, &h, &[0, 1, 2]).unwrap();
        assert!(p.holds);
        assert_eq!(p.h_v, *h.elements());
        let p = coset_projections(&g, &h, &[]).unwrap();
        assert_eq!(p.h_v, BTreeSet::from([g.unipotent_identity()]));
        assert!(coset_projections(&g, &h, &[0, 1]).is_err());
        let t = tower(&g, &[1, 2, 2], DEFAULT_GROUP_CAP).unwrap();
        assert!(coset_projections(&g, &t, &[1, 2]).unwrap().holds);
    }

    #[test]
    fn towers() {
        let g = group(2, 16);
        let orders = all_orders(&g);
        let t = tower(&g, &[2, 4, 4], DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(t.order(), 4 * 16 * 16);
        assert!(is_self_enclosed(&g, &t, &orders).all);
        let sizes: Vec<usize> = root_factor(&g, &t).unwrap().iter().map(|f| f.len()).collect();
        assert_eq!(sizes, vec![4, 16, 16]);
        // the opposite divisibility direction does not give a subgroup
        assert!(matches!(tower(&g, &[4, 4, 2], DEFAULT_GROUP_CAP), Err(Error::Domain(_))));
        assert!(tower(&g, &[3, 4, 4], DEFAULT_GROUP_CAP).is_err());
    }

    #[test]
    fn order_policies() {
        let rs = RootSystem::new(CartanType::A, 3).unwrap();
        assert_eq!(orders_for(&rs, OrderPolicy::Default, 0).unwrap().len(), 720);
        let rs = RootSystem::new(CartanType::A, 4).unwrap();
        let a = orders_for(&rs, OrderPolicy::Default, 5).unwrap();
        assert_eq!(a.len(), 51);
        assert_eq!(a, orders_for(&rs, OrderPolicy::Default, 5).unwrap());
        assert_eq!("sample:7".parse::<OrderPolicy>().unwrap(), OrderPolicy::Sample(7));
    }
}
