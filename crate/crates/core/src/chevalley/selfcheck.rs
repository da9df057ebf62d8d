use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Atom, Chevalley, GroupWord, UnipotentElement};
use crate::error::Result;
use crate::rootsys::CartanType;

/// Outcome of the rank-one identity check for one simple root.
#[derive(Clone, Debug, Serialize)]
pub struct Sl2Check {
    pub node: usize,
    pub checked: usize,
    pub matches: usize,
    /// `c -> f` is injective on the nonzero elements.
    pub f_bijective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfCheckReport {
    pub jacobi_pairs: usize,
    pub associativity_trials: usize,
    pub associativity_ok: bool,
    pub inverse_ok: bool,
    /// `None` outside type A, where there is no matrix oracle.
    pub matrix_products_ok: Option<bool>,
    pub sl2: Vec<Sl2Check>,
    pub holds: bool,
}

/// Checks `s c s^{-1} = f s h g` in the matrix model for every nonzero `c`
/// and every simple root.
pub fn sl2_matrix_check(g: &Chevalley) -> Result<Vec<Sl2Check>> {
    let rs = g.root_system();
    let mut out = Vec::new();
    for i in 0..rs.rank() {
        let r = rs.simple_root(i);
        let s = GroupWord(vec![Atom::Weyl(i)]);
        let s_inv = g.word_inverse(&s);
        let mut fs = std::collections::BTreeSet::new();
        let (mut checked, mut matches) = (0, 0);
        for c in g.field().nonzero() {
            let d = g.sl2_decompose(i, c)?;
            fs.insert(d.f);
            let mut lhs = s.clone();
            lhs.0.push(Atom::Root { root: r, c });
            lhs.0.extend(s_inv.0.iter().cloned());
            let rhs = GroupWord(vec![
                Atom::Root { root: r, c: d.f },
                Atom::Weyl(i),
                Atom::Torus(d.h),
                Atom::Root { root: r, c: d.g },
            ]);
            checked += 1;
            if g.to_matrix(&lhs)? == g.to_matrix(&rhs)? {
                matches += 1;
            }
        }
        let f_bijective = fs.len() == checked && !fs.iter().any(|f| f.is_zero());
        out.push(Sl2Check { node: i + 1, checked, matches, f_bijective });
    }
    Ok(out)
}

/// Seeded consistency checks of the structure constants and the collection
/// algorithm, with the natural representation as oracle in type A.
pub fn selfcheck(g: &Chevalley, trials: usize, seed: u64) -> Result<SelfCheckReport> {
    let rs = g.root_system();
    let jacobi_pairs = g.constants().check_jacobi(rs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let type_a = rs.cartan_type() == CartanType::A;
    let word = |u: &UnipotentElement| g.unipotent_word(u);
    let (mut assoc, mut inv, mut mats) = (true, true, true);
    for _ in 0..trials {
        let (u, v, w) = (g.random_unipotent(&mut rng), g.random_unipotent(&mut rng), g.random_unipotent(&mut rng));
        let uv = g.mul_unipotent(&u, &v)?;
        assoc &= g.mul_unipotent(&uv, &w)? == g.mul_unipotent(&u, &g.mul_unipotent(&v, &w)?)?;
        inv &= g.mul_unipotent(&u, &g.inverse_unipotent(&u))?.is_identity();
        if type_a {
            mats &= g.to_matrix(&word(&uv))? == g.to_matrix(&word(&u))?.mul(g.field(), &g.to_matrix(&word(&v))?);
        }
    }
    let sl2 = if type_a { sl2_matrix_check(g)? } else { Vec::new() };
    let holds = assoc && inv && mats && sl2.iter().all(|c| c.matches == c.checked && c.f_bijective);
    Ok(SelfCheckReport {
        jacobi_pairs,
        associativity_trials: trials,
        associativity_ok: assoc,
        inverse_ok: inv,
        matrix_products_ok: type_a.then_some(mats),
        sl2,
        holds,
    })
}
