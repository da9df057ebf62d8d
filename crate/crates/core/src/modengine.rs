//! A small meataxe over prime fields: spinning, an irreducibility test in the
//! style of Norton, composition factors by recursive splitting, and a
//! brute-force spin oracle for small modules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::{Field, PrimeField};
use crate::error::{check_cap, Error, Result};
use crate::flagmod::{FlagSpace, ModulePresentation};
use crate::linalg::{spin, Echelon, Matrix};

pub const DEFAULT_MODULE_CAP: usize = 2000;
/// Largest number of projective points enumerated inside one nullspace.
const NULLSPACE_POINTS: usize = 400;

/// A module given by the action matrices of a generating set.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixModule {
    field: PrimeField,
    dim: usize,
    gens: Vec<Matrix<PrimeField>>,
    provenance: String,
}

/// JSON interchange form: header plus row-major matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub dim: usize,
    pub field: u32,
    pub generator_count: usize,
    pub provenance: String,
    pub matrices: Vec<Vec<u32>>,
}

impl MatrixModule {
    pub fn new(field: PrimeField, gens: Vec<Matrix<PrimeField>>, provenance: impl Into<String>) -> Result<MatrixModule> {
        let dim = gens.first().map(|m| m.rows).unwrap_or(0);
        for m in &gens {
            if m.rows != dim || m.cols != dim {
                return Err(Error::Domain("generator matrices must be square of one size".into()));
            }
            if !m.is_invertible(&field) {
                return Err(Error::Domain("generator matrix is singular".into()));
            }
        }
        Ok(MatrixModule { field, dim, gens, provenance: provenance.into() })
    }

    /// The trivial module of dimension one.
    pub fn trivial(field: PrimeField) -> MatrixModule {
        MatrixModule { dim: 1, gens: vec![Matrix::identity(&field, 1)], field, provenance: "trivial".into() }
    }

    pub fn from_presentation(field: PrimeField, p: &ModulePresentation<PrimeField>, provenance: impl Into<String>) -> Result<Self> {
        if p.matrices.is_empty() {
            return Ok(MatrixModule { dim: p.dim(), gens: vec![Matrix::identity(&field, p.dim())], field, provenance: provenance.into() });
        }
        MatrixModule::new(field, p.matrices.clone(), provenance)
    }

    /// `F_l[G/B]` with the standard generators acting by permutations.
    pub fn permutation_module(space: &FlagSpace, field: PrimeField) -> Result<MatrixModule> {
        let n = space.size();
        let gens = space
            .generators()
            .iter()
            .map(|a| {
                let perm = space.permutation(a);
                let mut m = Matrix::zeros(&field, n, n);
                for (k, &img) in perm.iter().enumerate() {
                    m.set(img as usize, k, 1);
                }
                m
            })
            .collect();
        MatrixModule::new(field, gens, format!("F{}[{}(F{})/B]", field.order(), space.root_system().label(), space.group().field().q()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn field(&self) -> &PrimeField {
        &self.field
    }
    pub fn generators(&self) -> &[Matrix<PrimeField>] {
        &self.gens
    }
    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn to_file(&self) -> ModuleFile {
        ModuleFile {
            dim: self.dim,
            field: self.field.order(),
            generator_count: self.gens.len(),
            provenance: self.provenance.clone(),
            matrices: self.gens.iter().map(|m| m.data.clone()).collect(),
        }
    }

    pub fn from_file(file: &ModuleFile) -> Result<MatrixModule> {
        let field = PrimeField::new(file.field)?;
        if file.matrices.len() != file.generator_count {
            return Err(Error::Parse(format!("header says {} generators, found {}", file.generator_count, file.matrices.len())));
        }
        let gens = file
            .matrices
            .iter()
            .map(|data| {
                if data.len() != file.dim * file.dim {
                    return Err(Error::Parse(format!("matrix has {} entries, expected {}", data.len(), file.dim * file.dim)));
                }
                if data.iter().any(|&x| x >= file.field) {
                    return Err(Error::Parse(format!("entry outside F{}", file.field)));
                }
                Ok(Matrix { rows: file.dim, cols: file.dim, data: data.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        if gens.is_empty() {
            let mut m = MatrixModule::trivial(field);
            m.provenance = file.provenance.clone();
            return Ok(m);
        }
        MatrixModule::new(field, gens, file.provenance.clone())
    }

    fn transposed(&self) -> Vec<Matrix<PrimeField>> {
        self.gens.iter().map(|m| m.transpose()).collect()
    }

    /// The smallest invariant subspace containing `v`.
    pub fn spin_vector(&self, v: &[u32]) -> Echelon<PrimeField> {
        spin_with(&self.field, &self.gens, v)
    }

    /// The action on an invariant subspace, in the basis of its echelon rows.
    pub fn submodule(&self, sub: &Echelon<PrimeField>) -> Result<MatrixModule> {
        let rows = sub.rows();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols = rows
                    .iter()
                    .map(|b| sub.row_coordinates(&g.mul_vec(&self.field, b)).ok_or_else(|| Error::Domain("subspace is not invariant".into())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_columns(&self.field, rows.len(), &cols))
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixModule::new(self.field, gens, format!("{} sub {}", self.provenance, rows.len()))
    }

    /// The action on `M / sub`, in the basis of the non-pivot unit vectors.
    pub fn quotient(&self, sub: &Echelon<PrimeField>) -> Result<MatrixModule> {
        let free: Vec<usize> = (0..self.dim).filter(|&c| !sub.is_pivot(c)).collect();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols: Vec<Vec<u32>> = free
                    .iter()
                    .map(|&c| {
                        let r = sub.reduce(&g.column(c));
                        free.iter().map(|&k| r[k]).collect()
                    })
                    .collect();
                Matrix::from_columns(&self.field, free.len(), &cols)
            })
            .collect();
        MatrixModule::new(self.field, gens, format!("{} quotient {}", self.provenance, free.len()))
    }

    /// Hex digest of the generator matrices.
    pub fn digest(&self) -> String {
        let parts: Vec<String> = self.gens.iter().map(|m| m.digest(&self.field)).collect();
        parts.join(":")
    }
}

fn spin_with(field: &PrimeField, gens: &[Matrix<PrimeField>], v: &[u32]) -> Echelon<PrimeField> {
    let n = v.len();
    let act = |k: usize, x: &[u32]| gens[k].mul_vec(field, x);
    spin(field, n, &[v.to_vec()], gens.len(), act, n).expect("spin stays within the ambient dimension")
}

/// One representative per projective point of `span(basis)`, in a fixed order.
fn projective_points<'a>(field: &'a PrimeField, basis: &'a [Vec<u32>]) -> impl Iterator<Item = Vec<u32>> + 'a {
    let l = field.order() as u64;
    let k = basis.len() as u32;
    let n = basis.first().map(|b| b.len()).unwrap_or(0);
    (1..l.pow(k)).filter_map(move |mut code| {
        let mut coeffs = Vec::with_capacity(k as usize);
        for _ in 0..k {
            coeffs.push((code % l) as u32);
            code /= l;
        }
        // leading nonzero coefficient equal to one
        let lead = coeffs.iter().rev().find(|&&c| c != 0).copied()?;
        if lead != 1 {
            return None;
        }
        let mut v = vec![0u32; n];
        for (c, b) in coeffs.iter().zip(basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x = field.add(x, &field.mul(c, y));
            }
        }
        Some(v)
    })
}

fn points_count(field: &PrimeField, k: usize) -> Option<usize> {
    let l = field.order() as usize;
    l.checked_pow(k as u32).map(|x| (x - 1) / (l - 1))
}

/// Evidence for irreducibility.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NortonCertificate {
    pub trial: usize,
    pub eigenvalue: u32,
    pub nullity: usize,
    pub vectors_spun: usize,
}

#[derive(Clone, Debug)]
pub enum Irreducibility {
    Irreducible(NortonCertificate),
    /// A proper nonzero invariant subspace.
    Reducible(Echelon<PrimeField>),
    Inconclusive { trials: usize },
}

/// Annihilator of a subspace of the dual, which is invariant when the dual
/// subspace is invariant under the transposed generators.
fn annihilator(field: &PrimeField, dual: &Echelon<PrimeField>, n: usize) -> Echelon<PrimeField> {
    let m = Matrix::from_rows(dual.rows().to_vec());
    let mut e = Echelon::new(*field, n);
    for v in m.nullspace(field) {
        e.insert(&v);
    }
    e
}

fn random_algebra_element(m: &MatrixModule, rng: &mut ChaCha8Rng) -> Matrix<PrimeField> {
    let f = &m.field;
    let n = m.dim;
    let mut acc = Matrix::zeros(f, n, n);
    let mut word = Matrix::identity(f, n);
    for _ in 0..6 {
        let g = &m.gens[rng.gen_range(0..m.gens.len())];
        word = word.mul(f, g);
        let c = rng.gen_range(0..f.order());
        acc = acc.add(f, &word.scale(f, &c));
    }
    acc
}

/// Norton-style test: find a singular `A - l I` in the enveloping algebra,
/// spin its nullspace and the nullspace of its transpose. When every vector
/// of both nullspaces spins to the whole space the module is irreducible;
/// any proper spin is returned as a witness.
pub fn irreducibility_test(m: &MatrixModule, seed: u64, trials: usize) -> Irreducibility {
    let f = m.field;
    let n = m.dim;
    if n == 1 {
        return Irreducibility::Irreducible(NortonCertificate { trial: 0, eigenvalue: 0, nullity: 1, vectors_spun: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let transposed = m.transposed();
    for trial in 0..trials {
        let a = random_algebra_element(m, &mut rng);
        let eigen: Vec<u32> = if f.order() <= 64 {
            (0..f.order()).collect()
        } else {
            (0..64).map(|_| rng.gen_range(0..f.order())).collect()
        };
        let best = eigen
            .into_iter()
            .map(|l| {
                let b = a.add_scaled_identity(&f, &f.neg(&l));
                (n - b.rank(&f), l, b)
            })
            .filter(|(k, _, _)| *k > 0)
            .min_by_key(|(k, l, _)| (*k, *l));
        let Some((nullity, lambda, b)) = best else {
            continue;
        };
        let kernel = b.nullspace(&f);
        let kernel_t = b.transpose().nullspace(&f);
        let exhaustive = points_count(&f, nullity).is_some_and(|c| c <= NULLSPACE_POINTS);
        let mut spun = 0;
        let candidates: Vec<Vec<u32>> =
            if exhaustive { projective_points(&f, &kernel).collect() } else { vec![kernel[0].clone()] };
        for v in &candidates {
            spun += 1;
            let s = spin_with(&f, &m.gens, v);
            if s.dim() < n {
                return Irreducibility::Reducible(s);
            }
        }
        let candidates_t: Vec<Vec<u32>> =
            if exhaustive { projective_points(&f, &kernel_t).collect() } else { vec![kernel_t[0].clone()] };
        for w in &candidates_t {
            spun += 1;
            let s = spin_with(&f, &transposed, w);
            if s.dim() < n {
                return Irreducibility::Reducible(annihilator(&f, &s, n));
            }
        }
        if exhaustive {
            return Irreducibility::Irreducible(NortonCertificate { trial, eigenvalue: lambda, nullity, vectors_spun: spun });
        }
    }
    Irreducibility::Inconclusive { trials }
}

/// Spins every projective point; `None` when there are more than `cap`.
pub fn brute_force_irreducible(m: &MatrixModule, cap: usize) -> Option<bool> {
    let count = points_count(&m.field, m.dim)?;
    if count > cap {
        return None;
    }
    let basis: Vec<Vec<u32>> = (0..m.dim).map(|i| (0..m.dim).map(|j| (i == j) as u32).collect()).collect();
    let irreducible = projective_points(&m.field, &basis).all(|v| m.spin_vector(&v).dim() == m.dim);
    Some(irreducible)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub dim: usize,
    pub digest: String,
    /// Whether the irreducibility test certified this factor.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    pub provenance: String,
    pub dim: usize,
    pub field: String,
    pub factors: Vec<Factor>,
    /// Factor dimensions in ascending order.
    pub dims: Vec<usize>,
    /// False when some factor could not be certified.
    pub complete: bool,
}

/// Splits recursively along witnesses from [`irreducibility_test`].
pub fn composition_factors(m: &MatrixModule, seed: u64) -> Result<(CompositionReport, Vec<MatrixModule>)> {
    check_cap("module dimension", m.dim, DEFAULT_MODULE_CAP)?;
    let mut leaves = Vec::new();
    let mut factors = Vec::new();
    let mut stack = vec![m.clone()];
    let mut step = 0u64;
    while let Some(x) = stack.pop() {
        step += 1;
        match irreducibility_test(&x, seed.wrapping_add(step), 40) {
            Irreducibility::Reducible(sub) => {
                stack.push(x.quotient(&sub)?);
                stack.push(x.submodule(&sub)?);
            }
            verdict => {
                factors.push(Factor {
                    dim: x.dim,
                    digest: x.digest(),
                    certified: matches!(verdict, Irreducibility::Irreducible(_)),
                });
                leaves.push(x);
            }
        }
    }
    let mut dims: Vec<usize> = factors.iter().map(|f| f.dim).collect();
    dims.sort_unstable();
    let report = CompositionReport {
        provenance: m.provenance.clone(),
        dim: m.dim,
        field: m.field.label(),
        complete: factors.iter().all(|f| f.certified),
        factors,
        dims,
    };
    Ok((report, leaves))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::chevalley::Chevalley;
    use crate::field::Fq;
    use crate::flagmod::{ej_presentation, EjMode, DEFAULT_DIM_CAP};
    use crate::rootsys::{CartanType, NodeSet, RootSystem};

    fn flag_module(rank: usize, q: u32, l: u32) -> MatrixModule {
        let rs = Arc::new(RootSystem::new(CartanType::A, rank).unwrap());
        let space = FlagSpace::new(Chevalley::new(rs, Fq::new(q).unwrap()).unwrap(), DEFAULT_DIM_CAP).unwrap();
        MatrixModule::permutation_module(&space, PrimeField::new(l).unwrap()).unwrap()
    }

    #[test]
    fn spin_examples() {
        let m = flag_module(1, 2, 5);
        assert_eq!(m.dim(), 3);
        assert_eq!(m.spin_vector(&[0, 0, 0]).dim(), 0);
        assert_eq!(m.spin_vector(&[1, 1, 1]).dim(), 1);
        assert_eq!(m.spin_vector(&[1, 0, 0]).dim(), 3);
        let t = MatrixModule::trivial(PrimeField::new(5).unwrap());
        assert_eq!(t.spin_vector(&[2]).dim(), 1);
    }

    #[test]
    fn irreducibility_examples() {
        let f = PrimeField::new(5).unwrap();
        assert!(matches!(irreducibility_test(&MatrixModule::trivial(f), 0, 5), Irreducibility::Irreducible(_)));
        let m = flag_module(1, 2, 5);
        match irreducibility_test(&m, 1, 20) {
            Irreducibility::Reducible(s) => assert!(s.dim() == 1 || s.dim() == 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(brute_force_irreducible(&m, 100), Some(false));
    }

    #[test]
    fn submodule_and_quotient() {
        let m = flag_module(1, 3, 5);
        let s = m.spin_vector(&[1, 1, 1, 1]);
        let sub = m.submodule(&s).unwrap();
        let quo = m.quotient(&s).unwrap();
        assert_eq!((sub.dim(), quo.dim()), (1, 3));
        assert!(sub.generators().iter().all(|g| *g == Matrix::identity(m.field(), 1)));
        // cross characteristic: the Steinberg quotient of SL_2(3) is irreducible
        assert_eq!(brute_force_irreducible(&quo, 1000), Some(true));
    }

    #[test]
    fn factors_of_small_flag_modules() {
        let (r, leaves) = composition_factors(&MatrixModule::trivial(PrimeField::new(3).unwrap()), 0).unwrap();
        assert_eq!(r.dims, vec![1]);
        assert_eq!(leaves.len(), 1);
        let (r, leaves) = composition_factors(&flag_module(2, 2, 5), 7).unwrap();
        assert!(r.complete);
        assert_eq!(r.dims, vec![1, 6, 6, 8]);
        for leaf in &leaves {
            assert_eq!(brute_force_irreducible(leaf, 200_000), Some(true));
        }
        for seed in [1, 2, 3] {
            assert_eq!(composition_factors(&flag_module(2, 2, 5), seed).unwrap().0.dims, r.dims);
        }
        // equal characteristic: 1 + 1 + 2 with the Steinberg piece on top
        let (r, _) = composition_factors(&flag_module(1, 2, 2), 0).unwrap();
        assert_eq!(r.dims.iter().sum::<usize>(), 3);
    }

    #[test]
    fn steinberg_pieces_in_equal_characteristic() {
        let f = PrimeField::new(2).unwrap();
        for rank in [1, 2] {
            let rs = Arc::new(RootSystem::new(CartanType::A, rank).unwrap());
            let space = FlagSpace::new(Chevalley::new(rs, Fq::new(2).unwrap()).unwrap(), DEFAULT_DIM_CAP).unwrap();
            let p = ej_presentation(&space, &f, NodeSet::full(rank), EjMode::Quotient, DEFAULT_DIM_CAP).unwrap();
            let m = MatrixModule::from_presentation(f, &p, "E_I").unwrap();
            assert_eq!(m.dim(), if rank == 1 { 2 } else { 8 });
            assert_eq!(brute_force_irreducible(&m, 1000), Some(true));
            assert!(matches!(irreducibility_test(&m, 3, 40), Irreducibility::Irreducible(_)));
        }
    }

    #[test]
    fn module_files_round_trip() {
        let m = flag_module(1, 3, 7);
        let json = serde_json::to_string(&m.to_file()).unwrap();
        let back = MatrixModule::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, m);
        let mut bad = m.to_file();
        bad.matrices[0].pop();
        assert!(matches!(MatrixModule::from_file(&bad), Err(Error::Parse(_))));
        bad.generator_count = 9;
        assert!(MatrixModule::from_file(&bad).is_err());
    }
}
