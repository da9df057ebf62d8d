//! The natural representation of `SL_{n+1}(F_q)`, used to cross-check type A.

use super::{Atom, Chevalley, GroupWord};
use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::rootsys::CartanType;

use super::constants::type_a_pair;

/// A square matrix over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    n: usize,
    data: Vec<FqElem>,
}

impl FqMatrix {
    pub fn identity(n: usize) -> FqMatrix {
        let mut data = vec![FqElem::ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = FqElem::ONE;
        }
        FqMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }
    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.data[i * self.n + j]
    }
    pub fn set(&mut self, i: usize, j: usize, x: FqElem) {
        self.data[i * self.n + j] = x;
    }

    pub fn mul(&self, fq: &Fq, other: &FqMatrix) -> FqMatrix {
        let n = self.n;
        let mut out = FqMatrix { n, data: vec![FqElem::ZERO; n * n] };
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.data[idx] = fq.add(out.data[idx], fq.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn determinant(&self, fq: &Fq) -> FqElem {
        let n = self.n;
        let mut m = self.data.clone();
        let mut det = FqElem::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return FqElem::ZERO;
            };
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                }
                det = fq.neg(det);
            }
            let p = m[col * n + col];
            det = fq.mul(det, p);
            let pinv = fq.inv(p).expect("pivot is nonzero");
            for r in col + 1..n {
                let f = fq.mul(m[r * n + col], pinv);
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    m[r * n + j] = fq.sub(m[r * n + j], fq.mul(f, m[col * n + j]));
                }
            }
        }
        det
    }
}

impl Chevalley {
    /// Evaluates a word in the natural representation (type A only).
    pub fn to_matrix(&self, word: &GroupWord) -> Result<FqMatrix> {
        let rs = self.root_system();
        if rs.cartan_type() != CartanType::A {
            return Err(Error::Unsupported(format!("matrix oracle is only available in type A, not {}", rs.label())));
        }
        let fq = self.field();
        let n = rs.rank() + 1;
        let root_matrix = |r: usize, c: FqElem| {
            let (a, b) = type_a_pair(rs, r);
            let mut m = FqMatrix::identity(n);
            m.set(a, b, c);
            m
        };
        let mut acc = FqMatrix::identity(n);
        for atom in &word.0 {
            let m = match atom {
                Atom::Root { root, c } => {
                    if *root >= rs.num_roots() {
                        return Err(Error::Domain(format!("root index {root} out of range")));
                    }
                    root_matrix(*root, *c)
                }
                Atom::Weyl(i) => {
                    let a = rs.simple_root(*i);
                    let one = FqElem::ONE;
                    root_matrix(a, one).mul(fq, &root_matrix(rs.negate(a), fq.neg(one))).mul(fq, &root_matrix(a, one))
                }
                Atom::Torus(t) => {
                    let mut m = FqMatrix::identity(n);
                    for (j, &l) in t.values().iter().enumerate() {
                        m.set(j, j, fq.mul(m.get(j, j), l));
                        m.set(j + 1, j + 1, fq.mul(m.get(j + 1, j + 1), fq.pow(l, -1)));
                    }
                    m
                }
            };
            acc = acc.mul(fq, &m);
        }
        Ok(acc)
    }
}
