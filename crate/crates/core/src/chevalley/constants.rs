//! Chevalley-basis structure constants and the signs of Weyl representatives.
//!
//! The basis `e_r` (one per root) together with the simple coroots `h_i`
//! satisfies `[e_a, e_b] = N(a, b) e_{a+b}` when `a + b` is a root and
//! `[e_a, e_{-a}] = h_a`. For type A the basis is the matrix units `E_ab`
//! of `sl_{n+1}`, so the constants agree with the matrix model by
//! construction. For D and E the basis comes from the Frenkel-Kac sign
//! cocycle on the root lattice, with negative root vectors re-signed so the
//! `[e_a, e_{-a}] = h_a` normalisation holds for every root.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rootsys::{CartanType, RootSystem};

const CACHE_VERSION: u32 = 1;

/// Dense table of `N(a, b)` over all pairs of roots (0 when `a + b` is not a root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    nroots: usize,
    table: Vec<i8>,
    /// `eta[i][r]`: `s_i e_r s_i^{-1} = eta * e_{s_i r}` for the representative `s_i`.
    eta: Vec<Vec<i8>>,
    order_hash: String,
}

/// Type-A root `e_a - e_b` as the pair `(a, b)`.
pub(crate) fn type_a_pair(rs: &RootSystem, r: usize) -> (usize, usize) {
    let p = if rs.is_positive(r) { r } else { rs.negate(r) };
    let c = rs.root(p);
    let a = c.iter().position(|&x| x != 0).expect("nonzero root");
    let b = c.iter().rposition(|&x| x != 0).expect("nonzero root") + 1;
    if rs.is_positive(r) { (a, b) } else { (b, a) }
}

fn kac_sign(rs: &RootSystem, a: &[i32], b: &[i32]) -> i8 {
    let n = rs.rank();
    let cartan = rs.cartan();
    let mut exponent = 0i64;
    for i in 0..n {
        exponent += (a[i] * b[i]) as i64;
        for j in i + 1..n {
            if cartan[i][j] != 0 {
                exponent += (a[i] * b[j]) as i64;
            }
        }
    }
    if exponent.rem_euclid(2) == 0 { 1 } else { -1 }
}

/// Hash of the root numbering, so a cached table is never applied to a
/// differently ordered root list.
pub fn order_hash(rs: &RootSystem) -> String {
    let mut h = Sha256::new();
    h.update(rs.label().as_bytes());
    for r in 0..rs.num_roots() {
        for &c in rs.root(r) {
            h.update(c.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

/// Sparse-free integer vector in the Lie algebra: `2N` root coordinates then `rank` coroot coordinates.
type LieVec = Vec<i64>;

impl StructureConstants {
    pub fn build(rs: &RootSystem) -> Result<StructureConstants> {
        let nroots = rs.num_roots();
        let mut table = vec![0i8; nroots * nroots];
        for a in 0..nroots {
            for b in 0..nroots {
                let Some(s) = rs.sum(a, b) else { continue };
                let value = match rs.cartan_type() {
                    CartanType::A => {
                        let (p, q) = type_a_pair(rs, a);
                        let (r, t) = type_a_pair(rs, b);
                        // [E_pq, E_rt] = d_qr E_pt - d_tp E_rq
                        if q == r {
                            1
                        } else if t == p {
                            -1
                        } else {
                            return Err(Error::Domain(format!("inconsistent type A roots {a}, {b}")));
                        }
                    }
                    CartanType::D | CartanType::E => {
                        let sign = |r: usize| if rs.is_positive(r) { 1 } else { -1 };
                        kac_sign(rs, rs.root(a), rs.root(b)) * sign(a) * sign(b) * sign(s)
                    }
                };
                table[a * nroots + b] = value;
            }
        }
        let mut sc = StructureConstants { nroots, table, eta: Vec::new(), order_hash: order_hash(rs) };
        sc.eta = (0..rs.rank()).map(|i| sc.compute_eta(rs, i)).collect::<Result<_>>()?;
        Ok(sc)
    }

    /// `N(a, b)`, zero when `a + b` is not a root.
    #[inline]
    pub fn n(&self, a: usize, b: usize) -> i8 {
        self.table[a * self.nroots + b]
    }

    /// Sign with `s_i eps_r(c) s_i^{-1} = eps_{s_i r}(eta c)`.
    #[inline]
    pub fn eta(&self, i: usize, r: usize) -> i8 {
        self.eta[i][r]
    }

    pub fn order_hash(&self) -> &str {
        &self.order_hash
    }

    fn bracket_root(&self, rs: &RootSystem, r: usize, v: &LieVec) -> LieVec {
        let nroots = rs.num_roots();
        let mut out = vec![0i64; v.len()];
        for s in 0..nroots {
            let c = v[s];
            if c == 0 {
                continue;
            }
            if s == rs.negate(r) {
                // [e_r, e_{-r}] = h_r, coroot coordinates equal root coordinates
                for (i, &x) in rs.root(r).iter().enumerate() {
                    out[nroots + i] += c * x as i64;
                }
            } else if let Some(t) = rs.sum(r, s) {
                out[t] += c * self.n(r, s) as i64;
            }
        }
        for i in 0..rs.rank() {
            let c = v[nroots + i];
            if c != 0 {
                out[r] -= c * rs.pairing(r, i) as i64;
            }
        }
        out
    }

    /// `exp(sign * ad e_r) v`, exact over the integers.
    fn exp_ad(&self, rs: &RootSystem, r: usize, sign: i64, v: &LieVec) -> Result<LieVec> {
        let mut total = v.clone();
        let mut term = v.clone();
        for k in 1..=4i64 {
            let next = self.bracket_root(rs, r, &term);
            if next.iter().all(|&x| x == 0) {
                break;
            }
            term = next
                .into_iter()
                .map(|x| {
                    let y = x * sign;
                    if y % k != 0 { Err(Error::Domain("non-integral exponential".into())) } else { Ok(y / k) }
                })
                .collect::<Result<_>>()?;
            for (t, x) in total.iter_mut().zip(&term) {
                *t += x;
            }
        }
        Ok(total)
    }

    fn compute_eta(&self, rs: &RootSystem, i: usize) -> Result<Vec<i8>> {
        let nroots = rs.num_roots();
        let dim = nroots + rs.rank();
        let a = rs.simple_root(i);
        let na = rs.negate(a);
        (0..nroots)
            .map(|r| {
                let mut v = vec![0i64; dim];
                v[r] = 1;
                // s_i = x_a(1) x_{-a}(-1) x_a(1); rightmost factor acts first.
                let v = self.exp_ad(rs, a, 1, &v)?;
                let v = self.exp_ad(rs, na, -1, &v)?;
                let v = self.exp_ad(rs, a, 1, &v)?;
                let target = rs.reflect(i, r);
                let ok = v.iter().enumerate().all(|(k, &x)| k == target || x == 0);
                match v[target] {
                    1 | -1 if ok => Ok(v[target] as i8),
                    _ => Err(Error::Domain(format!("Ad(s_{i}) does not map e_{r} to a multiple of e_{target}"))),
                }
            })
            .collect()
    }

    /// Checks the Jacobi identity on all triples of root vectors; returns the number checked.
    pub fn check_jacobi(&self, rs: &RootSystem) -> Result<usize> {
        let nroots = rs.num_roots();
        let dim = nroots + rs.rank();
        let unit = |r: usize| {
            let mut v = vec![0i64; dim];
            v[r] = 1;
            v
        };
        let bracket = |x: &LieVec, y: &LieVec| -> LieVec {
            // bilinear extension of [., .] restricted to x supported on root vectors
            let mut out = vec![0i64; dim];
            for (r, &c) in x.iter().enumerate().take(nroots) {
                if c != 0 {
                    for (o, b) in out.iter_mut().zip(self.bracket_root(rs, r, y)) {
                        *o += c * b;
                    }
                }
            }
            for i in 0..rs.rank() {
                let c = x[nroots + i];
                if c != 0 {
                    for (r, o) in out.iter_mut().enumerate().take(nroots) {
                        *o += c * y[r] * rs.pairing(r, i) as i64;
                    }
                }
            }
            out
        };
        let mut count = 0;
        for a in 0..nroots {
            for b in 0..nroots {
                for c in 0..nroots {
                    let (ea, eb, ec) = (unit(a), unit(b), unit(c));
                    let t1 = bracket(&ea, &bracket(&eb, &ec));
                    let t2 = bracket(&eb, &bracket(&ec, &ea));
                    let t3 = bracket(&ec, &bracket(&ea, &eb));
                    if (0..dim).any(|k| t1[k] + t2[k] + t3[k] != 0) {
                        return Err(Error::Domain(format!("Jacobi identity fails on roots ({a}, {b}, {c})")));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    pub fn to_cache(&self, rs: &RootSystem) -> ConstantsCache {
        let mut signs = Vec::new();
        for a in 0..self.nroots {
            for b in 0..self.nroots {
                let n = self.n(a, b);
                if n != 0 {
                    signs.push((a as u16, b as u16, n));
                }
            }
        }
        ConstantsCache {
            version: CACHE_VERSION,
            cartan_type: rs.cartan_type(),
            rank: rs.rank(),
            order_hash: self.order_hash.clone(),
            signs,
            eta: self.eta.clone(),
        }
    }

    pub fn from_cache(rs: &RootSystem, cache: &ConstantsCache) -> Result<StructureConstants> {
        if cache.version != CACHE_VERSION {
            return Err(Error::Parse(format!("cache version {} != {CACHE_VERSION}", cache.version)));
        }
        if cache.cartan_type != rs.cartan_type() || cache.rank != rs.rank() || cache.order_hash != order_hash(rs) {
            return Err(Error::Parse("cache header does not match the root system".into()));
        }
        let nroots = rs.num_roots();
        let mut table = vec![0i8; nroots * nroots];
        for &(a, b, n) in &cache.signs {
            let (a, b) = (a as usize, b as usize);
            if a >= nroots || b >= nroots || rs.sum(a, b).is_none() || n.abs() != 1 {
                return Err(Error::Parse(format!("invalid sign entry ({a}, {b}, {n})")));
            }
            table[a * nroots + b] = n;
        }
        if cache.eta.len() != rs.rank() || cache.eta.iter().any(|e| e.len() != nroots) {
            return Err(Error::Parse("eta table has the wrong shape".into()));
        }
        Ok(StructureConstants { nroots, table, eta: cache.eta.clone(), order_hash: cache.order_hash.clone() })
    }

    /// Loads the table from `dir` when a matching cache exists, otherwise
    /// builds it and writes the cache. A stale or corrupt cache is rebuilt.
    pub fn load_or_build(rs: &RootSystem, dir: &Path) -> Result<StructureConstants> {
        let path = dir.join(format!("constants-{}.json", rs.label()));
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(cache) = serde_json::from_str::<ConstantsCache>(&text) {
                if let Ok(sc) = Self::from_cache(rs, &cache) {
                    return Ok(sc);
                }
            }
        }
        let sc = Self::build(rs)?;
        fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create cache dir: {e}")))?;
        let text = serde_json::to_string(&sc.to_cache(rs)).map_err(|e| Error::Parse(e.to_string()))?;
        fs::write(&path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
        Ok(sc)
    }
}

/// On-disk form of [`StructureConstants`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConstantsCache {
    pub version: u32,
    pub cartan_type: CartanType,
    pub rank: usize,
    pub order_hash: String,
    pub signs: Vec<(u16, u16, i8)>,
    pub eta: Vec<Vec<i8>>,
}
