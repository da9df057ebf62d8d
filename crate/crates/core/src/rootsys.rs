//! Simply-laced root systems and their Weyl groups.
//!
//! Roots are addressed by index: the `N` positive roots come first, sorted by
//! height and then by coordinates in decreasing lexicographic order (so the
//! simple roots occupy indices `0..rank` in node order), and root `N + k` is
//! the negative of root `k`. Weyl group elements are enumerated once by a
//! breadth-first search over right multiplication by simple reflections,
//! which yields every element together with its lexicographically least
//! reduced word.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported rank.
pub const MAX_RANK: usize = 6;
/// Largest Weyl group that will be enumerated.
pub const DEFAULT_WEYL_CAP: usize = 60_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    D,
    E,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::D => "D",
            CartanType::E => "E",
        };
        f.write_str(s)
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(CartanType::A),
            "D" | "d" => Ok(CartanType::D),
            "E" | "e" => Ok(CartanType::E),
            other => Err(Error::Config(format!(
                "unsupported root system type '{other}': only simply-laced types A, D, E are supported"
            ))),
        }
    }
}

/// Parses labels such as `A2` or `E6` into a type and rank.
pub fn parse_label(label: &str) -> Result<(CartanType, usize)> {
    let label = label.trim();
    let (t, r) = label.split_at(label.chars().next().map_or(0, |c| c.len_utf8()));
    let ty: CartanType = t.parse()?;
    let rank = r
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse rank in type label '{label}'")))?;
    Ok((ty, rank))
}

/// A subset of the simple nodes, stored as a bit mask (bit `i` is node `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct NodeSet(pub u32);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn full(rank: usize) -> NodeSet {
        NodeSet((1u32 << rank) - 1)
    }
    pub fn from_nodes(nodes: &[usize]) -> NodeSet {
        NodeSet(nodes.iter().fold(0, |m, &i| m | (1 << i)))
    }
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }
    pub fn insert(self, i: usize) -> NodeSet {
        NodeSet(self.0 | 1 << i)
    }
    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn nodes(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }
    /// All subsets of `full(rank)`, in increasing mask order.
    pub fn all(rank: usize) -> impl Iterator<Item = NodeSet> {
        (0..1u32 << rank).map(NodeSet)
    }
    /// 1-based node labels, as used in reports.
    pub fn labels(self) -> Vec<usize> {
        self.nodes().into_iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// A Weyl group element, as an index into the enumeration of its
/// [`RootSystem`]. Index 0 is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement(pub u32);

impl WeylElement {
    pub const IDENTITY: WeylElement = WeylElement(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
struct WeylTable {
    words: Vec<Vec<u8>>,
    perms: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, u32>,
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    inverse: Vec<u32>,
}

/// Parabolic data attached to a subset `J` of the simple nodes.
#[derive(Clone, Debug)]
pub struct ParabolicSubset {
    pub j: NodeSet,
    /// Longest element of `W_J`.
    pub w_j: WeylElement,
    /// Elements of `W_J`.
    pub w_group: Vec<WeylElement>,
    /// Minimal length representatives of `W / W_J`, in enumeration order.
    pub x_j: Vec<WeylElement>,
    /// Those `w` in `X_J` with right descent set of `w w_J` equal to `J`.
    pub y_j: Vec<WeylElement>,
}

/// A simply-laced root system with its Weyl group.
#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: CartanType,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    roots: Vec<Vec<i32>>,
    heights: Vec<i32>,
    lookup: HashMap<Vec<i32>, usize>,
    reflections: Vec<Vec<u16>>,
    weyl: WeylTable,
}

fn cartan_matrix(ty: CartanType, rank: usize) -> Result<Vec<Vec<i32>>> {
    let valid = match ty {
        CartanType::A => (1..=MAX_RANK).contains(&rank),
        CartanType::D => (4..=MAX_RANK).contains(&rank),
        CartanType::E => rank == 6,
    };
    if !valid {
        let constraint = match ty {
            CartanType::A => format!("A_n needs 1 <= n <= {MAX_RANK}"),
            CartanType::D => format!("D_n needs 4 <= n <= {MAX_RANK}"),
            CartanType::E => format!("only E6 fits the rank cap {MAX_RANK}"),
        };
        return Err(Error::Config(format!("unsupported rank {rank} for type {ty}: {constraint}")));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match ty {
        CartanType::A => edges.extend((1..rank).map(|i| (i - 1, i))),
        CartanType::D => {
            edges.extend((1..rank - 1).map(|i| (i - 1, i)));
            edges.push((rank - 3, rank - 1));
        }
        CartanType::E => {
            // Bourbaki labelling: 1-3-4-5-6 with 2 attached to 4.
            edges.extend([(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]);
        }
    }
    let mut a = vec![vec![0; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in edges {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    Ok(a)
}

impl RootSystem {
    /// Builds the root system of the given type and rank.
    pub fn new(ty: CartanType, rank: usize) -> Result<RootSystem> {
        Self::with_weyl_cap(ty, rank, DEFAULT_WEYL_CAP)
    }

    pub fn from_label(label: &str) -> Result<RootSystem> {
        let (ty, rank) = parse_label(label)?;
        Self::new(ty, rank)
    }

    pub fn with_weyl_cap(ty: CartanType, rank: usize, weyl_cap: usize) -> Result<RootSystem> {
        let cartan = cartan_matrix(ty, rank)?;
        let pairing = |b: &[i32], i: usize| -> i32 { (0..rank).map(|j| b[j] * cartan[j][i]).sum() };

        // Close the simple roots under simple reflections.
        let mut all: Vec<Vec<i32>> = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                v
            })
            .collect();
        let mut seen: std::collections::HashSet<Vec<i32>> = all.iter().cloned().collect();
        let mut idx = 0;
        while idx < all.len() {
            let b = all[idx].clone();
            idx += 1;
            for i in 0..rank {
                let c = pairing(&b, i);
                let mut r = b.clone();
                r[i] -= c;
                if seen.insert(r.clone()) {
                    all.push(r);
                }
            }
        }
        let mut pos: Vec<Vec<i32>> = all.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
        pos.sort_by(|a, b| {
            let (ha, hb): (i32, i32) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let n = pos.len();
        let mut roots = pos.clone();
        roots.extend(pos.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()));
        let heights: Vec<i32> = roots.iter().map(|r| r.iter().sum()).collect();
        let lookup: HashMap<Vec<i32>, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        let reflections: Vec<Vec<u16>> = (0..rank)
            .map(|i| {
                roots
                    .iter()
                    .map(|b| {
                        let mut r = b.clone();
                        r[i] -= pairing(b, i);
                        lookup[&r] as u16
                    })
                    .collect()
            })
            .collect();

        let weyl = enumerate_weyl(&reflections, rank, n, weyl_cap)?;
        Ok(RootSystem { ty, rank, cartan, roots, heights, lookup, reflections, weyl })
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ty
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn label(&self) -> String {
        format!("{}{}", self.ty, self.rank)
    }
    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }
    /// Number of positive roots.
    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }
    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }
    /// Simple-root coordinates of root `r`.
    pub fn root(&self, r: usize) -> &[i32] {
        &self.roots[r]
    }
    pub fn positive_roots(&self) -> impl Iterator<Item = usize> {
        0..self.num_positive()
    }
    pub fn height(&self, r: usize) -> i32 {
        self.heights[r]
    }
    pub fn is_positive(&self, r: usize) -> bool {
        r < self.num_positive()
    }
    pub fn negate(&self, r: usize) -> usize {
        let n = self.num_positive();
        if r < n { r + n } else { r - n }
    }
    /// Index of the simple root `alpha_i`.
    pub fn simple_root(&self, i: usize) -> usize {
        debug_assert!(i < self.rank);
        i
    }
    /// If root `r` is `±alpha_i`, returns `i`.
    pub fn simple_index(&self, r: usize) -> Option<usize> {
        let p = if self.is_positive(r) { r } else { self.negate(r) };
        (p < self.rank).then_some(p)
    }
    pub fn root_index(&self, coords: &[i32]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }
    /// Index of `a + b` when it is a root.
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i32> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.root_index(&s)
    }
    /// `<beta, alpha_i^vee>`.
    pub fn pairing(&self, beta: usize, i: usize) -> i32 {
        (0..self.rank).map(|j| self.roots[beta][j] * self.cartan[j][i]).sum()
    }
    /// Symmetric form `(a, b)` normalised so roots have length 2.
    pub fn inner(&self, a: usize, b: usize) -> i32 {
        let (ra, rb) = (&self.roots[a], &self.roots[b]);
        (0..self.rank).map(|i| (0..self.rank).map(|j| ra[i] * self.cartan[i][j] * rb[j]).sum::<i32>()).sum()
    }
    /// `s_i(r)`.
    pub fn reflect(&self, i: usize, r: usize) -> usize {
        self.reflections[i][r] as usize
    }

    // ---- Weyl group ----

    pub fn weyl_order(&self) -> usize {
        self.weyl.words.len()
    }
    pub fn weyl_elements(&self) -> impl Iterator<Item = WeylElement> {
        (0..self.weyl.words.len() as u32).map(WeylElement)
    }
    pub fn identity(&self) -> WeylElement {
        WeylElement::IDENTITY
    }
    pub fn simple_reflection(&self, i: usize) -> WeylElement {
        WeylElement(self.weyl.right[0][i])
    }
    /// Lexicographically least reduced word (0-based node indices).
    pub fn word(&self, w: WeylElement) -> Vec<usize> {
        self.weyl.words[w.index()].iter().map(|&x| x as usize).collect()
    }
    pub fn length(&self, w: WeylElement) -> usize {
        self.weyl.words[w.index()].len()
    }
    pub fn root_permutation(&self, w: WeylElement) -> &[u16] {
        &self.weyl.perms[w.index()]
    }
    /// `w(r)`.
    pub fn act(&self, w: WeylElement, r: usize) -> usize {
        self.weyl.perms[w.index()][r] as usize
    }
    /// Acts on an arbitrary vector of simple-root coordinates; fails when the
    /// vector is not a root.
    pub fn act_on_coords(&self, w: WeylElement, coords: &[i32]) -> Result<Vec<i32>> {
        let r = self
            .root_index(coords)
            .ok_or_else(|| Error::Domain(format!("{coords:?} is not a root of {}", self.label())))?;
        Ok(self.roots[self.act(w, r)].clone())
    }
    /// `w s_i`.
    pub fn mul_simple_right(&self, w: WeylElement, i: usize) -> WeylElement {
        WeylElement(self.weyl.right[w.index()][i])
    }
    /// `s_i w`.
    pub fn mul_simple_left(&self, i: usize, w: WeylElement) -> WeylElement {
        WeylElement(self.weyl.left[w.index()][i])
    }
    pub fn mul(&self, a: WeylElement, b: WeylElement) -> WeylElement {
        self.word(b).into_iter().fold(a, |acc, i| self.mul_simple_right(acc, i))
    }
    pub fn inverse(&self, w: WeylElement) -> WeylElement {
        WeylElement(self.weyl.inverse[w.index()])
    }
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement> {
        word.iter().try_fold(self.identity(), |acc, &i| {
            if i >= self.rank {
                Err(Error::Domain(format!("node {i} out of range")))
            } else {
                Ok(self.mul_simple_right(acc, i))
            }
        })
    }
    pub fn from_permutation(&self, perm: &[u16]) -> Option<WeylElement> {
        self.weyl.index.get(perm).map(|&i| WeylElement(i))
    }
    /// Right descent set `R(w) = { i : w s_i < w }`.
    pub fn descents(&self, w: WeylElement) -> NodeSet {
        NodeSet((0..self.rank).filter(|&i| !self.is_positive(self.act(w, i))).fold(0, |m, i| m | 1 << i))
    }
    /// Left descent set `{ i : s_i w < w }`.
    pub fn left_descents(&self, w: WeylElement) -> NodeSet {
        self.descents(self.inverse(w))
    }
    /// `(Phi_w^-, Phi_w^+)`: positive roots sent negative, and the rest.
    pub fn inversion_sets(&self, w: WeylElement) -> (Vec<usize>, Vec<usize>) {
        self.positive_roots().partition(|&r| !self.is_positive(self.act(w, r)))
    }
    pub fn longest_element(&self) -> WeylElement {
        WeylElement(self.weyl.words.len() as u32 - 1)
    }
    /// Elements of the parabolic subgroup `W_J`.
    pub fn parabolic_subgroup(&self, j: NodeSet) -> Vec<WeylElement> {
        self.weyl_elements().filter(|&w| self.weyl.words[w.index()].iter().all(|&i| j.contains(i as usize))).collect()
    }

    pub fn parabolic_data(&self, j: NodeSet) -> Result<ParabolicSubset> {
        if !j.is_subset(NodeSet::full(self.rank)) {
            return Err(Error::Domain(format!("{j} is not a subset of the simple nodes")));
        }
        let w_group = self.parabolic_subgroup(j);
        let w_j = *w_group.iter().max_by_key(|&&w| self.length(w)).expect("W_J contains the identity");
        let x_j: Vec<WeylElement> = self
            .weyl_elements()
            .filter(|&w| j.nodes().into_iter().all(|i| self.is_positive(self.act(w, i))))
            .collect();
        let y_j = x_j.iter().copied().filter(|&w| self.descents(self.mul(w, w_j)) == j).collect();
        Ok(ParabolicSubset { j, w_j, w_group, x_j, y_j })
    }

    /// The word rendered with 1-based labels, e.g. `s1s2`; `e` for the identity.
    pub fn word_label(&self, w: WeylElement) -> String {
        let word = self.word(w);
        if word.is_empty() {
            "e".into()
        } else {
            word.iter().map(|i| format!("s{}", i + 1)).collect()
        }
    }
}

fn enumerate_weyl(reflections: &[Vec<u16>], rank: usize, npos: usize, cap: usize) -> Result<WeylTable> {
    let nroots = 2 * npos;
    let id: Vec<u16> = (0..nroots as u16).collect();
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    let mut perms: Vec<Vec<u16>> = vec![id.clone()];
    let mut index: HashMap<Vec<u16>, u32> = HashMap::from([(id, 0)]);
    let mut head = 0;
    while head < perms.len() {
        for i in 0..rank {
            // (w s_i)(r) = w(s_i(r))
            let p: Vec<u16> = (0..nroots).map(|r| perms[head][reflections[i][r] as usize]).collect();
            if !index.contains_key(&p) {
                if perms.len() >= cap {
                    return Err(Error::Resource { what: "Weyl group order".into(), size: perms.len() + 1, cap });
                }
                let mut word = words[head].clone();
                word.push(i as u8);
                index.insert(p.clone(), perms.len() as u32);
                perms.push(p);
                words.push(word);
            }
        }
        head += 1;
    }
    let lookup = |p: &Vec<u16>| index[p];
    let right: Vec<Vec<u32>> = perms
        .iter()
        .map(|w| (0..rank).map(|i| lookup(&(0..nroots).map(|r| w[reflections[i][r] as usize]).collect())).collect())
        .collect();
    let left: Vec<Vec<u32>> = perms
        .iter()
        .map(|w| (0..rank).map(|i| lookup(&w.iter().map(|&r| reflections[i][r as usize]).collect())).collect())
        .collect();
    let inverse: Vec<u32> = perms
        .iter()
        .map(|w| {
            let mut inv = vec![0u16; nroots];
            for (r, &img) in w.iter().enumerate() {
                inv[img as usize] = r as u16;
            }
            lookup(&inv)
        })
        .collect();
    Ok(WeylTable { words, perms, index, right, left, inverse })
}

/// JSON summary of a root system, its Weyl group and all parabolic data.
#[derive(Debug, Serialize)]
pub struct RootSystemReport {
    pub type_label: String,
    pub rank: usize,
    pub root_order: String,
    pub cartan_matrix: Vec<Vec<i32>>,
    pub positive_roots: Vec<Vec<i32>>,
    pub heights: Vec<i32>,
    pub weyl_order: usize,
    pub weyl_elements: Vec<WeylEntry>,
    pub parabolics: Vec<ParabolicEntry>,
}

#[derive(Debug, Serialize)]
pub struct WeylEntry {
    pub word: String,
    pub length: usize,
    pub descents: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct ParabolicEntry {
    pub j: Vec<usize>,
    pub w_j: String,
    pub x_j: Vec<String>,
    pub y_j: Vec<String>,
}

/// Builds the report; the element list is omitted above `max_listed` elements.
pub fn report(rs: &RootSystem, max_listed: usize) -> Result<RootSystemReport> {
    let weyl_elements = if rs.weyl_order() <= max_listed {
        rs.weyl_elements()
            .map(|w| WeylEntry { word: rs.word_label(w), length: rs.length(w), descents: rs.descents(w).labels() })
            .collect()
    } else {
        Vec::new()
    };
    let mut parabolics = Vec::new();
    if rs.weyl_order() <= max_listed {
        for j in NodeSet::all(rs.rank()) {
            let pd = rs.parabolic_data(j)?;
            parabolics.push(ParabolicEntry {
                j: j.labels(),
                w_j: rs.word_label(pd.w_j),
                x_j: pd.x_j.iter().map(|&w| rs.word_label(w)).collect(),
                y_j: pd.y_j.iter().map(|&w| rs.word_label(w)).collect(),
            });
        }
    }
    Ok(RootSystemReport {
        type_label: rs.label(),
        rank: rs.rank(),
        root_order: "height, then decreasing lexicographic simple-root coordinates".into(),
        cartan_matrix: rs.cartan().to_vec(),
        positive_roots: rs.positive_roots().map(|r| rs.root(r).to_vec()).collect(),
        heights: rs.positive_roots().map(|r| rs.height(r)).collect(),
        weyl_order: rs.weyl_order(),
        weyl_elements,
        parabolics,
    })
}
