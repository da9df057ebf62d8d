//! Oracles that share no code with the library they check: flag counts from
//! the q-factorial formula and spinning over `F_2` by brute-force span sets.

use std::collections::HashSet;

use flagperm::coeff::PrimeField;
use flagperm::linalg::Matrix;
use rand::Rng;

/// `prod_{i=1}^{n} (1 + q + ... + q^i)`, the number of complete flags in
/// `F_q^{n+1}`. Never looks at the Weyl group.
pub fn flag_count(n: usize, q: u64) -> u64 {
    (1..=n).map(|i| (0..=i as u32).map(|k| q.pow(k)).sum::<u64>()).product()
}

pub fn random_nonzero<R: Rng>(f: &PrimeField, n: usize, rng: &mut R) -> Vec<u32> {
    loop {
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.order())).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// Rows of an `F_2` matrix as bitmasks.
pub fn f2_rows(m: &Matrix<PrimeField>, n: usize) -> Vec<u32> {
    assert!(n <= 16, "bitmask oracle is for small dimensions");
    (0..n).map(|i| (0..n).filter(|&j| *m.get(i, j) == 1).fold(0, |acc, j| acc | (1 << j))).collect()
}

pub fn f2_mask(v: &[u32]) -> u32 {
    v.iter().enumerate().filter(|(_, &x)| x % 2 == 1).fold(0, |acc, (i, _)| acc | (1 << i))
}

fn f2_apply(rows: &[u32], v: u32) -> u32 {
    // (M v)_i = parity(row_i & v)
    rows.iter().enumerate().filter(|(_, &r)| (r & v).count_ones() % 2 == 1).fold(0, |acc, (i, _)| acc | (1 << i))
}

/// Every element of the submodule generated by `seed`, kept as an explicit set.
pub fn f2_spin(gens: &[Vec<u32>], seed: u32) -> HashSet<u32> {
    let mut span: HashSet<u32> = HashSet::from([0]);
    let mut queue = vec![seed];
    while let Some(v) = queue.pop() {
        if span.contains(&v) {
            continue;
        }
        let old: Vec<u32> = span.iter().copied().collect();
        span.extend(old.iter().map(|s| s ^ v));
        queue.extend(gens.iter().map(|m| f2_apply(m, v)));
    }
    span
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_counts() {
        assert_eq!(flag_count(1, 4), 5);
        assert_eq!(flag_count(2, 2), 21);
        assert_eq!(flag_count(3, 2), 315);
    }

    #[test]
    fn spin_of_a_cycle() {
        // cyclic shift on F_2^3: the all-ones line and the sum-zero plane are invariant
        let shift = vec![0b100, 0b001, 0b010];
        assert_eq!(f2_spin(&[shift.clone()], 0b111).len(), 2);
        assert_eq!(f2_spin(&[shift.clone()], 0b011).len(), 4);
        assert_eq!(f2_spin(&[shift], 0b001).len(), 8);
        assert_eq!(f2_mask(&[1, 0, 1]), 0b101);
    }
}
