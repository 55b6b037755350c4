//! In-place gate kernels on raw amplitude buffers.
//!
//! A buffer of length `2^n` is indexed with qubit 0 as the most significant
//! bit. Density matrices reuse these kernels by viewing the row-major `d × d`
//! matrix as a `2n`-qubit vector: `U ρ U†` is `(U ⊗ U*) vec(ρ)`.

use nalgebra::{Matrix2, Matrix4};

use crate::C64;

#[inline]
pub(crate) fn mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

pub(crate) fn apply_1q(amps: &mut [C64], n: usize, q: usize, m: &Matrix2<C64>) {
    let bit = mask(n, q);
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    for i in 0..amps.len() {
        if i & bit == 0 {
            let j = i | bit;
            let (a, b) = (amps[i], amps[j]);
            amps[i] = m00 * a + m01 * b;
            amps[j] = m10 * a + m11 * b;
        }
    }
}

/// Applies a 4×4 matrix to qubits `(a, b)`; `a` is the high bit of the
/// matrix's local index.
pub(crate) fn apply_2q(amps: &mut [C64], n: usize, a: usize, b: usize, m: &Matrix4<C64>) {
    let (ba, bb) = (mask(n, a), mask(n, b));
    for i in 0..amps.len() {
        if i & (ba | bb) == 0 {
            let idx = [i, i | bb, i | ba, i | ba | bb];
            let v = idx.map(|k| amps[k]);
            for (r, &k) in idx.iter().enumerate() {
                amps[k] = m[(r, 0)] * v[0] + m[(r, 1)] * v[1] + m[(r, 2)] * v[2] + m[(r, 3)] * v[3];
            }
        }
    }
}

pub(crate) fn apply_cnot(amps: &mut [C64], n: usize, control: usize, target: usize) {
    let (bc, bt) = (mask(n, control), mask(n, target));
    for i in 0..amps.len() {
        if i & bc != 0 && i & bt == 0 {
            amps.swap(i, i | bt);
        }
    }
}

pub(crate) fn apply_swap(amps: &mut [C64], n: usize, a: usize, b: usize) {
    let (ba, bb) = (mask(n, a), mask(n, b));
    for i in 0..amps.len() {
        if i & ba != 0 && i & bb == 0 {
            amps.swap(i, (i & !ba) | bb);
        }
    }
}

/// Moves the content of qubit `i` to qubit `perm[i]`.
pub(crate) fn permute_qubits(amps: &[C64], n: usize, perm: &[usize]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    for (i, &a) in amps.iter().enumerate() {
        let j = relabel_index(i, n, perm);
        out[j] = a;
    }
    out
}

pub(crate) fn relabel_index(i: usize, n: usize, perm: &[usize]) -> usize {
    let mut j = 0;
    for (q, &dest) in perm.iter().enumerate() {
        if i & mask(n, q) != 0 {
            j |= mask(n, dest);
        }
    }
    j
}

/// Splits a basis index into `(kept, rest)` sub-indices, each ordered by
/// ascending qubit label.
pub(crate) fn split_index(i: usize, n: usize, keep: &[usize], rest: &[usize]) -> (usize, usize) {
    let gather = |qs: &[usize]| {
        qs.iter()
            .fold(0usize, |acc, &q| (acc << 1) | usize::from(i & mask(n, q) != 0))
    };
    (gather(keep), gather(rest))
}
