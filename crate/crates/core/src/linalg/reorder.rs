//! Index reorderings on bipartite and multipartite operators.
//!
//! Every function here is a pure index shuffle (or a sum of shuffled
//! entries for the partial trace); none of them performs arithmetic on
//! individual entries beyond summation.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::{Error, Result};

/// Partial transpose on the second factor:
/// `<ij|out|lm> = <im|rho|lj>`.
pub fn partial_transpose(rho: &ComplexMatrix, d_a: usize, d_b: usize) -> Result<ComplexMatrix> {
    let n = rho.require_square()?;
    if n != d_a * d_b {
        return Err(Error::DimensionMismatch(format!("side {n} is not {d_a}*{d_b}")));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d_a {
        for j in 0..d_b {
            for l in 0..d_a {
                for m in 0..d_b {
                    out[(i * d_b + j, l * d_b + m)] = rho[(i * d_b + m, l * d_b + j)];
                }
            }
        }
    }
    Ok(out)
}

/// Reshuffling `out[(i,k),(j,l)] = U[(i,j),(k,l)]` on `C^d ⊗ C^d`.
pub fn reshuffle(u: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let n = u.require_square()?;
    if n != d * d {
        return Err(Error::DimensionMismatch(format!("side {n} is not {d}^2")));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    out[(i * d + k, j * d + l)] = u[(i * d + j, k * d + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Row-major strides for the given factor dimensions.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Offsets of every basis label of the selected factors, enumerated with the
/// leftmost selected factor most significant.
fn offsets(dims: &[usize], factors: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut out = vec![0usize];
    for &f in factors {
        let mut next = Vec::with_capacity(out.len() * dims[f]);
        for &base in &out {
            for x in 0..dims[f] {
                next.push(base + x * st[f]);
            }
        }
        out = next;
    }
    out
}

fn product(dims: &[usize]) -> Result<usize> {
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::DimensionMismatch("dimension product overflows".into()))
}

/// Partial trace keeping the factors listed in `keep` (in increasing order).
/// Keeping nothing yields the 1x1 trace.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let n = rho.require_square()?;
    if product(dims)? != n {
        return Err(Error::DimensionMismatch(format!("side {n} does not match dims {dims:?}")));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(format!("keep set {keep:?} invalid for {} factors", dims.len())));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let off_keep = offsets(dims, &kept);
    let off_trace = offsets(dims, &traced);
    let m = off_keep.len();
    let mut out = ComplexMatrix::zeros(m, m);
    for (a, &ra) in off_keep.iter().enumerate() {
        for (b, &rb) in off_keep.iter().enumerate() {
            let mut s = ZERO;
            for &t in &off_trace {
                s += rho[(ra + t, rb + t)];
            }
            out[(a, b)] = s;
        }
    }
    Ok(out)
}

/// Reduced density matrix `Tr_{not keep} |psi><psi|` computed straight from
/// the amplitudes.
pub fn reduced_state(psi: &[Complex64], dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if product(dims)? != psi.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} amplitudes do not match dims {dims:?}",
            psi.len()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(format!("keep set {keep:?} invalid for {} factors", dims.len())));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let off_keep = offsets(dims, &kept);
    let off_trace = offsets(dims, &traced);
    let m = off_keep.len();
    let mut out = ComplexMatrix::zeros(m, m);
    for (a, &ra) in off_keep.iter().enumerate() {
        for (b, &rb) in off_keep.iter().enumerate().skip(a) {
            let s: Complex64 = off_trace.iter().map(|&t| psi[ra + t] * psi[rb + t].conj()).sum();
            out[(a, b)] = s;
            out[(b, a)] = s.conj();
        }
    }
    Ok(out)
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Maps each old composite index to its position after reordering factors so
/// that new factor `k` is old factor `perm[k]`.
fn permuted_positions(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    check_permutation(perm, dims.len())?;
    let n = product(dims)?;
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_strides = strides(&new_dims);
    // stride, in the new layout, of each old factor
    let mut stride_of_old = vec![0; dims.len()];
    for (k, &p) in perm.iter().enumerate() {
        stride_of_old[p] = new_strides[k];
    }
    let mut pos = Vec::with_capacity(n);
    let mut label = vec![0usize; dims.len()];
    for _ in 0..n {
        pos.push(label.iter().zip(&stride_of_old).map(|(x, s)| x * s).sum());
        for f in (0..dims.len()).rev() {
            label[f] += 1;
            if label[f] < dims[f] {
                break;
            }
            label[f] = 0;
        }
    }
    Ok(pos)
}

/// Conjugates `m` by the permutation of tensor factors: new factor `k` is old
/// factor `perm[k]`.
pub fn permute_subsystems(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    if product(dims)? != n {
        return Err(Error::DimensionMismatch(format!("side {n} does not match dims {dims:?}")));
    }
    let pos = permuted_positions(dims, perm)?;
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(pos[r], pos[c])] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Same reordering applied to a vector.
pub fn permute_vector(v: &[Complex64], dims: &[usize], perm: &[usize]) -> Result<Vec<Complex64>> {
    if product(dims)? != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} entries do not match dims {dims:?}",
            v.len()
        )));
    }
    let pos = permuted_positions(dims, perm)?;
    let mut out = vec![ZERO; v.len()];
    for (r, &p) in pos.iter().enumerate() {
        out[p] = v[r];
    }
    Ok(out)
}
