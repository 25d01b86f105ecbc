//! Closed-form extremal sizes and explicit witness sets that attain them.

use crate::cube::{CubeDim, Subcube, VertexSet};
use crate::dyadic::Dyadic;
use crate::error::{CubeError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalKind {
    /// A `d`-subcube: the smallest sets of minimum degree `d`.
    Simon,
    /// The smallest irreducible sets of minimum degree `d`.
    Irreducible,
}

fn check_degree(n: u32, d: u32) -> Result<()> {
    if d > n {
        return Err(CubeError::DegreeOutOfRange { d, n });
    }
    Ok(())
}

/// Irreducible sets with `δ = d` exist for every `0 <= d <= n` except `(1, 0)`.
pub fn is_feasible(n: u32, d: u32) -> bool {
    d <= n && n >= 1 && !(n == 1 && d == 0)
}

fn check_feasible(n: u32, d: u32) -> Result<()> {
    check_degree(n, d)?;
    if !is_feasible(n, d) {
        return Err(CubeError::Infeasible { n, d });
    }
    Ok(())
}

/// `2^d`.
pub fn simon_min_size(n: u32, d: u32) -> Result<u64> {
    check_degree(n, d)?;
    Ok(1 << d)
}

/// `S(n, d) = ⌈2^{d+1} - 2^{2d-n}⌉`, the least size of an irreducible set
/// with minimum degree `d`.
pub fn min_irreducible_size(n: u32, d: u32) -> Result<u64> {
    check_feasible(n, d)?;
    if 2 * d >= n {
        Ok((1 << (d + 1)) - (1 << (2 * d - n)))
    } else {
        // subtracting a value in (0, 1) and rounding up leaves 2^{d+1}
        Ok(1 << (d + 1))
    }
}

/// `3 · 2^{d-1}`: sizes of sets with `δ = d` skip the open interval
/// `(2^d, 3 · 2^{d-1})`. At `d = 0` this is `3/2`.
pub fn gap_threshold(d: u32) -> Dyadic {
    Dyadic::pow2(d as i32 - 1).mul_int(3)
}

/// The `d`-subcube fixing `x_1 ... x_{n-d}` to zero.
pub fn simon_extremal(n: u32, d: u32) -> Result<VertexSet> {
    check_degree(n, d)?;
    let dim = CubeDim::new(n)?;
    let fixed = low_bits(n - d);
    Ok(Subcube::new(dim, fixed, 0)?.vertices())
}

/// Mask of coordinates `x_1 ... x_k`.
fn low_bits(k: u32) -> u32 {
    ((1u64 << k) - 1) as u32
}

/// A smallest irreducible set with minimum degree exactly `d`.
///
/// * `d = n`: all of `Q_n`.
/// * `2d < n`: two disjoint, non-adjacent `d`-subcubes fixing `x_1 ... x_{n-d}`
///   to all zeros and to all ones.
/// * `2d >= n`: the union of `{x_1 = ... = x_{n-d} = 1}` and
///   `{x_{n-d+1} = ... = x_{2(n-d)} = 1}`, which overlap in a
///   `(2d - n)`-subcube.
///
/// The result is checked with the core kernels before it is returned.
pub fn extremal_irreducible(n: u32, d: u32) -> Result<VertexSet> {
    check_feasible(n, d)?;
    let dim = CubeDim::new(n)?;
    let k = n - d;
    let set = if d == n {
        VertexSet::full(dim)
    } else if 2 * d < n {
        let zeros = Subcube::new(dim, low_bits(k), 0)?.vertices();
        let ones = Subcube::new(dim, low_bits(k), low_bits(k))?.vertices();
        zeros.union(&ones)?
    } else {
        let left = low_bits(k);
        let right = left << k;
        let s_left = Subcube::new(dim, left, left)?.vertices();
        let s_right = Subcube::new(dim, right, right)?.vertices();
        s_left.union(&s_right)?
    };
    check_extremal(&set, n, d)?;
    Ok(set)
}

fn check_extremal(set: &VertexSet, n: u32, d: u32) -> Result<()> {
    let fail = |detail: String| Err(CubeError::Postcondition { n, d, detail });
    let delta = set.min_degree()?;
    if delta != d {
        return fail(format!("minimum degree {delta}"));
    }
    if !set.is_irreducible() {
        return fail("set is reducible".into());
    }
    let expected = min_irreducible_size(n, d)?;
    if set.len() != expected {
        return fail(format!("size {} instead of {expected}", set.len()));
    }
    Ok(())
}

pub fn construct(kind: ExtremalKind, n: u32, d: u32) -> Result<VertexSet> {
    match kind {
        ExtremalKind::Simon => simon_extremal(n, d),
        ExtremalKind::Irreducible => extremal_irreducible(n, d),
    }
}
