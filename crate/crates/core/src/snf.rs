//! Smith Normal Form over the integers, with unimodular transforms, integer
//! linear-system solving and kernel-lattice bases.
//!
//! For an `m x n` integer matrix `A` we compute unimodular `P` (`m x m`) and
//! `Q` (`n x n`) with `P * A * Q = D`, where `D` is diagonal-rectangular with
//! positive invariant factors satisfying `d[i] | d[i+1]`. The decomposition
//! drives two consumers: integer solvability of `A x = b` (divisibility of the
//! transformed right-hand side by the invariant factors) and a basis of the
//! integer kernel lattice (the last `n - rank` columns of `Q`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Smith decomposition `P * A * Q = D` of a source matrix `A`.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    /// Diagonal-rectangular `m x n` matrix carrying the invariant factors.
    pub d: IntMatrix,
    /// Left unimodular transform, `m x m`.
    pub p: IntMatrix,
    /// Right unimodular transform, `n x n`.
    pub q: IntMatrix,
    /// Rank of the source matrix.
    pub rank: usize,
    /// The positive invariant factors `d[0] | d[1] | ... | d[rank-1]`.
    pub divisors: Vec<BigInt>,
}

/// Quotient of `a / b` rounded to the nearest integer (ties toward zero), so
/// that `|a - q*b| <= |b| / 2`.
pub(crate) fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Entry size (in bits) above which the trailing rows/columns are compressed
/// with a lattice-reduction pass before the next pivot level.
const COMPRESS_THRESHOLD_BITS: u64 = 128;

fn reduction_delta() -> num_rational::BigRational {
    num_rational::BigRational::new(BigInt::from(3), BigInt::from(4))
}

/// Compresses the trailing rows `t..m` of `d`, folding the unimodular
/// transform into `p`. Elimination alone lets intermediate entries blow up
/// exponentially with the pivot count; reducing the trailing rows between
/// levels keeps them near determinant scale. The rows of `d` and `p` are
/// reduced jointly, so the transform stays implicit and the stacked vectors
/// are always linearly independent (`p` is unimodular).
fn compress_trailing_rows(d: &mut IntMatrix, p: &mut IntMatrix, t: usize) {
    let (m, n) = (d.rows(), d.cols());
    if m - t < 2 {
        return;
    }
    let max_bits = (t..m)
        .flat_map(|i| d.row(i).iter().chain(p.row(i)).map(|e| e.bits()))
        .max()
        .unwrap_or(0);
    if max_bits <= COMPRESS_THRESHOLD_BITS {
        return;
    }
    let joint: Vec<Vec<BigInt>> = (t..m)
        .map(|i| {
            let mut row = d.row(i).to_vec();
            row.extend(p.row(i).iter().cloned());
            row
        })
        .collect();
    let reduced =
        crate::lattice::lll_rows(joint, &reduction_delta()).expect("joint rows are independent");
    for (k, row) in reduced.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            if j < n {
                d[(t + k, j)] = v;
            } else {
                p[(t + k, j - n)] = v;
            }
        }
    }
}


/// Computes the Smith Normal Form of `a` by elementary row/column reduction,
/// accumulating the transforms. Pivots are chosen with minimal nonzero
/// absolute value, and trailing rows are periodically compressed by lattice
/// reduction to keep intermediate entry growth in check.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut p = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);

    let mut t = 0;
    while t < m.min(n) {
        compress_trailing_rows(&mut d, &mut p, t);
        // Minimal-|value| pivot in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break; // trailing submatrix is zero
        };
        d.swap_rows(t, pi);
        p.swap_rows(t, pi);
        d.swap_cols(t, pj);
        q.swap_cols(t, pj);

        loop {
            // Clear column t below the pivot; a nonzero remainder becomes the
            // new (smaller) pivot.
            let mut pivot_changed = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let f = -rounded_div(&d[(i, t)], &d[(t, t)]);
                d.add_scaled_row(i, t, &f);
                p.add_scaled_row(i, t, &f);
                if !d[(i, t)].is_zero() {
                    d.swap_rows(t, i);
                    p.swap_rows(t, i);
                    pivot_changed = true;
                }
            }
            if pivot_changed {
                continue;
            }
            // Clear row t to the right of the pivot.
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let f = -rounded_div(&d[(t, j)], &d[(t, t)]);
                d.add_scaled_col(j, t, &f);
                q.add_scaled_col(j, t, &f);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    q.swap_cols(t, j);
                    pivot_changed = true;
                }
            }
            if pivot_changed {
                continue;
            }
            // Row and column are clear. If the pivot fails to divide some
            // trailing entry, fold that row in and keep reducing; the pivot
            // magnitude strictly decreases, so this terminates.
            let mut fixed = true;
            'divisibility: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        d.add_scaled_row(t, i, &BigInt::from(1));
                        p.add_scaled_row(t, i, &BigInt::from(1));
                        fixed = false;
                        break 'divisibility;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        t += 1;
    }

    // Normalize divisor signs.
    for i in 0..m.min(n) {
        if d[(i, i)].is_negative() {
            d.negate_row(i);
            p.negate_row(i);
        }
    }

    let rank = (0..m.min(n)).take_while(|&i| !d[(i, i)].is_zero()).count();
    let divisors = (0..rank).map(|i| d[(i, i)].clone()).collect();
    SnfDecomposition {
        d,
        p,
        q,
        rank,
        divisors,
    }
}

/// The full integer solution set of `A x = b`: one particular solution plus a
/// basis of the homogeneous solution lattice.
#[derive(Clone, Debug)]
pub struct GeneralSolution {
    /// One integer solution of `A x = b`.
    pub particular: Vec<BigInt>,
    /// Basis of `{ v : A v = 0 }`; every integer solution is
    /// `particular + (integer combination of free_basis)`.
    pub free_basis: Vec<Vec<BigInt>>,
    /// Number of free parameters, `n - rank(A)`.
    pub free_count: usize,
}

/// Solves `A x = b` over the integers. Returns `Ok(None)` when no integer
/// solution exists, which happens exactly when the transformed right-hand
/// side `c = P b` has a nonzero entry past the rank or an entry not divisible
/// by its invariant factor.
pub fn solve_integer_system(a: &IntMatrix, b: &[BigInt]) -> Result<Option<GeneralSolution>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, rhs has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let dec = snf(a);
    solve_with_snf(a, &dec, b)
}

/// Same as [`solve_integer_system`], reusing an already-computed
/// decomposition of `a`.
pub fn solve_with_snf(
    a: &IntMatrix,
    dec: &SnfDecomposition,
    b: &[BigInt],
) -> Result<Option<GeneralSolution>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, rhs has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let c = dec.p.mul_vec(b)?;
    for ci in c.iter().skip(dec.rank) {
        if !ci.is_zero() {
            return Ok(None);
        }
    }
    let mut y = vec![BigInt::zero(); n];
    for i in 0..dec.rank {
        let (quot, rem) = c[i].div_rem(&dec.divisors[i]);
        if !rem.is_zero() {
            return Ok(None);
        }
        y[i] = quot;
    }
    let particular = dec.q.mul_vec(&y)?;
    let free_basis = kernel_from_snf(dec, n);
    let free_count = free_basis.len();
    Ok(Some(GeneralSolution {
        particular,
        free_basis,
        free_count,
    }))
}

fn kernel_from_snf(dec: &SnfDecomposition, n: usize) -> Vec<Vec<BigInt>> {
    (dec.rank..n).map(|j| dec.q.col(j)).collect()
}

/// Basis of the integer kernel lattice `{ x : A x = 0 }`: the last
/// `n - rank(A)` columns of `Q`. Empty when `A` has full column rank.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let dec = snf(a);
    kernel_from_snf(&dec, a.cols())
}
