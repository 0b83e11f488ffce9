//! Incremental integer linear-system solver used internally by the attack
//! pipeline.
//!
//! The Smith-form route recomputes the whole decomposition of an `m x n`
//! matrix at once; at attack scale (`n = 50`, `m` up to 40) the accumulated
//! transform entries grow far beyond what the subsequent lattice steps can
//! digest. This solver instead intersects the row constraints one at a time:
//! each step solves a single linear form over the current kernel lattice
//! (a gcd cascade), lifts the result, and compresses the working basis with a
//! cheap LLL pass so that every intermediate quantity stays near its minimal
//! size. The outputs describe the same solution set as
//! [`crate::snf::solve_integer_system`]; only the basis choice differs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::lattice::lll_rows;
use crate::matrix::{dot, IntMatrix};
use crate::snf::{rounded_div, snf, solve_with_snf};

/// Kernel entries are compressed once they exceed this many bits.
const KERNEL_COMPRESS_BITS: u64 = 96;

pub(crate) struct CompactSolution {
    /// A size-reduced particular solution of `A x = b`.
    pub particular: Vec<BigInt>,
    /// LLL-compressed basis of the kernel lattice `{ v : A v = 0 }`.
    pub kernel: Vec<Vec<BigInt>>,
    /// `rank(A)` vectors that extend `kernel` to a basis of `Z^n`.
    pub completion: Vec<Vec<BigInt>>,
}

fn compress_delta() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(4))
}

fn max_bits(rows: &[Vec<BigInt>]) -> u64 {
    rows.iter()
        .flat_map(|r| r.iter().map(|e| e.bits()))
        .max()
        .unwrap_or(0)
}

/// One sweep of integer size reduction of `x` against the (short) kernel
/// vectors; keeps the particular solution from drifting upward in size.
fn size_reduce_against(x: &mut [BigInt], kernel: &[Vec<BigInt>]) {
    for _ in 0..2 {
        for v in kernel {
            let nsq = dot(v, v);
            if nsq.is_zero() {
                continue;
            }
            let c = rounded_div(&dot(x, v), &nsq);
            if c.is_zero() {
                continue;
            }
            for (xi, vi) in x.iter_mut().zip(v) {
                let term = &c * vi;
                *xi -= term;
            }
        }
    }
}

/// Solves `A x = b` over the integers, returning `None` when no integer
/// solution exists.
pub(crate) fn solve_compact(a: &IntMatrix, b: &[BigInt]) -> Result<Option<CompactSolution>> {
    if b.len() != a.rows() {
        return Err(crate::error::Error::DimensionMismatch(format!(
            "matrix has {} rows, rhs has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let mut kernel: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::from(1);
            v
        })
        .collect();
    let mut x = vec![BigInt::zero(); n];
    let mut completion: Vec<Vec<BigInt>> = Vec::new();

    for i in 0..a.rows() {
        let row = a.row(i);
        let residual = &b[i] - dot(row, &x);
        let w: Vec<BigInt> = kernel.iter().map(|v| dot(v, row)).collect();
        if w.iter().all(|c| c.is_zero()) {
            // The row is already determined on the current affine space.
            if residual.is_zero() {
                continue;
            }
            return Ok(None);
        }
        // Solve the single form w . z = residual over Z^k.
        let w_mat = IntMatrix::from_rows(vec![w]).expect("nonempty form");
        let dec = snf(&w_mat);
        let Some(form_sol) = solve_with_snf(&w_mat, &dec, &[residual])? else {
            return Ok(None); // gcd obstruction
        };
        // The first column of Q completes the form's kernel inside Z^k; its
        // lift completes the new kernel inside the old one, so the collected
        // lifts plus the final kernel always form a basis of Z^n.
        completion.push(lift(&dec.q.col(0), &kernel, n));
        let shift = lift(&form_sol.particular, &kernel, n);
        for (xi, s) in x.iter_mut().zip(shift) {
            *xi += s;
        }
        kernel = form_sol
            .free_basis
            .iter()
            .map(|z| lift(z, &kernel, n))
            .collect();
        if kernel.len() > 1 && max_bits(&kernel) > KERNEL_COMPRESS_BITS {
            kernel = lll_rows(kernel, &compress_delta())?;
        }
        size_reduce_against(&mut x, &kernel);
    }
    Ok(Some(CompactSolution {
        particular: x,
        kernel,
        completion,
    }))
}

/// Kernel-only variant (right-hand side zero never fails).
pub(crate) fn kernel_compact(a: &IntMatrix) -> Result<Vec<Vec<BigInt>>> {
    let zero = vec![BigInt::zero(); a.rows()];
    Ok(solve_compact(a, &zero)?
        .expect("homogeneous system is always solvable")
        .kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snf::solve_integer_system;
    use num_bigint::RandBigInt;
    use rand::{Rng, SeedableRng};

    #[test]
    fn agrees_with_snf_solver_on_random_systems() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(31);
        for trial in 0..120 {
            let m = rng.gen_range(1..=4);
            let n = rng.gen_range(1..=7);
            let a = IntMatrix::from_rows(
                (0..m)
                    .map(|_| {
                        (0..n)
                            .map(|_| rng.gen_bigint_range(&BigInt::from(-9), &BigInt::from(10)))
                            .collect()
                    })
                    .collect(),
            )
            .unwrap();
            let b: Vec<BigInt> = (0..m)
                .map(|_| rng.gen_bigint_range(&BigInt::from(-20), &BigInt::from(21)))
                .collect();
            let fast = solve_compact(&a, &b).unwrap();
            let slow = solve_integer_system(&a, &b).unwrap();
            match (&fast, &slow) {
                (Some(f), Some(s)) => {
                    assert_eq!(a.mul_vec(&f.particular).unwrap(), b, "trial {trial}");
                    assert_eq!(f.kernel.len(), s.free_count, "trial {trial}");
                    for v in &f.kernel {
                        assert!(a.mul_vec(v).unwrap().iter().all(|e| e.is_zero()));
                    }
                }
                (None, None) => {}
                _ => panic!("solvers disagree on trial {trial}: {:?}", a),
            }
        }
    }

    #[test]
    fn completion_extends_kernel_to_unimodular_basis() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(37);
        for _ in 0..40 {
            let m = rng.gen_range(1..=3);
            let n = rng.gen_range(2..=6);
            let a = IntMatrix::from_rows(
                (0..m)
                    .map(|_| {
                        (0..n)
                            .map(|_| rng.gen_bigint_range(&BigInt::from(-9), &BigInt::from(10)))
                            .collect()
                    })
                    .collect(),
            )
            .unwrap();
            let zero = vec![BigInt::zero(); m];
            let sol = solve_compact(&a, &zero).unwrap().unwrap();
            let mut rows = sol.completion.clone();
            rows.extend(sol.kernel.iter().cloned());
            assert_eq!(rows.len(), n);
            let full = IntMatrix::from_rows(rows).unwrap();
            assert!(full.is_unimodular(), "completion+kernel not a Z^n basis");
        }
    }

    #[test]
    fn detects_unsolvable_systems() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4], &[0, 0]]);
        let b = vec![BigInt::from(3), BigInt::zero()];
        assert!(solve_compact(&a, &b).unwrap().is_none());
        let b2 = vec![BigInt::from(2), BigInt::from(1)];
        assert!(solve_compact(&a, &b2).unwrap().is_none());
    }
}
