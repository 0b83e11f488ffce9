//! Integer lattices: LLL reduction, Babai's nearest-plane CVP approximation,
//! and the scaled-embedding search for a short particular solution of an
//! integer linear system.
//!
//! LLL runs entirely in exact integer arithmetic using the fraction-free
//! Gram-Schmidt representation (the classical `lambda / d` bookkeeping): with
//! `d[0] = 1`, `d[i+1] = det(Gram(b_0..b_i))` and
//! `lambda[i][j] = mu[i][j] * d[j+1]`, every intermediate quantity is an
//! integer and every division below is exact. This is equivalent to rational
//! Gram-Schmidt but avoids gcd churn on large operands.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{dot, IntMatrix};
use crate::snf::{rounded_div, solve_integer_system};

/// Reduction state of a [`LatticeBasis`].
#[derive(Clone, Debug, PartialEq)]
pub enum ReductionQuality {
    None,
    Lll { delta: BigRational },
}

/// A lattice basis given by linearly independent integer row vectors.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    vectors: Vec<Vec<BigInt>>,
    quality: ReductionQuality,
}

impl LatticeBasis {
    /// Wraps row vectors as a basis. Rows must be nonempty and of equal
    /// length; linear independence is verified when the basis is reduced.
    pub fn from_rows(vectors: Vec<Vec<BigInt>>) -> Result<Self> {
        if vectors.is_empty() || vectors[0].is_empty() {
            return Err(Error::DimensionMismatch("empty basis".into()));
        }
        let dim = vectors[0].len();
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch("ragged basis rows".into()));
        }
        if vectors.len() > dim {
            return Err(Error::DependentRows);
        }
        Ok(LatticeBasis {
            vectors,
            quality: ReductionQuality::None,
        })
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    /// Number of basis vectors (lattice rank).
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn quality(&self) -> &ReductionQuality {
        &self.quality
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.vectors
    }
}

/// The default LLL parameter used throughout the crate, `delta = 99/100`.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(99), BigInt::from(100))
}

fn validate_delta(delta: &BigRational) -> Result<()> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta >= BigRational::one() {
        return Err(Error::InvalidParameter(format!(
            "LLL delta must lie in (1/4, 1), got {delta}"
        )));
    }
    Ok(())
}

/// Exact integer LLL state.
struct LllState {
    b: Vec<Vec<BigInt>>,
    /// `lambda[i][j]`, `j < i`: scaled Gram-Schmidt coefficient.
    lambda: Vec<Vec<BigInt>>,
    /// `d[0] = 1`; `d[i+1]` = Gram determinant of rows `0..=i`.
    d: Vec<BigInt>,
    /// Rows `0..=kmax` have been introduced into the bookkeeping.
    kmax: usize,
}

impl LllState {
    fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        let mut st = LllState {
            b: rows,
            lambda: (0..n).map(|i| vec![BigInt::zero(); i]).collect(),
            d: {
                let mut d = vec![BigInt::zero(); n + 1];
                d[0] = BigInt::one();
                d
            },
            kmax: 0,
        };
        st.introduce(0)?;
        Ok(st)
    }

    /// Computes `lambda[k][..k]` and `d[k+1]` for a freshly considered row.
    fn introduce(&mut self, k: usize) -> Result<()> {
        for j in 0..=k {
            let mut u = dot(&self.b[k], &self.b[j]);
            for i in 0..j {
                u = (&self.d[i + 1] * u - &self.lambda[k][i] * &self.lambda[j][i]) / &self.d[i];
            }
            if j < k {
                self.lambda[k][j] = u;
            } else {
                if u.is_zero() || u.is_negative() {
                    return Err(Error::DependentRows);
                }
                self.d[k + 1] = u;
            }
        }
        Ok(())
    }

    /// Size-reduces row `k` against row `l`, keeping `|mu[k][l]| <= 1/2`.
    fn reduce(&mut self, k: usize, l: usize) {
        let two_lam: BigInt = &self.lambda[k][l] * 2;
        if two_lam.abs() <= self.d[l + 1] {
            return;
        }
        let q = rounded_div(&self.lambda[k][l], &self.d[l + 1]);
        let neg_q = -&q;
        for (dst, src) in (0..self.b[k].len()).map(|c| (c, c)) {
            let term = &neg_q * &self.b[l][src];
            self.b[k][dst] += term;
        }
        let term = &q * &self.d[l + 1];
        self.lambda[k][l] -= term;
        for i in 0..l {
            let term = &q * &self.lambda[l][i];
            self.lambda[k][i] -= term;
        }
    }

    /// Lovasz condition at index `k` with `delta = p/q`:
    /// `q * d[k+1] * d[k-1] >= p * d[k]^2 - q * lambda[k][k-1]^2`.
    fn lovasz_holds(&self, k: usize, p: &BigInt, q: &BigInt) -> bool {
        let lhs = q * &self.d[k + 1] * &self.d[k - 1];
        let rhs = p * &self.d[k] * &self.d[k] - q * &self.lambda[k][k - 1] * &self.lambda[k][k - 1];
        lhs >= rhs
    }

    /// Swaps rows `k` and `k-1`, updating the bookkeeping in place.
    fn swap(&mut self, k: usize) {
        self.b.swap(k, k - 1);
        for j in 0..k - 1 {
            let (lo, hi) = self.lambda.split_at_mut(k);
            std::mem::swap(&mut lo[k - 1][j], &mut hi[0][j]);
        }
        let lam = self.lambda[k][k - 1].clone();
        let bb = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=self.kmax {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] = (&self.d[k + 1] * &self.lambda[i][k - 1] - &lam * &t) / &self.d[k];
            self.lambda[i][k - 1] = (&bb * &t + &lam * &self.lambda[i][k]) / &self.d[k + 1];
        }
        self.d[k] = bb;
    }
}

/// LLL-reduces a basis at parameter `delta`, returning a new basis of the
/// same lattice satisfying the size-reduction and Lovasz conditions.
///
/// Errors on linearly dependent input rows and on `delta` outside `(1/4, 1)`.
pub fn lll_reduce(basis: &LatticeBasis, delta: &BigRational) -> Result<LatticeBasis> {
    validate_delta(delta)?;
    let rows = basis.vectors.clone();
    let reduced = lll_rows(rows, delta)?;
    Ok(LatticeBasis {
        vectors: reduced,
        quality: ReductionQuality::Lll {
            delta: delta.clone(),
        },
    })
}

pub(crate) fn lll_rows(rows: Vec<Vec<BigInt>>, delta: &BigRational) -> Result<Vec<Vec<BigInt>>> {
    let n = rows.len();
    let mut st = LllState::new(rows)?;
    let p = delta.numer().clone();
    let q = delta.denom().clone();
    let mut k = 1usize;
    while k < n {
        if k > st.kmax {
            st.kmax = k;
            st.introduce(k)?;
        }
        st.reduce(k, k - 1);
        if st.lovasz_holds(k, &p, &q) {
            for l in (0..k.saturating_sub(1)).rev() {
                st.reduce(k, l);
            }
            k += 1;
        } else {
            st.swap(k);
            k = k.max(2) - 1;
        }
    }
    Ok(st.b)
}

/// Rational Gram-Schmidt data: orthogonal vectors `b*` and coefficients `mu`.
pub(crate) struct GramSchmidt {
    pub star: Vec<Vec<BigRational>>,
    pub mu: Vec<Vec<BigRational>>,
    pub norms_sq: Vec<BigRational>,
}

pub(crate) fn rational_dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn to_rational_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from(x.clone())).collect()
}

pub(crate) fn gram_schmidt(rows: &[Vec<BigInt>]) -> Result<GramSchmidt> {
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    let mut mu: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    let mut norms_sq: Vec<BigRational> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut v = to_rational_vec(row);
        let mut mu_row = Vec::with_capacity(i);
        for j in 0..i {
            let coeff = &rational_dot(&v, &star[j]) / &norms_sq[j];
            for (vc, sc) in v.iter_mut().zip(&star[j]) {
                *vc -= &coeff * sc;
            }
            mu_row.push(coeff);
        }
        let nsq = rational_dot(&v, &v);
        if nsq.is_zero() {
            return Err(Error::DependentRows);
        }
        star.push(v);
        mu.push(mu_row);
        norms_sq.push(nsq);
    }
    Ok(GramSchmidt {
        star,
        mu,
        norms_sq,
    })
}

/// Independent LLL condition checker: recomputes rational Gram-Schmidt data
/// from scratch and verifies size-reduction (`|mu| <= 1/2`) and the Lovasz
/// condition at `delta`. Returns a description of the first violation.
pub fn verify_lll_conditions(
    basis: &LatticeBasis,
    delta: &BigRational,
) -> std::result::Result<(), String> {
    let gs = gram_schmidt(&basis.vectors).map_err(|e| e.to_string())?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..basis.vectors.len() {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return Err(format!("size reduction fails at mu[{i}][{j}] = {}", gs.mu[i][j]));
            }
        }
    }
    for i in 1..basis.vectors.len() {
        let lhs = &gs.norms_sq[i];
        let rhs = (delta - &gs.mu[i][i - 1] * &gs.mu[i][i - 1]) * &gs.norms_sq[i - 1];
        if *lhs < rhs {
            return Err(format!("Lovasz condition fails at index {i}"));
        }
    }
    Ok(())
}

/// Rounds half up: `round(x) = floor(x + 1/2)`, so ties go toward positive
/// infinity. This is the fixed tie rule used by [`babai_nearest_plane`].
pub fn round_half_up(x: &BigRational) -> BigInt {
    let shifted = x + BigRational::new(BigInt::one(), BigInt::from(2));
    shifted.floor().to_integer()
}

/// Orthogonal projection of `target` onto the rational span of the basis.
/// Returns the projection and the residual `target - projection`; the
/// residual is zero exactly when the target lies in the span.
pub fn span_projection(
    basis: &LatticeBasis,
    target: &[BigRational],
) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    if target.len() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "target length {} vs ambient dimension {}",
            target.len(),
            basis.dim()
        )));
    }
    let gs = gram_schmidt(&basis.vectors)?;
    let mut residual = target.to_vec();
    for j in 0..basis.rank() {
        let coeff = &rational_dot(&residual, &gs.star[j]) / &gs.norms_sq[j];
        for (rc, sc) in residual.iter_mut().zip(&gs.star[j]) {
            *rc -= &coeff * sc;
        }
    }
    let projection: Vec<BigRational> = target
        .iter()
        .zip(&residual)
        .map(|(t, r)| t - r)
        .collect();
    Ok((projection, residual))
}

/// Babai's nearest-plane algorithm. The basis should be LLL-reduced for the
/// `2^{k/2}` approximation guarantee; the target must lie in the rational
/// span of the basis (checked, error otherwise). Rounding ties follow
/// [`round_half_up`].
pub fn babai_nearest_plane(basis: &LatticeBasis, target: &[BigRational]) -> Result<Vec<BigInt>> {
    if target.len() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "target length {} vs ambient dimension {}",
            target.len(),
            basis.dim()
        )));
    }
    let gs = gram_schmidt(&basis.vectors)?;
    // Span membership: the Gram-Schmidt residual of the target must vanish.
    let mut residual = target.to_vec();
    for j in 0..basis.rank() {
        let coeff = &rational_dot(&residual, &gs.star[j]) / &gs.norms_sq[j];
        for (rc, sc) in residual.iter_mut().zip(&gs.star[j]) {
            *rc -= &coeff * sc;
        }
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return Err(Error::TargetOutsideSpan);
    }
    Ok(nearest_plane_inner(basis, &gs, target))
}

/// Nearest-plane walk; also correct for targets outside the span, where it
/// approximates the closest vector to the span projection of the target.
pub(crate) fn babai_toward(basis: &LatticeBasis, target: &[BigRational]) -> Result<Vec<BigInt>> {
    let gs = gram_schmidt(&basis.vectors)?;
    Ok(nearest_plane_inner(basis, &gs, target))
}

fn nearest_plane_inner(
    basis: &LatticeBasis,
    gs: &GramSchmidt,
    target: &[BigRational],
) -> Vec<BigInt> {
    let mut v = target.to_vec();
    let mut out = vec![BigInt::zero(); basis.dim()];
    for i in (0..basis.rank()).rev() {
        let coeff = &rational_dot(&v, &gs.star[i]) / &gs.norms_sq[i];
        let c = round_half_up(&coeff);
        if c.is_zero() {
            continue;
        }
        let c_rat = BigRational::from(c.clone());
        for ((vc, bc), oc) in v
            .iter_mut()
            .zip(&basis.vectors[i])
            .zip(out.iter_mut())
        {
            *vc -= &c_rat * BigRational::from(bc.clone());
            *oc += &c * bc;
        }
    }
    out
}

/// Scaling parameters for the embedding lattice used by
/// [`lenstra_particular_solution`].
#[derive(Clone, Debug)]
pub struct EmbeddingParams {
    pub n1: BigInt,
    pub n2: BigInt,
    pub max_retries: u32,
}

impl EmbeddingParams {
    pub fn new(n1: BigInt, n2: BigInt, max_retries: u32) -> Result<Self> {
        if n1 < BigInt::from(2) || n2 < BigInt::from(2) {
            return Err(Error::InvalidParameter(
                "embedding scalars must be at least 2".into(),
            ));
        }
        Ok(EmbeddingParams {
            n1,
            n2,
            max_retries,
        })
    }

    /// Initial scalars from a bit-scale hint for the solution entries:
    /// `N1 = 2^(scale+2)`, `N2 = 2^(2*(scale + ceil(log2 cols)))`, with five
    /// retries of exponent doubling.
    pub fn from_bit_scale(bit_scale: u32, cols: usize) -> Self {
        let log2n = usize::BITS - cols.max(2).saturating_sub(1).leading_zeros();
        EmbeddingParams {
            n1: BigInt::one() << (bit_scale + 2),
            n2: BigInt::one() << (2 * (bit_scale + log2n)),
            max_retries: 5,
        }
    }

    /// Fallback rule when the caller has no scale hint: use the bit length of
    /// the largest entry of `(A | d)`.
    pub fn for_system(a: &IntMatrix, d: &[BigInt]) -> Self {
        let bits = a
            .max_entry_bits()
            .max(d.iter().map(|x| x.bits()).max().unwrap_or(1))
            .max(1) as u32;
        Self::from_bit_scale(bits, a.cols())
    }
}

/// Builds a basis of the `(n+1)`-rank embedding lattice generated by
/// `B = [ I_n | 0 | N2*A^T ; 0 | N1 | -N2*d ]`, whose vectors are
/// `(y, c*N1, N2*(A y - c d))` for `(y, c)` ranging over `Z^{n+1}`; it
/// contains `(x, N1, 0_m)` exactly for the integer solutions `x` of
/// `A x = d`.
///
/// Feeding `B` itself to an exact LLL is prohibitively slow: the reduction
/// would spend almost all of its swaps rediscovering the integer
/// cancellations of the `N2`-scaled tail block. Instead we change basis by
/// the unimodular `Q` from the Smith decomposition of `[A | -d]`: the rows
/// become `(column j of Q) * B`, the kernel columns of `Q` yield rows whose
/// scaled tail is exactly zero, and the lattice is unchanged.
fn embedding_rows(a: &IntMatrix, d: &[BigInt], n1: &BigInt, n2: &BigInt) -> Vec<Vec<BigInt>> {
    let (m, n) = (a.rows(), a.cols());
    let width = n + 1 + m;

    // Extended matrix [A | -d], so that (y, c) is in its kernel iff A y = c d.
    let mut ext = IntMatrix::zeros(m, n + 1);
    for i in 0..m {
        for j in 0..n {
            ext[(i, j)] = a[(i, j)].clone();
        }
        ext[(i, n)] = -d[i].clone();
    }
    let dec = crate::snf::snf(&ext);

    let embed = |y_c: &[BigInt]| -> Vec<BigInt> {
        let (y, c) = y_c.split_at(n);
        let mut row = Vec::with_capacity(width);
        row.extend(y.iter().cloned());
        row.push(&c[0] * n1);
        let tail = ext.mul_vec(y_c).expect("width checked");
        for t in tail {
            row.push(n2 * t);
        }
        row
    };

    let mut rows = Vec::with_capacity(n + 1);
    // Kernel columns first: short rows with identically zero tails.
    for j in dec.rank..n + 1 {
        rows.push(embed(&dec.q.col(j)));
    }
    for j in 0..dec.rank {
        rows.push(embed(&dec.q.col(j)));
    }
    rows
}

/// Scans an LLL-reduced embedding basis for a row of the form
/// `(x, +-N1, 0_m)` and recovers `x` (negated when the marker is `-N1`).
fn scan_solution_row(
    rows: &[Vec<BigInt>],
    n: usize,
    m: usize,
    n1: &BigInt,
) -> Option<Vec<BigInt>> {
    let neg_n1 = -n1.clone();
    for row in rows {
        if row[n + 1..n + 1 + m].iter().any(|c| !c.is_zero()) {
            continue;
        }
        if row[n] == *n1 {
            return Some(row[..n].to_vec());
        }
        if row[n] == neg_n1 {
            return Some(row[..n].iter().map(|c| -c).collect());
        }
    }
    None
}

/// Finds a short, balanced integer solution of `A x = d` by LLL-reducing the
/// scaled embedding lattice and reading the row that carries the `N1` marker.
///
/// Errors with [`Error::NoIntegerSolution`] when the system is unsolvable
/// over the integers (detected via an exact solvability pre-check), and with
/// [`Error::EmbeddingRetriesExhausted`] when every rescaling attempt fails to
/// surface a marker row.
pub fn lenstra_particular_solution(
    a: &IntMatrix,
    d: &[BigInt],
    params: &EmbeddingParams,
) -> Result<Vec<BigInt>> {
    if d.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, rhs has {} entries",
            a.rows(),
            d.len()
        )));
    }
    if solve_integer_system(a, d)?.is_none() {
        return Err(Error::NoIntegerSolution);
    }
    lenstra_search(a, d, params)
}

/// The embedding search itself, assuming the system is known to be solvable.
pub(crate) fn lenstra_search(
    a: &IntMatrix,
    d: &[BigInt],
    params: &EmbeddingParams,
) -> Result<Vec<BigInt>> {
    let (m, n) = (a.rows(), a.cols());
    let delta = default_delta();
    let mut n1 = params.n1.clone();
    let mut n2 = params.n2.clone();
    for _ in 0..=params.max_retries {
        let rows = embedding_rows(a, d, &n1, &n2);
        let reduced = lll_rows(rows, &delta)?;
        if let Some(x) = scan_solution_row(&reduced, n, m, &n1) {
            debug_assert_eq!(a.mul_vec(&x).unwrap(), d.to_vec());
            return Ok(x);
        }
        // Rare failure mode: rescale by doubling both exponents.
        n1 = &n1 * &n1;
        n2 = &n2 * &n2;
    }
    Err(Error::EmbeddingRetriesExhausted(params.max_retries))
}
