// Temporary scale probe; will be deleted before finalizing.
use ck_core::matrix::IntMatrix;
use num_bigint::{BigInt, RandBigInt};
use num_traits::Signed;
use rand::SeedableRng;
use std::time::Instant;

fn sample_bits(bits: u64, rng: &mut impl rand::RngCore) -> BigInt {
    let low: BigInt = rng.gen_bigint(bits - 1).abs();
    (BigInt::from(1) << (bits - 1)) + low
}

#[test]
#[ignore]
fn probe_stages() {
    let n = 50usize;
    let r_bits = 80u64;
    for m in [1usize, 10] {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(1000 + m as u64);
        let a = IntMatrix::from_rows(
            (0..m)
                .map(|_| (0..n).map(|_| sample_bits(10, &mut rng)).collect())
                .collect(),
        )
        .unwrap();
        let planted: Vec<BigInt> = (0..n).map(|_| sample_bits(r_bits, &mut rng)).collect();
        let c = a.mul_vec(&planted).unwrap();

        // Stage 1: SNF of [A | -c]
        let mut ext = IntMatrix::zeros(m, n + 1);
        for i in 0..m {
            for j in 0..n {
                ext[(i, j)] = a[(i, j)].clone();
            }
            ext[(i, n)] = -c[i].clone();
        }
        let t0 = Instant::now();
        let dec = ck_core::snf::snf(&ext);
        eprintln!(
            "m={m}: SNF of ext took {:?}; Q max bits = {}",
            t0.elapsed(),
            dec.q.max_entry_bits()
        );

        // Stage 2: SNF of A alone (kernel for the attack)
        let t0 = Instant::now();
        let dec_a = ck_core::snf::snf(&a);
        eprintln!(
            "m={m}: SNF of A took {:?}; Q max bits = {}",
            t0.elapsed(),
            dec_a.q.max_entry_bits()
        );

        // Stage 3: LLL of the zero-tail block only (kernel of ext, with N1 col)
        let n1 = BigInt::from(1) << 82;
        let light: Vec<Vec<BigInt>> = (dec.rank..n + 1)
            .map(|j| {
                let mut v = dec.q.col(j);
                let c_coord = v.pop().unwrap();
                v.push(c_coord * &n1);
                v
            })
            .collect();
        let maxbits = light
            .iter()
            .flat_map(|r| r.iter().map(|e| e.bits()))
            .max()
            .unwrap();
        eprintln!("m={m}: light block {} rows, max bits {maxbits}", light.len());
        let t0 = Instant::now();
        let basis = ck_core::lattice::LatticeBasis::from_rows(light).unwrap();
        let red = ck_core::lattice::lll_reduce(&basis, &ck_core::lattice::default_delta()).unwrap();
        eprintln!(
            "m={m}: light LLL took {:?}, reduced max bits {}",
            t0.elapsed(),
            red.rows()
                .iter()
                .flat_map(|r| r.iter().map(|e| e.bits()))
                .max()
                .unwrap()
        );
    }
}
