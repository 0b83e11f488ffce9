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
fn snf_plain_a_probe() {
    let n = 50usize;
    for m in [4usize, 8, 10, 16, 24, 32, 40] {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(50 + m as u64);
        let rows: Vec<Vec<BigInt>> = (0..m)
            .map(|_| (0..n).map(|_| sample_bits(10, &mut rng)).collect())
            .collect();
        let a = IntMatrix::from_rows(rows).unwrap();
        let t0 = Instant::now();
        let dec = ck_core::snf::snf(&a);
        eprintln!(
            "m={m}: snf {m}x{n} took {:?}, Q bits {}, P bits {}",
            t0.elapsed(),
            dec.q.max_entry_bits(),
            dec.p.max_entry_bits(),
        );
    }
}
