//! The characteristic polynomial of the Frobenius endomorphism, by two
//! algorithms, with the Cayley-Hamilton check.

use drinfeld::motive::{frobenius_charpoly, frobenius_residual, FrobeniusAlgorithm};
use drinfeld::{DrinfeldModule, FieldElement, FieldTower, Level};
use rand::SeedableRng;

fn main() -> drinfeld::Result<()> {
    let k = FieldTower::new(5, 1, 3)?;
    let z = k.gen_k();
    let phi = DrinfeldModule::new(&k, vec![z.clone(), k.zero(Level::K), k.one(Level::K), z])?;
    let cp = frobenius_charpoly(&phi, FrobeniusAlgorithm::Motive)?;
    println!("{cp}");
    println!("gekeler agrees: {}", frobenius_charpoly(&phi, FrobeniusAlgorithm::Gekeler)? == cp);
    println!("residual is zero: {}", frobenius_residual(&phi, &cp)?.is_zero());

    // a larger random example
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let k = FieldTower::new(5, 1, 12)?;
    let mut coeffs: Vec<FieldElement> = vec![k.gen_k()];
    coeffs.extend((0..5).map(|_| k.random_nonzero(Level::K, &mut rng)));
    let phi = DrinfeldModule::new(&k, coeffs)?;
    let start = std::time::Instant::now();
    let cp = frobenius_charpoly(&phi, FrobeniusAlgorithm::Motive)?;
    println!("rank 5 over F_(5^12): {:.1} ms", start.elapsed().as_secs_f64() * 1e3);
    println!("constant term: {}", cp.coefficient(0));
    Ok(())
}
