//! j-invariants in rank 2 and in higher rank, and isomorphism tests.

use drinfeld::{basic_j_invariant_parameters, DrinfeldModule, FieldTower, JInvariantParameter, Level};

fn main() -> drinfeld::Result<()> {
    let k = FieldTower::new(5, 1, 3)?;
    let z = k.gen_k();

    let phi = DrinfeldModule::new(&k, vec![z.clone(), z.pow(2), z.pow(3)])?;
    println!("j({phi}) = {}", phi.j()?);

    let phi = DrinfeldModule::new(&k, vec![z.clone(), k.zero(Level::K), k.one(Level::K), z.clone(), z.pow(2)])?;
    println!("{} basic parameters in rank 4 over F_5", basic_j_invariant_parameters(4, 5, None)?.len());
    for (param, j) in phi.basic_j_invariants(true)?.iter().take(5) {
        println!("  j{param} = {j}");
    }
    let p = JInvariantParameter::new(vec![2, 3], vec![1, 30], 6);
    println!("j{p} = {}", phi.j_invariant(&p)?);
    println!("j_3 = {}", phi.j_k(3)?);

    let rho = DrinfeldModule::new(&k, vec![z.clone(), k.one(Level::K)])?;
    let sigma = DrinfeldModule::new(&k, vec![z.clone(), z])?;
    println!("rank 1: isomorphic over K: {}", rho.is_isomorphic(&sigma, false)?);
    println!("rank 1: isomorphic over an extension: {}", rho.is_isomorphic(&sigma, true)?);
    Ok(())
}
