//! Hom spaces as F_q-vector spaces: bases in bounded degree and isogeny
//! search.

use drinfeld::{DrinfeldModule, DrinfeldMorphism, FieldTower, HomSpace, Level, OrePolynomial};

fn main() -> drinfeld::Result<()> {
    let k = FieldTower::new(5, 1, 3)?;
    let z = k.gen_k();
    let phi = DrinfeldModule::new(&k, vec![z.clone(), k.zero(Level::K), k.one(Level::K), z.clone()])?;
    let u = &OrePolynomial::tau(&k) + &OrePolynomial::one(&k);
    let psi = DrinfeldMorphism::from_ore(&phi, u)?.codomain().clone();

    let hom = HomSpace::new(&phi, &psi)?;
    println!("dim Hom_5(phi, psi) = {}", hom.dimension(5));
    for f in hom.basis(5) {
        println!("  {}", f.ore_polynomial());
    }
    match hom.an_isogeny()? {
        Some(f) => println!("an isogeny: {}", f.ore_polynomial()),
        None => println!("no isogeny"),
    }

    let other = DrinfeldModule::new(&k, vec![z.clone(), k.zero(Level::K), k.one(Level::K), z.pow(2)])?;
    println!("Hom(phi, {other}) is zero: {}", HomSpace::new(&phi, &other)?.is_zero()?);
    println!("phi and psi isogenous: {}", drinfeld::motive::is_isogenous(&phi, &psi)?);
    Ok(())
}
