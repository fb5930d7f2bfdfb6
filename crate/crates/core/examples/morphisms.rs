//! Morphisms as Ore polynomials: codomain inference, isomorphisms and the
//! endomorphism ring.

use drinfeld::{DensePolynomial, DrinfeldModule, DrinfeldMorphism, FieldTower, Level, OrePolynomial};

fn main() -> drinfeld::Result<()> {
    let k = FieldTower::new(5, 1, 3)?;
    let z = k.gen_k();
    let phi = DrinfeldModule::new(&k, vec![z.clone(), k.zero(Level::K), k.one(Level::K), z.clone()])?;

    let u = &OrePolynomial::tau(&k) + &OrePolynomial::one(&k);
    let f = DrinfeldMorphism::from_ore(&phi, u)?;
    println!("{f}\n");

    let h = DrinfeldMorphism::from_constant(&phi, &z)?;
    println!("hom(z) is an isomorphism: {}", h.is_isomorphism());
    println!("inverse: {}\n", h.inverse()?.ore_polynomial());

    let frob = DrinfeldMorphism::frobenius(&phi);
    let g = DrinfeldMorphism::from_scalar(&phi, &DensePolynomial::x(&k, Level::Fq))?;
    let sum = &frob + &g;
    println!("Frob + g = {}", sum.ore_polynomial());
    println!("(Frob + g)^5 == Frob^5 + g^5: {}", sum.pow(5)? == &frob.pow(5)? + &g.pow(5)?);
    println!("f o g = {}", (&f * &g).ore_polynomial());
    Ok(())
}
