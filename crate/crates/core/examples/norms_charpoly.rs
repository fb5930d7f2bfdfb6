//! Norms and characteristic polynomials computed through the motive.

use drinfeld::motive::morphism_matrix;
use drinfeld::{DensePolynomial, DrinfeldModule, DrinfeldMorphism, FieldTower, Level, OrePolynomial};

fn main() -> drinfeld::Result<()> {
    let k = FieldTower::new(5, 1, 3)?;
    let z = k.gen_k();
    let phi = DrinfeldModule::new(&k, vec![z.clone(), k.zero(Level::K), k.one(Level::K), z])?;

    let frob = DrinfeldMorphism::frobenius(&phi);
    println!("motive matrix of the Frobenius:\n{:?}", morphism_matrix(&frob)?);
    println!("norm ideal: ({})", frob.norm(true)?);
    println!("norm element: {}", frob.norm(false)?);

    let t = DensePolynomial::x(&k, Level::Fq);
    let g = DrinfeldMorphism::from_scalar(&phi, &t)?;
    println!("norm of hom(T): ({})", g.norm(true)?);
    println!("charpoly of hom(T): {}", g.charpoly()?);
    let g1 = DrinfeldMorphism::from_scalar(&phi, &(&t + &DensePolynomial::one(&k, Level::Fq)))?;
    println!("charpoly of hom(T + 1): {}", g1.charpoly()?.with_var("Y"));

    let f = DrinfeldMorphism::from_ore(&phi, &OrePolynomial::tau(&k) + &OrePolynomial::one(&k))?;
    println!("norm of t + 1: ({})", f.norm(true)?);
    println!("norm of (t + 1) o Frob: ({})", (&f * &frob).norm(true)?);
    Ok(())
}
