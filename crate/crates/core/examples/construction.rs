//! Build a field tower and a Drinfeld module, evaluate it and read off its
//! basic invariants.

use drinfeld::{DensePolynomial, DrinfeldModule, FieldTower, Level};

fn main() -> drinfeld::Result<()> {
    // F_5 ⊂ F_5 ⊂ F_125, with K = F_5[z]/(z^3 + 3z + 3)
    let k = FieldTower::new(5, 1, 3)?;
    let z = k.gen_k();
    if let Some(order) = k.order_k() {
        println!("K has {order} elements");
    }
    println!("modulus of K over F_q: {:?}", k.modulus_k());

    let phi = DrinfeldModule::new(&k, vec![z.clone(), k.zero(Level::K), k.one(Level::K), k.one(Level::K)])?;
    println!("{phi}");

    let a = DensePolynomial::from_ints(&k, Level::Fq, &[1, 0, 1]);
    println!("phi({a}) = {}", phi.evaluate(&a)?);
    println!("rank = {}", phi.rank());
    println!("characteristic = {}", phi.characteristic());
    println!("height = {}", phi.height());

    let psi = DrinfeldModule::new(&k, vec![z, k.zero(Level::K), k.one(Level::K)])?;
    println!("height of {psi} = {}", psi.height());
    Ok(())
}
