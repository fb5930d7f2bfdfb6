//! Lazy exponential and logarithm of a Drinfeld module over F_4(T).

use drinfeld::{AnalyticDrinfeldModule, FieldTower};

fn main() -> drinfeld::Result<()> {
    let f4 = FieldTower::new(2, 2, 1)?;
    let phi = AnalyticDrinfeldModule::from_int_polys(&f4, &[&[0, 1], &[1, 1], &[1, -1, 1]])?;
    println!("{phi}");

    let exp = phi.exponential();
    let log = phi.logarithm();
    println!("exp = {exp}");
    println!("log = {log}");

    for (e, c) in exp.slice(0, 17).iter().enumerate() {
        if !c.is_zero() {
            println!("  [z^{e}] {c}");
        }
    }
    let a5 = exp.coeff(5);
    println!("coefficient of z^(4^5): degrees {:?}/{:?}", a5.num().degree(), a5.den().degree());
    println!("coefficients computed so far: {}", exp.computed_len());

    let id = log.compose(&exp, 4)?;
    println!("log o exp = {:?}", id);
    Ok(())
}
