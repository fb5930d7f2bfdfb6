//! The Carlitz module and its closed-form exponential and logarithm.

use drinfeld::analytic::carlitz_oracles;
use drinfeld::{AnalyticDrinfeldModule, FieldTower, RationalFunction};

fn main() -> drinfeld::Result<()> {
    for (p, s) in [(2, 1), (3, 1), (2, 2)] {
        let fq = FieldTower::new(p, s, 1)?;
        let rho = AnalyticDrinfeldModule::carlitz(&fq);
        let (exp, log) = (rho.exponential(), rho.logarithm());
        println!("q = {}: {rho}", fq.q());
        println!("  exp = {exp}");
        for i in 0..=4 {
            let (bracket, d, l) = carlitz_oracles(&fq, i);
            let ok_exp = exp.coeff(i) == RationalFunction::from_poly(d).inv()?;
            let beta = RationalFunction::from_poly(l).inv()?;
            let ok_log = log.coeff(i) == if i % 2 == 0 { beta } else { -&beta };
            println!("  i = {i}: [i] = {bracket}, exp ok: {ok_exp}, log ok: {ok_log}");
        }
    }
    Ok(())
}
