//! Discrete logarithms in `K*` and simultaneous power equations.

use std::collections::HashMap;

use num_integer::Integer;

use super::{Coeffs, FieldElement, FieldTower, Level};
use crate::error::{Error, Result};

/// Cached data for the cyclic group `K*`.
pub(crate) struct UnitGroup {
    order: u64,
    factors: Vec<(u64, usize)>,
    generator: FieldElement,
}

impl UnitGroup {
    pub(crate) fn new(tower: &FieldTower) -> Option<Self> {
        let size = tower.order_k()?;
        let order = size - 1;
        let mut factors: Vec<(u64, usize)> =
            num_prime::nt_funcs::factorize64(order).into_iter().collect();
        factors.sort();
        let generator = (1..size)
            .map(|i| tower.element_from_index(Level::K, i))
            .find(|g| {
                factors
                    .iter()
                    .all(|&(l, _)| !g.pow((order / l) as u128).is_one())
            })
            .expect("K* is cyclic");
        Some(UnitGroup { order, factors, generator })
    }

    pub(crate) fn generator(&self) -> &FieldElement {
        &self.generator
    }

    pub(crate) fn order(&self) -> u64 {
        self.order
    }

    /// `log_g(h)` for the cached generator `g`.
    pub(crate) fn log(&self, h: &FieldElement) -> u64 {
        let g = &self.generator;
        let n = self.order;
        let mut residues = Vec::with_capacity(self.factors.len());
        for &(l, e) in &self.factors {
            let gamma = g.pow((n / l) as u128);
            let mut x: u64 = 0;
            let mut lk: u64 = 1;
            let g_inv = g.inv().expect("generator is a unit");
            for k in 0..e {
                // strip the digits found so far, then project to the order-l subgroup
                let stripped = h * &g_inv.pow(x as u128);
                let hk = stripped.pow((n / (lk * l)) as u128);
                let d = bsgs(&gamma, &hk, l);
                x += d * lk;
                if k + 1 < e {
                    lk *= l;
                }
            }
            let modulus = l.pow(e as u32);
            residues.push((x % modulus, modulus));
        }
        let (x, _) = residues
            .into_iter()
            .fold((0u64, 1u64), |(a, m), (b, k)| crt(a, m, b, k).expect("coprime moduli"));
        x
    }
}

/// Baby-step giant-step: the `x ∈ [0, l)` with `gamma^x = h`, where gamma
/// has order `l`.
fn bsgs(gamma: &FieldElement, h: &FieldElement, l: u64) -> u64 {
    let m = (l as f64).sqrt().ceil() as u64 + 1;
    let tower = gamma.tower();
    let mut table: HashMap<Coeffs, u64> = HashMap::with_capacity(m as usize);
    let mut cur = tower.one(Level::K);
    for j in 0..m {
        table.entry(cur.coeffs.clone()).or_insert(j);
        cur = &cur * gamma;
    }
    let giant = gamma.inv().expect("unit").pow(m as u128);
    let mut y = h.clone();
    for i in 0..=m {
        if let Some(&j) = table.get(&y.coeffs) {
            return (i * m + j) % l;
        }
        y = &y * &giant;
    }
    panic!("element outside the subgroup generated by gamma")
}

/// Merge `x ≡ a (mod m)` and `x ≡ b (mod k)`, moduli not necessarily coprime.
fn crt(a: u64, m: u64, b: u64, k: u64) -> Option<(u64, u64)> {
    let (a, m, b, k) = (a as i128, m as i128, b as i128, k as i128);
    let eg = m.extended_gcd(&k);
    let g = eg.gcd;
    if (b - a).rem_euclid(g) != 0 {
        return None;
    }
    let lcm = m / g * k;
    let t = ((b - a) / g).rem_euclid(k / g) * eg.x.rem_euclid(k / g) % (k / g);
    let x = (a + m * t).rem_euclid(lcm);
    Some((x as u64, lcm as u64))
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let eg = (a as i128).extended_gcd(&(m as i128));
    eg.x.rem_euclid(m as i128) as u64
}

pub(super) fn solve_power_system(
    tower: &FieldTower,
    pairs: &[(u64, FieldElement)],
) -> Result<Option<FieldElement>> {
    if pairs.is_empty() {
        return Ok(Some(tower.one(Level::K)));
    }
    for (_, r) in pairs {
        if r.tower() != tower {
            return Err(Error::TowerMismatch);
        }
        if r.is_zero() {
            return Err(Error::InvalidElement("power system right-hand sides must be nonzero".into()));
        }
    }
    let group = tower
        .unit_group()
        .ok_or_else(|| Error::Overflow("|K| exceeds 2^64".into()))?;
    let n = group.order();
    let (mut a, mut m) = (0u64, 1u64);
    for (e, r) in pairs {
        let r = r.embed(Level::K)?;
        let log = group.log(&r);
        let e = e % n;
        let g = e.gcd(&n);
        if log % g != 0 {
            return Ok(None);
        }
        let modulus = n / g;
        let x = ((log / g) as u128 * inverse_mod(e / g % modulus, modulus) as u128 % modulus as u128) as u64;
        match crt(a, m, x, modulus) {
            Some((a2, m2)) => {
                a = a2;
                m = m2;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(group.generator().pow(a as u128)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn logs_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &(p, s, n) in &[(5u64, 1usize, 3usize), (2, 1, 8), (3, 2, 3), (2, 2, 5)] {
            let t = FieldTower::new(p, s, n).unwrap();
            let g = t.unit_group().unwrap();
            for _ in 0..20 {
                let h = t.random_nonzero(Level::K, &mut rng);
                let x = g.log(&h);
                assert_eq!(g.generator().pow(x as u128), h);
            }
        }
    }

    #[test]
    fn small_systems() {
        let t = FieldTower::new(5, 1, 3).unwrap();
        let z = t.gen_k();
        assert_eq!(t.solve_power_system(&[]).unwrap(), Some(t.one(Level::K)));
        let one = t.one(Level::K);
        let c = t.solve_power_system(&[(4, one.clone())]).unwrap().unwrap();
        assert!(c.pow(4).is_one());
        let c = t
            .solve_power_system(&[(4, z.pow(4)), (24, z.pow(24))])
            .unwrap()
            .unwrap();
        assert_eq!(c.pow(4), z.pow(4));
        assert_eq!(c.pow(24), z.pow(24));
    }

    #[test]
    fn agrees_with_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(p, n) in &[(5u64, 2usize), (3, 3), (2, 4), (5, 3)] {
            let t = FieldTower::new(p, 1, n).unwrap();
            let order = t.order_k().unwrap() - 1;
            let units: Vec<FieldElement> = t.elements(Level::K).filter(|x| !x.is_zero()).collect();
            for _ in 0..25 {
                let k = rng.gen_range(1..=2);
                let pairs: Vec<(u64, FieldElement)> = (0..k)
                    .map(|_| {
                        let e = rng.gen_range(0..2 * order);
                        (e, t.random_nonzero(Level::K, &mut rng))
                    })
                    .collect();
                let brute = units
                    .iter()
                    .any(|c| pairs.iter().all(|(e, r)| c.pow(*e as u128) == *r));
                match t.solve_power_system(&pairs).unwrap() {
                    Some(c) => {
                        assert!(pairs.iter().all(|(e, r)| c.pow(*e as u128) == *r));
                    }
                    None => assert!(!brute),
                }
            }
            // systems built from a known solution are always solvable
            for _ in 0..25 {
                let c = t.random_nonzero(Level::K, &mut rng);
                let pairs: Vec<(u64, FieldElement)> = (0..3)
                    .map(|_| {
                        let e = rng.gen_range(0..order);
                        (e, c.pow(e as u128))
                    })
                    .collect();
                let sol = t.solve_power_system(&pairs).unwrap().unwrap();
                assert!(pairs.iter().all(|(e, r)| sol.pow(*e as u128) == *r));
            }
        }
    }
}
