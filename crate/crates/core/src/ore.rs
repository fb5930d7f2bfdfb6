//! The skew polynomial ring `K{τ}` with `τ·a = a^q·τ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::display::render_terms;
use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldTower, Level};

/// `Σ a_i τ^i` with `a_i ∈ K`, ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrePolynomial {
    tower: FieldTower,
    coeffs: Vec<FieldElement>,
}

/// `σ^k(x)` for `k = 0..count`, reusing `σ^n = id`.
fn conjugates(x: &FieldElement, count: usize) -> Vec<FieldElement> {
    let n = x.tower().n();
    let mut out: Vec<FieldElement> = Vec::with_capacity(count);
    for k in 0..count {
        let next = if k == 0 {
            x.clone()
        } else if k >= n {
            out[k - n].clone()
        } else {
            out[k - 1].frobenius()
        };
        out.push(next);
    }
    out
}

impl OrePolynomial {
    /// Builds `Σ coeffs[i] τ^i`; coefficients from `F_q` or `F_p` are
    /// embedded into `K`.
    pub fn new(tower: FieldTower, coeffs: Vec<FieldElement>) -> Self {
        let mut coeffs: Vec<FieldElement> = coeffs
            .into_iter()
            .map(|c| {
                assert!(c.tower() == &tower, "coefficient from another tower");
                c.embed(Level::K).expect("embedding upwards")
            })
            .collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OrePolynomial { tower, coeffs }
    }

    pub fn zero(tower: &FieldTower) -> Self {
        OrePolynomial { tower: tower.clone(), coeffs: Vec::new() }
    }

    pub fn one(tower: &FieldTower) -> Self {
        Self::constant(tower.one(Level::K))
    }

    /// The variable `τ`.
    pub fn tau(tower: &FieldTower) -> Self {
        Self::monomial(tower.one(Level::K), 1)
    }

    pub fn constant(c: FieldElement) -> Self {
        let tower = c.tower().clone();
        Self::new(tower, vec![c])
    }

    /// `c·τ^k`.
    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let tower = c.tower().clone();
        let mut coeffs = vec![tower.zero(Level::K); k];
        coeffs.push(c);
        Self::new(tower, coeffs)
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.tower.zero(Level::K))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coefficient(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// Smallest `i` with a nonzero coefficient.
    pub fn valuation(&self) -> Result<usize> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroPolynomial)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.tower));
        }
        let da = self.coeffs.len();
        let db = other.coeffs.len();
        let zero = self.tower.zero(Level::K);
        let mut out = vec![zero; da + db - 1];
        let reach = da.min(self.tower.n());
        for (j, bj) in other.coeffs.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let conj = conjugates(bj, reach);
            for (i, ai) in self.coeffs.iter().enumerate() {
                if !ai.is_zero() {
                    out[i + j] = &out[i + j] + &(ai * &conj[i % reach.max(1)]);
                }
            }
        }
        Ok(Self::new(self.tower.clone(), out))
    }

    /// `(quot, rem)` with `self = quot·g + rem` and `deg rem < deg g`.
    pub fn right_divmod(&self, g: &Self) -> Result<(Self, Self)> {
        self.check(g)?;
        let dg = g.degree().ok_or(Error::DivisionByZeroOre)?;
        let Some(df) = self.degree() else {
            return Ok((Self::zero(&self.tower), Self::zero(&self.tower)));
        };
        if df < dg {
            return Ok((Self::zero(&self.tower), self.clone()));
        }
        let n = self.tower.n();
        let reach = (df - dg + 1).min(n);
        // g_conj[k][j] = σ^k(g_j)
        let per_coeff: Vec<Vec<FieldElement>> = g.coeffs.iter().map(|c| conjugates(c, reach)).collect();
        let lc_inv = g.coeffs[dg].inv().expect("nonzero leading coefficient");
        let lc_inv_conj = conjugates(&lc_inv, reach);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.tower.zero(Level::K); df - dg + 1];
        for e in (0..=df - dg).rev() {
            let top = &rem[e + dg];
            if top.is_zero() {
                continue;
            }
            let c = top * &lc_inv_conj[e % reach];
            for (j, gj) in per_coeff.iter().enumerate() {
                let s = &gj[e % reach];
                if !s.is_zero() {
                    rem[e + j] = &rem[e + j] - &(&c * s);
                }
            }
            quot[e] = c;
        }
        rem.truncate(dg);
        Ok((Self::new(self.tower.clone(), quot), Self::new(self.tower.clone(), rem)))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.tower);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `c·self` for `c ∈ K` acting on the left.
    pub fn scale_left(&self, c: &FieldElement) -> Self {
        let c = c.embed(Level::K).expect("embedding upwards");
        let coeffs = self.coeffs.iter().map(|a| &c * a).collect();
        Self::new(self.tower.clone(), coeffs)
    }

    /// Evaluation as the additive polynomial `Σ a_i x^{q^i}`.
    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        let x = x.embed(Level::K).expect("embedding upwards");
        let mut acc = self.tower.zero(Level::K);
        let mut xi = x;
        for a in &self.coeffs {
            acc = &acc + &(a * &xi);
            xi = xi.frobenius();
        }
        acc
    }

    /// Rendering with a chosen variable name (default `t`).
    pub fn display_with(&self, var: &str) -> String {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.to_string()))
            .collect();
        render_terms(terms, var)
    }
}

impl<'a> Add<&'a OrePolynomial> for &'a OrePolynomial {
    type Output = OrePolynomial;
    fn add(self, rhs: &'a OrePolynomial) -> OrePolynomial {
        self.check(rhs).expect("tower mismatch in Ore addition");
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (&self.coeffs, &rhs.coeffs)
        } else {
            (&rhs.coeffs, &self.coeffs)
        };
        let mut out = long.clone();
        for (o, s) in out.iter_mut().zip(short) {
            *o = &*o + s;
        }
        OrePolynomial::new(self.tower.clone(), out)
    }
}

impl<'a> Sub<&'a OrePolynomial> for &'a OrePolynomial {
    type Output = OrePolynomial;
    fn sub(self, rhs: &'a OrePolynomial) -> OrePolynomial {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a OrePolynomial> for &'a OrePolynomial {
    type Output = OrePolynomial;
    fn mul(self, rhs: &'a OrePolynomial) -> OrePolynomial {
        self.checked_mul(rhs).expect("tower mismatch in Ore multiplication")
    }
}

impl Neg for &OrePolynomial {
    type Output = OrePolynomial;
    fn neg(self) -> OrePolynomial {
        OrePolynomial::new(self.tower.clone(), self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned_ore {
    ($tr:ident, $m:ident) => {
        impl $tr<OrePolynomial> for OrePolynomial {
            type Output = OrePolynomial;
            fn $m(self, rhs: OrePolynomial) -> OrePolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned_ore!(Add, add);
forward_owned_ore!(Sub, sub);
forward_owned_ore!(Mul, mul);

impl fmt::Display for OrePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl fmt::Debug for OrePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k() -> FieldTower {
        FieldTower::new(5, 1, 3).unwrap()
    }

    /// Multiplication straight from the definition, with `a^{q^i}` by
    /// exponentiation rather than the Frobenius table.
    fn naive_mul(f: &OrePolynomial, g: &OrePolynomial) -> OrePolynomial {
        let t = f.tower().clone();
        if f.is_zero() || g.is_zero() {
            return OrePolynomial::zero(&t);
        }
        let mut out = vec![t.zero(Level::K); f.coeffs().len() + g.coeffs().len() - 1];
        for (i, a) in f.coeffs().iter().enumerate() {
            for (j, b) in g.coeffs().iter().enumerate() {
                let e = (t.q() as u128).pow(i as u32);
                out[i + j] = &out[i + j] + &(a * &b.pow(e));
            }
        }
        OrePolynomial::new(t, out)
    }

    fn random_ore(t: &FieldTower, deg: usize, rng: &mut ChaCha8Rng) -> OrePolynomial {
        OrePolynomial::new(t.clone(), (0..=deg).map(|_| t.random(Level::K, rng)).collect())
    }

    #[test]
    fn twist() {
        let t = k();
        let z = t.gen_k();
        let tau = OrePolynomial::tau(&t);
        let lhs = &tau * &OrePolynomial::constant(z.clone());
        assert_eq!(lhs.to_string(), "(2*z^2 + 4*z + 4)*t");
        let f = random_ore(&t, 4, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(&f * &OrePolynomial::one(&t), f);
        let t3 = tau.pow(3);
        let c = OrePolynomial::constant(z);
        assert_eq!(&t3 * &c, &c * &t3);
        assert_ne!(&tau * &c, &c * &tau);
    }

    #[test]
    fn valuations() {
        let t = k();
        let one = t.one(Level::K);
        let f = &OrePolynomial::monomial(one.clone(), 2) + &OrePolynomial::monomial(one.clone(), 3);
        assert_eq!(f.valuation().unwrap(), 2);
        assert_eq!((&OrePolynomial::one(&t) + &OrePolynomial::tau(&t)).valuation().unwrap(), 0);
        assert_eq!(OrePolynomial::zero(&t).valuation().unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn division_examples() {
        let t = k();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_ore(&t, 3, &mut rng);
        let (q, r) = g.right_divmod(&g).unwrap();
        assert!(q == OrePolynomial::one(&t) && r.is_zero());
        let tau = OrePolynomial::tau(&t);
        let (q, r) = tau.pow(2).right_divmod(&tau).unwrap();
        assert!(q == tau && r.is_zero());
        assert_eq!(tau.right_divmod(&OrePolynomial::zero(&t)).unwrap_err(), Error::DivisionByZeroOre);
    }

    #[test]
    fn ring_axioms_and_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut cases = 0;
        for &(p, s, n) in &[(5u64, 1usize, 3usize), (2, 2, 3), (3, 1, 4), (2, 1, 1)] {
            let t = FieldTower::new(p, s, n).unwrap();
            for _ in 0..30 {
                let a = random_ore(&t, rng.gen_range(0..6), &mut rng);
                let b = random_ore(&t, rng.gen_range(0..6), &mut rng);
                let c = random_ore(&t, rng.gen_range(0..6), &mut rng);
                assert_eq!(&a * &b, naive_mul(&a, &b));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
                if !a.is_zero() && !b.is_zero() {
                    assert_eq!((&a * &b).degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
                }
                let x = t.random(Level::K, &mut rng);
                assert_eq!((&a * &b).apply(&x), a.apply(&b.apply(&x)));
                if !b.is_zero() {
                    let f = &(&a * &b) + &c;
                    let (q, r) = f.right_divmod(&b).unwrap();
                    assert_eq!(&(&q * &b) + &r, f);
                    assert!(r.is_zero() || r.degree() < b.degree());
                }
                cases += 1;
            }
        }
        assert!(cases >= 100);
    }
}
