//! Drinfeld modules over `F_q(T)` with `γ(T) = T`, and their exponential
//! and logarithm as lazily computed additive power series.

use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::ff::{FieldTower, Level};
use crate::poly::{DensePolynomial, RationalFunction};

/// `φ_T = T + g_1 τ + … + g_r τ^r` with `g_i ∈ F_q(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticDrinfeldModule {
    tower: FieldTower,
    coeffs: Vec<RationalFunction>,
}

impl AnalyticDrinfeldModule {
    /// `coeffs` are `g_0, …, g_r`, with `g_0 = T`. The tower supplies `F_q`;
    /// its extension degree `n` plays no role here.
    pub fn new(tower: &FieldTower, coeffs: Vec<RationalFunction>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::RankZero);
        }
        if coeffs.iter().any(|c| c.tower() != tower) {
            return Err(Error::TowerMismatch);
        }
        if coeffs[0] != RationalFunction::t(tower) {
            return Err(Error::NotAnalytic);
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::RankZero);
        }
        Ok(AnalyticDrinfeldModule { tower: tower.clone(), coeffs })
    }

    /// From polynomial coefficients given as integer lists over `F_p`
    /// (ascending in `T`).
    pub fn from_int_polys(tower: &FieldTower, coeffs: &[&[i64]]) -> Result<Self> {
        let coeffs = coeffs
            .iter()
            .map(|c| RationalFunction::from_poly(DensePolynomial::from_ints(tower, Level::Fq, c)))
            .collect();
        Self::new(tower, coeffs)
    }

    /// The Carlitz module `T ↦ T + τ`.
    pub fn carlitz(tower: &FieldTower) -> Self {
        Self::new(tower, vec![RationalFunction::t(tower), RationalFunction::one(tower)]).expect("valid")
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    /// The exponential `e_φ`, from `e_φ(Tz) = φ_T(e_φ(z))`.
    pub fn exponential(&self) -> LazyAdditiveSeries {
        LazyAdditiveSeries::with_rule(&self.tower, Rule::Exponential(self.coeffs.clone()))
    }

    /// The logarithm `log_φ`, from `T log_φ(z) = log_φ(φ_T(z))`.
    pub fn logarithm(&self) -> LazyAdditiveSeries {
        LazyAdditiveSeries::with_rule(&self.tower, Rule::Logarithm(self.coeffs.clone()))
    }

    /// `φ_T` itself as a finite additive series.
    pub fn as_series(&self) -> LazyAdditiveSeries {
        LazyAdditiveSeries::from_coefficients(&self.tower, self.coeffs.clone())
    }
}

impl fmt::Display for AnalyticDrinfeldModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let s = c.to_string();
                let s = if crate::display::is_compound(&s) { format!("({s})") } else { s };
                match i {
                    0 => s,
                    1 if c.is_one() => "t".to_string(),
                    1 => format!("{s}*t"),
                    _ if c.is_one() => format!("t^{i}"),
                    _ => format!("{s}*t^{i}"),
                }
            })
            .collect();
        write!(f, "Drinfeld module defined by T |--> {}", terms.join(" + "))
    }
}

#[derive(Clone, Debug)]
enum Rule {
    Exponential(Vec<RationalFunction>),
    Logarithm(Vec<RationalFunction>),
    Finite(Vec<RationalFunction>),
}

/// `Σ_i α_i z^{q^i}` with coefficients in `F_q(T)`, computed on demand.
///
/// Index `i` always refers to the coefficient of `z^{q^i}`; the `*_exponent`
/// accessors take plain exponents instead. Computed coefficients are kept
/// behind a mutex, so a series can be shared across threads.
pub struct LazyAdditiveSeries {
    tower: FieldTower,
    rule: Rule,
    memo: Mutex<Vec<RationalFunction>>,
}

impl LazyAdditiveSeries {
    fn with_rule(tower: &FieldTower, rule: Rule) -> Self {
        LazyAdditiveSeries { tower: tower.clone(), rule, memo: Mutex::new(Vec::new()) }
    }

    /// A series with finitely many nonzero coefficients.
    pub fn from_coefficients(tower: &FieldTower, coeffs: Vec<RationalFunction>) -> Self {
        Self::with_rule(tower, Rule::Finite(coeffs))
    }

    /// The series `z`.
    pub fn identity(tower: &FieldTower) -> Self {
        Self::from_coefficients(tower, vec![RationalFunction::one(tower)])
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    /// Number of memoized coefficients.
    pub fn computed_len(&self) -> usize {
        self.memo.lock().expect("poisoned").len()
    }

    /// The coefficient `α_i` of `z^{q^i}`.
    pub fn coeff(&self, i: usize) -> RationalFunction {
        let mut memo = self.memo.lock().expect("poisoned");
        while memo.len() <= i {
            let k = memo.len();
            let next = self.compute(&memo, k);
            memo.push(next);
        }
        memo[i].clone()
    }

    /// `α_0, …, α_{m−1}`.
    pub fn coeffs(&self, m: usize) -> Vec<RationalFunction> {
        if m == 0 {
            return Vec::new();
        }
        self.coeff(m - 1);
        self.memo.lock().expect("poisoned")[..m].to_vec()
    }

    /// Coefficient of `z^e`: zero unless `e` is a power of `q`.
    pub fn coeff_at_exponent(&self, e: u64) -> RationalFunction {
        match q_log(self.q(), e) {
            Some(i) => self.coeff(i),
            None => RationalFunction::zero(&self.tower),
        }
    }

    /// Coefficients of `z^e` for `lo ≤ e < hi`.
    pub fn slice(&self, lo: u64, hi: u64) -> Vec<RationalFunction> {
        (lo..hi).map(|e| self.coeff_at_exponent(e)).collect()
    }

    /// `(self ∘ other)_k = Σ_{i+j=k} α_i β_j^{q^i}` for `k < m`.
    pub fn compose(&self, other: &LazyAdditiveSeries, m: usize) -> Result<Vec<RationalFunction>> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        let f = self.coeffs(m);
        let g = other.coeffs(m);
        Ok((0..m)
            .map(|k| {
                let mut acc = RationalFunction::zero(&self.tower);
                for i in 0..=k {
                    if f[i].is_zero() || g[k - i].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&f[i] * &g[k - i].frobenius_pow(i as u32));
                }
                acc
            })
            .collect())
    }

    fn compute(&self, memo: &[RationalFunction], i: usize) -> RationalFunction {
        let tower = &self.tower;
        match &self.rule {
            Rule::Finite(c) => c.get(i).cloned().unwrap_or_else(|| RationalFunction::zero(tower)),
            _ if i == 0 => RationalFunction::one(tower),
            Rule::Exponential(g) => {
                let r = g.len() - 1;
                let mut acc = RationalFunction::zero(tower);
                for m in 1..=r.min(i) {
                    if g[m].is_zero() || memo[i - m].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&g[m] * &memo[i - m].frobenius_pow(m as u32));
                }
                acc.checked_div(&RationalFunction::from_poly(bracket(tower, i))).expect("nonzero")
            }
            Rule::Logarithm(g) => {
                let r = g.len() - 1;
                let mut acc = RationalFunction::zero(tower);
                for n in i.saturating_sub(r)..i {
                    if g[i - n].is_zero() || memo[n].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&memo[n] * &g[i - n].frobenius_pow(n as u32));
                }
                let den = -&bracket(tower, i);
                acc.checked_div(&RationalFunction::from_poly(den)).expect("nonzero")
            }
        }
    }

    /// Rendering of the terms of exponent below `prec`.
    pub fn display_to(&self, prec: u64) -> String {
        let mut terms = Vec::new();
        let mut i = 0;
        let mut e = 1u64;
        while e < prec {
            let c = self.coeff(i);
            if !c.is_zero() {
                let z = if e == 1 { "z".to_string() } else { format!("z^{e}") };
                let s = c.to_string();
                terms.push(if c.is_one() {
                    z
                } else if crate::display::is_compound(&s) {
                    format!("({s})*{z}")
                } else {
                    format!("{s}*{z}")
                });
            }
            i += 1;
            e = match e.checked_mul(self.q()) {
                Some(v) => v,
                None => break,
            };
        }
        terms.push(format!("O(z^{prec})"));
        terms.join(" + ")
    }
}

impl fmt::Display for LazyAdditiveSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_to(8))
    }
}

impl fmt::Debug for LazyAdditiveSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LazyAdditiveSeries")
            .field("q", &self.q())
            .field("rule", &self.rule)
            .field("computed", &self.computed_len())
            .finish()
    }
}

fn q_log(q: u64, e: u64) -> Option<usize> {
    if e == 0 {
        return None;
    }
    let (mut e, mut i) = (e, 0);
    while e % q == 0 {
        e /= q;
        i += 1;
    }
    (e == 1).then_some(i)
}

/// `[i] = T^{q^i} − T`.
pub fn bracket(tower: &FieldTower, i: usize) -> DensePolynomial {
    let t = DensePolynomial::x(tower, Level::Fq);
    &t.frobenius_pow(i as u32) - &t
}

/// `([i], D_i, L_i)` for the Carlitz module, with `D_i = [i]·D_{i−1}^q`
/// and `L_i = [i]·L_{i−1}`.
pub fn carlitz_oracles(tower: &FieldTower, i: usize) -> (DensePolynomial, DensePolynomial, DensePolynomial) {
    let mut d = DensePolynomial::one(tower, Level::Fq);
    let mut l = d.clone();
    for k in 1..=i {
        let b = bracket(tower, k);
        d = &b * &d.pow(tower.q());
        l = &b * &l;
    }
    (bracket(tower, i), d, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FieldTower {
        FieldTower::new(2, 2, 1).unwrap()
    }

    fn example(t: &FieldTower) -> AnalyticDrinfeldModule {
        // T^2 − T + 1 = T^2 + T + 1 in characteristic 2
        AnalyticDrinfeldModule::from_int_polys(t, &[&[0, 1], &[1, 1], &[1, -1, 1]]).unwrap()
    }

    fn rf(t: &FieldTower, num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(
            DensePolynomial::from_ints(t, Level::Fq, num),
            DensePolynomial::from_ints(t, Level::Fq, den),
        )
        .unwrap()
    }

    #[test]
    fn construction() {
        let t = f4();
        assert_eq!(AnalyticDrinfeldModule::from_int_polys(&t, &[&[0, 1]]).unwrap_err(), Error::RankZero);
        assert_eq!(AnalyticDrinfeldModule::from_int_polys(&t, &[&[1], &[1]]).unwrap_err(), Error::NotAnalytic);
        assert_eq!(AnalyticDrinfeldModule::from_int_polys(&t, &[&[0, 1], &[]]).unwrap_err(), Error::RankZero);
        let phi = example(&t);
        assert_eq!(phi.rank(), 2);
        assert_eq!(phi.to_string(), "Drinfeld module defined by T |--> (T^2 + T + 1)*t^2 + (T + 1)*t + T");
    }

    #[test]
    fn example_exponential() {
        let t = f4();
        let phi = example(&t);
        let exp = phi.exponential();
        assert_eq!(exp.coeff(1).to_string(), "1/(T^3 + T^2 + T)");
        assert_eq!(exp.to_string(), "z + (1/(T^3 + T^2 + T))*z^4 + O(z^8)");
        let sl = exp.slice(0, 17);
        for (e, c) in sl.iter().enumerate() {
            match e {
                1 => assert!(c.is_one()),
                4 => assert_eq!(*c, rf(&t, &[1], &[0, 1, 1, 1])),
                16 => assert_eq!(
                    c.to_string(),
                    "(T^14 + T^13 + T^12 + T^10 + T^9 + T^8 + T^6 + T^5 + T^4 + T + 1)/(T^28 + T^24 + T^20 + T^13 + T^9 + T^5)"
                ),
                _ => assert!(c.is_zero()),
            }
        }
        let a5 = exp.coeff(5);
        assert_eq!(a5.num().degree(), Some(2045));
        assert_eq!(a5.den().degree(), Some(4827));
        let num = a5.num().coeffs();
        assert!(num[2045].is_one() && num[2044].is_one() && num[2].is_one() && num[0].is_one() && num[1].is_zero());
        let den = a5.den().coeffs();
        assert!(den[4825].is_one() && den[342].is_one() && den[341].is_one());
        assert!(den[..341].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn carlitz_closed_forms() {
        for &(p, s) in &[(2u64, 1usize), (3, 1), (2, 2)] {
            let t = FieldTower::new(p, s, 1).unwrap();
            let rho = AnalyticDrinfeldModule::carlitz(&t);
            let exp = rho.exponential();
            let log = rho.logarithm();
            for i in 0..=4 {
                let (_, d, l) = carlitz_oracles(&t, i);
                assert_eq!(exp.coeff(i), RationalFunction::from_poly(d).inv().unwrap());
                let sign = if i % 2 == 0 { RationalFunction::one(&t) } else { -&RationalFunction::one(&t) };
                assert_eq!(log.coeff(i), sign.checked_div(&RationalFunction::from_poly(l)).unwrap());
            }
        }
        let t = f4();
        let rho = AnalyticDrinfeldModule::carlitz(&t);
        assert_eq!(rho.logarithm().coeff(1).to_string(), "1/(T^4 + T)");
        assert_eq!(rho.exponential().to_string(), "z + (1/(T^4 + T))*z^4 + O(z^8)");
        let (_, d5, _) = carlitz_oracles(&t, 5);
        assert_eq!(rho.exponential().coeff(5), RationalFunction::from_poly(d5).inv().unwrap());
    }

    #[test]
    fn oracle_values() {
        let t = f4();
        let (b, d, l) = carlitz_oracles(&t, 0);
        assert!(b.is_zero() && d.is_one() && l.is_one());
        assert_eq!(carlitz_oracles(&t, 1).0.to_string(), "T^4 + T");
        let t2 = FieldTower::new(2, 1, 1).unwrap();
        let (b2, d2, l2) = carlitz_oracles(&t2, 2);
        let b1 = DensePolynomial::from_ints(&t2, Level::Fq, &[0, 1, 1]);
        assert_eq!(b2, DensePolynomial::from_ints(&t2, Level::Fq, &[0, 1, 0, 0, 1]));
        assert_eq!(d2, &b2 * &b1.pow(2));
        assert_eq!(l2, &b2 * &b1);
    }

    #[test]
    fn compositional_inverse() {
        for t in [f4(), FieldTower::new(3, 1, 1).unwrap(), FieldTower::new(2, 1, 1).unwrap()] {
            let mods = [AnalyticDrinfeldModule::carlitz(&t), example(&t)];
            for phi in &mods {
                let (exp, log) = (phi.exponential(), phi.logarithm());
                for comp in [log.compose(&exp, 5).unwrap(), exp.compose(&log, 5).unwrap()] {
                    assert!(comp[0].is_one());
                    assert!(comp[1..].iter().all(|c| c.is_zero()));
                }
            }
        }
    }

    #[test]
    fn reversion_identity() {
        // α_i = −Σ_{n<i} α_n β_{i−n}^{q^n}
        let t = f4();
        let phi = example(&t);
        let (exp, log) = (phi.exponential(), phi.logarithm());
        for i in 1..5 {
            let mut acc = RationalFunction::zero(&t);
            for n in 0..i {
                acc = &acc + &(&exp.coeff(n) * &log.coeff(i - n).frobenius_pow(n as u32));
            }
            assert_eq!(exp.coeff(i), -&acc);
        }
    }

    #[test]
    fn functional_equation() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        let phi = AnalyticDrinfeldModule::from_int_polys(&t, &[&[0, 1], &[1, 0, 1], &[2], &[0, 1]]).unwrap();
        let exp = phi.exponential();
        let tz = LazyAdditiveSeries::from_coefficients(&t, vec![RationalFunction::t(&t)]);
        let lhs = exp.compose(&tz, 5).unwrap();
        let rhs = phi.as_series().compose(&exp, 5).unwrap();
        assert_eq!(lhs, rhs);
        let log = phi.logarithm();
        let lhs = tz.compose(&log, 5).unwrap();
        let rhs = log.compose(&phi.as_series(), 5).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_composition() {
        let t = f4();
        let exp = example(&t).exponential();
        let id = LazyAdditiveSeries::identity(&t);
        assert_eq!(exp.compose(&id, 4).unwrap(), exp.coeffs(4));
        assert_eq!(id.compose(&exp, 4).unwrap(), exp.coeffs(4));
    }

    #[test]
    fn laziness() {
        let t = f4();
        let exp = example(&t).exponential();
        assert_eq!(exp.computed_len(), 0);
        let a3 = exp.coeff(3);
        assert_eq!(exp.computed_len(), 4);
        assert_eq!(exp.coeff(3), a3);
        assert_eq!(exp.coeff(1).to_string(), "1/(T^3 + T^2 + T)");
        assert_eq!(exp.computed_len(), 4);
        assert!(exp.coeff_at_exponent(0).is_zero());
        assert!(exp.coeff(0).is_one());
        assert!(exp.slice(0, 70).iter().enumerate().all(|(e, c)| c.is_zero() || [1, 4, 16, 64].contains(&e)));
        assert_eq!(exp.computed_len(), 4);
    }

    #[test]
    fn shared_across_threads() {
        let t = f4();
        let exp = example(&t).exponential();
        let vals: Vec<RationalFunction> = std::thread::scope(|s| {
            let hs: Vec<_> = (0..4).map(|i| { let e = &exp; s.spawn(move || e.coeff(i)) }).collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert_eq!(vals, exp.coeffs(4));
    }
}
