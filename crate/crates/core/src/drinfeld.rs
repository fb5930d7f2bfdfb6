//! Drinfeld `F_q[T]`-modules over a finite field `K`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldTower, Level};
use crate::ore::OrePolynomial;
use crate::poly::DensePolynomial;

/// A Drinfeld module `φ`, given by `φ_T = g_0 + g_1 τ + ⋯ + g_r τ^r`.
///
/// The base morphism `γ: F_q[T] → K` is `T ↦ g_0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DrinfeldModule {
    tower: FieldTower,
    gen: OrePolynomial,
}

impl DrinfeldModule {
    /// Module with `φ_T = Σ coeffs[i] τ^i`. Needs `r ≥ 1` and `g_r ≠ 0`.
    pub fn new(tower: &FieldTower, coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::RankZero);
        }
        for c in &coeffs {
            if c.tower() != tower {
                return Err(Error::TowerMismatch);
            }
        }
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(DrinfeldModule { tower: tower.clone(), gen: OrePolynomial::new(tower.clone(), coeffs) })
    }

    /// Module whose `φ_T` is the given Ore polynomial.
    pub fn from_ore(gen: OrePolynomial) -> Result<Self> {
        let tower = gen.tower().clone();
        let coeffs = gen.coeffs().to_vec();
        if coeffs.is_empty() {
            return Err(Error::RankZero);
        }
        Self::new(&tower, coeffs)
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// `φ_T` as an Ore polynomial.
    pub fn gen(&self) -> &OrePolynomial {
        &self.gen
    }

    /// `(g_0, …, g_r)`.
    pub fn coefficients(&self) -> &[FieldElement] {
        self.gen.coeffs()
    }

    /// `g_i` (zero outside `0..=r`).
    pub fn coefficient(&self, i: usize) -> FieldElement {
        self.gen.coeff(i)
    }

    /// `γ(T) = g_0`.
    pub fn constant_coefficient(&self) -> &FieldElement {
        &self.gen.coeffs()[0]
    }

    pub fn rank(&self) -> usize {
        self.gen.degree().expect("nonzero generator")
    }

    /// True when both modules live over the same tower with the same `γ`.
    pub fn same_category(&self, other: &DrinfeldModule) -> bool {
        self.tower == other.tower && self.constant_coefficient() == other.constant_coefficient()
    }

    pub(crate) fn check_category(&self, other: &DrinfeldModule) -> Result<()> {
        if self.same_category(other) {
            Ok(())
        } else {
            Err(Error::CategoryMismatch)
        }
    }

    /// `φ_a` for `a ∈ F_q[T]`, by Horner's rule in `K{τ}`.
    pub fn evaluate(&self, a: &DensePolynomial) -> Result<OrePolynomial> {
        if a.tower() != &self.tower {
            return Err(Error::TowerMismatch);
        }
        if a.level() == Level::K {
            return Err(Error::LevelMismatch);
        }
        let mut acc = OrePolynomial::zero(&self.tower);
        for c in a.coeffs().iter().rev() {
            acc = &(&acc * &self.gen) + &OrePolynomial::constant(c.clone());
        }
        Ok(acc)
    }

    /// Monic generator of `ker γ`: the minimal polynomial of `g_0` over `F_q`.
    pub fn characteristic(&self) -> DensePolynomial {
        self.constant_coefficient().minimal_polynomial()
    }

    /// τ-valuation of `φ_𝔭` divided by `deg 𝔭`.
    pub fn height(&self) -> usize {
        let p = self.characteristic();
        let v = self.evaluate(&p).expect("characteristic lives in F_q[T]").valuation().expect("nonzero");
        let d = p.degree().expect("nonzero characteristic");
        assert_eq!(v % d, 0, "valuation of φ_p must be a multiple of deg p");
        v / d
    }

    /// `j(φ) = g_1^{q+1}/g_2` for rank 2.
    pub fn j(&self) -> Result<FieldElement> {
        if self.rank() != 2 {
            return Err(Error::RankNotTwo(self.rank()));
        }
        let q = self.tower.q();
        self.j_invariant(&JInvariantParameter::new(vec![1], vec![q + 1], 1))
    }

    /// `Π g_{k_i}^{d_i} / g_r^d`.
    pub fn j_invariant(&self, param: &JInvariantParameter) -> Result<FieldElement> {
        param.validate(self.rank(), self.tower.q())?;
        let r = self.rank();
        let mut num = self.tower.one(Level::K);
        for (&k, &d) in param.ks.iter().zip(&param.ds) {
            num = &num * &self.coefficient(k).pow(d as u128);
        }
        let den = self.coefficient(r).pow(param.d as u128);
        Ok(&num / &den)
    }

    /// The `j_k`-invariant, whose parameter is
    /// `((k,), ((q^r−1)/(q^g−1), (q^k−1)/(q^g−1)))` with `g = gcd(k, r)`.
    pub fn j_k(&self, k: usize) -> Result<FieldElement> {
        self.j_invariant(&JInvariantParameter::j_k(k, self.rank(), self.tower.q())?)
    }

    /// Slots `1 ≤ i < r` with `g_i ≠ 0`.
    pub fn nonzero_slots(&self) -> Vec<usize> {
        (1..self.rank()).filter(|&i| !self.coefficient(i).is_zero()).collect()
    }

    /// Parameters of the basic j-invariants of this module; with `nonzero`
    /// only the slots where `g_i ≠ 0` are used.
    pub fn basic_j_invariant_parameters(&self, nonzero: bool) -> Result<Vec<JInvariantParameter>> {
        let slots = nonzero.then(|| self.nonzero_slots());
        basic_j_invariant_parameters(self.rank(), self.tower.q(), slots.as_deref())
    }

    pub fn basic_j_invariants(&self, nonzero: bool) -> Result<BTreeMap<JInvariantParameter, FieldElement>> {
        self.basic_j_invariant_parameters(nonzero)?
            .into_iter()
            .map(|p| {
                let j = self.j_invariant(&p)?;
                Ok((p, j))
            })
            .collect()
    }

    /// Isomorphism test, over `K` or over an algebraic closure.
    ///
    /// Over `K`: both `φ_T` coefficients must vanish at the same places and
    /// some `c ∈ K*` must satisfy `g_i/h_i = c^{q^i−1}`. Absolutely: the
    /// supports must agree and so must every j-invariant built on a subset of
    /// the support.
    pub fn is_isomorphic(&self, other: &DrinfeldModule, absolutely: bool) -> Result<bool> {
        self.check_category(other)?;
        let r = self.rank();
        if r != other.rank() {
            return Ok(false);
        }
        let support: Vec<usize> = (1..=r).filter(|&i| !self.coefficient(i).is_zero()).collect();
        let other_support: Vec<usize> = (1..=r).filter(|&i| !other.coefficient(i).is_zero()).collect();
        if support != other_support {
            return Ok(false);
        }
        if absolutely {
            let middle: Vec<usize> = support.iter().copied().filter(|&i| i < r).collect();
            let q = self.tower.q();
            for params in subset_parameters(r, q, &middle) {
                for p in params {
                    if self.j_invariant(&p)? != other.j_invariant(&p)? {
                        return Ok(false);
                    }
                }
            }
            return Ok(true);
        }
        let order = self
            .tower
            .order_k()
            .ok_or_else(|| Error::Overflow("|K| exceeds 2^64".into()))?
            - 1;
        let q = self.tower.q() as u128;
        let pairs: Vec<(u64, FieldElement)> = support
            .iter()
            .map(|&i| {
                let e = (mod_pow(q, i as u32, order as u128) + order as u128 - 1) % order as u128;
                (e as u64, &self.coefficient(i) / &other.coefficient(i))
            })
            .collect();
        Ok(self.tower.solve_power_system(&pairs)?.is_some())
    }
}

fn mod_pow(base: u128, exp: u32, m: u128) -> u128 {
    let mut result = 1 % m;
    let mut b = base % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result
}

impl fmt::Display for DrinfeldModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Drinfeld module defined by T |--> {}", self.gen)
    }
}

impl fmt::Debug for DrinfeldModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exponent data `((k_1, …, k_n), (d_1, …, d_n, d))` of a j-invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JInvariantParameter {
    pub ks: Vec<usize>,
    pub ds: Vec<u64>,
    pub d: u64,
}

impl JInvariantParameter {
    pub fn new(ks: Vec<usize>, ds: Vec<u64>, d: u64) -> Self {
        JInvariantParameter { ks, ds, d }
    }

    /// The parameter of the `j_k`-invariant in rank `r`.
    pub fn j_k(k: usize, r: usize, q: u64) -> Result<Self> {
        if k == 0 || k >= r {
            return Err(Error::InvalidParameter(format!("k = {k} must lie in [1, {}]", r.saturating_sub(1))));
        }
        let g = k.gcd(&r) as u32;
        let q = q as u128;
        let base = q.pow(g) - 1;
        let top = (q.pow(r as u32) - 1) / base;
        let dk = (q.pow(k as u32) - 1) / base;
        let to_u64 = |x: u128| u64::try_from(x).map_err(|_| Error::Overflow("j_k exponent".into()));
        Ok(JInvariantParameter::new(vec![k], vec![to_u64(top)?], to_u64(dk)?))
    }

    /// Weight-0 condition and index range; the bounds on `d_i` are not
    /// enforced here so that non-basic multiples remain valid parameters.
    pub fn validate(&self, r: usize, q: u64) -> Result<()> {
        if self.ks.is_empty() || self.ks.len() != self.ds.len() {
            return Err(Error::InvalidParameter("ks and ds must be nonempty and of equal length".into()));
        }
        if self.ks.windows(2).any(|w| w[0] >= w[1]) || self.ks[0] == 0 || *self.ks.last().unwrap() >= r {
            return Err(Error::InvalidParameter(format!(
                "indices must be strictly increasing in [1, {}]",
                r.saturating_sub(1)
            )));
        }
        if self.ds.iter().any(|&d| d == 0) || self.d == 0 {
            return Err(Error::InvalidParameter("exponents must be positive".into()));
        }
        let q = q as u128;
        let weight = |k: usize| q.checked_pow(k as u32).map(|x| x - 1);
        let mut lhs: u128 = 0;
        for (&k, &d) in self.ks.iter().zip(&self.ds) {
            let w = weight(k).ok_or_else(|| Error::Overflow("weight".into()))?;
            lhs = lhs
                .checked_add(w.checked_mul(d as u128).ok_or_else(|| Error::Overflow("weight".into()))?)
                .ok_or_else(|| Error::Overflow("weight".into()))?;
        }
        let rhs = weight(r)
            .and_then(|w| w.checked_mul(self.d as u128))
            .ok_or_else(|| Error::Overflow("weight".into()))?;
        if lhs != rhs {
            return Err(Error::InvalidParameter(format!("{self} violates the weight-0 condition")));
        }
        Ok(())
    }

    /// `gcd(d_1, …, d_n, d) = 1`.
    pub fn is_basic(&self) -> bool {
        self.ds.iter().fold(self.d, |g, &x| g.gcd(&x)) == 1
    }
}

impl fmt::Display for JInvariantParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = |items: Vec<String>| {
            if items.len() == 1 {
                format!("({},)", items[0])
            } else {
                format!("({})", items.join(", "))
            }
        };
        let ks = tuple(self.ks.iter().map(|k| k.to_string()).collect());
        let mut ds: Vec<String> = self.ds.iter().map(|d| d.to_string()).collect();
        ds.push(self.d.to_string());
        write!(f, "({}, {})", ks, tuple(ds))
    }
}

/// Basic j-invariant parameters for rank `r` over `F_q`.
///
/// The slot set is `{1, …, r−1}`, or `slots` when given; every slot of the
/// set carries an exponent `1 ≤ d_i ≤ (q^r−1)/(q^{gcd(k_i,r)}−1)`. Output is
/// sorted lexicographically. Rank 1 (or an empty slot set) gives the empty
/// list.
pub fn basic_j_invariant_parameters(r: usize, q: u64, slots: Option<&[usize]>) -> Result<Vec<JInvariantParameter>> {
    if r == 0 {
        return Err(Error::RankTooSmall(r));
    }
    let all: Vec<usize> = (1..r).collect();
    let mut ks: Vec<usize> = slots.map(|s| s.to_vec()).unwrap_or(all);
    ks.sort_unstable();
    ks.dedup();
    if ks.iter().any(|&k| k == 0 || k >= r) {
        return Err(Error::InvalidParameter("slots must lie in [1, r-1]".into()));
    }
    full_slot_parameters(r, q, &ks)
}

/// Basic parameters whose index set is exactly `ks`.
fn full_slot_parameters(r: usize, q: u64, ks: &[usize]) -> Result<Vec<JInvariantParameter>> {
    if ks.is_empty() {
        return Ok(Vec::new());
    }
    let q = q as u128;
    let overflow = || Error::Overflow(format!("q^r for q = {q}, r = {r}"));
    let m = q.checked_pow(r as u32).ok_or_else(overflow)? - 1;
    let weights: Vec<u128> = ks.iter().map(|&k| q.pow(k as u32) - 1).collect();
    let bounds: Vec<u128> = ks.iter().map(|&k| m / (q.pow(k.gcd(&r) as u32) - 1)).collect();
    let mut out = Vec::new();
    let mut ds = vec![0u128; ks.len()];
    enumerate(0, 0, &weights, &bounds, m, &mut ds, ks, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    pos: usize,
    partial: u128,
    weights: &[u128],
    bounds: &[u128],
    m: u128,
    ds: &mut [u128],
    ks: &[usize],
    out: &mut Vec<JInvariantParameter>,
) {
    let last = pos + 1 == ks.len();
    if last {
        // d·w ≡ −partial (mod m): solve the congruence instead of scanning
        let w = weights[pos];
        let g = w.gcd(&m);
        let target = (m - partial % m) % m;
        if target % g != 0 {
            return;
        }
        let mg = m / g;
        let inv = inverse_mod((w / g) % mg, mg);
        let d0 = (target / g) % mg * inv % mg;
        let mut d = if d0 == 0 { mg } else { d0 };
        while d <= bounds[pos] {
            ds[pos] = d;
            let total = partial + d * w;
            let dd = total / m;
            let g_all = ds.iter().fold(dd, |acc, &x| acc.gcd(&x));
            if dd >= 1 && g_all == 1 {
                out.push(JInvariantParameter::new(
                    ks.to_vec(),
                    ds.iter().map(|&x| x as u64).collect(),
                    dd as u64,
                ));
            }
            d += mg;
        }
        return;
    }
    for d in 1..=bounds[pos] {
        ds[pos] = d;
        enumerate(pos + 1, partial + d * weights[pos], weights, bounds, m, ds, ks, out);
    }
}

fn inverse_mod(a: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let eg = (a as i128).extended_gcd(&(m as i128));
    eg.x.rem_euclid(m as i128) as u128
}

/// One parameter list per nonempty subset of `slots`.
fn subset_parameters(r: usize, q: u64, slots: &[usize]) -> impl Iterator<Item = Vec<JInvariantParameter>> + '_ {
    (1u64..(1 << slots.len())).map(move |mask| {
        let ks: Vec<usize> = slots
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &k)| k)
            .collect();
        full_slot_parameters(r, q, &ks).expect("small parameters")
    })
}
