//! Dense univariate polynomials over a level of the tower, rational
//! functions over `F_q`, and polynomial matrices with a division-free
//! characteristic polynomial.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::display::{is_compound, render_terms};
use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldTower, Level};

const KARATSUBA_THRESHOLD: usize = 32;

/// A polynomial `Σ c_i T^i` whose coefficients live at one level of a tower.
///
/// Coefficients are stored in ascending order with no trailing zeros, so
/// the zero polynomial has an empty coefficient vector and degree `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DensePolynomial {
    tower: FieldTower,
    level: Level,
    coeffs: Vec<FieldElement>,
}

impl DensePolynomial {
    pub fn new(tower: FieldTower, level: Level, mut coeffs: Vec<FieldElement>) -> Self {
        for c in &coeffs {
            assert!(c.level() == level, "coefficient at the wrong level");
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePolynomial { tower, level, coeffs }
    }

    pub fn zero(tower: &FieldTower, level: Level) -> Self {
        DensePolynomial { tower: tower.clone(), level, coeffs: Vec::new() }
    }

    pub fn one(tower: &FieldTower, level: Level) -> Self {
        Self::constant(tower.one(level))
    }

    /// The variable `T`.
    pub fn x(tower: &FieldTower, level: Level) -> Self {
        Self::monomial(tower.one(level), 1)
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(c.tower().clone(), c.level(), vec![c])
    }

    /// `c·T^k`.
    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let tower = c.tower().clone();
        let level = c.level();
        let mut coeffs = vec![tower.zero(level); k];
        coeffs.push(c);
        Self::new(tower, level, coeffs)
    }

    /// Polynomial with integer coefficients reduced into the prime field.
    pub fn from_ints(tower: &FieldTower, level: Level, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| tower.scalar(level, c)).collect();
        Self::new(tower.clone(), level, coeffs)
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `T^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.tower.zero(self.level))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading_coefficient(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// The monic associate (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Self::new(self.tower.clone(), self.level, coeffs)
    }

    fn same_ring(&self, other: &Self) {
        assert!(self.level == other.level, "polynomials over different levels");
        assert!(self.tower == other.tower, "polynomials over different towers");
    }

    /// Image under the embedding of the coefficient field into `level`.
    pub fn embed(&self, level: Level) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(level).expect("embedding upwards"))
            .collect();
        Self::new(self.tower.clone(), level, coeffs)
    }

    /// The same polynomial with coefficients in a lower level, if they all
    /// lie there.
    pub fn descend(&self, level: Level) -> Option<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.descend(level))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(self.tower.clone(), level, coeffs))
    }

    pub fn divmod(&self, g: &Self) -> Result<(Self, Self)> {
        self.same_ring(g);
        let dg = g.degree().ok_or(Error::DivisionByZeroPoly)?;
        let mut rem = self.coeffs.clone();
        let zero = self.tower.zero(self.level);
        if rem.len() <= dg {
            return Ok((Self::zero(&self.tower, self.level), self.clone()));
        }
        let inv = g.coeffs[dg].inv().expect("nonzero leading coefficient");
        let mut quot = vec![zero.clone(); rem.len() - dg];
        for k in (dg..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = &rem[k] * &inv;
            for (j, gj) in g.coeffs.iter().enumerate() {
                if !gj.is_zero() {
                    rem[k - dg + j] = &rem[k - dg + j] - &(&c * gj);
                }
            }
            quot[k - dg] = c;
        }
        rem.truncate(dg);
        Ok((
            Self::new(self.tower.clone(), self.level, quot),
            Self::new(self.tower.clone(), self.level, rem),
        ))
    }

    pub fn rem(&self, g: &Self) -> Result<Self> {
        Ok(self.divmod(g)?.1)
    }

    /// Monic greatest common divisor (`gcd(0, 0) = 0`).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, u, v)` with `g` the monic gcd and `u·self + v·other = g`.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let zero = Self::zero(&self.tower, self.level);
        let one = Self::one(&self.tower, self.level);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading_coefficient().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero");
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Value at `x`, which may live at a higher level than the coefficients.
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let level = x.level().max(self.level);
        let x = x.embed(level).expect("embedding upwards");
        let mut acc = self.tower.zero(level);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &x) + &c.embed(level).expect("embedding upwards");
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.tower, self.level);
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

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.tower.scalar(self.level, (i as u64 % self.tower.p()) as i64))
            .collect();
        Self::new(self.tower.clone(), self.level, coeffs)
    }

    /// `f(T) ↦ f(T^m)`.
    pub fn inflate(&self, m: usize) -> Self {
        if self.is_zero() || m == 1 {
            return self.clone();
        }
        let zero = self.tower.zero(self.level);
        let mut coeffs = vec![zero; (self.coeffs.len() - 1) * m + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m] = c.clone();
        }
        Self::new(self.tower.clone(), self.level, coeffs)
    }

    /// `f ↦ f^{q^k}` for coefficients in `F_q`: raises the variable only,
    /// since the coefficients are fixed by the q-power map.
    pub fn frobenius_pow(&self, k: u32) -> Self {
        assert!(self.level <= Level::Fq, "exponent spreading needs F_q coefficients");
        let m = (self.tower.q() as usize).pow(k);
        self.inflate(m)
    }

    /// Shift by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.tower.zero(self.level); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(self.tower.clone(), self.level, coeffs)
    }

    /// Rendering in a chosen variable name.
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

fn add_slices(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = &*o + s;
    }
    out
}

fn schoolbook(a: &[FieldElement], b: &[FieldElement], zero: &FieldElement) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![zero.clone(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] = &out[i + j] + &(ai * bj);
            }
        }
    }
    out
}

fn karatsuba(a: &[FieldElement], b: &[FieldElement], zero: &FieldElement) -> Vec<FieldElement> {
    if a.len() < KARATSUBA_THRESHOLD || b.len() < KARATSUBA_THRESHOLD {
        return schoolbook(a, b, zero);
    }
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    let z0 = karatsuba(a0, b0, zero);
    let z2 = karatsuba(a1, b1, zero);
    let mut z1 = karatsuba(&add_slices(a0, a1), &add_slices(b0, b1), zero);
    for (i, c) in z0.iter().enumerate() {
        z1[i] = &z1[i] - c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] = &z1[i] - c;
    }
    let mut out = vec![zero.clone(); a.len() + b.len() - 1];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] = c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if i + h < out.len() {
            out[i + h] = &out[i + h] + &c;
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * h] = &out[i + 2 * h] + &c;
    }
    out
}

impl<'a> Add<&'a DensePolynomial> for &'a DensePolynomial {
    type Output = DensePolynomial;
    fn add(self, rhs: &'a DensePolynomial) -> DensePolynomial {
        self.same_ring(rhs);
        DensePolynomial::new(self.tower.clone(), self.level, add_slices(&self.coeffs, &rhs.coeffs))
    }
}

impl<'a> Sub<&'a DensePolynomial> for &'a DensePolynomial {
    type Output = DensePolynomial;
    fn sub(self, rhs: &'a DensePolynomial) -> DensePolynomial {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a DensePolynomial> for &'a DensePolynomial {
    type Output = DensePolynomial;
    fn mul(self, rhs: &'a DensePolynomial) -> DensePolynomial {
        self.same_ring(rhs);
        let zero = self.tower.zero(self.level);
        DensePolynomial::new(self.tower.clone(), self.level, karatsuba(&self.coeffs, &rhs.coeffs, &zero))
    }
}

impl Neg for &DensePolynomial {
    type Output = DensePolynomial;
    fn neg(self) -> DensePolynomial {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        DensePolynomial::new(self.tower.clone(), self.level, coeffs)
    }
}

macro_rules! forward_owned_poly {
    ($ty:ident, $tr:ident, $m:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned_poly!(DensePolynomial, Add, add);
forward_owned_poly!(DensePolynomial, Sub, sub);
forward_owned_poly!(DensePolynomial, Mul, mul);

impl fmt::Display for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("T"))
    }
}

impl fmt::Debug for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("T"))
    }
}

/// An element `num/den` of `F_q(T)` in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: DensePolynomial,
    den: DensePolynomial,
}

impl RationalFunction {
    pub fn new(num: DensePolynomial, den: DensePolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroRational);
        }
        assert!(num.level() <= Level::Fq && den.level() == num.level(), "F_q(T) only");
        if num.is_zero() {
            let one = DensePolynomial::one(num.tower(), num.level());
            return Ok(RationalFunction { num, den: one });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.divmod(&g)?.0, den.divmod(&g)?.0)
        };
        let lc = den.leading_coefficient().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(num: DensePolynomial) -> Self {
        let den = DensePolynomial::one(num.tower(), num.level());
        RationalFunction { num, den }
    }

    pub fn zero(tower: &FieldTower) -> Self {
        Self::from_poly(DensePolynomial::zero(tower, Level::Fq))
    }

    pub fn one(tower: &FieldTower) -> Self {
        Self::from_poly(DensePolynomial::one(tower, Level::Fq))
    }

    /// The variable `T`.
    pub fn t(tower: &FieldTower) -> Self {
        Self::from_poly(DensePolynomial::x(tower, Level::Fq))
    }

    pub fn num(&self) -> &DensePolynomial {
        &self.num
    }

    pub fn den(&self) -> &DensePolynomial {
        &self.den
    }

    pub fn tower(&self) -> &FieldTower {
        self.num.tower()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroRational);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// `x ↦ x^{q^k}`: numerator and denominator stay coprime, so no gcd is
    /// needed.
    pub fn frobenius_pow(&self, k: u32) -> Self {
        let num = self.num.frobenius_pow(k);
        let den = self.den.frobenius_pow(k);
        RationalFunction { num, den }
    }

    pub fn pow(&self, e: u64) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.tower());
        }
        // cross-cancel first to keep products small
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let div = |a: &DensePolynomial, g: &DensePolynomial| {
            if g.is_one() {
                a.clone()
            } else {
                a.divmod(g).expect("nonzero").0
            }
        };
        let num = &div(&self.num, &g1) * &div(&rhs.num, &g2);
        let den = &div(&self.den, &g2) * &div(&rhs.den, &g1);
        let lc = den.leading_coefficient().expect("nonzero").inv().expect("nonzero");
        RationalFunction { num: num.scale(&lc), den: den.scale(&lc) }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

forward_owned_poly!(RationalFunction, Add, add);
forward_owned_poly!(RationalFunction, Sub, sub);
forward_owned_poly!(RationalFunction, Mul, mul);

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |s: String| if is_compound(&s) { format!("({s})") } else { s };
        write!(f, "{}/{}", wrap(self.num.to_string()), wrap(self.den.to_string()))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A square matrix of polynomials over one level of a tower.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<DensePolynomial>,
}

impl PolyMatrix {
    /// Builds a matrix from its rows.
    pub fn from_rows(rows: Vec<Vec<DensePolynomial>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        PolyMatrix { dim, entries: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(cols: Vec<Vec<DensePolynomial>>) -> Self {
        let dim = cols.len();
        assert!(cols.iter().all(|c| c.len() == dim), "matrix must be square");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for c in &cols {
                entries.push(c[i].clone());
            }
        }
        PolyMatrix { dim, entries }
    }

    pub fn identity(tower: &FieldTower, level: Level, dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            DensePolynomial::one(tower, level)
                        } else {
                            DensePolynomial::zero(tower, level)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &DensePolynomial {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<DensePolynomial>> {
        self.entries.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        let d = self.dim;
        let zero = DensePolynomial::zero(self.entries[0].tower(), self.entries[0].level());
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d).fold(zero.clone(), |acc, k| &acc + &(self.get(i, k) * other.get(k, j)))
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    /// `det(X·I − M)` by the Berkowitz method, as the list of coefficients
    /// in `X` from degree 0 up to the leading 1.
    ///
    /// Only ring operations in the coefficient ring are used.
    pub fn charpoly(&self) -> Vec<DensePolynomial> {
        let d = self.dim;
        if d == 0 {
            panic!("charpoly of an empty matrix");
        }
        let tower = self.entries[0].tower().clone();
        let level = self.entries[0].level();
        let zero = DensePolynomial::zero(&tower, level);
        let one = DensePolynomial::one(&tower, level);
        // p holds the charpoly of the leading k×k block, highest degree first
        let mut p = vec![one.clone()];
        for k in 0..d {
            // block [[A, C], [R, a]] with A the leading k×k
            let a = self.get(k, k);
            let r: Vec<&DensePolynomial> = (0..k).map(|j| self.get(k, j)).collect();
            let mut col: Vec<DensePolynomial> = (0..k).map(|i| self.get(i, k).clone()).collect();
            let mut toeplitz = Vec::with_capacity(k + 2);
            toeplitz.push(one.clone());
            toeplitz.push(-a);
            for _ in 0..k {
                let rc = r.iter().zip(&col).fold(zero.clone(), |acc, (x, y)| &acc + &(*x * y));
                toeplitz.push(-&rc);
                col = (0..k)
                    .map(|i| {
                        (0..k).fold(zero.clone(), |acc, j| &acc + &(self.get(i, j) * &col[j]))
                    })
                    .collect();
            }
            let mut next = Vec::with_capacity(k + 2);
            for i in 0..k + 2 {
                let mut acc = zero.clone();
                for (j, pj) in p.iter().enumerate() {
                    if j <= i && i - j < toeplitz.len() {
                        acc = &acc + &(&toeplitz[i - j] * pj);
                    }
                }
                next.push(acc);
            }
            p = next;
        }
        p.reverse();
        p
    }

    pub fn det(&self) -> DensePolynomial {
        let cp = self.charpoly();
        if self.dim % 2 == 0 {
            cp[0].clone()
        } else {
            -&cp[0]
        }
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Renders `Σ c_i X^i` where the `c_i` are polynomials in `T`.
pub fn display_poly_in(coeffs: &[DensePolynomial], var: &str) -> String {
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.to_string()))
        .collect();
    render_terms(terms, var)
}
