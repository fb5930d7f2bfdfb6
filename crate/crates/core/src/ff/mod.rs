//! Finite field towers `F_p ⊂ F_q ⊂ K`.
//!
//! A [`FieldTower`] owns the two moduli (`F_q = F_p[a]/(modulus_q)` and
//! `K = F_q[z]/(modulus_K)`) together with the precomputed matrix of the
//! q-power Frobenius on `K`. Elements of every level are stored as flat
//! coordinate vectors over `F_p`: a `K` element `Σ c_i z^i` with
//! `c_i = Σ c_ij a^j` is stored as `[c_00, …, c_0(s-1), c_10, …]`.

mod conway;
mod dlog;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use rand::Rng;
use smallvec::{smallvec, SmallVec};

use crate::display::render_terms;
use crate::error::{Error, Result};
use crate::linalg::FqMatrix;
use crate::poly::DensePolynomial;

pub(crate) use conway::conway_polynomial;

pub(crate) type Coeffs = SmallVec<[u64; 4]>;

/// Level of the tower an element lives at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    /// The prime field `F_p`.
    Fp,
    /// The constant field `F_q`, of degree `s` over `F_p`.
    Fq,
    /// The field `K`, of degree `n` over `F_q`.
    K,
}

struct TowerData {
    p: u64,
    s: usize,
    n: usize,
    q: u64,
    modulus_q: Vec<u64>,
    modulus_k: Vec<u64>,
    /// `frob[i]` is `(z^i)^q`, flat.
    frob: Vec<Coeffs>,
    q_name: String,
    k_name: String,
    dlog: OnceLock<Option<dlog::UnitGroup>>,
}

/// A two-level finite field tower with fixed moduli.
///
/// Cloning is cheap (shared pointer). Two towers compare equal when their
/// characteristic, degrees and moduli agree.
#[derive(Clone)]
pub struct FieldTower(Arc<TowerData>);

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// Product of two residues of length `d` modulo the monic `m` of degree `d`,
/// everything over `F_p`.
fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Coeffs {
    let d = m.len() - 1;
    if d == 1 {
        return smallvec![a[0] * b[0] % p];
    }
    let mut prod: Coeffs = smallvec![0; 2 * d - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
    }
    for k in (d..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        let neg = p - c;
        for j in 0..d {
            if m[j] != 0 {
                prod[k - d + j] = (prod[k - d + j] + neg * m[j]) % p;
            }
        }
    }
    prod.truncate(d);
    prod
}

impl TowerData {
    #[inline]
    fn degree(&self, level: Level) -> usize {
        match level {
            Level::Fp => 1,
            Level::Fq => self.s,
            Level::K => self.s * self.n,
        }
    }

    fn fq_mul(&self, a: &[u64], b: &[u64]) -> Coeffs {
        if self.s == 1 {
            smallvec![a[0] * b[0] % self.p]
        } else {
            fp_mulmod(a, b, &self.modulus_q, self.p)
        }
    }

    fn k_mul(&self, a: &[u64], b: &[u64]) -> Coeffs {
        let (p, s, n) = (self.p, self.s, self.n);
        if s == 1 {
            return fp_mulmod(a, b, &self.modulus_k, p);
        }
        let zero_chunk = |c: &[u64]| c.iter().all(|&x| x == 0);
        let mut prod: Vec<u64> = vec![0; (2 * n - 1) * s];
        for i in 0..n {
            let ai = &a[i * s..(i + 1) * s];
            if zero_chunk(ai) {
                continue;
            }
            for j in 0..n {
                let bj = &b[j * s..(j + 1) * s];
                if zero_chunk(bj) {
                    continue;
                }
                let c = fp_mulmod(ai, bj, &self.modulus_q, p);
                for t in 0..s {
                    let slot = &mut prod[(i + j) * s + t];
                    *slot = add_mod(*slot, c[t], p);
                }
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c: Coeffs = prod[k * s..(k + 1) * s].iter().copied().collect();
            if zero_chunk(&c) {
                continue;
            }
            for j in 0..n {
                let mj = &self.modulus_k[j * s..(j + 1) * s];
                if zero_chunk(mj) {
                    continue;
                }
                let t = fp_mulmod(&c, mj, &self.modulus_q, p);
                for u in 0..s {
                    let slot = &mut prod[(k - n + j) * s + u];
                    *slot = sub_mod(*slot, t[u], p);
                }
            }
        }
        prod.truncate(n * s);
        prod.into_iter().collect()
    }

    fn mul(&self, level: Level, a: &[u64], b: &[u64]) -> Coeffs {
        match level {
            Level::Fp => smallvec![a[0] * b[0] % self.p],
            Level::Fq => self.fq_mul(a, b),
            Level::K => self.k_mul(a, b),
        }
    }

    fn one(&self, level: Level) -> Coeffs {
        let mut c: Coeffs = smallvec![0; self.degree(level)];
        c[0] = 1;
        c
    }

    fn pow(&self, level: Level, x: &[u64], mut e: u128) -> Coeffs {
        let mut result = self.one(level);
        let mut base: Coeffs = x.iter().copied().collect();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(level, &result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(level, &base, &base);
            }
        }
        result
    }

    fn frobenius(&self, x: &[u64]) -> Coeffs {
        let (p, s, n) = (self.p, self.s, self.n);
        let mut out: Coeffs = smallvec![0; s * n];
        for i in 0..n {
            let xi = &x[i * s..(i + 1) * s];
            if xi.iter().all(|&c| c == 0) {
                continue;
            }
            let img = &self.frob[i];
            if s == 1 {
                let c = xi[0];
                for t in 0..n {
                    if img[t] != 0 {
                        out[t] = (out[t] + c * img[t]) % p;
                    }
                }
            } else {
                for t in 0..n {
                    let chunk = &img[t * s..(t + 1) * s];
                    if chunk.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let prod = fp_mulmod(xi, chunk, &self.modulus_q, p);
                    for u in 0..s {
                        out[t * s + u] = add_mod(out[t * s + u], prod[u], p);
                    }
                }
            }
        }
        out
    }
}

fn small_prime_factors(mut d: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= d {
        if d % f == 0 {
            out.push(f);
            while d % f == 0 {
                d /= f;
            }
        }
        f += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

impl FieldTower {
    /// Tower `F_p ⊂ F_{p^s} ⊂ F_{p^{sn}}` with built-in moduli.
    pub fn new(p: u64, s: usize, n: usize) -> Result<Self> {
        Self::with_moduli(p, s, n, None, None)
    }

    /// Tower with explicit moduli.
    ///
    /// `modulus_q` lists the coefficients of a monic degree-`s` polynomial over
    /// `F_p` (ascending). `modulus_k` lists the coefficients of a monic
    /// degree-`n` polynomial over `F_q`, each coefficient itself a coordinate
    /// vector over `F_p`. Omitted moduli come from the Conway table when
    /// available and otherwise the lexicographically smallest monic
    /// irreducible polynomial (lowest-degree coefficient compared first).
    pub fn with_moduli(
        p: u64,
        s: usize,
        n: usize,
        modulus_q: Option<Vec<u64>>,
        modulus_k: Option<Vec<Vec<u64>>>,
    ) -> Result<Self> {
        if p < 2 || !num_prime::nt_funcs::is_prime64(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(Error::Overflow(format!("characteristic {p} exceeds 2^31")));
        }
        if s == 0 || n == 0 {
            return Err(Error::WrongDegree("extension degrees must be positive".into()));
        }
        p.checked_pow(s as u32)
            .ok_or_else(|| Error::Overflow(format!("q = {p}^{s} does not fit in 64 bits")))?;

        let modulus_q = match modulus_q {
            Some(m) => {
                let m: Vec<u64> = m.iter().map(|c| c % p).collect();
                if m.len() != s + 1 || m[s] != 1 {
                    return Err(Error::WrongDegree(format!(
                        "modulus of F_q must be monic of degree {s}"
                    )));
                }
                let base = Self::unchecked(p, 1, s, vec![0, 1], m.clone());
                if !base.modulus_k_is_irreducible() {
                    return Err(Error::ReducibleModulus);
                }
                m
            }
            None => match conway_polynomial(p, s) {
                Some(c) if s > 1 => c.to_vec(),
                _ if s == 1 => vec![0, 1],
                _ => Self::smallest_irreducible(p, 1, &[0, 1], s),
            },
        };

        let modulus_k = match modulus_k {
            Some(m) => {
                if m.len() != n + 1 {
                    return Err(Error::WrongDegree(format!(
                        "modulus of K must have degree {n} over F_q"
                    )));
                }
                let mut flat = Vec::with_capacity((n + 1) * s);
                for c in &m {
                    if c.len() > s {
                        return Err(Error::InvalidElement(format!(
                            "F_q coefficient {c:?} has more than {s} coordinates"
                        )));
                    }
                    for j in 0..s {
                        flat.push(c.get(j).copied().unwrap_or(0) % p);
                    }
                }
                let lead = &flat[n * s..];
                if lead[0] != 1 || lead[1..].iter().any(|&c| c != 0) {
                    return Err(Error::WrongDegree("modulus of K must be monic".into()));
                }
                let t = Self::unchecked(p, s, n, modulus_q.clone(), flat.clone());
                if !t.modulus_k_is_irreducible() {
                    return Err(Error::ReducibleModulus);
                }
                flat
            }
            None => match conway_polynomial(p, n) {
                Some(c) if s == 1 => c.to_vec(),
                _ if n == 1 && s > 1 => {
                    // z − a, so that the generator of K is the generator of F_q
                    let mut flat = vec![0; 2 * s];
                    flat[1] = p - 1;
                    flat[s] = 1;
                    flat
                }
                _ => Self::smallest_irreducible(p, s, &modulus_q, n),
            },
        };
        Ok(Self::unchecked(p, s, n, modulus_q, modulus_k))
    }

    fn unchecked(p: u64, s: usize, n: usize, modulus_q: Vec<u64>, modulus_k: Vec<u64>) -> Self {
        let q = p.pow(s as u32);
        let mut data = TowerData {
            p,
            s,
            n,
            q,
            modulus_q,
            modulus_k,
            frob: Vec::new(),
            q_name: "a".to_string(),
            k_name: "z".to_string(),
            dlog: OnceLock::new(),
        };
        let one = data.one(Level::K);
        let z = if n == 1 {
            // K = F_q[z]/(z - c): z is the constant c.
            let c = &data.modulus_k[..s];
            let mut out: Coeffs = smallvec![0; s];
            for (o, &ci) in out.iter_mut().zip(c.iter()) {
                *o = (p - ci) % p;
            }
            out
        } else {
            let mut z: Coeffs = smallvec![0; s * n];
            z[s] = 1;
            z
        };
        let zq = data.pow(Level::K, &z, q as u128);
        let mut frob = Vec::with_capacity(n);
        frob.push(one);
        for i in 1..n {
            let next = data.k_mul(&frob[i - 1], &zq);
            frob.push(next);
        }
        data.frob = frob;
        FieldTower(Arc::new(data))
    }

    /// Rabin's irreducibility test for `modulus_K` over `F_q`, valid on an
    /// unchecked tower as long as `F_q` is a field.
    fn modulus_k_is_irreducible(&self) -> bool {
        let n = self.n();
        if n == 1 {
            return true;
        }
        let x = self.gen_k();
        let mut powers = Vec::with_capacity(n);
        let mut h = x.clone();
        for _ in 0..n {
            h = h.frobenius();
            powers.push(h.clone());
        }
        if powers[n - 1] != x {
            return false;
        }
        let modulus = self.modulus_k_poly();
        for l in small_prime_factors(n) {
            let diff = &powers[n / l - 1] - &x;
            let g = DensePolynomial::new(self.clone(), Level::Fq, diff.fq_coords()).gcd(&modulus);
            if g.degree().unwrap_or(0) > 0 {
                return false;
            }
        }
        true
    }

    fn smallest_irreducible(p: u64, s: usize, modulus_q: &[u64], d: usize) -> Vec<u64> {
        // Odometer over (c_0, ..., c_{d-1}) with c_0 most significant; each
        // c_i is an F_q element whose own coordinates also compare
        // low-degree-first.
        let width = d * s;
        let mut digits = vec![0u64; width];
        loop {
            // c_0 = 0 means z divides the candidate; jump to the first c_0 ≠ 0
            if d > 1 && digits[..s].iter().all(|&c| c == 0) {
                digits.iter_mut().for_each(|c| *c = 0);
                digits[s - 1] = 1;
            }
            let mut flat = digits.clone();
            flat.push(1);
            flat.extend(std::iter::repeat(0).take(s - 1));
            let t = Self::unchecked(p, s, d, modulus_q.to_vec(), flat.clone());
            if t.modulus_k_is_irreducible() {
                return flat;
            }
            let mut pos = width;
            loop {
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < p {
                    break;
                }
                digits[pos] = 0;
                assert!(pos > 0, "no irreducible polynomial of degree {d}");
            }
        }
    }

    /// Rename the generators used when printing (`a` for `F_q`, `z` for `K`).
    pub fn with_names(self, q_name: &str, k_name: &str) -> Self {
        let d = &self.0;
        let data = TowerData {
            p: d.p,
            s: d.s,
            n: d.n,
            q: d.q,
            modulus_q: d.modulus_q.clone(),
            modulus_k: d.modulus_k.clone(),
            frob: d.frob.clone(),
            q_name: q_name.to_string(),
            k_name: k_name.to_string(),
            dlog: OnceLock::new(),
        };
        FieldTower(Arc::new(data))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Degree of `F_q` over `F_p`.
    pub fn s(&self) -> usize {
        self.0.s
    }

    /// Degree `[K : F_q]`.
    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// `|K| = q^n` when it fits in 64 bits.
    pub fn order_k(&self) -> Option<u64> {
        self.0.q.checked_pow(self.0.n as u32)
    }

    pub fn degree(&self, level: Level) -> usize {
        self.0.degree(level)
    }

    pub fn modulus_q(&self) -> &[u64] {
        &self.0.modulus_q
    }

    /// Coefficients of `modulus_K` over `F_q`, ascending.
    pub fn modulus_k(&self) -> Vec<Vec<u64>> {
        self.0.modulus_k.chunks(self.0.s).map(|c| c.to_vec()).collect()
    }

    /// `modulus_K` as a polynomial over `F_q`.
    pub fn modulus_k_poly(&self) -> DensePolynomial {
        let coeffs = self
            .0
            .modulus_k
            .chunks(self.0.s)
            .map(|c| self.raw(Level::Fq, c.iter().copied().collect()))
            .collect();
        DensePolynomial::new(self.clone(), Level::Fq, coeffs)
    }

    pub fn q_name(&self) -> &str {
        &self.0.q_name
    }

    pub fn k_name(&self) -> &str {
        &self.0.k_name
    }

    pub fn ptr_eq(&self, other: &FieldTower) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn fq_mul_raw(&self, a: &[u64], b: &[u64]) -> Coeffs {
        self.0.fq_mul(a, b)
    }

    pub(crate) fn raw(&self, level: Level, coeffs: Coeffs) -> FieldElement {
        debug_assert_eq!(coeffs.len(), self.degree(level));
        FieldElement { tower: self.clone(), level, coeffs }
    }

    pub fn zero(&self, level: Level) -> FieldElement {
        self.raw(level, smallvec![0; self.degree(level)])
    }

    pub fn one(&self, level: Level) -> FieldElement {
        self.raw(level, self.0.one(level))
    }

    /// The image of an integer in the prime subfield of `level`.
    pub fn scalar(&self, level: Level, c: i64) -> FieldElement {
        let p = self.0.p as i64;
        let mut coeffs: Coeffs = smallvec![0; self.degree(level)];
        coeffs[0] = c.rem_euclid(p) as u64;
        self.raw(level, coeffs)
    }

    /// Element from flat coordinates over `F_p` (shorter inputs are padded
    /// with zeros, values are reduced mod p).
    pub fn element(&self, level: Level, coords: &[u64]) -> Result<FieldElement> {
        let d = self.degree(level);
        if coords.len() > d {
            return Err(Error::InvalidElement(format!(
                "{} coordinates given for a field of degree {d} over F_p",
                coords.len()
            )));
        }
        let mut coeffs: Coeffs = smallvec![0; d];
        for (c, &x) in coeffs.iter_mut().zip(coords) {
            *c = x % self.0.p;
        }
        Ok(self.raw(level, coeffs))
    }

    /// `K` element `Σ c_i z^i` from coordinates `c_i ∈ F_q`.
    pub fn k_from_fq(&self, coords: &[FieldElement]) -> Result<FieldElement> {
        let (s, n) = (self.0.s, self.0.n);
        if coords.len() > n {
            return Err(Error::InvalidElement(format!(
                "{} coordinates given for an extension of degree {n}",
                coords.len()
            )));
        }
        let mut coeffs: Coeffs = smallvec![0; s * n];
        for (i, c) in coords.iter().enumerate() {
            let c = c.embed(Level::Fq)?;
            coeffs[i * s..(i + 1) * s].copy_from_slice(&c.coeffs);
        }
        Ok(self.raw(Level::K, coeffs))
    }

    /// `K` element `Σ c_i z^i` from integer coordinates (requires `s = 1`
    /// for a faithful reading; with `s > 1` each `c_i` lands in `F_p`).
    pub fn k_from_ints(&self, coords: &[i64]) -> FieldElement {
        let fq: Vec<FieldElement> = coords.iter().map(|&c| self.scalar(Level::Fq, c)).collect();
        self.k_from_fq(&fq).expect("too many coordinates")
    }

    /// The generator `z` of `K` over `F_q` (the class of the variable).
    pub fn gen_k(&self) -> FieldElement {
        let (s, n) = (self.0.s, self.0.n);
        if n == 1 {
            let c = &self.0.modulus_k[..s];
            let coeffs = c.iter().map(|&ci| (self.0.p - ci) % self.0.p).collect();
            return self.raw(Level::K, coeffs);
        }
        let mut coeffs: Coeffs = smallvec![0; s * n];
        coeffs[s] = 1;
        self.raw(Level::K, coeffs)
    }

    /// The generator `a` of `F_q` over `F_p`.
    pub fn gen_q(&self) -> FieldElement {
        let s = self.0.s;
        if s == 1 {
            return self.zero(Level::Fq);
        }
        let mut coeffs: Coeffs = smallvec![0; s];
        coeffs[1] = 1;
        self.raw(Level::Fq, coeffs)
    }

    /// The element whose coordinates are the base-p digits of `index`
    /// (least significant digit first).
    pub fn element_from_index(&self, level: Level, mut index: u64) -> FieldElement {
        let p = self.0.p;
        let coeffs = (0..self.degree(level))
            .map(|_| {
                let c = index % p;
                index /= p;
                c
            })
            .collect();
        self.raw(level, coeffs)
    }

    /// All elements of `level`, in index order. Intended for small fields.
    pub fn elements(&self, level: Level) -> impl Iterator<Item = FieldElement> + '_ {
        let size = self.0.p.pow(self.degree(level) as u32);
        (0..size).map(move |i| self.element_from_index(level, i))
    }

    pub fn random<R: Rng + ?Sized>(&self, level: Level, rng: &mut R) -> FieldElement {
        let p = self.0.p;
        let coeffs = (0..self.degree(level)).map(|_| rng.gen_range(0..p)).collect();
        self.raw(level, coeffs)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, level: Level, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random(level, rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Some `c ∈ K*` with `c^{m_i} = r_i` for every pair, or `None` when the
    /// system has no solution. The empty system returns 1.
    ///
    /// Needs `|K| ≤ 2^64`. Generator, factorization and discrete logarithms
    /// (Pohlig–Hellman with baby-step giant-step) are computed lazily and the
    /// unit-group data are cached on the tower.
    pub fn solve_power_system(&self, pairs: &[(u64, FieldElement)]) -> Result<Option<FieldElement>> {
        dlog::solve_power_system(self, pairs)
    }

    pub(crate) fn unit_group(&self) -> Option<&dlog::UnitGroup> {
        self.0
            .dlog
            .get_or_init(|| dlog::UnitGroup::new(self))
            .as_ref()
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.0.p == other.0.p
                && self.0.s == other.0.s
                && self.0.n == other.0.n
                && self.0.modulus_q == other.0.modulus_q
                && self.0.modulus_k == other.0.modulus_k)
    }
}

impl Eq for FieldTower {}

impl Hash for FieldTower {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus_q.hash(state);
        self.0.modulus_k.hash(state);
    }
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.0.p)
            .field("s", &self.0.s)
            .field("n", &self.0.n)
            .field("modulus_q", &self.0.modulus_q)
            .field("modulus_k", &self.0.modulus_k)
            .finish()
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Finite Field in {} of size {}^{} over F_{}",
            self.0.k_name,
            self.0.p,
            self.0.s * self.0.n,
            self.0.q
        )
    }
}

/// An element of one level of a [`FieldTower`].
///
/// Arithmetic operators panic when operands come from different towers or
/// different levels; use [`FieldElement::embed`] to move an element up.
#[derive(Clone)]
pub struct FieldElement {
    tower: FieldTower,
    level: Level,
    coeffs: Coeffs,
}

impl FieldElement {
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// Flat coordinates over `F_p`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &FieldElement) {
        assert!(self.level == other.level, "level mismatch in field arithmetic");
        assert!(self.tower == other.tower, "tower mismatch in field arithmetic");
    }

    fn with(&self, coeffs: Coeffs) -> FieldElement {
        FieldElement { tower: self.tower.clone(), level: self.level, coeffs }
    }

    /// Coordinates of a `K` element over `F_q` (length `n`). For lower levels
    /// returns the element itself embedded into `F_q`.
    pub fn fq_coords(&self) -> Vec<FieldElement> {
        match self.level {
            Level::K => {
                let s = self.tower.0.s;
                self.coeffs
                    .chunks(s)
                    .map(|c| self.tower.raw(Level::Fq, c.iter().copied().collect()))
                    .collect()
            }
            _ => vec![self.embed(Level::Fq).expect("embedding upwards")],
        }
    }

    /// Image of `self` in a level at or above its own.
    pub fn embed(&self, level: Level) -> Result<FieldElement> {
        if level == self.level {
            return Ok(self.clone());
        }
        if level < self.level {
            return self.descend(level).ok_or(Error::LevelMismatch);
        }
        let mut coeffs: Coeffs = smallvec![0; self.tower.degree(level)];
        coeffs[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        Ok(self.tower.raw(level, coeffs))
    }

    /// The preimage in a lower level, if `self` lies in it.
    pub fn descend(&self, level: Level) -> Option<FieldElement> {
        if level >= self.level {
            return self.embed(level).ok();
        }
        let d = self.tower.degree(level);
        if self.coeffs[d..].iter().any(|&c| c != 0) {
            return None;
        }
        Some(self.tower.raw(level, self.coeffs[..d].iter().copied().collect()))
    }

    pub fn pow(&self, e: u128) -> FieldElement {
        self.with(self.tower.0.pow(self.level, &self.coeffs, e))
    }

    /// `x ↦ x^q`. The identity on `F_q` and `F_p`.
    pub fn frobenius(&self) -> FieldElement {
        match self.level {
            Level::K => self.with(self.tower.0.frobenius(&self.coeffs)),
            _ => self.clone(),
        }
    }

    /// `x ↦ x^{q^k}`, using `σ^n = id`.
    pub fn frobenius_pow(&self, k: usize) -> FieldElement {
        let mut x = self.clone();
        if self.level == Level::K {
            for _ in 0..k % self.tower.0.n {
                x = x.frobenius();
            }
        }
        x
    }

    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        let t = &self.tower.0;
        let out = match self.level {
            Level::Fp => self.pow((t.p - 2) as u128),
            Level::Fq => self.pow((t.q - 2) as u128),
            Level::K => {
                if t.n == 1 {
                    let c = self.descend(Level::Fq)?.inv()?;
                    return c.embed(Level::K).ok();
                }
                // x^{-1} = N(x)^{-1} · x^q x^{q^2} ⋯ x^{q^{n-1}}
                let mut conj = self.frobenius();
                let mut prod = conj.clone();
                for _ in 2..t.n {
                    conj = conj.frobenius();
                    prod = &prod * &conj;
                }
                let norm = (self * &prod).descend(Level::Fq)?;
                let ninv = norm.inv()?.embed(Level::K).ok()?;
                &prod * &ninv
            }
        };
        Some(out)
    }

    /// Monic polynomial of least degree over `F_q` vanishing at `self`.
    ///
    /// Found as the first `F_q`-linear dependency among `1, x, x^2, …`.
    pub fn minimal_polynomial(&self) -> DensePolynomial {
        let tower = &self.tower;
        let x = self.embed(Level::K).expect("embedding upwards");
        let n = tower.n();
        let mut powers = vec![tower.one(Level::K)];
        for k in 1..=n {
            powers.push(&powers[k - 1] * &x);
            let mut m = FqMatrix::zeros(tower, n, k + 1);
            for (j, pw) in powers.iter().enumerate() {
                for (i, c) in pw.fq_coords().into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            let kernel = m.kernel();
            if let Some(v) = kernel.first() {
                let lead = v[k].inv().expect("first dependency involves the top power");
                let coeffs = v.iter().map(|c| c * &lead).collect();
                return DensePolynomial::new(tower.clone(), Level::Fq, coeffs);
            }
        }
        unreachable!("degree of a minimal polynomial is at most n")
    }

    fn render(&self) -> String {
        let t = &self.tower.0;
        match self.level {
            Level::Fp => self.coeffs[0].to_string(),
            Level::Fq => {
                if t.s == 1 {
                    return self.coeffs[0].to_string();
                }
                let terms = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, c)| (i, c.to_string()))
                    .collect();
                render_terms(terms, &t.q_name)
            }
            Level::K => {
                if t.n == 1 {
                    return self.fq_coords()[0].render();
                }
                let terms = self
                    .fq_coords()
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c.render()))
                    .collect();
                render_terms(terms, &t.k_name)
            }
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.coeffs == other.coeffs && self.tower == other.tower
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.level.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.check(rhs);
        let p = self.tower.0.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(rhs.coeffs.iter())
            .map(|(&a, &b)| add_mod(a, b, p))
            .collect();
        self.with(coeffs)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.check(rhs);
        let p = self.tower.0.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(rhs.coeffs.iter())
            .map(|(&a, &b)| sub_mod(a, b, p))
            .collect();
        self.with(coeffs)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.check(rhs);
        self.with(self.tower.0.mul(self.level, &self.coeffs, &rhs.coeffs))
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &'a FieldElement) -> FieldElement {
        let inv = rhs.inv().expect("division by zero in a finite field");
        self * &inv
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.tower.0.p;
        self.with(self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf125() -> FieldTower {
        FieldTower::new(5, 1, 3).unwrap()
    }

    /// Reference multiplication: schoolbook product, then long division by
    /// the modulus, both written without the tower code paths.
    fn reference_mul(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
        let d = modulus.len() - 1;
        let mut prod = vec![0u64; 2 * d];
        for i in 0..d {
            for j in 0..d {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            }
        }
        for k in (d..2 * d).rev() {
            let c = prod[k];
            for j in 0..=d {
                prod[k - d + j] = (prod[k - d + j] + (p - c) * modulus[j] % p) % p;
            }
        }
        prod.truncate(d);
        prod
    }

    #[test]
    fn default_moduli() {
        let t = gf125();
        assert_eq!(t.modulus_k(), vec![vec![3], vec![3], vec![0], vec![1]]);
        let t = FieldTower::new(2, 2, 1).unwrap();
        assert_eq!(t.modulus_q(), &[1, 1, 1]);
        assert_eq!(FieldTower::new(4, 1, 1).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn fallback_modulus_is_smallest_irreducible() {
        // GF(7^2): x^2 + 1 is reducible? -1 is a non-residue mod 7, so
        // x^2 + 1 is the smallest candidate with c_0 = 1, c_1 = 0.
        let t = FieldTower::new(7, 1, 2).unwrap();
        assert_eq!(t.modulus_k(), vec![vec![1], vec![0], vec![1]]);
        // Over F_4 = F_2[a]/(a^2+a+1), degree 2: brute force the first
        // irreducible in the documented order.
        let t = FieldTower::new(2, 2, 2).unwrap();
        let m = t.modulus_k();
        assert_eq!(m[2], vec![1, 0]);
        let fq: Vec<FieldElement> = t.elements(Level::Fq).collect();
        let key = |c: &FieldElement| (c.coeffs()[0], c.coeffs()[1]);
        let mut best: Option<((u64, u64), (u64, u64))> = None;
        for c0 in &fq {
            for c1 in &fq {
                let has_root = fq.iter().any(|x| {
                    let v = &(&(x * x) + &(c1 * x)) + c0;
                    v.is_zero()
                });
                if !has_root {
                    let k = (key(c0), key(c1));
                    if best.map_or(true, |b| k < b) {
                        best = Some(k);
                    }
                }
            }
        }
        let (b0, b1) = best.unwrap();
        assert_eq!(m[0], vec![b0.0, b0.1]);
        assert_eq!(m[1], vec![b1.0, b1.1]);
    }

    #[test]
    fn user_moduli_are_validated() {
        assert_eq!(
            FieldTower::with_moduli(5, 1, 2, None, Some(vec![vec![1], vec![0], vec![1]])).unwrap_err(),
            Error::ReducibleModulus
        );
        assert!(matches!(
            FieldTower::with_moduli(5, 1, 2, None, Some(vec![vec![2], vec![1]])).unwrap_err(),
            Error::WrongDegree(_)
        ));
        assert!(FieldTower::with_moduli(5, 1, 2, None, Some(vec![vec![2], vec![0], vec![1]])).is_ok());
        assert_eq!(
            FieldTower::with_moduli(2, 2, 1, Some(vec![1, 0, 1]), None).unwrap_err(),
            Error::ReducibleModulus
        );
    }

    #[test]
    fn conway_table_entries_are_primitive_and_compatible() {
        for (p, n, coeffs) in conway::table() {
            let t = FieldTower::with_moduli(
                p,
                1,
                n,
                None,
                Some(coeffs.iter().map(|&c| vec![c]).collect()),
            )
            .expect("Conway polynomials are irreducible");
            let order = p.pow(n as u32) - 1;
            let z = t.gen_k();
            for (l, _) in num_prime::nt_funcs::factorize64(order) {
                assert!(!z.pow((order / l) as u128).is_one(), "GF({p}^{n}) not primitive");
            }
            for m in 1..n {
                if n % m != 0 {
                    continue;
                }
                let sub = conway_polynomial(p, m).unwrap();
                let root = z.pow(((p.pow(n as u32) - 1) / (p.pow(m as u32) - 1)) as u128);
                let mut acc = t.zero(Level::K);
                for c in sub.iter().rev() {
                    acc = &(&acc * &root) + &t.scalar(Level::K, *c as i64);
                }
                assert!(acc.is_zero(), "GF({p}^{n}) incompatible with degree {m}");
            }
        }
    }

    #[test]
    fn frobenius_of_generator() {
        let t = gf125();
        let z = t.gen_k();
        let z5 = z.frobenius();
        assert_eq!(z5, t.k_from_ints(&[4, 4, 2]));
        assert_eq!(z5, z.pow(5));
        assert_eq!(t.k_from_ints(&[3]).frobenius(), t.k_from_ints(&[3]));
        assert!(t.zero(Level::K).frobenius().is_zero());
        assert_eq!(z5.to_string(), "2*z^2 + 4*z + 4");
    }

    #[test]
    fn multiplication_matches_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(p, n) in &[(5u64, 3usize), (2, 8), (3, 5), (7, 4)] {
            let t = FieldTower::new(p, 1, n).unwrap();
            let m: Vec<u64> = t.modulus_k().iter().map(|c| c[0]).collect();
            for _ in 0..50 {
                let a = t.random(Level::K, &mut rng);
                let b = t.random(Level::K, &mut rng);
                assert_eq!((&a * &b).coeffs(), reference_mul(a.coeffs(), b.coeffs(), &m, p).as_slice());
            }
        }
    }

    #[test]
    fn field_axioms_all_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(p, s, n) in &[(5u64, 1usize, 3usize), (2, 2, 3), (3, 2, 2), (2, 3, 2)] {
            let t = FieldTower::new(p, s, n).unwrap();
            for level in [Level::Fp, Level::Fq, Level::K] {
                for _ in 0..30 {
                    let a = t.random(level, &mut rng);
                    let b = t.random(level, &mut rng);
                    let c = t.random(level, &mut rng);
                    assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                    assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                    assert_eq!(&a * &b, &b * &a);
                    assert_eq!(&(&a - &b) + &b, a);
                    if !a.is_zero() {
                        assert!((&a * &a.inv().unwrap()).is_one());
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism_of_order_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for &(p, s, n) in &[(5u64, 1usize, 3usize), (2, 2, 3), (3, 1, 6), (2, 1, 1)] {
            let t = FieldTower::new(p, s, n).unwrap();
            for _ in 0..30 {
                let x = t.random(Level::K, &mut rng);
                let y = t.random(Level::K, &mut rng);
                assert_eq!((&x + &y).frobenius(), &x.frobenius() + &y.frobenius());
                assert_eq!((&x * &y).frobenius(), &x.frobenius() * &y.frobenius());
                assert_eq!(x.frobenius(), x.pow(t.q() as u128));
                let mut z = x.clone();
                for _ in 0..n {
                    z = z.frobenius();
                }
                assert_eq!(z, x);
            }
            // fixed field is exactly F_q
            if t.order_k().unwrap() <= 4096 {
                let fixed = t.elements(Level::K).filter(|x| x.frobenius() == *x).count();
                assert_eq!(fixed as u64, t.q());
            }
        }
    }

    #[test]
    fn minimal_polynomials() {
        let t = gf125();
        let mp = t.gen_k().minimal_polynomial();
        assert_eq!(mp.to_string(), "T^3 + 3*T + 3");
        assert_eq!(t.k_from_ints(&[2]).minimal_polynomial().to_string(), "T + 3");
        let f4 = FieldTower::new(2, 1, 2).unwrap();
        let z2 = f4.gen_k().pow(2);
        assert_eq!(z2.minimal_polynomial().to_string(), "T^2 + T + 1");

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(p, s, n) in &[(5u64, 1usize, 3usize), (2, 2, 3), (3, 1, 4), (2, 1, 6)] {
            let t = FieldTower::new(p, s, n).unwrap();
            for _ in 0..20 {
                let x = t.random(Level::K, &mut rng);
                let mp = x.minimal_polynomial();
                assert!(mp.is_monic());
                assert_eq!(n % mp.degree().unwrap(), 0);
                assert!(mp.embed(Level::K).eval(&x).is_zero());
            }
        }
    }

    #[test]
    fn display_over_nontrivial_fq() {
        let t = FieldTower::new(2, 2, 2).unwrap();
        let a = t.gen_q().embed(Level::K).unwrap();
        let z = t.gen_k();
        let x = &(&(&a + &t.one(Level::K)) * &z) + &a;
        assert_eq!(x.to_string(), "(a + 1)*z + a");
    }
}
