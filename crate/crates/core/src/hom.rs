//! Morphisms of Drinfeld modules and Hom spaces over a finite field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::ff::{FieldElement, Level};
use crate::linalg::FqMatrix;
use crate::motive;
use crate::ore::OrePolynomial;
use crate::poly::DensePolynomial;

/// A morphism `u: φ → ψ`, i.e. an Ore polynomial with `u φ_T = ψ_T u`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DrinfeldMorphism {
    domain: DrinfeldModule,
    codomain: DrinfeldModule,
    u: OrePolynomial,
}

impl DrinfeldMorphism {
    /// Checks `u φ_T = ψ_T u` and builds the morphism.
    pub fn new(domain: &DrinfeldModule, codomain: &DrinfeldModule, u: OrePolynomial) -> Result<Self> {
        domain.check_category(codomain)?;
        if u.tower() != domain.tower() {
            return Err(Error::TowerMismatch);
        }
        if &u * domain.gen() != codomain.gen() * &u {
            return Err(Error::NotAMorphism);
        }
        Ok(DrinfeldMorphism { domain: domain.clone(), codomain: codomain.clone(), u })
    }

    /// Morphism out of `φ` defined by `u`, with the codomain read off from
    /// the exact right division `ψ_T = (u φ_T) / u`.
    pub fn from_ore(phi: &DrinfeldModule, u: OrePolynomial) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::ZeroOrePolynomial);
        }
        if u.tower() != phi.tower() {
            return Err(Error::TowerMismatch);
        }
        let (quot, rem) = (&u * phi.gen()).right_divmod(&u)?;
        if !rem.is_zero() {
            return Err(Error::NotAMorphism);
        }
        if quot.coeff(0) != *phi.constant_coefficient() {
            return Err(Error::CategoryMismatch);
        }
        let psi = DrinfeldModule::from_ore(quot)?;
        Ok(DrinfeldMorphism { domain: phi.clone(), codomain: psi, u })
    }

    /// The endomorphism `φ_a` of `φ`.
    pub fn from_scalar(phi: &DrinfeldModule, a: &DensePolynomial) -> Result<Self> {
        let u = phi.evaluate(a)?;
        Ok(DrinfeldMorphism { domain: phi.clone(), codomain: phi.clone(), u })
    }

    /// The morphism defined by the constant `c ∈ K*`.
    pub fn from_constant(phi: &DrinfeldModule, c: &FieldElement) -> Result<Self> {
        Self::from_ore(phi, OrePolynomial::constant(c.embed(Level::K)?))
    }

    pub fn identity(phi: &DrinfeldModule) -> Self {
        DrinfeldMorphism { domain: phi.clone(), codomain: phi.clone(), u: OrePolynomial::one(phi.tower()) }
    }

    /// The Frobenius endomorphism `τ^n`, `n = [K : F_q]`.
    pub fn frobenius(phi: &DrinfeldModule) -> Self {
        let u = OrePolynomial::monomial(phi.tower().one(Level::K), phi.tower().n());
        DrinfeldMorphism { domain: phi.clone(), codomain: phi.clone(), u }
    }

    pub fn domain(&self) -> &DrinfeldModule {
        &self.domain
    }

    pub fn codomain(&self) -> &DrinfeldModule {
        &self.codomain
    }

    /// The defining Ore polynomial.
    pub fn ore_polynomial(&self) -> &OrePolynomial {
        &self.u
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero()
    }

    pub fn is_isogeny(&self) -> bool {
        !self.u.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.u.degree() == Some(0)
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_isomorphism() {
            return Err(Error::NotAnIsomorphism);
        }
        let c = self.u.coeff(0).inv().expect("nonzero constant");
        let u = OrePolynomial::constant(c);
        debug_assert!(&u * self.codomain.gen() == self.domain.gen() * &u);
        Ok(DrinfeldMorphism { domain: self.codomain.clone(), codomain: self.domain.clone(), u })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DrinfeldMorphism) -> Result<Self> {
        if self.domain != other.codomain {
            return Err(Error::ComposabilityMismatch);
        }
        Ok(DrinfeldMorphism {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            u: &self.u * &other.u,
        })
    }

    pub fn checked_add(&self, other: &DrinfeldMorphism) -> Result<Self> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::HomSetMismatch);
        }
        Ok(DrinfeldMorphism { domain: self.domain.clone(), codomain: self.codomain.clone(), u: &self.u + &other.u })
    }

    /// `a · f`, the morphism `ψ_a u`.
    pub fn scalar_action(&self, a: &DensePolynomial) -> Result<Self> {
        let psi_a = self.codomain.evaluate(a)?;
        Ok(DrinfeldMorphism { domain: self.domain.clone(), codomain: self.codomain.clone(), u: &psi_a * &self.u })
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        if !self.is_endomorphism() {
            return Err(Error::NotAnEndomorphism);
        }
        Ok(DrinfeldMorphism { domain: self.domain.clone(), codomain: self.codomain.clone(), u: self.u.pow(e) })
    }

    pub fn norm(&self, as_ideal: bool) -> Result<DensePolynomial> {
        motive::norm(self, as_ideal)
    }

    pub fn charpoly(&self) -> Result<motive::CharPoly> {
        motive::charpoly(self)
    }
}

impl<'a> Mul<&'a DrinfeldMorphism> for &'a DrinfeldMorphism {
    type Output = DrinfeldMorphism;
    fn mul(self, rhs: &'a DrinfeldMorphism) -> DrinfeldMorphism {
        self.compose(rhs).expect("morphisms are not composable")
    }
}

impl<'a> Add<&'a DrinfeldMorphism> for &'a DrinfeldMorphism {
    type Output = DrinfeldMorphism;
    fn add(self, rhs: &'a DrinfeldMorphism) -> DrinfeldMorphism {
        self.checked_add(rhs).expect("morphisms lie in different Hom spaces")
    }
}

impl Neg for &DrinfeldMorphism {
    type Output = DrinfeldMorphism;
    fn neg(self) -> DrinfeldMorphism {
        DrinfeldMorphism { domain: self.domain.clone(), codomain: self.codomain.clone(), u: -&self.u }
    }
}

impl<'a> Sub<&'a DrinfeldMorphism> for &'a DrinfeldMorphism {
    type Output = DrinfeldMorphism;
    fn sub(self, rhs: &'a DrinfeldMorphism) -> DrinfeldMorphism {
        self + &(-rhs)
    }
}

impl fmt::Display for DrinfeldMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.is_endomorphism() { "Endomorphism of" } else { "Drinfeld Module morphism:" };
        if self.is_endomorphism() {
            writeln!(f, "{kind} {}", self.domain)?;
        } else {
            writeln!(f, "{kind}")?;
            writeln!(f, "  From: {}", self.domain)?;
            writeln!(f, "  To:   {}", self.codomain)?;
        }
        write!(f, "  Defn: {}", self.u)
    }
}

impl fmt::Debug for DrinfeldMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {}", self.domain.gen(), self.codomain.gen(), self.u)
    }
}

/// `Hom(φ, ψ)`, an `F_q`-vector space (and `F_q[T]`-module).
#[derive(Clone, Debug)]
pub struct HomSpace {
    domain: DrinfeldModule,
    codomain: DrinfeldModule,
}

impl HomSpace {
    pub fn new(domain: &DrinfeldModule, codomain: &DrinfeldModule) -> Result<Self> {
        domain.check_category(codomain)?;
        Ok(HomSpace { domain: domain.clone(), codomain: codomain.clone() })
    }

    pub fn domain(&self) -> &DrinfeldModule {
        &self.domain
    }

    pub fn codomain(&self) -> &DrinfeldModule {
        &self.codomain
    }

    /// The matrix over `F_q` of `u ↦ u φ_T − ψ_T u` on Ore polynomials of
    /// degree at most `d`; unknown `(i, l)` is the `z^l`-coordinate of `u_i`.
    fn linear_system(&self, d: usize) -> FqMatrix {
        let tower = self.domain.tower();
        let n = tower.n();
        let r = self.domain.rank().max(self.codomain.rank());
        let rows = (d + r + 1) * n;
        let mut m = FqMatrix::zeros(tower, rows, (d + 1) * n);
        let mut basis_k = Vec::with_capacity(n);
        let z = tower.gen_k();
        let mut zl = tower.one(Level::K);
        for _ in 0..n {
            basis_k.push(zl.clone());
            zl = &zl * &z;
        }
        for i in 0..=d {
            for (l, b) in basis_k.iter().enumerate() {
                let x = OrePolynomial::monomial(b.clone(), i);
                let image = &(&x * self.domain.gen()) - &(self.codomain.gen() * &x);
                for (j, c) in image.coeffs().iter().enumerate() {
                    for (t, ct) in c.fq_coords().into_iter().enumerate() {
                        if !ct.is_zero() {
                            m.set(j * n + t, i * n + l, ct);
                        }
                    }
                }
            }
        }
        m
    }

    fn assemble(&self, v: &[FieldElement], d: usize) -> OrePolynomial {
        let tower = self.domain.tower();
        let n = tower.n();
        let coeffs = (0..=d)
            .map(|i| tower.k_from_fq(&v[i * n..(i + 1) * n]).expect("n coordinates"))
            .collect();
        OrePolynomial::new(tower.clone(), coeffs)
    }

    /// `F_q`-basis of the morphisms of degree at most `d`, in reduced
    /// echelon form with respect to the coordinates ordered from the top
    /// τ-degree down.
    pub fn basis(&self, d: usize) -> Vec<DrinfeldMorphism> {
        let tower = self.domain.tower();
        let n = tower.n();
        let kernel = self.linear_system(d).kernel();
        if kernel.is_empty() {
            return Vec::new();
        }
        // reorder coordinates so that higher τ-degrees come first, echelonize
        let width = (d + 1) * n;
        let perm: Vec<usize> = (0..=d).rev().flat_map(|i| (0..n).map(move |l| i * n + l)).collect();
        let mut k = FqMatrix::zeros(tower, kernel.len(), width);
        for (row, v) in kernel.iter().enumerate() {
            for (col, &src) in perm.iter().enumerate() {
                k.set(row, col, v[src].clone());
            }
        }
        let rank = k.rref().len();
        (0..rank)
            .map(|row| {
                let mut v = vec![tower.zero(Level::Fq); width];
                for (col, &dst) in perm.iter().enumerate() {
                    v[dst] = k.get(row, col);
                }
                DrinfeldMorphism {
                    domain: self.domain.clone(),
                    codomain: self.codomain.clone(),
                    u: self.assemble(&v, d),
                }
            })
            .collect()
    }

    /// Dimension over `F_q` of the morphisms of degree at most `d`.
    pub fn dimension(&self, d: usize) -> usize {
        let m = self.linear_system(d);
        m.cols() - m.rank()
    }

    /// True iff `Hom(φ, ψ) = 0`: ranks differ or the Frobenius
    /// characteristic polynomials differ.
    pub fn is_zero(&self) -> Result<bool> {
        Ok(!motive::is_isogenous(&self.domain, &self.codomain)?)
    }

    /// Default search cap `n·r`.
    pub fn default_cap(&self) -> usize {
        self.domain.tower().n() * self.domain.rank()
    }

    /// Some isogeny of least degree, or `None` when the Hom space is zero.
    pub fn an_isogeny(&self) -> Result<Option<DrinfeldMorphism>> {
        self.an_isogeny_with_cap(self.default_cap())
    }

    pub fn an_isogeny_with_cap(&self, cap: usize) -> Result<Option<DrinfeldMorphism>> {
        if self.is_zero()? {
            return Ok(None);
        }
        for d in 0..=cap {
            if let Some(f) = self.basis(d).into_iter().next() {
                return Ok(Some(f));
            }
        }
        Err(Error::SearchCapExceeded(cap))
    }
}
