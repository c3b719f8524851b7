use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::rational::Rational64;
use num::traits::{One, Signed, Zero};
use num::BigRational;

use super::Context;
use crate::Result;

/// Exponents are exact rationals so that half-integer power ladders (for
/// example `q^((c-1)/2), …, q^((1-c)/2)`) stay first-class values.
pub type Exp = Rational64;

/// Exponent vector of one term, indexed by the context's variable order.
///
/// Ordered graded-lexicographically: first by total degree, then by the
/// leftmost differing exponent. This is the fixed monomial order used for
/// leading terms, canonical signs, and serialisation throughout the crate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mono {
    exps: Vec<Exp>,
}

impl Mono {
    pub fn unit(nvars: usize) -> Self {
        Mono {
            exps: vec![Exp::zero(); nvars],
        }
    }

    pub fn from_exps(exps: Vec<Exp>) -> Self {
        Mono { exps }
    }

    pub fn exps(&self) -> &[Exp] {
        &self.exps
    }

    pub fn exp(&self, var: usize) -> Exp {
        self.exps[var]
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|e| e.is_zero())
    }

    pub fn total_degree(&self) -> Exp {
        self.exps.iter().fold(Exp::zero(), |acc, e| acc + e)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn div(&self, other: &Mono) -> Mono {
        Mono {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn pow(&self, e: Exp) -> Mono {
        Mono {
            exps: self.exps.iter().map(|x| x * e).collect(),
        }
    }

    /// Componentwise minimum, used to split off monomial content.
    pub fn min_with(&self, other: &Mono) -> Mono {
        Mono {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }

    pub fn has_negative(&self) -> bool {
        self.exps.iter().any(|e| e.is_negative())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => self.exps.cmp(&other.exps),
            ord => ord,
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate Laurent polynomial over ℚ.
///
/// Terms are kept in a map ordered by [`Mono`]'s graded-lex order with no
/// zero coefficients, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    ctx: Context,
    terms: BTreeMap<Mono, BigRational>,
}

impl LaurentPoly {
    pub fn zero(ctx: &Context) -> Self {
        LaurentPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Context) -> Self {
        Self::constant(ctx, BigRational::one())
    }

    pub fn constant(ctx: &Context, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::unit(ctx.len()), c);
        }
        LaurentPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn var(ctx: &Context, name: &str) -> Result<Self> {
        Self::monomial(ctx, BigRational::one(), &[(name, Exp::one())])
    }

    /// A single term `coeff · ∏ name^exp`.
    pub fn monomial(ctx: &Context, coeff: BigRational, powers: &[(&str, Exp)]) -> Result<Self> {
        let mut exps = vec![Exp::zero(); ctx.len()];
        for (name, e) in powers {
            let i = ctx.require(name)?;
            exps[i] += *e;
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(Mono::from_exps(exps), coeff);
        }
        Ok(LaurentPoly {
            ctx: ctx.clone(),
            terms,
        })
    }

    pub fn from_terms(ctx: &Context, terms: Vec<(Mono, BigRational)>) -> Self {
        let mut map: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.exps.len(), ctx.len());
            if c.is_zero() {
                continue;
            }
            match map.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        LaurentPoly { ctx: ctx.clone(), terms: map }
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    /// Terms in descending graded-lex order (leading term first); this is the
    /// canonical presentation order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn coeff_of(&self, m: &Mono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_unit() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn as_monomial(&self) -> Option<(&Mono, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn has_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| !m.exp(var).is_zero())
    }

    /// Indices of variables that actually occur with nonzero exponent.
    pub fn vars_present(&self) -> Vec<usize> {
        (0..self.ctx.len())
            .filter(|&v| self.has_var(v))
            .collect()
    }

    /// Componentwise minimum exponent over all terms (`None` for zero).
    pub fn min_exps(&self) -> Option<Mono> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.min_with(m)))
    }

    /// Multiplies every term by the monomial with exponent vector `delta`.
    pub fn shift(&self, delta: &Mono) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.mul(delta), c.clone()))
            .collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Multiplies the exponent of variable `v` by `factor` in every term.
    /// Such per-variable rescalings are ring isomorphisms of the Laurent
    /// algebra and are used to clear fractional exponents before GCD work.
    pub fn scale_var_exp(&self, v: usize, factor: Exp) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.exps.clone();
                exps[v] *= factor;
                (Mono::from_exps(exps), c.clone())
            })
            .collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Least common multiple of exponent denominators, per variable, merged
    /// into `acc` (which must have one entry per variable).
    pub fn exp_denom_lcm(&self, acc: &mut [i64]) {
        for m in self.terms.keys() {
            for (v, e) in m.exps().iter().enumerate() {
                acc[v] = num::integer::lcm(acc[v], *e.denom());
            }
        }
    }

    /// Largest exponent of `v` (`None` when the polynomial is zero).
    pub fn degree_in(&self, v: usize) -> Option<Exp> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn mul_scalar(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), k * c))
            .collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn mul_term(&self, mono: &Mono, coeff: &BigRational) -> Self {
        if coeff.is_zero() {
            return Self::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.mul(mono), k * coeff))
            .collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(
            self.ctx, other.ctx,
            "polynomial operands use different variable contexts"
        );
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let c = if negate { -c.clone() } else { c.clone() };
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Evaluates with every variable sent to 1 (sum of coefficients); handy
    /// as a quick sanity probe in tests.
    pub fn coeff_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_impl(rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_impl(rhs, true)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(
            self.ctx, rhs.ctx,
            "polynomial operands use different variable contexts"
        );
        let mut terms: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match terms.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get() + &c;
                        if sum.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = sum;
                        }
                    }
                }
            }
        }
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

fn fmt_exp(name: &str, e: Exp, out: &mut String) {
    out.push('*');
    out.push_str(name);
    if e.is_one() {
        return;
    }
    out.push('^');
    if e.is_integer() {
        out.push_str(&e.to_integer().to_string());
    } else {
        out.push('(');
        out.push_str(&e.to_string());
        out.push(')');
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms_desc() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut body = String::new();
            for (v, e) in m.exps().iter().enumerate() {
                if !e.is_zero() {
                    fmt_exp(self.ctx.name(v), *e, &mut body);
                }
            }
            if body.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", &body[1..])?;
            } else {
                write!(f, "{mag}{body}")?;
            }
        }
        Ok(())
    }
}
