use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::traits::{One, Zero};
use num::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::gcd::{div_exact, poly_gcd};
use super::poly::{Exp, LaurentPoly, Mono};
use super::Context;
use crate::{Error, Result};

/// Rational function in the Laurent algebra, always in canonical form:
///
/// - numerator and denominator share no non-unit factor,
/// - the denominator has minimal exponent 0 in every variable (monomial
///   units live in the numerator),
/// - the denominator is monic under graded-lex,
/// - zero is represented as `0/1`.
///
/// Structural equality therefore decides mathematical equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentRat {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Classification of a rational function after a specialisation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ZeroPole {
    /// The numerator vanishes identically (and the denominator does not).
    Zero,
    /// The denominator vanishes identically.
    Pole,
    /// Neither vanishes; carries the exact specialised value.
    Regular(LaurentRat),
}

fn canonicalize(num: LaurentPoly, den: LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
    let ctx = num.ctx().clone();
    den.ctx().check_same(&ctx)?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok((LaurentPoly::zero(&ctx), LaurentPoly::one(&ctx)));
    }
    if let Some(c) = den.as_constant() {
        let inv = BigRational::one() / c;
        return Ok((num.mul_scalar(&inv), LaurentPoly::one(&ctx)));
    }
    let g = poly_gcd(&num, &den);
    let (num, den) = if g.is_one() {
        (num, den)
    } else {
        (
            div_exact(&num, &g).expect("gcd divides numerator"),
            div_exact(&den, &g).expect("gcd divides denominator"),
        )
    };
    // Push the denominator's monomial unit into the numerator, then scale
    // the denominator monic.
    let min = den.min_exps().expect("nonzero denominator");
    let unshift = Mono::unit(ctx.len()).div(&min);
    let den = den.shift(&unshift);
    let num = num.shift(&unshift);
    if let Some(c) = den.as_constant() {
        let inv = BigRational::one() / c;
        return Ok((num.mul_scalar(&inv), LaurentPoly::one(&ctx)));
    }
    let lc = den.leading().expect("nonzero denominator").1.clone();
    let inv = BigRational::one() / lc;
    Ok((num.mul_scalar(&inv), den.mul_scalar(&inv)))
}

impl LaurentRat {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        let (num, den) = canonicalize(num, den)?;
        Ok(LaurentRat { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let den = LaurentPoly::one(p.ctx());
        LaurentRat { num: p, den }
    }

    pub fn zero(ctx: &Context) -> Self {
        Self::from_poly(LaurentPoly::zero(ctx))
    }

    pub fn one(ctx: &Context) -> Self {
        Self::from_poly(LaurentPoly::one(ctx))
    }

    pub fn constant(ctx: &Context, c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(ctx, c))
    }

    pub fn from_int(ctx: &Context, n: i64) -> Self {
        Self::constant(ctx, BigRational::from_integer(n.into()))
    }

    pub fn var(ctx: &Context, name: &str) -> Result<Self> {
        Ok(Self::from_poly(LaurentPoly::var(ctx, name)?))
    }

    pub fn monomial(ctx: &Context, coeff: BigRational, powers: &[(&str, Exp)]) -> Result<Self> {
        Ok(Self::from_poly(LaurentPoly::monomial(ctx, coeff, powers)?))
    }

    pub fn ctx(&self) -> &Context {
        self.num.ctx()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// For a single-term value, its coefficient and exponent vector.
    pub fn as_monomial(&self) -> Option<(&BigRational, &Mono)> {
        if self.den.is_one() {
            self.num.as_monomial().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = Self::one(self.ctx());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Simultaneous substitution of variables by rational functions over the
    /// same context. Fractional exponents of a substituted variable are only
    /// admissible when the value is a coefficient-1 monomial.
    pub fn substitute(&self, values: &BTreeMap<String, LaurentRat>) -> Result<Self> {
        let num = substitute_poly(&self.num, values)?;
        let den = substitute_poly(&self.den, values)?;
        num.try_div(&den)
    }

    /// Classifies the value after specialisation: the (reduced) denominator
    /// vanishing is a pole, then a vanishing numerator is a zero, otherwise
    /// the exact specialised value is returned. Variables absent from
    /// `values` (typically `q`) stay formal.
    pub fn zero_pole_at(&self, values: &BTreeMap<String, LaurentRat>) -> Result<ZeroPole> {
        let num = substitute_poly(&self.num, values)?;
        let den = substitute_poly(&self.den, values)?;
        if den.is_zero() {
            return Ok(ZeroPole::Pole);
        }
        if num.is_zero() {
            return Ok(ZeroPole::Zero);
        }
        Ok(ZeroPole::Regular(num.try_div(&den)?))
    }

    /// Canonical JSON form with terms in descending graded-lex order.
    pub fn to_value(&self) -> Value {
        json!({
            "vars": self.ctx().names(),
            "numerator": poly_terms_value(&self.num),
            "denominator": poly_terms_value(&self.den),
        })
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Serde("expected object".into()))?;
        let vars = obj
            .get("vars")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Serde("missing 'vars'".into()))?;
        let names: Vec<String> = vars
            .iter()
            .map(|n| {
                n.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Serde("variable names must be strings".into()))
            })
            .collect::<Result<_>>()?;
        let ctx = Context::new(&names)?;
        let num = poly_from_terms_value(&ctx, obj.get("numerator"))?;
        let den = poly_from_terms_value(&ctx, obj.get("denominator"))?;
        Self::new(num, den)
    }
}

fn substitute_poly(p: &LaurentPoly, values: &BTreeMap<String, LaurentRat>) -> Result<LaurentRat> {
    let ctx = p.ctx().clone();
    let mut resolved: Vec<Option<&LaurentRat>> = vec![None; ctx.len()];
    for (name, val) in values {
        let i = ctx.require(name)?;
        val.ctx().check_same(&ctx)?;
        resolved[i] = Some(val);
    }
    let mut acc = LaurentRat::zero(&ctx);
    for (mono, coeff) in p.terms() {
        let mut kept = vec![Exp::zero(); ctx.len()];
        let mut term = LaurentRat::one(&ctx);
        for (v, &e) in mono.exps().iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            match resolved[v] {
                None => kept[v] = e,
                Some(val) => {
                    if e.is_integer() {
                        term = &term * &val.pow(e.to_integer())?;
                    } else if let Some((c, m)) = val.as_monomial() {
                        if !c.is_one() {
                            return Err(Error::NonIntegralSubstitution(ctx.name(v).into()));
                        }
                        let scaled = LaurentPoly::from_terms(
                            &ctx,
                            vec![(m.pow(e), BigRational::one())],
                        );
                        term = &term * &LaurentRat::from_poly(scaled);
                    } else {
                        return Err(Error::NonIntegralSubstitution(ctx.name(v).into()));
                    }
                }
            }
        }
        let base = LaurentPoly::from_terms(&ctx, vec![(Mono::from_exps(kept), coeff.clone())]);
        acc = &acc + &(&term * &LaurentRat::from_poly(base));
    }
    Ok(acc)
}

fn poly_terms_value(p: &LaurentPoly) -> Value {
    let terms: Vec<Value> = p
        .terms_desc()
        .map(|(m, c)| {
            let exps: Vec<Value> = m
                .exps()
                .iter()
                .map(|e| Value::String(e.to_string()))
                .collect();
            json!([c.to_string(), exps])
        })
        .collect();
    Value::Array(terms)
}

fn poly_from_terms_value(ctx: &Context, v: Option<&Value>) -> Result<LaurentPoly> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Serde("missing term list".into()))?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let pair = t
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Serde("term must be [coeff, exps]".into()))?;
        let coeff: BigRational = pair[0]
            .as_str()
            .ok_or_else(|| Error::Serde("coefficient must be a string".into()))?
            .parse()
            .map_err(|e| Error::Serde(format!("bad coefficient: {e}")))?;
        let exps_arr = pair[1]
            .as_array()
            .ok_or_else(|| Error::Serde("exponents must be an array".into()))?;
        if exps_arr.len() != ctx.len() {
            return Err(Error::Serde("exponent vector length mismatch".into()));
        }
        let mut exps = Vec::with_capacity(ctx.len());
        for e in exps_arr {
            let e: Exp = e
                .as_str()
                .ok_or_else(|| Error::Serde("exponent must be a string".into()))?
                .parse()
                .map_err(|e| Error::Serde(format!("bad exponent: {e}")))?;
            exps.push(e);
        }
        terms.push((Mono::from_exps(exps), coeff));
    }
    Ok(LaurentPoly::from_terms(ctx, terms))
}

impl Serialize for LaurentRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_value().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        LaurentRat::from_value(&v).map_err(|e| D::Error::custom(e.to_string()))
    }
}

impl Add for &LaurentRat {
    type Output = LaurentRat;
    fn add(self, rhs: &LaurentRat) -> LaurentRat {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        LaurentRat::new(num, den).expect("denominator product is nonzero")
    }
}

impl Sub for &LaurentRat {
    type Output = LaurentRat;
    fn sub(self, rhs: &LaurentRat) -> LaurentRat {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        LaurentRat::new(num, den).expect("denominator product is nonzero")
    }
}

impl Mul for &LaurentRat {
    type Output = LaurentRat;
    fn mul(self, rhs: &LaurentRat) -> LaurentRat {
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        LaurentRat::new(num, den).expect("denominator product is nonzero")
    }
}

impl Div for &LaurentRat {
    type Output = LaurentRat;
    fn div(self, rhs: &LaurentRat) -> LaurentRat {
        self.try_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &LaurentRat {
    type Output = LaurentRat;
    fn neg(self) -> LaurentRat {
        LaurentRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for LaurentRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
