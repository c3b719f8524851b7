//! Rank-one Gindikin–Karpelevich factors and the unramified constant of the
//! standard intertwining operator attached to the interleaving permutation
//! κ_{l,c−l}.
//!
//! The torus character of the ambient principal series has kc slots
//! χ_{(i−1)c+j} = α_i·Z_i·q^{(c+1−2j)/2}: α_i is the Satake symbol of τ_i,
//! Z_i carries the complex twist q^{ζ_i} symbolically, and the q-ladder is
//! the δ^{-1/2} shift inside each GL_c block. The operator's constant on the
//! normalized unramified vector is the product of the classical rank-one
//! factors (1 − q^{-1}χ_a/χ_b)/(1 − χ_a/χ_b) over the inversion pairs of
//! the slot permutation induced by κ. Products are kept in factored form;
//! expanding them is the caller's (size-aware) decision.

use num::{BigRational, One, Rational64, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Context, Exp, LaurentRat, ZeroPole};
use crate::kappa::kappa_matrix;
use crate::{Error, Result};

/// Unramified data of a tempered-or-twisted tuple τ_1, …, τ_k: a distinct
/// Satake symbol per entry plus the modulus exponent m_i with
/// |τ_i(ϖ)| = q^{m_i} (all zero in the tempered case).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "SatakeRepr", into = "SatakeRepr")]
pub struct SatakeData {
    alphas: Vec<String>,
    moduli: Vec<Rational64>,
}

#[derive(Serialize, Deserialize)]
struct SatakeRepr {
    alphas: Vec<String>,
    moduli: Vec<String>,
}

impl SatakeData {
    pub fn new(alphas: Vec<String>, moduli: Vec<Rational64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidInput("at least one Satake entry".into()));
        }
        if alphas.len() != moduli.len() {
            return Err(Error::InvalidInput(format!(
                "{} symbols vs {} moduli",
                alphas.len(),
                moduli.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for a in &alphas {
            if a.is_empty() || a == "q" || a.starts_with("Z_") {
                return Err(Error::InvalidInput(format!(
                    "symbol '{a}' collides with reserved names"
                )));
            }
            if !seen.insert(a.clone()) {
                return Err(Error::InvalidInput(format!("duplicate symbol '{a}'")));
            }
        }
        Ok(SatakeData { alphas, moduli })
    }

    /// Tempered data with default symbols alpha_1, …, alpha_k.
    pub fn tempered(k: usize) -> Result<Self> {
        SatakeData::new(
            (1..=k).map(|i| format!("alpha_{i}")).collect(),
            vec![Rational64::zero(); k],
        )
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[String] {
        &self.alphas
    }

    pub fn moduli(&self) -> &[Rational64] {
        &self.moduli
    }

    pub fn is_tempered(&self) -> bool {
        self.moduli.iter().all(Rational64::is_zero)
    }
}

impl TryFrom<SatakeRepr> for SatakeData {
    type Error = Error;

    fn try_from(repr: SatakeRepr) -> Result<Self> {
        let mut moduli = Vec::with_capacity(repr.moduli.len());
        for s in &repr.moduli {
            moduli.push(
                s.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad rational '{s}'")))?,
            );
        }
        SatakeData::new(repr.alphas, moduli)
    }
}

impl From<SatakeData> for SatakeRepr {
    fn from(d: SatakeData) -> Self {
        SatakeRepr {
            alphas: d.alphas,
            moduli: d.moduli.iter().map(Rational64::to_string).collect(),
        }
    }
}

/// The kc torus character slots of the twisted representation
/// ⊗_i |·|^{ζ_i} τ_i inflated to GL_c blocks: slot (i,j) carries
/// α_i·Z_i·q^{(c+1−2j)/2}.
#[derive(Clone, Debug)]
pub struct PrincipalSeriesCharacter {
    k: usize,
    c: usize,
    ctx: Context,
    slots: Vec<LaurentRat>,
}

impl PrincipalSeriesCharacter {
    pub fn new(satake: &SatakeData, c: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidInput("c must be positive".into()));
        }
        let k = satake.k();
        let mut names: Vec<String> = vec!["q".into()];
        names.extend((1..=k).map(|i| format!("Z_{i}")));
        names.extend(satake.alphas().iter().cloned());
        let ctx = Context::new(&names)?;
        let mut slots = Vec::with_capacity(k * c);
        for i in 1..=k {
            let alpha = &satake.alphas()[i - 1];
            let z = format!("Z_{i}");
            for j in 1..=c {
                let e = Exp::new(c as i64 + 1 - 2 * j as i64, 2);
                slots.push(LaurentRat::monomial(
                    &ctx,
                    BigRational::one(),
                    &[(alpha.as_str(), Exp::from(1)), (z.as_str(), Exp::from(1)), ("q", e)],
                )?);
            }
        }
        Ok(PrincipalSeriesCharacter { k, c, ctx, slots })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    /// All kc slots, i-major then j within the block.
    pub fn slots(&self) -> &[LaurentRat] {
        &self.slots
    }
}

/// The rank-one unramified factor (1 − q^{-1}·chi)/(1 − chi) for a monomial
/// character quotient `chi`.
pub fn gk_factor(chi: &LaurentRat) -> Result<LaurentRat> {
    let ctx = chi.ctx();
    if chi.as_monomial().is_none() {
        return Err(Error::InvalidInput(
            "rank-one character quotient must be a monomial".into(),
        ));
    }
    if chi.is_one() {
        return Err(Error::InvalidInput(
            "rank-one factor degenerates: chi = 1".into(),
        ));
    }
    ctx.require("q")?;
    let one = LaurentRat::one(ctx);
    let q_inv = LaurentRat::monomial(ctx, BigRational::one(), &[("q", Exp::from(-1))])?;
    let num = &one - &(&q_inv * chi);
    let den = &one - chi;
    num.try_div(&den)
}

/// One rank-one factor of the κ intertwining constant, bookkept with both
/// its flat slot positions and its (i,j) block decomposition (1-based).
#[derive(Clone, Debug, Serialize)]
pub struct GkFactor {
    /// Flat slot positions (a, b), 1-based, a < b in the original order.
    pub slot_pair: (usize, usize),
    /// Block indices: slot a is the j-th exponent of τ_i …
    pub i: usize,
    pub j: usize,
    /// … and slot b the j′-th of τ_i′.
    pub i_prime: usize,
    pub j_prime: usize,
    /// Aggregate q-shift j′ − j of chi relative to α_i α_i′^{-1} Z_i Z_i′^{-1}.
    pub shift: i64,
    pub chi: LaurentRat,
    pub factor: LaurentRat,
}

/// The unramified constant in factored form: the factors over the inversion
/// pairs of the slot permutation, multiplied only on demand.
#[derive(Clone, Debug, Serialize)]
pub struct GkProduct {
    factors: Vec<GkFactor>,
}

impl GkProduct {
    pub fn factors(&self) -> &[GkFactor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Expands the product. Beware: the expanded numerator/denominator have
    /// up to 2^len terms, so callers cap the grid size.
    pub fn product(&self, ctx: &Context) -> LaurentRat {
        let mut acc = LaurentRat::one(ctx);
        for f in &self.factors {
            acc = &acc * &f.factor;
        }
        acc
    }
}

/// The unramified constant of the intertwining operator attached to
/// κ_{l,c−l} on the kc-slot principal series: one rank-one factor per
/// inversion of the slot permutation.
pub fn intertwining_constant(
    k: usize,
    c: usize,
    l: usize,
    satake: &SatakeData,
) -> Result<(PrincipalSeriesCharacter, GkProduct)> {
    if satake.k() != k {
        return Err(Error::InvalidInput(format!(
            "Satake data has {} entries, expected k={k}",
            satake.k()
        )));
    }
    let character = PrincipalSeriesCharacter::new(satake, c)?;
    if k == 1 {
        // κ fixes a single block pointwise: empty product.
        return Ok((character, GkProduct { factors: Vec::new() }));
    }
    let kappa = kappa_matrix(k, c, l)?;
    // Slot s of the conjugated torus ends up at position κ^{-1}(s).
    let new_positions: Vec<usize> = kappa.inverse().images().to_vec();
    let product = product_over_inversions(character.slots(), &new_positions, c)?;
    Ok((character, product))
}

/// Builds the factored product over all inversions of the slot permutation:
/// pairs a < b whose images come in reversed order.
fn product_over_inversions(
    slots: &[LaurentRat],
    new_positions: &[usize],
    c: usize,
) -> Result<GkProduct> {
    let n = slots.len();
    let mut factors = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if new_positions[a] <= new_positions[b] {
                continue;
            }
            let chi = slots[a].try_div(&slots[b])?;
            if chi.is_one() {
                return Err(Error::DegenerateFactor(a + 1, b + 1));
            }
            let factor = gk_factor(&chi)?;
            let (i, j) = (a / c + 1, a % c + 1);
            let (i_prime, j_prime) = (b / c + 1, b % c + 1);
            factors.push(GkFactor {
                slot_pair: (a + 1, b + 1),
                i,
                j,
                i_prime,
                j_prime,
                shift: j_prime as i64 - j as i64,
                chi,
                factor,
            });
        }
    }
    Ok(GkProduct { factors })
}

/// Checks every factor of the constant against the displayed rank-one
/// template: chi = q^m·α_i α_{i′}^{-1} Z_i Z_{i′}^{-1} with i < i′ and an
/// integer shift m ≤ −1, coefficient 1, and no other variables involved.
pub fn factor_template_check(k: usize, c: usize, l: usize) -> Result<bool> {
    let satake = SatakeData::tempered(k)?;
    let (character, product) = intertwining_constant(k, c, l, &satake)?;
    let ctx = character.ctx();
    let q_ix = ctx.require("q")?;
    for f in product.factors() {
        let Some((coeff, mono)) = f.chi.as_monomial() else {
            return Ok(false);
        };
        if !coeff.is_one() {
            return Ok(false);
        }
        let q_exp = mono.exp(q_ix);
        if !q_exp.is_integer() || q_exp.to_integer() > -1 {
            return Ok(false);
        }
        // Exactly one +1/−1 pair among the Z's and the same among the α's,
        // at matching, increasing τ indices.
        let mut plus: Vec<usize> = Vec::new();
        let mut minus: Vec<usize> = Vec::new();
        for i in 1..=k {
            let z = mono.exp(ctx.require(&format!("Z_{i}"))?);
            let a = mono.exp(ctx.require(&satake.alphas()[i - 1])?);
            if z != a {
                return Ok(false);
            }
            if z == Exp::from(1) {
                plus.push(i);
            } else if z == Exp::from(-1) {
                minus.push(i);
            } else if !z.is_zero() {
                return Ok(false);
            }
        }
        if plus.len() != 1 || minus.len() != 1 || plus[0] >= minus[0] {
            return Ok(false);
        }
        if (f.i, f.i_prime) != (plus[0], minus[0]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The regularity condition on the moduli: no pair i < j may satisfy
/// m_i − m_j ≥ 1, since 1 − q^{-s}·q^{m_i−m_j} has a root with
/// Re(s) = m_i − m_j, and roots with Re(s) ≥ 1 are forbidden.
pub fn regularity_check(satake: &SatakeData) -> bool {
    let m = satake.moduli();
    for i in 0..m.len() {
        for j in (i + 1)..m.len() {
            if m[i] - m[j] >= Rational64::one() {
                return false;
            }
        }
    }
    true
}

/// Classifies every factor of the constant after pinning the twists to a
/// weakly decreasing rational ladder Z_i ↦ q^{z_i}; with symbolic Satake
/// parameters each factor must come out [`ZeroPole::Regular`].
pub fn factors_regular_on_ladder(k: usize, c: usize, l: usize) -> Result<bool> {
    let satake = SatakeData::tempered(k)?;
    let (character, product) = intertwining_constant(k, c, l, &satake)?;
    let ctx = character.ctx();
    let mut assignment = std::collections::BTreeMap::new();
    for i in 1..=k {
        let z = LaurentRat::monomial(
            ctx,
            BigRational::one(),
            &[("q", Exp::from((k - i) as i64))],
        )?;
        assignment.insert(format!("Z_{i}"), z);
    }
    for f in product.factors() {
        match f.factor.zero_pole_at(&assignment)? {
            ZeroPole::Regular(_) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// The Satake slots of the unramified Speh quotient at ζ = 0:
/// {α_i·q^{(c+1−2j)/2}} over 1 ≤ i ≤ k, 1 ≤ j ≤ c.
pub fn satake_of_speh(satake: &SatakeData, c: usize) -> Result<Vec<LaurentRat>> {
    if c == 0 {
        return Err(Error::InvalidInput("c must be positive".into()));
    }
    let mut names: Vec<&str> = vec!["q"];
    names.extend(satake.alphas().iter().map(String::as_str));
    let ctx = Context::new(&names)?;
    let mut out = Vec::with_capacity(satake.k() * c);
    for alpha in satake.alphas() {
        for j in 1..=c {
            let e = Exp::new(c as i64 + 1 - 2 * j as i64, 2);
            out.push(LaurentRat::monomial(
                &ctx,
                BigRational::one(),
                &[(alpha.as_str(), Exp::from(1)), ("q", e)],
            )?);
        }
    }
    Ok(out)
}

/// Structural reciprocity: the factors of the operator attached to the
/// inverse slot permutation are exactly the inverses of the forward chis,
/// so each inversion contributes the classical pair
/// (1−q^{-1}x)(1−q^{-1}x^{-1}) / ((1−x)(1−x^{-1})).
pub fn reciprocity_check(k: usize, c: usize, l: usize) -> Result<bool> {
    let satake = SatakeData::tempered(k)?;
    let (character, forward) = intertwining_constant(k, c, l, &satake)?;
    if k == 1 {
        return Ok(true);
    }
    let kappa = kappa_matrix(k, c, l)?;
    let w: Vec<usize> = kappa.inverse().images().to_vec();
    // Backward operator: permuted slots, inverse permutation.
    let mut permuted = vec![LaurentRat::zero(character.ctx()); w.len()];
    for (s, &pos) in w.iter().enumerate() {
        permuted[pos] = character.slots()[s].clone();
    }
    let w_inv: Vec<usize> = kappa.images().to_vec();
    let backward = product_over_inversions(&permuted, &w_inv, c)?;

    let canon = |v: &LaurentRat| serde_json::to_string(v).expect("serializable");
    let mut forward_inverted: Vec<String> = forward
        .factors()
        .iter()
        .map(|f| canon(&f.chi.inv().expect("monomial chi")))
        .collect();
    let mut backward_chis: Vec<String> =
        backward.factors().iter().map(|f| canon(&f.chi)).collect();
    forward_inverted.sort();
    backward_chis.sort();
    Ok(forward_inverted == backward_chis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_ctx(extra: &[&str]) -> Context {
        let mut names = vec!["q"];
        names.extend_from_slice(extra);
        Context::new(&names).unwrap()
    }

    fn mono(ctx: &Context, pairs: &[(&str, i64)]) -> LaurentRat {
        let exps: Vec<(&str, Exp)> = pairs.iter().map(|&(n, e)| (n, Exp::from(e))).collect();
        LaurentRat::monomial(ctx, BigRational::one(), &exps).unwrap()
    }

    #[test]
    fn gk_factor_shapes() {
        let ctx = q_ctx(&["alpha", "Z_1", "Z_2"]);
        let chi = mono(&ctx, &[("alpha", 1), ("Z_1", 1), ("Z_2", -1), ("q", -1)]);
        let f = gk_factor(&chi).unwrap();
        let num = &LaurentRat::one(&ctx)
            - &mono(&ctx, &[("alpha", 1), ("Z_1", 1), ("Z_2", -1), ("q", -2)]);
        let den = &LaurentRat::one(&ctx) - &chi;
        assert_eq!(f, num.try_div(&den).unwrap());

        // Geometric cancellation at chi = q^{-1}.
        let f = gk_factor(&mono(&ctx, &[("q", -1)])).unwrap();
        let expected = &LaurentRat::one(&ctx) + &mono(&ctx, &[("q", -1)]);
        assert_eq!(f, expected);

        // Numerator root at chi = q.
        assert!(gk_factor(&mono(&ctx, &[("q", 1)])).unwrap().is_zero());

        // Degenerate and malformed inputs.
        assert!(gk_factor(&LaurentRat::one(&ctx)).is_err());
        let not_mono = &LaurentRat::one(&ctx) + &mono(&ctx, &[("q", 1)]);
        assert!(gk_factor(&not_mono).is_err());
    }

    #[test]
    fn smallest_constant_is_the_single_displayed_factor() {
        let satake = SatakeData::tempered(2).unwrap();
        let (character, product) = intertwining_constant(2, 2, 1, &satake).unwrap();
        assert_eq!(product.len(), 1);
        let f = &product.factors()[0];
        assert_eq!(f.slot_pair, (2, 3));
        assert_eq!((f.i, f.j, f.i_prime, f.j_prime), (1, 2, 2, 1));
        assert_eq!(f.shift, -1);
        let ctx = character.ctx();
        let chi = mono(ctx, &[("alpha_1", 1), ("alpha_2", -1), ("Z_1", 1), ("Z_2", -1), ("q", -1)]);
        assert_eq!(f.chi, chi);
        assert_eq!(f.factor, gk_factor(&chi).unwrap());
        assert_eq!(product.product(ctx), f.factor);
    }

    #[test]
    fn single_block_gives_empty_product() {
        let satake = SatakeData::tempered(1).unwrap();
        let (character, product) = intertwining_constant(1, 3, 1, &satake).unwrap();
        assert!(product.is_empty());
        assert!(product.product(character.ctx()).is_one());
    }

    #[test]
    fn factor_counts_match_cell_areas() {
        for k in 1..=3usize {
            for c in 2..=3usize {
                for l in 1..c {
                    let satake = SatakeData::tempered(k).unwrap();
                    let (_, product) = intertwining_constant(k, c, l, &satake).unwrap();
                    assert_eq!(
                        product.len(),
                        k * (k - 1) / 2 * l * (c - l),
                        "k={k} c={c} l={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn factors_fit_template() {
        assert!(factor_template_check(2, 2, 1).unwrap());
        assert!(factor_template_check(3, 3, 1).unwrap());
        assert!(factor_template_check(3, 3, 2).unwrap());
        assert!(factor_template_check(1, 3, 1).unwrap());
    }

    #[test]
    fn regularity_thresholds() {
        let sat = |m: &[Rational64]| {
            SatakeData::new(
                (1..=m.len()).map(|i| format!("alpha_{i}")).collect(),
                m.to_vec(),
            )
            .unwrap()
        };
        assert!(regularity_check(&SatakeData::tempered(3).unwrap()));
        assert!(!regularity_check(&sat(&[
            Rational64::one(),
            Rational64::zero()
        ])));
        assert!(regularity_check(&sat(&[
            Rational64::new(1, 2),
            Rational64::zero()
        ])));
    }

    #[test]
    fn ladder_specialization_is_regular() {
        assert!(factors_regular_on_ladder(2, 2, 1).unwrap());
        assert!(factors_regular_on_ladder(2, 3, 2).unwrap());
        assert!(factors_regular_on_ladder(3, 2, 1).unwrap());
    }

    #[test]
    fn speh_satake_slots() {
        let satake = SatakeData::new(vec!["alpha".into()], vec![Rational64::zero()]).unwrap();
        let slots = satake_of_speh(&satake, 2).unwrap();
        let ctx = slots[0].ctx().clone();
        let up = LaurentRat::monomial(
            &ctx,
            BigRational::one(),
            &[("alpha", Exp::from(1)), ("q", Exp::new(1, 2))],
        )
        .unwrap();
        let down = LaurentRat::monomial(
            &ctx,
            BigRational::one(),
            &[("alpha", Exp::from(1)), ("q", Exp::new(-1, 2))],
        )
        .unwrap();
        assert_eq!(slots, vec![up, down]);

        let satake = SatakeData::tempered(3).unwrap();
        let slots = satake_of_speh(&satake, 1).unwrap();
        assert_eq!(slots.len(), 3);
        assert!(slots.iter().all(|s| s.as_monomial().is_some()));

        // Exponent ladder is symmetric under q^e ↦ q^{-e} blockwise.
        let slots = satake_of_speh(&satake, 4).unwrap();
        let ctx = slots[0].ctx().clone();
        let q_ix = ctx.index_of("q").unwrap();
        for block in slots.chunks(4) {
            let mut exps: Vec<Exp> = block
                .iter()
                .map(|s| s.as_monomial().unwrap().1.exp(q_ix))
                .collect();
            let mut negated: Vec<Exp> = exps.iter().map(|e| -*e).collect();
            exps.sort();
            negated.sort();
            assert_eq!(exps, negated);
        }
    }

    #[test]
    fn reciprocity_pairs_up() {
        assert!(reciprocity_check(2, 2, 1).unwrap());
        assert!(reciprocity_check(3, 2, 1).unwrap());
        assert!(reciprocity_check(2, 3, 1).unwrap());
        assert!(reciprocity_check(1, 2, 1).unwrap());
    }

    #[test]
    fn degenerate_factor_is_reported() {
        // Two identical slots forced into an inversion.
        let ctx = q_ctx(&["alpha"]);
        let s = mono(&ctx, &[("alpha", 1)]);
        let slots = vec![s.clone(), s];
        match product_over_inversions(&slots, &[1, 0], 1) {
            Err(Error::DegenerateFactor(1, 2)) => {}
            other => panic!("expected DegenerateFactor(1,2), got {other:?}"),
        }
    }

    #[test]
    fn satake_validation() {
        assert!(SatakeData::new(vec!["a".into(), "a".into()], vec![Rational64::zero(); 2]).is_err());
        assert!(SatakeData::new(vec!["q".into()], vec![Rational64::zero()]).is_err());
        assert!(SatakeData::new(vec!["Z_1".into()], vec![Rational64::zero()]).is_err());
        assert!(SatakeData::new(vec!["a".into()], vec![]).is_err());
        let d = SatakeData::new(vec!["a".into()], vec![Rational64::new(1, 2)]).unwrap();
        let js = serde_json::to_string(&d).unwrap();
        assert_eq!(js, r#"{"alphas":["a"],"moduli":["1/2"]}"#);
        assert_eq!(serde_json::from_str::<SatakeData>(&js).unwrap(), d);
        assert!(!d.is_tempered());
    }

    #[test]
    fn mismatched_satake_size_is_rejected() {
        let satake = SatakeData::tempered(2).unwrap();
        assert!(intertwining_constant(3, 2, 1, &satake).is_err());
    }
}
