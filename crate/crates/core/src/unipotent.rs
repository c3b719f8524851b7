//! Unipotent subgroups as coordinate sets, the orbit subgroup V(σ), the
//! (k,c) character functional, modulus-character exponents, and the
//! bookkeeping for torus conjugation acting on unipotent coordinates.
//!
//! A unipotent radical (or any root subgroup product) is recorded purely by
//! the set of matrix coordinates it occupies: every statement needed about
//! these groups is block-coordinate combinatorics, optionally fed into the
//! symbolic matrix layer for an honest matrix identity.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num::{BigRational, One, Rational64, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{symbol_block, symbol_names, Context, FracMatrix, LaurentRat};
use crate::combinatorics::{Composition, Partition};
use crate::{Error, Result};

/// A set of off-diagonal matrix coordinates inside GL_n, 0-based internally
/// and 1-based in serialized form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "CoordSetRepr", into = "CoordSetRepr")]
pub struct CoordSet {
    n: usize,
    coords: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct CoordSetRepr {
    n: usize,
    coords: Vec<[usize; 2]>,
}

impl CoordSet {
    /// Builds from 0-based (row, column) pairs.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut coords = BTreeSet::new();
        for (r, c) in pairs {
            if r >= n || c >= n {
                return Err(Error::InvalidInput(format!(
                    "coordinate ({r},{c}) out of range for n={n}"
                )));
            }
            if r == c {
                return Err(Error::InvalidInput(format!(
                    "diagonal coordinate ({r},{r}) not allowed"
                )));
            }
            coords.insert((r, c));
        }
        Ok(CoordSet { n, coords })
    }

    pub fn empty(n: usize) -> Self {
        CoordSet {
            n,
            coords: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.coords.contains(&(r, c))
    }

    /// Iterates 0-based pairs in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.coords.iter().copied()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.coords.iter().all(|&(r, c)| r < c)
    }

    /// The transposed coordinate set (models the opposite unipotent group).
    pub fn transpose(&self) -> CoordSet {
        CoordSet {
            n: self.n,
            coords: self.coords.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    pub fn union(&self, other: &CoordSet) -> Result<CoordSet> {
        self.check_n(other)?;
        Ok(CoordSet {
            n: self.n,
            coords: self.coords.union(&other.coords).copied().collect(),
        })
    }

    pub fn difference(&self, other: &CoordSet) -> Result<CoordSet> {
        self.check_n(other)?;
        Ok(CoordSet {
            n: self.n,
            coords: self.coords.difference(&other.coords).copied().collect(),
        })
    }

    pub fn is_disjoint(&self, other: &CoordSet) -> bool {
        self.n == other.n && self.coords.is_disjoint(&other.coords)
    }

    pub fn is_subset(&self, other: &CoordSet) -> bool {
        self.n == other.n && self.coords.is_subset(&other.coords)
    }

    /// Re-places the set inside a larger ambient GL_m, shifting both indices
    /// by `offset` (embedding into a diagonal corner block).
    pub fn embed(&self, m: usize, offset: usize) -> Result<CoordSet> {
        if offset + self.n > m {
            return Err(Error::InvalidInput(format!(
                "cannot embed size {} at offset {offset} into size {m}",
                self.n
            )));
        }
        CoordSet::new(m, self.coords.iter().map(|&(r, c)| (r + offset, c + offset)))
    }

    /// Applies a coordinate relabelling (for instance conjugation by a
    /// permutation matrix); fails if two coordinates collide or leave range.
    pub fn relabel(&self, f: impl Fn(usize, usize) -> (usize, usize)) -> Result<CoordSet> {
        let relabeled = CoordSet::new(self.n, self.coords.iter().map(|&(r, c)| f(r, c)))?;
        if relabeled.len() != self.len() {
            return Err(Error::InvalidInput(
                "coordinate relabelling is not injective".into(),
            ));
        }
        Ok(relabeled)
    }

    fn check_n(&self, other: &CoordSet) -> Result<()> {
        if self.n != other.n {
            return Err(Error::InvalidInput(format!(
                "ambient sizes differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

impl TryFrom<CoordSetRepr> for CoordSet {
    type Error = Error;

    fn try_from(repr: CoordSetRepr) -> Result<Self> {
        if repr.coords.iter().any(|p| p[0] == 0 || p[1] == 0) {
            return Err(Error::InvalidInput(
                "serialized coordinates are 1-based".into(),
            ));
        }
        CoordSet::new(repr.n, repr.coords.iter().map(|p| (p[0] - 1, p[1] - 1)))
    }
}

impl From<CoordSet> for CoordSetRepr {
    fn from(s: CoordSet) -> Self {
        CoordSetRepr {
            n: s.n,
            coords: s.coords.iter().map(|&(r, c)| [r + 1, c + 1]).collect(),
        }
    }
}

/// The coordinates of V(σ): all (r,c) where the weight gap p_σ(r) − p_σ(c)
/// is at least 2. Since p_σ is weakly decreasing the set is
/// upper-triangular.
pub fn v_of_orbit(sigma: &Partition) -> CoordSet {
    let p = sigma.orbit_data().p().to_vec();
    let n = p.len();
    let coords = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| r != c && p[r] - p[c] >= 2);
    CoordSet::new(n, coords).expect("weights are in range")
}

/// The coordinates of the unipotent radical V_β of the standard parabolic
/// P_β: all (r,c) whose row block strictly precedes its column block.
pub fn v_of_composition(beta: &Composition) -> CoordSet {
    let pattern = block_pattern(beta);
    let n = pattern.len();
    let coords = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| pattern[r] < pattern[c]);
    CoordSet::new(n, coords).expect("coordinates are in range")
}

/// Assigns each of the Σβ_i diagonal coordinates its 0-based block index.
pub fn block_pattern(beta: &Composition) -> Vec<usize> {
    let mut pattern = Vec::with_capacity(beta.total() as usize);
    for (block, &size) in beta.parts().iter().enumerate() {
        pattern.extend(std::iter::repeat(block).take(size as usize));
    }
    pattern
}

/// The slot pattern of the diagonally embedded torus of GL_c inside
/// GL_{kc}: slots 0..c repeated k times.
pub fn diagonal_pattern(k: usize, c: usize) -> Vec<usize> {
    (0..k).flat_map(|_| 0..c).collect()
}

/// A finite linear functional on unipotent coordinates: a map from matrix
/// coordinates to nonzero rational coefficients. Composed with a fixed
/// additive character this is exactly the character data carried by a
/// unipotent group.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "CharacterRepr", into = "CharacterRepr")]
pub struct CharacterFunctional {
    n: usize,
    terms: BTreeMap<(usize, usize), Rational64>,
}

#[derive(Serialize, Deserialize)]
struct CharacterRepr {
    n: usize,
    terms: Vec<(usize, usize, i64, i64)>,
}

impl CharacterFunctional {
    pub fn new(
        n: usize,
        terms: impl IntoIterator<Item = ((usize, usize), Rational64)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), Rational64> = BTreeMap::new();
        for ((r, c), coeff) in terms {
            if r >= n || c >= n || r == c {
                return Err(Error::InvalidInput(format!(
                    "coordinate ({r},{c}) invalid for n={n}"
                )));
            }
            let entry = map.entry((r, c)).or_insert_with(Rational64::zero);
            *entry += coeff;
        }
        map.retain(|_, v| !v.is_zero());
        Ok(CharacterFunctional { n, terms: map })
    }

    pub fn empty(n: usize) -> Self {
        CharacterFunctional {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, r: usize, c: usize) -> Rational64 {
        self.terms
            .get(&(r, c))
            .copied()
            .unwrap_or_else(Rational64::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Rational64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    /// The coordinates carrying a nonzero coefficient.
    pub fn support(&self) -> CoordSet {
        CoordSet::new(self.n, self.terms.keys().copied()).expect("terms validated")
    }

    /// True when the functional is identically zero on the given set.
    pub fn vanishes_on(&self, coords: &CoordSet) -> bool {
        self.terms.keys().all(|&(r, c)| !coords.contains(r, c))
    }

    /// Keeps only the terms supported inside `coords`.
    pub fn restrict_to(&self, coords: &CoordSet) -> CharacterFunctional {
        CharacterFunctional {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(&(r, c), _)| coords.contains(r, c))
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    /// Re-places the functional inside a larger ambient GL_m at a diagonal
    /// corner block starting at `offset`.
    pub fn embed(&self, m: usize, offset: usize) -> Result<CharacterFunctional> {
        if offset + self.n > m {
            return Err(Error::InvalidInput(format!(
                "cannot embed size {} at offset {offset} into size {m}",
                self.n
            )));
        }
        CharacterFunctional::new(
            m,
            self.terms
                .iter()
                .map(|(&(r, c), &v)| ((r + offset, c + offset), v)),
        )
    }

    /// Pushes the functional through a coordinate relabelling; coefficients
    /// landing on the same coordinate add.
    pub fn relabel(
        &self,
        f: impl Fn(usize, usize) -> (usize, usize),
    ) -> Result<CharacterFunctional> {
        CharacterFunctional::new(
            self.n,
            self.terms.iter().map(|(&(r, c), &v)| (f(r, c), v)),
        )
    }

    /// Evaluates the functional on the entries of a symbolic matrix:
    /// Σ coeff(r,c) · m[r][c].
    pub fn apply(&self, m: &FracMatrix) -> Result<LaurentRat> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::InvalidInput(format!(
                "matrix is {}x{}, functional lives on {}x{}",
                m.rows(),
                m.cols(),
                self.n,
                self.n
            )));
        }
        let mut acc = LaurentRat::zero(m.ctx());
        for (&(r, c), coeff) in &self.terms {
            let scalar = LaurentRat::constant(
                m.ctx(),
                BigRational::new((*coeff.numer()).into(), (*coeff.denom()).into()),
            );
            acc = &acc + &(&scalar * m.get(r, c));
        }
        Ok(acc)
    }
}

impl TryFrom<CharacterRepr> for CharacterFunctional {
    type Error = Error;

    fn try_from(repr: CharacterRepr) -> Result<Self> {
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (r, c, num, den) in repr.terms {
            if r == 0 || c == 0 {
                return Err(Error::InvalidInput(
                    "serialized coordinates are 1-based".into(),
                ));
            }
            if den == 0 {
                return Err(Error::InvalidInput("zero denominator".into()));
            }
            terms.push(((r - 1, c - 1), Rational64::new(num, den)));
        }
        CharacterFunctional::new(repr.n, terms)
    }
}

impl From<CharacterFunctional> for CharacterRepr {
    fn from(f: CharacterFunctional) -> Self {
        CharacterRepr {
            n: f.n,
            terms: f
                .terms
                .iter()
                .map(|(&(r, c), v)| (r + 1, c + 1, *v.numer(), *v.denom()))
                .collect(),
        }
    }
}

/// The (k,c) character functional on V_{(c^k)} ⊂ GL_{kc}: the linear map
/// v ↦ Σ_{i=1}^{k−1} tr(v_{i,i+1}) expanded over matrix coordinates, i.e.
/// coefficient 1 on each diagonal entry of each superdiagonal c×c block.
pub fn kc_character(k: usize, c: usize) -> CharacterFunctional {
    let n = k * c;
    let terms = (0..k.saturating_sub(1)).flat_map(move |i| {
        (0..c).map(move |t| ((i * c + t, (i + 1) * c + t), Rational64::one()))
    });
    CharacterFunctional::new(n, terms).expect("coordinates in range")
}

/// A tuple of rational exponents indexed by diagonal blocks or torus slots.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ExponentVector(Vec<Rational64>);

impl ExponentVector {
    pub fn new(values: impl Into<Vec<Rational64>>) -> Self {
        ExponentVector(values.into())
    }

    pub fn from_integers(values: &[i64]) -> Self {
        ExponentVector(values.iter().map(|&v| Rational64::from_integer(v)).collect())
    }

    pub fn values(&self) -> &[Rational64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational64::is_zero)
    }

    /// Entrywise scaling.
    pub fn scale(&self, factor: Rational64) -> ExponentVector {
        ExponentVector(self.0.iter().map(|v| v * factor).collect())
    }
}

impl TryFrom<Vec<String>> for ExponentVector {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        let mut values = Vec::with_capacity(v.len());
        for s in v {
            let r: Rational64 = s
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad rational '{s}'")))?;
            values.push(r);
        }
        Ok(ExponentVector(values))
    }
}

impl From<ExponentVector> for Vec<String> {
    fn from(e: ExponentVector) -> Self {
        e.0.iter().map(|r| r.to_string()).collect()
    }
}

/// The exponents of the modulus character of P_β on its Levi blocks:
/// δ_{P_β}(diag(g_1,…,g_d)) = ∏ |det g_i|^{e_i} with
/// e_i = Σ_{j>i} β_j − Σ_{j<i} β_j.
pub fn delta_exponents(beta: &Composition) -> ExponentVector {
    let parts = beta.parts();
    let total: i64 = parts.iter().map(|&p| p as i64).sum();
    let mut before = 0i64;
    let mut values = Vec::with_capacity(parts.len());
    for &p in parts {
        let p = p as i64;
        let after = total - before - p;
        values.push(Rational64::from_integer(after - before));
        before += p;
    }
    ExponentVector(values)
}

/// Measure change of torus conjugation on a coordinate set.
///
/// `slots[i]` names the torus parameter sitting at diagonal coordinate `i`
/// (repetitions model patterns such as the diagonal embedding t^△).
/// Conjugating the coordinate group by that torus element multiplies the
/// measure by ∏_s |t_s|^{E_s} with
/// E_s = Σ_{(r,c)} [slots[r] = s] − [slots[c] = s], which is what this
/// returns (length = number of slots).
///
/// With `slots` equal to the block pattern of β and `coords = V_β` this
/// evaluates δ_{P_β} on the slot-constant torus, so E_s = e_s · β_s in
/// terms of [`delta_exponents`].
pub fn torus_conjugation_exponents(coords: &CoordSet, slots: &[usize]) -> Result<ExponentVector> {
    if slots.len() != coords.n() {
        return Err(Error::InvalidInput(format!(
            "slot pattern has length {}, ambient size is {}",
            slots.len(),
            coords.n()
        )));
    }
    let nslots = slots.iter().copied().max().map_or(0, |m| m + 1);
    let mut exps = vec![0i64; nslots];
    for (r, c) in coords.iter() {
        exps[slots[r]] += 1;
        exps[slots[c]] -= 1;
    }
    Ok(ExponentVector::from_integers(&exps))
}

/// Confirms that the block-diagonal stabilizer of the (k,c) character is
/// exactly the diagonally embedded GL_c.
///
/// For each trial a random invertible rational c×c matrix g is drawn and two
/// directions are checked exactly:
///
/// 1. invariance: tr(g·A·g^{-1}) = tr(A) for a fully symbolic block A, so
///    equal diagonal blocks do preserve the character, and
/// 2. rigidity: requiring tr(g·A·h^{-1}) = tr(A) for all A is a linear
///    system on w = h^{-1} whose unique solution is w = g^{-1}, forcing
///    h = g; a deliberately perturbed h is also re-checked to fail.
pub fn diag_stabilizer_check(k: usize, c: usize, trials: usize, seed: u64) -> Result<bool> {
    if k < 2 {
        return Err(Error::InvalidInput(
            "stabilizer statement needs at least two diagonal blocks".into(),
        ));
    }
    if c == 0 {
        return Err(Error::InvalidInput("block size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sym_ctx = Context::new(
        &symbol_names("a", c, c)
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    )?;
    let a = symbol_block(&sym_ctx, "a", c, c);
    let scalar_ctx = Context::new(&[] as &[&str])?;

    for _ in 0..trials {
        let g_rat = random_invertible(&scalar_ctx, c, &mut rng);

        // (1) invariance with equal blocks, symbolically in A.
        let g_sym = embed_constants(&sym_ctx, &g_rat);
        let g_sym_inv = g_sym.inverse()?.expect("g sampled invertible");
        let conjugated = g_sym.mul(&a)?.mul(&g_sym_inv)?;
        if conjugated.trace()? != a.trace()? {
            return Ok(false);
        }

        // (2) rigidity: tr(g·E_{uv}·w) = δ_{uv} for all (u,v) reads
        // Σ_a g[a][u]·w[v][a] = δ_{uv}; solve the c²×c² system for w.
        let n2 = c * c;
        let mut system = FracMatrix::zeros(&scalar_ctx, n2, n2);
        let mut rhs = FracMatrix::zeros(&scalar_ctx, n2, 1);
        for u in 0..c {
            for v in 0..c {
                let eq = u * c + v;
                for s in 0..c {
                    system.set(eq, v * c + s, g_rat.get(s, u).clone());
                }
                if u == v {
                    rhs.set(eq, 0, LaurentRat::one(&scalar_ctx));
                }
            }
        }
        let Some(sys_inv) = system.inverse()? else {
            return Ok(false);
        };
        let w_vec = sys_inv.mul(&rhs)?;
        let w = FracMatrix::from_fn(&scalar_ctx, c, c, |p, q| w_vec.get(p * c + q, 0).clone());
        if !w.mul(&g_rat)?.is_identity() {
            return Ok(false);
        }

        // Perturbed candidate h = g·diag(2,1,…,1) must violate the
        // condition on some matrix unit.
        let mut d = FracMatrix::identity(&scalar_ctx, c);
        d.set(0, 0, LaurentRat::from_int(&scalar_ctx, 2));
        let h = g_rat.mul(&d)?;
        let h_inv = h.inverse()?.expect("product of invertibles");
        let mut violated = false;
        'outer: for u in 0..c {
            for v in 0..c {
                let mut e_uv = FracMatrix::zeros(&scalar_ctx, c, c);
                e_uv.set(u, v, LaurentRat::one(&scalar_ctx));
                let lhs = g_rat.mul(&e_uv)?.mul(&h_inv)?.trace()?;
                if lhs != e_uv.trace()? {
                    violated = true;
                    break 'outer;
                }
            }
        }
        if !violated {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random c×c matrix with small rational entries, resampled until
/// invertible.
fn random_invertible(ctx: &Context, c: usize, rng: &mut ChaCha8Rng) -> FracMatrix {
    loop {
        let m = FracMatrix::from_fn(ctx, c, c, |_, _| {
            let num: i64 = rng.gen_range(-5..=5);
            let den: i64 = rng.gen_range(1..=3);
            LaurentRat::constant(ctx, BigRational::new(num.into(), den.into()))
        });
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

/// Re-expresses a constant matrix inside another variable context.
fn embed_constants(ctx: &Context, m: &FracMatrix) -> FracMatrix {
    FracMatrix::from_fn(ctx, m.rows(), m.cols(), |r, c| {
        let v = m.get(r, c);
        let constant = v
            .as_constant()
            .expect("matrix entries are constant rationals");
        LaurentRat::constant(ctx, constant)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_1based(n: usize, pairs: &[(usize, usize)]) -> CoordSet {
        CoordSet::new(n, pairs.iter().map(|&(r, c)| (r - 1, c - 1))).unwrap()
    }

    #[test]
    fn orbit_coordinates() {
        let sigma = Partition::new(vec![2, 2]).unwrap();
        assert_eq!(
            v_of_orbit(&sigma),
            set_1based(4, &[(1, 3), (1, 4), (2, 3), (2, 4)])
        );
        assert!(v_of_orbit(&Partition::rectangle(1, 5)).is_empty());
        assert!(v_of_orbit(&Partition::new(vec![3, 1]).unwrap()).is_upper_triangular());
    }

    #[test]
    fn rectangle_orbit_matches_block_radical() {
        for (k, c) in [(2, 2), (3, 2), (2, 3), (4, 3)] {
            let orbit = v_of_orbit(&Partition::rectangle(k as u64, c));
            let radical =
                v_of_composition(&Composition::repeat(c as u64, k).unwrap());
            assert_eq!(orbit, radical, "k={k} c={c}");
        }
    }

    #[test]
    fn composition_radicals() {
        let beta = Composition::new(vec![2, 1]).unwrap();
        assert_eq!(v_of_composition(&beta), set_1based(3, &[(1, 3), (2, 3)]));
        assert!(v_of_composition(&Composition::new(vec![5]).unwrap()).is_empty());
        let borel = v_of_composition(&Composition::repeat(1, 4).unwrap());
        assert_eq!(borel.len(), 6);
        assert!(borel.is_upper_triangular());
        assert_eq!(borel.transpose().len(), 6);
        assert!(!borel.transpose().is_upper_triangular());
        assert!(borel.is_disjoint(&borel.transpose()));
    }

    #[test]
    fn kc_character_support() {
        let psi = kc_character(2, 2);
        assert_eq!(psi.support(), set_1based(4, &[(1, 3), (2, 4)]));
        assert_eq!(psi.coeff(0, 2), Rational64::one());

        assert_eq!(kc_character(1, 7).len(), 0);

        let whittaker = kc_character(3, 1);
        assert_eq!(whittaker.support(), set_1based(3, &[(1, 2), (2, 3)]));

        for (k, c) in [(2, 3), (4, 2), (3, 3)] {
            let psi = kc_character(k, c);
            assert_eq!(psi.len(), (k - 1) * c);
            let radical = v_of_composition(&Composition::repeat(c as u64, k).unwrap());
            assert!(psi.support().is_subset(&radical));
            let rows: BTreeSet<usize> = psi.terms().map(|((r, _), _)| r).collect();
            let cols: BTreeSet<usize> = psi.terms().map(|((_, c), _)| c).collect();
            assert_eq!(rows.len(), psi.len());
            assert_eq!(cols.len(), psi.len());
        }
    }

    #[test]
    fn character_evaluation_and_relabel() {
        let psi = kc_character(2, 1);
        let ctx = Context::new(&["x"]).unwrap();
        let x = LaurentRat::var(&ctx, "x").unwrap();
        let mut m = FracMatrix::identity(&ctx, 2);
        m.set(0, 1, x.clone());
        assert_eq!(psi.apply(&m).unwrap(), x);

        let swapped = psi.relabel(|r, c| (c, r)).unwrap();
        assert_eq!(swapped.support(), psi.support().transpose());
        // Colliding relabels merge coefficients.
        let doubled = CharacterFunctional::new(
            3,
            [((0, 1), Rational64::one()), ((1, 2), Rational64::one())],
        )
        .unwrap();
        let merged = doubled.relabel(|_, _| (0, 2)).unwrap();
        assert_eq!(merged.coeff(0, 2), Rational64::from_integer(2));
    }

    #[test]
    fn delta_exponent_formulas() {
        let beta = Composition::new(vec![2, 1]).unwrap();
        assert_eq!(
            delta_exponents(&beta),
            ExponentVector::from_integers(&[1, -2])
        );
        assert_eq!(
            delta_exponents(&Composition::new(vec![7]).unwrap()),
            ExponentVector::from_integers(&[0])
        );
        // Rectangular case: e_i / (2k) walks the ζ-ladder (c−1)/2, (c−3)/2, …
        let (k, c) = (3u64, 4usize);
        let e = delta_exponents(&Composition::repeat(k, c).unwrap());
        let zeta: Vec<Rational64> = (0..c)
            .map(|i| Rational64::new(c as i64 - 2 * i as i64 - 1, 2))
            .collect();
        assert_eq!(
            e.scale(Rational64::new(1, 2 * k as i64)),
            ExponentVector::new(zeta)
        );
        // δ is trivial on scalars: Σ e_i·β_i = 0.
        for beta in Composition::all_of(6) {
            let e = delta_exponents(&beta);
            let dot: Rational64 = e
                .values()
                .iter()
                .zip(beta.parts())
                .map(|(ei, &bi)| ei * Rational64::from_integer(bi as i64))
                .sum();
            assert!(dot.is_zero(), "beta={beta}");
        }
    }

    #[test]
    fn torus_conjugation_recovers_delta() {
        for beta in [
            Composition::new(vec![2, 1]).unwrap(),
            Composition::new(vec![1, 3, 2]).unwrap(),
            Composition::repeat(2, 3).unwrap(),
        ] {
            let coords = v_of_composition(&beta);
            let pattern = block_pattern(&beta);
            let measured = torus_conjugation_exponents(&coords, &pattern).unwrap();
            let e = delta_exponents(&beta);
            let expected: Vec<Rational64> = e
                .values()
                .iter()
                .zip(beta.parts())
                .map(|(ei, &bi)| ei * Rational64::from_integer(bi as i64))
                .collect();
            assert_eq!(measured, ExponentVector::new(expected), "beta={beta}");
        }
    }

    #[test]
    fn diagonal_torus_is_unimodular_on_scaled_radicals() {
        for (beta, c) in [
            (Composition::new(vec![2, 1]).unwrap(), 3usize),
            (Composition::new(vec![1, 1, 2]).unwrap(), 2),
        ] {
            let k = beta.total() as usize;
            let coords = v_of_composition(&beta.scale(c as u64).unwrap());
            let pattern = diagonal_pattern(k, c);
            let e = torus_conjugation_exponents(&coords, &pattern).unwrap();
            assert!(e.is_zero(), "beta={beta} c={c}");
        }
    }

    #[test]
    fn stabilizer_is_diagonal_embedding() {
        assert!(diag_stabilizer_check(2, 2, 3, 17).unwrap());
        assert!(diag_stabilizer_check(3, 1, 3, 17).unwrap());
        assert!(diag_stabilizer_check(2, 3, 2, 99).unwrap());
        assert!(diag_stabilizer_check(1, 2, 1, 0).is_err());
    }

    #[test]
    fn json_round_trips() {
        let coords = set_1based(4, &[(1, 3), (2, 4)]);
        let js = serde_json::to_string(&coords).unwrap();
        assert_eq!(js, r#"{"n":4,"coords":[[1,3],[2,4]]}"#);
        assert_eq!(serde_json::from_str::<CoordSet>(&js).unwrap(), coords);

        let psi = kc_character(2, 2);
        let js = serde_json::to_string(&psi).unwrap();
        assert_eq!(js, r#"{"n":4,"terms":[[1,3,1,1],[2,4,1,1]]}"#);
        assert_eq!(serde_json::from_str::<CharacterFunctional>(&js).unwrap(), psi);

        let e = ExponentVector::new(vec![Rational64::new(3, 2), Rational64::from_integer(-2)]);
        let js = serde_json::to_string(&e).unwrap();
        assert_eq!(js, r#"["3/2","-2"]"#);
        assert_eq!(serde_json::from_str::<ExponentVector>(&js).unwrap(), e);
    }

    #[test]
    fn exponent_vector_helpers() {
        let e = ExponentVector::from_integers(&[2, -2]);
        assert!(!e.is_zero());
        assert_eq!(
            e.scale(Rational64::new(1, 2)),
            ExponentVector::new(vec![Rational64::from_integer(1), Rational64::from_integer(-1)])
        );
        assert!(ExponentVector::from_integers(&[]).is_empty());
    }
}
