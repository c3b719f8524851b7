//! Formal calculus of inducing data for generalized Speh representations.
//!
//! Representations are *expressions*: ordered lists of essentially
//! square-integrable segments (cuspidal label, length, exponent), grouped
//! into tempered clusters and inflated into Speh blocks ρ_c. The operators
//! here — ρ_c construction, highest Bernstein–Zelevinsky derivative, duals,
//! canonical forms, central characters — act on that data. Two expressions
//! denote the same induced representation exactly when their canonical forms
//! are equal; no function spaces, irreducibility or unitarity decisions are
//! involved.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num::{Rational64, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Where the inducing data is allowed to live. Over archimedean fields the
/// derivative calculus is only available for inducing data built from
/// characters, so construction in [`Mode::Archimedean`] rejects any segment
/// of rank greater than one.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    PAdic,
    Archimedean,
}

/// An irreducible unitary supercuspidal of GL_r, identified by name. The
/// label carries the name of its contragredient so that dualizing is a
/// local involution: `dual` swaps the two names and keeps the rank.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "CuspidalRepr", into = "CuspidalRepr")]
pub struct CuspidalLabel {
    name: String,
    rank: usize,
    dual_name: String,
    unitary: bool,
}

#[derive(Serialize, Deserialize)]
struct CuspidalRepr {
    name: String,
    rank: usize,
    dual_name: String,
    unitary: bool,
}

impl CuspidalLabel {
    pub fn new(name: &str, rank: usize, dual_name: &str, unitary: bool) -> Result<Self> {
        if name.is_empty() || dual_name.is_empty() {
            return Err(Error::InvalidInput("cuspidal names must be nonempty".into()));
        }
        if rank == 0 {
            return Err(Error::InvalidInput("cuspidal rank must be positive".into()));
        }
        Ok(CuspidalLabel {
            name: name.into(),
            rank,
            dual_name: dual_name.into(),
            unitary,
        })
    }

    /// A self-dual rank-one label: an unramified unitary character.
    pub fn character(name: &str) -> Result<Self> {
        CuspidalLabel::new(name, 1, name, true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dual_name(&self) -> &str {
        &self.dual_name
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn is_self_dual(&self) -> bool {
        self.name == self.dual_name
    }

    /// The contragredient label. An involution by construction.
    pub fn dual(&self) -> CuspidalLabel {
        CuspidalLabel {
            name: self.dual_name.clone(),
            rank: self.rank,
            dual_name: self.name.clone(),
            unitary: self.unitary,
        }
    }
}

impl TryFrom<CuspidalRepr> for CuspidalLabel {
    type Error = Error;

    fn try_from(r: CuspidalRepr) -> Result<Self> {
        CuspidalLabel::new(&r.name, r.rank, &r.dual_name, r.unitary)
    }
}

impl From<CuspidalLabel> for CuspidalRepr {
    fn from(l: CuspidalLabel) -> Self {
        CuspidalRepr {
            name: l.name,
            rank: l.rank,
            dual_name: l.dual_name,
            unitary: l.unitary,
        }
    }
}

/// An essentially square-integrable segment |det|^a·St_d(τ_0): the unique
/// irreducible subrepresentation of the (r^d) induction of d copies of the
/// cuspidal τ_0, twisted by |det|^a. Its ambient rank is r·d.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "SegmentRepr", into = "SegmentRepr")]
pub struct EssSqInt {
    cuspidal: CuspidalLabel,
    length: usize,
    exponent: Rational64,
}

#[derive(Serialize, Deserialize)]
struct SegmentRepr {
    cuspidal: CuspidalLabel,
    length: usize,
    exponent: String,
}

impl EssSqInt {
    pub fn new(cuspidal: CuspidalLabel, length: usize, exponent: Rational64) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidInput("segment length must be positive".into()));
        }
        Ok(EssSqInt {
            cuspidal,
            length,
            exponent,
        })
    }

    /// A tempered segment (exponent zero).
    pub fn tempered(cuspidal: CuspidalLabel, length: usize) -> Result<Self> {
        EssSqInt::new(cuspidal, length, Rational64::zero())
    }

    pub fn cuspidal(&self) -> &CuspidalLabel {
        &self.cuspidal
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn exponent(&self) -> Rational64 {
        self.exponent
    }

    /// Ambient rank r·d of the segment.
    pub fn rank(&self) -> usize {
        self.cuspidal.rank() * self.length
    }

    pub fn is_tempered(&self) -> bool {
        self.exponent.is_zero()
    }

    /// |det|^s-twist.
    pub fn twist(&self, s: Rational64) -> EssSqInt {
        EssSqInt {
            cuspidal: self.cuspidal.clone(),
            length: self.length,
            exponent: self.exponent + s,
        }
    }

    /// Contragredient: dual cuspidal, same length, negated exponent.
    pub fn dual(&self) -> EssSqInt {
        EssSqInt {
            cuspidal: self.cuspidal.dual(),
            length: self.length,
            exponent: -self.exponent,
        }
    }
}

impl TryFrom<SegmentRepr> for EssSqInt {
    type Error = Error;

    fn try_from(r: SegmentRepr) -> Result<Self> {
        let exponent = r
            .exponent
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad rational '{}'", r.exponent)))?;
        EssSqInt::new(r.cuspidal, r.length, exponent)
    }
}

impl From<EssSqInt> for SegmentRepr {
    fn from(s: EssSqInt) -> Self {
        SegmentRepr {
            cuspidal: s.cuspidal,
            length: s.length,
            exponent: s.exponent.to_string(),
        }
    }
}

/// A generic irreducible representation of GL_k in standard-module
/// coordinates: an ordered list of essentially square-integrable segments
/// with weakly decreasing exponents. Equal-exponent runs form the tempered
/// clusters; the data is in strict Langlands position when the exponents
/// strictly decrease cluster to cluster (always true after clustering).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "TauRepr", into = "TauRepr")]
pub struct GenericTau {
    segments: Vec<EssSqInt>,
}

#[derive(Serialize, Deserialize)]
struct TauRepr {
    segments: Vec<EssSqInt>,
}

impl GenericTau {
    pub fn new(segments: Vec<EssSqInt>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidInput("at least one segment".into()));
        }
        for w in segments.windows(2) {
            if w[0].exponent() < w[1].exponent() {
                return Err(Error::NotLanglandsForm(format!(
                    "exponent {} precedes {}",
                    w[0].exponent(),
                    w[1].exponent()
                )));
            }
        }
        Ok(GenericTau { segments })
    }

    pub fn segments(&self) -> &[EssSqInt] {
        &self.segments
    }

    /// Total rank k = Σ r_i·d_i.
    pub fn k(&self) -> usize {
        self.segments.iter().map(EssSqInt::rank).sum()
    }

    pub fn is_tempered(&self) -> bool {
        self.segments.iter().all(EssSqInt::is_tempered)
    }

    /// Whether distinct segments carry strictly decreasing exponents
    /// (one segment per tempered cluster).
    pub fn is_strictly_decreasing(&self) -> bool {
        self.segments
            .windows(2)
            .all(|w| w[0].exponent() > w[1].exponent())
    }

    /// |det|^s-twist of every segment.
    pub fn twist(&self, s: Rational64) -> GenericTau {
        GenericTau {
            segments: self.segments.iter().map(|t| t.twist(s)).collect(),
        }
    }

    /// Contragredient: reversed order, each segment dualized. Weakly
    /// decreasing exponents stay weakly decreasing under reverse-and-negate.
    pub fn dual(&self) -> GenericTau {
        GenericTau {
            segments: self.segments.iter().rev().map(EssSqInt::dual).collect(),
        }
    }

    /// The tempered clusters: maximal runs of equal exponent, returned as
    /// (common exponent, segments with the exponent factored out).
    pub fn clusters(&self) -> Vec<(Rational64, Vec<EssSqInt>)> {
        let mut out: Vec<(Rational64, Vec<EssSqInt>)> = Vec::new();
        for seg in &self.segments {
            let a = seg.exponent();
            let zeroed = seg.twist(-a);
            match out.last_mut() {
                Some((b, segs)) if *b == a => segs.push(zeroed),
                _ => out.push((a, vec![zeroed])),
            }
        }
        out
    }
}

impl TryFrom<TauRepr> for GenericTau {
    type Error = Error;

    fn try_from(r: TauRepr) -> Result<Self> {
        GenericTau::new(r.segments)
    }
}

impl From<GenericTau> for TauRepr {
    fn from(t: GenericTau) -> Self {
        TauRepr {
            segments: t.segments,
        }
    }
}

/// One factor |det|^twist·ρ_c(cluster) of an induced expression: a tempered
/// cluster of segments, inflated from GL_k to GL_{kc}, with the exponent
/// carried outside as the twist.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "BlockRepr", into = "BlockRepr")]
pub struct SpehBlock {
    segments: Vec<EssSqInt>,
    c: usize,
    twist: Rational64,
}

#[derive(Serialize, Deserialize)]
struct BlockRepr {
    segments: Vec<EssSqInt>,
    c: usize,
    twist: String,
}

impl SpehBlock {
    pub fn new(segments: Vec<EssSqInt>, c: usize, twist: Rational64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidInput("a Speh block needs segments".into()));
        }
        if c == 0 {
            return Err(Error::InvalidInput("Speh period c must be positive".into()));
        }
        if let Some(bad) = segments.iter().find(|s| !s.is_tempered()) {
            return Err(Error::InvalidInput(format!(
                "cluster segment carries exponent {}; factor it into the twist",
                bad.exponent()
            )));
        }
        Ok(SpehBlock { segments, c, twist })
    }

    pub fn segments(&self) -> &[EssSqInt] {
        &self.segments
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn twist(&self) -> Rational64 {
        self.twist
    }

    /// Rank k of the underlying tempered cluster.
    pub fn cluster_rank(&self) -> usize {
        self.segments.iter().map(EssSqInt::rank).sum()
    }

    /// Ambient size k·c of the block.
    pub fn size(&self) -> usize {
        self.cluster_rank() * self.c
    }

    fn dual(&self) -> SpehBlock {
        SpehBlock {
            segments: self.segments.iter().rev().map(EssSqInt::dual).collect(),
            c: self.c,
            twist: -self.twist,
        }
    }
}

impl TryFrom<BlockRepr> for SpehBlock {
    type Error = Error;

    fn try_from(r: BlockRepr) -> Result<Self> {
        let twist = r
            .twist
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad rational '{}'", r.twist)))?;
        SpehBlock::new(r.segments, r.c, twist)
    }
}

impl From<SpehBlock> for BlockRepr {
    fn from(b: SpehBlock) -> Self {
        BlockRepr {
            segments: b.segments,
            c: b.c,
            twist: b.twist.to_string(),
        }
    }
}

/// An induced expression Ind(⊗_i |det|^{twist_i}·ρ_{c}(cluster_i)), or the
/// dimension-one terminal reached when all derivatives are exhausted.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "ExprRepr", into = "ExprRepr")]
pub struct RepExpr {
    n: usize,
    blocks: Vec<SpehBlock>,
    terminal: bool,
}

#[derive(Serialize, Deserialize)]
struct ExprRepr {
    n: usize,
    blocks: Vec<SpehBlock>,
    terminal: bool,
}

impl RepExpr {
    /// The dimension-one terminal expression (on GL_0).
    pub fn terminal() -> RepExpr {
        RepExpr {
            n: 0,
            blocks: Vec::new(),
            terminal: true,
        }
    }

    /// An induced expression over the given blocks in the given order.
    pub fn induced(blocks: Vec<SpehBlock>) -> Result<RepExpr> {
        if blocks.is_empty() {
            return Err(Error::InvalidInput("an induced expression needs blocks".into()));
        }
        let n = blocks.iter().map(SpehBlock::size).sum();
        Ok(RepExpr {
            n,
            blocks,
            terminal: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[SpehBlock] {
        &self.blocks
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal
    }

    /// The composition of block sizes.
    pub fn composition(&self) -> Vec<usize> {
        self.blocks.iter().map(SpehBlock::size).collect()
    }

    /// |det|^s-twist of the whole expression (each block's twist shifts).
    pub fn twist(&self, s: Rational64) -> RepExpr {
        let blocks = self
            .blocks
            .iter()
            .map(|b| SpehBlock {
                segments: b.segments.clone(),
                c: b.c,
                twist: b.twist + s,
            })
            .collect();
        RepExpr {
            n: self.n,
            blocks,
            terminal: self.terminal,
        }
    }

    /// Reads the expression back as standard-module data when every block
    /// has period c = 1 (the ρ_1 degeneration).
    pub fn as_generic_tau(&self) -> Result<GenericTau> {
        if self.terminal {
            return Err(Error::AlreadyTerminal);
        }
        let mut segments = Vec::new();
        for b in &self.blocks {
            if b.c() != 1 {
                return Err(Error::InvalidInput(format!(
                    "block has period {}, expected 1",
                    b.c()
                )));
            }
            segments.extend(b.segments().iter().map(|s| s.twist(b.twist())));
        }
        GenericTau::new(segments)
    }
}

impl TryFrom<ExprRepr> for RepExpr {
    type Error = Error;

    fn try_from(r: ExprRepr) -> Result<Self> {
        if r.terminal {
            if r.n != 0 || !r.blocks.is_empty() {
                return Err(Error::InvalidInput(
                    "terminal expression must be empty with n = 0".into(),
                ));
            }
            return Ok(RepExpr::terminal());
        }
        let e = RepExpr::induced(r.blocks)?;
        if e.n != r.n {
            return Err(Error::InvalidInput(format!(
                "declared size {} but blocks sum to {}",
                r.n, e.n
            )));
        }
        Ok(e)
    }
}

impl From<RepExpr> for ExprRepr {
    fn from(e: RepExpr) -> Self {
        ExprRepr {
            n: e.n,
            blocks: e.blocks,
            terminal: e.terminal,
        }
    }
}

/// ρ_c(τ) as an induced expression: one Speh block per tempered cluster of
/// τ, each inflated by c, exponents carried as twists. ρ_1(τ) = τ, and the
/// construction commutes with |det|^s-twists by definition.
pub fn build_rho_c(tau: &GenericTau, c: usize, mode: Mode) -> Result<RepExpr> {
    if c == 0 {
        return Err(Error::InvalidInput("Speh period c must be positive".into()));
    }
    if mode == Mode::Archimedean {
        if let Some(bad) = tau.segments().iter().find(|s| s.rank() != 1) {
            return Err(Error::NotCharacterData(format!(
                "segment '{}' has rank {}",
                bad.cuspidal().name(),
                bad.rank()
            )));
        }
    }
    let blocks = tau
        .clusters()
        .into_iter()
        .map(|(a, segs)| SpehBlock::new(segs, c, a))
        .collect::<Result<Vec<_>>>()?;
    RepExpr::induced(blocks)
}

/// The highest Bernstein–Zelevinsky derivative of an induced expression with
/// uniform period c: the order is the total cluster rank k = Σ k_i, and the
/// result replaces every block |det|^{a}ρ_c(cluster) by
/// |det|^{a−1/2}ρ_{c−1}(cluster), reaching the dimension-one terminal at
/// c = 1.
pub fn highest_derivative(e: &RepExpr) -> Result<(usize, RepExpr)> {
    if e.is_terminal() {
        return Err(Error::AlreadyTerminal);
    }
    let c = e.blocks()[0].c();
    if e.blocks().iter().any(|b| b.c() != c) {
        return Err(Error::InvalidInput(
            "blocks carry different periods; the blockwise derivative rule needs one c".into(),
        ));
    }
    let order: usize = e.blocks().iter().map(SpehBlock::cluster_rank).sum();
    if c == 1 {
        return Ok((order, RepExpr::terminal()));
    }
    let half = Rational64::new(1, 2);
    let blocks = e
        .blocks()
        .iter()
        .map(|b| SpehBlock::new(b.segments().to_vec(), c - 1, b.twist() - half))
        .collect::<Result<Vec<_>>>()?;
    Ok((order, RepExpr::induced(blocks)?))
}

/// The chain of highest derivatives from an expression down to the
/// dimension-one terminal, recording each order taken.
#[derive(Clone, Debug, Serialize)]
pub struct DerivativeTrace {
    steps: Vec<(usize, RepExpr)>,
    terminal: bool,
}

impl DerivativeTrace {
    pub fn steps(&self) -> &[(usize, RepExpr)] {
        &self.steps
    }

    pub fn orders(&self) -> Vec<usize> {
        self.steps.iter().map(|(o, _)| *o).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reached_terminal(&self) -> bool {
        self.terminal
    }

    /// Total size removed across the chain; equals the ambient size of the
    /// starting expression when the trace is complete.
    pub fn total_order(&self) -> usize {
        self.orders().iter().sum()
    }
}

/// Iterates [`highest_derivative`] to the terminal. For ρ_c(τ) with τ of
/// rank k the trace is exactly c steps, each of order k — the derivative
/// shadow of "supported on (k^c)".
pub fn derivative_trace(e: &RepExpr) -> Result<DerivativeTrace> {
    let mut steps = Vec::new();
    let mut cur = e.clone();
    while !cur.is_terminal() {
        let (order, next) = highest_derivative(&cur)?;
        steps.push((order, next.clone()));
        cur = next;
    }
    Ok(DerivativeTrace {
        steps,
        terminal: cur.is_terminal(),
    })
}

/// Whether the derivative trace of `e` consists of exactly c steps, each of
/// order k. Expressions whose trace cannot be computed (mixed periods) are
/// not (k,c)-supported.
pub fn is_kc_supported(e: &RepExpr, k: usize, c: usize) -> bool {
    match derivative_trace(e) {
        Ok(trace) => {
            trace.reached_terminal()
                && trace.len() == c
                && trace.orders().iter().all(|&o| o == k)
        }
        Err(_) => false,
    }
}

/// The contragredient-composed-with-reversal dual on induced expressions:
/// blocks in reverse order, each block dualized (dual cuspidals, negated
/// twist). An involution; on ρ_c(τ) it agrees with ρ_c(τ^∨) up to the
/// permitted block permutations.
pub fn dual_star(e: &RepExpr) -> RepExpr {
    if e.is_terminal() {
        return e.clone();
    }
    let blocks: Vec<SpehBlock> = e.blocks().iter().rev().map(SpehBlock::dual).collect();
    RepExpr {
        n: e.n(),
        blocks,
        terminal: false,
    }
}

/// Normal form under the permitted block permutations: blocks sorted by
/// twist (descending), blocks of equal twist and period merged into one
/// cluster whose segments are sorted by a fixed total order. Two
/// expressions related by permuting equal-twist blocks get equal canonical
/// forms; distinct twists keep their forced Langlands order.
pub fn canonical_form(e: &RepExpr) -> RepExpr {
    if e.is_terminal() {
        return e.clone();
    }
    let mut groups: BTreeMap<(Reverse<Rational64>, usize), Vec<EssSqInt>> = BTreeMap::new();
    for b in e.blocks() {
        groups
            .entry((Reverse(b.twist()), b.c()))
            .or_default()
            .extend(b.segments().iter().cloned());
    }
    let blocks: Vec<SpehBlock> = groups
        .into_iter()
        .map(|((Reverse(twist), c), mut segments)| {
            segments.sort();
            SpehBlock { segments, c, twist }
        })
        .collect();
    RepExpr {
        n: e.n(),
        blocks,
        terminal: false,
    }
}

/// The central character of an induced expression, as a formal product of
/// cuspidal central-character symbols with integer multiplicities together
/// with a single rational |·|-exponent.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CentralCharacter {
    symbols: BTreeMap<String, i64>,
    exponent: String,
}

impl CentralCharacter {
    pub fn symbols(&self) -> &BTreeMap<String, i64> {
        &self.symbols
    }

    pub fn exponent(&self) -> Rational64 {
        self.exponent.parse().expect("stored canonically")
    }
}

/// Computes the central character: each segment (cuspidal τ_0 of rank r,
/// length d) inside a block of period c and twist a contributes ω_{τ_0}^{c·d}
/// and |·|-exponent r·d·c·a; the half-integer ladders internal to a Speh
/// block are symmetric and contribute nothing.
pub fn central_character(e: &RepExpr) -> CentralCharacter {
    let mut symbols: BTreeMap<String, i64> = BTreeMap::new();
    let mut exponent = Rational64::zero();
    for b in e.blocks() {
        for s in b.segments() {
            let mult = (b.c() * s.length()) as i64;
            *symbols.entry(s.cuspidal().name().to_string()).or_insert(0) += mult;
            let size = Rational64::from((s.rank() * b.c()) as i64);
            exponent += size * b.twist();
        }
    }
    symbols.retain(|_, m| *m != 0);
    CentralCharacter {
        symbols,
        exponent: exponent.to_string(),
    }
}
