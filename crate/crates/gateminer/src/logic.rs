//! Truth tables, function codification, and exact two-level minimization.
//!
//! A function on `n` inputs is a bit-vector of length `2^n` indexed by the
//! input ordinal (the unsigned value of the input bit-string, leftmost
//! character = input A). The function ID packs that vector into an integer
//! with ordinal 0 in the least-significant bit, so NAND on two inputs is 7.
//!
//! Minimization is Quine-McCluskey prime-implicant generation followed by
//! Petrick exact cover selection, minimizing term count first and total
//! literal count second. A configurable cap on Petrick product terms guards
//! pathological tables; past the cap a greedy cover is returned with
//! `heuristic = true`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Widest table the toolkit handles (2^16 rows). The experiments top out at 8.
pub const MAX_INPUTS: usize = 16;

/// Default cap on Petrick product terms before falling back to a greedy cover.
pub const DEFAULT_COVER_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogicError {
    #[error("bit string length {got} does not match 2^{n_inputs} = {want}")]
    LengthMismatch {
        n_inputs: usize,
        got: usize,
        want: usize,
    },
    #[error("input count {0} outside supported range 1..={MAX_INPUTS}")]
    UnsupportedWidth(usize),
    #[error("bit string may contain only '0' and '1', found {0:?}")]
    BadBitChar(char),
    #[error("assignment width {got}, expected {want}")]
    AssignmentWidth { got: usize, want: usize },
    #[error("function id {0} out of range for {1} inputs")]
    IdOutOfRange(String, usize),
    #[error("literal variable index {var} out of range for {n_inputs} inputs")]
    VariableOutOfRange { var: usize, n_inputs: usize },
    #[error("contradictory term: variable {0} appears plain and negated")]
    ContradictoryTerm(usize),
}

fn check_width(n_inputs: usize) -> Result<(), LogicError> {
    if n_inputs == 0 || n_inputs > MAX_INPUTS {
        return Err(LogicError::UnsupportedWidth(n_inputs));
    }
    Ok(())
}

/// Parse a bit string ("1110") into booleans, index = character position.
pub fn parse_bits(bits: &str) -> Result<Vec<bool>, LogicError> {
    bits.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(LogicError::BadBitChar(other)),
        })
        .collect()
}

/// Complete single-output Boolean function, outputs indexed by input ordinal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n_inputs: usize,
    outputs: Vec<bool>,
}

impl TruthTable {
    pub fn from_outputs(n_inputs: usize, outputs: Vec<bool>) -> Result<Self, LogicError> {
        check_width(n_inputs)?;
        let want = 1usize << n_inputs;
        if outputs.len() != want {
            return Err(LogicError::LengthMismatch {
                n_inputs,
                got: outputs.len(),
                want,
            });
        }
        Ok(Self { n_inputs, outputs })
    }

    /// `bits[i]` is the output for input ordinal `i`.
    pub fn from_bits(n_inputs: usize, bits: &str) -> Result<Self, LogicError> {
        Self::from_outputs(n_inputs, parse_bits(bits)?)
    }

    /// Inverse of [`TruthTable::function_id`].
    pub fn from_id(n_inputs: usize, id: &BigUint) -> Result<Self, LogicError> {
        check_width(n_inputs)?;
        let rows = 1usize << n_inputs;
        if id.bits() > rows as u64 {
            return Err(LogicError::IdOutOfRange(id.to_str_radix(16), n_inputs));
        }
        let outputs = (0..rows).map(|i| id.bit(i as u64)).collect();
        Self::from_outputs(n_inputs, outputs)
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn outputs(&self) -> &[bool] {
        &self.outputs
    }

    pub fn output(&self, ordinal: u32) -> bool {
        self.outputs[ordinal as usize]
    }

    pub fn bits_string(&self) -> String {
        self.outputs
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Ordinal-0 row is the least-significant bit.
    pub fn function_id(&self) -> FunctionId {
        let mut value = BigUint::zero();
        for (i, &b) in self.outputs.iter().enumerate() {
            if b {
                value.set_bit(i as u64, true);
            }
        }
        FunctionId { value }
    }
}

/// Integer codification of a truth table (decimal in reports for narrow
/// functions, hex for wide ones where the value reaches 2^256).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionId {
    value: BigUint,
}

impl FunctionId {
    pub fn from_value(value: BigUint) -> Self {
        Self { value }
    }

    pub fn from_hex(hex: &str) -> Option<Self> {
        BigUint::parse_bytes(hex.as_bytes(), 16).map(|value| Self { value })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Lowercase hex, no leading zeros (except "0").
    pub fn hex(&self) -> String {
        self.value.to_str_radix(16)
    }

    pub fn decimal(&self) -> String {
        self.value.to_str_radix(10)
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hex())
    }
}

/// Variable display name: 0 -> A, 1 -> B, ...
pub fn var_name(variable: usize) -> char {
    (b'A' + variable as u8) as char
}

/// One possibly-negated variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn plain(&self) -> String {
        if self.negated {
            format!("{}'", var_name(self.variable))
        } else {
            var_name(self.variable).to_string()
        }
    }

    pub fn tex(&self) -> String {
        if self.negated {
            format!("\\overline{{{}}}", var_name(self.variable))
        } else {
            var_name(self.variable).to_string()
        }
    }

    fn holds(&self, n_inputs: usize, ordinal: u32) -> bool {
        let bit = (ordinal >> (n_inputs - 1 - self.variable)) & 1 == 1;
        bit != self.negated
    }
}

/// Conjunction of literals, at most one per variable.
///
/// Stored canonically: positive literals alphabetically, then negated
/// literals alphabetically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductTerm {
    literals: Vec<Literal>,
}

impl ProductTerm {
    pub fn new(mut literals: Vec<Literal>, n_inputs: usize) -> Result<Self, LogicError> {
        for lit in &literals {
            if lit.variable >= n_inputs {
                return Err(LogicError::VariableOutOfRange {
                    var: lit.variable,
                    n_inputs,
                });
            }
        }
        literals.sort();
        literals.dedup();
        for pair in literals.windows(2) {
            if pair[0].variable == pair[1].variable {
                return Err(LogicError::ContradictoryTerm(pair[0].variable));
            }
        }
        // canonical display order: positives first, each group alphabetical
        literals.sort_by_key(|l| (l.negated, l.variable));
        Ok(Self { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn literal_count(&self) -> usize {
        self.literals.len()
    }

    pub fn plain(&self) -> String {
        self.literals
            .iter()
            .map(Literal::plain)
            .collect::<Vec<_>>()
            .join("·")
    }

    pub fn tex(&self) -> String {
        self.literals
            .iter()
            .map(Literal::tex)
            .collect::<Vec<_>>()
            .join(" \\cdot ")
    }

    pub fn eval_ordinal(&self, n_inputs: usize, ordinal: u32) -> bool {
        self.literals.iter().all(|l| l.holds(n_inputs, ordinal))
    }

    /// Lexicographic key over the display literal sequence; a plain
    /// variable sorts before its negation, so `A·B` precedes `A'·B'`.
    fn sort_key(&self) -> Vec<(usize, bool)> {
        self.literals
            .iter()
            .map(|l| (l.variable, l.negated))
            .collect()
    }
}

/// Output rendering for [`SopExpression::format`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SopStyle {
    Plain,
    Tex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SopKind {
    Constant(bool),
    Terms(Vec<ProductTerm>),
}

/// Minimized sum-of-products form of a truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SopExpression {
    n_inputs: usize,
    kind: SopKind,
    heuristic: bool,
}

impl SopExpression {
    pub fn constant(n_inputs: usize, value: bool) -> Result<Self, LogicError> {
        check_width(n_inputs)?;
        Ok(Self {
            n_inputs,
            kind: SopKind::Constant(value),
            heuristic: false,
        })
    }

    pub fn from_terms(n_inputs: usize, terms: Vec<ProductTerm>) -> Result<Self, LogicError> {
        check_width(n_inputs)?;
        if terms.is_empty() {
            return Self::constant(n_inputs, false);
        }
        let mut sop = Self {
            n_inputs,
            kind: SopKind::Terms(terms),
            heuristic: false,
        };
        sop.sort_terms();
        Ok(sop)
    }

    fn sort_terms(&mut self) {
        if let SopKind::Terms(terms) = &mut self.kind {
            terms.sort_by(|a, b| {
                a.literal_count()
                    .cmp(&b.literal_count())
                    .then_with(|| a.sort_key().cmp(&b.sort_key()))
            });
            terms.dedup();
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn kind(&self) -> &SopKind {
        &self.kind
    }

    /// True when Petrick exact cover was abandoned for the greedy fallback.
    pub fn is_heuristic(&self) -> bool {
        self.heuristic
    }

    /// Product-term count; constants count 0.
    pub fn term_count(&self) -> usize {
        match &self.kind {
            SopKind::Constant(_) => 0,
            SopKind::Terms(t) => t.len(),
        }
    }

    pub fn literal_count(&self) -> usize {
        match &self.kind {
            SopKind::Constant(_) => 0,
            SopKind::Terms(t) => t.iter().map(ProductTerm::literal_count).sum(),
        }
    }

    pub fn eval_ordinal(&self, ordinal: u32) -> bool {
        match &self.kind {
            SopKind::Constant(v) => *v,
            SopKind::Terms(terms) => terms.iter().any(|t| t.eval_ordinal(self.n_inputs, ordinal)),
        }
    }

    /// OR over terms of AND over literals under the assignment bit-string
    /// (leftmost character = input A).
    pub fn evaluate(&self, assignment: &str) -> Result<bool, LogicError> {
        if assignment.len() != self.n_inputs {
            return Err(LogicError::AssignmentWidth {
                got: assignment.len(),
                want: self.n_inputs,
            });
        }
        let bits = parse_bits(assignment)?;
        let mut ordinal = 0u32;
        for b in bits {
            ordinal = (ordinal << 1) | b as u32;
        }
        Ok(self.eval_ordinal(ordinal))
    }

    /// Full table of the expression, by direct evaluation.
    pub fn truth_table(&self) -> TruthTable {
        let rows = 1usize << self.n_inputs;
        let outputs = (0..rows).map(|i| self.eval_ordinal(i as u32)).collect();
        TruthTable::from_outputs(self.n_inputs, outputs).expect("valid by construction")
    }

    /// Canonical text: terms sorted by literal count then lexicographically;
    /// within a term positives alphabetical then negated alphabetical;
    /// multi-literal terms parenthesized when the sum has several terms.
    pub fn format(&self, style: SopStyle) -> String {
        match &self.kind {
            SopKind::Constant(false) => "0".to_string(),
            SopKind::Constant(true) => "1".to_string(),
            SopKind::Terms(terms) => {
                let parenthesize = terms.len() > 1;
                terms
                    .iter()
                    .map(|t| {
                        let body = match style {
                            SopStyle::Plain => t.plain(),
                            SopStyle::Tex => t.tex(),
                        };
                        if parenthesize && t.literal_count() > 1 {
                            format!("({body})")
                        } else {
                            body
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        }
    }
}

// --- JSON wire form ----------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct LiteralJson {
    var: String,
    neg: bool,
}

/// Serialized SOP: `{n_inputs, id_hex, terms:[[{"var":"A","neg":false},...]], heuristic}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct SopJson {
    pub n_inputs: usize,
    pub id_hex: String,
    terms: Vec<Vec<LiteralJson>>,
    pub heuristic: bool,
    #[serde(default)]
    pub constant: Option<u8>,
}

impl SopJson {
    pub fn from_sop(sop: &SopExpression) -> Self {
        let (terms, constant) = match sop.kind() {
            SopKind::Constant(v) => (Vec::new(), Some(*v as u8)),
            SopKind::Terms(terms) => (
                terms
                    .iter()
                    .map(|t| {
                        t.literals()
                            .iter()
                            .map(|l| LiteralJson {
                                var: var_name(l.variable).to_string(),
                                neg: l.negated,
                            })
                            .collect()
                    })
                    .collect(),
                None,
            ),
        };
        Self {
            n_inputs: sop.n_inputs(),
            id_hex: sop.truth_table().function_id().hex(),
            terms,
            heuristic: sop.is_heuristic(),
            constant,
        }
    }

    pub fn to_sop(&self) -> Result<SopExpression, LogicError> {
        if let Some(c) = self.constant {
            return SopExpression::constant(self.n_inputs, c != 0);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let lits = t
                .iter()
                .map(|l| {
                    let var = l.var.chars().next().map(|c| c as usize - 'A' as usize);
                    match var {
                        Some(v) if v < self.n_inputs && l.var.len() == 1 => Ok(Literal {
                            variable: v,
                            negated: l.neg,
                        }),
                        _ => Err(LogicError::VariableOutOfRange {
                            var: usize::MAX,
                            n_inputs: self.n_inputs,
                        }),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            terms.push(ProductTerm::new(lits, self.n_inputs)?);
        }
        let mut sop = SopExpression::from_terms(self.n_inputs, terms)?;
        sop.heuristic = self.heuristic;
        Ok(sop)
    }
}

// --- Quine-McCluskey ---------------------------------------------------------

/// Cube over the ordinal bit positions: `dashes` marks don't-care positions,
/// `value` holds the fixed bits (dash positions zeroed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Implicant {
    value: u32,
    dashes: u32,
}

impl Implicant {
    fn covers(&self, minterm: u32) -> bool {
        minterm & !self.dashes == self.value
    }

    fn to_term(self, n_inputs: usize) -> ProductTerm {
        let mut lits = Vec::new();
        for var in 0..n_inputs {
            let pos = n_inputs - 1 - var;
            if self.dashes >> pos & 1 == 0 {
                lits.push(Literal {
                    variable: var,
                    negated: self.value >> pos & 1 == 0,
                });
            }
        }
        ProductTerm::new(lits, n_inputs).expect("one literal per variable")
    }

    fn literal_count(&self, n_inputs: usize) -> usize {
        n_inputs - self.dashes.count_ones() as usize
    }
}

fn prime_implicants(minterms: &[u32]) -> Vec<Implicant> {
    let mut current: BTreeSet<Implicant> = minterms
        .iter()
        .map(|&m| Implicant {
            value: m,
            dashes: 0,
        })
        .collect();
    let mut primes = BTreeSet::new();

    while !current.is_empty() {
        let cubes: Vec<Implicant> = current.iter().copied().collect();
        let mut combined = vec![false; cubes.len()];
        let mut next = BTreeSet::new();
        for i in 0..cubes.len() {
            for j in i + 1..cubes.len() {
                if cubes[i].dashes != cubes[j].dashes {
                    continue;
                }
                let diff = cubes[i].value ^ cubes[j].value;
                if diff.count_ones() == 1 {
                    combined[i] = true;
                    combined[j] = true;
                    next.insert(Implicant {
                        value: cubes[i].value & !diff,
                        dashes: cubes[i].dashes | diff,
                    });
                }
            }
        }
        for (cube, was_combined) in cubes.iter().zip(&combined) {
            if !was_combined {
                primes.insert(*cube);
            }
        }
        current = next;
    }
    primes.into_iter().collect()
}

// --- Petrick cover selection -------------------------------------------------

/// Set of prime indices as a bitset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PrimeSet {
    words: Vec<u64>,
}

impl PrimeSet {
    fn empty(n_primes: usize) -> Self {
        Self {
            words: vec![0; n_primes.div_ceil(64)],
        }
    }

    fn with(&self, idx: usize) -> Self {
        let mut next = self.clone();
        next.words[idx / 64] |= 1 << (idx % 64);
        next
    }

    fn contains(&self, idx: usize) -> bool {
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, word) in self.words.iter().enumerate() {
            let mut bits = *word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Absorption while the product list is small; plain dedup past this size.
const ABSORPTION_LIMIT: usize = 4096;

/// All minimum-cardinality selections from the uncovered-minterm chart, or
/// None when the product-term cap is exceeded.
fn petrick_min_covers(sums: &[Vec<usize>], n_primes: usize, cap: usize) -> Option<Vec<PrimeSet>> {
    let mut products = vec![PrimeSet::empty(n_primes)];
    for sum in sums {
        // skip sums already satisfied by a chosen prime
        let mut next: Vec<PrimeSet> = Vec::new();
        for p in &products {
            if sum.iter().any(|&idx| p.contains(idx)) {
                next.push(p.clone());
            } else {
                for &idx in sum {
                    next.push(p.with(idx));
                }
            }
        }
        next.sort();
        next.dedup();
        if next.len() <= ABSORPTION_LIMIT {
            next.sort_by_key(PrimeSet::len);
            let mut kept: Vec<PrimeSet> = Vec::new();
            for cand in next {
                if !kept.iter().any(|k| k.is_subset(&cand)) {
                    kept.push(cand);
                }
            }
            next = kept;
        }
        if next.len() > cap {
            return None;
        }
        products = next;
    }
    let best = products.iter().map(PrimeSet::len).min()?;
    Some(products.into_iter().filter(|p| p.len() == best).collect())
}

fn greedy_cover(minterms: &[u32], primes: &[Implicant], n_inputs: usize) -> Vec<usize> {
    let mut uncovered: BTreeSet<u32> = minterms.iter().copied().collect();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let mut best: Option<(usize, usize, usize)> = None; // (covered, -literals proxy, idx)
        for (idx, p) in primes.iter().enumerate() {
            if chosen.contains(&idx) {
                continue;
            }
            let covered = uncovered.iter().filter(|&&m| p.covers(m)).count();
            if covered == 0 {
                continue;
            }
            let lits = p.literal_count(n_inputs);
            let better = match best {
                None => true,
                Some((bc, bl, _)) => covered > bc || (covered == bc && lits < bl),
            };
            if better {
                best = Some((covered, lits, idx));
            }
        }
        let (_, _, idx) = best.expect("primes cover every minterm");
        uncovered.retain(|&m| !primes[idx].covers(m));
        chosen.push(idx);
    }
    chosen
}

#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    /// Abort Petrick exact cover past this many product terms and fall back
    /// to a greedy cover marked `heuristic`.
    pub cover_cap: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            cover_cap: DEFAULT_COVER_CAP,
        }
    }
}

/// Exact minimum two-level cover: fewest product terms, then fewest total
/// literals, ties broken by lexicographically smallest formatted string.
pub fn minimize(tt: &TruthTable) -> SopExpression {
    minimize_with(tt, MinimizeOptions::default())
}

pub fn minimize_with(tt: &TruthTable, opts: MinimizeOptions) -> SopExpression {
    let n = tt.n_inputs();
    let minterms: Vec<u32> = (0..tt.outputs().len() as u32)
        .filter(|&i| tt.output(i))
        .collect();
    if minterms.is_empty() {
        return SopExpression::constant(n, false).expect("valid width");
    }
    if minterms.len() == tt.outputs().len() {
        return SopExpression::constant(n, true).expect("valid width");
    }

    let primes = prime_implicants(&minterms);

    // essential primes: sole cover of some minterm
    let mut essential: BTreeSet<usize> = BTreeSet::new();
    for &m in &minterms {
        let covering: Vec<usize> = primes
            .iter()
            .enumerate()
            .filter(|(_, p)| p.covers(m))
            .map(|(i, _)| i)
            .collect();
        if covering.len() == 1 {
            essential.insert(covering[0]);
        }
    }
    let uncovered: Vec<u32> = minterms
        .iter()
        .copied()
        .filter(|&m| !essential.iter().any(|&i| primes[i].covers(m)))
        .collect();

    let mut heuristic = false;
    let chosen: Vec<usize> = if uncovered.is_empty() {
        essential.iter().copied().collect()
    } else {
        let sums: Vec<Vec<usize>> = uncovered
            .iter()
            .map(|&m| {
                primes
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.covers(m))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        match petrick_min_covers(&sums, primes.len(), opts.cover_cap) {
            Some(covers) => {
                // min terms is fixed; pick min literal count, then the
                // canonically smallest expression
                type ExprKey = (usize, Vec<(usize, Vec<(usize, bool)>)>);
                let mut best: Option<(ExprKey, Vec<usize>)> = None;
                for cover in covers {
                    let mut all: Vec<usize> = essential.iter().copied().collect();
                    all.extend(cover.indices());
                    all.sort_unstable();
                    all.dedup();
                    let terms: Vec<ProductTerm> =
                        all.iter().map(|&i| primes[i].to_term(n)).collect();
                    let sop = SopExpression::from_terms(n, terms).expect("valid terms");
                    let term_keys = match sop.kind() {
                        SopKind::Terms(ts) => ts
                            .iter()
                            .map(|t| (t.literal_count(), t.sort_key()))
                            .collect(),
                        SopKind::Constant(_) => Vec::new(),
                    };
                    let key: ExprKey = (sop.literal_count(), term_keys);
                    if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
                        best = Some((key, all));
                    }
                }
                best.expect("at least one cover").1
            }
            None => {
                heuristic = true;
                let mut all: Vec<usize> = essential.iter().copied().collect();
                let remaining: Vec<u32> = uncovered;
                all.extend(greedy_cover(&remaining, &primes, n));
                all.sort_unstable();
                all.dedup();
                all
            }
        }
    };

    let terms: Vec<ProductTerm> = chosen.iter().map(|&i| primes[i].to_term(n)).collect();
    let mut sop = SopExpression::from_terms(n, terms).expect("valid terms");
    sop.heuristic = heuristic;
    sop
}

/// `outputs[i] = bits[i]`; convenience named after the pipeline step.
pub fn table_from_bits(n_inputs: usize, bits: &str) -> Result<TruthTable, LogicError> {
    TruthTable::from_bits(n_inputs, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimize_bits(n: usize, bits: &str) -> SopExpression {
        minimize(&TruthTable::from_bits(n, bits).unwrap())
    }

    #[test]
    fn nand_id_is_seven() {
        let tt = TruthTable::from_bits(2, "1110").unwrap();
        assert_eq!(tt.function_id().decimal(), "7");
        assert_eq!(tt.function_id().hex(), "7");
    }

    #[test]
    fn xor_id_is_six() {
        let tt = TruthTable::from_bits(2, "0110").unwrap();
        assert_eq!(tt.function_id().decimal(), "6");
    }

    #[test]
    fn constant_one_id() {
        let tt = TruthTable::from_bits(2, "1111").unwrap();
        assert_eq!(tt.function_id().decimal(), "15");
    }

    #[test]
    fn id_round_trip() {
        for v in 0u32..16 {
            let tt = TruthTable::from_id(2, &BigUint::from(v)).unwrap();
            assert_eq!(tt.function_id().value(), &BigUint::from(v));
        }
    }

    #[test]
    fn bad_bit_length_rejected() {
        assert_eq!(
            TruthTable::from_bits(2, "111"),
            Err(LogicError::LengthMismatch {
                n_inputs: 2,
                got: 3,
                want: 4
            })
        );
    }

    #[test]
    fn nand_minimizes_to_two_complements() {
        let sop = minimize_bits(2, "1110");
        assert_eq!(sop.format(SopStyle::Plain), "A' + B'");
        assert_eq!(sop.format(SopStyle::Tex), "\\overline{A} + \\overline{B}");
        assert!(!sop.is_heuristic());
    }

    #[test]
    fn xor_minimizes_to_two_terms() {
        let sop = minimize_bits(2, "0110");
        assert_eq!(sop.format(SopStyle::Plain), "(A·B') + (B·A')");
        assert_eq!(
            sop.format(SopStyle::Tex),
            "(A \\cdot \\overline{B}) + (B \\cdot \\overline{A})"
        );
    }

    #[test]
    fn constants_minimize_to_constants() {
        assert_eq!(minimize_bits(2, "0000").format(SopStyle::Plain), "0");
        assert_eq!(minimize_bits(2, "1111").format(SopStyle::Plain), "1");
        assert_eq!(minimize_bits(2, "0000").term_count(), 0);
    }

    #[test]
    fn de_morgan_spot_check() {
        // complement of AND is NAND
        let and = TruthTable::from_bits(2, "0001").unwrap();
        let complement: Vec<bool> = and.outputs().iter().map(|&b| !b).collect();
        let tt = TruthTable::from_outputs(2, complement).unwrap();
        assert_eq!(minimize(&tt).format(SopStyle::Plain), "A' + B'");
    }

    #[test]
    fn minimize_is_sound_on_all_two_input_tables() {
        for v in 0u32..16 {
            let tt = TruthTable::from_id(2, &BigUint::from(v)).unwrap();
            let sop = minimize(&tt);
            assert_eq!(sop.truth_table(), tt, "table {v}");
        }
    }

    #[test]
    fn table2_function_evaluates() {
        // (A·B') + (B·A'·C') + (B·C'·D') on A=1,B=0,C=1,D=1
        let n = 4;
        let lit = |v: usize, neg: bool| Literal {
            variable: v,
            negated: neg,
        };
        let terms = vec![
            ProductTerm::new(vec![lit(0, false), lit(1, true)], n).unwrap(),
            ProductTerm::new(vec![lit(1, false), lit(0, true), lit(2, true)], n).unwrap(),
            ProductTerm::new(vec![lit(1, false), lit(2, true), lit(3, true)], n).unwrap(),
        ];
        let sop = SopExpression::from_terms(n, terms).unwrap();
        assert!(sop.evaluate("1011").unwrap());
        assert!(!sop.evaluate("1111").unwrap());
    }

    #[test]
    fn term_ordering_by_literal_count_then_lex() {
        let n = 4;
        let lit = |v: usize, neg: bool| Literal {
            variable: v,
            negated: neg,
        };
        let terms = vec![
            ProductTerm::new(vec![lit(1, false), lit(2, true), lit(3, true)], n).unwrap(),
            ProductTerm::new(vec![lit(0, false), lit(1, true)], n).unwrap(),
            ProductTerm::new(vec![lit(1, false), lit(0, true), lit(2, true)], n).unwrap(),
        ];
        let sop = SopExpression::from_terms(n, terms).unwrap();
        assert_eq!(
            sop.format(SopStyle::Plain),
            "(A·B') + (B·A'·C') + (B·C'·D')"
        );
    }

    #[test]
    fn sop_json_round_trip() {
        let sop = minimize_bits(2, "0110");
        let json = serde_json::to_string(&SopJson::from_sop(&sop)).unwrap();
        let back: SopJson = serde_json::from_str(&json).unwrap();
        assert_eq!(
            back.to_sop().unwrap().format(SopStyle::Plain),
            "(A·B') + (B·A')"
        );
        assert_eq!(back.id_hex, "6");
    }

    #[test]
    fn contradictory_term_rejected() {
        let lits = vec![
            Literal {
                variable: 0,
                negated: false,
            },
            Literal {
                variable: 0,
                negated: true,
            },
        ];
        assert_eq!(
            ProductTerm::new(lits, 2),
            Err(LogicError::ContradictoryTerm(0))
        );
    }

    #[test]
    fn heuristic_fallback_is_sound() {
        // parity with a tiny cap forces the greedy path
        let tt = TruthTable::from_bits(4, "0110100110010110").unwrap();
        let sop = minimize_with(&tt, MinimizeOptions { cover_cap: 1 });
        assert_eq!(sop.truth_table(), tt);
    }
}
