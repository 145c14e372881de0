//! Charged {0,1}-sequences on the integers or on the half-integers, the
//! moving operators `e_i`/`f_i`, their counting statistics, and formal
//! linear combinations of sequences.
//!
//! Positions are stored doubled: an integer `i` is `2i`, a half-integer
//! `i` is the odd number `2i`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{Coeff, LaurentPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Support {
    #[serde(rename = "INT")]
    Int,
    #[serde(rename = "HALF")]
    Half,
}

impl Support {
    /// Parity of doubled positions in this lattice.
    pub fn parity(self) -> i64 {
        match self {
            Support::Int => 0,
            Support::Half => 1,
        }
    }

    pub fn of_doubled(d: i64) -> Support {
        if d.rem_euclid(2) == 0 {
            Support::Int
        } else {
            Support::Half
        }
    }

    /// The lattice where the moving operators for this support are indexed.
    pub fn dual(self) -> Support {
        match self {
            Support::Int => Support::Half,
            Support::Half => Support::Int,
        }
    }

    /// Doubled position of the smallest strictly positive lattice point.
    pub fn first_positive(self) -> i64 {
        match self {
            Support::Int => 2,
            Support::Half => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Support::Int => "INT",
            Support::Half => "HALF",
        }
    }
}

/// An exact integer or half-integer, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub doubled: i64,
}

impl Position {
    pub fn from_doubled(doubled: i64) -> Self {
        Position { doubled }
    }

    pub fn int(i: i64) -> Self {
        Position { doubled: 2 * i }
    }

    /// `i + 1/2`
    pub fn half(i: i64) -> Self {
        Position { doubled: 2 * i + 1 }
    }

    pub fn support(self) -> Support {
        Support::of_doubled(self.doubled)
    }

    /// Parses `"3"`, `"-2"`, `"7/2"`, `"-1/2"` or `"2.5"`.
    pub fn parse(s: &str) -> Result<Self> {
        parse_doubled(s).map(Position::from_doubled)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_doubled(self.doubled))
    }
}

/// Formats a doubled value as `"n"` or `"p/2"`.
pub fn format_doubled(d: i64) -> String {
    if d % 2 == 0 {
        (d / 2).to_string()
    } else {
        format!("{d}/2")
    }
}

/// Parses an integer, a `p/2` fraction or a decimal ending in `.5` into a doubled value.
pub fn parse_doubled(s: &str) -> Result<i64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an integer or half-integer: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        return match den {
            1 => Ok(2 * num),
            2 => Ok(num),
            _ => Err(bad()),
        };
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let w: i64 = whole.parse().map_err(|_| bad())?;
        return match frac.trim_end_matches('0') {
            "" => Ok(2 * w),
            "5" => Ok(2 * w + if neg { -1 } else { 1 }),
            _ => Err(bad()),
        };
    }
    s.parse::<i64>().map(|x| 2 * x).map_err(|_| bad())
}

/// A {0,1}-sequence that is 1 far to the left and 0 far to the right.
///
/// `a(i) = 1` for `i < left`, `bits[k]` at `left + k` (in lattice steps),
/// and `0` beyond the window. Canonical form: `bits` is empty or starts
/// with 0 and ends with 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequence {
    support: Support,
    left: i64,
    bits: Vec<bool>,
}

impl Sequence {
    /// Builds and canonicalizes. `left` is doubled and must match `support`.
    pub fn new(support: Support, left: i64, bits: Vec<bool>) -> Result<Self> {
        if left.rem_euclid(2) != support.parity() {
            return Err(Error::SupportMismatch(format!(
                "left {} is not a {} position",
                format_doubled(left),
                support.name()
            )));
        }
        Ok(Self::raw(support, left, bits))
    }

    fn raw(support: Support, mut left: i64, bits: Vec<bool>) -> Self {
        let start = bits.iter().take_while(|b| **b).count();
        let end = bits.iter().rposition(|b| *b).map_or(start, |p| p + 1).max(start);
        left += 2 * start as i64;
        let bits = bits[start..end].to_vec();
        Sequence { support, left, bits }
    }

    /// Parses a window given as a string of `0`/`1`.
    pub fn from_bit_str(support: Support, left: i64, bits: &str) -> Result<Self> {
        let bits = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bad bit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(support, left, bits)
    }

    /// The sequence with 1 exactly at positions `< boundary` (doubled).
    pub fn step(support: Support, boundary: i64) -> Result<Self> {
        Self::new(support, boundary, Vec::new())
    }

    /// The charge-zero vacuum: 1 at all non-positive positions.
    pub fn vacuum(support: Support) -> Self {
        Self::raw(support, support.first_positive(), Vec::new())
    }

    /// 1 at every position `< boundary` and at each of `ones` (all doubled).
    pub fn from_ones(support: Support, boundary: i64, ones: &[i64]) -> Result<Self> {
        if boundary.rem_euclid(2) != support.parity()
            || ones.iter().any(|o| o.rem_euclid(2) != support.parity())
        {
            return Err(Error::SupportMismatch("position parity".into()));
        }
        let hi = ones.iter().copied().filter(|&o| o >= boundary).max().unwrap_or(boundary - 2);
        let len = ((hi - boundary) / 2 + 1).max(0) as usize;
        let mut bits = vec![false; len];
        for &o in ones {
            if o >= boundary {
                bits[((o - boundary) / 2) as usize] = true;
            }
        }
        Ok(Self::raw(support, boundary, bits))
    }

    pub fn support(&self) -> Support {
        self.support
    }

    /// Doubled position of the window start.
    pub fn left(&self) -> i64 {
        self.left
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Doubled position just past the window.
    pub fn end(&self) -> i64 {
        self.left + 2 * self.bits.len() as i64
    }

    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
    }

    /// Value at a doubled position of the right parity.
    pub fn at(&self, d: i64) -> bool {
        if d < self.left {
            true
        } else if d >= self.end() {
            false
        } else {
            self.bits[((d - self.left) / 2) as usize]
        }
    }

    pub fn at_position(&self, p: Position) -> Result<bool> {
        if p.support() != self.support {
            return Err(Error::SupportMismatch(format!("position {p} on {} sequence", self.support.name())));
        }
        Ok(self.at(p.doubled))
    }

    /// Number of 1's at positive positions minus number of 0's at
    /// non-positive positions.
    pub fn charge(&self) -> i64 {
        let ones = self.bits.iter().filter(|b| **b).count() as i64;
        ones + (self.left - self.support.first_positive()) / 2
    }

    /// Doubled position of the leftmost 0.
    pub fn leftmost_zero(&self) -> i64 {
        self.bits.iter().position(|b| !*b).map_or(self.end(), |k| self.left + 2 * k as i64)
    }

    /// Ones at doubled positions `>= from`, ascending.
    pub fn ones_from(&self, from: i64) -> Vec<i64> {
        let mut out: Vec<i64> = Vec::new();
        let mut d = from;
        while d < self.left {
            out.push(d);
            d += 2;
        }
        for (k, b) in self.bits.iter().enumerate() {
            let p = self.left + 2 * k as i64;
            if *b && p >= from {
                out.push(p);
            }
        }
        out
    }

    /// `a'(i) = a(i + steps)` where `steps` is doubled.
    pub fn translate(&self, steps_doubled: i64) -> Sequence {
        Sequence { support: self.support, left: self.left - steps_doubled, bits: self.bits.clone() }
    }

    fn check_index(&self, i: i64) -> Result<()> {
        if i.rem_euclid(2) == self.support.parity() {
            return Err(Error::SupportMismatch(format!(
                "index {} does not lie between positions of a {} sequence",
                format_doubled(i),
                self.support.name()
            )));
        }
        Ok(())
    }

    fn set_pair(&self, i: i64, lower: bool, upper: bool) -> Sequence {
        let lo = self.left.min(i - 1);
        let hi = self.end().max(i + 3);
        let len = ((hi - lo) / 2) as usize;
        let mut bits: Vec<bool> = (0..len).map(|k| self.at(lo + 2 * k as i64)).collect();
        bits[((i - 1 - lo) / 2) as usize] = lower;
        bits[((i + 1 - lo) / 2) as usize] = upper;
        Sequence::raw(self.support, lo, bits)
    }

    /// `e_i`: moves the 1 at `i + 1/2` to `i - 1/2`. `i` doubled.
    pub fn move_e(&self, i: i64) -> Result<Option<Sequence>> {
        self.check_index(i)?;
        Ok(self.move_e_unchecked(i))
    }

    /// `f_i`: moves the 1 at `i - 1/2` to `i + 1/2`. `i` doubled.
    pub fn move_f(&self, i: i64) -> Result<Option<Sequence>> {
        self.check_index(i)?;
        Ok(self.move_f_unchecked(i))
    }

    pub(crate) fn move_e_unchecked(&self, i: i64) -> Option<Sequence> {
        if self.at(i + 1) && !self.at(i - 1) {
            Some(self.set_pair(i, true, false))
        } else {
            None
        }
    }

    pub(crate) fn move_f_unchecked(&self, i: i64) -> Option<Sequence> {
        if self.at(i - 1) && !self.at(i + 1) {
            Some(self.set_pair(i, false, true))
        } else {
            None
        }
    }

    /// All indices (doubled, ascending) where `e` resp. `f` acts nontrivially.
    pub fn moves(&self) -> MoveTable {
        let mut e = Vec::new();
        let mut f = Vec::new();
        let n = self.bits.len();
        // scan the window padded with a 1 on the left and a 0 on the right
        let val = |k: usize| -> bool {
            if k == 0 {
                true
            } else if k == n + 1 {
                false
            } else {
                self.bits[k - 1]
            }
        };
        for k in 0..=n {
            let idx = self.left - 1 + 2 * k as i64;
            match (val(k), val(k + 1)) {
                (false, true) => e.push(idx),
                (true, false) => f.push(idx),
                _ => {}
            }
        }
        MoveTable { e, f }
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}|{}]", self.support.name(), format_doubled(self.left), self.bit_string())
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Sequence", 3)?;
        st.serialize_field("support", &self.support)?;
        st.serialize_field("left", &self.left)?;
        st.serialize_field("bits", &self.bit_string())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    E,
    F,
}

/// Which statistic: a single move kind or a signed difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatKind {
    E,
    F,
    EMinusF,
    FMinusE,
}

/// Positions of all admissible `e`- and `f`-moves of one sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTable {
    pub e: Vec<i64>,
    pub f: Vec<i64>,
}

fn same_class(a: i64, b: i64, r: i64) -> bool {
    (a - b).rem_euclid(2 * r) == 0
}

impl MoveTable {
    fn list(&self, k: MoveKind) -> &[i64] {
        match k {
            MoveKind::E => &self.e,
            MoveKind::F => &self.f,
        }
    }

    fn count<P: Fn(i64) -> bool>(&self, kind: StatKind, pred: P) -> i64 {
        let c = |k: MoveKind| self.list(k).iter().filter(|&&x| pred(x)).count() as i64;
        match kind {
            StatKind::E => c(MoveKind::E),
            StatKind::F => c(MoveKind::F),
            StatKind::EMinusF => c(MoveKind::E) - c(MoveKind::F),
            StatKind::FMinusE => c(MoveKind::F) - c(MoveKind::E),
        }
    }

    /// Moves at `j + r, j + 2r, ...` (everything doubled except `r`).
    pub fn right(&self, kind: StatKind, r: i64, j: i64) -> i64 {
        self.count(kind, |k| k > j && same_class(k, j, r))
    }

    /// Moves at `j - r, j - 2r, ...`.
    pub fn left(&self, kind: StatKind, r: i64, j: i64) -> i64 {
        self.count(kind, |k| k < j && same_class(k, j, r))
    }

    /// Moves anywhere in the class of `j` mod `r`.
    pub fn total(&self, kind: StatKind, r: i64, j: i64) -> i64 {
        self.count(kind, |k| same_class(k, j, r))
    }

    pub fn has(&self, kind: MoveKind, j: i64) -> bool {
        self.list(kind).binary_search(&j).is_ok()
    }
}

fn check_stat_args(a: &Sequence, r: i64, j: i64) -> Result<()> {
    if r < 1 {
        return Err(Error::ConstraintViolated(format!("modulus {r} must be positive")));
    }
    a.check_index(j)
}

/// `R_r`: moves at `j + r Z_{>0}`. `j` is doubled.
pub fn stat_r(kind: StatKind, r: i64, j: i64, a: &Sequence) -> Result<i64> {
    check_stat_args(a, r, j)?;
    Ok(a.moves().right(kind, r, j))
}

/// `L_r`: moves at `j - r Z_{>0}`. `j` is doubled.
pub fn stat_l(kind: StatKind, r: i64, j: i64, a: &Sequence) -> Result<i64> {
    check_stat_args(a, r, j)?;
    Ok(a.moves().left(kind, r, j))
}

/// `T_r`: moves anywhere in the residue class of `j` mod `r`.
pub fn stat_t(kind: StatKind, r: i64, j: i64, a: &Sequence) -> Result<i64> {
    check_stat_args(a, r, j)?;
    Ok(a.moves().total(kind, r, j))
}

/// Width-`w` window of uniform random bits placed around the origin.
pub fn random_sequence<R: Rng + ?Sized>(rng: &mut R, support: Support, width: usize) -> Sequence {
    let w = width as i64;
    let mut left = -w;
    if left.rem_euclid(2) != support.parity() {
        left += 1;
    }
    let bits: Vec<bool> = (0..width).map(|_| rng.gen::<bool>()).collect();
    Sequence::raw(support, left, bits)
}

/// Random sequence moved by whole lattice steps to the requested charge.
pub fn random_sequence_with_charge<R: Rng + ?Sized>(
    rng: &mut R,
    support: Support,
    width: usize,
    charge: i64,
) -> Sequence {
    let a = random_sequence(rng, support, width);
    let diff = a.charge() - charge;
    a.translate(2 * diff)
}

/// Finite formal combination of sequences with Laurent coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct FockVector<C> {
    support: Support,
    terms: BTreeMap<Sequence, LaurentPoly<C>>,
}

impl<C: Coeff> FockVector<C> {
    pub fn zero(support: Support) -> Self {
        FockVector { support, terms: BTreeMap::new() }
    }

    pub fn basis(a: Sequence) -> Self {
        let support = a.support();
        let mut terms = BTreeMap::new();
        terms.insert(a, LaurentPoly::one());
        FockVector { support, terms }
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Sequence, &LaurentPoly<C>)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &Sequence) -> LaurentPoly<C> {
        self.terms.get(a).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    /// Adds `c * a`; the caller guarantees `a` has this vector's support.
    pub(crate) fn add_term(&mut self, a: Sequence, c: &LaurentPoly<C>) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(a.support(), self.support);
        match self.terms.get_mut(&a) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(&a);
                }
            }
            None => {
                self.terms.insert(a, c.clone());
            }
        }
    }

    /// Adds `c * a`.
    pub fn push(&mut self, a: Sequence, c: &LaurentPoly<C>) -> Result<()> {
        if a.support() != self.support {
            return Err(Error::SupportMismatch(format!("{a} added to {} vector", self.support.name())));
        }
        self.add_term(a, c);
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.support != self.support {
            return Err(Error::SupportMismatch("adding vectors on different lattices".into()));
        }
        let mut out = self.clone();
        for (a, c) in other.terms.iter() {
            out.add_term(a.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-LaurentPoly::one()))
    }

    pub fn scale(&self, c: &LaurentPoly<C>) -> Self {
        let mut out = Self::zero(self.support);
        if c.is_zero() {
            return out;
        }
        for (a, x) in self.terms.iter() {
            out.add_term(a.clone(), &(x * c));
        }
        out
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&LaurentPoly<C>) -> Result<LaurentPoly<C>>,
    {
        let mut out = Self::zero(self.support);
        for (a, x) in self.terms.iter() {
            out.add_term(a.clone(), &f(x)?);
        }
        Ok(out)
    }

    /// Keeps only the basis sequences accepted by `keep`.
    pub fn filter<F: Fn(&Sequence) -> bool>(&self, keep: F) -> Self {
        FockVector {
            support: self.support,
            terms: self.terms.iter().filter(|(a, _)| keep(a)).map(|(a, c)| (a.clone(), c.clone())).collect(),
        }
    }

    /// Applies a sequence map to every basis element.
    pub fn map_basis<F: Fn(&Sequence) -> Sequence>(&self, f: F) -> Self {
        let mut out = Self::zero(self.support);
        for (a, c) in self.terms.iter() {
            out.add_term(f(a), c);
        }
        out
    }
}

impl<C: Coeff> fmt::Debug for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(a, c)| format!("({c}){a}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

struct TermList<'a, C>(&'a BTreeMap<Sequence, LaurentPoly<C>>);

impl<C: Coeff> Serialize for TermList<'_, C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for t in self.0.iter() {
            seq.serialize_element(&t)?;
        }
        seq.end()
    }
}

/// `{"terms": [[sequence, laurent], ...]}` sorted by `(left, bits)`.
impl<C: Coeff> Serialize for FockVector<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FockVector", 1)?;
        st.serialize_field("terms", &TermList(&self.terms))?;
        st.end()
    }
}
