//! Weights for types A, B and C, the embedding of dominant weights as
//! sequences, and residue classes of indices.

use std::fmt;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockseq::{format_doubled, parse_doubled, Sequence, Support};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    C,
    /// Type B with half-integral weights; their shifted weights are integral.
    #[serde(rename = "B_INT")]
    BInt,
    /// Type B with integral weights; their shifted weights lie in 1/2 + Z.
    #[serde(rename = "B_HALF")]
    BHalf,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::C => "C",
            Family::BInt => "B_INT",
            Family::BHalf => "B_HALF",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "A" => Ok(Family::A),
            "C" => Ok(Family::C),
            "B_INT" | "BINT" => Ok(Family::BInt),
            "B_HALF" | "BHALF" => Ok(Family::BHalf),
            _ => Err(Error::Parse(format!("unknown family {s:?} (A, C, B_INT, B_HALF)"))),
        }
    }

    pub fn is_b(self) -> bool {
        matches!(self, Family::BInt | Family::BHalf)
    }

    /// Parity of doubled weight coordinates.
    pub fn weight_parity(self) -> i64 {
        match self {
            Family::BInt => 1,
            _ => 0,
        }
    }

    /// Lattice carrying the embedded sequences.
    pub fn support(self) -> Support {
        match self {
            Family::BHalf => Support::Half,
            _ => Support::Int,
        }
    }

    pub fn all() -> [Family; 4] {
        [Family::A, Family::C, Family::BInt, Family::BHalf]
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LieType {
    pub family: Family,
    pub rank: usize,
}

impl LieType {
    /// Enforces `N >= 1` for A, `N > 2` for C and `N > 1` for B.
    pub fn new(family: Family, rank: usize) -> Result<LieType> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::C => rank > 2,
            Family::BInt | Family::BHalf => rank > 1,
        };
        if !ok {
            return Err(Error::InvalidRank { family: family.name().into(), rank });
        }
        Ok(LieType { family, rank })
    }

    /// No lower bound on the rank; used for stabilized data where small
    /// ranks such as `C_1` occur.
    pub fn any_rank(family: Family, rank: usize) -> LieType {
        LieType { family, rank }
    }

    pub fn support(self) -> Support {
        self.family.support()
    }

    /// Doubled position of the first sequence entry outside the region that
    /// embedded weights fill with 1's.
    pub fn boundary(self) -> i64 {
        match self.family {
            Family::A => 2 * (1 - self.rank as i64),
            Family::C | Family::BInt => 2,
            Family::BHalf => 1,
        }
    }

    /// Charge of every embedded weight.
    pub fn charge(self) -> i64 {
        match self.family {
            Family::A => 0,
            _ => self.rank as i64,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family.name(), self.rank)
    }
}

/// A weight in the coordinates of the orthonormal basis, stored doubled.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    ty: LieType,
    coords: Vec<i64>,
}

impl Weight {
    /// Checks length and coordinate parity against the family.
    pub fn from_doubled(ty: LieType, coords: Vec<i64>) -> Result<Weight> {
        if coords.len() != ty.rank {
            return Err(Error::TypeMismatch(format!("{} coordinates for rank {}", coords.len(), ty.rank)));
        }
        let p = ty.family.weight_parity();
        if let Some(c) = coords.iter().find(|c| c.rem_euclid(2) != p) {
            return Err(Error::ParityMismatch(format!(
                "coordinate {} in family {}",
                format_doubled(*c),
                ty.family
            )));
        }
        Ok(Weight { ty, coords })
    }

    /// Unchecked constructor for shifted points, which need not satisfy the
    /// family parity.
    pub(crate) fn raw(ty: LieType, coords: Vec<i64>) -> Weight {
        Weight { ty, coords }
    }

    pub fn from_ints(ty: LieType, coords: &[i64]) -> Result<Weight> {
        Self::from_doubled(ty, coords.iter().map(|c| 2 * c).collect())
    }

    /// Errors for B_INT, whose weights are half-integral.
    pub fn zero(ty: LieType) -> Result<Weight> {
        Self::from_doubled(ty, vec![0; ty.rank])
    }

    /// The smallest dominant weight: zero, or `(1/2, ..., 1/2)` for B_INT.
    pub fn lowest_dominant(ty: LieType) -> Weight {
        Weight { ty, coords: vec![ty.family.weight_parity(); ty.rank] }
    }

    /// Parses a comma separated list such as `"1,0,0"` or `"3/2,1/2"`.
    pub fn parse(ty: LieType, s: &str) -> Result<Weight> {
        let coords = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(parse_doubled)
            .collect::<Result<Vec<_>>>()?;
        Self::from_doubled(ty, coords)
    }

    pub fn ty(&self) -> LieType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn doubled(&self) -> &[i64] {
        &self.coords
    }

    /// `self + sign * eps_i` (`i` zero-based), unchecked parity.
    pub fn plus_eps(&self, i: usize, sign: i64) -> Weight {
        let mut c = self.coords.clone();
        c[i] += 2 * sign;
        Weight { ty: self.ty, coords: c }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight { ty: self.ty, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight { ty: self.ty, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn max_doubled(&self) -> i64 {
        self.coords.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| format_doubled(*c)).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coord_strings().join(","))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ty, self)
    }
}

/// Coordinates as JSON: integers when integral, `"p/2"` strings otherwise.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            if c % 2 == 0 {
                seq.serialize_element(&(c / 2))?;
            } else {
                seq.serialize_element(&format_doubled(*c))?;
            }
        }
        seq.end()
    }
}

/// The fixed `rho` for each family: `(N, ..., 1)` for C, `(N-1/2, ..., 1/2)`
/// for B, `(0, -1, ..., -(N-1))` for A.
pub fn rho(ty: LieType) -> Result<Weight> {
    let n = ty.rank as i64;
    let coords = (0..n)
        .map(|i| match ty.family {
            Family::A => -2 * i,
            Family::C => 2 * (n - i),
            Family::BInt | Family::BHalf => 2 * (n - i) - 1,
        })
        .collect();
    Ok(Weight { ty, coords })
}

/// Dominance for the family: weakly decreasing with non-negative last entry.
pub fn is_dominant(ty: LieType, lambda: &Weight) -> Result<bool> {
    let w = Weight::from_doubled(ty, lambda.coords.clone())?;
    let dec = w.coords.windows(2).all(|p| p[0] >= p[1]);
    let last_ok = w.coords.last().is_none_or(|c| *c >= 0);
    Ok(dec && last_ok)
}

/// `lambda + rho`
pub fn shifted(lambda: &Weight) -> Weight {
    let r = rho(lambda.ty).expect("rho");
    lambda.add(&r)
}

/// Sequence of a dominant weight: a 1 at each entry of `lambda + rho` and
/// on the mandatory region below the family boundary.
pub fn embed(ty: LieType, lambda: &Weight) -> Result<Sequence> {
    if !is_dominant(ty, lambda)? {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    let s = shifted(lambda);
    Sequence::from_ones(ty.support(), ty.boundary(), &s.coords)
}

/// Inverse of [`embed`]; `None` when `a` is not in the image.
pub fn extract(ty: LieType, a: &Sequence) -> Option<Weight> {
    if a.support() != ty.support() || a.charge() != ty.charge() {
        return None;
    }
    let b = ty.boundary();
    if a.leftmost_zero() < b {
        return None;
    }
    let mut ones = a.ones_from(b);
    if ones.len() != ty.rank {
        return None;
    }
    ones.reverse();
    let r = rho(ty).ok()?;
    let coords: Vec<i64> = ones.iter().zip(&r.coords).map(|(x, p)| x - p).collect();
    Weight::from_doubled(ty, coords).ok()
}

/// `a'(i) = a(i + m * ell)`; the charge drops by `m * ell`.
pub fn shift(a: &Sequence, m: i64, ell: i64) -> Sequence {
    a.translate(2 * m * ell)
}

/// Writes `a` as a shifted embedded weight at a rank large enough that
/// `reserve` further operator steps stay inside the embedded subspace.
///
/// Returns `(m, lambda)` with `shift(embed(lambda), m, ell) == a` and
/// `lambda` of rank `m * ell + charge(a)`.
pub fn stabilize(a: &Sequence, reserve: i64, ell: i64, family: Family) -> Result<(i64, Weight)> {
    if family == Family::A {
        return Err(Error::FamilyMismatch("stabilization is defined for C, B_INT and B_HALF".into()));
    }
    if a.support() != family.support() {
        return Err(Error::SupportMismatch(format!("{} sequence for family {family}", a.support().name())));
    }
    let k = a.charge();
    if k < 0 || k >= ell {
        return Err(Error::ChargeOutOfRange { charge: k, bound: ell });
    }
    // Moving the first mandatory 1 at rank m*ell+k takes (z - p0)/2 + 1 + m*ell
    // single steps, z the leftmost 0 and p0 the boundary position.
    let z = a.leftmost_zero();
    let p0 = family.support().first_positive();
    let base = (z - p0) / 2 + 1;
    let mut m = 0;
    while base + m * ell <= reserve {
        m += 1;
    }
    let ty = LieType::any_rank(family, (m * ell + k) as usize);
    let lambda = extract(ty, &shift(a, -m, ell))
        .ok_or_else(|| Error::ConstraintViolated(format!("{a} is not a shifted embedded weight")))?;
    Ok((m, lambda))
}

/// Reads a charge-0 integer sequence as a partition: the i-th rightmost 1
/// sits at `lambda_i - (i - 1)`.
pub fn seq_to_partition(a: &Sequence) -> Option<Vec<i64>> {
    if a.support() != Support::Int || a.charge() != 0 {
        return None;
    }
    let lowest = a.leftmost_zero().min(0);
    let mut ones = a.ones_from(lowest);
    ones.reverse();
    let parts: Vec<i64> = ones.iter().enumerate().map(|(i, d)| d / 2 + i as i64).filter(|p| *p > 0).collect();
    Some(parts)
}

/// All dominant weights with first coordinate at most `max_first_doubled`.
pub fn dominant_weights(ty: LieType, max_first_doubled: i64) -> Vec<Weight> {
    let p = ty.family.weight_parity();
    let lowest = p;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ty.rank);
    fn rec(n: usize, hi: i64, lo: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let mut x = lo;
        while x <= hi {
            cur.push(x);
            rec(n, x, lo, cur, out);
            cur.pop();
            x += 2;
        }
    }
    let mut top = max_first_doubled;
    if top.rem_euclid(2) != p {
        top -= 1;
    }
    let mut raw = Vec::new();
    rec(ty.rank, top, lowest, &mut cur, &mut raw);
    for c in raw {
        out.push(Weight { ty, coords: c });
    }
    out.sort();
    out
}

/// A residue class of indices modulo `r`, as a doubled representative in
/// `[0, 2r)`. Odd representatives are classes in `H/rZ`, even ones in `Z/rZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueClass {
    modulus: i64,
    doubled: i64,
}

impl ResidueClass {
    pub fn new(doubled: i64, modulus: i64) -> ResidueClass {
        assert!(modulus > 0, "modulus must be positive");
        ResidueClass { modulus, doubled: doubled.rem_euclid(2 * modulus) }
    }

    pub fn parse(s: &str, modulus: i64) -> Result<ResidueClass> {
        Ok(Self::new(parse_doubled(s)?, modulus))
    }

    pub fn modulus(self) -> i64 {
        self.modulus
    }

    /// Representative in `[0, 2r)`.
    pub fn doubled(self) -> i64 {
        self.doubled
    }

    /// `H` for odd representatives, `Z` for even ones.
    pub fn lattice(self) -> Support {
        Support::of_doubled(self.doubled)
    }

    /// Sequences acted on by operators indexed by this class.
    pub fn acts_on(self) -> Support {
        self.lattice().dual()
    }

    /// The involution `p -> -p`.
    pub fn theta(self) -> ResidueClass {
        Self::new(-self.doubled, self.modulus)
    }

    /// `p + k`
    pub fn offset(self, k: i64) -> ResidueClass {
        Self::new(self.doubled + 2 * k, self.modulus)
    }

    pub fn contains(self, j: i64) -> bool {
        (j - self.doubled).rem_euclid(2 * self.modulus) == 0
    }

    /// Neighbours in the cyclic diagram: `p = q +- 1`.
    pub fn is_linked(self, other: ResidueClass) -> bool {
        other == self.offset(1) || other == self.offset(-1)
    }

    pub fn is_fixed(self) -> bool {
        self.theta() == self
    }

    /// Every class of the given lattice mod `r`, ascending.
    pub fn all(lattice: Support, modulus: i64) -> Vec<ResidueClass> {
        (0..modulus).map(|k| Self::new(2 * k + lattice.parity(), modulus)).collect()
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_doubled(self.doubled))
    }
}

impl Serialize for ResidueClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(f: Family, n: usize) -> LieType {
        LieType::new(f, n).unwrap()
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(ty(Family::C, 3)).unwrap().doubled(), &[6, 4, 2]);
        assert_eq!(rho(ty(Family::BHalf, 2)).unwrap().doubled(), &[3, 1]);
        assert_eq!(rho(ty(Family::A, 3)).unwrap().doubled(), &[0, -2, -4]);
    }

    #[test]
    fn dominance() {
        let c3 = ty(Family::C, 3);
        assert!(is_dominant(c3, &Weight::from_ints(c3, &[2, 2, 0]).unwrap()).unwrap());
        assert!(!is_dominant(c3, &Weight::from_ints(c3, &[1, 2, 0]).unwrap()).unwrap());
        let bi = ty(Family::BInt, 2);
        assert!(is_dominant(bi, &Weight::parse(bi, "3/2,1/2").unwrap()).unwrap());
        let bh = ty(Family::BHalf, 2);
        assert!(is_dominant(bh, &Weight::from_ints(bh, &[1, 0]).unwrap()).unwrap());
        assert!(!is_dominant(bh, &Weight::from_ints(bh, &[0, -1]).unwrap()).unwrap());
        assert!(Weight::parse(bh, "3/2,1/2").is_err());
        assert!(LieType::new(Family::C, 2).is_err());
        assert!(LieType::new(Family::BInt, 1).is_err());
    }

    #[test]
    fn embed_examples() {
        let c3 = ty(Family::C, 3);
        let a = embed(c3, &Weight::zero(c3).unwrap()).unwrap();
        assert_eq!(a, Sequence::from_ones(Support::Int, 2, &[2, 4, 6]).unwrap());
        assert_eq!(a.charge(), 3);
        let a3 = ty(Family::A, 3);
        assert_eq!(embed(a3, &Weight::zero(a3).unwrap()).unwrap(), Sequence::vacuum(Support::Int));
        let bh = ty(Family::BHalf, 2);
        let h = embed(bh, &Weight::zero(bh).unwrap()).unwrap();
        assert_eq!(h, Sequence::from_ones(Support::Half, 1, &[1, 3]).unwrap());
        assert!(embed(c3, &Weight::from_ints(c3, &[0, 1, 0]).unwrap()).is_err());
    }

    #[test]
    fn extract_examples() {
        let c3 = ty(Family::C, 3);
        for w in dominant_weights(c3, 12) {
            assert_eq!(extract(c3, &embed(c3, &w).unwrap()), Some(w));
        }
        let hole = Sequence::from_ones(Support::Int, 0, &[2, 4, 6, 8]).unwrap();
        assert_eq!(hole.charge(), 3);
        assert_eq!(extract(c3, &hole), None);
        let a3 = ty(Family::A, 3);
        for w in dominant_weights(a3, 8) {
            assert_eq!(extract(a3, &embed(a3, &w).unwrap()), Some(w));
        }
        let bi = ty(Family::BInt, 3);
        for w in dominant_weights(bi, 7) {
            assert_eq!(extract(bi, &embed(bi, &w).unwrap()), Some(w));
        }
    }

    #[test]
    fn shift_examples() {
        let a = Sequence::from_bit_str(Support::Int, -6, "0110101").unwrap();
        assert_eq!(shift(&a, 0, 5), a);
        assert_eq!(shift(&a, 2, 5).charge(), a.charge() - 10);
        assert_eq!(shift(&shift(&a, 1, 5), -1, 5), a);
    }

    #[test]
    fn stabilize_examples() {
        let vac1 = Sequence::step(Support::Int, 4).unwrap();
        assert_eq!(vac1.charge(), 1);
        let (m, lam) = stabilize(&vac1, 0, 5, Family::C).unwrap();
        assert_eq!(m, 0);
        assert_eq!(lam.doubled(), &[0]);
        let a = Sequence::from_ones(Support::Int, -4, &[-2, 0, 2]).unwrap();
        let (m, lam) = stabilize(&a, 0, 5, Family::C).unwrap();
        assert_eq!(m, 1);
        assert_eq!(lam.rank(), 5);
        assert_eq!(lam.doubled(), &[2, 2, 2, 0, 0]);
        assert_eq!(shift(&embed(lam.ty(), &lam).unwrap(), m, 5), a);
    }

    #[test]
    fn partitions() {
        assert_eq!(seq_to_partition(&Sequence::vacuum(Support::Int)), Some(vec![]));
        let a3 = ty(Family::A, 3);
        let w = Weight::from_ints(a3, &[3, 1, 0]).unwrap();
        assert_eq!(seq_to_partition(&embed(a3, &w).unwrap()), Some(vec![3, 1]));
    }

    #[test]
    fn residue_classes() {
        let p = ResidueClass::parse("1/2", 5).unwrap();
        assert_eq!(p.theta().to_string(), "9/2");
        assert!(p.is_linked(p.theta()));
        assert!(ResidueClass::parse("5/2", 5).unwrap().is_fixed());
        assert_eq!(ResidueClass::all(Support::Half, 4).len(), 4);
        assert_eq!(ResidueClass::parse("0", 5).unwrap().acts_on(), Support::Half);
    }
}
