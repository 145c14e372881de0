//! Operators on Fock space: the quantum affine generators `E_p`, `F_p`,
//! `K_p` and the quantum symmetric pair generators `B_p`, `L_p`, acting on
//! basis sequences through single moves weighted by counting statistics.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockseq::{format_doubled, FockVector, MoveTable, Sequence, StatKind, Support};
use crate::laurent::{Coeff, LaurentPoly};
use crate::weights::{embed, extract, shift, stabilize, Family, LieType, ResidueClass, Weight};
use crate::{Fock, Laurent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IndexClass {
    Fixed,
    ThetaLinked,
    Standard,
}

/// Fixed if `-p = p`, Theta-linked if `-p = p +- 1`, standard otherwise.
pub fn classify_index(p: ResidueClass) -> IndexClass {
    if p.is_fixed() {
        IndexClass::Fixed
    } else if p.is_linked(p.theta()) {
        IndexClass::ThetaLinked
    } else {
        IndexClass::Standard
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OpKind {
    EHat,
    FHat,
    KHat,
    KHatInv,
    BHat,
    LHat,
    LHatInv,
    BHatZ,
}

/// Form of `B_p` at a fixed index: `Nonstandard` carries the extra
/// diagonal term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Variant {
    Standard,
    Nonstandard,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OperatorSpec {
    pub kind: OpKind,
    pub pbar: ResidueClass,
    pub variant: Variant,
    /// Doubled position read by `B_HAT_Z`.
    pub z: Option<i64>,
}

impl OperatorSpec {
    pub fn new(kind: OpKind, pbar: ResidueClass) -> OperatorSpec {
        OperatorSpec { kind, pbar, variant: Variant::Standard, z: None }
    }

    /// `B_p` with the fixed-index form chosen by whether `0` lies in `p`.
    pub fn b_auto(pbar: ResidueClass) -> OperatorSpec {
        let variant = if pbar.is_fixed() && pbar.doubled() == 0 { Variant::Nonstandard } else { Variant::Standard };
        OperatorSpec { kind: OpKind::BHat, pbar, variant, z: None }
    }

    pub fn b(pbar: ResidueClass, variant: Variant) -> OperatorSpec {
        OperatorSpec { kind: OpKind::BHat, pbar, variant, z: None }
    }

    /// `B_0^[z]`; requires `z` in `1/2 + rZ` (doubled).
    pub fn b_z(modulus: i64, z: i64) -> Result<OperatorSpec> {
        if (z - 1).rem_euclid(2 * modulus) != 0 {
            return Err(Error::ConstraintViolated(format!("z = {} is not 1/2 mod {modulus}", format_doubled(z))));
        }
        Ok(OperatorSpec { kind: OpKind::BHatZ, pbar: ResidueClass::new(0, modulus), variant: Variant::Nonstandard, z: Some(z) })
    }

    pub fn modulus(&self) -> i64 {
        self.pbar.modulus()
    }

    /// Support of the sequences this operator acts on.
    pub fn support(&self) -> Support {
        self.pbar.acts_on()
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            OpKind::EHat => "E",
            OpKind::FHat => "F",
            OpKind::KHat => "K",
            OpKind::KHatInv => "K^-1",
            OpKind::BHat => "B",
            OpKind::LHat => "L",
            OpKind::LHatInv => "L^-1",
            OpKind::BHatZ => "B^z",
        };
        write!(f, "{name}[{} mod {}]", self.pbar, self.modulus())?;
        if self.kind == OpKind::BHat && self.pbar.is_fixed() && self.variant == Variant::Nonstandard {
            f.write_str("+")?;
        }
        if let Some(z) = self.z {
            write!(f, "(z={})", format_doubled(z))?;
        }
        Ok(())
    }
}

/// Quantum symmetric pair data: modulus, index lattice and the rule for
/// fixed indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Qsp {
    pub modulus: i64,
    pub index_lattice: Support,
    pub fixed_rule: FixedRule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FixedRule {
    AllStandard,
    AllNonstandard,
    /// Nonstandard exactly at the class of 0.
    NonstandardAtZero,
}

impl Qsp {
    pub fn new(modulus: i64, index_lattice: Support, fixed_rule: FixedRule) -> Result<Qsp> {
        if modulus <= 3 {
            return Err(Error::ConstraintViolated(format!("modulus {modulus} must exceed 3")));
        }
        Ok(Qsp { modulus, index_lattice, fixed_rule })
    }

    /// The algebra whose operators realize tensoring with the natural
    /// representation for the family at `ell`.
    pub fn for_family(family: Family, ell: i64) -> Result<Qsp> {
        let lattice = family.support().dual();
        match family {
            Family::A => Err(Error::FamilyMismatch("type A uses the quantum affine operators".into())),
            Family::C => Qsp::new(ell, lattice, FixedRule::AllStandard),
            _ if ell % 2 == 1 => Qsp::new(ell, lattice, FixedRule::AllNonstandard),
            _ => Qsp::new(ell / 2, lattice, FixedRule::NonstandardAtZero),
        }
    }

    pub fn sequence_support(&self) -> Support {
        self.index_lattice.dual()
    }

    pub fn classes(&self) -> Vec<ResidueClass> {
        ResidueClass::all(self.index_lattice, self.modulus)
    }

    pub fn class(&self, doubled: i64) -> Result<ResidueClass> {
        if doubled.rem_euclid(2) != self.index_lattice.parity() {
            return Err(Error::SupportMismatch(format!(
                "index {} is not in {}/{}Z",
                format_doubled(doubled),
                self.index_lattice.name(),
                self.modulus
            )));
        }
        Ok(ResidueClass::new(doubled, self.modulus))
    }

    pub fn variant(&self, p: ResidueClass) -> Variant {
        match (p.is_fixed(), self.fixed_rule) {
            (false, _) | (true, FixedRule::AllStandard) => Variant::Standard,
            (true, FixedRule::AllNonstandard) => Variant::Nonstandard,
            (true, FixedRule::NonstandardAtZero) if p.doubled() == 0 => Variant::Nonstandard,
            _ => Variant::Standard,
        }
    }

    pub fn b(&self, p: ResidueClass) -> OperatorSpec {
        OperatorSpec::b(p, self.variant(p))
    }

    pub fn l(&self, p: ResidueClass) -> OperatorSpec {
        OperatorSpec::new(OpKind::LHat, p)
    }
}

fn vpow<C: Coeff>(k: i64) -> LaurentPoly<C> {
    LaurentPoly::v_pow(k)
}

/// Terms of an operator applied to one basis sequence.
fn apply_basis<C: Coeff>(op: &OperatorSpec, a: &Sequence, out: &mut FockVector<C>) {
    let r = op.modulus();
    let p = op.pbar;
    let mt: MoveTable = a.moves();
    let stat_t = |kind: StatKind, c: ResidueClass| mt.total(kind, r, c.doubled());
    let e_part = |out: &mut FockVector<C>, cls: ResidueClass, pre: i64| {
        for &j in mt.e.iter().filter(|j| cls.contains(**j)) {
            let b = a.move_e_unchecked(j).expect("listed e-move");
            out.add_term(b, &vpow(pre + mt.right(StatKind::EMinusF, r, j)));
        }
    };
    let f_part = |out: &mut FockVector<C>, cls: ResidueClass| {
        for &j in mt.f.iter().filter(|j| cls.contains(**j)) {
            let b = a.move_f_unchecked(j).expect("listed f-move");
            out.add_term(b, &vpow(mt.left(StatKind::FMinusE, r, j)));
        }
    };
    match op.kind {
        OpKind::EHat => e_part(out, p, 0),
        OpKind::FHat => f_part(out, p),
        OpKind::KHat => out.add_term(a.clone(), &vpow(stat_t(StatKind::FMinusE, p))),
        OpKind::KHatInv => out.add_term(a.clone(), &vpow(-stat_t(StatKind::FMinusE, p))),
        OpKind::LHat | OpKind::LHatInv => {
            let q = if op.kind == OpKind::LHat { p } else { p.theta() };
            let k = stat_t(StatKind::FMinusE, q) + stat_t(StatKind::EMinusF, q.theta());
            out.add_term(a.clone(), &vpow(k));
        }
        OpKind::BHat | OpKind::BHatZ => {
            let t = stat_t(StatKind::EMinusF, p.theta());
            if !p.is_fixed() {
                e_part(out, p, t);
                f_part(out, p.theta());
                return;
            }
            e_part(out, p, t - 1);
            f_part(out, p);
            let diag = match (op.kind, op.variant) {
                (OpKind::BHatZ, _) => !a.at(op.z.expect("z is set for B^z")),
                (_, Variant::Nonstandard) => true,
                (_, Variant::Standard) => false,
            };
            if diag {
                out.add_term(a.clone(), &vpow(t));
            }
        }
    }
}

fn check_support(op: &OperatorSpec, s: Support) -> Result<()> {
    if op.support() != s {
        return Err(Error::SupportMismatch(format!("{op} acts on {} sequences, got {}", op.support().name(), s.name())));
    }
    if op.kind == OpKind::BHatZ {
        let z = op.z.ok_or_else(|| Error::ConstraintViolated("B^z without z".into()))?;
        if s != Support::Half || (z - 1).rem_euclid(2 * op.modulus()) != 0 {
            return Err(Error::ConstraintViolated(format!("{op} needs HALF support and z = 1/2 mod r")));
        }
    }
    Ok(())
}

/// Applies `op` linearly.
pub fn apply<C: Coeff>(op: &OperatorSpec, x: &FockVector<C>) -> Result<FockVector<C>> {
    check_support(op, x.support())?;
    let mut out = FockVector::zero(x.support());
    for (a, c) in x.terms() {
        let mut part = FockVector::zero(x.support());
        apply_basis(op, a, &mut part);
        for (b, d) in part.terms() {
            out.add_term(b.clone(), &(d * c));
        }
    }
    Ok(out)
}

/// `op` applied to a single basis sequence.
pub fn apply_seq<C: Coeff>(op: &OperatorSpec, a: &Sequence) -> Result<FockVector<C>> {
    apply(op, &FockVector::basis(a.clone()))
}

/// Applies a word of operators right to left, i.e. `ops[0]` acts last.
pub fn apply_word<C: Coeff>(ops: &[OperatorSpec], x: &FockVector<C>) -> Result<FockVector<C>> {
    let mut cur = x.clone();
    for op in ops.iter().rev() {
        cur = apply(op, &cur)?;
    }
    Ok(cur)
}

/// `B_p` through the quantum affine generators:
/// `E_p K_{-p}^{-1} + F_{-p}` off the fixed indices, and
/// `v^{-1} E_p K_p^{-1} + F_p (+ K_p^{-1})` on them.
pub fn b_via_typea<C: Coeff>(op: &OperatorSpec, x: &FockVector<C>) -> Result<FockVector<C>> {
    use OpKind::*;
    let p = op.pbar;
    let mk = |k, c| OperatorSpec::new(k, c);
    match op.kind {
        LHat => apply_word(&[mk(KHat, p), mk(KHatInv, p.theta())], x),
        BHat | BHatZ if !p.is_fixed() => {
            apply_word(&[mk(EHat, p), mk(KHatInv, p.theta())], x)?.add(&apply(&mk(FHat, p.theta()), x)?)
        }
        BHat | BHatZ => {
            let mut out = apply_word(&[mk(EHat, p), mk(KHatInv, p)], x)?.scale(&LaurentPoly::v_pow(-1));
            out = out.add(&apply(&mk(FHat, p), x)?)?;
            let kinv = apply(&mk(KHatInv, p), x)?;
            match (op.kind, op.variant) {
                (BHatZ, _) => {
                    let z = op.z.expect("z is set for B^z");
                    out = out.add(&kinv.filter(|a| !a.at(z)))?;
                }
                (_, Variant::Nonstandard) => out = out.add(&kinv)?,
                _ => {}
            }
            Ok(out)
        }
        _ => Err(Error::CaseInapplicable(format!("{op} has no quantum affine expression"))),
    }
}

/// Checks `B_p x` (or `L_p x`) against [`b_via_typea`] on every sample.
pub fn compare_typea_identity(op: &OperatorSpec, samples: &[Sequence]) -> Result<usize> {
    let bad = samples.par_iter().find_map_first(|a| {
        let x: Fock = FockVector::basis(a.clone());
        let lhs = apply(op, &x);
        let rhs = b_via_typea(op, &x);
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => None,
            (Err(e), _) | (_, Err(e)) => Some(e),
            _ => Some(Error::IdentityViolation(format!("{op} on {a}"))),
        }
    });
    match bad {
        Some(e) => Err(e),
        None => Ok(samples.len()),
    }
}

/// Drops every term outside the embedded image of `ty`.
pub fn project_embedded<C: Coeff>(ty: LieType, x: &FockVector<C>) -> FockVector<C> {
    x.filter(|a| extract(ty, a).is_some())
}

/// Multiset of weights after evaluating at `v = 1`; zeros are dropped.
pub fn eval_decomposition(x: &Fock, ty: LieType) -> Result<BTreeMap<Weight, BigInt>> {
    let mut out = BTreeMap::new();
    for (a, c) in x.terms() {
        let w = extract(ty, a).ok_or_else(|| Error::LeftEmbedding(a.to_string()))?;
        let m = c.eval_one();
        if m < BigInt::zero() {
            return Err(Error::NegativeMultiplicity { weight: w.to_string(), mult: m.to_string() });
        }
        if !m.is_zero() {
            out.insert(w, m);
        }
    }
    Ok(out)
}

/// One summand of the tensor-product aggregate: the class it came from, or
/// `None` for an added copy of the input.
pub type Part = (Option<ResidueClass>, Fock);

/// Per-class contributions to the sum of all `B_p` applied to the embedded
/// weight, with the family-specific corrections.
pub fn apply_sum_b_parts(ty: LieType, ell: i64, lambda: &Weight) -> Result<Vec<Part>> {
    let qsp = Qsp::for_family(ty.family, ell)?;
    let a = embed(ty, lambda)?;
    let at_zero = lambda.doubled().last().is_some_and(|c| *c == 0);
    let x: Fock = FockVector::basis(a.clone());
    let mut parts = Vec::new();
    for p in qsp.classes() {
        let op = if ty.family == Family::BHalf && p.doubled() == 0 && at_zero {
            OperatorSpec::b_z(qsp.modulus, 1)?
        } else {
            qsp.b(p)
        };
        parts.push((Some(p), apply(&op, &x)?));
    }
    if ty.family == Family::BInt && ell % 2 == 0 {
        parts.push((None, x));
    }
    Ok(parts)
}

/// Sum of [`apply_sum_b_parts`].
pub fn apply_sum_b(ty: LieType, ell: i64, lambda: &Weight) -> Result<Fock> {
    let mut out = FockVector::zero(ty.support());
    for (_, part) in apply_sum_b_parts(ty, ell, lambda)? {
        out = out.add(&part)?;
    }
    Ok(out)
}

/// The step operator of the iterated sum on sequences shifted by `m`
/// multiples of `ell`.
fn step_operators(family: Family, ell: i64, m: i64) -> Result<(Vec<OperatorSpec>, bool)> {
    let qsp = Qsp::for_family(family, ell)?;
    let mut ops = Vec::new();
    for p in qsp.classes() {
        if family == Family::BHalf && p.doubled() == 0 {
            ops.push(OperatorSpec::b_z(qsp.modulus, 1 - 2 * m * ell)?);
        } else {
            ops.push(qsp.b(p));
        }
    }
    Ok((ops, family == Family::BInt && ell % 2 == 0))
}

/// Result of [`iterated_sum`].
#[derive(Clone, Debug, Serialize)]
pub struct Iterated {
    pub m: i64,
    pub lambda: Weight,
    pub coefficients: Vec<(Weight, Laurent)>,
}

/// Coefficients `d(v)` of `sum_{p_1..p_reps} B_{p_1} ... B_{p_reps}` applied
/// to `shift(embed(lambda), m, ell)`, read back as weights of the same rank.
pub fn iterated_sum_at(ty: LieType, ell: i64, lambda: &Weight, m: i64, reps: usize) -> Result<Iterated> {
    let (ops, add_identity) = step_operators(ty.family, ell, m)?;
    let start = shift(&embed(ty, lambda)?, m, ell);
    let mut cur: Fock = FockVector::basis(start);
    for _ in 0..reps {
        let mut next = if add_identity { cur.clone() } else { FockVector::zero(cur.support()) };
        let parts: Vec<Fock> = ops.par_iter().map(|op| apply(op, &cur)).collect::<Result<_>>()?;
        for part in parts {
            next = next.add(&part)?;
        }
        cur = next;
    }
    let mut coefficients = Vec::new();
    for (b, c) in cur.terms() {
        let w = extract(ty, &shift(b, -m, ell)).ok_or_else(|| Error::LeftEmbedding(b.to_string()))?;
        if c.terms().any(|(_, k)| *k < BigInt::zero()) {
            return Err(Error::NegativeCoefficient { weight: w.to_string() });
        }
        coefficients.push((w, c.clone()));
    }
    coefficients.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Iterated { m, lambda: lambda.clone(), coefficients })
}

/// Stabilizes `a` with reserve `reps` and runs [`iterated_sum_at`].
pub fn iterated_sum(family: Family, ell: i64, a: &Sequence, reps: usize) -> Result<Iterated> {
    let (m, lambda) = stabilize(a, reps as i64, ell, family)?;
    iterated_sum_at(lambda.ty(), ell, &lambda, m, reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn c3() -> LieType {
        LieType::new(Family::C, 3).unwrap()
    }

    #[test]
    fn classification() {
        let cls = |s: &str, r| classify_index(ResidueClass::parse(s, r).unwrap());
        assert_eq!(cls("5/2", 5), IndexClass::Fixed);
        assert_eq!(cls("1/2", 5), IndexClass::ThetaLinked);
        assert_eq!(cls("3/2", 5), IndexClass::Standard);
        assert_eq!(cls("0", 4), IndexClass::Fixed);
        assert_eq!(cls("2", 4), IndexClass::Fixed);
        assert_eq!(cls("3/2", 4), IndexClass::ThetaLinked);
    }

    #[test]
    fn b_on_embedded_zero() {
        let ty = c3();
        let a = embed(ty, &Weight::zero(ty).unwrap()).unwrap();
        let qsp = Qsp::for_family(Family::C, 5).unwrap();
        let y: Fock = apply_seq(&qsp.b(qsp.class(3).unwrap()), &a).unwrap();
        let w1 = Weight::from_ints(ty, &[1, 0, 0]).unwrap();
        assert_eq!(y, FockVector::basis(embed(ty, &w1).unwrap()));
        let z: Fock = apply_seq(&qsp.b(qsp.class(7).unwrap()), &a).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn k_on_vacuum() {
        let vac = Sequence::vacuum(Support::Int);
        let k = OperatorSpec::new(OpKind::KHat, ResidueClass::new(1, 5));
        let y: Fock = apply_seq(&k, &vac).unwrap();
        assert_eq!(y, FockVector::basis(vac).scale(&LaurentPoly::v()));
    }

    #[test]
    fn support_checked() {
        let k = OperatorSpec::new(OpKind::KHat, ResidueClass::new(0, 5));
        assert!(apply_seq::<BigInt>(&k, &Sequence::vacuum(Support::Int)).is_err());
        assert!(OperatorSpec::b_z(5, 3).is_err());
        assert!(OperatorSpec::b_z(5, -9).is_ok());
    }

    #[test]
    fn sum_examples() {
        let ty = c3();
        let y = apply_sum_b(ty, 5, &Weight::zero(ty).unwrap()).unwrap();
        let w1 = Weight::from_ints(ty, &[1, 0, 0]).unwrap();
        assert_eq!(eval_decomposition(&project_embedded(ty, &y), ty).unwrap(), BTreeMap::from([(w1, BigInt::one())]));
        let bh = LieType::new(Family::BHalf, 2).unwrap();
        let y = apply_sum_b(bh, 5, &Weight::from_ints(bh, &[1, 0]).unwrap()).unwrap();
        let d = eval_decomposition(&project_embedded(bh, &y), bh).unwrap();
        let got: Vec<String> = d.keys().map(|w| w.to_string()).collect();
        assert_eq!(got, vec!["(0,0)", "(1,1)", "(2,0)"]);
    }

    #[test]
    fn iterated_examples() {
        let ty = c3();
        let z = Weight::zero(ty).unwrap();
        let it = iterated_sum_at(ty, 5, &z, 0, 0).unwrap();
        assert_eq!(it.coefficients, vec![(z.clone(), Laurent::one())]);
        let it = iterated_sum_at(ty, 5, &z, 0, 1).unwrap();
        assert_eq!(it.coefficients, vec![(Weight::from_ints(ty, &[1, 0, 0]).unwrap(), Laurent::one())]);
    }
}
