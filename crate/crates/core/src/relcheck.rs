//! Defining relations of the symmetric pair generators and of the quantum
//! affine generators, checked as operator identities on sampled sequences.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockseq::{random_sequence, random_sequence_with_charge, FockVector, Sequence, Support};
use crate::laurent::{quantum_int, v_minus_v_inv, LaurentPoly};
use crate::operators::{apply, classify_index, IndexClass, OpKind, OperatorSpec, Qsp};
use crate::weights::{embed, Family, LieType, ResidueClass, Weight};
use crate::{Fock, Laurent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationName {
    LCommute,
    LInverse,
    /// `L_q B_p = v^k B_p L_q` with `k` read off the case table.
    LbCase,
    BCommute,
    BThetaCommutator,
    SerrePlain,
    SerreFixedRight,
    SerreFixedLeft,
    SerreThetaDeformed,
    AKk,
    AKe,
    AKf,
    AEfCommutator,
    AECommute,
    AFCommute,
    ASerreE,
    ASerreF,
}

impl RelationName {
    pub fn as_str(self) -> &'static str {
        use RelationName::*;
        match self {
            LCommute => "L_COMMUTE",
            LInverse => "L_INVERSE",
            LbCase => "LB_CASE",
            BCommute => "B_COMMUTE",
            BThetaCommutator => "B_THETA_COMMUTATOR",
            SerrePlain => "SERRE_PLAIN",
            SerreFixedRight => "SERRE_FIXED_RIGHT",
            SerreFixedLeft => "SERRE_FIXED_LEFT",
            SerreThetaDeformed => "SERRE_THETA_DEFORMED",
            AKk => "A_KK",
            AKe => "A_KE",
            AKf => "A_KF",
            AEfCommutator => "A_EF_COMMUTATOR",
            AECommute => "A_E_COMMUTE",
            AFCommute => "A_F_COMMUTE",
            ASerreE => "A_SERRE_E",
            ASerreF => "A_SERRE_F",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationInstance {
    pub name: RelationName,
    pub indices: Vec<ResidueClass>,
    pub modulus: i64,
    /// Power of `v` for `LB_CASE` and the conjugation relations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<i64>,
}

impl fmt::Display for RelationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|p| p.to_string()).collect();
        write!(f, "{}({}) mod {}", self.name.as_str(), idx.join(","), self.modulus)?;
        if let Some(k) = self.exponent {
            write!(f, " v^{k}")?;
        }
        Ok(())
    }
}

fn inst(name: RelationName, indices: Vec<ResidueClass>, exponent: Option<i64>) -> RelationInstance {
    RelationInstance { name, modulus: indices[0].modulus(), indices, exponent }
}

/// `v`-power in `L_q B_p = v^k B_p L_q` from the case table.
fn lb_exponent(p: ResidueClass, q: ResidueClass) -> i64 {
    match classify_index(p) {
        IndexClass::Fixed => 0,
        IndexClass::Standard => {
            if p == q {
                2
            } else if p == q.theta() {
                -2
            } else if p.is_linked(q) {
                -1
            } else if p.is_linked(q.theta()) {
                1
            } else {
                0
            }
        }
        IndexClass::ThetaLinked => {
            if p == q {
                3
            } else if p == q.theta() {
                -3
            } else if p.is_linked(q) && q != p.theta() {
                -1
            } else if p.is_linked(q.theta()) && q != p {
                1
            } else {
                0
            }
        }
    }
}

fn check_modulus(r: i64) -> Result<()> {
    if r <= 3 {
        return Err(Error::ModulusTooSmall(r));
    }
    Ok(())
}

/// Every relation of the symmetric pair presentation for every applicable
/// tuple of classes in `lattice / rZ`, in a fixed order.
pub fn enumerate_relations(lattice: Support, r: i64) -> Result<Vec<RelationInstance>> {
    use RelationName::*;
    check_modulus(r)?;
    let classes = ResidueClass::all(lattice, r);
    let not_fixed: Vec<ResidueClass> = classes.iter().copied().filter(|p| !p.is_fixed()).collect();
    let mut out = Vec::new();
    for (i, &p) in not_fixed.iter().enumerate() {
        for &q in &not_fixed[i + 1..] {
            out.push(inst(LCommute, vec![p, q], None));
        }
        out.push(inst(LInverse, vec![p], None));
    }
    for &q in &not_fixed {
        for &p in &classes {
            out.push(inst(LbCase, vec![q, p], Some(lb_exponent(p, q))));
        }
    }
    for (i, &p) in classes.iter().enumerate() {
        for &q in &classes[i + 1..] {
            let theta_pair = classify_index(p) == IndexClass::Standard && q == p.theta();
            if !p.is_linked(q) && !theta_pair {
                out.push(inst(BCommute, vec![p, q], None));
            }
        }
    }
    for &p in &classes {
        if classify_index(p) == IndexClass::Standard {
            out.push(inst(BThetaCommutator, vec![p], None));
        }
    }
    for &p in &classes {
        for &q in &classes {
            if !p.is_linked(q) {
                continue;
            }
            let (cp, cq) = (classify_index(p), classify_index(q));
            let name = if q == p.theta() {
                SerreThetaDeformed
            } else if cp != IndexClass::Fixed && cq != IndexClass::Fixed {
                SerrePlain
            } else if cp == IndexClass::Standard && cq == IndexClass::Fixed {
                SerreFixedRight
            } else if cp == IndexClass::Fixed && cq == IndexClass::Standard {
                SerreFixedLeft
            } else {
                continue;
            };
            out.push(inst(name, vec![p, q], None));
        }
    }
    Ok(out)
}

/// Entry of the affine type A Cartan matrix.
fn cartan(p: ResidueClass, q: ResidueClass) -> i64 {
    if p == q {
        2
    } else if p.is_linked(q) {
        -1
    } else {
        0
    }
}

/// Chevalley relations of the quantum affine algebra for every pair of
/// classes in `lattice / rZ`.
pub fn enumerate_typea_relations(lattice: Support, r: i64) -> Result<Vec<RelationInstance>> {
    use RelationName::*;
    check_modulus(r)?;
    let classes = ResidueClass::all(lattice, r);
    let mut out = Vec::new();
    for (i, &p) in classes.iter().enumerate() {
        for &q in &classes[i + 1..] {
            out.push(inst(AKk, vec![p, q], None));
        }
    }
    for &p in &classes {
        for &q in &classes {
            out.push(inst(AKe, vec![p, q], Some(cartan(p, q))));
            out.push(inst(AKf, vec![p, q], Some(-cartan(p, q))));
            out.push(inst(AEfCommutator, vec![p, q], None));
        }
    }
    for (i, &p) in classes.iter().enumerate() {
        for &q in &classes[i + 1..] {
            if !p.is_linked(q) {
                out.push(inst(AECommute, vec![p, q], None));
                out.push(inst(AFCommute, vec![p, q], None));
            }
        }
    }
    for &p in &classes {
        for &q in &classes {
            if p.is_linked(q) {
                out.push(inst(ASerreE, vec![p, q], None));
                out.push(inst(ASerreF, vec![p, q], None));
            }
        }
    }
    Ok(out)
}

/// Operators in a word act right to left, as in [`crate::operators::apply_word`].
fn word(ops: &[OperatorSpec], x: &Fock) -> Result<Fock> {
    let mut cur = x.clone();
    for op in ops.iter().rev() {
        cur = apply(op, &cur)?;
    }
    Ok(cur)
}

/// `x^2 y - [2] x y x + y x^2` applied to `v`.
fn serre(x: OperatorSpec, y: OperatorSpec, v: &Fock) -> Result<Fock> {
    let a = word(&[x, x, y], v)?;
    let b = word(&[x, y, x], v)?.scale(&quantum_int(2));
    let c = word(&[y, x, x], v)?;
    a.sub(&b)?.add(&c)
}

fn commutator(x: OperatorSpec, y: OperatorSpec, v: &Fock) -> Result<Fock> {
    word(&[x, y], v)?.sub(&word(&[y, x], v)?)
}

fn divide(x: &Fock, d: &Laurent) -> Result<Fock> {
    x.map_coeffs(|c| c.div_exact(d))
}

/// Both sides of a relation on `x`. `qsp` picks the form of `B` at fixed
/// indices; the type A relations ignore it.
fn sides(rel: &RelationInstance, qsp: Option<&Qsp>, x: &Fock) -> Result<(Fock, Fock)> {
    use RelationName::*;
    let zero = FockVector::zero(x.support());
    let idx = &rel.indices;
    let b = |p: ResidueClass| match qsp {
        Some(q) => q.b(p),
        None => OperatorSpec::b_auto(p),
    };
    let l = |p: ResidueClass| OperatorSpec::new(OpKind::LHat, p);
    let op = |k: OpKind, p: ResidueClass| OperatorSpec::new(k, p);
    let vk = |k: i64| LaurentPoly::v_pow(k);
    Ok(match rel.name {
        LCommute => (word(&[l(idx[0]), l(idx[1])], x)?, word(&[l(idx[1]), l(idx[0])], x)?),
        LInverse => (word(&[l(idx[0]), l(idx[0].theta())], x)?, x.clone()),
        LbCase => {
            let (q, p) = (idx[0], idx[1]);
            let k = rel.exponent.unwrap_or(0);
            (word(&[l(q), b(p)], x)?, word(&[b(p), l(q)], x)?.scale(&vk(k)))
        }
        BCommute => (word(&[b(idx[0]), b(idx[1])], x)?, word(&[b(idx[1]), b(idx[0])], x)?),
        BThetaCommutator => {
            let p = idx[0];
            let rhs = apply(&l(p), x)?.sub(&apply(&l(p.theta()), x)?)?;
            (commutator(b(p), b(p.theta()), x)?, divide(&rhs, &v_minus_v_inv())?)
        }
        SerrePlain | SerreFixedRight => (serre(b(idx[0]), b(idx[1]), x)?, zero),
        SerreFixedLeft => (serre(b(idx[0]), b(idx[1]), x)?, apply(&b(idx[1]), x)?),
        SerreThetaDeformed => {
            let p = idx[0];
            let inner = apply(&l(p), x)?.scale(&vk(1)).add(&apply(&l(p.theta()), x)?.scale(&vk(-2)))?;
            let rhs = apply(&b(p), &inner)?.scale(&quantum_int(2)).scale(&LaurentPoly::constant((-1).into()));
            (serre(b(p), b(idx[1]), x)?, rhs)
        }
        AKk => {
            let (k1, k2) = (op(OpKind::KHat, idx[0]), op(OpKind::KHat, idx[1]));
            (word(&[k1, k2], x)?, word(&[k2, k1], x)?)
        }
        AKe | AKf => {
            let kind = if rel.name == AKe { OpKind::EHat } else { OpKind::FHat };
            let (p, q) = (idx[0], idx[1]);
            let lhs = word(&[op(OpKind::KHat, p), op(kind, q), op(OpKind::KHatInv, p)], x)?;
            (lhs, apply(&op(kind, q), x)?.scale(&vk(rel.exponent.unwrap_or(0))))
        }
        AEfCommutator => {
            let (p, q) = (idx[0], idx[1]);
            let lhs = commutator(op(OpKind::EHat, p), op(OpKind::FHat, q), x)?;
            let rhs = if p == q {
                let d = apply(&op(OpKind::KHat, p), x)?.sub(&apply(&op(OpKind::KHatInv, p), x)?)?;
                divide(&d, &v_minus_v_inv())?
            } else {
                zero
            };
            (lhs, rhs)
        }
        AECommute => (commutator(op(OpKind::EHat, idx[0]), op(OpKind::EHat, idx[1]), x)?, zero),
        AFCommute => (commutator(op(OpKind::FHat, idx[0]), op(OpKind::FHat, idx[1]), x)?, zero),
        ASerreE => (serre(op(OpKind::EHat, idx[0]), op(OpKind::EHat, idx[1]), x)?, zero),
        ASerreF => (serre(op(OpKind::FHat, idx[0]), op(OpKind::FHat, idx[1]), x)?, zero),
    })
}

/// Checks one relation on every sample; the error names the first sample
/// that breaks it.
pub fn check_relation(rel: &RelationInstance, qsp: Option<&Qsp>, samples: &[Sequence]) -> Result<usize> {
    for a in samples {
        let x: Fock = FockVector::basis(a.clone());
        let ok = match sides(rel, qsp, &x) {
            Ok((l, r)) => l == r,
            Err(Error::NotDivisible) => false,
            Err(e) => return Err(e),
        };
        if !ok {
            return Err(Error::RelationViolated { relation: rel.to_string(), sample: a.to_string() });
        }
    }
    Ok(samples.len())
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub relation: RelationInstance,
    pub sample: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    /// Distinct relation names exercised.
    pub relations_checked: usize,
    pub instances: usize,
    pub samples: usize,
    pub failures: Vec<Violation>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every instance on every sample in parallel; failures are listed in
/// enumeration order, at most one per instance.
pub fn run_suite(rels: &[RelationInstance], qsp: Option<&Qsp>, samples: &[Sequence]) -> Result<SuiteReport> {
    let results: Vec<Result<Option<Violation>>> = rels
        .par_iter()
        .map(|rel| match check_relation(rel, qsp, samples) {
            Ok(_) => Ok(None),
            Err(Error::RelationViolated { sample, .. }) => Ok(Some(Violation { relation: rel.clone(), sample })),
            Err(e) => Err(e),
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    let mut names: Vec<RelationName> = rels.iter().map(|r| r.name).collect();
    names.sort();
    names.dedup();
    Ok(SuiteReport { relations_checked: names.len(), instances: rels.len(), samples: samples.len(), failures })
}

/// Full symmetric pair suite for `qsp`.
pub fn check_qsp(qsp: &Qsp, samples: &[Sequence]) -> Result<SuiteReport> {
    let rels = enumerate_relations(qsp.index_lattice, qsp.modulus)?;
    run_suite(&rels, Some(qsp), samples)
}

/// Full quantum affine suite for `lattice / rZ`.
pub fn check_typea(lattice: Support, r: i64, samples: &[Sequence]) -> Result<SuiteReport> {
    let rels = enumerate_typea_relations(lattice, r)?;
    run_suite(&rels, None, samples)
}

/// Seeded sample pool: three quarters unconstrained windows of width at
/// most `width`, one quarter embedded dominant weights.
pub fn sample_pool(support: Support, count: usize, width: usize, seed: u64) -> Vec<Sequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| if i % 4 == 3 { embedded_sample(&mut rng, support, width) } else { random_sequence(&mut rng, support, width) }).collect()
}

/// Seeded pool of unconstrained windows with a fixed charge.
pub fn sample_pool_with_charge(support: Support, count: usize, width: usize, charge: i64, seed: u64) -> Vec<Sequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_sequence_with_charge(&mut rng, support, width, charge)).collect()
}

fn embedded_sample<R: Rng>(rng: &mut R, support: Support, width: usize) -> Sequence {
    let family = if support == Support::Int { Family::C } else { Family::BHalf };
    let rank = rng.gen_range(3..=4usize);
    let ty = LieType::new(family, rank).expect("valid rank");
    let top = (width / 4).max(1) as i64;
    let mut coords: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..=top)).collect();
    coords.sort_unstable_by(|a, b| b.cmp(a));
    let w = Weight::from_ints(ty, &coords).expect("integral weight");
    embed(ty, &w).expect("dominant weight embeds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::FixedRule;

    fn count(rels: &[RelationInstance], name: RelationName) -> usize {
        rels.iter().filter(|r| r.name == name).count()
    }

    #[test]
    fn enumeration_examples() {
        let rels = enumerate_relations(Support::Half, 5).unwrap();
        let has = |name, d: i64| rels.iter().any(|r| r.name == name && r.indices[0].doubled() == d);
        assert!(has(RelationName::BThetaCommutator, 3));
        assert!(has(RelationName::SerreThetaDeformed, 1));
        let fixed: Vec<_> = ResidueClass::all(Support::Half, 5).into_iter().filter(|p| p.is_fixed()).collect();
        assert_eq!(fixed, vec![ResidueClass::new(5, 5)]);

        let h8 = ResidueClass::all(Support::Half, 8);
        assert_eq!(h8.iter().filter(|p| p.is_fixed()).count(), 0);
        assert_eq!(h8.iter().filter(|p| classify_index(**p) == IndexClass::ThetaLinked).count(), 4);
        let rels = enumerate_relations(Support::Half, 8).unwrap();
        assert_eq!(count(&rels, RelationName::SerreThetaDeformed), 4);

        assert_eq!(enumerate_relations(Support::Int, 3), Err(Error::ModulusTooSmall(3)));
        assert_eq!(enumerate_typea_relations(Support::Half, 2), Err(Error::ModulusTooSmall(2)));
    }

    #[test]
    fn lb_table() {
        let p = |d| ResidueClass::new(d, 7);
        assert_eq!(lb_exponent(p(3), p(3)), 2);
        assert_eq!(lb_exponent(p(3), p(11)), -2);
        assert_eq!(lb_exponent(p(3), p(5)), -1);
        assert_eq!(lb_exponent(p(3), p(9)), 1);
        assert_eq!(lb_exponent(p(1), p(1)), 3);
        assert_eq!(lb_exponent(p(1), p(13)), -3);
        assert_eq!(lb_exponent(p(7), p(3)), 0);
    }

    #[test]
    fn small_suites_pass() {
        let qsp = Qsp::new(5, Support::Half, FixedRule::AllStandard).unwrap();
        let samples = sample_pool(Support::Int, 12, 16, 1);
        let rep = check_qsp(&qsp, &samples).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        let rep = check_typea(Support::Half, 5, &samples).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn violation_is_reported() {
        let p = ResidueClass::new(3, 5);
        let bogus = RelationInstance { name: RelationName::LbCase, indices: vec![p, p], modulus: 5, exponent: Some(1) };
        let a = Sequence::from_bit_str(Support::Int, -4, "1101").unwrap();
        let mut found = false;
        for s in sample_pool(Support::Int, 20, 12, 3).iter().chain([&a]) {
            if check_relation(&bogus, None, std::slice::from_ref(s)).is_err() {
                found = true;
            }
        }
        assert!(found);
    }
}
