//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fockqsp::grothendieck::{check_iterated_seq, check_theorem_grid, tensor_natural, tensor_oracle, weyl_character, weyl_dimension};
use fockqsp::linkage::{canonicalize, case_weights, linked, linked_shifted, predict_linkage, LemmaCase, LinkageContext, OrbitBox};
use fockqsp::operators::{compare_typea_identity, OperatorSpec, Qsp};
use fockqsp::relcheck::{check_qsp, check_typea, sample_pool, sample_pool_with_charge};
use fockqsp::weights::{dominant_weights, rho, shifted};
use fockqsp::{Error, Family, LieType, Support};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

const SEED: u64 = 20240917;

fn qsp_configs() -> Vec<(String, Qsp)> {
    let mut out = Vec::new();
    for ell in [5, 7, 8] {
        out.push((format!("C ell={ell}"), Qsp::for_family(Family::C, ell).unwrap()));
    }
    for ell in [5, 7, 8, 10, 14] {
        for f in [Family::BInt, Family::BHalf] {
            out.push((format!("{} ell={ell}", f.name()), Qsp::for_family(f, ell).unwrap()));
        }
    }
    out
}

fn relation_suite() -> Outcome {
    let mut inst = 0;
    for (name, q) in qsp_configs() {
        let samples = sample_pool(q.sequence_support(), 100, 36, SEED);
        let rep = check_qsp(&q, &samples).map_err(|e| format!("{name}: {e}"))?;
        if let Some(f) = rep.failures.first() {
            return Err(format!("{name}: {} fails on {}", f.relation, f.sample));
        }
        inst += rep.instances;
    }
    Ok(format!("{inst} relation instances x 100 samples"))
}

fn typea_suite() -> Outcome {
    let mut inst = 0;
    for charge in [0, 3] {
        let samples = sample_pool_with_charge(Support::Int, 100, 30, charge, SEED);
        let rep = check_typea(Support::Half, 5, &samples).map_err(|e| e.to_string())?;
        if let Some(f) = rep.failures.first() {
            return Err(format!("charge {charge}: {} fails on {}", f.relation, f.sample));
        }
        inst += rep.instances;
    }
    Ok(format!("{inst} relation instances x 100 samples"))
}

fn typea_identities() -> Outcome {
    let mut checked = 0;
    for (name, q) in qsp_configs() {
        let samples = sample_pool(q.sequence_support(), 200, 36, SEED + 1);
        let mut ops: Vec<OperatorSpec> = Vec::new();
        for p in q.classes() {
            ops.push(q.b(p));
            if !p.is_fixed() {
                ops.push(q.l(p));
            }
        }
        if q.sequence_support() == Support::Half {
            for m in 0..3 {
                ops.push(OperatorSpec::b_z(q.modulus, 1 - 2 * m * q.modulus).unwrap());
            }
        }
        for op in ops {
            checked += compare_typea_identity(&op, &samples).map_err(|e| format!("{name}: {op}: {e}"))?;
        }
    }
    Ok(format!("{checked} operator applications compared"))
}

fn grid(ty: LieType, ell: i64, max_first_doubled: i64) -> Result<usize, String> {
    let rep = check_theorem_grid(ty, ell, max_first_doubled).map_err(|e| format!("{ty} ell={ell}: {e}"))?;
    match rep.failures.first() {
        Some(f) => Err(format!("{ty} ell={ell} {:?}: {}", f.lambda, f.failure.clone().unwrap_or_default())),
        None => Ok(rep.total),
    }
}

fn type_c_grid() -> Outcome {
    let mut n = 0;
    for rank in [3, 4] {
        for ell in [5, 8] {
            n += grid(LieType::new(Family::C, rank).unwrap(), ell, 12)?;
        }
    }
    Ok(format!("{n} weights"))
}

fn type_b_grid() -> Outcome {
    let mut n = 0;
    let (mut positive, mut zero_last) = (0, 0);
    for f in [Family::BInt, Family::BHalf] {
        for rank in [2, 3] {
            let ty = LieType::new(f, rank).unwrap();
            let top = if f == Family::BInt { 11 } else { 10 };
            for w in dominant_weights(ty, top) {
                if w.doubled()[rank - 1] > 0 {
                    positive += 1;
                } else {
                    zero_last += 1;
                }
            }
            for ell in [5, 7, 8] {
                n += grid(ty, ell, top)?;
            }
        }
    }
    if positive == 0 || zero_last == 0 {
        return Err("grid misses a branch of the tensor rule".into());
    }
    Ok(format!("{n} weights ({positive} with last coordinate > 0, {zero_last} with 0)"))
}

fn lemma_conformance() -> Outcome {
    let (mut two_sided, mut one_sided) = (0, 0);
    for f in Family::all() {
        for rank in 1..=3 {
            let Ok(ty) = LieType::new(f, rank) else { continue };
            for ell in [5, 7, 8] {
                let ctx = LinkageContext::new(ty, ell).map_err(|e| e.to_string())?;
                let top = 16 - rho(ty).unwrap().doubled()[0];
                let par = ty.support().dual().parity();
                let idx: Vec<i64> = (-40..=40).filter(|d: &i64| d.rem_euclid(2) == par).collect();
                for lam in dominant_weights(ty, top) {
                    for case in LemmaCase::all() {
                        let seconds: &[i64] = match case {
                            LemmaCase::SameKindE | LemmaCase::SameKindF | LemmaCase::Mixed => &idx,
                            _ => &[0],
                        };
                        for &r in &idx {
                            for &s in seconds {
                                let pred = match predict_linkage(case, &lam, r, s, &ctx) {
                                    Ok(p) => p,
                                    Err(Error::CaseInapplicable(_) | Error::ModulusTooSmall(_)) => continue,
                                    Err(e) => return Err(e.to_string()),
                                };
                                let (x, y) = case_weights(case, &lam, r, s).map_err(|e| e.to_string())?;
                                let l = linked(&x, &y, &ctx).map_err(|e| e.to_string())?;
                                if !pred.consistent_with(l) {
                                    return Err(format!("{ty} ell={ell} {lam:?} {case:?} r={r} s={s}: {pred:?} but linked={l}"));
                                }
                                match pred {
                                    fockqsp::linkage::Prediction::OneSided { .. } => one_sided += 1,
                                    _ => two_sided += 1,
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{two_sided} two-sided and {one_sided} one-sided cases"))
}

fn oracle_cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut pairs, mut linked_pairs) = (0, 0);
    for f in Family::all() {
        for rank in 1..=3 {
            let Ok(ty) = LieType::new(f, rank) else { continue };
            for ell in [5, 7, 8] {
                let ctx = LinkageContext::new(ty, ell).map_err(|e| e.to_string())?;
                let ws = dominant_weights(ty, 12);
                let mut bx = OrbitBox::new(&ctx, OrbitBox::default_radius(14 + 2 * rank as i64, ell)).map_err(|e| e.to_string())?;
                for _ in 0..500 {
                    let a = shifted(&ws[rng.gen_range(0..ws.len())]);
                    let b = shifted(&ws[rng.gen_range(0..ws.len())]);
                    // canonicalize asserts the strict decrease of its potential
                    let canon = linked_shifted(&a, &b, &ctx).map_err(|e| e.to_string())?;
                    let (c, _) = canonicalize(&a, &ctx).map_err(|e| e.to_string())?;
                    if canonicalize(&c, &ctx).map_err(|e| e.to_string())?.1 != 0 {
                        return Err(format!("{ty} ell={ell}: canonical form of {a:?} is not fixed"));
                    }
                    match bx.same_orbit(&a, &b) {
                        Some(bfs) if bfs == canon => {}
                        other => return Err(format!("{ty} ell={ell} {a:?} {b:?}: canonical {canon}, search {other:?}")),
                    }
                    pairs += 1;
                    linked_pairs += canon as usize;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs, {linked_pairs} linked"))
}

fn tensor_oracle_agreement() -> Outcome {
    let mut n = 0;
    for f in [Family::C, Family::BInt, Family::BHalf] {
        for rank in 1..=3 {
            let Ok(ty) = LieType::new(f, rank) else { continue };
            for w in dominant_weights(ty, 8) {
                let a = tensor_natural(ty, &w).map_err(|e| e.to_string())?;
                let b = tensor_oracle(ty, &w).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("{w:?}: rule {a:?} vs characters {b:?}"));
                }
                let mass: i64 = weyl_character(ty, &w).map_err(|e| e.to_string())?.values().sum();
                if BigInt::from(mass) != weyl_dimension(ty, &w) {
                    return Err(format!("{w:?}: character mass {mass}"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} weights"))
}

fn stabilization() -> Outcome {
    let mut n = 0;
    for f in [Family::C, Family::BInt, Family::BHalf] {
        for charge in [1, 2] {
            for a in sample_pool_with_charge(f.support(), 50, 20, charge, SEED) {
                for reps in 0..=2 {
                    let rep = check_iterated_seq(f, 5, &a, reps).map_err(|e| format!("{a}: {e}"))?;
                    if !rep.pass {
                        return Err(format!("{} {a} reps={reps}: {}", f.name(), rep.failure.unwrap_or_default()));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} iterated sums"))
}

fn suite_json(seed: u64) -> Result<String, String> {
    let q = Qsp::for_family(Family::BHalf, 7).unwrap();
    let rel = check_qsp(&q, &sample_pool(q.sequence_support(), 100, 30, seed)).map_err(|e| e.to_string())?;
    let grid = check_theorem_grid(LieType::new(Family::C, 3).unwrap(), 5, 12).map_err(|e| e.to_string())?;
    let it: Vec<_> = sample_pool_with_charge(Support::Half, 10, 20, 2, seed)
        .iter()
        .map(|a| check_iterated_seq(Family::BHalf, 5, a, 2))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&(rel, grid, it)).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let a = suite_json(SEED)?;
    let b = suite_json(SEED)?;
    if a != b {
        return Err("two runs differ".into());
    }
    Ok(format!("{} identical bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 symmetric pair relations", relation_suite, 120),
        ("2 quantum affine relations", typea_suite, 20),
        ("3 quantum affine expressions for B and L", typea_identities, 30),
        ("4 type C tensor theorem grid", type_c_grid, 60),
        ("5 type B tensor theorem grid", type_b_grid, 120),
        ("6 linkage lemma conformance", lemma_conformance, 120),
        ("7 canonical form versus orbit search", oracle_cross_validation, 60),
        ("8 tensor rule versus characters", tensor_oracle_agreement, 60),
        ("9 stabilized iterated sums", stabilization, 120),
        ("10 determinism", determinism, 120),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let t = Instant::now();
        let out = run();
        let dt = t.elapsed();
        let out = match out {
            Ok(d) if dt > Duration::from_secs(budget) => Err(format!("{d}, but took {dt:.1?} (budget {budget}s)")),
            other => other,
        };
        match out {
            Ok(d) => println!("PASS  {name}: {d} [{dt:.2?}]"),
            Err(d) => {
                failed += 1;
                println!("FAIL  {name}: {d} [{dt:.2?}]");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
