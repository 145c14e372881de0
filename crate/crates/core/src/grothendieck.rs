//! Tensor products with the natural representation: the combinatorial rule,
//! a Weyl character oracle, and comparisons with the Fock space operators.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockseq::Sequence;
use crate::linkage::{linked, LinkageContext};
use crate::operators::{apply_sum_b_parts, eval_decomposition, iterated_sum, project_embedded, Iterated};
use crate::weights::{dominant_weights, embed, is_dominant, rho, Family, LieType, Weight};

/// Weights with multiplicities.
pub type Multiset = BTreeMap<Weight, BigInt>;

/// Multiplicities of all weights of a module, keyed by doubled coordinates.
pub type CharacterTable = BTreeMap<Weight, i64>;

/// `lambda (x) natural`: every dominant `lambda +- eps_i` once, and for
/// type B also `lambda` itself when `lambda_N > 0`. Type A only adds.
pub fn tensor_natural(ty: LieType, lambda: &Weight) -> Result<Multiset> {
    if !is_dominant(ty, lambda)? {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    let mut out = Multiset::new();
    let signs: &[i64] = if ty.family == Family::A { &[1] } else { &[1, -1] };
    for i in 0..ty.rank {
        for &s in signs {
            let mu = lambda.plus_eps(i, s);
            if is_dominant(ty, &mu)? {
                *out.entry(mu).or_insert_with(BigInt::zero) += 1;
            }
        }
    }
    if ty.family.is_b() && lambda.doubled().last().is_some_and(|c| *c > 0) {
        *out.entry(lambda.clone()).or_insert_with(BigInt::zero) += 1;
    }
    Ok(out)
}

/// `reps`-fold iteration of [`tensor_natural`] starting from `lambda`.
pub fn iterate_tensor_natural(ty: LieType, lambda: &Weight, reps: usize) -> Result<Multiset> {
    let mut cur = Multiset::from([(lambda.clone(), BigInt::one())]);
    for _ in 0..reps {
        let mut next = Multiset::new();
        for (mu, m) in &cur {
            for (nu, k) in tensor_natural(ty, mu)? {
                *next.entry(nu).or_insert_with(BigInt::zero) += m * k;
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// Elements of the finite Weyl group as (permutation, signs, determinant).
fn weyl_group(ty: LieType) -> Vec<(Vec<usize>, Vec<i64>, i64)> {
    let n = ty.rank;
    let mut perms: Vec<(Vec<usize>, i64)> = Vec::new();
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<(Vec<usize>, i64)>) {
        if cur.len() == n {
            let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| cur[i] > cur[j]).count();
            out.push((cur.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, n, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    rec(&mut Vec::new(), &mut vec![false; n], n, &mut perms);
    let sign_sets: Vec<Vec<i64>> = if ty.family == Family::A {
        vec![vec![1; n]]
    } else {
        (0..1u32 << n).map(|m| (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
    };
    let mut out = Vec::new();
    for (p, d) in &perms {
        for s in &sign_sets {
            out.push((p.clone(), s.clone(), d * s.iter().product::<i64>()));
        }
    }
    out
}

/// Positive roots as doubled vectors.
fn positive_roots(ty: LieType) -> Vec<Vec<i64>> {
    let n = ty.rank;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut a = vec![0; n];
            a[i] = 2;
            a[j] = -2;
            out.push(a.clone());
            if ty.family != Family::A {
                a[j] = 2;
                out.push(a);
            }
        }
        match ty.family {
            Family::C => {
                let mut a = vec![0; n];
                a[i] = 4;
                out.push(a);
            }
            Family::BInt | Family::BHalf => {
                let mut a = vec![0; n];
                a[i] = 2;
                out.push(a);
            }
            Family::A => {}
        }
    }
    out
}

/// Divides `f` by `1 - e^{-a}`: `g(mu) = sum_{k >= 0} f(mu + k a)`.
fn divide_by_root(f: &HashMap<Vec<i64>, i64>, a: &[i64]) -> Result<HashMap<Vec<i64>, i64>> {
    let i = a.iter().position(|c| *c != 0).expect("nonzero root");
    let step = a[i];
    let mut strings: HashMap<Vec<i64>, BTreeMap<i64, i64>> = HashMap::new();
    for (mu, c) in f {
        let t = mu[i].div_euclid(step);
        let base: Vec<i64> = mu.iter().zip(a).map(|(m, x)| m - t * x).collect();
        *strings.entry(base).or_default().entry(t).or_insert(0) += c;
    }
    let mut g = HashMap::new();
    for (base, entries) in strings {
        let total: i64 = entries.values().sum();
        if total != 0 {
            return Err(Error::PeelingFailure("Weyl denominator does not divide the alternant".into()));
        }
        let (&lo, _) = entries.iter().next().expect("nonempty string");
        let (&hi, _) = entries.iter().next_back().expect("nonempty string");
        let mut acc = 0;
        for t in (lo..=hi).rev() {
            acc += entries.get(&t).copied().unwrap_or(0);
            if acc != 0 {
                g.insert(base.iter().zip(a).map(|(b, x)| b + t * x).collect(), acc);
            }
        }
    }
    Ok(g)
}

/// Largest rank accepted by [`weyl_character`].
pub const MAX_CHARACTER_RANK: usize = 4;

/// Weight multiplicities of the irreducible module of highest weight
/// `lambda`, from the alternating sum over the finite Weyl group divided by
/// the Weyl denominator.
pub fn weyl_character(ty: LieType, lambda: &Weight) -> Result<CharacterTable> {
    if ty.rank > MAX_CHARACTER_RANK {
        return Err(Error::RankTooLarge(ty.rank));
    }
    if !is_dominant(ty, lambda)? {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    let r = rho(ty)?;
    let top: Vec<i64> = lambda.doubled().iter().zip(r.doubled()).map(|(a, b)| a + b).collect();
    let mut f: HashMap<Vec<i64>, i64> = HashMap::new();
    for (perm, signs, det) in weyl_group(ty) {
        let w: Vec<i64> = (0..ty.rank).map(|k| signs[k] * top[perm[k]] - r.doubled()[k]).collect();
        *f.entry(w).or_insert(0) += det;
    }
    f.retain(|_, c| *c != 0);
    for a in positive_roots(ty) {
        f = divide_by_root(&f, &a)?;
    }
    let mut out = CharacterTable::new();
    for (mu, c) in f {
        if c < 0 {
            return Err(Error::PeelingFailure(format!("negative weight multiplicity {c}")));
        }
        out.insert(Weight::raw(ty, mu), c);
    }
    Ok(out)
}

/// Dimension from the product formula over positive roots.
pub fn weyl_dimension(ty: LieType, lambda: &Weight) -> BigInt {
    let r = rho(ty).expect("rho");
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for a in positive_roots(ty) {
        let dot = |x: &[i64]| -> i64 { x.iter().zip(&a).map(|(p, q)| p * q).sum() };
        let top: Vec<i64> = lambda.doubled().iter().zip(r.doubled()).map(|(p, q)| p + q).collect();
        num *= dot(&top);
        den *= dot(r.doubled());
    }
    num / den
}

/// Character of the natural representation.
pub fn natural_character(ty: LieType) -> CharacterTable {
    let mut out = CharacterTable::new();
    let n = ty.rank;
    for i in 0..n {
        for s in [1i64, -1] {
            if s == -1 && ty.family == Family::A {
                continue;
            }
            let mut c = vec![0; n];
            c[i] = 2 * s;
            out.insert(Weight::raw(ty, c), 1);
        }
    }
    if ty.family.is_b() {
        out.insert(Weight::raw(ty, vec![0; n]), 1);
    }
    out
}

pub fn multiply(a: &CharacterTable, b: &CharacterTable) -> CharacterTable {
    let mut out = CharacterTable::new();
    for (x, m) in a {
        for (y, k) in b {
            *out.entry(x.add(y)).or_insert(0) += m * k;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Splits a character into irreducibles by repeatedly removing the
/// lexicographically largest dominant weight.
pub fn peel(ty: LieType, mut ch: CharacterTable) -> Result<Multiset> {
    let mut out = Multiset::new();
    loop {
        ch.retain(|_, c| *c != 0);
        if let Some((w, c)) = ch.iter().find(|(_, c)| **c < 0) {
            return Err(Error::PeelingFailure(format!("{w} has multiplicity {c}")));
        }
        let top = ch.keys().filter(|w| is_dominant(ty, w).unwrap_or(false)).max_by(|a, b| a.doubled().cmp(b.doubled()));
        let Some(top) = top.cloned() else { break };
        let m = ch[&top];
        for (w, k) in weyl_character(ty, &top)? {
            *ch.entry(w).or_insert(0) -= m * k;
        }
        out.insert(top, BigInt::from(m));
    }
    if !ch.is_empty() {
        return Err(Error::PeelingFailure("non-dominant weights remain".into()));
    }
    Ok(out)
}

/// `lambda (x) natural` from characters.
pub fn tensor_oracle(ty: LieType, lambda: &Weight) -> Result<Multiset> {
    let ch = multiply(&weyl_character(ty, lambda)?, &natural_character(ty));
    peel(ty, ch)
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub lambda: Weight,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

fn fmt_multiset(m: &Multiset) -> String {
    let parts: Vec<String> = m.iter().map(|(w, k)| format!("{w}:{k}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Projects the aggregate operator image, evaluates at `v = 1` and compares
/// with [`tensor_natural`]; also requires every linked pair of output
/// weights to come from exactly one class.
pub fn check_theorem(ty: LieType, ell: i64, lambda: &Weight) -> Result<TheoremReport> {
    let parts = apply_sum_b_parts(ty, ell, lambda)?;
    let mut total = crate::Fock::zero(ty.support());
    let mut supports = Vec::new();
    for (_, part) in &parts {
        let proj = project_embedded(ty, part);
        total = total.add(&proj)?;
        supports.push(eval_decomposition(&proj, ty)?);
    }
    let got = eval_decomposition(&total, ty)?;
    let want = tensor_natural(ty, lambda)?;
    let fail = |msg: String| Ok(TheoremReport { lambda: lambda.clone(), pass: false, failure: Some(msg) });
    if got != want {
        return fail(format!("operators give {} but the tensor rule gives {}", fmt_multiset(&got), fmt_multiset(&want)));
    }
    let ctx = LinkageContext::new(ty, ell)?;
    let ws: Vec<&Weight> = got.keys().collect();
    for (i, mu) in ws.iter().enumerate() {
        for nu in &ws[i + 1..] {
            if linked(mu, nu, &ctx)? {
                let n = supports.iter().filter(|s| s.contains_key(*mu) && s.contains_key(*nu)).count();
                if n != 1 {
                    return fail(format!("linked pair {mu}, {nu} appears in {n} classes"));
                }
            }
        }
    }
    Ok(TheoremReport { lambda: lambda.clone(), pass: true, failure: None })
}

#[derive(Clone, Debug, Serialize)]
pub struct GridReport {
    pub total: usize,
    pub pass: usize,
    pub failures: Vec<TheoremReport>,
}

/// [`check_theorem`] for every dominant weight with first coordinate at
/// most `max_first_doubled`.
pub fn check_theorem_grid(ty: LieType, ell: i64, max_first_doubled: i64) -> Result<GridReport> {
    let weights = dominant_weights(ty, max_first_doubled);
    let reports: Vec<TheoremReport> =
        weights.par_iter().map(|w| check_theorem(ty, ell, w)).collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().filter(|r| r.pass).count();
    let failures = reports.into_iter().filter(|r| !r.pass).collect();
    Ok(GridReport { total: weights.len(), pass, failures })
}

#[derive(Clone, Debug, Serialize)]
pub struct IteratedReport {
    pub sequence: Sequence,
    pub m: i64,
    pub lambda: Weight,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(skip)]
    pub iterated: Option<Iterated>,
}

/// Compares the iterated operator sum at `v = 1` with the iterated tensor
/// rule at the stabilized rank.
pub fn check_iterated_seq(family: Family, ell: i64, a: &Sequence, reps: usize) -> Result<IteratedReport> {
    let it = iterated_sum(family, ell, a, reps)?;
    let ty = it.lambda.ty();
    let mut got = Multiset::new();
    for (w, c) in &it.coefficients {
        let m = c.eval_one();
        if !m.is_zero() {
            got.insert(w.clone(), m);
        }
    }
    let want = iterate_tensor_natural(ty, &it.lambda, reps)?;
    let failure = (got != want).then(|| {
        format!("operators give {} but the tensor rule gives {}", fmt_multiset(&got), fmt_multiset(&want))
    });
    Ok(IteratedReport { sequence: a.clone(), m: it.m, lambda: it.lambda.clone(), pass: failure.is_none(), failure, iterated: Some(it) })
}

/// [`check_iterated_seq`] starting from an embedded weight.
pub fn check_iterated(ty: LieType, ell: i64, lambda: &Weight, reps: usize) -> Result<IteratedReport> {
    check_iterated_seq(ty.family, ell, &embed(ty, lambda)?, reps)
}
