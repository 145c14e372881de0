//! The affine reflection group `W_ell`, exact linkage of dominant weights and
//! the closed-form linkage predictions for pairs of single moves.
//!
//! All points are `rho`-shifted and stored doubled. The group acts linearly;
//! a reflection sends `x` to `x - ((x, a^v) - k * ell_a) a`.

use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockseq::format_doubled;
use crate::weights::{embed, extract, is_dominant, shifted, Family, LieType, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootSystem {
    A,
    B,
    C,
}

impl RootSystem {
    pub fn of(family: Family) -> RootSystem {
        match family {
            Family::A => RootSystem::A,
            Family::C => RootSystem::C,
            Family::BInt | Family::BHalf => RootSystem::B,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootKind {
    /// `eps_i + eps_j`
    Plus,
    /// `eps_i - eps_j`
    Minus,
    /// `eps_i` in type B, `2 eps_i` in type C.
    Single,
}

/// A positive root. Indices are zero-based; `j` is unused for `Single`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub system: RootSystem,
    pub kind: RootKind,
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn minus(system: RootSystem, i: usize, j: usize) -> Root {
        Root { system, kind: RootKind::Minus, i, j }
    }

    pub fn plus(system: RootSystem, i: usize, j: usize) -> Root {
        Root { system, kind: RootKind::Plus, i, j }
    }

    pub fn single(system: RootSystem, i: usize) -> Result<Root> {
        if system == RootSystem::A {
            return Err(Error::FamilyMismatch("type A has no roots eps_i or 2 eps_i".into()));
        }
        Ok(Root { system, kind: RootKind::Single, i, j: i })
    }

    /// All positive roots of rank `n`.
    pub fn positive(system: RootSystem, n: usize) -> Vec<Root> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(Root::minus(system, i, j));
                if system != RootSystem::A {
                    out.push(Root::plus(system, i, j));
                }
            }
            if system != RootSystem::A {
                out.push(Root { system, kind: RootKind::Single, i, j: i });
            }
        }
        out
    }

    /// `(i, c_i), (j, c_j)` entries of the root vector.
    fn vector(self) -> [(usize, i64); 2] {
        match (self.kind, self.system) {
            (RootKind::Minus, _) => [(self.i, 1), (self.j, -1)],
            (RootKind::Plus, _) => [(self.i, 1), (self.j, 1)],
            (RootKind::Single, RootSystem::C) => [(self.i, 2), (self.i, 0)],
            (RootKind::Single, _) => [(self.i, 1), (self.i, 0)],
        }
    }

    fn coroot(self) -> [(usize, i64); 2] {
        match (self.kind, self.system) {
            (RootKind::Single, RootSystem::C) => [(self.i, 1), (self.i, 0)],
            (RootKind::Single, _) => [(self.i, 2), (self.i, 0)],
            _ => self.vector(),
        }
    }

    /// `d_a`: 1 on short roots, 2 on long roots (none for type A).
    pub fn d(self) -> i64 {
        match (self.kind, self.system) {
            (_, RootSystem::A) => 1,
            (RootKind::Single, RootSystem::C) => 2,
            (RootKind::Single, RootSystem::B) => 1,
            (_, RootSystem::C) => 1,
            _ => 2,
        }
    }

    /// Pairing with the coroot of a doubled point, still doubled.
    fn pair_doubled(self, x: &[i64]) -> i64 {
        self.coroot().iter().map(|(k, c)| c * x[*k]).sum()
    }

    fn check(self, n: usize) -> Result<()> {
        if self.i >= n || self.j >= n || (self.kind != RootKind::Single && self.i >= self.j) {
            return Err(Error::TypeMismatch(format!("root {self} for rank {n}")));
        }
        Ok(())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RootKind::Minus => write!(f, "e{}-e{}", self.i + 1, self.j + 1),
            RootKind::Plus => write!(f, "e{}+e{}", self.i + 1, self.j + 1),
            RootKind::Single if self.system == RootSystem::C => write!(f, "2e{}", self.i + 1),
            RootKind::Single => write!(f, "e{}", self.i + 1),
        }
    }
}

/// Type, modulus and the per-root step table `ell_a = ell / gcd(ell, d_a)`.
#[derive(Clone, Debug)]
pub struct LinkageContext {
    pub ty: LieType,
    pub ell: i64,
    roots: Vec<(Root, i64)>,
}

impl LinkageContext {
    pub fn new(ty: LieType, ell: i64) -> Result<LinkageContext> {
        if ell <= 3 {
            return Err(Error::ModulusTooSmall(ell));
        }
        let sys = RootSystem::of(ty.family);
        let roots = Root::positive(sys, ty.rank).into_iter().map(|a| (a, ell / ell.gcd(&a.d()))).collect();
        Ok(LinkageContext { ty, ell, roots })
    }

    pub fn system(&self) -> RootSystem {
        RootSystem::of(self.ty.family)
    }

    pub fn roots(&self) -> impl Iterator<Item = (Root, i64)> + '_ {
        self.roots.iter().copied()
    }

    pub fn ell_of(&self, a: Root) -> i64 {
        self.ell / self.ell.gcd(&a.d())
    }

    fn check_point(&self, x: &Weight) -> Result<()> {
        if RootSystem::of(x.ty().family) != self.system() || x.rank() != self.ty.rank {
            return Err(Error::FamilyMismatch(format!("{:?} in context {}", x, self.ty)));
        }
        Ok(())
    }
}

/// `(x, a^v)` as an integer.
pub fn pairing(x: &Weight, a: Root) -> Result<i64> {
    if RootSystem::of(x.ty().family) != a.system {
        return Err(Error::FamilyMismatch(format!("root {a} on {:?}", x)));
    }
    a.check(x.rank())?;
    let p = a.pair_doubled(x.doubled());
    if p % 2 != 0 {
        return Err(Error::NonIntegral);
    }
    Ok(p / 2)
}

fn reflect_doubled(x: &mut [i64], a: Root, k: i64, ell_a: i64) {
    let t = a.pair_doubled(x) - 2 * k * ell_a;
    for (idx, c) in a.vector() {
        x[idx] -= t * c;
    }
}

/// Reflection of the shifted point `x` in the hyperplane `(x, a^v) = k ell_a`.
pub fn reflect(x: &Weight, a: Root, k: i64, ctx: &LinkageContext) -> Result<Weight> {
    ctx.check_point(x)?;
    if a.system != ctx.system() {
        return Err(Error::FamilyMismatch(format!("root {a} in context {}", ctx.ty)));
    }
    a.check(x.rank())?;
    let mut c = x.doubled().to_vec();
    reflect_doubled(&mut c, a, k, ctx.ell_of(a));
    Ok(Weight::raw(x.ty(), c))
}

/// Hyperplanes of root `a` strictly between `x` and the fundamental alcove
/// `0 < (x, a^v) < ell_a`, given the doubled pairing `p` and `s = 2 ell_a`.
fn separating(p: i64, s: i64) -> i64 {
    if p < 0 {
        Integer::div_ceil(&-p, &s)
    } else if p > s {
        Integer::div_ceil(&p, &s) - 1
    } else {
        0
    }
}

/// Number of affine hyperplanes strictly separating `x` from the
/// fundamental alcove.
pub fn potential(x: &[i64], ctx: &LinkageContext) -> i64 {
    ctx.roots.iter().map(|(a, l)| separating(a.pair_doubled(x), 2 * l)).sum()
}

/// Representative of the orbit of `x` in the closed fundamental alcove,
/// with the number of reflections used.
///
/// Each step reflects in a hyperplane separating the point from the alcove,
/// which strictly lowers [`potential`]; this is asserted.
pub fn canonicalize(x: &Weight, ctx: &LinkageContext) -> Result<(Weight, usize)> {
    ctx.check_point(x)?;
    let mut c = x.doubled().to_vec();
    let mut pot = potential(&c, ctx);
    let mut steps = 0;
    loop {
        let hit = ctx.roots.iter().find_map(|(a, l)| {
            let p = a.pair_doubled(&c);
            if p < 0 {
                Some((*a, 0, *l))
            } else if p > 2 * l {
                Some((*a, 1, *l))
            } else {
                None
            }
        });
        let Some((a, k, l)) = hit else { break };
        reflect_doubled(&mut c, a, k, l);
        let next = potential(&c, ctx);
        assert!(next < pot, "canonicalization potential did not decrease ({pot} -> {next})");
        pot = next;
        steps += 1;
    }
    debug_assert_eq!(pot, 0);
    Ok((Weight::raw(x.ty(), c), steps))
}

/// Linkage of shifted points.
pub fn linked_shifted(x: &Weight, y: &Weight, ctx: &LinkageContext) -> Result<bool> {
    Ok(canonicalize(x, ctx)?.0 == canonicalize(y, ctx)?.0)
}

/// `lambda + rho` and `mu + rho` lie in one `W_ell` orbit.
pub fn linked(lambda: &Weight, mu: &Weight, ctx: &LinkageContext) -> Result<bool> {
    if lambda.ty() != mu.ty() || lambda.ty() != ctx.ty {
        return Err(Error::TypeMismatch(format!("{lambda:?} vs {mu:?} in context {}", ctx.ty)));
    }
    for w in [lambda, mu] {
        if !is_dominant(ctx.ty, w)? {
            return Err(Error::NotDominant(w.to_string()));
        }
    }
    linked_shifted(&shifted(lambda), &shifted(mu), ctx)
}

/// Orbit components of the reflection action restricted to the box
/// `|x_i| <= radius` (doubled), labelled lazily by breadth-first search.
///
/// Independent of the alcove geometry; only reflections that keep a point
/// inside the box are followed.
pub struct OrbitBox {
    ctx: LinkageContext,
    radius: i64,
    side: usize,
    labels: Vec<u32>,
    next_label: u32,
}

impl OrbitBox {
    const MAX_CELLS: usize = 1 << 26;

    /// `radius` is doubled.
    pub fn new(ctx: &LinkageContext, radius: i64) -> Result<OrbitBox> {
        let side = (2 * radius + 1) as usize;
        let cells = side.checked_pow(ctx.ty.rank as u32).filter(|c| *c <= Self::MAX_CELLS);
        let cells = cells.ok_or(Error::RankTooLarge(ctx.ty.rank))?;
        Ok(OrbitBox { ctx: ctx.clone(), radius, side, labels: vec![0; cells], next_label: 1 })
    }

    /// Default radius: the largest coordinate plus `2 ell`, doubled.
    pub fn default_radius(max_abs_doubled: i64, ell: i64) -> i64 {
        max_abs_doubled + 4 * ell
    }

    fn index(&self, x: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for c in x.iter().rev() {
            if c.abs() > self.radius {
                return None;
            }
            idx = idx * self.side + (c + self.radius) as usize;
        }
        Some(idx)
    }

    fn label(&mut self, x: &[i64]) -> Option<u32> {
        let start = self.index(x)?;
        if self.labels[start] != 0 {
            return Some(self.labels[start]);
        }
        let lab = self.next_label;
        self.next_label += 1;
        self.labels[start] = lab;
        let mut queue = VecDeque::from([x.to_vec()]);
        let roots: Vec<(Root, i64)> = self.ctx.roots().collect();
        let span = 4 * self.radius;
        while let Some(p) = queue.pop_front() {
            for (a, l) in &roots {
                let pd = a.pair_doubled(&p);
                let step = 2 * l;
                // the image moves each touched coordinate by at most 2 * (pd - k*step)
                let kmin = Integer::div_floor(&(pd - span), &step);
                let kmax = Integer::div_ceil(&(pd + span), &step);
                for k in kmin..=kmax {
                    if pd == k * step {
                        continue;
                    }
                    let mut q = p.clone();
                    reflect_doubled(&mut q, *a, k, *l);
                    if let Some(qi) = self.index(&q) {
                        if self.labels[qi] == 0 {
                            self.labels[qi] = lab;
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        Some(lab)
    }

    /// `None` when either point lies outside the box.
    pub fn same_orbit(&mut self, x: &Weight, y: &Weight) -> Option<bool> {
        let a = self.label(x.doubled())?;
        let b = self.label(y.doubled())?;
        Some(a == b)
    }
}

/// Which two single moves applied to a dominant weight are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LemmaCase {
    /// `e_r lambda` vs `e_s lambda`, `r != s`
    SameKindE,
    /// `f_r lambda` vs `f_s lambda`, `r != s`
    SameKindF,
    /// `e_r lambda` vs `f_s lambda`, `s != r + 1`
    Mixed,
    /// `e_{r-1} lambda` vs `f_r lambda`
    MixedAdjacent,
    /// `lambda` vs `e_r lambda`
    IdentityE,
    /// `lambda` vs `f_r lambda`
    IdentityF,
}

impl LemmaCase {
    pub fn all() -> [LemmaCase; 6] {
        use LemmaCase::*;
        [SameKindE, SameKindF, Mixed, MixedAdjacent, IdentityE, IdentityF]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Prediction {
    Linked,
    NotLinked,
    /// Only "linked implies the congruence" is known.
    OneSided { condition_holds: bool },
}

impl Prediction {
    fn from_bool(b: bool) -> Prediction {
        if b {
            Prediction::Linked
        } else {
            Prediction::NotLinked
        }
    }

    /// Whether an observed linkage is consistent with the prediction.
    pub fn consistent_with(self, linked: bool) -> bool {
        match self {
            Prediction::Linked => linked,
            Prediction::NotLinked => !linked,
            Prediction::OneSided { condition_holds } => condition_holds || !linked,
        }
    }
}

/// `x in c + m Z`, all doubled except `m`.
fn congruent(x: i64, c: i64, m: i64) -> bool {
    (x - c).rem_euclid(2 * m) == 0
}

fn apply_move(ty: LieType, lambda: &Weight, e: bool, idx: i64) -> Result<Weight> {
    let a = embed(ty, lambda)?;
    let moved = if e { a.move_e(idx)? } else { a.move_f(idx)? };
    let b = moved.ok_or_else(|| {
        Error::CaseInapplicable(format!("{} at {} acts as zero", if e { "e" } else { "f" }, format_doubled(idx)))
    })?;
    extract(ty, &b).ok_or_else(|| Error::CaseInapplicable(format!("move at {} leaves the image", format_doubled(idx))))
}

/// The two weights compared by a lemma case; errors when a move is zero or
/// leaves the embedded image. `r`, `s` are doubled.
pub fn case_weights(case: LemmaCase, lambda: &Weight, r: i64, s: i64) -> Result<(Weight, Weight)> {
    let ty = lambda.ty();
    let distinct = |ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(Error::CaseInapplicable(format!("indices {} and {}", format_doubled(r), format_doubled(s))))
        }
    };
    match case {
        LemmaCase::SameKindE => {
            distinct(r != s)?;
            Ok((apply_move(ty, lambda, true, r)?, apply_move(ty, lambda, true, s)?))
        }
        LemmaCase::SameKindF => {
            distinct(r != s)?;
            Ok((apply_move(ty, lambda, false, r)?, apply_move(ty, lambda, false, s)?))
        }
        LemmaCase::Mixed => {
            distinct(s != r + 2)?;
            Ok((apply_move(ty, lambda, true, r)?, apply_move(ty, lambda, false, s)?))
        }
        LemmaCase::MixedAdjacent => Ok((apply_move(ty, lambda, true, r - 2)?, apply_move(ty, lambda, false, r)?)),
        LemmaCase::IdentityE => Ok((lambda.clone(), apply_move(ty, lambda, true, r)?)),
        LemmaCase::IdentityF => Ok((lambda.clone(), apply_move(ty, lambda, false, r)?)),
    }
}

/// Closed-form linkage of the two weights of a lemma case.
pub fn predict_linkage(case: LemmaCase, lambda: &Weight, r: i64, s: i64, ctx: &LinkageContext) -> Result<Prediction> {
    if lambda.ty() != ctx.ty {
        return Err(Error::TypeMismatch(format!("{lambda:?} in context {}", ctx.ty)));
    }
    case_weights(case, lambda, r, s)?;
    let ell = ctx.ell;
    let fam = ctx.ty.family;
    let inapplicable = || Error::CaseInapplicable(format!("{case:?} for family {fam}"));
    use LemmaCase::*;
    let b_even = fam.is_b() && ell % 2 == 0;
    let m = if b_even { ell / 2 } else { ell };
    if b_even && m <= 3 {
        return Err(Error::ModulusTooSmall(ell));
    }
    let p = match (case, fam) {
        (SameKindE | SameKindF, _) => Prediction::from_bool(congruent(r, s, m)),
        (_, Family::A) => return Err(inapplicable()),
        (Mixed, _) => Prediction::from_bool(congruent(r, -s, m)),
        (MixedAdjacent, Family::C) => Prediction::from_bool(congruent(r, 1, if ell % 2 == 0 { ell / 2 } else { ell })),
        (IdentityE | IdentityF, Family::C) => return Err(inapplicable()),
        (MixedAdjacent, Family::BInt) if !b_even => Prediction::from_bool(congruent(r, 1, ell)),
        (MixedAdjacent, Family::BHalf) if !b_even => Prediction::from_bool(congruent(r, ell + 1, ell)),
        (IdentityE | IdentityF, Family::BInt) if !b_even => Prediction::from_bool(congruent(r, ell, ell)),
        (IdentityE | IdentityF, Family::BHalf) if !b_even => Prediction::from_bool(congruent(r, 0, ell)),
        (MixedAdjacent, Family::BInt) if m % 2 == 1 => Prediction::from_bool(congruent(r, 1, m)),
        (MixedAdjacent, Family::BInt) => Prediction::OneSided {
            condition_holds: congruent(r, 1, m) || congruent(r, (ell + 2) / 2, m),
        },
        (MixedAdjacent, Family::BHalf) if m % 2 == 1 => Prediction::OneSided { condition_holds: congruent(r, (ell + 2) / 2, m) },
        (MixedAdjacent, Family::BHalf) => Prediction::NotLinked,
        (IdentityE | IdentityF, Family::BInt) => Prediction::NotLinked,
        (IdentityE | IdentityF, Family::BHalf) => Prediction::from_bool(congruent(r, 0, m)),
    };
    Ok(p)
}
