//! Invariant functions on nilpotent tuples and separating-set verification.
//!
//! Functions are evaluated on orbit representatives: every [`InvariantFn`] is
//! a class function (checked by [`check_class_functions`]), so separation of
//! orbits reduces to comparing value vectors over the canonical forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::canonical::{canonicalize, orbit_representatives_with, CanonicalForm, FormJson};
use crate::counting::{orbit_partition, OrbitAlgorithm, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::gf::{Field, GaloisField, Gf};
use crate::matrices::{enumerate_gl2_with_inverses, enumerate_nilpotent2, nilpotent_tuples, Mat2, NilTuple};

/// An invariant function. Indices are 1-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum InvariantFn<E> {
    /// `tr(Y_i Y_j)`
    TrPair(usize, usize),
    /// `tr(Y_i Y_j Y_k)`
    TrTriple(usize, usize, usize),
    /// 1 on the zero matrix, 0 elsewhere.
    Zeta(usize),
    /// 1 when `alpha Y_i = Y_j`, 0 elsewhere.
    Eta { alpha: E, i: usize, j: usize },
    /// Orbit-indexed value table.
    Indicator { label: String, table: Arc<BTreeMap<CanonicalForm<E>, E>> },
}

impl<E: Clone + Eq + Ord> InvariantFn<E> {
    fn indices(&self) -> Vec<usize> {
        match self {
            InvariantFn::TrPair(i, j) => vec![*i, *j],
            InvariantFn::TrTriple(i, j, k) => vec![*i, *j, *k],
            InvariantFn::Zeta(i) => vec![*i],
            InvariantFn::Eta { i, j, .. } => vec![*i, *j],
            InvariantFn::Indicator { .. } => vec![],
        }
    }

    pub fn label<F: Field<Elem = E>>(&self, f: &F) -> String {
        match self {
            InvariantFn::TrPair(i, j) => format!("tr(Y{i}Y{j})"),
            InvariantFn::TrTriple(i, j, k) => format!("tr(Y{i}Y{j}Y{k})"),
            InvariantFn::Zeta(i) => format!("zeta(Y{i})"),
            InvariantFn::Eta { alpha, i, j } => format!("eta_{}(Y{i},Y{j})", f.format_elem(alpha)),
            InvariantFn::Indicator { label, .. } => label.clone(),
        }
    }

    pub fn eval<F: Field<Elem = E>>(&self, t: &NilTuple<E>, f: &F) -> Result<E> {
        let m = t.m();
        if let Some(&index) = self.indices().iter().find(|&&i| i == 0 || i > m) {
            return Err(Error::IndexOutOfRange { index, m });
        }
        let y = |i: usize| t.get(i - 1);
        let indicator = |b: bool| if b { f.one() } else { f.zero() };
        Ok(match self {
            InvariantFn::TrPair(i, j) => y(*i).mul(y(*j), f).trace(f),
            InvariantFn::TrTriple(i, j, k) => y(*i).mul(y(*j), f).mul(y(*k), f).trace(f),
            InvariantFn::Zeta(i) => indicator(y(*i).is_zero(f)),
            InvariantFn::Eta { alpha, i, j } => indicator(y(*i).scale(alpha, f) == *y(*j)),
            InvariantFn::Indicator { label, table } => {
                let (form, _) = canonicalize(t, f)?;
                table
                    .get(&form)
                    .cloned()
                    .ok_or_else(|| Error::Invalid(format!("{label}: no value for orbit")))?
            }
        })
    }
}

/// `zeta` through its polynomial form
/// `y11^{q-1} - y12^{q-1} - y21^{q-1} + 1`, valid on nilpotent matrices.
pub fn zeta_poly(a: &Mat2<Gf>, f: &GaloisField) -> Gf {
    let e = f.q() as u64 - 1;
    let p = |x: &Gf| f.pow(x, e);
    let [a11, a12, a21, _] = &a.entries;
    let s = f.sub(&f.sub(&p(a11), &p(a12)), &p(a21));
    f.add(&s, &f.one())
}

/// `eta_alpha` through its polynomial form
/// `prod_{u,v} ((alpha a_uv - b_uv)^{q-1} - 1)`.
pub fn eta_poly(alpha: Gf, a: &Mat2<Gf>, b: &Mat2<Gf>, f: &GaloisField) -> Gf {
    let e = f.q() as u64 - 1;
    a.entries.iter().zip(&b.entries).fold(f.one(), |acc, (x, y)| {
        let d = f.sub(&f.mul(&alpha, x), y);
        f.mul(&acc, &f.sub(&f.pow(&d, e), &f.one()))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetKind {
    S2,
    S,
    H2,
    H,
    Custom,
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SetKind::S2 => "S2",
            SetKind::S => "S",
            SetKind::H2 => "H2",
            SetKind::H => "H",
            SetKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S2" => Ok(SetKind::S2),
            "S" => Ok(SetKind::S),
            "H2" => Ok(SetKind::H2),
            "H" => Ok(SetKind::H),
            other => Err(Error::Invalid(format!("unknown set kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSet<E> {
    pub kind: SetKind,
    pub m: usize,
    pub members: Vec<InvariantFn<E>>,
}

impl<E: Clone + Eq + Ord> InvariantSet<E> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn eval<F: Field<Elem = E>>(&self, t: &NilTuple<E>, f: &F) -> Result<Vec<E>> {
        self.members.iter().map(|g| g.eval(t, f)).collect()
    }

    pub fn labels<F: Field<Elem = E>>(&self, f: &F) -> Vec<String> {
        self.members.iter().map(|g| g.label(f)).collect()
    }

    /// The set with member `index` removed.
    pub fn without(&self, index: usize) -> Self {
        let mut members = self.members.clone();
        members.remove(index);
        InvariantSet { kind: SetKind::Custom, m: self.m, members }
    }
}

/// Builds one of the named sets for m-tuples.
///
/// `S2`: pair traces; `S`: pair and triple traces; `H2`/`H`: the trace sets
/// together with every `zeta(Y_i)` and every `eta_a(Y_i, Y_j)`, `i < j`,
/// `a` ranging over the field minus {0, 1}. The H sets need a finite field.
pub fn build_set<F: Field>(kind: SetKind, f: &F, m: usize) -> Result<InvariantSet<F::Elem>> {
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    let pairs = || (1..=m).flat_map(move |i| (i + 1..=m).map(move |j| (i, j)));
    let mut members: Vec<InvariantFn<F::Elem>> = pairs().map(|(i, j)| InvariantFn::TrPair(i, j)).collect();
    if matches!(kind, SetKind::S | SetKind::H) {
        for i in 1..=m {
            for j in i + 1..=m {
                for k in j + 1..=m {
                    members.push(InvariantFn::TrTriple(i, j, k));
                }
            }
        }
    }
    match kind {
        SetKind::S2 | SetKind::S => {}
        SetKind::H2 | SetKind::H => {
            let elements = f.elements().ok_or(Error::InfiniteField)?;
            let alphas: Vec<_> = elements
                .into_iter()
                .filter(|a| !f.is_zero(a) && *a != f.one())
                .collect();
            members.extend((1..=m).map(InvariantFn::Zeta));
            for (i, j) in pairs() {
                for alpha in &alphas {
                    members.push(InvariantFn::Eta { alpha: alpha.clone(), i, j });
                }
            }
        }
        SetKind::Custom => return Err(Error::Invalid("custom sets are assembled by hand".into())),
    }
    Ok(InvariantSet { kind, m, members })
}

/// `H2` in characteristic 2, `H` otherwise.
pub fn minimal_set_kind(f: &GaloisField) -> SetKind {
    if f.characteristic() == 2 {
        SetKind::H2
    } else {
        SetKind::H
    }
}

/// Size of `H2`: `m + C(m,2)(q-1)`; of `H`: that plus `C(m,3)`.
pub fn expected_size(kind: SetKind, q: u64, m: u64) -> Option<u64> {
    let c2 = m * m.saturating_sub(1) / 2;
    let c3 = m * m.saturating_sub(1) * m.saturating_sub(2) / 6;
    match kind {
        SetKind::S2 => Some(c2),
        SetKind::S => Some(c2 + c3),
        SetKind::H2 => Some(m + c2 * (q - 1)),
        SetKind::H => Some(m + c2 * (q - 1) + c3),
        SetKind::Custom => None,
    }
}

/// Outcome of [`check_separating`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub orbit_count: usize,
    pub separating: bool,
    /// Lexicographically least pair of distinct orbits with equal values.
    pub counterexample: Option<(CanonicalForm<Gf>, CanonicalForm<Gf>)>,
}

fn value_vectors(set: &InvariantSet<Gf>, reps: &[CanonicalForm<Gf>], f: &GaloisField, strategy: Strategy) -> Result<Vec<Vec<Gf>>> {
    exec::map_slice(strategy, reps, |r| set.eval(&r.materialize(f), f))
        .into_iter()
        .collect()
}

/// Decides whether `set` separates all GL2-orbits on m-tuples over `f`.
pub fn check_separating(set: &InvariantSet<Gf>, f: &GaloisField, m: usize) -> Result<SeparationReport> {
    check_separating_with(set, f, m, Strategy::default())
}

pub fn check_separating_with(set: &InvariantSet<Gf>, f: &GaloisField, m: usize, strategy: Strategy) -> Result<SeparationReport> {
    let reps = orbit_representatives_with(f, m, strategy)?;
    let values = value_vectors(set, &reps, f, strategy)?;
    let mut first_two: HashMap<&[Gf], (usize, Option<usize>)> = HashMap::new();
    for (j, v) in values.iter().enumerate() {
        first_two
            .entry(v.as_slice())
            .and_modify(|e| {
                if e.1.is_none() {
                    e.1 = Some(j);
                }
            })
            .or_insert((j, None));
    }
    let pair = first_two
        .values()
        .filter_map(|&(i, j)| j.map(|j| (i, j)))
        .min();
    Ok(SeparationReport {
        orbit_count: reps.len(),
        separating: pair.is_none(),
        counterexample: pair.map(|(i, j)| (reps[i].clone(), reps[j].clone())),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityEntry {
    pub element: String,
    /// Two orbits told apart by this element only.
    pub witness: Option<(CanonicalForm<Gf>, CanonicalForm<Gf>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub separating: bool,
    pub minimal: bool,
    pub entries: Vec<MinimalityEntry>,
}

/// For every member, looks for two orbits that only this member separates.
pub fn check_minimality(set: &InvariantSet<Gf>, f: &GaloisField, m: usize) -> Result<MinimalityReport> {
    check_minimality_with(set, f, m, Strategy::default())
}

pub fn check_minimality_with(set: &InvariantSet<Gf>, f: &GaloisField, m: usize, strategy: Strategy) -> Result<MinimalityReport> {
    let reps = orbit_representatives_with(f, m, strategy)?;
    let values = value_vectors(set, &reps, f, strategy)?;
    let separating = {
        let mut seen = std::collections::HashSet::new();
        values.iter().all(|v| seen.insert(v.as_slice()))
    };
    let witnesses = exec::map_range(strategy, set.len(), |e| {
        let mut masked: HashMap<Vec<Gf>, usize> = HashMap::new();
        for (j, v) in values.iter().enumerate() {
            let mut key = v.clone();
            key.remove(e);
            match masked.get(&key) {
                Some(&i) if values[i][e] != v[e] => return Some((i, j)),
                Some(_) => {}
                None => {
                    masked.insert(key, j);
                }
            }
        }
        None
    });
    let entries: Vec<MinimalityEntry> = set
        .members
        .iter()
        .zip(witnesses)
        .map(|(g, w)| MinimalityEntry {
            element: g.label(f),
            witness: w.map(|(i, j)| (reps[i].clone(), reps[j].clone())),
        })
        .collect();
    let minimal = separating && entries.iter().all(|e| e.witness.is_some());
    Ok(MinimalityReport { separating, minimal, entries })
}

/// Serializable verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub set: String,
    pub q: u64,
    pub m: usize,
    pub size: usize,
    pub separating: bool,
    pub minimal: Option<bool>,
    pub counterexample: Option<[FormJson; 2]>,
    pub witnesses: Vec<WitnessJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub element: String,
    pub a: Option<FormJson>,
    pub b: Option<FormJson>,
}

impl VerificationReport {
    pub fn new(
        set: &InvariantSet<Gf>,
        f: &GaloisField,
        separation: &SeparationReport,
        minimality: Option<&MinimalityReport>,
    ) -> Self {
        VerificationReport {
            set: set.kind.to_string(),
            q: f.q() as u64,
            m: set.m,
            size: set.len(),
            separating: separation.separating,
            minimal: minimality.map(|r| r.minimal),
            counterexample: separation
                .counterexample
                .as_ref()
                .map(|(a, b)| [a.to_json(f), b.to_json(f)]),
            witnesses: minimality
                .map(|r| {
                    r.entries
                        .iter()
                        .map(|e| WitnessJson {
                            element: e.element.clone(),
                            a: e.witness.as_ref().map(|w| w.0.to_json(f)),
                            b: e.witness.as_ref().map(|w| w.1.to_json(f)),
                        })
                        .collect()
                })
                .unwrap_or_default(),
        }
    }
}

/// Replay of one of the fixed minimality witnesses.
#[derive(Clone, Debug)]
pub struct ClaimCheck<E> {
    pub claim: u8,
    pub set: InvariantSet<E>,
    pub element: InvariantFn<E>,
    pub a: NilTuple<E>,
    pub b: NilTuple<E>,
    pub values_a: Vec<E>,
    pub values_b: Vec<E>,
}

impl<E: Clone + Eq + Ord> ClaimCheck<E> {
    fn element_index(&self) -> usize {
        self.set
            .members
            .iter()
            .position(|g| *g == self.element)
            .expect("element is a member")
    }

    /// The pair differs on the element and agrees on every other member.
    pub fn holds(&self) -> bool {
        let e = self.element_index();
        self.values_a
            .iter()
            .zip(&self.values_b)
            .enumerate()
            .all(|(i, (x, y))| (i == e) != (x == y))
    }

    pub fn element_values(&self) -> (E, E) {
        let e = self.element_index();
        (self.values_a[e].clone(), self.values_b[e].clone())
    }
}

/// Replays the standard witness pairs showing that no member of the
/// minimal separating set can be dropped.
///
/// Over a finite field the set is `H2` (characteristic 2) or `H`; claims:
/// 1. `zeta(Y1)`, m=1: `(0)` vs `(E12)`;
/// 2. `eta_b(Y1,Y2)`, m=2: `(E12,E12)` vs `(E12,b E12)` for each `b != 0,1`;
/// 3. `tr(Y1Y2)`, m=2: `(E12,E12)` vs `(E12,E21)`;
/// 4. `tr(Y1Y2Y3)`, m=3, odd or zero characteristic:
///    `(E12,E21,D(1,1,-1))` vs `(E12,E21,D(-1,1,-1))`.
///
/// Over the rationals only claims 3 and 4 apply, against the trace set `S`.
pub fn replay_claims<F: Field>(f: &F) -> Result<Vec<ClaimCheck<F::Elem>>> {
    let finite = f.elements().is_some();
    let kind = match (finite, f.characteristic()) {
        (true, 2) => SetKind::H2,
        (true, _) => SetKind::H,
        (false, _) => SetKind::S,
    };
    let e12 = Mat2::e12(f);
    let e21 = Mat2::e21(f);
    let tuple = |mats: Vec<Mat2<F::Elem>>| NilTuple::new(f, mats);
    let mut out = Vec::new();
    let mut push = |claim: u8, m: usize, element: InvariantFn<F::Elem>, a: NilTuple<F::Elem>, b: NilTuple<F::Elem>| -> Result<()> {
        let set = build_set(kind, f, m)?;
        let values_a = set.eval(&a, f)?;
        let values_b = set.eval(&b, f)?;
        out.push(ClaimCheck { claim, set, element, a, b, values_a, values_b });
        Ok(())
    };

    if finite {
        push(1, 1, InvariantFn::Zeta(1), tuple(vec![Mat2::zero(f)])?, tuple(vec![e12.clone()])?)?;
        for beta in f.elements().unwrap_or_default() {
            if f.is_zero(&beta) || beta == f.one() {
                continue;
            }
            let b = tuple(vec![e12.clone(), e12.scale(&beta, f)])?;
            push(2, 2, InvariantFn::Eta { alpha: beta.clone(), i: 1, j: 2 }, tuple(vec![e12.clone(), e12.clone()])?, b)?;
        }
    }
    push(
        3,
        2,
        InvariantFn::TrPair(1, 2),
        tuple(vec![e12.clone(), e12.clone()])?,
        tuple(vec![e12.clone(), e21.clone()])?,
    )?;
    if f.characteristic() != 2 {
        let one = f.one();
        let minus = f.neg(&one);
        let a3 = Mat2::traceless(f, one.clone(), one.clone(), minus.clone());
        let b3 = Mat2::traceless(f, minus.clone(), one.clone(), minus);
        push(
            4,
            3,
            InvariantFn::TrTriple(1, 2, 3),
            tuple(vec![e12.clone(), e21.clone(), a3])?,
            tuple(vec![e12, e21, b3])?,
        )?;
    }
    Ok(out)
}

/// Description of a failed exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type CheckResult = std::result::Result<usize, Violation>;

fn first_violation<T: Send>(strategy: Strategy, items: &[T], check: impl Fn(&T) -> Option<String> + Sync + Send) -> CheckResult
where
    T: Sync,
{
    match exec::find_first(strategy, items.len(), |i| check(&items[i])) {
        Some((_, msg)) => Err(Violation(msg)),
        None => Ok(items.len()),
    }
}

/// Every member takes equal values on `T` and `g . T` for all tuples and all
/// `g` in GL2.
pub fn check_class_functions(set: &InvariantSet<Gf>, f: &GaloisField, strategy: Strategy) -> Result<CheckResult> {
    let group = enumerate_gl2_with_inverses(f)?;
    let tuples = nilpotent_tuples(f, set.m);
    Ok(first_violation(strategy, &tuples, |t| {
        let base = set.eval(t, f).ok()?;
        group.iter().find_map(|(g, gi)| {
            let moved = t.conjugate_with(g, gi, f);
            let v = set.eval(&moved, f).ok()?;
            (v != base).then(|| format!("value changes under conjugation on {t:?}"))
        })
    }))
}

/// The polynomial forms of zeta and every eta_a, a != 0, agree with the
/// definitions on all nilpotent inputs.
pub fn check_poly_forms(f: &GaloisField, strategy: Strategy) -> CheckResult {
    let nil = enumerate_nilpotent2(f);
    let zeta_ok = nil.iter().all(|a| {
        let def = InvariantFn::Zeta(1).eval(&NilTuple::from_trusted(vec![a.clone()]), f).expect("m=1");
        def == zeta_poly(a, f)
    });
    if !zeta_ok {
        return Err(Violation("zeta polynomial form disagrees".into()));
    }
    let alphas = f.field_elements(true);
    let checked = first_violation(strategy, &nil, |a| {
        for b in &nil {
            let t = NilTuple::from_trusted(vec![a.clone(), b.clone()]);
            for &alpha in &alphas {
                let def = InvariantFn::Eta { alpha, i: 1, j: 2 }.eval(&t, f).expect("m=2");
                if def != eta_poly(alpha, a, b, f) {
                    return Some(format!("eta_{alpha} polynomial form disagrees on {a:?}, {b:?}"));
                }
            }
        }
        None
    })?;
    Ok(nil.len() + checked * nil.len() * alphas.len())
}

/// `eta_1(A1, A2)` equals its case expression through the other etas and
/// the pair trace, for all pairs.
pub fn check_eta_one_identity(f: &GaloisField, strategy: Strategy) -> CheckResult {
    let pairs = nilpotent_tuples(f, 2);
    let others: Vec<Gf> = f.field_elements(true).into_iter().filter(|&a| a != Gf(1)).collect();
    first_violation(strategy, &pairs, |t| {
        let (a, b) = (t.get(0), t.get(1));
        let eta = |alpha: Gf| InvariantFn::Eta { alpha, i: 1, j: 2 }.eval(t, f).expect("m=2");
        let tr = a.mul(b, f).trace(f);
        let expected = match (a.is_zero(f), b.is_zero(f)) {
            (true, true) => f.one(),
            (true, false) | (false, true) => f.zero(),
            (false, false) if tr != f.zero() => f.zero(),
            (false, false) => others.iter().fold(f.one(), |acc, &al| f.sub(&acc, &eta(al))),
        };
        (eta(Gf(1)) != expected).then(|| format!("eta_1 identity fails on {t:?}"))
    })
}

/// Triples with equal pair traces have equal triple trace (holds in
/// characteristic 2).
pub fn check_pair_traces_fix_triple_trace(f: &GaloisField) -> CheckResult {
    let triples = nilpotent_tuples(f, 3);
    let mut seen: HashMap<[Gf; 3], (Gf, usize)> = HashMap::new();
    for (idx, t) in triples.iter().enumerate() {
        let tr = |i: usize, j: usize| t.get(i).mul(t.get(j), f).trace(f);
        let key = [tr(0, 1), tr(0, 2), tr(1, 2)];
        let triple = t.get(0).mul(t.get(1), f).mul(t.get(2), f).trace(f);
        match seen.get(&key) {
            Some(&(v, first)) if v != triple => {
                return Err(Violation(format!(
                    "triples {:?} and {:?} share pair traces but not the triple trace",
                    triples[first], t
                )))
            }
            Some(_) => {}
            None => {
                seen.insert(key, (triple, idx));
            }
        }
    }
    Ok(triples.len())
}

/// `tr(A1 A2 A3) = -tr(A1 A3 A2)` for all nilpotent triples.
pub fn check_trace_antisymmetry(f: &GaloisField, strategy: Strategy) -> CheckResult {
    let triples = nilpotent_tuples(f, 3);
    first_violation(strategy, &triples, |t| {
        let (a, b, c) = (t.get(0), t.get(1), t.get(2));
        let lhs = a.mul(b, f).mul(c, f).trace(f);
        let rhs = f.neg(&a.mul(c, f).mul(b, f).trace(f));
        (lhs != rhs).then(|| format!("antisymmetry fails on {t:?}"))
    })
}

/// All nonzero entries are multiples of a single rank-one nilpotent.
fn on_one_line(t: &NilTuple<Gf>, f: &GaloisField) -> bool {
    let Some(base) = t.mats().iter().find(|a| !a.is_zero(f)) else {
        return true;
    };
    t.mats()
        .iter()
        .all(|a| f.field_elements(false).iter().any(|c| base.scale(c, f) == *a))
}

/// Pairs of tuples not separated by `S` are either in one orbit or both lie
/// on a line. Orbits come from the brute-force partition.
pub fn check_unseparated_structure(f: &GaloisField, m: usize, strategy: Strategy) -> Result<CheckResult> {
    let partition = orbit_partition(f, 2, m, OrbitAlgorithm::FullGroup, DEFAULT_BUDGET, strategy)?;
    let tuples = nilpotent_tuples(f, m);
    let set = build_set(SetKind::S, f, m)?;
    let mut groups: HashMap<Vec<Gf>, Vec<usize>> = HashMap::new();
    for (i, t) in tuples.iter().enumerate() {
        groups.entry(set.eval(t, f)?).or_default().push(i);
    }
    for members in groups.values() {
        let lines: Vec<bool> = members.iter().map(|&i| on_one_line(&tuples[i], f)).collect();
        let off_line: Vec<u32> = members
            .iter()
            .zip(&lines)
            .filter(|(_, &l)| !l)
            .map(|(&i, _)| partition.labels[i])
            .collect();
        if let Some(&first) = off_line.first() {
            if off_line.iter().any(|&l| l != first) || off_line.len() != members.len() {
                return Ok(Err(Violation(format!(
                    "S-class containing {:?} mixes orbits",
                    tuples[members[0]]
                ))));
            }
        }
    }
    Ok(Ok(tuples.len()))
}

/// Non-separation by `set` is stable under permuting both tuples the same way.
pub fn check_relabeling(kind: SetKind, f: &GaloisField, m: usize, strategy: Strategy) -> Result<CheckResult> {
    let set = build_set(kind, f, m)?;
    let reps = orbit_representatives_with(f, m, strategy)?;
    let tuples: Vec<NilTuple<Gf>> = reps.iter().map(|r| r.materialize(f)).collect();
    let values = exec::map_slice(strategy, &tuples, |t| set.eval(t, f))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let perms = permutations(m);
    let pairs: Vec<(usize, usize)> = (0..tuples.len())
        .flat_map(|i| (i..tuples.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| values[i] == values[j])
        .collect();
    Ok(first_violation(strategy, &pairs, |&(i, j)| {
        perms.iter().find_map(|p| {
            let a = set.eval(&tuples[i].permuted(p), f).ok()?;
            let b = set.eval(&tuples[j].permuted(p), f).ok()?;
            (a != b).then(|| format!("permutation {p:?} separates {:?} and {:?}", tuples[i], tuples[j]))
        })
    }))
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Rationals;

    fn f(p: u64, k: u32) -> GaloisField {
        GaloisField::new(p, k).unwrap()
    }

    fn tup(f: &GaloisField, mats: Vec<Mat2<Gf>>) -> NilTuple<Gf> {
        NilTuple::new(f, mats).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f3 = f(3, 1);
        let zero = Mat2::zero(&f3);
        let e12 = Mat2::e12(&f3);
        let e21 = Mat2::e21(&f3);
        assert_eq!(InvariantFn::Zeta(1).eval(&tup(&f3, vec![zero]), &f3).unwrap(), Gf(1));
        assert_eq!(InvariantFn::Zeta(1).eval(&tup(&f3, vec![e12.clone()]), &f3).unwrap(), Gf(0));
        let alpha = Gf(2);
        let eta = InvariantFn::Eta { alpha, i: 1, j: 2 };
        assert_eq!(eta.eval(&tup(&f3, vec![e12.clone(), e12.scale(&alpha, &f3)]), &f3).unwrap(), Gf(1));
        assert_eq!(eta.eval(&tup(&f3, vec![e12.clone(), e21.clone()]), &f3).unwrap(), Gf(0));
        assert_eq!(InvariantFn::TrPair(1, 2).eval(&tup(&f3, vec![e12.clone(), e21]), &f3).unwrap(), Gf(1));
        assert_eq!(
            InvariantFn::TrPair(1, 3).eval(&tup(&f3, vec![e12.clone(), e12]), &f3),
            Err(Error::IndexOutOfRange { index: 3, m: 2 })
        );
    }

    #[test]
    fn poly_examples() {
        let f2 = f(2, 1);
        assert_eq!(zeta_poly(&Mat2::zero(&f2), &f2), Gf(1));
        let f3 = f(3, 1);
        assert_eq!(zeta_poly(&Mat2::e12(&f3), &f3), Gf(0));
        let e12 = Mat2::e12(&f3);
        assert_eq!(eta_poly(Gf(2), &e12, &e12.scale(&Gf(2), &f3), &f3), Gf(1));
    }

    #[test]
    fn set_sizes() {
        let f2 = f(2, 1);
        let h2 = build_set(SetKind::H2, &f2, 2).unwrap();
        assert_eq!(h2.labels(&f2), vec!["tr(Y1Y2)", "zeta(Y1)", "zeta(Y2)"]);
        let f3 = f(3, 1);
        assert_eq!(build_set(SetKind::H, &f3, 2).unwrap().len(), 4);
        let s = build_set(SetKind::S, &Rationals, 3).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.members.iter().filter(|g| matches!(g, InvariantFn::TrTriple(..))).count(), 1);
        assert_eq!(build_set(SetKind::H, &Rationals, 2), Err(Error::InfiniteField));
        for q in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)] {
            let fld = f(q.0, q.1);
            for m in 1..=5 {
                for kind in [SetKind::S2, SetKind::S, SetKind::H2, SetKind::H] {
                    let got = build_set(kind, &fld, m).unwrap().len() as u64;
                    assert_eq!(Some(got), expected_size(kind, fld.q() as u64, m as u64));
                }
            }
        }
    }

    #[test]
    fn separation_examples() {
        let f2 = f(2, 1);
        let h2 = build_set(SetKind::H2, &f2, 2).unwrap();
        assert!(check_separating(&h2, &f2, 2).unwrap().separating);

        let f3 = f(3, 1);
        let s = build_set(SetKind::S, &f3, 2).unwrap();
        let report = check_separating(&s, &f3, 2).unwrap();
        assert!(!report.separating);
        let (a, b) = report.counterexample.unwrap();
        assert_ne!(a, b);
        assert_eq!(s.eval(&a.materialize(&f3), &f3), s.eval(&b.materialize(&f3), &f3));
        // the pattern pair from the eta claim is also unseparated by S
        let e12 = Mat2::e12(&f3);
        let x = tup(&f3, vec![e12.clone(), e12.clone()]);
        let y = tup(&f3, vec![e12.clone(), e12.scale(&Gf(2), &f3)]);
        assert_eq!(s.eval(&x, &f3).unwrap(), s.eval(&y, &f3).unwrap());

        let h = build_set(SetKind::H, &f3, 3).unwrap();
        assert!(check_separating(&h, &f3, 3).unwrap().separating);
    }

    #[test]
    fn minimality_examples() {
        let f2 = f(2, 1);
        let h2 = build_set(SetKind::H2, &f2, 1).unwrap();
        let report = check_minimality(&h2, &f2, 1).unwrap();
        assert!(report.minimal);
        let (a, b) = report.entries[0].witness.clone().unwrap();
        assert_eq!((a, b), (CanonicalForm::Zero { m: 1 }, CanonicalForm::Line { alphas: vec![Gf(1)] }));

        let f3 = f(3, 1);
        let h = build_set(SetKind::H, &f3, 3).unwrap();
        assert!(check_minimality(&h, &f3, 3).unwrap().minimal);
        // dropping the triple trace loses separation
        let without = h.without(h.members.iter().position(|g| matches!(g, InvariantFn::TrTriple(..))).unwrap());
        assert!(!check_separating(&without, &f3, 3).unwrap().separating);
        // S over GF(3) is not separating, hence not minimal
        let s = build_set(SetKind::S, &f3, 2).unwrap();
        assert!(!check_minimality(&s, &f3, 2).unwrap().minimal);
    }

    #[test]
    fn claims_over_finite_and_rational() {
        let f3 = f(3, 1);
        let checks = replay_claims(&f3).unwrap();
        assert_eq!(checks.iter().map(|c| c.claim).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert!(checks.iter().all(ClaimCheck::holds));
        assert_eq!(checks[3].element_values(), (Gf(1), Gf(2)));

        let f2 = f(2, 1);
        let checks = replay_claims(&f2).unwrap();
        assert_eq!(checks.iter().map(|c| c.claim).collect::<Vec<_>>(), vec![1, 3]);
        assert!(checks.iter().all(ClaimCheck::holds));

        let q = Rationals;
        let checks = replay_claims(&q).unwrap();
        assert_eq!(checks.iter().map(|c| c.claim).collect::<Vec<_>>(), vec![3, 4]);
        assert!(checks.iter().all(ClaimCheck::holds));
        let c4 = &checks[1];
        assert_eq!(c4.element_values(), (q.from_i64(1), q.from_i64(-1)));
    }

    #[test]
    fn identity_checks_small() {
        let f2 = f(2, 1);
        let f3 = f(3, 1);
        let s = Strategy::default();
        assert!(check_poly_forms(&f3, s).is_ok());
        assert!(check_eta_one_identity(&f3, s).is_ok());
        assert!(check_trace_antisymmetry(&f3, s).is_ok());
        assert!(check_pair_traces_fix_triple_trace(&f2).is_ok());
        // fails away from characteristic 2
        assert!(check_pair_traces_fix_triple_trace(&f3).is_err());
        assert!(check_unseparated_structure(&f2, 2, s).unwrap().is_ok());
        assert!(check_relabeling(SetKind::H, &f3, 3, s).unwrap().is_ok());
        let h2 = build_set(SetKind::H2, &f2, 2).unwrap();
        assert!(check_class_functions(&h2, &f2, s).unwrap().is_ok());
    }

    #[test]
    fn indicator_members() {
        let f2 = f(2, 1);
        let reps = orbit_representatives_with(&f2, 2, Strategy::Sequential).unwrap();
        let table: BTreeMap<_, _> = reps.iter().enumerate().map(|(i, r)| (r.clone(), Gf((i % 2) as u8))).collect();
        let g = InvariantFn::Indicator { label: "h".into(), table: Arc::new(table) };
        let e21 = Mat2::e21(&f2);
        let t = tup(&f2, vec![e21.clone(), e21]);
        // (E21, E21) ~ (E12, E12), the Line(1,1) orbit
        let idx = reps.iter().position(|r| *r == CanonicalForm::Line { alphas: vec![Gf(1), Gf(1)] }).unwrap();
        assert_eq!(g.eval(&t, &f2).unwrap(), Gf((idx % 2) as u8));
    }
}
