//! Canonical forms for GL2-orbits on tuples of nilpotent 2x2 matrices.
//!
//! Every orbit contains exactly one tuple of one of three shapes:
//!
//! * `Zero`: the zero tuple;
//! * `Line`: `(a_1 E12, ..., a_m E12)`, not all `a_i` zero, the first nonzero
//!   one equal to 1;
//! * `Split`: `(a_1 E12, ..., a_r E12, b E21, D_1, ..., D_s)` with the prefix
//!   normalized as for `Line`, `b != 0`, and arbitrary nilpotent `D_i`.
//!
//! [`canonicalize`] computes the form together with a conjugating matrix, and
//! [`orbit_representatives`] lists every form for a finite field directly.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::gf::{Field, GaloisField, Gf};
use crate::matrices::{enumerate_nilpotent2, Mat2, NilTuple};

/// Representative generation refuses tuples longer than this.
pub const MAX_REPRESENTATIVE_M: usize = 6;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CanonicalForm<E> {
    Zero { m: usize },
    Line { alphas: Vec<E> },
    Split { prefix: Vec<E>, pivot: E, tail: Vec<Mat2<E>> },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum FormTag {
    Zero,
    Line,
    Split,
}

impl<E: Clone + Eq> CanonicalForm<E> {
    pub fn m(&self) -> usize {
        match self {
            CanonicalForm::Zero { m } => *m,
            CanonicalForm::Line { alphas } => alphas.len(),
            CanonicalForm::Split { prefix, tail, .. } => prefix.len() + 1 + tail.len(),
        }
    }

    pub fn tag(&self) -> FormTag {
        match self {
            CanonicalForm::Zero { .. } => FormTag::Zero,
            CanonicalForm::Line { .. } => FormTag::Line,
            CanonicalForm::Split { .. } => FormTag::Split,
        }
    }

    /// The tuple this form stands for.
    pub fn materialize<F: Field<Elem = E>>(&self, f: &F) -> NilTuple<E> {
        let e12 = Mat2::e12(f);
        let mats = match self {
            CanonicalForm::Zero { m } => vec![Mat2::zero(f); *m],
            CanonicalForm::Line { alphas } => alphas.iter().map(|a| e12.scale(a, f)).collect(),
            CanonicalForm::Split { prefix, pivot, tail } => prefix
                .iter()
                .map(|a| e12.scale(a, f))
                .chain(std::iter::once(Mat2::e21(f).scale(pivot, f)))
                .chain(tail.iter().cloned())
                .collect(),
        };
        NilTuple::from_trusted(mats)
    }

    /// Checks the normalization rules of the form.
    pub fn validate<F: Field<Elem = E>>(&self, f: &F) -> Result<()> {
        let leading_one = |v: &[E]| match v.iter().find(|a| !f.is_zero(a)) {
            Some(a) if *a == f.one() => Ok(()),
            Some(_) => Err(Error::Invalid("first nonzero coefficient must be 1".into())),
            None => Err(Error::Invalid("coefficients must not all vanish".into())),
        };
        match self {
            CanonicalForm::Zero { m } if *m == 0 => Err(Error::EmptyTuple),
            CanonicalForm::Zero { .. } => Ok(()),
            CanonicalForm::Line { alphas } => leading_one(alphas),
            CanonicalForm::Split { prefix, pivot, tail } => {
                leading_one(prefix)?;
                if f.is_zero(pivot) {
                    return Err(Error::Invalid("pivot must be nonzero".into()));
                }
                if tail.iter().any(|d| !d.is_nilpotent(f)) {
                    return Err(Error::NotNilpotent);
                }
                Ok(())
            }
        }
    }

    /// Short text rendering: `Zero`, `Line(1,0)`, `Split(1;2;[1,1,2,2])`.
    pub fn display<'a, F: Field<Elem = E>>(&'a self, f: &'a F) -> impl fmt::Display + 'a {
        DisplayForm { form: self, field: f }
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> FormJson {
        let enc = |v: &[E]| v.iter().map(|x| f.elem_to_json(x)).collect::<Vec<_>>();
        match self {
            CanonicalForm::Zero { m } => FormJson {
                tag: FormTag::Zero,
                alphas: vec![f.elem_to_json(&f.zero()); *m],
                pivot: None,
                tail: vec![],
            },
            CanonicalForm::Line { alphas } => {
                FormJson { tag: FormTag::Line, alphas: enc(alphas), pivot: None, tail: vec![] }
            }
            CanonicalForm::Split { prefix, pivot, tail } => FormJson {
                tag: FormTag::Split,
                alphas: enc(prefix),
                pivot: Some(f.elem_to_json(pivot)),
                tail: tail.iter().map(|d| enc(&d.entries)).collect(),
            },
        }
    }

    pub fn from_json<F: Field<Elem = E>>(j: &FormJson, f: &F) -> Result<Self> {
        let dec = |v: &[Value]| v.iter().map(|x| f.elem_from_json(x)).collect::<Result<Vec<E>>>();
        let form = match j.tag {
            FormTag::Zero => CanonicalForm::Zero { m: j.alphas.len() },
            FormTag::Line => CanonicalForm::Line { alphas: dec(&j.alphas)? },
            FormTag::Split => {
                let pivot = j
                    .pivot
                    .as_ref()
                    .ok_or_else(|| Error::Invalid("split form needs a pivot".into()))?;
                let tail = j
                    .tail
                    .iter()
                    .map(|d| {
                        let es = dec(d)?;
                        match es.as_slice() {
                            [a, b, c, e] => Ok(Mat2::new(a.clone(), b.clone(), c.clone(), e.clone())),
                            _ => Err(Error::Invalid("tail matrices need 4 entries".into())),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                CanonicalForm::Split { prefix: dec(&j.alphas)?, pivot: f.elem_from_json(pivot)?, tail }
            }
        };
        form.validate(f)?;
        Ok(form)
    }
}

struct DisplayForm<'a, E, F> {
    form: &'a CanonicalForm<E>,
    field: &'a F,
}

impl<E: Clone, F: Field<Elem = E>> fmt::Display for DisplayForm<'_, E, F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.field;
        let join = |v: &[E]| v.iter().map(|x| f.format_elem(x)).collect::<Vec<_>>().join(",");
        match self.form {
            CanonicalForm::Zero { .. } => write!(out, "Zero"),
            CanonicalForm::Line { alphas } => write!(out, "Line({})", join(alphas)),
            CanonicalForm::Split { prefix, pivot, tail } => {
                let tail: Vec<String> = tail.iter().map(|d| format!("[{}]", join(&d.entries))).collect();
                write!(out, "Split({};{};{})", join(prefix), f.format_elem(pivot), tail.join(","))
            }
        }
    }
}

/// JSON shape of a canonical form: `{tag, alphas, pivot, tail}`. For `Zero`
/// the alphas are m zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub tag: FormTag,
    pub alphas: Vec<Value>,
    pub pivot: Option<Value>,
    pub tail: Vec<Vec<Value>>,
}

/// Certificate that `g . input = materialize(form)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness<E> {
    pub g: Mat2<E>,
}

impl<E: Clone + Eq> Witness<E> {
    pub fn verify<F: Field<Elem = E>>(&self, input: &NilTuple<E>, form: &CanonicalForm<E>, f: &F) -> bool {
        match input.conjugate(&self.g, f) {
            Ok(image) => image == form.materialize(f),
            Err(_) => false,
        }
    }
}

/// Returns `g` with `g A g^{-1} = E12` for a nonzero nilpotent `A`.
///
/// Picks `v = e1` if `A e1 != 0`, else `e2`, and inverts the basis change
/// with columns `(Av, v)`.
pub fn standardize_nilpotent<F: Field>(a: &Mat2<F::Elem>, f: &F) -> Result<Mat2<F::Elem>> {
    if a.is_zero(f) {
        return Err(Error::ZeroMatrix);
    }
    if !a.is_nilpotent(f) {
        return Err(Error::NotNilpotent);
    }
    let e1 = [f.one(), f.zero()];
    let e2 = [f.zero(), f.one()];
    let av1 = a.apply(&e1, f);
    let (v, av) = if av1.iter().all(|x| f.is_zero(x)) {
        let av2 = a.apply(&e2, f);
        (e2, av2)
    } else {
        (e1, av1)
    };
    let [v1, v2] = v;
    let [w1, w2] = av;
    let basis = Mat2::new(w1, v1, w2, v2);
    basis.inverse(f).ok_or(Error::Singular)
}

/// Canonical form of `t` and a conjugating matrix taking `t` onto it.
pub fn canonicalize<F: Field>(t: &NilTuple<F::Elem>, f: &F) -> Result<(CanonicalForm<F::Elem>, Witness<F::Elem>)> {
    let mats = t.mats();
    if mats.iter().any(|a| !a.is_nilpotent(f)) {
        return Err(Error::NotNilpotent);
    }
    let Some(v) = mats.iter().position(|a| !a.is_zero(f)) else {
        return Ok((CanonicalForm::Zero { m: t.m() }, Witness { g: Mat2::identity(f) }));
    };

    let g0 = standardize_nilpotent(&mats[v], f)?;
    let g0_inv = g0.inverse(f).ok_or(Error::Singular)?;
    let current: Vec<Mat2<F::Elem>> = mats.iter().map(|a| a.conjugate_by(&g0, &g0_inv, f)).collect();
    debug_assert_eq!(current[v], Mat2::e12(f));

    // Nilpotent with zero (2,1) entry forces a zero diagonal, so every entry
    // before the pivot is a multiple of E12.
    let Some(j) = (v + 1..current.len()).find(|&i| !f.is_zero(current[i].at(2, 1))) else {
        let alphas = current.iter().map(|a| a.at(1, 2).clone()).collect();
        return Ok((CanonicalForm::Line { alphas }, Witness { g: g0 }));
    };

    let a1 = current[j].at(1, 1);
    let a3 = current[j].at(2, 1);
    let shift = f.neg(&f.div(a1, a3)?);
    let u = Mat2::new(f.one(), shift.clone(), f.zero(), f.one());
    let u_inv = Mat2::new(f.one(), f.neg(&shift), f.zero(), f.one());
    let reduced: Vec<Mat2<F::Elem>> = current.iter().map(|a| a.conjugate_by(&u, &u_inv, f)).collect();
    debug_assert_eq!(reduced[j], Mat2::e21(f).scale(a3, f));

    let form = CanonicalForm::Split {
        prefix: reduced[..j].iter().map(|a| a.at(1, 2).clone()).collect(),
        pivot: reduced[j].at(2, 1).clone(),
        tail: reduced[j + 1..].to_vec(),
    };
    Ok((form, Witness { g: u.mul(&g0, f) }))
}

/// Whether two tuples lie in the same GL2-orbit.
pub fn are_similar<F: Field>(a: &NilTuple<F::Elem>, b: &NilTuple<F::Elem>, f: &F) -> Result<bool> {
    if a.m() != b.m() {
        return Err(Error::ShapeMismatch(format!("m={} vs m={}", a.m(), b.m())));
    }
    Ok(canonicalize(a, f)?.0 == canonicalize(b, f)?.0)
}

/// Nonzero vectors of length `len` whose first nonzero entry is 1, in
/// lexicographic element order.
fn normalized_vectors(f: &GaloisField, len: usize) -> Vec<Vec<Gf>> {
    let q = f.q() as u64;
    let total = q.pow(len as u32);
    (0..total)
        .filter_map(|code| {
            let mut c = code;
            let mut v = vec![Gf(0); len];
            for slot in v.iter_mut().rev() {
                *slot = Gf((c % q) as u8);
                c /= q;
            }
            (v.iter().find(|x| x.code() != 0) == Some(&Gf(1))).then_some(v)
        })
        .collect()
}

/// Every canonical form for `m`-tuples over `f`, one per orbit.
///
/// Order: `Zero`, then `Line` forms, then `Split` forms grouped by prefix
/// length; within a group everything is lexicographic in element order.
pub fn orbit_representatives(f: &GaloisField, m: usize) -> Result<Vec<CanonicalForm<Gf>>> {
    orbit_representatives_with(f, m, Strategy::default())
}

pub fn orbit_representatives_with(f: &GaloisField, m: usize, strategy: Strategy) -> Result<Vec<CanonicalForm<Gf>>> {
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    if m > MAX_REPRESENTATIVE_M {
        return Err(Error::TooManyMatrices { m, cap: MAX_REPRESENTATIVE_M });
    }
    let nilpotents = enumerate_nilpotent2(f);
    let pivots = f.field_elements(true);

    let mut out = vec![CanonicalForm::Zero { m }];
    out.extend(normalized_vectors(f, m).into_iter().map(|alphas| CanonicalForm::Line { alphas }));

    let groups = exec::map_range(strategy, m - 1, |idx| {
        let r = idx + 1;
        let s = m - r - 1;
        let base = nilpotents.len();
        let tails = base.pow(s as u32);
        let mut forms = Vec::new();
        for prefix in normalized_vectors(f, r) {
            for pivot in &pivots {
                for code in 0..tails {
                    let mut c = code;
                    let mut tail = vec![nilpotents[0].clone(); s];
                    for slot in tail.iter_mut().rev() {
                        *slot = nilpotents[c % base].clone();
                        c /= base;
                    }
                    forms.push(CanonicalForm::Split { prefix: prefix.clone(), pivot: *pivot, tail });
                }
            }
        }
        forms
    });
    out.extend(groups.into_iter().flatten());
    Ok(out)
}
