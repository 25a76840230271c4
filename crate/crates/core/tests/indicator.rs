use std::collections::BTreeMap;

use proptest::prelude::*;

use nilsep::canonical::orbit_representatives_with;
use nilsep::indicator::{build_h_set, invariant_poly, orbit_indicator, point_indicator, verify_h_separating, OrbitTable, ReducedPoly};
use nilsep::invariants::{build_set, SetKind};
use nilsep::matrices::{enumerate_gl2_with_inverses, nilpotent_tuples};
use nilsep::{are_similar, Field, GaloisField, Gf, Strategy};

fn gf(p: u64, k: u32) -> GaloisField {
    GaloisField::new(p, k).unwrap()
}

fn all_points(f: &GaloisField, n: usize) -> Vec<Vec<Gf>> {
    let els = f.field_elements(false);
    let q = els.len();
    (0..q.pow(n as u32))
        .map(|mut c| {
            let mut p = vec![els[0]; n];
            for x in p.iter_mut().rev() {
                *x = els[c % q];
                c /= q;
            }
            p
        })
        .collect()
}

/// Inverse of the q x q matrix `V[a][k] = a^k` (with 0^0 = 1) by Gaussian
/// elimination.
fn vandermonde_inverse(f: &GaloisField) -> Vec<Vec<Gf>> {
    let els = f.field_elements(false);
    let q = els.len();
    let mut a: Vec<Vec<Gf>> = els.iter().map(|x| (0..q).map(|k| f.pow(x, k as u64)).collect()).collect();
    let mut inv: Vec<Vec<Gf>> = (0..q).map(|i| (0..q).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect();
    for col in 0..q {
        let piv = (col..q).find(|&r| !f.is_zero(&a[r][col])).unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = f.inv(&a[col][col]).unwrap();
        for j in 0..q {
            a[col][j] = f.mul(&a[col][j], &s);
            inv[col][j] = f.mul(&inv[col][j], &s);
        }
        for r in 0..q {
            if r != col && !f.is_zero(&a[r][col]) {
                let c = a[r][col];
                for j in 0..q {
                    a[r][j] = f.sub(&a[r][j], &f.mul(&c, &a[col][j]));
                    inv[r][j] = f.sub(&inv[r][j], &f.mul(&c, &inv[col][j]));
                }
            }
        }
    }
    inv
}

/// The unique reduced polynomial with the given values on all of F^n,
/// computed by inverting the Vandermonde transform one axis at a time.
/// Returns exponent vector -> coefficient, zero coefficients dropped.
fn interpolation_oracle(f: &GaloisField, n: usize, value: impl Fn(&[Gf]) -> Gf) -> BTreeMap<Vec<u8>, Gf> {
    let els = f.field_elements(false);
    let q = els.len();
    let vinv = vandermonde_inverse(f);
    let points = all_points(f, n);
    // table indexed by mixed radix over element positions
    let mut table: Vec<Gf> = points.iter().map(|p| value(p)).collect();
    for axis in 0..n {
        let stride = q.pow((n - 1 - axis) as u32);
        let mut next = table.clone();
        for base in 0..table.len() {
            if (base / stride) % q != 0 {
                continue;
            }
            for k in 0..q {
                let mut acc = f.zero();
                for a in 0..q {
                    acc = f.add(&acc, &f.mul(&vinv[k][a], &table[base + a * stride]));
                }
                next[base + k * stride] = acc;
            }
        }
        table = next;
    }
    let mut out = BTreeMap::new();
    for (idx, c) in table.into_iter().enumerate() {
        if f.is_zero(&c) {
            continue;
        }
        let mut exps = vec![0u8; n];
        let mut r = idx;
        for e in exps.iter_mut().rev() {
            *e = (r % q) as u8;
            r /= q;
        }
        out.insert(exps, c);
    }
    out
}

#[test]
fn point_indicators_match_oracle() {
    for (p, k, n) in [(2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2), (3, 1, 3)] {
        let f = gf(p, k);
        for w in all_points(&f, n) {
            let poly = point_indicator(&w, &f);
            let oracle = interpolation_oracle(&f, n, |v| if v == w.as_slice() { f.one() } else { f.zero() });
            assert_eq!(poly.terms(), &oracle, "q={} w={w:?}", f.q());
            assert_eq!(poly.degree(), (n as i64) * (f.q() as i64 - 1));
        }
    }
}

#[test]
fn point_indicator_is_kronecker_delta() {
    for (p, k, n) in [(2, 1, 8), (3, 1, 4), (2, 2, 3), (7, 1, 2)] {
        let f = gf(p, k);
        let pts = all_points(&f, n);
        for w in pts.iter().step_by(pts.len() / 7 + 1) {
            let poly = point_indicator(w, &f);
            for v in &pts {
                let want = if v == w { f.one() } else { f.zero() };
                assert_eq!(poly.eval(v, &f).unwrap(), want);
            }
        }
    }
}

#[test]
fn invariant_polys_match_oracle_off_w() {
    // The explicit trace polynomials are defined on all of F^{4m}; compare
    // with interpolation of the trace function itself.
    let f = gf(3, 1);
    let tr = invariant_poly(&nilsep::invariants::InvariantFn::TrPair(1, 2), &f, 2).unwrap();
    let oracle = interpolation_oracle(&f, 8, |v| {
        let a = [v[0], v[1], v[2], v[3]];
        let b = [v[4], v[5], v[6], v[7]];
        [(0, 0), (1, 2), (2, 1), (3, 3)]
            .iter()
            .fold(f.zero(), |acc, &(i, j)| f.add(&acc, &f.mul(&a[i], &b[j])))
    });
    assert_eq!(tr.terms(), &oracle);
}

#[test]
fn orbit_indicators_are_invariant() {
    let f = gf(2, 1);
    let table = OrbitTable::new(&f, 2, Strategy::default()).unwrap();
    let polys: Vec<ReducedPoly> = (0..table.kappa())
        .map(|j| orbit_indicator(&table.orbit_points(j), 8, &f).unwrap())
        .collect();
    let group = enumerate_gl2_with_inverses(&f).unwrap();
    let tuples = nilpotent_tuples(&f, 2);
    for t in &tuples {
        let vals: Vec<Gf> = polys.iter().map(|p| p.eval(&t.coordinates(), &f).unwrap()).collect();
        // exactly one indicator fires
        assert_eq!(vals.iter().filter(|v| **v == f.one()).count(), 1);
        for (g, gi) in &group {
            let moved = t.conjugate_with(g, gi, &f);
            let mv: Vec<Gf> = polys.iter().map(|p| p.eval(&moved.coordinates(), &f).unwrap()).collect();
            assert_eq!(vals, mv);
        }
    }
    for p in &polys {
        assert!(p.degree() <= 8);
    }
    // similar tuples share an indicator; dissimilar ones do not
    for a in tuples.iter().step_by(3) {
        for b in tuples.iter().step_by(5) {
            let same = polys.iter().all(|p| p.eval(&a.coordinates(), &f).unwrap() == p.eval(&b.coordinates(), &f).unwrap());
            assert_eq!(same, are_similar(a, b, &f).unwrap());
        }
    }
}

#[test]
fn h_sets_and_degree_bounds() {
    for (p, k, m) in [(2, 1, 1), (2, 1, 2), (3, 1, 2)] {
        let f = gf(p, k);
        let h = build_h_set(&f, m, None, Strategy::default()).unwrap();
        let v = verify_h_separating(&h);
        assert!(v.holds());
        assert_eq!(v.size as u32, v.lower_bound);
        for i in 0..h.len() {
            let poly = h.poly(i, &f, Strategy::default()).unwrap();
            assert!(poly.degree() <= (4 * m as i64) * (f.q() as i64 - 1));
        }
    }
}

#[test]
fn separating_set_degrees() {
    for (p, k, m) in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (5, 1, 2)] {
        let f = gf(p, k);
        let q = f.q() as i64;
        let kind = if q == 2 { SetKind::H2 } else { SetKind::H };
        let set = build_set(kind, &f, m).unwrap();
        let max = set.members.iter().map(|g| invariant_poly(g, &f, m).unwrap().degree()).max().unwrap();
        if q == 2 {
            assert!(max <= 2);
        } else {
            assert_eq!(max, 4 * (q - 1));
        }
    }
}

#[test]
fn indicator_invariants_interpolate() {
    let f = gf(3, 1);
    let reps = orbit_representatives_with(&f, 1, Strategy::default()).unwrap();
    let h = build_h_set(&f, 1, None, Strategy::default()).unwrap();
    assert_eq!(h.kappa(), reps.len());
    let g = h.as_invariant(0);
    let poly = invariant_poly(&g, &f, 1).unwrap();
    for t in nilpotent_tuples(&f, 1) {
        assert_eq!(poly.eval(&t.coordinates(), &f).unwrap(), g.eval(&t, &f).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_point_indicators(w in prop::collection::vec(0u64..5, 6), v in prop::collection::vec(0u64..5, 6)) {
        let f = gf(5, 1);
        let w: Vec<Gf> = w.into_iter().map(|c| f.elem(c).unwrap()).collect();
        let v: Vec<Gf> = v.into_iter().map(|c| f.elem(c).unwrap()).collect();
        let poly = point_indicator(&w, &f);
        prop_assert_eq!(poly.eval(&w, &f).unwrap(), f.one());
        let want = if v == w { f.one() } else { f.zero() };
        prop_assert_eq!(poly.eval(&v, &f).unwrap(), want);
    }

    #[test]
    fn json_round_trip(w in prop::collection::vec(0u64..4, 1..4)) {
        let f = gf(2, 2);
        let w: Vec<Gf> = w.into_iter().map(|c| f.elem(c).unwrap()).collect();
        let poly = point_indicator(&w, &f);
        let text = serde_json::to_string(&poly.to_json(&f)).unwrap();
        let back: nilsep::indicator::PolyJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(ReducedPoly::from_json(&back, &f).unwrap(), poly);
    }
}
