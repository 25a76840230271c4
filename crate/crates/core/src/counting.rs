//! Orbit counts: the closed form, its polynomial presentation, the minimal
//! separating-set size, and brute-force orbit partitions used as oracles.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::canonical::orbit_representatives_with;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::gf::{is_prime, Field, GaloisField, Gf};
use crate::matrices::{enumerate_gl, enumerate_nilpotent, gl_order, MatN};

/// Default cap on the brute-force work estimate.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// `q^k + ... + q + 1`, or 0 when `k < 0`.
pub fn s_geom(q: u64, k: i64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    (0..=k).fold(BigUint::zero(), |acc, _| acc * &q + 1u32)
}

/// Returns `(p, k)` when `q = p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, k))
}

fn check_q_m(q: u64, m: u32) -> Result<()> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrime(q));
    }
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    Ok(())
}

/// Number of GL2-orbits on m-tuples of nilpotent 2x2 matrices over GF(q):
/// `1 + (q^m - 1)(q^{m-1} + q) / (q^2 - 1)`.
pub fn kappa(q: u64, m: u32) -> Result<BigUint> {
    check_q_m(q, m)?;
    let qb = BigUint::from(q);
    let num = (qb.pow(m) - 1u32) * (qb.pow(m - 1) + &qb);
    let den = qb.pow(2) - 1u32;
    let (quot, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::InexactDivision(format!("kappa({q},{m})")));
    }
    Ok(quot + 1u32)
}

/// Dense integer polynomial in `q`, coefficients from the constant term up.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn from_coeffs<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::normalized(coeffs.into_iter().map(BigInt::from).collect())
    }

    fn normalized(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs([c])
    }

    /// `q^e`.
    pub fn monomial(e: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        let coeffs = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Self::normalized(coeffs)
    }

    pub fn neg(&self) -> Self {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly::default();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::normalized(coeffs)
    }

    /// Substitutes `q -> q^e`.
    pub fn compose_power(&self, e: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * e + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * e] = c.clone();
        }
        Self::normalized(coeffs)
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_mag = !mag.is_one() || e == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

/// `S_k(q)` as a polynomial in `q`.
fn s_geom_poly(k: i64) -> IntPoly {
    if k < 0 {
        return IntPoly::default();
    }
    IntPoly::from_coeffs(std::iter::repeat(1).take(k as usize + 1))
}

/// The orbit count as a polynomial in q with nonnegative integer coefficients.
pub fn kappa_poly(m: u32) -> Result<IntPoly> {
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    let m = m as i64;
    let one = IntPoly::constant(1);
    let base = one.add(&s_geom_poly(m - 1));
    let tail = if m % 2 == 0 {
        IntPoly::monomial((m - 1) as usize)
            .sub(&one)
            .mul(&s_geom_poly((m - 2) / 2).compose_power(2))
    } else {
        let k = if m >= 3 { (m - 3) / 2 } else { -1 };
        IntPoly::monomial(m as usize)
            .sub(&one)
            .mul(&s_geom_poly(k).compose_power(2))
    };
    Ok(base.add(&tail))
}

/// Smallest `g` with `q^g >= n`.
pub fn ceil_log(q: u64, n: &BigUint) -> u32 {
    let qb = BigUint::from(q);
    let mut power = BigUint::one();
    let mut g = 0;
    while &power < n {
        power *= &qb;
        g += 1;
    }
    g
}

/// Least size of a separating set. Computes both the case formula and the
/// logarithmic bound and fails if they disagree.
pub fn gamma(q: u64, m: u32) -> Result<u32> {
    let k = kappa(q, m)?;
    let log = ceil_log(q, &k);
    let formula = match (m, q) {
        (1, _) => 1,
        (2, 2) => 3,
        _ => 2 * m - 2,
    };
    if formula != log {
        return Err(Error::GammaMismatch { q, m, formula, log });
    }
    Ok(formula)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusMethod {
    Formula,
    Representatives,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCensus {
    pub field: String,
    pub n: usize,
    pub m: usize,
    pub count: u64,
    pub method: CensusMethod,
}

/// How a brute-force partition explores the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitAlgorithm {
    /// Every tuple is labelled by the least index in `{g . t : g in GL_n}`.
    FullGroup,
    /// Union-find over the edges `t -- s . t` for a generating set `s`.
    Generators,
}

impl OrbitAlgorithm {
    /// Full group for n = 2 and for q = 2, generators otherwise.
    pub fn default_for(q: u32, n: usize) -> Self {
        if n == 2 || q == 2 {
            OrbitAlgorithm::FullGroup
        } else {
            OrbitAlgorithm::Generators
        }
    }
}

/// Orbit partition of all m-tuples of nilpotent n x n matrices.
///
/// Tuples are indexed in mixed radix over the nilpotent enumeration order,
/// first entry most significant.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    pub n: usize,
    pub m: usize,
    pub nilpotents: Vec<MatN<Gf>>,
    /// Least tuple index in the orbit of each tuple.
    pub labels: Vec<u32>,
}

impl OrbitPartition {
    pub fn orbit_count(&self) -> usize {
        self.labels.iter().enumerate().filter(|(i, &l)| *i as u32 == l).count()
    }

    /// Orbit sizes keyed by orbit label.
    pub fn orbit_sizes(&self) -> HashMap<u32, u64> {
        let mut sizes = HashMap::new();
        for &l in &self.labels {
            *sizes.entry(l).or_insert(0) += 1;
        }
        sizes
    }

    /// Decodes a tuple index into its matrices.
    pub fn tuple(&self, mut index: usize) -> Vec<MatN<Gf>> {
        let base = self.nilpotents.len();
        let mut out = vec![self.nilpotents[0].clone(); self.m];
        for slot in out.iter_mut().rev() {
            *slot = self.nilpotents[index % base].clone();
            index /= base;
        }
        out
    }
}

/// Generating set of GL_n: all transvections `I + c E_ij` and
/// `diag(w, 1, ..., 1)` for a primitive `w`.
pub fn gl_generators(f: &GaloisField, n: usize) -> Vec<MatN<Gf>> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for c in f.field_elements(true) {
                let mut entries = MatN::identity(f, n).entries().to_vec();
                entries[i * n + j] = c;
                gens.push(MatN::from_entries(n, entries).expect("square"));
            }
        }
    }
    if f.q() > 2 {
        let mut entries = MatN::identity(f, n).entries().to_vec();
        entries[0] = f.primitive_element();
        gens.push(MatN::from_entries(n, entries).expect("square"));
    }
    gens
}

fn tuple_count(f: &GaloisField, n: usize, m: usize) -> u128 {
    (f.q() as u128).pow((n * (n - 1) * m) as u32)
}

/// Work estimate checked against the budget: tuple count times the number of
/// group elements applied to each tuple.
pub fn work_estimate(f: &GaloisField, n: usize, m: usize, algorithm: OrbitAlgorithm) -> u128 {
    let tuples = tuple_count(f, n, m);
    match algorithm {
        OrbitAlgorithm::FullGroup => tuples * gl_order(f.q() as u64, n as u32),
        OrbitAlgorithm::Generators => tuples * gl_generators(f, n).len() as u128,
    }
}

/// Table `act[g][i]` = index of `g N_i g^{-1}` among the nilpotents.
fn action_table(f: &GaloisField, group: &[MatN<Gf>], nilpotents: &[MatN<Gf>], strategy: Strategy) -> Vec<Vec<u32>> {
    let q = f.q();
    let index: HashMap<u64, u32> = nilpotents.iter().enumerate().map(|(i, a)| (a.code(q), i as u32)).collect();
    exec::map_slice(strategy, group, |g| {
        let g_inv = g.inverse(f).expect("group element");
        nilpotents
            .iter()
            .map(|a| {
                let image = g.mul(a, f).and_then(|x| x.mul(&g_inv, f)).expect("same shape");
                index[&image.code(q)]
            })
            .collect()
    })
}

fn act_on_tuple(table: &[u32], index: usize, base: usize, m: usize) -> usize {
    let mut rest = index;
    let mut digits = [0usize; 16];
    for slot in digits[..m].iter_mut().rev() {
        *slot = rest % base;
        rest /= base;
    }
    digits[..m].iter().fold(0, |acc, &d| acc * base + table[d] as usize)
}

struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    fn new(len: usize) -> Self {
        DisjointSets { parent: (0..len as u32).collect() }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let grand = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = grand;
            i = grand;
        }
        i
    }

    // The smaller root wins, so every root is the least index of its set.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Exhaustive orbit partition of m-tuples of nilpotent n x n matrices.
pub fn orbit_partition(
    f: &GaloisField,
    n: usize,
    m: usize,
    algorithm: OrbitAlgorithm,
    budget: u128,
    strategy: Strategy,
) -> Result<OrbitPartition> {
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    if m > 16 {
        return Err(Error::TooManyMatrices { m, cap: 16 });
    }
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let needed = work_estimate(f, n, m, algorithm);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let nilpotents = enumerate_nilpotent(f, n)?;
    let base = nilpotents.len();
    let total = base.pow(m as u32);
    if total > u32::MAX as usize {
        return Err(Error::BudgetExceeded { needed: total as u128, budget: u32::MAX as u128 });
    }

    let labels = match algorithm {
        OrbitAlgorithm::FullGroup => {
            let group = enumerate_gl(f, n)?;
            let table = action_table(f, &group, &nilpotents, strategy);
            exec::map_range(strategy, total, |t| {
                table
                    .iter()
                    .map(|row| act_on_tuple(row, t, base, m))
                    .min()
                    .expect("group is nonempty") as u32
            })
        }
        OrbitAlgorithm::Generators => {
            let gens = gl_generators(f, n);
            let table = action_table(f, &gens, &nilpotents, strategy);
            let mut sets = DisjointSets::new(total);
            for row in &table {
                let images = exec::map_range(strategy, total, |t| act_on_tuple(row, t, base, m) as u32);
                for (t, image) in images.into_iter().enumerate() {
                    sets.union(t as u32, image);
                }
            }
            (0..total as u32).map(|t| sets.find(t)).collect()
        }
    };
    Ok(OrbitPartition { n, m, nilpotents, labels })
}

/// Orbit count by exhaustive search over the group action.
pub fn brute_force_orbit_count(f: &GaloisField, n: usize, m: usize, budget: u128) -> Result<OrbitCensus> {
    brute_force_orbit_count_with(f, n, m, budget, OrbitAlgorithm::default_for(f.q(), n), Strategy::default())
}

pub fn brute_force_orbit_count_with(
    f: &GaloisField,
    n: usize,
    m: usize,
    budget: u128,
    algorithm: OrbitAlgorithm,
    strategy: Strategy,
) -> Result<OrbitCensus> {
    let partition = orbit_partition(f, n, m, algorithm, budget, strategy)?;
    Ok(OrbitCensus {
        field: f.spec_string(),
        n,
        m,
        count: partition.orbit_count() as u64,
        method: CensusMethod::BruteForce,
    })
}

/// Orbit count from the closed form (n = 2 only).
pub fn formula_census(f: &GaloisField, m: usize) -> Result<OrbitCensus> {
    let count = kappa(f.q() as u64, m as u32)?
        .to_u64()
        .ok_or_else(|| Error::Invalid("count exceeds u64".into()))?;
    Ok(OrbitCensus { field: f.spec_string(), n: 2, m, count, method: CensusMethod::Formula })
}

/// Orbit count by listing the canonical forms (n = 2 only).
pub fn representatives_census(f: &GaloisField, m: usize, strategy: Strategy) -> Result<OrbitCensus> {
    let count = orbit_representatives_with(f, m, strategy)?.len() as u64;
    Ok(OrbitCensus { field: f.spec_string(), n: 2, m, count, method: CensusMethod::Representatives })
}

/// One row of a census table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub kappa_formula: Option<String>,
    pub kappa_bruteforce: Option<u64>,
    pub gamma: Option<u32>,
}

/// Raw data for small n = 3 orbit counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub n: usize,
    pub m: usize,
    pub rows: Vec<CensusRow>,
    pub note: String,
}

/// Brute-force orbit counts for fixed `(n, m)` over several fields.
pub fn conjecture_scan(n: usize, m: usize, fields: &[GaloisField], budget: u128, strategy: Strategy) -> Result<ScanReport> {
    let mut rows = Vec::with_capacity(fields.len());
    for f in fields {
        let algorithm = OrbitAlgorithm::default_for(f.q(), n);
        let census = brute_force_orbit_count_with(f, n, m, budget, algorithm, strategy)?;
        let (kappa_formula, gamma) = if n == 2 {
            (Some(kappa(f.q() as u64, m as u32)?.to_string()), Some(self::gamma(f.q() as u64, m as u32)?))
        } else {
            (None, None)
        };
        rows.push(CensusRow {
            q: f.q() as u64,
            n,
            m,
            kappa_formula,
            kappa_bruteforce: Some(census.count),
            gamma,
        });
    }
    let note = if rows.len() >= 2 {
        format!(
            "{} data points; a polynomial in q of unknown degree is not determined by them (data only)",
            rows.len()
        )
    } else {
        "single data point (data only)".to_string()
    };
    Ok(ScanReport { n, m, rows, note })
}
