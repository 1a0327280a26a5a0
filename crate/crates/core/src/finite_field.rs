//! Arithmetic in GF(p^n), compatible embeddings GF(p^m) -> GF(p^n) for m | n,
//! and the Frobenius automorphisms of each field.
//!
//! Elements are encoded as integers `sum c_i p^i` where `c_0 + c_1 x + ...` is
//! the residue modulo the defining polynomial. Fast arithmetic goes through
//! log/antilog/Zech tables built once per field. The logarithm base of every
//! field is a primitive element chosen so that for each proper divisor `m` of
//! `n`, the norm-like power `z_n^((p^n-1)/(p^m-1))` is a root of the minimal
//! polynomial of `z_m`. Embeddings defined through these powers commute along
//! every tower, which is the compatibility the module layer relies on.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A field element in integer encoding (constant coefficient least significant).
pub type Elem = u32;

pub const DEFAULT_MAX_FIELD_SIZE: u64 = 1 << 20;
// Tables are u32-indexed; anything beyond this is refused regardless of configuration.
const HARD_FIELD_LIMIT: u64 = 1 << 26;
const NONE: u32 = u32::MAX;

static MAX_FIELD_SIZE: AtomicU64 = AtomicU64::new(DEFAULT_MAX_FIELD_SIZE);

/// Sets the largest field size `p^n` that [`make_field`] will construct.
pub fn set_max_field_size(cap: u64) {
    MAX_FIELD_SIZE.store(cap.min(HARD_FIELD_LIMIT), Ordering::Relaxed);
}

pub fn max_field_size() -> u64 {
    MAX_FIELD_SIZE.load(Ordering::Relaxed)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("GF({p}^{n}) exceeds the field size cap of {cap} elements")]
    TooLarge { p: u32, n: u32, cap: u64 },
    #[error("GF({p}^{from}) is not a subfield of GF({target_p}^{target})")]
    NotSubfield {
        p: u32,
        from: u32,
        target_p: u32,
        target: u32,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("field elements belong to different fields")]
    FieldMismatch,
    #[error("malformed field element: {0}")]
    MalformedElement(String),
    #[error("defining polynomial {given:?} differs from the canonical choice {canonical:?}")]
    NonCanonicalPolynomial { given: Vec<u32>, canonical: Vec<u32> },
    #[error("no compatible primitive element exists in GF({p}^{n})")]
    NoCompatiblePrimitive { p: u32, n: u32 },
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// GF(p^n) with its defining polynomial and arithmetic tables.
pub struct FiniteField {
    p: u32,
    n: u32,
    q: u32,
    min_poly: Vec<u32>,
    primitive: Elem,
    primitive_min_poly: Vec<u32>,
    // exp has length 2(q-1) so that exp[log a + log b] needs no reduction.
    exp: Vec<Elem>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.n)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.n)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }
}

impl Eq for FiniteField {}

// ---------------------------------------------------------------------------
// Digit-vector arithmetic over GF(p), used only while building a field.

fn to_digits(mut v: u32, p: u32, n: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(n as usize);
    for _ in 0..n {
        d.push(v % p);
        v /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m monic
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let t = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn pow_mod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let n = m.len() - 1;
    let mut result = vec![0u32; n];
    result[0] = 1;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

fn is_zero_poly(a: &[u32]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible_over_prime(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut divisor = to_digits(k as u32, p, d as u32);
            divisor.push(1);
            if is_zero_poly(&poly_rem(poly, &divisor, p)) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree `n`
/// over GF(p), comparing coefficients from `x^(n-1)` downwards.
pub fn lex_least_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for k in 0..count {
        let mut poly = to_digits(k as u32, p, n);
        poly.push(1);
        if is_irreducible_over_prime(&poly, p) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_sub_scaled(a: &[u32], b: &[u32], c: u32, shift: usize, p: u32) -> Vec<u32> {
    let mut out = a.to_vec();
    if out.len() < b.len() + shift {
        out.resize(b.len() + shift, 0);
    }
    for (i, &y) in b.iter().enumerate() {
        let t = (c as u64 * y as u64 % p as u64) as u32;
        out[i + shift] = (out[i + shift] + p - t) % p;
    }
    trim(&mut out);
    out
}

fn poly_mul_plain(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    trim(&mut prod);
    prod
}

fn poly_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![0], r);
    }
    let mut q = vec![0u32; r.len() - db];
    let lead_inv = inv_mod_p(b[db], p);
    for i in (0..q.len()).rev() {
        let c = (r[i + db] as u64 * lead_inv as u64 % p as u64) as u32;
        q[i] = c;
        if c != 0 {
            for (j, &y) in b.iter().enumerate() {
                let t = (c as u64 * y as u64 % p as u64) as u32;
                r[i + j] = (r[i + j] + p - t) % p;
            }
        }
    }
    r.truncate(db.max(1));
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

// ---------------------------------------------------------------------------

type Registry<K, V> = OnceLock<Mutex<HashMap<K, Arc<V>>>>;

static FIELDS: Registry<(u32, u32), FiniteField> = OnceLock::new();
static EMBEDDINGS: Registry<(u32, u32, u32), FieldEmbedding> = OnceLock::new();

/// Returns GF(p^n). Repeated calls with the same `(p, n)` return the same instance.
pub fn make_field(p: u32, n: u32) -> Result<Arc<FiniteField>, FieldError> {
    if !is_prime(p as u64) {
        return Err(FieldError::NotPrime(p as u64));
    }
    if n == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let cap = max_field_size().min(HARD_FIELD_LIMIT);
    let size = (p as u64).checked_pow(n);
    if size.is_none_or(|s| s > cap) {
        return Err(FieldError::TooLarge { p, n, cap });
    }
    let registry = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = registry.lock().unwrap().get(&(p, n)) {
        return Ok(f.clone());
    }
    // Built outside the lock: construction recurses into proper subfields.
    let built = Arc::new(FiniteField::build(p, n)?);
    let mut guard = registry.lock().unwrap();
    Ok(guard.entry((p, n)).or_insert(built).clone())
}

impl FiniteField {
    fn build(p: u32, n: u32) -> Result<Self, FieldError> {
        let q = p.pow(n);
        let qm1 = q - 1;
        let min_poly = lex_least_irreducible(p, n);
        let primitive = Self::find_compatible_primitive(p, n, &min_poly)?;

        let prim_digits = to_digits(primitive, p, n);
        let mut exp = vec![0u32; 2 * qm1 as usize];
        let mut log = vec![NONE; q as usize];
        let mut cur = to_digits(1, p, n);
        for k in 0..qm1 {
            let v = from_digits(&cur, p);
            exp[k as usize] = v;
            exp[(k + qm1) as usize] = v;
            log[v as usize] = k;
            cur = mul_mod(&cur, &prim_digits, &min_poly, p);
        }
        let mut zech = vec![NONE; qm1 as usize];
        for k in 0..qm1 {
            let v = exp[k as usize];
            let s = if v % p == p - 1 { v - (p - 1) } else { v + 1 };
            if s != 0 {
                zech[k as usize] = log[s as usize];
            }
        }
        let mut field = FiniteField {
            p,
            n,
            q,
            min_poly,
            primitive,
            primitive_min_poly: Vec::new(),
            exp,
            log,
            zech,
        };
        // prod_{i<n} (x - z^(p^i)); the coefficients land in the prime field.
        let mut mp = vec![1u32];
        for i in 0..n {
            let root = field.frobenius(primitive, i);
            let mut next = vec![0u32; mp.len() + 1];
            for (j, &c) in mp.iter().enumerate() {
                next[j + 1] = field.add(next[j + 1], c);
                next[j] = field.sub(next[j], field.mul(c, root));
            }
            mp = next;
        }
        debug_assert!(mp.iter().all(|&c| c < p));
        field.primitive_min_poly = mp;
        Ok(field)
    }

    fn find_compatible_primitive(p: u32, n: u32, min_poly: &[u32]) -> Result<Elem, FieldError> {
        let q = (p as u64).pow(n);
        let qm1 = q - 1;
        let factors = prime_factors(qm1);
        let mut constraints = Vec::new();
        for m in divisors(n).into_iter().filter(|&m| m < n) {
            let sub = make_field(p, m)?;
            let exponent = qm1 / ((p as u64).pow(m) - 1);
            constraints.push((exponent, sub.primitive_min_poly.clone()));
        }
        'candidates: for c in 1..q as u32 {
            let digits = to_digits(c, p, n);
            for &r in &factors {
                let t = pow_mod(&digits, qm1 / r, min_poly, p);
                if from_digits(&t, p) == 1 {
                    continue 'candidates;
                }
            }
            for (exponent, mp) in &constraints {
                let y = pow_mod(&digits, *exponent, min_poly, p);
                let mut acc = vec![0u32; n as usize];
                for &coef in mp.iter().rev() {
                    acc = mul_mod(&acc, &y, min_poly, p);
                    acc[0] = (acc[0] + coef) % p;
                }
                if !is_zero_poly(&acc) {
                    continue 'candidates;
                }
            }
            return Ok(c);
        }
        Err(FieldError::NoCompatiblePrimitive { p, n })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, constant term first.
    pub fn min_poly(&self) -> &[u32] {
        &self.min_poly
    }

    /// The class of `x` modulo the defining polynomial.
    pub fn generator(&self) -> Elem {
        if self.n == 1 {
            // min_poly is x itself, whose root is 0.
            0
        } else {
            self.p
        }
    }

    /// Base of the logarithm tables; compatible across the subfield lattice.
    pub fn primitive_element(&self) -> Elem {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    pub fn is_prime_field_element(&self, a: Elem) -> bool {
        a < self.p
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        to_digits(a, self.p, self.n)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem, FieldError> {
        if coeffs.len() != self.n as usize {
            return Err(FieldError::MalformedElement(format!(
                "expected {} coefficients, got {}",
                self.n,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(FieldError::MalformedElement(format!(
                "coefficient {c} is not a residue mod {}",
                self.p
            )));
        }
        Ok(from_digits(coeffs, self.p))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> Elem {
        k.rem_euclid(self.p as i64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let qm1 = self.q - 1;
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        let d = if lb >= la { lb - la } else { lb + qm1 - la };
        let z = self.zech[d as usize];
        if z == NONE {
            0
        } else {
            self.exp[(la + z) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a == 0 {
            return a;
        }
        let half = (self.q - 1) / 2;
        self.exp[(self.log[a as usize] + half) as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        debug_assert!(a != 0, "inverse of zero");
        let qm1 = self.q - 1;
        let l = self.log[a as usize];
        self.exp[((qm1 - l) % qm1) as usize]
    }

    pub fn checked_inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a == 0 {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv(a))
        }
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let qm1 = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64 * (e % qm1) % qm1;
        self.exp[l as usize]
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, a: Elem, e: u32) -> Elem {
        if a == 0 {
            return 0;
        }
        let qm1 = (self.q - 1) as u64;
        let mut l = self.log[a as usize] as u64;
        for _ in 0..e % self.n {
            l = l * self.p as u64 % qm1;
        }
        self.exp[l as usize]
    }

    pub(crate) fn log_of(&self, a: Elem) -> u32 {
        self.log[a as usize]
    }

    /// `exp(lc) * x` where `lc` is a logarithm from [`Self::log_of`].
    #[inline]
    pub(crate) fn mul_by_log(&self, lc: u32, x: Elem) -> Elem {
        if x == 0 {
            0
        } else {
            self.exp[(lc + self.log[x as usize]) as usize]
        }
    }

    pub(crate) fn exp_of(&self, k: u64) -> Elem {
        self.exp[(k % (self.q - 1) as u64) as usize]
    }

    /// Inverse by the extended Euclidean algorithm on residues modulo the
    /// defining polynomial; independent of the log tables.
    pub fn inv_by_euclid(&self, a: Elem) -> Result<Elem, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.p;
        let mut r0 = self.min_poly.clone();
        let mut r1 = self.coeffs(a);
        trim(&mut r1);
        let mut s0 = vec![0u32];
        let mut s1 = vec![1u32];
        while !(r1.len() == 1 && r1[0] == 0) {
            let (quot, rem) = poly_divrem(&r0, &r1, p);
            let qs = poly_mul_plain(&quot, &s1, p);
            let s2 = poly_sub_scaled(&s0, &qs, 1, 0, p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant
        let c_inv = inv_mod_p(r0[0], p);
        let mut out: Vec<u32> = s0
            .iter()
            .map(|&c| (c as u64 * c_inv as u64 % p as u64) as u32)
            .collect();
        out.resize(self.n as usize, 0);
        Ok(from_digits(&out, p))
    }

    pub fn to_doc(&self) -> FieldDoc {
        FieldDoc {
            p: self.p,
            n: self.n,
            min_poly: self.min_poly.clone(),
        }
    }
}

/// Serialized form of a field: `{p, n, min_poly}` with the constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub p: u32,
    pub n: u32,
    pub min_poly: Vec<u32>,
}

impl FieldDoc {
    /// Resolves the document to the registered field, rejecting a defining
    /// polynomial other than the canonical one.
    pub fn resolve(&self) -> Result<Arc<FiniteField>, FieldError> {
        let field = make_field(self.p, self.n)?;
        if field.min_poly != self.min_poly {
            return Err(FieldError::NonCanonicalPolynomial {
                given: self.min_poly.clone(),
                canonical: field.min_poly.clone(),
            });
        }
        Ok(field)
    }
}

// ---------------------------------------------------------------------------

/// A field element bound to its field.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<FiniteField>,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.coeffs(), self.field)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.value == other.value
    }
}

impl Eq for FieldElement {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
    Pow(u64),
}

impl FieldElement {
    pub fn new(field: Arc<FiniteField>, value: Elem) -> Self {
        assert!(value < field.order(), "element out of range");
        FieldElement { field, value }
    }

    pub fn from_coeffs(field: Arc<FiniteField>, coeffs: &[u32]) -> Result<Self, FieldError> {
        let value = field.from_coeffs(coeffs)?;
        Ok(FieldElement { field, value })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Ok(self.with(self.field.inv_by_euclid(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.field.pow(self.value, e))
    }

    fn with(&self, value: Elem) -> Self {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }
}

/// Dispatches a single arithmetic operation; `b` is ignored for `Inv` and `Pow`.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Inv => a.inv(),
        ArithOp::Pow(e) => Ok(a.pow(e)),
    }
}

// ---------------------------------------------------------------------------

/// The embedding GF(p^m) -> GF(p^n), m | n.
#[derive(Debug)]
pub struct FieldEmbedding {
    source: Arc<FiniteField>,
    target: Arc<FiniteField>,
    image_of_generator: Elem,
    // log-domain multiplier (p^n - 1) / (p^m - 1)
    factor: u64,
}

impl FieldEmbedding {
    pub fn source(&self) -> &Arc<FiniteField> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteField> {
        &self.target
    }

    pub fn image_of_generator(&self) -> Elem {
        self.image_of_generator
    }

    /// Relative degree [target : source].
    pub fn degree(&self) -> u32 {
        self.target.n / self.source.n
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        if a == 0 {
            0
        } else {
            self.target.exp_of(self.source.log_of(a) as u64 * self.factor)
        }
    }
}

/// The canonical embedding of `source` into `target`.
pub fn embed(source: &Arc<FiniteField>, target: &Arc<FiniteField>) -> Result<Arc<FieldEmbedding>, FieldError> {
    if source.p != target.p || !target.n.is_multiple_of(source.n) {
        return Err(FieldError::NotSubfield {
            p: source.p,
            from: source.n,
            target_p: target.p,
            target: target.n,
        });
    }
    let key = (source.p, source.n, target.n);
    let registry = EMBEDDINGS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(e) = registry.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let factor = (target.q as u64 - 1) / (source.q as u64 - 1);
    let mut emb = FieldEmbedding {
        source: source.clone(),
        target: target.clone(),
        image_of_generator: 0,
        factor,
    };
    emb.image_of_generator = emb.apply(source.generator());
    let emb = Arc::new(emb);
    let mut guard = registry.lock().unwrap();
    Ok(guard.entry(key).or_insert(emb).clone())
}

/// The automorphism `x -> x^(p^power)`.
#[derive(Debug, Clone)]
pub struct FieldAutomorphism {
    field: Arc<FiniteField>,
    power: u32,
}

impl PartialEq for FieldAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.power == other.power
    }
}

impl Eq for FieldAutomorphism {}

impl FieldAutomorphism {
    pub fn new(field: Arc<FiniteField>, power: u32) -> Self {
        let power = power % field.n;
        FieldAutomorphism { field, power }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn is_identity(&self) -> bool {
        self.power == 0
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.field.frobenius(a, self.power)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &FieldAutomorphism) -> FieldAutomorphism {
        assert_eq!(*self.field, *other.field);
        FieldAutomorphism::new(self.field.clone(), self.power + other.power)
    }
}

/// All `n` automorphisms of GF(p^n), identity first.
pub fn automorphisms(field: &Arc<FiniteField>) -> Vec<FieldAutomorphism> {
    (0..field.n).map(|e| FieldAutomorphism::new(field.clone(), e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_polynomials() {
        assert_eq!(make_field(2, 1).unwrap().min_poly(), &[0, 1]);
        assert_eq!(make_field(2, 3).unwrap().min_poly(), &[1, 1, 0, 1]);
        assert_eq!(make_field(3, 2).unwrap().min_poly(), &[1, 0, 1]);
        assert_eq!(make_field(2, 2).unwrap().min_poly(), &[1, 1, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(2, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(make_field(2, 40), Err(FieldError::TooLarge { .. })));
    }

    #[test]
    fn same_parameters_same_instance() {
        let a = make_field(3, 3).unwrap();
        let b = make_field(3, 3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn small_arithmetic() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f4 = make_field(2, 2).unwrap();
        // x * x = x + 1 ; x encodes as 2, x + 1 as 3
        assert_eq!(f4.mul(2, 2), 3);
        let f8 = make_field(2, 3).unwrap();
        for a in 1..8 {
            assert_eq!(f8.mul(a, f8.inv(a)), 1);
        }
    }

    #[test]
    fn euclid_inverse_matches_tables() {
        for (p, n) in [(2, 1), (2, 4), (3, 3), (5, 2), (7, 1)] {
            let f = make_field(p, n).unwrap();
            for a in 1..f.order() {
                assert_eq!(f.inv_by_euclid(a).unwrap(), f.inv(a), "GF({p}^{n}) a={a}");
            }
            assert_eq!(f.inv_by_euclid(0), Err(FieldError::DivisionByZero));
        }
    }

    #[test]
    fn multiplicative_group_order() {
        let f = make_field(3, 4).unwrap();
        for a in [1, 5, 17, 80] {
            assert_eq!(f.pow(a, f.order() as u64 - 1), 1);
        }
    }

    #[test]
    fn embedding_errors_on_non_divisor() {
        let f4 = make_field(2, 2).unwrap();
        let f8 = make_field(2, 3).unwrap();
        assert!(matches!(embed(&f4, &f8), Err(FieldError::NotSubfield { .. })));
    }

    #[test]
    fn prime_field_embeds_identically() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let e = embed(&f2, &f4).unwrap();
        assert_eq!(e.apply(1), 1);
        assert_eq!(e.apply(0), 0);
        let f5 = make_field(5, 1).unwrap();
        let f125 = make_field(5, 3).unwrap();
        let e = embed(&f5, &f125).unwrap();
        for a in 0..5 {
            assert_eq!(e.apply(a), a);
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&make_field(2, 1).unwrap()).len(), 1);
        assert_eq!(automorphisms(&make_field(2, 3).unwrap()).len(), 3);
        let f9 = make_field(3, 2).unwrap();
        let frob = &automorphisms(&f9)[1];
        for a in f9.elements() {
            assert_eq!(frob.apply(frob.apply(a)), a);
            assert_eq!(frob.apply(a), f9.pow(a, 3));
        }
    }

    #[test]
    fn field_arith_dispatch() {
        let f8 = make_field(2, 3).unwrap();
        let a = FieldElement::new(f8.clone(), 5);
        let b = FieldElement::new(f8.clone(), 3);
        let s = field_arith(&a, &b, ArithOp::Add).unwrap();
        assert_eq!(s.value(), 6);
        let i = field_arith(&a, &b, ArithOp::Inv).unwrap();
        assert_eq!(a.mul(&i).unwrap().value(), 1);
        let zero = FieldElement::new(f8.clone(), 0);
        assert_eq!(zero.inv().unwrap_err(), FieldError::DivisionByZero);
        let other = FieldElement::new(make_field(2, 2).unwrap(), 1);
        assert_eq!(a.add(&other).unwrap_err(), FieldError::FieldMismatch);
    }

    #[test]
    fn doc_resolution() {
        let doc = make_field(2, 3).unwrap().to_doc();
        assert_eq!(doc.resolve().unwrap().order(), 8);
        let bad = FieldDoc {
            p: 2,
            n: 3,
            min_poly: vec![1, 0, 1, 1],
        };
        assert!(matches!(bad.resolve(), Err(FieldError::NonCanonicalPolynomial { .. })));
    }
}
