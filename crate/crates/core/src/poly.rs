//! Univariate polynomials over GF(q): characteristic polynomials of matrices
//! and factorization into monic irreducibles (square-free, distinct-degree and
//! Cantor-Zassenhaus equal-degree splitting).

use rand::Rng;

use crate::finite_field::{Elem, FiniteField};
use crate::linalg::Matrix;

/// Coefficients, constant term first, no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self, f: &FiniteField) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = f.inv(self.lead());
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, f: &FiniteField, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.add(a, b)
            })
            .collect();
        Poly::new(c)
    }

    pub fn sub(&self, f: &FiniteField, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.sub(a, b)
            })
            .collect();
        Poly::new(c)
    }

    pub fn mul(&self, f: &FiniteField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, f: &FiniteField, c: Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn div_rem(&self, f: &FiniteField, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let dd = divisor.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![0; r.len() - dd];
        let li = f.inv(divisor.lead());
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dd], li);
            q[i] = c;
            if c != 0 {
                for (j, &b) in divisor.coeffs.iter().enumerate() {
                    r[i + j] = f.sub(r[i + j], f.mul(c, b));
                }
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, f: &FiniteField, divisor: &Poly) -> Poly {
        self.div_rem(f, divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, f: &FiniteField, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &FiniteField) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn mul_mod(&self, f: &FiniteField, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(f, other).rem(f, modulus)
    }

    pub fn pow_mod(&self, f: &FiniteField, mut e: u64, modulus: &Poly) -> Poly {
        let mut result = Poly::one().rem(f, modulus);
        let mut base = self.rem(f, modulus);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_mod(f, &base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(f, &base, modulus);
            }
        }
        result
    }

    pub fn eval(&self, f: &FiniteField, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(a)` for a square matrix `a`, by Horner's rule.
    pub fn eval_matrix(&self, f: &FiniteField, a: &Matrix) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::zeros(n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(f, a);
            if c != 0 {
                for i in 0..n {
                    let v = acc.get(i, i);
                    acc.set(i, i, f.add(v, c));
                }
            }
        }
        acc
    }

    /// Undo the Frobenius on a polynomial whose exponents are all multiples of p.
    fn pth_root(&self, f: &FiniteField) -> Poly {
        let p = f.characteristic() as usize;
        let n = f.degree();
        Poly::new(self.coeffs.iter().step_by(p).map(|&c| f.frobenius(c, n - 1)).collect())
    }
}

/// Characteristic polynomial `det(xI - a)` via reduction to Hessenberg form.
pub fn char_poly(f: &FiniteField, a: &Matrix) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        // bring a nonzero entry into position (m, m-1)
        let Some(i) = (m..n).find(|&i| h.get(i, m - 1) != 0) else {
            continue;
        };
        if i != m {
            h.swap_rows(i, m);
            for r in 0..n {
                let (x, y) = (h.get(r, i), h.get(r, m));
                h.set(r, i, y);
                h.set(r, m, x);
            }
        }
        let t = f.inv(h.get(m, m - 1));
        for i in m + 1..n {
            let u = f.mul(h.get(i, m - 1), t);
            if u == 0 {
                continue;
            }
            // row_i -= u * row_m ; col_m += u * col_i
            for j in 0..n {
                let v = f.sub(h.get(i, j), f.mul(u, h.get(m, j)));
                h.set(i, j, v);
            }
            for r in 0..n {
                let v = f.add(h.get(r, m), f.mul(u, h.get(r, i)));
                h.set(r, m, v);
            }
        }
    }
    // p_k = char poly of the leading k x k block
    let mut ps: Vec<Poly> = vec![Poly::one()];
    for k in 0..n {
        let mut next = Poly::x().sub(f, &Poly::new(vec![h.get(k, k)])).mul(f, &ps[k]);
        let mut t = 1;
        for i in 1..=k {
            t = f.mul(t, h.get(k - i + 1, k - i));
            let c = f.mul(t, h.get(k - i, k));
            if c != 0 {
                next = next.sub(f, &ps[k - i].scale(f, c));
            }
        }
        ps.push(next);
    }
    ps.pop().unwrap()
}

/// Square-free decomposition: pairs `(g, m)` with `f = prod g^m`, each `g` square-free.
fn square_free(f: &FiniteField, poly: &Poly) -> Vec<(Poly, usize)> {
    let p = f.characteristic() as usize;
    let mut out = Vec::new();
    let d = poly.derivative(f);
    if d.is_zero() {
        if poly.degree() == 0 {
            return out;
        }
        for (g, m) in square_free(f, &poly.pth_root(f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = poly.gcd(f, &d);
    let mut w = poly.div_rem(f, &c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(f, &c);
        let fac = w.div_rem(f, &y).0;
        if fac.degree() > 0 {
            out.push((fac.monic(f), i));
        }
        w = y;
        c = c.div_rem(f, &w).0;
        i += 1;
    }
    if c.degree() > 0 {
        for (g, m) in square_free(f, &c.monic(f).pth_root(f)) {
            out.push((g, m * p));
        }
    }
    out
}

fn distinct_degree(f: &FiniteField, poly: &Poly) -> Vec<(Poly, usize)> {
    let q = f.order() as u64;
    let mut out = Vec::new();
    let mut rest = poly.clone();
    let mut h = Poly::x().rem(f, &rest);
    let mut i = 1;
    while rest.degree() >= 2 * i {
        h = h.pow_mod(f, q, &rest);
        let g = rest.gcd(f, &h.sub(f, &Poly::x()));
        if !g.is_one() {
            rest = rest.div_rem(f, &g).0;
            h = h.rem(f, &rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree() > 0 {
        let d = rest.degree();
        out.push((rest.monic(f), d));
    }
    out
}

fn equal_degree<R: Rng>(f: &FiniteField, poly: &Poly, d: usize, rng: &mut R, out: &mut Vec<Poly>) {
    let n = poly.degree();
    if n == d {
        out.push(poly.monic(f));
        return;
    }
    let q = f.order() as u64;
    loop {
        let h = Poly::new((0..n).map(|_| rng.gen_range(0..f.order())).collect());
        if h.degree() == 0 {
            continue;
        }
        let g = if f.characteristic() == 2 {
            // absolute trace map to GF(2): h + h^2 + ... + h^(2^(k d - 1))
            let k = f.degree() as usize;
            let mut t = h.rem(f, poly);
            let mut acc = t.clone();
            for _ in 1..k * d {
                t = t.mul_mod(f, &t, poly);
                acc = acc.add(f, &t);
            }
            poly.gcd(f, &acc)
        } else {
            // h^((q^d - 1)/2) = (prod_i h^(q^i))^((q-1)/2)
            let mut hi = h.rem(f, poly);
            let mut prod = hi.clone();
            for _ in 1..d {
                hi = hi.pow_mod(f, q, poly);
                prod = prod.mul_mod(f, &hi, poly);
            }
            let s = prod.pow_mod(f, (q - 1) / 2, poly);
            poly.gcd(f, &s.sub(f, &Poly::one()))
        };
        if g.degree() > 0 && g.degree() < n {
            let other = poly.div_rem(f, &g).0;
            equal_degree(f, &g, d, rng, out);
            equal_degree(f, &other, d, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by degree then coefficients.
pub fn factor<R: Rng>(f: &FiniteField, poly: &Poly, rng: &mut R) -> Vec<(Poly, usize)> {
    assert!(!poly.is_zero());
    let monic = poly.monic(f);
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (sf, mult) in square_free(f, &monic) {
        for (part, d) in distinct_degree(f, &sf) {
            let mut irr = Vec::new();
            equal_degree(f, &part, d, rng, &mut irr);
            for g in irr {
                match out.iter_mut().find(|(h, _)| *h == g) {
                    Some(entry) => entry.1 += mult,
                    None => out.push((g, mult)),
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs.iter().rev().cmp(b.0.coeffs.iter().rev()))
    });
    out
}
