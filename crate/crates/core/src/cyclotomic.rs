//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! Elements are stored in the power basis `1, x, ..., x^(n-1)` of the group
//! ring `Q[x] / (x^n - 1)`, as a vector of integer numerators over one common
//! positive denominator. Ring operations work directly on that
//! representation. It is redundant as a description of `Q(zeta_n)` (the
//! kernel of `x -> zeta_n` is the ideal generated by `Phi_n`), so equality
//! and rationality are decided after reducing modulo the `n`-th cyclotomic
//! polynomial, which gives the unique representative of degree
//! `< phi(n)`. Both tests are exact.
//!
//! The trigonometric sums live here too:
//!
//! * `cot(pi t / n) = i (zeta^t + 1) / (zeta^t - 1)` with `zeta = zeta_n`, so a
//!   product of two cotangents is `-R(u) R(v)` where `R(u) = (u + 1)/(u - 1)`;
//!   no square root of `-1` is ever needed.
//! * `sin^2(pi t / n) = (2 - zeta^t - zeta^-t) / 4`.
//! * For `u` a root of unity of exact order `d > 1`,
//!   `1 / (u - 1) = (1/d) * sum_{s=0}^{d-1} s u^s`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

/// An element `sum_j c_j zeta_n^j` of `Q(zeta_n)`.
#[derive(Clone)]
pub struct CyclotomicElement {
    order: usize,
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl CyclotomicElement {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CyclotomicElement { order, numer: vec![BigInt::zero(); order], denom: BigInt::one() }
    }

    pub fn one(order: usize) -> Self {
        Self::from_rational(order, &Rational::one())
    }

    pub fn from_rational(order: usize, value: &Rational) -> Self {
        let mut e = Self::zero(order);
        e.numer[0] = value.numer().clone();
        e.denom = value.denom().clone();
        e
    }

    /// Builds an element from rational coefficients of `1, zeta, ..., zeta^(len-1)`;
    /// exponents are reduced modulo `order`.
    pub fn from_coefficients(order: usize, coeffs: &[Rational]) -> Self {
        let mut e = Self::zero(order);
        for (j, c) in coeffs.iter().enumerate() {
            e = e.add(&Self::monomial(order, j as i64, c.clone()));
        }
        e
    }

    fn monomial(order: usize, exponent: i64, coeff: Rational) -> Self {
        let mut e = Self::zero(order);
        e.numer[exponent.rem_euclid(order as i64) as usize] = coeff.numer().clone();
        e.denom = coeff.denom().clone();
        e
    }

    fn from_parts(order: usize, numer: Vec<BigInt>, denom: BigInt) -> Self {
        debug_assert_eq!(numer.len(), order);
        let mut e = CyclotomicElement { order, numer, denom };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.denom.is_negative() {
            self.denom = -std::mem::take(&mut self.denom);
            for c in &mut self.numer {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.denom.clone();
        for c in &self.numer {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if g.is_zero() {
            self.denom = BigInt::one();
        } else if !g.is_one() {
            self.denom /= &g;
            for c in &mut self.numer {
                *c /= &g;
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficients in the (redundant) power basis of length `order`.
    pub fn coefficients(&self) -> Vec<Rational> {
        self.numer.iter().map(|c| Rational::new(c.clone(), self.denom.clone())).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_order(other);
        let numer = self
            .numer
            .iter()
            .zip(&other.numer)
            .map(|(a, b)| a * &other.denom + b * &self.denom)
            .collect();
        Self::from_parts(self.order, numer, &self.denom * &other.denom)
    }

    pub fn neg(&self) -> Self {
        CyclotomicElement {
            order: self.order,
            numer: self.numer.iter().map(|c| -c).collect(),
            denom: self.denom.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_order(other);
        let n = self.order;
        let mut numer = vec![BigInt::zero(); n];
        for (i, a) in self.numer.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.numer.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                numer[(i + j) % n] += a * b;
            }
        }
        Self::from_parts(n, numer, &self.denom * &other.denom)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let numer = self.numer.iter().map(|c| c * factor.numer()).collect();
        Self::from_parts(self.order, numer, &self.denom * factor.denom())
    }

    /// Multiplication by `zeta^shift`, a rotation of the coefficient vector.
    pub fn rotate(&self, shift: i64) -> Self {
        let n = self.order as i64;
        let mut numer = vec![BigInt::zero(); self.order];
        for (j, c) in self.numer.iter().enumerate() {
            numer[(j as i64 + shift).rem_euclid(n) as usize] = c.clone();
        }
        CyclotomicElement { order: self.order, numer, denom: self.denom.clone() }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// The substitution `zeta -> zeta^c`. For `gcd(c, n) = 1` this is the
    /// Galois automorphism `sigma_c` of `Q(zeta_n)`.
    pub fn galois(&self, c: i64) -> Self {
        let n = self.order as i64;
        let mut numer = vec![BigInt::zero(); self.order];
        for (j, coeff) in self.numer.iter().enumerate() {
            numer[(j as i64 * c).rem_euclid(n) as usize] += coeff;
        }
        Self::from_parts(self.order, numer, self.denom.clone())
    }

    /// Re-expresses the element in `Q(zeta_m)` for a multiple `m` of the order.
    pub fn embed(&self, m: usize) -> Self {
        assert!(m % self.order == 0, "embedding needs a multiple of the order");
        let step = m / self.order;
        let mut numer = vec![BigInt::zero(); m];
        for (j, c) in self.numer.iter().enumerate() {
            numer[j * step] = c.clone();
        }
        CyclotomicElement { order: m, numer, denom: self.denom.clone() }
    }

    /// Canonical coefficients: the remainder modulo `Phi_n`, of length `phi(n)`.
    pub fn reduced(&self) -> Vec<Rational> {
        self.reduced_numerators()
            .into_iter()
            .map(|c| Rational::new(c, self.denom.clone()))
            .collect()
    }

    fn reduced_numerators(&self) -> Vec<BigInt> {
        let phi = cyclotomic_polynomial(self.order);
        let deg = phi.len() - 1;
        let mut rem = self.numer.clone();
        // Phi_n is monic with integer coefficients, so the remainder of an
        // integer polynomial stays integral.
        for top in (deg..rem.len()).rev() {
            let lead = std::mem::take(&mut rem[top]);
            if lead.is_zero() {
                continue;
            }
            for (k, p) in phi.iter().enumerate().take(deg) {
                if !p.is_zero() {
                    rem[top - deg + k] -= &lead * p;
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    /// Exact test: the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        let rem = self.reduced_numerators();
        if rem.iter().skip(1).all(Zero::is_zero) {
            let c0 = rem.into_iter().next().unwrap_or_default();
            Some(Rational::new(c0, self.denom.clone()))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.reduced_numerators().iter().all(Zero::is_zero)
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "cyclotomic elements of different orders; embed them first"
        );
    }
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        let m = self.order.lcm(&other.order);
        self.embed(m).sub(&other.embed(m)).is_zero()
    }
}

impl Eq for CyclotomicElement {}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})[", self.order)?;
        let mut first = true;
        for (j, c) in self.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})z^{j}")?;
        }
        if first {
            f.write_str("0")?;
        }
        f.write_str("]")
    }
}

/// Integer coefficients of `Phi_n`, constant term first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d of n.
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = -BigInt::one();
    poly[n] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        poly = exact_divide(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn exact_divide(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    debug_assert!(den[dn].is_one());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for top in (dn..num.len()).rev() {
        let lead = rem[top].clone();
        if lead.is_zero() {
            continue;
        }
        quot[top - dn] = lead.clone();
        for (k, c) in den.iter().enumerate() {
            rem[top - dn + k] -= &lead * c;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// `zeta_n^(j mod n)`.
pub fn root_of_unity(n: usize, j: i64) -> CyclotomicElement {
    assert!(n >= 1, "root_of_unity needs n >= 1");
    CyclotomicElement::monomial(n, j, Rational::one())
}

/// `(u + 1) / (u - 1)` for `u = zeta_n^t`, `u != 1`. Equals `-i cot(pi t / n)`.
fn cot_ratio(n: usize, t: i64) -> CyclotomicElement {
    let t = t.rem_euclid(n as i64) as usize;
    assert!(t != 0, "cot pole");
    let d = n / n.gcd(&t);
    // 1 + (2/d) sum_s s u^s, over the common denominator d
    let mut numer = vec![BigInt::zero(); n];
    numer[0] += BigInt::from(d);
    for s in 1..d {
        numer[(s * t) % n] += BigInt::from(2 * s);
    }
    CyclotomicElement::from_parts(n, numer, BigInt::from(d))
}

/// `sin^2(pi t / n)` as an element of `Q(zeta_n)`.
pub fn sin_squared(n: usize, t: i64) -> CyclotomicElement {
    let quarter = Rational::new(1, 4);
    let half = Rational::new(1, 2);
    CyclotomicElement::from_rational(n, &half)
        .sub(&root_of_unity(n, t).scale(&quarter))
        .sub(&root_of_unity(n, -t).scale(&quarter))
}

/// Precomputed cotangent products for one pair `(a, b)`, shared by all
/// weights `m`.
///
/// `value(m)` is `(2/a) sum_{j=1}^{a-1} cot(pi j b/a) cot(pi j/a) sin^2(pi j m/a)`.
#[derive(Debug, Clone)]
pub struct CotSumTable {
    a: usize,
    /// `cot(pi j b / a) cot(pi j / a)` for `j = 1..a`.
    products: Vec<CyclotomicElement>,
}

impl CotSumTable {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a <= 0 {
            return Err(Error::validation(format!("cot_sum needs a >= 1, got a = {a}")));
        }
        if a.gcd(&b) != 1 {
            return Err(Error::validation(format!(
                "cot_sum needs gcd(a, b) = 1, got a = {a}, b = {b}"
            )));
        }
        let n = a as usize;
        let products = (1..a)
            .map(|j| cot_ratio(n, j * b).mul(&cot_ratio(n, j)).neg())
            .collect();
        Ok(CotSumTable { a: n, products })
    }

    pub fn modulus(&self) -> usize {
        self.a
    }

    /// The sum as an element of `Q(zeta_a)`, before the rationality check.
    pub fn element(&self, m: i64) -> CyclotomicElement {
        let n = self.a;
        let mut acc = CyclotomicElement::zero(n);
        for (idx, p) in self.products.iter().enumerate() {
            let t = (idx as i64 + 1) * m;
            // P (2 - zeta^t - zeta^-t)
            acc = acc.add(&p.scale(&Rational::from_integer(2))).sub(&p.rotate(t)).sub(&p.rotate(-t));
        }
        // (2/a) * (1/4)
        acc.scale(&Rational::new(1, 2 * n as i64))
    }

    pub fn value(&self, m: i64) -> Rational {
        self.element(m)
            .as_rational()
            .expect("a Galois-stable cotangent sum is rational")
    }
}

/// `(2/a) sum_{j=1}^{a-1} cot(pi j b/a) cot(pi j/a) sin^2(pi j m/a)`, exactly.
///
/// Tables and values are memoised per `(a, b mod a)` and `m mod a`.
pub fn cot_sum(a: i64, b: i64, m: i64) -> Result<Rational> {
    type Cache = HashMap<(i64, i64), (Arc<CotSumTable>, HashMap<i64, Rational>)>;
    static CACHE: OnceLock<Mutex<Cache>> = OnceLock::new();
    if a <= 0 || a.gcd(&b) != 1 {
        return Ok(CotSumTable::new(a, b)?.value(m));
    }
    let key = (a, b.rem_euclid(a));
    let r = m.rem_euclid(a);
    let cache = CACHE.get_or_init(Default::default);
    let table = {
        let guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        match guard.get(&key) {
            Some((_, values)) if values.contains_key(&r) => return Ok(values[&r].clone()),
            Some((table, _)) => Some(table.clone()),
            None => None,
        }
    };
    let table = match table {
        Some(t) => t,
        None => Arc::new(CotSumTable::new(key.0, key.1)?),
    };
    let value = table.value(r);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    let entry = guard.entry(key).or_insert_with(|| (table, HashMap::new()));
    entry.1.insert(r, value.clone());
    Ok(value)
}

/// `sum_{j=1}^{p-1} cos(2 pi j m / p)`, computed in `Q(zeta_p)`.
pub fn cos_sum(p: u64, m: i64) -> i64 {
    assert!(p >= 1, "cos_sum needs p >= 1");
    let n = p as usize;
    let half = Rational::new(1, 2);
    let mut acc = CyclotomicElement::zero(n);
    for j in 1..p as i64 {
        acc = acc.add(&root_of_unity(n, j * m).add(&root_of_unity(n, -j * m)).scale(&half));
    }
    let value = acc
        .as_rational()
        .and_then(|r| r.to_i64())
        .expect("cosine sum over a full period is an integer");
    let closed_form = if p == 1 {
        0
    } else if m.rem_euclid(p as i64) == 0 {
        p as i64 - 1
    } else {
        -1
    };
    assert_eq!(value, closed_form, "cosine sum disagrees with its closed form");
    value
}
