//! Cyclotomic products `c * q^N * prod Phi_d^a_d` with exact evaluation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational_type::{Component, RationalType};
use crate::rootdata::{root_system_of, twisted_degrees};

/// Errors from order arithmetic and degree parsing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("cannot parse `{input}` at column {col}: {msg}")]
    Parse {
        input: String,
        col: usize,
        msg: String,
    },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("ell = {ell} divides q = {q}")]
    EllDividesQ { ell: u64, q: u64 },
    #[error("value at q = {q} is not a positive integer")]
    NotInteger { q: u64 },
    #[error("negative defect {0}: degree is not a divisor of the order")]
    NegativeDefect(i64),
    #[error("unsupported twist: {0}")]
    UnsupportedTwist(String),
}

/// Integer polynomial, coefficients from the constant term upwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    /// `t^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        IntPoly(c)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn trim(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly(out).trim()
    }

    /// Exact division by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree();
        if !divisor.0[dd].is_one() || self.degree() < dd {
            return None;
        }
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.0.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPoly(quot).trim())
        } else {
            None
        }
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }
}

/// The `d`-th cyclotomic polynomial by recursive division of `t^d - 1`.
pub fn cyclotomic(d: u32) -> IntPoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    let mut p = IntPoly::x_pow_minus_one(d as usize);
    for k in 1..d {
        if d.is_multiple_of(k) {
            p = p.div_exact(&cyclotomic(k)).expect("cyclotomic divisor");
        }
    }
    p
}

fn mobius(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `Phi_d(q)` as an integer, from `prod_{k | d} (q^k - 1)^mu(d/k)`.
pub fn cyclotomic_value(d: u32, q: &BigInt) -> BigInt {
    if d == 1 {
        return q - 1;
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 1..=d {
        if !d.is_multiple_of(k) {
            continue;
        }
        let term = q.pow(k) - 1u32;
        match mobius(d / k) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    num / den
}

/// A signed rational multiple of `q^N prod Phi_d^a_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenericOrder {
    scalar: BigRational,
    q_power: u32,
    cyclo: BTreeMap<u32, i32>,
}

impl Default for GenericOrder {
    fn default() -> Self {
        Self::one()
    }
}

impl GenericOrder {
    pub fn one() -> Self {
        GenericOrder {
            scalar: BigRational::one(),
            q_power: 0,
            cyclo: BTreeMap::new(),
        }
    }

    pub fn new(scalar: BigRational, q_power: u32, cyclo: BTreeMap<u32, i32>) -> Self {
        let mut g = GenericOrder {
            scalar,
            q_power,
            cyclo,
        };
        g.cyclo.retain(|_, a| *a != 0);
        g
    }

    pub fn q_pow(n: u32) -> Self {
        GenericOrder {
            q_power: n,
            ..Self::one()
        }
    }

    pub fn phi(d: u32, a: i32) -> Self {
        assert!(d >= 1);
        Self::new(BigRational::one(), 0, BTreeMap::from([(d, a)]))
    }

    pub fn from_scalar(r: BigRational) -> Self {
        GenericOrder {
            scalar: r,
            ..Self::one()
        }
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn q_power(&self) -> u32 {
        self.q_power
    }

    pub fn cyclo(&self) -> &BTreeMap<u32, i32> {
        &self.cyclo
    }

    /// Multiplicity of `Phi_d`.
    pub fn multiplicity(&self, d: u32) -> i32 {
        self.cyclo.get(&d).copied().unwrap_or(0)
    }

    /// True for scalar 1 and nonnegative multiplicities.
    pub fn is_order_shape(&self) -> bool {
        self.scalar.is_one() && self.cyclo.values().all(|&a| a > 0)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Drop the `q` power and scalar, keeping the cyclotomic part.
    pub fn cyclotomic_part(&self) -> Self {
        Self::new(BigRational::one(), 0, self.cyclo.clone())
    }

    /// Exact value at `q`.
    pub fn eval(&self, q: &BigInt) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (&d, &a) in &self.cyclo {
            let v = cyclotomic_value(d, q).pow(a.unsigned_abs());
            if a > 0 {
                num *= v;
            } else {
                den *= v;
            }
        }
        num *= q.pow(self.q_power);
        self.scalar.clone() * BigRational::new(num, den)
    }

    /// Value at `q` as a positive integer.
    pub fn eval_positive_int(&self, q: u64) -> Result<BigUint, OrderError> {
        let v = self.eval(&BigInt::from(q));
        if v.is_integer() && v.is_positive() {
            Ok(v.to_integer().to_biguint().expect("positive"))
        } else {
            Err(OrderError::NotInteger { q })
        }
    }

    /// Expanded polynomial times the scalar, for integer-scalar values only.
    pub fn expand(&self) -> Option<IntPoly> {
        if !self.scalar.is_integer() || self.cyclo.values().any(|&a| a < 0) {
            return None;
        }
        let mut p = IntPoly::one();
        for (&d, &a) in &self.cyclo {
            let c = cyclotomic(d);
            for _ in 0..a {
                p = p.mul(&c);
            }
        }
        let mut shift = vec![BigInt::zero(); self.q_power as usize];
        shift.extend(p.0.iter().map(|c| c * self.scalar.to_integer()));
        Some(IntPoly(shift).trim())
    }

    /// Ennola image in positive form: relabel `Phi_d` as under `q -> -q`, keep the scalar.
    ///
    /// The sign produced by the substitution is returned by [`ennola_sign`].
    pub fn ennola(&self) -> Self {
        let cyclo = self
            .cyclo
            .iter()
            .map(|(&d, &a)| (ennola_index(d), a))
            .collect();
        Self::new(self.scalar.clone(), self.q_power, cyclo)
    }

    /// Sign of `f(-q)` relative to the relabelled product: `(-1)^(N + a_1 + a_2)`.
    pub fn ennola_sign(&self) -> i32 {
        let s = self.q_power as i64 + self.multiplicity(1) as i64 + self.multiplicity(2) as i64;
        if s.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// The literal substitution `q -> -q`, sign kept in the scalar.
    pub fn ennola_exact(&self) -> Self {
        let mut out = self.ennola();
        if self.ennola_sign() < 0 {
            out.scalar = -out.scalar;
        }
        out
    }

    /// Write the torus-style form `Phi1^2Phi2` used inside rational-type labels.
    pub fn torus_label(&self) -> String {
        let mut s = String::new();
        for (&d, &a) in &self.cyclo {
            s.push_str(&format!("Phi{d}"));
            if a != 1 {
                s.push_str(&format!("^{a}"));
            }
        }
        s
    }
}

/// Index map of `Phi_d` under `q -> -q`.
pub fn ennola_index(d: u32) -> u32 {
    if d % 2 == 1 {
        2 * d
    } else if d % 4 == 2 {
        d / 2
    } else {
        d
    }
}

impl Mul for &GenericOrder {
    type Output = GenericOrder;

    fn mul(self, rhs: &GenericOrder) -> GenericOrder {
        let mut cyclo = self.cyclo.clone();
        for (&d, &a) in &rhs.cyclo {
            *cyclo.entry(d).or_insert(0) += a;
        }
        GenericOrder::new(
            &self.scalar * &rhs.scalar,
            self.q_power + rhs.q_power,
            cyclo,
        )
    }
}

impl Mul for GenericOrder {
    type Output = GenericOrder;

    fn mul(self, rhs: GenericOrder) -> GenericOrder {
        &self * &rhs
    }
}

impl Div for &GenericOrder {
    type Output = GenericOrder;

    /// Quotient; the `q` power saturates at zero.
    fn div(self, rhs: &GenericOrder) -> GenericOrder {
        let mut cyclo = self.cyclo.clone();
        for (&d, &a) in &rhs.cyclo {
            *cyclo.entry(d).or_insert(0) -= a;
        }
        GenericOrder::new(
            &self.scalar / &rhs.scalar,
            self.q_power.saturating_sub(rhs.q_power),
            cyclo,
        )
    }
}

impl fmt::Display for GenericOrder {
    /// Canonical degree-expression form, e.g. `1/3*q^7*Phi1^6*Phi2^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scalar.is_negative() {
            write!(f, "-")?;
        }
        let abs = self.scalar.abs();
        if !abs.is_one() {
            write!(f, "{}/{}*", abs.numer(), abs.denom())?;
        }
        write!(f, "q^{}", self.q_power)?;
        for (&d, &a) in &self.cyclo {
            write!(f, "*Phi{d}")?;
            if a != 1 {
                write!(f, "^{a}")?;
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    input: &'a str,
    bytes: Vec<u8>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: &str) -> OrderError {
        OrderError::Parse {
            input: self.input.to_string(),
            col: self.pos + 1,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.bytes[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt, OrderError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        Ok(s.parse().expect("digits"))
    }

    fn small(&mut self) -> Result<u32, OrderError> {
        self.int()?
            .to_u32()
            .ok_or_else(|| self.err("integer too large"))
    }
}

impl FromStr for GenericOrder {
    type Err = OrderError;

    /// Grammar: `[+-]? [INT '/' INT '*']? 'q^' INT ('*' 'Phi' INT ('^' INT)?)*`,
    /// whitespace-insensitive. An integer scalar `INT '*'` is also accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cur = Cursor {
            input: s,
            bytes: compact.into_bytes(),
            pos: 0,
        };
        let mut sign = BigInt::one();
        if cur.eat(b'-') {
            sign = -sign;
        } else {
            cur.eat(b'+');
        }
        let mut scalar = BigRational::from_integer(sign);
        if cur.peek().is_some_and(|b| b.is_ascii_digit()) {
            let num = cur.int()?;
            let den = if cur.eat(b'/') {
                cur.int()?
            } else {
                BigInt::one()
            };
            if den.is_zero() {
                return Err(cur.err("zero denominator"));
            }
            if !cur.eat(b'*') {
                return Err(cur.err("expected `*` after scalar"));
            }
            scalar *= BigRational::new(num, den);
        }
        if !cur.eat_str("q^") {
            return Err(cur.err("expected `q^`"));
        }
        let q_power = cur.small()?;
        let mut cyclo = BTreeMap::new();
        while cur.eat(b'*') {
            if !cur.eat_str("Phi") {
                return Err(cur.err("expected `Phi`"));
            }
            let d = cur.small()?;
            if d == 0 {
                return Err(cur.err("Phi index must be positive"));
            }
            let a: i32 = if cur.eat(b'^') {
                let neg = cur.eat(b'-');
                let v = cur.small()? as i32;
                if neg {
                    -v
                } else {
                    v
                }
            } else {
                1
            };
            *cyclo.entry(d).or_insert(0) += a;
        }
        if cur.pos != cur.bytes.len() {
            return Err(cur.err("trailing input"));
        }
        Ok(GenericOrder::new(scalar, q_power, cyclo))
    }
}

/// True if `n` is prime.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// The prime `p` with `q = p^k`, if any.
pub fn prime_power_base(q: u64) -> Option<u64> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|p| q.is_multiple_of(*p))?;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1).then_some(p)
}

/// `l`-adic valuation of a positive integer.
pub fn valuation(n: &BigUint, ell: u64) -> u32 {
    let mut v = 0;
    let ell = BigUint::from(ell);
    let mut m = n.clone();
    while !m.is_zero() && (&m % &ell).is_zero() {
        m /= &ell;
        v += 1;
    }
    v
}

/// Largest power of `ell` dividing `n`.
pub fn ell_part(n: &BigUint, ell: u64) -> BigUint {
    BigUint::from(ell).pow(valuation(n, ell))
}

/// `e_l(q)`: order of `q` modulo `l`, or modulo 4 when `l = 2`.
pub fn e_of(ell: u64, q: u64) -> Result<u32, OrderError> {
    if !is_prime(ell) {
        return Err(OrderError::NotPrime(ell));
    }
    if q.is_multiple_of(ell) {
        return Err(OrderError::EllDividesQ { ell, q });
    }
    let modulus = if ell == 2 { 4 } else { ell };
    let base = q % modulus;
    let mut x = base;
    let mut e = 1;
    while x != 1 {
        x = x * base % modulus;
        e += 1;
    }
    Ok(e)
}

/// A prime `ell`, a prime power `q` coprime to it, and `e = e_l(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EllAdicContext {
    pub ell: u64,
    pub q: u64,
    pub e: u32,
}

impl EllAdicContext {
    pub fn new(ell: u64, q: u64) -> Result<Self, OrderError> {
        if prime_power_base(q).is_none() {
            return Err(OrderError::NotPrimePower(q));
        }
        let e = e_of(ell, q)?;
        Ok(EllAdicContext { ell, q, e })
    }

    /// `v_l` of an order or degree evaluated at this `q`.
    pub fn valuation_of(&self, g: &GenericOrder) -> Result<u32, OrderError> {
        Ok(valuation(&g.eval_positive_int(self.q)?, self.ell))
    }
}

/// `v_l(|G|(q)) - v_l(deg(q))`.
pub fn defect(
    degree: &GenericOrder,
    order: &GenericOrder,
    ctx: &EllAdicContext,
) -> Result<u32, OrderError> {
    let d = ctx.valuation_of(order)? as i64 - ctx.valuation_of(degree)? as i64;
    if d < 0 {
        return Err(OrderError::NegativeDefect(d));
    }
    Ok(d as u32)
}

/// Accumulates `prod (q^m - 1)^k` and converts it to cyclotomic form.
#[derive(Default)]
struct BinomialProduct {
    terms: BTreeMap<u32, i32>,
}

impl BinomialProduct {
    fn minus(&mut self, m: u32, k: i32) {
        *self.terms.entry(m).or_insert(0) += k;
    }

    /// `q^m - eps`, `eps = +-1`.
    fn factor(&mut self, m: u32, eps: i8) {
        if eps > 0 {
            self.minus(m, 1);
        } else {
            self.minus(2 * m, 1);
            self.minus(m, -1);
        }
    }

    fn into_order(self, q_power: u32) -> GenericOrder {
        let mut cyclo = BTreeMap::new();
        for (m, k) in self.terms {
            for d in 1..=m {
                if m % d == 0 {
                    *cyclo.entry(d).or_insert(0) += k;
                }
            }
        }
        GenericOrder::new(BigRational::one(), q_power, cyclo)
    }
}

/// Order of one simple factor over `F_{q^k}`.
pub fn component_order(c: &Component) -> Result<GenericOrder, OrderError> {
    let rs = root_system_of(c.cartan_type);
    let n_pos = rs.num_positive() as u32;
    let k = c.field;
    let mut prod = BinomialProduct::default();
    if c.twist == 3 {
        if c.cartan_type.to_string() != "D4" {
            return Err(OrderError::UnsupportedTwist(format!("3{}", c.cartan_type)));
        }
        // q^12 (q^2-1)(q^6-1)(q^8+q^4+1) with q^8+q^4+1 = (q^12-1)/(q^4-1).
        prod.minus(2 * k, 1);
        prod.minus(6 * k, 1);
        prod.minus(12 * k, 1);
        prod.minus(4 * k, -1);
    } else {
        let degs = twisted_degrees(&rs, c.twist)
            .map_err(|_| OrderError::UnsupportedTwist(format!("{}{}", c.twist, c.cartan_type)))?;
        for (d, eps) in degs {
            prod.factor(d * k, eps);
        }
    }
    Ok(prod.into_order(n_pos * k))
}

/// `|G^F|` of a rational type: product of its factors and its torus part.
///
/// A component-group extension such as `.2` is not counted.
pub fn group_order(rt: &RationalType) -> Result<GenericOrder, OrderError> {
    let mut out = rt.torus();
    for c in &rt.components() {
        let o = component_order(c)?;
        for _ in 0..c.power {
            out = &out * &o;
        }
    }
    Ok(out)
}

/// `q^m - 1` for positive `m`, as a big integer.
pub fn q_pow_minus_one(q: u64, m: u32) -> BigInt {
    BigInt::from(q).pow(m) - 1u32
}

/// Greatest common divisor helper for small integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
