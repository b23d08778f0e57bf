//! Exact arithmetic in `F_p` and its extensions `F_{p^n}`.
//!
//! A [`Field`] is an interned handle: [`make_field`] returns the same handle
//! for the same `(p, degree)`, so field equality is pointer equality and
//! elements can carry their field without reference counting. Elements are
//! dense little-endian coefficient vectors over `F_p` modulo the
//! lexicographically smallest monic irreducible polynomial of the degree.

mod embed;
pub(crate) mod poly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use embed::{embed, Embedding};

/// Extension degrees up to this size keep their coefficients inline.
pub const INLINE_DEGREE: usize = 12;

pub(crate) type Coeffs = SmallVec<[u32; INLINE_DEGREE]>;

const MAX_CHARACTERISTIC: u64 = (1 << 31) - 1;
const SMALL_P: u32 = 1 << 16;

pub struct FieldDesc {
    p: u32,
    degree: usize,
    modulus: Vec<u32>,
    /// `(p - modulus[i]) mod p` for `i < degree`.
    neg_low: Vec<u64>,
    order: BigUint,
    /// `frob_rows[i] = x^{i p} mod modulus`.
    frob_rows: Vec<Coeffs>,
    /// Inverses of `1..p` when `p` is small.
    inv_table: Vec<u32>,
    sqrt: OnceLock<SqrtData>,
}

struct SqrtData {
    /// `order - 1 = 2^s * t` with `t` odd.
    s: u32,
    t: BigUint,
    half: BigUint,
    nonresidue: Coeffs,
}

/// Interned handle to a finite field `F_{p^degree}`.
#[derive(Clone, Copy)]
pub struct Field(&'static FieldDesc);

static REGISTRY: Mutex<BTreeMap<(u32, usize), &'static FieldDesc>> = Mutex::new(BTreeMap::new());

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds (or fetches) `F_{p^degree}` with the lexicographically smallest monic
/// irreducible modulus, scanning with the constant term varying fastest.
pub fn make_field(p: u64, degree: usize) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > MAX_CHARACTERISTIC {
        return Err(Error::UnsupportedCharacteristic(p.min(u32::MAX as u64) as u32));
    }
    if degree == 0 {
        return Err(Error::ZeroDegree);
    }
    let p32 = p as u32;
    let mut reg = REGISTRY.lock().expect("field registry poisoned");
    if let Some(desc) = reg.get(&(p32, degree)) {
        return Ok(Field(desc));
    }
    let modulus = smallest_irreducible(p, degree);
    let desc: &'static FieldDesc = Box::leak(Box::new(FieldDesc::new(p32, modulus)));
    reg.insert((p32, degree), desc);
    Ok(Field(desc))
}

fn smallest_irreducible(p: u64, degree: usize) -> Vec<u64> {
    if degree == 1 {
        return vec![0, 1];
    }
    let mut low = vec![0u64; degree];
    loop {
        let mut f = low.clone();
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
        // odometer, constant term fastest
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
            assert!(i < degree, "no irreducible polynomial found");
        }
    }
}

impl FieldDesc {
    fn new(p: u32, modulus: Vec<u64>) -> Self {
        let degree = modulus.len() - 1;
        let pp = p as u64;
        let neg_low = modulus[..degree].iter().map(|&c| (pp - c) % pp).collect();
        let order = BigUint::from(p).pow(degree as u32);
        let inv_table = if p < SMALL_P {
            let mut t = vec![0u32; p as usize];
            for a in 1..p as u64 {
                t[a as usize] = poly::inv_mod_p(a, pp) as u32;
            }
            t
        } else {
            Vec::new()
        };
        let mut frob_rows = Vec::with_capacity(degree);
        let xp = poly::powmod(&[0, 1], pp, &modulus, pp);
        let mut cur = vec![1u64];
        for _ in 0..degree {
            let mut row: Coeffs = SmallVec::from_elem(0, degree);
            for (i, &c) in cur.iter().enumerate() {
                row[i] = c as u32;
            }
            frob_rows.push(row);
            cur = poly::mulmod(&cur, &xp, &modulus, pp);
        }
        FieldDesc {
            p,
            degree,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            neg_low,
            order,
            frob_rows,
            inv_table,
            sqrt: OnceLock::new(),
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}
impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.degree.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.degree == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.degree)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serialized form of a field: `{p, degree, modulus: [c0, ..., 1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub degree: usize,
    pub modulus: Vec<u64>,
}

impl Field {
    pub fn characteristic(self) -> u32 {
        self.0.p
    }

    pub fn degree(self) -> usize {
        self.0.degree
    }

    /// Monic modulus, little-endian, length `degree + 1`.
    pub fn modulus(self) -> &'static [u32] {
        &self.0.modulus
    }

    pub fn order(self) -> &'static BigUint {
        &self.0.order
    }

    /// Field size when it fits in a `u64`.
    pub fn size(self) -> Option<u64> {
        self.0.order.to_u64()
    }

    pub fn spec(self) -> FieldSpec {
        FieldSpec {
            p: self.0.p as u64,
            degree: self.0.degree,
            modulus: self.0.modulus.iter().map(|&c| c as u64).collect(),
        }
    }

    /// Rebuilds a field from its serialized description, rejecting moduli
    /// other than the canonical one.
    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        let f = make_field(spec.p, spec.degree)?;
        let canonical: Vec<u64> = f.spec().modulus;
        if canonical != spec.modulus {
            return Err(Error::Parse(format!(
                "modulus {:?} is not the canonical modulus {:?} of {}",
                spec.modulus, canonical, f
            )));
        }
        Ok(f)
    }

    /// Whether `self` is a subfield of `other` (same characteristic, degree divides).
    pub fn divides(self, other: Field) -> bool {
        self.0.p == other.0.p && other.0.degree.is_multiple_of(self.0.degree)
    }

    pub fn zero(self) -> FieldElem {
        FieldElem { field: self, c: SmallVec::from_elem(0, self.0.degree) }
    }

    pub fn one(self) -> FieldElem {
        let mut e = self.zero();
        e.c[0] = 1;
        e
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(self, v: i64) -> FieldElem {
        let mut e = self.zero();
        e.c[0] = v.rem_euclid(self.0.p as i64) as u32;
        e
    }

    /// The class of `x` (the root of the modulus).
    pub fn generator(self) -> FieldElem {
        if self.0.degree == 1 {
            return self.zero();
        }
        let mut e = self.zero();
        e.c[1] = 1;
        e
    }

    pub fn from_coeffs(self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.0.degree {
            return Err(Error::InvalidElement(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.0.degree
            )));
        }
        let mut e = self.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.0.p as u64 {
                return Err(Error::InvalidElement(format!("coefficient {c} not reduced mod {}", self.0.p)));
            }
            e.c[i] = c as u32;
        }
        Ok(e)
    }

    /// Element whose base-`p` digits (constant term least significant) spell `index`.
    pub fn from_index(self, mut index: u64) -> FieldElem {
        let mut e = self.zero();
        let p = self.0.p as u64;
        for i in 0..self.0.degree {
            e.c[i] = (index % p) as u32;
            index /= p;
        }
        e
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> FieldElem {
        let mut e = self.zero();
        for c in e.c.iter_mut() {
            *c = rng.gen_range(0..self.0.p);
        }
        e
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> FieldElem {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// All elements in canonical (index) order. Callers are responsible for
    /// guarding the field size.
    pub fn elements(self) -> Elements {
        Elements { next: Some(self.zero()) }
    }

    fn sqrt_data(self) -> &'static SqrtData {
        self.0.sqrt.get_or_init(|| {
            let qm1 = &self.0.order - 1u32;
            let s = qm1.trailing_zeros().unwrap_or(0) as u32;
            let t = &qm1 >> s;
            let half = &qm1 >> 1;
            let minus_one = self.one().neg();
            let nonresidue = self
                .elements()
                .skip(1)
                .find(|z| z.pow_big(&half) == minus_one)
                .expect("odd-order field has a non-residue")
                .c;
            SqrtData { s, t, half, nonresidue }
        })
    }
}

pub struct Elements {
    next: Option<FieldElem>,
}

impl Iterator for Elements {
    type Item = FieldElem;
    fn next(&mut self) -> Option<FieldElem> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        let p = cur.field.0.p;
        let mut i = 0;
        let done = loop {
            if i == nxt.c.len() {
                break true;
            }
            nxt.c[i] += 1;
            if nxt.c[i] < p {
                break false;
            }
            nxt.c[i] = 0;
            i += 1;
        };
        if !done {
            self.next = Some(nxt);
        }
        Some(cur)
    }
}

/// An element of an interned field.
#[derive(Clone)]
pub struct FieldElem {
    field: Field,
    c: Coeffs,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.c == other.c
    }
}
impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

/// Canonical order: by field degree, then as base-`p` integers with the
/// leading coefficient most significant.
impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field.0.degree.cmp(&other.field.0.degree).then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "[")?;
            for (i, c) in self.c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `a^n` where `b` must be a prime-field element read as the integer `n`.
    Pow,
}

/// Checked binary arithmetic, the fallible counterpart of the operators.
pub fn field_arith(a: &FieldElem, b: &FieldElem, op: FieldOp) -> Result<FieldElem> {
    if op != FieldOp::Pow && a.field != b.field {
        return Err(Error::MixedFields);
    }
    Ok(match op {
        FieldOp::Add => a + b,
        FieldOp::Sub => a - b,
        FieldOp::Mul => a * b,
        FieldOp::Div => a.checked_div(b)?,
        FieldOp::Pow => {
            if b.c.iter().skip(1).any(|&c| c != 0) {
                return Err(Error::InvalidElement("exponent must lie in the prime field".into()));
            }
            a.pow(b.c[0] as u64)
        }
    })
}

impl FieldElem {
    pub fn field(&self) -> Field {
        self.field
    }

    /// Little-endian coefficients over `F_p`.
    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&c| c == 0)
    }

    /// Whether the element lies in the prime subfield.
    pub fn in_prime_field(&self) -> bool {
        self.c[1..].iter().all(|&c| c == 0)
    }

    /// Base-`p` integer value, when it fits in a `u64`.
    pub fn index(&self) -> Option<u64> {
        let p = self.field.0.p as u64;
        let mut acc: u64 = 0;
        for &c in self.c.iter().rev() {
            acc = acc.checked_mul(p)?.checked_add(c as u64)?;
        }
        Some(acc)
    }

    pub fn coeffs_u64(&self) -> Vec<u64> {
        self.c.iter().map(|&c| c as u64).collect()
    }

    #[inline]
    fn same_field(&self, other: &FieldElem) {
        assert!(self.field == other.field, "operands live in different fields: {} vs {}", self.field, other.field);
    }

    fn add_raw(&self, other: &FieldElem) -> FieldElem {
        self.same_field(other);
        let p = self.field.0.p;
        let mut c = self.c.clone();
        for (x, &y) in c.iter_mut().zip(other.c.iter()) {
            let s = *x + y;
            *x = if s >= p { s - p } else { s };
        }
        FieldElem { field: self.field, c }
    }

    fn sub_raw(&self, other: &FieldElem) -> FieldElem {
        self.same_field(other);
        let p = self.field.0.p;
        let mut c = self.c.clone();
        for (x, &y) in c.iter_mut().zip(other.c.iter()) {
            *x = if *x >= y { *x - y } else { *x + p - y };
        }
        FieldElem { field: self.field, c }
    }

    fn neg_raw(&self) -> FieldElem {
        let p = self.field.0.p;
        let mut c = self.c.clone();
        for x in c.iter_mut() {
            if *x != 0 {
                *x = p - *x;
            }
        }
        FieldElem { field: self.field, c }
    }

    fn mul_raw(&self, other: &FieldElem) -> FieldElem {
        self.same_field(other);
        let desc = self.field.0;
        let n = desc.degree;
        let p = desc.p as u64;
        if n == 1 {
            let mut c = self.c.clone();
            c[0] = ((self.c[0] as u64 * other.c[0] as u64) % p) as u32;
            return FieldElem { field: self.field, c };
        }
        let mut acc: SmallVec<[u64; 2 * INLINE_DEGREE]> = SmallVec::from_elem(0, 2 * n - 1);
        let small = desc.p < SMALL_P;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u64;
            for (j, &b) in other.c.iter().enumerate() {
                if small {
                    acc[i + j] += a * b as u64;
                } else {
                    acc[i + j] = (acc[i + j] + a * b as u64 % p) % p;
                }
            }
        }
        for k in (n..2 * n - 1).rev() {
            let top = acc[k] % p;
            if top == 0 {
                continue;
            }
            let base = k - n;
            for (j, &nm) in desc.neg_low.iter().enumerate() {
                if small {
                    acc[base + j] += top * nm;
                } else {
                    acc[base + j] = (acc[base + j] + top * nm % p) % p;
                }
            }
        }
        let c = acc[..n].iter().map(|&v| (v % p) as u32).collect();
        FieldElem { field: self.field, c }
    }

    pub fn square(&self) -> FieldElem {
        self.mul_raw(self)
    }

    fn inv_prime(&self, a: u32) -> u32 {
        let desc = self.field.0;
        if desc.p < SMALL_P {
            desc.inv_table[a as usize]
        } else {
            poly::inv_mod_p(a as u64, desc.p as u64) as u32
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let desc = self.field.0;
        let n = desc.degree;
        let p = desc.p as u64;
        if n == 1 {
            let mut c = self.c.clone();
            c[0] = self.inv_prime(self.c[0]);
            return Ok(FieldElem { field: self.field, c });
        }
        // Extended Euclid on (modulus, self), tracking the cofactor of self.
        type Buf = SmallVec<[u64; INLINE_DEGREE + 1]>;
        let mut r0: Buf = desc.modulus.iter().map(|&c| c as u64).collect();
        let mut r1: Buf = self.c.iter().map(|&c| c as u64).collect();
        r1.push(0);
        let mut s0: Buf = SmallVec::from_elem(0, n + 1);
        let mut s1: Buf = SmallVec::from_elem(0, n + 1);
        s1[0] = 1;
        let deg = |v: &Buf| v.iter().rposition(|&c| c != 0);
        let mut d1 = deg(&r1).expect("nonzero");
        while d1 > 0 {
            while let Some(dd0) = deg(&r0).filter(|&d| d >= d1) {
                let c = r0[dd0] * self.inv_prime(r1[d1] as u32) as u64 % p;
                let shift = dd0 - d1;
                let negc = p - c;
                for j in 0..=d1 {
                    r0[shift + j] = (r0[shift + j] + negc * r1[j]) % p;
                }
                for j in 0..=n - shift {
                    if s1[j] != 0 {
                        s0[shift + j] = (s0[shift + j] + negc * s1[j]) % p;
                    }
                }
            }
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
            d1 = match deg(&r1) {
                Some(d) => d,
                None => unreachable!("modulus is irreducible"),
            };
        }
        let k = self.inv_prime(r1[0] as u32) as u64;
        let c = s1[..n].iter().map(|&v| (v * k % p) as u32).collect();
        Ok(FieldElem { field: self.field, c })
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        Ok(self.mul_raw(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut result = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_raw(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    pub fn pow_big(&self, e: &BigUint) -> FieldElem {
        let mut result = self.field.one();
        for i in (0..e.bits()).rev() {
            result = result.square();
            if e.bit(i) {
                result = result.mul_raw(self);
            }
        }
        result
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self) -> FieldElem {
        let desc = self.field.0;
        let n = desc.degree;
        if n == 1 {
            return self.clone();
        }
        let p = desc.p as u64;
        let mut acc: SmallVec<[u64; INLINE_DEGREE]> = SmallVec::from_elem(0, n);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &r) in desc.frob_rows[i].iter().enumerate() {
                acc[j] = (acc[j] + a as u64 * r as u64) % p;
            }
        }
        let c = acc.iter().map(|&v| v as u32).collect();
        FieldElem { field: self.field, c }
    }

    /// `a^{q^i}` for `q` a power of the characteristic.
    pub fn frobenius_power(&self, q: u64, i: u64) -> Result<FieldElem> {
        let e = characteristic_exponent(q, self.field.0.p)?;
        let n = self.field.0.degree as u64;
        let total = ((e % n) * (i % n)) % n;
        let mut out = self.clone();
        for _ in 0..total {
            out = out.frobenius();
        }
        Ok(out)
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self) -> Result<bool> {
        if self.field.0.p == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        if self.is_zero() {
            return Ok(true);
        }
        Ok(self.pow_big(&self.field.sqrt_data().half).is_one())
    }

    /// Canonical square root (the smaller of `r`, `-r`) or `None` for a non-residue.
    pub fn sqrt(&self) -> Result<Option<FieldElem>> {
        if self.field.0.p == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        let sd = self.field.sqrt_data();
        if !self.pow_big(&sd.half).is_one() {
            return Ok(None);
        }
        // Tonelli-Shanks
        let mut m = sd.s;
        let mut c = FieldElem { field: self.field, c: sd.nonresidue.clone() }.pow_big(&sd.t);
        let mut t = self.pow_big(&sd.t);
        let mut r = self.pow_big(&((&sd.t + 1u32) >> 1));
        while !t.is_one() {
            let mut i = 0;
            let mut tt = t.clone();
            while !tt.is_one() {
                tt = tt.square();
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            t = t.mul_raw(&c);
            r = r.mul_raw(&b);
        }
        let neg = r.neg_raw();
        Ok(Some(if neg < r { neg } else { r }))
    }
}

/// `e` with `q = p^e`.
pub fn characteristic_exponent(q: u64, p: u32) -> Result<u64> {
    let p64 = p as u64;
    if q < p64 {
        return Err(Error::NotCharacteristicPower { q, p });
    }
    let mut e = 0;
    let mut v = q;
    while v > 1 {
        let (d, r) = v.div_rem(&p64);
        if r != 0 {
            return Err(Error::NotCharacteristicPower { q, p });
        }
        v = d;
        e += 1;
    }
    Ok(e)
}

macro_rules! binop {
    ($tr:ident, $method:ident, $raw:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            #[inline]
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$raw(rhs)
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            #[inline]
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$raw(&rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            #[inline]
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$raw(rhs)
            }
        }
        impl $tr<FieldElem> for &FieldElem {
            type Output = FieldElem;
            #[inline]
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$raw(&rhs)
            }
        }
    };
}

binop!(Add, add, add_raw);
binop!(Sub, sub, sub_raw);
binop!(Mul, mul, mul_raw);

impl Div<&FieldElem> for &FieldElem {
    type Output = FieldElem;
    /// Panics on division by zero; use [`FieldElem::checked_div`] otherwise.
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div<FieldElem> for FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: FieldElem) -> FieldElem {
        &self / &rhs
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_raw()
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_raw()
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &FieldElem) {
        *self = self.add_raw(rhs);
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, rhs: &FieldElem) {
        *self = self.sub_raw(rhs);
    }
}

impl MulAssign<&FieldElem> for FieldElem {
    fn mul_assign(&mut self, rhs: &FieldElem) {
        *self = self.mul_raw(rhs);
    }
}

/// JSON form of an element: a bare integer for prime fields, otherwise the
/// little-endian coefficient array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRepr {
    Scalar(u64),
    Coeffs(Vec<u64>),
}

impl FieldElem {
    pub fn to_repr(&self) -> ElemRepr {
        if self.c.len() == 1 {
            ElemRepr::Scalar(self.c[0] as u64)
        } else {
            ElemRepr::Coeffs(self.coeffs_u64())
        }
    }
}

impl Field {
    pub fn parse(self, repr: &ElemRepr) -> Result<FieldElem> {
        match repr {
            ElemRepr::Scalar(v) => self.from_coeffs(&[*v]),
            ElemRepr::Coeffs(v) => self.from_coeffs(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.modulus(), &[0, 1]);
        assert_eq!(&f5.from_int(3) * &f5.from_int(4), f5.from_int(2));
        assert_eq!(f5.from_int(2).inv().unwrap(), f5.from_int(3));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(5, 0).unwrap_err(), Error::ZeroDegree);
    }

    #[test]
    fn f25_modulus_is_smallest_irreducible() {
        let f25 = make_field(5, 2).unwrap();
        assert_eq!(f25.modulus(), &[2, 0, 1]);
    }

    #[test]
    fn interned_handles_are_equal() {
        assert_eq!(make_field(7, 3).unwrap(), make_field(7, 3).unwrap());
        assert_ne!(make_field(7, 3).unwrap(), make_field(7, 2).unwrap());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = make_field(5, 2).unwrap();
        assert_eq!(f.zero().inv().unwrap_err(), Error::DivisionByZero);
        assert_eq!(field_arith(&f.one(), &f.zero(), FieldOp::Div).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = make_field(5, 1).unwrap().one();
        let b = make_field(5, 2).unwrap().one();
        assert_eq!(field_arith(&a, &b, FieldOp::Add).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn sqrt_in_f5() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.from_int(4).sqrt().unwrap(), Some(f5.from_int(2)));
        assert_eq!(f5.from_int(2).sqrt().unwrap(), None);
        assert_eq!(f5.from_int(0).sqrt().unwrap(), Some(f5.zero()));
    }

    #[test]
    fn sqrt_rejects_characteristic_two() {
        let f2 = make_field(2, 3).unwrap();
        assert_eq!(f2.one().sqrt().unwrap_err(), Error::UnsupportedCharacteristic(2));
    }

    #[test]
    fn frobenius_power_requires_characteristic_power() {
        let f = make_field(5, 2).unwrap();
        assert!(matches!(f.one().frobenius_power(6, 1), Err(Error::NotCharacteristicPower { .. })));
    }

    #[test]
    fn elements_enumerate_in_index_order() {
        let f = make_field(3, 2).unwrap();
        let all: Vec<_> = f.elements().collect();
        assert_eq!(all.len(), 9);
        for (i, e) in all.iter().enumerate() {
            assert_eq!(e.index(), Some(i as u64));
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
